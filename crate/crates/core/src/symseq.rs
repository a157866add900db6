//! Symmetric sequences, the composition product, and the Schur functors
//! `D_n^A(X) = (A(n) ⊗ X^{⊗n})_{Σ_n}` and `Sym_A`.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::complex::{ChainComplex, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{Accumulator, RationalMatrix, SparseVec};
use crate::perm::{rgs_blocks, set_partitions, CycleType};
use crate::rational::Q;
use crate::sigma::{CharacterTable, SigmaComplex, SymmetrizerReport};

/// A basis element of a chain complex: `(degree, index within degree)`.
pub type BasisElt = (i32, usize);

fn sign_q(odd: bool) -> Q {
    if odd {
        Q::from_int(-1)
    } else {
        Q::one()
    }
}

fn flat_basis(c: &ChainComplex) -> Vec<BasisElt> {
    c.degrees()
        .flat_map(|k| (0..c.dim(k)).map(move |i| (k, i)))
        .collect()
}

/// A direct sum of tensor products of complexes with an explicit basis of
/// tuples. Degree `n` lists summands in order, and within a summand the tuples
/// in lexicographic order of the factors' flat bases.
pub(crate) struct TensorSum<'a> {
    summands: Vec<Vec<&'a ChainComplex>>,
    basis: BTreeMap<i32, Vec<(usize, Vec<BasisElt>)>>,
    index: FxHashMap<(usize, Vec<BasisElt>), usize>,
}

impl<'a> TensorSum<'a> {
    pub(crate) fn new(summands: Vec<Vec<&'a ChainComplex>>) -> TensorSum<'a> {
        let mut basis: BTreeMap<i32, Vec<(usize, Vec<BasisElt>)>> = BTreeMap::new();
        for (s, factors) in summands.iter().enumerate() {
            let flats: Vec<Vec<BasisElt>> = factors.iter().map(|c| flat_basis(c)).collect();
            let mut cur = Vec::with_capacity(factors.len());
            fn go(
                s: usize,
                flats: &[Vec<BasisElt>],
                cur: &mut Vec<BasisElt>,
                out: &mut BTreeMap<i32, Vec<(usize, Vec<BasisElt>)>>,
            ) {
                if cur.len() == flats.len() {
                    let deg = cur.iter().map(|e| e.0).sum();
                    out.entry(deg).or_default().push((s, cur.clone()));
                    return;
                }
                for &e in &flats[cur.len()] {
                    cur.push(e);
                    go(s, flats, cur, out);
                    cur.pop();
                }
            }
            go(s, &flats, &mut cur, &mut basis);
        }
        let mut index = FxHashMap::default();
        for elts in basis.values() {
            for (i, e) in elts.iter().enumerate() {
                index.insert(e.clone(), i);
            }
        }
        TensorSum {
            summands,
            basis,
            index,
        }
    }

    pub(crate) fn basis(&self, k: i32) -> &[(usize, Vec<BasisElt>)] {
        self.basis.get(&k).map_or(&[], |v| v.as_slice())
    }

    pub(crate) fn index_of(&self, summand: usize, tuple: &[BasisElt]) -> usize {
        self.index[&(summand, tuple.to_vec())]
    }

    /// Koszul-signed differential on every factor.
    pub(crate) fn complex(&self) -> Result<ChainComplex> {
        let dims: Vec<(i32, usize)> = self.basis.iter().map(|(k, v)| (*k, v.len())).collect();
        let mut diffs = Vec::new();
        for (&k, elts) in &self.basis {
            let Some(lower) = self.basis.get(&(k - 1)) else {
                continue;
            };
            let mut cols = Vec::with_capacity(elts.len());
            for (s, tuple) in elts {
                let mut acc = Accumulator::new();
                let mut before = 0i32;
                for (f, &(deg, idx)) in tuple.iter().enumerate() {
                    if let Some(d) = self.summands[*s][f].differential_ref(deg) {
                        let sign = sign_q(before.rem_euclid(2) == 1);
                        for (row, c) in d.column(idx).iter() {
                            let mut t = tuple.clone();
                            t[f] = (deg - 1, row);
                            acc.add(self.index_of(*s, &t), &(&sign * c));
                        }
                    }
                    before += deg;
                }
                cols.push(acc.finish());
            }
            diffs.push((k, RationalMatrix::from_columns(lower.len(), cols)?));
        }
        ChainComplex::new(dims, diffs)
    }
}

/// Sum of a `SparseVec` coefficient column applied to one tensor factor.
fn apply_to_factor(
    out: &mut Vec<(usize, Vec<BasisElt>, Q)>,
    summand: usize,
    tuple: &[BasisElt],
    factor: usize,
    image: &SparseVec,
    coeff: &Q,
) {
    let deg = tuple[factor].0;
    for (row, c) in image.iter() {
        let mut t = tuple.to_vec();
        t[factor] = (deg, row);
        out.push((summand, t, coeff * c));
    }
}

/// A finitely supported symmetric sequence: arity `n ≥ 1` ↦ `Σ_n`-complex.
#[derive(Clone, Debug)]
pub struct SymSeq {
    arity_bound: usize,
    terms: BTreeMap<usize, SigmaComplex>,
}

impl SymSeq {
    pub fn new(
        arity_bound: usize,
        terms: impl IntoIterator<Item = SigmaComplex>,
    ) -> Result<SymSeq> {
        let mut map = BTreeMap::new();
        for t in terms {
            let n = t.n();
            if n == 0 || n > arity_bound {
                return Err(Error::Invalid(format!(
                    "term of arity {n} outside [1, {arity_bound}]"
                )));
            }
            if map.insert(n, t).is_some() {
                return Err(Error::Invalid(format!("duplicate term in arity {n}")));
            }
        }
        Ok(SymSeq {
            arity_bound,
            terms: map,
        })
    }

    pub fn zero(arity_bound: usize) -> SymSeq {
        SymSeq {
            arity_bound,
            terms: BTreeMap::new(),
        }
    }

    /// ℚ in arity 1 and degree 0.
    pub fn unit(arity_bound: usize) -> SymSeq {
        assert!(arity_bound >= 1, "arity bound must be positive");
        SymSeq {
            arity_bound,
            terms: BTreeMap::from([(1, SigmaComplex::trivial(1, ChainComplex::unit()))]),
        }
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn term(&self, n: usize) -> Option<&SigmaComplex> {
        self.terms.get(&n)
    }

    /// The term in arity `n`, or the zero complex.
    pub fn term_or_zero(&self, n: usize) -> SigmaComplex {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SigmaComplex::trivial(n, ChainComplex::zero()))
    }

    pub fn space(&self, n: usize) -> GradedSpace {
        self.terms
            .get(&n)
            .map_or_else(GradedSpace::new, |t| t.complex().space())
    }

    /// Total dimension per arity `1..=arity_bound`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.arity_bound)
            .map(|n| self.space(n).total_dim())
            .collect()
    }

    pub fn character(&self, n: usize) -> CharacterTable {
        self.term_or_zero(n).character().normalized()
    }

    /// Zeroes arities above `n`.
    pub fn truncate(&self, n: usize) -> Result<SymSeq> {
        if n == 0 || n > self.arity_bound {
            return Err(Error::Invalid(format!(
                "truncation level {n} outside [1, {}]",
                self.arity_bound
            )));
        }
        Ok(SymSeq {
            arity_bound: self.arity_bound,
            terms: self
                .terms
                .range(..=n)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        })
    }

    /// Enlarges or shrinks the declared arity bound, dropping terms above it.
    pub fn with_arity_bound(&self, bound: usize) -> SymSeq {
        SymSeq {
            arity_bound: bound,
            terms: self
                .terms
                .range(..=bound)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// The composition product, arity by arity up to the shared bound.
///
/// Arity `d` is the sum over set partitions of `{1..d}` (restricted growth
/// strings in lexicographic order, blocks ordered by minimum) of
/// `A(#blocks) ⊗ B(|block₁|) ⊗ … ⊗ B(|block_m|)`.
pub fn compose(a: &SymSeq, b: &SymSeq) -> Result<SymSeq> {
    if a.arity_bound != b.arity_bound {
        return Err(Error::ArityBound(a.arity_bound, b.arity_bound));
    }
    let mut terms = Vec::new();
    for d in 1..=a.arity_bound {
        let t = compose_arity(a, b, d)?;
        if !t.complex().is_zero() {
            terms.push(t);
        }
    }
    SymSeq::new(a.arity_bound, terms)
}

fn compose_arity(a: &SymSeq, b: &SymSeq, d: usize) -> Result<SigmaComplex> {
    let partitions: Vec<Vec<Vec<usize>>> =
        set_partitions(d).iter().map(|r| rgs_blocks(r)).collect();
    // Terms are cloned up front so the tensor basis can borrow them.
    let a_terms: Vec<SigmaComplex> = (0..=d).map(|m| a.term_or_zero(m.max(1))).collect();
    let b_terms: Vec<SigmaComplex> = (0..=d).map(|m| b.term_or_zero(m.max(1))).collect();
    let summands: Vec<Vec<&ChainComplex>> = partitions
        .iter()
        .map(|blocks| {
            let mut f = vec![a_terms[blocks.len()].complex()];
            f.extend(blocks.iter().map(|bl| b_terms[bl.len()].complex()));
            f
        })
        .collect();
    let part_index: FxHashMap<Vec<Vec<usize>>, usize> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let ts = TensorSum::new(summands);
    let complex = ts.complex()?;
    let act = |i: usize, k: i32, j: usize| -> SparseVec {
        let (s, tuple) = &ts.basis(k)[j];
        let blocks = &partitions[*s];
        let find = |x: usize| {
            blocks
                .iter()
                .position(|bl| bl.contains(&x))
                .expect("partition covers")
        };
        let (p, q) = (find(i), find(i + 1));
        let mut terms: Vec<(usize, Vec<BasisElt>, Q)> = Vec::new();
        if p == q {
            let r = blocks[p].iter().position(|&x| x == i).expect("in block");
            let (deg, idx) = tuple[p + 1];
            let g = &b_terms[blocks[p].len()].generators(deg)[r];
            apply_to_factor(&mut terms, *s, tuple, p + 1, g.column(idx), &Q::one());
        } else {
            let swapped: Vec<Vec<usize>> = blocks
                .iter()
                .map(|bl| {
                    bl.iter()
                        .map(|&x| {
                            if x == i {
                                i + 1
                            } else if x == i + 1 {
                                i
                            } else {
                                x
                            }
                        })
                        .collect()
                })
                .collect();
            if blocks[p][0] == i && blocks[q][0] == i + 1 {
                // The two blocks exchange places in the min-order.
                debug_assert_eq!(q, p + 1);
                let mut new_blocks = swapped.clone();
                new_blocks.swap(p, q);
                let s2 = part_index[&new_blocks];
                let mut t = tuple.clone();
                t.swap(p + 1, q + 1);
                let sign = sign_q((tuple[p + 1].0 * tuple[q + 1].0).rem_euclid(2) == 1);
                let (deg, idx) = tuple[0];
                let g = &a_terms[blocks.len()].generators(deg)[p];
                apply_to_factor(&mut terms, s2, &t, 0, g.column(idx), &sign);
            } else {
                let s2 = part_index[&swapped];
                terms.push((s2, tuple.clone(), Q::one()));
            }
        }
        SparseVec::from_pairs(terms.into_iter().map(|(s, t, c)| (ts.index_of(s, &t), c)))
    };
    let mut generators = BTreeMap::new();
    for k in complex.degrees() {
        let dim = complex.dim(k);
        let mats = (0..d.saturating_sub(1))
            .map(|i| RationalMatrix::from_columns(dim, (0..dim).map(|j| act(i, k, j)).collect()))
            .collect::<Result<Vec<_>>>()?;
        generators.insert(k, mats);
    }
    SigmaComplex::new_unchecked(d, complex, generators)
}

/// A chain complex whose basis vectors carry a positive weight preserved by
/// the differential.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    pub complex: ChainComplex,
    /// Weight of each basis vector, per degree.
    pub weights: BTreeMap<i32, Vec<usize>>,
}

impl WeightedComplex {
    /// Every basis vector gets weight 1.
    pub fn uniform(complex: ChainComplex) -> WeightedComplex {
        let weights = complex
            .degrees()
            .map(|k| (k, vec![1; complex.dim(k)]))
            .collect();
        WeightedComplex { complex, weights }
    }

    pub fn new(
        complex: ChainComplex,
        weights: BTreeMap<i32, Vec<usize>>,
    ) -> Result<WeightedComplex> {
        for k in complex.degrees() {
            let w = weights.get(&k).map_or(0, |w| w.len());
            if w != complex.dim(k) {
                return Err(Error::Shape(format!(
                    "degree {k}: {w} weights for dimension {}",
                    complex.dim(k)
                )));
            }
        }
        for k in complex.degrees() {
            if let Some(d) = complex.differential_ref(k) {
                for (j, col) in d.columns().iter().enumerate() {
                    if col
                        .iter()
                        .any(|(i, _)| weights[&(k - 1)][i] != weights[&k][j])
                    {
                        return Err(Error::Invalid(format!(
                            "differential does not preserve weight in degree {k}"
                        )));
                    }
                }
            }
        }
        Ok(WeightedComplex { complex, weights })
    }

    pub fn weight(&self, k: i32, i: usize) -> usize {
        self.weights[&k][i]
    }

    pub fn max_weight(&self) -> usize {
        self.weights.values().flatten().copied().max().unwrap_or(0)
    }

    /// The direct summand spanned by basis vectors whose weight passes
    /// `keep`, in the induced order.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> WeightedComplex {
        let sel: BTreeMap<i32, Vec<usize>> = self
            .complex
            .degrees()
            .map(|k| {
                (
                    k,
                    (0..self.complex.dim(k))
                        .filter(|&i| keep(self.weights[&k][i]))
                        .collect(),
                )
            })
            .collect();
        let pos: BTreeMap<i32, FxHashMap<usize, usize>> = sel
            .iter()
            .map(|(k, v)| (*k, v.iter().enumerate().map(|(a, &b)| (b, a)).collect()))
            .collect();
        let dims: Vec<(i32, usize)> = sel.iter().map(|(k, v)| (*k, v.len())).collect();
        let mut diffs = Vec::new();
        for (&k, cols) in &sel {
            let Some(d) = self.complex.differential_ref(k) else {
                continue;
            };
            let Some(rows) = pos.get(&(k - 1)) else {
                continue;
            };
            let m = cols
                .iter()
                .map(|&j| d.column(j).remap(|i| rows.get(&i).copied()))
                .collect();
            diffs.push((k, RationalMatrix::from_columns_unchecked(rows.len(), m)));
        }
        let complex =
            ChainComplex::new(dims, diffs).expect("a weight summand of a complex is a complex");
        let weights = sel
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|&i| self.weights[k][i]).collect()))
            .collect();
        WeightedComplex { complex, weights }
    }

    /// Homology dimensions per weight.
    pub fn homology_by_weight(&self) -> BTreeMap<usize, GradedSpace> {
        let mut ws: Vec<usize> = self.weights.values().flatten().copied().collect();
        ws.sort_unstable();
        ws.dedup();
        ws.into_iter()
            .map(|w| (w, self.restrict(|x| x == w).complex.homology_dims()))
            .filter(|(_, h)| !h.is_zero())
            .collect()
    }

    pub fn direct_sum(parts: &[WeightedComplex]) -> WeightedComplex {
        let mut complex = ChainComplex::zero();
        let mut weights: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for p in parts {
            complex = crate::complex::direct_sum(&complex, &p.complex);
            for (k, w) in &p.weights {
                weights.entry(*k).or_default().extend(w);
            }
        }
        WeightedComplex { complex, weights }
    }
}

/// `A(n) ⊗ X^{⊗n}` with `Σ_n` acting diagonally: on `A(n)` by its action and
/// on `X^{⊗n}` by Koszul-signed permutation of factors. Also returns the
/// weight of each basis vector.
pub fn tensor_power_module(
    a: &SigmaComplex,
    x: &WeightedComplex,
) -> Result<(SigmaComplex, BTreeMap<i32, Vec<usize>>)> {
    let n = a.n();
    let mut factors = vec![a.complex()];
    factors.extend(std::iter::repeat_n(&x.complex, n));
    let ts = TensorSum::new(vec![factors]);
    let complex = ts.complex()?;
    let weights = complex
        .degrees()
        .map(|k| {
            (
                k,
                ts.basis(k)
                    .iter()
                    .map(|(_, t)| t[1..].iter().map(|&(d, i)| x.weight(d, i)).sum())
                    .collect(),
            )
        })
        .collect();
    let sc = SigmaComplex::from_fn(n, complex, |i, k, j| {
        let (_, tuple) = &ts.basis(k)[j];
        let mut t = tuple.clone();
        t.swap(i + 1, i + 2);
        let sign = sign_q((tuple[i + 1].0 * tuple[i + 2].0).rem_euclid(2) == 1);
        let (deg, idx) = tuple[0];
        let mut terms = Vec::new();
        apply_to_factor(
            &mut terms,
            0,
            &t,
            0,
            a.generators(deg)[i].column(idx),
            &sign,
        );
        SparseVec::from_pairs(terms.into_iter().map(|(s, t, c)| (ts.index_of(s, &t), c)))
    })?;
    Ok((sc, weights))
}

/// Coinvariants, invariants and norm map of `A(n) ⊗ X^{⊗n}`.
#[derive(Clone, Debug)]
pub struct ExtendedPower {
    pub report: SymmetrizerReport,
    /// Weight of each coinvariant basis vector.
    pub weights: BTreeMap<i32, Vec<usize>>,
}

impl ExtendedPower {
    pub fn coinvariant(&self) -> &ChainComplex {
        &self.report.coinvariants
    }

    pub fn invariant(&self) -> &ChainComplex {
        &self.report.invariants
    }

    pub fn weighted(&self) -> WeightedComplex {
        WeightedComplex {
            complex: self.report.coinvariants.clone(),
            weights: self.weights.clone(),
        }
    }
}

pub fn extended_powers(a: &SymSeq, n: usize, x: &WeightedComplex) -> Result<ExtendedPower> {
    if n == 0 || n > a.arity_bound {
        return Err(Error::Invalid(format!(
            "power {n} outside [1, {}]",
            a.arity_bound
        )));
    }
    let (module, weights) = tensor_power_module(&a.term_or_zero(n), x)?;
    let report = module.symmetrize(false)?;
    let w = report
        .coinvariant_pivots
        .iter()
        .map(|(k, piv)| (*k, piv.iter().map(|&p| weights[k][p]).collect()))
        .collect();
    Ok(ExtendedPower { report, weights: w })
}

/// `⊕_{1 ≤ n ≤ weight_bound} D_n^A(X)`.
pub fn schur_sum(a: &SymSeq, x: &WeightedComplex, weight_bound: usize) -> Result<WeightedComplex> {
    if weight_bound > a.arity_bound {
        return Err(Error::ArityBound(weight_bound, a.arity_bound));
    }
    let parts = (1..=weight_bound)
        .map(|n| extended_powers(a, n, x).map(|e| e.weighted()))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightedComplex::direct_sum(&parts))
}

/// Characters of every arity of a sequence, for comparisons.
pub fn characters(s: &SymSeq) -> BTreeMap<usize, CharacterTable> {
    (1..=s.arity_bound).map(|n| (n, s.character(n))).collect()
}

/// Whether two sequences agree in dimensions and chain-level characters in
/// every arity.
pub fn same_characters(a: &SymSeq, b: &SymSeq) -> bool {
    a.arity_bound == b.arity_bound && characters(a) == characters(b)
}

/// All cycle types up to `n`, for reports.
pub fn cycle_types_upto(n: usize) -> Vec<CycleType> {
    (1..=n).flat_map(CycleType::all).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn com(bound: usize) -> SymSeq {
        SymSeq::new(
            bound,
            (1..=bound).map(|n| SigmaComplex::trivial(n, ChainComplex::unit())),
        )
        .unwrap()
    }

    fn ass(bound: usize) -> SymSeq {
        SymSeq::new(bound, (1..=bound).map(SigmaComplex::regular)).unwrap()
    }

    #[test]
    fn unit_dims() {
        assert_eq!(SymSeq::unit(5).dims(), vec![1, 0, 0, 0, 0]);
        assert_eq!(SymSeq::unit(1).dims(), vec![1]);
    }

    #[test]
    fn com_com_and_ass_ass_arity_two() {
        let cc = compose(&com(3), &com(3)).unwrap();
        assert_eq!(cc.space(2), GradedSpace::from_pairs([(0, 2)]));
        let aa = compose(&ass(3), &ass(3)).unwrap();
        assert_eq!(aa.space(2), GradedSpace::from_pairs([(0, 4)]));
        for n in 1..=3 {
            aa.term(n).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn unit_laws() {
        let a = ass(4);
        let u = SymSeq::unit(4);
        assert!(same_characters(&compose(&u, &a).unwrap(), &a));
        assert!(same_characters(&compose(&a, &u).unwrap(), &a));
    }

    #[test]
    fn truncations() {
        assert_eq!(ass(4).truncate(2).unwrap().dims(), vec![1, 2, 0, 0]);
        assert_eq!(com(3).truncate(1).unwrap().dims(), SymSeq::unit(3).dims());
        assert_eq!(ass(4).truncate(4).unwrap().dims(), ass(4).dims());
    }

    #[test]
    fn extended_power_examples() {
        let x0 = WeightedComplex::uniform(ChainComplex::unit());
        let x1 = WeightedComplex::uniform(ChainComplex::from_space(&GradedSpace::line(1)));
        let d3 = extended_powers(&com(3), 3, &x0).unwrap();
        assert_eq!(d3.coinvariant().space(), GradedSpace::line(0));
        assert!(d3.report.norm_is_isomorphism());
        assert!(extended_powers(&com(3), 2, &x1)
            .unwrap()
            .coinvariant()
            .is_zero());
        let d1 = extended_powers(&ass(3), 1, &x0).unwrap();
        assert_eq!(d1.coinvariant().space(), GradedSpace::line(0));
    }

    #[test]
    fn schur_sum_examples() {
        let x0 = WeightedComplex::uniform(ChainComplex::unit());
        assert_eq!(
            schur_sum(&com(3), &x0, 3).unwrap().complex.space(),
            GradedSpace::from_pairs([(0, 3)])
        );
        let x2 =
            WeightedComplex::uniform(ChainComplex::from_space(&GradedSpace::from_pairs([(0, 2)])));
        assert_eq!(
            schur_sum(&ass(3), &x2, 2).unwrap().complex.space(),
            GradedSpace::from_pairs([(0, 6)])
        );
        assert_eq!(
            schur_sum(&SymSeq::unit(3), &x2, 3).unwrap().complex.space(),
            x2.complex.space()
        );
    }
}
