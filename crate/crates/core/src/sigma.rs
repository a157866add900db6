//! Chain complexes with a symmetric-group action, given by the action of the
//! adjacent transpositions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, ChainMap, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, SparseVec, TrackedEchelon};
use crate::perm::{factorial, CycleType, Perm};
use crate::rational::Q;

/// A chain complex with a `Σ_n`-action commuting with the differential.
/// `generators[k][i]` is the action of `s_i = (i, i+1)` in degree `k`.
#[derive(Clone, Debug)]
pub struct SigmaComplex {
    n: usize,
    complex: ChainComplex,
    generators: BTreeMap<i32, Vec<RationalMatrix>>,
}

/// Values of a character, per degree, at a list of cycle types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub cycle_types: Vec<CycleType>,
    pub values: BTreeMap<i32, Vec<Q>>,
}

impl CharacterTable {
    /// Drops degrees whose character vanishes identically.
    pub fn normalized(mut self) -> CharacterTable {
        self.values.retain(|_, v| v.iter().any(|q| !q.is_zero()));
        self
    }

    pub fn at(&self, k: i32) -> Option<&[Q]> {
        self.values.get(&k).map(|v| v.as_slice())
    }

    /// Degreewise negation of the degrees, as for a linear dual.
    pub fn negate_degrees(&self) -> CharacterTable {
        CharacterTable {
            cycle_types: self.cycle_types.clone(),
            values: self.values.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    pub fn shift(&self, s: i32) -> CharacterTable {
        CharacterTable {
            cycle_types: self.cycle_types.clone(),
            values: self
                .values
                .iter()
                .map(|(k, v)| (k + s, v.clone()))
                .collect(),
        }
    }

    /// Pointwise product with the sign character.
    pub fn sign_twist(&self) -> CharacterTable {
        let signs: Vec<Q> = self
            .cycle_types
            .iter()
            .map(|t| Q::from_int(t.representative().sign()))
            .collect();
        CharacterTable {
            cycle_types: self.cycle_types.clone(),
            values: self
                .values
                .iter()
                .map(|(k, v)| (*k, v.iter().zip(&signs).map(|(a, b)| a * b).collect()))
                .collect(),
        }
    }
}

impl SigmaComplex {
    /// Validates Coxeter relations and equivariance of the differential.
    pub fn new(
        n: usize,
        complex: ChainComplex,
        generators: BTreeMap<i32, Vec<RationalMatrix>>,
    ) -> Result<SigmaComplex> {
        let s = SigmaComplex::new_unchecked(n, complex, generators)?;
        s.validate()?;
        Ok(s)
    }

    /// Builds the action from per-degree generator matrices without checking
    /// relations (shapes are still checked).
    pub fn new_unchecked(
        n: usize,
        complex: ChainComplex,
        mut generators: BTreeMap<i32, Vec<RationalMatrix>>,
    ) -> Result<SigmaComplex> {
        let gens = n.saturating_sub(1);
        for k in complex.degrees().collect::<Vec<_>>() {
            let d = complex.dim(k);
            let g = generators
                .entry(k)
                .or_insert_with(|| vec![RationalMatrix::identity(d); gens]);
            if g.len() != gens {
                return Err(Error::Shape(format!(
                    "degree {k}: {} generators for n = {n}",
                    g.len()
                )));
            }
            for m in g.iter() {
                if m.nrows() != d || m.ncols() != d {
                    return Err(Error::Shape(format!(
                        "degree {k}: generator is {}x{}, expected {d}x{d}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
            }
        }
        generators.retain(|k, _| complex.dim(*k) > 0);
        Ok(SigmaComplex {
            n,
            complex,
            generators,
        })
    }

    /// Builds the action from a function returning `s_i · e_j` in degree `k`.
    pub fn from_fn(
        n: usize,
        complex: ChainComplex,
        mut act: impl FnMut(usize, i32, usize) -> SparseVec,
    ) -> Result<SigmaComplex> {
        let mut generators = BTreeMap::new();
        for k in complex.degrees().collect::<Vec<_>>() {
            let d = complex.dim(k);
            let mats = (0..n.saturating_sub(1))
                .map(|i| RationalMatrix::from_columns(d, (0..d).map(|j| act(i, k, j)).collect()))
                .collect::<Result<Vec<_>>>()?;
            generators.insert(k, mats);
        }
        SigmaComplex::new_unchecked(n, complex, generators)
    }

    /// The complex with the trivial action.
    pub fn trivial(n: usize, complex: ChainComplex) -> SigmaComplex {
        SigmaComplex::new_unchecked(n, complex, BTreeMap::new())
            .expect("identity generators have matching shapes")
    }

    /// The regular representation `ℚ[Σ_n]` in degree 0, with basis the
    /// permutations in lexicographic order and `σ·τ = σ ∘ τ`.
    pub fn regular(n: usize) -> SigmaComplex {
        let c = ChainComplex::from_space(&GradedSpace::from_pairs([(0, factorial(n))]));
        SigmaComplex::from_fn(n, c, |i, _, j| {
            let t = Perm::unrank(n, j);
            SparseVec::unit(Perm::transposition(n, i).compose(&t).rank())
        })
        .expect("regular representation")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for (&k, gens) in &self.generators {
            let d = self.complex.dim(k);
            let id = RationalMatrix::identity(d);
            let fail = |relation: String| Error::Relation {
                n,
                relation,
                degree: k,
            };
            for i in 0..gens.len() {
                if gens[i].mul(&gens[i])? != id {
                    return Err(fail(format!("s{}^2 = 1", i + 1)));
                }
                for j in i + 1..gens.len() {
                    let (a, b) = (&gens[i], &gens[j]);
                    if j == i + 1 {
                        let lhs = a.mul(b)?.mul(a)?;
                        let rhs = b.mul(a)?.mul(b)?;
                        if lhs != rhs {
                            return Err(fail(format!(
                                "s{}s{}s{} = s{}s{}s{}",
                                i + 1,
                                j + 1,
                                i + 1,
                                j + 1,
                                i + 1,
                                j + 1
                            )));
                        }
                    } else if a.mul(b)? != b.mul(a)? {
                        return Err(fail(format!("s{}s{} = s{}s{}", i + 1, j + 1, j + 1, i + 1)));
                    }
                }
                if let Some(dk) = self.complex.differential_ref(k) {
                    let below = &self.generators[&(k - 1)][i];
                    if dk.mul(&gens[i])? != below.mul(dk)? {
                        return Err(fail(format!("d s{} = s{} d", i + 1, i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    pub fn generators(&self, k: i32) -> &[RationalMatrix] {
        self.generators.get(&k).map_or(&[], |v| v.as_slice())
    }

    /// `σ · v` for `v` in degree `k`.
    pub fn act(&self, sigma: &Perm, k: i32, v: &SparseVec) -> SparseVec {
        assert_eq!(sigma.n(), self.n);
        let gens = self.generators(k);
        let mut out = v.clone();
        for i in sigma.reduced_word() {
            out = gens[i].mul_vec(&out);
        }
        out
    }

    pub fn action_matrix(&self, sigma: &Perm, k: i32) -> RationalMatrix {
        let d = self.complex.dim(k);
        RationalMatrix::from_columns_unchecked(
            d,
            (0..d)
                .map(|j| self.act(sigma, k, &SparseVec::unit(j)))
                .collect(),
        )
    }

    pub fn trace(&self, sigma: &Perm, k: i32) -> Q {
        (0..self.complex.dim(k))
            .map(|j| self.act(sigma, k, &SparseVec::unit(j)).get(j))
            .sum()
    }

    /// Chain-level character at every cycle type of `n`.
    pub fn character(&self) -> CharacterTable {
        let cycle_types = CycleType::all(self.n);
        let values = self
            .complex
            .degrees()
            .map(|k| {
                (
                    k,
                    cycle_types
                        .iter()
                        .map(|t| self.trace(&t.representative(), k))
                        .collect(),
                )
            })
            .collect();
        CharacterTable {
            cycle_types,
            values,
        }
    }

    /// Character at a single cycle type, per degree.
    pub fn character_at(&self, t: &CycleType) -> Result<BTreeMap<i32, Q>> {
        if t.n() != self.n {
            return Err(Error::Invalid(format!(
                "cycle type {t} does not partition {}",
                self.n
            )));
        }
        let sigma = t.representative();
        Ok(self
            .complex
            .degrees()
            .map(|k| (k, self.trace(&sigma, k)))
            .collect())
    }

    /// Character of the homology. When homology is concentrated in a single
    /// degree this uses the Lefschetz identity on chain-level traces and
    /// needs only ranks; otherwise it acts on representative cycles.
    pub fn homology_character(&self) -> (GradedSpace, CharacterTable) {
        let dims = self.complex.homology_dims();
        let cycle_types = CycleType::all(self.n);
        if dims.is_zero() {
            return (
                dims,
                CharacterTable {
                    cycle_types,
                    values: BTreeMap::new(),
                },
            );
        }
        if let Some(k) = dims.concentrated_in() {
            let chain = self.character();
            let mut vals = vec![Q::zero(); cycle_types.len()];
            for (j, row) in &chain.values {
                let s = if (j - k).rem_euclid(2) == 0 {
                    Q::one()
                } else {
                    Q::from_int(-1)
                };
                for (v, x) in vals.iter_mut().zip(row) {
                    *v = v.add_mul(&s, x);
                }
            }
            return (
                dims,
                CharacterTable {
                    cycle_types,
                    values: BTreeMap::from([(k, vals)]),
                },
            );
        }
        let table = self.homology_character_from_representatives(&cycle_types);
        (dims, table)
    }

    /// Homology character computed by acting on representative cycles and
    /// reducing modulo boundaries.
    pub fn homology_character_from_representatives(
        &self,
        cycle_types: &[CycleType],
    ) -> CharacterTable {
        let h = self.complex.homology();
        let mut values = BTreeMap::new();
        for (&k, reps) in &h.representatives {
            let mut ech = TrackedEchelon::new();
            let boundary = self.complex.differential(k + 1).into_columns();
            let nb = boundary.len();
            for b in boundary {
                ech.insert(b);
            }
            for r in reps {
                assert!(
                    ech.insert(r.clone()),
                    "representatives must be independent modulo boundaries"
                );
            }
            let row = cycle_types
                .iter()
                .map(|t| {
                    let sigma = t.representative();
                    reps.iter()
                        .enumerate()
                        .map(|(j, r)| {
                            let image = self.act(&sigma, k, r);
                            let coords = ech
                                .express(&image)
                                .expect("action preserves cycles modulo boundaries");
                            coords.get(nb + j)
                        })
                        .sum()
                })
                .collect();
            values.insert(k, row);
        }
        CharacterTable {
            cycle_types: cycle_types.to_vec(),
            values,
        }
    }

    /// `sgn ⊗ self`.
    pub fn sign_twist(&self) -> SigmaComplex {
        let m1 = Q::from_int(-1);
        let generators = self
            .generators
            .iter()
            .map(|(k, g)| (*k, g.iter().map(|m| m.scale(&m1)).collect()))
            .collect();
        SigmaComplex {
            n: self.n,
            complex: self.complex.clone(),
            generators,
        }
    }

    /// Shift by `k`; the action is unchanged.
    pub fn shift(&self, k: i32) -> SigmaComplex {
        SigmaComplex {
            n: self.n,
            complex: crate::complex::shift_complex(&self.complex, k),
            generators: self
                .generators
                .iter()
                .map(|(d, g)| (d + k, g.clone()))
                .collect(),
        }
    }

    /// Tensor product of two `Σ_n`-complexes with the diagonal action.
    pub fn tensor(&self, other: &SigmaComplex) -> Result<SigmaComplex> {
        if self.n != other.n {
            return Err(Error::ArityBound(self.n, other.n));
        }
        let c = crate::complex::tensor_complexes(&self.complex, &other.complex)?;
        let (layout, _) = crate::complex::tensor_layout(&self.complex, &other.complex);
        let mut generators = BTreeMap::new();
        for (&t, blocks) in &layout {
            let dims: Vec<usize> = blocks
                .iter()
                .map(|&(i, _)| self.complex.dim(i) * other.complex.dim(t - i))
                .collect();
            let mats = (0..self.n.saturating_sub(1))
                .map(|g| {
                    let parts = blocks
                        .iter()
                        .enumerate()
                        .map(|(b, &(i, _))| {
                            (
                                b,
                                b,
                                self.generators(i)[g].kron(&other.generators(t - i)[g]),
                            )
                        })
                        .collect();
                    RationalMatrix::from_blocks(&dims, &dims, parts)
                })
                .collect::<Result<Vec<_>>>()?;
            generators.insert(t, mats);
        }
        SigmaComplex::new_unchecked(self.n, c, generators)
    }

    /// Averaging projector `(1/n!) Σ (±)σ` and the resulting models of
    /// coinvariants and invariants.
    pub fn symmetrize(&self, sign_twist: bool) -> Result<SymmetrizerReport> {
        let perms = Perm::all(self.n);
        let inv_order = Q::new(1, factorial(self.n) as i64);
        let mut projector = BTreeMap::new();
        let mut coinv_rref = BTreeMap::new();
        let mut coinv_pivots = BTreeMap::new();
        let mut inv_basis = BTreeMap::new();
        let mut inv_pivots = BTreeMap::new();
        for k in self.complex.degrees() {
            let d = self.complex.dim(k);
            let cols: Vec<SparseVec> = (0..d)
                .map(|j| {
                    let mut acc = crate::linalg::Accumulator::new();
                    let e = SparseVec::unit(j);
                    for p in &perms {
                        let c = if sign_twist && p.sign() < 0 {
                            Q::from_int(-1)
                        } else {
                            Q::one()
                        };
                        acc.add_vec(&self.act(p, k, &e), &c);
                    }
                    acc.finish().scale(&inv_order)
                })
                .collect();
            let p = RationalMatrix::from_columns_unchecked(d, cols);
            if p.mul(&p)? != p {
                return Err(Error::Invalid(format!(
                    "averaging operator is not idempotent in degree {k}"
                )));
            }
            let rr = p.row_reduce();
            let rt = p.transpose().row_reduce();
            coinv_pivots.insert(k, rr.pivot_cols.clone());
            coinv_rref.insert(k, rr.rref);
            // Rows of the reduced echelon form of Pᵀ span Im P.
            inv_basis.insert(k, rt.rref.transpose().into_columns());
            inv_pivots.insert(k, rt.pivot_cols);
            projector.insert(k, p);
        }
        let dims: Vec<(i32, usize)> = coinv_pivots.iter().map(|(k, p)| (*k, p.len())).collect();
        let coords_inv = |k: i32, v: &SparseVec| -> SparseVec {
            let piv: &Vec<usize> = &inv_pivots[&k];
            SparseVec::from_pairs(piv.iter().enumerate().map(|(i, &q)| (i, v.get(q))))
        };
        let mut coinv_diffs = Vec::new();
        let mut inv_diffs = Vec::new();
        for k in self.complex.degrees() {
            let Some(dk) = self.complex.differential_ref(k) else {
                continue;
            };
            if !coinv_rref.contains_key(&(k - 1)) {
                continue;
            }
            let rows = coinv_pivots[&(k - 1)].len();
            let r = &coinv_rref[&(k - 1)];
            let cols = coinv_pivots[&k]
                .iter()
                .map(|&p| r.mul_vec(dk.column(p)))
                .collect();
            coinv_diffs.push((k, RationalMatrix::from_columns_unchecked(rows, cols)));
            let cols = inv_basis[&k]
                .iter()
                .map(|b| coords_inv(k - 1, &dk.mul_vec(b)))
                .collect();
            inv_diffs.push((k, RationalMatrix::from_columns_unchecked(rows, cols)));
        }
        let coinvariants = ChainComplex::new(dims.clone(), coinv_diffs)?;
        let invariants = ChainComplex::new(dims, inv_diffs)?;
        let order = Q::from_int(factorial(self.n) as i64);
        let mut norm_components = Vec::new();
        for k in self.complex.degrees() {
            let p = &projector[&k];
            let rows = inv_pivots[&k].len();
            let cols = coinv_pivots[&k]
                .iter()
                .map(|&j| coords_inv(k, &p.column(j).scale(&order)))
                .collect();
            norm_components.push((k, RationalMatrix::from_columns_unchecked(rows, cols)));
        }
        let norm = ChainMap::new(coinvariants.clone(), invariants.clone(), norm_components)?;
        Ok(SymmetrizerReport {
            projector,
            coinvariants,
            invariants,
            norm,
            coinvariant_rref: coinv_rref,
            coinvariant_pivots: coinv_pivots,
        })
    }
}

/// Output of [`SigmaComplex::symmetrize`].
#[derive(Clone, Debug)]
pub struct SymmetrizerReport {
    pub projector: BTreeMap<i32, RationalMatrix>,
    /// Basis: classes of the standard vectors at the pivot columns of the
    /// projector.
    pub coinvariants: ChainComplex,
    /// Basis: reduced column echelon basis of the image of the projector.
    pub invariants: ChainComplex,
    /// `[v] ↦ Σ_σ (±)σ v`.
    pub norm: ChainMap,
    /// Reduced echelon rows of the projector; `rref · v` gives the
    /// coinvariant coordinates of `[v]`.
    pub coinvariant_rref: BTreeMap<i32, RationalMatrix>,
    pub coinvariant_pivots: BTreeMap<i32, Vec<usize>>,
}

impl SymmetrizerReport {
    /// Whether the norm map is an isomorphism in every degree.
    pub fn norm_is_isomorphism(&self) -> bool {
        self.coinvariants.space() == self.invariants.space()
            && self
                .coinvariants
                .degrees()
                .all(|k| self.norm.component(k).rank() == self.coinvariants.dim(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn regular_rep_is_valid_and_has_regular_character() {
        let r = SigmaComplex::regular(3);
        r.validate().unwrap();
        let ch = r.character();
        // Cycle types in order 3, 2+1, 1+1+1.
        assert_eq!(ch.values[&0], vec![q(0), q(0), q(6)]);
    }

    #[test]
    fn trivial_character() {
        let t = SigmaComplex::trivial(4, ChainComplex::unit());
        t.validate().unwrap();
        assert!(t.character().values[&0].iter().all(|v| *v == q(1)));
    }

    #[test]
    fn braid_violation_is_reported() {
        // s1 swaps the two basis vectors and s2 is the identity. Both square
        // to 1, but s1 s2 s1 = 1 while s2 s1 s2 = s1.
        let c = ChainComplex::from_space(&GradedSpace::from_pairs([(0, 2)]));
        let s1 = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let s2 = RationalMatrix::identity(2);
        let err = SigmaComplex::new(3, c, BTreeMap::from([(0, vec![s1, s2])])).unwrap_err();
        assert!(matches!(err, Error::Relation { relation, .. } if relation.starts_with("s1s2s1")));
    }

    #[test]
    fn regular_two_symmetrizes() {
        let rep = SigmaComplex::regular(2).symmetrize(false).unwrap();
        assert_eq!(rep.coinvariants.dim(0), 1);
        assert_eq!(rep.invariants.dim(0), 1);
        assert!(rep.norm_is_isomorphism());
        let sgn = SigmaComplex::regular(3).symmetrize(true).unwrap();
        assert_eq!(sgn.coinvariants.dim(0), 1);
    }

    #[test]
    fn homology_character_paths_agree() {
        // ℚ[Σ3] → trivial line by augmentation; kernel is the augmentation
        // ideal, a 5-dimensional representation.
        let ones = RationalMatrix::from_dense(&[vec![q(1); 6]]).unwrap();
        let c = ChainComplex::new([(0, 1), (1, 6)], [(1, ones)]).unwrap();
        let reg = SigmaComplex::regular(3);
        let mut gens = BTreeMap::new();
        gens.insert(1, reg.generators(0).to_vec());
        let s = SigmaComplex::new(3, c, gens).unwrap();
        let (dims, lef) = s.homology_character();
        assert_eq!(dims.concentrated_in(), Some(1));
        let direct = s.homology_character_from_representatives(&lef.cycle_types);
        assert_eq!(lef, direct);
        assert_eq!(lef.values[&1], vec![q(-1), q(-1), q(5)]);
    }
}
