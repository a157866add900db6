//! Finite weight-graded algebras over operads concentrated in degree 0, and
//! the two-sided bar complexes `B(τ_n𝒪, 𝒪, A)` computing the cotangent
//! fiber (`n = 1`) and the truncation tower `t_n A`.
//!
//! Every carrier basis vector has a weight at least 1 and structure maps add
//! weights, so each bar complex splits into finite weight pieces. A chain of
//! the bar complex with `r` algebra inputs is a levelled simplex with `r`
//! leaves tensored with a tuple of carrier basis vectors, taken modulo `Σ_r`.
//! Tuples are stored sorted; the quotient by the stabilizer of a sorted tuple
//! (a Young subgroup acting with the Koszul sign of its odd entries) is
//! computed by linear algebra.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bar::bar_complex;
use crate::complex::{ChainComplex, ChainMap, GradedSpace};
use crate::error::{Error, Result};
use crate::levelled::{
    act_simplex, block_count, children, enumerate_simplices_upto, inner_differential, Simplex,
};
use crate::linalg::{Accumulator, Echelon, RationalMatrix, SparseVec};
use crate::operad::{AxiomFailure, AxiomReport, Operad};
use crate::perm::{koszul_sign, Perm};
use crate::rational::Q;
use crate::report::{space_json, CheckResult};
use crate::symseq::{extended_powers, SymSeq, WeightedComplex};

pub const ALGEBRA_SCHEMA: &str = "operadkit-algebra/1";

/// Largest carrier accepted from a document.
pub const MAX_DOCUMENT_CARRIER: usize = 64;

/// Largest nilpotence certificate accepted from a document.
pub const MAX_DOCUMENT_CERTIFICATE: usize = 6;

/// A finite algebra over an operad concentrated in degree 0.
///
/// `μ(ℓ; b_0, …, b_{n−1})` is stored for labels `ℓ ∈ 𝒪(n)`, `n ≥ 2`, and
/// ordered tuples of carrier basis indices; missing entries are zero.
/// Equivariance reads `μ(σ·ℓ; b) = ε · μ(ℓ; b_{σ(0)}, …, b_{σ(n−1)})` with
/// `ε` the Koszul sign of the reordering. The certificate `w` asserts that
/// every structure map of arity above `w` vanishes and every weight is at
/// most `w`, so all composite operations of total arity above `w` vanish.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    name: String,
    operad: Operad,
    degrees: Vec<i32>,
    weights: Vec<usize>,
    certificate: usize,
    products: BTreeMap<(u32, Vec<u32>), SparseVec>,
}

impl AlgebraPresentation {
    /// Builds a presentation and runs [`check_algebra_axioms`].
    pub fn new(
        name: impl Into<String>,
        operad: Operad,
        degrees: Vec<i32>,
        weights: Vec<usize>,
        certificate: usize,
        products: BTreeMap<(u32, Vec<u32>), SparseVec>,
    ) -> Result<AlgebraPresentation> {
        let a = AlgebraPresentation::new_unchecked(
            name,
            operad,
            degrees,
            weights,
            certificate,
            products,
        )?;
        let report = check_algebra_axioms(&a);
        match report.failure {
            None => Ok(a),
            Some(f) => Err(Error::Algebra(f.to_string())),
        }
    }

    /// Builds a presentation after checking only shapes and indices.
    pub fn new_unchecked(
        name: impl Into<String>,
        operad: Operad,
        degrees: Vec<i32>,
        weights: Vec<usize>,
        certificate: usize,
        mut products: BTreeMap<(u32, Vec<u32>), SparseVec>,
    ) -> Result<AlgebraPresentation> {
        if !operad.is_degree_zero() {
            return Err(Error::Algebra(
                "algebras are supported over operads concentrated in degree 0".into(),
            ));
        }
        if degrees.len() != weights.len() {
            return Err(Error::Algebra(format!(
                "{} degrees for {} weights",
                degrees.len(),
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Algebra("carrier weights must be at least 1".into()));
        }
        if certificate == 0 {
            return Err(Error::Algebra(
                "the nilpotence certificate must be at least 1".into(),
            ));
        }
        let dim = degrees.len();
        for ((label, inputs), value) in &products {
            let n = inputs.len();
            if n < 2 || n > operad.arity_bound() {
                return Err(Error::Algebra(format!(
                    "structure map of arity {n} outside [2, {}]",
                    operad.arity_bound()
                )));
            }
            if *label as usize >= operad.dim(n) {
                return Err(Error::Algebra(format!(
                    "label {label} out of range in arity {n}"
                )));
            }
            if inputs.iter().any(|&i| i as usize >= dim)
                || value.max_index().is_some_and(|m| m >= dim)
            {
                return Err(Error::Algebra(format!(
                    "carrier index out of range in μ({label}; {inputs:?})"
                )));
            }
        }
        products.retain(|_, v| !v.is_empty());
        Ok(AlgebraPresentation {
            name: name.into(),
            operad,
            degrees,
            weights,
            certificate,
            products,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> AlgebraPresentation {
        self.name = name.into();
        self
    }

    pub fn operad(&self) -> &Operad {
        &self.operad
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn certificate(&self) -> usize {
        self.certificate
    }

    pub fn max_weight(&self) -> usize {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn is_degree_zero(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0)
    }

    /// The carrier as a weighted complex with zero differential.
    pub fn carrier(&self) -> WeightedComplex {
        weighted_space(
            self.degrees
                .iter()
                .copied()
                .zip(self.weights.iter().copied()),
        )
    }

    /// Weight-`w` part of the carrier.
    pub fn carrier_space(&self, w: usize) -> GradedSpace {
        GradedSpace::from_pairs(
            self.degrees
                .iter()
                .zip(&self.weights)
                .filter(|(_, &x)| x == w)
                .map(|(&d, _)| (d, 1)),
        )
    }

    /// `μ(ℓ; b)` for a basis label; arity 1 is the identity.
    pub fn mu(&self, label: u32, inputs: &[u32]) -> SparseVec {
        if inputs.len() == 1 {
            return SparseVec::unit(inputs[0] as usize);
        }
        self.products
            .get(&(label, inputs.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Multilinear extension of [`AlgebraPresentation::mu`].
    pub fn mu_vec(&self, labels: &SparseVec, inputs: &[SparseVec]) -> SparseVec {
        let mut acc = Accumulator::new();
        let mut tuple = vec![0u32; inputs.len()];
        fn go(
            a: &AlgebraPresentation,
            labels: &SparseVec,
            inputs: &[SparseVec],
            pos: usize,
            coeff: Q,
            tuple: &mut Vec<u32>,
            acc: &mut Accumulator,
        ) {
            if pos == inputs.len() {
                for (l, c) in labels.iter() {
                    acc.add_vec(&a.mu(l as u32, tuple), &(c * &coeff));
                }
                return;
            }
            for (i, c) in inputs[pos].iter() {
                tuple[pos] = i as u32;
                go(a, labels, inputs, pos + 1, &coeff * c, tuple, acc);
            }
        }
        go(self, labels, inputs, 0, Q::from(1), &mut tuple, &mut acc);
        acc.finish()
    }

    /// Replaces one structure constant without any check; used to exercise
    /// the axiom checker.
    pub fn with_product(
        mut self,
        label: u32,
        inputs: Vec<u32>,
        value: SparseVec,
    ) -> AlgebraPresentation {
        self.products.insert((label, inputs), value);
        self
    }

    /// Nonzero structure constants in a fixed order.
    pub fn products(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &SparseVec)> {
        self.products.iter()
    }

    /// The same algebra over the same operad with a larger arity bound.
    pub fn with_operad(mut self, operad: Operad) -> Result<AlgebraPresentation> {
        if operad.name() != self.operad.name() || operad.arity_bound() < self.certificate {
            return Err(Error::Invalid(
                "replacement operad must match and cover the certificate".into(),
            ));
        }
        self.operad = operad;
        Ok(self)
    }

    pub fn to_document(&self) -> AlgebraDocument {
        AlgebraDocument {
            schema: ALGEBRA_SCHEMA.into(),
            name: self.name.clone(),
            operad: self.operad.name().into(),
            certificate: self.certificate,
            carrier: self
                .degrees
                .iter()
                .zip(&self.weights)
                .map(|(&degree, &weight)| CarrierElement { degree, weight })
                .collect(),
            products: self
                .products
                .iter()
                .map(|((label, inputs), v)| ProductEntry {
                    label: *label,
                    inputs: inputs.clone(),
                    value: v.entries().to_vec(),
                })
                .collect(),
        }
    }

    /// Loads a document over one of the built-in operads with the given arity
    /// bound (at least the certificate) and runs the axiom check.
    pub fn from_document(doc: &AlgebraDocument, arity_bound: usize) -> Result<AlgebraPresentation> {
        if doc.schema != ALGEBRA_SCHEMA {
            return Err(Error::Parse(format!("unknown schema {:?}", doc.schema)));
        }
        if doc.carrier.len() > MAX_DOCUMENT_CARRIER {
            return Err(Error::Parse(format!(
                "carrier larger than {MAX_DOCUMENT_CARRIER}"
            )));
        }
        if doc.certificate == 0 || doc.certificate > MAX_DOCUMENT_CERTIFICATE {
            return Err(Error::Parse(format!(
                "certificate must lie in [1, {MAX_DOCUMENT_CERTIFICATE}]"
            )));
        }
        let bound = arity_bound.max(doc.certificate);
        let operad = builtin_operad(&doc.operad, bound)?;
        let mut products = BTreeMap::new();
        for p in &doc.products {
            if p.inputs.len() > doc.certificate
                || p.value.iter().any(|(i, _)| *i >= doc.carrier.len())
            {
                return Err(Error::Parse(format!(
                    "product μ({}; {:?}) outside the declared carrier",
                    p.label, p.inputs
                )));
            }
            if products
                .insert(
                    (p.label, p.inputs.clone()),
                    SparseVec::from_pairs(p.value.iter().cloned()),
                )
                .is_some()
            {
                return Err(Error::Parse(format!(
                    "duplicate product μ({}; {:?})",
                    p.label, p.inputs
                )));
            }
        }
        AlgebraPresentation::new(
            doc.name.clone(),
            operad,
            doc.carrier.iter().map(|c| c.degree).collect(),
            doc.carrier.iter().map(|c| c.weight).collect(),
            doc.certificate,
            products,
        )
    }

    pub fn from_json(s: &str, arity_bound: usize) -> Result<AlgebraPresentation> {
        let doc: AlgebraDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        AlgebraPresentation::from_document(&doc, arity_bound)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }
}

/// `com`, `ass` or `lie` with the given arity bound.
pub fn builtin_operad(name: &str, arity_bound: usize) -> Result<Operad> {
    match name {
        "com" => Ok(Operad::com(arity_bound)),
        "ass" => Ok(Operad::ass(arity_bound)),
        "lie" => Ok(Operad::lie(arity_bound)),
        other => Err(Error::Parse(format!(
            "unknown operad {other:?}; expected com, ass or lie"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub schema: String,
    pub name: String,
    pub operad: String,
    pub certificate: usize,
    pub carrier: Vec<CarrierElement>,
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierElement {
    pub degree: i32,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub label: u32,
    pub inputs: Vec<u32>,
    pub value: Vec<(usize, Q)>,
}

/// A zero-differential weighted complex from `(degree, weight)` pairs.
fn weighted_space(elements: impl IntoIterator<Item = (i32, usize)>) -> WeightedComplex {
    let mut weights: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (d, w) in elements {
        weights.entry(d).or_default().push(w);
    }
    let space = GradedSpace::from_pairs(weights.iter().map(|(k, v)| (*k, v.len())));
    WeightedComplex {
        complex: ChainComplex::from_space(&space),
        weights,
    }
}

/// Ordered tuples of basis indices of length `n` with total weight at most
/// `max_total`.
fn tuples(weights: &[usize], n: usize, max_total: usize) -> Vec<Vec<u32>> {
    fn go(weights: &[usize], n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let reserve = n - cur.len() - 1;
        for (i, &w) in weights.iter().enumerate() {
            if w + reserve <= left {
                cur.push(i as u32);
                go(weights, n, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n <= max_total {
        go(weights, n, max_total, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Nondecreasing tuples of basis indices of length `n` and total weight
/// exactly `total`.
fn sorted_tuples(weights: &[usize], n: usize, total: usize) -> Vec<Vec<u32>> {
    fn go(
        weights: &[usize],
        n: usize,
        start: usize,
        left: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let reserve = n - cur.len() - 1;
        for (i, &w) in weights.iter().enumerate().skip(start) {
            if w + reserve <= left {
                cur.push(i as u32);
                go(weights, n, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, n, 0, total, &mut Vec::with_capacity(n), &mut out);
    out
}

fn odd_flags(degrees: &[i32], tuple: &[u32]) -> Vec<bool> {
    tuple
        .iter()
        .map(|&i| degrees[i as usize].rem_euclid(2) == 1)
        .collect()
}

/// The stabilizer of a sorted tuple, as one entry per adjacent pair: `0`
/// when the entries differ, `1` or `−1` for the Koszul sign of swapping
/// equal entries.
fn stabilizer_signature(degrees: &[i32], tuple: &[u32]) -> Vec<i8> {
    tuple
        .windows(2)
        .map(
            |w| match (w[0] == w[1], degrees[w[0] as usize].rem_euclid(2) == 1) {
                (false, _) => 0,
                (true, false) => 1,
                (true, true) => -1,
            },
        )
        .collect()
}

/// The permutation sorting a tuple stably, as `position ↦ rank`, together
/// with the sorted tuple and the Koszul sign of the reordering.
fn sort_tuple(degrees: &[i32], tuple: &[u32]) -> (Perm, Vec<u32>, Q) {
    let n = tuple.len();
    let keys: Vec<usize> = tuple
        .iter()
        .enumerate()
        .map(|(j, &t)| t as usize * n + j)
        .collect();
    let pi = Perm::sorting(&keys);
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable();
    let order: Vec<usize> = pi.inverse().images().collect();
    let sign = koszul_sign(&order, &odd_flags(degrees, tuple));
    (pi, sorted, Q::from(sign))
}

/// The quotient of a space by relations, presented by the non-pivot basis
/// vectors of an echelon form of the relations.
#[derive(Clone, Debug)]
struct Quotient {
    relations: Echelon,
    position: FxHashMap<usize, usize>,
    free: Vec<usize>,
}

impl Quotient {
    fn new(dim: usize, relations: impl IntoIterator<Item = SparseVec>) -> Quotient {
        let mut ech = Echelon::new();
        for r in relations {
            ech.insert(r);
        }
        let free: Vec<usize> = (0..dim).filter(|&i| !ech.is_pivot(i)).collect();
        let position = free.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        Quotient {
            relations: ech,
            position,
            free,
        }
    }

    fn coords(&self, v: SparseVec) -> SparseVec {
        self.relations
            .reduce(v)
            .remap(|i| self.position.get(&i).copied())
    }
}

/// Relations `s_i·x − ε_i x` of the coinvariant quotient for a stabilizer
/// signature, given the action of `s_i` on basis vectors.
fn coinvariant_relations(
    dim: usize,
    signature: &[i8],
    act: impl Fn(usize, usize) -> SparseVec,
) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for (i, &s) in signature.iter().enumerate() {
        if s == 0 {
            continue;
        }
        for j in 0..dim {
            out.push(act(i, j).axpy(&Q::from(-(s as i64)), &SparseVec::unit(j)));
        }
    }
    out
}

/// The trivial algebra on a carrier of weight-1 vectors with the given
/// degrees; certificate 1.
pub fn trivial_algebra(o: &Operad, degrees: &[i32]) -> Result<AlgebraPresentation> {
    AlgebraPresentation::new(
        "triv",
        o.clone(),
        degrees.to_vec(),
        vec![1; degrees.len()],
        1,
        BTreeMap::new(),
    )
}

/// A degree-0 commutative associative algebra viewed over `o`: every label
/// of arity `n` acts as the iterated product. Valid over `Com` and `Ass`.
pub fn commutative_algebra(
    o: &Operad,
    name: &str,
    weights: Vec<usize>,
    product: impl Fn(u32, u32) -> SparseVec,
) -> Result<AlgebraPresentation> {
    let certificate = weights.iter().copied().max().unwrap_or(1).max(1);
    if certificate > o.arity_bound() {
        return Err(Error::ArityBound(certificate, o.arity_bound()));
    }
    let dim = weights.len();
    let mut products = BTreeMap::new();
    for n in 2..=certificate {
        for t in tuples(&weights, n, certificate) {
            let mut value = SparseVec::unit(t[0] as usize);
            for &b in &t[1..] {
                let mut acc = Accumulator::new();
                for (a, c) in value.iter() {
                    acc.add_vec(&product(a as u32, b), c);
                }
                value = acc.finish();
            }
            if !value.is_empty() {
                for l in 0..o.dim(n) as u32 {
                    products.insert((l, t.clone()), value.clone());
                }
            }
        }
    }
    AlgebraPresentation::new(
        name,
        o.clone(),
        vec![0; dim],
        weights,
        certificate,
        products,
    )
}

/// Monomials of degree `1..order` in `generators` variables, by degree then
/// lexicographically, as exponent vectors.
fn monomials(generators: usize, max_degree: usize, squarefree: bool) -> Vec<Vec<u8>> {
    fn go(g: usize, left: usize, squarefree: bool, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == g {
            out.push(cur.clone());
            return;
        }
        let top = if squarefree { left.min(1) } else { left };
        for e in (0..=top).rev() {
            cur.push(e as u8);
            go(g, left - e, squarefree, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let mut all = Vec::new();
        go(generators, d, squarefree, &mut Vec::new(), &mut all);
        out.extend(
            all.into_iter()
                .filter(|m| m.iter().map(|&e| e as usize).sum::<usize>() == d),
        );
    }
    out
}

fn monomial_algebra(
    o: &Operad,
    name: &str,
    basis: Vec<Vec<u8>>,
    keep: impl Fn(&[u8]) -> bool,
) -> Result<AlgebraPresentation> {
    let index: FxHashMap<Vec<u8>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let weights = basis
        .iter()
        .map(|m| m.iter().map(|&e| e as usize).sum())
        .collect();
    commutative_algebra(o, name, weights, |a, b| {
        let m: Vec<u8> = basis[a as usize]
            .iter()
            .zip(&basis[b as usize])
            .map(|(x, y)| x + y)
            .collect();
        match index.get(&m) {
            Some(&i) if keep(&m) => SparseVec::unit(i),
            _ => SparseVec::new(),
        }
    })
}

/// The augmentation ideal of `ℚ[x_1, …, x_g]/(monomials of degree ≥ order)`,
/// graded by polynomial degree.
pub fn truncated_polynomial(
    o: &Operad,
    generators: usize,
    order: usize,
) -> Result<AlgebraPresentation> {
    if generators == 0 || order < 2 {
        return Err(Error::Invalid(
            "a truncated polynomial algebra needs a generator and order at least 2".into(),
        ));
    }
    let basis = monomials(generators, order - 1, false);
    monomial_algebra(
        o,
        &format!("poly(g={generators},x^{order}=0)"),
        basis,
        |_| true,
    )
}

/// The augmentation ideal of `ℚ[x_1, …, x_g]/(x_1², …, x_g²)`.
pub fn square_zero_algebra(o: &Operad, generators: usize) -> Result<AlgebraPresentation> {
    if generators == 0 {
        return Err(Error::Invalid(
            "a square-zero algebra needs a generator".into(),
        ));
    }
    let basis = monomials(generators, generators, true);
    monomial_algebra(o, &format!("square-zero(g={generators})"), basis, |m| {
        m.iter().all(|&e| e <= 1)
    })
}

/// The free algebra on weight-1 generators of the given degrees, truncated
/// above weight `weight_bound`: carrier `⊕_{n ≤ w} (𝒪(n) ⊗ V^{⊗n})_{Σ_n}`
/// with structure maps given by operadic composition.
pub fn free_algebra(
    o: &Operad,
    generators: &[i32],
    weight_bound: usize,
) -> Result<AlgebraPresentation> {
    if weight_bound == 0 || weight_bound > o.arity_bound() {
        return Err(Error::ArityBound(weight_bound, o.arity_bound()));
    }
    let unit_weights = vec![1usize; generators.len()];
    let mut quotients: FxHashMap<(usize, Vec<i8>), Quotient> = FxHashMap::default();
    let mut index: FxHashMap<(Vec<u32>, usize), usize> = FxHashMap::default();
    let mut elements: Vec<(Vec<u32>, usize)> = Vec::new();
    let mut degrees = Vec::new();
    let mut weights = Vec::new();
    for n in 1..=weight_bound {
        for t in sorted_tuples(&unit_weights, n, n) {
            let sig = stabilizer_signature(generators, &t);
            let q = quotients.entry((n, sig.clone())).or_insert_with(|| {
                let rel = coinvariant_relations(o.dim(n), &sig, |i, j| {
                    o.act(&Perm::transposition(n, i), j)
                });
                Quotient::new(o.dim(n), rel)
            });
            for &l in &q.free {
                index.insert((t.clone(), l), elements.len());
                elements.push((t.clone(), l));
                degrees.push(t.iter().map(|&g| generators[g as usize]).sum());
                weights.push(n);
            }
        }
    }
    let express = |tuple: &[u32],
                   labels: &SparseVec,
                   quotients: &FxHashMap<(usize, Vec<i8>), Quotient>|
     -> SparseVec {
        let n = tuple.len();
        let (pi, sorted, sign) = sort_tuple(generators, tuple);
        let moved = o.act_vec(&pi, labels).scale(&sign);
        let q = &quotients[&(n, stabilizer_signature(generators, &sorted))];
        q.coords(moved)
            .remap(|p| Some(index[&(sorted.clone(), q.free[p])]))
    };
    let mut products = BTreeMap::new();
    for k in 2..=weight_bound {
        for t in tuples(&weights, k, weight_bound) {
            let parts: Vec<&(Vec<u32>, usize)> = t.iter().map(|&x| &elements[x as usize]).collect();
            let concat: Vec<u32> = parts
                .iter()
                .flat_map(|(tt, _)| tt.iter().copied())
                .collect();
            for l in 0..o.dim(k) {
                let mut value = SparseVec::unit(l);
                let mut arity = k;
                for (j, (tt, lj)) in parts.iter().enumerate().rev() {
                    value = o.compose_vec(arity, j, tt.len(), &value, &SparseVec::unit(*lj));
                    arity += tt.len() - 1;
                }
                let v = express(&concat, &value, &quotients);
                if !v.is_empty() {
                    products.insert((l as u32, t.clone()), v);
                }
            }
        }
    }
    AlgebraPresentation::new(
        format!("free(weight<={weight_bound})"),
        o.clone(),
        degrees,
        weights,
        weight_bound,
        products,
    )
}

/// Checks homogeneity, the certificate, equivariance under adjacent
/// transpositions and associativity `μ(ℓ ∘_i ℓ'; a) = μ(ℓ; …, μ(ℓ'; …), …)`
/// on every basis tuple whose total weight is at most the largest carrier
/// weight (all other composites vanish by homogeneity).
pub fn check_algebra_axioms(a: &AlgebraPresentation) -> AxiomReport {
    let o = &a.operad;
    let mut checked = 0usize;
    let failure = |axiom: &str,
                   arities: Vec<usize>,
                   slots: Vec<usize>,
                   elements: Vec<usize>,
                   expected: String,
                   got: String| {
        Some(AxiomFailure {
            axiom: axiom.into(),
            arities,
            slots,
            elements,
            expected,
            got,
        })
    };
    let done = |failure: Option<AxiomFailure>, checked: usize| AxiomReport { checked, failure };
    if a.max_weight() > a.certificate {
        return done(
            failure(
                "certificate",
                vec![],
                vec![],
                vec![],
                format!("weights ≤ {}", a.certificate),
                format!("weight {}", a.max_weight()),
            ),
            checked,
        );
    }
    for ((label, inputs), value) in &a.products {
        checked += 1;
        let n = inputs.len();
        let elements: Vec<usize> = std::iter::once(*label as usize)
            .chain(inputs.iter().map(|&i| i as usize))
            .collect();
        if n > a.certificate {
            return done(
                failure(
                    "certificate",
                    vec![n],
                    vec![],
                    elements,
                    "0".into(),
                    format!("{value:?}"),
                ),
                checked,
            );
        }
        let w: usize = inputs.iter().map(|&i| a.weights[i as usize]).sum();
        let d: i32 = inputs.iter().map(|&i| a.degrees[i as usize]).sum();
        if value
            .iter()
            .any(|(i, _)| a.weights[i] != w || a.degrees[i] != d)
        {
            return done(
                failure(
                    "homogeneity",
                    vec![n],
                    vec![],
                    elements,
                    format!("weight {w}, degree {d}"),
                    format!("{value:?}"),
                ),
                checked,
            );
        }
    }
    let top = a.max_weight().min(o.arity_bound());
    let odd = |i: u32| a.degrees[i as usize].rem_euclid(2) == 1;
    for n in 2..=top {
        for t in tuples(&a.weights, n, a.max_weight()) {
            for l in 0..o.dim(n) as u32 {
                for i in 0..n - 1 {
                    checked += 1;
                    let lhs = a.mu_vec(&o.act(&Perm::transposition(n, i), l as usize), &units(&t));
                    let mut swapped = t.clone();
                    swapped.swap(i, i + 1);
                    let sign = if odd(t[i]) && odd(t[i + 1]) {
                        Q::from(-1)
                    } else {
                        Q::from(1)
                    };
                    let rhs = a.mu(l, &swapped).scale(&sign);
                    if lhs != rhs {
                        let elements = std::iter::once(l as usize)
                            .chain(t.iter().map(|&x| x as usize))
                            .collect();
                        return done(
                            failure(
                                "equivariance",
                                vec![n],
                                vec![i],
                                elements,
                                format!("{rhs:?}"),
                                format!("{lhs:?}"),
                            ),
                            checked,
                        );
                    }
                }
            }
        }
    }
    for m in 2..=top {
        for k in 2..=top + 1 - m {
            let n = m + k - 1;
            for t in tuples(&a.weights, n, a.max_weight()) {
                for l in 0..o.dim(m) {
                    for l2 in 0..o.dim(k) {
                        for i in 0..m {
                            checked += 1;
                            let lhs = a.mu_vec(&o.compose(m, i, k, l, l2), &units(&t));
                            let inner = a.mu(l2 as u32, &t[i..i + k]);
                            let mut args = units(&t[..i]);
                            args.push(inner);
                            args.extend(units(&t[i + k..]));
                            let rhs = a.mu_vec(&SparseVec::unit(l), &args);
                            if lhs != rhs {
                                let elements = [l, l2]
                                    .into_iter()
                                    .chain(t.iter().map(|&x| x as usize))
                                    .collect();
                                return done(
                                    failure(
                                        "associativity",
                                        vec![m, k],
                                        vec![i],
                                        elements,
                                        format!("{rhs:?}"),
                                        format!("{lhs:?}"),
                                    ),
                                    checked,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    done(None, checked)
}

fn units(t: &[u32]) -> Vec<SparseVec> {
    t.iter().map(|&i| SparseVec::unit(i as usize)).collect()
}

/// A chain of `B(τ_n𝒪, 𝒪, A)`: a sorted tuple of carrier basis indices and
/// a levelled simplex with one leaf per tuple entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarChain {
    pub tuple: Vec<u32>,
    pub simplex: Simplex,
}

/// Options restricting the chains of an [`AlgebraBar`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BarOptions {
    /// Keep only chains whose root has exactly this many inputs: the fiber
    /// of `t_n A → t_{n−1} A` when equal to the truncation bound.
    pub root_arity: Option<usize>,
    /// Drop simplices with more levels; homology stays exact in total
    /// degrees below this bound for carriers in degree 0.
    pub max_levels: Option<usize>,
}

type BlockKey = (usize, usize, Vec<i8>);

/// The weight-`w` piece of `B(τ_bound 𝒪, 𝒪, A)`.
#[derive(Clone, Debug)]
pub struct AlgebraBar {
    bound: usize,
    weight: usize,
    options: BarOptions,
    simplices: FxHashMap<(usize, usize), Vec<Simplex>>,
    simplex_index: FxHashMap<(usize, Simplex), usize>,
    quotients: FxHashMap<BlockKey, Quotient>,
    index: FxHashMap<(Vec<u32>, usize, usize), (i32, usize)>,
    basis: BTreeMap<i32, Vec<BarChain>>,
    complex: ChainComplex,
}

impl AlgebraBar {
    pub fn build(
        a: &AlgebraPresentation,
        bound: usize,
        weight: usize,
        options: BarOptions,
    ) -> Result<AlgebraBar> {
        let o = &a.operad;
        if weight == 0 || weight > o.arity_bound() {
            return Err(Error::ArityBound(weight, o.arity_bound()));
        }
        let mut bar = AlgebraBar {
            bound,
            weight,
            options,
            simplices: FxHashMap::default(),
            simplex_index: FxHashMap::default(),
            quotients: FxHashMap::default(),
            index: FxHashMap::default(),
            basis: BTreeMap::new(),
            complex: ChainComplex::zero(),
        };
        for r in 1..=weight {
            for (p, list) in enumerate_simplices_upto(o, bound, r, options.max_levels.unwrap_or(r))
            {
                let list: Vec<Simplex> = list
                    .into_iter()
                    .filter(|s| options.root_arity.is_none_or(|n| s.root_arity(r) == n))
                    .collect();
                for (i, s) in list.iter().enumerate() {
                    bar.simplex_index.insert((r, s.clone()), i);
                }
                bar.simplices.insert((r, p), list);
            }
        }
        let mut blocks: Vec<(usize, usize)> = bar.simplices.keys().copied().collect();
        blocks.sort_unstable();
        for (r, p) in blocks {
            for t in sorted_tuples(&a.weights, r, weight) {
                let sig = stabilizer_signature(&a.degrees, &t);
                let q = bar.quotient(a, r, p, &sig).clone();
                let deg = p as i32 + t.iter().map(|&i| a.degrees[i as usize]).sum::<i32>();
                for &s in &q.free {
                    let list = bar.basis.entry(deg).or_default();
                    bar.index.insert((t.clone(), p, s), (deg, list.len()));
                    list.push(BarChain {
                        tuple: t.clone(),
                        simplex: bar.simplices[&(r, p)][s].clone(),
                    });
                }
            }
        }
        let mut diffs = Vec::new();
        for (&k, chains) in &bar.basis {
            let rows = bar.basis.get(&(k - 1)).map_or(0, Vec::len);
            let cols = chains
                .iter()
                .map(|c| bar.differential(a, c))
                .collect::<Result<Vec<_>>>()?;
            diffs.push((k, RationalMatrix::from_columns(rows, cols)?));
        }
        bar.complex = ChainComplex::new(bar.basis.iter().map(|(k, v)| (*k, v.len())), diffs)?;
        Ok(bar)
    }

    fn quotient(&mut self, a: &AlgebraPresentation, r: usize, p: usize, sig: &[i8]) -> &Quotient {
        let key = (r, p, sig.to_vec());
        if !self.quotients.contains_key(&key) {
            let list = &self.simplices[&(r, p)];
            let index = &self.simplex_index;
            let rel = coinvariant_relations(list.len(), sig, |i, j| {
                let mut acc = Accumulator::new();
                for (s, c) in act_simplex(&a.operad, &list[j], r, &Perm::transposition(r, i)) {
                    acc.add(index[&(r, s)], &c);
                }
                acc.finish()
            });
            self.quotients
                .insert(key.clone(), Quotient::new(list.len(), rel));
        }
        &self.quotients[&key]
    }

    /// Coordinates of `Σ c · (tuple, simplex)` for an arbitrary tuple order.
    fn express(
        &self,
        a: &AlgebraPresentation,
        terms: Vec<(Vec<u32>, Simplex, Q)>,
        acc: &mut Accumulator,
    ) -> Result<()> {
        let mut grouped: BTreeMap<(Vec<u32>, usize), Accumulator> = BTreeMap::new();
        for (tuple, simplex, c) in terms {
            let r = tuple.len();
            let (pi, sorted, sign) = sort_tuple(&a.degrees, &tuple);
            let moved = if pi.is_identity() {
                vec![(simplex, Q::from(1))]
            } else {
                act_simplex(&a.operad, &simplex, r, &pi)
            };
            for (s, x) in moved {
                if self
                    .options
                    .root_arity
                    .is_some_and(|n| s.root_arity(r) != n)
                {
                    continue;
                }
                let p = s.level_count();
                let Some(&i) = self.simplex_index.get(&(r, s)) else {
                    return Err(Error::Invalid("bar differential left the basis".into()));
                };
                grouped
                    .entry((sorted.clone(), p))
                    .or_default()
                    .add(i, &(&(&c * &sign) * &x));
            }
        }
        for ((tuple, p), v) in grouped {
            let r = tuple.len();
            let key = (r, p, stabilizer_signature(&a.degrees, &tuple));
            let q = &self.quotients[&key];
            for (pos, c) in q.coords(v.finish()).iter() {
                let (_, idx) = self.index[&(tuple.clone(), p, q.free[pos])];
                acc.add(idx, c);
            }
        }
        Ok(())
    }

    fn differential(&self, a: &AlgebraPresentation, chain: &BarChain) -> Result<SparseVec> {
        let o = &a.operad;
        let r = chain.tuple.len();
        let x = &chain.simplex;
        let p = x.level_count();
        let mut terms: Vec<(Vec<u32>, Simplex, Q)> = inner_differential(o, x, r, self.bound)
            .into_iter()
            .map(|(s, c)| (chain.tuple.clone(), s, c))
            .collect();
        if p >= 1 {
            let levels = x.levels(r);
            let last = &levels[p];
            let kids = children(last, &levels[p + 1]);
            let order: Vec<usize> = kids.iter().flatten().map(|&l| l as usize).collect();
            let regroup = koszul_sign(&order, &odd_flags(&a.degrees, &chain.tuple));
            let sign = Q::from(if p.is_multiple_of(2) {
                regroup
            } else {
                -regroup
            });
            let products: Vec<SparseVec> = kids
                .iter()
                .zip(&x.labels[p])
                .map(|(leaves, &l)| {
                    let inputs: Vec<u32> =
                        leaves.iter().map(|&j| chain.tuple[j as usize]).collect();
                    a.mu(l, &inputs)
                })
                .collect();
            if products.iter().all(|v| !v.is_empty()) {
                let reps: Vec<u8> = kids.iter().map(|leaves| leaves[0]).collect();
                let parts: Vec<Vec<u8>> = x.parts[..p - 1]
                    .iter()
                    .map(|part| {
                        let raw: Vec<u8> = reps.iter().map(|&l| part[l as usize]).collect();
                        renumber(&raw)
                    })
                    .collect();
                let simplex = Simplex {
                    parts,
                    labels: x.labels[..p].to_vec(),
                };
                let mut expanded: Vec<(Vec<u32>, Q)> = vec![(Vec::new(), sign)];
                for v in &products {
                    expanded = expanded
                        .into_iter()
                        .flat_map(|(prefix, c)| {
                            v.iter().map(move |(i, x)| {
                                let mut t = prefix.clone();
                                t.push(i as u32);
                                (t, &c * x)
                            })
                        })
                        .collect();
                }
                debug_assert_eq!(block_count(last), products.len());
                terms.extend(expanded.into_iter().map(|(t, c)| (t, simplex.clone(), c)));
            }
        }
        let mut acc = Accumulator::new();
        self.express(a, terms, &mut acc)?;
        Ok(acc.finish())
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn basis(&self, k: i32) -> &[BarChain] {
        self.basis.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn homology(&self) -> GradedSpace {
        self.complex.homology_dims()
    }

    /// The class of the carrier basis vector `i` (of this piece's weight) in
    /// degree `|a_i|`: the root unit on a single leaf.
    pub fn carrier_vector(&self, a: &AlgebraPresentation, i: usize) -> Result<SparseVec> {
        let simplex = Simplex {
            parts: Vec::new(),
            labels: vec![vec![0]],
        };
        let mut acc = Accumulator::new();
        self.express(a, vec![(vec![i as u32], simplex, Q::from(1))], &mut acc)?;
        Ok(acc.finish())
    }
}

fn renumber(raw: &[u8]) -> Vec<u8> {
    let mut map: FxHashMap<u8, u8> = FxHashMap::default();
    raw.iter()
        .map(|&b| {
            let next = map.len() as u8;
            *map.entry(b).or_insert(next)
        })
        .collect()
}

/// Weight pieces `1..=window` of `cot(A) = B(𝟏, 𝒪, A)`.
pub fn cotangent_fiber(
    a: &AlgebraPresentation,
    window: usize,
) -> Result<BTreeMap<usize, AlgebraBar>> {
    (1..=window)
        .map(|w| Ok((w, AlgebraBar::build(a, 1, w, BarOptions::default())?)))
        .collect()
}

/// Weight pieces `1..=window` of `t_n A = B(τ_n𝒪, 𝒪, A)`.
pub fn algebra_truncate(
    a: &AlgebraPresentation,
    n: usize,
    window: usize,
) -> Result<BTreeMap<usize, AlgebraBar>> {
    if n == 0 {
        return Err(Error::Invalid("truncations start at n = 1".into()));
    }
    (1..=window)
        .map(|w| Ok((w, AlgebraBar::build(a, n, w, BarOptions::default())?)))
        .collect()
}

/// The tower map `t_{n+1} A → t_n A` on one weight piece: chains whose root
/// has more than `n` inputs go to zero.
pub fn algebra_tower_map(
    a: &AlgebraPresentation,
    source: &AlgebraBar,
    target: &AlgebraBar,
) -> Result<ChainMap> {
    if source.weight != target.weight
        || source.bound < target.bound
        || source.options != target.options
    {
        return Err(Error::Invalid(
            "tower maps go from a larger truncation to a smaller one in the same weight".into(),
        ));
    }
    let mut comps = Vec::new();
    for (&k, chains) in &source.basis {
        let cols = chains
            .iter()
            .map(|c| {
                let mut acc = Accumulator::new();
                if c.simplex.root_arity(c.tuple.len()) <= target.bound {
                    target.express(
                        a,
                        vec![(c.tuple.clone(), c.simplex.clone(), Q::from(1))],
                        &mut acc,
                    )?;
                }
                Ok(acc.finish())
            })
            .collect::<Result<Vec<_>>>()?;
        comps.push((
            k,
            RationalMatrix::from_columns(target.basis(k).len(), cols)?,
        ));
    }
    ChainMap::new(source.complex.clone(), target.complex.clone(), comps)
}

fn weights_json(m: &BTreeMap<usize, GradedSpace>) -> serde_json::Value {
    serde_json::Value::Object(
        m.iter()
            .map(|(w, s)| (w.to_string(), space_json(s)))
            .collect(),
    )
}

fn homology_by_weight(pieces: &BTreeMap<usize, AlgebraBar>) -> BTreeMap<usize, GradedSpace> {
    pieces.iter().map(|(w, b)| (*w, b.homology())).collect()
}

/// `H(cot(free V)) ≅ V` in every weight up to the truncation of the free
/// algebra.
pub fn cot_of_free_check(
    o: &Operad,
    generators: &[i32],
    weight_bound: usize,
) -> Result<CheckResult> {
    let a = free_algebra(o, generators, weight_bound)?;
    let got = homology_by_weight(&cotangent_fiber(&a, weight_bound)?);
    let expected: BTreeMap<usize, GradedSpace> = (1..=weight_bound)
        .map(|w| {
            (
                w,
                if w == 1 {
                    GradedSpace::from_pairs(generators.iter().map(|&d| (d, 1)))
                } else {
                    GradedSpace::new()
                },
            )
        })
        .collect();
    Ok(CheckResult::new("cot_of_free")
        .param("operad", o.name())
        .param("generators", generators)
        .param("weight_bound", weight_bound)
        .compare(weights_json(&expected), weights_json(&got)))
}

/// `H(cot(triv V))` agrees weight by weight with the homology of
/// `(B𝒪(w) ⊗ V^{⊗w})_{Σ_w}`.
pub fn cot_of_trivial_check(o: &Operad, generators: &[i32], window: usize) -> Result<CheckResult> {
    let a = trivial_algebra(o, generators)?;
    let got = homology_by_weight(&cotangent_fiber(&a, window)?);
    let bar = SymSeq::new(
        window,
        (1..=window)
            .map(|n| bar_complex(o, n).map(|b| b.sigma().clone()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let v = a.carrier();
    let mut expected = BTreeMap::new();
    for w in 1..=window {
        let e = extended_powers(&bar, w, &v)?;
        expected.insert(w, e.coinvariant().homology_dims());
    }
    Ok(CheckResult::new("cot_of_trivial")
        .param("operad", o.name())
        .param("generators", generators)
        .param("window", window)
        .compare(weights_json(&expected), weights_json(&got)))
}

/// The span of all `μ_k(ℓ; b)` with `k ≥ m` and total weight `w`.
fn power_ideal(a: &AlgebraPresentation, m: usize, w: usize) -> Echelon {
    let mut ech = Echelon::new();
    for ((_, inputs), v) in &a.products {
        if inputs.len() >= m && inputs.iter().map(|&i| a.weights[i as usize]).sum::<usize>() == w {
            ech.insert(v.clone());
        }
    }
    ech
}

/// `H_0(t_n A) ≅ A/A^{n+1}` for a degree-0 algebra: in each weight the map
/// `a ↦ [a]` into `H_0(t_n A)` is onto, its kernel contains `A^{n+1}` (the
/// span of structure maps of arity above `n`), and its rank is
/// `dim A − dim A^{n+1}`. Degree-0 chains have at most `n` inputs, so
/// `H_0(t_n A)` vanishes above weight `n · max_weight`; weights are checked up
/// to that bound or the operad's arity bound, whichever is smaller, and the
/// report records whether the check was exhaustive.
pub fn pi0_truncation_check(a: &AlgebraPresentation, n: usize) -> Result<CheckResult> {
    if !a.is_degree_zero() {
        return Err(Error::Invalid(
            "the π₀ check needs a carrier concentrated in degree 0".into(),
        ));
    }
    let top = n * a.max_weight();
    let window = top.min(a.operad.arity_bound());
    let mut expected = BTreeMap::new();
    let mut got = BTreeMap::new();
    let mut pass = true;
    for w in 1..=window {
        let bar = AlgebraBar::build(
            a,
            n,
            w,
            BarOptions {
                root_arity: None,
                max_levels: Some(1),
            },
        )?;
        let d1 = bar.complex.differential(1);
        let h0 = bar.complex.dim(0) - d1.rank();
        let in_weight: Vec<usize> = (0..a.dim()).filter(|&i| a.weights[i] == w).collect();
        let ideal = power_ideal(a, n + 1, w);
        let ideal_dim = ideal.rank();
        let mut image = Echelon::new();
        for col in d1.columns() {
            image.insert(col.clone());
        }
        let boundaries = image.rank();
        let reps = in_weight
            .iter()
            .map(|&i| bar.carrier_vector(a, i))
            .collect::<Result<Vec<_>>>()?;
        let mut with_reps = image.clone();
        for r in &reps {
            with_reps.insert(r.clone());
        }
        let induced_rank = with_reps.rank() - boundaries;
        let mut kernel_ok = true;
        for ((_, inputs), v) in &a.products {
            if inputs.len() > n && inputs.iter().map(|&i| a.weights[i as usize]).sum::<usize>() == w
            {
                let mut rep = Accumulator::new();
                for (i, c) in v.iter() {
                    rep.add_vec(
                        &reps[in_weight.binary_search(&i).expect("homogeneous product")],
                        c,
                    );
                }
                if !image.contains(&rep.finish()) {
                    kernel_ok = false;
                }
            }
        }
        let quotient_dim = in_weight.len() - ideal_dim;
        pass &= h0 == quotient_dim && induced_rank == quotient_dim && kernel_ok;
        expected.insert(w.to_string(), json!({"dim": quotient_dim}));
        got.insert(
            w.to_string(),
            json!({"dim": h0, "induced_rank": induced_rank, "kernel_contains_power": kernel_ok}),
        );
    }
    Ok(CheckResult::new("pi0_truncation")
        .param("algebra", a.name())
        .param("n", n)
        .param("window", window)
        .param("exhaustive", window == top)
        .outcome(json!(expected), json!(got), pass))
}

/// The homology of the fiber of `t_n A → t_{n−1} A` agrees weight by weight
/// with `D_n^𝒪(H(cot A)) = (𝒪(n) ⊗ H(cot A)^{⊗n})_{Σ_n}`.
pub fn graded_fiber_check(a: &AlgebraPresentation, n: usize, window: usize) -> Result<CheckResult> {
    if n < 2 {
        return Err(Error::Invalid("the graded fiber check needs n ≥ 2".into()));
    }
    let o = &a.operad;
    let mut got = BTreeMap::new();
    for w in 1..=window {
        let fiber = AlgebraBar::build(
            a,
            n,
            w,
            BarOptions {
                root_arity: Some(n),
                max_levels: None,
            },
        )?;
        got.insert(w, fiber.homology());
    }
    let mut expected: BTreeMap<usize, GradedSpace> =
        (1..=window).map(|w| (w, GradedSpace::new())).collect();
    if window >= n {
        let cot = homology_by_weight(&cotangent_fiber(a, window + 1 - n)?);
        let h = weighted_space(cot.iter().flat_map(|(&w, s)| {
            s.iter()
                .flat_map(move |(k, d)| std::iter::repeat_n((k, w), d))
        }));
        let dn = extended_powers(&o.to_symseq()?, n, &h)?.weighted();
        for (w, s) in dn.homology_by_weight() {
            if w <= window {
                expected.insert(w, s);
            }
        }
    }
    Ok(CheckResult::new("graded_fiber")
        .param("algebra", a.name())
        .param("operad", o.name())
        .param("n", n)
        .param("window", window)
        .compare(weights_json(&expected), weights_json(&got)))
}

/// `⊕_{n<k≤window} D_k^𝒪(V)` has no homology in degrees `≤ n` for `V` in
/// degrees at least 1.
pub fn remainder_connectivity_check(
    o: &Operad,
    generators: &[i32],
    n: usize,
    window: usize,
) -> Result<CheckResult> {
    if generators.iter().any(|&d| d < 1) {
        return Err(Error::Invalid(
            "the remainder connectivity check needs V in degrees ≥ 1".into(),
        ));
    }
    if window < n + 1 {
        return Err(Error::Invalid("the window must be at least n + 1".into()));
    }
    let s = o.to_symseq()?;
    let v = weighted_space(generators.iter().map(|&d| (d, 1)));
    let mut total = GradedSpace::new();
    for k in n + 1..=window {
        total = total.direct_sum(&extended_powers(&s, k, &v)?.coinvariant().homology_dims());
    }
    let pass = total.min_degree().is_none_or(|m| m > n as i32);
    Ok(CheckResult::new("remainder_connectivity")
        .param("operad", o.name())
        .param("generators", generators)
        .param("n", n)
        .param("window", window)
        .outcome(
            json!({"lowest_degree_above": n}),
            json!({"homology": space_json(&total)}),
            pass,
        ))
}

/// `H(t_n A)_w ≅ A_w` for every weight `w ≤ n`: a chain of weight `w` has at
/// most `w` leaves, so the root bound of `τ_n𝒪` is never reached and the
/// piece is the contractible resolution `B(𝒪, 𝒪, A)_w`.
pub fn stabilization_check(a: &AlgebraPresentation, n: usize) -> Result<CheckResult> {
    let window = n.min(a.operad.arity_bound());
    let got = homology_by_weight(&algebra_truncate(a, n, window)?);
    let expected: BTreeMap<usize, GradedSpace> =
        (1..=window).map(|w| (w, a.carrier_space(w))).collect();
    Ok(CheckResult::new("tower_stabilization")
        .param("algebra", a.name())
        .param("n", n)
        .param("window", window)
        .compare(weights_json(&expected), weights_json(&got)))
}

/// The bundled test algebras over `o`; needs an arity bound of at least 4.
pub fn test_corpus(o: &Operad) -> Result<Vec<AlgebraPresentation>> {
    let mut out = vec![
        free_algebra(o, &[0], 4)?,
        free_algebra(o, &[1], 3)?.renamed("free-odd(weight<=3)"),
        trivial_algebra(o, &[0, 0])?.renamed("triv(2 even)"),
        trivial_algebra(o, &[1])?.renamed("triv(1 odd)"),
    ];
    match o.name() {
        "com" | "ass" => {
            out.push(square_zero_algebra(o, 2)?);
            out.push(truncated_polynomial(o, 1, 5)?);
            out.push(truncated_polynomial(o, 2, 3)?);
        }
        _ => {
            out.push(free_algebra(o, &[0, 0], 2)?.renamed("heisenberg"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_algebra_dims() {
        assert_eq!(free_algebra(&Operad::com(3), &[0], 3).unwrap().dim(), 3);
        assert_eq!(free_algebra(&Operad::ass(3), &[0, 0], 2).unwrap().dim(), 6);
        assert_eq!(free_algebra(&Operad::com(3), &[], 3).unwrap().dim(), 0);
        assert_eq!(free_algebra(&Operad::com(3), &[1], 3).unwrap().dim(), 1);
        assert_eq!(
            free_algebra(&Operad::lie(4), &[0, 0], 4).unwrap().dim(),
            2 + 1 + 2 + 3
        );
        assert_eq!(free_algebra(&Operad::lie(3), &[1], 3).unwrap().dim(), 2);
    }

    #[test]
    fn corrupted_product_is_rejected() {
        let a = square_zero_algebra(&Operad::com(2), 2).unwrap();
        assert!(check_algebra_axioms(&a).passed());
        let bad = a.with_product(0, vec![0, 1], SparseVec::single(2, Q::from(2)));
        let f = check_algebra_axioms(&bad)
            .failure
            .expect("corrupted algebra fails");
        assert_eq!(
            (f.axiom.as_str(), f.arities.as_slice(), f.slots.as_slice()),
            ("equivariance", &[2][..], &[0][..])
        );
        let bad = truncated_polynomial(&Operad::com(3), 1, 3)
            .unwrap()
            .with_product(0, vec![0, 0], SparseVec::unit(0));
        assert_eq!(
            check_algebra_axioms(&bad).failure.unwrap().axiom,
            "homogeneity"
        );
    }

    #[test]
    fn lie_rejects_commutative_products() {
        assert!(truncated_polynomial(&Operad::lie(3), 1, 3).is_err());
    }

    #[test]
    fn cot_small() {
        let r = cot_of_free_check(&Operad::com(3), &[0, 0], 3).unwrap();
        assert!(r.pass, "{r:#?}");
        let r = cot_of_trivial_check(&Operad::com(3), &[0], 3).unwrap();
        assert!(r.pass, "{r:#?}");
        let cot = homology_by_weight(
            &cotangent_fiber(&trivial_algebra(&Operad::com(3), &[0]).unwrap(), 2).unwrap(),
        );
        assert_eq!(cot[&1], GradedSpace::line(0));
        assert_eq!(cot[&2], GradedSpace::line(1));
    }

    #[test]
    fn pi0_small() {
        let a = truncated_polynomial(&Operad::com(5), 1, 5).unwrap();
        for n in 1..=5 {
            let r = pi0_truncation_check(&a, n).unwrap();
            assert!(r.pass, "{r:#?}");
        }
        let r = pi0_truncation_check(&a, 2).unwrap();
        assert_eq!(r.expected["1"]["dim"], 1);
        assert_eq!(r.expected["2"]["dim"], 1);
        assert_eq!(r.expected["3"]["dim"], 0);
    }

    #[test]
    fn graded_fiber_small() {
        let a = free_algebra(&Operad::com(3), &[0], 3).unwrap();
        let r = graded_fiber_check(&a, 2, 3).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.got["2"], json!({"0": 1}));
        let t = trivial_algebra(&Operad::com(3), &[1]).unwrap();
        let r = graded_fiber_check(&t, 2, 3).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.got["2"], json!({}));
    }

    #[test]
    fn tower_and_stabilization() {
        let a = free_algebra(&Operad::com(4), &[0], 4).unwrap();
        let t2 = algebra_truncate(&a, 2, 4).unwrap();
        assert_eq!(t2[&1].homology(), GradedSpace::line(0));
        assert_eq!(t2[&2].homology(), GradedSpace::line(0));
        assert!(t2[&3].homology().dim(0) == 0);
        let t3 = algebra_truncate(&a, 3, 4).unwrap();
        for w in 1..=4 {
            algebra_tower_map(&a, &t3[&w], &t2[&w]).unwrap();
        }
        assert!(stabilization_check(&a, 4).unwrap().pass);
        let p = truncated_polynomial(&Operad::com(4), 1, 4).unwrap();
        for n in 1..=4 {
            assert!(stabilization_check(&p, n).unwrap().pass);
        }
        let beyond = algebra_truncate(&p, 3, 4).unwrap();
        assert_eq!(p.carrier_space(4), GradedSpace::new());
        assert_eq!(beyond[&4].homology(), GradedSpace::from_pairs([(1, 1)]));
    }

    #[test]
    fn remainder_small() {
        let r = remainder_connectivity_check(&Operad::com(3), &[1], 1, 3).unwrap();
        assert!(r.pass, "{r:#?}");
        assert!(remainder_connectivity_check(&Operad::com(3), &[0], 1, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = square_zero_algebra(&Operad::com(2), 2).unwrap();
        let b = AlgebraPresentation::from_json(&a.to_json(), 2).unwrap();
        assert_eq!(a.to_document(), b.to_document());
        let mut doc = a.to_document();
        doc.products[0].value[0].1 = Q::from(3);
        assert!(AlgebraPresentation::from_document(&doc, 2).is_err());
    }
}
