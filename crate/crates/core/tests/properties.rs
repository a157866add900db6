use operadkit::complex::{direct_sum, shift_complex, tensor_complexes, ChainComplex, GradedSpace};
use operadkit::linalg::RationalMatrix;
use operadkit::operad::Operad;
use operadkit::perm::{CycleType, Perm};
use operadkit::sigma::SigmaComplex;
use operadkit::symseq::{compose, same_characters, SymSeq};
use operadkit::Q;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const SEED: [u8; 32] = *b"operadkit-property-suite-seed-01";
const ARITY_BOUND: usize = 4;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

/// A complex with a known homology: a direct sum of lines `ℚ[k]` and
/// contractible pieces `ℚ[k] → ℚ[k−1]` with differential `c ≠ 0`, with
/// every degree conjugated by an invertible matrix.
#[derive(Clone, Debug)]
struct KnownComplex {
    complex: ChainComplex,
    homology: GradedSpace,
}

fn line(k: i32) -> ChainComplex {
    ChainComplex::from_space(&GradedSpace::line(k))
}

fn contractible(k: i32, c: i64) -> ChainComplex {
    ChainComplex::new(
        [(k, 1), (k - 1, 1)],
        [(k, RationalMatrix::from_i64(&[&[c]]))],
    )
    .unwrap()
}

/// `E = I + c·e_{ij}` and its inverse.
fn elementary(n: usize, i: usize, j: usize, c: i64) -> (RationalMatrix, RationalMatrix) {
    let mut e = RationalMatrix::identity(n);
    let mut inv = RationalMatrix::identity(n);
    if i != j {
        e.set(i, j, Q::from_int(c));
        inv.set(i, j, Q::from_int(-c));
    }
    (e, inv)
}

fn conjugate(c: &ChainComplex, ops: &[(usize, usize, i64)]) -> ChainComplex {
    let mut change = std::collections::BTreeMap::new();
    for k in c.degrees() {
        let n = c.dim(k);
        let mut g = RationalMatrix::identity(n);
        let mut g_inv = RationalMatrix::identity(n);
        for &(i, j, s) in ops {
            let (e, e_inv) = elementary(n, i % n, j % n, s);
            g = e.mul(&g).unwrap();
            g_inv = g_inv.mul(&e_inv).unwrap();
        }
        change.insert(k, (g, g_inv));
    }
    let diffs: Vec<(i32, RationalMatrix)> = c
        .degrees()
        .filter_map(|k| {
            let (_, src_inv) = &change[&k];
            let (tgt, _) = change.get(&(k - 1))?;
            Some((
                k,
                tgt.mul(&c.differential(k)).unwrap().mul(src_inv).unwrap(),
            ))
        })
        .collect();
    ChainComplex::new(c.space().iter(), diffs).unwrap()
}

fn known_complex() -> impl Strategy<Value = KnownComplex> {
    let piece = prop_oneof![
        (-2i32..=2).prop_map(|k| (line(k), GradedSpace::line(k))),
        (-1i32..=2, prop_oneof![-3i64..=-1, 1i64..=3])
            .prop_map(|(k, c)| (contractible(k, c), GradedSpace::new())),
    ];
    (
        prop::collection::vec(piece, 0..5),
        prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..4),
    )
        .prop_map(|(pieces, ops)| {
            let mut complex = ChainComplex::zero();
            let mut homology = GradedSpace::new();
            for (c, h) in pieces {
                complex = direct_sum(&complex, &c);
                homology = homology.direct_sum(&h);
            }
            KnownComplex {
                complex: conjugate(&complex, &ops),
                homology,
            }
        })
}

/// A `Σ_n`-complex drawn from trivial, sign, regular and operad terms,
/// shifted into a small degree range.
fn sigma_term(n: usize) -> impl Strategy<Value = SigmaComplex> {
    (0usize..5, 1usize..=2, -1i32..=1).prop_map(move |(kind, mult, shift)| {
        let base = match kind {
            0 => SigmaComplex::trivial(
                n,
                ChainComplex::from_space(&GradedSpace::from_pairs([(0, mult)])),
            ),
            1 => SigmaComplex::trivial(n, ChainComplex::unit()).sign_twist(),
            2 => SigmaComplex::regular(n),
            3 => Operad::lie(n).term(n).unwrap(),
            _ => Operad::com(n)
                .term(n)
                .unwrap()
                .tensor(&Operad::lie(n).term(n).unwrap())
                .unwrap(),
        };
        base.shift(shift)
    })
}

fn symseq() -> impl Strategy<Value = SymSeq> {
    let term = |n: usize| prop::option::weighted(0.7, sigma_term(n));
    let low_arities = (1..=3).map(term).collect::<Vec<_>>();
    let top = prop::option::weighted(
        0.4,
        (0usize..4, -1i32..=1).prop_map(|(kind, s)| {
            let n = ARITY_BOUND;
            match kind {
                0 => SigmaComplex::trivial(n, ChainComplex::unit()),
                1 => SigmaComplex::trivial(n, ChainComplex::unit()).sign_twist(),
                2 => Operad::lie(n).term(n).unwrap(),
                _ => Operad::com(n).term(n).unwrap(),
            }
            .shift(s)
        }),
    );
    (low_arities, top).prop_map(|(low, top)| {
        SymSeq::new(ARITY_BOUND, low.into_iter().chain([top]).flatten()).unwrap()
    })
}

fn same_symseq(a: &SymSeq, b: &SymSeq) -> bool {
    (1..=ARITY_BOUND).all(|n| a.space(n) == b.space(n)) && same_characters(a, b)
}

#[test]
fn homology_of_known_complexes() {
    runner(200)
        .run(&known_complex(), |k| {
            prop_assert_eq!(k.complex.homology_dims(), k.homology.clone());
            prop_assert_eq!(
                k.complex.euler_characteristic(),
                k.homology.euler_characteristic()
            );
            Ok(())
        })
        .unwrap();
}

#[test]
fn kunneth() {
    runner(200)
        .run(&(known_complex(), known_complex()), |(a, b)| {
            let t = tensor_complexes(&a.complex, &b.complex).unwrap();
            prop_assert_eq!(t.homology_dims(), a.homology.tensor(&b.homology));
            prop_assert_eq!(
                t.euler_characteristic(),
                a.complex.euler_characteristic() * b.complex.euler_characteristic()
            );
            Ok(())
        })
        .unwrap();
}

#[test]
fn shift_moves_homology() {
    runner(200)
        .run(&(known_complex(), -3i32..=3), |(a, k)| {
            let s = shift_complex(&a.complex, k);
            prop_assert_eq!(s.homology_dims(), a.homology.shift(k));
            Ok(())
        })
        .unwrap();
}

#[test]
fn composition_product_is_associative() {
    runner(200)
        .run(&(symseq(), symseq(), symseq()), |(a, b, c)| {
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert!(same_symseq(&left, &right));
            Ok(())
        })
        .unwrap();
}

#[test]
fn composition_product_unit_laws() {
    let unit = SymSeq::unit(ARITY_BOUND);
    runner(200)
        .run(&symseq(), |a| {
            prop_assert!(same_symseq(&compose(&unit, &a).unwrap(), &a));
            prop_assert!(same_symseq(&compose(&a, &unit).unwrap(), &a));
            Ok(())
        })
        .unwrap();
}

fn trace_at(s: &SigmaComplex, p: &Perm) -> Vec<(i32, Q)> {
    s.complex().degrees().map(|k| (k, s.trace(p, k))).collect()
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

#[test]
fn tensor_characters_multiply() {
    let strategy = (2usize..=4).prop_flat_map(|n| (sigma_term(n), sigma_term(n), perm(n)));
    runner(100)
        .run(&strategy, |(a, b, p)| {
            let t = a.tensor(&b).unwrap();
            let ta = trace_at(&a, &p);
            let tb = trace_at(&b, &p);
            let mut expected = std::collections::BTreeMap::<i32, Q>::new();
            for (i, x) in &ta {
                for (j, y) in &tb {
                    *expected.entry(i + j).or_default() += &(x * y);
                }
            }
            for (k, v) in trace_at(&t, &p) {
                prop_assert_eq!(v, expected.get(&k).cloned().unwrap_or_default());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn characters_are_class_functions() {
    let strategy = (2usize..=4).prop_flat_map(|n| (sigma_term(n), perm(n), perm(n)));
    runner(100)
        .run(&strategy, |(s, p, q)| {
            let conj = q.compose(&p).compose(&q.inverse());
            prop_assert_eq!(trace_at(&s, &p), trace_at(&s, &conj));
            let rep = CycleType::new(p.cycle_type().parts().to_vec()).representative();
            prop_assert_eq!(trace_at(&s, &p), trace_at(&s, &rep));
            Ok(())
        })
        .unwrap();
}

#[test]
fn sign_twist_multiplies_by_sign() {
    let strategy = (2usize..=4).prop_flat_map(|n| (sigma_term(n), perm(n)));
    runner(100)
        .run(&strategy, |(s, p)| {
            let sign = Q::from_int(p.sign());
            let twisted = trace_at(&s.sign_twist(), &p);
            let expected: Vec<(i32, Q)> = trace_at(&s, &p)
                .into_iter()
                .map(|(k, v)| (k, &v * &sign))
                .collect();
            prop_assert_eq!(twisted, expected);
            Ok(())
        })
        .unwrap();
}
