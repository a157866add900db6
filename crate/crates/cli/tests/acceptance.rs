//! End-to-end acceptance suite. Every criterion is evaluated exactly over ℚ
//! and reported on one line; the process fails if any criterion fails.

use std::process::Command;
use std::time::Instant;

use operadkit::alg::{
    cot_of_free_check, cot_of_trivial_check, cotangent_fiber, graded_fiber_check,
    pi0_truncation_check, remainder_connectivity_check, test_corpus, truncated_polynomial,
};
use operadkit::bar::{
    bar_complex, bar_homology, check_bar_term_formula, check_koszul_pair, check_koszul_unit,
    check_phi_low_arity, cobar_complex, BarCooperad,
};
use operadkit::complex::{ChainComplex, GradedSpace};
use operadkit::levelled::{
    check_bar_models_agree, check_free_action, check_kn_concentration, check_tower_maps, kn_complex,
};
use operadkit::operad::{check_operad_axioms, Operad};
use operadkit::perm::factorial;
use operadkit::report::CheckResult;
use operadkit::sigma::SigmaComplex;
use operadkit::symseq::{compose, same_characters, SymSeq};
use operadkit::Q;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<Vec<String>, String>;

/// Collects failing check results as messages.
fn failures(results: &[CheckResult]) -> Vec<String> {
    results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "{} {:?}: expected {} got {}",
                r.name, r.params, r.expected, r.got
            )
        })
        .collect()
}

fn gather(batches: Vec<operadkit::Result<Vec<CheckResult>>>) -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for b in batches {
        let b = b.map_err(|e| e.to_string())?;
        count += b.len();
        fails.extend(failures(&b));
    }
    if count == 0 {
        fails.push("no checks ran".into());
    }
    Ok(fails)
}

fn operads(bound: usize) -> [Operad; 3] {
    [Operad::com(bound), Operad::ass(bound), Operad::lie(bound)]
}

fn criterion_1() -> Outcome {
    gather(operads(4).iter().map(|o| check_koszul_unit(o, 4)).collect())
}

fn criterion_2() -> Outcome {
    let (com, ass, lie) = (Operad::com(5), Operad::ass(5), Operad::lie(5));
    let mut batches = vec![
        check_koszul_pair(&com, &lie, 5),
        check_koszul_pair(&lie, &com, 5),
        check_koszul_pair(&ass, &ass, 5),
    ];
    type Oracle<'a> = (&'a Operad, fn(usize) -> usize);
    let oracle: [Oracle; 3] = [
        (&com, |n| factorial(n - 1)),
        (&lie, |_| 1),
        (&ass, factorial),
    ];
    let mut explicit = Vec::new();
    for (o, dim) in oracle {
        for n in 1..=5 {
            let (h, _) = bar_homology(o, n).map_err(|e| e.to_string())?;
            let expected = GradedSpace::from_pairs([(n as i32 - 1, dim(n))]);
            explicit.push(
                CheckResult::new("bar_homology_oracle")
                    .param("operad", o.name())
                    .param("arity", n)
                    .compare(
                        serde_json::json!(format!("{expected:?}")),
                        serde_json::json!(format!("{h:?}")),
                    ),
            );
        }
    }
    batches.push(Ok(explicit));
    gather(batches)
}

fn criterion_3() -> Outcome {
    let mut batches = Vec::new();
    for (o, max_d) in [
        (Operad::com(6), 6),
        (Operad::ass(5), 5),
        (Operad::lie(6), 6),
    ] {
        batches.push(check_kn_concentration(&o, max_d));
        batches.push(check_tower_maps(&o, max_d));
        batches.push(check_bar_models_agree(&o, max_d.min(5)));
    }
    gather(batches)
}

fn criterion_4() -> Outcome {
    gather(vec![check_free_action(&Operad::ass(5), 5)])
}

fn criterion_5() -> Outcome {
    gather(
        operads(5)
            .iter()
            .flat_map(|o| (2..=5).map(move |n| check_bar_term_formula(o, n).map(|r| vec![r])))
            .collect(),
    )
}

fn double_factorial(m: i64) -> usize {
    (1..=m).rev().step_by(2).product::<i64>() as usize
}

fn criterion_6() -> Outcome {
    let mut batches: Vec<_> = operads(4)
        .iter()
        .map(|o| check_phi_low_arity(o, 4))
        .collect();
    let bar = BarCooperad::new(&Operad::com(5), 5).map_err(|e| e.to_string())?;
    let tau2 = bar.cooperad().truncate(2);
    let mut binary = Vec::new();
    for k in 2..=5 {
        let h = cobar_complex(&tau2, k)
            .map_err(|e| e.to_string())?
            .complex()
            .homology_dims();
        let expected = GradedSpace::from_pairs([(0, double_factorial(2 * k as i64 - 3))]);
        binary.push(
            CheckResult::new("free_binary_h0")
                .param("arity", k)
                .compare(
                    serde_json::json!(format!("{expected:?}")),
                    serde_json::json!(format!("{h:?}")),
                ),
        );
    }
    batches.push(Ok(binary));
    gather(batches)
}

fn criterion_7() -> Outcome {
    let mut batches = Vec::new();
    for o in operads(4) {
        for gens in [&[0][..], &[0, 0], &[1]] {
            batches.push(cot_of_free_check(&o, gens, 3).map(|r| vec![r]));
        }
        let window = if o.name() == "com" { 4 } else { 3 };
        for gens in [&[0][..], &[1], &[0, 1]] {
            batches.push(cot_of_trivial_check(&o, gens, window).map(|r| vec![r]));
        }
    }
    gather(batches)
}

fn criterion_8() -> Outcome {
    let mut batches = Vec::new();
    for o in operads(4) {
        for a in test_corpus(&o).map_err(|e| e.to_string())? {
            for n in 2..=4 {
                batches.push(graded_fiber_check(&a, n, 4).map(|r| vec![r]));
            }
        }
    }
    gather(batches)
}

fn criterion_9() -> Outcome {
    let o = Operad::com(7);
    let mut batches = Vec::new();
    let mut notes = Vec::new();
    for g in 1..=3 {
        for order in 2..=5 {
            let a = truncated_polynomial(&o, g, order).map_err(|e| e.to_string())?;
            for n in 1..=5 {
                let r = pi0_truncation_check(&a, n);
                if let Ok(r) = &r {
                    if r.params["exhaustive"] == false {
                        notes.push(format!("{} n={n}", a.name()));
                    }
                }
                batches.push(r.map(|r| vec![r]));
            }
        }
    }
    let fails = gather(batches)?;
    if !fails.is_empty() {
        return Ok(fails);
    }
    if !notes.is_empty() {
        println!(
            "  note: {} cases checked through weight 7 only (all weights carried by A are covered)",
            notes.len()
        );
    }
    Ok(Vec::new())
}

fn criterion_10() -> Outcome {
    let mut batches = Vec::new();
    for o in operads(5) {
        for gens in [&[1][..], &[1, 1]] {
            for n in 1..=3 {
                batches.push(remainder_connectivity_check(&o, gens, n, n + 2).map(|r| vec![r]));
            }
        }
    }
    gather(batches)
}

/// `d ∘ d = 0` and `χ(C) = χ(H(C))`.
fn complex_identities(label: &str, c: &ChainComplex) -> Vec<String> {
    let mut fails = Vec::new();
    for k in c.degrees() {
        let dd = c
            .differential(k - 1)
            .mul(&c.differential(k))
            .expect("composable differentials");
        if !dd.is_zero() {
            fails.push(format!("{label}: d∘d ≠ 0 in degree {k}"));
        }
    }
    if c.euler_characteristic() != c.homology_dims().euler_characteristic() {
        fails.push(format!(
            "{label}: Euler characteristics of chains and homology differ"
        ));
    }
    fails
}

/// The alternating sum of chain-level traces equals the alternating sum of
/// traces on homology representatives, at every cycle type.
fn lefschetz_identity(label: &str, s: &SigmaComplex) -> Vec<String> {
    let chains = s.character().normalized();
    let homology = s
        .homology_character_from_representatives(&chains.cycle_types)
        .normalized();
    let alternating = |t: &operadkit::sigma::CharacterTable, i: usize| {
        t.values.iter().fold(Q::from_int(0), |acc, (k, row)| {
            if k.rem_euclid(2) == 0 {
                &acc + &row[i]
            } else {
                &acc - &row[i]
            }
        })
    };
    let mut fails = complex_identities(label, s.complex());
    for i in 0..chains.cycle_types.len() {
        if alternating(&chains, i) != alternating(&homology, i) {
            fails.push(format!(
                "{label}: Lefschetz numbers differ at {}",
                chains.cycle_types[i]
            ));
        }
    }
    fails
}

fn structural_complexes() -> Outcome {
    let mut fails = Vec::new();
    let err = |e: operadkit::Error| e.to_string();
    for o in operads(5) {
        let name = o.name().to_string();
        let bar = BarCooperad::new(&o, 5).map_err(err)?;
        for d in 1..=5 {
            fails.extend(lefschetz_identity(
                &format!("B{name}({d})"),
                bar_complex(&o, d).map_err(err)?.sigma(),
            ));
            fails.extend(lefschetz_identity(
                &format!("ΩB{name}({d})"),
                cobar_complex(bar.cooperad(), d).map_err(err)?.sigma(),
            ));
            for n in 1..=d.min(4) {
                fails.extend(lefschetz_identity(
                    &format!("ΩτB{name}({n},{d})"),
                    cobar_complex(&bar.cooperad().truncate(n), d)
                        .map_err(err)?
                        .sigma(),
                ));
            }
        }
        let max_d = if name == "ass" { 4 } else { 5 };
        for d in 1..=max_d {
            for n in 1..=d + 1 {
                fails.extend(lefschetz_identity(
                    &format!("K_{n}({d}) {name}"),
                    kn_complex(&o, n, d).map_err(err)?.sigma(),
                ));
            }
        }
        for a in test_corpus(&o.with_arity_bound(4)).map_err(err)? {
            for (w, piece) in cotangent_fiber(&a, 4).map_err(err)? {
                fails.extend(complex_identities(
                    &format!("cot({})_{w}", a.name()),
                    piece.complex(),
                ));
            }
        }
    }
    Ok(fails)
}

const SEED: [u8; 32] = *b"operadkit-acceptance-fixed-seed!";
const BOUND: usize = 4;

fn sigma_term(n: usize) -> impl Strategy<Value = SigmaComplex> {
    (0usize..4, -1i32..=1).prop_map(move |(kind, shift)| {
        match kind {
            0 => SigmaComplex::trivial(n, ChainComplex::unit()),
            1 => SigmaComplex::trivial(n, ChainComplex::unit()).sign_twist(),
            2 if n <= 3 => SigmaComplex::regular(n),
            _ => Operad::lie(n).term(n).expect("Lie term"),
        }
        .shift(shift)
    })
}

fn symseq() -> impl Strategy<Value = SymSeq> {
    let terms: Vec<_> = (1..=BOUND)
        .map(|n| prop::option::weighted(0.6, sigma_term(n)))
        .collect();
    terms.prop_map(|ts| {
        SymSeq::new(BOUND, ts.into_iter().flatten()).expect("terms within the bound")
    })
}

fn same(a: &SymSeq, b: &SymSeq) -> bool {
    (1..=BOUND).all(|n| a.space(n) == b.space(n)) && same_characters(a, b)
}

fn composition_properties() -> Outcome {
    let config = Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    let unit = SymSeq::unit(BOUND);
    let result = runner.run(&(symseq(), symseq(), symseq()), |(a, b, c)| {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert!(same(&left, &right), "associativity");
        prop_assert!(same(&compose(&unit, &a).unwrap(), &a), "left unit");
        prop_assert!(same(&compose(&a, &unit).unwrap(), &a), "right unit");
        Ok(())
    });
    Ok(result
        .err()
        .map(|e| vec![format!("composition product: {e}")])
        .unwrap_or_default())
}

fn cli_determinism() -> Outcome {
    let data =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/poly-com-2-3.json");
    let data = data.to_str().expect("utf-8 path").to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["bar", "--operad", "com", "--max-arity", "4"],
        vec![
            "kn-table", "--operad", "lie", "--max-d", "4", "--format", "csv",
        ],
        vec!["koszul-check", "--operad", "ass", "--max-arity", "4"],
        vec!["algebra", "--algebra-file", &data, "--format", "pretty"],
    ];
    let mut fails = Vec::new();
    for args in commands {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_operadkit"))
                .args(&args)
                .env_remove("OPERADKIT_OUTPUT_DIR")
                .output()
        };
        let (a, b) = (
            run().map_err(|e| e.to_string())?,
            run().map_err(|e| e.to_string())?,
        );
        if a.status.code() != Some(0) || a.stdout.is_empty() || a.stdout != b.stdout {
            fails.push(format!(
                "{args:?} is not reproducible (status {:?})",
                a.status.code()
            ));
        }
    }
    Ok(fails)
}

fn criterion_11() -> Outcome {
    let mut fails = Vec::new();
    for o in operads(5)
        .into_iter()
        .chain([Operad::com(5).suspension(), Operad::lie(5).truncate(3)])
    {
        let report = check_operad_axioms(&o);
        if let Some(f) = report.failure {
            fails.push(format!("{}: {f}", o.name()));
        } else if report.checked == 0 {
            fails.push(format!("{}: no axioms checked", o.name()));
        }
    }
    fails.extend(composition_properties()?);
    fails.extend(structural_complexes()?);
    fails.extend(cli_determinism()?);
    Ok(fails)
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("Koszul duality unit: H(ΩB𝒪)(d) ≅ 𝒪(d), d ≤ 4", criterion_1),
        ("Koszul pairs: H(B𝒪)(n) ≅ s𝒫^∨(n), n ≤ 5", criterion_2),
        (
            "K_n(d) concentrated in degree d−n, acyclic for n > d, tower maps null",
            criterion_3,
        ),
        ("free Σ_d action on H(K_n(d)) for Ass, d ≤ 5", criterion_4),
        ("bar-term formula, 2 ≤ n ≤ 5", criterion_5),
        (
            "φ_n low-arity agreement and free-binary counts",
            criterion_6,
        ),
        ("cotangent fiber of free and trivial algebras", criterion_7),
        ("associated graded of the tower, n ≤ 4", criterion_8),
        (
            "π₀ of truncation of truncated polynomial algebras",
            criterion_9,
        ),
        ("connectivity of the remainder, n ≤ 3", criterion_10),
        (
            "structural suites: axioms, composition laws, d² = 0, Euler, determinism",
            criterion_11,
        ),
    ];
    let mut all_pass = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(fails) if fails.is_empty() => {
                println!("criterion {:>2}: PASS  {title} ({secs:.1}s)", i + 1)
            }
            Ok(fails) => {
                all_pass = false;
                println!("criterion {:>2}: FAIL  {title} ({secs:.1}s)", i + 1);
                for f in fails.iter().take(5) {
                    println!("    {f}");
                }
            }
            Err(e) => {
                all_pass = false;
                println!("criterion {:>2}: FAIL  {title}: error {e}", i + 1);
            }
        }
    }
    if !all_pass {
        std::process::exit(1);
    }
}
