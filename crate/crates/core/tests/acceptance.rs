//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each, and exits non-zero if any criterion fails.
//!
//! All algebraic checks are exact (zero tolerance); the only tolerances are
//! the wall-clock budgets pinned below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{example_a, random_hypermatrix, random_hypermatrix_coprime, random_permutation, random_vector, rng};
use hypersym::combinat::{partitions, Permutation};
use hypersym::dims::RankTriangulation;
use hypersym::exactnum::omega_pow;
use hypersym::symmetry::{apply_eigenprojector, canonical_cycle, decompose_isotypic, decompose_standard, project_isotypic};
use hypersym::vanishing::{
    cayley_det_222, chern_top, diag_polynomial, diag_system, euler_combination, resultant_n2, star_condition,
    witness_search_ff, FfReduction, Resultant,
};
use hypersym::{Cyclo, GroupAlgebraElement, Hypermatrix, Partition};
use num_bigint::BigInt;

const ROOT_SUM_BUDGET: Duration = Duration::from_secs(1);
const SOUNDNESS_BUDGET: Duration = Duration::from_secs(60);
const TRIANGULATION_BUDGET: Duration = Duration::from_secs(120);

/// Entry bound for random rationals: numerators in [-100, 100],
/// denominators in [1, 100].
const ENTRY_BOUND: i64 = 100;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(budget: Duration, start: Instant, detail: String) -> Check {
    let elapsed = start.elapsed();
    ensure!(
        elapsed <= budget,
        "{detail}; took {:.2} s, budget {:.0} s",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    Ok(detail)
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn golden_example() -> Check {
    let a = example_a();
    let c123 = Permutation::cycle(3, &[1, 2, 3]).unwrap();
    let c132 = Permutation::cycle(3, &[1, 3, 2]).unwrap();
    let sum = a
        .try_add(&a.act(&c123).unwrap())
        .and_then(|s| s.try_add(&a.act(&c132).unwrap()))
        .unwrap();
    ensure!(sum.is_zero(), "A + (123)A + (132)A = {:?}", sum.entries());
    let det = cayley_det_222(&a).unwrap();
    ensure!(det.is_one(), "Det(A) = {det}");
    Ok("A + (123)A + (132)A = 0, Det(A) = 1".into())
}

fn root_sums() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for d in 2..=12u32 {
        for i in 1..d as i64 {
            let sum = (1..d as i64).fold(Cyclo::zero(d), |acc, k| &acc + &omega_pow(d, k * i).unwrap());
            ensure!(sum == Cyclo::from_int(d, -1), "d = {d}, i = {i}: sum = {sum}");
            cases += 1;
        }
    }
    within(ROOT_SUM_BUDGET, start, format!("{cases} (d, i) pairs sum to -1"))
}

fn shape(k: usize) -> (usize, usize) {
    ([3, 4, 5][k % 3], [2, 3][(k / 3) % 2])
}

fn decomposition_soundness() -> Check {
    let start = Instant::now();
    let mut rng = rng(3);
    for k in 0..200 {
        let (d, n) = shape(k);
        let f = random_hypermatrix(&mut rng, n, d, ENTRY_BOUND);
        let report = decompose_isotypic(&f).unwrap();
        ensure!(report.recompose().unwrap() == f, "sample {k}: components do not sum to F");
        let sigma = random_permutation(&mut rng, d);
        let moved = f.act(&sigma).unwrap();
        for (label, h) in &report.components {
            let hypersym::Label::Isotypic(lambda) = label else { unreachable!() };
            ensure!(project_isotypic(h, lambda).unwrap() == *h, "sample {k}: P_{lambda} not idempotent");
            for mu in partitions(d as u32) {
                if mu != *lambda {
                    ensure!(
                        project_isotypic(h, &mu).unwrap().is_zero(),
                        "sample {k}: P_{mu} P_{lambda} F != 0"
                    );
                }
            }
            ensure!(
                h.act(&sigma).unwrap() == project_isotypic(&moved, lambda).unwrap(),
                "sample {k}: P_{lambda} does not commute with {sigma}"
            );
        }
    }
    within(
        SOUNDNESS_BUDGET,
        start,
        "200 samples: completeness, idempotence, orthogonality, centrality".into(),
    )
}

fn cycle_sum(d: usize) -> GroupAlgebraElement {
    let c = canonical_cycle(d).unwrap();
    let terms: Vec<_> = (0..d).map(|j| (c.pow(j as i64), Cyclo::one(d as u32))).collect();
    GroupAlgebraElement::from_terms(d, d as u32, terms).unwrap()
}

fn eigen_decomposition() -> Check {
    let mut rng = rng(4);
    let mut nonzero_parts = 0;
    for k in 0..100 {
        let (d, n) = shape(k);
        let f0 = random_hypermatrix(&mut rng, n, d, ENTRY_BOUND);
        let f = project_isotypic(&f0, &Partition::standard(d as u32).unwrap()).unwrap();
        let cycle = canonical_cycle(d).unwrap();
        let parts = decompose_standard(&f).unwrap();
        let sum = parts.iter().skip(1).fold(parts[0].clone(), |acc, h| acc.try_add(h).unwrap());
        ensure!(sum == f, "sample {k}: sum of H_m differs from F");
        for (i, h) in parts.iter().enumerate() {
            let m = i + 1;
            let w = omega_pow(d as u32, m as i64).unwrap();
            ensure!(h.act(&cycle).unwrap() == h.scale(&w).unwrap(), "sample {k}: σH_{m} != ω^{m}H_{m}");
            for other in (0..d).filter(|&o| o != m) {
                ensure!(
                    apply_eigenprojector(h, &cycle, other).unwrap().is_zero(),
                    "sample {k}: Π_{other} Π_{m} F != 0"
                );
            }
            nonzero_parts += usize::from(!h.is_zero());
        }
        ensure!(f.act_algebra(&cycle_sum(d)).unwrap().is_zero(), "sample {k}: γF != 0");
    }
    Ok(format!("100 samples, {nonzero_parts} nonzero eigencomponents, all relations exact"))
}

fn eigencomponents_are_singular() -> Check {
    let mut rng = rng(5);
    let std = p(&[2, 1]);
    let cycle = canonical_cycle(3).unwrap();
    let mut nonzero = 0;
    for k in 0..100 {
        let m = 1 + k % 2;
        let f0 = random_hypermatrix(&mut rng, 2, 3, ENTRY_BOUND);
        let f = apply_eigenprojector(&project_isotypic(&f0, &std).unwrap(), &cycle, m).unwrap();
        nonzero += usize::from(!f.is_zero());
        let det = cayley_det_222(&f).unwrap();
        ensure!(det.is_zero(), "sample {k} (m = {m}): Det = {det}");
    }
    ensure!(nonzero > 0, "every sampled eigencomponent was zero");
    Ok(format!("Det = 0 on 100 samples ({nonzero} nonzero)"))
}

fn witness_evidence() -> Check {
    const P: u64 = 7;
    let mut rng = rng(6);
    let skew = p(&[1, 1, 1]);
    let std = p(&[2, 1]);
    let cycle = canonical_cycle(3).unwrap();
    let (mut found, mut degenerate) = (0, 0);
    for k in 0..25 {
        let m = 1 + k % 2;
        let g1 = random_hypermatrix_coprime(&mut rng, 3, 3, ENTRY_BOUND, P as i64);
        let g2 = random_hypermatrix_coprime(&mut rng, 3, 3, ENTRY_BOUND, P as i64);
        let eigen = apply_eigenprojector(&project_isotypic(&g2, &std).unwrap(), &cycle, m).unwrap();
        let f = project_isotypic(&g1, &skew).unwrap().try_add(&eigen).unwrap();
        let reduced = FfReduction::new(&f, P).map_err(|e| format!("sample {k}: {e}"))?;
        if FfReduction::new(&eigen, P).unwrap().entries().iter().all(|&x| x == 0) {
            degenerate += 1;
        }
        if let Some(u) = witness_search_ff(&f, P).unwrap() {
            for slot in 1..=3 {
                ensure!(
                    reduced.slice(&u, slot).iter().all(|&x| x == 0),
                    "sample {k}: witness {u:?} fails slot {slot} mod {P}"
                );
            }
            found += 1;
        }
    }
    ensure!(found > 0, "no GF({P}) witness in 25 samples");
    Ok(format!(
        "evidence-ff({P}): {found}/25 samples have a GF({P}) witness, each satisfying all 3 slices; \
         {degenerate} degenerate reductions"
    ))
}

fn prior_result() -> Check {
    let mut rng = rng(7);
    let shapes = [p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])];
    let mut checked = 0;
    for n in [2, 3] {
        for k in 0..4 {
            let f = shapes.iter().fold(Hypermatrix::zeros(n, 4).unwrap(), |acc, lambda| {
                let g = random_hypermatrix(&mut rng, n, 4, ENTRY_BOUND);
                acc.try_add(&project_isotypic(&g, lambda).unwrap()).unwrap()
            });
            ensure!(!f.is_zero(), "n = {n}, sample {k}: projected F is zero");
            for _ in 0..50 {
                let v = random_vector(&mut rng, n, 4, 20);
                ensure!(
                    star_condition(&f, &v).unwrap(),
                    "n = {n}, sample {k}: star condition fails at {v:?}"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("star condition holds at all {checked} (F, v) pairs"))
}

fn resultant_at_n2() -> Check {
    let mut rng = rng(8);
    for k in 0..100 {
        let d = [3, 4][k % 2];
        let f0 = random_hypermatrix(&mut rng, 2, d, ENTRY_BOUND);
        let f = f0.try_sub(&project_isotypic(&f0, &Partition::row(d as u32)).unwrap()).unwrap();
        match resultant_n2(&diag_system(&f)).unwrap() {
            Resultant::Value(r) => ensure!(r.is_zero(), "sample {k} (d = {d}): resultant = {r}"),
            Resultant::Degenerate => {}
        }
    }
    for k in 0..20 {
        let d = [3, 4][k % 2];
        let f = random_hypermatrix(&mut rng, 2, d, ENTRY_BOUND);
        ensure!(
            !project_isotypic(&f, &Partition::row(d as u32)).unwrap().is_zero(),
            "generic sample {k} has zero symmetric part"
        );
        ensure!(
            euler_combination(&diag_system(&f)) == diag_polynomial(&f),
            "generic sample {k}: Euler relation fails"
        );
    }
    Ok("resultant = 0 on 100 samples; Euler relation on 20 generic samples".into())
}

fn chern_obstruction() -> Check {
    for n in 2..=12u32 {
        let expected = BigInt::from(n % 2);
        let c = chern_top(n, 2);
        ensure!(c == expected, "chern_top({n}, 2) = {c}, expected {expected}");
    }
    for n in 2..=10u32 {
        for d in 3..=8u32 {
            let c = chern_top(n, d);
            ensure!(c >= BigInt::from(1), "chern_top({n}, {d}) = {c}");
        }
    }
    Ok("parity at d = 2 and positivity for d = 3..8".into())
}

fn dimension_triangulation() -> Check {
    let start = Instant::now();
    let mut details = Vec::new();
    for (n, d) in [(2u32, 3u32), (3, 3), (2, 4)] {
        let t = RankTriangulation::compute(n, d).unwrap();
        for row in &t.isotypic {
            ensure!(
                num_bigint::BigUint::from(row.rank) == row.formula,
                "(n, d) = ({n}, {d}), {}: rank {} vs dim_irrep·dim_schur {}",
                row.label,
                row.rank,
                row.formula
            );
        }
        let sum: usize = t.eigen_ranks.iter().sum();
        ensure!(
            t.eigen_ranks.iter().all(|&r| r == t.eigen_ranks[0]) && num_bigint::BigUint::from(sum) == t.dim_standard,
            "(n, d) = ({n}, {d}): eigen ranks {:?} vs dim W_(d-1,1) = {}",
            t.eigen_ranks,
            t.dim_standard
        );
        ensure!(
            t.eigen_consistent(),
            "(n, d) = ({n}, {d}): eigen rank {}, hook content {}, closed form {}",
            t.eigen_ranks[0],
            t.hook_content,
            t.closed_form
        );
        details.push(format!(
            "({n},{d}): rank {} = hook content {} = closed form {}",
            t.eigen_ranks[0], t.hook_content, t.closed_form
        ));
    }
    within(TRIANGULATION_BUDGET, start, details.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden 2x2x2 example", golden_example),
        ("root-of-unity sums", root_sums),
        ("isotypic decomposition soundness", decomposition_soundness),
        ("cyclic eigencomponent split", eigen_decomposition),
        ("Det = 0 on eigencomponents (n = 2, d = 3)", eigencomponents_are_singular),
        ("finite-field witnesses (n = 3, d = 3)", witness_evidence),
        ("star condition off the symmetric and standard parts", prior_result),
        ("resultant and Euler relation at n = 2", resultant_at_n2),
        ("Chern obstruction", chern_obstruction),
        ("dimension triangulation", dimension_triangulation),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2}. {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
