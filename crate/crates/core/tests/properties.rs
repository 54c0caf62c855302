//! Randomized invariants, checked with exact equality.

mod common;

use hypersym::combinat::{partitions, Permutation};
use hypersym::exactnum::{omega_pow, rational, totient};
use hypersym::symmetry::{
    apply_eigenprojector, canonical_cycle, decompose_isotypic, decompose_standard, eigenvalue, project_isotypic,
};
use hypersym::vanishing::{
    diag_polynomial, diag_system, euler_combination, resultant_n2, star_condition, witness_n2, witness_search_ff,
    ExactWitness, FfReduction, Resultant,
};
use hypersym::{Cyclo, GroupAlgebraElement, Hypermatrix, Partition, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=40).prop_map(|(n, d)| rational(n, d))
}

fn cyclo(order: u32) -> impl Strategy<Value = Cyclo> {
    prop::collection::vec(small_rational(), totient(order))
        .prop_map(move |c| Cyclo::from_reduced(order, c).unwrap())
}

fn cyclo_triple() -> impl Strategy<Value = (Cyclo, Cyclo, Cyclo)> {
    prop::sample::select(vec![1u32, 2, 3, 4, 5, 7, 8, 9, 12]).prop_flat_map(|order| (cyclo(order), cyclo(order), cyclo(order)))
}

fn permutation(d: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=d).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

/// Entries in `ℚ(ω_d)` (not just rationals), root order `d`.
fn hypermatrix(n: usize, d: usize) -> impl Strategy<Value = Hypermatrix> {
    prop::collection::vec(cyclo(d as u32), n.pow(d as u32))
        .prop_map(move |e| Hypermatrix::new(n, d, d as u32, e).unwrap())
}

fn rational_hypermatrix(n: usize, d: usize) -> impl Strategy<Value = Hypermatrix> {
    prop::collection::vec(small_rational(), n.pow(d as u32))
        .prop_map(move |v| Hypermatrix::from_rationals(n, d, v).unwrap())
}

fn vector(n: usize, order: u32) -> impl Strategy<Value = Vec<Cyclo>> {
    prop::collection::vec(cyclo(order), n)
}

/// `(F, σ, τ)` with `d ≤ 5`, `n ≤ 3`.
fn action_case() -> impl Strategy<Value = (Hypermatrix, Permutation, Permutation)> {
    (1usize..=3, 1usize..=5)
        .prop_filter("keep n^d small", |(n, d)| n.pow(*d as u32) <= 81)
        .prop_flat_map(|(n, d)| (hypermatrix(n, d), permutation(d), permutation(d)))
}

fn eval_case() -> impl Strategy<Value = (Hypermatrix, Permutation, Vec<Vec<Cyclo>>)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(n, d)| {
        (
            hypermatrix(n, d),
            permutation(d),
            prop::collection::vec(vector(n, d as u32), d),
        )
    })
}

fn sub(a: &Hypermatrix, b: &Hypermatrix) -> Hypermatrix {
    a.try_sub(b).unwrap()
}

fn standard(d: usize) -> Partition {
    Partition::standard(d as u32).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in cyclo_triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!((&b * &a).checked_div(&a).unwrap(), b.clone());
        }
    }

    #[test]
    fn cyclo_text_round_trip((a, _, _) in cyclo_triple()) {
        prop_assert_eq!(Cyclo::parse(a.order(), &a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(Cyclo::from_strings(a.order(), &a.to_strings()).unwrap(), a);
    }

    #[test]
    fn omega_powers_wrap(d in 1u32..=16, k in -40i64..40) {
        let w = omega_pow(d, k).unwrap();
        prop_assert_eq!(w.clone(), omega_pow(d, k + d as i64).unwrap());
        prop_assert!((&w * &omega_pow(d, -k).unwrap()).is_one());
    }

    #[test]
    fn permutation_group_laws(s in permutation(6), t in permutation(6), u in permutation(6)) {
        let st_u = s.compose(&t).unwrap().compose(&u).unwrap();
        prop_assert_eq!(st_u, s.compose(&t.compose(&u).unwrap()).unwrap());
        prop_assert!(s.compose(&s.inverse()).unwrap().is_identity());
        let conj = t.compose(&s).unwrap().compose(&t.inverse()).unwrap();
        prop_assert_eq!(conj.cycle_type(), s.cycle_type());
    }

    #[test]
    fn left_action((f, s, t) in action_case()) {
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(f.act(&st).unwrap(), f.act(&t).unwrap().act(&s).unwrap());
    }

    #[test]
    fn eval_of_action((f, s, xs) in eval_case()) {
        let permuted: Vec<Vec<Cyclo>> = (0..f.d()).map(|m| xs[s.apply0(m)].clone()).collect();
        prop_assert_eq!(f.act(&s).unwrap().eval(&xs).unwrap(), f.eval(&permuted).unwrap());
    }

    #[test]
    fn eval_is_multilinear(
        (f, xs, u, w, slot) in (1usize..=3, 1usize..=4).prop_flat_map(|(n, d)| (
            hypermatrix(n, d),
            prop::collection::vec(vector(n, d as u32), d),
            vector(n, d as u32),
            vector(n, d as u32),
            0..d,
        )),
        a in small_rational(),
        b in small_rational(),
    ) {
        let order = f.root_order();
        let (a, b) = (Cyclo::from_rational(order, a), Cyclo::from_rational(order, b));
        let mix: Vec<Cyclo> = u.iter().zip(&w).map(|(x, y)| &(&a * x) + &(&b * y)).collect();
        let with = |v: &Vec<Cyclo>| {
            let mut ys = xs.clone();
            ys[slot] = v.clone();
            f.eval(&ys).unwrap()
        };
        prop_assert_eq!(with(&mix), &(&a * &with(&u)) + &(&b * &with(&w)));
    }

    #[test]
    fn slice_pairs_to_diagonal(
        (f, v) in (1usize..=3, 1usize..=4).prop_flat_map(|(n, d)| (hypermatrix(n, d), vector(n, d as u32)))
    ) {
        let slice = f.slice(&v, f.d()).unwrap();
        let paired = v.iter().zip(&slice).fold(Cyclo::zero(f.root_order()), |acc, (x, y)| &acc + &(x * y));
        prop_assert_eq!(paired, f.diag_eval(&v).unwrap());
    }

    #[test]
    fn hypermatrix_json_round_trip(f in (1usize..=3, 1usize..=3).prop_flat_map(|(n, d)| hypermatrix(n, d))) {
        let text = f.to_json();
        let back = Hypermatrix::from_json(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotypic_projectors_are_complete_idempotent_orthogonal_central(
        (f, s) in (1usize..=3, 1usize..=5)
            .prop_filter("keep n^d small", |(n, d)| n.pow(*d as u32) <= 243)
            .prop_flat_map(|(n, d)| (rational_hypermatrix(n, d), permutation(d)))
    ) {
        let report = decompose_isotypic(&f).unwrap();
        prop_assert_eq!(report.recompose().unwrap(), f.clone());
        let moved = f.act(&s).unwrap();
        for (label, h) in &report.components {
            let hypersym::Label::Isotypic(lambda) = label else { unreachable!() };
            prop_assert_eq!(&project_isotypic(h, lambda).unwrap(), h);
            for mu in partitions(f.d() as u32).iter().filter(|mu| *mu != lambda) {
                prop_assert!(project_isotypic(h, mu).unwrap().is_zero());
            }
            prop_assert_eq!(h.act(&s).unwrap(), project_isotypic(&moved, lambda).unwrap());
        }
    }

    #[test]
    fn cyclic_structure_of_the_standard_component(
        f0 in (1usize..=3, 3usize..=5)
            .prop_filter("keep n^d small", |(n, d)| n.pow(*d as u32) <= 243)
            .prop_flat_map(|(n, d)| rational_hypermatrix(n, d))
    ) {
        let d = f0.d();
        let f = project_isotypic(&f0, &standard(d)).unwrap();
        let cycle = canonical_cycle(d).unwrap();
        // γ = (1) + σ + … + σ^{d-1} annihilates W_(d-1,1), i.e. Π_0 does
        let gamma = GroupAlgebraElement::from_terms(
            d,
            d as u32,
            (0..d).map(|j| (cycle.pow(j as i64), Cyclo::one(d as u32))).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert!(f.act_algebra(&gamma).unwrap().is_zero());
        prop_assert!(apply_eigenprojector(&f, &cycle, 0).unwrap().is_zero());
        let parts = decompose_standard(&f).unwrap();
        for (i, h) in parts.iter().enumerate() {
            let m = i + 1;
            let w = eigenvalue(f.root_order(), d, m).unwrap();
            prop_assert_eq!(h.act(&cycle).unwrap(), h.scale(&w).unwrap());
            for other in (1..d).filter(|&o| o != m) {
                prop_assert!(apply_eigenprojector(h, &cycle, other).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn non_symmetric_part_vanishes_on_the_diagonal(
        (f, v) in (1usize..=3, 2usize..=4).prop_flat_map(|(n, d)| (rational_hypermatrix(n, d), vector(n, d as u32)))
    ) {
        let rest = sub(&f, &project_isotypic(&f, &Partition::row(f.d() as u32)).unwrap());
        prop_assert!(rest.diag_eval(&v).unwrap().is_zero());
        prop_assert!(euler_combination(&diag_system(&rest)).is_zero());
    }

    #[test]
    fn euler_relation(f in (1usize..=3, 1usize..=4).prop_flat_map(|(n, d)| hypermatrix(n, d))) {
        let system = diag_system(&f);
        prop_assert!(system.polys.iter().all(|g| g.degree() == f.d() - 1));
        prop_assert_eq!(euler_combination(&system), diag_polynomial(&f));
    }

    #[test]
    fn common_root_without_symmetric_part(f0 in (3usize..=5).prop_flat_map(|d| rational_hypermatrix(2, d))) {
        let f = sub(&f0, &project_isotypic(&f0, &Partition::row(f0.d() as u32)).unwrap());
        match resultant_n2(&diag_system(&f)).unwrap() {
            Resultant::Value(r) => prop_assert!(r.is_zero()),
            Resultant::Degenerate => {}
        }
    }

    #[test]
    fn star_condition_off_symmetric_and_standard(
        (gs, v) in (2usize..=3).prop_flat_map(|n| (
            prop::collection::vec(rational_hypermatrix(n, 4), 3),
            vector(n, 4),
        ))
    ) {
        let shapes = [[2, 2].as_slice(), &[2, 1, 1], &[1, 1, 1, 1]];
        let f = gs.iter().zip(shapes).fold(Hypermatrix::zeros(gs[0].n(), 4).unwrap(), |acc, (g, lambda)| {
            let lambda = Partition::new(lambda.to_vec()).unwrap();
            acc.try_add(&project_isotypic(g, &lambda).unwrap()).unwrap()
        });
        prop_assert!(star_condition(&f, &v).unwrap());
    }

    /// A zero last-slot slice forces every slice to vanish on an
    /// eigencomponent; checked exactly at n = 2 and mod p at n = 3.
    #[test]
    fn slice_propagation_on_eigencomponents(
        g2 in rational_hypermatrix(2, 3),
        g3 in (3usize..=4).prop_flat_map(|d| prop::collection::vec(1i64..=60, 3usize.pow(d as u32)).prop_map(move |v| {
            Hypermatrix::from_rationals(3, d, v.into_iter().map(|x| rational(x - 30, 1)).collect()).unwrap()
        })),
        m in 1usize..=2,
    ) {
        let cycle = canonical_cycle(3).unwrap();
        let f = apply_eigenprojector(&project_isotypic(&g2, &standard(3)).unwrap(), &cycle, m).unwrap();
        if let ExactWitness::Found(u) = witness_n2(&diag_system(&f)).unwrap() {
            prop_assert!(star_condition(&f, &u).unwrap());
        }

        let d = g3.d();
        let p = if d == 3 { 7 } else { 13 };
        let cycle = canonical_cycle(d).unwrap();
        let f = apply_eigenprojector(&project_isotypic(&g3, &standard(d)).unwrap(), &cycle, m).unwrap();
        let reduced = FfReduction::new(&f, p).unwrap();
        if let Some(u) = witness_search_ff(&f, p).unwrap() {
            prop_assert!(reduced.star_condition(&u));
        }
    }
}
