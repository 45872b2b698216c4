use num_traits::Zero;
use proptest::prelude::*;
use stieltjes_star::forward::{edge_quotient, lagrange_check, total_length_identity};
use stieltjes_star::matrixize::{build_pencil, pencil_det, pencil_det_with, Pencil};
use stieltjes_star::model::{parse_graph, parse_plan, parse_spectra, serialize_graph, serialize_plan, serialize_spectra};
use stieltjes_star::numeric::{poly_gcd, ratio, squarefree_factor, Polynomial, Rational};
use stieltjes_star::ratfun::{cf_expand, cf_tail, cf_to_ratfun, partial_fractions, PartialFractions, RationalFunction, StieltjesCF};
use stieltjes_star::roundtrip::{batch_roundtrip, roundtrip, spectral_polys};
use stieltjes_star::{Edge, Execution, ReconstructionPlan, SpectrumPair, StarGraph};

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=20).prop_map(|(n, d)| ratio(n, d))
}

fn nonnegative() -> impl Strategy<Value = Rational> {
    prop_oneof![1 => Just(Rational::zero()), 2 => positive()]
}

fn edge(max_masses: usize) -> impl Strategy<Value = Edge> {
    (0..=max_masses).prop_flat_map(|n| {
        (prop::collection::vec(positive(), n + 1), prop::collection::vec(positive(), n))
            .prop_map(|(l, m)| Edge::new(l, m).unwrap())
    })
}

fn center_graph() -> impl Strategy<Value = StarGraph> {
    (prop::collection::vec(edge(3), 2..=4), nonnegative()).prop_map(|(e, m)| StarGraph::center(e, m).unwrap())
}

fn pendant_graph() -> impl Strategy<Value = StarGraph> {
    (edge(3), prop::collection::vec(edge(3), 1..=3), nonnegative())
        .prop_map(|(main, e, m)| StarGraph::pendant(main, e, m).unwrap())
}

fn cf() -> impl Strategy<Value = StieltjesCF> {
    (0usize..=8).prop_flat_map(|p| {
        let a0 = if p == 0 { positive().boxed() } else { nonnegative().boxed() };
        (a0, prop::collection::vec(positive(), p), prop::collection::vec(positive(), p)).prop_map(|(a0, rest, b)| {
            let mut a = vec![a0];
            a.extend(rest);
            StieltjesCF::new(a, b).unwrap()
        })
    })
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-9i64..=9, 1..=6).prop_map(|c| Polynomial::from_i64(&c))
}

fn multiset() -> impl Strategy<Value = Vec<(Rational, usize)>> {
    prop::collection::btree_map((1i64..=30, 1i64..=7), 1usize..=3, 1..=4)
        .prop_map(|m| m.into_iter().map(|((n, d), k)| (ratio(n, d), k)).collect::<Vec<_>>())
        .prop_map(|mut v| {
            v.sort();
            v.dedup_by(|a, b| a.0 == b.0);
            v
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_json_round_trip(g in prop_oneof![center_graph(), pendant_graph()]) {
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn spectra_json_round_trip(n in multiset(), d in multiset()) {
        let s = SpectrumPair::new(n, d).unwrap();
        prop_assert_eq!(parse_spectra(&serialize_spectra(&s)).unwrap(), s);
    }

    #[test]
    fn plan_json_round_trip(pole in positive(), x in 1i64..=9) {
        let p = ReconstructionPlan::with_split(pole, vec![ratio(x, 10), ratio(10 - x, 10)]);
        prop_assert_eq!(parse_plan(&serialize_plan(&p)).unwrap(), p);
    }

    #[test]
    fn lagrange_identity_at_every_level(e in edge(6)) {
        let w = lagrange_check(&e);
        prop_assert!(w.holds, "fails at level {:?}", w.failing_k);
    }

    #[test]
    fn total_length_identity_holds(e in edge(6)) {
        prop_assert!(total_length_identity(&e));
    }

    #[test]
    fn edge_quotient_expands_to_reversed_edge(e in edge(5)) {
        let c = cf_expand(&edge_quotient(&e)).unwrap();
        let a: Vec<_> = e.lengths().iter().rev().cloned().collect();
        let b: Vec<_> = e.masses().iter().rev().cloned().collect();
        prop_assert_eq!(c.a(), a.as_slice());
        prop_assert_eq!(c.b(), b.as_slice());
    }

    #[test]
    fn cf_round_trip(c in cf()) {
        let f = cf_to_ratfun(&c);
        prop_assert_eq!(cf_expand(&f).unwrap(), c.clone());
        prop_assert_eq!(f.eval(&Rational::zero()).unwrap(), c.value_at_zero());
        prop_assert_eq!(f.value_at_infinity(), Some(c.a()[0].clone()));
    }

    #[test]
    fn cf_tails_compose(c in cf(), i in 0usize..=8) {
        prop_assume!(i < c.depth());
        // f_i = a_i + 1/(-b_{i+1} z + 1/f_{i+1})
        let head = cf_to_ratfun(&cf_tail(&c, i).unwrap());
        let next = cf_to_ratfun(&cf_tail(&c, i + 1).unwrap());
        let lin = RationalFunction::from_poly(Polynomial::z().scale(&-&c.b()[i]));
        let rebuilt = RationalFunction::constant(c.a()[i].clone()).add(&lin.add(&next.recip().unwrap()).recip().unwrap());
        prop_assert_eq!(head, rebuilt);
    }

    #[test]
    fn partial_fractions_round_trip(a0 in nonnegative(), b in -5i64..=5, poles in multiset(), res in prop::collection::vec(positive(), 4)) {
        let terms: Vec<_> = poles.into_iter().zip(res).map(|((c, _), r)| (c, r)).collect();
        let pf = PartialFractions { a0, terms, b: Rational::from_integer(b.into()) };
        let f = pf.reassemble();
        prop_assert_eq!(partial_fractions(&f).unwrap(), pf);
    }

    #[test]
    fn gcd_divides_both(p in poly(), q in poly(), r in poly()) {
        prop_assume!(!r.is_zero() && !(p.is_zero() && q.is_zero()));
        let (p, q) = (&p * &r, &q * &r);
        prop_assume!(!p.is_zero() || !q.is_zero());
        let g = poly_gcd(&p, &q).unwrap();
        prop_assert!(g.divides(&p).unwrap() && g.divides(&q).unwrap());
        prop_assert!(r.monic().divides(&g).unwrap() || r.degree() == Some(0));
    }

    #[test]
    fn squarefree_factors_multiply_back(p in poly(), q in poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let f = &(&p * &p) * &q;
        let parts = squarefree_factor(&f).unwrap();
        let back = parts.iter().fold(Polynomial::one(), |acc, (g, k)| &acc * &g.pow(*k));
        prop_assert!(back.is_proportional_to(&f).is_some());
    }

    #[test]
    fn division_identity(p in poly(), d in poly()) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, p);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn center_graphs_round_trip(g in center_graph()) {
        let rt = roundtrip(&g, Execution::Sequential).unwrap();
        prop_assert!(rt.passed(), "{:?} on {:?}", rt, g);
    }

    #[test]
    fn pendant_graphs_round_trip(g in pendant_graph()) {
        let rt = roundtrip(&g, Execution::Sequential).unwrap();
        prop_assert!(rt.passed(), "{:?} on {:?}", rt, g);
        prop_assert_eq!(rt.main_edge_equal, Some(true));
    }

    #[test]
    fn pencil_matches_spectral_polynomials(g in center_graph(), m in positive()) {
        let g = g.with_central_mass(m).unwrap();
        let p = build_pencil(&g).unwrap();
        prop_assert!(p.l.is_symmetric());
        let polys = spectral_polys(&g, Execution::Sequential).unwrap();
        prop_assert!(pencil_det(&p).is_proportional_to(&polys.neumann).is_some());
        let sub = Pencil { l: p.l.trailing_minor(), m: p.m.trailing_minor() };
        prop_assert!(pencil_det(&sub).is_proportional_to(&polys.dirichlet).is_some());
    }

    #[test]
    fn execution_modes_agree(gs in prop::collection::vec(center_graph(), 1..=4), m in positive()) {
        let seq = batch_roundtrip(&gs, Execution::Sequential);
        let par = batch_roundtrip(&gs, Execution::default());
        prop_assert_eq!(seq, par);
        let g = gs[0].with_central_mass(m).unwrap();
        let p = build_pencil(&g).unwrap();
        prop_assert_eq!(pencil_det_with(&p, Execution::Sequential), pencil_det_with(&p, Execution::default()));
    }
}
