use hypergroup::amenability::{approximate_diagonal, indicator_diagonal};
use hypergroup::builders::{builtin_groups, group_characters, irr_exact, irr_hypergroup};
use hypergroup::function::{convolve_measures, l1_norm};
use hypergroup::io::{parse_table, write_table};
use hypergroup::norms::{norm_a, norm_blambda, norm_ma, section_interval, TraceNormContext};
use hypergroup::quantum::{hat_map, CentralFunction};
use hypergroup::spectral::{chi0, fourier, inverse_fourier, voit_deform};
use hypergroup::{
    characters, conjugacy_hypergroup, family, haar_weights, product, verify_axioms, Axiom,
    FamilySpec, FiniteGroup, HFunction, HypergroupTable, Rational, Scalar,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn finite_tables() -> Vec<HypergroupTable<f64>> {
    builtin_groups()
        .iter()
        .flat_map(|g| {
            [
                conjugacy_hypergroup::<f64>(g),
                irr_hypergroup::<f64>(g).unwrap(),
            ]
        })
        .collect()
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)),
        n,
    )
}

fn table_and_function() -> impl Strategy<Value = (usize, Vec<Complex64>)> {
    let sizes: Vec<usize> = finite_tables().iter().map(|h| h.size()).collect();
    (0..sizes.len()).prop_flat_map(move |i| (Just(i), complex_vec(sizes[i])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norms_agree_on_finite_tables((i, values) in table_and_function()) {
        let h = &finite_tables()[i];
        let t = characters(h).unwrap();
        let u = HFunction::from_dense(&values);
        let (a, fact) = norm_a(h, &t, &u).unwrap();
        let b = norm_blambda(h, &t, &u).unwrap().0;
        let m = norm_ma(h, &t, &u).unwrap();
        prop_assert!((a - b).abs() < 1e-8 && (b - m).abs() < 1e-8);
        prop_assert!(fact.residual < 1e-10);
        prop_assert!((fact.norm_product - a).abs() < 1e-9);
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(sup <= a + 1e-9);
    }

    #[test]
    fn trace_route_agrees((i, values) in table_and_function()) {
        let h = &finite_tables()[i];
        let t = characters(h).unwrap();
        let u = HFunction::from_dense(&values);
        let ctx = TraceNormContext::new(h).unwrap();
        prop_assert!((ctx.norm_a(&values).unwrap() - norm_a(h, &t, &u).unwrap().0).abs() < 1e-8);
    }

    #[test]
    fn fourier_round_trip((i, values) in table_and_function()) {
        let h = &finite_tables()[i];
        let t = characters(h).unwrap();
        let u = HFunction::from_dense(&values);
        let back = inverse_fourier(h, &t, &fourier(h, &t, &u));
        for (x, v) in values.iter().enumerate() {
            prop_assert!((back.get(x) - v).norm() < 1e-10);
        }
    }

    #[test]
    fn convolution_of_probability_measures(i in 0usize..12, w in prop::collection::vec(0.0f64..1.0, 1..25)) {
        let h = &finite_tables()[i];
        let n = h.size();
        let total: f64 = w.iter().take(n).sum::<f64>().max(1e-9);
        let mu = HFunction::from_dense(&w.iter().take(n).map(|v| v / total).collect::<Vec<_>>());
        let c = convolve_measures(h, &mu, &mu).unwrap();
        let mass: f64 = c.iter().map(|(_, v)| *v).sum();
        prop_assert!(c.iter().all(|(_, v)| *v >= -1e-15));
        prop_assert!((mass - mu.iter().map(|(_, v)| *v).sum::<f64>().powi(2)).abs() < 1e-12);
        prop_assert!(l1_norm(h, &mu) > 0.0 || mu.is_zero());
    }

    #[test]
    fn products_of_groups_are_exact_hypergroups(a in 0usize..6, b in 0usize..6, conj in any::<bool>()) {
        let groups = builtin_groups();
        let build = |g: &FiniteGroup| -> HypergroupTable<Rational> {
            if conj { conjugacy_hypergroup(g) } else { irr_exact(g).unwrap() }
        };
        let p = product(&build(&groups[a]), &build(&groups[b])).unwrap();
        let rep = verify_axioms(&p, 0.0);
        prop_assert!(rep.all_passed(), "{rep}");
        let w = haar_weights(&p, 0.0).unwrap();
        prop_assert_eq!(&w[..], p.haar());
        let back: HypergroupTable<Rational> = parse_table(&write_table(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn hat_map_is_isometric_and_multiplicative(g in 0usize..6, f in complex_vec(8), k in complex_vec(8)) {
        let group = &builtin_groups()[g];
        let chars = group_characters(group).unwrap();
        let dual = irr_hypergroup::<f64>(group).unwrap();
        let t = characters(&dual).unwrap();
        let c = chars.classes.len();
        let f = CentralFunction::new(group, f[..c].to_vec()).unwrap();
        let k = CentralFunction::new(group, k[..c].to_vec()).unwrap();
        let a = norm_a(&dual, &t, &hat_map(&chars, &f)).unwrap().0;
        prop_assert!((a - f.l1_norm(&chars)).abs() < 1e-9);
        let lhs = hat_map(&chars, &f.convolve(&k, group));
        let rhs = hat_map(&chars, &f).pointwise(&hat_map(&chars, &k));
        for x in 0..c {
            prop_assert!((lhs.get(x) - rhs.get(x)).norm() < 1e-9);
        }
    }

    #[test]
    fn diagonal_commutator_vanishes_exactly(g in 0usize..6, irr in any::<bool>(), num in prop::collection::vec(-20i64..20, 5)) {
        let group = &builtin_groups()[g];
        let h: HypergroupTable<Rational> = if irr { irr_exact(group).unwrap() } else { conjugacy_hypergroup(group) };
        let n = h.size();
        let u = HFunction::from_dense(&(0..n).map(|x| Rational::ratio(num[x % num.len()], 7)).collect::<Vec<_>>());
        let e = HFunction::from_dense(&vec![Rational::ratio(1, 1); n]);
        let d = approximate_diagonal(&h, &[e], &[u]).unwrap();
        prop_assert!(d.commutator_exactly_zero);
        prop_assert_eq!(d.commutator, 0.0);
        prop_assert!(indicator_diagonal(&h).unwrap().exact);
    }

    #[test]
    fn family_spec_round_trip(q in 2u32..6, r in 1usize..80, qq in 0.05f64..1.0) {
        for spec in [
            FamilySpec::TreeRadial { q, radius: r },
            FamilySpec::Su2Fusion { radius: r },
            FamilySpec::Suq2Fusion { q: qq, radius: r },
            FamilySpec::Chebyshev { radius: r },
        ] {
            prop_assert_eq!(spec.to_string().parse::<FamilySpec>().unwrap(), spec);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn deformation_preserves_section_intervals(values in complex_vec(6), q in 2u32..4) {
        let h: HypergroupTable<f64> = family(&FamilySpec::TreeRadial { q, radius: 40 }).unwrap();
        let c = chi0(&h).unwrap();
        let pair = voit_deform(&h, &c.values).unwrap();
        let u = HFunction::from_dense(&values);
        let on_h = section_interval(&h, &u, &c.values).unwrap();
        let ratio = u.map(|x, v| v / c.values[x]);
        let on_h0 = section_interval(&pair.deformed, &ratio, &vec![1.0; h.size()]).unwrap();
        prop_assert!(on_h.contains(&on_h0, 1e-12) && on_h0.contains(&on_h, 1e-12));
        prop_assert!(on_h.lower <= on_h.upper + 1e-12);
        let plain = section_interval(&pair.deformed, &u, &vec![1.0; h.size()]).unwrap();
        prop_assert!(plain.lower <= on_h.upper + 1e-12);
    }

    #[test]
    fn polynomial_sections_are_hypergroups(r in 2usize..30, q in 2u32..5) {
        for spec in [FamilySpec::TreeRadial { q, radius: r }, FamilySpec::Su2Fusion { radius: r }] {
            let h: HypergroupTable<Rational> = family(&spec).unwrap();
            let rep = verify_axioms(&h, 0.0);
            prop_assert!(rep.all_passed(), "{rep}");
            prop_assert!(rep.get(Axiom::Commutativity).passed);
        }
    }
}
