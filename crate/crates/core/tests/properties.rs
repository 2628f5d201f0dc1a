mod common;

use balvar_core::balance::{
    balance_residuals, build_k, evaluate_on_section, f_split, godunov_check, godunov_fluxes, helmholtz,
    is_pure_non_lagrangian, k_decompose, quasi_lagrangian, source_form, trivial_quasi_lagrangian_check,
};
use balvar_core::variational::{delta_v, v_projector};
use balvar_core::{
    euler_lagrange, interior_euler, rat, vertical_decompose, vertical_homotopy, BalanceSystem, ChartSpec,
    Form, Poly, VarRef,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn homotopy_identity_and_projector(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 3, 3, true);
        let h = r.gen_range(0..=chart.n());
        let s = r.gen_range(1..=2);
        let w = random_form(&mut r, &chart, 2, h, s, 3);
        let (exact, complement) = vertical_decompose(&w).unwrap();
        prop_assert_eq!(&exact + &complement, w.clone());
        let v = v_projector(&w).unwrap();
        prop_assert_eq!(v_projector(&v).unwrap(), v);
        let dw = w.d_v();
        prop_assert_eq!(vertical_homotopy(&dw).unwrap().d_v(), dw);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn bicomplex_relations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 3, 2, false);
        let h = r.gen_range(0..chart.n());
        let s = r.gen_range(0..=2);
        let w = random_form(&mut r, &chart, 1, h, s, 2);
        prop_assert!(w.d_v().d_v().is_zero());
        prop_assert!(w.d_h(&chart).d_h(&chart).is_zero());
        prop_assert!((&w.d_h(&chart).d_v() + &w.d_v().d_h(&chart)).is_zero());
        prop_assert!(w.d(&chart).d(&chart).is_zero());
    }

    #[test]
    fn total_derivative_is_the_chain_rule_on_sections(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, false);
        let p = random_poly(&mut r, &all_vars(&chart, 2), 3, 4);
        let xs: Vec<VarRef> = (0..chart.n()).map(VarRef::Base).collect();
        let section: Vec<Poly> = (0..chart.m()).map(|_| random_poly(&mut r, &xs, 3, 3)).collect();
        let mu = r.gen_range(0..chart.n());
        let lhs = evaluate_on_section(&chart, &p.total_derivative(mu), &section).unwrap();
        let rhs = evaluate_on_section(&chart, &p, &section).unwrap().partial(&VarRef::Base(mu));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 3, 2, false);
        let p = random_poly(&mut r, &all_vars(&chart, 2), 3, 4);
        let (a, b) = (r.gen_range(0..chart.n()), r.gen_range(0..chart.n()));
        prop_assert_eq!(
            p.total_derivative(a).total_derivative(b),
            p.total_derivative(b).total_derivative(a)
        );
    }

    #[test]
    fn interior_euler_is_idempotent_and_kills_horizontal_exact_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, true);
        let s = r.gen_range(1..=2);
        let w = random_top_form(&mut r, &chart, 2, s, 2);
        let once = interior_euler(&chart, &w).unwrap();
        prop_assert_eq!(interior_euler(&chart, once.form()).unwrap(), once);

        let lower = random_form(&mut r, &chart, 1, chart.n() - 1, s, 2);
        prop_assert!(interior_euler(&chart, &lower.d_h(&chart)).unwrap().is_zero());
    }

    #[test]
    fn euler_lagrange_forms_are_closed_under_delta_v(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, true);
        let l = random_poly(&mut r, &all_vars(&chart, 2), 3, 4);
        let e = euler_lagrange(&chart, &l);
        prop_assert!(delta_v(&chart, &e).unwrap().is_zero());
        let via_forms = interior_euler(&chart, &Form::volume(&chart).mul_poly(&l).d_v()).unwrap();
        prop_assert_eq!(via_forms, e);
    }

    #[test]
    fn euler_lagrange_ignores_divergences(seed in any::<u64>()) {
        let mut r = rng(seed);
        let flat = random_chart(&mut r, 3, 2, false);
        let vars = all_vars(&flat, 1);
        let l = random_poly(&mut r, &vars, 3, 3);
        let mut shifted = l.clone();
        for mu in 0..flat.n() {
            shifted += &random_poly(&mut r, &vars, 3, 2).total_derivative(mu);
        }
        prop_assert_eq!(euler_lagrange(&flat, &shifted), euler_lagrange(&flat, &l));

        // ρ independent of x^1: d_1(ρP)/ρ = d_1 P stays polynomial.
        let chart = ChartSpec::with_density(["a", "b"], ["u"], &Poly::var(VarRef::Base(0)).pow(2) + &Poly::one()).unwrap();
        let vars = all_vars(&chart, 1);
        let l = random_poly(&mut r, &vars, 3, 3);
        let shifted = &l + &random_poly(&mut r, &vars, 3, 2).total_derivative(1);
        prop_assert_eq!(euler_lagrange(&chart, &shifted), euler_lagrange(&chart, &l));
    }

    #[test]
    fn anti_lagrangian_criterion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, true);
        let w = random_top_form(&mut r, &chart, 1, 1, 2);
        let pure = |f: &Form| vertical_homotopy(f).unwrap().terms().all(|(_, c)| c.vertical_part().is_zero());
        prop_assert_eq!(v_projector(&w).unwrap() == w, pure(&w));
        let v = v_projector(&w).unwrap();
        prop_assert!(pure(&v));
    }

    #[test]
    fn second_order_lagrangians_are_recovered_by_the_homotopy(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, true);
        let l = random_poly(&mut r, &all_vars(&chart, 2), 4, 4);
        let eta = Form::volume(&chart);
        let recovered = vertical_homotopy(&eta.mul_poly(&l).d_v()).unwrap();
        prop_assert_eq!(recovered, eta.mul_poly(&l.vertical_part()));
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn lagrangian_systems_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 3, 3, true);
        let l = random_poly(&mut r, &all_vars(&chart, 1), 4, 4);
        let bs = BalanceSystem::from_lagrangian(chart.clone(), &l).unwrap();
        let h = helmholtz(&bs);
        prop_assert!(h.closed);
        let recovered = h.lagrangian.unwrap();
        prop_assert_eq!(&recovered, &(&l - &l.base_part()));
        for i in 0..chart.m() {
            prop_assert_eq!(&recovered.partial(&chart.jet_ref(i, &[])), bs.source(i));
            for mu in 0..chart.n() {
                prop_assert_eq!(&recovered.partial(&chart.jet_ref(i, &[mu])), bs.flux(i, mu));
            }
        }
        let (_, nlag) = k_decompose(&bs);
        prop_assert!(nlag.is_zero());
        let (g, _) = f_split(&bs);
        prop_assert!(g.is_zero());
    }

    #[test]
    fn splitting_consistency(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, true);
        let vars = all_vars(&chart, 1);
        let flux = (0..chart.m()).map(|_| (0..chart.n()).map(|_| random_poly(&mut r, &vars, 3, 2)).collect()).collect();
        let sources = (0..chart.m()).map(|_| random_poly(&mut r, &vars, 3, 2)).collect();
        let bs = BalanceSystem::new(chart.clone(), flux, sources).unwrap();
        let k = build_k(&bs);
        let (lag, nlag) = k_decompose(&bs);
        prop_assert_eq!(&lag + &nlag, k);
        let lt = quasi_lagrangian(&bs);
        prop_assert_eq!(&lag, &Form::volume(&chart).mul_poly(&lt).d_v());
        prop_assert!(is_pure_non_lagrangian(&nlag));
        let (g, e) = f_split(&bs);
        let src = source_form(&bs).components(&chart);
        let residuals = balance_residuals(&bs);
        for i in 0..chart.m() {
            prop_assert_eq!(&(&g.components(&chart)[i] + &e.components(&chart)[i]), &src[i]);
            prop_assert!((&src[i] + &residuals[i]).is_zero());
        }
        // directness: closed part has no complement, pure part no exact part
        prop_assert!(vertical_decompose(&lag).unwrap().1.is_zero());
        prop_assert!(vertical_decompose(&nlag).unwrap().0.is_zero());
    }

    #[test]
    fn trivial_pairing_forces_zero_lagrangian_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 3, false);
        let (n, m) = (chart.n(), chart.m());
        let xs: Vec<VarRef> = (0..n).map(VarRef::Base).collect();
        // y^iΠ_i + z^i_μF^μ_i vanishes for Π_i = A_ik y^k, F^μ_i = C^{μν}_{ik} z^k_ν
        // with A and C antisymmetric.
        let mut sources = vec![Poly::zero(); m];
        for i in 0..m {
            for k in 0..i {
                let a = random_poly(&mut r, &xs, 1, 2);
                sources[i] += &(&a * &chart.y(k));
                sources[k] -= &(&a * &chart.y(i));
            }
        }
        let mut flux = vec![vec![Poly::zero(); n]; m];
        let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |mu| (i, mu))).collect();
        for (a, &(i, mu)) in slots.iter().enumerate() {
            for &(k, nu) in &slots[..a] {
                let c = random_poly(&mut r, &xs, 1, 1);
                flux[i][mu] += &(&c * &chart.z(k, &[nu]));
                flux[k][nu] -= &(&c * &chart.z(i, &[mu]));
            }
        }
        let bs = BalanceSystem::new(chart.clone(), flux, sources).unwrap();
        let t = trivial_quasi_lagrangian_check(&bs);
        prop_assert!(t.is_trivial);
        prop_assert!(quasi_lagrangian(&bs).is_zero());
        prop_assert!(euler_lagrange(&chart, &quasi_lagrangian(&bs)).is_zero());
        prop_assert!(f_split(&bs).1.is_zero());
    }

    #[test]
    fn godunov_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 3, 3, false);
        let vars: Vec<VarRef> = (0..chart.m())
            .map(|i| chart.jet_ref(i, &[]))
            .chain((0..chart.n()).map(VarRef::Base))
            .collect();
        let potentials: Vec<Poly> = (0..chart.n()).map(|_| random_poly(&mut r, &vars, 4, 4)).collect();
        let bs = BalanceSystem::from_potentials(chart.clone(), &potentials).unwrap();
        let report = godunov_check(&bs).unwrap();
        prop_assert!(report.verdict);
        for (mu, g) in potentials.iter().enumerate() {
            let recovered = report.potentials[mu].clone().unwrap();
            prop_assert_eq!(&recovered, &(g - &g.base_part()));
        }
        // Godunov part of a flux-symmetric system has symmetric M^μ; the
        // Lagrangian part of the principal symbol is antisymmetric.
        let ft = godunov_fluxes(&bs);
        let el = f_split(&bs).1.components(&chart);
        for mu in 0..chart.n() {
            for i in 0..chart.m() {
                for j in 0..chart.m() {
                    let yi = chart.jet_ref(i, &[]);
                    let yj = chart.jet_ref(j, &[]);
                    prop_assert_eq!(ft[i][mu].partial(&yj), ft[j][mu].partial(&yi));
                    let zj = chart.jet_ref(j, &[mu]);
                    let zi = chart.jet_ref(i, &[mu]);
                    prop_assert_eq!(el[i].partial(&zj), -el[j].partial(&zi));
                }
            }
        }
    }

    #[test]
    fn lagrangian_principal_part_is_antisymmetric_for_any_zero_order_system(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 3, false);
        let vars: Vec<VarRef> = (0..chart.m()).map(|i| chart.jet_ref(i, &[])).collect();
        let flux = (0..chart.m()).map(|_| (0..chart.n()).map(|_| random_poly(&mut r, &vars, 3, 3)).collect()).collect();
        let sources = (0..chart.m()).map(|_| random_poly(&mut r, &vars, 2, 2)).collect();
        let bs = BalanceSystem::new(chart.clone(), flux, sources).unwrap();
        let el = f_split(&bs).1.components(&chart);
        for mu in 0..chart.n() {
            for i in 0..chart.m() {
                for j in 0..chart.m() {
                    prop_assert_eq!(
                        el[i].partial(&chart.jet_ref(j, &[mu])),
                        -el[j].partial(&chart.jet_ref(i, &[mu]))
                    );
                }
            }
        }
    }
}

/// Composite 8-point Gauss–Legendre on [0, 1].
fn quadrature(f: impl Fn(f64) -> f64) -> f64 {
    const NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let panels = 16;
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            total += w * (f(mid - x * h / 2.0) + f(mid + x * h / 2.0)) * h / 2.0;
        }
    }
    total
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn scale_integrate_matches_quadrature(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_chart(&mut r, 2, 2, false);
        let vars = all_vars(&chart, 1);
        let p = random_poly(&mut r, &vars, 4, 5).vertical_part();
        prop_assume!(!p.is_zero());
        let e: i64 = r.gen_range(-1..=2);
        let exact = p.scale_integrate(e).unwrap();
        let point: Vec<f64> = vars.iter().map(|_| r.gen_range(-2.0..2.0)).collect();
        let value = |v: &VarRef| point[vars.iter().position(|w| w == v).unwrap()];
        let numeric = quadrature(|t| {
            t.powi(e as i32) * p.eval_f64(|v| if v.is_jet() { t * value(v) } else { value(v) })
        });
        let want = exact.eval_f64(value);
        prop_assert!((numeric - want).abs() <= 1e-9 * want.abs().max(1.0), "{numeric} vs {want}");
    }
}

#[test]
fn scale_integrate_rejects_divergent_exponent() {
    let chart = ChartSpec::new(["x"], ["u"]).unwrap();
    let p = &chart.y(0) + &Poly::one();
    assert!(p.scale_integrate(-1).is_err());
    assert_eq!(chart.y(0).scale_integrate(-1).unwrap(), chart.y(0));
    assert_eq!(chart.y(0).pow(2).scale_integrate(0).unwrap(), chart.y(0).pow(2).scale(&rat(1, 3)));
}
