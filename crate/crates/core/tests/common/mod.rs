#![allow(dead_code)]

use balvar_core::{rat, ChartSpec, ContactGen, Form, MultiIndex, Poly, Rational, VarRef, Wedge};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn multi_indices(n: usize, max_order: u32) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(n)];
    let mut frontier = out.clone();
    for _ in 0..max_order {
        let mut next = Vec::new();
        for idx in &frontier {
            for mu in 0..n {
                let r = idx.raised(mu);
                if !next.contains(&r) {
                    next.push(r);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn jet_vars(chart: &ChartSpec, max_order: u32) -> Vec<VarRef> {
    let mut out = Vec::new();
    for i in 0..chart.m() {
        for idx in multi_indices(chart.n(), max_order) {
            out.push(VarRef::Jet(i, idx));
        }
    }
    out
}

pub fn all_vars(chart: &ChartSpec, max_order: u32) -> Vec<VarRef> {
    let mut out = jet_vars(chart, max_order);
    out.extend((0..chart.n()).map(VarRef::Base));
    out
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p = *[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5].choose(rng).unwrap();
    rat(p, rng.gen_range(1..=4))
}

pub fn random_monomial(rng: &mut ChaCha8Rng, vars: &[VarRef], max_degree: u32) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    let mut p = Poly::one();
    for _ in 0..degree {
        p = &p * &Poly::var(vars.choose(rng).unwrap().clone());
    }
    p
}

pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[VarRef], max_degree: u32, max_terms: usize) -> Poly {
    let terms = rng.gen_range(1..=max_terms);
    let mut p = Poly::zero();
    for _ in 0..terms {
        p += &random_monomial(rng, vars, max_degree).scale(&nonzero_rational(rng));
    }
    p
}

/// Names `x0…`, fields `u0…`; density `1` or a positive-looking polynomial
/// in the base coordinates.
pub fn random_chart(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, density: bool) -> ChartSpec {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let base: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
    let fields: Vec<String> = (0..m).map(|k| format!("u{k}")).collect();
    let rho = if density && rng.gen_bool(0.5) {
        let xs: Vec<VarRef> = (0..n).map(VarRef::Base).collect();
        let p = random_poly(rng, &xs, 2, 2);
        if p.is_zero() || p.as_constant().is_some() {
            Poly::one()
        } else {
            &p.pow(2) + &Poly::one()
        }
    } else {
        Poly::one()
    };
    ChartSpec::with_density(base, fields, rho).unwrap()
}

pub fn random_gens(rng: &mut ChaCha8Rng, chart: &ChartSpec, max_order: u32, s: usize) -> Vec<ContactGen> {
    let all: Vec<ContactGen> = jet_vars(chart, max_order)
        .iter()
        .map(|v| ContactGen::from_var(v).unwrap())
        .collect();
    let mut gens: Vec<ContactGen> = all.choose_multiple(rng, s.min(all.len())).cloned().collect();
    gens.sort();
    gens
}

/// Random homogeneous form of bidegree `(r, s)`.
pub fn random_form(
    rng: &mut ChaCha8Rng,
    chart: &ChartSpec,
    max_order: u32,
    r: usize,
    s: usize,
    max_degree: u32,
) -> Form {
    let vars = all_vars(chart, max_order);
    let mut f = Form::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut dx: Vec<usize> = (0..chart.n()).collect::<Vec<_>>().choose_multiple(rng, r).cloned().collect();
        dx.sort();
        let gens = random_gens(rng, chart, max_order, s);
        if gens.len() < s {
            continue;
        }
        let c = random_poly(rng, &vars, max_degree, 3);
        f += &Form::term(c, Wedge::new(dx, gens));
    }
    f
}

/// Random top-horizontal-degree form `Σ f·ω…∧η`.
pub fn random_top_form(rng: &mut ChaCha8Rng, chart: &ChartSpec, max_order: u32, s: usize, max_degree: u32) -> Form {
    let vars = all_vars(chart, max_order);
    let mut f = Form::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let gens = random_gens(rng, chart, max_order, s);
        if gens.len() < s {
            continue;
        }
        f += &Form::contact_eta(chart, random_poly(rng, &vars, max_degree, 3), gens);
    }
    f
}
