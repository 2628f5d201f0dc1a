//! Bigraded exterior forms on the infinite jet bundle in the contact
//! coframe `{dx^μ, ω^i_Λ}`.
//!
//! Every basis element is stored as `dx^{μ₁}∧…∧dx^{μ_s}∧ω^{i₁}_{Λ₁}∧…`,
//! horizontal factors first, both lists strictly increasing; reordering
//! signs live in the coefficient. The volume form `η` is not a separate
//! symbol: it is `ρ·dx^0∧…∧dx^{n−1}` with `ρ` folded into the coefficient.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::chart::{ChartSpec, MultiIndex, VarRef};
use crate::poly::{Poly, Rational};

/// The contact form `ω^i_Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactGen {
    pub field: usize,
    pub index: MultiIndex,
}

impl ContactGen {
    pub fn new(field: usize, index: MultiIndex) -> Self {
        ContactGen { field, index }
    }

    /// The jet coordinate `z^i_Λ` this generator is dual to.
    pub fn var(&self) -> VarRef {
        VarRef::Jet(self.field, self.index.clone())
    }

    pub fn from_var(v: &VarRef) -> Option<Self> {
        match v {
            VarRef::Jet(i, idx) => Some(ContactGen::new(*i, idx.clone())),
            VarRef::Base(_) => None,
        }
    }
}

/// A basis element of `Ω^{s,r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wedge {
    pub dx: Vec<usize>,
    pub omega: Vec<ContactGen>,
}

impl Wedge {
    pub fn new(dx: Vec<usize>, omega: Vec<ContactGen>) -> Self {
        Wedge { dx, omega }
    }

    pub fn scalar() -> Self {
        Wedge::new(Vec::new(), Vec::new())
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.dx.len(), self.omega.len())
    }

    /// Canonicalizes arbitrary factor lists; `None` if a factor repeats.
    pub fn canonical(dx: Vec<usize>, omega: Vec<ContactGen>) -> Option<(Wedge, bool)> {
        let (dx, odd_h) = sort_with_parity(dx)?;
        let (omega, odd_c) = sort_with_parity(omega)?;
        Some((Wedge { dx, omega }, odd_h ^ odd_c))
    }
}

/// Sorts with insertion sort, reporting the permutation parity (`true` =
/// odd). Returns `None` on a repeated element.
fn sort_with_parity<T: Ord>(mut v: Vec<T>) -> Option<(Vec<T>, bool)> {
    let mut odd = false;
    for k in 1..v.len() {
        let mut j = k;
        while j > 0 {
            match v[j - 1].cmp(&v[j]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j - 1, j);
                    odd = !odd;
                    j -= 1;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => break,
            }
        }
    }
    Some((v, odd))
}

/// A (possibly bidegree-mixed) exterior form with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Form {
    terms: BTreeMap<Wedge, Poly>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    /// The 0-form `f`.
    pub fn function(f: Poly) -> Self {
        Form::term(f, Wedge::scalar())
    }

    pub fn term(coeff: Poly, wedge: Wedge) -> Self {
        let mut f = Form::zero();
        f.add_term(wedge, coeff);
        f
    }

    /// `coeff · (dx factors) ∧ (ω factors)` from unsorted factor lists.
    pub fn monomial(coeff: Poly, dx: Vec<usize>, omega: Vec<ContactGen>) -> Self {
        match Wedge::canonical(dx, omega) {
            Some((w, odd)) => Form::term(if odd { -coeff } else { coeff }, w),
            None => Form::zero(),
        }
    }

    pub fn dx(mu: usize) -> Self {
        Form::term(Poly::one(), Wedge::new(vec![mu], Vec::new()))
    }

    pub fn omega(gen: ContactGen) -> Self {
        Form::term(Poly::one(), Wedge::new(Vec::new(), vec![gen]))
    }

    /// The coordinate volume `dx^0∧…∧dx^{n−1}`.
    pub fn coordinate_volume(chart: &ChartSpec) -> Self {
        Form::term(Poly::one(), Wedge::new((0..chart.n()).collect(), Vec::new()))
    }

    /// The volume form `η = ρ·dx^0∧…∧dx^{n−1}`.
    pub fn volume(chart: &ChartSpec) -> Self {
        Form::coordinate_volume(chart).mul_poly(chart.rho())
    }

    /// `f · ω^{g₁}∧…∧ω^{g_r}∧η` written contact-first; the sign needed to
    /// move `η` to the front is absorbed.
    pub fn contact_eta(chart: &ChartSpec, f: Poly, gens: Vec<ContactGen>) -> Self {
        let omega = gens
            .into_iter()
            .fold(Form::function(f), |acc, g| acc.wedge(&Form::omega(g)));
        omega.wedge(&Form::volume(chart))
    }

    pub fn add_term(&mut self, wedge: Wedge, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(wedge) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, wedge: &Wedge) -> Poly {
        self.terms.get(wedge).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((s, r))` when every term has horizontal degree `s` and contact
    /// degree `r`; `None` for the zero form or a mixed form.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(Wedge::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The homogeneous `(s, r)` piece.
    pub fn part(&self, s: usize, r: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.bidegree() == (s, r))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(Wedge::bidegree).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Maximal jet order of coefficients and contact generators.
    pub fn jet_order(&self) -> u32 {
        self.terms
            .iter()
            .map(|(w, c)| {
                let g = w.omega.iter().map(|g| g.index.order()).max().unwrap_or(0);
                g.max(c.jet_order())
            })
            .max()
            .unwrap_or(0)
    }

    /// Contact generators occurring in any term.
    pub fn generators(&self) -> std::collections::BTreeSet<ContactGen> {
        self.terms
            .keys()
            .flat_map(|w| w.omega.iter().cloned())
            .collect()
    }

    pub fn mul_poly(&self, p: &Poly) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut out = Form::zero();
        for (w, p) in &self.terms {
            out.add_term(w.clone(), p.scale(c));
        }
        out
    }

    /// Maps every coefficient, keeping the basis.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Poly) -> Poly) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                // a_h a_c b_h b_c = (−1)^{|a_c||b_h|} a_h b_h a_c b_c
                let cross = (wa.omega.len() * wb.dx.len()) % 2 == 1;
                let dx: Vec<usize> = wa.dx.iter().chain(&wb.dx).copied().collect();
                let omega: Vec<ContactGen> = wa.omega.iter().chain(&wb.omega).cloned().collect();
                if let Some((w, odd)) = Wedge::canonical(dx, omega) {
                    let c = ca * cb;
                    out.add_term(w, if odd ^ cross { -c } else { c });
                }
            }
        }
        out
    }

    /// Vertical differential: `d_V(f) = Σ f_{,z^i_Λ} ω^i_Λ`, `d_V dx = d_V ω = 0`.
    pub fn d_v(&self) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            for v in c.jet_vars() {
                let gen = ContactGen::from_var(&v).expect("jet variable");
                let dc = c.partial(&v);
                // ω ∧ dx_part ∧ ω_part = (−1)^{|dx|} dx_part ∧ ω ∧ ω_part
                let mut omega = Vec::with_capacity(w.omega.len() + 1);
                omega.push(gen);
                omega.extend(w.omega.iter().cloned());
                if let Some((nw, odd)) = Wedge::canonical(w.dx.clone(), omega) {
                    let flip = odd ^ (w.dx.len() % 2 == 1);
                    out.add_term(nw, if flip { -dc } else { dc });
                }
            }
        }
        out
    }

    /// Total derivative `d_μ` acting as a derivation: coefficients by the
    /// total derivative, `dx^ν ↦ 0`, `ω^j_Σ ↦ ω^j_{Σ+1_μ}`.
    pub fn total_derivative(&self, mu: usize) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.total_derivative(mu));
            for k in 0..w.omega.len() {
                let mut omega = w.omega.clone();
                omega[k] = ContactGen::new(omega[k].field, omega[k].index.raised(mu));
                if let Some((nw, odd)) = Wedge::canonical(w.dx.clone(), omega) {
                    out.add_term(nw, if odd { -c.clone() } else { c.clone() });
                }
            }
        }
        out
    }

    /// Iterated total derivative along a list of directions.
    pub fn total_derivative_multi(&self, directions: &[usize]) -> Form {
        directions
            .iter()
            .fold(self.clone(), |f, &mu| f.total_derivative(mu))
    }

    /// Horizontal differential `d_H = Σ_μ dx^μ ∧ d_μ`.
    pub fn d_h(&self, chart: &ChartSpec) -> Form {
        let mut out = Form::zero();
        for mu in 0..chart.n() {
            out += &Form::dx(mu).wedge(&self.total_derivative(mu));
        }
        out
    }

    /// Full exterior differential `d = d_H + d_V`.
    pub fn d(&self, chart: &ChartSpec) -> Form {
        &self.d_h(chart) + &self.d_v()
    }

    /// Interior product with the coordinate vector field `∂_{z^i_Λ}`.
    pub fn contract(&self, gen: &ContactGen) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            if let Ok(k) = w.omega.binary_search(gen) {
                let mut omega = w.omega.clone();
                omega.remove(k);
                let odd = (w.dx.len() + k) % 2 == 1;
                out.add_term(
                    Wedge::new(w.dx.clone(), omega),
                    if odd { -c.clone() } else { c.clone() },
                );
            }
        }
        out
    }

    /// Interior product with the prolonged radial field
    /// `pr R = Σ z^i_Λ ∂_{z^i_Λ}`.
    pub fn contract_radial(&self) -> Form {
        let mut out = Form::zero();
        for (w, c) in &self.terms {
            for k in 0..w.omega.len() {
                let mut omega = w.omega.clone();
                let gen = omega.remove(k);
                let odd = (w.dx.len() + k) % 2 == 1;
                let coeff = c * &Poly::var(gen.var());
                out.add_term(Wedge::new(w.dx.clone(), omega), if odd { -coeff } else { coeff });
            }
        }
        out
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coefficients(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn chart_tx() -> ChartSpec {
        ChartSpec::new(["t", "x"], ["u"]).unwrap()
    }

    fn gen(chart: &ChartSpec, i: usize, dirs: &[usize]) -> ContactGen {
        ContactGen::from_var(&chart.jet_ref(i, dirs)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let c = chart_tx();
        let w = Form::omega(gen(&c, 0, &[]));
        assert!(w.wedge(&w).is_zero());
        let dt_dx = Form::dx(0).wedge(&Form::dx(1));
        let dx_dt = Form::dx(1).wedge(&Form::dx(0));
        assert_eq!(dt_dx, -&dx_dt);
    }

    #[test]
    fn wedge_disjoint_generators() {
        let c = ChartSpec::new(["x"], ["u", "v"]).unwrap();
        let (u, v) = (c.y(0), c.y(1));
        let a = Form::omega(gen(&c, 0, &[])).mul_poly(&u);
        let b = Form::contact_eta(&c, v.clone(), vec![gen(&c, 1, &[])]);
        let expected = Form::contact_eta(&c, &u * &v, vec![gen(&c, 0, &[]), gen(&c, 1, &[])]);
        assert_eq!(a.wedge(&b), expected);
    }

    #[test]
    fn d_v_examples() {
        let c = ChartSpec::new(["x"], ["u"]).unwrap();
        let u = c.y(0);
        assert_eq!(
            Form::function(u.pow(2)).d_v(),
            Form::omega(gen(&c, 0, &[])).mul_poly(&u.scale(&int(2)))
        );
        let zx = c.z(0, &[0]);
        let k = Form::contact_eta(&c, zx, vec![gen(&c, 0, &[0])]);
        assert!(k.d_v().is_zero());

        let c2 = ChartSpec::new(["x"], ["u", "v"]).unwrap();
        let k2 = Form::contact_eta(&c2, c2.y(0), vec![gen(&c2, 1, &[])]);
        assert_eq!(
            k2.d_v(),
            Form::contact_eta(&c2, Poly::one(), vec![gen(&c2, 0, &[]), gen(&c2, 1, &[])])
        );
    }

    #[test]
    fn d_h_examples() {
        let c = chart_tx();
        let u = c.y(0);
        let expected = &Form::dx(0).mul_poly(&c.z(0, &[0])) + &Form::dx(1).mul_poly(&c.z(0, &[1]));
        assert_eq!(Form::function(u.clone()).d_h(&c), expected);
        assert!(Form::volume(&c).mul_poly(&u).d_h(&c).is_zero());
    }

    /// `dω¹` expanded in the `dz` basis: `ω = dy − z_μ dx^μ`, so
    /// `dω = −dz_μ∧dx^μ = dx^μ∧dz_μ`; substituting `dz_μ = ω_μ + z_{μν}dx^ν`
    /// and dropping the (vanishing by symmetry) `dx∧dx` part leaves
    /// `dx^μ∧ω_μ`.
    #[test]
    fn d_h_of_contact_form_matches_dz_expansion() {
        let c = chart_tx();
        let w = Form::omega(gen(&c, 0, &[]));
        let mut oracle = Form::zero();
        for mu in 0..2 {
            // dx^μ ∧ dz_μ with dz_μ = ω_μ + Σ_ν z_{μν} dx^ν
            let mut dz = Form::omega(gen(&c, 0, &[mu]));
            for nu in 0..2 {
                dz += &Form::dx(nu).mul_poly(&c.z(0, &[mu, nu]));
            }
            oracle += &Form::dx(mu).wedge(&dz);
        }
        let d = w.d(&c);
        assert_eq!(d, oracle);
        assert_eq!(w.d_h(&c), oracle.part(1, 1));
        assert!(w.d_v().is_zero());
    }

    #[test]
    fn total_derivative_examples() {
        let c = chart_tx();
        let eta = Form::volume(&c);
        assert_eq!(
            eta.mul_poly(&c.z(0, &[1])).total_derivative(0),
            eta.mul_poly(&c.z(0, &[0, 1]))
        );
        let w = Form::contact_eta(&c, Poly::one(), vec![gen(&c, 0, &[])]);
        assert_eq!(
            w.total_derivative(0),
            Form::contact_eta(&c, Poly::one(), vec![gen(&c, 0, &[0])])
        );
    }

    /// With `ρ = x`, `d_x(F·η) = (d_xF·x + F)·dx`, i.e. `(d_xF + F/x)·η`.
    #[test]
    fn total_derivative_carries_density() {
        let c = ChartSpec::with_density(["x"], ["u"], Poly::var(VarRef::Base(0))).unwrap();
        let f = c.y(0).pow(2);
        let x = c.x(0);
        let lhs = Form::volume(&c).mul_poly(&f).total_derivative(0);
        let oracle = Form::coordinate_volume(&c).mul_poly(&(&(&f.total_derivative(0) * &x) + &f));
        assert_eq!(lhs, oracle);
    }

    #[test]
    fn contract_examples() {
        let c = ChartSpec::new(["t", "x"], ["u"]).unwrap();
        let f = c.y(0).pow(3);
        let k = Form::contact_eta(&c, f.clone(), vec![gen(&c, 0, &[1])]);
        assert_eq!(k.contract(&gen(&c, 0, &[1])), Form::volume(&c).mul_poly(&f));
        let k0 = Form::contact_eta(&c, f, vec![gen(&c, 0, &[])]);
        assert!(k0.contract(&gen(&c, 0, &[1])).is_zero());

        let c2 = ChartSpec::new(["x"], ["u", "v"]).unwrap();
        let w = Form::contact_eta(&c2, Poly::one(), vec![gen(&c2, 0, &[]), gen(&c2, 1, &[])]);
        assert_eq!(
            w.contract(&gen(&c2, 0, &[])),
            Form::contact_eta(&c2, Poly::one(), vec![gen(&c2, 1, &[])])
        );
    }

    #[test]
    fn bidegree_bookkeeping() {
        let c = chart_tx();
        let f = Form::function(&c.y(0) * &c.z(0, &[1]));
        assert_eq!(f.bidegree(), Some((0, 0)));
        assert_eq!(f.d_h(&c).bidegree(), Some((1, 0)));
        assert_eq!(f.d_v().bidegree(), Some((0, 1)));
        assert_eq!(f.d(&c).bidegree(), None);
        assert_eq!(f.d(&c).bidegrees(), vec![(0, 1), (1, 0)]);
    }
}
