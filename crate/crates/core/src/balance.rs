//! Balance systems `d_μ(F^μ_i ρ) = Π_i ρ` and the analyses of their
//! K-forms: Helmholtz test, quasi-Lagrangian, Lagrangian/non-Lagrangian
//! splitting, Godunov form and symmetric hyperbolicity.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::chart::{ChartSpec, MultiIndex, VarRef};
use crate::error::{BalanceError, GodunovError, HyperbolicityError};
use crate::form::{ContactGen, Form};
use crate::poly::{Monomial, Poly, Rational};
use crate::variational::{
    euler_lagrange, interior_euler, vertical_decompose, vertical_homotopy, FunctionalForm,
};

/// A first-order-in-form balance system with densities/fluxes `F^μ_i` and
/// sources `Π_i`, each of jet order at most `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceSystem {
    chart: ChartSpec,
    order: u32,
    flux: Vec<Vec<Poly>>,
    sources: Vec<Poly>,
}

impl BalanceSystem {
    /// `flux[i][μ] = F^μ_i`, `sources[i] = Π_i`.
    pub fn new(chart: ChartSpec, flux: Vec<Vec<Poly>>, sources: Vec<Poly>) -> Result<Self, BalanceError> {
        let (n, m) = (chart.n(), chart.m());
        if flux.len() != m {
            return Err(BalanceError::Shape { what: "flux rows", expected: m, found: flux.len() });
        }
        if let Some(row) = flux.iter().find(|r| r.len() != n) {
            return Err(BalanceError::Shape { what: "flux columns", expected: n, found: row.len() });
        }
        if sources.len() != m {
            return Err(BalanceError::Shape { what: "sources", expected: m, found: sources.len() });
        }
        for p in flux.iter().flatten().chain(&sources) {
            chart.check_poly(p)?;
        }
        let order = flux
            .iter()
            .flatten()
            .chain(&sources)
            .map(Poly::jet_order)
            .max()
            .unwrap_or(0);
        Ok(BalanceSystem { chart, order, flux, sources })
    }

    pub fn zero(chart: ChartSpec) -> Self {
        let (n, m) = (chart.n(), chart.m());
        BalanceSystem {
            chart,
            order: 0,
            flux: vec![vec![Poly::zero(); n]; m],
            sources: vec![Poly::zero(); m],
        }
    }

    /// The system `F^μ_i = ∂L/∂z^i_μ`, `Π_i = ∂L/∂y^i` of a first-order
    /// Lagrangian.
    pub fn from_lagrangian(chart: ChartSpec, lagrangian: &Poly) -> Result<Self, BalanceError> {
        chart.check_poly(lagrangian)?;
        let order = lagrangian.jet_order();
        if order > 1 {
            return Err(BalanceError::LagrangianOrder(order));
        }
        let flux = (0..chart.m())
            .map(|i| (0..chart.n()).map(|mu| lagrangian.partial(&chart.jet_ref(i, &[mu]))).collect())
            .collect();
        let sources = (0..chart.m()).map(|i| lagrangian.partial(&chart.jet_ref(i, &[]))).collect();
        Self::new(chart, flux, sources)
    }

    /// The gradient system `F^μ_i = ∂G^μ/∂y^i`, `Π = 0`.
    pub fn from_potentials(chart: ChartSpec, potentials: &[Poly]) -> Result<Self, BalanceError> {
        if potentials.len() != chart.n() {
            return Err(BalanceError::Shape {
                what: "potentials",
                expected: chart.n(),
                found: potentials.len(),
            });
        }
        let flux = (0..chart.m())
            .map(|i| {
                let y = chart.jet_ref(i, &[]);
                potentials.iter().map(|g| g.partial(&y)).collect()
            })
            .collect();
        let m = chart.m();
        Self::new(chart, flux, vec![Poly::zero(); m])
    }

    /// Checks a user-declared order against the data.
    pub fn check_declared_order(&self, declared: u32) -> Result<(), BalanceError> {
        if declared < self.order {
            return Err(BalanceError::DeclaredOrderTooLow { declared, actual: self.order });
        }
        Ok(())
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn flux(&self, i: usize, mu: usize) -> &Poly {
        &self.flux[i][mu]
    }

    pub fn fluxes(&self) -> &[Vec<Poly>] {
        &self.flux
    }

    pub fn source(&self, i: usize) -> &Poly {
        &self.sources[i]
    }

    pub fn sources(&self) -> &[Poly] {
        &self.sources
    }

    pub fn is_zero(&self) -> bool {
        self.flux.iter().flatten().chain(&self.sources).all(Poly::is_zero)
    }

    /// `y^iΠ_i + z^i_μF^μ_i`.
    pub fn pairing(&self) -> Poly {
        let c = &self.chart;
        let mut out = Poly::zero();
        for i in 0..c.m() {
            out += &(&c.y(i) * &self.sources[i]);
            for mu in 0..c.n() {
                out += &(&c.z(i, &[mu]) * &self.flux[i][mu]);
            }
        }
        out
    }
}

/// `K = (F^μ_i ω^i_μ + Π_i ω^i) ∧ η`.
pub fn build_k(bs: &BalanceSystem) -> Form {
    let c = bs.chart();
    let mut k = Form::zero();
    for i in 0..c.m() {
        for mu in 0..c.n() {
            let gen = ContactGen::new(i, MultiIndex::unit(c.n(), mu));
            k += &Form::contact_eta(c, bs.flux(i, mu).clone(), vec![gen]);
        }
        let gen = ContactGen::new(i, MultiIndex::zero(c.n()));
        k += &Form::contact_eta(c, bs.source(i).clone(), vec![gen]);
    }
    k
}

/// `R_i = d_μ(F^μ_i ρ) − Π_i ρ`.
pub fn balance_residuals(bs: &BalanceSystem) -> Vec<Poly> {
    let c = bs.chart();
    (0..c.m())
        .map(|i| {
            let mut r = -(bs.source(i) * c.rho());
            for mu in 0..c.n() {
                r += &(bs.flux(i, mu) * c.rho()).total_derivative(mu);
            }
            r
        })
        .collect()
}

/// `I(K)`, whose components are `−R_i`.
pub fn source_form(bs: &BalanceSystem) -> FunctionalForm {
    interior_euler(bs.chart(), &build_k(bs)).expect("K has bidegree (n, 1)")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HelmholtzReport {
    pub closed: bool,
    /// `dK`.
    pub residual: Form,
    /// The homotopy Lagrangian when `K` is closed.
    pub lagrangian: Option<Poly>,
}

pub fn helmholtz(bs: &BalanceSystem) -> HelmholtzReport {
    let residual = build_k(bs).d(bs.chart());
    let closed = residual.is_zero();
    HelmholtzReport {
        closed,
        lagrangian: closed.then(|| quasi_lagrangian(bs)),
        residual,
    }
}

/// `L̃ = ∫₀¹ [y^iΠ_i + z^i_μF^μ_i](x, ty, tz) dt`, the leading `y`/`z`
/// factor left unscaled.
pub fn quasi_lagrangian(bs: &BalanceSystem) -> Poly {
    bs.pairing()
        .scale_integrate(-1)
        .expect("pairing has no vertical-degree-0 terms")
}

/// `(K_lag, K_nlag)` with `K_lag = d_V(L̃η)`.
pub fn k_decompose(bs: &BalanceSystem) -> (Form, Form) {
    vertical_decompose(&build_k(bs)).expect("K has bidegree (n, 1)")
}

/// `(G_K, E(L̃))`: the Godunov part `I(K_nlag)` and the Euler–Lagrange part.
pub fn f_split(bs: &BalanceSystem) -> (FunctionalForm, FunctionalForm) {
    let (_, k_nlag) = k_decompose(bs);
    let godunov = interior_euler(bs.chart(), &k_nlag).expect("K_nlag has bidegree (n, 1)");
    let euler = euler_lagrange(bs.chart(), &quasi_lagrangian(bs));
    (godunov, euler)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityReport {
    pub is_trivial: bool,
    /// The `x`-only part of the pairing; always zero for polynomial data.
    pub phi: Poly,
}

/// Whether `y^iΠ_i + z^i_μF^μ_i` depends on `x` only, which forces `L̃ = 0`.
pub fn trivial_quasi_lagrangian_check(bs: &BalanceSystem) -> TrivialityReport {
    let pairing = bs.pairing();
    TrivialityReport {
        is_trivial: pairing.vertical_part().is_zero(),
        phi: pairing.base_part(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GodunovReport {
    pub is_zero_order: bool,
    pub flux_symmetric: Vec<bool>,
    /// `G^μ` with `∂G^μ/∂y^i = F^μ_i`, when that relation could be verified.
    pub potentials: Vec<Option<Poly>>,
    pub source_pairing: Poly,
    pub pairing_constant: Option<Rational>,
    pub verdict: bool,
}

/// Tests the Godunov conditions: zero order, `∂F^μ_i/∂y^k` symmetric in
/// `(i, k)` for each `μ`, and `y^kΠ_k` constant.
pub fn godunov_check(bs: &BalanceSystem) -> Result<GodunovReport, GodunovError> {
    let c = bs.chart();
    let ys: Vec<VarRef> = (0..c.m()).map(|i| c.jet_ref(i, &[])).collect();
    let mut flux_symmetric = Vec::with_capacity(c.n());
    let mut potentials = Vec::with_capacity(c.n());
    for mu in 0..c.n() {
        let symmetric = (0..c.m()).all(|i| {
            (i + 1..c.m()).all(|k| bs.flux(i, mu).partial(&ys[k]) == bs.flux(k, mu).partial(&ys[i]))
        });
        flux_symmetric.push(symmetric);
        let potential = symmetric.then(|| {
            let mut g = Poly::zero();
            for (i, y) in ys.iter().enumerate() {
                g += &(&Poly::var(y.clone()) * bs.flux(i, mu));
            }
            g.scale_integrate(-1).expect("vertical degree ≥ 1")
        });
        let verified = potential.filter(|g| (0..c.m()).all(|i| &g.partial(&ys[i]) == bs.flux(i, mu)));
        potentials.push(verified);
    }
    let source_pairing: Poly = (0..c.m()).map(|i| &c.y(i) * bs.source(i)).sum();
    let pairing_constant = source_pairing.as_constant();
    let is_zero_order = bs.order() == 0;
    let verdict = is_zero_order
        && flux_symmetric.iter().all(|&s| s)
        && potentials.iter().all(Option::is_some)
        && pairing_constant.is_some();
    let report = GodunovReport {
        is_zero_order,
        flux_symmetric,
        potentials,
        source_pairing,
        pairing_constant,
        verdict,
    };
    if is_zero_order {
        Ok(report)
    } else {
        Err(GodunovError::OrderTooHigh { order: bs.order(), report: Box::new(report) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicityReport {
    /// `m[μ][i][j] = ∂F̃^μ_i/∂y^j` for the Godunov flux `F̃^μ_i = F^μ_i − ∂L̃/∂z^i_μ`.
    pub matrices: Vec<Vec<Vec<Poly>>>,
    pub symmetric: Vec<bool>,
    pub point: Vec<Rational>,
    pub leading_minors: Vec<Rational>,
    pub verdict: bool,
}

/// Godunov fluxes `F̃^μ_i = F^μ_i − ∂L̃/∂z^i_μ`.
pub fn godunov_fluxes(bs: &BalanceSystem) -> Vec<Vec<Poly>> {
    let c = bs.chart();
    let lt = quasi_lagrangian(bs);
    (0..c.m())
        .map(|i| {
            (0..c.n())
                .map(|mu| bs.flux(i, mu) - &lt.partial(&c.jet_ref(i, &[mu])))
                .collect()
        })
        .collect()
}

/// Friedrichs test on the Godunov part: every `M^μ` symmetric and `M^0`
/// positive definite at `point = (x, y)` by leading principal minors.
pub fn symmetric_hyperbolicity(
    bs: &BalanceSystem,
    point: &[Rational],
) -> Result<HyperbolicityReport, HyperbolicityError> {
    let c = bs.chart();
    if bs.order() != 0 {
        return Err(HyperbolicityError::OrderTooHigh(bs.order()));
    }
    if point.len() != c.n() + c.m() {
        return Err(HyperbolicityError::DimensionMismatch {
            expected: c.n() + c.m(),
            found: point.len(),
        });
    }
    let ft = godunov_fluxes(bs);
    let matrices: Vec<Vec<Vec<Poly>>> = (0..c.n())
        .map(|mu| {
            (0..c.m())
                .map(|i| (0..c.m()).map(|j| ft[i][mu].partial(&c.jet_ref(j, &[]))).collect())
                .collect()
        })
        .collect();
    let symmetric = matrices
        .iter()
        .map(|mat| (0..c.m()).all(|i| (0..i).all(|j| mat[i][j] == mat[j][i])))
        .collect::<Vec<_>>();
    let value = |v: &VarRef| match v {
        VarRef::Base(mu) => point[*mu].clone(),
        VarRef::Jet(i, idx) if idx.is_zero() => point[c.n() + i].clone(),
        VarRef::Jet(..) => Rational::zero(),
    };
    let m0: Vec<Vec<Rational>> = matrices[0]
        .iter()
        .map(|row| row.iter().map(|p| p.eval(value)).collect())
        .collect();
    let leading_minors = leading_principal_minors(&m0);
    let singular = leading_minors.iter().position(Zero::is_zero);
    let verdict = singular.is_none()
        && symmetric.iter().all(|&s| s)
        && leading_minors.iter().all(Signed::is_positive);
    let report = HyperbolicityReport {
        matrices,
        symmetric,
        point: point.to_vec(),
        leading_minors,
        verdict,
    };
    match singular {
        Some(index) => Err(HyperbolicityError::SingularPoint { index: index + 1, report: Box::new(report) }),
        None => Ok(report),
    }
}

fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let k = a.len();
    let mut det = Rational::from_integer(1.into());
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..k {
            let f = &a[r][col] / &pivot;
            if f.is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(r);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Determinants of the upper-left `k×k` blocks, `k = 1..=m`.
pub fn leading_principal_minors(mat: &[Vec<Rational>]) -> Vec<Rational> {
    (1..=mat.len())
        .map(|k| determinant(mat[..k].iter().map(|row| row[..k].to_vec()).collect()))
        .collect()
}

/// Substitutes the prolonged section `z^i_Λ ↦ ∂^Λ s^i(x)`.
pub fn evaluate_on_section(chart: &ChartSpec, p: &Poly, section: &[Poly]) -> Result<Poly, BalanceError> {
    if section.len() != chart.m() {
        return Err(BalanceError::Shape { what: "section components", expected: chart.m(), found: section.len() });
    }
    for (i, s) in section.iter().enumerate() {
        if s.has_jet_vars() {
            return Err(BalanceError::SectionNotBase(i));
        }
        chart.check_poly(s)?;
    }
    Ok(p.substitute(|v| match v {
        VarRef::Base(_) => None,
        VarRef::Jet(i, idx) => Some(
            idx.directions()
                .iter()
                .fold(section[*i].clone(), |acc, &mu| acc.partial(&VarRef::Base(mu))),
        ),
    }))
}

/// `L·ρ = Σ_μ d_μ(potentials[μ]) + remainder`, found per direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceSplit {
    pub potentials: Vec<Poly>,
    pub remainder: Poly,
}

impl DivergenceSplit {
    pub fn recombine(&self) -> Poly {
        let mut out = self.remainder.clone();
        for (mu, p) in self.potentials.iter().enumerate() {
            out += &p.total_derivative(mu);
        }
        out
    }
}

/// Key grouping monomials that `d_μ` can connect: jet factors with the
/// `μ`-count erased plus all base factors. `None` when the monomial has
/// no jet factor or depends on `x^μ`.
fn chain_signature(m: &Monomial, mu: usize) -> Option<Vec<(VarRef, u32)>> {
    if m.vertical_degree() == 0 || m.exponent(&VarRef::Base(mu)) > 0 {
        return None;
    }
    let mut sig: Vec<(VarRef, u32)> = m
        .factors()
        .iter()
        .map(|(v, e)| match v {
            VarRef::Jet(i, idx) => {
                let mut counts = idx.counts().to_vec();
                counts[mu] = 0;
                (VarRef::Jet(*i, MultiIndex::from_counts(counts)), *e)
            }
            VarRef::Base(_) => (v.clone(), *e),
        })
        .collect();
    sig.sort();
    Some(sig)
}

/// One-variable homotopy for `d_μ`-divergences:
/// `∫₀¹ Σ_chains Σ_{j<k} φ_j (−d_μ)^{k−1−j} ∂f/∂φ_k [x, tφ] dt`.
fn directional_potential(f: &Poly, mu: usize) -> Poly {
    let mut acc = Poly::zero();
    for v in f.jet_vars() {
        let VarRef::Jet(i, idx) = &v else { continue };
        let k = idx.counts()[mu];
        if k == 0 {
            continue;
        }
        let df = f.partial(&v);
        let mut base = idx.counts().to_vec();
        for j in 0..k {
            base[mu] = j;
            let phi = Poly::var(VarRef::Jet(*i, MultiIndex::from_counts(base.clone())));
            let mut inner = df.clone();
            for _ in 0..(k - 1 - j) {
                inner = -inner.total_derivative(mu);
            }
            acc += &(&phi * &inner);
        }
    }
    acc.scale_integrate(-1).expect("every term carries a φ factor")
}

/// Splits `f` into exact `d_μ` divergences plus a remainder. Groups are
/// tried direction by direction and accepted only when `d_μ` of the
/// recovered potential reproduces them exactly.
pub fn divergence_split(chart: &ChartSpec, f: &Poly) -> DivergenceSplit {
    let mut remainder = f.clone();
    let mut potentials = vec![Poly::zero(); chart.n()];
    for (mu, potential) in potentials.iter_mut().enumerate() {
        let mut groups: BTreeMap<Vec<(VarRef, u32)>, Poly> = BTreeMap::new();
        for (m, c) in remainder.terms() {
            if let Some(sig) = chain_signature(m, mu) {
                groups.entry(sig).or_default().add_term(m.clone(), c.clone());
            }
        }
        for group in groups.values() {
            let h = directional_potential(group, mu);
            if !h.is_zero() && &h.total_derivative(mu) == group {
                remainder -= group;
                *potential += &h;
            }
        }
    }
    DivergenceSplit { potentials, remainder }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub quasi_lagrangian: Poly,
    pub k_lag: Form,
    pub k_nlag: Form,
    pub el_of_ltilde: FunctionalForm,
    pub godunov_part: FunctionalForm,
    pub helmholtz_closed: bool,
    pub trivial_quasi_lagrangian: bool,
    /// Divergence presentation of `L̃ρ`.
    pub divergence: DivergenceSplit,
}

pub fn decompose(bs: &BalanceSystem) -> DecompositionReport {
    let quasi_lagrangian = quasi_lagrangian(bs);
    let (k_lag, k_nlag) = k_decompose(bs);
    let (godunov_part, el_of_ltilde) = f_split(bs);
    let divergence = divergence_split(bs.chart(), &(&quasi_lagrangian * bs.chart().rho()));
    DecompositionReport {
        quasi_lagrangian,
        k_lag,
        k_nlag,
        el_of_ltilde,
        godunov_part,
        helmholtz_closed: helmholtz(bs).closed,
        trivial_quasi_lagrangian: trivial_quasi_lagrangian_check(bs).is_trivial,
        divergence,
    }
}

/// The non-Lagrangian part has an `x`-only homotopy coefficient.
pub fn is_pure_non_lagrangian(form: &Form) -> bool {
    vertical_homotopy(form)
        .map(|h| h.terms().all(|(_, c)| c.vertical_part().is_zero()))
        .unwrap_or(false)
}
