//! Operators of the variational bicomplex on top-horizontal-degree forms:
//! interior Euler operator, vertical homotopy and the decompositions built
//! from them.

use std::collections::BTreeMap;

use crate::chart::{ChartSpec, MultiIndex, VarRef};
use crate::error::VariationalError;
use crate::form::{ContactGen, Form, Wedge};
use crate::poly::{int, Poly};

/// A form in the image of the interior Euler operator.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FunctionalForm {
    form: Form,
}

impl FunctionalForm {
    /// `Σ_i E_i ω^i ∧ dx^0∧…∧dx^{n−1}`; the `E_i` already include `ρ`.
    pub fn from_components(chart: &ChartSpec, components: &[Poly]) -> Self {
        let vol: Vec<usize> = (0..chart.n()).collect();
        let flip = chart.n() % 2 == 1;
        let mut form = Form::zero();
        for (i, e) in components.iter().enumerate() {
            let gen = ContactGen::new(i, MultiIndex::zero(chart.n()));
            form.add_term(
                Wedge::new(vol.clone(), vec![gen]),
                if flip { -e.clone() } else { e.clone() },
            );
        }
        FunctionalForm { form }
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn into_form(self) -> Form {
        self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn contact_degree(&self) -> Option<usize> {
        self.form.bidegree().map(|(_, r)| r)
    }

    /// Components `E_i` of a contact-degree-one functional form, against
    /// the coordinate volume: the form is `Σ E_i ω^i ∧ dx-volume`.
    pub fn components(&self, chart: &ChartSpec) -> Vec<Poly> {
        let vol: Vec<usize> = (0..chart.n()).collect();
        let flip = chart.n() % 2 == 1;
        (0..chart.m())
            .map(|i| {
                let gen = ContactGen::new(i, MultiIndex::zero(chart.n()));
                let c = self.form.coefficient(&Wedge::new(vol.clone(), vec![gen]));
                if flip {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }
}

fn check_top_degree(chart: &ChartSpec, form: &Form) -> Result<usize, VariationalError> {
    match form.bidegree() {
        Some((s, r)) if s == chart.n() && r >= 1 => Ok(r),
        None if form.is_zero() => Ok(0),
        found => Err(VariationalError::Bidegree {
            expected: format!("({}, s ≥ 1)", chart.n()),
            found: describe(found, form),
        }),
    }
}

fn describe(found: Option<(usize, usize)>, form: &Form) -> String {
    match found {
        Some((s, r)) => format!("({s}, {r})"),
        None => format!("mixed {:?}", form.bidegrees()),
    }
}

/// `(−d)_Λ` on forms.
fn minus_d_multi(form: &Form, idx: &MultiIndex) -> Form {
    let out = form.total_derivative_multi(&idx.directions());
    if idx.order() % 2 == 1 {
        -&out
    } else {
        out
    }
}

/// Interior Euler operator
/// `I(ω) = (1/s) ω^i ∧ Σ_Λ (−d)_Λ (i_{∂_{z^i_Λ}} ω)` on `(n, s)`-forms.
///
/// The Λ-sum runs over the generators actually present in `ω`, which is
/// where the contraction is nonzero.
pub fn interior_euler(chart: &ChartSpec, form: &Form) -> Result<FunctionalForm, VariationalError> {
    let s = check_top_degree(chart, form)?;
    if s == 0 {
        return Ok(FunctionalForm::default());
    }
    let mut by_field: BTreeMap<usize, Form> = BTreeMap::new();
    for gen in form.generators() {
        let inner = minus_d_multi(&form.contract(&gen), &gen.index);
        *by_field.entry(gen.field).or_default() += &inner;
    }
    let mut out = Form::zero();
    for (i, inner) in by_field {
        let w = Form::omega(ContactGen::new(i, MultiIndex::zero(chart.n())));
        out += &w.wedge(&inner);
    }
    Ok(FunctionalForm {
        form: out.scale(&crate::poly::rat(1, s as i64)),
    })
}

/// Vertical homotopy `h^{r,s}_V(ω) = ∫₀¹ t^{s−1} i_{pr R} ω[x; ty, tz] dt`.
///
/// Coefficient monomials of vertical degree `d` get weight `1/(d+s)`; the
/// jet coordinate produced by the contraction is not rescaled.
pub fn vertical_homotopy(form: &Form) -> Result<Form, VariationalError> {
    let s = match form.bidegree() {
        Some((_, s)) if s >= 1 => s,
        None if form.is_zero() => return Ok(Form::zero()),
        found => {
            return Err(VariationalError::Bidegree {
                expected: "(r, s ≥ 1)".into(),
                found: describe(found, form),
            })
        }
    };
    let scaled = form.map_coefficients(|c| {
        c.scale_integrate(s as i64 - 1)
            .expect("d + s > 0 for s ≥ 1")
    });
    Ok(scaled.contract_radial())
}

/// `ω = d_V(h ω) + h(d_V ω)`, returned as `(exact part, complement)`.
pub fn vertical_decompose(form: &Form) -> Result<(Form, Form), VariationalError> {
    let exact = vertical_homotopy(form)?.d_v();
    let complement = vertical_homotopy(&form.d_v())?;
    Ok((exact, complement))
}

/// The projector `V = h ∘ d_V`.
pub fn v_projector(form: &Form) -> Result<Form, VariationalError> {
    vertical_homotopy(&form.d_v())
}

/// Euler–Lagrange form of `L·η`, computed directly as
/// `E_i = Σ_Λ (−1)^{|Λ|} d_Λ(ρ ∂L/∂z^i_Λ)` (coordinate-volume convention).
pub fn euler_lagrange(chart: &ChartSpec, lagrangian: &Poly) -> FunctionalForm {
    let weighted = |v: &VarRef| chart.rho() * &lagrangian.partial(v);
    let mut comps = vec![Poly::zero(); chart.m()];
    for v in lagrangian.jet_vars() {
        if let VarRef::Jet(i, idx) = &v {
            let mut term = weighted(&v).total_derivative_multi(&idx.directions());
            if idx.order() % 2 == 1 {
                term = -term;
            }
            comps[*i] += &term;
        }
    }
    FunctionalForm::from_components(chart, &comps)
}

/// Induced vertical differential `δ_V = I ∘ d_V` on functional forms.
pub fn delta_v(chart: &ChartSpec, f: &FunctionalForm) -> Result<FunctionalForm, VariationalError> {
    if !f.is_zero() && interior_euler(chart, f.form())?.form() != f.form() {
        return Err(VariationalError::NotFunctional);
    }
    interior_euler(chart, &f.form().d_v())
}

/// Coefficients `F^Σ_i` of a higher-order balance form
/// `K = Σ_Σ F^Σ_i ω^i_Σ ∧ η`; the `Σ = 0` entry plays the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HigherBalanceData {
    pub chart: ChartSpec,
    pub coefficients: BTreeMap<(usize, MultiIndex), Poly>,
}

impl HigherBalanceData {
    pub fn new(chart: ChartSpec) -> Self {
        HigherBalanceData {
            chart,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn with(mut self, field: usize, directions: &[usize], coeff: Poly) -> Self {
        let VarRef::Jet(_, idx) = self.chart.jet_ref(field, directions) else {
            unreachable!()
        };
        self.coefficients.insert((field, idx), coeff);
        self
    }

    /// The form `Σ F^Σ_i ω^i_Σ ∧ η`.
    pub fn k_form(&self) -> Form {
        let mut k = Form::zero();
        for ((i, idx), c) in &self.coefficients {
            k += &Form::contact_eta(&self.chart, c.clone(), vec![ContactGen::new(*i, idx.clone())]);
        }
        k
    }
}

/// `Σ_{|Σ|>0} (−1)^{|Σ|−1} d_Σ(F^Σ_i ρ) − F^0_i ρ` for each field.
pub fn higher_balance_residual(data: &HigherBalanceData) -> Vec<Poly> {
    let rho = data.chart.rho();
    let mut out = vec![Poly::zero(); data.chart.m()];
    for ((i, idx), c) in &data.coefficients {
        let weighted = c * rho;
        if idx.is_zero() {
            out[*i] -= &weighted;
        } else {
            let mut term = weighted.total_derivative_multi(&idx.directions());
            if idx.order() % 2 == 0 {
                term = term.scale(&int(-1));
            }
            out[*i] += &term;
        }
    }
    out
}
