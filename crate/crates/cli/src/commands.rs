//! The analyses behind each subcommand.

use balvar_core::balance::{
    balance_residuals, build_k, decompose, evaluate_on_section, godunov_check, helmholtz, source_form,
    symmetric_hyperbolicity, trivial_quasi_lagrangian_check, GodunovReport, HyperbolicityReport,
};
use balvar_core::{
    higher_balance_residual, BalanceSystem, GodunovError, HyperbolicityError,
    Poly, Rational,
};
use thiserror::Error;

use crate::report::{Diagnostic, Report, Section, Value};
use crate::syntax::{parse_section, InputError, SystemDocument};

pub const NOTE_SOURCE_WEIGHT: &str = "Each source term enters the quasi-Lagrangian with weight 1/(k+1), \
k its vertical degree; linear sources therefore contribute half of the pairing y^i Pi_i.";
pub const NOTE_DIRECT_SIGN: &str = "Signs of the non-divergence terms come from direct evaluation of the \
t-integral; simplified forms that move terms between divergence and remainder can show the opposite sign.";
pub const NOTE_DENSITY: &str = "All residuals and source-form components are multiplied by the volume density.";
pub const NOTE_HIGHER_DENSITY: &str = "Blocks of every order are weighted by the same volume density: \
R_i = sum over |S|>0 of (-1)^(|S|-1) d_S(F^S_i rho) - F^0_i rho.";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Equations,
    Check,
    Decompose,
    /// Comma-separated rationals `x…, y…`.
    Hyperbolic { at: String },
    Higher,
    /// Contents of a section file.
    Verify { section: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input(e) => e.code(),
            CliError::Internal(_) => "E_INTERNAL",
        }
    }

    /// Process exit status: 2 for bad input, 3 for a broken invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn invariant(ok: bool, what: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Internal(what.to_string()))
    }
}

fn polys(prefix: &str, ps: &[Poly], section: &mut Section) {
    for (i, p) in ps.iter().enumerate() {
        section.push(format!("{prefix}{}", i + 1), Value::Poly(p.clone()));
    }
}

fn first_order(doc: &SystemDocument) -> Result<BalanceSystem, CliError> {
    if doc.has_higher_blocks() {
        return Err(InputError::Usage {
            code: "E_HIGHER_ORDER_BLOCKS",
            message: "system has blocks of order ≥ 2; use the `higher` command".into(),
        }
        .into());
    }
    Ok(doc.balance_system().map_err(InputError::from)?)
}

pub fn parse_point(text: &str) -> Result<Vec<Rational>, InputError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<Rational>().map_err(|_| InputError::Usage {
                code: "E_POINT",
                message: format!("`{}` is not a rational number", s.trim()),
            })
        })
        .collect()
}

/// Runs one command on a parsed system.
pub fn run(command: &Command, doc: &SystemDocument) -> Result<Report, CliError> {
    let order = if doc.has_higher_blocks() {
        doc.higher_data().coefficients.iter().map(|((_, idx), p)| p.jet_order().max(idx.order())).max().unwrap_or(0)
    } else {
        doc.balance_system().map_err(InputError::from)?.order()
    };
    let mut report = Report { document: doc.clone(), order, sections: Vec::new(), footnotes: Vec::new() };
    if doc.chart.rho() != &Poly::one() {
        report.add_footnote(NOTE_DENSITY);
    }
    match command {
        Command::Equations => equations(&first_order(doc)?, &mut report)?,
        Command::Check => check(&first_order(doc)?, &mut report),
        Command::Decompose => decomposition(&first_order(doc)?, &mut report)?,
        Command::Hyperbolic { at } => hyperbolic(&first_order(doc)?, at, &mut report)?,
        Command::Higher => {
            let mut s = Section::new("higher_order");
            polys("R", &higher_balance_residual(&doc.higher_data()), &mut s);
            report.sections.push(s);
            report.add_footnote(NOTE_HIGHER_DENSITY);
        }
        Command::Verify { section } => {
            let values = parse_section(section, &doc.chart)?;
            let residuals = higher_balance_residual(&doc.higher_data());
            let on_section = residuals
                .iter()
                .map(|r| evaluate_on_section(&doc.chart, r, &values))
                .collect::<Result<Vec<_>, _>>()
                .map_err(InputError::from)?;
            let mut s = Section::new("section_check");
            polys("R", &on_section, &mut s);
            s.push("satisfied", Value::Bool(on_section.iter().all(Poly::is_zero)));
            report.sections.push(s);
        }
    }
    Ok(report)
}

fn equations(bs: &BalanceSystem, report: &mut Report) -> Result<(), CliError> {
    let residuals = balance_residuals(bs);
    let source = source_form(bs);
    let comps = source.components(bs.chart());
    invariant(
        comps.iter().zip(&residuals).all(|(s, r)| (s + r).is_zero()),
        "source form components must equal minus the residuals",
    )?;
    let mut s = Section::new("equations");
    polys("R", &residuals, &mut s);
    s.push("K", Value::Form(build_k(bs)));
    s.push("source_form", Value::Form(source.into_form()));
    report.sections.push(s);
    Ok(())
}

fn godunov_section(r: &GodunovReport, bs: &BalanceSystem, s: &mut Section) {
    let base = bs.chart().base_names();
    s.push("is_zero_order", Value::Bool(r.is_zero_order));
    s.push("flux_symmetric", Value::List(r.flux_symmetric.iter().map(|&b| Value::Bool(b)).collect()));
    for (mu, g) in r.potentials.iter().enumerate() {
        s.push(format!("G_{}", base[mu]), g.clone().map_or(Value::Absent, Value::Poly));
    }
    s.push("source_pairing", Value::Poly(r.source_pairing.clone()));
    s.push("pairing_constant", r.pairing_constant.clone().map_or(Value::Absent, Value::Rational));
    s.push("verdict", Value::Bool(r.verdict));
}

fn check(bs: &BalanceSystem, report: &mut Report) {
    let h = helmholtz(bs);
    let mut s = Section::new("helmholtz");
    s.push("closed", Value::Bool(h.closed));
    s.push("residual", Value::Form(h.residual));
    s.push("lagrangian", h.lagrangian.map_or(Value::Absent, Value::Poly));
    report.sections.push(s);

    let t = trivial_quasi_lagrangian_check(bs);
    let mut s = Section::new("quasi_lagrangian");
    s.push("trivial", Value::Bool(t.is_trivial));
    s.push("phi", Value::Poly(t.phi));
    report.sections.push(s);

    let mut s = Section::new("godunov");
    match godunov_check(bs) {
        Ok(r) => godunov_section(&r, bs, &mut s),
        Err(GodunovError::OrderTooHigh { order, report: r }) => {
            godunov_section(&r, bs, &mut s);
            s.diagnostics.push(Diagnostic {
                code: "W_ORDER_TOO_HIGH",
                message: format!("system has order {order}; Godunov form needs order 0"),
            });
        }
    }
    report.sections.push(s);
}

fn decomposition(bs: &BalanceSystem, report: &mut Report) -> Result<(), CliError> {
    let chart = bs.chart();
    let d = decompose(bs);
    let k = build_k(bs);
    invariant(&d.k_lag + &d.k_nlag == k, "K_lag + K_nlag must equal K")?;
    let source = source_form(bs).components(chart);
    let el = d.el_of_ltilde.components(chart);
    let g = d.godunov_part.components(chart);
    invariant(
        el.iter().zip(&g).zip(&source).all(|((a, b), c)| &(a + b) == c),
        "Euler-Lagrange and Godunov parts must add up to the source form",
    )?;
    invariant(
        d.divergence.recombine() == &d.quasi_lagrangian * chart.rho(),
        "divergence presentation must recombine to the quasi-Lagrangian",
    )?;

    let mut s = Section::new("quasi_lagrangian");
    s.push("L", Value::Poly(d.quasi_lagrangian.clone()));
    s.push("L_divergence_form", Value::Divergence(d.divergence.clone()));
    s.push("trivial", Value::Bool(d.trivial_quasi_lagrangian));
    report.sections.push(s);

    let mut s = Section::new("k_split");
    s.push("K", Value::Form(k));
    s.push("K_lag", Value::Form(d.k_lag));
    s.push("K_nlag", Value::Form(d.k_nlag));
    s.push("helmholtz_closed", Value::Bool(d.helmholtz_closed));
    report.sections.push(s);

    let mut s = Section::new("f_split");
    polys("EL", &el, &mut s);
    polys("G", &g, &mut s);
    report.sections.push(s);

    report.add_footnote(NOTE_SOURCE_WEIGHT);
    report.add_footnote(NOTE_DIRECT_SIGN);
    Ok(())
}

fn hyperbolicity_section(r: &HyperbolicityReport, bs: &BalanceSystem, s: &mut Section) {
    let base = bs.chart().base_names();
    for (mu, mat) in r.matrices.iter().enumerate() {
        let rows = mat
            .iter()
            .map(|row| Value::List(row.iter().cloned().map(Value::Poly).collect()))
            .collect();
        s.push(format!("M_{}", base[mu]), Value::List(rows));
    }
    s.push("symmetric", Value::List(r.symmetric.iter().map(|&b| Value::Bool(b)).collect()));
    s.push("point", Value::List(r.point.iter().cloned().map(Value::Rational).collect()));
    s.push("leading_minors", Value::List(r.leading_minors.iter().cloned().map(Value::Rational).collect()));
    s.push("verdict", Value::Bool(r.verdict));
}

fn hyperbolic(bs: &BalanceSystem, at: &str, report: &mut Report) -> Result<(), CliError> {
    let point = parse_point(at)?;
    let mut s = Section::new("hyperbolicity");
    match symmetric_hyperbolicity(bs, &point) {
        Ok(r) => hyperbolicity_section(&r, bs, &mut s),
        Err(HyperbolicityError::SingularPoint { index, report: r }) => {
            hyperbolicity_section(&r, bs, &mut s);
            s.diagnostics.push(Diagnostic {
                code: "W_SINGULAR_POINT",
                message: format!("leading principal minor {index} vanishes; verdict is indefinite"),
            });
        }
        Err(HyperbolicityError::OrderTooHigh(order)) => {
            return Err(InputError::Usage {
                code: "E_ORDER",
                message: format!("system has order {order}; symmetric hyperbolicity needs order 0"),
            }
            .into())
        }
        Err(HyperbolicityError::DimensionMismatch { expected, found }) => {
            return Err(InputError::Usage {
                code: "E_POINT",
                message: format!("point needs {expected} coordinates (base then fields), got {found}"),
            }
            .into())
        }
    }
    report.sections.push(s);
    Ok(())
}
