//! Plain-text and LaTeX renderings of polynomials, forms and divergence
//! presentations. Text output of a polynomial re-parses to the same
//! polynomial in the system-file syntax.

use num_traits::{One, Signed};

use crate::balance::DivergenceSplit;
use crate::chart::{ChartSpec, VarRef};
use crate::form::{ContactGen, Form};
use crate::poly::{Monomial, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Text,
    Latex,
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda",
    "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega", "Gamma",
    "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Phi", "Psi", "Omega",
];

fn latex_name(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name.chars().count() > 1 {
        format!("\\mathrm{{{name}}}")
    } else {
        name.to_string()
    }
}

fn latex_var(chart: &ChartSpec, v: &VarRef) -> String {
    match v {
        VarRef::Base(mu) => latex_name(&chart.base_names()[*mu]),
        VarRef::Jet(i, idx) => {
            let field = latex_name(&chart.field_names()[*i]);
            if idx.is_zero() {
                return field;
            }
            let sub: Vec<String> = idx
                .directions()
                .into_iter()
                .map(|mu| latex_name(&chart.base_names()[mu]))
                .collect();
            let joined = if sub.iter().all(|s| s.chars().count() == 1) {
                sub.concat()
            } else {
                sub.join(" ")
            };
            format!("{field}_{{{joined}}}")
        }
    }
}

/// Display order of factors: fields before their derivatives, lower jet
/// order first, base coordinates last.
fn display_key(v: &VarRef) -> (u8, u32, usize, std::cmp::Reverse<Vec<u32>>) {
    match v {
        VarRef::Jet(i, idx) => (0, idx.order(), *i, std::cmp::Reverse(idx.counts().to_vec())),
        VarRef::Base(mu) => (1, 0, *mu, std::cmp::Reverse(Vec::new())),
    }
}

type Namer<'a> = Option<&'a dyn Fn(&VarRef) -> String>;

fn monomial(chart: &ChartSpec, m: &Monomial, style: Style, namer: Namer) -> String {
    let mut factors = m.factors().to_vec();
    factors.sort_by_key(|(v, _)| display_key(v));
    let parts: Vec<String> = factors
        .iter()
        .map(|(v, e)| match style {
            Style::Text => {
                let name = namer.map_or_else(|| chart.var_name(v), |f| f(v));
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            }
            Style::Latex => {
                let name = latex_var(chart, v);
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{{{e}}}")
                }
            }
        })
        .collect();
    parts.join(" ")
}

fn magnitude(c: &Rational, style: Style) -> String {
    let c = c.abs();
    match style {
        Style::Text if c.is_integer() => c.numer().to_string(),
        Style::Text => format!("{}/{}", c.numer(), c.denom()),
        Style::Latex if c.is_integer() => c.numer().to_string(),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
    }
}

fn poly(chart: &ChartSpec, p: &Poly, style: Style) -> String {
    poly_named(chart, p, style, None)
}

fn poly_named(chart: &ChartSpec, p: &Poly, style: Style, namer: Namer) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let body = monomial(chart, m, style, namer);
        if m.is_one() {
            out.push_str(&magnitude(c, style));
        } else if c.abs().is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&magnitude(c, style));
            out.push(' ');
            out.push_str(&body);
        }
    }
    out
}

/// Canonical text such as `u_xi + 1/2 v` or `-1/6 u^2 u_x`.
pub fn poly_text(chart: &ChartSpec, p: &Poly) -> String {
    poly(chart, p, Style::Text)
}

/// Text rendering with caller-chosen coordinate names.
pub fn poly_text_with(chart: &ChartSpec, p: &Poly, name: &dyn Fn(&VarRef) -> String) -> String {
    poly_named(chart, p, Style::Text, Some(name))
}

pub fn poly_latex(chart: &ChartSpec, p: &Poly) -> String {
    poly(chart, p, Style::Latex)
}

/// Canonical text of a rational, `p` or `p/q`.
pub fn rational_text(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn contact(chart: &ChartSpec, g: &ContactGen, style: Style) -> String {
    let v = g.var();
    match style {
        Style::Text => format!("ω({})", chart.var_name(&v)),
        Style::Latex => {
            let field = latex_name(&chart.field_names()[g.field]);
            if g.index.is_zero() {
                format!("\\omega^{{{field}}}")
            } else {
                let jet = latex_var(chart, &v);
                let sub = &jet[field.len()..];
                format!("\\omega^{{{field}}}{sub}")
            }
        }
    }
}

fn dx(chart: &ChartSpec, mu: usize, style: Style) -> String {
    let name = &chart.base_names()[mu];
    match style {
        Style::Text => format!("d{name}"),
        Style::Latex => format!("\\mathrm{{d}}{}", latex_name(name)),
    }
}

fn form(chart: &ChartSpec, f: &Form, style: Style) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let wedge_sym = match style {
        Style::Text => " ∧ ",
        Style::Latex => " \\wedge ",
    };
    let mut out = String::new();
    for (k, (w, c)) in f.terms().enumerate() {
        let full = w.dx.len() == chart.n();
        let (coeff, factors) = match c.div_exact(chart.rho()) {
            Some(q) if full => {
                // dx-volume ∧ ω… = (−1)^{n r} ω… ∧ dx-volume
                let q = if (chart.n() * w.omega.len()) % 2 == 1 { -q } else { q };
                let mut fs: Vec<String> = w.omega.iter().map(|g| contact(chart, g, style)).collect();
                fs.push(if style == Style::Text { "η".into() } else { "\\eta".into() });
                (q, fs)
            }
            _ => {
                let mut fs: Vec<String> = w.dx.iter().map(|&mu| dx(chart, mu, style)).collect();
                fs.extend(w.omega.iter().map(|g| contact(chart, g, style)));
                (c.clone(), fs)
            }
        };
        let neg = coeff.len() == 1 && coeff.is_negative_leading();
        let shown = if neg { -coeff } else { coeff };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let body = factors.join(wedge_sym);
        if shown.as_constant().is_some_and(|c| c.is_one()) {
            out.push_str(&body);
        } else {
            let p = poly(chart, &shown, style);
            if shown.len() == 1 {
                out.push_str(&format!("{p} {body}"));
            } else if style == Style::Text {
                out.push_str(&format!("({p}) {body}"));
            } else {
                out.push_str(&format!("\\left({p}\\right) {body}"));
            }
        }
    }
    out
}

/// Text rendering with `ρ·dx-volume` shown as `η` and contact factors first.
pub fn form_text(chart: &ChartSpec, f: &Form) -> String {
    form(chart, f, Style::Text)
}

pub fn form_latex(chart: &ChartSpec, f: &Form) -> String {
    form(chart, f, Style::Latex)
}

fn divergence(chart: &ChartSpec, split: &DivergenceSplit, style: Style) -> String {
    let mut parts = Vec::new();
    for (mu, p) in split.potentials.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let name = &chart.base_names()[mu];
        parts.push(match style {
            Style::Text => format!("d_{name}({})", poly(chart, p, style)),
            Style::Latex => format!("d_{{{}}}\\left({}\\right)", latex_name(name), poly(chart, p, style)),
        });
    }
    if !split.remainder.is_zero() || parts.is_empty() {
        let r = poly(chart, &split.remainder, style);
        if parts.is_empty() {
            parts.push(r);
        } else if let Some(rest) = r.strip_prefix('-') {
            parts.push(format!("- {rest}"));
        } else {
            parts.push(format!("+ {r}"));
        }
        let last = parts.pop().unwrap();
        let head = parts.join(" + ");
        return if head.is_empty() { last } else { format!("{head} {last}") };
    }
    parts.join(" + ")
}

/// `d_t(…) + d_x(…) + remainder`.
pub fn divergence_text(chart: &ChartSpec, split: &DivergenceSplit) -> String {
    divergence(chart, split, Style::Text)
}

pub fn divergence_latex(chart: &ChartSpec, split: &DivergenceSplit) -> String {
    divergence(chart, split, Style::Latex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::divergence_split;
    use crate::form::Form;
    use crate::chart::MultiIndex;
    use crate::poly::rat;

    #[test]
    fn poly_text_canonical() {
        let c = ChartSpec::new(["xi", "eta"], ["u", "v"]).unwrap();
        let r = &c.z(0, &[0]) + &c.y(1).scale(&rat(1, 2));
        assert_eq!(poly_text(&c, &r), "u_xi + 1/2 v");
        let r = &c.z(1, &[1]) + &c.y(0).scale(&rat(1, 2));
        assert_eq!(poly_text(&c, &r), "v_eta + 1/2 u");
        let c = ChartSpec::new(["t", "x"], ["u"]).unwrap();
        let p = &(&c.y(0).pow(2) * &c.z(0, &[1])).scale(&rat(-1, 6)) + &Poly::int(-3);
        assert_eq!(poly_text(&c, &p), "-1/6 u^2 u_x - 3");
        assert_eq!(poly_text(&c, &Poly::zero()), "0");
    }

    #[test]
    fn poly_latex_fractions_and_greek() {
        let c = ChartSpec::new(["xi", "eta"], ["u", "v"]).unwrap();
        let p = &c.z(0, &[0, 1]).pow(2).scale(&rat(1, 3)) - &c.y(1);
        assert_eq!(poly_latex(&c, &p), "\\frac{1}{3} u_{\\xi \\eta}^{2} - v");
    }

    #[test]
    fn form_text_uses_eta() {
        let c = ChartSpec::with_density(["t", "x"], ["u"], &Poly::var(VarRef::Base(1)) + &Poly::one()).unwrap();
        let g = ContactGen::new(0, MultiIndex::unit(2, 1));
        let k = Form::contact_eta(&c, c.y(0).scale(&rat(-1, 2)), vec![g]);
        assert_eq!(form_text(&c, &k), "-1/2 u ω(u_x) ∧ η");
        let plain = Form::dx(0).wedge(&Form::omega(ContactGen::new(0, MultiIndex::zero(2))));
        assert_eq!(form_text(&c, &plain), "dt ∧ ω(u)");
        assert_eq!(form_latex(&c, &k), "-\\frac{1}{2} u \\omega^{u}_{x} \\wedge \\eta");
    }

    #[test]
    fn divergence_rendering() {
        let c = ChartSpec::new(["t", "x"], ["u"]).unwrap();
        let lt = &(&c.y(0) * &c.z(0, &[0])).scale(&rat(1, 2)) - &c.z(0, &[1]).pow(2).scale(&rat(1, 2));
        let split = divergence_split(&c, &lt);
        assert_eq!(divergence_text(&c, &split), "d_t(1/4 u^2) - 1/2 u_x^2");
    }
}
