//! Sparse multivariate polynomials with exact rational coefficients over
//! the coordinates of a jet chart.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chart::VarRef;
use crate::error::PolyError;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = BigRational;

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// A power product of chart coordinates, stored sorted by [`VarRef`]'s
/// significance order with no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarRef, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarRef) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (VarRef, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m.mul_var(&v, e);
        }
        m
    }

    pub fn factors(&self) -> &[(VarRef, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Total exponent over jet coordinates (base coordinates do not count).
    pub fn vertical_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.is_jet())
            .map(|(_, e)| e)
            .sum()
    }

    pub fn jet_order(&self) -> u32 {
        self.0.iter().map(|(v, _)| v.jet_order()).max().unwrap_or(0)
    }

    pub fn exponent(&self, v: &VarRef) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    fn mul_var(&mut self, v: &VarRef, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(k) => self.0[k].1 += e,
            Err(k) => self.0.insert(k, (v.clone(), e)),
        }
    }

    /// `self · v`.
    pub fn times_var(&self, v: &VarRef) -> Self {
        let mut m = self.clone();
        m.mul_var(v, 1);
        m
    }

    /// Removes one power of `v`, returning the previous exponent.
    pub fn without_one(&self, v: &VarRef) -> Option<(Self, u32)> {
        let k = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let mut m = self.clone();
        let e = m.0[k].1;
        if e == 1 {
            m.0.remove(k);
        } else {
            m.0[k].1 -= 1;
        }
        Some((m, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        out.push((va.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.extend(a.by_ref().cloned()),
                (None, Some(_)) => out.extend(b.by_ref().cloned()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.clone();
        for (v, e) in &other.0 {
            let k = m.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
            match m.0[k].1.cmp(e) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    m.0.remove(k);
                }
                Ordering::Greater => m.0[k].1 -= e,
            }
        }
        Some(m)
    }

    /// Splits into the base-coordinate part and the jet part.
    pub fn split_vertical(&self) -> (Monomial, Monomial) {
        let (jet, base): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(v, _)| v.is_jet());
        (Monomial(base), Monomial(jet))
    }
}

/// Graded lexicographic order with the greatest monomial first: higher
/// total degree first, then the exponent of the most significant
/// coordinate decides. It is a monomial order (compatible with products).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            for ((va, ea), (vb, eb)) in self.0.iter().zip(&other.0) {
                match va.cmp(vb) {
                    Ordering::Equal => match eb.cmp(ea) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    ord => return ord,
                }
            }
            other.0.len().cmp(&self.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in canonical form: no zero coefficients, terms iterated in
/// monomial order (leading term first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(int(c))
    }

    pub fn var(v: VarRef) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    /// Distinct coordinates occurring in the polynomial.
    pub fn vars(&self) -> impl Iterator<Item = VarRef> {
        let set: BTreeSet<VarRef> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect();
        set.into_iter()
    }

    pub fn jet_vars(&self) -> BTreeSet<VarRef> {
        self.vars().filter(VarRef::is_jet).collect()
    }

    pub fn has_jet_vars(&self) -> bool {
        self.terms.keys().any(|m| m.vertical_degree() > 0)
    }

    /// Maximal jet order of the coordinates present (0 for functions on `Y`).
    pub fn jet_order(&self) -> u32 {
        self.terms.keys().map(Monomial::jet_order).max().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to a single coordinate.
    pub fn partial(&self, v: &VarRef) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((rest, e)) = m.without_one(v) {
                out.add_term(rest, c * int(e as i64));
            }
        }
        out
    }

    /// Total derivative `d_μ = ∂_{x^μ} + Σ z^i_{Λ+1_μ} ∂_{z^i_Λ}`.
    pub fn total_derivative(&self, mu: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (v, _) in m.factors() {
                let (rest, e) = m.without_one(v).expect("factor present");
                let coeff = c * int(e as i64);
                match v {
                    VarRef::Base(nu) => {
                        if *nu == mu {
                            out.add_term(rest, coeff);
                        }
                    }
                    VarRef::Jet(i, idx) => {
                        out.add_term(rest.times_var(&VarRef::Jet(*i, idx.raised(mu))), coeff);
                    }
                }
            }
        }
        out
    }

    /// Iterated total derivative `d_Λ`, given as a list of directions.
    pub fn total_derivative_multi(&self, directions: &[usize]) -> Poly {
        directions
            .iter()
            .fold(self.clone(), |p, &mu| p.total_derivative(mu))
    }

    /// Homogeneous components by vertical degree; they sum back to `self`.
    pub fn vertical_components(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.vertical_degree())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Terms of vertical degree zero: the part depending on `x` alone.
    pub fn base_part(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.vertical_degree() == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of positive vertical degree.
    pub fn vertical_part(&self) -> Poly {
        self - &self.base_part()
    }

    /// Exact `∫₀¹ t^e · p(x, t·y, t·z) dt`: each monomial of vertical
    /// degree `d` is divided by `d + e + 1`.
    pub fn scale_integrate(&self, e: i64) -> Result<Poly, PolyError> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let d = m.vertical_degree();
            let denom = d as i64 + e + 1;
            if denom <= 0 {
                return Err(PolyError::NonIntegrable {
                    degree: d,
                    exponent: e,
                });
            }
            out.add_term(m.clone(), c / int(denom));
        }
        Ok(out)
    }

    /// Replaces coordinates by polynomials; `None` keeps the coordinate.
    pub fn substitute(&self, mut f: impl FnMut(&VarRef) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<VarRef, Option<Poly>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Monomial::one();
            for (v, e) in m.factors() {
                let image = cache.entry(v.clone()).or_insert_with(|| f(v));
                match image {
                    Some(p) => acc = &acc * &p.pow(*e),
                    None => kept.mul_var(v, *e),
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc.mul_monomial(&kept);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, mut value: impl FnMut(&VarRef) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                t *= num_traits::pow(value(v), *e as usize);
            }
            total += t;
        }
        total
    }

    /// Floating-point evaluation; only for testing against numerical
    /// references, never used by the exact kernel.
    pub fn eval_f64(&self, mut value: impl FnMut(&VarRef) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (v, e) in m.factors() {
                    t *= value(v).powi(*e as i32);
                }
                t
            })
            .sum()
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            let step = Poly::term(qc, qm);
            rem -= &(&step * divisor);
            quot += &step;
        }
        Some(quot)
    }

    /// Whether the leading coefficient is negative.
    pub fn is_negative_leading(&self) -> bool {
        self.leading_term().is_some_and(|(_, c)| c.is_negative())
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| acc + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;

    fn tx() -> ChartSpec {
        ChartSpec::new(["t", "x"], ["u"]).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let c = tx();
        let u = c.y(0);
        assert_eq!(&u + &u, u.scale(&int(2)));
        let lhs = &(&u + &Poly::one()) * &(&u - &Poly::one());
        assert_eq!(lhs, &u.pow(2) - &Poly::one());
        assert!((&u * &Poly::zero()).is_zero());
    }

    #[test]
    fn partial_examples() {
        let c = tx();
        let (u, ux, x) = (c.y(0), c.z(0, &[1]), c.x(1));
        let ux_ref = c.jet_ref(0, &[1]);
        let u_ref = c.jet_ref(0, &[]);
        assert_eq!(ux.pow(2).scale(&rat(1, 2)).partial(&ux_ref), ux);
        assert_eq!((&u * &ux).partial(&u_ref), ux);
        assert_eq!(
            (&x * &u.pow(3)).partial(&u_ref),
            (&x * &u.pow(2)).scale(&int(3))
        );
    }

    #[test]
    fn total_derivative_examples() {
        let c = tx();
        let (u, ut, ux, utx, x) = (c.y(0), c.z(0, &[0]), c.z(0, &[1]), c.z(0, &[0, 1]), c.x(1));
        assert_eq!(u.pow(2).total_derivative(0), (&u * &ut).scale(&int(2)));
        assert_eq!((&u * &ux).total_derivative(0), &(&ut * &ux) + &(&u * &utx));
        assert_eq!(x.total_derivative(1), Poly::one());
    }

    #[test]
    fn vertical_component_examples() {
        let c = tx();
        let (u, ux, x) = (c.y(0), c.z(0, &[1]), c.x(1));
        let p = &(&Poly::int(3) + &u) + &(&u * &ux);
        let comps = p.vertical_components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[&0], Poly::int(3));
        assert_eq!(comps[&1], u);
        assert_eq!(comps[&2], &u * &ux);
        let q = &x.pow(2) * &u;
        assert_eq!(q.vertical_components().keys().collect::<Vec<_>>(), vec![&1]);
        assert!(Poly::zero().vertical_components().is_empty());
    }

    #[test]
    fn scale_integrate_examples() {
        let c = tx();
        let (u, ux) = (c.y(0), c.z(0, &[1]));
        assert_eq!(u.pow(2).scale_integrate(0).unwrap(), u.pow(2).scale(&rat(1, 3)));
        assert_eq!(Poly::int(5).scale_integrate(2).unwrap(), Poly::constant(rat(5, 3)));
        assert_eq!(
            (&u * &ux).scale_integrate(1).unwrap(),
            (&u * &ux).scale(&rat(1, 4))
        );
    }

    #[test]
    fn scale_integrate_diverges_on_constant_with_inverse_t() {
        let err = Poly::int(1).scale_integrate(-1).unwrap_err();
        assert_eq!(
            err,
            PolyError::NonIntegrable {
                degree: 0,
                exponent: -1
            }
        );
    }

    #[test]
    fn exact_division() {
        let c = tx();
        let (u, x) = (c.y(0), c.x(1));
        let rho = &x + &Poly::one();
        let p = &(&u * &u) * &rho;
        assert_eq!(p.div_exact(&rho), Some(&u * &u));
        assert_eq!(u.div_exact(&rho), None);
    }

    #[test]
    fn substitution_and_eval() {
        let c = tx();
        let (u, ux, x) = (c.y(0), c.z(0, &[1]), c.x(1));
        let p = &(&u * &ux) + &x;
        let q = p.substitute(|v| match v {
            VarRef::Jet(_, idx) if idx.is_zero() => Some(x.clone()),
            VarRef::Jet(..) => Some(Poly::one()),
            _ => None,
        });
        assert_eq!(q, x.scale(&int(2)));
        let val = p.eval(|v| match v {
            VarRef::Base(_) => int(2),
            VarRef::Jet(..) => rat(1, 2),
        });
        assert_eq!(val, rat(9, 4));
    }
}
