//! Fibred jet charts: base coordinates, field components, symmetric
//! multi-indices and the variable references built from them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::ChartError;
use crate::poly::Poly;

/// A symmetric multi-index over the `n` base coordinates.
///
/// `counts[μ]` is the number of derivatives taken along `x^μ`, so the
/// representation carries no ordering freedom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The multi-index `1_μ`.
    pub fn unit(n: usize, mu: usize) -> Self {
        let mut counts = vec![0; n];
        counts[mu] = 1;
        MultiIndex(counts)
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Number of base coordinates this index ranges over.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `Λ + 1_μ`.
    pub fn raised(&self, mu: usize) -> Self {
        let mut counts = self.0.clone();
        counts[mu] += 1;
        MultiIndex(counts)
    }

    /// `Λ − 1_μ`, if that is still a multi-index.
    pub fn lowered(&self, mu: usize) -> Option<Self> {
        if self.0[mu] == 0 {
            return None;
        }
        let mut counts = self.0.clone();
        counts[mu] -= 1;
        Some(MultiIndex(counts))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The base directions of `Λ` as a sorted list with repetition, e.g.
    /// `(1,2)` becomes `[0, 1, 1]`.
    pub fn directions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(mu, &c)| std::iter::repeat_n(mu, c as usize))
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A coordinate on the jet bundle: a base coordinate `x^μ` or a jet
/// coordinate `z^i_Λ` (`y^i` when `|Λ| = 0`).
///
/// The ordering is the canonical significance order used by monomials:
/// jet coordinates come before base coordinates, higher jet order first,
/// then field index ascending, then the multi-index in descending
/// lexicographic order. Base coordinates follow in index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarRef {
    Base(usize),
    Jet(usize, MultiIndex),
}

impl VarRef {
    pub fn field(i: usize, n: usize) -> Self {
        VarRef::Jet(i, MultiIndex::zero(n))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, VarRef::Jet(..))
    }

    /// Jet order of the coordinate; base coordinates have order 0.
    pub fn jet_order(&self) -> u32 {
        match self {
            VarRef::Base(_) => 0,
            VarRef::Jet(_, idx) => idx.order(),
        }
    }
}

impl Ord for VarRef {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VarRef::Jet(..), VarRef::Base(_)) => Ordering::Less,
            (VarRef::Base(_), VarRef::Jet(..)) => Ordering::Greater,
            (VarRef::Base(a), VarRef::Base(b)) => a.cmp(b),
            (VarRef::Jet(i, a), VarRef::Jet(j, b)) => b
                .order()
                .cmp(&a.order())
                .then_with(|| i.cmp(j))
                .then_with(|| b.cmp(a)),
        }
    }
}

impl PartialOrd for VarRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A fibred chart `(x^μ, y^i)` together with the polynomial volume
/// density `ρ` standing in for `√|G|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    base: Vec<String>,
    fields: Vec<String>,
    rho: Poly,
}

impl ChartSpec {
    /// Flat chart (`ρ = 1`).
    pub fn new<S: Into<String>>(
        base: impl IntoIterator<Item = S>,
        fields: impl IntoIterator<Item = S>,
    ) -> Result<Self, ChartError> {
        Self::with_density(base, fields, Poly::one())
    }

    pub fn with_density<S: Into<String>>(
        base: impl IntoIterator<Item = S>,
        fields: impl IntoIterator<Item = S>,
        rho: Poly,
    ) -> Result<Self, ChartError> {
        let base: Vec<String> = base.into_iter().map(Into::into).collect();
        let fields: Vec<String> = fields.into_iter().map(Into::into).collect();
        if base.is_empty() {
            return Err(ChartError::NoBaseCoordinates);
        }
        if fields.is_empty() {
            return Err(ChartError::NoFields);
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in base.iter().chain(&fields) {
            if !seen.insert(name.as_str()) {
                return Err(ChartError::DuplicateName(name.clone()));
            }
        }
        if rho.is_zero() {
            return Err(ChartError::ZeroDensity);
        }
        if rho.has_jet_vars() {
            return Err(ChartError::DensityNotBase);
        }
        let chart = ChartSpec { base, fields, rho };
        if let Some(v) = chart.rho.vars().find(|v| !chart.contains(v)) {
            return Err(ChartError::ForeignVariable(format!("{v:?}")));
        }
        Ok(chart)
    }

    /// Number of base coordinates.
    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Number of field components.
    pub fn m(&self) -> usize {
        self.fields.len()
    }

    pub fn rho(&self) -> &Poly {
        &self.rho
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn field_names(&self) -> &[String] {
        &self.fields
    }

    pub fn x(&self, mu: usize) -> Poly {
        Poly::var(VarRef::Base(mu))
    }

    pub fn y(&self, i: usize) -> Poly {
        Poly::var(VarRef::field(i, self.n()))
    }

    /// The jet coordinate `z^i_Λ` with `Λ` given as a list of directions.
    pub fn z(&self, i: usize, directions: &[usize]) -> Poly {
        Poly::var(self.jet_ref(i, directions))
    }

    pub fn jet_ref(&self, i: usize, directions: &[usize]) -> VarRef {
        let mut idx = MultiIndex::zero(self.n());
        for &mu in directions {
            idx = idx.raised(mu);
        }
        VarRef::Jet(i, idx)
    }

    /// Whether `v` is a coordinate of this chart.
    pub fn contains(&self, v: &VarRef) -> bool {
        match v {
            VarRef::Base(mu) => *mu < self.n(),
            VarRef::Jet(i, idx) => *i < self.m() && idx.dim() == self.n(),
        }
    }

    /// Checks that every variable of `p` belongs to the chart.
    pub fn check_poly(&self, p: &Poly) -> Result<(), ChartError> {
        match p.vars().find(|v| !self.contains(v)) {
            Some(v) => Err(ChartError::ForeignVariable(format!("{v:?}"))),
            None => Ok(()),
        }
    }

    /// Plain-text name of a coordinate, e.g. `u`, `u_tx`, `x`.
    pub fn var_name(&self, v: &VarRef) -> String {
        match v {
            VarRef::Base(mu) => self.base[*mu].clone(),
            VarRef::Jet(i, idx) => {
                let mut s = self.fields[*i].clone();
                if !idx.is_zero() {
                    s.push('_');
                    for mu in idx.directions() {
                        s.push_str(&self.base[mu]);
                    }
                }
                s
            }
        }
    }
}
