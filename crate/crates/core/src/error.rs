use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("a chart needs at least one base coordinate")]
    NoBaseCoordinates,
    #[error("a chart needs at least one field component")]
    NoFields,
    #[error("name `{0}` declared twice")]
    DuplicateName(String),
    #[error("density must not be the zero polynomial")]
    ZeroDensity,
    #[error("density may only depend on base coordinates")]
    DensityNotBase,
    #[error("variable {0} is not a coordinate of this chart")]
    ForeignVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// `∫₀¹ t^(d+e) dt` diverges for some monomial of vertical degree `d`.
    #[error("t-integral diverges: monomial of vertical degree {degree} with exponent {exponent}")]
    NonIntegrable { degree: u32, exponent: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariationalError {
    #[error("expected a form of bidegree {expected}, found {found}")]
    Bidegree { expected: String, found: String },
    #[error("form is not in the image of the interior Euler operator")]
    NotFunctional,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("expected {expected} {what}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("declared order {declared} is below the jet order {actual} of the data")]
    DeclaredOrderTooLow { declared: u32, actual: u32 },
    #[error("Lagrangian has jet order {0}; only first-order Lagrangians generate balance systems")]
    LagrangianOrder(u32),
    #[error("section component {0} depends on jet variables")]
    SectionNotBase(usize),
    #[error(transparent)]
    Variational(#[from] VariationalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GodunovError {
    /// Godunov systems are zero-order; the report still carries the
    /// formally computed symmetry data.
    #[error("system has order {order}; Godunov form needs order 0")]
    OrderTooHigh {
        order: u32,
        report: Box<crate::balance::GodunovReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperbolicityError {
    #[error("system has order {0}; symmetric hyperbolicity needs order 0")]
    OrderTooHigh(u32),
    #[error("point needs {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A leading principal minor vanishes exactly; the verdict is
    /// indefinite rather than positive.
    #[error("leading principal minor {index} vanishes at the given point")]
    SingularPoint {
        index: usize,
        report: Box<crate::balance::HyperbolicityReport>,
    },
}
