//! Exact symbolic machinery for balance-law systems on jet bundles:
//! polynomial jet functions, bigraded forms, the variational bicomplex
//! operators and the balance-form analyses built on them.

pub mod balance;
pub mod chart;
pub mod error;
pub mod form;
pub mod poly;
pub mod render;
pub mod variational;

pub use balance::BalanceSystem;
pub use chart::{ChartSpec, MultiIndex, VarRef};
pub use error::{
    BalanceError, ChartError, GodunovError, HyperbolicityError, PolyError, VariationalError,
};
pub use form::{ContactGen, Form, Wedge};
pub use poly::{int, rat, Monomial, Poly, Rational};
pub use variational::{
    euler_lagrange, higher_balance_residual, interior_euler, vertical_decompose,
    vertical_homotopy, FunctionalForm, HigherBalanceData,
};
