//! Exact coefficient rings and truncated-series kernels.

pub mod interp;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod ring;
pub mod series;
pub mod tpoly;

pub use interp::lagrange_interpolate;
pub use laurent::{BiLaurent, LaurentWindow, NilClass, WindowCap};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use rational::Rational;
pub use ring::Ring;
pub use series::{dw_coeff, TruncatedSeries, Var};
pub use tpoly::TPolySeries;
