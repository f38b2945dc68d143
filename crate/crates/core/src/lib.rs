//! Computations with enveloping algebras of Lie algebras in characteristic p.

#![allow(clippy::type_complexity, clippy::needless_range_loop, clippy::wrong_self_convention)]

pub mod center;
pub mod env;
pub mod error;
pub mod lie;
pub mod monomial;
pub mod poisson;
pub mod scalar;
pub mod sym;

pub use center::{
    center_window, hc_generators, veldkamp_check, CenterWindow, HcGenerators, PrimeContext, Verdict,
    VeldkampVerdict,
};
pub use env::{Envelope, PbwElement};
pub use error::{Error, Result};
pub use lie::{compute_pmap, LieAlgebra, PMap, PMapSource, Structure};
pub use monomial::{LinComb, Monomial};
pub use poisson::{FiniteLieAlgebra, PoissonContext};
pub use scalar::linalg::Matrix;
pub use scalar::{Field, PrimeField, Rational, Rationals, Ring, ZModP2};
pub use sym::{SymPoly, Weight};
