//! Exact symbol calculus for Getzler-rescaled pseudodifferential symbols at a
//! single model point.
//!
//! The crate is layered bottom-up:
//!
//! - [`exterior`]: the exterior algebra with rational (or float) coefficients;
//! - [`symbolic`]: form-valued polynomial × Gaussian symbols in `(ξ, τ)` and
//!   their closed-form fiber integrals;
//! - [`getzler`]: the curvature model, the twisted product `#₀` and the
//!   harmonic-oscillator operator;
//! - [`taylor`]: truncated Taylor expansions in `t` and the twisted Cauchy
//!   product;
//! - [`heat`]: the symbol-level heat equation, solved exactly;
//! - [`index`]: supertraces of heat expansions and the Â-form oracle;
//! - [`borel`]: numeric summation of an asymptotic series into a symbol.

pub mod borel;
pub mod error;
pub mod exterior;
pub mod getzler;
pub mod heat;
pub mod index;
pub mod random;
pub mod rational;
pub mod selfcheck;
pub mod symbolic;
pub mod taylor;

pub use error::{Error, Result};
pub use exterior::{Blade, FloatForm, Form, FormElement};
pub use getzler::CurvatureModel;
pub use rational::Q;
pub use symbolic::{GaussSymbol, HalfInt, IntegratedForm, Monomial, ScalarResult};
pub use taylor::TaylorSymbol;
