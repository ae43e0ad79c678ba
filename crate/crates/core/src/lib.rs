//! Exact-arithmetic engine for the Fourier coefficients of minimal-weight
//! 2-dimensional vector-valued modular forms.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: truncated `q`-expansions with exact rational coefficients
//!   and a fractional exponent offset.
//! - [`eisenstein`]: divisor sums and the expansions of `E2`, `E4`, `E6`.
//! - [`repclass`]: the arithmetic parameters `(a, b, c, d, M, N, Q)` of a
//!   representation, the numeric constraints they satisfy, and enumeration.
//! - [`mlde`]: the Frobenius recursion for the generator `F0` (two
//!   independent routes), the modular derivative and the differential
//!   equation residual.
//! - [`valuation`]: `p`-adic valuations, exact denominator growth tables and
//!   the growth probe for products `alpha * F0`.
//! - [`decompose`]: writing a form as `alpha F0 + beta DF0` and back.
//!
//! Every number is exact; there is no floating-point path.

pub mod decompose;
pub mod eisenstein;
pub mod error;
pub mod mlde;
pub mod qseries;
pub mod rational;
pub mod repclass;
pub mod valuation;

pub use decompose::{decompose, reconstruct, Decomposition, Monomial, ScalarModularForm};
pub use eisenstein::{eisenstein2, eisenstein4, eisenstein6, sigma, EisensteinCache};
pub use error::{Error, Result};
pub use mlde::{
    f0_direct, f0_form, f0_sj_form, ingredients, mlde_residual, modular_derivative, Component,
    MldeIngredients, VvmfForm,
};
pub use qseries::QSeries;
pub use rational::{Integer, Rational};
pub use repclass::{
    check_constraints, derive_params, enumerate_pairs, enumerate_triples, ClassificationReport,
    ConstraintCheck, PairFilter, ReprParams, REFERENCE_PAIRS,
};
pub use valuation::{
    detect_unbounded, nu_p, nu_p_factorial, probe_alpha_f0_bound, valuation_table, BoundProbe,
    UnboundedReport, ValuationTable,
};
