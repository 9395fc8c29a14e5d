//! Exact-arithmetic engine for verifying cubic-partition congruences
//! modulo powers of 5.
//!
//! The pieces, bottom up:
//! - [`ring`]/[`qseries`]: truncated Laurent series over exact integers or
//!   residue rings, with Euler products and the U_p operator.
//! - [`etaquot`]: symbolic eta-quotients -- modularity checks, cusp orders,
//!   expansion at i∞.
//! - [`hmbasis`]: reduction of weight-0 functions to polynomials in the
//!   level-10 Hauptmodul, the Newton-identity recurrence, and the U-operator
//!   coefficient matrices.
//! - [`valuation`]: 5-adic valuation bounds on the matrices and the row
//!   vectors whose entrywise divisibility is the congruence theorem.
//! - [`cubic`]: cubic partition counts three independent ways, and the
//!   end-to-end congruence verifiers.
//! - [`report`]: the check records everything above emits.

pub mod cubic;
pub mod error;
pub mod etaquot;
pub mod hmbasis;
pub mod qseries;
pub mod report;
pub mod ring;
pub mod valuation;

pub use error::{Error, Result};
pub use qseries::QSeries;
pub use ring::CoeffRing;
