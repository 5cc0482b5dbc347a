//! Exact Vafa-Witten invariants of K3 and related surfaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: truncated Puiseux/Laurent series over the rationals, eta
//!   products and a cyclotomic oracle for root-of-unity averages.
//! - [`surface`]: numerical surface data, charges, Riemann-Roch and the
//!   Mukai pairing.
//! - [`hilb`]: Euler characteristics of Hilbert schemes of points.
//! - [`wallcross`]: the universal formulae relating pair invariants to
//!   Vafa-Witten invariants, forwards and inverted.
//! - [`k3`]: generating series of Vafa-Witten invariants on K3.
//! - [`checks`]: the named verification suite exposed by the CLI.
//!
//! All arithmetic is exact; there are no tolerances anywhere.
//!
//! ```
//! use vwseries::k3::vw_k3_series_closed;
//!
//! let s = vw_k3_series_closed(2, 5)?;
//! assert_eq!(s.to_string(), "1/4 + 30*q^2 + 3200*q^3 + 176337*q^4 + O(q^5)");
//! # Ok::<(), vwseries::Error>(())
//! ```

pub mod checks;
mod error;
pub mod hilb;
pub mod k3;
pub mod qseries;
pub mod rational;
pub mod surface;
pub mod wallcross;

pub use error::{Error, Result};
pub use qseries::QSeries;
pub use rational::Rational;
pub use surface::{Charge, SurfaceData};
pub use wallcross::{InvariantTable, Theory, WallFormula, WallVariant};

/// Schema tag carried by every JSON document this crate emits.
pub const SCHEMA: &str = "vwseries/1";
