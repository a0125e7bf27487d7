//! Averaging and normal-form calculus for non-selfadjoint perturbations of
//! operators with periodic classical flows, plus a dense-spectrum verifier for
//! `−h²Δ + iεq` on the round sphere.

pub mod averaging;
pub mod corrections;
pub mod error;
pub(crate) mod ode;
pub mod spectra;
pub mod sphere;
pub mod symbolalg;
pub mod verify;

pub use error::{Error, Result};
pub use symbolalg::{Coeff, Frame, Monomial, PolySymbol};
