//! Exact sparse polynomial algebra on phase space.

pub mod coeff;
pub mod compiled;
pub mod constraint;
pub mod frame;
pub mod json;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use coeff::Coeff;
pub use compiled::CompiledPoly;
pub use constraint::{constrained_bracket, reduce_mod_constraints, reduce_on_shell, reduce_on_unit_sphere};
pub use frame::{from_oscillator, harmonic_p2, harmonic_p2_osc, to_oscillator};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::{evaluate, poisson_bracket, Frame, PerturbationSeries, PolySymbol};
