//! The round 2-sphere: constrained geometry of `Σ ⊂ T*ℝ³`, great-circle
//! averages, and the second averaged correction on the space of oriented
//! great circles.

pub mod g0;
pub mod geometry;
pub mod radon;
pub mod reduced;
pub mod zcoords;

pub use g0::{constrained_bracket_homogeneous, sphere_g0, sphere_second_correction, SphereCorrection};
pub use geometry::{chart_lift, geodesic_flow, random_sigma_point, ReducedPoint, SpherePoint};
pub use reduced::{LevelCurve, ReducedHamiltonian};
pub use radon::{circle_pullback, radon_average, radon_schur_check, reduce_to_circle_space, SchurReport};
