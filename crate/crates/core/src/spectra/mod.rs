//! Analytic spectral predictors: period profiles, cluster rectangles,
//! quasi-eigenvalue lattices and action coordinates.

pub mod action;
pub mod lattice;
pub mod profile;
pub mod rectangles;

pub use action::{action_coordinates, ActionMap};
pub use lattice::{
    barrier_lattice, diagonal_in_actions, quasi_lattice, ActionTerm, BarrierParams, BarrierPoint, KWindow, LatticePoint, QuasiEigLattice,
    Regime, SAvgModel,
};
pub use profile::{build_profile, PeriodProfile};
pub use rectangles::{cluster_center, cluster_rectangles, ClusterRect, ClusterRectangles, TorusData, WidthConstants};
