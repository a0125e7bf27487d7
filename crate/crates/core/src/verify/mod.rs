//! Ground truth for the sphere: `−h²Δ + iεq(x)` in a truncated real
//! spherical-harmonic basis, dense eigenvalues, cluster extraction and
//! comparison with the predictors.

pub mod clusters;
pub mod eigen;
pub mod export;
pub mod harmonics;
pub mod operator;
pub mod oracle;
pub mod pipeline;

pub use clusters::{conjugation_defect, extract_clusters, sphere_rectangles, Cluster, ClusterReport, ClusterStats};
pub use eigen::{eigensolve, residual_probe};
pub use operator::{assemble, AssembledOperator, SphereOperatorSpec};
pub use oracle::{perturbation_oracle, subcluster_distribution_test};
pub use pipeline::{damped_wave_preset, leakage, run_sphere, SphereRun};
