//! Second and third averaged corrections, critical values, and long-time averages.

pub mod critical;
pub mod longtime;
pub mod second;
pub mod third;

pub use critical::{critical_values, critical_values_on_sphere3, ConstraintManifold, CriticalValue};
pub use longtime::{
    check_global_hypothesis, double_average, solve_secular, HypothesisReport, LongTimeAverage, SecondaryFlow, TorusGrid, Verdict,
};
pub use second::{barrier_s, is_real_on_real_domain, second_correction, second_correction_with_g0};
pub use third::{correction_bundle, third_correction, third_order_parts, CorrectionBundle, ThirdOrderParts};
