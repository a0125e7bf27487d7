//! End-to-end sphere runs.

use num_complex::Complex64;

use super::clusters::{extract_clusters, in_window, report_window, sphere_rectangles, ClusterReport};
use super::oracle::subcluster_distribution_test;
use super::operator::{assemble, merge_sectors, AssembledOperator, SphereOperatorSpec};
use crate::error::{Error, Result};
use crate::sphere::{radon_average, sphere_second_correction};
use crate::symbolalg::{Coeff, PolySymbol};

#[derive(Clone, Debug)]
pub struct SphereRun {
    pub spec: SphereOperatorSpec,
    pub operator: AssembledOperator,
    pub by_sector: Vec<Vec<Complex64>>,
    /// Every computed eigenvalue, sorted.
    pub eigenvalues: Vec<Complex64>,
    /// Eigenvalues in the reported window around `[l_min, l_max]`.
    pub reported: Vec<Complex64>,
    pub report: ClusterReport,
}

/// Solve and cluster with rectangle half-widths `c_re(ε² + h²)`, `c_im·εh`.
pub fn run_sphere(spec: &SphereOperatorSpec, c_re: f64, c_im: f64) -> Result<SphereRun> {
    let operator = assemble(spec)?;
    let by_sector = operator.eigenvalues_by_sector()?;
    let eigenvalues = merge_sectors(&by_sector);
    let rects = sphere_rectangles(spec.h, spec.epsilon, spec.l_min, spec.l_max, c_re, c_im);
    let window = report_window(&rects).ok_or_else(|| Error::Precondition("empty l window".into()))?;
    let reported = in_window(&eigenvalues, window);
    let report = extract_clusters(&reported, &rects, None)?;
    Ok(SphereRun { spec: spec.clone(), operator, by_sector, eigenvalues, reported, report })
}

/// Largest change of the reported eigenvalues when the pad grows by 2.
pub fn leakage(run: &SphereRun) -> Result<f64> {
    let mut wider = run.spec.clone();
    wider.pad += 2;
    let op = assemble(&wider)?;
    let all = op.eigenvalues()?;
    let rects = sphere_rectangles(wider.h, wider.epsilon, wider.l_min, wider.l_max, 1.0, 1.0);
    let window = report_window(&rects).ok_or_else(|| Error::Precondition("empty l window".into()))?;
    let other = in_window(&all, window);
    if other.len() != run.reported.len() {
        return Err(Error::DimensionMismatch { expected: run.reported.len(), found: other.len() });
    }
    Ok(run.reported.iter().zip(&other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// Experimental: `−h²Δ + 2iha` on `l ∈ [l_min, l_max]`, the damped wave
/// operator with the spectral parameter frozen at `√z ≈ 1`.
pub fn damped_wave_preset(a: &PolySymbol, h: f64, l_min: u32, l_max: u32, pad: u32) -> Result<SphereRun> {
    if !radon_average(a)?.is_zero() {
        return Err(Error::Precondition("the damping must be odd".into()));
    }
    let q = a.scale(&Coeff::from_int(2));
    let spec = SphereOperatorSpec { h, epsilon: h, q: q.clone(), l_min, l_max, pad };
    let mut run = run_sphere(&spec, 3.0, 10.0)?;
    let s = sphere_second_correction(&q)?;
    let mid = ((l_min + l_max) / 2) as i64;
    run.report.stats.distribution_distance = subcluster_distribution_test(&run.report, mid, &s.reduced_form).ok();
    Ok(run)
}
