//! Independent checks of computed spectra: second-order degenerate
//! perturbation theory, sub-cluster laws and residual probes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::clusters::ClusterReport;
use super::eigen::{eigensolve, residual_probe};
use super::operator::AssembledOperator;
use crate::corrections::critical::fibonacci_sphere;
use crate::error::{Error, Result};
use crate::sphere::ReducedHamiltonian;
use crate::symbolalg::PolySymbol;

pub const LAW_SAMPLES: usize = 200_000;
pub const MIN_CLUSTER_COUNT: usize = 20;

/// Eigenvalues of `E_l + iε P_l X P_l + (iε)² P_l X (E_l − D)⁻¹ X P_l` on the degree-l block.
pub fn perturbation_oracle(op: &AssembledOperator, l: u32) -> Result<Vec<Complex64>> {
    if !op.basis.contains(l as i64) {
        return Err(Error::Precondition(format!("l = {l} is outside the basis {:?}", op.basis)));
    }
    let start = op.basis.index(l, -(l as i64));
    let size = 2 * l as usize + 1;
    let el = op.diag[start];
    let ie = Complex64::new(0.0, op.epsilon);
    let mut m = DMatrix::<Complex64>::from_element(size, size, Complex64::default());
    for a in 0..size {
        m[(a, a)] += Complex64::new(el, 0.0);
        // (X (E_l − D)⁻¹)_{a,c} restricted to c outside the block
        let mut row: BTreeMap<usize, Complex64> = BTreeMap::new();
        for (&c, &x) in &op.x.rows[start + a] {
            if (start..start + size).contains(&c) {
                m[(a, c - start)] += ie * x;
            } else {
                let d = el - op.diag[c];
                assert!(d != 0.0, "degenerate denominator between distinct degrees");
                row.insert(c, x / d);
            }
        }
        for (&c, &w) in &row {
            for (&b, &x) in &op.x.rows[c] {
                if (start..start + size).contains(&b) {
                    m[(a, b - start)] += ie * ie * w * x;
                }
            }
        }
    }
    eigensolve(&m)
}

/// Largest distance between the computed cluster and the oracle, both sorted by real part.
pub fn oracle_distance(cluster: &[Complex64], oracle: &[Complex64]) -> Result<f64> {
    if cluster.len() != oracle.len() {
        return Err(Error::DimensionMismatch { expected: oracle.len(), found: cluster.len() });
    }
    let key = |x: &Complex64, y: &Complex64| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
    let mut a = cluster.to_vec();
    let mut b = oracle.to_vec();
    a.sort_by(key);
    b.sort_by(key);
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Law of `s(y)` for `y` uniform on the unit sphere, as a sorted sample on an
/// equal-area Fibonacci grid.
#[derive(Clone, Debug)]
pub struct PushforwardLaw {
    values: Vec<f64>,
}

impl PushforwardLaw {
    pub fn new(s_reduced: &PolySymbol, samples: usize) -> Result<Self> {
        let s = ReducedHamiltonian::new(s_reduced)?;
        let mut values: Vec<f64> = fibonacci_sphere(samples).iter().map(|y| s.value(y)).collect();
        values.sort_by(f64::total_cmp);
        Ok(PushforwardLaw { values })
    }

    pub fn cdf(&self, t: f64) -> f64 {
        self.values.partition_point(|v| *v <= t) as f64 / self.values.len() as f64
    }

    pub fn range(&self) -> (f64, f64) {
        (self.values[0], self.values[self.values.len() - 1])
    }
}

/// KS distance between cluster `k1`'s sub-cluster values, rescaled to unit
/// energy (`⟨s⟩` is homogeneous of degree −2, so values are multiplied by the
/// cluster centre), and the pushforward of the uniform measure under `s_reduced`.
pub fn subcluster_distribution_test(report: &ClusterReport, k1: i64, s_reduced: &PolySymbol) -> Result<f64> {
    let c = report
        .cluster(k1)
        .ok_or_else(|| Error::Precondition(format!("no cluster with k1 = {k1}")))?;
    if c.subcluster_values.len() < MIN_CLUSTER_COUNT {
        return Err(Error::Precondition(format!(
            "cluster {k1} has {} values, need at least {MIN_CLUSTER_COUNT}",
            c.subcluster_values.len()
        )));
    }
    let law = PushforwardLaw::new(s_reduced, LAW_SAMPLES)?;
    let vals: Vec<f64> = c.subcluster_values.iter().map(|v| v * c.center_predicted).collect();
    Ok(ks_statistic(&vals, |t| law.cdf(t)))
}

/// Smallest `c` such that all values lie in `[lo − c·unit, hi + c·unit]`.
pub fn range_constant(values: &[f64], lo: f64, hi: f64, unit: f64) -> f64 {
    values.iter().map(|v| (lo - v).max(v - hi).max(0.0) / unit).fold(0.0, f64::max)
}

/// Residual probe on `samples` randomly chosen eigenvalues of each sector
/// block; returns the largest `σ_min(B − z)/‖B‖_F` seen.
pub fn residual_audit(op: &AssembledOperator, by_sector: &[Vec<Complex64>], samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = by_sector.iter().map(|v| v.len()).sum();
    let mut worst: f64 = 0.0;
    for (idx, eigs) in op.sectors.iter().zip(by_sector) {
        if eigs.is_empty() {
            continue;
        }
        let k = ((samples * eigs.len()).div_ceil(total.max(1))).clamp(1, eigs.len());
        let block = op.block(idx);
        let norm = block.norm();
        for i in sample(&mut rng, eigs.len(), k) {
            worst = worst.max(residual_probe(&block, eigs[i], seed ^ i as u64) / norm);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::parse_poly;
    use crate::verify::operator::{assemble, SphereOperatorSpec};
    use rand::Rng;

    #[test]
    fn ks_of_sampled_law() {
        // closed form: P((3/8)U² − 1/8 ≤ t) = √((8t + 1)/3)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // one jittered draw of U per stratum of width 2/200
        let sample: Vec<f64> = (0..200)
            .map(|i| {
                let u = -1.0 + (i as f64 + rng.gen::<f64>()) / 100.0;
                0.375 * u * u - 0.125
            })
            .collect();
        let closed = |t: f64| ((8.0 * t + 1.0) / 3.0).clamp(0.0, 1.0).sqrt();
        assert!(ks_statistic(&sample, closed) <= 0.05);
        let s = parse_poly("3/8*x1^2 - 1/8", Some(3), None).unwrap();
        let law = PushforwardLaw::new(&s, LAW_SAMPLES).unwrap();
        for t in [-0.1, 0.0, 0.1, 0.2] {
            assert!((law.cdf(t) - closed(t)).abs() < 1e-3);
        }
    }

    #[test]
    fn oracle_small_epsilon_limit() {
        let q = parse_poly("x1", Some(3), None).unwrap();
        let spec = SphereOperatorSpec { h: 0.1, epsilon: 0.0, q, l_min: 4, l_max: 6, pad: 2 };
        let op = assemble(&spec).unwrap();
        let e = perturbation_oracle(&op, 5).unwrap();
        assert_eq!(e.len(), 11);
        assert!(e.iter().all(|z| *z == Complex64::new(0.3, 0.0) || (z - 0.3).norm() < 1e-15));
    }

    #[test]
    fn oracle_axial_symmetry() {
        let q = parse_poly("x3", Some(3), None).unwrap();
        let spec = SphereOperatorSpec { h: 0.1, epsilon: 0.05, q, l_min: 4, l_max: 6, pad: 2 };
        let op = assemble(&spec).unwrap();
        let e = perturbation_oracle(&op, 5).unwrap();
        // values depend on m², so every nonzero m gives a pair
        let mut re: Vec<f64> = e.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        let distinct = re.windows(2).filter(|w| w[1] - w[0] > 1e-12).count() + 1;
        assert_eq!(distinct, 6);
    }

    #[test]
    fn oracle_matches_small_run() {
        let q = parse_poly("x1", Some(3), None).unwrap();
        let (h, eps) = (0.05, 0.02);
        let spec = SphereOperatorSpec { h, epsilon: eps, q, l_min: 8, l_max: 12, pad: 4 };
        let op = assemble(&spec).unwrap();
        let all = op.eigenvalues().unwrap();
        let el = h * h * 110.0;
        let cluster: Vec<_> = all.iter().copied().filter(|z| (z.re - el).abs() < 0.01).collect();
        let oracle = perturbation_oracle(&op, 10).unwrap();
        let d = oracle_distance(&cluster, &oracle).unwrap();
        assert!(d <= 20.0 * (eps.powi(3) + eps * eps * h), "{d}");
    }
}
