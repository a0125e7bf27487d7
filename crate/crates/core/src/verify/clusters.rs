//! Assignment of computed eigenvalues to predicted cluster rectangles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{ClusterRect, ClusterRectangles, LatticePoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub k1: i64,
    pub center_predicted: f64,
    pub eigenvalues: Vec<Complex64>,
    /// `max |Re z − center|` over the cluster.
    pub width_re: f64,
    /// `max |Im z|` over the cluster.
    pub width_im: f64,
    /// `ε⁻²(Re z − center)`, in eigenvalue order.
    pub subcluster_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    /// One-sided Hausdorff distance from the eigenvalues to the lattice.
    pub lattice_distance: Option<f64>,
    /// `max width_re / (ε² + h²)`.
    pub width_const_re: f64,
    /// `max width_im / (εh)`.
    pub width_const_im: f64,
    /// Kolmogorov–Smirnov distance of a selected cluster, if computed.
    pub distribution_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub h: f64,
    pub epsilon: f64,
    pub clusters: Vec<Cluster>,
    pub unassigned: Vec<Complex64>,
    pub stats: ClusterStats,
}

impl ClusterReport {
    pub fn unassigned_count(&self) -> usize {
        self.unassigned.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.clusters.iter().map(|c| c.eigenvalues.len()).sum()
    }

    pub fn cluster(&self, k1: i64) -> Option<&Cluster> {
        self.clusters.iter().find(|c| c.k1 == k1)
    }

    /// Cluster index of an eigenvalue, or `None` if unassigned.
    pub fn cluster_of(&self, z: Complex64) -> Option<(i64, f64)> {
        for c in &self.clusters {
            if let Some(p) = c.eigenvalues.iter().position(|w| *w == z) {
                return Some((c.k1, c.subcluster_values[p]));
            }
        }
        None
    }
}

/// Real window spanned by the rectangles, extended by half the outer gaps.
pub fn report_window(rects: &ClusterRectangles) -> Option<(f64, f64)> {
    let mut c: Vec<f64> = rects.rects.iter().map(|r| r.center).collect();
    c.sort_by(f64::total_cmp);
    match c.len() {
        0 => None,
        1 => {
            let r = &rects.rects[0];
            Some((r.center - r.half_width_re, r.center + r.half_width_re))
        }
        n => Some((c[0] - (c[1] - c[0]) / 2.0, c[n - 1] + (c[n - 1] - c[n - 2]) / 2.0)),
    }
}

pub fn extract_clusters(
    eigs: &[Complex64],
    rects: &ClusterRectangles,
    lattice: Option<&[LatticePoint]>,
) -> Result<ClusterReport> {
    if !rects.pairwise_disjoint() {
        return Err(Error::Regime("cluster rectangles overlap at this (h, ε)".into()));
    }
    let mut sorted: Vec<&ClusterRect> = rects.rects.iter().collect();
    sorted.sort_by(|a, b| a.center.total_cmp(&b.center));
    let eps2 = rects.epsilon * rects.epsilon;
    let mut clusters: Vec<Cluster> = sorted
        .iter()
        .map(|r| Cluster {
            k1: r.k1,
            center_predicted: r.center,
            eigenvalues: Vec::new(),
            width_re: 0.0,
            width_im: 0.0,
            subcluster_values: Vec::new(),
        })
        .collect();
    let mut unassigned = Vec::new();
    for &z in eigs {
        let nearest = sorted
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.center - z.re).abs().total_cmp(&(b.1.center - z.re).abs()))
            .map(|(i, _)| i);
        match nearest {
            Some(i) if sorted[i].contains(z.re, z.im) => {
                let c = &mut clusters[i];
                c.eigenvalues.push(z);
                c.width_re = c.width_re.max((z.re - c.center_predicted).abs());
                c.width_im = c.width_im.max(z.im.abs());
                c.subcluster_values.push(if eps2 > 0.0 { (z.re - c.center_predicted) / eps2 } else { 0.0 });
            }
            _ => unassigned.push(z),
        }
    }
    let max_width = clusters.iter().map(|c| c.width_re).fold(0.0, f64::max);
    let min_gap = sorted.windows(2).map(|w| w[1].center - w[0].center).fold(f64::INFINITY, f64::min);
    if max_width > 0.0 && min_gap <= 4.0 * max_width {
        return Err(Error::Regime(format!(
            "inter-center gap {min_gap:.3e} does not exceed 4× the cluster width {max_width:.3e}"
        )));
    }
    let (h, eps) = (rects.h, rects.epsilon);
    let lattice_distance = lattice.map(|pts| {
        eigs.iter()
            .map(|z| pts.iter().map(|p| (p.z - z).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    });
    let stats = ClusterStats {
        lattice_distance,
        width_const_re: max_width / (eps * eps + h * h),
        width_const_im: if eps * h > 0.0 {
            clusters.iter().map(|c| c.width_im).fold(0.0, f64::max) / (eps * h)
        } else {
            0.0
        },
        distribution_distance: None,
    };
    Ok(ClusterReport { h, epsilon: eps, clusters, unassigned, stats })
}

/// Rectangles centred at `h²l(l+1)` for `l ∈ [l_min, l_max]` with half-widths
/// `c_re(ε² + h²)` and `c_im·εh`.
pub fn sphere_rectangles(h: f64, epsilon: f64, l_min: u32, l_max: u32, c_re: f64, c_im: f64) -> ClusterRectangles {
    let rects = (l_min..=l_max)
        .map(|l| ClusterRect {
            k1: l as i64,
            center: h * h * (l as f64) * (l as f64 + 1.0),
            half_width_re: c_re * (epsilon * epsilon + h * h),
            half_width_im: c_im * epsilon * h,
        })
        .collect();
    ClusterRectangles { h, epsilon, rects }
}

/// Eigenvalues with real part inside `window`.
pub fn in_window(eigs: &[Complex64], window: (f64, f64)) -> Vec<Complex64> {
    eigs.iter().copied().filter(|z| z.re >= window.0 && z.re <= window.1).collect()
}

/// Largest distance from a point of the multiset to its conjugate partner,
/// pairing `z` with `z̄` greedily after sorting.
pub fn conjugation_defect(eigs: &[Complex64]) -> f64 {
    let mut a: Vec<Complex64> = eigs.to_vec();
    let mut b: Vec<Complex64> = eigs.iter().map(|z| z.conj()).collect();
    let key = |x: &Complex64, y: &Complex64| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
    a.sort_by(key);
    b.sort_by(key);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in &a {
        // partners lie close in real part; scan a neighbourhood of the sorted list
        let start = b.partition_point(|w| w.re < z.re - 1e-6);
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, w) in b.iter().enumerate().skip(start) {
            if w.re > z.re + 1e-6 && best.1 != usize::MAX {
                break;
            }
            if !used[j] && (w - z).norm() < best.0 {
                best = ((w - z).norm(), j);
            }
        }
        if best.1 == usize::MAX {
            return f64::INFINITY;
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_perturbation_clusters() {
        let h = 0.1;
        let mut eigs = Vec::new();
        for l in 3..=6u32 {
            for _ in 0..2 * l + 1 {
                eigs.push(Complex64::new(h * h * (l * (l + 1)) as f64, 0.0));
            }
        }
        let rects = sphere_rectangles(h, 0.0, 3, 6, 3.0, 10.0);
        let rep = extract_clusters(&eigs, &rects, None).unwrap();
        for c in &rep.clusters {
            assert_eq!(c.eigenvalues.len() as i64, 2 * c.k1 + 1);
            assert_eq!(c.width_re, 0.0);
        }
        assert_eq!(rep.assigned_count() + rep.unassigned_count(), eigs.len());
    }

    #[test]
    fn overlapping_rectangles_refused() {
        let rects = sphere_rectangles(0.1, 0.5, 3, 6, 3.0, 10.0);
        assert!(matches!(extract_clusters(&[], &rects, None), Err(Error::Regime(_))));
    }

    #[test]
    fn outliers_are_unassigned() {
        let rects = sphere_rectangles(0.1, 0.01, 3, 4, 3.0, 10.0);
        let eigs = [Complex64::new(0.12, 0.0), Complex64::new(0.16, 0.0), Complex64::new(0.2, 0.0)];
        let rep = extract_clusters(&eigs, &rects, None).unwrap();
        assert_eq!(rep.unassigned, vec![Complex64::new(0.16, 0.0)]);
        assert_eq!(rep.assigned_count(), 2);
    }

    #[test]
    fn conjugation_pairs() {
        let e = [Complex64::new(1.0, 0.5), Complex64::new(1.0, -0.5), Complex64::new(2.0, 0.0)];
        assert_eq!(conjugation_defect(&e), 0.0);
        let e = [Complex64::new(1.0, 0.5), Complex64::new(2.0, 0.0)];
        assert!(conjugation_defect(&e) >= 1.0);
    }
}
