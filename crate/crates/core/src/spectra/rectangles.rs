//! Torus quantization data and the cluster rectangles around `f(h(k − α/4) − S/2π)`.

use serde::{Deserialize, Serialize};

use super::profile::PeriodProfile;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Actions and Maslov indices of the fundamental cycles of a torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusData {
    #[serde(rename = "S")]
    pub s: [f64; 2],
    pub alpha: [i64; 2],
}

impl TorusData {
    /// Calibrated sphere defaults for the band `y₁ > 0` of `⟨s⟩` with reference left
    /// area `a0`: `α = (−2, 2)`, `S = (2π, −a0)`, so that clusters sit at `h²(k+½)²`.
    pub fn sphere(a0: f64) -> Self {
        TorusData { s: [TAU, -a0], alpha: [-2, 2] }
    }

    /// Floquet parameter `θ = S/2πh + α/4`.
    pub fn theta(&self, h: f64) -> [f64; 2] {
        [0, 1].map(|j| self.s[j] / (TAU * h) + self.alpha[j] as f64 / 4.0)
    }

    /// Quantized action `ξ_j(k) = h(k − α_j/4) − S_j/2π`.
    pub fn xi(&self, j: usize, h: f64, k: i64) -> f64 {
        h * (k as f64 - self.alpha[j] as f64 / 4.0) - self.s[j] / TAU
    }

    /// Real index `k` with `ξ_j(k) = xi`.
    pub fn index_of(&self, j: usize, h: f64, xi: f64) -> f64 {
        (xi + self.s[j] / TAU) / h + self.alpha[j] as f64 / 4.0
    }
}

/// Multipliers of the O-bounds for the rectangle half-widths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthConstants {
    pub re: f64,
    pub im: f64,
    /// `⟨s⟩` real on the real domain: imaginary half-width `ε³ + εh` instead of `ε² + εh`.
    pub real_s: bool,
}

impl Default for WidthConstants {
    fn default() -> Self {
        WidthConstants { re: 1.0, im: 1.0, real_s: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRect {
    pub k1: i64,
    pub center: f64,
    pub half_width_re: f64,
    pub half_width_im: f64,
}

impl ClusterRect {
    pub fn contains(&self, re: f64, im: f64) -> bool {
        (re - self.center).abs() <= self.half_width_re && im.abs() <= self.half_width_im
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRectangles {
    pub h: f64,
    pub epsilon: f64,
    pub rects: Vec<ClusterRect>,
}

impl ClusterRectangles {
    pub fn pairwise_disjoint(&self) -> bool {
        let mut r: Vec<_> = self.rects.iter().collect();
        r.sort_by(|a, b| a.center.total_cmp(&b.center));
        r.windows(2).all(|w| w[0].center + w[0].half_width_re < w[1].center - w[1].half_width_re)
    }
}

/// Cluster center `f(ξ₁(k₁))`.
pub fn cluster_center(profile: &PeriodProfile, torus: &TorusData, h: f64, k1: i64) -> f64 {
    profile.f(torus.xi(0, h, k1))
}

/// All rectangles whose center lies in `window`.
pub fn cluster_rectangles(
    profile: &PeriodProfile,
    torus: &TorusData,
    h: f64,
    epsilon: f64,
    window: (f64, f64),
    widths: WidthConstants,
) -> ClusterRectangles {
    let (lo, hi) = (profile.g(window.0), profile.g(window.1));
    let (k_lo, k_hi) = (torus.index_of(0, h, lo).floor() as i64 - 1, torus.index_of(0, h, hi).ceil() as i64 + 1);
    let re = widths.re * (epsilon * epsilon + h * h);
    let im = widths.im * if widths.real_s { epsilon.powi(3) + epsilon * h } else { epsilon * epsilon + epsilon * h };
    let rects = (k_lo..=k_hi)
        .filter_map(|k1| {
            let c = cluster_center(profile, torus, h, k1);
            (c >= window.0 && c <= window.1).then_some(ClusterRect { k1, center: c, half_width_re: re, half_width_im: im })
        })
        .collect();
    ClusterRectangles { h, epsilon, rects }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_centers() {
        let h = 1e-2;
        let r = cluster_rectangles(&PeriodProfile::Sphere, &TorusData::sphere(0.0), h, 0.0, (0.5, 1.5), WidthConstants::default());
        for rect in &r.rects {
            let k = rect.k1 as f64;
            assert!((rect.center - h * h * (k + 0.5) * (k + 0.5)).abs() < 1e-13);
        }
        assert!(r.rects.iter().any(|x| x.k1 == 99));
    }

    #[test]
    fn disjoint_when_eps_small() {
        let h: f64 = 1e-3;
        let eps = h.powf(0.7);
        let r = cluster_rectangles(&PeriodProfile::Sphere, &TorusData::sphere(0.0), h, eps, (0.9, 1.1), WidthConstants::default());
        assert!(r.pairwise_disjoint());
        let wide = cluster_rectangles(&PeriodProfile::Sphere, &TorusData::sphere(0.0), h, 0.1, (0.9, 1.1), WidthConstants::default());
        assert!(!wide.pairwise_disjoint());
    }
}
