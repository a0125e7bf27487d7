//! Long-time averages along the secondary flow of `⟨s⟩`, the secular
//! (convolution) equation, and the global separation hypothesis checker.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averaging::simpson_nodes;
use crate::error::{Error, Result};
use crate::ode;
use crate::sphere::ReducedHamiltonian;
use crate::symbolalg::{CompiledPoly, PolySymbol};

/// Local error bound per unit time for trajectory integration.
pub const ODE_TOL: f64 = 1e-10;
/// Tolerance between successive `T`-doublings of the long-time limit.
pub const LIMIT_TOL: f64 = 1e-8;
const LIMIT_MAX_DOUBLINGS: usize = 14;

/// The Hamilton flow of `⟨s⟩`, either on the reduced sphere (`⟨s⟩` a function
/// of `y` only, `n = 3`) or canonical on `ℝ^{2n}`.
#[derive(Clone, Debug)]
pub enum SecondaryFlow {
    ReducedSphere(ReducedHamiltonian),
    Canonical { n: usize, grad: Vec<CompiledPoly> },
}

impl SecondaryFlow {
    pub fn new(s_avg: &PolySymbol) -> Result<Self> {
        let position_only = s_avg.terms().keys().all(|m| m.kdegree() == 0);
        if s_avg.n() == 3 && position_only {
            return Ok(SecondaryFlow::ReducedSphere(ReducedHamiltonian::new(s_avg)?));
        }
        let grad = CompiledPoly::new(s_avg).gradient();
        Ok(SecondaryFlow::Canonical { n: s_avg.n(), grad })
    }

    pub fn dim(&self) -> usize {
        match self {
            SecondaryFlow::ReducedSphere(_) => 3,
            SecondaryFlow::Canonical { n, .. } => 2 * n,
        }
    }

    pub fn field(&self, y: &[f64], out: &mut [f64]) {
        match self {
            SecondaryFlow::ReducedSphere(h) => h.field(y, out),
            SecondaryFlow::Canonical { n, grad } => {
                for j in 0..*n {
                    out[j] = grad[n + j].eval_re(&y[..2 * n]);
                    out[n + j] = -grad[j].eval_re(&y[..2 * n]);
                }
            }
        }
    }

    /// Integrate the flow together with extra accumulators `İ_k = integrand(t, y)_k`,
    /// where the state carries the elapsed time as its last component.
    fn accumulate<I>(&self, y0: &[f64], t_end: f64, extra: usize, integrand: I, tol: f64) -> Result<Vec<f64>>
    where
        I: Fn(f64, &[f64], &mut [f64]),
    {
        let d = self.dim();
        let mut state = y0[..d].to_vec();
        state.extend(std::iter::repeat_n(0.0, extra + 1));
        let sign = t_end.signum();
        let out = ode::integrate(
            |z, o| {
                self.field(&z[..d], &mut o[..d]);
                integrand(z[d + extra], &z[..d], &mut o[d..d + extra]);
                if sign < 0.0 {
                    o[d..d + extra].iter_mut().for_each(|v| *v = -*v);
                }
                o[d + extra] = sign;
            },
            &state,
            t_end,
            tol,
        )?;
        Ok(out)
    }

    pub fn flow(&self, y0: &[f64], t: f64, tol: f64) -> Result<Vec<f64>> {
        Ok(self.accumulate(y0, t, 0, |_, _, _| {}, tol)?[..self.dim()].to_vec())
    }
}

/// `(1/T)∫₀ᵀ base∘exp(uH_{⟨s⟩})(y₀) du`.
pub fn time_average<B>(flow: &SecondaryFlow, base: &B, y0: &[f64], t: f64, tol: f64) -> Result<f64>
where
    B: Fn(&[f64]) -> f64,
{
    if t <= 0.0 {
        return Err(Error::Precondition("averaging time must be positive".into()));
    }
    let d = flow.dim();
    let out = flow.accumulate(y0, t, 1, |_, y, o| o[0] = base(y), tol)?;
    Ok(out[d] / t)
}

fn bump(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        (-1.0 / (u * (1.0 - u))).exp()
    }
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| simpson_nodes(1.0, 1 << 14).iter().map(|(u, w)| w * bump(*u)).sum())
}

/// Smooth-window average `∫ w(u/T) base∘exp(uH) du / ∫ w(u/T) du`; for orbits on
/// invariant tori this converges to the torus mean faster than any power of `1/T`.
pub fn windowed_average<B>(flow: &SecondaryFlow, base: &B, y0: &[f64], t: f64, tol: f64) -> Result<f64>
where
    B: Fn(&[f64]) -> f64,
{
    let d = flow.dim();
    let out = flow.accumulate(y0, t, 1, |s, y, o| o[0] = bump(s / t) * base(y), tol)?;
    Ok(out[d] / (t * bump_mass()))
}

/// `T → ∞` limit of the time average: windowed averages with `T` doubled from
/// `t0` until successive values agree to [`LIMIT_TOL`]. Returns `(limit, T)`.
pub fn long_time_limit<B>(flow: &SecondaryFlow, base: &B, y0: &[f64], t0: f64) -> Result<(f64, f64)>
where
    B: Fn(&[f64]) -> f64,
{
    let mut t = t0;
    let mut prev = windowed_average(flow, base, y0, t, ODE_TOL)?;
    for _ in 0..LIMIT_MAX_DOUBLINGS {
        t *= 2.0;
        let cur = windowed_average(flow, base, y0, t, ODE_TOL)?;
        if (cur - prev).abs() < LIMIT_TOL {
            return Ok((cur, t));
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!("long-time limit still drifting at T = {t}")))
}

/// `G(y₀) = ∫ k(u/T) base∘exp(uH)(y₀) du` with `k(u) = u − 1` on `[0, 1]` and 0 elsewhere,
/// so that `H G = base − ⟨⟨base⟩⟩_T`.
pub fn secular_value<B>(flow: &SecondaryFlow, base: &B, y0: &[f64], t: f64, tol: f64) -> Result<f64>
where
    B: Fn(&[f64]) -> f64,
{
    let d = flow.dim();
    let out = flow.accumulate(y0, t, 1, |s, y, o| o[0] = (s / t - 1.0) * base(y), tol)?;
    Ok(out[d])
}

/// Sample points for long-time averages.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusGrid {
    /// Level curves `⟨s⟩ = reference + offset` of a reduced-sphere `⟨s⟩`, each sampled
    /// at `angles` equally spaced times along its orbit. `anchor` selects the Morse band:
    /// level points are found on the arc from `anchor` (default: the maximum) to the minimum.
    Levels { reference: f64, offsets: Vec<f64>, angles: usize, anchor: Option<[f64; 3]> },
    /// Explicit phase-space points.
    Points(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusSample {
    pub offset: Option<f64>,
    pub angle: Option<f64>,
    pub point: Vec<f64>,
}

fn level_orbit(h: &ReducedHamiltonian, level: f64, anchor: Option<[f64; 3]>, angles: usize) -> Result<crate::sphere::LevelCurve> {
    let (hi, lo) = h.extremes();
    let y0 = h.level_point(level, &anchor.unwrap_or(hi), &lo)?;
    h.trace_orbit(&y0, angles, 1e-12)
}

impl TorusGrid {
    pub fn sample(&self, flow: &SecondaryFlow) -> Result<Vec<TorusSample>> {
        match self {
            TorusGrid::Points(pts) => {
                if pts.iter().any(|p| p.len() != flow.dim()) {
                    return Err(Error::DimensionMismatch { expected: flow.dim(), found: pts.iter().map(Vec::len).find(|&l| l != flow.dim()).unwrap_or(0) });
                }
                Ok(pts.iter().map(|p| TorusSample { offset: None, angle: None, point: p.clone() }).collect())
            }
            TorusGrid::Levels { reference, offsets, angles, anchor } => {
                let SecondaryFlow::ReducedSphere(h) = flow else {
                    return Err(Error::Precondition("level grids need a reduced-sphere ⟨s⟩".into()));
                };
                let curves: Vec<_> = offsets
                    .par_iter()
                    .map(|off| level_orbit(h, reference + off, *anchor, *angles).map(|c| (*off, c)))
                    .collect::<Result<_>>()?;
                Ok(curves
                    .into_iter()
                    .flat_map(|(off, c)| {
                        let n = c.points.len();
                        c.points.into_iter().enumerate().map(move |(j, p)| TorusSample {
                            offset: Some(off),
                            angle: Some(2.0 * std::f64::consts::PI * j as f64 / n as f64),
                            point: p.to_vec(),
                        })
                    })
                    .collect())
            }
        }
    }
}

/// Mean of `base` over the orbit on the level `⟨s⟩ = level` by the periodic trapezoid rule
/// in the time variable.
pub fn torus_mean<B>(s_avg: &PolySymbol, base: &B, level: f64, anchor: Option<[f64; 3]>, angles: usize) -> Result<f64>
where
    B: Fn(&[f64]) -> f64,
{
    let h = ReducedHamiltonian::new(s_avg)?;
    let c = level_orbit(&h, level, anchor, angles)?;
    Ok(c.points.iter().map(|p| base(p)).sum::<f64>() / c.points.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongTimeSample {
    #[serde(flatten)]
    pub sample: TorusSample,
    pub avg_t: f64,
    pub avg_inf: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongTimeAverage {
    pub base: PolySymbol,
    pub s_avg: PolySymbol,
    #[serde(rename = "T")]
    pub t: f64,
    pub grid: TorusGrid,
    pub samples: Vec<LongTimeSample>,
    /// `⟨⟨base⟩⟩_∞` on the reference torus (offset 0), for level grids.
    pub reference_mean: Option<f64>,
}

impl PartialEq for TorusGrid {
    fn eq(&self, o: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(o).ok()
    }
}

fn compiled_base(base: &PolySymbol, flow: &SecondaryFlow) -> Result<CompiledPoly> {
    let c = CompiledPoly::new(base);
    match flow {
        SecondaryFlow::ReducedSphere(_) => {
            if base.n() != 3 || base.terms().keys().any(|m| m.kdegree() > 0) {
                return Err(Error::Precondition("base must be a function of y on the reduced sphere".into()));
            }
            Ok(c.truncate_vars(3))
        }
        SecondaryFlow::Canonical { n, .. } => {
            if base.n() != *n {
                return Err(Error::DimensionMismatch { expected: *n, found: base.n() });
            }
            Ok(c)
        }
    }
}

/// `T`-averages of `base` along the `⟨s⟩`-flow at every grid point, with the long-time limits.
pub fn double_average(base: &PolySymbol, s_avg: &PolySymbol, t: f64, grid: &TorusGrid) -> Result<LongTimeAverage> {
    let flow = SecondaryFlow::new(s_avg)?;
    let cb = compiled_base(base, &flow)?;
    let f = |y: &[f64]| cb.eval_re(y);
    let samples = grid.sample(&flow)?;
    let values: Vec<LongTimeSample> = samples
        .into_par_iter()
        .map(|s| {
            let avg_t = time_average(&flow, &f, &s.point, t, ODE_TOL)?;
            let (avg_inf, _) = long_time_limit(&flow, &f, &s.point, t)?;
            Ok(LongTimeSample { sample: s, avg_t, avg_inf })
        })
        .collect::<Result<_>>()?;
    let reference_mean = match grid {
        TorusGrid::Levels { reference, anchor, angles, .. } => {
            let mut g = values.iter().filter(|v| v.sample.offset == Some(0.0));
            match g.next() {
                Some(v) => Some(v.avg_inf),
                None => Some(torus_mean(s_avg, &f, *reference, *anchor, (*angles).max(64))?),
            }
        }
        TorusGrid::Points(_) => None,
    };
    Ok(LongTimeAverage { base: base.clone(), s_avg: s_avg.clone(), t, grid: grid.clone(), samples: values, reference_mean })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecularSample {
    pub point: Vec<f64>,
    pub g: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecularSolution {
    #[serde(rename = "T")]
    pub t: f64,
    pub samples: Vec<SecularSample>,
    pub max_residual: f64,
}

/// Pointwise residual bound for [`solve_secular`].
pub const SECULAR_RESIDUAL_TOL: f64 = 1e-6;

/// [`solve_secular`] for an arbitrary base function.
pub fn solve_secular_with<B>(flow: &SecondaryFlow, base: &B, t: f64, points: &[Vec<f64>]) -> Result<SecularSolution>
where
    B: Fn(&[f64]) -> f64 + Sync,
{
    const STEP: f64 = 1e-2;
    const TOL: f64 = 1e-12;
    let samples: Vec<SecularSample> = points
        .par_iter()
        .map(|p| {
            let g = secular_value(flow, base, p, t, TOL)?;
            // fourth-order central difference of G along the flow
            let mut gs = [0.0; 4];
            for (k, dt) in [-2.0, -1.0, 1.0, 2.0].iter().enumerate() {
                let q = flow.flow(p, dt * STEP, TOL)?;
                gs[k] = secular_value(flow, base, &q, t, TOL)?;
            }
            let hg = (gs[0] - 8.0 * gs[1] + 8.0 * gs[2] - gs[3]) / (12.0 * STEP);
            let avg = time_average(flow, base, p, t, TOL)?;
            Ok(SecularSample { point: p.clone(), g, residual: (hg - (base(p) - avg)).abs() })
        })
        .collect::<Result<_>>()?;
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    if max_residual > SECULAR_RESIDUAL_TOL {
        return Err(Error::Invariant(format!(
            "secular equation residual {max_residual:e} exceeds {SECULAR_RESIDUAL_TOL:e}"
        )));
    }
    Ok(SecularSolution { t, samples, max_residual })
}

/// Solve `H_{⟨s⟩} G = base − ⟨⟨base⟩⟩_T` on the grid and check the residual by finite differences.
pub fn solve_secular(base: &PolySymbol, s_avg: &PolySymbol, t: f64, grid: &TorusGrid) -> Result<SecularSolution> {
    let flow = SecondaryFlow::new(s_avg)?;
    let cb = compiled_base(base, &flow)?;
    let pts: Vec<_> = grid.sample(&flow)?.into_iter().map(|s| s.point).collect();
    solve_secular_with(&flow, &|y: &[f64]| cb.eval_re(y), t, &pts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRow {
    #[serde(rename = "T")]
    pub t: f64,
    /// `inf` of `⟨⟨·⟩⟩_T − ⟨⟨·⟩⟩_∞` over the band `[b, a]`.
    pub inf_upper: Option<f64>,
    /// `sup` of `⟨⟨·⟩⟩_T − ⟨⟨·⟩⟩_∞` over the band `[−a, −b]`.
    pub sup_lower: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Satisfied {
        #[serde(rename = "T")]
        t: f64,
        margin: f64,
    },
    Undetermined { t_max: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandEvidence {
    pub b: f64,
    pub table: Vec<HypothesisRow>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub a: f64,
    pub reference_mean: f64,
    pub bands: Vec<BandEvidence>,
}

/// Evidence for the separation hypothesis: for each `b`, scan `T = T₀, 2T₀, …, ≤ t_max` and
/// record the band extrema of `⟨⟨·⟩⟩_T − ⟨⟨·⟩⟩_∞`. A band is satisfied at the first `T` from
/// which both extrema stay strictly sign-definite through `t_max`.
pub fn check_global_hypothesis(bundle: &LongTimeAverage, a: f64, b_list: &[f64], t_max: f64) -> Result<HypothesisReport> {
    let TorusGrid::Levels { .. } = bundle.grid else {
        return Err(Error::Precondition("the hypothesis checker needs a level grid".into()));
    };
    if !(a > 0.0) || b_list.iter().any(|&b| !(b > 0.0 && b < a)) {
        return Err(Error::Precondition("need 0 < b < a".into()));
    }
    let reference = bundle.reference_mean.ok_or_else(|| Error::Precondition("bundle has no reference mean".into()))?;
    let flow = SecondaryFlow::new(&bundle.s_avg)?;
    let cb = compiled_base(&bundle.base, &flow)?;
    let f = |y: &[f64]| cb.eval_re(y);
    let mut ts = vec![bundle.t];
    while ts.last().unwrap() * 2.0 <= t_max {
        ts.push(ts.last().unwrap() * 2.0);
    }
    let mut per_t: Vec<Vec<(f64, f64)>> = Vec::with_capacity(ts.len());
    for (i, &t) in ts.iter().enumerate() {
        let row: Vec<(f64, f64)> = if i == 0 {
            bundle.samples.iter().map(|s| (s.sample.offset.unwrap_or(f64::NAN), s.avg_t - reference)).collect()
        } else {
            bundle
                .samples
                .par_iter()
                .map(|s| Ok((s.sample.offset.unwrap_or(f64::NAN), time_average(&flow, &f, &s.sample.point, t, ODE_TOL)? - reference)))
                .collect::<Result<_>>()?
        };
        per_t.push(row);
    }
    let bands = b_list
        .iter()
        .map(|&b| {
            let table: Vec<HypothesisRow> = ts
                .iter()
                .zip(&per_t)
                .map(|(&t, row)| {
                    let upper = row.iter().filter(|(o, _)| *o >= b && *o <= a).map(|(_, d)| *d);
                    let lower = row.iter().filter(|(o, _)| *o <= -b && *o >= -a).map(|(_, d)| *d);
                    HypothesisRow {
                        t,
                        inf_upper: upper.reduce(f64::min),
                        sup_lower: lower.reduce(f64::max),
                    }
                })
                .collect();
            let separated = |r: &HypothesisRow| matches!((r.inf_upper, r.sup_lower), (Some(i), Some(s)) if i > 0.0 && s < 0.0);
            let first = (0..table.len()).find(|&k| table[k..].iter().all(separated));
            let verdict = match first {
                Some(k) => Verdict::Satisfied {
                    t: table[k].t,
                    margin: table[k..]
                        .iter()
                        .map(|r| r.inf_upper.unwrap().min(-r.sup_lower.unwrap()))
                        .fold(f64::INFINITY, f64::min),
                },
                None => Verdict::Undetermined { t_max: *ts.last().unwrap() },
            };
            BandEvidence { b, table, verdict }
        })
        .collect();
    Ok(HypothesisReport { a, reference_mean: reference, bands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::{parse_poly, Frame};

    fn p3(s: &str) -> PolySymbol {
        parse_poly(s, Some(3), Some(Frame::Xk)).unwrap()
    }

    #[test]
    fn secular_toy_against_closed_form() {
        let s = parse_poly("k2", Some(2), Some(Frame::Xk)).unwrap();
        let flow = SecondaryFlow::new(&s).unwrap();
        let t = 7.5;
        let base = |y: &[f64]| y[1].cos();
        let pts: Vec<Vec<f64>> = (0..5).map(|j| vec![0.0, 0.3 * j as f64, 0.0, 1.0]).collect();
        let sol = solve_secular_with(&flow, &base, t, &pts).unwrap();
        for smp in &sol.samples {
            let x = smp.point[1];
            let exact = x.sin() + ((x + t).cos() - x.cos()) / t;
            assert!((smp.g - exact).abs() < 1e-8, "{} vs {}", smp.g, exact);
        }
    }

    #[test]
    fn invariant_base_is_its_own_average() {
        let s = p3("3/8*x1^2 - 1/8");
        let grid = TorusGrid::Levels { reference: 0.05, offsets: vec![-0.02, 0.0, 0.02], angles: 8, anchor: Some([1.0, 0.0, 0.0]) };
        let lt = double_average(&p3("x1^2"), &s, 10.0, &grid).unwrap();
        for v in &lt.samples {
            let y1 = v.sample.point[0];
            assert!((v.avg_t - y1 * y1).abs() < 1e-9 && (v.avg_inf - y1 * y1).abs() < 1e-8);
        }
    }

    #[test]
    fn hypothesis_on_s_itself() {
        let s = p3("3/8*x1^2 - 1/8");
        let grid = TorusGrid::Levels { reference: 0.0625, offsets: vec![-0.04, -0.02, 0.0, 0.02, 0.04], angles: 8, anchor: Some([1.0, 0.0, 0.0]) };
        let lt = double_average(&s, &s, 5.0, &grid).unwrap();
        let rep = check_global_hypothesis(&lt, 0.05, &[0.01, 0.03], 20.0).unwrap();
        for (band, want) in rep.bands.iter().zip([0.02, 0.04]) {
            match band.verdict {
                Verdict::Satisfied { t, margin } => {
                    assert_eq!(t, 5.0);
                    assert!((margin - want).abs() < 1e-8);
                }
                _ => panic!("{:?}", band.verdict),
            }
        }
        let zero = double_average(&PolySymbol::zero(3, Frame::Xk), &s, 5.0, &grid).unwrap();
        let rep = check_global_hypothesis(&zero, 0.05, &[0.01], 20.0).unwrap();
        assert!(matches!(rep.bands[0].verdict, Verdict::Undetermined { .. }));
    }
}
