use serde::{Deserialize, Serialize};

use crate::averaging::{average, oscillating_part, solve_homological, HomologicalMode, PeriodicFlow};
use crate::error::Result;
use crate::symbolalg::{frame::to_frame, Coeff, Frame, PolySymbol};

use super::second::g0_osc;

/// Averaged corrections through third order together with the generators used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionBundle {
    pub lambda: Vec<i64>,
    pub s_avg: PolySymbol,
    pub t_avg: Option<PolySymbol>,
    #[serde(rename = "G0")]
    pub g0: PolySymbol,
    #[serde(rename = "G1")]
    pub g1: PolySymbol,
    /// Right-hand side `R − ⟨R⟩` of the equation `H_p G₂ = R − ⟨R⟩`.
    #[serde(rename = "G2_residual")]
    pub g2_residual: Option<PolySymbol>,
}

/// The three pieces `⟨f⟩`, `⟨g⟩`, `⟨k⟩` of `⟨t⟩ = ⟨f + g + w + k⟩`.
#[derive(Clone, Debug)]
pub struct ThirdOrderParts {
    pub f_avg: PolySymbol,
    pub g_avg: PolySymbol,
    pub k_avg: PolySymbol,
}

fn half() -> Coeff {
    Coeff::ratio(1, 2)
}

/// Split an oscillator symbol into monomial pieces with their phases.
fn pieces(flow: &PeriodicFlow, f: &PolySymbol) -> Vec<(PolySymbol, Coeff, i64)> {
    f.terms()
        .iter()
        .map(|(m, c)| {
            (
                PolySymbol::term(f.n(), f.frame(), m.clone(), Coeff::one()),
                c.clone(),
                m.phase(&flow.lambda),
            )
        })
        .collect()
}

/// Closed-form evaluation of the time integrals defining `f`, `g` and `k`.
///
/// Over a full period `(1/T)∫₀ᵀ u e^{iau} du = 1/(ia)` for `a ≠ 0`; the
/// `a = 0` contributions are brackets of flow invariants with `q` and average
/// to zero, so they are skipped.
pub fn third_order_parts(flow: &PeriodicFlow, q: &PolySymbol, r: &PolySymbol) -> Result<ThirdOrderParts> {
    let qo = to_frame(q, Frame::Yeta);
    let ro = to_frame(r, Frame::Yeta);
    let qs = pieces(flow, &qo);
    let rs = pieces(flow, &ro);
    let n = qo.n();
    let mut f = PolySymbol::zero(n, Frame::Yeta);
    let mut g = PolySymbol::zero(n, Frame::Yeta);
    let mut k = PolySymbol::zero(n, Frame::Yeta);

    // f = (1/12) Σ c_α c_β /(a_α a_β) {m_β, {m_α, q}}
    let inner: Vec<PolySymbol> = qs.iter().map(|(m, _, _)| m.bracket(&qo)).collect();
    for (ia, (_, ca, aa)) in qs.iter().enumerate() {
        for (mb, cb, ab) in &qs {
            let w = &(ca * cb) * &Coeff::ratio(1, 12 * aa * ab);
            f = &f + &mb.bracket(&inner[ia]).scale(&w);
        }
    }
    // g = (1/4) Σ_{a_α + a_β ≠ 0} c_α c_β /((a_α + a_β) a_α) {{m_α, m_β}, q}
    for (ma, ca, aa) in &qs {
        for (mb, cb, ab) in &qs {
            let s = aa + ab;
            if s == 0 {
                continue;
            }
            let w = &(ca * cb) * &Coeff::ratio(1, 4 * s * aa);
            g = &g + &ma.bracket(mb).bracket(&qo).scale(&w);
        }
    }
    // k = Σ c_α/(2i a_α) {m_α, r} + Σ_{b_ρ ≠ 0} d_ρ/(2i b_ρ) {n_ρ, q}
    let minus_i = Coeff::gaussian(0, -1);
    for (ma, ca, aa) in &qs {
        let w = &(ca * &minus_i) * &Coeff::ratio(1, 2 * aa);
        k = &k + &ma.bracket(&ro).scale(&w);
    }
    for (nr, dr, br) in &rs {
        if *br == 0 {
            continue;
        }
        let w = &(dr * &minus_i) * &Coeff::ratio(1, 2 * br);
        k = &k + &nr.bracket(&qo).scale(&w);
    }
    let back = |p: &PolySymbol| -> Result<PolySymbol> { Ok(to_frame(&average(flow, p)?, q.frame())) };
    Ok(ThirdOrderParts { f_avg: back(&f)?, g_avg: back(&g)?, k_avg: back(&k)? })
}

/// `⟨s⟩`, `⟨t⟩` and the generators `G₀`, `G₁` for `p + iεq + ε²r + iε³w`.
pub fn third_correction(
    flow: &PeriodicFlow,
    q: &PolySymbol,
    r: &PolySymbol,
    w: &PolySymbol,
) -> Result<CorrectionBundle> {
    correction_bundle(flow, q, r, Some(w))
}

/// As [`third_correction`], with `⟨t⟩` and the `G₂` residual omitted when `w` is absent.
pub fn correction_bundle(
    flow: &PeriodicFlow,
    q: &PolySymbol,
    r: &PolySymbol,
    w: Option<&PolySymbol>,
) -> Result<CorrectionBundle> {
    flow.check(q)?;
    flow.check(r)?;
    if let Some(w) = w {
        flow.check(w)?;
    }
    let frame = q.frame();
    let qo = to_frame(q, Frame::Yeta);
    let ro = to_frame(r, Frame::Yeta);
    let g0 = g0_osc(flow, &qo)?;
    let bq = g0.bracket(&qo);
    let bq_avg = average(flow, &bq)?;
    let r_avg = average(flow, &ro)?;
    let s_avg = &r_avg - &bq_avg.scale(&half());

    // H_p G₁ = ½({G₀,q} − ⟨{G₀,q}⟩) − (r − ⟨r⟩); invariant parts of G₁ do not reach ⟨t⟩.
    let rhs = &oscillating_part(flow, &bq)?.scale(&half()) - &oscillating_part(flow, &ro)?;
    let g1 = solve_homological(flow, &rhs, HomologicalMode::Minimal)?;

    let (t_avg, g2_res) = match w {
        None => (None, None),
        Some(w) => {
            let wo = to_frame(w, Frame::Yeta);
            // R = w − ½{G₁,q} − (1/12){G₀,{G₀,q}} − ¼{G₀,⟨{G₀,q}⟩} + ½{G₀,r} + ½{G₀,⟨r⟩}
            let mut big_r = wo.clone();
            big_r = &big_r - &g1.bracket(&qo).scale(&half());
            big_r = &big_r - &g0.bracket(&bq).scale(&Coeff::ratio(1, 12));
            big_r = &big_r - &g0.bracket(&bq_avg).scale(&Coeff::ratio(1, 4));
            big_r = &big_r + &g0.bracket(&ro).scale(&half());
            big_r = &big_r + &g0.bracket(&r_avg).scale(&half());
            let parts = third_order_parts(flow, &qo, &ro)?;
            let t = &(&(&parts.f_avg + &parts.g_avg) + &parts.k_avg) + &average(flow, &wo)?;
            let direct = average(flow, &big_r)?;
            if !t.approx_eq(&direct, 1e-9) {
                return Err(crate::Error::Invariant(format!(
                    "⟨t⟩ from the f, g, k integrals disagrees with ⟨R⟩ (max coefficient gap {:e})",
                    t.max_coeff_diff(&direct)
                )));
            }
            (Some(to_frame(&t, frame)), Some(to_frame(&oscillating_part(flow, &big_r)?, frame)))
        }
    };
    Ok(CorrectionBundle {
        lambda: flow.lambda.clone(),
        s_avg: to_frame(&s_avg, frame),
        t_avg,
        g0: to_frame(&g0, frame),
        g1: to_frame(&g1, frame),
        g2_residual: g2_res,
    })
}
