use crate::averaging::{average, require_zero_average, solve_homological, HomologicalMode, PeriodicFlow};
use num_traits::Zero;

use crate::error::Result;
use crate::symbolalg::{frame::to_frame, Coeff, Frame, PolySymbol};

/// `G₀` for `q` with `⟨q⟩ = 0`, in the oscillator frame.
pub(crate) fn g0_osc(flow: &PeriodicFlow, q: &PolySymbol) -> Result<PolySymbol> {
    require_zero_average(flow, q)?;
    solve_homological(flow, &to_frame(q, Frame::Yeta), HomologicalMode::Minimal)
}

/// `⟨s⟩ = ⟨r⟩ − ½⟨{G₀, q}⟩`, returned in the frame of `q`.
pub fn second_correction(flow: &PeriodicFlow, q: &PolySymbol, r: &PolySymbol) -> Result<PolySymbol> {
    flow.check(q)?;
    flow.check(r)?;
    let g0 = g0_osc(flow, q)?;
    second_correction_with_g0(flow, &g0, q, r)
}

/// `⟨r⟩ − ½⟨{G₀, q}⟩` for a caller-supplied `G₀`.
///
/// Any `G₀` solving `{p₂, G₀} = q` gives the same result; exposing the
/// generator lets callers check that directly.
pub fn second_correction_with_g0(
    flow: &PeriodicFlow,
    g0: &PolySymbol,
    q: &PolySymbol,
    r: &PolySymbol,
) -> Result<PolySymbol> {
    let qo = to_frame(q, Frame::Yeta);
    let ro = to_frame(r, Frame::Yeta);
    let go = to_frame(g0, Frame::Yeta);
    go.check_compatible(&qo)?;
    let b = average(flow, &go.bracket(&qo))?;
    let s = &average(flow, &ro)? - &b.scale(&Coeff::ratio(1, 2));
    Ok(to_frame(&s, q.frame()))
}

/// The averaged quartic correction for a barrier-top resonance problem with
/// `p = p₂ + p₃ + p₄ + …`.
///
/// With the bracket convention `{f, g} = H_f g` this is
/// `second_correction(q = p₃, r = −p₄)`; for `p₃ = x₁³` and `λ = (1, 1)` it is
/// `(15/4)((x₁² + ξ₁²)/2)²`.
pub fn barrier_s(flow: &PeriodicFlow, p3: &PolySymbol, p4: &PolySymbol) -> Result<PolySymbol> {
    second_correction(flow, p3, &-p4)
}

/// Whether `f` is real-valued on the real phase space.
pub fn is_real_on_real_domain(f: &PolySymbol, tol: f64) -> bool {
    let g = to_frame(f, Frame::Xk);
    g.terms().values().all(|c| match c {
        Coeff::Exact(e) => e.a.im.is_zero() && e.b.im.is_zero(),
        Coeff::Float(z) => z.im.abs() <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::parse_poly;

    #[test]
    fn one_to_one_quartic() {
        let flow = PeriodicFlow::new(vec![1, 1]).unwrap();
        let q = parse_poly("x1^3", Some(2), None).unwrap();
        let s = second_correction(&flow, &q, &PolySymbol::zero(2, Frame::Xk)).unwrap();
        let expect = parse_poly("15/4*((x1^2+k1^2)/2)^2", Some(2), None).unwrap();
        assert_eq!(s, expect);
        let so = to_frame(&s, Frame::Yeta);
        assert_eq!(so, parse_poly("-15/4*y1^2*eta1^2", Some(2), None).unwrap());
    }

    #[test]
    fn nonzero_average_rejected() {
        let flow = PeriodicFlow::new(vec![1, 1]).unwrap();
        let q = parse_poly("x1^2", Some(2), None).unwrap();
        let err = second_correction(&flow, &q, &PolySymbol::zero(2, Frame::Xk)).unwrap_err();
        assert!(matches!(err, crate::Error::NonzeroAverage { .. }));
    }
}
