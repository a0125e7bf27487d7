//! Complex coordinates `z = x + iξ/|ξ|` on the unit cosphere bundle.
//!
//! A "z-polynomial" is stored as an `n = 3` real-frame symbol whose position
//! slots hold `z₁, z₂, z₃` and momentum slots hold `z̄₁, z̄₂, z̄₃`.

use std::sync::OnceLock;

use crate::symbolalg::constraint::{groebner_basis, normal_form};
use crate::symbolalg::{Coeff, Frame, Monomial, PolySymbol};

fn v(j: usize, momentum: bool) -> PolySymbol {
    if momentum {
        PolySymbol::var_k(3, Frame::Xk, j)
    } else {
        PolySymbol::var_x(3, Frame::Xk, j)
    }
}

/// Rewrite a symbol in `(z, z̄)` using `x = (z + z̄)/2`, `ξ = (z − z̄)/(2i)` (valid at `|ξ| = 1`).
pub fn to_z(f: &PolySymbol) -> PolySymbol {
    let half = Coeff::ratio(1, 2);
    let mhalf_i = &Coeff::gaussian(0, -1) * &half;
    let xs: Vec<_> = (0..3).map(|j| (&v(j, false) + &v(j, true)).scale(&half)).collect();
    let ks: Vec<_> = (0..3).map(|j| (&v(j, false) - &v(j, true)).scale(&mhalf_i)).collect();
    f.substitute(&xs, &ks)
}

/// Back-substitute `z = x + iξ`, `z̄ = x − iξ`.
pub fn from_z(zp: &PolySymbol) -> PolySymbol {
    let i = Coeff::i();
    let zs: Vec<_> = (0..3).map(|j| &v(j, false) + &v(j, true).scale(&i)).collect();
    let zbs: Vec<_> = (0..3).map(|j| &v(j, false) - &v(j, true).scale(&i)).collect();
    zp.substitute(&zs, &zbs)
}

/// Terms `z^β z̄^γ` with `|β| = |γ|`: the part invariant under `z ↦ e^{-it}z`.
pub fn balanced(zp: &PolySymbol) -> PolySymbol {
    zp.filter(|m, _| m.xdegree() == m.kdegree())
}

/// `z_j z̄_k = δ_jk − y_j y_k − i ε_jkl y_l` on the unit cosphere bundle, as a
/// polynomial in `y` (position slots).
fn pair(j: usize, k: usize) -> PolySymbol {
    let y = |a| v(a, false);
    let mut p = -&(&y(j) * &y(k));
    if j == k {
        p = &p + &PolySymbol::constant(3, Frame::Xk, Coeff::one());
    } else {
        let l = 3 - j - k;
        // ε_jkl = +1 for cyclic (j, k, l)
        let sign = if (j + 1) % 3 == k { 1 } else { -1 };
        p = &p + &y(l).scale(&Coeff::gaussian(0, -sign));
    }
    p
}

/// Map a balanced z-polynomial to a polynomial in `y = x × ξ`.
pub fn balanced_to_y(zp: &PolySymbol) -> PolySymbol {
    let pairs: Vec<Vec<PolySymbol>> = (0..3).map(|j| (0..3).map(|k| pair(j, k)).collect()).collect();
    let mut out = PolySymbol::zero(3, Frame::Xk);
    for (m, c) in zp.terms() {
        debug_assert_eq!(m.xdegree(), m.kdegree());
        let zi: Vec<usize> = (0..3).flat_map(|j| std::iter::repeat_n(j, m.xexp[j] as usize)).collect();
        let zbi: Vec<usize> = (0..3).flat_map(|j| std::iter::repeat_n(j, m.kexp[j] as usize)).collect();
        let mut t = PolySymbol::constant(3, Frame::Xk, c.clone());
        for (a, b) in zi.iter().zip(&zbi) {
            t = &t * &pairs[*a][*b];
        }
        out = &out + &t;
    }
    out
}

/// Repeatedly replace monomial `lead` by `repl` until no term is divisible by it.
pub fn rewrite(p: &PolySymbol, lead: &Monomial, repl: &PolySymbol) -> PolySymbol {
    let mut cur = p.clone();
    loop {
        let hit = cur.terms().keys().find(|m| lead.divides(m)).cloned();
        let Some(m) = hit else { return cur };
        let c = cur.coeff(&m);
        let q = lead.quotient_of(&m);
        let mut terms = cur.into_terms();
        terms.remove(&m);
        cur = PolySymbol::from_terms(p.n(), p.frame(), terms);
        let shifted = PolySymbol::from_terms(
            p.n(),
            p.frame(),
            repl.terms().iter().map(|(rm, rc)| (rm.mul(&q), rc * &c)),
        );
        cur = &cur + &shifted;
    }
}

/// Fewest-term representative among `p` and its rewrites by each rule.
pub fn simplest(p: &PolySymbol, rules: &[(Monomial, PolySymbol)]) -> PolySymbol {
    let mut best = p.clone();
    for (lead, repl) in rules {
        let cand = rewrite(p, lead, repl);
        if cand.len() < best.len() {
            best = cand;
        }
    }
    best
}

/// Rules `y_j² → 1 − Σ_{k≠j} y_k²`.
pub fn unit_sphere_rules() -> Vec<(Monomial, PolySymbol)> {
    (0..3)
        .map(|j| {
            let mut lead = Monomial::one(3);
            lead.xexp[j] = 2;
            let mut repl = PolySymbol::constant(3, Frame::Xk, Coeff::one());
            for k in (0..3).filter(|&k| k != j) {
                repl = &repl - &(&v(k, false) * &v(k, false));
            }
            (lead, repl)
        })
        .collect()
}

/// Rules `z_j z̄_j → 2 − Σ_{k≠j} z_k z̄_k`.
pub fn zbar_rules() -> Vec<(Monomial, PolySymbol)> {
    (0..3)
        .map(|j| {
            let mut lead = Monomial::one(3);
            lead.xexp[j] = 1;
            lead.kexp[j] = 1;
            let mut repl = PolySymbol::constant(3, Frame::Xk, Coeff::from_int(2));
            for k in (0..3).filter(|&k| k != j) {
                repl = &repl - &(&v(k, false) * &v(k, true));
            }
            (lead, repl)
        })
        .collect()
}

fn reverse_slots(p: &PolySymbol) -> PolySymbol {
    PolySymbol::from_terms(
        3,
        Frame::Xk,
        p.terms().iter().map(|(m, c)| {
            let mut r = m.clone();
            r.xexp.reverse();
            r.kexp.reverse();
            (r, c.clone())
        }),
    )
}

fn shell_z_basis() -> &'static [PolySymbol] {
    static BASIS: OnceLock<Vec<PolySymbol>> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut norm = PolySymbol::constant(3, Frame::Xk, Coeff::from_int(-2));
        let mut zz = PolySymbol::zero(3, Frame::Xk);
        let mut zbzb = PolySymbol::zero(3, Frame::Xk);
        for j in 0..3 {
            norm = &norm + &(&v(j, false) * &v(j, true));
            zz = &zz + &(&v(j, false) * &v(j, false));
            zbzb = &zbzb + &(&v(j, true) * &v(j, true));
        }
        groebner_basis(&[norm, zz, zbzb])
    })
}

/// Normal form of a z-polynomial modulo `z·z̄ = 2`, `z·z = z̄·z̄ = 0`, eliminating
/// `z₃` before `z₂` before `z₁` so that symbols in the first coordinate stay literal.
pub fn shell_normal_z(zp: &PolySymbol) -> PolySymbol {
    reverse_slots(&normal_form(&reverse_slots(zp), shell_z_basis()))
}
