#![allow(dead_code)]

use num_complex::Complex64;
use orbitavg::symbolalg::{parse_poly, Frame};
use orbitavg::{Coeff, Monomial, PolySymbol};
use rand::Rng;

pub fn p(s: &str, n: usize) -> PolySymbol {
    parse_poly(s, Some(n), Some(Frame::Xk)).unwrap()
}

/// Exponent vectors `(a, b)` with `|a| + |b| = d` in `n` degrees of freedom.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(slots: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=d {
            cur.push(e);
            rec(slots - 1, d - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(2 * n, d, &mut Vec::new(), &mut out);
    out.into_iter().map(|e| Monomial::new(e[..n].to_vec(), e[n..].to_vec())).collect()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Coeff {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-6..=6);
    }
    Coeff::ratio(num, rng.gen_range(1..=5))
}

/// Random real polynomial with rational coefficients, homogeneous of degree `d`,
/// using each monomial with probability `density`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, n: usize, d: u32, density: f64) -> PolySymbol {
    let mut out = PolySymbol::zero(n, Frame::Xk);
    for m in monomials_of_degree(n, d) {
        if rng.gen_bool(density) {
            out.add_term(m, random_rational(rng));
        }
    }
    if out.is_zero() {
        let ms = monomials_of_degree(n, d);
        let m = ms[rng.gen_range(0..ms.len())].clone();
        out.add_term(m, random_rational(rng));
    }
    out
}

/// `f ∘ exp(tH_p)` for `p = Σ λ_j(x_j² + ξ_j²)/2`, computed by substitution.
pub fn compose_with_flow(f: &PolySymbol, lambda: &[i64], t: f64) -> PolySymbol {
    let n = f.n();
    let c = |z: f64| Coeff::float(Complex64::new(z, 0.0));
    let x = |j| PolySymbol::var_x(n, Frame::Xk, j);
    let k = |j| PolySymbol::var_k(n, Frame::Xk, j);
    let xs: Vec<_> = (0..n)
        .map(|j| {
            let (s, co) = (lambda[j] as f64 * t).sin_cos();
            &x(j).scale(&c(co)) + &k(j).scale(&c(s))
        })
        .collect();
    let ks: Vec<_> = (0..n)
        .map(|j| {
            let (s, co) = (lambda[j] as f64 * t).sin_cos();
            &k(j).scale(&c(co)) - &x(j).scale(&c(s))
        })
        .collect();
    f.to_float().substitute(&xs, &ks)
}

pub fn period(lambda: &[i64]) -> f64 {
    let g = lambda.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
    2.0 * std::f64::consts::PI / g as f64
}

/// `(1/T)∫₀ᵀ w(u) f∘exp(uH_p) du` by the trapezoid rule with `nodes` points (exact
/// for trigonometric polynomials of order below `nodes` when `w ≡ 1`).
pub fn flow_quadrature<W: Fn(f64) -> f64>(f: &PolySymbol, lambda: &[i64], nodes: usize, w: W) -> PolySymbol {
    let t = period(lambda);
    let mut acc = PolySymbol::zero(f.n(), Frame::Xk).to_float();
    for i in 0..nodes {
        let u = t * i as f64 / nodes as f64;
        acc = &acc + &compose_with_flow(f, lambda, u).scale(&Coeff::float(Complex64::new(w(u) / nodes as f64, 0.0)));
    }
    acc
}

/// `(1/T)∫₀ᵀ u·F(u) du` for `F(u) = f∘exp(uH_p)` by composite Simpson with `panels` panels.
pub fn flow_moment(f: &PolySymbol, lambda: &[i64], panels: usize) -> PolySymbol {
    let t = period(lambda);
    let h = t / panels as f64;
    let mut acc = PolySymbol::zero(f.n(), Frame::Xk).to_float();
    for i in 0..=panels {
        let u = h * i as f64;
        let wt = if i == 0 || i == panels { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let c = wt * h / 3.0 * u / t;
        acc = &acc + &compose_with_flow(f, lambda, u).scale(&Coeff::float(Complex64::new(c, 0.0)));
    }
    acc
}
