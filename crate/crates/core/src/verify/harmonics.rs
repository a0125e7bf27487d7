//! Real spherical harmonics and the matrices of the coordinate functions.
//!
//! Complex harmonics carry the Condon–Shortley phase. The real basis is
//! `Y_{l,m} = √2 N P_l^m cos mφ` (m > 0), `N P_l^0` (m = 0), `√2 N P_l^{|m|} sin |m|φ` (m < 0),
//! ordered by degree and then `m = −l..l`.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Index range of a truncated basis `l ∈ [lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Basis {
    pub lo: u32,
    pub hi: u32,
}

impl Basis {
    pub fn new(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi);
        Basis { lo, hi }
    }

    pub fn dim(&self) -> usize {
        ((self.hi + 1) * (self.hi + 1) - self.lo * self.lo) as usize
    }

    pub fn index(&self, l: u32, m: i64) -> usize {
        (l * l - self.lo * self.lo) as usize + (m + l as i64) as usize
    }

    pub fn label(&self, i: usize) -> (u32, i64) {
        let mut l = self.lo;
        let mut start = 0usize;
        loop {
            let size = 2 * l as usize + 1;
            if i < start + size {
                return (l, i as i64 - start as i64 - l as i64);
            }
            start += size;
            l += 1;
        }
    }

    pub fn contains(&self, l: i64) -> bool {
        l >= self.lo as i64 && l <= self.hi as i64
    }
}

/// Sparse square matrix stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Sparse {
    pub n: usize,
    pub rows: Vec<BTreeMap<usize, Complex64>>,
}

impl Sparse {
    pub fn zero(n: usize) -> Self {
        Sparse { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = Sparse::zero(n);
        for i in 0..n {
            s.rows[i].insert(i, Complex64::new(1.0, 0.0));
        }
        s
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        *self.rows[i].entry(j).or_insert(Complex64::new(0.0, 0.0)) += v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i].get(&j).copied().unwrap_or_default()
    }

    pub fn mul(&self, o: &Sparse) -> Sparse {
        let mut out = Sparse::zero(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (&k, &a) in row {
                for (&j, &b) in &o.rows[k] {
                    out.add_to(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn axpy(&mut self, c: Complex64, o: &Sparse) {
        for (i, row) in o.rows.iter().enumerate() {
            for (&j, &v) in row {
                self.add_to(i, j, c * v);
            }
        }
    }

    /// Restriction to the index set `idx` (in the given order).
    pub fn restrict(&self, idx: &[usize]) -> Vec<Vec<Complex64>> {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        idx.iter()
            .map(|&i| {
                let mut r = vec![Complex64::default(); idx.len()];
                for (j, v) in &self.rows[i] {
                    if let Some(&b) = pos.get(j) {
                        r[b] = *v;
                    }
                }
                r
            })
            .collect()
    }
}

fn a3(l: i64, m: i64) -> f64 {
    // ⟨Y_{l+1}^m | x₃ | Y_l^m⟩
    (((l + 1) * (l + 1) - m * m) as f64 / ((2 * l + 1) * (2 * l + 3)) as f64).sqrt()
}

fn bp(l: i64, m: i64) -> f64 {
    (((l + m + 1) * (l + m + 2)) as f64 / ((2 * l + 1) * (2 * l + 3)) as f64).sqrt()
}

/// Matrix elements `⟨Y_{l'}^{m'} | x_j | Y_l^m⟩` in the complex basis, for j = 0, 1, 2.
fn complex_coordinate(basis: Basis, j: usize) -> Sparse {
    let n = basis.dim();
    let mut out = Sparse::zero(n);
    let i = Complex64::i();
    for l in basis.lo as i64..=basis.hi as i64 {
        for m in -l..=l {
            let col = basis.index(l as u32, m);
            let mut put = |l2: i64, m2: i64, v: Complex64| {
                if basis.contains(l2) && m2.abs() <= l2 && v != Complex64::default() {
                    out.add_to(basis.index(l2 as u32, m2), col, v);
                }
            };
            match j {
                2 => {
                    put(l + 1, m, a3(l, m).into());
                    if l > 0 {
                        put(l - 1, m, a3(l - 1, m).into());
                    }
                }
                _ => {
                    // x± Y_l^m = ∓b(l, ±m) Y_{l+1}^{m±1} ± b(l−1, ∓m−1) Y_{l−1}^{m±1}
                    let plus_up = -bp(l, m);
                    let plus_down = if l > 0 && (m + 1).abs() < l { bp(l - 1, -m - 1) } else { 0.0 };
                    let minus_up = bp(l, -m);
                    let minus_down = if l > 0 && (m - 1).abs() < l { -bp(l - 1, m - 1) } else { 0.0 };
                    // x₁ = (x₊ + x₋)/2, x₂ = (x₊ − x₋)/(2i)
                    let (cp, cm) = if j == 0 {
                        (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))
                    } else {
                        (-0.5 * i, 0.5 * i)
                    };
                    put(l + 1, m + 1, cp * plus_up);
                    put(l - 1, m + 1, cp * plus_down);
                    put(l + 1, m - 1, cm * minus_up);
                    put(l - 1, m - 1, cm * minus_down);
                }
            }
        }
    }
    out
}

/// Rows of the unitary `U` with `Y_real = U Y_complex`.
fn real_from_complex(basis: Basis) -> Sparse {
    let n = basis.dim();
    let mut u = Sparse::zero(n);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for l in basis.lo..=basis.hi {
        for m in -(l as i64)..=l as i64 {
            let row = basis.index(l, m);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            if m == 0 {
                u.add_to(row, row, Complex64::new(1.0, 0.0));
            } else if m > 0 {
                u.add_to(row, basis.index(l, -m), Complex64::new(r, 0.0));
                u.add_to(row, basis.index(l, m), Complex64::new(sign * r, 0.0));
            } else {
                u.add_to(row, basis.index(l, m), Complex64::new(0.0, r));
                u.add_to(row, basis.index(l, -m), Complex64::new(0.0, -sign * r));
            }
        }
    }
    u
}

/// Matrix of multiplication by `x_j` (j = 0, 1, 2) in the real basis; real symmetric.
pub fn coordinate_matrix(basis: Basis, j: usize) -> Sparse {
    let xc = complex_coordinate(basis, j);
    let u = real_from_complex(basis);
    let n = basis.dim();
    // X_real = conj(U) X_c Uᵀ
    let mut ucols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for (b, row) in u.rows.iter().enumerate() {
        for (&q, &v) in row {
            ucols[q].push((b, v));
        }
    }
    let mut out = Sparse::zero(n);
    for (a, urow) in u.rows.iter().enumerate() {
        for (&p, &ua) in urow {
            for (&q, &x) in &xc.rows[p] {
                for &(b, ub) in &ucols[q] {
                    out.add_to(a, b, ua.conj() * x * ub);
                }
            }
        }
    }
    for row in &mut out.rows {
        row.retain(|_, v| {
            debug_assert!(v.im.abs() < 1e-13);
            v.re.abs() > 1e-15
        });
        for v in row.values_mut() {
            v.im = 0.0;
        }
    }
    out
}

/// Orthonormal real harmonic `Y_{l,m}` at `(cos θ, φ)`, evaluated from the normalized
/// associated Legendre recursion (independent of the coupling formulas).
pub fn real_harmonic(l: u32, m: i64, ct: f64, phi: f64) -> f64 {
    let ma = m.unsigned_abs() as u32;
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for k in 1..=ma {
        pmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * st;
    }
    let p = if l == ma {
        pmm
    } else {
        let mut p_prev = pmm;
        let mut p_cur = ((2 * ma + 3) as f64).sqrt() * ct * pmm;
        for ll in ma + 2..=l {
            let (lf, mf) = (ll as f64, ma as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let next = a * (ct * p_cur - b * p_prev);
            p_prev = p_cur;
            p_cur = next;
        }
        p_cur
    };
    match m.signum() {
        0 => p,
        1 => std::f64::consts::SQRT_2 * p * (ma as f64 * phi).cos(),
        _ => std::f64::consts::SQRT_2 * p * (ma as f64 * phi).sin(),
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_{S²} f` by a Gauss–Legendre × trapezoid product rule, exact for polynomials of degree `< 2n`.
pub fn sphere_quadrature<F: Fn(f64, f64) -> f64>(n: usize, f: F) -> f64 {
    let nphi = 2 * n + 2;
    let dphi = 2.0 * std::f64::consts::PI / nphi as f64;
    gauss_legendre(n)
        .iter()
        .map(|&(ct, w)| w * dphi * (0..nphi).map(|k| f(ct, k as f64 * dphi)).sum::<f64>())
        .sum()
}
