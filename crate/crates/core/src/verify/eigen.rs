//! Dense complex eigenvalues: balancing, Householder reduction to Hessenberg
//! form, and single-shift complex QR with deflation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4096;
const RADIX: f64 = 2.0;

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

struct Dense<'a> {
    n: usize,
    a: &'a mut [Complex64],
}

impl Dense<'_> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i + j * self.n]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i + j * self.n] = v;
    }
}

/// Diagonal similarity by powers of two equalizing row and column norms.
fn balance(m: &mut Dense) {
    let n = m.n;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += cabs1(m.at(j, i));
                    r += cabs1(m.at(i, j));
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    let v = m.at(i, j) / f;
                    m.set(i, j, v);
                }
                for j in 0..n {
                    let v = m.at(j, i) * f;
                    m.set(j, i, v);
                }
            }
        }
        if done {
            return;
        }
    }
}

/// Householder reduction to upper Hessenberg form by unitary similarity.
fn hessenberg(m: &mut Dense) {
    let n = m.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::default(); n];
    let mut w = vec![Complex64::default(); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let tail: f64 = (k + 2..n).map(|i| m.at(i, k).norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = m.at(k + 1, k);
        let alpha = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        for p in 0..len {
            v[p] = m.at(k + 1 + p, k);
        }
        v[0] += phase * alpha;
        let vn2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vn2;
        // left: rows k+1.., columns k..
        for j in k..n {
            let col = &mut m.a[j * n + k + 1..j * n + n];
            let s: Complex64 = v[..len].iter().zip(col.iter()).map(|(vi, a)| vi.conj() * a).sum();
            let s = s * beta;
            for (a, vi) in col.iter_mut().zip(&v[..len]) {
                *a -= vi * s;
            }
        }
        // right: all rows, columns k+1..
        w.iter_mut().for_each(|z| *z = Complex64::default());
        for p in 0..len {
            let col = &m.a[(k + 1 + p) * n..(k + 2 + p) * n];
            let vp = v[p];
            for (wi, a) in w.iter_mut().zip(col) {
                *wi += a * vp;
            }
        }
        for p in 0..len {
            let f = w.iter().map(|wi| wi * v[p].conj() * beta);
            let col = &mut m.a[(k + 1 + p) * n..(k + 2 + p) * n];
            for (a, d) in col.iter_mut().zip(f) {
                *a -= d;
            }
        }
        m.set(k + 1, k, -phase * alpha);
        for i in k + 2..n {
            m.set(i, k, Complex64::default());
        }
    }
}

fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    if y == Complex64::default() {
        return (1.0, Complex64::default(), x);
    }
    if x == Complex64::default() {
        return (0.0, y.conj() / y.norm(), Complex64::new(y.norm(), 0.0));
    }
    let (ax, ay) = (x.norm(), y.norm());
    let norm = ax.hypot(ay);
    let phase = x / ax;
    (ax / norm, phase * y.conj() / norm, phase * norm)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let (l1, l2) = ((a + d) * 0.5 + disc, (a + d) * 0.5 - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed).
fn hessenberg_qr(m: &mut Dense) -> Result<Vec<Complex64>> {
    let n = m.n;
    let mut eig = Vec::with_capacity(n);
    let norm = m.a.iter().map(|z| cabs1(*z)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let cap = 30 * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n as isize - 1;
    while hi >= 0 {
        let h = hi as usize;
        let mut l = h;
        while l > 0 {
            let s = cabs1(m.at(l, l - 1));
            let mut tst = cabs1(m.at(l - 1, l - 1)) + cabs1(m.at(l, l));
            if tst == 0.0 {
                tst = norm;
            }
            if s <= f64::EPSILON * tst {
                m.set(l, l - 1, Complex64::default());
                break;
            }
            l -= 1;
        }
        if l == h {
            eig.push(m.at(h, h));
            hi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > cap {
            return Err(Error::QrNoConvergence { lo: l, hi: h, iterations: total });
        }
        let mu = if its.is_multiple_of(10) {
            // exceptional shift
            m.at(h, h) + Complex64::new(0.75 * cabs1(m.at(h, h - 1)), 0.0)
        } else {
            wilkinson(m.at(h - 1, h - 1), m.at(h - 1, h), m.at(h, h - 1), m.at(h, h))
        };
        let mut x = m.at(l, l) - mu;
        let mut y = m.at(l + 1, l);
        for k in l..h {
            if k > l {
                x = m.at(k, k - 1);
                y = m.at(k + 1, k - 1);
            }
            let (c, s, r) = givens(x, y);
            if k > l {
                m.set(k, k - 1, r);
                m.set(k + 1, k - 1, Complex64::default());
            }
            for j in k..=h {
                let (a, b) = (m.at(k, j), m.at(k + 1, j));
                m.set(k, j, a * c + s * b);
                m.set(k + 1, j, -s.conj() * a + b * c);
            }
            for i in l..=(k + 2).min(h) {
                let (a, b) = (m.at(i, k), m.at(i, k + 1));
                m.set(i, k, a * c + s.conj() * b);
                m.set(i, k + 1, -s * a + b * c);
            }
        }
    }
    Ok(eig)
}

/// All eigenvalues of a dense complex matrix, sorted by real then imaginary part.
pub fn eigensolve(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.ncols() });
    }
    if n > MAX_DIM {
        return Err(Error::Precondition(format!("dimension {n} exceeds the dense guard {MAX_DIM}")));
    }
    let mut work = a.clone();
    let mut m = Dense { n, a: work.as_mut_slice() };
    if m.a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    balance(&mut m);
    hessenberg(&mut m);
    let mut eig = hessenberg_qr(&mut m)?;
    sort_eigenvalues(&mut eig);
    Ok(eig)
}

pub fn sort_eigenvalues(eig: &mut [Complex64]) {
    eig.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
}

/// Upper estimate of the smallest singular value of `A − zI`: `‖(A − zI)v‖` for the
/// vector `v` produced by inverse iteration with `(A − zI)⁻¹(A − zI)⁻ᴴ`.
pub fn residual_probe(a: &DMatrix<Complex64>, z: Complex64, seed: u64) -> f64 {
    let n = a.nrows();
    let b = a - DMatrix::<Complex64>::identity(n, n) * z;
    let lu = b.clone().lu();
    let luh = b.adjoint().lu();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = nalgebra::DVector::<Complex64>::from_fn(n, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    for _ in 0..4 {
        let Some(y) = luh.solve(&x) else { return 0.0 };
        let Some(v) = lu.solve(&y) else { return 0.0 };
        let nv = v.norm();
        if nv == 0.0 || !nv.is_finite() {
            return 0.0;
        }
        x = v / Complex64::new(nv, 0.0);
    }
    (&b * &x).norm()
}
