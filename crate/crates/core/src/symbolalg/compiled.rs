//! Flattened float form of a symbol for repeated numerical evaluation.

use num_complex::Complex64;

use super::poly::PolySymbol;

/// A symbol as a flat list of `(coefficient, exponents)` over the variables
/// `(x₁..x_n, ξ₁..ξ_n)`.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    maxdeg: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl CompiledPoly {
    pub fn new(p: &PolySymbol) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| (c.to_complex(), m.xexp.iter().chain(m.kexp.iter()).copied().collect()))
            .collect();
        CompiledPoly { nvars: 2 * p.n(), maxdeg: p.degree() as usize, terms }
    }

    /// Restrict to the first `k` variables (the rest must not appear).
    pub fn truncate_vars(mut self, k: usize) -> Self {
        for (_, e) in &mut self.terms {
            assert!(e[k..].iter().all(|&v| v == 0), "truncated variable appears in symbol");
            e.truncate(k);
        }
        self.nvars = k;
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, z: &[f64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut t = 1.0;
            for (v, &k) in z.iter().zip(e) {
                if k > 0 {
                    t *= v.powi(k as i32);
                }
            }
            acc += c * t;
        }
        acc
    }

    /// Real part of the value at a real point.
    pub fn eval_re(&self, z: &[f64]) -> f64 {
        self.eval(z).re
    }

    pub fn degree(&self) -> usize {
        self.maxdeg
    }

    /// Partial derivative in variable `v`.
    pub fn diff(&self, v: usize) -> CompiledPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[v] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[v] -= 1;
                (c * e[v] as f64, e2)
            })
            .collect();
        CompiledPoly { nvars: self.nvars, maxdeg: self.maxdeg.saturating_sub(1), terms }
    }

    pub fn gradient(&self) -> Vec<CompiledPoly> {
        (0..self.nvars).map(|v| self.diff(v)).collect()
    }
}
