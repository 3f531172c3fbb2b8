use num_complex::Complex64;
use num_traits::Zero;

use crate::polyring::{rational_to_f64, Polynomial};

/// A polynomial with complex floating coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    nvars: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl ComplexPoly {
    pub fn zero(nvars: usize) -> Self {
        ComplexPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = ComplexPoly::zero(nvars);
        if c != Complex64::zero() {
            p.terms.push((c, vec![0; nvars]));
        }
        p
    }

    pub fn from_exact(p: &Polynomial) -> Self {
        ComplexPoly {
            nvars: p.nvars(),
            terms: p
                .terms()
                .iter()
                .map(|t| (Complex64::new(rational_to_f64(&t.coeff), 0.0), t.monomial.exponents().to_vec()))
                .collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ComplexPoly) -> ComplexPoly {
        let mut terms = self.terms.clone();
        for (c, e) in &other.terms {
            match terms.iter_mut().find(|(_, f)| f == e) {
                Some(slot) => slot.0 += c,
                None => terms.push((*c, e.clone())),
            }
        }
        terms.retain(|(c, _)| *c != Complex64::zero());
        ComplexPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn differentiate(&self, index: usize) -> ComplexPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[index] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[index] -= 1;
                (c * e[index] as f64, e2)
            })
            .collect();
        ComplexPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Evaluates on the first `nvars` entries of `point`.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (c, e) in &self.terms {
            let mut t = *c;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= x.powu(k);
                }
            }
            acc += t;
        }
        acc
    }
}
