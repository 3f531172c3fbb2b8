use std::fmt;

use super::Polynomial;

/// A polynomial 1-form `sum_m a_m dx_m` on `C^N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OneForm {
    coefficients: Vec<Polynomial>,
}

impl OneForm {
    pub fn new(coefficients: Vec<Polynomial>) -> Self {
        if let Some(first) = coefficients.first() {
            let n = first.nvars();
            assert!(
                coefficients.iter().all(|c| c.nvars() == n),
                "1-form coefficients must share a variable count"
            );
            assert_eq!(n, coefficients.len(), "1-form needs one coefficient per variable");
        }
        OneForm { coefficients }
    }

    pub fn zero(nvars: usize) -> Self {
        OneForm::new(vec![Polynomial::zero(nvars); nvars])
    }

    /// `dx_index`.
    pub fn coordinate(nvars: usize, index: usize) -> Self {
        let mut c = vec![Polynomial::zero(nvars); nvars];
        c[index] = Polynomial::one(nvars);
        OneForm::new(c)
    }

    /// The differential `df`.
    pub fn differential(f: &Polynomial) -> Self {
        OneForm::new((0..f.nvars()).map(|m| f.differentiate(m)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn coefficient(&self, m: usize) -> &Polynomial {
        &self.coefficients[m]
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_constant)
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm::new(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `h * self` for a function `h`.
    pub fn times(&self, h: &Polynomial) -> OneForm {
        OneForm::new(self.coefficients.iter().map(|a| a * h).collect())
    }

    pub fn substitute(&self, images: &[Polynomial]) -> OneForm {
        OneForm::new(self.coefficients.iter().map(|a| a.substitute(images)).collect())
    }

    /// Pullback along the map `x_i -> images[i]`: `sum a_i(images) d(images_i)`.
    pub fn pullback(&self, images: &[Polynomial]) -> OneForm {
        let n = images.first().map(Polynomial::nvars).unwrap_or(0);
        self.coefficients
            .iter()
            .zip(images)
            .fold(OneForm::zero(n), |acc, (a, phi)| {
                acc.add(&OneForm::differential(phi).times(&a.substitute(images)))
            })
    }

    /// Renders in the 1-form grammar: `dx`, `3*x*dx`, or `(p)*dx` when the
    /// coefficient has several terms, with negative monomial terms written
    /// as subtractions.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, name) in self.coefficients.iter().zip(names).filter(|(c, _)| !c.is_zero()) {
            let term = if *c == Polynomial::one(c.nvars()) {
                format!("d{name}")
            } else if *c == -Polynomial::one(c.nvars()) {
                format!("-d{name}")
            } else if c.len() == 1 {
                format!("{}*d{name}", c.render(names))
            } else {
                format!("({})*d{name}", c.render(names))
            };
            match (out.is_empty(), term.strip_prefix('-')) {
                (true, _) => out = term,
                (false, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (false, None) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
            }
        }
        if out.is_empty() {
            // The grammar has no literal zero form; write it as a zero multiple.
            format!("0*d{}", names[0])
        } else {
            out
        }
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coefficients.iter()).finish()
    }
}
