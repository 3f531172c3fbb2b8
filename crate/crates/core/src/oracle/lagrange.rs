use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use crate::germs::{FormCollection, VarietyGerm};

use super::numeric::ComplexPoly;

/// A 1-form with complex polynomial coefficients.
pub type NumericForm = Vec<ComplexPoly>;

pub fn numeric_collection(c: &FormCollection) -> Vec<Vec<NumericForm>> {
    c.blocks()
        .iter()
        .map(|b| {
            b.iter()
                .map(|w| w.coefficients().iter().map(ComplexPoly::from_exact).collect())
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
struct BlockData {
    forms: Vec<NumericForm>,
    /// `forms[j][m]` differentiated by `x_p`, indexed `[j][m][p]`.
    form_jac: Vec<Vec<Vec<ComplexPoly>>>,
    chart: Vec<i64>,
    pivot: usize,
    /// Offset of this block's free multipliers in the unknown vector.
    lambda_offset: usize,
    mu_offset: usize,
}

impl BlockData {
    fn free_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.forms.len()).filter(move |&j| j != self.pivot)
    }
}

/// The square system whose solutions are the special points of a
/// collection on the smooth part of `X`, together with their
/// dependence coefficients:
///
/// `f_r(x) = 0` and, for each block, `sum_j λ_j ω_j(x) + sum_r μ_r df_r(x) = 0`,
/// where the projective tuple `λ` is normalized by a random affine chart
/// `sum_j c_j λ_j = 1`.
#[derive(Clone, Debug)]
pub struct LagrangeSystem {
    nvars: usize,
    equations: Vec<ComplexPoly>,
    eq_grad: Vec<Vec<ComplexPoly>>,
    eq_hess: Vec<Vec<Vec<ComplexPoly>>>,
    blocks: Vec<BlockData>,
    unknowns: usize,
}

impl LagrangeSystem {
    /// Builds the system for an exact collection.
    pub fn build(germ: &VarietyGerm, collection: &FormCollection, chart_seed: u64) -> Self {
        let mut rng = crate::obstruction::trial_rng(chart_seed, 0x0063_6861_7274);
        LagrangeSystem::from_numeric(germ, numeric_collection(collection), &mut rng)
    }

    pub fn from_numeric<R: Rng>(germ: &VarietyGerm, blocks: Vec<Vec<NumericForm>>, chart_rng: &mut R) -> Self {
        let n = germ.nvars();
        let equations: Vec<ComplexPoly> = germ.equations().iter().map(ComplexPoly::from_exact).collect();
        let eq_grad: Vec<Vec<ComplexPoly>> = equations
            .iter()
            .map(|f| (0..n).map(|m| f.differentiate(m)).collect())
            .collect();
        let eq_hess = eq_grad
            .iter()
            .map(|g| g.iter().map(|gm| (0..n).map(|p| gm.differentiate(p)).collect()).collect())
            .collect();
        let codim = equations.len();
        let mut offset = n;
        let blocks = blocks
            .into_iter()
            .map(|forms| {
                let chart: Vec<i64> = (0..forms.len())
                    .map(|_| loop {
                        let c = chart_rng.gen_range(-5i64..=5);
                        if c != 0 {
                            break c;
                        }
                    })
                    .collect();
                let form_jac = forms
                    .iter()
                    .map(|w| w.iter().map(|a| (0..n).map(|p| a.differentiate(p)).collect()).collect())
                    .collect();
                let lambda_offset = offset;
                let mu_offset = lambda_offset + forms.len() - 1;
                offset = mu_offset + codim;
                BlockData {
                    forms,
                    form_jac,
                    chart,
                    pivot: 0,
                    lambda_offset,
                    mu_offset,
                }
            })
            .collect();
        LagrangeSystem {
            nvars: n,
            equations,
            eq_grad,
            eq_hess,
            blocks,
            unknowns: offset,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len() + self.blocks.len() * self.nvars
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Product of the equation degrees in all unknowns.
    pub fn bezout_bound(&self) -> u64 {
        let mut bound: u64 = 1;
        for f in &self.equations {
            bound = bound.saturating_mul(f.degree().max(1) as u64);
        }
        for b in &self.blocks {
            let multiplier_degree = u32::from(b.forms.len() > 1);
            let form_deg = b
                .forms
                .iter()
                .flat_map(|w| w.iter().map(ComplexPoly::degree))
                .max()
                .unwrap_or(0)
                + multiplier_degree;
            let jac_deg = self.equations.iter().map(|f| f.degree()).max().unwrap_or(0);
            let d = form_deg.max(jac_deg).max(1) as u64;
            for _ in 0..self.nvars {
                bound = bound.saturating_mul(d);
            }
        }
        bound
    }

    /// Affine chart coefficients `c` of block `i`.
    pub fn chart(&self, i: usize) -> &[i64] {
        &self.blocks[i].chart
    }

    /// The full multiplier tuple of block `i`, chart pivot included.
    pub fn lambdas(&self, z: &[Complex64], i: usize) -> Vec<Complex64> {
        let b = &self.blocks[i];
        let mut out = vec![Complex64::zero(); b.forms.len()];
        let mut rest = Complex64::new(1.0, 0.0);
        for (k, j) in b.free_indices().enumerate() {
            out[j] = z[b.lambda_offset + k];
            rest -= out[j] * b.chart[j] as f64;
        }
        out[b.pivot] = rest / b.chart[b.pivot] as f64;
        out
    }

    /// Random starting point: `x` uniform in the polydisk of the given
    /// radius, multipliers uniform in the unit polydisk.
    pub fn random_start<R: Rng>(&self, radius: f64, rng: &mut R) -> Vec<Complex64> {
        let mut disk = |r: f64| {
            let rho = r * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(rho, theta)
        };
        (0..self.unknowns)
            .map(|k| if k < self.nvars { disk(radius) } else { disk(1.0) })
            .collect()
    }

    pub fn residual(&self, z: &[Complex64]) -> DVector<Complex64> {
        let x = &z[..self.nvars];
        let mut out = Vec::with_capacity(self.equation_count());
        out.extend(self.equations.iter().map(|f| f.eval(x)));
        for (i, b) in self.blocks.iter().enumerate() {
            let lambda = self.lambdas(z, i);
            for m in 0..self.nvars {
                let mut e = Complex64::zero();
                for (j, w) in b.forms.iter().enumerate() {
                    e += lambda[j] * w[m].eval(x);
                }
                for (r, g) in self.eq_grad.iter().enumerate() {
                    e += z[b.mu_offset + r] * g[m].eval(x);
                }
                out.push(e);
            }
        }
        DVector::from_vec(out)
    }

    pub fn jacobian(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.nvars;
        let x = &z[..n];
        let mut jac = DMatrix::zeros(self.equation_count(), self.unknowns);
        for (r, g) in self.eq_grad.iter().enumerate() {
            for p in 0..n {
                jac[(r, p)] = g[p].eval(x);
            }
        }
        let grads: Vec<Vec<Complex64>> = self
            .eq_grad
            .iter()
            .map(|g| g.iter().map(|gm| gm.eval(x)).collect())
            .collect();
        let mut row = self.equations.len();
        for (i, b) in self.blocks.iter().enumerate() {
            let lambda = self.lambdas(z, i);
            let values: Vec<Vec<Complex64>> = b.forms.iter().map(|w| w.iter().map(|a| a.eval(x)).collect()).collect();
            for m in 0..n {
                for p in 0..n {
                    let mut d = Complex64::zero();
                    for (j, lam) in lambda.iter().enumerate() {
                        d += lam * b.form_jac[j][m][p].eval(x);
                    }
                    for (r, h) in self.eq_hess.iter().enumerate() {
                        d += z[b.mu_offset + r] * h[m][p].eval(x);
                    }
                    jac[(row, p)] = d;
                }
                let ratio_base = b.chart[b.pivot] as f64;
                for (k, j) in b.free_indices().enumerate() {
                    let c = b.chart[j] as f64 / ratio_base;
                    jac[(row, b.lambda_offset + k)] = values[j][m] - values[b.pivot][m] * c;
                }
                for r in 0..self.equations.len() {
                    jac[(row, b.mu_offset + r)] = grads[r][m];
                }
                row += 1;
            }
        }
        jac
    }

    /// Jacobian of the equations of `X` at `x`.
    pub fn equation_jacobian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let mut jac = DMatrix::zeros(self.equations.len(), self.nvars);
        for (r, g) in self.eq_grad.iter().enumerate() {
            for p in 0..self.nvars {
                jac[(r, p)] = g[p].eval(x);
            }
        }
        jac
    }

    /// Degeneracy matrix of block `i` evaluated at `x`: Jacobian rows, then
    /// the block's forms.
    pub fn degeneracy_matrix(&self, x: &[Complex64], i: usize) -> DMatrix<Complex64> {
        let b = &self.blocks[i];
        let rows = self.equations.len() + b.forms.len();
        let mut m = DMatrix::zeros(rows, self.nvars);
        for (r, g) in self.eq_grad.iter().enumerate() {
            for p in 0..self.nvars {
                m[(r, p)] = g[p].eval(x);
            }
        }
        for (j, w) in b.forms.iter().enumerate() {
            for p in 0..self.nvars {
                m[(self.equations.len() + j, p)] = w[p].eval(x);
            }
        }
        m
    }

    /// One Newton step in place; `None` when the Jacobian is singular.
    pub fn newton_step(&self, z: &mut [Complex64]) -> Option<f64> {
        let f = self.residual(z);
        let j = self.jacobian(z);
        let dz = j.lu().solve(&f)?;
        let mut size: f64 = 0.0;
        for (zi, di) in z.iter_mut().zip(dz.iter()) {
            *zi -= di;
            size = size.max(di.norm());
        }
        Some(size)
    }

    /// Max-norm of the residual.
    pub fn residual_norm(&self, z: &[Complex64]) -> f64 {
        self.residual(z).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
