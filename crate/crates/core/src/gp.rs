//! Exact Gaussian-process posterior through a dense Cholesky solve.
//!
//! With `A_N = K_N + σ_n² I` and `k_N(x)` the vector of covariances between
//! `x` and the training inputs,
//!
//! ```text
//! μ_N(x)  = k_N(x)ᵀ A_N⁻¹ y_N
//! σ_N²(x) = k(x, x) − k_N(x)ᵀ A_N⁻¹ k_N(x)
//! ```
//!
//! The variance is evaluated as `k(x,x) − ‖L⁻¹ k_N(x)‖²` where `A_N = L Lᵀ`.

use crate::cholesky::Cholesky;
use crate::error::{positive, Error, Result};
use crate::kernels::Kernel;

/// Training inputs (row-major, fixed dimension), optional outputs, and the
/// observation noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    inputs: Vec<f64>,
    outputs: Option<Vec<f64>>,
    noise_variance: f64,
}

impl TrainingSet {
    pub fn empty(dim: usize, noise_variance: f64) -> Result<Self> {
        positive("noise_variance", noise_variance)?;
        Ok(TrainingSet {
            dim,
            inputs: Vec::new(),
            outputs: None,
            noise_variance,
        })
    }

    pub fn new(points: &[Vec<f64>], noise_variance: f64) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        let mut set = TrainingSet::empty(dim, noise_variance)?;
        for p in points {
            set.push(p)?;
        }
        Ok(set)
    }

    /// One-dimensional inputs.
    pub fn from_scalars(xs: &[f64], noise_variance: f64) -> Result<Self> {
        let set = TrainingSet {
            dim: 1,
            inputs: xs.to_vec(),
            outputs: None,
            noise_variance: positive("noise_variance", noise_variance)?,
        };
        set.check_finite()?;
        Ok(set)
    }

    pub fn with_outputs(mut self, ys: Vec<f64>) -> Result<Self> {
        if ys.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: ys.len(),
            });
        }
        self.outputs = Some(ys);
        Ok(self)
    }

    fn check_finite(&self) -> Result<()> {
        match self.inputs.iter().find(|v| !v.is_finite()) {
            Some(&v) => Err(Error::InvalidParameter {
                name: "inputs",
                value: v,
                reason: "training inputs must be finite",
            }),
            None => Ok(()),
        }
    }

    /// Append one input (outputs, if present, are dropped).
    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        if let Some(&v) = point.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "inputs",
                value: v,
                reason: "training inputs must be finite",
            });
        }
        self.inputs.extend_from_slice(point);
        self.outputs = None;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.inputs.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.inputs.chunks_exact(self.dim.max(1))
    }

    pub fn outputs(&self) -> Option<&[f64]> {
        self.outputs.as_deref()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// The Gram matrix `K_N` (row-major).
    pub fn gram(&self, kernel: &Kernel) -> Vec<f64> {
        let n = self.len();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = kernel.eval(self.point(i), self.point(j));
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        k
    }
}

/// A training set with its data covariance matrix factored once; queries at
/// many test points reuse the factorization. Shareable across threads.
#[derive(Debug, Clone)]
pub struct Posterior<'a> {
    kernel: &'a Kernel,
    train: &'a TrainingSet,
    factor: Cholesky,
    weights: Option<Vec<f64>>,
}

impl<'a> Posterior<'a> {
    pub fn new(kernel: &'a Kernel, train: &'a TrainingSet) -> Result<Self> {
        let n = train.len();
        let mut a = train.gram(kernel);
        for i in 0..n {
            a[i * n + i] += train.noise_variance();
        }
        let factor = Cholesky::factor(a, n)?;
        let weights = train.outputs().map(|y| {
            let mut w = y.to_vec();
            factor.solve(&mut w);
            w
        });
        Ok(Posterior {
            kernel,
            train,
            factor,
            weights,
        })
    }

    fn cross(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.train.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.train.dim(),
                got: x.len(),
            });
        }
        Ok(self
            .train
            .points()
            .map(|p| self.kernel.eval(x, p))
            .collect())
    }

    /// `σ_N²(x)`, clamped at zero against rounding.
    pub fn variance(&self, x: &[f64]) -> Result<f64> {
        let prior = self.kernel.prior_variance(x);
        if self.train.is_empty() {
            return Ok(prior);
        }
        let mut v = self.cross(x)?;
        self.factor.forward_solve(&mut v);
        let explained: f64 = v.iter().map(|t| t * t).sum();
        Ok((prior - explained).max(0.0))
    }

    /// `μ_N(x)`; zero prior mean.
    pub fn mean(&self, x: &[f64]) -> Result<f64> {
        let w = self.weights.as_ref().ok_or(Error::MissingOutputs)?;
        let k = self.cross(x)?;
        Ok(k.iter().zip(w).map(|(a, b)| a * b).sum())
    }

    pub fn variances<'p, I>(&self, xs: I) -> Result<Vec<f64>>
    where
        I: IntoIterator<Item = &'p [f64]>,
    {
        xs.into_iter().map(|x| self.variance(x)).collect()
    }
}

/// Exact posterior variance at `x`. `N = 0` gives the prior variance.
pub fn posterior_variance(train: &TrainingSet, kernel: &Kernel, x: &[f64]) -> Result<f64> {
    if train.is_empty() {
        return Ok(kernel.prior_variance(x));
    }
    Posterior::new(kernel, train)?.variance(x)
}

/// Exact posterior mean at `x`. `N = 0` gives the zero prior mean.
pub fn posterior_mean(train: &TrainingSet, kernel: &Kernel, x: &[f64]) -> Result<f64> {
    if train.is_empty() {
        return Ok(0.0);
    }
    Posterior::new(kernel, train)?.mean(x)
}
