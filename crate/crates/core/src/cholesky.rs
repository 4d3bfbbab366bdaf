use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// stored row-major in packed full form.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factor the row-major `n × n` matrix `a`. Only the lower triangle is read.
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        for i in 0..n {
            let (done, rest) = a.split_at_mut(i * n);
            let row_i = &mut rest[..n];
            for j in 0..i {
                let row_j = &done[j * n..j * n + j + 1];
                let s: f64 = row_i[..j].iter().zip(&row_j[..j]).map(|(x, y)| x * y).sum();
                row_i[j] = (row_i[j] - s) / row_j[j];
            }
            let d = row_i[i] - row_i[..i].iter().map(|x| x * x).sum::<f64>();
            if d.is_nan() || d <= 0.0 {
                return Err(Error::NotPositiveDefinite { pivot: i, value: d });
            }
            row_i[i] = d.sqrt();
            for v in &mut row_i[i + 1..] {
                *v = 0.0;
            }
        }
        Ok(Cholesky { n, l: a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.l[i * self.n..i * self.n + i + 1]
    }

    /// Solve `L v = b` in place.
    pub fn forward_solve(&self, b: &mut [f64]) {
        for i in 0..self.n {
            let row = self.row(i);
            let s: f64 = row[..i].iter().zip(&b[..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - s) / row[i];
        }
    }

    /// Solve `Lᵀ v = b` in place.
    pub fn backward_solve(&self, b: &mut [f64]) {
        for i in (0..self.n).rev() {
            b[i] /= self.l[i * self.n + i];
            let bi = b[i];
            for (k, v) in b[..i].iter_mut().enumerate() {
                *v -= self.l[i * self.n + k] * bi;
            }
        }
    }

    /// Solve `A x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        self.forward_solve(b);
        self.backward_solve(b);
    }
}
