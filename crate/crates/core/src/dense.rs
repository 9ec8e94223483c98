//! Dense Cholesky factorization for small symmetric positive-definite systems.

use crate::error::{Error, Result};

/// Lower-triangular factor `L` with `A = L Lᵀ`, stored row-major.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    factor: Vec<f64>,
}

impl Cholesky {
    /// Factors the row-major `n × n` matrix `a`. Only the lower triangle is read.
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix storage does not match dimension");
        for j in 0..n {
            let row_j = &a[j * n..j * n + j];
            let pivot = a[j * n + j] - row_j.iter().map(|x| x * x).sum::<f64>();
            if pivot.is_nan() || pivot <= 0.0 {
                return Err(Error::NotPositiveDefinite { row: j, pivot });
            }
            let diag = pivot.sqrt();
            a[j * n + j] = diag;

            let (upper, lower) = a.split_at_mut((j + 1) * n);
            let row_j = &upper[j * n..j * n + j];
            for row_i in lower.chunks_exact_mut(n) {
                let dot: f64 = row_i[..j].iter().zip(row_j).map(|(x, y)| x * y).sum();
                row_i[j] = (row_i[j] - dot) / diag;
            }
        }
        Ok(Cholesky { n, factor: a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let l = &self.factor;
        // forward: L y = b
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &l[i * n..i * n + i];
            let dot: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - dot) / l[i * n + i];
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat_vec(n: usize, a: &[f64], x: &[f64]) -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum()).collect()
    }

    #[test]
    fn solves_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 40] {
            let m: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
            // A = M Mᵀ + n I
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    a[i * n + j] = (0..n).map(|k| m[i * n + k] * m[j * n + k]).sum::<f64>();
                }
                a[i * n + i] += n as f64;
            }
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = Cholesky::factor(n, a.clone()).unwrap().solve(&b);
            let r = mat_vec(n, &a, &x);
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(matches!(
            Cholesky::factor(2, a),
            Err(Error::NotPositiveDefinite { row: 1, .. })
        ));
    }
}
