//! Dense complex matrices just large enough for irrep blocks and small-n
//! circuit unitaries.

use num_complex::Complex64;

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(dim: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), dim * dim);
        Self {
            dim,
            data: rows.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMat {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMat {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dagger(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn commutator(&self, other: &CMat) -> CMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value by power iteration on `A†A`.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.dim;
        if n == 0 {
            return 0.0;
        }
        let gram = self.dagger().mul(self);
        // Structureless deterministic start vector; a symmetric one (e.g.
        // all-ones) can sit exactly in the kernel of differences of
        // permutation matrices.
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let a = ((i as u64).wrapping_mul(2654435761) % 1000) as f64 / 1000.0 + 0.05;
                let b = ((i as u64).wrapping_mul(40503) % 997) as f64 / 997.0 - 0.5;
                Complex64::new(a, b)
            })
            .collect();
        let mut lambda = 0.0_f64;
        for _ in 0..200 {
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                for j in 0..n {
                    w[i] += gram[(i, j)] * v[j];
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return 0.0;
            }
            lambda = norm;
            for z in &mut w {
                *z /= norm;
            }
            v = w;
        }
        lambda.sqrt()
    }

    /// Max entrywise deviation from the identity.
    pub fn deviation_from_identity(&self) -> f64 {
        self.sub(&CMat::identity(self.dim)).max_abs()
    }

    /// Max entrywise deviation from unitarity, `‖A†A - I‖_max`.
    pub fn deviation_from_unitary(&self) -> f64 {
        self.dagger().mul(self).deviation_from_identity()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.dagger()).max_abs() < tol
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_diagonal() {
        let mut m = CMat::zeros(3);
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(1, 1)] = Complex64::new(-2.0, 0.0);
        m[(2, 2)] = Complex64::new(0.0, 1.5);
        assert!((m.spectral_norm() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn unitary_deviation() {
        let id = CMat::identity(4);
        assert!(id.deviation_from_unitary() < 1e-15);
        let mut m = CMat::identity(2);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(m.deviation_from_unitary() > 0.05);
    }
}
