use serde::{Deserialize, Serialize};

use crate::linalg::{dot, Matrix};
use crate::{Error, Result, Scalar};

/// A normal-valued symmetric bilinear form on `T_pN` in orthonormal frames:
/// `h(e_i, e_j) = Σ_k h^k_ij ξ_k`, stored as `data[(k * m + i) * m + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForm<S> {
    pub p: usize,
    pub m: usize,
    data: Vec<S>,
}

impl<S: Scalar> SecondFundamentalForm<S> {
    pub fn zeros(p: usize, m: usize) -> Self {
        SecondFundamentalForm { p, m, data: vec![S::zero(); p * m * m] }
    }

    /// Fills from `f(k, i, j)` on `i <= j` and mirrors.
    pub fn from_upper(p: usize, m: usize, mut f: impl FnMut(usize, usize, usize) -> S) -> Self {
        let mut h = Self::zeros(p, m);
        for k in 0..p {
            for i in 0..m {
                for j in i..m {
                    h.set(k, i, j, f(k, i, j));
                }
            }
        }
        h
    }

    /// Raw components (not symmetrized), e.g. from a data file.
    pub fn from_raw(p: usize, m: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != p * m * m {
            return Err(Error::DimensionMismatch { expected: p * m * m, got: data.len() });
        }
        Ok(SecondFundamentalForm { p, m, data })
    }

    /// Builds from per-normal-direction `m × m` matrices.
    pub fn from_components(components: &[Matrix<S>]) -> Result<Self> {
        let p = components.len();
        let m = components.first().map_or(0, Matrix::rows);
        let mut data = Vec::with_capacity(p * m * m);
        for c in components {
            if c.rows() != m || c.cols() != m {
                return Err(Error::DimensionMismatch { expected: m, got: c.rows() });
            }
            data.extend_from_slice(c.as_slice());
        }
        Ok(SecondFundamentalForm { p, m, data })
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.data[(k * self.m + i) * self.m + j]
    }

    /// Sets `h^k_ij = h^k_ji = v`.
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: S) {
        let m = self.m;
        self.data[(k * m + i) * m + j] = v;
        self.data[(k * m + j) * m + i] = v;
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn component(&self, k: usize) -> Matrix<S> {
        Matrix::from_fn(self.m, self.m, |i, j| self.get(k, i, j))
    }

    /// `h(x, y)` as a normal vector of length `p`.
    pub fn apply(&self, x: &[S], y: &[S]) -> Vec<S> {
        (0..self.p)
            .map(|k| {
                let mut s = S::zero();
                for i in 0..self.m {
                    if x[i] == S::zero() {
                        continue;
                    }
                    for j in 0..self.m {
                        s += x[i] * self.get(k, i, j) * y[j];
                    }
                }
                s
            })
            .collect()
    }

    /// `h(e_i, e_j)` as a normal vector.
    pub fn entry(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.p).map(|k| self.get(k, i, j)).collect()
    }

    /// `‖h‖² = Σ_k Σ_ij (h^k_ij)²`
    pub fn norm2(&self) -> S {
        self.data.iter().map(|&v| v * v).sum()
    }

    /// `Σ_k ‖h_k restricted to u⊥‖²_F` for unit `u`.
    ///
    /// With `Π = I − uuᵀ`: `‖Π h Π‖² = ‖h‖² − 2‖hu‖² + (uᵀhu)²`.
    pub fn restricted_norm2(&self, u: &[S]) -> S {
        let two = S::lit(2.0);
        let mut total = S::zero();
        for k in 0..self.p {
            let mut hk_norm2 = S::zero();
            let mut hu2 = S::zero();
            let mut uhu = S::zero();
            for i in 0..self.m {
                let mut row_dot = S::zero();
                for j in 0..self.m {
                    let v = self.get(k, i, j);
                    hk_norm2 += v * v;
                    row_dot += v * u[j];
                }
                hu2 += row_dot * row_dot;
                uhu += u[i] * row_dot;
            }
            total += hk_norm2 - two * hu2 + uhu * uhu;
        }
        total
    }

    /// Euclidean gradient of [`Self::restricted_norm2`] in `u`.
    pub fn restricted_norm2_grad(&self, u: &[S]) -> Vec<S> {
        let four = S::lit(4.0);
        let mut g = vec![S::zero(); self.m];
        for k in 0..self.p {
            let hu: Vec<S> = (0..self.m).map(|i| (0..self.m).map(|j| self.get(k, i, j) * u[j]).sum()).collect();
            let uhu = dot(u, &hu);
            // ∇(‖hu‖²) = 2h²u, ∇((uᵀhu)²) = 4(uᵀhu)hu
            for i in 0..self.m {
                let h2u: S = (0..self.m).map(|j| self.get(k, i, j) * hu[j]).sum();
                g[i] += -four * h2u + four * uhu * hu[i];
            }
        }
        g
    }

    /// Mean curvature vector `(1/m) Σ_i h(e_i, e_i)`.
    pub fn mean(&self) -> Vec<S> {
        let m = S::from_usize_lossy(self.m);
        (0..self.p).map(|k| (0..self.m).map(|i| self.get(k, i, i)).sum::<S>() / m).collect()
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.p != other.p || self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.data.len(), got: other.data.len() });
        }
        Ok(SecondFundamentalForm {
            p: self.p,
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> SecondFundamentalForm<T> {
        SecondFundamentalForm { p: self.p, m: self.m, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Largest `|h^k_ij − h^k_ji|`.
    pub fn asymmetry(&self) -> S {
        let mut worst = S::zero();
        for k in 0..self.p {
            for i in 0..self.m {
                for j in 0..i {
                    worst = worst.max((self.get(k, i, j) - self.get(k, j, i)).abs());
                }
            }
        }
        worst
    }

    /// Components in the tangent frame given by the columns of `q`:
    /// `h'_k = qᵀ h_k q`.
    pub fn rotated(&self, q: &Matrix<S>) -> Result<Self> {
        if q.rows() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: q.rows() });
        }
        let m = q.cols();
        let qt = q.transpose();
        let mut data = Vec::with_capacity(self.p * m * m);
        for k in 0..self.p {
            let r = qt.matmul(&self.component(k).matmul(q)?)?;
            data.extend_from_slice(r.as_slice());
        }
        Ok(SecondFundamentalForm { p: self.p, m, data })
    }
}
