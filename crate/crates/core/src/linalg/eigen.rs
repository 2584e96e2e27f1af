use super::matrix::{Matrix, SymMat};
use crate::Scalar;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigen<S> {
    pub values: Vec<S>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<S>>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations with Rutishauser's update formulas.
pub fn sym_eig<S: Scalar>(m: &SymMat<S>) -> SymEigen<S> {
    let n = m.dim();
    let mut a: Matrix<S> = m.as_matrix().clone();
    let mut v: Matrix<S> = Matrix::identity(n);
    let scale = a.frobenius_norm2().sqrt();
    let half = S::lit(0.5);

    for _ in 0..MAX_SWEEPS {
        let mut off = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= S::epsilon() * scale * half || off == S::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == S::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let t = if theta == S::zero() { S::one() } else { t };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                let tau = s / (S::one() + c);

                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = S::zero();
                a[(q, p)] = S::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        let np = arp - s * (arq + tau * arp);
                        let nq = arq + s * (arp - tau * arq);
                        a[(r, p)] = np;
                        a[(p, r)] = np;
                        a[(r, q)] = nq;
                        a[(q, r)] = nq;
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    SymEigen {
        values: order.iter().map(|&k| a[(k, k)]).collect(),
        vectors: order.iter().map(|&k| v.column(k)).collect(),
    }
}

/// Largest eigenvalue and a unit eigenvector for it.
pub fn sym_eig_max<S: Scalar>(m: &SymMat<S>) -> (S, Vec<S>) {
    let mut e = sym_eig(m);
    match e.values.pop() {
        Some(value) => (value, e.vectors.pop().expect("one vector per value")),
        None => (S::neg_infinity(), Vec::new()),
    }
}
