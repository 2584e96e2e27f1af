use super::vector::{axpy, dot, norm, normalized, unit};
use crate::{tolerance, Error, Result, Scalar};

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Fails with [`Error::RankDeficient`] when the Gram determinant of the input
/// (the product of squared residual norms) falls below `1e-12`.
pub fn orthonormalize<S: Scalar>(vectors: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(vectors.len());
    let mut gram_det = 1.0f64;
    for v in vectors {
        if let Some(first) = vectors.first() {
            if v.len() != first.len() {
                return Err(Error::DimensionMismatch { expected: first.len(), got: v.len() });
            }
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &out {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        let r = norm(&w);
        gram_det *= r.as_f64() * r.as_f64();
        if gram_det < tolerance::GRAM_DET || r == S::zero() {
            return Err(Error::RankDeficient { gram_det });
        }
        out.push(w.into_iter().map(|x| x / r).collect());
    }
    Ok(out)
}

/// `d - 1` orthonormal vectors spanning `u⊥`.
///
/// Built from the Householder reflection that sends `u` to a multiple of the
/// coordinate axis where `|u_k|` is largest; the columns other than `k` are the
/// frame. The result depends only on `u`.
pub fn orthogonal_complement_frame<S: Scalar>(u: &[S]) -> Result<Vec<Vec<S>>> {
    let u = normalized(u).ok_or(Error::ZeroVector)?;
    let d = u.len();
    let k = (0..d)
        .max_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or(Error::ZeroVector)?;
    let sign = if u[k] >= S::zero() { S::one() } else { -S::one() };
    let mut v = u.clone();
    v[k] += sign;
    let vv = dot(&v, &v);
    let two = S::lit(2.0);
    Ok((0..d)
        .filter(|&j| j != k)
        .map(|j| {
            // H e_j = e_j - 2 v (v_j / vᵀv)
            let mut col = unit::<S>(d, j);
            axpy(-two * v[j] / vv, &v, &mut col);
            col
        })
        .collect())
}

/// Orthonormal basis of the orthogonal complement of an orthonormal family in `R^d`.
///
/// Candidates are the coordinate axes, taken greedily by largest residual.
pub fn orthogonal_complement<S: Scalar>(basis: &[Vec<S>], d: usize) -> Result<Vec<Vec<S>>> {
    let mut all: Vec<Vec<S>> = basis.to_vec();
    let mut out = Vec::new();
    while all.len() < d {
        let mut best: Option<(S, Vec<S>)> = None;
        for i in 0..d {
            let mut w = unit::<S>(d, i);
            for _pass in 0..2 {
                for q in &all {
                    let c = dot(q, &w);
                    axpy(-c, q, &mut w);
                }
            }
            let r = norm(&w);
            if best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, w));
            }
        }
        let (r, w) = best.ok_or(Error::ZeroVector)?;
        if r <= S::lit(1e-6) {
            return Err(Error::RankDeficient { gram_det: 0.0 });
        }
        let q: Vec<S> = w.into_iter().map(|x| x / r).collect();
        all.push(q.clone());
        out.push(q);
    }
    Ok(out)
}
