//! Multi-start projected gradient on the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{axpy, dot, norm, normalized, scaled, sym_eig, unit, SymMat};
use crate::{tolerance, Scalar};

use super::SecondFundamentalForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Min,
    Max,
}

const RANDOM_STARTS: usize = 64;
const MAX_ITERS: usize = 5000;
const STALL_LIMIT: usize = 5;
const START_SEED: u64 = 0x5eed_c0de_0d15_ea5e;

/// Extremizes `u ↦ Σ_k ‖h_k|u⊥‖²` over unit `u`; returns the value and witness.
pub(crate) fn extremize_restricted_norm<S: Scalar>(h: &SecondFundamentalForm<S>, mode: Extremum) -> (S, Vec<S>) {
    let m = h.m;
    let sign = match mode {
        Extremum::Min => S::one(),
        Extremum::Max => -S::one(),
    };
    // minimize sign * objective
    let value = |u: &[S]| sign * h.restricted_norm2(u);
    let grad = |u: &[S]| scaled(sign, &h.restricted_norm2_grad(u));
    let scale = h.norm2().max(S::one());

    let mut best: Option<(S, Vec<S>)> = None;
    for start in starts(h) {
        let (v, u) = projected_descent(&value, &grad, start, scale);
        if best.as_ref().map_or(true, |(b, _)| v < *b) {
            best = Some((v, u));
        }
    }
    let (v, u) = best.unwrap_or_else(|| (S::zero(), unit(m, 0)));
    (sign * v, u)
}

fn starts<S: Scalar>(h: &SecondFundamentalForm<S>) -> Vec<Vec<S>> {
    let m = h.m;
    let mut out: Vec<Vec<S>> = (0..m).map(|i| unit(m, i)).collect();
    // eigenvectors of each h_k and of Σ_k h_k²
    let mut sq = SymMat::zeros(m);
    for k in 0..h.p {
        let c = h.component(k);
        let hk = SymMat::symmetrized(&c);
        out.extend(sym_eig(&hk).vectors);
        let c2 = c.matmul(&c).expect("square");
        for i in 0..m {
            for j in i..m {
                sq.set(i, j, sq.get(i, j) + c2[(i, j)]);
            }
        }
    }
    out.extend(sym_eig(&sq).vectors);
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ (m as u64));
    for _ in 0..RANDOM_STARTS {
        let g: Vec<S> = (0..m).map(|_| S::lit(StandardNormal.sample(&mut rng))).collect();
        if let Some(u) = normalized(&g) {
            out.push(u);
        }
    }
    out
}

/// Riemannian gradient descent with Barzilai-Borwein trial steps and
/// Armijo backtracking along the normalization retraction.
fn projected_descent<S: Scalar>(
    value: &impl Fn(&[S]) -> S,
    grad: &impl Fn(&[S]) -> Vec<S>,
    start: Vec<S>,
    scale: S,
) -> (S, Vec<S>) {
    let tol = S::lit(tolerance::SPHERE_GRAD).max(S::epsilon() * S::lit(100.0)) * scale;
    let mut u = start;
    let mut fu = value(&u);
    let mut step = S::one() / scale;
    let mut prev: Option<(Vec<S>, Vec<S>)> = None;
    // consecutive steps whose decrease is at round-off level
    let mut stalled = 0;
    for _ in 0..MAX_ITERS {
        let g = grad(&u);
        let mut rg = g.clone();
        axpy(-dot(&g, &u), &u, &mut rg);
        let gnorm = norm(&rg);
        if gnorm < tol {
            break;
        }
        if let Some((pu, pg)) = &prev {
            let s: Vec<S> = u.iter().zip(pu).map(|(a, b)| *a - *b).collect();
            let y: Vec<S> = rg.iter().zip(pg).map(|(a, b)| *a - *b).collect();
            let sy = dot(&s, &y);
            if sy > S::zero() {
                step = dot(&s, &s) / sy;
            }
        }
        let mut t = step;
        let c1 = S::lit(1e-4);
        let mut accepted = None;
        for _ in 0..60 {
            let mut cand = u.clone();
            axpy(-t, &rg, &mut cand);
            if let Some(cand) = normalized(&cand) {
                let fc = value(&cand);
                if fc <= fu - c1 * t * gnorm * gnorm {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            t = t * S::lit(0.5);
        }
        match accepted {
            Some((cand, fc)) => {
                if fu - fc <= S::lit(4.0) * S::epsilon() * fu.abs().max(scale) {
                    stalled += 1;
                } else {
                    stalled = 0;
                }
                prev = Some((u, rg));
                u = cand;
                fu = fc;
                step = t.max(S::min_positive_value());
            }
            None => break,
        }
        if stalled >= STALL_LIMIT {
            break;
        }
    }
    (fu, u)
}
