//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's numerics: every oracle works from
//! raw component loops, closed forms or brute-force search.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statwarp::submanifold::SecondFundamentalForm;
use statwarp::PointData;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn unitize(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, n);
        if dot(&g, &g) > 1e-12 {
            return unitize(&g);
        }
    }
}

/// Symmetric components with standard normal entries on and above the diagonal.
pub fn random_form(rng: &mut ChaCha8Rng, p: usize, m: usize) -> SecondFundamentalForm<f64> {
    let mut h = SecondFundamentalForm::zeros(p, m);
    for k in 0..p {
        for i in 0..m {
            for j in i..m {
                h.set(k, i, j, rng.sample(StandardNormal));
            }
        }
    }
    h
}

/// `x − (x·u)u`
fn reject(x: &[f64], u: &[f64]) -> Vec<f64> {
    let c = dot(x, u);
    x.iter().zip(u).map(|(a, b)| a - c * b).collect()
}

/// Orthonormal basis of `u⊥` by Gram-Schmidt on the coordinate axes.
pub fn complement_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let m = u.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    let mut axes: Vec<usize> = (0..m).collect();
    // least aligned axes first keeps the process well conditioned
    axes.sort_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()));
    for &i in &axes {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v = reject(&v, u);
        for b in &basis {
            v = reject(&v, b);
        }
        if dot(&v, &v) > 1e-6 {
            basis.push(unitize(&v));
        }
        if basis.len() == m - 1 {
            break;
        }
    }
    basis
}

fn component_frobenius(h: &SecondFundamentalForm<f64>, k: usize, idx: &[usize]) -> f64 {
    idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).map(|(i, j)| h.get(k, i, j).powi(2)).sum()
}

fn traces_squared(h: &SecondFundamentalForm<f64>) -> f64 {
    (0..h.p).map(|k| (0..h.m).map(|i| h.get(k, i, i)).sum::<f64>().powi(2)).sum()
}

/// `Q = ½(m+3)‖h⁰‖² + ½(m+1)‖h⁰|_W‖² − 2 Σ_k (tr h⁰_k)²`, `W = span{e₁, …, e_{m−1}}`.
pub fn q_oracle(h0: &SecondFundamentalForm<f64>) -> f64 {
    let m = h0.m as f64;
    let all: Vec<usize> = (0..h0.m).collect();
    let w = &all[..h0.m - 1];
    let full: f64 = (0..h0.p).map(|k| component_frobenius(h0, k, &all)).sum();
    let restricted: f64 = (0..h0.p).map(|k| component_frobenius(h0, k, w)).sum();
    0.5 * (m + 3.0) * full + 0.5 * (m + 1.0) * restricted - 2.0 * traces_squared(h0)
}

/// `Q̂ = 2m‖h⁰‖² − ½(m+1)‖h⁰|_W‖² − 2 Σ_k (tr h⁰_k)²`.
pub fn qhat_oracle(h0: &SecondFundamentalForm<f64>) -> f64 {
    let m = h0.m as f64;
    let all: Vec<usize> = (0..h0.m).collect();
    let w = &all[..h0.m - 1];
    let full: f64 = (0..h0.p).map(|k| component_frobenius(h0, k, &all)).sum();
    let restricted: f64 = (0..h0.p).map(|k| component_frobenius(h0, k, w)).sum();
    2.0 * m * full - 0.5 * (m + 1.0) * restricted - 2.0 * traces_squared(h0)
}

/// `P_k = (m+2) Σ_{i<m} xᵢ² + ((m+3)/2) x_m² − 2 (Σ xᵢ)²`.
pub fn pk_oracle(x: &[f64]) -> f64 {
    let m = x.len();
    let mf = m as f64;
    let head: f64 = x[..m - 1].iter().map(|v| v * v).sum();
    let s: f64 = x.iter().sum();
    (mf + 2.0) * head + 0.5 * (mf + 3.0) * x[m - 1] * x[m - 1] - 2.0 * s * s
}

/// Exact minimum of `P_k` on `Σ xᵢ = α`: the positive diagonal part is
/// minimized at `xᵢ ∝ 1/aᵢ`, giving `α² / Σ 1/aᵢ − 2α²`.
pub fn pk_slice_min(m: usize, alpha: f64) -> f64 {
    let mf = m as f64;
    let inv_sum = (mf - 1.0) / (mf + 2.0) + 2.0 / (mf + 3.0);
    alpha * alpha / inv_sum - 2.0 * alpha * alpha
}

/// Scalar curvature as the sum of sectional curvatures `𝒮(eᵢ, eⱼ, eⱼ, eᵢ)`
/// over `i < j`, each from the ambient formula plus the Gauss corrections.
pub fn tau_oracle(d: &PointData) -> f64 {
    let g = &d.geometry.profile;
    let cbar = d.geometry.cbar;
    let gamma = cbar / (4.0 * g.f * g.f);
    let alpha = gamma - (g.fp / g.f).powi(2);
    let beta = alpha + g.fpp / g.f;
    let (m, p) = (d.m, d.p);
    let t = &d.tangent_xi;
    let mut tau = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let pij = d.tangent_phi[(i, j)];
            let ambient = alpha - beta * (t[i] * t[i] + t[j] * t[j]) + 3.0 * gamma * pij * pij;
            let mut gauss = 0.0;
            for k in 0..p {
                gauss += 0.5 * (d.h.get(k, i, i) * d.hstar.get(k, j, j) + d.hstar.get(k, i, i) * d.h.get(k, j, j))
                    - d.h.get(k, i, j) * d.hstar.get(k, i, j);
            }
            tau += ambient + gauss;
        }
    }
    tau
}

/// `K̄(E ∧ F) = α − β(η(E)² + η(F)²) + 3γ ḡ(E, φF)²` for orthonormal tangent `E, F`.
pub fn sectional_oracle(d: &PointData, e: &[f64], f: &[f64]) -> f64 {
    let g = &d.geometry.profile;
    let gamma = d.geometry.cbar / (4.0 * g.f * g.f);
    let alpha = gamma - (g.fp / g.f).powi(2);
    let beta = alpha + g.fpp / g.f;
    let (te, tf) = (dot(e, &d.tangent_xi), dot(f, &d.tangent_xi));
    let pf = d.tangent_phi.mul_vec(f);
    let epf = dot(e, &pf);
    alpha - beta * (te * te + tf * tf) + 3.0 * gamma * epf * epf
}

/// Random search for `max_F K̄(E ∧ F)`: `evals / 2` uniform samples on the
/// unit sphere of `E⊥`, then hill climbing from the best one with a
/// geometrically shrinking perturbation radius.
pub fn max_sectional_search(d: &PointData, e: &[f64], evals: usize, rng: &mut ChaCha8Rng) -> f64 {
    let m = d.m;
    let sample = |rng: &mut ChaCha8Rng| loop {
        let v = reject(&gaussian(rng, m), e);
        if dot(&v, &v) > 1e-12 {
            return unitize(&v);
        }
    };
    let global = evals / 2;
    let mut best_f = sample(rng);
    let mut best = sectional_oracle(d, e, &best_f);
    for _ in 1..global {
        let f = sample(rng);
        let v = sectional_oracle(d, e, &f);
        if v > best {
            best = v;
            best_f = f;
        }
    }
    const STAGES: usize = 50;
    let per_stage = (evals - global) / STAGES;
    let mut sigma = 0.5;
    for _ in 0..STAGES {
        for _ in 0..per_stage {
            let g = gaussian(rng, m);
            let trial: Vec<f64> = best_f.iter().zip(&g).map(|(a, b)| a + sigma * b).collect();
            let trial = reject(&trial, e);
            if dot(&trial, &trial) < 1e-24 {
                continue;
            }
            let trial = unitize(&trial);
            let v = sectional_oracle(d, e, &trial);
            if v > best {
                best = v;
                best_f = trial;
            }
        }
        sigma *= 0.7;
    }
    best
}

/// `C(W) = Σ_k Σ_{a,b} h_k(w_a, w_b)² / (m−1)` over an explicit basis of `W = u⊥`.
pub fn restricted_casorati_oracle(h: &SecondFundamentalForm<f64>, u: &[f64]) -> f64 {
    let basis = complement_basis(u);
    let m = h.m;
    let mut total = 0.0;
    for k in 0..h.p {
        for a in &basis {
            for b in &basis {
                let mut v = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        v += a[i] * h.get(k, i, j) * b[j];
                    }
                }
                total += v * v;
            }
        }
    }
    total / (m - 1) as f64
}

/// `n` points of a Fibonacci lattice on the upper unit hemisphere of ℝ³.
pub fn fibonacci_hemisphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Grid search for `inf_W C(W)` (or the supremum when `maximize`) at `m = 3`.
///
/// A Fibonacci hemisphere of `coarse` normals locates candidates; the best
/// `seeds` candidates are then refined on `levels` nested square grids of
/// `side × side` points in the tangent plane, each level zooming by `zoom`.
pub fn hyperplane_grid_oracle(h: &SecondFundamentalForm<f64>, maximize: bool, budget: usize) -> f64 {
    assert_eq!(h.m, 3);
    const SEEDS: usize = 5;
    const LEVELS: usize = 6;
    const SIDE: usize = 9;
    const ZOOM: f64 = 0.25;
    let refine = SEEDS * LEVELS * SIDE * SIDE;
    let coarse = budget - refine;
    let sign = if maximize { -1.0 } else { 1.0 };
    let score = |u: &[f64]| sign * restricted_casorati_oracle(h, u);

    let mut scored: Vec<(f64, [f64; 3])> =
        fibonacci_hemisphere(coarse).into_iter().map(|u| (score(&u), u)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let spacing = (2.0 * std::f64::consts::PI / coarse as f64).sqrt();

    let mut best = scored[0].0;
    let mut seeds: Vec<[f64; 3]> = Vec::new();
    for (_, u) in &scored {
        // skip near-duplicates of chosen seeds (antipodes are the same hyperplane)
        if seeds.iter().all(|s| dot(s, u).abs() < (1.0 - 8.0 * spacing * spacing).min(0.999_999)) {
            seeds.push(*u);
        }
        if seeds.len() == SEEDS {
            break;
        }
    }
    for seed in seeds {
        let mut center = seed.to_vec();
        let mut center_score = score(&center);
        let mut radius = 2.0 * spacing;
        for _ in 0..LEVELS {
            let basis = complement_basis(&center);
            let mut next = (center_score, center.clone());
            for a in 0..SIDE {
                for b in 0..SIDE {
                    let s = radius * (2.0 * a as f64 / (SIDE - 1) as f64 - 1.0);
                    let t = radius * (2.0 * b as f64 / (SIDE - 1) as f64 - 1.0);
                    let v: Vec<f64> = (0..3).map(|i| center[i] + s * basis[0][i] + t * basis[1][i]).collect();
                    let v = unitize(&v);
                    let sc = score(&v);
                    if sc < next.0 {
                        next = (sc, v);
                    }
                }
            }
            (center_score, center) = next;
            radius *= ZOOM;
        }
        best = best.min(center_score);
    }
    sign * best
}
