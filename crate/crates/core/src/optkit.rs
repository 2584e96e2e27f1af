//! Constrained quadratic extremum problems on the slice `Σ xᵢ = α`, restricted
//! Hessian sign checks, and the polynomials `Q`, `Q̂`, `P_k` of the Casorati
//! argument.

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, orthogonal_complement_frame, solve, sym_eig, Matrix, SymMat};
use crate::submanifold::{Extremum, SecondFundamentalForm};
use crate::{tolerance, Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Psd,
    Nsd,
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::DimensionTooSmall(m))
    } else {
        Ok(())
    }
}

/// `Σ_{i<m} m xᵢ² + ((m−1)/2) x_m² − 4 Σ_{i<j} xᵢ xⱼ`
pub fn eval_pk<S: Scalar>(x: &[S]) -> Result<S> {
    let m = x.len();
    check_m(m)?;
    let mf = S::from_usize_lossy(m);
    let mut value = S::zero();
    for i in 0..m - 1 {
        value += mf * x[i] * x[i];
    }
    value += (mf - S::one()) / S::lit(2.0) * x[m - 1] * x[m - 1];
    let mut cross = S::zero();
    for i in 0..m {
        for j in (i + 1)..m {
            cross += x[i] * x[j];
        }
    }
    Ok(value - S::lit(4.0) * cross)
}

/// Hessian of `P_k`: `2m` on the first `m−1` diagonal entries, `m−1` in the
/// corner, `−4` off the diagonal.
pub fn pk_hessian<S: Scalar>(m: usize) -> Result<SymMat<S>> {
    check_m(m)?;
    let mf = S::from_usize_lossy(m);
    Ok(SymMat::from_upper(m, |i, j| match (i == j, i == m - 1) {
        (true, true) => mf - S::one(),
        (true, false) => S::lit(2.0) * mf,
        (false, _) => S::lit(-4.0),
    }))
}

/// The Hessian as displayed alongside the stationarity system: diagonal
/// `2(m+2)` in place of `2m`.
pub fn pk_hessian_displayed<S: Scalar>(m: usize) -> Result<SymMat<S>> {
    let mut h = pk_hessian(m)?;
    let d = S::lit(2.0) * S::from_usize_lossy(m + 2);
    for i in 0..m - 1 {
        h.set(i, i, d);
    }
    Ok(h)
}

/// Hessian of `x₁ Σ_{i≥2} xᵢ`: ones in the first row and column off the diagonal.
pub fn chen_ricci_hessian<S: Scalar>(m: usize) -> Result<SymMat<S>> {
    check_m(m)?;
    Ok(SymMat::from_upper(m, |i, j| if i == 0 && j > 0 { S::one() } else { S::zero() }))
}

/// Extremize `xᵀAx + bᵀx` subject to `Σ xᵢ = α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedQp<S> {
    pub a: SymMat<S>,
    pub b: Vec<S>,
    pub alpha: S,
}

impl<S: Scalar> ConstrainedQp<S> {
    pub fn new(a: SymMat<S>, alpha: S) -> Self {
        let m = a.dim();
        ConstrainedQp { a, b: vec![S::zero(); m], alpha }
    }

    pub fn with_linear(a: SymMat<S>, b: Vec<S>, alpha: S) -> Result<Self> {
        if b.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: b.len() });
        }
        Ok(ConstrainedQp { a, b, alpha })
    }

    /// `min P_k` on the slice: `A = ½ Hess P_k`.
    pub fn pk(m: usize, alpha: S) -> Result<Self> {
        let h = pk_hessian::<S>(m)?;
        Ok(Self::new(SymMat::from_upper(m, |i, j| S::lit(0.5) * h.get(i, j)), alpha))
    }

    /// `max x₁ Σ_{i≥2} xᵢ` on the slice.
    pub fn chen_ricci(m: usize, alpha: S) -> Result<Self> {
        let h = chen_ricci_hessian::<S>(m)?;
        Ok(Self::new(SymMat::from_upper(m, |i, j| S::lit(0.5) * h.get(i, j)), alpha))
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn value(&self, x: &[S]) -> S {
        self.a.quad_form(x) + dot(&self.b, x)
    }

    /// `2Ax + b`
    pub fn gradient(&self, x: &[S]) -> Vec<S> {
        let ax = self.a.mul_vec(x);
        ax.iter().zip(&self.b).map(|(&v, &b)| S::lit(2.0) * v + b).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpResult<S> {
    pub optimizer: Vec<S>,
    /// `μ` with `∇(objective) = μ·(1, …, 1)` at the optimizer.
    pub multiplier: S,
    pub value: S,
    /// Spectrum of the objective Hessian on `{Σ vᵢ = 0}`, ascending.
    pub restricted_hessian_eigs: Vec<S>,
}

/// Solves the Lagrange system `[2A, −1; 1ᵀ, 0](x, μ) = (−b, α)`.
///
/// A singular but consistent system (flat directions on the slice) yields the
/// minimum-norm stationary point; an inconsistent one is `Unbounded`.
pub fn solve_constrained_qp<S: Scalar>(problem: &ConstrainedQp<S>, mode: Extremum) -> Result<QpResult<S>> {
    let m = problem.dim();
    if m == 0 {
        return Err(Error::DimensionTooSmall(0));
    }
    if problem.b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: problem.b.len() });
    }
    let hessian = SymMat::from_upper(m, |i, j| S::lit(2.0) * problem.a.get(i, j));
    let ones = vec![S::one(); m];
    let wanted = match mode {
        Extremum::Min => Definiteness::Psd,
        Extremum::Max => Definiteness::Nsd,
    };
    let (ok, eigs) = restricted_hessian_check(&hessian, &ones, wanted)?;
    if !ok {
        let bad = match mode {
            Extremum::Min => eigs.first(),
            Extremum::Max => eigs.last(),
        };
        return Err(Error::Indefinite {
            expected: if mode == Extremum::Min { "positive semi-definite" } else { "negative semi-definite" },
            eigenvalue: bad.map_or(0.0, |v| v.as_f64()),
        });
    }

    let kkt = Matrix::from_fn(m + 1, m + 1, |r, c| match (r < m, c < m) {
        (true, true) => hessian.get(r, c),
        (true, false) => -S::one(),
        (false, true) => S::one(),
        (false, false) => S::zero(),
    });
    let mut rhs: Vec<S> = problem.b.iter().map(|&v| -v).collect();
    rhs.push(problem.alpha);
    let (x, mu) = match solve(&kkt, &rhs) {
        Ok(sol) => (sol[..m].to_vec(), sol[m]),
        Err(Error::Singular) => min_norm_stationary(problem, &hessian)?,
        Err(e) => return Err(e),
    };
    Ok(QpResult { value: problem.value(&x), optimizer: x, multiplier: mu, restricted_hessian_eigs: eigs })
}

/// Stationary point on the slice through the spectral pseudo-inverse of the
/// restricted Hessian.
fn min_norm_stationary<S: Scalar>(problem: &ConstrainedQp<S>, hessian: &SymMat<S>) -> Result<(Vec<S>, S)> {
    let m = problem.dim();
    let mf = S::from_usize_lossy(m);
    let base = vec![problem.alpha / mf; m];
    if m == 1 {
        let g = problem.gradient(&base);
        return Ok((base, g[0]));
    }
    let z = orthogonal_complement_frame(&vec![S::one(); m])?;
    let restricted = hessian.restrict(&z);
    let g0 = problem.gradient(&base);
    let reduced_grad: Vec<S> = z.iter().map(|col| dot(col, &g0)).collect();
    let eig = sym_eig(&restricted);
    let scale = eig.values.iter().fold(S::one(), |acc, v| acc.max(v.abs()));
    let cutoff = S::lit(tolerance::HESSIAN_SIGN) * scale;
    let mut y = vec![S::zero(); m - 1];
    for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
        let coeff = dot(v, &reduced_grad);
        if lambda.abs() <= cutoff {
            let gscale = crate::linalg::norm(&g0).max(S::one());
            if coeff.abs() > S::lit(tolerance::REL) * gscale {
                return Err(Error::Unbounded);
            }
            continue;
        }
        crate::linalg::axpy(-coeff / *lambda, v, &mut y);
    }
    let mut x = base;
    for (c, col) in y.iter().zip(&z) {
        crate::linalg::axpy(*c, col, &mut x);
    }
    let g = problem.gradient(&x);
    let mu = g.iter().copied().sum::<S>() / mf;
    Ok((x, mu))
}

/// Projects `a` onto the orthogonal complement of `normal` and tests its sign.
/// Returns the verdict and the restricted spectrum in ascending order.
pub fn restricted_hessian_check<S: Scalar>(a: &SymMat<S>, normal: &[S], mode: Definiteness) -> Result<(bool, Vec<S>)> {
    if normal.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: normal.len() });
    }
    let z = orthogonal_complement_frame(normal)?;
    if z.is_empty() {
        return Ok((true, Vec::new()));
    }
    let values = sym_eig(&a.restrict(&z)).values;
    let scale = a.as_matrix().max_abs().max(S::one());
    let tol = S::lit(tolerance::HESSIAN_SIGN) * scale;
    let ok = match mode {
        Definiteness::Psd => values.iter().all(|&v| v >= -tol),
        Definiteness::Nsd => values.iter().all(|&v| v <= tol),
    };
    Ok((ok, values))
}

fn check_form<S: Scalar>(h0: &SecondFundamentalForm<S>) -> Result<()> {
    check_m(h0.m)
}

/// The reduced pure-`h⁰` form of `Q` with `W = span{e₁, …, e_{m−1}}`.
pub fn eval_q<S: Scalar>(h0: &SecondFundamentalForm<S>) -> Result<S> {
    check_form(h0)?;
    let m = h0.m;
    let mf = S::from_usize_lossy(m);
    let two = S::lit(2.0);
    let mut total = S::zero();
    for k in 0..h0.p {
        let h = |i: usize, j: usize| h0.get(k, i, j);
        let mut inner = S::zero();
        let mut edge = S::zero();
        let mut diag = S::zero();
        for i in 0..m - 1 {
            for j in (i + 1)..m - 1 {
                inner += h(i, j) * h(i, j);
            }
            edge += h(i, m - 1) * h(i, m - 1);
            diag += h(i, i) * h(i, i);
        }
        let mut cross = S::zero();
        for i in 0..m {
            for j in (i + 1)..m {
                cross += h(i, i) * h(j, j);
            }
        }
        let last = h(m - 1, m - 1);
        total += two * (mf + two) * inner + (mf + S::lit(3.0)) * edge + mf * diag - S::lit(4.0) * cross
            + (mf - S::one()) / two * last * last;
    }
    Ok(total)
}

/// `Q̂ = 2m‖h⁰‖² − ½(m+1)‖h⁰|_W‖² − 2 Σ_k (tr h⁰_k)²` with `W = span{e₁, …, e_{m−1}}`.
pub fn eval_qhat<S: Scalar>(h0: &SecondFundamentalForm<S>) -> Result<S> {
    check_form(h0)?;
    let m = h0.m;
    let mf = S::from_usize_lossy(m);
    let two = S::lit(2.0);
    let last = crate::linalg::unit::<S>(m, m - 1);
    let traces: S = (0..h0.p)
        .map(|k| {
            let t: S = (0..m).map(|i| h0.get(k, i, i)).sum();
            t * t
        })
        .sum();
    Ok(two * mf * h0.norm2() - (mf + S::one()) / two * h0.restricted_norm2(&last) - two * traces)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct System16Report<S> {
    pub m: usize,
    pub alpha: S,
    /// `(α/(m+1), …, α/(m+1), 4α/(m+3))`
    pub claimed: Vec<S>,
    pub kkt_solution: Vec<S>,
    /// Largest componentwise gap between the two.
    pub discrepancy: S,
    pub claimed_sum: S,
    pub kkt_sum: S,
    pub claimed_satisfies_constraint: bool,
    pub claimed_value: S,
    pub kkt_value: S,
}

/// Compares the closed-form critical values of the homogeneous stationarity
/// system with the true minimizer of `P_k` on `Σ xᵢ = α`.
pub fn system16_solutions<S: Scalar>(m: usize, alpha: S) -> Result<System16Report<S>> {
    check_m(m)?;
    let problem = ConstrainedQp::pk(m, alpha)?;
    let kkt = solve_constrained_qp(&problem, Extremum::Min)?;
    let mut claimed = vec![alpha / S::from_usize_lossy(m + 1); m - 1];
    claimed.push(S::lit(4.0) * alpha / S::from_usize_lossy(m + 3));
    let discrepancy = claimed.iter().zip(&kkt.optimizer).fold(S::zero(), |acc, (a, b)| acc.max((*a - *b).abs()));
    let claimed_sum: S = claimed.iter().copied().sum();
    let kkt_sum: S = kkt.optimizer.iter().copied().sum();
    let tol = S::lit(tolerance::ABS) * alpha.abs().max(S::one());
    Ok(System16Report {
        m,
        alpha,
        claimed_value: eval_pk(&claimed)?,
        kkt_value: kkt.value,
        claimed_satisfies_constraint: (claimed_sum - alpha).abs() <= tol,
        claimed,
        kkt_solution: kkt.optimizer,
        discrepancy,
        claimed_sum,
        kkt_sum,
    })
}
