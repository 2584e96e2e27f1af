//! Pointwise model of an `m`-dimensional statistical submanifold: imbedding
//! curvature tensors, Gauss-equation curvature, Casorati curvatures and their
//! hyperplane extremization.

mod form;
mod sphere;

use serde::{Deserialize, Serialize};

pub use form::SecondFundamentalForm;
pub use sphere::Extremum;

use crate::ambient::{structure_curvature, AmbientGeometry, CurvatureCoefficients, StructurePairing};
use crate::linalg::{dot, norm, norm2, orthogonal_complement_frame, Matrix};
use crate::{tolerance, Error, Result, Scalar};

/// Tangent frame `e_1..e_m`, normal frame `ξ_1..ξ_p`, both orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmanifoldPointData<S> {
    pub m: usize,
    pub p: usize,
    pub geometry: AmbientGeometry<S>,
    /// Imbedding curvature tensor for `∇̄`.
    pub h: SecondFundamentalForm<S>,
    /// Imbedding curvature tensor for `∇̄*`.
    pub hstar: SecondFundamentalForm<S>,
    /// `P_ij = ḡ(e_i, φ e_j)`
    #[serde(rename = "P")]
    pub tangent_phi: Matrix<S>,
    /// Tangent part `T` of `∂z`.
    #[serde(rename = "T")]
    pub tangent_xi: Vec<S>,
    /// Normal coefficients `λ_k` of `∂z`.
    #[serde(rename = "lambda")]
    pub normal_xi: Vec<S>,
}

/// Pairings of tangent vectors, read from `P` and `T`.
pub struct TangentPairing<'a, S> {
    phi: &'a Matrix<S>,
    xi: &'a [S],
}

impl<S: Scalar> StructurePairing<S> for TangentPairing<'_, S> {
    fn metric(&self, x: &[S], y: &[S]) -> S {
        dot(x, y)
    }
    fn eta(&self, x: &[S]) -> S {
        dot(x, self.xi)
    }
    fn phi_pair(&self, x: &[S], y: &[S]) -> S {
        self.phi.bilinear(x, y)
    }
}

impl<S: Scalar> SubmanifoldPointData<S> {
    /// Checks shapes only; structural invariants are audited separately.
    pub fn new(
        geometry: AmbientGeometry<S>,
        h: SecondFundamentalForm<S>,
        hstar: SecondFundamentalForm<S>,
        tangent_phi: Matrix<S>,
        tangent_xi: Vec<S>,
        normal_xi: Vec<S>,
    ) -> Result<Self> {
        let (m, p) = (h.m, h.p);
        let dims = [
            (m, hstar.m),
            (p, hstar.p),
            (m, tangent_phi.rows()),
            (m, tangent_phi.cols()),
            (m, tangent_xi.len()),
            (p, normal_xi.len()),
        ];
        if let Some(&(expected, got)) = dims.iter().find(|(a, b)| a != b) {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(SubmanifoldPointData { m, p, geometry, h, hstar, tangent_phi, tangent_xi, normal_xi })
    }

    /// Shape consistency of a deserialized record.
    pub fn check_shapes(&self) -> Result<()> {
        Self::new(
            self.geometry.clone(),
            self.h.clone(),
            self.hstar.clone(),
            self.tangent_phi.clone(),
            self.tangent_xi.clone(),
            self.normal_xi.clone(),
        )
        .map(|_| ())
        .and_then(|_| {
            if self.h.as_slice().len() != self.p * self.m * self.m
                || self.hstar.as_slice().len() != self.p * self.m * self.m
            {
                Err(Error::DimensionMismatch { expected: self.p * self.m * self.m, got: self.h.as_slice().len() })
            } else {
                Ok(())
            }
        })
    }

    pub fn pairing(&self) -> TangentPairing<'_, S> {
        TangentPairing { phi: &self.tangent_phi, xi: &self.tangent_xi }
    }

    pub fn coefficients(&self) -> Result<CurvatureCoefficients<S>> {
        self.geometry.coefficients()
    }

    /// `h⁰ = (h + h*)/2`, the second fundamental form of the Levi-Civita connection.
    pub fn h0(&self) -> SecondFundamentalForm<S> {
        let half = S::lit(0.5);
        self.h.zip_with(&self.hstar, |a, b| half * (a + b)).expect("shapes checked at construction")
    }

    pub fn tensor(&self, which: TensorChoice) -> SecondFundamentalForm<S> {
        match which {
            TensorChoice::Primal => self.h.clone(),
            TensorChoice::Dual => self.hstar.clone(),
            TensorChoice::Mid => self.h0(),
        }
    }

    /// `‖P‖²_F`
    pub fn phi_norm2(&self) -> S {
        self.tangent_phi.frobenius_norm2()
    }

    /// `‖T‖²`
    pub fn xi_tangent_norm2(&self) -> S {
        norm2(&self.tangent_xi)
    }

    /// Same point expressed in the tangent frame given by the columns of the
    /// orthogonal matrix `q`.
    pub fn rotate_tangent_frame(&self, q: &Matrix<S>) -> Result<Self> {
        let qt = q.transpose();
        let phi = qt.matmul(&self.tangent_phi.matmul(q)?)?;
        Self::new(
            self.geometry.clone(),
            self.h.rotated(q)?,
            self.hstar.rotated(q)?,
            phi,
            q.tr_mul_vec(&self.tangent_xi),
            self.normal_xi.clone(),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T + Copy) -> SubmanifoldPointData<T> {
        SubmanifoldPointData {
            m: self.m,
            p: self.p,
            geometry: self.geometry.map(f),
            h: self.h.map(f),
            hstar: self.hstar.map(f),
            tangent_phi: self.tangent_phi.map(f),
            tangent_xi: self.tangent_xi.iter().map(|&v| f(v)).collect(),
            normal_xi: self.normal_xi.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_f64(&self) -> SubmanifoldPointData<f64> {
        self.map(|v| v.as_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorChoice {
    /// `h`
    Primal,
    /// `h*`
    Dual,
    /// `h⁰ = (h + h*)/2`
    Mid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvatures<S> {
    pub h: Vec<S>,
    pub hstar: Vec<S>,
    pub h0: Vec<S>,
}

pub fn mean_curvatures<S: Scalar>(d: &SubmanifoldPointData<S>) -> MeanCurvatures<S> {
    let h = d.h.mean();
    let hstar = d.hstar.mean();
    let half = S::lit(0.5);
    let h0 = h.iter().zip(&hstar).map(|(&a, &b)| half * (a + b)).collect();
    MeanCurvatures { h, hstar, h0 }
}

/// `g(𝒮(E, F)G, H)` with `𝒮 = ½(R + R*)`, where `R` and `R*` come from the
/// Gauss equation and its dual.
pub fn induced_curvature<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S], f: &[S], g: &[S], h: &[S]) -> Result<S> {
    if let Some(v) = [e, f, g, h].iter().find(|v| v.len() != d.m) {
        return Err(Error::DimensionMismatch { expected: d.m, got: v.len() });
    }
    let k = d.coefficients()?;
    Ok(induced_with(&k, d, e, f, g, h))
}

fn induced_with<S: Scalar>(
    k: &CurvatureCoefficients<S>,
    d: &SubmanifoldPointData<S>,
    e: &[S],
    f: &[S],
    g: &[S],
    h: &[S],
) -> S {
    let ambient = structure_curvature(k, &d.pairing(), e, f, g, h);
    let (a, b) = (&d.h, &d.hstar);
    // R:  − ḡ(h(E,G), h*(F,H)) + ḡ(h*(E,H), h(F,G))
    // R*: − ḡ(h*(E,G), h(F,H)) + ḡ(h(E,H), h*(F,G))
    let r = -dot(&a.apply(e, g), &b.apply(f, h)) + dot(&b.apply(e, h), &a.apply(f, g));
    let r_star = -dot(&b.apply(e, g), &a.apply(f, h)) + dot(&a.apply(e, h), &b.apply(f, g));
    ambient + S::lit(0.5) * (r + r_star)
}

/// Scalar curvature by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCurvature<S> {
    /// `Σ_{i<j} 𝒮(e_i, e_j, e_j, e_i)` through the Gauss equation.
    pub tau_gauss: S,
    /// The closed-form expansion in `α, β, γ, ‖T‖², ‖P‖²` and `h, h*`.
    pub tau_closed: S,
}

pub fn scalar_curvature<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<ScalarCurvature<S>> {
    let k = d.coefficients()?;
    let m = d.m;
    let basis: Vec<Vec<S>> = (0..m).map(|i| crate::linalg::unit(m, i)).collect();
    let mut tau_gauss = S::zero();
    for i in 0..m {
        for j in (i + 1)..m {
            tau_gauss += induced_with(&k, d, &basis[i], &basis[j], &basis[j], &basis[i]);
        }
    }

    let mf = S::from_usize_lossy(m);
    let one = S::one();
    let mut mixed_traces = S::zero();
    let mut cross = S::zero();
    for i in 0..m {
        for j in 0..m {
            let (hii, hjj) = (d.h.entry(i, i), d.h.entry(j, j));
            let (sii, sjj) = (d.hstar.entry(i, i), d.hstar.entry(j, j));
            mixed_traces += dot(&sii, &hjj) + dot(&hii, &sjj);
            cross += dot(&d.h.entry(i, j), &d.hstar.entry(i, j));
        }
    }
    let half = S::lit(0.5);
    let twice_tau = mf * (mf - one) * k.alpha - S::lit(2.0) * (mf - one) * k.beta * d.xi_tangent_norm2()
        + S::lit(3.0) * k.gamma * d.phi_norm2()
        + half * mixed_traces
        - cross;
    Ok(ScalarCurvature { tau_gauss, tau_closed: half * twice_tau })
}

fn check_unit<S: Scalar>(e: &[S], m: usize) -> Result<()> {
    if e.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: e.len() });
    }
    let n = norm(e);
    if (n - S::one()).abs() > S::lit(tolerance::UNIT) {
        return Err(Error::NotUnit(n.as_f64()));
    }
    Ok(())
}

/// `Ric(E) = Σ_i 𝒮(E, b_i, b_i, E)` over an orthonormal frame of `E⊥`.
pub fn ricci<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S]) -> Result<S> {
    check_unit(e, d.m)?;
    let frame = orthogonal_complement_frame(e)?;
    ricci_in_frame(d, e, &frame)
}

/// Ricci curvature summed over a caller-supplied orthonormal frame of `E⊥`.
pub fn ricci_in_frame<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S], frame: &[Vec<S>]) -> Result<S> {
    let k = d.coefficients()?;
    Ok(frame.iter().map(|b| induced_with(&k, d, e, b, b, e)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasoratiValues<S> {
    /// `‖h‖²/m`
    pub c: S,
    /// `‖h*‖²/m`
    pub c_star: S,
    /// `‖h⁰‖²/m`
    pub c0_mid: S,
    /// `(C + C*)/2`
    pub c0_avg: S,
}

pub fn casorati<S: Scalar>(d: &SubmanifoldPointData<S>) -> CasoratiValues<S> {
    let m = S::from_usize_lossy(d.m);
    let c = d.h.norm2() / m;
    let c_star = d.hstar.norm2() / m;
    CasoratiValues { c, c_star, c0_mid: d.h0().norm2() / m, c0_avg: S::lit(0.5) * (c + c_star) }
}

/// `C(W) = ‖h|_W‖² / (m − 1)` for the hyperplane `W = u⊥`.
pub fn hyperplane_casorati_at<S: Scalar>(h: &SecondFundamentalForm<S>, u: &[S]) -> S {
    h.restricted_norm2(u) / S::from_usize_lossy(h.m - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneExtremum<S> {
    pub value: S,
    /// Unit normal of the extremal hyperplane.
    pub normal: Vec<S>,
}

/// Infimum or supremum of `C(W)` over hyperplanes `W` of `T_pN`.
pub fn hyperplane_casorati<S: Scalar>(
    d: &SubmanifoldPointData<S>,
    which: TensorChoice,
    mode: Extremum,
) -> Result<HyperplaneExtremum<S>> {
    hyperplane_extremum(&d.tensor(which), mode)
}

pub fn hyperplane_extremum<S: Scalar>(h: &SecondFundamentalForm<S>, mode: Extremum) -> Result<HyperplaneExtremum<S>> {
    if h.m < 2 {
        return Err(Error::DimensionTooSmall(h.m));
    }
    let (restricted, normal) = sphere::extremize_restricted_norm(h, mode);
    Ok(HyperplaneExtremum { value: restricted / S::from_usize_lossy(h.m - 1), normal })
}

/// The normalized Casorati curvatures of one tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPair<S> {
    /// `½C + ((m+1)/2m) inf_W C(W)`
    pub delta: S,
    /// `2C − ((2m−1)/2m) sup_W C(W)`
    pub delta_hat: S,
    pub inf_w: S,
    pub sup_w: S,
}

pub fn delta_pair<S: Scalar>(h: &SecondFundamentalForm<S>) -> Result<DeltaPair<S>> {
    let m = S::from_usize_lossy(h.m);
    let c = h.norm2() / m;
    let inf_w = hyperplane_extremum(h, Extremum::Min)?.value;
    let sup_w = hyperplane_extremum(h, Extremum::Max)?.value;
    let two = S::lit(2.0);
    Ok(DeltaPair {
        delta: S::lit(0.5) * c + (m + S::one()) / (two * m) * inf_w,
        delta_hat: two * c - (two * m - S::one()) / (two * m) * sup_w,
        inf_w,
        sup_w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedDeltas<S> {
    pub primal: DeltaPair<S>,
    pub dual: DeltaPair<S>,
    pub mid: DeltaPair<S>,
}

pub fn normalized_deltas<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<NormalizedDeltas<S>> {
    if d.m < 2 {
        return Err(Error::DimensionTooSmall(d.m));
    }
    Ok(NormalizedDeltas { primal: delta_pair(&d.h)?, dual: delta_pair(&d.hstar)?, mid: delta_pair(&d.h0())? })
}

/// Every scalar invariant the inequality checks consume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary<S> {
    pub tau: S,
    pub rho: S,
    pub c: S,
    pub c_star: S,
    pub c0_mid: S,
    pub c0_avg: S,
    pub delta: S,
    pub delta_star: S,
    pub delta_hat: S,
    pub delta_hat_star: S,
    pub delta_mid: S,
    pub delta_hat_mid: S,
    pub h_norm2: S,
    pub hstar_norm2: S,
    pub h0_norm2: S,
    pub phi_norm2: S,
    pub t_norm2: S,
}

pub fn summarize<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<CurvatureSummary<S>> {
    if d.m < 2 {
        return Err(Error::DimensionTooSmall(d.m));
    }
    let tau = scalar_curvature(d)?.tau_gauss;
    let mf = S::from_usize_lossy(d.m);
    let cas = casorati(d);
    let deltas = normalized_deltas(d)?;
    let means = mean_curvatures(d);
    Ok(CurvatureSummary {
        tau,
        rho: S::lit(2.0) * tau / (mf * (mf - S::one())),
        c: cas.c,
        c_star: cas.c_star,
        c0_mid: cas.c0_mid,
        c0_avg: cas.c0_avg,
        delta: deltas.primal.delta,
        delta_star: deltas.dual.delta,
        delta_hat: deltas.primal.delta_hat,
        delta_hat_star: deltas.dual.delta_hat,
        delta_mid: deltas.mid.delta,
        delta_hat_mid: deltas.mid.delta_hat,
        h_norm2: norm2(&means.h),
        hstar_norm2: norm2(&means.hstar),
        h0_norm2: norm2(&means.h0),
        phi_norm2: d.phi_norm2(),
        t_norm2: d.xi_tangent_norm2(),
    })
}
