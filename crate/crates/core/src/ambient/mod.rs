//! The ambient statistical warped product `R ×_f M(c)` at a point.
//!
//! Frames are orthonormal for the warped metric, so `ḡ` is the dot product.
//! Coordinate 0 is the line factor (`∂z`); coordinates `1..=2n` are the fiber,
//! on which the complex structure `J` acts. The structure tensor `φ` kills
//! `∂z` and acts by `J` on the fiber.

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, orthogonal_complement_frame, sym_eig_max, Matrix, SymMat};
use crate::submanifold::SubmanifoldPointData;
use crate::{tolerance, Error, Result, Scalar};

/// Closed-form warping functions, plus `Custom` for user-supplied jets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// `f = e^{rate z}`
    Exp { rate: f64 },
    /// `f = cosh z`
    Cosh,
    /// `f = intercept + slope z`
    Linear { intercept: f64, slope: f64 },
    /// `f = value`
    Const { value: f64 },
    /// Values supplied directly; cannot be re-evaluated at other `z`.
    Custom,
}

impl ProfileKind {
    pub const EXP: ProfileKind = ProfileKind::Exp { rate: 1.0 };
    pub const LINEAR: ProfileKind = ProfileKind::Linear { intercept: 1.0, slope: 1.0 };
    pub const CONST: ProfileKind = ProfileKind::Const { value: 1.0 };

    /// Parses `exp`, `cosh`, `linear`, `const` (default parameters) and the
    /// parameterized forms `exp:RATE`, `linear:INTERCEPT:SLOPE`, `const:VALUE`.
    pub fn parse(s: &str) -> Result<ProfileKind> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let nums: std::result::Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
        let nums = nums.map_err(|e| Error::Config(format!("profile `{s}`: {e}")))?;
        let kind = match (name, nums.as_slice()) {
            ("exp", []) => Self::EXP,
            ("exp", [rate]) => ProfileKind::Exp { rate: *rate },
            ("cosh", []) => ProfileKind::Cosh,
            ("linear", []) => Self::LINEAR,
            ("linear", [a, b]) => ProfileKind::Linear { intercept: *a, slope: *b },
            ("const", []) => Self::CONST,
            ("const", [c]) => ProfileKind::Const { value: *c },
            _ => return Err(Error::Config(format!("unknown warping profile `{s}`"))),
        };
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Exp { .. } => "exp",
            ProfileKind::Cosh => "cosh",
            ProfileKind::Linear { .. } => "linear",
            ProfileKind::Const { .. } => "const",
            ProfileKind::Custom => "custom",
        }
    }

    /// `(f, f', f'')` at `z`, or `None` for `Custom`.
    pub fn eval<S: Scalar>(&self, z: S) -> Option<(S, S, S)> {
        Some(match *self {
            ProfileKind::Exp { rate } => {
                let r = S::lit(rate);
                let f = (r * z).exp();
                (f, r * f, r * r * f)
            }
            ProfileKind::Cosh => (z.cosh(), z.sinh(), z.cosh()),
            ProfileKind::Linear { intercept, slope } => {
                (S::lit(intercept) + S::lit(slope) * z, S::lit(slope), S::zero())
            }
            ProfileKind::Const { value } => (S::lit(value), S::zero(), S::zero()),
            ProfileKind::Custom => return None,
        })
    }
}

/// The 2-jet `(f, f', f'')` of the warping function at `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpingProfile<S> {
    #[serde(flatten)]
    pub kind: ProfileKind,
    pub z: S,
    pub f: S,
    pub fp: S,
    pub fpp: S,
}

impl<S: Scalar> WarpingProfile<S> {
    /// Evaluates a builtin profile at `z`.
    pub fn new(kind: ProfileKind, z: S) -> Result<Self> {
        let (f, fp, fpp) = kind.eval(z).ok_or_else(|| Error::ProfileNotEvaluable(kind.name().into()))?;
        let p = WarpingProfile { kind, z, f, fp, fpp };
        p.check_positive()?;
        Ok(p)
    }

    pub fn custom(z: S, f: S, fp: S, fpp: S) -> Result<Self> {
        let p = WarpingProfile { kind: ProfileKind::Custom, z, f, fp, fpp };
        p.check_positive()?;
        Ok(p)
    }

    /// `f ≡ 1`.
    pub fn unit() -> Self {
        WarpingProfile { kind: ProfileKind::CONST, z: S::zero(), f: S::one(), fp: S::zero(), fpp: S::zero() }
    }

    fn check_positive(&self) -> Result<()> {
        if self.f > S::zero() && self.f.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveWarping(self.f.as_f64()))
        }
    }

    /// `f > 0` and, for builtin kinds, the stored jet matches the closed form.
    pub fn validate(&self) -> Result<()> {
        self.check_positive()?;
        if let Some((f, fp, fpp)) = self.kind.eval(self.z) {
            for (name, stored, exact) in [("f", self.f, f), ("f'", self.fp, fp), ("f''", self.fpp, fpp)] {
                let tol = S::lit(tolerance::PROFILE) * exact.abs().max(S::one());
                if (stored - exact).abs() > tol {
                    return Err(Error::InvalidStructure(format!(
                        "{} profile: stored {name} = {stored} but closed form gives {exact}",
                        self.kind.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> WarpingProfile<T> {
        WarpingProfile { kind: self.kind, z: f(self.z), f: f(self.f), fp: f(self.fp), fpp: f(self.fpp) }
    }
}

/// Coefficients of the ambient curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureCoefficients<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

/// `α = c/(4f²) − (f'/f)²`, `β = α + f''/f`, `γ = c/(4f²)`.
pub fn coefficients<S: Scalar>(profile: &WarpingProfile<S>, cbar: S) -> Result<CurvatureCoefficients<S>> {
    profile.check_positive()?;
    let f = profile.f;
    let gamma = cbar / (S::lit(4.0) * f * f);
    let ratio = profile.fp / f;
    let alpha = gamma - ratio * ratio;
    let beta = alpha + profile.fpp / f;
    Ok(CurvatureCoefficients { alpha, beta, gamma })
}

/// Pointwise model of `R ×_f M(c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientGeometry<S> {
    /// Complex dimension of the fiber; the ambient has real dimension `2n + 1`.
    pub n: usize,
    pub cbar: S,
    pub profile: WarpingProfile<S>,
    /// Complex structure on the fiber in an orthonormal frame (`2n × 2n`).
    pub j: Matrix<S>,
}

/// `J e_{2i} = e_{2i+1}`, `J e_{2i+1} = -e_{2i}` on `R^{2n}`.
pub fn standard_complex_structure<S: Scalar>(n: usize) -> Matrix<S> {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(2 * i + 1, 2 * i)] = S::one();
        j[(2 * i, 2 * i + 1)] = -S::one();
    }
    j
}

impl<S: Scalar> AmbientGeometry<S> {
    /// Geometry with the standard complex structure.
    pub fn new(n: usize, cbar: S, profile: WarpingProfile<S>) -> Self {
        AmbientGeometry { n, cbar, profile, j: standard_complex_structure(n) }
    }

    pub fn with_structure(n: usize, cbar: S, profile: WarpingProfile<S>, j: Matrix<S>) -> Result<Self> {
        let g = AmbientGeometry { n, cbar, profile, j };
        g.validate()?;
        Ok(g)
    }

    /// `J² = −I` and `Jᵀ = −J` within `1e-12`; profile valid.
    pub fn validate(&self) -> Result<()> {
        let d = 2 * self.n;
        if self.j.rows() != d || self.j.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: self.j.rows() });
        }
        let tol = S::lit(1e-12);
        let j2 = self.j.matmul(&self.j)?;
        for r in 0..d {
            for c in 0..d {
                let want = if r == c { -S::one() } else { S::zero() };
                if (j2[(r, c)] - want).abs() > tol {
                    return Err(Error::InvalidStructure("J² ≠ −I".into()));
                }
            }
        }
        if self.j.skewness_defect() > tol {
            return Err(Error::InvalidStructure("J is not skew-symmetric".into()));
        }
        self.profile.validate()
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn coefficients(&self) -> Result<CurvatureCoefficients<S>> {
        coefficients(&self.profile, self.cbar)
    }

    /// `φ v`: zero on `∂z`, `J` on the fiber.
    pub fn phi(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        out[1..].copy_from_slice(&self.j.mul_vec(&v[1..]));
        out
    }

    /// Embeds a fiber vector as an ambient vector with no `∂z` component.
    pub fn lift(&self, fiber: &[S]) -> Vec<S> {
        let mut v = Vec::with_capacity(fiber.len() + 1);
        v.push(S::zero());
        v.extend_from_slice(fiber);
        v
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T + Copy) -> AmbientGeometry<T> {
        AmbientGeometry { n: self.n, cbar: f(self.cbar), profile: self.profile.map(f), j: self.j.map(f) }
    }
}

/// The three pairings the ambient curvature formula consumes.
pub trait StructurePairing<S: Scalar> {
    /// `ḡ(x, y)`
    fn metric(&self, x: &[S], y: &[S]) -> S;
    /// `η(x) = ḡ(x, ∂z)`
    fn eta(&self, x: &[S]) -> S;
    /// `ḡ(x, φy)`
    fn phi_pair(&self, x: &[S], y: &[S]) -> S;
}

struct AmbientPairing<'a, S> {
    geo: &'a AmbientGeometry<S>,
}

impl<S: Scalar> StructurePairing<S> for AmbientPairing<'_, S> {
    fn metric(&self, x: &[S], y: &[S]) -> S {
        dot(x, y)
    }
    fn eta(&self, x: &[S]) -> S {
        x[0]
    }
    fn phi_pair(&self, x: &[S], y: &[S]) -> S {
        dot(x, &self.geo.phi(y))
    }
}

/// `S̄(E, F, G, H) = ḡ(S̄(E, F)G, H)` from the coefficients and the pairings.
pub fn structure_curvature<S: Scalar, P: StructurePairing<S> + ?Sized>(
    k: &CurvatureCoefficients<S>,
    pairing: &P,
    e: &[S],
    f: &[S],
    g: &[S],
    h: &[S],
) -> S {
    let m = |x: &[S], y: &[S]| pairing.metric(x, y);
    let (eta_e, eta_f, eta_g, eta_h) = (pairing.eta(e), pairing.eta(f), pairing.eta(g), pairing.eta(h));
    let alpha_term = m(e, h) * m(f, g) - m(e, g) * m(f, h);
    let beta_term = m(e, g) * eta_f * eta_h - m(f, g) * eta_e * eta_h + m(f, h) * eta_e * eta_g
        - m(e, h) * eta_f * eta_g;
    // ḡ(φF, H) = ḡ(H, φF)
    let gamma_term = pairing.phi_pair(e, g) * pairing.phi_pair(h, f)
        - pairing.phi_pair(f, g) * pairing.phi_pair(h, e)
        + S::lit(2.0) * pairing.phi_pair(e, f) * pairing.phi_pair(h, g);
    k.alpha * alpha_term + k.beta * beta_term + k.gamma * gamma_term
}

fn check_len<S>(expected: usize, vs: [&[S]; 4]) -> Result<()> {
    match vs.iter().find(|v| v.len() != expected) {
        Some(v) => Err(Error::DimensionMismatch { expected, got: v.len() }),
        None => Ok(()),
    }
}

/// Curvature of the holomorphic space form `M(c)` on fiber vectors.
pub fn space_form_curvature<S: Scalar>(
    e: &[S],
    f: &[S],
    g: &[S],
    h: &[S],
    geo: &AmbientGeometry<S>,
) -> Result<S> {
    check_len(2 * geo.n, [e, f, g, h])?;
    let j = |v: &[S]| geo.j.mul_vec(v);
    let (je, jf, jg) = (j(e), j(f), j(g));
    let value = dot(f, g) * dot(e, h) - dot(e, g) * dot(f, h) + dot(&jf, g) * dot(&je, h)
        - dot(&je, g) * dot(&jf, h)
        + S::lit(2.0) * dot(e, &jf) * dot(&jg, h);
    Ok(geo.cbar / S::lit(4.0) * value)
}

/// Statistical curvature `S̄(E, F, G, H)` of the warped product on ambient vectors.
pub fn ambient_curvature<S: Scalar>(
    e: &[S],
    f: &[S],
    g: &[S],
    h: &[S],
    geo: &AmbientGeometry<S>,
) -> Result<S> {
    check_len(geo.dim(), [e, f, g, h])?;
    let k = geo.coefficients()?;
    Ok(structure_curvature(&k, &AmbientPairing { geo }, e, f, g, h))
}

/// The ambient sectional curvature on tangent 2-planes through `E`, as a
/// quadratic form on `E⊥ ∩ T_pN`.
#[derive(Debug, Clone)]
pub struct SectionalForm<S> {
    /// `Q_ij = ½[S̄(E,b_i,b_j,E) + S̄(E,b_j,b_i,E)]`
    pub matrix: SymMat<S>,
    /// Orthonormal frame `{b_i}` of `E⊥` in tangent coordinates.
    pub frame: Vec<Vec<S>>,
}

impl<S: Scalar> SectionalForm<S> {
    /// Largest sectional curvature over planes `E ∧ F` and a maximizing unit `F`.
    pub fn max(&self) -> (S, Vec<S>) {
        let (value, coeffs) = sym_eig_max(&self.matrix);
        let d = self.frame.first().map_or(0, Vec::len);
        let mut f = vec![S::zero(); d];
        for (c, b) in coeffs.iter().zip(&self.frame) {
            crate::linalg::axpy(*c, b, &mut f);
        }
        (value, f)
    }
}

pub fn sectional_form_matrix<S: Scalar>(e: &[S], data: &SubmanifoldPointData<S>) -> Result<SectionalForm<S>> {
    if data.m < 2 {
        return Err(Error::DimensionTooSmall(data.m));
    }
    if e.len() != data.m {
        return Err(Error::DimensionMismatch { expected: data.m, got: e.len() });
    }
    let n = crate::linalg::norm(e);
    if (n - S::one()).abs() > S::lit(tolerance::UNIT) {
        return Err(Error::NotUnit(n.as_f64()));
    }
    let frame = orthogonal_complement_frame(e)?;
    let k = data.geometry.coefficients()?;
    let pairing = data.pairing();
    let half = S::lit(0.5);
    let matrix = SymMat::from_upper(frame.len(), |i, j| {
        let a = structure_curvature(&k, &pairing, e, &frame[i], &frame[j], e);
        let b = structure_curvature(&k, &pairing, e, &frame[j], &frame[i], e);
        half * (a + b)
    });
    Ok(SectionalForm { matrix, frame })
}

/// `max K̄(E ∧ ·)` over tangent planes containing `E`, with the maximizing direction.
pub fn max_sectional_curvature<S: Scalar>(e: &[S], data: &SubmanifoldPointData<S>) -> Result<(S, Vec<S>)> {
    Ok(sectional_form_matrix(e, data)?.max())
}
