//! Seeded generation of realizable point data from an explicit ambient frame.
//!
//! A tangent frame `e_1..e_m` of `R^{2n+1}` is drawn per class, the normal frame
//! completes it, and `P`, `T`, `λ` are read off by projection, so skewness of
//! `P` and `‖T‖² + Σλ² = 1` hold by construction.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientGeometry, ProfileKind, WarpingProfile};
use crate::linalg::{dot, norm, orthogonal_complement, orthonormalize, Matrix};
use crate::submanifold::{mean_curvatures, SecondFundamentalForm, SubmanifoldPointData};
use crate::{tolerance, Error, PointData, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmanifoldClass {
    Generic,
    TotallyGeodesic,
    /// `h* = −h`
    DualEqual,
    /// Tangent space an isotropic subspace of the fiber.
    Legendrian,
    /// Tangent space `𝒥`-invariant inside the fiber.
    Invariant,
    /// Tangent space inside `R∂z ⊕ L` with `L` isotropic.
    AntiInvariant,
    /// Equality data for the Ricci bound at `E = e₁`.
    ChenRicciEquality,
}

impl SubmanifoldClass {
    pub const ALL: [SubmanifoldClass; 7] = [
        SubmanifoldClass::Generic,
        SubmanifoldClass::TotallyGeodesic,
        SubmanifoldClass::DualEqual,
        SubmanifoldClass::Legendrian,
        SubmanifoldClass::Invariant,
        SubmanifoldClass::AntiInvariant,
        SubmanifoldClass::ChenRicciEquality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SubmanifoldClass::Generic => "generic",
            SubmanifoldClass::TotallyGeodesic => "totally_geodesic",
            SubmanifoldClass::DualEqual => "dual_equal",
            SubmanifoldClass::Legendrian => "legendrian",
            SubmanifoldClass::Invariant => "invariant",
            SubmanifoldClass::AntiInvariant => "anti_invariant",
            SubmanifoldClass::ChenRicciEquality => "chen_ricci_equality",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown submanifold class `{s}`")))
    }

    /// Whether an `m`-dimensional submanifold of this class fits in `R^{2n+1}`.
    pub fn admits(&self, m: usize, n: usize) -> bool {
        match self {
            SubmanifoldClass::Legendrian => m <= n,
            SubmanifoldClass::AntiInvariant => m <= n + 1,
            SubmanifoldClass::Invariant => m % 2 == 0 && m <= 2 * n,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub m: usize,
    pub p: usize,
    pub n: usize,
    pub profile: ProfileKind,
    pub z: f64,
    pub cbar: f64,
    pub class: SubmanifoldClass,
    /// Standard deviation of the entries of `h` and `h*`.
    pub magnitude: f64,
}

impl Scenario {
    /// Codimension and fiber size follow from `m + p = 2n + 1`.
    pub fn new(seed: u64, m: usize, p: usize, class: SubmanifoldClass) -> Result<Self> {
        if (m + p) % 2 == 0 {
            return Err(Error::Scenario(format!("m + p = {} must be odd", m + p)));
        }
        let s = Scenario {
            seed,
            m,
            p,
            n: (m + p - 1) / 2,
            profile: ProfileKind::EXP,
            z: 0.0,
            cbar: 0.0,
            class,
            magnitude: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Scenario(format!("m = {} < 2", self.m)));
        }
        if self.p < 1 {
            return Err(Error::Scenario("p must be at least 1".into()));
        }
        if self.m + self.p != 2 * self.n + 1 {
            return Err(Error::Scenario(format!("m + p = {} but 2n + 1 = {}", self.m + self.p, 2 * self.n + 1)));
        }
        if !(self.magnitude > 0.0 && self.magnitude.is_finite()) {
            return Err(Error::Scenario(format!("magnitude {} must be positive", self.magnitude)));
        }
        if !self.cbar.is_finite() || !self.z.is_finite() {
            return Err(Error::Scenario("cbar and z must be finite".into()));
        }
        if !self.class.admits(self.m, self.n) {
            return Err(Error::Scenario(format!(
                "class {} does not admit m = {} in dimension {}",
                self.class.name(),
                self.m,
                2 * self.n + 1
            )));
        }
        if self.profile == ProfileKind::Custom {
            return Err(Error::Scenario("scenarios need a builtin warping profile".into()));
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// `splitmix64(base ⊕ splitmix64(index))`: per-trial seeds independent of scheduling.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}

struct Sampler(ChaCha8Rng);

impl Sampler {
    fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.0)
    }

    fn vector(&mut self, d: usize) -> Vec<f64> {
        (0..d).map(|_| self.gaussian()).collect()
    }

    fn form(&mut self, p: usize, m: usize, scale: f64) -> SecondFundamentalForm<f64> {
        SecondFundamentalForm::from_upper(p, m, |_, _, _| scale * self.gaussian())
    }
}

/// Removes the components of `v` along each (orthonormal) `basis` vector, twice.
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            crate::linalg::axpy(-c, b, v);
        }
    }
}

/// `k` orthonormal fiber vectors spanning a `J`-isotropic subspace (`k ≤ n`).
fn isotropic_fiber(rng: &mut Sampler, geo: &AmbientGeometry<f64>, k: usize) -> Result<Vec<Vec<f64>>> {
    let mut taken: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v = rng.vector(2 * geo.n);
        project_out(&mut v, &taken);
        let v = crate::linalg::normalized(&v).ok_or(Error::ZeroVector)?;
        let jv = geo.j.mul_vec(&v);
        taken.push(v.clone());
        taken.push(jv);
        out.push(v);
    }
    Ok(out)
}

fn tangent_frame(rng: &mut Sampler, s: &Scenario, geo: &AmbientGeometry<f64>) -> Result<Vec<Vec<f64>>> {
    let d = 2 * s.n + 1;
    match s.class {
        SubmanifoldClass::Legendrian => {
            Ok(isotropic_fiber(rng, geo, s.m)?.iter().map(|v| geo.lift(v)).collect())
        }
        SubmanifoldClass::AntiInvariant => {
            let k = s.m.min(s.n);
            let mut span = vec![crate::linalg::unit(d, 0)];
            span.extend(isotropic_fiber(rng, geo, k)?.iter().map(|v| geo.lift(v)));
            let combos: Vec<Vec<f64>> = (0..s.m)
                .map(|_| {
                    let c = rng.vector(span.len());
                    let mut v = vec![0.0; d];
                    for (ci, b) in c.iter().zip(&span) {
                        crate::linalg::axpy(*ci, b, &mut v);
                    }
                    v
                })
                .collect();
            orthonormalize(&combos)
        }
        SubmanifoldClass::Invariant => {
            let mut out: Vec<Vec<f64>> = Vec::with_capacity(s.m);
            for _ in 0..s.m / 2 {
                let mut v = rng.vector(2 * s.n);
                project_out(&mut v, &out);
                let v = crate::linalg::normalized(&v).ok_or(Error::ZeroVector)?;
                let jv = geo.j.mul_vec(&v);
                out.push(v);
                out.push(jv);
            }
            Ok(out.iter().map(|v| geo.lift(v)).collect())
        }
        _ => orthonormalize(&(0..s.m).map(|_| rng.vector(d)).collect::<Vec<_>>()),
    }
}

/// Builds point data for `s`; a pure function of the scenario.
pub fn generate(s: &Scenario) -> Result<PointData> {
    s.validate()?;
    let profile = WarpingProfile::new(s.profile, s.z)?;
    let geo = AmbientGeometry::new(s.n, s.cbar, profile);
    let mut rng = Sampler(ChaCha8Rng::seed_from_u64(s.seed));

    let tangent = tangent_frame(&mut rng, s, &geo)?;
    let normal = orthogonal_complement(&tangent, geo.dim())?;
    if normal.len() != s.p {
        return Err(Error::DimensionMismatch { expected: s.p, got: normal.len() });
    }
    let phi_cols: Vec<Vec<f64>> = tangent.iter().map(|e| geo.phi(e)).collect();
    let p_mat = Matrix::from_fn(s.m, s.m, |i, j| dot(&tangent[i], &phi_cols[j]));
    let t: Vec<f64> = tangent.iter().map(|e| e[0]).collect();
    let lambda: Vec<f64> = normal.iter().map(|xi| xi[0]).collect();

    let (m, p, mag) = (s.m, s.p, s.magnitude);
    let (h, hstar) = match s.class {
        SubmanifoldClass::TotallyGeodesic => (SecondFundamentalForm::zeros(p, m), SecondFundamentalForm::zeros(p, m)),
        SubmanifoldClass::DualEqual => {
            let h = rng.form(p, m, mag);
            let hstar = h.map(|v| -v);
            (h, hstar)
        }
        SubmanifoldClass::ChenRicciEquality => {
            let mut h0 = rng.form(p, m, mag);
            for k in 0..p {
                for i in 1..m {
                    h0.set(k, 0, i, 0.0);
                }
                let rest: f64 = (1..m).map(|i| h0.get(k, i, i)).sum();
                h0.set(k, 0, 0, rest);
            }
            let d = rng.form(p, m, mag);
            let h = h0.zip_with(&d, |a, b| a + b)?;
            let hstar = h0.zip_with(&d, |a, b| a - b)?;
            (h, hstar)
        }
        _ => {
            let h = rng.form(p, m, mag);
            let hstar = rng.form(p, m, mag);
            (h, hstar)
        }
    };
    SubmanifoldPointData::new(geo, h, hstar, p_mat, t, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub passed: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub passed: bool,
    pub checks: BTreeMap<String, AuditCheck>,
}

impl AuditReport {
    fn new() -> Self {
        AuditReport { passed: true, checks: BTreeMap::new() }
    }

    fn record(&mut self, name: &str, residual: f64, tol: f64) {
        let passed = residual.is_finite() && residual <= tol;
        self.passed &= passed;
        self.checks.insert(name.to_string(), AuditCheck { passed, residual });
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| !c.passed).map(|(k, _)| k.as_str()).collect()
    }
}

/// Re-checks the type invariants: shapes, symmetry of `h` and `h*`, skewness of
/// `P`, unit `∂z`, and a valid ambient structure.
pub fn realizability_audit(d: &PointData) -> AuditReport {
    let mut r = AuditReport::new();
    if d.check_shapes().is_err() {
        r.record("shapes", f64::INFINITY, 0.0);
        return r;
    }
    r.record("shapes", 0.0, 0.0);
    r.record("dimension_count", (d.m + d.p) as f64 - d.geometry.dim() as f64, 0.0);
    r.record("h_symmetric", d.h.asymmetry(), tolerance::STRUCTURE);
    r.record("hstar_symmetric", d.hstar.asymmetry(), tolerance::STRUCTURE);
    r.record("p_skew", d.tangent_phi.skewness_defect(), tolerance::STRUCTURE);
    let unit = d.xi_tangent_norm2() + d.normal_xi.iter().map(|l| l * l).sum::<f64>();
    r.record("unit_structure_vector", (unit - 1.0).abs(), tolerance::STRUCTURE);
    // ‖Pᵀ e_i‖² + T_i² ≤ 1: φ e_i has norm √(1 − T_i²)
    let mut phi_excess = 0.0f64;
    for i in 0..d.m {
        let col = d.tangent_phi.row(i).iter().map(|v| v * v).sum::<f64>();
        phi_excess = phi_excess.max(col + d.tangent_xi[i] * d.tangent_xi[i] - 1.0);
    }
    r.record("phi_bounded", phi_excess.max(0.0), tolerance::STRUCTURE);
    r.record("ambient_structure", if d.geometry.validate().is_ok() { 0.0 } else { f64::INFINITY }, 0.0);
    r
}

/// Realizability plus the predicate of `class`.
pub fn class_audit(d: &PointData, class: SubmanifoldClass) -> AuditReport {
    let mut r = realizability_audit(d);
    if !r.checks["shapes"].passed {
        return r;
    }
    let tol = tolerance::STRUCTURE;
    let p_norm = d.tangent_phi.max_abs();
    let t_norm = norm(&d.tangent_xi);
    match class {
        SubmanifoldClass::Generic => {}
        SubmanifoldClass::TotallyGeodesic => {
            r.record("h_zero", d.h.norm2().sqrt(), tol);
            r.record("hstar_zero", d.hstar.norm2().sqrt(), tol);
        }
        SubmanifoldClass::DualEqual => {
            let sum = d.h.zip_with(&d.hstar, |a, b| a + b).map(|s| s.norm2().sqrt()).unwrap_or(f64::INFINITY);
            r.record("h_plus_hstar_zero", sum, tol);
        }
        SubmanifoldClass::Legendrian => {
            r.record("p_zero", p_norm, tol);
            r.record("t_zero", t_norm, tol);
        }
        SubmanifoldClass::AntiInvariant => r.record("p_zero", p_norm, tol),
        SubmanifoldClass::Invariant => {
            r.record("m_even", (d.m % 2) as f64, 0.0);
            r.record("t_zero", t_norm, tol);
            r.record("p_orthogonal", orthogonality_defect(&d.tangent_phi), tol);
        }
        SubmanifoldClass::ChenRicciEquality => {
            let h0 = d.h0();
            let mean = mean_curvatures(d).h0;
            let half_m = d.m as f64 / 2.0;
            let diag: f64 = (0..d.p)
                .map(|k| (h0.get(k, 0, 0) - half_m * mean[k]).powi(2))
                .sum::<f64>()
                .sqrt();
            let off = (1..d.m)
                .map(|i| (0..d.p).map(|k| h0.get(k, 0, i).powi(2)).sum::<f64>().sqrt())
                .fold(0.0, f64::max);
            r.record("h0_diagonal_half_mean", diag, tolerance::PREDICATE);
            r.record("h0_offdiagonal_zero", off, tolerance::PREDICATE);
        }
    }
    r
}

/// `max |PᵀP − I|`
pub fn orthogonality_defect(p: &Matrix<f64>) -> f64 {
    let ptp = p.transpose().matmul(p).expect("square");
    let mut worst = 0.0f64;
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ptp[(i, j)] - want).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(m: usize, p: usize, class: SubmanifoldClass) -> Scenario {
        Scenario { profile: ProfileKind::Cosh, z: 0.3, cbar: 4.0, ..Scenario::new(42, m, p, class).unwrap() }
    }

    #[test]
    fn every_class_passes_its_audit() {
        for class in SubmanifoldClass::ALL {
            let (m, p) = match class {
                SubmanifoldClass::Legendrian => (2, 3),
                SubmanifoldClass::Invariant => (4, 1),
                SubmanifoldClass::AntiInvariant => (3, 2),
                _ => (3, 2),
            };
            let d = generate(&scenario(m, p, class)).unwrap();
            let audit = class_audit(&d, class);
            assert!(audit.passed, "{class:?}: {:?}", audit.failures());
        }
    }

    #[test]
    fn class_examples() {
        let d = generate(&scenario(3, 2, SubmanifoldClass::TotallyGeodesic)).unwrap();
        assert_eq!(d.h.norm2() + d.hstar.norm2(), 0.0);
        let d = generate(&scenario(3, 2, SubmanifoldClass::DualEqual)).unwrap();
        assert_eq!(d.h.zip_with(&d.hstar, |a, b| a + b).unwrap().norm2(), 0.0);
        let d = generate(&scenario(2, 3, SubmanifoldClass::Legendrian)).unwrap();
        assert!(d.tangent_phi.frobenius_norm2().sqrt() <= 1e-12);
    }

    #[test]
    fn invariant_phi_preserves_norms() {
        let d = generate(&scenario(4, 3, SubmanifoldClass::Invariant)).unwrap();
        let e = crate::linalg::normalized(&[0.3, -1.0, 0.4, 2.0]).unwrap();
        assert!((norm(&d.tangent_phi.mul_vec(&e)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn impossible_combinations() {
        assert!(Scenario::new(1, 3, 2, SubmanifoldClass::Invariant).is_err());
        assert!(Scenario::new(1, 3, 2, SubmanifoldClass::Legendrian).is_err());
        assert!(Scenario::new(1, 3, 3, SubmanifoldClass::Generic).is_err());
        let mut s = Scenario::new(1, 3, 2, SubmanifoldClass::Generic).unwrap();
        s.magnitude = 0.0;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn deterministic() {
        let s = scenario(3, 4, SubmanifoldClass::Generic);
        let a = serde_json::to_string(&generate(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&generate(&s).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(trial_seed(7, 0), trial_seed(7, 1));
        assert_eq!(trial_seed(7, 3), trial_seed(7, 3));
    }

    #[test]
    fn audit_negative_cases() {
        let mut d = generate(&scenario(3, 2, SubmanifoldClass::Generic)).unwrap();
        let mut corrupt = d.clone();
        corrupt.tangent_phi = corrupt.tangent_phi.map(|v| v + 0.1);
        assert!(!realizability_audit(&corrupt).checks["p_skew"].passed);
        for l in d.normal_xi.iter_mut() {
            *l *= 2.0;
        }
        if d.normal_xi.iter().any(|l| l.abs() > 1e-6) {
            assert!(!realizability_audit(&d).checks["unit_structure_vector"].passed);
        }
    }
}
