//! Both sides of each inequality at a point, with slack under the proof-faithful
//! and the theorem-stated readings of the right side.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ambient::max_sectional_curvature;
use crate::linalg::{dot, norm, orthogonal_complement_frame};
use crate::scengen::{orthogonality_defect, Scenario, SubmanifoldClass};
use crate::submanifold::{
    casorati, hyperplane_extremum, mean_curvatures, ricci_in_frame, scalar_curvature, Extremum, SecondFundamentalForm,
    SubmanifoldPointData,
};
use crate::tolerance::Tolerances;
use crate::{tolerance, Error, PointData, Result, Scalar};

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scenario: Option<Scenario>,
    pub data: PointData,
    /// The unit vector `E` of a Ricci check.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub direction: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub name: String,
    pub lhs: f64,
    pub rhs_proof: f64,
    pub rhs_stated: f64,
    /// `rhs_proof − lhs`
    pub slack_proof: f64,
    /// `rhs_stated − lhs`
    pub slack_stated: f64,
    pub equality_predicate_holds: bool,
    pub predicate_residuals: BTreeMap<String, f64>,
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl SlackReport {
    fn new(name: &str, lhs: f64, rhs_proof: f64, rhs_stated: f64) -> Self {
        SlackReport {
            name: name.to_string(),
            lhs,
            rhs_proof,
            rhs_stated,
            slack_proof: rhs_proof - lhs,
            slack_stated: rhs_stated - lhs,
            equality_predicate_holds: false,
            predicate_residuals: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn violates(&self, tol: &Tolerances) -> bool {
        !(self.slack_proof >= -tol.violation)
    }

    pub fn stated_negative(&self, tol: &Tolerances) -> bool {
        !(self.slack_stated >= -tol.violation)
    }

    fn diag(mut self, entries: &[(&str, f64)]) -> Self {
        for (k, v) in entries {
            self.diagnostics.insert((*k).to_string(), *v);
        }
        self
    }

    fn attach_witness<S: Scalar>(&mut self, d: &SubmanifoldPointData<S>, e: Option<&[S]>, tol: &Tolerances) {
        if self.violates(tol) {
            self.witness = Some(Witness {
                scenario: None,
                data: d.to_f64(),
                direction: e.map(|v| v.iter().map(|x| x.as_f64()).collect()),
            });
        }
    }
}

/// Pointwise checker with fixed tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Verifier {
    pub tol: Tolerances,
}

/// `α + 3γ‖P‖²/(m(m−1)) − (2β/m)‖T‖² − (m/(2(m−1)))(‖ℋ‖² + ‖ℋ*‖²)`
fn casorati_common<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<f64> {
    let k = d.coefficients()?;
    let m = d.m as f64;
    let means = mean_curvatures(d);
    let h2 = crate::linalg::norm2(&means.h).as_f64() + crate::linalg::norm2(&means.hstar).as_f64();
    Ok(k.alpha.as_f64() + 3.0 * k.gamma.as_f64() * d.phi_norm2().as_f64() / (m * (m - 1.0))
        - 2.0 * k.beta.as_f64() / m * d.xi_tangent_norm2().as_f64()
        - m / (2.0 * (m - 1.0)) * h2)
}

fn rho<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<f64> {
    let m = d.m as f64;
    Ok(2.0 * scalar_curvature(d)?.tau_gauss.as_f64() / (m * (m - 1.0)))
}

fn dual_sum_norm<S: Scalar>(d: &SubmanifoldPointData<S>) -> f64 {
    d.h.zip_with(&d.hstar, |a, b| a + b).map(|s| s.norm2().as_f64().sqrt()).unwrap_or(f64::INFINITY)
}

/// [`DeltaPair::delta`](crate::submanifold::DeltaPair::delta) without the supremum search.
fn delta<S: Scalar>(h: &SecondFundamentalForm<S>) -> Result<f64> {
    let m = h.m as f64;
    let inf_w = hyperplane_extremum(h, Extremum::Min)?.value.as_f64();
    Ok(0.5 * h.norm2().as_f64() / m + (m + 1.0) / (2.0 * m) * inf_w)
}

/// [`DeltaPair::delta_hat`](crate::submanifold::DeltaPair::delta_hat) without the infimum search.
fn delta_hat<S: Scalar>(h: &SecondFundamentalForm<S>) -> Result<f64> {
    let m = h.m as f64;
    let sup_w = hyperplane_extremum(h, Extremum::Max)?.value.as_f64();
    Ok(2.0 * h.norm2().as_f64() / m - (2.0 * m - 1.0) / (2.0 * m) * sup_w)
}

fn check_m<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<()> {
    if d.m < 2 {
        Err(Error::DimensionTooSmall(d.m))
    } else {
        Ok(())
    }
}

fn check_unit<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S]) -> Result<()> {
    if e.len() != d.m {
        return Err(Error::DimensionMismatch { expected: d.m, got: e.len() });
    }
    let n = norm(e);
    if (n - S::one()).abs() > S::lit(tolerance::UNIT) {
        return Err(Error::NotUnit(n.as_f64()));
    }
    Ok(())
}

/// Right side of the Ricci bound before the sectional-curvature term, with
/// the `φE` contribution supplied by the caller.
fn ricci_base<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S], phi_e2: f64) -> Result<f64> {
    let k = d.coefficients()?;
    let m = d.m as f64;
    let et = dot(e, &d.tangent_xi).as_f64();
    let h0 = crate::linalg::norm2(&mean_curvatures(d).h0).as_f64();
    Ok(k.alpha.as_f64() * (m - 1.0)
        + 3.0 * k.gamma.as_f64() * phi_e2
        + k.beta.as_f64() * ((2.0 - m) * et * et - d.xi_tangent_norm2().as_f64())
        + m * m / 2.0 * h0)
}

/// Residuals of `h⁰(E,E) = (m/2)ℋ⁰` and `h(E,F) = −h*(E,F)` for `F ⊥ E`.
fn ricci_equality_residuals<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S], frame: &[Vec<S>]) -> (f64, f64) {
    let h0 = d.h0();
    let half_m = S::from_usize_lossy(d.m) * S::lit(0.5);
    let mean = mean_curvatures(d).h0;
    let diag: Vec<S> = h0.apply(e, e).iter().zip(&mean).map(|(&a, &b)| a - half_m * b).collect();
    let off = frame
        .iter()
        .map(|f| {
            let a = d.h.apply(e, f);
            let b = d.hstar.apply(e, f);
            norm(&a.iter().zip(&b).map(|(&x, &y)| x + y).collect::<Vec<_>>()).as_f64()
        })
        .fold(0.0, f64::max);
    (norm(&diag).as_f64(), off)
}

impl Verifier {
    pub fn new(tol: Tolerances) -> Self {
        Verifier { tol }
    }

    /// Normalized scalar curvature against the `δ`-family bound.
    pub fn check_casorati<S: Scalar>(&self, d: &SubmanifoldPointData<S>) -> Result<SlackReport> {
        check_m(d)?;
        let m = d.m as f64;
        let lhs = rho(d)?;
        let common = casorati_common(d)?;
        let cas = casorati(d);
        let c_avg = cas.c0_avg.as_f64();
        let inf_mid = hyperplane_extremum(&d.h0(), Extremum::Min)?.value.as_f64();
        let rhs_proof = 0.5 * cas.c0_mid.as_f64() + (m + 1.0) / (2.0 * m) * inf_mid + c_avg / (m - 1.0) + common;
        let delta_sum = delta(&d.h)? + delta(&d.hstar)?;
        let rhs_stated = delta_sum + c_avg / (m - 1.0) + common;
        let sum_norm = dual_sum_norm(d);
        let mut r = SlackReport::new("casorati", lhs, rhs_proof, rhs_stated).diag(&[
            ("c0_mid", cas.c0_mid.as_f64()),
            ("c0_avg", c_avg),
            ("inf_w_c0_mid", inf_mid),
            ("delta_plus_delta_star", delta_sum),
        ]);
        r.predicate_residuals.insert("h_plus_hstar".into(), sum_norm);
        r.equality_predicate_holds = sum_norm <= self.tol.predicate;
        r.attach_witness(d, None, &self.tol);
        Ok(r)
    }

    /// Normalized scalar curvature against the `δ̂`-family bound.
    pub fn check_casorati_hat<S: Scalar>(&self, d: &SubmanifoldPointData<S>) -> Result<SlackReport> {
        check_m(d)?;
        let m = d.m as f64;
        let lhs = rho(d)?;
        let common = casorati_common(d)?;
        let cas = casorati(d);
        let c_avg = cas.c0_avg.as_f64();
        let sup_mid = hyperplane_extremum(&d.h0(), Extremum::Max)?.value.as_f64();
        let rhs_proof = 2.0 * cas.c0_mid.as_f64() - (m + 1.0) / (2.0 * m) * sup_mid + c_avg / (m - 1.0) + common;
        let hat_sum = delta_hat(&d.h)? + delta_hat(&d.hstar)?;
        let rhs_stated = hat_sum + c_avg / (m - 1.0) + common;
        let sum_norm = dual_sum_norm(d);
        let mut r = SlackReport::new("casorati_hat", lhs, rhs_proof, rhs_stated).diag(&[
            ("c0_mid", cas.c0_mid.as_f64()),
            ("c0_avg", c_avg),
            ("sup_w_c0_mid", sup_mid),
            ("delta_hat_plus_delta_hat_star", hat_sum),
        ]);
        r.predicate_residuals.insert("h_plus_hstar".into(), sum_norm);
        r.equality_predicate_holds = sum_norm <= self.tol.predicate;
        r.attach_witness(d, None, &self.tol);
        Ok(r)
    }

    /// Both directions of the equality characterization for the two Casorati bounds.
    pub fn check_equality_characterization<S: Scalar>(&self, d: &SubmanifoldPointData<S>) -> Result<EqualityReport> {
        let plain = self.check_casorati(d)?;
        let hat = self.check_casorati_hat(d)?;
        let predicate = plain.equality_predicate_holds;
        let equality = plain.slack_proof.abs() <= self.tol.slack_zero;
        let hat_equality = hat.slack_proof.abs() <= self.tol.slack_zero;
        Ok(EqualityReport {
            predicate,
            equality,
            hat_equality,
            consistent: predicate == equality && predicate == hat_equality,
            h_plus_hstar: plain.predicate_residuals["h_plus_hstar"],
            slack_proof: plain.slack_proof,
            slack_hat_proof: hat.slack_proof,
        })
    }

    /// Ricci curvature in direction `E` against the sectional-curvature bound.
    pub fn check_chen_ricci<S: Scalar>(&self, d: &SubmanifoldPointData<S>, e: &[S]) -> Result<SlackReport> {
        check_m(d)?;
        check_unit(d, e)?;
        let m = d.m as f64;
        let frame = orthogonal_complement_frame(e)?;
        let lhs = ricci_in_frame(d, e, &frame)?.as_f64();
        let (max_k, _) = max_sectional_curvature(e, d)?;
        let max_k = max_k.as_f64();
        let phi_tan = crate::linalg::norm2(&d.tangent_phi.mul_vec(e)).as_f64();
        let et = dot(e, &d.tangent_xi).as_f64();
        let phi_full = 1.0 - et * et;
        let sectional = 2.0 * (m - 1.0) * max_k;
        let rhs_proof = ricci_base(d, e, phi_tan)? - sectional;
        let rhs_stated = ricci_base(d, e, phi_full)? - sectional;
        let (diag, off) = ricci_equality_residuals(d, e, &frame);
        let mut r = SlackReport::new("chen_ricci", lhs, rhs_proof, rhs_stated).diag(&[
            ("max_sectional", max_k),
            ("phi_e_tangential", phi_tan),
            ("phi_e_ambient", phi_full),
        ]);
        r.predicate_residuals.insert("h0_ee_minus_half_m_mean".into(), diag);
        r.predicate_residuals.insert("h_plus_hstar_e_perp".into(), off);
        r.equality_predicate_holds = diag <= self.tol.predicate && off <= self.tol.predicate;
        r.attach_witness(d, Some(e), &self.tol);
        Ok(r)
    }

    /// The Ricci bound rearranged for `Ric(E) = 0`.
    ///
    /// The stated right side carries `3γ` with no `‖φE‖²` factor; the proof
    /// side keeps the tangential factor. Fails unless `|Ric(E)| ≤ flat_tol`.
    pub fn check_ricci_flat<S: Scalar>(&self, d: &SubmanifoldPointData<S>, e: &[S], flat_tol: f64) -> Result<SlackReport> {
        let theorem = self.check_chen_ricci(d, e)?;
        let ric = theorem.lhs;
        if !(ric.abs() <= flat_tol) {
            return Err(Error::NotRicciFlat { ricci: ric, tol: flat_tol });
        }
        let m = d.m as f64;
        let lhs = 2.0 * (m - 1.0) * theorem.diagnostics["max_sectional"];
        let k = d.coefficients()?;
        let rhs_proof = ricci_base(d, e, theorem.diagnostics["phi_e_tangential"])?;
        let rhs_stated = ricci_base(d, e, 0.0)? + 3.0 * k.gamma.as_f64();
        let mut r = SlackReport::new("ricci_flat", lhs, rhs_proof, rhs_stated);
        let identity = (r.slack_proof - (theorem.slack_proof + ric)).abs();
        r.diagnostics = theorem.diagnostics.clone();
        r.diagnostics.insert("ricci".into(), ric);
        r.diagnostics.insert("theorem_slack_proof".into(), theorem.slack_proof);
        r.diagnostics.insert("rearrangement_residual".into(), identity);
        r.predicate_residuals = theorem.predicate_residuals.clone();
        r.equality_predicate_holds = theorem.equality_predicate_holds;
        r.attach_witness(d, Some(e), &self.tol);
        Ok(r)
    }

    /// Class-specialized bound next to the general one.
    ///
    /// Legendrian data is checked against the Casorati bound (`E` unused);
    /// invariant and anti-invariant data against the Ricci bound at `E`. The
    /// `specialization_gap` diagnostic is `|specialized − general|`.
    pub fn check_special_class<S: Scalar>(
        &self,
        d: &SubmanifoldPointData<S>,
        class: SubmanifoldClass,
        e: &[S],
    ) -> Result<SlackReport> {
        let tol = tolerance::SPECIALIZATION;
        let fail = |detail: String| Err(Error::ClassPredicate { class: class.name().into(), detail });
        let p_norm = d.tangent_phi.max_abs().as_f64();
        let t_norm = norm(&d.tangent_xi).as_f64();
        match class {
            SubmanifoldClass::Legendrian => {
                if p_norm > tol || t_norm > tol {
                    return fail(format!("needs P = 0 and T = 0, got max|P| = {p_norm:e}, ‖T‖ = {t_norm:e}"));
                }
                let general = self.check_casorati(d)?;
                let m = d.m as f64;
                let k = d.coefficients()?;
                let means = mean_curvatures(d);
                let h2 = crate::linalg::norm2(&means.h).as_f64() + crate::linalg::norm2(&means.hstar).as_f64();
                let specialized = general.diagnostics["delta_plus_delta_star"]
                    + general.diagnostics["c0_avg"] / (m - 1.0)
                    + k.alpha.as_f64()
                    - m / (2.0 * (m - 1.0)) * h2;
                let mut r = SlackReport::new("legendrian_casorati", general.lhs, general.rhs_proof, specialized);
                r.diagnostics = general.diagnostics;
                r.diagnostics.insert("specialization_gap".into(), (specialized - general.rhs_stated).abs());
                r.predicate_residuals = general.predicate_residuals;
                r.equality_predicate_holds = general.equality_predicate_holds;
                r.attach_witness(d, None, &self.tol);
                Ok(r)
            }
            SubmanifoldClass::AntiInvariant | SubmanifoldClass::Invariant => {
                let three_gamma = 3.0 * d.coefficients()?.gamma.as_f64();
                let (name, phi_term) = if class == SubmanifoldClass::AntiInvariant {
                    if p_norm > tol {
                        return fail(format!("needs P = 0, got max|P| = {p_norm:e}"));
                    }
                    ("anti_invariant_chen_ricci", 0.0)
                } else {
                    let defect = orthogonality_defect(&d.tangent_phi.map(|v| v.as_f64()));
                    if d.m % 2 != 0 || defect > tol || t_norm > tol {
                        return fail(format!(
                            "needs even m, PᵀP = I and T = 0, got m = {}, defect {defect:e}, ‖T‖ = {t_norm:e}",
                            d.m
                        ));
                    }
                    ("invariant_chen_ricci", three_gamma)
                };
                let general = self.check_chen_ricci(d, e)?;
                let sectional = 2.0 * (d.m as f64 - 1.0) * general.diagnostics["max_sectional"];
                let specialized = ricci_base(d, e, 0.0)? + phi_term - sectional;
                let mut r = SlackReport::new(name, general.lhs, general.rhs_proof, specialized);
                r.diagnostics = general.diagnostics;
                r.diagnostics.insert("specialization_gap".into(), (specialized - general.rhs_proof).abs());
                r.predicate_residuals = general.predicate_residuals;
                r.equality_predicate_holds = general.equality_predicate_holds;
                r.attach_witness(d, Some(e), &self.tol);
                Ok(r)
            }
            other => Err(Error::ClassPredicate {
                class: other.name().into(),
                detail: "no specialized bound for this class".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    /// `‖h + h*‖ ≤ tol`
    pub predicate: bool,
    /// `|slack_proof| ≤ tol` for the `δ` bound.
    pub equality: bool,
    /// `|slack_proof| ≤ tol` for the `δ̂` bound.
    pub hat_equality: bool,
    /// All three agree.
    pub consistent: bool,
    pub h_plus_hstar: f64,
    pub slack_proof: f64,
    pub slack_hat_proof: f64,
}

pub fn check_casorati<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<SlackReport> {
    Verifier::default().check_casorati(d)
}

pub fn check_casorati_hat<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<SlackReport> {
    Verifier::default().check_casorati_hat(d)
}

pub fn check_equality_characterization<S: Scalar>(d: &SubmanifoldPointData<S>) -> Result<EqualityReport> {
    Verifier::default().check_equality_characterization(d)
}

pub fn check_chen_ricci<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S]) -> Result<SlackReport> {
    Verifier::default().check_chen_ricci(d, e)
}

pub fn check_ricci_flat<S: Scalar>(d: &SubmanifoldPointData<S>, e: &[S], flat_tol: f64) -> Result<SlackReport> {
    Verifier::default().check_ricci_flat(d, e, flat_tol)
}

pub fn check_special_class<S: Scalar>(d: &SubmanifoldPointData<S>, class: SubmanifoldClass, e: &[S]) -> Result<SlackReport> {
    Verifier::default().check_special_class(d, class, e)
}
