//! Seeded verification campaigns, QP diagnostics and chart sweeps.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{ProfileKind, WarpingProfile};
use crate::chart::{chart_curvature_check, duality_residual, ChartPoint, FiberConnection};
use crate::optkit::{solve_constrained_qp, system16_solutions, ConstrainedQp, QpResult, System16Report};
use crate::scengen::{generate, trial_seed, Scenario, SubmanifoldClass};
use crate::submanifold::Extremum;
use crate::tolerance::Tolerances;
use crate::verifier::{SlackReport, Verifier, Witness};
use crate::{json, Error, Result};

/// Flat campaign configuration; every key has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub base_seed: u64,
    pub trials: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub p_min: usize,
    pub p_max: usize,
    /// Profile specs as accepted by [`ProfileKind::parse`].
    pub profiles: Vec<String>,
    pub z_min: f64,
    pub z_max: f64,
    pub cbars: Vec<f64>,
    pub classes: Vec<String>,
    pub magnitude: f64,
    pub tol_violation: f64,
    pub tol_predicate: f64,
    pub tol_slack_zero: f64,
    /// Findings file (newline-delimited JSON); none means no findings are written.
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        CampaignConfig {
            base_seed: 0,
            trials: 100,
            m_min: 2,
            m_max: 5,
            p_min: 1,
            p_max: 4,
            profiles: ["exp", "cosh", "const", "linear"].map(String::from).to_vec(),
            z_min: -1.0,
            z_max: 1.0,
            cbars: vec![-4.0, 0.0, 4.0],
            classes: vec!["generic".into()],
            magnitude: 1.0,
            tol_violation: tol.violation,
            tol_predicate: tol.predicate,
            tol_slack_zero: tol.slack_zero,
            out: None,
            jobs: 0,
        }
    }
}

impl CampaignConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances { violation: self.tol_violation, predicate: self.tol_predicate, slack_zero: self.tol_slack_zero }
    }

    pub fn profile_kinds(&self) -> Result<Vec<ProfileKind>> {
        self.profiles.iter().map(|s| ProfileKind::parse(s)).collect()
    }

    pub fn class_list(&self) -> Result<Vec<SubmanifoldClass>> {
        self.classes.iter().map(|s| SubmanifoldClass::parse(s)).collect()
    }

    /// Admissible `(m, p)` pairs for `class` within the configured ranges.
    pub fn dimension_pairs(&self, class: SubmanifoldClass) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for m in self.m_min..=self.m_max {
            for p in self.p_min..=self.p_max {
                if (m + p) % 2 == 1 && class.admits(m, (m + p - 1) / 2) {
                    out.push((m, p));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.m_min < 2 || self.m_min > self.m_max {
            return bad(format!("m range {}..={} is empty or below 2", self.m_min, self.m_max));
        }
        if self.p_min < 1 || self.p_min > self.p_max {
            return bad(format!("p range {}..={} is empty or below 1", self.p_min, self.p_max));
        }
        if !(self.z_min <= self.z_max) {
            return bad("z range is empty".into());
        }
        if self.profiles.is_empty() || self.cbars.is_empty() || self.classes.is_empty() {
            return bad("profiles, cbars and classes must be non-empty".into());
        }
        if !(self.magnitude > 0.0 && self.magnitude.is_finite()) {
            return bad("magnitude must be positive".into());
        }
        if self.profile_kinds()?.contains(&ProfileKind::Custom) {
            return bad("campaign profiles must be builtin".into());
        }
        for class in self.class_list()? {
            if self.dimension_pairs(class).is_empty() {
                return bad(format!("no (m, p) in range admits class {}", class.name()));
            }
        }
        self.tolerances().validate()
    }

    /// The scenario of trial `index` and the auxiliary stream for directions.
    pub fn scenario(&self, index: u64) -> Result<(Scenario, ChaCha8Rng)> {
        let seed = trial_seed(self.base_seed, index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let classes = self.class_list()?;
        let class = classes[rng.gen_range(0..classes.len())];
        let pairs = self.dimension_pairs(class);
        let (m, p) = pairs[rng.gen_range(0..pairs.len())];
        let profiles = self.profile_kinds()?;
        let profile = profiles[rng.gen_range(0..profiles.len())];
        let cbar = self.cbars[rng.gen_range(0..self.cbars.len())];
        let z = if self.z_min == self.z_max { self.z_min } else { rng.gen_range(self.z_min..=self.z_max) };
        let scenario = Scenario {
            seed: rng.gen(),
            m,
            p,
            n: (m + p - 1) / 2,
            profile,
            z,
            cbar,
            class,
            magnitude: self.magnitude,
        };
        scenario.validate()?;
        Ok((scenario, rng))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Casorati,
    CasoratiHat,
    ChenRicci,
    Equality,
    All,
}

impl Which {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "casorati" => Which::Casorati,
            "casorati_hat" => Which::CasoratiHat,
            "chen_ricci" => Which::ChenRicci,
            "equality" => Which::Equality,
            "all" => Which::All,
            _ => return Err(Error::Config(format!("unknown check `{s}`"))),
        })
    }

    fn includes(self, other: Which) -> bool {
        self == Which::All || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub pass: usize,
    pub fail: usize,
    pub min_slack_proof: f64,
    pub min_slack_stated: f64,
    pub stated_negative: usize,
}

impl Default for CheckSummary {
    fn default() -> Self {
        CheckSummary {
            pass: 0,
            fail: 0,
            min_slack_proof: f64::INFINITY,
            min_slack_stated: f64::INFINITY,
            stated_negative: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub trials: usize,
    pub checks: BTreeMap<String, CheckSummary>,
    /// Reports whose proof-faithful slack is below `−tol_violation`.
    pub counterexamples: usize,
    /// Lines written to the findings file.
    pub findings: usize,
    pub wall_time_secs: f64,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.fail == 0)
    }

    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &CampaignSummary) -> bool {
        let strip = |s: &CampaignSummary| CampaignSummary { wall_time_secs: 0.0, ..s.clone() };
        json::to_string(&strip(self)).ok() == json::to_string(&strip(other)).ok()
    }
}

/// One findings line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub trial: u64,
    #[serde(flatten)]
    pub report: SlackReport,
}

struct TrialOutcome {
    /// `(report, failed)`
    reports: Vec<(SlackReport, bool)>,
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut *rng)).collect();
        if let Some(u) = crate::linalg::normalized(&v) {
            return u;
        }
    }
}

fn run_trial(config: &CampaignConfig, verifier: &Verifier, which: Which, index: u64) -> Result<TrialOutcome> {
    let (scenario, mut rng) = config.scenario(index)?;
    let data = generate(&scenario)?;
    let tol = &verifier.tol;
    let mut reports = Vec::new();
    if which.includes(Which::Casorati) {
        let r = verifier.check_casorati(&data)?;
        let failed = r.violates(tol);
        reports.push((r, failed));
    }
    if which.includes(Which::CasoratiHat) {
        let r = verifier.check_casorati_hat(&data)?;
        let failed = r.violates(tol);
        reports.push((r, failed));
    }
    if which.includes(Which::ChenRicci) {
        let e = if scenario.class == SubmanifoldClass::ChenRicciEquality {
            crate::linalg::unit(data.m, 0)
        } else {
            random_unit(&mut rng, data.m)
        };
        let r = verifier.check_chen_ricci(&data, &e)?;
        let failed = r.violates(tol);
        reports.push((r, failed));
        if matches!(scenario.class, SubmanifoldClass::Invariant | SubmanifoldClass::AntiInvariant) {
            let r = verifier.check_special_class(&data, scenario.class, &e)?;
            let failed = r.violates(tol);
            reports.push((r, failed));
        }
    }
    if scenario.class == SubmanifoldClass::Legendrian && which.includes(Which::Casorati) {
        let r = verifier.check_special_class(&data, scenario.class, &[])?;
        let failed = r.violates(tol);
        reports.push((r, failed));
    }
    if which.includes(Which::Equality) {
        let eq = verifier.check_equality_characterization(&data)?;
        let mut r = verifier.check_casorati(&data)?;
        r.name = "equality".into();
        for (k, v) in [
            ("predicate", eq.predicate as u8 as f64),
            ("equality", eq.equality as u8 as f64),
            ("hat_equality", eq.hat_equality as u8 as f64),
            ("slack_hat_proof", eq.slack_hat_proof),
        ] {
            r.diagnostics.insert(k.into(), v);
        }
        reports.push((r, !eq.consistent));
    }
    for (r, _) in reports.iter_mut() {
        let direction = r.witness.as_ref().and_then(|w| w.direction.clone());
        r.witness = Some(Witness { scenario: Some(scenario.clone()), data: data.clone(), direction });
    }
    Ok(TrialOutcome { reports })
}

fn open_findings(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs `config.trials` independent trials and aggregates their reports.
///
/// Findings hold the reports that violate the proof-faithful bound or the
/// equality biconditional, and those with negative stated slack.
pub fn run_verify(config: &CampaignConfig, which: Which) -> Result<CampaignSummary> {
    config.validate()?;
    let start = Instant::now();
    let mut writer = config.out.as_deref().map(open_findings).transpose()?;
    let verifier = Verifier::new(config.tolerances());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let outcomes: Vec<Result<TrialOutcome>> = pool.install(|| {
        (0..config.trials as u64).into_par_iter().map(|i| run_trial(config, &verifier, which, i)).collect()
    });

    let tol = config.tolerances();
    let mut summary =
        CampaignSummary { trials: config.trials, checks: BTreeMap::new(), counterexamples: 0, findings: 0, wall_time_secs: 0.0 };
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        for (report, failed) in outcome?.reports {
            let entry = summary.checks.entry(report.name.clone()).or_default();
            if failed {
                entry.fail += 1;
            } else {
                entry.pass += 1;
            }
            entry.min_slack_proof = entry.min_slack_proof.min(report.slack_proof);
            entry.min_slack_stated = entry.min_slack_stated.min(report.slack_stated);
            let stated_negative = report.stated_negative(&tol);
            entry.stated_negative += stated_negative as usize;
            summary.counterexamples += report.violates(&tol) as usize;
            if failed || stated_negative || report.violates(&tol) {
                summary.findings += 1;
                if let Some(w) = writer.as_mut() {
                    json::to_writer(&mut *w, &Finding { trial: trial as u64, report })?;
                    w.write_all(b"\n")?;
                }
            }
        }
    }
    if let Some(mut w) = writer {
        w.flush()?;
    }
    summary.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QpKind {
    /// `min P_k` on `Σ xᵢ = α`
    Pk,
    /// `max x₁ Σ_{i≥2} xᵢ` on `Σ xᵢ = α`
    Chen,
    System16,
}

impl QpKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "pk" => QpKind::Pk,
            "chen" => QpKind::Chen,
            "system16" => QpKind::System16,
            _ => return Err(Error::Config(format!("unknown qp problem `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum QpOutput {
    Pk(QpResult<f64>),
    Chen(QpResult<f64>),
    System16(System16Report<f64>),
}

pub fn run_qp(m: usize, alpha: f64, which: QpKind) -> Result<QpOutput> {
    if m < 2 {
        return Err(Error::DimensionTooSmall(m));
    }
    Ok(match which {
        QpKind::Pk => QpOutput::Pk(solve_constrained_qp(&ConstrainedQp::pk(m, alpha)?, Extremum::Min)?),
        QpKind::Chen => QpOutput::Chen(solve_constrained_qp(&ConstrainedQp::chen_ricci(m, alpha)?, Extremum::Max)?),
        QpKind::System16 => QpOutput::System16(system16_solutions(m, alpha)?),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSample {
    pub z: f64,
    pub duality_residual: f64,
    pub curvature_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartReport {
    pub profile: String,
    pub step: f64,
    pub n: usize,
    pub max_duality_residual: f64,
    pub max_curvature_deviation: f64,
    pub samples: Vec<ChartSample>,
}

/// Duality residual and curvature deviation of the flat self-dual structure
/// at each `z` (fiber dimension `2n`).
pub fn run_chart(profile: ProfileKind, z_samples: &[f64], step: f64, n: usize) -> Result<ChartReport> {
    if !(crate::tolerance::STEP_MIN..=crate::tolerance::STEP_MAX).contains(&step) {
        return Err(Error::StepOutOfRange(step));
    }
    if n == 0 {
        return Err(Error::DimensionTooSmall(0));
    }
    let base = (FiberConnection::flat(n), FiberConnection::flat(n));
    let mut samples = Vec::with_capacity(z_samples.len());
    for &z in z_samples {
        let jet = WarpingProfile::new(profile, z)?;
        let p = ChartPoint::on_axis(z, n);
        samples.push(ChartSample {
            z,
            duality_residual: duality_residual(&jet, &base, &p, step)?,
            curvature_deviation: chart_curvature_check(&jet, &p, step)?,
        });
    }
    Ok(ChartReport {
        profile: profile.name().into(),
        step,
        n,
        max_duality_residual: samples.iter().map(|s| s.duality_residual).fold(0.0, f64::max),
        max_curvature_deviation: samples.iter().map(|s| s.curvature_deviation).fold(0.0, f64::max),
        samples,
    })
}

/// `count` evenly spaced points of `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}
