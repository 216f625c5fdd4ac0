//! Randomized check suites behind `qfourier verify`.

use std::fmt;
use std::str::FromStr;

use qfourier_core::model::{Label, QGModel};
use qfourier_core::modular::{kms_check, sigma_action, CoeffTable, IDENTITY_TOL};
use qfourier_core::similarity::{antipode_relation_check, convolve, from_element, pi_x, FunctionalRep};
use qfourier_core::transform::{
    closed_form_perm_norm, default_xgrid, fourier_of_perm, pairing_check, twisted_norm, PAIRING_TOL,
};
use qfourier_core::verify::{check_dual_hy_cap, check_strong_hy_cap, check_twisted_rd};
use qfourier_core::{Complex64, Exponent};
use rand::Rng;
use rayon::prelude::*;

use crate::gen::{block_labels, case_rng, random_dual, random_perm, DEFAULT_KMAX};
use crate::report::{Params, Record, Relation};

pub const DEFAULT_CASES: u32 = 20;
/// Relative agreement required between the closed form and the SVD route.
pub const ORACLE_TOL: f64 = 1e-10;

const CAP_P: [f64; 5] = [1.0, 1.2, 1.5, 1.8, 2.0];
const PAIRING_P: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
const ORACLE_P: [f64; 6] = [1.0, 1.2, 1.5, 2.0, 3.0, f64::INFINITY];
const TWIST_X: [f64; 5] = [-1.0, 0.0, 0.5, 1.0, 2.0];
const RD_X: [f64; 3] = [0.0, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hy,
    DualHy,
    Rd,
    Pairing,
    Kms,
    Oracle,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 6] = [
        Suite::Hy,
        Suite::DualHy,
        Suite::Rd,
        Suite::Pairing,
        Suite::Kms,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hy => "hy",
            Suite::DualHy => "dual-hy",
            Suite::Rd => "rd",
            Suite::Pairing => "pairing",
            Suite::Kms => "kms",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }

    /// Stream id; part of the per-case RNG stream.
    fn id(self) -> u32 {
        match self {
            Suite::Hy => 1,
            Suite::DualHy => 2,
            Suite::Rd => 3,
            Suite::Pairing => 4,
            Suite::Kms => 5,
            Suite::Oracle => 6,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Suite::All]
            .into_iter()
            .chain(Suite::SINGLE)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected hy, dual-hy, rd, pairing, kms, oracle or all)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub cases: u32,
    pub seed: u64,
    /// Label cutoff for bundled models.
    pub kmax: u64,
    /// Overrides the suite's default exponent list.
    pub p: Option<Vec<Exponent>>,
    /// Overrides the suite's default twist list.
    pub x: Option<Vec<f64>>,
    /// Grid for the sup/inf over twists in the cap suites.
    pub xgrid: Option<Vec<f64>>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            cases: DEFAULT_CASES,
            seed: 0,
            kmax: DEFAULT_KMAX,
            p: None,
            x: None,
            xgrid: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("suite {suite}: {err}")]
    Core { suite: Suite, err: qfourier_core::Error },
    #[error("{0}")]
    Input(String),
}

struct Ctx<'a> {
    suite: Suite,
    model: &'a QGModel,
    name: String,
    labels: Vec<Label>,
    cfg: &'a SuiteConfig,
}

impl Ctx<'_> {
    fn record(&self, case: u32, name: &'static str, p: Option<Exponent>, x: Option<f64>, labels: Vec<Label>) -> Record {
        Record {
            suite: self.suite.name(),
            case,
            name,
            model: self.name.clone(),
            seed: self.cfg.seed,
            params: Params {
                p: p.map(|p| p.to_string()),
                x,
                labels: labels.iter().map(|l| l.0).collect(),
            },
            relation: Relation::Le,
            lhs: 0.0,
            rhs: 0.0,
            lhs_im: None,
            rhs_im: None,
            slack: 0.0,
            verdict: true.into(),
            substitution: None,
        }
    }

    fn exponents(&self, default: &[f64]) -> Vec<Exponent> {
        self.cfg.p.clone().unwrap_or_else(|| {
            default
                .iter()
                .map(|&p| Exponent::finite(p).expect("valid default"))
                .collect()
        })
    }

    fn twists(&self, default: &[f64]) -> Vec<f64> {
        self.cfg.x.clone().unwrap_or_else(|| default.to_vec())
    }
}

type CaseResult = Result<Vec<Record>, qfourier_core::Error>;

/// Runs a suite; records come back in (suite, case, parameter) order no
/// matter how rayon schedules the cases.
pub fn run_suite(suite: Suite, model: &QGModel, cfg: &SuiteConfig) -> Result<Vec<Record>, SuiteError> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::SINGLE {
            out.extend(run_suite(s, model, cfg)?);
        }
        return Ok(out);
    }
    validate(suite, cfg)?;
    let labels = block_labels(model, cfg.kmax);
    if labels.is_empty() {
        return Err(SuiteError::Input("model has no full blocks up to kmax".into()));
    }
    let ctx = Ctx {
        suite,
        model,
        name: model.describe(),
        labels,
        cfg,
    };
    let per_case: Vec<CaseResult> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| run_case(&ctx, case))
        .collect();
    let mut out = Vec::new();
    for r in per_case {
        out.extend(r.map_err(|err| SuiteError::Core { suite, err })?);
    }
    Ok(out)
}

fn validate(suite: Suite, cfg: &SuiteConfig) -> Result<(), SuiteError> {
    if cfg.cases == 0 {
        return Err(SuiteError::Input("--cases must be positive".into()));
    }
    let caps = matches!(suite, Suite::Hy | Suite::DualHy | Suite::Rd);
    if let Some(ps) = &cfg.p {
        if ps.is_empty() {
            return Err(SuiteError::Input("empty p list".into()));
        }
        if caps {
            if let Some(p) = ps.iter().find(|p| !p.at_most_two()) {
                return Err(SuiteError::Input(format!(
                    "suite {suite} needs 1 <= p <= 2, got p = {p}"
                )));
            }
        }
    }
    if let Some(xs) = &cfg.x {
        if xs.is_empty() || xs.iter().any(|x| !x.is_finite()) {
            return Err(SuiteError::Input("x list must be nonempty and finite".into()));
        }
        if suite == Suite::Rd && xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(SuiteError::Input("suite rd needs x in [0, 1]".into()));
        }
    }
    if let Some(g) = &cfg.xgrid {
        if g.is_empty() {
            return Err(SuiteError::Input("empty x grid".into()));
        }
        if caps && g.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(SuiteError::Input(format!(
                "suite {suite} needs an x grid inside [0, 1]"
            )));
        }
    }
    Ok(())
}

fn run_case(ctx: &Ctx<'_>, case: u32) -> CaseResult {
    let mut rng = case_rng(ctx.cfg.seed, ctx.suite.id(), case);
    let model = ctx.model;
    let mut out = Vec::new();
    match ctx.suite {
        Suite::Hy | Suite::DualHy => {
            let f = random_dual(&mut rng, model, &ctx.labels);
            let grid = ctx.cfg.xgrid.clone().unwrap_or_else(default_xgrid);
            for p in ctx.exponents(&CAP_P) {
                let report = if ctx.suite == Suite::Hy {
                    check_strong_hy_cap(&f, p, &grid, model)?
                } else {
                    check_dual_hy_cap(&f, p, &grid, model)?
                };
                out.push(Record::from_check(
                    ctx.suite.name(),
                    case,
                    &ctx.name,
                    ctx.cfg.seed,
                    &report,
                ));
            }
        }
        Suite::Rd => {
            let f = random_dual(&mut rng, model, &ctx.labels);
            for p in ctx.exponents(&CAP_P) {
                for x in ctx.twists(&RD_X) {
                    let report = check_twisted_rd(&f, p, x, model)?;
                    let mut r = Record::from_check(ctx.suite.name(), case, &ctx.name, ctx.cfg.seed, &report);
                    r.params.x = Some(x);
                    out.push(r);
                }
            }
        }
        Suite::Pairing => {
            let f = random_dual(&mut rng, model, &ctx.labels);
            let g = random_dual(&mut rng, model, &ctx.labels);
            let mut support = f.support();
            support.extend(g.support());
            support.sort();
            support.dedup();
            for p in ctx.exponents(&PAIRING_P) {
                for x in ctx.twists(&TWIST_X) {
                    let rep = pairing_check(&f, &g, p, x, model)?;
                    let mut r = ctx.record(case, "pairing", Some(p), Some(x), support.clone());
                    r.relation = Relation::Eq;
                    (r.lhs, r.lhs_im) = (rep.lhs.re, Some(rep.lhs.im));
                    (r.rhs, r.rhs_im) = (rep.rhs.re, Some(rep.rhs.im));
                    r.slack = PAIRING_TOL * rep.scale;
                    r.verdict = rep.pass.into();
                    out.push(r);
                }
            }
        }
        Suite::Kms => kms_case(ctx, case, &mut rng, &mut out)?,
        Suite::Oracle => {
            let e = random_perm(&mut rng, model, &ctx.labels);
            let fhat = fourier_of_perm(&e, model)?;
            let support = fhat.support();
            for p in ctx.exponents(&ORACLE_P) {
                for x in ctx.twists(&TWIST_X) {
                    let closed = closed_form_perm_norm(&e, p, x, model)?;
                    let brute = twisted_norm(&fhat, p, x, model)?;
                    let mut r = ctx.record(case, "closed-form-oracle", Some(p), Some(x), support.clone());
                    r.relation = Relation::Eq;
                    r.lhs = closed;
                    r.rhs = brute;
                    r.slack = ORACLE_TOL * closed.abs().max(brute.abs());
                    r.verdict = ((closed - brute).abs() <= r.slack).into();
                    out.push(r);
                }
            }
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    Ok(out)
}

/// Modular and algebraic identities: KMS, sigma group law, multiplicativity
/// of `pi^(x)` and the antipode relation.
fn kms_case(ctx: &Ctx<'_>, case: u32, rng: &mut impl Rng, out: &mut Vec<Record>) -> Result<(), qfourier_core::Error> {
    let model = ctx.model;
    let label = ctx.labels[rng.random_range(0..ctx.labels.len())];
    let n = model.irrep(label)?.dim();
    let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
    let kms = kms_check(label, i, j, model)?;
    let mut r = ctx.record(case, "kms", None, None, vec![label]);
    r.relation = Relation::Eq;
    (r.lhs, r.rhs) = (kms.lhs, kms.rhs);
    r.slack = IDENTITY_TOL * kms.lhs.abs().max(kms.rhs.abs());
    r.verdict = kms.pass.into();
    out.push(r);

    let f = random_dual(rng, model, &ctx.labels);
    let table = CoeffTable::from_fourier(&f, model)?;
    let mut unit = || Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
    let (z, w) = (unit(), unit());
    let twice = sigma_action(&sigma_action(&table, w, model)?, z, model)?;
    let once = sigma_action(&table, z + w, model)?;
    let diff = twice.max_rel_diff(&once);
    let mut r = ctx.record(case, "sigma-group-law", None, None, f.support());
    r.lhs = diff;
    r.slack = IDENTITY_TOL;
    r.verdict = (diff <= IDENTITY_TOL).into();
    out.push(r);

    let mut rep = || -> FunctionalRep {
        let p = random_dual(rng, model, &ctx.labels);
        let m = random_dual(rng, model, &ctx.labels);
        FunctionalRep::new(
            p.blocks().map(|(l, b)| (l, b.clone())).collect(),
            m.blocks().map(|(l, b)| (l, b.clone())).collect(),
        )
    };
    let (phi, psi) = (rep(), rep());
    let prod = convolve(&phi, &psi);
    for x in ctx.twists(&TWIST_X) {
        let lhs = pi_x(&prod, x, model)?;
        let a = pi_x(&phi, x, model)?;
        let b = pi_x(&psi, x, model)?;
        let (mut diff, mut scale) = (0.0f64, 0.0f64);
        for (l, block) in lhs.blocks() {
            let (Some(al), Some(bl)) = (a.get(l), b.get(l)) else {
                diff = diff.max(block.max_abs());
                continue;
            };
            let rhs = al.matmul(bl);
            diff = diff.max(block.max_abs_diff(&rhs));
            scale = scale.max(rhs.max_abs());
        }
        let mut r = ctx.record(case, "pi-homomorphism", None, Some(x), lhs.support());
        r.lhs = diff;
        r.slack = IDENTITY_TOL * scale.max(1.0);
        r.verdict = (diff <= r.slack).into();
        out.push(r);
    }

    let a = random_dual(rng, model, &ctx.labels);
    let phi = from_element(&a, model)?;
    let ant = antipode_relation_check(&phi, model)?;
    let mut r = ctx.record(case, "antipode", None, None, a.support());
    r.lhs = ant.discrepancy;
    r.slack = qfourier_core::similarity::TABLE_TOL * ant.scale;
    r.verdict = ant.pass.into();
    out.push(r);
    Ok(())
}
