//! Click-gated content-recommendation replay: a one-armed bandit with a
//! known outside option, an exogenous search-traffic auxiliary stream, and
//! the AIE / RMM / RI / NH evaluation metrics, run on synthetic article-day
//! cases.
//!
//! Arm 0 is the known version of the article (conversion rate known, no
//! learning); arm 1 is the experimental version whose conversion rate must
//! be learned. Only arm 1 receives auxiliary observations. A recommendation
//! yields a reward observation only when clicked, and UCB radii are clocked
//! by the click count rather than wall-clock epochs.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{aie_index, BoundError};
use crate::policies::{two_ucbs_index, ucb_index, LogClock, PolicyConfig, PolicyKind};
use crate::rng::{bernoulli, uniform01, Phase, StreamKey};
use crate::state::{PolicyState, Scales};

/// Parameter ranges the synthetic generator may draw from.
const CTR_BOUNDS: (f64, f64) = (0.01, 0.2);
const CVR_BOUNDS: (f64, f64) = (0.05, 0.5);
const ALPHA_BOUNDS: (f64, f64) = (1.0, 16.0);
const DELTA_BOUNDS: (f64, f64) = (0.01, 0.04);

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("{field} range ({lo}, {hi}) outside allowed ({alo}, {ahi})")]
    BadRange {
        field: &'static str,
        lo: f64,
        hi: f64,
        alo: f64,
        ahi: f64,
    },
    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("need at least one case")]
    NoCases,
    #[error("n_reps must be at least 1")]
    NoReplications,
    #[error("no case results to aggregate")]
    EmptyResults,
    #[error("case {case_id}: y_stream has {got} outcomes, arrivals need {need}")]
    StreamLength {
        case_id: u64,
        got: usize,
        need: usize,
    },
    #[error("unsupported replay policy {0:?} (UCB1, aUCB1, and 2-UCBs only)")]
    UnsupportedPolicy(PolicyKind),
    #[error("corpus line {line}: {source}")]
    Corpus {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One article-day experiment: click-through rate, the two conversion
/// rates' midpoint and gap, true/estimated/upper mapping coefficients, and
/// the frozen auxiliary stream.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReplayCase {
    pub case_id: u64,
    pub horizon: usize,
    pub ctr: f64,
    /// Conversion rate after clicking a recommendation (the unknown arm's
    /// rate; the known arm sits at `cvr_recom + s * delta_ad`).
    pub cvr_recom: f64,
    /// Conversion rate of readers arriving from search.
    pub cvr_search: f64,
    pub delta_ad: f64,
    pub alpha_true: f64,
    pub alpha_hat: f64,
    pub alpha_bar: f64,
    /// Arrivals-from-search per epoch, frozen per case.
    pub h_row: Vec<u32>,
    /// Binary continue-reading outcomes for each arrival, frozen per case.
    pub y_stream: Vec<u8>,
}

impl ReplayCase {
    fn check(&self) -> Result<(), ReplayError> {
        let need: usize = self.h_row.iter().map(|&h| h as usize).sum();
        if self.y_stream.len() < need {
            return Err(ReplayError::StreamLength {
                case_id: self.case_id,
                got: self.y_stream.len(),
                need,
            });
        }
        Ok(())
    }
}

/// Knobs for the synthetic corpus generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusParams {
    pub n_cases: usize,
    pub horizon: usize,
    pub ctr_range: (f64, f64),
    pub cvr_range: (f64, f64),
    pub alpha_range: (f64, f64),
    pub delta_range: (f64, f64),
    /// Ratio `alpha_hat / alpha_true`; 1.0 generates perfectly specified
    /// mappings (RMM = 0).
    pub misspec_ratio: f64,
    /// Expected auxiliary arrivals per epoch; 0 silences the stream.
    pub arrival_intensity: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            n_cases: 100,
            horizon: 2000,
            ctr_range: CTR_BOUNDS,
            cvr_range: CVR_BOUNDS,
            alpha_range: ALPHA_BOUNDS,
            delta_range: DELTA_BOUNDS,
            misspec_ratio: 1.0,
            arrival_intensity: 1.0,
        }
    }
}

impl CorpusParams {
    pub fn validate(&self) -> Result<(), ReplayError> {
        if self.n_cases == 0 {
            return Err(ReplayError::NoCases);
        }
        for (field, range, bounds) in [
            ("ctr", self.ctr_range, CTR_BOUNDS),
            ("cvr", self.cvr_range, CVR_BOUNDS),
            ("alpha", self.alpha_range, ALPHA_BOUNDS),
            ("delta", self.delta_range, DELTA_BOUNDS),
        ] {
            let (lo, hi) = range;
            let (alo, ahi) = bounds;
            if !(lo <= hi && lo >= alo && hi <= ahi) {
                return Err(ReplayError::BadRange {
                    field,
                    lo,
                    hi,
                    alo,
                    ahi,
                });
            }
        }
        if !(self.misspec_ratio > 0.0) {
            return Err(ReplayError::NonPositive {
                field: "misspec_ratio",
                value: self.misspec_ratio,
            });
        }
        if self.arrival_intensity < 0.0 {
            return Err(ReplayError::NonPositive {
                field: "arrival_intensity",
                value: self.arrival_intensity,
            });
        }
        Ok(())
    }
}

fn uniform_in(range: (f64, f64), key: StreamKey) -> f64 {
    range.0 + uniform01(&mut key.rng()) * (range.1 - range.0)
}

/// Generate a deterministic corpus of article-day cases. Each case's
/// arrival row and auxiliary outcome stream are realized once and frozen.
pub fn synth_article_days(
    params: &CorpusParams,
    seed: u64,
) -> Result<Vec<ReplayCase>, ReplayError> {
    params.validate()?;
    let root = StreamKey::root(seed).phase(Phase::Corpus);
    let mut cases = Vec::with_capacity(params.n_cases);
    for case_id in 0..params.n_cases as u64 {
        let ck = root.child(case_id);
        let ctr = uniform_in(params.ctr_range, ck.child(1));
        let cvr_recom = uniform_in(params.cvr_range, ck.child(2));
        let alpha_true = uniform_in(params.alpha_range, ck.child(3));
        let delta_ad = uniform_in(params.delta_range, ck.child(4));
        let cvr_search = cvr_recom / alpha_true;
        let alpha_hat = params.misspec_ratio * alpha_true;
        let alpha_bar = 1.1 * alpha_hat;

        let base = params.arrival_intensity.floor();
        let frac = params.arrival_intensity - base;
        let mut h_row = Vec::with_capacity(params.horizon);
        for t in 1..=params.horizon as u64 {
            let extra = bernoulli(&mut ck.child(5).child(t).rng(), frac);
            h_row.push(base as u32 + u32::from(extra));
        }
        let total: usize = h_row.iter().map(|&h| h as usize).sum();
        let mut y_stream = Vec::with_capacity(total);
        for m in 0..total as u64 {
            y_stream.push(u8::from(bernoulli(
                &mut ck.child(6).child(m).rng(),
                cvr_search,
            )));
        }
        cases.push(ReplayCase {
            case_id,
            horizon: params.horizon,
            ctr,
            cvr_recom,
            cvr_search,
            delta_ad,
            alpha_true,
            alpha_hat,
            alpha_bar,
            h_row,
            y_stream,
        });
    }
    Ok(cases)
}

/// Relative Improvement of a policy over UCB1; undefined when the UCB1
/// reference regret is not positive.
pub fn relative_improvement(r_ucb1: f64, r_policy: f64) -> Option<f64> {
    (r_ucb1 > 0.0).then(|| (r_ucb1 - r_policy) / r_ucb1)
}

/// Relative Mapping Misspecification: `cvr * |1 - alpha_hat / alpha_true|`.
pub fn relative_mapping_misspecification(cvr: f64, alpha_hat: f64, alpha_true: f64) -> f64 {
    cvr * (1.0 - alpha_hat / alpha_true).abs()
}

/// Fraction of cases where the policy is no worse than UCB1 (ties count).
pub fn no_harm_rate(case_results: &[(f64, f64)]) -> Result<f64, ReplayError> {
    if case_results.is_empty() {
        return Err(ReplayError::EmptyResults);
    }
    let hits = case_results
        .iter()
        .filter(|(r_policy, r_ucb1)| r_policy <= r_ucb1)
        .count();
    Ok(hits as f64 / case_results.len() as f64)
}

fn reward_scales() -> Scales {
    // Bernoulli observations are 1/4-sub-Gaussian.
    Scales::new(0.5, 0.5)
}

/// `(arm, realized outcome)` for each clicked recommendation.
type ClickEvent = (usize, f64);

fn upper_index(state: &PolicyState, t: u64, cfg: &PolicyConfig) -> f64 {
    match cfg.kind {
        PolicyKind::Ucb1 => ucb_index(state, 1, t, cfg, reward_scales(), LogClock::Clicks),
        PolicyKind::AUcb1 => {
            // Estimated mapping: sigma_hat^2 = alpha_hat^2 / 4.
            let sigma_hat = cfg.alpha_bar.expect("alpha_hat stored in alpha_bar") / 2.0;
            ucb_index(
                state,
                1,
                t,
                cfg,
                Scales::new(0.5, sigma_hat),
                LogClock::Clicks,
            )
        }
        PolicyKind::TwoUcbs => {
            let alpha_bar = cfg.alpha_bar.expect("validated");
            two_ucbs_index(
                state,
                1,
                t,
                cfg,
                reward_scales(),
                alpha_bar,
                LogClock::Clicks,
            )
        }
        _ => unreachable!("validated replay policy"),
    }
}

fn replay_policy_config(
    kind: PolicyKind,
    c: f64,
    case: &ReplayCase,
) -> Result<PolicyConfig, ReplayError> {
    // alpha_bar doubles as the mapping coefficient slot: the estimate for
    // aUCB1, the upper bound for 2-UCBs.
    match kind {
        PolicyKind::Ucb1 => Ok(PolicyConfig::new(kind, c)),
        PolicyKind::AUcb1 => Ok(PolicyConfig::new(kind, c).with_alpha_bar(case.alpha_hat)),
        PolicyKind::TwoUcbs => Ok(PolicyConfig::new(kind, c).with_alpha_bar(case.alpha_bar)),
        other => Err(ReplayError::UnsupportedPolicy(other)),
    }
}

fn run_one(
    case: &ReplayCase,
    cfg: &PolicyConfig,
    sign: f64,
    rep_key: StreamKey,
) -> (f64, Vec<ClickEvent>) {
    let cvr1 = case.cvr_recom;
    let cvr0 = case.cvr_recom + sign * case.delta_ad;
    let max_cvr = cvr0.max(cvr1);
    let mut state = PolicyState::new(2);
    let mapping = match cfg.kind {
        PolicyKind::AUcb1 => Some(case.alpha_hat),
        _ => None,
    };
    let mut regret = 0.0;
    let mut clicks = Vec::new();
    let mut cursor = 0usize;
    let mut batch: Vec<f64> = Vec::new();
    for t in 1..=case.horizon as u64 {
        let h = case.h_row[t as usize - 1] as usize;
        if h > 0 {
            batch.clear();
            for _ in 0..h {
                batch.push(f64::from(case.y_stream[cursor]));
                cursor += 1;
            }
            if cfg.kind != PolicyKind::Ucb1 {
                state
                    .update_on_aux(1, &batch, mapping)
                    .expect("arm 1 in range");
            }
        }
        state.set_epoch(t);
        let arm = if upper_index(&state, t, cfg) >= cvr0 {
            1
        } else {
            0
        };
        let clicked = bernoulli(&mut rep_key.phase(Phase::Click).child(t).rng(), case.ctr);
        if clicked {
            let cvr = if arm == 1 { cvr1 } else { cvr0 };
            let outcome = f64::from(bernoulli(
                &mut rep_key
                    .phase(Phase::Outcome)
                    .child(arm as u64)
                    .child(t)
                    .rng(),
                cvr,
            ));
            state
                .update_on_reward(arm, outcome, true)
                .expect("arm in range");
            regret += max_cvr - outcome;
            clicks.push((arm, outcome));
        } else {
            state
                .update_on_reward(arm, 0.0, false)
                .expect("arm in range");
        }
    }
    (regret, clicks)
}

/// One replication of one article-day experiment: realized click-gated
/// regret. The sign `s` flips which arm is better; the case's auxiliary
/// stream stays fixed.
pub fn simulate_article_day(
    case: &ReplayCase,
    kind: PolicyKind,
    c: f64,
    sign: f64,
    seed: u64,
) -> Result<f64, ReplayError> {
    case.check()?;
    let cfg = replay_policy_config(kind, c, case)?;
    let rep_key = StreamKey::root(seed);
    Ok(run_one(case, &cfg, sign, rep_key).0)
}

/// Scores for one case: mean regret per policy, RI against UCB1, and the
/// case's AIE / RMM coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CaseScore {
    pub case_id: u64,
    pub aie: f64,
    pub rmm: f64,
    pub policies: Vec<PolicyScore>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolicyScore {
    pub policy: String,
    pub mean_regret: f64,
    pub ri: Option<f64>,
}

/// Corpus-level aggregation.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub cases: Vec<CaseScore>,
    /// `(policy, mean RI over cases where defined, NH rate)`.
    pub policy_rollup: Vec<(String, Option<f64>, f64)>,
}

/// Score a corpus: for each case run `n_reps` replications of every policy
/// (UCB1 is always included first as the RI reference), sharing the sign
/// and click/outcome streams across policies within a replication.
pub fn score_corpus(
    cases: &[ReplayCase],
    policies: &[PolicyKind],
    c: f64,
    n_reps: usize,
    seed: u64,
) -> Result<CorpusReport, ReplayError> {
    if cases.is_empty() {
        return Err(ReplayError::NoCases);
    }
    if n_reps == 0 {
        return Err(ReplayError::NoReplications);
    }
    for case in cases {
        case.check()?;
    }
    let mut kinds = vec![PolicyKind::Ucb1];
    for &p in policies {
        if p != PolicyKind::Ucb1 {
            if !matches!(p, PolicyKind::AUcb1 | PolicyKind::TwoUcbs) {
                return Err(ReplayError::UnsupportedPolicy(p));
            }
            kinds.push(p);
        }
    }
    // AIE's rate constant follows the bound analyses: c_tilde = 4c, with the
    // Bernoulli sub-Gaussian scale fixed at 1/4.
    let c_tilde = 4.0 * c;
    let root = StreamKey::root(seed);
    let scores: Result<Vec<CaseScore>, ReplayError> = cases
        .par_iter()
        .map(|case| {
            let cfgs: Result<Vec<PolicyConfig>, ReplayError> = kinds
                .iter()
                .map(|&k| replay_policy_config(k, c, case))
                .collect();
            let cfgs = cfgs?;
            let case_key = root.child(case.case_id);
            let mut totals = vec![0.0f64; cfgs.len()];
            for rep in 0..n_reps as u64 {
                let rep_key = case_key.phase(Phase::Replication).child(rep);
                let sign = if bernoulli(&mut rep_key.phase(Phase::Sign).rng(), 0.5) {
                    1.0
                } else {
                    -1.0
                };
                for (i, cfg) in cfgs.iter().enumerate() {
                    totals[i] += run_one(case, cfg, sign, rep_key).0;
                }
            }
            let means: Vec<f64> = totals.iter().map(|r| r / n_reps as f64).collect();
            let r_ucb1 = means[0];
            let policies = kinds
                .iter()
                .zip(&means)
                .map(|(&k, &m)| PolicyScore {
                    policy: k.name().to_string(),
                    mean_regret: m,
                    ri: if k == PolicyKind::Ucb1 {
                        Some(0.0)
                    } else {
                        relative_improvement(r_ucb1, m)
                    },
                })
                .collect();
            let aie = aie_index(
                &case.h_row,
                case.horizon,
                case.delta_ad,
                0.25,
                case.alpha_true,
                c_tilde,
            )?;
            let rmm =
                relative_mapping_misspecification(case.cvr_recom, case.alpha_hat, case.alpha_true);
            Ok(CaseScore {
                case_id: case.case_id,
                aie,
                rmm,
                policies,
            })
        })
        .collect();
    let scores = scores?;
    let mut rollup = Vec::new();
    for (i, &k) in kinds.iter().enumerate() {
        let ris: Vec<f64> = scores.iter().filter_map(|s| s.policies[i].ri).collect();
        let mean_ri = (!ris.is_empty()).then(|| ris.iter().sum::<f64>() / ris.len() as f64);
        let pairs: Vec<(f64, f64)> = scores
            .iter()
            .map(|s| (s.policies[i].mean_regret, s.policies[0].mean_regret))
            .collect();
        rollup.push((k.name().to_string(), mean_ri, no_harm_rate(&pairs)?));
    }
    Ok(CorpusReport {
        cases: scores,
        policy_rollup: rollup,
    })
}

/// JSON-lines corpus, one case per line.
pub fn write_corpus(path: &Path, cases: &[ReplayCase]) -> Result<(), ReplayError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for case in cases {
        serde_json::to_writer(&mut w, case).map_err(|source| ReplayError::Corpus {
            line: case.case_id as usize + 1,
            source,
        })?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_corpus(path: &Path) -> Result<Vec<ReplayCase>, ReplayError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut cases = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let case: ReplayCase =
            serde_json::from_str(&line).map_err(|source| ReplayError::Corpus {
                line: i + 1,
                source,
            })?;
        case.check()?;
        cases.push(case);
    }
    if cases.is_empty() {
        return Err(ReplayError::NoCases);
    }
    Ok(cases)
}

/// Results CSV: `case_id,policy,mean_regret,ri,aie,rmm` (RI empty when the
/// UCB1 reference regret was not positive).
pub fn write_results(path: &Path, report: &CorpusReport) -> Result<(), ReplayError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "case_id,policy,mean_regret,ri,aie,rmm")?;
    for case in &report.cases {
        for p in &case.policies {
            let ri = p.ri.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                case.case_id, p.policy, p.mean_regret, ri, case.aie, case.rmm
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
