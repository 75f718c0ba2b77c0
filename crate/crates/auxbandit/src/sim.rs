//! Episode and replication harness: draws rewards and auxiliary
//! observations, feeds policies, accumulates pseudo-regret, and aggregates
//! replication statistics.
//!
//! Every random quantity is addressed by `(seed, phase, arm, epoch)`, so all
//! policies in one replication share the same arrival matrix and the same
//! reward-noise table (common random numbers), and adding a policy never
//! perturbs another policy's draws. Replications are embarrassingly
//! parallel; results are reduced in replication order, so the worker-thread
//! count never changes the output.

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrivals::{self, ArrivalMatrix, ArrivalSpec};
use crate::instance::{Family, ProblemInstance};
use crate::policies::{LogClock, PolicyConfig, PolicyError, PolicyRuntime};
use crate::rng::{bernoulli, Phase, StreamKey, StreamRng};
use crate::state::Scales;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("arrival matrix is {hk} x {ht}, instance/horizon need {k} x {t}")]
    DimensionMismatch {
        hk: usize,
        ht: usize,
        k: usize,
        t: usize,
    },
    #[error("policy list is empty")]
    NoPolicies,
    #[error("n_reps must be at least 1")]
    NoReplications,
    #[error("duplicate policy label {0:?}")]
    DuplicateLabel(String),
    #[error("policy {label}: {source}")]
    Policy {
        label: String,
        #[source]
        source: PolicyError,
    },
    #[error(transparent)]
    Arrivals(#[from] arrivals::ArrivalError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One policy's trajectory through one episode.
#[derive(Clone, Debug, Serialize)]
pub struct EpisodeResult {
    pub policy: String,
    pub seed: u64,
    pub arms: Vec<u32>,
    pub per_step_regret: Vec<f64>,
    pub cum_regret: Vec<f64>,
}

impl EpisodeResult {
    pub fn final_regret(&self) -> f64 {
        *self.cum_regret.last().unwrap_or(&0.0)
    }
}

/// Pointwise replication statistics: mean and standard-error trajectories
/// plus nearest-rank quantile trajectories of cumulative regret.
#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub policy: String,
    pub n_reps: usize,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub q05: Vec<f64>,
    pub q25: Vec<f64>,
    pub q50: Vec<f64>,
    pub q75: Vec<f64>,
    pub q95: Vec<f64>,
}

impl BatchSummary {
    pub fn final_mean(&self) -> f64 {
        *self.mean.last().unwrap_or(&0.0)
    }

    pub fn final_stderr(&self) -> f64 {
        *self.stderr.last().unwrap_or(&0.0)
    }
}

fn draw_value(family: Family, mean: f64, scale: f64, rng: &mut StreamRng) -> f64 {
    match family {
        Family::Gaussian => {
            if scale == 0.0 {
                mean
            } else {
                let z: f64 = rng.sample(StandardNormal);
                mean + scale * z
            }
        }
        Family::Bernoulli => f64::from(bernoulli(rng, mean)),
    }
}

/// Run one episode of one policy against a fixed arrival matrix.
///
/// Per epoch `t`: deliver the `h_{k,t}` auxiliary observations for every
/// arm, let the policy select, then draw and reveal the chosen arm's reward.
/// Pseudo-regret accrues from the true means. Fully deterministic given
/// `seed`; reward and auxiliary draws are keyed by `(phase, arm, t)` so
/// they are identical for every policy run under the same seed.
pub fn run_episode(
    instance: &ProblemInstance,
    h: &ArrivalMatrix,
    cfg: &PolicyConfig,
    seed: u64,
) -> Result<EpisodeResult, SimError> {
    let k = instance.arms();
    let horizon = h.horizon();
    if h.arms() != k {
        return Err(SimError::DimensionMismatch {
            hk: h.arms(),
            ht: horizon,
            k,
            t: horizon,
        });
    }
    let root = StreamKey::root(seed);
    let scales = Scales::new(instance.sigma(), instance.sigma_hat());
    let mapping = cfg
        .kind
        .uses_known_mapping()
        .then(|| instance.alpha().to_vec());
    let mut rt = PolicyRuntime::new(cfg.clone(), k, scales, mapping, LogClock::Epoch);
    let star = instance.best_mean();

    let mut arms_out = Vec::with_capacity(horizon);
    let mut per_step = Vec::with_capacity(horizon);
    let mut cum = Vec::with_capacity(horizon);
    let mut total = 0.0;
    let mut h_col = vec![0u32; k];
    let wants_aux = cfg.kind.uses_aux();
    let mut batch: Vec<f64> = Vec::new();

    for t in 1..=horizon as u64 {
        for (arm, slot) in h_col.iter_mut().enumerate() {
            *slot = h.h(arm, t as usize);
        }
        rt.begin_epoch(t, &h_col);
        if wants_aux {
            for (arm, &count) in h_col.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let mut rng = root.phase(Phase::AuxNoise).child(arm as u64).child(t).rng();
                batch.clear();
                for _ in 0..count {
                    batch.push(draw_value(
                        instance.aux_family(),
                        instance.y()[arm],
                        instance.sigma_hat(),
                        &mut rng,
                    ));
                }
                rt.observe_aux(arm, &batch);
            }
        }
        let mut policy_rng = root.phase(Phase::Policy).child(t).rng();
        let arm = rt
            .select(t, &mut policy_rng)
            .map_err(|source| SimError::Policy {
                label: cfg.label(),
                source,
            })?;
        let mut reward_rng = root
            .phase(Phase::RewardNoise)
            .child(arm as u64)
            .child(t)
            .rng();
        let x = draw_value(
            instance.reward_family(),
            instance.mu()[arm],
            instance.sigma(),
            &mut reward_rng,
        );
        rt.observe_reward(arm, x, true);

        let r = star - instance.mu()[arm];
        total += r;
        arms_out.push(arm as u32);
        per_step.push(r);
        cum.push(total);
    }
    Ok(EpisodeResult {
        policy: cfg.label(),
        seed,
        arms: arms_out,
        per_step_regret: per_step,
        cum_regret: cum,
    })
}

/// Everything `run_replications` needs.
#[derive(Clone, Debug)]
pub struct ReplicationPlan<'a> {
    pub instance: &'a ProblemInstance,
    pub arrivals: &'a ArrivalSpec,
    pub horizon: usize,
    pub policies: &'a [PolicyConfig],
    pub n_reps: usize,
    pub base_seed: u64,
    /// Draw a fresh arrival matrix per replication (matching expectations
    /// over `H`); otherwise one shared matrix (matching fixed-matrix
    /// bounds).
    pub regenerate_h: bool,
}

/// One policy's aggregate over all replications.
#[derive(Clone, Debug)]
pub struct PolicyBatch {
    pub cfg: PolicyConfig,
    pub summary: BatchSummary,
    pub episodes: Vec<EpisodeResult>,
}

#[derive(Clone, Debug)]
pub struct ReplicationOutput {
    pub per_policy: Vec<PolicyBatch>,
    /// Cells whose Bernoulli mean was clipped while generating matrices.
    pub clipped_cells: u64,
}

/// Seed for replication `rep` derived from the batch seed.
pub fn replication_seed(base_seed: u64, rep: usize) -> u64 {
    StreamKey::root(base_seed)
        .phase(Phase::Replication)
        .child(rep as u64)
        .value()
}

fn arrival_seed(base_seed: u64, rep: usize, regenerate: bool) -> u64 {
    let key = StreamKey::root(base_seed).phase(Phase::Arrivals);
    if regenerate {
        key.child(rep as u64).value()
    } else {
        key.value()
    }
}

/// Run `n_reps` replications of every policy. Within one replication all
/// policies face the same arrival matrix and the same reward-noise table.
/// Replications run in parallel on the current rayon pool; output is
/// identical for any worker count.
pub fn run_replications(plan: &ReplicationPlan) -> Result<ReplicationOutput, SimError> {
    if plan.policies.is_empty() {
        return Err(SimError::NoPolicies);
    }
    if plan.n_reps == 0 {
        return Err(SimError::NoReplications);
    }
    {
        let mut labels: Vec<String> = plan.policies.iter().map(PolicyConfig::label).collect();
        labels.sort();
        for pair in labels.windows(2) {
            if pair[0] == pair[1] {
                return Err(SimError::DuplicateLabel(pair[0].clone()));
            }
        }
    }
    plan.arrivals.validate()?;
    let k = plan.instance.arms();

    let fixed_h = if plan.regenerate_h {
        None
    } else {
        Some(arrivals::generate(
            plan.arrivals,
            k,
            plan.horizon,
            arrival_seed(plan.base_seed, 0, false),
        )?)
    };

    let reps: Result<Vec<(Vec<EpisodeResult>, u64)>, SimError> = (0..plan.n_reps)
        .into_par_iter()
        .map(|rep| {
            let (h, clipped) = match &fixed_h {
                Some(report) => (report.matrix.clone(), 0),
                None => {
                    let report = arrivals::generate(
                        plan.arrivals,
                        k,
                        plan.horizon,
                        arrival_seed(plan.base_seed, rep, true),
                    )?;
                    (report.matrix, report.clipped_cells)
                }
            };
            // A loaded matrix may disagree with the plan's dimensions.
            if h.arms() != k || h.horizon() != plan.horizon {
                return Err(SimError::DimensionMismatch {
                    hk: h.arms(),
                    ht: h.horizon(),
                    k,
                    t: plan.horizon,
                });
            }
            let seed = replication_seed(plan.base_seed, rep);
            let mut per_policy = Vec::with_capacity(plan.policies.len());
            for cfg in plan.policies {
                per_policy.push(run_episode(plan.instance, &h, cfg, seed)?);
            }
            Ok((per_policy, clipped))
        })
        .collect();
    let reps = reps?;

    let clipped_cells = fixed_h
        .as_ref()
        .map(|r| r.clipped_cells)
        .unwrap_or_else(|| reps.iter().map(|(_, c)| c).sum());

    let per_policy = plan
        .policies
        .iter()
        .enumerate()
        .map(|(i, cfg)| {
            let episodes: Vec<EpisodeResult> = reps
                .iter()
                .map(|(by_policy, _)| by_policy[i].clone())
                .collect();
            let summary = summarize(&episodes).expect("n_reps >= 1 and equal horizons");
            PolicyBatch {
                cfg: cfg.clone(),
                summary,
                episodes,
            }
        })
        .collect();

    Ok(ReplicationOutput {
        per_policy,
        clipped_cells,
    })
}

/// Nearest-rank quantile of a sorted slice: the smallest value with at least
/// `p` of the mass at or below it.
fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (p * n as f64).ceil().max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

/// Pointwise mean, standard error, and nearest-rank quantiles across
/// replications.
pub fn summarize(episodes: &[EpisodeResult]) -> Result<BatchSummary, SimError> {
    let first = episodes.first().ok_or(SimError::NoReplications)?;
    let horizon = first.cum_regret.len();
    let n = episodes.len();
    let mut mean = Vec::with_capacity(horizon);
    let mut stderr = Vec::with_capacity(horizon);
    let mut quantiles = [const { Vec::new() }; 5];
    let ps = [0.05, 0.25, 0.50, 0.75, 0.95];
    let mut column = vec![0.0f64; n];
    for t in 0..horizon {
        for (i, ep) in episodes.iter().enumerate() {
            column[i] = ep.cum_regret[t];
        }
        let m = column.iter().sum::<f64>() / n as f64;
        mean.push(m);
        let se = if n > 1 {
            let var = column.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        stderr.push(se);
        column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (q, &p) in quantiles.iter_mut().zip(&ps) {
            q.push(nearest_rank(&column, p));
        }
    }
    let [q05, q25, q50, q75, q95] = quantiles;
    Ok(BatchSummary {
        policy: first.policy.clone(),
        n_reps: n,
        mean,
        stderr,
        q05,
        q25,
        q50,
        q75,
        q95,
    })
}

/// Long-format trajectory CSV: `policy,replication,t,arm,cum_regret`.
pub fn write_trajectories(path: &Path, batches: &[PolicyBatch]) -> Result<(), SimError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "policy,replication,t,arm,cum_regret")?;
    for batch in batches {
        for (rep, ep) in batch.episodes.iter().enumerate() {
            for (i, (&arm, &cr)) in ep.arms.iter().zip(&ep.cum_regret).enumerate() {
                writeln!(w, "{},{},{},{},{}", ep.policy, rep, i + 1, arm, cr)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Summary CSV: `policy,t,mean,stderr,q05,q25,q50,q75,q95`.
pub fn write_summary(path: &Path, batches: &[PolicyBatch]) -> Result<(), SimError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "policy,t,mean,stderr,q05,q25,q50,q75,q95")?;
    for batch in batches {
        let s = &batch.summary;
        for t in 0..s.mean.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                s.policy,
                t + 1,
                s.mean[t],
                s.stderr[t],
                s.q05[t],
                s.q25[t],
                s.q50[t],
                s.q75[t],
                s.q95[t]
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::PolicyKind;

    fn fig2_instance() -> ProblemInstance {
        ProblemInstance::aux_equals_reward(vec![0.7, 0.5, 0.5], 0.5, Family::Gaussian).unwrap()
    }

    #[test]
    fn deterministic_zero_noise_trace() {
        // K = 2, mu = (1, 0), sigma = 0 (value-degenerate), UCB1 c = 3,
        // T = 10: init pulls arms 0 then 1; afterwards arm 0's index stays 1
        // and arm 1's stays 0, so arm 0 is pulled for the rest.
        let inst = ProblemInstance::new(
            vec![1.0, 0.0],
            0.0,
            0.0,
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            Family::Gaussian,
            Family::Gaussian,
        )
        .unwrap();
        let h = ArrivalMatrix::zeros(2, 10);
        let cfg = PolicyConfig::new(PolicyKind::Ucb1, 3.0);
        let ep = run_episode(&inst, &h, &cfg, 123).unwrap();
        assert_eq!(ep.arms, vec![0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let expect_cum: Vec<f64> = vec![0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(ep.cum_regret, expect_cum);
    }

    #[test]
    fn episode_is_deterministic() {
        let inst = fig2_instance();
        let h = arrivals::gen_stationary(3, 200, 0.1, 5).matrix;
        let cfg = PolicyConfig::new(PolicyKind::ATs, 0.5);
        let a = run_episode(&inst, &h, &cfg, 99).unwrap();
        let b = run_episode(&inst, &h, &cfg, 99).unwrap();
        assert_eq!(a.arms, b.arms);
        assert_eq!(a.cum_regret, b.cum_regret);
    }

    #[test]
    fn pseudo_regret_accounting() {
        // cum_regret[T] must equal sum_k gap_k * pulls_k.
        let inst = fig2_instance();
        let h = arrivals::gen_stationary(3, 300, 0.05, 2).matrix;
        let cfg = PolicyConfig::new(PolicyKind::AUcb1, 1.0);
        let ep = run_episode(&inst, &h, &cfg, 7).unwrap();
        let mut pulls = [0u64; 3];
        for &a in &ep.arms {
            pulls[a as usize] += 1;
        }
        let expect: f64 = (0..3).map(|k| inst.gap(k) * pulls[k] as f64).sum();
        assert!((ep.final_regret() - expect).abs() < 1e-9);
        // And the trajectory is nondecreasing.
        for w in ep.cum_regret.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn aucb1_matches_ucb1_without_arrivals() {
        let inst = fig2_instance();
        let h = ArrivalMatrix::zeros(3, 400);
        let plain = run_episode(&inst, &h, &PolicyConfig::new(PolicyKind::Ucb1, 1.0), 11).unwrap();
        let aux = run_episode(&inst, &h, &PolicyConfig::new(PolicyKind::AUcb1, 1.0), 11).unwrap();
        assert_eq!(plain.arms, aux.arms);
    }

    #[test]
    fn two_ucbs_with_infinite_alpha_bar_matches_ucb1() {
        let inst = fig2_instance();
        let h = arrivals::gen_stationary(3, 400, 0.2, 21).matrix;
        let plain = run_episode(&inst, &h, &PolicyConfig::new(PolicyKind::Ucb1, 3.0), 4).unwrap();
        let two = run_episode(
            &inst,
            &h,
            &PolicyConfig::new(PolicyKind::TwoUcbs, 3.0).with_alpha_bar(f64::INFINITY),
            4,
        )
        .unwrap();
        assert_eq!(plain.arms, two.arms);
    }

    #[test]
    fn loaded_matrix_must_match_plan_dimensions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        arrivals::save_matrix(&ArrivalMatrix::zeros(3, 40), &path).unwrap();
        let inst = fig2_instance();
        let spec = ArrivalSpec::FromFile { path };
        let policies = [PolicyConfig::new(PolicyKind::Ucb1, 3.0)];
        let err = run_replications(&ReplicationPlan {
            instance: &inst,
            arrivals: &spec,
            horizon: 50, // file has 40 columns
            policies: &policies,
            n_reps: 1,
            base_seed: 0,
            regenerate_h: true,
        })
        .unwrap_err();
        assert!(matches!(err, SimError::DimensionMismatch { .. }), "{err}");
    }

    #[test]
    fn replications_prefix_stable() {
        let inst = fig2_instance();
        let spec = ArrivalSpec::Stationary { lambda: 0.05 };
        let policies = [PolicyConfig::new(PolicyKind::AUcb1, 1.0)];
        let mk = |n| ReplicationPlan {
            instance: &inst,
            arrivals: &spec,
            horizon: 100,
            policies: &policies,
            n_reps: n,
            base_seed: 31,
            regenerate_h: true,
        };
        let small = run_replications(&mk(3)).unwrap();
        let large = run_replications(&mk(6)).unwrap();
        for rep in 0..3 {
            assert_eq!(
                small.per_policy[0].episodes[rep].arms,
                large.per_policy[0].episodes[rep].arms
            );
        }
    }

    #[test]
    fn single_replication_summary_is_the_episode() {
        let inst = fig2_instance();
        let spec = ArrivalSpec::Stationary { lambda: 0.0 };
        let policies = [PolicyConfig::new(PolicyKind::Ucb1, 1.0)];
        let out = run_replications(&ReplicationPlan {
            instance: &inst,
            arrivals: &spec,
            horizon: 50,
            policies: &policies,
            n_reps: 1,
            base_seed: 9,
            regenerate_h: true,
        })
        .unwrap();
        let batch = &out.per_policy[0];
        assert_eq!(batch.summary.mean, batch.episodes[0].cum_regret);
        assert!(batch.summary.stderr.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn summarize_quantiles_match_sorted_oracle() {
        // 400 synthetic finals against a sort-based nearest-rank oracle.
        let episodes: Vec<EpisodeResult> = (0..400)
            .map(|i| {
                let v = ((i as f64) * 7919.0) % 400.0;
                EpisodeResult {
                    policy: "X".into(),
                    seed: i,
                    arms: vec![0],
                    per_step_regret: vec![v],
                    cum_regret: vec![v],
                }
            })
            .collect();
        let s = summarize(&episodes).unwrap();
        let mut sorted: Vec<f64> = episodes.iter().map(|e| e.final_regret()).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (p, got) in [
            (0.05, s.q05[0]),
            (0.25, s.q25[0]),
            (0.50, s.q50[0]),
            (0.75, s.q75[0]),
            (0.95, s.q95[0]),
        ] {
            let rank = ((p * 400.0f64).ceil() as usize).max(1) - 1;
            assert_eq!(got, sorted[rank], "p = {p}");
        }
        let m = sorted.iter().sum::<f64>() / 400.0;
        assert!((s.mean[0] - m).abs() < 1e-12);
    }

    #[test]
    fn summarize_two_finals() {
        let mk = |v: f64| EpisodeResult {
            policy: "X".into(),
            seed: 0,
            arms: vec![0],
            per_step_regret: vec![v],
            cum_regret: vec![v],
        };
        let s = summarize(&[mk(10.0), mk(20.0)]).unwrap();
        assert_eq!(s.mean[0], 15.0);
    }
}
