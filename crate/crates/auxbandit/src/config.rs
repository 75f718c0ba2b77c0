//! Experiment configuration: JSON schema, exhaustive validation, and the
//! named presets that reproduce the simulation and replay setups with one
//! command.

use serde::{Deserialize, Serialize};

use crate::arrivals::ArrivalSpec;
use crate::instance::{Family, InstanceError, ProblemInstance};
use crate::policies::{PolicyConfig, PolicyKind};
use crate::replay::CorpusParams;

pub const DEFAULT_SEED: u64 = 42;

/// Instance block of the config file. `aux_equals_reward` draws auxiliary
/// observations from the reward distributions themselves (`y = mu`,
/// `alpha = 1`, `sigma_hat = sigma`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub mu: Vec<f64>,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub reward_family: Family,
    #[serde(default)]
    pub aux_family: Family,
    #[serde(default)]
    pub aux_equals_reward: bool,
}

impl InstanceConfig {
    pub fn build(&self) -> Result<ProblemInstance, InstanceError> {
        if self.aux_equals_reward {
            return ProblemInstance::aux_equals_reward(
                self.mu.clone(),
                self.sigma,
                self.reward_family,
            );
        }
        let k = self.mu.len();
        ProblemInstance::new(
            self.mu.clone(),
            self.sigma,
            self.sigma_hat.unwrap_or(self.sigma),
            self.y.clone().unwrap_or_else(|| self.mu.clone()),
            self.alpha.clone().unwrap_or_else(|| vec![1.0; k]),
            self.reward_family,
            self.aux_family,
        )
    }
}

/// A fully validated simulation experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceConfig,
    pub arrivals: ArrivalSpec,
    pub horizon: usize,
    pub policies: Vec<PolicyConfig>,
    pub n_reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(default = "default_true")]
    pub regenerate_h: bool,
}

fn default_true() -> bool {
    true
}

/// Validation outcome: either the typed config or every problem found.
pub fn parse_config(text: &str) -> Result<(ExperimentConfig, Vec<String>), Vec<String>> {
    // First stage: untyped JSON so an empty or partial document reports all
    // missing fields at once rather than the first.
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return Err(vec![format!("invalid JSON: {e}")]),
    };
    let obj = match value.as_object() {
        Some(o) => o,
        None => return Err(vec!["config must be a JSON object".into()]),
    };
    let mut errors = Vec::new();
    for field in ["instance", "arrivals", "horizon", "policies", "n_reps"] {
        if !obj.contains_key(field) {
            errors.push(format!("missing required field `{field}`"));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let cfg: ExperimentConfig = match serde_json::from_value(value) {
        Ok(c) => c,
        Err(e) => return Err(vec![format!("config does not match the schema: {e}")]),
    };
    match validate(&cfg) {
        Ok(warnings) => Ok((cfg, warnings)),
        Err(errors) => Err(errors),
    }
}

/// Collects every validation error instead of stopping at the first;
/// returns soft tuning warnings when the config is acceptable.
pub fn validate(cfg: &ExperimentConfig) -> Result<Vec<String>, Vec<String>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let instance = match cfg.instance.build() {
        Ok(inst) => Some(inst),
        Err(e) => {
            errors.push(format!("instance: {e}"));
            None
        }
    };
    if let Err(e) = cfg.arrivals.validate() {
        errors.push(format!("arrivals: {e}"));
    }
    if cfg.horizon == 0 {
        errors.push("horizon must be at least 1".into());
    }
    if cfg.n_reps == 0 {
        errors.push("n_reps must be at least 1".into());
    }
    if cfg.policies.is_empty() {
        errors.push("policies must be non-empty".into());
    }
    let sigma = instance.as_ref().map(|i| i.sigma());
    for policy in &cfg.policies {
        match policy.validate(sigma) {
            Ok(mut w) => warnings.append(&mut w),
            Err(e) => errors.push(format!("policy {}: {e}", policy.label())),
        }
        if let Some(inst) = &instance {
            if policy.kind.uses_aux() && inst.sigma_hat() == 0.0 {
                match policy.kind {
                    PolicyKind::Ucb1Plus => {} // the noiseless case is UCB1+'s domain
                    _ => errors.push(format!(
                        "policy {}: sigma_hat = 0 but the policy weights auxiliary data",
                        policy.label()
                    )),
                }
            }
        }
    }
    {
        let mut labels: Vec<String> = cfg.policies.iter().map(PolicyConfig::label).collect();
        labels.sort();
        for pair in labels.windows(2) {
            if pair[0] == pair[1] {
                errors.push(format!("duplicate policy label {:?}", pair[0]));
            }
        }
    }
    if errors.is_empty() {
        Ok(warnings)
    } else {
        Err(errors)
    }
}

/// A named preset: either a simulation experiment or a replay experiment.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Preset {
    Sim(ExperimentConfig),
    Replay(ReplayPreset),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplayPreset {
    pub corpus: CorpusParams,
    pub policies: Vec<PolicyKind>,
    pub c: f64,
    pub n_reps: usize,
}

fn fig2_instance() -> InstanceConfig {
    InstanceConfig {
        mu: vec![0.7, 0.5, 0.5],
        sigma: 0.5,
        sigma_hat: None,
        y: None,
        alpha: None,
        reward_family: Family::Gaussian,
        aux_family: Family::Gaussian,
        aux_equals_reward: true,
    }
}

fn ucb_ts_policies() -> Vec<PolicyConfig> {
    vec![
        PolicyConfig::new(PolicyKind::Ucb1, 1.0),
        PolicyConfig::new(PolicyKind::AUcb1, 1.0),
        PolicyConfig::new(PolicyKind::Ts, 0.5),
        PolicyConfig::new(PolicyKind::ATs, 0.5),
    ]
}

fn eg_policies(delta: f64) -> Vec<PolicyConfig> {
    vec![
        PolicyConfig::new(PolicyKind::Eg, 1.0).with_delta(delta),
        PolicyConfig::new(PolicyKind::NEg, 1.0).with_delta(delta),
        PolicyConfig::new(PolicyKind::AEg, 1.0).with_delta(delta),
    ]
}

fn sim_preset(arrivals: ArrivalSpec, policies: Vec<PolicyConfig>, n_reps: usize) -> Preset {
    Preset::Sim(ExperimentConfig {
        instance: fig2_instance(),
        arrivals,
        horizon: 10_000,
        policies,
        n_reps,
        base_seed: None,
        regenerate_h: true,
    })
}

/// Tuning grid: the auxiliary-aware variants swept over their c values.
fn c_grid_policies() -> Vec<PolicyConfig> {
    let mut policies = Vec::new();
    for c in [0.4, 1.0, 1.6] {
        policies.push(
            PolicyConfig::new(PolicyKind::AEg, c)
                .with_delta(0.2)
                .with_label(format!("aEG(c={c})")),
        );
        policies.push(PolicyConfig::new(PolicyKind::AUcb1, c).with_label(format!("aUCB1(c={c})")));
    }
    for c in [0.1, 0.5, 0.7] {
        policies.push(PolicyConfig::new(PolicyKind::ATs, c).with_label(format!("aTS(c={c})")));
    }
    policies
}

/// Gap-misspecification grid for aEG.
fn gap_grid_policies() -> Vec<PolicyConfig> {
    [0.05, 0.2, 0.35]
        .into_iter()
        .map(|d| {
            PolicyConfig::new(PolicyKind::AEg, 1.0)
                .with_delta(d)
                .with_label(format!("aEG(delta={d})"))
        })
        .collect()
}

pub fn preset_names() -> Vec<&'static str> {
    vec![
        "fig2",
        "appF-stationary-500",
        "appF-stationary-100",
        "appF-stationary-10",
        "appF-diminishing-4",
        "appF-diminishing-2",
        "appF-diminishing-1",
        "appF-c-s500",
        "appF-c-s100",
        "appF-c-d8",
        "appF-c-d1",
        "appF-gap-s500",
        "appF-gap-s100",
        "appF-gap-d8",
        "appF-gap-d1",
        "appE-replay",
    ]
}

/// Look up a named preset. Stationary rates are quoted as expected total
/// arrivals over the horizon (500/T etc. with T = 10^4).
pub fn preset(name: &str) -> Option<Preset> {
    let stationary = |per_horizon: f64| ArrivalSpec::Stationary {
        lambda: per_horizon / 10_000.0,
    };
    let diminishing = |kappa_aux: f64| ArrivalSpec::DiminishingBernoulli { kappa_aux };
    let all_policies = |arrivals: ArrivalSpec| {
        let mut p = ucb_ts_policies();
        p.extend(eg_policies(0.2));
        sim_preset(arrivals, p, 400)
    };
    match name {
        "fig2" => Some(sim_preset(stationary(500.0), ucb_ts_policies(), 200)),
        "appF-stationary-500" => Some(all_policies(stationary(500.0))),
        "appF-stationary-100" => Some(all_policies(stationary(100.0))),
        "appF-stationary-10" => Some(all_policies(stationary(10.0))),
        "appF-diminishing-4" => Some(all_policies(diminishing(4.0))),
        "appF-diminishing-2" => Some(all_policies(diminishing(2.0))),
        "appF-diminishing-1" => Some(all_policies(diminishing(1.0))),
        "appF-c-s500" => Some(sim_preset(stationary(500.0), c_grid_policies(), 400)),
        "appF-c-s100" => Some(sim_preset(stationary(100.0), c_grid_policies(), 400)),
        "appF-c-d8" => Some(sim_preset(diminishing(8.0), c_grid_policies(), 400)),
        "appF-c-d1" => Some(sim_preset(diminishing(1.0), c_grid_policies(), 400)),
        "appF-gap-s500" => Some(sim_preset(stationary(500.0), gap_grid_policies(), 400)),
        "appF-gap-s100" => Some(sim_preset(stationary(100.0), gap_grid_policies(), 400)),
        "appF-gap-d8" => Some(sim_preset(diminishing(8.0), gap_grid_policies(), 400)),
        "appF-gap-d1" => Some(sim_preset(diminishing(1.0), gap_grid_policies(), 400)),
        "appE-replay" => Some(Preset::Replay(ReplayPreset {
            corpus: CorpusParams {
                n_cases: 100,
                horizon: 2000,
                ctr_range: (0.01, 0.2),
                cvr_range: (0.05, 0.5),
                alpha_range: (1.0, 16.0),
                delta_range: (0.01, 0.04),
                misspec_ratio: 1.2,
                arrival_intensity: 1.0,
            },
            policies: vec![PolicyKind::AUcb1, PolicyKind::TwoUcbs],
            c: 0.05,
            n_reps: 200,
        })),
        _ => None,
    }
}
