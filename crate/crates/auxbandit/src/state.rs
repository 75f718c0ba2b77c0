//! Per-arm counters and the weighted-precision estimators every policy reads.
//!
//! All quantities are maintained incrementally as plain sum accumulation, so
//! a from-scratch replay of the same event log reproduces them bit for bit.
//! Counts are real-valued: blending reward and auxiliary observations at
//! their respective precisions yields fractional effective sample sizes.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("sigma_hat = 0 while auxiliary observations are present")]
    SigmaHatZeroWithAux,
    #[error("sigma = 0 while reward observations are present")]
    SigmaZeroWithRewards,
    #[error("alpha_bar must be positive, got {0}")]
    BadAlphaBar(f64),
}

/// Noise scales a policy assumes when weighting observations.
#[derive(Clone, Copy, Debug)]
pub struct Scales {
    pub sigma: f64,
    pub sigma_hat: f64,
}

impl Scales {
    pub fn new(sigma: f64, sigma_hat: f64) -> Self {
        Scales { sigma, sigma_hat }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct ArmState {
    pulls: u64,
    reward_sum: f64,
    aux_count: u64,
    aux_sum: f64,
    mapped_aux_sum: f64,
    tau: f64,
}

/// Weighted mean and effective observation count for one arm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub count: f64,
}

/// Counters for one policy over one episode: pulls, reward sums, auxiliary
/// observation sums (raw and mapped), virtual time indices, the epoch clock,
/// and the click clock used by the replay experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyState {
    arms: Vec<ArmState>,
    epoch: u64,
    clicks: u64,
}

impl PolicyState {
    pub fn new(arms: usize) -> Self {
        PolicyState {
            arms: vec![ArmState::default(); arms],
            epoch: 0,
            clicks: 0,
        }
    }

    pub fn arms(&self) -> usize {
        self.arms.len()
    }

    fn check(&self, arm: usize) -> Result<(), StateError> {
        if arm < self.arms.len() {
            Ok(())
        } else {
            Err(StateError::ArmOutOfRange {
                arm,
                arms: self.arms.len(),
            })
        }
    }

    /// Mark the start of epoch `t` (1-based).
    pub fn set_epoch(&mut self, t: u64) {
        self.epoch = t;
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Number of clicked recommendations so far (replay mode's time index).
    pub fn clicks(&self) -> u64 {
        self.clicks
    }

    /// Record a reward observation. In replay mode an unclicked
    /// recommendation contributes nothing to the counters; the click clock
    /// advances only on clicks.
    pub fn update_on_reward(
        &mut self,
        arm: usize,
        reward: f64,
        clicked: bool,
    ) -> Result<(), StateError> {
        self.check(arm)?;
        if clicked {
            let a = &mut self.arms[arm];
            a.pulls += 1;
            a.reward_sum += reward;
            self.clicks += 1;
        }
        Ok(())
    }

    /// Record a batch of auxiliary observations (possibly empty). When the
    /// mapping coefficient is known, the mapped sum accumulates
    /// `alpha_k * y` per observation; the raw sum is always maintained so
    /// the same state serves unknown-mapping policies.
    pub fn update_on_aux(
        &mut self,
        arm: usize,
        observations: &[f64],
        alpha_k: Option<f64>,
    ) -> Result<(), StateError> {
        self.check(arm)?;
        let a = &mut self.arms[arm];
        for &y in observations {
            a.aux_sum += y;
            if let Some(alpha) = alpha_k {
                a.mapped_aux_sum += alpha * y;
            }
        }
        a.aux_count += observations.len() as u64;
        Ok(())
    }

    /// Advance arm `arm`'s virtual time index:
    /// `tau <- (tau + 1) * exp(rate * h)`. A zero rate reproduces the plain
    /// clock `tau = t`.
    pub fn advance_virtual_time(
        &mut self,
        arm: usize,
        h: u32,
        rate: f64,
    ) -> Result<(), StateError> {
        self.check(arm)?;
        let a = &mut self.arms[arm];
        a.tau = (a.tau + 1.0) * (rate * f64::from(h)).exp();
        Ok(())
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.arms[arm].pulls
    }

    pub fn reward_sum(&self, arm: usize) -> f64 {
        self.arms[arm].reward_sum
    }

    pub fn aux_count(&self, arm: usize) -> u64 {
        self.arms[arm].aux_count
    }

    pub fn aux_sum(&self, arm: usize) -> f64 {
        self.arms[arm].aux_sum
    }

    pub fn mapped_aux_sum(&self, arm: usize) -> f64 {
        self.arms[arm].mapped_aux_sum
    }

    pub fn tau(&self, arm: usize) -> f64 {
        self.arms[arm].tau
    }

    /// Empirical mean of the raw auxiliary observations.
    pub fn aux_mean(&self, arm: usize) -> f64 {
        let a = &self.arms[arm];
        a.aux_sum / (a.aux_count.max(1) as f64)
    }

    /// Reward-only empirical mean and pull count (mean defaults to 0 with no
    /// observations).
    pub fn reward_stats(&self, arm: usize) -> Stats {
        let a = &self.arms[arm];
        Stats {
            mean: a.reward_sum / (a.pulls.max(1) as f64),
            count: a.pulls as f64,
        }
    }

    /// Precision-weighted mean and count blending rewards with mapped
    /// auxiliary observations:
    ///
    /// `count = pulls + (sigma^2 / sigma_hat^2) * aux_count`,
    /// `mean = (reward_sum / sigma^2 + mapped_aux_sum / sigma_hat^2) / (pulls / sigma^2 + aux_count / sigma_hat^2)`.
    ///
    /// With no auxiliary observations this reduces exactly to
    /// [`reward_stats`](Self::reward_stats); with nothing at all, mean is 0.
    pub fn known_mapping_stats(&self, arm: usize, scales: Scales) -> Result<Stats, StateError> {
        self.check(arm)?;
        let a = &self.arms[arm];
        if a.aux_count == 0 {
            return Ok(self.reward_stats(arm));
        }
        if scales.sigma_hat == 0.0 {
            return Err(StateError::SigmaHatZeroWithAux);
        }
        if scales.sigma == 0.0 && a.pulls > 0 {
            return Err(StateError::SigmaZeroWithRewards);
        }
        let ip = 1.0 / (scales.sigma * scales.sigma);
        let ia = 1.0 / (scales.sigma_hat * scales.sigma_hat);
        let denom = ip * a.pulls as f64 + ia * a.aux_count as f64;
        let count = a.pulls as f64
            + (scales.sigma * scales.sigma) / (scales.sigma_hat * scales.sigma_hat)
                * a.aux_count as f64;
        let mean = (ip * a.reward_sum + ia * a.mapped_aux_sum) / denom;
        Ok(Stats { mean, count })
    }

    /// Optimistic mean and count for unknown mappings: raw auxiliary sums
    /// scaled by the upper bound `alpha_bar`:
    ///
    /// `count = pulls + sigma^2 / (alpha_bar^2 sigma_hat^2) * aux_count`,
    /// `mean = (reward_sum + w * alpha_bar * aux_sum) / max(1, count)`.
    ///
    /// An infinite `alpha_bar` is the "no auxiliary information" sentinel and
    /// reduces exactly to the reward-only statistics.
    pub fn optimistic_stats(
        &self,
        arm: usize,
        scales: Scales,
        alpha_bar: f64,
    ) -> Result<Stats, StateError> {
        self.check(arm)?;
        if !(alpha_bar > 0.0) {
            return Err(StateError::BadAlphaBar(alpha_bar));
        }
        let a = &self.arms[arm];
        if a.aux_count == 0 || alpha_bar.is_infinite() {
            return Ok(self.reward_stats(arm));
        }
        if scales.sigma_hat == 0.0 {
            return Err(StateError::SigmaHatZeroWithAux);
        }
        let w = (scales.sigma * scales.sigma)
            / (alpha_bar * alpha_bar * scales.sigma_hat * scales.sigma_hat);
        let count = a.pulls as f64 + w * a.aux_count as f64;
        let mean = (a.reward_sum + w * alpha_bar * a.aux_sum) / count.max(1.0);
        Ok(Stats { mean, count })
    }
}
