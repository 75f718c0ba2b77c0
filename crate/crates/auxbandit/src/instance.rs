//! Problem instances: arms, mean rewards, noise scales, and the linear
//! mappings that turn auxiliary observations into reward estimates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reward / auxiliary observation distribution family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[default]
    Gaussian,
    Bernoulli,
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("need at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("{field} has length {got}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("sigma must be finite and >= 0, got {0}")]
    BadSigma(f64),
    #[error("sigma_hat must be finite and >= 0, got {0}")]
    BadSigmaHat(f64),
    #[error("{field}[{arm}] = {value} is out of range")]
    OutOfRange {
        field: &'static str,
        arm: usize,
        value: f64,
    },
}

/// A bandit instance with auxiliary-observation side information.
///
/// Arm `k`'s rewards have mean `mu[k]`; auxiliary observations on arm `k`
/// have mean `y[k]` and map to unbiased reward estimates through the linear
/// coefficient `alpha[k]` (`alpha[k] * y[k] == mu[k]` when well specified).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemInstance {
    mu: Vec<f64>,
    sigma: f64,
    sigma_hat: f64,
    y: Vec<f64>,
    alpha: Vec<f64>,
    reward_family: Family,
    aux_family: Family,
    best_arm: usize,
}

impl ProblemInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: Vec<f64>,
        sigma: f64,
        sigma_hat: f64,
        y: Vec<f64>,
        alpha: Vec<f64>,
        reward_family: Family,
        aux_family: Family,
    ) -> Result<Self, InstanceError> {
        let k = mu.len();
        if k < 2 {
            return Err(InstanceError::TooFewArms(k));
        }
        for (field, v) in [("y", &y), ("alpha", &alpha)] {
            if v.len() != k {
                return Err(InstanceError::LengthMismatch {
                    field,
                    got: v.len(),
                    expected: k,
                });
            }
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(InstanceError::BadSigma(sigma));
        }
        if !sigma_hat.is_finite() || sigma_hat < 0.0 {
            return Err(InstanceError::BadSigmaHat(sigma_hat));
        }
        for (arm, &m) in mu.iter().enumerate() {
            if !m.is_finite() {
                return Err(InstanceError::OutOfRange {
                    field: "mu",
                    arm,
                    value: m,
                });
            }
            if reward_family == Family::Bernoulli && !(0.0..=1.0).contains(&m) {
                return Err(InstanceError::OutOfRange {
                    field: "mu",
                    arm,
                    value: m,
                });
            }
        }
        for (arm, &v) in y.iter().enumerate() {
            let ok = v.is_finite() && v >= 0.0 && (aux_family != Family::Bernoulli || v <= 1.0);
            if !ok {
                return Err(InstanceError::OutOfRange {
                    field: "y",
                    arm,
                    value: v,
                });
            }
        }
        for (arm, &a) in alpha.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(InstanceError::OutOfRange {
                    field: "alpha",
                    arm,
                    value: a,
                });
            }
        }
        // Ties at the top are broken in favor of the smaller index.
        let best_arm = mu
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
            .0;
        Ok(Self {
            mu,
            sigma,
            sigma_hat,
            y,
            alpha,
            reward_family,
            aux_family,
            best_arm,
        })
    }

    /// Instance whose auxiliary observations are i.i.d. samples from the
    /// reward distributions themselves: `y = mu`, `alpha = 1`,
    /// `sigma_hat = sigma`.
    pub fn aux_equals_reward(
        mu: Vec<f64>,
        sigma: f64,
        family: Family,
    ) -> Result<Self, InstanceError> {
        let k = mu.len();
        let y = mu.clone();
        Self::new(mu, sigma, sigma, y, vec![1.0; k], family, family)
    }

    pub fn arms(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }

    pub fn reward_family(&self) -> Family {
        self.reward_family
    }

    pub fn aux_family(&self) -> Family {
        self.aux_family
    }

    /// Smallest argmax of the mean rewards.
    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    pub fn best_mean(&self) -> f64 {
        self.mu[self.best_arm]
    }

    /// Gap of arm `k` to the best mean.
    pub fn gap(&self, arm: usize) -> f64 {
        self.best_mean() - self.mu[arm]
    }

    /// Minimal gap over suboptimal arms; 0.0 if another arm ties the best.
    pub fn min_gap(&self) -> f64 {
        self.mu
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != self.best_arm)
            .map(|(_, &m)| self.best_mean() - m)
            .fold(f64::INFINITY, f64::min)
    }

    /// Per-arm gaps, `gaps[best_arm] == 0`.
    pub fn gaps(&self) -> Vec<f64> {
        (0..self.arms()).map(|k| self.gap(k)).collect()
    }

    /// True when every arm with a positive coefficient satisfies
    /// `alpha_k * y_k == mu_k` (up to rounding). Misspecified instances are
    /// permitted, but flagged.
    pub fn is_well_specified(&self) -> bool {
        self.alpha
            .iter()
            .zip(&self.y)
            .zip(&self.mu)
            .filter(|((&a, _), _)| a > 0.0)
            .all(|((&a, &y), &m)| (a * y - m).abs() <= 1e-9 * (1.0 + m.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> ProblemInstance {
        ProblemInstance::aux_equals_reward(vec![0.7, 0.5, 0.5], 0.5, Family::Gaussian).unwrap()
    }

    #[test]
    fn best_arm_is_smallest_argmax() {
        let inst =
            ProblemInstance::aux_equals_reward(vec![0.5, 0.7, 0.7], 0.5, Family::Gaussian).unwrap();
        assert_eq!(inst.best_arm(), 1);
        assert_eq!(inst.best_mean(), 0.7);
    }

    #[test]
    fn gaps_and_min_gap() {
        let inst = fig2();
        let gaps = inst.gaps();
        assert_eq!(gaps[0], 0.0);
        assert!((gaps[1] - 0.2).abs() < 1e-12);
        assert!((gaps[2] - 0.2).abs() < 1e-12);
        assert!((inst.min_gap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn well_specified_flag() {
        let inst = fig2();
        assert!(inst.is_well_specified());
        let bad = ProblemInstance::new(
            vec![0.7, 0.5],
            0.5,
            0.5,
            vec![0.7, 0.5],
            vec![1.0, 2.0],
            Family::Gaussian,
            Family::Gaussian,
        )
        .unwrap();
        assert!(!bad.is_well_specified());
    }

    #[test]
    fn bernoulli_means_must_be_probabilities() {
        let err = ProblemInstance::new(
            vec![1.2, 0.5],
            0.5,
            0.5,
            vec![0.5, 0.5],
            vec![1.0, 1.0],
            Family::Bernoulli,
            Family::Bernoulli,
        )
        .unwrap_err();
        assert!(matches!(err, InstanceError::OutOfRange { field: "mu", .. }));
    }

    #[test]
    fn rejects_single_arm() {
        let err = ProblemInstance::aux_equals_reward(vec![0.7], 0.5, Family::Gaussian).unwrap_err();
        assert_eq!(err, InstanceError::TooFewArms(1));
    }
}
