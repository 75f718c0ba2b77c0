//! Information arrival matrices and their generators.
//!
//! The matrix `H` records how many auxiliary observations arrive on each arm
//! between consecutive decision epochs. Three process families are provided
//! (stationary, diminishing, and a concentration-controlled family that
//! interpolates between them), plus CSV load/save for user-supplied matrices.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{bernoulli, Phase, StreamKey};

#[derive(Debug, Error)]
pub enum ArrivalError {
    #[error("matrix data has length {got}, expected {k} x {t} = {expected}")]
    ShapeMismatch {
        got: usize,
        k: usize,
        t: usize,
        expected: usize,
    },
    #[error("lambda must lie in [0, 1], got {0}")]
    BadLambda(f64),
    #[error("kappa must be positive, got {0}")]
    BadKappa(f64),
    #[error("gamma must lie in [0, 1); for gamma >= 1 use the diminishing process (got {0})")]
    BadGamma(f64),
    #[error("{field} must be positive, got {value}")]
    BadScale { field: &'static str, value: f64 },
    #[error("arrival count at t = {t} does not fit in u32")]
    CountOverflow { t: usize },
    #[error("row {row}, column {col}: {reason}")]
    Parse {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("matrix file is empty")]
    EmptyFile,
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// K x T grid of non-negative arrival counts; `h(k, t)` is the number of
/// auxiliary observations on arm `k` arriving between epochs `t - 1` and `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrivalMatrix {
    arms: usize,
    horizon: usize,
    data: Vec<u32>, // row-major, arm-by-arm
}

impl ArrivalMatrix {
    pub fn new(arms: usize, horizon: usize, data: Vec<u32>) -> Result<Self, ArrivalError> {
        if data.len() != arms * horizon {
            return Err(ArrivalError::ShapeMismatch {
                got: data.len(),
                k: arms,
                t: horizon,
                expected: arms * horizon,
            });
        }
        Ok(Self {
            arms,
            horizon,
            data,
        })
    }

    pub fn zeros(arms: usize, horizon: usize) -> Self {
        Self {
            arms,
            horizon,
            data: vec![0; arms * horizon],
        }
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Arrival count for arm `arm` at epoch `t` (1-based).
    pub fn h(&self, arm: usize, t: usize) -> u32 {
        self.data[arm * self.horizon + (t - 1)]
    }

    /// One arm's arrivals; slice position `i` holds epoch `i + 1`.
    pub fn row(&self, arm: usize) -> &[u32] {
        &self.data[arm * self.horizon..(arm + 1) * self.horizon]
    }

    /// Cumulative arrivals on `arm` through epoch `t` (1-based); `cum(_, 0) == 0`.
    pub fn cum(&self, arm: usize, t: usize) -> u64 {
        self.row(arm)[..t].iter().map(|&h| u64::from(h)).sum()
    }

    pub fn total(&self, arm: usize) -> u64 {
        self.cum(arm, self.horizon)
    }
}

/// Which arrival process to generate, with its parameters.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ArrivalSpec {
    /// i.i.d. Bernoulli(lambda) arrivals per arm per epoch.
    Stationary { lambda: f64 },
    /// Independent Bernoulli(min{1, kappa_aux / t}) arrivals.
    DiminishingBernoulli { kappa_aux: f64 },
    /// Deterministic increments with cumulative count
    /// `floor(sigma_hat^2 * kappa / (2 delta^2) * ln t)`.
    DiminishingDeterministic {
        kappa: f64,
        delta: f64,
        sigma_hat: f64,
    },
    /// Bernoulli arrivals whose expected cumulative count follows
    /// `lambda * T * t^(1-gamma) / T^(1-gamma)`; `gamma` controls how much
    /// of the mass concentrates early.
    GammaFamily { lambda: f64, gamma: f64 },
    /// Load a fixed matrix from a CSV grid.
    FromFile { path: PathBuf },
}

impl ArrivalSpec {
    pub fn validate(&self) -> Result<(), ArrivalError> {
        match *self {
            ArrivalSpec::Stationary { lambda } => {
                if !(0.0..=1.0).contains(&lambda) {
                    return Err(ArrivalError::BadLambda(lambda));
                }
            }
            ArrivalSpec::DiminishingBernoulli { kappa_aux } => {
                if !(kappa_aux > 0.0) {
                    return Err(ArrivalError::BadKappa(kappa_aux));
                }
            }
            ArrivalSpec::DiminishingDeterministic {
                kappa,
                delta,
                sigma_hat,
            } => {
                if !(kappa > 0.0) {
                    return Err(ArrivalError::BadKappa(kappa));
                }
                if !(delta > 0.0) {
                    return Err(ArrivalError::BadScale {
                        field: "delta",
                        value: delta,
                    });
                }
                if !(sigma_hat > 0.0) {
                    return Err(ArrivalError::BadScale {
                        field: "sigma_hat",
                        value: sigma_hat,
                    });
                }
            }
            ArrivalSpec::GammaFamily { lambda, gamma } => {
                if !(0.0..=1.0).contains(&lambda) {
                    return Err(ArrivalError::BadLambda(lambda));
                }
                if !(0.0..1.0).contains(&gamma) {
                    return Err(ArrivalError::BadGamma(gamma));
                }
            }
            ArrivalSpec::FromFile { .. } => {}
        }
        Ok(())
    }
}

/// A generated matrix plus how many cells had their Bernoulli mean clipped
/// to 1 (the realized process then under-delivers relative to the nominal
/// expectation).
#[derive(Clone, Debug)]
pub struct GenReport {
    pub matrix: ArrivalMatrix,
    pub clipped_cells: u64,
}

/// Generate (or load) an arrival matrix. Stochastic kinds are a pure
/// function of `(spec, arms, horizon, seed)`.
pub fn generate(
    spec: &ArrivalSpec,
    arms: usize,
    horizon: usize,
    seed: u64,
) -> Result<GenReport, ArrivalError> {
    spec.validate()?;
    match spec {
        ArrivalSpec::Stationary { lambda } => Ok(gen_stationary(arms, horizon, *lambda, seed)),
        ArrivalSpec::DiminishingBernoulli { kappa_aux } => {
            gen_diminishing_bernoulli(arms, horizon, *kappa_aux, seed)
        }
        ArrivalSpec::DiminishingDeterministic {
            kappa,
            delta,
            sigma_hat,
        } => gen_diminishing_deterministic(arms, horizon, *kappa, *delta, *sigma_hat),
        ArrivalSpec::GammaFamily { lambda, gamma } => {
            gen_gamma_family(arms, horizon, *lambda, *gamma, seed)
        }
        ArrivalSpec::FromFile { path } => Ok(GenReport {
            matrix: load_matrix(path)?,
            clipped_cells: 0,
        }),
    }
}

fn cell_draw(seed: u64, arm: usize, t: usize, p: f64) -> bool {
    let key = StreamKey::root(seed)
        .phase(Phase::Arrivals)
        .child(arm as u64)
        .child(t as u64);
    bernoulli(&mut key.rng(), p)
}

pub fn gen_stationary(arms: usize, horizon: usize, lambda: f64, seed: u64) -> GenReport {
    let mut data = Vec::with_capacity(arms * horizon);
    for arm in 0..arms {
        for t in 1..=horizon {
            data.push(u32::from(cell_draw(seed, arm, t, lambda)));
        }
    }
    GenReport {
        matrix: ArrivalMatrix {
            arms,
            horizon,
            data,
        },
        clipped_cells: 0,
    }
}

pub fn gen_diminishing_bernoulli(
    arms: usize,
    horizon: usize,
    kappa_aux: f64,
    seed: u64,
) -> Result<GenReport, ArrivalError> {
    if !(kappa_aux > 0.0) {
        return Err(ArrivalError::BadKappa(kappa_aux));
    }
    let mut clipped = 0u64;
    let mut data = Vec::with_capacity(arms * horizon);
    for arm in 0..arms {
        for t in 1..=horizon {
            let raw = kappa_aux / t as f64;
            if raw > 1.0 {
                clipped += 1;
            }
            data.push(u32::from(cell_draw(seed, arm, t, raw.min(1.0))));
        }
    }
    Ok(GenReport {
        matrix: ArrivalMatrix {
            arms,
            horizon,
            data,
        },
        clipped_cells: clipped,
    })
}

pub fn gen_diminishing_deterministic(
    arms: usize,
    horizon: usize,
    kappa: f64,
    delta: f64,
    sigma_hat: f64,
) -> Result<GenReport, ArrivalError> {
    if !(kappa > 0.0) {
        return Err(ArrivalError::BadKappa(kappa));
    }
    if !(delta > 0.0) {
        return Err(ArrivalError::BadScale {
            field: "delta",
            value: delta,
        });
    }
    if !(sigma_hat > 0.0) {
        return Err(ArrivalError::BadScale {
            field: "sigma_hat",
            value: sigma_hat,
        });
    }
    let c = sigma_hat * sigma_hat * kappa / (2.0 * delta * delta);
    // cum(t) = floor(c ln t); ln 1 = 0 makes cum(1) = 0.
    let mut row = Vec::with_capacity(horizon);
    let mut prev = 0u64;
    for t in 1..=horizon {
        let cum = (c * (t as f64).ln()).floor().max(0.0) as u64;
        let inc = cum - prev;
        prev = cum;
        row.push(u32::try_from(inc).map_err(|_| ArrivalError::CountOverflow { t })?);
    }
    let mut data = Vec::with_capacity(arms * horizon);
    for _ in 0..arms {
        data.extend_from_slice(&row);
    }
    Ok(GenReport {
        matrix: ArrivalMatrix {
            arms,
            horizon,
            data,
        },
        clipped_cells: 0,
    })
}

/// Per-period Bernoulli mean for the gamma family:
/// `lambda * T * (t^(1-gamma) - (t-1)^(1-gamma)) / T^(1-gamma)`, which
/// telescopes to a total expectation of `lambda * T` and reduces to a flat
/// `lambda` at `gamma = 0`.
pub fn gamma_family_mean(horizon: usize, lambda: f64, gamma: f64, t: usize) -> f64 {
    let e = 1.0 - gamma;
    let tf = t as f64;
    lambda * horizon as f64 * (tf.powf(e) - (tf - 1.0).powf(e)) / (horizon as f64).powf(e)
}

pub fn gen_gamma_family(
    arms: usize,
    horizon: usize,
    lambda: f64,
    gamma: f64,
    seed: u64,
) -> Result<GenReport, ArrivalError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(ArrivalError::BadLambda(lambda));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(ArrivalError::BadGamma(gamma));
    }
    let means: Vec<f64> = (1..=horizon)
        .map(|t| gamma_family_mean(horizon, lambda, gamma, t))
        .collect();
    let mut clipped = 0u64;
    let mut data = Vec::with_capacity(arms * horizon);
    for arm in 0..arms {
        for (i, &p) in means.iter().enumerate() {
            if p > 1.0 {
                clipped += 1;
            }
            data.push(u32::from(cell_draw(seed, arm, i + 1, p.clamp(0.0, 1.0))));
        }
    }
    Ok(GenReport {
        matrix: ArrivalMatrix {
            arms,
            horizon,
            data,
        },
        clipped_cells: clipped,
    })
}

/// Parse a CSV grid of non-negative integers: K rows, T columns, no header.
pub fn load_matrix(path: &Path) -> Result<ArrivalMatrix, ArrivalError> {
    let text = std::fs::read_to_string(path).map_err(|source| ArrivalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<ArrivalMatrix, ArrivalError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (r, line) in text.lines().enumerate() {
        if line.is_empty() && r > 0 {
            continue; // tolerate a trailing blank line
        }
        let mut row = Vec::new();
        for (c, cell) in line.split(',').enumerate() {
            let v: u32 = cell.trim().parse().map_err(|_| ArrivalError::Parse {
                row: r + 1,
                col: c + 1,
                reason: format!("expected a non-negative integer, got {cell:?}"),
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(ArrivalError::Parse {
                    row: r + 1,
                    col: row.len(),
                    reason: format!("ragged row: {} cells, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ArrivalError::EmptyFile);
    }
    let arms = rows.len();
    let horizon = rows[0].len();
    let data = rows.into_iter().flatten().collect();
    ArrivalMatrix::new(arms, horizon, data)
}

pub fn matrix_to_csv(matrix: &ArrivalMatrix) -> String {
    let mut out = String::new();
    for arm in 0..matrix.arms() {
        let row = matrix.row(arm);
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn save_matrix(matrix: &ArrivalMatrix, path: &Path) -> Result<(), ArrivalError> {
    std::fs::write(path, matrix_to_csv(matrix)).map_err(|source| ArrivalError::Io {
        path: path.to_path_buf(),
        source,
    })
}
