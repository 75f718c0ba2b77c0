//! Multi-armed bandits with auxiliary information arrivals.
//!
//! Classical bandit policies assume feedback arrives only for the arm just
//! pulled. In many deployments extra observations also show up *between*
//! decisions — search traffic hitting a product page, say — and a policy
//! that folds them into its estimates can explore far less. This crate
//! implements that setting end to end:
//!
//! - [`instance`]: problem instances (mean rewards, noise scales, and the
//!   linear mappings from auxiliary observations to reward estimates);
//! - [`arrivals`]: the K x T arrival-count matrix, generators for
//!   stationary / diminishing / early-concentrated processes, CSV I/O;
//! - [`state`]: the weighted-precision counters and estimators shared by
//!   all policies;
//! - [`policies`]: UCB1/aUCB1, TS/aTS, epsilon-greedy variants with virtual
//!   time indices, the myopic policy, UCB1+ and 2-UCBs;
//! - [`bounds`]: closed-form minimax lower bounds, aUCB1 regret envelopes,
//!   per-arrival-family envelopes, and the AIE index;
//! - [`sim`]: deterministic replicated episodes with common random numbers;
//! - [`replay`]: the click-gated content-recommendation experiment with
//!   RI / RMM / AIE / NH metrics on synthetic article-day corpora;
//! - [`config`] / [`cli`]: JSON experiment configs, named presets, and the
//!   `auxbandit` command-line tool.
//!
//! The `examples/` directory holds one runnable example per capability; see
//! the README for the tour.

// Parameter guards are written `!(x > 0.0)` so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrivals;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod instance;
pub mod policies;
pub mod replay;
pub mod rng;
pub mod sim;
pub mod state;

pub use arrivals::{ArrivalMatrix, ArrivalSpec};
pub use instance::{Family, ProblemInstance};
pub use policies::{PolicyConfig, PolicyKind};
pub use sim::{run_episode, run_replications, EpisodeResult, ReplicationPlan};
pub use state::{PolicyState, Scales};
