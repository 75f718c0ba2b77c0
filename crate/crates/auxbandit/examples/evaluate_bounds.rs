//! Closed-form bound evaluators against a simulated policy: the minimax
//! lower bound, the aUCB1 regret envelope on a realized arrival matrix, the
//! stationary/diminishing envelopes for posterior sampling, and the AIE
//! index.
//!
//! ```bash
//! cargo run --release -p auxbandit --example evaluate_bounds
//! ```

use auxbandit::arrivals::{generate, ArrivalSpec};
use auxbandit::bounds::{
    aie_index, aucb1_upper_bound, logsumexp_rate, minimax_lower_bound, ts_envelope_bound,
    TsEnvelopeKind, TsEnvelopeParams,
};
use auxbandit::instance::{Family, ProblemInstance};
use auxbandit::policies::{PolicyConfig, PolicyKind};
use auxbandit::sim::{replication_seed, run_episode, summarize};

fn main() -> anyhow::Result<()> {
    let instance = ProblemInstance::aux_equals_reward(vec![0.7, 0.5, 0.5], 0.5, Family::Gaussian)?;
    let (horizon, delta) = (5000usize, 0.2f64);
    let spec = ArrivalSpec::Stationary { lambda: 0.02 };
    let h_seed = 9;
    let h = generate(&spec, instance.arms(), horizon, h_seed)?.matrix;

    // The rate functional behind everything: more or earlier arrivals push
    // it down from log T.
    let zeros = vec![0u32; horizon];
    println!("rate kernel log sum exp(-c cum h), c = 0.1:");
    println!(
        "  zero row      : {:.3} (= ln T = {:.3})",
        logsumexp_rate(&zeros, 0.1)?,
        (horizon as f64).ln()
    );
    println!("  realized row 0: {:.3}", logsumexp_rate(h.row(0), 0.1)?);

    // Minimax lower bound, with and without the arrivals.
    let lb_h = minimax_lower_bound(&h, delta, 0.5, 0.5)?;
    let lb_0 = minimax_lower_bound(
        &auxbandit::arrivals::ArrivalMatrix::zeros(instance.arms(), horizon),
        delta,
        0.5,
        0.5,
    )?;
    println!(
        "\nminimax lower bound: {:.2} with arrivals vs {:.2} without",
        lb_h.value, lb_0.value
    );

    // Simulated aUCB1 against the envelope, holding the SAME matrix fixed
    // across replications.
    let episodes: Vec<_> = (0..100)
        .map(|rep| {
            run_episode(
                &instance,
                &h,
                &PolicyConfig::new(PolicyKind::AUcb1, 3.0),
                replication_seed(0, rep),
            )
            .unwrap()
        })
        .collect();
    let summary = summarize(&episodes)?;
    let envelope = aucb1_upper_bound(&h, &instance.gaps(), 0.5, 0.5, 3.0)?;
    println!(
        "aUCB1 (c=3) simulated regret {:.1} ± {:.1} under envelope {:.1}",
        summary.final_mean(),
        summary.final_stderr(),
        envelope
    );

    // Envelopes for the stationary and diminishing arrival families.
    let mut params = TsEnvelopeParams {
        c: 0.5,
        delta,
        delta_k: instance.gaps(),
        sigma: 0.5,
        sigma_hat: 0.5,
        horizon,
        lambda: Some(0.02),
        kappa: None,
        c_const: 1.0,
    };
    println!(
        "\naTS envelopes: stationary {:.1}",
        ts_envelope_bound(TsEnvelopeKind::Stationary, &params)?
    );
    params.kappa = Some(8.0);
    println!(
        "               diminishing {:.1}",
        ts_envelope_bound(TsEnvelopeKind::Diminishing, &params)?
    );

    // AIE: how effective one arm's arrival trajectory is.
    println!("\nAIE (delta=0.03, sigma_hat=0.25, alpha=2, c_tilde=0.2):");
    println!(
        "  zero row      : {:.4}",
        aie_index(&zeros, horizon, 0.03, 0.25, 2.0, 0.2)?
    );
    println!(
        "  realized row 0: {:.4}",
        aie_index(h.row(0), horizon, 0.03, 0.25, 2.0, 0.2)?
    );
    Ok(())
}
