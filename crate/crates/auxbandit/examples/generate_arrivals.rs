//! Generate arrival matrices from each process family, compare their shapes,
//! and round-trip one through the CSV format.
//!
//! ```bash
//! cargo run --release -p auxbandit --example generate_arrivals
//! ```

use auxbandit::arrivals::{generate, matrix_to_csv, parse_matrix, ArrivalMatrix, ArrivalSpec};

fn profile(label: &str, m: &ArrivalMatrix) {
    let t = m.horizon();
    let total = m.total(0);
    let quarters: Vec<u64> = (1..=4).map(|q| m.cum(0, q * t / 4)).collect();
    println!(
        "{label:<28} total {total:>5}   cumulative by quarter {:>5} {:>5} {:>5} {:>5}",
        quarters[0], quarters[1], quarters[2], quarters[3]
    );
}

fn main() -> anyhow::Result<()> {
    let (arms, horizon, seed) = (1, 10_000, 42);

    println!("arm 0 of each family, T = {horizon}:\n");
    let stationary = generate(
        &ArrivalSpec::Stationary { lambda: 0.05 },
        arms,
        horizon,
        seed,
    )?;
    profile("stationary lambda=0.05", &stationary.matrix);

    let dim_bern = generate(
        &ArrivalSpec::DiminishingBernoulli { kappa_aux: 4.0 },
        arms,
        horizon,
        seed,
    )?;
    profile("diminishing kappa_aux=4", &dim_bern.matrix);

    let dim_det = generate(
        &ArrivalSpec::DiminishingDeterministic {
            kappa: 4.0,
            delta: 0.2,
            sigma_hat: 0.5,
        },
        arms,
        horizon,
        seed,
    )?;
    profile("deterministic kappa=4", &dim_det.matrix);

    // Same expected total as the stationary process, but concentrated early.
    for gamma in [0.0, 0.5, 0.9] {
        let g = generate(
            &ArrivalSpec::GammaFamily {
                lambda: 0.05,
                gamma,
            },
            arms,
            horizon,
            seed,
        )?;
        profile(&format!("gamma family gamma={gamma}"), &g.matrix);
        if g.clipped_cells > 0 {
            println!("  ({} cells clipped to probability 1)", g.clipped_cells);
        }
    }

    // CSV round trip.
    let csv = matrix_to_csv(&stationary.matrix);
    let back = parse_matrix(&csv)?;
    assert_eq!(back, stationary.matrix);
    println!(
        "\nCSV round trip: {} bytes, identical after reparse",
        csv.len()
    );
    Ok(())
}
