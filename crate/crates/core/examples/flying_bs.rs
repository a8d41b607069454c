//! UAV as a flying base station above D2D pairs: one drop solved in full,
//! then the height-throughput curve for three pair densities.
//!
//! `cargo run --release --example flying_bs -- 50` sets the trial count.

use uav_udn::scenario::bs::{draw_instance, optimize_bs, sum_throughput, sweep_heights, BsConfig};

fn main() -> uav_udn::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let cfg = BsConfig {
        trials,
        height_levels: 32,
        ..BsConfig::default()
    };

    let inst = draw_instance(&cfg, 7)?;
    let best = optimize_bs(&inst, &cfg)?;
    let eval = sum_throughput(&inst, best.height, &best.powers, &cfg)?;
    println!(
        "drop with {} pairs: height {:.1} m, UAV power {:.3} W, sum rate {:.3} bits/s/Hz, user SINR {:.1}",
        inst.pairs.len(),
        best.height,
        best.powers[0],
        best.throughput,
        eval.uav_user_sinr
    );

    let lambdas = [0.5e-5, 1e-5, 2e-5];
    let rows = sweep_heights(&cfg, &lambdas)?;
    for curve in rows.chunks(cfg.height_levels) {
        let peak = curve
            .iter()
            .max_by(|a, b| a.mean_throughput.total_cmp(&b.mean_throughput))
            .expect("non-empty curve");
        println!(
            "lambda {:.1e}: best height {:.0} m, mean {:.3} +- {:.3} ({} trials)",
            peak.lambda, peak.height, peak.mean_throughput, peak.stderr, peak.trials
        );
    }
    Ok(())
}
