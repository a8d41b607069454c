//! Mobile relay between a source and a destination 2 km apart: optimized
//! plan against the static midpoint relay, and energy efficiency versus
//! speed cap.

use uav_udn::scenario::relay::{energy_efficiency, optimize_relay, plan_energy, static_baseline, RelayConfig};

fn main() -> uav_udn::Result<()> {
    let cfg = RelayConfig::default();
    let best = optimize_relay(&cfg)?;
    let fixed = static_baseline(&cfg)?;
    println!(
        "T = {} s, V = {} m/s: optimized {:.3}, static {:.3} bits/s/Hz ({} sweeps)",
        cfg.horizon,
        cfg.speed_max,
        best.throughput,
        fixed.throughput,
        best.trace.len() - 1
    );
    let path: Vec<String> = best.plan.positions.iter().step_by(10).map(|x| format!("{x:.0}")).collect();
    println!("positions every 10 slots: {}", path.join(" "));

    for v in [20.0, 40.0, 60.0, 80.0, 100.0] {
        let c = RelayConfig { speed_max: v, ..cfg.clone() };
        let s = optimize_relay(&c)?;
        println!(
            "V = {v:>5}: throughput {:.4}, energy {:.0} J, EE {:.4} bits/Hz/J",
            s.throughput,
            plan_energy(&s.plan, &c)?,
            energy_efficiency(&s.plan, &c)?
        );
    }
    Ok(())
}
