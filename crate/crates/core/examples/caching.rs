//! UAV-assisted caching: tier mix, tracking versus static UAV, and the
//! surveillance collect-then-deliver variant.

use uav_udn::geometry::{make_grid, AreaSpec};
use uav_udn::scenario::caching::{
    compare_policies, run_cache, surveillance_run, CacheConfig, MobilityConfig, SurveillanceConfig,
};

fn main() -> uav_udn::Result<()> {
    let cfg = CacheConfig::default();
    let (_, s) = run_cache(&cfg, 1)?;
    println!(
        "random waypoint: {} requests, self {:.3} d2d {:.3} uav {:.3} bs {:.3}, mean delay {:.4} s",
        s.requests, s.self_hit, s.d2d_hit, s.uav_hit, s.bs_hit, s.mean_delay
    );

    for radius in [10.0, 25.0, 50.0, 100.0, 200.0] {
        let (_, s) = run_cache(&CacheConfig { d2d_radius: radius, ..cfg.clone() }, 1)?;
        println!("d2d radius {radius:>5} m: d2d {:.3}, mean delay {:.4} s", s.d2d_hit, s.mean_delay);
    }

    let clustered = CacheConfig {
        users: 100,
        mobility: MobilityConfig::clustered(),
        ..cfg
    };
    let seeds = 50;
    let (mut tracking, mut fixed) = (0.0, 0.0);
    for seed in 0..seeds {
        let (t, s) = compare_policies(&clustered, seed)?;
        tracking += t.mean_delay / seeds as f64;
        fixed += s.mean_delay / seeds as f64;
    }
    println!("clustered users, {seeds} seeds: tracking UAV {tracking:.6} s, static UAV {fixed:.6} s");

    let area = AreaSpec::square(1000.0)?;
    let sensors = make_grid(&area, 4, 4)?;
    for speed in [5.0, 10.0, 20.0] {
        let r = surveillance_run(&SurveillanceConfig {
            sensors: sensors.clone(),
            speed,
            ..SurveillanceConfig::default()
        })?;
        println!(
            "surveillance at {speed} m/s: collect {:.1} s, fly {:.1} s, upload {:.4} s, total {:.1} s",
            r.collection_time, r.flight_time, r.transmission_time, r.total_delay
        );
    }
    Ok(())
}
