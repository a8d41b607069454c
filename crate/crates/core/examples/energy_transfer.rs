//! Wireless energy transfer to a 20x20 node grid: maps for two paths,
//! the valley schedule against the fixed one, and a CSV dump.
//!
//! Pass a path to write the sigmoid map there.

use uav_udn::geometry::TrajectoryKind;
use uav_udn::scenario::wet::{compare_schedules, map_distance, run_wet, write_map_csv, ScheduleKind, WetConfig};

fn main() -> uav_udn::Result<()> {
    let sigmoid = WetConfig::default();
    let spiral = WetConfig {
        trajectory: TrajectoryKind::Spiral,
        ..WetConfig::default()
    };
    let a = run_wet(&sigmoid)?;
    let b = run_wet(&spiral)?;
    println!("total energy: sigmoid {:.3e} J, spiral {:.3e} J", a.total_energy(), b.total_energy());
    println!("L-inf distance between normalized maps: {:.3}", map_distance(&a, &b)?);

    for (name, r) in [("sigmoid", &a), ("spiral", &b)] {
        println!("{name} normalized map, every other node:");
        for i in (0..r.rows).step_by(2) {
            let line: String = (0..r.cols).step_by(2).map(|j| format!("{:5.2}", r.normalized_at(i, j))).collect();
            println!("  {line}");
        }
    }

    let valley = WetConfig {
        schedule: ScheduleKind::Valley,
        ..WetConfig::default()
    };
    let cmp = compare_schedules(&sigmoid, &valley)?;
    let (outer, middle) = cmp.column_thirds();
    println!("valley / fixed ratio: outer columns {outer:.3}, middle columns {middle:.3}, range [{:.3}, {:.3}]", cmp.min, cmp.max);

    if let Some(path) = std::env::args().nth(1) {
        write_map_csv(&a, path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
