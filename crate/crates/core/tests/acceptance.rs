//! End-to-end acceptance checks. Each test prints one PASS/FAIL line and
//! then asserts. Oracles here are written against the public data types
//! only and do not call the solvers they check.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uav_udn::channel::{rayleigh_gain, ChannelParams};
use uav_udn::energy::{propulsion_power, PropulsionParams};
use uav_udn::geometry::{Point3, TrajectoryKind};
use uav_udn::harness::{parse_spec, run_experiment_jobs};
use uav_udn::optimize::{best_response_power_game, nash_gap, GameSpec};
use uav_udn::scenario::bs::{draw_instance_with_pairs, optimize_bs, sweep_heights, BsConfig, BsInstance};
use uav_udn::scenario::caching::{compare_policies, run_cache, CacheConfig, MobilityConfig, Popularity};
use uav_udn::scenario::relay::{energy_efficiency, optimize_relay, static_baseline, RelayConfig};
use uav_udn::scenario::wet::{compare_schedules, map_distance, run_wet, ScheduleKind, WetConfig};

fn report(criterion: u32, ok: bool, started: Instant, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stdout().lock(),
        "criterion {criterion}: {verdict} ({:.1} s) {detail}",
        started.elapsed().as_secs_f64()
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_height_throughput_trends() {
    let started = Instant::now();
    let cfg = BsConfig {
        trials: 200,
        ..BsConfig::default()
    };
    let lambdas = [0.5e-5, 1e-5, 2e-5];
    let rows = sweep_heights(&cfg, &lambdas).unwrap();
    assert_eq!(rows.len(), lambdas.len() * cfg.height_levels);

    let mut ok = true;
    let mut detail = Vec::new();
    let mut peaks = Vec::new();
    for curve in rows.chunks(cfg.height_levels) {
        let (idx, best) = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.mean_throughput.total_cmp(&b.1.mean_throughput))
            .unwrap();
        let interior = idx > 0 && idx + 1 < curve.len();
        ok &= interior;
        detail.push(format!(
            "lambda={:.1e} argmax={:.1} m mean={:.3}+-{:.3}",
            best.lambda, best.height, best.mean_throughput, best.stderr
        ));
        peaks.push(best.clone());
    }
    for w in peaks.windows(2) {
        ok &= w[1].height <= w[0].height;
        let tol = 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        ok &= w[1].mean_throughput >= w[0].mean_throughput - tol;
    }
    report(1, ok, started, &detail.join("; "));
}

/// Independent sum rate: UAV link first, then the D2D pairs, with the
/// air gains recomputed from positions.
fn oracle_sum_rate(inst: &BsInstance, cfg: &BsConfig, height: f64, p: &[f64]) -> (f64, f64) {
    let ch = &cfg.channel;
    let air = |q: &Point3| {
        let dx = q.x - inst.uav_xy.x;
        let dy = q.y - inst.uav_xy.y;
        ch.beta0 / (dx * dx + dy * dy + height * height)
    };
    let pairs = inst.pairs.len();
    let mut user_interf = 0.0;
    for j in 0..pairs {
        user_interf += p[j + 1] * inst.user_gain[j];
    }
    let user_sinr = p[0] * air(&inst.user) / (ch.noise_power + user_interf);
    let mut total = (1.0 + user_sinr).log2();
    for k in 0..pairs {
        let mut interf = p[0] * air(&inst.pairs[k].rx);
        for j in 0..pairs {
            if j != k {
                interf += p[j + 1] * inst.pair_gain[j][k];
            }
        }
        let sinr = p[k + 1] * inst.pair_gain[k][k] / (ch.noise_power + interf);
        total += (1.0 + sinr).log2();
    }
    (total, user_sinr)
}

#[test]
fn criterion_2_bs_solver_against_exhaustive_lattice() {
    let started = Instant::now();
    let cfg = BsConfig::default();
    let levels = 16;
    let lattice = |cap: f64| -> Vec<f64> { (0..levels).map(|k| cap * k as f64 / (levels - 1) as f64).collect() };
    let uav = lattice(cfg.uav_power_max);
    let d2d = lattice(cfg.d2d_power_max);
    let heights: Vec<f64> = (0..64)
        .map(|i| cfg.altitude_min + (cfg.altitude_max - cfg.altitude_min) * i as f64 / 63.0)
        .collect();

    let mut ok = true;
    let mut worst = f64::INFINITY;
    for seed in 0..20u64 {
        let inst = draw_instance_with_pairs(&cfg, 2, 1000 + seed).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for &h in &heights {
            for &p0 in &uav {
                for &p1 in &d2d {
                    for &p2 in &d2d {
                        let (v, user) = oracle_sum_rate(&inst, &cfg, h, &[p0, p1, p2]);
                        if user >= cfg.sinr_threshold && v > oracle {
                            oracle = v;
                        }
                    }
                }
            }
        }
        let sol = optimize_bs(&inst, &cfg).unwrap();
        let (check, user) = oracle_sum_rate(&inst, &cfg, sol.height, &sol.powers);
        ok &= (check - sol.throughput).abs() <= 1e-9 * check.max(1.0);
        ok &= user >= cfg.sinr_threshold * (1.0 - 1e-6);
        ok &= sol.throughput >= 0.98 * oracle;
        worst = worst.min(sol.throughput / oracle);
    }
    report(2, ok, started, &format!("20 instances, worst solver/oracle ratio {worst:.4}"));
}

#[test]
fn criterion_3_relay_trends() {
    let started = Instant::now();
    let horizons = [100.0, 200.0, 400.0];
    let speeds = [20.0, 40.0, 60.0];
    let mut grid = vec![vec![0.0; speeds.len()]; horizons.len()];
    let mut ok = true;
    for (a, &t) in horizons.iter().enumerate() {
        for (b, &v) in speeds.iter().enumerate() {
            let cfg = RelayConfig {
                horizon: t,
                speed_max: v,
                ..RelayConfig::default()
            };
            let best = optimize_relay(&cfg).unwrap().throughput;
            let fixed = static_baseline(&cfg).unwrap().throughput;
            ok &= best >= fixed - 1e-9;
            grid[a][b] = best;
        }
    }
    for a in 0..horizons.len() {
        for b in 0..speeds.len() {
            if a + 1 < horizons.len() {
                ok &= grid[a + 1][b] >= grid[a][b] - 1e-6;
            }
            if b + 1 < speeds.len() {
                ok &= grid[a][b + 1] >= grid[a][b] - 1e-6;
            }
        }
    }
    let cells: Vec<String> = grid
        .iter()
        .zip(horizons)
        .map(|(row, t)| format!("T={t}: {}", row.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(" ")))
        .collect();
    report(3, ok, started, &cells.join("; "));
}

/// Largest deliverable average rate over every lattice plan, with the
/// relay forwarding from its buffer: the minimum over cut slots `k` of
/// data received before `k` plus data the relay could send after `k`.
fn relay_oracle(cfg: &RelayConfig) -> f64 {
    let n = cfg.slots;
    let m = cfg.position_levels;
    let step = cfg.separation / (m - 1) as f64;
    let reach = cfg.speed_max * cfg.horizon / n as f64;
    let snr = |horizontal: f64, p: f64| {
        let d2 = cfg.altitude * cfg.altitude + horizontal * horizontal;
        (1.0 + p * cfg.channel.beta0 / d2 / cfg.channel.noise_power).log2()
    };
    let q = cfg.power_levels;
    let levels = |cap: f64| -> Vec<f64> { (0..q).map(|k| cap * k as f64 / (q - 1) as f64).collect() };
    let (ps, pr) = (levels(cfg.source_power_max), levels(cfg.relay_power_max));

    let mut best = 0.0f64;
    let mut path = vec![0usize; n];
    let total_paths = m.pow(n as u32);
    for code in 0..total_paths {
        let mut c = code;
        for slot in path.iter_mut() {
            *slot = c % m;
            c /= m;
        }
        if path
            .windows(2)
            .any(|w| (w[1] as f64 - w[0] as f64).abs() * step > reach * (1.0 + 1e-12) + 1e-9)
        {
            continue;
        }
        let xs: Vec<f64> = path.iter().map(|&j| j as f64 * step).collect();
        let rsr: Vec<Vec<f64>> = xs.iter().map(|&x| ps.iter().map(|&p| snr(x, p)).collect()).collect();
        let rrd: Vec<Vec<f64>> = xs
            .iter()
            .map(|&x| pr.iter().map(|&p| snr(cfg.separation - x, p)).collect())
            .collect();
        let choices = (q * q).pow(n as u32);
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for pc in 0..choices {
            let mut c = pc;
            for s in 0..n {
                let k = c % (q * q);
                c /= q * q;
                a[s] = rsr[s][k / q];
                b[s] = rrd[s][k % q];
            }
            let mut cut = f64::INFINITY;
            for k in 0..n {
                let before: f64 = a[..k].iter().sum();
                let after: f64 = b[k + 1..].iter().sum();
                cut = cut.min(before + after);
            }
            best = best.max(cut);
        }
    }
    best / n as f64
}

#[test]
fn criterion_4_relay_solver_against_plan_enumeration() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let cfg = RelayConfig {
            separation: rng.random_range(400.0..3000.0),
            altitude: rng.random_range(50.0..200.0),
            horizon: rng.random_range(8.0..200.0),
            speed_max: rng.random_range(5.0..80.0),
            slots: 4,
            source_power_max: rng.random_range(0.5..10.0),
            relay_power_max: rng.random_range(0.5..10.0),
            position_levels: 5,
            power_levels: 4,
            ..RelayConfig::default()
        };
        let oracle = relay_oracle(&cfg);
        let got = optimize_relay(&cfg).unwrap().throughput;
        let gap = (got - oracle) / oracle.max(1e-12);
        if gap.abs() > worst.abs() {
            worst = gap;
        }
        ok &= gap.abs() <= 0.01;
    }
    report(4, ok, started, &format!("10 configs, worst signed gap (solver - oracle) / oracle {worst:.2e}"));
}

#[test]
fn criterion_5_efficiency_versus_speed() {
    let started = Instant::now();
    let speeds = [40.0, 60.0, 80.0, 100.0];
    let mut ee = Vec::new();
    let mut tput = Vec::new();
    for &v in &speeds {
        let cfg = RelayConfig {
            speed_max: v,
            ..RelayConfig::default()
        };
        let sol = optimize_relay(&cfg).unwrap();
        ee.push(energy_efficiency(&sol.plan, &cfg).unwrap());
        tput.push(sol.throughput);
    }
    let mut ok = ee.windows(2).all(|w| w[1] < w[0]);
    ok &= tput.windows(2).all(|w| w[1] >= w[0] - 1e-6);

    let prop = PropulsionParams::default();
    assert_eq!((prop.c1, prop.c2), (9.26e-4, 2250.0));
    let closed = (2250.0f64 / (3.0 * 9.26e-4)).powf(0.25);
    let step = 0.5;
    let grid_min = (1..=400)
        .map(|i| i as f64 * step)
        .min_by(|a, b| propulsion_power(*a, &prop).unwrap().total_cmp(&propulsion_power(*b, &prop).unwrap()))
        .unwrap();
    ok &= (grid_min - closed).abs() <= step;
    ok &= (prop.max_endurance_speed() - closed).abs() <= 1e-9;
    ok &= (closed - 30.0).abs() < 0.5;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    report(
        5,
        ok,
        started,
        &format!(
            "EE {} ; throughput {} ; V* {closed:.3}, grid minimum {grid_min}",
            fmt(&ee),
            fmt(&tput)
        ),
    );
}

#[test]
fn criterion_6_harvested_energy_maps() {
    let started = Instant::now();
    let sigmoid = WetConfig::default();
    assert_eq!((sigmoid.rows, sigmoid.cols), (20, 20));
    let spiral = WetConfig {
        trajectory: TrajectoryKind::Spiral,
        ..WetConfig::default()
    };
    let a = run_wet(&sigmoid).unwrap();
    let b = run_wet(&spiral).unwrap();
    let linf = map_distance(&a, &b).unwrap();
    let independent = a
        .normalized
        .iter()
        .zip(&b.normalized)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let mut ok = linf > 0.1 && (linf - independent).abs() < 1e-15;

    let mut scaling_err = 0.0f64;
    for schedule in [ScheduleKind::Fixed, ScheduleKind::Valley, ScheduleKind::Ramp] {
        let base = WetConfig {
            schedule,
            ..WetConfig::default()
        };
        let e1 = run_wet(&base).unwrap();
        for k in [0.5, 3.0, 7.25] {
            let scaled = run_wet(&WetConfig {
                power_cap: base.power_cap * k,
                ..base.clone()
            })
            .unwrap();
            for (x, y) in e1.energies.iter().zip(&scaled.energies) {
                scaling_err = scaling_err.max((y - k * x).abs() / (k * x).abs().max(f64::MIN_POSITIVE));
            }
        }
    }
    ok &= scaling_err <= 1e-12;

    let valley = WetConfig {
        schedule: ScheduleKind::Valley,
        ..WetConfig::default()
    };
    let cmp = compare_schedules(&sigmoid, &valley).unwrap();
    let (outer, middle) = cmp.column_thirds();
    ok &= middle < outer;
    report(
        6,
        ok,
        started,
        &format!(
            "L-inf {linf:.3}; scaling error {scaling_err:.1e}; valley/fixed outer {outer:.3} middle {middle:.3}"
        ),
    );
}

#[test]
fn criterion_7_caching_hits_and_uav_policy() {
    let started = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, popularity) in [("uniform", Popularity::Uniform), ("zipf", Popularity::Zipf(1.0))] {
        let cfg = CacheConfig {
            users: 1000,
            contents: 10,
            popularity,
            request_count: Some(10_000),
            ..CacheConfig::default()
        };
        let (_, summary) = run_cache(&cfg, 7).unwrap();
        let p = 1.0 / 10.0;
        let sigma = (p * (1.0 - p) / summary.requests as f64).sqrt();
        ok &= summary.requests == 10_000;
        ok &= (summary.self_hit - p).abs() <= 3.0 * sigma;
        detail.push(format!("{name} self-hit {:.4} (3 sigma {:.4})", summary.self_hit, 3.0 * sigma));
    }

    let clustered = CacheConfig {
        mobility: MobilityConfig::clustered(),
        ..CacheConfig::default()
    };
    let (mut tracking, mut fixed) = (0.0, 0.0);
    let seeds = 50;
    for seed in 0..seeds {
        let (t, s) = compare_policies(&clustered, seed).unwrap();
        tracking += t.mean_delay;
        fixed += s.mean_delay;
    }
    tracking /= seeds as f64;
    fixed /= seeds as f64;
    ok &= tracking <= fixed;
    detail.push(format!("tracking {tracking:.6} s vs static {fixed:.6} s"));
    report(7, ok, started, &detail.join("; "));
}

fn bundled_specs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs");
    let mut specs: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    specs.sort();
    specs
}

fn cli_run(spec: &Path, out: &Path, jobs: usize) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_uav-udn"))
        .arg("run")
        .arg(spec)
        .arg("--out")
        .arg(out)
        .arg("--jobs")
        .arg(jobs.to_string())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_8_deterministic_output() {
    let started = Instant::now();
    let specs = bundled_specs();
    assert!(specs.len() >= 4);
    let tmp = std::env::temp_dir().join(format!("uav-udn-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let mut ok = true;
    let mut names = Vec::new();
    for path in &specs {
        let stem = path.file_stem().unwrap().to_string_lossy().to_string();
        let spec = parse_spec(&std::fs::read_to_string(path).unwrap()).unwrap();
        let first = run_experiment_jobs(&spec, 1).unwrap().to_csv();
        let again = run_experiment_jobs(&spec, 1).unwrap().to_csv();
        let wide = run_experiment_jobs(&spec, 8).unwrap().to_csv();
        ok &= first == again && first == wide;

        let one = cli_run(path, &tmp.join(format!("{stem}-1.csv")), 1);
        let eight = cli_run(path, &tmp.join(format!("{stem}-8.csv")), 8);
        ok &= one == eight && one == first.as_bytes();
        names.push(stem);
    }
    let _ = std::fs::remove_dir_all(&tmp);
    report(8, ok, started, &format!("specs {}", names.join(", ")));
}

fn ks_exponential(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x).exp();
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_9_fading_and_equilibria() {
    let started = Instant::now();
    let params = ChannelParams::default();
    let tx = Point3::new(0.0, 0.0, 0.0);
    let rx = Point3::new(30.0, 0.0, 0.0);
    let mean = params.beta0 * 30f64.powf(-params.alpha_d2d);
    let fades: Vec<f64> = (0..100_000u64)
        .map(|s| rayleigh_gain(&tx, &rx, &params, s).unwrap() / mean)
        .collect();
    let ks = ks_exponential(fades);
    let mut ok = ks < 0.01;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut unconverged = 0;
    for _ in 0..50 {
        let direct: Vec<f64> = (0..3).map(|_| rng.random_range(0.5..1.5)).collect();
        let cross: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.random_range(0.0..0.3)).collect()).collect();
        let noise = rng.random_range(0.05..0.5);
        let price: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
        let caps: Vec<f64> = (0..3).map(|_| rng.random_range(0.5..2.0)).collect();
        let interference = |i: usize, p: &[f64]| -> f64 {
            noise + (0..3).filter(|&j| j != i).map(|j| p[j] * cross[j][i]).sum::<f64>()
        };
        let utility = |i: usize, p: &[f64]| (1.0 + p[i] * direct[i] / interference(i, p)).log2() - price[i] * p[i];
        let game = GameSpec::new(caps.clone(), utility).unwrap();
        let out = best_response_power_game(&game, 1000, 1e-9).unwrap();
        if !out.converged {
            unconverged += 1;
        }
        // closed-form best response of a priced log utility
        for i in 0..3 {
            let water = 1.0 / (price[i] * std::f64::consts::LN_2) - interference(i, &out.powers) / direct[i];
            let mut dev = out.powers.clone();
            dev[i] = water.clamp(0.0, caps[i]);
            worst = worst.max(utility(i, &dev) - utility(i, &out.powers));
        }
        worst = worst.max(nash_gap(&game, &out.powers, 257).into_iter().fold(0.0, f64::max));
    }
    ok &= worst <= 1e-6 && unconverged == 0;
    report(
        9,
        ok,
        started,
        &format!("Rayleigh KS {ks:.4}; 50 games, largest deviation gain {worst:.1e}, unconverged {unconverged}"),
    );
}
