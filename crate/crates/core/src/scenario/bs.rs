//! UAV flying base station sharing spectrum with D2D pairs.
//!
//! The UAV hovers over the area midpoint and serves one ground user. D2D
//! pairs are dropped by a Poisson point process and reuse the band, so
//! the UAV interferes with every D2D receiver and every D2D transmitter
//! interferes with the UAV user. Link powers and the UAV height are tuned
//! to maximize the sum spectral efficiency while the UAV user keeps its
//! SINR above `sinr_threshold`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::channel::{self, ChannelParams};
use crate::error::{invalid, Error, Result};
use crate::geometry::{AreaSpec, Point3};
use crate::optimize::{block_coordinate_max, maximize_line, Block, DEFAULT_LINE_POINTS};
use crate::rng;

/// Ground-to-ground distances are floored at the 1 m reference distance.
const MIN_GROUND_DISTANCE: f64 = 1.0;
/// Relative slack on the SINR constraint to absorb rounding.
const SINR_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BsConfig {
    pub area: AreaSpec,
    /// D2D transmitter density, pairs per m².
    pub d2d_density: f64,
    pub d2d_max_distance: f64,
    /// Linear SINR target of the UAV user.
    pub sinr_threshold: f64,
    pub uav_power_max: f64,
    pub d2d_power_max: f64,
    pub altitude_min: f64,
    pub altitude_max: f64,
    pub height_levels: usize,
    pub channel: ChannelParams,
    pub trials: usize,
    pub seed: u64,
    /// Sweep cap of the per-height power solve.
    pub power_sweeps: usize,
}

impl Default for BsConfig {
    fn default() -> Self {
        Self {
            area: AreaSpec {
                width: 1000.0,
                height: 1000.0,
            },
            d2d_density: 1e-5,
            d2d_max_distance: 30.0,
            sinr_threshold: channel::db_to_linear(5.0),
            uav_power_max: 5.0,
            d2d_power_max: 0.1,
            altitude_min: 50.0,
            altitude_max: 1000.0,
            height_levels: 64,
            channel: ChannelParams::default(),
            trials: 200,
            seed: 1,
            power_sweeps: 30,
        }
    }
}

impl BsConfig {
    pub fn validate(&self) -> Result<()> {
        AreaSpec::new(self.area.width, self.area.height)?;
        self.channel.validate()?;
        if !(self.d2d_density >= 0.0 && self.d2d_density.is_finite()) {
            return Err(invalid("d2d_density", "must be non-negative"));
        }
        if !(self.d2d_max_distance > MIN_GROUND_DISTANCE) {
            return Err(invalid("d2d_max_distance", "must exceed 1 m"));
        }
        if !(self.sinr_threshold > 0.0) {
            return Err(invalid("sinr_threshold", "must be positive"));
        }
        if !(self.uav_power_max > 0.0 && self.d2d_power_max > 0.0) {
            return Err(invalid("power_max", "caps must be positive"));
        }
        if !(self.altitude_min > 0.0 && self.altitude_min <= self.altitude_max) {
            return Err(invalid("altitude", "need 0 < altitude_min <= altitude_max"));
        }
        if self.height_levels < 1 {
            return Err(invalid("height_levels", "need at least one height"));
        }
        if self.power_sweeps < 1 {
            return Err(invalid("power_sweeps", "need at least one sweep"));
        }
        Ok(())
    }

    /// Height lattice, `height_levels` evenly spaced points.
    pub fn heights(&self) -> Vec<f64> {
        let n = self.height_levels;
        if n == 1 {
            return vec![self.altitude_min];
        }
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.altitude_max
                } else {
                    self.altitude_min
                        + (self.altitude_max - self.altitude_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D2dPair {
    pub tx: Point3,
    pub rx: Point3,
}

/// One network drop with its realized ground-to-ground gains.
#[derive(Clone, Debug, PartialEq)]
pub struct BsInstance {
    /// Ground point under the UAV.
    pub uav_xy: Point3,
    pub user: Point3,
    pub pairs: Vec<D2dPair>,
    /// `pair_gain[j][k]`: gain from D2D transmitter `j` to D2D receiver `k`.
    pub pair_gain: Vec<Vec<f64>>,
    /// `user_gain[j]`: gain from D2D transmitter `j` to the UAV user.
    pub user_gain: Vec<f64>,
}

/// Small-scale fade of the ground link from transmitter `tx` to receiver
/// `rx` (index `pairs.len()` is the UAV user). Keyed by the link so that
/// drops sharing a seed share fades.
fn link_fade(seed: u64, tx: usize, rx: usize) -> f64 {
    let key = rng::derive(rng::derive(seed, FADE_STREAM ^ tx as u64), rx as u64);
    channel::rayleigh_fade(&mut rng::seeded(key))
}

const FADE_STREAM: u64 = 0xfade_0000_0000_0000;
const USER_SLOT: usize = u32::MAX as usize;

fn ground_gain(a: &Point3, b: &Point3, ch: &ChannelParams, fade: f64) -> f64 {
    let d = a.horizontal_distance(b).max(MIN_GROUND_DISTANCE);
    ch.d2d_mean_gain(d) * fade
}

fn draw_receiver<R: Rng + ?Sized>(tx: &Point3, cfg: &BsConfig, rng: &mut R) -> Point3 {
    // uniform in the disk of radius D, restricted to the area and to the
    // reference distance
    loop {
        let r = cfg.d2d_max_distance * rng.random::<f64>().sqrt();
        let t = std::f64::consts::TAU * rng.random::<f64>();
        let rx = Point3::ground(tx.x + r * t.cos(), tx.y + r * t.sin());
        if r >= MIN_GROUND_DISTANCE && cfg.area.contains(&rx) {
            return rx;
        }
    }
}

fn draw_pair<R: Rng + ?Sized>(cfg: &BsConfig, rng: &mut R) -> D2dPair {
    let tx = cfg.area.uniform_point(rng);
    D2dPair {
        tx,
        rx: draw_receiver(&tx, cfg, rng),
    }
}

fn fill_gains(user: Point3, pairs: Vec<D2dPair>, cfg: &BsConfig, seed: u64) -> BsInstance {
    let ch = &cfg.channel;
    let pair_gain = pairs
        .iter()
        .enumerate()
        .map(|(j, a)| {
            pairs
                .iter()
                .enumerate()
                .map(|(k, b)| ground_gain(&a.tx, &b.rx, ch, link_fade(seed, j, k)))
                .collect()
        })
        .collect();
    let user_gain = pairs
        .iter()
        .enumerate()
        .map(|(j, a)| ground_gain(&a.tx, &user, ch, link_fade(seed, j, USER_SLOT)))
        .collect();
    BsInstance {
        uav_xy: cfg.area.center(),
        user,
        pairs,
        pair_gain,
        user_gain,
    }
}

/// Draws the UAV user, the D2D pairs and all ground-to-ground fades.
///
/// Pairs are the arrivals of a unit-rate Poisson clock up to
/// `density * area`, so for a fixed seed the drop at a lower density is
/// a prefix of the drop at a higher one.
pub fn draw_instance(cfg: &BsConfig, seed: u64) -> Result<BsInstance> {
    cfg.validate()?;
    let mut rng = rng::seeded(seed);
    let user = cfg.area.uniform_point(&mut rng);
    let horizon = cfg.d2d_density * cfg.area.surface();
    let mut pairs = Vec::new();
    let mut clock: f64 = Exp1.sample(&mut rng);
    while clock <= horizon {
        pairs.push(draw_pair(cfg, &mut rng));
        clock += Distribution::<f64>::sample(&Exp1, &mut rng);
    }
    Ok(fill_gains(user, pairs, cfg, seed))
}

/// Same as [`draw_instance`] but with exactly `pairs` D2D pairs.
pub fn draw_instance_with_pairs(cfg: &BsConfig, pairs: usize, seed: u64) -> Result<BsInstance> {
    cfg.validate()?;
    let mut rng = rng::seeded(seed);
    let user = cfg.area.uniform_point(&mut rng);
    let pairs = (0..pairs).map(|_| draw_pair(cfg, &mut rng)).collect();
    Ok(fill_gains(user, pairs, cfg, seed))
}

/// Link gains at one UAV height. Link 0 is the UAV link, link `k >= 1` is
/// D2D pair `k - 1`. `cross[j][i]` is the gain from transmitter `j` toward
/// receiver `i`.
struct GainTable {
    direct: Vec<f64>,
    cross: Vec<Vec<f64>>,
    noise: f64,
}

impl GainTable {
    fn new(inst: &BsInstance, height: f64, ch: &ChannelParams) -> Self {
        let n = inst.pairs.len() + 1;
        let air = |p: &Point3| ch.los_gain_sq(height * height + inst.uav_xy.horizontal_distance(p).powi(2));
        let mut direct = vec![0.0; n];
        let mut cross = vec![vec![0.0; n]; n];
        direct[0] = air(&inst.user);
        for (k, pair) in inst.pairs.iter().enumerate() {
            direct[k + 1] = inst.pair_gain[k][k];
            cross[0][k + 1] = air(&pair.rx);
            cross[k + 1][0] = inst.user_gain[k];
            for j in 0..inst.pairs.len() {
                if j != k {
                    cross[j + 1][k + 1] = inst.pair_gain[j][k];
                }
            }
        }
        Self {
            direct,
            cross,
            noise: ch.noise_power,
        }
    }

    fn links(&self) -> usize {
        self.direct.len()
    }

    fn interference(&self, powers: &[f64]) -> Vec<f64> {
        let n = self.links();
        let mut interference = vec![0.0; n];
        for (j, p) in powers.iter().enumerate() {
            for (i, acc) in interference.iter_mut().enumerate() {
                if i != j {
                    *acc += p * self.cross[j][i];
                }
            }
        }
        interference
    }

    fn sinrs(&self, powers: &[f64]) -> Vec<f64> {
        self.interference(powers)
            .iter()
            .enumerate()
            .map(|(i, interference)| powers[i] * self.direct[i] / (self.noise + interference))
            .collect()
    }

    fn sum_rate(&self, powers: &[f64]) -> f64 {
        self.sinrs(powers).into_iter().map(channel::log2_1p).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BsEvaluation {
    /// Sum spectral efficiency, bits/s/Hz.
    pub throughput: f64,
    /// Whether the UAV user meets its SINR target.
    pub feasible: bool,
    pub uav_user_sinr: f64,
    pub d2d_sinr: Vec<f64>,
}

/// Sum spectral efficiency at `height` with per-link `powers` (UAV first,
/// then each D2D pair).
pub fn sum_throughput(
    inst: &BsInstance,
    height: f64,
    powers: &[f64],
    cfg: &BsConfig,
) -> Result<BsEvaluation> {
    if powers.len() != inst.pairs.len() + 1 {
        return Err(invalid(
            "powers",
            format!("expected {} powers, got {}", inst.pairs.len() + 1, powers.len()),
        ));
    }
    if !(height > 0.0) {
        return Err(invalid("height", "must be positive"));
    }
    if !(0.0..=cfg.uav_power_max).contains(&powers[0]) {
        return Err(invalid("powers", format!("UAV power {} W outside cap", powers[0])));
    }
    if let Some(p) = powers[1..].iter().find(|p| !(0.0..=cfg.d2d_power_max).contains(*p)) {
        return Err(invalid("powers", format!("D2D power {p} W outside cap")));
    }
    let table = GainTable::new(inst, height, &cfg.channel);
    let sinrs = table.sinrs(powers);
    let throughput = sinrs.iter().copied().map(channel::log2_1p).sum();
    Ok(BsEvaluation {
        throughput,
        feasible: meets_target(sinrs[0], cfg.sinr_threshold),
        uav_user_sinr: sinrs[0],
        d2d_sinr: sinrs[1..].to_vec(),
    })
}

fn meets_target(sinr: f64, target: f64) -> bool {
    sinr >= target * (1.0 - SINR_SLACK)
}

/// Coordinate block that re-optimizes one link's power with the others
/// held fixed, keeping the UAV user feasible.
struct LinkPowerBlock<'a> {
    table: &'a GainTable,
    link: usize,
    cap: f64,
    target: f64,
}

impl LinkPowerBlock<'_> {
    /// Sum rate as a function of this link's power, plus the admissible
    /// interval. Evaluations are O(links).
    fn line(&self, powers: &[f64]) -> (impl Fn(f64) -> f64 + Sync + '_, f64, f64) {
        let t = self.table;
        let k = self.link;
        let mut others = t.interference(powers);
        for (i, acc) in others.iter_mut().enumerate() {
            if i != k {
                *acc -= powers[k] * t.cross[k][i];
            }
        }
        let (lo, hi) = if k == 0 {
            let need = self.target * (t.noise + others[0]) / t.direct[0] * (1.0 + 1e-12);
            (need, self.cap)
        } else {
            let room = powers[0] * t.direct[0] / self.target - t.noise - others[0];
            let limit = if t.cross[k][0] > 0.0 { room / t.cross[k][0] } else { f64::INFINITY };
            (0.0, self.cap.min(limit.max(0.0)))
        };
        let fixed: Vec<f64> = powers.to_vec();
        let f = move |x: f64| {
            let mut total = channel::log2_1p(x * t.direct[k] / (t.noise + others[k]));
            for i in 0..fixed.len() {
                if i != k {
                    let sinr = fixed[i] * t.direct[i] / (t.noise + others[i] + x * t.cross[k][i]);
                    total += channel::log2_1p(sinr);
                }
            }
            total
        };
        (f, lo, hi)
    }
}

impl Block<Vec<f64>> for LinkPowerBlock<'_> {
    fn improve(&self, powers: &mut Vec<f64>, _: &(dyn Fn(&Vec<f64>) -> f64 + Sync)) -> Result<()> {
        let (f, lo, hi) = self.line(powers);
        if lo > hi {
            // no admissible power; leave the state untouched
            return Ok(());
        }
        let current = f(powers[self.link]);
        let tol = 1e-9 * (hi - lo).max(1e-15);
        let (x, v) = maximize_line(lo, hi, DEFAULT_LINE_POINTS, tol, &f)?;
        let incumbent_ok = (lo..=hi).contains(&powers[self.link]);
        if v > current || !incumbent_ok {
            powers[self.link] = x;
        }
        Ok(())
    }
}

/// Best feasible power vector at one height, or `None` when the UAV user
/// cannot meet its target even with every D2D link silent.
pub fn optimize_powers(inst: &BsInstance, height: f64, cfg: &BsConfig) -> Result<Option<(Vec<f64>, f64)>> {
    let table = GainTable::new(inst, height, &cfg.channel);
    let n = table.links();
    let blocks: Vec<LinkPowerBlock> = (0..n)
        .map(|link| LinkPowerBlock {
            table: &table,
            link,
            cap: if link == 0 { cfg.uav_power_max } else { cfg.d2d_power_max },
            target: cfg.sinr_threshold,
        })
        .collect();
    let refs: Vec<&dyn Block<Vec<f64>>> = blocks.iter().map(|b| b as &dyn Block<Vec<f64>>).collect();
    let objective = |p: &Vec<f64>| table.sum_rate(p);

    let mut quiet = vec![0.0; n];
    quiet[0] = cfg.uav_power_max;
    let mut loud = vec![cfg.d2d_power_max; n];
    loud[0] = cfg.uav_power_max;

    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in [quiet, loud] {
        if !meets_target(table.sinrs(&start)[0], cfg.sinr_threshold) {
            continue;
        }
        let run = block_coordinate_max(start, &objective, &refs, cfg.power_sweeps, 1e-9)?;
        let value = *run.trace.last().expect("trace holds the initial value");
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((run.state, value));
        }
    }
    Ok(best)
}

/// Independent power solutions along the height lattice.
fn height_curve(inst: &BsInstance, cfg: &BsConfig) -> Result<Vec<Option<(Vec<f64>, f64)>>> {
    cfg.heights().into_iter().map(|h| optimize_powers(inst, h, cfg)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BsSolution {
    pub height: f64,
    pub powers: Vec<f64>,
    pub throughput: f64,
}

/// Outer sweep over the height lattice with the per-height power solve.
pub fn optimize_bs(inst: &BsInstance, cfg: &BsConfig) -> Result<BsSolution> {
    cfg.validate()?;
    let mut best: Option<BsSolution> = None;
    for (height, solved) in cfg.heights().into_iter().zip(height_curve(inst, cfg)?) {
        if let Some((powers, throughput)) = solved {
            if best.as_ref().is_none_or(|b| throughput > b.throughput) {
                best = Some(BsSolution {
                    height,
                    powers,
                    throughput,
                });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "UAV user cannot reach SINR {} at any height in [{}, {}] m",
            cfg.sinr_threshold, cfg.altitude_min, cfg.altitude_max
        ))
    })
}

/// Mean optimized throughput at one height for one density.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightRow {
    pub lambda: f64,
    pub height: f64,
    /// Outage trials count as zero throughput.
    pub mean_throughput: f64,
    pub stderr: f64,
    pub outage_fraction: f64,
    pub trials: usize,
}

/// Optimized throughput of every height for every trial seed.
/// `None` marks an outage.
pub fn trial_curves(cfg: &BsConfig, seeds: &[u64]) -> Result<Vec<Vec<Option<f64>>>> {
    cfg.validate()?;
    seeds
        .par_iter()
        .map(|&seed| {
            let inst = draw_instance(cfg, seed)?;
            Ok(height_curve(&inst, cfg)?.into_iter().map(|o| o.map(|(_, v)| v)).collect())
        })
        .collect()
}

/// Aggregates per-trial curves into one row per height.
pub fn aggregate_heights(cfg: &BsConfig, curves: &[Vec<Option<f64>>]) -> Vec<HeightRow> {
    let trials = curves.len();
    cfg.heights()
        .into_iter()
        .enumerate()
        .map(|(i, height)| {
            let values: Vec<f64> = curves.iter().map(|c| c[i].unwrap_or(0.0)).collect();
            let outages = curves.iter().filter(|c| c[i].is_none()).count();
            let (mean, stderr) = mean_stderr(&values);
            HeightRow {
                lambda: cfg.d2d_density,
                height,
                mean_throughput: mean,
                stderr,
                outage_fraction: if trials == 0 { 0.0 } else { outages as f64 / trials as f64 },
                trials,
            }
        })
        .collect()
}

pub(crate) fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Seed of trial `t`. Shared across densities so that curves for
/// different densities see the same user placements.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    rng::derive(seed, trial as u64)
}

/// Height-throughput table for each density in `lambdas`, `cfg.trials`
/// trials each.
pub fn sweep_heights(cfg: &BsConfig, lambdas: &[f64]) -> Result<Vec<HeightRow>> {
    if cfg.trials < 1 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let seeds: Vec<u64> = (0..cfg.trials).map(|t| trial_seed(cfg.seed, t)).collect();
    sweep_heights_seeded(cfg, lambdas, &seeds)
}

/// As [`sweep_heights`] with explicit trial seeds, shared by every density.
pub fn sweep_heights_seeded(cfg: &BsConfig, lambdas: &[f64], seeds: &[u64]) -> Result<Vec<HeightRow>> {
    let mut rows = Vec::with_capacity(lambdas.len() * cfg.height_levels);
    for &lambda in lambdas {
        let c = BsConfig {
            d2d_density: lambda,
            ..cfg.clone()
        };
        rows.extend(aggregate_heights(&c, &trial_curves(&c, seeds)?));
    }
    Ok(rows)
}
