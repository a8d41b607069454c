//! Full-duplex UAV relay between a source at `x = 0` and a destination at
//! `x = L`, flying at fixed altitude on the line joining them.
//!
//! The relay decodes and buffers: data received in slot `n` can be sent
//! from slot `n + 1` on. Throughput is maximized jointly over the
//! trajectory (position lattice, dynamic program) and the per-slot powers.

use crate::channel::{self, ChannelParams};
use crate::energy::{flight_energy, PropulsionParams};
use crate::error::{invalid, Error, Result};
use crate::geometry::{Point3, Trajectory};
use crate::optimize::{block_coordinate_max, Block};

/// Absolute slack of the causality check, bits/s/Hz.
const CAUSALITY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RelayConfig {
    pub separation: f64,
    pub altitude: f64,
    /// Horizon `T`, seconds.
    pub horizon: f64,
    /// Speed cap `V`, m/s. Zero pins the relay to its (free) start point.
    pub speed_max: f64,
    pub slots: usize,
    pub source_power_max: f64,
    pub relay_power_max: f64,
    pub channel: ChannelParams,
    pub propulsion: PropulsionParams,
    /// Points of the position lattice over `[0, L]`.
    pub position_levels: usize,
    /// Points of the per-slot power lattice over `[0, cap]`.
    pub power_levels: usize,
    pub max_sweeps: usize,
}

impl Default for RelayConfig {
    fn default() -> Self {
        Self {
            separation: 2000.0,
            altitude: 100.0,
            horizon: 200.0,
            speed_max: 30.0,
            slots: 100,
            source_power_max: 5.0,
            relay_power_max: 5.0,
            channel: ChannelParams::default(),
            propulsion: PropulsionParams::default(),
            position_levels: 101,
            power_levels: 16,
            max_sweeps: 10,
        }
    }
}

impl RelayConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive, got {v}")))
            }
        };
        positive("separation", self.separation)?;
        positive("altitude", self.altitude)?;
        positive("horizon", self.horizon)?;
        positive("source_power_max", self.source_power_max)?;
        positive("relay_power_max", self.relay_power_max)?;
        if !(self.speed_max >= 0.0 && self.speed_max.is_finite()) {
            return Err(invalid("speed_max", "must be non-negative"));
        }
        if self.slots < 2 {
            return Err(invalid("slots", "need at least two slots"));
        }
        if self.position_levels < 2 || self.power_levels < 2 {
            return Err(invalid("levels", "lattices need at least two points"));
        }
        if self.max_sweeps < 1 {
            return Err(invalid("max_sweeps", "need at least one sweep"));
        }
        self.channel.validate()?;
        self.propulsion.validate()
    }

    pub fn slot_duration(&self) -> f64 {
        self.horizon / self.slots as f64
    }

    pub fn midpoint(&self) -> f64 {
        self.separation / 2.0
    }

    fn lattice_step(&self) -> f64 {
        self.separation / (self.position_levels - 1) as f64
    }

    fn lattice_point(&self, j: usize) -> f64 {
        if j + 1 == self.position_levels {
            self.separation
        } else {
            j as f64 * self.lattice_step()
        }
    }

    /// Lattice moves allowed per slot.
    fn max_moves(&self) -> usize {
        (self.speed_max * self.slot_duration() / self.lattice_step() + 1e-9).floor() as usize
    }

    fn power_lattice(&self, cap: f64) -> Vec<f64> {
        let m = self.power_levels;
        (0..m)
            .map(|k| if k + 1 == m { cap } else { cap * k as f64 / (m - 1) as f64 })
            .collect()
    }

    fn snr_per_watt(&self, horizontal: f64) -> f64 {
        let d2 = self.altitude * self.altitude + horizontal * horizontal;
        self.channel.los_gain_sq(d2) / self.channel.noise_power
    }

    fn source_rate(&self, x: f64, p: f64) -> f64 {
        channel::log2_1p(p * self.snr_per_watt(x))
    }

    fn relay_rate(&self, x: f64, p: f64) -> f64 {
        channel::log2_1p(p * self.snr_per_watt(self.separation - x))
    }
}

/// Per-slot relay position and powers.
#[derive(Clone, Debug, PartialEq)]
pub struct RelayPlan {
    pub positions: Vec<f64>,
    pub source_powers: Vec<f64>,
    pub relay_powers: Vec<f64>,
}

impl RelayPlan {
    pub fn slots(&self) -> usize {
        self.positions.len()
    }

    /// Relay path at the configured altitude, sampled at slot boundaries.
    /// The position after the last slot continues the final leg.
    pub fn trajectory(&self, cfg: &RelayConfig) -> Result<Trajectory> {
        let n = self.positions.len();
        let last = self.positions[n - 1];
        let leg = if n >= 2 { last - self.positions[n - 2] } else { 0.0 };
        let end = (last + leg).clamp(0.0, cfg.separation);
        let points = self
            .positions
            .iter()
            .chain(std::iter::once(&end))
            .map(|&x| Point3::new(x, 0.0, cfg.altitude))
            .collect();
        Trajectory::from_positions(points, cfg.slot_duration(), None)
    }

    fn check(&self, cfg: &RelayConfig) -> Result<()> {
        let n = self.positions.len();
        if n != cfg.slots || self.source_powers.len() != n || self.relay_powers.len() != n {
            return Err(invalid(
                "plan",
                format!("plan must have {} slots in every field", cfg.slots),
            ));
        }
        if let Some(x) = self.positions.iter().find(|x| !(0.0..=cfg.separation).contains(*x)) {
            return Err(invalid("plan", format!("position {x} m outside [0, L]")));
        }
        let step = cfg.speed_max * cfg.slot_duration();
        for (i, w) in self.positions.windows(2).enumerate() {
            if (w[1] - w[0]).abs() > step * (1.0 + 1e-12) + 1e-9 {
                return Err(Error::InfeasibleTrajectory(format!(
                    "slot {} moves {} m, cap is {step} m",
                    i + 2,
                    (w[1] - w[0]).abs()
                )));
            }
        }
        if let Some(p) = self.source_powers.iter().find(|p| !(0.0..=cfg.source_power_max).contains(*p)) {
            return Err(invalid("source_powers", format!("{p} W outside cap")));
        }
        if let Some(p) = self.relay_powers.iter().find(|p| !(0.0..=cfg.relay_power_max).contains(*p)) {
            return Err(invalid("relay_powers", format!("{p} W outside cap")));
        }
        Ok(())
    }
}

/// Per-slot `(R_sr, R_rd)` in bits/s/Hz.
pub fn relay_rates(plan: &RelayPlan, cfg: &RelayConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    plan.check(cfg)?;
    Ok(plan
        .positions
        .iter()
        .zip(plan.source_powers.iter().zip(&plan.relay_powers))
        .map(|(&x, (&ps, &pr))| (cfg.source_rate(x, ps), cfg.relay_rate(x, pr)))
        .collect())
}

/// Average delivered rate `(1/N) sum R_rd[n]`. Fails on the first slot
/// where the relay would forward data it has not yet received.
pub fn throughput(plan: &RelayPlan, cfg: &RelayConfig) -> Result<f64> {
    let rates = relay_rates(plan, cfg)?;
    let (mut received, mut sent) = (0.0, 0.0);
    for (n, (rsr, rrd)) in rates.iter().enumerate() {
        sent += rrd;
        if sent > received + CAUSALITY_SLACK {
            return Err(Error::InfeasiblePlan { slot: n + 1 });
        }
        received += rsr;
    }
    Ok(sent / rates.len() as f64)
}

/// Forwarded rate per slot when the relay sends `min(R_rd, backlog)`.
fn project(rates: impl Iterator<Item = (f64, f64)>) -> Vec<f64> {
    let mut backlog = 0.0;
    rates
        .map(|(rsr, rrd)| {
            let sent = rrd.min(backlog);
            backlog += rsr - sent;
            sent
        })
        .collect()
}

/// Optimizer state: lattice index per slot and power caps per slot. The
/// relay power is the cap before projection onto the buffer.
#[derive(Clone, Debug)]
struct RelayState {
    cells: Vec<usize>,
    source: Vec<f64>,
    relay: Vec<f64>,
}

impl RelayState {
    fn rates<'a>(&'a self, cfg: &'a RelayConfig) -> impl Iterator<Item = (f64, f64)> + 'a {
        self.cells.iter().enumerate().map(move |(n, &j)| {
            let x = cfg.lattice_point(j);
            (cfg.source_rate(x, self.source[n]), cfg.relay_rate(x, self.relay[n]))
        })
    }

    fn value(&self, cfg: &RelayConfig) -> f64 {
        project(self.rates(cfg)).iter().sum::<f64>() / self.cells.len() as f64
    }

    fn into_plan(self, cfg: &RelayConfig) -> RelayPlan {
        let sent = project(self.rates(cfg));
        let positions: Vec<f64> = self.cells.iter().map(|&j| cfg.lattice_point(j)).collect();
        let relay_powers = positions
            .iter()
            .zip(&sent)
            .zip(&self.relay)
            .map(|((&x, &r), &cap)| {
                // smallest power that still carries the forwarded rate
                let p = (r * std::f64::consts::LN_2).exp_m1() / cfg.snr_per_watt(cfg.separation - x);
                p.min(cap)
            })
            .collect();
        RelayPlan {
            positions,
            source_powers: self.source,
            relay_powers,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Label {
    delivered: f64,
    received: f64,
    moved: f64,
    parent: u32,
}

/// Exact trajectory update on the lattice: forward DP over
/// (slot, lattice point) keeping every Pareto-optimal pair of
/// (delivered, received) totals. Free start and end points.
struct TrajectoryBlock<'a> {
    cfg: &'a RelayConfig,
}

impl TrajectoryBlock<'_> {
    fn solve(&self, state: &RelayState) -> Vec<usize> {
        let cfg = self.cfg;
        let levels = cfg.position_levels;
        let slots = state.cells.len();
        let reach = cfg.max_moves();
        let xs: Vec<f64> = (0..levels).map(|j| cfg.lattice_point(j)).collect();
        let window = |j: usize| (j.saturating_sub(reach), (j + reach).min(levels - 1));

        let best_in = |vals: &[f64], j: usize| {
            let (lo, hi) = window(j);
            vals[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max)
        };
        let src: Vec<Vec<f64>> = (0..slots)
            .map(|n| xs.iter().map(|&x| cfg.source_rate(x, state.source[n])).collect())
            .collect();
        let dst: Vec<Vec<f64>> = (0..slots)
            .map(|n| xs.iter().map(|&x| cfg.relay_rate(x, state.relay[n])).collect())
            .collect();

        // fwd[n][j]: most data forwardable after slot n on a path from j.
        let mut fwd = vec![vec![0.0; levels]; slots];
        for n in (0..slots - 1).rev() {
            let out: Vec<f64> = (0..levels).map(|j| dst[n + 1][j] + fwd[n + 1][j]).collect();
            for j in 0..levels {
                fwd[n][j] = best_in(&out, j);
            }
        }
        // With backlog B after slot n, the rest of the run forwards
        //   min(sum of later R_rd, min over cuts c > n of
        //       B + sum_{n<i<c} R_sr + sum_{i>c} R_rd),
        // so cut[n][j] = min_c max_path(...) bounds the cut terms.
        let mut cut = vec![vec![f64::INFINITY; levels]; slots];
        let mut v = vec![0.0; levels];
        let mut scratch = vec![0.0; levels];
        for c in 1..slots {
            for j in 0..levels {
                v[j] = best_in(&fwd[c], j);
            }
            let mut n = c - 1;
            loop {
                for j in 0..levels {
                    cut[n][j] = cut[n][j].min(v[j]);
                }
                if n == 0 {
                    break;
                }
                for j in 0..levels {
                    scratch[j] = src[n][j] + v[j];
                }
                for j in 0..levels {
                    v[j] = best_in(&scratch, j);
                }
                n -= 1;
            }
        }
        // Weighted bounds: the run never delivers more than the data it can
        // receive in slots 0..N-2 nor more than it can send in slots 1..N-1,
        // hence never more than any mix of the two. scal[w][n][j] is the best
        // mixed future after slot n from j; its argmax paths are also good
        // feasible plans, which seed the pruning floor.
        let weights: Vec<f64> = (0..=MIX_STEPS).map(|k| k as f64 / MIX_STEPS as f64).collect();
        let mut scal = vec![vec![vec![0.0; levels]; slots]; weights.len()];
        let mut floor = state.value(cfg) * slots as f64;
        let mut gains = vec![0.0; levels];
        let mut path = vec![0; slots];
        for (w, &mix) in weights.iter().enumerate() {
            let gain = |m: usize, j: usize| {
                let a = if m + 1 < slots { src[m][j] } else { 0.0 };
                let b = if m > 0 { dst[m][j] } else { 0.0 };
                mix * a + (1.0 - mix) * b
            };
            let table = &mut scal[w];
            for n in (0..slots - 1).rev() {
                for j in 0..levels {
                    gains[j] = gain(n + 1, j) + table[n + 1][j];
                }
                for j in 0..levels {
                    table[n][j] = best_in(&gains, j);
                }
            }
            let argmax = |vals: &mut dyn Iterator<Item = (usize, f64)>| {
                vals.fold((0, f64::NEG_INFINITY), |b, (j, v)| if v > b.1 { (j, v) } else { b }).0
            };
            path[0] = argmax(&mut (0..levels).map(|j| (j, gain(0, j) + table[0][j])));
            for n in 1..slots {
                let (lo, hi) = window(path[n - 1]);
                path[n] = argmax(&mut (lo..=hi).map(|j| (j, gain(n, j) + table[n][j])));
            }
            let candidate = RelayState {
                cells: path.clone(),
                ..state.clone()
            };
            floor = floor.max(candidate.value(cfg) * slots as f64);
        }

        // wait at p, then dash toward the destination from slot k on
        for p in 0..levels {
            for k in 0..slots {
                let mut j = p;
                for (n, cell) in path.iter_mut().enumerate() {
                    if n > k {
                        j = (j + reach).min(levels - 1);
                    }
                    *cell = j;
                }
                let candidate = RelayState {
                    cells: path.clone(),
                    ..state.clone()
                };
                floor = floor.max(candidate.value(cfg) * slots as f64);
            }
        }

        // labels that cannot reach the floor are dropped
        let slack = 1e-9 * floor.abs().max(1.0);
        let useful = |l: &Label, n: usize, j: usize, floor: f64| {
            let backlog = l.received - l.delivered;
            let mut bound = (backlog + cut[n][j]).min(fwd[n][j]);
            for (w, &mix) in weights.iter().enumerate() {
                bound = bound.min(mix * backlog + scal[w][n][j]);
            }
            l.delivered + bound >= floor - slack
        };

        // layers[n][j] holds the front at lattice point j after slot n
        let mut layers: Vec<Vec<Vec<Label>>> = Vec::with_capacity(slots);
        let first = (0..levels)
            .map(|j| {
                let l = Label {
                    delivered: 0.0,
                    received: src[0][j].min(fwd[0][j]),
                    moved: 0.0,
                    parent: u32::MAX,
                };
                if useful(&l, 0, j, floor) { vec![l] } else { Vec::new() }
            })
            .collect();
        layers.push(first);
        let mut candidates: Vec<(Label, usize)> = Vec::new();
        for n in 1..slots {
            let prev = &layers[n - 1];
            let mut layer = Vec::with_capacity(levels);
            for j in 0..levels {
                let (rsr, rrd) = (src[n][j], dst[n][j]);
                candidates.clear();
                let (lo, hi) = window(j);
                for (i, front) in prev.iter().enumerate().take(hi + 1).skip(lo) {
                    let hop = (xs[j] - xs[i]).abs();
                    for (k, l) in front.iter().enumerate() {
                        let sent = rrd.min(l.received - l.delivered);
                        let delivered = l.delivered + sent;
                        let next = Label {
                            delivered,
                            // backlog beyond what can still be forwarded is worthless
                            received: (l.received + rsr).min(delivered + fwd[n][j]),
                            moved: l.moved + hop,
                            parent: 0,
                        };
                        floor = floor.max(delivered);
                        if useful(&next, n, j, floor) {
                            candidates.push((next, pack(i, k)));
                        }
                    }
                }
                layer.push(pareto(&mut candidates));
            }
            layers.push(layer);
        }

        let mut best: Option<(usize, usize)> = None;
        for (j, front) in layers[slots - 1].iter().enumerate() {
            for (k, l) in front.iter().enumerate() {
                let better = match best {
                    None => true,
                    Some((bj, bk)) => {
                        let b = layers[slots - 1][bj][bk];
                        l.delivered > b.delivered + 1e-9
                            || (l.delivered >= b.delivered - 1e-9 && l.moved < b.moved)
                    }
                };
                if better {
                    best = Some((j, k));
                }
            }
        }
        let Some((mut j, mut k)) = best else { return state.cells.clone() };
        let mut cells = vec![0; slots];
        for n in (0..slots).rev() {
            cells[n] = j;
            let parent = layers[n][j][k].parent;
            if n > 0 {
                (j, k) = unpack(parent);
            }
        }
        cells
    }
}

const PACK_SHIFT: u32 = 20;
/// Resolution of the weights mixing the receive and send bounds.
const MIX_STEPS: usize = 16;

fn pack(cell: usize, index: usize) -> usize {
    (cell << PACK_SHIFT) | index
}

fn unpack(parent: u32) -> (usize, usize) {
    let p = parent as usize;
    (p >> PACK_SHIFT, p & ((1 << PACK_SHIFT) - 1))
}

/// Keeps the labels not dominated in (delivered, received); among equal
/// pairs the one that moved least survives.
fn pareto(candidates: &mut [(Label, usize)]) -> Vec<Label> {
    candidates.sort_by(|(a, _), (b, _)| {
        b.delivered
            .total_cmp(&a.delivered)
            .then(b.received.total_cmp(&a.received))
            .then(a.moved.total_cmp(&b.moved))
    });
    let mut front: Vec<Label> = Vec::new();
    let mut top = f64::NEG_INFINITY;
    for (label, parent) in candidates.iter() {
        if label.received > top + 1e-12 * label.received.abs().max(1.0) {
            top = label.received;
            front.push(Label {
                parent: *parent as u32,
                ..*label
            });
        }
    }
    front
}

impl Block<RelayState> for TrajectoryBlock<'_> {
    fn improve(
        &self,
        state: &mut RelayState,
        objective: &(dyn Fn(&RelayState) -> f64 + Sync),
    ) -> Result<()> {
        let candidate = RelayState {
            cells: self.solve(state),
            ..state.clone()
        };
        if objective(&candidate) > objective(state) {
            *state = candidate;
        }
        Ok(())
    }
}

/// Per-slot grid over (source, relay) power pairs, slots in order, with
/// the forwarded rate projected onto the buffer.
struct PowerBlock<'a> {
    cfg: &'a RelayConfig,
}

impl Block<RelayState> for PowerBlock<'_> {
    fn improve(
        &self,
        state: &mut RelayState,
        objective: &(dyn Fn(&RelayState) -> f64 + Sync),
    ) -> Result<()> {
        let source = self.cfg.power_lattice(self.cfg.source_power_max);
        let relay = self.cfg.power_lattice(self.cfg.relay_power_max);
        let mut best = objective(state);
        for n in 0..state.cells.len() {
            let keep = (state.source[n], state.relay[n]);
            let mut choice = keep;
            for &ps in &source {
                for &pr in &relay {
                    state.source[n] = ps;
                    state.relay[n] = pr;
                    let v = objective(state);
                    if v > best {
                        best = v;
                        choice = (ps, pr);
                    }
                }
            }
            (state.source[n], state.relay[n]) = choice;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RelaySolution {
    pub plan: RelayPlan,
    pub throughput: f64,
    /// Objective after initialization and after every sweep.
    pub trace: Vec<f64>,
}

fn midpoint_state(cfg: &RelayConfig) -> RelayState {
    let mid = (cfg.position_levels - 1) / 2;
    RelayState {
        cells: vec![mid; cfg.slots],
        source: vec![cfg.source_power_max; cfg.slots],
        relay: vec![cfg.relay_power_max; cfg.slots],
    }
}

fn solve(cfg: &RelayConfig, blocks: &[&dyn Block<RelayState>]) -> Result<RelaySolution> {
    cfg.validate()?;
    if cfg.position_levels % 2 == 0 {
        return Err(invalid("position_levels", "must be odd so the midpoint is a lattice point"));
    }
    if cfg.position_levels >= 1 << PACK_SHIFT {
        return Err(invalid("position_levels", "lattice too large"));
    }
    let objective = |s: &RelayState| s.value(cfg);
    let run = block_coordinate_max(midpoint_state(cfg), &objective, blocks, cfg.max_sweeps, 1e-12)?;
    let plan = run.state.into_plan(cfg);
    let value = throughput(&plan, cfg)?;
    Ok(RelaySolution {
        plan,
        throughput: value,
        trace: run.trace,
    })
}

/// Joint trajectory and power optimization, started from the static
/// midpoint plan.
pub fn optimize_relay(cfg: &RelayConfig) -> Result<RelaySolution> {
    let traj = TrajectoryBlock { cfg };
    let power = PowerBlock { cfg };
    solve(cfg, &[&traj, &power])
}

/// Relay parked at `L/2` with powers from the same power update.
pub fn static_baseline(cfg: &RelayConfig) -> Result<RelaySolution> {
    let power = PowerBlock { cfg };
    solve(cfg, &[&power])
}

/// Delivered bits per Hz per Joule of propulsion energy.
pub fn energy_efficiency(plan: &RelayPlan, cfg: &RelayConfig) -> Result<f64> {
    let value = throughput(plan, cfg)?;
    let energy = flight_energy(&plan.trajectory(cfg)?, &cfg.propulsion)?;
    Ok(cfg.horizon * value * cfg.channel.bandwidth / energy)
}

/// Propulsion energy of the plan's path, Joules.
pub fn plan_energy(plan: &RelayPlan, cfg: &RelayConfig) -> Result<f64> {
    flight_energy(&plan.trajectory(cfg)?, &cfg.propulsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(cfg: &RelayConfig, x: f64, ps: f64, pr: f64) -> RelayPlan {
        RelayPlan {
            positions: vec![x; cfg.slots],
            source_powers: vec![ps; cfg.slots],
            relay_powers: vec![pr; cfg.slots],
        }
    }

    fn small(slots: usize) -> RelayConfig {
        RelayConfig {
            slots,
            horizon: 2.0 * slots as f64,
            ..RelayConfig::default()
        }
    }

    #[test]
    fn midpoint_rates_are_symmetric() {
        let cfg = small(4);
        for (a, b) in relay_rates(&plan(&cfg, 1000.0, 3.0, 3.0), &cfg).unwrap() {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rate_above_source() {
        let cfg = small(4);
        let r = relay_rates(&plan(&cfg, 0.0, 5.0, 0.0), &cfg).unwrap();
        let want = (1.0f64 + 5e4).log2();
        assert!((r[0].0 - want).abs() < 1e-12);
        assert!((want - 15.61).abs() < 0.01);
        assert_eq!(r[0].1, 0.0);
    }

    #[test]
    fn zero_power_gives_zero_rates() {
        let cfg = small(4);
        assert!(relay_rates(&plan(&cfg, 700.0, 0.0, 0.0), &cfg)
            .unwrap()
            .iter()
            .all(|&(a, b)| a == 0.0 && b == 0.0));
        assert_eq!(throughput(&plan(&cfg, 700.0, 5.0, 0.0), &cfg).unwrap(), 0.0);
    }

    #[test]
    fn sending_from_empty_buffer_fails_at_slot_one() {
        let cfg = small(4);
        match throughput(&plan(&cfg, 1000.0, 5.0, 5.0), &cfg) {
            Err(Error::InfeasiblePlan { slot }) => assert_eq!(slot, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hand_built_four_slot_plan() {
        let cfg = small(4);
        let mut p = plan(&cfg, 1000.0, 5.0, 0.0);
        p.relay_powers = vec![0.0, 5.0, 5.0, 5.0];
        let r = (1.0 + 5.0 * 1e-6 / 1e-14 / (100.0f64 * 100.0 + 1000.0 * 1000.0)).log2();
        let got = throughput(&p, &cfg).unwrap();
        assert!((got - 3.0 * r / 4.0).abs() < 1e-12, "{got}");
    }

    #[test]
    fn static_baseline_stays_at_midpoint() {
        let cfg = small(20);
        let s = static_baseline(&cfg).unwrap();
        assert!(s.plan.positions.iter().all(|&x| x == 1000.0));
        let r = relay_rates(&plan(&cfg, 1000.0, 5.0, 5.0), &cfg).unwrap()[0].0;
        assert!((s.throughput - r * 19.0 / 20.0).abs() < 1e-9);
        let faster = RelayConfig {
            speed_max: 90.0,
            position_levels: 41,
            ..cfg.clone()
        };
        assert_eq!(static_baseline(&faster).unwrap().throughput, s.throughput);
    }

    #[test]
    fn optimized_beats_static_and_is_causal() {
        let cfg = RelayConfig {
            speed_max: 40.0,
            ..small(50)
        };
        let opt = optimize_relay(&cfg).unwrap();
        let base = static_baseline(&cfg).unwrap();
        assert!(opt.throughput >= base.throughput - 1e-9);
        assert!(opt.throughput > base.throughput);
        assert!(opt.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        // throughput() re-checks causality on the returned plan
        throughput(&opt.plan, &cfg).unwrap();
    }

    #[test]
    fn zero_speed_never_moves() {
        let cfg = RelayConfig {
            speed_max: 0.0,
            ..small(10)
        };
        let opt = optimize_relay(&cfg).unwrap();
        let x0 = opt.plan.positions[0];
        assert!(opt.plan.positions.iter().all(|&x| x == x0));
        assert!(opt.throughput >= static_baseline(&cfg).unwrap().throughput - 1e-12);
    }

    #[test]
    fn efficiency_scales_with_propulsion() {
        let cfg = RelayConfig {
            speed_max: 30.0,
            position_levels: 201,
            ..small(10)
        };
        let mut p = plan(&cfg, 0.0, 5.0, 1.0);
        p.relay_powers[0] = 0.0;
        p.positions = (0..10).map(|n| 600.0 + 60.0 * n as f64).collect();
        let e = plan_energy(&p, &cfg).unwrap();
        assert!((e - 100.002 * 20.0).abs() < 1e-6, "{e}");
        let ee = energy_efficiency(&p, &cfg).unwrap();
        assert!(ee > 0.0);
        let mut doubled = cfg.clone();
        doubled.propulsion.c1 *= 2.0;
        doubled.propulsion.c2 *= 2.0;
        assert!((energy_efficiency(&p, &doubled).unwrap() - ee / 2.0).abs() < 1e-15);
    }
}
