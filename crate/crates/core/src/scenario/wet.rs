//! Wireless energy transfer from a UAV flying over a grid of sensors.
//!
//! The UAV traverses a sigmoid or spiral path exactly once at fixed
//! altitude while radiating according to a power schedule; every node
//! harvests a fixed fraction of the received RF power.

use crate::channel::ChannelParams;
use crate::energy::{harvested_energy, HarvestParams, PowerSchedule};
use crate::error::{invalid, Error, Result};
use crate::harness::format_float;
use crate::geometry::{make_grid, path_length, slot_centered_trajectory, AreaSpec, NodeSet, Trajectory, TrajectoryKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    /// Constant at the cap.
    Fixed,
    /// Quadratic, `cap` at both ends and `cap/4` in the middle slot.
    Valley,
    /// Linear from `cap/4` up to `cap`.
    Ramp,
}

impl ScheduleKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fixed => "fixed",
            Self::Valley => "valley",
            Self::Ramp => "ramp",
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "valley" => Ok(Self::Valley),
            "ramp" => Ok(Self::Ramp),
            other => Err(invalid("schedule", format!("unknown kind `{other}`"))),
        }
    }
}

pub fn build_schedule(kind: ScheduleKind, slots: usize, cap: f64) -> Result<PowerSchedule> {
    if slots < 1 {
        return Err(invalid("slots", "need at least one slot"));
    }
    let floor = cap / 4.0;
    let powers = match kind {
        ScheduleKind::Fixed => vec![cap; slots],
        ScheduleKind::Valley if slots == 1 => vec![floor],
        ScheduleKind::Valley => {
            let mid = (slots - 1) as f64 / 2.0;
            (0..slots)
                .map(|n| {
                    let u = (n as f64 - mid) / mid;
                    (floor + (cap - floor) * u * u).min(cap)
                })
                .collect()
        }
        ScheduleKind::Ramp if slots == 1 => vec![cap],
        ScheduleKind::Ramp => {
            let last = (slots - 1) as f64;
            (0..slots)
                .map(|n| {
                    if n + 1 == slots {
                        cap
                    } else {
                        floor + (cap - floor) * n as f64 / last
                    }
                })
                .collect()
        }
    };
    PowerSchedule::new(powers, cap)
}

/// Upper bound on the slot count of one flight.
pub const MAX_SLOTS: f64 = 1e7;

#[derive(Clone, Debug, PartialEq)]
pub struct WetConfig {
    pub rows: usize,
    pub cols: usize,
    pub area: AreaSpec,
    pub altitude: f64,
    pub trajectory: TrajectoryKind,
    pub schedule: ScheduleKind,
    /// Nominal speed; the flight time is rounded up to whole slots and the
    /// speed lowered so the path ends exactly on a slot boundary.
    pub speed: f64,
    /// Flight time for hover runs, which have no path to complete.
    pub hover_duration: f64,
    pub slot_duration: f64,
    pub power_cap: f64,
    pub channel: ChannelParams,
    pub harvest: HarvestParams,
}

impl Default for WetConfig {
    fn default() -> Self {
        Self {
            rows: 20,
            cols: 20,
            area: AreaSpec {
                width: 1000.0,
                height: 1000.0,
            },
            altitude: 100.0,
            trajectory: TrajectoryKind::Sigmoid,
            schedule: ScheduleKind::Fixed,
            speed: 15.0,
            hover_duration: 100.0,
            slot_duration: 1.0,
            power_cap: 5.0,
            channel: ChannelParams::default(),
            harvest: HarvestParams::default(),
        }
    }
}

impl WetConfig {
    pub fn validate(&self) -> Result<()> {
        AreaSpec::new(self.area.width, self.area.height)?;
        if self.rows == 0 || self.cols == 0 {
            return Err(invalid("rows/cols", "grid needs at least one node"));
        }
        if !(self.altitude > 0.0 && self.altitude.is_finite()) {
            return Err(invalid("altitude", "must be positive"));
        }
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(invalid("speed", "must be positive"));
        }
        if !(self.slot_duration > 0.0 && self.slot_duration.is_finite()) {
            return Err(invalid("slot_duration", "must be positive"));
        }
        if !(self.hover_duration > 0.0 && self.hover_duration.is_finite()) {
            return Err(invalid("hover_duration", "must be positive"));
        }
        if !(self.power_cap >= 0.0 && self.power_cap.is_finite()) {
            return Err(invalid("power_cap", "must be non-negative"));
        }
        self.channel.validate()?;
        self.harvest.validate()
    }

    /// Slot count and effective speed of one full traversal.
    pub fn flight_plan(&self) -> Result<(usize, f64)> {
        self.validate()?;
        if self.trajectory == TrajectoryKind::Hover {
            let slots = (self.hover_duration / self.slot_duration).round().max(1.0);
            if slots > MAX_SLOTS {
                return Err(invalid("hover_duration", format!("needs {slots:e} slots, more than {MAX_SLOTS:e}")));
            }
            let slots = slots as usize;
            return Ok((slots, 0.0));
        }
        let length = path_length(self.trajectory, &self.area)?;
        let slots = (length / (self.speed * self.slot_duration) - 1e-9).ceil().max(1.0);
        if slots > MAX_SLOTS {
            return Err(invalid("speed", format!("path needs {slots:e} slots, more than {MAX_SLOTS:e}")));
        }
        let slots = slots as usize;
        Ok((slots, length / (slots as f64 * self.slot_duration)))
    }

    pub fn build_trajectory(&self) -> Result<Trajectory> {
        let (slots, speed) = self.flight_plan()?;
        let duration = slots as f64 * self.slot_duration;
        slot_centered_trajectory(
            self.trajectory,
            &self.area,
            self.altitude,
            speed.max(f64::MIN_POSITIVE),
            duration,
            self.slot_duration,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WetResult {
    pub rows: usize,
    pub cols: usize,
    pub nodes: NodeSet,
    pub trajectory: Trajectory,
    pub schedule: PowerSchedule,
    /// Joules per node, row-major.
    pub energies: Vec<f64>,
    /// `energies / max(energies)`, all zero if nothing was harvested.
    pub normalized: Vec<f64>,
}

impl WetResult {
    pub fn energy(&self, row: usize, col: usize) -> f64 {
        self.energies[row * self.cols + col]
    }

    pub fn normalized_at(&self, row: usize, col: usize) -> f64 {
        self.normalized[row * self.cols + col]
    }

    pub fn total_energy(&self) -> f64 {
        self.energies.iter().sum()
    }
}

pub fn run_wet(cfg: &WetConfig) -> Result<WetResult> {
    cfg.validate()?;
    let nodes = make_grid(&cfg.area, cfg.rows, cfg.cols)?;
    let trajectory = cfg.build_trajectory()?;
    let schedule = build_schedule(cfg.schedule, trajectory.slot_count(), cfg.power_cap)?;
    let energies = harvested_energy(&trajectory, &schedule, &nodes, &cfg.channel, &cfg.harvest)?;
    let peak = energies.iter().copied().fold(0.0, f64::max);
    let normalized = if peak > 0.0 {
        energies.iter().map(|e| e / peak).collect()
    } else {
        vec![0.0; energies.len()]
    };
    Ok(WetResult {
        rows: cfg.rows,
        cols: cfg.cols,
        nodes,
        trajectory,
        schedule,
        energies,
        normalized,
    })
}

/// Dense `rows x cols` CSV of node energies in Joules, row `i` first.
pub fn map_csv(result: &WetResult) -> String {
    let mut out = String::new();
    for i in 0..result.rows {
        let line: Vec<String> = (0..result.cols).map(|j| format_float(result.energy(i, j))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_map_csv(result: &WetResult, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, map_csv(result)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Largest absolute difference between two normalized maps.
pub fn map_distance(a: &WetResult, b: &WetResult) -> Result<f64> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::InvalidComparison("maps have different grid shapes".into()));
    }
    Ok(a.normalized
        .iter()
        .zip(&b.normalized)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Per-node ratio of the energy under schedule B to that under schedule A.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleComparison {
    pub rows: usize,
    pub cols: usize,
    /// `None` where node energy under A is zero.
    pub ratios: Vec<Option<f64>>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl ScheduleComparison {
    /// Mean ratio over the outer two thirds of columns and over the middle
    /// third.
    pub fn column_thirds(&self) -> (f64, f64) {
        let (lo, hi) = (self.cols / 3, self.cols - self.cols / 3);
        let (mut outer, mut middle) = ((0.0, 0usize), (0.0, 0usize));
        for (k, r) in self.ratios.iter().enumerate() {
            if let Some(r) = r {
                let c = k % self.cols;
                let acc = if (lo..hi).contains(&c) { &mut middle } else { &mut outer };
                acc.0 += r;
                acc.1 += 1;
            }
        }
        let mean = |(s, n): (f64, usize)| if n == 0 { f64::NAN } else { s / n as f64 };
        (mean(outer), mean(middle))
    }
}

pub fn compare_results(a: &WetResult, b: &WetResult) -> Result<ScheduleComparison> {
    if a.trajectory != b.trajectory {
        return Err(Error::InvalidComparison("runs follow different trajectories".into()));
    }
    if a.nodes != b.nodes {
        return Err(Error::InvalidComparison("runs use different node grids".into()));
    }
    let ratios: Vec<Option<f64>> = a
        .energies
        .iter()
        .zip(&b.energies)
        .map(|(ea, eb)| (*ea > 0.0).then(|| eb / ea))
        .collect();
    let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
    if defined.is_empty() {
        return Err(Error::InvalidComparison("no node harvests energy under schedule A".into()));
    }
    let min = defined.iter().copied().fold(f64::INFINITY, f64::min);
    let max = defined.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = defined.iter().sum::<f64>() / defined.len() as f64;
    Ok(ScheduleComparison {
        rows: a.rows,
        cols: a.cols,
        ratios,
        min,
        max,
        mean,
    })
}

/// Runs both configurations, which must share the trajectory, and
/// compares their per-node energy.
pub fn compare_schedules(a: &WetConfig, b: &WetConfig) -> Result<ScheduleComparison> {
    compare_results(&run_wet(a)?, &run_wet(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_schedule_is_flat() {
        let s = build_schedule(ScheduleKind::Fixed, 7, 2.5).unwrap();
        assert!(s.powers().iter().all(|&p| p == 2.5));
    }

    #[test]
    fn valley_schedule_shape() {
        let s = build_schedule(ScheduleKind::Valley, 101, 4.0).unwrap();
        let p = s.powers();
        assert_eq!((p[0], p[100], p[50]), (4.0, 4.0, 1.0));
        for n in 0..101 {
            assert_eq!(p[n], p[100 - n]);
        }
        let one = build_schedule(ScheduleKind::Valley, 1, 4.0).unwrap();
        assert_eq!(one.powers(), &[1.0]);
    }

    #[test]
    fn ramp_schedule_endpoints() {
        let s = build_schedule(ScheduleKind::Ramp, 2, 4.0).unwrap();
        assert_eq!(s.powers(), &[1.0, 4.0]);
        assert!(build_schedule(ScheduleKind::Ramp, 0, 4.0).is_err());
    }

    #[test]
    fn flight_plan_completes_path() {
        let cfg = WetConfig::default();
        let (slots, speed) = cfg.flight_plan().unwrap();
        let len = path_length(TrajectoryKind::Sigmoid, &cfg.area).unwrap();
        assert!(speed <= cfg.speed);
        assert!((slots as f64 * speed - len).abs() < 1e-9);
        let t = cfg.build_trajectory().unwrap();
        assert_eq!(t.slot_count(), slots);
    }

    #[test]
    fn normalized_peak_is_one() {
        let r = run_wet(&WetConfig {
            rows: 6,
            cols: 6,
            ..WetConfig::default()
        })
        .unwrap();
        let peak = r.normalized.iter().copied().fold(0.0, f64::max);
        assert_eq!(peak, 1.0);
        assert!(r.normalized.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn zero_cap_gives_zero_map() {
        let r = run_wet(&WetConfig {
            rows: 3,
            cols: 3,
            power_cap: 0.0,
            ..WetConfig::default()
        })
        .unwrap();
        assert!(r.energies.iter().all(|&e| e == 0.0));
        assert!(r.normalized.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn identical_and_doubled_schedules() {
        let a = WetConfig {
            rows: 5,
            cols: 5,
            ..WetConfig::default()
        };
        let same = compare_schedules(&a, &a).unwrap();
        assert!(same.ratios.iter().all(|r| *r == Some(1.0)));
        let b = WetConfig {
            power_cap: 10.0,
            ..a.clone()
        };
        let c = compare_schedules(&a, &b).unwrap();
        assert!(c.ratios.iter().all(|r| (r.unwrap() - 2.0).abs() < 1e-12));
    }

    #[test]
    fn different_paths_cannot_be_compared() {
        let a = WetConfig {
            rows: 4,
            cols: 4,
            ..WetConfig::default()
        };
        let b = WetConfig {
            trajectory: TrajectoryKind::Spiral,
            ..a.clone()
        };
        assert!(matches!(compare_schedules(&a, &b), Err(Error::InvalidComparison(_))));
    }
}
