//! Positions, ground-node placement and UAV trajectory generation.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{invalid, Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn is_valid(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.z >= 0.0
    }

    pub fn horizontal_distance(&self, other: &Point3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn with_altitude(self, z: f64) -> Self {
        Self { z, ..self }
    }
}

pub fn distance(p: &Point3, q: &Point3) -> f64 {
    let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Rectangular deployment area `[0, width] x [0, height]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaSpec {
    pub width: f64,
    pub height: f64,
}

impl AreaSpec {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid("width", format!("must be positive, got {width}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(invalid("height", format!("must be positive, got {height}")));
        }
        Ok(Self { width, height })
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn surface(&self) -> f64 {
        self.width * self.height
    }

    pub fn center(&self) -> Point3 {
        Point3::ground(self.width / 2.0, self.height / 2.0)
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn uniform_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point3 {
        Point3::ground(
            rng.random::<f64>() * self.width,
            rng.random::<f64>() * self.height,
        )
    }
}

/// Ground nodes (z = 0) inside an area.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NodeSet {
    pub positions: Vec<Point3>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point3> {
        self.positions.iter()
    }
}

/// Homogeneous Poisson point process with intensity `density` (nodes per m²).
pub fn sample_ppp(area: &AreaSpec, density: f64, seed: u64) -> Result<NodeSet> {
    let mut rng = rng::seeded(seed);
    sample_ppp_with(area, density, &mut rng)
}

pub(crate) fn sample_ppp_with<R: Rng + ?Sized>(
    area: &AreaSpec,
    density: f64,
    rng: &mut R,
) -> Result<NodeSet> {
    if !(density >= 0.0 && density.is_finite()) {
        return Err(invalid("density", format!("must be non-negative, got {density}")));
    }
    let mean = density * area.surface();
    if mean == 0.0 {
        return Ok(NodeSet::default());
    }
    let count = Poisson::new(mean)
        .map_err(|e| invalid("density", e.to_string()))?
        .sample(rng) as usize;
    let positions = (0..count).map(|_| area.uniform_point(rng)).collect();
    Ok(NodeSet { positions })
}

/// `rows x cols` nodes at the centers of an even partition of the area,
/// row-major (row index along y).
pub fn make_grid(area: &AreaSpec, rows: usize, cols: usize) -> Result<NodeSet> {
    if rows == 0 || cols == 0 {
        return Err(invalid("rows/cols", "grid needs at least one row and one column"));
    }
    let dx = area.width / cols as f64;
    let dy = area.height / rows as f64;
    let positions = (0..rows)
        .flat_map(|i| {
            (0..cols).map(move |j| Point3::ground((j as f64 + 0.5) * dx, (i as f64 + 0.5) * dy))
        })
        .collect();
    Ok(NodeSet { positions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrajectoryKind {
    /// West-to-east along the horizontal centerline.
    Straight,
    /// Logistic curve `y = height / (1 + exp(-k (x - width/2)))`, left to right.
    Sigmoid,
    /// Archimedean spiral from the area center outward, five turns.
    Spiral,
    /// Fixed point above the area center.
    Hover,
}

impl TrajectoryKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Straight => "straight",
            Self::Sigmoid => "sigmoid",
            Self::Spiral => "spiral",
            Self::Hover => "hover",
        }
    }
}

impl std::str::FromStr for TrajectoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "straight" => Ok(Self::Straight),
            "sigmoid" => Ok(Self::Sigmoid),
            "spiral" => Ok(Self::Spiral),
            "hover" => Ok(Self::Hover),
            other => Err(invalid("trajectory", format!("unknown kind `{other}`"))),
        }
    }
}

/// Logistic steepness of the sigmoid path, per meter.
pub const SIGMOID_STEEPNESS: f64 = 0.01;
pub const SPIRAL_TURNS: f64 = 5.0;
/// Gap kept between the outermost spiral turn and the area edge.
pub const SPIRAL_EDGE_MARGIN: f64 = 25.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub time: f64,
    pub position: Point3,
}

/// Time-slotted UAV path sampled at slot boundaries. A trajectory with
/// `n + 1` samples has `n` slots; slot `i` runs from sample `i` to `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
    slot_duration: f64,
    speed_cap: Option<f64>,
}

const SPEED_SLACK: f64 = 1e-9;

impl Trajectory {
    /// Builds a trajectory from boundary positions starting at `t = 0`.
    pub fn from_positions(
        positions: Vec<Point3>,
        slot_duration: f64,
        speed_cap: Option<f64>,
    ) -> Result<Self> {
        if !(slot_duration > 0.0 && slot_duration.is_finite()) {
            return Err(invalid("slot_duration", "must be positive"));
        }
        if positions.is_empty() {
            return Err(invalid("positions", "trajectory needs at least one sample"));
        }
        if let Some(p) = positions.iter().find(|p| !p.is_valid()) {
            return Err(invalid("positions", format!("invalid point {p:?}")));
        }
        if let Some(cap) = speed_cap {
            for (n, w) in positions.windows(2).enumerate() {
                let v = w[0].horizontal_distance(&w[1]) / slot_duration;
                if v > cap + SPEED_SLACK {
                    return Err(Error::InfeasibleTrajectory(format!(
                        "slot {n} needs {v} m/s, cap is {cap} m/s"
                    )));
                }
            }
        }
        let samples = positions
            .into_iter()
            .enumerate()
            .map(|(n, position)| TrajectorySample {
                time: n as f64 * slot_duration,
                position,
            })
            .collect();
        Ok(Self {
            samples,
            slot_duration,
            speed_cap,
        })
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = Point3> + '_ {
        self.samples.iter().map(|s| s.position)
    }

    pub fn slot_duration(&self) -> f64 {
        self.slot_duration
    }

    pub fn speed_cap(&self) -> Option<f64> {
        self.speed_cap
    }

    pub fn slot_count(&self) -> usize {
        self.samples.len().saturating_sub(1)
    }

    pub fn duration(&self) -> f64 {
        self.slot_count() as f64 * self.slot_duration
    }

    /// Horizontal speed over each slot.
    pub fn slot_speeds(&self) -> Vec<f64> {
        self.samples
            .windows(2)
            .map(|w| w[0].position.horizontal_distance(&w[1].position) / self.slot_duration)
            .collect()
    }

    /// Rigid horizontal translation.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|s| TrajectorySample {
                time: s.time,
                position: Point3::new(s.position.x + dx, s.position.y + dy, s.position.z),
            })
            .collect();
        Self {
            samples,
            slot_duration: self.slot_duration,
            speed_cap: self.speed_cap,
        }
    }
}

pub fn build_trajectory(
    kind: TrajectoryKind,
    area: &AreaSpec,
    altitude: f64,
    speed: f64,
    duration: f64,
    slot_duration: f64,
) -> Result<Trajectory> {
    sampled_trajectory(kind, area, altitude, speed, duration, slot_duration, 0.0)
}

/// Like [`build_trajectory`], but sample `n` is where the UAV is at the
/// middle of slot `n` (the last sample stays at the path end). Per-slot
/// sums over the left samples then follow the midpoint rule, which keeps
/// them symmetric under time reversal.
pub fn slot_centered_trajectory(
    kind: TrajectoryKind,
    area: &AreaSpec,
    altitude: f64,
    speed: f64,
    duration: f64,
    slot_duration: f64,
) -> Result<Trajectory> {
    sampled_trajectory(kind, area, altitude, speed, duration, slot_duration, 0.5)
}

fn sampled_trajectory(
    kind: TrajectoryKind,
    area: &AreaSpec,
    altitude: f64,
    speed: f64,
    duration: f64,
    slot_duration: f64,
    phase: f64,
) -> Result<Trajectory> {
    if !(altitude >= 0.0 && altitude.is_finite()) {
        return Err(invalid("altitude", "must be non-negative"));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(invalid("duration", "must be positive"));
    }
    if !(slot_duration > 0.0 && slot_duration.is_finite()) {
        return Err(invalid("slot_duration", "must be positive"));
    }
    if kind != TrajectoryKind::Hover && !(speed > 0.0 && speed.is_finite()) {
        return Err(invalid("speed", "must be positive"));
    }
    let ratio = duration / slot_duration;
    let slots = ratio.round();
    if slots < 1.0 || (ratio - slots).abs() > 1e-9 * ratio.max(1.0) {
        return Err(invalid(
            "slot_duration",
            format!("{slot_duration} s does not divide the {duration} s horizon"),
        ));
    }
    let slots = slots as usize;

    let curve = match kind {
        TrajectoryKind::Hover => {
            let positions = vec![area.center().with_altitude(altitude); slots + 1];
            return Trajectory::from_positions(positions, slot_duration, None);
        }
        TrajectoryKind::Straight => ArcLengthCurve::straight(area),
        TrajectoryKind::Sigmoid => ArcLengthCurve::sigmoid(area, SIGMOID_STEEPNESS),
        TrajectoryKind::Spiral => ArcLengthCurve::spiral(area, SPIRAL_TURNS, SPIRAL_EDGE_MARGIN)?,
    };
    let length = curve.length();
    if speed * duration < length * (1.0 - 1e-12) {
        return Err(Error::InfeasibleTrajectory(format!(
            "{} path is {length:.3} m long but {speed} m/s for {duration} s covers only {:.3} m",
            kind.name(),
            speed * duration
        )));
    }
    let positions = (0..=slots)
        .map(|n| {
            let t = if n == slots { n as f64 } else { n as f64 + phase };
            let s = (speed * t * slot_duration).min(length);
            let (x, y) = curve.point_at(s);
            Point3::new(x, y, altitude)
        })
        .collect();
    Trajectory::from_positions(positions, slot_duration, Some(speed))
}

/// Length of the path a `kind` trajectory traverses over `area`.
pub fn path_length(kind: TrajectoryKind, area: &AreaSpec) -> Result<f64> {
    Ok(match kind {
        TrajectoryKind::Hover => 0.0,
        TrajectoryKind::Straight => ArcLengthCurve::straight(area).length(),
        TrajectoryKind::Sigmoid => ArcLengthCurve::sigmoid(area, SIGMOID_STEEPNESS).length(),
        TrajectoryKind::Spiral => {
            ArcLengthCurve::spiral(area, SPIRAL_TURNS, SPIRAL_EDGE_MARGIN)?.length()
        }
    })
}

// 5-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];
const PANELS: usize = 2048;

type PlaneFn = Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>;
type SpeedFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Planar parametric curve with a tabulated arc length, used to place
/// samples at equal arc-length spacing.
struct ArcLengthCurve {
    point: PlaneFn,
    speed: SpeedFn,
    start: f64,
    panel_width: f64,
    cumulative: Vec<f64>,
}

impl ArcLengthCurve {
    fn new(start: f64, end: f64, point: PlaneFn, speed: SpeedFn) -> Self {
        let panel_width = (end - start) / PANELS as f64;
        let mut cumulative = Vec::with_capacity(PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..PANELS {
            let a = start + i as f64 * panel_width;
            acc += gauss_legendre(&speed, a, a + panel_width);
            cumulative.push(acc);
        }
        Self {
            point,
            speed,
            start,
            panel_width,
            cumulative,
        }
    }

    fn straight(area: &AreaSpec) -> Self {
        let y = area.height / 2.0;
        Self::new(0.0, area.width, Box::new(move |u| (u, y)), Box::new(|_| 1.0))
    }

    fn sigmoid(area: &AreaSpec, k: f64) -> Self {
        let (w, h) = (area.width, area.height);
        let y = move |x: f64| h / (1.0 + (-k * (x - w / 2.0)).exp());
        let slope = move |x: f64| {
            let yx = y(x);
            k * yx * (1.0 - yx / h)
        };
        Self::new(
            0.0,
            w,
            Box::new(move |x| (x, y(x))),
            Box::new(move |x| slope(x).hypot(1.0)),
        )
    }

    fn spiral(area: &AreaSpec, turns: f64, margin: f64) -> Result<Self> {
        let outer = area.width.min(area.height) / 2.0 - margin;
        if outer <= 0.0 {
            return Err(invalid("area", "too small for the spiral margin"));
        }
        let theta_end = 2.0 * std::f64::consts::PI * turns;
        let pitch = outer / theta_end;
        let c = area.center();
        Ok(Self::new(
            0.0,
            theta_end,
            Box::new(move |t| (c.x + pitch * t * t.cos(), c.y + pitch * t * t.sin())),
            Box::new(move |t| pitch * t.hypot(1.0)),
        ))
    }

    fn length(&self) -> f64 {
        self.cumulative[PANELS]
    }

    fn point_at(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, self.length());
        let panel = self
            .cumulative
            .partition_point(|&c| c <= s)
            .saturating_sub(1)
            .min(PANELS - 1);
        let a = self.start + panel as f64 * self.panel_width;
        let b = a + self.panel_width;
        let target = s - self.cumulative[panel];
        let panel_len = self.cumulative[panel + 1] - self.cumulative[panel];
        // Newton on the parameter, safeguarded by bisection.
        let (mut lo, mut hi) = (a, b);
        let mut u = if panel_len > 0.0 {
            a + self.panel_width * target / panel_len
        } else {
            a
        };
        for _ in 0..60 {
            let g = gauss_legendre(&self.speed, a, u) - target;
            if g.abs() <= 1e-13 * self.length().max(1.0) {
                break;
            }
            if g > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let d = (self.speed)(u);
            let next = u - g / d;
            u = if d > 0.0 && next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        (self.point)(u)
    }
}

fn gauss_legendre(f: &(dyn Fn(f64) -> f64 + Send + Sync), a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}
