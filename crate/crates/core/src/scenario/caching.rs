//! Two-phase caching with self, D2D, UAV and base-station delivery tiers.
//!
//! Placement: every user stores one content drawn uniformly from `1..=N`.
//! Delivery: each request is resolved by the first tier able to serve it.
//! The UAV caches the `K` most popular contents and either tracks the user
//! centroid or stays above the area center.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::channel::{rayleigh_fade, ChannelParams};
use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, AreaSpec, NodeSet, Point3};
use crate::rng::{self, SimRng};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Popularity {
    Uniform,
    /// Request probability of content `i` proportional to `i^-s`.
    Zipf(f64),
}

impl Popularity {
    /// Request probabilities of contents `1..=n`.
    pub fn weights(&self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = match *self {
            Self::Uniform => vec![1.0; n],
            Self::Zipf(s) => (1..=n).map(|i| (i as f64).powf(-s)).collect(),
        };
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MobilityMode {
    /// Independent random waypoint over the whole area.
    RandomWaypoint,
    /// Waypoints drawn around a blob center that itself moves as a random
    /// waypoint at `drift_speed`.
    Cluster { sigma: f64, drift_speed: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobilityConfig {
    pub mode: MobilityMode,
    pub speed_min: f64,
    pub speed_max: f64,
    /// Seconds spent at each waypoint.
    pub pause: f64,
    /// Simulation time step in seconds.
    pub step: f64,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        Self {
            mode: MobilityMode::RandomWaypoint,
            speed_min: 1.0,
            speed_max: 2.0,
            pause: 0.0,
            step: 1.0,
        }
    }
}

impl MobilityConfig {
    pub fn clustered() -> Self {
        Self {
            mode: MobilityMode::Cluster {
                sigma: 60.0,
                drift_speed: 1.0,
            },
            ..Self::default()
        }
    }
}

/// Base latency of each tier in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TierDelays {
    pub self_cache: f64,
    pub d2d: f64,
    pub uav: f64,
    pub bs: f64,
}

impl Default for TierDelays {
    fn default() -> Self {
        Self {
            self_cache: 0.0,
            d2d: 0.010,
            uav: 0.020,
            bs: 0.200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    SelfCache,
    D2d,
    Uav,
    Bs,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::SelfCache, Tier::D2d, Tier::Uav, Tier::Bs];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SelfCache => "self",
            Self::D2d => "d2d",
            Self::Uav => "uav",
            Self::Bs => "bs",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UavPolicy {
    Tracking,
    Static,
}

impl UavPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Tracking => "tracking",
            Self::Static => "static",
        }
    }
}

impl std::str::FromStr for UavPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tracking" => Ok(Self::Tracking),
            "static" => Ok(Self::Static),
            other => Err(invalid("policy", format!("unknown policy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CacheConfig {
    pub users: usize,
    pub contents: usize,
    pub popularity: Popularity,
    pub d2d_radius: f64,
    pub area: AreaSpec,
    pub uav_altitude: f64,
    pub uav_speed_max: f64,
    pub policy: UavPolicy,
    pub mobility: MobilityConfig,
    /// Simulated seconds.
    pub duration: f64,
    /// Requests per user per second; the total count is Poisson.
    pub request_rate: f64,
    /// Exact request count, overriding `request_rate`.
    pub request_count: Option<usize>,
    pub delays: TierDelays,
    pub payload_bits: f64,
    /// Number of most popular contents held by the UAV.
    pub uav_cache_size: usize,
    pub d2d_power: f64,
    pub uav_power: f64,
    pub channel: ChannelParams,
}

impl Default for CacheConfig {
    fn default() -> Self {
        Self {
            users: 1000,
            contents: 10,
            popularity: Popularity::Zipf(1.0),
            d2d_radius: 50.0,
            area: AreaSpec {
                width: 1000.0,
                height: 1000.0,
            },
            uav_altitude: 100.0,
            uav_speed_max: 10.0,
            policy: UavPolicy::Tracking,
            mobility: MobilityConfig::default(),
            duration: 600.0,
            request_rate: 0.01,
            request_count: None,
            delays: TierDelays::default(),
            payload_bits: 1e7,
            uav_cache_size: 1,
            d2d_power: 0.1,
            uav_power: 5.0,
            channel: ChannelParams {
                bandwidth: 20e6,
                ..ChannelParams::default()
            },
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be non-negative, got {v}")))
    }
}

impl CacheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(invalid("users", "need at least one user"));
        }
        if self.contents == 0 {
            return Err(invalid("contents", "need at least one content"));
        }
        if u32::try_from(self.contents).is_err() {
            return Err(invalid("contents", "too many contents"));
        }
        if let Popularity::Zipf(s) = self.popularity {
            non_negative("zipf_exponent", s)?;
        }
        positive("d2d_radius", self.d2d_radius)?;
        AreaSpec::new(self.area.width, self.area.height)?;
        positive("uav_altitude", self.uav_altitude)?;
        non_negative("uav_speed_max", self.uav_speed_max)?;
        let m = &self.mobility;
        positive("speed_min", m.speed_min)?;
        if !(m.speed_max >= m.speed_min && m.speed_max.is_finite()) {
            return Err(invalid("speed_max", "must be at least speed_min"));
        }
        non_negative("pause", m.pause)?;
        positive("step", m.step)?;
        if let MobilityMode::Cluster { sigma, drift_speed } = m.mode {
            positive("sigma", sigma)?;
            non_negative("drift_speed", drift_speed)?;
        }
        positive("duration", self.duration)?;
        non_negative("request_rate", self.request_rate)?;
        let d = &self.delays;
        for (name, v) in [
            ("delay_self", d.self_cache),
            ("delay_d2d", d.d2d),
            ("delay_uav", d.uav),
            ("delay_bs", d.bs),
        ] {
            non_negative(name, v)?;
        }
        positive("payload_bits", self.payload_bits)?;
        non_negative("d2d_power", self.d2d_power)?;
        non_negative("uav_power", self.uav_power)?;
        self.channel.validate()
    }

    /// Number of mobility steps; the trace has one more sample.
    pub fn steps(&self) -> usize {
        (self.duration / self.mobility.step).ceil() as usize
    }
}

/// One resolved request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Request {
    pub time: f64,
    pub user: usize,
    /// 1-based content id.
    pub content: u32,
    pub tier: Tier,
    pub delay: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CacheState {
    /// 1-based content id held by each user.
    pub cached: Vec<u32>,
    /// `user_trace[step][user]`, ground positions.
    pub user_trace: Vec<Vec<Point3>>,
    /// UAV position at each step.
    pub uav_trace: Vec<Point3>,
    pub requests: Vec<Request>,
}

const PLACEMENT: u64 = 1;
const MOBILITY: u64 = 2;
const REQUESTS: u64 = 3;
const FADES: u64 = 4;

/// i.i.d. uniform content per user.
pub fn placement_phase(cfg: &CacheConfig, seed: u64) -> Result<Vec<u32>> {
    cfg.validate()?;
    let mut rng = rng::seeded(rng::derive(seed, PLACEMENT));
    let n = cfg.contents as u32;
    Ok((0..cfg.users).map(|_| rng.random_range(1..=n)).collect())
}

fn clamp_to(area: &AreaSpec, p: Point3) -> Point3 {
    Point3::ground(p.x.clamp(0.0, area.width), p.y.clamp(0.0, area.height))
}

/// Moves `from` toward `to` by at most `reach`.
fn step_toward(from: Point3, to: Point3, reach: f64) -> (Point3, bool) {
    let d = from.horizontal_distance(&to);
    if d <= reach {
        (Point3::new(to.x, to.y, from.z), true)
    } else {
        let f = reach / d;
        (Point3::new(from.x + f * (to.x - from.x), from.y + f * (to.y - from.y), from.z), false)
    }
}

struct Walker {
    pos: Point3,
    target: Point3,
    speed: f64,
    pause_left: f64,
}

impl Walker {
    fn advance(&mut self, dt: f64) -> bool {
        let mut dt = dt;
        if self.pause_left > 0.0 {
            let used = self.pause_left.min(dt);
            self.pause_left -= used;
            dt -= used;
        }
        if dt <= 0.0 {
            return false;
        }
        let (next, arrived) = step_toward(self.pos, self.target, self.speed * dt);
        self.pos = next;
        arrived
    }
}

/// Per-step user positions, `steps() + 1` samples.
pub fn simulate_mobility(cfg: &CacheConfig, seed: u64) -> Result<Vec<Vec<Point3>>> {
    cfg.validate()?;
    let m = &cfg.mobility;
    let area = &cfg.area;
    let mut rng = rng::seeded(rng::derive(seed, MOBILITY));
    let speed = |rng: &mut SimRng| {
        if m.speed_max > m.speed_min {
            rng.random_range(m.speed_min..=m.speed_max)
        } else {
            m.speed_min
        }
    };

    let (mut blob, blob_offset) = match m.mode {
        MobilityMode::RandomWaypoint => (None, None),
        MobilityMode::Cluster { sigma, drift_speed } => {
            let pos = area.uniform_point(&mut rng);
            let target = area.uniform_point(&mut rng);
            let walker = Walker {
                pos,
                target,
                speed: drift_speed,
                pause_left: 0.0,
            };
            let normal = Normal::new(0.0, sigma).map_err(|e| invalid("sigma", e.to_string()))?;
            (Some(walker), Some(normal))
        }
    };
    let draw_point = |rng: &mut SimRng, blob: &Option<Walker>| match (blob, &blob_offset) {
        (Some(b), Some(normal)) => {
            let p = Point3::ground(b.pos.x + normal.sample(rng), b.pos.y + normal.sample(rng));
            clamp_to(area, p)
        }
        _ => area.uniform_point(rng),
    };

    let mut users: Vec<Walker> = (0..cfg.users)
        .map(|_| {
            let pos = draw_point(&mut rng, &blob);
            let target = draw_point(&mut rng, &blob);
            Walker {
                pos,
                target,
                speed: speed(&mut rng),
                pause_left: 0.0,
            }
        })
        .collect();

    let steps = cfg.steps();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(users.iter().map(|u| u.pos).collect());
    for _ in 0..steps {
        if let Some(b) = blob.as_mut() {
            if b.advance(m.step) {
                b.target = area.uniform_point(&mut rng);
            }
        }
        for u in users.iter_mut() {
            if u.advance(m.step) {
                u.pause_left = m.pause;
                u.target = draw_point(&mut rng, &blob);
                u.speed = speed(&mut rng);
            }
        }
        trace.push(users.iter().map(|u| u.pos).collect());
    }
    Ok(trace)
}

/// Next UAV position: one step of at most `uav_speed_max * step` toward
/// the centroid of `users`, at the configured altitude.
pub fn uav_tracking_policy(cfg: &CacheConfig, uav: &Point3, users: &[Point3]) -> Result<Point3> {
    if users.is_empty() {
        return Err(invalid("users", "tracking needs at least one user"));
    }
    let n = users.len() as f64;
    let cx = users.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = users.iter().map(|p| p.y).sum::<f64>() / n;
    let goal = Point3::new(cx, cy, cfg.uav_altitude);
    let start = uav.with_altitude(cfg.uav_altitude);
    Ok(step_toward(start, goal, cfg.uav_speed_max * cfg.mobility.step).0)
}

/// UAV position at every step of a user trace. Both policies start above
/// the area center.
pub fn uav_trace(cfg: &CacheConfig, user_trace: &[Vec<Point3>]) -> Result<Vec<Point3>> {
    let home = cfg.area.center().with_altitude(cfg.uav_altitude);
    match cfg.policy {
        UavPolicy::Static => Ok(vec![home; user_trace.len()]),
        UavPolicy::Tracking => {
            let mut out = Vec::with_capacity(user_trace.len());
            let mut uav = home;
            out.push(uav);
            for users in &user_trace[..user_trace.len().saturating_sub(1)] {
                uav = uav_tracking_policy(cfg, &uav, users)?;
                out.push(uav);
            }
            Ok(out)
        }
    }
}

/// Placement, mobility and UAV trace; the request log is empty.
pub fn prepare(cfg: &CacheConfig, seed: u64) -> Result<CacheState> {
    let cached = placement_phase(cfg, seed)?;
    let user_trace = simulate_mobility(cfg, seed)?;
    let uav_trace = uav_trace(cfg, &user_trace)?;
    Ok(CacheState {
        cached,
        user_trace,
        uav_trace,
        requests: Vec::new(),
    })
}

fn link_rate(cfg: &CacheConfig, power: f64, gain: f64) -> f64 {
    cfg.channel.bandwidth * (power * gain / cfg.channel.noise_power).ln_1p() / std::f64::consts::LN_2
}

fn transfer_delay(cfg: &CacheConfig, base: f64, rate: f64) -> f64 {
    if rate > 0.0 {
        base + cfg.payload_bits / rate
    } else {
        f64::INFINITY
    }
}

/// Draws the requests and resolves each one, filling `state.requests`.
///
/// A D2D or UAV transfer whose realized delay would exceed the base-station
/// delay is treated as an outage and the request falls through.
pub fn delivery_phase(cfg: &CacheConfig, state: &mut CacheState, seed: u64) -> Result<()> {
    cfg.validate()?;
    if state.cached.len() != cfg.users || state.user_trace.is_empty() || state.uav_trace.len() != state.user_trace.len() {
        return Err(invalid("state", "does not match the configuration"));
    }
    let mut rng = rng::seeded(rng::derive(seed, REQUESTS));
    let count = match cfg.request_count {
        Some(n) => n,
        None => {
            let mean = cfg.request_rate * cfg.users as f64 * cfg.duration;
            if mean > 0.0 {
                let d = Poisson::new(mean).map_err(|e| invalid("request_rate", e.to_string()))?;
                d.sample(&mut rng) as usize
            } else {
                0
            }
        }
    };
    let popularity = WeightedIndex::new(cfg.popularity.weights(cfg.contents))
        .map_err(|e| invalid("popularity", e.to_string()))?;
    let mut draws: Vec<(f64, usize, u32)> = (0..count)
        .map(|_| {
            let t = rng.random::<f64>() * cfg.duration;
            let user = rng.random_range(0..cfg.users);
            let content = popularity.sample(&mut rng) as u32 + 1;
            (t, user, content)
        })
        .collect();
    draws.sort_by(|a, b| a.0.total_cmp(&b.0));

    let fade_seed = rng::derive(seed, FADES);
    let last = state.user_trace.len() - 1;
    let bs = cfg.delays.bs;
    state.requests = draws
        .into_iter()
        .enumerate()
        .map(|(idx, (time, user, content))| {
            let step = ((time / cfg.mobility.step).floor() as usize).min(last);
            let users = &state.user_trace[step];
            let me = users[user];
            let (tier, delay) = if state.cached[user] == content {
                (Tier::SelfCache, cfg.delays.self_cache)
            } else {
                let d2d = nearest_holder(&state.cached, users, user, content, cfg.d2d_radius).and_then(|d| {
                    let mut frng = rng::seeded(rng::derive(fade_seed, idx as u64));
                    let gain = cfg.channel.d2d_mean_gain(d.max(1.0)) * rayleigh_fade(&mut frng);
                    let delay = transfer_delay(cfg, cfg.delays.d2d, link_rate(cfg, cfg.d2d_power, gain));
                    (delay <= bs).then_some(delay)
                });
                let uav = || {
                    ((content as usize) <= cfg.uav_cache_size)
                        .then(|| {
                            let d = distance(&state.uav_trace[step], &me);
                            let gain = cfg.channel.los_gain_sq((d * d).max(1.0));
                            transfer_delay(cfg, cfg.delays.uav, link_rate(cfg, cfg.uav_power, gain))
                        })
                        .filter(|&delay| delay <= bs)
                };
                match d2d {
                    Some(delay) => (Tier::D2d, delay),
                    None => match uav() {
                        Some(delay) => (Tier::Uav, delay),
                        None => (Tier::Bs, bs),
                    },
                }
            };
            Request {
                time,
                user,
                content,
                tier,
                delay,
            }
        })
        .collect();
    Ok(())
}

/// Ground distance to the nearest other user holding `content`, if within
/// `radius`.
fn nearest_holder(cached: &[u32], users: &[Point3], me: usize, content: u32, radius: f64) -> Option<f64> {
    let here = users[me];
    cached
        .iter()
        .zip(users)
        .enumerate()
        .filter(|(k, (c, _))| *k != me && **c == content)
        .map(|(_, (_, p))| p.horizontal_distance(&here))
        .filter(|&d| d <= radius)
        .min_by(f64::total_cmp)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheSummary {
    pub requests: usize,
    pub self_hit: f64,
    pub d2d_hit: f64,
    pub uav_hit: f64,
    pub bs_hit: f64,
    pub mean_delay: f64,
    /// Mean UAV-to-user ground distance over all steps and users.
    pub mean_uav_distance: f64,
}

impl CacheSummary {
    pub fn from_state(state: &CacheState) -> Self {
        let n = state.requests.len();
        let frac = |tier: Tier| {
            if n == 0 {
                0.0
            } else {
                state.requests.iter().filter(|r| r.tier == tier).count() as f64 / n as f64
            }
        };
        let mean_delay = if n == 0 {
            0.0
        } else {
            state.requests.iter().map(|r| r.delay).sum::<f64>() / n as f64
        };
        Self {
            requests: n,
            self_hit: frac(Tier::SelfCache),
            d2d_hit: frac(Tier::D2d),
            uav_hit: frac(Tier::Uav),
            bs_hit: frac(Tier::Bs),
            mean_delay,
            mean_uav_distance: mean_uav_distance(state),
        }
    }
}

pub fn mean_uav_distance(state: &CacheState) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (users, uav) in state.user_trace.iter().zip(&state.uav_trace) {
        for p in users {
            total += uav.horizontal_distance(p);
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

/// Full run: placement, mobility, UAV policy and delivery.
pub fn run_cache(cfg: &CacheConfig, seed: u64) -> Result<(CacheState, CacheSummary)> {
    let mut state = prepare(cfg, seed)?;
    delivery_phase(cfg, &mut state, seed)?;
    let summary = CacheSummary::from_state(&state);
    Ok((state, summary))
}

/// Runs both UAV policies on the same placement, mobility and requests.
pub fn compare_policies(cfg: &CacheConfig, seed: u64) -> Result<(CacheSummary, CacheSummary)> {
    let tracking = CacheConfig {
        policy: UavPolicy::Tracking,
        ..cfg.clone()
    };
    let mut state = prepare(&tracking, seed)?;
    delivery_phase(&tracking, &mut state, seed)?;
    let a = CacheSummary::from_state(&state);
    let fixed = CacheConfig {
        policy: UavPolicy::Static,
        ..cfg.clone()
    };
    state.uav_trace = uav_trace(&fixed, &state.user_trace)?;
    delivery_phase(&fixed, &mut state, seed)?;
    Ok((a, CacheSummary::from_state(&state)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveillanceConfig {
    pub area: AreaSpec,
    pub sensors: NodeSet,
    /// Ground point the collected data is delivered to.
    pub center: Point3,
    /// Where the sweep starts.
    pub start: Point3,
    pub altitude: f64,
    pub speed: f64,
    /// Sweep lane width is twice this radius.
    pub collection_radius: f64,
    pub payload_bits: f64,
    pub uav_power: f64,
    pub channel: ChannelParams,
}

impl Default for SurveillanceConfig {
    fn default() -> Self {
        Self {
            area: AreaSpec {
                width: 1000.0,
                height: 1000.0,
            },
            sensors: NodeSet::default(),
            center: Point3::ground(500.0, 500.0),
            start: Point3::ground(0.0, 0.0),
            altitude: 100.0,
            speed: 10.0,
            collection_radius: 50.0,
            payload_bits: 1e6,
            uav_power: 5.0,
            channel: ChannelParams {
                bandwidth: 20e6,
                ..ChannelParams::default()
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurveillanceResult {
    pub collection_time: f64,
    pub flight_time: f64,
    pub transmission_time: f64,
    pub total_delay: f64,
    pub bits: f64,
}

/// Visit order: lanes of width `2 * collection_radius` along y, x ascending
/// on even lanes and descending on odd ones.
pub fn boustrophedon_order(sensors: &NodeSet, collection_radius: f64) -> Vec<usize> {
    let lane_width = 2.0 * collection_radius;
    let lane = |p: &Point3| (p.y / lane_width).floor() as i64;
    let mut order: Vec<usize> = (0..sensors.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&sensors.positions[a], &sensors.positions[b]);
        let (la, lb) = (lane(pa), lane(pb));
        la.cmp(&lb).then_with(|| {
            let by_x = pa.x.total_cmp(&pb.x);
            if la % 2 == 0 {
                by_x
            } else {
                by_x.reverse()
            }
        })
    });
    order
}

/// Collects every sensor's payload by flying over it in sweep order, then
/// flies straight to the center and uploads at the LOS rate from overhead.
pub fn surveillance_run(cfg: &SurveillanceConfig) -> Result<SurveillanceResult> {
    AreaSpec::new(cfg.area.width, cfg.area.height)?;
    positive("altitude", cfg.altitude)?;
    positive("speed", cfg.speed)?;
    positive("collection_radius", cfg.collection_radius)?;
    non_negative("payload_bits", cfg.payload_bits)?;
    positive("uav_power", cfg.uav_power)?;
    cfg.channel.validate()?;
    for p in cfg.sensors.iter().chain([&cfg.center, &cfg.start]) {
        if !p.is_valid() || !cfg.area.contains(p) {
            return Err(invalid("sensors", format!("point ({}, {}) is outside the area", p.x, p.y)));
        }
    }
    let mut here = cfg.start;
    let mut path = 0.0;
    for k in boustrophedon_order(&cfg.sensors, cfg.collection_radius) {
        let next = cfg.sensors.positions[k];
        path += here.horizontal_distance(&next);
        here = next;
    }
    let collection_time = path / cfg.speed;
    let flight_time = here.horizontal_distance(&cfg.center) / cfg.speed;
    let bits = cfg.payload_bits * cfg.sensors.len() as f64;
    let snr = cfg.uav_power * cfg.channel.los_gain_sq(cfg.altitude * cfg.altitude) / cfg.channel.noise_power;
    let rate = cfg.channel.bandwidth * snr.ln_1p() / std::f64::consts::LN_2;
    let transmission_time = bits / rate;
    Ok(SurveillanceResult {
        collection_time,
        flight_time,
        transmission_time,
        total_delay: collection_time + flight_time + transmission_time,
        bits,
    })
}
