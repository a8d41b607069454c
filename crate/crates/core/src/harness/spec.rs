//! Experiment spec files.
//!
//! A spec is a TOML document:
//!
//! ```toml
//! scenario = "relay"      # bs | relay | wet | cache
//! trials = 1
//! seed = 7
//! output = "relay.csv"    # optional
//!
//! [relay]                 # table named after the scenario, optional
//! horizon = 200.0
//!
//! [[sweep]]               # zero or more axes, first axis outermost
//! key = "speed_max"
//! values = [20.0, 40.0, 60.0]
//! ```
//!
//! Every problem in the document is reported, each with its key path and
//! line. Duplicate keys are errors.

use std::fmt;
use std::path::PathBuf;

use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::channel::{db_to_linear, ChannelParams};
use crate::error::Error;
use crate::geometry::TrajectoryKind;
use crate::scenario::bs::BsConfig;
use crate::scenario::caching::{CacheConfig, MobilityMode, Popularity, UavPolicy};
use crate::scenario::relay::RelayConfig;
use crate::scenario::wet::{ScheduleKind, WetConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    Bs,
    Relay,
    Wet,
    Cache,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [Self::Bs, Self::Relay, Self::Wet, Self::Cache];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bs => "bs",
            Self::Relay => "relay",
            Self::Wet => "wet",
            Self::Cache => "cache",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Self::Bs => "UAV flying base station sharing spectrum with D2D pairs: height-throughput curves",
            Self::Relay => "UAV mobile relay: optimized versus static throughput and energy efficiency",
            Self::Wet => "UAV wireless energy transfer: per-node harvested energy map",
            Self::Cache => "UAV-assisted caching: delivery tier mix and mean delay",
        }
    }

    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            Self::Bs => BS_KEYS,
            Self::Relay => RELAY_KEYS,
            Self::Wet => WET_KEYS,
            Self::Cache => CACHE_KEYS,
        }
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`, expected one of bs, relay, wet, cache"))
    }
}

const CHANNEL_KEYS: [&str; 4] = ["beta0", "alpha_d2d", "noise_power", "bandwidth"];

const BS_KEYS: &[&str] = &[
    "lambdas",
    "lambda",
    "area_width",
    "area_height",
    "d2d_max_distance",
    "sinr_threshold_db",
    "uav_power_max",
    "d2d_power_max",
    "altitude_min",
    "altitude_max",
    "height_levels",
    "power_sweeps",
    "beta0",
    "alpha_d2d",
    "noise_power",
    "bandwidth",
];

const RELAY_KEYS: &[&str] = &[
    "separation",
    "altitude",
    "horizon",
    "speed_max",
    "slots",
    "source_power_max",
    "relay_power_max",
    "position_levels",
    "power_levels",
    "max_sweeps",
    "c1",
    "c2",
    "beta0",
    "alpha_d2d",
    "noise_power",
    "bandwidth",
];

const WET_KEYS: &[&str] = &[
    "rows",
    "cols",
    "area_width",
    "area_height",
    "altitude",
    "trajectory",
    "schedule",
    "speed",
    "hover_duration",
    "slot_duration",
    "power_cap",
    "eta",
    "beta0",
    "alpha_d2d",
    "noise_power",
    "bandwidth",
];

const CACHE_KEYS: &[&str] = &[
    "users",
    "contents",
    "popularity",
    "zipf_exponent",
    "d2d_radius",
    "area_width",
    "area_height",
    "uav_altitude",
    "uav_speed_max",
    "policy",
    "mobility",
    "cluster_sigma",
    "cluster_drift_speed",
    "speed_min",
    "speed_max",
    "pause",
    "step",
    "duration",
    "request_rate",
    "request_count",
    "delay_self",
    "delay_d2d",
    "delay_uav",
    "delay_bs",
    "payload_bits",
    "uav_cache_size",
    "d2d_power",
    "uav_power",
    "beta0",
    "alpha_d2d",
    "noise_power",
    "bandwidth",
];

/// A scalar or list read from a spec.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    List(Vec<ParamValue>),
}

impl ParamValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            Self::Int(_) => "integer",
            Self::Float(_) => "float",
            Self::Bool(_) => "boolean",
            Self::Str(_) => "string",
            Self::List(_) => "array",
        }
    }

    fn as_f64(&self) -> Result<f64, String> {
        match *self {
            Self::Float(v) => Ok(v),
            Self::Int(v) => Ok(v as f64),
            _ => Err(format!("expected a number, found {}", self.type_name())),
        }
    }

    fn as_count(&self) -> Result<usize, String> {
        match *self {
            Self::Int(v) if v >= 0 => Ok(v as usize),
            Self::Int(v) => Err(format!("must be non-negative, got {v}")),
            _ => Err(format!("expected an integer, found {}", self.type_name())),
        }
    }

    fn as_str(&self) -> Result<&str, String> {
        match self {
            Self::Str(s) => Ok(s),
            _ => Err(format!("expected a string, found {}", self.type_name())),
        }
    }
}

/// Canonical text form, also used to key lattice points.
impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(v) => write!(f, "{v}"),
            Self::Float(v) => write!(f, "{v:?}"),
            Self::Bool(v) => write!(f, "{v}"),
            Self::Str(s) => write!(f, "{s:?}"),
            Self::List(items) => {
                write!(f, "[")?;
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioConfig {
    Bs { cfg: BsConfig, lambdas: Vec<f64> },
    Relay(RelayConfig),
    Wet(WetConfig),
    Cache(CacheConfig),
}

impl ScenarioConfig {
    pub fn default_for(id: ScenarioId) -> Self {
        match id {
            ScenarioId::Bs => Self::Bs {
                cfg: BsConfig::default(),
                lambdas: vec![5e-6, 1e-5, 2e-5],
            },
            ScenarioId::Relay => Self::Relay(RelayConfig::default()),
            ScenarioId::Wet => Self::Wet(WetConfig::default()),
            ScenarioId::Cache => Self::Cache(CacheConfig::default()),
        }
    }

    pub fn id(&self) -> ScenarioId {
        match self {
            Self::Bs { .. } => ScenarioId::Bs,
            Self::Relay(_) => ScenarioId::Relay,
            Self::Wet(_) => ScenarioId::Wet,
            Self::Cache(_) => ScenarioId::Cache,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            Self::Bs { cfg, lambdas } => {
                if lambdas.is_empty() {
                    return Err(crate::error::invalid("lambdas", "need at least one density"));
                }
                if let Some(l) = lambdas.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
                    return Err(crate::error::invalid("lambdas", format!("density must be non-negative, got {l}")));
                }
                cfg.validate()
            }
            Self::Relay(cfg) => {
                cfg.validate()?;
                if cfg.position_levels % 2 == 0 {
                    return Err(crate::error::invalid("position_levels", "must be odd"));
                }
                Ok(())
            }
            Self::Wet(cfg) => cfg.validate(),
            Self::Cache(cfg) => cfg.validate(),
        }
    }

    /// Sets one key. The message of an error describes the problem with the
    /// value; the caller adds the key path.
    pub fn set(&mut self, key: &str, value: &ParamValue) -> Result<(), String> {
        if !self.id().keys().contains(&key) {
            return Err(format!("unknown key for scenario `{}`", self.id().name()));
        }
        if CHANNEL_KEYS.contains(&key) {
            let channel = match self {
                Self::Bs { cfg, .. } => &mut cfg.channel,
                Self::Relay(cfg) => &mut cfg.channel,
                Self::Wet(cfg) => &mut cfg.channel,
                Self::Cache(cfg) => &mut cfg.channel,
            };
            return set_channel(channel, key, value);
        }
        match self {
            Self::Bs { cfg, lambdas } => set_bs(cfg, lambdas, key, value),
            Self::Relay(cfg) => set_relay(cfg, key, value),
            Self::Wet(cfg) => set_wet(cfg, key, value),
            Self::Cache(cfg) => set_cache(cfg, key, value),
        }
    }
}

fn set_channel(c: &mut ChannelParams, key: &str, v: &ParamValue) -> Result<(), String> {
    let x = v.as_f64()?;
    match key {
        "beta0" => c.beta0 = x,
        "alpha_d2d" => c.alpha_d2d = x,
        "noise_power" => c.noise_power = x,
        "bandwidth" => c.bandwidth = x,
        _ => unreachable!("checked against the key list"),
    }
    Ok(())
}

fn set_bs(c: &mut BsConfig, lambdas: &mut Vec<f64>, key: &str, v: &ParamValue) -> Result<(), String> {
    match key {
        "lambdas" => {
            let ParamValue::List(items) = v else {
                return Err(format!("expected an array, found {}", v.type_name()));
            };
            *lambdas = items.iter().map(ParamValue::as_f64).collect::<Result<_, _>>()?;
            if let Some(l) = lambdas.iter().find(|l| !(**l >= 0.0)) {
                return Err(format!("density must be non-negative, got {l}"));
            }
        }
        "lambda" => {
            let l = v.as_f64()?;
            if !(l >= 0.0) {
                return Err(format!("density must be non-negative, got {l}"));
            }
            *lambdas = vec![l];
        }
        "area_width" => c.area.width = v.as_f64()?,
        "area_height" => c.area.height = v.as_f64()?,
        "d2d_max_distance" => c.d2d_max_distance = v.as_f64()?,
        "sinr_threshold_db" => c.sinr_threshold = db_to_linear(v.as_f64()?),
        "uav_power_max" => c.uav_power_max = v.as_f64()?,
        "d2d_power_max" => c.d2d_power_max = v.as_f64()?,
        "altitude_min" => c.altitude_min = v.as_f64()?,
        "altitude_max" => c.altitude_max = v.as_f64()?,
        "height_levels" => c.height_levels = v.as_count()?,
        "power_sweeps" => c.power_sweeps = v.as_count()?,
        _ => unreachable!("checked against the key list"),
    }
    Ok(())
}

fn set_relay(c: &mut RelayConfig, key: &str, v: &ParamValue) -> Result<(), String> {
    match key {
        "separation" => c.separation = v.as_f64()?,
        "altitude" => c.altitude = v.as_f64()?,
        "horizon" => c.horizon = v.as_f64()?,
        "speed_max" => c.speed_max = v.as_f64()?,
        "slots" => c.slots = v.as_count()?,
        "source_power_max" => c.source_power_max = v.as_f64()?,
        "relay_power_max" => c.relay_power_max = v.as_f64()?,
        "position_levels" => c.position_levels = v.as_count()?,
        "power_levels" => c.power_levels = v.as_count()?,
        "max_sweeps" => c.max_sweeps = v.as_count()?,
        "c1" => c.propulsion.c1 = v.as_f64()?,
        "c2" => c.propulsion.c2 = v.as_f64()?,
        _ => unreachable!("checked against the key list"),
    }
    Ok(())
}

fn set_wet(c: &mut WetConfig, key: &str, v: &ParamValue) -> Result<(), String> {
    match key {
        "rows" => c.rows = v.as_count()?,
        "cols" => c.cols = v.as_count()?,
        "area_width" => c.area.width = v.as_f64()?,
        "area_height" => c.area.height = v.as_f64()?,
        "altitude" => c.altitude = v.as_f64()?,
        "trajectory" => {
            c.trajectory = v.as_str()?.parse::<TrajectoryKind>().map_err(|e| e.to_string())?;
        }
        "schedule" => {
            c.schedule = v.as_str()?.parse::<ScheduleKind>().map_err(|e| e.to_string())?;
        }
        "speed" => c.speed = v.as_f64()?,
        "hover_duration" => c.hover_duration = v.as_f64()?,
        "slot_duration" => c.slot_duration = v.as_f64()?,
        "power_cap" => c.power_cap = v.as_f64()?,
        "eta" => c.harvest.eta = v.as_f64()?,
        _ => unreachable!("checked against the key list"),
    }
    Ok(())
}

fn set_cache(c: &mut CacheConfig, key: &str, v: &ParamValue) -> Result<(), String> {
    match key {
        "users" => c.users = v.as_count()?,
        "contents" => c.contents = v.as_count()?,
        "popularity" => {
            c.popularity = match (v.as_str()?, c.popularity) {
                ("uniform", _) => Popularity::Uniform,
                ("zipf", Popularity::Zipf(s)) => Popularity::Zipf(s),
                ("zipf", Popularity::Uniform) => Popularity::Zipf(1.0),
                (other, _) => return Err(format!("unknown popularity `{other}`, expected uniform or zipf")),
            }
        }
        "zipf_exponent" => c.popularity = Popularity::Zipf(v.as_f64()?),
        "d2d_radius" => c.d2d_radius = v.as_f64()?,
        "area_width" => c.area.width = v.as_f64()?,
        "area_height" => c.area.height = v.as_f64()?,
        "uav_altitude" => c.uav_altitude = v.as_f64()?,
        "uav_speed_max" => c.uav_speed_max = v.as_f64()?,
        "policy" => c.policy = v.as_str()?.parse::<UavPolicy>().map_err(|e| e.to_string())?,
        "mobility" => {
            c.mobility.mode = match (v.as_str()?, c.mobility.mode) {
                ("random_waypoint", _) => MobilityMode::RandomWaypoint,
                ("cluster", MobilityMode::Cluster { sigma, drift_speed }) => MobilityMode::Cluster { sigma, drift_speed },
                ("cluster", MobilityMode::RandomWaypoint) => DEFAULT_CLUSTER,
                (other, _) => {
                    return Err(format!("unknown mobility `{other}`, expected random_waypoint or cluster"))
                }
            }
        }
        "cluster_sigma" | "cluster_drift_speed" => {
            let x = v.as_f64()?;
            let (sigma, drift_speed) = match c.mobility.mode {
                MobilityMode::Cluster { sigma, drift_speed } => (sigma, drift_speed),
                MobilityMode::RandomWaypoint => (DEFAULT_SIGMA, DEFAULT_DRIFT),
            };
            c.mobility.mode = if key == "cluster_sigma" {
                MobilityMode::Cluster { sigma: x, drift_speed }
            } else {
                MobilityMode::Cluster { sigma, drift_speed: x }
            };
        }
        "speed_min" => c.mobility.speed_min = v.as_f64()?,
        "speed_max" => c.mobility.speed_max = v.as_f64()?,
        "pause" => c.mobility.pause = v.as_f64()?,
        "step" => c.mobility.step = v.as_f64()?,
        "duration" => c.duration = v.as_f64()?,
        "request_rate" => c.request_rate = v.as_f64()?,
        "request_count" => c.request_count = Some(v.as_count()?),
        "delay_self" => c.delays.self_cache = v.as_f64()?,
        "delay_d2d" => c.delays.d2d = v.as_f64()?,
        "delay_uav" => c.delays.uav = v.as_f64()?,
        "delay_bs" => c.delays.bs = v.as_f64()?,
        "payload_bits" => c.payload_bits = v.as_f64()?,
        "uav_cache_size" => c.uav_cache_size = v.as_count()?,
        "d2d_power" => c.d2d_power = v.as_f64()?,
        "uav_power" => c.uav_power = v.as_f64()?,
        _ => unreachable!("checked against the key list"),
    }
    Ok(())
}

const DEFAULT_SIGMA: f64 = 60.0;
const DEFAULT_DRIFT: f64 = 1.0;
const DEFAULT_CLUSTER: MobilityMode = MobilityMode::Cluster {
    sigma: DEFAULT_SIGMA,
    drift_speed: DEFAULT_DRIFT,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<ParamValue>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub scenario: ScenarioId,
    /// Base configuration before sweep values are applied.
    pub config: ScenarioConfig,
    pub sweep: Vec<SweepAxis>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(config: ScenarioConfig) -> Self {
        Self {
            scenario: config.id(),
            config,
            sweep: Vec::new(),
            trials: 1,
            seed: 0,
            output: None,
        }
    }

    /// Every sweep-lattice point as its `(key, value)` assignments, first
    /// axis outermost. A spec without axes has one empty point.
    pub fn lattice(&self) -> Vec<Vec<(String, ParamValue)>> {
        let mut points: Vec<Vec<(String, ParamValue)>> = vec![Vec::new()];
        for axis in &self.sweep {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((axis.key.clone(), v.clone()));
                        q
                    })
                })
                .collect();
        }
        points
    }

    /// Configuration at one lattice point.
    pub fn config_at(&self, point: &[(String, ParamValue)]) -> Result<ScenarioConfig, String> {
        let mut cfg = self.config.clone();
        for (key, value) in point {
            cfg.set(key, value).map_err(|e| format!("{key}: {e}"))?;
        }
        Ok(cfg)
    }
}

/// One problem found in a spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecIssue {
    /// Dotted key path, empty for document-level syntax errors.
    pub path: String,
    /// 1-based line, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SpecIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if !self.path.is_empty() {
            write!(f, "{}: ", self.path)?;
        }
        write!(f, "{}", self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct SpecErrors(pub Vec<SpecIssue>);

struct Collector<'t> {
    text: &'t str,
    issues: Vec<SpecIssue>,
}

impl Collector<'_> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn push(&mut self, path: impl Into<String>, offset: Option<usize>, message: impl Into<String>) {
        let line = offset.map(|o| self.line(o));
        self.issues.push(SpecIssue {
            path: path.into(),
            line,
            message: message.into(),
        });
    }
}

fn convert(v: &DeValue<'_>) -> Result<ParamValue, String> {
    match v {
        DeValue::String(s) => Ok(ParamValue::Str(s.to_string())),
        DeValue::Integer(i) => {
            let digits = i.as_str().replace('_', "");
            i64::from_str_radix(&digits, i.radix())
                .map(ParamValue::Int)
                .map_err(|e| format!("bad integer `{}`: {e}", i.as_str()))
        }
        DeValue::Float(x) => x
            .as_str()
            .replace('_', "")
            .parse::<f64>()
            .map(ParamValue::Float)
            .map_err(|e| format!("bad float `{}`: {e}", x.as_str())),
        DeValue::Boolean(b) => Ok(ParamValue::Bool(*b)),
        DeValue::Datetime(_) => Err("datetimes are not accepted".into()),
        DeValue::Array(items) => items.iter().map(|s| convert(s.get_ref())).collect::<Result<_, _>>().map(ParamValue::List),
        DeValue::Table(_) => Err("expected a value, found a table".into()),
    }
}

fn find<'a, 'i>(table: &'a DeTable<'i>, key: &str) -> Option<(&'a Spanned<std::borrow::Cow<'i, str>>, &'a Spanned<DeValue<'i>>)> {
    table.iter().find(|(k, _)| k.get_ref() == key)
}

/// Parses and validates a spec, reporting every problem found.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, SpecErrors> {
    let mut c = Collector {
        text,
        issues: Vec::new(),
    };
    let (doc, errors) = DeTable::parse_recoverable(text);
    for e in errors {
        let offset = e.span().map(|s| s.start);
        c.push("", offset, e.message().to_string());
    }
    let doc = doc.into_inner();

    const TOP: [&str; 5] = ["scenario", "trials", "seed", "output", "sweep"];
    let mut scenario = None;
    match find(&doc, "scenario") {
        None => c.push("scenario", None, "missing required key"),
        Some((k, v)) => match v.get_ref().as_str() {
            Some(s) => match s.parse::<ScenarioId>() {
                Ok(id) => scenario = Some(id),
                Err(e) => c.push("scenario", Some(k.span().start), e),
            },
            None => c.push("scenario", Some(k.span().start), format!("expected a string, found {}", v.get_ref().type_str())),
        },
    }

    let mut trials = 1usize;
    if let Some((k, v)) = find(&doc, "trials") {
        match convert(v.get_ref()).and_then(|p| p.as_count()) {
            Ok(0) => c.push("trials", Some(k.span().start), "must be at least 1"),
            Ok(n) => trials = n,
            Err(e) => c.push("trials", Some(k.span().start), e),
        }
    }
    let mut seed = 0u64;
    if let Some((k, v)) = find(&doc, "seed") {
        match convert(v.get_ref()) {
            Ok(ParamValue::Int(s)) if s >= 0 => seed = s as u64,
            Ok(ParamValue::Int(s)) => c.push("seed", Some(k.span().start), format!("must be non-negative, got {s}")),
            Ok(other) => c.push("seed", Some(k.span().start), format!("expected an integer, found {}", other.type_name())),
            Err(e) => c.push("seed", Some(k.span().start), e),
        }
    }
    let mut output = None;
    if let Some((k, v)) = find(&doc, "output") {
        match v.get_ref().as_str() {
            Some(s) if !s.is_empty() => output = Some(PathBuf::from(s)),
            Some(_) => c.push("output", Some(k.span().start), "must not be empty"),
            None => c.push("output", Some(k.span().start), format!("expected a string, found {}", v.get_ref().type_str())),
        }
    }

    let mut config = scenario.map(ScenarioConfig::default_for);
    for (k, v) in doc.iter() {
        let name = k.get_ref().as_ref();
        if TOP.contains(&name) {
            continue;
        }
        if scenario.is_some_and(|id| id.name() == name) {
            continue;
        }
        if name.parse::<ScenarioId>().is_ok() {
            let msg = match scenario {
                Some(id) => format!("table does not match scenario `{}`", id.name()),
                None => "scenario table without a valid scenario".to_string(),
            };
            c.push(name, Some(k.span().start), msg);
        } else if v.get_ref().is_table() {
            c.push(name, Some(k.span().start), "unknown table");
        } else {
            c.push(name, Some(k.span().start), "unknown key");
        }
    }

    let mut set_lines: Vec<(String, usize)> = Vec::new();
    if let (Some(id), Some(cfg)) = (scenario, config.as_mut()) {
        if let Some((k, v)) = find(&doc, id.name()) {
            match v.get_ref().as_table() {
                None => c.push(id.name(), Some(k.span().start), "expected a table"),
                Some(table) => {
                    for (key, value) in table.iter() {
                        let path = format!("{}.{}", id.name(), key.get_ref());
                        let at = Some(key.span().start);
                        set_lines.push((key.get_ref().to_string(), key.span().start));
                        match convert(value.get_ref()) {
                            Ok(p) => {
                                if let Err(e) = cfg.set(key.get_ref(), &p) {
                                    c.push(path, at, e);
                                }
                            }
                            Err(e) => c.push(path, at, e),
                        }
                    }
                    if let ScenarioConfig::Cache(_) = cfg {
                        let has = |k: &str| find(table, k).map(|(k, v)| (k.span().start, v.get_ref().as_str().map(str::to_string)));
                        if let (Some((at, Some(p))), Some(_)) = (has("popularity"), has("zipf_exponent")) {
                            if p == "uniform" {
                                c.push("cache.zipf_exponent", Some(at), "conflicts with popularity = \"uniform\"");
                            }
                        }
                        let cluster_key = has("cluster_sigma").or(has("cluster_drift_speed"));
                        if let (Some((at, Some(m))), Some(_)) = (has("mobility"), cluster_key) {
                            if m == "random_waypoint" {
                                c.push("cache.mobility", Some(at), "cluster parameters given with mobility = \"random_waypoint\"");
                            }
                        }
                    }
                }
            }
        }
    }

    let issues_before_validation = c.issues.len();
    if let Some(cfg) = config.as_ref() {
        if issues_before_validation == 0 {
            if let Err(e) = cfg.validate() {
                let (name, msg) = match &e {
                    Error::InvalidParameter { name, reason } => (name.to_string(), reason.clone()),
                    other => (String::new(), other.to_string()),
                };
                let id = cfg.id().name();
                let at = set_lines.iter().find(|(k, _)| *k == name).map(|(_, o)| *o);
                let path = if name.is_empty() { id.to_string() } else { format!("{id}.{name}") };
                c.push(path, at, msg);
            }
        }
    }

    let mut sweep = Vec::new();
    if let Some((k, v)) = find(&doc, "sweep") {
        match v.get_ref().as_array() {
            None => c.push("sweep", Some(k.span().start), "expected an array of tables ([[sweep]])"),
            Some(axes) => {
                for (n, axis) in axes.iter().enumerate() {
                    let base = format!("sweep[{n}]");
                    let at = Some(axis.span().start);
                    let Some(table) = axis.get_ref().as_table() else {
                        c.push(base, at, "expected a table");
                        continue;
                    };
                    for (key, _) in table.iter() {
                        if !matches!(key.get_ref().as_ref(), "key" | "values") {
                            c.push(format!("{base}.{}", key.get_ref()), Some(key.span().start), "unknown key");
                        }
                    }
                    let key = match find(table, "key").map(|(k, v)| (k.span().start, v.get_ref().as_str())) {
                        Some((_, Some(s))) => Some(s.to_string()),
                        Some((o, None)) => {
                            c.push(format!("{base}.key"), Some(o), "expected a string");
                            None
                        }
                        None => {
                            c.push(format!("{base}.key"), at, "missing required key");
                            None
                        }
                    };
                    let values = match find(table, "values") {
                        Some((o, v)) => match convert(v.get_ref()) {
                            Ok(ParamValue::List(items)) if !items.is_empty() => Some((o.span().start, items)),
                            Ok(ParamValue::List(_)) => {
                                c.push(format!("{base}.values"), Some(o.span().start), "must not be empty");
                                None
                            }
                            Ok(other) => {
                                c.push(format!("{base}.values"), Some(o.span().start), format!("expected an array, found {}", other.type_name()));
                                None
                            }
                            Err(e) => {
                                c.push(format!("{base}.values"), Some(o.span().start), e);
                                None
                            }
                        },
                        None => {
                            c.push(format!("{base}.values"), at, "missing required key");
                            None
                        }
                    };
                    let (Some(key), Some((vat, values))) = (key, values) else {
                        continue;
                    };
                    if let Some(id) = scenario {
                        if !id.keys().contains(&key.as_str()) {
                            c.push(format!("{base}.key"), at, format!("`{key}` is not a key of scenario `{}`", id.name()));
                            continue;
                        }
                    }
                    if sweep.iter().any(|a: &SweepAxis| a.key == key) {
                        c.push(format!("{base}.key"), at, format!("`{key}` is swept twice"));
                        continue;
                    }
                    if let Some(cfg) = config.as_ref() {
                        for (j, value) in values.iter().enumerate() {
                            let mut probe = cfg.clone();
                            let outcome = probe.set(&key, value).and_then(|_| probe.validate().map_err(|e| e.to_string()));
                            if let Err(e) = outcome {
                                c.push(format!("{base}.values[{j}]"), Some(vat), format!("{key} = {value}: {e}"));
                            }
                        }
                    }
                    sweep.push(SweepAxis { key, values });
                }
            }
        }
    }

    match (c.issues.is_empty(), scenario, config) {
        (true, Some(scenario), Some(config)) => Ok(ExperimentSpec {
            scenario,
            config,
            sweep,
            trials,
            seed,
            output,
        }),
        _ => {
            let mut issues = c.issues;
            issues.sort_by_key(|i| i.line.unwrap_or(0));
            Err(SpecErrors(issues))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bs_spec_uses_defaults() {
        let spec = parse_spec("scenario = \"bs\"\n").unwrap();
        let ScenarioConfig::Bs { cfg, lambdas } = &spec.config else {
            panic!("wrong scenario")
        };
        assert!((cfg.sinr_threshold - 10f64.powf(0.5)).abs() < 1e-12);
        assert_eq!(cfg.d2d_max_distance, 30.0);
        assert_eq!((cfg.uav_power_max, cfg.d2d_power_max), (5.0, 0.1));
        assert_eq!(lambdas, &[5e-6, 1e-5, 2e-5]);
        assert_eq!((spec.trials, spec.seed, spec.output.as_ref()), (1, 0, None));
    }

    #[test]
    fn negative_density_names_the_key() {
        let err = parse_spec("scenario = \"bs\"\n[bs]\nlambdas = [1e-5, -2e-5]\n").unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].path, "bs.lambdas");
        assert_eq!(err.0[0].line, Some(3));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let err = parse_spec("scenario = \"relay\"\n[relay]\nhorizon = 100.0\nhorizon = 200.0\n").unwrap_err();
        assert!(err.0.iter().any(|i| i.line == Some(4) && i.message.contains("duplicate")), "{err}");
    }

    #[test]
    fn all_errors_are_reported() {
        let text = "scenario = \"wet\"\ntrials = 0\ncolour = 3\n[wet]\nrows = \"many\"\nschedule = \"zigzag\"\n";
        let err = parse_spec(text).unwrap_err();
        let paths: Vec<&str> = err.0.iter().map(|i| i.path.as_str()).collect();
        assert_eq!(paths, ["trials", "colour", "wet.rows", "wet.schedule"]);
        assert_eq!(err.0.iter().map(|i| i.line.unwrap()).collect::<Vec<_>>(), [2, 3, 5, 6]);
    }

    #[test]
    fn out_of_range_value_is_reported_with_its_line() {
        let err = parse_spec("scenario = \"cache\"\n[cache]\nusers = 10\nd2d_radius = -5.0\n").unwrap_err();
        assert_eq!(err.0[0].path, "cache.d2d_radius");
        assert_eq!(err.0[0].line, Some(4));
    }

    #[test]
    fn sweep_axes_are_checked() {
        let text = "scenario = \"relay\"\n[[sweep]]\nkey = \"speed_max\"\nvalues = [20.0, 40]\n[[sweep]]\nkey = \"colour\"\nvalues = [1]\n";
        let err = parse_spec(text).unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].path, "sweep[1].key");

        let text = "scenario = \"relay\"\n[[sweep]]\nkey = \"slots\"\nvalues = [10, -1]\n";
        let err = parse_spec(text).unwrap_err();
        assert_eq!(err.0[0].path, "sweep[0].values[1]");
    }

    #[test]
    fn lattice_is_row_major() {
        let text = "scenario = \"wet\"\n[[sweep]]\nkey = \"trajectory\"\nvalues = [\"sigmoid\", \"spiral\"]\n[[sweep]]\nkey = \"schedule\"\nvalues = [\"fixed\", \"valley\", \"ramp\"]\n";
        let spec = parse_spec(text).unwrap();
        let lattice = spec.lattice();
        assert_eq!(lattice.len(), 6);
        assert_eq!(lattice[1][1].1, ParamValue::Str("valley".into()));
        assert_eq!(lattice[3][0].1, ParamValue::Str("spiral".into()));
        let cfg = spec.config_at(&lattice[5]).unwrap();
        let ScenarioConfig::Wet(w) = cfg else { panic!() };
        assert_eq!((w.trajectory, w.schedule), (TrajectoryKind::Spiral, ScheduleKind::Ramp));
    }

    #[test]
    fn other_scenario_table_is_rejected() {
        let err = parse_spec("scenario = \"bs\"\n[relay]\nhorizon = 1.0\n").unwrap_err();
        assert_eq!(err.0[0].path, "relay");
    }

    #[test]
    fn conflicting_cache_keys() {
        let err = parse_spec("scenario = \"cache\"\n[cache]\npopularity = \"uniform\"\nzipf_exponent = 0.8\n").unwrap_err();
        assert_eq!(err.0[0].path, "cache.zipf_exponent");
        let spec = parse_spec("scenario = \"cache\"\n[cache]\ncluster_sigma = 40.0\nmobility = \"cluster\"\n").unwrap();
        let ScenarioConfig::Cache(c) = spec.config else { panic!() };
        assert_eq!(c.mobility.mode, MobilityMode::Cluster { sigma: 40.0, drift_speed: 1.0 });
    }
}
