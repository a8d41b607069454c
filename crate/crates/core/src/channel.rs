//! Link gains, SINR and spectral efficiency.
//!
//! All quantities are linear scale. Air-to-ground links follow the
//! free-space square law `beta0 / d^2`; ground-to-ground links add a
//! path-loss exponent and a unit-mean exponential (Rayleigh power) fade.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, Point3};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    /// Power gain at the 1 m reference distance.
    pub beta0: f64,
    /// Ground-to-ground path-loss exponent.
    pub alpha_d2d: f64,
    /// Receiver noise power in watts.
    pub noise_power: f64,
    /// Hz. 1 Hz makes rates read as spectral efficiencies.
    pub bandwidth: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            beta0: 1e-6,
            alpha_d2d: 3.0,
            noise_power: 1e-14,
            bandwidth: 1.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta0 > 0.0 && self.beta0.is_finite()) {
            return Err(invalid("beta0", "must be positive"));
        }
        if !(self.alpha_d2d >= 2.0 && self.alpha_d2d.is_finite()) {
            return Err(invalid("alpha_d2d", "must be at least 2"));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(invalid("noise_power", "must be positive"));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(invalid("bandwidth", "must be positive"));
        }
        Ok(())
    }

    /// Ground-to-ground mean gain `beta0 * d^-alpha` at distance `d`.
    pub fn d2d_mean_gain(&self, d: f64) -> f64 {
        self.beta0 * d.powf(-self.alpha_d2d)
    }

    /// Air-to-ground gain `beta0 / d^2` given the squared distance.
    pub fn los_gain_sq(&self, d2: f64) -> f64 {
        self.beta0 / d2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Los,
    Rayleigh,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link {
    pub tx: Point3,
    pub rx: Point3,
    pub kind: LinkKind,
    pub power: f64,
    pub power_max: f64,
}

impl Link {
    pub fn new(tx: Point3, rx: Point3, kind: LinkKind, power: f64, power_max: f64) -> Result<Self> {
        if !(power_max >= 0.0 && power_max.is_finite()) {
            return Err(invalid("power_max", "must be non-negative"));
        }
        if !(0.0..=power_max).contains(&power) {
            return Err(invalid("power", format!("{power} W outside [0, {power_max}] W")));
        }
        if kind == LinkKind::Los && tx.z <= 0.0 && rx.z <= 0.0 {
            return Err(invalid("kind", "LOS link needs an airborne endpoint"));
        }
        Ok(Self {
            tx,
            rx,
            kind,
            power,
            power_max,
        })
    }
}

pub fn los_gain(tx: &Point3, rx: &Point3, params: &ChannelParams) -> Result<f64> {
    let d = distance(tx, rx);
    if d == 0.0 {
        return Err(Error::SingularGeometry);
    }
    Ok(params.beta0 / (d * d))
}

/// Rayleigh-faded ground-to-ground gain with the fade drawn from `seed`.
pub fn rayleigh_gain(tx: &Point3, rx: &Point3, params: &ChannelParams, seed: u64) -> Result<f64> {
    let mut rng = rng::seeded(seed);
    rayleigh_gain_with(tx, rx, params, &mut rng)
}

pub(crate) fn rayleigh_gain_with<R: Rng + ?Sized>(
    tx: &Point3,
    rx: &Point3,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<f64> {
    let d = distance(tx, rx);
    if d == 0.0 {
        return Err(Error::SingularGeometry);
    }
    Ok(params.d2d_mean_gain(d) * rayleigh_fade(rng))
}

/// Unit-mean exponential power fade.
pub fn rayleigh_fade<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// `p_s g_s / (noise + sum_j p_j g_j)`. `interferer_gains[j]` is the gain
/// from interferer `j` toward the signal's receiver.
pub fn sinr(
    signal: &Link,
    signal_gain: f64,
    interferers: &[Link],
    interferer_gains: &[f64],
    params: &ChannelParams,
) -> Result<f64> {
    if interferers.len() != interferer_gains.len() {
        return Err(invalid(
            "interferer_gains",
            format!("{} gains for {} interferers", interferer_gains.len(), interferers.len()),
        ));
    }
    let powers: Vec<f64> = interferers.iter().map(|l| l.power).collect();
    sinr_raw(signal.power, signal_gain, &powers, interferer_gains, params.noise_power)
}

/// Scalar form of [`sinr`].
pub fn sinr_raw(
    signal_power: f64,
    signal_gain: f64,
    interferer_powers: &[f64],
    interferer_gains: &[f64],
    noise_power: f64,
) -> Result<f64> {
    if signal_power < 0.0 || signal_gain < 0.0 {
        return Err(invalid("signal", "power and gain must be non-negative"));
    }
    let mut interference = 0.0;
    for (&p, &g) in interferer_powers.iter().zip(interferer_gains) {
        if p < 0.0 || g < 0.0 {
            return Err(invalid("interferer", "power and gain must be non-negative"));
        }
        interference += p * g;
    }
    Ok(signal_power * signal_gain / (noise_power + interference))
}

pub fn spectral_efficiency(sinr_value: f64) -> Result<f64> {
    if !(sinr_value >= 0.0) {
        return Err(invalid("sinr", format!("must be non-negative, got {sinr_value}")));
    }
    Ok(sinr_value.ln_1p() / std::f64::consts::LN_2)
}

/// `log2(1 + x)` for callers that already guarantee `x >= 0`.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
