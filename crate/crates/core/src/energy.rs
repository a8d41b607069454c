//! Fixed-wing propulsion energy and RF energy harvesting.

use crate::channel::ChannelParams;
use crate::error::{invalid, Result};
use crate::geometry::{distance, NodeSet, Trajectory};

/// Level-flight power law `P(V) = c1 V^3 + c2 / V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropulsionParams {
    pub c1: f64,
    pub c2: f64,
}

impl Default for PropulsionParams {
    fn default() -> Self {
        Self {
            c1: 9.26e-4,
            c2: 2250.0,
        }
    }
}

impl PropulsionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(invalid("c1", "must be positive"));
        }
        if !(self.c2 > 0.0 && self.c2.is_finite()) {
            return Err(invalid("c2", "must be positive"));
        }
        Ok(())
    }

    /// Max-endurance speed `(c2 / (3 c1))^(1/4)`, where `P` is smallest.
    pub fn max_endurance_speed(&self) -> f64 {
        (self.c2 / (3.0 * self.c1)).powf(0.25)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarvestParams {
    /// RF-to-DC conversion efficiency.
    pub eta: f64,
}

impl Default for HarvestParams {
    fn default() -> Self {
        Self { eta: 0.5 }
    }
}

impl HarvestParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid("eta", format!("must lie in [0, 1], got {}", self.eta)));
        }
        Ok(())
    }
}

pub fn propulsion_power(speed: f64, params: &PropulsionParams) -> Result<f64> {
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(invalid("speed", format!("level-flight model needs V > 0, got {speed}")));
    }
    Ok(params.c1 * speed.powi(3) + params.c2 / speed)
}

/// Propulsion energy over every slot of `traj`. Slots without horizontal
/// motion are loitering and are charged at the max-endurance power.
pub fn flight_energy(traj: &Trajectory, params: &PropulsionParams) -> Result<f64> {
    if traj.samples().len() < 2 {
        return Err(invalid("trajectory", "needs at least two samples"));
    }
    params.validate()?;
    let loiter = params.max_endurance_speed();
    let dt = traj.slot_duration();
    traj.slot_speeds()
        .into_iter()
        .map(|v| {
            let v = if v > 0.0 { v } else { loiter };
            propulsion_power(v, params).map(|p| p * dt)
        })
        .sum()
}

/// Per-slot transmit power of an energy-transmitting UAV.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSchedule {
    powers: Vec<f64>,
    cap: f64,
}

impl PowerSchedule {
    pub fn new(powers: Vec<f64>, cap: f64) -> Result<Self> {
        if !(cap >= 0.0 && cap.is_finite()) {
            return Err(invalid("cap", "must be non-negative"));
        }
        if let Some(p) = powers.iter().find(|p| !(0.0..=cap).contains(*p)) {
            return Err(invalid("powers", format!("{p} W outside [0, {cap}] W")));
        }
        Ok(Self { powers, cap })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// `a * self + b * other`, with the cap scaled accordingly.
    pub fn combine(&self, a: f64, other: &PowerSchedule, b: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(invalid("schedule", "length mismatch"));
        }
        let powers = self
            .powers
            .iter()
            .zip(&other.powers)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(powers, a.abs() * self.cap + b.abs() * other.cap)
    }
}

/// Energy harvested at each node, `eta * sum_n p[n] g(q[n], w_k) dt`,
/// using the left sample of every slot.
pub fn harvested_energy(
    traj: &Trajectory,
    schedule: &PowerSchedule,
    nodes: &NodeSet,
    channel: &ChannelParams,
    harvest: &HarvestParams,
) -> Result<Vec<f64>> {
    if schedule.len() != traj.slot_count() {
        return Err(invalid(
            "schedule",
            format!("{} powers for {} trajectory slots", schedule.len(), traj.slot_count()),
        ));
    }
    harvest.validate()?;
    let dt = traj.slot_duration();
    let samples = &traj.samples()[..traj.slot_count()];
    nodes
        .iter()
        .map(|w| {
            let mut acc = 0.0;
            for (s, p) in samples.iter().zip(schedule.powers()) {
                let d = distance(&s.position, w);
                if d == 0.0 {
                    return Err(crate::Error::SingularGeometry);
                }
                acc += p * channel.beta0 / (d * d);
            }
            Ok(harvest.eta * acc * dt)
        })
        .collect()
}
