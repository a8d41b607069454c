//! Geometry, link gains, SINR and propulsion power on small hand-checkable
//! inputs.

use uav_udn::channel::{los_gain, rayleigh_gain, sinr_raw, spectral_efficiency, ChannelParams};
use uav_udn::energy::{propulsion_power, PropulsionParams};
use uav_udn::geometry::{make_grid, sample_ppp, AreaSpec, Point3};

fn main() -> uav_udn::Result<()> {
    let area = AreaSpec::square(1000.0)?;
    let grid = make_grid(&area, 20, 20)?;
    let first = grid.iter().next().expect("non-empty grid");
    println!("20x20 grid: {} nodes, first at ({}, {})", grid.len(), first.x, first.y);

    let mut count = 0;
    for seed in 0..1000 {
        count += sample_ppp(&area, 1e-5, seed)?.len();
    }
    let mean = count as f64 / 1000.0;
    println!("PPP at 1e-5 per m^2 over 1 km^2: mean count {mean:.2} over 1000 seeds");

    let ch = ChannelParams::default();
    let uav = Point3::new(0.0, 0.0, 100.0);
    let user = Point3::ground(0.0, 0.0);
    let g = los_gain(&uav, &user, &ch)?;
    let s = sinr_raw(5.0, g, &[], &[], ch.noise_power)?;
    println!("LOS gain at 100 m: {g:e}; SINR at 5 W: {s:.0} ({:.4} bits/s/Hz)", spectral_efficiency(s)?);
    let with_interferer = sinr_raw(5.0, g, &[0.1], &[1e-12], ch.noise_power)?;
    println!("with a 0.1 W interferer at gain 1e-12: SINR {with_interferer:.2}");

    let rx = Point3::ground(30.0, 0.0);
    let fades: Vec<f64> = (0..5).map(|seed| rayleigh_gain(&user, &rx, &ch, seed)).collect::<uav_udn::Result<_>>()?;
    let shown: Vec<String> = fades.iter().map(|g| format!("{g:.3e}")).collect();
    println!("Rayleigh gains at 30 m (mean {:.3e}): {}", ch.d2d_mean_gain(30.0), shown.join(" "));

    let prop = PropulsionParams::default();
    println!(
        "propulsion: P(30) = {:.3} W, max-endurance speed {:.3} m/s",
        propulsion_power(30.0, &prop)?,
        prop.max_endurance_speed()
    );
    Ok(())
}
