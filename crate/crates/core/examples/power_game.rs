//! Non-cooperative power control: three links with priced rate utilities
//! play best responses until no power moves, then the profile is checked
//! for profitable deviations.

use uav_udn::optimize::{best_response_power_game, nash_gap, GameSpec};

fn main() -> uav_udn::Result<()> {
    let direct = [1.0, 0.8, 1.2];
    let cross = [[0.0, 0.1, 0.05], [0.2, 0.0, 0.1], [0.05, 0.15, 0.0]];
    let noise = 0.1;
    let price = [1.2, 1.0, 1.4];
    let utility = |i: usize, p: &[f64]| {
        let interference: f64 = (0..3).filter(|&j| j != i).map(|j| p[j] * cross[j][i]).sum();
        (1.0 + p[i] * direct[i] / (noise + interference)).log2() - price[i] * p[i]
    };
    let game = GameSpec::new(vec![2.0; 3], utility)?;
    let out = best_response_power_game(&game, 200, 1e-9)?;
    println!("converged {} after {} rounds", out.converged, out.rounds);
    for (i, p) in out.powers.iter().enumerate() {
        println!("  link {i}: power {p:.4} W, utility {:.4}", game.utility(i, &out.powers));
    }
    let gap = nash_gap(&game, &out.powers, 1001);
    println!("largest gain from a unilateral deviation: {:.2e}", gap.iter().copied().fold(0.0, f64::max));
    Ok(())
}
