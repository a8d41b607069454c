//! Search engines behind the power-control solvers: exhaustive lattice
//! search, golden-section refinement, best-response dynamics for
//! non-cooperative power games, and block-coordinate ascent.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Largest lattice [`grid_search_max`] will evaluate unless told otherwise.
pub const DEFAULT_GRID_BUDGET: u128 = 1 << 26;
/// Grid size of the default one-dimensional solve.
pub const DEFAULT_LINE_POINTS: usize = 64;

type Objective<'a> = Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>;

/// Box-constrained problem. The objective is maximized unless
/// `maximize` is false, in which case it is minimized.
pub struct BoxedProblem<'a> {
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Objective<'a>,
    pub maximize: bool,
}

impl<'a> BoxedProblem<'a> {
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: impl Fn(&[f64]) -> f64 + Sync + 'a,
    ) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(invalid("bounds", "lower and upper must have the same non-zero length"));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
            return Err(invalid("bounds", format!("lower > upper at coordinate {i}")));
        }
        Ok(Self {
            lower,
            upper,
            objective: Box::new(objective),
            maximize: true,
        })
    }

    pub fn interval(lo: f64, hi: f64, f: impl Fn(f64) -> f64 + Sync + 'a) -> Result<Self> {
        Self::new(vec![lo], vec![hi], move |x: &[f64]| f(x[0]))
    }

    pub fn minimizing(mut self) -> Self {
        self.maximize = false;
        self
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    // Larger is better regardless of direction.
    fn score(&self, x: &[f64]) -> Result<(f64, f64)> {
        let v = self.evaluate(x);
        if !v.is_finite() {
            return Err(Error::Evaluation { at: x.to_vec() });
        }
        Ok((if self.maximize { v } else { -v }, v))
    }
}

fn lattice_value(lo: f64, hi: f64, i: usize, points: usize) -> f64 {
    if i + 1 == points {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (points - 1) as f64
    }
}

/// Evaluates every point of the `points_per_dim`-per-axis lattice
/// (endpoints included) and returns the best. Ties go to the
/// lexicographically smallest lattice point.
pub fn grid_search_max(problem: &BoxedProblem<'_>, points_per_dim: usize) -> Result<(Vec<f64>, f64)> {
    grid_search_max_budgeted(problem, points_per_dim, DEFAULT_GRID_BUDGET)
}

pub fn grid_search_max_budgeted(
    problem: &BoxedProblem<'_>,
    points_per_dim: usize,
    budget: u128,
) -> Result<(Vec<f64>, f64)> {
    if points_per_dim < 2 {
        return Err(invalid("points_per_dim", "need at least 2 points per axis"));
    }
    let dim = problem.dimension();
    let needed = (points_per_dim as u128)
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let total = needed as usize;
    let decode = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for d in (0..dim).rev() {
            let i = idx % points_per_dim;
            idx /= points_per_dim;
            x[d] = lattice_value(problem.lower[d], problem.upper[d], i, points_per_dim);
        }
        x
    };
    // Lattice index order is lexicographic order, so keeping the first
    // strict maximum of each chunk and merging chunks in order gives the
    // same answer for any thread count.
    let scan = |range: std::ops::Range<usize>| -> Result<Option<(f64, f64, usize)>> {
        let mut best: Option<(f64, f64, usize)> = None;
        for idx in range {
            let (s, v) = problem.score(&decode(idx))?;
            if best.is_none_or(|b| s > b.0) {
                best = Some((s, v, idx));
            }
        }
        Ok(best)
    };
    const CHUNK: usize = 4096;
    let best = if total <= CHUNK {
        scan(0..total)?
    } else {
        let chunks: Vec<_> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| scan(c * CHUNK..((c + 1) * CHUNK).min(total)))
            .collect::<Result<_>>()?;
        chunks.into_iter().flatten().fold(None, |acc: Option<(f64, f64, usize)>, b| match acc {
            Some(a) if a.0 >= b.0 => Some(a),
            _ => Some(b),
        })
    };
    let (_, value, idx) = best.expect("lattice is non-empty");
    Ok((decode(idx), value))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search on a one-dimensional problem assumed unimodal.
/// Stops once the bracket is no wider than `tolerance`.
pub fn golden_section_max(problem: &BoxedProblem<'_>, tolerance: f64) -> Result<(f64, f64)> {
    if problem.dimension() != 1 {
        return Err(invalid("problem", "golden-section search is one-dimensional"));
    }
    if !(tolerance > 0.0) {
        return Err(invalid("tolerance", "must be positive"));
    }
    let (mut a, mut b) = (problem.lower[0], problem.upper[0]);
    if b - a <= tolerance {
        let x = 0.5 * (a + b);
        return Ok((x, problem.score(&[x])?.1));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut vc) = problem.score(&[c])?;
    let (mut fd, mut vd) = problem.score(&[d])?;
    while b - a > tolerance {
        if fc >= fd {
            b = d;
            d = c;
            (fd, vd) = (fc, vc);
            c = b - INV_PHI * (b - a);
            (fc, vc) = problem.score(&[c])?;
        } else {
            a = c;
            c = d;
            (fc, vc) = (fd, vd);
            d = a + INV_PHI * (b - a);
            (fd, vd) = problem.score(&[d])?;
        }
    }
    Ok(if fc >= fd { (c, vc) } else { (d, vd) })
}

/// Grid scan followed by golden-section refinement around the best grid
/// point. Robust to objectives that are only locally unimodal.
pub fn maximize_line(
    lo: f64,
    hi: f64,
    points: usize,
    tolerance: f64,
    f: impl Fn(f64) -> f64 + Sync,
) -> Result<(f64, f64)> {
    if !(lo <= hi) {
        return Err(invalid("interval", format!("[{lo}, {hi}] is empty")));
    }
    if hi - lo <= tolerance {
        let v = f(lo);
        if !v.is_finite() {
            return Err(Error::Evaluation { at: vec![lo] });
        }
        return Ok((lo, v));
    }
    let points = points.max(2);
    let mut best = (lo, f64::NEG_INFINITY, 0usize);
    for i in 0..points {
        let x = lattice_value(lo, hi, i, points);
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Evaluation { at: vec![x] });
        }
        if v > best.1 {
            best = (x, v, i);
        }
    }
    let i = best.2;
    let a = lattice_value(lo, hi, i.saturating_sub(1), points);
    let b = lattice_value(lo, hi, (i + 1).min(points - 1), points);
    let line = BoxedProblem::interval(a, b, &f)?;
    let (x, v) = golden_section_max(&line, tolerance)?;
    Ok(if v > best.1 { (x, v) } else { (best.0, best.1) })
}

type Utility<'a> = Box<dyn Fn(usize, &[f64]) -> f64 + Sync + 'a>;

/// Non-cooperative power game: player `i` picks a power in
/// `[0, power_max[i]]` and receives `utility(i, powers)`.
pub struct GameSpec<'a> {
    power_max: Vec<f64>,
    utility: Utility<'a>,
}

impl<'a> GameSpec<'a> {
    pub fn new(
        power_max: Vec<f64>,
        utility: impl Fn(usize, &[f64]) -> f64 + Sync + 'a,
    ) -> Result<Self> {
        if power_max.is_empty() {
            return Err(invalid("players", "game needs at least one player"));
        }
        if power_max.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(invalid("power_max", "caps must be finite and non-negative"));
        }
        Ok(Self {
            power_max,
            utility: Box::new(utility),
        })
    }

    pub fn players(&self) -> usize {
        self.power_max.len()
    }

    pub fn power_max(&self) -> &[f64] {
        &self.power_max
    }

    pub fn utility(&self, player: usize, powers: &[f64]) -> f64 {
        (self.utility)(player, powers)
    }

    fn best_response(&self, player: usize, profile: &[f64], points: usize) -> Result<f64> {
        let cap = self.power_max[player];
        let tol = 1e-10 * cap.max(1e-12);
        let mut trial = profile.to_vec();
        let f = |p: f64| {
            let mut t = profile.to_vec();
            t[player] = p;
            self.utility(player, &t)
        };
        let (p, v) = maximize_line(0.0, cap, points, tol, f)?;
        // keep the incumbent on ties so a converged profile stays put
        trial[player] = profile[player];
        let current = self.utility(player, &trial);
        Ok(if current >= v { profile[player] } else { p })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateOrder {
    /// All players respond to the previous round's profile.
    Simultaneous,
    /// Players respond in index order to the latest profile.
    Sequential,
}

#[derive(Clone, Debug)]
pub struct BestResponseOptions {
    pub grid_points: usize,
    pub order: UpdateOrder,
    pub initial: Option<Vec<f64>>,
}

impl Default for BestResponseOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_LINE_POINTS,
            order: UpdateOrder::Simultaneous,
            initial: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameOutcome {
    pub powers: Vec<f64>,
    pub converged: bool,
    pub rounds: usize,
}

/// Simultaneous best-response dynamics from the all-zero profile. Stops
/// when no power moves by `tolerance` or more in a round, or after
/// `max_rounds`; the last profile is returned either way.
pub fn best_response_power_game(
    game: &GameSpec<'_>,
    max_rounds: usize,
    tolerance: f64,
) -> Result<GameOutcome> {
    best_response_with(game, max_rounds, tolerance, &BestResponseOptions::default())
}

pub fn best_response_with(
    game: &GameSpec<'_>,
    max_rounds: usize,
    tolerance: f64,
    options: &BestResponseOptions,
) -> Result<GameOutcome> {
    if max_rounds == 0 {
        return Err(invalid("max_rounds", "need at least one round"));
    }
    let n = game.players();
    let mut powers = match &options.initial {
        Some(p) if p.len() == n => p.clone(),
        Some(_) => return Err(invalid("initial", "one power per player")),
        None => vec![0.0; n],
    };
    for round in 1..=max_rounds {
        let previous = powers.clone();
        match options.order {
            UpdateOrder::Simultaneous => {
                powers = (0..n)
                    .into_par_iter()
                    .map(|i| game.best_response(i, &previous, options.grid_points))
                    .collect::<Result<_>>()?;
            }
            UpdateOrder::Sequential => {
                for i in 0..n {
                    powers[i] = game.best_response(i, &powers, options.grid_points)?;
                }
            }
        }
        let change = powers
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < tolerance {
            return Ok(GameOutcome {
                powers,
                converged: true,
                rounds: round,
            });
        }
    }
    Ok(GameOutcome {
        powers,
        converged: false,
        rounds: max_rounds,
    })
}

/// Largest utility gain each player could get by deviating unilaterally
/// to a point of its own `grid_points` lattice. All entries are `<= eps`
/// at an eps-Nash profile (restricted to that lattice).
pub fn nash_gap(game: &GameSpec<'_>, powers: &[f64], grid_points: usize) -> Vec<f64> {
    (0..game.players())
        .map(|i| {
            let current = game.utility(i, powers);
            let mut t = powers.to_vec();
            (0..grid_points)
                .map(|k| {
                    t[i] = lattice_value(0.0, game.power_max[i], k, grid_points);
                    game.utility(i, &t) - current
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// One block of a block-coordinate ascent over a shared state. `improve`
/// must never leave the state with a lower objective than it found.
pub trait Block<S> {
    fn improve(&self, state: &mut S, objective: &(dyn Fn(&S) -> f64 + Sync)) -> Result<()>;
}

/// Grid search (plus golden refinement for single coordinates) over a
/// subset of the coordinates of a `Vec<f64>` state.
#[derive(Clone, Debug)]
pub struct CoordinateBlock {
    pub coords: Vec<usize>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub points_per_dim: usize,
    pub refine: bool,
}

impl CoordinateBlock {
    pub fn new(coords: Vec<usize>, lower: Vec<f64>, upper: Vec<f64>, points_per_dim: usize) -> Self {
        Self {
            coords,
            lower,
            upper,
            points_per_dim,
            refine: false,
        }
    }

    pub fn refined(mut self) -> Self {
        self.refine = true;
        self
    }
}

impl Block<Vec<f64>> for CoordinateBlock {
    fn improve(&self, state: &mut Vec<f64>, objective: &(dyn Fn(&Vec<f64>) -> f64 + Sync)) -> Result<()> {
        let base = state.clone();
        let embed = |sub: &[f64]| {
            let mut full = base.clone();
            for (c, v) in self.coords.iter().zip(sub) {
                full[*c] = *v;
            }
            full
        };
        let current = objective(state);
        let (sub, value) = if self.refine && self.coords.len() == 1 {
            maximize_line(
                self.lower[0],
                self.upper[0],
                self.points_per_dim,
                1e-10 * (self.upper[0] - self.lower[0]).max(1e-12),
                |x| objective(&embed(&[x])),
            )
            .map(|(x, v)| (vec![x], v))?
        } else {
            let sub = BoxedProblem::new(self.lower.clone(), self.upper.clone(), |x: &[f64]| {
                objective(&embed(x))
            })?;
            grid_search_max(&sub, self.points_per_dim)?
        };
        if value > current {
            *state = embed(&sub);
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BlockAscent<S> {
    pub state: S,
    /// Objective before the first sweep and after every sweep.
    pub trace: Vec<f64>,
}

/// Cycles through `blocks` until a sweep gains less than `tolerance` or
/// `sweeps` sweeps have run.
pub fn block_coordinate_max<S: Clone + Sync>(
    initial: S,
    objective: &(dyn Fn(&S) -> f64 + Sync),
    blocks: &[&dyn Block<S>],
    sweeps: usize,
    tolerance: f64,
) -> Result<BlockAscent<S>> {
    let mut state = initial;
    let mut value = objective(&state);
    if !value.is_finite() {
        return Err(Error::Consistency("initial objective is not finite".into()));
    }
    let mut trace = vec![value];
    for _ in 0..sweeps {
        for block in blocks {
            block.improve(&mut state, objective)?;
        }
        let next = objective(&state);
        if !(next >= value - 1e-9 * value.abs().max(1.0)) {
            return Err(Error::Consistency(format!(
                "objective fell from {value} to {next} during a sweep"
            )));
        }
        trace.push(next);
        let gain = next - value;
        value = next;
        if gain < tolerance {
            break;
        }
    }
    Ok(BlockAscent { state, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn grid_finds_lattice_vertex() {
        let p = BoxedProblem::interval(0.0, 10.0, |x| -(x - 3.0).powi(2)).unwrap();
        let (x, v) = grid_search_max(&p, 11).unwrap();
        assert_eq!((x, v), (vec![3.0], 0.0));
    }

    #[test]
    fn grid_ties_go_lexicographically_first() {
        let p = BoxedProblem::new(vec![-1.0, 2.0], vec![1.0, 5.0], |_| 7.0).unwrap();
        assert_eq!(grid_search_max(&p, 5).unwrap(), (vec![-1.0, 2.0], 7.0));
        // same answer through the parallel path
        let big = BoxedProblem::new(vec![0.0; 3], vec![1.0; 3], |_| 1.0).unwrap();
        assert_eq!(grid_search_max(&big, 40).unwrap().0, vec![0.0; 3]);
    }

    #[test]
    fn grid_two_dimensional_bowl() {
        let p = BoxedProblem::new(vec![-1.0, -1.0], vec![1.0, 1.0], |x| -x[0] * x[0] - x[1] * x[1]).unwrap();
        assert_eq!(grid_search_max(&p, 3).unwrap().0, vec![0.0, 0.0]);
    }

    #[test]
    fn grid_minimizes_when_asked() {
        let p = BoxedProblem::interval(0.0, 4.0, |x| (x - 1.0).powi(2)).unwrap().minimizing();
        assert_eq!(grid_search_max(&p, 5).unwrap(), (vec![1.0], 0.0));
    }

    #[test]
    fn grid_budget_is_enforced() {
        let p = BoxedProblem::new(vec![0.0; 4], vec![1.0; 4], |_| 0.0).unwrap();
        assert!(matches!(
            grid_search_max_budgeted(&p, 10, 9_999),
            Err(Error::BudgetExceeded { needed: 10_000, budget: 9_999 })
        ));
        assert!(grid_search_max_budgeted(&p, 10, 10_000).is_ok());
    }

    #[test]
    fn grid_reports_nan() {
        let p = BoxedProblem::interval(0.0, 1.0, |x| if x > 0.5 { f64::NAN } else { x }).unwrap();
        assert!(matches!(grid_search_max(&p, 5), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn golden_hits_vertex() {
        let p = BoxedProblem::interval(0.0, 10.0, |x| -(x - 3.0).powi(2)).unwrap();
        let (x, _) = golden_section_max(&p, 1e-6).unwrap();
        assert!((x - 3.0).abs() <= 1e-6);
    }

    #[test]
    fn golden_degenerate_interval() {
        let p = BoxedProblem::interval(2.5, 2.5, |x| x).unwrap();
        assert_eq!(golden_section_max(&p, 1e-6).unwrap(), (2.5, 2.5));
    }

    #[test]
    fn golden_propagates_non_finite() {
        let p = BoxedProblem::interval(0.0, 1.0, |_| f64::INFINITY).unwrap();
        assert!(matches!(golden_section_max(&p, 1e-6), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn golden_agrees_with_dense_grid_on_quartics() {
        let mut rng = crate::rng::seeded(5);
        for _ in 0..50 {
            // -(x - m)^4 - s (x - m)^2 is unimodal with its peak at m
            let m = rng.random_range(-4.0..4.0);
            let s = rng.random_range(0.0..3.0);
            let f = move |x: f64| -(x - m).powi(4) - s * (x - m).powi(2) + 1.0;
            let p = BoxedProblem::interval(-5.0, 5.0, f).unwrap();
            let (gx, _) = grid_search_max(&p, 10_000).unwrap();
            let step = 10.0 / 9_999.0;
            let (x, _) = golden_section_max(&p, 1e-8).unwrap();
            assert!((x - gx[0]).abs() <= 2.0 * step, "{x} vs {}", gx[0]);
        }
    }

    #[test]
    fn line_search_handles_multimodal_start() {
        // two bumps, the taller one is narrow
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 2.0 * (-50.0 * (x - 7.3).powi(2)).exp();
        let (x, v) = maximize_line(0.0, 10.0, 64, 1e-10, f).unwrap();
        assert!((x - 7.3).abs() < 1e-4 && v > 1.99);
    }

    #[test]
    fn single_player_dominant_strategy() {
        let g = GameSpec::new(vec![2.0], |_, p| p[0].ln_1p()).unwrap();
        let out = best_response_power_game(&g, 10, 1e-9).unwrap();
        assert_eq!(out.powers, vec![2.0]);
        assert!(out.converged);
        assert_eq!(out.rounds, 2);
        let one = best_response_power_game(&g, 1, 1e-9).unwrap();
        assert_eq!(one.powers, vec![2.0]);
    }

    #[test]
    fn infinite_tolerance_converges_in_one_round() {
        let g = GameSpec::new(vec![1.0, 1.0], |i, p| -(p[i] - 0.3).powi(2)).unwrap();
        let out = best_response_power_game(&g, 50, f64::INFINITY).unwrap();
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
    }

    fn two_link_game(cross: f64) -> GameSpec<'static> {
        let direct = 1e-9;
        let noise = 1e-13;
        GameSpec::new(vec![0.1, 0.1], move |i, p| {
            let j = 1 - i;
            (p[i] * direct / (noise + p[j] * cross)).ln_1p()
        })
        .unwrap()
    }

    #[test]
    fn weak_interference_links_go_full_power() {
        let g = two_link_game(1e-11);
        let out = best_response_power_game(&g, 20, 1e-12).unwrap();
        assert_eq!(out.powers, vec![0.1, 0.1]);
        // brute-force pure Nash equilibria of the 50 x 50 power lattice
        let lattice: Vec<f64> = (0..50).map(|k| lattice_value(0.0, 0.1, k, 50)).collect();
        let mut equilibria = Vec::new();
        for &a in &lattice {
            for &b in &lattice {
                let stable_a = lattice.iter().all(|&x| g.utility(0, &[x, b]) <= g.utility(0, &[a, b]));
                let stable_b = lattice.iter().all(|&y| g.utility(1, &[a, y]) <= g.utility(1, &[a, b]));
                if stable_a && stable_b {
                    equilibria.push((a, b));
                }
            }
        }
        assert_eq!(equilibria, vec![(0.1, 0.1)]);
    }

    #[test]
    fn priced_games_reach_eps_nash() {
        let mut rng = crate::rng::seeded(77);
        for _ in 0..20 {
            let direct: Vec<f64> = (0..3).map(|_| rng.random_range(0.5..1.0)).collect();
            let cross: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..0.1)).collect();
            let price: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..1.0)).collect();
            let g = GameSpec::new(vec![2.0; 3], move |i, p| {
                let interference: f64 = (0..3).filter(|&j| j != i).map(|j| p[j] * cross[3 * j + i]).sum();
                (p[i] * direct[i] / (0.1 + interference)).ln_1p() - price[i] * p[i]
            })
            .unwrap();
            for order in [UpdateOrder::Simultaneous, UpdateOrder::Sequential] {
                let opts = BestResponseOptions { order, ..Default::default() };
                let out = best_response_with(&g, 200, 1e-10, &opts).unwrap();
                assert!(out.converged);
                assert!(nash_gap(&g, &out.powers, 64).iter().all(|&gap| gap <= 1e-9));
            }
        }
    }

    #[test]
    fn bcd_separable_one_sweep() {
        let f = |x: &Vec<f64>| -(x[0] - 0.4).powi(2) - (x[1] + 0.2).powi(2);
        let b0 = CoordinateBlock::new(vec![0], vec![-1.0], vec![1.0], 11);
        let b1 = CoordinateBlock::new(vec![1], vec![-1.0], vec![1.0], 11);
        let out = block_coordinate_max(vec![0.9, 0.9], &f, &[&b0, &b1], 1, 0.0).unwrap();
        let joint = BoxedProblem::new(vec![-1.0; 2], vec![1.0; 2], |x| f(&x.to_vec())).unwrap();
        let (gx, gv) = grid_search_max(&joint, 11).unwrap();
        assert_eq!(out.trace.len(), 2);
        for (a, b) in out.state.iter().zip(&gx) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((out.trace[1] - gv).abs() < 1e-12);
    }

    #[test]
    fn bcd_single_block_reduces_to_grid() {
        let f = |x: &Vec<f64>| (3.0 * x[0]).sin() * x[1] - 0.1 * x[1] * x[1];
        let block = CoordinateBlock::new(vec![0, 1], vec![-2.0, 0.0], vec![2.0, 3.0], 17);
        let out = block_coordinate_max(vec![-2.0, 0.0], &f, &[&block], 3, 1e-12).unwrap();
        let p = BoxedProblem::new(vec![-2.0, 0.0], vec![2.0, 3.0], |x| f(&x.to_vec())).unwrap();
        let (gx, gv) = grid_search_max(&p, 17).unwrap();
        assert_eq!(out.state, gx);
        assert_eq!(*out.trace.last().unwrap(), gv);
    }

    struct Saboteur;
    impl Block<Vec<f64>> for Saboteur {
        fn improve(&self, state: &mut Vec<f64>, _: &(dyn Fn(&Vec<f64>) -> f64 + Sync)) -> Result<()> {
            state[0] -= 1.0;
            Ok(())
        }
    }

    #[test]
    fn bcd_flags_decreasing_block() {
        let f = |x: &Vec<f64>| x[0];
        assert!(matches!(
            block_coordinate_max(vec![0.0], &f, &[&Saboteur], 2, 0.0),
            Err(Error::Consistency(_))
        ));
    }

    proptest! {
        #[test]
        fn grid_is_exhaustive(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
            let f = move |x: &[f64]| a * x[0] + b * x[1] * x[0] + c * (x[1] * 2.0).cos();
            let p = BoxedProblem::new(vec![-1.0, -1.0], vec![1.0, 1.0], f).unwrap();
            let (_, best) = grid_search_max(&p, 9).unwrap();
            for i in 0..9 {
                for j in 0..9 {
                    let x = [lattice_value(-1.0, 1.0, i, 9), lattice_value(-1.0, 1.0, j, 9)];
                    prop_assert!(best >= f(&x));
                }
            }
        }

        #[test]
        fn bcd_trace_monotone_on_bilinear(seed in 0u64..100) {
            let mut rng = crate::rng::seeded(seed);
            let q: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let l: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = move |x: &Vec<f64>| {
                // bilinear cross terms plus linear terms
                x[0] * x[1] * q[0] + x[1] * x[2] * q[1] + x[0] * x[2] * q[2]
                    + l.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
            };
            let blocks: Vec<CoordinateBlock> = (0..3)
                .map(|i| CoordinateBlock::new(vec![i], vec![-1.0], vec![1.0], 21).refined())
                .collect();
            let refs: Vec<&dyn Block<Vec<f64>>> = blocks.iter().map(|b| b as &dyn Block<Vec<f64>>).collect();
            let out = block_coordinate_max(vec![0.0; 3], &f, &refs, 20, 1e-12).unwrap();
            prop_assert!(out.trace.windows(2).all(|w| w[1] >= w[0]));
        }

        #[test]
        fn optimizers_are_deterministic(m in -4.0..4.0f64) {
            let p = BoxedProblem::interval(-5.0, 5.0, move |x| -(x - m).abs()).unwrap();
            prop_assert_eq!(golden_section_max(&p, 1e-7).unwrap(), golden_section_max(&p, 1e-7).unwrap());
            prop_assert_eq!(grid_search_max(&p, 101).unwrap(), grid_search_max(&p, 101).unwrap());
        }
    }
}
