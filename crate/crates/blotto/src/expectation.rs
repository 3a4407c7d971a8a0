//! Expected-payoff primitives: the restricted-value gap bound, the
//! minimum-probability pruning floor, the geometric profile grid, and the
//! greedy weak adversary for the expected case.
//!
//! The expected maximin restricted to supports of size at most `c` is either
//! zero or at least `1/c`: whenever some `c`-support wins a positive amount
//! against every response, integer weights push each such win to at least
//! one, and mixing the support uniformly collects `1/c` of it in expectation.
//! That gap powers the pruning floor: support probabilities below a fraction
//! of `ε/(c·w)` can be redistributed while losing at most a `(1−ε)` factor,
//! so a geometric grid of probabilities suffices to approximate any profile.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::core::{payoff1_rational, Caps, Error, GameInstance, MixedStrategy, Profile, PureStrategy, Result};
use crate::{rat_u64, Rational};

/// Nontrivial lower bound on a positive `c`-support restricted expected
/// maximin: `1/c`. The instance's restricted value is either exactly zero or
/// at least this bound, because integer weights make every secured win worth
/// at least one, and a uniform mixture of the support keeps a `1/c` share of
/// it. The bound is attained, so callers should treat it inclusively.
pub fn opt_bounds(_inst: &GameInstance, c: usize) -> Result<Rational> {
    if c == 0 {
        return Err(Error::Malformed("support bound c must be at least 1".into()));
    }
    Ok(Rational::one() / rat_u64(c as u64))
}

/// The pruning floor under which support probabilities need not be searched:
/// `ε/(c²·w_total)`. A support strategy below the floor contributes less than
/// `ε/c` of the nonzero restricted value (which is at least `1/c`), so its
/// mass can be folded into the rest at a `(1−ε)` factor loss.
pub fn min_profile_probability(w_total: u64, c: usize, epsilon: &Rational) -> Result<Rational> {
    if w_total == 0 {
        return Err(Error::Malformed("total weight must be at least 1".into()));
    }
    if c == 0 {
        return Err(Error::Malformed("support bound c must be at least 1".into()));
    }
    if *epsilon <= Rational::zero() {
        return Err(Error::Malformed("epsilon must be positive".into()));
    }
    Ok(epsilon / (rat_u64(c as u64) * rat_u64(c as u64) * rat_u64(w_total)))
}

/// Builds the geometric profile grid: probabilities are drawn from
/// `{p₀, (1+ε)p₀, (1+ε)²p₀, …} ∪ {1}` with `p₀` the pruning floor of
/// [`min_profile_probability`], and every multiset of at most `c` values
/// whose sum stays within one is renormalized into a [`Profile`]. Multisets
/// with proportional entries collapse to the same profile — in particular
/// any repeated value yields the exact uniform profile of its size — so the
/// result stays polynomial in `log w_total` for fixed `c` and `ε`.
pub fn profile_grid(w_total: u64, c: usize, epsilon: &Rational) -> Result<BTreeSet<Profile>> {
    let caps = Caps::from_env()?;
    if c > caps.max_profile_c {
        return Err(Error::CapExceeded {
            what: "profile support size",
            needed: c as u128,
            cap: caps.max_profile_c as u128,
        });
    }
    let floor = min_profile_probability(w_total, c, epsilon)?;
    let mut values = Vec::new();
    let step = Rational::one() + epsilon;
    let mut v = floor;
    while v < Rational::one() {
        values.push(v.clone());
        caps.check("profile grid values", values.len() as u128, caps.max_candidates)?;
        v *= &step;
    }
    values.push(Rational::one());
    let mut grid = BTreeSet::new();
    let mut current = Vec::new();
    let mut visited = 0u128;
    extend_profiles(&values, 0, c, &mut current, &mut grid, &mut visited, &caps)?;
    Ok(grid)
}

/// Depth-first multiset enumeration behind [`profile_grid`]: extends the
/// current tuple with grid values from `start` on (keeping the tuple sorted),
/// prunes once the raw sum passes one, and records the renormalized profile
/// of every visited tuple.
fn extend_profiles(
    values: &[Rational],
    start: usize,
    slots: usize,
    current: &mut Vec<Rational>,
    grid: &mut BTreeSet<Profile>,
    visited: &mut u128,
    caps: &Caps,
) -> Result<()> {
    let held: Rational = current.iter().sum();
    for idx in start..values.len() {
        if &held + &values[idx] > Rational::one() {
            break;
        }
        *visited += 1;
        caps.check("profile grid tuples", *visited, caps.max_candidates)?;
        current.push(values[idx].clone());
        let total: Rational = current.iter().sum();
        let normalized = current.iter().map(|p| p / &total).collect();
        grid.insert(Profile::new(normalized)?);
        if slots > 1 {
            extend_profiles(values, idx, slots - 1, current, grid, visited, caps)?;
        }
        current.pop();
    }
    Ok(())
}

/// Greedy weak adversary for the expected case.
///
/// Against a discrete mixed strategy the only useful allocations on
/// battlefield `i` are the support levels `xᵢʲ`; reaching a level wins the
/// battlefield (worth `wᵢ` weighted by probability) against every support
/// strategy at or below it, and zero allocations are won outright by the
/// all-zero response. The greedy repeatedly takes the move with the highest
/// ratio of newly collected expected weight to additional troops — ties
/// prefer the lowest battlefield index, then the lowest strategy index that
/// introduces the level — and stops when the budget runs out or the best
/// remaining move no longer fits. Returns the response and its exact
/// expected payoff, which trails the exact best response by less than the
/// largest weight: per battlefield the move ratios trace the concave
/// envelope of the level/value curve, so the greedy prefix matches the
/// fractional optimum except for the one truncated move, worth at most
/// `w_max`.
pub fn greedy_weak_adversary_expected(
    inst: &GameInstance,
    s: &MixedStrategy,
) -> Result<(PureStrategy, Rational)> {
    s.validate(inst, inst.n())?;
    let support: Vec<Vec<u32>> = s
        .support()
        .iter()
        .map(|p| p.discrete_entries())
        .collect::<Result<_>>()?;
    let k = inst.k();
    let weights = inst.rational_weights();
    // Distinct positive levels per battlefield, each tagged with the lowest
    // strategy index that allocates exactly that amount.
    let mut levels: Vec<Vec<(u32, usize)>> = vec![Vec::new(); k];
    for (i, per) in levels.iter_mut().enumerate() {
        for (j, x) in support.iter().enumerate() {
            if x[i] > 0 && !per.iter().any(|&(t, _)| t == x[i]) {
                per.push((x[i], j));
            }
        }
        per.sort_unstable();
    }

    let mut cur = vec![0u32; k];
    let mut budget = inst.m();
    loop {
        // (ratio, battlefield, strategy) ordering: highest ratio first, then
        // lowest battlefield, then lowest introducing strategy.
        let mut top: Option<(Rational, usize, usize, u32)> = None;
        for i in 0..k {
            for &(t, j) in &levels[i] {
                if t <= cur[i] {
                    continue;
                }
                let mut mass = Rational::zero();
                for (x, p) in support.iter().zip(s.probs()) {
                    if cur[i] < x[i] && x[i] <= t {
                        mass += p;
                    }
                }
                if mass.is_zero() {
                    continue;
                }
                let gain = mass * &weights[i];
                let cost = rat_u64(u64::from(t - cur[i]));
                let ratio = gain / cost;
                let better = match &top {
                    None => true,
                    Some((held, bi, bj, _)) => {
                        ratio > *held || (ratio == *held && (i, j) < (*bi, *bj))
                    }
                };
                if better {
                    top = Some((ratio, i, j, t));
                }
            }
        }
        let Some((_, i, _, t)) = top else {
            break;
        };
        let cost = t - cur[i];
        if cost > budget {
            break;
        }
        budget -= cost;
        cur[i] = t;
    }

    let total = rat_u64(inst.total_weight());
    let mut value = Rational::zero();
    for (x, p) in support.iter().zip(s.probs()) {
        let conceded = payoff1_rational(x, &cur, &weights);
        value += p * (&total - &conceded);
    }
    Ok((PureStrategy::discrete(cur), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bestresp::expected_best_response_dp;
    use crate::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(n: u32, m: u32, w: &[u64]) -> GameInstance {
        GameInstance::new(n, m, w.to_vec()).unwrap()
    }

    #[test]
    fn opt_bounds_values() {
        let g = inst(2, 2, &[1, 1]);
        assert_eq!(opt_bounds(&g, 1).unwrap(), rat(1));
        assert_eq!(opt_bounds(&g, 4).unwrap(), ratio(1, 4));
        assert!(matches!(opt_bounds(&g, 0), Err(Error::Malformed(_))));
    }

    #[test]
    fn pruning_floor_value() {
        assert_eq!(
            min_profile_probability(10, 2, &ratio(1, 2)).unwrap(),
            ratio(1, 80)
        );
        assert!(min_profile_probability(0, 2, &ratio(1, 2)).is_err());
        assert!(min_profile_probability(10, 2, &rat(0)).is_err());
    }

    #[test]
    fn profile_grid_single_support_is_trivial() {
        let grid = profile_grid(10, 1, &ratio(1, 2)).unwrap();
        assert_eq!(grid.len(), 1);
        let only = grid.iter().next().unwrap();
        assert_eq!(only.entries(), &[rat(1)]);
    }

    #[test]
    fn profile_grid_contains_uniform_pair() {
        let grid = profile_grid(10, 2, &ratio(1, 2)).unwrap();
        let uniform = Profile::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert!(grid.contains(&uniform));
        // Every profile sums to one exactly after renormalization.
        for p in &grid {
            assert_eq!(p.total(), rat(1));
        }
    }

    /// Renormalization collapses proportional tuples, so the grid grows with
    /// the logarithm of the total weight: one trivial profile plus one pair
    /// profile per feasible exponent gap.
    #[test]
    fn profile_grid_growth_is_logarithmic() {
        let eps = ratio(1, 2);
        let sizes: Vec<usize> = [10u64, 100, 10_000]
            .iter()
            .map(|&w| profile_grid(w, 2, &eps).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![12, 18, 29]);
    }

    #[test]
    fn greedy_is_knapsack_for_pure_support() {
        // Against a single pure strategy the greedy degenerates to the
        // ratio-ordered knapsack: it grabs the cheap 7-weight battlefield and
        // stops when the next pick no longer fits the remaining budget.
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let s = MixedStrategy::pure(PureStrategy::discrete(vec![2, 2, 1, 0]));
        let (y, value) = greedy_weak_adversary_expected(&g, &s).unwrap();
        assert_eq!(y.discrete_entries().unwrap(), vec![0, 0, 1, 0]);
        assert_eq!(value, rat(12));
        let (_, best) = expected_best_response_dp(&g, &s).unwrap();
        assert_eq!(best, rat(15));
        assert!(&best - &value <= rat_u64(g.max_weight()));
    }

    #[test]
    fn greedy_wins_zero_allocations_outright() {
        let g = inst(2, 2, &[3, 1]);
        let s = MixedStrategy::new(
            vec![
                PureStrategy::discrete(vec![0, 2]),
                PureStrategy::discrete(vec![2, 0]),
            ],
            vec![ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let (y, value) = greedy_weak_adversary_expected(&g, &s).unwrap();
        assert_eq!(y.discrete_entries().unwrap(), vec![2, 0]);
        assert_eq!(value, ratio(7, 2));
        let (_, best) = expected_best_response_dp(&g, &s).unwrap();
        assert_eq!(best, ratio(7, 2));
    }

    /// Seeded sweep: the greedy never beats the exact expected best response
    /// and never trails it by the largest weight or more.
    #[test]
    fn greedy_stays_within_max_weight_of_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let k = rng.gen_range(1..=3usize);
            let n = rng.gen_range(1..=5u32);
            let m = rng.gen_range(1..=5u32);
            let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=3u64)).collect();
            let g = inst(n, m, &weights);
            let c = rng.gen_range(1..=3usize);
            let mut support = Vec::new();
            for _ in 0..c {
                let mut left = n;
                let mut x = vec![0u32; k];
                for e in x.iter_mut() {
                    *e = rng.gen_range(0..=left);
                    left -= *e;
                }
                support.push(PureStrategy::discrete(x));
            }
            let nums: Vec<u64> = (0..c).map(|_| rng.gen_range(1..=4u64)).collect();
            let denom: u64 = nums.iter().sum();
            let probs: Vec<Rational> = nums
                .iter()
                .map(|&a| rat_u64(a) / rat_u64(denom))
                .collect();
            let s = MixedStrategy::new(support, probs).unwrap();
            let (y, value) = greedy_weak_adversary_expected(&g, &s).unwrap();
            y.validate(&g, g.m()).unwrap();
            let (_, best) = expected_best_response_dp(&g, &s).unwrap();
            assert!(value <= best, "greedy exceeded the exact optimum");
            assert!(
                &best - &value < rat_u64(g.max_weight()),
                "greedy {value} trails best {best} by at least w_max on {weights:?}"
            );
        }
    }
}
