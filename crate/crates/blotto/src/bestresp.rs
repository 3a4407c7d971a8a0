//! Polynomial best-response programs for player 2.
//!
//! Against a known pure strategy, best response is a knapsack: winning
//! battlefield `i` costs exactly `xᵢ` troops (ties favor player 2). Against a
//! mixed strategy the per-battlefield troop levels worth playing are the
//! support's own levels, and against a pair of pure strategies a reachability
//! program tracks both accumulated payoffs at once, answering whether player 2
//! can keep player 1 below a payoff cap against both strategies
//! simultaneously.

use num_traits::Zero;

use crate::core::{payoffs_u32, Caps, GameInstance, MixedStrategy, PureStrategy, Result};
use crate::{rat_u64, Rational};

/// Player 2's exact best response to a pure strategy.
///
/// Returns the response and its payoff `u2* = max_y u2(x, y)`. The witness
/// matches `x` on every battlefield it wins and plays zero elsewhere; among
/// optimal responses it is the deterministic one that only wins battlefields
/// that strictly improve the knapsack value.
pub fn pure_best_response_dp(inst: &GameInstance, x: &PureStrategy) -> Result<(PureStrategy, u64)> {
    x.validate(inst, inst.n())?;
    let xv = x.discrete_entries()?;
    let k = inst.k();
    let m = inst.m() as usize;
    let w = inst.weights();

    // value[i][b]: best weight P2 can take from the first i battlefields with b troops.
    let mut value = vec![vec![0u64; m + 1]; k + 1];
    for i in 0..k {
        let cost = xv[i] as usize;
        for b in 0..=m {
            let skip = value[i][b];
            let take = if b >= cost { value[i][b - cost] + w[i] } else { 0 };
            value[i + 1][b] = skip.max(take);
        }
    }
    let mut y = vec![0u32; k];
    let mut b = m;
    for i in (0..k).rev() {
        let cost = xv[i] as usize;
        if b >= cost && value[i + 1][b] > value[i][b] {
            y[i] = xv[i];
            b -= cost;
        }
    }
    let response = PureStrategy::discrete(y.clone());
    let best = value[k][m];
    debug_assert_eq!(payoffs_u32(&xv, &y, w).1, best);
    Ok((response, best))
}

/// Player 2's exact best response to a mixed strategy in expectation.
///
/// On battlefield `i` only the levels `{0} ∪ {xᵢʲ}` of the support matter;
/// the expected gain of a level is the probability-weighted weight collected
/// from support strategies it ties or beats. Returns the response and its
/// expected payoff `max_y Σⱼ pⱼ·u2(xʲ, y)`.
pub fn expected_best_response_dp(
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
    let m = inst.m() as usize;

    // Candidate levels and their expected gains, per battlefield.
    let mut levels: Vec<Vec<(u32, Rational)>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut vals: Vec<u32> = support.iter().map(|x| x[i]).collect();
        vals.push(0);
        vals.sort_unstable();
        vals.dedup();
        vals.retain(|&v| v as usize <= m);
        let opts = vals
            .into_iter()
            .map(|v| {
                let mut gain = Rational::zero();
                for (x, p) in support.iter().zip(s.probs()) {
                    if v >= x[i] {
                        gain += p * rat_u64(inst.weights()[i]);
                    }
                }
                (v, gain)
            })
            .collect();
        levels.push(opts);
    }

    let mut value = vec![vec![Rational::zero(); m + 1]; k + 1];
    for i in 0..k {
        for b in 0..=m {
            let mut best = None::<Rational>;
            for (v, gain) in &levels[i] {
                if *v as usize > b {
                    break;
                }
                let cand = &value[i][b - *v as usize] + gain;
                if best.as_ref().map_or(true, |c| &cand > c) {
                    best = Some(cand);
                }
            }
            value[i + 1][b] = best.expect("level 0 is always available");
        }
    }
    // Recover the cheapest optimal level per battlefield, back to front.
    let mut y = vec![0u32; k];
    let mut b = m;
    for i in (0..k).rev() {
        for (v, gain) in &levels[i] {
            if *v as usize > b {
                break;
            }
            if &value[i][b - *v as usize] + gain == value[i + 1][b] {
                y[i] = *v;
                b -= *v as usize;
                break;
            }
        }
    }
    let best = value[k][m].clone();
    Ok((PureStrategy::discrete(y), best))
}

/// Can player 2 keep player 1 at payoff at most `cap1` against `x` and at
/// most `cap2` against `x'` with one response?
///
/// Runs a forward-reachability program over (battlefields processed, troops
/// spent, payoff conceded to `x`, payoff conceded to `x'`). Per battlefield
/// only the levels `{0, xᵢ, x'ᵢ}` need considering: rounding any response
/// down to the largest such level preserves both concessions and frees
/// budget. Returns the verdict and, when preventable, a deterministic
/// witness response.
pub fn two_strategy_prevent_dp(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
    cap1: u64,
    cap2: u64,
) -> Result<(bool, Option<PureStrategy>)> {
    two_strategy_prevent_dp_capped(x, xp, inst, cap1, cap2, &Caps::default())
}

/// [`two_strategy_prevent_dp`] with an explicit state-count cap.
pub fn two_strategy_prevent_dp_capped(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
    cap1: u64,
    cap2: u64,
    caps: &Caps,
) -> Result<(bool, Option<PureStrategy>)> {
    x.validate(inst, inst.n())?;
    xp.validate(inst, inst.n())?;
    let xv = x.discrete_entries()?;
    let xpv = xp.discrete_entries()?;
    let k = inst.k();
    let m = inst.m() as usize;
    let w = inst.weights();
    let total = inst.total_weight();
    let u1 = cap1.min(total) as usize;
    let u2 = cap2.min(total) as usize;

    let states_per_level = (m as u128 + 1) * (u1 as u128 + 1) * (u2 as u128 + 1);
    caps.check(
        "prevention DP states",
        states_per_level * (k as u128 + 1),
        caps.max_supports,
    )?;

    let stride_a = u2 + 1;
    let stride_t = (u1 + 1) * stride_a;
    let size = (m + 1) * stride_t;
    let idx = |t: usize, a: usize, b: usize| t * stride_t + a * stride_a + b;

    // parents[j][state]: the level of y_j that reached this state, if any.
    let mut parents: Vec<Vec<Option<u32>>> = Vec::with_capacity(k);
    let mut reach = vec![false; size];
    reach[idx(0, 0, 0)] = true;

    for j in 0..k {
        let mut next = vec![false; size];
        let mut parent = vec![None::<u32>; size];
        let mut options = vec![0u32, xv[j], xpv[j]];
        options.sort_unstable();
        options.dedup();
        options.retain(|&v| v as usize <= m);
        for t in 0..=m {
            for a in 0..=u1 {
                for b in 0..=u2 {
                    if !reach[idx(t, a, b)] {
                        continue;
                    }
                    for &yj in &options {
                        let nt = t + yj as usize;
                        if nt > m {
                            break;
                        }
                        let g1 = if xv[j] > yj { w[j] as usize } else { 0 };
                        let g2 = if xpv[j] > yj { w[j] as usize } else { 0 };
                        let (na, nb) = (a + g1, b + g2);
                        if na > u1 || nb > u2 {
                            continue;
                        }
                        let ni = idx(nt, na, nb);
                        if !next[ni] {
                            next[ni] = true;
                            parent[ni] = Some(yj);
                        }
                    }
                }
            }
        }
        parents.push(parent);
        reach = next;
    }

    // Any terminal state within both caps certifies prevention; take the
    // first in scan order for a deterministic witness.
    let mut terminal = None;
    'scan: for t in 0..=m {
        for a in 0..=u1 {
            for b in 0..=u2 {
                if reach[idx(t, a, b)] {
                    terminal = Some((t, a, b));
                    break 'scan;
                }
            }
        }
    }
    let (mut t, mut a, mut b) = match terminal {
        Some(s) => s,
        None => return Ok((false, None)),
    };
    let mut y = vec![0u32; k];
    for j in (0..k).rev() {
        let yj = parents[j][idx(t, a, b)].expect("reachable state has a parent");
        y[j] = yj;
        t -= yj as usize;
        if xv[j] > yj {
            a -= w[j] as usize;
        }
        if xpv[j] > yj {
            b -= w[j] as usize;
        }
    }
    Ok((true, Some(PureStrategy::discrete(y))))
}

/// Largest payoff player 1 secures with the better of `x` and `x'` revealed:
/// `Σw − max_y min(u2(x,y), u2(x',y))`, the certified level of the pair when
/// both strategies are played with probability 1/2 — reaching it with the
/// revealed pair means at least one of the two wins that much against every
/// response. Computed by bisecting the prevention program.
pub fn certified_pair_level(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
    caps: &Caps,
) -> Result<u64> {
    let total = inst.total_weight();
    // Find the largest g such that P2 can secure u2 ≥ g against both, i.e.
    // concede at most total − g to each. Monotone in g, so bisect.
    let (mut lo, mut hi) = (0u64, total); // lo always achievable: g = 0.
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        let (ok, _) =
            two_strategy_prevent_dp_capped(x, xp, inst, total - mid, total - mid, caps)?;
        if ok {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(total - lo)
}
