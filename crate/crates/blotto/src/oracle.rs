//! Exhaustive oracles: exact answers by enumeration for small instances.
//!
//! These are the reference implementations the rest of the crate is validated
//! against. Every sweep is guarded by [`Caps`] and enumeration order is fixed,
//! so results are deterministic. Player 2's responses are enumerated through
//! the dominance reduction: against a fixed support, any response rounds down
//! per battlefield to the support's own troop levels without changing any
//! payoff.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bestresp;
use crate::core::{
    for_each_dominated_response, payoffs_u32, Caps, Error, GameInstance, MixedStrategy, Profile,
    PureStrategy, Result,
};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::profiles;
use crate::{rat_u64, Rational};

/// Iterator over all allocations of at most `budget` troops on `k`
/// battlefields, in lexicographic order.
pub struct PureEnumerator {
    budget: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for PureEnumerator {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        self.next = lex_successor(&current, self.budget);
        Some(current)
    }
}

fn lex_successor(v: &[u32], budget: u32) -> Option<Vec<u32>> {
    let total: u64 = v.iter().map(|&x| x as u64).sum();
    let mut suffix: u64 = 0;
    for i in (0..v.len()).rev() {
        // Increment position i and zero everything after it.
        if total - suffix + 1 <= budget as u64 {
            let mut w = v.to_vec();
            w[i] += 1;
            for entry in w.iter_mut().skip(i + 1) {
                *entry = 0;
            }
            return Some(w);
        }
        suffix += v[i] as u64;
    }
    None
}

/// All pure strategies with at most `budget` troops on `k` battlefields,
/// lexicographically ascending. There are `C(budget + k, k)` of them.
pub fn enumerate_pure(budget: u32, k: usize) -> PureEnumerator {
    PureEnumerator {
        budget,
        next: if k == 0 { None } else { Some(vec![0; k]) },
    }
}

/// Number of allocations yielded by [`enumerate_pure`]: `C(budget + k, k)`,
/// saturating at `u128::MAX`.
pub fn count_pure(budget: u32, k: usize) -> u128 {
    binomial(budget as u128 + k as u128, k as u128)
}

/// Binomial coefficient with saturation; exact while within range.
pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        match r.checked_mul(n - k + i) {
            Some(v) => r = v / i,
            None => return u128::MAX,
        }
    }
    r
}

/// The family of winning subsets of a support at level `u`: all sets
/// `W ⊆ {0..c-1}` such that some response of player 2 beats exactly the
/// support strategies outside `W` (leaves exactly `W` at payoff ≥ u).
pub fn winning_subsets(
    inst: &GameInstance,
    support: &[PureStrategy],
    u: u64,
    caps: &Caps,
) -> Result<BTreeSet<Vec<usize>>> {
    let allocs: Vec<Vec<u32>> = support
        .iter()
        .map(|p| {
            p.validate(inst, inst.n())?;
            p.discrete_entries()
        })
        .collect::<Result<_>>()?;
    let mut family = BTreeSet::new();
    for_each_dominated_response(&allocs, inst.k(), inst.m(), caps, |y| {
        let mut w = Vec::new();
        for (j, x) in allocs.iter().enumerate() {
            if payoffs_u32(x, y, inst.weights()).0 >= u {
                w.push(j);
            }
        }
        family.insert(w);
    })?;
    Ok(family)
}

/// One candidate from a support sweep.
#[derive(Debug, Clone)]
struct Candidate {
    p: Rational,
    support: Vec<usize>,
    rho: Vec<Rational>,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.p > b.p || (a.p == b.p && a.support < b.support)
}

fn merge(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(&x, &y) { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exact maxmin probability of securing level `u` with a c-strategy.
///
/// Sweeps every support of distinct pure strategies up to size `c` (exactly
/// the profile's length when a fixed profile is supplied), computes each
/// support's winning-subset family, and maximizes the guaranteed probability:
/// free profiles through the profile LP, fixed profiles by the best
/// assignment of the profile's entries to the support. Returns the optimum
/// `p*` and a witness strategy; ties prefer the lexicographically smallest
/// support.
pub fn exact_maxmin_up(
    inst: &GameInstance,
    c: usize,
    u: u64,
    profile: Option<&Profile>,
    caps: &Caps,
) -> Result<(Rational, MixedStrategy)> {
    if c == 0 {
        return Err(Error::Malformed("support bound c must be positive".into()));
    }
    if c > 6 {
        return Err(Error::CapExceeded {
            what: "support size for maxmin sweep",
            needed: c as u128,
            cap: 6,
        });
    }
    if let Some(pr) = profile {
        if pr.total() != Rational::one() {
            return Err(Error::Malformed("fixed profile must sum to 1".into()));
        }
        if pr.len() > c {
            return Err(Error::Malformed("fixed profile longer than support bound".into()));
        }
    }

    caps.check("pure strategy enumeration", count_pure(inst.n(), inst.k()), caps.max_supports)?;
    let strategies: Vec<Vec<u32>> = enumerate_pure(inst.n(), inst.k()).collect();
    let p_count = strategies.len();

    let sizes: Vec<usize> = match profile {
        Some(pr) => vec![pr.len()],
        None => (1..=c.min(p_count)).collect(),
    };
    let support_count: u128 = sizes
        .iter()
        .map(|&s| binomial(p_count as u128, s as u128))
        .fold(0u128, |acc, v| acc.saturating_add(v));
    caps.check("support enumeration", support_count, caps.max_supports)?;

    // Fixed profiles are evaluated in integer arithmetic over a common
    // denominator; distinct assignments of the multiset are all tried.
    let fixed: Option<(Vec<Vec<u64>>, Rational)> = profile.map(|pr| {
        let denom = pr
            .entries()
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let nums: Vec<u64> = pr
            .entries()
            .iter()
            .map(|e| {
                let scaled = e * Rational::from_integer(denom.clone());
                u64::try_from(scaled.to_integer()).expect("profile numerators fit u64")
            })
            .collect();
        let mut perms: BTreeSet<Vec<u64>> = BTreeSet::new();
        permute_distinct(&nums, &mut perms);
        (
            perms.into_iter().collect::<Vec<_>>(),
            Rational::from_integer(denom),
        )
    });

    // Fast path: one global response set with per-strategy win bitmasks.
    let resp_count = count_pure(inst.m(), inst.k());
    let global: Option<(usize, Vec<Vec<u64>>)> = if resp_count <= caps.max_responses as u128 {
        let responses: Vec<Vec<u32>> = enumerate_pure(inst.m(), inst.k()).collect();
        let words = (responses.len() + 63) / 64;
        let bits: Vec<Vec<u64>> = strategies
            .par_iter()
            .map(|x| {
                let mut row = vec![0u64; words];
                for (yi, y) in responses.iter().enumerate() {
                    if payoffs_u32(x, y, inst.weights()).0 >= u {
                        row[yi / 64] |= 1 << (yi % 64);
                    }
                }
                row
            })
            .collect();
        Some((responses.len(), bits))
    } else {
        None
    };

    let caps2 = caps.clone();
    let best: Option<Candidate> = (0..p_count)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<Candidate> = None;
            let mut memo: HashMap<(usize, u64), (Rational, Vec<Rational>)> = HashMap::new();
            let mut sup = Vec::new();
            for &s in &sizes {
                if s == 0 || first + s > p_count {
                    continue;
                }
                sup.clear();
                sup.push(first);
                let mut result = Ok(());
                combos(first + 1, p_count, s - 1, &mut sup, &mut |sup: &[usize]| {
                    if result.is_err() {
                        return;
                    }
                    let cand = evaluate_support(
                        inst,
                        &strategies,
                        sup,
                        u,
                        &fixed,
                        &global,
                        &mut memo,
                        &caps2,
                    );
                    match cand {
                        Ok(c) => {
                            let c = Some(c);
                            local = merge(std::mem::take(&mut local), c);
                        }
                        Err(e) => result = Err(e),
                    }
                });
                result?;
            }
            Ok(local)
        })
        .try_reduce(|| None, |a, b| Ok(merge(a, b)))?;

    let best = best.ok_or_else(|| {
        Error::Precondition("no support of the requested size exists".into())
    })?;
    let mut support = Vec::new();
    let mut probs = Vec::new();
    for (idx, rho) in best.support.iter().zip(&best.rho) {
        if rho.is_positive() {
            support.push(PureStrategy::discrete(strategies[*idx].clone()));
            probs.push(rho.clone());
        }
    }
    let strategy = if support.is_empty() {
        MixedStrategy::pure(PureStrategy::discrete(strategies[best.support[0]].clone()))
    } else {
        MixedStrategy::new(support, probs)?
    };
    Ok((best.p, strategy))
}

/// Calls `visit` for every ascending index combination of the given size
/// drawn from `lo..hi`, appended to the current prefix in `buf`.
fn combos<F: FnMut(&[usize])>(lo: usize, hi: usize, size: usize, buf: &mut Vec<usize>, visit: &mut F) {
    if size == 0 {
        visit(buf);
        return;
    }
    for i in lo..=hi.saturating_sub(size) {
        buf.push(i);
        combos(i + 1, hi, size - 1, buf, visit);
        buf.pop();
    }
}

/// All distinct permutations of a multiset.
fn permute_distinct(items: &[u64], out: &mut BTreeSet<Vec<u64>>) {
    let mut v = items.to_vec();
    v.sort_unstable();
    loop {
        out.insert(v.clone());
        // Next lexicographic permutation.
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
    }
}

#[allow(clippy::too_many_arguments)]
fn evaluate_support(
    inst: &GameInstance,
    strategies: &[Vec<u32>],
    sup: &[usize],
    u: u64,
    fixed: &Option<(Vec<Vec<u64>>, Rational)>,
    global: &Option<(usize, Vec<Vec<u64>>)>,
    memo: &mut HashMap<(usize, u64), (Rational, Vec<Rational>)>,
    caps: &Caps,
) -> Result<Candidate> {
    let s = sup.len();
    match fixed {
        Some((perms, denom)) => {
            let mut best_num = 0u64;
            let mut best_perm = &perms[0];
            for perm in perms {
                let min_num = match global {
                    Some((resp_len, bits)) => {
                        let mut min_num = u64::MAX;
                        for y in 0..*resp_len {
                            let mut sum = 0u64;
                            for (j, &si) in sup.iter().enumerate() {
                                if bits[si][y / 64] >> (y % 64) & 1 == 1 {
                                    sum += perm[j];
                                }
                            }
                            if sum < min_num {
                                min_num = sum;
                                if min_num == 0 {
                                    break;
                                }
                            }
                        }
                        min_num
                    }
                    None => {
                        let allocs: Vec<Vec<u32>> =
                            sup.iter().map(|&i| strategies[i].clone()).collect();
                        let mut min_num = u64::MAX;
                        for_each_dominated_response(&allocs, inst.k(), inst.m(), caps, |y| {
                            let mut sum = 0u64;
                            for (j, x) in allocs.iter().enumerate() {
                                if payoffs_u32(x, y, inst.weights()).0 >= u {
                                    sum += perm[j];
                                }
                            }
                            min_num = min_num.min(sum);
                        })?;
                        min_num
                    }
                };
                if min_num > best_num {
                    best_num = min_num;
                    best_perm = perm;
                }
            }
            let rho: Vec<Rational> = best_perm
                .iter()
                .map(|&n| rat_u64(n) / denom.clone())
                .collect();
            Ok(Candidate {
                p: rat_u64(best_num) / denom.clone(),
                support: sup.to_vec(),
                rho,
            })
        }
        None => {
            // Free profile: the guaranteed probability depends only on the
            // family of winning subsets, encoded as a bitset over masks.
            let mut key: u64 = 0;
            let mut dead = false;
            match global {
                Some((resp_len, bits)) => {
                    for y in 0..*resp_len {
                        let mut mask: u32 = 0;
                        for (j, &si) in sup.iter().enumerate() {
                            if bits[si][y / 64] >> (y % 64) & 1 == 1 {
                                mask |= 1 << j;
                            }
                        }
                        if mask == 0 {
                            dead = true;
                            break;
                        }
                        key |= 1u64 << mask;
                    }
                }
                None => {
                    let allocs: Vec<Vec<u32>> =
                        sup.iter().map(|&i| strategies[i].clone()).collect();
                    for_each_dominated_response(&allocs, inst.k(), inst.m(), caps, |y| {
                        let mut mask: u32 = 0;
                        for (j, x) in allocs.iter().enumerate() {
                            if payoffs_u32(x, y, inst.weights()).0 >= u {
                                mask |= 1 << j;
                            }
                        }
                        if mask == 0 {
                            dead = true;
                        } else {
                            key |= 1u64 << mask;
                        }
                    })?;
                }
            }
            if dead {
                // Some response beats the entire support: p = 0.
                return Ok(Candidate {
                    p: Rational::zero(),
                    support: sup.to_vec(),
                    rho: std::iter::once(Rational::one())
                        .chain(std::iter::repeat(Rational::zero()))
                        .take(s)
                        .collect(),
                });
            }
            let (p, rho) = match memo.get(&(s, key)) {
                Some(hit) => hit.clone(),
                None => {
                    let mut family = BTreeSet::new();
                    for mask in 1u64..(1 << s) {
                        if key >> mask & 1 == 1 {
                            let subset: Vec<usize> =
                                (0..s).filter(|j| mask >> j & 1 == 1).collect();
                            family.insert(subset);
                        }
                    }
                    let solved = profiles::solve_profile_lp(&family, s)?;
                    memo.insert((s, key), (solved.1.clone(), solved.0.clone()));
                    (solved.1, solved.0)
                }
            };
            Ok(Candidate {
                p,
                support: sup.to_vec(),
                rho,
            })
        }
    }
}

/// Exact pure maximin: the largest payoff player 1 can guarantee with one
/// pure strategy, `max_x (Σw − u2*(x))`, with the best response computed by
/// the knapsack program. Ties prefer the lexicographically smallest strategy.
pub fn exact_pure_maximin(inst: &GameInstance, caps: &Caps) -> Result<(u64, PureStrategy)> {
    caps.check("pure strategy enumeration", count_pure(inst.n(), inst.k()), caps.max_supports)?;
    let strategies: Vec<Vec<u32>> = enumerate_pure(inst.n(), inst.k()).collect();
    let total = inst.total_weight();
    let values: Vec<u64> = strategies
        .par_iter()
        .map(|x| {
            let (_, v2) = bestresp::pure_best_response_dp(inst, &PureStrategy::discrete(x.clone()))?;
            Ok(total - v2)
        })
        .collect::<Result<_>>()?;
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok((values[best], PureStrategy::discrete(strategies[best].clone())))
}

/// Exact value of the expected-payoff matrix game: the best expected payoff
/// player 1 can guarantee with an arbitrary mixed strategy, via the standard
/// zero-sum LP over the full payoff matrix.
pub fn exact_expected_maximin(inst: &GameInstance, caps: &Caps) -> Result<Rational> {
    caps.check("pure strategy enumeration", count_pure(inst.n(), inst.k()), caps.max_supports)?;
    caps.check("response enumeration", count_pure(inst.m(), inst.k()), caps.max_responses)?;
    let xs: Vec<Vec<u32>> = enumerate_pure(inst.n(), inst.k()).collect();
    let ys: Vec<Vec<u32>> = enumerate_pure(inst.m(), inst.k()).collect();

    // Variables: one probability per pure strategy of player 1, plus the value v.
    let nv = xs.len() + 1;
    let v = xs.len();
    let mut lp = LinearProgram::new(nv);
    lp.objective[v] = Rational::one();
    for y in &ys {
        let mut coeffs = vec![Rational::zero(); nv];
        for (i, x) in xs.iter().enumerate() {
            coeffs[i] = rat_u64(payoffs_u32(x, y, inst.weights()).0);
        }
        coeffs[v] = -Rational::one();
        lp.constrain(coeffs, Relation::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); nv];
    ones[v] = Rational::zero();
    lp.constrain(ones, Relation::Eq, Rational::one());

    let out = lp::solve(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Internal("matrix game LP must have an optimum".into()));
    }
    out.objective_value
        .ok_or_else(|| Error::Internal("optimal LP without value".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn inst(n: u32, m: u32, w: &[u64]) -> GameInstance {
        GameInstance::new(n, m, w.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order_and_count() {
        let all: Vec<Vec<u32>> = enumerate_pure(1, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(count_pure(1, 2), 3);

        let all: Vec<Vec<u32>> = enumerate_pure(2, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0]
            ]
        );
        assert_eq!(count_pure(2, 2), 6);
        assert_eq!(count_pure(4, 4) as usize, enumerate_pure(4, 4).count());
        // Lexicographic: each item is strictly larger than its predecessor.
        let all: Vec<Vec<u32>> = enumerate_pure(3, 3).collect();
        for pair in all.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn winning_subsets_example() {
        let g = inst(2, 2, &[1, 1]);
        let support = vec![
            PureStrategy::discrete(vec![2, 0]),
            PureStrategy::discrete(vec![0, 2]),
        ];
        let family = winning_subsets(&g, &support, 1, &Caps::default()).unwrap();
        let expect: BTreeSet<Vec<usize>> =
            [vec![0], vec![1], vec![0, 1]].into_iter().collect();
        assert_eq!(family, expect);
    }

    #[test]
    fn maxmin_free_profile_small() {
        let g = inst(2, 2, &[1, 1]);
        // One pure strategy can always be matched: p* = 0 at c = 1.
        let (p, _) = exact_maxmin_up(&g, 1, 1, None, &Caps::default()).unwrap();
        assert_eq!(p, Rational::zero());
        // Splitting over the two stacked strategies guarantees 1/2.
        let (p, s) = exact_maxmin_up(&g, 2, 1, None, &Caps::default()).unwrap();
        assert_eq!(p, ratio(1, 2));
        assert_eq!(s.support_size(), 2);
        let check =
            crate::core::guaranteed_probability(&s, 1, &g, &Caps::default()).unwrap();
        assert_eq!(check, p);
    }

    #[test]
    fn maxmin_fixed_vs_free() {
        let g = inst(2, 2, &[1, 1]);
        let uniform = Profile::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let (p_fixed, _) = exact_maxmin_up(&g, 2, 1, Some(&uniform), &Caps::default()).unwrap();
        let (p_free, _) = exact_maxmin_up(&g, 2, 1, None, &Caps::default()).unwrap();
        assert_eq!(p_fixed, ratio(1, 2));
        assert!(p_free >= p_fixed);
    }

    #[test]
    fn pure_maximin_table() {
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let (u, x) = exact_pure_maximin(&g, &Caps::default()).unwrap();
        assert_eq!(u, 15);
        let (_, v2) = bestresp::pure_best_response_dp(&g, &x).unwrap();
        assert_eq!(g.total_weight() - v2, 15);
    }

    #[test]
    fn expected_maximin_two_battlefields() {
        // The 6×6 matrix game of (2,2,(1,1)) has value 2/3: the uniform mix
        // over {(2,0),(0,2),(1,1)} earns at least 2/3 against every response
        // (exactly 2/3 against (2,0),(0,2),(1,1)), and player 2's uniform mix
        // over the same three responses holds every pure strategy to 2/3.
        let g = inst(2, 2, &[1, 1]);
        let v = exact_expected_maximin(&g, &Caps::default()).unwrap();
        assert_eq!(v, ratio(2, 3));
    }

    #[test]
    fn expected_maximin_degenerate() {
        assert_eq!(
            exact_expected_maximin(&inst(1, 0, &[1]), &Caps::default()).unwrap(),
            Rational::one()
        );
        assert_eq!(
            exact_expected_maximin(&inst(0, 0, &[1]), &Caps::default()).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn winning_subsets_extreme_levels() {
        let g = inst(2, 2, &[1, 1]);
        let support = vec![
            PureStrategy::discrete(vec![2, 0]),
            PureStrategy::discrete(vec![0, 2]),
        ];
        // Utility 0 is always achieved: the only winning subset is the full set.
        let family = winning_subsets(&g, &support, 0, &Caps::default()).unwrap();
        assert_eq!(family, [vec![0, 1]].into_iter().collect());
        // An unachievable utility leaves only the empty subset.
        let family = winning_subsets(&g, &support, 3, &Caps::default()).unwrap();
        assert_eq!(family, [vec![]].into_iter().collect());
    }

    #[test]
    fn pure_maximin_degenerate_cases() {
        // Opponent with no troops: ties need y ≥ x ≥ 1, so spreading wins all.
        let (u, x) = exact_pure_maximin(&inst(2, 0, &[1, 1]), &Caps::default()).unwrap();
        assert_eq!(u, 2);
        assert_eq!(x.discrete_entries().unwrap(), vec![1, 1]);
        // n ≤ m: player 2 can match any pure strategy.
        let (u, _) = exact_pure_maximin(&inst(3, 3, &[4, 2, 1]), &Caps::default()).unwrap();
        assert_eq!(u, 0);
    }

    #[test]
    fn maxmin_pure_level_has_probability_one() {
        for (n, m, w) in [(5u32, 2u32, vec![10u64, 8, 7, 5]), (3, 2, vec![2, 1])] {
            let g = inst(n, m, &w);
            let caps = Caps::default();
            let (ustar, _) = exact_pure_maximin(&g, &caps).unwrap();
            let (p, _) = exact_maxmin_up(&g, 1, ustar, None, &caps).unwrap();
            assert_eq!(p, Rational::one());
        }
    }

    #[test]
    fn maxmin_monotone_in_u_and_c() {
        let g = inst(3, 3, &[2, 1, 1]);
        let caps = Caps::default();
        let mut prev = Rational::one();
        for u in [1u64, 2, 3, 4] {
            let (p, _) = exact_maxmin_up(&g, 2, u, None, &caps).unwrap();
            assert!(p <= prev);
            prev = p;
        }
        let mut prev = Rational::zero();
        for c in 1..=3usize {
            let (p, _) = exact_maxmin_up(&g, c, 2, None, &caps).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn maxmin_equal_budgets_capped_at_half() {
        // With equal budgets any 2-strategy is matched half the time.
        let g = inst(3, 3, &[2, 1, 1]);
        let (p, _) = exact_maxmin_up(&g, 2, 1, None, &Caps::default()).unwrap();
        assert!(p <= ratio(1, 2));
        assert!(p > Rational::zero());
    }

    #[test]
    fn support_cap_is_enforced() {
        let g = inst(10, 10, &[1, 1, 1, 1]);
        let mut caps = Caps::default();
        caps.max_supports = 10;
        assert!(matches!(
            exact_pure_maximin(&g, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
