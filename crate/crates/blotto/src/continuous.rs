//! Continuous-variant machinery: cover sets, critical tuples, the
//! pure-strategy feasibility program, the uniform-weight two-strategy solver,
//! the orientation-guess search for general weights, and the halving fallback
//! construction.
//!
//! In the continuous variant both players split their budgets into arbitrary
//! non-negative rational amounts, and ties still favor the responder. A pure
//! strategy `x` therefore guarantees level `u` exactly when every *cover set*
//! `S` — a set of battlefields whose complement weighs less than `u` — costs
//! the responder strictly more than `m` to win outright, i.e. `Σ_{i∈S} xᵢ >
//! m`. A pair `(x, x′)` played with probability one half each guarantees `u`
//! with probability at least one half exactly when every [`CriticalTuple`]
//! costs the responder strictly more than `m` to realize.
//!
//! Cover-set conditions are monotone: shrinking a qualifying set only lowers
//! its cost while keeping it qualifying, so all enumeration here runs over
//! *minimal* qualifying cover sets (an antichain), both when building
//! constraint rows and when verifying witnesses. Strict rows are handled by
//! the margin transform of [`crate::lp`]; every feasibility answer reports
//! the achieved margin so callers can see how tight the verdict is.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::approx::delta_uniform;
use crate::core::{
    group_by_weight, Caps, Error, GameInstance, MixedStrategy, PureStrategy, Result,
};
use crate::lp::{solve, LinearProgram, LpStatus, Relation};
use crate::{rat_u64, ratio, Rational};

/// Per-battlefield orientation between the two pure strategies of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// The first strategy allocates at least as much as the second.
    Ge,
    /// The first strategy allocates at most as much as the second.
    Le,
}

/// An orientation guess: one [`Comparison`] per battlefield, fixing which of
/// the two pure strategies of a pair is the larger one everywhere. Within the
/// region described by a guess, the pointwise maximum of the pair is linear,
/// which turns the critical-tuple conditions into linear rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guess {
    /// Per-battlefield comparison, indexed like the instance weights.
    pub comparisons: Vec<Comparison>,
}

impl Guess {
    /// Builds a guess from one comparison per battlefield.
    pub fn new(comparisons: Vec<Comparison>) -> Self {
        Guess { comparisons }
    }

    /// Number of battlefields the guess covers.
    pub fn len(&self) -> usize {
        self.comparisons.len()
    }

    /// True when the guess covers no battlefields.
    pub fn is_empty(&self) -> bool {
        self.comparisons.is_empty()
    }
}

/// A certificate that some response of cost at most `m` beats both strategies
/// of a pair at the target level: the responder matches the first strategy on
/// `l1`, the second on `l2`, and the larger allocation on `l12`. The three
/// sets are disjoint, and the weight left uncovered on either side stays
/// below the target, so whichever strategy the pair plays falls short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalTuple {
    /// Battlefields where the response matches the first strategy only.
    pub l1: Vec<usize>,
    /// Battlefields where the response matches the second strategy only.
    pub l2: Vec<usize>,
    /// Battlefields where the response matches the larger of the two.
    pub l12: Vec<usize>,
}

impl CriticalTuple {
    /// Splits a pair of cover-set masks into the disjoint tuple parts.
    fn from_masks(s1: u32, s2: u32, k: usize) -> Self {
        let bits = |mask: u32| (0..k).filter(|i| mask >> i & 1 == 1).collect();
        CriticalTuple {
            l1: bits(s1 & !s2),
            l2: bits(s2 & !s1),
            l12: bits(s1 & s2),
        }
    }
}

/// Outcome of a strict feasibility solve: the verdict, an optional witness,
/// and the margin by which the witness clears the adversarial rows. The
/// margin is `Some(0)` on a negative verdict (no point clears the rows by any
/// positive amount) and `None` when the level imposes no adversarial rows at
/// all, so the question is vacuous.
#[derive(Debug, Clone)]
pub struct Feasibility<W> {
    /// Whether a strictly feasible witness was found.
    pub ok: bool,
    /// The witness, present exactly when `ok`.
    pub witness: Option<W>,
    /// Margin by which the witness clears every adversarial row.
    pub margin: Option<Rational>,
}

/// Rejects instances with more battlefields than the enumeration cap allows.
fn check_k(inst: &GameInstance, caps: &Caps) -> Result<()> {
    if inst.k() > caps.max_continuous_k {
        return Err(Error::CapExceeded {
            what: "continuous battlefield count",
            needed: inst.k() as u128,
            cap: caps.max_continuous_k as u128,
        });
    }
    Ok(())
}

/// Subset sums of `weights`, indexed by bitmask.
fn subset_sums(weights: &[Rational]) -> Vec<Rational> {
    let k = weights.len();
    let mut sums = vec![Rational::zero(); 1usize << k];
    for mask in 1..(1usize << k) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &weights[low];
    }
    sums
}

/// Minimal qualifying cover sets for level `u`: bitmasks whose complement
/// weighs less than `u`, minimal under inclusion. Empty exactly when `u ≤ 0`,
/// since then no set qualifies; for `u` above the total weight the empty set
/// qualifies and is the unique minimal one.
fn minimal_cover_sets(weights: &[Rational], u: &Rational) -> Vec<u32> {
    if *u <= Rational::zero() {
        return Vec::new();
    }
    let k = weights.len();
    let sums = subset_sums(weights);
    let total = sums[(1usize << k) - 1].clone();
    let mut minimal = Vec::new();
    for mask in 0..(1usize << k) {
        let outside = &total - &sums[mask];
        if outside >= *u {
            continue;
        }
        let shrinkable = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .any(|i| &outside + &weights[i] < *u);
        if !shrinkable {
            minimal.push(mask as u32);
        }
    }
    minimal
}

/// Cost for a responder to win cover set `s1` against `x` and `s2` against
/// `x′` simultaneously. Ties favor the responder, so matching an allocation
/// (the larger one on the overlap) is enough to win the battlefield.
fn joint_cover_cost(s1: u32, s2: u32, x: &[Rational], xp: &[Rational]) -> Rational {
    let mut cost = Rational::zero();
    for i in 0..x.len() {
        let in1 = s1 >> i & 1 == 1;
        let in2 = s2 >> i & 1 == 1;
        if in1 && in2 {
            cost += if x[i] >= xp[i] { &x[i] } else { &xp[i] };
        } else if in1 {
            cost += &x[i];
        } else if in2 {
            cost += &xp[i];
        }
    }
    cost
}

/// Scans all pairs of minimal cover sets and returns the pair whose joint
/// cost has the least slack above `m`, or `None` when no cover set qualifies.
/// Ties keep the first pair in ascending mask order.
fn worst_cover_pair(
    weights: &[Rational],
    m: u32,
    x: &[Rational],
    xp: &[Rational],
    u: &Rational,
    caps: &Caps,
) -> Result<Option<(u32, u32, Rational)>> {
    let min_sets = minimal_cover_sets(weights, u);
    if min_sets.is_empty() {
        return Ok(None);
    }
    let pairs = (min_sets.len() as u128) * (min_sets.len() as u128);
    caps.check("cover-set pairs", pairs, caps.max_candidates)?;
    let m_rat = rat_u64(u64::from(m));
    let mut worst: Option<(u32, u32, Rational)> = None;
    for &s1 in &min_sets {
        for &s2 in &min_sets {
            let slack = joint_cover_cost(s1, s2, x, xp) - &m_rat;
            if worst.as_ref().map_or(true, |(_, _, best)| slack < *best) {
                worst = Some((s1, s2, slack));
            }
        }
    }
    Ok(worst)
}

/// Decides whether a single continuous strategy can guarantee level `u`
/// against every response, and returns a strictly feasible witness when so.
///
/// Solves the feasibility program `Σxᵢ ≤ n`, `x ≥ 0`, and `Σ_{i∈S} xᵢ > m`
/// for every minimal qualifying cover set `S`, maximizing the common slack of
/// the strict rows. A returned witness is re-checked by substitution over
/// every qualifying cover set. `margin` reports the optimal slack: positive
/// when feasible, zero when the closed relaxation is the best possible, and
/// `None` when no set qualifies (`u = 0`), where the all-zero strategy
/// suffices.
pub fn pure_feasible(inst: &GameInstance, u: u64) -> Result<Feasibility<PureStrategy>> {
    let caps = Caps::from_env()?;
    check_k(inst, &caps)?;
    let k = inst.k();
    let level = rat_u64(u);
    let weights = inst.rational_weights();
    let min_sets = minimal_cover_sets(&weights, &level);
    if min_sets.is_empty() {
        let zeros = PureStrategy::continuous(vec![Rational::zero(); k])?;
        return Ok(Feasibility {
            ok: true,
            witness: Some(zeros),
            margin: None,
        });
    }
    let mut lp = LinearProgram::new(k);
    lp.constrain(
        vec![Rational::one(); k],
        Relation::Le,
        rat_u64(u64::from(inst.n())),
    );
    let m_rat = rat_u64(u64::from(inst.m()));
    for &mask in &min_sets {
        let coeffs = (0..k)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        lp.constrain(coeffs, Relation::Gt, m_rat.clone());
    }
    let outcome = solve(&lp)?;
    if outcome.status != LpStatus::Optimal {
        return Ok(Feasibility {
            ok: false,
            witness: None,
            margin: Some(Rational::zero()),
        });
    }
    let solution = outcome
        .solution
        .ok_or_else(|| Error::Internal("feasible cover program without witness".into()))?;
    // Substitute the witness back into every qualifying cover-set row, not
    // just the minimal ones that formed the program.
    let spent = subset_sums(&solution);
    let wsums = subset_sums(&weights);
    let total = wsums[(1usize << k) - 1].clone();
    for mask in 0..(1usize << k) {
        if &total - &wsums[mask] < level && spent[mask] <= m_rat {
            return Err(Error::Internal("pure witness fails a cover-set row".into()));
        }
    }
    let witness = PureStrategy::continuous(solution)?;
    witness.validate(inst, inst.n())?;
    Ok(Feasibility {
        ok: true,
        witness: Some(witness),
        margin: outcome.strict_margin,
    })
}

/// Checks whether the pair `(x, x′)`, played with probability one half each,
/// guarantees level `u` with probability at least one half against every
/// response. On failure returns a violating critical tuple — the recipe for a
/// response of cost at most `m` that beats both strategies — picking the
/// tuple with the smallest cost slack.
pub fn verify_2strategy(
    inst: &GameInstance,
    x: &PureStrategy,
    xp: &PureStrategy,
    u: &Rational,
) -> Result<(bool, Option<CriticalTuple>)> {
    let caps = Caps::from_env()?;
    check_k(inst, &caps)?;
    x.validate(inst, inst.n())?;
    xp.validate(inst, inst.n())?;
    let weights = inst.rational_weights();
    match worst_cover_pair(&weights, inst.m(), x.entries(), xp.entries(), u, &caps)? {
        None => Ok((true, None)),
        Some((_, _, slack)) if slack > Rational::zero() => Ok((true, None)),
        Some((s1, s2, _)) => Ok((false, Some(CriticalTuple::from_masks(s1, s2, inst.k())))),
    }
}

/// Strict feasibility program for an oriented pair: budget rows for both
/// strategies, the orientation rows of `guess`, and one strict row per pair
/// of minimal cover sets, with overlap battlefields resolved to the larger
/// side named by the guess. Rows are 0/1 vectors, so they are deduplicated by
/// their index masks before the solve.
fn oriented_pair_program(
    n: u32,
    m: u32,
    weights: &[Rational],
    level: &Rational,
    guess: &Guess,
    caps: &Caps,
) -> Result<Feasibility<(Vec<Rational>, Vec<Rational>)>> {
    let k = weights.len();
    if guess.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: guess.len(),
        });
    }
    let min_sets = minimal_cover_sets(weights, level);
    if min_sets.is_empty() {
        return Ok(Feasibility {
            ok: true,
            witness: Some((vec![Rational::zero(); k], vec![Rational::zero(); k])),
            margin: None,
        });
    }
    let pairs = (min_sets.len() as u128) * (min_sets.len() as u128);
    caps.check("cover-set pairs", pairs, caps.max_candidates)?;
    let mut rows: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &s1 in &min_sets {
        for &s2 in &min_sets {
            let mut xmask = 0u32;
            let mut xpmask = 0u32;
            for i in 0..k {
                let in1 = s1 >> i & 1 == 1;
                let in2 = s2 >> i & 1 == 1;
                if in1 && in2 {
                    match guess.comparisons[i] {
                        Comparison::Ge => xmask |= 1 << i,
                        Comparison::Le => xpmask |= 1 << i,
                    }
                } else if in1 {
                    xmask |= 1 << i;
                } else if in2 {
                    xpmask |= 1 << i;
                }
            }
            rows.insert((xmask, xpmask));
        }
    }
    let mut lp = LinearProgram::new(2 * k);
    let n_rat = rat_u64(u64::from(n));
    let mut budget_x = vec![Rational::zero(); 2 * k];
    let mut budget_xp = vec![Rational::zero(); 2 * k];
    for i in 0..k {
        budget_x[i] = Rational::one();
        budget_xp[k + i] = Rational::one();
    }
    lp.constrain(budget_x, Relation::Le, n_rat.clone());
    lp.constrain(budget_xp, Relation::Le, n_rat);
    for (i, cmp) in guess.comparisons.iter().enumerate() {
        let mut coeffs = vec![Rational::zero(); 2 * k];
        let (hi, lo) = match cmp {
            Comparison::Ge => (i, k + i),
            Comparison::Le => (k + i, i),
        };
        coeffs[hi] = Rational::one();
        coeffs[lo] = -Rational::one();
        lp.constrain(coeffs, Relation::Ge, Rational::zero());
    }
    let m_rat = rat_u64(u64::from(m));
    for (xmask, xpmask) in rows {
        let mut coeffs = vec![Rational::zero(); 2 * k];
        for i in 0..k {
            if xmask >> i & 1 == 1 {
                coeffs[i] = Rational::one();
            }
            if xpmask >> i & 1 == 1 {
                coeffs[k + i] = Rational::one();
            }
        }
        lp.constrain(coeffs, Relation::Gt, m_rat.clone());
    }
    let outcome = solve(&lp)?;
    if outcome.status != LpStatus::Optimal {
        return Ok(Feasibility {
            ok: false,
            witness: None,
            margin: Some(Rational::zero()),
        });
    }
    let mut solution = outcome
        .solution
        .ok_or_else(|| Error::Internal("feasible oriented program without witness".into()))?;
    let xp_part = solution.split_off(k);
    Ok(Feasibility {
        ok: true,
        witness: Some((solution, xp_part)),
        margin: outcome.strict_margin,
    })
}

/// Finds a pair of continuous strategies guaranteeing level `u` with
/// probability at least one half on a uniform-weight instance.
///
/// Because equal-weight battlefields are interchangeable, every orientation
/// of a pair is equivalent to one where the first `α` battlefields carry the
/// larger first-strategy allocation. The solver sweeps `α` from `0` to `k`,
/// solving the oriented strict program for each, and returns the first
/// feasible pair together with its margin; the pair is re-checked against
/// every critical tuple before being returned.
pub fn solve_uniform_c2(
    inst: &GameInstance,
    u: u64,
) -> Result<Feasibility<(PureStrategy, PureStrategy)>> {
    let caps = Caps::from_env()?;
    check_k(inst, &caps)?;
    if inst.weights().iter().any(|&w| w != inst.weights()[0]) {
        return Err(Error::Malformed(
            "uniform-weight solver called on non-uniform weights".into(),
        ));
    }
    let weights = inst.rational_weights();
    let k = inst.k();
    let level = rat_u64(u);
    if minimal_cover_sets(&weights, &level).is_empty() {
        let zeros = || PureStrategy::continuous(vec![Rational::zero(); k]);
        return Ok(Feasibility {
            ok: true,
            witness: Some((zeros()?, zeros()?)),
            margin: None,
        });
    }
    for alpha in 0..=k {
        let comparisons = (0..k)
            .map(|i| if i < alpha { Comparison::Ge } else { Comparison::Le })
            .collect();
        let guess = Guess::new(comparisons);
        let feas = oriented_pair_program(inst.n(), inst.m(), &weights, &level, &guess, &caps)?;
        if !feas.ok {
            continue;
        }
        let (x, xp) = feas
            .witness
            .ok_or_else(|| Error::Internal("feasible orientation without witness".into()))?;
        let x = PureStrategy::continuous(x)?;
        let xp = PureStrategy::continuous(xp)?;
        let (ok, _) = verify_2strategy(inst, &x, &xp, &level)?;
        if !ok {
            return Err(Error::Internal(
                "oriented solution fails critical-tuple verification".into(),
            ));
        }
        return Ok(Feasibility {
            ok: true,
            witness: Some((x, xp)),
            margin: feas.margin,
        });
    }
    Ok(Feasibility {
        ok: false,
        witness: None,
        margin: Some(Rational::zero()),
    })
}

/// Halving pair over equal-weight buckets: drops the highest-indexed member
/// of every odd bucket, assigns the lower half of each bucket to the first
/// strategy and the upper half to the second, and spreads the full budget in
/// proportion to weight — `2wn/α′` per chosen battlefield, where `α′` is the
/// surviving total weight — so each strategy spends exactly `n`.
fn halving_pair(
    n: u32,
    k: usize,
    buckets: &[(Rational, Vec<usize>)],
) -> (Vec<Rational>, Vec<Rational>) {
    let mut first: Vec<(usize, Rational)> = Vec::new();
    let mut second: Vec<(usize, Rational)> = Vec::new();
    let mut alpha = Rational::zero();
    for (w, members) in buckets {
        let even = members.len() - members.len() % 2;
        let half = even / 2;
        for &i in &members[..half] {
            first.push((i, w.clone()));
        }
        for &i in &members[half..even] {
            second.push((i, w.clone()));
        }
        alpha += w * rat_u64(even as u64);
    }
    let mut x = vec![Rational::zero(); k];
    let mut xp = vec![Rational::zero(); k];
    if alpha.is_zero() {
        return (x, xp);
    }
    let scale = rat_u64(2 * u64::from(n)) / alpha;
    for (i, w) in first {
        x[i] = &scale * &w;
    }
    for (i, w) in second {
        xp[i] = &scale * &w;
    }
    (x, xp)
}

/// Finds a pair of continuous strategies guaranteeing level `(1−ε)u` with
/// probability at least one half on a general-weight instance.
///
/// Weights are capped at `u` and rounded down to powers of `1+δ` with
/// `δ = ε³/10`; battlefields lighter than `δu/k` are set aside. The remaining
/// battlefields are bucketed by rounded weight, and a menu of orientations is
/// built per bucket: every subset for small buckets, and "the first `d`
/// members are larger", with `d` stepping by `⌊δk_j⌋`, for buckets larger
/// than `1/δ`. The oriented strict program is solved on the rounded weights
/// for every combination; rounding down only widens the set of qualifying
/// cover sets, so a strictly feasible rounded solution also clears the
/// original instance, which is checked before returning. The halving
/// fallback over the oversized buckets is constructed as well, and whichever
/// verified candidate clears the original critical tuples by the larger
/// margin is returned (the oriented solution on ties).
pub fn solve_general_c2(
    inst: &GameInstance,
    u: u64,
    epsilon: &Rational,
) -> Result<Feasibility<(PureStrategy, PureStrategy)>> {
    let caps = Caps::from_env()?;
    check_k(inst, &caps)?;
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(Error::Malformed(
            "epsilon must lie strictly between 0 and 1".into(),
        ));
    }
    let two_n = rat_u64(2 * u64::from(inst.n()));
    let need = (Rational::one() + epsilon) * rat_u64(u64::from(inst.m()));
    if two_n < need {
        return Err(Error::Precondition(format!(
            "two-strategy search needs 2n ≥ (1+ε)m; got 2·{} < {}",
            inst.n(),
            need
        )));
    }
    let k = inst.k();
    let level = (Rational::one() - epsilon) * rat_u64(u);
    let weights = inst.rational_weights();
    if minimal_cover_sets(&weights, &level).is_empty() {
        let zeros = || PureStrategy::continuous(vec![Rational::zero(); k]);
        return Ok(Feasibility {
            ok: true,
            witness: Some((zeros()?, zeros()?)),
            margin: None,
        });
    }
    let delta = epsilon.clone() * epsilon * epsilon / rat_u64(10);
    let rounded = delta_uniform(inst, &delta, Some(u))?;
    let cutoff = &delta * rat_u64(u) / rat_u64(k as u64);
    let kept: Vec<usize> = (0..k)
        .filter(|&i| rounded.rounded_weights[i] >= cutoff)
        .collect();
    let kept_weights: Vec<Rational> = kept
        .iter()
        .map(|&i| rounded.rounded_weights[i].clone())
        .collect();
    // Buckets of equal rounded weight over kept positions, heaviest first.
    let buckets: Vec<(Rational, Vec<usize>)> =
        group_by_weight(&kept_weights).into_iter().rev().collect();
    let inv_delta = Rational::one() / &delta;

    let mut lp_pair: Option<(Vec<Rational>, Vec<Rational>)> = None;
    if !kept.is_empty() {
        let mut menus: Vec<Vec<Vec<bool>>> = Vec::new();
        for (_, members) in &buckets {
            let kj = members.len();
            let mut entries: Vec<Vec<bool>> = Vec::new();
            if rat_u64(kj as u64) <= inv_delta {
                for mask in 0..(1u32 << kj) {
                    entries.push((0..kj).map(|j| mask >> j & 1 == 1).collect());
                }
            } else {
                let step: usize = (&delta * rat_u64(kj as u64))
                    .floor()
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Internal("orientation step out of range".into()))?;
                let mut d = 0usize;
                while d < kj {
                    entries.push((0..kj).map(|j| j < d).collect());
                    d += step;
                }
                entries.push(vec![true; kj]);
            }
            menus.push(entries);
        }
        let mut count: u128 = 1;
        for menu in &menus {
            count = count.saturating_mul(menu.len() as u128);
        }
        caps.check("orientation guesses", count, caps.max_candidates)?;
        let guesses: Vec<Guess> = menus
            .iter()
            .map(|menu| menu.iter())
            .multi_cartesian_product()
            .map(|choice| {
                let mut comparisons = vec![Comparison::Le; kept.len()];
                for ((_, members), flags) in buckets.iter().zip(choice) {
                    for (&pos, &ge) in members.iter().zip(flags.iter()) {
                        comparisons[pos] = if ge { Comparison::Ge } else { Comparison::Le };
                    }
                }
                Guess::new(comparisons)
            })
            .collect();
        let solved: Vec<Feasibility<(Vec<Rational>, Vec<Rational>)>> = guesses
            .par_iter()
            .map(|guess| oriented_pair_program(inst.n(), inst.m(), &kept_weights, &level, guess, &caps))
            .collect::<Result<_>>()?;
        lp_pair = solved
            .into_iter()
            .find(|f| f.ok)
            .and_then(|f| f.witness)
            .map(|(x, xp)| {
                let mut x_full = vec![Rational::zero(); k];
                let mut xp_full = vec![Rational::zero(); k];
                for (pos, &i) in kept.iter().enumerate() {
                    x_full[i] = x[pos].clone();
                    xp_full[i] = xp[pos].clone();
                }
                (x_full, xp_full)
            });
    }

    let mut best: Option<((Vec<Rational>, Vec<Rational>), Rational)> = None;
    if let Some((x, xp)) = lp_pair {
        match worst_cover_pair(&weights, inst.m(), &x, &xp, &level, &caps)? {
            Some((_, _, slack)) if slack > Rational::zero() => {
                best = Some(((x, xp), slack));
            }
            _ => {
                return Err(Error::Internal(
                    "oriented solution fails critical-tuple verification".into(),
                ));
            }
        }
    }
    if two_n > need {
        // The halving fallback needs the strictly larger budget; it covers
        // instances where only the oversized buckets carry real weight.
        let big: Vec<(Rational, Vec<usize>)> = buckets
            .iter()
            .filter(|(_, members)| rat_u64(members.len() as u64) > inv_delta)
            .map(|(w, members)| (w.clone(), members.iter().map(|&pos| kept[pos]).collect()))
            .collect();
        let (x, xp) = halving_pair(inst.n(), k, &big);
        if let Some((_, _, slack)) =
            worst_cover_pair(&weights, inst.m(), &x, &xp, &level, &caps)?
        {
            if slack > Rational::zero()
                && best.as_ref().map_or(true, |(_, held)| slack > *held)
            {
                best = Some(((x, xp), slack));
            }
        }
    }
    match best {
        Some(((x, xp), slack)) => Ok(Feasibility {
            ok: true,
            witness: Some((PureStrategy::continuous(x)?, PureStrategy::continuous(xp)?)),
            margin: Some(slack),
        }),
        None => Ok(Feasibility {
            ok: false,
            witness: None,
            margin: Some(Rational::zero()),
        }),
    }
}

/// Builds the halving fallback mixture for a caller-supplied split into
/// equal-weight buckets: each bucket loses its highest-indexed member when
/// odd, the lower half goes to the first strategy and the upper half to the
/// second, and every chosen battlefield receives troops in proportion to its
/// weight so that each strategy spends exactly `n`. The two strategies are
/// mixed with probability one half each.
pub fn fallback_strategy(
    inst: &GameInstance,
    buckets: &[Vec<usize>],
    epsilon: &Rational,
) -> Result<MixedStrategy> {
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(Error::Malformed(
            "epsilon must lie strictly between 0 and 1".into(),
        ));
    }
    let two_n = rat_u64(2 * u64::from(inst.n()));
    let need = (Rational::one() + epsilon) * rat_u64(u64::from(inst.m()));
    if two_n <= need {
        return Err(Error::Precondition(format!(
            "halving fallback needs 2n > (1+ε)m; got 2·{} ≤ {}",
            inst.n(),
            need
        )));
    }
    let mut seen = vec![false; inst.k()];
    let mut resolved: Vec<(Rational, Vec<usize>)> = Vec::new();
    for bucket in buckets {
        let mut members = bucket.clone();
        members.sort_unstable();
        for &i in &members {
            if i >= inst.k() {
                return Err(Error::Malformed(format!(
                    "bucket battlefield {i} out of range"
                )));
            }
            if seen[i] {
                return Err(Error::Malformed(format!(
                    "battlefield {i} appears in more than one bucket"
                )));
            }
            seen[i] = true;
        }
        let Some(&head) = members.first() else {
            continue;
        };
        let w = inst.weights()[head];
        if members.iter().any(|&i| inst.weights()[i] != w) {
            return Err(Error::Malformed(
                "bucket mixes battlefields of distinct weights".into(),
            ));
        }
        resolved.push((rat_u64(w), members));
    }
    let (x, xp) = halving_pair(inst.n(), inst.k(), &resolved);
    MixedStrategy::new(
        vec![PureStrategy::continuous(x)?, PureStrategy::continuous(xp)?],
        vec![ratio(1, 2), ratio(1, 2)],
    )
}
