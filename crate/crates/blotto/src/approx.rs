//! Approximation algorithms for discrete instances: δ-uniform weight
//! rounding, heavy/light battlefield decomposition, the weaker adversary and
//! its triplet-satisfiability program (the pure-strategy PTAS), and the
//! 2-strategy approximations built on the fractional greedy adversary.
//!
//! Every solver follows a certification-first contract: rounded weights, weak
//! adversaries, and threshold-family searches only *rank* candidate
//! strategies, while the returned guarantee is re-derived on the original
//! instance by an exact best-response computation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bestresp::{certified_pair_level, pure_best_response_dp};
use crate::core::{Caps, Error, GameInstance, MixedStrategy, PureStrategy, Result};
use crate::fractional::{greedy_opponent_response, single_costs};
use crate::oracle::{count_pure, enumerate_pure};
use crate::{rat, rat_u64, ratio, Rational};

/// How many pure candidates the PTAS certifies exactly.
const CERTIFY_PURE: usize = 64;
/// Instance size (number of pure strategies) up to which the 2-strategy
/// searches simply enumerate every pair of supports.
const TINY_STRATEGIES: u128 = 128;
/// Pairs certified exactly after ranking, exhaustive and structured search.
const CERTIFY_TOP_TINY: usize = 64;
const CERTIFY_TOP: usize = 8;
/// Terminal entries kept per threshold family, and the number of families
/// explored before the structured 2-strategy search stops widening.
const GROUP_TERMINALS: usize = 4;
const GROUP_DP_LIMIT: usize = 4096;
/// Ceiling on enumerated heavy-side pairs in the 2-strategy search.
const HEAVY_PAIR_LIMIT: u128 = 65_536;

/// A game instance with weights rounded down to powers of (1 + δ).
#[derive(Debug, Clone)]
pub struct RoundedInstance {
    /// The instance the rounding was derived from.
    pub base: GameInstance,
    /// Rounding coarseness δ.
    pub delta: Rational,
    /// Per battlefield, the largest power of (1 + δ) that does not exceed
    /// the (possibly capped) original weight. Kept exact.
    pub rounded_weights: Vec<Rational>,
}

/// Rounds every weight down to a power of (1 + δ), optionally capping weights
/// at `cap` first. Any guarantee under the rounded weights transfers to the
/// original ones within a (1 ± δ) factor, while the number of distinct
/// weights drops to O(log(w_max)/δ).
pub fn delta_uniform(
    inst: &GameInstance,
    delta: &Rational,
    cap: Option<u64>,
) -> Result<RoundedInstance> {
    if delta <= &Rational::zero() {
        return Err(Error::Malformed(
            "rounding coarseness must be positive".into(),
        ));
    }
    if cap == Some(0) {
        return Err(Error::Malformed("weight cap must be positive".into()));
    }
    let step = Rational::one() + delta;
    // Shared table of powers, grown on demand so each power is computed once.
    let mut powers: Vec<Rational> = vec![Rational::one()];
    let mut rounded = Vec::with_capacity(inst.k());
    for &w in inst.weights() {
        let w = rat_u64(cap.map_or(w, |u| w.min(u)));
        while powers.last().expect("nonempty") * &step <= w {
            let next = powers.last().expect("nonempty") * &step;
            powers.push(next);
        }
        let p = powers
            .iter()
            .rev()
            .find(|p| **p <= w)
            .expect("every weight is at least one");
        rounded.push(p.clone());
    }
    Ok(RoundedInstance {
        base: inst.clone(),
        delta: delta.clone(),
        rounded_weights: rounded,
    })
}

/// Battlefields partitioned by a weight threshold.
#[derive(Debug, Clone)]
pub struct HeavyLightSplit {
    /// The separating threshold.
    pub tau: Rational,
    /// Indices with weight ≥ τ, ascending.
    pub heavy: Vec<usize>,
    /// The complement, ascending.
    pub light: Vec<usize>,
}

impl HeavyLightSplit {
    /// Splits battlefields at the threshold: heavy means weight ≥ τ.
    pub fn at(weights: &[Rational], tau: &Rational) -> HeavyLightSplit {
        let (heavy, light) = (0..weights.len()).partition(|&i| &weights[i] >= tau);
        HeavyLightSplit {
            tau: tau.clone(),
            heavy,
            light,
        }
    }
}

fn validate_split(split: &HeavyLightSplit, k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    for &i in split.heavy.iter().chain(&split.light) {
        if i >= k || seen[i] {
            return Err(Error::Malformed(
                "split does not partition the battlefields".into(),
            ));
        }
        seen[i] = true;
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::Malformed(
            "split does not partition the battlefields".into(),
        ))
    }
}

/// Heavy battlefields grouped by weight, heaviest class first; members keep
/// ascending index order.
fn heavy_classes(weights: &[Rational], heavy: &[usize]) -> Vec<(Rational, Vec<usize>)> {
    let mut by_weight: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for &i in heavy {
        by_weight.entry(weights[i].clone()).or_default().push(i);
    }
    by_weight.into_iter().rev().collect()
}

/// Spreads `t` troops over the members of one class as evenly as possible,
/// earlier indices taking the ceiling.
fn spread_balanced(members: &[usize], t: u32, into: &mut [u32]) {
    let len = members.len() as u32;
    let (q, r) = (t / len, t % len);
    for (pos, &i) in members.iter().enumerate() {
        into[i] = q + u32::from((pos as u32) < r);
    }
}

/// All vectors of per-class troop totals with sum ≤ n.
fn class_partials(classes: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..classes {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for t in 0..=(n - used) {
                let mut nv = v.clone();
                nv.push(t);
                next.push(nv);
            }
        }
        out = next;
    }
    out
}

/// One heavy-side response of player 2: the battlefields it wins (zero-troop
/// ones included), its troop cost, and the weight it collects.
#[derive(Debug, Clone)]
struct HeavyResponse {
    wins: Vec<usize>,
    cost: u32,
    won: Rational,
}

/// Player 2's undominated heavy-side responses against `x`: per weight class
/// the cheapest battlefields are won first, zero-troop battlefields are won
/// for free, and a response that costs at least as much as another while
/// collecting no more weight is dropped — it can never be the adversary's
/// best choice. At most m + 1 responses survive.
fn heavy_responses(
    x: &[u32],
    weights: &[Rational],
    heavy: &[usize],
    m: u32,
    caps: &Caps,
) -> Result<Vec<HeavyResponse>> {
    let free: Vec<usize> = heavy.iter().copied().filter(|&i| x[i] == 0).collect();
    let free_won: Rational = free.iter().map(|&i| weights[i].clone()).sum();
    // Affordable win counts per paid class, cheapest members first.
    let mut class_opts: Vec<Vec<(u32, Rational, Vec<usize>)>> = Vec::new();
    for (w, members) in heavy_classes(weights, heavy) {
        let mut ms: Vec<usize> = members.into_iter().filter(|&i| x[i] > 0).collect();
        if ms.is_empty() {
            continue;
        }
        ms.sort_by_key(|&i| (x[i], i));
        let mut opts = Vec::with_capacity(ms.len() + 1);
        let mut cost = 0u64;
        for q in 0..=ms.len() {
            if q > 0 {
                cost += x[ms[q - 1]] as u64;
            }
            if cost > m as u64 {
                break;
            }
            opts.push((cost as u32, &w * rat(q as i64), ms[..q].to_vec()));
        }
        class_opts.push(opts);
    }
    let raw_count: u128 = class_opts.iter().map(|o| o.len() as u128).product();
    caps.check("heavy responses", raw_count, caps.max_responses)?;
    let mut raw: Vec<(u32, Rational, Vec<usize>)> =
        vec![(0, Rational::zero(), Vec::new())];
    for opts in &class_opts {
        let mut next = Vec::new();
        for (cost, won, wins) in &raw {
            for (c, w2, ws) in opts {
                if (cost + c) as u64 <= m as u64 {
                    let mut nw = wins.clone();
                    nw.extend_from_slice(ws);
                    next.push((cost + c, won + w2, nw));
                }
            }
        }
        raw = next;
    }
    raw.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    let mut responses = Vec::new();
    let mut best: Option<Rational> = None;
    for (cost, won, mut wins) in raw {
        if best.as_ref().is_some_and(|b| *b >= won) {
            continue;
        }
        best = Some(won.clone());
        wins.extend_from_slice(&free);
        wins.sort_unstable();
        responses.push(HeavyResponse {
            wins,
            cost,
            won: won + &free_won,
        });
    }
    Ok(responses)
}

/// Order in which the weaker adversary scans light battlefields: free ones
/// first, then descending value ratio w/x, lower index on ties.
fn weak_light_order(x: &[u32], weights: &[Rational], light: &[usize]) -> Vec<usize> {
    let mut order = light.to_vec();
    order.sort_by(|&i, &j| match (x[i] == 0, x[j] == 0) {
        (true, true) => i.cmp(&j),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => {
            // w_i/x_i vs w_j/x_j, cross-multiplied to stay exact.
            let lhs = &weights[i] * rat(x[j] as i64);
            let rhs = &weights[j] * rat(x[i] as i64);
            rhs.cmp(&lhs).then(i.cmp(&j))
        }
    });
    order
}

/// Greedy fill: walk the order, win every battlefield by matching its
/// troops, and stop at the first one that is no longer affordable.
fn weak_light_fill(
    x: &[u32],
    weights: &[Rational],
    order: &[usize],
    budget: u32,
) -> (Vec<usize>, Rational) {
    let mut left = budget;
    let mut taken = Vec::new();
    let mut won = Rational::zero();
    for &i in order {
        if x[i] > left {
            break;
        }
        left -= x[i];
        won += &weights[i];
        taken.push(i);
    }
    (taken, won)
}

/// Best response of the weaker adversary: every undominated heavy-side
/// response is tried, the light side is filled greedily by descending value
/// ratio (stopping at the first unaffordable battlefield), and the best
/// combination is kept. The value is player 2's payoff against `x`; it is at
/// most the exact best response and loses at most the heaviest light weight.
pub fn weak_adversary_pure(
    inst: &GameInstance,
    x: &PureStrategy,
    split: &HeavyLightSplit,
) -> Result<(PureStrategy, u64)> {
    let caps = Caps::from_env()?;
    validate_split(split, inst.k())?;
    x.validate(inst, inst.n())?;
    let xs = x.discrete_entries()?;
    let w = inst.rational_weights();
    let responses = heavy_responses(&xs, &w, &split.heavy, inst.m(), &caps)?;
    let order = weak_light_order(&xs, &w, &split.light);
    let mut best: Option<(Rational, Vec<u32>)> = None;
    for resp in &responses {
        let (taken, light_won) = weak_light_fill(&xs, &w, &order, inst.m() - resp.cost);
        let total = &resp.won + light_won;
        let mut y = vec![0u32; inst.k()];
        for &i in resp.wins.iter().chain(&taken) {
            y[i] = xs[i];
        }
        if best.as_ref().map_or(true, |(b, _)| total > *b) {
            best = Some((total, y));
        }
    }
    let (value, y) = best.expect("the empty heavy response always exists");
    let value = value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Internal("weak adversary value out of range".into()))?;
    Ok((PureStrategy::discrete(y), value))
}

/// A guessed interaction pattern between a heavy-side allocation and the
/// weaker adversary: for every heavy response of player 2, the light
/// battlefield its greedy fill stops at (`None` when it never stops) and the
/// value ratio that battlefield is pinned to.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    /// Troops on each distinct heavy weight class, heaviest class first; a
    /// class spreads its troops over its battlefields as evenly as possible,
    /// earlier indices taking the ceiling.
    pub xh: Vec<u32>,
    /// Per heavy response, the light battlefield the greedy fill stops at.
    pub b: Vec<Option<usize>>,
    /// Per heavy response, the ratio w/x pinned at that battlefield; zero
    /// for the sentinel.
    pub r: Vec<Rational>,
}

/// Enumerates all candidate triplets: balanced heavy partial strategies
/// crossed with, per heavy response, every (stop battlefield, pinned ratio)
/// choice of the form w_j/t for t ∈ [1..n], plus the sentinel for responses
/// whose greedy fill never stops. The heavy response set is the same
/// undominated family `satisfy_triplet_dp` derives, so the two ops compose.
pub fn enumerate_triplets(
    inst: &GameInstance,
    split: &HeavyLightSplit,
    epsilon: &Rational,
) -> Result<impl Iterator<Item = Triplet>> {
    if epsilon <= &Rational::zero() {
        return Err(Error::Malformed("epsilon must be positive".into()));
    }
    let caps = Caps::from_env()?;
    validate_split(split, inst.k())?;
    let w = inst.rational_weights();
    let classes = heavy_classes(&w, &split.heavy);
    let n = inst.n();
    let k = inst.k();
    caps.check(
        "triplet heavy partials",
        count_pure(n, classes.len()),
        caps.max_triplets,
    )?;
    let mut stop_opts: Vec<(Option<usize>, Rational)> = vec![(None, Rational::zero())];
    for &j in &split.light {
        for t in 1..=n {
            stop_opts.push((Some(j), &w[j] / rat(t as i64)));
        }
    }
    // Response counts depend on the realized heavy allocation, so they are
    // derived per partial up front (bounded by the caps check above).
    let mut partials: Vec<(Vec<u32>, usize)> = Vec::new();
    for xh in class_partials(classes.len(), n) {
        let mut xvec = vec![0u32; k];
        for (ci, (_, members)) in classes.iter().enumerate() {
            spread_balanced(members, xh[ci], &mut xvec);
        }
        let count = heavy_responses(&xvec, &w, &split.heavy, inst.m(), &caps)?.len();
        partials.push((xh, count));
    }
    Ok(partials.into_iter().flat_map(move |(xh, resp_count)| {
        let opts = vec![stop_opts.clone(); resp_count];
        opts.into_iter()
            .multi_cartesian_product()
            .map(move |combo| {
                let (b, r) = combo.into_iter().unzip();
                Triplet {
                    xh: xh.clone(),
                    b,
                    r,
                }
            })
    }))
}

/// Per-response context of the satisfiability program.
struct ResponseCtx {
    /// Player 2's remaining budget after its heavy wins.
    budget: u32,
    /// Weight player 1 keeps on the heavy side against this response.
    g1: Rational,
    /// Stop battlefield and its pinned troops; `None` for the sentinel.
    stop: Option<(usize, u32)>,
    /// Pinned ratio (zero for the sentinel).
    ratio: Rational,
}

/// A Pareto entry of the satisfiability program: per response, the light
/// weight player 1 keeps, plus the light assignment realizing it.
struct LightEntry {
    wins: Vec<Rational>,
    assign: Vec<u32>,
}

fn insert_light_pareto(set: &mut Vec<LightEntry>, cand: LightEntry) {
    for e in set.iter_mut() {
        if e.wins == cand.wins {
            if cand.assign < e.assign {
                e.assign = cand.assign;
            }
            return;
        }
    }
    if set
        .iter()
        .any(|e| e.wins.iter().zip(&cand.wins).all(|(a, b)| a >= b))
    {
        return;
    }
    set.retain(|e| !e.wins.iter().zip(&cand.wins).all(|(a, b)| b >= a));
    set.push(cand);
}

/// Core of the satisfiability program: assigns troops to light battlefields
/// so that, for every heavy response, player 2's greedy fill takes exactly
/// the battlefields ranked above the pinned stop (paying their troops within
/// its remaining budget) yet cannot afford the stop battlefield itself.
/// Returns the assignment maximizing the worst-response value, or `None`.
fn satisfy_core(
    light: &[usize],
    w: &[Rational],
    ctxs: &[ResponseCtx],
    pins: &BTreeMap<usize, u32>,
    nl_max: u32,
    caps: &Caps,
) -> Result<Option<(Vec<u32>, Rational)>> {
    let mut bound: u128 = nl_max as u128 + 1;
    for c in ctxs {
        bound = bound.saturating_mul(c.budget as u128 + 1);
    }
    caps.check("triplet program states", bound, caps.max_triplets)?;

    type Key = (u32, Vec<u32>);
    let mut states: BTreeMap<Key, Vec<LightEntry>> = BTreeMap::new();
    states.insert(
        (0, vec![0; ctxs.len()]),
        vec![LightEntry {
            wins: vec![Rational::zero(); ctxs.len()],
            assign: Vec::new(),
        }],
    );
    for &j in light {
        let choices: Vec<u32> = match pins.get(&j) {
            Some(&v) => vec![v],
            None => (0..=nl_max).collect(),
        };
        // Per choice and response: does the greedy fill take battlefield j
        // before stopping? Free battlefields are always taken; otherwise the
        // ratio must beat the pinned one, lower index winning ties.
        let effects: Vec<(u32, Vec<bool>)> = choices
            .into_iter()
            .map(|v| {
                let member = ctxs
                    .iter()
                    .map(|c| {
                        if v == 0 {
                            return true;
                        }
                        match w[j].cmp(&(&c.ratio * rat(v as i64))) {
                            Ordering::Greater => true,
                            Ordering::Equal => match c.stop {
                                Some((bj, _)) => j < bj,
                                None => false,
                            },
                            Ordering::Less => false,
                        }
                    })
                    .collect();
                (v, member)
            })
            .collect();
        let mut next: BTreeMap<Key, Vec<LightEntry>> = BTreeMap::new();
        for ((used, omega), entries) in &states {
            for (v, member) in &effects {
                let nused = used + v;
                if nused > nl_max {
                    continue;
                }
                let mut nomega = omega.clone();
                let mut feasible = true;
                for (idx, c) in ctxs.iter().enumerate() {
                    if member[idx] {
                        nomega[idx] += v;
                        if nomega[idx] > c.budget {
                            feasible = false;
                            break;
                        }
                    }
                }
                if !feasible {
                    continue;
                }
                for e in entries {
                    let mut nwins = e.wins.clone();
                    for (idx, taken) in member.iter().enumerate() {
                        if !taken {
                            nwins[idx] += &w[j];
                        }
                    }
                    let mut nassign = e.assign.clone();
                    nassign.push(*v);
                    insert_light_pareto(
                        next.entry((nused, nomega.clone())).or_default(),
                        LightEntry {
                            wins: nwins,
                            assign: nassign,
                        },
                    );
                }
            }
        }
        states = next;
    }
    let mut best: Option<(Rational, Vec<u32>)> = None;
    for ((_, omega), entries) in &states {
        // A pinned stop must be genuinely unaffordable after the fill.
        let stopped = ctxs.iter().enumerate().all(|(idx, c)| match c.stop {
            Some((_, troops)) => omega[idx] + troops > c.budget,
            None => true,
        });
        if !stopped {
            continue;
        }
        for e in entries {
            let value = ctxs
                .iter()
                .enumerate()
                .map(|(idx, c)| &c.g1 + &e.wins[idx])
                .min()
                .expect("at least one response");
            if best
                .as_ref()
                .map_or(true, |(b, a)| value > *b || (value == *b && e.assign < *a))
            {
                best = Some((value, e.assign.clone()));
            }
        }
    }
    Ok(best.map(|(value, assign)| (assign, value)))
}

/// Derives the per-response contexts and pins for a (b, r) guess and runs the
/// satisfiability core. `Ok(None)` means the guess is not satisfiable.
fn satisfy_guess(
    light: &[usize],
    w: &[Rational],
    responses: &[HeavyResponse],
    heavy_total: &Rational,
    m: u32,
    b: &[Option<usize>],
    r: &[Rational],
    nl_max: u32,
    caps: &Caps,
) -> Result<Option<(Vec<u32>, Rational)>> {
    let mut pins: BTreeMap<usize, u32> = BTreeMap::new();
    let mut ctxs = Vec::with_capacity(responses.len());
    for (i, resp) in responses.iter().enumerate() {
        let stop = match (&b[i], &r[i]) {
            (None, ratio) => {
                if !ratio.is_zero() {
                    return Err(Error::Malformed(
                        "sentinel stop requires a zero ratio".into(),
                    ));
                }
                None
            }
            (Some(j), ratio) => {
                if !light.contains(j) {
                    return Err(Error::Malformed(
                        "stop battlefield must be light".into(),
                    ));
                }
                if ratio <= &Rational::zero() {
                    return Err(Error::Malformed(
                        "pinned ratio must be positive".into(),
                    ));
                }
                let troops = &w[*j] / ratio;
                if !troops.is_integer() {
                    return Ok(None);
                }
                let Some(troops) = troops.to_integer().to_u32() else {
                    return Ok(None);
                };
                if troops == 0 || troops > nl_max {
                    return Ok(None);
                }
                match pins.get(j) {
                    Some(&prev) if prev != troops => return Ok(None),
                    _ => {
                        pins.insert(*j, troops);
                    }
                }
                Some((*j, troops))
            }
        };
        ctxs.push(ResponseCtx {
            budget: m - resp.cost,
            g1: heavy_total - &resp.won,
            stop,
            ratio: r[i].clone(),
        });
    }
    if pins.values().map(|&v| v as u64).sum::<u64>() > nl_max as u64 {
        return Ok(None);
    }
    satisfy_core(light, w, ctxs.as_slice(), &pins, nl_max, caps)
}

/// Decides whether a triplet is satisfiable and, if so, finds the light-side
/// assignment that maximizes the guaranteed payoff against the weaker
/// adversary. The returned strategy is full-length with zeros on the heavy
/// battlefields; the value counts both sides. Inconsistent pins — two
/// responses pinning the same battlefield to different troop counts, or a
/// non-integral pin — make the triplet unsatisfiable rather than an error.
pub fn satisfy_triplet_dp(
    inst: &GameInstance,
    split: &HeavyLightSplit,
    t: &Triplet,
) -> Result<(bool, Option<PureStrategy>, u64)> {
    let caps = Caps::from_env()?;
    validate_split(split, inst.k())?;
    if t.b.len() != t.r.len() {
        return Err(Error::Malformed(
            "triplet stop and ratio lists differ in length".into(),
        ));
    }
    let w = inst.rational_weights();
    let classes = heavy_classes(&w, &split.heavy);
    if t.xh.len() != classes.len() {
        return Err(Error::Malformed(
            "triplet heavy partial does not match the weight classes".into(),
        ));
    }
    let heavy_spend: u64 = t.xh.iter().map(|&v| v as u64).sum();
    if heavy_spend > inst.n() as u64 {
        return Ok((false, None, 0));
    }
    let mut xvec = vec![0u32; inst.k()];
    for (ci, (_, members)) in classes.iter().enumerate() {
        spread_balanced(members, t.xh[ci], &mut xvec);
    }
    let responses = heavy_responses(&xvec, &w, &split.heavy, inst.m(), &caps)?;
    if responses.len() != t.b.len() {
        return Err(Error::Malformed(
            "triplet response count does not match the adversary's heavy responses".into(),
        ));
    }
    let heavy_total: Rational = split.heavy.iter().map(|&i| w[i].clone()).sum();
    let nl_max = (inst.n() as u64 - heavy_spend) as u32;
    match satisfy_guess(
        &split.light,
        &w,
        &responses,
        &heavy_total,
        inst.m(),
        &t.b,
        &t.r,
        nl_max,
        &caps,
    )? {
        None => Ok((false, None, 0)),
        Some((xl, value)) => {
            let mut full = vec![0u32; inst.k()];
            for (pos, &j) in split.light.iter().enumerate() {
                full[j] = xl[pos];
            }
            let value = value
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::Internal("triplet value out of range".into()))?;
            Ok((true, Some(PureStrategy::discrete(full)), value))
        }
    }
}

/// Pure-strategy approximation scheme: cap weights at the target, round them
/// δ-uniformly with δ = ε/2, split at τ = εu/2, search all triplets with the
/// satisfiability program, and certify the strongest candidates exactly on
/// the original instance. The certified value of the returned strategy is
/// ≥ (1 − ε)u whenever some pure strategy guarantees u; callers detect a
/// failed precondition by comparing `certified` against that bound.
pub fn pure_ptas(
    inst: &GameInstance,
    u: u64,
    epsilon: &Rational,
) -> Result<(PureStrategy, u64)> {
    if u == 0 {
        return Err(Error::Malformed("target value must be positive".into()));
    }
    if epsilon <= &Rational::zero() || epsilon >= &Rational::one() {
        return Err(Error::Malformed("epsilon must lie in (0, 1)".into()));
    }
    let caps = Caps::from_env()?;
    let delta = epsilon / rat(2);
    let rounded = delta_uniform(inst, &delta, Some(u))?;
    let rw = &rounded.rounded_weights;
    let tau = epsilon * rat_u64(u) / rat(2);
    let split = HeavyLightSplit::at(rw, &tau);
    let classes = heavy_classes(rw, &split.heavy);
    let n = inst.n();
    let k = inst.k();
    caps.check(
        "triplet heavy partials",
        count_pure(n, classes.len()),
        caps.max_triplets,
    )?;
    let heavy_total: Rational = split.heavy.iter().map(|&i| rw[i].clone()).sum();
    let mut stop_opts: Vec<(Option<usize>, Rational)> = vec![(None, Rational::zero())];
    for &j in &split.light {
        for t in 1..=n {
            stop_opts.push((Some(j), &rw[j] / rat(t as i64)));
        }
    }

    let mut candidates: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let mut triplets_seen: u128 = 0;
    for xh in class_partials(classes.len(), n) {
        let mut xvec = vec![0u32; k];
        for (ci, (_, members)) in classes.iter().enumerate() {
            spread_balanced(members, xh[ci], &mut xvec);
        }
        let responses = heavy_responses(&xvec, rw, &split.heavy, inst.m(), &caps)?;
        let nl_max = n - xh.iter().sum::<u32>();
        let opts = vec![stop_opts.clone(); responses.len()];
        for combo in opts.into_iter().multi_cartesian_product() {
            triplets_seen += 1;
            caps.check("triplets", triplets_seen, caps.max_triplets)?;
            let (b, r): (Vec<_>, Vec<_>) = combo.into_iter().unzip();
            let Some((xl, value)) = satisfy_guess(
                &split.light,
                rw,
                &responses,
                &heavy_total,
                inst.m(),
                &b,
                &r,
                nl_max,
                &caps,
            )?
            else {
                continue;
            };
            let mut full = xvec.clone();
            for (pos, &j) in split.light.iter().enumerate() {
                full[j] = xl[pos];
            }
            let entry = candidates.entry(full).or_insert_with(Rational::zero);
            if value > *entry {
                *entry = value;
            }
        }
    }
    // Concentrating on the heaviest battlefield covers the w_i ≥ u case.
    let mut max_bf = 0;
    for i in 1..k {
        if inst.weights()[i] > inst.weights()[max_bf] {
            max_bf = i;
        }
    }
    let mut allmax = vec![0u32; k];
    allmax[max_bf] = n;
    candidates.entry(allmax).or_insert_with(Rational::zero);

    let mut ranked: Vec<(Rational, Vec<u32>)> =
        candidates.into_iter().map(|(x, p)| (p, x)).collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked.truncate(CERTIFY_PURE);
    let total = inst.total_weight();
    let mut best: Option<(u64, Vec<u32>)> = None;
    for (_, x) in ranked {
        let cand = PureStrategy::discrete(x.clone());
        let (_, taken) = pure_best_response_dp(inst, &cand)?;
        let certified = total - taken;
        if best
            .as_ref()
            .map_or(true, |(bv, bx)| certified > *bv || (certified == *bv && x < *bx))
        {
            best = Some((certified, x));
        }
    }
    let (certified, x) = best.expect("candidate pool is never empty");
    Ok((PureStrategy::discrete(x), certified))
}

fn canonical_pair(a: Vec<u32>, b: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    if b < a {
        (b, a)
    } else {
        (a, b)
    }
}

/// Greedy adversary's haul against the revealed pair — the ranking key for
/// candidate pairs (smaller is better for player 1).
fn replay_value(inst: &GameInstance, x: &[u32], xp: &[u32]) -> Result<u64> {
    let a = PureStrategy::discrete(x.to_vec());
    let b = PureStrategy::discrete(xp.to_vec());
    greedy_opponent_response(&a, &b, inst).map(|(_, v)| v)
}

/// Ranks candidate pairs by the greedy adversary's haul, certifies the most
/// promising `top` of them (plus `must_certify`) exactly, and returns the
/// best pair as a half/half mixture with its certified guarantee.
fn certify_pool(
    inst: &GameInstance,
    pool: BTreeSet<(Vec<u32>, Vec<u32>)>,
    must_certify: Vec<(Vec<u32>, Vec<u32>)>,
    top: usize,
    caps: &Caps,
) -> Result<(MixedStrategy, u64)> {
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = pool.into_iter().collect();
    let mut ranked: Vec<(u64, (Vec<u32>, Vec<u32>))> = pairs
        .par_iter()
        .map(|p| replay_value(inst, &p.0, &p.1).map(|v| (v, p.clone())))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut chosen: Vec<(Vec<u32>, Vec<u32>)> =
        ranked.into_iter().take(top).map(|(_, p)| p).collect();
    for p in must_certify {
        if !chosen.contains(&p) {
            chosen.push(p);
        }
    }
    let scored: Vec<(u64, (Vec<u32>, Vec<u32>))> = chosen
        .par_iter()
        .map(|p| {
            let a = PureStrategy::discrete(p.0.clone());
            let b = PureStrategy::discrete(p.1.clone());
            certified_pair_level(&a, &b, inst, caps).map(|v| (v, p.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(u64, (Vec<u32>, Vec<u32>))> = None;
    for (v, p) in scored {
        if best
            .as_ref()
            .map_or(true, |(bv, bp)| v > *bv || (v == *bv && p < *bp))
        {
            best = Some((v, p));
        }
    }
    let (value, (x, xp)) =
        best.ok_or_else(|| Error::Internal("empty candidate pool".into()))?;
    let s = MixedStrategy::new(
        vec![PureStrategy::discrete(x), PureStrategy::discrete(xp)],
        vec![ratio(1, 2), ratio(1, 2)],
    )?;
    Ok((s, value))
}

/// On small instances, every pair of supports (order-free) is a candidate.
fn tiny_pairs(inst: &GameInstance) -> Option<Vec<(Vec<u32>, Vec<u32>)>> {
    if count_pure(inst.n(), inst.k()) > TINY_STRATEGIES {
        return None;
    }
    let all: Vec<Vec<u32>> = enumerate_pure(inst.n(), inst.k()).collect();
    let mut pairs = Vec::new();
    for i in 0..all.len() {
        for j in i..all.len() {
            pairs.push((all[i].clone(), all[j].clone()));
        }
    }
    Some(pairs)
}

/// Pairs concentrating everything on the heaviest battlefields — the
/// fallback when a single weight dominates the target.
fn concentration_pairs(inst: &GameInstance) -> Vec<(Vec<u32>, Vec<u32>)> {
    let k = inst.k();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(inst.weights()[i]), i));
    let all_on = |i: usize| {
        let mut v = vec![0u32; k];
        v[i] = inst.n();
        v
    };
    let top = all_on(order[0]);
    let mut out = vec![(top.clone(), top.clone())];
    if k > 1 {
        out.push(canonical_pair(top, all_on(order[1])));
    }
    out
}

/// A threshold compared against cost/weight ratios by cross-multiplication;
/// a tie passes only for battlefields before `idx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IntThr {
    idx: usize,
    cost: u32,
    weight: u64,
}

fn passes_int(cost: u32, w_j: u64, j: usize, thr: &Option<IntThr>) -> bool {
    match thr {
        None => true,
        Some(t) => {
            let lhs = cost as u128 * t.weight as u128;
            let rhs = t.cost as u128 * w_j as u128;
            lhs < rhs || (lhs == rhs && j < t.idx)
        }
    }
}

/// Integer mirror of the reconstruction bits: which of its two per-side
/// elements the greedy adversary takes on a battlefield whose costs fall
/// against the given thresholds.
fn bits_int(
    j: usize,
    xj: u32,
    xpj: u32,
    w_j: u64,
    a: &Option<IntThr>,
    b: &Option<IntThr>,
    c: &Option<IntThr>,
) -> (bool, bool) {
    let (cst, cstp) = single_costs(xj, xpj);
    if xj <= xpj {
        if passes_int(cst, w_j, j, a) {
            (true, passes_int(cstp, w_j, j, b))
        } else if passes_int(cst + cstp, w_j, j, c) {
            (true, true)
        } else {
            (false, false)
        }
    } else if passes_int(cstp, w_j, j, b) {
        (passes_int(cst, w_j, j, a), true)
    } else if passes_int(cst + cstp, w_j, j, c) {
        (true, true)
    } else {
        (false, false)
    }
}

/// Per battlefield and per (x, x') choice: the response troops the threshold
/// family reconstructs and which sides they beat.
struct ChoiceEffect {
    spend: u32,
    win1: bool,
    win2: bool,
}

fn group_table(
    k: usize,
    n: u32,
    iw: &[u64],
    a: &Option<IntThr>,
    b: &Option<IntThr>,
    c: &Option<IntThr>,
) -> Vec<Vec<ChoiceEffect>> {
    let side = (n + 1) as usize;
    let mut table = Vec::with_capacity(k);
    for j in 0..k {
        let mut row = Vec::with_capacity(side * side);
        for xj in 0..=n {
            for xpj in 0..=n {
                let (cst, cstp) = single_costs(xj, xpj);
                let (h, hp) = bits_int(j, xj, xpj, iw[j], a, b, c);
                let spend = u32::from(h) * cst + u32::from(hp) * cstp;
                row.push(ChoiceEffect {
                    spend,
                    win1: spend >= xj,
                    win2: spend >= xpj,
                });
            }
        }
        table.push(row);
    }
    table
}

/// A Pareto entry of the pair search: player 2's reconstructed haul against
/// each side, plus the partial pair realizing it.
struct PairEntry {
    u2x: u64,
    u2xp: u64,
    xs: Vec<u32>,
    xps: Vec<u32>,
}

fn insert_pair_pareto(set: &mut Vec<PairEntry>, cand: PairEntry) {
    for e in set.iter_mut() {
        if e.u2x == cand.u2x && e.u2xp == cand.u2xp {
            if (&cand.xs, &cand.xps) < (&e.xs, &e.xps) {
                e.xs = cand.xs;
                e.xps = cand.xps;
            }
            return;
        }
    }
    if set
        .iter()
        .any(|e| e.u2x <= cand.u2x && e.u2xp <= cand.u2xp)
    {
        return;
    }
    set.retain(|e| !(cand.u2x <= e.u2x && cand.u2xp <= e.u2xp));
    set.push(cand);
}

/// Per-family pair search: assign (x_j, x'_j) battlefield by battlefield,
/// track player 2's reconstructed haul against both sides, keep the
/// Pareto-minimal hauls, and return the pairs behind the smallest worst-side
/// hauls. Budgets: each side spends at most n, the reconstructed response at
/// most m.
fn group_dp(
    inst: &GameInstance,
    table: &[Vec<ChoiceEffect>],
    caps: &Caps,
) -> Result<Vec<(Vec<u32>, Vec<u32>)>> {
    let k = inst.k();
    let n = inst.n();
    let m = inst.m() as u64;
    let iw = inst.weights();
    let side = (n + 1) as usize;
    let mut states: BTreeMap<(u32, u32, u64), Vec<PairEntry>> = BTreeMap::new();
    states.insert(
        (0, 0, 0),
        vec![PairEntry {
            u2x: 0,
            u2xp: 0,
            xs: Vec::new(),
            xps: Vec::new(),
        }],
    );
    for j in 0..k {
        let mut next: BTreeMap<(u32, u32, u64), Vec<PairEntry>> = BTreeMap::new();
        for ((t1, t2, sp), entries) in &states {
            for xj in 0..=(n - t1) {
                for xpj in 0..=(n - t2) {
                    let eff = &table[j][xj as usize * side + xpj as usize];
                    let nsp = sp + eff.spend as u64;
                    if nsp > m {
                        continue;
                    }
                    let du2x = if eff.win1 { iw[j] } else { 0 };
                    let du2xp = if eff.win2 { iw[j] } else { 0 };
                    for e in entries {
                        let mut xs = e.xs.clone();
                        xs.push(xj);
                        let mut xps = e.xps.clone();
                        xps.push(xpj);
                        insert_pair_pareto(
                            next.entry((t1 + xj, t2 + xpj, nsp)).or_default(),
                            PairEntry {
                                u2x: e.u2x + du2x,
                                u2xp: e.u2xp + du2xp,
                                xs,
                                xps,
                            },
                        );
                    }
                }
            }
        }
        states = next;
        let entries: usize = states.values().map(|v| v.len()).sum();
        caps.check("pair search states", entries as u128, caps.max_candidates)?;
    }
    let mut terminal: Vec<(u64, u64, u64, Vec<u32>, Vec<u32>)> = Vec::new();
    for entries in states.values() {
        for e in entries {
            terminal.push((
                e.u2x.min(e.u2xp),
                e.u2x,
                e.u2xp,
                e.xs.clone(),
                e.xps.clone(),
            ));
        }
    }
    terminal.sort();
    terminal.truncate(GROUP_TERMINALS);
    Ok(terminal
        .into_iter()
        .map(|(_, _, _, a, b)| canonical_pair(a, b))
        .collect())
}

/// Structured 2-strategy candidates: enumerate threshold families of the
/// greedy adversary's reconstruction — a first-stage cut per side plus a
/// free-or-blocked joint stage — deduplicated by behavior, and collect the
/// best pairs of each family's search. Families beyond a fixed breadth are
/// skipped; every surviving candidate is certified later, so the breadth
/// bounds effort, not soundness.
fn threshold_group_candidates(
    inst: &GameInstance,
    caps: &Caps,
) -> Result<BTreeSet<(Vec<u32>, Vec<u32>)>> {
    let k = inst.k();
    let n = inst.n();
    let iw = inst.weights();
    // Candidate cuts per side: every realizable cost/weight ratio with every
    // tie index, deduplicated by their pass behavior over realizable costs.
    let mut axis: Vec<Option<IntThr>> = vec![None];
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for i in 0..k {
        for cost in 0..=n {
            let thr = IntThr {
                idx: i,
                cost,
                weight: iw[i],
            };
            let behavior: Vec<bool> = (0..k)
                .flat_map(|j| (0..=2 * n).map(move |cst| (j, cst)))
                .map(|(j, cst)| passes_int(cst, iw[j], j, &Some(thr)))
                .collect();
            if seen.insert(behavior) {
                axis.push(Some(thr));
            }
        }
    }
    let joint_modes: Vec<Option<IntThr>> = vec![
        // Joint moves blocked entirely: nothing has a ratio below zero.
        Some(IntThr {
            idx: 0,
            cost: 0,
            weight: iw[0],
        }),
        // Joint moves free.
        None,
    ];
    let mut pool = BTreeSet::new();
    let mut families = 0usize;
    'outer: for c in &joint_modes {
        for a in &axis {
            for b in &axis {
                if families >= GROUP_DP_LIMIT {
                    break 'outer;
                }
                families += 1;
                let table = group_table(k, n, iw, a, b, c);
                for pair in group_dp(inst, &table, caps)? {
                    pool.insert(pair);
                }
                caps.check(
                    "2-strategy candidates",
                    pool.len() as u128,
                    caps.max_candidates,
                )?;
            }
        }
    }
    Ok(pool)
}

/// 2-strategy approximation guaranteeing at least ⌈u/3⌉ with probability 1/2:
/// when the heaviest weight alone covers u/3 and concentrating on it denies
/// the opponent, that pair is returned directly; otherwise candidate pairs
/// come from exhaustive enumeration (small instances) or the threshold-family
/// search, are ranked by the greedy adversary's haul, and the best exactly
/// certified pair is returned as a half/half mixture.
pub fn third_approx_2strategy(inst: &GameInstance, u: u64) -> Result<(MixedStrategy, u64)> {
    if u == 0 {
        return Err(Error::Malformed("target value must be positive".into()));
    }
    let caps = Caps::from_env()?;
    let w_max = *inst.weights().iter().max().expect("at least one battlefield");
    let fallbacks = concentration_pairs(inst);
    if 3 * w_max > u {
        let (s, cert) = certify_pool(
            inst,
            fallbacks.iter().cloned().collect(),
            fallbacks.clone(),
            fallbacks.len(),
            &caps,
        )?;
        if cert >= u.div_ceil(3) {
            return Ok((s, cert));
        }
    }
    let mut pool: BTreeSet<(Vec<u32>, Vec<u32>)> = fallbacks.iter().cloned().collect();
    let top = if let Some(pairs) = tiny_pairs(inst) {
        pool.extend(pairs);
        CERTIFY_TOP_TINY
    } else {
        pool.extend(threshold_group_candidates(inst, &caps)?);
        CERTIFY_TOP
    };
    certify_pool(inst, pool, fallbacks, top, &caps)
}

/// 2-strategy approximation targeting (1 − ε)u with probability 1/2. The
/// candidate pool unions the ⌈u/3⌉ search's result, concentration pairs,
/// exhaustive pairs on small instances, and — on larger ones — balanced
/// heavy-side pairs of the ε-rounded instance split at τ = εu/4 together
/// with the threshold-family search. The certified result therefore never
/// falls below `third_approx_2strategy`'s.
pub fn eps_approx_2strategy(
    inst: &GameInstance,
    u: u64,
    epsilon: &Rational,
) -> Result<(MixedStrategy, u64)> {
    if u == 0 {
        return Err(Error::Malformed("target value must be positive".into()));
    }
    if epsilon <= &Rational::zero() || epsilon >= &Rational::one() {
        return Err(Error::Malformed("epsilon must lie in (0, 1)".into()));
    }
    let caps = Caps::from_env()?;
    let (third, _) = third_approx_2strategy(inst, u)?;
    let third_pair = canonical_pair(
        third.support()[0].discrete_entries()?,
        third.support()[1].discrete_entries()?,
    );
    let mut pool: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    pool.insert(third_pair.clone());
    let fallbacks = concentration_pairs(inst);
    pool.extend(fallbacks.iter().cloned());
    let top = if let Some(pairs) = tiny_pairs(inst) {
        pool.extend(pairs);
        CERTIFY_TOP_TINY
    } else {
        let rounded = delta_uniform(inst, epsilon, None)?;
        let tau = epsilon * rat_u64(u) / rat(4);
        let split = HeavyLightSplit::at(&rounded.rounded_weights, &tau);
        let classes = heavy_classes(&rounded.rounded_weights, &split.heavy);
        let partial_count = count_pure(inst.n(), classes.len());
        if partial_count.saturating_mul(partial_count) <= HEAVY_PAIR_LIMIT {
            let mut realized: Vec<Vec<u32>> = Vec::new();
            for xh in class_partials(classes.len(), inst.n()) {
                let mut xv = vec![0u32; inst.k()];
                for (ci, (_, members)) in classes.iter().enumerate() {
                    spread_balanced(members, xh[ci], &mut xv);
                }
                let responses =
                    heavy_responses(&xv, &rounded.rounded_weights, &split.heavy, inst.m(), &caps)?;
                caps.check(
                    "heavy responses per partial",
                    responses.len() as u128,
                    caps.max_heavy_responses as u64,
                )?;
                realized.push(xv);
            }
            for a in &realized {
                for b in &realized {
                    pool.insert(canonical_pair(a.clone(), b.clone()));
                }
            }
        }
        pool.extend(threshold_group_candidates(inst, &caps)?);
        CERTIFY_TOP
    };
    let mut must = fallbacks;
    must.push(third_pair);
    certify_pool(inst, pool, must, top, &caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::{partial_response_thr, Thresholds};

    fn inst(n: u32, m: u32, w: &[u64]) -> GameInstance {
        GameInstance::new(n, m, w.to_vec()).unwrap()
    }

    fn pow(base: (i64, i64), e: u32) -> Rational {
        let mut p = Rational::one();
        for _ in 0..e {
            p *= ratio(base.0, base.1);
        }
        p
    }

    #[test]
    fn delta_uniform_rounds_down_to_powers() {
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let r = delta_uniform(&g, &ratio(1, 2), None).unwrap();
        // Powers of 3/2: … 81/16 ≈ 5.06, 243/32 ≈ 7.59, 729/64 ≈ 11.39.
        assert_eq!(
            r.rounded_weights,
            vec![pow((3, 2), 5), pow((3, 2), 5), pow((3, 2), 4), pow((3, 2), 3)]
        );

        // Weights that already are powers of (1 + δ) stay put.
        let g = inst(3, 1, &[1, 2, 4]);
        let r = delta_uniform(&g, &rat(1), None).unwrap();
        assert_eq!(r.rounded_weights, vec![rat(1), rat(2), rat(4)]);

        // The cap applies before rounding.
        let g = inst(3, 1, &[10, 1]);
        let r = delta_uniform(&g, &ratio(1, 2), Some(5)).unwrap();
        assert_eq!(r.rounded_weights, vec![pow((3, 2), 3), rat(1)]);
    }

    #[test]
    fn weak_adversary_matches_worked_example() {
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &rat(8));
        assert_eq!(split.heavy, vec![0, 1]);
        let x = PureStrategy::discrete(vec![2, 2, 1, 0]);
        let (y, value) = weak_adversary_pure(&g, &x, &split).unwrap();
        // Winning battlefield 0 costs the whole budget; battlefield 3 is free.
        assert_eq!(value, 15);
        assert_eq!(y.discrete_entries().unwrap(), vec![2, 0, 0, 0]);

        // With no budget the adversary still collects every free battlefield.
        let g0 = inst(5, 0, &[10, 8, 7, 5]);
        let split0 = HeavyLightSplit::at(&w, &rat(8));
        let (_, value0) = weak_adversary_pure(&g0, &x, &split0).unwrap();
        assert_eq!(value0, 5);
    }

    #[test]
    fn weak_adversary_stays_within_the_stopped_weight_of_exact() {
        // Greedy-with-stop loses at most the weight of the battlefield it
        // stops at, which the split keeps below τ.
        let g = inst(4, 3, &[6, 5, 4, 3]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &ratio(9, 2));
        assert_eq!(split.light, vec![2, 3]);
        for xs in enumerate_pure(g.n(), g.k()) {
            let x = PureStrategy::discrete(xs);
            let (_, weak) = weak_adversary_pure(&g, &x, &split).unwrap();
            let (_, exact) = pure_best_response_dp(&g, &x).unwrap();
            assert!(weak <= exact);
            assert!(weak + 4 >= exact, "weak {weak} exact {exact}");
        }
    }

    #[test]
    fn rounded_guarantees_stay_within_the_delta_band() {
        let g = inst(4, 3, &[7, 5, 3, 2]);
        let delta = ratio(1, 3);
        let r = delta_uniform(&g, &delta, None).unwrap();
        let orig = g.rational_weights();
        let responses: Vec<Vec<u32>> = enumerate_pure(g.m(), g.k()).collect();
        for xs in enumerate_pure(g.n(), g.k()) {
            let guaranteed = |w: &[Rational]| {
                responses
                    .iter()
                    .map(|y| {
                        (0..g.k())
                            .filter(|&i| xs[i] > y[i])
                            .map(|i| w[i].clone())
                            .sum::<Rational>()
                    })
                    .min()
                    .unwrap()
            };
            let g_orig = guaranteed(&orig);
            let g_round = guaranteed(&r.rounded_weights);
            assert!(g_round <= g_orig);
            assert!(g_round >= g_orig / (Rational::one() + &delta));
        }
    }

    #[test]
    fn triplet_enumeration_counts() {
        // No heavy battlefields: one empty heavy response, so the triplets
        // are exactly the (stop, ratio) options: sentinel + 2 light · n.
        let g = inst(2, 1, &[5, 1]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &rat(9));
        assert!(split.heavy.is_empty());
        let ts: Vec<Triplet> = enumerate_triplets(&g, &split, &ratio(1, 2))
            .unwrap()
            .collect();
        assert_eq!(ts.len(), 1 + 2 * 2);

        // One heavy battlefield: partials 0, 1, 2 troops; the adversary has
        // two undominated responses only when the battlefield is affordable.
        let split = HeavyLightSplit::at(&w, &rat(5));
        assert_eq!(split.heavy, vec![0]);
        let ts: Vec<Triplet> = enumerate_triplets(&g, &split, &ratio(1, 2))
            .unwrap()
            .collect();
        let opts = 1 + 2; // sentinel + one light battlefield · n=2 ratios
        assert_eq!(ts.len(), opts + opts * opts + opts);
        let partials: BTreeSet<u32> = ts.iter().map(|t| t.xh[0]).collect();
        assert_eq!(partials, BTreeSet::from([0, 1, 2]));
    }

    /// For a fixed heavy side the candidate count is quadratic in the number
    /// of light battlefields — constant second differences — because each
    /// heavy response picks one of O(k_light · n) stop options and the
    /// response count does not grow with the light side.
    #[test]
    fn triplet_enumeration_growth_is_polynomial() {
        let counts: Vec<i64> = (1..=4)
            .map(|light| {
                let mut w = vec![10u64];
                w.extend(std::iter::repeat(1).take(light));
                let g = GameInstance::new(3, 3, w).unwrap();
                let split = HeavyLightSplit::at(&g.rational_weights(), &rat(5));
                enumerate_triplets(&g, &split, &ratio(1, 4)).unwrap().count() as i64
            })
            .collect();
        assert_eq!(counts, vec![52, 154, 310, 520]);
        let second: Vec<i64> = counts
            .windows(3)
            .map(|w| w[2] - 2 * w[1] + w[0])
            .collect();
        assert_eq!(second, vec![54, 54]);
    }

    #[test]
    fn satisfy_triplet_reproduces_the_all_heavy_guarantee() {
        // All battlefields heavy: the program degenerates to the base case
        // and the value is the worst heavy response.
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &rat(5));
        assert!(split.light.is_empty());
        let t = Triplet {
            xh: vec![2, 2, 1, 0],
            b: vec![None; 3],
            r: vec![Rational::zero(); 3],
        };
        let (ok, xl, value) = satisfy_triplet_dp(&g, &split, &t).unwrap();
        assert!(ok);
        assert_eq!(value, 15);
        assert_eq!(xl.unwrap().discrete_entries().unwrap(), vec![0; 4]);
    }

    #[test]
    fn satisfy_triplet_rejects_impossible_guesses() {
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &rat(5));
        // More heavy troops than the budget allows.
        let t = Triplet {
            xh: vec![6, 0, 0, 0],
            b: vec![None; 3],
            r: vec![Rational::zero(); 3],
        };
        let (ok, xl, value) = satisfy_triplet_dp(&g, &split, &t).unwrap();
        assert!(!ok && xl.is_none() && value == 0);

        // Two responses pinning the same battlefield to different troops.
        let g = inst(3, 2, &[9, 9, 2]);
        let w = g.rational_weights();
        let split = HeavyLightSplit::at(&w, &rat(9));
        assert_eq!(split.heavy, vec![0, 1]);
        let t = Triplet {
            xh: vec![2],
            b: vec![Some(2), Some(2), None],
            r: vec![rat(2), rat(1), Rational::zero()],
        };
        let (ok, _, _) = satisfy_triplet_dp(&g, &split, &t).unwrap();
        assert!(!ok);
    }

    #[test]
    fn pure_ptas_certifies_the_worked_instance() {
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let (_, certified) = pure_ptas(&g, 15, &ratio(1, 20)).unwrap();
        assert_eq!(certified, 15);
    }

    #[test]
    fn pure_ptas_concentrates_on_a_dominant_battlefield() {
        let g = inst(3, 1, &[9, 1]);
        let (_, certified) = pure_ptas(&g, 9, &ratio(1, 2)).unwrap();
        assert_eq!(certified, 9);
    }

    #[test]
    fn pure_ptas_flags_unachievable_targets() {
        // With m ≥ n the opponent can match any allocation, so every pure
        // strategy certifies zero; the caller sees the failed precondition.
        let g = inst(2, 3, &[5, 3]);
        let (_, certified) = pure_ptas(&g, 1, &ratio(1, 2)).unwrap();
        assert_eq!(certified, 0);
    }

    #[test]
    fn third_approx_diversifies_when_concentration_fails() {
        // Concentrating both strategies on one battlefield certifies zero
        // here (the opponent can match), so the search must split them.
        let g = inst(2, 2, &[1, 1]);
        let (s, certified) = third_approx_2strategy(&g, 1).unwrap();
        assert_eq!(certified, 1);
        let pair = canonical_pair(
            s.support()[0].discrete_entries().unwrap(),
            s.support()[1].discrete_entries().unwrap(),
        );
        assert_eq!(pair, (vec![0, 2], vec![2, 0]));
    }

    #[test]
    fn third_approx_concentrates_on_a_single_battlefield() {
        let g = inst(3, 2, &[5]);
        let (s, certified) = third_approx_2strategy(&g, 5).unwrap();
        assert_eq!(certified, 5);
        assert_eq!(s.support()[0].discrete_entries().unwrap(), vec![3]);
        assert_eq!(s.support()[1].discrete_entries().unwrap(), vec![3]);
    }

    #[test]
    fn third_approx_threshold_search_finds_the_spread_pair() {
        // Too many supports for exhaustive pairing, and concentration
        // certifies at most 1: the threshold families must produce the
        // spread allocation that denies the 2-troop opponent everything.
        let g = inst(9, 2, &[1, 1, 1]);
        let (_, certified) = third_approx_2strategy(&g, 3).unwrap();
        assert_eq!(certified, 3);
    }

    #[test]
    fn eps_approx_certifies_the_worked_example_and_dominates_third() {
        let g = inst(2, 2, &[1, 1]);
        let (_, certified) = eps_approx_2strategy(&g, 1, &ratio(1, 4)).unwrap();
        assert_eq!(certified, 1);

        let g = inst(5, 3, &[4, 3, 2]);
        let (_, third) = third_approx_2strategy(&g, 4).unwrap();
        let (_, eps) = eps_approx_2strategy(&g, 4, &ratio(1, 4)).unwrap();
        assert!(eps >= third);
    }

    #[test]
    fn integer_threshold_bits_match_the_rational_reconstruction() {
        let weights = [3u64, 2, 5];
        let mut opts: Vec<Option<IntThr>> = vec![None];
        for idx in 0..weights.len() {
            for cost in 0..=4 {
                opts.push(Some(IntThr {
                    idx,
                    cost,
                    weight: weights[idx],
                }));
            }
        }
        let to_rational = |o: &Option<IntThr>| {
            o.as_ref()
                .map(|t| (t.idx, rat(t.cost as i64) / rat_u64(t.weight)))
        };
        for a in &opts {
            for b in &opts {
                for c in &opts {
                    let thr = Thresholds {
                        a: to_rational(a),
                        b: to_rational(b),
                        c: to_rational(c),
                    };
                    for j in 0..weights.len() {
                        for xj in 0..=3u32 {
                            for xpj in 0..=3u32 {
                                let w_j = rat_u64(weights[j]);
                                assert_eq!(
                                    bits_int(j, xj, xpj, weights[j], a, b, c),
                                    partial_response_thr(j, xj, xpj, &w_j, &thr),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
