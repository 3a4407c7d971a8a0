//! Fractional best responses against a two-strategy opponent.
//!
//! Against a pair (x, x′), player 2's best response decomposes per
//! battlefield into "beat the cheaper strategy" and "upgrade to beat both",
//! priced by the cost vectors below. Relaxing the response to fractional
//! capture shares makes the max-min problem greedy-solvable: always buy the
//! cheapest available weight per troop, keeping both sides' captured weight
//! balanced. The greedy run's terminal state is summarized by a small
//! signature from which the response in every other battlefield can be
//! reconstructed locally.

use num_traits::{One, Signed, Zero};

use crate::core::{payoffs_u32, Error, GameInstance, PureStrategy, Result, StrategyMode};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::{rat, rat_u64, Rational};

/// Per-battlefield capture costs against a two-strategy pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVectors {
    /// Troops needed to capture battlefield i against the first strategy
    /// (after capturing it against the cheaper one, when x′ is cheaper).
    pub c: Vec<u32>,
    /// Additional troops needed to capture against the second strategy.
    pub cprime: Vec<u32>,
}

/// Capture costs per battlefield: beating the smaller allocation costs that
/// allocation, upgrading to beat both costs the difference.
pub fn cost_vectors(x: &PureStrategy, xp: &PureStrategy) -> Result<CostVectors> {
    let xs = x.discrete_entries()?;
    let xps = xp.discrete_entries()?;
    if xs.len() != xps.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: xps.len(),
        });
    }
    let mut c = Vec::with_capacity(xs.len());
    let mut cprime = Vec::with_capacity(xs.len());
    for (&xi, &xpi) in xs.iter().zip(&xps) {
        if xi <= xpi {
            c.push(xi);
            cprime.push(xpi - xi);
        } else {
            c.push(xi - xpi);
            cprime.push(xpi);
        }
    }
    Ok(CostVectors { c, cprime })
}

/// Cost-per-weight ratios of the two capture stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioVectors {
    pub r: Vec<Rational>,
    pub rprime: Vec<Rational>,
}

/// Ratios rᵢ = cᵢ/wᵢ and r′ᵢ = c′ᵢ/wᵢ; lower means cheaper weight.
pub fn ratio_vectors(cv: &CostVectors, weights: &[Rational]) -> RatioVectors {
    let r = cv
        .c
        .iter()
        .zip(weights)
        .map(|(&c, w)| rat(c as i64) / w.clone())
        .collect();
    let rprime = cv
        .cprime
        .iter()
        .zip(weights)
        .map(|(&c, w)| rat(c as i64) / w.clone())
        .collect();
    RatioVectors { r, rprime }
}

/// A fractional response: per battlefield, the captured shares against each
/// of the two strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalResponse {
    pub h: Vec<Rational>,
    pub hprime: Vec<Rational>,
}

impl FractionalResponse {
    /// Both sides' captured weight; the response's value is the minimum.
    pub fn totals(&self, weights: &[Rational]) -> (Rational, Rational) {
        let th = self
            .h
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (h, w)| acc + h * w);
        let tp = self
            .hprime
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (h, w)| acc + h * w);
        (th, tp)
    }

    /// min(w·h, w·h′), the guaranteed captured weight.
    pub fn value(&self, weights: &[Rational]) -> Rational {
        let (a, b) = self.totals(weights);
        a.min(b)
    }

    /// Checks range, per-battlefield ordering, and the budget.
    pub fn validate(&self, x: &PureStrategy, xp: &PureStrategy, m: u32) -> Result<()> {
        let xs = x.discrete_entries()?;
        let xps = xp.discrete_entries()?;
        if self.h.len() != xs.len() || self.hprime.len() != xs.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: self.h.len(),
            });
        }
        let cv = cost_vectors(x, xp)?;
        let mut spent = Rational::zero();
        for i in 0..xs.len() {
            let (h, hp) = (&self.h[i], &self.hprime[i]);
            if h < &Rational::zero() || h > &Rational::one() || hp < &Rational::zero() || hp > &Rational::one() {
                return Err(Error::InvalidStrategy(format!(
                    "capture share out of [0,1] at battlefield {i}"
                )));
            }
            let ordered = if xs[i] <= xps[i] { hp <= h } else { h <= hp };
            if !ordered {
                return Err(Error::InvalidStrategy(format!(
                    "capture shares violate ordering at battlefield {i}"
                )));
            }
            spent += h * rat(cv.c[i] as i64) + hp * rat(cv.cprime[i] as i64);
        }
        if spent > rat(m as i64) {
            return Err(Error::BudgetViolation {
                spent: spent.to_string(),
                budget: m.to_string(),
            });
        }
        Ok(())
    }
}

/// One step of the greedy run, for invariant checking.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// w·h plus the first utility offset, after the step.
    pub total_h: Rational,
    /// w·h′ plus the second utility offset, after the step.
    pub total_hp: Rational,
    /// Minimum ratio over available h-elements at the start of the step.
    pub min_r: Option<Rational>,
    /// Minimum ratio over available h′-elements at the start of the step.
    pub min_rp: Option<Rational>,
    /// True for steps of the initial one-sided balancing phase.
    pub pre_phase: bool,
}

/// Terminal state of the greedy run.
#[derive(Debug, Clone)]
pub(crate) struct GreedyRun {
    pub h: Vec<Rational>,
    pub hprime: Vec<Rational>,
    /// argmin ratio over available h-elements at the last executed iteration.
    pub last_a: Option<usize>,
    /// argmin over available h′-elements at the last executed iteration.
    pub last_b: Option<usize>,
    /// argmin of rᵢ+r′ᵢ over jointly available battlefields, same iteration.
    pub last_c: Option<usize>,
    pub trace: Vec<TraceStep>,
}

fn argmin_by<'a, I: Iterator<Item = (usize, Rational)>>(iter: I) -> Option<(usize, Rational)>
where
    I: 'a,
{
    let mut best: Option<(usize, Rational)> = None;
    for (i, v) in iter {
        match &best {
            Some((_, bv)) if *bv <= v => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// The greedy fractional response with optional starting utilities.
///
/// Starts from h = h′ = 0 with both sides' captured weight offset by the
/// given amounts (zero for the plain best response). A one-sided pre-phase
/// raises the lighter side's cheapest available elements until the totals
/// match, then the balanced main loop repeatedly executes the cheaper of:
/// the best available pair move (cheapest h-element and cheapest h′-element,
/// raised in weight balance) or the best joint move (one battlefield raised
/// on both sides). Zero-cost elements have ratio zero and are consumed first;
/// ties prefer the smaller battlefield index.
pub(crate) fn greedy_engine(
    cv: &CostVectors,
    le: &[bool],
    weights: &[Rational],
    m: Rational,
    offset1: Rational,
    offset2: Rational,
) -> Result<GreedyRun> {
    let k = le.len();
    let c: Vec<Rational> = cv.c.iter().map(|&v| rat(v as i64)).collect();
    let cp: Vec<Rational> = cv.cprime.iter().map(|&v| rat(v as i64)).collect();
    let r: Vec<Rational> = c.iter().zip(weights).map(|(c, w)| c / w.clone()).collect();
    let rp: Vec<Rational> = cp.iter().zip(weights).map(|(c, w)| c / w.clone()).collect();

    let mut h = vec![Rational::zero(); k];
    let mut hp = vec![Rational::zero(); k];
    let mut budget = m;
    let mut total1 = offset1;
    let mut total2 = offset2;
    let mut trace = Vec::new();

    let one = Rational::one();
    let avail_h = |h: &[Rational], hp: &[Rational], i: usize| {
        h[i] < one && (le[i] || h[i] < hp[i])
    };
    let avail_hp = |h: &[Rational], hp: &[Rational], i: usize| {
        hp[i] < one && (!le[i] || hp[i] < h[i])
    };

    // Pre-phase: raise the lighter side alone until the totals agree.
    let mut guard = 0usize;
    while total1 != total2 {
        guard += 1;
        if guard > 4 * k + 16 {
            return Err(Error::Internal("balancing pre-phase failed to converge".into()));
        }
        let h_side = total1 < total2;
        let pick = if h_side {
            argmin_by((0..k).filter(|&i| avail_h(&h, &hp, i)).map(|i| (i, r[i].clone())))
        } else {
            argmin_by((0..k).filter(|&i| avail_hp(&h, &hp, i)).map(|i| (i, rp[i].clone())))
        };
        let Some((i, _)) = pick else { break };
        let (cost, cap, gap) = if h_side {
            let bound = if le[i] { one.clone() } else { hp[i].clone() };
            (c[i].clone(), bound - &h[i], (&total2 - &total1) / &weights[i])
        } else {
            let bound = if !le[i] { one.clone() } else { h[i].clone() };
            (cp[i].clone(), bound - &hp[i], (&total1 - &total2) / &weights[i])
        };
        let mut t = cap.min(gap);
        if cost.is_positive() {
            t = t.min(&budget / &cost);
        }
        if !t.is_positive() {
            break;
        }
        let gain = &t * &weights[i];
        if h_side {
            h[i] += &t;
            total1 += gain;
        } else {
            hp[i] += &t;
            total2 += gain;
        }
        budget -= t * cost;
        trace.push(TraceStep {
            total_h: total1.clone(),
            total_hp: total2.clone(),
            min_r: None,
            min_rp: None,
            pre_phase: true,
        });
    }

    // Main loop: balanced pair and joint moves.
    let mut last: (Option<usize>, Option<usize>, Option<usize>) = (None, None, None);
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 8 * k + 64 {
            return Err(Error::Internal("greedy main loop failed to converge".into()));
        }
        let a = argmin_by((0..k).filter(|&i| avail_h(&h, &hp, i)).map(|i| (i, r[i].clone())));
        let b = argmin_by((0..k).filter(|&i| avail_hp(&h, &hp, i)).map(|i| (i, rp[i].clone())));
        let d = argmin_by(
            (0..k)
                .filter(|&i| h[i] < one && hp[i] < one)
                .map(|i| (i, r[i].clone() + &rp[i])),
        );
        let pair = match (&a, &b) {
            (Some((ai, ra)), Some((bi, rb))) => Some((*ai, *bi, ra.clone() + rb)),
            _ => None,
        };
        if pair.is_none() && d.is_none() {
            break;
        }
        // Prefer the joint move on cost ties: joint consumption keeps the two
        // shares of a battlefield level, so it never unlocks second-stage
        // elements early, which keeps single-element consumption aligned with
        // the per-side thresholds the signature reconstruction relies on.
        let use_pair = match (&pair, &d) {
            (Some((_, _, ps)), Some((_, ds))) => ps < ds,
            (Some(_), None) => true,
            _ => false,
        };

        let pair_step = |h: &[Rational], hp: &[Rational], budget: &Rational| -> Option<(usize, usize, Rational, Rational)> {
            let (ai, bi, _) = pair.clone()?;
            let cap_a = (if le[ai] { one.clone() } else { hp[ai].clone() }) - &h[ai];
            let cap_b = (if !le[bi] { one.clone() } else { h[bi].clone() }) - &hp[bi];
            // Balance: t·w_a = t′·w_b.
            let scale = &weights[ai] / &weights[bi];
            let mut t = cap_a.min(cap_b * (&weights[bi] / &weights[ai]));
            let unit_cost = &c[ai] + &cp[bi] * &scale;
            if unit_cost.is_positive() {
                t = t.min(budget / &unit_cost);
            }
            if t.is_positive() {
                let tp = &t * &scale;
                Some((ai, bi, t, tp))
            } else {
                None
            }
        };
        let joint_step = |h: &[Rational], hp: &[Rational], budget: &Rational| -> Option<(usize, Rational)> {
            let (di, _) = d.clone()?;
            let mut t = (one.clone() - &h[di]).min(one.clone() - &hp[di]);
            let unit_cost = &c[di] + &cp[di];
            if unit_cost.is_positive() {
                t = t.min(budget / &unit_cost);
            }
            if t.is_positive() {
                Some((di, t))
            } else {
                None
            }
        };

        enum Move {
            Pair(usize, usize, Rational, Rational),
            Joint(usize, Rational),
        }
        let mv = if use_pair {
            pair_step(&h, &hp, &budget)
                .map(|(a, b, t, tp)| Move::Pair(a, b, t, tp))
                .or_else(|| joint_step(&h, &hp, &budget).map(|(d, t)| Move::Joint(d, t)))
        } else {
            joint_step(&h, &hp, &budget)
                .map(|(d, t)| Move::Joint(d, t))
                .or_else(|| pair_step(&h, &hp, &budget).map(|(a, b, t, tp)| Move::Pair(a, b, t, tp)))
        };
        let Some(mv) = mv else { break };

        last = (
            a.as_ref().map(|(i, _)| *i),
            b.as_ref().map(|(i, _)| *i),
            d.as_ref().map(|(i, _)| *i),
        );
        let min_r = a.map(|(_, v)| v);
        let min_rp = b.map(|(_, v)| v);
        match mv {
            Move::Pair(ai, bi, t, tp) => {
                budget -= &t * &c[ai] + &tp * &cp[bi];
                total1 += &t * &weights[ai];
                total2 += &tp * &weights[bi];
                h[ai] += t;
                hp[bi] += tp;
            }
            Move::Joint(di, t) => {
                budget -= &t * (&c[di] + &cp[di]);
                total1 += &t * &weights[di];
                total2 += &t * &weights[di];
                h[di] += &t;
                hp[di] += t;
            }
        }
        trace.push(TraceStep {
            total_h: total1.clone(),
            total_hp: total2.clone(),
            min_r,
            min_rp,
            pre_phase: false,
        });
    }

    Ok(GreedyRun {
        h,
        hprime: hp,
        last_a: last.0,
        last_b: last.1,
        last_c: last.2,
        trace,
    })
}

fn le_types(x: &[u32], xp: &[u32]) -> Vec<bool> {
    x.iter().zip(xp).map(|(a, b)| a <= b).collect()
}

/// The optimal fractional response to the pair (x, x′): a maximizer of
/// min(w·h, w·h′) subject to shares in [0,1], the per-battlefield ordering,
/// and the troop budget.
pub fn best_fractional_response(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<FractionalResponse> {
    Ok(best_fractional_response_traced(x, xp, inst)?.0)
}

/// As [`best_fractional_response`], also returning the per-iteration trace.
pub fn best_fractional_response_traced(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<(FractionalResponse, Vec<TraceStep>)> {
    x.validate(inst, inst.n())?;
    xp.validate(inst, inst.n())?;
    let xs = x.discrete_entries()?;
    let xps = xp.discrete_entries()?;
    let cv = cost_vectors(x, xp)?;
    let run = greedy_engine(
        &cv,
        &le_types(&xs, &xps),
        &inst.rational_weights(),
        rat(inst.m() as i64),
        Rational::zero(),
        Rational::zero(),
    )?;
    Ok((
        FractionalResponse {
            h: run.h,
            hprime: run.hprime,
        },
        run.trace,
    ))
}

/// Reference LP for the fractional max-min response value.
pub fn fractional_lp_value(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<Rational> {
    let xs = x.discrete_entries()?;
    let xps = xp.discrete_entries()?;
    let cv = cost_vectors(x, xp)?;
    let w = inst.rational_weights();
    let k = xs.len();
    // Variables: h_0..h_{k-1}, h′_0..h′_{k-1}, v.
    let nv = 2 * k + 1;
    let v = 2 * k;
    let mut prog = LinearProgram::new(nv);
    prog.objective[v] = Rational::one();
    for i in 0..2 * k {
        prog.upper[i] = Some(Rational::one());
    }
    let mut row = vec![Rational::zero(); nv];
    for i in 0..k {
        row[i] = -w[i].clone();
    }
    row[v] = Rational::one();
    prog.constrain(row, Relation::Le, Rational::zero());
    let mut row = vec![Rational::zero(); nv];
    for i in 0..k {
        row[k + i] = -w[i].clone();
    }
    row[v] = Rational::one();
    prog.constrain(row, Relation::Le, Rational::zero());
    let mut row = vec![Rational::zero(); nv];
    for i in 0..k {
        row[i] = rat(cv.c[i] as i64);
        row[k + i] = rat(cv.cprime[i] as i64);
    }
    prog.constrain(row, Relation::Le, rat(inst.m() as i64));
    for i in 0..k {
        let mut row = vec![Rational::zero(); nv];
        if xs[i] <= xps[i] {
            row[k + i] = Rational::one();
            row[i] = -Rational::one();
        } else {
            row[i] = Rational::one();
            row[k + i] = -Rational::one();
        }
        prog.constrain(row, Relation::Le, Rational::zero());
    }
    let out = lp::solve(&prog)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Internal("fractional response LP must be optimal".into()));
    }
    out.objective_value
        .ok_or_else(|| Error::Internal("optimal LP without value".into()))
}

/// Realizes an integral fractional response as a pure strategy:
/// yᵢ = hᵢcᵢ + h′ᵢc′ᵢ.
pub fn strategy_from_h(
    x: &PureStrategy,
    xp: &PureStrategy,
    resp: &FractionalResponse,
) -> Result<PureStrategy> {
    let cv = cost_vectors(x, xp)?;
    let mut entries = Vec::with_capacity(cv.c.len());
    for i in 0..cv.c.len() {
        for share in [&resp.h[i], &resp.hprime[i]] {
            if !share.is_integer() {
                return Err(Error::InvalidStrategy(format!(
                    "capture share at battlefield {i} is not integral"
                )));
            }
        }
        entries.push(&resp.h[i] * rat(cv.c[i] as i64) + &resp.hprime[i] * rat(cv.cprime[i] as i64));
    }
    PureStrategy::from_rationals(StrategyMode::Discrete, entries)
}

/// The rounded greedy opponent: floors the optimal fractional response and
/// plays the resulting pure strategy. Returns it with its guaranteed payoff
/// min(u₂(x,y), u₂(x′,y)); this loses at most 2·w_max against the exact
/// two-strategy best response.
pub fn greedy_opponent_response(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<(PureStrategy, u64)> {
    let (run, sig) = run_and_signature(x, xp, inst)?;
    let xs = x.discrete_entries()?;
    let xps = xp.discrete_entries()?;
    let w = inst.rational_weights();
    let floored = composed_rounding(&run, &sig, &xs, &xps, &w);
    let y = strategy_from_h(x, xp, &floored)?;
    y.validate(inst, inst.m())?;
    let ys = y.discrete_entries()?;
    let u2x = payoffs_u32(&xs, &ys, inst.weights()).1;
    let u2xp = payoffs_u32(&xps, &ys, inst.weights()).1;
    Ok((y, u2x.min(u2xp)))
}

/// Rounds a greedy run down to a 0/1 share vector: signature battlefields
/// keep their floored run shares, every other battlefield is rebuilt from the
/// signature thresholds, so the rounded response is exactly the strategy the
/// local reconstruction describes.
fn composed_rounding(
    run: &GreedyRun,
    sig: &Signature,
    xs: &[u32],
    xps: &[u32],
    w: &[Rational],
) -> FractionalResponse {
    let thr = Thresholds::of(sig);
    let named = sig.battlefields();
    let mut h = Vec::with_capacity(xs.len());
    let mut hprime = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        if named.contains(&i) {
            h.push(run.h[i].floor());
            hprime.push(run.hprime[i].floor());
        } else {
            let (bh, bhp) = partial_response_thr(i, xs[i], xps[i], &w[i], &thr);
            h.push(rat(bh as i64));
            hprime.push(rat(bhp as i64));
        }
    }
    FractionalResponse { h, hprime }
}

/// Terminal summary of the greedy run: the last iteration's three selected
/// battlefields with their values, the troops spent on those elements, and
/// the rounded greedy's payoffs earned inside them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    /// Cheapest available h-element at the last iteration, if any.
    pub a: Option<usize>,
    /// Cheapest available h′-element at the last iteration, if any.
    pub b: Option<usize>,
    /// Cheapest jointly available battlefield at the last iteration, if any.
    pub cidx: Option<usize>,
    /// Whole troops the fractional response spends on the selected elements.
    pub mu: u32,
    /// Player 1's first-strategy values at (a, b, cidx); 0 at sentinels.
    pub x_abc: [u32; 3],
    /// Player 1's second-strategy values at (a, b, cidx); 0 at sentinels.
    pub xprime_abc: [u32; 3],
    /// Rounded greedy's payoff against x inside the selected battlefields.
    pub udot1: Rational,
    /// Rounded greedy's payoff against x′ inside the selected battlefields.
    pub udot2: Rational,
    thr_a: Option<Rational>,
    thr_b: Option<Rational>,
    thr_c: Option<Rational>,
}

pub(crate) fn single_costs(x: u32, xp: u32) -> (u32, u32) {
    if x <= xp {
        (x, xp - x)
    } else {
        (x - xp, xp)
    }
}

impl Signature {
    /// Builds a signature from its raw fields, deriving the ratio thresholds
    /// from the stored values and the instance weights.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        a: Option<usize>,
        b: Option<usize>,
        cidx: Option<usize>,
        mu: u32,
        x_abc: [u32; 3],
        xprime_abc: [u32; 3],
        udot1: Rational,
        udot2: Rational,
        weights: &[Rational],
    ) -> Signature {
        let thr_a = a.map(|i| {
            let (c, _) = single_costs(x_abc[0], xprime_abc[0]);
            rat(c as i64) / &weights[i]
        });
        let thr_b = b.map(|i| {
            let (_, cp) = single_costs(x_abc[1], xprime_abc[1]);
            rat(cp as i64) / &weights[i]
        });
        let thr_c = cidx.map(|i| {
            let (c, cp) = single_costs(x_abc[2], xprime_abc[2]);
            rat((c + cp) as i64) / &weights[i]
        });
        Signature {
            a,
            b,
            cidx,
            mu,
            x_abc,
            xprime_abc,
            udot1,
            udot2,
            thr_a,
            thr_b,
            thr_c,
        }
    }

    /// The distinct battlefields named by the signature.
    pub fn battlefields(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for idx in [self.a, self.b, self.cidx].into_iter().flatten() {
            if !out.contains(&idx) {
                out.push(idx);
            }
        }
        out
    }
}

/// Replays the greedy run on (x, x′) and records its signature.
pub fn compute_signature(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<Signature> {
    run_and_signature(x, xp, inst).map(|(_, sig)| sig)
}

/// Runs the greedy on (x, x′) and summarizes the run into its signature.
fn run_and_signature(
    x: &PureStrategy,
    xp: &PureStrategy,
    inst: &GameInstance,
) -> Result<(GreedyRun, Signature)> {
    x.validate(inst, inst.n())?;
    xp.validate(inst, inst.n())?;
    let xs = x.discrete_entries()?;
    let xps = xp.discrete_entries()?;
    let cv = cost_vectors(x, xp)?;
    let w = inst.rational_weights();
    let run = greedy_engine(
        &cv,
        &le_types(&xs, &xps),
        &w,
        rat(inst.m() as i64),
        Rational::zero(),
        Rational::zero(),
    )?;

    // Troops spent on the distinct selected elements.
    let mut mu = Rational::zero();
    let mut seen_h = Vec::new();
    let mut seen_hp = Vec::new();
    for i in [run.last_a, run.last_c].into_iter().flatten() {
        if !seen_h.contains(&i) {
            seen_h.push(i);
            mu += &run.h[i] * rat(cv.c[i] as i64);
        }
    }
    for i in [run.last_b, run.last_c].into_iter().flatten() {
        if !seen_hp.contains(&i) {
            seen_hp.push(i);
            mu += &run.hprime[i] * rat(cv.cprime[i] as i64);
        }
    }
    // Generically the run leaves every unselected element at 0 or 1, making
    // this spend integral. Tied cost ratios can strand a fractional element
    // outside the selection, so round down: the whole troops certainly
    // committed to the selected elements.
    let mu = u32::try_from(mu.floor().to_integer()).map_err(|_| {
        Error::Internal("signature troop count out of range".into())
    })?;

    // Rounded greedy payoffs inside the selected battlefields.
    let floored = FractionalResponse {
        h: run.h.iter().map(|v| v.floor()).collect(),
        hprime: run.hprime.iter().map(|v| v.floor()).collect(),
    };
    let y = strategy_from_h(x, xp, &floored)?.discrete_entries()?;
    let mut distinct = Vec::new();
    for idx in [run.last_a, run.last_b, run.last_c].into_iter().flatten() {
        if !distinct.contains(&idx) {
            distinct.push(idx);
        }
    }
    let mut udot1 = Rational::zero();
    let mut udot2 = Rational::zero();
    for &i in &distinct {
        if y[i] >= xs[i] {
            udot1 += &w[i];
        }
        if y[i] >= xps[i] {
            udot2 += &w[i];
        }
    }

    let pick = |idx: Option<usize>, v: &[u32]| idx.map_or(0, |i| v[i]);
    let sig = Signature::from_parts(
        run.last_a,
        run.last_b,
        run.last_c,
        mu,
        [
            pick(run.last_a, &xs),
            pick(run.last_b, &xs),
            pick(run.last_c, &xs),
        ],
        [
            pick(run.last_a, &xps),
            pick(run.last_b, &xps),
            pick(run.last_c, &xps),
        ],
        udot1,
        udot2,
        &w,
    );
    Ok((run, sig))
}

/// Per-battlefield thresholds of a signature, reusable with any weight type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Thresholds {
    pub a: Option<(usize, Rational)>,
    pub b: Option<(usize, Rational)>,
    pub c: Option<(usize, Rational)>,
}

impl Thresholds {
    pub(crate) fn of(sig: &Signature) -> Thresholds {
        Thresholds {
            a: sig.a.map(|i| (i, sig.thr_a.clone().expect("threshold set with index"))),
            b: sig.b.map(|i| (i, sig.thr_b.clone().expect("threshold set with index"))),
            c: sig.cidx.map(|i| (i, sig.thr_c.clone().expect("threshold set with index"))),
        }
    }
}

/// Threshold test: strictly cheaper passes; a tie passes for smaller indices
/// (they are consumed first); a missing threshold passes.
fn passes(ratio: &Rational, i: usize, thr: &Option<(usize, Rational)>) -> bool {
    match thr {
        None => true,
        Some((idx, t)) => ratio < t || (ratio == t && i < *idx),
    }
}

pub(crate) fn partial_response_thr(
    i: usize,
    x_i: u32,
    xp_i: u32,
    w_i: &Rational,
    thr: &Thresholds,
) -> (bool, bool) {
    let (c, cp) = single_costs(x_i, xp_i);
    let r = rat(c as i64) / w_i;
    let rp = rat(cp as i64) / w_i;
    let joint = r.clone() + &rp;
    if x_i <= xp_i {
        if passes(&r, i, &thr.a) {
            (true, passes(&rp, i, &thr.b))
        } else if passes(&joint, i, &thr.c) {
            (true, true)
        } else {
            (false, false)
        }
    } else if passes(&rp, i, &thr.b) {
        (passes(&r, i, &thr.a), true)
    } else if passes(&joint, i, &thr.c) {
        (true, true)
    } else {
        (false, false)
    }
}

/// Reconstructs the rounded greedy's response at a non-signature battlefield
/// from the signature thresholds alone. Returns the pair (hᵢ, h′ᵢ) ∈ {0,1}².
pub fn partial_response(
    i: usize,
    x_i: u32,
    xp_i: u32,
    w_i: u64,
    sig: &Signature,
) -> Result<(bool, bool)> {
    if [sig.a, sig.b, sig.cidx].into_iter().flatten().any(|s| s == i) {
        return Err(Error::Malformed(format!(
            "battlefield {i} is part of the signature"
        )));
    }
    if w_i == 0 {
        return Err(Error::Malformed("battlefield weight must be positive".into()));
    }
    Ok(partial_response_thr(
        i,
        x_i,
        xp_i,
        &rat_u64(w_i),
        &Thresholds::of(sig),
    ))
}

/// Enumerates a superset of every signature realizable by some 2-strategy on
/// the instance: all index triples including sentinels, all value pairs
/// within the budget, every integral troop count, and every pair of
/// subset-sums of the selected weights as the inside payoffs.
pub fn enumerate_signatures(inst: &GameInstance) -> impl Iterator<Item = Signature> + '_ {
    let n = inst.n();
    let m = inst.m();
    let k = inst.k();
    let w = inst.rational_weights();

    // One slot: absent, or an index with its pair of values.
    let mut slots: Vec<Option<(usize, u32, u32)>> = vec![None];
    for i in 0..k {
        for x in 0..=n {
            for xp in 0..=n {
                slots.push(Some((i, x, xp)));
            }
        }
    }
    let s_len = slots.len();
    let slots2 = slots.clone();
    let slots3 = slots.clone();

    (0..s_len).flat_map(move |ia| {
        let sa = slots[ia];
        let slots2 = slots2.clone();
        let slots3 = slots3.clone();
        let w = w.clone();
        (0..s_len).flat_map(move |ib| {
            let sb = slots2[ib];
            let slots3 = slots3.clone();
            let w = w.clone();
            (0..s_len).filter_map(move |ic| {
                let sc = slots3[ic];
                // Coinciding indices must agree on values; distinct ones must
                // fit player 1's budget on each side.
                let mut idxs: Vec<(usize, u32, u32)> = Vec::new();
                for s in [sa, sb, sc].into_iter().flatten() {
                    match idxs.iter().find(|(i, _, _)| *i == s.0) {
                        Some(&(_, x, xp)) => {
                            if (x, xp) != (s.1, s.2) {
                                return None;
                            }
                        }
                        None => idxs.push(s),
                    }
                }
                let sum_x: u64 = idxs.iter().map(|&(_, x, _)| x as u64).sum();
                let sum_xp: u64 = idxs.iter().map(|&(_, _, xp)| xp as u64).sum();
                if sum_x > n as u64 || sum_xp > n as u64 {
                    return None;
                }
                Some((sa, sb, sc, idxs))
            })
            .flat_map({
                let w = w.clone();
                move |(sa, sb, sc, idxs)| {
                    // Candidate inside payoffs: subset sums of the distinct
                    // selected weights, on each side independently.
                    let mut sums: Vec<Rational> = vec![Rational::zero()];
                    for &(i, _, _) in &idxs {
                        let mut next = sums.clone();
                        for s in &sums {
                            let cand = s + &w[i];
                            if !next.contains(&cand) {
                                next.push(cand);
                            }
                        }
                        sums = next;
                    }
                    let w = w.clone();
                    (0..=m).flat_map(move |mu| {
                        let sums1 = sums.clone();
                        let sums2 = sums.clone();
                        let w = w.clone();
                        sums1.into_iter().flat_map(move |u1| {
                            let w = w.clone();
                            let sums2 = sums2.clone();
                            sums2.into_iter().map(move |u2| {
                                Signature::from_parts(
                                    sa.map(|s| s.0),
                                    sb.map(|s| s.0),
                                    sc.map(|s| s.0),
                                    mu,
                                    [
                                        sa.map_or(0, |s| s.1),
                                        sb.map_or(0, |s| s.1),
                                        sc.map_or(0, |s| s.1),
                                    ],
                                    [
                                        sa.map_or(0, |s| s.2),
                                        sb.map_or(0, |s| s.2),
                                        sc.map_or(0, |s| s.2),
                                    ],
                                    u1.clone(),
                                    u2,
                                    &w,
                                )
                            })
                        })
                    })
                }
            })
        })
    })
}
