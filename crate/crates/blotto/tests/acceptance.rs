//! Acceptance gate for the solver suite: every headline guarantee is checked
//! end to end, on the reference instances where a value is pinned exactly and
//! on seeded random suites where a program is cross-validated against brute
//! force. Each test prints a single `criterion NN <name> ... PASS/FAIL` line
//! (run with `--nocapture` to see them on success).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use blotto::approx::{
    eps_approx_2strategy, pure_ptas, third_approx_2strategy, weak_adversary_pure, HeavyLightSplit,
};
use blotto::bestresp::{
    certified_pair_level, expected_best_response_dp, pure_best_response_dp,
    two_strategy_prevent_dp,
};
use blotto::continuous::{solve_uniform_c2, verify_2strategy};
use blotto::core::guaranteed_probability;
use blotto::expectation::greedy_weak_adversary_expected;
use blotto::fractional::{
    best_fractional_response, cost_vectors, fractional_lp_value, greedy_opponent_response,
    ratio_vectors, FractionalResponse,
};
use blotto::lp::{self, LinearProgram, LpStatus, Relation};
use blotto::oracle::{enumerate_pure, exact_maxmin_up, exact_pure_maximin};
use blotto::profiles::construct_pc;
use blotto::{ratio, Caps, GameInstance, MixedStrategy, Profile, PureStrategy, Rational};
use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

/// Runs one criterion body, prints its verdict line, and fails the test with
/// the body's explanation when the verdict is FAIL.
fn report(number: u32, name: &str, body: impl FnOnce() -> Check) {
    let outcome = body();
    let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {name} ... {verdict}");
    if let Err(why) = outcome {
        panic!("criterion {number:02} {name}: {why}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($why:tt)+) => {
        if !$cond {
            return Err(format!($($why)+));
        }
    };
}

/// Adapts a library result to the criterion-check error type.
fn lib<T>(r: blotto::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn inst(n: u32, m: u32, w: &[u64]) -> GameInstance {
    GameInstance::new(n, m, w.to_vec()).unwrap()
}

fn big(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

/// Player 2's payoff against allocation `x`: the weight of every battlefield
/// player 2 matches or beats (ties go to player 2).
fn u2(g: &GameInstance, x: &[u32], y: &[u32]) -> u64 {
    g.weights()
        .iter()
        .zip(x.iter().zip(y))
        .filter(|(_, (xi, yi))| yi >= xi)
        .map(|(w, _)| w)
        .sum()
}

fn random_instance(rng: &mut ChaCha8Rng, max_side: u32, max_k: usize, max_w: u64) -> GameInstance {
    let n = rng.gen_range(1..=max_side);
    let m = rng.gen_range(1..=max_side);
    let k = rng.gen_range(1..=max_k);
    let weights = (0..k).map(|_| rng.gen_range(1..=max_w)).collect();
    GameInstance::new(n, m, weights).unwrap()
}

/// Uniformly drops each troop on one battlefield or leaves it unspent.
fn random_allocation(rng: &mut ChaCha8Rng, budget: u32, k: usize) -> Vec<u32> {
    let mut v = vec![0u32; k];
    for _ in 0..budget {
        let slot = rng.gen_range(0..=k);
        if slot < k {
            v[slot] += 1;
        }
    }
    v
}

/// One case of the shared best-response suite: an instance, a pair of pure
/// strategies, and the ingredients of a mixed strategy with small rational
/// probabilities (`nums[j] / nums.sum()`).
struct SuiteCase {
    g: GameInstance,
    x: Vec<u32>,
    xp: Vec<u32>,
    supports: Vec<Vec<u32>>,
    nums: Vec<u64>,
}

impl SuiteCase {
    fn mixed(&self) -> blotto::Result<MixedStrategy> {
        let denom: u64 = self.nums.iter().sum();
        MixedStrategy::new(
            self.supports.iter().cloned().map(PureStrategy::discrete).collect(),
            self.nums.iter().map(|&a| Rational::new(a.into(), denom.into())).collect(),
        )
    }
}

/// The 1000-case random suite shared by the best-response and weak-adversary
/// criteria; both regenerate it from the same seed so they see the same
/// instances.
fn best_response_suite() -> Vec<SuiteCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    (0..1000)
        .map(|_| {
            let g = random_instance(&mut rng, 8, 5, 10);
            let k = g.k();
            let x = random_allocation(&mut rng, g.n(), k);
            let xp = random_allocation(&mut rng, g.n(), k);
            let support_size = rng.gen_range(1..=3);
            let supports = (0..support_size)
                .map(|_| random_allocation(&mut rng, g.n(), k))
                .collect();
            let nums = (0..support_size).map(|_| rng.gen_range(1..=5)).collect();
            SuiteCase { g, x, xp, supports, nums }
        })
        .collect()
}

/// The 500-case random suite shared by the fractional-response criteria.
fn fractional_suite() -> Vec<(GameInstance, Vec<u32>, Vec<u32>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..500)
        .map(|_| {
            let g = random_instance(&mut rng, 6, 4, 10);
            let k = g.k();
            let x = random_allocation(&mut rng, g.n(), k);
            let xp = random_allocation(&mut rng, g.n(), k);
            (g, x, xp)
        })
        .collect()
}

/// Pours fractional mass that sits on battlefields with equal cost ratios
/// into ascending indices, honoring the response-ordering bounds. Within one
/// equal-ratio class, cost is ratio × moved weight-mass, so the pour keeps
/// the response's value, budget, and per-side totals unchanged while leaving
/// at most one fractional element per class.
fn consolidate(
    frac: &FractionalResponse,
    x: &PureStrategy,
    xp: &PureStrategy,
    g: &GameInstance,
) -> FractionalResponse {
    let xs = x.discrete_entries().unwrap();
    let xps = xp.discrete_entries().unwrap();
    let cv = cost_vectors(x, xp).unwrap();
    let w = g.rational_weights();
    let rv = ratio_vectors(&cv, &w);
    let mut h = frac.h.clone();
    let mut hp = frac.hprime.clone();
    let one = Rational::one();
    for h_side in [true, false] {
        let ratios = if h_side { &rv.r } else { &rv.rprime };
        let mut classes: std::collections::BTreeMap<Rational, Vec<usize>> = Default::default();
        for i in 0..w.len() {
            let share = if h_side { &h[i] } else { &hp[i] };
            if !share.is_integer() {
                classes.entry(ratios[i].clone()).or_default().push(i);
            }
        }
        for (_, group) in classes {
            if group.len() < 2 {
                continue;
            }
            let bounds: Vec<(Rational, Rational)> = group
                .iter()
                .map(|&i| {
                    let le = xs[i] <= xps[i];
                    match (h_side, le) {
                        (true, true) => (hp[i].clone(), one.clone()),
                        (true, false) => (Rational::zero(), hp[i].clone()),
                        (false, true) => (Rational::zero(), h[i].clone()),
                        (false, false) => (h[i].clone(), one.clone()),
                    }
                })
                .collect();
            let shares = |i: usize| if h_side { &h[i] } else { &hp[i] };
            let mut extra = Rational::zero();
            for (&i, (lo, _)) in group.iter().zip(&bounds) {
                extra += (shares(i) - lo) * &w[i];
            }
            for (&i, (lo, hi)) in group.iter().zip(&bounds) {
                let room = (hi - lo) * &w[i];
                let take = if extra < room { extra.clone() } else { room };
                let val = lo + &take / &w[i];
                extra -= take;
                if h_side {
                    h[i] = val;
                } else {
                    hp[i] = val;
                }
            }
            assert!(extra.is_zero(), "class mass fits inside its own bounds");
        }
    }
    FractionalResponse { h, hprime: hp }
}

#[test]
fn acceptance_01_guaranteed_probability() {
    report(1, "reference four-strategy probability", || {
        let started = Instant::now();
        let g = inst(4, 6, &[5, 5, 5, 10]);
        let s = lib(MixedStrategy::new(
            vec![
                PureStrategy::discrete(vec![0, 0, 0, 4]),
                PureStrategy::discrete(vec![1, 1, 2, 0]),
                PureStrategy::discrete(vec![1, 2, 1, 0]),
                PureStrategy::discrete(vec![2, 1, 1, 0]),
            ],
            vec![ratio(2, 5), ratio(1, 5), ratio(1, 5), ratio(1, 5)],
        ))?;
        let p = lib(guaranteed_probability(&s, 10, &g, &Caps::default()))?;
        ensure!(p == ratio(2, 5), "guaranteed probability {p} differs from 2/5");
        let elapsed = started.elapsed();
        ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1 s");
        Ok(())
    });
}

#[test]
fn acceptance_02_uniform_profile_cap() {
    report(2, "uniform-profile probability cap", || {
        let started = Instant::now();
        let g = inst(4, 6, &[5, 5, 5, 10]);
        let caps = Caps::default();
        let uniform = lib(Profile::new(vec![ratio(1, 4); 4]))?;
        let (p_star, witness) = lib(exact_maxmin_up(&g, 4, 10, Some(&uniform), &caps))?;
        ensure!(p_star <= ratio(1, 4), "uniform-profile optimum {p_star} exceeds 1/4");
        let again = lib(guaranteed_probability(&witness, 10, &g, &caps))?;
        ensure!(again == p_star, "witness re-check {again} disagrees with {p_star}");
        let elapsed = started.elapsed();
        ensure!(elapsed < Duration::from_secs(1800), "took {elapsed:?}, budget 30 min");
        Ok(())
    });
}

#[test]
fn acceptance_03_pure_maximin_and_ptas() {
    report(3, "reference pure maximin and pure PTAS", || {
        let started = Instant::now();
        let g = inst(5, 2, &[10, 8, 7, 5]);
        let caps = Caps::default();
        let total = g.total_weight();
        let secured = |x: &PureStrategy| -> Result<u64, String> {
            let (_, conceded) = lib(pure_best_response_dp(&g, x))?;
            Ok(total - conceded)
        };
        let (value, witness) = lib(exact_pure_maximin(&g, &caps))?;
        ensure!(value == 15, "pure maximin {value} differs from 15");
        ensure!(secured(&witness)? == 15, "oracle witness fails to secure 15");
        let reference = PureStrategy::discrete(vec![2, 2, 1, 0]);
        ensure!(secured(&reference)? == 15, "(2,2,1,0) fails to secure 15");
        let (found, certified) = lib(pure_ptas(&g, 15, &ratio(1, 20)))?;
        ensure!(certified >= 15, "PTAS certified {certified}, needed at least 15");
        ensure!(secured(&found)? == certified, "PTAS certificate is not exact");
        let elapsed = started.elapsed();
        ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}, budget 10 s");
        Ok(())
    });
}

#[test]
fn acceptance_04_best_response_programs() {
    report(4, "best-response programs match enumeration", || {
        let mut caps_rng = ChaCha8Rng::seed_from_u64(42);
        for (round, case) in best_response_suite().iter().enumerate() {
            let g = &case.g;
            let k = g.k();
            let total = g.total_weight();
            let responses: Vec<Vec<u32>> = enumerate_pure(g.m(), k).collect();
            let x = PureStrategy::discrete(case.x.clone());
            let xp = PureStrategy::discrete(case.xp.clone());

            // Pure best response.
            let (wit, dp) = lib(pure_best_response_dp(g, &x))?;
            let brute = responses.iter().map(|y| u2(g, &case.x, y)).max().unwrap();
            ensure!(dp == brute, "round {round}: pure DP {dp}, enumeration {brute}");
            let wy = lib(wit.discrete_entries())?;
            ensure!(u2(g, &case.x, &wy) == brute, "round {round}: pure witness misses the optimum");

            // Expected best response against the mixed strategy, compared in
            // integer numerators over the common probability denominator.
            let s = lib(case.mixed())?;
            let denom: u64 = case.nums.iter().sum();
            let numerator = |y: &[u32]| -> u64 {
                case.supports.iter().zip(&case.nums).map(|(xj, a)| a * u2(g, xj, y)).sum()
            };
            let (ewit, edp) = lib(expected_best_response_dp(g, &s))?;
            let best_num = responses.iter().map(|y| numerator(y)).max().unwrap();
            let brute_e = Rational::new(best_num.into(), denom.into());
            ensure!(edp == brute_e, "round {round}: expected DP {edp}, enumeration {brute_e}");
            let ey = lib(ewit.discrete_entries())?;
            ensure!(numerator(&ey) == best_num, "round {round}: expected witness misses the optimum");

            // Prevention program at random concession caps.
            let cap1 = caps_rng.gen_range(0..=total);
            let cap2 = caps_rng.gen_range(0..=total);
            let u1 = |xv: &[u32], y: &[u32]| total - u2(g, xv, y);
            let (ok, prevent_wit) = lib(two_strategy_prevent_dp(&x, &xp, g, cap1, cap2))?;
            let brute_ok = responses
                .iter()
                .any(|y| u1(&case.x, y) <= cap1 && u1(&case.xp, y) <= cap2);
            ensure!(ok == brute_ok, "round {round}: prevention DP {ok}, enumeration {brute_ok}");
            if ok {
                let witness = prevent_wit
                    .ok_or_else(|| format!("round {round}: prevention succeeded without a witness"))?;
                let y = lib(witness.discrete_entries())?;
                ensure!(
                    u1(&case.x, &y) <= cap1 && u1(&case.xp, &y) <= cap2,
                    "round {round}: prevention witness violates a cap"
                );
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_05_fractional_optimality() {
    report(5, "fractional greedy is LP-optimal and near-integral", || {
        for (round, (g, xv, xpv)) in fractional_suite().iter().enumerate() {
            let x = PureStrategy::discrete(xv.clone());
            let xp = PureStrategy::discrete(xpv.clone());
            let w = g.rational_weights();
            let frac = lib(best_fractional_response(&x, &xp, g))?;
            let lp_opt = lib(fractional_lp_value(&x, &xp, g))?;
            ensure!(
                frac.value(&w) == lp_opt,
                "round {round}: greedy value {} differs from LP optimum {lp_opt}",
                frac.value(&w)
            );
            let (th, tp) = frac.totals(&w);
            ensure!(th == tp, "round {round}: terminal totals {th} and {tp} differ");
            let squeezed = consolidate(&frac, &x, &xp, g);
            lib(squeezed.validate(&x, &xp, g.m()))?;
            ensure!(
                squeezed.value(&w) == lp_opt && squeezed.totals(&w) == frac.totals(&w),
                "round {round}: consolidation changed the response's value"
            );
            let fractional = (0..g.k())
                .filter(|&i| !squeezed.h[i].is_integer() || !squeezed.hprime[i].is_integer())
                .count();
            ensure!(
                fractional <= 2,
                "round {round}: {fractional} fractional battlefields after consolidation"
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_06_greedy_opponent_gap() {
    report(6, "greedy opponent within twice the top weight", || {
        for (round, (g, xv, xpv)) in fractional_suite().iter().enumerate() {
            let x = PureStrategy::discrete(xv.clone());
            let xp = PureStrategy::discrete(xpv.clone());
            let (y, got) = lib(greedy_opponent_response(&x, &xp, g))?;
            let yv = lib(y.discrete_entries())?;
            ensure!(
                got == u2(g, xv, &yv).min(u2(g, xpv, &yv)),
                "round {round}: reported value disagrees with the returned response"
            );
            let exact = enumerate_pure(g.m(), g.k())
                .map(|y| u2(g, xv, &y).min(u2(g, xpv, &y)))
                .max()
                .unwrap();
            ensure!(got <= exact, "round {round}: greedy value exceeds the optimum");
            ensure!(
                exact - got <= 2 * g.max_weight(),
                "round {round}: gap {} exceeds twice the top weight",
                exact - got
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_07_weak_adversary_gap() {
    report(7, "weak adversary within eps·u/2", || {
        let caps = Caps::default();
        for (round, case) in best_response_suite().iter().enumerate() {
            let g = &case.g;
            let (u, maximin) = lib(exact_pure_maximin(g, &caps))?;
            if u == 0 {
                continue;
            }
            let weights = g.rational_weights();
            for eps in [ratio(1, 4), ratio(1, 10)] {
                let bound = eps * big(u) / ratio(2, 1);
                let split = HeavyLightSplit::at(&weights, &bound);
                for x in [&maximin, &PureStrategy::discrete(case.x.clone())] {
                    let (_, exact) = lib(pure_best_response_dp(g, x))?;
                    let (_, weak) = lib(weak_adversary_pure(g, x, &split))?;
                    ensure!(weak <= exact, "round {round}: weak adversary beats the exact one");
                    ensure!(
                        big(exact - weak) <= bound,
                        "round {round}: gap {} exceeds {bound}",
                        exact - weak
                    );
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_08_two_strategy_guarantee_floors() {
    report(8, "2-strategy approximation floors", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let caps = Caps::default();
        let mut certified_instances = 0usize;
        let mut divergences = 0usize;
        for round in 0..60 {
            let g = random_instance(&mut rng, 4, 3, 8);
            // The strongest level any half/half pair certifies.
            let pures: Vec<Vec<u32>> = enumerate_pure(g.n(), g.k()).collect();
            let mut u_opt = 0u64;
            for (i, a) in pures.iter().enumerate() {
                for b in &pures[i..] {
                    let pair_level = lib(certified_pair_level(
                        &PureStrategy::discrete(a.clone()),
                        &PureStrategy::discrete(b.clone()),
                        &g,
                        &caps,
                    ))?;
                    u_opt = u_opt.max(pair_level);
                }
            }
            if u_opt == 0 {
                continue;
            }
            certified_instances += 1;
            let (third, cert3) = lib(third_approx_2strategy(&g, u_opt))?;
            ensure!(third.support().len() <= 2, "round {round}: support exceeds two strategies");
            ensure!(
                cert3 >= u_opt.div_ceil(3),
                "round {round}: certified {cert3} below ceil({u_opt}/3)"
            );
            let honest = lib(guaranteed_probability(&third, cert3, &g, &caps))?;
            ensure!(honest >= ratio(1, 2), "round {round}: u/3 certificate is dishonest");
            let (eps_s, cert_eps) = lib(eps_approx_2strategy(&g, u_opt, &ratio(1, 4)))?;
            ensure!(eps_s.support().len() <= 2, "round {round}: support exceeds two strategies");
            let honest = lib(guaranteed_probability(&eps_s, cert_eps, &g, &caps))?;
            ensure!(honest >= ratio(1, 2), "round {round}: (1−ε)u certificate is dishonest");
            if cert_eps < (3 * u_opt).div_ceil(4) {
                divergences += 1;
            }
        }
        ensure!(certified_instances > 0, "the suite produced no certified instance");
        ensure!(divergences == 0, "{divergences} runs fell short of the (1−ε)u floor");
        Ok(())
    });
}

#[test]
fn acceptance_09_continuous_uniform_c2() {
    report(9, "continuous uniform-weight feasibility", || {
        let feasible = lib(solve_uniform_c2(&inst(2, 2, &[1, 1]), 1))?;
        ensure!(feasible.ok, "(2,2,(1,1)) at u=1 reported infeasible");
        let (x, xp) = feasible.witness.ok_or("feasible verdict carried no witness")?;
        let (ok, tuple) = lib(verify_2strategy(&inst(2, 2, &[1, 1]), &x, &xp, &Rational::one()))?;
        ensure!(ok && tuple.is_none(), "returned pair fails re-verification");
        let infeasible = lib(solve_uniform_c2(&inst(1, 2, &[1, 1]), 1))?;
        ensure!(!infeasible.ok, "(1,2,(1,1)) at u=1 reported feasible");
        ensure!(infeasible.witness.is_none(), "infeasible verdict carried a witness");
        ensure!(
            infeasible.margin == Some(Rational::zero()),
            "infeasible verdict lacks the zero-margin certificate"
        );
        Ok(())
    });
}

#[test]
fn acceptance_10_profile_machinery() {
    report(10, "profile construction and optimality", || {
        let caps = Caps::default();
        let uniform = |c: i64| Profile::new(vec![ratio(1, c); c as usize]).unwrap();
        let p2 = lib(construct_pc(2, &caps))?;
        let expected: BTreeSet<Profile> = [uniform(1), uniform(2)].into_iter().collect();
        ensure!(p2 == expected, "P_2 is not exactly {{(1), (1/2, 1/2)}}");
        let p3 = lib(construct_pc(3, &caps))?;
        for c in 1..=3 {
            ensure!(p3.contains(&uniform(c)), "P_3 misses the uniform profile on {c}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for round in 0..200 {
            let g = random_instance(&mut rng, 3, 3, 6);
            let c = rng.gen_range(1..=3usize);
            let u = rng.gen_range(1..=g.total_weight());
            let pool = enumerate_pure(g.n(), g.k()).count();
            let (free, _) = lib(exact_maxmin_up(&g, c, u, None, &caps))?;
            let mut best_fixed = Rational::zero();
            for profile in &lib(construct_pc(c, &caps))? {
                // A profile needs a support of exactly its length.
                if profile.len() > pool {
                    continue;
                }
                let (fixed, _) = lib(exact_maxmin_up(&g, c, u, Some(profile), &caps))?;
                best_fixed = best_fixed.max(fixed);
            }
            ensure!(
                free == best_fixed,
                "round {round}: free-profile {free} differs from best fixed {best_fixed}"
            );
        }
        Ok(())
    });
}

/// Exact value of the expected-payoff game when player 1 may mix over at most
/// `c` pure strategies: the best matrix-game LP value over every support of
/// size at most `c`.
fn restricted_expected_maximin(g: &GameInstance, c: usize) -> Result<Rational, String> {
    let xs: Vec<Vec<u32>> = enumerate_pure(g.n(), g.k()).collect();
    let ys: Vec<Vec<u32>> = enumerate_pure(g.m(), g.k()).collect();
    let total = g.total_weight();
    let payoff: Vec<Vec<u64>> = xs
        .iter()
        .map(|x| ys.iter().map(|y| total - u2(g, x, y)).collect())
        .collect();
    let mut best = Rational::zero();
    for size in 1..=c.min(xs.len()) {
        for support in (0..xs.len()).combinations(size) {
            // Variables: one probability per support strategy, then the value.
            let mut program = LinearProgram::new(size + 1);
            let mut objective = vec![Rational::zero(); size + 1];
            objective[size] = Rational::one();
            program.maximize(objective);
            for yidx in 0..ys.len() {
                let mut coeffs: Vec<Rational> =
                    support.iter().map(|&j| big(payoff[j][yidx])).collect();
                coeffs.push(-Rational::one());
                program.constrain(coeffs, Relation::Ge, Rational::zero());
            }
            let mut ones = vec![Rational::one(); size + 1];
            ones[size] = Rational::zero();
            program.constrain(ones, Relation::Eq, Rational::one());
            let outcome = lib(lp::solve(&program))?;
            if outcome.status != LpStatus::Optimal {
                return Err(format!("support game solved to {:?}", outcome.status));
            }
            let value = outcome.objective_value.ok_or("optimal LP without a value")?;
            best = best.max(value);
        }
    }
    Ok(best)
}

#[test]
fn acceptance_11_expected_case() {
    report(11, "expected-payoff guarantees", || {
        // Greedy adversary within the top weight of the exact expectation.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..500 {
            let g = random_instance(&mut rng, 8, 5, 10);
            let k = g.k();
            let support_size = rng.gen_range(1..=3);
            let supports: Vec<Vec<u32>> = (0..support_size)
                .map(|_| random_allocation(&mut rng, g.n(), k))
                .collect();
            let nums: Vec<u64> = (0..support_size).map(|_| rng.gen_range(1..=5)).collect();
            let denom: u64 = nums.iter().sum();
            let s = lib(MixedStrategy::new(
                supports.iter().cloned().map(PureStrategy::discrete).collect(),
                nums.iter().map(|&a| Rational::new(a.into(), denom.into())).collect(),
            ))?;
            let (_, exact) = lib(expected_best_response_dp(&g, &s))?;
            let (y, greedy) = lib(greedy_weak_adversary_expected(&g, &s))?;
            let yv = lib(y.discrete_entries())?;
            let replay: u64 = supports.iter().zip(&nums).map(|(xj, a)| a * u2(&g, xj, &yv)).sum();
            ensure!(
                greedy == Rational::new(replay.into(), denom.into()),
                "round {round}: reported value disagrees with the returned response"
            );
            ensure!(greedy <= exact, "round {round}: greedy exceeds the exact expectation");
            ensure!(
                &exact - &greedy < big(g.max_weight()),
                "round {round}: gap {} reaches the top weight",
                &exact - &greedy
            );
        }

        // Restricted expected maximin never lands strictly between 0 and 1/c.
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        for round in 0..60 {
            let g = random_instance(&mut rng, 3, 3, 6);
            let c = rng.gen_range(1..=3usize);
            let value = restricted_expected_maximin(&g, c)?;
            ensure!(
                value.is_zero() || value >= Rational::new(1.into(), (c as u64).into()),
                "round {round}: value {value} lies strictly between 0 and 1/{c}"
            );
        }
        // The floor is attained: every 2-support of this game tops out at 1/2.
        let attained = restricted_expected_maximin(&inst(2, 2, &[1, 1]), 2)?;
        ensure!(attained == ratio(1, 2), "floor instance valued {attained}, expected 1/2");
        Ok(())
    });
}
