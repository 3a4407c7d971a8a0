//! Probability profiles for small supports.
//!
//! A support of size c together with a family of winning subsets induces a
//! linear program over the support probabilities; the profiles that can ever
//! be optimal for some family form a small finite set per support size,
//! constructed here by sweeping all families.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::core::{Caps, Error, GameInstance, MixedStrategy, Profile, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::{rat, Rational};

/// Solves the profile LP for a family of winning subsets over a support of
/// size `c`: maximize `p` subject to `ρ ≥ 0`, `Σρ = 1`, and
/// `p ≤ Σ_{i∈W} ρ_i` for every subset `W` in the family. Returns the optimal
/// probabilities and the value. An empty family imposes no subset constraint,
/// so the value is 1 with the uniform assignment.
pub fn solve_profile_lp(
    family: &BTreeSet<Vec<usize>>,
    c: usize,
) -> Result<(Vec<Rational>, Rational)> {
    if c == 0 {
        return Err(Error::Malformed("support size must be positive".into()));
    }
    for w in family {
        if w.iter().any(|&i| i >= c) {
            return Err(Error::Malformed("winning subset index out of range".into()));
        }
    }
    if family.is_empty() {
        let share = Rational::one() / rat(c as i64);
        return Ok((vec![share; c], Rational::one()));
    }

    // Variables: ρ_0..ρ_{c-1}, then p.
    let nv = c + 1;
    let p = c;
    let mut prog = LinearProgram::new(nv);
    prog.objective[p] = Rational::one();
    prog.upper[p] = Some(Rational::one());
    let mut ones = vec![Rational::one(); nv];
    ones[p] = Rational::zero();
    prog.constrain(ones, Relation::Eq, Rational::one());
    for w in family {
        let mut coeffs = vec![Rational::zero(); nv];
        for &i in w {
            coeffs[i] = -Rational::one();
        }
        coeffs[p] = Rational::one();
        prog.constrain(coeffs, Relation::Le, Rational::zero());
    }
    let out = lp::solve(&prog)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Internal("profile LP must have an optimum".into()));
    }
    let solution = out
        .solution
        .ok_or_else(|| Error::Internal("optimal LP without solution".into()))?;
    let value = out
        .objective_value
        .ok_or_else(|| Error::Internal("optimal LP without value".into()))?;
    Ok((solution[..c].to_vec(), value))
}

/// Constructs the profile set for supports of size at most `c`: for every
/// support size `s ≤ c` and every family of nonempty winning subsets over s
/// strategies, the optimal probability assignment of the profile LP, recorded
/// as an unordered profile with zero entries dropped.
pub fn construct_pc(c: usize, caps: &Caps) -> Result<BTreeSet<Profile>> {
    if c == 0 {
        return Err(Error::Malformed("support size must be positive".into()));
    }
    caps.check(
        "profile construction support size",
        c as u128,
        caps.max_profile_c as u64,
    )?;
    let mut out = BTreeSet::new();
    for s in 1..=c {
        let subsets: u32 = 1 << s;
        let families: u64 = 1 << subsets;
        for fam_bits in 0..families {
            let mut family = BTreeSet::new();
            for mask in 1..subsets {
                if fam_bits >> mask & 1 == 1 {
                    family.insert((0..s).filter(|j| mask >> j & 1 == 1).collect::<Vec<_>>());
                }
            }
            // Families containing the empty subset force p = 0; skip the
            // degenerate mask 0 bit entirely (it is never a winning subset of
            // a support that wins anything).
            let (rho, p) = solve_profile_lp(&family, s)?;
            if p.is_zero() {
                continue;
            }
            let entries: Vec<Rational> = rho.into_iter().filter(|r| r > &Rational::zero()).collect();
            if entries.is_empty() {
                continue;
            }
            out.insert(Profile::new(entries)?);
        }
    }
    Ok(out)
}

/// Improves a two-strategy mixed strategy at level `u` without lowering its
/// guarantee: if it already secures `u` with probability above 1/2, the
/// higher-probability pure strategy alone secures `u` always; if the
/// probability is strictly between 0 and 1/2, the even split is at least as
/// good. Anything else is returned unchanged.
pub fn normalize_two_strategy(
    s: &MixedStrategy,
    u: u64,
    inst: &GameInstance,
    caps: &Caps,
) -> Result<MixedStrategy> {
    if s.support_size() != 2 {
        return Ok(s.clone());
    }
    let p = crate::core::guaranteed_probability(s, u, inst, caps)?;
    let half = Rational::new(1.into(), 2.into());
    if p > half {
        let majority = if s.probs()[1] > s.probs()[0] { 1 } else { 0 };
        return Ok(MixedStrategy::pure(s.support()[majority].clone()));
    }
    if p > Rational::zero() && p < half {
        return MixedStrategy::new(s.support().to_vec(), vec![half.clone(), half]);
    }
    Ok(s.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::PureStrategy;
    use crate::ratio;

    fn profile(entries: &[(i64, i64)]) -> Profile {
        Profile::new(entries.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    #[test]
    fn profile_lp_basic_families() {
        // Singletons {0} and {1}: p ≤ ρ0 and p ≤ ρ1, optimum 1/2.
        let family: BTreeSet<Vec<usize>> = [vec![0], vec![1]].into_iter().collect();
        let (rho, p) = solve_profile_lp(&family, 2).unwrap();
        assert_eq!(p, ratio(1, 2));
        assert_eq!(rho, vec![ratio(1, 2), ratio(1, 2)]);

        // The full set only: any assignment works, p = 1.
        let family: BTreeSet<Vec<usize>> = [vec![0, 1]].into_iter().collect();
        let (_, p) = solve_profile_lp(&family, 2).unwrap();
        assert_eq!(p, Rational::one());

        // Empty family: unconstrained, p = 1 with the uniform assignment.
        let (rho, p) = solve_profile_lp(&BTreeSet::new(), 3).unwrap();
        assert_eq!(p, Rational::one());
        assert_eq!(rho, vec![ratio(1, 3); 3]);

        // A family containing the empty subset forces p = 0.
        let family: BTreeSet<Vec<usize>> = [vec![], vec![0, 1]].into_iter().collect();
        let (_, p) = solve_profile_lp(&family, 2).unwrap();
        assert_eq!(p, Rational::zero());
    }

    #[test]
    fn profile_set_size_one() {
        let pc = construct_pc(1, &Caps::default()).unwrap();
        let expect: BTreeSet<Profile> = [profile(&[(1, 1)])].into_iter().collect();
        assert_eq!(pc, expect);
    }

    #[test]
    fn profile_set_size_two_exact() {
        let pc = construct_pc(2, &Caps::default()).unwrap();
        let expect: BTreeSet<Profile> =
            [profile(&[(1, 1)]), profile(&[(1, 2), (1, 2)])].into_iter().collect();
        assert_eq!(pc, expect);
    }

    #[test]
    fn profile_set_size_three_contains_expected() {
        let pc = construct_pc(3, &Caps::default()).unwrap();
        assert!(pc.contains(&profile(&[(1, 1)])));
        assert!(pc.contains(&profile(&[(1, 2), (1, 2)])));
        assert!(pc.contains(&profile(&[(1, 3), (1, 3), (1, 3)])));
    }

    #[test]
    fn normalization_improves_uneven_split() {
        let g = GameInstance::new(2, 2, vec![1, 1]).unwrap();
        let s = MixedStrategy::new(
            vec![
                PureStrategy::discrete(vec![2, 0]),
                PureStrategy::discrete(vec![0, 2]),
            ],
            vec![ratio(3, 4), ratio(1, 4)],
        )
        .unwrap();
        let caps = Caps::default();
        let before = crate::core::guaranteed_probability(&s, 1, &g, &caps).unwrap();
        assert_eq!(before, ratio(1, 4));
        let t = normalize_two_strategy(&s, 1, &g, &caps).unwrap();
        assert_eq!(t.probs(), &[ratio(1, 2), ratio(1, 2)]);
        let after = crate::core::guaranteed_probability(&t, 1, &g, &caps).unwrap();
        assert_eq!(after, ratio(1, 2));
    }

    #[test]
    fn normalization_picks_majority_strategy() {
        let g = GameInstance::new(5, 2, vec![10, 8, 7, 5]).unwrap();
        // The first strategy secures 15 against every response; mixing it
        // with anything at probability above 1/2 secures 15 more than half
        // the time, so the normalization promotes it to a pure strategy.
        let s = MixedStrategy::new(
            vec![
                PureStrategy::discrete(vec![2, 2, 1, 0]),
                PureStrategy::discrete(vec![0, 0, 0, 5]),
            ],
            vec![ratio(3, 5), ratio(2, 5)],
        )
        .unwrap();
        let caps = Caps::default();
        let t = normalize_two_strategy(&s, 15, &g, &caps).unwrap();
        assert_eq!(t.support_size(), 1);
        assert_eq!(t.support()[0].discrete_entries().unwrap(), vec![2, 2, 1, 0]);
        let p = crate::core::guaranteed_probability(&t, 15, &g, &caps).unwrap();
        assert_eq!(p, Rational::one());
    }
}
