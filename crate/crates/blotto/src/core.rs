//! Game model: instances, pure and mixed strategies, enumeration caps, and
//! exact payoff evaluation under the defender-favoring tie rule.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::{rat_u64, Rational};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A vector had the wrong number of battlefields.
    #[error("dimension mismatch: expected {expected} battlefields, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// An allocation spends more troops than its budget allows.
    #[error("budget violation: allocation spends {spent}, budget is {budget}")]
    BudgetViolation { spent: String, budget: String },
    /// A structural invariant on a strategy or profile failed.
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    /// An enumeration would exceed a configured cap.
    #[error("cap exceeded: {what} requires {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    /// An algorithm precondition does not hold for the given input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Input could not be parsed or is semantically malformed.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Internal invariant violation; indicates a bug, never expected data.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration limits guarding every exhaustive sweep in the crate.
///
/// Exceeding a cap is a hard [`Error::CapExceeded`], never a silent
/// truncation. Defaults can be overridden through the `BLOTTO_CAPS`
/// environment variable, a comma-separated list such as
/// `supports=2000000,responses=20000`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of supports (or pure strategies) an oracle sweep may visit.
    pub max_supports: u64,
    /// Maximum number of opponent responses enumerated against one strategy.
    pub max_responses: u64,
    /// Maximum battlefield count for critical-tuple enumeration.
    pub max_continuous_k: usize,
    /// Maximum support size for profile-family construction (the family count
    /// is doubly exponential in this value).
    pub max_profile_c: usize,
    /// Maximum number of surviving heavy responses tracked jointly by the
    /// (1−ε) light-battlefield program.
    pub max_heavy_responses: usize,
    /// Maximum number of triplet families enumerated by the pure PTAS.
    pub max_triplets: u64,
    /// Maximum number of assembled candidate pairs replayed by the
    /// signature-based 2-strategy searches.
    pub max_candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_supports: 5_000_000,
            max_responses: 10_000,
            max_continuous_k: 12,
            max_profile_c: 5,
            max_heavy_responses: 8,
            max_triplets: 2_000_000,
            max_candidates: 2_000_000,
        }
    }
}

impl Caps {
    /// Default caps, overridden by any assignments in the `BLOTTO_CAPS`
    /// environment variable. Unknown keys or unparsable values are rejected.
    pub fn from_env() -> Result<Self> {
        match std::env::var("BLOTTO_CAPS") {
            Ok(spec) => Self::parse_overrides(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Parses a comma-separated `key=value` override list.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut caps = Self::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("cap override `{part}` is not key=value")))?;
            let parse_u64 = |v: &str| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Malformed(format!("cap value `{v}` is not an integer")))
            };
            match key.trim() {
                "supports" => caps.max_supports = parse_u64(value)?,
                "responses" => caps.max_responses = parse_u64(value)?,
                "continuous_k" => caps.max_continuous_k = parse_u64(value)? as usize,
                "profile_c" => caps.max_profile_c = parse_u64(value)? as usize,
                "heavy_responses" => caps.max_heavy_responses = parse_u64(value)? as usize,
                "triplets" => caps.max_triplets = parse_u64(value)?,
                "candidates" => caps.max_candidates = parse_u64(value)?,
                other => {
                    return Err(Error::Malformed(format!("unknown cap key `{other}`")));
                }
            }
        }
        Ok(caps)
    }

    pub(crate) fn check(&self, what: &'static str, needed: u128, cap: u64) -> Result<()> {
        if needed > cap as u128 {
            Err(Error::CapExceeded {
                what,
                needed,
                cap: cap as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// A Colonel Blotto instance: troop budgets and battlefield weights.
///
/// Player 1 owns `n` troops, player 2 owns `m`, and battlefield `i` is worth
/// `weights[i] ≥ 1`. Weight sums are validated to fit comfortably in 64-bit
/// arithmetic so that integer payoff accumulation is exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameInstance {
    n: u32,
    m: u32,
    weights: Vec<u64>,
}

/// Largest admissible total weight; keeps every payoff sum and payoff product
/// with small factors exactly representable in 64-bit integers.
const MAX_TOTAL_WEIGHT: u64 = 1 << 40;

impl GameInstance {
    /// Validates and builds an instance. Requires at least one battlefield,
    /// strictly positive weights, and a total weight below an overflow guard.
    pub fn new(n: u32, m: u32, weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Malformed("instance needs at least one battlefield".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::Malformed("battlefield weights must be positive".into()));
        }
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total > MAX_TOTAL_WEIGHT as u128 {
            return Err(Error::Malformed(format!(
                "total weight {total} exceeds supported range {MAX_TOTAL_WEIGHT}"
            )));
        }
        Ok(GameInstance { n, m, weights })
    }

    /// Player 1's troop budget.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Player 2's troop budget.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of battlefields.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// Battlefield weights.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Sum of all battlefield weights.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Largest battlefield weight.
    pub fn max_weight(&self) -> u64 {
        *self.weights.iter().max().expect("nonempty weights")
    }

    /// Weights as exact rationals.
    pub fn rational_weights(&self) -> Vec<Rational> {
        self.weights.iter().map(|&w| rat_u64(w)).collect()
    }
}

/// Whether a strategy lives on the integer or the continuous troop lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyMode {
    /// All entries are non-negative integers.
    Discrete,
    /// Entries are non-negative rationals.
    Continuous,
}

impl fmt::Display for StrategyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyMode::Discrete => write!(f, "discrete"),
            StrategyMode::Continuous => write!(f, "continuous"),
        }
    }
}

/// A deterministic troop allocation over the battlefields.
///
/// Entries are stored as exact rationals in both modes; discrete strategies
/// additionally guarantee integrality of every entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureStrategy {
    mode: StrategyMode,
    entries: Vec<Rational>,
}

impl PureStrategy {
    /// Builds a discrete strategy from integer troop counts.
    pub fn discrete(entries: Vec<u32>) -> Self {
        PureStrategy {
            mode: StrategyMode::Discrete,
            entries: entries.into_iter().map(|e| rat_u64(e as u64)).collect(),
        }
    }

    /// Builds a continuous strategy from rational troop amounts.
    /// Rejects negative entries.
    pub fn continuous(entries: Vec<Rational>) -> Result<Self> {
        if entries.iter().any(|e| e < &Rational::zero()) {
            return Err(Error::InvalidStrategy("negative troop allocation".into()));
        }
        Ok(PureStrategy {
            mode: StrategyMode::Continuous,
            entries,
        })
    }

    /// Builds a strategy in the given mode, validating integrality for
    /// discrete mode and non-negativity in both.
    pub fn from_rationals(mode: StrategyMode, entries: Vec<Rational>) -> Result<Self> {
        if entries.iter().any(|e| e < &Rational::zero()) {
            return Err(Error::InvalidStrategy("negative troop allocation".into()));
        }
        if mode == StrategyMode::Discrete && entries.iter().any(|e| !e.is_integer()) {
            return Err(Error::InvalidStrategy(
                "discrete strategy with fractional entry".into(),
            ));
        }
        Ok(PureStrategy { mode, entries })
    }

    /// The lattice this strategy lives on.
    pub fn mode(&self) -> StrategyMode {
        self.mode
    }

    /// Exact rational entries, one per battlefield.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Number of battlefields.
    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// Total troops spent.
    pub fn spent(&self) -> Rational {
        self.entries.iter().sum()
    }

    /// Integer entries of a discrete strategy.
    pub fn discrete_entries(&self) -> Result<Vec<u32>> {
        if self.mode != StrategyMode::Discrete {
            return Err(Error::InvalidStrategy(
                "operation requires a discrete strategy".into(),
            ));
        }
        self.entries
            .iter()
            .map(|e| {
                e.to_integer()
                    .try_into()
                    .map_err(|_| Error::InvalidStrategy("troop count out of range".into()))
            })
            .collect()
    }

    /// Checks dimensions and the budget of `self` as a strategy of the given
    /// player (`budget` is that player's troop count).
    pub fn validate(&self, inst: &GameInstance, budget: u32) -> Result<()> {
        if self.k() != inst.k() {
            return Err(Error::DimensionMismatch {
                expected: inst.k(),
                got: self.k(),
            });
        }
        let spent = self.spent();
        if spent > rat_u64(budget as u64) {
            return Err(Error::BudgetViolation {
                spent: spent.to_string(),
                budget: budget.to_string(),
            });
        }
        Ok(())
    }
}

/// A mixed strategy: finitely many pure strategies with positive
/// probabilities summing to one. A *c-strategy* has at most `c` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStrategy {
    support: Vec<PureStrategy>,
    probs: Vec<Rational>,
}

impl MixedStrategy {
    /// Validates probabilities (positive, summing to one) and matching
    /// support length, then builds the mixed strategy.
    pub fn new(support: Vec<PureStrategy>, probs: Vec<Rational>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::InvalidStrategy(
                "support and probability lists must be nonempty and equally long".into(),
            ));
        }
        if probs.iter().any(|p| p <= &Rational::zero() || p > &Rational::one()) {
            return Err(Error::InvalidStrategy(
                "probabilities must lie in (0, 1]".into(),
            ));
        }
        if probs.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidStrategy("probabilities must sum to 1".into()));
        }
        let k = support[0].k();
        if support.iter().any(|s| s.k() != k) {
            return Err(Error::InvalidStrategy(
                "support strategies disagree on battlefield count".into(),
            ));
        }
        Ok(MixedStrategy { support, probs })
    }

    /// A single pure strategy played with probability one.
    pub fn pure(strategy: PureStrategy) -> Self {
        MixedStrategy {
            support: vec![strategy],
            probs: vec![Rational::one()],
        }
    }

    /// The pure strategies in the support.
    pub fn support(&self) -> &[PureStrategy] {
        &self.support
    }

    /// The probability attached to each support strategy.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Support size (the `c` in "c-strategy").
    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// Validates every support strategy against the instance and budget.
    pub fn validate(&self, inst: &GameInstance, budget: u32) -> Result<()> {
        for s in &self.support {
            s.validate(inst, budget)?;
        }
        Ok(())
    }
}

/// A probability profile: the multiset of support probabilities of a mixed
/// strategy, stored in non-increasing order. Profiles compare as multisets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    entries: Vec<Rational>,
}

impl Profile {
    /// Builds a profile from positive entries summing to at most one
    /// (a profile of a c-strategy sums to exactly one; partial profiles are
    /// permitted during construction). Entries are sorted non-increasingly.
    pub fn new(mut entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidStrategy("profile must be nonempty".into()));
        }
        if entries.iter().any(|p| p <= &Rational::zero() || p > &Rational::one()) {
            return Err(Error::InvalidStrategy(
                "profile entries must lie in (0, 1]".into(),
            ));
        }
        entries.sort_by(|a, b| b.cmp(a));
        Ok(Profile { entries })
    }

    /// Entries in non-increasing order.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the profile has no entries (never constructible; kept for
    /// API completeness).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of the entries.
    pub fn total(&self) -> Rational {
        self.entries.iter().sum()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Integer payoffs of both players on the integer lattice; the fast path
/// behind [`payoffs`]. `x` and `y` must already be validated.
pub(crate) fn payoffs_u32(x: &[u32], y: &[u32], weights: &[u64]) -> (u64, u64) {
    let mut u1 = 0u64;
    for i in 0..weights.len() {
        if x[i] > y[i] {
            u1 += weights[i];
        }
    }
    let total: u64 = weights.iter().sum();
    (u1, total - u1)
}

/// Player 1's payoff against rational weights on the integer lattice.
pub(crate) fn payoff1_rational(x: &[u32], y: &[u32], weights: &[Rational]) -> Rational {
    let mut u1 = Rational::zero();
    for i in 0..weights.len() {
        if x[i] > y[i] {
            u1 += &weights[i];
        }
    }
    u1
}

/// Exact payoffs `(u1, u2)` of the two players.
///
/// Player 1 collects the weight of every battlefield where it places strictly
/// more troops; player 2 collects the rest (ties favor player 2). The game is
/// constant-sum: `u1 + u2` always equals the total weight.
pub fn payoffs(x: &PureStrategy, y: &PureStrategy, inst: &GameInstance) -> Result<(Rational, Rational)> {
    x.validate(inst, inst.n())?;
    y.validate(inst, inst.m())?;
    let mut u1 = Rational::zero();
    for i in 0..inst.k() {
        if x.entries()[i] > y.entries()[i] {
            u1 += rat_u64(inst.weights()[i]);
        }
    }
    let u2 = rat_u64(inst.total_weight()) - &u1;
    Ok((u1, u2))
}

/// Enumerates player 2's undominated responses against a discrete support.
///
/// Against a fixed set of pure strategies, any response can be rounded down
/// per battlefield to the largest value in `{0} ∪ {support levels}` without
/// changing any payoff, so the product of those level sets (filtered by the
/// budget) covers every response exactly. Calls `visit` once per response.
pub(crate) fn for_each_dominated_response<F: FnMut(&[u32])>(
    support: &[Vec<u32>],
    k: usize,
    m: u32,
    caps: &Caps,
    mut visit: F,
) -> Result<()> {
    let mut levels: Vec<Vec<u32>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut vals: Vec<u32> = support.iter().map(|s| s[i]).collect();
        vals.push(0);
        vals.sort_unstable();
        vals.dedup();
        vals.retain(|&v| v <= m);
        levels.push(vals);
    }
    let count: u128 = levels.iter().map(|l| l.len() as u128).product();
    caps.check("response enumeration", count, caps.max_responses)?;

    let mut y = vec![0u32; k];
    fn rec<F: FnMut(&[u32])>(
        levels: &[Vec<u32>],
        y: &mut Vec<u32>,
        i: usize,
        budget: u32,
        visit: &mut F,
    ) {
        if i == levels.len() {
            visit(y);
            return;
        }
        for &v in &levels[i] {
            if v > budget {
                break;
            }
            y[i] = v;
            rec(levels, y, i + 1, budget - v, visit);
        }
        y[i] = 0;
    }
    rec(&levels, &mut y, 0, m, &mut visit);
    Ok(())
}

/// Exact probability with which a mixed strategy secures payoff at least `u`.
///
/// Computes `min` over all of player 2's responses of the total probability
/// of support strategies whose payoff reaches `u`. Only the dominance-reduced
/// response set is enumerated, which is exact. Discrete strategies only.
pub fn guaranteed_probability(
    s: &MixedStrategy,
    u: u64,
    inst: &GameInstance,
    caps: &Caps,
) -> Result<Rational> {
    s.validate(inst, inst.n())?;
    if u == 0 {
        return Ok(Rational::one());
    }
    let support: Vec<Vec<u32>> = s
        .support()
        .iter()
        .map(|p| p.discrete_entries())
        .collect::<Result<_>>()?;
    let weights = inst.weights();
    let mut best = Rational::one();
    for_each_dominated_response(&support, inst.k(), inst.m(), caps, |y| {
        let mut p = Rational::zero();
        for (x, prob) in support.iter().zip(s.probs()) {
            let (u1, _) = payoffs_u32(x, y, weights);
            if u1 >= u {
                p += prob;
            }
        }
        if p < best {
            best = p;
        }
    })?;
    Ok(best)
}

/// Groups battlefield indices by weight, preserving index order inside each
/// group; shared by the rounding-based algorithms.
pub(crate) fn group_by_weight(weights: &[Rational]) -> BTreeMap<Rational, Vec<usize>> {
    let mut groups: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        groups.entry(w.clone()).or_default().push(i);
    }
    groups
}
