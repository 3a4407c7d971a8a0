//! Exact linear programming over arbitrary-precision rationals.
//!
//! A small dense two-phase simplex with Bland's anti-cycling pivot rule. All
//! pivots are exact, so reported optima are exact and deterministic. Systems
//! may contain strict inequalities; those are handled by maximizing a slack
//! margin `t` added to every strict row — the open system is feasible exactly
//! when the optimum margin is positive, and the reported witness satisfies
//! every strict row with slack at least that margin.

use num_traits::{One, Signed, Zero};

use crate::core::{Error, Result};
use crate::Rational;

/// Comparison operator of one linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `coeffs · x ≤ rhs`
    Le,
    /// `coeffs · x ≥ rhs`
    Ge,
    /// `coeffs · x = rhs`
    Eq,
    /// `coeffs · x < rhs` (strict)
    Lt,
    /// `coeffs · x > rhs` (strict)
    Gt,
}

impl Relation {
    fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }
}

/// One linear constraint row.
#[derive(Debug, Clone)]
pub struct Constraint {
    /// One coefficient per variable.
    pub coeffs: Vec<Rational>,
    /// Comparison operator.
    pub relation: Relation,
    /// Right-hand side.
    pub rhs: Rational,
}

/// A linear program: maximize `objective · x` subject to constraint rows and
/// per-variable bounds (lower bounds default to zero, uppers to none).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Number of decision variables.
    pub num_vars: usize,
    /// Coefficients of the objective to maximize.
    pub objective: Vec<Rational>,
    /// Constraint rows.
    pub constraints: Vec<Constraint>,
    /// Per-variable lower bounds.
    pub lower: Vec<Rational>,
    /// Optional per-variable upper bounds.
    pub upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// An empty program over `num_vars` variables with zero objective and
    /// default bounds `x ≥ 0`.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![Rational::zero(); num_vars],
            upper: vec![None; num_vars],
        }
    }

    /// Sets the objective coefficients (to be maximized).
    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        self.objective = objective;
        self
    }

    /// Appends a constraint row.
    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::Malformed("linear program needs at least one variable".into()));
        }
        let bad_len = self.objective.len() != self.num_vars
            || self.lower.len() != self.num_vars
            || self.upper.len() != self.num_vars
            || self.constraints.iter().any(|c| c.coeffs.len() != self.num_vars);
        if bad_len {
            return Err(Error::Malformed("linear program vector lengths disagree".into()));
        }
        Ok(())
    }

    fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.relation.is_strict())
    }
}

/// Solver verdict for a linear program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    /// An optimal solution was found (for strict systems: the open set is
    /// nonempty and a witness is reported).
    Optimal,
    /// No feasible point exists (for strict systems this includes a closed
    /// relaxation whose best margin is zero).
    Infeasible,
    /// The objective is unbounded above on the feasible set.
    Unbounded,
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct LpOutcome {
    /// Solver verdict.
    pub status: LpStatus,
    /// Optimal assignment (present when `status == Optimal`).
    pub solution: Option<Vec<Rational>>,
    /// Objective value at the solution.
    pub objective_value: Option<Rational>,
    /// For systems with strict rows: the best slack margin `t*` of the
    /// relaxed system (`Some(0)` certifies open-set infeasibility); `None`
    /// when there are no strict rows or the relaxation itself is infeasible.
    pub strict_margin: Option<Rational>,
}

/// Dot product of two equally long rational vectors.
pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a linear program exactly.
///
/// Programs containing strict rows must carry a zero objective (they are
/// feasibility systems); the margin variable then becomes the objective as
/// described on the module. The returned solution always satisfies every
/// constraint by substitution, strict rows strictly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    if !lp.has_strict() {
        return simplex_with_bounds(lp);
    }
    if lp.objective.iter().any(|c| !c.is_zero()) {
        return Err(Error::Malformed(
            "strict relations are supported only in feasibility systems (zero objective)".into(),
        ));
    }

    // Margin transform: append t ≥ 0, tighten each strict row by t, maximize t.
    let t = lp.num_vars;
    let mut relaxed = LinearProgram::new(lp.num_vars + 1);
    relaxed.lower[..lp.num_vars].clone_from_slice(&lp.lower);
    relaxed.upper[..lp.num_vars].clone_from_slice(&lp.upper);
    relaxed.objective[t] = Rational::one();
    for c in &lp.constraints {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(Rational::zero());
        let relation = match c.relation {
            Relation::Lt => {
                coeffs[t] = Rational::one();
                Relation::Le
            }
            Relation::Gt => {
                coeffs[t] = -Rational::one();
                Relation::Ge
            }
            other => other,
        };
        relaxed.constrain(coeffs, relation, c.rhs.clone());
    }

    let relaxed_outcome = simplex_with_bounds(&relaxed)?;
    match relaxed_outcome.status {
        LpStatus::Infeasible => Ok(LpOutcome {
            status: LpStatus::Infeasible,
            solution: None,
            objective_value: None,
            strict_margin: None,
        }),
        LpStatus::Unbounded => {
            // The margin grows without bound; pin it to 1 and find any witness.
            let mut pinned = relaxed.clone();
            pinned.objective = vec![Rational::zero(); pinned.num_vars];
            pinned.lower[t] = Rational::one();
            pinned.upper[t] = Some(Rational::one());
            let outcome = simplex_with_bounds(&pinned)?;
            let mut solution = outcome
                .solution
                .ok_or_else(|| Error::Internal("unbounded margin but no pinned witness".into()))?;
            solution.truncate(lp.num_vars);
            let margin = min_strict_slack(lp, &solution);
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                objective_value: Some(dot(&lp.objective, &solution)),
                solution: Some(solution),
                strict_margin: Some(margin),
            })
        }
        LpStatus::Optimal => {
            let margin = relaxed_outcome
                .objective_value
                .ok_or_else(|| Error::Internal("optimal LP without objective value".into()))?;
            if margin.is_positive() {
                let mut solution = relaxed_outcome
                    .solution
                    .ok_or_else(|| Error::Internal("optimal LP without solution".into()))?;
                solution.truncate(lp.num_vars);
                Ok(LpOutcome {
                    status: LpStatus::Optimal,
                    objective_value: Some(dot(&lp.objective, &solution)),
                    solution: Some(solution),
                    strict_margin: Some(margin),
                })
            } else {
                Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    solution: None,
                    objective_value: None,
                    strict_margin: Some(margin),
                })
            }
        }
    }
}

/// Smallest slack of the strict rows of `lp` at `point`.
fn min_strict_slack(lp: &LinearProgram, point: &[Rational]) -> Rational {
    let mut best: Option<Rational> = None;
    for c in &lp.constraints {
        let slack = match c.relation {
            Relation::Gt => dot(&c.coeffs, point) - &c.rhs,
            Relation::Lt => c.rhs.clone() - dot(&c.coeffs, point),
            _ => continue,
        };
        if best.as_ref().map_or(true, |b| &slack < b) {
            best = Some(slack);
        }
    }
    best.unwrap_or_else(Rational::zero)
}

/// Normalized row of the standard-form tableau builder.
struct StdRow {
    coeffs: Vec<Rational>,
    relation: Relation, // Le, Ge or Eq with non-negative rhs
    rhs: Rational,
}

/// Two-phase simplex for programs without strict rows.
fn simplex_with_bounds(lp: &LinearProgram) -> Result<LpOutcome> {
    let nv = lp.num_vars;

    // Shift out lower bounds: x = lower + y with y ≥ 0, and fold upper bounds
    // into plain rows over y.
    let mut rows: Vec<StdRow> = Vec::with_capacity(lp.constraints.len() + nv);
    for c in &lp.constraints {
        let shifted_rhs = &c.rhs - dot(&c.coeffs, &lp.lower);
        rows.push(StdRow {
            coeffs: c.coeffs.clone(),
            relation: c.relation,
            rhs: shifted_rhs,
        });
    }
    for j in 0..nv {
        if let Some(u) = &lp.upper[j] {
            let range = u - &lp.lower[j];
            if range.is_negative() {
                return Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    solution: None,
                    objective_value: None,
                    strict_margin: None,
                });
            }
            let mut coeffs = vec![Rational::zero(); nv];
            coeffs[j] = Rational::one();
            rows.push(StdRow {
                coeffs,
                relation: Relation::Le,
                rhs: range,
            });
        }
    }
    // Make every right-hand side non-negative.
    for row in &mut rows {
        if row.rhs.is_negative() {
            for c in &mut row.coeffs {
                *c = -std::mem::take(c);
            }
            row.rhs = -std::mem::take(&mut row.rhs);
            row.relation = match row.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
                _ => unreachable!("strict rows were transformed away"),
            };
        }
    }

    // Column layout: structurals, then one slack/surplus per inequality row,
    // then one artificial per Ge/Eq row.
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let n_artificial = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let slack_start = nv;
    let art_start = nv + n_slack;
    let ncols = art_start + n_artificial;

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(rows.len());
    let mut basis: Vec<usize> = Vec::with_capacity(rows.len());
    let mut next_slack = slack_start;
    let mut next_art = art_start;
    for row in &rows {
        let mut t = vec![Rational::zero(); ncols + 1];
        t[..nv].clone_from_slice(&row.coeffs);
        t[ncols] = row.rhs.clone();
        match row.relation {
            Relation::Le => {
                t[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                t[next_slack] = -Rational::one();
                next_slack += 1;
                t[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                t[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            _ => unreachable!(),
        }
        tableau.push(t);
    }

    // Phase 1: maximize minus the sum of artificials.
    if n_artificial > 0 {
        let mut cost = vec![Rational::zero(); ncols];
        for c in cost.iter_mut().skip(art_start) {
            *c = -Rational::one();
        }
        let value = run_simplex(&mut tableau, &mut basis, &cost, ncols)?;
        if !value.is_zero() {
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                solution: None,
                objective_value: None,
                strict_margin: None,
            });
        }
        // Pivot leftover artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tableau.len() {
            if basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&c| !tableau[r][c].is_zero()) {
                    pivot(&mut tableau, &mut basis, r, c);
                    r += 1;
                } else {
                    tableau.swap_remove(r);
                    basis.swap_remove(r);
                }
            } else {
                r += 1;
            }
        }
        // Physically remove artificial columns.
        for row in &mut tableau {
            let rhs = row.pop().expect("rhs column");
            row.truncate(art_start);
            row.push(rhs);
        }
    }

    // Phase 2: original objective over structural columns.
    let ncols = art_start;
    let mut cost = vec![Rational::zero(); ncols];
    cost[..nv].clone_from_slice(&lp.objective);
    match run_simplex_status(&mut tableau, &mut basis, &cost, ncols)? {
        SimplexEnd::Unbounded => Ok(LpOutcome {
            status: LpStatus::Unbounded,
            solution: None,
            objective_value: None,
            strict_margin: None,
        }),
        SimplexEnd::Optimal(_) => {
            let mut shifted = vec![Rational::zero(); nv];
            for (r, &b) in basis.iter().enumerate() {
                if b < nv {
                    shifted[b] = tableau[r][ncols].clone();
                }
            }
            let solution: Vec<Rational> = shifted
                .iter()
                .zip(&lp.lower)
                .map(|(y, l)| y + l)
                .collect();
            let objective_value = dot(&lp.objective, &solution);
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                solution: Some(solution),
                objective_value: Some(objective_value),
                strict_margin: None,
            })
        }
    }
}

enum SimplexEnd {
    Optimal(Rational),
    Unbounded,
}

/// Runs the simplex loop, returning the optimum value; errors on unbounded
/// (used in phase 1, where the objective is bounded by construction).
fn run_simplex(
    tableau: &mut Vec<Vec<Rational>>,
    basis: &mut [usize],
    cost: &[Rational],
    ncols: usize,
) -> Result<Rational> {
    match run_simplex_status(tableau, basis, cost, ncols)? {
        SimplexEnd::Optimal(v) => Ok(v),
        SimplexEnd::Unbounded => Err(Error::Internal("phase-1 objective unbounded".into())),
    }
}

/// Simplex loop with Bland's rule; `tableau` rows end with the rhs column.
fn run_simplex_status(
    tableau: &mut Vec<Vec<Rational>>,
    basis: &mut [usize],
    cost: &[Rational],
    ncols: usize,
) -> Result<SimplexEnd> {
    // Reduced costs z[j] = cost[j] − Σ_r cost[basis[r]]·tableau[r][j].
    let mut z: Vec<Rational> = cost.to_vec();
    let mut value = Rational::zero();
    for (r, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            for j in 0..ncols {
                let delta = &cost[b] * &tableau[r][j];
                z[j] -= delta;
            }
            value += &cost[b] * &tableau[r][ncols];
        }
    }

    let limit = 10_000 + 200 * (tableau.len() + ncols);
    for _ in 0..limit {
        // Bland: entering column = smallest index with positive reduced cost.
        let entering = match (0..ncols).find(|&j| z[j].is_positive()) {
            Some(j) => j,
            None => return Ok(SimplexEnd::Optimal(value)),
        };
        // Leaving row: minimum ratio, ties by smallest basis index.
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..tableau.len() {
            if tableau[r][entering].is_positive() {
                let theta = &tableau[r][ncols] / &tableau[r][entering];
                let better = match &leave {
                    None => true,
                    Some((lr, lt)) => theta < *lt || (theta == *lt && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, theta));
                }
            }
        }
        let (r, theta) = match leave {
            Some(x) => x,
            None => return Ok(SimplexEnd::Unbounded),
        };
        value += &z[entering] * &theta;
        let zc = z[entering].clone();
        pivot(tableau, basis, r, entering);
        for j in 0..ncols {
            let delta = &zc * &tableau[r][j];
            z[j] -= delta;
        }
    }
    Err(Error::Internal("simplex iteration limit exceeded".into()))
}

/// Pivots the tableau on `(r, c)` and updates the basis.
fn pivot(tableau: &mut [Vec<Rational>], basis: &mut [usize], r: usize, c: usize) {
    let pv = tableau[r][c].clone();
    for entry in tableau[r].iter_mut() {
        *entry /= &pv;
    }
    let pivot_row = tableau[r].clone();
    for (i, row) in tableau.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let factor = row[c].clone();
            for (entry, p) in row.iter_mut().zip(&pivot_row) {
                *entry -= &factor * p;
            }
        }
    }
    basis[r] = c;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    /// Substitutes a point into every constraint, strict rows strictly.
    fn check_feasible(lp: &LinearProgram, point: &[Rational]) {
        for (j, v) in point.iter().enumerate() {
            assert!(v >= &lp.lower[j], "lower bound violated at {j}");
            if let Some(u) = &lp.upper[j] {
                assert!(v <= u, "upper bound violated at {j}");
            }
        }
        for c in &lp.constraints {
            let lhs = dot(&c.coeffs, point);
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Lt => lhs < c.rhs,
                Relation::Gt => lhs > c.rhs,
            };
            assert!(ok, "constraint violated: {lhs} {:?} {}", c.relation, c.rhs);
        }
    }

    #[test]
    fn bounded_maximum() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![rat(1), rat(1)]);
        lp.constrain(vec![rat(1), rat(0)], Relation::Le, rat(2));
        lp.constrain(vec![rat(0), rat(1)], Relation::Le, rat(3));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(rat(5)));
        let sol = out.solution.unwrap();
        assert_eq!(sol, vec![rat(2), rat(3)]);
        check_feasible(&lp, &sol);
    }

    #[test]
    fn strict_system_feasible_with_margin() {
        // 0 < x < 1 has best margin 1/2 at x = 1/2.
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1)], Relation::Gt, rat(0));
        lp.constrain(vec![rat(1)], Relation::Lt, rat(1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.strict_margin, Some(ratio(1, 2)));
        let sol = out.solution.unwrap();
        assert_eq!(sol, vec![ratio(1, 2)]);
        check_feasible(&lp, &sol);
    }

    #[test]
    fn strict_system_boundary_infeasible() {
        // x > 0 together with x ≤ 0: closed relaxation touches only x = 0.
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1)], Relation::Gt, rat(0));
        lp.constrain(vec![rat(1)], Relation::Le, rat(0));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert_eq!(out.strict_margin, Some(rat(0)));
    }

    #[test]
    fn strict_system_relaxation_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1)], Relation::Gt, rat(1));
        lp.constrain(vec![rat(1)], Relation::Le, rat(0));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert_eq!(out.strict_margin, None);
    }

    #[test]
    fn strict_system_unbounded_margin() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1)], Relation::Gt, rat(0));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        let sol = out.solution.unwrap();
        check_feasible(&lp, &sol);
        assert!(out.strict_margin.unwrap().is_positive());
    }

    #[test]
    fn unbounded_objective() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![rat(1)]);
        lp.constrain(vec![rat(1)], Relation::Ge, rat(5));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_closed_system() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![rat(1)], Relation::Le, rat(-1));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert_eq!(out.strict_margin, None);
    }

    #[test]
    fn equality_and_min_style_rows() {
        // maximize p subject to ρ1 + ρ2 = 1, p ≤ ρ1, p ≤ ρ2: optimum 1/2.
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![rat(0), rat(0), rat(1)]);
        lp.constrain(vec![rat(1), rat(1), rat(0)], Relation::Eq, rat(1));
        lp.constrain(vec![rat(-1), rat(0), rat(1)], Relation::Le, rat(0));
        lp.constrain(vec![rat(0), rat(-1), rat(1)], Relation::Le, rat(0));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(ratio(1, 2)));
        check_feasible(&lp, &out.solution.unwrap());
    }

    #[test]
    fn variable_bounds() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![rat(1), rat(-1)]);
        lp.upper[0] = Some(ratio(7, 2));
        lp.lower[1] = rat(-1);
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(ratio(9, 2)));
        assert_eq!(out.solution.unwrap(), vec![ratio(7, 2), rat(-1)]);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![rat(1), rat(0)]);
        lp.constrain(vec![rat(1), rat(1)], Relation::Eq, rat(1));
        lp.constrain(vec![rat(2), rat(2)], Relation::Eq, rat(2));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(rat(1)));
        check_feasible(&lp, &out.solution.unwrap());
    }

    #[test]
    fn strict_rows_with_objective_rejected() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![rat(1)]);
        lp.constrain(vec![rat(1)], Relation::Lt, rat(1));
        assert!(solve(&lp).is_err());
    }

    #[test]
    fn deterministic_resolution() {
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![rat(3), rat(1), rat(2)]);
        lp.constrain(vec![rat(1), rat(1), rat(3)], Relation::Le, rat(30));
        lp.constrain(vec![rat(2), rat(2), rat(5)], Relation::Le, rat(24));
        lp.constrain(vec![rat(4), rat(1), rat(2)], Relation::Le, rat(36));
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.objective_value, b.objective_value);
        assert_eq!(a.objective_value, Some(rat(28)));
    }
}
