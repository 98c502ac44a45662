//! Linear programming: a dense two-phase primal simplex with Bland's rule.
//!
//! Problems are stated over `f64` data with nonnegative or free variables and
//! `<=`, `>=`, `=` rows. The solver runs either in floating point or in exact
//! rational arithmetic (see [`SolveOptions::exact`]). Phase 1 minimises the
//! sum of artificial variables; when the optimum is positive the simplex
//! multipliers form a Farkas certificate of infeasibility, which is re-checked
//! by direct substitution before it is returned.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Sense of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x >= b`
    Ge,
    /// `a·x = b`
    Eq,
}

/// One sparse constraint row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpRow {
    /// `(variable index, coefficient)` pairs; repeated indices are summed.
    pub coeffs: Vec<(usize, f64)>,
    /// Constraint sense.
    pub relation: Relation,
    /// Right-hand side.
    pub rhs: f64,
}

/// A linear feasibility / minimisation problem.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LpProblem {
    free: Vec<bool>,
    rows: Vec<LpRow>,
    objective: Option<Vec<(usize, f64)>>,
}

/// Tolerances and arithmetic mode for the solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Feasibility tolerance for residuals and certificate margins.
    pub tol: f64,
    /// Solve in exact rational arithmetic.
    pub exact: bool,
    /// Pivot budget; exceeding it is reported as a numerical failure.
    pub max_pivots: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-9, exact: false, max_pivots: 200_000 }
    }
}

impl SolveOptions {
    /// Default options with a custom tolerance.
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions { tol, ..Default::default() }
    }

    /// Default options in exact rational mode.
    pub fn exact() -> Self {
        SolveOptions { exact: true, ..Default::default() }
    }
}

/// Outcome of a feasibility question.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum LpCertificate {
    /// A point satisfying every constraint within tolerance.
    Feasible { x: Vec<f64> },
    /// A row multiplier vector `y` with `yᵀA` sign-compatible with the
    /// variable domains, sign-compatible with the row senses, and `yᵀb > 0`.
    Infeasible { farkas: Vec<f64> },
}

impl LpCertificate {
    /// Whether the problem was found feasible.
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpCertificate::Feasible { .. })
    }
}

/// Outcome of an optimisation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum LpOutcome {
    /// Optimal point and value of the (minimised) objective.
    Optimal { x: Vec<f64>, value: f64 },
    /// The feasible set is empty.
    Infeasible { farkas: Vec<f64> },
    /// The objective is unbounded below along `ray` starting from `x`.
    Unbounded { x: Vec<f64>, ray: Vec<f64> },
}

impl LpProblem {
    /// An empty problem.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one variable (free or nonnegative) and returns its index.
    pub fn add_var(&mut self, free: bool) -> usize {
        self.free.push(free);
        self.free.len() - 1
    }

    /// Adds `n` variables and returns the index of the first.
    pub fn add_vars(&mut self, n: usize, free: bool) -> usize {
        let start = self.free.len();
        self.free.extend(std::iter::repeat(free).take(n));
        start
    }

    /// Adds a constraint row.
    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(j, _)| j < self.free.len()));
        self.rows.push(LpRow { coeffs, relation, rhs });
    }

    /// Sets a linear objective to be minimised.
    pub fn set_objective(&mut self, coeffs: Vec<(usize, f64)>) {
        self.objective = Some(coeffs);
    }

    /// Number of variables.
    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    /// Constraint rows.
    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    /// Whether variable `j` is free.
    pub fn is_free(&self, j: usize) -> bool {
        self.free[j]
    }

    /// Objective value at `x` (0 when no objective is set).
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.as_ref().map_or(0.0, |c| c.iter().map(|&(j, v)| v * x[j]).sum())
    }

    /// Largest constraint or domain violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &free) in self.free.iter().enumerate() {
            if !free {
                worst = worst.max(-x[j]);
            }
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, v)| v * x[j]).sum();
            let viol = match row.relation {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    /// Checks a Farkas certificate. The multiplier is scaled to unit max-norm;
    /// it is accepted when `yᵀb >= tol` and every sign condition holds within
    /// `10·tol`. Returns the normalised margin `yᵀb` on success.
    pub fn verify_farkas(&self, y: &[f64], tol: f64) -> Option<f64> {
        if y.len() != self.rows.len() {
            return None;
        }
        let s = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if s.is_nan() || s <= 0.0 || !s.is_finite() {
            return None;
        }
        let y: Vec<f64> = y.iter().map(|v| v / s).collect();
        let slack = 10.0 * tol;
        let mut col = vec![0.0; self.free.len()];
        let mut yb = 0.0;
        for (yi, row) in y.iter().zip(&self.rows) {
            match row.relation {
                Relation::Le if *yi > slack => return None,
                Relation::Ge if *yi < -slack => return None,
                _ => {}
            }
            for &(j, v) in &row.coeffs {
                col[j] += yi * v;
            }
            yb += yi * row.rhs;
        }
        for (j, c) in col.iter().enumerate() {
            if self.free[j] {
                if c.abs() > slack {
                    return None;
                }
            } else if *c > slack {
                return None;
            }
        }
        (yb >= tol).then_some(yb)
    }
}

/// Decides feasibility of `problem`, ignoring any objective.
pub fn lp_feasible(problem: &LpProblem, opts: &SolveOptions) -> Result<LpCertificate> {
    let outcome = if opts.exact {
        Simplex::<BigRational>::run(problem, opts, false)?
    } else {
        Simplex::<f64>::run(problem, opts, false)?
    };
    Ok(match outcome {
        LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x, .. } => LpCertificate::Feasible { x },
        LpOutcome::Infeasible { farkas } => LpCertificate::Infeasible { farkas },
    })
}

/// Minimises the objective of `problem`.
pub fn lp_minimize(problem: &LpProblem, opts: &SolveOptions) -> Result<LpOutcome> {
    if opts.exact {
        Simplex::<BigRational>::run(problem, opts, true)
    } else {
        Simplex::<f64>::run(problem, opts, true)
    }
}

/// Dense simplex tableau in standard form `A x = b, x >= 0, b >= 0`.
struct Simplex<T: Scalar> {
    m: usize,
    /// Number of columns excluding the right-hand side.
    n: usize,
    /// Row-major `m × (n + 1)` tableau; the last column is the right-hand side.
    t: Vec<T>,
    /// Reduced-cost row, `n + 1` entries; the last is minus the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    art_start: usize,
    pivots: usize,
    max_pivots: usize,
}

/// How the columns of the standard form map back to the user's variables.
struct Layout {
    /// For each user variable: (column of x⁺, optional column of x⁻).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Row sign flips applied to make `b >= 0`.
    sigma: Vec<bool>,
}

impl<T: Scalar> Simplex<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.t[i * (self.n + 1) + j]
    }

    fn rhs(&self, i: usize) -> &T {
        &self.t[i * (self.n + 1) + self.n]
    }

    fn build(problem: &LpProblem) -> (Self, Layout) {
        let m = problem.rows.len();
        let mut var_cols = Vec::with_capacity(problem.free.len());
        let mut n = 0;
        for &free in &problem.free {
            if free {
                var_cols.push((n, Some(n + 1)));
                n += 2;
            } else {
                var_cols.push((n, None));
                n += 1;
            }
        }
        let mut slack_cols = vec![None; m];
        for (i, row) in problem.rows.iter().enumerate() {
            if row.relation != Relation::Eq {
                slack_cols[i] = Some(n);
                n += 1;
            }
        }
        let art_start = n;
        n += m;
        let w = n + 1;
        let mut t = vec![T::zero(); m * w];
        let mut sigma = vec![false; m];
        for (i, row) in problem.rows.iter().enumerate() {
            let flip = row.rhs < 0.0;
            sigma[i] = flip;
            let sgn = |v: f64| if flip { -v } else { v };
            // accumulate in f64 first so duplicate indices merge before conversion
            let mut dense: Vec<(usize, f64)> = Vec::with_capacity(row.coeffs.len());
            for &(j, v) in &row.coeffs {
                if let Some(e) = dense.iter_mut().find(|(k, _)| *k == j) {
                    e.1 += v;
                } else {
                    dense.push((j, v));
                }
            }
            for (j, v) in dense {
                if v == 0.0 {
                    continue;
                }
                let (cp, cm) = var_cols[j];
                t[i * w + cp] = T::from_f64(sgn(v));
                if let Some(cm) = cm {
                    t[i * w + cm] = T::from_f64(-sgn(v));
                }
            }
            if let Some(s) = slack_cols[i] {
                let sv = if row.relation == Relation::Le { 1.0 } else { -1.0 };
                t[i * w + s] = T::from_f64(sgn(sv));
            }
            t[i * w + art_start + i] = T::one();
            t[i * w + n] = T::from_f64(sgn(row.rhs));
        }
        let basis = (0..m).map(|i| art_start + i).collect();
        let s = Simplex {
            m,
            n,
            t,
            cost: vec![T::zero(); n + 1],
            basis,
            art_start,
            pivots: 0,
            max_pivots: 0,
        };
        (s, Layout { var_cols, sigma })
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::NumericalFailure(format!(
                "simplex pivot limit {} exceeded (possible cycling)",
                self.max_pivots
            )));
        }
        let w = self.n + 1;
        let p = self.t[r * w + c].clone();
        for j in 0..w {
            let v = self.t[r * w + j].clone();
            if !v.is_zero() {
                self.t[r * w + j] = v / p.clone();
            }
        }
        self.t[r * w + c] = T::one();
        let prow: Vec<(usize, T)> = (0..w)
            .filter_map(|j| {
                let v = &self.t[r * w + j];
                (!v.is_zero()).then(|| (j, v.clone()))
            })
            .collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in &prow {
                let cur = self.t[i * w + j].clone();
                self.t[i * w + j] = cur - f.clone() * v.clone();
            }
            self.t[i * w + c] = T::zero();
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (j, v) in &prow {
                let cur = self.cost[*j].clone();
                self.cost[*j] = cur - f.clone() * v.clone();
            }
            self.cost[c] = T::zero();
        }
        self.basis[r] = c;
        if !T::is_exact() {
            // the relaxed ratio test may leave slightly negative basic values
            for i in 0..self.m {
                if *self.rhs(i) < T::zero() {
                    self.t[i * w + self.n] = T::zero();
                }
            }
        }
        Ok(())
    }

    /// Minimum-ratio row with Bland tie-breaking on the leaving basis index.
    fn bland_ratio(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.m {
            let a = self.at(i, c);
            if *a <= T::zero() {
                continue;
            }
            let ratio = self.rhs(i).clone() / a.clone();
            best = match best {
                Some((bi, br)) if !(ratio < br || (ratio == br && self.basis[i] < self.basis[bi])) => Some((bi, br)),
                _ => Some((i, ratio)),
            };
        }
        best.map(|(r, _)| r)
    }

    /// Harris two-pass ratio test: bound the step with the right-hand sides
    /// relaxed by a feasibility tolerance, then among rows within the bound
    /// pivot on the largest element. Avoids the tiny pivots that a strict
    /// minimum-ratio rule picks at degenerate vertices.
    fn harris_ratio(&self, c: usize) -> Option<usize> {
        const PIVOT_TOL: f64 = 1e-9;
        const FEAS_TOL: f64 = 1e-10;
        let mut bound = f64::INFINITY;
        for i in 0..self.m {
            let a = self.at(i, c).to_f64();
            if a > PIVOT_TOL {
                bound = bound.min((self.rhs(i).to_f64().max(0.0) + FEAS_TOL) / a);
            }
        }
        if !bound.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, c).to_f64();
            if a <= PIVOT_TOL || self.rhs(i).to_f64().max(0.0) / a > bound {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, ba)) => a > ba * (1.0 + 1e-12) || (a >= ba * (1.0 - 1e-12) && self.basis[i] < self.basis[bi]),
            };
            if better {
                best = Some((i, a));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Runs Bland-rule simplex iterations on the current cost row.
    /// Returns `Some(col)` if the objective is unbounded along `col`.
    fn iterate(&mut self, allow_artificial: bool) -> Result<Option<usize>> {
        let eps = T::eps();
        let neg_eps = -eps.clone();
        loop {
            let limit = if allow_artificial { self.n } else { self.art_start };
            let Some(c) = (0..limit).find(|&j| self.cost[j] < neg_eps) else {
                return Ok(None);
            };
            let best = if T::is_exact() { self.bland_ratio(c) } else { self.harris_ratio(c) };
            match best {
                None => return Ok(Some(c)),
                Some(r) => self.pivot(r, c)?,
            }
        }
    }

    /// Recomputes the basic solution of the current basis from the original
    /// constraint matrix, discarding the rounding error accumulated in the
    /// tableau. Returns `None` when the basis matrix is numerically singular.
    fn refactorized_values(&self, problem: &LpProblem) -> Option<Vec<T>> {
        let (orig, _) = Self::build(problem);
        let b: Vec<Vec<T>> =
            (0..self.m).map(|i| self.basis.iter().map(|&c| orig.at(i, c).clone()).collect()).collect();
        let rhs: Vec<T> = (0..self.m).map(|i| orig.rhs(i).clone()).collect();
        let xb = crate::linalg::solve(&b, &rhs)?;
        let mut xs = vec![T::zero(); self.n];
        for (&c, v) in self.basis.iter().zip(xb) {
            // tiny negative basic values are rounding noise at a degenerate vertex
            xs[c] = if v < T::zero() && v.abs_val().to_f64() <= 1e-9 { T::zero() } else { v };
        }
        Some(xs)
    }

    fn column_values(&self) -> Vec<T> {
        let mut xs = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            xs[b] = self.rhs(i).clone();
        }
        xs
    }

    fn user_point(&self, layout: &Layout, xs: &[T]) -> Vec<f64> {
        layout
            .var_cols
            .iter()
            .map(|&(cp, cm)| {
                let v = xs[cp].to_f64();
                match cm {
                    Some(cm) => v - xs[cm].to_f64(),
                    None => v,
                }
            })
            .collect()
    }

    fn run(problem: &LpProblem, opts: &SolveOptions, optimize: bool) -> Result<LpOutcome> {
        let (mut s, layout) = Self::build(problem);
        s.max_pivots = opts.max_pivots;
        let m = s.m;
        let n = s.n;
        let w = n + 1;

        // Phase 1: minimise the sum of artificials.
        for j in 0..=n {
            if j >= s.art_start && j < n {
                continue;
            }
            let mut acc = T::zero();
            for i in 0..m {
                let v = &s.t[i * w + j];
                if !v.is_zero() {
                    acc = acc - v.clone();
                }
            }
            s.cost[j] = acc;
        }
        s.iterate(true)?;

        let xs = s.column_values();
        let mut x = s.user_point(&layout, &xs);
        let bmax = problem.rows.iter().fold(1.0_f64, |a, r| a.max(r.rhs.abs()));
        let phase1 = -s.cost[n].to_f64();
        let exact_feasible = T::is_exact() && s.cost[n].is_zero();
        let mut residual = problem.max_violation(&x);
        if !T::is_exact() && residual > opts.tol * bmax && phase1 <= opts.tol * bmax * (m.max(1) as f64) {
            if let Some(xs) = s.refactorized_values(problem) {
                let refined = s.user_point(&layout, &xs);
                let r = problem.max_violation(&refined);
                if r < residual {
                    x = refined;
                    residual = r;
                }
            }
        }
        let feasible = if T::is_exact() {
            exact_feasible
        } else {
            residual <= opts.tol * bmax && phase1 <= opts.tol * bmax * (m.max(1) as f64)
        };

        if !feasible {
            // multipliers of the standardised rows: u_i = 1 - reduced cost of artificial i
            let mut y = Vec::with_capacity(m);
            for i in 0..m {
                let u = T::one() - s.cost[s.art_start + i].clone();
                let u = if layout.sigma[i] { -u } else { u };
                y.push(u);
            }
            if T::is_exact() {
                verify_farkas_exact(problem, &y)?;
            }
            let yf: Vec<f64> = y.iter().map(|v| v.to_f64()).collect();
            return match problem.verify_farkas(&yf, opts.tol) {
                Some(_) => Ok(LpOutcome::Infeasible { farkas: yf }),
                None => Err(Error::NumericalFailure(format!(
                    "phase-1 optimum {phase1:.3e} with residual {residual:.3e}: \
                     neither a feasible point nor a valid Farkas certificate"
                ))),
            };
        }

        if !optimize || problem.objective.is_none() {
            return Ok(LpOutcome::Optimal { value: problem.objective_value(&x), x });
        }

        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if s.basis[i] < s.art_start {
                continue;
            }
            let mut best: Option<usize> = None;
            for j in 0..s.art_start {
                let a = s.at(i, j).abs_val();
                if a > T::eps() && best.map_or(true, |b| a > s.at(i, b).abs_val()) {
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                if !T::is_exact() {
                    s.t[i * w + n] = T::zero();
                }
                s.pivot(i, j)?;
            }
        }

        // Phase 2 cost row.
        let mut c = vec![T::zero(); n + 1];
        for &(j, v) in problem.objective.as_ref().expect("objective present") {
            let (cp, cm) = layout.var_cols[j];
            c[cp] = c[cp].clone() + T::from_f64(v);
            if let Some(cm) = cm {
                c[cm] = c[cm].clone() - T::from_f64(v);
            }
        }
        let mut cost = c.clone();
        cost[n] = T::zero();
        for i in 0..m {
            let cb = c[s.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                let v = &s.t[i * w + j];
                if !v.is_zero() {
                    cost[j] = cost[j].clone() - cb.clone() * v.clone();
                }
            }
        }
        for j in s.art_start..n {
            cost[j] = T::zero();
        }
        s.cost = cost;
        let unbounded = s.iterate(false)?;
        let xs = s.column_values();
        let mut x = s.user_point(&layout, &xs);
        if !T::is_exact() && problem.max_violation(&x) > opts.tol * bmax {
            if let Some(refined) = s.refactorized_values(problem) {
                let rx = s.user_point(&layout, &refined);
                if problem.max_violation(&rx) < problem.max_violation(&x) {
                    x = rx;
                }
            }
        }
        if let Some(col) = unbounded {
            let mut d = vec![T::zero(); n];
            d[col] = T::one();
            for i in 0..m {
                d[s.basis[i]] = -s.at(i, col).clone();
            }
            let ray = s.user_point(&layout, &d);
            return Ok(LpOutcome::Unbounded { x, ray });
        }
        let value = problem.objective_value(&x);
        if !T::is_exact() {
            let residual = problem.max_violation(&x);
            if residual > 10.0 * opts.tol * bmax {
                return Err(Error::NumericalFailure(format!(
                    "phase-2 point violates constraints by {residual:.3e}"
                )));
            }
        }
        Ok(LpOutcome::Optimal { x, value })
    }
}

/// Exact verification of a Farkas certificate in rational arithmetic.
fn verify_farkas_exact<T: Scalar>(problem: &LpProblem, y: &[T]) -> Result<()> {
    let mut col = vec![T::zero(); problem.free.len()];
    let mut yb = T::zero();
    for (yi, row) in y.iter().zip(&problem.rows) {
        let bad = match row.relation {
            Relation::Le => *yi > T::zero(),
            Relation::Ge => *yi < T::zero(),
            Relation::Eq => false,
        };
        if bad {
            return Err(Error::NumericalFailure("exact Farkas certificate has a wrong row sign".into()));
        }
        for &(j, v) in &row.coeffs {
            col[j] = col[j].clone() + yi.clone() * T::from_f64(v);
        }
        yb = yb + yi.clone() * T::from_f64(row.rhs);
    }
    for (j, c) in col.iter().enumerate() {
        let ok = if problem.free[j] { c.is_zero() } else { *c <= T::zero() };
        if !ok {
            return Err(Error::NumericalFailure("exact Farkas certificate has a wrong column sign".into()));
        }
    }
    if yb <= T::zero() {
        return Err(Error::NumericalFailure("exact Farkas certificate has no margin".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both() -> [SolveOptions; 2] {
        [SolveOptions::default(), SolveOptions::exact()]
    }

    #[test]
    fn single_variable_feasible() {
        for opts in both() {
            let mut p = LpProblem::new();
            let x = p.add_var(false);
            p.add_row(vec![(x, 1.0)], Relation::Eq, 1.0);
            match lp_feasible(&p, &opts).unwrap() {
                LpCertificate::Feasible { x } => assert!((x[0] - 1.0).abs() < 1e-12),
                other => panic!("expected feasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn single_variable_infeasible() {
        for opts in both() {
            let mut p = LpProblem::new();
            let x = p.add_var(false);
            p.add_row(vec![(x, 1.0)], Relation::Eq, -1.0);
            match lp_feasible(&p, &opts).unwrap() {
                LpCertificate::Infeasible { farkas } => {
                    assert!(p.verify_farkas(&farkas, 1e-9).is_some());
                    // y·(-1) > 0 and y·1 <= 0  ⇒  y < 0
                    assert!(farkas[0] < 0.0);
                }
                other => panic!("expected infeasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn small_minimisation() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  → (1.6, 1.2), value -2.8
        for opts in both() {
            let mut p = LpProblem::new();
            let x = p.add_var(false);
            let y = p.add_var(false);
            p.add_row(vec![(x, 1.0), (y, 2.0)], Relation::Le, 4.0);
            p.add_row(vec![(x, 3.0), (y, 1.0)], Relation::Le, 6.0);
            p.set_objective(vec![(x, -1.0), (y, -1.0)]);
            match lp_minimize(&p, &opts).unwrap() {
                LpOutcome::Optimal { x, value } => {
                    assert!((value + 2.8).abs() < 1e-12, "{value}");
                    assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn free_variables_and_ge_rows() {
        // min x  s.t. x >= -3 (free x)  → -3
        let mut p = LpProblem::new();
        let x = p.add_var(true);
        p.add_row(vec![(x, 1.0)], Relation::Ge, -3.0);
        p.set_objective(vec![(x, 1.0)]);
        match lp_minimize(&p, &SolveOptions::default()).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value + 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let mut p = LpProblem::new();
        let x = p.add_var(true);
        p.add_row(vec![(x, 1.0)], Relation::Le, 1.0);
        p.set_objective(vec![(x, 1.0)]);
        match lp_minimize(&p, &SolveOptions::default()).unwrap() {
            LpOutcome::Unbounded { ray, .. } => assert!(ray[0] < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 stated twice, min x → 0
        for opts in both() {
            let mut p = LpProblem::new();
            let x = p.add_var(false);
            let y = p.add_var(false);
            p.add_row(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 1.0);
            p.add_row(vec![(x, 2.0), (y, 2.0)], Relation::Eq, 2.0);
            p.set_objective(vec![(x, 1.0)]);
            match lp_minimize(&p, &opts).unwrap() {
                LpOutcome::Optimal { value, x } => {
                    assert!(value.abs() < 1e-12);
                    assert!((x[1] - 1.0).abs() < 1e-12);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn pivot_limit_is_numerical_failure() {
        let mut p = LpProblem::new();
        let x = p.add_var(false);
        let y = p.add_var(false);
        p.add_row(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 1.0);
        p.add_row(vec![(x, 1.0), (y, -1.0)], Relation::Eq, 0.0);
        let opts = SolveOptions { max_pivots: 0, ..Default::default() };
        let err = lp_feasible(&p, &opts).unwrap_err();
        assert!(err.is_numerical());
    }
}
