//! Solvers for [`ConicProblem`].
//!
//! [`BarrierSolver`] is a primal log-barrier interior-point method with a
//! phase-I feasibility search; quadratic constraints enter the barrier as
//! `−log(a·x + b − ‖Gx + g‖²)`, which is self-concordant. The Newton system
//! is dense and regularized, so directions that no constraint sees (for
//! example symmetric matrices annihilating the incident field) receive a
//! minimum-norm zero step.
//!
//! [`SubgradientSolver`] is a slow projected-subgradient fallback for the
//! diagonal surface problems, whose simple constraints project in closed form.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use super::{
    Affine, ConicProblem, ConicSolution, GramForm, KktResiduals, SolveStatus,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative duality-gap and residual target.
    pub tol: f64,
    /// Newton step budget shared by phase I and phase II.
    pub max_iters: usize,
    /// Barrier parameter growth per outer step.
    pub growth: f64,
    /// Phase I stops once every constraint holds with this much slack.
    pub interior_margin: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 200,
            growth: 100.0,
            interior_margin: 1e-9,
        }
    }
}

pub trait ConicSolver {
    fn name(&self) -> &'static str;
    fn solve(&self, problem: &ConicProblem, opts: &SolverOptions) -> ConicSolution;
}

/// Solves with the default backend.
pub fn solve(problem: &ConicProblem, opts: &SolverOptions) -> ConicSolution {
    BarrierSolver.solve(problem, opts)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BarrierSolver;

/// `‖G x + g‖² − a·x − b + extra · z_n` on `z = (x, z_n)`.
struct Term<'a> {
    quad: &'a GramForm,
    affine: &'a Affine,
    extra: f64,
}

impl Term<'_> {
    fn value(&self, z: &[f64], n: usize) -> f64 {
        self.quad.eval(&z[..n]) - self.affine.eval(&z[..n]) + self.extra * z[n]
    }

    fn gradient(&self, z: &[f64], n: usize) -> DVector<f64> {
        let mut g = DVector::zeros(n + 1);
        for (row, off) in self.quad.rows.iter().zip(&self.quad.offsets) {
            let r = 2.0 * (row.dot(&z[..n]) + off);
            for (&i, &v) in row.idx.iter().zip(&row.val) {
                g[i] += r * v;
            }
        }
        for i in 0..n {
            g[i] -= self.affine.coeffs[i];
        }
        g[n] = self.extra;
        g
    }

    /// `‖G d‖²` for the x-part of `d`.
    fn curvature(&self, d: &[f64]) -> f64 {
        self.quad
            .rows
            .iter()
            .map(|row| {
                let v = row.dot(d);
                v * v
            })
            .sum()
    }

    fn add_hessian(&self, h: &mut DMatrix<f64>, weight: f64) {
        for row in &self.quad.rows {
            for (&i, &vi) in row.idx.iter().zip(&row.val) {
                let wi = 2.0 * weight * vi;
                for (&j, &vj) in row.idx.iter().zip(&row.val) {
                    h[(i, j)] += wi * vj;
                }
            }
        }
    }
}

struct Equalities {
    e: DMatrix<f64>,
}

impl Equalities {
    fn new(problem: &ConicProblem, dim: usize) -> Option<Self> {
        if problem.equalities.is_empty() {
            return None;
        }
        let q = problem.equalities.len();
        let mut e = DMatrix::zeros(q, dim);
        for (l, eq) in problem.equalities.iter().enumerate() {
            for i in 0..problem.num_vars {
                e[(l, i)] = eq.affine.coeffs[i];
            }
        }
        Some(Self { e })
    }
}

enum NewtonError {
    Factorization,
}

/// Solves `H dz + Eᵀν = −grad`, `E dz = 0`.
fn newton_direction(
    h: &DMatrix<f64>,
    grad: &DVector<f64>,
    eq: Option<&Equalities>,
) -> Result<DVector<f64>, NewtonError> {
    let dim = h.nrows();
    let scale = (0..dim).map(|i| h[(i, i)].abs()).fold(1.0f64, f64::max);
    let mut reg = 1e-13 * scale;
    for _ in 0..5 {
        let mut hr = h.clone();
        for i in 0..dim {
            hr[(i, i)] += reg;
        }
        if let Some(chol) = hr.cholesky() {
            let y0 = chol.solve(&(-grad));
            let Some(eq) = eq else {
                return Ok(y0);
            };
            let y = chol.solve(&eq.e.transpose());
            let s = &eq.e * &y;
            let rhs = &eq.e * &y0;
            let nu = match s.clone().cholesky() {
                Some(c) => c.solve(&rhs),
                None => s.lu().solve(&rhs).ok_or(NewtonError::Factorization)?,
            };
            return Ok(y0 - y * nu);
        }
        reg *= 1e3;
    }
    Err(NewtonError::Factorization)
}

struct Barrier<'a> {
    terms: Vec<Term<'a>>,
    n: usize,
    /// `+1` minimizes `z_n`, `−1` maximizes it.
    sign: f64,
    eq: Option<&'a Equalities>,
}

enum CenterOutcome {
    Centered { hessian_step: f64 },
    /// The early-exit predicate fired.
    Stopped,
    Budget,
    Failed(&'static str),
}

impl Barrier<'_> {
    fn slacks(&self, z: &[f64]) -> Vec<f64> {
        self.terms.iter().map(|t| -t.value(z, self.n)).collect()
    }

    fn merit(&self, z: &[f64], tau: f64) -> f64 {
        let mut f = tau * self.sign * z[self.n];
        for t in &self.terms {
            let s = -t.value(z, self.n);
            if s <= 0.0 {
                return f64::INFINITY;
            }
            f -= s.ln();
        }
        f
    }

    /// Newton centering for `τ·sign·z_n − Σ log(slack)`.
    fn center(
        &self,
        z: &mut DVector<f64>,
        tau: f64,
        iters: &mut usize,
        max_iters: usize,
        stop: &dyn Fn(&[f64]) -> bool,
    ) -> CenterOutcome {
        let dim = self.n + 1;
        loop {
            if *iters >= max_iters {
                return CenterOutcome::Budget;
            }
            *iters += 1;
            let slacks = self.slacks(z.as_slice());
            if slacks.iter().any(|&s| !(s > 0.0)) {
                return CenterOutcome::Failed("iterate left the interior");
            }
            let mut grad = DVector::zeros(dim);
            grad[self.n] = tau * self.sign;
            let mut h = DMatrix::zeros(dim, dim);
            let mut grads = Vec::with_capacity(self.terms.len());
            for (t, &s) in self.terms.iter().zip(&slacks) {
                let g = t.gradient(z.as_slice(), self.n);
                grad.axpy(1.0 / s, &g, 1.0);
                t.add_hessian(&mut h, 1.0 / s);
                h.ger(1.0 / (s * s), &g, &g, 1.0);
                grads.push(g);
            }
            let dz = match newton_direction(&h, &grad, self.eq) {
                Ok(d) => d,
                Err(NewtonError::Factorization) => return CenterOutcome::Failed("singular Newton system"),
            };
            let decrement = -grad.dot(&dz);
            if !decrement.is_finite() {
                return CenterOutcome::Failed("non-finite Newton decrement");
            }
            if decrement <= 2e-10 {
                let hs = (&h * &dz).amax() / tau;
                return CenterOutcome::Centered { hessian_step: hs };
            }
            // each slack is a concave quadratic along the ray: s(α) = s − α l − α² q
            let mut alpha_max = f64::INFINITY;
            let mut lin = Vec::with_capacity(self.terms.len());
            let mut quad = Vec::with_capacity(self.terms.len());
            for ((t, g), &s) in self.terms.iter().zip(&grads).zip(&slacks) {
                let l = g.dot(&dz);
                let q = t.curvature(&dz.as_slice()[..self.n]);
                let disc = (l * l + 4.0 * q * s).sqrt();
                let root = if l > 0.0 {
                    2.0 * s / (l + disc)
                } else if q > 0.0 {
                    (disc - l) / (2.0 * q)
                } else {
                    f64::INFINITY
                };
                alpha_max = alpha_max.min(root);
                lin.push(l);
                quad.push(q);
            }
            let mut alpha = if alpha_max.is_finite() {
                (0.99 * alpha_max).min(1.0)
            } else {
                1.0
            };
            let f0 = self.merit(z.as_slice(), tau);
            let slope = grad.dot(&dz);
            let merit_along = |a: f64| {
                let mut f = tau * self.sign * (z[self.n] + a * dz[self.n]);
                for ((&s, &l), &q) in slacks.iter().zip(&lin).zip(&quad) {
                    let sa = s - a * l - a * a * q;
                    if sa <= 0.0 {
                        return f64::INFINITY;
                    }
                    f -= sa.ln();
                }
                f
            };
            let mut accepted = false;
            for _ in 0..60 {
                let fa = merit_along(alpha);
                if fa <= f0 + 0.01 * alpha * slope {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                // no further progress is representable at this barrier weight
                let hs = (&h * &dz).amax() / tau;
                return CenterOutcome::Centered { hessian_step: hs };
            }
            if alpha * dz.amax() <= 1e-15 * (1.0 + z.amax()) {
                let hs = (&h * &dz).amax() / tau;
                return CenterOutcome::Centered { hessian_step: hs };
            }
            z.axpy(alpha, &dz, 1.0);
            if stop(z.as_slice()) {
                return CenterOutcome::Stopped;
            }
        }
    }
}

fn project_onto_equalities(x: &mut DVector<f64>, problem: &ConicProblem) {
    if problem.equalities.is_empty() {
        return;
    }
    let q = problem.equalities.len();
    let n = problem.num_vars;
    let mut e = DMatrix::zeros(q, n);
    let mut r = DVector::zeros(q);
    for (l, eq) in problem.equalities.iter().enumerate() {
        for i in 0..n {
            e[(l, i)] = eq.affine.coeffs[i];
        }
        r[l] = eq.affine.eval(x.as_slice());
    }
    if r.amax() <= 1e-12 {
        return;
    }
    let eet = &e * e.transpose();
    if let Some(y) = eet.lu().solve(&r) {
        *x -= e.transpose() * y;
    }
}

impl ConicSolver for BarrierSolver {
    fn name(&self) -> &'static str {
        "barrier"
    }

    fn solve(&self, problem: &ConicProblem, opts: &SolverOptions) -> ConicSolution {
        let n = problem.num_vars;
        let mut iters = 0usize;
        let mut x0 = problem.start.clone();
        project_onto_equalities(&mut x0, problem);
        let eq = Equalities::new(problem, n + 1);

        let fail = |x: DVector<f64>, status: SolveStatus, iters: usize, report: String| {
            let objective = problem.objective_at(x.as_slice());
            let primal = problem.max_violation(x.as_slice()).max(0.0);
            ConicSolution {
                x,
                objective,
                status,
                residuals: KktResiduals {
                    primal,
                    dual: f64::NAN,
                    gap: f64::NAN,
                },
                iterations: iters,
                report: Some(report),
            }
        };

        let worst_at = |x: &DVector<f64>| {
            problem
                .constraints
                .iter()
                .map(|c| c.violation(x.as_slice()))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let mut worst = worst_at(&x0);
        // starts on a norm-ball boundary usually become interior after a slight shrink
        if worst > -opts.interior_margin {
            for eta in [1e-6, 1e-4, 1e-2] {
                let mut c = &x0 * (1.0 - eta);
                project_onto_equalities(&mut c, problem);
                let w = worst_at(&c);
                if w <= -opts.interior_margin {
                    x0 = c;
                    worst = w;
                    break;
                }
            }
        }

        // phase I: minimize s subject to c_j(x) ≤ s
        if worst > -opts.interior_margin {
            let terms: Vec<Term> = problem
                .constraints
                .iter()
                .map(|c| Term {
                    quad: &c.quad,
                    affine: &c.affine,
                    extra: -1.0,
                })
                .collect();
            let mut z = DVector::zeros(n + 1);
            z.rows_mut(0, n).copy_from(&x0);
            z[n] = worst + 0.1 * (1.0 + worst.abs());
            let barrier = Barrier {
                terms,
                n,
                sign: 1.0,
                eq: eq.as_ref(),
            };
            let margin = opts.interior_margin;
            let interior = |z: &[f64]| {
                problem
                    .constraints
                    .iter()
                    .all(|c| c.violation(&z[..n]) < -margin)
            };
            let m = barrier.terms.len() as f64;
            let mut tau = 1.0 / (1.0 + z[n].abs());
            let mut found = false;
            loop {
                match barrier.center(&mut z, tau, &mut iters, opts.max_iters, &interior) {
                    CenterOutcome::Stopped => {
                        found = true;
                        break;
                    }
                    CenterOutcome::Budget => {
                        let x = z.rows(0, n).into_owned();
                        return fail(x, SolveStatus::MaxIters, iters, "phase I did not finish".into());
                    }
                    CenterOutcome::Failed(why) => {
                        let x = z.rows(0, n).into_owned();
                        return fail(x, SolveStatus::NumericalFailure, iters, format!("phase I: {why}"));
                    }
                    CenterOutcome::Centered { .. } => {}
                }
                if interior(z.as_slice()) {
                    found = true;
                    break;
                }
                // s* lies within m/τ of the current s
                if z[n] - m / tau > 0.0 || m / tau < 1e-14 * (1.0 + z[n].abs()) {
                    break;
                }
                tau *= opts.growth;
            }
            if !found {
                let x = z.rows(0, n).into_owned();
                let s = z[n];
                let status = SolveStatus::Infeasible;
                let report = if s > opts.tol {
                    format!("infeasible: phase I optimum s* = {s:.3e} > 0")
                } else {
                    format!("no strictly feasible point: phase I optimum s* = {s:.3e}")
                };
                return fail(x, status, iters, report);
            }
            x0 = z.rows(0, n).into_owned();
        }

        // phase II: maximize t subject to t ≤ row_k(x) and the constraints
        let mut terms: Vec<Term> = problem
            .objective_rows
            .iter()
            .map(|r| Term {
                quad: &r.quad,
                affine: &r.affine,
                extra: 1.0,
            })
            .collect();
        terms.extend(problem.constraints.iter().map(|c| Term {
            quad: &c.quad,
            affine: &c.affine,
            extra: 0.0,
        }));
        let t0 = problem.objective_at(x0.as_slice());
        if !t0.is_finite() {
            return fail(x0, SolveStatus::NumericalFailure, iters, "no objective rows".into());
        }
        let mut z = DVector::zeros(n + 1);
        z.rows_mut(0, n).copy_from(&x0);
        z[n] = t0 - 0.5 * (1.0 + t0.abs());
        let barrier = Barrier {
            terms,
            n,
            sign: -1.0,
            eq: eq.as_ref(),
        };
        let m = barrier.terms.len() as f64;
        let mut tau = m / (1.0 + t0.abs());
        let never = |_: &[f64]| false;
        loop {
            match barrier.center(&mut z, tau, &mut iters, opts.max_iters, &never) {
                CenterOutcome::Centered { hessian_step, .. } => {
                    let t = z[n];
                    let gap = m / tau / (1.0 + t.abs());
                    if gap <= opts.tol {
                        let x = z.rows(0, n).into_owned();
                        let primal = problem.max_violation(x.as_slice()).max(0.0);
                        let objective = problem.objective_at(x.as_slice());
                        return ConicSolution {
                            x,
                            objective,
                            status: SolveStatus::Optimal,
                            residuals: KktResiduals {
                                primal,
                                dual: hessian_step / (1.0 + t.abs()),
                                gap,
                            },
                            iterations: iters,
                            report: None,
                        };
                    }
                    if t.abs() > 1e15 {
                        let x = z.rows(0, n).into_owned();
                        return fail(x, SolveStatus::NumericalFailure, iters, "objective unbounded".into());
                    }
                    tau *= opts.growth;
                }
                CenterOutcome::Budget => {
                    let x = z.rows(0, n).into_owned();
                    let mut sol = fail(x, SolveStatus::MaxIters, iters, "Newton budget exhausted".into());
                    sol.residuals.gap = m / tau / (1.0 + z[n].abs());
                    return sol;
                }
                CenterOutcome::Failed(why) => {
                    let x = z.rows(0, n).into_owned();
                    return fail(x, SolveStatus::NumericalFailure, iters, why.into());
                }
                CenterOutcome::Stopped => unreachable!(),
            }
        }
    }
}

/// Timing wrapper used by the complexity measurements.
pub fn solve_timed(problem: &ConicProblem, opts: &SolverOptions) -> (ConicSolution, std::time::Duration) {
    let start = Instant::now();
    let sol = solve(problem, opts);
    (sol, start.elapsed())
}

/// Projected subgradient ascent on `min_k row_k(x)` for diagonal surface
/// problems.
///
/// Constraints whose Gram rows each touch a single variable and carry no
/// affine part (weighted-ball constraints such as passivity or `|φ| ≤ 1`) and
/// purely affine constraints are enforced by projection; any other constraint
/// (the SINR-threshold rows) is folded into the maximized minimum with a
/// penalty weight. The result is approximate and always reported as
/// `max_iters`.
#[derive(Debug, Clone, Copy)]
pub struct SubgradientSolver {
    pub iterations: usize,
    pub penalty: f64,
}

impl Default for SubgradientSolver {
    fn default() -> Self {
        Self {
            iterations: 4000,
            penalty: 10.0,
        }
    }
}

enum SimpleSet {
    /// `Σ_i w_i (x_i + g_i)² ≤ b`
    Ball { idx: Vec<usize>, weight: Vec<f64>, offset: Vec<f64>, rhs: f64 },
    /// `a·x + b ≥ 0`
    HalfSpace { a: DVector<f64>, b: f64 },
}

impl SimpleSet {
    fn classify(c: &super::Constraint) -> Option<Self> {
        if c.quad.is_empty() {
            return Some(SimpleSet::HalfSpace {
                a: c.affine.coeffs.clone(),
                b: c.affine.constant,
            });
        }
        if c.affine.coeffs.iter().any(|&v| v != 0.0) {
            return None;
        }
        let mut idx = Vec::new();
        let mut weight = Vec::new();
        let mut offset = Vec::new();
        for (row, &g) in c.quad.rows.iter().zip(&c.quad.offsets) {
            if row.idx.len() != 1 || row.val[0] == 0.0 {
                return None;
            }
            let v = row.val[0];
            idx.push(row.idx[0]);
            weight.push(v * v);
            offset.push(g / v);
        }
        Some(SimpleSet::Ball {
            idx,
            weight,
            offset,
            rhs: c.affine.constant,
        })
    }

    fn project(&self, x: &mut DVector<f64>) {
        match self {
            SimpleSet::HalfSpace { a, b } => {
                let v = a.dot(x) + b;
                let nn = a.norm_squared();
                if v < 0.0 && nn > 0.0 {
                    x.axpy(-v / nn, a, 1.0);
                }
            }
            SimpleSet::Ball { idx, weight, offset, rhs } => {
                let val = |x: &DVector<f64>| -> f64 {
                    idx.iter()
                        .zip(weight)
                        .zip(offset)
                        .map(|((&i, &w), &g)| w * (x[i] + g).powi(2))
                        .sum()
                };
                if val(x) <= *rhs {
                    return;
                }
                // y_i = (x_i + g_i) / (1 + λ w_i) − g_i, bisect λ
                let y0: Vec<f64> = idx.iter().zip(offset).map(|(&i, &g)| x[i] + g).collect();
                let at = |lam: f64| -> f64 {
                    y0.iter()
                        .zip(weight)
                        .map(|(&y, &w)| w * (y / (1.0 + lam * w)).powi(2))
                        .sum()
                };
                let (mut lo, mut hi) = (0.0, 1.0);
                while at(hi) > *rhs {
                    hi *= 2.0;
                    if hi > 1e30 {
                        break;
                    }
                }
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if at(mid) > *rhs {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                for ((&i, &w), (&y, &g)) in idx.iter().zip(weight).zip(y0.iter().zip(offset)) {
                    x[i] = y / (1.0 + hi * w) - g;
                }
            }
        }
    }
}

impl ConicSolver for SubgradientSolver {
    fn name(&self) -> &'static str {
        "subgradient"
    }

    fn solve(&self, problem: &ConicProblem, opts: &SolverOptions) -> ConicSolution {
        let mut sets = Vec::new();
        let mut penalized = Vec::new();
        for c in &problem.constraints {
            match SimpleSet::classify(c) {
                Some(s) => sets.push(s),
                None => penalized.push(c),
            }
        }
        let project = |x: &mut DVector<f64>| {
            // alternating projections; the sets are few and the point starts near feasibility
            for _ in 0..50 {
                for s in &sets {
                    s.project(x);
                }
                let worst = problem
                    .constraints
                    .iter()
                    .filter(|c| !penalized.contains(c))
                    .map(|c| c.violation(x.as_slice()))
                    .fold(f64::NEG_INFINITY, f64::max);
                if worst <= 1e-12 {
                    break;
                }
            }
        };
        let merit = |x: &[f64]| -> (f64, Option<usize>, bool) {
            let mut best = f64::INFINITY;
            let mut which = None;
            let mut is_row = true;
            for (k, r) in problem.objective_rows.iter().enumerate() {
                let v = r.eval(x);
                if v < best {
                    best = v;
                    which = Some(k);
                }
            }
            for (j, c) in penalized.iter().enumerate() {
                let v = -self.penalty * c.violation(x);
                if v < best {
                    best = v;
                    which = Some(j);
                    is_row = false;
                }
            }
            (best, which, is_row)
        };
        let n = problem.num_vars;
        let mut x = problem.start.clone();
        project(&mut x);
        let mut best_x = x.clone();
        let mut best_val = f64::NEG_INFINITY;
        let scale = x.norm().max(1.0);
        for it in 0..self.iterations {
            let (val, which, is_row) = merit(x.as_slice());
            let feasible = penalized.iter().all(|c| c.violation(x.as_slice()) <= opts.tol);
            if feasible && val > best_val {
                best_val = val;
                best_x = x.clone();
            }
            let Some(j) = which else { break };
            // supergradient of the active piece
            let (quad, affine, sign) = if is_row {
                let r = &problem.objective_rows[j];
                (&r.quad, &r.affine, 1.0)
            } else {
                let c = penalized[j];
                (&c.quad, &c.affine, self.penalty)
            };
            let mut g = affine.coeffs.clone() * sign;
            for (row, off) in quad.rows.iter().zip(&quad.offsets) {
                let r = 2.0 * (row.dot(x.as_slice()) + off) * sign;
                for (&i, &v) in row.idx.iter().zip(&row.val) {
                    g[i] -= r * v;
                }
            }
            let gn = g.norm();
            if gn == 0.0 {
                break;
            }
            let step = 0.05 * scale / ((it + 1) as f64).sqrt();
            x.axpy(step / gn, &g, 1.0);
            project(&mut x);
        }
        let _ = n;
        let objective = problem.objective_at(best_x.as_slice());
        let primal = problem.max_violation(best_x.as_slice()).max(0.0);
        ConicSolution {
            x: best_x,
            objective,
            status: SolveStatus::MaxIters,
            residuals: KktResiduals {
                primal,
                dual: f64::NAN,
                gap: f64::NAN,
            },
            iterations: self.iterations,
            report: Some("projected subgradient: approximate solution".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Constraint, Equality, ObjectiveRow, ProblemMeta, SparseRow};
    use super::*;

    fn row(idx: &[usize], val: &[f64]) -> SparseRow {
        SparseRow {
            idx: idx.to_vec(),
            val: val.to_vec(),
        }
    }

    fn problem(n: usize) -> ConicProblem {
        ConicProblem {
            num_vars: n,
            objective_rows: vec![],
            constraints: vec![],
            equalities: vec![],
            start: DVector::zeros(n),
            meta: ProblemMeta::default(),
        }
    }

    fn aff(coeffs: &[f64], c: f64) -> Affine {
        Affine {
            coeffs: DVector::from_column_slice(coeffs),
            constant: c,
        }
    }

    #[test]
    fn single_constraint_toy() {
        // maximize t s.t. t ≤ 1
        let mut p = problem(1);
        p.objective_rows.push(ObjectiveRow {
            label: "one".into(),
            affine: aff(&[0.0], 1.0),
            quad: GramForm::default(),
        });
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_toy() {
        // maximize t s.t. t ≤ x, x ≤ 0, x ≥ 1
        let mut p = problem(1);
        p.objective_rows.push(ObjectiveRow {
            label: "x".into(),
            affine: aff(&[1.0], 0.0),
            quad: GramForm::default(),
        });
        p.constraints.push(Constraint {
            label: "x<=0".into(),
            quad: GramForm::default(),
            affine: aff(&[-1.0], 0.0),
        });
        p.constraints.push(Constraint {
            label: "x>=1".into(),
            quad: GramForm::default(),
            affine: aff(&[1.0], -1.0),
        });
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.report.unwrap().contains("infeasible"));
    }

    #[test]
    fn disk_maximizes_linear_objective() {
        // maximize t s.t. t ≤ x + 2y, x² + y² ≤ 1, start on the boundary
        let mut p = problem(2);
        p.objective_rows.push(ObjectiveRow {
            label: "lin".into(),
            affine: aff(&[1.0, 2.0], 0.0),
            quad: GramForm::default(),
        });
        let mut q = GramForm::default();
        q.push(row(&[0], &[1.0]), 0.0);
        q.push(row(&[1], &[1.0]), 0.0);
        p.constraints.push(Constraint {
            label: "ball".into(),
            quad: q,
            affine: aff(&[0.0, 0.0], 1.0),
        });
        p.start = DVector::from_column_slice(&[1.0, 0.0]);
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 5f64.sqrt()).abs() < 1e-7);
        assert!(sol.residuals.gap <= 1e-8);
        assert!(sol.residuals.primal <= 1e-7);

        let sg = SubgradientSolver::default().solve(&p, &SolverOptions::default());
        assert!((sg.objective - 5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn max_min_of_concave_rows() {
        // rows 1 − (x−1)² and 1 − (x+1)²; optimum at x = 0 with value 0
        let mut p = problem(1);
        for c in [-1.0, 1.0] {
            let mut q = GramForm::default();
            q.push(row(&[0], &[1.0]), c);
            p.objective_rows.push(ObjectiveRow {
                label: format!("{c}"),
                affine: aff(&[0.0], 1.0),
                quad: q,
            });
        }
        p.start = DVector::from_column_slice(&[3.0]);
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(sol.objective.abs() < 1e-7);
        assert!(sol.x[0].abs() < 1e-4);
    }

    #[test]
    fn equality_constraints_are_respected() {
        // maximize x + y s.t. x² + y² ≤ 2, x − y = 0.5
        let mut p = problem(2);
        p.objective_rows.push(ObjectiveRow {
            label: "sum".into(),
            affine: aff(&[1.0, 1.0], 0.0),
            quad: GramForm::default(),
        });
        let mut q = GramForm::default();
        q.push(row(&[0], &[1.0]), 0.0);
        q.push(row(&[1], &[1.0]), 0.0);
        p.constraints.push(Constraint {
            label: "ball".into(),
            quad: q,
            affine: aff(&[0.0, 0.0], 2.0),
        });
        p.equalities.push(Equality {
            label: "diff".into(),
            affine: aff(&[1.0, -1.0], -0.5),
        });
        let sol = solve(&p, &SolverOptions::default());
        assert_eq!(sol.status, SolveStatus::Optimal);
        // x = y + 0.5, 2y² + y + 0.25 = 2 → y = (−1 + sqrt(15)) / 4
        let y = (-1.0 + 15f64.sqrt()) / 4.0;
        assert!((sol.objective - (2.0 * y + 0.5)).abs() < 1e-7);
        assert!((sol.x[0] - sol.x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut p = problem(2);
        p.objective_rows.push(ObjectiveRow {
            label: "lin".into(),
            affine: aff(&[1.0, 2.0], 0.0),
            quad: GramForm::default(),
        });
        let mut q = GramForm::default();
        q.push(row(&[0], &[1.0]), 0.0);
        q.push(row(&[1], &[1.0]), 0.0);
        p.constraints.push(Constraint {
            label: "ball".into(),
            quad: q,
            affine: aff(&[0.0, 0.0], 1.0),
        });
        let opts = SolverOptions {
            max_iters: 2,
            ..Default::default()
        };
        let sol = solve(&p, &opts);
        assert_eq!(sol.status, SolveStatus::MaxIters);
        assert!(p.max_violation(sol.x.as_slice()) <= 0.0);
    }
}
