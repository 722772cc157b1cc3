//! Convex max-min subproblems and the solvers behind them.
//!
//! Every subproblem has the same shape over a real variable vector `x`:
//!
//! ```text
//! maximize t
//! s.t.  a_k·x + b_k − ‖G_k x + g_k‖² ≥ t          for each user row k
//!       ‖G_j x + g_j‖² ≤ a_j·x + b_j               for each constraint j
//!       e_l·x + f_l = 0                            for each equality l
//! ```
//!
//! Quadratic terms are always stored through their Gram factors `G`, so every
//! quadratic form is positive semidefinite by construction; a constraint is a
//! rotated second-order cone. Complex variables occupy two consecutive real
//! slots `(re, im)`.

mod builders;
mod dump;
pub mod solver;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMatrix, C64};
use crate::optimizer::BeamformerSet;

pub use builders::{
    build_phi_gp_bd, build_phi_gp_bd_reduced, build_phi_gp_d, build_phi_lp_d, build_w, symmetric_completion,
    BdFormulation, BlockProblem, Dinkelbach, Layout, Operating, PhiBlock, RatioParts, WBlock,
};
pub use solver::{solve, BarrierSolver, ConicSolver, SolverOptions, SubgradientSolver};

/// Sparse real row `Σ val_i x_{idx_i}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRow {
    pub idx: Vec<usize>,
    pub val: Vec<f64>,
}

impl SparseRow {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.idx.iter().zip(&self.val).map(|(&i, &v)| v * x[i]).sum()
    }

    fn push(&mut self, i: usize, v: f64) {
        if v != 0.0 {
            self.idx.push(i);
            self.val.push(v);
        }
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            idx: self.idx.clone(),
            val: self.val.iter().map(|v| v * s).collect(),
        }
    }
}

/// `‖G x + g‖²` with `G` stored row by row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GramForm {
    pub rows: Vec<SparseRow>,
    pub offsets: Vec<f64>,
}

impl GramForm {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: SparseRow, offset: f64) {
        self.rows.push(row);
        self.offsets.push(offset);
    }

    /// Appends `|z(x)|²` for a complex linear form `z`.
    pub fn push_complex(&mut self, form: &ComplexForm) {
        let (re, im) = form.real_rows();
        self.push(re, form.constant.re);
        self.push(im, form.constant.im);
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.offsets)
            .map(|(r, g)| {
                let v = r.dot(x) + g;
                v * v
            })
            .sum()
    }

    /// Same form multiplied by `s ≥ 0`.
    pub fn scaled(&self, s: f64) -> Self {
        let r = s.sqrt();
        Self {
            rows: self.rows.iter().map(|row| row.scaled(r)).collect(),
            offsets: self.offsets.iter().map(|g| g * r).collect(),
        }
    }
}

/// `a·x + b` with dense coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub coeffs: DVector<f64>,
    pub constant: f64,
}

impl Affine {
    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: DVector::zeros(n),
            constant: 0.0,
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            coeffs: DVector::zeros(n),
            constant: c,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.constant
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: &self.coeffs * s,
            constant: self.constant * s,
        }
    }
}

/// Complex linear form `Σ c_j ξ_j + c₀` in complex variables `ξ_j = x_{2j} + i x_{2j+1}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComplexForm {
    pub terms: Vec<(usize, C64)>,
    pub constant: C64,
}

impl ComplexForm {
    pub fn add(&mut self, var: usize, coeff: C64) {
        if coeff != C64::new(0.0, 0.0) {
            self.terms.push((var, coeff));
        }
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|&(j, c)| c * C64::new(x[2 * j], x[2 * j + 1]))
            .sum::<C64>()
            + self.constant
    }

    /// Real rows of `Re z` and `Im z` without the constant.
    pub fn real_rows(&self) -> (SparseRow, SparseRow) {
        let mut re = SparseRow::default();
        let mut im = SparseRow::default();
        for &(j, c) in &self.terms {
            re.push(2 * j, c.re);
            re.push(2 * j + 1, -c.im);
            im.push(2 * j, c.im);
            im.push(2 * j + 1, c.re);
        }
        (re, im)
    }

    /// The affine functional `x ↦ Re{conj(a) z(x)}`.
    pub fn real_part_against(&self, a: C64, n: usize) -> Affine {
        let mut out = Affine::zeros(n);
        let (re, im) = self.real_rows();
        for (&i, &v) in re.idx.iter().zip(&re.val) {
            out.coeffs[i] += a.re * v;
        }
        for (&i, &v) in im.idx.iter().zip(&im.val) {
            out.coeffs[i] += a.im * v;
        }
        out.constant = (a.conj() * self.constant).re;
        out
    }
}

/// Tangent minorant of `|z|²` at `reference`, evaluated at `value`:
/// `|a|² + 2 Re{a (b − a)*}`.
pub fn ccp_minorant(reference: C64, value: C64) -> f64 {
    reference.norm_sqr() + 2.0 * (reference * (value - reference).conj()).re
}

/// Affine minorant of `|z(x)|²` tangent at `x_ref`: `2 Re{conj(z_ref) z(x)} − |z_ref|²`.
pub fn linearize_numerator(form: &ComplexForm, x_ref: &[f64], n: usize) -> Affine {
    let z_ref = form.eval(x_ref);
    let mut aff = form.real_part_against(z_ref, n).scaled(2.0);
    aff.constant -= z_ref.norm_sqr();
    aff
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveRow {
    pub label: String,
    pub affine: Affine,
    pub quad: GramForm,
}

impl ObjectiveRow {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.affine.eval(x) - self.quad.eval(x)
    }
}

/// `‖G x + g‖² ≤ a·x + b`; an empty Gram part makes it an affine `a·x + b ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub label: String,
    pub quad: GramForm,
    pub affine: Affine,
}

impl Constraint {
    /// `‖G x + g‖² − a·x − b`; feasible when `≤ 0`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.quad.eval(x) - self.affine.eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub label: String,
    pub affine: Affine,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub block: String,
    pub outer_iter: usize,
    pub inner_iter: usize,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub num_vars: usize,
    pub objective_rows: Vec<ObjectiveRow>,
    pub constraints: Vec<Constraint>,
    pub equalities: Vec<Equality>,
    /// Point satisfying the equalities; the solver starts from it.
    pub start: DVector<f64>,
    pub meta: ProblemMeta,
}

impl ConicProblem {
    /// `min_k` of the user rows at `x`.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective_rows
            .iter()
            .map(|r| r.eval(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let ineq = self
            .constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(f64::NEG_INFINITY, f64::max);
        let eq = self
            .equalities
            .iter()
            .map(|e| e.affine.eval(x).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        ineq.max(eq)
    }

    pub fn dump(&self) -> String {
        dump::dump(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    MaxIters,
    NumericalFailure,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::MaxIters => "max_iters",
            SolveStatus::NumericalFailure => "numerical_failure",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KktResiduals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSolution {
    pub x: DVector<f64>,
    pub objective: f64,
    pub status: SolveStatus,
    pub residuals: KktResiduals,
    pub iterations: usize,
    /// Present when the status is not optimal.
    pub report: Option<String>,
}

/// Decoded block variable.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockValue {
    Phi(CMatrix),
    Beams(BeamformerSet),
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn minorant_is_tangent_at_reference() {
        let a = C64::new(0.3, -1.7);
        assert!((ccp_minorant(a, a) - a.norm_sqr()).abs() < 1e-15);
        let one = C64::new(1.0, 0.0);
        let b = C64::new(2.0, 0.0);
        assert!((ccp_minorant(one, b) - 3.0).abs() < 1e-15);
        assert!(ccp_minorant(one, b) <= b.norm_sqr());
    }

    #[test]
    fn minorant_never_exceeds_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10_000 {
            let a = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let b = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            assert!(ccp_minorant(a, b) <= b.norm_sqr() + 1e-12);
        }
    }

    #[test]
    fn linearized_form_matches_scalar_minorant() {
        let mut form = ComplexForm::default();
        form.add(0, C64::new(0.5, 2.0));
        form.add(1, C64::new(-1.0, 0.25));
        form.constant = C64::new(0.1, 0.0);
        let x_ref = [0.2, -0.3, 1.0, 0.7];
        let x = [1.2, 0.4, -0.5, 0.1];
        let aff = linearize_numerator(&form, &x_ref, 4);
        let expect = ccp_minorant(form.eval(&x_ref), form.eval(&x));
        assert!((aff.eval(&x) - expect).abs() < 1e-12);
        assert!((aff.eval(&x_ref) - form.eval(&x_ref).norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn gram_push_complex_is_modulus_squared() {
        let mut form = ComplexForm::default();
        form.add(0, C64::new(1.0, -2.0));
        form.constant = C64::new(0.0, 1.0);
        let mut g = GramForm::default();
        g.push_complex(&form);
        let x = [0.3, 0.9];
        assert!((g.eval(&x) - form.eval(&x).norm_sqr()).abs() < 1e-12);
        assert!((g.scaled(4.0).eval(&x) - 4.0 * g.eval(&x)).abs() < 1e-12);
    }
}
