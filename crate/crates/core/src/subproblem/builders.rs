//! Assembly of the per-block subproblems.
//!
//! Everything is expressed in noise-normalized units: every user form is the
//! received amplitude divided by `σ`, so a denominator is `1 + Σ_{i≠k} |z_ki|²`
//! and SINR thresholds carry over unchanged. Beamformers are optimized as
//! `w_k = sqrt(p) v_k` with `Σ‖v_k‖² ≤ 1`, and passivity rows are divided by
//! the incident power so their right-hand side is `1`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    linearize_numerator, Affine, BlockValue, ComplexForm, ConicProblem, Constraint, Equality, GramForm,
    ObjectiveRow, ProblemMeta, SparseRow,
};
use crate::architectures::Architecture;
use crate::channel::ChannelSet;
use crate::linalg::{CMatrix, CVector, C64};
use crate::optimizer::BeamformerSet;
use crate::{Error, Result};

/// How the symmetric surface block is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BdFormulation {
    /// Every upper-triangular entry of `Φ` is a variable.
    Full,
    /// The reflected field `Y = ΦA` restricted to the subspace the users and
    /// the symmetry condition can see; `Φ` is reconstructed afterwards.
    #[default]
    Reduced,
}

/// Current operating point and system constants for one block.
#[derive(Debug, Clone, Copy)]
pub struct Operating<'a> {
    pub channels: &'a ChannelSet,
    pub phi: &'a CMatrix,
    pub beams: &'a BeamformerSet,
    pub noise: f64,
    pub power: f64,
}

/// Dinkelbach parameter, profile weights and optional threshold rows.
#[derive(Debug, Clone, Copy)]
pub struct Dinkelbach<'a> {
    pub mu: f64,
    pub weights: &'a [f64],
    /// `None` drops the `γ_k ≥ γ̄` rows (warm-up mode).
    pub gamma_bar: Option<f64>,
    /// Row `k` is divided by `scales[k]` when given; `λ_k D_k` at the
    /// previous iterate gives the superlinearly convergent variant.
    pub scales: Option<&'a [f64]>,
}

/// Per-user pieces of the SINR ratio in a given variable layout.
#[derive(Debug, Clone)]
pub struct RatioParts {
    /// Desired-signal amplitude `z_kk(x)`.
    pub signal: ComplexForm,
    /// Tangent minorant of `|z_kk|²` at the reference point.
    pub numerator: Affine,
    /// `Σ_{i≠k} |z_ki(x)|²`.
    pub interference: GramForm,
}

impl RatioParts {
    pub fn denominator(&self, x: &[f64]) -> f64 {
        1.0 + self.interference.eval(x)
    }

    pub fn sinr(&self, x: &[f64]) -> f64 {
        self.signal.eval(x).norm_sqr() / self.denominator(x)
    }
}

#[derive(Debug, Clone)]
pub enum Layout {
    /// Diagonal entries `φ_m`, one complex variable each.
    Diagonal { m: usize },
    /// Upper triangle of a symmetric `Φ`, row by row.
    Symmetric { m: usize },
    /// `Z` (r×K, column-major) with `ΦA = QZ`.
    Reduced {
        q: CMatrix,
        a: CMatrix,
        phi_ref: CMatrix,
    },
    /// Stacked `v_k`, scaled by `sqrt(p)` on decode.
    Beams { n: usize, k: usize, scale: f64 },
}

fn sym_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m - i * (i + 1) / 2 + j
}

/// Assembled block: user ratios, structural constraints and the reference point.
#[derive(Debug, Clone)]
pub struct BlockProblem {
    pub block: &'static str,
    pub layout: Layout,
    pub parts: Vec<RatioParts>,
    pub structural: Vec<Constraint>,
    pub equalities: Vec<Equality>,
    pub reference: DVector<f64>,
}

impl BlockProblem {
    pub fn num_vars(&self) -> usize {
        self.reference.len()
    }

    /// The parametric max-min problem for a given `μ`.
    pub fn problem(&self, gda: &Dinkelbach) -> ConicProblem {
        let n = self.num_vars();
        let mu = gda.mu.max(0.0);
        let mut objective_rows = Vec::with_capacity(self.parts.len());
        let mut constraints = self.structural.clone();
        for (k, part) in self.parts.iter().enumerate() {
            let lm = mu * gda.weights[k].max(0.0);
            let inv = gda.scales.map_or(1.0, |s| 1.0 / s[k]);
            let mut affine = part.numerator.clone();
            affine.constant -= lm;
            objective_rows.push(ObjectiveRow {
                label: format!("user{k}"),
                affine: affine.scaled(inv),
                quad: part.interference.scaled(lm * inv),
            });
            if let Some(gb) = gda.gamma_bar {
                if gb > 0.0 {
                    let mut affine = part.numerator.clone();
                    affine.constant -= gb;
                    constraints.push(Constraint {
                        label: format!("threshold{k}"),
                        quad: part.interference.scaled(gb),
                        affine,
                    });
                }
            }
        }
        ConicProblem {
            num_vars: n,
            objective_rows,
            constraints,
            equalities: self.equalities.clone(),
            start: self.reference.clone(),
            meta: ProblemMeta {
                block: self.block.to_string(),
                outer_iter: 0,
                inner_iter: 0,
                mu,
            },
        }
    }

    pub fn sinrs(&self, x: &[f64]) -> Vec<f64> {
        self.parts.iter().map(|p| p.sinr(x)).collect()
    }

    pub fn linearized_numerators(&self, x: &[f64]) -> Vec<f64> {
        self.parts.iter().map(|p| p.numerator.eval(x)).collect()
    }

    pub fn true_numerators(&self, x: &[f64]) -> Vec<f64> {
        self.parts.iter().map(|p| p.signal.eval(x).norm_sqr()).collect()
    }

    pub fn denominators(&self, x: &[f64]) -> Vec<f64> {
        self.parts.iter().map(|p| p.denominator(x)).collect()
    }

    pub fn decode(&self, x: &[f64]) -> BlockValue {
        match &self.layout {
            Layout::Diagonal { m } => {
                let mut phi = CMatrix::zeros(*m, *m);
                for i in 0..*m {
                    phi[(i, i)] = C64::new(x[2 * i], x[2 * i + 1]);
                }
                BlockValue::Phi(phi)
            }
            Layout::Symmetric { m } => {
                let mut phi = CMatrix::zeros(*m, *m);
                for i in 0..*m {
                    for j in i..*m {
                        let v = sym_index(*m, i, j);
                        let c = C64::new(x[2 * v], x[2 * v + 1]);
                        phi[(i, j)] = c;
                        phi[(j, i)] = c;
                    }
                }
                BlockValue::Phi(phi)
            }
            Layout::Reduced { q, a, phi_ref } => {
                let r = q.ncols();
                let k = a.ncols();
                let z = CMatrix::from_fn(r, k, |row, col| {
                    let v = col * r + row;
                    C64::new(x[2 * v], x[2 * v + 1])
                });
                BlockValue::Phi(symmetric_completion(phi_ref, a, &(q * z)))
            }
            Layout::Beams { n, k, scale } => {
                let w = (0..*k)
                    .map(|u| {
                        CVector::from_fn(*n, |i, _| {
                            let v = u * n + i;
                            C64::new(x[2 * v], x[2 * v + 1]) * *scale
                        })
                    })
                    .collect();
                BlockValue::Beams(BeamformerSet::new(w))
            }
        }
    }
}

/// Symmetric `Φ` with `ΦA = Y`, closest in structure to `phi_ref`:
/// `Φ = Φ_ref + R G⁻¹Aᴴ + Ā G⁻ᵀ Rᵀ − Ā G⁻ᵀ (AᵀR) G⁻¹ Aᴴ` with `R = Y − Φ_ref A`, `G = AᴴA`.
///
/// Exact whenever `Aᵀ Y` is symmetric and `A` has full column rank.
pub fn symmetric_completion(phi_ref: &CMatrix, a: &CMatrix, y: &CMatrix) -> CMatrix {
    let r = y - phi_ref * a;
    let g = a.adjoint() * a;
    let g_inv = g.try_inverse().unwrap_or_else(|| CMatrix::zeros(a.ncols(), a.ncols()));
    let abar = a.map(|c| c.conj());
    let first = &r * &g_inv * a.adjoint();
    let s = a.transpose() * &r;
    let correction = &abar * g_inv.transpose() * s * &g_inv * a.adjoint();
    let delta = &first + first.transpose() - correction;
    let mut phi = phi_ref + delta;
    // remove rounding asymmetry
    let m = phi.nrows();
    for i in 0..m {
        for j in (i + 1)..m {
            let avg = (phi[(i, j)] + phi[(j, i)]) * 0.5;
            phi[(i, j)] = avg;
            phi[(j, i)] = avg;
        }
    }
    phi
}

fn check_dims(op: &Operating) -> Result<()> {
    op.channels.validate()?;
    let m = op.channels.num_ris();
    let n = op.channels.num_tx();
    let k = op.channels.num_users();
    if op.phi.shape() != (m, m) {
        return Err(Error::Dimension(format!(
            "Φ is {}x{}, expected {m}x{m}",
            op.phi.nrows(),
            op.phi.ncols()
        )));
    }
    if op.beams.w.len() != k {
        return Err(Error::Dimension(format!("{} beamformers for {k} users", op.beams.w.len())));
    }
    if let Some(w) = op.beams.w.iter().find(|w| w.len() != n) {
        return Err(Error::Dimension(format!("beamformer length {}, expected {n}", w.len())));
    }
    if !(op.noise > 0.0) {
        return Err(Error::invalid("noise_power", "must be positive"));
    }
    Ok(())
}

/// Incident fields `a_i = F w_i` as columns.
fn incident(op: &Operating) -> CMatrix {
    let m = op.channels.num_ris();
    let k = op.beams.w.len();
    let mut a = CMatrix::zeros(m, k);
    for (i, w) in op.beams.w.iter().enumerate() {
        a.set_column(i, &(&op.channels.bs_ris * w));
    }
    a
}

fn complex_vec(values: impl Iterator<Item = C64>, len: usize) -> DVector<f64> {
    let mut x = DVector::zeros(2 * len);
    for (j, c) in values.enumerate() {
        x[2 * j] = c.re;
        x[2 * j + 1] = c.im;
    }
    x
}

/// Builds ratio parts from a generator of user forms `z_ki`.
fn ratio_parts(k: usize, x_ref: &[f64], n: usize, form: impl Fn(usize, usize) -> ComplexForm) -> Vec<RatioParts> {
    (0..k)
        .map(|u| {
            let signal = form(u, u);
            let numerator = linearize_numerator(&signal, x_ref, n);
            let mut interference = GramForm::default();
            for i in (0..k).filter(|&i| i != u) {
                interference.push_complex(&form(u, i));
            }
            RatioParts {
                signal,
                numerator,
                interference,
            }
        })
        .collect()
}

/// `Σ_j w_j |ξ_j|² ≤ 1` over complex variables `ξ_j`, one Gram row per real slot.
fn weighted_ball(label: &str, weights: &[(usize, f64)], n: usize) -> Constraint {
    let mut quad = GramForm::default();
    for &(j, w) in weights {
        let s = w.sqrt();
        if s > 0.0 {
            quad.push(SparseRow { idx: vec![2 * j], val: vec![s] }, 0.0);
            quad.push(SparseRow { idx: vec![2 * j + 1], val: vec![s] }, 0.0);
        }
    }
    Constraint {
        label: label.into(),
        quad,
        affine: Affine::constant(n, 1.0),
    }
}

/// Options for the surface block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiBlock {
    pub formulation: BdFormulation,
    /// `δ` in `2Re{φ_ref* φ} − |φ_ref|² ≥ 1 − δ` for the unit-modulus block.
    pub lp_modulus_slack: f64,
}

impl Default for PhiBlock {
    fn default() -> Self {
        Self {
            formulation: BdFormulation::Reduced,
            lp_modulus_slack: 0.2,
        }
    }
}

impl PhiBlock {
    pub fn build(&self, architecture: Architecture, op: &Operating) -> Result<BlockProblem> {
        check_dims(op)?;
        match architecture {
            Architecture::LpDiagonal => Ok(diagonal_block(op, Some(self.lp_modulus_slack))),
            Architecture::GpDiagonal => Ok(diagonal_block(op, None)),
            Architecture::GpBeyondDiagonal => match self.formulation {
                BdFormulation::Full => Ok(symmetric_block(op)),
                BdFormulation::Reduced => Ok(reduced_block(op).unwrap_or_else(|| symmetric_block(op))),
            },
            Architecture::Random | Architecture::None => Err(Error::invalid(
                "architecture",
                format!("{architecture} has no surface block"),
            )),
        }
    }
}

fn diagonal_block(op: &Operating, lp_slack: Option<f64>) -> BlockProblem {
    let ch = op.channels;
    let m = ch.num_ris();
    let k = op.beams.w.len();
    let nv = 2 * m;
    let a = incident(op);
    let x_ref = complex_vec((0..m).map(|i| op.phi[(i, i)]), m);
    let inv_sigma = 1.0 / op.noise.sqrt();
    let parts = ratio_parts(k, x_ref.as_slice(), nv, |u, i| {
        let mut f = ComplexForm::default();
        for j in 0..m {
            f.add(j, ch.ris_user[u][j] * a[(j, i)] * inv_sigma);
        }
        f
    });
    let mut structural = Vec::new();
    match lp_slack {
        Some(delta) => {
            for j in 0..m {
                structural.push(weighted_ball(&format!("modulus{j}"), &[(j, 1.0)], nv));
                let r = op.phi[(j, j)];
                let mut lower = Affine::zeros(nv);
                lower.coeffs[2 * j] = 2.0 * r.re;
                lower.coeffs[2 * j + 1] = 2.0 * r.im;
                lower.constant = -r.norm_sqr() - (1.0 - delta);
                structural.push(Constraint {
                    label: format!("modulus_lower{j}"),
                    quad: GramForm::default(),
                    affine: lower,
                });
            }
        }
        None => {
            let p_in: f64 = a.iter().map(|c| c.norm_sqr()).sum();
            if p_in > 0.0 {
                let weights: Vec<(usize, f64)> = (0..m)
                    .map(|j| (j, a.row(j).iter().map(|c| c.norm_sqr()).sum::<f64>() / p_in))
                    .collect();
                structural.push(weighted_ball("passivity", &weights, nv));
            }
        }
    }
    BlockProblem {
        block: if lp_slack.is_some() { "phi_lp_d" } else { "phi_gp_d" },
        layout: Layout::Diagonal { m },
        parts,
        structural,
        equalities: Vec::new(),
        reference: x_ref,
    }
}

fn symmetric_block(op: &Operating) -> BlockProblem {
    let ch = op.channels;
    let m = ch.num_ris();
    let k = op.beams.w.len();
    let nc = m * (m + 1) / 2;
    let nv = 2 * nc;
    let a = incident(op);
    let x_ref = {
        let mut x = DVector::zeros(nv);
        for i in 0..m {
            for j in i..m {
                let v = sym_index(m, i, j);
                let c = op.phi[(i, j)];
                x[2 * v] = c.re;
                x[2 * v + 1] = c.im;
            }
        }
        x
    };
    let inv_sigma = 1.0 / op.noise.sqrt();
    let parts = ratio_parts(k, x_ref.as_slice(), nv, |u, s| {
        // f_kᵀ Φ a_s = Σ_{i≤j} ξ_ij (f_i a_j + f_j a_i), diagonal counted once
        let f = &ch.ris_user[u];
        let mut form = ComplexForm::default();
        for i in 0..m {
            for j in i..m {
                let c = if i == j {
                    f[i] * a[(i, s)]
                } else {
                    f[i] * a[(j, s)] + f[j] * a[(i, s)]
                };
                form.add(sym_index(m, i, j), c * inv_sigma);
            }
        }
        form
    });
    let p_in: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let mut structural = Vec::new();
    if p_in > 0.0 {
        let scale = 1.0 / p_in.sqrt();
        let mut quad = GramForm::default();
        for s in 0..k {
            for i in 0..m {
                let mut form = ComplexForm::default();
                for j in 0..m {
                    form.add(sym_index(m, i, j), a[(j, s)] * scale);
                }
                quad.push_complex(&form);
            }
        }
        structural.push(Constraint {
            label: "passivity".into(),
            quad,
            affine: Affine::constant(nv, 1.0),
        });
    }
    BlockProblem {
        block: "phi_gp_bd",
        layout: Layout::Symmetric { m },
        parts,
        structural,
        equalities: Vec::new(),
        reference: x_ref,
    }
}

/// Orthonormal basis of the column space of `b`.
fn range_basis(b: &CMatrix) -> CMatrix {
    let svd = b.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-12 * smax.max(f64::MIN_POSITIVE))
        .collect();
    CMatrix::from_fn(b.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

fn reduced_block(op: &Operating) -> Option<BlockProblem> {
    let ch = op.channels;
    let m = ch.num_ris();
    let k = op.beams.w.len();
    let a = incident(op);
    let g = a.adjoint() * &a;
    let eig = g.clone().symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    if !(hi > 0.0 && lo > 1e-10 * hi) {
        return None;
    }
    let mut stacked = CMatrix::zeros(m, 2 * k);
    for i in 0..k {
        stacked.set_column(i, &a.column(i).map(|c| c.conj()));
        stacked.set_column(k + i, &ch.ris_user[i].map(|c| c.conj()));
    }
    let q = range_basis(&stacked);
    let r = q.ncols();
    let nc = r * k;
    let nv = 2 * nc;
    let z_ref = q.adjoint() * (op.phi * &a);
    let x_ref = complex_vec((0..k).flat_map(|col| (0..r).map(move |row| (row, col))).map(|(row, col)| z_ref[(row, col)]), nc);
    let inv_sigma = 1.0 / op.noise.sqrt();
    let qt_f: Vec<CVector> = ch.ris_user.iter().map(|f| q.tr_mul(f)).collect();
    let parts = ratio_parts(k, x_ref.as_slice(), nv, |u, s| {
        let mut form = ComplexForm::default();
        for j in 0..r {
            form.add(s * r + j, qt_f[u][j] * inv_sigma);
        }
        form
    });
    let p_in: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let weights: Vec<(usize, f64)> = (0..nc).map(|v| (v, 1.0 / p_in)).collect();
    let structural = vec![weighted_ball("passivity", &weights, nv)];
    // (AᵀQ Z)_{ij} = (AᵀQ Z)_{ji}
    let atq = a.transpose() * &q;
    let mut equalities = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let mut form = ComplexForm::default();
            for l in 0..r {
                form.add(j * r + l, atq[(i, l)]);
                form.add(i * r + l, -atq[(j, l)]);
            }
            let (re, im) = form.real_rows();
            for (part, row) in [("re", re), ("im", im)] {
                let mut affine = Affine::zeros(nv);
                for (&idx, &v) in row.idx.iter().zip(&row.val) {
                    affine.coeffs[idx] += v;
                }
                equalities.push(Equality {
                    label: format!("symmetry{i}_{j}_{part}"),
                    affine,
                });
            }
        }
    }
    Some(BlockProblem {
        block: "phi_gp_bd",
        layout: Layout::Reduced {
            q,
            a,
            phi_ref: op.phi.clone(),
        },
        parts,
        structural,
        equalities,
        reference: x_ref,
    })
}

/// Beamformer block for a fixed surface.
///
/// Under global passivity the constraint `Σ_k w_kᴴ B w_k ≤ 0` with
/// `B = Fᴴ(ΦᴴΦ − I)F` is a difference of convex quadratics; splitting `B`
/// into its positive and negative spectral parts and linearizing the negative
/// part at `w_ref` gives a convex inner approximation.
pub struct WBlock;

impl WBlock {
    pub fn build(architecture: Architecture, op: &Operating) -> Result<BlockProblem> {
        check_dims(op)?;
        if !(op.power > 0.0) {
            return Err(Error::invalid("power_budget", "must be positive"));
        }
        let ch = op.channels;
        let n = ch.num_tx();
        let k = ch.num_users();
        let nc = n * k;
        let nv = 2 * nc;
        let sqrt_p = op.power.sqrt();
        let rows: Vec<CVector> = if architecture.uses_surface() {
            ch.ris_user
                .iter()
                .map(|f| ch.bs_ris.tr_mul(&op.phi.tr_mul(f)))
                .collect()
        } else {
            ch.direct.clone()
        };
        let x_ref = complex_vec(op.beams.w.iter().flat_map(|w| w.iter().map(|c| c / sqrt_p)), nc);
        let gain = sqrt_p / op.noise.sqrt();
        let parts = ratio_parts(k, x_ref.as_slice(), nv, |u, i| {
            let mut form = ComplexForm::default();
            for t in 0..n {
                form.add(i * n + t, rows[u][t] * gain);
            }
            form
        });
        let power: Vec<(usize, f64)> = (0..nc).map(|v| (v, 1.0)).collect();
        let mut structural = vec![weighted_ball("power", &power, nv)];
        if architecture.globally_passive() {
            if let Some(c) = passivity_in_w(op, x_ref.as_slice(), nv) {
                structural.push(c);
            }
        }
        Ok(BlockProblem {
            block: "w",
            layout: Layout::Beams { n, k, scale: sqrt_p },
            parts,
            structural,
            equalities: Vec::new(),
            reference: x_ref,
        })
    }
}

fn passivity_in_w(op: &Operating, v_ref: &[f64], nv: usize) -> Option<Constraint> {
    let ch = op.channels;
    let n = ch.num_tx();
    let k = ch.num_users();
    let m = ch.num_ris();
    let gram = op.phi.adjoint() * op.phi - CMatrix::identity(m, m);
    let b = ch.bs_ris.adjoint() * gram * &ch.bs_ris;
    let b = (&b + b.adjoint()) * C64::new(0.5, 0.0);
    let eig = b.symmetric_eigen();
    let scale_ref: f64 = {
        let fv: f64 = (0..k)
            .map(|u| {
                let v = CVector::from_fn(n, |t, _| C64::new(v_ref[2 * (u * n + t)], v_ref[2 * (u * n + t) + 1]));
                (&ch.bs_ris * v).norm_squared()
            })
            .sum();
        fv
    };
    let bmax = eig.eigenvalues.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if bmax <= 1e-14 * (1.0 + ch.bs_ris.norm_squared()) {
        return None;
    }
    let norm = if scale_ref > 0.0 { scale_ref } else { bmax };
    let mut quad = GramForm::default();
    let mut neg = DMatrix::<C64>::zeros(n, n);
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        let u = eig.eigenvectors.column(idx);
        if lam > 0.0 {
            // √λ uᴴ v_k for each user
            let s = (lam / norm).sqrt();
            for user in 0..k {
                let mut form = ComplexForm::default();
                for t in 0..n {
                    form.add(user * n + t, u[t].conj() * s);
                }
                quad.push_complex(&form);
            }
        } else if lam < 0.0 {
            neg += u * u.adjoint() * C64::new(-lam / norm, 0.0);
        }
    }
    // vᴴ B⁻ v ≥ 2 Re{(B⁻ v_ref)ᴴ v} − v_refᴴ B⁻ v_ref
    let mut affine = Affine::zeros(nv);
    for user in 0..k {
        let v = CVector::from_fn(n, |t, _| C64::new(v_ref[2 * (user * n + t)], v_ref[2 * (user * n + t) + 1]));
        let bv = &neg * &v;
        for t in 0..n {
            let c = bv[t];
            affine.coeffs[2 * (user * n + t)] += 2.0 * c.re;
            affine.coeffs[2 * (user * n + t) + 1] += 2.0 * c.im;
        }
        affine.constant -= v.dotc(&bv).re;
    }
    Some(Constraint {
        label: "passivity".into(),
        quad,
        affine,
    })
}

/// Surface problem for global passivity with a symmetric `Φ` (full parameterization).
pub fn build_phi_gp_bd(op: &Operating, gda: &Dinkelbach) -> Result<ConicProblem> {
    let block = PhiBlock {
        formulation: BdFormulation::Full,
        ..Default::default()
    };
    Ok(block.build(Architecture::GpBeyondDiagonal, op)?.problem(gda))
}

/// Surface problem for global passivity with a symmetric `Φ` (reduced parameterization).
pub fn build_phi_gp_bd_reduced(op: &Operating, gda: &Dinkelbach) -> Result<ConicProblem> {
    Ok(PhiBlock::default().build(Architecture::GpBeyondDiagonal, op)?.problem(gda))
}

pub fn build_phi_gp_d(op: &Operating, gda: &Dinkelbach) -> Result<ConicProblem> {
    Ok(PhiBlock::default().build(Architecture::GpDiagonal, op)?.problem(gda))
}

pub fn build_phi_lp_d(op: &Operating, gda: &Dinkelbach, slack: f64) -> Result<ConicProblem> {
    let block = PhiBlock {
        lp_modulus_slack: slack,
        ..Default::default()
    };
    Ok(block.build(Architecture::LpDiagonal, op)?.problem(gda))
}

pub fn build_w(architecture: Architecture, op: &Operating, gda: &Dinkelbach) -> Result<ConicProblem> {
    Ok(WBlock::build(architecture, op)?.problem(gda))
}
