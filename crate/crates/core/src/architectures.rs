//! Surface architectures, their feasible sets and the global passivity functional.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{asymmetry, cmat_serde, off_diagonal_max, CMatrix, C64};
use crate::optimizer::BeamformerSet;
use crate::{Error, Result};

pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Architecture {
    /// Unit-modulus diagonal.
    #[serde(rename = "lp-d")]
    LpDiagonal,
    /// Diagonal under the global passivity constraint.
    #[serde(rename = "gp-d")]
    GpDiagonal,
    /// Symmetric under the global passivity constraint.
    #[serde(rename = "gp-bd")]
    GpBeyondDiagonal,
    /// Unit-modulus diagonal with random, non-optimized phases.
    #[serde(rename = "rand")]
    Random,
    /// No surface; users are served over the direct links.
    #[serde(rename = "none")]
    None,
}

impl Architecture {
    pub const ALL: [Architecture; 5] = [
        Architecture::LpDiagonal,
        Architecture::GpDiagonal,
        Architecture::GpBeyondDiagonal,
        Architecture::Random,
        Architecture::None,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::LpDiagonal => "lp-d",
            Architecture::GpDiagonal => "gp-d",
            Architecture::GpBeyondDiagonal => "gp-bd",
            Architecture::Random => "rand",
            Architecture::None => "none",
        }
    }

    /// Whether the surface block is optimized.
    pub fn optimizes_surface(self) -> bool {
        matches!(
            self,
            Architecture::LpDiagonal | Architecture::GpDiagonal | Architecture::GpBeyondDiagonal
        )
    }

    /// Whether feasibility depends on the beamformers through the passivity functional.
    pub fn globally_passive(self) -> bool {
        matches!(self, Architecture::GpDiagonal | Architecture::GpBeyondDiagonal)
    }

    pub fn uses_surface(self) -> bool {
        self != Architecture::None
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lp-d" | "lp_diagonal" => Ok(Architecture::LpDiagonal),
            "gp-d" | "gp_diagonal" => Ok(Architecture::GpDiagonal),
            "gp-bd" | "gp_beyond_diagonal" => Ok(Architecture::GpBeyondDiagonal),
            "rand" | "random" => Ok(Architecture::Random),
            "none" => Ok(Architecture::None),
            other => Err(Error::invalid("architecture", format!("unknown architecture `{other}`"))),
        }
    }
}

/// A reflection matrix tagged with its architecture and the passivity gap it
/// was last validated with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisState {
    #[serde(with = "cmat_serde")]
    pub phi: CMatrix,
    pub architecture: Architecture,
    /// `p_out − p_in` in watts against the beamformers used at construction.
    pub passivity_gap: f64,
    pub feasibility_tol: f64,
}

impl RisState {
    pub fn new(
        phi: CMatrix,
        architecture: Architecture,
        bs_ris: &CMatrix,
        beams: &BeamformerSet,
    ) -> Result<Self> {
        let gap = passivity_gap(&phi, bs_ris, beams)?;
        Ok(Self {
            phi,
            architecture,
            passivity_gap: gap,
            feasibility_tol: DEFAULT_FEASIBILITY_TOL,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.phi.nrows()
    }

    /// Same reflection matrix under another architecture tag.
    pub fn retagged(&self, architecture: Architecture) -> Self {
        Self {
            architecture,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `Tr(F (Σ_k w_k w_kᴴ) Fᴴ (ΦᴴΦ − I)) = Σ_k ‖Φ F w_k‖² − ‖F w_k‖²`.
///
/// Nonpositive values mean the surface reflects no more power than it receives.
pub fn passivity_gap(phi: &CMatrix, bs_ris: &CMatrix, beams: &BeamformerSet) -> Result<f64> {
    let m = bs_ris.nrows();
    if phi.shape() != (m, m) {
        return Err(Error::Dimension(format!(
            "Φ is {}x{}, F has {m} rows",
            phi.nrows(),
            phi.ncols()
        )));
    }
    let mut gap = 0.0;
    for w in &beams.w {
        if w.len() != bs_ris.ncols() {
            return Err(Error::Dimension(format!(
                "beamformer length {} vs {} antennas",
                w.len(),
                bs_ris.ncols()
            )));
        }
        let incident = bs_ris * w;
        let reflected = phi * &incident;
        gap += reflected.norm_squared() - incident.norm_squared();
    }
    Ok(gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConstraintKind {
    UnitModulus { element: usize },
    OffDiagonal,
    Symmetry,
    Passivity,
    Dimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintKind,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub passivity_gap: f64,
    pub violations: Vec<Violation>,
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible {
            return write!(f, "feasible (passivity gap {:.3e})", self.passivity_gap);
        }
        write!(f, "infeasible:")?;
        for v in &self.violations {
            write!(f, " {:?}={:.3e}", v.constraint, v.magnitude)?;
        }
        Ok(())
    }
}

/// Checks `state` against its architecture's constraint list; always
/// recomputes the passivity gap for the given beamformers.
pub fn is_feasible(state: &RisState, bs_ris: &CMatrix, beams: &BeamformerSet, tol: f64) -> FeasibilityReport {
    let phi = &state.phi;
    let mut violations = Vec::new();
    let gap = match passivity_gap(phi, bs_ris, beams) {
        Ok(g) => g,
        Err(_) => {
            return FeasibilityReport {
                feasible: false,
                passivity_gap: f64::NAN,
                violations: vec![Violation {
                    constraint: ConstraintKind::Dimension,
                    magnitude: f64::INFINITY,
                }],
            }
        }
    };
    let diagonal = |violations: &mut Vec<Violation>| {
        let off = off_diagonal_max(phi);
        if off > 0.0 {
            violations.push(Violation {
                constraint: ConstraintKind::OffDiagonal,
                magnitude: off,
            });
        }
    };
    let passive = |violations: &mut Vec<Violation>| {
        if gap > tol {
            violations.push(Violation {
                constraint: ConstraintKind::Passivity,
                magnitude: gap,
            });
        }
    };
    match state.architecture {
        Architecture::LpDiagonal | Architecture::Random => {
            diagonal(&mut violations);
            for m in 0..phi.nrows() {
                let dev = (phi[(m, m)].norm() - 1.0).abs();
                if dev > tol {
                    violations.push(Violation {
                        constraint: ConstraintKind::UnitModulus { element: m },
                        magnitude: dev,
                    });
                }
            }
        }
        Architecture::GpDiagonal => {
            diagonal(&mut violations);
            passive(&mut violations);
        }
        Architecture::GpBeyondDiagonal => {
            let asym = asymmetry(phi);
            if asym > tol {
                violations.push(Violation {
                    constraint: ConstraintKind::Symmetry,
                    magnitude: asym,
                });
            }
            passive(&mut violations);
        }
        Architecture::None => {}
    }
    FeasibilityReport {
        feasible: violations.is_empty(),
        passivity_gap: gap,
        violations,
    }
}

/// Unit-modulus diagonal with iid uniform phases; feasible for every architecture.
pub fn random_phi<R: Rng + ?Sized>(architecture: Architecture, m: usize, rng: &mut R) -> Result<RisState> {
    if m == 0 {
        return Err(Error::invalid("num_ris_elements", "must be at least 1"));
    }
    let mut phi = CMatrix::zeros(m, m);
    for i in 0..m {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        phi[(i, i)] = C64::from_polar(1.0, theta);
    }
    Ok(RisState {
        phi,
        architecture,
        // ΦᴴΦ = I exactly in exact arithmetic
        passivity_gap: 0.0,
        feasibility_tol: DEFAULT_FEASIBILITY_TOL,
    })
}
