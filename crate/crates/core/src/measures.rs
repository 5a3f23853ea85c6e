//! Entanglement criteria: negativity, realignment (CCNR) score and the PPT
//! test.
//!
//! A positive negativity certifies NPT entanglement. A positive CCNR score
//! certifies entanglement, including PPT (bound) entanglement. A state that is
//! PPT with a nonpositive score is reported as undetected, never as separable.

use std::fmt;

use crate::error::Result;
use crate::linalg::{hermitian_eigenvalues, trace_norm, HERMITIAN_TOL};
use crate::states::{partial_transpose, realign, DensityMatrix, Subsystem};

/// Zero threshold for partial-transpose eigenvalues.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Ascending eigenvalues of the partial transpose on subsystem B.
pub fn pt_eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues(&partial_transpose(rho, Subsystem::B), HERMITIAN_TOL)
}

fn negativity_from(eigs: &[f64], tol: f64) -> f64 {
    eigs.iter().filter(|&&l| l < -tol).map(|l| -l).sum()
}

/// Sum of `|λ|` over partial-transpose eigenvalues `λ < -tol`.
pub fn negativity(rho: &DensityMatrix, tol: f64) -> Result<f64> {
    Ok(negativity_from(&pt_eigenvalues(rho)?, tol))
}

/// `‖ρ^R‖_1 - 1`. Positive values certify entanglement.
pub fn ccnr_score(rho: &DensityMatrix) -> Result<f64> {
    Ok(trace_norm(&realign(rho))? - 1.0)
}

/// True iff the smallest partial-transpose eigenvalue is `>= -tol`.
pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(pt_eigenvalues(rho)?[0] >= -tol)
}

/// What the two criteria say about a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Negative partial transpose.
    Npt,
    /// PPT but detected by realignment: bound entangled.
    PptEntangled,
    /// PPT and not detected by realignment. Entanglement is undecided.
    Undetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Npt => "NPT",
            Verdict::PptEntangled => "PPT_ENTANGLED",
            Verdict::Undetected => "UNDETECTED",
        })
    }
}

/// Both criteria evaluated on one state, from a single eigendecomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct CriteriaSample {
    pub negativity: f64,
    pub ccnr_score: f64,
    pub pt_min_eigenvalue: f64,
    /// Eigenvalues below `-tol`, ascending.
    pub pt_negative_eigenvalues: Vec<f64>,
    /// All nine partial-transpose eigenvalues, ascending.
    pub pt_eigenvalues: Vec<f64>,
}

impl CriteriaSample {
    pub fn is_ppt(&self) -> bool {
        self.pt_negative_eigenvalues.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        if !self.is_ppt() {
            Verdict::Npt
        } else if self.ccnr_score > 0.0 {
            Verdict::PptEntangled
        } else {
            Verdict::Undetected
        }
    }
}

pub fn criteria_sample(rho: &DensityMatrix, tol: f64) -> Result<CriteriaSample> {
    let eigs = pt_eigenvalues(rho)?;
    let negative: Vec<f64> = eigs.iter().copied().filter(|&l| l < -tol).collect();
    Ok(CriteriaSample {
        negativity: negativity_from(&eigs, tol),
        ccnr_score: ccnr_score(rho)?,
        pt_min_eigenvalue: eigs[0],
        pt_negative_eigenvalues: negative,
        pt_eigenvalues: eigs,
    })
}
