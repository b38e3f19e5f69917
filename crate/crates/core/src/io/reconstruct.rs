//! Recovers value systems from published scores by non-negative least squares.

use super::nnls::{dependent_columns, nnls};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{EvidenceMatrix, Roster, WeightMatrix, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Fitted weights rescaled to sum to 1.
    pub weights: WeightVector,
    /// Weight sum before rescaling; close to 1 when the scores really came
    /// from a normalized value system.
    pub raw_sum: f64,
    /// `evidence · weights − observed` using the rescaled weights.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Fits `w ≥ 0` in `evidence · w ≈ observed`.
pub fn reconstruct_weights(evidence: &EvidenceMatrix, observed: &[f64]) -> Result<Reconstruction> {
    let a = evidence.values();
    let (m, n) = a.shape();
    if observed.len() != m {
        return Err(Error::Shape {
            op: "reconstruct_weights",
            left: (m, n),
            right: (observed.len(), 1),
        });
    }
    if m < n {
        return Err(Error::Invalid(format!(
            "need at least as many persons ({m}) as categories ({n})"
        )));
    }
    let dep = dependent_columns(a);
    if !dep.is_empty() {
        return Err(Error::RankDeficient {
            columns: dep
                .iter()
                .map(|&j| evidence.categories().names()[j].clone())
                .collect(),
        });
    }
    let raw = nnls(a, observed);
    let raw_sum: f64 = raw.iter().sum();
    if raw_sum <= 0.0 {
        return Err(Error::InvalidWeights {
            context: "reconstruction".into(),
            reason: "fitted weights are all zero".into(),
        });
    }
    let weights = WeightVector::with_tolerance(
        evidence.categories().clone(),
        raw.iter().map(|w| w / raw_sum).collect(),
        1e-9,
        "reconstruction",
    )?;
    let residuals: Vec<f64> = a
        .row_iter()
        .zip(observed)
        .map(|(row, o)| row.iter().zip(weights.weights()).map(|(e, w)| e * w).sum::<f64>() - o)
        .collect();
    let max_residual = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(Reconstruction {
        weights,
        raw_sum,
        residuals,
        max_residual,
    })
}

/// One fit per assessor row of a raw self-assessment matrix.
pub fn reconstruct_personnel(
    evidence: &EvidenceMatrix,
    assessors: &Roster,
    raw_assessments: &Matrix,
) -> Result<(WeightMatrix, Vec<Reconstruction>)> {
    if raw_assessments.shape() != (assessors.len(), evidence.roster().len()) {
        return Err(Error::Shape {
            op: "reconstruct_personnel",
            left: (assessors.len(), evidence.roster().len()),
            right: raw_assessments.shape(),
        });
    }
    let fits = raw_assessments
        .row_iter()
        .map(|row| reconstruct_weights(evidence, row))
        .collect::<Result<Vec<_>>>()?;
    let wm = WeightMatrix::from_vectors(
        assessors.clone(),
        &fits.iter().map(|f| f.weights.clone()).collect::<Vec<_>>(),
    )?;
    Ok((wm, fits))
}
