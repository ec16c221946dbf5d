//! Elementwise comparison metrics between a reference matrix and a
//! reconstruction: worst difference, worst guarded ratio and relative
//! Frobenius error.

use crate::linalg::{CMatrix, LinalgError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport {
    pub max_abs_diff: f64,
    pub max_ratio: f64,
    pub frob_rel_err: f64,
    /// Entries excluded from the ratio because the estimate was below the
    /// guard threshold.
    pub n_guarded: usize,
}

/// Compare `estimate` against `reference` entry by entry.
///
/// The raw elementwise ratio `|ref|/|est|` explodes on near-zero
/// denominators, so entries with `|est_ij| ≤ guard·max|ref_ij|` are excluded
/// from the ratio and counted instead; set the guard to a machine-tiny value
/// to observe the raw behavior.
pub fn compare(reference: &CMatrix, estimate: &CMatrix, guard: f64) -> Result<ComparisonReport> {
    if reference.rows() != estimate.rows() || reference.cols() != estimate.cols() {
        return Err(LinalgError::Dimension(format!(
            "compare: {}x{} vs {}x{}",
            reference.rows(),
            reference.cols(),
            estimate.rows(),
            estimate.cols()
        )));
    }
    if guard <= 0.0 {
        return Err(LinalgError::Range(format!(
            "guard must be positive, got {guard}"
        )));
    }
    let ref_max = reference.max_abs();
    let threshold = guard * ref_max;
    let mut max_abs_diff: f64 = 0.0;
    let mut max_ratio: f64 = 0.0;
    let mut n_guarded = 0usize;
    let mut diff_sq = 0.0;
    let mut ref_sq = 0.0;
    for i in 0..reference.rows() {
        for j in 0..reference.cols() {
            let r = reference[(i, j)];
            let e = estimate[(i, j)];
            let d = (r - e).norm();
            max_abs_diff = max_abs_diff.max(d);
            diff_sq += d * d;
            ref_sq += r.norm_sqr();
            if e.norm() > threshold {
                max_ratio = max_ratio.max(r.norm() / e.norm());
            } else {
                n_guarded += 1;
            }
        }
    }
    let frob_rel_err = if ref_sq == 0.0 {
        0.0
    } else {
        (diff_sq / ref_sq).sqrt()
    };
    Ok(ComparisonReport {
        max_abs_diff,
        max_ratio,
        frob_rel_err,
        n_guarded,
    })
}
