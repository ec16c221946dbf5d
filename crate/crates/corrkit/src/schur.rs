//! Generator-based Schur recursion for Hermitian positive-definite
//! block-Toeplitz matrices.
//!
//! The factor columns are produced one per recursion step from the first
//! block column alone; no other block of the full matrix is ever formed.
//! The recursion is the unnormalized proper-form variant: forward and
//! backward generator block columns `F`, `B` with Hermitian pivot energies
//! `P`, `Q`, updated per step by
//!
//! ```text
//! F' = Z_M·F − B·Q⁻¹·Kᴴ      P' = P − K·Q⁻¹·Kᴴ
//! B' = B − Z_M·F·P⁻¹·K       Q' = Q − Kᴴ·P⁻¹·K
//! ```
//!
//! where `K` is the block where the shifted forward and the backward
//! generator collide. Column `k` of the factor is read off the updated
//! forward generator; `D_k = P'` is its top block.

use crate::linalg::{hermitian_check, solve_right, CMatrix, LdlFactors, LinalgError, Lu, Result};

const PD_TOL: f64 = 1e-12;

/// First block column of a Hermitian block-Toeplitz matrix: blocks
/// `r₀..r_{N−1}`, each `M×M`, with block `(i,j)` of the implied matrix equal
/// to `r_{i−j}` and `r_{−m} = r_mᴴ`.
#[derive(Clone, Debug)]
pub struct ToeplitzSpec {
    m: usize,
    n: usize,
    first_col: Vec<CMatrix>,
}

impl ToeplitzSpec {
    pub fn new(first_col: Vec<CMatrix>) -> Result<ToeplitzSpec> {
        let n = first_col.len();
        if n == 0 {
            return Err(LinalgError::Dimension(
                "ToeplitzSpec needs at least one block".into(),
            ));
        }
        let m = first_col[0].rows();
        for (i, b) in first_col.iter().enumerate() {
            if b.rows() != m || b.cols() != m {
                return Err(LinalgError::Dimension(format!(
                    "block {} is {}x{}, expected {}x{}",
                    i,
                    b.rows(),
                    b.cols(),
                    m,
                    m
                )));
            }
        }
        if !hermitian_check(&first_col[0], 1e-12)? {
            return Err(LinalgError::NotHermitian { tol: 1e-12 });
        }
        Ok(ToeplitzSpec { m, n, first_col })
    }

    pub fn block_size(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn first_col(&self) -> &[CMatrix] {
        &self.first_col
    }
}

/// Lay out the full `NM × NM` matrix implied by the spec. Exact placement,
/// no arithmetic.
pub fn assemble_block_toeplitz(spec: &ToeplitzSpec) -> CMatrix {
    let (m, n) = (spec.m, spec.n);
    let mut r = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            if i >= j {
                let b = &spec.first_col[i - j];
                r.set_block(i, j, b);
            } else {
                let b = spec.first_col[j - i].conj_t();
                r.set_block(i, j, &b);
            }
        }
    }
    r
}

/// Unnormalized factor columns: `A_k` is the `NM×M` block column with top
/// block `D_k`; `L` column `k` is `A_k·D_k⁻¹`.
pub(crate) fn schur_columns(spec: &ToeplitzSpec) -> Result<(Vec<CMatrix>, Vec<CMatrix>)> {
    let (m, n) = (spec.m, spec.n);
    let nm = n * m;

    let mut fwd = CMatrix::zeros(nm, m);
    for (i, b) in spec.first_col.iter().enumerate() {
        fwd.set_block(i, 0, b);
    }
    let mut bwd = fwd.clone();
    bwd.set_block(0, 0, &CMatrix::zeros(m, m));

    let mut p = spec.first_col[0].clone();
    let mut q = p.clone();

    let mut a_cols = Vec::with_capacity(n);
    let mut d_blocks = Vec::with_capacity(n);
    check_step_pivot(&p, 0)?;
    a_cols.push(fwd.clone());
    d_blocks.push(p.clone());

    for k in 1..n {
        let shifted = fwd.shift_down_blocks(m);
        let collide = bwd.block(k, 0, m);

        // Q⁻¹·Kᴴ and P⁻¹·K via small pivoted solves
        let q_lu = Lu::factor(&q);
        if q_lu.is_singular(PD_TOL) {
            return Err(LinalgError::NotPositiveDefinite { column: k });
        }
        let q_inv_kh = q_lu.solve(&collide.conj_t());
        let p_lu = Lu::factor(&p);
        if p_lu.is_singular(PD_TOL) {
            return Err(LinalgError::NotPositiveDefinite { column: k });
        }
        let p_inv_k = p_lu.solve(&collide);

        let new_fwd = shifted.sub(&bwd.mul(&q_inv_kh));
        let mut new_bwd = bwd.sub(&shifted.mul(&p_inv_k));
        // the colliding block is eliminated exactly
        new_bwd.set_block(k, 0, &CMatrix::zeros(m, m));

        p = p.sub(&collide.mul(&q_inv_kh));
        q = q.sub(&collide.conj_t().mul(&p_inv_k));
        check_step_pivot(&p, k)?;

        fwd = new_fwd;
        bwd = new_bwd;
        a_cols.push(fwd.clone());
        d_blocks.push(p.clone());
    }
    Ok((a_cols, d_blocks))
}

// A PD input keeps every step pivot Hermitian positive definite; anything
// else is reported as a non-PD failure at that step.
fn check_step_pivot(p: &CMatrix, step: usize) -> Result<()> {
    if !hermitian_check(p, 1e-8 * p.max_abs().max(1e-300))? {
        return Err(LinalgError::NotPositiveDefinite { column: step });
    }
    // tiny in-place Cholesky probe
    let m = p.rows();
    let mut a = p.clone();
    for k in 0..m {
        for j in 0..k {
            let f = a[(k, j)].conj();
            for i in k..m {
                let t = a[(i, j)] * f;
                a[(i, k)] -= t;
            }
        }
        let piv = a[(k, k)].re;
        if piv <= 0.0 || !piv.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { column: step });
        }
        let s = piv.sqrt();
        for i in k..m {
            a[(i, k)] /= s;
        }
    }
    Ok(())
}

/// Block-LDLᴴ factors of the implied block-Toeplitz matrix, computed from
/// the first block column only.
pub fn schur_decompose(spec: &ToeplitzSpec) -> Result<LdlFactors> {
    let (a_cols, d_blocks) = schur_columns(spec)?;
    columns_to_factors(&a_cols, &d_blocks, spec.m)
}

/// Assemble `L` from unnormalized columns (`L` col `k` = `A_k·D_k⁻¹`) and
/// symmetrize the `D` blocks.
pub(crate) fn columns_to_factors(
    a_cols: &[CMatrix],
    d_blocks: &[CMatrix],
    m: usize,
) -> Result<LdlFactors> {
    let n = a_cols.len();
    let nm = n * m;
    let mut l = CMatrix::zeros(nm, nm);
    for k in 0..n {
        let col = solve_right(&a_cols[k], &d_blocks[k], 1e-14)
            .ok_or(LinalgError::SingularFactor { block: k })?;
        for i in 0..nm {
            for j in 0..m {
                l[(i, k * m + j)] = col[(i, j)];
            }
        }
        // unit diagonal block and exact zeros above it
        l.set_block(k, k, &CMatrix::identity(m));
        for bi in 0..k {
            l.set_block(bi, k, &CMatrix::zeros(m, m));
        }
    }
    let d = d_blocks.iter().map(|dk| dk.hermitian_part()).collect();
    Ok(LdlFactors::from_parts_unchecked(l, d, m))
}
