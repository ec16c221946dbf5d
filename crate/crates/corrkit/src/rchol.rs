//! Recursive time-update of modified Cholesky factors.
//!
//! [`RcholState`] carries the unnormalized factor block columns `A_k(n)` and
//! pivot blocks `D_k(n)` of the correlation matrix at time `n`. One call to
//! [`rchol_update`] produces the state at `n` from the state at `n−1` plus a
//! single [`FirstColumnObservation`] — the new first block column and the
//! zero-lag block of the one-step-delayed signal. No full `NM × NM` matrix
//! is ever assembled and no `N` inner products are recomputed: column 1 is
//! rebuilt from the observation, column 2 is obtained by one reflection-
//! coefficient step, and every later column is the block-down-shifted copy
//! of its predecessor from the previous instant.

use crate::linalg::{
    hermitian_check, pinv_from_ldl, solve_right, CMatrix, LdlFactors, LinalgError, Lu, Result,
};
use crate::schur::{columns_to_factors, schur_columns, ToeplitzSpec};

const SINGULAR_TOL: f64 = 1e-12;

/// Per-instant correlation data consumed by the recursion: the `N` blocks
/// `r^n_{00}..r^n_{(N−1)0}` of the first block column plus `r^n_{11}`, the
/// zero-lag correlation of the one-step-delayed signal.
#[derive(Clone, Debug)]
pub struct FirstColumnObservation {
    time: usize,
    blocks: Vec<CMatrix>,
    tilde_d: CMatrix,
}

impl FirstColumnObservation {
    pub fn new(
        time: usize,
        blocks: Vec<CMatrix>,
        tilde_d: CMatrix,
    ) -> Result<FirstColumnObservation> {
        if blocks.is_empty() {
            return Err(LinalgError::Dimension(
                "observation needs at least one block".into(),
            ));
        }
        let m = blocks[0].rows();
        for (i, b) in blocks.iter().enumerate() {
            if b.rows() != m || b.cols() != m {
                return Err(LinalgError::Dimension(format!(
                    "observation block {} is {}x{}, expected {}x{}",
                    i,
                    b.rows(),
                    b.cols(),
                    m,
                    m
                )));
            }
        }
        if tilde_d.rows() != m || tilde_d.cols() != m {
            return Err(LinalgError::Dimension(format!(
                "tilde_d is {}x{}, expected {}x{}",
                tilde_d.rows(),
                tilde_d.cols(),
                m,
                m
            )));
        }
        if !hermitian_check(&blocks[0], 1e-10)? || !hermitian_check(&tilde_d, 1e-10)? {
            return Err(LinalgError::NotHermitian { tol: 1e-10 });
        }
        Ok(FirstColumnObservation {
            time,
            blocks,
            tilde_d,
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn tilde_d(&self) -> &CMatrix {
        &self.tilde_d
    }

    fn stacked(&self, n: usize, m: usize) -> CMatrix {
        let mut col = CMatrix::zeros(n * m, m);
        for (i, b) in self.blocks.iter().enumerate() {
            col.set_block(i, 0, b);
        }
        col
    }
}

/// Factor state at one time instant, plus the previous-instant buffers the
/// recursion consumes.
#[derive(Clone, Debug)]
pub struct RcholState {
    m: usize,
    n: usize,
    time: usize,
    a: Vec<CMatrix>,
    d: Vec<CMatrix>,
}

impl RcholState {
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn block_size(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[CMatrix] {
        &self.a
    }

    pub fn pivots(&self) -> &[CMatrix] {
        &self.d
    }

    /// Largest componentwise difference between the factor data of two states.
    pub fn max_abs_diff(&self, other: &RcholState) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.a.iter().zip(other.a.iter()) {
            worst = worst.max(a.max_abs_diff(b));
        }
        for (a, b) in self.d.iter().zip(other.d.iter()) {
            worst = worst.max(a.max_abs_diff(b));
        }
        worst
    }
}

/// Seed the recursion from the first observation. Column 1 comes straight
/// from the data; columns `2..N` are obtained by running the Schur recursion
/// on the observation treated as stationary, which makes the update
/// well-posed from the very first instant.
pub fn rchol_init(obs: &FirstColumnObservation, m: usize, n: usize) -> Result<RcholState> {
    if obs.blocks.len() != n || obs.blocks[0].rows() != m {
        return Err(LinalgError::Dimension(format!(
            "observation carries {} blocks of size {}, expected {} of size {}",
            obs.blocks.len(),
            obs.blocks[0].rows(),
            n,
            m
        )));
    }
    let spec = ToeplitzSpec::new(obs.blocks.clone())?;
    let (a, d) = schur_columns(&spec)?;
    Ok(RcholState {
        m,
        n,
        time: obs.time,
        a,
        d,
    })
}

/// One time step: state at `n−1` plus the observation at `n` gives the state
/// at `n`.
pub fn rchol_update(state: &RcholState, obs: &FirstColumnObservation) -> Result<RcholState> {
    if obs.time != state.time + 1 {
        return Err(LinalgError::Range(format!(
            "observation is for time {}, state is at time {}",
            obs.time, state.time
        )));
    }
    if obs.blocks.len() != state.n || obs.blocks[0].rows() != state.m {
        return Err(LinalgError::Dimension(
            "observation dimensions do not match state".into(),
        ));
    }
    let (m, n) = (state.m, state.n);

    let mut a = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);

    // column 1 rebuilt directly from the observation
    a.push(obs.stacked(n, m));
    d.push(obs.blocks[0].clone());

    if n > 1 {
        // previous first pivot r^{n−1}_{00} and the delayed zero-lag block
        let p_prev = &state.d[0];
        if Lu::factor(p_prev).is_singular(SINGULAR_TOL) {
            return Err(LinalgError::SingularPivot(
                "first pivot at the previous instant".into(),
            ));
        }
        if Lu::factor(&obs.tilde_d).is_singular(SINGULAR_TOL) {
            return Err(LinalgError::SingularPivot("delayed zero-lag block".into()));
        }

        // k_ref(n) = r^n_{10}·(r^{n−1}_{00})⁻¹
        let k_block = &obs.blocks[1];
        let k_ref = solve_right(k_block, p_prev, SINGULAR_TOL).ok_or_else(|| {
            LinalgError::SingularPivot("first pivot at the previous instant".into())
        })?;
        // k̃_ref(n) = k_ref(n)ᴴ · D₁(n−1) · D̃₁(n)⁻¹
        let k_tilde = solve_right(&k_ref.conj_t().mul(p_prev), &obs.tilde_d, SINGULAR_TOL)
            .ok_or_else(|| LinalgError::SingularPivot("delayed zero-lag block".into()))?;

        // Ã₁(n): the new first column with its top block zeroed
        let mut tilde_a1 = a[0].clone();
        tilde_a1.set_block(0, 0, &CMatrix::zeros(m, m));

        // column 2: A₂(n) = Z_M·A₁(n−1) − Ã₁(n)·k̃_ref(n)
        let a2 = state.a[0].shift_down_blocks(m).sub(&tilde_a1.mul(&k_tilde));
        // D₂(n) is the pivot block of A₂(n): r^{n−1}_{00} − r^n_{10}·k̃_ref(n)
        let d2 = a2.block(1, 0, m);
        a.push(a2);
        d.push(d2);
    }

    // columns k > 2: block-down-shifted copies from the previous instant
    for k in 2..n {
        a.push(state.a[k - 1].shift_down_blocks(m));
        d.push(state.d[k - 1].clone());
    }

    Ok(RcholState {
        m,
        n,
        time: obs.time,
        a,
        d,
    })
}

/// LDLᴴ view of the state: `L` block column `k` is `A_k·D_k⁻¹` (unit diagonal
/// blocks by construction, since block `k−1` of `A_k` equals `D_k`).
pub fn factors_of(state: &RcholState) -> Result<LdlFactors> {
    columns_to_factors(&state.a, &state.d, state.m)
}

/// Pseudo-inverse of the tracked correlation matrix, straight from the
/// factors.
pub fn rchol_pinv(state: &RcholState) -> Result<CMatrix> {
    pinv_from_ldl(&factors_of(state)?)
}
