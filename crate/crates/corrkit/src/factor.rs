//! Direct factorizations of an explicitly known correlation matrix.
//!
//! * [`cholesky_gaxpy`] — column-oriented `R = L·Lᴴ`; needs square roots and
//!   positive definiteness.
//! * [`ldl_decompose`] — square-root-free `R = L·D·Lᴴ`; tolerates indefinite
//!   input as long as every leading principal minor is nonzero (`D` may then
//!   carry negative entries).
//! * [`block_ldl_decompose`] — block generalization with `M×M` pivot blocks,
//!   the oracle the structured algorithms are checked against.

use num_complex::Complex64 as C64;

use crate::linalg::{hermitian_check, CMatrix, LdlFactors, LinalgError, Lu, Result};
use crate::ops;

const HERMITIAN_TOL: f64 = 1e-10;
// Relative to the largest initial diagonal magnitude; correlation matrices
// from the simulator vary in scale with SNR.
const PIVOT_TOL: f64 = 1e-13;

/// Lower-triangular Cholesky factor with strictly positive real diagonal.
#[derive(Clone, Debug)]
pub struct CholFactor {
    l: CMatrix,
}

impl CholFactor {
    pub fn l(&self) -> &CMatrix {
        &self.l
    }
}

fn max_diagonal_abs(r: &CMatrix) -> f64 {
    (0..r.rows()).map(|i| r[(i, i)].norm()).fold(0.0, f64::max)
}

/// Column-oriented (gaxpy) Cholesky decomposition `R = L·Lᴴ`.
///
/// Column 1 is scaled by `sqrt(R₁₁)`, then each column `k` receives the
/// outer-product correction from columns `1..k−1` before being scaled by the
/// square root of its diagonal.
pub fn cholesky_gaxpy(r: &CMatrix) -> Result<CholFactor> {
    if !hermitian_check(r, HERMITIAN_TOL)? {
        return Err(LinalgError::NotHermitian { tol: HERMITIAN_TOL });
    }
    let n = r.rows();
    let pivot_floor = PIVOT_TOL * max_diagonal_abs(r);
    let mut a = r.clone();
    for k in 0..n {
        if k > 0 {
            // [R]_{k:N,k} -= [R]_{k:N,1:k-1} · [R]ᴴ_{k,1:k-1}
            for j in 0..k {
                let f = a[(k, j)].conj();
                for i in k..n {
                    let t = a[(i, j)] * f;
                    a[(i, k)] -= t;
                }
            }
            ops::record_multiplies((k * (n - k)) as u64);
        }
        let pivot = a[(k, k)].re;
        if pivot <= pivot_floor {
            return Err(LinalgError::NotPositiveDefinite { column: k });
        }
        let s = pivot.sqrt();
        a[(k, k)] = C64::new(s, 0.0);
        for i in (k + 1)..n {
            a[(i, k)] /= s;
        }
    }
    // L = tril(R)
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            l[(i, j)] = a[(i, j)];
        }
    }
    Ok(CholFactor { l })
}

/// Square-root-free modified Cholesky `R = L·D·Lᴴ`, scalar pivots.
///
/// Positive definiteness is not required; a zero pivot (vanishing leading
/// principal minor) is an error.
pub fn ldl_decompose(r: &CMatrix) -> Result<LdlFactors> {
    if !hermitian_check(r, HERMITIAN_TOL)? {
        return Err(LinalgError::NotHermitian { tol: HERMITIAN_TOL });
    }
    let n = r.rows();
    let pivot_floor = PIVOT_TOL * max_diagonal_abs(r);
    let mut l = CMatrix::identity(n);
    let mut d = vec![C64::new(0.0, 0.0); n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        // scratch v_i = D_ii · conj(L_ki) for i < k
        for i in 0..k {
            v[i] = d[i] * l[(k, i)].conj();
        }
        let mut pivot = r[(k, k)];
        for i in 0..k {
            pivot -= l[(k, i)] * v[i];
        }
        ops::record_multiplies(2 * k as u64);
        if pivot.norm() <= pivot_floor {
            return Err(LinalgError::ZeroPivot { index: k });
        }
        d[k] = pivot;
        for i in (k + 1)..n {
            let mut s = r[(i, k)];
            for j in 0..k {
                s -= l[(i, j)] * v[j];
            }
            l[(i, k)] = s / pivot;
        }
        ops::record_multiplies(((n - k - 1) * (k + 1)) as u64);
    }
    let d_blocks = d
        .into_iter()
        .map(|dk| {
            // pivots of a Hermitian LDL are real
            CMatrix::from_rows(&[vec![C64::new(dk.re, 0.0)]])
        })
        .collect();
    Ok(LdlFactors::from_parts_unchecked(l, d_blocks, 1))
}

/// Block LDLᴴ with `M×M` pivot blocks; `M = 1` reduces to [`ldl_decompose`].
pub fn block_ldl_decompose(r: &CMatrix, m: usize) -> Result<LdlFactors> {
    if m == 0 || !r.rows().is_multiple_of(m) {
        return Err(LinalgError::Dimension(format!(
            "block size {} does not divide dimension {}",
            m,
            r.rows()
        )));
    }
    if !hermitian_check(r, HERMITIAN_TOL)? {
        return Err(LinalgError::NotHermitian { tol: HERMITIAN_TOL });
    }
    let nb = r.rows() / m;
    let pivot_floor = PIVOT_TOL * max_diagonal_abs(r);
    let mut l = CMatrix::identity(r.rows());
    let mut d: Vec<CMatrix> = Vec::with_capacity(nb);
    for k in 0..nb {
        // D_k = R_kk − Σ_{j<k} L_kj · (D_j · L_kjᴴ)
        let mut dk = r.block(k, k, m);
        for (j, dj) in d.iter().enumerate() {
            let lkj = l.block(k, j, m);
            let t = dj.mul(&lkj.conj_t());
            dk = dk.sub(&lkj.mul(&t));
        }
        let lu = Lu::factor(&dk);
        if lu.is_singular(PIVOT_TOL) || dk.max_abs() <= pivot_floor {
            return Err(LinalgError::ZeroPivot { index: k });
        }
        for i in (k + 1)..nb {
            let mut s = r.block(i, k, m);
            for (j, dj) in d.iter().enumerate() {
                let lij = l.block(i, j, m);
                let lkj = l.block(k, j, m);
                let t = dj.mul(&lkj.conj_t());
                s = s.sub(&lij.mul(&t));
            }
            // L_ik = S · D_k⁻¹   ⇔   D_kᵀ · L_ikᵀ = Sᵀ
            let lik = crate::linalg::solve_right(&s, &dk, 0.0)
                .ok_or(LinalgError::ZeroPivot { index: k })?;
            l.set_block(i, k, &lik);
        }
        d.push(dk.hermitian_part());
    }
    Ok(LdlFactors::from_parts_unchecked(l, d, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::reconstruct;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian_pd(n: usize, rng: &mut StdRng) -> CMatrix {
        // AᴴA + n·I is comfortably positive definite
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let mut r = a.conj_t().mul(&a);
        for i in 0..n {
            r[(i, i)] += c(n as f64, 0.0);
        }
        r.hermitian_part()
    }

    #[test]
    fn gaxpy_identity() {
        let f = cholesky_gaxpy(&CMatrix::identity(4)).unwrap();
        assert!(f.l().max_abs_diff(&CMatrix::identity(4)) == 0.0);
    }

    #[test]
    fn gaxpy_hand_real() {
        let r = CMatrix::from_real_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let f = cholesky_gaxpy(&r).unwrap();
        let expect = CMatrix::from_real_rows(&[vec![2.0, 0.0], vec![1.0, 2f64.sqrt()]]);
        assert!(f.l().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn gaxpy_hand_complex() {
        let r = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let f = cholesky_gaxpy(&r).unwrap();
        let expect = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, -1.0), c(1.0, 0.0)],
        ]);
        assert!(f.l().max_abs_diff(&expect) < 1e-15);
        assert!(f.l().mul(&f.l().conj_t()).max_abs_diff(&r) < 1e-15);
    }

    #[test]
    fn gaxpy_rejects_indefinite() {
        let r = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(
            cholesky_gaxpy(&r),
            Err(LinalgError::NotPositiveDefinite { column: 1 })
        ));
    }

    #[test]
    fn gaxpy_rejects_non_hermitian() {
        let r = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(matches!(
            cholesky_gaxpy(&r),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn ldl_identity() {
        let f = ldl_decompose(&CMatrix::identity(5)).unwrap();
        assert!(f.l().max_abs_diff(&CMatrix::identity(5)) == 0.0);
        for dk in f.d() {
            assert_eq!(dk[(0, 0)], c(1.0, 0.0));
        }
    }

    #[test]
    fn ldl_hand_pd() {
        let r = CMatrix::from_real_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let f = ldl_decompose(&r).unwrap();
        assert!((f.l()[(1, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(f.d()[0][(0, 0)], c(4.0, 0.0));
        assert_eq!(f.d()[1][(0, 0)], c(2.0, 0.0));
    }

    #[test]
    fn ldl_hand_indefinite() {
        let r = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        let f = ldl_decompose(&r).unwrap();
        assert!((f.l()[(1, 0)] - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(f.d()[0][(0, 0)], c(1.0, 0.0));
        assert_eq!(f.d()[1][(0, 0)], c(-3.0, 0.0));
    }

    #[test]
    fn ldl_zero_pivot_errors() {
        let r = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(
            ldl_decompose(&r),
            Err(LinalgError::ZeroPivot { index: 0 })
        ));
    }

    #[test]
    fn block_ldl_m1_matches_scalar() {
        let mut rng = StdRng::seed_from_u64(7);
        let r = random_hermitian_pd(6, &mut rng);
        let scalar = ldl_decompose(&r).unwrap();
        let block = block_ldl_decompose(&r, 1).unwrap();
        assert!(scalar.l().max_abs_diff(block.l()) <= 1e-14);
        for (a, b) in scalar.d().iter().zip(block.d().iter()) {
            assert!(a.max_abs_diff(b) <= 1e-14);
        }
    }

    #[test]
    fn block_ldl_identity() {
        let f = block_ldl_decompose(&CMatrix::identity(6), 2).unwrap();
        assert!(f.l().max_abs_diff(&CMatrix::identity(6)) == 0.0);
        assert_eq!(f.depth(), 3);
        for dk in f.d() {
            assert!(dk.max_abs_diff(&CMatrix::identity(2)) == 0.0);
        }
    }

    #[test]
    fn block_ldl_round_trip() {
        let mut rng = StdRng::seed_from_u64(21);
        let r = random_hermitian_pd(8, &mut rng);
        let f = block_ldl_decompose(&r, 2).unwrap();
        let back = reconstruct(&f);
        assert!(back.sub(&r).frob_norm() / r.frob_norm() <= 1e-10);
    }

    #[test]
    fn gaxpy_agrees_with_ldl_times_sqrt_d() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let r = random_hermitian_pd(9, &mut rng);
            let lchol = cholesky_gaxpy(&r).unwrap();
            let f = ldl_decompose(&r).unwrap();
            let n = r.rows();
            let mut scaled = f.l().clone();
            for j in 0..n {
                let s = f.d()[j][(0, 0)].re.sqrt();
                for i in 0..n {
                    scaled[(i, j)] *= c(s, 0.0);
                }
            }
            assert!(lchol.l().max_abs_diff(&scaled) < 1e-9);
        }
    }

    // determinant by cofactor expansion, independent of any factorization
    fn det_cofactor(a: &CMatrix) -> Complex64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        let mut det = c(0.0, 0.0);
        let mut sign = 1.0;
        for j in 0..n {
            let mut minor = CMatrix::zeros(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for jj in 0..n {
                    if jj == j {
                        continue;
                    }
                    minor[(i - 1, cc)] = a[(i, jj)];
                    cc += 1;
                }
            }
            det += a[(0, j)] * det_cofactor(&minor) * c(sign, 0.0);
            sign = -sign;
        }
        det
    }

    #[test]
    fn ldl_determinant_identity() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let r = random_hermitian_pd(6, &mut rng);
            let f = ldl_decompose(&r).unwrap();
            let mut prod = c(1.0, 0.0);
            for dk in f.d() {
                prod *= dk[(0, 0)];
            }
            let det = det_cofactor(&r);
            assert!((prod - det).norm() / det.norm() <= 1e-8);
        }
    }

    #[test]
    fn ldl_is_deterministic() {
        let mut rng = StdRng::seed_from_u64(5);
        let r = random_hermitian_pd(10, &mut rng);
        let f1 = ldl_decompose(&r).unwrap();
        let f2 = ldl_decompose(&r).unwrap();
        assert!(f1.l() == f2.l());
        for (a, b) in f1.d().iter().zip(f2.d().iter()) {
            assert!(a == b);
        }
    }
}
