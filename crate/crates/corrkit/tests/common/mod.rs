//! Shared generators for the integration suites: random Hermitian matrices
//! with known inertia, and positive-definite block-Toeplitz first columns.
// each test target compiles this module separately and uses a subset
#![allow(dead_code)]

use corrkit::factor::{cholesky_gaxpy, ldl_decompose};
use corrkit::linalg::{pinv_from_ldl, CMatrix};
use corrkit::schur::{assemble_block_toeplitz, ToeplitzSpec};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::new(
        rng.gen_range(-radius..=radius),
        rng.gen_range(-radius..=radius),
    )
}

/// Unit lower triangular with strictly-lower entries in a disc of radius
/// `scale / dim`, keeping the factor (and its inverse) well conditioned.
pub fn random_unit_lower(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> CMatrix {
    let mut l = CMatrix::identity(dim);
    let radius = scale / dim as f64;
    for i in 1..dim {
        for j in 0..i {
            l[(i, j)] = random_complex(rng, radius);
        }
    }
    l
}

fn assemble_ldl(l: &CMatrix, d: &[f64]) -> CMatrix {
    let dim = l.rows();
    let mut dm = CMatrix::zeros(dim, dim);
    for (k, &v) in d.iter().enumerate() {
        dm[(k, k)] = C64::new(v, 0.0);
    }
    l.mul(&dm).mul(&l.conj_t()).hermitian_part()
}

/// Hermitian PD with condition controlled by construction: `L·D·Lᴴ` with a
/// well-conditioned unit-lower `L` and `D` log-uniform over ±2 decades.
pub fn random_hermitian_pd(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let l = random_unit_lower(rng, dim, 1.0);
    let d: Vec<f64> = (0..dim)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..=2.0)))
        .collect();
    assemble_ldl(&l, &d)
}

/// Hermitian indefinite with all leading minors nonzero; by Sylvester's law
/// the built `D` signs are the eigenvalue signs. Returns the matrix and
/// whether it has a negative eigenvalue (always true here).
pub fn random_hermitian_indefinite(rng: &mut ChaCha8Rng, dim: usize) -> (CMatrix, bool) {
    assert!(dim >= 2);
    let l = random_unit_lower(rng, dim, 1.0);
    let mut d: Vec<f64> = (0..dim)
        .map(|_| {
            let mag = 10f64.powf(rng.gen_range(-1.0..=1.0));
            if rng.gen::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let neg = rng.gen_range(0..dim);
    d[neg] = -d[neg].abs();
    (assemble_ldl(&l, &d), true)
}

/// Positive-definite block-Toeplitz first column: diagonally dominant `r₀`
/// and geometrically decaying random off-diagonal blocks, screened with a
/// Cholesky probe of the assembled matrix.
pub fn random_pd_toeplitz_spec(rng: &mut ChaCha8Rng, depth: usize, m: usize) -> ToeplitzSpec {
    for attempt in 0..64 {
        let damp = 0.5f64.powi(attempt);
        let mut r0 = CMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                r0[(i, j)] = random_complex(rng, 0.3);
            }
        }
        let mut r0 = r0.hermitian_part();
        for i in 0..m {
            r0[(i, i)] = C64::new(2.0 + rng.gen_range(0.0..1.0), 0.0);
        }
        let mut col = vec![r0];
        for k in 1..depth {
            let mut b = CMatrix::zeros(m, m);
            let radius = damp * 0.6 * 0.5f64.powi(k as i32);
            for i in 0..m {
                for j in 0..m {
                    b[(i, j)] = random_complex(rng, radius);
                }
            }
            col.push(b);
        }
        let spec = ToeplitzSpec::new(col).unwrap();
        if cholesky_gaxpy(&assemble_block_toeplitz(&spec)).is_ok() {
            return spec;
        }
    }
    unreachable!("diagonally dominant spec failed to be PD");
}

/// Stationary first column with the block-geometric structure
/// `r_k = r_{k−1}·r₀⁻¹·r₁` (the matrix analogue of `r_k = r₀·ρᵏ`), screened
/// for positive definiteness.
pub fn block_geometric_spec(rng: &mut ChaCha8Rng, depth: usize, m: usize) -> ToeplitzSpec {
    for attempt in 0..64 {
        let damp = 0.5f64.powi(attempt);
        let r0 = {
            let mut a = CMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    a[(i, j)] = random_complex(rng, 0.2);
                }
            }
            let mut a = a.hermitian_part();
            for i in 0..m {
                a[(i, i)] = C64::new(1.5 + rng.gen_range(0.0..1.0), 0.0);
            }
            a
        };
        let r0_inv = pinv_from_ldl(&ldl_decompose(&r0).unwrap()).unwrap();
        let mut r1 = CMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                r1[(i, j)] = random_complex(rng, damp * 0.4);
            }
        }
        let mut col = vec![r0, r1];
        for k in 2..depth {
            let next = col[k - 1].mul(&r0_inv).mul(&col[1].clone());
            col.push(next);
        }
        col.truncate(depth.max(1));
        let spec = ToeplitzSpec::new(col).unwrap();
        if cholesky_gaxpy(&assemble_block_toeplitz(&spec)).is_ok() {
            return spec;
        }
    }
    unreachable!("geometric spec failed to be PD");
}
