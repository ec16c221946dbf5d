//! Factor a small Hermitian matrix three ways: gaxpy Cholesky, scalar LDLᴴ
//! and block LDLᴴ, then reconstruct and report the round-trip error.

use corrkit::factor::{block_ldl_decompose, cholesky_gaxpy, ldl_decompose};
use corrkit::linalg::{reconstruct, CMatrix};
use num_complex::Complex64 as C64;

fn main() {
    let i = C64::new(0.0, 1.0);
    let r = CMatrix::from_rows(&[
        vec![C64::new(4.0, 0.0), C64::new(2.0, 0.0), i],
        vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(0.5, 0.0)],
        vec![-i, C64::new(0.5, 0.0), C64::new(2.0, 0.0)],
    ]);

    let chol = cholesky_gaxpy(&r).expect("positive definite");
    let llh = chol.l().mul(&chol.l().conj_t());
    println!("cholesky  ‖R − L·Lᴴ‖_max = {:.3e}", llh.max_abs_diff(&r));

    let ldl = ldl_decompose(&r).expect("nonzero leading minors");
    println!(
        "ldl       ‖R − L·D·Lᴴ‖_max = {:.3e}",
        reconstruct(&ldl).max_abs_diff(&r)
    );
    let d: Vec<f64> = (0..3).map(|k| ldl.d()[k][(0, 0)].re).collect();
    println!("ldl       D = {d:?}");

    // indefinite input: Cholesky refuses, LDLᴴ still factors
    let ind = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
    println!("indefinite cholesky → {:?}", cholesky_gaxpy(&ind).err());
    let ldl2 = ldl_decompose(&ind).unwrap();
    println!(
        "indefinite ldl D = [{}, {}]",
        ldl2.d()[0][(0, 0)].re,
        ldl2.d()[1][(0, 0)].re
    );

    // block variant: 4×4 carved into 2×2 blocks
    let big = CMatrix::from_real_rows(&[
        vec![5.0, 1.0, 0.5, 0.0],
        vec![1.0, 4.0, 0.0, 0.5],
        vec![0.5, 0.0, 3.0, 1.0],
        vec![0.0, 0.5, 1.0, 3.0],
    ]);
    let bldl = block_ldl_decompose(&big, 2).unwrap();
    println!(
        "block ldl ‖R − L·D·Lᴴ‖_max = {:.3e} (M = 2)",
        reconstruct(&bldl).max_abs_diff(&big)
    );
}
