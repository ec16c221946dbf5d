//! Pseudo-inverse from factors: R† = L⁻ᴴ·D⁻¹·L⁻¹, checked against the
//! Penrose identity R·R†·R = R.

use corrkit::factor::ldl_decompose;
use corrkit::linalg::{pinv_from_ldl, CMatrix};
use num_complex::Complex64 as C64;

fn main() {
    let i = C64::new(0.0, 1.0);
    let r = CMatrix::from_rows(&[
        vec![C64::new(2.0, 0.0), i, C64::new(0.0, 0.0)],
        vec![-i, C64::new(3.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(4.0, 0.0)],
    ]);

    let f = ldl_decompose(&r).unwrap();
    let pinv = pinv_from_ldl(&f).unwrap();

    let rpr = r.mul(&pinv).mul(&r);
    println!(
        "‖R·R†·R − R‖_F / ‖R‖_F = {:.3e}",
        rpr.sub(&r).frob_norm() / r.frob_norm()
    );
    let prp = pinv.mul(&r).mul(&pinv);
    println!(
        "‖R†·R·R† − R†‖_F / ‖R†‖_F = {:.3e}",
        prp.sub(&pinv).frob_norm() / pinv.frob_norm()
    );
    println!(
        "R·R† hermitian residual = {:.3e}",
        r.mul(&pinv).sub(&r.mul(&pinv).conj_t()).max_abs()
    );
}
