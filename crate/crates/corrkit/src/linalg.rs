//! Dense complex matrices, triangular solves and the factor-based
//! pseudo-inverse.
//!
//! [`CMatrix`] is the universal carrier: a dense, row-major, double-precision
//! complex matrix. [`LdlFactors`] holds a unit-lower-triangular `L` together
//! with the block-diagonal `D` of a modified Cholesky factorization
//! `R = L·D·Lᴴ`; the scalar factorizations are the `block_size == 1` case.

use num_complex::Complex64;
use thiserror::Error;

use crate::ops;

pub type C64 = Complex64;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("nonfinite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian within tolerance {tol:e}")]
    NotHermitian { tol: f64 },
    #[error("matrix is not positive definite at column {column}")]
    NotPositiveDefinite { column: usize },
    #[error("zero pivot at index {index}")]
    ZeroPivot { index: usize },
    #[error("singular factor block {block}")]
    SingularFactor { block: usize },
    #[error("singular pivot: {0}")]
    SingularPivot(String),
    #[error("out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    /// Construct from user data, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<CMatrix> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> CMatrix {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> CMatrix {
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = C64::new(1.0, 0.0);
        }
        a
    }

    /// Build from nested rows; panics on ragged input. Test/demo helper.
    pub fn from_rows(rows: &[Vec<C64>]) -> CMatrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> CMatrix {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Hermitian (conjugate) transpose.
    pub fn conj_t(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        ops::record_multiplies((self.rows * self.cols * rhs.cols) as u64);
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, c: C64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest componentwise difference to another matrix.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Extract the `m×m` block at block position (`bi`, `bj`).
    pub fn block(&self, bi: usize, bj: usize, m: usize) -> CMatrix {
        let mut out = CMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = self[(bi * m + i, bj * m + j)];
            }
        }
        out
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, b: &CMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(bi * b.rows + i, bj * b.cols + j)] = b[(i, j)];
            }
        }
    }

    /// Block down-shift Z_M applied to a block column: block row `i` moves to
    /// `i+1`, the top block row is zero-filled and the last is discarded.
    pub fn shift_down_blocks(&self, m: usize) -> CMatrix {
        assert_eq!(self.rows % m, 0);
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for i in 0..(self.rows - m) {
            for j in 0..self.cols {
                out[(i + m, j)] = self[(i, j)];
            }
        }
        out
    }

    /// `(A + Aᴴ) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// True iff `max_ij |A_ij − conj(A_ji)| ≤ tol`.
pub fn hermitian_check(a: &CMatrix, tol: f64) -> Result<bool> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(format!(
            "hermitian_check needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    for i in 0..a.rows {
        for j in 0..=i {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Forward substitution `L·X = B` for unit lower triangular `L`, row by row.
pub fn solve_lower_unit(l: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !l.is_square() || l.rows != b.rows {
        return Err(LinalgError::Dimension(format!(
            "solve_lower_unit: L is {}x{}, B is {}x{}",
            l.rows, l.cols, b.rows, b.cols
        )));
    }
    let mut x = b.clone();
    for i in 0..l.rows {
        for j in 0..i {
            let lij = l[(i, j)];
            if lij.re == 0.0 && lij.im == 0.0 {
                continue;
            }
            for c in 0..b.cols {
                let t = lij * x[(j, c)];
                x[(i, c)] -= t;
            }
        }
    }
    ops::record_multiplies((l.rows * l.rows / 2 * b.cols) as u64);
    Ok(x)
}

/// Back substitution `Lᴴ·X = B` for unit lower triangular `L`.
pub fn solve_lower_unit_conj_t(l: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !l.is_square() || l.rows != b.rows {
        return Err(LinalgError::Dimension(format!(
            "solve_lower_unit_conj_t: L is {}x{}, B is {}x{}",
            l.rows, l.cols, b.rows, b.cols
        )));
    }
    let mut x = b.clone();
    for i in (0..l.rows).rev() {
        for j in (i + 1)..l.rows {
            // (Lᴴ)_{ij} = conj(L_{ji})
            let lji = l[(j, i)].conj();
            if lji.re == 0.0 && lji.im == 0.0 {
                continue;
            }
            for c in 0..b.cols {
                let t = lji * x[(j, c)];
                x[(i, c)] -= t;
            }
        }
    }
    ops::record_multiplies((l.rows * l.rows / 2 * b.cols) as u64);
    Ok(x)
}

/// LU factorization with partial pivoting of a small square matrix.
///
/// `pivot_ratio` (smallest over largest pivot magnitude) stands in for a
/// singular-value condition estimate when deciding invertibility of the
/// small blocks this crate works with.
pub(crate) struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    min_pivot: f64,
    max_pivot: f64,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Lu {
        assert!(a.is_square());
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            let pn = pivot.norm();
            min_pivot = min_pivot.min(pn);
            max_pivot = max_pivot.max(pn);
            if pn == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let t = f * lu[(k, j)];
                    lu[(i, j)] -= t;
                }
            }
        }
        ops::record_multiplies((n * n * n / 3) as u64);
        if n == 0 {
            min_pivot = 0.0;
        }
        Lu {
            lu,
            perm,
            min_pivot,
            max_pivot,
        }
    }

    /// Smallest pivot magnitude relative to the largest; 0 for a singular
    /// factorization.
    pub fn pivot_ratio(&self) -> f64 {
        if self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    pub fn is_singular(&self, rel_tol: f64) -> bool {
        self.pivot_ratio() <= rel_tol
    }

    /// Solve `A·X = B`. Panics on an exactly zero pivot; callers are expected
    /// to gate on `is_singular` first.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        assert_eq!(self.lu.rows, b.rows);
        let n = self.lu.rows;
        let mut x = CMatrix::zeros(n, b.cols);
        for i in 0..n {
            for c in 0..b.cols {
                x[(i, c)] = b[(self.perm[i], c)];
            }
        }
        for i in 0..n {
            for j in 0..i {
                let f = self.lu[(i, j)];
                for c in 0..b.cols {
                    let t = f * x[(j, c)];
                    x[(i, c)] -= t;
                }
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let f = self.lu[(i, j)];
                for c in 0..b.cols {
                    let t = f * x[(j, c)];
                    x[(i, c)] -= t;
                }
            }
            let d = self.lu[(i, i)];
            assert!(d.norm() > 0.0, "singular pivot in Lu::solve");
            for c in 0..b.cols {
                x[(i, c)] /= d;
            }
        }
        ops::record_multiplies((n * n * b.cols) as u64);
        x
    }
}

/// `A · D⁻¹` for small square `D`, via an LU solve on the transposed system
/// (`X·D = A  ⇔  Dᵀ·Xᵀ = Aᵀ`). Returns `None` when `D` is near singular.
pub(crate) fn solve_right(a: &CMatrix, d: &CMatrix, rel_tol: f64) -> Option<CMatrix> {
    let lu = Lu::factor(&d.transpose());
    if lu.is_singular(rel_tol) {
        return None;
    }
    Some(lu.solve(&a.transpose()).transpose())
}

/// Unit-lower-triangular `L` plus block-diagonal `D` such that `R = L·D·Lᴴ`.
///
/// For block algorithms "unit diagonal" means each `M×M` diagonal block of
/// `L` is the identity; the scalar factorizations are the `block_size == 1`
/// case.
#[derive(Clone, Debug)]
pub struct LdlFactors {
    l: CMatrix,
    d: Vec<CMatrix>,
    block_size: usize,
}

impl LdlFactors {
    /// Validating constructor; enforces the structural invariants.
    pub fn new(l: CMatrix, d: Vec<CMatrix>, block_size: usize) -> Result<LdlFactors> {
        let m = block_size;
        let n = d.len();
        if m == 0 || !l.is_square() || l.rows != n * m {
            return Err(LinalgError::Dimension(format!(
                "LdlFactors: L is {}x{}, expected {}x{} from {} blocks of size {}",
                l.rows,
                l.cols,
                n * m,
                n * m,
                n,
                m
            )));
        }
        for (k, dk) in d.iter().enumerate() {
            if dk.rows != m || dk.cols != m {
                return Err(LinalgError::Dimension(format!(
                    "LdlFactors: D block {} is {}x{}, expected {}x{}",
                    k, dk.rows, dk.cols, m, m
                )));
            }
            if !hermitian_check(dk, 1e-12)? {
                return Err(LinalgError::NotHermitian { tol: 1e-12 });
            }
        }
        for i in 0..l.rows {
            for j in 0..l.cols {
                let bi = i / m;
                let bj = j / m;
                if j > i && l[(i, j)] != C64::new(0.0, 0.0) {
                    return Err(LinalgError::Dimension(format!(
                        "LdlFactors: L has a nonzero strictly above the diagonal at ({i}, {j})"
                    )));
                }
                if bi == bj {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    if l[(i, j)] != C64::new(expect, 0.0) {
                        return Err(LinalgError::Dimension(format!(
                            "LdlFactors: diagonal block {bi} of L is not the identity at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(LdlFactors {
            l,
            d,
            block_size: m,
        })
    }

    pub(crate) fn from_parts_unchecked(
        l: CMatrix,
        d: Vec<CMatrix>,
        block_size: usize,
    ) -> LdlFactors {
        LdlFactors { l, d, block_size }
    }

    pub fn identity(depth: usize, block_size: usize) -> LdlFactors {
        LdlFactors {
            l: CMatrix::identity(depth * block_size),
            d: vec![CMatrix::identity(block_size); depth],
            block_size,
        }
    }

    pub fn l(&self) -> &CMatrix {
        &self.l
    }

    pub fn d(&self) -> &[CMatrix] {
        &self.d
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn depth(&self) -> usize {
        self.d.len()
    }

    pub fn dim(&self) -> usize {
        self.l.rows
    }

    /// Largest componentwise difference between two factor sets.
    pub fn max_abs_diff(&self, other: &LdlFactors) -> f64 {
        let mut worst = self.l.max_abs_diff(&other.l);
        for (a, b) in self.d.iter().zip(other.d.iter()) {
            worst = worst.max(a.max_abs_diff(b));
        }
        worst
    }
}

/// `L · blockdiag(D) · Lᴴ` — the inverse map used by every oracle test.
pub fn reconstruct(f: &LdlFactors) -> CMatrix {
    let n = f.dim();
    let mut bd = CMatrix::zeros(n, n);
    for (k, dk) in f.d.iter().enumerate() {
        bd.set_block(k, k, dk);
    }
    f.l.mul(&bd).mul(&f.l.conj_t())
}

const PINV_COND_TOL: f64 = 1e-12;

/// Pseudo-inverse from LDLᴴ factors: `X = L⁻ᴴ · D⁻¹ · L⁻¹`, computed by two
/// triangular solves and one block-diagonal solve, then Hermitian-symmetrized.
pub fn pinv_from_ldl(f: &LdlFactors) -> Result<CMatrix> {
    let n = f.dim();
    let m = f.block_size;
    let lus: Vec<Lu> = f.d.iter().map(Lu::factor).collect();
    for (k, lu) in lus.iter().enumerate() {
        if lu.is_singular(PINV_COND_TOL) {
            return Err(LinalgError::SingularFactor { block: k });
        }
    }
    let y = solve_lower_unit(&f.l, &CMatrix::identity(n))?;
    let mut z = CMatrix::zeros(n, n);
    for (k, lu) in lus.iter().enumerate() {
        // rows of block k
        let mut yk = CMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                yk[(i, j)] = y[(k * m + i, j)];
            }
        }
        let zk = lu.solve(&yk);
        for i in 0..m {
            for j in 0..n {
                z[(k * m + i, j)] = zk[(i, j)];
            }
        }
    }
    let x = solve_lower_unit_conj_t(&f.l, &z)?;
    Ok(x.hermitian_part())
}
