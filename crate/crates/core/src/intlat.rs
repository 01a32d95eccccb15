//! Exact integer and rational lattice linear algebra.
//!
//! Everything in this module is arbitrary-precision and exact: matrices over
//! `BigInt`, volumes and solve results over `BigRational`. Floating point is
//! deliberately absent — determinants and lattice indices computed here feed
//! group orders downstream and must be exact.
//!
//! The main entry points are [`hnf`], [`snf`], [`primitive`],
//! [`plane_lattice`] and [`lattice_volume`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
///
/// `BigRational` keeps the denominator positive and the fraction reduced,
/// which is exactly the invariant the engine relies on.
pub type Rational = BigRational;

/// Dense row-major matrix over `BigInt`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.at(k, c);
                    let cur = out.at(r, c) + add;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// `row[dst] -= q * row[src]`.
    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.at(dst, c) - q * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    /// `col[dst] -= q * col[src]`.
    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.at(r, dst) - q * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    /// `row[dst] += row[src]`.
    fn row_add(&mut self, dst: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + self.at(src, c);
            self.set(dst, c, v);
        }
    }

    /// Replaces rows (i, j) by the unimodular combination
    /// `(x*row_i + y*row_j, -qg*row_i + pg*row_j)`.
    fn combine_rows(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, qg: &BigInt, pg: &BigInt) {
        for c in 0..self.cols {
            let a = self.at(i, c).clone();
            let b = self.at(j, c).clone();
            self.set(i, c, x * &a + y * &b);
            self.set(j, c, pg * &b - qg * &a);
        }
    }

    /// Same combination acting on columns.
    fn combine_cols(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, qg: &BigInt, pg: &BigInt) {
        for r in 0..self.rows {
            let a = self.at(r, i).clone();
            let b = self.at(r, j).clone();
            self.set(r, i, x * &a + y * &b);
            self.set(r, j, pg * &b - qg * &a);
        }
    }

    /// Rows of the matrix as rational vectors.
    fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| Rational::from(x.clone())).collect())
            .collect()
    }
}

/// Dot product of two integer vectors of equal length.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides a nonzero integer vector by the gcd of its entries, preserving
/// direction. The result has coprime entries.
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Zeroes `m[r][col]` against the nonzero pivot `m[p_row][col]` by a
/// unimodular row operation mirrored on `u`. When the pivot divides the
/// entry a plain subtraction is used, which leaves the pivot row untouched
/// (this guarantees termination of the normal-form loops).
fn clear_row_entry(m: &mut IntMatrix, u: &mut IntMatrix, p_row: usize, r: usize, col: usize) {
    let q = m.at(r, col).clone();
    if q.is_zero() {
        return;
    }
    let p = m.at(p_row, col).clone();
    debug_assert!(!p.is_zero());
    if (&q % &p).is_zero() {
        let f = &q / &p;
        m.row_sub_mul(r, p_row, &f);
        u.row_sub_mul(r, p_row, &f);
    } else {
        let eg = p.extended_gcd(&q);
        let (pg, qg) = (&p / &eg.gcd, &q / &eg.gcd);
        m.combine_rows(p_row, r, &eg.x, &eg.y, &qg, &pg);
        u.combine_rows(p_row, r, &eg.x, &eg.y, &qg, &pg);
    }
}

/// Column version of [`clear_row_entry`], mirrored on `v`.
fn clear_col_entry(m: &mut IntMatrix, v: &mut IntMatrix, p_col: usize, c: usize, row: usize) {
    let q = m.at(row, c).clone();
    if q.is_zero() {
        return;
    }
    let p = m.at(row, p_col).clone();
    debug_assert!(!p.is_zero());
    if (&q % &p).is_zero() {
        let f = &q / &p;
        m.col_sub_mul(c, p_col, &f);
        v.col_sub_mul(c, p_col, &f);
    } else {
        let eg = p.extended_gcd(&q);
        let (pg, qg) = (&p / &eg.gcd, &q / &eg.gcd);
        m.combine_cols(p_col, c, &eg.x, &eg.y, &qg, &pg);
        v.combine_cols(p_col, c, &eg.x, &eg.y, &qg, &pg);
    }
}

/// Row Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `H = U * A` in row echelon form:
/// pivots positive, entries above each pivot reduced into `[0, pivot)`, zero
/// rows at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivot_row = 0;
    for col in 0..h.cols() {
        if pivot_row >= h.rows() {
            break;
        }
        let found = (pivot_row..h.rows()).find(|&r| !h.at(r, col).is_zero());
        let Some(first) = found else { continue };
        h.swap_rows(pivot_row, first);
        u.swap_rows(pivot_row, first);
        for r in pivot_row + 1..h.rows() {
            clear_row_entry(&mut h, &mut u, pivot_row, r, col);
        }
        if h.at(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h.at(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.at(r, col).div_floor(&p);
            h.row_sub_mul(r, pivot_row, &q);
            u.row_sub_mul(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(D, U, V)` with `D = U * A * V` diagonal, `d_1 | d_2 | ... | d_k`,
/// all `d_i >= 0`, and `U`, `V` unimodular.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let t = a.rows().min(a.cols());
    let mut k = 0;
    while k < t {
        // Move a nonzero entry of the trailing block into the corner.
        let mut pivot = None;
        'search: for r in k..d.rows() {
            for c in k..d.cols() {
                if !d.at(r, c).is_zero() {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        d.swap_rows(k, pr);
        u.swap_rows(k, pr);
        d.swap_cols(k, pc);
        v.swap_cols(k, pc);

        loop {
            let mut clean = true;
            for r in k + 1..d.rows() {
                if d.at(r, k).is_zero() {
                    continue;
                }
                clean = false;
                clear_row_entry(&mut d, &mut u, k, r, k);
            }
            for c in k + 1..d.cols() {
                if d.at(k, c).is_zero() {
                    continue;
                }
                clean = false;
                clear_col_entry(&mut d, &mut v, k, c, k);
            }
            if !clean {
                continue;
            }
            // Corner entry must divide the whole trailing block for the
            // divisibility chain; fold in an offending row and retry.
            let corner = d.at(k, k).clone();
            let mut offender = None;
            'divcheck: for r in k + 1..d.rows() {
                for c in k + 1..d.cols() {
                    if !d.at(r, c).mod_floor(&corner).is_zero() {
                        offender = Some(r);
                        break 'divcheck;
                    }
                }
            }
            match offender {
                Some(r) => {
                    d.row_add(k, r);
                    u.row_add(k, r);
                }
                None => break,
            }
        }
        if d.at(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }
    (d, u, v)
}

/// Determinant of a square integer matrix (fraction-free Bareiss).
pub fn det(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m.at(r, k).is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                m.set(i, j, val);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.at(k, k).clone();
    }
    let d = m.at(n - 1, n - 1).clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Inverse of a unimodular integer matrix. Panics if the input is not
/// unimodular; callers only pass transforms produced by [`hnf`] / [`snf`].
pub fn unimodular_inverse(a: &IntMatrix) -> IntMatrix {
    let inv = rational_inverse(a).expect("unimodular matrix must be invertible");
    let mut out = IntMatrix::zeros(a.rows(), a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let x = &inv[r][c];
            assert!(x.is_integer(), "inverse of unimodular matrix must be integral");
            out.set(r, c, x.to_integer());
        }
    }
    out
}

/// Exact inverse of a square integer matrix over the rationals.
pub fn rational_inverse(a: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut m = a.to_rational_rows();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let mj = &m[col][j] * &f;
                m[r][j] -= mj;
                let ij = &inv[col][j] * &f;
                inv[r][j] -= ij;
            }
        }
    }
    Some(inv)
}

/// Solves the square system `x * A = b` (row vectors) exactly.
pub fn solve_row_square(a: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    // x * A = b  <=>  A^T x^T = b^T
    let at = a.transpose();
    solve_square(&at, b)
}

/// Solves the square system `A * x = b` exactly by Gaussian elimination.
pub fn solve_square(a: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut m = a.to_rational_rows();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..n {
            m[col][j] /= &p;
        }
        rhs[col] /= &p;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..n {
                let v = &m[col][j] * &f;
                m[r][j] -= v;
            }
            let v = &rhs[col] * &f;
            rhs[r] -= v;
        }
    }
    Some(rhs)
}

/// Basis of a saturated sublattice `Z^n ∩ span_R(vectors)` together with the
/// coordinates of the input vectors in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    /// Rows form a basis of the saturated lattice, in HNF-canonical form.
    pub basis: IntMatrix,
    /// `input_coords * basis = input`, entries exact integers.
    pub input_coords: IntMatrix,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Exact coordinates of an ambient vector in this basis, or `None` when
    /// the vector is outside the lattice (not in the span, or fractional).
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.rank();
        let n = self.ambient_dim();
        assert_eq!(v.len(), n);
        // Solve c * basis = v via elimination on the transposed system.
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut row: Vec<Rational> = (0..k)
                    .map(|i| Rational::from(self.basis.at(i, j).clone()))
                    .collect();
                row.push(Rational::from(v[j].clone()));
                row
            })
            .collect();
        let mut pivot_rows = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(p) = (row..n).find(|&r| !aug[r][col].is_zero()) else {
                return None;
            };
            aug.swap(row, p);
            let pv = aug[row][col].clone();
            for j in 0..=k {
                aug[row][j] /= &pv;
            }
            for r in 0..n {
                if r == row || aug[r][col].is_zero() {
                    continue;
                }
                let f = aug[r][col].clone();
                for j in 0..=k {
                    let v = &aug[row][j] * &f;
                    aug[r][j] -= v;
                }
            }
            pivot_rows.push(row);
            row += 1;
        }
        // Consistency: remaining rows must have zero rhs.
        for r in row..n {
            if !aug[r][k].is_zero() {
                return None;
            }
        }
        let mut coords = Vec::with_capacity(k);
        for (col, &pr) in pivot_rows.iter().enumerate() {
            debug_assert!(aug[pr][col].is_one());
            let x = &aug[pr][k];
            if !x.is_integer() {
                return None;
            }
            coords.push(x.to_integer());
        }
        Some(coords)
    }
}

/// Computes the saturated lattice `Z^n ∩ span_R(vectors)`.
///
/// The input vectors must be linearly independent; the returned basis has the
/// same rank and its Z-span contains every lattice point of the real span.
pub fn plane_lattice(vectors: &[Vec<BigInt>]) -> Result<LatticeBasis> {
    let k = vectors.len();
    assert!(k > 0, "plane_lattice of empty generating set");
    let n = vectors[0].len();
    let a = IntMatrix::from_rows(vectors.to_vec());
    let (d, u, v) = snf(&a);
    for i in 0..k {
        if i >= d.cols() || d.at(i, i).is_zero() {
            return Err(Error::DegenerateCone);
        }
    }
    // A = U^-1 D V^-1, so the first k rows of V^-1 span the saturation and
    // the coordinates of A in that basis are U^-1 * diag(d).
    let vinv = unimodular_inverse(&v);
    let uinv = unimodular_inverse(&u);
    let mut raw_basis = IntMatrix::zeros(k, n);
    for i in 0..k {
        for j in 0..n {
            raw_basis.set(i, j, vinv.at(i, j).clone());
        }
    }
    let mut coords = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            coords.set(i, j, uinv.at(i, j) * d.at(j, j));
        }
    }
    // Canonicalize: basis = W^-1 * H with H the HNF, coords absorb W^-1.
    let (h, w) = hnf(&raw_basis);
    let winv = unimodular_inverse(&w);
    let coords = coords.mul(&winv);
    debug_assert_eq!(coords.mul(&h), a, "input must decompose over the basis");
    Ok(LatticeBasis {
        basis: h,
        input_coords: coords,
    })
}

/// Volume normalization for lattice volumes of faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VolumeConvention {
    /// Determinant in the induced lattice divided by r! (agrees with the
    /// Euclidean volume relative to the lattice).
    Lattice,
    /// The bare determinant in the induced lattice (r! times `Lattice`).
    Normalized,
}

/// Volume of the simplex spanned by `r+1` affinely independent lattice
/// points, measured in the saturated lattice of their affine span.
///
/// A single point has volume 1 under both conventions.
pub fn lattice_volume(points: &[Vec<BigInt>], convention: VolumeConvention) -> Result<Rational> {
    assert!(!points.is_empty(), "lattice_volume of empty point set");
    let r = points.len() - 1;
    if r == 0 {
        return Ok(Rational::one());
    }
    let edges: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(&points[0])
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>()
        })
        .collect();
    let lat = plane_lattice(&edges).map_err(|_| Error::DegenerateFace)?;
    let d = det(&lat.input_coords).abs();
    match convention {
        VolumeConvention::Normalized => Ok(Rational::from(d)),
        VolumeConvention::Lattice => {
            let mut fact = BigInt::one();
            for i in 2..=r {
                fact *= BigInt::from(i);
            }
            Ok(Rational::new(d, fact))
        }
    }
}
