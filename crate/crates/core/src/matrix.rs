//! Dense matrices over GF(p^a).
//!
//! Vectors are rows and act on the right: `v -> v M`.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// Largest supported number of rows or columns.
pub const MAX_DIM: usize = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::DimensionTooLarge(rows.max(cols)));
    }
    Ok(())
}

impl Matrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        check_dims(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.is_valid(x)) {
            return Err(Error::InvalidSpec(format!("{bad} is not an element of {field}")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_DIM && cols <= MAX_DIM, "matrix dimension exceeds {MAX_DIM}");
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &FieldSpec, n: usize, lambda: Elem) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = lambda;
        }
        m
    }

    /// Permutation matrix of `perm` in the row convention: `e_i M = e_{perm[i]}`.
    pub fn permutation(field: &FieldSpec, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.data[i * n + j] = 1;
        }
        m
    }

    /// Diagonal matrix.
    pub fn diagonal(field: &FieldSpec, diag: &[Elem]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Upper unipotent Jordan block J_k (ones on the diagonal and superdiagonal).
    pub fn jordan_block(field: &FieldSpec, k: usize) -> Self {
        let mut m = Self::identity(field, k);
        for i in 0..k.saturating_sub(1) {
            m.data[i * k + i + 1] = 1;
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
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

    /// Row-major entries.
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{:?}", self.field), format!("{:?}", other.field)));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![0 as Elem; n * m];
        for i in 0..n {
            let orow = &mut out[i * m..(i + 1) * m];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * m..(k + 1) * m];
                if a == 1 {
                    for (o, &b) in orow.iter_mut().zip(brow) {
                        *o = f.add(*o, b);
                    }
                } else {
                    for (o, &b) in orow.iter_mut().zip(brow) {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Ok(Matrix { field: f.clone(), rows: n, cols: m, data: out })
    }

    /// Matrix product; panics on field or shape mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("matrix product of incompatible operands")
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("sum of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("difference of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, lambda: Elem) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, lambda)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Entrywise x -> x^(p^k).
    pub fn frobenius(&self, k: u32) -> Matrix {
        if k.is_multiple_of(self.field.degree()) {
            return self.clone();
        }
        let data = self.data.iter().map(|&a| self.field.frobenius_pow(a, k)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == if r == c { 1 } else { 0 }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length must equal the row count");
        let f = &self.field;
        let mut out = vec![0 as Elem; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        echelonize(&self.field, &mut rows).len()
    }

    /// Basis of the left kernel `{v : v M = 0}`, in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        // Row-reduce [M | I]; rows whose M-part vanishes carry kernel vectors.
        let n = self.rows;
        let width = self.cols + n;
        let mut aug: Vec<Vec<Elem>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { 1 } else { 0 }));
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(pr) = (pivot_row..n).find(|&r| aug[r][col] != 0) else { continue };
            aug.swap(pivot_row, pr);
            let inv = f.inv(aug[pivot_row][col]).expect("pivot is nonzero");
            for x in aug[pivot_row].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let prow = aug[pivot_row].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != pivot_row && row[col] != 0 {
                    let c = row[col];
                    for k in 0..width {
                        row[k] = f.sub(row[k], f.mul(c, prow[k]));
                    }
                }
            }
            pivot_row += 1;
        }
        let mut ker: Vec<Vec<Elem>> = aug[pivot_row..].iter().map(|row| row[self.cols..].to_vec()).collect();
        echelonize(f, &mut ker);
        ker
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a: Vec<Vec<Elem>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { 1 } else { 0 }));
                row
            })
            .collect();
        for col in 0..n {
            let pr = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::Singular)?;
            a.swap(col, pr);
            let inv = f.inv(a[col][col])?;
            for x in a[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let prow = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let c = row[col];
                    for k in 0..2 * n {
                        row[k] = f.sub(row[k], f.mul(c, prow[k]));
                    }
                }
            }
        }
        let data = a.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        Ok(Matrix { field: f.clone(), rows: n, cols: n, data })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Multiplicative order, or `None` if it exceeds `cap` (or the matrix is singular).
    pub fn order(&self, cap: u64) -> Option<u64> {
        if !self.is_invertible() {
            return None;
        }
        let mut x = self.clone();
        for k in 1..=cap {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }

    /// Dimension of the fixed space `{v : v M = v}`.
    pub fn fixed_space_dim(&self) -> usize {
        let id = Matrix::identity(&self.field, self.rows);
        self.rows - self.sub(&id).expect("square").rank()
    }

    /// Kronecker product with basis order `u_i (x) w_j`, i-major.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        kronecker(self, other)
    }

    /// Replace each entry by its regular representation over GF(p).
    pub fn blowup(&self) -> Matrix {
        blowup(self)
    }

    pub fn jordan_type_unipotent(&self) -> Result<JordanType> {
        jordan_type_unipotent(self)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        let mut out = Matrix::zero(&self.field, n, m);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        out
    }
}

/// Reduced row echelon form in place; drops zero rows and returns pivot columns.
pub fn echelonize(f: &FieldSpec, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        let Some(found) = (pr..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(pr, found);
        let inv = f.inv(rows[pr][col]).expect("pivot is nonzero");
        for x in rows[pr].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let prow = rows[pr].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pr && row[col] != 0 {
                let c = row[col];
                for k in col..ncols {
                    row[k] = f.sub(row[k], f.mul(c, prow[k]));
                }
            }
        }
        pivots.push(col);
        pr += 1;
        if pr == rows.len() {
            break;
        }
    }
    rows.truncate(pr);
    pivots
}

/// Basis of `{x : A x = 0}` where `A` has the given rows of length `ncols`.
pub fn right_nullspace(f: &FieldSpec, rows: Vec<Vec<Elem>>, ncols: usize) -> Vec<Vec<Elem>> {
    let mut rows = rows;
    let pivots = echelonize(f, &mut rows);
    let mut is_pivot = vec![false; ncols];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0 as Elem; ncols];
            x[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                x[pc] = f.neg(row[free]);
            }
            x
        })
        .collect()
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.same_field(b)?;
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    check_dims(rows, cols)?;
    let f = &a.field;
    let mut out = Matrix::zero(f, rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, f.mul(x, b.get(k, l)));
                }
            }
        }
    }
    Ok(out)
}

/// Regular representation of multiplication by `x` on the polynomial basis,
/// as an a x a matrix over GF(p) (row i = coordinates of `t^i x`).
pub fn regular_representation(field: &FieldSpec, x: Elem) -> Matrix {
    let a = field.degree() as usize;
    let prime = FieldSpec::prime(field.p()).expect("p is prime");
    let mut m = Matrix::zero(&prime, a, a);
    let t = if a == 1 { 1 } else { field.p() as Elem };
    let mut basis = 1 as Elem;
    for i in 0..a {
        let prod = field.mul(basis, x);
        for (j, d) in field.to_digits(prod).into_iter().enumerate() {
            m.set(i, j, d as Elem);
        }
        basis = field.mul(basis, t);
    }
    m
}

/// The GF(p)-linear map c -> c^(p^k) on one coordinate, in the polynomial basis.
pub fn frobenius_matrix(field: &FieldSpec, k: u32) -> Matrix {
    let a = field.degree() as usize;
    let prime = FieldSpec::prime(field.p()).expect("p is prime");
    let mut m = Matrix::zero(&prime, a, a);
    let t = if a == 1 { 1 } else { field.p() as Elem };
    let mut basis = 1 as Elem;
    for i in 0..a {
        let img = field.frobenius_pow(basis, k);
        for (j, d) in field.to_digits(img).into_iter().enumerate() {
            m.set(i, j, d as Elem);
        }
        basis = field.mul(basis, t);
    }
    m
}

pub fn blowup(m: &Matrix) -> Matrix {
    let f = &m.field;
    let a = f.degree() as usize;
    if a == 1 {
        return m.clone();
    }
    let prime = FieldSpec::prime(f.p()).expect("p is prime");
    let mut out = Matrix::zero(&prime, m.rows * a, m.cols * a);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let x = m.get(i, j);
            if x == 0 {
                continue;
            }
            let block = regular_representation(f, x);
            for r in 0..a {
                for c in 0..a {
                    out.set(i * a + r, j * a + c, block.get(r, c));
                }
            }
        }
    }
    out
}

/// The GF(p)-matrix of the semilinear map `v -> (v^(p^k)) M`.
pub fn blowup_semilinear(m: &Matrix, frob: u32) -> Matrix {
    let f = &m.field;
    let a = f.degree();
    if frob.is_multiple_of(a) {
        return blowup(m);
    }
    let fm = frobenius_matrix(f, frob);
    let mut diag = fm.clone();
    for _ in 1..m.rows {
        diag = diag.direct_sum(&fm);
    }
    diag.mul(&blowup(m))
}

/// Multiset of unipotent Jordan block sizes, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanType {
    pub blocks: Vec<usize>,
}

impl JordanType {
    pub fn new(mut blocks: Vec<usize>) -> Self {
        blocks.retain(|&b| b > 0);
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        JordanType { blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Number of blocks of size `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        self.blocks.iter().filter(|&&b| b == k).count()
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Jordan type of a unipotent matrix from the ranks of powers of `g - I`.
pub fn jordan_type_unipotent(g: &Matrix) -> Result<JordanType> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch("Jordan type of a non-square matrix".into()));
    }
    let n = g.rows;
    let nil = g.sub(&Matrix::identity(&g.field, n))?;
    if !nil.pow(n as u64).is_zero() {
        return Err(Error::NonUnipotent);
    }
    // ranks[k] = rank (g - I)^k
    let mut ranks = vec![n];
    let mut power = Matrix::identity(&g.field, n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(&nil);
        ranks.push(power.rank());
    }
    ranks.push(0);
    let mut blocks = Vec::new();
    for k in 1..ranks.len() - 1 {
        // (#blocks of size >= k) - (#blocks of size >= k+1)
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = ranks[k] - ranks[k + 1];
        for _ in 0..at_least_k - at_least_k1 {
            blocks.push(k);
        }
    }
    Ok(JordanType::new(blocks))
}
