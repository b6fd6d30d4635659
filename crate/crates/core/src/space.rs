//! Vector indexing and the action of semilinear maps on indices.
//!
//! A vector `(c_0, .., c_{d-1})` over GF(q) has index `sum c_i q^i`. Blowing
//! a vector up to GF(p) (each coordinate replaced by its base-p digits)
//! leaves the index unchanged.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matrix::{blowup_semilinear, Matrix};

pub fn space_size(field: &FieldSpec, dim: usize) -> u128 {
    (field.order() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

/// Errors with `SpaceTooLarge` when `q^dim` exceeds `cap`.
pub fn checked_space_size(field: &FieldSpec, dim: usize, cap: u64) -> Result<u64> {
    let size = space_size(field, dim);
    if size > cap as u128 {
        return Err(Error::SpaceTooLarge { size, cap });
    }
    Ok(size as u64)
}

pub fn encode(field: &FieldSpec, v: &[Elem]) -> u64 {
    let q = field.order() as u64;
    v.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}

pub fn decode(field: &FieldSpec, dim: usize, mut index: u64) -> Vec<Elem> {
    let q = field.order() as u64;
    (0..dim)
        .map(|_| {
            let c = (index % q) as Elem;
            index /= q;
            c
        })
        .collect()
}

/// The map `v -> (v^(p^frob)) M` on GF(q)^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    pub frob: u32,
    pub matrix: Matrix,
}

impl SemilinearMap {
    pub fn linear(matrix: Matrix) -> Self {
        SemilinearMap { frob: 0, matrix }
    }

    pub fn new(frob: u32, matrix: Matrix) -> Self {
        let a = matrix.field().degree();
        SemilinearMap { frob: frob % a, matrix }
    }

    pub fn identity(field: &FieldSpec, dim: usize) -> Self {
        Self::linear(Matrix::identity(field, dim))
    }

    /// The field automorphism `x -> x^(p^k)` applied coordinatewise.
    pub fn frobenius(field: &FieldSpec, dim: usize, k: u32) -> Self {
        Self::new(k, Matrix::identity(field, dim))
    }

    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        if self.frob == 0 {
            return self.matrix.vec_mul(v);
        }
        let tw: Vec<Elem> = v.iter().map(|&x| f.frobenius_pow(x, self.frob)).collect();
        self.matrix.vec_mul(&tw)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap::new(self.frob + other.frob, self.matrix.frobenius(other.frob).mul(&other.matrix))
    }

    pub fn inverse(&self) -> Result<SemilinearMap> {
        let a = self.field().degree();
        let back = (a - self.frob) % a;
        Ok(SemilinearMap::new(back, self.matrix.inverse()?.frobenius(back)))
    }

    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.matrix.is_identity()
    }

    pub fn pow(&self, mut e: u64) -> SemilinearMap {
        let mut result = SemilinearMap::identity(self.field(), self.dim());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        result
    }

    /// The same map written as a matrix over the prime field.
    pub fn blowup(&self) -> Matrix {
        blowup_semilinear(&self.matrix, self.frob)
    }
}

/// Fast evaluation of a GF(p)-linear map on vector indices.
#[derive(Clone, Debug)]
pub enum IndexAction {
    /// Characteristic 2: indices are bit vectors, images are XORs of row images
    /// looked up a byte at a time.
    Binary { tables: Vec<[u64; 256]> },
    /// Odd characteristic: digit arithmetic.
    Digits { p: u64, rows: Vec<Vec<u16>>, powers: Vec<u64> },
}

impl IndexAction {
    /// `m` must be a square matrix over a prime field.
    pub fn new(m: &Matrix) -> Self {
        let f = m.field();
        assert_eq!(f.degree(), 1, "index actions are built over the prime field");
        let d = m.rows();
        if f.p() == 2 {
            let row_index: Vec<u64> = (0..d).map(|r| encode(f, m.row(r))).collect();
            let tables = row_index
                .chunks(8)
                .map(|chunk| {
                    let mut t = [0u64; 256];
                    for (byte, slot) in t.iter_mut().enumerate() {
                        *slot = chunk
                            .iter()
                            .enumerate()
                            .filter(|(b, _)| byte >> b & 1 == 1)
                            .fold(0, |acc, (_, &img)| acc ^ img);
                    }
                    t
                })
                .collect();
            IndexAction::Binary { tables }
        } else {
            let p = f.p() as u64;
            let rows = (0..d).map(|r| m.row(r).to_vec()).collect();
            let powers = (0..d).map(|i| p.pow(i as u32)).collect();
            IndexAction::Digits { p, rows, powers }
        }
    }

    #[inline]
    pub fn apply(&self, index: u64) -> u64 {
        match self {
            IndexAction::Binary { tables } => {
                let mut out = 0;
                let mut x = index;
                for t in tables {
                    out ^= t[(x & 0xff) as usize];
                    x >>= 8;
                    if x == 0 {
                        break;
                    }
                }
                out
            }
            IndexAction::Digits { p, rows, powers } => {
                let d = rows.len();
                let mut acc = [0u64; 64];
                let mut x = index;
                let mut i = 0;
                while x != 0 {
                    let c = x % p;
                    x /= p;
                    if c != 0 {
                        for (a, &r) in acc[..d].iter_mut().zip(&rows[i]) {
                            *a += c * r as u64;
                        }
                    }
                    i += 1;
                }
                acc[..d].iter().zip(powers).fold(0, |s, (&a, &pw)| s + (a % p) * pw)
            }
        }
    }
}
