//! Jordan types of tensor products of unipotent blocks in characteristic p.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec};
use crate::matrix::{JordanType, Matrix, MAX_DIM};

/// `t` tensor factors of dimension `m` over GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorShape {
    pub m: usize,
    pub t: usize,
    pub p: u32,
}

impl TensorShape {
    pub fn new(m: usize, t: usize, p: u32) -> Result<Self> {
        if m < 2 || t < 2 {
            return Err(Error::InvalidSpec(format!("need m >= 2 and t >= 2, got m = {m}, t = {t}")));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        Ok(TensorShape { m, t, p })
    }

    pub fn dim(&self) -> Option<usize> {
        self.m.checked_pow(self.t as u32)
    }

    /// Permutation matrix sending `e_{i_1} (x) .. (x) e_{i_t}` to
    /// `e_{i_t} (x) e_{i_1} (x) .. (x) e_{i_{t-1}}`.
    pub fn shift_matrix(&self) -> Result<Matrix> {
        let n = self.dim().filter(|&n| n <= MAX_DIM).ok_or(Error::DimensionTooLarge(usize::MAX))?;
        let f = FieldSpec::prime(self.p)?;
        let top = n / self.m;
        let perm: Vec<usize> = (0..n).map(|x| (x % self.m) * top + x / self.m).collect();
        Ok(Matrix::permutation(&f, &perm))
    }
}

/// Jordan type of `J_a (x) J_b` in characteristic p, for `a, b <= p`.
pub fn jordan_tensor(a: usize, b: usize, p: u32) -> Result<JordanType> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidSpec(format!("{p} is not prime")));
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let p = p as usize;
    if a == 0 {
        return Err(Error::InvalidSpec("block sizes must be at least 1".into()));
    }
    if b > p {
        return Err(Error::UnsupportedRange(format!(
            "block size {b} exceeds p = {p}; J_b is indecomposable and no closed form is implemented"
        )));
    }
    let mut blocks = Vec::with_capacity(a);
    if a + b <= p {
        blocks.extend((b - a + 1..=a + b - 1).rev().step_by(2));
    } else {
        blocks.extend(std::iter::repeat_n(p, a + b - p));
        if b < p {
            blocks.extend((b - a + 1..=2 * p - a - b - 1).rev().step_by(2));
        }
    }
    Ok(JordanType::new(blocks))
}

/// Jordan type of the cyclic shift on `p` tensor factors of dimension `m` over GF(p):
/// `m` fixed basis tensors and `(m^p - m)/p` regular cycles.
pub fn cyclic_tensor_shape(m: usize, p: u32) -> Result<JordanType> {
    let shape = TensorShape::new(m, p as usize, p)?;
    let n = shape.dim().ok_or_else(|| Error::UnsupportedRange(format!("{m}^{p} overflows")))?;
    let b = (n - m) / p as usize;
    let mut blocks = vec![1; m];
    blocks.extend(std::iter::repeat_n(p as usize, b));
    Ok(JordanType::new(blocks))
}

/// Upper bound `1/p + (1 - 1/p) / m^(p-1)` on `dim C_V(g) / dim V`.
pub fn kappa_bound(m: u64, p: u64) -> Result<Ratio<u64>> {
    if m < 2 || !is_prime(p) {
        return Err(Error::InvalidSpec(format!("need m >= 2 and p prime, got m = {m}, p = {p}")));
    }
    let mp = m.checked_pow(p as u32 - 1).ok_or_else(|| Error::UnsupportedRange("m^(p-1) overflows".into()))?;
    let inv_p = Ratio::new(1, p);
    Ok(inv_p + (Ratio::from_integer(1) - inv_p) / mp)
}

/// `dim C_V(g) / dim V`.
pub fn kappa(g: &Matrix) -> Ratio<u64> {
    Ratio::new(g.fixed_space_dim() as u64, g.rows() as u64)
}
