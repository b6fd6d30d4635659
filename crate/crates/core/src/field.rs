//! Arithmetic in GF(p^a).
//!
//! Elements are encoded as integers in `[0, p^a)` whose base-p digits are the
//! coefficients of the element in the polynomial basis `1, x, ..., x^(a-1)`
//! modulo the field's reduction polynomial.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Encoded field element.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// A finite field GF(p^a) with a fixed reduction polynomial.
///
/// Cheap to clone; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

struct Tables {
    p: u32,
    a: u32,
    q: u32,
    poly: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    frob: Vec<Elem>,
    add: Option<Vec<Elem>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over GF(p), ascending coefficients.

fn poly_trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    f
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    let lead_inv = mod_inv(g[dg], p);
    while r.len() > dg && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for i in 0..=dg {
                r[dr - dg + i] = (r[dr - dg + i] + p * p - c * g[i] % p) % p;
            }
        }
        r.pop();
        r = poly_trim(r);
        if r.len() <= dg {
            break;
        }
    }
    poly_trim(r)
}

fn mod_inv(x: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = x as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Digits of `n` in base `p`, exactly `len` of them.
fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

/// True when the monic polynomial `f` (ascending coefficients) has no monic
/// factor of degree between 1 and deg(f)/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits(low as u32, p, d);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^a) with the least monic irreducible reduction polynomial, where
    /// polynomials are ordered by the integer `sum c_i p^i`.
    pub fn new(p: u32, a: u32) -> Result<Self> {
        Self::check_params(p, a)?;
        let count = p.pow(a);
        for low in 0..count {
            let mut poly = digits(low, p, a as usize);
            poly.push(1);
            if is_irreducible(&poly, p) {
                return Self::build(p, a, poly);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        let mut a = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            a += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::new(p, a)
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// GF(p^a) with an explicit monic reduction polynomial (ascending
    /// coefficients, length a+1).
    pub fn with_poly(p: u32, a: u32, poly: Vec<u32>) -> Result<Self> {
        Self::check_params(p, a)?;
        if poly.len() != a as usize + 1 || poly[a as usize] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "reduction polynomial {poly:?} is not monic of degree {a} over GF({p})"
            )));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::InvalidField(format!("polynomial {poly:?} is reducible over GF({p})")));
        }
        Self::build(p, a, poly)
    }

    fn check_params(p: u32, a: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if a == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        match (p as u64).checked_pow(a) {
            Some(q) if q <= MAX_FIELD_ORDER as u64 => Ok(()),
            _ => Err(Error::InvalidField(format!("GF({p}^{a}) exceeds the supported order 2^16"))),
        }
    }

    fn build(p: u32, a: u32, poly: Vec<u32>) -> Result<Self> {
        let q = p.pow(a);
        let len = a as usize;
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mul_slow = |x: u32, y: u32| -> u32 {
            let xd = digits(x, p, len);
            let yd = digits(y, p, len);
            let mut prod = vec![0u32; 2 * len];
            for (i, &u) in xd.iter().enumerate() {
                for (j, &v) in yd.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            let mut r = poly_rem(&poly_trim(prod), &poly, p);
            r.resize(len, 0);
            encode(&r)
        };

        // Primitive element: least g whose powers exhaust the nonzero elements.
        let mut exp = vec![0 as Elem; q as usize - 1];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let mut x = 1u32;
            let mut ok = true;
            for (k, slot) in exp.iter_mut().enumerate() {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                *slot = x as Elem;
                x = mul_slow(x, g);
            }
            if ok && x == 1 {
                found = true;
                break;
            }
        }
        assert!(found || q == 2, "multiplicative group of a finite field is cyclic");
        if q == 2 {
            exp[0] = 1;
        }
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }

        let add_slow = |x: u32, y: u32| -> u32 {
            let xd = digits(x, p, len);
            let yd = digits(y, p, len);
            let s: Vec<u32> = xd.iter().zip(&yd).map(|(u, v)| (u + v) % p).collect();
            encode(&s)
        };
        let neg: Vec<Elem> = (0..q)
            .map(|x| {
                let d: Vec<u32> = digits(x, p, len).iter().map(|&c| (p - c) % p).collect();
                encode(&d) as Elem
            })
            .collect();
        let add = if p != 2 && q <= 256 {
            let mut t = vec![0 as Elem; (q * q) as usize];
            for x in 0..q {
                for y in 0..q {
                    t[(x * q + y) as usize] = add_slow(x, y) as Elem;
                }
            }
            Some(t)
        } else {
            None
        };
        let mut tables = Tables { p, a, q, poly, exp, log, neg, frob: Vec::new(), add };
        let frob: Vec<Elem> = (0..q)
            .map(|x| pow_with(&tables, x as Elem, p as u64))
            .collect();
        tables.frob = frob;
        Ok(FieldSpec { inner: Arc::new(tables) })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.inner.a
    }

    /// Field order p^a.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Reduction polynomial, ascending coefficients, monic.
    pub fn poly(&self) -> &[u32] {
        &self.inner.poly
    }

    pub fn is_valid(&self, x: Elem) -> bool {
        (x as u32) < self.inner.q
    }

    /// Image of an integer under Z -> GF(p).
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let t = &*self.inner;
        if t.p == 2 {
            return x ^ y;
        }
        if let Some(add) = &t.add {
            return add[x as usize * t.q as usize + y as usize];
        }
        let (p, mut x, mut y) = (t.p, x as u32, y as u32);
        let (mut r, mut place) = (0u32, 1u32);
        for _ in 0..t.a {
            r += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        r as Elem
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.inner.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x == 0 || y == 0 {
            return 0;
        }
        let t = &*self.inner;
        let s = t.log[x as usize] + t.log[y as usize];
        let n = t.q - 1;
        t.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.inner;
        let n = t.q - 1;
        Ok(t.exp[((n - t.log[x as usize]) % n) as usize])
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        pow_with(&self.inner, x, e)
    }

    /// x -> x^p.
    #[inline]
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.inner.frob[x as usize]
    }

    /// x -> x^(p^k).
    pub fn frobenius_pow(&self, mut x: Elem, k: u32) -> Elem {
        for _ in 0..k % self.inner.a {
            x = self.frobenius(x);
        }
        x
    }

    /// The fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        if self.inner.q == 2 {
            1
        } else {
            self.inner.exp[1]
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Elem) -> Result<u32> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[x as usize];
        Ok(n / gcd(n, l))
    }

    /// An element of multiplicative order exactly `n`, if `n` divides q-1.
    pub fn element_of_order(&self, n: u32) -> Option<Elem> {
        let m = self.inner.q - 1;
        if n == 0 || !m.is_multiple_of(n) {
            return None;
        }
        Some(self.pow(self.primitive_element(), (m / n) as u64))
    }

    /// Base-p digits of an element (its coordinates over GF(p)).
    pub fn to_digits(&self, x: Elem) -> Vec<u32> {
        digits(x as u32, self.inner.p, self.inner.a as usize)
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.inner.p + c) as Elem
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.inner.q).map(|x| x as Elem)
    }
}

fn pow_with(t: &Tables, x: Elem, e: u64) -> Elem {
    if e == 0 {
        return 1;
    }
    if x == 0 {
        return 0;
    }
    let n = (t.q - 1) as u64;
    t.exp[((t.log[x as usize] as u64 * (e % n)) % n) as usize]
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.a == other.inner.a && self.inner.poly == other.inner.poly)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.a == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{}; {:?})", self.inner.p, self.inner.a, self.inner.poly)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}
