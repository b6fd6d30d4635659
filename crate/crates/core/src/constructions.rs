//! Constructive families: semilinear groups of GF(p^d), wreath and tensor
//! products, permutation modules, SL2(5) < SL2(9) and small normalizers.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, Elem, FieldSpec};
use crate::group::{enumerate_closure, Limits, MatGroup};
use crate::matrix::{frobenius_matrix, regular_representation, Matrix, MAX_DIM};
use crate::perm::PermGroup;
use crate::space::{decode, SemilinearMap};
use crate::subspace::{Section, Subspace};

/// `K = <omega^((p^s-1)/j), phi^s>` acting on GF(p^d) as a GF(p)-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaL1Spec {
    pub p: u32,
    pub d: u32,
    pub s: u32,
    pub j: u64,
    /// Also adjoin the full Frobenius `phi`.
    #[serde(default)]
    pub include_full_frobenius: bool,
}

impl GammaL1Spec {
    pub fn new(p: u32, d: u32, s: u32, j: u64) -> Self {
        GammaL1Spec { p, d, s, j, include_full_frobenius: false }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return Err(Error::InvalidSpec(format!("{} is not prime", self.p)));
        }
        if self.d == 0 || !self.d.is_multiple_of(self.p) {
            return Err(Error::InvalidSpec(format!("p = {} must divide d = {}", self.p, self.d)));
        }
        if self.s == 0 || !self.d.is_multiple_of(self.s) {
            return Err(Error::InvalidSpec(format!("s = {} must divide d = {}", self.s, self.d)));
        }
        let ps1 = (self.p as u64).pow(self.s) - 1;
        if self.j == 0 || !ps1.is_multiple_of(self.j) {
            return Err(Error::InvalidSpec(format!("j = {} must divide p^s - 1 = {ps1}", self.j)));
        }
        Ok(())
    }

    /// Nonzero orbit sizes `(p^s-1)/j` copies of `j (p^d-1)/(p^s-1)`;
    /// `None` when the full Frobenius is adjoined.
    pub fn expected_nonzero_profile(&self) -> Option<Vec<u64>> {
        if self.include_full_frobenius {
            return None;
        }
        let ps1 = (self.p as u64).pow(self.s) - 1;
        let pd1 = (self.p as u64).pow(self.d) - 1;
        Some(vec![self.j * pd1 / ps1; (ps1 / self.j) as usize])
    }
}

pub fn gamma_l1(spec: &GammaL1Spec) -> Result<MatGroup> {
    spec.validate()?;
    let big = FieldSpec::new(spec.p, spec.d)?;
    let prime = FieldSpec::prime(spec.p)?;
    let ps1 = (spec.p as u64).pow(spec.s) - 1;
    let w = big.pow(big.primitive_element(), ps1 / spec.j);
    let mut gens = vec![regular_representation(&big, w), frobenius_matrix(&big, spec.s)];
    if spec.include_full_frobenius {
        gens.push(frobenius_matrix(&big, 1));
    }
    let label = format!("GammaL1(p={}, d={}, s={}, j={})", spec.p, spec.d, spec.s, spec.j);
    Ok(MatGroup::new(&prime, spec.d as usize, gens)?.with_label(label))
}

/// Permutation matrices `e_i -> e_{g(i)}` over `field`.
pub fn permutation_module(perm: &PermGroup, field: &FieldSpec) -> Result<MatGroup> {
    let gens = perm.generators().iter().map(|g| Matrix::permutation(field, g)).collect();
    MatGroup::new(field, perm.degree(), gens)
}

/// The deleted permutation module `S / (S cap T)` over GF(p), where `S` is
/// the zero-sum submodule and `T` the constants.
pub fn deleted_permutation_module(perm: &PermGroup, p: u32) -> Result<MatGroup> {
    let f = FieldSpec::prime(p)?;
    let c = perm.degree();
    if c < 3 {
        return Err(Error::InvalidSpec(format!("degree {c} is too small for a deleted module")));
    }
    let module = permutation_module(perm, &f)?;
    let zero_sum: Vec<Vec<Elem>> = (1..c)
        .map(|i| {
            let mut v = vec![0; c];
            v[0] = 1;
            v[i] = f.neg(1);
            v
        })
        .collect();
    let s = Subspace::span(&f, c, &zero_sum);
    let t = Subspace::span(&f, c, &[vec![1; c]]);
    let lower = if t.is_subspace_of(&s) { t } else { Subspace::zero(&f, c) };
    let section = Section::new(&lower, &s);
    let gens = module.linear_generators().expect("permutation matrices are linear");
    let gens = gens.iter().map(|g| section.action(g)).collect();
    let label = format!("deleted module of {} over GF({p})", perm.label().unwrap_or("H"));
    Ok(MatGroup::new(&f, section.dim(), gens)?.with_label(label))
}

/// `G_1 wr H` on `V_1^n`.
#[derive(Clone, Debug)]
pub struct WreathSpec {
    pub inner: MatGroup,
    pub top: PermGroup,
}

/// Inner generators sit in the least block of each top orbit; the top group
/// permutes blocks. Semilinear inner groups are used through their blowup.
pub fn wreath(spec: &WreathSpec) -> Result<MatGroup> {
    let (f, d1, inner) = spec.inner.module();
    let n = spec.top.degree();
    let dim = d1.checked_mul(n).filter(|&d| d <= MAX_DIM).ok_or(Error::DimensionTooLarge(d1 * n))?;
    let mut gens = Vec::new();
    for orbit in spec.top.point_orbits() {
        let block = orbit[0];
        for g in &inner {
            let mut m = Matrix::identity(&f, dim);
            for r in 0..d1 {
                for c in 0..d1 {
                    m.set(block * d1 + r, block * d1 + c, g.get(r, c));
                }
            }
            gens.push(m);
        }
    }
    for pi in spec.top.generators() {
        let perm: Vec<usize> = (0..dim).map(|x| pi[x / d1] * d1 + x % d1).collect();
        gens.push(Matrix::permutation(&f, &perm));
    }
    let label = format!("{} wr {}", spec.inner.label().unwrap_or("G1"), spec.top.label().unwrap_or("H"));
    Ok(MatGroup::new(&f, dim, gens)?.with_label(label))
}

/// For an inner group transitive on nonzero vectors, checks every orbit of
/// the wreath product against `|V_1^#|^k * delta`, with `delta` the size of
/// the top-group orbit of the support. Returns `Ok(false)` on a mismatch and
/// `InvalidSpec` if the inner group is not transitive.
pub fn verify_wreath_orbits(spec: &WreathSpec, group: &MatGroup, limits: &Limits) -> Result<bool> {
    let inner_sharp = spec.inner.space_size() - 1;
    if !spec.inner.is_transitive_nonzero(limits)? {
        return Err(Error::InvalidSpec("inner group is not transitive on nonzero vectors".into()));
    }
    let partition = group.orbit_partition(limits)?;
    let (f, d1, _) = spec.inner.module();
    let n = spec.top.degree();
    for orbit in &partition.orbits {
        if orbit.representative == 0 {
            continue;
        }
        let v = decode(&f, d1 * n, orbit.representative);
        let support: Vec<usize> = (0..n).filter(|&b| v[b * d1..(b + 1) * d1].iter().any(|&x| x != 0)).collect();
        let delta = set_orbit_size(&spec.top, &support);
        let expected = inner_sharp.pow(support.len() as u32) * delta as u128;
        if expected != orbit.size as u128 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn set_orbit_size(h: &PermGroup, set: &[usize]) -> usize {
    let start: Vec<usize> = set.to_vec();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for g in h.generators() {
            let mut img: Vec<usize> = s.iter().map(|&x| g[x]).collect();
            img.sort_unstable();
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    seen.len()
}

/// Matrix of `u (x) w -> w (x) u` on `F^m (x) F^m`.
pub fn tensor_swap(field: &FieldSpec, m: usize) -> Matrix {
    let perm: Vec<usize> = (0..m * m).map(|x| (x % m) * m + x / m).collect();
    Matrix::permutation(field, &perm)
}

/// `A (x) B` acting on `U (x) W`, optionally with the factor swap.
pub fn tensor_product_group(a: &MatGroup, b: &MatGroup, with_swap: bool) -> Result<MatGroup> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let (ga, gb) = match (a.linear_generators(), b.linear_generators()) {
        (Some(ga), Some(gb)) => (ga, gb),
        _ => return Err(Error::InvalidSpec("tensor factors must be linear".into())),
    };
    let (m, n) = (a.dim(), b.dim());
    if with_swap && m != n {
        return Err(Error::ShapeMismatch(format!("swap needs equal dimensions, got {m} and {n}")));
    }
    let dim = m.checked_mul(n).filter(|&d| d <= MAX_DIM).ok_or(Error::DimensionTooLarge(m * n))?;
    let f = a.field();
    let (iu, iw) = (Matrix::identity(f, m), Matrix::identity(f, n));
    let mut gens = Vec::new();
    for g in &ga {
        gens.push(g.kronecker(&iw)?);
    }
    for g in &gb {
        gens.push(iu.kronecker(g)?);
    }
    if with_swap {
        gens.push(tensor_swap(f, m));
    }
    let label = format!("{} (x) {}", a.label().unwrap_or("A"), b.label().unwrap_or("B"));
    Ok(MatGroup::new(f, dim, gens)?.with_label(label))
}

/// Tensor rank of `v` in `U (x) W` with the subspaces `U_0`, `W_0` it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWeightResult {
    pub k: usize,
    pub u0_basis: Vec<Vec<Elem>>,
    pub w0_basis: Vec<Vec<Elem>>,
}

/// Coordinates are `v[i * dim_w + j]` for `u_i (x) w_j`.
pub fn tensor_weight(field: &FieldSpec, v: &[Elem], dim_u: usize, dim_w: usize) -> Result<TensorWeightResult> {
    if v.len() != dim_u * dim_w {
        return Err(Error::ShapeMismatch(format!("vector of length {} is not {dim_u} x {dim_w}", v.len())));
    }
    let rows: Vec<Vec<Elem>> = v.chunks(dim_w).map(|r| r.to_vec()).collect();
    let cols: Vec<Vec<Elem>> = (0..dim_w).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let w0 = Subspace::span(field, dim_w, &rows);
    let u0 = Subspace::span(field, dim_u, &cols);
    debug_assert_eq!(u0.dim(), w0.dim());
    Ok(TensorWeightResult { k: w0.dim(), u0_basis: u0.basis().to_vec(), w0_basis: w0.basis().to_vec() })
}

/// `(GL_1(q^2) o GL_1(q^2)).2` inside `GL_4(q)`, `q` even: multiplication by
/// `omega` of order `q + 1` on each factor of `GF(q^2) (x) GF(q^2)`, the
/// simultaneous field involution, and the scalars of GF(q).
pub fn c4_pair_group(q: u32) -> Result<MatGroup> {
    if q < 2 || !q.is_power_of_two() {
        return Err(Error::InvalidSpec(format!("q = {q} must be a power of 2")));
    }
    let f = FieldSpec::new(2, q.trailing_zeros())?;
    let (m_omega, tau) = f
        .elements()
        .find_map(|lambda| {
            let m = Matrix::from_rows(&f, &[vec![0, 1], vec![1, lambda]]).ok()?;
            (m.order(q as u64 + 1) == Some(q as u64 + 1))
                .then(|| (m, Matrix::from_rows(&f, &[vec![1, 0], vec![lambda, 1]]).expect("2x2")))
        })
        .ok_or_else(|| Error::InvalidSpec(format!("no element of order {} found", q + 1)))?;
    let i2 = Matrix::identity(&f, 2);
    let gens = vec![
        m_omega.kronecker(&i2)?,
        i2.kronecker(&m_omega)?,
        tau.kronecker(&tau)?,
        Matrix::scalar(&f, 4, f.primitive_element()),
    ];
    Ok(MatGroup::new(&f, 4, gens)?.with_label(format!("(GL1({}) o GL1({})).2", q * q, q * q)))
}

/// Diagonal torus `GF(q)^* x GF(q)^*` on `GF(q)^2`, optionally with the
/// Frobenius automorphism.
pub fn torus(q_field: &FieldSpec, with_frobenius: bool) -> Result<MatGroup> {
    let w = q_field.primitive_element();
    let mut gens = vec![
        SemilinearMap::linear(Matrix::diagonal(q_field, &[w, 1])),
        SemilinearMap::linear(Matrix::diagonal(q_field, &[1, w])),
    ];
    if with_frobenius {
        gens.push(SemilinearMap::frobenius(q_field, 2, 1));
    }
    let label = if with_frobenius { format!("T.<phi> over {q_field}") } else { format!("T over {q_field}") };
    Ok(MatGroup::semilinear(q_field, 2, gens)?.with_label(label))
}

/// `<s (x) 1, 1 (x) s, t (x) t^-1, swap>` (`7^2.S_3`) or
/// `<s (x) 1, 1 (x) s, t (x) 1, 1 (x) t, swap>` (`(7.3)^2.2`) on
/// `GF(2)^3 (x) GF(2)^3`, with `s` a Singer cycle and `t` the Frobenius.
pub fn singer_tensor_group(full_normalizers: bool) -> Result<MatGroup> {
    let f8 = FieldSpec::new(2, 3)?;
    let f2 = FieldSpec::prime(2)?;
    let s = regular_representation(&f8, f8.primitive_element());
    let t = frobenius_matrix(&f8, 1);
    let i3 = Matrix::identity(&f2, 3);
    let mut gens = vec![s.kronecker(&i3)?, i3.kronecker(&s)?];
    if full_normalizers {
        gens.push(t.kronecker(&i3)?);
        gens.push(i3.kronecker(&t)?);
    } else {
        gens.push(t.kronecker(&t.inverse()?)?);
    }
    gens.push(tensor_swap(&f2, 3));
    let label = if full_normalizers { "(7.3)^2.2" } else { "7^2.S3" };
    Ok(MatGroup::new(&f2, 9, gens)?.with_label(label))
}

/// All of `SL_2(q)` by brute force.
pub fn sl2_elements(field: &FieldSpec) -> Vec<Matrix> {
    let q = field.order() as Elem;
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if field.sub(field.mul(a, d), field.mul(b, c)) == 1 {
                        out.push(Matrix::from_rows(field, &[vec![a, b], vec![c, d]]).expect("2x2"));
                    }
                }
            }
        }
    }
    out
}

/// A subgroup `SL_2(5)` of `SL_2(9)`: random pairs of elements of orders 5
/// and 4 are closed until one generates a group of order 120 containing `-I`.
pub fn sl2_5_in_sl2_9(seed: u64) -> Result<MatGroup> {
    const ATTEMPTS: usize = 1000;
    let f9 = FieldSpec::new(3, 2)?;
    let all = sl2_elements(&f9);
    let of_order = |k: u64| -> Vec<Matrix> { all.iter().filter(|m| m.order(k) == Some(k)).cloned().collect() };
    let (fives, fours) = (of_order(5), of_order(4));
    let minus = Matrix::scalar(&f9, 2, f9.neg(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let x = fives.choose(&mut rng).expect("SL2(9) has elements of order 5");
        let y = fours.choose(&mut rng).expect("SL2(9) has elements of order 4");
        let gens = vec![x.clone(), y.clone()];
        if let Ok(h) = enumerate_closure(&gens, 121) {
            if h.len() == 120 && h.contains(&minus) {
                return Ok(MatGroup::new(&f9, 2, gens)?.with_label("SL2(5)"));
            }
        }
    }
    Err(Error::InvalidSpec("no SL2(5) found in SL2(9)".into()))
}

/// `SL_2(5)` written over GF(3) in dimension 4, optionally joined with the
/// blown-up scalars of GF(9).
pub fn sl2_5_gl4_3(seed: u64, extension_scalars: bool) -> Result<MatGroup> {
    let h = sl2_5_in_sl2_9(seed)?;
    let h = if extension_scalars { h.with_scalars() } else { h };
    let label = if extension_scalars { "SL2(5).GF(9)^* < GL4(3)" } else { "SL2(5) < GL4(3)" };
    Ok(h.blowup().with_label(label))
}
