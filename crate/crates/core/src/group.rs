//! Finite matrix groups given by generators.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matrix::Matrix;
use crate::schreier::{PointAction, StabChain};
use crate::space::{checked_space_size, decode, encode, space_size, IndexAction, SemilinearMap};
use crate::subspace::{Section, Subspace};

pub const DEFAULT_MAX_VECTORS: u64 = 1 << 22;
pub const DEFAULT_MAX_ELEMENTS: u64 = 1_000_000;
/// Random group-algebra elements tried before the exhaustive irreducibility test.
pub const MEATAXE_TRIES: usize = 200;
const MAX_WORD_LEN: usize = 8;

/// Resource caps; exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vectors: u64,
    pub max_elements: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vectors: DEFAULT_MAX_VECTORS, max_elements: DEFAULT_MAX_ELEMENTS }
    }
}

/// A group of (semi)linear maps of GF(q)^d.
#[derive(Clone, Debug)]
pub struct MatGroup {
    field: FieldSpec,
    dim: usize,
    gens: Vec<SemilinearMap>,
    label: Option<String>,
}

impl MatGroup {
    pub fn new(field: &FieldSpec, dim: usize, gens: Vec<Matrix>) -> Result<Self> {
        Self::semilinear(field, dim, gens.into_iter().map(SemilinearMap::linear).collect())
    }

    pub fn semilinear(field: &FieldSpec, dim: usize, gens: Vec<SemilinearMap>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidSpec("a group needs at least one generator".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.field() != field {
                return Err(Error::FieldMismatch(format!("{:?}", g.field()), format!("{field:?}")));
            }
            if g.matrix.rows() != dim || g.matrix.cols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    g.matrix.rows(),
                    g.matrix.cols()
                )));
            }
            if !g.matrix.is_invertible() {
                return Err(Error::NonInvertibleGenerator(i));
            }
        }
        Ok(MatGroup { field: field.clone(), dim, gens, label: None })
    }

    pub fn trivial(field: &FieldSpec, dim: usize) -> Self {
        MatGroup { field: field.clone(), dim, gens: vec![SemilinearMap::identity(field, dim)], label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[SemilinearMap] {
        &self.gens
    }

    pub fn is_linear(&self) -> bool {
        self.gens.iter().all(|g| g.is_linear())
    }

    /// Generator matrices, if every generator is linear.
    pub fn linear_generators(&self) -> Option<Vec<Matrix>> {
        self.is_linear().then(|| self.gens.iter().map(|g| g.matrix.clone()).collect())
    }

    /// Number of vectors, `q^d`.
    pub fn space_size(&self) -> u128 {
        space_size(&self.field, self.dim)
    }

    pub fn with_generators(&self, extra: Vec<SemilinearMap>) -> Result<MatGroup> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        let mut g = MatGroup::semilinear(&self.field, self.dim, gens)?;
        g.label = self.label.clone();
        Ok(g)
    }

    /// Adjoins the scalar matrices of GF(q)^*.
    pub fn with_scalars(&self) -> MatGroup {
        let w = self.field.primitive_element();
        self.with_generators(vec![SemilinearMap::linear(Matrix::scalar(&self.field, self.dim, w))])
            .expect("scalars are invertible")
    }

    /// The same group written over the prime field (dimension `a d`).
    pub fn blowup(&self) -> MatGroup {
        let prime = FieldSpec::prime(self.field.p()).expect("p is prime");
        let gens = self.prime_generators().into_iter().map(SemilinearMap::linear).collect();
        MatGroup { field: prime, dim: self.dim * self.field.degree() as usize, gens, label: self.label.clone() }
    }

    /// Generators as matrices over GF(p).
    pub fn prime_generators(&self) -> Vec<Matrix> {
        self.gens.iter().map(|g| g.blowup()).collect()
    }

    /// Field, dimension and generator matrices of the module used for
    /// spinning and splitting: the group itself when linear, its blowup otherwise.
    pub fn module(&self) -> (FieldSpec, usize, Vec<Matrix>) {
        match self.linear_generators() {
            Some(gens) => (self.field.clone(), self.dim, gens),
            None => {
                let b = self.blowup();
                let gens = b.linear_generators().expect("blowup is linear");
                (b.field, b.dim, gens)
            }
        }
    }

    fn index_actions(&self) -> Vec<IndexAction> {
        self.prime_generators().iter().map(IndexAction::new).collect()
    }

    /// Exact partition of all `q^d` vectors into orbits, scanning indices in
    /// ascending order so each representative is the least index of its orbit.
    pub fn orbit_partition(&self, limits: &Limits) -> Result<OrbitPartition> {
        let n = checked_space_size(&self.field, self.dim, limits.max_vectors)?;
        let actions = self.index_actions();
        let mut seen = vec![0u64; (n as usize).div_ceil(64)];
        let mark = |seen: &mut Vec<u64>, x: u64| -> bool {
            let (w, b) = ((x / 64) as usize, x % 64);
            let fresh = seen[w] >> b & 1 == 0;
            seen[w] |= 1 << b;
            fresh
        };
        let mut orbits = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if seen[(start / 64) as usize] >> (start % 64) & 1 == 1 {
                continue;
            }
            mark(&mut seen, start);
            queue.clear();
            queue.push(start);
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for a in &actions {
                    let y = a.apply(x);
                    if mark(&mut seen, y) {
                        queue.push(y);
                    }
                }
            }
            orbits.push(Orbit { representative: start, size: queue.len() as u64 });
        }
        Ok(OrbitPartition { total: n as u128, orbits })
    }

    /// Size of the orbit of the vector with the given index.
    pub fn orbit_size(&self, index: u64, limits: &Limits) -> Result<u64> {
        checked_space_size(&self.field, self.dim, limits.max_vectors)?;
        let actions = self.index_actions();
        let mut seen = HashSet::from([index]);
        let mut queue = VecDeque::from([index]);
        while let Some(x) = queue.pop_front() {
            for a in &actions {
                let y = a.apply(x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// Stabilizer chain of the faithful action on vector indices; the first base
    /// point is the least representative of a largest orbit.
    pub fn stabilizer_chain(&self, partition: &OrbitPartition) -> StabChain<Matrix> {
        let gens = self.prime_generators();
        let identity = Matrix::identity(gens[0].field(), gens[0].rows());
        let first = partition
            .orbits
            .iter()
            .filter(|o| o.size > 1)
            .max_by(|a, b| a.size.cmp(&b.size).then(b.representative.cmp(&a.representative)))
            .map(|o| o.representative);
        StabChain::new(&gens, identity, first)
    }

    pub fn order_with(&self, partition: &OrbitPartition) -> u128 {
        self.stabilizer_chain(partition).order()
    }

    pub fn group_order(&self, limits: &Limits) -> Result<u128> {
        let partition = self.orbit_partition(limits)?;
        Ok(self.order_with(&partition))
    }

    /// All elements, as matrices over GF(p), in breadth-first order from the identity.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Matrix>> {
        enumerate_closure(&self.prime_generators(), limits.max_elements)
    }

    pub fn is_p_exceptional(&self, p: u32, limits: &Limits) -> Result<PexcVerdict> {
        self.check_characteristic(p)?;
        let partition = self.orbit_partition(limits)?;
        let order = self.order_with(&partition);
        Ok(PexcVerdict::evaluate(p, order, &partition))
    }

    fn check_characteristic(&self, p: u32) -> Result<()> {
        if p != self.field.p() {
            return Err(Error::InvalidSpec(format!(
                "p = {p} differs from the characteristic {} of the group's field",
                self.field.p()
            )));
        }
        Ok(())
    }

    pub fn is_half_transitive(&self, limits: &Limits) -> Result<bool> {
        Ok(self.orbit_partition(limits)?.is_half_transitive())
    }

    pub fn is_transitive_nonzero(&self, limits: &Limits) -> Result<bool> {
        Ok(self.orbit_partition(limits)?.is_transitive_nonzero())
    }

    /// Least invariant subspace of the module containing `v`.
    pub fn spin(&self, v: &[Elem]) -> Subspace {
        let (f, n, gens) = self.module();
        spin_with(&f, n, &gens, v)
    }

    /// A proper nonzero submodule found by spinning one vector from every orbit.
    pub fn proper_submodule(&self, limits: &Limits) -> Result<Option<Subspace>> {
        let (f, n, gens) = self.module();
        if n <= 1 {
            return Ok(None);
        }
        let partition = self.orbit_partition(limits)?;
        for o in partition.orbits.iter().filter(|o| o.representative != 0) {
            let v = decode(&f, n, o.representative);
            let w = spin_with(&f, n, &gens, &v);
            if !w.is_full() {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    pub fn is_irreducible(&self, limits: &Limits) -> Result<bool> {
        Ok(self.proper_submodule(limits)?.is_none())
    }

    /// One meataxe step: a proper submodule with the actions on it and on the
    /// quotient, or `Irreducible`.
    pub fn split_constituent(&self, seed: u64, limits: &Limits) -> Result<Split> {
        let (f, n, gens) = self.module();
        if n <= 1 {
            return Ok(Split::Irreducible);
        }
        let transposed: Vec<Matrix> = gens.iter().map(|g| g.transpose()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MEATAXE_TRIES {
            let theta = random_algebra_element(&f, n, &gens, &mut rng);
            let ker = theta.kernel();
            if ker.is_empty() {
                continue;
            }
            for v in ker.iter().take(4) {
                let w = spin_with(&f, n, &gens, v);
                if !w.is_full() {
                    return Ok(self.split_along(&f, n, &gens, w));
                }
            }
            for v in theta.transpose().kernel().iter().take(4) {
                let u = spin_with(&f, n, &transposed, v);
                if !u.is_full() {
                    return Ok(self.split_along(&f, n, &gens, u.annihilator()));
                }
            }
        }
        match self.proper_submodule(limits)? {
            Some(w) => Ok(self.split_along(&f, n, &gens, w)),
            None => Ok(Split::Irreducible),
        }
    }

    fn split_along(&self, f: &FieldSpec, n: usize, gens: &[Matrix], w: Subspace) -> Split {
        let zero = Subspace::zero(f, n);
        let full = Subspace::full(f, n);
        let lower = Section::new(&zero, &w);
        let upper = Section::new(&w, &full);
        let sub_gens = gens.iter().map(|g| lower.action(g)).collect();
        let quot_gens = gens.iter().map(|g| upper.action(g)).collect();
        Split::Reducible {
            sub: MatGroup::new(f, lower.dim(), sub_gens).expect("restriction of invertible maps"),
            quotient: MatGroup::new(f, upper.dim(), quot_gens).expect("induced maps are invertible"),
            submodule: w,
        }
    }

    /// The subgroup generated by all elements of p-power order, as a group over GF(p).
    pub fn p_residual(&self, p: u32, limits: &Limits) -> Result<MatGroup> {
        if !crate::field::is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        let elements = self.elements(limits)?;
        let prime = FieldSpec::prime(self.field.p())?;
        let n = self.dim * self.field.degree() as usize;
        let mut p_part = 1u64;
        let mut rest = elements.len() as u64;
        while rest.is_multiple_of(p as u64) {
            p_part *= p as u64;
            rest /= p as u64;
        }
        let identity = Matrix::identity(&prime, n);
        let mut gens: Vec<Matrix> = Vec::new();
        let mut span = StabChain::new(&gens, identity.clone(), None);
        for x in &elements {
            if !x.pow(p_part).is_identity() || span.contains(x) {
                continue;
            }
            gens.push(x.clone());
            span = StabChain::new(&gens, identity.clone(), None);
        }
        let residual = if gens.is_empty() { MatGroup::trivial(&prime, n) } else { MatGroup::new(&prime, n, gens)? };
        Ok(match &self.label {
            Some(l) => residual.with_label(format!("O^p'({l})")),
            None => residual,
        })
    }

    /// First element of order exactly `k` in breadth-first order.
    pub fn element_of_order(&self, k: u64, limits: &Limits) -> Result<Option<Matrix>> {
        Ok(self.elements(limits)?.into_iter().find(|x| x.order(k) == Some(k)))
    }

    /// Seeded search for an element of order exactly `p` among powers of random
    /// words in the generators; the result is a matrix over GF(char).
    pub fn random_element_of_prime_order(&self, p: u32, seed: u64) -> Option<Matrix> {
        const TRIES: usize = 500;
        let gens = self.prime_generators();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = u64::try_from(self.space_size()).unwrap_or(u64::MAX).min(1 << 24);
        for _ in 0..TRIES {
            let len = rng.gen_range(1..=MAX_WORD_LEN);
            let mut w = gens[rng.gen_range(0..gens.len())].clone();
            for _ in 1..len {
                w = w.mul(&gens[rng.gen_range(0..gens.len())]);
            }
            if let Some(k) = w.order(cap) {
                if k % p as u64 == 0 {
                    return Some(w.pow(k / p as u64));
                }
            }
        }
        None
    }

    /// Checks that every nonzero vector is fixed by some conjugate of `t`.
    /// `t` is a GF(p)-matrix of order p on the blown-up space, or a linear
    /// map over the group's own field.
    pub fn fixed_point_cover(&self, p: u32, t: &Matrix, limits: &Limits) -> Result<FixedPointCover> {
        self.check_characteristic(p)?;
        let n = self.dim * self.field.degree() as usize;
        let t = if t.field() == &self.field && t.rows() == self.dim && t.cols() == self.dim {
            t.blowup()
        } else {
            t.clone()
        };
        if t.field().order() != p || t.rows() != n || t.cols() != n {
            return Err(Error::ShapeMismatch(format!("element must be a {n}x{n} matrix over GF({p})")));
        }
        if t.is_identity() || !t.pow(p as u64).is_identity() {
            return Err(Error::InvalidSpec(format!("element does not have order {p}")));
        }
        let size = checked_space_size(t.field(), n, limits.max_vectors)?;
        let gens = self.prime_generators();
        let inverses: Vec<Matrix> = gens.iter().map(|g| g.inverse().expect("invertible")).collect();
        let mut class = vec![t.clone()];
        let mut seen = HashSet::from([t]);
        let mut head = 0;
        while head < class.len() {
            let c = class[head].clone();
            head += 1;
            for (g, gi) in gens.iter().zip(&inverses) {
                let conj = gi.mul(&c).mul(g);
                if seen.insert(conj.clone()) {
                    if class.len() as u64 >= limits.max_elements {
                        return Err(Error::GroupTooLarge { cap: limits.max_elements });
                    }
                    class.push(conj);
                }
            }
        }
        let mut covered = vec![false; size as usize];
        covered[0] = true;
        let prime = class[0].field().clone();
        let identity = Matrix::identity(&prime, n);
        for c in &class {
            let fixed = Subspace::span(&prime, n, &c.sub(&identity)?.kernel());
            for v in fixed.elements() {
                covered[encode(&prime, &v) as usize] = true;
            }
        }
        let uncovered = covered.iter().position(|&c| !c).map(|i| i as u64);
        Ok(FixedPointCover { covered: uncovered.is_none(), class_size: class.len(), uncovered })
    }

    pub fn verify_fixed_point_cover(&self, p: u32, t: &Matrix, limits: &Limits) -> Result<bool> {
        Ok(self.fixed_point_cover(p, t, limits)?.covered)
    }
}

/// Breadth-first closure of a generating set under right multiplication.
pub fn enumerate_closure(gens: &[Matrix], cap: u64) -> Result<Vec<Matrix>> {
    let identity = Matrix::identity(gens[0].field(), gens[0].rows());
    let mut seen = HashSet::from([identity.clone()]);
    let mut out = vec![identity];
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = x.mul(g);
            if !seen.contains(&y) {
                if out.len() as u64 >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                seen.insert(y.clone());
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// Least subspace containing `v` and invariant under `gens`.
pub fn spin_with(f: &FieldSpec, n: usize, gens: &[Matrix], v: &[Elem]) -> Subspace {
    let mut w = Subspace::zero(f, n);
    let mut queue = Vec::new();
    if w.insert(v) {
        queue.push(v.to_vec());
    }
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.vec_mul(&x);
            if w.insert(&y) {
                queue.push(y);
            }
        }
        if w.is_full() {
            break;
        }
    }
    w
}

fn random_algebra_element(f: &FieldSpec, n: usize, gens: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
    let q = f.order();
    let mut theta = Matrix::scalar(f, n, rng.gen_range(0..q) as Elem);
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(1..=MAX_WORD_LEN);
        let mut word = gens[rng.gen_range(0..gens.len())].clone();
        for _ in 1..len {
            word = word.mul(&gens[rng.gen_range(0..gens.len())]);
        }
        let c = rng.gen_range(0..q) as Elem;
        theta = theta.add(&word.scale(c)).expect("same shape");
    }
    theta
}

impl PointAction for Matrix {
    fn image(&self, point: u64) -> u64 {
        let f = self.field();
        encode(f, &self.vec_mul(&decode(f, self.rows(), point)))
    }

    fn then(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        Matrix::inverse(self).expect("group elements are invertible")
    }

    fn is_identity(&self) -> bool {
        Matrix::is_identity(self)
    }

    fn least_moved_point(&self) -> Option<u64> {
        if Matrix::is_identity(self) {
            return None;
        }
        (1u64..).find(|&x| self.image(x) != x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub representative: u64,
    pub size: u64,
}

/// Orbits of a group on all vectors, ordered by least representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub total: u128,
    pub orbits: Vec<Orbit>,
}

impl OrbitPartition {
    /// Orbit size -> multiplicity, including the zero orbit.
    pub fn sizes(&self) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for o in &self.orbits {
            *m.entry(o.size).or_insert(0) += 1;
        }
        m
    }

    /// Sorted multiset of all orbit sizes.
    pub fn profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.orbits.iter().map(|o| o.size).collect();
        v.sort_unstable();
        v
    }

    /// Sorted multiset of the sizes of orbits on nonzero vectors.
    pub fn nonzero_profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.orbits.iter().filter(|o| o.representative != 0).map(|o| o.size).collect();
        v.sort_unstable();
        v
    }

    pub fn sum(&self) -> u128 {
        self.orbits.iter().map(|o| o.size as u128).sum()
    }

    pub fn is_conserved(&self) -> bool {
        self.sum() == self.total
    }

    pub fn all_sizes_divide(&self, order: u128) -> bool {
        self.orbits.iter().all(|o| order.is_multiple_of(o.size as u128))
    }

    /// All orbits on nonzero vectors have one common size.
    pub fn is_half_transitive(&self) -> bool {
        let nz = self.nonzero_profile();
        !nz.is_empty() && nz.iter().all(|&s| s == nz[0])
    }

    pub fn is_transitive_nonzero(&self) -> bool {
        self.nonzero_profile().len() == 1
    }

    /// The group moves no vector.
    pub fn is_trivial_action(&self) -> bool {
        self.orbits.iter().all(|o| o.size == 1)
    }

    /// First orbit (by representative) whose size is divisible by `p`.
    pub fn first_divisible(&self, p: u32) -> Option<Orbit> {
        self.orbits.iter().find(|o| o.size % p as u64 == 0).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PexcStatus {
    PExceptional,
    OrderNotDivisibleByP,
    BadOrbit,
}

impl PexcStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PexcStatus::PExceptional => "P_EXCEPTIONAL",
            PexcStatus::OrderNotDivisibleByP => "ORDER_NOT_DIVISIBLE_BY_P",
            PexcStatus::BadOrbit => "BAD_ORBIT",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PexcVerdict {
    pub status: PexcStatus,
    pub p: u32,
    pub order: u128,
    /// Representative and size of an orbit of size divisible by p.
    pub witness: Option<Orbit>,
}

impl PexcVerdict {
    pub fn evaluate(p: u32, order: u128, partition: &OrbitPartition) -> Self {
        let (status, witness) = if !order.is_multiple_of(p as u128) {
            (PexcStatus::OrderNotDivisibleByP, None)
        } else {
            match partition.first_divisible(p) {
                Some(o) => (PexcStatus::BadOrbit, Some(o)),
                None => (PexcStatus::PExceptional, None),
            }
        };
        PexcVerdict { status, p, order, witness }
    }

    pub fn is_p_exceptional(&self) -> bool {
        self.status == PexcStatus::PExceptional
    }
}

#[derive(Clone, Debug)]
pub enum Split {
    Reducible { sub: MatGroup, quotient: MatGroup, submodule: Subspace },
    Irreducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointCover {
    pub covered: bool,
    pub class_size: usize,
    /// Least index of a nonzero vector fixed by no conjugate.
    pub uncovered: Option<u64>,
}
