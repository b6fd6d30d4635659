//! Extraspecial groups `R`, the form they induce on `R/Z(R)`, and lifts of
//! automorphisms of `R` to its normalizer in GL(V).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, Elem, FieldSpec};
use crate::group::{enumerate_closure, MatGroup};
use crate::matrix::{right_nullspace, Matrix, MAX_DIM};
use crate::schreier::{PointAction, StabChain};
use crate::space::{encode, SemilinearMap};

/// Upper bound on `|R|` for element labelling.
pub const MAX_EXTRASPECIAL_ORDER: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraspecialVariant {
    OddExponentR,
    Sym4Circ,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraspecialSpec {
    pub r: u32,
    pub m: u32,
    pub variant: ExtraspecialVariant,
    pub q: u32,
}

impl ExtraspecialSpec {
    pub fn validate(&self) -> Result<FieldSpec> {
        use ExtraspecialVariant::*;
        if !is_prime(self.r as u64) || self.m == 0 {
            return Err(Error::InvalidSpec(format!("need r prime and m >= 1, got r = {}, m = {}", self.r, self.m)));
        }
        let field = FieldSpec::of_order(self.q)?;
        let ok = match self.variant {
            OddExponentR => self.r % 2 == 1 && self.q % self.r == 1,
            Plus | Minus => self.r == 2 && self.q % 2 == 1,
            Sym4Circ => self.r == 2 && self.q % 4 == 1,
        };
        if !ok {
            return Err(Error::InvalidSpec(format!(
                "q = {} does not satisfy the congruence for r = {} and {:?}",
                self.q, self.r, self.variant
            )));
        }
        let dim = (self.r as usize).checked_pow(self.m).filter(|&d| d <= MAX_DIM);
        if dim.is_none() {
            return Err(Error::DimensionTooLarge(usize::MAX));
        }
        Ok(field)
    }

    pub fn dim(&self) -> usize {
        (self.r as usize).pow(self.m)
    }
}

/// An element of `Aut(R)` acting on `R/Z(R)`, possibly realized together
/// with the Frobenius power `frob` of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopElement {
    pub frob: u32,
    /// Matrix over GF(r) acting on row vectors of `R/Z(R)`.
    pub action: Matrix,
}

/// `R` with every element labelled as `M(e) * lambda^c`, where
/// `M(e) = prod_k basis[k]^(e_k)` and `lambda` generates `Z(R)`.
#[derive(Clone, Debug)]
pub struct Extraspecial {
    spec: ExtraspecialSpec,
    field: FieldSpec,
    gf_r: FieldSpec,
    basis: Vec<Matrix>,
    center: Elem,
    center_order: u32,
    labels: HashMap<Matrix, (Vec<Elem>, u32)>,
}

fn embed(field: &FieldSpec, factors: usize, k: usize, x: &Matrix) -> Matrix {
    let small = Matrix::identity(field, x.rows());
    let mut out = Matrix::identity(field, 1);
    for i in 0..factors {
        out = out.kronecker(if i == k { x } else { &small }).expect("dimension checked");
    }
    out
}

impl Extraspecial {
    pub fn new(spec: ExtraspecialSpec) -> Result<Self> {
        use ExtraspecialVariant::*;
        let field = spec.validate()?;
        let f = &field;
        let m = spec.m as usize;
        let (pairs, center, center_order) = if spec.variant == OddExponentR {
            let r = spec.r as usize;
            let zeta = f.element_of_order(spec.r).expect("q = 1 mod r");
            let shift: Vec<usize> = (0..r).map(|i| (i + 1) % r).collect();
            let x = Matrix::permutation(f, &shift);
            let z = Matrix::diagonal(f, &(0..r).map(|i| f.pow(zeta, i as u64)).collect::<Vec<_>>());
            (vec![(x, z); m], zeta, spec.r)
        } else {
            let minus = f.neg(1);
            let dihedral = (
                Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]])?,
                Matrix::from_rows(f, &[vec![1, 0], vec![0, minus]])?,
            );
            let mut pairs = vec![dihedral; m];
            if spec.variant == Minus {
                let (a, b) = f
                    .elements()
                    .flat_map(|a| f.elements().map(move |b| (a, b)))
                    .find(|&(a, b)| f.add(f.mul(a, a), f.mul(b, b)) == minus)
                    .expect("-1 is a sum of two squares in a finite field");
                pairs[m - 1] = (
                    Matrix::from_rows(f, &[vec![0, 1], vec![minus, 0]])?,
                    Matrix::from_rows(f, &[vec![a, b], vec![b, f.neg(a)]])?,
                );
            }
            if spec.variant == Sym4Circ {
                (pairs, f.element_of_order(4).expect("q = 1 mod 4"), 4)
            } else {
                (pairs, minus, 2)
            }
        };
        let mut basis: Vec<Matrix> = pairs.iter().enumerate().map(|(k, (x, _))| embed(f, m, k, x)).collect();
        basis.extend(pairs.iter().enumerate().map(|(k, (_, z))| embed(f, m, k, z)));
        let gf_r = FieldSpec::prime(spec.r)?;
        let mut es = Extraspecial { spec, field: field.clone(), gf_r, basis, center, center_order, labels: HashMap::new() };
        let size = (spec.r as u64).pow(2 * spec.m) * center_order as u64;
        if size > MAX_EXTRASPECIAL_ORDER {
            return Err(Error::GroupTooLarge { cap: MAX_EXTRASPECIAL_ORDER });
        }
        let dim = es.dim();
        for idx in 0..(spec.r as u64).pow(2 * spec.m) {
            let e = crate::space::decode(&es.gf_r, 2 * m, idx);
            let base = es.element(&e);
            let mut lam = Matrix::identity(f, dim);
            for c in 0..center_order {
                es.labels.insert(base.mul(&lam), (e.clone(), c));
                lam = lam.scale(center);
            }
        }
        let enumerated = enumerate_closure(&es.generators(), MAX_EXTRASPECIAL_ORDER)?;
        if es.labels.len() as u64 != size || enumerated.len() as u64 != size {
            return Err(Error::InvalidSpec(format!(
                "construction produced {} labelled and {} enumerated elements, expected {size}",
                es.labels.len(),
                enumerated.len()
            )));
        }
        Ok(es)
    }

    pub fn spec(&self) -> &ExtraspecialSpec {
        &self.spec
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// GF(r), the field of `R/Z(R)`.
    pub fn quotient_field(&self) -> &FieldSpec {
        &self.gf_r
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// `x_1, .., x_m, z_1, .., z_m`.
    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn order(&self) -> u64 {
        self.labels.len() as u64
    }

    fn generators(&self) -> Vec<Matrix> {
        let mut gens = self.basis.clone();
        if self.spec.variant == ExtraspecialVariant::Sym4Circ {
            gens.push(Matrix::scalar(&self.field, self.dim(), self.center));
        }
        gens
    }

    pub fn group(&self) -> MatGroup {
        let label = format!("{}^(1+{}) over GF({})", self.spec.r, 2 * self.spec.m, self.spec.q);
        MatGroup::new(&self.field, self.dim(), self.generators()).expect("invertible").with_label(label)
    }

    /// `M(e)`.
    pub fn element(&self, e: &[Elem]) -> Matrix {
        let mut out = Matrix::identity(&self.field, self.dim());
        for (b, &k) in self.basis.iter().zip(e) {
            out = out.mul(&b.pow(k as u64));
        }
        out
    }

    /// `(e, c)` with `x = M(e) lambda^c`, if `x` lies in `R`.
    pub fn label(&self, x: &Matrix) -> Option<&(Vec<Elem>, u32)> {
        self.labels.get(x)
    }

    /// The commutator form on `R/Z(R)` with values in GF(r).
    pub fn commutator_form(&self, e: &[Elem], f: &[Elem]) -> Elem {
        let (x, y) = (self.element(e), self.element(f));
        let comm = x.inverse().expect("invertible").mul(&y.inverse().expect("invertible")).mul(&x).mul(&y);
        let (v, c) = self.label(&comm).expect("commutators are central");
        debug_assert!(v.iter().all(|&a| a == 0));
        (c / (self.center_order / self.spec.r)) as Elem
    }

    /// For `2^(1+2m)_±`, the quadratic form `x -> [x^2 = -1]`.
    pub fn quadratic_form(&self, e: &[Elem]) -> Option<Elem> {
        if !matches!(self.spec.variant, ExtraspecialVariant::Plus | ExtraspecialVariant::Minus) {
            return None;
        }
        let x = self.element(e);
        let (_, c) = self.label(&x.mul(&x)).expect("squares are central");
        Some(*c as Elem)
    }

    fn unit(&self, k: usize) -> Vec<Elem> {
        let mut e = vec![0; 2 * self.spec.m as usize];
        e[k] = 1;
        e
    }

    /// Whether `a` preserves the commutator form and, for `r = 2` without
    /// the circle factor, the quadratic form.
    pub fn preserves_form(&self, a: &Matrix) -> bool {
        let n = 2 * self.spec.m as usize;
        if a.rows() != n || a.cols() != n || a.field() != &self.gf_r || !a.is_invertible() {
            return false;
        }
        let rows = a.to_rows();
        for i in 0..n {
            if self.quadratic_form(&rows[i]) != self.quadratic_form(&self.unit(i)) {
                return false;
            }
            for j in 0..n {
                if self.commutator_form(&rows[i], &rows[j]) != self.commutator_form(&self.unit(i), &self.unit(j)) {
                    return false;
                }
            }
        }
        true
    }

    /// The action on `R/Z(R)` induced by a map normalizing `R`.
    pub fn induced_action(&self, conj: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
        let rows = self
            .basis
            .iter()
            .map(|b| self.label(&conj(b)).map(|(e, _)| e.clone()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidSpec("map does not normalize R".into()))?;
        Matrix::from_rows(&self.gf_r, &rows)
    }

    /// Action of the coordinatewise Frobenius `x -> x^p` on `R/Z(R)`.
    pub fn frobenius_action(&self) -> Result<Matrix> {
        self.induced_action(|b| b.frobenius(1))
    }

    /// A matrix `g` with `g^-1 M(e) g = M(e a)` modulo `Z(R)`.
    pub fn lift(&self, a: &Matrix) -> Result<Matrix> {
        if !self.preserves_form(a) {
            return Err(Error::InvalidSpec("action does not preserve the form on R/Z(R)".into()));
        }
        let images: Vec<Matrix> = a.to_rows().iter().map(|row| self.element(row)).collect();
        lift_outer(&self.basis, &images)
    }

    /// `R` extended by lifts of `tops`. An element with `frob = k` is realized
    /// as the Frobenius power `k` followed by a linear lift.
    pub fn extension(&self, tops: &[TopElement]) -> Result<MatGroup> {
        let sigma = self.frobenius_action()?;
        let sigma_inv = sigma.inverse()?;
        let mut gens: Vec<SemilinearMap> = self.generators().into_iter().map(SemilinearMap::linear).collect();
        for t in tops {
            let linear_part = sigma_inv.pow(t.frob as u64).mul(&t.action);
            let g = self.lift(&linear_part)?;
            gens.push(SemilinearMap::new(t.frob, g));
        }
        MatGroup::semilinear(&self.field, self.dim(), gens)
    }

    /// Generators of the isometry group of the form on `R/Z(R)` (the
    /// quadratic form for `2^(1+2m)_±`, the symplectic form otherwise),
    /// chosen greedily among transvections.
    pub fn isometry_generators(&self) -> Vec<Matrix> {
        let n = 2 * self.spec.m as usize;
        let r = &self.gf_r;
        let quadratic = self.quadratic_form(&self.unit(0)).is_some();
        let identity = Matrix::identity(r, n);
        let mut gens: Vec<Matrix> = Vec::new();
        let mut chain = StabChain::new(&gens, identity.clone(), None);
        for idx in 1..(self.spec.r as u64).pow(n as u32) {
            let v = crate::space::decode(r, n, idx);
            if quadratic && self.quadratic_form(&v) != Some(1) {
                continue;
            }
            let rows: Vec<Vec<Elem>> = (0..n)
                .map(|i| {
                    let b = self.commutator_form(&self.unit(i), &v);
                    let mut row = self.unit(i);
                    for (x, &y) in row.iter_mut().zip(&v) {
                        *x = r.add(*x, r.mul(b, y));
                    }
                    row
                })
                .collect();
            let t = Matrix::from_rows(r, &rows).expect("square");
            if !chain.contains(&t) {
                gens.push(t);
                chain = StabChain::new(&gens, identity.clone(), None);
            }
        }
        gens
    }

    /// Generators of the stabilizer, in the isometry group of the quadratic
    /// form, of the least nonzero singular vector; with `dickson_kernel` the
    /// elements with even `rank(1 + a)` only.
    pub fn singular_stabilizer(&self, dickson_kernel: bool) -> Result<Vec<Matrix>> {
        let n = 2 * self.spec.m as usize;
        let r = &self.gf_r;
        if self.quadratic_form(&self.unit(0)).is_none() {
            return Err(Error::InvalidSpec("needs a quadratic form on R/Z(R)".into()));
        }
        let v0 = (1..(2u64).pow(n as u32))
            .map(|i| crate::space::decode(r, n, i))
            .find(|v| self.quadratic_form(v) == Some(0))
            .ok_or_else(|| Error::InvalidSpec("no singular vector".into()))?;
        let iso = self.isometry_generators();
        let identity = Matrix::identity(r, n);
        let chain = StabChain::new(&iso, identity.clone(), Some(encode(r, &v0)));
        let stab = chain.stabilizer_generators(1);
        if !dickson_kernel {
            return Ok(stab);
        }
        let dickson = |a: &Matrix| a.add(&identity).expect("same shape").rank() % 2;
        let odd = stab.iter().find(|g| dickson(g) == 1).cloned();
        let mut out = Vec::new();
        for g in &stab {
            match (&odd, dickson(g)) {
                (_, 0) => {
                    out.push(g.clone());
                    if let Some(o) = &odd {
                        out.push(o.mul(g).mul(&PointAction::inverse(o)));
                    }
                }
                (Some(o), _) => {
                    out.push(g.mul(&PointAction::inverse(o)));
                    out.push(o.mul(g));
                }
                (None, _) => unreachable!("an odd generator exists when one is found"),
            }
        }
        out.retain(|g| !g.is_identity());
        Ok(out)
    }
}

/// Solves `X_i g = g Y_i` for all `i` (equivalently `g^-1 X_i g = Y_i`) and
/// returns an invertible solution, or `NoLift` if every solution is singular.
pub fn lift_outer(gens: &[Matrix], images: &[Matrix]) -> Result<Matrix> {
    if gens.len() != images.len() || gens.is_empty() {
        return Err(Error::ShapeMismatch("need one image per generator".into()));
    }
    let f = gens[0].field().clone();
    let n = gens[0].rows();
    let mut rows = Vec::with_capacity(gens.len() * n * n);
    for (x, y) in gens.iter().zip(images) {
        if x.field() != &f || y.field() != &f || x.rows() != n || y.rows() != n {
            return Err(Error::ShapeMismatch("generators and images must be n x n over one field".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![0 as Elem; n * n];
                for c in 0..n {
                    row[c * n + b] = f.add(row[c * n + b], x.get(a, c));
                    row[a * n + c] = f.sub(row[a * n + c], y.get(c, b));
                }
                rows.push(row);
            }
        }
    }
    let solutions = right_nullspace(&f, rows, n * n);
    let mut candidates: Vec<Vec<Elem>> = solutions.clone();
    if solutions.len() > 1 {
        let sum = solutions.iter().fold(vec![0; n * n], |acc, s| acc.iter().zip(s).map(|(&a, &b)| f.add(a, b)).collect());
        candidates.push(sum);
    }
    candidates
        .into_iter()
        .map(|v| Matrix::new(&f, n, n, v).expect("n x n"))
        .find(|g| g.is_invertible())
        .ok_or(Error::NoLift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Limits;
    use ExtraspecialVariant::*;

    #[test]
    fn orders_and_dimensions() {
        let e = Extraspecial::new(ExtraspecialSpec { r: 3, m: 1, variant: OddExponentR, q: 4 }).unwrap();
        assert_eq!((e.order(), e.dim()), (27, 3));
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 2, variant: Minus, q: 3 }).unwrap();
        assert_eq!((e.order(), e.dim()), (32, 4));
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 3, variant: Plus, q: 3 }).unwrap();
        assert_eq!(e.order(), 128);
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 1, variant: Sym4Circ, q: 5 }).unwrap();
        assert_eq!(e.order(), 16);
        assert!(ExtraspecialSpec { r: 3, m: 1, variant: OddExponentR, q: 5 }.validate().is_err());
    }

    #[test]
    fn odd_r_is_irreducible() {
        let e = Extraspecial::new(ExtraspecialSpec { r: 3, m: 1, variant: OddExponentR, q: 4 }).unwrap();
        assert!(e.group().is_irreducible(&Limits::default()).unwrap());
    }

    #[test]
    fn lift_of_identity_is_scalar() {
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 2, variant: Minus, q: 3 }).unwrap();
        let g = lift_outer(e.basis(), e.basis()).unwrap();
        assert_eq!(g, Matrix::scalar(e.field(), 4, g.get(0, 0)));
        let h = e.basis()[0].mul(&e.basis()[3]);
        let images: Vec<Matrix> = e.basis().iter().map(|x| h.inverse().unwrap().mul(x).mul(&h)).collect();
        let g = lift_outer(e.basis(), &images).unwrap();
        let ratio = g.mul(&h.inverse().unwrap());
        assert_eq!(ratio, Matrix::scalar(e.field(), 4, ratio.get(0, 0)));
    }

    #[test]
    fn singular_stabilizers_have_expected_orders() {
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 2, variant: Minus, q: 3 }).unwrap();
        let r = e.quotient_field().clone();
        let order = |gens: Vec<Matrix>| StabChain::new(&gens, Matrix::identity(&r, 4), None).order();
        assert_eq!(order(e.isometry_generators()), 120);
        assert_eq!(order(e.singular_stabilizer(false).unwrap()), 24);
        assert_eq!(order(e.singular_stabilizer(true).unwrap()), 12);
    }

    #[test]
    fn no_lift_for_non_automorphism() {
        let e = Extraspecial::new(ExtraspecialSpec { r: 2, m: 2, variant: Minus, q: 3 }).unwrap();
        let mut images = e.basis().to_vec();
        images.swap(0, 1);
        assert!(matches!(lift_outer(e.basis(), &images), Err(Error::NoLift)));
    }
}
