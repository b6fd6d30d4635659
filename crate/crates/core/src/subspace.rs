//! Subspaces of GF(q)^n held in reduced row echelon form, and actions on
//! sections `B/A` of invariant subspaces.

use crate::field::{Elem, FieldSpec};
use crate::matrix::{echelonize, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FieldSpec, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace { field: field.clone(), ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn span(field: &FieldSpec, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        let mut rows: Vec<Vec<Elem>> = vectors.to_vec();
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length must match the ambient dimension");
        let pivots = echelonize(field, &mut rows);
        Subspace { field: field.clone(), ambient, rows, pivots }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Echelon basis.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after clearing the pivot columns.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut r = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = r[pc];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`, keeping the basis reduced. Returns false if `v` was already inside.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(r[pc]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, r);
        self.pivots.insert(at, pc);
        true
    }

    /// Coordinates of `v` in the echelon basis; `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let coords: Vec<Elem> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let mut r = v.to_vec();
        let f = &self.field;
        for (row, &c) in self.rows.iter().zip(&coords) {
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r.iter().all(|&x| x == 0).then_some(coords)
    }

    /// `{v : v . u = 0 for all u in self}`.
    pub fn annihilator(&self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::full(&self.field, self.ambient);
        }
        let m = Matrix::from_rows(&self.field, &self.rows).expect("rectangular").transpose();
        let ker = m.kernel();
        Subspace::span(&self.field, self.ambient, &ker)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Whether `v g` stays inside for every basis vector and every `g`.
    pub fn is_invariant(&self, gens: &[Matrix]) -> bool {
        gens.iter().all(|g| self.rows.iter().all(|r| self.contains(&g.vec_mul(r))))
    }

    /// All vectors of the subspace, as coefficient combinations of the basis.
    pub fn elements(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let q = f.order() as usize;
        let k = self.dim();
        let count = q.checked_pow(k as u32).expect("subspace too large to list");
        let mut out = Vec::with_capacity(count);
        let mut coeffs = vec![0usize; k];
        for _ in 0..count {
            let mut v = vec![0 as Elem; self.ambient];
            for (c, row) in coeffs.iter().zip(&self.rows) {
                if *c != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(*c as Elem, y));
                    }
                }
            }
            out.push(v);
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// The section `upper / lower` of a pair of nested subspaces, with a fixed
/// basis of coset representatives.
#[derive(Clone, Debug)]
pub struct Section {
    lower: Subspace,
    complement: Vec<Vec<Elem>>,
    complement_pivots: Vec<usize>,
}

impl Section {
    pub fn new(lower: &Subspace, upper: &Subspace) -> Self {
        assert!(lower.is_subspace_of(upper), "lower subspace must lie inside the upper one");
        let mut residues: Vec<Vec<Elem>> = upper.basis().iter().map(|v| lower.reduce(v)).collect();
        let complement_pivots = echelonize(lower.field(), &mut residues);
        Section { lower: lower.clone(), complement: residues, complement_pivots }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coset representatives forming the basis of the section.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.complement
    }

    /// Coordinates of the coset `v + lower`; `v` must lie in the upper subspace.
    pub fn coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        let r = self.lower.reduce(v);
        self.complement_pivots.iter().map(|&pc| r[pc]).collect()
    }

    /// Matrix of the action induced by `g` on the section.
    pub fn action(&self, g: &Matrix) -> Matrix {
        let rows: Vec<Vec<Elem>> = self.complement.iter().map(|v| self.coordinates(&g.vec_mul(v))).collect();
        if rows.is_empty() {
            return Matrix::zero(g.field(), 0, 0);
        }
        Matrix::from_rows(g.field(), &rows).expect("square action")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_keeps_echelon_form() {
        let f = FieldSpec::prime(3).unwrap();
        let mut s = Subspace::zero(&f, 4);
        assert!(s.insert(&[0, 1, 2, 0]));
        assert!(s.insert(&[1, 1, 0, 0]));
        assert!(!s.insert(&[1, 2, 2, 0]));
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        let again = Subspace::span(&f, 4, &[vec![0, 1, 2, 0], vec![1, 1, 0, 0]]);
        assert_eq!(s, again);
    }

    #[test]
    fn coordinates_and_annihilator() {
        let f = FieldSpec::new(2, 2).unwrap();
        let s = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 3]]);
        let v: Vec<Elem> = (0..3).map(|i| f.add(f.mul(3, s.basis()[0][i]), f.mul(2, s.basis()[1][i]))).collect();
        assert_eq!(s.coordinates(&v), Some(vec![3, 2]));
        assert_eq!(s.coordinates(&[0, 0, 1]), None);
        let ann = s.annihilator();
        assert_eq!(ann.dim(), 1);
        for u in s.basis() {
            let dot = (0..3).fold(0, |acc, i| f.add(acc, f.mul(u[i], ann.basis()[0][i])));
            assert_eq!(dot, 0);
        }
        assert_eq!(s.elements().len(), 16);
    }

    #[test]
    fn section_of_permutation_module() {
        let f = FieldSpec::prime(2).unwrap();
        let n = 4;
        let ones = Subspace::span(&f, n, &[vec![1; n]]);
        let zero_sum = Subspace::span(&f, n, &(1..n).map(|i| {
            let mut v = vec![0; n];
            v[0] = 1;
            v[i] = 1;
            v
        }).collect::<Vec<_>>());
        let sec = Section::new(&ones, &zero_sum);
        assert_eq!(sec.dim(), 2);
        let g = Matrix::permutation(&f, &[1, 2, 3, 0]);
        let h = Matrix::permutation(&f, &[1, 0, 2, 3]);
        let (ag, ah) = (sec.action(&g), sec.action(&h));
        assert_eq!(sec.action(&g.mul(&h)), ag.mul(&ah));
        assert!(ag.pow(4).is_identity());
    }
}
