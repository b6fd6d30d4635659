use pexc_core::constructions::{
    c4_pair_group, gamma_l1, tensor_product_group, tensor_weight, verify_wreath_orbits, wreath, GammaL1Spec, WreathSpec,
};
use pexc_core::field::FieldSpec;
use pexc_core::group::spin_with;
use pexc_core::space::decode;
use pexc_core::{Elem, Limits, MatGroup, Matrix, PermGroup, PexcStatus};
use proptest::prelude::*;

fn all_specs() -> Vec<GammaL1Spec> {
    let mut out = Vec::new();
    for p in [2u32, 3] {
        for d in (p..=8).step_by(p as usize) {
            for s in (1..=d).filter(|s| d % s == 0) {
                let ps1 = (p as u64).pow(s) - 1;
                for j in (1..=ps1).filter(|j| ps1 % j == 0) {
                    out.push(GammaL1Spec::new(p, d, s, j));
                }
            }
        }
    }
    out
}

#[test]
fn gamma_l1_matches_the_closed_form() {
    let limits = Limits::default();
    let specs = all_specs();
    assert!(specs.len() > 40);
    for spec in specs {
        let g = gamma_l1(&spec).unwrap();
        let partition = g.orbit_partition(&limits).unwrap();
        assert_eq!(Some(partition.nonzero_profile()), spec.expected_nonzero_profile(), "{spec:?}");
        assert!(partition.all_sizes_divide(g.order_with(&partition)));
    }
}

#[test]
fn gamma_l1_rejects_invalid_parameters() {
    assert!(gamma_l1(&GammaL1Spec::new(2, 3, 1, 1)).is_err());
    assert!(gamma_l1(&GammaL1Spec::new(2, 4, 3, 1)).is_err());
    assert!(gamma_l1(&GammaL1Spec::new(3, 3, 1, 3)).is_err());
}

#[test]
fn full_frobenius_coarsens_the_orbits() {
    let limits = Limits::default();
    for spec in all_specs() {
        let full = GammaL1Spec { include_full_frobenius: true, ..spec };
        let a = gamma_l1(&spec).unwrap().orbit_partition(&limits).unwrap();
        let b = gamma_l1(&full).unwrap().orbit_partition(&limits).unwrap();
        assert!(b.orbits.len() <= a.orbits.len());
        assert!(b.is_conserved());
    }
}

/// Invariant 2-dimensional subspaces, found as cyclic submodules.
fn invariant_planes(g: &MatGroup) -> Vec<Vec<Vec<Elem>>> {
    let f = g.field().clone();
    let gens = g.linear_generators().unwrap();
    let mut planes: Vec<Vec<Vec<Elem>>> = Vec::new();
    for x in 1..f.order().pow(4) as u64 {
        let s = spin_with(&f, 4, &gens, &decode(&f, 4, x));
        assert_ne!(s.dim(), 1, "no invariant lines expected");
        if s.dim() == 2 && !planes.iter().any(|b| b == s.basis()) {
            planes.push(s.basis().to_vec());
        }
    }
    planes
}

#[test]
fn c4_pair_groups_are_reducible() {
    for q in [2u32, 4, 8] {
        let g = c4_pair_group(q).unwrap();
        let f = g.field().clone();
        let planes = invariant_planes(&g);
        let complementary = planes.iter().enumerate().any(|(i, a)| {
            planes[i + 1..].iter().any(|b| {
                let both: Vec<Vec<Elem>> = a.iter().chain(b).cloned().collect();
                Matrix::from_rows(&f, &both).unwrap().rank() == 4
            })
        });
        assert!(complementary, "q = {q}");
    }
}

fn gl2_2() -> MatGroup {
    let f = FieldSpec::prime(2).unwrap();
    let a = Matrix::from_rows(&f, &[vec![1, 1], vec![0, 1]]).unwrap();
    let b = Matrix::from_rows(&f, &[vec![0, 1], vec![1, 0]]).unwrap();
    MatGroup::new(&f, 2, vec![a, b]).unwrap().with_label("GL2(2)")
}

#[test]
fn wreath_orbits_follow_the_support_formula() {
    let limits = Limits::default();
    for top in [PermGroup::cyclic(3), PermGroup::symmetric(3), PermGroup::dihedral(5)] {
        let spec = WreathSpec { inner: gl2_2(), top };
        let g = wreath(&spec).unwrap();
        assert!(verify_wreath_orbits(&spec, &g, &limits).unwrap());
    }
}

#[test]
fn exceptional_inner_with_coprime_top_stays_exceptional() {
    let limits = Limits::default();
    let inner = gamma_l1(&GammaL1Spec::new(2, 2, 1, 1)).unwrap();
    assert_eq!(inner.is_p_exceptional(2, &limits).unwrap().status, PexcStatus::PExceptional);
    for top in [PermGroup::cyclic(3), PermGroup::cyclic(5), PermGroup::cyclic(7)] {
        let g = wreath(&WreathSpec { inner: inner.clone(), top }).unwrap();
        assert_eq!(g.is_p_exceptional(2, &limits).unwrap().status, PexcStatus::PExceptional);
    }
}

fn random_invertible(f: &FieldSpec, n: usize, seed: &[Elem]) -> Option<Matrix> {
    let data: Vec<Elem> = seed.iter().take(n * n).map(|&x| x % f.order() as Elem).collect();
    let m = Matrix::new(f, n, n, data).ok()?;
    (m.rank() == n).then_some(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tensor_weight_is_the_coefficient_rank(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        du in 1usize..=4,
        dw in 1usize..=4,
        raw in prop::collection::vec(0u16..64, 16),
        a_raw in prop::collection::vec(0u16..64, 16),
        b_raw in prop::collection::vec(0u16..64, 16),
    ) {
        let f = FieldSpec::of_order(q).unwrap();
        let v: Vec<Elem> = raw.iter().take(du * dw).map(|&x| x % q as Elem).collect();
        let r = tensor_weight(&f, &v, du, dw).unwrap();
        prop_assert!(r.k <= du.min(dw));
        let coeff = Matrix::new(&f, du, dw, v.clone()).unwrap();
        prop_assert_eq!(r.k, coeff.rank());
        prop_assert_eq!(r.u0_basis.len(), r.k);
        prop_assert_eq!(r.w0_basis.len(), r.k);
        if let (Some(a), Some(b)) = (random_invertible(&f, du, &a_raw), random_invertible(&f, dw, &b_raw)) {
            let moved = a.kronecker(&b).unwrap().vec_mul(&v);
            prop_assert_eq!(tensor_weight(&f, &moved, du, dw).unwrap().k, r.k);
        }
    }
}

#[test]
fn tensor_products_with_swap_double_the_order() {
    let limits = Limits::default();
    let a = gl2_2();
    let plain = tensor_product_group(&a, &a, false).unwrap();
    let swapped = tensor_product_group(&a, &a, true).unwrap();
    assert_eq!(swapped.group_order(&limits).unwrap(), 2 * plain.group_order(&limits).unwrap());
}
