use pexc_core::catalog::named_perm_group;
use pexc_core::field::is_prime;
use pexc_core::perm::{
    an_concealed_by_valuation, an_concealed_predicate, binom_p_valuation, binomial, legendre_binom_valuation,
    sn_concealed_predicate, DEFAULT_MAX_SUBSETS,
};
use pexc_core::PermGroup;
use proptest::prelude::*;

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

#[test]
fn alternating_closed_form_matches_brute_force() {
    for n in 3..=13usize {
        let a = PermGroup::alternating(n);
        let s = PermGroup::symmetric(n);
        for p in primes_upto(13) {
            let brute_a = a.subset_orbits(p as u32, DEFAULT_MAX_SUBSETS).unwrap();
            assert_eq!(brute_a.concealed, an_concealed_predicate(n as u64, p), "A{n}, p = {p}");
            assert_eq!(brute_a.concealed, an_concealed_by_valuation(n as u64, p), "A{n}, p = {p}");
            let brute_s = s.subset_orbits(p as u32, DEFAULT_MAX_SUBSETS).unwrap();
            assert_eq!(brute_s.concealed, sn_concealed_predicate(n as u64, p), "S{n}, p = {p}");
        }
    }
}

#[test]
fn stored_families_are_concealed() {
    for (name, n, p) in [("D10", 5, 2), ("AGL3_2", 8, 3), ("AGammaL1_8", 8, 3)] {
        let h = named_perm_group(name).unwrap();
        assert_eq!(h.degree(), n);
        let r = h.subset_orbits(p, DEFAULT_MAX_SUBSETS).unwrap();
        assert!(r.concealed, "{name}");
        assert!(r.witness.is_none());
    }
}

#[test]
fn s5_has_a_witness_at_two() {
    let r = PermGroup::symmetric(5).subset_orbits(2, DEFAULT_MAX_SUBSETS).unwrap();
    assert!(!r.concealed);
    let w = r.witness.unwrap();
    assert_eq!(w.size % 2, 0);
    assert_eq!(w.size as u128, binomial(5, w.subset.len() as u64));
}

#[test]
fn subset_levels_count_every_subset() {
    let h = named_perm_group("AGL3_2").unwrap();
    let r = h.subset_orbits(3, DEFAULT_MAX_SUBSETS).unwrap();
    for k in 0..=8 {
        assert_eq!(r.level_total(k), binomial(8, k as u64));
    }
}

proptest! {
    #[test]
    fn kummer_agrees_with_legendre(n in 0u64..5000, k_frac in 0.0f64..=1.0, p in prop::sample::select(primes_upto(31))) {
        let k = ((n as f64) * k_frac) as u64;
        prop_assert_eq!(binom_p_valuation(n, k, p), legendre_binom_valuation(n, k, p));
    }

    #[test]
    fn valuation_divides_small_binomials(n in 0u64..60, k_frac in 0.0f64..=1.0, p in prop::sample::select(primes_upto(13))) {
        let k = ((n as f64) * k_frac) as u64;
        let c = binomial(n, k);
        let v = binom_p_valuation(n, k, p);
        let pv = (p as u128).pow(v);
        prop_assert_eq!(c % pv, 0);
        prop_assert_ne!(c % (pv * p as u128), 0);
    }
}
