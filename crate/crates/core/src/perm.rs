//! Permutation groups: orders, orbits on subsets, and binomial valuations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::schreier::{Perm, StabChain};

pub const DEFAULT_MAX_SUBSETS: u64 = 1 << 24;

/// A permutation group on `{0, .., n-1}`; generators are image arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    gens: Vec<Vec<usize>>,
    label: Option<String>,
}

impl PermGroup {
    pub fn new(n: usize, gens: Vec<Vec<usize>>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(Error::InvalidSpec(format!("generator {i} has {} images, expected {n}", g.len())));
            }
            let mut hit = vec![false; n];
            for &x in g {
                if x >= n || std::mem::replace(&mut hit[x], true) {
                    return Err(Error::InvalidSpec(format!("generator {i} is not a permutation of 0..{n}")));
                }
            }
        }
        let gens = if gens.is_empty() { vec![(0..n).collect()] } else { gens };
        Ok(PermGroup { n, gens, label: None })
    }

    /// Builds generators from cycle lists.
    pub fn from_cycles(n: usize, gens: &[Vec<Vec<usize>>]) -> Result<Self> {
        let mut out = Vec::new();
        for cycles in gens {
            let mut img: Vec<usize> = (0..n).collect();
            for c in cycles {
                for (i, &x) in c.iter().enumerate() {
                    if x >= n {
                        return Err(Error::InvalidSpec(format!("point {x} out of range 0..{n}")));
                    }
                    img[x] = c[(i + 1) % c.len()];
                }
            }
            out.push(img);
        }
        Self::new(n, out)
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = vec![];
        if n >= 2 {
            gens.push(cycle_images(n, &(0..n).collect::<Vec<_>>()));
            gens.push(cycle_images(n, &[0, 1]));
        }
        Self::new(n, gens).expect("valid").with_label(format!("S{n}"))
    }

    pub fn alternating(n: usize) -> Self {
        let mut gens = vec![];
        if n >= 3 {
            gens.push(cycle_images(n, &[0, 1, 2]));
            let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
            gens.push(cycle_images(n, &long));
        }
        Self::new(n, gens).expect("valid").with_label(format!("A{n}"))
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(n, vec![cycle_images(n, &(0..n).collect::<Vec<_>>())]).expect("valid").with_label(format!("C{n}"))
    }

    /// Dihedral group of order 2n on n points.
    pub fn dihedral(n: usize) -> Self {
        let rot = cycle_images(n, &(0..n).collect::<Vec<_>>());
        let refl = (0..n).map(|i| (n - i) % n).collect();
        Self::new(n, vec![rot, refl]).expect("valid").with_label(format!("D{}", 2 * n))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.gens
    }

    /// Conjugate by relabelling points: point `i` becomes `relabel[i]`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<PermGroup> {
        let mut inv = vec![0; self.n];
        for (i, &j) in relabel.iter().enumerate() {
            inv[j] = i;
        }
        let gens = self.gens.iter().map(|g| (0..self.n).map(|x| relabel[g[inv[x]]]).collect()).collect();
        let mut out = PermGroup::new(self.n, gens)?;
        out.label = self.label.clone();
        Ok(out)
    }

    fn chain(&self) -> StabChain<Perm> {
        let gens: Vec<Perm> = self.gens.iter().map(|g| Perm(g.iter().map(|&x| x as u32).collect())).collect();
        StabChain::new(&gens, Perm::identity(self.n), None)
    }

    /// Group order by Schreier–Sims with base points taken in ascending order.
    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        g.len() == self.n && self.chain().contains(&Perm(g.iter().map(|&x| x as u32).collect()))
    }

    /// Orbits on points, each sorted, ordered by least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut orbit = vec![s];
            let mut i = 0;
            while i < orbit.len() {
                for g in &self.gens {
                    let y = g[orbit[i]];
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Orbits on k-subsets for every k, with the p-concealed verdict.
    pub fn subset_orbits(&self, p: u32, max_subsets: u64) -> Result<SubsetOrbitReport> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        let n = self.n;
        if n > 64 {
            return Err(Error::TooManySubsets { size: 1u128 << n.min(127), cap: max_subsets });
        }
        let tables = self.subset_tables();
        let apply = |mask: u64, t: &Vec<[u64; 256]>| -> u64 {
            let mut out = 0;
            let mut x = mask;
            for chunk in t {
                out |= chunk[(x & 0xff) as usize];
                x >>= 8;
                if x == 0 {
                    break;
                }
            }
            out
        };
        let mut levels: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n + 1];
        if (1u128 << n) <= max_subsets as u128 {
            let total = 1u64 << n;
            let mut seen = vec![0u64; (total as usize).div_ceil(64)];
            let mut queue = Vec::new();
            for start in 0..total {
                if seen[(start / 64) as usize] >> (start % 64) & 1 == 1 {
                    continue;
                }
                seen[(start / 64) as usize] |= 1 << (start % 64);
                queue.clear();
                queue.push(start);
                let mut head = 0;
                while head < queue.len() {
                    let x = queue[head];
                    head += 1;
                    for t in &tables {
                        let y = apply(x, t);
                        let (w, b) = ((y / 64) as usize, y % 64);
                        if seen[w] >> b & 1 == 0 {
                            seen[w] |= 1 << b;
                            queue.push(y);
                        }
                    }
                }
                levels[start.count_ones() as usize].push((start, queue.len() as u64));
            }
        } else {
            for (k, level) in levels.iter_mut().enumerate() {
                let count = binomial(n as u64, k as u64);
                if count > max_subsets as u128 {
                    return Err(Error::TooManySubsets { size: count, cap: max_subsets });
                }
                let mut seen = vec![false; count as usize];
                let mut queue = Vec::new();
                for r in 0..count as u64 {
                    if seen[r as usize] {
                        continue;
                    }
                    seen[r as usize] = true;
                    let start = unrank_subset(n, k, r);
                    queue.clear();
                    queue.push(start);
                    let mut head = 0;
                    while head < queue.len() {
                        let x = queue[head];
                        head += 1;
                        for t in &tables {
                            let y = apply(x, t);
                            let ry = rank_subset(y) as usize;
                            if !seen[ry] {
                                seen[ry] = true;
                                queue.push(y);
                            }
                        }
                    }
                    level.push((start, queue.len() as u64));
                }
                level.sort_unstable();
            }
        }
        let order = self.order();
        let witness = levels
            .iter()
            .flatten()
            .find(|(_, size)| size % p as u64 == 0)
            .map(|&(mask, size)| SubsetWitness { subset: mask_points(mask), size });
        let concealed = order.is_multiple_of(p as u128) && witness.is_none();
        let level_sizes = levels
            .iter()
            .map(|lv| {
                let mut m = BTreeMap::new();
                for &(_, s) in lv {
                    *m.entry(s).or_insert(0u64) += 1;
                }
                m
            })
            .collect();
        Ok(SubsetOrbitReport { n, p, order, levels: level_sizes, concealed, witness })
    }

    fn subset_tables(&self) -> Vec<Vec<[u64; 256]>> {
        self.gens
            .iter()
            .map(|g| {
                (0..self.n.div_ceil(8))
                    .map(|c| {
                        let mut t = [0u64; 256];
                        for (byte, slot) in t.iter_mut().enumerate() {
                            for b in 0..8 {
                                let pt = c * 8 + b;
                                if byte >> b & 1 == 1 && pt < self.n {
                                    *slot |= 1 << g[pt];
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect()
    }
}

fn cycle_images(n: usize, cycle: &[usize]) -> Vec<usize> {
    let mut img: Vec<usize> = (0..n).collect();
    for (i, &x) in cycle.iter().enumerate() {
        img[x] = cycle[(i + 1) % cycle.len()];
    }
    img
}

fn mask_points(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// Colexicographic rank of a k-subset.
fn rank_subset(mask: u64) -> u64 {
    let mut r = 0;
    for (i, pos) in mask_points(mask).into_iter().enumerate() {
        r += binomial(pos as u64, i as u64 + 1) as u64;
    }
    r
}

fn unrank_subset(n: usize, k: usize, mut r: u64) -> u64 {
    let mut mask = 0;
    let mut top = n;
    for i in (1..=k).rev() {
        let mut pos = top - 1;
        while binomial(pos as u64, i as u64) as u64 > r {
            pos -= 1;
        }
        r -= binomial(pos as u64, i as u64) as u64;
        mask |= 1 << pos;
        top = pos;
    }
    mask
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetWitness {
    pub subset: Vec<usize>,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOrbitReport {
    pub n: usize,
    pub p: u32,
    pub order: u128,
    /// For each k, orbit size -> multiplicity on k-subsets.
    pub levels: Vec<BTreeMap<u64, u64>>,
    pub concealed: bool,
    /// First subset (by level, then least mask) whose orbit size is divisible by p.
    pub witness: Option<SubsetWitness>,
}

impl SubsetOrbitReport {
    pub fn level_total(&self, k: usize) -> u128 {
        self.levels[k].iter().map(|(&s, &m)| s as u128 * m as u128).sum()
    }
}

/// `v_p(C(n, k))` as the number of carries when adding `k` and `n - k` in base p.
pub fn binom_p_valuation(n: u64, k: u64, p: u64) -> u32 {
    assert!(k <= n && p >= 2);
    let (mut x, mut y) = (k, n - k);
    let mut carry = 0;
    let mut count = 0;
    while x > 0 || y > 0 || carry > 0 {
        let s = x % p + y % p + carry;
        carry = if s >= p { 1 } else { 0 };
        count += carry as u32;
        x /= p;
        y /= p;
    }
    count
}

/// `v_p(C(n, k))` by Legendre's formula.
pub fn legendre_binom_valuation(n: u64, k: u64, p: u64) -> u32 {
    assert!(k <= n && p >= 2);
    let mut total = 0;
    let mut pr = p;
    loop {
        total += n / pr - k / pr - (n - k) / pr;
        match pr.checked_mul(p) {
            Some(next) if next <= n => pr = next,
            _ => break,
        }
    }
    total as u32
}

fn alternating_order_divisible(n: u64, p: u64) -> bool {
    // p divides n!/2
    if p == 2 {
        n >= 4
    } else {
        n >= p
    }
}

/// `n = a p^s - 1` with `s >= 1`, `1 <= a <= p - 1` and `(a, s) != (1, 1)`.
fn closed_form(n: u64, p: u64) -> bool {
    let m = n + 1;
    let mut s = 0;
    let mut a = m;
    while a.is_multiple_of(p) {
        a /= p;
        s += 1;
    }
    s >= 1 && a < p && (a, s) != (1, 1)
}

/// Whether `A_n` is p-concealed, by the closed form.
pub fn an_concealed_predicate(n: u64, p: u64) -> bool {
    n >= 3 && is_prime(p) && closed_form(n, p) && !(n == 3 && p == 2)
}

/// Whether `S_n` is p-concealed, by the closed form.
pub fn sn_concealed_predicate(n: u64, p: u64) -> bool {
    n >= 3 && is_prime(p) && closed_form(n, p)
}

/// Whether `A_n` is p-concealed, from the definition: p divides the order and
/// every binomial coefficient `C(n, k)` is prime to p. Valid for `n >= 3`,
/// where `A_n` is transitive on the k-subsets for every k.
pub fn an_concealed_by_valuation(n: u64, p: u64) -> bool {
    n >= 3 && alternating_order_divisible(n, p) && (0..=n).all(|k| binom_p_valuation(n, k, p) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        assert_eq!(PermGroup::symmetric(5).order(), 120);
        assert_eq!(PermGroup::alternating(6).order(), 360);
        assert_eq!(PermGroup::alternating(7).order(), 2520);
        assert_eq!(PermGroup::dihedral(5).order(), 10);
        assert_eq!(PermGroup::cyclic(7).order(), 7);
        let d10 = PermGroup::from_cycles(5, &[vec![vec![0, 1, 2, 3, 4]], vec![vec![1, 4], vec![2, 3]]]).unwrap();
        assert_eq!(d10.order(), 10);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(PermGroup::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermGroup::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for k in 0..=7 {
            for r in 0..binomial(7, k as u64) as u64 {
                let m = unrank_subset(7, k, r);
                assert_eq!(m.count_ones() as usize, k);
                assert_eq!(rank_subset(m), r);
            }
        }
    }

    #[test]
    fn d10_is_2_concealed() {
        let r = PermGroup::dihedral(5).subset_orbits(2, DEFAULT_MAX_SUBSETS).unwrap();
        assert!(r.concealed);
        for k in 0..=5 {
            assert_eq!(r.level_total(k), binomial(5, k as u64));
        }
    }

    #[test]
    fn s5_is_not_2_concealed() {
        let r = PermGroup::symmetric(5).subset_orbits(2, DEFAULT_MAX_SUBSETS).unwrap();
        assert!(!r.concealed);
        let w = r.witness.unwrap();
        assert_eq!(w.subset.len(), 2);
        assert_eq!(w.size, 10);
    }

    #[test]
    fn per_level_mode_agrees_with_exhaustive() {
        let g = PermGroup::alternating(9);
        let a = g.subset_orbits(3, DEFAULT_MAX_SUBSETS).unwrap();
        let b = g.subset_orbits(3, 200).unwrap();
        assert_eq!(a, b);
        assert!(matches!(g.subset_orbits(3, 100), Err(Error::TooManySubsets { .. })));
    }

    #[test]
    fn kummer_examples() {
        for k in 0..=8 {
            assert_eq!(binom_p_valuation(8, k, 3), 0);
        }
        assert_eq!(binom_p_valuation(5, 2, 2), 1);
        assert_eq!(binom_p_valuation(8, 4, 3), 0);
        assert!(binom_p_valuation(10, 4, 2) > 0);
    }

    #[test]
    fn closed_form_examples() {
        assert!(an_concealed_predicate(8, 3));
        assert!(an_concealed_predicate(7, 2));
        assert!(!an_concealed_predicate(10, 2));
        assert!(!an_concealed_predicate(3, 2));
        assert!(sn_concealed_predicate(3, 2));
    }
}
