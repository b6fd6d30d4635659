//! Deterministic Schreier–Sims over any faithful right action on integer points.

use std::collections::{HashMap, HashSet};

/// A group element acting faithfully on the right of a set of points.
pub trait PointAction: Clone {
    fn image(&self, point: u64) -> u64;
    /// `self` followed by `other`.
    fn then(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
    /// Least point not fixed; `None` exactly for the identity.
    fn least_moved_point(&self) -> Option<u64>;
}

#[derive(Clone, Debug)]
struct Level<E> {
    base: u64,
    gens: Vec<E>,
    orbit: Vec<u64>,
    position: HashMap<u64, usize>,
    transversal: Vec<E>,
    inverses: Vec<E>,
    expanded: Vec<usize>,
    checked: HashSet<(usize, usize)>,
}

impl<E: PointAction> Level<E> {
    fn new(base: u64, identity: &E) -> Self {
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            position: HashMap::from([(base, 0)]),
            transversal: vec![identity.clone()],
            inverses: vec![identity.clone()],
            expanded: vec![0],
            checked: HashSet::new(),
        }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let from = self.expanded[i];
            let beta = self.orbit[i];
            for j in from..self.gens.len() {
                let gamma = self.gens[j].image(beta);
                if !self.position.contains_key(&gamma) {
                    let u = self.transversal[i].then(&self.gens[j]);
                    self.position.insert(gamma, self.orbit.len());
                    self.orbit.push(gamma);
                    self.inverses.push(u.inverse());
                    self.transversal.push(u);
                    self.expanded.push(0);
                }
            }
            self.expanded[i] = self.gens.len();
            i += 1;
        }
    }
}

/// Base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain<E> {
    levels: Vec<Level<E>>,
    identity: E,
}

impl<E: PointAction> StabChain<E> {
    /// Builds the chain. `first_base`, when given, is used as the first base point.
    pub fn new(gens: &[E], identity: E, first_base: Option<u64>) -> Self {
        let mut chain = StabChain { levels: Vec::new(), identity };
        let gens: Vec<E> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        if let Some(b) = first_base {
            if gens.iter().any(|g| g.image(b) != b) {
                chain.levels.push(Level::new(b, &chain.identity));
            }
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.image(l.base) == l.base) {
                let b = g.least_moved_point().expect("non-identity element moves a point");
                chain.levels.push(Level::new(b, &chain.identity));
            }
            for level in chain.levels.iter_mut() {
                let fixes = level.base == g.image(level.base);
                level.gens.push(g.clone());
                if !fixes {
                    break;
                }
            }
        }
        for level in chain.levels.iter_mut() {
            level.extend_orbit();
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart = None;
            'scan: for a in 0..self.levels[li].orbit.len() {
                for x in 0..self.levels[li].gens.len() {
                    if !self.levels[li].checked.insert((a, x)) {
                        continue;
                    }
                    let level = &self.levels[li];
                    let g = &level.gens[x];
                    let gamma = g.image(level.orbit[a]);
                    let c = level.position[&gamma];
                    let h = level.transversal[a].then(g).then(&level.inverses[c]);
                    let (y, j) = self.strip(h, li + 1);
                    if j < self.levels.len() || !y.is_identity() {
                        if j == self.levels.len() {
                            let b = y.least_moved_point().expect("non-identity residue");
                            self.levels.push(Level::new(b, &self.identity));
                        }
                        for l in li + 1..=j {
                            self.levels[l].gens.push(y.clone());
                            self.levels[l].extend_orbit();
                        }
                        restart = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (the chain length if it went all the way).
    fn strip(&self, mut g: E, from: usize) -> (E, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.base);
            match level.position.get(&beta) {
                Some(&c) => g = g.then(&level.inverses[c]),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Basic orbit lengths, level by level.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &E) -> bool {
        let (y, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && y.is_identity()
    }

    /// Generators of the pointwise stabilizer of the first `level` base points.
    pub fn stabilizer_generators(&self, level: usize) -> Vec<E> {
        self.levels.get(level).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Strong generators (the generators of the first level).
    pub fn strong_generators(&self) -> Vec<E> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }
}

/// Permutation on `0..n` as an image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }
}

impl PointAction for Perm {
    fn image(&self, point: u64) -> u64 {
        self.0[point as usize] as u64
    }

    fn then(&self, other: &Self) -> Self {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    fn least_moved_point(&self) -> Option<u64> {
        self.0.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, pts: &[u32]) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for w in 0..pts.len() {
            v[pts[w] as usize] = pts[(w + 1) % pts.len()];
        }
        Perm(v)
    }

    #[test]
    fn symmetric_and_dihedral_orders() {
        let s5 = [cycle(5, &[0, 1, 2, 3, 4]), cycle(5, &[0, 1])];
        assert_eq!(StabChain::new(&s5, Perm::identity(5), None).order(), 120);
        let d10 = [cycle(5, &[0, 1, 2, 3, 4]), Perm(vec![0, 4, 3, 2, 1])];
        assert_eq!(StabChain::new(&d10, Perm::identity(5), None).order(), 10);
        let s9: Vec<Perm> = vec![cycle(9, &[0, 1, 2, 3, 4, 5, 6, 7, 8]), cycle(9, &[0, 1])];
        let chain = StabChain::new(&s9, Perm::identity(9), None);
        assert_eq!(chain.order(), 362880);
        assert!(chain.contains(&cycle(9, &[2, 7])));
    }

    #[test]
    fn membership_in_alternating_group() {
        let a6 = [cycle(6, &[0, 1, 2]), cycle(6, &[1, 2, 3, 4, 5])];
        let chain = StabChain::new(&a6, Perm::identity(6), None);
        assert_eq!(chain.order(), 360);
        assert!(chain.contains(&cycle(6, &[0, 5, 3])));
        assert!(!chain.contains(&cycle(6, &[0, 5])));
    }

    #[test]
    fn trivial_group() {
        let chain = StabChain::new(&[Perm::identity(4)], Perm::identity(4), None);
        assert_eq!(chain.order(), 1);
        assert!(chain.base().is_empty());
    }
}
