//! Permutation groups stored as a base and strong generating set.
//!
//! The construction is the deterministic incremental Schreier–Sims
//! algorithm: every new generator is sifted through the stabiliser chain,
//! and whenever a level gains a generator all of its Schreier generators
//! are re-sifted into the level below. Orders are exact `BigUint`s.

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::{PermError, Permutation};

/// One level of the stabiliser chain `G = G⁽⁰⁾ ≥ G⁽¹⁾ ≥ …`.
#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[β] = (u, u⁻¹)` with `u(base_point) = β`.
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        let mut level = Level {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.transversal = vec![None; degree];
        self.transversal[self.base_point] = Some((id.clone(), id));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let gamma = s.image(beta);
                if self.transversal[gamma].is_none() {
                    let u = s.compose_unchecked(&self.transversal[beta].as_ref().unwrap().0);
                    let u_inv = u.inverse();
                    self.transversal[gamma] = Some((u, u_inv));
                    self.orbit.push(gamma);
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermutationGroup {
    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        }
    }

    /// Builds the group generated by `generators`, all of degree `degree`.
    pub fn new(degree: usize, generators: &[Permutation]) -> Result<Self, PermError> {
        let mut group = Self::trivial(degree);
        for g in generators {
            group.insert(g.clone())?;
        }
        Ok(group)
    }

    /// Adds a generator, returning `false` (and leaving the group unchanged)
    /// when it was already a member.
    pub fn insert(&mut self, g: Permutation) -> Result<bool, PermError> {
        self.check_degree(&g)?;
        if self.contains_unchecked(&g) {
            return Ok(false);
        }
        self.add_at(g.clone(), 0);
        self.generators.push(g);
        self.order = self.levels.iter().map(|l| BigUint::from(l.orbit.len())).product();
        Ok(true)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Union of all levels' strong generators, without duplicates.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Orbit lengths of the stabiliser chain, one per base point.
    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        self.check_degree(p)?;
        Ok(self.contains_unchecked(p))
    }

    fn contains_unchecked(&self, p: &Permutation) -> bool {
        let (residue, level) = self.strip(p, 0);
        level == self.levels.len() && residue.is_identity()
    }

    /// Equal orders and every generator of `self` is a member of `other`.
    pub fn equals(&self, other: &PermutationGroup) -> Result<bool, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        if self.order != other.order {
            return Ok(false);
        }
        Ok(self.generators.iter().all(|g| other.contains_unchecked(g)))
    }

    /// Finest partition of the points closed under the generators, as sorted
    /// 0-based blocks ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    fn check_degree(&self, p: &Permutation) -> Result<(), PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(())
    }

    /// Sifts `g` from level `from`; returns the residue and the level at which
    /// sifting stopped (`levels.len()` when it went all the way through).
    fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (k, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.image(level.base_point);
            match &level.transversal[beta] {
                Some((_, u_inv)) => h = u_inv.compose_unchecked(&h),
                None => return (h, k),
            }
        }
        (h, self.levels.len())
    }

    /// `g` must fix the base points of levels `0..from`.
    fn add_at(&mut self, g: Permutation, from: usize) {
        let (h, j) = self.strip(&g, from);
        if j == self.levels.len() {
            if h.is_identity() {
                return;
            }
            let point = h.support().next().expect("non-identity residue");
            self.levels.push(Level::new(point, self.degree));
        }
        for k in from..=j {
            self.levels[k].gens.push(h.clone());
        }
        for k in (from..=j).rev() {
            self.close_level(k);
        }
    }

    /// Recomputes the orbit of level `k` and pushes every non-trivial sifted
    /// Schreier generator into level `k + 1`.
    fn close_level(&mut self, k: usize) {
        let degree = self.degree;
        self.levels[k].rebuild_orbit(degree);
        let level = self.levels[k].clone();
        for &beta in &level.orbit {
            let u_beta = &level.transversal[beta].as_ref().unwrap().0;
            for s in &level.gens {
                let gamma = s.image(beta);
                let u_gamma_inv = &level.transversal[gamma].as_ref().unwrap().1;
                let schreier = u_gamma_inv.compose_unchecked(&s.compose_unchecked(u_beta));
                if !schreier.is_identity() {
                    self.add_at(schreier, k + 1);
                }
            }
        }
    }
}

pub(crate) fn orbits_of(degree: usize, generators: &[Permutation]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    for g in generators {
        for i in 0..degree {
            uf.union(i, g.image(i));
        }
    }
    uf.blocks()
}

/// Minimal union-find used for orbit computations.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so roots are block minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

pub fn build_group(degree: usize, generators: &[Permutation]) -> Result<PermutationGroup, PermError> {
    PermutationGroup::new(degree, generators)
}

pub fn contains(g: &PermutationGroup, p: &Permutation) -> Result<bool, PermError> {
    g.contains(p)
}

pub fn groups_equal(a: &PermutationGroup, b: &PermutationGroup) -> Result<bool, PermError> {
    a.equals(b)
}

pub fn orbits(g: &PermutationGroup) -> Vec<Vec<usize>> {
    g.orbits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn group(n: usize, gens: &[&str]) -> PermutationGroup {
        let gens: Vec<_> = gens.iter().map(|s| cyc(s, n)).collect();
        build_group(n, &gens).unwrap()
    }

    /// Closure by breadth-first multiplication; independent of the chain.
    fn brute_closure(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let mut queue = vec![Permutation::identity(n)];
        seen.insert(Permutation::identity(n));
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = g.compose(&x).unwrap();
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn dihedral_five_from_found_generators() {
        let g = group(5, &["(2 5)(3 4)", "(1 2)(3 5)"]);
        assert_eq!(*g.order(), BigUint::from(10u32));
        assert!(g.contains(&cyc("(1 2 3 4 5)", 5)).unwrap());
    }

    #[test]
    fn trivial_group_has_order_one() {
        let g = group(4, &[]);
        assert_eq!(*g.order(), BigUint::one());
        assert!(g.base().is_empty());
    }

    #[test]
    fn adjacent_transpositions_give_s5() {
        let g = group(5, &["(1 2)", "(2 3)", "(3 4)", "(4 5)"]);
        assert_eq!(*g.order(), BigUint::from(120u32));
    }

    #[test]
    fn s10_order_is_exact() {
        let gens: Vec<String> = (1..10).map(|i| format!("({} {})", i, i + 1)).collect();
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let g = group(10, &refs);
        assert_eq!(*g.order(), BigUint::from(3_628_800u32));
    }

    #[test]
    fn membership() {
        let d5 = group(5, &["(2 5)(3 4)", "(1 2)(3 5)"]);
        assert!(d5.contains(&Permutation::identity(5)).unwrap());
        let c3 = group(3, &["(1 2 3)"]);
        assert!(!c3.contains(&cyc("(1 2)", 3)).unwrap());
        assert!(c3.contains(&cyc("(1 3 2)", 3)).unwrap());
        assert!(c3.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn equality_of_groups() {
        let a = group(2, &["(1 2)"]);
        let b = group(2, &["(1 2)"]);
        assert!(a.equals(&b).unwrap());
        let table = group(5, &["(2 5)(3 4)", "(1 2)(3 5)"]);
        let classic = group(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]);
        assert!(groups_equal(&table, &classic).unwrap());
        let x = group(3, &["(1 2)"]);
        let y = group(3, &["(1 3)"]);
        assert!(!x.equals(&y).unwrap());
    }

    #[test]
    fn orbit_partitions() {
        assert_eq!(group(3, &[]).orbits(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            group(5, &["(2 5)(3 4)", "(1 2)(3 5)"]).orbits(),
            vec![vec![0, 1, 2, 3, 4]]
        );
        assert_eq!(group(3, &["(1 2)"]).orbits(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn klein_four_from_square_edge_reflections() {
        // the two edge-midpoint reflections of a 4-cycle only generate V4
        let v4 = group(4, &["(1 2)(3 4)", "(1 4)(2 3)"]);
        assert_eq!(*v4.order(), BigUint::from(4u32));
        let d4 = group(4, &["(2 4)", "(1 2)(3 4)"]);
        assert_eq!(*d4.order(), BigUint::from(8u32));
    }

    #[test]
    fn insert_reports_redundancy() {
        let mut g = PermutationGroup::trivial(4);
        assert!(g.insert(cyc("(1 2 3 4)", 4)).unwrap());
        assert!(!g.insert(cyc("(1 3)(2 4)", 4)).unwrap());
        assert_eq!(g.generators().len(), 1);
    }

    #[test]
    fn chain_order_matches_closure_on_assorted_groups() {
        let cases: Vec<(usize, Vec<&str>)> = vec![
            (4, vec!["(1 2 3 4)", "(1 3)"]),
            (6, vec!["(1 2 3)(4 5 6)", "(1 4)"]),
            (6, vec!["(1 2)(3 4)(5 6)", "(1 3 5)(2 4 6)"]),
            (7, vec!["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"]),
            (7, vec!["(1 2 3 4 5 6 7)", "(1 2)"]),
            (8, vec!["(1 2)(3 4)", "(5 6 7 8)", "(1 5)(2 6)(3 7)(4 8)"]),
        ];
        for (n, gens) in cases {
            let perms: Vec<_> = gens.iter().map(|s| cyc(s, n)).collect();
            let g = build_group(n, &perms).unwrap();
            let closure = brute_closure(n, &perms);
            assert_eq!(*g.order(), BigUint::from(closure.len()), "{gens:?}");
            for x in &closure {
                assert!(g.contains(x).unwrap());
            }
        }
    }
}
