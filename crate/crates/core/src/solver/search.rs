//! Individualisation-refinement search for automorphism generators and a
//! canonical labelling.
//!
//! Every search node is an equitable ordered partition. Its invariant is the
//! vector of cell sizes; a leaf is ranked by the sequence of invariants along
//! its path and then by its relabelled edge list, and the canonical leaf is
//! the maximum. Two prunings are applied:
//!
//! * orbit pruning: at a node whose path individualised `v₁…v_d`, a child is
//!   skipped when it shares an orbit with an explored sibling under the
//!   automorphisms found so far that fix `v₁…v_d` pointwise;
//! * invariant pruning: a node whose invariant prefix differs from the first
//!   path and is below the best path cannot contribute a generator or the
//!   canonical leaf.
//!
//! A leaf equal to the first leaf yields an automorphism, after which the
//! search jumps back to the deepest first-path ancestor.

use std::cmp::Ordering;

use super::partition::{CellPartition, RefineWork};
use super::ColouredGraph;
use crate::group::UnionFind;
use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Leaf {
    path: Vec<usize>,
    invariants: Vec<Vec<usize>>,
    certificate: Vec<u64>,
    labelling: Vec<usize>,
}

/// Counters reported alongside search results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub leaves: usize,
    pub pruned_by_orbit: usize,
    pub pruned_by_invariant: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub generators: Vec<Permutation>,
    pub labelling: Vec<usize>,
    pub certificate: Vec<u64>,
    pub stats: SearchStats,
}

struct Search<'a> {
    g: &'a ColouredGraph,
    work: RefineWork,
    path: Vec<usize>,
    invariants: Vec<Vec<usize>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Permutation>,
    stats: SearchStats,
}

pub(crate) fn run(g: &ColouredGraph) -> SearchOutcome {
    let n = g.num_vertices();
    let cells = super::partition::split_by_colour(g, &[(0..n).collect()]);
    let (mut root, starts) = CellPartition::from_cells(n, if n == 0 { &[] } else { &cells });
    let mut search = Search {
        g,
        work: RefineWork::default(),
        path: Vec::new(),
        invariants: Vec::new(),
        first: None,
        best: None,
        generators: Vec::new(),
        stats: SearchStats::default(),
    };
    root.refine(g, &starts, &mut search.work);
    search.visit(&root, 0);
    let best = search.best.expect("search reaches at least one leaf");
    SearchOutcome {
        generators: search.generators,
        labelling: best.labelling,
        certificate: best.certificate,
        stats: search.stats,
    }
}

/// Lexicographic comparison restricted to the common prefix.
fn cmp_prefix(a: &[Vec<usize>], b: &[Vec<usize>]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl Search<'_> {
    /// Explores the subtree under an already refined node at `depth`.
    /// Returns `Some(level)` to unwind to the first-path node at `level`.
    fn visit(&mut self, part: &CellPartition, depth: usize) -> Option<usize> {
        self.stats.nodes += 1;
        self.invariants.truncate(depth);
        self.invariants.push(part.cell_sizes());

        let matches_first = match &self.first {
            Some(f) => f.invariants.len() > depth && f.invariants[..=depth] == self.invariants[..],
            None => true,
        };
        if !matches_first {
            if let Some(b) = &self.best {
                if cmp_prefix(&self.invariants, &b.invariants) == Ordering::Less {
                    self.stats.pruned_by_invariant += 1;
                    return None;
                }
            }
        }

        if part.is_discrete() {
            return self.leaf(part);
        }

        let (start, _) = part.target_cell().expect("non-discrete partition has a target cell");
        let mut candidates = part.cell_members(start).to_vec();
        candidates.sort_unstable();

        let mut explored: Vec<usize> = Vec::new();
        let mut orbit_gens_seen = usize::MAX;
        let mut orbits = UnionFind::new(0);
        for v in candidates {
            if !explored.is_empty() {
                if orbit_gens_seen != self.generators.len() {
                    orbits = self.stabiliser_orbits(depth);
                    orbit_gens_seen = self.generators.len();
                }
                let rv = orbits.find(v);
                if explored.iter().any(|&w| orbits.find(w) == rv) {
                    self.stats.pruned_by_orbit += 1;
                    continue;
                }
            }
            explored.push(v);

            let mut child = part.clone();
            let splitter = child.individualise(v);
            child.refine(self.g, &[splitter], &mut self.work);
            self.path.truncate(depth);
            self.path.push(v);
            if let Some(level) = self.visit(&child, depth + 1) {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    /// Orbits of the subgroup generated by found automorphisms that fix the
    /// first `depth` individualised vertices.
    fn stabiliser_orbits(&self, depth: usize) -> UnionFind {
        let n = self.g.num_vertices();
        let fixed = &self.path[..depth];
        let mut uf = UnionFind::new(n);
        for gen in &self.generators {
            if fixed.iter().all(|&p| gen.image(p) == p) {
                for v in 0..n {
                    uf.union(v, gen.image(v));
                }
            }
        }
        uf
    }

    fn leaf(&mut self, part: &CellPartition) -> Option<usize> {
        self.stats.leaves += 1;
        let labelling = part.labelling();
        let certificate = self.g.relabelled_edges(&labelling);
        let leaf = Leaf {
            path: self.path.clone(),
            invariants: self.invariants.clone(),
            certificate,
            labelling,
        };

        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };

        if leaf.invariants == first.invariants && leaf.certificate == first.certificate {
            let gamma = automorphism_between(&first.labelling, &leaf.labelling);
            let common = first.path.iter().zip(&leaf.path).take_while(|(a, b)| a == b).count();
            self.record(gamma);
            return Some(common);
        }

        let best = self.best.as_ref().expect("best is set with first");
        if leaf.invariants == best.invariants && leaf.certificate == best.certificate {
            let gamma = automorphism_between(&best.labelling, &leaf.labelling);
            self.record(gamma);
            return None;
        }
        let key = (&leaf.invariants, &leaf.certificate);
        if key > (&best.invariants, &best.certificate) {
            self.best = Some(leaf);
        }
        None
    }

    fn record(&mut self, gamma: Permutation) {
        debug_assert!(self.g.is_automorphism(&gamma));
        if !gamma.is_identity() && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }
}

/// The automorphism sending the leaf labelled `from` onto the leaf labelled
/// `to`, i.e. `v ↦ to⁻¹(from(v))`.
fn automorphism_between(from: &[usize], to: &[usize]) -> Permutation {
    let mut to_inv = vec![0; to.len()];
    for (v, &l) in to.iter().enumerate() {
        to_inv[l] = v;
    }
    Permutation::from_images_unchecked(from.iter().map(|&l| to_inv[l]).collect())
}
