//! Automorphism groups and canonical forms of vertex- and edge-coloured
//! graphs, and their specialisation to Hamiltonian graphs.

mod partition;
mod search;

use std::time::Instant;

use thiserror::Error;

pub use partition::OrderedPartition;
pub use search::SearchStats;

use crate::graph::{AutomorphismViolation, CoefficientPolicy, ColouredBipartiteGraph};
use crate::group::PermutationGroup;
use crate::pauli::Hamiltonian;
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("vertex map sends qubit vertex {vertex} outside the qubit vertices")]
    MixesPartitions { vertex: usize },
    #[error("permutation of degree {degree} cannot act on {vertices} vertices")]
    DegreeMismatch { degree: usize, vertices: usize },
    #[error("solver produced a map that is not an automorphism: {0}")]
    NotAutomorphism(#[from] AutomorphismViolation),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Undirected simple graph with ordinal vertex colours and small edge colours.
///
/// Vertex colours order the initial partition; edge colours are refined on
/// natively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredGraph {
    colours: Vec<u32>,
    adjacency: Vec<Vec<(usize, u8)>>,
    num_edges: usize,
    edge_colours: u8,
}

impl ColouredGraph {
    /// `edges` are `(u, v, colour)` triples; each unordered pair at most once.
    pub fn new(colours: Vec<u32>, edges: &[(usize, usize, u8)]) -> Self {
        let n = colours.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_colours = 1;
        for &(u, v, c) in edges {
            assert!(u != v && u < n && v < n, "bad edge ({u}, {v})");
            adjacency[u].push((v, c));
            adjacency[v].push((u, c));
            edge_colours = edge_colours.max(c + 1);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ColouredGraph {
            colours,
            adjacency,
            num_edges: edges.len(),
            edge_colours,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.colours.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn colour(&self, v: usize) -> u32 {
        self.colours[v]
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, u8)] {
        &self.adjacency[v]
    }

    pub(crate) fn num_edge_colours(&self) -> u8 {
        self.edge_colours
    }

    pub fn edge_colour(&self, u: usize, v: usize) -> Option<u8> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    /// Colours, adjacency and edge colours are all preserved by `p`.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.num_vertices()
            && (0..self.num_vertices()).all(|v| {
                self.colours[v] == self.colours[p.image(v)]
                    && self.adjacency[v]
                        .iter()
                        .all(|&(w, c)| self.edge_colour(p.image(v), p.image(w)) == Some(c))
            })
    }

    /// The graph under `labelling` (vertex ↦ label) as a comparable word:
    /// colours in label order, then sorted packed edges.
    pub(crate) fn relabelled_edges(&self, labelling: &[usize]) -> Vec<u64> {
        let n = self.num_vertices();
        assert!(n < 1 << 28, "graph too large for packed certificates");
        let mut out = vec![0u64; n];
        for v in 0..n {
            out[labelling[v]] = self.colours[v] as u64;
        }
        let mut edges = Vec::with_capacity(self.num_edges);
        for u in 0..n {
            for &(w, c) in &self.adjacency[u] {
                let (a, b) = (labelling[u], labelling[w]);
                if a < b {
                    edges.push(((a as u64) << 36) | ((b as u64) << 8) | c as u64);
                }
            }
        }
        edges.sort_unstable();
        out.extend(edges);
        out
    }

    /// Equitable refinement of `p` after splitting its cells by vertex colour.
    pub fn refine(&self, p: &OrderedPartition) -> OrderedPartition {
        partition::refine(self, p)
    }

    /// Generators of the full automorphism group together with a canonical
    /// labelling and its certificate.
    pub fn automorphisms(&self) -> GraphAutomorphisms {
        let outcome = search::run(self);
        GraphAutomorphisms {
            generators: outcome.generators,
            canonical_labelling: outcome.labelling,
            certificate: outcome.certificate,
            stats: outcome.stats,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphAutomorphisms {
    pub generators: Vec<Permutation>,
    /// Vertex ↦ canonical label.
    pub canonical_labelling: Vec<usize>,
    pub certificate: Vec<u64>,
    pub stats: SearchStats,
}

/// Symmetries of a Hamiltonian graph, both on all vertices and on qubits.
#[derive(Debug, Clone)]
pub struct AutomorphismResult {
    pub generators_on_v: Vec<Permutation>,
    /// Restrictions to qubit vertices, with generators already implied by
    /// earlier ones dropped.
    pub qubit_generators: Vec<Permutation>,
    pub group: PermutationGroup,
    pub canonical_certificate: Vec<u8>,
    /// Vertex ↦ canonical label; qubit vertices receive labels `0..n`.
    pub canonical_labelling: Vec<usize>,
    pub stats: SearchStats,
    pub elapsed: std::time::Duration,
}

impl AutomorphismResult {
    pub fn order(&self) -> &num_bigint::BigUint {
        self.group.order()
    }
}

pub fn refine(g: &ColouredBipartiteGraph, p: &OrderedPartition) -> OrderedPartition {
    g.search_graph().refine(p)
}

/// Restricts a vertex permutation to the qubit vertices `0..n`.
pub fn restrict_to_qubits(perm_on_v: &Permutation, n: usize) -> Result<Permutation, SolverError> {
    if perm_on_v.degree() < n {
        return Err(SolverError::DegreeMismatch {
            degree: perm_on_v.degree(),
            vertices: n,
        });
    }
    let images = (0..n)
        .map(|i| {
            let x = perm_on_v.image(i);
            if x < n {
                Ok(x)
            } else {
                Err(SolverError::MixesPartitions { vertex: i })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Permutation::from_images(images)?)
}

pub fn automorphism_generators(g: &ColouredBipartiteGraph) -> Result<AutomorphismResult, SolverError> {
    let started = Instant::now();
    let found = g.search_graph().automorphisms();
    let n = g.num_qubits();
    let mut group = PermutationGroup::trivial(n);
    let mut qubit_generators = Vec::new();
    for gamma in &found.generators {
        g.verify_automorphism(gamma)?;
        let sigma = restrict_to_qubits(gamma, n)?;
        if group.insert(sigma.clone())? {
            qubit_generators.push(sigma);
        }
    }
    Ok(AutomorphismResult {
        generators_on_v: found.generators,
        qubit_generators,
        group,
        canonical_certificate: g.certificate_bytes(&found.certificate),
        canonical_labelling: found.canonical_labelling,
        stats: found.stats,
        elapsed: started.elapsed(),
    })
}

/// Canonical certificate: equal for two graphs iff they are isomorphic.
pub fn canonical_form(g: &ColouredBipartiteGraph) -> Vec<u8> {
    let found = g.search_graph().automorphisms();
    g.certificate_bytes(&found.certificate)
}

pub fn find_symmetry_group(h: &Hamiltonian, policy: &CoefficientPolicy) -> Result<AutomorphismResult, SolverError> {
    let g = ColouredBipartiteGraph::build(h, policy);
    automorphism_generators(&g)
}

#[cfg(test)]
mod tests {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::models::{Boundary, ModelSpec};
    use crate::oracle::brute_force_group;
    use crate::pauli::{Coefficient, PauliOp, PauliString, Term};

    const EQ21: &str = "-1 IXY\n1 YZZ\n-2 YXI\n2 ZIZ\n-3 XXI\n3 YZI\n";

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    fn group_of(text: &str) -> AutomorphismResult {
        find_symmetry_group(&Hamiltonian::parse(text).unwrap(), &CoefficientPolicy::Exact).unwrap()
    }

    fn random_hamiltonian(
        rng: &mut ChaCha8Rng,
        n: usize,
        m: usize,
        letters: &[PauliOp],
        coeffs: &[i64],
    ) -> Hamiltonian {
        let mut terms: Vec<Term> = Vec::new();
        for _ in 0..m {
            let ops: Vec<PauliOp> = (0..n).map(|_| *letters.choose(rng).unwrap()).collect();
            let pauli = PauliString::from_ops(&ops);
            if terms.iter().all(|t| t.pauli != pauli) {
                terms.push(Term::new(*coeffs.choose(rng).unwrap(), pauli));
            }
        }
        Hamiltonian::new(terms).unwrap()
    }

    #[test]
    fn ring_of_five() {
        let spec = ModelSpec::tfim_1d(5, Boundary::Periodic);
        let r = find_symmetry_group(&spec.build().unwrap(), &CoefficientPolicy::Exact).unwrap();
        let table = PermutationGroup::new(5, &[cyc("(2 5)(3 4)", 5), cyc("(1 2)(3 5)", 5)]).unwrap();
        assert_eq!(r.order(), &10u32.into());
        assert!(r.group.equals(&table).unwrap());
    }

    #[test]
    fn inhomogeneous_ring_is_rigid() {
        let spec = ModelSpec::tfim_1d_inhomogeneous(5, Boundary::Periodic);
        let r = find_symmetry_group(&spec.build().unwrap(), &CoefficientPolicy::Exact).unwrap();
        assert_eq!(r.order(), &1u32.into());
        assert!(r.qubit_generators.is_empty());
    }

    #[test]
    fn two_fields() {
        let r = group_of("1 XI\n1 IX");
        assert_eq!(r.qubit_generators, vec![cyc("(1 2)", 2)]);
    }

    #[test]
    fn generators_are_verified_symmetries() {
        let h = Hamiltonian::parse(EQ21).unwrap();
        let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
        let r = automorphism_generators(&g).unwrap();
        for gamma in &r.generators_on_v {
            assert_eq!(g.verify_automorphism(gamma), Ok(()));
        }
        for sigma in &r.qubit_generators {
            assert!(h.is_symmetry(sigma).unwrap());
        }
    }

    #[test]
    fn restriction() {
        assert_eq!(
            restrict_to_qubits(&Permutation::identity(9), 3).unwrap(),
            Permutation::identity(3)
        );
        let bad = cyc("(1 4)", 9);
        assert_eq!(
            restrict_to_qubits(&bad, 3),
            Err(SolverError::MixesPartitions { vertex: 0 })
        );
    }

    #[test]
    fn refinement_examples() {
        let g = ColouredBipartiteGraph::build(&Hamiltonian::parse(EQ21).unwrap(), &CoefficientPolicy::Exact);
        let unit = OrderedPartition::unit(9);
        let p = refine(&g, &unit);
        assert!(p.refines(&unit));
        assert!(p.is_equitable(&g.search_graph()));
        // distinct coefficients single out every term, which pins the qubits
        assert!(p.is_discrete());
        let d = OrderedPartition::discrete(9);
        assert_eq!(refine(&g, &d), d);
    }

    #[test]
    fn found_generators_stabilise_refined_cells() {
        let h = ModelSpec::tfim_1d(6, Boundary::Periodic).build().unwrap();
        let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
        let p = refine(&g, &OrderedPartition::unit(g.num_vertices()));
        let r = automorphism_generators(&g).unwrap();
        for gamma in &r.generators_on_v {
            for cell in &p.cells {
                let mut image: Vec<usize> = cell.iter().map(|&v| gamma.image(v)).collect();
                image.sort_unstable();
                let mut sorted = cell.clone();
                sorted.sort_unstable();
                assert_eq!(image, sorted);
            }
        }
    }

    #[test]
    fn agrees_with_oracle_on_random_hamiltonians() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let letters = [PauliOp::I, PauliOp::I, PauliOp::X, PauliOp::Z];
        for _ in 0..150 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=10);
            let h = random_hamiltonian(&mut rng, n, m, &letters, &[1, 2]);
            let r = find_symmetry_group(&h, &CoefficientPolicy::Exact).unwrap();
            let oracle = brute_force_group(&h, 8).unwrap();
            assert!(r.group.equals(&oracle).unwrap(), "{h}");
        }
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = Hamiltonian::parse(EQ21).unwrap();
        let base = canonical_form(&ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact));
        let ring = ModelSpec::tfim_1d(7, Boundary::Periodic).build().unwrap();
        let ring_base = canonical_form(&ColouredBipartiteGraph::build(&ring, &CoefficientPolicy::Exact));
        for _ in 0..100 {
            for (h, base) in [(&h, &base), (&ring, &ring_base)] {
                let mut images: Vec<usize> = (0..h.num_qubits()).collect();
                images.shuffle(&mut rng);
                let hp = h.permuted(&Permutation::from_images(images).unwrap()).unwrap();
                let cert = canonical_form(&ColouredBipartiteGraph::build(&hp, &CoefficientPolicy::Exact));
                assert_eq!(&cert, base);
            }
        }
        let changed = Hamiltonian::parse("-1 IXY\n1 YZZ\n-2 YXI\n2 ZIZ\n-4 XXI\n3 YZI\n").unwrap();
        assert_ne!(
            canonical_form(&ColouredBipartiteGraph::build(&changed, &CoefficientPolicy::Exact)),
            base
        );
    }

    #[test]
    fn subdivided_encoding_gives_the_same_group() {
        for h in [
            ModelSpec::tfim_1d(6, Boundary::Periodic).build().unwrap(),
            ModelSpec::tfim_2d_square(2, 2).build().unwrap(),
            Hamiltonian::parse("1 XY\n1 YX\n2 ZZ").unwrap(),
        ] {
            let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
            let n = h.num_qubits();
            let sub = g.subdivided().automorphisms();
            let gens: Vec<Permutation> = sub
                .generators
                .iter()
                .map(|p| restrict_to_qubits(p, n).unwrap())
                .collect();
            let via_sub = PermutationGroup::new(n, &gens).unwrap();
            assert!(automorphism_generators(&g).unwrap().group.equals(&via_sub).unwrap());
        }
    }

    #[test]
    fn complex_coefficients_colour_terms() {
        let a = Coefficient::parse("1+1i").unwrap();
        let h = Hamiltonian::new(vec![
            Term::new(a, "XI".parse().unwrap()),
            Term::new(1, "IX".parse().unwrap()),
        ])
        .unwrap();
        let r = find_symmetry_group(&h, &CoefficientPolicy::Exact).unwrap();
        assert_eq!(r.order(), &1u32.into());
    }
}
