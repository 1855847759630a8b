//! The coloured bipartite graph of a Hamiltonian.
//!
//! Qubit `i` becomes vertex `i`; term `r` (in serialised order) becomes
//! vertex `n + r`. Qubit `i` and term `r` are adjacent iff the term acts on
//! the qubit with a non-identity letter, which becomes the edge colour.
//! Term vertices are coloured by the class of their coefficient.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rust_decimal::{Decimal, RoundingStrategy};
use serde::Serialize;
use thiserror::Error;

use crate::pauli::{Coefficient, Hamiltonian, PauliOp, PauliString, Term};
use crate::perm::Permutation;
use crate::solver::ColouredGraph;

/// How coefficients are grouped into vertex colours.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CoefficientPolicy {
    /// Exact decimal equality.
    #[default]
    Exact,
    /// Real and imaginary parts rounded to the nearest multiple of `epsilon`
    /// (halves away from zero).
    Quantized { epsilon: Decimal },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("quantisation epsilon must be a positive decimal, got `{0}`")]
    BadEpsilon(String),
}

impl CoefficientPolicy {
    pub fn quantized(epsilon: Decimal) -> Result<Self, PolicyError> {
        if epsilon <= Decimal::ZERO {
            return Err(PolicyError::BadEpsilon(epsilon.to_string()));
        }
        Ok(CoefficientPolicy::Quantized {
            epsilon: epsilon.normalize(),
        })
    }

    /// Parses an epsilon such as `0.001` into a quantised policy.
    pub fn from_epsilon_str(text: &str) -> Result<Self, PolicyError> {
        let eps = Decimal::from_str(text.trim())
            .or_else(|_| Decimal::from_scientific(text.trim()))
            .map_err(|_| PolicyError::BadEpsilon(text.to_string()))?;
        Self::quantized(eps)
    }

    /// Class representative of `c`; two coefficients share a colour iff their
    /// keys are equal.
    pub fn class_key(&self, c: &Coefficient) -> Coefficient {
        match self {
            CoefficientPolicy::Exact => *c,
            CoefficientPolicy::Quantized { epsilon } => {
                Coefficient::new(quantize(c.re(), *epsilon), quantize(c.im(), *epsilon))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CoefficientPolicy::Exact => "exact".to_string(),
            CoefficientPolicy::Quantized { epsilon } => format!("quantized({epsilon})"),
        }
    }
}

fn quantize(x: Decimal, eps: Decimal) -> Decimal {
    x.checked_div(eps)
        .map(|q| q.round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero))
        .and_then(|q| q.checked_mul(eps))
        .unwrap_or(x)
}

/// Ordinal coefficient classes shared by one or more graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientClasses {
    policy: CoefficientPolicy,
    /// Sorted distinct class keys; the index is the class ordinal.
    keys: Vec<Coefficient>,
}

impl CoefficientClasses {
    /// Classes over the union of every Hamiltonian's coefficients, ordered by
    /// real part and then imaginary part.
    pub fn from_hamiltonians(hs: &[&Hamiltonian], policy: &CoefficientPolicy) -> Self {
        let mut keys: Vec<Coefficient> = hs
            .iter()
            .flat_map(|h| h.terms().iter().map(|t| policy.class_key(&t.coeff)))
            .collect();
        keys.sort();
        keys.dedup();
        CoefficientClasses {
            policy: policy.clone(),
            keys,
        }
    }

    pub fn policy(&self) -> &CoefficientPolicy {
        &self.policy
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn representatives(&self) -> &[Coefficient] {
        &self.keys
    }

    pub fn class_of(&self, c: &Coefficient) -> Option<usize> {
        self.keys.binary_search(&self.policy.class_key(c)).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexColor {
    Qubit,
    Term { coeff_class: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeColor {
    X,
    Y,
    Z,
}

impl EdgeColor {
    pub fn from_op(op: PauliOp) -> Option<EdgeColor> {
        match op {
            PauliOp::I => None,
            PauliOp::X => Some(EdgeColor::X),
            PauliOp::Y => Some(EdgeColor::Y),
            PauliOp::Z => Some(EdgeColor::Z),
        }
    }

    pub fn as_op(self) -> PauliOp {
        match self {
            EdgeColor::X => PauliOp::X,
            EdgeColor::Y => PauliOp::Y,
            EdgeColor::Z => PauliOp::Z,
        }
    }

    fn index(self) -> u8 {
        self as u8
    }
}

/// Which automorphism condition a vertex map breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomorphismViolation {
    #[error("map has degree {degree}, graph has {vertices} vertices")]
    Degree { degree: usize, vertices: usize },
    #[error("vertex colour of {vertex} not preserved")]
    VertexColour { vertex: usize },
    #[error("edge ({u}, {v}) has no image edge")]
    Adjacency { u: usize, v: usize },
    #[error("edge colour of ({u}, {v}) not preserved")]
    EdgeColour { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredBipartiteGraph {
    n_qubits: usize,
    terms: Vec<Term>,
    term_class: Vec<usize>,
    classes: CoefficientClasses,
    /// Sorted `(neighbour, colour)` lists for every vertex.
    adjacency: Vec<Vec<(usize, EdgeColor)>>,
    num_edges: usize,
}

impl ColouredBipartiteGraph {
    pub fn build(h: &Hamiltonian, policy: &CoefficientPolicy) -> Self {
        let classes = CoefficientClasses::from_hamiltonians(&[h], policy);
        Self::build_with_classes(h, &classes)
    }

    /// Builds against a shared class table, which must cover every
    /// coefficient of `h`.
    pub fn build_with_classes(h: &Hamiltonian, classes: &CoefficientClasses) -> Self {
        let n = h.num_qubits();
        let m = h.num_terms();
        let mut adjacency = vec![Vec::new(); n + m];
        let mut term_class = Vec::with_capacity(m);
        let mut num_edges = 0;
        for (r, term) in h.terms().iter().enumerate() {
            term_class.push(
                classes
                    .class_of(&term.coeff)
                    .expect("class table covers every coefficient"),
            );
            for (i, op) in term.pauli.support() {
                let colour = EdgeColor::from_op(op).expect("support letters are non-identity");
                adjacency[i].push((n + r, colour));
                adjacency[n + r].push((i, colour));
                num_edges += 1;
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ColouredBipartiteGraph {
            n_qubits: n,
            terms: h.terms().to_vec(),
            term_class,
            classes: classes.clone(),
            adjacency,
            num_edges,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.n_qubits + self.terms.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn classes(&self) -> &CoefficientClasses {
        &self.classes
    }

    pub fn is_qubit(&self, v: usize) -> bool {
        v < self.n_qubits
    }

    pub fn vertex_color(&self, v: usize) -> VertexColor {
        if v < self.n_qubits {
            VertexColor::Qubit
        } else {
            VertexColor::Term {
                coeff_class: self.term_class[v - self.n_qubits],
            }
        }
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, EdgeColor)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_color(&self, u: usize, v: usize) -> Option<EdgeColor> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    /// All edges as `(qubit vertex, term vertex, colour)`, qubit-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeColor)> + '_ {
        (0..self.n_qubits).flat_map(move |q| self.adjacency[q].iter().map(move |&(t, c)| (q, t, c)))
    }

    /// The term behind a term vertex.
    pub fn term_of_vertex(&self, v: usize) -> Option<&Term> {
        v.checked_sub(self.n_qubits).and_then(|r| self.terms.get(r))
    }

    pub fn vertex_of_term(&self, r: usize) -> usize {
        self.n_qubits + r
    }

    /// Recovers the term set, using each class's representative coefficient.
    /// Under the exact policy this is the original Hamiltonian.
    pub fn reconstruct(&self) -> Hamiltonian {
        let reps = self.classes.representatives();
        let terms = (0..self.num_terms())
            .map(|r| {
                let v = self.n_qubits + r;
                let letters: Vec<(usize, PauliOp)> = self.adjacency[v].iter().map(|&(q, c)| (q, c.as_op())).collect();
                Term {
                    coeff: reps[self.term_class[r]],
                    pauli: PauliString::from_sparse(self.n_qubits, &letters),
                }
            })
            .collect();
        Hamiltonian::new(terms).expect("graph of a valid Hamiltonian reconstructs")
    }

    /// Checks adjacency, vertex-colour and edge-colour preservation by direct
    /// comparison of edge sets.
    pub fn verify_automorphism(&self, phi: &Permutation) -> Result<(), AutomorphismViolation> {
        let n = self.num_vertices();
        if phi.degree() != n {
            return Err(AutomorphismViolation::Degree {
                degree: phi.degree(),
                vertices: n,
            });
        }
        for v in 0..n {
            if self.vertex_color(v) != self.vertex_color(phi.image(v)) {
                return Err(AutomorphismViolation::VertexColour { vertex: v });
            }
        }
        let mut image_edges = 0;
        for (q, t, c) in self.edges() {
            match self.edge_color(phi.image(q), phi.image(t)) {
                None => return Err(AutomorphismViolation::Adjacency { u: q, v: t }),
                Some(c2) if c2 != c => return Err(AutomorphismViolation::EdgeColour { u: q, v: t }),
                Some(_) => image_edges += 1,
            }
        }
        // injective on edges and finite, hence onto: non-edges map to non-edges
        debug_assert_eq!(image_edges, self.num_edges);
        Ok(())
    }

    /// Solver view: qubits colour 0, term class `k` colour `k + 1`; edge
    /// colours X, Y, Z as 0, 1, 2.
    pub fn search_graph(&self) -> ColouredGraph {
        let colours = (0..self.num_vertices())
            .map(|v| match self.vertex_color(v) {
                VertexColor::Qubit => 0,
                VertexColor::Term { coeff_class } => coeff_class as u32 + 1,
            })
            .collect();
        let edges: Vec<(usize, usize, u8)> = self.edges().map(|(q, t, c)| (q, t, c.index())).collect();
        ColouredGraph::new(colours, &edges)
    }

    /// Vertex-coloured encoding with one subdivision vertex per edge,
    /// coloured by the edge's letter; all edges share one colour. Vertex
    /// numbering keeps qubits and terms in place, followed by edge vertices
    /// in [`edges`](Self::edges) order.
    pub fn subdivided(&self) -> ColouredGraph {
        let base = self.num_vertices();
        let letter_colour0 = self.classes.len() as u32 + 1;
        let mut colours: Vec<u32> = (0..base)
            .map(|v| match self.vertex_color(v) {
                VertexColor::Qubit => 0,
                VertexColor::Term { coeff_class } => coeff_class as u32 + 1,
            })
            .collect();
        let mut edges = Vec::with_capacity(2 * self.num_edges);
        for (k, (q, t, c)) in self.edges().enumerate() {
            colours.push(letter_colour0 + c.index() as u32);
            edges.push((q, base + k, 0));
            edges.push((base + k, t, 0));
        }
        ColouredGraph::new(colours, &edges)
    }

    /// Canonical certificate bytes: a header naming the qubit/term counts and
    /// the class representatives, followed by the packed leaf word.
    pub(crate) fn certificate_bytes(&self, word: &[u64]) -> Vec<u8> {
        let mut header = format!(
            "{} {} {};",
            self.n_qubits,
            self.num_terms(),
            self.classes.policy.describe()
        );
        for rep in self.classes.representatives() {
            let _ = write!(header, "{rep},");
        }
        header.push(';');
        let mut out = header.into_bytes();
        for x in word {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    pub fn degree_report(&self, h: &Hamiltonian) -> DegreeReport {
        let k = h.locality();
        let d = h.interaction_degree();
        let max_term_deg = (self.n_qubits..self.num_vertices())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0);
        let max_qubit_deg = (0..self.n_qubits).map(|v| self.degree(v)).max().unwrap_or(0);
        DegreeReport {
            k,
            d,
            max_term_deg,
            max_qubit_deg,
            bound_qubit: qubit_degree_bound(d, k),
        }
    }

    /// Graphviz rendering: qubits as circles on one rank, terms as boxes on
    /// another, edges labelled by their letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hamiltonian {\n  rankdir=LR;\n");
        out.push_str("  { rank=same;\n");
        for q in 0..self.n_qubits {
            let _ = writeln!(out, "    q{} [shape=circle, kind=\"qubit\"];", q + 1);
        }
        out.push_str("  }\n  { rank=same;\n");
        for (r, term) in self.terms.iter().enumerate() {
            let _ = writeln!(
                out,
                "    t{} [shape=box, kind=\"term\", coeff_class={}, label=\"{} {}\"];",
                r + 1,
                self.term_class[r],
                term.coeff,
                term.pauli
            );
        }
        out.push_str("  }\n");
        for (q, t, c) in self.edges() {
            let (letter, colour) = match c {
                EdgeColor::X => ("X", "red"),
                EdgeColor::Y => ("Y", "green"),
                EdgeColor::Z => ("Z", "blue"),
            };
            let _ = writeln!(
                out,
                "  q{} -- t{} [label=\"{letter}\", color=\"{colour}\"];",
                q + 1,
                t - self.n_qubits + 1
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphDump {
        let mut vertices = Vec::with_capacity(self.num_vertices());
        for q in 0..self.n_qubits {
            vertices.push(VertexDump {
                id: q,
                kind: "qubit",
                label: format!("q{}", q + 1),
                coeff_class: None,
                coefficient: None,
                pauli: None,
            });
        }
        for (r, term) in self.terms.iter().enumerate() {
            vertices.push(VertexDump {
                id: self.n_qubits + r,
                kind: "term",
                label: format!("t{}", r + 1),
                coeff_class: Some(self.term_class[r]),
                coefficient: Some(term.coeff.to_string()),
                pauli: Some(term.pauli.to_string()),
            });
        }
        GraphDump {
            n_qubits: self.n_qubits,
            n_terms: self.num_terms(),
            policy: self.classes.policy.describe(),
            coefficient_classes: self.classes.representatives().iter().map(|c| c.to_string()).collect(),
            vertices,
            edges: self
                .edges()
                .map(|(q, t, c)| EdgeDump {
                    qubit: q,
                    term: t,
                    colour: c,
                })
                .collect(),
        }
    }
}

/// `C(d, k-1) · 3^k`, zero when `k = 0`.
pub fn qubit_degree_bound(d: usize, k: usize) -> BigUint {
    if k == 0 || k - 1 > d {
        return BigUint::zero();
    }
    let r = k - 1;
    let mut binom = BigUint::from(1u32);
    for i in 0..r {
        binom = binom * BigUint::from(d - i) / BigUint::from(i + 1);
    }
    binom * BigUint::from(3u32).pow(k as u32)
}

/// Observed graph degrees against the locality bounds `deg(term) ≤ k` and
/// `deg(qubit) ≤ C(d, k-1)·3^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub k: usize,
    pub d: usize,
    pub max_term_deg: usize,
    pub max_qubit_deg: usize,
    pub bound_qubit: BigUint,
}

impl DegreeReport {
    pub fn term_bound_holds(&self) -> bool {
        self.max_term_deg <= self.k
    }

    pub fn qubit_bound_holds(&self) -> bool {
        BigUint::from(self.max_qubit_deg) <= self.bound_qubit
    }

    pub fn holds(&self) -> bool {
        self.term_bound_holds() && self.qubit_bound_holds()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphDump {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub policy: String,
    pub coefficient_classes: Vec<String>,
    pub vertices: Vec<VertexDump>,
    pub edges: Vec<EdgeDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexDump {
    pub id: usize,
    pub kind: &'static str,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pauli: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeDump {
    pub qubit: usize,
    pub term: usize,
    pub colour: EdgeColor,
}

pub fn build_graph(h: &Hamiltonian, policy: &CoefficientPolicy) -> ColouredBipartiteGraph {
    ColouredBipartiteGraph::build(h, policy)
}

pub fn degree_report(h: &Hamiltonian, g: &ColouredBipartiteGraph) -> DegreeReport {
    g.degree_report(h)
}

pub fn export_dot(g: &ColouredBipartiteGraph) -> String {
    g.to_dot()
}
