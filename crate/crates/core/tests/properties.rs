use proptest::prelude::*;

use symmetra::equivalence::{permutation_equivalent, verify_witness};
use symmetra::graph::{CoefficientPolicy, ColouredBipartiteGraph};
use symmetra::group::PermutationGroup;
use symmetra::oracle::brute_force_group;
use symmetra::pauli::{Coefficient, Hamiltonian, PauliOp, PauliString, Term};
use symmetra::perm::Permutation;
use symmetra::solver::{canonical_form, find_symmetry_group, refine, OrderedPartition};

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// Small alphabets so that symmetric instances are common.
fn arb_hamiltonian(n: usize) -> impl Strategy<Value = Hamiltonian> {
    let letter =
        prop_oneof![3 => Just(PauliOp::I), 1 => Just(PauliOp::X), 1 => Just(PauliOp::Y), 1 => Just(PauliOp::Z)];
    let term = (
        prop::collection::vec(letter, n),
        prop_oneof![Just(1i64), Just(-1), Just(2)],
    )
        .prop_map(|(ops, c)| Term::new(c, PauliString::from_ops(&ops)));
    prop::collection::vec(term, 1..10).prop_map(|mut terms| {
        terms.sort_by(|a, b| a.pauli.cmp(&b.pauli));
        terms.dedup_by(|a, b| a.pauli == b.pauli);
        Hamiltonian::new(terms).unwrap()
    })
}

fn sized(max_n: usize) -> impl Strategy<Value = (Hamiltonian, Permutation)> {
    (1..=max_n).prop_flat_map(|n| (arb_hamiltonian(n), arb_perm(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_generators_are_symmetries((h, _) in sized(7)) {
        let r = find_symmetry_group(&h, &CoefficientPolicy::Exact).unwrap();
        for g in &r.qubit_generators {
            prop_assert!(h.is_symmetry(g).unwrap());
        }
    }

    #[test]
    fn solver_matches_oracle((h, _) in sized(6)) {
        let r = find_symmetry_group(&h, &CoefficientPolicy::Exact).unwrap();
        let oracle = brute_force_group(&h, 8).unwrap();
        prop_assert_eq!(r.order(), oracle.order());
        prop_assert!(r.group.equals(&oracle).unwrap());
    }

    #[test]
    fn graph_is_bipartite_and_faithful((h, _) in sized(7)) {
        let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
        for (q, t, c) in g.edges() {
            prop_assert!(g.is_qubit(q) && !g.is_qubit(t));
            let term = g.term_of_vertex(t).unwrap();
            prop_assert_eq!(Some(c.as_op()), Some(term.pauli.get(q)));
        }
        prop_assert_eq!(g.reconstruct(), h);
    }

    #[test]
    fn relabelling_is_a_graph_isomorphism((h, sigma) in sized(7)) {
        let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
        let gs = ColouredBipartiteGraph::build(&h.permuted(&sigma).unwrap(), &CoefficientPolicy::Exact);
        prop_assert_eq!(g.num_edges(), gs.num_edges());
        for (q, t, c) in g.edges() {
            let image = h.terms()[t - g.num_qubits()].pauli.permuted(&sigma).unwrap();
            let r = gs.vertex_of_term(
                (0..gs.num_terms()).find(|&r| gs.term_of_vertex(gs.vertex_of_term(r)).unwrap().pauli == image).unwrap(),
            );
            prop_assert_eq!(gs.edge_color(sigma.image(q), r), Some(c));
        }
        prop_assert_eq!(canonical_form(&g), canonical_form(&gs));
    }

    #[test]
    fn equivalence_witnesses_verify((h, sigma) in sized(7)) {
        let hs = h.permuted(&sigma).unwrap();
        let w = permutation_equivalent(&h, &hs, &CoefficientPolicy::Exact).unwrap().unwrap();
        prop_assert!(verify_witness(&w, &h, &hs).unwrap());
        // composing with a symmetry of h keeps it a witness
        let r = find_symmetry_group(&h, &CoefficientPolicy::Exact).unwrap();
        for g in &r.qubit_generators {
            prop_assert!(verify_witness(&w.compose(g).unwrap(), &h, &hs).unwrap());
        }
    }

    #[test]
    fn refinement_is_equitable_and_idempotent((h, _) in sized(7)) {
        let g = ColouredBipartiteGraph::build(&h, &CoefficientPolicy::Exact);
        let unit = OrderedPartition::unit(g.num_vertices());
        let p = refine(&g, &unit);
        prop_assert!(p.is_valid(g.num_vertices()));
        prop_assert!(p.refines(&unit));
        prop_assert!(p.is_equitable(&g.search_graph()));
        prop_assert_eq!(refine(&g, &p), p);
    }

    #[test]
    fn group_order_matches_closure(gens in (1usize..=6).prop_flat_map(|n| prop::collection::vec(arb_perm(n), 1..4))) {
        let n = gens[0].degree();
        let g = PermutationGroup::new(n, &gens).unwrap();
        let mut elements = vec![Permutation::identity(n)];
        let mut i = 0;
        while i < elements.len() {
            for s in &gens {
                let next = elements[i].compose(s).unwrap();
                if !elements.contains(&next) {
                    elements.push(next);
                }
            }
            i += 1;
        }
        prop_assert_eq!(g.order().clone(), (elements.len() as u64).into());
        for e in &elements {
            prop_assert!(g.contains(e).unwrap());
        }
    }

    #[test]
    fn quantized_classes_are_a_partition(values in prop::collection::vec(-2000i64..2000, 1..12)) {
        let policy = CoefficientPolicy::from_epsilon_str("0.01").unwrap();
        let coeffs: Vec<Coefficient> = values.iter().map(|&v| Coefficient::real(rust_decimal::Decimal::new(v, 3))).collect();
        for a in &coeffs {
            prop_assert_eq!(policy.class_key(&policy.class_key(a)), policy.class_key(a));
            for b in &coeffs {
                for c in &coeffs {
                    let same = |x: &Coefficient, y: &Coefficient| policy.class_key(x) == policy.class_key(y);
                    if same(a, b) && same(b, c) {
                        prop_assert!(same(a, c));
                    }
                }
            }
        }
    }
}
