//! Permutation equivalence of two Hamiltonians through canonical labellings.

use thiserror::Error;

use crate::graph::{CoefficientClasses, CoefficientPolicy, ColouredBipartiteGraph};
use crate::pauli::{Hamiltonian, HamiltonianError};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("qubit counts differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("canonical labellings agree but the extracted witness {0} does not map the terms")]
    BadWitness(String),
}

/// Result of comparing two Hamiltonians, kept for reporting.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub witness: Option<Permutation>,
    pub certificate_left: Vec<u8>,
    pub certificate_right: Vec<u8>,
}

/// Canonical comparison with both certificates retained.
pub fn compare(
    h1: &Hamiltonian,
    h2: &Hamiltonian,
    policy: &CoefficientPolicy,
) -> Result<EquivalenceReport, EquivalenceError> {
    let n = h1.num_qubits();
    if n != h2.num_qubits() {
        return Err(EquivalenceError::SizeMismatch {
            left: n,
            right: h2.num_qubits(),
        });
    }
    let classes = CoefficientClasses::from_hamiltonians(&[h1, h2], policy);
    let g1 = ColouredBipartiteGraph::build_with_classes(h1, &classes);
    let g2 = ColouredBipartiteGraph::build_with_classes(h2, &classes);
    let a1 = g1.search_graph().automorphisms();
    let a2 = g2.search_graph().automorphisms();
    let certificate_left = g1.certificate_bytes(&a1.certificate);
    let certificate_right = g2.certificate_bytes(&a2.certificate);
    let witness = if certificate_left == certificate_right {
        // φ = label₂⁻¹ ∘ label₁ maps g1 onto g2; qubit vertices hold labels 0..n
        let mut from_label = vec![0; a2.canonical_labelling.len()];
        for (v, &l) in a2.canonical_labelling.iter().enumerate() {
            from_label[l] = v;
        }
        let images = (0..n).map(|i| from_label[a1.canonical_labelling[i]]).collect();
        let sigma = Permutation::from_images(images).map_err(|e| EquivalenceError::BadWitness(e.to_string()))?;
        if !respects_classes(&sigma, h1, h2, policy)? {
            return Err(EquivalenceError::BadWitness(sigma.format_cycles()));
        }
        Some(sigma)
    } else {
        None
    };
    Ok(EquivalenceReport {
        witness,
        certificate_left,
        certificate_right,
    })
}

/// Some `σ` with `σ(h1) = h2` (coefficients compared under `policy`), or
/// `None` when the Hamiltonians are not permutation-equivalent.
pub fn permutation_equivalent(
    h1: &Hamiltonian,
    h2: &Hamiltonian,
    policy: &CoefficientPolicy,
) -> Result<Option<Permutation>, EquivalenceError> {
    Ok(compare(h1, h2, policy)?.witness)
}

/// Exact check that `sigma` maps the terms of `h1` onto those of `h2`.
pub fn verify_witness(sigma: &Permutation, h1: &Hamiltonian, h2: &Hamiltonian) -> Result<bool, EquivalenceError> {
    if h1.num_qubits() != h2.num_qubits() {
        return Err(EquivalenceError::SizeMismatch {
            left: h1.num_qubits(),
            right: h2.num_qubits(),
        });
    }
    Ok(h1.permuted(sigma)? == *h2)
}

/// Like [`verify_witness`], but coefficients only need to share a class.
pub fn respects_classes(
    sigma: &Permutation,
    h1: &Hamiltonian,
    h2: &Hamiltonian,
    policy: &CoefficientPolicy,
) -> Result<bool, EquivalenceError> {
    if h1.num_qubits() != h2.num_qubits() {
        return Err(EquivalenceError::SizeMismatch {
            left: h1.num_qubits(),
            right: h2.num_qubits(),
        });
    }
    if h1.num_terms() != h2.num_terms() {
        return Ok(false);
    }
    for t in h1.terms() {
        let image = t.pauli.permuted(sigma)?;
        match h2.coefficient_of(&image) {
            Some(c) if policy.class_key(&c) == policy.class_key(&t.coeff) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_equivalent;

    const EQ21: &str = "-1 IXY\n1 YZZ\n-2 YXI\n2 ZIZ\n-3 XXI\n3 YZI\n";

    fn h(text: &str) -> Hamiltonian {
        Hamiltonian::parse(text).unwrap()
    }

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn eq21_under_a_three_cycle() {
        let a = h(EQ21);
        let b = a.permuted(&cyc("(1 3 2)", 3)).unwrap();
        let w = permutation_equivalent(&a, &b, &CoefficientPolicy::Exact)
            .unwrap()
            .unwrap();
        assert!(verify_witness(&w, &a, &b).unwrap());
    }

    #[test]
    fn ring_versus_chain() {
        let ring = h("-1 ZZIII\n-1 IZZII\n-1 IIZZI\n-1 IIIZZ\n-1 ZIIIZ\n\
                      -1 XIIII\n-1 IXIII\n-1 IIXII\n-1 IIIXI\n-1 IIIIX");
        let chain = h("-1 ZZIII\n-1 IZZII\n-1 IIZZI\n-1 IIIZZ\n\
                       -1 XIIII\n-1 IXIII\n-1 IIXII\n-1 IIIXI\n-1 IIIIX");
        assert_eq!(
            permutation_equivalent(&ring, &chain, &CoefficientPolicy::Exact).unwrap(),
            None
        );
    }

    #[test]
    fn swapped_coefficients_are_inequivalent() {
        let a = h(EQ21);
        let b = h("-1 IXY\n1 YZZ\n-2 YXI\n2 ZIZ\n3 XXI\n-3 YZI\n");
        assert_eq!(brute_force_equivalent(&a, &b, 8).unwrap(), None);
        assert_eq!(permutation_equivalent(&a, &b, &CoefficientPolicy::Exact).unwrap(), None);
    }

    #[test]
    fn changed_coefficient_changes_certificate() {
        let a = h(EQ21);
        let b = h("-1 IXY\n1 YZZ\n-2 YXI\n2 ZIZ\n-4 XXI\n3 YZI\n");
        let r = compare(&a, &b, &CoefficientPolicy::Exact).unwrap();
        assert_ne!(r.certificate_left, r.certificate_right);
        assert!(r.witness.is_none());
    }

    #[test]
    fn quantized_policy_accepts_near_matches() {
        let a = h("1.0001 XI\n2 ZZ");
        let b = h("0.9999 IX\n2 ZZ");
        assert_eq!(permutation_equivalent(&a, &b, &CoefficientPolicy::Exact).unwrap(), None);
        let q = CoefficientPolicy::from_epsilon_str("0.01").unwrap();
        let w = permutation_equivalent(&a, &b, &q).unwrap().unwrap();
        assert_eq!(w, cyc("(1 2)", 2));
    }

    #[test]
    fn witness_checks() {
        let id = Permutation::identity(3);
        assert!(verify_witness(&id, &h(EQ21), &h(EQ21)).unwrap());
        let swap = cyc("(1 2)", 2);
        assert!(verify_witness(&swap, &h("1 XI"), &h("1 IX")).unwrap());
        assert!(!verify_witness(&swap, &h("1 XI"), &h("1 XI")).unwrap());
        assert!(verify_witness(&swap, &h("1 XI"), &h("1 XII")).is_err());
        assert!(matches!(
            permutation_equivalent(&h("1 X"), &h("1 XX"), &CoefficientPolicy::Exact),
            Err(EquivalenceError::SizeMismatch { .. })
        ));
    }
}
