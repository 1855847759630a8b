//! Brute-force ground truth by enumerating every qubit permutation.
//!
//! Deliberately naive: nothing here touches the graph or the solver.

use thiserror::Error;

use crate::group::PermutationGroup;
use crate::pauli::Hamiltonian;
use crate::perm::Permutation;

pub const DEFAULT_N_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} qubits exceeds the brute-force limit of {n_max}")]
    TooLarge { n: usize, n_max: usize },
    #[error("qubit counts differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
}

/// Iterator over `S_n` in lexicographic order of image vectors.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            next: Some((0..n).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut a = current.clone();
        if let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) {
            let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
            a.swap(i - 1, j);
            a[i..].reverse();
            self.next = Some(a);
        }
        Some(Permutation::from_images(current).expect("lexicographic successor is a bijection"))
    }
}

fn check_size(n: usize, n_max: usize) -> Result<(), OracleError> {
    if n > n_max {
        Err(OracleError::TooLarge { n, n_max })
    } else {
        Ok(())
    }
}

/// Every `σ ∈ S_n` with `σ(T) = T`, in lexicographic order.
pub fn brute_force_symmetries(h: &Hamiltonian, n_max: usize) -> Result<Vec<Permutation>, OracleError> {
    check_size(h.num_qubits(), n_max)?;
    Ok(Permutations::new(h.num_qubits())
        .filter(|s| h.permuted(s).expect("degree matches") == *h)
        .collect())
}

/// The group generated by every symmetry found by enumeration.
pub fn brute_force_group(h: &Hamiltonian, n_max: usize) -> Result<PermutationGroup, OracleError> {
    let syms = brute_force_symmetries(h, n_max)?;
    Ok(PermutationGroup::new(h.num_qubits(), &syms).expect("symmetries share the qubit degree"))
}

/// The lexicographically first `σ` with `σ(h1) = h2`, if any.
pub fn brute_force_equivalent(
    h1: &Hamiltonian,
    h2: &Hamiltonian,
    n_max: usize,
) -> Result<Option<Permutation>, OracleError> {
    if h1.num_qubits() != h2.num_qubits() {
        return Err(OracleError::SizeMismatch {
            left: h1.num_qubits(),
            right: h2.num_qubits(),
        });
    }
    check_size(h1.num_qubits(), n_max)?;
    if h1.num_terms() != h2.num_terms() {
        return Ok(None);
    }
    Ok(Permutations::new(h1.num_qubits()).find(|s| h1.permuted(s).expect("degree matches") == *h2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(text: &str) -> Hamiltonian {
        Hamiltonian::parse(text).unwrap()
    }

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<Vec<usize>> = Permutations::new(3).map(|p| p.images().to_vec()).collect();
        assert_eq!(all, [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]);
        assert_eq!(Permutations::new(5).count(), 120);
        assert_eq!(Permutations::new(0).count(), 1);
    }

    #[test]
    fn two_qubit_xx() {
        let g = brute_force_group(&h("1 XX"), DEFAULT_N_MAX).unwrap();
        assert_eq!(*g.order(), 2u32.into());
    }

    #[test]
    fn tfim_ring_and_inhomogeneous() {
        let ring = h("-1 ZZIII\n-1 IZZII\n-1 IIZZI\n-1 IIIZZ\n-1 ZIIIZ\n\
                      -1 XIIII\n-1 IXIII\n-1 IIXII\n-1 IIIXI\n-1 IIIIX");
        assert_eq!(*brute_force_group(&ring, DEFAULT_N_MAX).unwrap().order(), 10u32.into());
        let inhom = h("-1 ZZIII\n-2 IZZII\n-3 IIZZI\n-4 IIIZZ\n-5 ZIIIZ\n\
                       -1 XIIII\n-1 IXIII\n-1 IIXII\n-1 IIIXI\n-1 IIIIX");
        assert_eq!(*brute_force_group(&inhom, DEFAULT_N_MAX).unwrap().order(), 1u32.into());
    }

    #[test]
    fn found_symmetries_are_closed() {
        let ring = h("1 ZZIII\n1 IZZII\n1 IIZZI\n1 IIIZZ\n1 ZIIIZ");
        let syms = brute_force_symmetries(&ring, DEFAULT_N_MAX).unwrap();
        for a in &syms {
            for b in &syms {
                assert!(syms.contains(&a.compose(b).unwrap()));
            }
        }
    }

    #[test]
    fn size_limit() {
        let big = h("1 XXXXXXXXX");
        assert_eq!(
            brute_force_group(&big, DEFAULT_N_MAX).unwrap_err(),
            OracleError::TooLarge { n: 9, n_max: 8 }
        );
        assert!(brute_force_group(&big, 9).is_ok());
    }

    #[test]
    fn equivalence_examples() {
        let a = h("-1 IXY\n1 YZZ\n-2 YXI");
        assert_eq!(
            brute_force_equivalent(&a, &a, 8).unwrap(),
            Some(Permutation::identity(3))
        );
        assert_eq!(
            brute_force_equivalent(&h("1 XI"), &h("1 IX"), 8).unwrap(),
            Some(cyc("(1 2)", 2))
        );
        assert_eq!(brute_force_equivalent(&h("1 XX"), &h("1 YY"), 8).unwrap(), None);
        assert!(matches!(
            brute_force_equivalent(&h("1 X"), &h("1 XX"), 8),
            Err(OracleError::SizeMismatch { .. })
        ));
    }
}
