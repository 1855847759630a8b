//! Benchmark spin models and their analytically known permutation groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rust_decimal::Decimal;
use thiserror::Error;

use crate::group::PermutationGroup;
use crate::pauli::{Coefficient, Hamiltonian, HamiltonianError, PauliOp, PauliString, Term};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0}")]
    InvalidSize(String),
    #[error("expected {expected} {what} values, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("coupling {0} appears on more than one bond")]
    DuplicateCoupling(Decimal),
    #[error("no known group for {0}")]
    NoKnownGroup(String),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Tfim1d,
    Tfim1dInhom,
    Tfim2dSquare,
    HeisenbergMf,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tfim1d" => Ok(Family::Tfim1d),
            "tfim1d-inhom" => Ok(Family::Tfim1dInhom),
            "tfim2d" => Ok(Family::Tfim2dSquare),
            "heisenberg-mf" => Ok(Family::HeisenbergMf),
            _ => Err(format!(
                "unknown family `{s}` (expected tfim1d, tfim1d-inhom, tfim2d or heisenberg-mf)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Tfim1d => "tfim1d",
            Family::Tfim1dInhom => "tfim1d-inhom",
            Family::Tfim2dSquare => "tfim2d",
            Family::HeisenbergMf => "heisenberg-mf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            _ => Err(format!("unknown boundary `{s}` (expected periodic or open)")),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

/// A model instance. `j` and `omega` hold one value for uniform models and
/// one value per bond / site for the inhomogeneous chain. For the square
/// lattice `n = lx · ly`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub lx: usize,
    pub ly: usize,
    pub j: Vec<Decimal>,
    pub omega: Vec<Decimal>,
    pub boundary: Boundary,
}

impl ModelSpec {
    pub fn tfim_1d(n: usize, boundary: Boundary) -> Self {
        ModelSpec {
            family: Family::Tfim1d,
            n,
            lx: n,
            ly: 1,
            j: vec![Decimal::ONE],
            omega: vec![Decimal::ONE],
            boundary,
        }
    }

    /// Couplings `1, 2, …` on successive bonds and a uniform unit field.
    pub fn tfim_1d_inhomogeneous(n: usize, boundary: Boundary) -> Self {
        let bonds = bond_count(n, boundary);
        ModelSpec {
            family: Family::Tfim1dInhom,
            n,
            lx: n,
            ly: 1,
            j: (1..=bonds as i64).map(Decimal::from).collect(),
            omega: vec![Decimal::ONE; n],
            boundary,
        }
    }

    pub fn tfim_2d_square(lx: usize, ly: usize) -> Self {
        ModelSpec {
            family: Family::Tfim2dSquare,
            n: lx * ly,
            lx,
            ly,
            j: vec![Decimal::ONE],
            omega: vec![Decimal::ONE],
            boundary: Boundary::Open,
        }
    }

    pub fn heisenberg_mean_field(n: usize) -> Self {
        ModelSpec {
            family: Family::HeisenbergMf,
            n,
            lx: n,
            ly: 1,
            j: vec![Decimal::ONE],
            omega: Vec::new(),
            boundary: Boundary::Open,
        }
    }

    pub fn with_couplings(mut self, j: Vec<Decimal>, omega: Vec<Decimal>) -> Self {
        self.j = j;
        self.omega = omega;
        self
    }

    pub fn build(&self) -> Result<Hamiltonian, ModelError> {
        let first = |v: &[Decimal], what| {
            v.first().copied().ok_or(ModelError::LengthMismatch {
                what,
                expected: 1,
                found: 0,
            })
        };
        match self.family {
            Family::Tfim1d => tfim_1d(
                self.n,
                first(&self.j, "J")?,
                first(&self.omega, "Omega")?,
                self.boundary,
            ),
            Family::Tfim1dInhom => tfim_1d_inhomogeneous(self.n, &self.j, &self.omega, self.boundary),
            Family::Tfim2dSquare => {
                tfim_2d_square(self.lx, self.ly, first(&self.j, "J")?, first(&self.omega, "Omega")?)
            }
            Family::HeisenbergMf => heisenberg_mean_field(self.n, first(&self.j, "J")?),
        }
    }

    pub fn known_group(&self) -> Result<KnownGroup, ModelError> {
        known_group(self)
    }
}

fn bond_count(n: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Periodic => n,
        Boundary::Open => n.saturating_sub(1),
    }
}

fn chain_bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    (0..bond_count(n, boundary)).map(|i| (i, (i + 1) % n)).collect()
}

fn check_chain(n: usize, boundary: Boundary) -> Result<(), ModelError> {
    match boundary {
        Boundary::Periodic if n < 3 => Err(ModelError::InvalidSize(format!(
            "a periodic chain needs n >= 3, got {n}"
        ))),
        Boundary::Open if n < 2 => Err(ModelError::InvalidSize(format!("an open chain needs n >= 2, got {n}"))),
        _ => Ok(()),
    }
}

fn zz(n: usize, a: usize, b: usize) -> PauliString {
    PauliString::from_sparse(n, &[(a, PauliOp::Z), (b, PauliOp::Z)])
}

fn x(n: usize, a: usize) -> PauliString {
    PauliString::from_sparse(n, &[(a, PauliOp::X)])
}

fn neg(v: Decimal) -> Coefficient {
    Coefficient::real(-v)
}

/// `H = -J Σ Z_i Z_{i+1} - Ω Σ X_i`.
pub fn tfim_1d(n: usize, j: Decimal, omega: Decimal, boundary: Boundary) -> Result<Hamiltonian, ModelError> {
    check_chain(n, boundary)?;
    let mut terms: Vec<Term> = chain_bonds(n, boundary)
        .into_iter()
        .map(|(a, b)| Term::new(neg(j), zz(n, a, b)))
        .collect();
    terms.extend((0..n).map(|i| Term::new(neg(omega), x(n, i))));
    Ok(Hamiltonian::new(terms)?)
}

/// Chain with coupling `j[b]` on bond `b` (bond `b` joins sites `b` and
/// `b + 1`, the last periodic bond wraps) and field `omega[i]` on site `i`.
pub fn tfim_1d_inhomogeneous(
    n: usize,
    j: &[Decimal],
    omega: &[Decimal],
    boundary: Boundary,
) -> Result<Hamiltonian, ModelError> {
    check_chain(n, boundary)?;
    let bonds = chain_bonds(n, boundary);
    if j.len() != bonds.len() {
        return Err(ModelError::LengthMismatch {
            what: "J",
            expected: bonds.len(),
            found: j.len(),
        });
    }
    if omega.len() != n {
        return Err(ModelError::LengthMismatch {
            what: "Omega",
            expected: n,
            found: omega.len(),
        });
    }
    for (i, a) in j.iter().enumerate() {
        if j[..i].contains(a) {
            return Err(ModelError::DuplicateCoupling(*a));
        }
    }
    let mut terms: Vec<Term> = bonds
        .iter()
        .zip(j)
        .map(|(&(a, b), &jb)| Term::new(neg(jb), zz(n, a, b)))
        .collect();
    terms.extend(omega.iter().enumerate().map(|(i, &w)| Term::new(neg(w), x(n, i))));
    Ok(Hamiltonian::new(terms)?)
}

/// Site index of lattice point `(x, y)`: rows are numbered alternately left
/// to right and right to left, so the 2×2 plaquette reads 1-2-3-4 around
/// its boundary.
pub fn square_site(lx: usize, x: usize, y: usize) -> usize {
    if y.is_multiple_of(2) {
        y * lx + x
    } else {
        y * lx + (lx - 1 - x)
    }
}

/// Open `lx × ly` square lattice with nearest-neighbour `-J ZZ` bonds and a
/// `-Ω X` field on every site.
pub fn tfim_2d_square(lx: usize, ly: usize, j: Decimal, omega: Decimal) -> Result<Hamiltonian, ModelError> {
    if lx < 2 || ly < 2 {
        return Err(ModelError::InvalidSize(format!(
            "square lattice needs both sides >= 2, got {lx}x{ly}"
        )));
    }
    let n = lx * ly;
    let mut terms = Vec::new();
    for y in 0..ly {
        for x0 in 0..lx {
            let s = square_site(lx, x0, y);
            if x0 + 1 < lx {
                terms.push(Term::new(neg(j), zz(n, s, square_site(lx, x0 + 1, y))));
            }
            if y + 1 < ly {
                terms.push(Term::new(neg(j), zz(n, s, square_site(lx, x0, y + 1))));
            }
        }
    }
    terms.extend((0..n).map(|i| Term::new(neg(omega), x(n, i))));
    Ok(Hamiltonian::new(terms)?)
}

/// All-to-all XXX model: `-J (X_i X_j + Y_i Y_j + Z_i Z_j)` for every pair.
pub fn heisenberg_mean_field(n: usize, j: Decimal) -> Result<Hamiltonian, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidSize(format!(
            "mean-field model needs n >= 2, got {n}"
        )));
    }
    let mut terms = Vec::with_capacity(3 * n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            for op in [PauliOp::X, PauliOp::Y, PauliOp::Z] {
                terms.push(Term::new(neg(j), PauliString::from_sparse(n, &[(a, op), (b, op)])));
            }
        }
    }
    Ok(Hamiltonian::new(terms)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownGroup {
    pub expected_generators: Vec<Permutation>,
    pub expected_order: BigUint,
}

impl KnownGroup {
    pub fn group(&self, n: usize) -> PermutationGroup {
        PermutationGroup::new(n, &self.expected_generators).expect("known generators share the degree")
    }
}

/// The rotation `i ↦ i + 1 (mod n)`.
pub fn rotation(n: usize) -> Permutation {
    Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation is a bijection")
}

/// The ring reflection fixing site 1: `i ↦ -i (mod n)` on 0-based sites.
pub fn ring_reflection(n: usize) -> Permutation {
    Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection is a bijection")
}

/// The chain reflection `i ↦ n + 1 - i`.
pub fn chain_reflection(n: usize) -> Permutation {
    Permutation::from_images((0..n).map(|i| n - 1 - i).collect()).expect("reflection is a bijection")
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

pub fn known_group(spec: &ModelSpec) -> Result<KnownGroup, ModelError> {
    let n = spec.n;
    let (gens, order) = match (spec.family, spec.boundary) {
        (Family::Tfim1d, Boundary::Periodic) => {
            check_chain(n, Boundary::Periodic)?;
            (vec![rotation(n), ring_reflection(n)], BigUint::from(2 * n))
        }
        (Family::Tfim1d, Boundary::Open) => {
            check_chain(n, Boundary::Open)?;
            (vec![chain_reflection(n)], BigUint::from(2u32))
        }
        // Distinct couplings pin every bond; a single open bond can still flip.
        (Family::Tfim1dInhom, Boundary::Open) if n == 2 && spec.omega.first() == spec.omega.get(1) => {
            (vec![chain_reflection(2)], BigUint::from(2u32))
        }
        (Family::Tfim1dInhom, b) => {
            check_chain(n, b)?;
            (Vec::new(), BigUint::from(1u32))
        }
        (Family::Tfim2dSquare, _) if spec.lx == 2 && spec.ly == 2 => {
            let c = |s| Permutation::parse_cycles(s, 4).expect("static cycle literal");
            (vec![c("(1 2)(3 4)"), c("(1 4)(2 3)"), c("(2 4)")], BigUint::from(8u32))
        }
        (Family::Tfim2dSquare, _) => {
            return Err(ModelError::NoKnownGroup(format!(
                "a {}x{} square lattice",
                spec.lx, spec.ly
            )));
        }
        (Family::HeisenbergMf, _) => {
            if n < 2 {
                return Err(ModelError::InvalidSize(format!(
                    "mean-field model needs n >= 2, got {n}"
                )));
            }
            let gens = (0..n - 1)
                .map(|i| {
                    let mut images: Vec<usize> = (0..n).collect();
                    images.swap(i, i + 1);
                    Permutation::from_images(images).expect("transposition is a bijection")
                })
                .collect();
            (gens, factorial(n))
        }
    };
    Ok(KnownGroup {
        expected_generators: gens,
        expected_order: order,
    })
}
