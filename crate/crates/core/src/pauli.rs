//! Pauli strings, exact decimal coefficients and Hamiltonians as term sets.
//!
//! Text format, one term per line:
//!
//! ```text
//! # comment
//! -1.0 IXY
//! 2+0.5i ZZI
//! ```
//!
//! Qubit 1 is the leftmost letter. A permutation acts on a string by moving
//! the letter at qubit `j` to qubit `ς(j)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use rust_decimal::Decimal;
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonianError {
    #[error("line {line}: malformed coefficient `{text}`")]
    MalformedCoefficient { line: usize, text: String },
    #[error("line {line}: illegal character `{ch}` in Pauli string")]
    IllegalCharacter { line: usize, ch: char },
    #[error("line {line}: expected `<coefficient> <pauli-string>`")]
    MalformedLine { line: usize },
    #[error("line {line}: Pauli string has length {found}, expected {expected}")]
    InconsistentLength { line: usize, expected: usize, found: usize },
    #[error("line {line}: string {pauli} repeated with conflicting coefficients {first} and {second}")]
    ConflictingDuplicate {
        line: usize,
        pauli: String,
        first: String,
        second: String,
    },
    #[error("line {line}: coefficient must be non-zero")]
    ZeroCoefficient { line: usize },
    #[error("Hamiltonian has no terms")]
    Empty,
    #[error("permutation degree {degree} does not match qubit count {qubits}")]
    DegreeMismatch { degree: usize, qubits: usize },
}

impl HamiltonianError {
    /// 1-based input line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        use HamiltonianError::*;
        match self {
            MalformedCoefficient { line, .. }
            | IllegalCharacter { line, .. }
            | MalformedLine { line }
            | InconsistentLength { line, .. }
            | ConflictingDuplicate { line, .. }
            | ZeroCoefficient { line } => Some(*line),
            Empty | DegreeMismatch { .. } => None,
        }
    }
}

/// Single-qubit Pauli letter, ordered `I < X < Y < Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    fn bits(self) -> u64 {
        self as u64
    }

    fn from_bits(b: u64) -> PauliOp {
        Self::ALL[(b & 3) as usize]
    }

    pub fn from_char(c: char) -> Option<PauliOp> {
        match c {
            'I' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }
}

const LETTERS_PER_WORD: usize = 32;

/// Fixed-length Pauli word packed two bits per qubit.
///
/// Qubit 0 sits in the most significant bits of the first word, so the
/// derived ordering on words is the lexicographic `I < X < Y < Z` order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    words: Vec<u64>,
    len: usize,
}

impl PauliString {
    pub fn identity(len: usize) -> Self {
        PauliString {
            words: vec![0; len.div_ceil(LETTERS_PER_WORD)],
            len,
        }
    }

    pub fn from_ops(ops: &[PauliOp]) -> Self {
        let mut s = Self::identity(ops.len());
        for (i, &op) in ops.iter().enumerate() {
            s.set(i, op);
        }
        s
    }

    /// Identity string with the given letters at 0-based positions.
    pub fn from_sparse(len: usize, ops: &[(usize, PauliOp)]) -> Self {
        let mut s = Self::identity(len);
        for &(i, op) in ops {
            s.set(i, op);
        }
        s
    }

    fn shift(i: usize) -> u32 {
        (62 - 2 * (i % LETTERS_PER_WORD)) as u32
    }

    fn set(&mut self, i: usize, op: PauliOp) {
        let w = &mut self.words[i / LETTERS_PER_WORD];
        let sh = Self::shift(i);
        *w = (*w & !(3u64 << sh)) | (op.bits() << sh);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> PauliOp {
        PauliOp::from_bits(self.words[i / LETTERS_PER_WORD] >> Self::shift(i))
    }

    pub fn ops(&self) -> impl Iterator<Item = PauliOp> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// Non-identity positions with their letters, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, PauliOp)> + '_ {
        self.ops().enumerate().filter(|(_, op)| *op != PauliOp::I)
    }

    pub fn weight(&self) -> usize {
        self.support().count()
    }

    /// Moves the letter at qubit `j` to qubit `perm(j)`.
    pub fn permuted(&self, perm: &Permutation) -> Result<PauliString, HamiltonianError> {
        if perm.degree() != self.len {
            return Err(HamiltonianError::DegreeMismatch {
                degree: perm.degree(),
                qubits: self.len,
            });
        }
        let mut out = Self::identity(self.len);
        for (j, op) in self.support() {
            out.set(perm.image(j), op);
        }
        Ok(out)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in self.ops() {
            write!(f, "{}", op.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = char;

    /// Fails with the first illegal character.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ops = s
            .chars()
            .map(|c| PauliOp::from_char(c).ok_or(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliString::from_ops(&ops))
    }
}

/// Exact complex decimal `re + im·i`, stored normalised.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Coefficient {
    re: Decimal,
    im: Decimal,
}

fn coefficient_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^([+-]?[0-9]+(?:\.[0-9]+)?)(?:([+-][0-9]+(?:\.[0-9]+)?)i)?$").unwrap())
}

impl Coefficient {
    pub fn new(re: Decimal, im: Decimal) -> Self {
        Coefficient {
            re: re.normalize(),
            im: im.normalize(),
        }
    }

    pub fn real(re: Decimal) -> Self {
        Self::new(re, Decimal::ZERO)
    }

    pub fn re(&self) -> Decimal {
        self.re
    }

    pub fn im(&self) -> Decimal {
        self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Parses `a`, `a+bi` or `a-bi` with plain decimal digits.
    pub fn parse(text: &str) -> Option<Coefficient> {
        let caps = coefficient_regex().captures(text)?;
        let re = Decimal::from_str(caps.get(1)?.as_str()).ok()?;
        let im = match caps.get(2) {
            Some(m) => Decimal::from_str(m.as_str()).ok()?,
            None => Decimal::ZERO,
        };
        Some(Coefficient::new(re, im))
    }
}

impl From<i64> for Coefficient {
    fn from(x: i64) -> Self {
        Coefficient::real(Decimal::from(x))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.re)?;
        if !self.im.is_zero() {
            if self.im.is_sign_negative() {
                write!(f, "-{}i", self.im.abs())?;
            } else {
                write!(f, "+{}i", self.im)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub coeff: Coefficient,
    pub pauli: PauliString,
}

impl Term {
    pub fn new(coeff: impl Into<Coefficient>, pauli: PauliString) -> Self {
        Term {
            coeff: coeff.into(),
            pauli,
        }
    }
}

/// Non-empty set of terms on `n` qubits with pairwise distinct strings,
/// kept sorted by string.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    /// Validates and canonicalises a term list. Repeated strings with equal
    /// coefficients collapse; conflicting ones are an error. Errors refer to
    /// terms by 1-based position.
    pub fn new(terms: Vec<Term>) -> Result<Self, HamiltonianError> {
        let lines: Vec<usize> = (1..=terms.len()).collect();
        Self::from_numbered(terms, &lines)
    }

    fn from_numbered(terms: Vec<Term>, lines: &[usize]) -> Result<Self, HamiltonianError> {
        let n = match terms.first() {
            Some(t) => t.pauli.len(),
            None => return Err(HamiltonianError::Empty),
        };
        let mut map: BTreeMap<PauliString, Coefficient> = BTreeMap::new();
        for (term, &line) in terms.into_iter().zip(lines) {
            if term.pauli.len() != n {
                return Err(HamiltonianError::InconsistentLength {
                    line,
                    expected: n,
                    found: term.pauli.len(),
                });
            }
            if term.coeff.is_zero() {
                return Err(HamiltonianError::ZeroCoefficient { line });
            }
            if let Some(prev) = map.get(&term.pauli) {
                if *prev != term.coeff {
                    return Err(HamiltonianError::ConflictingDuplicate {
                        line,
                        pauli: term.pauli.to_string(),
                        first: prev.to_string(),
                        second: term.coeff.to_string(),
                    });
                }
                continue;
            }
            map.insert(term.pauli, term.coeff);
        }
        Ok(Hamiltonian {
            n,
            terms: map.into_iter().map(|(pauli, coeff)| Term { coeff, pauli }).collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, HamiltonianError> {
        let mut terms = Vec::new();
        let mut lines = Vec::new();
        let mut expected_len: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let (coeff_text, pauli_text) = match (fields.next(), fields.next(), fields.next()) {
                (Some(c), Some(p), None) => (c, p),
                _ => return Err(HamiltonianError::MalformedLine { line }),
            };
            let coeff = Coefficient::parse(coeff_text).ok_or_else(|| HamiltonianError::MalformedCoefficient {
                line,
                text: coeff_text.to_string(),
            })?;
            let pauli =
                PauliString::from_str(pauli_text).map_err(|ch| HamiltonianError::IllegalCharacter { line, ch })?;
            match expected_len {
                None => expected_len = Some(pauli.len()),
                Some(n) if n != pauli.len() => {
                    return Err(HamiltonianError::InconsistentLength {
                        line,
                        expected: n,
                        found: pauli.len(),
                    })
                }
                _ => {}
            }
            terms.push(Term { coeff, pauli });
            lines.push(line);
        }
        Self::from_numbered(terms, &lines)
    }

    /// One `<coeff> <string>` line per term in string order, newline-terminated.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.coeff, t.pauli));
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn coefficient_of(&self, pauli: &PauliString) -> Option<Coefficient> {
        self.terms
            .binary_search_by(|t| t.pauli.cmp(pauli))
            .ok()
            .map(|i| self.terms[i].coeff)
    }

    pub fn permuted(&self, perm: &Permutation) -> Result<Hamiltonian, HamiltonianError> {
        if perm.degree() != self.n {
            return Err(HamiltonianError::DegreeMismatch {
                degree: perm.degree(),
                qubits: self.n,
            });
        }
        let mut terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(Term {
                    coeff: t.coeff,
                    pauli: t.pauli.permuted(perm)?,
                })
            })
            .collect::<Result<Vec<_>, HamiltonianError>>()?;
        terms.sort_by(|a, b| a.pauli.cmp(&b.pauli));
        Ok(Hamiltonian { n: self.n, terms })
    }

    /// Whether `perm` maps the term set onto itself.
    pub fn is_symmetry(&self, perm: &Permutation) -> Result<bool, HamiltonianError> {
        if perm.degree() != self.n {
            return Err(HamiltonianError::DegreeMismatch {
                degree: perm.degree(),
                qubits: self.n,
            });
        }
        for t in &self.terms {
            let image = t.pauli.permuted(perm)?;
            if self.coefficient_of(&image) != Some(t.coeff) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest number of non-identity letters in any term.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|t| t.pauli.weight()).max().unwrap_or(0)
    }

    /// Maximum degree of the interaction graph, where two qubits are adjacent
    /// when they share the support of some term.
    pub fn interaction_degree(&self) -> usize {
        let mut neighbours = vec![std::collections::BTreeSet::new(); self.n];
        for t in &self.terms {
            let support: Vec<usize> = t.pauli.support().map(|(i, _)| i).collect();
            for &u in &support {
                for &v in &support {
                    if u != v {
                        neighbours[u].insert(v);
                    }
                }
            }
        }
        neighbours.iter().map(|s| s.len()).max().unwrap_or(0)
    }
}

impl FromStr for Hamiltonian {
    type Err = HamiltonianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hamiltonian::parse(s)
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian, HamiltonianError> {
    Hamiltonian::parse(text)
}

pub fn serialize_hamiltonian(h: &Hamiltonian) -> String {
    h.serialize()
}

pub fn apply_permutation(perm: &Permutation, p: &PauliString) -> Result<PauliString, HamiltonianError> {
    p.permuted(perm)
}

pub fn permute_hamiltonian(perm: &Permutation, h: &Hamiltonian) -> Result<Hamiltonian, HamiltonianError> {
    h.permuted(perm)
}

pub fn is_symmetry(perm: &Permutation, h: &Hamiltonian) -> Result<bool, HamiltonianError> {
    h.is_symmetry(perm)
}
