//! Permutations of `{1..n}` with cycle-notation I/O.
//!
//! Points are 0-based inside the library and 1-based in every textual
//! form, so `(1 3)` swaps the points stored as `0` and `2`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("malformed cycle notation: {0}")]
    Syntax(String),
    #[error("image list is not a bijection")]
    NotBijective,
}

/// A bijection on `{0..degree}`; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijective);
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, e.g. `[3, 2, 1]` for `(1 3)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::NotBijective);
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// 1-based image list.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles as 0-based point lists, each starting at its smallest
    /// point, sorted by that point; fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(2 5)(3 4)`; fixed points are implicit
    /// and `()` or the empty string is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner_end = match rest.strip_prefix('(') {
                Some(r) => r
                    .find(')')
                    .ok_or_else(|| PermError::Syntax(format!("unclosed cycle in `{text}`")))?,
                None => return Err(PermError::Syntax(format!("expected `(` in `{text}`"))),
            };
            let inner = &rest[1..=inner_end];
            if inner.contains('(') {
                return Err(PermError::Syntax(format!("nested cycle in `{text}`")));
            }
            let mut points = Vec::new();
            for tok in inner.split_whitespace() {
                let p: usize = tok
                    .parse()
                    .map_err(|_| PermError::Syntax(format!("bad point `{tok}`")))?;
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(PermError::RepeatedPoint(p));
                }
                used[p - 1] = true;
                points.push(p - 1);
            }
            if points.len() == 1 {
                return Err(PermError::Syntax(format!(
                    "1-cycle `({})` is not allowed",
                    points[0] + 1
                )));
            }
            for (k, &p) in points.iter().enumerate() {
                images[p] = points[(k + 1) % points.len()];
            }
            rest = rest[inner_end + 2..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// Canonical cycle string; the identity formats as `()`.
    pub fn format_cycles(&self) -> String {
        self.to_string()
    }

    /// Points moved by this permutation (its support).
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(|(i, &x)| *i != x).map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// `a ∘ b`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
    a.compose(b)
}

pub fn inverse(a: &Permutation) -> Permutation {
    a.inverse()
}

pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    Permutation::parse_cycles(text, degree)
}

pub fn format_cycles(p: &Permutation) -> String {
    p.format_cycles()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn transposition_squared_is_identity() {
        let t = cyc("(1 2)", 2);
        assert!(compose(&t, &t).unwrap().is_identity());
    }

    #[test]
    fn reflections_compose_to_rotation() {
        // P_1 = (2 5)(3 4), P_4 = (1 2)(3 5); P_4 ∘ P_1 is the unit shift.
        let p1 = cyc("(2 5)(3 4)", 5);
        let p4 = cyc("(1 2)(3 5)", 5);
        assert_eq!(compose(&p4, &p1).unwrap(), cyc("(1 2 3 4 5)", 5));
    }

    #[test]
    fn compose_is_pointwise() {
        // (1 2)∘(2 3): 1→1→2, 2→3→3, 3→2→1
        let got = compose(&cyc("(1 2)", 3), &cyc("(2 3)", 3)).unwrap();
        assert_eq!(got.one_based(), vec![2, 3, 1]);
        assert_eq!(got, cyc("(1 2 3)", 3));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        assert_eq!(
            compose(&Permutation::identity(2), &Permutation::identity(3)),
            Err(PermError::DegreeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn inverses() {
        assert_eq!(cyc("(1 2 3)", 3).inverse(), cyc("(1 3 2)", 3));
        assert!(Permutation::identity(4).inverse().is_identity());
        let t = cyc("(2 4)", 5);
        assert_eq!(t.inverse(), t);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(cyc("(1 3)", 3).one_based(), vec![3, 2, 1]);
        assert!(cyc("", 4).is_identity());
        assert!(cyc("()", 4).is_identity());
        assert_eq!(cyc("(2 5)(3 4)", 5).one_based(), vec![1, 5, 4, 3, 2]);
        assert_eq!(cyc("  ( 2  5 ) (3 4) ", 5), cyc("(2 5)(3 4)", 5));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            Permutation::parse_cycles("(1 2)(2 3)", 3),
            Err(PermError::RepeatedPoint(2))
        );
        assert_eq!(
            Permutation::parse_cycles("(1 4)", 3),
            Err(PermError::PointOutOfRange { point: 4, degree: 3 })
        );
        assert!(matches!(
            Permutation::parse_cycles("(1 2", 3),
            Err(PermError::Syntax(_))
        ));
        assert!(matches!(Permutation::parse_cycles("1 2", 3), Err(PermError::Syntax(_))));
        assert!(matches!(
            Permutation::parse_cycles("(a b)", 3),
            Err(PermError::Syntax(_))
        ));
    }

    #[test]
    fn format_examples() {
        assert_eq!(Permutation::identity(3).format_cycles(), "()");
        let p = Permutation::from_one_based(&[2, 1, 4, 3]).unwrap();
        assert_eq!(p.format_cycles(), "(1 2)(3 4)");
        // smallest point first even when written otherwise
        assert_eq!(cyc("(3 1 2)", 3).format_cycles(), "(1 2 3)");
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert_eq!(Permutation::from_images(vec![0, 0, 1]), Err(PermError::NotBijective));
    }
}
