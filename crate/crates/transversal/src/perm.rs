//! Permutations on `{0, …, n-1}` with cycle-notation parsing and printing.

use std::fmt;
use std::str::FromStr;

use crate::Error;

/// A point of the permutation domain. Domains are always `0..n`.
pub type Point = u16;

/// A permutation of `{0, …, n-1}`, stored as its image table:
/// position `i` holds the image of point `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<Point>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if (img as usize) >= n || seen[img as usize] {
                return Err(Error::NotAPermutation);
            }
            seen[img as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a point under this permutation.
    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.images[p as usize]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// Composition acting on the right: the result maps `x` to `(x·self)·other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, Error> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.apply(x)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0 as Point; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as Point;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as Point == img)
    }

    /// Smallest point moved by this permutation, if any.
    pub fn first_moved_point(&self) -> Option<Point> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &img)| i as Point != img)
            .map(|(i, _)| i as Point)
    }

    /// Extends the permutation to a larger degree by fixing the new points.
    pub fn extend_to(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(images.len() as Point..degree as Point);
        Permutation { images }
    }

    /// Parses 0-based cycle notation like `(0 1 2)(3 4)`. The identity is `()`.
    /// Fixed points are implied; `degree` sets the full domain.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self, Error> {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        let mut moved = vec![false; degree];
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::CycleSyntax("empty permutation string".into()));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::CycleSyntax(format!("expected '(' in {rest:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::CycleSyntax(format!(
                    "unexpected text before cycle: {:?}",
                    &rest[..open]
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::CycleSyntax("unbalanced '('".into()))?;
            if close < open {
                return Err(Error::CycleSyntax("unbalanced ')'".into()));
            }
            let body = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let cycle: Vec<Point> = body
                .split(|c: char| c == ' ' || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<Point>()
                        .map_err(|_| Error::CycleSyntax(format!("bad point {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            if cycle.is_empty() {
                continue; // "()" — identity cycle
            }
            if cycle.len() == 1 {
                return Err(Error::CycleSyntax(format!(
                    "singleton cycle ({}) is not allowed; fixed points are implicit",
                    cycle[0]
                )));
            }
            for &p in &cycle {
                if p as usize >= degree {
                    return Err(Error::CycleSyntax(format!(
                        "point {p} out of range for degree {degree}"
                    )));
                }
                if moved[p as usize] {
                    return Err(Error::CycleSyntax(format!("point {p} appears twice")));
                }
                moved[p as usize] = true;
            }
            for w in 0..cycle.len() {
                images[cycle[w] as usize] = cycle[(w + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    /// Cycle decomposition, omitting fixed points.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = vec![start as Point];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.images[x as usize];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses cycle notation, inferring the degree as one past the largest
    /// point mentioned. Prefer [`Permutation::parse_cycles`] when the degree
    /// is known.
    fn from_str(s: &str) -> Result<Self, Error> {
        let max = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::CycleSyntax(s.into())))
            .try_fold(0usize, |acc, v| v.map(|v| acc.max(v + 1)))?;
        Permutation::parse_cycles(s, max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn identity_composes_neutrally() {
        let g = p("(0 1 2)(3 4)", 5);
        let id = Permutation::identity(5);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&id).unwrap(), g);
    }

    #[test]
    fn inverse_cancels() {
        let g = p("(0 3 1)(2 4)", 5);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn compose_is_right_action() {
        // (0 1 2) then (0 1): hand evaluation gives 0↦0? no — 0↦1↦0, 1↦2,
        // 2↦0↦1, i.e. the transposition (1 2).
        let a = p("(0 1 2)", 3);
        let b = p("(0 1)", 3);
        let c = a.compose(&b).unwrap();
        assert_eq!(c, p("(1 2)", 3));
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = p("(0 1)", 2);
        let b = p("(0 1)", 3);
        assert!(matches!(a.compose(&b), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Permutation::parse_cycles("(0 1", 3).is_err());
        assert!(Permutation::parse_cycles("(0 0)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 5)", 3).is_err());
        assert!(Permutation::parse_cycles("(1)", 3).is_err());
        assert!(Permutation::parse_cycles("", 3).is_err());
    }

    #[test]
    fn parse_identity() {
        assert!(p("()", 4).is_identity());
    }

    #[test]
    fn display_round_trips() {
        let g = p("(0 4)(1 2 3)", 6);
        let s = g.to_string();
        assert_eq!(Permutation::parse_cycles(&s, 6).unwrap(), g);
    }
}
