//! Permutations of `{0..n-1}` stored as image tables.
//!
//! Points are 0-based everywhere in the API; all *textual* formats (cycle
//! notation, generator files, reports) are 1-based, matching the usual
//! convention for permutation groups. The action is on the right: `p` then
//! `q` is `compose(p, q)`, and `compose(p, q)` maps `i` to `q[p[i]]`.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0..degree-1}` stored as an image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// The identity permutation on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from a 0-based image table, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let img = img as usize;
            if img >= n {
                return Err(Error::PointOutOfRange {
                    point: img + 1,
                    degree: n,
                });
            }
            if seen[img] {
                return Err(Error::Parse {
                    offset: 0,
                    message: format!("image {} repeated; not a bijection", img + 1),
                });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `degree` points from disjoint cycles given in
    /// 0-based points. Cycles may not repeat points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from >= degree || to >= degree {
                    return Err(Error::PointOutOfRange {
                        point: from.max(to) + 1,
                        degree,
                    });
                }
                if touched[from] {
                    return Err(Error::Parse {
                        offset: 0,
                        message: format!("point {} appears in two cycles", from + 1),
                    });
                }
                touched[from] = true;
                images[from] = to as u32;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `point` under this permutation.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// `self` then `other`: the result maps `i` to `other[self[i]]`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        let images = self
            .images
            .iter()
            .map(|&mid| other.images[mid as usize])
            .collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Conjugate `self` by `g`: returns `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // (g^-1 s g)(i) = g(s(g^-1(i))); build directly without forming g^-1.
        let mut images = vec![0u32; self.images.len()];
        for (i, &gi) in g.images.iter().enumerate() {
            images[gi as usize] = g.images[self.images[i] as usize];
        }
        Permutation { images }
    }

    /// Number of fixed points.
    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i as u32 == img)
            .count()
    }

    /// Number of moved points.
    pub fn moved_points(&self) -> usize {
        self.degree() - self.fixed_points()
    }

    /// Smallest moved point, if any.
    pub fn smallest_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &img)| i as u32 != img)
            .map(|(i, _)| i)
    }

    /// Multiplicative order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut point = start;
            while !seen[point] {
                seen[point] = true;
                point = self.apply(point);
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    /// Cycle decomposition, skipping fixed points, each cycle led by its
    /// smallest point, cycles sorted by leading point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut point = start;
            while !seen[point] {
                seen[point] = true;
                cycle.push(point);
                point = self.apply(point);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle type as (length, multiplicity) pairs sorted by length, fixed
    /// points excluded. Conjugation-invariant, used as a class prefilter.
    pub fn cycle_type(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for cycle in self.cycles() {
            *counts.entry(cycle.len()).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Parity: true when the permutation is even.
    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Restricts to an invariant subset of points, relabelling them
    /// `0..subset.len()` in the order given. Fails if the subset is not
    /// invariant.
    pub fn restrict(&self, subset: &[usize]) -> Result<Permutation> {
        let mut position = vec![usize::MAX; self.degree()];
        for (slot, &point) in subset.iter().enumerate() {
            position[point] = slot;
        }
        let mut images = Vec::with_capacity(subset.len());
        for &point in subset {
            let img = self.apply(point);
            if img >= self.degree() || position[img] == usize::MAX {
                return Err(Error::Precondition(
                    "subset is not invariant under the permutation".into(),
                ));
            }
            images.push(position[img] as u32);
        }
        Permutation::from_images(images)
    }

    /// Raw image table (0-based).
    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

/// Parses 1-based disjoint-cycle notation, e.g. `(1 2 3)(4 5)`; the identity
/// is written `()`. Whitespace between points and cycles is ignored.
/// `offset_base` is added to reported error offsets so callers embedding the
/// notation in a larger text can report file positions.
pub fn parse_cycles(text: &str, degree: usize, offset_base: usize) -> Result<Permutation> {
    let bytes = text.as_bytes();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut i = 0usize;
    let err = |i: usize, message: &str| Error::Parse {
        offset: offset_base + i,
        message: message.to_string(),
    };
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                i += 1;
                let mut cycle = Vec::new();
                loop {
                    while i < bytes.len() && (bytes[i] == b' ' || bytes[i] == b'\t' || bytes[i] == b',') {
                        i += 1;
                    }
                    if i >= bytes.len() {
                        return Err(err(i, "unterminated cycle"));
                    }
                    if bytes[i] == b')' {
                        i += 1;
                        break;
                    }
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == start {
                        return Err(err(i, "expected a point number or `)`"));
                    }
                    let point: usize = text[start..i]
                        .parse()
                        .map_err(|_| err(start, "point number too large"))?;
                    if point == 0 || point > degree {
                        return Err(Error::PointOutOfRange { point, degree });
                    }
                    cycle.push(point - 1);
                }
                if cycle.len() == 1 {
                    return Err(err(i, "singleton cycle; fixed points are implicit"));
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            _ => return Err(err(i, "expected `(`")),
        }
    }
    Permutation::from_cycles(degree, &cycles)
}

impl fmt::Display for Permutation {
    /// 1-based disjoint-cycle notation; identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, point) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", point + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}: {}]", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        parse_cycles(text, degree, 0).unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        // (1 2) then (2 3) sends 1 -> 2 -> 3, so the product is (1 3 2).
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        assert_eq!(a.compose(&b), p("(1 3 2)", 3));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let g = p("(1 4 2)(3 5)", 6);
        let id = Permutation::identity(6);
        assert_eq!(g.compose(&id), g);
        assert_eq!(g.compose(&g.inverse()), id);
        assert_eq!(g.inverse().compose(&g), id);
    }

    #[test]
    fn cycle_roundtrip_and_order() {
        let g = p("(1 2 3)(4 5)", 6);
        assert_eq!(g.to_string(), "(1 2 3)(4 5)");
        assert_eq!(g.order(), 6);
        assert_eq!(g.fixed_points(), 1);
        assert!(!g.is_even());
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_cycles("(1 2", 4, 0).is_err());
        assert!(parse_cycles("(1 2)(2 3)", 4, 0).is_err());
        assert!(parse_cycles("(0 1)", 4, 0).is_err());
        assert!(parse_cycles("(1 5)", 4, 0).is_err());
        assert!(parse_cycles("(3)", 4, 0).is_err());
    }

    #[test]
    fn conjugation_matches_definition() {
        let s = p("(1 2 3)", 5);
        let g = p("(2 4)(3 5)", 5);
        let expected = g.inverse().compose(&s).compose(&g);
        assert_eq!(s.conjugate_by(&g), expected);
    }
}
