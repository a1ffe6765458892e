//! Permutation groups backed by deterministic stabilizer chains.
//!
//! The chain is built by the classic verification-loop Schreier-Sims: base
//! points are taken from an optional prescribed prefix, then always the
//! smallest moved point, and Schreier generators are checked level by level
//! until every one sifts to the identity. No randomization anywhere, so two
//! builds from the same generator list are bit-identical.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Hard ceiling on the degree of externally constructed groups.
pub const MAX_DEGREE: usize = 512;

/// Default cap on full element enumeration.
pub const DEFAULT_CENSUS_CAP: u64 = 10_000_000;

/// Orbit of a point with its Schreier tree (parent point + generator index).
#[derive(Debug, Clone)]
pub struct Orbit {
    base: usize,
    points: Vec<usize>,
    /// For each point in `points` (parallel), `None` for the base, otherwise
    /// `(parent_point, generator_index)` with `parent^gen = point`.
    edges: Vec<Option<(usize, usize)>>,
    position: Vec<u32>,
}

const NO_POS: u32 = u32::MAX;

impl Orbit {
    pub fn compute(degree: usize, gens: &[Permutation], alpha: usize) -> Result<Orbit> {
        if alpha >= degree {
            return Err(Error::PointOutOfRange {
                point: alpha + 1,
                degree,
            });
        }
        let mut points = vec![alpha];
        let mut edges = vec![None];
        let mut position = vec![NO_POS; degree];
        position[alpha] = 0;
        let mut head = 0;
        while head < points.len() {
            let from = points[head];
            for (gi, g) in gens.iter().enumerate() {
                let to = g.apply(from);
                if position[to] == NO_POS {
                    position[to] = points.len() as u32;
                    points.push(to);
                    edges.push(Some((from, gi)));
                }
            }
            head += 1;
        }
        Ok(Orbit {
            base: alpha,
            points,
            edges,
            position,
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, point: usize) -> bool {
        point < self.position.len() && self.position[point] != NO_POS
    }

    /// Word in generator indices mapping the base to `point`.
    pub fn word_to(&self, point: usize) -> Option<Vec<usize>> {
        if !self.contains(point) {
            return None;
        }
        let mut word = Vec::new();
        let mut current = point;
        while current != self.base {
            let (parent, gi) = self.edges[self.position[current] as usize]?;
            word.push(gi);
            current = parent;
        }
        word.reverse();
        Some(word)
    }

    /// A permutation (product of the given generators) mapping base to `point`.
    pub fn representative_to(&self, gens: &[Permutation], point: usize) -> Option<Permutation> {
        let word = self.word_to(point)?;
        let degree = self.position.len();
        let mut rep = Permutation::identity(degree);
        for gi in word {
            rep = rep.compose(&gens[gi]);
        }
        Some(rep)
    }
}

#[derive(Clone)]
struct ChainLevel {
    base_point: usize,
    gens: Vec<Permutation>,
    /// Orbit of `base_point` under `gens`, BFS discovery order, base first.
    orbit: Vec<usize>,
    position: Vec<u32>,
    /// `transversal[k]` maps `base_point` to `orbit[k]`; index 0 is the identity.
    transversal: Vec<Permutation>,
    transversal_inv: Vec<Permutation>,
}

impl ChainLevel {
    fn new(degree: usize, base_point: usize) -> ChainLevel {
        let mut level = ChainLevel {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            position: vec![NO_POS; degree],
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
        };
        level.recompute(degree);
        level
    }

    fn recompute(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal.clear();
        self.transversal_inv.clear();
        self.position.iter_mut().for_each(|p| *p = NO_POS);
        self.orbit.push(self.base_point);
        self.position[self.base_point] = 0;
        self.transversal.push(Permutation::identity(degree));
        self.transversal_inv.push(Permutation::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let from = self.orbit[head];
            let rep = self.transversal[head].clone();
            for g in &self.gens {
                let to = g.apply(from);
                if self.position[to] == NO_POS {
                    self.position[to] = self.orbit.len() as u32;
                    self.orbit.push(to);
                    let new_rep = rep.compose(g);
                    self.transversal_inv.push(new_rep.inverse());
                    self.transversal.push(new_rep);
                }
            }
            head += 1;
        }
    }

    fn position_of(&self, point: usize) -> Option<usize> {
        let p = self.position[point];
        (p != NO_POS).then_some(p as usize)
    }
}

/// A base, strong generating set, and transversals for a permutation group.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<ChainLevel>,
    order: BigUint,
}

impl StabilizerChain {
    /// Deterministic Schreier-Sims. `base_hint` points become the first base
    /// points (in order, duplicates dropped) even when their orbits are
    /// trivial, which is what pointwise stabilizer extraction needs.
    pub fn build(degree: usize, gens: &[Permutation], base_hint: &[usize]) -> Result<StabilizerChain> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
            order: BigUint::one(),
        };
        let mut seen_hint = HashSet::new();
        for &b in base_hint {
            if b >= degree {
                return Err(Error::PointOutOfRange {
                    point: b + 1,
                    degree,
                });
            }
            if seen_hint.insert(b) {
                chain.levels.push(ChainLevel::new(degree, b));
            }
        }
        let mut known = HashSet::new();
        for g in gens {
            if !g.is_identity() && known.insert(g.images().to_vec()) {
                chain.place(g.clone());
            }
        }
        // Verify from the deepest level up; a failed Schreier generator is
        // installed as a new strong generator and verification restarts at
        // the deepest level it reached.
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.verify_level(i as usize) {
                Some(residue) => {
                    if known.insert(residue.images().to_vec()) {
                        let j = chain.place(residue);
                        i = j as isize;
                    } else {
                        // Already a strong generator; the sift failing means
                        // orbits were stale, which recompute during place()
                        // prevents. Treat defensively as a restart.
                        i = chain.levels.len() as isize - 1;
                    }
                }
                None => i -= 1,
            }
        }
        chain.order = chain
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        Ok(chain)
    }

    /// Installs a strong generator at every level whose base prefix it fixes.
    /// Returns the deepest level that received it.
    fn place(&mut self, h: Permutation) -> usize {
        debug_assert!(!h.is_identity());
        let j = match self
            .levels
            .iter()
            .position(|lv| h.apply(lv.base_point) != lv.base_point)
        {
            Some(j) => j,
            None => {
                let b = h.smallest_moved().expect("non-identity");
                self.levels.push(ChainLevel::new(self.degree, b));
                self.levels.len() - 1
            }
        };
        for l in 0..=j {
            self.levels[l].gens.push(h.clone());
            self.levels[l].recompute(self.degree);
        }
        j
    }

    /// Checks every Schreier generator of `level` against the chain below.
    /// Returns the first non-identity residue found.
    fn verify_level(&self, level: usize) -> Option<Permutation> {
        let lv = &self.levels[level];
        for k in 0..lv.orbit.len() {
            for s in &lv.gens {
                let image = s.apply(lv.orbit[k]);
                let pos = lv
                    .position_of(image)
                    .expect("orbit closed under generators");
                // u_k * s * u_image^{-1} fixes the base point of this level.
                let schreier = lv.transversal[k]
                    .compose(s)
                    .compose(&lv.transversal_inv[pos]);
                let (residue, _) = self.sift_from(schreier, level + 1);
                if !residue.is_identity() {
                    return Some(residue);
                }
            }
        }
        None
    }

    /// Strips transversal factors starting at `start`. Returns the residue
    /// and the first level whose orbit could not absorb it (the chain length
    /// if it ran off the end).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for l in start..self.levels.len() {
            let lv = &self.levels[l];
            let delta = g.apply(lv.base_point);
            match lv.position_of(delta) {
                Some(k) => g = g.compose(&lv.transversal_inv[k]),
                None => return (g, l),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit_at_level(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn gens_at_level(&self, level: usize) -> &[Permutation] {
        &self.levels[level].gens
    }

    /// All strong generators (level-0 generator list).
    pub fn strong_gens(&self) -> &[Permutation] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(g.clone(), 0);
        residue.is_identity()
    }

    /// Mixed-radix coordinates of a member along the chain (level 0 is the
    /// least significant digit), or `None` for non-members.
    pub fn digits_of(&self, g: &Permutation) -> Option<Vec<usize>> {
        if g.degree() != self.degree {
            return None;
        }
        let mut digits = Vec::with_capacity(self.levels.len());
        let mut g = g.clone();
        for lv in &self.levels {
            let delta = g.apply(lv.base_point);
            let k = lv.position_of(delta)?;
            digits.push(k);
            g = g.compose(&lv.transversal_inv[k]);
        }
        g.is_identity().then_some(digits)
    }

    /// Dense index of a member in enumeration order.
    pub fn index_of(&self, g: &Permutation) -> Option<u64> {
        let digits = self.digits_of(g)?;
        let mut index: u64 = 0;
        for l in (0..self.levels.len()).rev() {
            index = index * self.levels[l].orbit.len() as u64 + digits[l] as u64;
        }
        Some(index)
    }

    /// Member with the given dense index; inverse of `index_of`.
    pub fn element_at(&self, mut index: u64) -> Permutation {
        let mut digits = Vec::with_capacity(self.levels.len());
        for lv in &self.levels {
            let size = lv.orbit.len() as u64;
            digits.push((index % size) as usize);
            index /= size;
        }
        let mut e = Permutation::identity(self.degree);
        for (l, &d) in digits.iter().enumerate().rev() {
            e = e.compose(&self.levels[l].transversal[d]);
        }
        e
    }
}

impl fmt::Debug for StabilizerChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StabilizerChain(degree {}, base {:?}, order {})",
            self.degree,
            self.base().iter().map(|b| b + 1).collect::<Vec<_>>(),
            self.order
        )
    }
}

/// A permutation group given by generators, with a lazily built chain.
///
/// Once the chain is built the group is immutable and cheap to share between
/// threads; construction itself is single-threaded.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

impl PermGroup {
    /// A group from generators. Degrees must agree; identity generators are
    /// kept out of the stored list.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<PermGroup> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// Symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    /// Alternating group on `degree` points.
    pub fn alternating(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        for k in 2..degree {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1, k]]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    /// Cyclic group generated by an n-cycle.
    pub fn cyclic(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// The stabilizer chain, built on first use.
    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::build(self.degree, &self.generators, &[]).unwrap())
    }

    /// Wraps an already-built chain (used when a chain computation yields a
    /// subgroup whose own chain falls out for free).
    pub(crate) fn with_chain(
        degree: usize,
        generators: Vec<Permutation>,
        chain: StabilizerChain,
    ) -> PermGroup {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup {
            degree,
            generators,
            chain: cell,
        }
    }

    pub fn order(&self) -> BigUint {
        self.chain().order().clone()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.chain().order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty() || self.order() == BigUint::one()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    /// Orbit of a point together with its Schreier tree.
    pub fn orbit(&self, alpha: usize) -> Result<Orbit> {
        Orbit::compute(self.degree, &self.generators, alpha)
    }

    /// All orbits, each sorted, ordered by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let orbit = Orbit::compute(self.degree, &self.generators, start).unwrap();
            let mut points = orbit.points().to_vec();
            points.sort_unstable();
            for &p in &points {
                seen[p] = true;
            }
            out.push(points);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Full element stream, identity first, deterministic order. Refuses when
    /// the order exceeds `cap`.
    pub fn elements(&self, cap: u64) -> Result<Elements<'_>> {
        let order = self.chain().order();
        if order > &BigUint::from(cap) {
            return Err(Error::CensusCapExceeded {
                order: order.to_string(),
                cap,
            });
        }
        Ok(Elements::new(self.chain()))
    }

    /// Pointwise stabilizer of a list of points, computed by prescribing the
    /// points as the leading base of a fresh chain.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &p in points {
            if p >= self.degree {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree: self.degree,
                });
            }
        }
        let chain = StabilizerChain::build(self.degree, &self.generators, points)?;
        let mut distinct = Vec::new();
        let mut seen = HashSet::new();
        for &p in points {
            if seen.insert(p) {
                distinct.push(p);
            }
        }
        let skip = distinct.len();
        let sub_levels: Vec<ChainLevel> = chain.levels[skip..].to_vec();
        let gens: Vec<Permutation> = sub_levels
            .first()
            .map(|l| l.gens.clone())
            .unwrap_or_default();
        let order = sub_levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        let sub_chain = StabilizerChain {
            degree: self.degree,
            levels: sub_levels,
            order,
        };
        Ok(PermGroup::with_chain(self.degree, gens, sub_chain))
    }

    /// Stabilizer of a single point.
    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[point])
    }

    /// Equality as subgroups of the same symmetric group.
    pub fn eq_subgroup(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.contains(g))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        // The chain is discarded; clones are cheap handles on generators.
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: OnceLock::new(),
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, {} gens", self.degree, self.generators.len())?;
        if let Some(chain) = self.chain.get() {
            write!(f, ", order {}", chain.order())?;
        }
        write!(f, ")")
    }
}

/// Iterator over all group elements via transversal products.
pub struct Elements<'a> {
    chain: &'a StabilizerChain,
    digits: Vec<usize>,
    /// `suffix[l]` is the product of the transversal picks at levels `>= l`.
    suffix: Vec<Permutation>,
    started: bool,
    exhausted: bool,
}

impl<'a> Elements<'a> {
    fn new(chain: &'a StabilizerChain) -> Elements<'a> {
        let k = chain.levels.len();
        Elements {
            chain,
            digits: vec![0; k],
            suffix: vec![Permutation::identity(chain.degree); k + 1],
            started: false,
            exhausted: false,
        }
    }

    fn rebuild_suffix_from(&mut self, level: usize) {
        for l in (0..=level).rev() {
            self.suffix[l] = self.suffix[l + 1].compose(&self.chain.levels[l].transversal[self.digits[l]]);
        }
    }
}

impl<'a> Iterator for Elements<'a> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let k = self.chain.levels.len();
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            if k > 0 {
                self.rebuild_suffix_from(k - 1);
            }
            return Some(self.suffix[0].clone());
        }
        // Odometer increment, level 0 fastest.
        let mut l = 0;
        loop {
            if l == k {
                self.exhausted = true;
                return None;
            }
            self.digits[l] += 1;
            if self.digits[l] < self.chain.levels[l].orbit.len() {
                break;
            }
            self.digits[l] = 0;
            l += 1;
        }
        self.rebuild_suffix_from(l);
        Some(self.suffix[0].clone())
    }
}
