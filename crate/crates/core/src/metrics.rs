//! Exact computation of the bounded quantities: base size b(G), minimal
//! degree m(G), fixity, fixed point ratio, and the block-system transfer
//! checks relating them to quotient actions.
//!
//! Base size is found by iterative deepening from a falling-factorial lower
//! bound to a greedy upper bound. Candidate points are restricted to one
//! representative per orbit of the current partial stabilizer (conjugating a
//! base moves it within orbits, so this loses nothing), and a branch dies
//! when the stabilizer order exceeds maxorbit^remaining. Everything is
//! deterministic: candidates ascend, witnesses are the lexicographically
//! smallest the restricted search can see.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::actions::{is_semiregular, BlockSystem};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::structure::conjugacy_classes;

/// Above this order, minimal degree switches from full census to conjugacy
/// class representatives (fixity is constant on classes).
pub const CENSUS_MODE_MAX: u64 = 100_000;

/// The five exact quantities for one group.
#[derive(Debug, Clone)]
pub struct MetricReport {
    pub order: BigUint,
    pub base_size: usize,
    pub base_witness: Vec<usize>,
    pub minimal_degree: usize,
    pub min_degree_witness: Option<Permutation>,
    pub fpr: BigRational,
    pub chief_length: usize,
}

fn falling_factorial_at_least(n: usize, order: &BigUint) -> usize {
    let mut product = BigUint::one();
    let mut t = 0usize;
    while product < *order {
        if t >= n {
            return n;
        }
        product *= BigUint::from(n - t);
        t += 1;
    }
    t
}

fn largest_orbit(group: &PermGroup) -> usize {
    group.orbits().iter().map(|o| o.len()).max().unwrap_or(1)
}

struct BaseSearch {
    deadline: Option<Instant>,
    budget: Option<Duration>,
}

impl BaseSearch {
    fn check(&self) -> Result<()> {
        if let (Some(deadline), Some(budget)) = (self.deadline, self.budget) {
            if Instant::now() > deadline {
                return Err(Error::BudgetExceeded(budget));
            }
        }
        Ok(())
    }

    /// Finds a base extending `prefix` with exactly `remaining` more points,
    /// candidates restricted to orbit representatives of `stab`.
    fn dfs(
        &self,
        stab: &PermGroup,
        prefix: &mut Vec<usize>,
        remaining: usize,
    ) -> Result<Option<Vec<usize>>> {
        self.check()?;
        let order = stab.order();
        if order.is_one() {
            return Ok(Some(prefix.clone()));
        }
        if remaining == 0 {
            return Ok(None);
        }
        let max_orbit = largest_orbit(stab);
        if BigUint::from(max_orbit).pow(remaining as u32) < order {
            return Ok(None);
        }
        for orbit in stab.orbits() {
            if orbit.len() < 2 {
                continue;
            }
            let candidate = orbit[0];
            let child = stab.pointwise_stabilizer(&[candidate])?;
            prefix.push(candidate);
            if let Some(base) = self.dfs(&child, prefix, remaining - 1)? {
                return Ok(Some(base));
            }
            prefix.pop();
        }
        Ok(None)
    }
}

/// Exact base size with a witness base. Returns (0, []) for the trivial
/// group. The optional budget turns a runaway search into a hard error.
pub fn base_size_exact(
    group: &PermGroup,
    budget: Option<Duration>,
) -> Result<(usize, Vec<usize>)> {
    let order = group.order();
    if order.is_one() {
        return Ok((0, Vec::new()));
    }
    // greedy seeding: always stabilize a point from a largest orbit
    let mut greedy = Vec::new();
    let mut current = group.clone();
    while !current.order().is_one() {
        let pick = current
            .orbits()
            .into_iter()
            .filter(|o| o.len() >= 2)
            .max_by_key(|o| o.len())
            .map(|o| o[0])
            .expect("nontrivial group moves something");
        greedy.push(pick);
        current = current.pointwise_stabilizer(&[pick])?;
    }
    let upper = greedy.len();
    let lower = falling_factorial_at_least(group.degree(), &order).max(1);
    let search = BaseSearch {
        deadline: budget.map(|b| Instant::now() + b),
        budget,
    };
    for k in lower..upper {
        if let Some(base) = search.dfs(group, &mut Vec::new(), k)? {
            return Ok((base.len(), base));
        }
    }
    // the greedy base witnesses size `upper`; rerun the restricted search at
    // that depth for the canonical witness
    let base = search
        .dfs(group, &mut Vec::new(), upper)?
        .expect("a base of the greedy size exists");
    Ok((base.len(), base))
}

/// Representatives (smallest point) of the image-base blocks; a base for the
/// whole group whenever the kernel of the block action is semiregular.
pub fn block_base_transfer(
    group: &PermGroup,
    system: &BlockSystem,
    image_base: &[usize],
) -> Result<Vec<usize>> {
    if !is_semiregular(system.kernel()) {
        return Err(Error::KernelNotSemiregular);
    }
    let image_stab = system.image().pointwise_stabilizer(image_base)?;
    if !image_stab.order().is_one() {
        return Err(Error::NotABase {
            stab_order: image_stab.order().to_string(),
        });
    }
    let base: Vec<usize> = image_base
        .iter()
        .map(|&b| system.blocks()[b][0])
        .collect();
    let stab = group.pointwise_stabilizer(&base)?;
    if !stab.order().is_one() {
        return Err(Error::NotABase {
            stab_order: stab.order().to_string(),
        });
    }
    Ok(base)
}

/// Minimal degree by full element census; first witness in enumeration order.
pub fn minimal_degree_census(
    group: &PermGroup,
    cap: u64,
) -> Result<(usize, Option<Permutation>)> {
    let mut best = group.degree() + 1;
    let mut witness = None;
    for e in group.elements(cap)? {
        if e.is_identity() {
            continue;
        }
        let moved = e.moved_points();
        if moved < best {
            best = moved;
            witness = Some(e);
        }
    }
    match witness {
        Some(w) => Ok((best, Some(w))),
        None => Ok((0, None)),
    }
}

/// Minimal degree from conjugacy class representatives (fixity is a class
/// function).
pub fn minimal_degree_classes(
    group: &PermGroup,
    cap: u64,
) -> Result<(usize, Option<Permutation>)> {
    let classes = conjugacy_classes(group, cap)?;
    let mut best = group.degree() + 1;
    let mut witness = None;
    for rep in &classes.reps {
        if rep.is_identity() {
            continue;
        }
        let moved = rep.moved_points();
        if moved < best {
            best = moved;
            witness = Some(rep.clone());
        }
    }
    match witness {
        Some(w) => Ok((best, Some(w))),
        None => Ok((0, None)),
    }
}

/// Minimal degree m(G): census below `CENSUS_MODE_MAX`, class representatives
/// up to the cap beyond that. m(trivial) = 0.
pub fn minimal_degree(group: &PermGroup, cap: u64) -> Result<(usize, Option<Permutation>)> {
    match group.order_u64() {
        Some(order) if order <= CENSUS_MODE_MAX => minimal_degree_census(group, cap),
        _ => minimal_degree_classes(group, cap),
    }
}

/// Exact fixed point ratio: (n - m(G)) / n, and fpr(trivial) = 1 so that
/// m(G) = n(1 - fpr(G)) holds identically.
pub fn fpr(group: &PermGroup, cap: u64) -> Result<BigRational> {
    let n = group.degree();
    let (m, _) = minimal_degree(group, cap)?;
    if group.order().is_one() {
        return Ok(BigRational::one());
    }
    Ok(BigRational::new(
        num_bigint::BigInt::from(n - m),
        num_bigint::BigInt::from(n),
    ))
}

/// Verifies m(G) >= s * m(G^Delta) for the block system formed by the orbits
/// of an intransitive normal subgroup with semiregular kernel. Returns the
/// verdict with both sides.
pub struct BlockDegreeBound {
    pub holds: bool,
    pub lhs: usize,
    pub block_size: usize,
    pub image_min_degree: usize,
}

pub fn block_degree_bound_check(
    group: &PermGroup,
    normal: &PermGroup,
    cap: u64,
) -> Result<BlockDegreeBound> {
    let system = crate::actions::orbit_block_system(group, normal)?;
    if !is_semiregular(system.kernel()) {
        return Err(Error::KernelNotSemiregular);
    }
    let (lhs, _) = minimal_degree(group, cap)?;
    let (image_min, _) = minimal_degree(system.image(), cap)?;
    let s = system.block_size();
    Ok(BlockDegreeBound {
        holds: lhs >= s * image_min,
        lhs,
        block_size: s,
        image_min_degree: image_min,
    })
}

/// Assembles the full metric report; `chief_length` comes from the lattice.
pub fn metric_report(
    group: &PermGroup,
    chief_length: usize,
    cap: u64,
    budget: Option<Duration>,
) -> Result<MetricReport> {
    let (base_size, base_witness) = base_size_exact(group, budget)?;
    let (minimal_degree_value, min_degree_witness) = minimal_degree(group, cap)?;
    let fpr_value = fpr(group, cap)?;
    // m(G) = n (1 - fpr) must hold exactly
    debug_assert_eq!(
        BigRational::from_integer(num_bigint::BigInt::from(group.degree()))
            * (BigRational::one() - fpr_value.clone()),
        BigRational::from_integer(num_bigint::BigInt::from(minimal_degree_value))
    );
    Ok(MetricReport {
        order: group.order(),
        base_size,
        base_witness,
        minimal_degree: minimal_degree_value,
        min_degree_witness,
        fpr: fpr_value,
        chief_length,
    })
}

/// Exhaustive base-size oracle for tiny degrees: minimum over all point
/// subsets, by increasing size.
pub fn base_size_brute(group: &PermGroup) -> usize {
    let n = group.degree();
    assert!(n <= 16, "brute base size is for tiny degrees only");
    if group.order().is_one() {
        return 0;
    }
    for size in 1..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
            if group.pointwise_stabilizer(&subset).unwrap().order().is_one() {
                return size;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::actions::orbit_block_system;
    use crate::group::DEFAULT_CENSUS_CAP as CAP;
    use crate::perm::parse_cycles;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        let gens = gens
            .iter()
            .map(|s| parse_cycles(s, degree, 0).unwrap())
            .collect();
        PermGroup::new(degree, gens).unwrap()
    }

    #[test]
    fn base_sizes_of_standard_groups() {
        assert_eq!(base_size_exact(&PermGroup::cyclic(4), None).unwrap().0, 1);
        assert_eq!(base_size_exact(&PermGroup::symmetric(4), None).unwrap().0, 3);
        assert_eq!(base_size_exact(&PermGroup::symmetric(6), None).unwrap().0, 5);
        assert_eq!(base_size_exact(&PermGroup::alternating(6), None).unwrap().0, 4);
        assert_eq!(base_size_exact(&PermGroup::trivial(5), None).unwrap(), (0, vec![]));
    }

    #[test]
    fn base_witness_is_minimal_and_irredundant() {
        let d4 = group(4, &["(1 2 3 4)", "(1 3)"]);
        let (b, witness) = base_size_exact(&d4, None).unwrap();
        assert_eq!(b, 2);
        assert!(d4.pointwise_stabilizer(&witness).unwrap().order().is_one());
        for drop in 0..witness.len() {
            let mut sub = witness.clone();
            sub.remove(drop);
            assert!(!d4.pointwise_stabilizer(&sub).unwrap().order().is_one());
        }
    }

    #[test]
    fn base_size_matches_brute_oracle_on_random_s6_subgroups() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(66);
        for _ in 0..25 {
            let g = crate::sample::random_subgroup(&mut rng, 6, 2);
            assert_eq!(
                base_size_exact(&g, None).unwrap().0,
                base_size_brute(&g),
                "disagreement for {:?}",
                g.generators()
            );
        }
    }

    #[test]
    fn minimal_degree_examples() {
        let (m, w) = minimal_degree(&PermGroup::symmetric(5), CAP).unwrap();
        assert_eq!(m, 2);
        assert_eq!(w.unwrap().moved_points(), 2);
        assert_eq!(minimal_degree(&PermGroup::alternating(5), CAP).unwrap().0, 3);
        assert_eq!(minimal_degree(&PermGroup::cyclic(4), CAP).unwrap().0, 4);
        assert_eq!(minimal_degree(&PermGroup::trivial(3), CAP).unwrap().0, 0);
    }

    #[test]
    fn census_and_class_modes_agree() {
        for g in [
            PermGroup::symmetric(6),
            PermGroup::alternating(6),
            PermGroup::cyclic(12),
            group(4, &["(1 2 3 4)", "(1 3)"]),
        ] {
            let census = minimal_degree_census(&g, CAP).unwrap().0;
            let classes = minimal_degree_classes(&g, CAP).unwrap().0;
            assert_eq!(census, classes);
        }
    }

    #[test]
    fn minimal_degree_census_matches_brute_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let g = crate::sample::random_subgroup(&mut rng, 6, 2);
            let brute = crate::testkit::brute_elements(&g)
                .iter()
                .filter(|e| !e.is_identity())
                .map(|e| e.moved_points())
                .min()
                .unwrap_or(0);
            assert_eq!(minimal_degree(&g, CAP).unwrap().0, brute);
        }
    }

    #[test]
    fn fpr_examples() {
        use num_bigint::BigInt;
        let s5 = PermGroup::symmetric(5);
        assert_eq!(
            fpr(&s5, CAP).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(5))
        );
        // semiregular groups have fpr 0
        assert_eq!(fpr(&PermGroup::cyclic(4), CAP).unwrap(), BigRational::zero());
    }

    #[test]
    fn fixity_plus_min_degree_is_degree() {
        let s6 = PermGroup::symmetric(6);
        let (m, w) = minimal_degree(&s6, CAP).unwrap();
        let w = w.unwrap();
        assert_eq!(w.fixed_points() + m, 6);
    }

    #[test]
    fn block_base_transfer_on_c4() {
        let c4 = PermGroup::cyclic(4);
        let c2 = group(4, &["(1 3)(2 4)"]);
        let system = orbit_block_system(&c4, &c2).unwrap();
        let base = block_base_transfer(&c4, &system, &[0]).unwrap();
        assert_eq!(base, vec![0]);
        assert!(c4.pointwise_stabilizer(&base).unwrap().order().is_one());
    }

    #[test]
    fn block_base_transfer_rejects_non_semiregular_kernel() {
        // D4 with blocks {1,3},{2,4}: the kernel contains (1 3), which fixes
        // the point 2, so the kernel is not semiregular.
        let d4 = group(4, &["(1 2 3 4)", "(1 3)"]);
        let system =
            BlockSystem::from_partition(&d4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(system.kernel().order_u64(), Some(4));
        assert!(matches!(
            block_base_transfer(&d4, &system, &[0]),
            Err(Error::KernelNotSemiregular)
        ));
    }

    #[test]
    fn block_base_transfer_rejects_non_base_of_image() {
        let c4 = PermGroup::cyclic(4);
        let c2 = group(4, &["(1 3)(2 4)"]);
        let system = orbit_block_system(&c4, &c2).unwrap();
        assert!(matches!(
            block_base_transfer(&c4, &system, &[]),
            Err(Error::NotABase { .. })
        ));
    }

    #[test]
    fn block_degree_bound_on_c4() {
        let c4 = PermGroup::cyclic(4);
        let c2 = group(4, &["(1 3)(2 4)"]);
        let check = block_degree_bound_check(&c4, &c2, CAP).unwrap();
        assert!(check.holds);
        assert_eq!(check.lhs, 4);
        assert_eq!(check.block_size, 2);
        assert_eq!(check.image_min_degree, 2);
        assert_eq!(check.lhs, check.block_size * check.image_min_degree);
    }
}
