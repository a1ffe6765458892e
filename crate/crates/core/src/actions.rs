//! Block systems, quotient actions on orbit partitions, coset actions,
//! kernels, the taxonomy classifier for the semiprimitivity chain, and
//! antiplinth computation.
//!
//! Kernels of block actions are computed as pointwise stabilizers in the
//! action on points-plus-blocks, so there is no separate homomorphism-kernel
//! algorithm anywhere.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::structure::{is_normal_subgroup, NormalLattice};

/// Default cap on the index of a coset action.
pub const DEFAULT_INDEX_CAP: u64 = 100_000;

/// A G-invariant partition with the induced action on blocks and the kernel
/// of that action.
pub struct BlockSystem {
    partition: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    block_size: usize,
    induced_image: PermGroup,
    kernel: PermGroup,
}

impl BlockSystem {
    /// Builds the system from a partition already known to be invariant;
    /// checks invariance, uniform block size, and computes image and kernel.
    pub fn from_partition(group: &PermGroup, mut partition: Vec<Vec<usize>>) -> Result<BlockSystem> {
        let n = group.degree();
        for block in &mut partition {
            block.sort_unstable();
        }
        partition.sort_by_key(|b| b[0]);
        let r = partition.len();
        let mut block_of = vec![usize::MAX; n];
        let mut covered = 0usize;
        for (bi, block) in partition.iter().enumerate() {
            for &p in block {
                if p >= n || block_of[p] != usize::MAX {
                    return Err(Error::Precondition("not a partition of the point set".into()));
                }
                block_of[p] = bi;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::Precondition("partition does not cover the point set".into()));
        }
        let block_size = partition[0].len();
        if partition.iter().any(|b| b.len() != block_size) {
            return Err(Error::Precondition("blocks must have equal size".into()));
        }
        // block action of each generator; invariance check
        let mut image_gens = Vec::new();
        let mut ext_gens = Vec::new();
        for g in group.generators() {
            let mut img = vec![u32::MAX; r];
            for (bi, block) in partition.iter().enumerate() {
                let target = block_of[g.apply(block[0])];
                for &p in block {
                    if block_of[g.apply(p)] != target {
                        return Err(Error::Precondition(
                            "partition is not invariant under the group".into(),
                        ));
                    }
                }
                img[bi] = target as u32;
            }
            image_gens.push(Permutation::from_images(img.clone())?);
            let mut ext: Vec<u32> = g.images().to_vec();
            ext.extend(img.iter().map(|&b| n as u32 + b));
            ext_gens.push(Permutation::from_images(ext)?);
        }
        let induced_image = PermGroup::new(r, image_gens)?;
        let ext = PermGroup::new(n + r, ext_gens)?;
        let block_points: Vec<usize> = (n..n + r).collect();
        let stab = ext.pointwise_stabilizer(&block_points)?;
        let kernel_gens = stab
            .generators()
            .iter()
            .map(|g| g.restrict(&(0..n).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let kernel = PermGroup::new(n, kernel_gens)?;
        Ok(BlockSystem {
            partition,
            block_of,
            block_size,
            induced_image,
            kernel,
        })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn block_count(&self) -> usize {
        self.partition.len()
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    /// The action induced on the blocks.
    pub fn image(&self) -> &PermGroup {
        &self.induced_image
    }

    /// Elements fixing every block setwise, as a subgroup on the points.
    pub fn kernel(&self) -> &PermGroup {
        &self.kernel
    }

    pub fn is_trivial_single_block(&self) -> bool {
        self.partition.len() == 1
    }
}

impl BlockSystem {
    /// Action of one permutation on the blocks (it must preserve them).
    pub fn action_on_blocks(&self, p: &Permutation) -> Result<Permutation> {
        let mut images = vec![u32::MAX; self.partition.len()];
        for (bi, block) in self.partition.iter().enumerate() {
            let target = self.block_of[p.apply(block[0])];
            for &pt in block {
                if self.block_of[p.apply(pt)] != target {
                    return Err(Error::Precondition(
                        "permutation does not preserve the block system".into(),
                    ));
                }
            }
            images[bi] = target as u32;
        }
        Permutation::from_images(images)
    }

    /// Induced action of a subgroup of the ambient group on the blocks.
    pub fn image_of_subgroup(&self, sub: &PermGroup) -> Result<PermGroup> {
        let gens = sub
            .generators()
            .iter()
            .map(|g| self.action_on_blocks(g))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.partition.len(), gens)
    }
}

/// Setwise stabilizer of a block of imprimitivity: the translates of the set
/// must tile the point set, and the stabilizer is the stabilizer of the
/// corresponding block-point in the extended action.
pub fn setwise_stabilizer_of_block(group: &PermGroup, block: &[usize]) -> Result<PermGroup> {
    let n = group.degree();
    let mut sorted: Vec<usize> = block.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || *sorted.last().unwrap() >= n {
        return Err(Error::Precondition("block must be a nonempty point set".into()));
    }
    // orbit of the set under the generators
    let mut translates: Vec<Vec<usize>> = vec![sorted.clone()];
    let mut head = 0;
    while head < translates.len() {
        let current = translates[head].clone();
        for g in group.generators() {
            let mut image: Vec<usize> = current.iter().map(|&p| g.apply(p)).collect();
            image.sort_unstable();
            if !translates.contains(&image) {
                translates.push(image);
            }
        }
        head += 1;
    }
    let mut covered = vec![false; n];
    for t in &translates {
        for &p in t {
            if covered[p] {
                return Err(Error::Precondition(
                    "set is not a block: its translates overlap".into(),
                ));
            }
            covered[p] = true;
        }
    }
    // moved points must be tiled; untouched fixed points form their own cells
    let mut partition = translates;
    for p in 0..n {
        if !covered[p] {
            partition.push(vec![p]);
        }
    }
    let which = partition
        .iter()
        .position(|t| *t == sorted)
        .expect("the block itself is a translate");
    let system = BlockSystemLoose::build(group, partition)?;
    system.stabilizer_of_block(which)
}

/// Like `BlockSystem` but allows unequal cell sizes (needed for setwise
/// stabilizers where fixed points sit outside the block's orbit).
struct BlockSystemLoose<'a> {
    group: &'a PermGroup,
    ext: PermGroup,
}

impl<'a> BlockSystemLoose<'a> {
    fn build(group: &'a PermGroup, partition: Vec<Vec<usize>>) -> Result<Self> {
        let n = group.degree();
        let r = partition.len();
        let mut cell_of = vec![usize::MAX; n];
        for (ci, cell) in partition.iter().enumerate() {
            for &p in cell {
                cell_of[p] = ci;
            }
        }
        let mut ext_gens = Vec::new();
        for g in group.generators() {
            let mut ext: Vec<u32> = g.images().to_vec();
            ext.extend(std::iter::repeat(0).take(r));
            for (ci, cell) in partition.iter().enumerate() {
                let target = cell_of[g.apply(cell[0])];
                for &p in cell {
                    if cell_of[g.apply(p)] != target {
                        return Err(Error::Precondition(
                            "partition is not invariant under the group".into(),
                        ));
                    }
                }
                ext[n + ci] = (n + target) as u32;
            }
            ext_gens.push(Permutation::from_images(ext)?);
        }
        let ext = PermGroup::new(n + r, ext_gens)?;
        Ok(BlockSystemLoose { group, ext })
    }

    fn stabilizer_of_block(&self, which: usize) -> Result<PermGroup> {
        let n = self.group.degree();
        let stab = self.ext.pointwise_stabilizer(&[n + which])?;
        let gens = stab
            .generators()
            .iter()
            .map(|g| g.restrict(&(0..n).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(n, gens)
    }
}

pub fn is_transitive(group: &PermGroup) -> bool {
    group.is_transitive()
}

/// Semiregular: only the identity fixes a point; equivalently every orbit
/// has length equal to the group order.
pub fn is_semiregular(group: &PermGroup) -> bool {
    match group.order_u64() {
        Some(order) => group.orbits().iter().all(|o| o.len() as u64 == order),
        // order exceeding u64 cannot match an orbit length at desk scale
        None => false,
    }
}

/// Block system formed by the orbits of an intransitive normal subgroup.
pub fn orbit_block_system(group: &PermGroup, normal: &PermGroup) -> Result<BlockSystem> {
    if !is_normal_subgroup(normal, group) {
        return Err(Error::NotNormal);
    }
    let orbits = normal.orbits();
    if orbits.len() <= 1 {
        return Err(Error::UnexpectedlyTransitive);
    }
    BlockSystem::from_partition(group, orbits)
}

/// The finest block system whose block containing `alpha` also contains
/// `beta` (union-find refinement).
pub fn minimal_blocks(group: &PermGroup, alpha: usize, beta: usize) -> Result<BlockSystem> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = group.degree();
    if alpha >= n || beta >= n {
        return Err(Error::PointOutOfRange {
            point: alpha.max(beta) + 1,
            degree: n,
        });
    }
    if alpha == beta {
        return Err(Error::Precondition("minimal blocks need two distinct points".into()));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut queue = vec![(alpha, beta)];
    let (ra, rb) = (find(&mut parent, alpha), find(&mut parent, beta));
    parent[rb.max(ra)] = rb.min(ra);
    while let Some((a, b)) = queue.pop() {
        for g in group.generators() {
            let (ia, ib) = (g.apply(a), g.apply(b));
            let (qa, qb) = (find(&mut parent, ia), find(&mut parent, ib));
            if qa != qb {
                parent[qa.max(qb)] = qa.min(qb);
                queue.push((qa, qb));
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        let root = find(&mut parent, p);
        blocks[root].push(p);
    }
    blocks.retain(|b| !b.is_empty());
    BlockSystem::from_partition(group, blocks)
}

/// Primitive: no nontrivial invariant partition; tested by pair refinement
/// against a fixed first point.
pub fn is_primitive(group: &PermGroup) -> Result<bool> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = group.degree();
    if n <= 2 {
        return Ok(true);
    }
    for beta in 1..n {
        let system = minimal_blocks(group, 0, beta)?;
        if !system.is_trivial_single_block() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A coset action together with its kernel (the core of the subgroup).
pub struct CosetAction {
    pub action: PermGroup,
    pub kernel: PermGroup,
}

/// Right-multiplication action of `group` on the right cosets of `sub`.
/// Representatives are chosen breadth-first from the identity with the
/// generators in listed order, so the output is reproducible bit for bit.
pub fn coset_action(group: &PermGroup, sub: &PermGroup, index_cap: u64) -> Result<CosetAction> {
    if !sub.is_subgroup_of(group) {
        return Err(Error::NotASubgroup);
    }
    let (index, rem) = group.order().div_rem(&sub.order());
    debug_assert!(rem == BigUint::ZERO);
    let index = index.to_u64().filter(|&i| i <= index_cap).ok_or_else(|| {
        Error::IndexCapExceeded {
            index: (group.order() / sub.order()).to_string(),
            cap: index_cap,
        }
    })? as usize;
    let degree = group.degree();
    let mut reps: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); group.generators().len()];
    let mut head = 0usize;
    while head < reps.len() {
        for (gi, g) in group.generators().iter().enumerate() {
            let x = reps[head].compose(g);
            let mut found = None;
            for (j, r) in reps.iter().enumerate() {
                if sub.contains(&x.compose(&r.inverse())) {
                    found = Some(j);
                    break;
                }
            }
            let j = match found {
                Some(j) => j,
                None => {
                    reps.push(x);
                    reps.len() - 1
                }
            };
            images[gi].push(j as u32);
        }
        head += 1;
    }
    debug_assert_eq!(reps.len(), index);
    let action_gens = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    let mut ext_gens = Vec::new();
    for (g, a) in group.generators().iter().zip(&action_gens) {
        let mut ext: Vec<u32> = g.images().to_vec();
        ext.extend(a.images().iter().map(|&b| degree as u32 + b));
        ext_gens.push(Permutation::from_images(ext)?);
    }
    let ext = PermGroup::new(degree + index, ext_gens)?;
    let coset_points: Vec<usize> = (degree..degree + index).collect();
    let stab = ext.pointwise_stabilizer(&coset_points)?;
    let kernel_gens = stab
        .generators()
        .iter()
        .map(|g| g.restrict(&(0..degree).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetAction {
        action: PermGroup::new(index, action_gens)?,
        kernel: PermGroup::new(degree, kernel_gens)?,
    })
}

/// Position of a transitive group in the semiprimitivity chain, strongest
/// label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaxonomyKind {
    Primitive,
    QuasiprimitiveNotPrimitive,
    InnatelyTransitiveNotQp,
    SemiprimitiveNotIt,
    TransitiveNotSemiprimitive,
    Intransitive,
}

impl TaxonomyKind {
    pub fn is_semiprimitive(self) -> bool {
        matches!(
            self,
            TaxonomyKind::Primitive
                | TaxonomyKind::QuasiprimitiveNotPrimitive
                | TaxonomyKind::InnatelyTransitiveNotQp
                | TaxonomyKind::SemiprimitiveNotIt
        )
    }

    pub fn is_quasiprimitive(self) -> bool {
        matches!(
            self,
            TaxonomyKind::Primitive | TaxonomyKind::QuasiprimitiveNotPrimitive
        )
    }

    pub fn is_innately_transitive(self) -> bool {
        self.is_quasiprimitive() || self == TaxonomyKind::InnatelyTransitiveNotQp
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaxonomyKind::Primitive => "primitive",
            TaxonomyKind::QuasiprimitiveNotPrimitive => "quasiprimitive_not_primitive",
            TaxonomyKind::InnatelyTransitiveNotQp => "innately_transitive_not_qp",
            TaxonomyKind::SemiprimitiveNotIt => "semiprimitive_not_it",
            TaxonomyKind::TransitiveNotSemiprimitive => "transitive_not_semiprimitive",
            TaxonomyKind::Intransitive => "intransitive",
        }
    }
}

/// Classification outcome with a certifying or violating normal subgroup
/// where one is meaningful.
pub struct TaxonomyLabel {
    pub kind: TaxonomyKind,
    pub witness: Option<PermGroup>,
}

/// Strongest applicable label. The lattice must belong to `group`.
pub fn classify(group: &PermGroup, lattice: &NormalLattice) -> Result<TaxonomyLabel> {
    if !group.is_transitive() {
        return Ok(TaxonomyLabel {
            kind: TaxonomyKind::Intransitive,
            witness: None,
        });
    }
    let member_info: Vec<(bool, bool)> = lattice
        .members()
        .iter()
        .map(|m| (m.is_transitive(), is_semiregular(m)))
        .collect();
    let quasiprimitive = (1..lattice.len()).all(|i| member_info[i].0);
    let innately = lattice
        .minimal_normal_indices()
        .iter()
        .any(|&i| member_info[i].0);
    let semiprimitive = (0..lattice.len()).all(|i| member_info[i].0 || member_info[i].1);
    debug_assert!(!quasiprimitive || innately || lattice.len() == 1);
    debug_assert!(!innately || semiprimitive);
    if quasiprimitive && is_primitive(group)? {
        return Ok(TaxonomyLabel {
            kind: TaxonomyKind::Primitive,
            witness: None,
        });
    }
    if quasiprimitive {
        return Ok(TaxonomyLabel {
            kind: TaxonomyKind::QuasiprimitiveNotPrimitive,
            witness: None,
        });
    }
    if innately {
        // certify with a transitive minimal normal subgroup
        let idx = lattice
            .minimal_normal_indices()
            .into_iter()
            .find(|&i| member_info[i].0)
            .unwrap();
        return Ok(TaxonomyLabel {
            kind: TaxonomyKind::InnatelyTransitiveNotQp,
            witness: Some(lattice.member(idx).clone()),
        });
    }
    if semiprimitive {
        // certify with a minimal normal subgroup (necessarily intransitive)
        let idx = lattice.minimal_normal_indices()[0];
        return Ok(TaxonomyLabel {
            kind: TaxonomyKind::SemiprimitiveNotIt,
            witness: Some(lattice.member(idx).clone()),
        });
    }
    let bad = (0..lattice.len())
        .find(|&i| !member_info[i].0 && !member_info[i].1)
        .unwrap();
    Ok(TaxonomyLabel {
        kind: TaxonomyKind::TransitiveNotSemiprimitive,
        witness: Some(lattice.member(bad).clone()),
    })
}

/// Semiprimitivity decided two ways: directly from the definition, and by
/// the kernel characterisation (for every intransitive normal subgroup N,
/// the kernel of the action on N-orbits is N itself). The flags must agree.
pub fn is_semiprimitive_two_ways(
    group: &PermGroup,
    lattice: &NormalLattice,
) -> Result<(bool, bool)> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let by_definition = lattice
        .members()
        .iter()
        .all(|m| m.is_transitive() || is_semiregular(m));
    let mut by_kernel = true;
    for m in lattice.members() {
        if m.is_transitive() {
            continue;
        }
        let system = BlockSystem::from_partition(group, m.orbits())?;
        if !system.kernel().eq_subgroup(m) {
            by_kernel = false;
            break;
        }
    }
    Ok((by_definition, by_kernel))
}

/// Maximal elements among the intransitive normal subgroups. For a
/// quasiprimitive group this is exactly the trivial subgroup, which keeps the
/// quotient-bound checks uniform.
pub fn antiplinths(group: &PermGroup, lattice: &NormalLattice) -> Result<Vec<usize>> {
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let intransitive: Vec<usize> = (0..lattice.len())
        .filter(|&i| !lattice.member(i).is_transitive())
        .collect();
    Ok(intransitive
        .iter()
        .copied()
        .filter(|&i| {
            !intransitive
                .iter()
                .any(|&j| j != i && lattice.leq(i, j))
        })
        .collect())
}
