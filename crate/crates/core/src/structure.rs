//! Abstract structure of a desk-scale group: normal closures, derived
//! subgroup, center, centralizers of normal subgroups, conjugacy classes,
//! the full normal-subgroup lattice with its Hasse diagram, chief series,
//! and recognition of the shapes C_p^d and T^d of minimal normal subgroups.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Smallest subgroup containing `seeds` that is invariant under conjugation
/// by the generators of `ambient`.
pub fn normal_closure(ambient: &PermGroup, seeds: &[Permutation]) -> Result<PermGroup> {
    let degree = ambient.degree();
    for s in seeds {
        if !ambient.contains(s) {
            return Err(Error::NotAMember);
        }
    }
    let mut gens: Vec<Permutation> = Vec::new();
    let mut queue: Vec<Permutation> = Vec::new();
    let mut group = PermGroup::trivial(degree);
    for s in seeds {
        if !s.is_identity() && !group.contains(s) {
            gens.push(s.clone());
            queue.push(s.clone());
            group = PermGroup::new(degree, gens.clone())?;
        }
    }
    while let Some(s) = queue.pop() {
        for t in ambient.generators() {
            let c = s.conjugate_by(t);
            if !group.contains(&c) {
                gens.push(c.clone());
                queue.push(c);
                group = PermGroup::new(degree, gens.clone())?;
            }
        }
    }
    Ok(group)
}

/// Derived subgroup: normal closure of the generator commutators.
pub fn derived_subgroup(group: &PermGroup) -> PermGroup {
    let mut commutators = Vec::new();
    for a in group.generators() {
        for b in group.generators() {
            let c = a
                .inverse()
                .compose(&b.inverse())
                .compose(a)
                .compose(b);
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    normal_closure(group, &commutators).expect("commutators lie in the group")
}

/// Center by element census: the subgroup of elements commuting with every
/// generator. Errors when the order exceeds `cap`.
pub fn center(group: &PermGroup, cap: u64) -> Result<PermGroup> {
    let mut central: Vec<Permutation> = Vec::new();
    let mut sub = PermGroup::trivial(group.degree());
    for e in group.elements(cap)? {
        if group.generators().iter().all(|g| e.compose(g) == g.compose(&e)) && !e.is_identity() && !sub.contains(&e) {
            central.push(e);
            sub = PermGroup::new(group.degree(), central.clone())?;
        }
    }
    Ok(sub)
}

/// Verifies that `sub` is a normal subgroup of `group`.
pub fn is_normal_subgroup(sub: &PermGroup, group: &PermGroup) -> bool {
    sub.is_subgroup_of(group)
        && sub
            .generators()
            .iter()
            .all(|s| group.generators().iter().all(|g| sub.contains(&s.conjugate_by(g))))
}

/// Centralizer of a normal subgroup: the kernel of the conjugation action on
/// the element list of `normal`, computed as a pointwise stabilizer in the
/// action on points plus elements.
pub fn centralizer_of_normal(group: &PermGroup, normal: &PermGroup, cap: u64) -> Result<PermGroup> {
    if !is_normal_subgroup(normal, group) {
        return Err(Error::NotNormal);
    }
    let n = group.degree();
    let elements: Vec<Permutation> = normal.elements(cap)?.collect();
    let mut slot: HashMap<Vec<u32>, usize> = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        slot.insert(e.images().to_vec(), i);
    }
    let k = elements.len();
    let mut ext_gens = Vec::with_capacity(group.generators().len());
    for g in group.generators() {
        let mut images: Vec<u32> = (0..(n + k) as u32).collect();
        for (i, img) in g.images().iter().enumerate() {
            images[i] = *img;
        }
        for (i, e) in elements.iter().enumerate() {
            let conj = e.conjugate_by(g);
            let j = *slot.get(conj.images()).ok_or(Error::NotNormal)?;
            images[n + i] = (n + j) as u32;
        }
        ext_gens.push(Permutation::from_images(images)?);
    }
    let ext = PermGroup::new(n + k, ext_gens)?;
    let element_points: Vec<usize> = (n..n + k).collect();
    let stab = ext.pointwise_stabilizer(&element_points)?;
    let gens = stab
        .generators()
        .iter()
        .map(|g| g.restrict(&(0..n).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(n, gens)
}

/// Conjugacy classes of a capped group. Representatives are the elements of
/// smallest chain index in each class, listed in index order.
pub struct ConjugacyClasses {
    pub reps: Vec<Permutation>,
    pub sizes: Vec<u64>,
}

pub fn conjugacy_classes(group: &PermGroup, cap: u64) -> Result<ConjugacyClasses> {
    let chain = group.chain();
    let order = chain
        .order()
        .to_u64()
        .filter(|&o| o <= cap)
        .ok_or_else(|| Error::CensusCapExceeded {
            order: chain.order().to_string(),
            cap,
        })?;
    let mut visited = vec![false; order as usize];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..order {
        if visited[start as usize] {
            continue;
        }
        let rep = chain.element_at(start);
        visited[start as usize] = true;
        let mut size = 1u64;
        let mut queue = vec![rep.clone()];
        while let Some(e) = queue.pop() {
            for g in group.generators() {
                let c = e.conjugate_by(g);
                let idx = chain
                    .index_of(&c)
                    .expect("conjugate of a member is a member");
                if !visited[idx as usize] {
                    visited[idx as usize] = true;
                    size += 1;
                    queue.push(c);
                }
            }
        }
        reps.push(rep);
        sizes.push(size);
    }
    Ok(ConjugacyClasses { reps, sizes })
}

/// The complete lattice of normal subgroups of a group, with Hasse covers.
pub struct NormalLattice {
    members: Vec<PermGroup>,
    orders: Vec<BigUint>,
    /// `leq[i][j]` = members[i] is contained in members[j].
    leq: Vec<Vec<bool>>,
    /// Hasse covering relation: indices of members covering member i.
    covers_up: Vec<Vec<usize>>,
    trivial: usize,
    full: usize,
}

impl NormalLattice {
    pub fn members(&self) -> &[PermGroup] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn member(&self, i: usize) -> &PermGroup {
        &self.members[i]
    }

    pub fn order_of(&self, i: usize) -> &BigUint {
        &self.orders[i]
    }

    pub fn trivial_index(&self) -> usize {
        self.trivial
    }

    pub fn full_index(&self) -> usize {
        self.full
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn covers_of(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }

    /// Indices of the minimal nontrivial members.
    pub fn minimal_normal_indices(&self) -> Vec<usize> {
        self.covers_up[self.trivial].clone()
    }

    pub fn minimal_normals(&self) -> Vec<&PermGroup> {
        self.minimal_normal_indices()
            .into_iter()
            .map(|i| &self.members[i])
            .collect()
    }

    /// Index of the socle: the join of all minimal normal subgroups.
    pub fn socle_index(&self) -> usize {
        let minimals = self.minimal_normal_indices();
        if minimals.is_empty() {
            return self.trivial;
        }
        // the join is the smallest member containing all minimals
        let mut best: Option<usize> = None;
        for j in 0..self.members.len() {
            if minimals.iter().all(|&i| self.leq[i][j]) {
                match best {
                    Some(b) if self.orders[j] >= self.orders[b] => {}
                    _ => best = Some(j),
                }
            }
        }
        best.expect("the full group contains all minimals")
    }

    pub fn socle(&self) -> &PermGroup {
        &self.members[self.socle_index()]
    }

    /// True when the lattice is exactly {1, G} with G nontrivial.
    pub fn is_simple(&self) -> bool {
        self.members.len() == 2
    }

    /// A maximal chain from the trivial member to the full group, choosing at
    /// each step the cover picked by `choose` from the candidates.
    pub fn maximal_chain_by<F>(&self, mut choose: F) -> Vec<usize>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let mut chain = vec![self.trivial];
        let mut at = self.trivial;
        while at != self.full {
            let ups = &self.covers_up[at];
            debug_assert!(!ups.is_empty());
            let pick = choose(ups);
            chain.push(pick);
            at = pick;
        }
        chain
    }

    /// Chief series: a maximal chain in the lattice (smallest-order cover
    /// first, for reproducibility).
    pub fn chief_series(&self) -> Vec<usize> {
        self.maximal_chain_by(|ups| {
            *ups.iter()
                .min_by_key(|&&j| self.orders[j].clone())
                .unwrap()
        })
    }

    /// Chief length: number of factors in a chief series.
    pub fn chief_length(&self) -> usize {
        self.chief_series().len() - 1
    }

    /// Index of the member equal to the given subgroup, if present.
    pub fn index_of_subgroup(&self, sub: &PermGroup) -> Option<usize> {
        let order = sub.order();
        (0..self.members.len())
            .find(|&i| self.orders[i] == order && sub.is_subgroup_of(&self.members[i]))
    }
}

/// Enumerates all normal subgroups: seed with the normal closures of one
/// representative per conjugacy class, then close under pairwise join.
/// Complete because every normal subgroup is the join of the closures of the
/// cyclic subgroups it contains.
pub fn normal_lattice(group: &PermGroup, cap: u64) -> Result<NormalLattice> {
    let classes = conjugacy_classes(group, cap)?;
    let degree = group.degree();
    let mut members: Vec<PermGroup> = vec![PermGroup::trivial(degree)];
    let push_unique = |members: &mut Vec<PermGroup>, g: PermGroup| -> bool {
        if members.iter().any(|m| m.eq_subgroup(&g)) {
            false
        } else {
            members.push(g);
            true
        }
    };
    for rep in classes.reps.iter().skip(1) {
        let closure = normal_closure(group, std::slice::from_ref(rep))?;
        push_unique(&mut members, closure);
    }
    // close under joins
    let mut frontier: Vec<usize> = (0..members.len()).collect();
    while !frontier.is_empty() {
        let mut added = Vec::new();
        for &i in &frontier {
            for j in 0..members.len() {
                if i == j {
                    continue;
                }
                if members[i].is_subgroup_of(&members[j]) || members[j].is_subgroup_of(&members[i])
                {
                    continue;
                }
                let mut gens = members[i].generators().to_vec();
                gens.extend_from_slice(members[j].generators());
                let join = PermGroup::new(degree, gens)?;
                if push_unique(&mut members, join) {
                    added.push(members.len() - 1);
                }
            }
        }
        frontier = added;
    }
    push_unique(&mut members, group.clone());

    members.sort_by_key(|m| m.order());
    let orders: Vec<BigUint> = members.iter().map(|m| m.order()).collect();
    let k = members.len();
    let mut leq = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            leq[i][j] = i == j
                || (orders[i] < orders[j]
                    && (&orders[j] % &orders[i]) == BigUint::ZERO
                    && members[i].is_subgroup_of(&members[j]));
        }
    }
    let mut covers_up = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if i != j && leq[i][j] {
                let direct = !(0..k).any(|m| m != i && m != j && leq[i][m] && leq[m][j]);
                if direct {
                    covers_up[i].push(j);
                }
            }
        }
    }
    let trivial = 0;
    let full = k - 1;
    debug_assert!(orders[trivial] == BigUint::one());
    debug_assert!(orders[full] == group.order());
    Ok(NormalLattice {
        members,
        orders,
        leq,
        covers_up,
        trivial,
        full,
    })
}

/// Shape of a minimal normal subgroup: elementary abelian C_p^d or a direct
/// power T^d of a nonabelian simple group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalNormalShape {
    ElementaryAbelian {
        p: u64,
        d: u32,
    },
    PowerOfSimple {
        factor_order: BigUint,
        d: u32,
        /// `Some(k)` when the factor is A_k; the order-20160 coincidence with
        /// PSL3(4) is resolved by the order-15-element fingerprint.
        alternating_degree: Option<u32>,
    },
}

/// Decides the shape of `m`, which must be minimal normal in the group whose
/// lattice is given.
pub fn shape_of_minimal_normal(
    m: &PermGroup,
    lattice: &NormalLattice,
    cap: u64,
) -> Result<MinimalNormalShape> {
    let m_order = m.order();
    if m_order == BigUint::one() {
        return Err(Error::Precondition("minimal normal subgroups are nontrivial".into()));
    }
    for i in 0..lattice.len() {
        let o = lattice.order_of(i);
        if *o > BigUint::one()
            && *o < m_order
            && lattice.member(i).is_subgroup_of(m)
        {
            return Err(Error::NotMinimalNormal {
                inner_order: o.to_string(),
            });
        }
    }
    shape_of_semisimple(m, cap)
}

/// Shape computation without the minimality check (the caller vouches that
/// `m` is minimal normal in some ambient group).
pub fn shape_of_semisimple(m: &PermGroup, cap: u64) -> Result<MinimalNormalShape> {
    let abelian = m
        .generators()
        .iter()
        .enumerate()
        .all(|(i, a)| m.generators()[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)));
    if abelian {
        let order = m.order_u64().ok_or_else(|| Error::CensusCapExceeded {
            order: m.order().to_string(),
            cap,
        })?;
        let p = smallest_prime_factor(order);
        let mut d = 0u32;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            d += 1;
        }
        if rest != 1 {
            return Err(Error::Precondition(format!(
                "abelian minimal normal subgroup must be a p-group, order {}",
                order
            )));
        }
        for g in m.generators() {
            if g.order() != p {
                return Err(Error::Precondition(
                    "abelian minimal normal subgroup must have prime exponent".into(),
                ));
            }
        }
        return Ok(MinimalNormalShape::ElementaryAbelian { p, d });
    }
    // nonabelian: the simple direct factors are the minimal normal subgroups
    // of m itself
    let m_lattice = normal_lattice(m, cap)?;
    let factors = m_lattice.minimal_normal_indices();
    let d = factors.len() as u32;
    let factor_order = m_lattice.order_of(factors[0]).clone();
    for &f in &factors {
        if *m_lattice.order_of(f) != factor_order {
            return Err(Error::Precondition(
                "simple factors of a minimal normal subgroup must share one order".into(),
            ));
        }
    }
    if factor_order.pow(d) != m.order() {
        return Err(Error::Precondition(
            "product of the simple factors must fill the subgroup".into(),
        ));
    }
    // pairwise trivial intersections
    for a in 0..factors.len() {
        for b in a + 1..factors.len() {
            let ta = m_lattice.member(factors[a]);
            let tb = m_lattice.member(factors[b]);
            for e in ta.elements(cap)? {
                if !e.is_identity() && tb.contains(&e) {
                    return Err(Error::Precondition(
                        "simple factors must intersect trivially".into(),
                    ));
                }
            }
        }
    }
    let alternating_degree =
        alternating_degree_of_simple(m_lattice.member(factors[0]), &factor_order, cap)?;
    Ok(MinimalNormalShape::PowerOfSimple {
        factor_order,
        d,
        alternating_degree,
    })
}

/// If a simple group of the given order is an alternating group A_k (k >= 5),
/// returns k. Order determines k except at 20160, where A_8 is told apart
/// from PSL3(4) by possessing an element of order 15.
fn alternating_degree_of_simple(
    t: &PermGroup,
    order: &BigUint,
    cap: u64,
) -> Result<Option<u32>> {
    for k in 5u32..=20 {
        let alt: BigUint = (1..=k as u64).map(BigUint::from).product::<BigUint>() / 2u32;
        if alt == *order {
            if k == 8 {
                let has15 = t.elements(cap)?.any(|e| e.order() == 15);
                return Ok(has15.then_some(8));
            }
            return Ok(Some(k));
        }
        if alt > *order {
            break;
        }
    }
    Ok(None)
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}
