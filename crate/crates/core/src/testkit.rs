//! Chain-free brute-force oracles shared by unit tests. Everything here
//! enumerates naively on purpose: these routines double-check the clever
//! paths and must stay independent of them.

use std::collections::{BTreeSet, HashSet};

use crate::group::PermGroup;
use crate::perm::Permutation;

/// All elements by closing the generators under products (no chains).
pub fn brute_elements(group: &PermGroup) -> Vec<Permutation> {
    let mut set: BTreeSet<Permutation> = BTreeSet::new();
    set.insert(Permutation::identity(group.degree()));
    loop {
        let items: Vec<Permutation> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &items {
            for g in group.generators() {
                if set.insert(a.compose(g)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return set.into_iter().collect();
        }
    }
}

/// Every subgroup of a tiny group, by closing element-extensions upward.
pub fn all_subgroups(group: &PermGroup) -> Vec<Vec<Permutation>> {
    let elements = brute_elements(group);
    let mut subgroups: Vec<BTreeSet<Permutation>> = Vec::new();
    subgroups.push([Permutation::identity(group.degree())].into_iter().collect());
    let mut head = 0;
    while head < subgroups.len() {
        let current = subgroups[head].clone();
        for e in &elements {
            if current.contains(e) {
                continue;
            }
            let mut grown = current.clone();
            grown.insert(e.clone());
            loop {
                let items: Vec<Permutation> = grown.iter().cloned().collect();
                let mut grew = false;
                for a in &items {
                    for b in &items {
                        if grown.insert(a.compose(b)) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            if !subgroups.contains(&grown) {
                subgroups.push(grown);
            }
        }
        head += 1;
    }
    subgroups.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Normal subgroups of a tiny group, as element lists.
pub fn all_normal_subgroups(group: &PermGroup) -> Vec<Vec<Permutation>> {
    let elements = brute_elements(group);
    all_subgroups(group)
        .into_iter()
        .filter(|sub| {
            let set: HashSet<Vec<u32>> = sub.iter().map(|p| p.images().to_vec()).collect();
            elements
                .iter()
                .all(|g| sub.iter().all(|s| set.contains(s.conjugate_by(g).images())))
        })
        .collect()
}

/// Transitivity of an element list on the group's degree.
pub fn is_transitive_elements(degree: usize, elements: &[Permutation]) -> bool {
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for e in elements {
            let y = e.apply(x);
            if !seen[y] {
                seen[y] = true;
                frontier.push(y);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Semiregularity of an element list: no non-identity element fixes a point.
pub fn is_semiregular_elements(elements: &[Permutation]) -> bool {
    elements
        .iter()
        .all(|e| e.is_identity() || e.fixed_points() == 0)
}

/// All set partitions of {0..n-1} (n small), for block-system oracles.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mut smaller in all_partitions(n - 1) {
        for i in 0..smaller.len() {
            let mut copy = smaller.clone();
            copy[i].push(n - 1);
            out.push(copy);
        }
        smaller.push(vec![n - 1]);
        out.push(smaller);
    }
    out
}
