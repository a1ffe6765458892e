//! Seeded random sampling of permutations and small subgroups, used by the
//! property-test corpora and the CLI's `sample(...)` corpus directive.

use rand::Rng;

use crate::group::PermGroup;
use crate::perm::Permutation;

/// Uniform random permutation by Fisher-Yates.
pub fn random_permutation<R: Rng>(rng: &mut R, degree: usize) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for i in (1..degree).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffle is a bijection")
}

/// Subgroup generated by `k` uniform random permutations.
pub fn random_subgroup<R: Rng>(rng: &mut R, degree: usize, k: usize) -> PermGroup {
    let gens = (0..k).map(|_| random_permutation(rng, degree)).collect();
    PermGroup::new(degree, gens).expect("degrees agree")
}

/// Random `k`-generator subgroup that is transitive; retries until one is
/// found (random pairs in S_n are transitive with high probability).
pub fn random_transitive_subgroup<R: Rng>(rng: &mut R, degree: usize, k: usize) -> PermGroup {
    loop {
        let g = random_subgroup(rng, degree, k);
        if g.is_transitive() {
            return g;
        }
    }
}
