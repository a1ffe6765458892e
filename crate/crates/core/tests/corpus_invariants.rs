//! Structural invariants checked across the default corpus: the kernel
//! characterisation and quasiprimitive-quotient property for every
//! intransitive normal subgroup of a semiprimitive member, agreement of the
//! census and class routes to the minimal degree, and the implication chain
//! of the taxonomy labels.

use plinth_core::actions::{classify, is_semiregular, orbit_block_system, TaxonomyKind};
use plinth_core::atlas::{construct, parse_group_expr};
use plinth_core::group::{PermGroup, DEFAULT_CENSUS_CAP as CAP};
use plinth_core::metrics::{fpr, minimal_degree, minimal_degree_census, minimal_degree_classes};
use plinth_core::report::DEFAULT_CORPUS;
use plinth_core::structure::normal_lattice;

fn corpus_groups() -> Vec<(String, PermGroup)> {
    DEFAULT_CORPUS
        .lines()
        .filter_map(|line| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            let expr = parse_group_expr(line).unwrap();
            Some((line.to_string(), construct(&expr).unwrap()))
        })
        .collect()
}

#[test]
fn kernel_characterisation_and_quasiprimitive_quotients() {
    for (name, group) in corpus_groups() {
        let lattice = normal_lattice(&group, CAP).unwrap();
        let label = classify(&group, &lattice).unwrap();
        if !label.kind.is_semiprimitive() {
            continue;
        }
        let antiplinth_indices = plinth_core::actions::antiplinths(&group, &lattice).unwrap();
        // the kernel characterisation holds for every intransitive normal
        // subgroup of a semiprimitive group
        for (idx, member) in lattice.members().iter().enumerate() {
            if member.is_transitive() || member.is_trivial() {
                continue;
            }
            let system = orbit_block_system(&group, member).unwrap();
            assert!(
                system.kernel().eq_subgroup(member),
                "{}: kernel of the orbit action differs from the subgroup",
                name
            );
            // the quotient is quasiprimitive exactly when the subgroup is an
            // antiplinth (a non-maximal one leaves an intransitive normal in
            // the quotient)
            if antiplinth_indices.contains(&idx) {
                let image_lattice = normal_lattice(system.image(), CAP).unwrap();
                let image_label = classify(system.image(), &image_lattice).unwrap();
                assert!(
                    image_label.kind.is_quasiprimitive(),
                    "{}: antiplinth quotient is {}, not quasiprimitive",
                    name,
                    image_label.kind.as_str()
                );
            }
        }
    }
}

#[test]
fn census_and_class_minimal_degree_agree_across_the_corpus() {
    for (name, group) in corpus_groups() {
        if group.order_u64().is_none_or(|o| o > 100_000) {
            continue;
        }
        let census = minimal_degree_census(&group, CAP).unwrap().0;
        let classes = minimal_degree_classes(&group, CAP).unwrap().0;
        assert_eq!(census, classes, "{}", name);
    }
}

#[test]
fn taxonomy_respects_the_implication_chain() {
    for (name, group) in corpus_groups() {
        let lattice = normal_lattice(&group, CAP).unwrap();
        let label = classify(&group, &lattice).unwrap();
        match label.kind {
            TaxonomyKind::Primitive => {
                // a primitive verdict forces every weaker property
                assert!(label.kind.is_quasiprimitive());
                assert!(label.kind.is_innately_transitive());
                assert!(label.kind.is_semiprimitive());
            }
            TaxonomyKind::InnatelyTransitiveNotQp => {
                let witness = label.witness.expect(&name);
                assert!(witness.is_transitive());
            }
            TaxonomyKind::SemiprimitiveNotIt => {
                let witness = label.witness.expect(&name);
                assert!(!witness.is_transitive());
                assert!(is_semiregular(&witness));
            }
            TaxonomyKind::TransitiveNotSemiprimitive => {
                let witness = label.witness.expect(&name);
                assert!(!witness.is_transitive());
                assert!(!is_semiregular(&witness));
            }
            _ => {}
        }
    }
}

#[test]
fn minimal_degree_and_fpr_are_consistent() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    for (name, group) in corpus_groups() {
        let n = group.degree();
        let (m, witness) = minimal_degree(&group, CAP).unwrap();
        let ratio = fpr(&group, CAP).unwrap();
        let expect =
            BigRational::new(BigInt::from(n - m), BigInt::from(n));
        assert_eq!(ratio, expect, "{}", name);
        if let Some(w) = witness {
            assert_eq!(w.fixed_points() + m, n, "{}", name);
        }
    }
}
