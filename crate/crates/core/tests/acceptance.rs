//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance is pinned here; the suite is the exit gate for the whole
//! toolkit.

use std::collections::BTreeSet;

use num_traits::One;
use rand::SeedableRng;

use plinth_core::actions::{
    antiplinths, classify, is_semiprimitive_two_ways, orbit_block_system,
};
use plinth_core::atlas::{
    atlas_cert_text, atlas_gens_text, atlas_load, construct, parse_group_expr, verify_certificate,
};
use plinth_core::covers::{
    ansn_cover_classify, applicable_cover, count_elements_of_order, numerical_lemma_checks,
};
use plinth_core::genfile::parse_generator_file;
use plinth_core::group::{PermGroup, DEFAULT_CENSUS_CAP};
use plinth_core::metrics::{
    base_size_brute, base_size_exact, block_base_transfer, minimal_degree, minimal_degree_census,
};
use plinth_core::perm::Permutation;
use plinth_core::report::{reproduce_tables, run_corpus, BoundId, BoundStatus, Config, DEFAULT_CORPUS};
use plinth_core::sample::{random_permutation, random_transitive_subgroup};
use plinth_core::structure::normal_lattice;

const CAP: u64 = DEFAULT_CENSUS_CAP;

fn config() -> Config {
    Config::default()
}

/// Criterion 1: reproduce-tables outputs exactly the published
/// (order, degree, base size, minimal degree) rows, zero tolerance.
#[test]
fn criterion_1_table_reproduction() {
    let report = reproduce_tables(&config()).expect("tables computable");
    let mut problems = Vec::new();
    for row in &report.rows {
        if !row.matches {
            problems.push(format!("{}: {}", row.name, row.mismatches.join("; ")));
        }
    }
    if problems.is_empty() {
        println!("criterion 1 (table reproduction): PASS");
    } else {
        println!("criterion 1 (table reproduction): FAIL");
        panic!(
            "published rows not reproduced exactly:\n  {}\n\
             the order, degree, and minimal-degree columns match on all seven rows;\n\
             the base-size column of the paper records non-minimal (BSGS-style) bases\n\
             for the five rows of degree >= 18, while this search returns the true\n\
             minimum (witnesses verified independently).",
            problems.join("\n  ")
        );
    }
}

/// Criterion 2: the seven exceptional groups land on their exact rows of the
/// exceptional table, and the degree-60/360 coset witnesses land on the
/// innately-transitive rows of the infinite-family table.
#[test]
fn criterion_2_classification_totality() {
    let expectations = [
        ("24A7d112", 2u8, 1u8),
        ("AGL42d128", 2, 2),
        ("24A8nsd128", 2, 3),
        ("3A6d18", 2, 4),
        ("3A6x2d18", 2, 5),
        ("GL24d15", 2, 6),
        ("GammaL24d15", 2, 7),
    ];
    for (name, table, row) in expectations {
        let group = atlas_load(name).unwrap();
        let lattice = normal_lattice(&group, CAP).unwrap();
        let ctx = applicable_cover(&group, &lattice, CAP)
            .unwrap()
            .unwrap_or_else(|| panic!("{} must have an applicable antiplinth", name));
        let out = ansn_cover_classify(&ctx, CAP)
            .unwrap_or_else(|e| panic!("{} failed to classify: {}", name, e));
        assert_eq!(
            (out.table_row.table, out.table_row.row),
            (table, row),
            "{} classified to table {} row {}",
            name,
            out.table_row.table,
            out.table_row.row
        );
    }
    // coset witnesses for r = 5 and r = 6, plain and twisted
    let witnesses = [
        (
            "cosets(direct(A(4),A(5)),(1 2 3)(5 6 7),(1 2 4)(5 6 8))",
            1u8, 3u8, 60usize,
        ),
        (
            "cosets(direct(A(5),A(6)),(1 2 3)(6 7 8),(1 2 3 4 5)(6 7 8 9 10))",
            1, 3, 360,
        ),
        (
            "cosets(group(9;(1 2 3),(1 2 4),(5 6 7),(5 6 8),(5 6 9),(1 2)(5 6)),\
             (1 2 3)(5 6 7),(1 2 4)(5 6 8),(1 2)(5 6))",
            1, 4, 60,
        ),
        (
            "cosets(group(11;(1 2 3),(1 2 4),(1 2 5),(6 7 8),(6 7 9),(6 7 10),(6 7 11),(1 2)(6 7)),\
             (1 2 3)(6 7 8),(1 2 4)(6 7 9),(1 2 5)(6 7 10),(1 2)(6 7))",
            1, 4, 360,
        ),
    ];
    for (text, table, row, degree) in witnesses {
        let expr = parse_group_expr(text).unwrap();
        let group = construct(&expr).unwrap();
        assert_eq!(group.degree(), degree);
        let lattice = normal_lattice(&group, CAP).unwrap();
        let label = classify(&group, &lattice).unwrap();
        assert!(label.kind.is_innately_transitive(), "{}", text);
        let ctx = applicable_cover(&group, &lattice, CAP).unwrap().unwrap();
        let out = ansn_cover_classify(&ctx, CAP).unwrap();
        assert_eq!(
            (out.table_row.table, out.table_row.row),
            (table, row),
            "witness {} landed on table {} row {}",
            text,
            out.table_row.table,
            out.table_row.row
        );
        assert!(out.table_row.innately_transitive);
    }
    println!("criterion 2 (classification totality): PASS");
}

/// Criterion 3: over the default corpus, no bound verdict fails, and
/// exemptions occur exactly where the hypotheses fail.
#[test]
fn criterion_3_bound_suite() {
    let report = run_corpus(DEFAULT_CORPUS, &config());
    assert_eq!(report.summary.errors, 0, "corpus entries must all analyze");
    let alternating_containers: BTreeSet<&str> = [
        "S(3)", "S(4)", "S(5)", "S(6)", "S(7)", "S(8)", "A(3)", "A(4)", "A(5)", "A(6)", "A(7)",
        "A(8)",
    ]
    .into_iter()
    .collect();
    let not_semiprimitive: BTreeSet<&str> = ["D(4)", "wreath(S(3),S(5))"].into_iter().collect();
    for entry in &report.entries {
        let r = entry.report.as_ref().expect("no errors");
        for v in &r.bounds {
            assert_ne!(
                v.status,
                BoundStatus::Fail,
                "{}: bound {} failed ({} vs {})",
                r.name,
                v.bound_id.as_str(),
                v.lhs,
                v.rhs
            );
            let name = r.name.as_str();
            match v.status {
                BoundStatus::Exempt => {
                    let reason = v.exemption_reason.as_deref().unwrap_or("");
                    if alternating_containers.contains(name) {
                        assert_eq!(reason, "contains the natural alternating group", "{}", name);
                    } else if not_semiprimitive.contains(name) {
                        assert_eq!(reason, "not semiprimitive", "{}", name);
                    } else {
                        // the seven exceptional groups and GL(2,5): only the
                        // fpr bound may be exempt, by the alternating-socle
                        // clause
                        assert_eq!(v.bound_id, BoundId::Fpr, "{}", name);
                        assert_eq!(reason, "socle alternating", "{}", name);
                    }
                }
                BoundStatus::Pass => {}
                BoundStatus::Informational => {
                    panic!("{}: unexpected informational verdict (threshold is 1)", name)
                }
                BoundStatus::Fail => unreachable!(),
            }
        }
        // semiprimitive groups away from the alternating case must pass the
        // four always-asserted bounds
        if r.taxonomy.is_semiprimitive()
            && !alternating_containers.contains(r.name.as_str())
        {
            for id in [BoundId::Order4n, BoundId::Mindeg, BoundId::Chieflen, BoundId::Basesize, BoundId::OrderBasesize] {
                let v = r.bounds.iter().find(|v| v.bound_id == id).unwrap();
                assert_eq!(v.status, BoundStatus::Pass, "{} {}", r.name, id.as_str());
            }
        }
    }
    assert!(!report.any_fail);
    println!("criterion 3 (bound suite over the default corpus): PASS");
}

/// Criterion 4: oracle equivalences on random subgroups; runs in well under
/// the ten-minute budget.
#[test]
fn criterion_4_oracle_equivalence() {
    // (a) definition vs kernel characterisation on 200 random transitive
    // 2-generator subgroups of S8
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    for k in 0..200 {
        let g = random_transitive_subgroup(&mut rng, 8, 2);
        let lattice = normal_lattice(&g, CAP).unwrap();
        let (by_definition, by_kernel) = is_semiprimitive_two_ways(&g, &lattice).unwrap();
        assert_eq!(by_definition, by_kernel, "disagreement at sample {}", k);
    }
    // (b) base size and minimal degree against brute force on 100 random
    // subgroups of S6
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let a = random_permutation(&mut rng, 6);
        let b = random_permutation(&mut rng, 6);
        let g = PermGroup::new(6, vec![a, b]).unwrap();
        assert_eq!(base_size_exact(&g, None).unwrap().0, base_size_brute(&g));
        let brute_min = brute_minimal_degree(&g);
        assert_eq!(minimal_degree(&g, CAP).unwrap().0, brute_min);
    }
    // (c) Jordan-Hoelder: two independently chosen maximal chains agree on
    // 50 random subgroups of S7
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = random_permutation(&mut rng, 7);
        let b = random_permutation(&mut rng, 7);
        let g = PermGroup::new(7, vec![a, b]).unwrap();
        let lattice = normal_lattice(&g, CAP).unwrap();
        let shortest = lattice.maximal_chain_by(|ups| {
            *ups.iter()
                .min_by_key(|&&j| lattice.order_of(j).clone())
                .unwrap()
        });
        let greediest = lattice.maximal_chain_by(|ups| {
            *ups.iter()
                .max_by_key(|&&j| lattice.order_of(j).clone())
                .unwrap()
        });
        assert_eq!(shortest.len(), greediest.len());
    }
    println!("criterion 4 (oracle equivalence on random subgroups): PASS");
}

/// Chain-free minimal degree: close the generators under products and scan.
fn brute_minimal_degree(g: &PermGroup) -> usize {
    let mut elements: BTreeSet<Permutation> = BTreeSet::new();
    elements.insert(Permutation::identity(g.degree()));
    loop {
        let snapshot: Vec<Permutation> = elements.iter().cloned().collect();
        let mut grew = false;
        for a in &snapshot {
            for gen in g.generators() {
                if elements.insert(a.compose(gen)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    elements
        .iter()
        .filter(|e| !e.is_identity())
        .map(|e| e.moved_points())
        .min()
        .unwrap_or(0)
}

/// Criterion 5: both quotient lemmas hold with exact integers for every
/// (group, antiplinth) pair of the default corpus, with the transferred base
/// checked as an actual base.
#[test]
fn criterion_5_quotient_lemmas() {
    let corpus: Vec<(&str, PermGroup)> = default_corpus_groups();
    let mut pairs = 0;
    for (name, group) in &corpus {
        let lattice = normal_lattice(group, CAP).unwrap();
        let label = classify(group, &lattice).unwrap();
        if !label.kind.is_semiprimitive() {
            continue;
        }
        for idx in antiplinths(group, &lattice).unwrap() {
            let m = lattice.member(idx);
            pairs += 1;
            if m.is_trivial() {
                // the quotient is the group itself; the transfer is vacuous
                let (b, witness) = base_size_exact(group, None).unwrap();
                assert_eq!(witness.len(), b);
                continue;
            }
            let system = orbit_block_system(group, m).unwrap();
            // b(G) <= b(G^Delta), via an actual transferred base
            let (b_image, image_base) = base_size_exact(system.image(), None).unwrap();
            let transferred = block_base_transfer(group, &system, &image_base)
                .unwrap_or_else(|e| panic!("{}: transfer failed: {}", name, e));
            assert_eq!(transferred.len(), b_image);
            assert!(
                group
                    .pointwise_stabilizer(&transferred)
                    .unwrap()
                    .order()
                    .is_one(),
                "{}: transferred base is not a base",
                name
            );
            let (b_g, _) = base_size_exact(group, None).unwrap();
            assert!(
                b_g <= b_image,
                "{}: b(G) = {} > b(G^Delta) = {}",
                name,
                b_g,
                b_image
            );
            // m(G) >= s * m(G^Delta)
            let (m_g, _) = minimal_degree(group, CAP).unwrap();
            let (m_image, _) = minimal_degree(system.image(), CAP).unwrap();
            let s = system.block_size();
            assert!(
                m_g >= s * m_image,
                "{}: m(G) = {} < {} * {}",
                name,
                m_g,
                s,
                m_image
            );
        }
    }
    assert!(pairs >= 20, "expected at least 20 corpus pairs, saw {}", pairs);
    println!(
        "criterion 5 (quotient lemmas on {} corpus pairs): PASS",
        pairs
    );
}

fn default_corpus_groups() -> Vec<(&'static str, PermGroup)> {
    let mut out = Vec::new();
    for line in DEFAULT_CORPUS.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let expr = parse_group_expr(line).unwrap();
        out.push((line, construct(&expr).unwrap()));
    }
    out
}

/// Criterion 6: the two arithmetic lemmas, exhaustively and exactly.
#[test]
fn criterion_6_numerical_lemmas() {
    let report = numerical_lemma_checks();
    assert!(report.factorial_holds, "m r! < 4^(m r) violated somewhere");
    assert_eq!(report.factorial_pairs, 1540);
    assert_eq!(
        report.sqrt_exceptions,
        vec![(2, 2), (3, 2), (4, 2), (5, 2)],
        "exception set must be exactly b = 2, a <= 5"
    );
    println!("criterion 6 (numerical lemmas): PASS");
}

/// Criterion 7: atlas integrity. Certificates pass on load and catch a
/// single swapped image; the involution-count fingerprints of the two
/// degree-128 extensions must differ.
#[test]
fn criterion_7_atlas_integrity() {
    for name in plinth_core::atlas::atlas_names() {
        atlas_load(name).unwrap_or_else(|e| panic!("{} failed its certificate: {}", name, e));
    }
    // single-swap mutation must fail its certificate
    let text = atlas_gens_text("24A7d112").unwrap();
    let pristine = parse_generator_file(text).unwrap();
    let mut gens = pristine.generators().to_vec();
    let mut images = gens[0].images().to_vec();
    let j = images.iter().position(|&x| x != images[0]).unwrap();
    images.swap(0, j);
    gens[0] = Permutation::from_images(images).unwrap();
    let mutated = PermGroup::new(pristine.degree(), gens).unwrap();
    assert!(
        verify_certificate(&mutated, atlas_cert_text("24A7d112").unwrap(), "mutated").is_err(),
        "certificate must reject a single swapped image"
    );
    // involution fingerprints
    let split = atlas_load("AGL42d128").unwrap();
    let nonsplit = atlas_load("24A8nsd128").unwrap();
    let invol_split = count_elements_of_order(&split, 2, CAP).unwrap();
    let invol_nonsplit = count_elements_of_order(&nonsplit, 2, CAP).unwrap();
    let order4_split = count_elements_of_order(&split, 4, CAP).unwrap();
    let order4_nonsplit = count_elements_of_order(&nonsplit, 4, CAP).unwrap();
    if invol_split != invol_nonsplit {
        println!("criterion 7 (atlas integrity): PASS");
    } else {
        println!("criterion 7 (atlas integrity): FAIL");
        panic!(
            "the involution counts do not differ: both extensions have exactly {} \
             involutions (full censuses of both order-322560 groups). The split and \
             nonsplit extensions are distinguished by their order-4 counts instead: \
             {} (split) vs {} (nonsplit); the certificates pin both numbers.",
            invol_split, order4_split, order4_nonsplit
        );
    }
}

/// Criterion 8: the minimal degree of the triple cover on 18 points is
/// measured by full census, asserted at least 12, and frozen at the measured
/// value 12.
#[test]
fn criterion_8_triple_cover_minimal_degree() {
    let g = atlas_load("3A6d18").unwrap();
    let (m, witness) = minimal_degree_census(&g, CAP).unwrap();
    println!(
        "measured minimal degree of the triple cover on 18 points: {} (witness {})",
        m,
        witness.as_ref().unwrap()
    );
    assert!(
        m >= 12,
        "the block bound forces m >= 12 (fixity at most 6), measured {}",
        m
    );
    assert_eq!(m, 12, "regression constant: the census value is 12");
    // the extension on the same 18 points measures the same value
    let g2 = atlas_load("3A6x2d18").unwrap();
    assert_eq!(minimal_degree_census(&g2, CAP).unwrap().0, 12);
    println!("criterion 8 (measured minimal degree of the triple cover): PASS");
}
