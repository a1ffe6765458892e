//! Group constructors (symmetric/alternating/cyclic/dihedral families,
//! direct and wreath products, affine/linear/semilinear groups over tiny
//! fields, coset actions) plus the certified data entries for the seven
//! exceptional groups, and the group-expression DSL.
//!
//! Data entries ship as a generator file plus a certificate; loading runs
//! every certificate line and fails hard on the first mismatch, so the data
//! files are never trusted on their own.

pub mod expr;
pub mod gf;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::actions::{
    antiplinths, classify, is_semiregular, orbit_block_system, coset_action, DEFAULT_INDEX_CAP,
};
use crate::error::{Error, Result};
use crate::genfile::parse_generator_file;
use crate::group::{PermGroup, DEFAULT_CENSUS_CAP, MAX_DEGREE};
use crate::perm::Permutation;
use crate::structure::{center, derived_subgroup, normal_lattice, NormalLattice};
use gf::Field;

pub use expr::{parse_group_expr, print_group_expr, GroupExpr};

// ---------------------------------------------------------------- matrices

type Mat = Vec<Vec<u32>>;

fn mat_identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| u32::from(i == j)).collect())
        .collect()
}

fn value_to_vec(field: &Field, d: usize, mut value: u32) -> Vec<u32> {
    let mut v = vec![0; d];
    for slot in v.iter_mut() {
        *slot = value % field.q;
        value /= field.q;
    }
    v
}

fn vec_to_value(field: &Field, v: &[u32]) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * field.q + c)
}

fn vec_times_mat(field: &Field, v: &[u32], m: &Mat) -> Vec<u32> {
    let d = v.len();
    let mut out = vec![0; d];
    for i in 0..d {
        if v[i] != 0 {
            for j in 0..d {
                out[j] = field.add(out[j], field.mul(v[i], m[i][j]));
            }
        }
    }
    out
}

/// Permutation of the nonzero vectors (point = value - 1).
fn mat_to_perm_nonzero(field: &Field, d: usize, m: &Mat) -> Result<Permutation> {
    let points = field.q.pow(d as u32) - 1;
    let mut images = Vec::with_capacity(points as usize);
    for value in 1..=points {
        let image = vec_to_value(field, &vec_times_mat(field, &value_to_vec(field, d, value), m));
        debug_assert!(image != 0, "invertible matrices fix only the zero vector");
        images.push(image - 1);
    }
    Permutation::from_images(images)
}

/// Permutation of all q^d affine points (point = value).
fn mat_to_perm_affine(field: &Field, d: usize, m: &Mat) -> Result<Permutation> {
    let points = field.q.pow(d as u32);
    let mut images = Vec::with_capacity(points as usize);
    for value in 0..points {
        images.push(vec_to_value(
            field,
            &vec_times_mat(field, &value_to_vec(field, d, value), m),
        ));
    }
    Permutation::from_images(images)
}

/// Transvections over the prime-field basis plus one primitive diagonal
/// generate GL(d, q).
fn gl_generator_mats(field: &Field, d: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            for lambda in field.prime_basis() {
                let mut m = mat_identity(d);
                m[i][j] = lambda;
                out.push(m);
            }
        }
    }
    if field.q > 2 {
        let mut m = mat_identity(d);
        m[0][0] = field.generator();
        out.push(m);
    }
    out
}

fn check_constructed_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(degree));
    }
    Ok(())
}

/// GL(d, q) on the q^d - 1 nonzero vectors.
pub fn gl_group(d: u32, q: u32) -> Result<PermGroup> {
    let field = Field::new(q)?;
    let degree = (q.pow(d) - 1) as usize;
    check_constructed_degree(degree)?;
    let gens = gl_generator_mats(&field, d as usize)
        .iter()
        .map(|m| mat_to_perm_nonzero(&field, d as usize, m))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(degree, gens)
}

/// AGL(d, q) on the q^d affine points: the linear generators plus one
/// translation (whose closure under GL is the full translation group).
pub fn agl_group(d: u32, q: u32) -> Result<PermGroup> {
    let field = Field::new(q)?;
    let degree = q.pow(d) as usize;
    check_constructed_degree(degree)?;
    let mut gens = gl_generator_mats(&field, d as usize)
        .iter()
        .map(|m| mat_to_perm_affine(&field, d as usize, m))
        .collect::<Result<Vec<_>>>()?;
    let mut translation = Vec::with_capacity(degree);
    for value in 0..degree as u32 {
        let mut v = value_to_vec(&field, d as usize, value);
        v[0] = field.add(v[0], 1);
        translation.push(vec_to_value(&field, &v));
    }
    gens.push(Permutation::from_images(translation)?);
    PermGroup::new(degree, gens)
}

/// GammaL(d, q): GL(d, q) with the coordinatewise Frobenius adjoined.
pub fn gammal_group(d: u32, q: u32) -> Result<PermGroup> {
    let field = Field::new(q)?;
    let glg = gl_group(d, q)?;
    let degree = glg.degree();
    let mut gens = glg.generators().to_vec();
    if field.f > 1 {
        let mut frob = Vec::with_capacity(degree);
        for value in 1..=degree as u32 {
            let v: Vec<u32> = value_to_vec(&field, d as usize, value)
                .into_iter()
                .map(|c| field.frobenius(c))
                .collect();
            frob.push(vec_to_value(&field, &v) - 1);
        }
        gens.push(Permutation::from_images(frob)?);
    }
    PermGroup::new(degree, gens)
}

/// Dihedral group of order 2n on n points.
pub fn dihedral_group(n: u32) -> Result<PermGroup> {
    let n = n as usize;
    check_constructed_degree(n)?;
    let rotation = Permutation::from_cycles(n, &[(0..n).collect()])?;
    let reflection =
        Permutation::from_images((0..n).map(|i| ((n - i) % n) as u32).collect())?;
    PermGroup::new(n, vec![rotation, reflection])
}

/// Direct product acting on the disjoint union of the two point sets.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let (da, db) = (a.degree(), b.degree());
    check_constructed_degree(da + db)?;
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<u32> = (0..(da + db) as u32).collect();
        images[..da].copy_from_slice(g.images());
        gens.push(Permutation::from_images(images)?);
    }
    for g in b.generators() {
        let mut images: Vec<u32> = (0..(da + db) as u32).collect();
        for (i, &img) in g.images().iter().enumerate() {
            images[da + i] = da as u32 + img;
        }
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(da + db, gens)
}

/// Wreath product A wr B in its imprimitive action on deg(A) * deg(B)
/// points: a copy of A on each block, B permuting the blocks.
pub fn wreath_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let (da, db) = (a.degree(), b.degree());
    let degree = da * db;
    check_constructed_degree(degree)?;
    let mut gens = Vec::new();
    for block in 0..db {
        for g in a.generators() {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (i, &img) in g.images().iter().enumerate() {
                images[block * da + i] = (block * da) as u32 + img;
            }
            gens.push(Permutation::from_images(images)?);
        }
    }
    for g in b.generators() {
        let mut images = vec![0u32; degree];
        for block in 0..db {
            let target = g.apply(block);
            for i in 0..da {
                images[block * da + i] = (target * da + i) as u32;
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(degree, gens)
}

/// Evaluates a group expression to a permutation group.
pub fn construct(expr: &GroupExpr) -> Result<PermGroup> {
    if let Some(degree) = expr.static_degree() {
        check_constructed_degree(degree)?;
    }
    match expr {
        GroupExpr::Symmetric(n) => {
            check_constructed_degree(*n as usize)?;
            Ok(PermGroup::symmetric(*n as usize))
        }
        GroupExpr::Alternating(n) => {
            check_constructed_degree(*n as usize)?;
            Ok(PermGroup::alternating(*n as usize))
        }
        GroupExpr::Cyclic(n) => {
            check_constructed_degree(*n as usize)?;
            Ok(PermGroup::cyclic(*n as usize))
        }
        GroupExpr::Dihedral(n) => dihedral_group(*n),
        GroupExpr::Agl { d, q } => agl_group(*d, *q),
        GroupExpr::Gl { d, q } => gl_group(*d, *q),
        GroupExpr::GammaL { d, q } => gammal_group(*d, *q),
        GroupExpr::Direct(a, b) => direct_product(&construct(a)?, &construct(b)?),
        GroupExpr::Wreath(a, b) => wreath_product(&construct(a)?, &construct(b)?),
        GroupExpr::Cosets { base, subgroup } => {
            let g = construct(base)?;
            let sub = PermGroup::new(g.degree(), subgroup.clone())?;
            if !sub.is_subgroup_of(&g) {
                return Err(Error::NotASubgroup);
            }
            let act = coset_action(&g, &sub, DEFAULT_INDEX_CAP)?;
            check_constructed_degree(act.action.degree())?;
            Ok(act.action)
        }
        GroupExpr::Atlas(name) => Ok(atlas_load(name)?.as_ref().clone()),
        GroupExpr::Raw { degree, gens } => PermGroup::new(*degree as usize, gens.clone()),
    }
}

/// The two ingredients of the degree-15 coset construction: G = C3 x A5 on
/// 3 + 5 points and the graph subgroup H = {(phi(g), g) : g in A4} of order
/// 12, where phi: A4 -> C3 kills the Klein four-group. The coset action of G
/// on H then gives the degree-15 semiprimitive group.
pub fn example43_graph_subgroup() -> (PermGroup, PermGroup) {
    let c3 = PermGroup::cyclic(3);
    let a5 = PermGroup::alternating(5);
    let g = direct_product(&c3, &a5).expect("degree 8");
    let h_gens = vec![
        crate::perm::parse_cycles("(1 2 3)(4 5 6)", 8, 0).unwrap(),
        crate::perm::parse_cycles("(4 5)(6 7)", 8, 0).unwrap(),
    ];
    let h = PermGroup::new(8, h_gens).unwrap();
    (g, h)
}

// -------------------------------------------------------------- atlas data

enum AtlasSource {
    Gens(&'static str),
    Expr(fn() -> GroupExpr),
}

struct AtlasEntry {
    name: &'static str,
    degree: usize,
    source: AtlasSource,
    cert: &'static str,
}

static ATLAS: [AtlasEntry; 7] = [
    AtlasEntry {
        name: "3A6d18",
        degree: 18,
        source: AtlasSource::Gens(include_str!("data/3A6d18.gens")),
        cert: include_str!("data/3A6d18.cert"),
    },
    AtlasEntry {
        name: "3A6x2d18",
        degree: 18,
        source: AtlasSource::Gens(include_str!("data/3A6x2d18.gens")),
        cert: include_str!("data/3A6x2d18.cert"),
    },
    AtlasEntry {
        name: "24A7d112",
        degree: 112,
        source: AtlasSource::Gens(include_str!("data/24A7d112.gens")),
        cert: include_str!("data/24A7d112.cert"),
    },
    AtlasEntry {
        name: "AGL42d128",
        degree: 128,
        source: AtlasSource::Gens(include_str!("data/AGL42d128.gens")),
        cert: include_str!("data/AGL42d128.cert"),
    },
    AtlasEntry {
        name: "24A8nsd128",
        degree: 128,
        source: AtlasSource::Gens(include_str!("data/24A8nsd128.gens")),
        cert: include_str!("data/24A8nsd128.cert"),
    },
    AtlasEntry {
        name: "GL24d15",
        degree: 15,
        source: AtlasSource::Expr(|| GroupExpr::Gl { d: 2, q: 4 }),
        cert: include_str!("data/GL24d15.cert"),
    },
    AtlasEntry {
        name: "GammaL24d15",
        degree: 15,
        source: AtlasSource::Expr(|| GroupExpr::GammaL { d: 2, q: 4 }),
        cert: include_str!("data/GammaL24d15.cert"),
    },
];

pub fn atlas_names() -> Vec<&'static str> {
    ATLAS.iter().map(|e| e.name).collect()
}

pub fn atlas_degree(name: &str) -> Option<usize> {
    ATLAS.iter().find(|e| e.name == name).map(|e| e.degree)
}

/// Raw generator text of a data-backed entry (for the mutation test).
pub fn atlas_gens_text(name: &str) -> Option<&'static str> {
    ATLAS.iter().find(|e| e.name == name).and_then(|e| match e.source {
        AtlasSource::Gens(text) => Some(text),
        AtlasSource::Expr(_) => None,
    })
}

pub fn atlas_cert_text(name: &str) -> Option<&'static str> {
    ATLAS.iter().find(|e| e.name == name).map(|e| e.cert)
}

fn atlas_cache() -> &'static Mutex<HashMap<String, Arc<PermGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<PermGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Loads an atlas entry and runs its full certificate; any failing line
/// aborts the load. Validated groups are cached per process.
pub fn atlas_load(name: &str) -> Result<Arc<PermGroup>> {
    if let Some(cached) = atlas_cache().lock().unwrap().get(name) {
        return Ok(cached.clone());
    }
    let entry = ATLAS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownAtlasEntry(name.to_string()))?;
    let group = match &entry.source {
        AtlasSource::Gens(text) => parse_generator_file(text)?,
        AtlasSource::Expr(make) => construct(&make())?,
    };
    verify_certificate(&group, entry.cert, name)?;
    let arc = Arc::new(group);
    atlas_cache()
        .lock()
        .unwrap()
        .insert(name.to_string(), arc.clone());
    Ok(arc)
}

/// Runs every line of a certificate against a candidate group. Public so the
/// corruption test can feed it mutated data.
pub fn verify_certificate(group: &PermGroup, cert: &str, name: &str) -> Result<()> {
    let cap = DEFAULT_CENSUS_CAP;
    let fail = |check: &str| Error::CertificateFailed {
        name: name.to_string(),
        check: check.to_string(),
    };
    // lattice-derived data computed at most once
    let mut lattice_slot: Option<NormalLattice> = None;
    let lattice = |group: &PermGroup,
                       slot: &mut Option<NormalLattice>|
     -> Result<()> {
        if slot.is_none() {
            *slot = Some(normal_lattice(group, cap)?);
        }
        Ok(())
    };
    let antiplinth_of = |group: &PermGroup, lat: &NormalLattice| -> Result<PermGroup> {
        let aps = antiplinths(group, lat)?;
        if aps.len() != 1 {
            return Err(Error::CertificateFailed {
                name: name.to_string(),
                check: format!("expected a unique antiplinth, found {}", aps.len()),
            });
        }
        Ok(lat.member(aps[0]).clone())
    };
    let mut spectrum: Option<HashMap<u64, u64>> = None;
    let order_count = |group: &PermGroup,
                           slot: &mut Option<HashMap<u64, u64>>,
                           k: u64|
     -> Result<u64> {
        if slot.is_none() {
            let mut counts = HashMap::new();
            for e in group.elements(cap)? {
                *counts.entry(e.order()).or_insert(0u64) += 1;
            }
            *slot = Some(counts);
        }
        Ok(*slot.as_ref().unwrap().get(&k).unwrap_or(&0))
    };

    for raw_line in cert.lines() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        let arg = |i: usize| -> Result<&str> {
            args.get(i).copied().ok_or_else(|| fail(line))
        };
        match key {
            "degree" => {
                let want: usize = arg(0)?.parse().map_err(|_| fail(line))?;
                if group.degree() != want {
                    return Err(fail(line));
                }
            }
            "order" => {
                let want: BigUint = arg(0)?.parse().map_err(|_| fail(line))?;
                if group.order() != want {
                    return Err(fail(line));
                }
            }
            "transitive" => {
                let want = arg(0)? == "true";
                if group.is_transitive() != want {
                    return Err(fail(line));
                }
            }
            "perfect" => {
                let derived = derived_subgroup(group);
                if (derived.order() == group.order()) != (arg(0)? == "true") {
                    return Err(fail(line));
                }
            }
            "center_order" => {
                let want: BigUint = arg(0)?.parse().map_err(|_| fail(line))?;
                if center(group, cap)?.order() != want {
                    return Err(fail(line));
                }
            }
            "center_semiregular" => {
                let z = center(group, cap)?;
                if is_semiregular(&z) != (arg(0)? == "true") {
                    return Err(fail(line));
                }
            }
            "semiprimitive" => {
                lattice(group, &mut lattice_slot)?;
                let label = classify(group, lattice_slot.as_ref().unwrap())?;
                if label.kind.is_semiprimitive() != (arg(0)? == "true") {
                    return Err(fail(line));
                }
            }
            "antiplinth_count" => {
                lattice(group, &mut lattice_slot)?;
                let aps = antiplinths(group, lattice_slot.as_ref().unwrap())?;
                let want: usize = arg(0)?.parse().map_err(|_| fail(line))?;
                if aps.len() != want {
                    return Err(fail(line));
                }
            }
            "antiplinth_order" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                let want: BigUint = arg(0)?.parse().map_err(|_| fail(line))?;
                if ap.order() != want {
                    return Err(fail(line));
                }
            }
            "antiplinth_orbit_count" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                let want: usize = arg(0)?.parse().map_err(|_| fail(line))?;
                if ap.orbits().len() != want {
                    return Err(fail(line));
                }
            }
            "antiplinth_semiregular" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                if is_semiregular(&ap) != (arg(0)? == "true") {
                    return Err(fail(line));
                }
            }
            "antiplinth_elementary_abelian" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                let p: u64 = arg(0)?.parse().map_err(|_| fail(line))?;
                let abelian = ap.generators().iter().enumerate().all(|(i, a)| {
                    ap.generators()[i + 1..]
                        .iter()
                        .all(|b| a.compose(b) == b.compose(a))
                });
                let exponent_p = ap.generators().iter().all(|g| g.order() == p);
                if !(abelian && exponent_p) {
                    return Err(fail(line));
                }
            }
            "delta_image_order" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                let system = orbit_block_system(group, &ap)?;
                let want: BigUint = arg(0)?.parse().map_err(|_| fail(line))?;
                if system.image().order() != want {
                    return Err(fail(line));
                }
            }
            "delta_image_has_element_of_order" => {
                lattice(group, &mut lattice_slot)?;
                let ap = antiplinth_of(group, lattice_slot.as_ref().unwrap())?;
                let system = orbit_block_system(group, &ap)?;
                let want: u64 = arg(0)?.parse().map_err(|_| fail(line))?;
                if !system.image().elements(cap)?.any(|e| e.order() == want) {
                    return Err(fail(line));
                }
            }
            "involutions" => {
                let want: u64 = arg(0)?.parse().map_err(|_| fail(line))?;
                if order_count(group, &mut spectrum, 2)? != want {
                    return Err(fail(line));
                }
            }
            "order4_count" => {
                let want: u64 = arg(0)?.parse().map_err(|_| fail(line))?;
                if order_count(group, &mut spectrum, 4)? != want {
                    return Err(fail(line));
                }
            }
            "contains_atlas" => {
                let other = atlas_load(arg(0)?)?;
                let index: u64 = arg(1)?.parse().map_err(|_| fail(line))?;
                if !other.is_subgroup_of(group) {
                    return Err(fail(line));
                }
                if other.order() * BigUint::from(index) != group.order() {
                    return Err(fail(line));
                }
            }
            _ => {
                return Err(Error::CertificateFailed {
                    name: name.to_string(),
                    check: format!("unknown certificate key `{}`", key),
                });
            }
        }
    }
    if group.order() == BigUint::one() {
        return Err(fail("atlas entries are nontrivial"));
    }
    Ok(())
}
