//! Named exceptional examples with their expected orbit profiles.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::{
    c4_pair_group, deleted_permutation_module, gamma_l1, singer_tensor_group, sl2_5_gl4_3, torus, GammaL1Spec,
};
use crate::error::{Error, Result};
use crate::extraspecial::{Extraspecial, ExtraspecialSpec, TopElement};
use crate::field::FieldSpec;
use crate::formats::{parse, BigCount, FieldFile, OrbitWitness, PermFile};
use crate::group::{enumerate_closure, Limits, MatGroup, PexcStatus, PexcVerdict, Split};
use crate::matrix::{frobenius_matrix, regular_representation, Matrix};
use crate::perm::PermGroup;

/// Stored permutation groups as (name, JSON text).
pub const STORED_PERM_FILES: &[(&str, &str)] = &[
    ("AGL3_2", include_str!("../data/perm/AGL3_2.json")),
    ("AGammaL1_8", include_str!("../data/perm/AGammaL1_8.json")),
    ("D10", include_str!("../data/perm/D10.json")),
    ("L2_11", include_str!("../data/perm/L2_11.json")),
    ("M11", include_str!("../data/perm/M11.json")),
    ("M11_12", include_str!("../data/perm/M11_12.json")),
    ("M23", include_str!("../data/perm/M23.json")),
    ("M24", include_str!("../data/perm/M24.json")),
];

const ENTRIES: &[&str] = &[
    include_str!("../data/catalog/C4pair_GL4_2.json"),
    include_str!("../data/catalog/C4pair_GL4_4.json"),
    include_str!("../data/catalog/C4pair_GL4_8.json"),
    include_str!("../data/catalog/GammaL1_2_4_2_1.json"),
    include_str!("../data/catalog/GammaL1_3_3_1_2.json"),
    include_str!("../data/catalog/L2_11_GL5_3.json"),
    include_str!("../data/catalog/L2_11_GL5_3_quotient.json"),
    include_str!("../data/catalog/M11_GL5_3.json"),
    include_str!("../data/catalog/M11_GL5_3_dual.json"),
    include_str!("../data/catalog/M23_GL11_2.json"),
    include_str!("../data/catalog/M23_GL11_2_sibling.json"),
    include_str!("../data/catalog/SL2_5_GL4_3.json"),
    include_str!("../data/catalog/SL2_5_GF9_scalars_GL4_3.json"),
    include_str!("../data/catalog/T72S3_GL9_2.json"),
    include_str!("../data/catalog/T73sq2_GL9_2.json"),
    include_str!("../data/catalog/TorusFrob_GL2_4.json"),
    include_str!("../data/catalog/Torus_GL2_4.json"),
    include_str!("../data/catalog/X214minus_A4_GL4_3.json"),
    include_str!("../data/catalog/X214minus_S4_GL4_3.json"),
    include_str!("../data/catalog/X216minus_2A5_GL8_3.json"),
    include_str!("../data/catalog/X216minus_2S5_GL8_3.json"),
    include_str!("../data/catalog/X216plus_2e3L32_GL8_3.json"),
    include_str!("../data/catalog/X216plus_2e3_7_3_GL8_3.json"),
    include_str!("../data/catalog/X216plus_L32_GL8_3.json"),
    include_str!("../data/catalog/X312_2_GL3_4.json"),
    include_str!("../data/catalog/X312_6_GL3_4.json"),
    include_str!("../data/catalog/X312_D12_GL3_4.json"),
    include_str!("../data/catalog/X312_S3a_GL3_4.json"),
    include_str!("../data/catalog/X312_S3b_GL3_4.json"),
    include_str!("../data/catalog/deleted_A7_F2.json"),
    include_str!("../data/catalog/deleted_S7_F2.json"),
];

/// Names of the stored permutation groups.
pub fn stored_perm_names() -> Vec<&'static str> {
    STORED_PERM_FILES.iter().map(|(n, _)| *n).collect()
}

/// A stored permutation group; its recorded order is checked on load.
pub fn stored_perm_group(name: &str) -> Result<PermGroup> {
    let (_, text) = STORED_PERM_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    PermFile::parse(text)?.to_group()
}

/// `A<n>`, `S<n>` or a stored group name.
pub fn named_perm_group(name: &str) -> Result<PermGroup> {
    let family = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = family("A") {
        return Ok(PermGroup::alternating(n).with_label(name));
    }
    if let Some(n) = family("S") {
        return Ok(PermGroup::symmetric(n).with_label(name));
    }
    stored_perm_group(name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constituent {
    Sub,
    Quotient,
}

/// Outer part adjoined to an extraspecial group, described by its action on `R/Z(R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraspecialTop {
    /// `<-1>`.
    MinusIdentity,
    /// `<-1, u>`, cyclic of order 6, with `u = [[1,1],[0,1]]`.
    MinusIdentityUnipotent,
    /// `<u, diag(1,-1)>` with the reflection realized by the field automorphism.
    S3Frobenius,
    /// `<u, diag(-1,1)>` with the reflection realized by the field automorphism.
    S3Twisted,
    /// `<u, diag(1,-1), -1>`.
    D12,
    /// `diag(A, A^-T)` for `A` in `GL_m(2)`.
    GlBlocks,
    /// The other class of complements to `2^3` in `2^3.L3(2)`: the transvection is
    /// composed with a shear `x -> x, z -> z + xB`.
    GlBlocksTwisted,
    /// `2^3.L3(2)`: the blocks together with all alternating shears.
    AffineGlBlocks,
    /// `2^3.7.3`: alternating shears with a Singer cycle and the field automorphism.
    AffineGammaLBlocks,
    /// Stabilizer of a singular vector in the isometry group of the quadratic form.
    SingularStabilizer,
    /// Its subgroup of elements with even Dickson invariant.
    SingularStabilizerDickson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    DeletedModule {
        perm: String,
        p: u32,
    },
    DeletedConstituent {
        perm: String,
        p: u32,
        constituent: Constituent,
        #[serde(default)]
        scalars: bool,
    },
    #[serde(rename = "sl2_5")]
    Sl25 {
        extension_scalars: bool,
    },
    Extraspecial {
        spec: ExtraspecialSpec,
        top: ExtraspecialTop,
    },
    SingerTensor {
        full_normalizers: bool,
    },
    C4Pair {
        q: u32,
    },
    Torus {
        q: u32,
        frobenius: bool,
    },
    GammaL1 {
        spec: GammaL1Spec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Orbit sizes stated in the literature.
    Published,
    /// Orbit sizes obtained by independent computation.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub recipe: Recipe,
    pub field: FieldFile,
    pub dim: usize,
    pub p: u32,
    pub expected_orbit_sizes: BTreeMap<u64, u64>,
    #[serde(default)]
    pub expected_order: Option<BigCount>,
    pub expected_status: PexcStatus,
    pub source: Source,
    pub citation: String,
    /// Name of a catalog entry containing this group as a normal subgroup.
    #[serde(default)]
    pub normal_in: Option<String>,
    #[serde(default)]
    pub notes: Option<String>,
}

/// All catalog entries in name order.
pub fn catalog_entries() -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = ENTRIES.iter().map(|t| parse(t)).collect::<Result<_>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

pub fn catalog_names() -> Vec<String> {
    catalog_entries().map(|es| es.into_iter().map(|e| e.name).collect()).unwrap_or_default()
}

pub fn catalog(name: &str) -> Result<CatalogEntry> {
    catalog_entries()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

fn gf3_matrix(rows: &[[u16; 2]]) -> Matrix {
    let f = FieldSpec::prime(3).expect("3 is prime");
    Matrix::from_rows(&f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("2x2")
}

fn extraspecial_tops(es: &Extraspecial, top: ExtraspecialTop) -> Result<Vec<TopElement>> {
    use ExtraspecialTop::*;
    let n = 2 * es.spec().m as usize;
    let linear = |a: Matrix| TopElement { frob: 0, action: a };
    let semilinear = |a: Matrix| TopElement { frob: 1, action: a };
    let minus = Matrix::scalar(es.quotient_field(), n, es.quotient_field().neg(1));
    let needs_plane = || {
        if es.spec().r != 3 || n != 2 {
            return Err(Error::InvalidSpec(format!("{top:?} needs r = 3 and m = 1")));
        }
        Ok(gf3_matrix(&[[1, 1], [0, 1]]))
    };
    Ok(match top {
        MinusIdentity => vec![linear(minus)],
        MinusIdentityUnipotent => vec![linear(minus), linear(needs_plane()?)],
        S3Frobenius => vec![linear(needs_plane()?), semilinear(gf3_matrix(&[[1, 0], [0, 2]]))],
        S3Twisted => vec![linear(needs_plane()?), semilinear(gf3_matrix(&[[2, 0], [0, 1]]))],
        D12 => vec![linear(needs_plane()?), semilinear(gf3_matrix(&[[1, 0], [0, 2]])), linear(minus)],
        GlBlocks => gl_block_tops(es)?,
        GlBlocksTwisted => {
            let mut tops = gl_block_tops(es)?;
            tops[0].action = tops[0].action.mul(&shear_for(es, &[(0, 1), (1, 2)])?);
            tops
        }
        AffineGlBlocks => {
            let mut tops = gl_block_tops(es)?;
            tops.extend(cube_shears(es)?.into_iter().map(linear));
            tops
        }
        AffineGammaLBlocks => {
            let f8 = FieldSpec::new(2, 3)?;
            let mut tops = vec![
                linear(block(&regular_representation(&f8, f8.primitive_element()))?),
                linear(block(&frobenius_matrix(&f8, 1))?),
            ];
            tops.extend(cube_shears(es)?.into_iter().map(linear));
            tops
        }
        SingularStabilizer => es.singular_stabilizer(false)?.into_iter().map(linear).collect(),
        SingularStabilizerDickson => es.singular_stabilizer(true)?.into_iter().map(linear).collect(),
    })
}

fn block(a: &Matrix) -> Result<Matrix> {
    Ok(a.direct_sum(&a.inverse()?.transpose()))
}

/// `[[I, 0], [B, I]]` with `B` the symmetric zero-diagonal matrix supported on `pairs`.
fn shear_for(es: &Extraspecial, pairs: &[(usize, usize)]) -> Result<Matrix> {
    let m = es.spec().m as usize;
    if es.spec().r != 2 || m != 3 {
        return Err(Error::InvalidSpec("shears need r = 2 and m = 3".into()));
    }
    let mut s = Matrix::identity(es.quotient_field(), 2 * m);
    for &(i, j) in pairs {
        s.set(m + i, j, 1);
        s.set(m + j, i, 1);
    }
    Ok(s)
}

fn cube_shears(es: &Extraspecial) -> Result<Vec<Matrix>> {
    [(0, 1), (0, 2), (1, 2)].iter().map(|&pair| shear_for(es, &[pair])).collect()
}

/// `diag(A, A^-T)` for generators `A` of `GL_m(2)`: a transvection and a Singer cycle.
fn gl_block_tops(es: &Extraspecial) -> Result<Vec<TopElement>> {
    let m = es.spec().m;
    if es.spec().r != 2 {
        return Err(Error::InvalidSpec("block tops need r = 2".into()));
    }
    let f2 = es.quotient_field().clone();
    let mut transvection = Matrix::identity(&f2, m as usize);
    if m > 1 {
        transvection.set(0, 1, 1);
    }
    let singer = regular_representation(&FieldSpec::new(2, m)?, FieldSpec::new(2, m)?.primitive_element());
    let gens = vec![transvection, singer];
    let expected: u64 = (0..m).map(|i| (1u64 << m) - (1 << i)).product();
    let order = enumerate_closure(&gens, expected + 1)?.len() as u64;
    if order != expected {
        return Err(Error::InvalidSpec(format!("block generators give order {order}, expected {expected}")));
    }
    gens.iter().map(|a| Ok(TopElement { frob: 0, action: block(a)? })).collect()
}

/// Builds the group named by `recipe`.
pub fn build(recipe: &Recipe, seed: u64, limits: &Limits) -> Result<MatGroup> {
    match recipe {
        Recipe::DeletedModule { perm, p } => deleted_permutation_module(&named_perm_group(perm)?, *p),
        Recipe::DeletedConstituent { perm, p, constituent, scalars } => {
            let module = deleted_permutation_module(&named_perm_group(perm)?, *p)?;
            let g = match (module.split_constituent(seed, limits)?, constituent) {
                (Split::Reducible { sub, .. }, Constituent::Sub) => sub,
                (Split::Reducible { quotient, .. }, Constituent::Quotient) => quotient,
                (Split::Irreducible, _) => {
                    return Err(Error::InvalidSpec(format!("deleted module of {perm} is irreducible")))
                }
            };
            let g = if *scalars { g.with_scalars() } else { g };
            Ok(g.with_label(format!("{perm} on a {:?} of its deleted module over GF({p})", constituent)))
        }
        Recipe::Sl25 { extension_scalars } => sl2_5_gl4_3(seed, *extension_scalars),
        Recipe::Extraspecial { spec, top } => {
            let es = Extraspecial::new(*spec)?;
            let tops = extraspecial_tops(&es, *top)?;
            Ok(es.extension(&tops)?.with_label(format!("{}^(1+{}).{top:?}", spec.r, 2 * spec.m)))
        }
        Recipe::SingerTensor { full_normalizers } => singer_tensor_group(*full_normalizers),
        Recipe::C4Pair { q } => c4_pair_group(*q),
        Recipe::Torus { q, frobenius } => torus(&FieldSpec::of_order(*q)?, *frobenius),
        Recipe::GammaL1 { spec } => gamma_l1(spec),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub name: String,
    pub label: Option<String>,
    pub field: FieldFile,
    pub dim: usize,
    pub p: u32,
    pub order: BigCount,
    pub expected_order: Option<BigCount>,
    pub orbit_sizes: BTreeMap<u64, u64>,
    pub expected_orbit_sizes: BTreeMap<u64, u64>,
    pub status: PexcStatus,
    pub expected_status: PexcStatus,
    pub witness: Option<OrbitWitness>,
    pub half_transitive: bool,
    pub transitive: bool,
    pub irreducible: bool,
    pub source: Source,
    pub citation: String,
    pub passed: bool,
    pub mismatches: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Builds an entry, computes its orbits and compares against the stored data.
pub fn verify_entry(entry: &CatalogEntry, seed: u64, limits: &Limits) -> Result<CatalogReport> {
    let start = Instant::now();
    let g = build(&entry.recipe, seed, limits)?;
    let partition = g.orbit_partition(limits)?;
    let order = g.order_with(&partition);
    let verdict = PexcVerdict::evaluate(entry.p, order, &partition);
    let sizes = partition.sizes();
    let mut mismatches = Vec::new();
    if g.field() != &entry.field.to_field()? || g.dim() != entry.dim {
        mismatches.push(format!("built over {} in dimension {}, expected {:?} dimension {}", g.field(), g.dim(), entry.field, entry.dim));
    }
    if sizes != entry.expected_orbit_sizes {
        mismatches.push(profile_diff(&entry.expected_orbit_sizes, &sizes));
    }
    if let Some(BigCount(expected)) = entry.expected_order {
        if expected != order {
            mismatches.push(format!("order {order}, expected {expected}"));
        }
    }
    if verdict.status != entry.expected_status {
        mismatches.push(format!("status {}, expected {}", verdict.status.as_str(), entry.expected_status.as_str()));
    }
    let irreducible = g.is_irreducible(limits)?;
    Ok(CatalogReport {
        name: entry.name.clone(),
        label: g.label().map(str::to_string),
        field: FieldFile::from_field(g.field()),
        dim: g.dim(),
        p: entry.p,
        order: BigCount(order),
        expected_order: entry.expected_order,
        orbit_sizes: sizes,
        expected_orbit_sizes: entry.expected_orbit_sizes.clone(),
        status: verdict.status,
        expected_status: entry.expected_status,
        witness: crate::formats::VerdictReport::from(&verdict).witness,
        half_transitive: partition.is_half_transitive(),
        transitive: partition.is_transitive_nonzero(),
        irreducible,
        source: entry.source,
        citation: entry.citation.clone(),
        passed: mismatches.is_empty(),
        mismatches,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

fn profile_diff(expected: &BTreeMap<u64, u64>, actual: &BTreeMap<u64, u64>) -> String {
    let mut keys: Vec<u64> = expected.keys().chain(actual.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let parts: Vec<String> = keys
        .into_iter()
        .filter_map(|k| {
            let (e, a) = (expected.get(&k).copied().unwrap_or(0), actual.get(&k).copied().unwrap_or(0));
            (e != a).then(|| format!("size {k}: expected {e}, got {a}"))
        })
        .collect();
    format!("orbit profile differs ({})", parts.join("; "))
}

/// Verifies a named entry; a profile mismatch is returned as `MismatchedProfile`.
pub fn catalog_verify(name: &str, seed: u64, limits: &Limits) -> Result<CatalogReport> {
    let entry = catalog(name)?;
    let report = verify_entry(&entry, seed, limits)?;
    if report.orbit_sizes != report.expected_orbit_sizes {
        return Err(Error::MismatchedProfile {
            name: name.to_string(),
            expected: format!("{:?}", report.expected_orbit_sizes),
            actual: format!("{:?}", report.orbit_sizes),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_orders_hold() {
        for name in stored_perm_names() {
            stored_perm_group(name).unwrap();
        }
    }

    #[test]
    fn names_are_unique_and_sorted() {
        let names = catalog_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
        assert!(matches!(catalog("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn small_entry_verifies() {
        let r = catalog_verify("deleted_A7_F2", 0, &Limits::default()).unwrap();
        assert!(r.passed, "{:?}", r.mismatches);
        assert_eq!(r.status, PexcStatus::PExceptional);
    }

    #[test]
    fn untwisted_blocks_are_not_exceptional() {
        let spec = ExtraspecialSpec { r: 2, m: 3, variant: crate::extraspecial::ExtraspecialVariant::Plus, q: 3 };
        let recipe = Recipe::Extraspecial { spec, top: ExtraspecialTop::GlBlocks };
        let g = build(&recipe, 0, &Limits::default()).unwrap();
        let v = g.is_p_exceptional(3, &Limits::default()).unwrap();
        assert_eq!(v.status, PexcStatus::BadOrbit);
    }
}
