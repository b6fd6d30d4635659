//! JSON file formats and a canonical writer.
//!
//! Integers that may exceed 2^53 are written as decimal strings above that
//! bound and as plain numbers otherwise.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::group::{MatGroup, OrbitPartition, PexcStatus, PexcVerdict};
use crate::matrix::Matrix;
use crate::perm::PermGroup;
use crate::space::SemilinearMap;

const SAFE_INTEGER: u128 = 1 << 53;

/// An unsigned integer serialized as a number up to 2^53 and as a string beyond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub u128);

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 <= SAFE_INTEGER {
            s.serialize_u64(self.0 as u64)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigCount;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative integer or a decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigCount, E> {
                Ok(BigCount(v as u128))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigCount, E> {
                u128::try_from(v).map(BigCount).map_err(|_| E::custom("negative integer"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigCount, E> {
                v.parse().map(BigCount).map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
}

/// Parses JSON text, reporting syntax and schema errors with their position.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_error)
}

/// Pretty JSON with two-space indentation, arrays of scalars on one line
/// and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String(k.clone()));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFile {
    pub p: u32,
    pub degree: u32,
    /// Ascending coefficients of the monic reduction polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u32>>,
}

impl FieldFile {
    pub fn from_field(f: &FieldSpec) -> Self {
        FieldFile { p: f.p(), degree: f.degree(), poly: Some(f.poly().to_vec()) }
    }

    pub fn to_field(&self) -> Result<FieldSpec> {
        match &self.poly {
            Some(poly) => FieldSpec::with_poly(self.p, self.degree, poly.clone()),
            None => FieldSpec::new(self.p, self.degree),
        }
    }
}

/// A matrix group given by generators; each generator is a row-major list of
/// `dim * dim` field elements in their integer encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub field: FieldFile,
    pub dim: usize,
    pub generators: Vec<Vec<Elem>>,
    /// Frobenius power applied before each generator; absent means all linear.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<Vec<u32>>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_group(g: &MatGroup) -> Self {
        let gens = g.generators();
        let frobenius = (!g.is_linear()).then(|| gens.iter().map(|s| s.frob).collect());
        GroupFile {
            label: g.label().map(str::to_string),
            field: FieldFile::from_field(g.field()),
            dim: g.dim(),
            generators: gens.iter().map(|s| s.matrix.data().to_vec()).collect(),
            frobenius,
        }
    }

    pub fn to_group(&self) -> Result<MatGroup> {
        let f = self.field.to_field()?;
        if let Some(fr) = &self.frobenius {
            if fr.len() != self.generators.len() {
                return Err(Error::Data(format!(
                    "{} frobenius entries for {} generators",
                    fr.len(),
                    self.generators.len()
                )));
            }
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, data) in self.generators.iter().enumerate() {
            if data.len() != self.dim * self.dim {
                return Err(Error::ShapeMismatch(format!(
                    "generator {i} has {} entries, expected {}",
                    data.len(),
                    self.dim * self.dim
                )));
            }
            if let Some(&bad) = data.iter().find(|&&x| !f.is_valid(x)) {
                return Err(Error::Data(format!("generator {i} has entry {bad} outside {f}")));
            }
            let m = Matrix::new(&f, self.dim, self.dim, data.clone())?;
            let frob = self.frobenius.as_ref().map_or(0, |fr| fr[i]);
            if frob >= f.degree() {
                return Err(Error::Data(format!("generator {i} has frobenius power {frob} >= {}", f.degree())));
            }
            gens.push(SemilinearMap::new(frob, m));
        }
        let g = MatGroup::semilinear(&f, self.dim, gens)?;
        Ok(match &self.label {
            Some(l) => g.with_label(l.clone()),
            None => g,
        })
    }
}

/// A permutation group on `0..degree` given by image lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    /// Asserted group order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<BigCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl PermFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_group(g: &PermGroup) -> Self {
        PermFile {
            name: g.label().map(str::to_string),
            degree: g.degree(),
            generators: g.generators().to_vec(),
            order: None,
            provenance: None,
        }
    }

    /// Builds the group, checking the asserted order if present.
    pub fn to_group(&self) -> Result<PermGroup> {
        let g = PermGroup::new(self.degree, self.generators.clone())?;
        if let Some(BigCount(expected)) = self.order {
            let actual = g.order();
            if actual != expected {
                return Err(Error::Data(format!(
                    "{}: stored order {expected} but the generators give {actual}",
                    self.name.as_deref().unwrap_or("permutation group")
                )));
            }
        }
        Ok(match &self.name {
            Some(n) => g.with_label(n.clone()),
            None => g,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub representative: BigCount,
    pub size: BigCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: PexcStatus,
    pub witness: Option<OrbitWitness>,
}

impl From<&PexcVerdict> for VerdictReport {
    fn from(v: &PexcVerdict) -> Self {
        VerdictReport {
            status: v.status,
            witness: v.witness.map(|o| OrbitWitness { representative: BigCount(o.representative as u128), size: BigCount(o.size as u128) }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub label: Option<String>,
    pub field: FieldFile,
    pub dim: usize,
    pub order: Option<BigCount>,
    pub orbit_sizes: BTreeMap<u64, BigCount>,
    pub p: Option<u32>,
    pub verdict: Option<VerdictReport>,
    pub half_transitive: bool,
    pub transitive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl OrbitReport {
    pub fn new(g: &MatGroup, partition: &OrbitPartition, order: Option<u128>, verdict: Option<&PexcVerdict>) -> Self {
        OrbitReport {
            label: g.label().map(str::to_string),
            field: FieldFile::from_field(g.field()),
            dim: g.dim(),
            order: order.map(BigCount),
            orbit_sizes: partition.sizes().into_iter().map(|(s, m)| (s, BigCount(m as u128))).collect(),
            p: verdict.map(|v| v.p),
            verdict: verdict.map(VerdictReport::from),
            half_transitive: partition.is_half_transitive(),
            transitive: partition.is_transitive_nonzero(),
            elapsed_ms: None,
        }
    }
}
