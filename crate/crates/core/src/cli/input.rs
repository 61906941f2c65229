//! JSON input schemas for groups, subgroups, weights, automorphisms and
//! multipliers.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::function::{BiInvariantFunction, Weight};
use crate::group::{
    check_automorphism, stabilizer, subgroup_closure, DoubleCosetPartition, GroupAutomorphism, GroupTable,
    SubgroupEmbedding,
};
use crate::hecke::HeckeAlgebra;
use crate::multiplier::{multiplier_from_kernel, MultiplierOperator};

/// `{ "kind": "generators" | "cyclic" | "dihedral" | "symmetric" | "table", ... }`
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawGroupSpec")]
pub enum GroupSpec {
    Generators { generators: Vec<Vec<usize>> },
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Table { table: Vec<Vec<usize>>, labels: Option<Vec<String>> },
}

// The specs are read through flat structs so that serde_json can report the
// line and column of type errors; internally tagged enums lose them.

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum GroupKind {
    Generators,
    Cyclic,
    Dihedral,
    Symmetric,
    Table,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupSpec {
    kind: GroupKind,
    generators: Option<Vec<Vec<usize>>>,
    n: Option<usize>,
    table: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
}

fn required<T>(value: Option<T>, field: &str, kind: &str) -> std::result::Result<T, String> {
    value.ok_or_else(|| format!("missing field `{field}` for kind \"{kind}\""))
}

fn forbidden(present: bool, field: &str, kind: &str) -> std::result::Result<(), String> {
    if present {
        Err(format!("field `{field}` is not allowed for kind \"{kind}\""))
    } else {
        Ok(())
    }
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = String;

    fn try_from(r: RawGroupSpec) -> std::result::Result<Self, String> {
        let (name, keep) = match r.kind {
            GroupKind::Generators => ("generators", "generators"),
            GroupKind::Cyclic => ("cyclic", "n"),
            GroupKind::Dihedral => ("dihedral", "n"),
            GroupKind::Symmetric => ("symmetric", "n"),
            GroupKind::Table => ("table", "table"),
        };
        forbidden(r.generators.is_some() && keep != "generators", "generators", name)?;
        forbidden(r.n.is_some() && keep != "n", "n", name)?;
        forbidden(r.table.is_some() && keep != "table", "table", name)?;
        forbidden(r.labels.is_some() && keep != "table", "labels", name)?;
        Ok(match r.kind {
            GroupKind::Generators => GroupSpec::Generators { generators: required(r.generators, "generators", name)? },
            GroupKind::Cyclic => GroupSpec::Cyclic { n: required(r.n, "n", name)? },
            GroupKind::Dihedral => GroupSpec::Dihedral { n: required(r.n, "n", name)? },
            GroupKind::Symmetric => GroupSpec::Symmetric { n: required(r.n, "n", name)? },
            GroupKind::Table => GroupSpec::Table { table: required(r.table, "table", name)?, labels: r.labels },
        })
    }
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<GroupTable> {
        let check_cap = |order: usize| {
            if order > cap {
                Err(Error::SizeLimit { cap })
            } else {
                Ok(())
            }
        };
        match self {
            GroupSpec::Generators { generators } => GroupTable::from_generators(generators, cap),
            GroupSpec::Cyclic { n } => {
                check_cap(*n)?;
                GroupTable::cyclic(*n)
            }
            GroupSpec::Dihedral { n } => {
                check_cap(2 * n)?;
                GroupTable::dihedral(*n)
            }
            GroupSpec::Symmetric { n } => GroupTable::symmetric(*n, cap),
            GroupSpec::Table { table, labels } => {
                check_cap(table.len())?;
                GroupTable::from_table(table, labels.clone())
            }
        }
    }
}

/// Exactly one of `seeds`, `elements`, `generators` (one-line permutations)
/// or `stabilizer` (a point of a permutation group).
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    #[serde(default)]
    pub seeds: Option<Vec<usize>>,
    #[serde(default)]
    pub elements: Option<Vec<usize>>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub stabilizer: Option<usize>,
}

impl SubgroupSpec {
    pub fn build(&self, group: &GroupTable) -> Result<SubgroupEmbedding> {
        let given = [
            self.seeds.is_some(),
            self.elements.is_some(),
            self.generators.is_some(),
            self.stabilizer.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return Err(Error::Input(
                "subgroup spec needs exactly one of \"seeds\", \"elements\", \"generators\", \"stabilizer\"".into(),
            ));
        }
        if let Some(seeds) = &self.seeds {
            return subgroup_closure(group, seeds);
        }
        if let Some(elements) = &self.elements {
            return SubgroupEmbedding::from_elements(group, elements);
        }
        if let Some(gens) = &self.generators {
            let seeds = gens
                .iter()
                .map(|p| {
                    group.index_of_permutation(p).ok_or_else(|| {
                        Error::Input(format!("permutation {p:?} is not an element of the group"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return subgroup_closure(group, &seeds);
        }
        stabilizer(group, self.stabilizer.unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawWeightSpec")]
pub enum WeightSpec {
    Uniform,
    ByElement { values: Vec<f64> },
    /// Keys are double-coset ids as produced by the coset enumeration.
    ByDoubleCoset { values: BTreeMap<String, f64> },
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum WeightKind {
    Uniform,
    ByElement,
    ByDoubleCoset,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightValues {
    List(Vec<f64>),
    Map(BTreeMap<String, f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightSpec {
    kind: WeightKind,
    values: Option<WeightValues>,
}

impl TryFrom<RawWeightSpec> for WeightSpec {
    type Error = String;

    fn try_from(r: RawWeightSpec) -> std::result::Result<Self, String> {
        match (r.kind, r.values) {
            (WeightKind::Uniform, None) => Ok(WeightSpec::Uniform),
            (WeightKind::Uniform, Some(_)) => Err("field `values` is not allowed for kind \"uniform\"".into()),
            (WeightKind::ByElement, Some(WeightValues::List(values))) => Ok(WeightSpec::ByElement { values }),
            (WeightKind::ByDoubleCoset, Some(WeightValues::Map(values))) => Ok(WeightSpec::ByDoubleCoset { values }),
            (WeightKind::ByElement, _) => Err("kind \"by_element\" needs `values` as an array of numbers".into()),
            (WeightKind::ByDoubleCoset, _) => {
                Err("kind \"by_double_coset\" needs `values` as an object mapping coset ids to numbers".into())
            }
        }
    }
}

impl WeightSpec {
    pub fn build(&self, group: &GroupTable, cosets: &DoubleCosetPartition) -> Result<Weight> {
        match self {
            WeightSpec::Uniform => Ok(Weight::uniform(group.order())),
            WeightSpec::ByElement { values } => {
                if values.len() != group.order() {
                    return Err(Error::Input(format!(
                        "weight has {} values but the group has order {}",
                        values.len(),
                        group.order()
                    )));
                }
                Weight::new(values.clone())
            }
            WeightSpec::ByDoubleCoset { values } => {
                let mut per_coset = vec![None; cosets.len()];
                for (key, &v) in values {
                    let id: usize = key
                        .parse()
                        .map_err(|_| Error::Input(format!("double coset id {key:?} is not an integer")))?;
                    if id >= cosets.len() {
                        return Err(Error::Input(format!(
                            "double coset id {id} out of range (there are {})",
                            cosets.len()
                        )));
                    }
                    per_coset[id] = Some(v);
                }
                let filled = per_coset
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| Error::Input(format!("no weight given for double coset {i}"))))
                    .collect::<Result<Vec<f64>>>()?;
                Weight::by_double_coset(cosets, &filled)
            }
        }
    }
}

/// `perm` is indexed by element: `theta(x) = perm[x]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawAutomorphismSpec")]
pub enum AutomorphismSpec {
    Identity,
    Inversion,
    Conjugation { by: usize },
    Perm { perm: Vec<usize> },
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum AutomorphismKind {
    Identity,
    Inversion,
    Conjugation,
    Perm,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomorphismSpec {
    kind: AutomorphismKind,
    by: Option<usize>,
    perm: Option<Vec<usize>>,
}

impl TryFrom<RawAutomorphismSpec> for AutomorphismSpec {
    type Error = String;

    fn try_from(r: RawAutomorphismSpec) -> std::result::Result<Self, String> {
        let name = match r.kind {
            AutomorphismKind::Identity => "identity",
            AutomorphismKind::Inversion => "inversion",
            AutomorphismKind::Conjugation => "conjugation",
            AutomorphismKind::Perm => "perm",
        };
        forbidden(r.by.is_some() && name != "conjugation", "by", name)?;
        forbidden(r.perm.is_some() && name != "perm", "perm", name)?;
        Ok(match r.kind {
            AutomorphismKind::Identity => AutomorphismSpec::Identity,
            AutomorphismKind::Inversion => AutomorphismSpec::Inversion,
            AutomorphismKind::Conjugation => AutomorphismSpec::Conjugation { by: required(r.by, "by", name)? },
            AutomorphismKind::Perm => AutomorphismSpec::Perm { perm: required(r.perm, "perm", name)? },
        })
    }
}

impl AutomorphismSpec {
    pub fn build(&self, group: &GroupTable) -> Result<GroupAutomorphism> {
        match self {
            AutomorphismSpec::Identity => Ok(GroupAutomorphism::identity(group)),
            AutomorphismSpec::Inversion => GroupAutomorphism::inversion(group),
            AutomorphismSpec::Conjugation { by } => GroupAutomorphism::conjugation(group, *by),
            AutomorphismSpec::Perm { perm } => check_automorphism(group, perm, false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawMultiplierSpec")]
pub enum MultiplierSpec {
    Kernel { coset_values: Vec<[f64; 2]> },
    Matrix { rows: Vec<Vec<[f64; 2]>> },
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum MultiplierKind {
    Kernel,
    Matrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMultiplierSpec {
    kind: MultiplierKind,
    coset_values: Option<Vec<[f64; 2]>>,
    rows: Option<Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<RawMultiplierSpec> for MultiplierSpec {
    type Error = String;

    fn try_from(r: RawMultiplierSpec) -> std::result::Result<Self, String> {
        match r.kind {
            MultiplierKind::Kernel => {
                forbidden(r.rows.is_some(), "rows", "kernel")?;
                Ok(MultiplierSpec::Kernel { coset_values: required(r.coset_values, "coset_values", "kernel")? })
            }
            MultiplierKind::Matrix => {
                forbidden(r.coset_values.is_some(), "coset_values", "matrix")?;
                Ok(MultiplierSpec::Matrix { rows: required(r.rows, "rows", "matrix")? })
            }
        }
    }
}

impl MultiplierSpec {
    pub fn build(&self, algebra: &HeckeAlgebra) -> Result<MultiplierOperator> {
        let d = algebra.dim();
        match self {
            MultiplierSpec::Kernel { coset_values } => {
                if coset_values.len() != d {
                    return Err(Error::Input(format!(
                        "kernel has {} coset values but there are {d} double cosets",
                        coset_values.len()
                    )));
                }
                let h = BiInvariantFunction::new(complex_serde::from_pairs(coset_values));
                Ok(multiplier_from_kernel(algebra, &h))
            }
            MultiplierSpec::Matrix { rows } => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Input(format!("multiplier matrix must be {d}x{d}")));
                }
                let m = DMatrix::from_fn(d, d, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
                MultiplierOperator::from_matrix(m)
            }
        }
    }
}

/// Parse JSON text, prefixing errors with `source` (serde reports line and column).
pub fn parse_json<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{source}: {e}")))
}

/// Reads and parses a spec file; also returns the SHA-256 of its bytes.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<(T, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Input(format!("{}: not valid UTF-8: {e}", path.display())))?;
    let value = parse_json(text, &path.display().to_string())?;
    Ok((value, sha256_hex(&bytes)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
