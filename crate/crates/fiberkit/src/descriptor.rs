//! JSON descriptors for the CLI-facing wire formats.
//!
//! Complex scalars are `[re, im]` pairs everywhere; matrices are row-major
//! nested arrays. Unknown keys are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::GeneratorSystem;
use crate::group::{FiniteAbelianGroup, FiniteGroupTable, SubgroupEmbedding};
use crate::linalg::{CMat, CVec};
use crate::range::{RangeFunction, RangeOperator};
use crate::rep::{OrbitSystem, UnitaryRepresentation};
use crate::sidemo::SampledSpectrum;
use crate::space::{DeterminingSet, MeasureSpace, VectorField};

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn unpair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_pairs(v: &CVec) -> Vec<Pair> {
    v.iter().map(|&z| pair(z)).collect()
}

pub fn matrix_pairs(m: &CMat) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_pairs(rows: &[Vec<Pair>]) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| unpair(rows[i][j])))
}

/// `{"atoms": [...], "weights": [...]}`; atoms default to `0..n` labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<serde_json::Value>>,
    pub weights: Vec<f64>,
}

impl SpaceDescriptor {
    pub fn to_space(&self) -> Result<MeasureSpace> {
        let labels: Vec<String> = match &self.atoms {
            Some(atoms) => {
                if atoms.len() != self.weights.len() {
                    return Err(Error::InvalidInput("atoms and weights lengths differ".into()));
                }
                atoms
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect()
            }
            None => (0..self.weights.len()).map(|i| i.to_string()).collect(),
        };
        MeasureSpace::new(labels, self.weights.clone())
    }

    pub fn from_space(space: &MeasureSpace) -> Self {
        Self {
            atoms: Some(
                space
                    .atoms()
                    .iter()
                    .map(|a| serde_json::Value::String(a.clone()))
                    .collect(),
            ),
            weights: space.weights().to_vec(),
        }
    }
}

/// `{"abelian": [n1, ...]}` or `{"cayley": [[...]], "subgroup": [...]}`,
/// optionally with an abelian witness for the subgroup.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDescriptor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDescriptor {
    pub model: Vec<u64>,
    /// One generator (parent element index) per cyclic factor of the model.
    pub generators: Vec<usize>,
}

impl GroupDescriptor {
    pub fn abelian_group(&self) -> Result<FiniteAbelianGroup> {
        match &self.abelian {
            Some(factors) => FiniteAbelianGroup::new(factors.clone()),
            None => Err(Error::InvalidInput("descriptor has no \"abelian\" factors".into())),
        }
    }

    pub fn table(&self) -> Result<FiniteGroupTable> {
        match (&self.abelian, &self.cayley) {
            (Some(factors), None) => Ok(FiniteAbelianGroup::new(factors.clone())?.to_table()),
            (None, Some(cayley)) => FiniteGroupTable::new(cayley.clone()),
            (Some(_), Some(_)) => Err(Error::InvalidInput(
                "descriptor has both \"abelian\" and \"cayley\"".into(),
            )),
            (None, None) => Err(Error::InvalidInput(
                "descriptor needs \"abelian\" or \"cayley\"".into(),
            )),
        }
    }

    /// The subgroup embedding, with a witness from the descriptor, or an
    /// automatic cyclic witness when the subgroup is cyclic.
    pub fn subgroup_embedding(&self, elements: Option<&[usize]>) -> Result<SubgroupEmbedding> {
        let table = self.table()?;
        let elems: Vec<usize> = match (elements, &self.subgroup) {
            (Some(e), _) => e.to_vec(),
            (None, Some(e)) => e.clone(),
            (None, None) => return Err(Error::InvalidSubgroup("no subgroup given".into())),
        };
        if let Some(w) = &self.witness {
            let model = FiniteAbelianGroup::new(w.model.clone())?;
            let sub = SubgroupEmbedding::abelian_witness(table, model, &w.generators)?;
            let mut sorted = elems.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sub.elements() != sorted.as_slice() {
                return Err(Error::InvalidSubgroup(
                    "witness does not generate the listed subgroup".into(),
                ));
            }
            return Ok(sub);
        }
        // try each element as a cyclic generator of the whole subgroup
        let plain = SubgroupEmbedding::new(table.clone(), elems.clone())?;
        for &g in plain.elements() {
            if let Ok(sub) = SubgroupEmbedding::cyclic_witness(table.clone(), g) {
                if sub.elements() == plain.elements() {
                    return Ok(sub);
                }
            }
        }
        Err(Error::InvalidSubgroup(
            "subgroup is not cyclic; supply an explicit witness {\"model\": [...], \"generators\": [...]}"
                .into(),
        ))
    }
}

/// Determining set: `{"standard": true}`, `{"characters": {group}}`, or
/// explicit `{"rows": [[...]], "index_weights": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterminingDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<GroupDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_weights: Option<Vec<f64>>,
}

impl DeterminingDescriptor {
    pub fn to_determining(&self, domain: &MeasureSpace) -> Result<DeterminingSet> {
        match (&self.standard, &self.characters, &self.rows) {
            (Some(true), None, None) => DeterminingSet::standard(domain.clone()),
            (None, Some(group), None) => {
                let g = group.abelian_group()?;
                let d = DeterminingSet::characters(&g);
                if d.domain() != domain {
                    return Err(Error::DomainMismatch(
                        "character determining set does not match the system space".into(),
                    ));
                }
                Ok(d)
            }
            (None, None, Some(rows)) => {
                let parsed: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&p| unpair(p)).collect())
                    .collect();
                let index_space = match &self.index_weights {
                    Some(w) => MeasureSpace::new(
                        (0..w.len()).map(|i| i.to_string()).collect(),
                        w.clone(),
                    )?,
                    None => MeasureSpace::counting(parsed.len()),
                };
                DeterminingSet::new(domain.clone(), index_space, parsed)
            }
            _ => Err(Error::InvalidInput(
                "determining set needs exactly one of \"standard\", \"characters\", \"rows\"".into(),
            )),
        }
    }
}

/// `{"space": ..., "dim": d, "generators": [[per-atom vectors]],
/// "determining": ...}`; the determining set defaults to the standard one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    pub space: SpaceDescriptor,
    pub dim: usize,
    /// `generators[i][atom]` is a `dim`-vector of `[re, im]` pairs.
    pub generators: Vec<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determining: Option<DeterminingDescriptor>,
}

impl SystemDescriptor {
    pub fn to_system(&self) -> Result<GeneratorSystem> {
        let space = self.space.to_space()?;
        let fields = self
            .generators
            .iter()
            .map(|per_atom| {
                if per_atom.len() != space.len() {
                    return Err(Error::InvalidInput(format!(
                        "generator has {} atoms, space has {}",
                        per_atom.len(),
                        space.len()
                    )));
                }
                let values = per_atom
                    .iter()
                    .map(|v| {
                        if v.len() != self.dim {
                            return Err(Error::InvalidInput("fiber dimension mismatch".into()));
                        }
                        Ok(CVec::from_iterator(self.dim, v.iter().map(|&p| unpair(p))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                VectorField::new(space.clone(), self.dim, values)
            })
            .collect::<Result<Vec<_>>>()?;
        let determining = match &self.determining {
            Some(d) => d.to_determining(&space)?,
            None => DeterminingSet::standard(space.clone())?,
        };
        GeneratorSystem::new(fields, determining)
    }

    /// Round-trip a system back into its wire form (explicit rows for the
    /// determining set so the output is self-contained).
    pub fn from_system(system: &GeneratorSystem) -> Self {
        let generators = system
            .generators()
            .iter()
            .map(|f| f.values().iter().map(vector_pairs).collect())
            .collect();
        Self {
            space: SpaceDescriptor::from_space(system.space()),
            dim: system.dim(),
            generators,
            determining: Some(DeterminingDescriptor {
                standard: None,
                characters: None,
                rows: Some(
                    system
                        .determining()
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(|&z| pair(z)).collect())
                        .collect(),
                ),
                index_weights: Some(system.determining().index_space().weights().to_vec()),
            }),
        }
    }
}

/// Representation descriptor: a named constructor or explicit matrices,
/// plus the orbit generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDescriptor {
    pub group: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_sum: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<Pair>>>>,
    /// One generator vector per orbit index.
    pub generators: Vec<Vec<Pair>>,
}

impl RepDescriptor {
    pub fn to_orbit(&self) -> Result<OrbitSystem> {
        let group = self.group.abelian_group()?;
        let named = [
            self.regular.is_some(),
            self.trivial.is_some(),
            self.character_sum.is_some(),
            self.matrices.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if named != 1 {
            return Err(Error::InvalidInput(
                "representation needs exactly one of \"regular\", \"trivial\", \"character_sum\", \"matrices\""
                    .into(),
            ));
        }
        let rep = if self.regular == Some(true) {
            UnitaryRepresentation::regular(group)
        } else if let Some(dim) = self.trivial {
            UnitaryRepresentation::trivial(group, dim)
        } else if let Some(chars) = &self.character_sum {
            UnitaryRepresentation::character_sum(group, chars)?
        } else {
            let ms = self
                .matrices
                .as_ref()
                .unwrap()
                .iter()
                .map(|m| matrix_from_pairs(m))
                .collect::<Result<Vec<_>>>()?;
            UnitaryRepresentation::new(group, ms)?
        };
        let generators = self
            .generators
            .iter()
            .map(|v| CVec::from_iterator(v.len(), v.iter().map(|&p| unpair(p))))
            .collect();
        OrbitSystem::new(rep, generators)
    }
}

/// Range operator descriptor for the spectrum command: per-atom blocks in
/// the stored bases (bases default to the full fibers).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDescriptor {
    pub space: SpaceDescriptor,
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_bases: Option<Vec<Vec<Vec<Pair>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain_bases: Option<Vec<Vec<Vec<Pair>>>>,
    pub blocks: Vec<Vec<Vec<Pair>>>,
}

impl OperatorDescriptor {
    fn bases(
        space: &MeasureSpace,
        dim: usize,
        raw: &Option<Vec<Vec<Vec<Pair>>>>,
    ) -> Result<RangeFunction> {
        match raw {
            None => Ok(RangeFunction::full(space.clone(), dim)),
            Some(per_atom) => {
                let bases = per_atom
                    .iter()
                    .map(|m| matrix_from_pairs(m))
                    .collect::<Result<Vec<_>>>()?;
                RangeFunction::new(space.clone(), dim, bases)
            }
        }
    }

    pub fn to_range_operator(&self) -> Result<RangeOperator> {
        let space = self.space.to_space()?;
        let domain = Self::bases(&space, self.ambient_dim, &self.domain_bases)?;
        let codomain = Self::bases(&space, self.ambient_dim, &self.codomain_bases)?;
        let blocks = self
            .blocks
            .iter()
            .map(|m| matrix_from_pairs(m))
            .collect::<Result<Vec<_>>>()?;
        RangeOperator::new(domain, codomain, blocks)
    }
}

/// Band-limited spectrum: piecewise-constant pieces or raw fiber samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub band_limit: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDescriptor {
    pub from: f64,
    pub to: f64,
    pub value: Pair,
}

impl SpectrumDescriptor {
    pub fn to_spectrum(&self, grid_override: Option<usize>) -> Result<SampledSpectrum> {
        let grid = grid_override
            .or(self.grid)
            .ok_or_else(|| Error::InvalidInput("no grid size given".into()))?;
        match (&self.pieces, &self.samples) {
            (Some(pieces), None) => {
                let ps: Vec<(f64, f64, Complex64)> = pieces
                    .iter()
                    .map(|p| (p.from, p.to, unpair(p.value)))
                    .collect();
                SampledSpectrum::piecewise_constant(grid, self.band_limit, &ps)
            }
            (None, Some(samples)) => {
                let values = samples
                    .iter()
                    .map(|row| row.iter().map(|&p| unpair(p)).collect())
                    .collect();
                SampledSpectrum::from_samples(samples.len(), self.band_limit, values)
            }
            _ => Err(Error::InvalidInput(
                "spectrum needs exactly one of \"pieces\" or \"samples\"".into(),
            )),
        }
    }
}
