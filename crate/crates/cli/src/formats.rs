//! On-disk JSON formats and their conversions to library types.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nccover::circle::{CircleCover, CirclePoly};
use nccover::sampled::{SampledCover, SampledSpace};
use nccover::{CMatrix, Complex64, CoveringData, SampledFunction};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Schema { path: path.to_path_buf(), source })
}

/// `{"degree_bound": D, "coeffs": [[re, im], ...]}`, indices `−D..=D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub degree_bound: usize,
    pub coeffs: Vec<Pair>,
}

impl From<&CirclePoly> for PolyJson {
    fn from(p: &CirclePoly) -> Self {
        PolyJson { degree_bound: p.degree_bound(), coeffs: p.coeffs().iter().copied().map(pair).collect() }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<CirclePoly, CliError> {
        Ok(CirclePoly::from_coeffs(self.degree_bound, self.coeffs.iter().map(complex).collect())?)
    }
}

/// A covering file, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoveringFile {
    /// The `n`-fold circle cover in trigonometric polynomials of degree `≤ degree_bound`.
    Circle { n: usize, degree_bound: usize, frame: Vec<PolyJson>, frame_weight: f64 },
    /// A cover of finite point sets; `cover.projection` maps onto `base`,
    /// `generator` is the deck permutation, frame values follow `cover.points`.
    Sampled {
        n: usize,
        base: SampledSpace,
        cover: SampledSpace,
        generator: BTreeMap<String, String>,
        frame: Vec<Vec<Pair>>,
        frame_weight: f64,
    },
}

pub enum Covering {
    Circle(CoveringData<CircleCover>),
    Sampled { data: CoveringData<SampledCover>, base: SampledSpace },
}

impl CoveringFile {
    pub fn from_circle(cov: &CoveringData<CircleCover>) -> Self {
        CoveringFile::Circle {
            n: cov.structure.n(),
            degree_bound: cov.structure.cover_degree(),
            frame: cov.frame.iter().map(PolyJson::from).collect(),
            frame_weight: cov.frame_weight,
        }
    }

    /// Points are named `x{i}` on the base and `x{i}.{t}` on the cover.
    pub fn from_sampled(cov: &CoveringData<SampledCover>) -> Self {
        let s = &cov.structure;
        let fibers = s.fibers();
        let base = SampledSpace::new((0..fibers.len()).map(|i| format!("x{i}")).collect());
        let names: Vec<String> = s.projection().iter().enumerate().map(|(t, x)| format!("x{x}.{t}")).collect();
        let projection =
            names.iter().zip(s.projection()).map(|(name, &x)| (name.clone(), base.points[x].clone())).collect();
        let generator = s.power(1).iter().enumerate().map(|(t, &u)| (names[t].clone(), names[u].clone())).collect();
        CoveringFile::Sampled {
            n: cov.group_order(),
            base,
            cover: SampledSpace { points: names, projection: Some(projection) },
            generator,
            frame: cov.frame.iter().map(|f| f.values.iter().copied().map(pair).collect()).collect(),
            frame_weight: cov.frame_weight,
        }
    }

    pub fn into_covering(self) -> Result<Covering, CliError> {
        match self {
            CoveringFile::Circle { n, degree_bound, frame, frame_weight } => {
                let frame = frame.iter().map(PolyJson::to_poly).collect::<Result<Vec<_>, _>>()?;
                let structure = CircleCover::new(n, degree_bound)?;
                Ok(Covering::Circle(CoveringData::new(structure, frame, frame_weight)?))
            }
            CoveringFile::Sampled { n, base, cover, generator, frame, frame_weight } => {
                let projection = cover.projection_indices(&base)?;
                let index: BTreeMap<&str, usize> =
                    cover.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
                if index.len() != cover.len() {
                    return Err(CliError::Invalid("cover points are not distinct".into()));
                }
                let mut perm = Vec::with_capacity(cover.len());
                for p in &cover.points {
                    let image = generator
                        .get(p)
                        .ok_or_else(|| CliError::Invalid(format!("generator has no image for {p:?}")))?;
                    let t = index
                        .get(image.as_str())
                        .ok_or_else(|| CliError::Invalid(format!("generator image {image:?} is not a cover point")))?;
                    perm.push(*t);
                }
                let structure = SampledCover::new(n, base.len(), projection, perm)?;
                let frame = frame
                    .iter()
                    .map(|f| SampledFunction::new(f.iter().map(complex).collect()))
                    .collect();
                Ok(Covering::Sampled { data: CoveringData::new(structure, frame, frame_weight)?, base })
            }
        }
    }
}

/// Functions on a sampled space: one array of `[re, im]` per function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionsFile {
    pub functions: Vec<Vec<Pair>>,
}

/// `{"samples": [[re, im], ...]}` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopFile {
    pub samples: Vec<Pair>,
}

/// A path of square matrices, each a list of rows of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub n: usize,
    pub path: Vec<Vec<Vec<Pair>>>,
}

pub fn matrix(rows: &[Vec<Pair>]) -> Result<CMatrix, CliError> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(CliError::Invalid("matrix is not square".into()));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| complex(&rows[i][j])))
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<Pair>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect()
}
