//! Job files: versioned JSON, unknown keys rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, Coefficient, Field, MatrixField, SurfaceSampler, DEFAULT_SPHERE_POINTS};
use crate::clifford::CMat2;
use crate::geometry::Vec3;
use crate::lopatinsky::LsMode;
use crate::spectrum::PotentialField;

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_HALF_SPACE_SIDE: usize = 8;
pub const DEFAULT_HALF_SPACE_EXTENT: f64 = 10.0;
pub const DEFAULT_CONE_RADII: [f64; 3] = [1.0, 10.0, 100.0];
pub const DEFAULT_CONE_AZIMUTH: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyClifford,
    CheckLs,
    Spectrum,
    Asymptotics,
    ModelEigen,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyClifford => "verify-clifford",
            Command::CheckLs => "check-ls",
            Command::Spectrum => "spectrum",
            Command::Asymptotics => "asymptotics",
            Command::ModelEigen => "model-eigen",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub schema: u32,
    pub command: Command,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub boundary: Option<BoundarySpec>,
    #[serde(default)]
    pub ls: Option<LsKnobs>,
    #[serde(default)]
    pub symmetry: Option<SymmetryKnobs>,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub asymptotics: Option<AsymptoticsKnobs>,
    #[serde(default)]
    pub spectrum: Option<SpectrumKnobs>,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub oracle: Option<OracleKnobs>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    ExteriorOfBall {
        radius: f64,
        #[serde(default)]
        n_points: Option<usize>,
    },
    HalfSpace {
        #[serde(default)]
        n_side: Option<usize>,
        #[serde(default)]
        extent: Option<f64>,
    },
    Cone {
        half_angle: f64,
        #[serde(default)]
        radii: Option<Vec<f64>>,
        #[serde(default)]
        n_azimuth: Option<usize>,
    },
    PointList {
        #[serde(default)]
        path: Option<PathBuf>,
        #[serde(default)]
        points: Option<Vec<PointSpec>>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub position: Vec3<f64>,
    pub normal: Vec3<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundarySpec {
    Mit { a: CoefSpec },
    Behrndt { theta: CoefSpec },
    Generic { b1: MatSpec, b2: MatSpec },
}

/// A bare value, `{"kind": "const", "value": ..}` or
/// `{"kind": "table", "points": [..], "values": [..]}` (nearest-sample lookup).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec<V> {
    Bare(V),
    Tagged(TaggedValue<V>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaggedValue<V> {
    Const { value: V },
    Table { points: Vec<Vec3<f64>>, values: Vec<V> },
}

/// Complex entries are `[re, im]` pairs, rows outermost.
type Mat = [[Complex64; 2]; 2];

pub type CoefSpec = ValueSpec<f64>;
pub type MatSpec = ValueSpec<Mat>;

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsKnobs {
    #[serde(default)]
    pub mode: Option<LsMode>,
    #[serde(default)]
    pub n_sphere: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub refine: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryKnobs {
    #[serde(default)]
    pub enabled: Option<bool>,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub phi: PhiSpec,
    #[serde(default)]
    pub magnetic: Option<MagneticSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhiSpec {
    Const {
        c: f64,
        #[serde(default)]
        imag: Option<f64>,
    },
    RadialTable {
        radii: Vec<f64>,
        values: Vec<f64>,
    },
    SoOscillating {
        c: f64,
        d: f64,
        beta: f64,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MagneticSpec {
    /// `A(x) = value`.
    Const { value: Vec3<f64> },
    /// `A(x) = amplitude·sin(β·log(1 + |x|))`.
    SoOscillating { amplitude: Vec3<f64>, beta: f64 },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsKnobs {
    #[serde(default)]
    pub schedule: Option<Vec<f64>>,
    #[serde(default)]
    pub n_shells: Option<usize>,
    #[serde(default)]
    pub n_directions: Option<usize>,
    #[serde(default)]
    pub radii_per_shell: Option<usize>,
    #[serde(default)]
    pub so1_threshold: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumGeometry {
    #[default]
    Exterior,
    ConicMit,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumKnobs {
    pub m: f64,
    #[serde(default)]
    pub geometry: SpectrumGeometry,
    #[serde(default)]
    pub m_sup: Option<f64>,
    #[serde(default)]
    pub m_inf: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub xi: [f64; 2],
    pub m: f64,
    #[serde(default)]
    pub z_samples: Option<ZSamples>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ZSamples {
    pub z_max: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleKnobs {
    #[serde(default)]
    pub z_max: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub convergence_tol: Option<f64>,
    #[serde(default)]
    pub window: Option<[f64; 2]>,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let job: JobSpec = serde_json::from_str(text).map_err(CliError::Json)?;
        if job.schema != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                job.schema
            )));
        }
        Ok(job)
    }
}

pub(crate) fn require<'a, T>(x: &'a Option<T>, field: &str, cmd: Command) -> Result<&'a T, CliError> {
    x.as_ref()
        .ok_or_else(|| CliError::Schema(format!("`{}` requires the `{field}` section", cmd.name())))
}

impl DomainSpec {
    pub fn sampler(&self, base: &Path) -> Result<SurfaceSampler<f64>, CliError> {
        let s = match self {
            DomainSpec::ExteriorOfBall { radius, n_points } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(CliError::Schema(format!("domain.radius must be positive, got {radius}")));
                }
                SurfaceSampler::sphere(*radius, n_points.unwrap_or(DEFAULT_SPHERE_POINTS))?
            }
            DomainSpec::HalfSpace { n_side, extent } => SurfaceSampler::half_space(
                n_side.unwrap_or(DEFAULT_HALF_SPACE_SIDE),
                extent.unwrap_or(DEFAULT_HALF_SPACE_EXTENT),
            )?,
            DomainSpec::Cone {
                half_angle,
                radii,
                n_azimuth,
            } => {
                let radii = radii.clone().unwrap_or_else(|| DEFAULT_CONE_RADII.to_vec());
                SurfaceSampler::cone(*half_angle, &radii, n_azimuth.unwrap_or(DEFAULT_CONE_AZIMUTH))?
            }
            DomainSpec::PointList { path, points } => {
                let list = match (path, points) {
                    (Some(p), None) => {
                        let full = base.join(p);
                        let text = std::fs::read_to_string(&full).map_err(|e| CliError::Io {
                            path: full.clone(),
                            source: e,
                        })?;
                        serde_json::from_str::<Vec<PointSpec>>(&text).map_err(|e| {
                            CliError::Schema(format!("point list {}: {e}", full.display()))
                        })?
                    }
                    (None, Some(v)) => v.clone(),
                    _ => {
                        return Err(CliError::Schema(
                            "point-list domain needs exactly one of `path` or `points`".into(),
                        ))
                    }
                };
                let pairs: Vec<_> = list.iter().map(|p| (p.position, p.normal)).collect();
                SurfaceSampler::from_points(&pairs)?
            }
        };
        Ok(s)
    }
}

impl<V: Clone> ValueSpec<V> {
    fn field<W: Clone + Send + Sync + 'static>(&self, f: impl Fn(&V) -> W) -> Result<Field<f64, W>, CliError> {
        Ok(match self {
            ValueSpec::Bare(v) | ValueSpec::Tagged(TaggedValue::Const { value: v }) => Field::Const(f(v)),
            ValueSpec::Tagged(TaggedValue::Table { points, values }) => {
                Field::table(points.clone(), values.iter().map(f).collect())?
            }
        })
    }
}

fn coefficient(c: &CoefSpec) -> Result<Coefficient<f64>, CliError> {
    c.field(|v| *v)
}

fn matrix(c: &MatSpec) -> Result<MatrixField<f64>, CliError> {
    c.field(|m| CMat2::from_rows(*m))
}

impl BoundarySpec {
    pub fn condition(&self) -> Result<BoundaryCondition<f64>, CliError> {
        Ok(match self {
            BoundarySpec::Mit { a } => BoundaryCondition::Mit { a: coefficient(a)? },
            BoundarySpec::Behrndt { theta } => BoundaryCondition::Behrndt {
                theta: coefficient(theta)?,
            },
            BoundarySpec::Generic { b1, b2 } => BoundaryCondition::Generic {
                b1: matrix(b1)?,
                b2: matrix(b2)?,
            },
        })
    }
}

impl PotentialSpec {
    pub fn field(&self) -> Result<PotentialField<f64>, CliError> {
        let f = match &self.phi {
            PhiSpec::Const { c, imag } => PotentialField::constant_complex(Complex64::new(*c, imag.unwrap_or(0.0)))?,
            PhiSpec::RadialTable { radii, values } => PotentialField::radial_table(radii.clone(), values.clone())?,
            PhiSpec::SoOscillating { c, d, beta } => PotentialField::so_oscillating(*c, *d, *beta)?,
        };
        Ok(match self.magnetic.clone() {
            None => f,
            Some(MagneticSpec::Const { value }) => f.with_magnetic(move |_| value),
            Some(MagneticSpec::SoOscillating { amplitude, beta }) => f.with_magnetic(move |x| {
                let s = (beta * (1.0 + crate::geometry::norm(x)).ln()).sin();
                crate::geometry::scale(&amplitude, s)
            }),
        })
    }
}
