use std::path::{Path, PathBuf};

use lieinv::algebra::{validate_algebra_with, LieAlgebra, LieAlgebraSpec};
use lieinv::diagnostics::WitnessKind;
use lieinv::linalg::{c, Tolerances, C64, ONE, ZERO};
use lieinv::numbers::liouville;
use lieinv::spectral::Backend;
use lieinv::symbol::{Flavor, WeightFunction};
use serde::{Deserialize, Serialize};

use crate::args::Overrides;
use crate::error::CliError;

const DEFAULT_CUTOFF: f64 = 25.0;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub group: Option<GroupSection>,
    #[serde(default)]
    pub algebra: Option<AlgebraSection>,
    #[serde(default)]
    pub structure: Option<StructureSection>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub kind: String,
    pub dims: Option<usize>,
}

/// A custom real Lie algebra. `brackets` entries `[i, j, k, v]` (1-based)
/// set `c_ij^k = v` and `c_ji^k = −v`; `constants` set single entries as given.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub name: Option<String>,
    pub dim: usize,
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub constants: Vec<(usize, usize, usize, f64)>,
    pub metric: Option<Vec<Vec<f64>>>,
}

/// Either a preset name or explicit generators, each a list of `[re, im]`
/// coefficients in the real basis.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSection {
    pub preset: Option<String>,
    pub generators: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub cutoff: Option<f64>,
    pub cutoffs: Option<Vec<f64>>,
    pub bidegrees: Option<Vec<[usize; 2]>>,
    pub weight: Option<String>,
    pub flavor: Option<String>,
    /// Exponent ladder for the estimate fit.
    pub exponents: Option<Vec<f64>>,
    /// Exponent of the estimate a witness refutes.
    pub witness_exponent: Option<f64>,
    pub witness_kinds: Option<Vec<String>>,
    /// Random right-hand sides for the estimate check.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub emit_representatives: Option<bool>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub structure: Option<f64>,
    pub jacobi: Option<f64>,
    pub rank: Option<f64>,
    pub rank_floor: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupConfig {
    pub kind: String,
    pub dims: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureConfig {
    pub preset: Option<String>,
    pub generators: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CustomAlgebra {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub constants: Vec<(usize, usize, usize, f64)>,
    pub metric: Vec<Vec<f64>>,
}

/// Fully resolved run configuration; its canonical JSON is what the digest covers.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub group: GroupConfig,
    pub algebra: Option<CustomAlgebra>,
    pub structure: StructureConfig,
    pub cutoffs: Vec<f64>,
    pub bidegrees: Option<Vec<(usize, usize)>>,
    pub weight: String,
    pub flavor: String,
    pub exponents: Option<Vec<f64>>,
    pub witness_exponent: Option<f64>,
    pub witness_kinds: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub emit_representatives: bool,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn cfg_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    toml::from_str(&text).map_err(|e| cfg_err(e.to_string()))
}

fn parse_bidegree(s: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [p, q] => Ok((
            p.parse().map_err(|_| cfg_err(format!("bad bidegree `{s}`")))?,
            q.parse().map_err(|_| cfg_err(format!("bad bidegree `{s}`")))?,
        )),
        _ => Err(cfg_err(format!("bidegree must be `p,q`, got `{s}`"))),
    }
}

fn preset_generators(preset: &str, group: &GroupConfig) -> Result<Vec<Vec<C64>>, CliError> {
    let n = group.dims;
    let unit = |i: usize| -> Vec<C64> { (0..n).map(|j| if i == j { ONE } else { ZERO }).collect() };
    let plane = |b: C64| -> Result<Vec<Vec<C64>>, CliError> {
        if group.kind != "torus" || n < 2 {
            return Err(cfg_err(format!("preset `{preset}` needs a torus of dimension >= 2")));
        }
        let mut v = unit(0);
        v[1] = b;
        Ok(vec![v])
    };
    match preset {
        "de-rham" => Ok((0..n).map(unit).collect()),
        "d" | "d1" => Ok(vec![unit(0)]),
        "d1+i*d2" => plane(c(0.0, 1.0)),
        "d1+sqrt2*d2" => plane(c(std::f64::consts::SQRT_2, 0.0)),
        "d1+liouville*d2" => plane(c(liouville(), 0.0)),
        "cr" => {
            if group.kind != "su2" {
                return Err(cfg_err("preset `cr` needs --group su2"));
            }
            Ok(vec![vec![ZERO, ONE, c(0.0, 1.0)]])
        }
        other => Err(cfg_err(format!("unknown structure preset `{other}`"))),
    }
}

fn parse_weight(weight: &str, flavor: Flavor) -> Result<WeightFunction, CliError> {
    if weight == "smooth" {
        return Ok(WeightFunction::smooth().with_flavor(flavor));
    }
    if let Some(s) = weight.strip_prefix("gevrey:") {
        let s: f64 = s.parse().map_err(|_| cfg_err(format!("bad Gevrey order in `{weight}`")))?;
        return Ok(WeightFunction::gevrey(s, flavor)?);
    }
    Err(cfg_err(format!("weight must be `smooth` or `gevrey:S`, got `{weight}`")))
}

fn parse_flavor(flavor: &str) -> Result<Flavor, CliError> {
    match flavor {
        "beurling" => Ok(Flavor::Beurling),
        "roumieu" => Ok(Flavor::Roumieu),
        other => Err(cfg_err(format!("flavor must be `beurling` or `roumieu`, got `{other}`"))),
    }
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: &Overrides) -> Result<Self, CliError> {
        let kind = flags
            .group
            .clone()
            .or_else(|| file.group.as_ref().map(|g| g.kind.clone()))
            .unwrap_or_else(|| "torus".into());
        let dims = match kind.as_str() {
            "torus" => flags
                .dims
                .or(file.group.as_ref().and_then(|g| g.dims))
                .unwrap_or(2),
            "su2" => 3,
            other => return Err(cfg_err(format!("group must be `torus` or `su2`, got `{other}`"))),
        };
        if dims == 0 {
            return Err(cfg_err("torus dimension must be positive"));
        }
        let group = GroupConfig { kind, dims };

        let algebra = file.algebra.map(|a| {
            let mut constants = a.constants.clone();
            for &(i, j, k, v) in &a.brackets {
                constants.push((i, j, k, v));
                constants.push((j, i, k, -v));
            }
            CustomAlgebra {
                name: a.name.unwrap_or_else(|| "custom".into()),
                dim: a.dim,
                labels: a
                    .labels
                    .unwrap_or_else(|| (1..=a.dim).map(|i| format!("X{i}")).collect()),
                constants,
                metric: a.metric.unwrap_or_else(|| {
                    (0..a.dim)
                        .map(|i| (0..a.dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                        .collect()
                }),
            }
        });

        let section = file.structure;
        let preset_group = GroupConfig {
            kind: group.kind.clone(),
            dims: algebra.as_ref().map_or(group.dims, |a| a.dim),
        };
        let explicit = section.as_ref().and_then(|s| s.generators.clone());
        let structure = match (&flags.structure, section.and_then(|s| s.preset), explicit) {
            (Some(p), _, _) => StructureConfig {
                generators: to_pairs(&preset_generators(p, &preset_group)?),
                preset: Some(p.clone()),
            },
            (None, Some(_), Some(_)) => {
                return Err(cfg_err("give either a structure preset or generators, not both"))
            }
            (None, None, Some(g)) => StructureConfig {
                preset: None,
                generators: g,
            },
            (None, p, None) => {
                let p = p.unwrap_or_else(|| "de-rham".into());
                StructureConfig {
                    generators: to_pairs(&preset_generators(&p, &preset_group)?),
                    preset: Some(p),
                }
            }
        };

        let cutoffs = if let Some(c) = flags.cutoff {
            vec![c]
        } else if let Some(cs) = &flags.cutoffs {
            cs.clone()
        } else if let Some(cs) = file.run.cutoffs {
            cs
        } else {
            vec![file.run.cutoff.unwrap_or(DEFAULT_CUTOFF)]
        };
        if cutoffs.is_empty() {
            return Err(cfg_err("at least one cutoff is required"));
        }
        if let Some(&bad) = cutoffs.iter().find(|c| !(**c >= 0.0)) {
            return Err(lieinv::Error::NegativeCutoff(bad).into());
        }
        if !cutoffs.windows(2).all(|w| w[1] > w[0]) {
            return Err(cfg_err("cutoffs must be strictly increasing"));
        }

        let bidegrees = if !flags.bidegree.is_empty() {
            Some(flags.bidegree.iter().map(|s| parse_bidegree(s)).collect::<Result<Vec<_>, _>>()?)
        } else {
            file.run
                .bidegrees
                .map(|v| v.into_iter().map(|[p, q]| (p, q)).collect())
        };

        let weight = flags
            .weight
            .clone()
            .or(file.run.weight)
            .unwrap_or_else(|| "smooth".into());
        let flavor = flags
            .flavor
            .clone()
            .or(file.run.flavor)
            .unwrap_or_else(|| "beurling".into());
        parse_weight(&weight, parse_flavor(&flavor)?)?;

        let witness_kinds = file
            .run
            .witness_kinds
            .unwrap_or_else(|| ["2a", "2b", "1a", "1b"].map(String::from).to_vec());
        for k in &witness_kinds {
            k.parse::<WitnessKind>()?;
        }

        let mut tolerances = Tolerances::default();
        let t = file.tolerances;
        if let Some(x) = t.structure {
            tolerances.structure = x;
        }
        if let Some(x) = t.jacobi {
            tolerances.jacobi = x;
        }
        if let Some(x) = flags.tol.or(t.rank) {
            tolerances.rank = x;
        }
        if let Some(x) = t.rank_floor {
            tolerances.rank_floor = x;
        }
        for (name, v) in [
            ("structure", tolerances.structure),
            ("jacobi", tolerances.jacobi),
            ("rank", tolerances.rank),
            ("rank_floor", tolerances.rank_floor),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(cfg_err(format!("tolerance `{name}` must lie in (0, 1), got {v}")));
            }
        }

        Ok(Self {
            group,
            algebra,
            structure,
            cutoffs,
            bidegrees,
            weight,
            flavor,
            exponents: file.run.exponents,
            witness_exponent: file.run.witness_exponent,
            witness_kinds,
            samples: file.run.samples.unwrap_or(50),
            seed: flags.seed.or(file.run.seed).unwrap_or(0),
            emit_representatives: flags.emit_representatives
                || file.run.emit_representatives.unwrap_or(false),
            tolerances,
            out: flags.out.clone().or(file.run.out),
        })
    }

    pub fn backend(&self) -> Backend {
        match self.group.kind.as_str() {
            "su2" => Backend::Su2,
            _ => Backend::Torus {
                dims: self.group.dims,
            },
        }
    }

    /// The algebra of the run: the custom one when given, else the backend's.
    pub fn algebra(&self) -> Result<LieAlgebra, CliError> {
        let Some(a) = &self.algebra else {
            return Ok(self.backend().algebra());
        };
        let mut spec = LieAlgebraSpec::new(a.name.clone(), a.dim);
        spec.labels = a.labels.clone();
        spec.metric = a.metric.clone();
        for &(i, j, k, v) in &a.constants {
            if i == 0 || j == 0 || k == 0 || i > a.dim || j > a.dim || k > a.dim {
                return Err(cfg_err(format!(
                    "structure constant index ({i},{j},{k}) outside 1..={}",
                    a.dim
                )));
            }
            let idx = ((i - 1) * a.dim + (j - 1)) * a.dim + (k - 1);
            spec.c[idx] = v;
        }
        Ok(validate_algebra_with(spec, &self.tolerances)?)
    }

    /// Spectral commands need the backend's own algebra.
    pub fn require_backend(&self) -> Result<(), CliError> {
        if self.algebra.is_some() {
            return Err(cfg_err(
                "custom [algebra] sections have no spectral backend; only describe and lie-cohomology accept them",
            ));
        }
        Ok(())
    }

    pub fn generators(&self) -> Vec<Vec<C64>> {
        self.structure
            .generators
            .iter()
            .map(|g| g.iter().map(|&[re, im]| c(re, im)).collect())
            .collect()
    }

    pub fn weight_function(&self) -> Result<WeightFunction, CliError> {
        parse_weight(&self.weight, parse_flavor(&self.flavor)?)
    }

    pub fn flavor_value(&self) -> Result<Flavor, CliError> {
        parse_flavor(&self.flavor)
    }

    pub fn max_cutoff(&self) -> f64 {
        *self.cutoffs.last().expect("nonempty cutoffs")
    }
}

fn to_pairs(g: &[Vec<C64>]) -> Vec<Vec<[f64; 2]>> {
    g.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect()
}
