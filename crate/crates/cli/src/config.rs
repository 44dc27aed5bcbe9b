use crate::CliError;
use clap::Parser;
use curvature::{ModelKind, ModelSpace};
use discrete_fields::OperatorKind;
use serde::Deserialize;
use std::path::PathBuf;
use tensor_core::SymmetryClass;
use theorem_checker::HypothesisOverrides;

/// Command-line flags. Every flag except `--config` may also be given in the
/// TOML config file under the same name; flags win over the file.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "lichnerowicz", version, about = "Curvature, spectra and vanishing checks for Lichnerowicz Laplacians")]
pub struct Args {
    /// Catalog space, e.g. `sphere:n=2`, `torus:n=2,L=1,1`, `product:sphere2+sphere2`.
    #[arg(long)]
    pub space: Option<String>,
    /// curvature | quadratic-form | spectrum | check | verify-identities
    #[arg(long)]
    pub task: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    /// general | symmetric | symmetric-traceless | alternating
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// lichnerowicz | rough | hodge | sampson | einstein
    #[arg(long)]
    pub kind: Option<String>,
    /// Grid resolution: `32`, `16x16x8`, `64x128`.
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub kernel_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; the CSV summary goes next to it with extension `.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub compact: Option<bool>,
    #[arg(long)]
    pub complete: Option<bool>,
    #[arg(long)]
    pub simply_connected: Option<bool>,
    #[arg(long)]
    pub volume_infinite: Option<bool>,
    /// Holonomy irreducibility; never detected, only supplied.
    #[arg(long)]
    pub irreducible: Option<bool>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    space: Option<String>,
    task: Option<String>,
    p: Option<usize>,
    class: Option<String>,
    c: Option<f64>,
    kind: Option<String>,
    res: Option<ResValue>,
    k: Option<usize>,
    kernel_tol: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    compact: Option<bool>,
    complete: Option<bool>,
    simply_connected: Option<bool>,
    volume_infinite: Option<bool>,
    irreducible: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ResValue {
    One(usize),
    List(Vec<usize>),
    Text(String),
}

impl ResValue {
    fn into_text(self) -> String {
        match self {
            ResValue::One(n) => n.to_string(),
            ResValue::List(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("x"),
            ResValue::Text(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Curvature,
    QuadraticForm,
    Spectrum,
    Check,
    VerifyIdentities,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Curvature => "curvature",
            Task::QuadraticForm => "quadratic-form",
            Task::Spectrum => "spectrum",
            Task::Check => "check",
            Task::VerifyIdentities => "verify-identities",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "curvature" => Ok(Task::Curvature),
            "quadratic-form" => Ok(Task::QuadraticForm),
            "spectrum" => Ok(Task::Spectrum),
            "check" => Ok(Task::Check),
            "verify-identities" => Ok(Task::VerifyIdentities),
            other => Err(CliError::Parse(format!("unknown task '{other}'"))),
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub space_spec: String,
    pub space: ModelSpace,
    pub task: Task,
    pub p: Option<usize>,
    pub class: SymmetryClass,
    pub c: f64,
    pub kind: OperatorKind,
    pub resolution: Vec<usize>,
    pub k: usize,
    pub kernel_tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub overrides: HypothesisOverrides,
}

pub fn parse_kind(s: &str, c: f64) -> Result<OperatorKind, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "lichnerowicz" => Ok(OperatorKind::Lichnerowicz { c }),
        "rough" => Ok(OperatorKind::Rough),
        "hodge" => Ok(OperatorKind::Hodge),
        "sampson" => Ok(OperatorKind::Sampson),
        "einstein" => Ok(OperatorKind::Einstein),
        other => Err(CliError::Parse(format!("unknown operator kind '{other}'"))),
    }
}

pub fn parse_resolution(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(['x', 'X', ','])
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Parse(format!("bad resolution '{s}'"))))
        .collect()
}

/// Grid resolution used when `--res` is absent.
pub fn default_resolution(space: &ModelSpace) -> Vec<usize> {
    match space.kind() {
        ModelKind::RoundSphere2 { .. } => vec![64, 128],
        ModelKind::FlatTorus { periods } if periods.len() == 3 => vec![16],
        _ => vec![32],
    }
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let space_spec = args.space.or(file.space).ok_or_else(|| CliError::Parse("missing --space".into()))?;
        let space: ModelSpace = space_spec.parse().map_err(|e: curvature::CurvatureError| CliError::Parse(e.to_string()))?;
        let task = Task::parse(&args.task.or(file.task).ok_or_else(|| CliError::Parse("missing --task".into()))?)?;
        let p = args.p.or(file.p);
        if matches!(task, Task::Spectrum | Task::QuadraticForm) && p.is_none() {
            return Err(CliError::Parse(format!("task {} needs --p", task.name())));
        }
        let class = match args.class.or(file.class) {
            Some(s) => s.parse::<SymmetryClass>().map_err(|e| CliError::Parse(e.to_string()))?,
            None => SymmetryClass::General,
        };
        let c = args.c.or(file.c).unwrap_or(1.0);
        if !c.is_finite() {
            return Err(CliError::Parse("c must be finite".into()));
        }
        let kind = parse_kind(&args.kind.or(file.kind).unwrap_or_else(|| "lichnerowicz".into()), c)?;
        let resolution = match args.res.or(file.res.map(ResValue::into_text)) {
            Some(s) => parse_resolution(&s)?,
            None => default_resolution(&space),
        };
        let k = args.k.or(file.k).unwrap_or(6);
        if k == 0 {
            return Err(CliError::Parse("k must be positive".into()));
        }
        let kernel_tol = args.kernel_tol.or(file.kernel_tol);
        if let Some(t) = kernel_tol {
            if !(t > 0.0) {
                return Err(CliError::Parse("kernel-tol must be positive".into()));
            }
        }
        let overrides = HypothesisOverrides {
            compact: args.compact.or(file.compact),
            complete: args.complete.or(file.complete),
            simply_connected: args.simply_connected.or(file.simply_connected),
            volume_infinite: args.volume_infinite.or(file.volume_infinite),
            irreducible: args.irreducible.or(file.irreducible),
        };
        Ok(RunConfig {
            space_spec,
            space,
            task,
            p,
            class,
            c,
            kind,
            resolution,
            k,
            kernel_tol,
            seed: args.seed.or(file.seed).unwrap_or(0),
            out: args.out.or(file.out),
            overrides,
        })
    }
}
