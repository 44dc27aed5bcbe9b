use crate::data::{product_of_parts, space_form_curvature, FactorPart};
use crate::{CurvatureData, CurvatureError, Result};
use std::fmt;
use std::str::FromStr;

/// Global facts about a catalog space. These are metadata attached to each
/// entry, never inferred from a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub compact: bool,
    pub complete: bool,
    pub simply_connected: bool,
    pub infinite_volume: bool,
}

/// One factor of a product: a space form of dimension ≥ 2, or a line or circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub n: usize,
    pub kappa: f64,
    pub compact: bool,
    pub simply_connected: bool,
}

impl Factor {
    fn einstein_constant(&self) -> f64 {
        (self.n as f64 - 1.0) * self.kappa
    }

    fn name(&self) -> String {
        match (self.n, self.compact) {
            (1, true) => "circle".into(),
            (1, false) => "line".into(),
            (n, true) if self.kappa == 1.0 => format!("sphere{n}"),
            (n, true) => format!("sphere{n}(k={})", self.kappa),
            (n, false) if self.kappa == -1.0 => format!("hyperbolic{n}"),
            (n, false) if self.kappa == 0.0 => format!("euclidean{n}"),
            (n, false) => format!("hyperbolic{n}(k={})", self.kappa),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    SpaceForm { n: usize, kappa: f64 },
    Product(Vec<Factor>),
    FlatTorus { periods: Vec<f64> },
    RoundSphere2 { radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    kind: ModelKind,
    topology: Topology,
}

const CLOSED: Topology = Topology { compact: true, complete: true, simply_connected: true, infinite_volume: false };
const OPEN: Topology = Topology { compact: false, complete: true, simply_connected: true, infinite_volume: true };

impl ModelSpace {
    pub fn sphere(n: usize, kappa: f64) -> Result<Self> {
        if kappa <= 0.0 {
            return Err(CurvatureError::Dimension(format!("sphere needs k > 0, got {kappa}")));
        }
        if n == 2 {
            return Self::round_sphere2(1.0 / kappa.sqrt());
        }
        check_n(n)?;
        Ok(ModelSpace { kind: ModelKind::SpaceForm { n, kappa }, topology: CLOSED })
    }

    pub fn round_sphere2(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CurvatureError::Dimension(format!("sphere radius must be > 0, got {radius}")));
        }
        Ok(ModelSpace { kind: ModelKind::RoundSphere2 { radius }, topology: CLOSED })
    }

    pub fn hyperbolic(n: usize, kappa: f64) -> Result<Self> {
        check_n(n)?;
        if kappa >= 0.0 {
            return Err(CurvatureError::Dimension(format!("hyperbolic space needs k < 0, got {kappa}")));
        }
        Ok(ModelSpace { kind: ModelKind::SpaceForm { n, kappa }, topology: OPEN })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(ModelSpace { kind: ModelKind::SpaceForm { n, kappa: 0.0 }, topology: OPEN })
    }

    pub fn flat_torus(periods: Vec<f64>) -> Result<Self> {
        check_n(periods.len())?;
        if periods.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(CurvatureError::Dimension("torus periods must all be > 0".into()));
        }
        let topology = Topology { simply_connected: false, ..CLOSED };
        Ok(ModelSpace { kind: ModelKind::FlatTorus { periods }, topology })
    }

    pub fn product(factors: Vec<Factor>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(CurvatureError::Dimension("a product needs at least two factors".into()));
        }
        let compact = factors.iter().all(|f| f.compact);
        let topology = Topology {
            compact,
            complete: true,
            simply_connected: factors.iter().all(|f| f.simply_connected),
            infinite_volume: !compact,
        };
        Ok(ModelSpace { kind: ModelKind::Product(factors), topology })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }
    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::SpaceForm { n, .. } => *n,
            ModelKind::Product(f) => f.iter().map(|x| x.n).sum(),
            ModelKind::FlatTorus { periods } => periods.len(),
            ModelKind::RoundSphere2 { .. } => 2,
        }
    }

    /// Curvature at any point (all catalog spaces are homogeneous).
    pub fn curvature(&self) -> Result<CurvatureData> {
        match &self.kind {
            ModelKind::SpaceForm { n, kappa } => space_form_curvature(*n, *kappa),
            ModelKind::FlatTorus { periods } => space_form_curvature(periods.len(), 0.0),
            ModelKind::RoundSphere2 { radius } => space_form_curvature(2, 1.0 / (radius * radius)),
            ModelKind::Product(factors) => {
                let curved: Vec<Option<CurvatureData>> = factors
                    .iter()
                    .map(|f| if f.n >= 2 { space_form_curvature(f.n, f.kappa).map(Some) } else { Ok(None) })
                    .collect::<Result<_>>()?;
                let parts: Vec<FactorPart> = curved
                    .iter()
                    .map(|c| match c {
                        Some(c) => FactorPart::Curved(c),
                        None => FactorPart::Flat1,
                    })
                    .collect();
                product_of_parts(&parts)
            }
        }
    }

    /// κ_E with Ric = κ_E g, when the space is Einstein.
    pub fn einstein_constant(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::SpaceForm { n, kappa } => Some((*n as f64 - 1.0) * kappa),
            ModelKind::FlatTorus { .. } => Some(0.0),
            ModelKind::RoundSphere2 { radius } => Some(1.0 / (radius * radius)),
            ModelKind::Product(factors) => {
                let first = factors[0].einstein_constant();
                let agree = factors.iter().all(|f| (f.einstein_constant() - first).abs() <= 1e-12 * first.abs().max(1.0));
                agree.then_some(first)
            }
        }
    }

    pub fn is_einstein(&self) -> bool {
        self.einstein_constant().is_some()
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=tensor_core::MAX_DIM).contains(&n) {
        return Err(CurvatureError::Dimension(format!("dimension {n} outside 2..={}", tensor_core::MAX_DIM)));
    }
    Ok(())
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::SpaceForm { n, kappa } if *kappa > 0.0 => write!(f, "sphere:n={n},k={kappa}"),
            ModelKind::SpaceForm { n, kappa } if *kappa < 0.0 => write!(f, "hyperbolic:n={n},k={kappa}"),
            ModelKind::SpaceForm { n, .. } => write!(f, "euclidean:n={n}"),
            ModelKind::RoundSphere2 { radius } => write!(f, "sphere:n=2,r={radius}"),
            ModelKind::FlatTorus { periods } => {
                let l: Vec<String> = periods.iter().map(|x| x.to_string()).collect();
                write!(f, "torus:n={},L={}", periods.len(), l.join(","))
            }
            ModelKind::Product(factors) => {
                let names: Vec<String> = factors.iter().map(Factor::name).collect();
                write!(f, "product:{}", names.join("+"))
            }
        }
    }
}

/// Splits "n=2,L=1,1" into key/value lists; bare tokens extend the previous key.
fn parse_params(spec: &str, body: &str) -> Result<Vec<(String, Vec<f64>)>> {
    let perr = |msg: String| CurvatureError::Parse(spec.to_string(), msg);
    let mut out: Vec<(String, Vec<f64>)> = Vec::new();
    for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, val) = match tok.split_once('=') {
            Some((k, v)) => (Some(k.trim().to_ascii_lowercase()), v.trim()),
            None => (None, tok),
        };
        let x: f64 = val.parse().map_err(|_| perr(format!("'{val}' is not a number")))?;
        match key {
            Some(k) => {
                if out.iter().any(|(e, _)| *e == k) {
                    return Err(perr(format!("duplicate key '{k}'")));
                }
                out.push((k, vec![x]))
            }
            None => match out.last_mut() {
                Some((_, v)) => v.push(x),
                None => return Err(perr(format!("value '{tok}' without a key"))),
            },
        }
    }
    Ok(out)
}

fn take_int(spec: &str, params: &[(String, Vec<f64>)], key: &str) -> Result<Option<usize>> {
    match params.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) if v.len() == 1 && v[0] >= 0.0 && v[0].fract() == 0.0 => Ok(Some(v[0] as usize)),
        Some(_) => Err(CurvatureError::Parse(spec.into(), format!("'{key}' must be a single non-negative integer"))),
    }
}

fn take_real(spec: &str, params: &[(String, Vec<f64>)], key: &str) -> Result<Option<f64>> {
    match params.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) if v.len() == 1 => Ok(Some(v[0])),
        Some(_) => Err(CurvatureError::Parse(spec.into(), format!("'{key}' takes one value"))),
    }
}

fn check_keys(spec: &str, params: &[(String, Vec<f64>)], allowed: &[&str]) -> Result<()> {
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(CurvatureError::Parse(spec.into(), format!("unknown key '{k}'")));
        }
    }
    Ok(())
}

fn parse_factor(spec: &str, tok: &str) -> Result<Factor> {
    let perr = |msg: String| CurvatureError::Parse(spec.to_string(), msg);
    let tok = tok.trim();
    let (head, kappa) = match tok.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| perr(format!("unclosed '(' in '{tok}'")))?;
            let params = parse_params(spec, inner)?;
            check_keys(spec, &params, &["k"])?;
            (h.trim(), take_real(spec, &params, "k")?)
        }
        None => (tok, None),
    };
    let head = head.to_ascii_lowercase();
    let split_dim = |prefix: &str| -> Option<Result<usize>> {
        head.strip_prefix(prefix)
            .map(|d| d.parse::<usize>().map_err(|_| perr(format!("bad dimension in '{tok}'"))))
    };
    if head == "line" || head == "circle" {
        if kappa.is_some() {
            return Err(perr(format!("'{head}' takes no curvature")));
        }
        let compact = head == "circle";
        return Ok(Factor { n: 1, kappa: 0.0, compact, simply_connected: !compact });
    }
    if let Some(n) = split_dim("sphere") {
        let n = n?;
        check_n(n)?;
        let k = kappa.unwrap_or(1.0);
        if k <= 0.0 {
            return Err(perr("sphere factor needs k > 0".into()));
        }
        return Ok(Factor { n, kappa: k, compact: true, simply_connected: true });
    }
    if let Some(n) = split_dim("hyperbolic") {
        let n = n?;
        check_n(n)?;
        let k = kappa.unwrap_or(-1.0);
        if k >= 0.0 {
            return Err(perr("hyperbolic factor needs k < 0".into()));
        }
        return Ok(Factor { n, kappa: k, compact: false, simply_connected: true });
    }
    if let Some(n) = split_dim("euclidean") {
        let n = n?;
        check_n(n)?;
        return Ok(Factor { n, kappa: 0.0, compact: false, simply_connected: true });
    }
    Err(perr(format!("unknown factor '{tok}'")))
}

impl FromStr for ModelSpace {
    type Err = CurvatureError;

    /// Catalog identifiers: `sphere:n=3,k=1`, `sphere:n=2,r=2`, `hyperbolic:n=3,k=-1`,
    /// `euclidean:n=3`, `torus:n=2,L=1,1`, `product:sphere2+sphere2`.
    fn from_str(spec: &str) -> Result<Self> {
        let perr = |msg: &str| CurvatureError::Parse(spec.to_string(), msg.to_string());
        let (name, body) = spec.trim().split_once(':').unwrap_or((spec.trim(), ""));
        match name.trim().to_ascii_lowercase().as_str() {
            "product" => {
                let factors = body.split('+').map(|t| parse_factor(spec, t)).collect::<Result<Vec<_>>>()?;
                if factors.len() < 2 {
                    return Err(perr("a product needs at least two factors"));
                }
                ModelSpace::product(factors)
            }
            "sphere" => {
                let p = parse_params(spec, body)?;
                check_keys(spec, &p, &["n", "k", "r"])?;
                let n = take_int(spec, &p, "n")?.unwrap_or(2);
                match (take_real(spec, &p, "k")?, take_real(spec, &p, "r")?) {
                    (Some(_), Some(_)) => Err(perr("give either k or r, not both")),
                    (None, Some(r)) if n == 2 => ModelSpace::round_sphere2(r),
                    (None, Some(r)) if r > 0.0 => ModelSpace::sphere(n, 1.0 / (r * r)),
                    (None, Some(_)) => Err(perr("radius must be > 0")),
                    (k, None) => ModelSpace::sphere(n, k.unwrap_or(1.0)),
                }
            }
            "hyperbolic" => {
                let p = parse_params(spec, body)?;
                check_keys(spec, &p, &["n", "k"])?;
                let n = take_int(spec, &p, "n")?.ok_or_else(|| perr("missing n"))?;
                ModelSpace::hyperbolic(n, take_real(spec, &p, "k")?.unwrap_or(-1.0))
            }
            "euclidean" => {
                let p = parse_params(spec, body)?;
                check_keys(spec, &p, &["n"])?;
                ModelSpace::euclidean(take_int(spec, &p, "n")?.ok_or_else(|| perr("missing n"))?)
            }
            "torus" => {
                let p = parse_params(spec, body)?;
                check_keys(spec, &p, &["n", "l"])?;
                let periods = p.iter().find(|(k, _)| k == "l").map(|(_, v)| v.clone());
                let n = match (take_int(spec, &p, "n")?, &periods) {
                    (Some(n), _) => n,
                    (None, Some(v)) => v.len(),
                    (None, None) => return Err(perr("missing n")),
                };
                let periods = match periods {
                    None => vec![1.0; n],
                    Some(v) if v.len() == 1 => vec![v[0]; n],
                    Some(v) if v.len() == n => v,
                    Some(_) => return Err(perr("number of periods must be 1 or n")),
                };
                ModelSpace::flat_torus(periods)
            }
            "" => Err(perr("empty space identifier")),
            other => Err(perr(&format!("unknown space kind '{other}'"))),
        }
        .map_err(|e| match e {
            CurvatureError::Parse(..) => e,
            other => CurvatureError::Parse(spec.to_string(), other.to_string()),
        })
    }
}
