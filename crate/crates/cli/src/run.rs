use crate::config::{RunConfig, Task};
use crate::suite::{field_suite, has_field_discretization, pointwise_suite, symmetric_form_agreement, IdentityCheck};
use crate::{CliError, EXIT_IDENTITY_FAILURE, EXIT_OK};
use curvature::{a0_estimate, sec_extremes, ModelSpace};
use discrete_fields::{assemble, spectrum, AssembledOperator, OperatorKind, SpectralReport};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};
use tensor_core::{class_basis, eigen_decompose_symmetric, CovariantTensor, SymmetryClass};
use theorem_checker::{
    a0_criterion, check_against_kernel, classify_kernel, einstein_stability, lichnerowicz_einstein_eigen_link, Verdict,
    EIGEN_LINK_ANCHOR,
};
use weitzenboeck::{weitzenboeck_class_matrix, weitzenboeck_quadratic, weitzenboeck_quadratic_eigenframe};

/// Tolerance on ‖DF‖/‖F‖ and metric-proportionality defects of computed kernel fields.
pub const GRID_TOL: f64 = 1e-6;

pub const SOLVER_TOLERANCE: &str = "residual <= 1e-11*max(1,|lambda|) + 1e-14*||A||_inf";

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub csv: String,
    pub exit_code: i32,
}

struct Sections {
    spectrum: Value,
    verdicts: Vec<Value>,
    identities: Vec<IdentityCheck>,
    extra: Value,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curvature = curvature_section(&cfg.space)?;
    let mut s = Sections { spectrum: Value::Null, verdicts: Vec::new(), identities: Vec::new(), extra: Value::Null };
    match cfg.task {
        Task::Curvature => {}
        Task::QuadraticForm => quadratic_form(cfg, &mut s)?,
        Task::Spectrum => spectrum_task(cfg, &mut s)?,
        Task::Check => check_task(cfg, &mut s)?,
        Task::VerifyIdentities => {
            s.identities = pointwise_suite(&cfg.space, cfg.seed)?;
            if has_field_discretization(&cfg.space) {
                s.identities.extend(field_suite(&cfg.space, &cfg.resolution, cfg.seed)?);
            } else {
                s.extra = json!({"note": format!("no field discretization for {}; pointwise suite only", cfg.space)});
            }
        }
    }
    let all_pass = s.identities.iter().all(|c| c.pass);
    let exit_code = if all_pass { EXIT_OK } else { EXIT_IDENTITY_FAILURE };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let report = json!({
        "meta": {
            "tool": "lichnerowicz",
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": timestamp,
            "seed": cfg.seed,
        },
        "config": config_section(cfg),
        "curvature": curvature,
        "spectrum": s.spectrum,
        "verdicts": s.verdicts,
        "identities": s.identities,
        "task_output": s.extra,
        "status": {"all_checks_pass": all_pass, "exit_code": exit_code},
    });
    let csv = csv_summary(&report);
    Ok(Outcome { report, csv, exit_code })
}

fn config_section(cfg: &RunConfig) -> Value {
    json!({
        "space": cfg.space_spec,
        "space_resolved": cfg.space.to_string(),
        "task": cfg.task.name(),
        "p": cfg.p,
        "class": cfg.class.name(),
        "c": cfg.c,
        "kind": cfg.kind.name(),
        "res": cfg.resolution,
        "k": cfg.k,
        "kernel_tol": cfg.kernel_tol,
        "seed": cfg.seed,
        "overrides": {
            "compact": cfg.overrides.compact,
            "complete": cfg.overrides.complete,
            "simply_connected": cfg.overrides.simply_connected,
            "volume_infinite": cfg.overrides.volume_infinite,
            "irreducible": cfg.overrides.irreducible,
        },
    })
}

fn curvature_section(space: &ModelSpace) -> Result<Value, CliError> {
    let c = space.curvature()?;
    let (kmin, kmax) = sec_extremes(&c, 64);
    let topo = space.topology();
    Ok(json!({
        "n": c.n(),
        "lambda2_eigenvalues": c.lambda2_eigenvalues(),
        "ricci": c.ricci(),
        "scalar": c.scalar(),
        "sec_min": kmin,
        "sec_max": kmax,
        "sec_search": "Grassmannian block ascent, 64 starts",
        "a0": a0_estimate(&c),
        "einstein": space.is_einstein(),
        "einstein_constant": space.einstein_constant(),
        "topology": {
            "compact": topo.compact,
            "complete": topo.complete,
            "simply_connected": topo.simply_connected,
            "volume_infinite": topo.infinite_volume,
        },
    }))
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "predicted_kernel": v.predicted_kernel.name(),
        "rule_fired": v.rule_fired,
        "anchor": v.anchor,
        "applies_to": {"p": v.applies_to.0, "class": v.applies_to.1.name(), "c": v.applies_to.2},
        "analytic_only": v.analytic_only,
        "notes": v.notes,
    })
}

fn quadratic_form(cfg: &RunConfig, s: &mut Sections) -> Result<(), CliError> {
    let p = cfg.p.unwrap_or(2);
    let curv = cfg.space.curvature()?;
    let n = curv.n();
    let m = weitzenboeck_class_matrix(&curv, p, cfg.class)?;
    let d = class_basis(n, p, cfg.class)?.len();
    let eig = eigen_decompose_symmetric(&m, d)?;
    let scaled: Vec<f64> = eig.values.iter().rev().map(|x| cfg.c * x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let basis = class_basis(n, p, cfg.class)?;
    let mut samples = Vec::new();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let mut comps = vec![0.0; n.pow(p as u32)];
        for b in &basis {
            let w: f64 = rng.random_range(-1.0..1.0);
            comps.iter_mut().zip(b).for_each(|(x, y)| *x += w * y);
        }
        let t = CovariantTensor::from_components(n, p, comps)?;
        let q = weitzenboeck_quadratic(&curv, &t)?;
        let e = weitzenboeck_quadratic_eigenframe(&curv, &t)?;
        worst = worst.max((q - e).abs() / q.abs().max(e.abs()).max(1.0));
        samples.push(json!({"norm_sq": t.norm_sq(), "c_times_quadratic": cfg.c * q, "eigenframe": cfg.c * e}));
    }
    s.identities.push(IdentityCheck::below(
        "quadratic_form_agreement",
        "<R_p T, T> by contraction = eigenframe sum (relative)",
        worst,
        1e-10,
    ));
    if p == 2 && cfg.class != SymmetryClass::Alternating && cfg.class != SymmetryClass::General {
        s.identities.push(IdentityCheck::below(
            "symmetric_two_tensor_forms",
            "<R_2 phi, phi> = 2 sum_{i<j} sec(e_i^e_j)(mu_i - mu_j)^2 (relative)",
            symmetric_form_agreement(&curv, 100, &mut rng)?,
            1e-10,
        ));
    }
    let lo = scaled.first().copied().unwrap_or(0.0);
    let hi = scaled.last().copied().unwrap_or(0.0);
    s.extra = json!({
        "p": p,
        "class": cfg.class.name(),
        "c": cfg.c,
        "class_dimension": d,
        "c_times_r_p_eigenvalues": scaled,
        "semidefinite": if lo >= -1e-10 { "nonnegative" } else if hi <= 1e-10 { "nonpositive" } else { "indefinite" },
        "sign_tolerance": 1e-10,
        "samples": samples,
    });
    Ok(())
}

/// Coupling c for which the assembled operator is Δ̄ + cℜ_p on this class, if any.
fn lichnerowicz_coupling(kind: OperatorKind, p: usize, class: SymmetryClass) -> Option<f64> {
    match kind {
        OperatorKind::Lichnerowicz { c } => Some(c),
        OperatorKind::Hodge if p <= 1 || class == SymmetryClass::Alternating => Some(1.0),
        OperatorKind::Sampson if matches!(class, SymmetryClass::Symmetric | SymmetryClass::SymmetricTraceless) => Some(-1.0),
        OperatorKind::Rough => Some(0.0),
        _ => None,
    }
}

fn spectrum_json(op: &AssembledOperator, rep: &SpectralReport, user_tol: bool) -> Value {
    json!({
        "operator": op.kind().name(),
        "coupling": op.coupling(),
        "shift": op.shift(),
        "dim": op.dim(),
        "grid": op.grid().resolution(),
        "eigenvalues": rep.eigenvalues,
        "residuals": rep.residuals,
        "solver_tolerance": SOLVER_TOLERANCE,
        "iterations": rep.iterations,
        "matrix_norm_inf": rep.matrix_norm,
        "kernel_dim": rep.kernel_dim,
        "kernel_tol": rep.kernel_tol,
        "kernel_tol_rule": if user_tol { "user supplied" } else { "default: torus 1e-8*max(|lambda|max,1); sphere 1e-3*lambda_1 of the scalar rough operator" },
    })
}

fn spectrum_task(cfg: &RunConfig, s: &mut Sections) -> Result<(), CliError> {
    let p = cfg.p.unwrap_or(0);
    let op = assemble(&cfg.space, p, cfg.class, cfg.kind, &cfg.resolution)?;
    let rep = spectrum(&op, cfg.k, cfg.kernel_tol)?;
    s.spectrum = spectrum_json(&op, &rep, cfg.kernel_tol.is_some());
    if p >= 1 {
        if let Some(c) = lichnerowicz_coupling(cfg.kind, p, cfg.class) {
            let v = classify_kernel(&cfg.space, p, cfg.class, c, &cfg.overrides)?;
            let k = check_against_kernel(&v, &rep, GRID_TOL)?;
            s.verdicts.push(verdict_json(&v));
            s.identities.push(IdentityCheck {
                name: "verdict_consistency".into(),
                checks: format!("{} against computed kernel: {}", v.predicted_kernel, k.detail),
                value: k.worst_defect,
                tolerance: GRID_TOL,
                comparison: "consistent",
                pass: k.consistent,
            });
        }
    }
    Ok(())
}

fn check_task(cfg: &RunConfig, s: &mut Sections) -> Result<(), CliError> {
    let cases: Vec<(usize, SymmetryClass, f64)> = match cfg.p {
        Some(p) => vec![(p, cfg.class, cfg.c)],
        None => {
            let mut v = Vec::new();
            for c in [1.0, -1.0] {
                v.push((1, SymmetryClass::General, c));
                for class in [SymmetryClass::General, SymmetryClass::Symmetric, SymmetryClass::SymmetricTraceless, SymmetryClass::Alternating] {
                    v.push((2, class, c));
                }
            }
            v
        }
    };
    for (p, class, c) in cases {
        s.verdicts.push(verdict_json(&classify_kernel(&cfg.space, p, class, c, &cfg.overrides)?));
    }
    if cfg.space.is_einstein() {
        let curv = cfg.space.curvature()?;
        let mut stab = verdict_json(&einstein_stability(&cfg.space)?);
        stab["check"] = json!("einstein_stability");
        let mut a0 = verdict_json(&a0_criterion(&cfg.space)?);
        a0["check"] = json!("a0_criterion");
        s.verdicts.push(stab);
        s.verdicts.push(a0);
        s.extra = json!({
            "eigen_link": {
                "anchor": EIGEN_LINK_ANCHOR,
                "delta_e_eigenvalue_on_symmetric_kernel": lichnerowicz_einstein_eigen_link(curv.scalar(), curv.n()),
            }
        });
    } else {
        s.extra = json!({"note": format!("{} is not Einstein; stability criteria do not apply", cfg.space)});
    }
    Ok(())
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.replace(',', ";"),
        other => other.to_string(),
    }
}

/// `section,name,value,tolerance,pass` rows.
pub fn csv_summary(report: &Value) -> String {
    let mut out = String::from("section,name,value,tolerance,pass\n");
    let mut row = |a: &str, b: &str, c: String, d: String, e: String| {
        let _ = writeln!(out, "{a},{b},{c},{d},{e}");
    };
    let curv = &report["curvature"];
    for key in ["scalar", "sec_min", "sec_max", "a0"] {
        row("curvature", key, csv_field(&curv[key]), String::new(), String::new());
    }
    let spec = &report["spectrum"];
    if !spec.is_null() {
        let tol = csv_field(&spec["kernel_tol"]);
        if let Some(vals) = spec["eigenvalues"].as_array() {
            for (i, v) in vals.iter().enumerate() {
                row("spectrum", &format!("lambda_{i}"), csv_field(v), String::new(), String::new());
            }
        }
        row("spectrum", "kernel_dim", csv_field(&spec["kernel_dim"]), tol, String::new());
    }
    if let Some(vs) = report["verdicts"].as_array() {
        for v in vs {
            let a = &v["applies_to"];
            let name = match v.get("check") {
                Some(c) => csv_field(c),
                None => format!("p={} {} c={}", a["p"], csv_field(&a["class"]), a["c"]),
            };
            row("verdicts", &name, csv_field(&v["predicted_kernel"]), String::new(), String::new());
        }
    }
    if let Some(ids) = report["identities"].as_array() {
        for c in ids {
            row(
                "identities",
                &csv_field(&c["name"]),
                csv_field(&c["value"]),
                format!("{} {}", csv_field(&c["comparison"]), csv_field(&c["tolerance"])),
                csv_field(&c["pass"]),
            );
        }
    }
    out
}
