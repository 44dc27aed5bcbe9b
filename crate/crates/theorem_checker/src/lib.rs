//! Vanishing and rigidity rules for kernels of Lichnerowicz-type Laplacians.
//!
//! A rule is a conjunction of hypotheses on the curvature signs and global
//! metadata of a catalog space plus the tensor order, symmetry class and
//! coupling c. Rules are keyed by a quote anchor from their source statement and
//! evaluated in a frozen order: strongest conclusion first, and within equal
//! strength the symmetric 2-tensor rules before the generic ones. The first rule
//! whose hypotheses hold is reported.

use curvature::{a0_estimate, sec_extremes, CurvatureData, CurvatureError, ModelSpace};
use discrete_fields::{assemble, covariant_derivative, FieldError, OperatorKind, SpectralReport, TensorField};
use std::fmt;
use tensor_core::{eigen_decompose_symmetric, SymmetryClass, TensorError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckerError {
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, CheckerError>;

/// Sign of a curvature quantity (sectional, curvature operator or Ricci) over a
/// homogeneous space, where pointwise and global statements agree. "Positive"
/// means positive in every direction at some point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    /// ≥ 0, vanishing in some direction, not identically zero.
    NonNegative,
    Zero,
    NonPositive,
    Negative,
    Indefinite,
}

impl Sign {
    pub fn from_range(min: f64, max: f64, tol: f64) -> Sign {
        if min > tol {
            Sign::Positive
        } else if max < -tol {
            Sign::Negative
        } else if min >= -tol && max <= tol {
            Sign::Zero
        } else if min >= -tol {
            Sign::NonNegative
        } else if max <= tol {
            Sign::NonPositive
        } else {
            Sign::Indefinite
        }
    }
    pub fn nonnegative(self) -> bool {
        matches!(self, Sign::Positive | Sign::NonNegative | Sign::Zero)
    }
    pub fn nonpositive(self) -> bool {
        matches!(self, Sign::Negative | Sign::NonPositive | Sign::Zero)
    }
    /// Positive in all directions at some point.
    pub fn positive_somewhere(self) -> bool {
        self == Sign::Positive
    }
    pub fn negative_somewhere(self) -> bool {
        self == Sign::Negative
    }
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => ">0",
            Sign::NonNegative => ">=0",
            Sign::Zero => "=0",
            Sign::NonPositive => "<=0",
            Sign::Negative => "<0",
            Sign::Indefinite => "indefinite",
        }
    }
}

/// Everything the rules look at.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypotheses {
    pub n: usize,
    pub c: f64,
    pub curvature_operator_sign: Sign,
    pub sec_sign: Sign,
    pub ricci_sign: Sign,
    pub k_min: f64,
    pub k_max: f64,
    pub scalar_curvature: f64,
    pub compact: bool,
    pub complete: bool,
    pub simply_connected: bool,
    pub volume_infinite: bool,
    pub einstein: bool,
    /// Holonomy irreducibility is user-supplied only; `None` means unknown.
    pub irreducible: Option<bool>,
    pub a0: f64,
}

/// User-supplied replacements for the catalog metadata.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HypothesisOverrides {
    pub compact: Option<bool>,
    pub complete: Option<bool>,
    pub simply_connected: Option<bool>,
    pub volume_infinite: Option<bool>,
    pub irreducible: Option<bool>,
}

const SEC_BUDGET: usize = 64;

fn sign_tol(scale: f64) -> f64 {
    1e-10 * scale.max(1.0)
}

fn spectrum_range(m: &[f64], dim: usize) -> Result<(f64, f64)> {
    let eig = eigen_decompose_symmetric(m, dim)?;
    Ok((*eig.values.last().unwrap_or(&0.0), *eig.values.first().unwrap_or(&0.0)))
}

impl Hypotheses {
    pub fn from_curvature(c: &CurvatureData, coupling: f64, space: &ModelSpace) -> Result<Self> {
        let n = c.n();
        let m = n * (n - 1) / 2;
        let (lmin, lmax) = spectrum_range(c.lambda2_matrix(), m)?;
        let (rmin, rmax) = spectrum_range(c.ricci(), n)?;
        let (kmin, kmax) = sec_extremes(c, SEC_BUDGET);
        let scale = lmin.abs().max(lmax.abs());
        let topo = space.topology();
        Ok(Hypotheses {
            n,
            c: coupling,
            curvature_operator_sign: Sign::from_range(lmin, lmax, sign_tol(scale)),
            sec_sign: Sign::from_range(kmin, kmax, sign_tol(scale)),
            ricci_sign: Sign::from_range(rmin, rmax, sign_tol(scale)),
            k_min: kmin,
            k_max: kmax,
            scalar_curvature: c.scalar(),
            compact: topo.compact,
            complete: topo.complete,
            simply_connected: topo.simply_connected,
            volume_infinite: topo.infinite_volume,
            einstein: space.is_einstein(),
            irreducible: None,
            a0: a0_estimate(c),
        })
    }

    pub fn from_space(space: &ModelSpace, coupling: f64) -> Result<Self> {
        Self::from_curvature(&space.curvature()?, coupling, space)
    }

    pub fn with_overrides(mut self, o: &HypothesisOverrides) -> Self {
        if let Some(v) = o.compact {
            self.compact = v;
        }
        if let Some(v) = o.complete {
            self.complete = v;
        }
        if let Some(v) = o.simply_connected {
            self.simply_connected = v;
        }
        if let Some(v) = o.volume_infinite {
            self.volume_infinite = v;
        }
        if o.irreducible.is_some() {
            self.irreducible = o.irreducible;
        }
        self
    }

    fn irreducible(&self) -> bool {
        self.irreducible == Some(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPrediction {
    Trivial,
    ConstantMultipleOfMetric,
    ParallelOnly,
    ConstantComponents,
    NoPrediction,
}

impl KernelPrediction {
    /// Larger is a stronger conclusion.
    pub fn strength(self) -> u8 {
        match self {
            KernelPrediction::Trivial => 3,
            KernelPrediction::ConstantMultipleOfMetric => 2,
            KernelPrediction::ParallelOnly | KernelPrediction::ConstantComponents => 1,
            KernelPrediction::NoPrediction => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelPrediction::Trivial => "trivial",
            KernelPrediction::ConstantMultipleOfMetric => "constant_multiple_of_metric",
            KernelPrediction::ParallelOnly => "parallel_only",
            KernelPrediction::ConstantComponents => "constant_components",
            KernelPrediction::NoPrediction => "no_prediction",
        }
    }
}

impl fmt::Display for KernelPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub predicted_kernel: KernelPrediction,
    /// Rule identifier and quote anchor; empty for `NoPrediction`.
    pub rule_fired: String,
    pub anchor: String,
    /// (p, class, c).
    pub applies_to: (usize, SymmetryClass, f64),
    /// True when the rule concerns a noncompact space and cannot be checked on a grid.
    pub analytic_only: bool,
    pub notes: Vec<String>,
}

pub const ANALYTIC_NOTE: &str = "analytic prediction — not numerically checked";

pub const SAMPSON_SIGN_NOTE: &str =
    "the constant-components rule is stated for the Sampson Laplacian with c > 0, while the Sampson Laplacian is otherwise the c = -1 operator; encoded here with c > 0 as stated";

struct Rule {
    id: &'static str,
    anchor: &'static str,
    prediction: KernelPrediction,
    analytic: bool,
    holds: fn(&Hypotheses, usize, SymmetryClass) -> bool,
}

fn symmetric(class: SymmetryClass) -> bool {
    matches!(class, SymmetryClass::Symmetric | SymmetryClass::SymmetricTraceless)
}

fn noncompact(h: &Hypotheses) -> bool {
    h.complete && !h.compact
}

static RULES: &[Rule] = &[
    Rule {
        id: "traceless-nonnegative-sectional-closed",
        anchor: "then φ is a constant multiple of g at each point of U",
        prediction: KernelPrediction::Trivial,
        analytic: false,
        holds: |h, p, class| {
            p == 2
                && class == SymmetryClass::SymmetricTraceless
                && h.c > 0.0
                && h.compact
                && h.sec_sign.nonnegative()
                && (h.sec_sign.positive_somewhere() || h.irreducible())
        },
    },
    Rule {
        id: "symmetric-nonnegative-sectional-noncompact",
        anchor: "Then the vector space L^q(Ker Δ_L) is trivial for an arbitrary q ∈ [1,+∞)",
        prediction: KernelPrediction::Trivial,
        analytic: true,
        holds: |h, p, class| p >= 2 && symmetric(class) && h.c > 0.0 && noncompact(h) && h.sec_sign.nonnegative(),
    },
    Rule {
        id: "traceless-nonpositive-sectional-infinite-volume",
        anchor: "In particular, if vol(M,g) = +∞, then L^q(Ker Δ_L) is trivial",
        prediction: KernelPrediction::Trivial,
        analytic: true,
        holds: |h, p, class| {
            p >= 2
                && class == SymmetryClass::SymmetricTraceless
                && h.c < 0.0
                && noncompact(h)
                && h.volume_infinite
                && h.sec_sign.nonpositive()
        },
    },
    Rule {
        id: "forms-positive-curvature-operator",
        anchor: "if R̄ ≥ k > 0 at some point x ∈ M and T ∈ C^∞(Λ_p M) for all p ∈ {1,…,n−1} then T ≡ 0",
        prediction: KernelPrediction::Trivial,
        analytic: false,
        holds: |h, p, class| {
            class == SymmetryClass::Alternating
                && (2..h.n).contains(&p)
                && h.c > 0.0
                && h.compact
                && h.curvature_operator_sign.nonnegative()
                && h.curvature_operator_sign.positive_somewhere()
        },
    },
    Rule {
        id: "forms-negative-curvature-operator",
        anchor: "if R̄ ≤ k < 0 at some point x ∈ M and T ∈ C^∞(Λ^p M) for all p ∈ {1,…,n−1} then T ≡ 0",
        prediction: KernelPrediction::Trivial,
        analytic: false,
        holds: |h, p, class| {
            class == SymmetryClass::Alternating
                && (2..h.n).contains(&p)
                && h.c < 0.0
                && (h.compact || (h.complete && h.simply_connected))
                && h.curvature_operator_sign.nonpositive()
                && h.curvature_operator_sign.negative_somewhere()
        },
    },
    Rule {
        id: "nonnegative-curvature-operator-noncompact",
        anchor: "Then the vector space L^q(Ker Δ_L) is trivial for an arbitrary 1 ≤ q < +∞",
        prediction: KernelPrediction::Trivial,
        analytic: true,
        holds: |h, p, _| p >= 2 && h.c > 0.0 && noncompact(h) && h.curvature_operator_sign.nonnegative(),
    },
    Rule {
        id: "nonpositive-curvature-operator-infinite-volume",
        anchor: "In particular, if vol(M,g) = +∞, then T ≡ 0",
        prediction: KernelPrediction::Trivial,
        analytic: true,
        holds: |h, p, _| {
            p >= 2
                && h.c < 0.0
                && h.complete
                && h.simply_connected
                && h.volume_infinite
                && h.curvature_operator_sign.nonpositive()
        },
    },
    Rule {
        id: "one-forms-positive-ricci",
        anchor: "if the Ricci curvature is positive at some point of (M,g) or the holonomy of (M,g) is irreducible then the vector space L^2(Ker Δ_L) is trivial",
        prediction: KernelPrediction::Trivial,
        analytic: false,
        holds: |h, p, _| {
            p == 1
                && h.c == 1.0
                && (h.complete || h.compact)
                && h.ricci_sign.nonnegative()
                && (h.ricci_sign.positive_somewhere() || h.irreducible())
        },
    },
    Rule {
        id: "symmetric-positive-sectional-closed",
        anchor: "then φ is a constant multiple of g at each point of U",
        prediction: KernelPrediction::ConstantMultipleOfMetric,
        analytic: false,
        holds: |h, p, class| {
            p == 2
                && class == SymmetryClass::Symmetric
                && h.c > 0.0
                && h.compact
                && h.sec_sign.nonnegative()
                && (h.sec_sign.positive_somewhere() || h.irreducible())
        },
    },
    Rule {
        id: "nonnegative-curvature-operator-closed",
        anchor: "then ‖T‖² is a constant function and T is invariant under parallel translation",
        prediction: KernelPrediction::ParallelOnly,
        analytic: false,
        holds: |h, p, _| p >= 2 && h.c > 0.0 && h.compact && h.curvature_operator_sign.nonnegative(),
    },
    Rule {
        id: "nonpositive-curvature-operator-closed",
        anchor: "with negative semi-definite curvature operator R at each point … then ‖T‖² is a constant function and T is invariant under parallel translation",
        prediction: KernelPrediction::ParallelOnly,
        analytic: false,
        holds: |h, p, _| p >= 2 && h.c < 0.0 && h.compact && h.curvature_operator_sign.nonpositive(),
    },
    Rule {
        id: "nonpositive-curvature-operator-simply-connected",
        anchor: "If T ∈ L^q(Ker Δ_L) for some q ∈ (0,+∞), then ‖T‖ is a constant function and T is invariant under parallel translation",
        prediction: KernelPrediction::ParallelOnly,
        analytic: true,
        holds: |h, p, _| p >= 2 && h.c < 0.0 && h.complete && h.simply_connected && h.curvature_operator_sign.nonpositive(),
    },
    Rule {
        id: "one-forms-nonnegative-ricci",
        anchor: "if (M,g) is a Riemannian complete manifold with nonnegative Ricci curvature, then L^2(Ker Δ_L) consists of parallel one-forms",
        prediction: KernelPrediction::ParallelOnly,
        analytic: false,
        holds: |h, p, _| p == 1 && h.c == 1.0 && h.complete && h.ricci_sign.nonnegative(),
    },
    Rule {
        id: "symmetric-nonnegative-sectional-constant-components",
        anchor: "consists of constant symmetric 2-tensors",
        prediction: KernelPrediction::ConstantComponents,
        analytic: false,
        holds: |h, p, class| p == 2 && symmetric(class) && h.c > 0.0 && h.compact && h.sec_sign.nonnegative(),
    },
];

/// Pure rule evaluation on prepared hypotheses.
pub fn classify_hypotheses(h: &Hypotheses, p: usize, class: SymmetryClass) -> Verdict {
    let applies_to = (p, class, h.c);
    for rule in RULES {
        if (rule.holds)(h, p, class) {
            let mut notes = Vec::new();
            // Noncompact rules are only analytic when the space really is noncompact.
            let analytic_only = rule.analytic && !h.compact;
            if analytic_only {
                notes.push(ANALYTIC_NOTE.to_string());
            }
            if rule.prediction == KernelPrediction::ConstantComponents {
                notes.push(SAMPSON_SIGN_NOTE.to_string());
            }
            if p == 2 && symmetric(class) && h.c == 1.0 && h.irreducible == Some(false) {
                notes.push("reducible holonomy: a TT-tensor in the kernel exists".to_string());
            }
            return Verdict {
                predicted_kernel: rule.prediction,
                rule_fired: rule.id.to_string(),
                anchor: rule.anchor.to_string(),
                applies_to,
                analytic_only,
                notes,
            };
        }
    }
    let mut notes = vec![format!(
        "no rule applies: curvature operator {}, sectional {}, Ricci {}, c = {}",
        h.curvature_operator_sign.symbol(),
        h.sec_sign.symbol(),
        h.ricci_sign.symbol(),
        h.c
    )];
    if p == 2 && symmetric(class) && h.c == 1.0 && h.irreducible == Some(false) {
        notes.push("reducible holonomy: a TT-tensor in the kernel exists".to_string());
    }
    Verdict {
        predicted_kernel: KernelPrediction::NoPrediction,
        rule_fired: String::new(),
        anchor: String::new(),
        applies_to,
        analytic_only: false,
        notes,
    }
}

/// Predicted kernel of Δ̄ + cℜ_p on `class` p-tensors over `space`.
pub fn classify_kernel(space: &ModelSpace, p: usize, class: SymmetryClass, c: f64, overrides: &HypothesisOverrides) -> Result<Verdict> {
    if p == 0 {
        return Err(CheckerError::Precondition("rules concern tensors of order p >= 1".into()));
    }
    if p > tensor_core::MAX_ORDER {
        return Err(CheckerError::Capability(format!("order {p} exceeds {}", tensor_core::MAX_ORDER)));
    }
    let h = Hypotheses::from_space(space, c)?.with_overrides(overrides);
    Ok(classify_hypotheses(&h, p, class))
}

fn einstein_scalar(space: &ModelSpace) -> Result<(CurvatureData, f64)> {
    if !space.is_einstein() {
        return Err(CheckerError::Capability(format!("{space} is not an Einstein space")));
    }
    let c = space.curvature()?;
    let s = c.scalar();
    Ok((c, s))
}

pub const STABILITY_ANCHOR: &str = "If K_min ≥ s/n², then (M, g) is not an unstable manifold and does not admit infinitesimal Einstein deformations";
pub const A0_ANCHOR: &str = "If a_0 < max{−s/n; s/(2n)}, then g has no infinitesimal Einstein deformations";
pub const EIGEN_LINK_ANCHOR: &str = "consists of eigentensors of the Einstein operator Δ_E = Δ̄ − 2R̊ with eigenvalues equal to −2s/n";

/// K_min ≥ s/n² on a closed Einstein space with s ≠ 0.
pub fn einstein_stability(space: &ModelSpace) -> Result<Verdict> {
    let (curv, s) = einstein_scalar(space)?;
    let n = curv.n();
    let (k_min, _) = sec_extremes(&curv, SEC_BUDGET);
    let threshold = s / (n * n) as f64;
    let applies_to = (2, SymmetryClass::SymmetricTraceless, 1.0);
    let mut notes = vec![format!("K_min = {k_min}, s/n^2 = {threshold}")];
    let tol = sign_tol(s.abs());
    if s.abs() <= tol {
        notes.push("s = 0 violates the nonzero scalar curvature hypothesis; Ricci-flat case: Δ_L = Δ_E, so TT-tensors in Ker Δ_L are exactly the infinitesimal Einstein deformations".into());
        return Ok(Verdict { predicted_kernel: KernelPrediction::NoPrediction, rule_fired: String::new(), anchor: String::new(), applies_to, analytic_only: false, notes });
    }
    let compact = space.topology().compact;
    let holds = k_min >= threshold - tol;
    if holds && compact {
        notes.push("not unstable; no infinitesimal Einstein deformations".into());
        return Ok(Verdict {
            predicted_kernel: KernelPrediction::Trivial,
            rule_fired: "einstein-stability".into(),
            anchor: STABILITY_ANCHOR.into(),
            applies_to,
            analytic_only: false,
            notes,
        });
    }
    if !holds {
        notes.push(format!("failing inequality: K_min = {k_min} < s/n^2 = {threshold}"));
    }
    if !compact {
        notes.push("failing hypothesis: the space is not closed".into());
    }
    Ok(Verdict { predicted_kernel: KernelPrediction::NoPrediction, rule_fired: String::new(), anchor: String::new(), applies_to, analytic_only: false, notes })
}

/// a₀ < max{−s/n, s/(2n)}, strictly.
pub fn a0_criterion(space: &ModelSpace) -> Result<Verdict> {
    let (curv, s) = einstein_scalar(space)?;
    let n = curv.n() as f64;
    let a0 = a0_estimate(&curv);
    let threshold = (-s / n).max(s / (2.0 * n));
    let applies_to = (2, SymmetryClass::SymmetricTraceless, 1.0);
    let mut notes = vec![format!("a0 = {a0}, max(-s/n, s/(2n)) = {threshold}")];
    if a0 < threshold - sign_tol(threshold.abs()) {
        notes.push("no infinitesimal Einstein deformations".into());
        Ok(Verdict {
            predicted_kernel: KernelPrediction::Trivial,
            rule_fired: "a0-criterion".into(),
            anchor: A0_ANCHOR.into(),
            applies_to,
            analytic_only: false,
            notes,
        })
    } else {
        notes.push(format!("failing inequality: a0 = {a0} is not < {threshold}"));
        Ok(Verdict { predicted_kernel: KernelPrediction::NoPrediction, rule_fired: String::new(), anchor: String::new(), applies_to, analytic_only: false, notes })
    }
}

/// The Δ_E eigenvalue carried by every symmetric Ker Δ_L field: −2s/n.
pub fn lichnerowicz_einstein_eigen_link(s: f64, n: usize) -> f64 {
    -2.0 * s / n as f64
}

/// Outcome of comparing a verdict with a computed kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Consistency {
    pub consistent: bool,
    /// Largest defect measured against the verdict (0 for trivial/no prediction).
    pub worst_defect: f64,
    pub detail: String,
}

/// Checks a computed kernel against a verdict: empty for `trivial`, ‖DF‖ below
/// `grid_tol` for `parallel_only`/`constant_components`, and F parallel to g
/// within `grid_tol` for `constant_multiple_of_metric`.
pub fn check_against_kernel(verdict: &Verdict, report: &SpectralReport, grid_tol: f64) -> Result<Consistency> {
    let k = &report.kernel_basis;
    match verdict.predicted_kernel {
        KernelPrediction::NoPrediction => Ok(Consistency { consistent: true, worst_defect: 0.0, detail: "no prediction".into() }),
        KernelPrediction::Trivial => Ok(Consistency {
            consistent: report.kernel_dim == 0,
            worst_defect: 0.0,
            detail: format!("kernel_dim = {}", report.kernel_dim),
        }),
        KernelPrediction::ParallelOnly | KernelPrediction::ConstantComponents => {
            let mut worst = 0.0f64;
            for f in k {
                worst = worst.max(covariant_derivative(f)?.norm() / f.norm().max(f64::MIN_POSITIVE));
            }
            Ok(Consistency { consistent: worst < grid_tol, worst_defect: worst, detail: format!("max ‖DF‖/‖F‖ = {worst:e} over {} kernel fields", k.len()) })
        }
        KernelPrediction::ConstantMultipleOfMetric => {
            let mut worst = 0.0f64;
            for f in k {
                if f.p() != 2 {
                    return Err(CheckerError::Precondition("metric comparison needs 2-tensors".into()));
                }
                let g = TensorField::metric(f.grid().clone()).with_class(f.class());
                let coef = f.inner(&g)? / g.inner(&g)?;
                let defect = f.add_scaled(-coef, &g)?.norm() / f.norm().max(f64::MIN_POSITIVE);
                worst = worst.max(defect);
            }
            Ok(Consistency { consistent: worst < grid_tol, worst_defect: worst, detail: format!("max ‖F − (⟨F,g⟩/⟨g,g⟩)g‖/‖F‖ = {worst:e}") })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenLinkCheck {
    /// −2s/n.
    pub expected: f64,
    /// max ‖Δ_E F − (−2s/n) F‖ / ‖F‖ over the supplied fields.
    pub max_residual: f64,
    /// ⟨Δ_E F, F⟩ / ⟨F, F⟩ per field.
    pub quadratic_forms: Vec<f64>,
}

/// Applies the assembled Δ_E to kernel fields of Δ_L (c = 1) and measures how
/// far each is from the eigenvalue −2s/n.
pub fn check_eigen_link(space: &ModelSpace, kernel: &[TensorField]) -> Result<EigenLinkCheck> {
    let (curv, s) = einstein_scalar(space)?;
    let expected = lichnerowicz_einstein_eigen_link(s, curv.n());
    let mut max_residual = 0.0f64;
    let mut quadratic_forms = Vec::with_capacity(kernel.len());
    for f in kernel {
        let op = assemble(space, f.p(), f.class(), OperatorKind::Einstein, &f.grid().resolution())?;
        let ef = op.apply(f)?;
        let nf = f.norm().max(f64::MIN_POSITIVE);
        max_residual = max_residual.max(ef.add_scaled(-expected, f)?.norm() / nf);
        quadratic_forms.push(ef.inner(f)? / (nf * nf));
    }
    Ok(EigenLinkCheck { expected, max_residual, quadratic_forms })
}
