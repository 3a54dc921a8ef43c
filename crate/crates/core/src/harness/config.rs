use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use super::manufactured::{gamma_opt, manufactured_diffwave_with, manufactured_subdiffusion_with};
use crate::coefficients::CoefficientSet;
use crate::error::{FracError, Result};
use crate::kernels::KernelMode;
use crate::spatial::{H1Kind, SolverOptions};
use crate::steppers::{ProblemKind, ProblemSpec, PsiMode, SnapshotFormat, StepperOptions};

/// Grading exponent: a number, `"opt"`, or `"<c>/alpha"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Value(f64),
    Opt,
    /// `c / α`.
    OverAlpha(f64),
}

impl GammaSpec {
    pub fn resolve(&self, problem: &ProblemSpec) -> Result<f64> {
        let g = match *self {
            GammaSpec::Value(g) => g,
            GammaSpec::Opt => gamma_opt(problem)?,
            GammaSpec::OverAlpha(c) => c / problem.alpha,
        };
        if !(g >= 1.0 && g.is_finite()) {
            return Err(FracError::Config(format!("grading exponent must be >= 1, got {g}")));
        }
        Ok(g)
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Value(g) => write!(f, "{g}"),
            GammaSpec::Opt => f.write_str("opt"),
            GammaSpec::OverAlpha(c) => write!(f, "{c}/alpha"),
        }
    }
}

impl std::str::FromStr for GammaSpec {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("opt") {
            return Ok(GammaSpec::Opt);
        }
        if let Some(c) = s.strip_suffix("/alpha") {
            return c
                .trim()
                .parse()
                .map(GammaSpec::OverAlpha)
                .map_err(|_| FracError::Config(format!("bad gamma `{s}`")));
        }
        s.parse()
            .map(GammaSpec::Value)
            .map_err(|_| FracError::Config(format!("bad gamma `{s}`")))
    }
}

impl Serialize for GammaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GammaSpec::Value(g) => s.serialize_f64(*g),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for GammaSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = GammaSpec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, \"opt\" or \"<c>/alpha\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<GammaSpec, E> {
                Ok(GammaSpec::Value(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<GammaSpec, E> {
                Ok(GammaSpec::Value(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<GammaSpec, E> {
                Ok(GammaSpec::Value(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<GammaSpec, E> {
                v.parse().map_err(|e: FracError| E::custom(e.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

/// Table file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(FracError::Config(format!("unknown table format `{other}`"))),
        }
    }
}

/// Where and how results are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// File stem for the table, plot data and snapshots.
    pub name: String,
    pub formats: Vec<TableFormat>,
    pub plot_data: bool,
    /// Write the final level of every run.
    pub snapshots: Option<SnapshotFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            name: "study".into(),
            formats: vec![TableFormat::Csv, TableFormat::Markdown],
            plot_data: true,
            snapshots: None,
        }
    }
}

/// A convergence study, read from a single JSON document.
///
/// ```json
/// { "problem": "subdiffusion", "alphas": [0.7], "gammas": [1, "opt", "2.5/alpha"],
///   "n": [500], "m": [4, 8, 16, 32] }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Manufactured problem class.
    pub problem: ProblemKind,
    /// Coefficient preset, see [`CoefficientSet::preset`].
    pub coefficients: String,
    pub horizon: f64,
    pub alphas: Vec<f64>,
    pub gammas: Vec<GammaSpec>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub kernel: KernelMode,
    pub soe_epsilon: f64,
    pub solver: SolverOptions,
    pub psi_mode: PsiMode,
    pub norm: H1Kind,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Subdiffusion,
            coefficients: "variable".into(),
            horizon: 1.0,
            alphas: vec![0.5],
            gammas: vec![GammaSpec::Opt],
            n: vec![8, 16, 32],
            m: vec![400],
            kernel: KernelMode::Direct,
            soe_epsilon: 1e-12,
            solver: SolverOptions::default(),
            psi_mode: PsiMode::Auto,
            norm: H1Kind::Semi,
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str, len: usize| {
            if len == 0 {
                Err(FracError::Config(format!("`{name}` must not be empty")))
            } else {
                Ok(())
            }
        };
        empty("alphas", self.alphas.len())?;
        empty("gammas", self.gammas.len())?;
        empty("n", self.n.len())?;
        empty("m", self.m.len())?;
        if self.n.contains(&0) {
            return Err(FracError::Config("N values must be positive".into()));
        }
        if self.m.iter().any(|&m| m < 2) {
            return Err(FracError::Config("M values must be at least 2".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(FracError::Config("horizon must be positive".into()));
        }
        if !(self.soe_epsilon > 0.0 && self.soe_epsilon < 1.0) {
            return Err(FracError::Config("soe_epsilon must lie in (0,1)".into()));
        }
        CoefficientSet::preset(&self.coefficients)?;
        for &a in &self.alphas {
            let p = self.problem_for(a)?;
            for g in &self.gammas {
                g.resolve(&p)?;
            }
        }
        Ok(())
    }

    /// The manufactured problem for one fractional order.
    pub fn problem_for(&self, alpha: f64) -> Result<ProblemSpec> {
        let coeffs = CoefficientSet::preset(&self.coefficients)?;
        let p = match self.problem {
            ProblemKind::Subdiffusion => manufactured_subdiffusion_with(alpha, coeffs)?,
            ProblemKind::Diffusionwave => manufactured_diffwave_with(alpha, coeffs)?,
        };
        p.with_domain(crate::spatial::Rect::UNIT, self.horizon)
    }

    pub fn stepper_options(&self) -> StepperOptions {
        StepperOptions {
            solver: self.solver,
            kernel: self.kernel,
            soe_epsilon: self.soe_epsilon,
            psi_mode: self.psi_mode,
            storage: crate::steppers::Storage::Rolling,
        }
    }
}
