//! Scenario descriptions, the built-in registry, and report assembly.

mod diagonal;
mod function;
mod registry;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::certify::{certify, Certificates, Evolution, Hypotheses, Witness};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::func::{Family, ShiftVariant};
use crate::seminorm::{BoundedSetGen, SeminormTag, SeqProfile};
use crate::verdict::{hierarchy_check, HierarchyCheck, Property, Verdicts};

pub use diagonal::DiagonalEvolution;
pub use function::FunctionEvolution;
pub use registry::{find, registry};

pub const REPORT_VERSION: u32 = 1;

/// A bounded set in a function space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionSet {
    Gen(BoundedSetGen),
    Members { label: String, members: Vec<Family> },
}

/// How the semigroup acts, with its desk-scale families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SemigroupSpec {
    /// `e^{q_j t} x_j` on `c0(A)` (`space = "c0:<matrix>"`), `phi-supnorm`
    /// or `phi-direct-sum`.
    Diagonal {
        space: String,
        exponents: String,
        seminorms: Vec<SeminormTag>,
        /// Adds `KotheSup(k)` for `k` on the ladder up to the truncation.
        #[serde(default)]
        ladder_levels: bool,
        points: Vec<SeqProfile>,
        sets: Vec<BoundedSetGen>,
    },
    /// Right shift `f(s - t)`.
    Shift { variant: ShiftVariant, seminorms: Vec<SeminormTag>, points: Vec<Family>, sets: Vec<FunctionSet> },
    /// `exp(∫_x^{x+t} q) f(x + t)`.
    Transport { q: ScalarField, seminorms: Vec<SeminormTag>, points: Vec<Family>, sets: Vec<FunctionSet> },
    /// `e^{q(x) t} f(x)`.
    Multiply { q: ScalarField, seminorms: Vec<SeminormTag>, points: Vec<Family>, sets: Vec<FunctionSet> },
    /// `e^{qt - x^2 t} f̂(x)` on the Fourier side; Schwartz seminorms act on
    /// the Fourier image of `S`, Sobolev ones on `Ĥ`.
    Heat { q_re: f64, #[serde(default)] q_im: f64, seminorms: Vec<SeminormTag>, points: Vec<Family>, sets: Vec<FunctionSet> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    /// Where the example sits in the source; required for `expected`.
    #[serde(default)]
    pub reference: Option<String>,
    #[serde(default)]
    pub description: String,
    pub semigroup: SemigroupSpec,
    #[serde(default)]
    pub hypotheses: Hypotheses,
    #[serde(default)]
    pub expected: Option<Verdicts>,
    pub truncation: usize,
    #[serde(default)]
    pub t_max: Option<f64>,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.expected.is_some() && self.reference.is_none() {
            return Err(Error::InvalidArgument(format!("scenario {}: expected verdicts need a reference", self.name)));
        }
        if self.truncation < 2 {
            return Err(Error::InvalidArgument(format!("scenario {}: truncation must be at least 2", self.name)));
        }
        let empty = match &self.semigroup {
            SemigroupSpec::Diagonal { seminorms, ladder_levels, .. } => seminorms.is_empty() && !ladder_levels,
            SemigroupSpec::Shift { seminorms, .. }
            | SemigroupSpec::Transport { seminorms, .. }
            | SemigroupSpec::Multiply { seminorms, .. }
            | SemigroupSpec::Heat { seminorms, .. } => seminorms.is_empty(),
        };
        if empty {
            return Err(Error::Config { path: "semigroup.seminorms".into(), message: "seminorm family is empty".into() });
        }
        Ok(())
    }

    pub fn evolution(&self) -> Result<Box<dyn Evolution>> {
        self.validate()?;
        Ok(match &self.semigroup {
            SemigroupSpec::Diagonal { .. } => Box::new(DiagonalEvolution::from_spec(&self.semigroup, self.t_max)?),
            _ => Box::new(FunctionEvolution::from_spec(&self.semigroup, self.t_max)?),
        })
    }
}

/// Seminorm, point and set labels the verdicts were computed over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Families {
    pub seminorms: Vec<String>,
    pub points: Vec<String>,
    pub sets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub version: u32,
    pub scenario: String,
    pub reference: Option<String>,
    /// Every verdict holds at this truncation, cross-checked at twice it.
    pub truncation: usize,
    pub verdicts: Verdicts,
    pub code: String,
    pub expected: Option<Verdicts>,
    pub certificates: Certificates,
    pub witnesses: Vec<Witness>,
    pub hierarchy: HierarchyCheck,
    pub truncation_sensitive: Vec<Property>,
    pub per_set_exponential: bool,
    pub hypotheses: Hypotheses,
    pub families: Families,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Match,
    Mismatch,
    TruncationSensitive,
    /// No expected verdicts to compare against.
    Unchecked,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Match | RunStatus::Unchecked => 0,
            RunStatus::Mismatch => 2,
            RunStatus::TruncationSensitive => 3,
        }
    }
}

impl StabilityReport {
    pub fn mismatches(&self) -> Vec<Property> {
        let Some(e) = &self.expected else { return Vec::new() };
        Property::ALL.into_iter().filter(|&p| e.get(p) != self.verdicts.get(p)).collect()
    }

    pub fn status(&self) -> RunStatus {
        if self.expected.is_none() {
            return RunStatus::Unchecked;
        }
        let m = self.mismatches();
        if m.is_empty() {
            RunStatus::Match
        } else if m.iter().all(|p| self.truncation_sensitive.contains(p)) {
            RunStatus::TruncationSensitive
        } else {
            RunStatus::Mismatch
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(e.to_string()))
    }
}

/// A finished run: the report plus the sampled series at the truncation.
pub struct Run {
    pub report: StabilityReport,
    pub times: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
}

impl Run {
    /// Rows `t,series_label,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,series_label,value")?;
        for (label, values) in &self.series {
            let label = label.replace('"', "'");
            for (t, v) in self.times.iter().zip(values) {
                writeln!(w, "{t:e},\"{label}\",{v:e}")?;
            }
        }
        Ok(())
    }
}

/// Optional run-time overrides.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub truncation: Option<usize>,
    pub t_max: Option<f64>,
}

pub fn run_spec(spec: &ScenarioSpec, overrides: Overrides) -> Result<Run> {
    let mut spec = spec.clone();
    if let Some(j) = overrides.truncation {
        spec.truncation = j;
    }
    if overrides.t_max.is_some() {
        spec.t_max = overrides.t_max;
    }
    let evo = spec.evolution()?;
    let (out, ctx) = certify(evo.as_ref(), spec.truncation, &spec.hypotheses)?;
    let hierarchy = hierarchy_check(&out.verdicts, spec.hypotheses.conditional_edge());
    let s = &ctx.at_j;
    let series = s.point_series.iter().chain(&s.set_series).map(|x| (format!("{} | {}", x.seminorm, x.target), x.values.clone())).collect();
    let report = StabilityReport {
        version: REPORT_VERSION,
        scenario: spec.name.clone(),
        reference: spec.reference.clone(),
        truncation: spec.truncation,
        code: out.verdicts.code(),
        verdicts: out.verdicts,
        expected: spec.expected,
        certificates: out.certificates,
        witnesses: out.witnesses,
        hierarchy,
        truncation_sensitive: out.truncation_sensitive,
        per_set_exponential: out.per_set_exponential,
        hypotheses: spec.hypotheses,
        families: Families { seminorms: s.seminorms.clone(), points: s.points.clone(), sets: s.sets.clone() },
        notes: evo.notes(spec.truncation),
    };
    Ok(Run { report, times: ctx.times, series })
}

pub fn run_scenario(name: &str, overrides: Overrides) -> Result<Run> {
    run_spec(&find(name)?, overrides)
}
