//! Job descriptions and input construction.
//!
//! Every subcommand lowers to a [`JobSpec`], which is also the schema of the
//! `run --job` file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use eqclass::localization::{build_projective_datum, build_wproj_cover_datum, LocalizationDatum};
use eqclass::quotient::IsolatedDefectDatum;
use eqclass::wire::{DatumWire, DefectWire};
use eqclass::Error;

pub const CONDUCTOR_ENV: &str = "EQCLASS_CONDUCTOR_MAX";
const DEFAULT_CONDUCTOR_MAX: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Genus,
    Class,
    QuotientGenus,
    WprojClass,
    Defect,
    Verify,
    Specialize,
    Datum,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Genus => "genus",
            CommandKind::Class => "class",
            CommandKind::QuotientGenus => "quotient-genus",
            CommandKind::WprojClass => "wproj-class",
            CommandKind::Defect => "defect",
            CommandKind::Verify => "verify",
            CommandKind::Specialize => "specialize",
            CommandKind::Datum => "datum",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Pretty,
}

/// Where the geometric input comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    /// Diagonal `Z/N` action on `P^n` with weights `a_0..a_n`.
    ProjectiveSpace {
        #[serde(default)]
        n: Option<usize>,
        weights: Vec<u64>,
        conductor: u32,
    },
    /// Exterior product of the listed inputs.
    Product(Vec<InputSpec>),
    /// The covering action of `G(w)` on `P^n` for `P^n(w)`.
    Wproj {
        weights: Vec<u64>,
    },
    Raw(DatumWire),
    Defect(DefectWire),
    /// A JSON file holding a datum, or a defect datum for `defect`.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: CommandKind,
    #[serde(default)]
    pub input: Option<InputSpec>,
    /// A group element label, or `all`.
    #[serde(default)]
    pub element: Option<String>,
    /// Rational value at which to evaluate `y`.
    #[serde(default)]
    pub y_value: Option<String>,
    /// Twist bundles, one per fixed component of each element.
    #[serde(default)]
    pub twist: Option<PathBuf>,
    #[serde(default)]
    pub normalized: bool,
    /// Check names for `verify`; empty or `all` runs everything.
    #[serde(default)]
    pub suite: Vec<String>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl JobSpec {
    pub fn new(command: CommandKind) -> Self {
        JobSpec {
            command,
            input: None,
            element: None,
            y_value: None,
            twist: None,
            normalized: false,
            suite: Vec::new(),
            output: None,
            format: Format::Json,
        }
    }

    /// Makes relative paths relative to `base`.
    pub fn rebase(&mut self, base: &Path) {
        fn fix(p: &mut PathBuf, base: &Path) {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        fn fix_input(i: &mut InputSpec, base: &Path) {
            match i {
                InputSpec::File(p) => fix(p, base),
                InputSpec::Product(fs) => fs.iter_mut().for_each(|f| fix_input(f, base)),
                _ => {}
            }
        }
        if let Some(i) = &mut self.input {
            fix_input(i, base);
        }
        for p in [&mut self.twist, &mut self.output].into_iter().flatten() {
            fix(p, base);
        }
    }
}

/// A failed job: exit code 2 for bad input, 1 for a failed computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn rejected(e: Error) -> Self {
        Failure::input(error_kind(&e), e.to_string())
    }

    pub fn compute(e: Error) -> Self {
        Failure {
            code: 1,
            kind: error_kind(&e).into(),
            message: e.to_string(),
        }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ConductorMismatch { .. } => "conductor-mismatch",
        Error::DivisionByZero => "division-by-zero",
        Error::PoleAtMinusOne(_) => "pole-at-minus-one",
        Error::PoleAtZero => "pole-at-zero",
        Error::ThetaZero => "theta-zero",
        Error::NonNilpotentArgument => "non-nilpotent-argument",
        Error::RingMismatch => "ring-mismatch",
        Error::NonUnitConstant(_) => "non-unit-constant",
        Error::UnknownElement(_) => "unknown-element",
        Error::InvalidDatum(_) => "invalid-datum",
        Error::InvalidRing(_) => "invalid-ring",
        Error::MissingTable => "missing-table",
        Error::InvalidGroup(_) => "invalid-group",
        Error::InvalidWeights(_) => "invalid-weights",
        Error::InvalidAngle(_) => "invalid-angle",
        Error::NonTrivialAngle { .. } => "non-trivial-angle",
        Error::ConductorTooLarge { .. } => "conductor-too-large",
    }
}

pub fn conductor_max() -> Result<u32, Failure> {
    match std::env::var(CONDUCTOR_ENV) {
        Err(_) => Ok(DEFAULT_CONDUCTOR_MAX),
        Ok(v) => v.trim().parse::<u32>().ok().filter(|&m| m > 0).ok_or_else(|| {
            Failure::input(
                "usage",
                format!("{CONDUCTOR_ENV} must be a positive integer, got `{v}`"),
            )
        }),
    }
}

fn guard(conductor: u64, max: u32) -> Result<(), Failure> {
    if conductor > max as u64 {
        let conductor = u32::try_from(conductor).unwrap_or(u32::MAX);
        return Err(Failure::rejected(Error::ConductorTooLarge { conductor, max }));
    }
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input("io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input("parse", format!("{}: {e}", path.display())))
}

/// A constructed input. Weighted projective covers stay symbolic until a
/// command needs the full datum.
pub enum Source {
    Datum(LocalizationDatum),
    Wproj(Vec<u64>),
    Defect {
        datum: IsolatedDefectDatum,
        group_order: u64,
    },
}

impl Source {
    pub fn datum(&self) -> Result<LocalizationDatum, Failure> {
        match self {
            Source::Datum(d) => Ok(d.clone()),
            Source::Wproj(w) => build_wproj_cover_datum(w).map_err(Failure::rejected),
            Source::Defect { .. } => Err(Failure::input("usage", "a defect datum is not a localization datum")),
        }
    }
}

fn defect_source(w: &DefectWire, max: u32) -> Result<Source, Failure> {
    if w.group_order == 0 {
        return Err(Failure::rejected(Error::InvalidGroup(
            "group order must be positive".into(),
        )));
    }
    let datum = IsolatedDefectDatum::try_from(w).map_err(Failure::rejected)?;
    let lcm = datum
        .points
        .values()
        .flatten()
        .flat_map(|p| &p.angles)
        .fold(1u64, |a, t| a.lcm(&t.den()));
    guard(lcm, max)?;
    Ok(Source::Defect {
        datum,
        group_order: w.group_order,
    })
}

fn datum_source(w: &DatumWire, max: u32) -> Result<Source, Failure> {
    guard(w.conductor as u64, max)?;
    LocalizationDatum::try_from(w)
        .map(Source::Datum)
        .map_err(Failure::rejected)
}

pub fn build(spec: &InputSpec, command: CommandKind, max: u32) -> Result<Source, Failure> {
    match spec {
        InputSpec::ProjectiveSpace { n, weights, conductor } => {
            guard(*conductor as u64, max)?;
            if weights.is_empty() {
                return Err(Failure::rejected(Error::InvalidWeights("no weights given".into())));
            }
            let n = n.unwrap_or(weights.len() - 1);
            build_projective_datum(n, weights, *conductor)
                .map(Source::Datum)
                .map_err(Failure::rejected)
        }
        InputSpec::Wproj { weights } => {
            if weights.is_empty() || weights.contains(&0) {
                return Err(Failure::rejected(Error::InvalidWeights(
                    "weights must be positive".into(),
                )));
            }
            guard(weights.iter().fold(1u64, |a, b| a.lcm(b)), max)?;
            Ok(Source::Wproj(weights.clone()))
        }
        InputSpec::Product(factors) => {
            let mut acc: Option<LocalizationDatum> = None;
            for f in factors {
                let d = build(f, CommandKind::Datum, max)?.datum()?;
                acc = Some(match acc {
                    None => d,
                    Some(a) => a.exterior_product(&d).map_err(Failure::rejected)?,
                });
            }
            let d = acc.ok_or_else(|| Failure::input("usage", "a product needs at least one factor"))?;
            guard(d.conductor() as u64, max)?;
            Ok(Source::Datum(d))
        }
        InputSpec::Raw(w) => datum_source(w, max),
        InputSpec::Defect(w) => defect_source(w, max),
        InputSpec::File(path) => {
            if command == CommandKind::Defect {
                defect_source(&read_json(path)?, max)
            } else {
                datum_source(&read_json(path)?, max)
            }
        }
    }
}
