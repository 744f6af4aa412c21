//! Line-oriented scenario documents.
//!
//! ```text
//! [scenario]
//! operation = dispersion
//! variant = SPACE_ONLY
//! p = 0.1:1:0.1      # inclusive range start:stop:step
//! m0 = 0, 0.1        # comma list
//! ```
//!
//! Numeric keys accept single values, comma lists and ranges; a sweep runs
//! the cartesian product of every numeric key in document order.

use std::path::PathBuf;

use dst_core::{DiscretenessVariant, EnergyConvention, Overrides, RelationForm, UnitPreset};

use crate::error::{Location, Result, ScenarioError};

/// Upper bound on the number of sweep points.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub location: Location,
}

impl Entry {
    pub fn flag(key: &str, value: impl Into<String>) -> Self {
        Entry {
            key: key.to_owned(),
            value: value.into(),
            location: Location::Flag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    /// Strictly positive; a range starting at 0 skips its start.
    Positive,
    Count,
    Choice(&'static [&'static str]),
    Path,
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
}

#[derive(Debug, Clone, Copy)]
pub struct ModeSpec {
    pub name: &'static str,
    pub keys: &'static [&'static str],
}

#[derive(Debug, Clone, Copy)]
pub struct OpSpec {
    pub keys: &'static [KeySpec],
    /// The first mode is the default. Operations with a single mode do not
    /// accept a `mode` key.
    pub modes: &'static [ModeSpec],
}

const fn key(name: &'static str, kind: Kind) -> KeySpec {
    KeySpec { name, kind }
}

const fn mode(name: &'static str, keys: &'static [&'static str]) -> ModeSpec {
    ModeSpec { name, keys }
}

use Kind::{Choice, Count, Path, Positive, Real};

const BRANCHES: &[&str] = &["LOW_P", "HIGH_P"];
const AXES: &[&str] = &["SPACE", "TIME"];
const WELL_MODELS: &[&str] = &["PAPER_FORMULA", "SPATIAL_QUANTIZATION", "NUMERIC"];
const TIME_CORRECTIONS: &[&str] = &["PER_MODE", "NONE"];
const POTENTIALS: &[&str] = &["FREE", "HARMONIC"];
const FORMULAS: &[&str] = &["FIRST_ORDER", "EXACT"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operation {
    Wavelength,
    Period,
    Transform,
    Dispersion,
    Mass,
    Well,
    Uncertainty,
    Evolve,
    Tof,
    Bound,
}

impl Operation {
    pub const ALL: [Operation; 10] = [
        Operation::Wavelength,
        Operation::Period,
        Operation::Transform,
        Operation::Dispersion,
        Operation::Mass,
        Operation::Well,
        Operation::Uncertainty,
        Operation::Evolve,
        Operation::Tof,
        Operation::Bound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Wavelength => "wavelength",
            Operation::Period => "period",
            Operation::Transform => "transform",
            Operation::Dispersion => "dispersion",
            Operation::Mass => "mass",
            Operation::Well => "well",
            Operation::Uncertainty => "uncertainty",
            Operation::Evolve => "evolve",
            Operation::Tof => "tof",
            Operation::Bound => "bound",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == name)
    }

    pub fn spec(self) -> &'static OpSpec {
        match self {
            Operation::Wavelength => &WAVELENGTH_SPEC,
            Operation::Period => &PERIOD_SPEC,
            Operation::Transform => &TRANSFORM_SPEC,
            Operation::Dispersion => &DISPERSION_SPEC,
            Operation::Mass => &MASS_SPEC,
            Operation::Well => &WELL_SPEC,
            Operation::Uncertainty => &UNCERTAINTY_SPEC,
            Operation::Evolve => &EVOLVE_SPEC,
            Operation::Tof => &TOF_SPEC,
            Operation::Bound => &BOUND_SPEC,
        }
    }
}

const WAVELENGTH_SPEC: OpSpec = OpSpec {
    keys: &[
        key("p", Positive),
        key("lambda", Positive),
        key("branch", Choice(BRANCHES)),
    ],
    modes: &[
        mode("FORWARD", &["p"]),
        mode("INVERSE", &["lambda", "branch"]),
        mode("EXTREMAL", &[]),
    ],
};

const PERIOD_SPEC: OpSpec = OpSpec {
    keys: &[key("E", Positive)],
    modes: &[mode("FORWARD", &["E"])],
};

const TRANSFORM_SPEC: OpSpec = OpSpec {
    keys: &[key("x", Real), key("y", Real), key("axis", Choice(AXES))],
    modes: &[mode("FORWARD", &["x", "axis"]), mode("INVERSE", &["y", "axis"])],
};

const DISPERSION_SPEC: OpSpec = OpSpec {
    keys: &[key("p", Real), key("m0", Real), key("E", Positive)],
    modes: &[mode("SOLVE", &["p", "m0"]), mode("RESIDUAL", &["p", "m0", "E"])],
};

const MASS_SPEC: OpSpec = OpSpec {
    keys: &[key("v", Real), key("m0", Real)],
    modes: &[mode("FORWARD", &["v", "m0"])],
};

const WELL_SPEC: OpSpec = OpSpec {
    keys: &[
        key("L", Positive),
        key("m", Positive),
        key("n_max", Count),
        key("model", Choice(WELL_MODELS)),
        key("n_grid", Count),
    ],
    modes: &[mode("LEVELS", &["L", "m", "n_max", "model", "n_grid"])],
};

const UNCERTAINTY_SPEC: OpSpec = OpSpec {
    keys: &[
        key("dp", Positive),
        key("p_bar", Real),
        key("sigma", Positive),
        key("k0", Real),
        key("n", Count),
        key("span", Positive),
    ],
    modes: &[
        mode("BOUND", &["dp"]),
        mode("MINIMUM", &[]),
        mode("EFFECTIVE", &["p_bar"]),
        mode("PACKET", &["sigma", "k0", "n", "span"]),
    ],
};

const EVOLVE_SPEC: OpSpec = OpSpec {
    keys: &[
        key("k", Real),
        key("m", Positive),
        key("sigma", Positive),
        key("x_center", Real),
        key("k0", Real),
        key("n", Count),
        key("x_min", Real),
        key("x_max", Real),
        key("dt", Positive),
        key("steps", Count),
        key("time_correction", Choice(TIME_CORRECTIONS)),
        key("potential", Choice(POTENTIALS)),
        key("omega", Positive),
        key("every", Count),
        key("dump", Path),
    ],
    modes: &[
        mode(
            "RUN",
            &[
                "m",
                "sigma",
                "x_center",
                "k0",
                "n",
                "x_min",
                "x_max",
                "dt",
                "steps",
                "time_correction",
                "potential",
                "omega",
                "every",
                "dump",
            ],
        ),
        mode("MULTIPLIER", &["k", "m", "time_correction"]),
    ],
};

const TOF_SPEC: OpSpec = OpSpec {
    keys: &[key("p", Positive), key("D", Positive), key("formula", Choice(FORMULAS))],
    modes: &[mode("DELAY", &["p", "D", "formula"])],
};

const BOUND_SPEC: OpSpec = OpSpec {
    keys: &[key("L", Positive), key("m", Positive)],
    modes: &[mode("MEASURE", &["L", "m"]), mode("OPTIMAL", &["L"])],
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "CSV",
            OutputFormat::Json => "JSON",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [OutputFormat::Csv, OutputFormat::Json]
            .into_iter()
            .find(|f| f.name() == name)
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub operation: Operation,
    pub mode: &'static str,
    pub variant: DiscretenessVariant,
    pub form: RelationForm,
    pub units: UnitPreset,
    pub overrides: Overrides,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Numeric keys in document order with their expanded values.
    pub numbers: Vec<(&'static str, Vec<f64>)>,
    pub choices: Vec<(&'static str, &'static str)>,
    pub paths: Vec<(&'static str, PathBuf)>,
    /// Every explicit entry, for the metadata echo.
    pub echo: Vec<(String, String)>,
}

/// Split a document into entries, dropping comments, blank lines and the
/// `[scenario]` header.
pub fn read_entries(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let location = Location::Line(i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line == "[scenario]" {
                continue;
            }
            return Err(ScenarioError::at(
                location,
                format!("unknown section `{line}`; expected [scenario]"),
            ));
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ScenarioError::at(
                location,
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ScenarioError::at(location, "empty key or value"));
        }
        if entries.iter().any(|e: &Entry| e.key == key) {
            return Err(ScenarioError::at(location, format!("duplicate key `{key}`")));
        }
        entries.push(Entry {
            key: key.to_owned(),
            value: value.to_owned(),
            location,
        });
    }
    Ok(entries)
}

/// Parse a document with NATURAL as the default unit preset.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::from_entries(read_entries(text)?, UnitPreset::Natural)
}

/// Replace entries of `base` by `overrides` with the same key, appending new keys.
pub fn merge_entries(mut base: Vec<Entry>, overrides: Vec<Entry>) -> Vec<Entry> {
    for e in overrides {
        match base.iter_mut().find(|b| b.key == e.key) {
            Some(slot) => *slot = e,
            None => base.push(e),
        }
    }
    base
}

fn choice(location: Location, what: &str, value: &str, valid: &[&'static str]) -> Result<&'static str> {
    valid.iter().copied().find(|v| *v == value).ok_or_else(|| {
        ScenarioError::at(
            location,
            format!("unknown {what} `{value}`; expected one of {}", valid.join(", ")),
        )
    })
}

fn single_positive(location: Location, key: &str, value: &str) -> Result<f64> {
    match value.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(ScenarioError::at(
            location,
            format!("`{key}` must be a finite number > 0, got `{value}`"),
        )),
    }
}

fn number(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", text.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{}` is not finite", text.trim()))
    }
}

/// Expand `start:stop:step`. The stop value is included when it lies
/// within half a step of the last grid point.
fn expand_range(text: &str, skip_zero_start: bool) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("malformed range `{text}`; expected start:stop:step"));
    };
    let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
    if !(step > 0.0) {
        return Err(format!("range step must be > 0 in `{text}`"));
    }
    if stop < start {
        return Err(format!("range `{text}` is empty (stop < start)"));
    }
    let count = ((stop - start) / step + 0.5).floor() + 1.0;
    if count > MAX_POINTS as f64 {
        return Err(format!("range `{text}` has more than {MAX_POINTS} points"));
    }
    let first = usize::from(skip_zero_start && start == 0.0);
    let values: Vec<f64> = (first..count as usize)
        .map(|i| round_digits(start + step * i as f64))
        .collect();
    if values.is_empty() {
        return Err(format!("range `{text}` is empty once its zero start is skipped"));
    }
    Ok(values)
}

/// Round to 15 significant digits so `0.1:0.3:0.1` yields 0.3, not
/// 0.30000000000000004.
fn round_digits(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn expand_numbers(text: &str, kind: Kind) -> std::result::Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for item in text.split(',') {
        if item.contains(':') {
            values.extend(expand_range(item.trim(), kind == Positive)?);
        } else {
            values.push(number(item)?);
        }
    }
    if kind == Count {
        if let Some(bad) = values.iter().find(|v| v.fract() != 0.0 || **v < 0.0 || **v > 9.0e15) {
            return Err(format!("expected a non-negative integer, got {bad}"));
        }
    }
    Ok(values)
}

impl ScenarioConfig {
    /// Validate entries; `default_units` applies when no `units` entry is given.
    pub fn from_entries(entries: Vec<Entry>, default_units: UnitPreset) -> Result<Self> {
        let op_entry = entries
            .iter()
            .find(|e| e.key == "operation")
            .ok_or_else(|| ScenarioError::config(None, "missing `operation`"))?;
        let operation = Operation::from_name(&op_entry.value).ok_or_else(|| {
            let names: Vec<_> = Operation::ALL.iter().map(|o| o.name()).collect();
            ScenarioError::at(
                op_entry.location,
                format!(
                    "unknown operation `{}`; expected one of {}",
                    op_entry.value,
                    names.join(", ")
                ),
            )
        })?;
        let spec = operation.spec();
        let mode_names: Vec<&'static str> = spec.modes.iter().map(|m| m.name).collect();
        let mode = match entries.iter().find(|e| e.key == "mode") {
            Some(e) if spec.modes.len() > 1 => choice(e.location, "mode", &e.value, &mode_names)?,
            Some(e) => {
                return Err(ScenarioError::at(
                    e.location,
                    format!("operation `{}` has no modes", operation.name()),
                ))
            }
            None => mode_names[0],
        };
        let mode_spec = spec.modes.iter().find(|m| m.name == mode).expect("mode from spec");

        let mut cfg = ScenarioConfig {
            operation,
            mode,
            variant: DiscretenessVariant::Both,
            form: RelationForm::Linear,
            units: default_units,
            overrides: Overrides::default(),
            format: OutputFormat::Csv,
            out: None,
            numbers: Vec::new(),
            choices: Vec::new(),
            paths: Vec::new(),
            echo: entries.iter().map(|e| (e.key.clone(), e.value.clone())).collect(),
        };

        for e in &entries {
            let (loc, value) = (e.location, e.value.as_str());
            match e.key.as_str() {
                "operation" | "mode" => {}
                "variant" => {
                    cfg.variant = DiscretenessVariant::from_name(value).ok_or_else(|| {
                        let names: Vec<_> = DiscretenessVariant::ALL.iter().map(|v| v.name()).collect();
                        ScenarioError::at(
                            loc,
                            format!("unknown variant `{value}`; expected one of {}", names.join(", ")),
                        )
                    })?
                }
                "form" => {
                    cfg.form = RelationForm::from_name(value).ok_or_else(|| {
                        let names: Vec<_> = RelationForm::ALL.iter().map(|v| v.name()).collect();
                        ScenarioError::at(
                            loc,
                            format!("unknown form `{value}`; expected one of {}", names.join(", ")),
                        )
                    })?
                }
                "units" => cfg.units = parse_units(loc, value)?,
                "format" | "output" => {
                    cfg.format = OutputFormat::from_name(value).ok_or_else(|| {
                        ScenarioError::at(loc, format!("unknown format `{value}`; expected one of CSV, JSON"))
                    })?
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                "scale.h" => cfg.overrides.h = Some(single_positive(loc, &e.key, value)?),
                "scale.c" => cfg.overrides.c = Some(single_positive(loc, &e.key, value)?),
                "scale.G" => cfg.overrides.g = Some(single_positive(loc, &e.key, value)?),
                "scale.energy_convention" => {
                    cfg.overrides.energy = Some(EnergyConvention::from_name(value).ok_or_else(|| {
                        ScenarioError::at(
                            loc,
                            format!("unknown energy convention `{value}`; expected one of H_OVER_TP, HBAR_OVER_TP"),
                        )
                    })?)
                }
                name => {
                    let Some(ks) = spec.keys.iter().find(|k| k.name == name) else {
                        let valid: Vec<_> = spec.keys.iter().map(|k| k.name).collect();
                        return Err(ScenarioError::at(
                            loc,
                            format!(
                                "unknown key `{name}` for operation `{}`; valid keys: {}",
                                operation.name(),
                                valid.join(", ")
                            ),
                        ));
                    };
                    if !mode_spec.keys.contains(&ks.name) {
                        return Err(ScenarioError::at(
                            loc,
                            format!(
                                "key `{name}` is not used by `{}` in mode {mode}; keys for this mode: {}",
                                operation.name(),
                                mode_spec.keys.join(", ")
                            ),
                        ));
                    }
                    match ks.kind {
                        Choice(valid) => cfg.choices.push((ks.name, choice(loc, ks.name, value, valid)?)),
                        Path => cfg.paths.push((ks.name, PathBuf::from(value))),
                        kind => {
                            let values = expand_numbers(value, kind).map_err(|m| ScenarioError::at(loc, m))?;
                            cfg.numbers.push((ks.name, values));
                        }
                    }
                }
            }
        }
        let total = cfg.numbers.iter().try_fold(1usize, |acc, (_, v)| {
            acc.checked_mul(v.len()).filter(|n| *n <= MAX_POINTS)
        });
        if total.is_none() {
            return Err(ScenarioError::config(
                None,
                format!("sweep exceeds {MAX_POINTS} points"),
            ));
        }
        Ok(cfg)
    }

    pub fn choice(&self, key: &str) -> Option<&'static str> {
        self.choices.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    pub fn path(&self, key: &str) -> Option<&std::path::Path> {
        self.paths.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_path())
    }

    /// Number of sweep points.
    pub fn point_count(&self) -> usize {
        self.numbers.iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_sweep(&self) -> bool {
        self.point_count() > 1
    }

    /// Cartesian product of the numeric keys; the last key varies fastest.
    pub fn points(&self) -> Vec<Vec<(&'static str, f64)>> {
        let mut points = vec![Vec::with_capacity(self.numbers.len())];
        for (key, values) in &self.numbers {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((*key, v));
                        q
                    })
                })
                .collect();
        }
        points
    }
}

pub fn parse_units(location: Location, value: &str) -> Result<UnitPreset> {
    UnitPreset::from_name(value).ok_or_else(|| {
        let names: Vec<_> = UnitPreset::ALL.iter().map(|u| u.name()).collect();
        ScenarioError::at(
            location,
            format!("unknown units `{value}`; expected one of {}", names.join(", ")),
        )
    })
}
