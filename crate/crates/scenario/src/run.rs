//! Sweep execution: one library call per point.

use std::fs::File;
use std::io::BufWriter;

use dst_core::dispersion::{
    dispersion_first_order, dispersion_residual, energy_nonrelativistic, photon_group_velocity_first_order,
    relativistic_mass, solve_energy, well_levels, WellModel,
};
use dst_core::evolve::{self, dump, kinetic_dispersion, mode_frequency, stationary_well, TimeCorrection};
use dst_core::kinematics::{
    debroglie_length, debroglie_period, extremal_scales, group_velocity, invert_length, invert_planck_transform,
    planck_transform, KinematicState,
};
use dst_core::phenomenology::{delay_sweep, DelayFormula};
use dst_core::uncertainty::{effective_planck, gup_minimum, gup_position_bound, gup_product_bound, packet_moments};
use dst_core::units::{length_measurement_uncertainty, make_scales, measurement_floor, optimal_clock_mass};
use dst_core::{Axis, Branch, EvolveOpts, Packet, Scales, Well};

use crate::config::{Operation, ScenarioConfig};
use crate::error::{Result, ScenarioError};
use crate::table::{Cell, ResultTable};

/// One sweep point with access to the scenario's fixed settings.
struct Point<'a> {
    cfg: &'a ScenarioConfig,
    values: &'a [(&'static str, f64)],
}

impl Point<'_> {
    fn get(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn num(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| {
            ScenarioError::config(
                None,
                format!(
                    "`{}` in mode {} requires `{key}`",
                    self.cfg.operation.name(),
                    self.cfg.mode
                ),
            )
        })
    }

    fn num_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    fn count_or(&self, key: &str, default: usize) -> usize {
        self.get(key).map_or(default, |v| v as usize)
    }

    fn choice_or(&self, key: &str, default: &'static str) -> &'static str {
        self.cfg.choice(key).unwrap_or(default)
    }
}

/// Output columns for the configured operation and mode.
fn output_columns(cfg: &ScenarioConfig) -> &'static [&'static str] {
    use Operation::*;
    match (cfg.operation, cfg.mode) {
        (Wavelength, "FORWARD") => &["lambda"],
        (Wavelength, "INVERSE") => &["p"],
        (Wavelength, _) => &["lambda_min", "p_star", "period_min", "E_star"],
        (Period, _) => &["period"],
        (Transform, "FORWARD") => &["y"],
        (Transform, _) => &["x"],
        (Dispersion, "SOLVE") => &[
            "E",
            "residual",
            "residual_first_order",
            "v_g",
            "v_g_first_order",
            "E_nonrel",
        ],
        (Dispersion, _) => &["residual", "residual_first_order", "v_g"],
        (Mass, _) => &["gamma", "m"],
        (Well, _) if cfg.choice("model") == Some("NUMERIC") => {
            &["n", "k", "E_unrevised", "E_numeric", "omega", "trans_planckian"]
        }
        (Well, _) => &["n", "E_unrevised", "E_revised"],
        (Uncertainty, "BOUND") => &["dx_min", "product_bound"],
        (Uncertainty, "MINIMUM") => &["dx_min", "dp_star"],
        (Uncertainty, "EFFECTIVE") => &["commutator_factor", "h_eff"],
        (Uncertainty, _) => &["x_mean", "p_mean", "dx", "dp", "product", "gup_bound"],
        (Evolve, "RUN") => &["t", "norm", "x_mean", "p_mean", "dx", "dp"],
        (Evolve, _) => &["kinetic", "omega"],
        (Tof, _) => &["wavelength", "v_g", "delay"],
        (Bound, "MEASURE") => &["quantum", "gravitational", "total", "floor"],
        (Bound, _) => &["m_star", "min_total", "floor"],
    }
}

/// Run every sweep point and collect the table.
///
/// A failing point aborts a single-point run. In a sweep its output cells
/// become absent and an `error` column carries the message.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    let scales = make_scales(cfg.units, &cfg.overrides)?;
    if cfg.path("dump").is_some() && cfg.is_sweep() {
        return Err(ScenarioError::config(None, "`dump` cannot be combined with a sweep"));
    }
    let outputs = output_columns(cfg);
    let inputs: Vec<&'static str> = cfg.numbers.iter().map(|(k, _)| *k).collect();
    let mut rows = Vec::new();
    let mut errors: Vec<(usize, String)> = Vec::new();
    for values in cfg.points() {
        let point = Point { cfg, values: &values };
        let prefix: Vec<Cell> = values.iter().map(|(_, v)| Cell::num(*v)).collect();
        match evaluate(&point, &scales) {
            Ok(out) => rows.extend(out.into_iter().map(|r| {
                debug_assert_eq!(r.len(), outputs.len());
                prefix.iter().cloned().chain(r).collect::<Vec<_>>()
            })),
            Err(e) if cfg.is_sweep() && !matches!(e, ScenarioError::Config { .. } | ScenarioError::Io { .. }) => {
                errors.push((rows.len(), e.to_string()));
                rows.push(prefix.into_iter().chain(outputs.iter().map(|_| Cell::Absent)).collect());
            }
            Err(e) => return Err(e),
        }
    }
    let mut columns: Vec<String> = inputs.iter().chain(outputs).map(|s| s.to_string()).collect();
    if !errors.is_empty() {
        columns.push("error".into());
        let mut pending = errors.into_iter().peekable();
        for (i, row) in rows.iter_mut().enumerate() {
            let text = match pending.peek() {
                Some((j, _)) if *j == i => pending.next().map(|(_, m)| m).unwrap_or_default(),
                _ => String::new(),
            };
            row.push(Cell::Text(text));
        }
    }
    Ok(ResultTable {
        metadata: metadata(cfg),
        columns,
        rows,
    })
}

fn metadata(cfg: &ScenarioConfig) -> Vec<(String, String)> {
    let echo = cfg
        .echo
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect::<Vec<_>>()
        .join("; ");
    [
        ("operation", cfg.operation.name().to_owned()),
        ("mode", cfg.mode.to_owned()),
        ("units", cfg.units.name().to_owned()),
        ("variant", cfg.variant.name().to_owned()),
        ("form", cfg.form.name().to_owned()),
        ("version", env!("CARGO_PKG_VERSION").to_owned()),
        ("config", echo),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v))
    .collect()
}

fn nums(values: impl IntoIterator<Item = f64>) -> Vec<Cell> {
    values.into_iter().map(Cell::num).collect()
}

fn evaluate(pt: &Point, s: &Scales) -> Result<Vec<Vec<Cell>>> {
    let cfg = pt.cfg;
    let (variant, form) = (cfg.variant, cfg.form);
    let row = |cells: Vec<Cell>| Ok(vec![cells]);
    match (cfg.operation, cfg.mode) {
        (Operation::Wavelength, "FORWARD") => row(nums([debroglie_length(pt.num("p")?, variant, form, s)?])),
        (Operation::Wavelength, "INVERSE") => {
            let branch = Branch::from_name(pt.choice_or("branch", "LOW_P")).expect("validated");
            row(nums([invert_length(pt.num("lambda")?, variant, form, branch, s)?]))
        }
        (Operation::Wavelength, _) => {
            let e = extremal_scales(variant, form, s);
            row(vec![
                Cell::num(e.lambda_min),
                Cell::opt(e.p_star),
                Cell::num(e.period_min),
                Cell::opt(e.e_star),
            ])
        }
        (Operation::Period, _) => row(nums([debroglie_period(pt.num("E")?, variant, form, s)?])),
        (Operation::Transform, mode) => {
            let axis = Axis::from_name(pt.choice_or("axis", "SPACE")).expect("validated");
            if mode == "FORWARD" {
                row(nums([planck_transform(pt.num("x")?, axis, s)?]))
            } else {
                row(nums([invert_planck_transform(pt.num("y")?, axis, s)?]))
            }
        }
        (Operation::Dispersion, "SOLVE") => {
            let (p, m0) = (pt.num("p")?, pt.num_or("m0", 0.0));
            let e = solve_energy(p, m0, variant, s)?;
            let state = KinematicState::new(p, e, m0)?;
            let photon = m0 == 0.0;
            row(vec![
                Cell::num(e),
                Cell::num(dispersion_residual(&state, variant, s)),
                Cell::num(dispersion_first_order(&state, variant, s)),
                Cell::num(group_velocity(e, p, s)?),
                if photon {
                    Cell::num(photon_group_velocity_first_order(p, variant, s))
                } else {
                    Cell::Absent
                },
                if photon {
                    Cell::Absent
                } else {
                    Cell::num(energy_nonrelativistic(p, m0, s)?)
                },
            ])
        }
        (Operation::Dispersion, _) => {
            let (p, m0, e) = (pt.num("p")?, pt.num_or("m0", 0.0), pt.num("E")?);
            let state = KinematicState::new(p, e, m0)?;
            row(nums([
                dispersion_residual(&state, variant, s),
                dispersion_first_order(&state, variant, s),
                group_velocity(e, p, s)?,
            ]))
        }
        (Operation::Mass, _) => {
            let (v, m0) = (pt.num("v")?, pt.num("m0")?);
            let continuum = Scales::continuum(s.h(), s.c())?;
            let gamma = relativistic_mass(v, 1.0, &continuum)?;
            row(nums([gamma, relativistic_mass(v, m0, s)?]))
        }
        (Operation::Well, _) => well(pt, s),
        (Operation::Uncertainty, mode) => match mode {
            "BOUND" => {
                let dp = pt.num("dp")?;
                row(nums([gup_position_bound(dp, s)?, gup_product_bound(dp, s)]))
            }
            "MINIMUM" => {
                let m = gup_minimum(s);
                row(nums([m.dx_min, m.dp_star]))
            }
            "EFFECTIVE" => {
                let e = effective_planck(pt.num("p_bar")?, s)?;
                row(nums([e.commutator_factor, e.h_eff]))
            }
            _ => {
                let sigma = pt.num_or("sigma", 1.0);
                let n = pt.count_or("n", 2048);
                let span = pt.num_or("span", 16.0 * sigma);
                let psi = Packet::gaussian(n, -span / 2.0, span / n as f64, 0.0, sigma, pt.num_or("k0", 0.0))?;
                let m = packet_moments(&psi, s)?;
                row(nums([m.x_mean, m.p_mean, m.dx, m.dp, m.product, m.gup_bound]))
            }
        },
        (Operation::Evolve, "RUN") => evolve_run(pt, s),
        (Operation::Evolve, _) => {
            let correction = TimeCorrection::from_name(pt.choice_or("time_correction", "PER_MODE")).expect("validated");
            let kinetic = kinetic_dispersion(pt.num("k")?, pt.num_or("m", 1.0), s);
            row(vec![
                Cell::num(kinetic),
                Cell::opt(mode_frequency(kinetic, correction, s).ok()),
            ])
        }
        (Operation::Tof, _) => {
            let formula = DelayFormula::from_name(pt.choice_or("formula", "EXACT")).expect("validated");
            let scenario = dst_core::Tof {
                distance: pt.num("D")?,
                momenta: vec![pt.num("p")?],
                variant,
                formula,
            };
            let mut rows = delay_sweep(&scenario, s)?;
            let r = rows.pop().expect("one momentum");
            // The wavelength column follows the configured form.
            let wavelength = debroglie_length(r.p, variant, form, s)?;
            row(nums([wavelength, r.group_velocity, r.delay]))
        }
        (Operation::Bound, "MEASURE") => {
            let l = pt.num("L")?;
            let u = length_measurement_uncertainty(l, pt.num("m")?, s)?;
            row(nums([u.quantum, u.gravitational, u.total, measurement_floor(l, s)]))
        }
        (Operation::Bound, _) => {
            let l = pt.num("L")?;
            let o = optimal_clock_mass(l, s)?;
            row(nums([o.mass, o.total, measurement_floor(l, s)]))
        }
    }
}

fn well(pt: &Point, s: &Scales) -> Result<Vec<Vec<Cell>>> {
    let spec = Well::new(pt.num("L")?, pt.num_or("m", 1.0), pt.count_or("n_max", 5))?;
    let model = pt.choice_or("model", "PAPER_FORMULA");
    if model == "NUMERIC" {
        let modes = stationary_well(&spec, pt.count_or("n_grid", 1024), s)?;
        return Ok(modes
            .into_iter()
            .map(|m| {
                vec![
                    Cell::count(m.n),
                    Cell::num(m.wavenumber),
                    Cell::num(spec.unrevised_level(m.n, s)),
                    Cell::num(m.energy),
                    Cell::opt(m.omega),
                    Cell::Text(m.trans_planckian.to_string()),
                ]
            })
            .collect());
    }
    let model = WellModel::from_name(model).expect("validated");
    Ok(well_levels(&spec, model, s)?
        .into_iter()
        .map(|l| vec![Cell::count(l.n), Cell::num(l.unrevised), Cell::opt(l.revised)])
        .collect())
}

fn evolve_run(pt: &Point, s: &Scales) -> Result<Vec<Vec<Cell>>> {
    let cfg = pt.cfg;
    let n = pt.count_or("n", 1024);
    let (x_min, x_max) = (pt.num_or("x_min", -32.0), pt.num_or("x_max", 32.0));
    if !(x_max > x_min) {
        return Err(ScenarioError::config(None, "`x_max` must exceed `x_min`"));
    }
    let mass = pt.num_or("m", 1.0);
    let spacing = (x_max - x_min) / n as f64;
    let psi = Packet::gaussian(
        n,
        x_min,
        spacing,
        pt.num_or("x_center", 0.0),
        pt.num_or("sigma", 1.0),
        pt.num_or("k0", 0.0),
    )?;
    let correction = TimeCorrection::from_name(pt.choice_or("time_correction", "PER_MODE")).expect("validated");
    let every = pt.count_or("every", 1).max(1);
    let mut opts = EvolveOpts::free(n, pt.num_or("dt", 0.01), pt.count_or("steps", 100), correction);
    opts.observe_every = every;
    if pt.choice_or("potential", "FREE") == "HARMONIC" {
        let omega = pt.num_or("omega", 1.0);
        opts.potential = (0..n)
            .map(|i| 0.5 * mass * omega * omega * psi.position(i).powi(2))
            .collect();
    }
    let dump_path = cfg.path("dump");
    if dump_path.is_some() {
        opts.record_every = Some(every);
    }
    let trajectory = evolve::evolve(&psi, &opts, mass, s)?;
    if let Some(path) = dump_path {
        let io_err = |source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        dump::write_frames(&mut w, trajectory.frames.iter().map(|(_, p)| p)).map_err(io_err)?;
        std::io::Write::flush(&mut w).map_err(io_err)?;
    }
    Ok(trajectory
        .observables
        .iter()
        .map(|o| nums([o.t, o.norm, o.x_mean, o.p_mean, o.dx, o.dp]))
        .collect())
}
