//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check compares the library against an oracle computed here
//! (numeric search, bisection, closed forms or the `dst` binary).

use std::f64::consts::{E, PI, SQRT_2, TAU};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use dst_core::dispersion::{
    dispersion_residual, energy_nonrelativistic, photon_group_velocity_first_order, relativistic_mass, solve_energy,
    well_levels, WellModel, WellSpec,
};
use dst_core::evolve::{evolve, kinetic_dispersion, stationary_well, EvolveOptions, TimeCorrection};
use dst_core::kinematics::{
    debroglie_length, debroglie_period, extremal_scales, group_velocity, invert_planck_transform, planck_transform,
    transform_supremum, KinematicState,
};
use dst_core::phenomenology::{tof_delay, DelayFormula};
use dst_core::uncertainty::{gup_minimum, gup_position_bound, gup_product_bound};
use dst_core::units::{length_measurement_uncertainty, optimal_clock_mass};
use dst_core::{Axis, DiscretenessVariant, Packet, RelationForm, Scales, UnitPreset};

use DiscretenessVariant::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn within_ulps(a: f64, b: f64, ulps: f64) -> bool {
    (a - b).abs() <= ulps * f64::EPSILON * b.abs()
}

fn natural() -> Scales {
    Scales::preset(UnitPreset::Natural)
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let neg_at_a = f(a) < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Minimizer of a smooth unimodal `f` on `(0, hi]`.
///
/// Golden-section search in `ln x` only locates the argmin to about the
/// square root of machine precision, so the result is refined by bisecting
/// on the sign of the symmetric difference `f(x(1+δ)) − f(x(1−δ))`.
fn argmin(f: impl Fn(f64) -> f64, hi: f64) -> (f64, f64) {
    let (ln_x, _) = golden_section_min(|t| f(t.exp()), -14.0, hi.ln(), 200);
    let x0 = ln_x.exp();
    let slope = |x: f64| {
        let d = 1e-5 * x;
        f(x + d) - f(x - d)
    };
    let (mut lo, mut up) = (x0 * 0.999, x0 * 1.001);
    while slope(lo) >= 0.0 {
        lo *= 0.99;
    }
    while slope(up) <= 0.0 {
        up *= 1.01;
    }
    let x = bisect(slope, lo, up);
    (x, f(x))
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Deterministic uniform sampler (SplitMix64).
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        lo + (hi - lo) * ((z >> 11) as f64 / (1u64 << 53) as f64)
    }
}

fn minimal_length_and_period() -> Outcome {
    let s = natural();
    let mut worst: f64 = 0.0;
    let cases = [
        (RelationForm::Linear, 1.0, 2.0),
        (RelationForm::Exponential, (E / 2.0).sqrt(), SQRT_2),
    ];
    for (form, floor, at) in cases {
        let (p, lam) = argmin(|p| debroglie_length(p, Both, form, &s).unwrap(), 1e3);
        let (e, per) = argmin(|e| debroglie_period(e, Both, form, &s).unwrap(), 1e3);
        let ext = extremal_scales(Both, form, &s);
        for (got, want) in [
            (lam, floor),
            (p, at),
            (per, floor),
            (e, at),
            (ext.lambda_min, floor),
            (ext.period_min, floor),
        ] {
            worst = worst.max(rel(got, want));
        }
    }
    check(worst < 1e-9, format!("max relative error {worst:.2e} (tol 1e-9)"))
}

fn gup_floor() -> Outcome {
    let mut worst: f64 = 0.0;
    for l_p in [1.0, 0.3, 1e-3] {
        let s = Scales::natural_with_planck_length(l_p).unwrap();
        let m = gup_minimum(&s);
        let (dp, dx) = argmin(|dp| gup_position_bound(dp, &s).unwrap(), 1e6);
        for (got, want) in [(m.dx_min, l_p), (m.dp_star, 2.0 / l_p), (dx, l_p), (dp, 2.0 / l_p)] {
            worst = worst.max(rel(got, want));
        }
    }
    check(worst < 1e-9, format!("max relative error {worst:.2e} (tol 1e-9)"))
}

fn photon_exactness() -> Outcome {
    let s = natural();
    let worst = log_space(1e-6, 1.0, 1000)
        .into_iter()
        .map(|p| rel(solve_energy(p, 0.0, Both, &s).unwrap(), p))
        .fold(0.0, f64::max);
    let mut delays_zero = true;
    for p in log_space(1e-6, 1.0, 100) {
        for formula in [DelayFormula::FirstOrder, DelayFormula::Exact] {
            delays_zero &= tof_delay(p, 1e9, Both, formula, &s).unwrap() == 0.0;
        }
    }
    check(
        worst < 1e-12 && delays_zero,
        format!("max |E - pc|/pc {worst:.2e} over 6 decades (tol 1e-12), delays all zero: {delays_zero}"),
    )
}

fn closed_form_energy() -> Outcome {
    let s = natural();
    let mut rng = SplitMix(0xacce55);
    let (mut worst, mut worst_residual): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let (p, m0) = (rng.next(0.0, 1.0), rng.next(0.0, 0.3));
        let e = solve_energy(p, m0, Both, &s).unwrap();
        let residual = |e: f64| dispersion_residual(&KinematicState { p, e, m0 }, Both, &s);
        worst_residual = worst_residual.max(residual(e).abs());
        // The quadratic in E² has a second root near E² = 8/3; step outward
        // from the low end so the bracket holds only the physical one.
        let lo = p.max(m0) / 2.0;
        let mut hi = lo;
        while residual(hi) < 0.0 {
            hi *= 1.01;
        }
        worst = worst.max(rel(e, bisect(residual, lo, hi)));
    }
    check(
        worst < 1e-8 && worst_residual < 1e-10,
        format!("max relative error {worst:.2e} (tol 1e-8), max |residual| {worst_residual:.2e} (tol 1e-10)"),
    )
}

fn continuum_limits() -> Outcome {
    let mut failures = Vec::new();
    for (h, c, p, m0, len) in [
        (1.0, 1.0, 0.7, 0.3, 1.0),
        (6.626_070_15e-34, 299_792_458.0, 3e-27, 9.109e-31, 1e-9),
    ] {
        let s = Scales::continuum(h, c).unwrap();
        let mut expect = |name: &str, got: f64, want: f64| {
            if !within_ulps(got, want, 4.0) {
                failures.push(format!("{name} (h = {h:e}): {got:e} vs {want:e}"));
            }
        };
        for variant in DiscretenessVariant::ALL {
            for form in RelationForm::ALL {
                expect("lambda p", debroglie_length(p, variant, form, &s).unwrap() * p, h);
                let energy = p * c;
                expect("T E", debroglie_period(energy, variant, form, &s).unwrap() * energy, h);
            }
            let shell = (p * p * c * c + m0 * m0 * c.powi(4)).sqrt();
            expect("E", solve_energy(p, m0, variant, &s).unwrap(), shell);
        }
        let v = 0.6 * c;
        let gamma = 1.0 / (1.0 - (v / c).powi(2)).sqrt();
        expect("m", relativistic_mass(v, m0, &s).unwrap(), gamma * m0);
        expect(
            "E nonrel",
            energy_nonrelativistic(p, m0, &s).unwrap(),
            p * p / (2.0 * m0),
        );
        let dp = 5.0 * p;
        expect("dx dp", gup_position_bound(dp, &s).unwrap() * dp, h);
        expect("product bound", gup_product_bound(dp, &s), h);
        let spec = WellSpec::new(len, m0, 8).unwrap();
        for level in well_levels(&spec, WellModel::PaperFormula, &s).unwrap() {
            let n = level.n as f64;
            expect("well", level.revised.unwrap(), n * n * h * h / (8.0 * m0 * len * len));
        }
        for mode in stationary_well(&spec, 256, &s).unwrap() {
            let n = mode.n as f64;
            expect("well numeric", mode.energy, n * n * h * h / (8.0 * m0 * len * len));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "all relations within 4 ulp in natural and SI-like scales".to_owned()
        } else {
            failures.join("; ")
        },
    )
}

fn first_order_web() -> Outcome {
    let s = natural();
    let eps = f64::EPSILON;
    let (mut a, mut b, mut c): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for p in log_space(1e-6, 0.1, 2000) {
        for v in [SpaceOnly, TimeOnly, Both] {
            let approx = photon_group_velocity_first_order(p, v, &s);
            let exact = group_velocity(solve_energy(p, 0.0, v, &s).unwrap(), p, &s).unwrap();
            a = a.max((approx - exact).abs() / (p.powi(4) + 4.0 * eps));
        }
    }
    for i in 0..=2000 {
        let p = 0.3 * i as f64 / 2000.0;
        for m in [0.1, 1.0, 10.0] {
            let free = p * p / (2.0 * m);
            let expo = free * (-p * p / 2.0).exp();
            let e5 = energy_nonrelativistic(p, m, &s).unwrap();
            if free > 0.0 {
                b = b.max((e5 - expo).abs() / (free * (p.powi(4) + 4.0 * eps)));
            }
        }
    }
    for i in 1..=2000 {
        let k = PI * i as f64 / 2000.0;
        for m in [0.1, 1.0, 10.0] {
            let free = s.hbar() * s.hbar() * k * k / (2.0 * m);
            let e5 = energy_nonrelativistic(s.hbar() * k, m, &s).unwrap();
            let kin = kinetic_dispersion(k, m, &s);
            c = c.max((kin - e5).abs() / (free * ((k / TAU).powi(4) + 4.0 * eps)));
        }
    }
    check(
        a <= 1.0 && b <= 1.0 && c <= 1.0,
        format!("error / bound: (a) {a:.3} (b) {b:.3} (c) {c:.3}, each must be <= 1 (bounds carry a 4 eps rounding allowance)"),
    )
}

fn transform_integrity() -> Outcome {
    let s = natural();
    let mut rng = SplitMix(0x7a5f);
    let mut worst: f64 = 0.0;
    for axis in [Axis::Space, Axis::Time] {
        for _ in 0..1000 {
            let x = rng.next(0.0, SQRT_2);
            let back = invert_planck_transform(planck_transform(x, axis, &s).unwrap(), axis, &s).unwrap();
            worst = worst.max(rel(back, x));
        }
    }
    let grid_max = (0..=10_000)
        .map(|i| planck_transform(10.0 * i as f64 / 10_000.0, Axis::Space, &s).unwrap())
        .fold(0.0, f64::max);
    let sup = transform_supremum(Axis::Space, &s);
    let closed = SQRT_2 * (-0.5f64).exp();
    let ok = worst < 1e-10 && (grid_max - sup).abs() < 1e-6 && rel(sup, closed) < 1e-15 && sup <= 1.0;
    check(
        ok,
        format!(
            "round-trip max relative error {worst:.2e} (tol 1e-10); supremum {sup:.10} vs grid {grid_max:.10} \
             (tol 1e-6), below the value-space bound 1"
        ),
    )
}

fn free_density(x: f64, t: f64, center: f64, sigma0: f64, k0: f64, hbar: f64) -> f64 {
    let sigma = sigma0 * (1.0 + (hbar * t / (2.0 * sigma0 * sigma0)).powi(2)).sqrt();
    let mean = center + hbar * k0 * t;
    (-(x - mean).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * TAU.sqrt())
}

fn solver() -> Outcome {
    let (n, x0, dx) = (4096, -128.0, 256.0 / 4096.0);

    let s = natural();
    let psi = Packet::gaussian(n, x0, dx, 0.0, 2.0, 5.0).unwrap();
    let mut opts = EvolveOptions::free(n, 0.01, 10_000, TimeCorrection::PerMode);
    opts.observe_every = 10_000;
    let start = Instant::now();
    let tr = evolve(&psi, &opts, 1.0, &s).unwrap();
    let seconds = start.elapsed().as_secs_f64();
    let drift = tr.observables.iter().map(|o| (o.norm - 1.0).abs()).fold(0.0, f64::max);

    let s = Scales::continuum(1.0, 1.0).unwrap();
    let hbar = s.hbar();
    let (center, sigma0, k0) = (-20.0, 1.0, TAU);
    let psi = Packet::gaussian(n, x0, dx, center, sigma0, k0).unwrap();
    let tau = 2.0 * sigma0 * sigma0 / hbar;
    let steps = (3.0 * tau / 0.01).ceil() as usize;
    let mut opts = EvolveOptions::free(n, 0.01, steps, TimeCorrection::None);
    opts.observe_every = 100;
    opts.record_every = Some(steps / 3);
    let tr = evolve(&psi, &opts, 1.0, &s).unwrap();
    let mut free_err: f64 = 0.0;
    for o in &tr.observables {
        let sigma = sigma0 * (1.0 + (hbar * o.t / (2.0 * sigma0 * sigma0)).powi(2)).sqrt();
        free_err = free_err
            .max((o.x_mean - (center + hbar * k0 * o.t)).abs() / sigma)
            .max(rel(o.dx, sigma));
    }
    for (t, frame) in &tr.frames {
        let exact: Vec<f64> = (0..n)
            .map(|i| free_density(frame.position(i), *t, center, sigma0, k0, hbar))
            .collect();
        let peak = exact.iter().cloned().fold(0.0, f64::max);
        let diff = frame
            .density()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        free_err = free_err.max(diff / peak);
    }

    // The per-mode frequency is bounded, so at L_p = 0.05 and 0.1 the carrier
    // energy lies beyond it; the centroid check uses the uncorrected phase.
    let mut centroid_err: f64 = 0.0;
    let (k0, dt, t_end) = (20.0, 0.01, 20.0f64);
    for l_p in [0.0, 0.05, 0.1] {
        let s = Scales::natural_with_planck_length(l_p).unwrap();
        let psi = Packet::gaussian(n, x0, dx, -60.0, 2.0, k0).unwrap();
        let steps = (t_end / dt).round() as usize;
        let mut opts = EvolveOptions::free(n, dt, steps, TimeCorrection::None);
        opts.observe_every = steps;
        let tr = evolve(&psi, &opts, 1.0, &s).unwrap();
        let (first, last) = (tr.observables[0], *tr.observables.last().unwrap());
        let speed = (last.x_mean - first.x_mean) / (last.t - first.t);
        let oracle = derivative(|k| kinetic_dispersion(k, 1.0, &s), k0, 1e-3) / s.hbar();
        centroid_err = centroid_err.max(rel(speed, oracle));
    }

    check(
        drift < 1e-10 && seconds <= 10.0 && free_err < 0.005 && centroid_err < 0.01,
        format!(
            "norm drift {drift:.2e} over 1e4 steps in {seconds:.2} s (tol 1e-10, 10 s); free Gaussian {free_err:.2e} \
             (tol 5e-3); centroid speed {centroid_err:.2e} (tol 1e-2)"
        ),
    )
}

fn square_well() -> Outcome {
    let s = natural();
    let spec = WellSpec::new(1.0, 1.0, 1).unwrap();
    let e1 = well_levels(&spec, WellModel::PaperFormula, &s).unwrap()[0]
        .revised
        .unwrap();
    let c = Scales::continuum(1.0, 1.0).unwrap();
    let spec = WellSpec::new(1.0, 1.0, 32).unwrap();
    let modes = stationary_well(&spec, 256, &c).unwrap();
    let worst = modes
        .iter()
        .map(|m| rel(m.energy, (m.n * m.n) as f64 / 8.0))
        .fold(0.0, f64::max);
    check(
        e1 == 0.125_488_281_25 && modes.len() == 32 && worst < 1e-12,
        format!("E1' = {e1}; continuum levels n <= 32 max relative error {worst:.2e} (tol 1e-12)"),
    )
}

fn clock_bound() -> Outcome {
    let mut rng = SplitMix(0xc10c);
    let mut worst: f64 = 0.0;
    for preset in [UnitPreset::PlanckGrav, UnitPreset::Si] {
        let s = Scales::preset(preset);
        let l_p = s.planck_length();
        for _ in 0..100 {
            let len = 10f64.powf(rng.next(-9.0, 3.0));
            let total = |ln_m: f64| length_measurement_uncertainty(len, ln_m.exp(), &s).unwrap().total;
            let (_, searched) = golden_section_min(total, -120.0, 120.0, 200);
            let closed = 3.0 * 2f64.powf(-2.0 / 3.0) * (len * l_p * l_p).cbrt();
            let opt = optimal_clock_mass(len, &s).unwrap().total;
            worst = worst.max(rel(opt, closed)).max(rel(opt, searched));
        }
    }
    check(
        worst < 1e-6,
        format!("max relative error {worst:.2e} over 2 x 100 lengths (tol 1e-6)"),
    )
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut names: Vec<_> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    names.sort();
    let run = |cfg: &Path| {
        Command::new(env!("CARGO_BIN_EXE_dst"))
            .arg("--config")
            .arg(cfg)
            .env_remove("DST_UNITS")
            .output()
            .map(|o| (o.status.success(), o.stdout))
    };
    let mut bad = Vec::new();
    for cfg in &names {
        let (ok1, first) = run(cfg).map_err(|e| e.to_string())?;
        let (ok2, second) = run(cfg).map_err(|e| e.to_string())?;
        let golden = ["csv", "json"]
            .iter()
            .map(|ext| cfg.with_extension(ext))
            .find(|p| p.exists())
            .and_then(|p| fs::read(p).ok());
        if !(ok1 && ok2 && first == second && golden.as_deref() == Some(first.as_slice())) {
            bad.push(cfg.file_stem().unwrap().to_string_lossy().into_owned());
        }
    }
    check(
        names.len() == 10 && bad.is_empty(),
        format!(
            "{} scenarios run twice and compared with golden files; mismatches: {bad:?}",
            names.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("minimal length and period", minimal_length_and_period),
        ("uncertainty floor", gup_floor),
        ("photon exactness", photon_exactness),
        ("closed-form energy vs bisection", closed_form_energy),
        ("continuum limits", continuum_limits),
        ("first-order consistency", first_order_web),
        ("transform branch integrity", transform_integrity),
        ("split-step solver", solver),
        ("square well", square_well),
        ("clock bound", clock_bound),
        ("determinism and golden files", determinism),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(criterion).unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
