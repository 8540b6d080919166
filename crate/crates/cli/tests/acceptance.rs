//! Acceptance suite: one verdict line per criterion, with the measured
//! values behind it. Runs as a plain binary so the lines are always shown.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qhj_cli::evaluate::evaluate_record;
use qhj_derive::{golden_check, DerivationReport};
use qhj_fields::{
    hj_residual, kg_residual, quantum_kinetic, quantum_potential, sum_from_divergence, half_sum_from_density,
    Constants, EquationId, EvalOptions, Grid, HjInputs, KgState, NonrelState, ScalarField, Scheme, Unit,
};
use qhj_opalg::{expr_equal, parse_cnumber, Binding, Bindings};
use qhj_solvers::{
    analytic_state, mass_shell_energy, measured_frequency, solve_kg, solve_tdse, Dynamics, InitialState,
    PotentialSpec, ScenarioConfig,
};
use qhj_traj::{integrate_trajectories, sample_density, TrajOptions, VelocityField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Sub-checks of statements that are false as written. Each must still fail; the reason is printed.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[
    (
        "2.literal-symbolic",
        "-(hbar^2/2m) div(R grad R)/R^2 equals QP+QK, not half of it; the half sum carries -(hbar^2/4m)",
    ),
    ("2.literal-numeric", "same factor of two, measured pointwise"),
];

struct Line {
    id: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Lines(Vec<Line>);

impl Lines {
    fn check(&mut self, id: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(Line { id: id.to_string(), pass, detail: detail.into() });
    }

    fn at_most(&mut self, id: &str, value: f64, tol: f64) {
        self.check(id, value <= tol, format!("{value:e} <= {tol:e}"));
    }

    fn info(&mut self, id: &str, detail: impl Into<String>) {
        self.check(id, true, format!("(reported) {}", detail.into()));
    }
}

fn config(name: &str) -> ScenarioConfig {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    ScenarioConfig::from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn report(name: &str) -> DerivationReport {
    golden_check(name).unwrap()
}

fn step_matched(r: &DerivationReport, name: &str) -> bool {
    r.step(name).is_some_and(|s| s.matched())
}

fn unit() -> Constants {
    Constants::default()
}

fn opts(mask_eps: f64) -> EvalOptions {
    EvalOptions { scheme: Scheme::Spectral, mask_eps }
}

fn oracle_state(kind: &InitialState, grid: &Grid, t: f64) -> NonrelState {
    let s = analytic_state(kind, grid, &unit(), t).unwrap();
    NonrelState::from_wave(&s.psi, &s.psi_t, Scheme::Spectral).unwrap()
}

fn criterion_1(l: &mut Lines) {
    let dir = tempfile::tempdir().unwrap();
    for (pipeline, steps) in [
        ("nonrel-general", &["c-number-qhj", "real-part", "imaginary-part", "identity-real-part", "identity-imaginary-part"][..]),
        ("nonrel-bohm", &["general-hj", "continuity", "qp-qk-form"][..]),
        ("relativistic", &["kg-final", "kg-continuity"][..]),
    ] {
        let o = qhj_cli::run(["qhj", "derive", pipeline, "--out", dir.path().to_str().unwrap()]);
        l.check(&format!("1.derive-{pipeline}-exit"), o.code == 0, format!("exit {}", o.code));
        let r = report(pipeline);
        let missing: Vec<&str> = steps.iter().copied().filter(|s| !step_matched(&r, s)).collect();
        l.check(
            &format!("1.{pipeline}-goldens"),
            missing.is_empty() && r.pass,
            format!("{} gated steps exact; missing {missing:?}", r.steps.len()),
        );
    }
}

fn random_amplitude(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, f64, f64)> =
        (1..=3).map(|n| (n as f64, rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3))).collect();
    let base = 1.0 + terms.iter().map(|t| t.1.abs() + t.2.abs()).sum::<f64>() + rng.random_range(0.0..0.5);
    move |x| base + terms.iter().map(|(n, a, b)| a * (n * x).cos() + b * (n * x).sin()).sum::<f64>()
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `(|half - lap form|, |sum - div form|, |half - div form|)` for one amplitude.
fn identity_errors(f: &dyn Fn(f64) -> f64, n: usize, scheme: Scheme) -> (f64, f64, f64, f64) {
    let g = Grid::line(n, 0.0, 2.0 * PI).unwrap();
    let r = ScalarField::from_fn(&g, Unit::Amplitude, |x| f(x[0])).unwrap();
    let o = EvalOptions { scheme, mask_eps: 0.0 };
    let k = unit();
    let qp = quantum_potential(&r, &k, &o).unwrap();
    let qk = quantum_kinetic(&r, &k, &o).unwrap();
    let half: Vec<f64> = qp.field.values().iter().zip(qk.field.values()).map(|(a, b)| 0.5 * (a + b)).collect();
    let sum: Vec<f64> = half.iter().map(|h| 2.0 * h).collect();
    let lap = half_sum_from_density(&r, &k, &o).unwrap();
    let div = sum_from_divergence(&r, &k, &o).unwrap();
    let h = g.axes()[0].spacing();
    (
        max_err(&half, lap.field.values()),
        max_err(&sum, div.field.values()),
        max_err(&half, div.field.values()),
        h,
    )
}

fn criterion_2(l: &mut Lines) {
    let qp = parse_cnumber("-hbar^2/(2*m)*d[R]/dq_i/dq_i/R").unwrap();
    let qk = parse_cnumber("-hbar^2/(2*m)*d[R]/dq_i*d[R]/dq_i/R^2").unwrap();
    let b = Bindings::new()
        .with(Binding { name: "QP".into(), params: vec![], body: qp })
        .with(Binding { name: "QK".into(), params: vec![], body: qk });
    let half = b.apply(&parse_cnumber("1/2*(QP + QK)").unwrap()).unwrap();
    let full = b.apply(&parse_cnumber("QP + QK").unwrap()).unwrap();
    let div_form = parse_cnumber("-hbar^2/(2*m)*d[R*d[R]/dq_i]/dq_i/R^2").unwrap();
    let lap_form = parse_cnumber("-hbar^2/(8*m)*d[R^2]/dq_i/dq_i/R^2").unwrap();
    l.check("2.literal-symbolic", expr_equal(&half, &div_form), "1/2(QP+QK) == -(hbar^2/2m) div(R grad R)/R^2");
    l.check("2.full-sum-symbolic", expr_equal(&full, &div_form), "QP+QK == -(hbar^2/2m) div(R grad R)/R^2");
    l.check("2.half-sum-symbolic", expr_equal(&half, &lap_form), "1/2(QP+QK) == -(hbar^2/8m) lap(R^2)/R^2");
    let r = report("nonrel-bohm");
    l.check(
        "2.report-steps",
        step_matched(&r, "qp-plus-qk-divergence") && step_matched(&r, "half-qp-qk-laplacian"),
        "derivation steps qp-plus-qk-divergence, half-qp-qk-laplacian",
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut lap, mut div, mut literal_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let f = random_amplitude(&mut rng);
        let (a, b, c, _) = identity_errors(&f, 256, Scheme::Spectral);
        lap = lap.max(a);
        div = div.max(b);
        literal_min = literal_min.min(c);
    }
    l.at_most("2.spectral-half-sum", lap, 1e-8);
    l.at_most("2.spectral-full-sum", div, 1e-8);
    l.check("2.literal-numeric", literal_min <= 1e-8, format!("smallest max-norm gap over 50 amplitudes {literal_min:e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_ratio = 0.0f64;
    let mut worst_const = 0.0f64;
    for _ in 0..50 {
        let f = random_amplitude(&mut rng);
        let e: Vec<f64> = [128, 256]
            .iter()
            .map(|&n| {
                let (a, b, _, h) = identity_errors(&f, n, Scheme::Central2);
                a.max(b) / (h * h)
            })
            .collect();
        worst_ratio = worst_ratio.max((e[0] / e[1] - 1.0).abs());
        worst_const = worst_const.max(e[1]);
    }
    l.check(
        "2.central-second-order",
        worst_ratio < 0.1 && worst_const < 5.0,
        format!("err/h^2 stable between N=128 and 256 within {worst_ratio:.3e}; largest err/h^2 {worst_const:.3}"),
    );
}

fn criterion_3(l: &mut Lines) {
    let r = report("nonrel-general");
    l.check("3.classical-real-part", step_matched(&r, "classical-real-part"), "a=1, b=0, c=0 real part equals the classical HJ golden");
    let c = r.checks.iter().find(|c| c.name == "classical-limit").unwrap();
    l.check("3.no-hbar", c.passed, c.detail.clone());
}

fn criterion_4(l: &mut Lines) {
    let line = Grid::line(128, -10.0, 10.0).unwrap();
    let ground = InitialState::HarmonicGround { omega: 1.0 };
    let v = PotentialSpec::Harmonic { omega: 1.0 }.sample(&line, &unit()).unwrap();
    let inputs = HjInputs { potential: Some(&v), ..Default::default() };
    let st = oracle_state(&ground, &line, 0.3);
    let gated = hj_residual(EquationId::BohmHj, &st, &inputs, &unit(), &opts(1e-4)).unwrap().report;
    l.at_most("4.harmonic-ground", gated.max_norm, 1e-10);
    l.info("4.harmonic-mask", format!("eps_R = 1e-4, masked probability {:e}", gated.masked_probability));
    let default = hj_residual(EquationId::BohmHj, &st, &inputs, &unit(), &opts(1e-6)).unwrap().report;
    l.info("4.harmonic-default-mask", format!("eps_R = 1e-6 gives {:e}", default.max_norm));

    let wide = Grid::line(512, -20.0, 20.0).unwrap();
    let packet = InitialState::FreeGaussian { sigma0: 1.0, k0: 1.0, x0: 0.0 };
    for t in [0.0, 0.5, 1.0] {
        let st = oracle_state(&packet, &wide, t);
        let r = hj_residual(EquationId::BohmHj, &st, &HjInputs::default(), &unit(), &EvalOptions::default()).unwrap();
        l.at_most(&format!("4.free-gaussian-t{t}"), r.report.max_norm, 1e-6);
    }
}

fn criterion_5(l: &mut Lines) {
    let line = Grid::line(128, -10.0, 10.0).unwrap();
    let wide = Grid::line(512, -20.0, 20.0).unwrap();
    let harmonic = PotentialSpec::Harmonic { omega: 1.0 }.sample(&line, &unit()).unwrap();
    let cases = [
        ("harmonic-ground", InitialState::HarmonicGround { omega: 1.0 }, &line, 0.0, Some(&harmonic)),
        ("coherent", InitialState::HarmonicCoherent { omega: 1.0, x0: 1.5 }, &line, 0.7, Some(&harmonic)),
        ("free-gaussian", InitialState::FreeGaussian { sigma0: 1.0, k0: 1.0, x0: 0.0 }, &wide, 0.5, None),
    ];
    for (name, kind, grid, t, v) in cases {
        let st = oracle_state(&kind, grid, t);
        let inputs = HjInputs { potential: v, ..Default::default() };
        let r = hj_residual(EquationId::GeneralHj, &st, &inputs, &unit(), &EvalOptions::default()).unwrap();
        let d = r.report.difference.unwrap();
        l.at_most(&format!("5.{name}"), d.max_discrepancy, 1e-8);
        l.info(&format!("5.{name}-size"), format!("max |1/2(QK-QP)| = {:e}", d.predicted_max_norm));
    }
}

fn criterion_6(l: &mut Lines) {
    for name in ["free.json", "harmonic.json", "coherent.json"] {
        let cfg = config(name);
        let rec = solve_tdse(&cfg).unwrap();
        let slices = evaluate_record(&cfg, &rec, &[EquationId::Continuity]).unwrap();
        let worst = slices.iter().flat_map(|s| &s.residuals).map(|r| r.report.max_norm).fold(0.0, f64::max);
        let stem = name.trim_end_matches(".json");
        l.at_most(&format!("6.{stem}-continuity"), worst, 1e-5);
        l.at_most(&format!("6.{stem}-norm-drift"), rec.norm_drift(), 1e-10);
    }
}

fn scenario(grid: Grid, potential: PotentialSpec, initial_state: InitialState, dt: f64, steps: usize) -> ScenarioConfig {
    ScenarioConfig {
        grid,
        constants: unit(),
        dynamics: Dynamics::Schrodinger,
        potential,
        initial_state,
        dt,
        steps,
        output_stride: steps,
        evaluation: EvalOptions::default(),
    }
}

fn oracle_distance(cfg: &ScenarioConfig) -> f64 {
    let rec = solve_tdse(cfg).unwrap();
    let exact = analytic_state(&cfg.initial_state, &cfg.grid, &cfg.constants, cfg.t_end()).unwrap().psi;
    rec.wave(rec.len() - 1).unwrap().distance(&exact).unwrap()
}

fn criterion_7(l: &mut Lines) {
    let packet = |dt: f64, steps| {
        scenario(Grid::line(512, -20.0, 20.0).unwrap(), PotentialSpec::Free,
            InitialState::FreeGaussian { sigma0: 1.0, k0: 1.0, x0: 0.0 }, dt, steps)
    };
    let e1 = oracle_distance(&packet(1e-3, 1000));
    let e2 = oracle_distance(&packet(5e-4, 2000));
    l.at_most("7.free-packet-dt1e-3", e1, 1e-8);
    l.info("7.free-packet-halving", format!("{e1:e} -> {e2:e}; V = 0 splits exactly, so only roundoff remains"));
    let coherent = |dt: f64, steps| {
        scenario(Grid::line(256, -10.0, 10.0).unwrap(), PotentialSpec::Harmonic { omega: 1.0 },
            InitialState::HarmonicCoherent { omega: 1.0, x0: 1.5 }, dt, steps)
    };
    let (c1, c2) = (oracle_distance(&coherent(0.02, 50)), oracle_distance(&coherent(0.01, 100)));
    let ratio = c1 / c2;
    l.check("7.coherent-halving", (3.6..4.4).contains(&ratio), format!("{c1:e} -> {c2:e}, ratio {ratio:.3}"));

    let kg = ScenarioConfig {
        grid: Grid::line(64, 0.0, 4.0 * PI).unwrap(),
        constants: unit(),
        dynamics: Dynamics::KleinGordon,
        potential: PotentialSpec::Free,
        initial_state: InitialState::KgPlaneWave { p: 0.5 },
        dt: 1e-3,
        steps: 5000,
        output_stride: 10,
        evaluation: EvalOptions::default(),
    };
    let w = measured_frequency(&solve_kg(&kg).unwrap()).unwrap();
    let e = mass_shell_energy(0.5, &kg.constants);
    l.at_most("7.kg-frequency", (w - e).abs() / e, 1e-6);
}

fn criterion_8(l: &mut Lines) {
    let grid = Grid::line(64, 0.0, 4.0 * PI).unwrap();
    for (mass, p) in [(1.0, 0.5), (1.0, 2.0), (2.0, 1.0)] {
        let k = Constants { hbar: 1.0, mass, c_light: 1.0 };
        let s = analytic_state(&InitialState::KgPlaneWave { p }, &grid, &k, 0.8).unwrap();
        let st = KgState::from_field(&s.psi, &s.psi_t, s.psi_tt.as_ref().unwrap(), Scheme::Spectral).unwrap();
        let scale = mass_shell_energy(p, &k).powi(2).max(1.0);
        for eq in [EquationId::KgReal, EquationId::KgFinal, EquationId::KgContinuity] {
            let r = kg_residual(eq, &st, &k, &EvalOptions::default()).unwrap();
            l.at_most(&format!("8.{eq}-m{mass}-p{p}"), r.report.max_norm / scale, 1e-13);
        }
    }
    let r = report("relativistic");
    l.check("8.mass-shell-symbolic", step_matched(&r, "mass-shell"), "constant R reduces the final form to the mass shell golden");
}

fn closed_form_endpoint(x0: f64, t_end: f64, steps: usize) -> f64 {
    let v = |t: f64, x: f64| x * t / (4.0 + t * t);
    let h = t_end / steps as f64;
    let mut x = x0;
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = v(t, x);
        let k2 = v(t + h / 2.0, x + h / 2.0 * k1);
        let k3 = v(t + h / 2.0, x + h / 2.0 * k2);
        let k4 = v(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    x
}

fn criterion_9(l: &mut Lines) {
    let cfg = config("free-spreading.json");
    let rec = solve_tdse(&cfg).unwrap();
    let field = VelocityField::from_record(&rec, &cfg.evaluation).unwrap();
    let dt = 0.01;
    let set = integrate_trajectories(&field, &[vec![1.0]], &TrajOptions::new(dt)).unwrap();
    let x = set.endpoints()[0][0];
    let oracle = closed_form_endpoint(1.0, 2.0, (20.0 / dt) as usize);
    l.at_most("9.endpoint", (x - oracle).abs(), 1e-6);
    l.info("9.endpoint-value", format!("x(2) = {x:.9}, sqrt(2) x0 = {:.9}", 2f64.sqrt()));

    let seeds: Vec<Vec<f64>> = sample_density(&rec.wave(0).unwrap(), 10_000, 2024).unwrap().into_iter().map(|x| vec![x]).collect();
    let opts = TrajOptions { dt, t_end: Some(1.0), output_stride: 5 };
    let set = integrate_trajectories(&field, &seeds, &opts).unwrap();
    let crossings = (0..set.times.len()).filter(|&k| set.column(k).windows(2).any(|w| w[0] >= w[1])).count();
    l.check("9.non-crossing", crossings == 0, format!("{} seeds, {} stamps, {crossings} with crossings", seeds.len(), set.times.len()));
    let mut end = set.column(set.times.len() - 1);
    end.sort_by(f64::total_cmp);
    let law = Normal::new(0.0, 1.25f64.sqrt()).unwrap();
    let n = end.len() as f64;
    let ks = end
        .iter()
        .enumerate()
        .map(|(i, &x)| (law.cdf(x) - i as f64 / n).abs().max(((i + 1) as f64 / n - law.cdf(x)).abs()))
        .fold(0.0, f64::max);
    l.at_most("9.ks-t1", ks, 0.02);
}

fn criterion_10(l: &mut Lines) {
    let r = report("relativistic");
    let Some(c) = r.c_identification.as_ref() else {
        l.check("10.present", false, "no c identification in the report");
        return;
    };
    l.check("10.resolution", !c.resolution.is_empty(), c.resolution.clone());
    l.check("10.solved-recorded", !c.solved.is_empty() && c.solved_reproduces_kg_final, format!("solved c = {}", c.solved));
    l.info(
        "10.printed",
        format!(
            "printed c = {}: reproduces from reduced real part: {}, from printed real part: {}",
            c.printed, c.printed_reproduces_kg_final, c.printed_reproduces_kg_final_from_printed_real
        ),
    );
}

type Criterion = (u8, &'static str, fn(&mut Lines));

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "symbolic golden suite", criterion_1),
        (2, "half QP/QK identity", criterion_2),
        (3, "classical limit", criterion_3),
        (4, "Bohm HJ residual", criterion_4),
        (5, "general minus Bohm residual structure", criterion_5),
        (6, "continuity on solver output", criterion_6),
        (7, "solver convergence", criterion_7),
        (8, "relativistic residuals", criterion_8),
        (9, "trajectories", criterion_9),
        (10, "relativistic c audit", criterion_10),
    ];
    let mut unexpected = 0;
    for (id, title, f) in criteria {
        let mut lines = Lines::default();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| f(&mut lines))) {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            lines.check(&format!("{id}.panic"), false, msg.unwrap_or_default());
        }
        let pass = lines.0.iter().all(|l| l.pass);
        println!("criterion {id:>2} {}: {title}", if pass { "PASS" } else { "FAIL" });
        for line in &lines.0 {
            let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == line.id);
            let tag = match (line.pass, known) {
                (true, None) => "pass",
                (false, None) => {
                    unexpected += 1;
                    "FAIL"
                }
                (false, Some(_)) => "fail (known)",
                (true, Some(_)) => {
                    unexpected += 1;
                    "PASS (expected to fail)"
                }
            };
            println!("    [{tag}] {}: {}", line.id, line.detail);
            if let (false, Some((_, why))) = (line.pass, known) {
                println!("        analysis: {why}");
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: no unexpected results");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected results");
        ExitCode::FAILURE
    }
}
