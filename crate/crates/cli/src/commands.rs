use abe_core::classify::{classify_report, ClassLabel, Evidence, Thresholds};
use abe_core::families::Family;
use abe_core::info::binary_entropy;
use abe_core::measures::{
    abe, abe_batch, w2_analytic, w2_analytic_state, w2_grid, MeasureReport, MeasureSettings,
};
use abe_core::optics::{
    build_ghz_circuit, build_w_circuit, estimate_abe_from_circuit, OpticalCircuit, PerturbScope,
};
use abe_core::state::PureTripartiteState;
use abe_core::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cli::{CircuitKind, Command, CommonArgs, StateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{write_json_report, write_table, Cell, Format, RunMetadata, Table};
use crate::plot;
use crate::state_arg::StateSpec;

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Measure { state, common } => measure(&state, &common),
        Command::Classify { state, common } => classify(&state, &common),
        Command::ScanGhz { steps, common } => scan_ghz(steps, &common),
        Command::ScanW { steps, common } => scan_w(steps, &common),
        Command::HaarScatter {
            n,
            seed,
            family,
            common,
        } => haar_scatter(n, seed, family.into(), &common),
        Command::SimulateOptics {
            circuit,
            theta,
            alpha,
            beta,
            trials,
            error_halfwidth,
            seed,
            perturb_scope,
            common,
        } => {
            let circuit = match circuit {
                CircuitKind::Ghz => build_ghz_circuit(theta),
                CircuitKind::W => {
                    let (a0, b0) = ordinary_w_angles();
                    build_w_circuit(alpha.unwrap_or(a0), beta.unwrap_or(b0))
                }
            };
            simulate_optics(
                circuit,
                trials,
                error_halfwidth,
                seed,
                perturb_scope.into(),
                &common,
            )
        }
        Command::Plot { input, out, kind } => plot::plot_file(&input, &out, kind),
    }
}

/// `(α, β)` in degrees preparing equal weights on the three W terms.
pub fn ordinary_w_angles() -> (f64, f64) {
    (0.5 * (1.0 / 3f64.sqrt()).asin().to_degrees(), 22.5)
}

fn check_common(common: &CommonArgs) -> CliResult<()> {
    if common.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    if common.starts < 1 {
        return Err(CliError::Usage("--starts must be at least 1".into()));
    }
    for (name, v) in [
        ("--tol-abe", common.tol_abe),
        ("--tol-tangle", common.tol_tangle),
        ("--tol-rank", common.tol_rank),
    ] {
        if v.is_nan() || v < 0.0 {
            return Err(CliError::Usage(format!("{name} must be nonnegative")));
        }
    }
    Ok(())
}

fn settings(common: &CommonArgs) -> MeasureSettings {
    MeasureSettings {
        optimizer: common.optimizer(),
        rank_tol: common.tol_rank,
    }
}

fn metadata(command: &str, common: &CommonArgs) -> RunMetadata {
    RunMetadata::new(command, common.thresholds(), common.optimizer())
}

/// Class name, with undecidable evidence reported as `Indeterminate`.
/// A contradiction between the W bound and the 3-tangle is an internal
/// failure and aborts.
fn class_name(report: &MeasureReport, t: &Thresholds) -> CliResult<String> {
    match classify_report(report, t) {
        Ok(label) => Ok(label.kind.to_string()),
        Err(Error::Indeterminate(_)) => Ok("Indeterminate".into()),
        Err(e) => Err(e.into()),
    }
}

const REPORT_COLUMNS: [&str; 11] = [
    "abe",
    "delta_s",
    "tangle",
    "r_a",
    "r_b",
    "r_c",
    "class",
    "e_f",
    "e_a",
    "argmax_theta",
    "argmax_phi",
];

fn report_cells(r: &MeasureReport, class: String) -> Vec<Cell> {
    vec![
        r.abe.into(),
        r.delta_s.into(),
        r.tangle.into(),
        r.ranks.a.into(),
        r.ranks.b.into(),
        r.ranks.c.into(),
        class.into(),
        r.e_f.into(),
        r.e_a.into(),
        r.argmax_basis.theta.into(),
        r.argmax_basis.phi.into(),
    ]
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    state: &'a StateSpec,
    /// `[re, im]` in basis order `|cab⟩`.
    amplitudes: Vec<[f64; 2]>,
    class: String,
    report: MeasureReport,
}

fn amplitudes(psi: &PureTripartiteState) -> Vec<[f64; 2]> {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn measure(args: &StateArgs, common: &CommonArgs) -> CliResult<()> {
    check_common(common)?;
    let parsed = StateSpec::parse(args.kind, &args.values)?;
    let psi = parsed.build()?;
    let report = abe(&psi, &settings(common))?;
    let class = class_name(&report, &common.thresholds())?;
    let meta = metadata("measure", common).with_parameters(serde_json::to_value(&parsed)?);
    let out = common.out.as_deref();
    match common.format.unwrap_or(Format::Json) {
        Format::Json => write_json_report(
            &meta,
            &MeasureOutput {
                state: &parsed,
                amplitudes: amplitudes(&psi),
                class,
                report,
            },
            out,
        ),
        f => {
            let mut t = Table::new(&REPORT_COLUMNS);
            t.push(report_cells(&report, class));
            write_table(&meta, &t, f, out)
        }
    }
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    state: &'a StateSpec,
    class: String,
    evidence: Evidence,
}

fn classify(args: &StateArgs, common: &CommonArgs) -> CliResult<()> {
    check_common(common)?;
    let parsed = StateSpec::parse(args.kind, &args.values)?;
    let psi = parsed.build()?;
    let t = common.thresholds();
    let report = abe(&psi, &settings(common))?;
    let (class, evidence, failure) = match classify_report(&report, &t) {
        Ok(ClassLabel { kind, evidence }) => (kind.to_string(), evidence, None),
        Err(e @ Error::Indeterminate(_)) | Err(e @ Error::Contradiction(_)) => {
            let (name, ev) = match &e {
                Error::Indeterminate(ev) => ("Indeterminate", **ev),
                Error::Contradiction(ev) => ("Contradiction", **ev),
                _ => unreachable!(),
            };
            (name.to_owned(), ev, Some(e))
        }
        Err(e) => return Err(e.into()),
    };
    let meta = metadata("classify", common).with_parameters(serde_json::to_value(&parsed)?);
    let out = common.out.as_deref();
    match common.format.unwrap_or(Format::Json) {
        Format::Json => write_json_report(
            &meta,
            &ClassifyOutput {
                state: &parsed,
                class,
                evidence,
            },
            out,
        )?,
        f => {
            let mut table = Table::new(&[
                "class",
                "abe",
                "delta_s",
                "tangle",
                "tangle_raw",
                "r_a",
                "r_b",
                "r_c",
            ]);
            table.push(vec![
                class.into(),
                evidence.abe.into(),
                evidence.delta_s.into(),
                evidence.tangle.into(),
                evidence.tangle_raw.into(),
                evidence.ranks.a.into(),
                evidence.ranks.b.into(),
                evidence.ranks.c.into(),
            ]);
            write_table(&meta, &table, f, out)?
        }
    }
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn check_steps(steps: usize) -> CliResult<()> {
    if steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    Ok(())
}

fn collect_reports(
    states: &[PureTripartiteState],
    s: &MeasureSettings,
) -> CliResult<Vec<MeasureReport>> {
    abe_batch(states, s)
        .into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

fn scan_ghz(steps: usize, common: &CommonArgs) -> CliResult<()> {
    check_common(common)?;
    check_steps(steps)?;
    let lambdas: Vec<f64> = (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect();
    let states = lambdas
        .iter()
        .map(|&l| abe_core::families::ghz_one_param(l).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    let reports = collect_reports(&states, &settings(common))?;

    let mut t = Table::new(&[
        "lambda1",
        "lambda2",
        "e_a",
        "delta_s",
        "abe",
        "tangle",
        "e_a_analytic",
        "delta_s_analytic",
        "abe_analytic",
    ]);
    for (&l1, r) in lambdas.iter().zip(&reports) {
        let h = binary_entropy(l1 * l1);
        let l2 = (1.0 - l1 * l1).max(0.0).sqrt();
        t.push(vec![
            l1.into(),
            l2.into(),
            r.e_a.into(),
            r.delta_s.into(),
            r.abe.into(),
            r.tangle.into(),
            h.into(),
            h.into(),
            h.into(),
        ]);
    }
    let meta = metadata("scan-ghz", common).with_parameters(json!({ "steps": steps }));
    write_table(
        &meta,
        &t,
        common.format.unwrap_or(Format::Csv),
        common.out.as_deref(),
    )
}

fn scan_w(steps: usize, common: &CommonArgs) -> CliResult<()> {
    check_common(common)?;
    check_steps(steps)?;
    let grid = w2_grid(steps);
    let states = grid
        .iter()
        .map(|&(l0, l3)| w2_analytic_state(l0, l3).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    let reports = collect_reports(&states, &settings(common))?;

    let mut t = Table::new(&[
        "lambda0",
        "lambda3",
        "lambda2",
        "e_f",
        "e_a",
        "delta_s",
        "abe",
        "e_f_analytic",
        "e_a_analytic",
        "delta_s_analytic",
        "abe_analytic",
    ]);
    for (&(l0, l3), r) in grid.iter().zip(&reports) {
        let exact = w2_analytic(l0, l3)?;
        let l2 = (1.0 - l0 * l0 - l3 * l3).max(0.0).sqrt();
        t.push(vec![
            l0.into(),
            l3.into(),
            l2.into(),
            r.e_f.into(),
            r.e_a.into(),
            r.delta_s.into(),
            r.abe.into(),
            exact.e_f.into(),
            exact.e_a.into(),
            exact.delta_s.into(),
            exact.abe().into(),
        ]);
    }
    let meta = metadata("scan-w", common).with_parameters(json!({
        "steps": steps,
        "state": "lambda2|100> + lambda3|010> + lambda0|001>",
    }));
    write_table(
        &meta,
        &t,
        common.format.unwrap_or(Format::Csv),
        common.out.as_deref(),
    )
}

fn haar_scatter(n: usize, seed: u64, family: Family, common: &CommonArgs) -> CliResult<()> {
    check_common(common)?;
    if n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let s = settings(common);
    let t = common.thresholds();
    let rows: Vec<CliResult<Vec<Cell>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row_seed = seed.wrapping_add(i as u64);
            let psi = family.sample(row_seed)?;
            let r = abe(&psi, &s)?;
            let mut cells = vec![Cell::from(i), Cell::from(row_seed)];
            cells.extend(report_cells(&r, class_name(&r, &t)?));
            Ok(cells)
        })
        .collect();

    let mut columns = vec!["index", "seed"];
    columns.extend(REPORT_COLUMNS);
    let mut table = Table::new(&columns);
    for row in rows {
        table.push(row?);
    }
    let meta = metadata("haar-scatter", common)
        .with_seeds(json!({ "base": seed, "rule": "row i uses base + i" }))
        .with_parameters(json!({
            "n": n,
            "family": family,
            "sampling": family.sampling_rule(),
        }));
    write_table(
        &meta,
        &table,
        common.format.unwrap_or(Format::Csv),
        common.out.as_deref(),
    )
}

fn simulate_optics(
    circuit: OpticalCircuit,
    trials: usize,
    error_halfwidth: f64,
    seed: u64,
    scope: PerturbScope,
    common: &CommonArgs,
) -> CliResult<()> {
    if trials < 1 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if error_halfwidth.is_nan() || error_halfwidth < 0.0 {
        return Err(CliError::Usage(
            "--error-halfwidth must be nonnegative".into(),
        ));
    }
    let base = circuit
        .with_error_halfwidth(error_halfwidth)
        .with_scope(scope);
    let labels: Vec<String> = base
        .waveplate_angles()
        .into_iter()
        .map(|(l, _)| l)
        .collect();
    let rows: Vec<CliResult<Vec<Cell>>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let trial_seed = seed.wrapping_add(k as u64);
            let est = estimate_abe_from_circuit(&base.clone().with_seed(trial_seed), true)?;
            let mut cells = vec![Cell::from(k), Cell::from(trial_seed)];
            cells.extend(est.angles.iter().map(|(_, a)| Cell::from(*a)));
            cells.extend([
                est.sigma_z_entropy.into(),
                est.sigma_x_entropy.into(),
                est.abe.into(),
                est.fidelity.into(),
            ]);
            Ok(cells)
        })
        .collect();

    let mut columns = vec!["trial".to_owned(), "seed".to_owned()];
    columns.extend(labels.iter().map(|l| format!("angle_{l}")));
    columns.extend(["sigma_z_entropy", "sigma_x_entropy", "abe", "fidelity"].map(String::from));
    let mut table = Table::new(&columns);
    for row in rows {
        table.push(row?);
    }
    let nominal: serde_json::Map<String, serde_json::Value> = base
        .nominal()
        .waveplate_angles()
        .into_iter()
        .map(|(l, a)| (l, json!(a)))
        .collect();
    let meta = metadata("simulate-optics", common)
        .with_seeds(json!({ "base": seed, "rule": "trial k uses base + k" }))
        .with_parameters(json!({
            "trials": trials,
            "error_halfwidth_deg": error_halfwidth,
            "perturb_scope": scope,
            "nominal_angles_deg": nominal,
            "elements": base.elements.iter().map(|e| e.label.as_str()).collect::<Vec<_>>(),
        }));
    write_table(
        &meta,
        &table,
        common.format.unwrap_or(Format::Csv),
        common.out.as_deref(),
    )
}
