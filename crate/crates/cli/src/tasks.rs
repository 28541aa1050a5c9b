//! One function per task; each turns a validated config into an [`Artifact`].

use polariton_core::lindblad::{
    control_only_steady_state, default_probe_epsilon, linear_response_chi, LindbladParams,
};
use polariton_core::model::{
    build_rotating_hamiltonian, truncation_error, HilbertSpace, Qubit, SystemParams,
};
use polariton_core::numerics::{hermitian_eigendecompose, ComplexMatrix, C64};
use polariton_core::polariton::{
    omega_31_closed_form, polariton_basis_exact, track_labels_across_sweep, transition_frequencies,
    PolaritonBasis,
};
use polariton_core::spectroscopy::{
    absorption_spectrum_pipeline, classify_regime, effective_rabi, eit_ats_threshold,
    eit_condition_check, susceptibility, ThreeLevelRates,
};
use polariton_core::transitions::{
    classify_transition_type, decay_rates, impedance_match_drive, matrix_elements_exact, RateModel,
    TransitionTable, TransitionType,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Drive, LabelMode, RunConfig, Task};
use crate::dataset::{Cell, Dataset};
use crate::error::CliError;

/// Drive strengths of the reference table rows (MHz).
pub const TABLE1_DRIVES: [f64; 5] = [0.0, 10.0, 20.0, 30.0, 40.0];

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Table(Dataset),
    Report(Value),
}

impl Artifact {
    pub fn table(&self) -> Option<&Dataset> {
        match self {
            Artifact::Table(d) => Some(d),
            Artifact::Report(_) => None,
        }
    }

    pub fn report(&self) -> Option<&Value> {
        match self {
            Artifact::Report(v) => Some(v),
            Artifact::Table(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
struct Point {
    params: SystemParams,
    drive: Drive,
    coords: Vec<f64>,
}

fn assign(params: &mut SystemParams, drive: &mut Drive, name: &str, value: f64) {
    match name {
        "omega_q" => params.omega_q = value,
        "omega_r" => params.omega_r = value,
        "g" => params.g = value,
        "omega_d" => params.omega_d = value,
        "Omega" => params.drive = value,
        "gamma_q" => params.gamma_q = value,
        "gamma_c" => params.gamma_c = value,
        "A_c" => drive.a_c = value,
        "A_p" => drive.a_p = value,
        "omega_c" => drive.omega_c = Some(value),
        // Delta = omega_r - omega_q at fixed qubit frequency.
        "Delta" => params.omega_r = params.omega_q + value,
        other => unreachable!("axis `{other}` passed validation"),
    }
}

/// Grid points, first axis outermost.
fn points(cfg: &RunConfig) -> Vec<Point> {
    let mut out = vec![Point {
        params: cfg.params,
        drive: cfg.drive.clone(),
        coords: Vec::new(),
    }];
    for axis in &cfg.axes {
        let values = axis.grid().points();
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    assign(&mut q.params, &mut q.drive, &axis.name, v);
                    q.coords.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn axis_names(cfg: &RunConfig) -> Vec<String> {
    cfg.axes.iter().map(|a| a.name.clone()).collect()
}

fn coord_cells(p: &Point) -> Vec<Cell> {
    p.coords.iter().map(|&c| Cell::Num(c)).collect()
}

fn header(cfg: &RunConfig, task: Task, space: &HilbertSpace) -> Result<Dataset, CliError> {
    let mut d = Dataset::default();
    d.meta(
        "generator",
        concat!("polariton-lab ", env!("CARGO_PKG_VERSION")),
    );
    d.meta("task", task);
    d.meta("config", cfg.to_json());
    d.meta("n_max", space.n_max());
    d.meta(
        "truncation_error_mhz",
        crate::dataset::format_number(truncation_error(&cfg.params, space)?),
    );
    Ok(d)
}

fn with_columns(mut d: Dataset, columns: Vec<String>) -> Dataset {
    d.columns = columns;
    d
}

pub fn run_task(cfg: &RunConfig) -> Result<Artifact, CliError> {
    cfg.validate()?;
    let task = cfg.task.ok_or_else(|| {
        CliError::Config("no task given (positional argument or `task` field)".into())
    })?;
    match task {
        Task::Eigen => run_eigen(cfg).map(Artifact::Table),
        Task::Sweep => run_sweep(cfg).map(Artifact::Table),
        Task::Table1 => run_table1(cfg).map(Artifact::Table),
        Task::Spectrum => run_spectrum(cfg).map(Artifact::Table),
        Task::Classify => run_classify(cfg).map(Artifact::Report),
        Task::OracleCheck => run_oracle_check(cfg).map(Artifact::Table),
    }
}

/// Jaynes-Cummings ladder without the drive, lab frame, relative to |g,0>.
pub fn run_eigen(cfg: &RunConfig) -> Result<Dataset, CliError> {
    if cfg.axes.len() != 1 {
        return Err(CliError::Config(
            "eigen needs exactly one axis, typically `Delta`".into(),
        ));
    }
    let space = cfg.space()?;
    let mut columns = axis_names(cfg);
    columns.push("E_g0".into());
    for n in 0..space.n_max() {
        columns.push(format!("E_minus_{n}"));
        columns.push(format!("E_plus_{n}"));
    }
    let rows = points(cfg)
        .par_iter()
        .map(|pt| -> Result<Vec<Cell>, CliError> {
            let p = SystemParams {
                drive: 0.0,
                ..pt.params
            };
            let h = build_rotating_hamiltonian(&p, &space);
            let ground = h[(space.index(Qubit::Ground, 0), space.index(Qubit::Ground, 0))].re;
            let mut row = coord_cells(pt);
            row.push(0.0.into());
            for n in 0..space.n_max() {
                // Block with n + 1 excitations: |e,n>, |g,n+1>.
                let idx = [
                    space.index(Qubit::Excited, n),
                    space.index(Qubit::Ground, n + 1),
                ];
                let block = ComplexMatrix::from_rows(&[
                    vec![h[(idx[0], idx[0])], h[(idx[0], idx[1])]],
                    vec![h[(idx[1], idx[0])], h[(idx[1], idx[1])]],
                ]);
                let e = hermitian_eigendecompose(&block)?;
                let shift = p.omega_d * (n + 1) as f64 - ground;
                row.push((e.values[0] + shift).into());
                row.push((e.values[1] + shift).into());
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = with_columns(header(cfg, Task::Eigen, &space)?, columns);
    d.meta(
        "frame",
        "lab; energies relative to |g,0>, drive switched off",
    );
    for r in rows {
        d.push(r);
    }
    Ok(d)
}

fn pair_columns() -> Vec<String> {
    let mut cols = Vec::new();
    for (i, j) in TransitionTable::pairs() {
        cols.push(format!("Q_{i}{j}"));
        cols.push(format!("C_{i}{j}"));
        cols.push(format!("gamma_{i}{j}"));
    }
    cols
}

/// Polariton bases over the grid, relabelled along the last axis when tracking.
fn bases(
    cfg: &RunConfig,
    pts: &[Point],
    space: &HilbertSpace,
) -> Result<Vec<PolaritonBasis>, CliError> {
    let mut out = pts
        .par_iter()
        .map(|pt| polariton_basis_exact(&pt.params, space))
        .collect::<Result<Vec<_>, _>>()?;
    if cfg.labeling == LabelMode::Tracked && !cfg.axes.is_empty() {
        let inner = cfg.axes.last().map_or(1, |a| a.count);
        for row in out.chunks_mut(inner) {
            for k in 1..row.len() {
                row[k] = track_labels_across_sweep(&row[k - 1], &row[k])?;
            }
        }
    }
    Ok(out)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Dataset, CliError> {
    let space = cfg.space()?;
    let pts = points(cfg);
    let bases = bases(cfg, &pts, &space)?;
    let mut columns = axis_names(cfg);
    columns.extend(
        [
            "omega_21",
            "omega_32",
            "omega_31",
            "omega_43",
            "omega_31_approx",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    columns.extend(pair_columns());
    columns.push("Gamma_31".into());
    columns.push("type".into());

    let rows = pts
        .par_iter()
        .zip(bases.par_iter())
        .map(|(pt, b)| -> Result<Vec<Cell>, CliError> {
            let p = &pt.params;
            let t = decay_rates(&matrix_elements_exact(b, &space)?, p.gamma_c, p.gamma_q);
            let w = transition_frequencies(b);
            let mut row = coord_cells(pt);
            for (i, j) in [(2, 1), (3, 2), (3, 1), (4, 3)] {
                row.push(w.get(i, j).into());
            }
            row.push(omega_31_closed_form(p).unwrap_or(f64::NAN).into());
            for (i, j) in TransitionTable::pairs() {
                row.push(t.q(i, j).into());
                row.push(t.c(i, j).into());
                row.push(t.gamma(i, j).unwrap_or(f64::NAN).into());
            }
            row.push(t.gamma_31_total().unwrap_or(f64::NAN).into());
            row.push(
                classify_transition_type(&t, cfg.type_threshold)
                    .to_string()
                    .into(),
            );
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut d = with_columns(header(cfg, Task::Sweep, &space)?, columns);
    let labeling = match cfg.labeling {
        LabelMode::Energy => "energy order",
        LabelMode::Tracked => "tracked by overlap along the last axis",
    };
    d.meta("labeling", labeling);
    d.meta("frame", "frequencies in the frame rotating at omega_d");
    for r in rows {
        d.push(r);
    }
    Ok(d)
}

pub fn run_table1(cfg: &RunConfig) -> Result<Dataset, CliError> {
    let space = cfg.space()?;
    let columns = [
        "Omega", "C_31", "C_32", "Q_21", "Q_31", "Q_32", "C_21", "omega_21", "omega_32", "type",
    ];
    let rows = TABLE1_DRIVES
        .par_iter()
        .map(|&drive| -> Result<Vec<Cell>, CliError> {
            let p = cfg.params.with_drive(drive);
            let b = polariton_basis_exact(&p, &space)?;
            let t = matrix_elements_exact(&b, &space)?;
            Ok(vec![
                drive.into(),
                t.c(3, 1).into(),
                t.c(3, 2).into(),
                t.q(2, 1).into(),
                t.q(3, 1).into(),
                t.q(3, 2).into(),
                t.c(2, 1).into(),
                t.omega(2, 1).into(),
                t.omega(3, 2).into(),
                classify_transition_type(&t, cfg.type_threshold)
                    .to_string()
                    .into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = with_columns(
        header(cfg, Task::Table1, &space)?,
        columns.iter().map(|s| s.to_string()).collect(),
    );
    for r in rows {
        d.push(r);
    }
    Ok(d)
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<Dataset, CliError> {
    if cfg.axes.len() > 1 {
        return Err(CliError::Config(
            "spectrum takes at most one axis (e.g. `Omega`)".into(),
        ));
    }
    let space = cfg.space()?;
    let grid = cfg.delta.points();
    let mut columns = axis_names(cfg);
    columns.extend(
        [
            "delta",
            "im_chi",
            "re_chi",
            "im_chi_plus",
            "im_chi_minus",
            "regime",
            "omega_c_rabi",
            "threshold",
            "delta_2",
            "omega_c_lab",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    let blocks = points(cfg)
        .par_iter()
        .map(|pt| -> Result<Vec<Vec<Cell>>, CliError> {
            let p = &pt.params;
            let r = absorption_spectrum_pipeline(
                p,
                &space,
                pt.drive.a_c,
                pt.drive.a_p,
                pt.drive.rotating_omega_c(p.omega_d),
                &grid,
                cfg.type_threshold,
            )?;
            let mut rows = Vec::with_capacity(grid.len());
            for (&delta, chi) in grid.iter().zip(&r.spectrum.chi) {
                let (plus, minus) = r
                    .decomposition
                    .and_then(|d| d.branches(delta))
                    .map_or((f64::NAN, f64::NAN), |(a, b)| (a.im, b.im));
                let mut row = coord_cells(pt);
                row.extend([
                    delta.into(),
                    chi.im.into(),
                    chi.re.into(),
                    plus.into(),
                    minus.into(),
                    r.regime.to_string().into(),
                    r.rates.omega_c.into(),
                    r.threshold.into(),
                    r.rates.delta_2.into(),
                    (r.control_frequency + p.omega_d).into(),
                ]);
                rows.push(row);
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = with_columns(header(cfg, Task::Spectrum, &space)?, columns);
    d.meta("chi_units", "arbitrary (unit numerator)");
    d.meta(
        "rates",
        "Gamma_31 and gamma_21 recomputed from the polariton table at every point",
    );
    d.meta(
        "omega_c_frame",
        "rotating in delta_2 and omega_c_rabi; lab in omega_c_lab",
    );
    for r in blocks.into_iter().flatten() {
        d.push(r);
    }
    Ok(d)
}

pub fn run_classify(cfg: &RunConfig) -> Result<Value, CliError> {
    if !cfg.axes.is_empty() {
        return Err(CliError::Config(
            "classify evaluates a single point; remove `axes`".into(),
        ));
    }
    let space = cfg.space()?;
    let p = cfg.params;
    let b = polariton_basis_exact(&p, &space)?;
    let t = decay_rates(&matrix_elements_exact(&b, &space)?, p.gamma_c, p.gamma_q);
    let types = classify_transition_type(&t, cfg.type_threshold);

    let mut pairs = serde_json::Map::new();
    for (i, j) in TransitionTable::pairs() {
        pairs.insert(
            format!("{i}{j}"),
            json!({
                "omega": t.omega(i, j),
                "Q": t.q(i, j),
                "C": t.c(i, j),
                "gamma": t.gamma(i, j),
            }),
        );
    }
    let gamma_31_total = t.gamma_31_total().expect("rates filled");
    let gamma_21 = t.gamma(2, 1).expect("rates filled");
    let (omega_c, omega_p) = effective_rabi(cfg.drive.a_c, cfg.drive.a_p, &t);
    let lambda = if types.contains(TransitionType::Lambda) {
        let control = cfg
            .drive
            .rotating_omega_c(p.omega_d)
            .unwrap_or(t.omega(3, 2));
        json!({
            "Omega_c": omega_c,
            "Omega_p": omega_p,
            "Delta_2": t.omega(3, 2) - control,
            "omega_c_lab": control + p.omega_d,
            "threshold": eit_ats_threshold(gamma_31_total, gamma_21),
            "regime": classify_regime(omega_c, gamma_31_total, gamma_21).to_string(),
            "eit_condition": eit_condition_check(omega_c, p.gamma_c),
        })
    } else {
        Value::Null
    };
    let impedance = impedance_match_drive(&p, 0.0, 40.0, RateModel::Exact(space)).ok();
    Ok(json!({
        "generator": concat!("polariton-lab ", env!("CARGO_PKG_VERSION")),
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "n_max": space.n_max(),
        "truncation_error_mhz": truncation_error(&p, &space)?,
        "energies": b.energies(),
        "transitions": Value::Object(pairs),
        "Gamma_31": gamma_31_total,
        "type": types.to_string(),
        "lambda": lambda,
        "impedance_match_Omega": impedance,
    }))
}

struct OracleInput {
    lindblad: LindbladParams,
    analytic: ThreeLevelRates,
}

fn oracle_inputs(
    cfg: &RunConfig,
    space: &HilbertSpace,
) -> Result<Vec<(Point, OracleInput)>, CliError> {
    if let Some(r) = &cfg.rates {
        if !cfg.axes.is_empty() {
            return Err(CliError::Config(
                "synthetic `rates` cannot be combined with `axes`".into(),
            ));
        }
        let lindblad = LindbladParams::new(
            r.gamma_31, r.gamma_32, r.gamma_21, r.omega_c, 0.0, r.delta_2,
        )
        .with_dephasing(r.gamma_3deph, r.gamma_2deph);
        let analytic = if r.gamma_3deph > 0.0 || r.gamma_2deph > 0.0 {
            ThreeLevelRates::with_dephasing(
                r.gamma_31,
                r.gamma_32,
                r.gamma_3deph,
                r.gamma_2deph,
                r.omega_c,
                r.delta_2,
            )?
        } else {
            ThreeLevelRates::new(r.gamma_31 + r.gamma_32, r.gamma_21, r.omega_c, r.delta_2)?
        };
        let pt = points(cfg).remove(0);
        return Ok(vec![(pt, OracleInput { lindblad, analytic })]);
    }
    if cfg.axes.len() > 1 {
        return Err(CliError::Config(
            "oracle-check takes at most one axis".into(),
        ));
    }
    points(cfg)
        .into_par_iter()
        .map(|pt| {
            let p = &pt.params;
            let r = absorption_spectrum_pipeline(
                p,
                space,
                pt.drive.a_c,
                pt.drive.a_p,
                pt.drive.rotating_omega_c(p.omega_d),
                &[],
                cfg.type_threshold,
            )?;
            let t = &r.table;
            let lindblad = LindbladParams::new(
                t.gamma(3, 1).expect("rates filled"),
                t.gamma(3, 2).expect("rates filled"),
                r.rates.gamma_21,
                r.rates.omega_c,
                0.0,
                r.rates.delta_2,
            );
            Ok((
                pt,
                OracleInput {
                    lindblad,
                    analytic: r.rates,
                },
            ))
        })
        .collect()
}

pub fn run_oracle_check(cfg: &RunConfig) -> Result<Dataset, CliError> {
    let space = cfg.space()?;
    let grid = cfg.delta.points();
    let mut columns = axis_names(cfg);
    columns.extend(
        [
            "delta",
            "re_chi_analytic",
            "im_chi_analytic",
            "re_chi_numeric",
            "im_chi_numeric",
            "residual",
            "halving_change",
            "rho_11",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    let inputs = oracle_inputs(cfg, &space)?;
    let mut max_residual: f64 = 0.0;
    let mut max_halving: f64 = 0.0;
    let mut rows = Vec::new();
    for (pt, input) in &inputs {
        let epsilon = cfg
            .probe_epsilon
            .unwrap_or_else(|| default_probe_epsilon(&input.lindblad));
        let rho_11 = control_only_steady_state(&input.lindblad)?.population(1);
        let results = grid
            .par_iter()
            .map(|&delta| -> Result<(C64, C64, f64), CliError> {
                let analytic = susceptibility(&input.analytic, delta)?;
                let numeric = linear_response_chi(&input.lindblad, delta, epsilon)?;
                Ok((analytic, numeric.chi, numeric.halving_change))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let scale = results.iter().map(|r| r.0.norm()).fold(0.0, f64::max);
        for (&delta, (analytic, numeric, halving)) in grid.iter().zip(&results) {
            let residual = (numeric - analytic).norm() / scale;
            max_residual = max_residual.max(residual);
            max_halving = max_halving.max(*halving);
            let mut row = coord_cells(pt);
            row.extend([
                delta.into(),
                analytic.re.into(),
                analytic.im.into(),
                numeric.re.into(),
                numeric.im.into(),
                residual.into(),
                (*halving).into(),
                rho_11.into(),
            ]);
            rows.push(row);
        }
    }
    let mut d = with_columns(header(cfg, Task::OracleCheck, &space)?, columns);
    d.meta(
        "residual",
        "|chi_numeric - chi_analytic| / max |chi_analytic| over each spectrum",
    );
    d.meta("max_residual", crate::dataset::format_number(max_residual));
    d.meta(
        "max_halving_change",
        crate::dataset::format_number(max_halving),
    );
    for r in rows {
        d.push(r);
    }
    Ok(d)
}
