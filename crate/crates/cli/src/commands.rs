use std::path::Path;

use fockppt::fock::{expectation, min_eig, pt_fock, ptrace_fock, reduction_operator, to_fock};
use fockppt::gaussian::{
    partial_trace_with, partial_transpose, positivity as positivity_of, ppt_check, validate,
    InverseMethod,
};
use fockppt::states::{
    impure_squeezed, impure_witness_analytic_with_nodes, phase_damped_tmsv, psi2, three_mode,
    three_mode_audit as audit_row, three_mode_candidate_threshold, witness_psi_m, MixtureSpec,
    PhaseDampedTmsvSpec, ThreeModeSpec, Truncation,
};
use fockppt::{Bipartition, Complex64, Error, GaussianOperator, ModeSubset};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::report::{emit_json, write_table, Cell, CliError, CliResult, EXIT_NPT, EXIT_PPT};
use crate::sweep::{Axis, Binding, SweepArg, SweepSpec};
use crate::{Common, Method};

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_state(path: &Path) -> CliResult<GaussianOperator> {
    Ok(GaussianOperator::from_json(&read(path)?)?)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        // validation failures surface through serde as data errors
        if e.is_data() {
            CliError::precondition(format!("{}: {e}", path.display()))
        } else {
            CliError::parse(format!("{}: {e}", path.display()))
        }
    })
}

fn tolerance(common: &Common, config: &Config) -> CliResult<f64> {
    let tol = common.tol.unwrap_or(config.tolerance);
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(CliError::parse(format!(
            "--tol must be finite and >= 0, got {tol}"
        )))
    }
}

/// One cutoff for every mode, or exactly one per mode.
fn expand_cutoffs(cutoffs: &[usize], num_modes: usize, default: usize) -> CliResult<Vec<usize>> {
    match cutoffs.len() {
        0 => Ok(vec![default; num_modes]),
        1 => Ok(vec![cutoffs[0]; num_modes]),
        n if n == num_modes => Ok(cutoffs.to_vec()),
        n => Err(CliError::precondition(format!(
            "{n} cutoffs given for {num_modes} modes"
        ))),
    }
}

pub fn ppt(state: &Path, partition: &str, common: &Common, config: &Config) -> CliResult<i32> {
    let g = load_state(state)?;
    let p = Bipartition::parse(partition, g.num_modes())?;
    let report = ppt_check(&g, &p, tolerance(common, config)?)?;
    emit_json(&report, common.out.as_deref())?;
    Ok(if report.is_npt { EXIT_NPT } else { EXIT_PPT })
}

pub fn positivity(state: &Path, common: &Common, config: &Config) -> CliResult<i32> {
    let g = load_state(state)?;
    let verdict = positivity_of(&g, tolerance(common, config)?)?;
    emit_json(&verdict, common.out.as_deref())?;
    Ok(if verdict.is_positive() {
        EXIT_PPT
    } else {
        EXIT_NPT
    })
}

#[derive(Serialize)]
struct CandidateColumns {
    coupling_sq: f64,
    bound: f64,
    npt: bool,
}

#[derive(Serialize)]
struct OracleReport {
    partition: String,
    cutoffs: Vec<usize>,
    analytic_min_b_eigenvalue: f64,
    analytic_npt: bool,
    fock_min_eigenvalue: f64,
    fock_npt: bool,
    agreement: bool,
    commuting_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidate_threshold: Option<CandidateColumns>,
}

/// Exit 0 when the analytic verdict and the oracle agree, 1 otherwise.
pub fn oracle_compare(
    state: Option<&Path>,
    three_mode_spec: Option<&Path>,
    partition: Option<&str>,
    cutoffs: &[usize],
    oracle_tol: f64,
    common: &Common,
    config: &Config,
) -> CliResult<i32> {
    let (g, candidate) = match (state, three_mode_spec) {
        (Some(path), _) => {
            let g = load_state(path)?;
            let report = validate(&g);
            if !report.convergent {
                let all: Vec<usize> = (0..g.num_modes()).collect();
                let k = g.integration_form(&all);
                let min = k.symmetric_eigenvalues().min();
                return Err(Error::NonConvergent {
                    min_eigenvalue: min,
                }
                .into());
            }
            (g, None)
        }
        (None, Some(path)) => {
            // the family is defined at non-trace-class points too; the
            // oracle is still a finite compression there
            let spec: ThreeModeSpec = load_json(path)?;
            let cols = CandidateColumns {
                coupling_sq: spec.zeta13.norm_sqr() + spec.zeta23.norm_sqr(),
                bound: (1.0 + spec.lambda) * (1.0 + spec.lambda3),
                npt: three_mode_candidate_threshold(&spec),
            };
            (three_mode(&spec), Some(cols))
        }
        (None, None) => return Err(CliError::parse("need --state or --three-mode")),
    };
    let partition = match (partition, candidate.is_some()) {
        (Some(p), _) => p,
        (None, true) => "0,1|2",
        (None, false) => return Err(CliError::parse("--partition is required with --state")),
    };
    let p = Bipartition::parse(partition, g.num_modes())?;
    let cutoffs = expand_cutoffs(cutoffs, g.num_modes(), config.cutoff)?;

    let report = ppt_check(&g, &p, tolerance(common, config)?)?;
    let fock_pt = pt_fock(&to_fock(&g, &cutoffs)?, &p.second)?;
    let residual = to_fock(&partial_transpose(&g, &p.second)?, &cutoffs)?.max_abs_diff(&fock_pt)?;
    let fock_min = min_eig(&fock_pt)?;
    let fock_npt = fock_min < -oracle_tol;
    let out = OracleReport {
        partition: p.to_string(),
        cutoffs,
        analytic_min_b_eigenvalue: report.min_b_eigenvalue,
        analytic_npt: report.is_npt,
        fock_min_eigenvalue: fock_min,
        fock_npt,
        agreement: fock_npt == report.is_npt,
        commuting_residual: residual,
        candidate_threshold: candidate,
    };
    emit_json(&out, common.out.as_deref())?;
    Ok(if out.agreement { 0 } else { 1 })
}

#[derive(Serialize)]
struct ReducedWithResidual {
    operator: GaussianOperator,
    traced: ModeSubset,
    cutoffs: Vec<usize>,
    oracle_residual: f64,
}

pub fn partial_trace(
    state: &Path,
    trace_out: &str,
    cutoffs: &[usize],
    method: Method,
    condition_limit: f64,
    common: &Common,
) -> CliResult<i32> {
    let g = load_state(state)?;
    let traced: ModeSubset = trace_out.parse()?;
    traced.check(g.num_modes())?;
    let method = match method {
        Method::Direct => InverseMethod::Direct,
        Method::Block => InverseMethod::BlockFormula,
    };
    let reduced = partial_trace_with(&g, &traced, method, condition_limit)?;
    if cutoffs.is_empty() {
        emit_json(&reduced, common.out.as_deref())?;
        return Ok(0);
    }
    let cutoffs = expand_cutoffs(cutoffs, g.num_modes(), 0)?;
    let kept: Vec<usize> = (0..g.num_modes())
        .filter(|m| !traced.contains(*m))
        .map(|m| cutoffs[m])
        .collect();
    let oracle = ptrace_fock(&to_fock(&g, &cutoffs)?, &traced)?;
    let residual = to_fock(&reduced, &kept)?.max_abs_diff(&oracle)?;
    emit_json(
        &ReducedWithResidual {
            operator: reduced,
            traced,
            cutoffs,
            oracle_residual: residual,
        },
        common.out.as_deref(),
    )?;
    Ok(0)
}

pub fn sweep_phase_damping(
    r: Axis,
    gamma_t: Axis,
    cutoff: usize,
    max_tail: Option<f64>,
    common: &Common,
) -> CliResult<i32> {
    if cutoff < 1 {
        return Err(CliError::precondition("the witness needs cutoff >= 1"));
    }
    let mut trunc = Truncation::new(cutoff);
    if let Some(t) = max_tail {
        trunc = trunc.with_max_tail(t);
    }
    let grid: Vec<(f64, f64)> = r
        .values()
        .into_iter()
        .flat_map(|r| gamma_t.values().into_iter().map(move |g| (r, g)))
        .collect();
    let partition = Bipartition::parse("0|1", 2)?;
    let witness = psi2(&[cutoff, cutoff])?;
    let t = ModeSubset::new([1])?;
    let rows = grid
        .par_iter()
        .map(|&(r, gt)| -> CliResult<Vec<Cell>> {
            let rho = phase_damped_tmsv(&PhaseDampedTmsvSpec::new(r, gt)?, trunc)?;
            let w = expectation(&reduction_operator(&rho, &partition)?, &witness)?.re;
            let min_pt = min_eig(&pt_fock(&rho, &t)?)?;
            Ok(vec![
                Cell::Float(r),
                Cell::Float(gt),
                Cell::Float(w),
                Cell::Float(min_pt),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    write_table(
        &["r", "gamma_t", "witness", "min_pt_eigenvalue"],
        &rows,
        common.json,
        common.out.as_deref(),
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct MixtureReport {
    m: usize,
    cutoff: usize,
    nodes: usize,
    analytic: f64,
    numeric: f64,
    abs_difference: f64,
}

pub fn impure_mixture(
    spec: &Path,
    m: usize,
    cutoff: usize,
    nodes: usize,
    common: &Common,
) -> CliResult<i32> {
    let spec: MixtureSpec = load_json(spec)?;
    let analytic = impure_witness_analytic_with_nodes(&spec, m, nodes)?;
    let witness = witness_psi_m(m, &[cutoff, cutoff])?;
    let rho = impure_squeezed(&spec, Truncation::new(cutoff), nodes)?;
    let numeric = expectation(&pt_fock(&rho, &ModeSubset::new([1])?)?, &witness)?.re;
    let report = MixtureReport {
        m,
        cutoff,
        nodes,
        analytic,
        numeric,
        abs_difference: (analytic - numeric).abs(),
    };
    emit_json(&report, common.out.as_deref())?;
    Ok(0)
}

const THREE_MODE_PARAMS: [&str; 5] = ["zeta12", "zeta13", "zeta23", "lambda", "lambda3"];

fn with_parameter(spec: &ThreeModeSpec, name: &str, value: f64) -> CliResult<ThreeModeSpec> {
    let mut s = *spec;
    match name {
        "zeta12" => s.zeta12 = Complex64::new(value, 0.0),
        "zeta13" => s.zeta13 = Complex64::new(value, 0.0),
        "zeta23" => s.zeta23 = Complex64::new(value, 0.0),
        "lambda" => s.lambda = value,
        "lambda3" => s.lambda3 = value,
        _ => return Err(CliError::parse(format!("unknown parameter {name:?}"))),
    }
    Ok(ThreeModeSpec::new(
        s.zeta12, s.zeta13, s.zeta23, s.lambda, s.lambda3,
    )?)
}

pub fn three_mode_audit(
    spec: Option<&Path>,
    sweep: Option<SweepArg>,
    fix: Vec<Binding>,
    cutoff: usize,
    oracle_tol: f64,
    common: &Common,
    config: &Config,
) -> CliResult<i32> {
    let mut base = match spec {
        Some(p) => load_json(p)?,
        None => ThreeModeSpec::real(0.0, 0.0, 0.0, 0.0)?,
    };
    let points: Vec<ThreeModeSpec> = match sweep {
        Some(arg) => {
            let sweep = SweepSpec::new(arg, fix, common.out.clone(), &THREE_MODE_PARAMS)
                .map_err(CliError::parse)?;
            for b in &sweep.fixed {
                base = with_parameter(&base, &b.name, b.value)?;
            }
            sweep
                .range
                .values()
                .into_iter()
                .map(|v| with_parameter(&base, &sweep.parameter, v))
                .collect::<CliResult<_>>()?
        }
        None => {
            for b in &fix {
                if !THREE_MODE_PARAMS.contains(&b.name.as_str()) {
                    return Err(CliError::parse(format!("unknown parameter {:?}", b.name)));
                }
                base = with_parameter(&base, &b.name, b.value)?;
            }
            vec![base]
        }
    };
    let tol = tolerance(common, config)?;
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, s)| -> CliResult<Vec<Cell>> {
            let row = audit_row(s, cutoff, tol, oracle_tol)?;
            let z = |c: Complex64| [Cell::Float(c.re), Cell::Float(c.im)];
            let mut cells = vec![Cell::Int(i)];
            cells.extend(z(s.zeta12));
            cells.extend(z(s.zeta13));
            cells.extend(z(s.zeta23));
            cells.extend([
                Cell::Float(s.lambda),
                Cell::Float(s.lambda3),
                Cell::Float(row.coupling_sq),
                Cell::Float(row.candidate_bound),
                Cell::Bool(row.candidate_npt),
                Cell::Float(row.omega),
                Cell::Bool(row.analytic_npt),
                Cell::Float(row.fock_min),
                Cell::Bool(row.oracle_npt),
                Cell::Bool(row.candidate_agrees()),
            ]);
            Ok(cells)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let header = [
        "index",
        "zeta12_re",
        "zeta12_im",
        "zeta13_re",
        "zeta13_im",
        "zeta23_re",
        "zeta23_im",
        "lambda",
        "lambda3",
        "coupling_sq",
        "candidate_bound",
        "candidate_npt",
        "omega",
        "analytic_npt",
        "fock_min",
        "oracle_npt",
        "candidate_agrees",
    ];
    write_table(&header, &rows, common.json, common.out.as_deref())?;
    Ok(0)
}
