use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bellforge_core::bell::{
    horodecki_chsh_oracle, seesaw_chsh, seesaw_original_bell, ObservableClass, SeeSawConfig,
};
use bellforge_core::dso::{dykstra_find_extension, verify_marginals, MarginalPattern};
use bellforge_core::states::{
    antisym_projector, antisymmetrizer3, antisymmetrizer3_basis_expansion, dso_general,
    dso_two_qubit, flip, singlet, werner, werner_flip_form,
};
use bellforge_core::textfmt::{parse_matrix, write_matrix};
use bellforge_core::{DensityOperator, TensorOperator};

use crate::report::{Check, RunReport};
use crate::CliError;

pub const MIN_D: usize = 2;
pub const MAX_D: usize = 6;

/// Tolerance for validating `file:` states as density operators.
pub const STATE_FILE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSource {
    Werner,
    Singlet,
    File(PathBuf),
}

impl std::str::FromStr for StateSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "werner" => Ok(Self::Werner),
            "singlet" => Ok(Self::Singlet),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
                _ => Err(format!(
                    "unknown state {s:?}; expected werner, singlet, or file:PATH"
                )),
            },
        }
    }
}

impl std::fmt::Display for StateSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Werner => f.write_str("werner"),
            Self::Singlet => f.write_str("singlet"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn check_d(d: usize) -> Result<(), CliError> {
    if !(MIN_D..=MAX_D).contains(&d) {
        return Err(CliError::Usage(format!(
            "--d must be between {MIN_D} and {MAX_D}, got {d}"
        )));
    }
    Ok(())
}

fn load_state_file(path: &Path) -> Result<DensityOperator, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let op =
        parse_matrix(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let dims = op.dims().to_vec();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(CliError::InvalidInput(format!(
            "{}: expected a bipartite state on [d, d], got dims {dims:?}",
            path.display()
        )));
    }
    DensityOperator::with_tol(op, STATE_FILE_TOL).map_err(|e| {
        CliError::InvalidInput(format!("{}: not a density operator: {e}", path.display()))
    })
}

/// Resolves the state and its local dimension.
pub fn resolve_state(
    source: &StateSource,
    d: Option<usize>,
) -> Result<(DensityOperator, usize), CliError> {
    match source {
        StateSource::Werner => {
            let d =
                d.ok_or_else(|| CliError::Usage("--d is required for the Werner state".into()))?;
            check_d(d)?;
            Ok((werner(d).map_err(core_usage)?, d))
        }
        StateSource::Singlet => match d {
            None | Some(2) => Ok((singlet(), 2)),
            Some(other) => Err(CliError::Usage(format!(
                "the singlet is a two-qubit state; got --d {other}"
            ))),
        },
        StateSource::File(path) => {
            let rho = load_state_file(path)?;
            let file_d = rho.dims()[0];
            if let Some(d) = d {
                if d != file_d {
                    return Err(CliError::Usage(format!(
                        "--d {d} does not match the state file (d = {file_d})"
                    )));
                }
            }
            check_d(file_d)?;
            Ok((rho, file_d))
        }
    }
}

fn core_usage(e: bellforge_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn dist(a: &TensorOperator, b: &TensorOperator) -> f64 {
    a.frobenius_distance(b).expect("operands share dims")
}

fn psd_deficit(t: &TensorOperator) -> Result<f64, CliError> {
    Ok((-t.min_eigenvalue().map_err(core_usage)?).max(0.0))
}

/// Algebraic identity checks for local dimension `d`.
pub fn cmd_verify(d: usize, tol: f64) -> Result<RunReport, CliError> {
    check_d(d)?;
    let start = Instant::now();
    let mut report = RunReport::new("verify");
    report.param("d", d).param("tol", tol);
    let df = d as f64;
    let e = core_usage;

    let v = flip(d).map_err(e)?;
    let id2 = TensorOperator::identity(vec![d, d]).map_err(e)?;
    report.check(
        "flip_squares_to_identity",
        Check::at_most(dist(&(&v * &v), &id2), tol),
    );
    report.check("flip_trace", Check::at_most((v.trace().re - df).abs(), tol));
    report.check(
        "flip_self_adjoint",
        Check::at_most(v.hermiticity_defect(), tol),
    );

    let p = antisym_projector(d).map_err(e)?;
    report.check(
        "antisym_projector_idempotent",
        Check::at_most(dist(&(&p * &p), &p), tol),
    );
    report.check(
        "antisym_projector_trace",
        Check::at_most((p.trace().re - df * (df - 1.0) / 2.0).abs(), tol),
    );

    let w = werner(d).map_err(e)?;
    report.check(
        "werner_forms_agree",
        Check::at_most(dist(w.op(), &werner_flip_form(d).map_err(e)?), tol),
    );
    report.check(
        "werner_unit_trace",
        Check::at_most((w.op().trace().re - 1.0).abs(), tol),
    );
    report.check(
        "werner_psd_deficit",
        Check::at_most(psd_deficit(w.op())?, tol),
    );

    let q = antisymmetrizer3(d).map_err(e)?;
    report.check(
        "antisymmetrizer_hermitian",
        Check::at_most(q.hermiticity_defect(), tol),
    );
    report.check(
        "antisymmetrizer_idempotent",
        Check::at_most(dist(&(&q * &q), &q), tol),
    );
    report.check(
        "antisymmetrizer_trace",
        Check::at_most(
            (q.trace().re - df * (df - 1.0) * (df - 2.0) / 6.0).abs(),
            tol,
        ),
    );
    report.check(
        "antisymmetrizer_basis_expansion",
        Check::at_most(
            dist(&q, &antisymmetrizer3_basis_expansion(d).map_err(e)?),
            tol,
        ),
    );
    let scaled_p = p.scale((df - 2.0) / 3.0);
    for j in 1..=3 {
        report.check(
            format!("antisymmetrizer_marginal_{j}"),
            Check::at_most(dist(&q.partial_trace(j).map_err(e)?, &scaled_p), tol),
        );
    }

    let (t, pattern) = if d == 2 {
        (
            dso_two_qubit().map_err(e)?,
            MarginalPattern::right_pair(&w).map_err(e)?,
        )
    } else {
        (
            dso_general(d).map_err(e)?,
            MarginalPattern::symmetric(&w).map_err(e)?,
        )
    };
    report.param(
        "source_operator",
        if d == 2 { "two_qubit" } else { "symmetric" },
    );
    report.check(
        "source_operator_unit_trace",
        Check::at_most((t.op().trace().re - 1.0).abs(), tol),
    );
    report.check(
        "source_operator_psd_deficit",
        Check::at_most(psd_deficit(t.op())?, tol),
    );
    let marginals = verify_marginals(t.op(), &pattern, tol).map_err(e)?;
    for (j, r) in marginals.residuals {
        report.check(
            format!("source_operator_marginal_{j}"),
            Check::at_most(r, tol),
        );
    }

    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    Original,
    Chsh,
}

#[derive(Debug, Clone)]
pub struct BellArgs {
    pub d: Option<usize>,
    pub functional: Functional,
    pub state: StateSource,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_sweeps: usize,
    pub observables: ObservableClass,
}

/// Agreement threshold between the spin-observable see-saw and the
/// closed-form two-qubit CHSH maximum.
pub const ORACLE_TOL: f64 = 1e-4;

pub fn cmd_bell(args: &BellArgs) -> Result<(RunReport, Vec<String>), CliError> {
    let start = Instant::now();
    let (rho, d) = resolve_state(&args.state, args.d)?;
    if args.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    if args.observables == ObservableClass::Spin && d != 2 {
        return Err(CliError::Usage("spin observables need d = 2".into()));
    }
    let cfg = SeeSawConfig {
        restarts: args.restarts,
        max_sweeps: args.max_sweeps,
        base_seed: args.seed,
        observables: args.observables,
        ..Default::default()
    };
    let mut report = RunReport::new("bell");
    report
        .param("d", d)
        .param(
            "functional",
            match args.functional {
                Functional::Original => "original",
                Functional::Chsh => "chsh",
            },
        )
        .param("state", args.state.to_string())
        .param(
            "observables",
            match args.observables {
                ObservableClass::NormBounded => "bounded",
                ObservableClass::Spin => "spin",
            },
        )
        .param("restarts", args.restarts)
        .param("seed", args.seed)
        .param("max_sweeps", args.max_sweeps)
        .param("convergence_eps", cfg.convergence_eps)
        .param("tol", args.tol);

    let mut notes = Vec::new();
    let result = match args.functional {
        Functional::Original => seesaw_original_bell(&rho, &cfg),
        Functional::Chsh => seesaw_chsh(&rho, &cfg),
    }
    .map_err(core_usage)?;

    let bound = match args.functional {
        Functional::Original => 0.0,
        Functional::Chsh => 2.0,
    };
    let check = Check::at_most(result.best_value, bound + args.tol);
    if !check.pass {
        notes.push(format!(
            "VIOLATION: best value {:.12} exceeds the classical bound {bound}",
            result.best_value
        ));
    }
    report.check("best_value", check);
    notes.push(format!(
        "best restart {} (sweeps {}), observables {}",
        result.restart_index,
        result.sweeps_used,
        result
            .observables
            .iter()
            .map(|o| o.label())
            .collect::<Vec<_>>()
            .join(", ")
    ));

    if args.functional == Functional::Chsh && d == 2 {
        let oracle = horodecki_chsh_oracle(&rho).map_err(core_usage)?;
        notes.push(format!(
            "closed-form spin-observable CHSH maximum: {oracle:.12}"
        ));
        if args.observables == ObservableClass::Spin {
            report.check(
                "spin_oracle_agreement",
                Check::at_most((result.best_value - oracle).abs(), ORACLE_TOL),
            );
        }
    }

    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok((report, notes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Sym3,
    Right2,
}

#[derive(Debug, Clone)]
pub struct DsoFindArgs {
    pub d: Option<usize>,
    pub state: StateSource,
    pub pattern: PatternKind,
    pub iters: usize,
    pub tol: f64,
    pub dump: Option<PathBuf>,
}

pub fn cmd_dso_find(args: &DsoFindArgs) -> Result<(RunReport, Vec<String>), CliError> {
    let start = Instant::now();
    let (rho, d) = resolve_state(&args.state, args.d)?;
    let pattern = match args.pattern {
        PatternKind::Sym3 => MarginalPattern::symmetric(&rho),
        PatternKind::Right2 => MarginalPattern::right_pair(&rho),
    }
    .map_err(core_usage)?;
    let mut report = RunReport::new("dso-find");
    report
        .param("d", d)
        .param("state", args.state.to_string())
        .param(
            "pattern",
            match args.pattern {
                PatternKind::Sym3 => "sym3",
                PatternKind::Right2 => "right2",
            },
        )
        .param("iters", args.iters)
        .param("tol", args.tol);

    let res = dykstra_find_extension(&rho, &pattern, args.iters, args.tol).map_err(core_usage)?;
    // `pass` on this entry is the convergence flag.
    report.check("converged", Check::at_most(res.residual, args.tol));

    let mut notes = vec![if res.converged {
        format!(
            "extension found after {} iteration(s), residual {:.3e}",
            res.iterations, res.residual
        )
    } else {
        format!(
            "no extension found within {} iterations (best residual {:.3e})",
            args.iters, res.residual
        )
    }];
    if let Some(path) = &args.dump {
        fs::write(path, write_matrix(&res.candidate))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        notes.push(format!("candidate written to {}", path.display()));
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok((report, notes))
}
