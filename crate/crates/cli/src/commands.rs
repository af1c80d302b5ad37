use std::fs::File;
use std::io::{self, BufWriter, Write};

use qpt_core::criticality::{
    coefficient_report, fit_observable, fit_observable_best, parse_observables, sweep, DerivativeSettings, FitWindow,
    Law, Observable, ScalingFit, Side, SweepSpec, REPORT_OBSERVABLES,
};
use qpt_core::exactdiag::dynamics::{FIT_LAMBDA_TAU, MAX_LAMBDA_TAU};
use qpt_core::exactdiag::{fit_short_time, ExactChain};
use qpt_core::freefermion::correlators_thermo;
use qpt_core::model::validate;
use qpt_core::quadrature::QuadratureSettings;
use qpt_core::{
    accels_from_correlators, gaps_from_correlators, verify, Axis, CorrelatorSet, Error, LatticeSpec, ModelParams,
};
use serde_json::{Map, Value};

use crate::output::{axes, fmt_num, num, record, write_json, write_sweep_csv, SCHEMA_VERSION};
use crate::{Cmd, DynamicsArgs, Failure, FitArgs, PointArgs, ReportArgs, SweepArgs, VerifyArgs};

type Outcome = Result<(), Failure>;

pub fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Correlators(a) => correlators(&a),
        Cmd::Gaps(a) => point_observable(&a, Kind::Gaps),
        Cmd::Accel(a) => point_observable(&a, Kind::Accels),
        Cmd::Dynamics(a) => dynamics(&a),
        Cmd::Sweep(a) => run_sweep(&a),
        Cmd::Fit(a) => fit(&a),
        Cmd::Report(a) => report(&a),
        Cmd::Verify(a) => run_verify(&a),
    }
}

fn emit(value: Value) -> Outcome {
    let stdout = io::stdout();
    write_json(&mut stdout.lock(), &value)?;
    Ok(())
}

/// Correlators of a point plus the finite-lattice solver, if one was built.
struct Solved {
    params: ModelParams<f64>,
    lattice: LatticeSpec,
    chain: Option<ExactChain>,
    correlators: CorrelatorSet<f64>,
}

fn solve(a: &PointArgs) -> Result<Solved, Error> {
    let params = ModelParams::new(a.gamma, a.lambda)?;
    let lattice = a.lattice();
    validate(&params, lattice)?;
    let (chain, correlators) = match lattice {
        LatticeSpec::Finite(n) => {
            let chain = ExactChain::new(params, n)?;
            let c = chain.correlators()?;
            (Some(chain), c)
        }
        LatticeSpec::Thermodynamic => (None, correlators_thermo(&params, &QuadratureSettings::default())?),
    };
    Ok(Solved {
        params,
        lattice,
        chain,
        correlators,
    })
}

fn header(kind: &str, s: &Solved) -> Map<String, Value> {
    let mut m = record(kind);
    m.insert("gamma".into(), num(s.params.gamma));
    m.insert("lambda".into(), num(s.params.lambda));
    let (sites, provenance) = match s.lattice {
        LatticeSpec::Finite(n) => (Value::from(n), "ed"),
        LatticeSpec::Thermodynamic => (Value::Null, "quadrature"),
    };
    m.insert("sites".into(), sites);
    m.insert("provenance".into(), Value::from(provenance));
    m
}

fn correlators(a: &PointArgs) -> Outcome {
    let s = solve(a)?;
    let mut m = header("correlators", &s);
    for (name, v) in CorrelatorSet::<f64>::NAMES.iter().zip(s.correlators.to_array()) {
        m.insert((*name).into(), num(v));
    }
    emit(Value::Object(m))
}

#[derive(Clone, Copy)]
enum Kind {
    Gaps,
    Accels,
}

fn point_observable(a: &PointArgs, kind: Kind) -> Outcome {
    let s = solve(a)?;
    let (name, formula) = match kind {
        Kind::Gaps => ("gaps", gaps_from_correlators(&s.params, &s.correlators).to_array()),
        Kind::Accels => ("accel", accels_from_correlators(&s.params, &s.correlators).to_array()),
    };
    let mut m = header(name, &s);
    m.insert("formula".into(), axes(formula));
    if let Some(chain) = &s.chain {
        let mut direct = [0.0; 3];
        for (d, axis) in direct.iter_mut().zip(Axis::ALL) {
            *d = match kind {
                Kind::Gaps => chain.gap_direct(axis)?,
                Kind::Accels => chain.accel_direct(axis)?,
            };
        }
        let difference = std::array::from_fn(|i| formula[i] - direct[i]);
        m.insert("direct".into(), axes(direct));
        m.insert("difference".into(), axes(difference));
    }
    emit(Value::Object(m))
}

fn dynamics(a: &DynamicsArgs) -> Outcome {
    let params = ModelParams::new(a.gamma, a.lambda)?;
    validate(&params, LatticeSpec::Finite(a.size))?;
    if a.steps < 2 {
        return Err(Error::InsufficientPoints { got: a.steps, need: 2 }.into());
    }
    let tau_max = a.tau_max.unwrap_or(FIT_LAMBDA_TAU / a.lambda);
    if !(tau_max > 0.0) || a.lambda * tau_max > MAX_LAMBDA_TAU {
        return Err(Error::InvalidArgument(format!(
            "lambda * tau_max = {} must lie in (0, {}]",
            a.lambda * tau_max,
            MAX_LAMBDA_TAU
        ))
        .into());
    }
    let taus: Vec<f64> = (0..=a.steps)
        .map(|i| {
            if i == a.steps {
                tau_max
            } else {
                tau_max * i as f64 / a.steps as f64
            }
        })
        .collect();
    let chain = ExactChain::new(params, a.size)?;
    let series = chain.short_time_series(a.axis, &taus)?;
    let fit = fit_short_time(a.lambda, &series)?;
    let accel = accels_from_correlators(&params, &chain.correlators()?).get(a.axis);
    let predicted = -4.0 * accel * a.lambda * a.lambda;

    let mut m = record("dynamics");
    m.insert("gamma".into(), num(a.gamma));
    m.insert("lambda".into(), num(a.lambda));
    m.insert("sites".into(), Value::from(a.size));
    m.insert("axis".into(), Value::from(a.axis.name()));
    m.insert("provenance".into(), Value::from("ed"));
    m.insert(
        "series".into(),
        Value::Array(
            series
                .iter()
                .map(|&(t, z)| Value::Array(vec![num(t), num(z)]))
                .collect(),
        ),
    );
    m.insert("fitted_quadratic".into(), num(fit.quadratic));
    m.insert("fitted_quartic".into(), num(fit.quartic));
    m.insert("fit_points".into(), Value::from(fit.points));
    m.insert("predicted_quadratic".into(), num(predicted));
    m.insert("difference".into(), num(fit.quadratic - predicted));
    emit(Value::Object(m))
}

fn run_sweep(a: &SweepArgs) -> Outcome {
    let mut spec = SweepSpec::new(
        a.gamma,
        a.lambda_min,
        a.lambda_max,
        a.points,
        parse_observables(&a.observables)?,
    );
    spec.spacing = a.spacing;
    spec.with_derivative = a.derivative;
    if let Some(f) = a.log_floor {
        spec.log_floor = f;
    }
    spec.check()?;
    let table = sweep(&spec, &DerivativeSettings::default())?;
    for row in table.rows.iter().filter(|r| !r.is_ok()) {
        let err = match (&row.value, &row.derivative) {
            (Err(e), _) | (_, Some(Err(e))) => e.to_string(),
            _ => unreachable!("row failed without an error"),
        };
        eprintln!(
            "warning: gamma={} lambda={} {}: {err}",
            row.gamma,
            row.lambda,
            row.observable.name()
        );
    }
    match &a.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_sweep_csv(&mut w, &table)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_sweep_csv(&mut w, &table)?;
            w.flush()?;
        }
    }
    if table.success_fraction() < 0.9 {
        return Err(Failure::Sweep {
            failed: table.failed_points,
            points: table.points,
        });
    }
    Ok(())
}

fn fit_record(target: Observable, gamma: f64, fit: &ScalingFit<f64>) -> Value {
    let mut m = Map::new();
    m.insert("law".into(), Value::from(fit.law.name()));
    m.insert("target".into(), Value::from(target.name()));
    m.insert("gamma".into(), num(gamma));
    m.insert("side".into(), Value::from(fit.side.name()));
    m.insert("coefficient".into(), num(fit.coefficient));
    m.insert("intercept".into(), num(fit.intercept));
    m.insert("stderr".into(), num(fit.stderr));
    m.insert("window_min".into(), num(fit.window.0));
    m.insert("window_max".into(), num(fit.window.1));
    m.insert("n_points".into(), Value::from(fit.n_points));
    m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    Value::Object(m)
}

fn fit(a: &FitArgs) -> Outcome {
    let target: Observable = a.target.parse()?;
    let default = a.law.default_window();
    let window = FitWindow {
        min: a.window_min.unwrap_or(default.min),
        max: a.window_max.unwrap_or(default.max),
        points: a.window_points.unwrap_or(default.points),
    };
    let settings = DerivativeSettings::default();
    let side = a.side.trim().to_ascii_lowercase();
    let fit = match (a.law, side.as_str()) {
        (Law::Log, "best") => fit_observable_best(target, a.gamma, &window, &settings)?.0,
        (Law::InvSqrt, "best") => fit_observable(target, a.gamma, Law::InvSqrt, Side::Above, &window, &settings)?,
        (law, s) => fit_observable(target, a.gamma, law, s.parse()?, &window, &settings)?,
    };
    emit(fit_record(target, a.gamma, &fit))
}

fn report(a: &ReportArgs) -> Outcome {
    let gammas: Vec<f64> = a
        .gammas
        .split(',')
        .map(|g| {
            g.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("gamma `{}` is not a number", g.trim())))
        })
        .collect::<Result<_, _>>()?;
    let rows = coefficient_report(&gammas, &DerivativeSettings::default())?;
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    writeln!(
        w,
        "gamma,name,side,coefficient,intercept,stderr,window_min,window_max,n_points"
    )?;
    for row in &rows {
        for (obs, cell) in REPORT_OBSERVABLES.iter().zip(&row.best) {
            match cell {
                Ok(f) => writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_num(row.gamma),
                    obs.name(),
                    f.side,
                    fmt_num(f.coefficient),
                    fmt_num(f.intercept),
                    fmt_num(f.stderr),
                    fmt_num(f.window.0),
                    fmt_num(f.window.1),
                    f.n_points
                )?,
                Err(e) => {
                    eprintln!("warning: gamma={} {}: {e}", row.gamma, obs.name());
                    writeln!(w, "{},{},,nan,nan,nan,nan,nan,0", fmt_num(row.gamma), obs.name())?
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let report = verify::run(a.suite, a.seed);
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for check in &report.checks {
        writeln!(w, "{check}")?;
    }
    let failed = report.failures().count();
    writeln!(
        w,
        "{} checks, {} passed, {failed} failed",
        report.checks.len(),
        report.checks.len() - failed
    )?;
    if failed > 0 {
        return Err(Failure::Verify(failed));
    }
    Ok(())
}
