use std::f64::consts::PI;

use qpt_core::criticality::{
    coefficient_report, derivative_lambda, derivatives_lambda, evaluate, fit_inverse_sqrt, fit_log_divergence,
    fit_observable, fit_observable_best, sweep, window_lambdas, CoefficientRow, DerivativeSettings, FitWindow, Law,
    Observable, ScalingFit, Side, Spacing, SweepSpec,
};
use qpt_core::exactdiag::{extrapolate_thermo, ExactChain};
use qpt_core::observables::{accels_from_correlators, gaps_from_correlators};
use qpt_core::{Axis, ModelParams};

const EX: Observable = Observable::Gap(Axis::X);
const EY: Observable = Observable::Gap(Axis::Y);
const EZ: Observable = Observable::Gap(Axis::Z);
const LX: Observable = Observable::Accel(Axis::X);
const LZ: Observable = Observable::Accel(Axis::Z);

fn p(g: f64, l: f64) -> ModelParams<f64> {
    ModelParams::new(g, l).unwrap()
}

fn ds() -> DerivativeSettings<f64> {
    DerivativeSettings::default()
}

fn best(row: &CoefficientRow<f64>, o: Observable) -> ScalingFit<f64> {
    row.get(o).unwrap().clone().unwrap()
}

/// Observables from finite-ring correlators (doublet-averaged in the ordered phase).
fn ed_observables(os: &[Observable], params: ModelParams<f64>, n: usize) -> Vec<f64> {
    let c = ExactChain::new(params, n).unwrap().doublet_correlators().unwrap();
    let v = qpt_core::criticality::ObservableValues {
        correlators: c,
        gaps: gaps_from_correlators(&params, &c),
        accels: accels_from_correlators(&params, &c),
    };
    os.iter().map(|o| o.select(&v)).collect()
}

/// λ-derivatives of the extrapolated finite-ring pipeline with their
/// uncertainties, from rings of 10, 12 and 14 sites.
fn ed_derivatives(os: &[Observable], g: f64, l: f64) -> Vec<(f64, f64)> {
    let h = 1e-3;
    let sizes = [10, 12, 14];
    let per_size: Vec<Vec<(f64, f64)>> = sizes
        .iter()
        .map(|&n| {
            let at = |x: f64| ed_observables(os, p(g, x), n);
            let (up1, down1, up2, down2) = (at(l + h), at(l - h), at(l + h / 2.0), at(l - h / 2.0));
            (0..os.len())
                .map(|i| {
                    let d1 = (up1[i] - down1[i]) / (2.0 * h);
                    let d2 = (up2[i] - down2[i]) / h;
                    ((4.0 * d2 - d1) / 3.0, (d2 - d1).abs() / 3.0)
                })
                .collect()
        })
        .collect();
    (0..os.len())
        .map(|i| {
            let values: Vec<f64> = per_size.iter().map(|r| r[i].0).collect();
            let truncation = per_size.iter().map(|r| r[i].1).fold(0.0, f64::max);
            let e = extrapolate_thermo(&sizes, &values).unwrap();
            // the last raw increment bounds corrections the single-exponential model misses
            let increment = (values[2] - values[1]).abs();
            (e.value, e.uncertainty + increment + truncation)
        })
        .collect()
}

#[test]
fn polarized_derivative_vanishes() {
    let d = derivative_lambda(EX, &p(0.0, 0.5), &ds()).unwrap();
    assert!(d.value.abs() < 1e-8);
    assert!(d.error_estimate >= 0.0);
}

#[test]
fn isotropic_gap_slope_closed_form() {
    // d/dλ (8/π)·sqrt(λ²−1) = (8/π)·λ/sqrt(λ²−1)
    let l: f64 = 1.25;
    let d = derivative_lambda(EZ, &p(0.0, l), &ds()).unwrap();
    let exact = 8.0 / PI * l / (l * l - 1.0).sqrt();
    assert!(((d.value - exact) / exact).abs() < 1e-3);
    assert!((exact - 4.244131815783876).abs() < 1e-12);
}

#[test]
fn ising_acceleration_slope_fixture_and_oracle() {
    let d = derivative_lambda(LZ, &p(1.0, 0.5), &ds()).unwrap();
    // independent quadrature with its own Richardson differences
    assert!((d.value - 0.2677764287401703).abs() < 1e-7, "{}", d.value);
    let (ed, unc) = ed_derivatives(&[LZ], 1.0, 0.5)[0];
    assert!(
        (d.value - ed).abs() <= d.error_estimate + unc,
        "{} vs {ed} ± {unc}",
        d.value
    );
}

#[test]
fn derivative_matches_finite_ring_pipeline_at_spot_points() {
    let spots = [(1.0, 0.5), (1.0, 1.5), (0.5, 0.7), (0.5, 2.0), (0.75, 1.3)];
    for (g, l) in spots {
        let os = [EX, EY, EZ, LX, LZ];
        let quad = derivatives_lambda(&os, &p(g, l), &ds()).unwrap();
        let oracle = ed_derivatives(&os, g, l);
        for ((o, d), (ed, unc)) in os.into_iter().zip(quad).zip(oracle) {
            let d = d.unwrap();
            assert!(
                (d.value - ed).abs() <= d.error_estimate + unc,
                "{o} at ({g}, {l}): {} vs {ed} ± {unc}",
                d.value
            );
        }
    }
}

#[test]
fn derivative_refuses_critical_point() {
    assert!(derivative_lambda(EZ, &p(0.5, 1.0), &ds()).is_err());
}

#[test]
fn synthetic_laws() {
    let pts: Vec<(f64, f64)> = window_lambdas(Side::Below, &FitWindow::LOG)
        .into_iter()
        .map(|l: f64| (l, -1.276 * (l - 1.0).abs().ln() + 0.3))
        .collect();
    assert!((fit_log_divergence(&pts, Side::Below).unwrap().coefficient + 1.276).abs() < 1e-10);
    let pts: Vec<(f64, f64)> = window_lambdas(Side::Above, &FitWindow::INV_SQRT)
        .into_iter()
        .map(|l: f64| (l, 2.5 / (l * l - 1.0).sqrt()))
        .collect();
    assert!((fit_inverse_sqrt(&pts).unwrap().coefficient - 2.5).abs() < 1e-10);
}

#[test]
fn ising_gap_log_coefficient() {
    let (fit, _) = fit_observable_best(EZ, 1.0, &FitWindow::LOG, &ds()).unwrap();
    assert!((fit.coefficient + 1.276).abs() <= 0.02, "{}", fit.coefficient);
    assert_eq!(fit.n_points, 25);
}

#[test]
fn anisotropic_acceleration_log_coefficient() {
    let (fit, _) = fit_observable_best(LX, 0.5, &FitWindow::LOG, &ds()).unwrap();
    assert!((fit.coefficient + 0.399).abs() <= 0.02, "{}", fit.coefficient);
}

#[test]
fn isotropic_gap_inverse_sqrt_coefficient() {
    let fit = fit_observable(EZ, 0.0, Law::InvSqrt, Side::Above, &FitWindow::INV_SQRT, &ds()).unwrap();
    assert!(
        ((fit.coefficient - 8.0 / PI) / (8.0 / PI)).abs() <= 0.01,
        "{}",
        fit.coefficient
    );
}

#[test]
fn inverse_sqrt_requires_upper_side() {
    assert!(fit_observable(EZ, 0.0, Law::InvSqrt, Side::Below, &FitWindow::INV_SQRT, &ds()).is_err());
    let too_wide = FitWindow {
        min: 1e-6,
        ..FitWindow::INV_SQRT
    };
    assert!(fit_observable(EZ, 0.0, Law::InvSqrt, Side::Above, &too_wide, &ds()).is_err());
}

#[test]
fn gap_coefficients_mirror_each_other() {
    // c_y = −c_x within the combined standard error of the two fits
    let rows = coefficient_report(&[0.25, 0.5, 0.75, 1.0], &ds()).unwrap();
    for row in &rows {
        let (x, y) = (best(row, EX), best(row, EY));
        let combined = x.stderr + y.stderr;
        assert!(
            (x.coefficient + y.coefficient).abs() <= combined,
            "gamma {}: c_x {} ± {}, c_y {} ± {}",
            row.gamma,
            x.coefficient,
            x.stderr,
            y.coefficient,
            y.stderr
        );
    }
}

#[test]
fn gap_coefficient_c_x_is_universal() {
    let rows = coefficient_report(&[0.25, 0.5, 0.75, 1.0], &ds()).unwrap();
    let cx: Vec<f64> = rows.iter().map(|r| best(r, EX).coefficient).collect();
    let reference = cx[3];
    for (row, c) in rows.iter().zip(&cx) {
        assert!((c - reference).abs() <= 0.01, "gamma {}: {c} vs {reference}", row.gamma);
    }
}

#[test]
fn ising_acceleration_z_has_no_log_divergence() {
    let rows = coefficient_report(&[1.0], &ds()).unwrap();
    assert!(best(&rows[0], LZ).coefficient.abs() <= 0.01);
}

#[test]
fn acceleration_z_coefficient_decreases_toward_ising() {
    let rows = coefficient_report(&[0.75, 0.9, 0.99], &ds()).unwrap();
    let dz: Vec<f64> = rows.iter().map(|r| best(r, LZ).coefficient.abs()).collect();
    assert!(dz[0] > dz[1] && dz[1] > dz[2], "{dz:?}");
}

#[test]
fn isotropic_transverse_gap_slope_stays_finite() {
    let (fit, _) = fit_observable_best(EX, 0.0, &FitWindow::LOG, &ds()).unwrap();
    assert!(fit.coefficient.abs() <= 3.0 * fit.stderr + 1e-12, "{fit:?}");
    let reference = derivative_lambda(EX, &p(0.0, 1.1), &ds()).unwrap().value.abs();
    for i in 1..=50 {
        let l = 1.0 + 0.01 * i as f64 / 50.0;
        let d = derivative_lambda(EX, &p(0.0, l), &ds()).unwrap().value.abs();
        assert!(d < 10.0 * reference, "{l}: {d}");
    }
}

#[test]
fn report_rejects_isotropic_row() {
    assert!(coefficient_report(&[0.0], &ds()).is_err());
    assert!(coefficient_report(&[1.2], &ds()).is_err());
}

#[test]
fn polarized_sweep() {
    let mut spec = SweepSpec::new(0.0, 0.2, 0.9, 15, vec![EZ]);
    spec.with_derivative = true;
    let t = sweep(&spec, &ds()).unwrap();
    assert_eq!(t.rows.len(), 15);
    for r in &t.rows {
        assert!(r.value.clone().unwrap().abs() < 1e-10);
        assert!(r.derivative.clone().unwrap().unwrap().value.abs() < 1e-8);
    }
}

#[test]
fn ising_gap_slope_peaks_at_critical_point() {
    let mut spec = SweepSpec::new(1.0, 0.5, 1.5, 101, vec![EZ]);
    spec.spacing = Spacing::LogTowardCritical;
    spec.with_derivative = true;
    let t = sweep(&spec, &ds()).unwrap();
    assert_eq!(t.failed_points, 0);
    let (peak, _) = t
        .rows
        .iter()
        .map(|r| (r.lambda, r.derivative.clone().unwrap().unwrap().value))
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    assert!((peak - 1.0).abs() <= 1e-4 * 1.0001, "peak at {peak}");
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let mut spec = SweepSpec::new(0.6, 0.8, 1.2, 21, vec![EX, LZ]);
    spec.with_derivative = true;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep(&spec, &ds()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn sweep_values_match_pointwise_evaluation() {
    let spec = SweepSpec::new(0.3, 0.5, 2.0, 4, vec![LX]);
    let t = sweep(&spec, &ds()).unwrap();
    for r in &t.rows {
        let v = evaluate(&p(0.3, r.lambda), &ds().quadrature).unwrap();
        assert_eq!(r.value.clone().unwrap(), LX.select(&v));
        assert!(r.derivative.is_none());
    }
}
