use qpt_core::criticality::evaluate;
use qpt_core::freefermion::{contraction, correlators_thermo};
use qpt_core::quadrature::QuadratureSettings;
use qpt_core::verify::oracle_correlators;
use qpt_core::{CorrelatorSet, ModelParams};

fn p(g: f64, l: f64) -> ModelParams<f64> {
    ModelParams::new(g, l).unwrap()
}

fn s() -> QuadratureSettings<f64> {
    QuadratureSettings::default()
}

/// Pins which contraction distance and sign feeds each correlator.
#[test]
fn oracle_orientation() {
    let params = p(1.0, 2.0);
    let (ed, unc) = oracle_correlators(&params, &[8, 10, 12]).unwrap();
    let g_minus = contraction(&params, -1, &s()).unwrap();
    assert!((g_minus - ed.g_xx).abs() < 1e-4f64.max(unc.g_xx));
    let g_plus = contraction(&params, 1, &s()).unwrap();
    assert!((g_plus - ed.g_yy).abs() < 1e-4f64.max(unc.g_yy));
    // the two orientations differ by far more than the tolerance here
    assert!((g_minus - g_plus).abs() > 0.5);
}

#[test]
fn anisotropic_ordered_point_matches_oracle() {
    let params = p(0.5, 1.5);
    let (ed, unc) = oracle_correlators(&params, &[8, 10, 12]).unwrap();
    let thermo = correlators_thermo(&params, &s()).unwrap();
    for ((a, b), u) in ed.to_array().iter().zip(thermo.to_array()).zip(unc.to_array()) {
        assert!((a - b).abs() <= 1e-4f64.max(u), "{a} vs {b}");
    }
}

#[test]
fn anisotropic_fixture() {
    // frozen from an independent adaptive quadrature of the same kernel
    let c = correlators_thermo(&p(0.5, 2.0), &s()).unwrap();
    let expected = CorrelatorSet::new(
        -0.29665691709389536,
        0.8858695842358637,
        0.1237042736647066,
        -0.32343177414251567,
        -0.03927853547302349,
    );
    assert!(c.max_abs_diff(&expected) < 1e-11, "{c:?}");
    let v = evaluate(&p(0.5, 2.0), &s()).unwrap();
    let gaps = [0.8407223815172039, 5.908531339602973, 5.562626052744595];
    let accels = [0.7867143952417968, 0.17537000179045206, -0.5170990213914057];
    for i in 0..3 {
        assert!((v.gaps.to_array()[i] - gaps[i]).abs() < 1e-10);
        assert!((v.accels.to_array()[i] - accels[i]).abs() < 1e-10);
    }
}

#[test]
fn isotropic_symmetry() {
    for l in [0.4, 1.2, 3.0] {
        let c = correlators_thermo(&p(0.0, l), &s()).unwrap();
        assert!((c.g_xx - c.g_yy).abs() < 1e-10);
        assert!((c.g_xzx - c.g_yzy).abs() < 1e-10);
    }
}

#[test]
fn strong_coupling_ising_asymptotics() {
    let c10 = correlators_thermo(&p(1.0, 10.0), &s()).unwrap();
    let c100 = correlators_thermo(&p(1.0, 100.0), &s()).unwrap();
    assert!((c100.g_xx - 1.0).abs() < (c10.g_xx - 1.0).abs());
    assert!(c100.m_z.abs() < c10.m_z.abs());
}

#[test]
fn continuous_across_critical_point() {
    for g in [0.0, 0.5, 1.0] {
        let below = correlators_thermo(&p(g, 1.0 - 1e-7), &s()).unwrap();
        let above = correlators_thermo(&p(g, 1.0 + 1e-7), &s()).unwrap();
        assert!(below.max_abs_diff(&above) < 1e-3, "gamma {g}");
    }
}

#[test]
fn correlators_stay_in_unit_range() {
    for params in qpt_core::verify::random_grid(17, 40) {
        let c = correlators_thermo(&params, &s()).unwrap();
        assert!(c.in_unit_range(1e-12), "{params:?}");
    }
}
