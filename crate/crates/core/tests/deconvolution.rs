use harmonic_na::abel::InversionCalibration;
use harmonic_na::cli::run;
use harmonic_na::deconvolve::{demo, DemoSettings};
use harmonic_na::htype::build_htype;
use harmonic_na::meanvalue::ZonalSphereRule;
use harmonic_na::quad::QuadratureSpec;

#[test]
fn bump_is_recovered_from_its_sphere_mean() {
    let alg = build_htype(1, 1).unwrap();
    let settings = DemoSettings::default();
    let cal = InversionCalibration::analytic(&alg, settings.lambda_max);
    let rule = ZonalSphereRule::new(&alg, 160, 32).unwrap();
    let rep = demo(&alg, settings, &cal, &QuadratureSpec::default(), &rule).unwrap();
    assert!(rep.recovery_error < 1e-2, "recovery {}", rep.recovery_error);
    assert!(rep.residual.relative_residual < 1e-2, "residual {}", rep.residual.relative_residual);
    assert!(rep.solution.min_zero_distance > settings.zero_guard);
    let spacing: Vec<f64> = rep.solution.zeros.windows(2).map(|w| w[1] - w[0]).collect();
    let last = spacing.last().unwrap();
    assert!((last / std::f64::consts::PI - 1.0).abs() < 0.05);
}

#[test]
fn cli_demo_writes_table_and_summary() {
    let dir = std::env::temp_dir().join(format!("harmonic-na-deconv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let summary = dir.join("summary.json");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        ["harmonic-na", "deconvolve", "demo", "--t", "1", "--R", "1", "--lambda-max", "60", "--summary", summary.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let csv = String::from_utf8(out).unwrap();
    assert!(csv.starts_with("r,f_true,f_rec,abs_mt_f_rec_minus_g\n"));
    assert_eq!(csv.lines().count(), 52);
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(s["relative_residual"].as_f64().unwrap() < 1e-2);
    assert_eq!(s["pass"], true);
}
