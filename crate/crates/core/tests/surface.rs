use num_complex::Complex64 as C;
use proptest::prelude::*;
use twistor_core::riemann::{
    chart_change_section, fubini_study_section, lift_coeffs, selfholo_residual, FnField, MetricDensity,
    SectionField, Tabulated, TwistorChartPoint,
};

fn point() -> impl Strategy<Value = (C, C)> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.0..0.95f64, 0.0..6.3f64)
        .prop_map(|(x, y, r, t)| (C::new(x, y), C::from_polar(r, t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sphere_section_inversion_symmetry(k in 0.2..4.0f64, (z, _) in point()) {
        prop_assume!(z.norm() > 1e-3);
        let a = fubini_study_section(k, z).unwrap();
        let b = fubini_study_section(k, z.inv()).unwrap();
        prop_assert!((a - b).abs() <= 1e-14);
        prop_assert!((0.0..=0.5).contains(&a));
    }

    #[test]
    fn chart_changes_compose((z, w) in point(), a in point(), b in point()) {
        let (c1, c2) = (a.0 + 0.1, b.0 + 0.1);
        let step = chart_change_section(chart_change_section(w, c1).unwrap(), c2).unwrap();
        prop_assert!((step - chart_change_section(w, c1 * c2).unwrap()).norm() <= 1e-14);
        prop_assert!((chart_change_section(w, z + 0.5).unwrap().norm() - w.norm()).abs() <= 1e-14);
    }

    #[test]
    fn numeric_metric_matches_analytic((z, w) in point()) {
        let numeric = MetricDensity::new("fs-numeric", FnField::richardson(|z| C::new(1.0 / (1.0 + z.norm_sqr()), 0.0), 1e-3));
        let pt = TwistorChartPoint::new(z, w).unwrap();
        let (p, q) = lift_coeffs(&MetricDensity::fubini_study(), &pt).unwrap();
        let (pn, qn) = lift_coeffs(&numeric, &pt).unwrap();
        prop_assert!((p - pn).norm() <= 1e-9 && (q - qn).norm() <= 1e-9);
    }
}

#[test]
fn tabulated_density_reproduces_smooth_field() {
    let axis: Vec<f64> = (0..81).map(|k| -2.0 + 0.05 * k as f64).collect();
    let table = Tabulated::sample(axis.clone(), axis, |z| 1.0 / (1.0 + z.norm_sqr())).unwrap();
    let json = serde_json::to_string(&table).unwrap();
    let h = MetricDensity::tabulated("fs-table", Tabulated::from_json(&json).unwrap());
    let zero = SectionField::constant(C::new(0.0, 0.0)).unwrap();
    let z = C::new(0.33, -0.41);
    assert!((h.h(z).unwrap() - 1.0 / (1.0 + z.norm_sqr())).abs() < 1e-3);
    assert_eq!(selfholo_residual(&zero, &h, z).unwrap(), C::new(0.0, 0.0));
}
