use num_complex::Complex64;
use proptest::prelude::*;
use pql::charts::{parse_frac, System};
use pql::numerics::{
    first_integral_drift, integrate_path_f64, monodromy_test, poles_near_path, ComplexPath, NumericInstance, Verdict,
};
use pql::pipelines::{table1_entry, Family};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn instance(family: Family, bindings: &[(&str, &str)]) -> NumericInstance {
    NumericInstance::with_bindings(table1_entry(family).system().unwrap(), bindings).unwrap()
}

#[test]
fn endpoint_error_shrinks_at_fifth_order() {
    // y' = y^2 + 1, y = tan(t).
    let s = System::parse(&[("y", "y^2+a"), ("z", "-z^2")]).unwrap();
    let inst = NumericInstance::with_bindings(s, &[("a", "1")]).unwrap();
    let path = ComplexPath::line(c(0.0, 0.0), c(1.2, 0.3)).unwrap();
    let exact = c(1.2, 0.3).tan();
    let mut pts = Vec::new();
    for tol in [1e-6, 1e-7, 1e-8, 1e-9] {
        let tr = integrate_path_f64(&inst, [c(0.0, 0.0), c(1.0, 0.0)], &path, tol).unwrap();
        let err = (tr.end_state_c64().unwrap()[0] - exact).norm();
        pts.push(((tr.stats.accepted as f64).ln(), err.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!(slope <= -4.0, "observed order {}", -slope);
}

#[test]
fn halving_the_tolerance_at_most_doubles_the_work() {
    let inst = instance(Family::II, &[("a", "t")]);
    let path = ComplexPath::line(c(0.0, 0.0), c(1.0, 0.5)).unwrap();
    let init = [c(0.2, 0.0), c(0.1, 0.1)];
    let coarse = integrate_path_f64(&inst, init, &path, 2e-9).unwrap();
    let fine = integrate_path_f64(&inst, init, &path, 1e-9).unwrap();
    let reference = integrate_path_f64(&inst, init, &path, 1e-13).unwrap().end_state_c64().unwrap();
    assert!(fine.stats.evaluations <= 2 * coarse.stats.evaluations);
    let err = |t: &pql::numerics::Trajectory<f64>| (t.end_state_c64().unwrap()[0] - reference[0]).norm();
    assert!(err(&fine) <= err(&coarse) * 1.01, "{} vs {}", err(&fine), err(&coarse));
    assert!(err(&fine) < 1e-9);
}

#[test]
fn difference_variable_crosses_a_pole_like_the_closed_form() {
    // For VIII with n = 1, a = 1, b = 0: w = y - z solves w' = w^2 + 1.
    let inst = instance(Family::VIII(1), &[("a", "1"), ("b", "0")]).with_product_charts().unwrap();
    let p = std::f64::consts::FRAC_PI_2;
    let path = ComplexPath::polyline(&[c(0.0, 0.0), c(p, 1e-7), c(2.5, 0.0)]).unwrap();
    let tr = integrate_path_f64(&inst, [c(0.5, 0.0), c(0.5, 0.0)], &path, 1e-11).unwrap();
    assert!(!tr.switches.is_empty(), "no chart switch");
    let end = tr.end_state_c64().unwrap();
    let w = end[0] - end[1];
    assert!((w - c(2.5f64.tan(), 0.0)).norm() < 1e-6, "{w}");
}

type Bindings = &'static [(&'static str, &'static str)];

#[test]
fn first_integrals_drift_below_threshold() {
    let path = ComplexPath::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let cases: [(Family, Bindings, &str, [Complex64; 2]); 3] = [
        (Family::V, &[("f", "2")], "4*y^3+2*f*y-z^2", [c(0.3, 0.1), c(-0.2, 0.2)]),
        (
            Family::IXB(3),
            &[("f", "1/2"), ("H", "-1/3")],
            "2*y^2*z-z^2+2*H*y-2*(-1/2*f)*z-(-1/2*f)^2",
            [c(0.1, 0.2), c(0.4, -0.1)],
        ),
        (
            Family::XII,
            &[("f", "1/4"), ("H", "1"), ("K", "1/2")],
            "y^2*z+y*z^2+2*f*y*z-K*y-H*z-H*f",
            [c(0.2, 0.0), c(0.1, 0.3)],
        ),
    ];
    for (family, bindings, h, init) in cases {
        let inst = instance(family, bindings);
        let rep = first_integral_drift::<f64>(&inst, &parse_frac(h).unwrap(), init, &path, 1e-10).unwrap();
        assert!(rep.max_drift < 1e-8, "{family}: {rep:?}");
    }
}

#[test]
fn painleve_one_loop_around_a_movable_pole() {
    let inst = instance(Family::V, &[("f", "t")]);
    // Real data have real poles; a path just above the axis passes the first one.
    let path = ComplexPath::line(c(0.0, 0.0), c(2.0, 0.01)).unwrap();
    let tr = integrate_path_f64(&inst, [c(1.0, 0.0), c(0.0, 0.0)], &path, 1e-10).unwrap();
    let poles = poles_near_path(&inst, &tr.trace);
    let pole = poles.iter().find(|p| p.order.is_some_and(|o| (o - 2.0).abs() < 1e-3)).expect("a double pole").t;
    // Double poles are ill-conditioned in double precision; keep the loop away.
    let rep = monodromy_test::<f64>(&inst, c(0.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0)], pole, 0.3, 1e-10).unwrap();
    assert_eq!(rep.verdict, Verdict::SingleValued, "{:?}", rep.discrepancy);
    assert!(rep.singularities_detected.is_empty() || rep.singularities_detected.iter().all(|s| (s.t - pole).norm() < 0.3));
}

#[test]
fn unbound_coefficient_fails_at_construction() {
    let s = table1_entry(Family::VI).system().unwrap();
    assert!(NumericInstance::with_bindings(s, &[("a", "t")]).is_err());
}

fn riccati_family(k: usize) -> (Family, NumericInstance) {
    match k {
        0 => (Family::I, instance(Family::I, &[("a", "1+t")])),
        1 => (Family::II, instance(Family::II, &[("a", "t")])),
        2 => (Family::VI, instance(Family::VI, &[("a", "t"), ("b", "0")])),
        3 => (Family::VII, instance(Family::VII, &[("a", "0")])),
        _ => (Family::XI, instance(Family::XI, &[("a", "1/2*t^2")])),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contractible_loops_of_riccati_reducible_instances_close(
        k in 0usize..5,
        cx in -1.5f64..1.5, cy in -1.5f64..1.5,
        radius in 0.2f64..1.0,
        phi in 0.0f64..std::f64::consts::TAU,
        y0 in -1.0f64..1.0, y1 in -1.0f64..1.0,
        z0 in -1.0f64..1.0, z1 in -1.0f64..1.0,
    ) {
        let (family, inst) = riccati_family(k);
        let center = c(cx, cy);
        let base = center + Complex64::from_polar(radius, phi);
        let tol = 1e-10;
        match monodromy_test::<f64>(&inst, base, [c(y0, y1), c(z0, z1)], center, radius, tol) {
            Ok(rep) => prop_assert!(
                rep.max_discrepancy() < 10.0 * tol * (1.0 + y0.hypot(y1).max(z0.hypot(z1))),
                "{family}: {:?}", rep.discrepancy
            ),
            // A loop through a pole to machine precision is not contractible in the
            // domain of holomorphy; only step collapse is acceptable there.
            Err(e) => prop_assert!(matches!(e, pql::numerics::NumericError::StepCollapse { .. }), "{family}: {e}"),
        }
    }

    #[test]
    fn trace_text_round_trips(
        recs in proptest::collection::vec((any::<f64>(), any::<f64>(), any::<f64>(), any::<f64>(), any::<f64>(), any::<f64>(), 0usize..6), 0..20)
    ) {
        let recs: Vec<_> = recs
            .into_iter()
            .filter(|r| [r.0, r.1, r.2, r.3, r.4, r.5].iter().all(|x| x.is_finite()))
            .map(|r| pql::numerics::TraceRecord { t: c(r.0, r.1), state: [c(r.2, r.3), c(r.4, r.5)], chart: r.6 })
            .collect();
        let mut buf = Vec::new();
        pql::numerics::write_trace(&mut buf, &recs).unwrap();
        let back = pql::numerics::read_trace(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, recs);
    }
}
