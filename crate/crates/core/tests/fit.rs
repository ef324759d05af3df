use proptest::prelude::*;
use pulsetrain::fit::{envelope_points, fit_envelope, fit_exponential, EnvelopePoint};
use pulsetrain::pulse::build_pulse_map;
use pulsetrain::series::Strategy;
use pulsetrain::{BigReal, Precision, PulseArea};
use rug::Float;

fn close(a: &BigReal, b: &BigReal, tol: &BigReal) -> bool {
    Float::with_val(a.prec(), a - b).abs() <= *tol
}

/// Noisy-looking but deterministic data: `A e^{−bN} (1 + ε_i)`.
fn wobbly(p: Precision, a: f64, b: f64, n: usize, wobble: f64) -> Vec<EnvelopePoint> {
    (0..n)
        .map(|i| {
            let x = p.uint(i as u64 * 3);
            let jitter = 1.0 + wobble * ((i * 7919 % 13) as f64 / 13.0 - 0.5);
            let w =
                Float::with_val(p.bits(), -Float::with_val(p.bits(), &x * b)).exp() * a * jitter;
            EnvelopePoint::new(x, w)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refit_of_model_is_idempotent(a in 0.1f64..10.0, b in 1e-4f64..0.1, n in 3usize..60, wob in 0.0f64..0.2) {
        let p = Precision::default();
        let fit = fit_exponential(&wobbly(p, a, b, n, wob)).unwrap();
        let pts: Vec<_> = (0..n).map(|i| {
            let x = p.uint(i as u64 * 3);
            let w = fit.model(&x);
            EnvelopePoint::new(x, w)
        }).collect();
        let again = fit_exponential(&pts).unwrap();
        let tol = p.pow10(-20);
        prop_assert!(close(&again.amplitude, &fit.amplitude, &tol));
        prop_assert!(close(&again.rate, &fit.rate, &tol));
    }

    #[test]
    fn scale_equivariance(a in 0.1f64..10.0, b in 1e-4f64..0.1, s in 0.01f64..100.0, wob in 0.0f64..0.2) {
        let p = Precision::default();
        let pts = wobbly(p, a, b, 30, wob);
        let scaled: Vec<_> = pts.iter().map(|q| EnvelopePoint::new(q.n_rabi.clone(), Float::with_val(p.bits(), &q.w * s))).collect();
        let f0 = fit_exponential(&pts).unwrap();
        let f1 = fit_exponential(&scaled).unwrap();
        let tol = p.pow10(-30);
        prop_assert!(close(&f1.rate, &f0.rate, &tol));
        prop_assert!(close(&f1.amplitude, &Float::with_val(p.bits(), &f0.amplitude * s), &p.pow10(-28)));
    }

    #[test]
    fn shift_equivariance(a in 0.1f64..10.0, b in 1e-4f64..0.1, delta in 0.0f64..50.0, wob in 0.0f64..0.2) {
        let p = Precision::default();
        let pts = wobbly(p, a, b, 30, wob);
        let shifted: Vec<_> = pts.iter().map(|q| EnvelopePoint::new(Float::with_val(p.bits(), &q.n_rabi + delta), q.w.clone())).collect();
        let f0 = fit_exponential(&pts).unwrap();
        let f1 = fit_exponential(&shifted).unwrap();
        prop_assert!(close(&f1.rate, &f0.rate, &p.pow10(-30)));
        let want = Float::with_val(p.bits(), Float::with_val(p.bits(), &f0.rate * delta).exp() * &f0.amplitude);
        prop_assert!(close(&f1.amplitude, &want, &p.pow10(-28)));
    }
}

#[test]
fn envelope_at_large_nbar_for_unit_area() {
    let p = Precision::new(40).unwrap();
    let map = build_pulse_map(
        &p.int(10_000),
        PulseArea::integer(1).unwrap(),
        Strategy::Auto,
        p,
    )
    .unwrap();
    let pts = envelope_points(&map, 400).unwrap();
    assert_eq!(pts.len(), 401);
    assert!(pts[0].w == 1);
    let fit = fit_envelope(&map, 400).unwrap();
    let (a, b) = (fit.amplitude.to_f64(), fit.rate.to_f64());
    assert!((0.99..=1.05).contains(&a), "A = {a}");
    assert!((0.0002..=0.0004).contains(&b), "b = {b}");
}

#[test]
fn envelope_fits_by_area() {
    let p = Precision::new(40).unwrap();
    for k in ["1/2", "1", "2"] {
        let map = build_pulse_map(&p.int(10_000), k.parse().unwrap(), Strategy::Auto, p).unwrap();
        for max in [400, 7000] {
            let fit = fit_envelope(&map, max).unwrap();
            println!(
                "k={k} N_R<={max}: A={:.6} b={:.3e} rms={:.2e} used={}",
                fit.amplitude.to_f64(),
                fit.rate.to_f64(),
                fit.rms_residual.to_f64(),
                fit.n_used
            );
            assert!(fit.amplitude > 0 && fit.rate > 0);
        }
    }
}
