use proptest::prelude::*;
use pulsetrain::pulse::{
    average_failure_probability, build_pulse_map, build_pulse_map_with_phase, density_after_pulse,
    discriminant, envelope_sequence, evolve, failure_probability, failure_probability_expansion,
    geometric_sum, geometric_sum_matrix, inversion_from_map, inversion_profile, inversion_sequence,
    matrix_power, pulse_map_at_tau, single_pulse_state, AverageMode, BlochState, Complex, Mat2,
    PowerBranch, PulseMap,
};
use pulsetrain::series::{Strategy, SumIndex};
use pulsetrain::{BigReal, Error, Precision, PulseArea};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

fn prec() -> Precision {
    Precision::default()
}

fn area(s: &str) -> PulseArea {
    s.parse().unwrap()
}

fn map(nbar: i64, k: &str) -> PulseMap {
    let p = prec();
    build_pulse_map(&p.int(nbar), area(k), Strategy::Auto, p).unwrap()
}

fn diff(a: &BigReal, b: &BigReal) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

fn random_unit(rng: &mut ChaCha8Rng, p: Precision) -> BlochState {
    let z = p.from_f64(rng.random_range(-1.0..1.0));
    let phi = p.from_f64(rng.random_range(0.0..std::f64::consts::TAU));
    let rho = Float::with_val(p.bits(), 1 - Float::with_val(p.bits(), z.square_ref())).sqrt();
    let x = Float::with_val(p.bits(), &rho * Float::with_val(p.bits(), phi.cos_ref()));
    let y = Float::with_val(p.bits(), &rho * Float::with_val(p.bits(), phi.sin_ref()));
    BlochState::new(x, y, z).unwrap()
}

fn random_amplitudes(rng: &mut ChaCha8Rng, p: Precision) -> (Complex, Complex) {
    let v: Vec<BigReal> = (0..4)
        .map(|_| p.from_f64(rng.random_range(-1.0..1.0)))
        .collect();
    let mut n = p.zero();
    for c in &v {
        n += Float::with_val(p.bits(), c.square_ref());
    }
    let n = n.sqrt();
    let s = |c: &BigReal| Float::with_val(p.bits(), c / &n);
    (
        Complex::new(s(&v[0]), s(&v[1])),
        Complex::new(s(&v[2]), s(&v[3])),
    )
}

#[test]
fn zero_area_is_identity_channel() {
    let m = map(10_000, "0");
    let p = prec();
    let tol = 1e-45;
    assert!(diff(&m.mxx, &p.one()) < tol);
    assert!(m.m1.max_abs_diff(&Mat2::identity(p)).to_f64() < tol);
    for c in &m.shift {
        assert!(c.clone().abs().to_f64() < tol);
    }
}

#[test]
fn reference_channel_entries() {
    let m = map(10_000, "2");
    let p = prec();
    assert!(diff(m.a(), &p.parse("0.999506656941120").unwrap()) < 1e-15);
    assert!(diff(m.b(), &p.parse("-0.000078530333354").unwrap()) < 1e-15);
    assert!(diff(m.d(), &p.parse("0.999506632273850").unwrap()) < 1e-15);
    // lower-left entry is 2·S2
    assert!(diff(m.c(), &p.parse("0.000078530328510601545991").unwrap()) < 1e-15);
}

#[test]
fn nonzero_phase_is_rejected() {
    let p = prec();
    let r = build_pulse_map_with_phase(&p.int(100), area("1"), &p.from_f64(0.1), Strategy::Auto, p);
    assert!(matches!(r, Err(Error::Unsupported(_))));
}

#[test]
fn channel_contracts_unit_sphere() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bound = 1.0 + 1e-20;
    for nbar in [10, 1_000, 10_000] {
        for k in ["1/2", "1", "2"] {
            let m = map(nbar, k);
            for _ in 0..1000 {
                let r = random_unit(&mut rng, p);
                let out = m.apply(&r);
                assert!(out.norm().to_f64() <= bound, "n̄={nbar} k={k}");
            }
        }
    }
}

#[test]
fn density_matrix_and_channel_agree() {
    let p = prec();
    let m = map(10_000, "2");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (a, b) = random_amplitudes(&mut rng, p);
        let rho = density_after_pulse(&a, &b, &m.sums, &p.zero(), p).unwrap();
        let via_rho = rho.bloch();
        let via_map = m.apply(&BlochState::from_amplitudes(&a, &b).unwrap());
        assert!(via_rho.max_abs_diff(&via_map).to_f64() < 1e-20);
    }
}

#[test]
fn single_pulse_basic_states() {
    let p = prec();
    let one = Complex::real(p.one());
    let zero = Complex::real(p.zero());
    let rho = single_pulse_state(
        &one,
        &zero,
        &p.int(77),
        area("0"),
        &p.zero(),
        Strategy::Auto,
        p,
    )
    .unwrap();
    assert!(diff(&rho.rho[0][0].re, &p.one()) < 1e-45);
    assert!(rho.rho[1][1].re.clone().abs().to_f64() < 1e-45);

    let nbar = p.int(10_000);
    let rho =
        single_pulse_state(&zero, &one, &nbar, area("2"), &p.zero(), Strategy::Auto, p).unwrap();
    let s6 = p.parse("0.999753322301165250291024518866").unwrap();
    assert!(diff(&rho.rho[1][1].re, &s6) < 1e-20);
    assert!(diff(&rho.rho[0][0].re, &(p.one() - s6)) < 1e-20);
}

#[test]
fn density_matrix_is_hermitian_for_any_phase() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, b) = random_amplitudes(&mut rng, p);
    for phi in [0.0, 0.3, 1.7, -2.2] {
        let rho = single_pulse_state(
            &a,
            &b,
            &p.int(500),
            area("1"),
            &p.from_f64(phi),
            Strategy::Auto,
            p,
        )
        .unwrap();
        assert!(rho.hermiticity_defect() < 1e-40);
        assert!(diff(&rho.trace().re, &p.one()) < 1e-40);
        assert!(rho.trace().im.clone().abs().to_f64() < 1e-40);
    }
    assert!(
        single_pulse_state(&a, &a, &p.int(500), area("1"), &p.zero(), Strategy::Auto, p).is_err()
    );
}

#[test]
fn closed_form_powers_match_iteration() {
    let p = prec();
    for k in ["1/2", "1", "2"] {
        let m = map(10_000, k);
        let dec = m.decomposition();
        assert_eq!(dec.branch(), PowerBranch::Trigonometric);
        let mut iter = Mat2::identity(p);
        let mut done = 0u64;
        for target in [1u64, 10, 100, 1_000, 10_000] {
            while done < target {
                iter = iter.mul(&m.m1);
                done += 1;
            }
            let closed = matrix_power(&dec, target).matrix;
            assert!(
                closed.max_abs_diff(&iter).to_f64() <= 1e-25,
                "k={k} m={target}"
            );
        }
    }
}

#[test]
fn geometric_sums_match_accumulation() {
    let p = prec();
    let m = map(10_000, "1");
    let dec = m.decomposition();
    let mut acc = Mat2::zero(p);
    let mut term = Mat2::identity(p);
    for step in 1..=500u64 {
        acc = acc.add(&term);
        term = term.mul(&m.m1);
        if step % 50 == 0 || step <= 3 {
            let g = geometric_sum(&dec, step).unwrap();
            let rebuilt = Mat2::identity(p).scale(&g.b1).add(&dec.j.scale(&g.b2));
            assert!(rebuilt.max_abs_diff(&acc).to_f64() <= 1e-20, "m={step}");
        }
        // recurrence: sum(m+1) = sum(m) + M^m
        let next = geometric_sum_matrix(&dec, step + 1).unwrap().matrix;
        let pow = matrix_power(&dec, step).matrix;
        let cur = geometric_sum_matrix(&dec, step).unwrap().matrix;
        assert!(next.max_abs_diff(&cur.add(&pow)).to_f64() <= 1e-30);
    }
}

#[test]
fn evolve_matches_repeated_application() {
    let p = prec();
    let m = map(10_000, "2");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let starts = [
        BlochState::new(p.one(), p.zero(), p.zero()).unwrap(),
        random_unit(&mut rng, p),
        random_unit(&mut rng, p),
    ];
    for r0 in &starts {
        assert_eq!(evolve(r0, &m, 0).unwrap().max_abs_diff(r0).to_f64(), 0.0);
        assert!(
            evolve(r0, &m, 1)
                .unwrap()
                .max_abs_diff(&m.apply(r0))
                .to_f64()
                < 1e-45
        );
        let mut r = r0.clone();
        for _ in 0..10 {
            r = m.apply(&r);
        }
        assert!(evolve(r0, &m, 10).unwrap().max_abs_diff(&r).to_f64() < 1e-40);
    }
    // x-axis start keeps x = (S3+S5)^10
    let x_only = evolve(&starts[0], &m, 10).unwrap();
    let want = Float::with_val(p.bits(), rug::ops::Pow::pow(&m.mxx, 10u32));
    assert!(diff(x_only.x(), &want) < 1e-45);
}

#[test]
fn inversion_matches_iterated_channel_small_nbar() {
    let p = prec();
    let m = map(10, "2");
    let mut r = BlochState::excited(p);
    assert_eq!(inversion_from_map(&m, 0).unwrap(), 1);
    for step in 1..=50u64 {
        r = m.apply(&r);
        let w = inversion_from_map(&m, step).unwrap();
        assert!(diff(&w, &(-r.z().clone())) <= 1e-20, "m={step}");
    }
}

#[test]
fn inversion_bounded_and_non_negative_at_full_periods() {
    let m = map(10_000, "1");
    let seq = inversion_sequence(&m, 2_000).unwrap();
    for pt in &seq {
        let w = pt.w.to_f64();
        assert!((-1.0..=1.0).contains(&w));
    }
    for pt in envelope_sequence(&m, 10_000).unwrap() {
        assert!(pt.w >= 0, "W at m={} is {}", pt.m, pt.w);
    }
}

#[test]
fn profile_starts_at_boundary_value() {
    let p = prec();
    let nbar = p.int(10);
    let k = area("2");
    let m = map(10, "2");
    for pulses in [0u64, 1, 5] {
        let prof = inversion_profile(&nbar, k, pulses, 11, Strategy::Auto, p).unwrap();
        let w0 = inversion_from_map(&m, pulses).unwrap();
        assert!(diff(&prof[0].1, &w0) < 1e-45);
        // the window end is the next pulse boundary
        let w1 = inversion_from_map(&m, pulses + 1).unwrap();
        assert!(diff(&prof.last().unwrap().1, &w1) < 1e-40);
    }
    assert!(inversion_profile(&nbar, k, 0, 1, Strategy::Auto, p).is_err());
}

#[test]
fn discriminant_negative_for_small_phases() {
    let p = prec();
    let nbar = p.int(10);
    assert!(discriminant(&nbar, &p.from_f64(0.5), Strategy::Auto, p).unwrap() < 0);
    for tau in [1e-3, 1e-4] {
        let d = discriminant(&nbar, &p.from_f64(tau), Strategy::Auto, p).unwrap();
        assert!(d.to_f64().abs() <= 1e-3);
    }
    assert!(discriminant(&nbar, &p.zero(), Strategy::Auto, p).is_err());
}

#[test]
fn failure_probability_forms_agree() {
    let p = prec();
    let m = map(10_000, "1");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for steps in [0u64, 1, 2, 17, 200] {
        for _ in 0..5 {
            let r0 = random_unit(&mut rng, p);
            let dot = failure_probability(&r0, &m, steps).unwrap();
            let expanded = failure_probability_expansion(&r0, &m, steps).unwrap();
            assert!(diff(&dot, &expanded) < 1e-35, "m={steps}");
            let v = dot.to_f64();
            assert!((-1e-40..=1.0 + 1e-40).contains(&v));
        }
    }
    let r0 = random_unit(&mut rng, p);
    assert!(failure_probability(&r0, &m, 0).unwrap().abs().to_f64() < 1e-45);

    let x = BlochState::new(p.one(), p.zero(), p.zero()).unwrap();
    let pf = failure_probability(&x, &m, 40).unwrap();
    let want = (1 - Float::with_val(p.bits(), rug::ops::Pow::pow(&m.mxx, 40u32))) / 2u32;
    assert!(diff(&pf, &want) < 1e-45);
}

#[test]
fn sphere_average_monte_carlo_oracle() {
    let m = map(10_000, "1");
    let analytic = average_failure_probability(&m, 200, AverageMode::Analytic).unwrap();
    let mc = average_failure_probability(
        &m,
        200,
        AverageMode::MonteCarlo {
            seed: 1,
            count: 100_000,
        },
    )
    .unwrap();
    let gap = diff(&analytic.mean, &mc.mean);
    assert!(
        gap <= 3.0 * mc.std_error,
        "gap {gap:e} vs se {:e}",
        mc.std_error
    );
    for mode in [
        AverageMode::Analytic,
        AverageMode::MonteCarlo {
            seed: 1,
            count: 100,
        },
    ] {
        assert!(
            average_failure_probability(&m, 0, mode)
                .unwrap()
                .mean
                .abs()
                .to_f64()
                < 1e-40
        );
    }
}

#[test]
fn sphere_average_shrinks_with_more_photons() {
    let small = average_failure_probability(&map(10_000, "1"), 100, AverageMode::Analytic).unwrap();
    let large =
        average_failure_probability(&map(1_000_000, "1"), 100, AverageMode::Analytic).unwrap();
    assert!(large.mean < small.mean);
}

#[test]
fn sphere_average_grows_with_pulse_count() {
    let m = map(10_000, "1");
    let mut prev = average_failure_probability(&m, 0, AverageMode::Analytic)
        .unwrap()
        .mean;
    let tol = Precision::default().pow10(-25);
    for step in (2..=1_000u64).step_by(2) {
        let cur = average_failure_probability(&m, step, AverageMode::Analytic)
            .unwrap()
            .mean;
        assert!(
            Float::with_val(cur.prec(), &cur - &prev) >= -tol.clone(),
            "m={step}"
        );
        prev = cur;
    }
}

#[test]
fn sums_feed_channel_consistently() {
    let m = map(10_000, "2");
    let p = prec();
    let s = |i| m.sum(i).clone();
    assert!(diff(&m.mxx, &(s(SumIndex::S3) + s(SumIndex::S5))) < 1e-45);
    assert!(diff(&m.shift[2], &(s(SumIndex::S4) - s(SumIndex::S6))) < 1e-45);
    assert!(diff(&m.shift[1], &(s(SumIndex::S7) - s(SumIndex::S1))) < 1e-45);
    assert_eq!(m.shift[0], p.zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_power_matches_squaring(
        a in 0.3f64..0.99, d in 0.3f64..0.99, b in -0.4f64..-0.05, c in 0.05f64..0.4, m in 0u64..300,
    ) {
        let p = Precision::new(40).unwrap();
        let m1 = Mat2::new(p.from_f64(a), p.from_f64(b), p.from_f64(c), p.from_f64(d));
        let dec = pulsetrain::pulse::PowerDecomposition::new(&m1, p);
        prop_assume!(dec.trig.is_some());
        let closed = matrix_power(&dec, m).matrix;
        let squared = m1.pow(m, p);
        prop_assert!(closed.max_abs_diff(&squared).to_f64() < 1e-30);
    }
}

#[test]
fn discriminant_has_narrow_real_eigenvalue_windows() {
    let p = prec();
    let nbar = p.int(10);
    for tau in [0.4903, 0.976] {
        let m = pulse_map_at_tau(&nbar, &p.from_f64(tau), Strategy::Auto, p).unwrap();
        assert!(m.discriminant() > 0, "tau={tau}");
        let dec = m.decomposition();
        assert_eq!(dec.branch(), PowerBranch::Iterated);
        assert_eq!(
            matrix_power(&dec, 12)
                .matrix
                .max_abs_diff(&m.m1.pow(12, p))
                .to_f64(),
            0.0
        );
    }
    // the unit and double pulse phases sit just outside those windows
    for k in ["1", "2"] {
        assert!(map(10, k).discriminant() < 0, "k={k}");
    }
}
