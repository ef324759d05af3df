use proptest::prelude::*;
use pulsetrain::jet::{jet_expand, JetExpr};
use pulsetrain::{BigReal, Precision};
use rug::ops::Pow;
use rug::Float;

fn diff(a: &BigReal, b: &BigReal) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

#[test]
fn cos_of_scaled_sqrt_matches_finite_differences() {
    let p = Precision::new(60).unwrap();
    let bits = p.bits();
    let f = JetExpr::x().add_one().sqrt().scaled(p.pi()).cos();
    let jet = jet_expand(&f, 3, p).unwrap();

    let h = p.pow10(-15);
    let at = |steps: i32| f.evaluate(&Float::with_val(bits, &h * steps)).unwrap();
    let (m2, m1, z, p1, p2) = (at(-2), at(-1), at(0), at(1), at(2));
    let h2 = Float::with_val(bits, h.square_ref());
    let h3 = Float::with_val(bits, &h2 * &h);
    let d1 = Float::with_val(bits, &p1 - &m1) / Float::with_val(bits, &h * 2u32);
    let d2 = (Float::with_val(bits, &p1 + &m1) - Float::with_val(bits, &z * 2u32)) / &h2;
    let mut d3 = Float::with_val(bits, &p2 - &m2);
    d3 -= Float::with_val(bits, &p1 - &m1) * 2u32;
    d3 /= Float::with_val(bits, &h3 * 2u32);

    let want = [z, d1, d2 / 2u32, d3 / 6u32];
    for (j, w) in want.iter().enumerate() {
        assert!(
            diff(&jet.coeffs()[j], w) < 1e-12,
            "c{j}: {} vs {}",
            jet.coeffs()[j],
            w
        );
    }
    // cos(π) = −1 and d/dx cos(π√(1+x)) = −(π/2) sin(π) = 0 at x = 0
    assert!(diff(&jet.coeffs()[0], &p.int(-1)) < 1e-55);
    assert!(jet.coeffs()[1].clone().abs() < p.pow10(-55));
}

trait AddOne {
    fn add_one(self) -> JetExpr;
}

impl AddOne for JetExpr {
    fn add_one(self) -> JetExpr {
        self + JetExpr::constant(Float::with_val(64, 1))
    }
}

/// Random composition trees; `sqrt` and `recip` only see `e² + 1`.
fn tree(depth: u32) -> BoxedStrategy<JetExpr> {
    let leaf = prop_oneof![
        Just(JetExpr::x()),
        (-2.0f64..2.0).prop_map(|c| JetExpr::constant(Float::with_val(256, c))),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), -2.0f64..2.0).prop_map(|(a, s)| a.scaled(Float::with_val(256, s))),
            inner.clone().prop_map(JetExpr::sin),
            inner.clone().prop_map(JetExpr::cos),
            inner.clone().prop_map(|a| (a.clone() * a).add_one().sqrt()),
            inner.prop_map(|a| (a.clone() * a).add_one().recip()),
        ]
    })
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_expands_to_cauchy_product(f in tree(5), g in tree(5), order in 1usize..10) {
        let p = Precision::default();
        let jf = jet_expand(&f, order, p).unwrap();
        let jg = jet_expand(&g, order, p).unwrap();
        let jfg = jet_expand(&(f * g), order, p).unwrap();
        for n in 0..=order {
            let mut c = p.zero();
            for i in 0..=n {
                c += Float::with_val(p.bits(), &jf.coeffs()[i] * &jg.coeffs()[n - i]);
            }
            let scale = c.clone().abs().to_f64().max(1.0);
            prop_assert!(diff(&jfg.coeffs()[n], &c) <= 1e-40 * scale, "n={n}");
        }
    }

    #[test]
    fn jet_polynomial_matches_direct_evaluation(f in tree(5), order in 2usize..9) {
        let p = Precision::new(80).unwrap();
        let x = p.pow10(-6);
        let jet = jet_expand(&f, order, p).unwrap();
        let direct = f.evaluate(&x).unwrap();
        let bound = Float::with_val(p.bits(), (&x).pow(order as u32 + 1)) * 1000u32;
        let magnitude = direct.clone().abs().to_f64().max(1.0);
        prop_assert!(diff(&jet.eval(&x), &direct) <= bound.to_f64() * magnitude);
    }
}
