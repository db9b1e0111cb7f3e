use proptest::prelude::*;

use stirling_identities::algebra::{int, interpolate_in_j, j_variable, ratio, MultiPoly, Rational, Series, Variable};

fn vars() -> [Variable; 3] {
    [Variable::ordinary("x"), Variable::ordinary("y"), Variable::laurent("r")]
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-6i64..=6, 1i64..=3, 0i32..=3, 0i32..=2, -2i32..=2), 0..5).prop_map(|terms| {
        let [x, y, r] = vars();
        terms
            .into_iter()
            .map(|(n, d, ex, ey, er)| {
                MultiPoly::monomial(ratio(n, d), &[(x.clone(), ex), (y.clone(), ey), (r.clone(), er)]).unwrap()
            })
            .sum()
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, MultiPoly::zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in rational(), y in rational(), r in rational()) {
        prop_assume!(r != int(0));
        let point = [("x", x), ("y", y), ("r", r)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let ev = |p: &MultiPoly| p.evaluate(&point).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn degree_split_reassembles(a in poly()) {
        let r = Variable::laurent("r");
        let mut back = MultiPoly::zero();
        for (d, part) in a.with_variables(std::slice::from_ref(&r)).extract_by_degree("r").unwrap() {
            prop_assert!(part.index_of("r").is_none());
            back += &(&part * &MultiPoly::var_pow(&r, d).unwrap());
        }
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exp_log_round_trip(coeffs in prop::collection::vec(poly(), 1..=8)) {
        let order = coeffs.len();
        let mut with_zero = vec![MultiPoly::zero()];
        with_zero.extend(coeffs);
        let s = Series::new("x", order, with_zero.clone());
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s.clone());

        with_zero[0] = MultiPoly::one();
        let one_plus = Series::new("x", order, with_zero);
        prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
    }

    #[test]
    fn coefficient_extraction_is_linear(a in prop::collection::vec(poly(), 4), b in prop::collection::vec(poly(), 4), c in rational()) {
        let sa = Series::new("x", 3, a);
        let sb = Series::new("x", 3, b);
        let combo = sa.scale(&c).add(&sb).unwrap();
        for k in 0..=3 {
            prop_assert_eq!(
                combo.coeff(k).unwrap().clone(),
                &sa.coeff(k).unwrap().scale(&c) + sb.coeff(k).unwrap()
            );
        }
        prop_assert!(combo.coeff(4).is_err());
    }

    #[test]
    fn interpolation_recovers_polynomials_in_j(coeffs in prop::collection::vec(poly(), 1..=5), start in 1i64..=6) {
        let j = j_variable();
        let degree = coeffs.len() - 1;
        let p: MultiPoly = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &MultiPoly::var_pow(&j, k as i32).unwrap())
            .sum();
        let samples: Vec<(i64, MultiPoly)> = (start..start + degree as i64 + 3)
            .map(|n| (n, p.substitute("j", &int(n)).unwrap()))
            .collect();
        let q = interpolate_in_j(&samples, degree).unwrap();
        prop_assert_eq!(&q, &p);
        for (n, v) in &samples {
            prop_assert_eq!(&q.substitute("j", &int(*n)).unwrap(), v);
        }
    }
}

#[test]
fn interpolation_rejects_excess_degree() {
    let j = j_variable();
    let cube = MultiPoly::var_pow(&j, 3).unwrap();
    let samples: Vec<(i64, MultiPoly)> = (0..6).map(|n| (n, cube.substitute("j", &int(n)).unwrap())).collect();
    assert!(interpolate_in_j(&samples, 2).is_err());
    assert!(interpolate_in_j(&samples[..3], 3).is_err());
}
