use hurwitz_core::fundamental_domain::{
    alpha, chi_minus_weight, chi_weight, kind, mirror, position_in_f, position_in_f_minus, reflect,
    DomainPosition, MatrixKind, MatrixQ,
};
use hurwitz_core::rational::{rat, Rational};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn elliptic_int() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-30i64..30, -30i64..30, -30i64..30, -30i64..30).prop_filter("elliptic", |&(a, b, c, d)| {
        let det = a * d - b * c;
        det > 0 && (a + d) * (a + d) < 4 * det
    })
}

fn elliptic_rat() -> impl Strategy<Value = MatrixQ> {
    let q = || (-40i64..40, 1i64..12).prop_map(|(p, q)| rat(p, q));
    (q(), q(), q(), q()).prop_filter_map("elliptic", |(a, b, c, d)| {
        let m = MatrixQ::new(a, b, c, d).ok()?;
        (kind(&m) == MatrixKind::Elliptic).then_some(m)
    })
}

/// Fixed point in the upper half-plane from the quadratic formula, in floating point.
fn fixed_point_f64(m: &MatrixQ) -> (f64, f64) {
    let f = |r: &Rational| r.to_f64().unwrap();
    let (a, b, c, d) = (f(m.a()), f(m.b()), f(m.c()), f(m.d()));
    let disc = (a + d) * (a + d) - 4.0 * (a * d - b * c);
    ((a - d) / (2.0 * c), (-disc).sqrt() / (2.0 * c))
}

proptest! {
    #[test]
    fn exact_position_agrees_with_float_away_from_boundary(m in elliptic_rat()) {
        let (x, y) = fixed_point_f64(&m);
        let r2 = x * x + y * y;
        let eps = 1e-9;
        let margin_f = (x.abs() - 0.5).abs().min((r2 - 1.0).abs());
        if margin_f > eps {
            let inside = x.abs() < 0.5 && r2 > 1.0;
            let pos = position_in_f(&m).unwrap();
            prop_assert_eq!(pos == DomainPosition::Interior, inside);
            prop_assert_eq!(pos == DomainPosition::Outside, !inside);
        }
        let margin_fm = (x + 0.5).abs().min(x.abs()).min((r2 - 1.0).abs());
        if margin_fm > eps {
            let inside = -0.5 < x && x < 0.0 && r2 > 1.0;
            let pos = position_in_f_minus(&m).unwrap();
            prop_assert_eq!(pos == DomainPosition::Interior, inside);
            prop_assert_eq!(pos == DomainPosition::Outside, !inside);
        }
    }

    #[test]
    fn negation_does_not_change_classification(m in elliptic_rat()) {
        let n = m.neg();
        prop_assert_eq!(position_in_f(&n).unwrap(), position_in_f(&m).unwrap());
        prop_assert_eq!(position_in_f_minus(&n).unwrap(), position_in_f_minus(&m).unwrap());
        prop_assert_eq!(alpha(&n).unwrap(), alpha(&m).unwrap());
    }

    #[test]
    fn reflection_mirrors_positions((a, b, c, d) in elliptic_int()) {
        let m = MatrixQ::from_integers(a, b, c, d).unwrap();
        let r = reflect(&m);
        prop_assert_eq!(position_in_f(&r).unwrap(), mirror(position_in_f(&m).unwrap()));
        let (x, y) = fixed_point_f64(&m);
        let (rx, ry) = fixed_point_f64(&r);
        prop_assert!((x + rx).abs() < 1e-9 && (y - ry).abs() < 1e-9);
    }

    #[test]
    fn chi_splits_into_halves((a, b, c, d) in elliptic_int()) {
        let m = MatrixQ::from_integers(a, b, c, d).unwrap();
        if position_in_f(&m).unwrap() == DomainPosition::Interior {
            let u = m.a() - m.d();
            let chi = chi_weight(&m).unwrap();
            let chi_minus = chi_minus_weight(&m).unwrap();
            if u < rat(0, 1) {
                prop_assert_eq!(chi_minus, chi);
            } else if u == rat(0, 1) {
                prop_assert_eq!(chi_minus, rat(1, 2));
                prop_assert_eq!(chi, rat(1, 1));
            } else {
                prop_assert_eq!(chi_minus, rat(0, 1));
            }
        }
        // chi on F equals chi- of M plus chi- of its mirror image (at i: 1/4 + 1/4)
        let left = chi_minus_weight(&m).unwrap();
        let right = chi_minus_weight(&reflect(&m)).unwrap();
        prop_assert_eq!(chi_weight(&m).unwrap(), left + right);
    }
}

#[test]
fn alpha_rejects_nonpositive_determinant() {
    assert!(MatrixQ::from_integers(0, 1, 1, 0).is_err());
}
