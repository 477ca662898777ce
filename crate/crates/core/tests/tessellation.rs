use std::collections::BTreeSet;

use hurwitz_core::fundamental_domain::{
    kind, position_in_f_minus, DomainPosition, MatrixKind, MatrixQ,
};
use hurwitz_core::modular_group::{classify, word_tree, Class, GroupElement};
use hurwitz_core::rational::rat;
use hurwitz_core::tessellation::{
    equivariance_check, horizon_closed, locate, locate_bruteforce, region_decomposition_check,
    svg_render, triangle_contains, Cone, Containment, RatPoint, Triangle, Viewport,
};
use hurwitz_core::verify::sample_vertices;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> Vec<RatPoint> {
    let mut pts = Vec::new();
    for yn in 12..=60 {
        for xn in -14..=26 {
            pts.push(RatPoint::from_ratios(xn, 12, yn, 12));
        }
    }
    pts
}

/// The labels predicted by the fixed-point criterion: `g` with
/// `[[y,x],[0,1]] g` elliptic and fixed point in the closed left half of F.
fn fixed_point_labels(p: &RatPoint, max_word_len: usize) -> BTreeSet<GroupElement> {
    let m = MatrixQ::affine(&p.x, &p.y).unwrap();
    word_tree(max_word_len)
        .map(|(_, g)| g)
        .filter(|g| {
            let mg = m.mul_group(g);
            kind(&mg) == MatrixKind::Elliptic
                && position_in_f_minus(&mg).unwrap() != DomainPosition::Outside
        })
        .collect()
}

#[test]
fn locate_matches_oracle_on_grid() {
    let mut compared = 0;
    for p in grid() {
        let got = locate(&p, 64).unwrap();
        assert!(!got.is_empty(), "{p} uncovered");
        let oracle = locate_bruteforce(&p, 14);
        if horizon_closed(&oracle, 14) {
            compared += 1;
            assert_eq!(got, oracle, "{p}");
        }
    }
    assert!(compared > 1500, "only {compared} conclusive comparisons");
}

#[test]
fn interiors_are_disjoint_on_grid() {
    for p in grid() {
        let interior = locate(&p, 64)
            .unwrap()
            .iter()
            .filter(|g| triangle_contains(g, &p) == Containment::Interior)
            .count();
        assert!(interior <= 1, "{p}");
    }
}

#[test]
fn fixed_point_criterion_matches_locate() {
    for p in grid().into_iter().step_by(7) {
        let oracle = locate_bruteforce(&p, 12);
        if horizon_closed(&oracle, 12) {
            assert_eq!(fixed_point_labels(&p, 12), locate(&p, 64).unwrap(), "{p}");
        }
    }
}

#[test]
fn vertices_have_expected_incidence() {
    let (p2s, p3s) = sample_vertices(8);
    assert!(p2s.len() >= 20 && p3s.len() >= 20);
    for p in &p2s {
        assert_eq!(locate(p, 64).unwrap().len(), 3, "P2 {p}");
    }
    for p in &p3s {
        assert_eq!(locate(p, 64).unwrap().len(), 4, "P3 {p}");
    }
}

#[test]
fn degenerate_vertices_on_the_line_y_equals_one() {
    let labels = locate(&RatPoint::from_ratios(0, 1, 1, 1), 64).unwrap();
    let expected: BTreeSet<_> = [GroupElement::s(), GroupElement::u(), GroupElement::u2()].into();
    assert_eq!(labels, expected);
}

#[test]
fn cone_splits_into_triangle_and_child_cones() {
    let s = GroupElement::s();
    let u = GroupElement::u();
    let u2 = GroupElement::u2();
    let plus: Vec<GroupElement> = word_tree(7)
        .map(|(_, g)| g)
        .filter(|g| classify(g) == Class::TPlus)
        .collect();
    let pts = grid();
    for g in plus {
        let minus = g.compose(&s);
        let c_plus = Cone::new(&g).unwrap();
        let c_minus = Cone::new(&minus).unwrap();
        let c_u = Cone::new(&minus.compose(&u)).unwrap();
        let c_u2 = Cone::new(&minus.compose(&u2)).unwrap();
        for p in &pts {
            let in_tri = triangle_contains(&g, p).is_inside();
            assert_eq!(
                c_plus.contains(p),
                in_tri || c_minus.contains(p),
                "{g} at {p}"
            );
            let in_tri_minus = triangle_contains(&minus, p).is_inside();
            assert_eq!(
                c_minus.contains(p),
                in_tri_minus || c_u.contains(p) || c_u2.contains(p),
                "{minus} at {p}"
            );
        }
    }
}

#[test]
fn region_decomposition_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let report = region_decomposition_check(14, 300, &mut rng).unwrap();
    assert!(report.ok(), "{report:?}");
    assert!(report.per_region.iter().all(|&n| n > 0));
    assert!(report.oracle_compared > 100);
}

#[test]
fn translating_a_point_translates_its_labels() {
    let t = GroupElement::t();
    for p in grid().into_iter().step_by(11) {
        let here = locate(&p, 64).unwrap();
        let moved: BTreeSet<_> = here.iter().map(|g| t.compose(g)).collect();
        assert_eq!(
            locate(&p.translate(&BigInt::from(1)), 64).unwrap(),
            moved,
            "{p}"
        );
    }
}

#[test]
fn figure_is_well_formed() {
    let view = Viewport::new(rat(-3, 1), rat(3, 1), rat(1, 2), rat(4, 1)).unwrap();
    let svg = svg_render(&view, 5).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<path").count(), svg.matches("<text").count());
}

fn element() -> impl Strategy<Value = GroupElement> {
    let all: Vec<GroupElement> = word_tree(8)
        .map(|(_, g)| g)
        .filter(|g| !g.fixes_infinity())
        .collect();
    proptest::sample::select(all)
}

proptest! {
    #[test]
    fn triangles_lie_above_the_line_y_equals_one(
        g in element(),
        (xn, yn) in (-400i64..400, -100i64..400),
        d in 1i64..=16,
    ) {
        let p = RatPoint::from_ratios(xn, d, yn, d);
        if triangle_contains(&g, &p).is_inside() {
            prop_assert!(p.y >= rat(1, 1));
        }
    }

    #[test]
    fn translation_equivariance(g in element(), (xn, yn) in (-200i64..200, 0i64..200), d in 1i64..=8) {
        let p = RatPoint::from_ratios(xn, d, yn, d);
        prop_assert!(equivariance_check(&g, &p).unwrap());
        let tri = Triangle::new(&g).unwrap();
        prop_assert!(equivariance_check(&g, &tri.p2).unwrap());
        prop_assert!(equivariance_check(&g, &tri.p3).unwrap());
    }
}
