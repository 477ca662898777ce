//! SVG 1.1 rendering of the triangulation. Geometry is clipped to the
//! viewport exactly; conversion to decimals happens only when writing
//! coordinates.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular_group::{word_tree, GroupElement, Letter};
use crate::rational::Rational;

use super::{RatPoint, Triangle};

const WIDTH_PX: f64 = 800.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn new(xmin: Rational, xmax: Rational, ymin: Rational, ymax: Rational) -> Result<Self> {
        if xmin >= xmax || ymin >= ymax {
            return Err(Error::DegenerateViewport(format!(
                "x in [{xmin}, {xmax}], y in [{ymin}, {ymax}]"
            )));
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    fn corners(&self) -> Vec<RatPoint> {
        vec![
            RatPoint::new(self.xmin.clone(), self.ymin.clone()),
            RatPoint::new(self.xmax.clone(), self.ymin.clone()),
            RatPoint::new(self.xmax.clone(), self.ymax.clone()),
            RatPoint::new(self.xmin.clone(), self.ymax.clone()),
        ]
    }
}

/// The half-plane `k + kx x + ky y >= 0`.
#[derive(Clone, Debug)]
struct HalfPlane {
    k: Rational,
    kx: Rational,
    ky: Rational,
}

impl HalfPlane {
    fn eval(&self, p: &RatPoint) -> Rational {
        &self.k + &self.kx * &p.x + &self.ky * &p.y
    }

    fn from_ints(k: BigInt, kx: BigInt, ky: BigInt) -> Self {
        let q = BigRational::from_integer;
        Self {
            k: q(k),
            kx: q(kx),
            ky: q(ky),
        }
    }
}

/// Sutherland-Hodgman clipping of a convex polygon against one half-plane.
fn clip(poly: &[RatPoint], h: &HalfPlane) -> Vec<RatPoint> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let next = &poly[(i + 1) % n];
        let (vc, vn) = (h.eval(cur), h.eval(next));
        if !vc.is_negative() {
            out.push(cur.clone());
        }
        if (vc.is_negative() && vn.is_positive()) || (vc.is_positive() && vn.is_negative()) {
            let t = &vc / (&vc - &vn);
            out.push(RatPoint::new(
                &cur.x + &t * (&next.x - &cur.x),
                &cur.y + &t * (&next.y - &cur.y),
            ));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn has_area(poly: &[RatPoint]) -> bool {
    if poly.len() < 3 {
        return false;
    }
    let mut twice_area = Rational::zero();
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        twice_area += &p.x * &q.y - &q.x * &p.y;
    }
    !twice_area.is_zero()
}

fn region_half_planes(gamma: &GroupElement) -> Vec<HalfPlane> {
    let (a, b, c, d) = (gamma.a(), gamma.b(), gamma.c(), gamma.d());
    if gamma.fixes_infinity() {
        // [-n-1, -n] x (-inf, 1] for T^n
        let n = b.clone();
        return vec![
            HalfPlane::from_ints(&n + BigInt::one(), BigInt::one(), BigInt::zero()),
            HalfPlane::from_ints(-n, -BigInt::one(), BigInt::zero()),
            HalfPlane::from_ints(BigInt::one(), BigInt::zero(), -BigInt::one()),
        ];
    }
    vec![
        // f1 = d - c x - a y
        HalfPlane::from_ints(d.clone(), -c, -a),
        // f2 = c - d + c x + a y
        HalfPlane::from_ints(c - d, c.clone(), a.clone()),
        // f3 = -c - d x - b y
        HalfPlane::from_ints(-c, -d, -b),
    ]
}

/// Clips the segment `p q` to the viewport, if any of it is visible.
fn clip_segment(p: &RatPoint, q: &RatPoint, view: &Viewport) -> Option<(RatPoint, RatPoint)> {
    let (mut t0, mut t1) = (Rational::zero(), Rational::one());
    let dx = &q.x - &p.x;
    let dy = &q.y - &p.y;
    let checks = [
        (-dx.clone(), &p.x - &view.xmin),
        (dx.clone(), &view.xmax - &p.x),
        (-dy.clone(), &p.y - &view.ymin),
        (dy.clone(), &view.ymax - &p.y),
    ];
    for (pk, qk) in checks {
        if pk.is_zero() {
            if qk.is_negative() {
                return None;
            }
            continue;
        }
        let r = &qk / &pk;
        if pk.is_negative() {
            if r > t1 {
                return None;
            }
            if r > t0 {
                t0 = r;
            }
        } else {
            if r < t0 {
                return None;
            }
            if r < t1 {
                t1 = r;
            }
        }
    }
    let at = |t: &Rational| RatPoint::new(&p.x + t * &dx, &p.y + t * &dy);
    Some((at(&t0), at(&t1)))
}

struct Canvas<'a> {
    view: &'a Viewport,
    scale: f64,
}

impl Canvas<'_> {
    fn px(&self, p: &RatPoint) -> (f64, f64) {
        let x = (&p.x - &self.view.xmin).to_f64().unwrap_or(0.0) * self.scale;
        let y = (&self.view.ymax - &p.y).to_f64().unwrap_or(0.0) * self.scale;
        (x, y)
    }
}

fn side_style(letter: Option<Letter>) -> (&'static str, &'static str) {
    match letter {
        Some(Letter::S) => ("side-S", r#"stroke-width="1" stroke-dasharray="6 4""#),
        Some(Letter::U) => ("side-U", r#"stroke-width="3""#),
        Some(Letter::U2) => (
            "side-U2",
            r#"stroke-width="3" stroke-dasharray="1 5" stroke-linecap="round""#,
        ),
        None => ("side", r#"stroke-width="1""#),
    }
}

/// Draws every triangle (and translation strip) whose label has word length
/// at most `max_word_len` and which meets the viewport. Finite sides are
/// styled by the final letter of the label: dashed for `S`, thick for `U`,
/// dotted for `U2`.
pub fn svg_render(view: &Viewport, max_word_len: usize) -> Result<String> {
    let width = (&view.xmax - &view.xmin).to_f64().unwrap_or(1.0);
    let height = (&view.ymax - &view.ymin).to_f64().unwrap_or(1.0);
    if !(width > 0.0 && height > 0.0) {
        return Err(Error::DegenerateViewport("zero extent".into()));
    }
    let canvas = Canvas {
        view,
        scale: WIDTH_PX / width,
    };
    let (w_px, h_px) = (WIDTH_PX, height * canvas.scale);

    let mut tiles = String::new();
    let mut sides = String::new();
    let mut labels = String::new();
    for (word, gamma) in word_tree(max_word_len) {
        let mut poly = view.corners();
        for h in region_half_planes(&gamma) {
            poly = clip(&poly, &h);
            if poly.is_empty() {
                break;
            }
        }
        if !has_area(&poly) {
            continue;
        }
        let mut d = String::new();
        for (i, p) in poly.iter().enumerate() {
            let (x, y) = canvas.px(p);
            let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let name = if word.is_empty() {
            "1".to_string()
        } else {
            word.to_string()
        };
        let _ = writeln!(
            tiles,
            r##"    <path class="triangle" data-word="{name}" d="{d}" fill="none" stroke="#999" stroke-width="0.5"/>"##
        );

        if let Some(tri) = Triangle::new(&gamma) {
            if let Some((p, q)) = clip_segment(&tri.p2, &tri.p3, view) {
                let (class, style) = side_style(word.last());
                let ((x1, y1), (x2, y2)) = (canvas.px(&p), canvas.px(&q));
                let _ = writeln!(
                    sides,
                    r##"    <line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#000" {style}/>"##
                );
            }
        }

        let n = Rational::from_integer(BigInt::from(poly.len()));
        let cx = poly.iter().fold(Rational::zero(), |acc, p| acc + &p.x) / &n;
        let cy = poly.iter().fold(Rational::zero(), |acc, p| acc + &p.y) / &n;
        let (x, y) = canvas.px(&RatPoint::new(cx, cy));
        let _ = writeln!(
            labels,
            r#"    <text x="{x:.2}" y="{y:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            name.replace('·', "")
        );
    }

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w_px:.0}" height="{h_px:.0}" viewBox="0 0 {w_px:.2} {h_px:.2}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, "  <g id=\"tiles\">\n{tiles}  </g>");
    let _ = writeln!(out, "  <g id=\"finite-sides\">\n{sides}  </g>");
    let _ = writeln!(
        out,
        "  <g id=\"labels\" font-family=\"serif\">\n{labels}  </g>"
    );
    out.push_str("</svg>\n");
    Ok(out)
}
