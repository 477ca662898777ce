//! The triangulation of the half-plane `{y >= 1}` by semi-infinite triangles
//! `Delta(g)`, one for each `g` in PSL2(Z) not fixing infinity, and exact
//! point location in it.
//!
//! For `g = [[a,b],[c,d]]` with `c > 0` the triangle is cut out by three
//! affine forms:
//!
//! ```text
//! f1 = d - c x - a y >= 0
//! f2 = c - f1        >= 0
//! f3 = -d x - b y - c >= 0
//! ```
//!
//! `(x, y)` lies in `Delta(g)` exactly when `[[y,x],[0,1]] g` has its fixed
//! point in the left half `F-` of the fundamental domain: `f1`, `f2` and `f3`
//! are the conditions `Re z <= 0`, `Re z >= -1/2` and `|z| >= 1`.

pub mod svg;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular_group::{
    classify, classify_word, word_from_matrix, word_tree, Class, GroupElement,
};
use crate::rational::{floor, rat, Rational};

pub use svg::{svg_render, Viewport};

/// Default bound on the number of descent generations in [`locate`].
pub const DEFAULT_MAX_DEPTH: usize = 64;

/// An exact point of the Euclidean plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(rat(xn, xd), rat(yn, yd))
    }

    /// Image under `T^k`, which acts by `(x, y) -> (x - k y, y)`.
    pub fn translate(&self, k: &BigInt) -> RatPoint {
        RatPoint::new(
            &self.x - BigRational::from_integer(k.clone()) * &self.y,
            self.y.clone(),
        )
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// How a closed triangle contains a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Containment {
    Outside,
    Interior,
    Edge,
    /// The vertex where `Re z = 0` meets `|z| = 1` (fixed point `i`).
    VertexP2,
    /// The vertex where `Re z = -1/2` meets `|z| = 1` (fixed point `rho^2`).
    VertexP3,
}

impl Containment {
    pub fn is_inside(self) -> bool {
        self != Containment::Outside
    }
}

/// The three affine forms `(f1, f2, f3)` of `g` evaluated at `p`.
fn forms(g: &GroupElement, p: &RatPoint) -> (Rational, Rational, Rational) {
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let (a, b, c, d) = (q(g.a()), q(g.b()), q(g.c()), q(g.d()));
    let f1 = &d - &c * &p.x - &a * &p.y;
    let f2 = &c - &f1;
    let f3 = -&d * &p.x - &b * &p.y - &c;
    (f1, f2, f3)
}

/// Containment for the strip `[-n-1, -n] x (-inf, 1]` attached to `T^n`.
/// Both upper corners are reported as `VertexP3`: the vertex formulas for
/// `T^m` degenerate to the single point `(-m, 1)`.
fn strip_contains(n: &BigInt, p: &RatPoint) -> Containment {
    let right = BigRational::from_integer(-n);
    let left = &right - Rational::one();
    let one = Rational::one();
    if p.y > one || p.x < left || p.x > right {
        return Containment::Outside;
    }
    let on_top = p.y == one;
    let on_side = p.x == left || p.x == right;
    match (on_top, on_side) {
        (true, true) => Containment::VertexP3,
        (false, false) => Containment::Interior,
        _ => Containment::Edge,
    }
}

pub fn triangle_contains(gamma: &GroupElement, p: &RatPoint) -> Containment {
    if gamma.fixes_infinity() {
        return strip_contains(gamma.b(), p);
    }
    let (f1, f2, f3) = forms(gamma, p);
    if f1.is_negative() || f2.is_negative() || f3.is_negative() {
        return Containment::Outside;
    }
    match (f1.is_zero(), f2.is_zero(), f3.is_zero()) {
        (true, _, true) => Containment::VertexP2,
        (_, true, true) => Containment::VertexP3,
        (false, false, false) => Containment::Interior,
        _ => Containment::Edge,
    }
}

/// The semi-infinite triangle `Delta(g)` with its two finite vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub gamma: GroupElement,
    pub p3: RatPoint,
    pub p2: RatPoint,
}

impl Triangle {
    /// `None` for elements fixing infinity, whose region is a strip instead.
    pub fn new(gamma: &GroupElement) -> Option<Self> {
        if gamma.fixes_infinity() {
            return None;
        }
        let (a, b, c, d) = (gamma.a(), gamma.b(), gamma.c(), gamma.d());
        let q = |v: BigInt| BigRational::from_integer(v);
        let p2x = -(a * c) - b * d;
        let p2y = c * c + d * d;
        let p3 = RatPoint::new(q(&p2x + b * c), q(&p2y - c * d));
        let p2 = RatPoint::new(q(p2x), q(p2y));
        Some(Self {
            gamma: gamma.clone(),
            p3,
            p2,
        })
    }

    pub fn contains(&self, p: &RatPoint) -> Containment {
        triangle_contains(&self.gamma, p)
    }
}

/// The half-cone `C(g)` containing `Delta(g)` for `g` in T.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub gamma: GroupElement,
    pub apex: RatPoint,
    plus: bool,
}

impl Cone {
    /// For `g` in T+ the apex is `P3` and the cone is `{f2 >= 0, f3 >= 0}`;
    /// for `g` in T- the apex is `P2` and the cone is `{f1 >= 0, f3 >= 0}`.
    pub fn new(gamma: &GroupElement) -> Option<Self> {
        let plus = match classify(gamma) {
            Class::TPlus => true,
            Class::TMinus => false,
            _ => return None,
        };
        Some(Self::with_class(gamma.clone(), plus))
    }

    fn with_class(gamma: GroupElement, plus: bool) -> Self {
        let tri = Triangle::new(&gamma).expect("elements of T do not fix infinity");
        let apex = if plus { tri.p3 } else { tri.p2 };
        Self { gamma, apex, plus }
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        let (f1, f2, f3) = forms(&self.gamma, p);
        let side = if self.plus { f2 } else { f1 };
        !side.is_negative() && !f3.is_negative()
    }
}

/// The form whose sign separates `C(gU)` (negative side) from `C(gU^2)`
/// (positive side) inside the cone of `g` in T-. Its zero set is the line
/// through the apex of slope `-(c+d)/(a+b)`, where `[[a,b],[c,d]] = gS` is
/// the parent in T+.
fn separating_form(g: &GroupElement, p: &RatPoint) -> Rational {
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let (a, b, c, d) = (q(g.a()), q(g.b()), q(g.c()), q(g.d()));
    (&c - &d) * &p.x + (&a - &b) * &p.y - d
}

/// Collects every label in `{U^2} ∪ T` whose closed triangle contains `p`,
/// by descending the cones from `C(U)`.
fn locate_in_fundamental_strip(
    p: &RatPoint,
    max_depth: usize,
    out: &mut BTreeSet<GroupElement>,
) -> Result<()> {
    let u2 = GroupElement::u2();
    if triangle_contains(&u2, p).is_inside() {
        out.insert(u2);
    }
    let s = GroupElement::s();
    let u = GroupElement::u();
    let root = Cone::with_class(u.clone(), true);
    if !root.contains(p) {
        return Ok(());
    }
    // stack of (element of T+, generation)
    let mut stack = vec![(u.clone(), 0usize)];
    while let Some((g, depth)) = stack.pop() {
        if depth > max_depth {
            return Err(Error::DepthExceeded(max_depth));
        }
        let (f1, _, _) = forms(&g, p);
        if !f1.is_negative() {
            out.insert(g.clone());
        }
        if f1.is_positive() {
            continue;
        }
        let minus = g.compose(&s);
        let (_, f2, _) = forms(&minus, p);
        if !f2.is_negative() {
            out.insert(minus.clone());
        }
        if f2.is_positive() {
            continue;
        }
        let sep = separating_form(&minus, p);
        if !sep.is_positive() {
            stack.push((minus.compose(&u), depth + 1));
        }
        if !sep.is_negative() {
            stack.push((minus.compose(&GroupElement::u2()), depth + 1));
        }
    }
    Ok(())
}

/// Every `g` not fixing infinity whose closed triangle contains `p`.
///
/// `p` is first moved into `{0 <= x < y}` by a power of `T`. Points that land
/// on `x = 0` are also located at `(y, y)` and shifted back by `T`, since the
/// triangles on the far side of that line belong to the neighbouring
/// translate of the strip.
pub fn locate(p: &RatPoint, max_depth: usize) -> Result<BTreeSet<GroupElement>> {
    if p.y < Rational::one() {
        return Err(Error::BelowHalfPlane(p.x.to_string(), p.y.to_string()));
    }
    let k = floor(&(&p.x / &p.y));
    let shifted = p.translate(&k);
    let mut found = BTreeSet::new();
    locate_in_fundamental_strip(&shifted, max_depth, &mut found)?;
    if shifted.x.is_zero() {
        let mut across = BTreeSet::new();
        let image = RatPoint::new(shifted.y.clone(), shifted.y.clone());
        locate_in_fundamental_strip(&image, max_depth, &mut across)?;
        let t = GroupElement::t();
        found.extend(across.iter().map(|g| t.compose(g)));
    }
    let back = GroupElement::t_pow(&-k);
    Ok(found.iter().map(|g| back.compose(g)).collect())
}

/// Independent oracle: tests every element of word length at most
/// `max_word_len` against the defining inequalities.
pub fn locate_bruteforce(p: &RatPoint, max_word_len: usize) -> BTreeSet<GroupElement> {
    word_tree(max_word_len)
        .filter(|(_, g)| !g.fixes_infinity() && triangle_contains(g, p).is_inside())
        .map(|(_, g)| g)
        .collect()
}

/// `Delta(T g)` agrees with `T Delta(g)` at `p`.
pub fn equivariance_check(gamma: &GroupElement, p: &RatPoint) -> Result<bool> {
    if gamma.fixes_infinity() {
        return Err(Error::FixesInfinity(gamma.to_string()));
    }
    let t = GroupElement::t();
    let moved = p.translate(&BigInt::one());
    Ok(triangle_contains(&t.compose(gamma), &moved) == triangle_contains(gamma, p))
}

/// The class every label of a point strictly inside each region must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `0 < x < y - 1`: tiled by T.
    Cone,
    /// `x < 0`: tiled by T''.
    Left,
    /// `y - 1 < x`: tiled by T'.
    Right,
}

impl Region {
    pub fn of(p: &RatPoint) -> Option<Region> {
        let y1 = &p.y - Rational::one();
        if p.x.is_negative() {
            Some(Region::Left)
        } else if p.x > y1 {
            Some(Region::Right)
        } else if p.x.is_positive() && p.x < y1 {
            Some(Region::Cone)
        } else {
            None
        }
    }

    pub fn admits(self, class: Class) -> bool {
        match self {
            Region::Cone => class.in_t(),
            Region::Left => class == Class::TDoublePrime,
            Region::Right => class == Class::TPrime,
        }
    }
}

/// Result of [`region_decomposition_check`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct RegionReport {
    pub samples: usize,
    pub per_region: [usize; 3],
    pub uncovered: Vec<String>,
    pub wrong_class: Vec<String>,
    pub oracle_disagreements: Vec<String>,
    pub oracle_compared: usize,
    /// The slopes found to bound the descent cones.
    pub resolved_slopes: String,
}

impl RegionReport {
    pub fn ok(&self) -> bool {
        self.uncovered.is_empty()
            && self.wrong_class.is_empty()
            && self.oracle_disagreements.is_empty()
    }
}

/// A uniformly chosen rational `p/q` with `1 <= q <= max_den` in `[lo, hi]`.
pub fn random_rational<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    max_den: i64,
) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let qq = Rational::from_integer(q.into());
    let lo_n = (lo * &qq).ceil().to_integer();
    let hi_n = (hi * &qq).floor().to_integer();
    if lo_n > hi_n {
        return lo.clone();
    }
    let span: i64 = (&hi_n - &lo_n)
        .try_into()
        .expect("sample range fits in i64");
    let offset = rng.gen_range(0..=span);
    Rational::new(lo_n + BigInt::from(offset), q.into())
}

/// Samples points in `1 <= y <= 8`, checks that each is covered and that its
/// labels belong to the class predicted by its region, and compares with the
/// brute-force oracle whenever that is conclusive.
pub fn region_decomposition_check<R: Rng>(
    max_word_len: usize,
    samples: usize,
    rng: &mut R,
) -> Result<RegionReport> {
    let mut report = RegionReport {
        resolved_slopes: "T+ cone: f2 = 0 (slope -c/a) and f3 = 0 (slope -d/b); \
                          T- split: slope -(c+d)/(a+b) of the T+ parent"
            .to_string(),
        ..Default::default()
    };
    let (y_lo, y_hi) = (rat(1, 1), rat(8, 1));
    for _ in 0..samples {
        let y = random_rational(rng, &y_lo, &y_hi, 64);
        let x = random_rational(rng, &(-&y), &(&y + &y), 64);
        let p = RatPoint::new(x, y);
        report.samples += 1;
        let labels = locate(&p, DEFAULT_MAX_DEPTH)?;
        if labels.is_empty() {
            report.uncovered.push(p.to_string());
            continue;
        }
        if let Some(region) = Region::of(&p) {
            report.per_region[region as usize] += 1;
            for g in &labels {
                let class = classify(g);
                if !region.admits(class) {
                    report
                        .wrong_class
                        .push(format!("{p}: {} is {class:?}", word_from_matrix(g)));
                }
            }
        }
        let oracle = locate_bruteforce(&p, max_word_len);
        if horizon_closed(&oracle, max_word_len) {
            report.oracle_compared += 1;
            if oracle != labels {
                report.oracle_disagreements.push(p.to_string());
            }
        }
    }
    Ok(report)
}

/// Whether a brute-force result over words of length at most `max_word_len`
/// is complete: neighbouring triangles differ by at most two letters, so all
/// labels must be at least two letters below the horizon.
pub fn horizon_closed(oracle: &BTreeSet<GroupElement>, max_word_len: usize) -> bool {
    !oracle.is_empty()
        && oracle
            .iter()
            .all(|g| word_from_matrix(g).len() + 2 <= max_word_len)
}

/// Words of every label, in the order of the underlying set.
pub fn label_words(labels: &BTreeSet<GroupElement>) -> Vec<String> {
    labels
        .iter()
        .map(|g| word_from_matrix(g).to_string())
        .collect()
}

/// Classifies an element through its word; exposed for reporting.
pub fn class_of(gamma: &GroupElement) -> Class {
    classify_word(&word_from_matrix(gamma))
}
