//! Integral matrices of determinant `n`, their right cosets modulo PSL2(Z),
//! and the two sides of the class number relations.
//!
//! The class-number side of each relation is computed from reduced forms;
//! the matrix side by direct enumeration of elliptic matrices weighted by
//! the angle of `F` at their fixed points. The two pipelines share nothing
//! beyond integer arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::class_numbers::{hurwitz_class_number, ClassNumberCache, QuadForm};
use crate::error::{Error, Result};
use crate::fundamental_domain::{alpha, chi_weight, MatrixQ};
use crate::modular_group::{word_tree, GroupElement};
use crate::rational::{floor, format_rational, rat, sgn, Rational};
use crate::tessellation::{locate, RatPoint};

/// Word length of the exhaustive check used when `y < 1` in [`theorem21_sum`].
pub const BELOW_HALF_PLANE_WORD_LEN: usize = 8;

/// An integral 2x2 matrix, stored up to sign with `c > 0`, or `c = 0` and
/// `d > 0`, or `c = d = 0` and `a > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let flip = c.is_negative()
            || (c.is_zero() && d.is_negative())
            || (c.is_zero() && d.is_zero() && a.is_negative());
        if flip {
            Self {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_elliptic(&self) -> bool {
        let t = self.trace();
        &t * &t < BigInt::from(4) * self.det()
    }

    pub fn mul_group(&self, g: &GroupElement) -> IntMatrix {
        IntMatrix::new(
            &self.a * g.a() + &self.b * g.c(),
            &self.a * g.b() + &self.b * g.d(),
            &self.c * g.a() + &self.d * g.c(),
            &self.c * g.b() + &self.d * g.d(),
        )
    }

    pub fn group_mul(g: &GroupElement, m: &IntMatrix) -> IntMatrix {
        IntMatrix::new(
            g.a() * &m.a + g.b() * &m.c,
            g.a() * &m.b + g.b() * &m.d,
            g.c() * &m.a + g.d() * &m.c,
            g.c() * &m.b + g.d() * &m.d,
        )
    }

    pub fn to_rational(&self) -> Result<MatrixQ> {
        MatrixQ::from_big(&self.a, &self.b, &self.c, &self.d)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// `[[a,b],[c,d]] -> c x^2 + (d - a) xy - b y^2`, of discriminant `t^2 - 4n`.
pub fn form_of_matrix(m: &IntMatrix) -> QuadForm {
    QuadForm {
        a: m.c.clone(),
        b: &m.d - &m.a,
        c: -&m.b,
    }
}

/// The right coset `[[delta', beta], [0, delta]] PSL2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetLabel {
    pub delta_prime: u64,
    pub beta: u64,
    pub delta: u64,
}

impl CosetLabel {
    pub fn new(delta_prime: u64, beta: u64, delta: u64) -> Self {
        Self {
            delta_prime,
            beta,
            delta,
        }
    }

    pub fn is_valid_for(&self, n: u64) -> bool {
        self.delta >= 1
            && self.delta_prime.checked_mul(self.delta) == Some(n)
            && self.beta < self.delta_prime
    }

    pub fn representative(&self) -> IntMatrix {
        IntMatrix::new(self.delta_prime, self.beta, 0, self.delta)
    }

    fn check(&self, n: u64) -> Result<()> {
        if self.is_valid_for(n) {
            Ok(())
        } else {
            Err(Error::InvalidCosetLabel {
                n,
                label: self.to_string(),
            })
        }
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.delta_prime, self.beta, self.delta)
    }
}

/// The label of the coset `M PSL2(Z)`, together with the witness `g` for
/// which `M g = ±[[delta', beta], [0, delta]]`.
pub fn coset_label(m: &IntMatrix) -> Result<(CosetLabel, GroupElement)> {
    let n = m.det();
    if !n.is_positive() {
        return Err(Error::NonPositiveDeterminant(m.to_string()));
    }
    let egcd = m.c.extended_gcd(&m.d);
    // c x + d y = delta; delta = gcd(c, d) (with gcd(0, d) = |d|)
    let (delta, x, y) = if egcd.gcd.is_negative() {
        (-egcd.gcd, -egcd.x, -egcd.y)
    } else {
        (egcd.gcd, egcd.x, egcd.y)
    };
    let kill = GroupElement::new(&m.d / &delta, x.clone(), -(&m.c / &delta), y.clone())
        .expect("(d y + c x) / delta = 1");
    let delta_prime = &n / &delta;
    let top_right = &m.a * &x + &m.b * &y;
    let (q, beta) = top_right.div_mod_floor(&delta_prime);
    let witness = kill.compose(&GroupElement::t_pow(&-q));
    let to_u64 = |v: &BigInt| v.to_u64().expect("label entries fit in u64");
    let label = CosetLabel::new(to_u64(&delta_prime), to_u64(&beta), to_u64(&delta));
    Ok((label, witness))
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidN(0));
    }
    Ok(())
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All coset labels for determinant `n`, ordered by decreasing `delta'` then
/// increasing `beta`. There are `sigma(n)` of them.
pub fn coset_reps(n: u64) -> Result<Vec<CosetLabel>> {
    check_n(n)?;
    let mut labels = Vec::new();
    for delta_prime in divisors(n).into_iter().rev() {
        let delta = n / delta_prime;
        labels.extend((0..delta_prime).map(|beta| CosetLabel::new(delta_prime, beta, delta)));
    }
    Ok(labels)
}

/// An elliptic matrix of determinant `n` with its weight `chi(z_M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMatrix {
    pub matrix: IntMatrix,
    pub weight: Rational,
}

/// Every elliptic `M` of determinant `n` (mod ±1) whose fixed point lies in
/// `F`, with its weight. Writing `u = a - d`, membership in `F` means
/// `|u| <= c <= -b`, and `-4bc = u^2 + 4n - t^2` then forces
/// `3 c^2 <= 4n - t^2`.
pub fn enumerate_weighted_elliptic(n: u64) -> Result<Vec<WeightedMatrix>> {
    check_n(n)?;
    let n = n as i64;
    let mut out = Vec::new();
    let t_max = (4 * n - 1).sqrt();
    for t in -t_max..=t_max {
        let gap = 4 * n - t * t;
        let c_max = (gap / 3).sqrt();
        for c in 1..=c_max {
            for u in -c..=c {
                if (u - t).rem_euclid(2) != 0 {
                    continue;
                }
                let num = u * u + gap;
                if num % (4 * c) != 0 {
                    continue;
                }
                let b = -num / (4 * c);
                if -b < c {
                    continue;
                }
                let m = IntMatrix::new((t + u) / 2, b, c, (t - u) / 2);
                let weight = chi_weight(&m.to_rational()?)?;
                debug_assert!(weight > rat(0, 1));
                out.push(WeightedMatrix { matrix: m, weight });
            }
        }
    }
    Ok(out)
}

/// Two sides of an identity, as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSides {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl RelationSides {
    pub fn ok(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `sum_{ad = n} max(a, d)`.
pub fn max_divisor_sum(n: u64) -> u64 {
    divisors(n).iter().map(|&a| a.max(n / a)).sum()
}

pub fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// `sum_{t^2 <= 4n} H(4n - t^2)` against `sum_{ad = n} max(a, d)`.
pub fn theorem1_sides(n: u64) -> Result<RelationSides> {
    theorem1_sides_with(n, None)
}

pub fn theorem1_sides_with(n: u64, cache: Option<&ClassNumberCache>) -> Result<RelationSides> {
    check_n(n)?;
    let four_n = 4 * n as i64;
    let t_max = four_n.sqrt();
    let mut lhs = rat(0, 1);
    for t in -t_max..=t_max {
        let d = four_n - t * t;
        let h = match cache {
            Some(c) => c.get(d)?,
            None => hurwitz_class_number(d)?,
        };
        lhs += h.value();
    }
    let rhs = Rational::from_integer(max_divisor_sum(n).into());
    Ok(RelationSides { lhs, rhs })
}

fn square_correction(n: u64) -> Rational {
    if is_square(n) {
        rat(1, 6)
    } else {
        rat(0, 1)
    }
}

/// Total weight of elliptic matrices of determinant `n` against
/// `sum max(a, d)`, plus `1/6` when `n` is a square.
pub fn eq0_sides(n: u64) -> Result<RelationSides> {
    let lhs = enumerate_weighted_elliptic(n)?
        .into_iter()
        .fold(rat(0, 1), |acc, w| acc + w.weight);
    let rhs = Rational::from_integer(max_divisor_sum(n).into()) + square_correction(n);
    Ok(RelationSides { lhs, rhs })
}

/// Weighted count of elliptic matrices in the coset `label`.
pub fn theorem2_sum(n: u64, label: &CosetLabel) -> Result<Rational> {
    label.check(n)?;
    let mut total = rat(0, 1);
    for w in enumerate_weighted_elliptic(n)? {
        if coset_label(&w.matrix)?.0 == *label {
            total += w.weight;
        }
    }
    Ok(total)
}

/// `1 + sgn(delta' - delta)`, plus `1/6` for the coset of the scalar matrix.
pub fn theorem2_predicted(n: u64, label: &CosetLabel) -> Result<Rational> {
    label.check(n)?;
    let diff = rat(label.delta_prime as i64 - label.delta as i64, 1);
    let mut v = rat(1 + sgn(&diff) as i64, 1);
    if label.delta_prime == label.delta && label.beta == 0 {
        v += rat(1, 6);
    }
    Ok(v)
}

/// One row of the per-coset table for determinant `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRow {
    pub n: u64,
    pub label: CosetLabel,
    pub sum: Rational,
    pub predicted: Rational,
}

impl CosetRow {
    pub fn ok(&self) -> bool {
        self.sum == self.predicted
    }

    pub fn tsv_header() -> &'static str {
        "n\tdelta_prime\tbeta\tdelta\tsum\tpredicted\tok"
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.label.delta_prime,
            self.label.beta,
            self.label.delta,
            format_rational(&self.sum),
            format_rational(&self.predicted),
            self.ok()
        )
    }
}

/// Both sides of the per-coset relation for every coset of determinant `n`,
/// enumerating the weighted matrices once.
pub fn theorem2_table(n: u64) -> Result<Vec<CosetRow>> {
    let mut sums: BTreeMap<CosetLabel, Rational> = BTreeMap::new();
    for w in enumerate_weighted_elliptic(n)? {
        let (label, _) = coset_label(&w.matrix)?;
        *sums.entry(label).or_insert_with(|| rat(0, 1)) += w.weight;
    }
    coset_reps(n)?
        .into_iter()
        .map(|label| {
            Ok(CosetRow {
                n,
                label,
                sum: sums.remove(&label).unwrap_or_else(|| rat(0, 1)),
                predicted: theorem2_predicted(n, &label)?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|rows| {
            // every weighted matrix must fall into one of the enumerated labels
            match sums.into_keys().next() {
                Some(stray) => Err(Error::InvalidCosetLabel {
                    n,
                    label: stray.to_string(),
                }),
                None => Ok(rows),
            }
        })
}

/// `(1 + sgn(y - 1)) / 2`.
pub fn theorem21_predicted(y: &Rational) -> Rational {
    rat(1 + sgn(&(y - rat(1, 1))) as i64, 2)
}

/// `sum_g alpha([[y, x], [0, 1]] g)` over all of PSL2(Z).
///
/// Only the elements whose triangle contains `(x, y)` contribute once `x` is
/// moved into `[0, y)`, except for the identity matrix, where the scalar
/// term enters.
pub fn theorem21_sum(x: &Rational, y: &Rational, max_depth: usize) -> Result<Rational> {
    if !y.is_positive() {
        return Err(Error::NonPositiveY(y.to_string()));
    }
    let k = floor(&(x / y));
    let x0 = x - Rational::from_integer(k) * y;
    let m = MatrixQ::affine(&x0, y)?;
    let sum_over = |gs: Vec<GroupElement>| -> Result<Rational> {
        gs.iter()
            .try_fold(rat(0, 1), |acc, g| Ok(acc + alpha(&m.mul_group(g))?))
    };
    let one = Rational::one();
    if x0.is_zero() && *y == one {
        return sum_over(vec![
            GroupElement::identity(),
            GroupElement::s(),
            GroupElement::u(),
            GroupElement::u2(),
        ]);
    }
    if *y < one {
        return sum_over(
            word_tree(BELOW_HALF_PLANE_WORD_LEN)
                .map(|(_, g)| g)
                .collect(),
        );
    }
    let labels = locate(&RatPoint::new(x0, y.clone()), max_depth)?;
    sum_over(labels.into_iter().collect())
}

/// JSON-friendly record of a relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationRecord {
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

impl RelationRecord {
    pub fn new(n: u64, sides: &RelationSides) -> Self {
        Self {
            n,
            lhs: format_rational(&sides.lhs),
            rhs: format_rational(&sides.rhs),
            ok: sides.ok(),
        }
    }
}
