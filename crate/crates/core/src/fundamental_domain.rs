//! Where the fixed point of an elliptic matrix sits relative to the standard
//! fundamental domain `F = {|Re z| <= 1/2, |z| >= 1}` and its left half
//! `F- = {-1/2 <= Re z <= 0, |z| >= 1}`, and the angle weights built on that.
//!
//! For `M = [[a,b],[c,d]]` with `c > 0` the fixed point solves
//! `c z^2 + (d - a) z - b = 0`, so `Re z = (a - d) / 2c` and `|z|^2 = -b / c`.
//! Every test below is a comparison between `a - d`, `-b` and `c`; the
//! quadratic irrational `z` itself is never formed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::modular_group::GroupElement;
use crate::rational::{rat, Rational};

/// A rational 2x2 matrix with positive determinant, modulo sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl MatrixQ {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant(format!(
                "[[{a},{b}],[{c},{d}]]"
            )));
        }
        let flip = c.is_negative()
            || (c.is_zero() && d.is_negative())
            || (c.is_zero() && d.is_zero() && a.is_negative());
        Ok(if flip {
            Self {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Self { a, b, c, d }
        })
    }

    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(rat(a, 1), rat(b, 1), rat(c, 1), rat(d, 1))
    }

    pub fn from_big(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<Self> {
        let q = |v: &BigInt| BigRational::from_integer(v.clone());
        Self::new(q(a), q(b), q(c), q(d))
    }

    pub fn from_group(g: &GroupElement) -> Self {
        Self::from_big(g.a(), g.b(), g.c(), g.d()).expect("determinant 1")
    }

    /// `[[y, x], [0, 1]]`, the matrix attached to the point `(x, y)`.
    pub fn affine(x: &Rational, y: &Rational) -> Result<Self> {
        Self::new(y.clone(), x.clone(), Rational::zero(), rat(1, 1))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, -&self.c, -&self.d).expect("same determinant")
    }

    pub fn mul_group(&self, g: &GroupElement) -> Self {
        let q = |v: &BigInt| BigRational::from_integer(v.clone());
        let (ga, gb, gc, gd) = (q(g.a()), q(g.b()), q(g.c()), q(g.d()));
        Self::new(
            &self.a * &ga + &self.b * &gc,
            &self.a * &gb + &self.b * &gd,
            &self.c * &ga + &self.d * &gc,
            &self.c * &gb + &self.d * &gd,
        )
        .expect("determinant is preserved")
    }

    pub fn kind(&self) -> MatrixKind {
        kind(self)
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Scalar,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainPosition {
    Outside,
    Interior,
    Edge,
    /// `rho = e^{pi i / 3}`, the right corner of `F`.
    CornerRho,
    /// `rho^2 = e^{2 pi i / 3}`, the left corner of `F` and of `F-`.
    CornerRhoBar,
    /// `i`, a corner of `F-` only.
    CornerI,
}

pub fn kind(m: &MatrixQ) -> MatrixKind {
    if m.b.is_zero() && m.c.is_zero() && m.a == m.d {
        return MatrixKind::Scalar;
    }
    let t = m.trace();
    match (&t * &t).cmp(&(rat(4, 1) * m.det())) {
        Ordering::Less => MatrixKind::Elliptic,
        Ordering::Equal => MatrixKind::Parabolic,
        Ordering::Greater => MatrixKind::Hyperbolic,
    }
}

fn require_elliptic(m: &MatrixQ) -> Result<()> {
    if kind(m) != MatrixKind::Elliptic {
        return Err(Error::NotElliptic(m.to_string()));
    }
    Ok(())
}

pub fn position_in_f(m: &MatrixQ) -> Result<DomainPosition> {
    require_elliptic(m)?;
    let u = &m.a - &m.d;
    let c = &m.c;
    let minus_b = -&m.b;
    if u.abs() > *c || minus_b < *c {
        return Ok(DomainPosition::Outside);
    }
    let on_arc = minus_b == *c;
    Ok(if on_arc && u == *c {
        DomainPosition::CornerRho
    } else if on_arc && u == -c {
        DomainPosition::CornerRhoBar
    } else if on_arc || u.abs() == *c {
        DomainPosition::Edge
    } else {
        DomainPosition::Interior
    })
}

pub fn position_in_f_minus(m: &MatrixQ) -> Result<DomainPosition> {
    require_elliptic(m)?;
    let u = &m.a - &m.d;
    let c = &m.c;
    let minus_b = -&m.b;
    if u.is_positive() || u < -c || minus_b < *c {
        return Ok(DomainPosition::Outside);
    }
    let on_arc = minus_b == *c;
    Ok(if on_arc && u.is_zero() {
        DomainPosition::CornerI
    } else if on_arc && u == -c {
        DomainPosition::CornerRhoBar
    } else if on_arc || u.is_zero() || u == -c {
        DomainPosition::Edge
    } else {
        DomainPosition::Interior
    })
}

/// Fraction of a full angle subtended by `F` at the fixed point of `m`.
pub fn chi_weight(m: &MatrixQ) -> Result<Rational> {
    Ok(match position_in_f(m)? {
        DomainPosition::Outside => rat(0, 1),
        DomainPosition::Interior => rat(1, 1),
        DomainPosition::Edge => rat(1, 2),
        DomainPosition::CornerRho | DomainPosition::CornerRhoBar => rat(1, 6),
        DomainPosition::CornerI => unreachable!("i is not a corner of F"),
    })
}

/// Fraction of a full angle subtended by `F-` at the fixed point of `m`.
pub fn chi_minus_weight(m: &MatrixQ) -> Result<Rational> {
    Ok(match position_in_f_minus(m)? {
        DomainPosition::Outside => rat(0, 1),
        DomainPosition::Interior => rat(1, 1),
        DomainPosition::Edge => rat(1, 2),
        DomainPosition::CornerI => rat(1, 4),
        DomainPosition::CornerRhoBar => rat(1, 6),
        DomainPosition::CornerRho => unreachable!("rho is not in F-"),
    })
}

/// `chi-(z_M)` for elliptic `M`, `-1/12` for scalar `M`, and 0 otherwise.
pub fn alpha(m: &MatrixQ) -> Result<Rational> {
    if !m.det().is_positive() {
        return Err(Error::NonPositiveDeterminant(m.to_string()));
    }
    match kind(m) {
        MatrixKind::Scalar => Ok(rat(-1, 12)),
        MatrixKind::Elliptic => chi_minus_weight(m),
        MatrixKind::Parabolic | MatrixKind::Hyperbolic => Ok(rat(0, 1)),
    }
}

/// `[[a,b],[c,d]] -> [[-a,b],[c,-d]]`, which sends the fixed point
/// `x + iy` to `-x + iy`.
pub fn reflect(m: &MatrixQ) -> MatrixQ {
    MatrixQ::new(-&m.a, m.b.clone(), m.c.clone(), -&m.d).expect("determinant is preserved")
}

/// The position of the mirror image of a point of `F` under `x -> -x`.
pub fn mirror(p: DomainPosition) -> DomainPosition {
    match p {
        DomainPosition::CornerRho => DomainPosition::CornerRhoBar,
        DomainPosition::CornerRhoBar => DomainPosition::CornerRho,
        other => other,
    }
}
