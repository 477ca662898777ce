//! Positive definite binary quadratic forms, their reduction, and the
//! Hurwitz class number `H(D)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::modular_group::GroupElement;
use crate::rational::{rat, Rational};

/// The integral binary quadratic form `A x^2 + B xy + C y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// `B^2 - 4AC`.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_negative()
    }

    /// The form `(x, y) -> f(ax + by, cx + dy)`. This is a right action:
    /// `f.act(g).act(h) == f.act(&g.compose(&h))`.
    pub fn act(&self, g: &GroupElement) -> QuadForm {
        let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
        let two = BigInt::from(2);
        QuadForm {
            a: &self.a * a * a + &self.b * a * c + &self.c * c * c,
            b: &two * &self.a * a * b + &self.b * (a * d + b * c) + &two * &self.c * c * d,
            c: &self.a * b * b + &self.b * b * d + &self.c * d * d,
        }
    }

    /// Whether the form satisfies `|B| <= A <= C` with `B >= 0` when
    /// `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if !(abs_b <= self.a && self.a <= self.c) {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl FromStr for QuadForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string(), "expected (A,B,C)".to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let parts: Vec<BigInt> = inner
            .split(',')
            .map(|p| p.trim().parse::<BigInt>().map_err(|_| err()))
            .collect::<Result<_>>()?;
        match <[BigInt; 3]>::try_from(parts) {
            Ok([a, b, c]) => Ok(QuadForm { a, b, c }),
            Err(_) => Err(err()),
        }
    }
}

/// Reduces a positive definite form, returning the reduced form together with
/// the witness `g` such that `f.act(g)` is the reduced form.
pub fn reduce_with_witness(f: &QuadForm) -> Result<(QuadForm, GroupElement)> {
    if !f.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(f.to_string()));
    }
    let mut cur = f.clone();
    let mut witness = GroupElement::identity();
    let s = GroupElement::s();
    loop {
        // translate B into (-A, A]
        let two_a = BigInt::from(2) * &cur.a;
        let k = (&cur.a - &cur.b).div_floor(&two_a);
        if !k.is_zero() {
            let t = GroupElement::t_pow(&k);
            cur = cur.act(&t);
            witness = witness.compose(&t);
        }
        if cur.a > cur.c {
            cur = cur.act(&s);
            witness = witness.compose(&s);
            continue;
        }
        if cur.a == cur.c && cur.b.is_negative() {
            cur = cur.act(&s);
            witness = witness.compose(&s);
        }
        break;
    }
    debug_assert!(cur.is_reduced());
    Ok((cur, witness))
}

pub fn reduce(f: &QuadForm) -> Result<QuadForm> {
    reduce_with_witness(f).map(|(r, _)| r)
}

fn check_discriminant(d: i64, allow_zero: bool) -> Result<()> {
    let ok_residue = d.rem_euclid(4) == 0 || d.rem_euclid(4) == 3;
    if d < 0 || (d == 0 && !allow_zero) || !ok_residue {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// All reduced positive definite forms of discriminant `-d`.
pub fn enumerate_reduced(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(d, false)?;
    let mut forms = Vec::new();
    let mut a: i64 = 1;
    // a reduced form has 3A^2 <= D
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let form = QuadForm::new(a, b, c);
            if form.is_reduced() {
                forms.push(form);
            }
        }
        a += 1;
    }
    forms.sort();
    Ok(forms)
}

/// An exact Hurwitz class number. The denominator always divides 12.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassNumberValue(pub Rational);

impl ClassNumberValue {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for ClassNumberValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Weight of a reduced form's class: 1/2 for multiples of `x^2 + y^2`,
/// 1/3 for multiples of `x^2 + xy + y^2`, 1 otherwise.
pub fn class_weight(reduced: &QuadForm) -> Rational {
    if reduced.b.is_zero() && reduced.a == reduced.c {
        rat(1, 2)
    } else if reduced.a == reduced.b && reduced.b == reduced.c {
        rat(1, 3)
    } else {
        rat(1, 1)
    }
}

/// `H(D)` for `D >= 0`, `D = 0, 3 (mod 4)`, with `H(0) = -1/12`.
pub fn hurwitz_class_number(d: i64) -> Result<ClassNumberValue> {
    check_discriminant(d, true)?;
    if d == 0 {
        return Ok(ClassNumberValue(rat(-1, 12)));
    }
    let total = enumerate_reduced(d)?
        .iter()
        .map(class_weight)
        .fold(BigRational::zero(), |acc, w| acc + w);
    Ok(ClassNumberValue(total))
}

/// Memoized `H(D)`, safe to share between threads.
#[derive(Debug, Default)]
pub struct ClassNumberCache {
    values: RwLock<HashMap<i64, ClassNumberValue>>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, d: i64) -> Result<ClassNumberValue> {
        if let Some(v) = self.values.read().expect("cache poisoned").get(&d) {
            return Ok(v.clone());
        }
        let v = hurwitz_class_number(d)?;
        self.values
            .write()
            .expect("cache poisoned")
            .entry(d)
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
