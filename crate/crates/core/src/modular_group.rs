//! The modular group PSL2(Z) as sign-normalized integer matrices, its
//! reduced words over the free-product generators `S` (order 2) and `U`
//! (order 3), and the word tree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of PSL2(Z), stored as the representative with `c > 0`, or
/// `c = 0` and `d > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GroupElement {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if &a * &d - &b * &c != BigInt::one() {
            return Err(Error::NotUnimodular(format!("{a},{b}],[{c},{d}")));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let flip = c.is_negative() || (c.is_zero() && d.is_negative());
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

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::normalized(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }

    /// `S = [[0,-1],[1,0]]`, fixing `i`.
    pub fn s() -> Self {
        Self::raw(0, -1, 1, 0)
    }

    /// `U = [[0,-1],[1,1]]`, fixing `rho^2`.
    pub fn u() -> Self {
        Self::raw(0, -1, 1, 1)
    }

    pub fn u2() -> Self {
        Self::raw(-1, -1, 1, 0)
    }

    /// The translation `T = SU = [[1,1],[0,1]]`.
    pub fn t() -> Self {
        Self::raw(1, 1, 0, 1)
    }

    /// `T^k` for any integer `k`.
    pub fn t_pow(k: &BigInt) -> Self {
        Self::normalized(BigInt::one(), k.clone(), BigInt::zero(), BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a.is_one()
    }

    /// Whether the element fixes infinity, i.e. lies in the translation subgroup.
    pub fn fixes_infinity(&self) -> bool {
        self.c.is_zero()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::normalized(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Sum of squares of the entries.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |why: &str| Error::Parse(s.to_string(), why.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(|| err("expected [[a,b],[c,d]]"))?;
        let (top, bottom) = inner
            .split_once("],[")
            .ok_or_else(|| err("expected [[a,b],[c,d]]"))?;
        let mut vals = Vec::with_capacity(4);
        for row in [top, bottom] {
            for v in row.split(',') {
                vals.push(v.parse::<BigInt>().map_err(|_| err("bad integer entry"))?);
            }
        }
        let [a, b, c, d]: [BigInt; 4] =
            vals.try_into().map_err(|_| err("expected four entries"))?;
        Self::new(a, b, c, d)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn compose(g: &GroupElement, h: &GroupElement) -> GroupElement {
    g.compose(h)
}

/// A generator letter of the free product `<S> * <U>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    S,
    U,
    U2,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::S, Letter::U, Letter::U2];

    pub fn matrix(self) -> GroupElement {
        match self {
            Letter::S => GroupElement::s(),
            Letter::U => GroupElement::u(),
            Letter::U2 => GroupElement::u2(),
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::S,
            Letter::U => Letter::U2,
            Letter::U2 => Letter::U,
        }
    }

    /// Two letters may not be adjacent in a reduced word iff they share a factor.
    pub fn same_factor(self, other: Letter) -> bool {
        (self == Letter::S) == (other == Letter::S)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Letter::S => "S",
            Letter::U => "U",
            Letter::U2 => "U2",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" => Ok(Letter::S),
            "U" => Ok(Letter::U),
            "U2" | "U²" | "U^2" => Ok(Letter::U2),
            other => Err(Error::UnknownLetter(other.to_string())),
        }
    }
}

/// A reduced word over `{S, U, U2}`. Construction rejects adjacent letters
/// from the same factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        for (i, pair) in letters.windows(2).enumerate() {
            if pair[0].same_factor(pair[1]) {
                return Err(Error::NonReducedWord(
                    pair[0].to_string(),
                    pair[1].to_string(),
                    i,
                ));
            }
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Appends `letter`, or returns `None` if the result would not be reduced.
    pub fn push(&self, letter: Letter) -> Option<Word> {
        match self.last() {
            Some(l) if l.same_factor(letter) => None,
            _ => {
                let mut v = self.0.clone();
                v.push(letter);
                Some(Word(v))
            }
        }
    }

    /// Whether the word is `(first second)^n` for some `n > 0`.
    fn is_power_of(&self, first: Letter, second: Letter) -> bool {
        !self.0.is_empty()
            && self.0.len().is_multiple_of(2)
            && self
                .0
                .chunks(2)
                .all(|pair| pair[0] == first && pair[1] == second)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Ok(Word::empty());
        }
        let letters = t
            .split(['·', '.', '*'])
            .map(str::parse)
            .collect::<Result<Vec<Letter>>>()?;
        Word::new(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn matrix_from_word(w: &Word) -> GroupElement {
    w.letters()
        .iter()
        .fold(GroupElement::identity(), |acc, l| acc.compose(&l.matrix()))
}

/// Checks reducedness of a raw letter sequence before multiplying it out.
pub fn matrix_from_letters(letters: &[Letter]) -> Result<GroupElement> {
    Word::new(letters.to_vec()).map(|w| matrix_from_word(&w))
}

/// Decomposes `g` into its unique reduced word by stripping trailing letters.
///
/// Right multiplication by `S` only permutes the columns up to sign, so it
/// never changes the entry norm. A trailing `U` or `U2` is stripped when doing
/// so strictly decreases the norm; otherwise the trailing letter is `S`.
pub fn word_from_matrix(g: &GroupElement) -> Word {
    let mut rev: Vec<Letter> = Vec::new();
    let mut cur = g.clone();
    loop {
        if cur.is_identity() {
            break;
        }
        if let Some(l) = Letter::ALL.into_iter().find(|l| l.matrix() == cur) {
            rev.push(l);
            break;
        }
        let prev = rev.last().copied();
        let allowed = |l: Letter| prev.is_none_or(|p| !p.same_factor(l));
        let norm = cur.norm();
        let rotation = [Letter::U, Letter::U2]
            .into_iter()
            .filter(|&l| allowed(l))
            .map(|l| (l, cur.compose(&l.inverse().matrix())))
            .filter(|(_, next)| next.norm() < norm)
            .min_by(|x, y| x.1.norm().cmp(&y.1.norm()));
        let (letter, next) = match rotation {
            Some(found) => found,
            None => {
                assert!(allowed(Letter::S), "no reducing letter for {g}");
                (Letter::S, cur.compose(&GroupElement::s()))
            }
        };
        rev.push(letter);
        cur = next;
    }
    rev.reverse();
    Word(rev)
}

/// The two children `(gSU, gSU^2)` of `g` in the tree enumerating T+.
pub fn tree_children(g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
    if classify(g) != Class::TPlus {
        return Err(Error::NotInTPlus(g.to_string()));
    }
    let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
    let left = GroupElement::normalized(a.clone(), a + b, c.clone(), c + d);
    let right = GroupElement::normalized(a + b, b.clone(), c + d, d.clone());
    Ok((left, right))
}

/// The word classes indexing the pieces of the half-plane triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    /// Fixes infinity: the identity and the translations `T^n`.
    GammaInfty,
    /// Starts with `U`, ends with `U` or `U2`.
    TPlus,
    /// Starts with `U`, ends with `S`.
    TMinus,
    /// Starts with `U2`, other than `(U2 S)^n`.
    TPrime,
    /// Starts with `S`, other than `(S U)^n`.
    TDoublePrime,
}

impl Class {
    /// Whether the class is part of T = T+ ∪ T-.
    pub fn in_t(self) -> bool {
        matches!(self, Class::TPlus | Class::TMinus)
    }
}

pub fn classify_word(w: &Word) -> Class {
    match w.first() {
        None => Class::GammaInfty,
        Some(Letter::U) => match w.last() {
            Some(Letter::S) => Class::TMinus,
            _ => Class::TPlus,
        },
        Some(Letter::U2) if w.is_power_of(Letter::U2, Letter::S) => Class::GammaInfty,
        Some(Letter::U2) => Class::TPrime,
        Some(Letter::S) if w.is_power_of(Letter::S, Letter::U) => Class::GammaInfty,
        Some(Letter::S) => Class::TDoublePrime,
    }
}

pub fn classify(g: &GroupElement) -> Class {
    if g.fixes_infinity() {
        return Class::GammaInfty;
    }
    classify_word(&word_from_matrix(g))
}

/// Depth-first walk over all reduced words of length at most `max_len`,
/// yielding each word with its matrix.
pub struct WordTree {
    max_len: usize,
    stack: Vec<(Word, GroupElement)>,
}

impl Iterator for WordTree {
    type Item = (Word, GroupElement);

    fn next(&mut self) -> Option<Self::Item> {
        let (word, g) = self.stack.pop()?;
        if word.len() < self.max_len {
            for l in Letter::ALL.into_iter().rev() {
                if let Some(child) = word.push(l) {
                    let m = g.compose(&l.matrix());
                    self.stack.push((child, m));
                }
            }
        }
        Some((word, g))
    }
}

pub fn word_tree(max_len: usize) -> WordTree {
    WordTree {
        max_len,
        stack: vec![(Word::empty(), GroupElement::identity())],
    }
}

/// All elements whose reduced word has length at most `max_len`, optionally
/// restricted to one class.
pub fn enumerate_words(
    max_len: usize,
    class_filter: Option<Class>,
) -> impl Iterator<Item = GroupElement> {
    word_tree(max_len)
        .filter(move |(w, _)| class_filter.is_none_or(|c| classify_word(w) == c))
        .map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn m(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::from_i64(a, b, c, d).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            compose(&GroupElement::s(), &GroupElement::s()),
            GroupElement::identity()
        );
        assert_eq!(
            compose(&GroupElement::s(), &GroupElement::u()),
            m(1, 1, 0, 1)
        );
        assert_eq!(
            compose(&GroupElement::u(), &GroupElement::u2()),
            GroupElement::identity()
        );
    }

    #[test]
    fn sign_normalization() {
        let g = m(-1, 0, -1, -1);
        assert_eq!(g, m(1, 0, 1, 1));
        assert_eq!(m(-1, 0, 0, -1), GroupElement::identity());
        assert!(GroupElement::from_i64(1, 1, 1, 1).is_err());
    }

    #[test]
    fn matrix_from_word_examples() {
        assert_eq!(matrix_from_word(&Word::empty()), GroupElement::identity());
        // U S U = [[0,-1],[1,1]] [[0,-1],[1,0]] [[0,-1],[1,1]]
        //       = [[-1,0],[1,-1]] [[0,-1],[1,1]] = [[0,1],[-1,-2]] ~ [[0,-1],[1,2]]
        assert_eq!(matrix_from_word(&w("U·S·U")), m(0, -1, 1, 2));
        assert_eq!(matrix_from_word(&w("S·U")), m(1, 1, 0, 1));
        assert!(matrix_from_letters(&[Letter::U, Letter::U2]).is_err());
        assert!(matrix_from_letters(&[Letter::S, Letter::S]).is_err());
    }

    #[test]
    fn word_from_matrix_examples() {
        assert_eq!(word_from_matrix(&GroupElement::identity()), Word::empty());
        assert_eq!(word_from_matrix(&m(1, 1, 0, 1)), w("S·U"));
        let g = matrix_from_word(&w("U2·S·U"));
        assert_eq!(word_from_matrix(&g), w("U2·S·U"));
        assert_eq!(word_from_matrix(&m(1, -1, 0, 1)), w("U2·S"));
    }

    #[test]
    fn word_string_format() {
        let word = w("U·S·U2");
        assert_eq!(word.to_string(), "U·S·U2");
        assert_eq!(w("U.S.U2"), word);
        assert!("U·U".parse::<Word>().is_err());
        assert!("X".parse::<Word>().is_err());
        assert_eq!(m(0, -1, 1, 1).to_string(), "[[0,-1],[1,1]]");
        assert_eq!(
            "[[0, -1], [1, 1]]".parse::<GroupElement>().unwrap(),
            GroupElement::u()
        );
    }

    #[test]
    fn tree_children_examples() {
        let (l, r) = tree_children(&GroupElement::u()).unwrap();
        assert_eq!(l, m(0, -1, 1, 2));
        assert_eq!(r, m(-1, -1, 2, 1));
        // USU = [[0,-1],[1,2]] -> [[0,-1],[1,3]], [[-1,-1],[3,2]]
        let (l, r) = tree_children(&m(0, -1, 1, 2)).unwrap();
        assert_eq!(l, m(0, -1, 1, 3));
        assert_eq!(r, m(-1, -1, 3, 2));
        assert_eq!(l, matrix_from_word(&w("U·S·U·S·U")));
        assert_eq!(r, matrix_from_word(&w("U·S·U·S·U2")));
        assert!(tree_children(&GroupElement::s()).is_err());
        assert!(tree_children(&matrix_from_word(&w("U·S"))).is_err());
    }

    #[test]
    fn tree_children_grow_and_match_products() {
        for g in enumerate_words(8, Some(Class::TPlus)) {
            let (l, r) = tree_children(&g).unwrap();
            let size = g.c() + g.d().abs();
            for child in [&l, &r] {
                assert_eq!(classify(child), Class::TPlus);
                assert!(child.c() + child.d().abs() > size);
            }
            let su = GroupElement::s().compose(&GroupElement::u());
            let su2 = GroupElement::s().compose(&GroupElement::u2());
            assert_eq!(l, g.compose(&su));
            assert_eq!(r, g.compose(&su2));
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&m(1, 5, 0, 1)), Class::GammaInfty);
        assert_eq!(classify(&GroupElement::u()), Class::TPlus);
        assert_eq!(classify(&matrix_from_word(&w("U·S"))), Class::TMinus);
        assert_eq!(classify(&GroupElement::u2()), Class::TPrime);
        assert_eq!(classify(&GroupElement::s()), Class::TDoublePrime);
        assert_eq!(
            classify(&matrix_from_word(&w("S·U·S·U"))),
            Class::GammaInfty
        );
        assert_eq!(
            classify(&matrix_from_word(&w("U2·S·U2·S"))),
            Class::GammaInfty
        );
        assert_eq!(
            classify(&matrix_from_word(&w("S·U·S"))),
            Class::TDoublePrime
        );
    }

    #[test]
    fn enumeration_counts() {
        let zero: Vec<_> = enumerate_words(0, None).collect();
        assert_eq!(zero, vec![GroupElement::identity()]);
        let one: BTreeSet<_> = enumerate_words(1, None).collect();
        let expected: BTreeSet<_> = [
            GroupElement::identity(),
            GroupElement::s(),
            GroupElement::u(),
            GroupElement::u2(),
        ]
        .into_iter()
        .collect();
        assert_eq!(one, expected);
        // 1 empty word, 3 of length 1 (S, U, U2), 4 of length 2 (SU, SU2, US, U2S),
        // 6 of length 3 (SUS, SU2S, USU, USU2, U2SU, U2SU2).
        assert_eq!(enumerate_words(3, None).count(), 1 + 3 + 4 + 6);
        let distinct: BTreeSet<_> = enumerate_words(10, None).collect();
        assert_eq!(distinct.len(), enumerate_words(10, None).count());
    }

    #[test]
    fn t_plus_is_closure_of_u_under_children() {
        let max_len = 11;
        let by_words: BTreeSet<_> = enumerate_words(max_len, Some(Class::TPlus)).collect();
        let mut closure = BTreeSet::new();
        let mut frontier = vec![GroupElement::u()];
        while let Some(g) = frontier.pop() {
            if word_from_matrix(&g).len() > max_len {
                continue;
            }
            let (l, r) = tree_children(&g).unwrap();
            frontier.push(l);
            frontier.push(r);
            closure.insert(g);
        }
        assert_eq!(closure, by_words);
    }
}
