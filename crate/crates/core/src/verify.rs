//! Seeded verification suites behind `hurwitz verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::class_numbers::ClassNumberCache;
use crate::cosets::{
    eq0_sides, theorem1_sides_with, theorem21_predicted, theorem21_sum, theorem2_table,
};
use crate::error::{Error, Result};
use crate::modular_group::{matrix_from_word, word_from_matrix, word_tree, GroupElement};
use crate::rational::{format_rational, rat, Rational};
use crate::tessellation::{
    equivariance_check, horizon_closed, locate, locate_bruteforce, random_rational,
    triangle_contains, Containment, RatPoint, Triangle, DEFAULT_MAX_DEPTH,
};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const ORACLE_WORD_LEN: usize = 14;
pub const ROUND_TRIP_WORD_LEN: usize = 12;
pub const EQUIVARIANCE_WORD_LEN: usize = 8;
pub const VERTEX_WORD_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Thm1,
    Eq0,
    Thm2,
    Thm21,
    Tessellation,
    Words,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Thm1,
        Suite::Eq0,
        Suite::Thm2,
        Suite::Thm21,
        Suite::Tessellation,
        Suite::Words,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Eq0 => "eq0",
            Suite::Thm2 => "thm2",
            Suite::Thm21 => "thm21",
            Suite::Tessellation => "tessellation",
            Suite::Words => "words",
            Suite::All => "all",
        }
    }

    fn default_n_max(self) -> u64 {
        match self {
            Suite::Thm2 => 200,
            _ => 500,
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Suite::Thm21 => 1000,
            _ => 500,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::Parse("suite".into(), s.into()))
    }
}

/// Overrides for the per-suite defaults.
#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub n_max: Option<u64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub max_depth: usize,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            n_max: None,
            samples: None,
            seed,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    cases: usize,
    failures: Vec<Failure>,
}

impl Tally {
    fn new() -> Self {
        Self {
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> (String, String, String)) {
        self.cases += 1;
        if !ok {
            let (case, expected, actual) = case();
            self.failures.push(Failure {
                case,
                expected,
                actual,
            });
        }
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run(suite: Suite, config: &VerifyConfig) -> Result<Vec<VerifyReport>> {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    suites.into_iter().map(|s| run_one(s, config)).collect()
}

fn run_one(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let n_max = config.n_max.unwrap_or_else(|| suite.default_n_max());
    let samples = config.samples.unwrap_or_else(|| suite.default_samples());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tally = match suite {
        Suite::Thm1 => thm1(n_max)?,
        Suite::Eq0 => eq0(n_max)?,
        Suite::Thm2 => thm2(n_max)?,
        Suite::Thm21 => thm21(samples, config.max_depth, &mut rng)?,
        Suite::Tessellation => tessellation(samples, config.max_depth, &mut rng)?,
        Suite::Words => words(),
        Suite::All => unreachable!("expanded by run"),
    };
    Ok(VerifyReport {
        suite: suite.to_string(),
        cases: tally.cases,
        failures: tally.failures,
        wall_time_ms: Some(start.elapsed().as_millis() as u64),
    })
}

fn thm1(n_max: u64) -> Result<Tally> {
    let cache = ClassNumberCache::new();
    let mut t = Tally::new();
    for n in 1..=n_max {
        let s = theorem1_sides_with(n, Some(&cache))?;
        t.check(s.ok(), || {
            (
                format!("n={n}"),
                format_rational(&s.rhs),
                format_rational(&s.lhs),
            )
        });
    }
    Ok(t)
}

fn eq0(n_max: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for n in 1..=n_max {
        let s = eq0_sides(n)?;
        t.check(s.ok(), || {
            (
                format!("n={n}"),
                format_rational(&s.rhs),
                format_rational(&s.lhs),
            )
        });
    }
    Ok(t)
}

fn thm2(n_max: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for n in 1..=n_max {
        let rows = theorem2_table(n)?;
        let mut total = Rational::zero();
        for row in &rows {
            total += &row.sum;
            t.check(row.ok(), || {
                (
                    format!("n={n} coset={}", row.label),
                    format_rational(&row.predicted),
                    format_rational(&row.sum),
                )
            });
        }
        let eq0 = eq0_sides(n)?;
        t.check(total == eq0.rhs, || {
            (
                format!("n={n} total"),
                format_rational(&eq0.rhs),
                format_rational(&total),
            )
        });
    }
    Ok(t)
}

/// A rational in `(0, 8]` and an `x` in `[0, y)`, both with denominator at
/// most 64.
pub fn sample_thm21_point<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    let y = loop {
        let y = random_rational(rng, &rat(0, 1), &rat(8, 1), 64);
        if !y.is_zero() {
            break y;
        }
    };
    let x = loop {
        let x = random_rational(rng, &rat(0, 1), &y, 64);
        if x < y {
            break x;
        }
    };
    (x, y)
}

fn thm21<R: Rng>(samples: usize, max_depth: usize, rng: &mut R) -> Result<Tally> {
    let mut t = Tally::new();
    let mut points = vec![
        (rat(0, 1), rat(1, 1)),
        (rat(1, 2), rat(1, 1)),
        (rat(1, 3), rat(1, 1)),
    ];
    points.extend((0..samples).map(|_| sample_thm21_point(rng)));
    for (x, y) in points {
        let got = theorem21_sum(&x, &y, max_depth)?;
        let want = theorem21_predicted(&y);
        t.check(got == want, || {
            (
                format!("x={} y={}", format_rational(&x), format_rational(&y)),
                format_rational(&want),
                format_rational(&got),
            )
        });
    }
    Ok(t)
}

/// A point with `1 <= y <= 10` and `-1 <= x <= y + 1`, denominators at most 64.
pub fn sample_tessellation_point<R: Rng>(rng: &mut R) -> RatPoint {
    let y = random_rational(rng, &rat(1, 1), &rat(10, 1), 64);
    let x = random_rational(rng, &rat(-1, 1), &(&y + rat(1, 1)), 64);
    RatPoint::new(x, y)
}

/// Number of located triangles having `p` as an interior point.
pub fn interior_count(p: &RatPoint, labels: &BTreeSet<GroupElement>) -> usize {
    labels
        .iter()
        .filter(|g| triangle_contains(g, p) == Containment::Interior)
        .count()
}

/// Finite vertices with `y > 1` of the triangles with word length at most
/// `max_word_len`, split into `(P2, P3)` and deduplicated.
pub fn sample_vertices(max_word_len: usize) -> (Vec<RatPoint>, Vec<RatPoint>) {
    let one = rat(1, 1);
    let mut p2s = BTreeSet::new();
    let mut p3s = BTreeSet::new();
    for (_, g) in word_tree(max_word_len) {
        if let Some(tri) = Triangle::new(&g) {
            if tri.p2.y > one {
                p2s.insert((tri.p2.x.clone(), tri.p2.y.clone()));
            }
            if tri.p3.y > one {
                p3s.insert((tri.p3.x.clone(), tri.p3.y.clone()));
            }
        }
    }
    let pts = |s: BTreeSet<(Rational, Rational)>| {
        s.into_iter().map(|(x, y)| RatPoint::new(x, y)).collect()
    };
    (pts(p2s), pts(p3s))
}

fn tessellation<R: Rng>(samples: usize, max_depth: usize, rng: &mut R) -> Result<Tally> {
    let mut t = Tally::new();
    for _ in 0..samples {
        let p = sample_tessellation_point(rng);
        let labels = locate(&p, max_depth)?;
        t.check(!labels.is_empty(), || {
            (format!("cover {p}"), ">=1 label".into(), "0".into())
        });
        let interiors = interior_count(&p, &labels);
        t.check(interiors <= 1, || {
            (format!("disjoint {p}"), "<=1".into(), interiors.to_string())
        });
        let oracle = locate_bruteforce(&p, ORACLE_WORD_LEN);
        if horizon_closed(&oracle, ORACLE_WORD_LEN) {
            t.check(oracle == labels, || {
                (format!("oracle {p}"), words_of(&oracle), words_of(&labels))
            });
        }
    }
    let (p2s, p3s) = sample_vertices(VERTEX_WORD_LEN);
    for (points, want) in [(p2s, 3), (p3s, 4)] {
        for p in points {
            let n = locate(&p, max_depth)?.len();
            t.check(n == want, || {
                (format!("vertex {p}"), want.to_string(), n.to_string())
            });
        }
    }
    let elements: Vec<GroupElement> = word_tree(EQUIVARIANCE_WORD_LEN)
        .map(|(_, g)| g)
        .filter(|g| !g.fixes_infinity())
        .collect();
    for _ in 0..samples {
        let g = &elements[rng.gen_range(0..elements.len())];
        let p = point_near(g, rng);
        let ok = equivariance_check(g, &p)?;
        t.check(ok, || {
            (
                format!("equivariance {} at {p}", word_from_matrix(g)),
                "true".into(),
                "false".into(),
            )
        });
    }
    Ok(t)
}

/// A point on, inside, or near `Delta(g)`, so that membership checks are not
/// trivially negative.
pub fn point_near<R: Rng>(g: &GroupElement, rng: &mut R) -> RatPoint {
    let tri = Triangle::new(g).expect("caller passes elements not fixing infinity");
    let lam = random_rational(rng, &rat(0, 1), &rat(1, 1), 16);
    let rise = random_rational(rng, &rat(-1, 1), &rat(4, 1), 16);
    match rng.gen_range(0..4) {
        0 => tri.p2,
        1 => tri.p3,
        2 => RatPoint::new(
            &tri.p2.x + &lam * (&tri.p3.x - &tri.p2.x),
            &tri.p2.y + &lam * (&tri.p3.y - &tri.p2.y) + rise,
        ),
        _ => sample_tessellation_point(rng),
    }
}

fn words_of(labels: &BTreeSet<GroupElement>) -> String {
    let words: Vec<String> = labels
        .iter()
        .map(|g| word_from_matrix(g).to_string())
        .collect();
    format!("[{}]", words.join(", "))
}

fn words() -> Tally {
    let mut t = Tally::new();
    for (word, g) in word_tree(ROUND_TRIP_WORD_LEN) {
        let back = word_from_matrix(&g);
        let again = matrix_from_word(&back);
        t.check(back == word && again == g, || {
            (format!("word {word}"), word.to_string(), back.to_string())
        });
    }
    t
}
