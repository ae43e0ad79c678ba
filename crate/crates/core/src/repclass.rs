//! Arithmetic of the representation parameters.
//!
//! A representation is described here by its `T`-eigenvalue exponents
//! `m1 = a/N > m2 = b/N`, with `gcd(a, b, N) = 1` and `N > a > b >= 0`.
//! From these come `c = gcd(a - b, N)`, `d = (a - b)/c`, the projective level
//! `M = N/c` and the cofactor `Q = M / gcd(M, 60)`.
//!
//! Modularity is decided by the single computable criterion `M <= 5`.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, ratio, serde_rational, Rational};

/// The thirteen `(M, N)` pairs with `M | 60` that admit a non-modular
/// representation. Used as the check list for [`enumerate_pairs`].
pub const REFERENCE_PAIRS: [(u64, u64); 13] = [
    (10, 10),
    (10, 20),
    (10, 30),
    (10, 60),
    (12, 24),
    (15, 15),
    (15, 30),
    (15, 60),
    (20, 40),
    (20, 120),
    (30, 30),
    (30, 60),
    (60, 120),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ReprParams {
    pub a: u64,
    pub b: u64,
    /// `N`, the order of `rho(T)`.
    pub level: u64,
    pub c: u64,
    pub d: u64,
    /// `M`, the order of the image of `T` in `PGL(2)`.
    pub proj_level: u64,
    /// `Q = M / gcd(M, 60)`.
    pub cofactor: u64,
    pub m1: Rational,
    pub m2: Rational,
    /// `6(m1 + m2) - 1`.
    pub k0: Rational,
    /// `(1 - 36 (m1 - m2)^2) / 144`.
    pub kappa1: Rational,
}

impl ReprParams {
    /// `k0` as an integer, when it is one.
    pub fn k0_integer(&self) -> Option<i64> {
        if self.k0.denom().is_one() {
            i64::try_from(self.k0.numer()).ok()
        } else {
            None
        }
    }

    pub fn triple(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.level)
    }

    pub fn pair(&self) -> (u64, u64) {
        (self.proj_level, self.level)
    }

    pub fn is_modular(&self) -> bool {
        self.proj_level <= 5
    }

    /// Primes dividing `Q`, ascending.
    pub fn cofactor_primes(&self) -> Vec<u64> {
        prime_divisors(self.cofactor)
    }
}

/// Derives every parameter from `(a, b, N)`.
pub fn derive_params(a: u64, b: u64, n: u64) -> Result<ReprParams> {
    let invalid = |reason: &str| Error::InvalidTriple { a, b, n, reason: reason.to_string() };
    if !(n > a && a > b) {
        return Err(invalid("need N > a > b >= 0"));
    }
    if a.gcd(&b).gcd(&n) != 1 {
        return Err(invalid("need gcd(a, b, N) = 1"));
    }
    let c = (a - b).gcd(&n);
    let d = (a - b) / c;
    let proj_level = n / c;
    let cofactor = proj_level / proj_level.gcd(&60);
    let to_i64 = |x: u64| i64::try_from(x).map_err(|_| invalid("too large"));
    let (ai, bi, ni) = (to_i64(a)?, to_i64(b)?, to_i64(n)?);
    let m1 = ratio(ai, ni);
    let m2 = ratio(bi, ni);
    let k0 = int(6) * (&m1 + &m2) - int(1);
    let diff = &m1 - &m2;
    let kappa1 = (int(1) - int(36) * &diff * &diff) / int(144);
    Ok(ReprParams { a, b, level: n, c, d, proj_level, cofactor, m1, m2, k0, kappa1 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub constraint: String,
    pub statement: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub params: ReprParams,
    pub lemma_checks: Vec<ConstraintCheck>,
    /// All checks pass; otherwise the triple cannot come from an irreducible
    /// representation of finite projective level.
    pub valid: bool,
    /// `M <= 5`.
    pub modular: bool,
    pub excluded: bool,
    pub exclusion_reason: Option<String>,
    pub notes: Vec<String>,
    pub q_primes: Vec<u64>,
}

impl ClassificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.lemma_checks.iter().filter(|c| !c.pass)
    }
}

fn check(constraint: &str, statement: &str, pass: bool) -> ConstraintCheck {
    ConstraintCheck { constraint: constraint.into(), statement: statement.into(), pass }
}

/// Evaluates every numeric constraint independently; failures are data.
pub fn check_constraints(p: &ReprParams) -> ClassificationReport {
    let (a, b, n, c, m) = (p.a, p.b, p.level, p.c, p.proj_level);
    let small_level = matches!(n, 6 | 8 | 12);
    let lemma_checks = vec![
        check("Lemma3.3a", "N | 6(a+b)", (6 * (a + b)) % n == 0),
        check("Lemma3.3b", "(c, M) | 2", 2 % c.gcd(&m) == 0),
        check("Lemma3.3c", "4 | M => 2 || c", m % 4 != 0 || two_adic(c) == 1),
        check("Lemma3.3d", "c | (N, 12)", n.gcd(&12) % c == 0),
        check("Lemma3.4", "M != 6", m != 6),
        check("Lemma3.5", "N in {6, 8, 12} => M <= 5", !small_level || m <= 5),
    ];
    let valid = lemma_checks.iter().all(|c| c.pass);
    let excluded = m == 6;
    let exclusion_reason = excluded.then(|| "Lemma 3.4: M = 6 cannot occur".to_string());
    let mut notes = Vec::new();
    if small_level {
        notes.push(format!("N = {n}: Lemma 3.5 forces M <= 5"));
    }
    if !p.k0.denom().is_one() {
        notes.push(format!("k0 = {} is not an integer", p.k0));
    }
    ClassificationReport {
        params: p.clone(),
        lemma_checks,
        valid,
        modular: p.is_modular(),
        excluded,
        exclusion_reason,
        notes,
        q_primes: p.cofactor_primes(),
    }
}

/// Filter on `(M, N)`; `None` matches anything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFilter {
    pub proj_level: Option<u64>,
    pub level: Option<u64>,
}

impl PairFilter {
    pub fn exact(proj_level: u64, level: u64) -> Self {
        Self { proj_level: Some(proj_level), level: Some(level) }
    }

    pub fn matches(&self, p: &ReprParams) -> bool {
        self.proj_level.map_or(true, |m| m == p.proj_level) && self.level.map_or(true, |n| n == p.level)
    }
}

/// Every constraint-satisfying `(a, b, N)`, sorted by `(N, a, b)`.
///
/// The levels scanned come from the filter when it pins them down; a filter
/// on `M` alone scans `N = cM` for `c | 12`, which is all the `Lemma3.3d` check
/// allows. Without a filter, levels `2..=max_level` are scanned.
pub fn enumerate_triples(filter: Option<PairFilter>, max_level: u64) -> Vec<ReprParams> {
    let filter = filter.unwrap_or_default();
    let levels: Vec<u64> = match (filter.proj_level, filter.level) {
        (_, Some(n)) => vec![n],
        (Some(m), None) => divisors(12).into_iter().map(|c| c * m).collect(),
        (None, None) => (2..=max_level).collect(),
    };
    let mut out = Vec::new();
    for n in levels {
        for a in 1..n {
            for b in 0..a {
                let Ok(p) = derive_params(a, b, n) else { continue };
                if filter.matches(&p) && check_constraints(&p).valid {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// `(M, N)` pairs with `M | 60` and `M > 5` that have at least one
/// constraint-satisfying witness triple, sorted.
pub fn enumerate_pairs() -> Vec<(u64, u64)> {
    let mut pairs = BTreeSet::new();
    for m in divisors(60).into_iter().filter(|&m| m > 5) {
        let filter = PairFilter { proj_level: Some(m), level: None };
        for p in enumerate_triples(Some(filter), 0) {
            pairs.insert(p.pair());
        }
    }
    pairs.into_iter().collect()
}

fn two_adic(mut x: u64) -> u32 {
    let mut k = 0;
    while x > 0 && x % 2 == 0 {
        x /= 2;
        k += 1;
    }
    k
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: u64,
    b: u64,
    #[serde(rename = "N")]
    level: u64,
    c: u64,
    d: u64,
    #[serde(rename = "M")]
    proj_level: u64,
    #[serde(rename = "Q")]
    cofactor: u64,
    #[serde(with = "serde_rational")]
    m1: Rational,
    #[serde(with = "serde_rational")]
    m2: Rational,
    #[serde(with = "serde_rational")]
    k0: Rational,
    #[serde(with = "serde_rational")]
    kappa1: Rational,
}

impl From<ReprParams> for RawParams {
    fn from(p: ReprParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            level: p.level,
            c: p.c,
            d: p.d,
            proj_level: p.proj_level,
            cofactor: p.cofactor,
            m1: p.m1,
            m2: p.m2,
            k0: p.k0,
            kappa1: p.kappa1,
        }
    }
}

impl TryFrom<RawParams> for ReprParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        let p = derive_params(raw.a, raw.b, raw.level)?;
        if ReprParams::from_raw_unchecked(raw) != p {
            return Err(Error::InvalidTriple {
                a: p.a,
                b: p.b,
                n: p.level,
                reason: "derived fields inconsistent with (a, b, N)".into(),
            });
        }
        Ok(p)
    }
}

impl ReprParams {
    fn from_raw_unchecked(r: RawParams) -> Self {
        ReprParams {
            a: r.a,
            b: r.b,
            level: r.level,
            c: r.c,
            d: r.d,
            proj_level: r.proj_level,
            cofactor: r.cofactor,
            m1: r.m1,
            m2: r.m2,
            k0: r.k0,
            kappa1: r.kappa1,
        }
    }
}
