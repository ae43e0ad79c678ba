//! `p`-adic valuations of Fourier coefficients.
//!
//! For a prime `p` dividing `Q`, the coefficients of `F0` satisfy
//! `nu_p(a_n) = -nu_p(Q^n n!) = -(n nu_p(Q) + nu_p(n!))`, so `p` divides the
//! denominators to an unbounded power. [`valuation_table`] checks this exactly
//! at every index; [`detect_unbounded`] gathers the empirical picture for any
//! prime; [`probe_alpha_f0_bound`] evaluates the growth bound on a product
//! `alpha * f1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mlde::{f0_direct, Component};
use crate::qseries::QSeries;
use crate::rational::{multiplicity, serde_rational, Rational};
use crate::repclass::{is_prime, ReprParams};

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not prime")))
    }
}

/// The `p`-adic valuation of a nonzero rational.
pub fn nu_p(p: u64, x: &Rational) -> Result<i64> {
    require_prime(p)?;
    if x.is_zero() {
        return Err(Error::Domain("nu_p(0) is undefined".into()));
    }
    Ok(multiplicity(p, x.numer()) as i64 - multiplicity(p, x.denom()) as i64)
}

/// `nu_p(n!)` by Legendre's formula.
pub fn nu_p_factorial(p: u64, n: u64) -> u64 {
    assert!(p >= 2, "nu_p_factorial needs p >= 2");
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

fn nu_p_u64(p: u64, mut x: u64) -> u64 {
    let mut k = 0;
    while x > 0 && x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

/// `-nu_p(Q^n n!)`.
pub fn predicted_valuation(p: u64, cofactor: u64, n: u64) -> i64 {
    -((n * nu_p_u64(p, cofactor) + nu_p_factorial(p, n)) as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationEntry {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
    /// `None` when the coefficient is zero.
    pub actual: Option<i64>,
    /// Present exactly when `p | Q`.
    pub predicted: Option<i64>,
}

impl ValuationEntry {
    /// `None` when there is no prediction to compare with.
    pub fn matches(&self) -> Option<bool> {
        self.predicted.map(|pred| self.actual == Some(pred))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationTable {
    pub prime: u64,
    pub component: Component,
    pub params: ReprParams,
    pub entries: Vec<ValuationEntry>,
}

impl ValuationTable {
    pub fn has_prediction(&self) -> bool {
        self.params.cofactor % self.prime == 0
    }

    /// First index whose actual valuation differs from the prediction.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.entries.iter().find(|e| e.matches() == Some(false)).map(|e| e.n)
    }

    pub fn all_match(&self) -> bool {
        self.first_mismatch().is_none()
    }

    /// First `n` with `nu_p(a_{n+1}) >= nu_p(a_n)`, or with an undefined value.
    pub fn first_non_decrease(&self) -> Option<usize> {
        self.entries.windows(2).find_map(|w| match (w[0].actual, w[1].actual) {
            (Some(x), Some(y)) if y < x => None,
            _ => Some(w[0].n),
        })
    }

    pub const CSV_HEADER: [&'static str; 6] =
        ["n", "numerator", "denominator", "nu_actual", "nu_predicted", "match"];

    /// Rows in the CSV column order of [`Self::CSV_HEADER`]; absent values
    /// are empty strings.
    pub fn csv_rows(&self) -> Vec<[String; 6]> {
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        self.entries
            .iter()
            .map(|e| {
                [
                    e.n.to_string(),
                    e.coeff.numer().to_string(),
                    e.coeff.denom().to_string(),
                    opt(e.actual),
                    opt(e.predicted),
                    e.matches().map(|m| m.to_string()).unwrap_or_default(),
                ]
            })
            .collect()
    }

    /// Inverse of [`Self::csv_rows`], given the table metadata.
    pub fn from_csv_rows(
        prime: u64,
        component: Component,
        params: ReprParams,
        rows: &[[String; 6]],
    ) -> Result<Self> {
        let bad = |what: &str, v: &str| Error::Domain(format!("bad {what} field {v:?} in valuation row"));
        let opt = |s: &str, what: &str| -> Result<Option<i64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(what, s))
            }
        };
        let entries = rows
            .iter()
            .map(|r| {
                let n = r[0].parse().map_err(|_| bad("n", &r[0]))?;
                let num: BigInt = r[1].parse().map_err(|_| bad("numerator", &r[1]))?;
                let den: BigInt = r[2].parse().map_err(|_| bad("denominator", &r[2]))?;
                if den.is_zero() {
                    return Err(bad("denominator", &r[2]));
                }
                Ok(ValuationEntry {
                    n,
                    coeff: Rational::new(num, den),
                    actual: opt(&r[3], "nu_actual")?,
                    predicted: opt(&r[4], "nu_predicted")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { prime, component, params, entries })
    }
}

/// Tabulates `nu_p(a_n)` for every coefficient of `f`, with the exact
/// prediction alongside when `p | Q`.
pub fn valuation_table(
    p: u64,
    f: &QSeries,
    params: &ReprParams,
    component: Component,
) -> Result<ValuationTable> {
    require_prime(p)?;
    let predicts = params.cofactor % p == 0;
    let entries = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| ValuationEntry {
            n,
            coeff: c.clone(),
            actual: (!c.is_zero()).then(|| nu_p(p, c).expect("prime checked, nonzero")),
            predicted: predicts.then(|| predicted_valuation(p, params.cofactor, n as u64)),
        })
        .collect();
    Ok(ValuationTable { prime: p, component, params: params.clone(), entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeMinimum {
    pub prime: u64,
    /// `None` when every coefficient up to the horizon is zero.
    pub min_valuation: Option<i64>,
    pub argmin: Option<usize>,
    /// The minimum is first reached at the horizon itself.
    pub at_horizon: bool,
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnboundedReport {
    pub horizon: usize,
    pub per_prime: Vec<PrimeMinimum>,
    /// Primes `<= prime_bound` dividing some denominator up to the horizon.
    pub denominator_primes: BTreeSet<u64>,
    pub prime_bound: u64,
    /// Some denominator keeps a factor with every prime above `prime_bound`.
    pub unfactored_remainder: bool,
}

impl UnboundedReport {
    pub fn bounded_so_far(&self) -> bool {
        self.denominator_primes.is_empty() && !self.unfactored_remainder
    }
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut sieve = vec![true; bound + 1];
    let mut out = Vec::new();
    for i in 2..=bound {
        if sieve[i] {
            out.push(i as u64);
            for j in (i * i..=bound).step_by(i) {
                sieve[j] = false;
            }
        }
    }
    out
}

/// Empirical denominator growth of `f` up to `horizon`.
///
/// For each prime the minimum valuation over `n <= horizon` is reported,
/// with whether it is only reached at the horizon. No claim is made about
/// the limit. Denominators are trial-divided by primes up to `prime_bound`.
pub fn detect_unbounded(
    f: &QSeries,
    primes: &[u64],
    horizon: usize,
    prime_bound: u64,
) -> Result<UnboundedReport> {
    if horizon > f.order() {
        return Err(Error::Domain(format!("horizon {horizon} exceeds series order {}", f.order())));
    }
    let coeffs = &f.coeffs()[..=horizon];
    let mut per_prime = Vec::with_capacity(primes.len());
    for &p in primes {
        require_prime(p)?;
        let vals: Vec<Option<i64>> =
            coeffs.iter().map(|c| (!c.is_zero()).then(|| nu_p(p, c).expect("nonzero"))).collect();
        let mut min: Option<(i64, usize)> = None;
        for (n, v) in vals.iter().enumerate() {
            if let Some(v) = *v {
                if min.map_or(true, |(m, _)| v < m) {
                    min = Some((v, n));
                }
            }
        }
        let strictly_decreasing =
            vals.windows(2).all(|w| matches!((w[0], w[1]), (Some(x), Some(y)) if y < x));
        per_prime.push(PrimeMinimum {
            prime: p,
            min_valuation: min.map(|m| m.0),
            argmin: min.map(|m| m.1),
            at_horizon: min.map_or(false, |m| m.1 == horizon && horizon > 0),
            strictly_decreasing,
        });
    }

    let small_primes: Vec<BigInt> = primes_up_to(prime_bound).into_iter().map(BigInt::from).collect();
    let mut denominator_primes = BTreeSet::new();
    let mut unfactored_remainder = false;
    for c in coeffs {
        let mut den = c.denom().abs();
        for p in &small_primes {
            if den.is_one() {
                break;
            }
            let (mut q, mut r) = den.div_rem(p);
            if r.is_zero() {
                denominator_primes.insert(u64::try_from(p).expect("small prime"));
                while r.is_zero() {
                    den = q;
                    (q, r) = den.div_rem(p);
                }
            }
        }
        if !den.is_one() {
            unfactored_remainder = true;
        }
    }
    Ok(UnboundedReport { horizon, per_prime, denominator_primes, prime_bound, unfactored_remainder })
}

/// Result of the growth probe on `c_{p^s}`, the coefficient of
/// `q^{m1 + p^s}` in `alpha * f1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundProbe {
    pub prime: u64,
    pub s: u32,
    /// `nu_p(c_{p^s})`.
    pub lhs: i64,
    /// `nu_p(b_0) - p^s - s`.
    pub rhs: i64,
    pub holds: bool,
}

/// Checks `nu_p(c_{p^s}) <= nu_p(b_0) - p^s - s` for `alpha = sum b_n q^n`,
/// where `c_n = sum_{j=0}^n b_{n-j} a_j` and `a_j` are the coefficients of
/// the first component of `F0`.
pub fn probe_alpha_f0_bound(alpha: &QSeries, params: &ReprParams, p: u64, s: u32) -> Result<BoundProbe> {
    require_prime(p)?;
    if params.cofactor % p != 0 {
        return Err(Error::Domain(format!("{p} does not divide Q = {}", params.cofactor)));
    }
    if s == 0 {
        return Err(Error::Domain("s must be positive".into()));
    }
    if !alpha.offset().is_zero() {
        return Err(Error::Domain("alpha must have offset 0".into()));
    }
    let b = alpha.coeffs();
    if b[0].is_zero() {
        return Err(Error::Domain("alpha must have a nonzero constant term".into()));
    }
    let target = p
        .checked_pow(s)
        .and_then(|t| usize::try_from(t).ok())
        .ok_or_else(|| Error::Domain("p^s too large".into()))?;
    if alpha.order() < target {
        return Err(Error::Domain(format!(
            "alpha known to order {} but the probe needs {target}",
            alpha.order()
        )));
    }
    let f1 = f0_direct(params, Component::First, target)?;
    let a = f1.coeffs();
    let c: Rational = (0..=target).map(|j| &b[target - j] * &a[j]).sum();
    if c.is_zero() {
        return Err(Error::Domain(format!("c_{target} vanishes")));
    }
    let lhs = nu_p(p, &c)?;
    let rhs = nu_p(p, &b[0])? - target as i64 - s as i64;
    Ok(BoundProbe { prime: p, s, lhs, rhs, holds: lhs <= rhs })
}
