//! Divisor sums and the level-one Eisenstein series `E2`, `E4`, `E6`.
//!
//! `E2` is normalised with constant term `-1/12`, so that
//! `E2 = -1/12 + 2 sum sigma_1(n) q^n` and the modular derivative reads
//! `D_k = q d/dq + k E2`. `E4 = 1 + 240 sum sigma_3(n) q^n` and
//! `E6 = 1 - 504 sum sigma_5(n) q^n`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{ratio, Rational};

/// `sigma_k(n) = sum_{d | n} d^k`.
pub fn sigma(k: u32, n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::Domain(format!("sigma_{k}(n) needs n >= 1, got {n}")));
    }
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `sigma_k(n)` for `0 <= n <= max` by a divisor sieve; index 0 holds 0.
pub fn sigma_table(k: u32, max: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); max + 1];
    for d in 1..=max {
        let dk = BigInt::from(d).pow(k);
        for m in (d..=max).step_by(d) {
            table[m] += &dk;
        }
    }
    table
}

fn eisenstein_from(constant: Rational, scale: i64, k: u32, order: usize) -> QSeries {
    let sig = sigma_table(k, order);
    let scale = BigInt::from(scale);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(constant);
    coeffs.extend(sig.into_iter().skip(1).map(|s| Rational::from_integer(&scale * s)));
    QSeries::integral(coeffs)
}

pub fn eisenstein2(order: usize) -> QSeries {
    eisenstein_from(ratio(-1, 12), 2, 1, order)
}

pub fn eisenstein4(order: usize) -> QSeries {
    eisenstein_from(Rational::one(), 240, 3, order)
}

pub fn eisenstein6(order: usize) -> QSeries {
    eisenstein_from(Rational::one(), -504, 5, order)
}

/// `E2`, `E4`, `E6` expanded once to a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinCache {
    order: usize,
    pub e2: QSeries,
    pub e4: QSeries,
    pub e6: QSeries,
}

impl EisensteinCache {
    pub fn new(order: usize) -> Self {
        Self { order, e2: eisenstein2(order), e4: eisenstein4(order), e6: eisenstein6(order) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `E4^i * E6^j` to the cache order.
    pub fn monomial(&self, i: u32, j: u32) -> QSeries {
        let mut acc = QSeries::constant(Rational::one(), self.order);
        for _ in 0..i {
            acc = acc.mul(&self.e4).expect("offset-zero product");
        }
        for _ in 0..j {
            acc = acc.mul(&self.e6).expect("offset-zero product");
        }
        acc
    }
}
