//! Writing a vector-valued form as `alpha F0 + beta DF0`.
//!
//! `F0` and `DF0` are free generators over the ring of level-one modular
//! forms, so a form `G` of weight `k0 + w` has unique scalar coefficients
//! `alpha` of weight `w` and `beta` of weight `w - 2`. They are found one
//! `q`-power at a time: the `n`th coefficient column of `G` gives a 2x2
//! system in `(c_n, d_n)` whose matrix is the leading column of
//! `(F0, DF0)`, invertible because `m1 != m2`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eisenstein::EisensteinCache;
use crate::error::{Error, Result};
use crate::mlde::VvmfForm;
use crate::qseries::QSeries;
use crate::rational::{format_rational, parse_rational, CommonDenominator, Rational};

/// `coeff * E4^e4 * E6^e6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "(u32, u32, String)", try_from = "(u32, u32, String)")]
pub struct Monomial {
    pub e4: u32,
    pub e6: u32,
    pub coeff: Rational,
}

impl Monomial {
    pub fn weight(&self) -> i64 {
        4 * self.e4 as i64 + 6 * self.e6 as i64
    }
}

impl From<Monomial> for (u32, u32, String) {
    fn from(m: Monomial) -> Self {
        (m.e4, m.e6, format_rational(&m.coeff))
    }
}

impl TryFrom<(u32, u32, String)> for Monomial {
    type Error = Error;

    fn try_from((e4, e6, c): (u32, u32, String)) -> Result<Self> {
        Ok(Monomial { e4, e6, coeff: parse_rational(&c)? })
    }
}

/// Exponent pairs `(i, j)` with `4i + 6j = weight`, ordered by `i`.
pub fn monomial_basis(weight: i64) -> Vec<(u32, u32)> {
    if weight < 0 || weight % 2 != 0 {
        return Vec::new();
    }
    (0..=weight / 4)
        .filter(|i| (weight - 4 * i) % 6 == 0)
        .map(|i| (i as u32, ((weight - 4 * i) / 6) as u32))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarModularForm {
    pub weight: i64,
    pub series: QSeries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Vec<Monomial>>,
}

impl ScalarModularForm {
    pub fn zero(weight: i64, order: usize) -> Self {
        Self { weight, series: QSeries::constant(Rational::zero(), order), presentation: Some(Vec::new()) }
    }

    /// Expands a polynomial in `E4`, `E6`; every monomial must have the
    /// given weight.
    pub fn from_polynomial(weight: i64, monomials: Vec<Monomial>, cache: &EisensteinCache) -> Result<Self> {
        let mut series = QSeries::constant(Rational::zero(), cache.order());
        for m in &monomials {
            if m.weight() != weight {
                return Err(Error::WeightMismatch(format!(
                    "monomial E4^{} E6^{} has weight {}, expected {weight}",
                    m.e4,
                    m.e6,
                    m.weight()
                )));
            }
            series = series.add(&cache.monomial(m.e4, m.e6).scalar_mul(&m.coeff))?;
        }
        let monomials = monomials.into_iter().filter(|m| !m.coeff.is_zero()).collect();
        Ok(Self { weight, series, presentation: Some(canonical(monomials)) })
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    /// Recovers the `E4`, `E6` presentation by solving against the monomial
    /// basis of the weight, using every known coefficient.
    pub fn fit_presentation(&self, cache: &EisensteinCache) -> Result<Vec<Monomial>> {
        let basis = monomial_basis(self.weight);
        let order = self.series.order().min(cache.order());
        let columns: Vec<QSeries> = basis.iter().map(|&(i, j)| cache.monomial(i, j)).collect();
        let rows: Vec<Vec<Rational>> = (0..=order)
            .map(|n| {
                let mut row: Vec<Rational> = columns.iter().map(|c| c.coeffs()[n].clone()).collect();
                row.push(self.series.coeffs()[n].clone());
                row
            })
            .collect();
        let solution = solve_consistent(rows, basis.len()).ok_or_else(|| {
            Error::NotInSpan(format!("series is not a weight-{} modular form to order {order}", self.weight))
        })?;
        Ok(canonical(
            basis
                .into_iter()
                .zip(solution)
                .filter(|(_, c)| !c.is_zero())
                .map(|((e4, e6), coeff)| Monomial { e4, e6, coeff })
                .collect(),
        ))
    }

    pub fn with_presentation(mut self, cache: &EisensteinCache) -> Result<Self> {
        self.presentation = Some(self.fit_presentation(cache)?);
        Ok(self)
    }
}

fn canonical(mut monomials: Vec<Monomial>) -> Vec<Monomial> {
    monomials.sort_by_key(|m| (m.e4, m.e6));
    let mut out: Vec<Monomial> = Vec::with_capacity(monomials.len());
    for m in monomials {
        match out.last_mut() {
            Some(last) if (last.e4, last.e6) == (m.e4, m.e6) => last.coeff += m.coeff,
            _ => out.push(m),
        }
    }
    out.retain(|m| !m.coeff.is_zero());
    out
}

/// Gauss-Jordan on an augmented matrix with `unknowns` columns plus the
/// right-hand side. Returns the unique solution, or `None` when the system
/// is inconsistent or underdetermined.
fn solve_consistent(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let found = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, found);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    Some((0..unknowns).map(|i| rows[i][unknowns].clone()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub source_weight: i64,
    pub alpha: ScalarModularForm,
    pub beta: ScalarModularForm,
}

impl Decomposition {
    /// Fits `E4`, `E6` presentations for both coefficients.
    pub fn with_presentations(self, cache: &EisensteinCache) -> Result<Self> {
        Ok(Self {
            source_weight: self.source_weight,
            alpha: self.alpha.with_presentation(cache)?,
            beta: self.beta.with_presentation(cache)?,
        })
    }
}

/// Weights with no nonzero modular forms at level one.
fn is_empty_weight(w: i64) -> bool {
    w < 0 || w % 2 != 0 || w == 2
}

fn check_slot(name: &str, form: &ScalarModularForm) -> Result<()> {
    if is_empty_weight(form.weight) {
        if let Some(n) = form.series.leading_index() {
            return Err(Error::NotInSpan(format!(
                "{name} has weight {} but a nonzero coefficient at q^{n}",
                form.weight
            )));
        }
    } else if form.weight == 0 {
        if let Some(n) = form.series.coeffs().iter().skip(1).position(|c| !c.is_zero()) {
            return Err(Error::NotInSpan(format!("{name} has weight 0 but is not constant (q^{})", n + 1)));
        }
    }
    Ok(())
}

fn check_generators(f0: &VvmfForm, df0: &VvmfForm) -> Result<()> {
    if df0.weight != f0.weight + 2 {
        return Err(Error::WeightMismatch(format!(
            "DF0 has weight {}, F0 has weight {}",
            df0.weight, f0.weight
        )));
    }
    Ok(())
}

/// Solves `G = alpha F0 + beta DF0` coefficient by coefficient.
pub fn decompose(g: &VvmfForm, f0: &VvmfForm, df0: &VvmfForm) -> Result<Decomposition> {
    check_generators(f0, df0)?;
    let w = g.weight - f0.weight;
    if w < 0 || w % 2 != 0 {
        return Err(Error::NotInSpan(format!("weight {} is not k0 + 2k for k0 = {}", g.weight, f0.weight)));
    }
    for (gc, fc) in [(&g.comp1, &f0.comp1), (&g.comp2, &f0.comp2)] {
        if gc.offset() != fc.offset() {
            return Err(Error::OffsetMismatch {
                left: Box::new(gc.offset().clone()),
                right: Box::new(fc.offset().clone()),
            });
        }
    }
    let order = g.order().min(f0.order()).min(df0.order());
    let f = [f0.comp1.coeffs(), f0.comp2.coeffs()];
    let h = [df0.comp1.coeffs(), df0.comp2.coeffs()];
    let target = [g.comp1.coeffs(), g.comp2.coeffs()];
    let det = &f[0][0] * &h[1][0] - &h[0][0] * &f[1][0];
    if det.is_zero() {
        return Err(Error::Domain("leading columns of F0 and DF0 are dependent".into()));
    }

    let fs = [CommonDenominator::new(&f[0][..=order]), CommonDenominator::new(&f[1][..=order])];
    let hs = [CommonDenominator::new(&h[0][..=order]), CommonDenominator::new(&h[1][..=order])];
    let mut c: Vec<Rational> = Vec::with_capacity(order + 1);
    let mut d: Vec<Rational> = Vec::with_capacity(order + 1);
    let mut cs = CommonDenominator::empty();
    let mut ds = CommonDenominator::empty();
    for n in 0..=order {
        let rhs: Vec<Rational> = (0..2)
            .map(|i| {
                let (mut from_c, mut from_d) = (BigInt::zero(), BigInt::zero());
                for j in 1..=n {
                    from_c += &cs.nums[n - j] * &fs[i].nums[j];
                    from_d += &ds.nums[n - j] * &hs[i].nums[j];
                }
                &target[i][n]
                    - Rational::new(from_c, &cs.den * &fs[i].den)
                    - Rational::new(from_d, &ds.den * &hs[i].den)
            })
            .collect();
        let cn = (&rhs[0] * &h[1][0] - &h[0][0] * &rhs[1]) / &det;
        let dn = (&f[0][0] * &rhs[1] - &rhs[0] * &f[1][0]) / &det;
        cs.push(&cn);
        ds.push(&dn);
        c.push(cn);
        d.push(dn);
    }

    let alpha = ScalarModularForm { weight: w, series: QSeries::integral(c), presentation: None };
    let beta = ScalarModularForm { weight: w - 2, series: QSeries::integral(d), presentation: None };
    check_slot("alpha", &alpha)?;
    check_slot("beta", &beta)?;
    Ok(Decomposition { source_weight: g.weight, alpha, beta })
}

/// `alpha F0 + beta DF0`.
pub fn reconstruct(
    alpha: &ScalarModularForm,
    beta: &ScalarModularForm,
    f0: &VvmfForm,
    df0: &VvmfForm,
) -> Result<VvmfForm> {
    check_generators(f0, df0)?;
    if alpha.weight != beta.weight + 2 {
        return Err(Error::WeightMismatch(format!(
            "alpha has weight {}, beta has weight {}",
            alpha.weight, beta.weight
        )));
    }
    let a = f0.scale_by(&alpha.series, alpha.weight)?;
    let b = df0.scale_by(&beta.series, beta.weight)?;
    a.add(&b)
}
