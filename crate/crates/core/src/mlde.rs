//! The minimal-weight form `F0` and its differential equation.
//!
//! The components `f_i = q^{m_i} sum a_n q^n` of `F0` solve
//!
//! ```text
//! q^2 f'' + [1 + 2(k0+1) E2] q f' + [k0(k0+1) E2^2 + (kappa1 + k0/144) E4] f = 0
//! ```
//!
//! which has a regular singular point at `q = 0` with indicial roots
//! `m1, m2`. The coefficients are produced by two recursions that are kept
//! independent of each other:
//!
//! - [`f0_direct`] evaluates the indicial polynomial `I0` and the shifted
//!   polynomials `I_j(s) = u_j s + v_j` on rationals.
//! - [`f0_sj_form`] clears the level `N` and works with integer weights
//!   `N s_j(n)` and the factored denominator `n c (M n +/- d)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::eisenstein::{sigma_table, EisensteinCache};
use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{int, Rational};
use crate::repclass::ReprParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::First, Component::Second];

    pub fn index(self) -> u8 {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }

    /// The exponent `m_i` of this component.
    pub fn exponent(self, p: &ReprParams) -> &Rational {
        match self {
            Component::First => &p.m1,
            Component::Second => &p.m2,
        }
    }
}

impl From<Component> for u8 {
    fn from(c: Component) -> u8 {
        c.index()
    }
}

impl TryFrom<u8> for Component {
    type Error = String;

    fn try_from(i: u8) -> std::result::Result<Self, String> {
        match i {
            1 => Ok(Component::First),
            2 => Ok(Component::Second),
            _ => Err(format!("component must be 1 or 2, got {i}")),
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// The two coefficient sequences of the differential equation, together
/// with the indicial polynomial `I0(s) = s^2 - (m1+m2) s + m1 m2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldeIngredients {
    sum: Rational,
    product: Rational,
    /// `sum u_n q^n = 1 + 2(k0+1) E2`.
    pub u: Vec<Rational>,
    /// `sum v_n q^n = k0(k0+1) E2^2 + (kappa1 + k0/144) E4`.
    pub v: Vec<Rational>,
}

impl MldeIngredients {
    pub fn order(&self) -> usize {
        self.u.len() - 1
    }

    pub fn indicial(&self, s: &Rational) -> Rational {
        s * s - &self.sum * s + &self.product
    }

    /// `I_j(s) = u_j s + v_j` for `j >= 1`.
    pub fn shifted(&self, j: usize, s: &Rational) -> Rational {
        &self.u[j] * s + &self.v[j]
    }
}

/// `sum_{r=1}^{n-1} sigma_1(r) sigma_1(n - r)` for `0 <= n <= order`.
fn sigma1_convolution(sigma1: &[BigInt]) -> Vec<BigInt> {
    let order = sigma1.len() - 1;
    (0..=order).map(|n| (1..n).map(|r| &sigma1[r] * &sigma1[n - r]).sum()).collect()
}

/// `u_n`, `v_n` from their closed forms in terms of divisor sums.
pub fn ingredients(p: &ReprParams, order: usize) -> MldeIngredients {
    let sum = &p.m1 + &p.m2;
    let product = &p.m1 * &p.m2;
    let diff = &p.m1 - &p.m2;
    let s1 = sigma_table(1, order);
    let s3 = sigma_table(3, order);
    let conv = sigma1_convolution(&s1);
    let u_scale = int(24) * &sum;
    let v_scale_e2 = &p.k0 * &sum;
    let v_scale_e4 = int(10) * (&sum - int(6) * &diff * &diff);

    let mut u = vec![int(1) - &sum];
    let mut v = vec![product.clone()];
    for n in 1..=order {
        u.push(&u_scale * Rational::from_integer(s1[n].clone()));
        let e2_part = Rational::from_integer(BigInt::from(24) * &conv[n] - BigInt::from(2) * &s1[n]);
        let e4_part = Rational::from_integer(s3[n].clone());
        v.push(&v_scale_e2 * e2_part + &v_scale_e4 * e4_part);
    }
    MldeIngredients { sum, product, u, v }
}

/// `u_n`, `v_n` by expanding the Eisenstein combinations directly.
pub fn ingredients_via_eisenstein(p: &ReprParams, cache: &EisensteinCache) -> MldeIngredients {
    let k0 = &p.k0;
    let u_series = QSeries::constant(int(1), cache.order())
        .add(&cache.e2.scalar_mul(&(int(2) * (k0 + int(1)))))
        .expect("offset-zero sum");
    let e2_sq = cache.e2.mul(&cache.e2).expect("offset-zero product");
    let v_series = e2_sq
        .scalar_mul(&(k0 * (k0 + int(1))))
        .add(&cache.e4.scalar_mul(&(&p.kappa1 + k0 / int(144))))
        .expect("offset-zero sum");
    MldeIngredients {
        sum: &p.m1 + &p.m2,
        product: &p.m1 * &p.m2,
        u: u_series.coeffs().to_vec(),
        v: v_series.coeffs().to_vec(),
    }
}

/// Solves `a_0 = 1`, `a_n = -(1/den(n)) sum_{j=1}^n a_{n-j} weight(j, n)`
/// with integer `den` and `weight`.
///
/// Works with `A_n = a_n T_n`, `T_n = den(1) ... den(n)`, which are integers:
/// `A_n = -sum_m A_m weight(n-m, n) den(m+1) ... den(n-1)`, evaluated by
/// Horner's rule. Each coefficient is reduced once at the end.
fn fraction_free_recursion(
    order: usize,
    den: impl Fn(usize) -> BigInt,
    weight: impl Fn(usize, usize) -> BigInt,
) -> Result<Vec<Rational>> {
    let dens: Vec<BigInt> = (0..=order).map(|n| if n == 0 { BigInt::one() } else { den(n) }).collect();
    if let Some(n) = dens.iter().position(Zero::is_zero) {
        return Err(Error::IndicialCollision { n });
    }
    let mut scaled: Vec<BigInt> = Vec::with_capacity(order + 1);
    scaled.push(BigInt::one());
    let mut total = BigInt::one();
    let mut out = Vec::with_capacity(order + 1);
    out.push(Rational::one());
    for n in 1..=order {
        let mut acc = BigInt::zero();
        for m in 0..n {
            if m > 0 {
                acc *= &dens[m];
            }
            let w = weight(n - m, n);
            if !w.is_zero() && !scaled[m].is_zero() {
                acc += &scaled[m] * w;
            }
        }
        total *= &dens[n];
        out.push(Rational::new(-&acc, total.clone()));
        scaled.push(-acc);
    }
    Ok(out)
}

fn integral_part(x: Rational, what: &str) -> Result<BigInt> {
    if x.denom().is_one() {
        Ok(x.numer().clone())
    } else {
        Err(Error::Domain(format!("{what} = {x} is not integral after scaling by N^2")))
    }
}

/// Component `i` of `F0` by the Frobenius recursion
/// `a_n = -sum_{j=1}^n a_{n-j} I_j(m_i + n - j) / I0(m_i + n)`, `a_0 = 1`.
///
/// `I0` and `I_j` are evaluated from the ingredient sequences; both are
/// scaled by `N^2` to make them integral.
pub fn f0_direct(p: &ReprParams, component: Component, order: usize) -> Result<QSeries> {
    let ing = ingredients(p, order);
    let exponent = component.exponent(p).clone();
    let scale = Rational::from_integer(BigInt::from(p.level * p.level));
    // N^2 I_j(m_i + n - j) = base[j] + slope[j] n
    let mut base = vec![BigInt::zero()];
    let mut slope = vec![BigInt::zero()];
    for j in 1..=order {
        let at_zero = ing.shifted(j, &(&exponent - int(j as i64)));
        base.push(integral_part(&scale * at_zero, "I_j")?);
        slope.push(integral_part(&scale * &ing.u[j], "u_j")?);
    }
    let mut dens = vec![BigInt::one()];
    for n in 1..=order {
        let value = ing.indicial(&(&exponent + int(n as i64)));
        dens.push(integral_part(&scale * value, "I0")?);
    }
    let coeffs =
        fraction_free_recursion(order, |n| dens[n].clone(), |j, n| &base[j] + &slope[j] * BigInt::from(n))?;
    QSeries::new(exponent, coeffs)
}

/// Integer data for the rewritten recursion of one component.
struct SjData {
    /// `N s_j(n) = linear[j] + slope[j] * n`.
    linear: Vec<BigInt>,
    slope: Vec<BigInt>,
    c: BigInt,
    m: BigInt,
    /// `+d` for the first component, `-d` for the second.
    signed_d: BigInt,
    level: BigInt,
}

impl SjData {
    fn new(p: &ReprParams, component: Component, order: usize) -> Self {
        let a_plus_b = BigInt::from(p.a + p.b);
        let diff = BigInt::from(p.a - p.b);
        let level = BigInt::from(p.level);
        let (delta, signed_d) = match component {
            Component::First => (diff.clone(), BigInt::from(p.d)),
            Component::Second => (-diff.clone(), -BigInt::from(p.d)),
        };
        let s1 = sigma_table(1, order);
        let s3 = sigma_table(3, order);
        let conv = sigma1_convolution(&s1);
        let six_delta = BigInt::from(6) * &delta;
        let e4_factor = &a_plus_b * &level - BigInt::from(6) * &diff * &diff;
        let conv_factor = BigInt::from(24) * &a_plus_b * (BigInt::from(6) * &a_plus_b - &level);
        let mut linear = vec![BigInt::zero()];
        let mut slope = vec![BigInt::zero()];
        for j in 1..=order {
            let sig_part = BigInt::from(2) * &a_plus_b * &s1[j];
            let jj = BigInt::from(j);
            // 2(a+b) sigma_1(j) ((12n - 12j + 1) N + 6 delta)
            linear.push(
                &sig_part * ((BigInt::one() - BigInt::from(12) * &jj) * &level + &six_delta)
                    + BigInt::from(10) * &s3[j] * &e4_factor
                    + &conv_factor * &conv[j],
            );
            slope.push(&sig_part * BigInt::from(12) * &level);
        }
        SjData { linear, slope, c: BigInt::from(p.c), m: BigInt::from(p.proj_level), signed_d, level }
    }

    fn weight(&self, j: usize, n: usize) -> BigInt {
        &self.linear[j] + &self.slope[j] * BigInt::from(n)
    }
}

/// `s_j(n) = (e + N(n-j)) u_j + N v_j` with `e = a` for the first component
/// and `e = b` for the second, computed from the integer form.
pub fn s_coefficient(p: &ReprParams, component: Component, j: usize, n: usize) -> Rational {
    assert!(j >= 1, "s_j(n) is defined for j >= 1");
    let data = SjData::new(p, component, j);
    Rational::new(data.weight(j, n), data.level.clone())
}

/// Component `i` of `F0` by the rewritten recursion
/// `a_n = -1/(n c (M n +/- d)) sum_{j=1}^n a_{n-j} s_j(n)`.
pub fn f0_sj_form(p: &ReprParams, component: Component, order: usize) -> Result<QSeries> {
    let data = SjData::new(p, component, order);
    let coeffs = fraction_free_recursion(
        order,
        |n| {
            let n = BigInt::from(n);
            &n * &data.c * (&data.m * &n + &data.signed_d) * &data.level
        },
        |j, n| data.weight(j, n),
    )?;
    QSeries::new(component.exponent(p).clone(), coeffs)
}

/// A pair of component series of a common integral weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VvmfForm {
    pub weight: i64,
    pub params: ReprParams,
    pub comp1: QSeries,
    pub comp2: QSeries,
}

impl VvmfForm {
    pub fn new(weight: i64, params: ReprParams, comp1: QSeries, comp2: QSeries) -> Result<Self> {
        if comp1.offset() != &params.m1 {
            return Err(Error::OffsetMismatch {
                left: Box::new(comp1.offset().clone()),
                right: Box::new(params.m1),
            });
        }
        if comp2.offset() != &params.m2 {
            return Err(Error::OffsetMismatch {
                left: Box::new(comp2.offset().clone()),
                right: Box::new(params.m2),
            });
        }
        Ok(Self { weight, params, comp1, comp2 })
    }

    pub fn component(&self, c: Component) -> &QSeries {
        match c {
            Component::First => &self.comp1,
            Component::Second => &self.comp2,
        }
    }

    pub fn order(&self) -> usize {
        self.comp1.order().min(self.comp2.order())
    }

    pub fn is_zero(&self) -> bool {
        self.comp1.is_zero() && self.comp2.is_zero()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            weight: self.weight,
            params: self.params.clone(),
            comp1: self.comp1.truncate(order),
            comp2: self.comp2.truncate(order),
        }
    }

    /// Multiplies both components by an offset-zero series.
    pub fn scale_by(&self, alpha: &QSeries, weight: i64) -> Result<Self> {
        Ok(Self {
            weight: self.weight + weight,
            params: self.params.clone(),
            comp1: alpha.mul(&self.comp1)?,
            comp2: alpha.mul(&self.comp2)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(format!(
                "adding weights {} and {}",
                self.weight, other.weight
            )));
        }
        Ok(Self {
            weight: self.weight,
            params: self.params.clone(),
            comp1: self.comp1.add(&other.comp1)?,
            comp2: self.comp2.add(&other.comp2)?,
        })
    }
}

/// `F0` of weight `k0`, both components by [`f0_direct`].
pub fn f0_form(p: &ReprParams, order: usize) -> Result<VvmfForm> {
    let weight = p.k0_integer().ok_or_else(|| Error::NonIntegralWeight(p.k0.clone()))?;
    VvmfForm::new(
        weight,
        p.clone(),
        f0_direct(p, Component::First, order)?,
        f0_direct(p, Component::Second, order)?,
    )
}

/// `D_k g = q dg/dq + k E2 g` on a single series.
pub fn modular_derivative_series(weight: i64, g: &QSeries, cache: &EisensteinCache) -> Result<QSeries> {
    let e2_term = cache.e2.scalar_mul(&int(weight)).mul(g)?;
    g.q_d_dq().add(&e2_term)
}

/// `D_k` applied componentwise; the weight goes up by 2.
pub fn modular_derivative(f: &VvmfForm, cache: &EisensteinCache) -> Result<VvmfForm> {
    Ok(VvmfForm {
        weight: f.weight + 2,
        params: f.params.clone(),
        comp1: modular_derivative_series(f.weight, &f.comp1, cache)?,
        comp2: modular_derivative_series(f.weight, &f.comp2, cache)?,
    })
}

/// Left-hand side of the `q`-form of the differential equation applied to `f`.
pub fn mlde_residual(p: &ReprParams, f: &QSeries, cache: &EisensteinCache) -> Result<QSeries> {
    let order = cache.order();
    let k0 = &p.k0;
    let first_order =
        QSeries::constant(int(1), order).add(&cache.e2.scalar_mul(&(int(2) * (k0 + int(1)))))?;
    let zeroth_order = cache
        .e2
        .mul(&cache.e2)?
        .scalar_mul(&(k0 * (k0 + int(1))))
        .add(&cache.e4.scalar_mul(&(&p.kappa1 + k0 / int(144))))?;
    let theta_f = f.q_d_dq();
    // q^2 f'' = theta^2 f - theta f
    let second = theta_f.q_d_dq().sub(&theta_f)?;
    second.add(&first_order.mul(&theta_f)?)?.add(&zeroth_order.mul(f)?)
}

/// `D^2 F + kappa1 E4 F`, with `D^2 = D_{k+2} D_k`.
pub fn second_derivative_residual(f: &VvmfForm, cache: &EisensteinCache) -> Result<VvmfForm> {
    let df = modular_derivative(f, cache)?;
    let ddf = modular_derivative(&df, cache)?;
    let e4_term = f.scale_by(&cache.e4.scalar_mul(&f.params.kappa1), 4)?;
    ddf.add(&e4_term)
}
