//! Truncated Puiseux/Laurent series in a single variable `q`.
//!
//! A [`QSeries`] lives in powers of `x = q^(1/D)` for a positive step
//! denominator `D`. Terms are stored sparsely under their scaled exponent
//! `k` (the term `c * q^(k/D)`), and the series carries an exclusive order
//! `O`: every coefficient at a scaled exponent `k < O` is exactly known,
//! nothing at or beyond `O` is.
//!
//! Binary operations reconcile step denominators through their least common
//! multiple and always report the tightest order they can prove.
//! Operations that act on the variable itself ([`QSeries::negate_variable`],
//! [`QSeries::residue_extract`]) act on `x = q^(1/D)` for the series' current
//! `D`; use [`QSeries::with_step_den`] to pick the variable explicitly.

mod cyclotomic;
mod eta;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::{Error, Result};

pub use cyclotomic::{cyclotomic_polynomial, root_of_unity_avg, CycElem, CycSeries};
pub use eta::{euler_coefficients, euler_product_power, eta_pow_neg24, EulerPowerTable};

#[derive(Clone, Debug)]
pub struct QSeries {
    step_den: i64,
    order: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl QSeries {
    /// Builds a series from scaled terms. Zero coefficients and terms at or
    /// beyond `order` are dropped; repeated keys are summed.
    pub fn new<I>(step_den: i64, order: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        if step_den <= 0 {
            return Err(Error::InvalidArgument(format!(
                "step denominator must be positive, got {step_den}"
            )));
        }
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            if k < order {
                *coeffs.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(QSeries {
            step_den,
            order,
            coeffs,
        })
    }

    fn from_parts(step_den: i64, order: i64, mut coeffs: BTreeMap<i64, Rational>) -> Self {
        coeffs.retain(|k, c| *k < order && !c.is_zero());
        QSeries {
            step_den,
            order,
            coeffs,
        }
    }

    /// Integer-exponent series `sum c_i q^(start + i)` known below `q^order`.
    pub fn from_ints(start: i64, coeffs: &[i64], order: i64) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (start + i as i64, int(c)));
        QSeries::new(1, order, terms).expect("step denominator 1 is valid")
    }

    /// `O(q^order)`.
    pub fn zero(order: i64) -> Self {
        QSeries::from_parts(1, order, BTreeMap::new())
    }

    pub fn constant(c: Rational, order: i64) -> Self {
        QSeries::from_parts(1, order, BTreeMap::from([(0, c)]))
    }

    pub fn one(order: i64) -> Self {
        QSeries::constant(Rational::one(), order)
    }

    pub fn step_den(&self) -> i64 {
        self.step_den
    }

    /// Exclusive order in scaled units.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Exclusive order as an exponent of `q`.
    pub fn order_exponent(&self) -> Rational {
        Rational::new(self.order.into(), self.step_den.into())
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Stored terms as `(scaled exponent, coefficient)`, ascending.
    pub fn scaled_terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Stored terms as `(exponent of q, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> {
        let d = self.step_den;
        self.coeffs
            .iter()
            .map(move |(k, c)| (Rational::new((*k).into(), d.into()), c))
    }

    /// Coefficient of `q^e`: `None` when `e` is at or beyond the order.
    pub fn coeff(&self, e: &Rational) -> Option<Rational> {
        if *e >= self.order_exponent() {
            return None;
        }
        let scaled = e * Rational::from_integer(self.step_den.into());
        if !scaled.is_integer() {
            return Some(Rational::zero());
        }
        let k: i64 = scaled.numer().try_into().ok()?;
        Some(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient of `q^n` for an integer `n`.
    pub fn coeff_int(&self, n: i64) -> Option<Rational> {
        self.coeff(&int(n))
    }

    pub fn lead_scaled(&self) -> Option<(i64, &Rational)> {
        self.coeffs.iter().next().map(|(k, c)| (*k, c))
    }

    pub fn lead_exponent(&self) -> Option<Rational> {
        self.lead_scaled()
            .map(|(k, _)| Rational::new(k.into(), self.step_den.into()))
    }

    pub fn has_only_integer_exponents(&self) -> bool {
        self.coeffs.keys().all(|k| k % self.step_den == 0)
    }

    /// Re-expresses the series over a finer step denominator.
    pub fn with_step_den(&self, step_den: i64) -> Result<Self> {
        if step_den <= 0 || step_den % self.step_den != 0 {
            return Err(Error::InvalidArgument(format!(
                "step denominator {step_den} is not a positive multiple of {}",
                self.step_den
            )));
        }
        let f = step_den / self.step_den;
        Ok(QSeries {
            step_den,
            order: self.order * f,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        })
    }

    /// The same series over the smallest step denominator that represents
    /// every key and the order exactly.
    pub fn normalized(&self) -> Self {
        let g = self
            .coeffs
            .keys()
            .fold(self.step_den.gcd(&self.order), |g, k| g.gcd(k));
        if g <= 1 {
            return self.clone();
        }
        QSeries {
            step_den: self.step_den / g,
            order: self.order / g,
            coeffs: self.coeffs.iter().map(|(k, c)| (k / g, c.clone())).collect(),
        }
    }

    fn aligned(&self, other: &QSeries) -> (QSeries, QSeries) {
        let d = self.step_den.lcm(&other.step_den);
        (
            self.with_step_den(d).expect("lcm is a multiple"),
            other.with_step_den(d).expect("lcm is a multiple"),
        )
    }

    /// Lowers the order to `q^e` (never raises it).
    pub fn truncate(&self, e: &Rational) -> Self {
        let den: i64 = e.denom().try_into().expect("exponent denominator fits i64");
        let d = self.step_den.lcm(&den);
        let mut s = self.with_step_den(d).expect("lcm is a multiple");
        let target: i64 = (e * Rational::from_integer(d.into()))
            .to_integer()
            .try_into()
            .expect("order fits i64");
        if target < s.order {
            s.order = target;
            s.coeffs.retain(|k, _| *k < target);
        }
        s
    }

    pub fn truncate_int(&self, n: i64) -> Self {
        self.truncate(&int(n))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale_coeffs(&self, c: &Rational) -> Self {
        QSeries::from_parts(
            self.step_den,
            self.order,
            self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        )
    }

    /// Cauchy product. The result is known up to
    /// `min(order(a) + lead(b), order(b) + lead(a))`.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        let (a, b) = self.aligned(other);
        let (la, _) = a.lead_scaled().ok_or(Error::EmptySeries)?;
        let (lb, _) = b.lead_scaled().ok_or(Error::EmptySeries)?;
        let order = (a.order + lb).min(b.order + la);
        let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ka, ca) in &a.coeffs {
            if ka + lb >= order {
                break;
            }
            for (kb, cb) in &b.coeffs {
                let k = ka + kb;
                if k >= order {
                    break;
                }
                *out.entry(k).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(QSeries::from_parts(a.step_den, order, out))
    }

    /// Multiplicative inverse; the leading exponent is negated and the
    /// relative precision is preserved.
    pub fn inv(&self) -> Result<QSeries> {
        let (lead, c) = self.lead_scaled().ok_or(Error::EmptySeries)?;
        let c_inv = c.recip();
        let precision = (self.order - lead) as usize;
        // a = c x^lead (1 + sum_{i>=1} b_i x^i)
        let tail: Vec<(usize, Rational)> = self
            .coeffs
            .iter()
            .skip(1)
            .map(|(k, v)| ((k - lead) as usize, v * &c_inv))
            .collect();
        let mut u: Vec<Rational> = Vec::with_capacity(precision);
        for j in 0..precision {
            if j == 0 {
                u.push(Rational::one());
                continue;
            }
            let mut acc = Rational::zero();
            for (i, b) in &tail {
                if *i > j {
                    break;
                }
                acc -= b * &u[j - i];
            }
            u.push(acc);
        }
        let coeffs = u
            .into_iter()
            .enumerate()
            .map(|(j, v)| (j as i64 - lead, v * &c_inv))
            .collect();
        Ok(QSeries::from_parts(self.step_den, self.order - 2 * lead, coeffs))
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`QSeries::inv`].
    pub fn pow(&self, e: i64) -> Result<QSeries> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let (lead, _) = self.lead_scaled().ok_or(Error::EmptySeries)?;
        let mut result = QSeries::from_parts(
            self.step_den,
            self.order - lead,
            BTreeMap::from([(0, Rational::one())]),
        );
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Substitutes `q -> q^s` for a positive rational `s`.
    pub fn scale_exponent(&self, s: &Rational) -> Result<QSeries> {
        if !s.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "exponent scale must be positive, got {}",
                format_rational(s)
            )));
        }
        let p: i64 = s.numer().try_into().map_err(|_| overflow())?;
        let q: i64 = s.denom().try_into().map_err(|_| overflow())?;
        let scaled = QSeries {
            step_den: self.step_den * q,
            order: self.order * p,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * p, c.clone())).collect(),
        };
        Ok(scaled.normalized())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: &Rational) -> QSeries {
        let den: i64 = e.denom().try_into().expect("shift denominator fits i64");
        let d = self.step_den.lcm(&den);
        let s = self.with_step_den(d).expect("lcm is a multiple");
        let delta: i64 = (e * Rational::from_integer(d.into()))
            .to_integer()
            .try_into()
            .expect("shift fits i64");
        QSeries {
            step_den: d,
            order: s.order + delta,
            coeffs: s.coeffs.into_iter().map(|(k, c)| (k + delta, c)).collect(),
        }
    }

    pub fn shift_int(&self, n: i64) -> QSeries {
        self.shift(&int(n))
    }

    /// Substitutes `x -> -x` for `x = q^(1/D)`.
    pub fn negate_variable(&self) -> QSeries {
        QSeries {
            step_den: self.step_den,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, if k.is_odd() { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Keeps the terms whose scaled exponent is congruent to `rho` mod `d`.
    pub fn residue_extract(&self, d: i64, rho: i64) -> Result<QSeries> {
        if d < 1 {
            return Err(Error::InvalidArgument(format!(
                "residue modulus must be at least 1, got {d}"
            )));
        }
        let rho = rho.rem_euclid(d);
        Ok(QSeries {
            step_den: self.step_den,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.rem_euclid(d) == rho)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        })
    }

    /// Logarithm of a power series with constant term 1 and nonnegative
    /// integer exponents, via `log F = integral(F'/F)`.
    pub fn log(&self) -> Result<QSeries> {
        let s = self.normalized();
        if s.step_den != 1 || s.order < 1 || s.coeff_int(0) != Some(Rational::one()) {
            return Err(Error::InvalidArgument(
                "log needs an integer-exponent series with constant term 1".into(),
            ));
        }
        if s.coeffs.keys().any(|k| *k < 0) {
            return Err(Error::InvalidArgument("log of a Laurent tail".into()));
        }
        let derivative = QSeries::from_parts(
            1,
            s.order - 1,
            s.coeffs
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, c)| (k - 1, c * int(*k)))
                .collect(),
        );
        let quotient = if derivative.is_empty() {
            derivative
        } else {
            derivative.mul(&s.inv()?)?
        };
        Ok(QSeries::from_parts(
            1,
            quotient.order + 1,
            quotient
                .coeffs
                .iter()
                .map(|(k, c)| (k + 1, c / int(k + 1)))
                .collect(),
        ))
    }

    /// Terms at which `self` and `other` differ below their common order,
    /// as `(exponent, lhs, rhs)`.
    pub fn diff(&self, other: &QSeries) -> Vec<(Rational, Rational, Rational)> {
        let (a, b) = self.aligned(other);
        let order = a.order.min(b.order);
        let keys: std::collections::BTreeSet<i64> = a
            .coeffs
            .keys()
            .chain(b.coeffs.keys())
            .copied()
            .filter(|k| *k < order)
            .collect();
        keys.into_iter()
            .filter_map(|k| {
                let x = a.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero);
                let y = b.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero);
                (x != y).then(|| (Rational::new(k.into(), a.step_den.into()), x, y))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serializes")
    }
}

fn overflow() -> Error {
    Error::InvalidArgument("exponent arithmetic overflow".into())
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.step_den == b.step_den && a.order == b.order && a.coeffs == b.coeffs
    }
}

impl Eq for QSeries {}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, other: &QSeries) -> QSeries {
        let (mut a, b) = self.aligned(other);
        let order = a.order.min(b.order);
        for (k, c) in b.coeffs {
            *a.coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        QSeries::from_parts(a.step_den, order, a.coeffs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        self.scale_coeffs(&-Rational::one())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, other: &QSeries) -> QSeries {
        self + &(-other)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = crate::rational::display_rational(&mag);
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                let var = if e.is_one() {
                    "q".to_string()
                } else {
                    format!("q^{}", crate::rational::display_rational(&e))
                };
                if mag == "1" {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{mag}*{var}")?;
                }
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(
            f,
            "O(q^{})",
            crate::rational::display_rational(&self.order_exponent())
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    step_den: i64,
    order: i64,
    terms: Vec<(i64, String)>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            step_den: self.step_den,
            order: self.order,
            terms: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, format_rational(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(d)?;
        let terms = raw
            .terms
            .iter()
            .map(|(k, c)| parse_rational(c).map(|c| (*k, c)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QSeries::new(raw.step_den, raw.order, terms).map_err(D::Error::custom)
    }
}

/// `sigma(n)`, the sum of the positive divisors of `n`.
pub(crate) fn divisor_sum(n: u64) -> BigInt {
    let mut total = 0u64;
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            total += i;
            if i * i != n {
                total += n / i;
            }
        }
        i += 1;
    }
    BigInt::from(total)
}
