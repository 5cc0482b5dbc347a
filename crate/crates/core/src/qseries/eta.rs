//! Euler products `prod_{k>=1} (1 - q^k)^(-e)` and inverse 24th powers of
//! the Dedekind eta function.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{divisor_sum, QSeries};
use crate::rational::{big, Rational};
use crate::{Error, Result};

/// Coefficient table of `prod (1 - q^k)^(-e)`, extended on demand.
///
/// Uses `n p(n) = e * sum_{k=1}^{n} sigma(k) p(n - k)`, which follows from
/// taking the logarithmic derivative of the product.
#[derive(Clone, Debug)]
pub struct EulerPowerTable {
    power: i64,
    coeffs: Vec<BigInt>,
    sigma: Vec<BigInt>,
}

impl EulerPowerTable {
    pub fn new(power: i64) -> Self {
        EulerPowerTable {
            power,
            coeffs: vec![BigInt::from(1)],
            sigma: vec![BigInt::zero()],
        }
    }

    pub fn power(&self) -> i64 {
        self.power
    }

    /// Ensures coefficients of `q^0 .. q^(n-1)` are available.
    pub fn extend_to(&mut self, n: usize) {
        while self.sigma.len() < n {
            let k = self.sigma.len() as u64;
            self.sigma.push(divisor_sum(k));
        }
        let e = BigInt::from(self.power);
        while self.coeffs.len() < n {
            let m = self.coeffs.len();
            let acc: BigInt = (1..=m).map(|k| &self.sigma[k] * &self.coeffs[m - k]).sum();
            let (q, r) = (acc * &e).div_rem(&BigInt::from(m));
            debug_assert!(r.is_zero(), "Euler product recurrence must divide exactly");
            self.coeffs.push(q);
        }
    }

    /// Coefficient of `q^m`; zero for negative `m`.
    pub fn coeff(&mut self, m: i64) -> BigInt {
        if m < 0 {
            return BigInt::zero();
        }
        self.extend_to(m as usize + 1);
        self.coeffs[m as usize].clone()
    }

    pub fn prefix(&mut self, n: usize) -> &[BigInt] {
        self.extend_to(n);
        &self.coeffs[..n]
    }
}

/// First `n` coefficients of `prod_{k>=1} (1 - q^k)^(-e)`.
pub fn euler_coefficients(e: i64, n: usize) -> Vec<BigInt> {
    let mut table = EulerPowerTable::new(e);
    table.prefix(n).to_vec()
}

/// `prod_{k>=1} (1 - q^k)^(-e)` known below `q^n`.
pub fn euler_product_power(e: i64, n: usize) -> QSeries {
    let coeffs = euler_coefficients(e, n);
    QSeries::new(
        1,
        n as i64,
        coeffs.into_iter().enumerate().map(|(i, c)| (i as i64, big(c))),
    )
    .expect("step denominator 1 is valid")
}

/// `eta(q^s)^(-24) = q^(-s) prod_{k>=1} (1 - q^(s k))^(-24)`, known below `q^order`.
pub fn eta_pow_neg24(scale: &Rational, order: i64) -> Result<QSeries> {
    if !scale.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "eta argument scale must be positive, got {scale}"
        )));
    }
    // need (terms - 1) * s >= order
    let terms = (Rational::from_integer(order.into()) / scale)
        .ceil()
        .to_integer()
        + BigInt::from(1);
    let terms: usize = if terms.is_negative() {
        0
    } else {
        terms.try_into().map_err(|_| {
            Error::InvalidArgument(format!("eta expansion to order {order} is too long"))
        })?
    };
    let product = euler_product_power(24, terms);
    Ok(product
        .scale_exponent(scale)?
        .shift(&-scale.clone())
        .truncate_int(order))
}
