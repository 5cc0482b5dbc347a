//! Series with coefficients in `Q[z]/(z^d - 1)`, the ring generated by a
//! formal `d`-th root of unity.
//!
//! This is the independent route to root-of-unity averages: a series is
//! lifted, the substitutions `x -> z^j x` are carried out with genuine ring
//! multiplication, the results are summed, and only then is the formal root
//! specialised to a primitive `d`-th root by reducing modulo the cyclotomic
//! polynomial. Anything that survives that reduction with a nonzero
//! `z`-component is an error.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::QSeries;
use crate::rational::{format_rational, Rational};
use crate::{Error, Result};

/// An element `sum_i c_i z^i` of `Q[z]/(z^d - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElem {
    coeffs: Vec<Rational>,
}

impl CycElem {
    pub fn zero(d: usize) -> Self {
        CycElem {
            coeffs: vec![Rational::zero(); d],
        }
    }

    pub fn from_rational(d: usize, c: Rational) -> Self {
        let mut e = CycElem::zero(d);
        e.coeffs[0] = c;
        e
    }

    /// `z^e`, reduced modulo `z^d - 1`.
    pub fn root_power(d: usize, e: i64) -> Self {
        let mut r = CycElem::zero(d);
        r.coeffs[e.rem_euclid(d as i64) as usize] = Rational::one();
        r
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &CycElem) -> CycElem {
        CycElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> CycElem {
        CycElem {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product, reduced modulo `z^d - 1` (cyclic convolution).
    pub fn mul(&self, other: &CycElem) -> CycElem {
        let d = self.order();
        let mut out = CycElem::zero(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % d] += a * b;
                }
            }
        }
        out
    }

    /// Image under `z -> primitive d-th root`: the remainder modulo the
    /// `d`-th cyclotomic polynomial, lowest degree first.
    pub fn specialize_primitive(&self) -> Vec<Rational> {
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order())
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        // phi is monic
        for top in (deg..rem.len()).rev() {
            let c = rem[top].clone();
            if c.is_zero() {
                continue;
            }
            for (i, p) in phi.iter().enumerate() {
                rem[top - deg + i] -= &c * p;
            }
        }
        rem.truncate(deg);
        rem
    }
}

/// Integer coefficients of the `d`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(d: usize) -> Vec<BigInt> {
    assert!(d >= 1, "cyclotomic index must be positive");
    // z^d - 1 divided by every Phi_e with e | d, e < d
    let mut num = vec![BigInt::zero(); d + 1];
    num[0] = BigInt::from(-1);
    num[d] = BigInt::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = exact_div(&num, &cyclotomic_polynomial(e));
    }
    num
}

fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        for (j, b) in den.iter().enumerate() {
            rem[i + j] -= &c * b;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// A truncated series in `x = q^(1/D)` with coefficients in `Q[z]/(z^d - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycSeries {
    root_order: usize,
    step_den: i64,
    order: i64,
    coeffs: BTreeMap<i64, CycElem>,
}

impl CycSeries {
    pub fn lift(a: &QSeries, root_order: usize) -> Self {
        CycSeries {
            root_order,
            step_den: a.step_den(),
            order: a.order(),
            coeffs: a
                .scaled_terms()
                .map(|(k, c)| (k, CycElem::from_rational(root_order, c.clone())))
                .collect(),
        }
    }

    /// Substitutes `x -> z^j x`.
    pub fn substitute_root(&self, j: i64) -> Self {
        let d = self.root_order;
        let zj = CycElem::root_power(d, j);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                // (z^j)^k by repeated ring multiplication, reduced each step
                let mut factor = CycElem::from_rational(d, Rational::one());
                for _ in 0..k.rem_euclid(d as i64) {
                    factor = factor.mul(&zj);
                }
                (*k, c.mul(&factor))
            })
            .collect();
        CycSeries {
            coeffs,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &CycSeries) -> Self {
        assert_eq!(self.root_order, other.root_order);
        assert_eq!(self.step_den, other.step_den);
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let entry = coeffs
                .entry(*k)
                .or_insert_with(|| CycElem::zero(self.root_order));
            *entry = entry.add(c);
        }
        CycSeries {
            order: self.order.min(other.order),
            coeffs,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CycSeries {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
            ..self.clone()
        }
    }

    /// Specialises the formal root to a primitive root and returns the
    /// rational series, failing if any coefficient keeps a root component.
    pub fn project(&self) -> Result<QSeries> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, c) in &self.coeffs {
            let mut rem = c.specialize_primitive().into_iter();
            let constant = rem.next().unwrap_or_else(Rational::zero);
            if rem.any(|r| !r.is_zero()) {
                let e = Rational::new((*k).into(), self.step_den.into());
                return Err(Error::RootOfUnityResidue(format_rational(&e)));
            }
            terms.push((*k, constant));
        }
        QSeries::new(self.step_den, self.order, terms)
    }
}

/// `(1/d) sum_{j<d} a(zeta_d^j x)` computed in the cyclotomic ring.
///
/// Agrees with `a.residue_extract(d, 0)`; the two routes share no code.
pub fn root_of_unity_avg(a: &QSeries, d: i64) -> Result<QSeries> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "root order must be at least 1, got {d}"
        )));
    }
    let lifted = CycSeries::lift(a, d as usize);
    let mut total = CycSeries::lift(&QSeries::zero(a.order()).with_step_den(a.step_den())?, d as usize);
    for j in 0..d {
        total = total.add(&lifted.substitute_root(j));
    }
    total.scale(&Rational::new(1.into(), d.into())).project()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::eta_pow_neg24;
    use crate::rational::int;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |d| {
            cyclotomic_polynomial(d)
                .into_iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn ring_reduces_after_multiplication() {
        let z = CycElem::root_power(3, 1);
        let z2 = z.mul(&z);
        assert_eq!(z2.mul(&z), CycElem::from_rational(3, int(1)));
    }

    #[test]
    fn full_root_sum_vanishes_at_primitive_root() {
        let d = 6;
        let sum = (0..d).fold(CycElem::zero(d), |acc, j| acc.add(&CycElem::root_power(d, j as i64)));
        assert!(sum.specialize_primitive().iter().all(Zero::is_zero));
    }

    #[test]
    fn averages_small_polynomial() {
        let a = QSeries::from_ints(0, &[1, 1, 1], 3);
        assert_eq!(
            root_of_unity_avg(&a, 2).unwrap(),
            QSeries::from_ints(0, &[1, 0, 1], 3)
        );
        assert_eq!(root_of_unity_avg(&a, 1).unwrap(), a);
    }

    #[test]
    fn agrees_with_residue_extraction_on_eta() {
        let f = eta_pow_neg24(&int(1), 30).unwrap();
        for d in 1..=6 {
            assert_eq!(
                root_of_unity_avg(&f, d).unwrap(),
                f.residue_extract(d, 0).unwrap(),
                "d = {d}"
            );
        }
    }

    #[test]
    fn single_substitution_is_not_root_free() {
        let a = QSeries::from_ints(0, &[1, 1], 2);
        let twisted = CycSeries::lift(&a, 3).substitute_root(1);
        assert!(matches!(
            twisted.project(),
            Err(Error::RootOfUnityResidue(_))
        ));
    }
}
