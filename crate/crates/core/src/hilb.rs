//! Euler characteristics of Hilbert schemes of points,
//! `sum_n e(Hilb^n S) q^n = prod_{k>=1} (1 - q^k)^(-e(S))`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use crate::qseries::{EulerPowerTable, QSeries};
use crate::rational::big;

fn tables() -> &'static Mutex<HashMap<i64, EulerPowerTable>> {
    static TABLES: OnceLock<Mutex<HashMap<i64, EulerPowerTable>>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `e(Hilb^m S)` for a surface of Euler number `euler`; zero when `m < 0`.
pub fn hilb_euler(euler: i64, m: i64) -> BigInt {
    let mut guard = tables().lock().expect("hilb cache poisoned");
    guard
        .entry(euler)
        .or_insert_with(|| EulerPowerTable::new(euler))
        .coeff(m)
}

/// `e(Hilb^m S)` for `m = 0 .. n-1`.
pub fn hilb_numbers(euler: i64, n: usize) -> Vec<BigInt> {
    let mut guard = tables().lock().expect("hilb cache poisoned");
    guard
        .entry(euler)
        .or_insert_with(|| EulerPowerTable::new(euler))
        .prefix(n)
        .to_vec()
}

/// `sum_{m<n} e(Hilb^m S) q^m`, known below `q^n`.
pub fn hilb_series(euler: i64, n: usize) -> QSeries {
    let terms = hilb_numbers(euler, n)
        .into_iter()
        .enumerate()
        .map(|(m, c)| (m as i64, big(c)));
    QSeries::new(1, n as i64, terms).expect("step denominator 1 is valid")
}
