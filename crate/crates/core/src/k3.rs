//! Vafa-Witten invariants of K3 surfaces and their generating series.
//!
//! Series are graded by `c2` with trivial determinant: the coefficient of
//! `q^c2` in a rank `r` series is `vw` of the charge `(r, 0, c2)`, and order
//! `N` means `c2 = 0 .. N-1`.

use num_traits::{Signed, Zero};

use crate::hilb::{hilb_euler, hilb_series};
use crate::qseries::{eta_pow_neg24, CycSeries, QSeries};
use crate::rational::{big, int, ratio, Rational};
use crate::surface::{divisibility, hilbert_scheme_index, scale_charge, Charge, SurfaceData};
use crate::wallcross::InvariantTable;
use crate::{Error, Result};

fn require_k3(s: &SurfaceData) -> Result<()> {
    if s.is_k3() {
        Ok(())
    } else {
        Err(Error::NotK3(
            s.name.clone().unwrap_or_else(|| "unnamed surface".into()),
        ))
    }
}

fn require_rank(r: i64) -> Result<()> {
    if r >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("rank must be positive, got {r}")))
    }
}

/// `vw_alpha = sum_{k | alpha} e(Hilb^{1 - chi_S(alpha/k, alpha/k)/2}) / k^2`.
pub fn vw_k3_charge(alpha: &Charge, s: &SurfaceData) -> Result<Rational> {
    require_k3(s)?;
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("charge must be nonzero".into()));
    }
    let m = divisibility(alpha, s)? as i64;
    let mut total = Rational::zero();
    for k in (1..=m).filter(|k| m % k == 0) {
        let part = scale_charge(alpha, 1, k, s)?;
        let index = hilbert_scheme_index(&part, s)?;
        total += big(hilb_euler(s.euler, index)) * ratio(1, k * k);
    }
    Ok(total)
}

/// Invariants of every multiple `(j/m) alpha`, keyed by `j`.
pub fn k3_invariant_table(alpha: &Charge, s: &SurfaceData) -> Result<InvariantTable> {
    let m = divisibility(alpha, s)?;
    (1..=m)
        .map(|j| {
            let part = scale_charge(alpha, j as i64, m as i64, s)?;
            Ok((j, vw_k3_charge(&part, s)?))
        })
        .collect()
}

/// `sum_{c2 < N} vw_{r, c2} q^c2`, one charge at a time.
pub fn vw_k3_series_termwise(r: i64, n: i64) -> Result<QSeries> {
    require_rank(r)?;
    let s = SurfaceData::k3();
    let terms = (0..n.max(0))
        .map(|c2| Ok((c2, vw_k3_charge(&Charge::trivial_det(r, c2), &s)?)))
        .collect::<Result<Vec<_>>>()?;
    QSeries::new(1, n, terms)
}

/// `sum_{d | r} (d^2/r^2) sum_m e(Hilb^{dm+1}) q^{mr/d + r}`, each divisor's
/// inner sum taken from the Hilbert scheme series by residue extraction.
pub fn vw_k3_series_closed(r: i64, n: i64) -> Result<QSeries> {
    require_rank(r)?;
    let mut total = QSeries::zero(n);
    for d in (1..=r).filter(|d| r % d == 0) {
        // need m r/d + r < n, i.e. dm + 1 < (n - r) d^2 / r + 1
        let need = ((n - r) * d * d).max(0);
        let len = (need + r - 1) / r + 2;
        let part = hilb_series(24, len as usize)
            .residue_extract(d, 1)?
            .shift_int(-1)
            .scale_exponent(&ratio(r, d * d))?
            .shift_int(r)
            .scale_coeffs(&ratio(d * d, r * r))
            .truncate_int(n);
        total = &total + &part;
    }
    Ok(total)
}

/// `q^2 eta(q^2)^-24 / 4 + q^2 (eta(x)^-24 + eta(-x)^-24) / 2` with `x = q^(1/2)`.
pub fn rank2_pred_series(n: i64) -> Result<QSeries> {
    let thick = eta_pow_neg24(&int(2), n - 2)?
        .shift_int(2)
        .scale_coeffs(&ratio(1, 4));
    let f = eta_pow_neg24(&ratio(1, 2), n - 2)?.with_step_den(2)?;
    let sym = (&f + &f.negate_variable())
        .shift_int(2)
        .scale_coeffs(&ratio(1, 2));
    let total = &thick + &sym;
    if !total.has_only_integer_exponents() {
        return Err(Error::IdentityFailed(
            "half-integer exponents survived in the rank 2 prediction".into(),
        ));
    }
    Ok(total)
}

/// `sum_{c2 odd, c2 < N} e(Hilb^{2 c2 - 3}) q^c2`, checked against the
/// four-term eta expression.
pub fn odd_c2_series(n: i64) -> Result<QSeries> {
    let direct = odd_c2_series_direct(n)?;
    let eta = odd_c2_series_eta(n)?;
    if direct != eta {
        return Err(Error::IdentityFailed(format!(
            "odd c2 series disagree at {:?}",
            direct.diff(&eta).first()
        )));
    }
    Ok(direct)
}

pub fn odd_c2_series_direct(n: i64) -> Result<QSeries> {
    let terms = (1..n.max(0))
        .step_by(2)
        .map(|c2| (c2, big(hilb_euler(24, 2 * c2 - 3))));
    QSeries::new(1, n, terms)
}

/// `q^2 (f(x) + f(-x) - f(ix) - f(-ix)) / 4` with `f = eta^-24` and
/// `x = q^(1/2)`; the substitutions `x -> i^j x` are carried out in the
/// ring of Gaussian-root polynomials.
pub fn odd_c2_series_eta(n: i64) -> Result<QSeries> {
    let f = eta_pow_neg24(&ratio(1, 2), n - 2)?.with_step_den(2)?;
    let lifted = CycSeries::lift(&f, 4);
    let plus = lifted.substitute_root(0).add(&lifted.substitute_root(2));
    let minus = lifted.substitute_root(1).add(&lifted.substitute_root(3));
    let combo = plus.add(&minus.scale(&int(-1))).scale(&ratio(1, 4));
    Ok(combo.project()?.shift_int(2))
}

fn is_prime(r: i64) -> bool {
    r >= 2 && (2..).take_while(|p| p * p <= r).all(|p| r % p != 0)
}

/// `q^r eta(q^r)^-24 / r^2 + (q^r / r) sum_j eta(zeta^j q^(1/r))^-24` for prime `r`.
pub fn prime_rank_display(r: i64, n: i64) -> Result<QSeries> {
    if !is_prime(r) {
        return Err(Error::NotPrime(r.max(0) as u64));
    }
    let thick = eta_pow_neg24(&int(r), n - r)?
        .shift_int(r)
        .scale_coeffs(&ratio(1, r * r));
    // (1/r) times r copies of the residue-0 part in x = q^(1/r)
    let spread = eta_pow_neg24(&ratio(1, r), n - r)?
        .with_step_den(r)?
        .residue_extract(r, 0)?
        .shift_int(r);
    Ok(&thick + &spread)
}

/// Both sides of `sum_k e(Hilb^k) q^(rk) / r^2 = q^r eta(q^r)^-24 / r^2`.
pub fn rs_thickening_sides(r: i64, n: i64) -> Result<(QSeries, QSeries)> {
    require_rank(r)?;
    let weight = ratio(1, r * r);
    let terms = (0..)
        .take_while(|k| r * k < n)
        .map(|k| (r * k, big(hilb_euler(24, k)) * &weight));
    let lhs = QSeries::new(1, n, terms)?;
    let rhs = eta_pow_neg24(&int(r), n - r)?
        .shift_int(r)
        .scale_coeffs(&weight);
    Ok((lhs, rhs))
}

/// Contribution of `rS`-thickenings of the Hilbert schemes.
pub fn rs_thickening_series(r: i64, n: i64) -> Result<QSeries> {
    let (lhs, rhs) = rs_thickening_sides(r, n)?;
    if lhs != rhs {
        return Err(Error::IdentityFailed(format!(
            "rS-thickening sides disagree at {:?}",
            lhs.diff(&rhs).first()
        )));
    }
    Ok(lhs)
}

/// True if every coefficient is nonnegative with denominator dividing `r^2`.
pub fn has_rank_denominators(series: &QSeries, r: i64) -> bool {
    let r2 = num_bigint::BigInt::from(r * r);
    series.scaled_terms().all(|(_, c)| {
        !c.is_negative() && (&r2 % c.denom()).is_zero()
    })
}

/// `e(Hilb^{4k-3}) + e(Hilb^k)/4`, the even rank 2 coefficient at `c2 = 2k`.
pub fn rank2_even_coefficient(k: i64) -> Rational {
    big(hilb_euler(24, 4 * k - 3)) + big(hilb_euler(24, k)) * ratio(1, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::chi_twisted;
    use crate::wallcross::{pairs_from_vw, variant_select, Theory};
    use proptest::prelude::*;

    fn k3() -> SurfaceData {
        SurfaceData::k3()
    }

    #[test]
    fn rank_two_hand_values() {
        let s = k3();
        let vw = |c2| vw_k3_charge(&Charge::trivial_det(2, c2), &s).unwrap();
        assert_eq!(vw(0), ratio(1, 4));
        assert_eq!(vw(1), int(0));
        assert_eq!(vw(2), int(30));
        assert_eq!(vw(3), int(3200));
        assert_eq!(vw(4), int(176337));
    }

    #[test]
    fn rejects_other_surfaces() {
        let p2 = SurfaceData::preset("p2").unwrap();
        assert!(matches!(
            vw_k3_charge(&Charge::trivial_det(1, 0), &p2),
            Err(Error::NotK3(_))
        ));
        assert!(vw_k3_charge(&Charge::trivial_det(0, 0), &k3()).is_err());
    }

    #[test]
    fn rank_one_is_hilbert_series() {
        assert_eq!(vw_k3_series_termwise(1, 15).unwrap(), hilb_series(24, 15));
        assert_eq!(vw_k3_series_closed(1, 15).unwrap(), hilb_series(24, 15));
    }

    #[test]
    fn closed_matches_termwise() {
        for r in 1..=6 {
            assert_eq!(
                vw_k3_series_closed(r, 20).unwrap(),
                vw_k3_series_termwise(r, 20).unwrap(),
                "r = {r}"
            );
        }
    }

    #[test]
    fn short_orders() {
        for n in 0..4 {
            assert_eq!(
                vw_k3_series_closed(3, n).unwrap(),
                vw_k3_series_termwise(3, n).unwrap()
            );
            assert_eq!(rank2_pred_series(n).unwrap(), vw_k3_series_closed(2, n).unwrap());
        }
    }

    #[test]
    fn rank_two_prediction() {
        let pred = rank2_pred_series(12).unwrap();
        assert_eq!(pred.coeff_int(0), Some(ratio(1, 4)));
        assert_eq!(pred.coeff_int(1), Some(int(0)));
        assert_eq!(pred.coeff_int(2), Some(int(30)));
        assert_eq!(pred, vw_k3_series_closed(2, 12).unwrap());
        for k in 0..6 {
            assert_eq!(pred.coeff_int(2 * k), Some(rank2_even_coefficient(k)));
        }
    }

    #[test]
    fn odd_series() {
        let odd = odd_c2_series(16).unwrap();
        assert_eq!(odd.coeff_int(1), Some(int(0)));
        assert_eq!(odd.coeff_int(3), Some(int(3200)));
        assert!((0..16).step_by(2).all(|c| odd.coeff_int(c) == Some(int(0))));
        let closed = vw_k3_series_closed(2, 16).unwrap();
        for c2 in (1..16).step_by(2) {
            assert_eq!(odd.coeff_int(c2), closed.coeff_int(c2));
        }
    }

    #[test]
    fn prime_display() {
        for r in [2, 3, 5, 7] {
            assert_eq!(
                prime_rank_display(r, 16).unwrap(),
                vw_k3_series_closed(r, 16).unwrap()
            );
        }
        assert_eq!(prime_rank_display(4, 10), Err(Error::NotPrime(4)));
        assert_eq!(prime_rank_display(1, 10), Err(Error::NotPrime(1)));
    }

    #[test]
    fn thickening() {
        assert_eq!(rs_thickening_series(1, 20).unwrap(), hilb_series(24, 20));
        let two = rs_thickening_series(2, 20).unwrap();
        assert_eq!(two.coeff_int(0), Some(ratio(1, 4)));
        assert_eq!(two.coeff_int(1), Some(int(0)));
        assert_eq!(two.coeff_int(2), Some(int(6)));
        for r in 1..=4 {
            rs_thickening_series(r, 30).unwrap();
        }
    }

    #[test]
    fn denominators_and_signs() {
        for r in 1..=6 {
            assert!(has_rank_denominators(&vw_k3_series_closed(r, 18).unwrap(), r));
        }
    }

    #[test]
    fn hand_computed_pairs() {
        let s = k3();
        let v = variant_select(&s, Theory::Behrend);
        for (alpha, lead, sub) in [
            (Charge::trivial_det(2, 0), ratio(1, 4), int(1)),
            (Charge::trivial_det(2, 2), int(30), int(576)),
        ] {
            let table = k3_invariant_table(&alpha, &s).unwrap();
            let half = scale_charge(&alpha, 1, 2, &s).unwrap();
            for n in 1..=5 {
                let chi = chi_twisted(&alpha, &s, n).unwrap();
                let chi_half = chi_twisted(&half, &s, n).unwrap();
                let expected = &lead * chi + ratio(1, 2) * &chi_half * &chi_half * &sub;
                assert_eq!(pairs_from_vw(&alpha, &s, n, &table, v).unwrap(), expected);
            }
        }
    }

    proptest! {
        #[test]
        fn rank_two_coefficients(k in 0i64..12) {
            let s = k3();
            prop_assert_eq!(
                vw_k3_charge(&Charge::trivial_det(2, 2 * k), &s).unwrap(),
                rank2_even_coefficient(k)
            );
            prop_assert_eq!(
                vw_k3_charge(&Charge::trivial_det(2, 2 * k + 1), &s).unwrap(),
                big(hilb_euler(24, 4 * k - 1))
            );
        }

        #[test]
        fn invariant_under_line_bundle_twist(r in 1i64..5, a in -3i64..4, c2 in -2i64..8) {
            // E -> E(H) with H^2 = 2
            let s = k3();
            let alpha = Charge::new(r, vec![a], c2);
            let twisted = Charge::new(r, vec![a + r], c2 + 2 * a * (r - 1) + r * (r - 1));
            prop_assert_eq!(
                vw_k3_charge(&alpha, &s).unwrap(),
                vw_k3_charge(&twisted, &s).unwrap()
            );
        }
    }
}
