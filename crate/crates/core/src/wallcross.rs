//! Universal wall-crossing formulae between pair invariants `P(n)` and
//! Vafa-Witten invariants, under a generic polarisation.
//!
//! For a charge `alpha` of divisibility `m`, only the multiples
//! `alpha_j = (j/m) alpha`, `j = 1..m`, can destabilise. Writing
//! `chi_j = chi(alpha_j(n))`, the full formula reads
//!
//! ```text
//! P_alpha(n) = sum over compositions (d_1, .., d_l) of m of
//!              (-1)^l / l! * prod_i s(chi_{d_i}) chi_{d_i} VW_{d_i}
//! ```
//!
//! with `s(chi) = (-1)^chi`, or `(-1)^(chi + h0(K_S))` for fixed determinant.
//! The first-term variants keep only `l = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::qseries::QSeries;
use crate::rational::{format_rational, int, parse_rational, sign_power, Rational};
use crate::surface::{chi_twisted, divisibility, scale_charge, Charge, SurfaceData};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WallFormula {
    /// Joyce-Song pairs, `U(r)` invariants.
    FullSumJs,
    /// Fixed-determinant pairs with `h^{0,1} = 0`.
    FullSumFixedDet,
    /// Virtual pairs with `h^{0,1} = h^{0,2} = 0`.
    FullSumVirtual,
    /// Fixed-determinant pairs with `h^{0,1} > 0`.
    FirstTermBehrend,
    /// Virtual pairs with `h^{0,1}` or `h^{0,2}` nonzero.
    FirstTermVirtual,
}

impl WallFormula {
    pub fn is_full_sum(self) -> bool {
        matches!(
            self,
            WallFormula::FullSumJs | WallFormula::FullSumFixedDet | WallFormula::FullSumVirtual
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WallVariant {
    pub kind: WallFormula,
    #[serde(rename = "h0K")]
    pub h0k: u32,
}

impl WallVariant {
    pub fn new(kind: WallFormula, h0k: u32) -> Self {
        WallVariant { kind, h0k }
    }

    /// `s(chi)` applied to one factor.
    fn factor_sign(&self, chi: &Rational) -> Result<Rational> {
        match self.kind {
            WallFormula::FullSumFixedDet => sign_power(&(chi + int(self.h0k as i64))),
            _ => sign_power(chi),
        }
    }

    /// Extra sign on the whole `l = 1` term.
    fn global_sign(&self) -> Rational {
        match self.kind {
            WallFormula::FirstTermBehrend if self.h0k % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theory {
    /// Weighted Euler characteristics.
    Behrend,
    /// Virtual localisation.
    Virtual,
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "behrend" => Ok(Theory::Behrend),
            "virtual" => Ok(Theory::Virtual),
            other => Err(Error::Parse(format!(
                "theory must be 'behrend' or 'virtual', got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Behrend => "behrend",
            Theory::Virtual => "virtual",
        })
    }
}

/// Which universal formula governs pair invariants on `s`.
pub fn variant_select(s: &SurfaceData, theory: Theory) -> WallVariant {
    let kind = match theory {
        Theory::Virtual if s.h01 == 0 && s.h02 == 0 => WallFormula::FullSumVirtual,
        Theory::Virtual => WallFormula::FirstTermVirtual,
        Theory::Behrend if s.h01 == 0 => WallFormula::FullSumFixedDet,
        Theory::Behrend => WallFormula::FirstTermBehrend,
    };
    WallVariant::new(kind, s.h0k)
}

/// Invariants of the multiples `(j/m) alpha`, keyed by `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantTable(BTreeMap<u32, Rational>);

impl InvariantTable {
    pub fn new() -> Self {
        InvariantTable::default()
    }

    pub fn insert(&mut self, j: u32, value: Rational) {
        self.0.insert(j, value);
    }

    pub fn get(&self, j: u32) -> Option<&Rational> {
        self.0.get(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.0.iter().map(|(j, v)| (*j, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(u32, Rational)> for InvariantTable {
    fn from_iter<I: IntoIterator<Item = (u32, Rational)>>(iter: I) -> Self {
        InvariantTable(iter.into_iter().collect())
    }
}

impl FromStr for InvariantTable {
    type Err = Error;

    /// Parses `1=v1,2=v2,...`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|entry| {
                let (j, v) = entry
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("table entry '{entry}' is not j=value")))?;
                let j: u32 = j
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad divisor index '{j}'")))?;
                if j == 0 {
                    return Err(Error::Parse("divisor index must be positive".into()));
                }
                Ok((j, parse_rational(v)?))
            })
            .collect()
    }
}

impl Serialize for InvariantTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (j, v) in &self.0 {
            map.serialize_entry(&j.to_string(), &format_rational(v))?;
        }
        map.end()
    }
}

/// All ordered compositions of `m`, lexicographic.
pub fn compositions(m: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            go(rest - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        go(m, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionTerm {
    pub parts: Vec<u32>,
    #[serde(with = "crate::rational::serde_string")]
    pub value: Rational,
}

/// A forward evaluation with its per-composition breakdown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairsEvaluation {
    pub charge: String,
    pub n: i64,
    pub divisibility: u32,
    pub variant: WallVariant,
    /// `chi((j/m) alpha(n))` keyed by `j`.
    pub chi: InvariantTable,
    pub terms: Vec<CompositionTerm>,
    #[serde(with = "crate::rational::serde_string")]
    pub total: Rational,
}

/// `m` and `chi((j/m) alpha(n))` for `j = 1..m`.
pub fn multiple_chis(alpha: &Charge, s: &SurfaceData, n: i64) -> Result<(u32, Vec<Rational>)> {
    let m = divisibility(alpha, s)?;
    let chis = (1..=m)
        .map(|j| chi_twisted(&scale_charge(alpha, j as i64, m as i64, s)?, s, n))
        .collect::<Result<Vec<_>>>()?;
    Ok((m, chis))
}

fn factorial(l: usize) -> Rational {
    (1..=l as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Terms of the formula for the multiple `(j/m) alpha`, restricted to
/// compositions accepted by `keep`.
fn composition_terms(
    j: u32,
    chis: &[Rational],
    table: &InvariantTable,
    variant: &WallVariant,
    keep: impl Fn(&[u32]) -> bool,
) -> Result<Vec<CompositionTerm>> {
    let mut terms = Vec::new();
    for parts in compositions(j) {
        if !keep(&parts) || (!variant.kind.is_full_sum() && parts.len() > 1) {
            continue;
        }
        let l = parts.len();
        let mut value = if l % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        } / factorial(l);
        for d in &parts {
            let chi = &chis[*d as usize - 1];
            let vw = table.get(*d).ok_or(Error::MissingInvariant(*d))?;
            value *= variant.factor_sign(chi)? * chi * vw;
        }
        if l == 1 {
            value *= variant.global_sign();
        }
        terms.push(CompositionTerm { parts, value });
    }
    Ok(terms)
}

/// Forward evaluation with the breakdown by composition.
pub fn pairs_breakdown(
    alpha: &Charge,
    s: &SurfaceData,
    n: i64,
    table: &InvariantTable,
    variant: WallVariant,
) -> Result<PairsEvaluation> {
    let (m, chis) = multiple_chis(alpha, s, n)?;
    let terms = composition_terms(m, &chis, table, &variant, |_| true)?;
    let total = terms.iter().map(|t| &t.value).sum();
    Ok(PairsEvaluation {
        charge: alpha.to_string(),
        n,
        divisibility: m,
        variant,
        chi: chis
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as u32 + 1, c))
            .collect(),
        terms,
        total,
    })
}

/// `P_alpha(n)` from the invariants of the multiples of `alpha`.
pub fn pairs_from_vw(
    alpha: &Charge,
    s: &SurfaceData,
    n: i64,
    table: &InvariantTable,
    variant: WallVariant,
) -> Result<Rational> {
    Ok(pairs_breakdown(alpha, s, n, table, variant)?.total)
}

/// Inverts the formula: given `P_{(j/m) alpha}(n)` for every `j`, solves for
/// the invariants in increasing `j`. The `l = 1` term of each equation is
/// linear in the unknown and every longer composition only involves smaller
/// multiples.
pub fn vw_from_pairs(
    alpha: &Charge,
    s: &SurfaceData,
    n: i64,
    pairs: &InvariantTable,
    variant: WallVariant,
) -> Result<InvariantTable> {
    let (m, chis) = multiple_chis(alpha, s, n)?;
    if let Some(j) = (1..=m).find(|j| chis[*j as usize - 1].is_zero()) {
        return Err(Error::DegenerateN(j));
    }
    let mut table = InvariantTable::new();
    for j in 1..=m {
        let p = pairs.get(j).ok_or(Error::MissingPairValue(j))?;
        let chi = &chis[j as usize - 1];
        let rest: Rational = composition_terms(j, &chis, &table, &variant, |parts| parts.len() > 1)?
            .iter()
            .map(|t| &t.value)
            .sum();
        let lead = -variant.factor_sign(chi)? * chi * variant.global_sign();
        table.insert(j, (p - rest) / lead);
    }
    Ok(table)
}

/// Solves a first-term formula for `VW_alpha` alone; the smaller multiples
/// do not enter.
pub fn vw_from_pair_first_term(
    alpha: &Charge,
    s: &SurfaceData,
    n: i64,
    pair: &Rational,
    variant: WallVariant,
) -> Result<Rational> {
    if variant.kind.is_full_sum() {
        return Err(Error::InvalidArgument(format!(
            "{:?} involves every multiple of the charge",
            variant.kind
        )));
    }
    let m = divisibility(alpha, s)?;
    let chi = chi_twisted(alpha, s, n)?;
    if chi.is_zero() {
        return Err(Error::DegenerateN(m));
    }
    let lead = -variant.factor_sign(&chi)? * &chi * variant.global_sign();
    Ok(pair / lead)
}

/// `P_perp = -log(1 + sum_j P_j t^j)` over the multiples of a primitive
/// class: turns fixed-determinant weighted pair counts into virtual ones.
pub fn virtual_pairs_from_weighted(pairs: &InvariantTable, m: u32) -> Result<InvariantTable> {
    let mut terms = vec![(0i64, Rational::one())];
    for j in 1..=m {
        let p = pairs.get(j).ok_or(Error::MissingPairValue(j))?;
        terms.push((j as i64, p.clone()));
    }
    let log = QSeries::new(1, m as i64 + 1, terms)?.log()?;
    Ok((1..=m)
        .map(|j| {
            let c = log.coeff_int(j as i64).expect("within order");
            (j, -c)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn k3() -> SurfaceData {
        SurfaceData::k3()
    }

    fn table(entries: &[(u32, Rational)]) -> InvariantTable {
        entries.iter().cloned().collect()
    }

    const ALL: [WallFormula; 5] = [
        WallFormula::FullSumJs,
        WallFormula::FullSumFixedDet,
        WallFormula::FullSumVirtual,
        WallFormula::FirstTermBehrend,
        WallFormula::FirstTermVirtual,
    ];

    #[test]
    fn composition_lists() {
        assert_eq!(compositions(1), vec![vec![1]]);
        assert_eq!(compositions(2), vec![vec![1, 1], vec![2]]);
        assert_eq!(
            compositions(3),
            vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]
        );
        for m in 1..=10 {
            assert_eq!(compositions(m).len(), 1 << (m - 1));
        }
    }

    #[test]
    fn variant_selection() {
        assert_eq!(
            variant_select(&k3(), Theory::Virtual),
            WallVariant::new(WallFormula::FirstTermVirtual, 1)
        );
        assert_eq!(
            variant_select(&k3(), Theory::Behrend),
            WallVariant::new(WallFormula::FullSumFixedDet, 1)
        );
        let p2 = SurfaceData::preset("p2").unwrap();
        assert_eq!(
            variant_select(&p2, Theory::Virtual).kind,
            WallFormula::FullSumVirtual
        );
        let mut irregular = k3();
        irregular.h01 = 1;
        assert_eq!(
            variant_select(&irregular, Theory::Behrend).kind,
            WallFormula::FirstTermBehrend
        );
    }

    #[test]
    fn primitive_charge_single_term() {
        let s = k3();
        let alpha = Charge::trivial_det(1, 3);
        let chi = chi_twisted(&alpha, &s, 2).unwrap();
        let t = table(&[(1, ratio(7, 3))]);
        let expected = sign_power(&(&chi - int(1))).unwrap() * &chi * ratio(7, 3);
        for kind in ALL {
            let p = pairs_from_vw(&alpha, &s, 2, &t, WallVariant::new(kind, 0)).unwrap();
            assert_eq!(p, expected, "{kind:?}");
        }
        // with h0(K) = 1 the fixed-determinant and first-term Behrend
        // variants pick up (-1)^{h0(K)}
        for kind in [WallFormula::FullSumFixedDet, WallFormula::FirstTermBehrend] {
            let p = pairs_from_vw(&alpha, &s, 2, &t, WallVariant::new(kind, 1)).unwrap();
            assert_eq!(p, -expected.clone(), "{kind:?}");
        }
    }

    #[test]
    fn divisibility_two_on_k3() {
        let s = k3();
        let alpha = Charge::trivial_det(2, 2);
        let t = table(&[(1, int(24)), (2, int(30))]);
        let v = variant_select(&s, Theory::Behrend);
        let eval = pairs_breakdown(&alpha, &s, 1, &t, v).unwrap();
        assert_eq!(eval.total, int(1272));
        assert_eq!(eval.chi.get(1), Some(&int(2)));
        assert_eq!(eval.chi.get(2), Some(&int(4)));
        assert_eq!(
            eval.terms,
            vec![
                CompositionTerm { parts: vec![1, 1], value: int(1152) },
                CompositionTerm { parts: vec![2], value: int(120) },
            ]
        );
        let back = vw_from_pairs(&alpha, &s, 1, &table(&[(1, int(48)), (2, int(1272))]), v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn structure_sheaf_pairs_formula() {
        let s = k3();
        let alpha = Charge::trivial_det(2, 0);
        let half = Charge::trivial_det(1, 0);
        let t = table(&[(1, int(1)), (2, ratio(1, 4))]);
        let v = variant_select(&s, Theory::Behrend);
        for n in -3..8 {
            let chi = chi_twisted(&alpha, &s, n).unwrap();
            let chi_half = chi_twisted(&half, &s, n).unwrap();
            let expected = ratio(1, 4) * chi + ratio(1, 2) * &chi_half * &chi_half;
            assert_eq!(pairs_from_vw(&alpha, &s, n, &t, v).unwrap(), expected);
        }
    }

    #[test]
    fn general_type_first_term() {
        for h in 2..=4u32 {
            let s = SurfaceData::general_type(h);
            let v = variant_select(&s, Theory::Virtual);
            assert_eq!(v.kind, WallFormula::FirstTermVirtual);
            let alpha = Charge::trivial_det(2, 0);
            let m = divisibility(&alpha, &s).unwrap();
            assert_eq!(m, 2);
            // only the full multiple matters for a first-term variant, but
            // the solve needs a value for every multiple
            let n = 3;
            let chi_o = chi_twisted(&Charge::trivial_det(1, 0), &s, n).unwrap();
            let p = -Rational::new(1.into(), (1i64 << h).into()) * int(h as i64) * &chi_o;
            let expected = Rational::new((h as i64).into(), (1i64 << (h + 1)).into());
            let solved = vw_from_pairs(&alpha, &s, n, &table(&[(1, int(5)), (2, p.clone())]), v).unwrap();
            assert_eq!(solved.get(2), Some(&expected));
            assert_eq!(vw_from_pair_first_term(&alpha, &s, n, &p, v).unwrap(), expected);
        }
    }

    #[test]
    fn errors() {
        let s = k3();
        let alpha = Charge::trivial_det(2, 2);
        let v = variant_select(&s, Theory::Behrend);
        assert_eq!(
            pairs_from_vw(&alpha, &s, 1, &table(&[(2, int(30))]), v),
            Err(Error::MissingInvariant(1))
        );
        assert_eq!(
            vw_from_pairs(&alpha, &s, 1, &table(&[(1, int(48))]), v),
            Err(Error::MissingPairValue(2))
        );
        // chi((1,0,c)(n)) = n^2 + 2 - c vanishes for (1,0,6) at n = 2
        let alpha = Charge::trivial_det(2, 12);
        assert_eq!(
            vw_from_pairs(&alpha, &s, 2, &table(&[(1, int(1)), (2, int(1))]), v),
            Err(Error::DegenerateN(1))
        );
    }

    #[test]
    fn table_parsing() {
        let t: InvariantTable = "1=24, 2=1/4".parse().unwrap();
        assert_eq!(t, table(&[(1, int(24)), (2, ratio(1, 4))]));
        assert!("1:24".parse::<InvariantTable>().is_err());
        assert!("0=1".parse::<InvariantTable>().is_err());
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"1":"24/1","2":"1/4"}"#
        );
    }

    #[test]
    fn log_turns_fixed_det_into_first_term() {
        let s = k3();
        let base = Charge::new(1, vec![1], 0);
        let m = 4u32;
        let alpha = scale_charge(&base, m as i64, 1, &s).unwrap();
        let t = table(&[(1, int(3)), (2, ratio(-2, 5)), (3, int(7)), (4, ratio(1, 9))]);
        let n = 1;
        let weighted: InvariantTable = (1..=m)
            .map(|j| {
                let a = scale_charge(&alpha, j as i64, m as i64, &s).unwrap();
                let sub: InvariantTable = (1..=j).map(|d| (d, t.get(d).unwrap().clone())).collect();
                let p = pairs_from_vw(&a, &s, n, &sub, WallVariant::new(WallFormula::FullSumFixedDet, 1))
                    .unwrap();
                (j, p)
            })
            .collect();
        let virt = virtual_pairs_from_weighted(&weighted, m).unwrap();
        for j in 1..=m {
            let a = scale_charge(&alpha, j as i64, m as i64, &s).unwrap();
            let sub: InvariantTable = (1..=j).map(|d| (d, t.get(d).unwrap().clone())).collect();
            let expected = pairs_from_vw(&a, &s, n, &sub, WallVariant::new(WallFormula::FirstTermVirtual, 1))
                .unwrap();
            assert_eq!(virt.get(j), Some(&expected), "j = {j}");
        }
    }

    proptest! {
        #[test]
        fn round_trip(
            m in 1u32..=5,
            r0 in 1i64..=3,
            c1 in -2i64..=2,
            c2 in -3i64..=6,
            n in 1i64..=4,
            kind in 0usize..5,
            h0k in 0u32..=3,
            vals in prop::collection::vec((-20i64..=20, 1i64..=7), 5),
        ) {
            let s = k3();
            let base = Charge::new(r0, vec![c1], c2);
            prop_assume!(divisibility(&base, &s).unwrap() == 1);
            let alpha = scale_charge(&base, m as i64, 1, &s).unwrap();
            let (_, chis) = multiple_chis(&alpha, &s, n).unwrap();
            prop_assume!(chis.iter().all(|c| !c.is_zero()));
            let v = WallVariant::new(ALL[kind], h0k);
            let t: InvariantTable = (1..=m).map(|j| (j, ratio(vals[j as usize - 1].0, vals[j as usize - 1].1))).collect();
            let pairs: InvariantTable = (1..=m).map(|j| {
                let a = scale_charge(&alpha, j as i64, m as i64, &s).unwrap();
                (j, pairs_from_vw(&a, &s, n, &t, v).unwrap())
            }).collect();
            prop_assert_eq!(vw_from_pairs(&alpha, &s, n, &pairs, v).unwrap(), t);
        }

        #[test]
        fn leading_term_is_linear(lambda in -5i64..=5, n in 1i64..=4) {
            let s = k3();
            let alpha = Charge::trivial_det(3, 3);
            let v = WallVariant::new(WallFormula::FullSumFixedDet, 1);
            let t = table(&[(1, int(2)), (2, int(-1)), (3, int(4))]);
            let mut scaled = t.clone();
            scaled.insert(3, int(4 * lambda));
            let a = pairs_breakdown(&alpha, &s, n, &t, v).unwrap();
            let b = pairs_breakdown(&alpha, &s, n, &scaled, v).unwrap();
            for (x, y) in a.terms.iter().zip(&b.terms) {
                if x.parts.len() == 1 {
                    prop_assert_eq!(&y.value, &(&x.value * int(lambda)));
                } else {
                    prop_assert_eq!(&y.value, &x.value);
                }
            }
        }

        #[test]
        fn first_term_matches_full_sum_lead(n in -3i64..=5, h0k in 0u32..=3) {
            let s = k3();
            let alpha = Charge::trivial_det(2, 4);
            let t = table(&[(1, int(3)), (2, ratio(5, 2))]);
            let full = pairs_breakdown(&alpha, &s, n, &t, WallVariant::new(WallFormula::FullSumFixedDet, h0k)).unwrap();
            let lead = full.terms.iter().find(|c| c.parts.len() == 1).unwrap().value.clone();
            let be = pairs_from_vw(&alpha, &s, n, &t, WallVariant::new(WallFormula::FirstTermBehrend, h0k)).unwrap();
            prop_assert_eq!(lead, be);
            let js = pairs_breakdown(&alpha, &s, n, &t, WallVariant::new(WallFormula::FullSumJs, h0k)).unwrap();
            let js_lead = js.terms.iter().find(|c| c.parts.len() == 1).unwrap().value.clone();
            let fv = pairs_from_vw(&alpha, &s, n, &t, WallVariant::new(WallFormula::FirstTermVirtual, h0k)).unwrap();
            prop_assert_eq!(js_lead, fv);
        }
    }
}
