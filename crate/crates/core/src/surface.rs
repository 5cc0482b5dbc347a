//! Polarised surfaces as numerical data, and charges `alpha = (r, c1, c2)`.
//!
//! `c1` lives in a Néron-Severi lattice given by its Gram matrix. Multiples
//! of a charge are taken in Chern-character coordinates `(r, c1, ch2)` with
//! `ch2 = c1^2/2 - c2`, so `(1/m) alpha` is the class of a sheaf whose
//! `m`-fold direct sum has charge `alpha`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::rational::{display_rational, int, Rational};
use crate::{Error, Result};

const BUNDLED_PRESETS: &str = include_str!("../data/presets.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gram: Vec<Vec<i64>>,
    #[serde(rename = "h")]
    pub h_vec: Vec<i64>,
    #[serde(rename = "k")]
    pub k_vec: Vec<i64>,
    pub h01: u32,
    pub h02: u32,
    #[serde(rename = "h0K")]
    pub h0k: u32,
    #[serde(rename = "chiO")]
    pub chi_o: i64,
    #[serde(rename = "eulS")]
    pub euler: i64,
}

impl SurfaceData {
    /// Checks shapes and the numerical constraints every surface satisfies.
    pub fn validate(&self) -> Result<()> {
        let rho = self.gram.len();
        let bad = |msg: String| Err(Error::InvalidSurface(msg));
        if rho == 0 {
            return bad("empty Gram matrix".into());
        }
        if self.gram.iter().any(|row| row.len() != rho) {
            return bad("Gram matrix is not square".into());
        }
        for i in 0..rho {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return bad("Gram matrix is not symmetric".into());
                }
            }
        }
        if self.h_vec.len() != rho || self.k_vec.len() != rho {
            return bad(format!("h and k must have length {rho}"));
        }
        if self.chi_o != 1 - self.h01 as i64 + self.h02 as i64 {
            return bad(format!(
                "chiO = {} but 1 - h01 + h02 = {}",
                self.chi_o,
                1 - self.h01 as i64 + self.h02 as i64
            ));
        }
        if self.dot(&self.h_vec, &self.h_vec) <= 0 {
            return bad("polarisation must have H^2 > 0".into());
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Intersection `u . v` through the Gram matrix.
    pub fn dot(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut total = 0i64;
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                total += ui * self.gram[i][j] * vj;
            }
        }
        total
    }

    pub fn h_squared(&self) -> i64 {
        self.dot(&self.h_vec, &self.h_vec)
    }

    pub fn is_k3(&self) -> bool {
        self.k_vec.iter().all(|k| *k == 0)
            && self.h01 == 0
            && self.h02 == 1
            && self.h0k == 1
            && self.chi_o == 2
            && self.euler == 24
            && self.gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
    }

    /// Default K3: Picard rank one with `H^2 = 2`.
    pub fn k3() -> Self {
        SurfaceData::preset("k3").expect("bundled k3 preset")
    }

    /// Synthetic surface with `h^{0,1} = 0` and `p_g = h0(K) = pg`, `K = 3H`.
    pub fn general_type(pg: u32) -> Self {
        let chi_o = 1 + pg as i64;
        SurfaceData {
            name: Some(format!("general-type-pg{pg}")),
            gram: vec![vec![2]],
            h_vec: vec![1],
            k_vec: vec![3],
            h01: 0,
            h02: pg,
            h0k: pg,
            chi_o,
            // Noether: 12 chi(O) = K^2 + e
            euler: 12 * chi_o - 18,
        }
    }

    pub fn presets() -> Vec<SurfaceData> {
        serde_json::from_str(BUNDLED_PRESETS).expect("bundled presets parse")
    }

    pub fn preset(name: &str) -> Result<Self> {
        SurfaceData::presets()
            .into_iter()
            .find(|s| s.name.as_deref() == Some(name))
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let surface: SurfaceData =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        surface.validate()?;
        Ok(surface)
    }

    fn check_charge(&self, alpha: &Charge) -> Result<()> {
        if alpha.c1.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "c1 has {} components but the lattice has rank {}",
                alpha.c1.len(),
                self.rank()
            )));
        }
        Ok(())
    }
}

/// The charge `(r, c1, c2)` of a sheaf on the surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Charge {
    pub r: i64,
    pub c1: Vec<i64>,
    pub c2: i64,
}

impl Charge {
    pub fn new(r: i64, c1: Vec<i64>, c2: i64) -> Self {
        Charge { r, c1, c2 }
    }

    /// Trivial-determinant charge on a Picard-rank-one lattice.
    pub fn trivial_det(r: i64, c2: i64) -> Self {
        Charge::new(r, vec![0], c2)
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.c2 == 0 && self.c1.iter().all(|c| *c == 0)
    }

    /// `ch2 = c1^2/2 - c2`.
    pub fn ch2(&self, s: &SurfaceData) -> Rational {
        Rational::new(s.dot(&self.c1, &self.c1).into(), 2.into()) - int(self.c2)
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        for c in &self.c1 {
            write!(f, ",{c}")?;
        }
        write!(f, ",{}", self.c2)
    }
}

impl FromStr for Charge {
    type Err = Error;

    /// Parses `r,c1_1,...,c1_rho,c2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("charge '{s}' must be comma-separated integers")))?;
        if parts.len() < 3 {
            return Err(Error::Parse(format!(
                "charge '{s}' needs at least r, one c1 component and c2"
            )));
        }
        Ok(Charge {
            r: parts[0],
            c1: parts[1..parts.len() - 1].to_vec(),
            c2: parts[parts.len() - 1],
        })
    }
}

/// Polynomial in `n` of degree at most two, lowest coefficient first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub coeffs: [Rational; 3],
}

impl HilbertPolynomial {
    pub fn eval(&self, n: i64) -> Rational {
        let n = int(n);
        &self.coeffs[0] + &n * (&self.coeffs[1] + &n * &self.coeffs[2])
    }

    fn scale(&self, c: &Rational) -> Self {
        HilbertPolynomial {
            coeffs: self.coeffs.clone().map(|a| a * c),
        }
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2] = &self.coeffs;
        write!(
            f,
            "({})n^2 + ({})n + ({})",
            display_rational(c2),
            display_rational(c1),
            display_rational(c0)
        )
    }
}

/// Riemann-Roch `chi(alpha(n))` as a polynomial in `n`:
/// `r H^2/2 n^2 + (c1.H - r H.K/2) n + c1^2/2 - c2 - c1.K/2 + r chi(O_S)`.
pub fn hilbert_polynomial(alpha: &Charge, s: &SurfaceData) -> Result<HilbertPolynomial> {
    s.check_charge(alpha)?;
    let half = |x: i64| Rational::new(x.into(), 2.into());
    let r = alpha.r;
    let h2 = s.h_squared();
    let hk = s.dot(&s.h_vec, &s.k_vec);
    let c1h = s.dot(&alpha.c1, &s.h_vec);
    let c1k = s.dot(&alpha.c1, &s.k_vec);
    let c1sq = s.dot(&alpha.c1, &alpha.c1);
    Ok(HilbertPolynomial {
        coeffs: [
            half(c1sq) - int(alpha.c2) - half(c1k) + int(r * s.chi_o),
            int(c1h) - half(r * hk),
            half(r * h2),
        ],
    })
}

/// `chi(alpha(n))`.
pub fn chi_twisted(alpha: &Charge, s: &SurfaceData, n: i64) -> Result<Rational> {
    Ok(hilbert_polynomial(alpha, s)?.eval(n))
}

/// `p_alpha(n) = chi(alpha(n)) / r`.
pub fn reduced_hilbert(alpha: &Charge, s: &SurfaceData) -> Result<HilbertPolynomial> {
    if alpha.r < 1 {
        return Err(Error::InvalidArgument(format!(
            "reduced Hilbert polynomial needs rank >= 1, got {}",
            alpha.r
        )));
    }
    Ok(hilbert_polynomial(alpha, s)?.scale(&Rational::new(1.into(), alpha.r.into())))
}

/// Whether `alpha` and `beta` have the same reduced Hilbert polynomial.
///
/// Under a generic polarisation this happens exactly when the charges are
/// proportional.
pub fn is_proportional(alpha: &Charge, beta: &Charge, s: &SurfaceData) -> Result<bool> {
    Ok(reduced_hilbert(alpha, s)? == reduced_hilbert(beta, s)?)
}

/// `(num/den) alpha`, scaled in Chern-character coordinates.
pub fn scale_charge(alpha: &Charge, num: i64, den: i64, s: &SurfaceData) -> Result<Charge> {
    s.check_charge(alpha)?;
    if num <= 0 || den <= 0 {
        return Err(Error::InvalidArgument(format!(
            "scale factor {num}/{den} must be positive"
        )));
    }
    let t = Rational::new(num.into(), den.into());
    let non_integral = || Error::NonIntegralCharge(format!("({num}/{den}) * ({alpha})"));
    let scale_int = |x: i64| -> Result<i64> {
        let v = &t * int(x);
        v.is_integer()
            .then(|| v.to_integer().to_i64())
            .flatten()
            .ok_or_else(non_integral)
    };
    let r = scale_int(alpha.r)?;
    let c1 = alpha
        .c1
        .iter()
        .map(|c| scale_int(*c))
        .collect::<Result<Vec<_>>>()?;
    let ch2 = &t * alpha.ch2(s);
    let c2 = Rational::new(s.dot(&c1, &c1).into(), 2.into()) - ch2;
    if !c2.is_integer() {
        return Err(non_integral());
    }
    Ok(Charge {
        r,
        c1,
        c2: c2.to_integer().to_i64().ok_or_else(non_integral)?,
    })
}

/// Largest `m` with `alpha / m` integral.
pub fn divisibility(alpha: &Charge, s: &SurfaceData) -> Result<u32> {
    s.check_charge(alpha)?;
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("the zero charge has no divisibility".into()));
    }
    let g = alpha.c1.iter().fold(alpha.r, |g, c| g.gcd(c));
    let bound = if g == 0 { alpha.c2.abs() } else { g.abs() };
    let m = (1..=bound)
        .rev()
        .filter(|m| bound % m == 0)
        .find(|m| scale_charge(alpha, 1, *m, s).is_ok())
        .unwrap_or(1);
    Ok(m as u32)
}

/// Mukai pairing on a K3, `chi_S(alpha, beta) = -<v(alpha), v(beta)>` with
/// `v = (r, c1, ch2 + r)` and `<v, w> = v1.w1 - v0 w2 - v2 w0`.
pub fn mukai_chi_s(alpha: &Charge, beta: &Charge, s: &SurfaceData) -> Result<Rational> {
    if !s.is_k3() {
        return Err(Error::NotK3(s.name.clone().unwrap_or_else(|| "custom".into())));
    }
    s.check_charge(alpha)?;
    s.check_charge(beta)?;
    let v2 = alpha.ch2(s) + int(alpha.r);
    let w2 = beta.ch2(s) + int(beta.r);
    let pairing = int(s.dot(&alpha.c1, &beta.c1)) - int(alpha.r) * w2 - v2 * int(beta.r);
    Ok(-pairing)
}

/// `1 - chi_S(alpha, alpha)/2`, the Hilbert scheme dimension index on a K3.
pub fn hilbert_scheme_index(alpha: &Charge, s: &SurfaceData) -> Result<i64> {
    let chi = mukai_chi_s(alpha, alpha, s)?;
    let idx = Rational::one() - chi / int(2);
    crate::rational::to_i64(&idx).ok_or_else(|| Error::NonIntegralCharge(alpha.to_string()))
}

/// `vd = 2 r c2 - (r - 1) c1^2 - (r^2 - 1) chi(O_S)`.
pub fn virtual_dimension(alpha: &Charge, s: &SurfaceData) -> Result<i64> {
    s.check_charge(alpha)?;
    let r = alpha.r;
    Ok(2 * r * alpha.c2 - (r - 1) * s.dot(&alpha.c1, &alpha.c1) - (r * r - 1) * s.chi_o)
}

/// `(-1)^vd e`: the contribution of a smooth instanton moduli space of
/// virtual dimension `vd` and Euler characteristic `e` to the weighted count.
pub fn signed_euler_contribution(vd: i64, euler: &num_bigint::BigInt) -> num_bigint::BigInt {
    if vd.is_odd() {
        -euler
    } else {
        euler.clone()
    }
}

/// Chern classes of the spectral sheaf on the total space of `K_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralChern {
    /// `c1 = r [S]`.
    pub c1_mult: i64,
    /// `(a, b)` with `c2 = -i_*(a c1 + b c1(S))`.
    pub c2: (Rational, Rational),
    /// `c3 = i_*(value)`.
    pub c3: Rational,
}

pub fn spectral_chern(alpha: &Charge, s: &SurfaceData) -> Result<SpectralChern> {
    s.check_charge(alpha)?;
    let r = alpha.r;
    // c1(S) = -K_S
    let c1_dot_cs = -s.dot(&alpha.c1, &s.k_vec);
    let cs_sq = s.dot(&s.k_vec, &s.k_vec);
    let c3 = int(s.dot(&alpha.c1, &alpha.c1)) - int(2 * alpha.c2)
        + int((r + 1) * c1_dot_cs)
        + Rational::new((r * (r + 1) * (r + 2)).into(), 6.into()) * int(cs_sq);
    Ok(SpectralChern {
        c1_mult: r,
        c2: (
            Rational::one(),
            Rational::new((r * (r + 1)).into(), 2.into()),
        ),
        c3,
    })
}

/// True if `chi` is an even integer.
pub fn is_even_integer(chi: &Rational) -> bool {
    chi.is_integer() && chi.numer().is_even()
}
