//! Exact polynomial arithmetic over the rationals, and the resultant
//! construction that turns a polynomial into the polynomial of its pairwise
//! root differences.
//!
//! For monic `P` of degree `d` with roots `α_1..α_d`,
//! `Res_x(P(x), P(x+z)) = ∏_{i,j} (z - (α_j - α_i))`, so the resultant has a
//! `z`-adic valuation of exactly `d` (the diagonal) precisely when `P` is
//! separable, and dividing it out leaves the `d(d-1)` ordered differences.
//! The resultant is computed over the integers (denominators cleared — a
//! constant scale moves no roots) by evaluating the Sylvester determinant at
//! `d² + 1` points with fraction-free elimination and interpolating.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::newton::{root_valuations, ValMultiset};
use crate::valuation::{padic_val, Rat, ValExt};

/// Size guards for the exact engines.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    /// Largest polynomial degree `iterate_poly` may produce.
    pub degree: usize,
    /// Largest `(deg P)²` the difference-resultant may attempt.
    pub resultant: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { degree: 256, resultant: 256 }
    }
}

/// Dense univariate polynomial over the rationals, index = degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    /// Trims trailing zeros; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Rat>) -> Result<Self> {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RatPoly { coeffs })
    }

    pub fn constant(c: Rat) -> Result<Self> {
        RatPoly::new(vec![c])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        RatPoly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Rat {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly { coeffs: vec![Rat::one()] };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add_constant(&self, c: &Rat) -> Result<RatPoly> {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        RatPoly::new(coeffs)
    }

    pub fn sub_constant(&self, c: &Rat) -> Result<RatPoly> {
        self.add_constant(&(-c.clone()))
    }

    /// Monic polynomial whose roots are the reciprocals of this one's:
    /// coefficients reversed, rescaled. Needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<RatPoly> {
        if self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "reciprocal roots need a nonzero constant term".into(),
            ));
        }
        let lead = self.coeffs[0].clone();
        let coeffs = self.coeffs.iter().rev().map(|c| c / &lead).collect();
        RatPoly::new(coeffs)
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::valuation::serde_rat_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = crate::valuation::serde_rat_vec::deserialize(d)?;
        RatPoly::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Exact coefficients of `f^n(z) - a` for `f(z) = z^l - c`.
pub fn iterate_poly(ell: u32, c: &Rat, n: u32, a: &Rat, caps: &OracleCaps) -> Result<RatPoly> {
    let needed = (ell as usize)
        .checked_pow(n)
        .ok_or(Error::DegreeCapExceeded { needed: usize::MAX, cap: caps.degree })?;
    if needed > caps.degree {
        return Err(Error::DegreeCapExceeded { needed, cap: caps.degree });
    }
    let mut poly = RatPoly::x();
    for _ in 0..n {
        poly = poly.pow(ell).sub_constant(c)?;
    }
    poly.sub_constant(a)
}

/// Multiset of `v_p` over the roots (zero roots reported at `∞`).
pub fn root_val_multiset(poly: &RatPoly, p: u64) -> Result<ValMultiset> {
    let points: Vec<(u32, ValExt)> = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| Ok((i as u32, padic_val(c, p)?)))
        .collect::<Result<_>>()?;
    Ok(root_valuations(&points)?.multiset())
}

fn taylor_shift(coeffs: &[BigInt], t: &BigInt) -> Vec<BigInt> {
    let mut q = coeffs.to_vec();
    let d = q.len() - 1;
    for i in 0..d {
        for j in (i..d).rev() {
            let add = t * &q[j + 1];
            q[j] += add;
        }
    }
    q
}

/// Fraction-free determinant (Bareiss) of a square integer matrix.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Sylvester's identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// `Res_x(F(x), G(x))` for integer polynomials of equal degree `d`, via the
/// `2d × 2d` Sylvester determinant.
fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let d = f.len() - 1;
    debug_assert_eq!(g.len(), f.len());
    let n = 2 * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().take(d).enumerate() {
        for j in 0..=d {
            row[i + j] = f[d - j].clone();
        }
    }
    for (i, row) in m.iter_mut().skip(d).enumerate() {
        for j in 0..=d {
            row[i + j] = g[d - j].clone();
        }
    }
    bareiss_det(m)
}

/// Newton-form interpolation through `(t_i, v_i)`; returns dense coefficients.
fn interpolate(points: &[(BigInt, BigInt)]) -> Vec<Rat> {
    let m = points.len();
    let ts: Vec<Rat> = points.iter().map(|(t, _)| Rat::from_integer(t.clone())).collect();
    let mut dd: Vec<Rat> = points.iter().map(|(_, v)| Rat::from_integer(v.clone())).collect();
    for j in 1..m {
        for i in (j..m).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &ts[i] - &ts[i - j];
            dd[i] = num / den;
        }
    }
    let mut result = vec![Rat::zero()];
    let mut basis = vec![Rat::one()];
    for (i, coeff) in dd.iter().enumerate() {
        if result.len() < basis.len() {
            result.resize(basis.len(), Rat::zero());
        }
        for (slot, b) in result.iter_mut().zip(&basis) {
            *slot += coeff * b;
        }
        // basis *= (z - t_i)
        let mut next = vec![Rat::zero(); basis.len() + 1];
        for (k, b) in basis.iter().enumerate() {
            next[k + 1] += b;
            next[k] -= b * &ts[i];
        }
        basis = next;
    }
    result
}

/// The difference polynomial of a monic `P` (degree `d ≥ 2`), together with
/// the number of ordered root pairs `i ≠ j` with `α_i = α_j`.
///
/// Returns `(D, repeats)` where the roots of `D` are exactly the *nonzero*
/// ordered differences `α_i - α_j`; `repeats = 0` iff `P` is separable, in
/// which case `deg D = d(d-1)`.
pub fn pairwise_difference_poly(poly: &RatPoly, caps: &OracleCaps) -> Result<(RatPoly, u64)> {
    if !poly.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = poly.degree();
    let needed = d * d;
    if needed > caps.resultant {
        return Err(Error::ResultantCapExceeded { needed, cap: caps.resultant });
    }
    if d < 2 {
        // No pairs at all; the difference polynomial is the unit.
        return Ok((RatPoly::constant(Rat::one())?, 0));
    }

    // Clear denominators: scaling by a constant leaves every root in place.
    let denom_lcm = poly
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let int_coeffs: Vec<BigInt> = poly
        .coeffs
        .iter()
        .map(|c| {
            let scaled = c * Rat::from_integer(denom_lcm.clone());
            debug_assert!(scaled.denom().is_one());
            scaled.numer().clone()
        })
        .collect();

    // Degree of the resultant in z is at most d²; sample d²+1 points.
    let samples = d * d + 1;
    let mut points = Vec::with_capacity(samples);
    for t in 0..samples {
        let t = BigInt::from(t);
        let shifted = taylor_shift(&int_coeffs, &t);
        let det = sylvester_resultant(&int_coeffs, &shifted);
        points.push((t, det));
    }
    debug_assert!(points[0].1.is_zero(), "Res(P, P) must vanish");

    let res_coeffs = interpolate(&points);
    let multiplicity = res_coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    if multiplicity < d {
        return Err(Error::Precondition(format!(
            "difference resultant z-multiplicity {multiplicity} below degree {d}"
        )));
    }
    let diff = RatPoly::new(res_coeffs[multiplicity..].to_vec())?;
    Ok((diff, (multiplicity - d) as u64))
}

/// Multiset of `v_p(α_i - α_j)` over all ordered pairs `i ≠ j` of roots of a
/// monic separable `P`: exactly `d(d-1)` finite entries.
pub fn difference_val_multiset(poly: &RatPoly, p: u64, caps: &OracleCaps) -> Result<ValMultiset> {
    let (diff, repeats) = pairwise_difference_poly(poly, caps)?;
    if repeats > 0 {
        return Err(Error::NotSeparable {
            found: poly.degree() + repeats as usize,
            degree: poly.degree(),
        });
    }
    if diff.degree() == 0 {
        return Ok(ValMultiset::new());
    }
    root_val_multiset(&diff, p)
}

/// Like `difference_val_multiset` but tolerating repeated roots: each ordered
/// pair of equal roots contributes one `∞` entry, so the multiset still has
/// `d(d-1)` entries in total.
pub fn difference_val_multiset_allowing_repeats(
    poly: &RatPoly,
    p: u64,
    caps: &OracleCaps,
) -> Result<ValMultiset> {
    let (diff, repeats) = pairwise_difference_poly(poly, caps)?;
    let mut ms = if diff.degree() == 0 {
        ValMultiset::new()
    } else {
        root_val_multiset(&diff, p)?
    };
    ms.add(ValExt::Infinity, repeats);
    Ok(ms)
}
