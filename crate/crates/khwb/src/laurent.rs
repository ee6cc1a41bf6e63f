//! Integer Laurent polynomials in one variable, plus exact evaluation at
//! the fourth root of unity used by the determinant cross-check.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

/// Laurent polynomial with integer coefficients; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// Exact division; panics if the divisor does not divide self.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> LaurentPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let d_max = divisor.max_exp().unwrap();
        let d_lead = divisor.coeff(d_max);
        while !rem.is_zero() {
            let r_max = rem.max_exp().unwrap();
            let r_lead = rem.coeff(r_max);
            assert!(r_lead % d_lead == 0, "inexact Laurent division");
            let (e, c) = (r_max - d_max, r_lead / d_lead);
            quot.add_term(e, c);
            rem = &rem + &divisor.shift(e).scale(-c);
        }
        quot
    }

    /// Substitute x^2 -> s * y, requiring every exponent to be even. Returns
    /// the polynomial in y. Used for A^2 -> -q^{-1} style variable changes.
    pub fn subst_square(&self, sign: i64, y_exp_per_x2: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            assert!(e % 2 == 0, "odd exponent in square substitution");
            let k = e / 2;
            let s = if k.rem_euclid(2) == 0 { 1 } else { sign };
            out.add_term(k * y_exp_per_x2, c * s);
        }
        out
    }

    /// Evaluate at x = i (primitive fourth root of unity), exactly, as a
    /// Gaussian integer (re, im).
    pub fn eval_at_i(&self) -> (i64, i64) {
        let (mut re, mut im) = (0i64, 0i64);
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                3 => im -= c,
                _ => unreachable!(),
            }
        }
        (re, im)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "q")?,
                1 => write!(f, "{a}q")?,
                _ if a == 1 => write!(f, "q^{e}")?,
                _ => write!(f, "{a}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_roundtrip() {
        let p = LaurentPoly::from_terms([(-1, 1), (1, 1)]); // q + q^{-1}
        let q = &p * &p;
        assert_eq!(q, LaurentPoly::from_terms([(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(q.div_exact(&p), p);
    }

    #[test]
    fn eval_at_i() {
        // q + q^{-1} vanishes at q = i
        let p = LaurentPoly::from_terms([(-1, 1), (1, 1)]);
        assert_eq!(p.eval_at_i(), (0, 0));
        let p = LaurentPoly::from_terms([(0, 2), (4, 3)]);
        assert_eq!(p.eval_at_i(), (5, 0));
    }

    #[test]
    fn square_substitution() {
        // A^2 -> -q^{-1}: A^4 + A^{-2} becomes q^{-2} - q
        let p = LaurentPoly::from_terms([(4, 1), (-2, 1)]);
        let s = p.subst_square(-1, -1);
        assert_eq!(s, LaurentPoly::from_terms([(-2, 1), (1, -1)]));
    }
}
