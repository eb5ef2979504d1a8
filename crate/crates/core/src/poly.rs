//! Integer Laurent polynomials in one variable `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponent -> coefficient, never storing a zero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `q + q^-1`, the value of a single circle.
    pub fn q_plus_q_inv() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn monomial(coefficient: impl Into<BigInt>, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coefficient.into());
        p
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exponent: i64, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_default();
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Multiplies every exponent by `factor`.
    pub fn scale_exponents(&self, factor: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * factor, c.clone())))
    }

    /// Exact division; `None` when `divisor` leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (d_hi, d_lo) = (divisor.max_exponent()?, divisor.min_exponent()?);
        let d_lead = &divisor.terms[&d_hi];
        let Some(floor) = self.min_exponent() else {
            return Some(Self::zero());
        };
        let floor = floor - d_lo;

        let mut rest = self.clone();
        let mut quotient = Self::zero();
        while let Some(hi) = rest.max_exponent() {
            let shift = hi - d_hi;
            if shift < floor {
                return None;
            }
            let (c, r) = rest.terms[&hi].div_rem(d_lead);
            if !r.is_zero() {
                return None;
            }
            let step = Self::monomial(c, shift);
            rest = &rest - &(&step * divisor);
            quotient = &quotient + &step;
        }
        Some(quotient)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $f(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl std::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match e {
                1 => f.write_str("q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as `{"<exponent>": <coefficient>}`; coefficients outside `i64`
/// are written as decimal strings.
impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.terms().map(|(e, c)| (e.to_string(), Coefficient::from(c))))
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw: BTreeMap<String, Coefficient> = BTreeMap::deserialize(d)?;
        let mut p = LaurentPolynomial::zero();
        for (e, c) in raw {
            let e: i64 = e.parse().map_err(D::Error::custom)?;
            p.add_term(e, c.into_bigint().map_err(D::Error::custom)?);
        }
        Ok(p)
    }
}

/// JSON-friendly integer: a number when it fits, a string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Coefficient {
    fn from(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => Coefficient::Small(v),
            None => Coefficient::Big(c.to_string()),
        }
    }
}

impl Coefficient {
    pub fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            Coefficient::Small(v) => Ok(v.into()),
            Coefficient::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = LaurentPolynomial;

    #[test]
    fn arithmetic() {
        let a = P::q_plus_q_inv();
        let sq = &a * &a;
        assert_eq!(sq, P::from_terms([(2, 1), (0, 2), (-2, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(0), P::one());
        assert_eq!(P::from_terms([(3, 2), (3, -2)]), P::zero());
    }

    #[test]
    fn exact_division() {
        let v = P::from_terms([(2, 1), (6, 1), (8, -1)]);
        let chi = &v * &P::q_plus_q_inv();
        assert_eq!(chi, P::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]));
        assert_eq!(chi.div_exact(&P::q_plus_q_inv()), Some(v));
        assert_eq!(P::q().div_exact(&P::q_plus_q_inv()), None);
        assert_eq!(P::monomial(3, 0).div_exact(&P::monomial(2, 0)), None);
        assert_eq!(P::zero().div_exact(&P::q()), Some(P::zero()));
    }

    #[test]
    fn display() {
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(P::one().to_string(), "1");
        let p = P::from_terms([(-9, -1), (-5, 1), (0, 2), (1, -3)]);
        assert_eq!(p.to_string(), "-q^-9 + q^-5 + 2 - 3q");
    }

    #[test]
    fn json_round_trip() {
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut p = P::from_terms([(-2, 1), (4, -7)]);
        p.add_term(1, huge);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"-2\":1"));
        assert!(text.contains("\"123456789012345678901234567890\""));
        assert_eq!(serde_json::from_str::<P>(&text).unwrap(), p);
    }
}
