use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, parse_rat, Rat};
use crate::{Error, Result};

/// Degree of a polynomial. The zero polynomial has degree [`Degree::Neg`],
/// which compares below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Neg,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Neg => None,
            Degree::Finite(n) => Some(n),
        }
    }

    /// Signed view, `None` for `Neg`.
    pub fn as_i64(self) -> Option<i64> {
        self.finite().map(|n| n as i64)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Neg => f.write_str("-inf"),
            Degree::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Dense univariate polynomial in `k` with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `k^i`. Trailing zeros are never stored,
/// so the zero polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The polynomial `k`.
    pub fn var() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rat, n: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_big_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Rat::from_integer).collect())
    }

    /// `(k + c)^n`.
    pub fn linear_power(c: &Rat, n: u32) -> Self {
        Self::new(vec![c.clone(), Rat::one()]).pow(n)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `k^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::Neg,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn lc(&self) -> Result<&Rat> {
        self.coeffs.last().ok_or(Error::ZeroLeadingCoefficient)
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * at + c)
    }

    /// `q(k) = p(k + c)`.
    pub fn shift(&self, c: &Rat) -> Poly {
        self.compose_linear(&Rat::one(), c)
    }

    /// `q(k) = p(s*k + c)`, by Horner's scheme in the linear polynomial.
    pub fn compose_linear(&self, s: &Rat, c: &Rat) -> Poly {
        let lin = Poly::new(vec![c.clone(), s.clone()]);
        let mut acc = Poly::zero();
        for coeff in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(coeff.clone());
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Coefficients as integers, if all of them are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.denom().is_one().then(|| c.numer().clone()))
            .collect()
    }

    /// Keeps the coefficients of `k^i` for `i < n`.
    pub fn truncate_below(&self, n: usize) -> Poly {
        Poly::new(self.coeffs.iter().take(n).cloned().collect())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rat))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::rat;
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn trailing_zeros_dropped() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), Degree::Neg);
    }

    #[test]
    fn degree_sentinel_orders_below_naturals() {
        assert!(Degree::Neg < Degree::Finite(0));
        assert!(Degree::Finite(0) < Degree::Finite(1));
    }

    #[test]
    fn lc_of_zero_is_error() {
        assert_eq!(Poly::zero().lc(), Err(Error::ZeroLeadingCoefficient));
        assert_eq!(p(&[1, 0, -3]).lc().unwrap(), &rat(-3, 1));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p(&[0, 0, 1]).shift(&rat(1, 1)), p(&[1, 2, 1]));
        assert_eq!(Poly::zero().shift(&rat(7, 3)), Poly::zero());
        assert_eq!(p(&[0, 3, 0, 1]).shift(&rat(-1, 1)), p(&[-4, 6, -3, 1]));
    }

    #[test]
    fn compose_linear_examples() {
        let (four, one) = (rat(4, 1), rat(1, 1));
        assert_eq!(p(&[0, 1]).compose_linear(&four, &one), p(&[1, 4]));
        assert_eq!(
            p(&[0, 0, 1]).compose_linear(&rat(2, 1), &rat(0, 1)),
            p(&[0, 0, 4])
        );
        assert_eq!(
            p(&[0, 3, 0, 1]).compose_linear(&four, &one),
            p(&[4, 24, 48, 64])
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-4, 6, -3, 1]).to_string(), "k^3 - 3*k^2 + 6*k - 4");
        assert_eq!(
            Poly::new(vec![rat(1, 2), rat(-1, 1)]).to_string(),
            "-k + 1/2"
        );
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn json_format() {
        let q = Poly::new(vec![rat(1, 1), rat(0, 1), rat(-3, 5)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["1/1","0/1","-3/5"]"#);
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Poly>(r#"["0.5"]"#).is_err());
    }

    #[test]
    fn linear_power_matches_product() {
        let c = rat(1, 2);
        let lin = Poly::new(vec![c.clone(), rat(1, 1)]);
        assert_eq!(Poly::linear_power(&c, 3), &(&lin * &lin) * &lin);
    }
}
