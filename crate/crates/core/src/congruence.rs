//! Super-congruence checks modulo `p^4`.
//!
//! Two families of sums over `k = 0 ..= (p-1)/2` are checked:
//!
//! - [`Case::Case3`]: `S_m = sum (-1)^k (4k+1)^m ((1/2)_k/k!)^3`, expected
//!   `a_m (p (-1)^{(p-1)/2} + p^3 E_{p-3}) + p^3 c_m (mod p^4)` for `p >= 5`.
//! - [`Case::Case4`]: `S_m = sum (4k+1)^m ((1/2)_k/k!)^4`, expected
//!   `(a_m / μ!) p (mod p^4)` for primes `p > μ = (m-1)/2`.
//!
//! Sums are evaluated as exact rationals and only then reduced.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::hyperseries::{euler_numbers, TermValueStream};
use crate::polycore::{Poly, Rat};
use crate::symred::{half4_reduce, integral_reduce_alt, IntegralReduction, TermSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Case {
    Case3,
    Case4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub theorem: Case,
    pub m: u32,
    pub p: u64,
    #[serde(serialize_with = "ser_int")]
    pub modulus: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub lhs_residue: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub rhs_residue: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub a_m: BigInt,
    #[serde(serialize_with = "ser_opt_int")]
    pub c_m: Option<BigInt>,
    pub mu: u32,
    pub pass: bool,
}

/// Writes a [`BigInt`] as a JSON integer of any size.
pub fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = v.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

fn ser_opt_int<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_int(v, s),
        None => s.serialize_none(),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `v mod p^e` for a `p`-integral rational `v`, in `[0, p^e)`.
pub fn residue(v: &Rat, p: u64, e: u32) -> Result<BigInt> {
    let modulus = BigInt::from(p).pow(e);
    let den = v.denom().mod_floor(&modulus);
    let egcd = den.extended_gcd(&modulus);
    if !egcd.gcd.is_one() {
        return Err(Error::NotPIntegral {
            value: v.to_string(),
            p,
        });
    }
    Ok((v.numer() * egcd.x).mod_floor(&modulus))
}

/// Exact `S_m` for the term of `spec` with `f = (4k+1)^m`, `k <= (p-1)/2`.
pub fn sum_to_half(spec: &TermSpec, m: u32, p: u64) -> Rat {
    let f = Poly::from_ints(&[1, 4]).pow(m);
    TermValueStream::new(spec.clone()).partial_sum(&f, ((p - 1) / 2) as usize)
}

/// Exact boundary term `P ω^r x(2Dω) t_ω / C` at `ω = (p+1)/2`. By
/// telescoping it equals `S_m - (a_1/C) S_1` whenever `a_1` is the only
/// nonzero reduced coefficient.
pub fn boundary_term(red: &IntegralReduction, p: u64) -> Rat {
    let omega = p.div_ceil(2);
    let w = Rat::from_integer(omega.into());
    let t = TermValueStream::new(red.spec.clone())
        .get(omega as usize)
        .clone();
    let x_at = red
        .x
        .eval(&(&w * Rat::from_integer(2 * red.spec.denominator())));
    Rat::from_integer(red.prefactor.clone()) * num_traits::pow(w, red.spec.r as usize) * x_at * t
        / Rat::from_integer(red.scale.clone())
}

fn check_odd_m(m: u32) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::HypothesisViolation(format!("m = {m} must be odd")));
    }
    Ok(())
}

/// Checks `S_m ≡ a_m (p (-1)^{(p-1)/2} + p^3 E_{p-3}) + p^3 c_m (mod p^4)`
/// with `c_m = -4 x(2)`.
pub fn check_case3(m: u32, p: u64) -> Result<CongruenceReport> {
    check_odd_m(m)?;
    if p < 5 || !is_prime(p) {
        return Err(Error::HypothesisViolation(format!(
            "p = {p} must be a prime >= 5"
        )));
    }
    let spec = TermSpec::half_cubic_alt();
    let red = integral_reduce_alt(&spec, m)?;
    let a_m = red.coeffs_a[&1].clone();
    let c_m = -4 * red.x.eval(&Rat::from_integer(2.into())).to_integer();

    let lhs = sum_to_half(&spec, m, p);
    let pp = BigInt::from(p);
    let p3 = pp.pow(3);
    let sign = legendre_minus_one(p);
    let euler = euler_numbers((p - 3) as usize);
    let base = &pp * sign + &p3 * euler.values()[(p - 3) as usize].clone();
    let rhs = &a_m * base + &p3 * &c_m;

    let lhs_residue = residue(&lhs, p, 4)?;
    let rhs_residue = residue(&Rat::from_integer(rhs), p, 4)?;
    Ok(CongruenceReport {
        theorem: Case::Case3,
        m,
        p,
        modulus: pp.pow(4),
        pass: lhs_residue == rhs_residue,
        lhs_residue,
        rhs_residue,
        a_m,
        c_m: Some(c_m),
        mu: (m - 1) / 2,
    })
}

/// Checks `S_m ≡ (a_m / μ!) p (mod p^4)`.
///
/// `a_m` in the report is the integer `c` of [`half4_reduce`], whose scale is
/// exactly `μ!`.
pub fn check_case4(m: u32, p: u64) -> Result<CongruenceReport> {
    check_odd_m(m)?;
    let mu = (m - 1) / 2;
    if p < 3 || !is_prime(p) {
        return Err(Error::HypothesisViolation(format!(
            "p = {p} must be an odd prime"
        )));
    }
    if p <= mu as u64 {
        return Err(Error::HypothesisViolation(format!(
            "p = {p} must exceed mu = {mu}"
        )));
    }
    let spec = TermSpec::half_quartic();
    let red = half4_reduce(m)?;
    let a_m = red.coeffs_a[&1].clone();
    let lhs = sum_to_half(&spec, m, p);
    let expected = Rat::new(&a_m * p, red.scale.clone());

    let lhs_residue = residue(&lhs, p, 4)?;
    let rhs_residue = residue(&expected, p, 4)?;
    Ok(CongruenceReport {
        theorem: Case::Case4,
        m,
        p,
        modulus: BigInt::from(p).pow(4),
        pass: lhs_residue == rhs_residue,
        lhs_residue,
        rhs_residue,
        a_m,
        c_m: None,
        mu,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityEntry {
    pub m: u32,
    #[serde(with = "crate::polycore::rat_serde")]
    pub a_m_over_factorial: Rat,
    pub is_integer: bool,
}

/// `a_m / ((m-1)/2)!` for every odd `m <= m_max`.
pub fn scan_integrality(m_max: u32) -> Result<Vec<IntegralityEntry>> {
    (1..=m_max)
        .step_by(2)
        .map(|m| {
            let red = half4_reduce(m)?;
            let v = Rat::new(red.coeffs_a[&1].clone(), red.scale.clone());
            Ok(IntegralityEntry {
                m,
                is_integer: v.is_integer(),
                a_m_over_factorial: v,
            })
        })
        .collect()
}

/// Whether `v` has nonnegative `p`-adic valuation.
pub fn is_p_integral(v: &Rat, p: u64) -> bool {
    !v.denom().is_multiple_of(&BigInt::from(p)) || v.is_zero()
}

/// Sign of `(-1)^{(p-1)/2}`.
pub fn legendre_minus_one(p: u64) -> i64 {
    if ((p - 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;

    #[test]
    fn residue_examples() {
        assert_eq!(residue(&rat(435, 512), 5, 4).unwrap(), BigInt::from(505));
        assert_eq!(residue(&Rat::zero(), 5, 4).unwrap(), BigInt::zero());
        assert_eq!(residue(&rat(6105, 4096), 5, 4).unwrap(), BigInt::from(5));
        assert_eq!(residue(&rat(-1, 1), 5, 2).unwrap(), BigInt::from(24));
    }

    #[test]
    fn residue_rejects_p_in_denominator() {
        assert!(matches!(
            residue(&rat(1, 10), 5, 4),
            Err(Error::NotPIntegral { p: 5, .. })
        ));
    }

    #[test]
    fn primality() {
        assert_eq!(primes_in(1, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1) && !is_prime(91) && is_prime(97));
    }

    #[test]
    fn case3_examples() {
        let r = check_case3(1, 5).unwrap();
        assert_eq!(r.lhs_residue, BigInt::from(505));
        assert_eq!(r.rhs_residue, BigInt::from(505));
        assert_eq!(r.a_m, BigInt::one());
        assert_eq!(r.c_m, Some(BigInt::zero()));
        assert!(r.pass);

        let r = check_case3(3, 7).unwrap();
        assert_eq!(r.a_m, BigInt::from(-3));
        assert!(r.pass);
    }

    #[test]
    fn case3_preconditions() {
        assert!(check_case3(2, 5).is_err());
        assert!(check_case3(1, 3).is_err());
        assert!(check_case3(1, 9).is_err());
    }

    #[test]
    fn case4_examples() {
        let r = check_case4(1, 5).unwrap();
        assert_eq!(
            (r.lhs_residue.clone(), r.rhs_residue.clone()),
            (5.into(), 5.into())
        );
        assert!(r.pass);

        let r = check_case4(3, 5).unwrap();
        assert_eq!(r.a_m, BigInt::from(-1));
        assert_eq!(r.rhs_residue, BigInt::from(625 - 5));
        assert!(r.pass);

        let r = check_case4(11, 13).unwrap();
        assert_eq!(r.a_m, BigInt::from(-10515 * 120));
        assert!(r.pass);
    }

    #[test]
    fn case4_preconditions() {
        assert!(matches!(
            check_case4(11, 5),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(check_case4(1, 2).is_err());
        assert!(check_case4(4, 7).is_err());
    }

    #[test]
    fn scan_first_entries() {
        let scan = scan_integrality(11).unwrap();
        assert_eq!(scan[0].a_m_over_factorial, Rat::one());
        assert_eq!(scan[1].a_m_over_factorial, rat(-1, 1));
        assert_eq!(scan[5].m, 11);
        assert_eq!(scan[5].a_m_over_factorial, rat(-10515, 1));
        assert!(scan.iter().all(|e| e.is_integer));
    }

    #[test]
    fn boundary_matches_telescoped_difference() {
        for p in [5u64, 7, 11] {
            for m in [3u32, 5, 7] {
                let red = integral_reduce_alt(&TermSpec::half_cubic_alt(), m).unwrap();
                let spec = TermSpec::half_cubic_alt();
                let diff = sum_to_half(&spec, m, p)
                    - Rat::from_integer(red.coeffs_a[&1].clone()) * sum_to_half(&spec, 1, p);
                assert_eq!(diff, boundary_term(&red, p), "p = {p}, m = {m}");
            }
        }
    }
}
