//! Structured reductions for terms `t_k = (±1)^k ((α)_k / k!)^r`.
//!
//! Here `t_{k+1} / t_k = a(k) / b(k)` with `a(k) = ±(k+α)^r` and
//! `b(k) = (k+1)^r`, so `a` is a shift of `∓b` and `b` is symmetric about
//! `β = -1`. Expanding in powers of the centred variable
//! `k' = 2Dk + Dα` (`D` the denominator of `α`) the reduction only ever
//! touches powers of one parity and can be carried out over the integers.
//!
//! For the alternating sign the identity produced is
//!
//! ```text
//! C k'^m t_k = sum_i a_i k'^i t_k + Δ_k( P k^r x(2Dk) t_k )
//! ```
//!
//! with `C = 1` and `P = 2^{r-1} D^r`. For the plain sign the same shape
//! holds with `C` the product of the leading coefficients used along the
//! way, and [`half4_reduce`] shrinks that product for `α = 1/2, r = 4`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::diffspace::{analyze, ReductionCertificate, SpaceInfo, VerificationReport};
use crate::polycore::{rat, rat_serde, to_power_basis, Degree, Parity, Poly, PowerBasisPoly, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// `(-1)^k` present, `a(k) = -(k+α)^r`.
    Alt,
    /// No sign factor, `a(k) = (k+α)^r`.
    Same,
}

impl Sign {
    pub fn as_rat(self) -> Rat {
        match self {
            Sign::Alt => -Rat::one(),
            Sign::Same => Rat::one(),
        }
    }
}

/// The term `(±1)^k ((α)_k / k!)^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub sign: Sign,
    #[serde(with = "rat_serde")]
    pub alpha: Rat,
    pub r: u32,
}

impl TermSpec {
    pub fn new(sign: Sign, alpha: Rat, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::HypothesisViolation("r must be positive".into()));
        }
        Ok(TermSpec { sign, alpha, r })
    }

    /// `(-1)^k ((1/2)_k / k!)^3`.
    pub fn half_cubic_alt() -> Self {
        TermSpec {
            sign: Sign::Alt,
            alpha: rat(1, 2),
            r: 3,
        }
    }

    /// `((1/2)_k / k!)^4`.
    pub fn half_quartic() -> Self {
        TermSpec {
            sign: Sign::Same,
            alpha: rat(1, 2),
            r: 4,
        }
    }

    /// Denominator `D` of `α` in lowest terms.
    pub fn denominator(&self) -> BigInt {
        self.alpha.denom().clone()
    }

    /// `D α` as an integer.
    pub fn scaled_alpha(&self) -> BigInt {
        self.alpha.numer().clone()
    }

    pub fn a(&self) -> Poly {
        Poly::linear_power(&self.alpha, self.r).scale(&self.sign.as_rat())
    }

    pub fn b(&self) -> Poly {
        Poly::linear_power(&Rat::one(), self.r)
    }

    pub fn space(&self) -> SpaceInfo {
        analyze(&self.a(), &self.b()).expect("a and b are nonzero")
    }

    /// Symmetry centre of `b(k) = (k+1)^r`.
    pub fn beta(&self) -> Rat {
        -Rat::one()
    }

    /// `γ = α / 2`: the centre `-β + (α' - 1)/2` for the shift `α' = α - 1`.
    pub fn gamma(&self) -> Rat {
        &self.alpha / Rat::from_integer(2.into())
    }

    /// `k' = 2Dk + Dα` as a polynomial in `k`.
    pub fn centred_variable(&self) -> Poly {
        let d = Rat::from_integer(self.denominator());
        Poly::new(vec![&d * &self.alpha, d * Rat::from_integer(2.into())])
    }

    /// `2^{r-1} D^r`.
    pub fn delta_prefactor(&self) -> BigInt {
        BigInt::from(2).pow(self.r - 1) * self.denominator().pow(self.r)
    }

    /// The plain-sign hypothesis `-α r ∉ ℕ`.
    pub fn check_same_sign_hypothesis(&self) -> Result<()> {
        let v = -&self.alpha * Rat::from_integer(self.r.into());
        if v.is_integer() && !v.is_negative() {
            return Err(Error::HypothesisViolation(format!(
                "-alpha*r = {v} is a nonnegative integer"
            )));
        }
        Ok(())
    }
}

/// Output of the integral reductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralReduction {
    pub spec: TermSpec,
    pub m: u32,
    /// The scale `C` on the left-hand side.
    pub scale: BigInt,
    /// `a_i`, the coefficients of `k'^i` in the reduced part. Only the
    /// exponents below the reduction floor are present.
    pub coeffs_a: BTreeMap<usize, BigInt>,
    /// Integer polynomial, applied as `x(2Dk)` inside the difference.
    pub x: Poly,
    /// Constant `P` in `Δ_k(P k^r x(2Dk) t_k)`.
    pub prefactor: BigInt,
}

impl IntegralReduction {
    /// `a_i / C`.
    pub fn scaled_coeffs(&self) -> BTreeMap<usize, Rat> {
        self.coeffs_a
            .iter()
            .map(|(&i, a)| (i, Rat::new(a.clone(), self.scale.clone())))
            .collect()
    }

    pub fn x_integer_coeffs(&self) -> Vec<BigInt> {
        self.x
            .integer_coeffs()
            .expect("x has integer coefficients by construction")
    }

    /// Reduced part `sum a_i k'^i` as a polynomial in `k'`.
    pub fn reduced_in_centred(&self) -> Poly {
        let top = self.coeffs_a.keys().last().map_or(0, |n| n + 1);
        let mut c = vec![Rat::zero(); top];
        for (&i, a) in &self.coeffs_a {
            c[i] = Rat::from_integer(a.clone());
        }
        Poly::new(c)
    }

    /// Translates back to the variable `k`: returns the space of the term,
    /// `f(k) = k'^m`, and the certificate `C f = image_of(X) + h` with
    /// `h(k) = sum a_i k'^i` and `X(k) = P x(2Dk)`.
    pub fn to_certificate(&self) -> (SpaceInfo, Poly, ReductionCertificate) {
        let info = self.spec.space();
        let kp = self.spec.centred_variable();
        let f = kp.pow(self.m);
        let two_d = Rat::from_integer(2 * self.spec.denominator());
        let h = self
            .reduced_in_centred()
            .compose_linear(&two_d, &kp.coeff(0));
        let x = self
            .x
            .compose_linear(&two_d, &Rat::zero())
            .scale(&Rat::from_integer(self.prefactor.clone()));
        let cert = ReductionCertificate {
            h,
            x,
            scale: Rat::from_integer(self.scale.clone()),
        };
        (info, f, cert)
    }

    pub fn verify(&self) -> VerificationReport {
        let (info, f, cert) = self.to_certificate();
        info.verify_certificate(&f, &cert)
    }

    /// Nonzero `a_i` with `i ≢ m (mod 2)`.
    pub fn parity_violations(&self) -> Vec<usize> {
        self.coeffs_a
            .iter()
            .filter(|(&i, a)| (i + self.m as usize) % 2 == 1 && !a.is_zero())
            .map(|(&i, _)| i)
            .collect()
    }
}

/// `½((k+Dα)^r (k+D)^s ∓ (k-Dα)^r (k-D)^s)`, with `+` for the alternating
/// sign and `-` for the plain sign.
pub fn tilde_p(spec: &TermSpec, s: u32) -> Poly {
    let da = Rat::from_integer(spec.scaled_alpha());
    let d = Rat::from_integer(spec.denominator());
    let plus = &Poly::linear_power(&da, spec.r) * &Poly::linear_power(&d, s);
    let minus = &Poly::linear_power(&-da, spec.r) * &Poly::linear_power(&-d, s);
    let sum = match spec.sign {
        Sign::Alt => &plus + &minus,
        Sign::Same => &plus - &minus,
    };
    sum.scale(&rat(1, 2))
}

/// `∓(k + Dα - D)^s`: minus for the alternating sign.
pub fn tilde_x(spec: &TermSpec, s: u32) -> Poly {
    let shift = Rat::from_integer(spec.scaled_alpha() - spec.denominator());
    Poly::linear_power(&shift, s).scale(&spec.sign.as_rat())
}

fn integer_coeffs(p: &Poly, what: &str) -> Result<Vec<BigInt>> {
    p.integer_coeffs()
        .ok_or_else(|| Error::IntegralityViolation(format!("{what} = {p}")))
}

fn finish(
    spec: &TermSpec,
    m: u32,
    scale: BigInt,
    reduced: Poly,
    x: Poly,
    prefactor: BigInt,
    floor: usize,
) -> Result<IntegralReduction> {
    let a = integer_coeffs(&reduced, "reduced part")?;
    integer_coeffs(&x, "x")?;
    debug_assert!(reduced.degree() < Degree::Finite(floor));
    let coeffs_a = (0..floor)
        .map(|i| (i, a.get(i).cloned().unwrap_or_default()))
        .collect();
    Ok(IntegralReduction {
        spec: spec.clone(),
        m,
        scale,
        coeffs_a,
        x,
        prefactor,
    })
}

/// Integral reduction for the alternating term: every `k'^m` is an integer
/// combination of `k'^i`, `i < r`, modulo integral differences.
pub fn integral_reduce_alt(spec: &TermSpec, m: u32) -> Result<IntegralReduction> {
    if spec.sign != Sign::Alt {
        return Err(Error::HypothesisViolation(
            "alternating reduction needs the (-1)^k sign".into(),
        ));
    }
    let r = spec.r as usize;
    let mut p = Poly::monomial(Rat::one(), m as usize);
    let mut x = Poly::zero();
    for deg in (r..=m as usize).rev().step_by(2) {
        let s = (deg - r) as u32;
        let c = p.coeff(deg);
        let tp = tilde_p(spec, s);
        debug_assert_eq!(tp.lc().ok(), Some(&Rat::one()));
        p = &p - &tp.scale(&c);
        x = &x + &tilde_x(spec, s).scale(&c);
    }
    finish(spec, m, BigInt::one(), p, x, spec.delta_prefactor(), r)
}

/// Cross-multiplied reduction for the plain-sign term. The scale is the
/// product `C_m` of the leading coefficients `(αr + s) D` of every
/// `tilde_p(spec, s)` used, one per `s = m-r+1, m-r-1, ...` down to 0 or 1.
pub fn integral_reduce_same(spec: &TermSpec, m: u32) -> Result<IntegralReduction> {
    if spec.sign != Sign::Same {
        return Err(Error::HypothesisViolation(
            "plain-sign reduction needs a term without (-1)^k".into(),
        ));
    }
    spec.check_same_sign_hypothesis()?;
    same_sign_loop(
        spec,
        m,
        |s| Ok((tilde_p(spec, s), tilde_x(spec, s))),
        spec.delta_prefactor(),
    )
}

fn same_sign_loop(
    spec: &TermSpec,
    m: u32,
    step: impl Fn(u32) -> Result<(Poly, Poly)>,
    prefactor: BigInt,
) -> Result<IntegralReduction> {
    let floor = spec.r as usize - 1;
    let mut p = Poly::monomial(Rat::one(), m as usize);
    let mut x = Poly::zero();
    let mut scale = Rat::one();
    for deg in (floor..=m as usize).rev().step_by(2) {
        let s = (deg - floor) as u32;
        let (tp, tx) = step(s)?;
        let lead = tp.coeff(deg);
        debug_assert_eq!(tp.degree(), Degree::Finite(deg));
        let c = p.coeff(deg);
        p = &p.scale(&lead) - &tp.scale(&c);
        x = &x.scale(&lead) + &tx.scale(&c);
        scale *= lead;
    }
    let scale = integer_coeffs(&Poly::constant(scale.clone()), "scale")?
        .pop()
        .unwrap_or_default();
    finish(spec, m, scale, p, x, prefactor, floor)
}

/// `C_m = ∏_{0 ≤ 2i ≤ m-r+1} (αr + m - r + 1 - 2i) D`, empty product 1.
pub fn same_sign_scale(spec: &TermSpec, m: u32) -> Rat {
    let top = m as i64 - spec.r as i64 + 1;
    let d = Rat::from_integer(spec.denominator());
    let ar = &spec.alpha * Rat::from_integer(spec.r.into());
    (0..)
        .map(|i| top - 2 * i)
        .take_while(|&v| v >= 0)
        .map(|v| (&ar + Rat::from_integer(v.into())) * &d)
        .product()
}

/// Refined reduction for `t_k = ((1/2)_k / k!)^4`, where `k' = 4k + 1`.
///
/// Every coefficient of `tilde_p(s)` is divisible by 2 for odd `s` and by 4
/// for even `s`; dividing first brings the scale down to `((m-1)/2)!` for
/// odd `m` and `(m-1)!!` for even `m`. The difference prefactor becomes 32
/// (odd `m`) or 64 (even `m`).
pub fn half4_reduce(m: u32) -> Result<IntegralReduction> {
    let spec = TermSpec::half_quartic();
    let divisor: u32 = if m % 2 == 1 { 4 } else { 2 };
    let prefactor = spec.delta_prefactor() / divisor;
    let step = |s: u32| {
        let need = if s.is_multiple_of(2) { 4 } else { 2 };
        debug_assert_eq!(need, divisor);
        let tp = tilde_p(&spec, s);
        let big = BigInt::from(need);
        for c in integer_coeffs(&tp, "tilde_p")? {
            if !c.is_multiple_of(&big) {
                return Err(Error::DivisibilityViolation {
                    s: s as usize,
                    divisor: need,
                    coeff: c.to_string(),
                });
            }
        }
        let inv = rat(1, need as i64);
        Ok((tp.scale(&inv), tilde_x(&spec, s)))
    };
    same_sign_loop(&spec, m, step, prefactor)
}

/// `((m-1)/2)!` for odd `m`, `(m-1)!!` for even `m`.
pub fn half4_scale(m: u32) -> BigInt {
    if m % 2 == 1 {
        (1..=(m - 1) / 2).map(BigInt::from).product()
    } else {
        (1..m).rev().step_by(2).map(BigInt::from).product()
    }
}

/// Symmetric reduction over the rationals for a general pair with
/// `a(k) = sign * b(k + α)` and `b(β + k) = ±b(β - k)`.
///
/// `f` must be parity-pure in powers of `k + γ`, `γ = -β + (α - 1)/2`; the
/// reduced part `h` then has the same parity and degree below `deg a`
/// (alternating) or `deg a - 1` (plain sign).
pub fn sym_reduce(
    a: &Poly,
    b: &Poly,
    alpha: &Rat,
    beta: &Rat,
    sign: Sign,
    f: &PowerBasisPoly,
) -> Result<ReductionCertificate> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput(if a.is_zero() { "a" } else { "b" }));
    }
    if *a != b.shift(alpha).scale(&sign.as_rat()) {
        return Err(Error::ShiftViolation {
            alpha: alpha.to_string(),
        });
    }
    let centred = b.shift(beta);
    if !matches!(
        to_power_basis(&centred, &Rat::zero()).parity(),
        Parity::Even | Parity::Odd
    ) {
        return Err(Error::SymmetryViolation {
            beta: beta.to_string(),
        });
    }
    let r = a.degree().finite().unwrap_or_default();
    if sign == Sign::Same {
        let v = -(alpha + Rat::one()) * Rat::from_integer(r.into());
        if r == 0 || (v.is_integer() && !v.is_negative()) {
            return Err(Error::HypothesisViolation(format!(
                "-(alpha+1)*deg a = {v} is a nonnegative integer"
            )));
        }
    }

    let half = rat(1, 2);
    let gamma = -beta + (alpha - Rat::one()) * &half;
    let f_poly = f.to_poly();
    if to_power_basis(&f_poly, &gamma).parity() == Parity::Mixed {
        return Err(Error::NotParityPure {
            gamma: gamma.to_string(),
        });
    }

    let info = analyze(a, b)?;
    let x_scale = match sign {
        Sign::Alt => -half.clone(),
        Sign::Same => Rat::one(),
    };
    let floor = match sign {
        Sign::Alt => r,
        Sign::Same => r - 1,
    };
    let x_shift = &gamma - &half;

    let mut p = f_poly;
    let mut x = Poly::zero();
    while let Degree::Finite(deg) = p.degree() {
        if deg < floor {
            break;
        }
        let s = (deg - floor) as u32;
        let xs = Poly::linear_power(&x_shift, s).scale(&x_scale);
        let ps = info.image_of(&xs);
        debug_assert_eq!(ps.degree(), Degree::Finite(deg));
        let c = p.lc()? / ps.lc()?;
        p = &p - &ps.scale(&c);
        x = &x + &xs.scale(&c);
    }
    Ok(ReductionCertificate {
        h: p,
        x,
        scale: Rat::one(),
    })
}
