//! Reduction of polynomials modulo the difference space
//! `S_{a,b} = { a(k) x(k+1) - b(k-1) x(k) : x in K[k] }`.
//!
//! For a hypergeometric term with `t_{k+1} / t_k = a(k) / b(k)` every element
//! of `S_{a,b}` times `t_k` telescopes:
//!
//! ```text
//! Δ_k( b(k-1) x(k) t_k ) = ( a(k) x(k+1) - b(k-1) x(k) ) t_k
//! ```
//!
//! [`SpaceInfo::reduce`] rewrites any `f` as `image_of(x) + h` with `h` in a
//! finite spanning set of the quotient `K[k] / S_{a,b}`, and
//! [`SpaceInfo::oracle_reduce`] solves the same problem by brute-force linear
//! algebra so the two can be checked against each other.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::polycore::{rat_serde, Degree, Poly, Rat};
use crate::{Error, Result};

/// Invariants of a ratio pair `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceInfo {
    pub a: Poly,
    pub b: Poly,
    /// `a(k) - b(k-1)`.
    pub u: Poly,
    /// `max(deg u, deg a - 1)`. Equals `-1` only when `a` is a constant and
    /// `u = 0`; then every polynomial lies in `S_{a,b}`.
    pub d: i64,
    /// `-[k^{deg a - 1}] u / lc a`, defined when `deg u <= deg a - 1`.
    #[serde(with = "rat_serde::option")]
    pub m0: Option<Rat>,
    pub degenerate: bool,
}

/// Witness of `scale * f = image_of(x) + h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub h: Poly,
    pub x: Poly,
    #[serde(with = "rat_serde")]
    pub scale: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    /// `scale * f - h - image_of(x)`; zero exactly when `pass`.
    pub residual: Poly,
}

impl ReductionCertificate {
    pub fn trivial(f: &Poly) -> Self {
        ReductionCertificate {
            h: f.clone(),
            x: Poly::zero(),
            scale: Rat::one(),
        }
    }

    /// The polynomial `g(k) = b(k-1) x(k)` with `Δ(g t) = (scale f - h) t`.
    pub fn antidifference(&self, info: &SpaceInfo) -> Poly {
        &info.b.shift(&-Rat::one()) * &self.x
    }
}

/// Analyzes the pair `(a, b)`.
pub fn analyze(a: &Poly, b: &Poly) -> Result<SpaceInfo> {
    if a.is_zero() {
        return Err(Error::ZeroInput("a"));
    }
    if b.is_zero() {
        return Err(Error::ZeroInput("b"));
    }
    let deg_a = a.degree().as_i64().unwrap_or_default();
    let u = a - &b.shift(&-Rat::one());
    let deg_u = u.degree().as_i64();
    let d = deg_u.map_or(deg_a - 1, |du| du.max(deg_a - 1));

    // When deg u < deg a - 1 the k^{deg a - 1} coefficient of u is zero and
    // image_of(1) = u drops below d, exactly as for m0 = 0.
    let m0 = if deg_a >= 1 && deg_u.is_none_or(|du| du < deg_a) {
        let top = u.coeff((deg_a - 1) as usize);
        Some(-top / a.lc()?)
    } else {
        None
    };
    let degenerate = m0
        .as_ref()
        .is_some_and(|m| m.is_integer() && !m.is_negative());

    Ok(SpaceInfo {
        a: a.clone(),
        b: b.clone(),
        u,
        d,
        m0,
        degenerate,
    })
}

impl SpaceInfo {
    /// `a(k) x(k+1) - b(k-1) x(k)`.
    pub fn image_of(&self, x: &Poly) -> Poly {
        let one = Rat::one();
        &(&self.a * &x.shift(&one)) - &(&self.b.shift(&-one) * x)
    }

    /// `m0` as a natural number when the pair is degenerate.
    pub fn m0_natural(&self) -> Option<usize> {
        if !self.degenerate {
            return None;
        }
        self.m0
            .as_ref()
            .and_then(|m| m.to_integer().try_into().ok())
    }

    /// The exponent `d + m0` that cannot be eliminated in a degenerate space.
    pub fn blocked_degree(&self) -> Option<usize> {
        self.m0_natural().map(|m0| (self.d + m0 as i64) as usize)
    }

    /// Exponents spanning the quotient space.
    pub fn spanning_exponents(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = (0..self.d.max(0) as usize).collect();
        out.extend(self.blocked_degree());
        out
    }

    /// Reduces `f` modulo `S_{a,b}` by repeatedly cancelling the leading term
    /// with `p_s(k) = a(k)(k+1)^s - b(k-1)k^s`.
    ///
    /// In a degenerate space the monomial of degree `d + m0` is moved into
    /// `h` and the reduction carries on below it.
    pub fn reduce(&self, f: &Poly) -> ReductionCertificate {
        let one = Rat::one();
        let b_prev = self.b.shift(&-one.clone());
        let blocked = self.blocked_degree();

        let mut p = f.clone();
        let mut h = Poly::zero();
        let mut x: Vec<Rat> = Vec::new();
        while let Degree::Finite(m) = p.degree() {
            if (m as i64) < self.d {
                break;
            }
            let lc = p.coeffs()[m].clone();
            if Some(m) == blocked {
                let mono = Poly::monomial(lc, m);
                h = &h + &mono;
                p = &p - &mono;
                continue;
            }
            let s = (m as i64 - self.d) as usize;
            let ps = &(&self.a * &Poly::linear_power(&one, s as u32))
                - &(&b_prev * &Poly::monomial(one.clone(), s));
            debug_assert_eq!(ps.degree(), Degree::Finite(m));
            let c = lc / ps.coeffs()[m].clone();
            p = &p - &ps.scale(&c);
            if x.len() <= s {
                x.resize(s + 1, Rat::zero());
            }
            x[s] += c;
        }
        ReductionCertificate {
            h: &h + &p,
            x: Poly::new(x),
            scale: one,
        }
    }

    pub fn verify_certificate(&self, f: &Poly, cert: &ReductionCertificate) -> VerificationReport {
        let residual = &(&f.scale(&cert.scale) - &cert.h) - &self.image_of(&cert.x);
        VerificationReport {
            pass: residual.is_zero(),
            residual,
        }
    }

    /// Solves `f = image_of(x) + h` by exact linear algebra, with
    /// `deg x <= deg f + 1` and `h` supported on `target_support`.
    ///
    /// On failure in a degenerate space the bound is raised once by `m0`.
    pub fn oracle_reduce(
        &self,
        f: &Poly,
        target_support: &BTreeSet<usize>,
    ) -> Result<ReductionCertificate> {
        let bound = f.degree().finite().map_or(0, |n| n + 1);
        match self.oracle_reduce_with_bound(f, target_support, bound) {
            Err(Error::NoSolution { .. }) if self.degenerate => {
                let extra = self.m0_natural().unwrap_or(0);
                self.oracle_reduce_with_bound(f, target_support, bound + extra)
            }
            other => other,
        }
    }

    pub fn oracle_reduce_with_bound(
        &self,
        f: &Poly,
        target_support: &BTreeSet<usize>,
        x_bound: usize,
    ) -> Result<ReductionCertificate> {
        let targets: Vec<Poly> = target_support
            .iter()
            .map(|&i| Poly::monomial(Rat::one(), i))
            .collect();
        self.oracle_reduce_in_span(f, &targets, x_bound)
    }

    /// Like [`SpaceInfo::oracle_reduce_with_bound`], with `h` ranging over the
    /// span of arbitrary `targets` instead of monomials.
    pub fn oracle_reduce_in_span(
        &self,
        f: &Poly,
        targets: &[Poly],
        x_bound: usize,
    ) -> Result<ReductionCertificate> {
        let columns: Vec<Poly> = (0..=x_bound)
            .map(|j| self.image_of(&Poly::monomial(Rat::one(), j)))
            .chain(targets.iter().cloned())
            .collect();
        let rows = columns
            .iter()
            .chain(std::iter::once(f))
            .filter_map(|p| p.degree().finite())
            .max()
            .map_or(0, |n| n + 1);

        let matrix: Vec<Vec<Rat>> = (0..rows)
            .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
            .collect();
        let rhs: Vec<Rat> = (0..rows).map(|i| f.coeff(i)).collect();
        let sol = solve(matrix, rhs, columns.len()).ok_or(Error::NoSolution { bound: x_bound })?;

        let (xs, hs) = sol.split_at(x_bound + 1);
        let h = targets
            .iter()
            .zip(hs)
            .fold(Poly::zero(), |acc, (t, c)| &acc + &t.scale(c));
        Ok(ReductionCertificate {
            h,
            x: Poly::new(xs.to_vec()),
            scale: Rat::one(),
        })
    }

    /// `t_0, ..., t_n` for the term with ratio `a(k) / b(k)`, or `None` if
    /// `b` vanishes at some `k < n`.
    pub fn term_values(&self, t0: &Rat, n: usize) -> Option<Vec<Rat>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(t0.clone());
        for k in 0..n {
            let kk = Rat::from_integer(k.into());
            let den = self.b.eval(&kk);
            if den.is_zero() {
                return None;
            }
            let next = &out[k] * self.a.eval(&kk) / den;
            out.push(next);
        }
        Some(out)
    }
}

/// Gauss-Jordan elimination over the rationals. Returns one solution with all
/// free variables set to zero, or `None` if the system is inconsistent.
fn solve(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>, ncols: usize) -> Option<Vec<Rat>> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        rhs.swap(row, piv);
        let inv = m[row][col].recip();
        for v in &mut m[row][col..ncols] {
            *v *= &inv;
        }
        rhs[row] *= &inv;
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let pivot_row = m[row].clone();
            for (v, w) in m[r][col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                *v -= &factor * w;
            }
            let delta = &factor * &rhs[row];
            rhs[r] -= delta;
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if rhs[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut sol = vec![Rat::zero(); ncols];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = rhs[r].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;

    fn binomial_space(n: i64) -> SpaceInfo {
        analyze(&Poly::from_ints(&[-n, 1]), &Poly::from_ints(&[1, 1])).unwrap()
    }

    fn cubic_alt() -> SpaceInfo {
        let a = -Poly::linear_power(&rat(1, 2), 3);
        let b = Poly::linear_power(&rat(1, 1), 3);
        analyze(&a, &b).unwrap()
    }

    fn quartic_same() -> SpaceInfo {
        let a = Poly::linear_power(&rat(1, 2), 4);
        let b = Poly::linear_power(&rat(1, 1), 4);
        analyze(&a, &b).unwrap()
    }

    #[test]
    fn analyze_binomial() {
        let info = binomial_space(3);
        assert_eq!(info.u, Poly::from_ints(&[-3]));
        assert_eq!(info.d, 0);
        assert_eq!(info.m0, Some(rat(3, 1)));
        assert!(info.degenerate);
        assert_eq!(info.spanning_exponents(), BTreeSet::from([3]));
    }

    #[test]
    fn analyze_cubic_alternating() {
        let info = cubic_alt();
        assert_eq!(info.u.degree(), Degree::Finite(3));
        assert_eq!(info.d, 3);
        assert_eq!(info.m0, None);
        assert!(!info.degenerate);
    }

    #[test]
    fn analyze_quartic_same_sign() {
        // u = (k+1/2)^4 - k^4 = 2k^3 + ..., so m0 = -2.
        let info = quartic_same();
        assert_eq!(info.u.degree(), Degree::Finite(3));
        assert_eq!(info.u.coeff(3), rat(2, 1));
        assert_eq!(info.d, 3);
        assert_eq!(info.m0, Some(rat(-2, 1)));
        assert!(!info.degenerate);
    }

    #[test]
    fn analyze_rejects_zero() {
        let one = Poly::one();
        assert_eq!(analyze(&Poly::zero(), &one), Err(Error::ZeroInput("a")));
        assert_eq!(analyze(&one, &Poly::zero()), Err(Error::ZeroInput("b")));
    }

    #[test]
    fn cancelled_top_coefficient_is_degenerate_at_zero() {
        // a(k) = b(k-1) gives u = 0 and image_of(1) = 0.
        let b = Poly::from_ints(&[1, 0, 1]);
        let a = b.shift(&rat(-1, 1));
        let info = analyze(&a, &b).unwrap();
        assert_eq!(info.d, 1);
        assert_eq!(info.m0, Some(rat(0, 1)));
        assert!(info.degenerate);
        assert!(info.image_of(&Poly::one()).is_zero());
    }

    #[test]
    fn constant_equal_pair_has_negative_d() {
        let info = analyze(&Poly::from_ints(&[2]), &Poly::from_ints(&[2])).unwrap();
        assert_eq!(info.d, -1);
        assert!(!info.degenerate);
        let f = Poly::from_ints(&[1, -2, 3]);
        let cert = info.reduce(&f);
        assert!(cert.h.is_zero());
        assert!(info.verify_certificate(&f, &cert).pass);
    }

    #[test]
    fn image_examples() {
        let info = binomial_space(3);
        assert!(info.image_of(&Poly::zero()).is_zero());
        assert_eq!(info.image_of(&Poly::one()), Poly::from_ints(&[-3]));

        let img = cubic_alt().image_of(&Poly::constant(rat(-1, 2)));
        let expect = Poly::new(vec![rat(1, 16), rat(3, 8), rat(3, 4), rat(1, 1)]);
        assert_eq!(img, expect);
    }

    #[test]
    fn reduce_binomial_keeps_only_blocked_power() {
        let info = binomial_space(3);
        let f = Poly::from_ints(&[0, 0, 0, 1]);
        let cert = info.reduce(&f);
        assert_eq!(cert.h.support(), vec![3]);
        assert!(info.verify_certificate(&f, &cert).pass);
    }

    #[test]
    fn reduce_below_d_is_identity() {
        let info = cubic_alt();
        let f = Poly::from_ints(&[5, -1, 2]);
        assert_eq!(info.reduce(&f), ReductionCertificate::trivial(&f));
    }

    #[test]
    fn reduce_cubic_alternating() {
        let info = cubic_alt();
        let f = Poly::from_ints(&[1, 4]).pow(3);
        let cert = info.reduce(&f);
        assert_eq!(cert.h, Poly::from_ints(&[-3, -12]));
        assert!(info.verify_certificate(&f, &cert).pass);
    }

    #[test]
    fn verify_detects_perturbation() {
        let info = cubic_alt();
        let f = Poly::from_ints(&[0, 0, 0, 0, 1]);
        let trivial = ReductionCertificate::trivial(&f);
        assert!(info.verify_certificate(&f, &trivial).pass);

        let mut cert = info.reduce(&f);
        cert.h = &cert.h + &Poly::one();
        let report = info.verify_certificate(&f, &cert);
        assert!(!report.pass);
        assert_eq!(report.residual, Poly::from_ints(&[-1]));
    }

    #[test]
    fn oracle_examples() {
        let info = binomial_space(3);
        let cert = info
            .oracle_reduce(&Poly::from_ints(&[-3]), &BTreeSet::from([3]))
            .unwrap();
        assert!(cert.h.is_zero());
        assert_eq!(cert.x, Poly::one());

        let cert = info.oracle_reduce(&Poly::zero(), &BTreeSet::new()).unwrap();
        assert!(cert.h.is_zero() && cert.x.is_zero());

        let info = cubic_alt();
        let f = Poly::from_ints(&[1, 4]).pow(3);
        let cert = info.oracle_reduce(&f, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(cert.h, Poly::from_ints(&[-3, -12]));
        assert!(info.verify_certificate(&f, &cert).pass);
    }

    #[test]
    fn oracle_reports_infeasible() {
        // k^3 is not in S_{k-3, k+1}.
        let info = binomial_space(3);
        let res = info.oracle_reduce(&Poly::from_ints(&[0, 0, 0, 1]), &BTreeSet::new());
        assert!(matches!(res, Err(Error::NoSolution { .. })));
    }

    #[test]
    fn telescoping_binomial() {
        let info = binomial_space(4);
        let f = Poly::from_ints(&[2, -1, 0, 3, 1]);
        let cert = info.reduce(&f);
        let g = cert.antidifference(&info);
        let t = info.term_values(&Rat::one(), 6).unwrap();
        let lhs: Rat = (0..6)
            .map(|k| {
                let kk = Rat::from_integer(k.into());
                (f.eval(&kk) - cert.h.eval(&kk)) * &t[k as usize]
            })
            .sum();
        let rhs = g.eval(&rat(6, 1)) * &t[6] - g.eval(&rat(0, 1)) * &t[0];
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_shape() {
        let info = binomial_space(3);
        let v = serde_json::to_value(&info).unwrap();
        assert_eq!(v["m0"], "3/1");
        assert_eq!(v["d"], 0);
        assert_eq!(v["degenerate"], true);
        let back: SpaceInfo = serde_json::from_value(v).unwrap();
        assert_eq!(back, info);

        let non = serde_json::to_value(cubic_alt()).unwrap();
        assert!(non["m0"].is_null());
    }
}
