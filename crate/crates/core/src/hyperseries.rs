//! Exact values of structured hypergeometric terms, their partial sums, and
//! Euler numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::polycore::{Poly, Rat};
use crate::symred::TermSpec;

/// Lazily extended table of `t_0, t_1, ...` for one [`TermSpec`].
///
/// Growing the cache needs `&mut self`; share a filled stream behind a
/// reference (or clone it) for concurrent readers.
#[derive(Clone, Debug)]
pub struct TermValueStream {
    spec: TermSpec,
    cache: Vec<Rat>,
}

impl TermValueStream {
    pub fn new(spec: TermSpec) -> Self {
        TermValueStream {
            spec,
            cache: vec![Rat::one()],
        }
    }

    pub fn spec(&self) -> &TermSpec {
        &self.spec
    }

    /// `t_{k+1} / t_k = sign (k+α)^r / (k+1)^r`.
    pub fn ratio(&self, k: usize) -> Rat {
        let kk = Rat::from_integer(k.into());
        let num = num_traits::pow(&kk + &self.spec.alpha, self.spec.r as usize);
        let den = num_traits::pow(kk + Rat::one(), self.spec.r as usize);
        self.spec.sign.as_rat() * num / den
    }

    pub fn get(&mut self, k: usize) -> &Rat {
        while self.cache.len() <= k {
            let last = self.cache.len() - 1;
            let next = &self.cache[last] * self.ratio(last);
            self.cache.push(next);
        }
        &self.cache[k]
    }

    /// Values cached so far, `t_0 ..`.
    pub fn cached(&self) -> &[Rat] {
        &self.cache
    }

    /// `sum_{k=0}^{upper} f(k) t_k`.
    pub fn partial_sum(&mut self, f: &Poly, upper: usize) -> Rat {
        self.get(upper);
        self.cache[..=upper]
            .iter()
            .enumerate()
            .map(|(k, t)| f.eval(&Rat::from_integer(k.into())) * t)
            .sum()
    }
}

pub fn term_eval(spec: &TermSpec, k: usize) -> Rat {
    TermValueStream::new(spec.clone()).get(k).clone()
}

pub fn partial_sum(spec: &TermSpec, f: &Poly, upper: usize) -> Rat {
    TermValueStream::new(spec.clone()).partial_sum(f, upper)
}

/// Euler numbers `E_0 ..= E_{n_max}`, the Taylor coefficients of `sech x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTable {
    values: Vec<BigInt>,
}

impl EulerTable {
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// Computes `E_n` from `sum_{j=0}^{n} C(2n, 2j) E_{2j} = 0` for `n >= 1`.
pub fn euler_numbers(n_max: usize) -> EulerTable {
    let mut values = vec![BigInt::zero(); n_max + 1];
    values[0] = BigInt::one();
    let mut row = vec![BigInt::one()];
    for n in 1..=n_max {
        row = pascal_next(&row);
        if n % 2 == 1 {
            continue;
        }
        // row is now C(n, .); n = 2h.
        let acc: BigInt = (0..n).step_by(2).map(|j| &row[j] * &values[j]).sum();
        values[n] = -acc;
    }
    EulerTable { values }
}

fn pascal_next(row: &[BigInt]) -> Vec<BigInt> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(BigInt::one());
    for w in row.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(BigInt::one());
    next
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    (0..n).fold(vec![BigInt::one()], |row, _| pascal_next(&row))
}
