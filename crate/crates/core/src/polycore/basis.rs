use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rat::{rat_serde, Rat};

/// A polynomial written in the basis `(k + gamma)^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerBasisPoly {
    #[serde(with = "rat_serde")]
    pub gamma: Rat,
    #[serde(rename = "coeffs")]
    coeffs: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

impl Parity {
    pub fn of_exponent(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Whether exponent `n` is allowed by this parity class.
    pub fn admits(self, n: usize) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
            Parity::Mixed => true,
            Parity::Zero => false,
        }
    }
}

impl PowerBasisPoly {
    pub fn new(gamma: Rat, coeffs: Vec<Rat>) -> Self {
        PowerBasisPoly {
            gamma,
            coeffs: Poly::new(coeffs),
        }
    }

    /// `c * (k + gamma)^n`.
    pub fn power(gamma: Rat, c: Rat, n: usize) -> Self {
        PowerBasisPoly {
            gamma,
            coeffs: Poly::monomial(c, n),
        }
    }

    /// `coeffs()[i]` is the coefficient of `(k + gamma)^i`.
    pub fn coeffs(&self) -> &[Rat] {
        self.coeffs.coeffs()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.coeff(i)
    }

    pub fn to_poly(&self) -> Poly {
        self.coeffs.shift(&self.gamma)
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (false, false) => Parity::Zero,
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }
}

/// Expands `p` in powers of `(k + gamma)`.
///
/// `p(k) = sum c_i (k + gamma)^i` exactly when `p(y - gamma) = sum c_i y^i`,
/// so this is a single Taylor shift.
pub fn to_power_basis(p: &Poly, gamma: &Rat) -> PowerBasisPoly {
    PowerBasisPoly {
        gamma: gamma.clone(),
        coeffs: p.shift(&-gamma),
    }
}
