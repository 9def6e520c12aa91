//! Weight-lattice arithmetic in Bourbaki epsilon coordinates and unit tests
//! in R = Z[1/2, 1/3, 1/5].

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{q, qq, Q};
use crate::error::{Error, Result};
use crate::orbits::OrbitLabel;
use crate::roots::RANK;

/// A weight in epsilon coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub [Q; RANK]);

impl WeightVector {
    pub fn zero() -> Self {
        WeightVector(std::array::from_fn(|_| Q::zero()))
    }

    /// Builds `(1/d) * (c_1, ..., c_8)`.
    pub fn scaled(d: i64, coords: [i64; RANK]) -> Self {
        WeightVector(coords.map(|c| qq(c, d)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        WeightVector(std::array::from_fn(|i| &self.0[i] * c))
    }

    /// The standard Euclidean form.
    pub fn dot(&self, other: &WeightVector) -> Q {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> Q {
        self.dot(self)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Add for WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: WeightVector) -> WeightVector {
        WeightVector(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: WeightVector) -> WeightVector {
        WeightVector(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl fmt::Display for WeightVector {
    /// Prints `(1/d)(n_1,...,n_8)` with integer `n_i`, or `(n_1,...,n_8)` when `d = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denominator();
        let nums: Vec<String> = self.0.iter().map(|c| (c.numer() * (&d / c.denom())).to_string()).collect();
        if d.is_one() {
            write!(f, "({})", nums.join(","))
        } else {
            write!(f, "(1/{d})({})", nums.join(","))
        }
    }
}

/// The fundamental weight `varpi_i`, `i` in 1..=8.
pub fn fundamental_weight(i: usize) -> WeightVector {
    assert!((1..=RANK).contains(&i), "fundamental weight index {i} out of 1..=8");
    match i {
        1 => WeightVector::scaled(1, [0, 0, 0, 0, 0, 0, 0, 2]),
        2 => WeightVector::scaled(2, [1, 1, 1, 1, 1, 1, 1, 5]),
        3 => WeightVector::scaled(2, [-1, 1, 1, 1, 1, 1, 1, 7]),
        4 => WeightVector::scaled(1, [0, 0, 1, 1, 1, 1, 1, 5]),
        5 => WeightVector::scaled(1, [0, 0, 0, 1, 1, 1, 1, 4]),
        6 => WeightVector::scaled(1, [0, 0, 0, 0, 1, 1, 1, 3]),
        7 => WeightVector::scaled(1, [0, 0, 0, 0, 0, 1, 1, 2]),
        _ => WeightVector::scaled(1, [0, 0, 0, 0, 0, 0, 1, 1]),
    }
}

/// The simple root `alpha_i` in epsilon coordinates, `i` in 1..=8.
pub fn simple_root_epsilon(i: usize) -> WeightVector {
    assert!((1..=RANK).contains(&i), "simple root index {i} out of 1..=8");
    let mut c = [0i64; RANK];
    match i {
        1 => return WeightVector::scaled(2, [1, -1, -1, -1, -1, -1, -1, 1]),
        2 => {
            c[0] = 1;
            c[1] = 1;
        }
        _ => {
            c[i - 3] = -1;
            c[i - 2] = 1;
        }
    }
    WeightVector::scaled(1, c)
}

/// The half sum of positive roots, equal to the sum of the fundamental weights.
pub fn rho() -> WeightVector {
    (1..=RANK).map(fundamental_weight).fold(WeightVector::zero(), |a, b| a + b)
}

/// Coefficients of `Lambda + rho` (or `Lambda' + rho`) over `varpi_1..varpi_8`.
pub fn varpi_coefficients(label: OrbitLabel, primed: bool) -> [Q; RANK] {
    let sixth = |n: i64| qq(n, 6);
    let quarter = |n: i64| qq(n, 4);
    match (label, primed) {
        (OrbitLabel::A5A1, false) => [sixth(2), sixth(2), sixth(1), sixth(1), sixth(1), sixth(1), sixth(1), sixth(1)],
        (OrbitLabel::A5A1, true) => [sixth(2), sixth(2), sixth(1), sixth(7), sixth(-11), sixth(7), sixth(1), sixth(1)],
        (OrbitLabel::D5a1A2, false) => [quarter(-1), quarter(-1), quarter(-1), q(1), quarter(-1), q(1), quarter(-1), quarter(-1)],
        (OrbitLabel::D5a1A2, true) => [quarter(-1), quarter(-1), quarter(-1), q(2), quarter(-9), q(2), quarter(-1), quarter(-1)],
    }
}

/// Converts varpi coefficients to epsilon coordinates.
pub fn from_varpi(coeffs: &[Q; RANK]) -> WeightVector {
    coeffs
        .iter()
        .enumerate()
        .fold(WeightVector::zero(), |acc, (i, c)| acc + fundamental_weight(i + 1).scale(c))
}

/// `Lambda + rho` or `Lambda' + rho` in epsilon coordinates.
pub fn lambda_plus_rho(label: OrbitLabel, primed: bool) -> WeightVector {
    from_varpi(&varpi_coefficients(label, primed))
}

/// `(Lambda+rho | Lambda+rho) - (Lambda'+rho | Lambda'+rho)` over all eight coordinates.
pub fn norm_difference(label: OrbitLabel) -> Q {
    lambda_plus_rho(label, false).norm() - lambda_plus_rho(label, true).norm()
}

/// `r = (Lambda+rho | Lambda+rho) - (rho | rho)` (primed variant for `Lambda'`).
pub fn casimir_scalar(label: OrbitLabel, primed: bool) -> Q {
    lambda_plus_rho(label, primed).norm() - rho().norm()
}

/// Factorization of a rational over the bad primes 2, 3, 5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RUnitVerdict {
    pub value: Q,
    pub is_unit: bool,
    /// Exponents of 2, 3 and 5.
    pub exponents: [i64; 3],
    /// What remains after removing every power of 2, 3 and 5 (sign included).
    pub residual: Q,
}

/// Splits `n` as `p^k * m` with `p` not dividing `m`.
fn strip(n: &BigInt, p: u32) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    (k, n)
}

/// Decides whether `x` is a unit of Z[1/2, 1/3, 1/5].
pub fn r_unit(x: &Q) -> RUnitVerdict {
    if x.is_zero() {
        return RUnitVerdict { value: x.clone(), is_unit: false, exponents: [0; 3], residual: Q::zero() };
    }
    let mut exponents = [0i64; 3];
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    for (k, p) in [2u32, 3, 5].into_iter().enumerate() {
        let (a, n) = strip(&num, p);
        let (b, d) = strip(&den, p);
        exponents[k] = a - b;
        num = n;
        den = d;
    }
    let residual = Q::new(num, den);
    let is_unit = residual.abs().is_one();
    RUnitVerdict { value: x.clone(), is_unit, exponents, residual }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Whether the image of `x` in `F_p` is nonzero, for a good prime `p > 5`.
pub fn nonzero_mod_p(x: &Q, p: u64) -> Result<bool> {
    if p <= 5 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let pb = BigInt::from(p);
    if (x.denom() % &pb).is_zero() {
        return Err(Error::NotIntegralAt(x.to_string(), p));
    }
    let r = x.numer().mod_floor(&pb);
    Ok(r.to_u64().unwrap_or(0) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_and_fundamental_weights() {
        assert_eq!(rho(), WeightVector::scaled(1, [0, 1, 2, 3, 4, 5, 6, 23]));
        assert_eq!(fundamental_weight(4), WeightVector::scaled(1, [0, 0, 1, 1, 1, 1, 1, 5]));
        assert_eq!(rho().norm(), q(620));
    }

    #[test]
    fn fundamental_weights_are_dual_to_simple_roots() {
        for i in 1..=RANK {
            for j in 1..=RANK {
                let expected = if i == j { q(1) } else { q(0) };
                assert_eq!(fundamental_weight(i).dot(&simple_root_epsilon(j)), expected, "i={i} j={j}");
            }
            assert_eq!(simple_root_epsilon(i).norm(), q(2));
        }
    }

    #[test]
    fn lambda_plus_rho_a5a1() {
        assert_eq!(lambda_plus_rho(OrbitLabel::A5A1, false), WeightVector::scaled(12, [1, 3, 5, 7, 9, 11, 13, 55]));
        assert_eq!(lambda_plus_rho(OrbitLabel::A5A1, true), WeightVector::scaled(12, [1, 3, 17, -5, 9, 11, 13, 55]));
        assert_eq!(norm_difference(OrbitLabel::A5A1), qq(-5, 3));
    }

    #[test]
    fn lambda_plus_rho_d5a1a2() {
        assert_eq!(lambda_plus_rho(OrbitLabel::D5a1A2, false), WeightVector::scaled(4, [0, -1, 3, 2, 6, 5, 4, 17]));
        assert_eq!(lambda_plus_rho(OrbitLabel::D5a1A2, true), WeightVector::scaled(4, [0, -1, 7, -2, 6, 5, 4, 17]));
        assert_eq!(norm_difference(OrbitLabel::D5a1A2), qq(-5, 2));
    }

    #[test]
    fn casimir_difference_matches_norm_difference() {
        for l in OrbitLabel::ALL {
            assert_eq!(casimir_scalar(l, false) - casimir_scalar(l, true), norm_difference(l));
        }
    }

    #[test]
    fn display_uses_common_denominator() {
        assert_eq!(WeightVector::scaled(12, [1, 3, 5, 7, 9, 11, 13, 55]).to_string(), "(1/12)(1,3,5,7,9,11,13,55)");
        assert_eq!(rho().to_string(), "(0,1,2,3,4,5,6,23)");
    }

    #[test]
    fn r_unit_examples() {
        let v = r_unit(&qq(-45, 16));
        assert!(v.is_unit);
        assert_eq!(v.exponents, [-4, 2, 1]);
        assert_eq!(v.residual, q(-1));
        assert!(r_unit(&qq(-5, 3)).is_unit);
        assert!(!r_unit(&qq(7, 3)).is_unit);
        assert!(!r_unit(&q(0)).is_unit);
    }

    #[test]
    fn nonzero_mod_p_examples() {
        assert_eq!(nonzero_mod_p(&qq(-5, 3), 7), Ok(true));
        assert_eq!(nonzero_mod_p(&q(14), 7), Ok(false));
        assert_eq!(nonzero_mod_p(&q(1), 5), Err(Error::BadPrime(5)));
        assert_eq!(nonzero_mod_p(&q(1), 9), Err(Error::BadPrime(9)));
        assert!(matches!(nonzero_mod_p(&qq(1, 7), 7), Err(Error::NotIntegralAt(_, 7))));
    }
}
