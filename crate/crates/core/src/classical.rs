//! Classical oracles: Genocchi numbers and polynomials, Euler polynomials and
//! the unified family `y_{n,beta}(x; k, a, b)` with generating function
//! `2^(1-k) t^k e^(xt) / (beta^b e^t - a^b)`, all by exact recurrences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational_powi;
use crate::qcore::{binomial_q, falling_ratio};

/// Genocchi numbers `G_0..=G_{n_max}` from `sum_j C(n,j) G_j + G_n = 2 [n = 1]`.
pub fn classical_genocchi_numbers(n_max: u32) -> Vec<BigRational> {
    let mut g: Vec<BigRational> = Vec::with_capacity(n_max as usize + 1);
    let two = BigRational::from_integer(BigInt::from(2));
    for n in 0..=n_max as u64 {
        let mut rhs = if n == 1 { two.clone() } else { BigRational::zero() };
        for (j, gj) in g.iter().enumerate() {
            rhs -= binomial_q(n, j as i64) * gj;
        }
        g.push(rhs / &two);
    }
    g
}

pub fn classical_genocchi(n: u32) -> BigRational {
    classical_genocchi_numbers(n).pop().expect("non-empty")
}

/// `G_n(x) = sum_j C(n,j) G_j x^(n-j)`.
pub fn classical_genocchi_poly(n: u32, x: &BigRational) -> BigRational {
    let g = classical_genocchi_numbers(n);
    let n64 = n as u64;
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // descending j so the x power grows with the loop
    for j in (0..=n64).rev() {
        acc += binomial_q(n64, j as i64) * &g[j as usize] * &xp;
        xp *= x;
    }
    acc
}

/// Euler polynomial from `sum_j C(n,j) E_j(x) + E_n(x) = 2 x^n`.
pub fn classical_euler_poly(n: u32, x: &BigRational) -> BigRational {
    let mut e: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    let two = BigRational::from_integer(BigInt::from(2));
    let mut xp = BigRational::one();
    for m in 0..=n as u64 {
        let mut rhs = &two * &xp;
        for (j, ej) in e.iter().enumerate() {
            rhs -= binomial_q(m, j as i64) * ej;
        }
        e.push(rhs / &two);
        xp *= x;
    }
    e.pop().expect("non-empty")
}

/// `y_{0..=n_max,beta}(x; k, a, b)` from
/// `beta^b sum_j C(n,j) y_j - a^b y_n = 2^(1-k) (n!/(n-k)!) x^(n-k)`.
///
/// `k = 0` is accepted here (the Euler specialization needs it).
pub fn ozden_y_sequence(
    n_max: u32,
    x: &BigRational,
    k: u32,
    a: &BigRational,
    b: i32,
    beta: &BigRational,
) -> Result<Vec<BigRational>> {
    if a.is_zero() || beta.is_zero() {
        return Err(Error::domain("a and beta must be nonzero"));
    }
    let beta_b = rational_powi(beta, b as i64)?;
    let a_b = rational_powi(a, b as i64)?;
    let lead = &beta_b - &a_b;
    if lead.is_zero() {
        return Err(Error::DegenerateRecurrence);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let front = rational_powi(&two, 1 - k as i64)?;
    let mut y: Vec<BigRational> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let mut rhs = if n >= k {
            let ff = BigRational::from_integer(BigInt::from(falling_ratio(n as u64, k as u64)?));
            &front * ff * rational_powi(x, (n - k) as i64)?
        } else {
            BigRational::zero()
        };
        let mut acc = BigRational::zero();
        for (j, yj) in y.iter().enumerate() {
            acc += binomial_q(n as u64, j as i64) * yj;
        }
        rhs -= &beta_b * acc;
        y.push(rhs / &lead);
    }
    Ok(y)
}

pub fn ozden_y(
    n: u32,
    x: &BigRational,
    k: u32,
    a: &BigRational,
    b: i32,
    beta: &BigRational,
) -> Result<BigRational> {
    Ok(ozden_y_sequence(n, x, k, a, b, beta)?.pop().expect("non-empty"))
}
