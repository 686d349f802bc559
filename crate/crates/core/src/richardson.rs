//! Polynomial (Richardson) extrapolation to `h -> 0` in exact arithmetic.

use num_rational::BigRational;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub estimate: BigRational,
    /// Difference between the two finest estimates of the requested order.
    pub error_estimate: BigRational,
}

/// Neville tableau for samples `values[i]` taken at step `steps[i]`, with
/// steps strictly decreasing. `order` is the number of eliminated powers of
/// `h`; the estimate uses the finest `order + 1` samples.
pub fn richardson(steps: &[BigRational], values: &[BigRational], order: usize) -> Result<Extrapolation> {
    if steps.len() != values.len() {
        return Err(Error::domain("steps and values differ in length"));
    }
    if steps.len() < order + 2 {
        return Err(Error::domain(format!(
            "order {order} needs at least {} samples, got {}",
            order + 2,
            steps.len()
        )));
    }
    // table[i] holds T[i][m] for the current column m
    let mut column: Vec<BigRational> = values.to_vec();
    for m in 1..=order {
        let mut next = Vec::with_capacity(column.len());
        for i in 0..column.len() {
            if i < m {
                next.push(column[i].clone());
                continue;
            }
            let ratio = &steps[i - m] / &steps[i];
            let denom = ratio - BigRational::from_integer(1.into());
            if denom == BigRational::from_integer(0.into()) {
                return Err(Error::domain("steps must be distinct"));
            }
            next.push(&column[i] + (&column[i] - &column[i - 1]) / denom);
        }
        column = next;
    }
    let last = column.len() - 1;
    let estimate = column[last].clone();
    let error_estimate = &column[last] - &column[last - 1];
    Ok(Extrapolation { estimate, error_estimate })
}
