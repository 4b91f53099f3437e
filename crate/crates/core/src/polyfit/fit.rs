use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::poly::{monomials, Monomial, Polynomial};
use super::PolyfitError;

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub point: Vec<i64>,
    pub value: BigInt,
}

/// A polynomial that reproduces every sample it was fitted on.
#[derive(Clone, Debug, Serialize)]
pub struct Fit {
    pub polynomial: Polynomial,
    pub degree_bound: u32,
    /// Samples used to pin the coefficients.
    pub training: usize,
    /// Samples checked against the fitted polynomial afterwards.
    pub held_out: usize,
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        row.iter_mut().for_each(|x| *x /= &g);
    }
}

/// Echelon rows built one sample at a time with fraction-free elimination.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    /// Reduces `row` (coefficients plus right-hand side) against the current
    /// pivots; keeps it if it raises the rank.
    fn push(&mut self, mut row: Vec<BigInt>) -> bool {
        for (col, pivot) in &self.rows {
            if row[*col].is_zero() {
                continue;
            }
            let (a, b) = (pivot[*col].clone(), row[*col].clone());
            for (x, p) in row.iter_mut().zip(pivot) {
                *x = &a * &*x - &b * p;
            }
            primitive(&mut row);
        }
        match row[..self.width].iter().position(|x| !x.is_zero()) {
            Some(col) => {
                self.rows.push((col, row));
                true
            }
            None => false,
        }
    }

    /// Back substitution once every column has a pivot.
    fn solve(mut self) -> Vec<BigRational> {
        self.rows.sort_by_key(|r| std::cmp::Reverse(r.0));
        let mut x = vec![BigRational::zero(); self.width];
        for (col, row) in &self.rows {
            let mut rhs = BigRational::from_integer(row[self.width].clone());
            for j in col + 1..self.width {
                rhs -= BigRational::from_integer(row[j].clone()) * &x[j];
            }
            x[*col] = rhs / BigRational::from_integer(row[*col].clone());
        }
        x
    }
}

/// Exact interpolation over all monomials of total degree at most
/// `degree_bound`. Samples are taken in order: each one that raises the rank
/// pins the coefficients, every other one is held out and must be
/// reproduced exactly.
pub fn fit_polynomial(vars: &[String], samples: &[Sample], degree_bound: u32) -> Result<Fit, PolyfitError> {
    let basis: Vec<Monomial> = monomials(vars.len(), degree_bound);
    let mut ech = Echelon { width: basis.len(), rows: Vec::new() };
    let mut held = Vec::new();
    for s in samples {
        if ech.rows.len() < basis.len() {
            let mut row: Vec<BigInt> = basis.iter().map(|m| m.eval(&s.point)).collect();
            row.push(s.value.clone());
            if ech.push(row) {
                continue;
            }
        }
        held.push(s);
    }
    if ech.rows.len() < basis.len() {
        return Err(PolyfitError::InsufficientSamples { needed: basis.len(), independent: ech.rows.len() });
    }
    let training = ech.rows.len();
    let coeffs = ech.solve();
    let polynomial = Polynomial::from_terms(vars, basis.into_iter().zip(coeffs));
    for s in &held {
        let got = polynomial.eval(&s.point);
        if got != BigRational::from_integer(s.value.clone()) {
            return Err(PolyfitError::FitFailed { point: s.point.clone(), expected: s.value.to_string(), found: got.to_string() });
        }
    }
    debug_assert!(polynomial.degree().is_none_or(|d| d <= degree_bound));
    Ok(Fit { polynomial, degree_bound, training, held_out: held.len() })
}
