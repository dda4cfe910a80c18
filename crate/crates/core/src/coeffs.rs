//! Coefficients of the discrete antiderivative of `x^(n-1)`.
//!
//! `P_n(x) = sum_{r=1}^{n} a_r(n) x^r` is the polynomial with `P_n(0) = 0` and
//! `P_n(x + 1) - P_n(x) = x^(n-1)`. The coefficients are exact rationals.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::binomial_exact;

/// `a_1(n), .., a_n(n)` (index `r - 1`), solved top-down from `a_n(n) = 1/n`:
///
/// `a_{n-h+1}(n) = -1/(n-h+1) * sum_{r=n-h+2}^{n} C(r, n-h) a_r(n)` for `h = 2..=n`.
pub fn delta_inverse_coeffs(n: usize) -> Vec<BigRational> {
    assert!(n >= 1, "delta_inverse_coeffs needs n >= 1");
    let mut a = vec![BigRational::zero(); n];
    a[n - 1] = ratio(1, n as i64);
    for h in 2..=n {
        let target = n - h + 1;
        let s = n - h;
        let mut acc = BigRational::zero();
        for r in (target + 1)..=n {
            let c = BigInt::from(binomial_exact(r as u64, s as u64));
            acc += &a[r - 1] * BigRational::from_integer(c);
        }
        a[target - 1] = -acc / BigRational::from_integer(BigInt::from(target));
    }
    a
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Evaluates `P_n(x)` exactly.
pub fn antidifference_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    // Horner, lowest coefficient is a_1
    for c in coeffs.iter().rev() {
        acc = (acc + c) * x;
    }
    acc
}

/// The triangle `a_r(n)` for `1 <= r <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTriangle {
    rows: Vec<Vec<BigRational>>,
}

impl CoefficientTriangle {
    pub fn new(n_max: usize) -> Self {
        Self {
            rows: (1..=n_max).map(delta_inverse_coeffs).collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// `a_r(n)`; zero for `r = 0` or `r > n`.
    pub fn get(&self, n: usize, r: usize) -> Option<BigRational> {
        let row = self.rows.get(n.checked_sub(1)?)?;
        if r == 0 || r > n {
            return Some(BigRational::zero());
        }
        Some(row[r - 1].clone())
    }

    pub fn row(&self, n: usize) -> Option<&[BigRational]> {
        self.rows.get(n.checked_sub(1)?).map(Vec::as_slice)
    }

    pub fn get_f64(&self, n: usize, r: usize) -> Option<f64> {
        self.get(n, r).and_then(|c| c.to_f64())
    }

    /// CSV laid out with one row per `r` and one column per `n` starting at
    /// `n = 2`; cells with `r > n` are empty. Values are exact `p/q` strings.
    pub fn to_csv(&self) -> Result<String> {
        if self.n_max() < 2 {
            return Err(Error::InvalidParameter(
                "coefficient table needs n_max >= 2".into(),
            ));
        }
        let mut out = String::from("r");
        for n in 2..=self.n_max() {
            let _ = write!(out, ",{n}");
        }
        out.push('\n');
        for r in 1..=self.n_max() {
            let _ = write!(out, "{r}");
            for n in 2..=self.n_max() {
                if r <= n {
                    let _ = write!(out, ",{}", self.get(n, r).unwrap_or_default());
                } else {
                    out.push(',');
                }
            }
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        ratio(num, den)
    }

    #[test]
    fn small_rows() {
        assert_eq!(delta_inverse_coeffs(1), vec![q(1, 1)]);
        assert_eq!(delta_inverse_coeffs(2), vec![q(-1, 2), q(1, 2)]);
        assert_eq!(delta_inverse_coeffs(3), vec![q(1, 6), q(-1, 2), q(1, 3)]);
    }

    #[test]
    fn row_ten() {
        let a = delta_inverse_coeffs(10);
        let expected = [
            q(0, 1),
            q(-3, 20),
            q(0, 1),
            q(1, 2),
            q(0, 1),
            q(-7, 10),
            q(0, 1),
            q(3, 4),
            q(-1, 2),
            q(1, 10),
        ];
        assert_eq!(a, expected);
    }

    #[test]
    fn antidifference_identity_holds_exactly() {
        for n in 1..=12usize {
            let a = delta_inverse_coeffs(n);
            for x in 0..=20i64 {
                let xr = q(x, 1);
                let lhs =
                    antidifference_poly(&a, &(xr.clone() + q(1, 1))) - antidifference_poly(&a, &xr);
                let rhs = BigRational::from_integer(BigInt::from(x).pow(n as u32 - 1));
                assert_eq!(lhs, rhs, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let csv = CoefficientTriangle::new(3).to_csv().unwrap();
        assert_eq!(csv, "r,2,3\n1,-1/2,1/6\n2,1/2,-1/2\n3,,1/3\n");
        assert!(CoefficientTriangle::new(1).to_csv().is_err());
    }

    #[test]
    fn triangle_lookup() {
        let t = CoefficientTriangle::new(4);
        assert_eq!(t.get(4, 2), Some(q(1, 4)));
        assert_eq!(t.get(4, 0), Some(q(0, 1)));
        assert_eq!(t.get(5, 1), None);
        assert_eq!(t.get_f64(3, 1), Some(1.0 / 6.0));
    }
}
