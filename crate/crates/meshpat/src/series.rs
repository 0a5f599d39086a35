//! Truncated formal power series with exact rational coefficients, and the
//! Eulerian triangle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A formal power series truncated after `x^(order)`; all arithmetic is exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    /// `coeffs[i]` is the coefficient of `x^i`; length = order + 1.
    coeffs: Vec<BigRational>,
}

impl Series {
    /// Series from integer coefficients.
    pub fn from_integers(ints: &[i64]) -> Self {
        Series {
            coeffs: ints.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    /// Series with coefficients produced by `f(i)`, for `i = 0..=order`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> BigRational) -> Self {
        Series {
            coeffs: (0..=order).map(&mut f).collect(),
        }
    }

    /// `F(x) = Σ_{n≥0} n! xⁿ` truncated at `order`.
    pub fn factorials(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut fact = BigInt::one();
        for n in 0..=order {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            coeffs.push(BigRational::from_integer(fact.clone()));
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^n`.
    pub fn coeff(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or_else(|| {
            Error::Series(format!("coefficient {n} beyond truncation order {}", self.order()))
        })
    }

    /// Coefficient of `x^n`, asserted to be an integer.
    pub fn coeff_integer(&self, n: usize) -> Result<BigInt> {
        let c = self.coeff(n)?;
        if c.is_integer() {
            Ok(c.to_integer())
        } else {
            Err(Error::Series(format!("coefficient of x^{n} is not an integer: {c}")))
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Series, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Series {
        let order = self.order().min(other.order());
        Series {
            coeffs: (0..=order).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Series { coeffs }
    }

    /// Division; the divisor needs an invertible (nonzero) constant term.
    pub fn div(&self, other: &Series) -> Result<Series> {
        if other.coeffs[0].is_zero() {
            return Err(Error::Series("division by a series with zero constant term".into()));
        }
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 0..=order {
            let mut acc = self.coeffs[i].clone();
            for j in 1..=i {
                acc -= &other.coeffs[j] * &coeffs[i - j];
            }
            coeffs[i] = acc / &other.coeffs[0];
        }
        Ok(Series { coeffs })
    }

    /// Logarithm of a series with constant term 1, via `(log a)' = a'/a`
    /// followed by formal integration.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log requires constant term 1".into()));
        }
        let order = self.order();
        let deriv = Series {
            coeffs: (1..=order)
                .map(|i| &self.coeffs[i] * BigRational::from_integer(i.into()))
                .chain(std::iter::once(BigRational::zero()))
                .collect(),
        };
        let quotient = deriv.div(self)?;
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 1..=order {
            coeffs[i] = &quotient.coeffs[i - 1] / BigRational::from_integer(i.into());
        }
        Ok(Series { coeffs })
    }

    /// Exponential of a series with constant term 0, via `e' = a'·e`.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp requires constant term 0".into()));
        }
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        for n in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc += BigRational::from_integer(j.into()) * &self.coeffs[j] * &coeffs[n - j];
            }
            coeffs[n] = acc / BigRational::from_integer(n.into());
        }
        Ok(Series { coeffs })
    }
}

/// Convenience wrappers matching the operation names of the public surface.
pub fn series_div(a: &Series, b: &Series) -> Result<Series> {
    a.div(b)
}

pub fn series_log(a: &Series) -> Result<Series> {
    a.log()
}

pub fn series_coeff(a: &Series, n: usize) -> Result<BigRational> {
    a.coeff(n).cloned()
}

/// Eulerian triangle `T(n,k)` with `T(1,1) = 1` and
/// `T(n,k) = k·T(n−1,k) + (n−k+1)·T(n−1,k−1)`; zero outside `1 ≤ k ≤ n`.
/// With this (classical, 1-based) indexing `T(n,k)` counts permutations of
/// length `n` with `k − 1` descents, so the polynomial `E_n(x)` counting by
/// descents has `[x^d] E_n = T(n, d+1)`.
pub fn eulerian(n: usize, k: usize) -> BigInt {
    if n == 0 || k == 0 || k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()]; // row for n = 1: T(1,1)
    for m in 2..=n {
        let mut next = vec![BigInt::zero(); m];
        for (idx, value) in next.iter_mut().enumerate() {
            let kk = idx + 1;
            let mut acc = BigInt::zero();
            if kk <= m - 1 {
                acc += BigInt::from(kk) * &row[idx];
            }
            if kk >= 2 {
                acc += BigInt::from(m - kk + 1) * &row[idx - 1];
            }
            *value = acc;
        }
        row = next;
    }
    row[k - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mercator() {
        let one_plus_x = Series::from_integers(&[1, 1, 0, 0, 0, 0]);
        let log = one_plus_x.log().unwrap();
        let expect = |num: i64, den: i64| BigRational::new(num.into(), den.into());
        assert_eq!(log.coeff(1).unwrap(), &expect(1, 1));
        assert_eq!(log.coeff(2).unwrap(), &expect(-1, 2));
        assert_eq!(log.coeff(3).unwrap(), &expect(1, 3));
        assert_eq!(log.coeff(4).unwrap(), &expect(-1, 4));
    }

    #[test]
    fn div_self_is_one() {
        let a = Series::from_integers(&[2, -3, 5, 7, 0, 11]);
        let q = a.div(&a).unwrap();
        assert_eq!(q.coeff_integer(0).unwrap(), 1.into());
        for i in 1..=5 {
            assert!(q.coeff(i).unwrap().is_zero());
        }
    }

    #[test]
    fn sfp_free_counts() {
        // G = F/(1+xF): counts of permutations without strong fixed points
        let order = 9;
        let f = Series::factorials(order);
        let xf = Series {
            coeffs: std::iter::once(BigRational::zero())
                .chain(f.coeffs.iter().take(order).cloned())
                .collect(),
        };
        let denom = Series::from_integers(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).add(&xf);
        let g = f.div(&denom).unwrap();
        let got: Vec<BigInt> = (0..=order).map(|i| g.coeff_integer(i).unwrap()).collect();
        let want: Vec<BigInt> = [1i64, 0, 1, 3, 14, 77, 497, 3676, 30677, 285335]
            .iter()
            .map(|&v| v.into())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn exp_log_roundtrip() {
        let a = Series::from_integers(&[1, 4, -2, 7, 3, -9, 5, 2]);
        let back = a.log().unwrap().exp().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(1, 1), 1.into());
        assert_eq!(eulerian(3, 2), 4.into());
        assert_eq!(eulerian(4, 2), 11.into());
        assert_eq!(eulerian(2, 3), 0.into());
        let row_sum: BigInt = (1..=4).map(|k| eulerian(4, k)).sum();
        assert_eq!(row_sum, 24.into());
    }

    #[test]
    fn eulerian_generating_identity() {
        // Σ_{k=0}^{M} (k+1)^n x^k agrees with E_n(x)/(1-x)^{n+1} up to x^{M-n}
        let m = 12usize;
        for n in 1..=4usize {
            let powers = Series {
                coeffs: (0..=m)
                    .map(|k| {
                        BigRational::from_integer(BigInt::from(k as u64 + 1).pow(n as u32))
                    })
                    .collect(),
            };
            let mut e_n = vec![BigRational::zero(); m + 1];
            for k in 1..=n {
                e_n[k - 1] = BigRational::from_integer(eulerian(n, k));
            }
            let e_n = Series { coeffs: e_n };
            let one_minus_x = Series {
                coeffs: (0..=m)
                    .map(|i| match i {
                        0 => BigRational::one(),
                        1 => -BigRational::one(),
                        _ => BigRational::zero(),
                    })
                    .collect(),
            };
            let mut denom = one_minus_x.clone();
            for _ in 0..n {
                denom = denom.mul(&one_minus_x);
            }
            let rhs = e_n.div(&denom).unwrap();
            for k in 0..=m - n {
                assert_eq!(powers.coeff(k).unwrap(), rhs.coeff(k).unwrap(), "n={n} k={k}");
            }
        }
    }
}
