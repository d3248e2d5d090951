//! Truncated exponential generating functions with exact rational
//! coefficients.
//!
//! An [`Egf`] of order `N` stores `c_0, ..., c_N` with `c_n = a_n / n!`. On
//! growth sequences, direct products of groups multiply their EGFs and the
//! wreath product `G wr H` composes `EGF(H)` with `EGF(G) - 1`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::seq::{factorial, IntSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Egf {
    coeffs: Vec<BigRational>,
}

impl Egf {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "an Egf holds at least c_0");
        Egf { coeffs }
    }

    /// `c_n = a_n / n!`.
    pub fn from_seq(a: &IntSeq) -> Self {
        let coeffs = a
            .values()
            .iter()
            .enumerate()
            .map(|(n, v)| {
                BigRational::new(BigInt::from(v.clone()), BigInt::from(factorial(n)))
            })
            .collect();
        Egf { coeffs }
    }

    /// Recovers `a_n = c_n n!`, failing unless every value is a
    /// non-negative integer.
    pub fn to_seq(&self) -> Result<IntSeq> {
        let mut values = Vec::with_capacity(self.coeffs.len());
        for (n, c) in self.coeffs.iter().enumerate() {
            let a = c * BigRational::from_integer(BigInt::from(factorial(n)));
            if !a.is_integer() || a.is_negative() {
                return Err(Error::NonIntegral { index: n });
            }
            values.push(a.to_integer().to_biguint().unwrap());
        }
        Ok(IntSeq::new("egf", values))
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        Egf { coeffs }
    }

    /// `1 + x`, the EGF of a one-point domain.
    pub fn one_plus_x(order: usize) -> Self {
        let mut f = Self::one(order);
        if order >= 1 {
            f.coeffs[1] = BigRational::one();
        }
        f
    }

    /// `e^x`, the EGF of the all-ones sequence.
    pub fn exp_x(order: usize) -> Self {
        Egf::from_seq(&IntSeq::new("ones", vec![BigUint::one(); order + 1]))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check_order(&self, other: &Egf) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    fn check_unit_constant(&self) -> Result<()> {
        if !self.coeffs[0].is_one() {
            return Err(Error::CompositionDomain(self.coeffs[0].to_string()));
        }
        Ok(())
    }

    /// Cauchy product truncated at the common order.
    pub fn product(&self, other: &Egf) -> Result<Egf> {
        self.check_order(other)?;
        Ok(self.mul_truncated(other))
    }

    fn mul_truncated(&self, other: &Egf) -> Egf {
        let order = self.order();
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n)
                    .filter(|&k| !self.coeffs[k].is_zero() && !other.coeffs[n - k].is_zero())
                    .map(|k| &self.coeffs[k] * &other.coeffs[n - k])
                    .fold(BigRational::zero(), |acc, t| acc + t)
            })
            .collect();
        Egf { coeffs }
    }

    /// `outer(self - 1)`: the EGF of `G wr H` where `self` is the EGF of `G`
    /// and `outer` that of `H`. Horner evaluation on truncated series.
    pub fn wreath(&self, outer: &Egf) -> Result<Egf> {
        self.check_order(outer)?;
        self.check_unit_constant()?;
        let mut inner = self.clone();
        inner.coeffs[0] = BigRational::zero();
        let order = self.order();
        let mut acc = Egf::one(order);
        acc.coeffs[0] = outer.coeffs[order].clone();
        for k in (0..order).rev() {
            acc = acc.mul_truncated(&inner);
            acc.coeffs[0] += &outer.coeffs[k];
        }
        Ok(acc)
    }

    /// `exp(self - 1)`, the EGF of `G wr S_omega`. Solves `h' = h f'` with
    /// `h_0 = 1`, i.e. `n h_n = sum_{k=1}^n k f_k h_{n-k}`.
    pub fn exp_shift(&self) -> Result<Egf> {
        self.check_unit_constant()?;
        let order = self.order();
        let mut h: Vec<BigRational> = Vec::with_capacity(order + 1);
        h.push(BigRational::one());
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                s += &self.coeffs[k] * BigRational::from_integer(BigInt::from(k)) * &h[n - k];
            }
            h.push(s / BigRational::from_integer(BigInt::from(n)));
        }
        Ok(Egf { coeffs: h })
    }

    /// Formal derivative; the result has order `N - 1` (order 0 stays 0).
    pub fn derivative(&self) -> Egf {
        if self.order() == 0 {
            return Egf {
                coeffs: vec![BigRational::zero()],
            };
        }
        let coeffs = (1..=self.order())
            .map(|n| &self.coeffs[n] * BigRational::from_integer(BigInt::from(n)))
            .collect();
        Egf { coeffs }
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Egf {
        let end = (order + 1).min(self.coeffs.len());
        Egf {
            coeffs: self.coeffs[..end].to_vec(),
        }
    }
}
