//! Truncated power series with [`MultiPoly`] coefficients.
//!
//! A series in `x` of order `T` stores coefficients of `x^0 ..= x^T`; anything
//! at `x^(T+1)` or beyond is unknown, and asking for it is an error.

use std::fmt;

use num_traits::One;

use super::poly::MultiPoly;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    var: String,
    order: usize,
    coeffs: Vec<MultiPoly>,
}

impl Series {
    /// Builds a series of the given order. Missing high coefficients are zero;
    /// coefficients past `order` are discarded.
    pub fn new(var: impl Into<String>, order: usize, mut coeffs: Vec<MultiPoly>) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        Series { var: var.into(), order, coeffs }
    }

    pub fn zero(var: impl Into<String>, order: usize) -> Self {
        Self::new(var, order, Vec::new())
    }

    pub fn one(var: impl Into<String>, order: usize) -> Self {
        Self::new(var, order, vec![MultiPoly::one()])
    }

    pub fn var_name(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<&MultiPoly> {
        self.coeffs.get(k).ok_or(Error::PrecisionExceeded { requested: k, order: self.order })
    }

    /// Lowers the truncation order. Raising it is not possible.
    pub fn truncate(&self, order: usize) -> Result<Series> {
        if order > self.order {
            return Err(Error::PrecisionExceeded { requested: order, order: self.order });
        }
        Ok(Series::new(self.var.clone(), order, self.coeffs[..=order].to_vec()))
    }

    fn check_same_var(&self, other: &Series) -> Result<()> {
        if self.var != other.var {
            return Err(Error::SeriesMismatch(format!(
                "expansion variables `{}` and `{}` differ",
                self.var, other.var
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_same_var(other)?;
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(Series::new(self.var.clone(), order, coeffs))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_same_var(other)?;
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(Series::new(self.var.clone(), order, coeffs))
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_same_var(other)?;
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero() && !other.coeffs[k - i].is_zero())
                    .map(|i| &self.coeffs[i] * &other.coeffs[k - i])
                    .sum()
            })
            .collect();
        Ok(Series::new(self.var.clone(), order, coeffs))
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { var: self.var.clone(), order: self.order, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    /// `exp(self)` via `k f_k = Σ_{i=1..k} i s_i f_{k-i}` (from `f' = s' f`).
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut f: Vec<MultiPoly> = Vec::with_capacity(self.order + 1);
        f.push(MultiPoly::one());
        for k in 1..=self.order {
            let mut acc = MultiPoly::zero();
            for i in 1..=k {
                let s = &self.coeffs[i];
                if s.is_zero() || f[k - i].is_zero() {
                    continue;
                }
                acc += &(s * &f[k - i]).scale(&int(i as i64));
            }
            f.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Series::new(self.var.clone(), self.order, f))
    }

    /// `log(self)` via `k L_k = k s_k - Σ_{i=1..k-1} i L_i s_{k-i}` (from `s L' = s'`).
    pub fn log(&self) -> Result<Series> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let mut l: Vec<MultiPoly> = Vec::with_capacity(self.order + 1);
        l.push(MultiPoly::zero());
        for k in 1..=self.order {
            let mut acc = self.coeffs[k].scale(&int(k as i64));
            for i in 1..k {
                if l[i].is_zero() || self.coeffs[k - i].is_zero() {
                    continue;
                }
                acc -= &(&l[i] * &self.coeffs[k - i]).scale(&int(i as i64));
            }
            l.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Series::new(self.var.clone(), self.order, l))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == MultiPoly::constant(Rational::one()) && self.coeffs[1..].iter().all(MultiPoly::is_zero)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}; O({}^{})](", self.var, self.var, self.order + 1)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " [{}^{}]: {} ;", self.var, k, c)?;
            }
        }
        write!(f, ")")
    }
}
