//! Truncated power series in `t` with [`MultiPoly`] coefficients.
//!
//! A series of order `N` stores the ordinary coefficients `c_0..=c_N` and
//! represents `Σ c_n t^n + O(t^{N+1})`. Every operation is truncation
//! consistent: computing at order `N` and truncating to `M` gives the same
//! result as computing at order `M`.

use thiserror::Error;

use crate::exact::{factorial, GaussianRational, Rational};
use crate::poly::{MultiPoly, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("constant term must be a nonzero constant, found {0}")]
    NotAUnit(MultiPoly),
    #[error("constant term must vanish, found {0}")]
    NonzeroConstant(MultiPoly),
    #[error("constant term must be 1, found {0}")]
    ConstantNotOne(MultiPoly),
    #[error("coefficient index {index} exceeds truncation order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("cannot lower the order of an order-0 series")]
    OrderUnderflow,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Series {
    coeffs: Vec<MultiPoly>,
}

impl Series {
    /// Builds a series from `c_0..=c_N`; `coeffs` must be non-empty.
    pub fn new(coeffs: Vec<MultiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series holds at least c_0");
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> MultiPoly) -> Self {
        Series::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series::new(vec![MultiPoly::zero(); order + 1])
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(MultiPoly::one(), order)
    }

    /// The series `t` (just `0` at order 0).
    pub fn t(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = MultiPoly::one();
        }
        s
    }

    /// Builds from rational ordinary coefficients, padding with zeros up to `order`.
    pub fn from_rationals(values: &[Rational], order: usize) -> Self {
        Series::from_fn(order, |n| {
            values
                .get(n)
                .map(|r| MultiPoly::rational(r.clone()))
                .unwrap_or_default()
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&MultiPoly, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::IndexOutOfRange {
            index: n,
            order: self.order(),
        })
    }

    /// `n! · c_n`, the exponential-generating-function coefficient.
    pub fn egf_coeff(&self, n: usize) -> Result<MultiPoly, SeriesError> {
        Ok(self.coeff(n)?.scale_rational(&factorial(n)))
    }

    /// Drops every coefficient above `order`; extends with zeros if `order` is larger.
    pub fn truncate(&self, order: usize) -> Series {
        let mut coeffs: Vec<MultiPoly> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, MultiPoly::zero());
        Series { coeffs }
    }

    fn check_orders(&self, other: &Series) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_orders(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_orders(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Truncated Cauchy product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_orders(other)?;
        let order = self.order();
        let mut coeffs = vec![MultiPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(Series { coeffs })
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(|c| -c)
    }

    /// Multiplies every coefficient by `p`.
    pub fn scale(&self, p: &MultiPoly) -> Series {
        self.map_coeffs(|c| c * p)
    }

    pub fn scale_rational(&self, r: &Rational) -> Series {
        self.map_coeffs(|c| c.scale_rational(r))
    }

    pub fn map_coeffs(&self, f: impl FnMut(&MultiPoly) -> MultiPoly) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Substitutes `sym ↦ value` in every coefficient.
    pub fn substitute(&self, sym: Symbol, value: &MultiPoly) -> Series {
        self.map_coeffs(|c| c.substitute(sym, value))
    }

    fn unit_constant(&self) -> Result<GaussianRational, SeriesError> {
        match self.coeffs[0].as_constant() {
            Some(c) if !c.is_zero() => Ok(c),
            _ => Err(SeriesError::NotAUnit(self.coeffs[0].clone())),
        }
    }

    fn require_zero_constant(&self) -> Result<(), SeriesError> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(SeriesError::NonzeroConstant(self.coeffs[0].clone()))
        }
    }

    fn require_unit_one(&self) -> Result<(), SeriesError> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(SeriesError::ConstantNotOne(self.coeffs[0].clone()))
        }
    }

    /// Multiplicative inverse; `c_0` must be a nonzero constant.
    pub fn invert(&self) -> Result<Series, SeriesError> {
        let c0_inv = MultiPoly::constant(self.unit_constant()?.inv().expect("nonzero"));
        let order = self.order();
        let mut out: Vec<MultiPoly> = Vec::with_capacity(order + 1);
        out.push(c0_inv.clone());
        for n in 1..=order {
            let mut acc = MultiPoly::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() && !out[n - j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[n - j]);
                }
            }
            out.push(-(&acc * &c0_inv));
        }
        Ok(Series { coeffs: out })
    }

    /// Divides by `t`; the constant term must vanish and the order drops by one.
    pub fn div_t(&self) -> Result<Series, SeriesError> {
        self.require_zero_constant()?;
        if self.order() == 0 {
            return Err(SeriesError::OrderUnderflow);
        }
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `self(inner(t))` by Horner's rule; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series, SeriesError> {
        self.check_orders(inner)?;
        inner.require_zero_constant()?;
        let order = self.order();
        let mut acc = Series::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Logarithm of a series with `c_0 = 1`, via `n f_n = n h_n − Σ_{k<n} k f_k h_{n−k}`.
    #[allow(clippy::needless_range_loop)]
    pub fn log(&self) -> Result<Series, SeriesError> {
        self.require_unit_one()?;
        let order = self.order();
        let mut out: Vec<MultiPoly> = vec![MultiPoly::zero(); order + 1];
        for n in 1..=order {
            let mut acc = self.coeffs[n].scale_rational(&Rational::from(n as i64));
            for k in 1..n {
                if !out[k].is_zero() && !self.coeffs[n - k].is_zero() {
                    let term =
                        (&out[k] * &self.coeffs[n - k]).scale_rational(&Rational::from(k as i64));
                    acc -= &term;
                }
            }
            out[n] = acc.scale_rational(&Rational::new(1, n as i64).expect("n > 0"));
        }
        Ok(Series { coeffs: out })
    }

    /// Exponential of a series with `c_0 = 0`, via `n g_n = Σ_{k≤n} k f_k g_{n−k}`.
    pub fn exp(&self) -> Result<Series, SeriesError> {
        self.require_zero_constant()?;
        let order = self.order();
        let mut out: Vec<MultiPoly> = Vec::with_capacity(order + 1);
        out.push(MultiPoly::one());
        for n in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !out[n - k].is_zero() {
                    let term =
                        (&self.coeffs[k] * &out[n - k]).scale_rational(&Rational::from(k as i64));
                    acc += &term;
                }
            }
            out.push(acc.scale_rational(&Rational::new(1, n as i64).expect("n > 0")));
        }
        Ok(Series { coeffs: out })
    }

    /// `self^k` by repeated squaring.
    pub fn pow_int(&self, k: u32) -> Series {
        let mut acc = Series::one(self.order());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("equal orders");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("equal orders");
            }
        }
        acc
    }

    /// `self^α = exp(α · log self)` with `α` kept symbolic; `c_0` must be 1.
    pub fn pow_symbolic(&self) -> Result<Series, SeriesError> {
        let log = self.log()?;
        log.scale(&MultiPoly::alpha()).exp()
    }
}

/// Ordinary coefficients of `e^{t}`, i.e. `1/n!`.
pub fn exp_prototype(order: usize) -> Series {
    Series::from_fn(order, |n| {
        MultiPoly::rational(factorial(n).recip().expect("n! > 0"))
    })
}

/// Ordinary coefficients of `cos u`.
pub fn cos_prototype(order: usize) -> Series {
    Series::from_fn(order, |n| {
        if n % 2 == 1 {
            return MultiPoly::zero();
        }
        let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
        MultiPoly::rational(&Rational::from(sign) / &factorial(n))
    })
}

/// Ordinary coefficients of `sin u`.
pub fn sin_prototype(order: usize) -> Series {
    Series::from_fn(order, |n| {
        if n % 2 == 0 {
            return MultiPoly::zero();
        }
        let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
        MultiPoly::rational(&Rational::from(sign) / &factorial(n))
    })
}
