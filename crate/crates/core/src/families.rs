//! Generating functions for the type 2 (degenerate) Bernoulli and Euler
//! families, their complex-variable versions and the cosine/sine splits.
//!
//! Every family is `kernel(t) · e_λ^w(t) · {1, cos_λ^{(y)}(t), sin_λ^{(y)}(t)}`
//! where `w` is a linear exponent (default `x`, or `x + iy` for the
//! complex-variable families). Classical families are the degenerate ones
//! with `λ ↦ 0` applied coefficient-wise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cache::SeriesMemo;
use crate::combinat::falling_deg;
use crate::exact::{factorial, GaussianRational, Rational};
use crate::poly::{MultiPoly, Symbol};
use crate::series::{cos_prototype, sin_prototype, Series, SeriesError};

/// Truncation order used when no larger order is requested (`n_max = 12`, plus one).
pub const DEFAULT_ORDER: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("exponent must be linear in x and y, got {0}")]
    NonLinearExponent(MultiPoly),
    #[error("invalid family configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `e_λ^w(t) = Σ (w)_{n,λ} tⁿ/n!` for an exponent `w` linear in `x, y`.
pub fn deg_exp(w: &MultiPoly, order: usize) -> Result<Series, FamilyError> {
    let linear = !w.contains(Symbol::Lambda) && !w.contains(Symbol::Alpha) && w.total_degree() <= 1;
    if !linear {
        return Err(FamilyError::NonLinearExponent(w.clone()));
    }
    Ok(Series::from_fn(order, |n| {
        falling_deg(w, n).scale_rational(&factorial(n).recip().expect("n! > 0"))
    }))
}

/// `log(1 + λt)/λ = Σ_{n≥1} (−λ)^{n−1} tⁿ/n`.
pub fn deg_log(order: usize) -> Series {
    Series::from_fn(order, |n| {
        if n == 0 {
            return MultiPoly::zero();
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        MultiPoly::var_pow(Symbol::Lambda, (n - 1) as u32)
            .scale_rational(&Rational::new(sign, n as i64).expect("n > 0"))
    })
}

/// `cos_λ^{(y)}(t) = cos(y·log(1 + λt)/λ)`.
pub fn deg_cos(order: usize) -> Series {
    let arg = deg_log(order).scale(&MultiPoly::y());
    cos_prototype(order)
        .compose(&arg)
        .expect("argument has zero constant term")
}

/// `sin_λ^{(y)}(t) = sin(y·log(1 + λt)/λ)`.
pub fn deg_sin(order: usize) -> Series {
    let arg = deg_log(order).scale(&MultiPoly::y());
    sin_prototype(order)
        .compose(&arg)
        .expect("argument has zero constant term")
}

/// `(e_λ^{1/2}(t) − e_λ^{−1/2}(t)) / t`, computed from order `order + 1`.
fn central_difference_over_t(order: usize) -> Result<Series, FamilyError> {
    let plus = deg_exp(
        &MultiPoly::constant(GaussianRational::frac(1, 2)),
        order + 1,
    )?;
    let minus = deg_exp(
        &MultiPoly::constant(GaussianRational::frac(-1, 2)),
        order + 1,
    )?;
    Ok(plus.sub(&minus)?.div_t()?)
}

/// `t / (e_λ^{1/2}(t) − e_λ^{−1/2}(t))`.
pub fn kernel_b(order: usize) -> Result<Series, FamilyError> {
    Ok(central_difference_over_t(order)?.invert()?)
}

/// `2 / (e_λ^{1/2}(t) + e_λ^{−1/2}(t))`.
pub fn kernel_e(order: usize) -> Result<Series, FamilyError> {
    let plus = deg_exp(&MultiPoly::constant(GaussianRational::frac(1, 2)), order)?;
    let minus = deg_exp(&MultiPoly::constant(GaussianRational::frac(-1, 2)), order)?;
    Ok(plus
        .add(&minus)?
        .invert()?
        .scale_rational(&Rational::from(2)))
}

/// Carlitz's kernel `t / (e_λ(t) − 1)`.
pub fn kernel_carlitz(order: usize) -> Result<Series, FamilyError> {
    let e = deg_exp(&MultiPoly::one(), order + 1)?;
    Ok(e.sub(&Series::one(order + 1))?.div_t()?.invert()?)
}

/// Order of the Bernoulli kernel in the order-α families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaMode {
    Symbolic,
    Integer(i64),
}

impl fmt::Display for AlphaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaMode::Symbolic => f.write_str("symbolic"),
            AlphaMode::Integer(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for AlphaMode {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "symbolic" {
            return Ok(AlphaMode::Symbolic);
        }
        s.parse::<i64>().map(AlphaMode::Integer).map_err(|_| {
            FamilyError::InvalidConfig(format!(
                "alpha must be \"symbolic\" or an integer, got {s:?}"
            ))
        })
    }
}

/// The Bernoulli kernel raised to the power α.
///
/// Negative integer orders use `((e_λ^{1/2} − e_λ^{−1/2})/t)^{|m|}` directly
/// rather than inverting the kernel.
pub fn kernel_b_alpha(order: usize, mode: AlphaMode) -> Result<Series, FamilyError> {
    match mode {
        AlphaMode::Symbolic => Ok(kernel_b(order)?.pow_symbolic()?),
        AlphaMode::Integer(m) if m >= 0 => Ok(kernel_b(order)?.pow_int(m as u32)),
        AlphaMode::Integer(m) => {
            Ok(central_difference_over_t(order)?.pow_int(m.unsigned_abs() as u32))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    B2Classical,
    E2Classical,
    CarlitzBeta,
    B2Degen,
    E2Degen,
    B2DegenComplex,
    E2DegenComplex,
    CosB,
    SinB,
    CosE,
    SinE,
    BAlpha,
    CosBAlpha,
    SinBAlpha,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Bernoulli,
    Euler,
    Carlitz,
    BernoulliAlpha,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trig {
    None,
    Cos,
    Sin,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 14] = [
        FamilyKind::B2Classical,
        FamilyKind::E2Classical,
        FamilyKind::CarlitzBeta,
        FamilyKind::B2Degen,
        FamilyKind::E2Degen,
        FamilyKind::B2DegenComplex,
        FamilyKind::E2DegenComplex,
        FamilyKind::CosB,
        FamilyKind::SinB,
        FamilyKind::CosE,
        FamilyKind::SinE,
        FamilyKind::BAlpha,
        FamilyKind::CosBAlpha,
        FamilyKind::SinBAlpha,
    ];

    pub fn name(self) -> &'static str {
        use FamilyKind::*;
        match self {
            B2Classical => "B2_classical",
            E2Classical => "E2_classical",
            CarlitzBeta => "Carlitz_beta",
            B2Degen => "B2_degen",
            E2Degen => "E2_degen",
            B2DegenComplex => "B2_degen_complex",
            E2DegenComplex => "E2_degen_complex",
            CosB => "CosB",
            SinB => "SinB",
            CosE => "CosE",
            SinE => "SinE",
            BAlpha => "B_alpha",
            CosBAlpha => "CosB_alpha",
            SinBAlpha => "SinB_alpha",
        }
    }

    pub fn takes_alpha(self) -> bool {
        matches!(
            self,
            FamilyKind::BAlpha | FamilyKind::CosBAlpha | FamilyKind::SinBAlpha
        )
    }

    pub fn is_complex(self) -> bool {
        matches!(
            self,
            FamilyKind::B2DegenComplex | FamilyKind::E2DegenComplex
        )
    }

    pub fn is_classical(self) -> bool {
        matches!(self, FamilyKind::B2Classical | FamilyKind::E2Classical)
    }

    /// `x + iy` for the complex-variable families, `x` otherwise.
    pub fn default_exponent(self) -> MultiPoly {
        if self.is_complex() {
            &MultiPoly::x() + &MultiPoly::y().scale(&GaussianRational::i())
        } else {
            MultiPoly::x()
        }
    }

    fn kernel(self) -> Kernel {
        use FamilyKind::*;
        match self {
            B2Classical | B2Degen | B2DegenComplex | CosB | SinB => Kernel::Bernoulli,
            E2Classical | E2Degen | E2DegenComplex | CosE | SinE => Kernel::Euler,
            CarlitzBeta => Kernel::Carlitz,
            BAlpha | CosBAlpha | SinBAlpha => Kernel::BernoulliAlpha,
        }
    }

    fn trig(self) -> Trig {
        use FamilyKind::*;
        match self {
            CosB | CosE | CosBAlpha => Trig::Cos,
            SinB | SinE | SinBAlpha => Trig::Sin,
            _ => Trig::None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// A fully specified family: kind, exponent of `e_λ^w(t)`, and order α.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyId {
    pub kind: FamilyKind,
    pub exponent: Option<MultiPoly>,
    pub alpha: Option<AlphaMode>,
}

impl FamilyId {
    pub fn new(kind: FamilyKind) -> Self {
        FamilyId {
            kind,
            exponent: None,
            alpha: None,
        }
    }

    pub fn with_exponent(mut self, exponent: MultiPoly) -> Self {
        self.exponent = Some(exponent);
        self
    }

    pub fn with_alpha(mut self, alpha: AlphaMode) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn exponent(&self) -> MultiPoly {
        self.exponent
            .clone()
            .unwrap_or_else(|| self.kind.default_exponent())
    }

    /// The order α in effect; symbolic when unset on an order-α family.
    pub fn alpha_mode(&self) -> Option<AlphaMode> {
        if self.kind.takes_alpha() {
            Some(self.alpha.unwrap_or(AlphaMode::Symbolic))
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.alpha.is_some() && !self.kind.takes_alpha() {
            return Err(FamilyError::InvalidConfig(format!(
                "{} does not take an order alpha",
                self.kind
            )));
        }
        let w = self.exponent();
        if w.contains(Symbol::Lambda) || w.contains(Symbol::Alpha) || w.total_degree() > 1 {
            return Err(FamilyError::NonLinearExponent(w));
        }
        Ok(())
    }

    /// Canonical key: defaults made explicit so equal families share a cache slot.
    fn normalized(&self) -> FamilyId {
        FamilyId {
            kind: self.kind,
            exponent: Some(self.exponent()),
            alpha: self.alpha_mode(),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(w) = &self.exponent {
            write!(f, "[{w}]")?;
        }
        if let Some(a) = self.alpha_mode() {
            write!(f, "^({a})")?;
        }
        Ok(())
    }
}

/// Builds a family's generating function at truncation `order`, uncached.
pub fn family_series(id: &FamilyId, order: usize) -> Result<Series, FamilyError> {
    id.validate()?;
    let kernel = match id.kind.kernel() {
        Kernel::Bernoulli => kernel_b(order)?,
        Kernel::Euler => kernel_e(order)?,
        Kernel::Carlitz => kernel_carlitz(order)?,
        Kernel::BernoulliAlpha => kernel_b_alpha(order, id.alpha_mode().expect("order-α family"))?,
    };
    let mut s = kernel.mul(&deg_exp(&id.exponent(), order)?)?;
    match id.kind.trig() {
        Trig::None => {}
        Trig::Cos => s = s.mul(&deg_cos(order))?,
        Trig::Sin => s = s.mul(&deg_sin(order))?,
    }
    if id.kind.is_classical() {
        s = s.substitute(Symbol::Lambda, &MultiPoly::zero());
    }
    Ok(s)
}

/// Cache of family generating functions keyed by family; a stored series
/// serves every request up to its order.
#[derive(Debug, Default)]
pub struct Families {
    memo: SeriesMemo<FamilyId>,
}

impl Families {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn series(&self, id: &FamilyId, order: usize) -> Result<Arc<Series>, FamilyError> {
        id.validate()?;
        let key = id.normalized();
        self.memo
            .get_or_build(&key, order, |o| family_series(&key, o))
    }

    /// `P_n = n!·[tⁿ]` of the family's generating function.
    pub fn poly(&self, id: &FamilyId, n: usize) -> Result<MultiPoly, FamilyError> {
        let s = self.series(id, n.max(DEFAULT_ORDER))?;
        Ok(s.egf_coeff(n)?)
    }

    /// Convenience for the default exponent and order.
    pub fn poly_of(&self, kind: FamilyKind, n: usize) -> MultiPoly {
        self.poly(&FamilyId::new(kind), n)
            .expect("default family configuration is valid")
    }

    pub fn cached(&self) -> usize {
        self.memo.len()
    }
}
