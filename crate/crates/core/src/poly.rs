//! Sparse multivariate polynomials over `Q(i)` in the fixed symbols
//! `x`, `y`, `λ`, `α`.
//!
//! Terms live in a `BTreeMap` keyed by exponent tuples, so two polynomials
//! are equal exactly when their term maps are equal. The canonical
//! (serialization) order is lexicographic on `(x, y, λ, α)`, highest first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no value assigned to {0}")]
    MissingAssignment(Symbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    X,
    Y,
    Lambda,
    Alpha,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::X, Symbol::Y, Symbol::Lambda, Symbol::Alpha];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Name used in JSON and CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::Lambda => "lambda",
            Symbol::Alpha => "alpha",
        }
    }

    pub fn latex(self) -> &'static str {
        match self {
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::Lambda => "\\lambda",
            Symbol::Alpha => "\\alpha",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent tuple ordered `(x, y, λ, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn var(sym: Symbol) -> Self {
        let mut e = [0; 4];
        e[sym.index()] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0[sym.index()]
    }

    pub fn with_exponent(mut self, sym: Symbol, e: u32) -> Self {
        self.0[sym.index()] = e;
        self
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }
}

/// A polynomial in `x, y, λ, α` with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(GaussianRational::from_integer(n))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(sym))
    }

    pub fn x() -> Self {
        Self::var(Symbol::X)
    }

    pub fn y() -> Self {
        Self::var(Symbol::Y)
    }

    pub fn lambda() -> Self {
        Self::var(Symbol::Lambda)
    }

    pub fn alpha() -> Self {
        Self::var(Symbol::Alpha)
    }

    /// `sym^e`.
    pub fn var_pow(sym: Symbol, e: u32) -> Self {
        Self::term(GaussianRational::one(), Monomial::ONE.with_exponent(sym, e))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, merging repeats.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (GaussianRational, Monomial)>,
    {
        let mut p = MultiPoly::zero();
        for (c, m) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no non-constant term.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in canonical order (lexicographic on `(x, y, λ, α)`, highest first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter().rev()
    }

    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(sym))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(sym) > 0)
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// Imaginary parts of all coefficients, as a real polynomial.
    pub fn imag_part(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (GaussianRational::real(c.im.clone()), *m)),
        )
    }

    pub fn real_part(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (GaussianRational::real(c.re.clone()), *m)),
        )
    }

    /// Conjugates every coefficient.
    pub fn conj(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> MultiPoly {
        if r.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v.scale(r))).collect(),
        }
    }

    /// Multiplies by the monomial `sym^e`.
    pub fn shift(&self, sym: Symbol, e: u32) -> MultiPoly {
        let step = Monomial::ONE.with_exponent(sym, e);
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.times(&step), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces every occurrence of `sym` by `value` and re-expands.
    ///
    /// The replacement is simultaneous, so `value` may itself mention `sym`
    /// (`x ↦ x + iy` is the common case).
    pub fn substitute(&self, sym: Symbol, value: &MultiPoly) -> MultiPoly {
        if !self.contains(sym) {
            return self.clone();
        }
        if let Some(c) = value.as_constant() {
            return self.substitute_constant(sym, &c);
        }
        let max = self.degree_in(sym) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(MultiPoly::one());
        for j in 1..=max {
            let next = &powers[j - 1] * value;
            powers.push(next);
        }
        // Group by the remaining monomial so each power of `value` is used once per group.
        let mut grouped: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(sym);
            grouped
                .entry(e)
                .or_default()
                .add_term(m.with_exponent(sym, 0), c);
        }
        let mut out = MultiPoly::zero();
        for (e, rest) in grouped {
            out += &(&rest * &powers[e as usize]);
        }
        out
    }

    fn substitute_constant(&self, sym: Symbol, c: &GaussianRational) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut powers: Vec<GaussianRational> = vec![GaussianRational::one()];
        for (m, v) in &self.terms {
            let e = m.exponent(sym) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * c;
                powers.push(next);
            }
            out.add_term(m.with_exponent(sym, 0), &(v * &powers[e]));
        }
        out
    }

    /// Evaluates at a point; every symbol present must be assigned.
    pub fn eval(
        &self,
        point: &HashMap<Symbol, GaussianRational>,
    ) -> Result<GaussianRational, PolyError> {
        for sym in Symbol::ALL {
            if self.contains(sym) && !point.contains_key(&sym) {
                return Err(PolyError::MissingAssignment(sym));
            }
        }
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for sym in Symbol::ALL {
                let e = m.exponent(sym);
                if e > 0 {
                    let base = &point[&sym];
                    for _ in 0..e {
                        v = &v * base;
                    }
                }
            }
            total += &v;
        }
        Ok(total)
    }

    /// LaTeX rendering in canonical order with `\frac` for non-integer coefficients.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            let (negative, coeff) = latex_coefficient(c, m.is_one());
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&coeff);
            for sym in Symbol::ALL {
                match m.exponent(sym) {
                    0 => {}
                    1 => out.push_str(sym.latex()),
                    e => out.push_str(&format!("{}^{{{}}}", sym.latex(), e)),
                }
            }
        }
        out
    }

    /// CSV with header `x,y,lambda,alpha,re,im`, one monomial per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,lambda,alpha,re,im\n");
        for (m, c) in self.terms() {
            let [ex, ey, el, ea] = m.0;
            out.push_str(&format!("{ex},{ey},{el},{ea},{},{}\n", c.re, c.im));
        }
        out
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Returns the sign and the unsigned coefficient text (empty for a bare unit).
fn latex_coefficient(c: &GaussianRational, constant_term: bool) -> (bool, String) {
    let unit_text = |mag: &Rational| {
        if mag.is_one() && !constant_term {
            String::new()
        } else {
            latex_rational(mag)
        }
    };
    if c.im.is_zero() {
        (c.re.is_negative(), unit_text(&c.re.abs()))
    } else if c.re.is_zero() {
        let mag = c.im.abs();
        let text = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{}i", latex_rational(&mag))
        };
        (c.im.is_negative(), text)
    } else {
        let re = if c.re.is_negative() {
            format!("-{}", latex_rational(&c.re.abs()))
        } else {
            latex_rational(&c.re)
        };
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im_mag = c.im.abs();
        let im = if im_mag.is_one() {
            "i".to_string()
        } else {
            format!("{}i", latex_rational(&im_mag))
        };
        (false, format!("\\left({re} {sign} {im}\\right)"))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if c.is_real() {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({c})")?;
            }
            for sym in Symbol::ALL {
                match m.exponent(sym) {
                    0 => {}
                    1 => write!(f, "*{sym}")?,
                    e => write!(f, "*{sym}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'b> Add<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'b MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'b> Sub<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'b MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'b> Mul<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'b MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let mut acc: HashMap<Monomial, GaussianRational> =
            HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                acc.entry(ma.times(mb))
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, &-c);
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<GaussianRational> for MultiPoly {
    fn from(c: GaussianRational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Rational> for MultiPoly {
    fn from(r: Rational) -> Self {
        MultiPoly::rational(r)
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        let mut acc = MultiPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    x: u32,
    y: u32,
    lambda: u32,
    alpha: u32,
    re: Rational,
    im: Rational,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (m, c) in self.terms() {
            let [x, y, lambda, alpha] = m.0;
            seq.serialize_element(&TermRecord {
                x,
                y,
                lambda,
                alpha,
                re: c.re.clone(),
                im: c.im.clone(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for r in records {
            let m = Monomial([r.x, r.y, r.lambda, r.alpha]);
            let c = GaussianRational::new(r.re, r.im);
            if c.is_zero() {
                return Err(de::Error::custom(format!(
                    "zero coefficient stored for {m:?}"
                )));
            }
            if terms.insert(m, c).is_some() {
                return Err(de::Error::custom(format!("duplicate monomial {m:?}")));
            }
        }
        Ok(MultiPoly { terms })
    }
}
