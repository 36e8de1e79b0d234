//! Stirling numbers, central factorial numbers, Bernoulli numbers of the
//! second kind and the polynomial builders that go with them.
//!
//! Triangles with a recurrence (`S₁`, `S₂`) are filled by recurrence; the
//! rest are read off generating functions. [`Tables`] memoizes all of them
//! behind a lock and can carry deliberate perturbations for mutation tests.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::cache::SeriesMemo;
use crate::exact::{factorial, GaussianRational, Rational};
use crate::families::deg_exp;
use crate::poly::{MultiPoly, Symbol};
use crate::series::Series;

/// Rows are precomputed at least this far so small lookups do not rebuild.
const MIN_TABLE_ROWS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    #[error("unknown table kind {0:?} (expected stirling1, stirling2, centralT or bernoulli2)")]
    UnknownKind(String),
    #[error("malformed perturbation {0:?} (expected kind:n:k:delta)")]
    BadPerturbation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    Stirling1,
    Stirling2,
    CentralT,
    Bernoulli2nd,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [
        TableKind::Stirling1,
        TableKind::Stirling2,
        TableKind::CentralT,
        TableKind::Bernoulli2nd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Stirling1 => "stirling1",
            TableKind::Stirling2 => "stirling2",
            TableKind::CentralT => "centralT",
            TableKind::Bernoulli2nd => "bernoulli2",
        }
    }

    /// Triangles are indexed by `(n, k)`; sequences by `n` alone.
    pub fn is_triangle(self) -> bool {
        !matches!(self, TableKind::Bernoulli2nd)
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableKind {
    type Err = CombinatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CombinatError::UnknownKind(s.to_string()))
    }
}

/// A triangle `T[n][k]` (`0 ≤ k ≤ n`) or a sequence `T[n][0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberTable {
    kind: TableKind,
    rows: Vec<Vec<Rational>>,
}

impl NumberTable {
    pub fn build(kind: TableKind, max_n: usize) -> Self {
        let rows = match kind {
            TableKind::Stirling1 => stirling_rows(max_n, |n, _k| -Rational::from(n as i64)),
            TableKind::Stirling2 => stirling_rows(max_n, |_n, k| Rational::from(k as i64)),
            TableKind::CentralT => central_t_rows(max_n),
            TableKind::Bernoulli2nd => bernoulli2_rows(max_n),
        };
        NumberTable { kind, rows }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Grows the table; rows already present are kept as they are.
    pub fn extend_to(&mut self, max_n: usize) {
        if max_n <= self.max_n() {
            return;
        }
        let fresh = NumberTable::build(self.kind, max_n);
        let have = self.rows.len();
        self.rows.extend(fresh.rows.into_iter().skip(have));
    }

    /// Entry `(n, k)`; zero outside the stored triangle. Sequences ignore `k`.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        let k = if self.kind.is_triangle() { k } else { 0 };
        self.rows
            .get(n)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn truncated(&self, max_n: usize) -> NumberTable {
        NumberTable {
            kind: self.kind,
            rows: self.rows.iter().take(max_n + 1).cloned().collect(),
        }
    }

    /// CSV with header `n,k,value`; sequences leave the `k` column empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,value\n");
        for (n, row) in self.rows.iter().enumerate() {
            if self.kind.is_triangle() {
                for (k, v) in row.iter().enumerate() {
                    out.push_str(&format!("{n},{k},{v}\n"));
                }
            } else {
                out.push_str(&format!("{n},,{}\n", row[0]));
            }
        }
        out
    }

    fn apply(&mut self, p: &Perturbation) {
        let k = if self.kind.is_triangle() { p.k } else { 0 };
        if let Some(slot) = self.rows.get_mut(p.n).and_then(|row| row.get_mut(k)) {
            *slot += &p.delta;
        }
    }
}

/// `S(n+1, k) = S(n, k−1) + w(n, k)·S(n, k)`.
fn stirling_rows(max_n: usize, weight: impl Fn(usize, usize) -> Rational) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::one()]];
    for n in 0..max_n {
        let prev = &rows[n];
        let at = |k: usize| prev.get(k).cloned().unwrap_or_else(Rational::zero);
        let next: Vec<Rational> = (0..=n + 1)
            .map(|k| {
                let left = if k == 0 { Rational::zero() } else { at(k - 1) };
                left + weight(n, k) * at(k)
            })
            .collect();
        rows.push(next);
    }
    rows
}

/// `T(n, k) = n!·[tⁿ] (e^{t/2} − e^{−t/2})^k / k!`, with the degenerate
/// exponentials taken at `λ = 0`.
fn central_t_rows(max_n: usize) -> Vec<Vec<Rational>> {
    let zero = MultiPoly::zero();
    let half = |sign: i64| {
        deg_exp(&MultiPoly::constant(GaussianRational::frac(sign, 2)), max_n)
            .expect("constant exponent")
            .substitute(Symbol::Lambda, &zero)
    };
    let diff = half(1).sub(&half(-1)).expect("equal orders");
    let mut rows: Vec<Vec<Rational>> = (0..=max_n).map(|n| vec![Rational::zero(); n + 1]).collect();
    let mut power = Series::one(max_n);
    for k in 0..=max_n {
        let inv_kfact = factorial(k).recip().expect("k! > 0");
        for (n, row) in rows.iter_mut().enumerate().skip(k) {
            let c = power.coeff(n).expect("in range");
            row[k] = rational_of(c) * &factorial(n) * &inv_kfact;
        }
        power = power.mul(&diff).expect("equal orders");
    }
    rows
}

/// `b_n = n!·[tⁿ] t / log(1 + t)`.
fn bernoulli2_rows(max_n: usize) -> Vec<Vec<Rational>> {
    let one_plus_t = Series::one(max_n + 1)
        .add(&Series::t(max_n + 1))
        .expect("equal orders");
    let series = one_plus_t
        .log()
        .and_then(|l| l.div_t())
        .and_then(|q| q.invert())
        .expect("log(1+t)/t is a unit");
    (0..=max_n)
        .map(|n| vec![rational_of(series.coeff(n).expect("in range")) * &factorial(n)])
        .collect()
}

fn rational_of(p: &MultiPoly) -> Rational {
    let c = p.as_constant().expect("numeric table entry");
    debug_assert!(c.is_real());
    c.re
}

/// A deliberate offset added to one table entry, used to check that the
/// identity checks are sensitive to the tables they consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub kind: TableKind,
    pub n: usize,
    pub k: usize,
    pub delta: Rational,
}

impl FromStr for Perturbation {
    type Err = CombinatError;

    /// Parses `kind:n:k:delta`, e.g. `stirling1:4:2:1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CombinatError::BadPerturbation(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, n, k, delta] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Perturbation {
            kind: kind.parse()?,
            n: n.parse().map_err(|_| bad())?,
            k: k.parse().map_err(|_| bad())?,
            delta: delta.parse().map_err(|_| bad())?,
        })
    }
}

/// Thread-safe memo of every number table plus the degenerate central
/// factorial series.
#[derive(Debug, Default)]
pub struct Tables {
    tables: RwLock<HashMap<TableKind, Arc<NumberTable>>>,
    degen_central: SeriesMemo<(usize, bool)>,
    perturbations: Vec<Perturbation>,
}

impl Tables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_perturbations(perturbations: Vec<Perturbation>) -> Self {
        Tables {
            perturbations,
            ..Self::default()
        }
    }

    pub fn perturbations(&self) -> &[Perturbation] {
        &self.perturbations
    }

    fn table_covering(&self, kind: TableKind, n: usize) -> Arc<NumberTable> {
        if let Some(t) = self.tables.read().expect("table lock poisoned").get(&kind) {
            if t.max_n() >= n {
                return t.clone();
            }
        }
        let mut guard = self.tables.write().expect("table lock poisoned");
        let target = n.max(MIN_TABLE_ROWS);
        let entry = guard
            .entry(kind)
            .or_insert_with(|| Arc::new(NumberTable::build(kind, target)));
        if entry.max_n() < n {
            let mut grown = (**entry).clone();
            grown.extend_to(target.max(2 * entry.max_n()));
            *entry = Arc::new(grown);
        }
        entry.clone()
    }

    fn entry(&self, kind: TableKind, n: usize, k: usize) -> Rational {
        if kind.is_triangle() && k > n {
            return Rational::zero();
        }
        let mut v = self.table_covering(kind, n).get(n, k);
        for p in &self.perturbations {
            if p.kind == kind && p.n == n && (!kind.is_triangle() || p.k == k) {
                v += &p.delta;
            }
        }
        v
    }

    /// Signed Stirling number of the first kind.
    pub fn stirling1(&self, n: usize, k: usize) -> Rational {
        self.entry(TableKind::Stirling1, n, k)
    }

    pub fn stirling2(&self, n: usize, k: usize) -> Rational {
        self.entry(TableKind::Stirling2, n, k)
    }

    /// Central factorial number of the second kind `T(n, k)`.
    pub fn central_t(&self, n: usize, k: usize) -> Rational {
        self.entry(TableKind::CentralT, n, k)
    }

    /// Bernoulli number of the second kind `b_n`.
    pub fn bernoulli2nd(&self, n: usize) -> Rational {
        self.entry(TableKind::Bernoulli2nd, n, 0)
    }

    /// Snapshot of rows `0..=max_n` with any perturbations applied.
    pub fn table(&self, kind: TableKind, max_n: usize) -> NumberTable {
        let mut t = self.table_covering(kind, max_n).truncated(max_n);
        for p in self.perturbations.iter().filter(|p| p.kind == kind) {
            t.apply(p);
        }
        t
    }

    /// `T_λ(n, k | x) = n!·[tⁿ] (e_λ^{1/2}(t) − e_λ^{−1/2}(t))^k / k! · e_λ^x(t)`;
    /// without `x` this is `T_λ(n, k)`.
    pub fn degen_central_t(&self, n: usize, k: usize, with_x: bool) -> MultiPoly {
        if k > n {
            return MultiPoly::zero();
        }
        let series = self
            .degen_central
            .get_or_build(&(k, with_x), n.max(MIN_TABLE_ROWS), |order| {
                degen_central_series(k, with_x, order)
            })
            .expect("constant exponents are linear");
        series.egf_coeff(n).expect("order covers n")
    }
}

fn degen_central_series(
    k: usize,
    with_x: bool,
    order: usize,
) -> Result<Series, crate::families::FamilyError> {
    let half = |sign: i64| deg_exp(&MultiPoly::constant(GaussianRational::frac(sign, 2)), order);
    let diff = half(1)?.sub(&half(-1)?)?;
    let mut s = diff
        .pow_int(k as u32)
        .scale_rational(&factorial(k).recip().expect("k! > 0"));
    if with_x {
        s = s.mul(&deg_exp(&MultiPoly::x(), order)?)?;
    }
    Ok(s)
}

/// Generalized falling factorial `(w)_{n,λ} = w(w − λ)⋯(w − (n−1)λ)`.
pub fn falling_deg(w: &MultiPoly, n: usize) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for j in 0..n {
        let factor = w - &MultiPoly::lambda().scale_rational(&Rational::from(j as i64));
        acc = &acc * &factor;
    }
    acc
}

/// Central factorial monomial `x^{[n]} = x(x + n/2 − 1)(x + n/2 − 2)⋯(x − n/2 + 1)`.
pub fn central_factorial_monomial(n: usize) -> MultiPoly {
    if n == 0 {
        return MultiPoly::one();
    }
    let half_n = Rational::new(n as i64, 2).expect("nonzero");
    let mut acc = MultiPoly::x();
    for j in 1..n {
        let shift = &half_n - &Rational::from(j as i64);
        acc = &acc * &(&MultiPoly::x() + &MultiPoly::rational(shift));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    /// Coefficients of x(x−1)⋯(x−n+1) by direct expansion, independent of the recurrence.
    fn falling_factorial_coeffs(n: usize) -> Vec<i64> {
        let mut coeffs = vec![1i64];
        for j in 0..n as i64 {
            let mut next = vec![0i64; coeffs.len() + 1];
            for (d, c) in coeffs.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= j * c;
            }
            coeffs = next;
        }
        coeffs
    }

    /// Number of set partitions of an n-set into k blocks by enumeration of
    /// restricted growth strings.
    fn count_partitions(n: usize, k: usize) -> i64 {
        fn go(pos: usize, n: usize, used: usize, k: usize) -> i64 {
            if pos == n {
                return (used == k) as i64;
            }
            let mut total = 0;
            for block in 0..=used {
                if block < k {
                    total += go(pos + 1, n, used.max(block + 1), k);
                }
            }
            total
        }
        if n == 0 {
            return (k == 0) as i64;
        }
        go(0, n, 0, k)
    }

    #[test]
    fn stirling1_examples() {
        let t = Tables::new();
        assert_eq!(t.stirling1(0, 0), Rational::one());
        assert_eq!(t.stirling1(3, 2), Rational::from(-3));
        assert_eq!(t.stirling1(4, 2), Rational::from(11));
        assert_eq!(t.stirling1(2, 5), Rational::zero());
    }

    #[test]
    fn stirling1_matches_expanded_falling_factorial() {
        let t = Tables::new();
        for n in 0..=10 {
            let coeffs = falling_factorial_coeffs(n);
            for (k, &c) in coeffs.iter().enumerate() {
                assert_eq!(t.stirling1(n, k), Rational::from(c), "S1({n},{k})");
            }
        }
    }

    #[test]
    fn stirling2_examples() {
        let t = Tables::new();
        assert_eq!(t.stirling2(0, 0), Rational::one());
        assert_eq!(t.stirling2(3, 2), Rational::from(3));
        assert_eq!(t.stirling2(4, 2), Rational::from(7));
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(
                    t.stirling2(n, k),
                    Rational::from(count_partitions(n, k)),
                    "S2({n},{k})"
                );
            }
        }
    }

    #[test]
    fn central_t_examples() {
        let t = Tables::new();
        assert_eq!(t.central_t(1, 1), Rational::one());
        assert_eq!(t.central_t(2, 1), Rational::zero());
        assert_eq!(t.central_t(3, 1), q(1, 4));
        assert_eq!(t.central_t(4, 2), Rational::one());
    }

    #[test]
    fn degen_central_t_examples() {
        let t = Tables::new();
        assert!(t.degen_central_t(1, 1, false).is_one());
        assert_eq!(t.degen_central_t(2, 1, false), -MultiPoly::lambda());
        for n in 0..=8 {
            for k in 0..=n {
                let at_zero = t
                    .degen_central_t(n, k, false)
                    .substitute(Symbol::Lambda, &MultiPoly::zero());
                assert_eq!(
                    at_zero,
                    MultiPoly::rational(t.central_t(n, k)),
                    "T({n},{k})"
                );
            }
        }
        assert!(t.degen_central_t(2, 3, true).is_zero());
        // T_λ(1,1|x) = 1 and T_λ(2,1|x) = 2x − λ from (t − λt²/2)(1 + xt).
        assert!(t.degen_central_t(1, 1, true).is_one());
        let expected = &MultiPoly::x().scale_rational(&Rational::from(2)) - &MultiPoly::lambda();
        assert_eq!(t.degen_central_t(2, 1, true), expected);
    }

    #[test]
    fn bernoulli2_examples() {
        let t = Tables::new();
        assert_eq!(t.bernoulli2nd(0), Rational::one());
        assert_eq!(t.bernoulli2nd(1), q(1, 2));
        assert_eq!(t.bernoulli2nd(2), q(-1, 6));
        // t/log(1+t) = 1 + t/2 − t²/12 + t³/24 − 19t⁴/720 + …
        assert_eq!(t.bernoulli2nd(3), q(1, 4));
        assert_eq!(t.bernoulli2nd(4), q(-19, 30));
    }

    #[test]
    fn falling_deg_examples() {
        assert!(falling_deg(&MultiPoly::x(), 0).is_one());
        let x = MultiPoly::x();
        assert_eq!(falling_deg(&x, 2), &x.pow(2) - &(&MultiPoly::lambda() * &x));
        let half = MultiPoly::rational(q(1, 2));
        assert_eq!(
            falling_deg(&half, 2),
            &MultiPoly::rational(q(1, 4)) - &MultiPoly::lambda().scale_rational(&q(1, 2))
        );
        assert_eq!(
            falling_deg(&half, 2),
            falling_deg(&x, 2).substitute(Symbol::X, &half)
        );
    }

    #[test]
    fn central_factorial_monomial_examples() {
        let x = MultiPoly::x();
        assert!(central_factorial_monomial(0).is_one());
        assert_eq!(central_factorial_monomial(1), x);
        assert_eq!(central_factorial_monomial(2), x.pow(2));
        assert_eq!(
            central_factorial_monomial(3),
            &x.pow(3) - &x.scale_rational(&q(1, 4))
        );
    }

    #[test]
    fn table_extension_is_append_only() {
        for kind in TableKind::ALL {
            let mut t = NumberTable::build(kind, 5);
            let before = t.clone();
            t.extend_to(11);
            assert_eq!(t.max_n(), 11);
            assert_eq!(t.truncated(5), before);
            assert_eq!(t, NumberTable::build(kind, 11));
        }
    }

    #[test]
    fn csv_export() {
        let t = Tables::new();
        assert_eq!(
            t.table(TableKind::Bernoulli2nd, 2).to_csv(),
            "n,k,value\n0,,1\n1,,1/2\n2,,-1/6\n"
        );
        assert_eq!(
            t.table(TableKind::Stirling1, 2).to_csv(),
            "n,k,value\n0,0,1\n1,0,0\n1,1,1\n2,0,0\n2,1,-1\n2,2,1\n"
        );
    }

    #[test]
    fn perturbation_hits_one_entry() {
        let p: Perturbation = "stirling1:4:2:1".parse().unwrap();
        assert_eq!(p.delta, Rational::one());
        let t = Tables::with_perturbations(vec![p]);
        assert_eq!(t.stirling1(4, 2), Rational::from(12));
        assert_eq!(t.stirling1(4, 3), Rational::from(-6));
        assert_eq!(
            t.table(TableKind::Stirling1, 4).get(4, 2),
            Rational::from(12)
        );
        assert!("stirling1:4:2".parse::<Perturbation>().is_err());
        assert!("euler:1:1:1".parse::<Perturbation>().is_err());
    }
}
