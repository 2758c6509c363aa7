//! Truncated power series in `q` with exact rational coefficients, lazily
//! described Euler products, Eisenstein series, and certified evaluation at
//! `q = 1/p`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat, Prime, Rational};
use crate::error::{Error, Result};

/// `|c_n| ≤ constant · (n+1)^degree` for every `n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthBound {
    pub constant: Rational,
    pub degree: u32,
}

impl GrowthBound {
    pub fn new(constant: Rational, degree: u32) -> Self {
        GrowthBound { constant, degree }
    }

    /// Certified bound on `Σ_{n>t} |c_n| p^{-n}`.
    pub fn tail(&self, t: usize, p: Prime) -> Result<Rational> {
        if self.constant.is_zero() {
            return Ok(Rational::zero());
        }
        let x = p.q_pow(1);
        let t_big = BigInt::from(t);
        let first = &self.constant
            * Rational::from_integer(&t_big + 2u32).pow(self.degree as i32)
            * p.q_pow(t as u32 + 1);
        let ratio = Rational::new(&t_big + 3u32, &t_big + 2u32).pow(self.degree as i32) * x;
        if ratio >= Rational::one() {
            return Err(Error::TruncationTooSmall(t));
        }
        Ok(first / (Rational::one() - ratio))
    }

    fn add(&self, other: &GrowthBound) -> GrowthBound {
        GrowthBound::new(&self.constant + &other.constant, self.degree.max(other.degree))
    }

    fn mul(&self, other: &GrowthBound) -> GrowthBound {
        GrowthBound::new(&self.constant * &other.constant, self.degree + other.degree + 1)
    }
}

/// What is known about the coefficients beyond the truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// The series is a polynomial: every coefficient beyond `T` is zero.
    Exact,
    Growth(GrowthBound),
    Unknown,
}

/// `c_0 + c_1 q + … + c_T q^T + O(q^{T+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
    tail: Tail,
}

impl QSeries {
    /// A series known up to `q^{coeffs.len()-1}`; `coeffs` must be nonempty.
    pub fn new(coeffs: Vec<Rational>, tail: Tail) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c_0");
        QSeries { coeffs, tail }
    }

    pub fn from_ints(coeffs: &[i64], tail: Tail) -> Self {
        QSeries::new(coeffs.iter().map(|&c| rat(c, 1)).collect(), tail)
    }

    /// An exact polynomial viewed at truncation `t` (higher terms dropped).
    pub fn polynomial(coeffs: &[i64], t: usize) -> Self {
        let mut c: Vec<Rational> = coeffs.iter().map(|&c| rat(c, 1)).collect();
        let exact = c.len() <= t + 1;
        c.resize(t + 1, Rational::zero());
        QSeries::new(c, if exact { Tail::Exact } else { Tail::Unknown })
    }

    pub fn one(t: usize) -> Self {
        QSeries::polynomial(&[1], t)
    }

    pub fn zero(t: usize) -> Self {
        QSeries::polynomial(&[], t)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    /// Restrict to a smaller truncation order.
    pub fn truncate(&self, t: usize) -> Self {
        let t = t.min(self.trunc());
        let dropped_nonzero = self.coeffs[t + 1..].iter().any(|c| !c.is_zero());
        let tail = match (&self.tail, dropped_nonzero) {
            (Tail::Exact, true) => Tail::Growth(self.as_growth()),
            (other, _) => other.clone(),
        };
        QSeries::new(self.coeffs[..=t].to_vec(), tail)
    }

    /// Growth bound valid for all coefficients, known or not.
    fn as_growth(&self) -> GrowthBound {
        let known = GrowthBound::new(
            self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default(),
            0,
        );
        match &self.tail {
            Tail::Exact => known,
            Tail::Growth(g) => {
                let degree = g.degree;
                // fold the known coefficients into the constant
                let mut c = g.constant.clone();
                for (n, a) in self.coeffs.iter().enumerate() {
                    let scale = Rational::from_integer(BigInt::from(n + 1)).pow(degree as i32);
                    let need = a.abs() / scale;
                    if need > c {
                        c = need;
                    }
                }
                GrowthBound::new(c, degree)
            }
            Tail::Unknown => unreachable!("no growth bound for an unknown tail"),
        }
    }

    fn combine_tail(&self, other: &QSeries, f: impl Fn(&GrowthBound, &GrowthBound) -> GrowthBound) -> Tail {
        if matches!(self.tail, Tail::Unknown) || matches!(other.tail, Tail::Unknown) {
            return Tail::Unknown;
        }
        Tail::Growth(f(&self.as_growth(), &other.as_growth()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let tail = match &self.tail {
            Tail::Exact => Tail::Exact,
            Tail::Growth(_) => {
                let g = self.as_growth();
                Tail::Growth(GrowthBound::new(g.constant * s.abs(), g.degree))
            }
            Tail::Unknown => Tail::Unknown,
        };
        QSeries::new(self.coeffs.iter().map(|c| c * s).collect(), tail)
    }

    pub fn invert_unit(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let t = self.trunc();
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(t + 1);
        out.push(inv0.clone());
        for n in 1..=t {
            let mut acc = Rational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &out[n - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(QSeries::new(out, Tail::Unknown))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.trunc());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q = 1/p` using the series' own tail information.
    pub fn eval_at(&self, p: Prime) -> Result<EvalResult> {
        match &self.tail {
            Tail::Unknown => Err(Error::MissingGrowthBound),
            Tail::Exact => Ok(EvalResult::exact(self.partial_sum(p))),
            Tail::Growth(g) => Ok(EvalResult::new(self.partial_sum(p), g.tail(self.trunc(), p)?)),
        }
    }

    /// Substitutes `q = 1/p` with a caller-supplied coefficient bound.
    pub fn eval_with_bound(&self, p: Prime, bound: &GrowthBound) -> Result<EvalResult> {
        Ok(EvalResult::new(self.partial_sum(p), bound.tail(self.trunc(), p)?))
    }

    fn partial_sum(&self, p: Prime) -> Rational {
        // Horner in x = 1/p
        let x = p.q_pow(1);
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let t = self.trunc().min(rhs.trunc());
        let (a, b) = (self.truncate(t), rhs.truncate(t));
        let tail = match (&a.tail, &b.tail) {
            (Tail::Exact, Tail::Exact) => Tail::Exact,
            _ => a.combine_tail(&b, GrowthBound::add),
        };
        QSeries::new(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(), tail)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|c| -c).collect(), self.tail.clone())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let t = self.trunc().min(rhs.trunc());
        let (a, b) = (self.truncate(t), rhs.truncate(t));
        let mut out = vec![Rational::zero(); t + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs[..=t - i].iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let tail = match (&a.tail, &b.tail) {
            (Tail::Exact, Tail::Exact) => {
                // exact only if no product term spills past t
                let deg = |s: &QSeries| s.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
                if deg(&a) + deg(&b) <= t {
                    Tail::Exact
                } else {
                    a.combine_tail(&b, GrowthBound::mul)
                }
            }
            _ => a.combine_tail(&b, GrowthBound::mul),
        };
        QSeries::new(out, tail)
    }
}

/// An exact value with a certified absolute error bound: the true value
/// lies in `[value - tail_bound, value + tail_bound]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Rational,
    pub tail_bound: Rational,
}

impl EvalResult {
    pub fn new(value: Rational, tail_bound: Rational) -> Self {
        debug_assert!(!tail_bound.is_negative());
        EvalResult { value, tail_bound }
    }

    pub fn exact(value: Rational) -> Self {
        EvalResult::new(value, Rational::zero())
    }

    pub fn from_interval(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        let two = rat(2, 1);
        EvalResult::new((&lo + &hi) / &two, (hi - lo) / two)
    }

    pub fn lo(&self) -> Rational {
        &self.value - &self.tail_bound
    }

    pub fn hi(&self) -> Rational {
        &self.value + &self.tail_bound
    }

    pub fn contains(&self, x: &Rational) -> bool {
        (&self.value - x).abs() <= self.tail_bound
    }

    /// Whether the two intervals intersect, allowing extra `slack`.
    pub fn agrees_with(&self, other: &EvalResult, slack: &Rational) -> bool {
        (&self.value - &other.value).abs() <= &self.tail_bound + &other.tail_bound + slack
    }

    pub fn value_f64(&self) -> f64 {
        crate::arith::to_f64(&self.value)
    }

    pub fn bound_f64(&self) -> f64 {
        crate::arith::to_f64(&self.tail_bound)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        EvalResult::new(&self.value * s, &self.tail_bound * s.abs())
    }

    pub fn add(&self, other: &EvalResult) -> Self {
        EvalResult::new(&self.value + &other.value, &self.tail_bound + &other.tail_bound)
    }

    pub fn sub(&self, other: &EvalResult) -> Self {
        EvalResult::new(&self.value - &other.value, &self.tail_bound + &other.tail_bound)
    }

    pub fn mul(&self, other: &EvalResult) -> Self {
        let bound = self.value.abs() * &other.tail_bound
            + other.value.abs() * &self.tail_bound
            + &self.tail_bound * &other.tail_bound;
        EvalResult::new(&self.value * &other.value, bound)
    }

    /// Interval quotient; the divisor interval must exclude zero.
    pub fn div(&self, other: &EvalResult) -> Self {
        let b = other.value.abs();
        assert!(b > other.tail_bound, "divisor interval contains zero");
        let bound = (self.value.abs() * &other.tail_bound + &b * &self.tail_bound)
            / (&b * (&b - &other.tail_bound));
        EvalResult::new(&self.value / &other.value, bound)
    }

    pub fn recip(&self) -> Self {
        EvalResult::exact(Rational::one()).div(self)
    }
}

/// Which indices `i ≥ 1` contribute a factor `(1 - q^i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexFilter {
    All,
    /// `i ≥ m`
    AtLeast(u32),
    /// `i mod modulus ∈ residues`
    Congruence { modulus: u32, residues: Vec<u32> },
    Nothing,
}

impl IndexFilter {
    pub fn accepts(&self, i: u32) -> bool {
        match self {
            IndexFilter::All => true,
            IndexFilter::AtLeast(m) => i >= *m,
            IndexFilter::Congruence { modulus, residues } => residues.contains(&(i % modulus)),
            IndexFilter::Nothing => false,
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            IndexFilter::Nothing => true,
            IndexFilter::Congruence { residues, .. } => residues.is_empty(),
            _ => false,
        }
    }
}

/// `∏_{i ≥ 1, filter(i)} (1 - q^i)`, materialized only on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerProduct {
    pub filter: IndexFilter,
    pub trunc: usize,
}

impl EulerProduct {
    pub fn new(filter: IndexFilter, trunc: usize) -> Self {
        EulerProduct { filter, trunc }
    }

    /// Coefficients through `q^T`; factors with `i > T` are 1 at this order.
    pub fn series(&self) -> QSeries {
        let t = self.trunc;
        let mut c = vec![Rational::zero(); t + 1];
        c[0] = Rational::one();
        for i in 1..=t {
            if !self.filter.accepts(i as u32) {
                continue;
            }
            for n in (i..=t).rev() {
                let prev = c[n - i].clone();
                c[n] -= prev;
            }
        }
        // pentagonal-number theorem: coefficients of the full product are 0 or ±1
        let tail = match self.filter {
            IndexFilter::All => Tail::Growth(GrowthBound::new(Rational::one(), 0)),
            IndexFilter::Nothing => Tail::Exact,
            _ => Tail::Unknown,
        };
        QSeries::new(c, tail)
    }

    /// Evaluates at `q = 1/p` by multiplying the factors `i ≤ T` exactly. The
    /// remaining factors lie in `[1 - ε, 1]` with `ε = Σ_{i>T} p^{-i}`.
    pub fn eval(&self, p: Prime) -> EvalResult {
        let head = self.partial_value(p);
        if self.filter.is_finite() {
            return EvalResult::exact(head);
        }
        let t = self.trunc as u32;
        let eps = p.q_pow(t + 1) / (Rational::one() - p.q_pow(1));
        let half = &eps / rat(2, 1);
        EvalResult::new(&head * (Rational::one() - &half), head * half)
    }

    /// `∏_{i ≤ T, filter(i)} (1 - p^{-i})`.
    pub fn partial_value(&self, p: Prime) -> Rational {
        let mut acc = Rational::one();
        for i in 1..=self.trunc as u32 {
            if self.filter.accepts(i) {
                acc *= Rational::one() - p.q_pow(i);
            }
        }
        acc
    }
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn divisor_sum(n: u64, k: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// `E_k = Σ_{n ≥ 1} σ_{k-1}(n) q^n` (no constant term), through `q^T`.
pub fn eisenstein(k: u32, t: usize) -> QSeries {
    assert!(k >= 1, "Eisenstein series are indexed from k = 1");
    let mut c = vec![Rational::zero(); t + 1];
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        *slot = Rational::from_integer(divisor_sum(n as u64, k - 1));
    }
    // σ_{k-1}(n) ≤ d(n) n^{k-1} ≤ n^k
    QSeries::new(c, Tail::Growth(GrowthBound::new(Rational::one(), k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn telescoping_product() {
        let a = QSeries::polynomial(&[1, -1], 3);
        let b = QSeries::polynomial(&[1, 1, 1, 1], 3);
        assert_eq!(ints(&(&a * &b)), vec![1, 0, 0, 0]);
    }

    #[test]
    fn geometric_inverse() {
        let a = QSeries::polynomial(&[1, -1], 3);
        assert_eq!(ints(&a.invert_unit().unwrap()), vec![1, 1, 1, 1]);
        let z = QSeries::polynomial(&[0, 1], 3);
        assert_eq!(z.invert_unit(), Err(Error::NonUnitSeries));
    }

    #[test]
    fn cancelling_sum() {
        let a = QSeries::polynomial(&[1, -1, -1], 2);
        let b = QSeries::polynomial(&[0, 1, 1], 2);
        let s = &a + &b;
        assert_eq!(ints(&s), vec![1, 0, 0]);
        assert_eq!(s.tail(), &Tail::Exact);
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = QSeries::one(5);
        let b = QSeries::one(2);
        assert_eq!((&a * &b).trunc(), 2);
        assert_eq!((&a + &b).trunc(), 2);
    }

    #[test]
    fn euler_products() {
        let all = EulerProduct::new(IndexFilter::All, 4).series();
        assert_eq!(ints(&all), vec![1, -1, -1, 0, 0]);
        let from2 = EulerProduct::new(IndexFilter::AtLeast(2), 3).series();
        assert_eq!(ints(&from2), vec![1, 0, -1, -1]);
        let none = EulerProduct::new(IndexFilter::Nothing, 2).series();
        assert_eq!(ints(&none), vec![1, 0, 0]);
    }

    #[test]
    fn euler_product_matches_naive_multiplication() {
        let t = 30;
        let mut naive = QSeries::one(t);
        for i in 1..=t {
            let mut f = vec![0i64; i + 1];
            f[0] = 1;
            f[i] = -1;
            naive = &naive * &QSeries::polynomial(&f, t);
        }
        let fast = EulerProduct::new(IndexFilter::All, t).series();
        assert_eq!(naive.coeffs(), fast.coeffs());
        // pentagonal numbers 1, 2, 5, 7, 12, 15, 22, 26
        let nonzero: Vec<usize> =
            (0..=t).filter(|&n| !fast.coeffs()[n].is_zero()).collect();
        assert_eq!(nonzero, vec![0, 1, 2, 5, 7, 12, 15, 22, 26]);
    }

    #[test]
    fn eisenstein_coefficients() {
        assert_eq!(ints(&eisenstein(1, 6)), vec![0, 1, 2, 2, 3, 2, 4]);
        assert_eq!(ints(&eisenstein(2, 6)), vec![0, 1, 3, 4, 7, 6, 12]);
        assert_eq!(ints(&eisenstein(3, 2)), vec![0, 1, 5]);
    }

    #[test]
    fn eisenstein_value_at_two() {
        let p = Prime::new(2).unwrap();
        let r = eisenstein(1, 40).eval_at(p).unwrap();
        assert!(r.bound_f64() < 1e-5);
        assert!((r.value_f64() - 1.6067).abs() < 5e-5);
    }

    #[test]
    fn euler_product_value_at_two() {
        let p = Prime::new(2).unwrap();
        let r = EulerProduct::new(IndexFilter::All, 40).eval(p);
        assert!(r.bound_f64() < 1e-9);
        assert!((r.value_f64() - 0.288788095).abs() < 1e-9);
    }

    #[test]
    fn constant_one_is_exact() {
        let p = Prime::new(7).unwrap();
        let r = QSeries::one(0).eval_at(p).unwrap();
        assert_eq!(r, EvalResult::exact(Rational::one()));
    }

    #[test]
    fn unknown_tail_refuses_evaluation() {
        let p = Prime::new(2).unwrap();
        let s = QSeries::polynomial(&[1, -1], 3).invert_unit().unwrap();
        assert_eq!(s.eval_at(p), Err(Error::MissingGrowthBound));
        let r = s.eval_with_bound(p, &GrowthBound::new(Rational::one(), 0)).unwrap();
        assert!(r.contains(&rat(2, 1)));
    }

    #[test]
    fn intervals_nest_as_truncation_grows() {
        let p = Prime::new(2).unwrap();
        for k in 1..=4 {
            let mut prev: Option<EvalResult> = None;
            for t in [30usize, 40, 50, 60] {
                let r = eisenstein(k, t).eval_at(p).unwrap();
                if let Some(prev) = &prev {
                    assert!(r.value > prev.value, "monotone in T");
                    assert!(prev.contains(&r.value), "T={t} k={k} outside previous interval");
                }
                prev = Some(r);
            }
        }
        let mut prev: Option<EvalResult> = None;
        for t in [10usize, 20, 30] {
            let r = EulerProduct::new(IndexFilter::All, t).eval(p);
            if let Some(prev) = &prev {
                assert!(prev.contains(&r.value));
            }
            prev = Some(r);
        }
    }

    #[test]
    fn interval_arithmetic_contains_products() {
        let a = EvalResult::new(rat(1, 2), rat(1, 100));
        let b = EvalResult::new(rat(3, 1), rat(1, 10));
        let prod = a.mul(&b);
        for x in [a.lo(), a.hi()] {
            for y in [b.lo(), b.hi()] {
                assert!(prod.contains(&(&x * &y)));
                assert!(a.div(&b).contains(&(&x / &y)));
            }
        }
    }
}
