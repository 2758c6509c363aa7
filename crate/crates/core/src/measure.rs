//! Cohen-Lenstra weights and probabilities, the surjection-twisted weights
//! `w_k` with their zeta functions, and closed forms for the distribution of
//! order, rank, exponent and the u-probabilities.
//!
//! Every infinite product is evaluated at `q = 1/p` with a certified error
//! bound, so all probabilities come back as [`EvalResult`] intervals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{gl_order, q_pochhammer, rat, rat_int, Prime, Rational};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::partitions::{aut_order, partitions_of, GroupShape, Partition};
use crate::qseries::{eisenstein, EulerProduct, EvalResult, IndexFilter, QSeries};

/// Largest number of tuples [`surjection_count`] will enumerate by default.
pub const SURJECTION_BUDGET: u128 = 1 << 24;

/// The prime together with the truncation order `T` used for infinite
/// products and the order bound `B` used by truncated sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureContext {
    pub p: Prime,
    pub trunc: usize,
    pub order_bound: u32,
}

impl MeasureContext {
    pub fn new(p: Prime, trunc: usize, order_bound: u32) -> Self {
        MeasureContext { p, trunc, order_bound }
    }

    /// `T` large enough that `p^{-T} < 10^{-15}`; `B = 30` at `p = 2`,
    /// 15 otherwise.
    pub fn for_prime(p: Prime) -> Self {
        let bits_per_step = (p.get() as f64).log2();
        let trunc = (50.0 / bits_per_step).ceil() as usize + 1;
        let order_bound = if p.get() == 2 { 30 } else { 15 };
        MeasureContext::new(p, trunc, order_bound)
    }

    pub fn euler(&self, filter: IndexFilter) -> EvalResult {
        EulerProduct::new(filter, self.trunc).eval(self.p)
    }

    /// `∏_{i≥1} (1 - p^{-i})`, the probability of the trivial group.
    pub fn phi(&self) -> EvalResult {
        self.euler(IndexFilter::All)
    }
}

/// `w(λ) = 1/#Aut(G_λ)`.
pub fn weight(lambda: &Partition, p: Prime) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(aut_order(&lambda.to_group_shape(), p)))
}

/// `w(all groups) = ∏ (1 - p^{-i})^{-1}`.
pub fn total_weight(ctx: &MeasureContext) -> EvalResult {
    ctx.phi().recip()
}

/// `P(λ) = w(λ) / w(all groups)`.
pub fn cl_prob(lambda: &Partition, ctx: &MeasureContext) -> EvalResult {
    ctx.phi().scale(&weight(lambda, ctx.p))
}

/// Number of `k`-tuples of elements that generate the group, i.e. the number
/// of surjections `Z^k → G`, by exhaustive enumeration.
pub fn surjection_count(shape: &GroupShape, k: u32, p: Prime, budget: u128) -> Result<BigUint> {
    let lambda = shape.to_partition();
    let order = p.pow(lambda.size());
    let needed = u128::try_from(order.pow(k)).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { what: "surjection tuples", needed, budget });
    }
    let group = AbelianGroup::new(&lambda, p, usize::MAX).expect("order checked against budget");
    fn walk(group: &AbelianGroup, h: &crate::group::Subgroup, left: u32) -> u64 {
        if left == 0 {
            return u64::from(h.len() == group.order());
        }
        (0..group.order()).map(|x| walk(group, &group.extend(h, x), left - 1)).sum()
    }
    Ok(BigUint::from(walk(&group, &group.trivial_subgroup(), k)))
}

/// `w_k(λ) = w(λ) ∏_{i=k-r+1}^{k} (1 - p^{-i})` for `k ≥ r = rank`, else 0.
pub fn twisted_weight(lambda: &Partition, k: u32, p: Prime) -> Rational {
    let r = lambda.len() as u32;
    if k < r {
        return Rational::zero();
    }
    weight(lambda, p) * q_pochhammer(p, k - r + 1, k)
}

/// `ζ_k(s) = ∏_{i=1}^{k} 1/(1 - p^{-s-i})` for integer `s`.
pub fn zeta_k(k: u32, s: i64, p: Prime) -> Result<Rational> {
    let mut acc = Rational::one();
    for i in 1..=i64::from(k) {
        let e = s + i;
        if e == 0 {
            return Err(Error::Pole(e));
        }
        acc /= Rational::one() - p.pow_signed(-e);
    }
    Ok(acc)
}

/// `ζ_k(s)` for real `s`, in floating point.
pub fn zeta_k_f64(k: u32, s: f64, p: Prime) -> Result<f64> {
    let pf = p.get() as f64;
    let mut acc = 1.0;
    for i in 1..=k {
        let e = s + f64::from(i);
        if e == 0.0 {
            return Err(Error::Pole(i64::from(i)));
        }
        acc /= 1.0 - pf.powf(-e);
    }
    Ok(acc)
}

/// `|f(λ)| ≤ constant · order_base^{ord_p(λ)} · rank_base^{rk(λ)}`.
#[derive(Debug, Clone)]
pub struct FunctionalBound {
    pub constant: Rational,
    pub order_base: Rational,
    pub rank_base: Rational,
}

impl FunctionalBound {
    pub fn bounded(constant: Rational) -> Self {
        FunctionalBound { constant, order_base: Rational::one(), rank_base: Rational::one() }
    }

    /// `Σ_{ord > B} w(λ) |f(λ)| p^{-u·ord}`, using
    /// `Σ_{ord = n, rk = r} w ≤ q^{n - r + r²} / φ³`.
    fn weighted_tail(&self, u: u32, ctx: &MeasureContext) -> Result<Rational> {
        let p = ctx.p;
        let rho = &self.order_base * p.q_pow(u + 1);
        if rho >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "functional grows too fast for u = {u}: order base must be below p^{}",
                u + 1
            )));
        }
        // G = Σ_{r ≥ 1} rank_base^r q^{r(r-1)}
        let mut g = Rational::zero();
        let mut r = 1u32;
        loop {
            let term = self.rank_base.pow(r as i32) * p.q_pow(r * (r - 1));
            g += &term;
            let ratio = &self.rank_base * p.q_pow(2 * r);
            if ratio <= rat(1, 2) {
                g += term * ratio * rat(2, 1);
                break;
            }
            r += 1;
        }
        let phi_lo = ctx.phi().lo();
        let b = ctx.order_bound as i32;
        Ok(&self.constant * g * rho.pow(b + 1) / ((Rational::one() - rho) * phi_lo.pow(3)))
    }
}

/// `E_u(f) = lim_k ζ_k(f; u) / ζ_k(u)`.
///
/// With `k = None` the limit is taken termwise (`w_k → w`) and the
/// normalizer is the closed product `∏_{i>u} (1 - p^{-i})^{-1}`; with
/// `Some(k)` the sum uses `w_k` and is normalized by the exact `ζ_k(u)`.
/// The sum runs over groups with `ord_p ≤ B` and the remainder is covered by
/// the bound on `f`.
pub fn expected_value(
    f: impl Fn(&Partition) -> Rational,
    bound: &FunctionalBound,
    u: u32,
    k: Option<u32>,
    ctx: &MeasureContext,
) -> Result<EvalResult> {
    let p = ctx.p;
    let mut sum = Rational::zero();
    for n in 0..=ctx.order_bound {
        let damp = p.q_pow(u * n);
        for lambda in partitions_of(n, u32::MAX, u32::MAX) {
            let w = match k {
                Some(k) => twisted_weight(&lambda, k, p),
                None => weight(&lambda, p),
            };
            if !w.is_zero() {
                sum += w * f(&lambda) * &damp;
            }
        }
    }
    let numerator = EvalResult::new(sum, bound.weighted_tail(u, ctx)?);
    let normalizer = match k {
        Some(k) => EvalResult::exact(zeta_k(k, i64::from(u), p)?),
        None => ctx.euler(IndexFilter::AtLeast(u + 1)).recip(),
    };
    Ok(numerator.div(&normalizer))
}

/// `P(ord_p = n) = q^n ∏_{i>n} (1 - q^i)`.
pub fn prob_order(n: u32, ctx: &MeasureContext) -> EvalResult {
    ctx.euler(IndexFilter::AtLeast(n + 1)).scale(&ctx.p.q_pow(n))
}

/// `P(rk = r) = φ · q^{r²} / (q;q)_r²`.
pub fn prob_rank(r: u32, ctx: &MeasureContext) -> EvalResult {
    let p = ctx.p;
    let poch = q_pochhammer(p, 1, r);
    ctx.phi().scale(&(p.q_pow(r * r) / (&poch * &poch)))
}

/// `P(ord_p = n, rk = r) = φ · q^{n-r} (q;q)_{n-1} / (|GL(r,p)| (q;q)_{r-1} (q;q)_{n-r})`,
/// zero when no group has that order and rank.
pub fn prob_rank_order(n: u32, r: u32, ctx: &MeasureContext) -> EvalResult {
    if r > n || (r == 0 && n > 0) {
        return EvalResult::exact(Rational::zero());
    }
    let p = ctx.p;
    let num = p.q_pow(n - r) * q_pochhammer(p, 1, n.saturating_sub(1));
    let den = rat_int(BigInt::from(gl_order(r, p)))
        * q_pochhammer(p, 1, r.saturating_sub(1))
        * q_pochhammer(p, 1, n - r);
    ctx.phi().scale(&(num / den))
}

/// `P(exp_p ≤ e) = ∏_{i ≡ 0, ±(e+1) mod 2e+3} (1 - q^i)`.
pub fn prob_exponent_le(e: u32, ctx: &MeasureContext) -> EvalResult {
    ctx.euler(exponent_filter(e))
}

pub fn exponent_filter(e: u32) -> IndexFilter {
    let m = 2 * e + 3;
    IndexFilter::Congruence { modulus: m, residues: vec![0, e + 1, e + 2] }
}

/// `P(rk ≤ 1) = φ (1 + q/(1-q)²)`, summing the trivial group with weight 1
/// and the cyclic groups `Z/p^e` with weight `q^e/(1-q)`.
pub fn prob_cyclic(ctx: &MeasureContext) -> EvalResult {
    prob_rank(0, ctx).add(&prob_rank(1, ctx))
}

/// `E[p^{k·rk}] = Σ_{i=0}^{k} q^{-i(k-i)} (q;q)_k / ((q;q)_i (q;q)_{k-i})`.
pub fn moment_p_rank(k: u32, p: Prime) -> Rational {
    let full = q_pochhammer(p, 1, k);
    (0..=k)
        .map(|i| {
            p.pow_signed(i64::from(i * (k - i))) * &full
                / (q_pochhammer(p, 1, i) * q_pochhammer(p, 1, k - i))
        })
        .sum()
}

/// `P_u(λ) = |G|^{-u} w(λ) ∏_{i>u} (1 - p^{-i})` with `|G| = p^{ord_p}`.
pub fn u_prob(lambda: &Partition, u: u32, ctx: &MeasureContext) -> EvalResult {
    let scale = weight(lambda, ctx.p) * ctx.p.q_pow(u * lambda.size());
    ctx.euler(IndexFilter::AtLeast(u + 1)).scale(&scale)
}

/// A polynomial in `X_1, …, X_k` with rational coefficients, keyed by
/// exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let mut key = exps.to_vec();
        key.resize(self.nvars, 0);
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Substitutes a series for each variable.
    pub fn substitute(&self, vars: &[QSeries]) -> QSeries {
        assert_eq!(vars.len(), self.nvars);
        let t = vars.iter().map(QSeries::trunc).min().unwrap_or(0);
        let mut acc: Option<QSeries> = None;
        for (exps, c) in &self.terms {
            let mut term = QSeries::one(t).scale(c);
            for (v, &e) in vars.iter().zip(exps) {
                if e > 0 {
                    term = &term * &v.pow(e);
                }
            }
            acc = Some(match acc {
                Some(a) => &a + &term,
                None => term,
            });
        }
        acc.unwrap_or_else(|| QSeries::zero(t))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // highest power of X_1 first
        for (exps, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "{c}")?;
            }
            let mut wrote = false;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote || !c.is_one() {
                    f.write_str("*")?;
                }
                wrote = true;
                write!(f, "X_{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `f_k = Σ_{|λ| = k} k! ∏_i X_{e_i}^{r_i} / (r_i! (e_i!)^{r_i})`.
pub fn mehnert_f_poly(k: u32) -> MultiPoly {
    assert!(k >= 1);
    let mut poly = MultiPoly { nvars: k as usize, terms: BTreeMap::new() };
    for lambda in partitions_of(k, u32::MAX, u32::MAX) {
        let shape = lambda.to_group_shape();
        let mut exps = vec![0u32; k as usize];
        let mut den = BigInt::one();
        for &(e, r) in shape.blocks() {
            exps[e as usize - 1] = r;
            den *= factorial(r) * factorial(e).pow(r);
        }
        let c = Rational::new(factorial(k), den);
        *poly.terms.entry(exps).or_default() += c;
    }
    poly
}

/// `M_k = f_k(E_1, …, E_k)` through `q^T`.
pub fn mehnert_moment(k: u32, t: usize) -> QSeries {
    let vars: Vec<QSeries> = (1..=k).map(|j| eisenstein(j, t)).collect();
    mehnert_f_poly(k).substitute(&vars)
}

/// Raises the truncation until the certified tail bound is below `target`.
pub fn eval_to_precision(
    build: impl Fn(usize) -> QSeries,
    p: Prime,
    target: &Rational,
    start: usize,
) -> Result<EvalResult> {
    let mut t = start.max(1);
    loop {
        match build(t).eval_at(p) {
            Ok(r) if &r.tail_bound < target => return Ok(r),
            Ok(_) | Err(Error::TruncationTooSmall(_)) => {}
            Err(e) => return Err(e),
        }
        if t > 4096 {
            return Err(Error::TruncationTooSmall(t));
        }
        t += t / 2 + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn approx(r: &EvalResult, x: f64, tol: f64) {
        assert!(
            (r.value_f64() - x).abs() < tol,
            "{} vs {x} (bound {})",
            r.value_f64(),
            r.bound_f64()
        );
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&part(&[]), p(2)), rat(1, 1));
        assert_eq!(weight(&part(&[1]), p(2)), rat(1, 1));
        assert_eq!(weight(&part(&[1, 1]), p(2)), rat(1, 6));
    }

    #[test]
    fn totals_and_probabilities() {
        let ctx = MeasureContext::for_prime(p(2));
        let total = total_weight(&ctx);
        approx(&total, 3.462746619, 1e-8);
        assert!(total.bound_f64() < 1e-8);
        let ctx13 = MeasureContext::for_prime(p(13));
        // 1/((1 - 1/13)(1 - 1/169)(1 - 1/2197)…)
        approx(&total_weight(&ctx13), 1.090319, 1e-6);
        let one = total.mul(&ctx.phi());
        assert!(one.contains(&rat(1, 1)));

        approx(&cl_prob(&part(&[]), &ctx), 0.288788, 1e-6);
        approx(&cl_prob(&part(&[1]), &ctx), 0.288788, 1e-6);
        approx(&cl_prob(&part(&[1, 1]), &ctx), 0.048131, 1e-6);
    }

    #[test]
    fn surjections() {
        let z2 = part(&[1]).to_group_shape();
        assert_eq!(surjection_count(&z2, 1, p(2), SURJECTION_BUDGET).unwrap(), BigUint::from(1u32));
        assert_eq!(surjection_count(&z2, 2, p(2), SURJECTION_BUDGET).unwrap(), BigUint::from(3u32));
        assert_eq!(surjection_count(&z2, 0, p(2), SURJECTION_BUDGET).unwrap(), BigUint::from(0u32));
        let trivial = GroupShape::trivial();
        assert_eq!(surjection_count(&trivial, 0, p(2), SURJECTION_BUDGET).unwrap(), BigUint::from(1u32));
        let big = part(&[5, 5, 5]).to_group_shape();
        assert!(matches!(
            surjection_count(&big, 2, p(2), SURJECTION_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn twisted_weights() {
        assert_eq!(twisted_weight(&part(&[1]), 1, p(2)), rat(1, 2));
        assert_eq!(twisted_weight(&part(&[1, 1]), 1, p(2)), rat(0, 1));
        let lam = part(&[2, 1]);
        let w = weight(&lam, p(3));
        let gap = |k| crate::arith::to_f64(&(&w - twisted_weight(&lam, k, p(3))));
        assert!(gap(40) < 1e-15 && gap(40) < gap(10) && gap(10) < gap(3));
    }

    #[test]
    fn zeta_products() {
        assert_eq!(zeta_k(1, 0, p(2)).unwrap(), rat(2, 1));
        assert_eq!(zeta_k(2, 0, p(2)).unwrap(), rat(8, 3));
        assert_eq!(zeta_k(2, 0, p(2)).unwrap(), zeta_k(1, 1, p(2)).unwrap() * zeta_k(1, 0, p(2)).unwrap());
        assert_eq!(zeta_k(0, 5, p(7)).unwrap(), rat(1, 1));
        assert_eq!(zeta_k(1, -1, p(2)), Err(Error::Pole(0)));
        assert!((zeta_k_f64(2, 0.0, p(2)).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        assert!(zeta_k_f64(3, 0.5, p(3)).unwrap() > 1.0);
    }

    #[test]
    fn expected_values() {
        let ctx = MeasureContext::new(p(2), 60, 20);
        let one = expected_value(|_| rat(1, 1), &FunctionalBound::bounded(rat(1, 1)), 0, None, &ctx).unwrap();
        assert!(one.contains(&rat(1, 1)), "{:?}", one.value_f64());
        let p_rank = FunctionalBound {
            constant: rat(1, 1),
            order_base: rat(1, 1),
            rank_base: rat(2, 1),
        };
        let m = expected_value(|l| rat(2i64.pow(l.len() as u32), 1), &p_rank, 0, None, &ctx).unwrap();
        assert!(m.contains(&rat(2, 1)));
        assert!(m.bound_f64() < 1e-4);
        let triv = expected_value(
            |l| rat(i64::from(l.is_empty()), 1),
            &FunctionalBound::bounded(rat(1, 1)),
            1,
            None,
            &ctx,
        )
        .unwrap();
        approx(&triv, 0.577576, 1e-6);
        // finite k: an exact identity for the w_k measure
        let fin = expected_value(|_| rat(1, 1), &FunctionalBound::bounded(rat(1, 1)), 1, Some(5), &ctx).unwrap();
        assert!(fin.contains(&rat(1, 1)));
        let too_fast = FunctionalBound { constant: rat(1, 1), order_base: rat(4, 1), rank_base: rat(1, 1) };
        assert!(expected_value(|_| rat(1, 1), &too_fast, 0, None, &ctx).is_err());
    }

    #[test]
    fn order_distribution() {
        let ctx = MeasureContext::for_prime(p(2));
        approx(&prob_order(0, &ctx), 0.288788, 1e-6);
        approx(&prob_order(1, &ctx), 0.288788, 1e-6);
        // (w((2)) + w((1,1))) / total = (1/2 + 1/6) / 3.462747
        approx(&prob_order(2, &ctx), 0.192525, 1e-6);
        assert!(prob_order(0, &ctx).agrees_with(&cl_prob(&part(&[]), &ctx), &Rational::zero()));
    }

    #[test]
    fn rank_distribution() {
        let ctx = MeasureContext::for_prime(p(2));
        approx(&prob_rank(0, &ctx), 0.288788, 1e-6);
        approx(&prob_rank(1, &ctx), 0.577576, 1e-6);
        approx(&prob_rank(2, &ctx), 0.128350, 1e-6);
        // the cyclic probability follows w(0) = 1
        approx(&prob_cyclic(&ctx), 0.866364, 1e-6);
    }

    #[test]
    fn rank_order_distribution() {
        let ctx = MeasureContext::for_prime(p(2));
        approx(&prob_rank_order(1, 1, &ctx), 0.288788, 1e-6);
        approx(&prob_rank_order(2, 1, &ctx), 0.144394, 1e-6);
        approx(&prob_rank_order(2, 2, &ctx), 0.048131, 1e-6);
        assert_eq!(prob_rank_order(1, 2, &ctx), EvalResult::exact(Rational::zero()));
        assert_eq!(prob_rank_order(3, 0, &ctx), EvalResult::exact(Rational::zero()));
        for n in 0..6 {
            let sum = (0..=n)
                .map(|r| prob_rank_order(n, r, &ctx))
                .fold(EvalResult::exact(Rational::zero()), |a, b| a.add(&b));
            assert!(sum.agrees_with(&prob_order(n, &ctx), &Rational::zero()));
        }
    }

    #[test]
    fn exponent_distribution() {
        let ctx = MeasureContext::for_prime(p(2));
        // Σ_r 1/|GL(r,2)| = 2.172669 over 3.462747
        approx(&prob_exponent_le(1, &ctx), 0.627441, 1e-6);
        for q in [2, 3, 5] {
            let ctx = MeasureContext::for_prime(p(q));
            assert!(prob_exponent_le(0, &ctx).agrees_with(&cl_prob(&part(&[]), &ctx), &Rational::zero()));
        }
        let deep = prob_exponent_le(30, &ctx);
        assert!(deep.value_f64() > 1.0 - 1e-8);
    }

    #[test]
    fn p_rank_moments() {
        assert_eq!(moment_p_rank(0, p(2)), rat(1, 1));
        assert_eq!(moment_p_rank(2, p(2)), rat(5, 1));
        for q in [2, 3, 5, 7] {
            assert_eq!(moment_p_rank(1, p(q)), rat(2, 1));
            assert_eq!(moment_p_rank(2, p(q)), rat(q as i64 + 3, 1));
        }
    }

    #[test]
    fn mehnert_polynomials() {
        let f1 = mehnert_f_poly(1);
        assert_eq!(f1.terms.len(), 1);
        assert_eq!(f1.coeff(&[1]), rat(1, 1));
        let f2 = mehnert_f_poly(2);
        assert_eq!(f2.coeff(&[2, 0]), rat(1, 1));
        assert_eq!(f2.coeff(&[0, 1]), rat(1, 1));
        let f4 = mehnert_f_poly(4);
        assert_eq!(f4.terms.len(), 5);
        assert_eq!(f4.coeff(&[4]), rat(1, 1));
        assert_eq!(f4.coeff(&[2, 1]), rat(6, 1));
        assert_eq!(f4.coeff(&[0, 2]), rat(3, 1));
        assert_eq!(f4.coeff(&[1, 0, 1]), rat(4, 1));
        assert_eq!(f4.coeff(&[0, 0, 0, 1]), rat(1, 1));
        assert_eq!(f4.to_string(), "X_1^4 + 6*X_1^2*X_2 + 4*X_1*X_3 + 3*X_2^2 + X_4");
    }

    #[test]
    fn mehnert_series() {
        let ints = |s: QSeries| -> Vec<i64> {
            s.coeffs().iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect()
        };
        assert_eq!(ints(mehnert_moment(2, 6)), vec![0, 1, 4, 8, 15, 20, 32]);
        assert_eq!(ints(mehnert_moment(3, 6)), vec![0, 1, 8, 26, 63, 116, 208]);
    }

    #[test]
    fn first_moment_matches_truncated_expectation() {
        let ctx = MeasureContext::for_prime(p(2));
        let m1 = eval_to_precision(|t| mehnert_moment(1, t), p(2), &rat(1, 1_000_000_000), 20).unwrap();
        // Σ_{n ≤ 60} n P(ord = n); the remainder is below 60 · 2^{-59}
        let mut s = EvalResult::exact(Rational::zero());
        for n in 1..=60u32 {
            s = s.add(&prob_order(n, &ctx).scale(&rat(i64::from(n), 1)));
        }
        assert!(m1.agrees_with(&s, &rat(1, 1_000_000_000_000)));
    }

    #[test]
    fn u_probabilities() {
        let ctx = MeasureContext::for_prime(p(2));
        approx(&u_prob(&part(&[]), 1, &ctx), 0.577576, 1e-6);
        approx(&u_prob(&part(&[1]), 1, &ctx), 0.288788, 1e-6);
        for lam in [part(&[]), part(&[2, 1]), part(&[1, 1, 1])] {
            for u in 1..=2u32 {
                let n = lam.size();
                let via_cl = cl_prob(&lam, &ctx)
                    .div(&EvalResult::exact(rat_int(BigInt::from(ctx.p.pow(u * n))) * q_pochhammer(ctx.p, 1, u)));
                assert!(via_cl.agrees_with(&u_prob(&lam, u, &ctx), &Rational::zero()));
            }
        }
    }
}
