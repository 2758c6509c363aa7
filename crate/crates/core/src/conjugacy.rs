//! Conjugacy classes of `GL(n, p)` at desk scale.
//!
//! A class is labelled by a partition `λ_φ` for each monic irreducible
//! `φ ≠ X` over `F_p`, subject to `Σ deg φ · |λ_φ| = n`. Its centralizer
//! has order `∏_φ A(λ_φ; p^{deg φ})`, where `A(λ; Q)` is the automorphism
//! count of the group of type `λ` with the prime replaced by `Q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{gl_order, q_pochhammer, to_f64, Prime, Rational};
use crate::error::{Error, Result};
use crate::measure::{cl_prob, weight, MeasureContext};
use crate::partitions::{aut_order_q, enumerate_partitions, partitions_of, Partition};

/// Largest `p^d` for which [`irreducible_polys`] will enumerate candidates.
pub const POLY_BUDGET: u64 = 1_000_000;

/// Largest number of classes [`enumerate_classes`] will produce.
pub const CLASS_BUDGET: usize = 1_000_000;

/// Monic polynomial over `F_p`, coefficients listed from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    /// `coeffs` from the constant term up, without the leading 1.
    pub fn monic(p: Prime, lower: &[u64]) -> Self {
        let mut coeffs: Vec<u64> = lower.iter().map(|c| c % p.get()).collect();
        coeffs.push(1);
        PolyFp { p: p.get(), coeffs }
    }

    /// `X - a`.
    pub fn linear(p: Prime, a: u64) -> Self {
        PolyFp::monic(p, &[(p.get() - a % p.get()) % p.get()])
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    /// Remainder of `self` modulo the monic `g`.
    fn rem(&self, g: &PolyFp) -> Vec<u64> {
        let p = self.p;
        let mut r = self.coeffs.clone();
        let dg = g.coeffs.len() - 1;
        while r.len() > dg {
            let lead = *r.last().expect("nonempty");
            let shift = r.len() - 1 - dg;
            if lead != 0 {
                for (i, &c) in g.coeffs.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
                }
            }
            r.pop();
        }
        r
    }

    fn divisible_by(&self, g: &PolyFp) -> bool {
        self.rem(g).iter().all(|&c| c == 0)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

impl From<PolyFp> for String {
    fn from(poly: PolyFp) -> String {
        poly.to_string()
    }
}

/// All monic irreducible polynomials of degree exactly `d`, ordered
/// lexicographically from the highest non-leading coefficient down.
pub fn irreducible_polys(p: Prime, d: u32) -> Result<Vec<PolyFp>> {
    let mut by_degree: Vec<Vec<PolyFp>> = vec![Vec::new()];
    for deg in 1..=d {
        let count = p.get().checked_pow(deg).filter(|&c| c <= POLY_BUDGET).ok_or(Error::BudgetExceeded {
            what: "polynomial candidates",
            needed: (p.get() as u128).saturating_pow(deg),
            budget: POLY_BUDGET as u128,
        })?;
        let mut found = Vec::new();
        for idx in 0..count {
            let mut digits = Vec::with_capacity(deg as usize);
            let mut rest = idx;
            for _ in 0..deg {
                digits.push(rest % p.get());
                rest /= p.get();
            }
            let f = PolyFp::monic(p, &digits);
            let reducible = (1..=deg / 2).any(|dg| by_degree[dg as usize].iter().any(|g| f.divisible_by(g)));
            if !reducible {
                found.push(f);
            }
        }
        by_degree.push(found);
    }
    Ok(by_degree.pop().expect("degree d computed"))
}

/// Number of monic irreducibles of degree `d` over `F_p`, by the necklace
/// formula `(1/d) Σ_{e | d} μ(e) p^{d/e}`.
pub fn irreducible_count(p: Prime, d: u32) -> BigInt {
    let mut total = BigInt::zero();
    for e in 1..=d {
        if d % e == 0 {
            let mu = mobius(e);
            if mu != 0 {
                total += BigInt::from(mu) * BigInt::from(p.pow(d / e));
            }
        }
    }
    total / BigInt::from(d)
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassBlock {
    pub poly: PolyFp,
    pub partition: Partition,
}

/// A conjugacy class of `GL(n, p)`; polynomials with empty partitions are
/// omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassLabel {
    pub n: u32,
    pub p: Prime,
    pub blocks: Vec<ClassBlock>,
}

impl ClassLabel {
    /// `λ_φ`, empty when `φ` does not occur.
    pub fn partition_of(&self, poly: &PolyFp) -> Partition {
        self.blocks
            .iter()
            .find(|b| &b.poly == poly)
            .map_or_else(Partition::empty, |b| b.partition.clone())
    }

    pub fn degree_sum(&self) -> u32 {
        self.blocks.iter().map(|b| b.poly.degree() * b.partition.size()).sum()
    }

    pub fn centralizer_order(&self) -> BigUint {
        self.blocks
            .iter()
            .map(|b| aut_order_q(&b.partition.to_group_shape(), &self.p.pow(b.poly.degree())))
            .product()
    }

    pub fn class_size(&self) -> BigUint {
        gl_order(self.n, self.p) / self.centralizer_order()
    }
}

/// Every conjugacy class of `GL(n, p)`, polynomials ordered by degree and
/// then lexicographically, partitions as in [`partitions_of`].
pub fn enumerate_classes(n: u32, p: Prime) -> Result<Vec<ClassLabel>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut polys = Vec::new();
    for d in 1..=n {
        polys.extend(irreducible_polys(p, d)?.into_iter().filter(|f| !f.is_x()));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_classes(&polys, 0, n, n, p, &mut current, &mut out)?;
    Ok(out)
}

fn extend_classes(
    polys: &[PolyFp],
    next: usize,
    remaining: u32,
    n: u32,
    p: Prime,
    current: &mut Vec<ClassBlock>,
    out: &mut Vec<ClassLabel>,
) -> Result<()> {
    if remaining == 0 {
        if out.len() >= CLASS_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "conjugacy classes",
                needed: out.len() as u128 + 1,
                budget: CLASS_BUDGET as u128,
            });
        }
        out.push(ClassLabel { n, p, blocks: current.clone() });
        return Ok(());
    }
    for (i, poly) in polys.iter().enumerate().skip(next) {
        let d = poly.degree();
        if d > remaining {
            break;
        }
        for size in 1..=remaining / d {
            for lam in partitions_of(size, size, size) {
                current.push(ClassBlock { poly: poly.clone(), partition: lam });
                extend_classes(polys, i + 1, remaining - d * size, n, p, current, out)?;
                current.pop();
            }
        }
    }
    Ok(())
}

/// Number of classes of `GL(n, p)` from the generating function
/// `∏_d ∏_{k≥1} (1 - x^{dk})^{-N_d}`, with `N_d` irreducibles `≠ X` of degree `d`.
pub fn class_count_generating_function(n: u32, p: Prime) -> BigInt {
    let n = n as usize;
    // coefficients of ∏_k (1 - y^k)^{-1}: partition counts
    let parts: Vec<BigInt> = (0..=n).map(|m| BigInt::from(partitions_of(m as u32, m as u32, m as u32).len())).collect();
    let mut series = vec![BigInt::zero(); n + 1];
    series[0] = BigInt::one();
    for d in 1..=n {
        let mut count = irreducible_count(p, d as u32);
        if d == 1 {
            count -= 1;
        }
        let copies: usize = count.try_into().expect("small count");
        for _ in 0..copies {
            let mut next = vec![BigInt::zero(); n + 1];
            for (i, a) in series.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..=(n - i) / d {
                    next[i + j * d] += a * &parts[j];
                }
            }
            series = next;
        }
    }
    series.swap_remove(n)
}

/// Exact law of `λ_{X-a}` for a uniform element of `GL(n, p)`.
pub fn exact_marginal(n: u32, p: Prime, a: u64) -> Result<BTreeMap<Partition, Rational>> {
    if a % p.get() == 0 {
        return Err(Error::InvalidParameter("a must be a unit mod p".into()));
    }
    let target = PolyFp::linear(p, a);
    let total = BigInt::from(gl_order(n, p));
    let mut law: BTreeMap<Partition, Rational> = BTreeMap::new();
    for class in enumerate_classes(n, p)? {
        let share = Rational::new(BigInt::from(class.class_size()), total.clone());
        *law.entry(class.partition_of(&target)).or_default() += share;
    }
    Ok(law)
}

/// The same law from the generating function in `u`: the coefficient of
/// `u^n` in `(1-u)^{-1} ∏_{r≥1} (1 - u p^{-r}) · Σ_λ w(λ) u^{|λ|}`, so
/// `P_n(λ) = w(λ) Σ_{j=0}^{n-|λ|} (-1)^j p^{-j(j+1)/2} / ∏_{i≤j} (1 - p^{-i})`.
pub fn marginal_closed_form(n: u32, p: Prime) -> BTreeMap<Partition, Rational> {
    let mut partial = Vec::with_capacity(n as usize + 1);
    let mut acc = Rational::zero();
    for j in 0..=n {
        let term = p.q_pow(j * (j + 1) / 2) / q_pochhammer(p, 1, j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        partial.push(acc.clone());
    }
    enumerate_partitions(n, None, None)
        .map(|l| {
            let v = weight(&l, p) * &partial[(n - l.size()) as usize];
            (l, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Total variation distance between a finitely supported law and the
/// Cohen-Lenstra distribution, up to the (tiny) error in the evaluated
/// Euler product.
pub fn tv_to_cl(law: &BTreeMap<Partition, Rational>, ctx: &MeasureContext) -> f64 {
    let max_size = law.keys().map(Partition::size).max().unwrap_or(0);
    let mut diff = 0.0;
    let mut cl_mass = 0.0;
    for lam in enumerate_partitions(max_size, None, None) {
        let cl = cl_prob(&lam, ctx).value_f64();
        let m = law.get(&lam).map_or(0.0, to_f64);
        diff += (m - cl).abs();
        cl_mass += cl;
    }
    0.5 * (diff + (1.0 - cl_mass).max(0.0))
}

#[derive(Debug, Clone)]
pub struct CycleIndexReport {
    pub n: u32,
    pub p: Prime,
    pub classes: usize,
    pub expected_classes: BigInt,
    pub class_size_sum: BigUint,
    pub group_order: BigUint,
    pub marginal_sum: Rational,
    pub labels_valid: bool,
}

impl CycleIndexReport {
    pub fn passed(&self) -> bool {
        self.labels_valid
            && BigInt::from(self.classes) == self.expected_classes
            && self.class_size_sum == self.group_order
            && self.marginal_sum.is_one()
    }
}

/// Class-size sum, class count and marginal normalization for `GL(n, p)`.
pub fn cycle_index_check(n: u32, p: Prime) -> Result<CycleIndexReport> {
    let classes = enumerate_classes(n, p)?;
    let labels_valid = classes
        .iter()
        .all(|c| c.degree_sum() == n && c.blocks.iter().all(|b| !b.poly.is_x() && !b.partition.is_empty()));
    let class_size_sum = classes.iter().map(ClassLabel::class_size).sum();
    let marginal_sum = exact_marginal(n, p, 1)?.into_values().sum();
    Ok(CycleIndexReport {
        n,
        p,
        classes: classes.len(),
        expected_classes: class_count_generating_function(n, p),
        class_size_sum,
        group_order: gl_order(n, p),
        marginal_sum,
        labels_valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn names(ps: &[PolyFp]) -> Vec<String> {
        ps.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn small_irreducibles() {
        assert_eq!(names(&irreducible_polys(p(2), 1).unwrap()), ["x", "x+1"]);
        assert_eq!(names(&irreducible_polys(p(2), 2).unwrap()), ["x^2+x+1"]);
        assert_eq!(names(&irreducible_polys(p(2), 3).unwrap()), ["x^3+x+1", "x^3+x^2+1"]);
        assert_eq!(names(&irreducible_polys(p(3), 2).unwrap()), ["x^2+1", "x^2+x+2", "x^2+2x+2"]);
        assert_eq!(PolyFp::linear(p(3), 1).to_string(), "x+2");
    }

    #[test]
    fn necklace_identity() {
        for q in [2, 3] {
            for d in 1..=6 {
                let direct = irreducible_polys(p(q), d).unwrap().len();
                assert_eq!(BigInt::from(direct), irreducible_count(p(q), d));
                let weighted: BigInt =
                    (1..=d).filter(|e| d % e == 0).map(|e| BigInt::from(e) * irreducible_count(p(q), e)).sum();
                assert_eq!(weighted, BigInt::from(p(q).pow(d)));
            }
        }
        assert!(irreducible_polys(p(2), 25).is_err());
    }

    #[test]
    fn gl2_over_f2() {
        let classes = enumerate_classes(2, p(2)).unwrap();
        assert_eq!(classes.len(), 3);
        let orders: Vec<u32> = classes.iter().map(|c| c.centralizer_order().try_into().unwrap()).collect();
        let sizes: Vec<u32> = classes.iter().map(|c| c.class_size().try_into().unwrap()).collect();
        assert_eq!(orders, [2, 6, 3]);
        assert_eq!(sizes, [3, 1, 2]);
        assert_eq!(
            serde_json::to_string(&classes[2]).unwrap(),
            r#"{"n":2,"p":2,"blocks":[{"poly":"x^2+x+1","partition":[1]}]}"#
        );
        assert_eq!(enumerate_classes(1, p(3)).unwrap().len(), 2);
    }

    #[test]
    fn marginal_examples() {
        let one = BTreeMap::from([(part(&[1]), rat(1, 1))]);
        assert_eq!(exact_marginal(1, p(2), 1).unwrap(), one);
        let two = BTreeMap::from([(part(&[]), rat(1, 3)), (part(&[1, 1]), rat(1, 6)), (part(&[2]), rat(1, 2))]);
        assert_eq!(exact_marginal(2, p(2), 1).unwrap(), two);
        let three = BTreeMap::from([(part(&[]), rat(1, 2)), (part(&[1]), rat(1, 2))]);
        assert_eq!(exact_marginal(1, p(3), 1).unwrap(), three);
    }

    #[test]
    fn class_sizes_and_counts() {
        for (q, max_n) in [(2, 6), (3, 4)] {
            for n in 1..=max_n {
                let report = cycle_index_check(n, p(q)).unwrap();
                assert!(report.passed(), "n={n} p={q}: {report:?}");
            }
        }
        assert_eq!(cycle_index_check(3, p(2)).unwrap().class_size_sum, BigUint::from(168u32));
        assert_eq!(class_count_generating_function(6, p(3)), BigInt::from(enumerate_classes(6, p(3)).unwrap().len()));
    }

    #[test]
    fn marginal_matches_generating_function() {
        for (q, max_n) in [(2, 7), (3, 4), (5, 3)] {
            for n in 1..=max_n {
                assert_eq!(exact_marginal(n, p(q), 1).unwrap(), marginal_closed_form(n, p(q)), "n={n} p={q}");
            }
        }
    }

    #[test]
    fn marginal_independent_of_eigenvalue() {
        for (q, n) in [(3, 4), (5, 3)] {
            let base = exact_marginal(n, p(q), 1).unwrap();
            for a in 2..q {
                assert_eq!(exact_marginal(n, p(q), a).unwrap(), base);
            }
        }
    }

    #[test]
    fn converges_to_cl() {
        let ctx = MeasureContext::for_prime(p(2));
        let tvs: Vec<f64> = [2, 4, 6].iter().map(|&n| tv_to_cl(&exact_marginal(n, p(2), 1).unwrap(), &ctx)).collect();
        assert!(tvs.windows(2).all(|w| w[1] < w[0]), "{tvs:?}");
    }
}
