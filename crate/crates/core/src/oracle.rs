//! Brute-force references for the closed forms.
//!
//! [`count_automorphisms`] counts generating tuples directly in the group,
//! and [`WeightTable`] sums `1/#Aut` over every partition up to a size bound,
//! bounding the remainder by the known total weight `∏ (1 - p^{-i})^{-1}`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{Prime, Rational};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup};
use crate::measure::{weight, MeasureContext};
use crate::partitions::{enumerate_partitions, Partition};
use crate::qseries::EvalResult;

/// Largest group [`count_automorphisms`] will build.
pub const AUT_BUDGET: usize = 1 << 12;

/// `#Aut(G_λ)` as the number of tuples `(x_1, …, x_k)` with `p^{λ_i} x_i = 0`
/// that generate the group. Tuples are grouped by the subgroup generated so
/// far, and candidates `x` by their coset of that subgroup.
pub fn count_automorphisms(lambda: &Partition, p: Prime) -> Result<u128> {
    let group = AbelianGroup::new(lambda, p, AUT_BUDGET).ok_or(Error::BudgetExceeded {
        what: "group elements",
        needed: u128::MAX,
        budget: AUT_BUDGET as u128,
    })?;
    let killers: Vec<usize> = lambda.parts().iter().map(|&e| (p.get() as usize).pow(e)).collect();
    let mut memo: HashMap<(usize, Vec<u64>), u128> = HashMap::new();
    Ok(count_from(&group, &killers, 0, &group.trivial_subgroup(), &mut memo))
}

fn count_from(
    group: &AbelianGroup,
    killers: &[usize],
    i: usize,
    h: &Subgroup,
    memo: &mut HashMap<(usize, Vec<u64>), u128>,
) -> u128 {
    if i == killers.len() {
        return u128::from(h.len() == group.order());
    }
    let key = (i, h.bits.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut seen = vec![false; group.order()];
    let mut total = 0u128;
    for x in 0..group.order() {
        if seen[x] {
            continue;
        }
        let mut valid = 0u128;
        for &e in &h.elements {
            let y = group.add(x, e);
            seen[y] = true;
            if group.scale(y, killers[i]) == 0 {
                valid += 1;
            }
        }
        if valid > 0 {
            total += valid * count_from(group, killers, i + 1, &group.extend(h, x), memo);
        }
    }
    memo.insert(key, total);
    total
}

/// Cohen-Lenstra weights of every partition of size at most `bound`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    pub p: Prime,
    pub bound: u32,
    pub entries: Vec<(Partition, Rational)>,
    total: Rational,
    phi: EvalResult,
}

impl WeightTable {
    pub fn new(ctx: &MeasureContext, bound: u32) -> Self {
        let entries: Vec<(Partition, Rational)> =
            enumerate_partitions(bound, None, None).map(|l| {
                let w = weight(&l, ctx.p);
                (l, w)
            }).collect();
        let total = entries.iter().map(|(_, w)| w).sum();
        WeightTable { p: ctx.p, bound, entries, total, phi: ctx.phi() }
    }

    /// Upper bound on the weight of all partitions beyond the bound.
    pub fn tail_weight(&self) -> Rational {
        let rest = Rational::one() / self.phi.lo() - &self.total;
        if rest.is_positive() { rest } else { Rational::zero() }
    }

    /// Probability of `pred` under the normalized measure. When `finite` is
    /// set the caller promises `pred` holds only for sizes within the bound,
    /// so the tail is dropped.
    pub fn prob<F: Fn(&Partition) -> bool>(&self, pred: F, finite: bool) -> EvalResult {
        let hit: Rational = self.entries.iter().filter(|(l, _)| pred(l)).map(|(_, w)| w).sum();
        let lo = &hit * self.phi.lo();
        let hi = if finite { hit * self.phi.hi() } else { (hit + self.tail_weight()) * self.phi.hi() };
        EvalResult::from_interval(lo, hi)
    }

    /// `P_u(λ)` by normalizing `w(μ) p^{-u|μ|}` over the table.
    pub fn u_prob(&self, lambda: &Partition, u: u32) -> Result<EvalResult> {
        if lambda.size() > self.bound {
            return Err(Error::InvalidParameter(format!("{lambda} lies beyond the table bound")));
        }
        let shrink = |l: &Partition| self.p.q_pow(u * l.size());
        let partial: Rational = self.entries.iter().map(|(l, w)| w * shrink(l)).sum();
        let tail = self.tail_weight() * self.p.q_pow(u * (self.bound + 1));
        let top = weight(lambda, self.p) * shrink(lambda);
        Ok(EvalResult::from_interval(&top / (&partial + tail), top / partial))
    }
}
