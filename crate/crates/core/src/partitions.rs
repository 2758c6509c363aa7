//! Integer partitions and their identification with finite abelian p-groups.
//!
//! A part of value `e` stands for one cyclic factor `Z/p^e`, so the number of
//! parts is the rank, the size is the p-adic order and the largest part is
//! the p-adic exponent.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::Prime;
use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validates that `parts` is weakly decreasing and free of zeros.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&x| x == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Row `i` (0-based), 0 beyond the last row.
    pub fn row(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.largest() as usize;
        let mut out = vec![0u32; cols];
        for &part in &self.0 {
            for c in out.iter_mut().take(part as usize) {
                *c += 1;
            }
        }
        Partition(out)
    }

    pub fn to_group_shape(&self) -> GroupShape {
        let mut blocks: Vec<(u32, u32)> = Vec::new();
        for &part in &self.0 {
            match blocks.last_mut() {
                Some((e, r)) if *e == part => *r += 1,
                _ => blocks.push((part, 1)),
            }
        }
        GroupShape { blocks }
    }

    pub fn from_group_shape(shape: &GroupShape) -> Partition {
        let mut parts = Vec::with_capacity(shape.rank() as usize);
        for &(e, r) in &shape.blocks {
            parts.extend(std::iter::repeat_n(e, r as usize));
        }
        Partition(parts)
    }

    /// Partitions covering `self` in the Young lattice (one box added),
    /// listed by the row that grows.
    pub fn covers(&self) -> Vec<(usize, Partition)> {
        let mut out = Vec::new();
        for s in 0..=self.len() {
            if s == 0 || self.row(s) < self.row(s - 1) {
                let mut parts = self.0.clone();
                if s == parts.len() {
                    parts.push(1);
                } else {
                    parts[s] += 1;
                }
                out.push((s, Partition(parts)));
            }
        }
        out
    }

    /// Partitions covered by `self` (one corner box removed).
    pub fn predecessors(&self) -> Vec<(usize, Partition)> {
        let mut out = Vec::new();
        for s in 0..self.len() {
            if self.row(s) > self.row(s + 1) {
                let mut parts = self.0.clone();
                parts[s] -= 1;
                if parts[s] == 0 {
                    parts.pop();
                }
                out.push((s, Partition(parts)));
            }
        }
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded by size, then lexicographically descending.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// `4+2+1`, with `()` for the empty partition.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.pad("()");
        }
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.pad(&s.join("+"))
    }
}

/// Accepts `4+2+1`, `()`, `0`, `(4,2,1)` and `[4,2,1]`.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() || inner == "0" {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(['+', ','])
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Elementary-divisor form `∏ (Z/p^{e_i})^{r_i}` with `e_1 > e_2 > … > 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    blocks: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupStats {
    pub order_p: u32,
    pub rank: u32,
    pub exponent_p: u32,
}

impl GroupShape {
    pub fn new(blocks: Vec<(u32, u32)>) -> Result<Self> {
        if blocks.iter().any(|&(e, r)| e == 0 || r == 0) {
            return Err(Error::InvalidPartition(format!("{blocks:?} has a zero entry")));
        }
        if blocks.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidPartition(format!(
                "{blocks:?}: exponents must strictly decrease"
            )));
        }
        Ok(GroupShape { blocks })
    }

    pub fn trivial() -> Self {
        GroupShape::default()
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    pub fn order_p(&self) -> u32 {
        self.blocks.iter().map(|&(e, r)| e * r).sum()
    }

    pub fn rank(&self) -> u32 {
        self.blocks.iter().map(|&(_, r)| r).sum()
    }

    pub fn exponent_p(&self) -> u32 {
        self.blocks.first().map_or(0, |&(e, _)| e)
    }

    pub fn stats(&self) -> GroupStats {
        GroupStats {
            order_p: self.order_p(),
            rank: self.rank(),
            exponent_p: self.exponent_p(),
        }
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_group_shape(self)
    }
}

/// `#Aut(G)` for `G = ∏ (Z/p^{e_i})^{r_i}`.
pub fn aut_order(shape: &GroupShape, p: Prime) -> BigUint {
    aut_order_q(shape, &p.big())
}

/// The automorphism-count formula with the prime replaced by an arbitrary
/// base `Q ≥ 2`. For `Q = p^d` this is the centralizer contribution of an
/// irreducible polynomial of degree `d` in `GL(n, p)`.
///
/// `∏_i ∏_{s=1}^{r_i} (1 - Q^{-s}) · ∏_{i,j} Q^{min(e_i,e_j) r_i r_j}`
/// is evaluated as `∏_i ∏_s (Q^s - 1) · Q^{N - D}` with `D = Σ r_i(r_i+1)/2`.
pub fn aut_order_q(shape: &GroupShape, q: &BigUint) -> BigUint {
    let blocks = shape.blocks();
    let mut n_exp: u64 = 0;
    for &(ei, ri) in blocks {
        for &(ej, rj) in blocks {
            n_exp += u64::from(ei.min(ej)) * u64::from(ri) * u64::from(rj);
        }
    }
    let d_exp: u64 = blocks
        .iter()
        .map(|&(_, r)| u64::from(r) * u64::from(r + 1) / 2)
        .sum();
    debug_assert!(n_exp >= d_exp);
    let mut acc = BigUint::one();
    for &(_, r) in blocks {
        for s in 1..=r {
            acc *= q.pow(s) - 1u32;
        }
    }
    acc * q.pow((n_exp - d_exp) as u32)
}

/// Every partition of size `≤ max_size` with parts `≤ max_part` and at most
/// `max_parts` parts, graded by size and lexicographically descending within
/// a size.
pub fn enumerate_partitions(
    max_size: u32,
    max_part: Option<u32>,
    max_parts: Option<u32>,
) -> impl Iterator<Item = Partition> {
    let max_part = max_part.unwrap_or(u32::MAX);
    let max_parts = max_parts.unwrap_or(u32::MAX);
    (0..=max_size).flat_map(move |n| partitions_of(n, max_part, max_parts).into_iter())
}

/// Partitions of exactly `n`, lexicographically descending.
pub fn partitions_of(n: u32, max_part: u32, max_parts: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, max_part.min(n), max_parts, &mut cur, &mut out);
    out
}

fn fill(rest: u32, cap: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    for first in (1..=cap.min(rest)).rev() {
        // remaining slots can hold at most first * (slots - 1) boxes
        if u64::from(first) * u64::from(slots) < u64::from(rest) {
            break;
        }
        cur.push(first);
        fill(rest - first, first, slots - 1, cur, out);
        cur.pop();
    }
}
