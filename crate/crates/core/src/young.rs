//! The Young tableau chain and the weighted Young lattice.
//!
//! The chain grows a partition box by box. Coin `N` shows heads with
//! probability `p^{-N}`; on heads a box is added to a row chosen by
//! [`step2_distribution`], on tails the level moves to `N + 1`. The chain's
//! output is the conjugate of the limiting state.
//!
//! The lattice side indexes vertices by conjugate partitions and puts the
//! weights of [`edge_weight`] on the covering edges; summing path products
//! from `()` recovers `1/#Aut`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::arith::{q_pochhammer, Prime, Rational};
use crate::error::{Error, Result};
use crate::measure::weight;
use crate::partitions::Partition;

/// Internal state of the chain: the (unconjugated) partition and the level
/// of the coin currently being flipped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainState {
    pub lam: Partition,
    pub level: u32,
}

impl ChainState {
    pub fn new(lam: Partition, level: u32) -> Self {
        assert!(level >= 1, "coin levels start at 1");
        assert!(lam.largest() <= level, "state {lam} cannot occur at level {level}");
        ChainState { lam, level }
    }

    pub fn start() -> Self {
        ChainState { lam: Partition::empty(), level: 1 }
    }
}

/// Row probabilities for adding a box after coin `N` shows heads. Entry `s`
/// (1-based) is `(p^{N-λ_1} - 1)/(p^N - 1)` for `s = 1` and
/// `(p^{N-λ_s} - p^{N-λ_{s-1}})/(p^N - 1)` otherwise; every row up to the
/// first empty one is listed, including zero-probability rows.
pub fn step2_distribution(state: &ChainState, p: Prime) -> Vec<(usize, Rational)> {
    let n = state.level;
    let lam = &state.lam;
    let pw = |e: u32| BigInt::from(p.pow(e));
    let den: BigInt = pw(n) - 1;
    (0..=lam.len())
        .map(|s| {
            let num: BigInt = if s == 0 {
                pw(n - lam.row(0)) - 1
            } else {
                pw(n - lam.row(s)) - pw(n - lam.row(s - 1))
            };
            (s + 1, Rational::new(num, den.clone()))
        })
        .collect()
}

fn add_box(lam: &Partition, row: usize) -> Partition {
    let mut parts = lam.parts().to_vec();
    if row == parts.len() {
        parts.push(1);
    } else {
        parts[row] += 1;
    }
    Partition::new(parts).expect("box added to a legal row")
}

/// Law of the chain state at the moment coin `level` shows tails, by
/// exhaustive enumeration of head sequences. States with more than
/// `max_size` boxes are dropped (boxes are never removed, so the law of the
/// smaller states is exact).
pub fn exact_chain_law(level: u32, max_size: u32, p: Prime) -> BTreeMap<Partition, Rational> {
    let mut law: BTreeMap<Partition, Rational> = BTreeMap::new();
    law.insert(Partition::empty(), Rational::one());
    for n in 1..=level {
        let heads = p.q_pow(n);
        let tails = Rational::one() - &heads;
        let mut settled: BTreeMap<Partition, Rational> = BTreeMap::new();
        let mut live = law;
        while !live.is_empty() {
            let mut next: BTreeMap<Partition, Rational> = BTreeMap::new();
            for (lam, prob) in live {
                *settled.entry(lam.clone()).or_default() += &prob * &tails;
                if lam.size() == max_size {
                    continue;
                }
                let state = ChainState::new(lam, n);
                for (row, pr) in step2_distribution(&state, p) {
                    if pr.is_zero() {
                        continue;
                    }
                    let child = add_box(&state.lam, row - 1);
                    *next.entry(child).or_default() += &prob * &heads * pr;
                }
            }
            live = next;
        }
        law = settled;
    }
    law
}

/// Probability that the chain state equals `lam` when coin `n` shows tails:
/// `∏_{i=N-λ_1+1}^{N} (1-p^{-i}) · ∏_{i=1}^{N} (1-p^{-i}) · w(λ')`,
/// zero if `λ_1 > N`. The weight is taken at the conjugate `λ'`, matching
/// the fact that the chain's output is the conjugate of its state.
pub fn p_alg_n(lam: &Partition, n: u32, p: Prime) -> Rational {
    let top = lam.largest();
    if top > n {
        return Rational::zero();
    }
    q_pochhammer(p, n - top + 1, n) * q_pochhammer(p, 1, n) * weight(&lam.conjugate(), p)
}

/// Law of the conjugated state (the chain's output side) at level `n`:
/// `p_alg_n(μ', n)`. Tends to the Cohen-Lenstra probability of `μ` and
/// coincides with the cokernel law of a random `n × n` p-adic matrix.
pub fn p_alg_output_n(mu: &Partition, n: u32, p: Prime) -> Rational {
    p_alg_n(&mu.conjugate(), n, p)
}

/// Sampler for the chain output. The number of heads at each level is drawn
/// from its geometric law, and the run stops at the first level `N` where the
/// expected number of further boxes `Σ_{M>N} p^{-M}/(1-p^{-M})` is below `eps`.
#[derive(Debug, Clone)]
pub struct YtabSampler {
    p: Prime,
    eps: f64,
    stop_level: u32,
    residual: f64,
}

/// Smallest accepted `eps`; keeps `p^N` inside `u128` at the stop level.
pub const MIN_EPS: f64 = 1e-30;

pub const DEFAULT_EPS: f64 = 1e-6;

impl YtabSampler {
    pub fn new(p: Prime, eps: f64) -> Result<Self> {
        if !(MIN_EPS..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "eps must lie in [{MIN_EPS:e}, 1), got {eps}"
            )));
        }
        let pf = p.get() as f64;
        let residual_after = |n: u32| -> f64 {
            (n + 1..n + 200)
                .map(|m| {
                    let h = pf.powi(-(m as i32));
                    h / (1.0 - h)
                })
                .sum()
        };
        let mut stop_level = 1;
        while residual_after(stop_level) >= eps {
            stop_level += 1;
        }
        Ok(YtabSampler { p, eps, stop_level, residual: residual_after(stop_level) })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn stop_level(&self) -> u32 {
        self.stop_level
    }

    /// Expected number of boxes the truncated run misses; bounds the total
    /// variation error of the output law.
    pub fn truncation_bias(&self) -> f64 {
        self.residual
    }

    /// Runs the chain and returns its final internal state.
    pub fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainState {
        let p = self.p.get() as u128;
        let mut parts: Vec<u32> = Vec::new();
        for n in 1..=self.stop_level {
            let heads_prob = (self.p.get() as f64).powi(-(n as i32));
            let heads = Geometric::new(1.0 - heads_prob)
                .expect("tail probability in (0, 1]")
                .sample(rng);
            let pn = p.pow(n);
            for _ in 0..heads {
                let row = |s: usize| parts.get(s).copied().unwrap_or(0);
                let mut draw = rng.random_range(0..pn - 1);
                let mut chosen = parts.len();
                for s in 0..=parts.len() {
                    let mass = if s == 0 {
                        p.pow(n - row(0)) - 1
                    } else {
                        p.pow(n - row(s)) - p.pow(n - row(s - 1))
                    };
                    if draw < mass {
                        chosen = s;
                        break;
                    }
                    draw -= mass;
                }
                if chosen == parts.len() {
                    parts.push(1);
                } else {
                    parts[chosen] += 1;
                }
            }
        }
        ChainState::new(Partition::new(parts).expect("chain keeps rows ordered"), self.stop_level)
    }

    /// One draw from the (truncated) output law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        self.sample_state(rng).lam.conjugate()
    }
}

/// Weight `m_{λ',μ'}` of the lattice edge `from_conj → to_conj`:
/// `1/(p^{λ'_1}(p^{λ'_1+1} - 1))` if row 1 grows, and
/// `(p^{-λ'_s} - p^{-λ'_{s-1}})/(p^{λ'_1} - 1)` if row `s > 1` grows.
pub fn edge_weight(from_conj: &Partition, to_conj: &Partition, p: Prime) -> Result<Rational> {
    let row = from_conj
        .covers()
        .into_iter()
        .find(|(_, c)| c == to_conj)
        .map(|(s, _)| s)
        .ok_or_else(|| Error::NotACover(format!("{from_conj} -> {to_conj}")))?;
    Ok(edge_weight_at(from_conj, row, p))
}

fn edge_weight_at(from_conj: &Partition, row: usize, p: Prime) -> Rational {
    let a = from_conj.row(0);
    if row == 0 {
        Rational::new(BigInt::one(), BigInt::from(p.pow(a) * (p.pow(a + 1) - 1u32)))
    } else {
        let num = p.q_pow(from_conj.row(row)) - p.q_pow(from_conj.row(row - 1));
        num / Rational::from_integer(BigInt::from(p.pow(a)) - 1)
    }
}

/// Total weight on the edges leaving `from_conj`.
pub fn out_weight(from_conj: &Partition, p: Prime) -> Rational {
    from_conj.covers().into_iter().map(|(row, _)| edge_weight_at(from_conj, row, p)).sum()
}

/// `p/(p^{λ'_1+1} - 1)`, or `1/(p-1)` at the empty partition.
pub fn out_weight_closed(from_conj: &Partition, p: Prime) -> Rational {
    let a = from_conj.row(0);
    let num = if from_conj.is_empty() { BigInt::one() } else { BigInt::from(p.get()) };
    Rational::new(num, BigInt::from(p.pow(a + 1)) - 1)
}

/// Most lattice vertices [`path_weight_sum`] will visit.
pub const PATH_BUDGET: usize = 1 << 20;

/// Sum over all saturated paths `() → λ'` of the product of edge weights.
pub fn path_weight_sum(lambda: &Partition, p: Prime, budget: usize) -> Result<Rational> {
    let target = lambda.conjugate();
    let mut memo: HashMap<Partition, Rational> = HashMap::new();
    memo.insert(Partition::empty(), Rational::one());
    fn visit(
        node: &Partition,
        p: Prime,
        memo: &mut HashMap<Partition, Rational>,
        budget: usize,
    ) -> Result<Rational> {
        if let Some(v) = memo.get(node) {
            return Ok(v.clone());
        }
        if memo.len() >= budget {
            return Err(Error::BudgetExceeded {
                what: "lattice vertices",
                needed: memo.len() as u128 + 1,
                budget: budget as u128,
            });
        }
        let mut acc = Rational::zero();
        for (_, pred) in node.predecessors() {
            let below = visit(&pred, p, memo, budget)?;
            acc += below * edge_weight(&pred, node, p)?;
        }
        memo.insert(node.clone(), acc.clone());
        Ok(acc)
    }
    visit(&target, p, &mut memo, budget)
}

/// Halting probability of the walk at conjugate vertex `λ'`.
pub fn halt_probability(lam_conj: &Partition, p: Prime) -> Rational {
    Rational::one() - out_weight_closed(lam_conj, p)
}

/// Exact output law of [`LatticeWalk`]: `w(λ) · (1 - out(λ'))`.
pub fn lattice_walk_law(lambda: &Partition, p: Prime) -> Rational {
    weight(lambda, p) * halt_probability(&lambda.conjugate(), p)
}

/// Random walk on the weighted lattice, treating edge weights as transition
/// probabilities and the missing mass as halting.
#[derive(Debug, Clone, Copy)]
pub struct LatticeWalk {
    p: Prime,
}

impl LatticeWalk {
    pub fn new(p: Prime) -> Self {
        LatticeWalk { p }
    }

    fn edge_weight_f64(&self, from_conj: &Partition, row: usize) -> f64 {
        let p = self.p.get() as f64;
        let a = from_conj.row(0) as i32;
        if row == 0 {
            1.0 / (p.powi(a) * (p.powi(a + 1) - 1.0))
        } else {
            (p.powi(-(from_conj.row(row) as i32)) - p.powi(-(from_conj.row(row - 1) as i32)))
                / (p.powi(a) - 1.0)
        }
    }

    /// Returns the partition whose conjugate is the vertex where the walk halts.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let mut here = Partition::empty();
        loop {
            let mut draw: f64 = rng.random();
            let mut moved = None;
            for (row, next) in here.covers() {
                let w = self.edge_weight_f64(&here, row);
                if draw < w {
                    moved = Some(next);
                    break;
                }
                draw -= w;
            }
            match moved {
                Some(next) => here = next,
                None => return here.conjugate(),
            }
        }
    }
}
