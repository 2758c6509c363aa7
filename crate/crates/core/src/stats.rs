//! Empirical summaries of sampler runs and goodness-of-fit against exact laws.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::arith::{to_f64, Rational};
use crate::error::{Error, Result};
use crate::partitions::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Ytab,
    Lattice,
    Matrix,
    Cokernel,
    Uquotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub partition: Partition,
    pub count: u64,
}

/// Counts of sampled partitions. In JSON the counts are a list of
/// `{"partition": [...], "count": n}` records in partition order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSummary {
    #[serde(with = "count_list")]
    pub counts: BTreeMap<Partition, u64>,
    pub total: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub metadata: BTreeMap<String, String>,
}

mod count_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(counts: &BTreeMap<Partition, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<CountEntry> =
            counts.iter().map(|(partition, &count)| CountEntry { partition: partition.clone(), count }).collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Partition, u64>, D::Error> {
        let list = Vec::<CountEntry>::deserialize(d)?;
        Ok(list.into_iter().map(|e| (e.partition, e.count)).collect())
    }
}

impl SampleSummary {
    pub fn new(sampler: SamplerKind, seed: u64) -> Self {
        SampleSummary { counts: BTreeMap::new(), total: 0, seed, sampler, metadata: BTreeMap::new() }
    }

    pub fn record(&mut self, lambda: Partition) {
        *self.counts.entry(lambda).or_default() += 1;
        self.total += 1;
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// Exact total variation distance over the pooled buckets.
    #[serde(serialize_with = "rational_as_f64")]
    pub tv: Rational,
    pub chisq: f64,
    pub dof: usize,
    pub p_value: f64,
    pub buckets: usize,
}

fn rational_as_f64<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(to_f64(x))
}

/// Compares observed counts with an expected law. Partitions larger than
/// `bucket_bound` are pooled into one rest bucket on both sides; the
/// expected rest mass is `1 - Σ` of the listed probabilities within the bound.
pub fn stats_compare(
    observed: &SampleSummary,
    expected: &BTreeMap<Partition, Rational>,
    bucket_bound: u32,
) -> Result<Comparison> {
    if observed.total == 0 {
        return Err(Error::EmptySummary);
    }
    let total = Rational::from_integer(BigInt::from(observed.total));
    let mut keys: Vec<&Partition> = expected.keys().chain(observed.counts.keys()).filter(|l| l.size() <= bucket_bound).collect();
    keys.sort();
    keys.dedup();

    let mut pairs: Vec<(Rational, Rational)> = keys
        .iter()
        .map(|l| {
            let seen = observed.counts.get(*l).copied().unwrap_or(0);
            let want = expected.get(*l).cloned().unwrap_or_default();
            (Rational::from_integer(BigInt::from(seen)) / &total, want)
        })
        .collect();
    let seen_rest: u64 = observed.counts.iter().filter(|(l, _)| l.size() > bucket_bound).map(|(_, &c)| c).sum();
    let want_in: Rational = pairs.iter().map(|(_, e)| e).sum();
    let want_rest = Rational::from_integer(BigInt::from(1)) - want_in;
    let want_rest = if want_rest.is_negative() { Rational::zero() } else { want_rest };
    pairs.push((Rational::from_integer(BigInt::from(seen_rest)) / &total, want_rest));

    let tv: Rational = pairs.iter().map(|(o, e)| (o - e).abs()).sum::<Rational>() / Rational::from_integer(BigInt::from(2));
    let n = observed.total as f64;
    let mut chisq = 0.0;
    let mut live = 0usize;
    for (o, e) in &pairs {
        let e = to_f64(e) * n;
        let o = to_f64(o) * n;
        if e > 0.0 {
            chisq += (o - e).powi(2) / e;
            live += 1;
        } else if o > 0.0 {
            chisq = f64::INFINITY;
        }
    }
    let dof = live.saturating_sub(1);
    let p_value = if chisq.is_infinite() {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|d| d.sf(chisq)).unwrap_or(f64::NAN)
    };
    Ok(Comparison { tv, chisq, dof, p_value, buckets: pairs.len() })
}
