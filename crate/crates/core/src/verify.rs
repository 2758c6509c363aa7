//! Cross-verification suites behind `clh verify`.

use std::fmt;

use clap::ValueEnum;
use num_traits::{One, Zero};

use crate::arith::{rat, to_f64, Prime, Rational};
use crate::cli::{moment_rows, sample_and_compare, SampleParams};
use crate::conjugacy::{cycle_index_check, exact_marginal, marginal_closed_form, tv_to_cl};
use crate::error::Result;
use crate::measure::{
    cl_prob, mehnert_moment, moment_p_rank, prob_exponent_le, prob_order, prob_rank, prob_rank_order,
    surjection_count, twisted_weight, u_prob, weight, zeta_k, MeasureContext, SURJECTION_BUDGET,
};
use crate::oracle::WeightTable;
use crate::partitions::{enumerate_partitions, partitions_of};
use crate::qseries::{eisenstein, QSeries};
use crate::stats::SamplerKind;
use crate::young::{
    exact_chain_law, lattice_walk_law, out_weight, out_weight_closed, p_alg_n, p_alg_output_n, path_weight_sum,
    PATH_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    #[value(name = "closed_forms")]
    ClosedForms,
    Samplers,
    Lattice,
    Conjugacy,
    Zeta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Published moment values of the local order, rows `M_1, V, M_2, M_3, M_4`.
pub const MOMENT_TABLE: [(u64, [f64; 5]); 7] = [
    (2, [1.6067, 2.7440, 5.3255, 24.4734, 145.5087]),
    (3, [0.6822, 0.9494, 1.4148, 3.9984, 14.7677]),
    (5, [0.3017, 0.3660, 0.4571, 0.8848, 2.2088]),
    (7, [0.1909, 0.2191, 0.2556, 0.4173, 0.8596]),
    (11, [0.1091, 0.1192, 0.1311, 0.1817, 0.3053]),
    (13, [0.0898, 0.0968, 0.1048, 0.1387, 0.2189]),
    (17, [0.0662, 0.0701, 0.0745, 0.0926, 0.1340]),
];

/// Published expansions through `q^6`: `M_1, E_2, M_2, M_3, M_4`.
pub const SERIES_TABLE: [(&str, [i64; 6]); 5] = [
    ("M1", [1, 2, 2, 3, 2, 4]),
    ("E2", [1, 3, 4, 7, 6, 12]),
    ("M2", [1, 4, 8, 15, 20, 32]),
    ("M3", [1, 8, 26, 63, 116, 208]),
    ("M4", [1, 16, 80, 255, 608, 1280]),
];

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("hard-coded prime")
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::ClosedForms, Suite::Zeta, Suite::Lattice, Suite::Conjugacy, Suite::Samplers] {
                all.extend(run_suite(s)?);
            }
            all
        }
        Suite::ClosedForms => closed_forms()?,
        Suite::Samplers => samplers()?,
        Suite::Lattice => lattice()?,
        Suite::Conjugacy => conjugacy()?,
        Suite::Zeta => zeta()?,
    })
}

fn series_matches(series: &QSeries, expected: &[i64]) -> bool {
    series.coeff(0).is_some_and(Zero::is_zero)
        && expected.iter().enumerate().all(|(i, &c)| series.coeff(i + 1) == Some(&rat(c, 1)))
}

fn closed_forms() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, coeffs) in SERIES_TABLE {
        let series = match name {
            "E2" => eisenstein(2, 6),
            _ => mehnert_moment(name[1..].parse().expect("digit"), 6),
        };
        checks.push(Check::new(format!("series {name}"), series_matches(&series, &coeffs), "coefficients through q^6"));
    }

    let target = rat(1, 1_000_000_000);
    let mut worst: f64 = 0.0;
    for (p, row) in MOMENT_TABLE {
        for ((_, r), want) in moment_rows(prime(p), &target)?.iter().zip(row) {
            worst = worst.max((r.value_f64() - want).abs());
        }
    }
    checks.push(Check::new("moments table", worst <= 0.0001 + 1e-12, format!("largest deviation {worst:.2e}")));

    let slack = rat(1, 1_000_000_000);
    for p in [2, 3, 5] {
        let ctx = MeasureContext::for_prime(prime(p));
        let table = WeightTable::new(&ctx, ctx.order_bound);
        let mut failures = Vec::new();
        for n in 0..=5 {
            if !table.prob(|l| l.size() == n, true).agrees_with(&prob_order(n, &ctx), &slack) {
                failures.push(format!("order {n}"));
            }
            for r in 0..=n {
                let brute = table.prob(|l| l.size() == n && l.len() == r as usize, true);
                if !brute.agrees_with(&prob_rank_order(n, r, &ctx), &slack) {
                    failures.push(format!("rank_order {n},{r}"));
                }
            }
        }
        for r in 0..=3u32 {
            if !table.prob(|l| l.len() == r as usize, false).agrees_with(&prob_rank(r, &ctx), &slack) {
                failures.push(format!("rank {r}"));
            }
        }
        for e in 0..=3 {
            if !table.prob(|l| l.largest() <= e, false).agrees_with(&prob_exponent_le(e, &ctx), &slack) {
                failures.push(format!("exponent_le {e}"));
            }
        }
        for u in 1..=2 {
            for lam in enumerate_partitions(4, None, None) {
                if !table.u_prob(&lam, u)?.agrees_with(&u_prob(&lam, u, &ctx), &slack) {
                    failures.push(format!("u_prob {lam} u={u}"));
                }
            }
        }
        checks.push(Check::new(
            format!("closed forms vs weight sums p={p}"),
            failures.is_empty(),
            if failures.is_empty() { format!("B={}", ctx.order_bound) } else { failures.join(", ") },
        ));
    }
    Ok(checks)
}

fn zeta() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut bad = Vec::new();
    for p in [2, 3] {
        let pr = prime(p);
        for lam in enumerate_partitions(3, None, None) {
            for k in 0..=3 {
                let s = surjection_count(&lam.to_group_shape(), k, pr, SURJECTION_BUDGET)?;
                let lhs = twisted_weight(&lam, k, pr);
                let rhs = Rational::from_integer(s.into()) * pr.q_pow(k * lam.size()) * weight(&lam, pr);
                if lhs != rhs {
                    bad.push(format!("{lam} k={k} p={p}"));
                }
            }
        }
    }
    checks.push(Check::new("w_k = s_k p^(-k ord) w", bad.is_empty(), bad.join(", ")));

    let mut bad = Vec::new();
    for p in [2, 3, 5] {
        for k1 in 0..=6u32 {
            for k2 in 0..=6 - k1 {
                for s in 0..=3i64 {
                    let lhs = zeta_k(k1 + k2, s, prime(p))?;
                    let rhs = zeta_k(k1, s + i64::from(k2), prime(p))? * zeta_k(k2, s, prime(p))?;
                    if lhs != rhs {
                        bad.push(format!("p={p} k1={k1} k2={k2} s={s}"));
                    }
                }
            }
        }
    }
    checks.push(Check::new("zeta functional equation", bad.is_empty(), bad.join(", ")));

    let moments: Vec<Rational> = [2, 3, 5, 7].iter().map(|&p| moment_p_rank(1, prime(p))).collect();
    checks.push(Check::new(
        "E[p^rank] = 2",
        moments.iter().all(|m| *m == rat(2, 1)),
        format!("{:?}", moments.iter().map(ToString::to_string).collect::<Vec<_>>()),
    ));
    Ok(checks)
}

fn lattice() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [2, 3, 5] {
        for lam in enumerate_partitions(8, None, None) {
            count += 1;
            if path_weight_sum(&lam, prime(p), PATH_BUDGET)? != weight(&lam, prime(p)) {
                bad.push(format!("{lam} p={p}"));
            }
            let conj = lam.conjugate();
            if out_weight(&conj, prime(p)) != out_weight_closed(&conj, prime(p)) {
                bad.push(format!("out {conj} p={p}"));
            }
        }
    }
    checks.push(Check::new("path sums equal 1/#Aut", bad.is_empty(), format!("{count} cases {}", bad.join(", "))));

    let mut bad = Vec::new();
    for p in [2, 3] {
        let b = 8;
        let halted: Rational = enumerate_partitions(b, None, None).map(|l| lattice_walk_law(&l, prime(p))).sum();
        let escaping: Rational = partitions_of(b + 1, b + 1, b + 1).iter().map(|l| weight(l, prime(p))).sum();
        if halted + escaping != Rational::one() {
            bad.push(format!("p={p}"));
        }
    }
    checks.push(Check::new("lattice walk mass", bad.is_empty(), bad.join(", ")));

    let mut bad = Vec::new();
    for p in [2, 3] {
        for n in 1..=3 {
            let law = exact_chain_law(n, 6, prime(p));
            for lam in enumerate_partitions(6, None, None) {
                if law.get(&lam).cloned().unwrap_or_default() != p_alg_n(&lam, n, prime(p)) {
                    bad.push(format!("{lam} N={n} p={p}"));
                }
            }
        }
    }
    checks.push(Check::new("chain law formula vs enumeration", bad.is_empty(), bad.join(", ")));

    let ctx = MeasureContext::for_prime(prime(2));
    let worst = enumerate_partitions(4, None, None)
        .map(|l| (to_f64(&p_alg_output_n(&l, 20, prime(2))) - cl_prob(&l, &ctx).value_f64()).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new("chain law at N=20 near CL", worst < 1e-5, format!("largest deviation {worst:.2e}")));
    Ok(checks)
}

fn conjugacy() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (p, max_n) in [(2, 6), (3, 4)] {
        let mut bad = Vec::new();
        for n in 1..=max_n {
            let report = cycle_index_check(n, prime(p))?;
            if !report.passed() {
                bad.push(format!("n={n}"));
            }
        }
        checks.push(Check::new(
            format!("class sizes sum to |GL(n,{p})|, n <= {max_n}"),
            bad.is_empty(),
            bad.join(", "),
        ));
    }
    let mut bad = Vec::new();
    for (p, max_n) in [(2, 8), (3, 4)] {
        for n in 1..=max_n {
            if exact_marginal(n, prime(p), 1)? != marginal_closed_form(n, prime(p)) {
                bad.push(format!("n={n} p={p}"));
            }
        }
    }
    checks.push(Check::new("marginal from classes vs generating function", bad.is_empty(), bad.join(", ")));
    let ctx = MeasureContext::for_prime(prime(2));
    let mut tvs = Vec::new();
    for n in 2..=8 {
        tvs.push(tv_to_cl(&exact_marginal(n, prime(2), 1)?, &ctx));
    }
    let decreasing = tvs.windows(2).all(|w| w[1] < w[0]);
    checks.push(Check::new(
        "matrix marginal decreases towards CL",
        decreasing,
        format!("TV n=2..8: {}", tvs.iter().map(|t| format!("{t:.2e}")).collect::<Vec<_>>().join(" ")),
    ));
    let mut bad = Vec::new();
    for (p, n) in [(3, 4), (5, 3)] {
        let base = exact_marginal(n, prime(p), 1)?;
        for a in 2..p {
            if exact_marginal(n, prime(p), a)? != base {
                bad.push(format!("p={p} a={a}"));
            }
        }
    }
    checks.push(Check::new("marginal independent of eigenvalue", bad.is_empty(), bad.join(", ")));
    Ok(checks)
}

fn samplers() -> Result<Vec<Check>> {
    let runs = [
        ("ytab vs CL", SampleParams::new(SamplerKind::Ytab, prime(2), 100_000, 42), 0.01),
        ("lattice walk vs exact law", SampleParams::new(SamplerKind::Lattice, prime(2), 100_000, 43), 0.01),
        ("matrix n=4 vs exact marginal", SampleParams::new(SamplerKind::Matrix, prime(2), 100_000, 44), 0.02),
        (
            "cokernel n=2 vs chain law",
            SampleParams { n: 2, k: 12, ..SampleParams::new(SamplerKind::Cokernel, prime(2), 100_000, 45) },
            0.02,
        ),
        ("u-quotient u=1 vs u-probability", SampleParams::new(SamplerKind::Uquotient, prime(2), 100_000, 46), 0.02),
    ];
    let mut checks = Vec::new();
    for (name, params, tol) in runs {
        let (_, cmp) = sample_and_compare(&params, 4)?;
        let tv = to_f64(&cmp.tv);
        checks.push(Check::new(name, tv < tol, format!("TV {tv:.4} (< {tol}), chisq {:.1} on {} dof", cmp.chisq, cmp.dof)));
    }
    Ok(checks)
}
