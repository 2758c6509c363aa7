//! Exact probabilities of small p-groups and of order, rank and exponent
//! events, each printed with its certified tail bound.

use cohen_lenstra::measure::{cl_prob, prob_exponent_le, prob_order, prob_rank, MeasureContext};
use cohen_lenstra::partitions::partitions_of;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    for p in [2, 3, 5] {
        let p = Prime::new(p)?;
        let ctx = MeasureContext::for_prime(p);
        println!("p = {p}");
        for n in 0..=3 {
            for lambda in partitions_of(n, n, n) {
                let r = cl_prob(&lambda, &ctx);
                println!("  P({lambda:<8}) = {:.6}  (± {:.1e})", r.value_f64(), r.bound_f64());
            }
        }
        for n in 0..=2 {
            println!("  P(|G| = p^{n}) = {:.6}", prob_order(n, &ctx).value_f64());
        }
        for r in 0..=2 {
            println!("  P(rank = {r})  = {:.6}", prob_rank(r, &ctx).value_f64());
        }
        println!("  P(exponent ≤ p) = {:.6}", prob_exponent_le(1, &ctx).value_f64());
    }
    Ok(())
}
