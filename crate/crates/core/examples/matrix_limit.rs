//! Jordan data of random invertible matrices over F_p: the block at an
//! eigenvalue, both sampled and computed exactly from conjugacy classes.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohen_lenstra::arith::to_f64;
use cohen_lenstra::conjugacy::{enumerate_classes, exact_marginal, tv_to_cl};
use cohen_lenstra::fplinalg::random_gl;
use cohen_lenstra::measure::MeasureContext;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(2)?;
    let ctx = MeasureContext::for_prime(p);

    let classes = enumerate_classes(3, p)?;
    println!("GL(3, {p}) has {} conjugacy classes", classes.len());
    for label in classes.iter().take(4) {
        println!("  {}  size {}", serde_json::to_string(label).unwrap(), label.class_size());
    }

    println!("\ndistance of the X-1 block law to the limit:");
    for n in 1..=8 {
        println!("  n = {n}: TV {:.6}", tv_to_cl(&exact_marginal(n, p, 1)?, &ctx));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = BTreeMap::new();
    let draws = 20_000;
    for _ in 0..draws {
        *counts.entry(random_gl(5, p, &mut rng)?.partition_at(1)).or_insert(0u32) += 1;
    }
    let exact = exact_marginal(5, p, 1)?;
    println!("\nGL(5, {p}) sampled vs exact:");
    for (lambda, prob) in exact.iter().filter(|(l, _)| l.size() <= 2) {
        let seen = counts.get(lambda).copied().unwrap_or(0);
        println!("  {lambda:<6} {:.4} {:.4}", seen as f64 / draws as f64, to_f64(prob));
    }
    Ok(())
}
