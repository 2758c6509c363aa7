//! Edge weights on Young's lattice: path sums reproduce the group weights and
//! a weighted walk that halts at each vertex is a sampler in its own right.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohen_lenstra::arith::to_f64;
use cohen_lenstra::measure::weight;
use cohen_lenstra::partitions::{partitions_of, Partition};
use cohen_lenstra::young::{edge_weight, lattice_walk_law, path_weight_sum, LatticeWalk, PATH_BUDGET};
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(3)?;
    let root = Partition::empty();
    for (_, next) in root.covers() {
        for (_, top) in next.covers() {
            println!("{root} -> {next} -> {top}: {} · {}", edge_weight(&root, &next, p)?, edge_weight(&next, &top, p)?);
        }
    }

    println!("\npath sums against 1/#Aut at p = {p}:");
    for lambda in partitions_of(4, 4, 4) {
        let paths = path_weight_sum(&lambda, p, PATH_BUDGET)?;
        println!("  {lambda:<10} {paths:<14} {}", if paths == weight(&lambda, p) { "ok" } else { "MISMATCH" });
    }

    let walk = LatticeWalk::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 100_000;
    let hits = (0..n).filter(|_| walk.sample(&mut rng).is_empty()).count();
    let exact = lattice_walk_law(&root, p);
    println!("\nwalk halts at the root: {:.4} observed, {:.4} exact", hits as f64 / n as f64, to_f64(&exact));
    Ok(())
}
