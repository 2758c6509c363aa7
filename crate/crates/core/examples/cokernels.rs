//! Cokernels of random square matrices over Z/p^k via Smith normal form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohen_lenstra::fplinalg::{cokernel_sample, ModMatrix};
use cohen_lenstra::measure::{cl_prob, MeasureContext};
use cohen_lenstra::partitions::Partition;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(3)?;
    let m = ModMatrix::from_rows(&[vec![3, 0, 0], vec![0, 9, 3], vec![0, 0, 1]], p, 4)?;
    println!("Smith exponents of a fixed matrix: {:?}", m.smith_exponents());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, k, draws) = (8, 10, 20_000);
    let mut trivial = 0;
    let mut cyclic3 = 0;
    let target = Partition::new(vec![1])?;
    for _ in 0..draws {
        let s = cokernel_sample(n, p, k, &mut rng)?;
        if s.partition.is_empty() {
            trivial += 1;
        } else if s.partition == target {
            cyclic3 += 1;
        }
    }
    let ctx = MeasureContext::for_prime(p);
    println!("trivial cokernel: {:.4} observed, {:.4} limit", trivial as f64 / draws as f64, cl_prob(&Partition::empty(), &ctx).value_f64());
    println!("cokernel Z/3:     {:.4} observed, {:.4} limit", cyclic3 as f64 / draws as f64, cl_prob(&target, &ctx).value_f64());
    Ok(())
}
