//! Samples from the Young tableau chain and compares the empirical law with
//! the exact one, then shows how the finite-level law approaches the limit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohen_lenstra::measure::{cl_prob, MeasureContext};
use cohen_lenstra::partitions::Partition;
use cohen_lenstra::stats::SamplerKind;
use cohen_lenstra::young::{p_alg_output_n, YtabSampler};
use cohen_lenstra::cli::{sample_and_compare, SampleParams};
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(2)?;
    let sampler = YtabSampler::new(p, 1e-6)?;
    println!("stop level {} with truncation bias {:.2e}", sampler.stop_level(), sampler.truncation_bias());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws: Vec<String> = (0..8).map(|_| sampler.sample(&mut rng).to_string()).collect();
    println!("first draws: {}", draws.join(" "));

    let (summary, cmp) = sample_and_compare(&SampleParams::new(SamplerKind::Ytab, p, 50_000, 7), 4)?;
    println!("{} draws: TV {:.4}, chi² {:.1} on {} dof, p-value {:.3}", summary.total, cohen_lenstra::arith::to_f64(&cmp.tv), cmp.chisq, cmp.dof, cmp.p_value);

    let ctx = MeasureContext::for_prime(p);
    let mu = Partition::new(vec![2, 1])?;
    println!("\nP({mu}) at level N vs limit {:.6}", cl_prob(&mu, &ctx).value_f64());
    for n in [2, 4, 8, 16] {
        println!("  N = {n:>2}: {:.6}", cohen_lenstra::arith::to_f64(&p_alg_output_n(&mu, n, p)));
    }
    Ok(())
}
