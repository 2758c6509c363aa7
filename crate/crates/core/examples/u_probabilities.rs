//! The law of H modulo u random elements when H is drawn from the
//! u-weighted measure, exactly and by simulation.


use cohen_lenstra::cli::{sample_and_compare, SampleParams};
use cohen_lenstra::measure::{u_prob, MeasureContext};
use cohen_lenstra::partitions::partitions_of;
use cohen_lenstra::stats::SamplerKind;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(2)?;
    let ctx = MeasureContext::for_prime(p);
    for u in 0..=2 {
        let shown: Vec<String> = (0..=2)
            .flat_map(|n| partitions_of(n, n, n))
            .map(|l| format!("{l}: {:.4}", u_prob(&l, u, &ctx).value_f64()))
            .collect();
        println!("u = {u}: {}", shown.join(", "));
    }

    let mut params = SampleParams::new(SamplerKind::Uquotient, p, 40_000, 5);
    params.u = 1;
    let (_, cmp) = sample_and_compare(&params, 4)?;
    println!("\nquotient sampler, u = 1: TV {:.4}, p-value {:.3}", cohen_lenstra::arith::to_f64(&cmp.tv), cmp.p_value);
    Ok(())
}
