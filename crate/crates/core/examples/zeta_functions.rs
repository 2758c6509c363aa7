//! Local zeta functions of Z_p^k counting finite-index subgroups, and
//! surjection counts onto small groups.

use cohen_lenstra::measure::{surjection_count, zeta_k, zeta_k_f64};
use cohen_lenstra::partitions::GroupShape;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let p = Prime::new(2)?;
    for k in 1..=3 {
        let exact: Vec<String> = (k as i64..k as i64 + 3).map(|s| zeta_k(k, s, p).map(|z| z.to_string())).collect::<Result<_, _>>()?;
        println!("zeta_{k} at s = {}, {}, {}: {}", k, k + 1, k + 2, exact.join(", "));
        println!("  at s = {}: {:.6}", k as f64 + 0.5, zeta_k_f64(k, k as f64 + 0.5, p)?);
    }

    let shape = GroupShape::new(vec![(1, 2)])?;
    for k in 1..=4 {
        println!("#Sur(Z^{k}, (Z/2)^2) = {}", surjection_count(&shape, k, p, 1 << 20)?);
    }
    Ok(())
}
