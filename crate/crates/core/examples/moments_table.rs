//! Moments of the p-rank, evaluated from truncated q-series to four decimals.

use cohen_lenstra::cli::{cmd_table, Format, TableKind};
use cohen_lenstra::measure::moment_p_rank;
use cohen_lenstra::Prime;

fn main() -> cohen_lenstra::Result<()> {
    let primes: Vec<Prime> = [2, 3, 5, 7, 11, 13, 17].into_iter().map(Prime::new).collect::<Result<_, _>>()?;
    let table = cmd_table(TableKind::Moments, &primes, 4, 0)?;
    print!("{}", table.render(Format::Text));

    let p = primes[0];
    println!("\nexact E[p^(k·rank)] at p = {p}:");
    for k in 1..=3 {
        println!("  k = {k}: {}", moment_p_rank(k, p));
    }
    Ok(())
}
