//! Primes `q1 = a + lambda^(p+1) z` of prime norm and the Fermat condition on their norms.

use stickelberger::suite::witness_search;

fn main() -> stickelberger::Result<()> {
    for a in 1..5 {
        let found = witness_search(5, a, 2, 5)?;
        println!("a = {a}: {} witnesses in {} candidates", found.records.len(), found.examined);
        for w in &found.records {
            println!("  N = {:>12}  fermat = {}  q1 = {}", w.norm_q, w.fermat_holds, w.q1_coeffs);
        }
    }
    Ok(())
}
