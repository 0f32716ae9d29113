//! Prime-by-prime factorization of `g^p` above a split prime `q`.

use stickelberger::stickelberger::{root_of_conjugate_prime, verify_stickelberger_deg1, verify_stickelberger_norm};

fn main() -> stickelberger::Result<()> {
    for (p, q) in [(3, 7), (5, 11), (7, 29), (11, 23)] {
        let report = verify_stickelberger_deg1(p, q)?;
        println!("({p}, {q}) passed = {}", report.passed());
        for t in 1..p {
            let c = root_of_conjugate_prime(p, q, t)?;
            println!("  (q, zeta - {c:>3}) carries {}", report.valuations[&c]);
        }
    }
    // inert primes: only the norm side is checkable
    for (p, q) in [(3, 5), (5, 7), (7, 3)] {
        println!("({p}, {q}) norm check = {}", verify_stickelberger_norm(p, q)?);
    }
    Ok(())
}
