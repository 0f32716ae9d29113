//! Gauss sums by character sum and by Jacobi resolvent.
//!
//! Run with `cargo run --example gauss_sums -- 5 11`.

use stickelberger::gauss::{gauss_sum, gauss_sum_charsum, gauss_sum_resolvent, ResolventReport};
use stickelberger::{BiCycloInt, CycloInt};

fn main() -> stickelberger::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (5, 11),
    };

    let report = ResolventReport::new(p, q)?;
    println!("p = {p}, q = {q}, f = {}, u = {}, v = {}", report.f, report.u, report.v);
    if report.f == 1 {
        let by_chars = gauss_sum_charsum(p, q)?;
        let by_resolvent = gauss_sum_resolvent(p, q)?;
        println!("character sum == resolvent: {}", by_chars == by_resolvent);
    }
    let g = gauss_sum(p, q)?;
    println!("g = {g}");
    println!("g lies in Z[zeta_p]: {}", g.as_cyclo().is_some());
    let q_f = CycloInt::from_int(p, num_bigint::BigInt::from(q).pow(report.f as u32));
    println!("g * conj(g) = q^f: {}", &g * &g.conjugate() == BiCycloInt::from_cyclo(q_f, q)?);
    println!("g^p = {}", report.g_p);
    println!("v_pi(g^p + 1) = {}", report.v_gp_plus_1);
    println!("g mod lambda = {}", g.eval_zeta_p_to_one());
    Ok(())
}
