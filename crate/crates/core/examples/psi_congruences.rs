//! The Jacobi cyclotomic function `psi_{a,b}` against `rho`.

use stickelberger::gauss::{psi, psi_identity_check, rho, Rho};
use stickelberger::suite::{powersum_check_with_rho, psi_valuation};

fn main() -> stickelberger::Result<()> {
    let (a, b) = (1, -2);
    println!("psi_(1,-2) at (3, 7) = {}", psi(3, 7, a, b)?);
    for (p, q) in [(5, 11), (5, 31), (5, 211), (7, 29), (7, 43), (11, 23)] {
        let r = rho(p, q)?;
        let v = psi_valuation(p, q, a, b)?;
        let congruent = match r {
            Rho::Value(k) if k <= p as i64 => Some(v.at_least(k as u32)),
            _ => None,
        };
        println!(
            "({p:>2}, {q:>3}) psi = {}  rho = {r}  v(psi + 1) = {v}  congruence = {congruent:?}  powersums = {}  identity = {}",
            psi(p, q, a, b)?,
            powersum_check_with_rho(p, q, a, b, r)?,
            psi_identity_check(p, q, a, b)?,
        );
    }
    Ok(())
}
