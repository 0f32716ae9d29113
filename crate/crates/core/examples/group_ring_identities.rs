//! The Stickelberger element and its quotient in `Z[G_p]`.

use num_bigint::BigInt;
use stickelberger::group_ring::{
    default_generator, delta_bounds_check, delta_coefficients, half_orbit_sum, stickelberger_p, stickelberger_q,
    stickelberger_q1, GroupRingElt,
};
use stickelberger::CycloInt;

fn main() -> stickelberger::Result<()> {
    for p in [5, 7, 11, 13] {
        let v = default_generator(p)?;
        let big_p = stickelberger_p(p, v)?;
        let q = stickelberger_q(p, v)?;
        let q1 = stickelberger_q1(p, v)?;
        println!("p = {p}, v = {v}");
        println!("  P  = {big_p}");
        println!("  Q  = {q}");
        println!("  Q1 = {q1}");
        println!("  delta = {:?}", delta_coefficients(p, v)?);
        let lhs = big_p.checked_mul(&GroupRingElt::sigma_minus(p, v, v)?)?;
        println!("  P (s - v) = p Q: {}", lhs == q.scale(&BigInt::from(p)));
        println!("  Q = Q1 * half orbit: {}", q1.checked_mul(&half_orbit_sum(p, v)?)? == q);
        println!("  delta bounds: {}", delta_bounds_check(p, v)?);
    }

    // exponent action: x^(1 + s) = x * sigma(x)
    let x = CycloInt::from_i64s(5, &[2, 1])?;
    let e = GroupRingElt::from_i64s(5, 2, &[1, 1, 0, 0])?;
    println!("(2 + zeta)^(1 + s) = {}", e.apply_exponent(&x)?);
    let inv = GroupRingElt::from_i64s(5, 2, &[-1, 0, 0, 0])?;
    println!("(2 + zeta)^-1 = {}", inv.apply_exponent(&x)?);
    Ok(())
}
