//! `pi`-adic valuations and expansions in `Z[zeta_p]`.

use stickelberger::CycloInt;

fn main() -> stickelberger::Result<()> {
    let p = 7;
    let lambda = CycloInt::lambda(p);
    let samples = [
        CycloInt::from_int(p, p),
        lambda.pow(3),
        CycloInt::from_i64s(p, &[3, -1, 4, 1, -5, 9])?,
        &CycloInt::from_i64s(p, &[1, 1])? * &lambda.pow(2),
        CycloInt::zeta(p),
    ];
    for x in &samples {
        println!("x = {x}");
        println!("  v_pi = {} (via norm: {})", x.v_pi(), x.v_pi_via_norm());
        println!("  digits = {:?}", x.pi_adic_expansion(8));
        println!("  semi-primary: {:?}", x.is_semi_primary());
    }
    Ok(())
}
