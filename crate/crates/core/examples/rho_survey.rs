//! Parallel survey of `rho` and the splitting of `pi` over a range of pairs.

use stickelberger::gauss::Rho;
use stickelberger::suite::{summarize, survey, write_csv};

fn main() -> stickelberger::Result<()> {
    let entries = survey(&[5, 7, 11, 13], 300, None)?;
    write_csv(&entries, std::io::stdout().lock())?;
    let summary = summarize(&entries);
    eprintln!(
        "{} pairs, rho = 3 for {} ({:.3}), every rho odd and >= 3: {}",
        summary.pairs, summary.rho_equals_3, summary.rho_3_fraction, summary.rho_odd_and_at_least_3
    );
    for r in entries.iter().filter_map(|e| e.record()) {
        if r.rho != Rho::Value(3) {
            eprintln!("({}, {}) rho = {}", r.p, r.q, r.rho);
        }
    }
    Ok(())
}
