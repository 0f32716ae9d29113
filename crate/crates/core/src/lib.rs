//! Exact Gauss sums, Jacobi resolvents and Stickelberger valuations over
//! cyclotomic rings `Z[zeta_p]` and `Z[zeta_p, zeta_q]`.

pub mod cli;
pub mod cyclo;
pub mod error;
pub mod gauss;
pub mod group_ring;
pub mod residue;
pub mod stickelberger;
pub mod suite;

pub use cyclo::{BiCycloInt, CycloInt, RationalCyclo, Valuation};
pub use error::{Error, Result};
pub use group_ring::GroupRingElt;
