//! Command-line front end. Exit codes: 0 when every check passes, 1 when a
//! mathematical check fails, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gauss::{
    gauss_sum_charsum, gauss_sum_resolvent, psi, psi_identity_check, rho, PairParams, ResolventReport,
    Rho,
};
use crate::stickelberger::{default_precision, verify_stickelberger_deg1_at, verify_stickelberger_norm};
use crate::suite::{
    powersum_check_with_rho, run_lemma_suite, summarize, survey, witness_search, write_csv,
    write_jsonl, SurveyEntry, SurveyRecord, Verdict,
};
use crate::{CycloInt, Valuation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable consulted when `--workers` is absent.
pub const WORKERS_ENV: &str = "STICKELBERGER_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "stickelberger", version, about = "Gauss sums, Jacobi resolvents and Stickelberger checks")]
pub struct Cli {
    /// Output format (default: pretty, or json for survey).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss sum by character sum and by resolvent, with g * conj(g) and v_pi(g^p + 1).
    Gauss {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
    },
    /// The invariant rho for a pair with q = 1 mod p, p >= 5.
    Rho {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
    },
    /// The Jacobi cyclotomic function psi_{a,b} and its checks.
    Psi {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
        #[arg(short = 'a', long = "a", default_value_t = 1, allow_hyphen_values = true)]
        a: i64,
        #[arg(short = 'b', long = "b", default_value_t = -2, allow_hyphen_values = true)]
        b: i64,
    },
    /// Stickelberger factorization of g^p (prime by prime when q = 1 mod p).
    Verify {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
        /// Hensel precision exponent (default p + 5).
        #[arg(short = 'M', long)]
        precision: Option<u32>,
    },
    /// Sweep over primes q = 1 mod p up to qmax.
    Survey {
        #[arg(short = 'p', long = "p", value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        qmax: u64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
        #[arg(short = 'j', long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Search for q1 = a + lambda^(p+1) z of prime norm.
    Witness {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'a', long = "a")]
        a: u64,
        #[arg(long, default_value_t = 2)]
        bound: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Every pair-level check with a verdict each.
    Lemmas {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidArgument(_) => EXIT_USAGE,
                _ => EXIT_CHECK_FAILED,
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn no_csv(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(usage(format!("csv output is not available for {command}")));
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let format = cli.format.unwrap_or(Format::Pretty);
    match &cli.command {
        Command::Gauss { p, q } => {
            no_csv(format, "gauss")?;
            cmd_gauss(*p, *q, format, out)
        }
        Command::Rho { p, q } => cmd_rho(*p, *q, format, out),
        Command::Psi { p, q, a, b } => {
            no_csv(format, "psi")?;
            cmd_psi(*p, *q, *a, *b, format, out)
        }
        Command::Verify { p, q, precision } => {
            no_csv(format, "verify")?;
            cmd_verify(*p, *q, *precision, format, out)
        }
        Command::Survey { p, qmax, out: path, workers } => {
            let format = cli.format.unwrap_or(Format::Json);
            if format == Format::Pretty {
                return Err(usage("survey writes json (JSONL) or csv"));
            }
            cmd_survey(p, *qmax, path.as_ref(), *workers, format, out, err)
        }
        Command::Witness { p, a, bound, count } => cmd_witness(*p, *a, *bound, *count, format, out),
        Command::Lemmas { p, q } => {
            no_csv(format, "lemmas")?;
            cmd_lemmas(*p, *q, format, out)
        }
    }
}

fn cmd_gauss(p: u64, q: u64, format: Format, out: &mut dyn Write) -> Result<bool> {
    let report = ResolventReport::new(p, q)?;
    let split = report.f == 1;
    let charsum_matches = if split {
        Some(gauss_sum_charsum(p, q)? == gauss_sum_resolvent(p, q)?)
    } else {
        None
    };
    let g_conj = &report.g * &report.g.conjugate();
    let norm_ok = report.norm_identity_holds();
    let in_base_ring = report.g.as_cyclo().is_some();
    let passed = norm_ok && charsum_matches != Some(false) && (split || in_base_ring);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "report": report,
                "match": charsum_matches,
                "in_base_ring": in_base_ring,
                "g_times_conj": g_conj,
                "norm_ok": norm_ok,
                "passed": passed,
            }),
        )?,
        _ => {
            writeln!(out, "p = {p}, q = {q}, f = {}, u = {}, v = {}", report.f, report.u, report.v)?;
            writeln!(out, "(z = zeta_{p}, w = zeta_{q})")?;
            writeln!(out, "g              = {}", report.g)?;
            writeln!(out, "g^p            = {}", report.g_p)?;
            writeln!(out, "g * conj(g)    = {g_conj}")?;
            writeln!(out, "in Z[zeta_p]   = {in_base_ring}")?;
            match charsum_matches {
                Some(m) => writeln!(out, "match          = {m}")?,
                None => writeln!(out, "match          = n/a (character sum only)")?,
            }
            writeln!(out, "v_pi(g^p + 1)  = {}", report.v_gp_plus_1)?;
            writeln!(out, "passed         = {passed}")?;
        }
    }
    Ok(passed)
}

fn rho_ok(r: Rho) -> bool {
    matches!(r, Rho::Value(x) if x >= 3 && x % 2 == 1)
}

fn cmd_rho(p: u64, q: u64, format: Format, out: &mut dyn Write) -> Result<bool> {
    let r = rho(p, q)?;
    let passed = rho_ok(r);
    match format {
        Format::Json => emit_json(out, &json!({ "p": p, "q": q, "rho": r, "passed": passed }))?,
        Format::Csv => write!(out, "p,q,rho\n{p},{q},{r}\n")?,
        Format::Pretty => writeln!(out, "{r}")?,
    }
    Ok(passed)
}

fn cmd_psi(p: u64, q: u64, a: i64, b: i64, format: Format, out: &mut dyn Write) -> Result<bool> {
    let value = psi(p, q, a, b)?;
    let valuation = (&value + &CycloInt::one(p)).v_pi();
    let identity_ok = psi_identity_check(p, q, a, b)?;
    // rho and the checks hanging on it need p >= 5
    let (r, congruence_ok, powersum_ok) = if p >= 5 {
        let r = rho(p, q)?;
        let congruence = match r {
            Rho::Value(x) if x <= p as i64 => Some(valuation.at_least(x.max(0) as u32)),
            _ => None,
        };
        (Some(r), congruence, Some(powersum_check_with_rho(p, q, a, b, r)?))
    } else {
        (None, None, None)
    };
    let passed = identity_ok && congruence_ok != Some(false) && powersum_ok != Some(false);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "p": p, "q": q, "a": a, "b": b,
                "psi": value,
                "v_psi_plus_1": valuation,
                "rho": r,
                "identity_ok": identity_ok,
                "congruence_ok": congruence_ok,
                "powersum_ok": powersum_ok,
                "passed": passed,
            }),
        )?,
        _ => {
            writeln!(out, "psi_{{{a},{b}}}      = {value}")?;
            writeln!(out, "v_pi(psi + 1)   = {valuation}")?;
            let show = |o: Option<bool>| o.map_or("n/a".to_string(), |b| b.to_string());
            writeln!(out, "rho             = {}", r.map_or("n/a".to_string(), |r| r.to_string()))?;
            writeln!(out, "identity_ok     = {identity_ok}")?;
            writeln!(out, "congruence_ok   = {}", show(congruence_ok))?;
            writeln!(out, "powersum_ok     = {}", show(powersum_ok))?;
            writeln!(out, "passed          = {passed}")?;
        }
    }
    Ok(passed)
}

fn cmd_verify(p: u64, q: u64, precision: Option<u32>, format: Format, out: &mut dyn Write) -> Result<bool> {
    let params = PairParams::new(p, q)?;
    let norm_ok = verify_stickelberger_norm(p, q)?;
    if params.f == 1 {
        let m = precision.unwrap_or_else(|| default_precision(p));
        let report = verify_stickelberger_deg1_at(p, q, m)?;
        let passed = report.passed() && norm_ok;
        match format {
            Format::Json => emit_json(out, &report)?,
            _ => {
                writeln!(out, "p = {p}, q = {q}, f = 1")?;
                for (root, v) in &report.valuations {
                    writeln!(out, "  v at (q, zeta - {root}) = {v}")?;
                }
                writeln!(out, "multiset_ok       = {}", report.multiset_ok)?;
                writeln!(out, "correspondence_ok = {}", report.correspondence_ok)?;
                writeln!(out, "norm_ok           = {}", report.norm_ok)?;
            }
        }
        Ok(passed)
    } else {
        match format {
            Format::Json => emit_json(out, &json!({ "p": p, "q": q, "f": params.f, "norm_ok": norm_ok }))?,
            _ => {
                writeln!(out, "p = {p}, q = {q}, f = {} (norm-level check)", params.f)?;
                writeln!(out, "norm_ok = {norm_ok}")?;
            }
        }
        Ok(norm_ok)
    }
}

/// The per-record invariants a survey is expected to satisfy.
pub fn record_violations(r: &SurveyRecord) -> Vec<&'static str> {
    let p = r.p as u32;
    let mut bad = Vec::new();
    if !rho_ok(r.rho) {
        bad.push("rho odd and >= 3");
    }
    let split = r.splitting == crate::gauss::Splitting::Split;
    if r.fermat != split || split != r.v_gp_plus_1.at_least(p + 1) || !r.v_gp_plus_1.at_least(p) {
        bad.push("fermat <=> split <=> v_gp_plus_1 > p");
    }
    if !r.v_gp2_plus_1.at_least(2 * p - 1) || (r.v_gp2_plus_1 == Valuation::Finite(2 * p - 1)) == r.fermat {
        bad.push("v_gp2_plus_1 >= 2p-1, equality iff not fermat");
    }
    if let Rho::Value(x) = r.rho {
        if x <= r.p as i64 && !r.psi_val.at_least(x.max(0) as u32) {
            bad.push("psi_val >= rho when rho <= p");
        }
    }
    if !r.stickelberger_ok {
        bad.push("stickelberger_ok");
    }
    if !r.psi_identity_ok {
        bad.push("psi_identity_ok");
    }
    if !r.powersum_ok {
        bad.push("powersum_ok");
    }
    bad
}

fn cmd_survey(
    p_set: &[u64],
    q_max: u64,
    path: Option<&PathBuf>,
    workers: Option<usize>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool> {
    let entries = survey(p_set, q_max, workers)?;
    let write = |w: &mut dyn Write| -> Result<()> {
        match format {
            Format::Csv => write_csv(&entries, w),
            _ => write_jsonl(&entries, w),
        }
    };
    match path {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
        }
        None => write(out)?,
    }
    let summary = summarize(&entries);
    writeln!(
        err,
        "{} pairs, {} failed, {} saturated, rho = 3 for {} ({:.3})",
        summary.pairs, summary.failed, summary.saturated, summary.rho_equals_3, summary.rho_3_fraction
    )?;
    let mut passed = summary.failed == 0;
    for e in &entries {
        match e {
            SurveyEntry::Failed(f) => writeln!(err, "({}, {}): error: {}", f.p, f.q, f.error)?,
            SurveyEntry::Record(r) => {
                let bad = record_violations(r);
                if !bad.is_empty() {
                    passed = false;
                    writeln!(err, "({}, {}): violated: {}", r.p, r.q, bad.join("; "))?;
                }
            }
        }
    }
    Ok(passed)
}

fn cmd_witness(p: u64, a: u64, bound: u64, count: usize, format: Format, out: &mut dyn Write) -> Result<bool> {
    let found = witness_search(p, a, bound, count)?;
    let passed = found.records.iter().all(|w| w.fermat_holds);
    match format {
        Format::Json => emit_json(out, &found)?,
        Format::Csv => {
            writeln!(out, "p,a,norm_q,fermat_holds,q1")?;
            for w in &found.records {
                let coeffs: Vec<String> = w.q1_coeffs.coeffs().iter().map(BigInt::to_string).collect();
                writeln!(out, "{},{},{},{},{}", w.p, w.a, w.norm_q, w.fermat_holds, coeffs.join(" "))?;
            }
        }
        Format::Pretty => {
            for w in &found.records {
                writeln!(out, "q = {:<12} fermat_holds = {:<5} q1 = {}", w.norm_q, w.fermat_holds, w.q1_coeffs)?;
            }
            writeln!(out, "{} found after {} candidates{}", found.records.len(), found.examined,
                if found.partial { " (search space exhausted)" } else { "" })?;
        }
    }
    Ok(passed)
}

fn cmd_lemmas(p: u64, q: u64, format: Format, out: &mut dyn Write) -> Result<bool> {
    let report = run_lemma_suite(p, q)?;
    match format {
        Format::Json => emit_json(out, &report)?,
        _ => {
            writeln!(out, "p = {p}, q = {q}, f = {}", report.f)?;
            for c in &report.checks {
                let tag = match c.verdict {
                    Verdict::Pass => "PASS",
                    Verdict::Fail => "FAIL",
                    Verdict::Skipped => "SKIP",
                };
                writeln!(out, "{tag} {}", c.name)?;
            }
        }
    }
    Ok(report.passed())
}
