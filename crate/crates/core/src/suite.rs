//! Lemma checks for a single pair, the `(p, q)` survey and the witness search.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gauss::{
    gauss_sum, gauss_sum_charsum_terms, gauss_sum_pth_power, psi, psi_exponents,
    psi_identity_check, rho_from_pth_power, splitting_from_valuation, PairParams, Rho, Splitting,
};
use crate::group_ring::{
    delta_bounds_check, half_orbit_sum, stickelberger_q, stickelberger_q1,
};
use crate::residue::{fermat_condition, is_prime, is_prime_u64};
use crate::stickelberger::{verify_stickelberger_deg1, verify_stickelberger_norm};
use crate::{CycloInt, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    /// No check failed (skipped ones do not count).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, ok: bool, detail: impl Into<String>) -> LemmaCheck {
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    LemmaCheck { name: name.into(), verdict, detail: detail.into() }
}

fn skipped(name: &str, why: &str) -> LemmaCheck {
    LemmaCheck { name: name.into(), verdict: Verdict::Skipped, detail: why.into() }
}

/// Runs every pair-level check with exact arithmetic.
pub fn run_lemma_suite(p: u64, q: u64) -> Result<LemmaReport> {
    let params = PairParams::new(p, q)?;
    let v = params.v;
    let split = params.f == 1;
    let g = gauss_sum(p, q)?;
    let mut checks = Vec::new();

    let member = g.as_cyclo().is_some();
    checks.push(if split {
        skipped("gauss_sum_in_base_ring", "q = 1 mod p")
    } else {
        check("gauss_sum_in_base_ring", member, format!("f = {}", params.f))
    });

    let g_p = gauss_sum_pth_power(p, q)?;
    let conj = (&g * &g.conjugate()).as_cyclo().and_then(|c| c.as_integer().cloned());
    let q_f = BigInt::from(q).pow(params.f as u32);
    checks.push(check(
        "gauss_sum_norm",
        conj.as_ref() == Some(&q_f),
        format!("g * conj(g) = {}", conj.map_or("non-rational".into(), |n| n.to_string())),
    ));

    if split {
        let terms = gauss_sum_charsum_terms(p, q)?;
        checks.push(check(
            "constant_coefficient_vanishes",
            terms[0].is_zero(),
            format!("coefficient of 1: {}", terms[0]),
        ));
        checks.push(check(
            "linear_coefficient_is_one",
            terms[1] == CycloInt::one(p),
            format!("coefficient of zeta_q: {}", terms[1]),
        ));
        let image = g.eval_zeta_p_to_one();
        checks.push(check(
            "congruent_to_minus_one",
            image == CycloInt::from_int(q, -1),
            format!("image under zeta_p -> 1: {image}"),
        ));
        let fermat = fermat_condition(p, q)?;
        let val = (&g_p + &CycloInt::one(p)).v_pi();
        let exact = val == Valuation::Finite(p as u32);
        checks.push(check(
            "gp_plus_one_valuation",
            val.at_least(p as u32) && exact != fermat,
            format!("v_pi(g^p + 1) = {val}, fermat = {fermat}"),
        ));
        let splitting = splitting_from_valuation(p, val);
        checks.push(check(
            "splitting_matches_fermat",
            matches!(splitting, Ok(s) if (s == Splitting::Split) == fermat),
            format!("{splitting:?}"),
        ));
        let report = verify_stickelberger_deg1(p, q)?;
        checks.push(check("stickelberger_degree_one", report.passed(), format!("{report:?}")));
    } else {
        for name in [
            "constant_coefficient_vanishes",
            "linear_coefficient_is_one",
            "congruent_to_minus_one",
            "gp_plus_one_valuation",
            "splitting_matches_fermat",
            "stickelberger_degree_one",
        ] {
            checks.push(skipped(name, "q != 1 mod p"));
        }
    }
    checks.push(check("stickelberger_norm", verify_stickelberger_norm(p, q)?, ""));

    let quotient = stickelberger_q(p, v);
    checks.push(check(
        "stickelberger_quotient",
        quotient.is_ok(),
        quotient.as_ref().map_or_else(|e| e.to_string(), |qq| qq.to_string()),
    ));
    if let Ok(qq) = quotient {
        let prod = stickelberger_q1(p, v)?.checked_mul(&half_orbit_sum(p, v)?)?;
        checks.push(check("quotient_factorization", prod == qq, prod.to_string()));
    }
    checks.push(check("delta_bounds", delta_bounds_check(p, v)?, ""));

    Ok(LemmaReport { p, q, f: params.f, checks })
}

/// `true` iff `sum_{i=1}^{q-2} (a ind(i) - (a+b) ind(i+1))^k = 0 (mod p)` for
/// `k = 2 .. min(rho, p) - 1` (saturated `rho` counts as `p`).
pub fn powersum_check_with_rho(p: u64, q: u64, a: i64, b: i64, rho: Rho) -> Result<bool> {
    let exps = psi_exponents(p, q, a, b)?;
    let top = match rho {
        Rho::Value(r) => r.min(p as i64),
        Rho::Saturated => p as i64,
    };
    for k in 2..top {
        let s = exps
            .iter()
            .fold(0u64, |acc, &e| (acc + crate::residue::mod_pow(e, k as u64, p)) % p);
        if s != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn powersum_check(p: u64, q: u64, a: i64, b: i64) -> Result<bool> {
    let rho = crate::gauss::rho(p, q)?;
    powersum_check_with_rho(p, q, a, b, rho)
}

/// `v_pi(psi_{a,b} + 1)`.
pub fn psi_valuation(p: u64, q: u64, a: i64, b: i64) -> Result<Valuation> {
    Ok((psi(p, q, a, b)? + CycloInt::one(p)).v_pi())
}

/// One row of the survey.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub u: u64,
    pub v: u64,
    pub rho: Rho,
    pub v_gp_plus_1: Valuation,
    pub v_gp2_plus_1: Valuation,
    pub fermat: bool,
    pub splitting: Splitting,
    pub psi_val: Valuation,
    pub stickelberger_ok: bool,
    pub psi_identity_ok: bool,
    pub powersum_ok: bool,
}

/// A pair whose computation failed; kept in the output in its place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyFailure {
    pub p: u64,
    pub q: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurveyEntry {
    Record(SurveyRecord),
    Failed(SurveyFailure),
}

impl SurveyEntry {
    pub fn pair(&self) -> (u64, u64) {
        match self {
            SurveyEntry::Record(r) => (r.p, r.q),
            SurveyEntry::Failed(f) => (f.p, f.q),
        }
    }

    pub fn record(&self) -> Option<&SurveyRecord> {
        match self {
            SurveyEntry::Record(r) => Some(r),
            SurveyEntry::Failed(_) => None,
        }
    }
}

impl SurveyRecord {
    /// `(a, b) = (1, -2)` drives the `psi` columns.
    pub fn compute(p: u64, q: u64) -> Result<Self> {
        let params = PairParams::new(p, q)?;
        if params.f != 1 {
            return invalid(format!("q = {q} is not 1 modulo p = {p}"));
        }
        if p < 5 {
            return invalid("the survey starts at p = 5");
        }
        let g_p = gauss_sum_pth_power(p, q)?;
        let one = CycloInt::one(p);
        let rho = rho_from_pth_power(&g_p, params.v);
        let v_gp_plus_1 = (&g_p + &one).v_pi();
        let v_gp2_plus_1 = (g_p.pow(p) + one).v_pi();
        let fermat = fermat_condition(p, q)?;
        let splitting = splitting_from_valuation(p, v_gp_plus_1)?;
        Ok(SurveyRecord {
            p,
            q,
            f: params.f,
            u: params.u,
            v: params.v,
            rho,
            v_gp_plus_1,
            v_gp2_plus_1,
            fermat,
            splitting,
            psi_val: psi_valuation(p, q, 1, -2)?,
            stickelberger_ok: verify_stickelberger_deg1(p, q)?.passed(),
            psi_identity_ok: psi_identity_check(p, q, 1, -2)?,
            powersum_ok: powersum_check_with_rho(p, q, 1, -2, rho)?,
        })
    }
}

/// Primes `q <= q_max` with `q = 1 (mod p)`, ascending.
pub fn split_primes(p: u64, q_max: u64) -> Vec<u64> {
    (p + 1..=q_max).step_by(p as usize).filter(|&q| is_prime_u64(q)).collect()
}

/// The `(p, q)` pairs of a survey in output order.
pub fn survey_pairs(p_set: &[u64], q_max: u64) -> Result<Vec<(u64, u64)>> {
    let mut ps = p_set.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut pairs = Vec::new();
    for p in ps {
        if p < 5 || !is_prime_u64(p) {
            return invalid(format!("survey primes must be primes >= 5, got {p}"));
        }
        pairs.extend(split_primes(p, q_max).into_iter().map(|q| (p, q)));
    }
    Ok(pairs)
}

/// One entry per pair, ordered by `(p, q)` whatever the completion order.
/// `workers = None` uses the available parallelism.
pub fn survey(p_set: &[u64], q_max: u64, workers: Option<usize>) -> Result<Vec<SurveyEntry>> {
    let pairs = survey_pairs(p_set, q_max)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return invalid("worker count must be positive");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(pool.install(|| {
        pairs
            .par_iter()
            .map(|&(p, q)| match SurveyRecord::compute(p, q) {
                Ok(r) => SurveyEntry::Record(r),
                Err(e) => SurveyEntry::Failed(SurveyFailure { p, q, error: e.to_string() }),
            })
            .collect()
    }))
}

pub fn write_jsonl<W: Write>(entries: &[SurveyEntry], mut out: W) -> Result<()> {
    for e in entries {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub const CSV_COLUMNS: [&str; 14] = [
    "p",
    "q",
    "f",
    "u",
    "v",
    "rho",
    "v_gp_plus_1",
    "v_gp2_plus_1",
    "fermat",
    "splitting",
    "psi_val",
    "stickelberger_ok",
    "psi_identity_ok",
    "powersum_ok",
];

/// CSV with the fixed column order of [`CSV_COLUMNS`]; a failed pair keeps
/// its `p` and `q` and leaves the other cells empty.
pub fn write_csv<W: Write>(entries: &[SurveyEntry], mut out: W) -> Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for e in entries {
        match e {
            SurveyEntry::Record(r) => writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.p,
                r.q,
                r.f,
                r.u,
                r.v,
                r.rho,
                r.v_gp_plus_1,
                r.v_gp2_plus_1,
                r.fermat,
                r.splitting,
                r.psi_val,
                r.stickelberger_ok,
                r.psi_identity_ok,
                r.powersum_ok
            )?,
            SurveyEntry::Failed(f) => {
                writeln!(out, "{},{}{}", f.p, f.q, ",".repeat(CSV_COLUMNS.len() - 2))?
            }
        }
    }
    Ok(())
}

/// Aggregates over a finished survey.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub pairs: usize,
    pub failed: usize,
    pub saturated: usize,
    pub rho_equals_3: usize,
    pub rho_3_fraction: f64,
    pub rho_odd_and_at_least_3: bool,
}

pub fn summarize(entries: &[SurveyEntry]) -> SurveySummary {
    let records: Vec<&SurveyRecord> = entries.iter().filter_map(SurveyEntry::record).collect();
    let rho_equals_3 = records.iter().filter(|r| r.rho == Rho::Value(3)).count();
    let saturated = records.iter().filter(|r| r.rho == Rho::Saturated).count();
    let computed = entries.len();
    SurveySummary {
        pairs: computed,
        failed: computed - records.len(),
        saturated,
        rho_equals_3,
        rho_3_fraction: if computed == 0 { 0.0 } else { rho_equals_3 as f64 / computed as f64 },
        rho_odd_and_at_least_3: records
            .iter()
            .all(|r| matches!(r.rho, Rho::Value(x) if x >= 3 && x % 2 == 1)),
    }
}

/// A generator `q1 = a + lambda^(p+1) z` of a prime of prime norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub p: u64,
    pub q1_coeffs: CycloInt,
    pub a: u64,
    #[serde(with = "decimal")]
    pub norm_q: BigInt,
    pub fermat_holds: bool,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub records: Vec<WitnessRecord>,
    /// The search space ran out before `count` witnesses were found.
    pub partial: bool,
    pub examined: u64,
}

/// Enumerates `z` with coefficients in `[-bound, bound]` in odometer order
/// (first coordinate fastest, starting from all `-bound`) and keeps
/// `q1 = a + lambda^(p+1) z` whenever `|N(q1)|` is prime.
pub fn witness_search(p: u64, a: u64, bound: u64, count: usize) -> Result<WitnessSearch> {
    crate::cyclo::check_modulus(p)?;
    if a == 0 || a >= p {
        return invalid(format!("a = {a} must lie in 1..{p}"));
    }
    if bound == 0 {
        return invalid("coefficient bound must be at least 1");
    }
    let n = (p - 1) as usize;
    let width = 2 * bound + 1;
    let total = width.checked_pow(n as u32).unwrap_or(u64::MAX);
    let shift = CycloInt::lambda(p).pow(p + 1);
    let base = CycloInt::from_int(p, a);
    let pb = BigInt::from(p);
    let b = bound as i64;
    let mut digits = vec![0u64; n];
    let mut records = Vec::new();
    let mut examined = 0u64;
    while examined < total && records.len() < count {
        let z = CycloInt::from_i64s(p, &digits.iter().map(|&d| d as i64 - b).collect::<Vec<_>>())?;
        let q1 = &base + &(&shift * &z);
        let norm = q1.norm().abs();
        examined += 1;
        if is_prime(&norm.to_biguint().expect("absolute value")) {
            let (e, r) = (&norm - BigInt::one()).div_rem(&pb);
            if !r.is_zero() {
                return Err(Error::Internal(format!("prime norm {norm} is not 1 modulo {p}")));
            }
            let fermat_holds = pb.modpow(&e, &norm).is_one();
            records.push(WitnessRecord { p, q1_coeffs: q1, a, norm_q: norm, fermat_holds });
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < width {
                break;
            }
            *d = 0;
        }
    }
    Ok(WitnessSearch { partial: records.len() < count, records, examined })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite_examples() {
        let r = run_lemma_suite(5, 11).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.get("gp_plus_one_valuation").unwrap().verdict, Verdict::Pass);
        let r = run_lemma_suite(3, 5).unwrap();
        assert!(r.passed());
        assert_eq!(r.get("gauss_sum_in_base_ring").unwrap().verdict, Verdict::Pass);
        assert_eq!(r.get("stickelberger_degree_one").unwrap().verdict, Verdict::Skipped);
        let r = run_lemma_suite(5, 31).unwrap();
        assert!(r.passed());
        assert!(r.get("gp_plus_one_valuation").unwrap().detail.contains("fermat = true"));
    }

    #[test]
    fn survey_pairs_for_five() {
        assert_eq!(split_primes(5, 100), vec![11, 31, 41, 61, 71]);
        assert!(survey_pairs(&[3], 100).is_err());
    }

    #[test]
    fn powersum_range() {
        // rho = 3 at (5, 11): only k = 2 is tested
        assert!(powersum_check(5, 11, 1, -2).unwrap());
        assert!(powersum_check_with_rho(5, 11, 1, -2, Rho::Value(2)).unwrap());
    }

    #[test]
    fn csv_layout() {
        let entries = survey(&[5], 41, Some(2)).unwrap();
        let mut buf = Vec::new();
        write_csv(&entries, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("5,11,1,2,2,3,5,9,false,Inert,"));
        let failed = [SurveyEntry::Failed(SurveyFailure { p: 5, q: 7, error: "x".into() })];
        let mut buf = Vec::new();
        write_csv(&failed, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().nth(1).unwrap(), "5,7,,,,,,,,,,,,");
    }

    #[test]
    fn witness_records_are_well_formed() {
        let found = witness_search(5, 1, 1, 3).unwrap();
        assert_eq!(found.records.len(), 3);
        for w in &found.records {
            let diff = &w.q1_coeffs - &CycloInt::from_int(5, 1);
            assert!(diff.v_pi().at_least(6));
            assert!(w.fermat_holds);
        }
        assert!(witness_search(5, 0, 1, 1).is_err());
    }
}
