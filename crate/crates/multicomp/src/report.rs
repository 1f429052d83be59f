//! Decode, verification and rate reports.

use std::fmt;

use multicomp_core::{
    build_bh_codebook, is_dyck, is_h_code, layout, padded_len, verify_bh_with_limit, BhVerdict, Codebook,
    Decoded, Flavor, Stage,
};
use num_bigint::BigUint;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::format::{WitnessJson, SCHEMA_VERSION};

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<f64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DecodeReport {
    pub schema_version: u32,
    pub h_bar: usize,
    pub codeword_indices: Vec<usize>,
    pub codewords: Vec<String>,
    pub stages: Vec<StageTiming>,
}

impl DecodeReport {
    /// `timings` holds elapsed milliseconds per completed stage, or `None`
    /// to keep the report byte-stable.
    pub fn new(decoded: &Decoded, timings: &[(Stage, Option<f64>)]) -> Self {
        DecodeReport {
            schema_version: SCHEMA_VERSION,
            h_bar: decoded.h_bar,
            codeword_indices: decoded.indices.clone(),
            codewords: decoded.codewords.iter().map(ToString::to_string).collect(),
            stages: timings
                .iter()
                .map(|&(stage, ms)| StageTiming {
                    stage: stage.name().into(),
                    ms,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Scope {
    Bh,
    Mc,
    Dyck,
    Bounds,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::Bh => "bh",
            Scope::Mc => "mc",
            Scope::Dyck => "dyck",
            Scope::Bounds => "bounds",
        }
    }
}

/// One checked inequality `observed <relation> bound`, where `observed` is the
/// worst case over all instances and `slack` its distance to the bound.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: String,
    pub bound: i64,
    pub observed: i64,
    pub slack: i64,
    pub instances: usize,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, bound: i64, observed: i64, instances: usize) -> Self {
        Check {
            name: name.into(),
            relation: "<=".into(),
            bound,
            observed,
            slack: bound - observed,
            instances,
            passed: observed <= bound,
        }
    }

    fn at_least(name: &str, bound: i64, observed: i64, instances: usize) -> Self {
        Check {
            name: name.into(),
            relation: ">=".into(),
            bound,
            observed,
            slack: observed - bound,
            instances,
            passed: observed >= bound,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub scope: String,
    pub m: u32,
    pub h: usize,
    pub checks: Vec<Check>,
    /// Failing sets. `flavor` is `full` for the h-MC scope and `bh_sum` for B_h.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub ok: bool,
}

impl VerifyReport {
    fn new(cb: &Codebook, scope: Scope, checks: Vec<Check>, witness: Option<WitnessJson>) -> Self {
        let ok = checks.iter().all(|c| c.passed);
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            scope: scope.name().into(),
            m: cb.m(),
            h: cb.h(),
            checks,
            witness,
            ok,
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scope {} (m={}, h={})", self.scope, self.m, self.h)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<4} {:<24} observed {:>6} {} {:<6} slack {:>4}  over {} instances",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.observed,
                c.relation,
                c.bound,
                c.slack,
                c.instances
            )?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "  witness ({}): {:?} vs {:?}", w.flavor, w.set_a, w.set_b)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Codewords drawn for the h-MC scope; `None` takes all of them.
    pub sample: Option<usize>,
    pub limit: Option<u128>,
    pub seed: u64,
}

pub fn verify(cb: &Codebook, scope: Scope, opts: &VerifyOptions) -> CliResult<VerifyReport> {
    Ok(match scope {
        Scope::Bh => {
            let limit = opts.limit.unwrap_or(multicomp_core::BRUTE_FORCE_LIMIT);
            let strings = cb.raw().strings();
            let verdict = verify_bh_with_limit(strings, cb.h(), limit)?;
            let collisions = i64::from(!verdict.is_ok());
            let witness = match verdict {
                BhVerdict::Ok => None,
                BhVerdict::Witness(a, b) => Some(WitnessJson {
                    flavor: "bh_sum".into(),
                    set_a: a.iter().map(ToString::to_string).collect(),
                    set_b: b.iter().map(ToString::to_string).collect(),
                }),
            };
            let check = Check::at_most("subset_sum_collisions", 0, collisions, strings.len());
            VerifyReport::new(cb, scope, vec![check], witness)
        }
        Scope::Mc => {
            let limit = opts.limit.unwrap_or(multicomp_core::MC_LIMIT);
            let sample = sample_codewords(cb, opts.sample, opts.seed);
            let witness = is_h_code(&sample, cb.h(), Flavor::Full, limit)?;
            let check = Check::at_most("confusable_pairs", 0, i64::from(witness.is_some()), sample.len());
            VerifyReport::new(cb, scope, vec![check], witness.as_ref().map(WitnessJson::from))
        }
        Scope::Dyck => {
            let failures = cb.codewords().iter().filter(|c| !is_dyck(c)).count();
            let check = Check::at_most("non_dyck_codewords", 0, failures as i64, cb.len());
            VerifyReport::new(cb, scope, vec![check], None)
        }
        Scope::Bounds => VerifyReport::new(cb, scope, bound_checks(cb)?, None),
    })
}

/// Extremes of the running digital sums over every codeword, checked
/// against the balancing bounds with `b = sqrt(n)` (always even).
pub fn bound_checks(cb: &Codebook) -> CliResult<Vec<Check>> {
    let lay = cb.layout();
    let b = lay.block_len as i64;
    let (mut block_end, mut u_max, mut v_min, mut v_max) = (0i64, 0i64, i64::MAX, i64::MIN);
    for i in 0..cb.len() {
        let anatomy = cb.anatomy(i)?;
        let u = anatomy.u_rds();
        for j in 1..=lay.num_blocks {
            block_end = block_end.max(u.values()[j * lay.block_len - 1].abs());
        }
        u_max = u_max.max(u.max_abs());
        let v = anatomy.v_rds();
        v_min = v_min.min(v.min());
        v_max = v_max.max(v.max());
    }
    let count = cb.len();
    Ok(vec![
        Check::at_most("block_end_rds_abs", b, block_end, count),
        Check::at_most("u_rds_abs", 3 * b / 2, u_max, count),
        Check::at_least("v_rds_min", 1, v_min, count),
        Check::at_most("v_rds_max", 5 * b + 1, v_max, count),
    ])
}

/// `k` distinct codewords by a partial Fisher-Yates pass seeded like the shuffle.
fn sample_codewords(cb: &Codebook, k: Option<usize>, seed: u64) -> Vec<multicomp_core::BinaryString> {
    let mut order: Vec<usize> = (0..cb.len()).collect();
    let k = k.unwrap_or(order.len()).min(order.len());
    let mut rng = SplitMix64::seed_from_u64(seed);
    for i in 0..k {
        let j = i + (rng.next_u64() % (order.len() - i) as u64) as usize;
        order.swap(i, j);
    }
    order[..k].iter().map(|&i| cb.codewords()[i].clone()).collect()
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RateRow {
    pub m: u32,
    pub h: usize,
    /// Padded column length.
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub codebook_size: usize,
    pub rate: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RateChecks {
    pub below_target: bool,
    pub non_decreasing: bool,
    pub strictly_increasing: bool,
}

/// Rates `log2(size) / N` per `m`. Checks are decided by exact integer
/// comparisons, not by the floating-point column.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RateReport {
    pub schema_version: u32,
    pub h: usize,
    pub target: f64,
    pub rows: Vec<RateRow>,
    pub checks: RateChecks,
}

pub fn rate_row(m: u32, h: usize) -> CliResult<RateRow> {
    let sidon = build_bh_codebook(m, h)?;
    let lay = layout(padded_len(sidon.n()))?;
    Ok(RateRow {
        m,
        h,
        n: lay.n,
        big_n: lay.big_n,
        codebook_size: sidon.len(),
        rate: (sidon.len() as f64).log2() / lay.big_n as f64,
    })
}

/// `log2(size) / N < 1 / h`, i.e. `size^h < 2^N`.
pub fn below_target(row: &RateRow) -> bool {
    BigUint::from(row.codebook_size).pow(row.h as u32) < BigUint::from(1u8) << row.big_n
}

/// Three-way comparison of two rates: `log2(a)/Na` against `log2(b)/Nb`
/// via `a^Nb` against `b^Na`.
pub fn compare_rates(a: &RateRow, b: &RateRow) -> std::cmp::Ordering {
    let lhs = BigUint::from(a.codebook_size).pow(b.big_n as u32);
    let rhs = BigUint::from(b.codebook_size).pow(a.big_n as u32);
    lhs.cmp(&rhs)
}

pub fn rate_report(h: usize, ms: &[u32]) -> CliResult<RateReport> {
    let rows = ms
        .iter()
        .map(|&m| rate_row(m, h))
        .collect::<CliResult<Vec<_>>>()?;
    let pairs = || rows.windows(2).map(|w| compare_rates(&w[0], &w[1]));
    let checks = RateChecks {
        below_target: rows.iter().all(below_target),
        non_decreasing: pairs().all(|o| o.is_le()),
        strictly_increasing: pairs().all(|o| o.is_lt()),
    };
    Ok(RateReport {
        schema_version: SCHEMA_VERSION,
        h,
        target: 1.0 / h as f64,
        rows,
        checks,
    })
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3} {:>2} {:>4} {:>4} {:>7} {:>8}",
            "m", "h", "n", "N", "size", "rate"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>2} {:>4} {:>4} {:>7} {:>8.5}",
                r.m, r.h, r.n, r.big_n, r.codebook_size, r.rate
            )?;
        }
        writeln!(f, "target 1/h = {:.5}", self.target)?;
        writeln!(
            f,
            "below target: {}  non-decreasing in m: {}  strictly increasing: {}",
            self.checks.below_target, self.checks.non_decreasing, self.checks.strictly_increasing
        )
    }
}
