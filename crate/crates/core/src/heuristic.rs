//! Expected number of sporadic permutation binomials under a random-map model.
//!
//! `E = sum_r (r!/r^r) F(r)` where `F(r)` sums the prime powers
//! `q < e^{r/2}` with `q = 1 (mod r)`. Small `r` are computed exactly with a
//! segmented sieve; larger `r` use an explicit majorant, summed numerically up
//! to [`NUMERIC_LIMIT`] and bounded by an integral beyond.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::primes_up_to;

/// Largest `r` whose `F(r)` is computed exactly (`e^20 ~ 4.9e8`).
pub const MAX_EXACT_R: u64 = 40;

/// Last `r` whose majorant is summed term by term.
pub const NUMERIC_LIMIT: u64 = 1_000_000;

/// Upward relative slack added to every floating-point term.
pub const TERM_SLACK: f64 = 1e-12;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SEGMENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("r = {0} needs a sieve beyond e^20")]
    SieveBudgetExceeded(u64),
    #[error("{0}")]
    DomainError(String),
}

/// Largest integer below `e^{r/2}`; `e^{r/2}` is irrational for `r > 0`.
fn limit(r: u64) -> u64 {
    (r as f64 / 2.0).exp().floor() as u64
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let mut composite = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (lo.max(2)..hi)
        .filter(|&x| !composite[(x - lo) as usize])
        .collect()
}

/// `F(r)` for every `r` in `3..=r_max`, indexed by `r` (entries below 3 are 0).
pub fn f_values(r_max: u64) -> Result<Vec<u64>, HeuristicError> {
    if r_max > MAX_EXACT_R {
        return Err(HeuristicError::SieveBudgetExceeded(r_max));
    }
    let size = (r_max.max(2) + 1) as usize;
    if r_max < 3 {
        return Ok(vec![0; size]);
    }
    let limits: Vec<u64> = (0..size as u64).map(limit).collect();
    let top = limits[r_max as usize];
    let base = primes_up_to(crate::arith::isqrt(top) + 1);

    let add = |acc: &mut Vec<u64>, q: u64| {
        for r in 3..size {
            if q <= limits[r] && (q - 1).is_multiple_of(r as u64) {
                acc[r] += q;
            }
        }
    };

    let segments: Vec<u64> = (0..=top / SEGMENT).map(|i| i * SEGMENT).collect();
    let mut totals = segments
        .par_iter()
        .map(|&lo| {
            let hi = (lo + SEGMENT).min(top + 1);
            let mut acc = vec![0u64; size];
            for p in sieve_segment(lo, hi, &base) {
                add(&mut acc, p);
            }
            acc
        })
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    for &p in &base {
        let mut q = p * p;
        while q <= top {
            add(&mut totals, q);
            q *= p;
        }
    }
    Ok(totals)
}

/// Exact `F(r)` for `3 <= r <= 40`.
#[allow(non_snake_case)]
pub fn F_exact(r: u64) -> Result<u64, HeuristicError> {
    if r < 3 {
        return Err(HeuristicError::DomainError(format!("r = {r} < 3")));
    }
    Ok(f_values(r)?[r as usize])
}

/// `r! / r^r`.
pub fn weight(r: u64) -> f64 {
    (1..=r).map(|i| i as f64 / r as f64).product()
}

/// Majorant of `(r!/r^r) F(r)` for `r >= 3`:
/// `sqrt(2 pi r) e^{1/12r} ((3e^g loglog r + 9/loglog r) / (r (r/2 - log r)) + e^{-r/4} + r / (2 e^{r/3} log 2))`.
pub fn tail_summand_bound(r: u64) -> Result<f64, HeuristicError> {
    if r < 3 {
        return Err(HeuristicError::DomainError(format!("r = {r} < 3")));
    }
    let rf = r as f64;
    let ll = rf.ln().ln();
    let stirling = (2.0 * std::f64::consts::PI * rf).sqrt() * (1.0 / (12.0 * rf)).exp();
    let primes = (3.0 * EULER_GAMMA.exp() * ll + 9.0 / ll) / (rf * (rf / 2.0 - rf.ln()));
    let powers = (-rf / 4.0).exp() + rf / (2.0 * (rf / 3.0).exp() * std::f64::consts::LN_2);
    Ok(stirling * (primes + powers))
}

/// Integral bound on `sum_{r > big_r} tail_summand_bound(r)`, valid for `big_r >= 12`.
pub fn integral_tail(big_r: u64) -> f64 {
    assert!(big_r >= 12);
    let r = big_r as f64;
    let b = r.ln() / r;
    let c = r / (r / 12.0).exp();
    let d = (1.0 / (12.0 * r)).exp();
    let g = 9.0 / r.ln().ln();
    let sr = r.sqrt();
    let coef = 1.0 / (0.5 - b);
    (2.0 * std::f64::consts::PI).sqrt()
        * d
        * (3.0 * EULER_GAMMA.exp() * coef * (2.0 * r.ln().ln() / sr + 4.0 / (r.ln() * sr))
            + 2.0 * g * coef / sr
            + (1.0 + c / (2.0 * std::f64::consts::LN_2)) * (4.0 * sr + 8.0 / sr) / (r / 4.0).exp())
}

fn up(x: f64) -> f64 {
    x + TERM_SLACK * x.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicReport {
    #[serde(rename = "R")]
    pub r: u64,
    pub f_values: BTreeMap<u64, u64>,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub total_bound: f64,
}

/// Exact terms for `r <= big_r`, majorants beyond.
#[allow(non_snake_case)]
pub fn E_bound(big_r: u64) -> Result<HeuristicReport, HeuristicError> {
    if big_r < 3 {
        return Err(HeuristicError::DomainError(format!("R = {big_r} < 3")));
    }
    let f = f_values(big_r)?;
    let f_values: BTreeMap<u64, u64> = (3..=big_r).map(|r| (r, f[r as usize])).collect();
    let partial_sum = f_values
        .iter()
        .map(|(&r, &v)| up(weight(r) * v as f64))
        .sum::<f64>();
    let numeric: f64 = (big_r + 1..=NUMERIC_LIMIT)
        .map(|r| up(tail_summand_bound(r).expect("r >= 3")))
        .sum();
    let tail_bound = up(numeric + up(integral_tail(NUMERIC_LIMIT)));
    Ok(HeuristicReport {
        r: big_r,
        f_values,
        partial_sum,
        tail_bound,
        total_bound: up(partial_sum + tail_bound),
    })
}

/// CSV table with columns `r,F,summand`, where summand is `(r!/r^r) F(r)`.
pub fn write_f_table_csv<W: Write>(report: &HeuristicReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "F", "summand"])?;
    for (&r, &v) in &report.f_values {
        w.write_record([
            r.to_string(),
            v.to_string(),
            (weight(r) * v as f64).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
