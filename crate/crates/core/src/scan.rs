//! Search campaigns over ranges of `q`.
//!
//! Every binomial `x^m + a x^n` with `a != 0` over `F_q` is equivalent to some
//! `x^n (x^k + a)` with `k | q - 1`, `n` a class mod `r = (q - 1)/k` coprime to
//! `k`, and `a` one of the `k` coset representatives `g^0, ..., g^{k-1}` of the
//! `k`-th powers. A field scan visits each such triple once. Work is split by
//! `q` over the rayon pool and gathered in input order, so results do not
//! depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::binomial::{n_class_reps, BinomialError, ReducedTester, Scratch};
use crate::bounds;
use crate::ff::{FieldError, FiniteField};

/// Largest field order a scan accepts (lookup tables stay in memory).
pub const SCAN_BUDGET: u64 = 1 << 22;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} exceeds the scan budget of {SCAN_BUDGET}")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Binomial(#[from] BinomialError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Verdict for one `(k, n-class, coset representative)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub k: u64,
    pub n: u64,
    /// Coset representative in text form.
    pub a: String,
    pub permutes: bool,
    pub g: u64,
    pub r: u64,
}

/// Aggregate over the coset representatives of one `(k, n-class)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub k: u64,
    pub n: u64,
    pub r: u64,
    /// Number of coset representatives giving a permutation.
    pub permuting_reps: u64,
    /// Exponent `i` of the first permuting representative `g^i`.
    pub first_rep: Option<u64>,
}

impl ClassSummary {
    pub fn permutes(&self) -> bool {
        self.permuting_reps > 0
    }

    /// Number of nonzero `a` giving a permutation for any `(m, n)` in this class.
    pub fn t_class(&self) -> u64 {
        self.r * self.permuting_reps
    }
}

/// Field parameters written ahead of the records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    /// Coefficients `c_0, ..., c_e` of the monic modulus.
    pub modulus: Vec<u64>,
    pub generator: String,
}

impl From<&FiniteField> for FieldMeta {
    fn from(f: &FiniteField) -> Self {
        FieldMeta {
            q: f.order(),
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
            generator: f.format_element(f.generator()),
        }
    }
}

pub fn field_for_scan(q: u64) -> Result<FiniteField, ScanError> {
    let (p, e) = arith::prime_power(q).ok_or(ScanError::NotPrimePower(q))?;
    if q > SCAN_BUDGET {
        return Err(ScanError::BudgetExceeded(q));
    }
    Ok(FiniteField::new(p, e)?)
}

/// Calls `visit(rep_index, class_index, permutes)` for every coset
/// representative and class of one `k`, representatives outermost.
fn for_each_verdict(
    field: &FiniteField,
    k: u64,
    classes: &[u64],
    mut visit: impl FnMut(usize, usize, bool),
) -> Result<(), ScanError> {
    let tester = ReducedTester::new(field, k)?;
    let mut scratch = Scratch::default();
    let tables = field.tables().is_some();
    for (i, a) in field.coset_reps(k)?.into_iter().enumerate() {
        if tables {
            match tester.offsets(a.code()) {
                None => (0..classes.len()).for_each(|c| visit(i, c, false)),
                Some(off) => {
                    for (c, &n) in classes.iter().enumerate() {
                        visit(i, c, tester.bijective(n, &off, &mut scratch));
                    }
                }
            }
        } else {
            for (c, &n) in classes.iter().enumerate() {
                visit(i, c, tester.permutes(n, a.code(), &mut scratch));
            }
        }
    }
    Ok(())
}

/// One record per `(k, n-class, representative)`, ordered by `k`, then `n`,
/// then the exponent of the representative.
pub fn scan_field(q: u64) -> Result<Vec<ScanRecord>, ScanError> {
    let field = field_for_scan(q)?;
    scan_field_in(&field)
}

pub fn scan_field_in(field: &FiniteField) -> Result<Vec<ScanRecord>, ScanError> {
    let (q, p, e) = (field.order(), field.characteristic(), field.degree());
    let mut out = Vec::new();
    for k in arith::divisors(q - 1) {
        let r = (q - 1) / k;
        let classes = n_class_reps(k, r);
        let reps = field.coset_reps(k)?;
        let mut verdicts = vec![false; classes.len() * reps.len()];
        for_each_verdict(field, k, &classes, |i, c, v| {
            verdicts[c * reps.len() + i] = v
        })?;
        for (c, &n) in classes.iter().enumerate() {
            for (i, a) in reps.iter().enumerate() {
                out.push(ScanRecord {
                    q,
                    p,
                    e,
                    k,
                    n,
                    a: field.format_element(*a),
                    permutes: verdicts[c * reps.len() + i],
                    g: k,
                    r,
                });
            }
        }
    }
    Ok(out)
}

/// `sum_{k | q-1} k * #classes`, the number of records [`scan_field`] emits.
pub fn expected_record_count(q: u64) -> u64 {
    arith::divisors(q - 1)
        .into_iter()
        .map(|k| k * n_class_reps(k, (q - 1) / k).len() as u64)
        .sum()
}

/// Per-class aggregates for every `k | q - 1`, ordered by `(k, n)`.
pub fn field_classes(field: &FiniteField) -> Result<Vec<ClassSummary>, ScanError> {
    let (q, p, e) = (field.order(), field.characteristic(), field.degree());
    let mut out = Vec::new();
    for k in arith::divisors(q - 1) {
        let r = (q - 1) / k;
        let classes = n_class_reps(k, r);
        let mut counts = vec![0u64; classes.len()];
        let mut first = vec![None; classes.len()];
        for_each_verdict(field, k, &classes, |i, c, v| {
            if v {
                counts[c] += 1;
                first[c].get_or_insert(i as u64);
            }
        })?;
        out.extend(classes.iter().enumerate().map(|(c, &n)| ClassSummary {
            q,
            p,
            e,
            k,
            n,
            r,
            permuting_reps: counts[c],
            first_rep: first[c],
        }));
    }
    Ok(out)
}

/// Records for every prime power in `[q_min, q_max]`, grouped by field.
pub fn scan_range(q_min: u64, q_max: u64) -> Result<Vec<(FieldMeta, Vec<ScanRecord>)>, ScanError> {
    arith::prime_powers_in(q_min, q_max)
        .into_par_iter()
        .map(|q| {
            let field = field_for_scan(q)?;
            Ok((FieldMeta::from(&field), scan_field_in(&field)?))
        })
        .collect()
}

/// Class summaries for every prime up to `p_max`, in increasing `p`.
pub fn prime_classes(p_max: u64) -> Result<Vec<ClassSummary>, ScanError> {
    let per_prime: Result<Vec<Vec<ClassSummary>>, ScanError> = arith::primes_up_to(p_max)
        .into_par_iter()
        .map(|p| field_classes(&field_for_scan(p)?))
        .collect();
    Ok(per_prime?.into_iter().flatten().collect())
}

/// Outcome of a sweep over prime fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub classes_checked: usize,
    pub violations: Vec<ClassSummary>,
    /// Distinct `(p, g)` with a permuting class, `g = gcd(m - n, p - 1)`.
    pub permuting_pairs: BTreeSet<(u64, u64)>,
}

impl Sweep {
    fn from_classes(classes: &[ClassSummary], violates: impl Fn(&ClassSummary) -> bool) -> Self {
        Sweep {
            classes_checked: classes.len(),
            violations: classes
                .iter()
                .filter(|c| c.permutes() && violates(c))
                .cloned()
                .collect(),
            permuting_pairs: classes
                .iter()
                .filter(|c| c.permutes())
                .map(|c| (c.p, c.k))
                .collect(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        campaign_exit_code(self.violations.len())
    }
}

/// 0 when clean, 1 when violations were found.
pub fn campaign_exit_code(violations: usize) -> i32 {
    i32::from(violations > 0)
}

/// Permuting classes with `g < sqrt(p - 3/4) - 1/2`.
pub fn intro1_violations(classes: &[ClassSummary]) -> Sweep {
    Sweep::from_classes(classes, |c| bounds::below_intro1_bound(c.p, c.k))
}

/// Permuting classes with `g <= p / (c log p)`.
pub fn conjecture_violations(classes: &[ClassSummary], c: f64) -> Sweep {
    Sweep::from_classes(classes, |s| {
        let pf = s.p as f64;
        s.p >= 2 && (s.k as f64) <= pf / (c * pf.ln())
    })
}

pub fn verify_intro1(p_max: u64) -> Result<Sweep, ScanError> {
    Ok(intro1_violations(&prime_classes(p_max)?))
}

pub fn verify_conjecture(p_max: u64, c: f64) -> Result<Sweep, ScanError> {
    Ok(conjecture_violations(&prime_classes(p_max)?, c))
}

/// For each `g`, the primes `p <= p_max` with a permuting class of
/// `gcd(k, p - 1) = g`.
pub fn corollary_table(
    g_values: &[u64],
    p_max: u64,
) -> Result<BTreeMap<u64, BTreeSet<u64>>, ScanError> {
    let classes = prime_classes(p_max)?;
    Ok(corollary_table_from(&classes, g_values))
}

pub fn corollary_table_from(
    classes: &[ClassSummary],
    g_values: &[u64],
) -> BTreeMap<u64, BTreeSet<u64>> {
    let mut table: BTreeMap<u64, BTreeSet<u64>> =
        g_values.iter().map(|&g| (g, BTreeSet::new())).collect();
    for c in classes.iter().filter(|c| c.permutes()) {
        if let Some(set) = table.get_mut(&c.k) {
            set.insert(c.p);
        }
    }
    table
}

/// Which lower bound on `gcd(m - n, q - 1)` the existence sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceThreshold {
    /// `2q log log q / log q`.
    #[default]
    LogLog,
    /// `2q / log q`.
    Log,
}

impl ExistenceThreshold {
    pub fn value(self, q: u64) -> Result<f64, bounds::BoundsError> {
        match self {
            ExistenceThreshold::LogLog => bounds::cw_gcd_threshold(q),
            ExistenceThreshold::Log => bounds::cw_gcd_threshold_alt(q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceMiss {
    pub q: u64,
    pub k: u64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceSweep {
    pub threshold: ExistenceThreshold,
    pub fields_checked: usize,
    pub classes_checked: usize,
    pub misses: Vec<ExistenceMiss>,
}

/// Checks, for each prime power `4 <= q <= q_max` and each `k | q - 1` above
/// the threshold, that every `n`-class has some nonzero `a` giving a permutation.
pub fn verify_existence(
    q_max: u64,
    threshold: ExistenceThreshold,
) -> Result<ExistenceSweep, ScanError> {
    let per_field: Result<Vec<(usize, Vec<ExistenceMiss>)>, ScanError> =
        arith::prime_powers_in(4, q_max)
            .into_par_iter()
            .map(|q| existence_in_field(q, threshold))
            .collect();
    let per_field = per_field?;
    Ok(ExistenceSweep {
        threshold,
        fields_checked: per_field.len(),
        classes_checked: per_field.iter().map(|(n, _)| n).sum(),
        misses: per_field.into_iter().flat_map(|(_, m)| m).collect(),
    })
}

fn existence_in_field(
    q: u64,
    threshold: ExistenceThreshold,
) -> Result<(usize, Vec<ExistenceMiss>), ScanError> {
    let bound = threshold
        .value(q)
        .expect("q >= 4 lies in the threshold domain");
    let field = field_for_scan(q)?;
    let mut checked = 0;
    let mut misses = Vec::new();
    for k in arith::divisors(q - 1)
        .into_iter()
        .filter(|&k| k as f64 > bound)
    {
        let r = (q - 1) / k;
        let classes = n_class_reps(k, r);
        let tester = ReducedTester::new(&field, k)?;
        let mut scratch = Scratch::default();
        let reps = field.coset_reps(k)?;
        for &n in &classes {
            checked += 1;
            if !reps
                .iter()
                .any(|a| tester.permutes(n, a.code(), &mut scratch))
            {
                misses.push(ExistenceMiss { q, k, n });
            }
        }
    }
    Ok((checked, misses))
}

/// Elements `a` such that `x^n (x^k + a)` permutes `F_q` for every `n` coprime
/// to `q - 1` and every `k` with `gcd(k, q - 1) = (q - 1) / r`, increasing.
pub fn universal_a_search(
    field: &FiniteField,
    r: u64,
) -> Result<Vec<crate::ff::FieldElement>, ScanError> {
    let q = field.order();
    let order = q - 1;
    if r == 0 || !order.is_multiple_of(r) {
        return Err(FieldError::NotADivisor {
            divisor: r,
            order_minus_one: order,
        }
        .into());
    }
    let d = order / r;
    // x^n (x^k + a) ~ x^{nj} (x^d + a) with j a unit, and nj runs over the units
    let units: Vec<u64> = (1..=order).filter(|&u| gcd(u, order) == 1).collect();
    let classes: BTreeSet<u64> = units.iter().map(|&u| u % r).collect();
    let class_reps: Vec<u64> = classes
        .iter()
        .map(|&c| {
            *units
                .iter()
                .find(|&&u| u % r == c)
                .expect("class taken from units")
        })
        .collect();
    let ks: Vec<u64> = (1..=order).filter(|&k| gcd(k, order) == d).collect();
    let zero_works = units
        .iter()
        .all(|&n| ks.iter().all(|&k| gcd(n + k, order) == 1));

    let tester = ReducedTester::new(field, d)?;
    let mut scratch = Scratch::default();
    let mut out = Vec::new();
    if zero_works {
        out.push(field.zero());
    }
    for a in field.elements().filter(|a| !a.is_zero()) {
        if class_reps
            .iter()
            .all(|&n| tester.permutes(n, a.code(), &mut scratch))
        {
            out.push(a);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

/// Writes metadata for every field, then the records. Output is a pure
/// function of the inputs.
pub fn write_records<W: Write>(
    mut out: W,
    fields: &[FieldMeta],
    records: &[ScanRecord],
    format: Format,
) -> Result<(), ScanError> {
    match format {
        Format::Jsonl => {
            for meta in fields {
                serde_json::to_writer(&mut out, &serde_json::json!({ "meta": meta }))?;
                out.write_all(b"\n")?;
            }
            for rec in records {
                serde_json::to_writer(&mut out, rec)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Format::Csv => {
            for m in fields {
                let modulus: Vec<String> = m.modulus.iter().map(u64::to_string).collect();
                writeln!(
                    out,
                    "# q={} p={} e={} modulus={} generator={}",
                    m.q,
                    m.p,
                    m.e,
                    modulus.join(" "),
                    m.generator
                )?;
            }
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record(["q", "p", "e", "k", "n", "a", "permutes", "g", "r"])?;
            for rec in records {
                w.serialize(rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn emit_records(
    fields: &[FieldMeta],
    records: &[ScanRecord],
    format: Format,
    path: &Path,
) -> Result<(), ScanError> {
    let file = std::fs::File::create(path)?;
    write_records(std::io::BufWriter::new(file), fields, records, format)
}

/// Parses JSONL written by [`write_records`] back into metadata and records.
pub fn read_jsonl(text: &str) -> Result<(Vec<FieldMeta>, Vec<ScanRecord>), ScanError> {
    #[derive(Deserialize)]
    struct MetaLine {
        meta: FieldMeta,
    }
    let mut metas = Vec::new();
    let mut records = Vec::new();
    for line in text.lines().filter(|l| !l.is_empty()) {
        if line.starts_with("{\"meta\"") {
            metas.push(serde_json::from_str::<MetaLine>(line)?.meta);
        } else {
            records.push(serde_json::from_str(line)?);
        }
    }
    Ok((metas, records))
}
