//! Non-permutation certificates over prime fields from Hermite's criterion.
//!
//! For `f = x^n (x^k + a)` and `0 < l < p`, every binomial coefficient
//! `C(l, i)` is a unit mod `p`, so `f^l` has exactly the terms of degree
//! `n l + k i`, `0 <= i <= l`, whatever the nonzero `a`. When exactly one of those
//! degrees is a positive multiple of `p - 1`, the reduction of `f^l` modulo
//! `x^p - x` has degree `p - 1` and `f` is not a permutation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::binomial::{self, Reduction};
use crate::bounds;
use crate::ff::{FieldElement, FieldError, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HermiteError {
    #[error("exponent {l} out of range for p = {p} (need 0 < l < p and n, k > 0)")]
    ExponentOutOfRange { p: u64, l: u64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no certificate where one is guaranteed: {0}")]
    TheoremViolation(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Why the small-case branch was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallCaseReason {
    /// `v > floor(p / m)`.
    LargeV,
    /// `m > p / 2`.
    LargeDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// `f^exponent mod (x^p - x)` has a single term of degree divisible by `p - 1`.
    UniqueHermiteTerm {
        exponent: u64,
    },
    /// `deg f = m` divides `p - 1`.
    DegreeDividesQMinus1,
    /// `gcd(k, p - 1) = 1`, so `x^k = -a` has a root besides `x = 0`.
    MultipleRoots,
    SmallCase {
        reason: SmallCaseReason,
    },
}

/// Proof that `x^n (x^k + a)` (equivalently `x^m + a x^n` with `m = n + k`)
/// permutes F_p for no nonzero `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CertificateWire", try_from = "CertificateWire")]
pub struct WitnessCertificate {
    pub kind: CertificateKind,
    pub p: u64,
    /// Leading exponent when the certificate was made for `x^m + a x^n`.
    pub m: Option<u64>,
    pub n: u64,
    pub k: u64,
}

impl WitnessCertificate {
    pub fn degree(&self) -> u64 {
        self.m.unwrap_or(self.n + self.k)
    }

    pub fn exponent(&self) -> Option<u64> {
        match self.kind {
            CertificateKind::UniqueHermiteTerm { exponent } => Some(exponent),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    kind: String,
    p: u64,
    m: Option<u64>,
    n: u64,
    k: u64,
    exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<SmallCaseReason>,
}

impl From<WitnessCertificate> for CertificateWire {
    fn from(c: WitnessCertificate) -> Self {
        let (kind, reason) = match c.kind {
            CertificateKind::UniqueHermiteTerm { .. } => ("unique_hermite_term", None),
            CertificateKind::DegreeDividesQMinus1 => ("degree_divides_q_minus_1", None),
            CertificateKind::MultipleRoots => ("multiple_roots", None),
            CertificateKind::SmallCase { reason } => ("small_case", Some(reason)),
        };
        CertificateWire {
            kind: kind.to_string(),
            p: c.p,
            m: c.m,
            n: c.n,
            k: c.k,
            exponent: c.exponent(),
            reason,
        }
    }
}

impl TryFrom<CertificateWire> for WitnessCertificate {
    type Error = String;

    fn try_from(w: CertificateWire) -> Result<Self, String> {
        let kind = match (w.kind.as_str(), w.exponent, w.reason) {
            ("unique_hermite_term", Some(exponent), _) => {
                CertificateKind::UniqueHermiteTerm { exponent }
            }
            ("degree_divides_q_minus_1", _, _) => CertificateKind::DegreeDividesQMinus1,
            ("multiple_roots", _, _) => CertificateKind::MultipleRoots,
            ("small_case", _, Some(reason)) => CertificateKind::SmallCase { reason },
            (other, _, _) => {
                return Err(format!("unknown or incomplete certificate kind {other:?}"))
            }
        };
        Ok(WitnessCertificate {
            kind,
            p: w.p,
            m: w.m,
            n: w.n,
            k: w.k,
        })
    }
}

/// Number of `i` in `[0, l]` with `n l + k i = 0 (mod p - 1)`.
pub fn divisible_term_count(p: u64, n: u64, k: u64, l: u64) -> Result<u64, HermiteError> {
    if l == 0 || l >= p || n == 0 || k == 0 {
        return Err(HermiteError::ExponentOutOfRange { p, l });
    }
    Ok(count_divisible(p, n, k, l))
}

fn count_divisible(p: u64, n: u64, k: u64, l: u64) -> u64 {
    let order = p - 1;
    let base = arith::mul_mod(n, l, order);
    let step = k % order;
    let mut deg = base;
    let mut count = 0;
    for _ in 0..=l {
        if deg == 0 {
            count += 1;
        }
        deg += step;
        if deg >= order {
            deg -= order;
        }
    }
    count
}

fn require_prime(p: u64) -> Result<(), HermiteError> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(HermiteError::PreconditionFailed(format!(
            "{p} is not prime"
        )))
    }
}

/// Certificate for `x^n (x^k + a)` with `k | p - 1`, `gcd(n, k) = 1` and
/// `k < sqrt(p - 3/4) - 1/2`, using exponent `k(r - 1)` or `kr` where `r` is
/// the least integer with `r >= (p - 1 - k) / k^2`.
pub fn intro1_certificate(p: u64, n: u64, k: u64) -> Result<WitnessCertificate, HermiteError> {
    require_prime(p)?;
    if k == 0 || n == 0 || !(p - 1).is_multiple_of(k) || gcd(n, k) != 1 {
        return Err(HermiteError::PreconditionFailed(format!(
            "need k | p - 1 and gcd(n, k) = 1 (p = {p}, n = {n}, k = {k})"
        )));
    }
    if !bounds::below_intro1_bound(p, k) {
        return Err(HermiteError::PreconditionFailed(format!(
            "k = {k} is not below sqrt(p - 3/4) - 1/2 for p = {p}"
        )));
    }
    let ksq = k * k;
    let r = (p - 1 - k).div_ceil(ksq);
    for l in [k * (r - 1), k * r] {
        if l > 0 && l < p - 1 && count_divisible(p, n, k, l) == 1 {
            return Ok(WitnessCertificate {
                kind: CertificateKind::UniqueHermiteTerm { exponent: l },
                p,
                m: None,
                n,
                k,
            });
        }
    }
    Err(HermiteError::TheoremViolation(format!(
        "neither {} nor {} isolates a term for p = {p}, n = {n}, k = {k}",
        k * (r - 1),
        k * r
    )))
}

/// Smallest multiple `l` of `k` with `0 < l < p - 1` whose power of
/// `x^n (x^k + a)` has exactly one term of degree divisible by `p - 1`.
pub fn search_unique_divisible(p: u64, n: u64, k: u64) -> Option<u64> {
    if k == 0 || n == 0 || p < 3 {
        return None;
    }
    (1..)
        .map(|t| k * t)
        .take_while(|&l| l < p - 1)
        .find(|&l| count_divisible(p, n, k, l) == 1)
}

/// Certificate for `x^m + a x^n` over F_p when
/// `p - 1 > (m - 1) max(n, gcd(m - n, p - 1))`, following the case order
/// multiple roots, small case, degree dividing `p - 1`, then exponent `k + u`
/// with `k = floor(p / m)`, `p = mk + r` and `n u - (m - n) v = r - 1`,
/// `0 < u <= m - n`.
pub fn wt_certificate(p: u64, m: u64, n: u64) -> Result<WitnessCertificate, HermiteError> {
    require_prime(p)?;
    if n == 0 || n >= m || m >= p || gcd(m, n) != 1 {
        return Err(HermiteError::PreconditionFailed(format!(
            "need gcd(m, n) = 1 and 0 < n < m < p (p = {p}, m = {m}, n = {n})"
        )));
    }
    if bounds::wt_inequality(p, m, n) {
        return Err(HermiteError::PreconditionFailed(format!(
            "p - 1 <= (m - 1) max(n, gcd(m - n, p - 1)) holds for p = {p}, m = {m}, n = {n}"
        )));
    }
    let d = m - n;
    let cert = |kind| WitnessCertificate {
        kind,
        p,
        m: Some(m),
        n,
        k: d,
    };
    if gcd(d, p - 1) == 1 {
        return Ok(cert(CertificateKind::MultipleRoots));
    }
    let k = p / m;
    let rem = p - m * k;
    // n u = r - 1 (mod m - n); gcd(n, m - n) = gcd(n, m) = 1
    let n_inv = arith::inv_mod(n % d, d).expect("gcd(n, m - n) = 1");
    let mut u = arith::mul_mod((rem + d - 1) % d, n_inv, d);
    if u == 0 {
        u = d;
    }
    let v = (n * u + 1 - rem) / d;
    debug_assert_eq!(n * u + 1, rem + d * v);
    if v > k {
        return Ok(cert(CertificateKind::SmallCase {
            reason: SmallCaseReason::LargeV,
        }));
    }
    if 2 * m > p {
        return Ok(cert(CertificateKind::SmallCase {
            reason: SmallCaseReason::LargeDegree,
        }));
    }
    if u + v == m {
        return Ok(cert(CertificateKind::DegreeDividesQMinus1));
    }
    let l = k + u;
    if l == 0 || l >= p - 1 || count_divisible(p, n, d, l) != 1 {
        return Err(HermiteError::TheoremViolation(format!(
            "exponent {l} does not isolate a term for p = {p}, m = {m}, n = {n}"
        )));
    }
    Ok(cert(CertificateKind::UniqueHermiteTerm { exponent: l }))
}

/// Best available certificate for `x^m + a x^n` over F_p, or `None`.
///
/// Tries the degree-based construction when `gcd(m, n) = 1` and the degree
/// inequality fails, then the reduced-form constructions.
pub fn certify(p: u64, m: u64, n: u64) -> Result<Option<WitnessCertificate>, HermiteError> {
    require_prime(p)?;
    if n == 0 || n >= m {
        return Err(HermiteError::PreconditionFailed(format!(
            "need 0 < n < m (m = {m}, n = {n})"
        )));
    }
    if m < p && gcd(m, n) == 1 && !bounds::wt_inequality(p, m, n) {
        return wt_certificate(p, m, n).map(Some);
    }
    let c = match binomial::canonicalize(p, m, n) {
        Ok(Reduction::Canonical(c)) => c,
        Ok(Reduction::Obstructed(_)) => return Ok(None),
        Err(e) => return Err(HermiteError::PreconditionFailed(e.to_string())),
    };
    if bounds::below_intro1_bound(p, c.k) {
        return intro1_certificate(p, c.n, c.k).map(Some);
    }
    Ok(
        search_unique_divisible(p, c.n, c.k).map(|exponent| WitnessCertificate {
            kind: CertificateKind::UniqueHermiteTerm { exponent },
            p,
            m: None,
            n: c.n,
            k: c.k,
        }),
    )
}

/// `x^d` reduced modulo `x^p - x`.
fn reduce_degree(d: u64, p: u64) -> usize {
    if d == 0 {
        0
    } else {
        ((d - 1) % (p - 1) + 1) as usize
    }
}

/// Product of two dense polynomials modulo `(p, x^p - x)`.
fn mul_reduced(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = p as usize;
    let lazy = p < (1 << 16);
    let mut acc = vec![0u64; 2 * len - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            if lazy {
                acc[i + j] += x * y;
            } else {
                acc[i + j] = (acc[i + j] + arith::mul_mod(x, y, p)) % p;
            }
        }
        if lazy && i % 4096 == 4095 {
            acc.iter_mut().for_each(|c| *c %= p);
        }
    }
    let mut out = vec![0u64; len];
    for (d, c) in acc.into_iter().enumerate() {
        let idx = reduce_degree(d as u64, p);
        out[idx] = (out[idx] + c % p) % p;
    }
    out
}

/// `poly^l` modulo `(p, x^p - x)` by repeated squaring; `poly` is dense and
/// little-endian with coefficients in `[0, p)`.
pub fn reduced_power(poly: &[u64], l: u64, p: u64) -> Vec<u64> {
    let len = p as usize;
    let mut base = vec![0u64; len];
    for (d, &c) in poly.iter().enumerate() {
        let idx = reduce_degree(d as u64, p);
        base[idx] = (base[idx] + c) % p;
    }
    let mut acc = vec![0u64; len];
    acc[0] = 1;
    let mut e = l;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_reduced(&acc, &base, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul_reduced(&base, &base, p);
        }
    }
    acc
}

/// Degree of `(x^m + a x^n)^l mod (x^p - x)`, `None` for the zero polynomial.
pub fn reduced_power_degree(p: u64, m: u64, n: u64, a: u64, l: u64) -> Option<usize> {
    let mut f = vec![0u64; p as usize];
    let (dm, dn) = (reduce_degree(m, p), reduce_degree(n, p));
    f[dm] = (f[dm] + 1) % p;
    f[dn] = (f[dn] + a) % p;
    reduced_power(&f, l, p).iter().rposition(|&c| c != 0)
}

/// Checks certificates against a prime field, caching `(x^k + a)^l`.
pub struct CertificateValidator<'f> {
    field: &'f FiniteField,
    powers: HashMap<(u64, u64, u64), Vec<u64>>,
}

impl<'f> CertificateValidator<'f> {
    pub fn new(field: &'f FiniteField) -> Self {
        CertificateValidator {
            field,
            powers: HashMap::new(),
        }
    }

    /// Structural checks, then for every sampled nonzero `a`: the naive test
    /// says "not a permutation", and for exponent certificates the reduction of
    /// `f^l` modulo `x^p - x`, computed by repeated squaring, has degree `p - 1`.
    pub fn validate(
        &mut self,
        cert: &WitnessCertificate,
        sample_as: &[FieldElement],
    ) -> Result<(), HermiteError> {
        let field = self.field;
        let p = cert.p;
        let invalid = |msg: String| Err(HermiteError::InvalidCertificate(msg));
        if !field.is_prime_field() || field.characteristic() != p {
            return invalid(format!(
                "certificate for p = {p} checked in F_{}",
                field.order()
            ));
        }
        if cert.n == 0 || cert.k == 0 {
            return invalid("zero exponent".into());
        }
        match cert.kind {
            CertificateKind::UniqueHermiteTerm { exponent } => {
                if exponent == 0 || exponent >= p - 1 {
                    return invalid(format!("exponent {exponent} not in (0, p - 1)"));
                }
                let count = count_divisible(p, cert.n, cert.k, exponent);
                if count != 1 {
                    return invalid(format!("exponent {exponent} gives {count} divisible terms"));
                }
            }
            CertificateKind::DegreeDividesQMinus1 => {
                let m = cert.degree();
                if m <= 1 || m >= p || !(p - 1).is_multiple_of(m) {
                    return invalid(format!("degree {m} does not divide p - 1 = {}", p - 1));
                }
            }
            CertificateKind::MultipleRoots => {
                if gcd(cert.k, p - 1) != 1 {
                    return invalid(format!("gcd(k, p - 1) = {} > 1", gcd(cert.k, p - 1)));
                }
            }
            CertificateKind::SmallCase { .. } => {}
        }
        let m = cert.degree();
        for &a in sample_as {
            if !field.contains(a) {
                return Err(FieldError::FieldMismatch {
                    expected: field.order(),
                    found: a.field_order(),
                }
                .into());
            }
            if a.is_zero() {
                continue;
            }
            if binomial::naive_code(field, m, cert.n, a.code()) {
                return invalid(format!("x^{m} + {a} x^{} permutes F_{p}", cert.n));
            }
            match cert.kind {
                CertificateKind::UniqueHermiteTerm { exponent } => {
                    let top = self.top_coefficient(cert.n, cert.k, a.code(), exponent);
                    if top == 0 {
                        return invalid(format!(
                            "power {exponent} reduces below degree p - 1 for a = {a}"
                        ));
                    }
                }
                CertificateKind::MultipleRoots => {
                    let roots = (0..p)
                        .filter(|&x| {
                            field.add_code(
                                field.pow_code(x, m),
                                field.mul_code(a.code(), field.pow_code(x, cert.n)),
                            ) == 0
                        })
                        .count();
                    if roots < 2 {
                        return invalid(format!("only {roots} root(s) for a = {a}"));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Coefficient of `x^{p-1}` in `x^{nl} (x^k + a)^l mod (x^p - x)`.
    fn top_coefficient(&mut self, n: u64, k: u64, a: u64, l: u64) -> u64 {
        let p = self.field.characteristic();
        let h = self.powers.entry((k, l, a)).or_insert_with(|| {
            let mut base = vec![0u64; p as usize];
            base[0] = a;
            let dk = reduce_degree(k, p);
            base[dk] = (base[dk] + 1) % p;
            reduced_power(&base, l, p)
        });
        let shift = n * l;
        h.iter()
            .enumerate()
            .filter(|&(d, &c)| {
                let deg = shift + d as u64;
                c != 0 && deg > 0 && deg.is_multiple_of(p - 1)
            })
            .fold(0, |acc, (_, &c)| (acc + c) % p)
    }
}

/// One-shot validation with a fresh cache.
pub fn certificate_validate(
    field: &FiniteField,
    cert: &WitnessCertificate,
    sample_as: &[FieldElement],
) -> Result<(), HermiteError> {
    CertificateValidator::new(field).validate(cert, sample_as)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uht(cert: &WitnessCertificate) -> u64 {
        cert.exponent().expect("exponent certificate")
    }

    #[test]
    fn divisible_term_count_examples() {
        // degrees 6 + 3i for i = 0..=6: 12 and 24 are divisible by 12
        assert_eq!(divisible_term_count(13, 1, 3, 6).unwrap(), 2);
        assert_eq!(divisible_term_count(17, 1, 2, 8).unwrap(), 1);
        assert_eq!(divisible_term_count(11, 1, 5, 5).unwrap(), 3);
        assert!(matches!(
            divisible_term_count(11, 1, 5, 11),
            Err(HermiteError::ExponentOutOfRange { .. })
        ));
        assert!(divisible_term_count(11, 1, 5, 0).is_err());
    }

    #[test]
    fn divisible_term_count_matches_enumeration() {
        for p in [5u64, 7, 11, 13, 17] {
            for n in 1..p {
                for k in 1..p {
                    for l in 1..p {
                        let brute =
                            (0..=l).filter(|i| (n * l + k * i) % (p - 1) == 0).count() as u64;
                        assert_eq!(divisible_term_count(p, n, k, l).unwrap(), brute);
                    }
                }
            }
        }
    }

    #[test]
    fn intro1_examples() {
        // r = 4; exponent k(r - 1) = 6 already isolates degree 16
        let c = intro1_certificate(17, 1, 2).unwrap();
        assert_eq!(uht(&c), 6);
        assert_eq!(divisible_term_count(17, 1, 2, 6).unwrap(), 1);
        assert_eq!(divisible_term_count(17, 1, 2, 8).unwrap(), 1);
        let c = intro1_certificate(11, 1, 2).unwrap();
        assert_eq!(uht(&c), 4);
        assert!(matches!(
            intro1_certificate(13, 1, 3),
            Err(HermiteError::PreconditionFailed(_))
        ));
        assert!(intro1_certificate(17, 2, 2).is_err());
        assert!(intro1_certificate(17, 1, 3).is_err());
    }

    #[test]
    fn search_examples() {
        assert_eq!(search_unique_divisible(17, 1, 2), Some(6));
        assert_eq!(search_unique_divisible(11, 1, 5), None);
        assert_eq!(search_unique_divisible(7, 1, 6), None);
    }

    #[test]
    fn wt_examples() {
        let c = wt_certificate(19, 5, 1).unwrap();
        assert_eq!(c.kind, CertificateKind::UniqueHermiteTerm { exponent: 6 });
        assert_eq!(c.k, 4);
        let c = wt_certificate(13, 4, 1).unwrap();
        assert_eq!(c.kind, CertificateKind::DegreeDividesQMinus1);
        let c = wt_certificate(17, 5, 2).unwrap();
        assert_eq!(c.kind, CertificateKind::MultipleRoots);
        // inequality holds: 138 <= 25 * 23
        assert!(wt_certificate(139, 26, 3).is_err());
        assert!(wt_certificate(19, 6, 2).is_err());
    }

    #[test]
    fn validate_examples() {
        let f19 = FiniteField::new(19, 1).unwrap();
        let c = wt_certificate(19, 5, 1).unwrap();
        let samples: Vec<_> = (1..=3).map(|a| f19.from_int(a)).collect();
        certificate_validate(&f19, &c, &samples).unwrap();
        for a in 1..=3 {
            assert_eq!(reduced_power_degree(19, 5, 1, a, 6), Some(18));
        }

        let f13 = FiniteField::new(13, 1).unwrap();
        let c = wt_certificate(13, 4, 1).unwrap();
        let all: Vec<_> = f13.elements().collect();
        certificate_validate(&f13, &c, &all).unwrap();

        let f17 = FiniteField::new(17, 1).unwrap();
        let c = wt_certificate(17, 5, 2).unwrap();
        certificate_validate(&f17, &c, &[f17.one()]).unwrap();
        // roots of x^5 + x^2: 0 and the cube root of -1
        let roots: Vec<u64> = (0..17u64)
            .filter(|&x| (x.pow(5) + x.pow(2)) % 17 == 0)
            .collect();
        assert_eq!(roots, vec![0, 16]);
    }

    #[test]
    fn validate_rejects_bad_certificates() {
        let f17 = FiniteField::new(17, 1).unwrap();
        let bogus = WitnessCertificate {
            kind: CertificateKind::UniqueHermiteTerm { exponent: 4 },
            p: 17,
            m: None,
            n: 1,
            k: 2,
        };
        assert!(matches!(
            certificate_validate(&f17, &bogus, &[f17.one()]),
            Err(HermiteError::InvalidCertificate(_))
        ));
        // x^2 + 3x... over F_5 with a certificate claiming multiple roots for a permutation
        let f5 = FiniteField::new(5, 1).unwrap();
        let wrong = WitnessCertificate {
            kind: CertificateKind::SmallCase {
                reason: SmallCaseReason::LargeDegree,
            },
            p: 5,
            m: Some(5),
            n: 1,
            k: 4,
        };
        // x^5 + 2x = 3x permutes F_5
        assert!(certificate_validate(&f5, &wrong, &[f5.from_int(2)]).is_err());
        let f7 = FiniteField::new(7, 1).unwrap();
        assert!(certificate_validate(&f7, &bogus, &[f7.one()]).is_err());
    }

    #[test]
    fn top_coefficient_matches_full_powering() {
        let f = FiniteField::new(23, 1).unwrap();
        let mut v = CertificateValidator::new(&f);
        for (n, k) in [(1u64, 2u64), (3, 2), (1, 11), (5, 3)] {
            for l in 1..22 {
                for a in [1u64, 5, 22] {
                    let full = reduced_power_degree(23, n + k, n, a, l) == Some(22);
                    assert_eq!(
                        v.top_coefficient(n, k, a, l) != 0,
                        full,
                        "n={n} k={k} l={l} a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn certificate_json_shape() {
        let c = wt_certificate(19, 5, 1).unwrap();
        let json = serde_json::to_value(c).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"kind": "unique_hermite_term", "p": 19, "m": 5, "n": 1, "k": 4, "exponent": 6})
        );
        let back: WitnessCertificate = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn certify_routes() {
        assert_eq!(
            certify(19, 5, 1).unwrap(),
            Some(wt_certificate(19, 5, 1).unwrap())
        );
        // x^26 + 17x^3 permutes F_139, nothing to certify
        assert_eq!(certify(139, 26, 3).unwrap(), None);
        assert_eq!(certify(7, 4, 2).unwrap(), None);
        let c = certify(17, 3, 1).unwrap().unwrap();
        assert_eq!(c.k, 2);
    }
}
