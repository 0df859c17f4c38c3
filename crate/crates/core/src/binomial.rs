//! Binomials `x^m + a x^n`, their reduced form `x^n (x^k + a)`, and the
//! permutation tests.
//!
//! Substituting `x -> x^j` with `gcd(j, q - 1) = 1` turns `x^m + a x^n` into
//! `x^{nj} (x^k + a)` with `k = gcd(m - n, q - 1)`. With `r = (q - 1) / k` and
//! `gcd(n, k) = 1`, the reduced binomial permutes F_q exactly when
//! `g(z) = z^n (z + a)^k` permutes the `r`-th roots of unity, which is what
//! [`ReducedTester`] checks. Writing `z_i = g^{ki}` and `L_i = log(z_i + a)`,
//! `g(z_i)` is the root of unity with index `n i + L_i (mod r)`, so the test is a
//! bijectivity check on `Z/r`.

use thiserror::Error;

use crate::arith::{self, gcd};
use crate::ff::{FieldElement, FieldError, FiniteField, NO_LOG};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinomialError {
    #[error("exponents must satisfy 0 < n < m, got m = {m}, n = {n}")]
    BadExponents { m: u64, n: u64 },
    #[error("coefficient a must be nonzero")]
    ZeroCoefficient,
    #[error("reduced form (n = {n}, k = {k}) is not valid for F_{q}")]
    InvalidReduction { q: u64, n: u64, k: u64 },
    #[error("p^{i} must satisfy 1 <= i and p^i <= q")]
    BadMathieuExponent { i: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `x^m + a x^n` over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Binomial {
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub a: FieldElement,
}

impl Binomial {
    pub fn new(
        field: &FiniteField,
        m: u64,
        n: u64,
        a: FieldElement,
    ) -> Result<Self, BinomialError> {
        check_exponents(m, n)?;
        if !field.contains(a) {
            return Err(FieldError::FieldMismatch {
                expected: field.order(),
                found: a.field_order(),
            }
            .into());
        }
        Ok(Binomial {
            q: field.order(),
            m,
            n,
            a,
        })
    }

    pub fn eval(&self, field: &FiniteField, x: FieldElement) -> Result<FieldElement, FieldError> {
        let xm = field.pow(x, self.m as i64)?;
        let xn = field.pow(x, self.n as i64)?;
        field.add(xm, field.mul(self.a, xn)?)
    }
}

fn check_exponents(m: u64, n: u64) -> Result<(), BinomialError> {
    if n == 0 || n >= m {
        return Err(BinomialError::BadExponents { m, n });
    }
    Ok(())
}

/// `x^n (x^k + a)` with `k | q - 1`, `r = (q - 1) / k` and `gcd(n, k) = 1`.
/// `j` is the exponent of the substitution `x -> x^j` used to reach this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalBinomial {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub r: u64,
    pub j: u64,
}

impl CanonicalBinomial {
    /// Reduced form with `m - n = k` already dividing `q - 1` (`j = 1`).
    pub fn new(q: u64, n: u64, k: u64) -> Result<Self, BinomialError> {
        let invalid = BinomialError::InvalidReduction { q, n, k };
        if q < 2 || n == 0 || k == 0 || !(q - 1).is_multiple_of(k) || gcd(n, k) != 1 {
            return Err(invalid);
        }
        Ok(CanonicalBinomial {
            q,
            n,
            k,
            r: (q - 1) / k,
            j: 1,
        })
    }

    fn is_valid(&self) -> bool {
        self.q >= 2
            && self.k > 0
            && self.r * self.k == self.q - 1
            && self.n > 0
            && gcd(self.n, self.k) == 1
            && gcd(self.j, self.q - 1) == 1
    }
}

/// Why a binomial cannot permute for any `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    /// `gcd(m, n, q - 1) > 1`.
    GcdFails { gcd: u64 },
    /// No integer coprime to `k` in the class of `n j` modulo `r`.
    NoClassRepresentative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Canonical(CanonicalBinomial),
    Obstructed(Obstruction),
}

/// Reduces `x^m + a x^n` over F_q to `x^{n'} (x^k + a)`.
pub fn canonicalize(q: u64, m: u64, n: u64) -> Result<Reduction, BinomialError> {
    check_exponents(m, n)?;
    let order = q - 1;
    let d = m - n;
    let k = gcd(d, order);
    let common = gcd(gcd(m, n), order);
    if common > 1 {
        return Ok(Reduction::Obstructed(Obstruction::GcdFails { gcd: common }));
    }
    let target = k % order;
    let j = (1..=order)
        .find(|&j| arith::mul_mod(j, d % order, order) == target && gcd(j, order) == 1)
        .expect("a unit j with j(m - n) = gcd(m - n, q - 1) always exists");
    let r = order / k;
    match class_representative(arith::mul_mod(n % r, j, r), k, r) {
        Some(n) => Ok(Reduction::Canonical(CanonicalBinomial { q, n, k, r, j })),
        None => Ok(Reduction::Obstructed(Obstruction::NoClassRepresentative)),
    }
}

/// Smallest positive integer congruent to `class` mod `r` and coprime to `k`.
pub fn class_representative(class: u64, k: u64, r: u64) -> Option<u64> {
    let start = if class.is_multiple_of(r) {
        r
    } else {
        class % r
    };
    (0..=k).map(|t| start + t * r).find(|&c| gcd(c, k) == 1)
}

/// Canonical representatives of the `n` classes mod `r` that contain an
/// integer coprime to `k`, increasing.
pub fn n_class_reps(k: u64, r: u64) -> Vec<u64> {
    let mut reps: Vec<u64> = (0..r)
        .filter(|&c| gcd(c, gcd(k, r)) == 1)
        .filter_map(|c| class_representative(c, k, r))
        .collect();
    reps.sort_unstable();
    reps
}

/// Permutation test by evaluating `f` at every element.
pub fn is_permutation_naive(field: &FiniteField, b: &Binomial) -> Result<bool, BinomialError> {
    ensure_field(field, b.q)?;
    if !field.contains(b.a) {
        return Err(FieldError::FieldMismatch {
            expected: field.order(),
            found: b.a.field_order(),
        }
        .into());
    }
    Ok(naive_code(field, b.m, b.n, b.a.code()))
}

pub(crate) fn naive_code(field: &FiniteField, m: u64, n: u64, a: u64) -> bool {
    field.tables();
    let q = field.order();
    let mut seen = vec![0u64; (q as usize).div_ceil(64)];
    for x in 0..q {
        let v = field.add_code(
            field.pow_code(x, m),
            field.mul_code(a, field.pow_code(x, n)),
        ) as usize;
        let (w, bit) = (v / 64, 1u64 << (v % 64));
        if seen[w] & bit != 0 {
            return false;
        }
        seen[w] |= bit;
    }
    true
}

fn ensure_field(field: &FiniteField, q: u64) -> Result<(), BinomialError> {
    if field.order() != q {
        return Err(FieldError::FieldMismatch {
            expected: field.order(),
            found: q,
        }
        .into());
    }
    Ok(())
}

/// Reusable stamp buffer for bijectivity checks on `Z/r`.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    seen: Vec<u32>,
    stamp: u32,
}

impl Scratch {
    fn next(&mut self, r: usize) -> u32 {
        if self.seen.len() < r {
            self.seen.resize(r, 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.stamp
    }
}

/// Precomputed `mu_r` for one `(q, k)`, shared by every `(n, a)` test.
#[derive(Debug)]
pub struct ReducedTester<'f> {
    field: &'f FiniteField,
    k: u64,
    r: u64,
    roots: Vec<u64>,
    use_tables: bool,
}

impl<'f> ReducedTester<'f> {
    pub fn new(field: &'f FiniteField, k: u64) -> Result<Self, BinomialError> {
        let order = field.order() - 1;
        if k == 0 || !order.is_multiple_of(k) {
            return Err(FieldError::NotADivisor {
                divisor: k,
                order_minus_one: order,
            }
            .into());
        }
        let roots = field.roots_of_unity(order / k)?;
        let use_tables = field.tables().is_some();
        Ok(ReducedTester {
            field,
            k,
            r: (field.order() - 1) / k,
            roots: roots.into_iter().map(|z| z.code()).collect(),
            use_tables,
        })
    }

    /// Same tester but evaluating `g` by exponentiation instead of log tables.
    pub fn direct(field: &'f FiniteField, k: u64) -> Result<Self, BinomialError> {
        let mut t = Self::new(field, k)?;
        t.use_tables = false;
        Ok(t)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// True when `z + a = 0` for some `z` in `mu_r`, i.e. `(-a)^r = 1`.
    pub fn hits_zero(&self, a: u64) -> bool {
        let f = self.field;
        f.pow_code(f.neg_code(a), self.r) == 1
    }

    /// Indices `L_i mod r` of `(z_i + a)^k` in `mu_r`, or `None` when some
    /// `z_i + a = 0`. Requires lookup tables.
    pub fn offsets(&self, a: u64) -> Option<Vec<u32>> {
        if a == 0 || self.hits_zero(a) {
            return None;
        }
        let t = self.field.tables().expect("offsets need lookup tables");
        let order = self.field.order() - 1;
        let log_a = t.log[a as usize] as u64;
        let r = self.r;
        let mut out = Vec::with_capacity(r as usize);
        for i in 0..r {
            let shift = (self.k * i + order - log_a) % order;
            let z = t.zech[shift as usize];
            debug_assert_ne!(z, NO_LOG);
            out.push(((log_a + z as u64) % order % r) as u32);
        }
        Some(out)
    }

    /// Whether `i -> n i + offsets[i] (mod r)` is a bijection.
    pub fn bijective(&self, n: u64, offsets: &[u32], scratch: &mut Scratch) -> bool {
        let r = self.r as usize;
        let stamp = scratch.next(r);
        let step = (n % self.r) as usize;
        let mut acc = 0usize;
        for &off in offsets {
            let mut v = acc + off as usize;
            if v >= r {
                v -= r;
            }
            if scratch.seen[v] == stamp {
                return false;
            }
            scratch.seen[v] = stamp;
            acc += step;
            if acc >= r {
                acc -= r;
            }
        }
        true
    }

    /// Reduced permutation test for `x^n (x^k + a)`, `a` nonzero.
    pub fn permutes(&self, n: u64, a: u64, scratch: &mut Scratch) -> bool {
        if a == 0 || self.hits_zero(a) {
            return false;
        }
        if self.use_tables {
            let offsets = self.offsets(a).expect("checked above");
            return self.bijective(n, &offsets, scratch);
        }
        self.permutes_direct(n, a)
    }

    fn permutes_direct(&self, n: u64, a: u64) -> bool {
        let f = self.field;
        let mut values = Vec::with_capacity(self.roots.len());
        for &z in &self.roots {
            let v = f.mul_code(
                f.pow_code(z, n % self.r),
                f.pow_code(f.add_code(z, a), self.k),
            );
            if f.pow_code(v, self.r) != 1 {
                return false;
            }
            values.push(v);
        }
        values.sort_unstable();
        values.windows(2).all(|w| w[0] != w[1])
    }

    /// The permutation of `mu_r` induced by `g(z) = z^n (z + a)^k`, as root
    /// indices, when the binomial permutes.
    pub fn induced_permutation(&self, n: u64, a: FieldElement) -> Option<Vec<u64>> {
        let f = self.field;
        if !f.contains(a) || a.is_zero() || self.hits_zero(a.code()) {
            return None;
        }
        let index_of: std::collections::HashMap<u64, u64> = self
            .roots
            .iter()
            .enumerate()
            .map(|(i, &z)| (z, i as u64))
            .collect();
        let mut image = Vec::with_capacity(self.roots.len());
        let mut hit = vec![false; self.roots.len()];
        for &z in &self.roots {
            let v = f.mul_code(
                f.pow_code(z, n % self.r),
                f.pow_code(f.add_code(z, a.code()), self.k),
            );
            let idx = *index_of.get(&v)?;
            if std::mem::replace(&mut hit[idx as usize], true) {
                return None;
            }
            image.push(idx);
        }
        Some(image)
    }
}

/// Reduced permutation test for a canonical binomial.
pub fn is_permutation_reduced(
    field: &FiniteField,
    c: &CanonicalBinomial,
    a: FieldElement,
) -> Result<bool, BinomialError> {
    ensure_field(field, c.q)?;
    if !c.is_valid() {
        return Err(BinomialError::InvalidReduction {
            q: c.q,
            n: c.n,
            k: c.k,
        });
    }
    if !field.contains(a) {
        return Err(FieldError::FieldMismatch {
            expected: field.order(),
            found: a.field_order(),
        }
        .into());
    }
    if a.is_zero() {
        return Err(BinomialError::ZeroCoefficient);
    }
    let tester = ReducedTester::new(field, c.k)?;
    Ok(tester.permutes(c.n, a.code(), &mut Scratch::default()))
}

/// Permutation verdict through the reduction: monomial rule for `a = 0`,
/// obstruction check, then the `mu_r` test.
pub fn is_permutation(field: &FiniteField, b: &Binomial) -> Result<bool, BinomialError> {
    ensure_field(field, b.q)?;
    if b.a.is_zero() {
        return Ok(gcd(b.m, field.order() - 1) == 1);
    }
    match canonicalize(b.q, b.m, b.n)? {
        Reduction::Obstructed(_) => Ok(false),
        Reduction::Canonical(c) => is_permutation_reduced(field, &c, b.a),
    }
}

/// Number of `a` in F_q (including 0) for which `x^m + a x^n` permutes F_q.
///
/// Nonzero `a` are counted one coset of `k`-th powers at a time: every coset
/// has `r` elements and a constant verdict.
pub fn count_t(field: &FiniteField, m: u64, n: u64) -> Result<u64, BinomialError> {
    let zero_term = u64::from(m > n && n > 0 && gcd(m, field.order() - 1) == 1);
    let c = match canonicalize(field.order(), m, n)? {
        Reduction::Obstructed(_) => return Ok(zero_term),
        Reduction::Canonical(c) => c,
    };
    let tester = ReducedTester::new(field, c.k)?;
    let mut scratch = Scratch::default();
    let permuting = field
        .coset_reps(c.k)?
        .into_iter()
        .filter(|a| tester.permutes(c.n, a.code(), &mut scratch))
        .count() as u64;
    Ok(zero_term + c.r * permuting)
}

/// `count_t` by running the naive test on every `a`.
pub fn count_t_naive(field: &FiniteField, m: u64, n: u64) -> Result<u64, BinomialError> {
    check_exponents(m, n)?;
    Ok((0..field.order())
        .filter(|&a| naive_code(field, m, n, a))
        .count() as u64)
}

/// Whether `a` is not a `(p^i - 1)`-th power, the condition under which
/// `x^{p^i} - a x` permutes F_q.
pub fn mathieu_check(field: &FiniteField, i: u32, a: FieldElement) -> Result<bool, BinomialError> {
    let pi = mathieu_exponent(field, i)?;
    if !field.contains(a) {
        return Err(FieldError::FieldMismatch {
            expected: field.order(),
            found: a.field_order(),
        }
        .into());
    }
    if a.is_zero() {
        return Ok(false);
    }
    let order = field.order() - 1;
    let cofactor = order / gcd(pi - 1, order);
    Ok(field.pow(a, cofactor as i64)? != field.one())
}

/// `x^{p^i} - a x` as a binomial.
pub fn mathieu_binomial(
    field: &FiniteField,
    i: u32,
    a: FieldElement,
) -> Result<Binomial, BinomialError> {
    let pi = mathieu_exponent(field, i)?;
    Binomial::new(field, pi, 1, field.neg(a)?)
}

fn mathieu_exponent(field: &FiniteField, i: u32) -> Result<u64, BinomialError> {
    let p = field.characteristic();
    match p.checked_pow(i) {
        Some(pi) if i >= 1 && pi <= field.order() => Ok(pi),
        _ => Err(BinomialError::BadMathieuExponent { i }),
    }
}
