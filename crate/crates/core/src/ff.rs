//! Arithmetic in F_q = F_p[x]/(modulus).
//!
//! Elements are stored by their integer encoding `c0 + c1 p + ... + c_{e-1} p^{e-1}`
//! of the little-endian coefficient vector, so prime-field elements are plain
//! residues. The field is built deterministically: the modulus is the first monic
//! irreducible polynomial in that same encoding order and the generator is the
//! primitive element with the smallest encoding.
//!
//! Discrete-log, antilog and Zech tables are built on first request for
//! `q <= TABLE_LIMIT`; the bulk search code asks for them, plain arithmetic
//! does not need them.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::arith;

/// Largest supported field order. Keeps exponent products inside 64 bits.
pub const MAX_ORDER: u64 = 1 << 31;

/// Largest order for which lookup tables are built.
pub const TABLE_LIMIT: u64 = 1 << 22;

pub(crate) const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{p}^{e} exceeds the supported field order {max}", max = MAX_ORDER)]
    Overflow { p: u64, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of F_{found} used in F_{expected}")]
    FieldMismatch { expected: u64, found: u64 },
    #[error("{divisor} does not divide q - 1 = {order_minus_one}")]
    NotADivisor { divisor: u64, order_minus_one: u64 },
    #[error("invalid field element {0:?}")]
    InvalidElement(String),
}

/// An element of some `F_{p^e}`; carries the field parameters so mixed-field use
/// can be rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    p: u32,
    e: u32,
    code: u64,
}

impl FieldElement {
    /// Integer encoding of the coefficient vector.
    pub fn code(self) -> u64 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }

    pub fn field_order(self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Little-endian coefficients over F_p, always `e` of them.
    pub fn coeffs(self) -> Vec<u64> {
        let p = self.p as u64;
        let mut c = self.code;
        (0..self.e)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            return write!(f, "{}", self.code);
        }
        let coeffs = self.coeffs();
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) struct Tables {
    /// `exp[i] = g^i` for `0 <= i < q - 1`.
    pub exp: Vec<u32>,
    /// `log[x]` with `log[0] = NO_LOG`.
    pub log: Vec<u32>,
    /// `zech[t] = log(1 + g^t)`, `NO_LOG` when `1 + g^t = 0`.
    pub zech: Vec<u32>,
}

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: u64,
    order_factors: Vec<u64>,
    tables: OnceLock<Option<Arc<Tables>>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.modulus == other.modulus
            && self.generator == other.generator
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds `F_{p^e}` with the deterministic modulus and generator.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::Overflow { p, e });
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::Overflow { p, e })?;
        let modulus = first_irreducible(p, e as usize);
        let order_factors = arith::prime_factors(q - 1);
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            generator: 1,
            order_factors,
            tables: OnceLock::new(),
        };
        field.generator = (1..q)
            .find(|&c| field.is_primitive_code(c))
            .expect("a finite field has a primitive element");
        Ok(field)
    }

    /// Builds the field of order `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = arith::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Monic modulus, little-endian, length `e + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.wrap(self.generator)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Element with the given integer encoding.
    pub fn element(&self, code: u64) -> Result<FieldElement, FieldError> {
        if code >= self.q {
            return Err(FieldError::InvalidElement(code.to_string()));
        }
        Ok(self.wrap(code))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::InvalidElement(format!("{coeffs:?}")));
        }
        let code = coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c);
        Ok(self.wrap(code))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, value: i64) -> FieldElement {
        self.wrap(value.rem_euclid(self.p as i64) as u64)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|c| self.wrap(c))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.p as u64 == self.p && x.e == self.e && x.code < self.q
    }

    fn check(&self, x: FieldElement) -> Result<u64, FieldError> {
        if self.contains(x) {
            Ok(x.code)
        } else {
            Err(FieldError::FieldMismatch {
                expected: self.q,
                found: x.field_order(),
            })
        }
    }

    pub(crate) fn wrap(&self, code: u64) -> FieldElement {
        FieldElement {
            p: self.p as u32,
            e: self.e,
            code,
        }
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.add_code(self.check(x)?, self.check(y)?)))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.sub_code(self.check(x)?, self.check(y)?)))
    }

    pub fn neg(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.neg_code(self.check(x)?)))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.mul_code(self.check(x)?, self.check(y)?)))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        let c = self.check(x)?;
        if c == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.wrap(self.pow_code(c, self.q - 2)))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        let inv = self.inv(y)?;
        self.mul(x, inv)
    }

    /// `x^exp`; negative exponents invert first.
    pub fn pow(&self, x: FieldElement, exp: i64) -> Result<FieldElement, FieldError> {
        let c = self.check(x)?;
        if exp >= 0 {
            return Ok(self.wrap(self.pow_code(c, exp as u64)));
        }
        if c == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let inv = self.pow_code(c, self.q - 2);
        Ok(self.wrap(self.pow_code(inv, exp.unsigned_abs())))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        let c = self.check(x)?;
        if c == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let mut order = self.q - 1;
        for &l in &self.order_factors {
            while order.is_multiple_of(l) && self.pow_code(c, order / l) == 1 {
                order /= l;
            }
        }
        Ok(order)
    }

    /// `log_g(x)` for nonzero `x`.
    pub fn dlog(&self, x: FieldElement) -> Result<u64, FieldError> {
        let c = self.check(x)?;
        if c == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = self.tables() {
            return Ok(t.log[c as usize] as u64);
        }
        let g = self.generator;
        let mut acc = 1u64;
        for i in 0..self.q - 1 {
            if acc == c {
                return Ok(i);
            }
            acc = self.mul_code(acc, g);
        }
        unreachable!("every nonzero element is a power of the generator")
    }

    /// The `r`-th roots of unity `w^0, w^1, ..., w^{r-1}` with `w = g^((q-1)/r)`.
    pub fn roots_of_unity(&self, r: u64) -> Result<Vec<FieldElement>, FieldError> {
        let k = self.cofactor(r)?;
        let w = self.pow_code(self.generator, k);
        Ok(self.powers(w, r))
    }

    /// One representative `g^0, ..., g^{k-1}` for each coset of the `k`-th powers in F_q^*.
    pub fn coset_reps(&self, k: u64) -> Result<Vec<FieldElement>, FieldError> {
        self.cofactor(k)?;
        Ok(self.powers(self.generator, k))
    }

    fn cofactor(&self, d: u64) -> Result<u64, FieldError> {
        if d == 0 || !(self.q - 1).is_multiple_of(d) {
            return Err(FieldError::NotADivisor {
                divisor: d,
                order_minus_one: self.q - 1,
            });
        }
        Ok((self.q - 1) / d)
    }

    fn powers(&self, base: u64, count: u64) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(count as usize);
        let mut acc = 1u64;
        for _ in 0..count {
            out.push(self.wrap(acc));
            acc = self.mul_code(acc, base);
        }
        out
    }

    /// Text form: the residue for prime fields, `c0,c1,...` otherwise.
    pub fn format_element(&self, x: FieldElement) -> String {
        x.to_string()
    }

    /// Parses the text form. Also accepts a bare integer (image in the prime
    /// subfield), `g` or `g^k` for generator powers, and a leading `-`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        let s = text.trim();
        let bad = || FieldError::InvalidElement(text.to_string());
        if let Some(rest) = s.strip_prefix('-') {
            let x = self.parse_element(rest)?;
            return self.neg(x);
        }
        if s == "g" {
            return Ok(self.generator());
        }
        if let Some(exp) = s.strip_prefix("g^") {
            let k: i64 = exp.trim().parse().map_err(|_| bad())?;
            return self.pow(self.generator(), k);
        }
        if s.contains(',') {
            let coeffs = s
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            if coeffs.len() != self.e as usize {
                return Err(bad());
            }
            return self.from_coeffs(&coeffs).map_err(|_| bad());
        }
        let v: i64 = s.parse().map_err(|_| bad())?;
        Ok(self.from_int(v))
    }

    // Unchecked arithmetic on encodings, used by the search loops.

    pub(crate) fn add_code(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        if self.e == 1 {
            let s = x + y;
            return if s >= p { s - p } else { s };
        }
        let (mut x, mut y, mut out, mut place) = (x, y, 0u64, 1u64);
        for _ in 0..self.e {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        out
    }

    pub(crate) fn neg_code(&self, x: u64) -> u64 {
        let p = self.p;
        if self.e == 1 {
            return if x == 0 { 0 } else { p - x };
        }
        let (mut x, mut out, mut place) = (x, 0u64, 1u64);
        for _ in 0..self.e {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        out
    }

    pub(crate) fn sub_code(&self, x: u64, y: u64) -> u64 {
        self.add_code(x, self.neg_code(y))
    }

    pub(crate) fn mul_code(&self, x: u64, y: u64) -> u64 {
        if self.e == 1 {
            return arith::mul_mod(x, y, self.p);
        }
        if x == 0 || y == 0 {
            return 0;
        }
        if let Some(Some(t)) = self.tables.get() {
            let s = (t.log[x as usize] as u64 + t.log[y as usize] as u64) % (self.q - 1);
            return t.exp[s as usize] as u64;
        }
        self.mul_code_poly(x, y)
    }

    pub(crate) fn pow_code(&self, x: u64, exp: u64) -> u64 {
        if exp == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = self.q - 1;
        let t = exp % n;
        if let Some(Some(tb)) = self.tables.get() {
            let s = arith::mul_mod(tb.log[x as usize] as u64, t, n);
            return tb.exp[s as usize] as u64;
        }
        self.pow_code_slow(x, t)
    }

    fn pow_code_slow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_code(acc, base);
            }
            base = self.mul_code(base, base);
            exp >>= 1;
        }
        acc
    }

    fn mul_code_poly(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        let e = self.e as usize;
        let mut a = [0u64; 32];
        let mut b = [0u64; 32];
        let (mut xx, mut yy) = (x, y);
        for i in 0..e {
            a[i] = xx % p;
            b[i] = yy % p;
            xx /= p;
            yy /= p;
        }
        let mut prod = [0u64; 64];
        for i in 0..e {
            if a[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        for i in (e..2 * e - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..e {
                let sub = c * self.modulus[j] % p;
                prod[i - e + j] = (prod[i - e + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        prod[..e].iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn is_primitive_code(&self, c: u64) -> bool {
        c != 0
            && self
                .order_factors
                .iter()
                .all(|&l| self.pow_code_slow(c, (self.q - 1) / l) != 1)
    }

    /// Lookup tables, built on first use when the field is small enough.
    pub(crate) fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| (self.q <= TABLE_LIMIT).then(|| Arc::new(self.build_tables())))
            .as_deref()
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![NO_LOG; self.q as usize];
        let mut acc = 1u64;
        for i in 0..n {
            exp.push(acc as u32);
            log[acc as usize] = i as u32;
            acc = if self.e == 1 {
                arith::mul_mod(acc, self.generator, self.p)
            } else {
                self.mul_code_poly(acc, self.generator)
            };
        }
        let zech = exp
            .iter()
            .map(|&x| log[self.add_code(x as u64, 1) as usize])
            .collect();
        Tables { exp, log, zech }
    }
}

/// First monic irreducible of degree `e` over F_p, ordering candidates by the
/// integer encoding of their non-leading coefficients.
fn first_irreducible(p: u64, e: usize) -> Vec<u64> {
    let count = p.pow(e as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(e + 1);
        let mut c = code;
        for _ in 0..e {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if e > 1 && f[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over F_p, little-endian, used for the irreducibility test.
pub(crate) mod poly {
    use crate::arith;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let df = f.len() - 1;
        let lead_inv = arith::inv_mod(f[df], p).expect("nonzero leading coefficient");
        while a.len() > df {
            let da = a.len() - 1;
            let c = arith::mul_mod(a[da], lead_inv, p);
            for j in 0..=df {
                let sub = arith::mul_mod(c, f[j], p);
                a[da - df + j] = (a[da - df + j] + p - sub) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + arith::mul_mod(x, y, p)) % p;
            }
        }
        rem(&prod, f, p)
    }

    pub fn pow_rem(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], f, p);
        let mut b = rem(base, f, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_rem(&acc, &b, f, p);
            }
            b = mul_rem(&b, &b, f, p);
            exp >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test: `x^(p^e) = x (mod f)` and `gcd(x^(p^(e/l)) - x, f) = 1`
    /// for every prime `l | e`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        if e <= 1 {
            return e == 1;
        }
        let x = vec![0, 1];
        let mut frob = vec![rem(&x, f, p)];
        for _ in 0..e {
            let next = pow_rem(frob.last().unwrap(), p, f, p);
            frob.push(next);
        }
        if trim(frob[e].clone()) != rem(&x, f, p) {
            return false;
        }
        arith::prime_factors(e as u64).into_iter().all(|l| {
            let mut h = frob[e / l as usize].clone();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            gcd(f, &h, p).len() == 1
        })
    }
}
