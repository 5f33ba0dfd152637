//! Finite fields GF(p^n) with elements encoded as base-p integers.
//!
//! An element of GF(p^n) = GF(p)[x]/(f) is the polynomial `c_0 + c_1 x + ... + c_{n-1} x^{n-1}`
//! and is stored as the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. The prime subfield is
//! therefore exactly the encodings `0..p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`build_field`].
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

/// Fields up to this order get log/exp tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 16;

/// Shared handle to a field description.
pub type Field = Arc<FieldSpec>;

/// A concrete finite field GF(p^n) given by a monic irreducible modulus.
pub struct FieldSpec {
    p: u32,
    n: u32,
    /// Monic modulus, coefficients low-to-high, length n + 1.
    modulus: Vec<u32>,
    order: u64,
    tables: Option<LogTables>,
}

struct LogTables {
    /// `exp[i] = g^i` for i in `0..2(q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
    /// `log[a]` for nonzero a; `log[0]` is unused.
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.n)
        }
    }
}

/// Builds GF(p^n) using the canonical modulus: the monic irreducible polynomial of degree `n`
/// whose lower coefficients, read as a base-p integer (`c_0 + c_1 p + ...`), are smallest.
pub fn build_field(p: u32, n: u32) -> Result<Field> {
    check_params(p, n)?;
    let q = (p as u64).pow(n);
    let lower_count = q; // p^n choices for c_0..c_{n-1}
    for code in 0..lower_count {
        let mut modulus = digits(code, p, n as usize);
        modulus.push(1);
        if is_irreducible(&modulus, p) {
            return FieldSpec::with_modulus(p, modulus);
        }
    }
    // There is always an irreducible polynomial of every degree.
    unreachable!("no irreducible polynomial of degree {n} over GF({p})")
}

fn check_params(p: u32, n: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
    }
    let mut q: u64 = 1;
    for _ in 0..n {
        q = q.saturating_mul(p as u64);
        if q > MAX_FIELD_ORDER {
            return Err(Error::DegreeTooLarge { p, n });
        }
    }
    Ok(())
}

impl FieldSpec {
    /// Builds a field from an explicit modulus, validating that it is monic and irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("modulus must have degree at least 1".into()));
        }
        let n = (modulus.len() - 1) as u32;
        check_params(p, n)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over GF({p})")));
        }
        let order = (p as u64).pow(n);
        let mut spec = FieldSpec { p, n, modulus, order, tables: None };
        if n > 1 && order <= TABLE_LIMIT {
            spec.tables = Some(spec.build_tables());
        }
        Ok(Arc::new(spec))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, p^n.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        (a as u64) < self.order
    }

    /// Whether `a` lies in the prime subfield GF(p).
    #[inline]
    pub fn is_prime_subfield_element(&self, a: u32) -> bool {
        a < self.p
    }

    /// The element `m · 1`, i.e. an integer reduced into the prime subfield.
    pub fn from_int(&self, m: u64) -> u32 {
        (m % self.p as u64) as u32
    }

    /// The encoding of the generator `x` (the class of x modulo the modulus).
    pub fn generator_x(&self) -> u32 {
        if self.n == 1 {
            // x ≡ -c_0 in a degree-one extension.
            self.neg(self.modulus[0])
        } else {
            self.p
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            ((a as u64 + b as u64) % self.p as u64) as u32
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.n == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.poly_mul(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.n == 1 {
            return Some(inv_mod(a as u64, self.p as u64) as u32);
        }
        if let Some(t) = &self.tables {
            let q1 = (self.order - 1) as u32;
            let l = t.log[a as usize];
            return Some(t.exp[((q1 - l) % q1) as usize]);
        }
        Some(self.pow(a, self.order - 2))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius power `a ↦ a^(p^j)`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        let j = j % self.n;
        if j == 0 || self.n == 1 {
            return a;
        }
        let mut out = a;
        for _ in 0..j {
            out = self.pow(out, self.p as u64);
        }
        out
    }

    /// Base-p digits of an element (its polynomial coefficients, low to high).
    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.p, self.n as usize)
    }

    /// Inverse of [`FieldSpec::digits`].
    pub fn from_digits(&self, ds: &[u32]) -> u32 {
        ds.iter().rev().fold(0u64, |acc, &d| acc * self.p as u64 + d as u64) as u32
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32, u32) -> u32) -> u32 {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            out += f(a % p, b % p, p) as u64 * place;
            a /= p;
            b /= p;
            place *= p as u64;
        }
        out as u32
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let n = self.n as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce using x^n = -(c_0 + ... + c_{n-1} x^{n-1}).
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..n].iter().enumerate() {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + p - (c * m as u64) % p) % p;
            }
        }
        let ds: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.from_digits(&ds)
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order as usize;
        let q1 = (q - 1) as u64;
        let primes = prime_factors(q1);
        let g = (2..q as u32)
            .find(|&g| primes.iter().all(|&l| self.poly_pow(g, q1 / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp[i] = cur;
            exp[i + q - 1] = cur;
            log[cur as usize] = i as u32;
            cur = self.poly_mul(cur, g);
        }
        LogTables { exp, log }
    }

    fn poly_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// The arithmetic operations exposed through [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    /// `a ↦ a^(p^j)`
    Frobenius(u32),
}

/// An element bundled with its field, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: u32) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::ElementOutOfRange { value: value as u64, order: field.order() });
        }
        Ok(FieldElement { value, field: field.clone() })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.inv(self.value).map(|v| self.with(v)).ok_or(Error::DivisionByZero)
    }

    pub fn frobenius(&self, j: u32) -> Self {
        self.with(self.field.frobenius(self.value, j))
    }

    fn with(&self, value: u32) -> Self {
        FieldElement { value, field: self.field.clone() }
    }
}

/// Applies `op` to `a` (and `b` for the binary operations).
pub fn field_arith(a: &FieldElement, b: Option<&FieldElement>, op: FieldOp) -> Result<FieldElement> {
    let need_b = || b.ok_or_else(|| Error::InvalidParameter("binary operation needs two operands".into()));
    match op {
        FieldOp::Add => a.add(need_b()?),
        FieldOp::Mul => a.mul(need_b()?),
        FieldOp::Inv => a.inv(),
        FieldOp::Frobenius(j) => Ok(a.frobenius(j)),
    }
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

// Dense polynomials over GF(p), coefficients low to high, used for the irreducibility test.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        for (i, &fc) in f.iter().enumerate() {
            let idx = k - df + i;
            r[idx] = (r[idx] + p - c * fc % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: f of degree n is irreducible iff
/// gcd(f, x^(p^i) - x) = 1 for every i in 1..=n/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        xp = poly_powmod(&xp, p, &f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(&f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
