//! Arithmetic in GF(p^m).
//!
//! Elements are stored as their integer encoding `Σ coeffs[i] · p^i`, where
//! `coeffs` are the coordinates in the polynomial basis `1, α, …, α^{m-1}` and
//! `α` is a root of the field modulus. Matrices and vectors elsewhere in the
//! crate hold these raw `u32` encodings next to a shared [`Field`] handle;
//! [`FieldElement`] is the checked, self-describing wrapper for callers who
//! want field mismatches reported as errors.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Parameters of GF(p^m): characteristic, degree and the defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    /// Monic irreducible polynomial of degree `m`, ascending coefficients
    /// (length `m + 1`, last entry 1).
    pub modulus: Vec<u32>,
}

impl FieldParams {
    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

struct FieldInner {
    params: FieldParams,
    q: u32,
    // exp[i] = g^i for a primitive element g, i in 0..q-1; log is its inverse
    // on nonzero elements.
    exp: Vec<u32>,
    log: Vec<u32>,
    pow_p: Vec<u32>,
    trace: Vec<u32>,
}

/// A finite field handle. Cheap to clone; equality compares parameters.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.params == other.0.params
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.params.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.m())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p(), self.m())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `b` over F_p (ascending coefficients).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = (bc as u64 * lead as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = match poly.len().checked_sub(1) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if poly[deg] != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                divisor.push((x % p as u64) as u32);
                x /= p as u64;
            }
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The default modulus: the monic irreducible polynomial of degree `m` whose
/// ascending coefficient list is lexicographically smallest.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if order > MAX_FIELD_ORDER as u64 {
        return Err(Error::InvalidField(format!("field order {p}^{m} exceeds {MAX_FIELD_ORDER}")));
    }
    let m = m as usize;
    // Lexicographic order on (c_0, c_1, ..., c_{m-1}) is the order in which
    // c_0 is the most significant digit.
    let count = order;
    for idx in 0..count {
        let mut poly = vec![0u32; m + 1];
        let mut x = idx;
        for i in (0..m).rev() {
            poly[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        poly[m] = 1;
        if is_irreducible(&poly, p) {
            return Ok(poly);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {m} over F_{p}")))
}

impl Field {
    /// GF(p^m) with the default modulus.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        let modulus = default_modulus(p, m)?;
        Self::with_modulus(p, m, modulus)
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 || modulus.len() != m as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have degree {m} (got {} coefficients)",
                modulus.len()
            )));
        }
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER as u64 {
            return Err(Error::InvalidField(format!("field order {p}^{m} exceeds {MAX_FIELD_ORDER}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let q = order as u32;
        let params = FieldParams { p, m, modulus };
        let pow_p = (0..m).map(|i| p.pow(i)).collect();
        let mut inner = FieldInner { params, q, exp: Vec::new(), log: Vec::new(), pow_p, trace: Vec::new() };
        inner.build_tables();
        let field = Field(Arc::new(inner));
        let trace = (0..q).map(|a| field.trace_by_powers(a)).collect();
        let mut inner = Arc::try_unwrap(field.0).unwrap_or_else(|_| unreachable!());
        inner.trace = trace;
        Ok(Field(Arc::new(inner)))
    }

    pub fn params(&self) -> &FieldParams {
        &self.0.params
    }

    pub fn p(&self) -> u32 {
        self.0.params.p
    }

    pub fn m(&self) -> u32 {
        self.0.params.m
    }

    /// Field order q = p^m.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.params.m == 1
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// The generator α of the polynomial basis.
    pub fn alpha(&self) -> u32 {
        if self.m() == 1 {
            // α is a root of x + c_0, i.e. -c_0.
            let c0 = self.0.params.modulus[0];
            (self.p() - c0) % self.p()
        } else {
            self.p()
        }
    }

    /// Iterator over every element encoding `0..q`.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q()
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.0.q
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        self.0.digits(a)
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        self.0.from_digits(digits)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.0.add(a, self.0.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul(a, b)
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        Ok(self.0.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % n)) % n) as usize]
    }

    /// Multiplication of an element by a prime-field scalar `c ∈ [0, p)`.
    pub fn scale_prime(&self, c: u32, a: u32) -> u32 {
        // Prime-subfield elements are exactly the encodings 0..p.
        self.mul(c % self.p(), a)
    }

    /// Absolute trace Tr(a) = a + a^p + … + a^{p^{m-1}}, an element of F_p.
    #[inline]
    pub fn trace(&self, a: u32) -> u32 {
        self.0.trace[a as usize]
    }

    fn trace_by_powers(&self, a: u32) -> u32 {
        let p = self.p() as u64;
        let mut acc = 0;
        let mut e = 1u64;
        for _ in 0..self.m() {
            acc = self.add(acc, self.pow(a, e));
            e *= p;
        }
        debug_assert!(acc < self.p(), "trace must land in the prime field");
        acc
    }

    /// Wraps a raw encoding as a checked element.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::DomainError(format!("{value} is not an element of GF({self})")));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    /// The polynomial basis {1, α, …, α^{m-1}}.
    pub fn polynomial_basis(&self) -> Basis {
        let elems = (0..self.m()).map(|i| self.0.pow_p[i as usize]).collect();
        Basis::new(self, elems).expect("polynomial basis is independent")
    }

    /// Parses `"p^m"` (or a bare prime `"p"`).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (p, m) = match spec.split_once('^') {
            Some((p, m)) => (p.trim(), m.trim()),
            None => (spec, "1"),
        };
        let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad field characteristic in {spec:?}")))?;
        let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad field degree in {spec:?}")))?;
        Self::new(p, m)
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Field::parse(s)
    }
}

impl FieldInner {
    #[inline]
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.params.p;
        (0..self.params.m)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    #[inline]
    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.params.p + d)
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.params.p;
        if p == 2 {
            return a ^ b;
        }
        if self.params.m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &self.pow_p {
            let d = (a % p + b % p) % p;
            out += d * w;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        let p = self.params.p;
        if p == 2 {
            return a;
        }
        if self.params.m == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let mut out = 0;
        for &w in &self.pow_p {
            out += ((p - a % p) % p) * w;
            a /= p;
        }
        out
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    /// Schoolbook multiplication modulo the field modulus, used only while
    /// the log tables are being built.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.params.p as u64;
        let m = self.params.m as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = ((prod[i + j] as u64 + da[i] as u64 * db[j] as u64) % p) as u32;
            }
        }
        let r = poly_rem(&prod, &self.params.modulus, self.params.p);
        self.from_digits(&r)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let n = q - 1;
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; q as usize];
        'candidates: for g in 2..q {
            let mut x = 1u32;
            for i in 0..n {
                if i > 0 && x == 1 {
                    continue 'candidates;
                }
                exp[i as usize] = x;
                x = self.mul_poly(x, g);
            }
            if x != 1 {
                continue;
            }
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            self.exp = exp;
            self.log = log;
            return;
        }
        // q = 2: the only nonzero element is 1.
        self.exp = vec![1];
        self.log = vec![0, 0];
    }
}

/// An element of GF(p^m) carrying its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}

/// Binary operations supported by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic on elements of the same field.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::MismatchedField);
    }
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement { field: f.clone(), value })
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Integer encoding.
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinates in the polynomial basis.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        arith(self, other, ArithOp::Add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        arith(self, other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        arith(self, other, ArithOp::Mul)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        arith(self, other, ArithOp::Div)
    }

    pub fn trace(&self) -> u32 {
        self.field.trace(self.value)
    }
}

/// A basis of GF(p^m) over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    field: Field,
    elements: Vec<u32>,
    // Inverse of the matrix whose columns are the polynomial-basis digits of
    // the basis elements; maps digits to basis coordinates.
    to_coords: Vec<Vec<u32>>,
}

/// Inverse of a square matrix over F_p, or `None` if singular.
fn inverse_mod_p(mat: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let p64 = p as u64;
    let mut a: Vec<Vec<u32>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let inv_mod = |x: u32| -> u32 {
        // Fermat; p is prime.
        let mut base = x as u64 % p64;
        let mut e = p64 - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p64;
            }
            base = base * base % p64;
            e >>= 1;
        }
        acc as u32
    };
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let s = inv_mod(a[col][col]);
        for x in a[col].iter_mut() {
            *x = (*x as u64 * s as u64 % p64) as u32;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col] as u64;
                for c in 0..2 * n {
                    let t = (f * a[col][c] as u64 % p64) as u32;
                    a[r][c] = (a[r][c] + p - t) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl Basis {
    pub fn new(field: &Field, elements: Vec<u32>) -> Result<Self> {
        let m = field.m() as usize;
        if elements.len() != m {
            return Err(Error::LengthMismatch { expected: m, actual: elements.len() });
        }
        if elements.iter().any(|&e| !field.contains(e)) {
            return Err(Error::DomainError("basis element outside the field".into()));
        }
        // Column j holds the digits of element j.
        let digit_rows: Vec<Vec<u32>> = elements.iter().map(|&e| field.digits(e)).collect();
        let cols: Vec<Vec<u32>> = (0..m).map(|i| digit_rows.iter().map(|d| d[i]).collect()).collect();
        let to_coords = inverse_mod_p(&cols, field.p()).ok_or(Error::SingularBasis)?;
        Ok(Basis { field: field.clone(), elements, to_coords })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// Coordinates of `x` over F_p in this basis.
    pub fn expand(&self, x: u32) -> Vec<u32> {
        let p = self.field.p() as u64;
        let d = self.field.digits(x);
        self.to_coords
            .iter()
            .map(|row| (row.iter().zip(&d).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32)
            .collect()
    }

    /// Inverse of [`Basis::expand`].
    pub fn combine(&self, coords: &[u32]) -> Result<u32> {
        if coords.len() != self.elements.len() {
            return Err(Error::LengthMismatch { expected: self.elements.len(), actual: coords.len() });
        }
        Ok(coords
            .iter()
            .zip(&self.elements)
            .fold(0, |acc, (&c, &b)| self.field.add(acc, self.field.scale_prime(c, b))))
    }

    /// The trace-dual basis: `Tr(b_i · b̂_j) = δ_ij`.
    pub fn dual(&self) -> Result<Basis> {
        let f = &self.field;
        let m = f.m() as usize;
        let poly = f.polynomial_basis();
        // gram[i][k] = Tr(b_i · α^k)
        let gram: Vec<Vec<u32>> = self
            .elements
            .iter()
            .map(|&b| poly.elements.iter().map(|&a| f.trace(f.mul(b, a))).collect())
            .collect();
        let ginv = inverse_mod_p(&gram, f.p()).ok_or(Error::SingularBasis)?;
        // b̂_j has polynomial-basis digits (ginv[k][j])_k.
        let duals = (0..m).map(|j| f.from_digits(&(0..m).map(|k| ginv[k][j]).collect::<Vec<_>>())).collect();
        Basis::new(f, duals)
    }
}

/// `dual_basis(b)` as a free function.
pub fn dual_basis(b: &Basis) -> Result<Basis> {
    b.dual()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2, 2).params().modulus, vec![1, 1, 1]);
        // (1,0,1,1) precedes (1,1,0,1) lexicographically.
        assert_eq!(gf(2, 3).params().modulus, vec![1, 0, 1, 1]);
        assert_eq!(gf(3, 2).params().modulus, vec![1, 0, 1]);
        assert_eq!(gf(5, 1).params().modulus, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::InvalidField(_))));
        assert!(matches!(Field::new(2, 0), Err(Error::InvalidField(_))));
        assert!(matches!(Field::new(2, 17), Err(Error::InvalidField(_))));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(Field::with_modulus(2, 2, vec![1, 0, 1]), Err(Error::InvalidField(_))));
    }

    #[test]
    fn gf2_and_gf4_products() {
        let f2 = gf(2, 1);
        assert_eq!(f2.add(1, 1), 0);
        let f4 = gf(2, 2);
        let a = f4.alpha();
        assert_eq!(a, 2);
        // α·α = α + 1, encoded as 1 + 1·2 = 3
        assert_eq!(f4.mul(a, a), 3);
        for x in f4.elements() {
            assert_eq!(f4.mul(x, 1), x);
        }
    }

    #[test]
    fn checked_arith_errors() {
        let f4 = gf(2, 2);
        let f3 = gf(3, 1);
        let a = f4.element(2).unwrap();
        let z = f4.element(0).unwrap();
        assert_eq!(arith(&a, &z, ArithOp::Div), Err(Error::DivisionByZero));
        let b = f3.element(1).unwrap();
        assert_eq!(arith(&a, &b, ArithOp::Add), Err(Error::MismatchedField));
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn gf4_traces() {
        let f4 = gf(2, 2);
        assert_eq!(f4.trace(0), 0);
        assert_eq!(f4.trace(f4.alpha()), 1);
        assert_eq!(f4.trace(1), 0);
    }

    #[test]
    fn dual_basis_examples() {
        let f5 = gf(5, 1);
        assert_eq!(f5.polynomial_basis().dual().unwrap().elements(), &[1]);
        let f4 = gf(2, 2);
        let b = f4.polynomial_basis();
        let alpha_sq = f4.mul(2, 2);
        assert_eq!(b.dual().unwrap().elements(), &[alpha_sq, 1]);
        assert_eq!(b.dual().unwrap().dual().unwrap(), b);
    }

    #[test]
    fn singular_basis_rejected() {
        let f4 = gf(2, 2);
        assert_eq!(Basis::new(&f4, vec![1, 1]), Err(Error::SingularBasis));
        assert_eq!(Basis::new(&f4, vec![0, 2]), Err(Error::SingularBasis));
    }

    #[test]
    fn expand_examples() {
        let f4 = gf(2, 2);
        let b = f4.polynomial_basis();
        assert_eq!(b.expand(0), vec![0, 0]);
        assert_eq!(b.expand(3), vec![1, 1]);
        for x in f4.elements() {
            assert_eq!(b.combine(&b.expand(x)).unwrap(), x);
        }
    }

    #[test]
    fn parse_field_specs() {
        assert_eq!(Field::parse("2^2").unwrap().q(), 4);
        assert_eq!(Field::parse(" 3 ^ 2 ").unwrap().q(), 9);
        assert_eq!(Field::parse("7").unwrap().q(), 7);
        assert!(matches!(Field::parse("x^2"), Err(Error::Parse(_))));
        assert_eq!("2^3".parse::<Field>().unwrap().to_string(), "2^3");
    }

    #[test]
    fn inverse_and_pow() {
        for f in [gf(2, 3), gf(3, 2), gf(7, 1), gf(2, 8)] {
            for a in 1..f.q() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.pow(a, (f.q() - 1) as u64), 1);
            }
            assert_eq!(f.inv(0), Err(Error::DivisionByZero));
        }
    }
}
