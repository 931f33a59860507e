//! Linear codes over F_q^n: canonical RREF generators, duals, membership,
//! coset-leader tables and coset decoding.

use std::fmt;

use rand::Rng;

use crate::error::{ensure_cap, pow_sat, Error, Result};
use crate::finite_field::{Field, FieldElement};

/// Cap on `q^{n-k}` for syndrome tables.
pub const MAX_SYNDROMES: u128 = 1 << 20;
/// Cap on explicit codeword enumeration.
pub const MAX_CODEWORDS: u128 = 1 << 24;

/// A vector in F_q^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorFq {
    field: Field,
    entries: Vec<u32>,
}

impl fmt::Debug for VectorFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VectorFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.q() <= 10 {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let s: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
            write!(f, "({})", s.join(","))
        }
    }
}

impl VectorFq {
    pub fn new(field: &Field, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| !field.contains(e)) {
            return Err(Error::DomainError(format!("{bad} is not an element of GF({field})")));
        }
        Ok(VectorFq { field: field.clone(), entries })
    }

    pub(crate) fn from_raw(field: &Field, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| field.contains(e)));
        VectorFq { field: field.clone(), entries }
    }

    pub fn from_elements(elems: &[FieldElement]) -> Result<Self> {
        let field = elems
            .first()
            .map(|e| e.field().clone())
            .ok_or_else(|| Error::DomainError("empty element list has no field".into()))?;
        if elems.iter().any(|e| e.field() != &field) {
            return Err(Error::MismatchedField);
        }
        Ok(VectorFq { entries: elems.iter().map(|e| e.value()).collect(), field })
    }

    pub fn zeros(field: &Field, n: usize) -> Self {
        VectorFq { field: field.clone(), entries: vec![0; n] }
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn unit(field: &Field, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n);
        v.entries[i] = 1;
        v
    }

    /// The vector with big-endian index `index` (first coordinate most significant).
    pub fn from_index(field: &Field, n: usize, mut index: u64) -> Self {
        let q = field.q() as u64;
        let mut entries = vec![0; n];
        for e in entries.iter_mut().rev() {
            *e = (index % q) as u32;
            index /= q;
        }
        VectorFq { field: field.clone(), entries }
    }

    /// Big-endian integer index; lexicographic order on entries equals
    /// numeric order on indices.
    pub fn index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.entries.iter().fold(0, |acc, &e| acc * q + e as u64)
    }

    /// All q^n vectors in index order.
    pub fn all(field: &Field, n: usize) -> impl Iterator<Item = VectorFq> + '_ {
        let count = (field.q() as u64).pow(n as u32);
        (0..count).map(move |i| VectorFq::from_index(field, n, i))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn get(&self, i: usize) -> Result<FieldElement> {
        let v = *self.entries.get(i).ok_or(Error::LengthMismatch { expected: i + 1, actual: self.len() })?;
        self.field.element(v)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MismatchedField);
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(VectorFq::from_raw(&self.field, vec_add(&self.field, &self.entries, &other.entries)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(VectorFq::from_raw(&self.field, vec_sub(&self.field, &self.entries, &other.entries)))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        VectorFq::from_raw(f, self.entries.iter().map(|&e| f.neg(e)).collect())
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = &self.field;
        VectorFq::from_raw(f, self.entries.iter().map(|&e| f.mul(c, e)).collect())
    }

    /// Σ x_i y_i.
    pub fn dot(&self, other: &Self) -> Result<FieldElement> {
        self.check_compatible(other)?;
        self.field.element(raw_dot(&self.field, &self.entries, &other.entries))
    }
}

/// `dot(x, y)` as a free function.
pub fn dot(x: &VectorFq, y: &VectorFq) -> Result<FieldElement> {
    x.dot(y)
}

pub(crate) fn vec_add(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub(crate) fn vec_sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub(crate) fn raw_dot(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// A dense matrix over F_q, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, actual: r.len() });
            }
            if let Some(&bad) = r.iter().find(|&&e| !field.contains(e)) {
                return Err(Error::DomainError(format!("{bad} is not an element of GF({field})")));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<VectorFq> {
        (0..self.rows).map(|r| VectorFq::from_raw(&self.field, self.row(r).to_vec())).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// `M · v` for a column vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows).map(|r| raw_dot(&self.field, self.row(r), v)).collect()
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        rref(self)
    }
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Row-equivalent RREF matrix, zero rows last.
    pub matrix: Matrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination to the unique reduced row-echelon form.
pub fn rref(m: &Matrix) -> Rref {
    let f = m.field.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            a[r * cols + j] = f.mul(inv, a[r * cols + j]);
        }
        for i in 0..rows {
            let factor = a[i * cols + c];
            if i != r && factor != 0 {
                for j in 0..cols {
                    let t = f.mul(factor, a[r * cols + j]);
                    a[i * cols + j] = f.sub(a[i * cols + j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: Matrix { field: f, rows, cols, data: a }, rank: r, pivots }
}

/// A linear [n, k] code, stored as its canonical RREF generator matrix.
///
/// Two codes are equal iff their RREF generators are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    n: usize,
    gen: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] code over GF({}) ", self.n, self.k(), self.field())?;
        f.debug_list().entries(self.gen.row_vectors()).finish()
    }
}

impl LinearCode {
    /// The span of the rows of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let Rref { matrix, rank, pivots } = rref(m);
        let gen = Matrix {
            field: matrix.field.clone(),
            rows: rank,
            cols: matrix.cols,
            data: matrix.data[..rank * matrix.cols].to_vec(),
        };
        LinearCode { n: m.cols, gen, pivots }
    }

    pub fn from_generators(field: &Field, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, n, rows)?))
    }

    pub fn from_vectors(field: &Field, n: usize, vs: &[VectorFq]) -> Result<Self> {
        let rows: Vec<Vec<u32>> = vs
            .iter()
            .map(|v| if v.field() != field { Err(Error::MismatchedField) } else { Ok(v.entries().to_vec()) })
            .collect::<Result<_>>()?;
        Self::from_generators(field, n, &rows)
    }

    /// F_q^n.
    pub fn full(field: &Field, n: usize) -> Self {
        Self::from_matrix(&Matrix::identity(field, n))
    }

    /// {0} ⊂ F_q^n.
    pub fn zero(field: &Field, n: usize) -> Self {
        Self::from_matrix(&Matrix::zeros(field, 0, n))
    }

    /// The [n, 1] repetition code.
    pub fn repetition(field: &Field, n: usize) -> Self {
        Self::from_generators(field, n, &[vec![1; n]]).expect("valid")
    }

    /// The binary [7, 4] Hamming code.
    pub fn hamming_7_4() -> Self {
        let f = Field::prime(2).expect("GF(2)");
        // Parity checks are the binary expansions of 1..=7.
        let h: Vec<Vec<u32>> = (0..3).map(|b| (1..=7u32).map(|c| (c >> (2 - b)) & 1).collect()).collect();
        Self::from_generators(&f, 7, &h).expect("valid").dual()
    }

    /// The [n, n-1] code of words whose coordinates sum to zero.
    pub fn even_weight(field: &Field, n: usize) -> Self {
        Self::repetition(field, n).dual()
    }

    pub fn field(&self) -> &Field {
        &self.gen.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.rows
    }

    /// k × n RREF generator matrix.
    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of codewords, saturating.
    pub fn size(&self) -> u128 {
        pow_sat(self.field().q() as u64, self.k())
    }

    fn check_vector(&self, v: &VectorFq) -> Result<()> {
        if v.field() != self.field() {
            return Err(Error::MismatchedField);
        }
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: v.len() });
        }
        Ok(())
    }

    /// Canonical representative of `v + C`: `v` with the code's pivot
    /// coordinates eliminated.
    pub(crate) fn residue_raw(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let coef = out[c];
            if coef != 0 {
                for (o, &g) in out.iter_mut().zip(self.gen.row(r)) {
                    *o = f.sub(*o, f.mul(coef, g));
                }
            }
        }
        out
    }

    pub fn residue(&self, v: &VectorFq) -> Result<VectorFq> {
        self.check_vector(v)?;
        Ok(VectorFq::from_raw(self.field(), self.residue_raw(v.entries())))
    }

    pub(crate) fn contains_raw(&self, v: &[u32]) -> bool {
        self.residue_raw(v).iter().all(|&e| e == 0)
    }

    pub fn contains(&self, v: &VectorFq) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.contains_raw(v.entries()))
    }

    /// The dual code { y | x·y = 0 for all x ∈ C }.
    pub fn dual(&self) -> LinearCode {
        let f = self.field().clone();
        let n = self.n;
        let mut is_pivot = vec![None; n];
        for (r, &c) in self.pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        // For RREF [I | A] (up to column order) the kernel is spanned by one
        // vector per free column.
        let rows: Vec<Vec<u32>> = (0..n)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![0u32; n];
                v[free] = 1;
                for (r, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = f.neg(self.gen.get(r, free));
                }
                v
            })
            .collect();
        let m = Matrix::from_rows(&f, n, &rows).expect("well-formed kernel rows");
        LinearCode::from_matrix(&m)
    }

    /// (n-k) × n parity-check matrix (the generator of the dual).
    pub fn parity_check(&self) -> Matrix {
        self.dual().gen
    }

    /// Codeword for message coordinates `msg` (length k) in the RREF basis.
    pub fn encode(&self, msg: &[u32]) -> Result<VectorFq> {
        if msg.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), actual: msg.len() });
        }
        let f = self.field();
        let mut out = vec![0u32; self.n];
        for (r, &c) in msg.iter().enumerate() {
            if c != 0 {
                for (o, &g) in out.iter_mut().zip(self.gen.row(r)) {
                    *o = f.add(*o, f.mul(c, g));
                }
            }
        }
        Ok(VectorFq::from_raw(f, out))
    }

    /// All q^k codewords.
    pub fn codewords(&self) -> Result<Vec<VectorFq>> {
        ensure_cap("codeword enumeration", self.size(), MAX_CODEWORDS)?;
        let q = self.field().q() as u64;
        let count = self.size() as u64;
        let k = self.k();
        (0..count)
            .map(|i| {
                let mut msg = vec![0u32; k];
                let mut x = i;
                for m in msg.iter_mut().rev() {
                    *m = (x % q) as u32;
                    x /= q;
                }
                self.encode(&msg)
            })
            .collect()
    }

    /// A uniformly random codeword.
    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> VectorFq {
        let q = self.field().q();
        let msg: Vec<u32> = (0..self.k()).map(|_| rng.random_range(0..q)).collect();
        self.encode(&msg).expect("message length matches")
    }

    /// Minimum Hamming distance by exhaustive enumeration (`None` for {0}).
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self.codewords()?.iter().map(VectorFq::weight).filter(|&w| w > 0).min())
    }

    /// Serializes in the text matrix format: `p^m n k`, then k rows.
    pub fn to_matrix_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field(), self.n, self.k());
        for r in 0..self.k() {
            let row: Vec<String> = self.gen.row(r).iter().map(|e| e.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text matrix format. Rows must be linearly independent.
    pub fn parse_matrix_text(text: &str) -> Result<Self> {
        let mut lines =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let [fs, ns, ks] = parts[..] else {
            return Err(Error::Parse(format!("header must be 'q n k', got {header:?}")));
        };
        let field = Field::parse(fs)?;
        let n: usize = ns.parse().map_err(|_| Error::Parse(format!("bad length {ns:?}")))?;
        let k: usize = ks.parse().map_err(|_| Error::Parse(format!("bad dimension {ks:?}")))?;
        let mut rows = Vec::with_capacity(k);
        for line in lines {
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row has {} entries, expected {n}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows, found {}", rows.len())));
        }
        let code = Self::from_generators(&field, n, &rows)?;
        if code.k() != k {
            return Err(Error::Parse(format!("generator rows have rank {} < {k}", code.k())));
        }
        Ok(code)
    }
}

/// `B ≤ C`: every generator of `b` lies in `c`.
pub fn is_subcode(b: &LinearCode, c: &LinearCode) -> Result<bool> {
    if b.field() != c.field() {
        return Err(Error::MismatchedField);
    }
    if b.n() != c.n() {
        return Err(Error::LengthMismatch { expected: c.n(), actual: b.n() });
    }
    Ok((0..b.k()).all(|r| c.contains_raw(b.gen.row(r))))
}

/// Minimum-weight coset leaders of F_q^n / C, indexed by syndrome.
#[derive(Clone, PartialEq, Eq)]
pub struct SyndromeTable {
    parity: Matrix,
    leaders: Vec<Vec<u32>>,
    leader_weights: Vec<usize>,
}

impl fmt::Debug for SyndromeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyndromeTable")
            .field("syndromes", &self.leaders.len())
            .field("max_leader_weight", &self.leader_weights.iter().max())
            .finish()
    }
}

/// Visits every weight-`w` vector of length `n` over `0..q`.
fn for_each_weight_vector(n: usize, q: u32, w: usize, mut visit: impl FnMut(&[u32])) {
    fn rec(v: &mut [u32], start: usize, left: usize, q: u32, visit: &mut dyn FnMut(&[u32])) {
        if left == 0 {
            visit(v);
            return;
        }
        for pos in start..=v.len() - left {
            for val in 1..q {
                v[pos] = val;
                rec(v, pos + 1, left - 1, q, visit);
            }
            v[pos] = 0;
        }
    }
    if w <= n {
        rec(&mut vec![0u32; n], 0, w, q, &mut visit);
    }
}

impl SyndromeTable {
    /// Builds the complete leader table for `code`.
    ///
    /// Leaders have minimum weight in their coset; ties go to the
    /// lexicographically smallest vector.
    pub fn build(code: &LinearCode) -> Result<Self> {
        let f = code.field();
        let q = f.q();
        let n = code.n();
        let r = n - code.k();
        let count = pow_sat(q as u64, r);
        ensure_cap("syndrome table", count, MAX_SYNDROMES)?;
        let count = count as usize;
        let parity = code.parity_check();
        let mut leaders: Vec<Option<Vec<u32>>> = vec![None; count];
        let mut leader_weights = vec![usize::MAX; count];
        let mut filled = 0;
        for w in 0..=n {
            for_each_weight_vector(n, q, w, |v| {
                let s = syndrome_index(q, &parity.mul_vec(v));
                match &leaders[s] {
                    None => {
                        leaders[s] = Some(v.to_vec());
                        leader_weights[s] = w;
                        filled += 1;
                    }
                    Some(cur) if leader_weights[s] == w && v < cur.as_slice() => {
                        leaders[s] = Some(v.to_vec());
                    }
                    _ => {}
                }
            });
            if filled == count {
                break;
            }
        }
        let leaders = leaders.into_iter().map(|l| l.expect("every syndrome is reachable")).collect();
        Ok(SyndromeTable { parity, leaders, leader_weights })
    }

    pub fn parity(&self) -> &Matrix {
        &self.parity
    }

    pub fn field(&self) -> &Field {
        self.parity.field()
    }

    /// Number of syndromes, q^{n-k}.
    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    pub fn n(&self) -> usize {
        self.parity.cols()
    }

    pub fn syndrome(&self, v: &VectorFq) -> VectorFq {
        VectorFq::from_raw(self.field(), self.parity.mul_vec(v.entries()))
    }

    pub(crate) fn syndrome_index_raw(&self, v: &[u32]) -> usize {
        syndrome_index(self.field().q(), &self.parity.mul_vec(v))
    }

    pub(crate) fn leader_raw(&self, v: &[u32]) -> &[u32] {
        &self.leaders[self.syndrome_index_raw(v)]
    }

    /// The coset leader of `v + C`.
    pub fn leader_of(&self, v: &VectorFq) -> Result<VectorFq> {
        if v.field() != self.field() {
            return Err(Error::MismatchedField);
        }
        if v.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: v.len() });
        }
        Ok(VectorFq::from_raw(self.field(), self.leader_raw(v.entries()).to_vec()))
    }

    /// The leader for a syndrome given by its big-endian index.
    pub fn leader(&self, syndrome: usize) -> Option<VectorFq> {
        self.leaders.get(syndrome).map(|l| VectorFq::from_raw(self.field(), l.clone()))
    }

    /// All leaders, ordered by syndrome index.
    pub fn leaders(&self) -> Vec<VectorFq> {
        self.leaders.iter().map(|l| VectorFq::from_raw(self.field(), l.clone())).collect()
    }

    pub fn leader_weight(&self, syndrome: usize) -> Option<usize> {
        self.leader_weights.get(syndrome).copied()
    }

    /// `true` iff `v` is the canonical leader of its own coset.
    pub fn is_leader(&self, v: &VectorFq) -> bool {
        v.field() == self.field() && v.len() == self.n() && self.leader_raw(v.entries()) == v.entries()
    }
}

fn syndrome_index(q: u32, s: &[u32]) -> usize {
    s.iter().fold(0usize, |acc, &e| acc * q as usize + e as usize)
}

/// Build the leader table (free-function form).
pub fn build_syndrome_table(code: &LinearCode) -> Result<SyndromeTable> {
    SyndromeTable::build(code)
}

/// Decodes `received` in the coset code `shift + C`: returns
/// `received - leader(received - shift)`, the word of `shift + C` closest to
/// `received` in the leader sense.
pub fn decode_coset(
    code: &LinearCode,
    shift: &VectorFq,
    received: &VectorFq,
    table: &SyndromeTable,
) -> Result<VectorFq> {
    code.check_vector(shift)?;
    code.check_vector(received)?;
    if table.n() != code.n() || table.field() != code.field() {
        return Err(Error::MismatchedField);
    }
    let f = code.field();
    let diff = vec_sub(f, received.entries(), shift.entries());
    let leader = table.leader_raw(&diff);
    Ok(VectorFq::from_raw(f, vec_sub(f, received.entries(), leader)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    fn v2(bits: &str) -> VectorFq {
        VectorFq::new(&gf2(), bits.bytes().map(|b| (b - b'0') as u32).collect()).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(v2("110").dot(&v2("111")).unwrap().value(), 0);
        assert_eq!(v2("101").dot(&v2("111")).unwrap().value(), 0);
        assert_eq!(v2("101").dot(&v2("000")).unwrap().value(), 0);
        assert_eq!(v2("100").dot(&v2("101")).unwrap().value(), 1);
        assert!(matches!(v2("10").dot(&v2("101")), Err(Error::LengthMismatch { .. })));
        let f3 = Field::prime(3).unwrap();
        let w = VectorFq::new(&f3, vec![1, 0]).unwrap();
        assert_eq!(v2("10").dot(&w), Err(Error::MismatchedField));
    }

    #[test]
    fn rref_examples() {
        let f = gf2();
        let id = Matrix::identity(&f, 4);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        let m = Matrix::from_rows(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix.row(0), &[1, 0, 1]);
        assert_eq!(r.matrix.row(1), &[0, 1, 1]);
        assert_eq!(r.matrix.row(2), &[0, 0, 0]);
        let z = Matrix::zeros(&f, 2, 3);
        assert_eq!(rref(&z).rank, 0);
        assert_eq!(rref(&z).matrix, z);
    }

    #[test]
    fn rref_over_gf3_normalizes_pivots() {
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_rows(&f, 2, &[vec![2, 1], vec![1, 1]]).unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, Matrix::identity(&f, 2));
    }

    #[test]
    fn dual_examples() {
        let f = gf2();
        assert_eq!(LinearCode::full(&f, 5).dual(), LinearCode::zero(&f, 5));
        let ham = LinearCode::hamming_7_4();
        assert_eq!((ham.n(), ham.k()), (7, 4));
        let hd = ham.dual();
        assert_eq!(hd.k(), 3);
        assert!(is_subcode(&hd, &ham).unwrap());
        assert_eq!(hd.dual(), ham);
        assert_eq!(ham.min_distance().unwrap(), Some(3));
    }

    #[test]
    fn subcode_examples() {
        let f = gf2();
        let rep = LinearCode::repetition(&f, 3);
        assert!(is_subcode(&LinearCode::zero(&f, 3), &rep).unwrap());
        assert!(!is_subcode(&LinearCode::full(&f, 3), &rep).unwrap());
        assert!(matches!(is_subcode(&LinearCode::zero(&f, 4), &rep), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn syndrome_table_examples() {
        let f = gf2();
        let rep = LinearCode::repetition(&f, 3);
        let t = SyndromeTable::build(&rep).unwrap();
        let mut leaders: Vec<String> = t.leaders().iter().map(|v| v.to_string()).collect();
        leaders.sort();
        assert_eq!(leaders, vec!["000", "001", "010", "100"]);

        let full = SyndromeTable::build(&LinearCode::full(&f, 4)).unwrap();
        assert_eq!(full.len(), 1);
        assert!(full.leaders()[0].is_zero());

        let ham = SyndromeTable::build(&LinearCode::hamming_7_4()).unwrap();
        assert_eq!(ham.len(), 8);
        let mut weights: Vec<usize> = ham.leaders().iter().map(VectorFq::weight).collect();
        weights.sort();
        assert_eq!(weights, vec![0, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn syndrome_table_size_cap() {
        let f = gf2();
        let code = LinearCode::zero(&f, 21);
        assert!(matches!(SyndromeTable::build(&code), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn decode_coset_examples() {
        let f = gf2();
        let rep = LinearCode::repetition(&f, 3);
        let t = SyndromeTable::build(&rep).unwrap();
        let x = v2("100");
        // x + 111 + 001
        let received = v2("010");
        assert_eq!(decode_coset(&rep, &x, &received, &t).unwrap(), v2("011"));

        let ham = LinearCode::hamming_7_4();
        let th = SyndromeTable::build(&ham).unwrap();
        let zero = VectorFq::zeros(&f, 7);
        let c = ham.codewords().unwrap()[5].clone();
        assert_eq!(decode_coset(&ham, &zero, &c, &th).unwrap(), c);
        let noisy = c.add(&VectorFq::unit(&f, 7, 3)).unwrap();
        assert_eq!(decode_coset(&ham, &zero, &noisy, &th).unwrap(), c);
    }

    #[test]
    fn matrix_text_round_trip() {
        let ham = LinearCode::hamming_7_4();
        let text = ham.to_matrix_text();
        assert!(text.starts_with("2^1 7 4\n"));
        assert_eq!(LinearCode::parse_matrix_text(&text).unwrap(), ham);
        let commented = "# rep code\n2^1 3 1  # header\n\n 1   1 1\n";
        assert_eq!(LinearCode::parse_matrix_text(commented).unwrap(), LinearCode::repetition(&gf2(), 3));
        assert!(LinearCode::parse_matrix_text("2^1 3 2\n1 1 1\n1 1 1\n").is_err());
        assert!(LinearCode::parse_matrix_text("2^1 3 1\n1 2 1\n").is_err());
        assert!(LinearCode::parse_matrix_text("2^1 3\n").is_err());
    }

    #[test]
    fn weight_enumeration_counts() {
        // C(4,2) * 2^2 weight-2 vectors over GF(3)
        let mut count = 0;
        for_each_weight_vector(4, 3, 2, |_| count += 1);
        assert_eq!(count, 24);
        let mut count = 0;
        for_each_weight_vector(4, 2, 0, |v| {
            assert!(v.iter().all(|&e| e == 0));
            count += 1
        });
        assert_eq!(count, 1);
    }
}
