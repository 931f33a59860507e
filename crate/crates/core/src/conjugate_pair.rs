//! Conjugate (CSS) code pairs, quotient codes and trace-dual expansion to
//! the prime field.
//!
//! A pair `(C1, C2)` of linear codes of length `n` is conjugate when
//! `C2^⊥ ≤ C1` (equivalently `C1^⊥ ≤ C2`). Its messages are the cosets
//! `C1 / C2^⊥`, and `k = k1 + k2 - n` counts their dimension.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_cap, pow_sat, Error, Result};
use crate::finite_field::{Basis, Field};
use crate::linear_codes::{is_subcode, vec_sub, LinearCode, VectorFq, MAX_CODEWORDS};

/// Cap on the number of cosets materialized by a [`QuotientCode`].
pub const MAX_QUOTIENT_SIZE: u128 = 1 << 20;
/// Cap on `|J|^2` for [`quotient_correctable`].
pub const MAX_ERROR_PAIRS: u128 = 1 << 28;

/// A validated conjugate pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatePair {
    c1: LinearCode,
    c2: LinearCode,
    c1_dual: LinearCode,
    c2_dual: LinearCode,
    k: usize,
}

impl ConjugatePair {
    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    pub fn c1_dual(&self) -> &LinearCode {
        &self.c1_dual
    }

    pub fn c2_dual(&self) -> &LinearCode {
        &self.c2_dual
    }

    pub fn field(&self) -> &Field {
        self.c1.field()
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    pub fn k1(&self) -> usize {
        self.c1.k()
    }

    pub fn k2(&self) -> usize {
        self.c2.k()
    }

    /// Message dimension `k1 + k2 - n`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The message space `C1 / C2^⊥`.
    pub fn message_space(&self) -> Result<QuotientCode> {
        QuotientCode::new(&self.c1, &self.c2_dual)
    }

    /// Canonical transversal of `C1 / C2^⊥` (`q^k` vectors).
    pub fn message_representatives(&self) -> Result<Vec<VectorFq>> {
        Ok(self.message_space()?.representatives())
    }

    /// Size and distance summary. Distances are `None` when exhaustive
    /// enumeration is over budget or the code is {0}.
    pub fn summary(&self) -> PairSummary {
        let dist = |c: &LinearCode| {
            if c.size() <= 1 << 16 {
                c.min_distance().ok().flatten()
            } else {
                None
            }
        };
        let mut warnings = Vec::new();
        if self.k == 0 {
            warnings.push("k = 0: the pair is valid but carries no message".to_string());
        }
        PairSummary {
            field: self.field().to_string(),
            n: self.n(),
            k1: self.k1(),
            k2: self.k2(),
            k: self.k,
            d1: dist(&self.c1),
            d2: dist(&self.c2),
            self_conjugate: self.c1 == self.c2,
            warnings,
        }
    }
}

/// Report-friendly description of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub field: String,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub k: usize,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub self_conjugate: bool,
    pub warnings: Vec<String>,
}

/// Validates `C2^⊥ ≤ C1` and builds the pair.
pub fn make_pair(c1: LinearCode, c2: LinearCode) -> Result<ConjugatePair> {
    if c1.field() != c2.field() {
        return Err(Error::MismatchedField);
    }
    if c1.n() != c2.n() {
        return Err(Error::LengthMismatch { expected: c1.n(), actual: c2.n() });
    }
    let c2_dual = c2.dual();
    if !is_subcode(&c2_dual, &c1)? {
        return Err(Error::NotConjugate);
    }
    let c1_dual = c1.dual();
    debug_assert!(is_subcode(&c1_dual, &c2)?);
    let k = c1.k() + c2.k() - c1.n();
    Ok(ConjugatePair { c1, c2, c1_dual, c2_dual, k })
}

/// `C ≤ C^⊥`: all pairwise generator products vanish.
pub fn self_orthogonality_check(c: &LinearCode) -> bool {
    let g = c.generator();
    let f = c.field();
    (0..c.k()).all(|i| (i..c.k()).all(|j| crate::linear_codes::raw_dot(f, g.row(i), g.row(j)) == 0))
}

/// An additive quotient `C / B` with `B ≤ C`, together with its canonical
/// transversal: the minimum-weight, then lexicographically smallest, member
/// of each coset.
#[derive(Debug, Clone)]
pub struct QuotientCode {
    c: LinearCode,
    b: LinearCode,
    reps: Vec<Vec<u32>>,
    // residue of a coset modulo B -> index into `reps`
    index: HashMap<Vec<u32>, usize>,
}

impl QuotientCode {
    pub fn new(c: &LinearCode, b: &LinearCode) -> Result<Self> {
        if !is_subcode(b, c)? {
            return Err(Error::DomainError("quotient requires B ≤ C".into()));
        }
        let q = c.field().q() as u64;
        ensure_cap("quotient size", pow_sat(q, c.k() - b.k()), MAX_QUOTIENT_SIZE)?;
        ensure_cap("codeword enumeration", c.size(), MAX_CODEWORDS)?;
        let mut best: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for w in c.codewords()? {
            let key = b.residue_raw(w.entries());
            let entry = best.entry(key).or_insert_with(|| w.entries().to_vec());
            let cur_w = entry.iter().filter(|&&e| e != 0).count();
            let new_w = w.weight();
            if new_w < cur_w || (new_w == cur_w && w.entries() < entry.as_slice()) {
                *entry = w.into_entries();
            }
        }
        let mut reps: Vec<Vec<u32>> = best.into_values().collect();
        reps.sort_by(|a, b| {
            let wa = a.iter().filter(|&&e| e != 0).count();
            let wb = b.iter().filter(|&&e| e != 0).count();
            wa.cmp(&wb).then_with(|| a.cmp(b))
        });
        let index = reps.iter().enumerate().map(|(i, r)| (b.residue_raw(r), i)).collect();
        Ok(QuotientCode { c: c.clone(), b: b.clone(), reps, index })
    }

    pub fn code(&self) -> &LinearCode {
        &self.c
    }

    pub fn subcode(&self) -> &LinearCode {
        &self.b
    }

    /// Number of cosets, `q^{dim C - dim B}`.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives ordered by (weight, lexicographic).
    pub fn representatives(&self) -> Vec<VectorFq> {
        self.reps.iter().map(|r| VectorFq::from_raw(self.c.field(), r.clone())).collect()
    }

    /// Index of the coset of `v ∈ C`, or `None` when `v ∉ C`.
    pub(crate) fn index_of_raw(&self, v: &[u32]) -> Option<usize> {
        if !self.c.contains_raw(v) {
            return None;
        }
        self.index.get(&self.b.residue_raw(v)).copied()
    }

    pub fn index_of(&self, v: &VectorFq) -> Option<usize> {
        if v.field() != self.c.field() || v.len() != self.c.n() {
            return None;
        }
        self.index_of_raw(v.entries())
    }

    /// Canonical representative of `v + B` for `v ∈ C`.
    pub fn representative_of(&self, v: &VectorFq) -> Option<VectorFq> {
        self.index_of(v).map(|i| VectorFq::from_raw(self.c.field(), self.reps[i].clone()))
    }

    pub fn is_representative(&self, v: &VectorFq) -> bool {
        self.index_of(v).is_some_and(|i| self.reps[i] == v.entries())
    }
}

/// Whether the quotient code `C / B` corrects every error in `J + B`:
/// for all distinct `e, e' ∈ J + B`, `e - e' ∈ C` implies `e - e' ∈ B`.
///
/// Differences within `J + B` reduce to differences within `J` modulo `B`,
/// so only pairs from `J` are examined.
pub fn quotient_correctable(qc: &QuotientCode, errors: &[VectorFq]) -> Result<bool> {
    let c = &qc.c;
    let b = &qc.b;
    for e in errors {
        if e.field() != c.field() {
            return Err(Error::MismatchedField);
        }
        if e.len() != c.n() {
            return Err(Error::LengthMismatch { expected: c.n(), actual: e.len() });
        }
    }
    let m = errors.len() as u128;
    ensure_cap("error pairs", m * m, MAX_ERROR_PAIRS)?;
    let f = c.field();
    for (i, e) in errors.iter().enumerate() {
        for e2 in &errors[i + 1..] {
            let d = vec_sub(f, e.entries(), e2.entries());
            if c.contains_raw(&d) && !b.contains_raw(&d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Expands a code over GF(p^m) coordinatewise in `basis` to a code of length
/// `n·m` over GF(p).
pub fn expand_code(code: &LinearCode, basis: &Basis, prime: &Field) -> Result<LinearCode> {
    let f = code.field();
    if basis.field() != f {
        return Err(Error::MismatchedField);
    }
    let m = f.m() as usize;
    let n = code.n();
    let poly = f.polynomial_basis();
    let mut rows = Vec::with_capacity(code.k() * m);
    for g in code.generator().row_vectors() {
        // The F_p-span of C is spanned by β·g over a basis β of GF(p^m).
        for &beta in poly.elements() {
            let mut row = Vec::with_capacity(n * m);
            for &x in g.entries() {
                row.extend(basis.expand(f.mul(beta, x)));
            }
            rows.push(row);
        }
    }
    LinearCode::from_generators(prime, n * m, &rows)
}

/// Expands a pair over GF(p^m) to a pair over GF(p): `C1` in the polynomial
/// basis and `C2` in its trace-dual basis. Pairs already over a prime field
/// are returned unchanged.
pub fn expand_pair(pair: &ConjugatePair) -> Result<ConjugatePair> {
    let f = pair.field();
    if f.is_prime_field() {
        return Ok(pair.clone());
    }
    let prime = Field::prime(f.p())?;
    let b = f.polynomial_basis();
    let bd = b.dual()?;
    let c1 = expand_code(pair.c1(), &b, &prime)?;
    let c2 = expand_code(pair.c2(), &bd, &prime)?;
    make_pair(c1, c2)
}

/// On-disk description of a pair: two matrix files next to a JSON manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub n: usize,
    pub c1: PathBuf,
    pub c2: PathBuf,
}

impl PairManifest {
    /// Loads and validates the pair; matrix paths resolve relative to the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<ConjugatePair> {
        let text = fs::read_to_string(path)?;
        let manifest: PairManifest =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        manifest.resolve(|p| fs::read_to_string(base.join(p)).map_err(Error::from))
    }

    /// Builds the pair, fetching matrix files through `read`.
    pub fn resolve(&self, mut read: impl FnMut(&Path) -> Result<String>) -> Result<ConjugatePair> {
        let field = Field::parse(&self.field)?;
        let c1 = LinearCode::parse_matrix_text(&read(&self.c1)?)?;
        let c2 = LinearCode::parse_matrix_text(&read(&self.c2)?)?;
        for c in [&c1, &c2] {
            if c.field() != &field {
                return Err(Error::MismatchedField);
            }
            if c.n() != self.n {
                return Err(Error::LengthMismatch { expected: self.n, actual: c.n() });
            }
        }
        make_pair(c1, c2)
    }

    /// Writes `<name>.json`, `<name>_c1.mat` and `<name>_c2.mat` into `dir`.
    pub fn write_bundle(dir: &Path, name: &str, pair: &ConjugatePair) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let c1_file = PathBuf::from(format!("{name}_c1.mat"));
        let c2_file = PathBuf::from(format!("{name}_c2.mat"));
        fs::write(dir.join(&c1_file), pair.c1().to_matrix_text())?;
        fs::write(dir.join(&c2_file), pair.c2().to_matrix_text())?;
        let manifest = PairManifest {
            name: Some(name.to_string()),
            field: pair.field().to_string(),
            n: pair.n(),
            c1: c1_file,
            c2: c2_file,
        };
        let path = dir.join(format!("{name}.json"));
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        fs::write(&path, json)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn make_pair_examples() {
        let f = gf2();
        let full = make_pair(LinearCode::full(&f, 3), LinearCode::full(&f, 3)).unwrap();
        assert_eq!(full.k(), 3);
        let ham = LinearCode::hamming_7_4();
        let steane = make_pair(ham.clone(), ham).unwrap();
        assert_eq!(steane.k(), 1);
        let rep = LinearCode::repetition(&f, 3);
        assert_eq!(make_pair(rep.clone(), rep), Err(Error::NotConjugate));
        assert!(matches!(
            make_pair(LinearCode::full(&f, 3), LinearCode::full(&f, 4)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn message_representative_examples() {
        let f = gf2();
        // k = 0
        let ev = LinearCode::even_weight(&f, 2);
        let p0 = make_pair(ev.clone(), ev).unwrap();
        assert_eq!(p0.k(), 0);
        let reps = p0.message_representatives().unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].is_zero());
        assert!(!p0.summary().warnings.is_empty());

        let ham = LinearCode::hamming_7_4();
        let steane = make_pair(ham.clone(), ham).unwrap();
        let reps = steane.message_representatives().unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps[0].is_zero());
        assert!(steane.c1().contains(&reps[1]).unwrap());
        assert!(!steane.c2_dual().contains(&reps[1]).unwrap());
        assert_eq!(reps[1].weight(), 3);

        let p = make_pair(LinearCode::full(&f, 2), LinearCode::full(&f, 2)).unwrap();
        let reps: Vec<String> = p.message_representatives().unwrap().iter().map(|v| v.to_string()).collect();
        assert_eq!(reps, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn self_orthogonality_examples() {
        let f = gf2();
        assert!(self_orthogonality_check(&LinearCode::zero(&f, 4)));
        let simplex = LinearCode::hamming_7_4().dual();
        assert!(self_orthogonality_check(&simplex));
        let sd = simplex.dual();
        assert!(make_pair(sd.clone(), sd).is_ok());
        assert!(!self_orthogonality_check(&LinearCode::full(&f, 3)));
    }

    fn weight_le_one(f: &Field, n: usize) -> Vec<VectorFq> {
        std::iter::once(VectorFq::zeros(f, n)).chain((0..n).map(|i| VectorFq::unit(f, n, i))).collect()
    }

    #[test]
    fn quotient_correctable_examples() {
        let f = gf2();
        let ham = LinearCode::hamming_7_4();
        let qc = QuotientCode::new(&ham, &ham.dual()).unwrap();
        assert!(quotient_correctable(&qc, &[VectorFq::zeros(&f, 7)]).unwrap());
        assert!(quotient_correctable(&qc, &weight_le_one(&f, 7)).unwrap());
        let full = QuotientCode::new(&LinearCode::full(&f, 3), &LinearCode::zero(&f, 3)).unwrap();
        assert!(!quotient_correctable(&full, &weight_le_one(&f, 3)).unwrap());
    }

    #[test]
    fn quotient_requires_subcode() {
        let f = gf2();
        let r = QuotientCode::new(&LinearCode::repetition(&f, 3), &LinearCode::full(&f, 3));
        assert!(matches!(r, Err(Error::DomainError(_))));
    }

    #[test]
    fn expand_pair_examples() {
        let f4 = Field::new(2, 2).unwrap();
        let full = make_pair(LinearCode::full(&f4, 2), LinearCode::full(&f4, 2)).unwrap();
        let e = expand_pair(&full).unwrap();
        assert_eq!(e.field(), &gf2());
        assert_eq!(e.c1(), &LinearCode::full(&gf2(), 4));
        assert_eq!(e.k(), 4);

        let s = LinearCode::from_generators(&f4, 2, &[vec![1, 1]]).unwrap();
        let p = make_pair(s.clone(), s).unwrap();
        assert_eq!(p.k(), 0);
        let e = expand_pair(&p).unwrap();
        assert_eq!((e.n(), e.k1(), e.k2()), (4, 2, 2));
    }

    #[test]
    fn manifest_resolution_checks_field_and_length() {
        let m = PairManifest { name: None, field: "2^1".into(), n: 3, c1: "a".into(), c2: "b".into() };
        let r = m.resolve(|_| Ok("2^1 4 1\n1 1 1 1\n".to_string()));
        assert!(matches!(r, Err(Error::LengthMismatch { .. })));
        let r = m.resolve(|_| Ok("3^1 3 1\n1 1 1\n".to_string()));
        assert_eq!(r, Err(Error::MismatchedField));
        let r = m.resolve(|_| Ok("2^1 3 3\n1 0 0\n0 1 0\n0 0 1\n".to_string()));
        assert_eq!(r.unwrap().k(), 3);
    }
}
