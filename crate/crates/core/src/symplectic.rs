//! The standard symplectic form on F_q^{2n}, symplectic duals, the CSS lift
//! of a conjugate pair, error sets and the classical correctability
//! criterion for dual-containing codes.
//!
//! Vectors of F_q^{2n} are stored interleaved, `(x_1, z_1, …, x_n, z_n)`,
//! matching the `[u, w]` rearrangement.

use std::collections::HashSet;
use std::fmt;

use crate::conjugate_pair::ConjugatePair;
use crate::error::{ensure_cap, Error, Result};
use crate::finite_field::{Field, FieldElement};
use crate::linear_codes::{is_subcode, raw_dot, vec_sub, LinearCode, Matrix, SyndromeTable, VectorFq};

/// Cap on explicitly materialized error sets and on `|I|^2` pair checks.
pub const MAX_ERROR_SET: u128 = 1 << 20;
pub const MAX_ERROR_PAIRS: u128 = 1 << 28;

/// An element `[u, w]` of F_q^{2n}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SympVector {
    field: Field,
    u: Vec<u32>,
    w: Vec<u32>,
}

impl fmt::Debug for SympVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SympVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            VectorFq::from_raw(&self.field, self.u.clone()),
            VectorFq::from_raw(&self.field, self.w.clone())
        )
    }
}

impl SympVector {
    pub fn new(u: &VectorFq, w: &VectorFq) -> Result<Self> {
        if u.field() != w.field() {
            return Err(Error::MismatchedField);
        }
        if u.len() != w.len() {
            return Err(Error::LengthMismatch { expected: u.len(), actual: w.len() });
        }
        Ok(SympVector { field: u.field().clone(), u: u.entries().to_vec(), w: w.entries().to_vec() })
    }

    pub(crate) fn from_raw(field: &Field, u: Vec<u32>, w: Vec<u32>) -> Self {
        debug_assert_eq!(u.len(), w.len());
        SympVector { field: field.clone(), u, w }
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        Self::from_raw(field, vec![0; n], vec![0; n])
    }

    /// From the interleaved layout `(x_1, z_1, …, x_n, z_n)`.
    pub fn from_interleaved(v: &VectorFq) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch { expected: v.len() + 1, actual: v.len() });
        }
        let e = v.entries();
        let u = e.iter().step_by(2).copied().collect();
        let w = e.iter().skip(1).step_by(2).copied().collect();
        Ok(Self::from_raw(v.field(), u, w))
    }

    pub fn interleaved(&self) -> VectorFq {
        VectorFq::from_raw(&self.field, self.interleaved_raw())
    }

    pub(crate) fn interleaved_raw(&self) -> Vec<u32> {
        self.u.iter().zip(&self.w).flat_map(|(&a, &b)| [a, b]).collect()
    }

    /// Pairs `(u_i, w_i)`.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.u.iter().copied().zip(self.w.iter().copied()).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of symbols n.
    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> VectorFq {
        VectorFq::from_raw(&self.field, self.u.clone())
    }

    pub fn w(&self) -> VectorFq {
        VectorFq::from_raw(&self.field, self.w.clone())
    }

    pub(crate) fn u_raw(&self) -> &[u32] {
        &self.u
    }

    pub(crate) fn w_raw(&self) -> &[u32] {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(&self.w).all(|&e| e == 0)
    }

    /// Number of symbols where `(u_i, w_i) ≠ (0, 0)`.
    pub fn symbol_weight(&self) -> usize {
        self.u.iter().zip(&self.w).filter(|(&a, &b)| a != 0 || b != 0).count()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MismatchedField);
        }
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: other.n() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        Ok(Self::from_raw(
            f,
            crate::linear_codes::vec_add(f, &self.u, &other.u),
            crate::linear_codes::vec_add(f, &self.w, &other.w),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        Ok(Self::from_raw(f, vec_sub(f, &self.u, &other.u), vec_sub(f, &self.w, &other.w)))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::from_raw(
            f,
            self.u.iter().map(|&a| f.neg(a)).collect(),
            self.w.iter().map(|&a| f.neg(a)).collect(),
        )
    }

    pub(crate) fn symp_form_raw(&self, other: &Self) -> u32 {
        let f = &self.field;
        f.sub(raw_dot(f, &self.u, &other.w), raw_dot(f, &self.w, &other.u))
    }
}

/// `u·w' - w·u'`.
pub fn symp_form(a: &SympVector, b: &SympVector) -> Result<FieldElement> {
    a.check(b)?;
    a.field.element(a.symp_form_raw(b))
}

/// Maps `(x, z) ↦ (-z, x)` pairwise; the ordinary dual of `L` pulled back
/// through this map is the symplectic dual.
fn rotate_back(f: &Field, v: &[u32]) -> Vec<u32> {
    v.chunks(2).flat_map(|c| [f.neg(c[1]), c[0]]).collect()
}

/// A subspace of F_q^{2n} with its symplectic dual cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SympCode {
    code: LinearCode,
    dual: LinearCode,
}

fn symp_dual_code(code: &LinearCode) -> LinearCode {
    let f = code.field();
    let ord = code.dual();
    let rows: Vec<Vec<u32>> = (0..ord.k()).map(|r| rotate_back(f, ord.generator().row(r))).collect();
    LinearCode::from_generators(f, code.n(), &rows).expect("rotated rows keep length")
}

impl SympCode {
    /// `code` must have even length 2n in the interleaved layout.
    pub fn new(code: LinearCode) -> Result<Self> {
        if !code.n().is_multiple_of(2) {
            return Err(Error::LengthMismatch { expected: code.n() + 1, actual: code.n() });
        }
        let dual = symp_dual_code(&code);
        Ok(SympCode { code, dual })
    }

    pub fn from_vectors(field: &Field, n: usize, gens: &[SympVector]) -> Result<Self> {
        let rows: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                if g.field() != field {
                    Err(Error::MismatchedField)
                } else if g.n() != n {
                    Err(Error::LengthMismatch { expected: n, actual: g.n() })
                } else {
                    Ok(g.interleaved_raw())
                }
            })
            .collect::<Result<_>>()?;
        Self::new(LinearCode::from_generators(field, 2 * n, &rows)?)
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Number of symbols n (the code has length 2n).
    pub fn n(&self) -> usize {
        self.code.n() / 2
    }

    pub fn dim(&self) -> usize {
        self.code.k()
    }

    pub fn generators(&self) -> Vec<SympVector> {
        self.code
            .generator()
            .row_vectors()
            .iter()
            .map(|v| SympVector::from_interleaved(v).expect("even length"))
            .collect()
    }

    /// `L^{⊥sp} = { y | f_sp(x, y) = 0 for all x ∈ L }`.
    pub fn symp_dual(&self) -> SympCode {
        SympCode { code: self.dual.clone(), dual: self.code.clone() }
    }

    /// `L^{⊥sp} ≤ L`.
    pub fn is_dual_containing(&self) -> bool {
        is_subcode(&self.dual, &self.code).expect("same length and field")
    }

    pub fn contains(&self, v: &SympVector) -> Result<bool> {
        if v.field() != self.code.field() {
            return Err(Error::MismatchedField);
        }
        if v.n() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: v.n() });
        }
        Ok(self.code.contains_raw(&v.interleaved_raw()))
    }
}

/// `symp_dual(L)` as a free function.
pub fn symp_dual(l: &SympCode) -> SympCode {
    l.symp_dual()
}

/// `{ [u, w] : u ∈ a, w ∈ b }`.
pub fn product_code(a: &LinearCode, b: &LinearCode) -> Result<SympCode> {
    if a.field() != b.field() {
        return Err(Error::MismatchedField);
    }
    if a.n() != b.n() {
        return Err(Error::LengthMismatch { expected: a.n(), actual: b.n() });
    }
    let f = a.field();
    let n = a.n();
    let zero = vec![0u32; n];
    let mut gens = Vec::with_capacity(a.k() + b.k());
    for r in 0..a.k() {
        gens.push(SympVector::from_raw(f, a.generator().row(r).to_vec(), zero.clone()));
    }
    for r in 0..b.k() {
        gens.push(SympVector::from_raw(f, zero.clone(), b.generator().row(r).to_vec()));
    }
    SympCode::from_vectors(f, n, &gens)
}

/// The symplectic code of a conjugate pair: `L = C1 × C2` and
/// `L^{⊥sp} = C2^⊥ × C1^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssLift {
    pub l: SympCode,
    pub lperp: SympCode,
}

pub fn css_lift(pair: &ConjugatePair) -> CssLift {
    let l = product_code(pair.c1(), pair.c2()).expect("pair codes share field and length");
    let lperp = l.symp_dual();
    debug_assert!(l.is_dual_containing());
    CssLift { l, lperp }
}

impl CssLift {
    /// `(dim L - dim L^{⊥sp}) / 2`, the number of encoded symbols.
    pub fn logical_dim(&self) -> usize {
        (self.l.dim() - self.lperp.dim()) / 2
    }
}

/// `K(Γ1, Γ2) = { [x, z] : x ∈ Γ1, z ∈ Γ2 }`, materialized.
pub fn error_set(gamma1: &[VectorFq], gamma2: &[VectorFq]) -> Result<Vec<SympVector>> {
    ensure_cap("error set", gamma1.len() as u128 * gamma2.len() as u128, MAX_ERROR_SET)?;
    let mut out = Vec::with_capacity(gamma1.len() * gamma2.len());
    for x in gamma1 {
        for z in gamma2 {
            out.push(SympVector::new(x, z)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Membership {
    /// Γ is a complete leader table of F^n / C: `x ∈ Γ + D` iff
    /// `x - leader(x) ∈ D`, valid because `D ≤ C`.
    Table(SyndromeTable),
    /// Arbitrary Γ, stored as its residues modulo D.
    Residues(HashSet<Vec<u32>>),
}

/// The enlarged set `K(Γ1', Γ2')` with `Γ1' = Γ1 + C2^⊥` and
/// `Γ2' = Γ2 + C1^⊥`, held as a membership predicate.
#[derive(Debug, Clone)]
pub struct EnlargedErrorSet {
    c2_dual: LinearCode,
    c1_dual: LinearCode,
    x_part: Membership,
    z_part: Membership,
}

impl EnlargedErrorSet {
    /// `Γ1` and `Γ2` are the complete leader tables of `C1` and `C2`.
    pub fn from_tables(pair: &ConjugatePair, t1: &SyndromeTable, t2: &SyndromeTable) -> Result<Self> {
        if t1.parity() != &pair.c1().parity_check() || t2.parity() != &pair.c2().parity_check() {
            return Err(Error::DomainError("syndrome tables do not belong to this pair".into()));
        }
        Ok(EnlargedErrorSet {
            c2_dual: pair.c2_dual().clone(),
            c1_dual: pair.c1_dual().clone(),
            x_part: Membership::Table(t1.clone()),
            z_part: Membership::Table(t2.clone()),
        })
    }

    pub fn contains_x(&self, x: &VectorFq) -> bool {
        x.field() == self.c2_dual.field()
            && x.len() == self.c2_dual.n()
            && Self::member(&self.x_part, &self.c2_dual, x.entries())
    }

    pub fn contains_z(&self, z: &VectorFq) -> bool {
        z.field() == self.c1_dual.field()
            && z.len() == self.c1_dual.n()
            && Self::member(&self.z_part, &self.c1_dual, z.entries())
    }

    pub(crate) fn contains_x_raw(&self, x: &[u32]) -> bool {
        Self::member(&self.x_part, &self.c2_dual, x)
    }

    pub(crate) fn contains_z_raw(&self, z: &[u32]) -> bool {
        Self::member(&self.z_part, &self.c1_dual, z)
    }

    pub fn contains(&self, e: &SympVector) -> bool {
        e.field() == self.c2_dual.field()
            && e.n() == self.c2_dual.n()
            && self.contains_x_raw(e.u_raw())
            && self.contains_z_raw(e.w_raw())
    }

    fn member(m: &Membership, d: &LinearCode, x: &[u32]) -> bool {
        match m {
            Membership::Table(t) => {
                let diff = vec_sub(d.field(), x, t.leader_raw(x));
                d.contains_raw(&diff)
            }
            Membership::Residues(set) => set.contains(&d.residue_raw(x)),
        }
    }
}

/// `K' = K(Γ1 + C2^⊥, Γ2 + C1^⊥)` for explicit sets Γ1, Γ2.
pub fn enlarge(pair: &ConjugatePair, gamma1: &[VectorFq], gamma2: &[VectorFq]) -> Result<EnlargedErrorSet> {
    let f = pair.field();
    let n = pair.n();
    let residues = |g: &[VectorFq], d: &LinearCode| -> Result<HashSet<Vec<u32>>> {
        g.iter()
            .map(|v| {
                if v.field() != f {
                    Err(Error::MismatchedField)
                } else if v.len() != n {
                    Err(Error::LengthMismatch { expected: n, actual: v.len() })
                } else {
                    Ok(d.residue_raw(v.entries()))
                }
            })
            .collect()
    };
    Ok(EnlargedErrorSet {
        x_part: Membership::Residues(residues(gamma1, pair.c2_dual())?),
        z_part: Membership::Residues(residues(gamma2, pair.c1_dual())?),
        c2_dual: pair.c2_dual().clone(),
        c1_dual: pair.c1_dual().clone(),
    })
}

/// Whether a dual-containing `L` corrects the Weyl errors labelled by `I`:
/// for all distinct `e, e' ∈ I`, `e - e' ∈ L` implies `e - e' ∈ L^{⊥sp}`.
pub fn correctable_error_set(l: &SympCode, errors: &[SympVector]) -> Result<bool> {
    if !l.is_dual_containing() {
        return Err(Error::DomainError("code is not symplectic dual-containing".into()));
    }
    for e in errors {
        if e.field() != l.code.field() {
            return Err(Error::MismatchedField);
        }
        if e.n() != l.n() {
            return Err(Error::LengthMismatch { expected: l.n(), actual: e.n() });
        }
    }
    let m = errors.len() as u128;
    ensure_cap("error pairs", m * m, MAX_ERROR_PAIRS)?;
    let f = l.code.field();
    let ints: Vec<Vec<u32>> = errors.iter().map(SympVector::interleaved_raw).collect();
    for (i, a) in ints.iter().enumerate() {
        for b in &ints[i + 1..] {
            let d = vec_sub(f, a, b);
            if l.code.contains_raw(&d) && !l.dual.contains_raw(&d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `N × n` generator matrix rows of a symplectic code, as `[u, w]` pairs.
pub fn generator_pairs(l: &SympCode) -> Matrix {
    l.code.generator().clone()
}
