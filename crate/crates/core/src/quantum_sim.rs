//! Exact dense simulation of q^n-dimensional systems: Weyl operators, CSS
//! encoded states, stabilizer eigenvalues, the phase-randomized mixture,
//! syndrome recovery, entanglement fidelity and entropy exchange.
//!
//! Basis states `|j⟩` are indexed by vectors of F_q^n in big-endian order
//! (see [`VectorFq::index`]). With `ω = exp(2πi/p)` the Weyl operators act as
//! `X^u |j⟩ = |j - u⟩` and `Z^w |j⟩ = ω^{Tr(w·j)} |j⟩`; for prime `q` the trace
//! is the identity and this is the familiar `ω^{w·j}` with `ω = exp(2πi/q)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::conjugate_pair::{ConjugatePair, QuotientCode};
use crate::error::{ensure_cap, pow_sat, Error, Result};
use crate::finite_field::Field;
use crate::linear_codes::{raw_dot, vec_add, vec_sub, SyndromeTable, VectorFq};
use crate::symplectic::{symp_form, SympVector};

pub type C64 = Complex64;

/// Absolute tolerance for every numerical equality check.
pub const TOL: f64 = 1e-9;
pub const DEFAULT_MAX_STATE_DIM: usize = 1 << 14;
pub const DEFAULT_MAX_DENSITY_DIM: usize = 1 << 12;
/// Dimension cap for dense operator products in [`commutation_check`].
pub const MAX_COMMUTATION_DIM: usize = 1 << 10;
/// Dimension cap for entropy-exchange computations on codes.
pub const MAX_ENTROPY_DIM: usize = 1 << 8;
/// Cap on the side of a Gram matrix diagonalized for an entropy.
pub const MAX_GRAM_DIM: usize = 1 << 12;
/// Cap on the number of error terms enumerated from a channel.
pub const MAX_CHANNEL_TERMS: u128 = 1 << 24;
/// Cap on materialized channel supports.
pub const MAX_CHANNEL_SUPPORT: u128 = 1 << 20;
/// Environment variable overriding the simulator dimension cap.
pub const MAX_DIM_ENV: &str = "CC_MAX_DIM";

const ZERO: C64 = C64::new(0.0, 0.0);

/// Dimension caps for dense simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimLimits {
    pub max_state_dim: usize,
    pub max_density_dim: usize,
}

impl Default for SimLimits {
    fn default() -> Self {
        SimLimits { max_state_dim: DEFAULT_MAX_STATE_DIM, max_density_dim: DEFAULT_MAX_DENSITY_DIM }
    }
}

impl SimLimits {
    /// State vectors up to `cap`; density operators up to
    /// `min(cap, DEFAULT_MAX_DENSITY_DIM)`.
    pub fn with_max_dim(cap: usize) -> Self {
        SimLimits { max_state_dim: cap, max_density_dim: cap.min(DEFAULT_MAX_DENSITY_DIM) }
    }

    /// Defaults, overridden by `CC_MAX_DIM` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_DIM_ENV) {
            Ok(s) => s
                .trim()
                .parse::<usize>()
                .map(Self::with_max_dim)
                .map_err(|e| Error::Parse(format!("{MAX_DIM_ENV}={s:?}: {e}"))),
            Err(_) => Ok(Self::default()),
        }
    }

    fn check_state(&self, dim: u128) -> Result<()> {
        ensure_cap("state dimension", dim, self.max_state_dim as u128)
    }

    fn check_density(&self, dim: u128) -> Result<()> {
        ensure_cap("density operator dimension", dim, self.max_density_dim as u128)
    }
}

fn omega_table(p: u32) -> Vec<C64> {
    (0..p)
        .map(|k| match k {
            0 => C64::new(1.0, 0.0),
            _ if 2 * k == p => C64::new(-1.0, 0.0),
            _ => C64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64),
        })
        .collect()
}

/// `ω^t` for `t ∈ F_p`.
pub fn omega_pow(field: &Field, t: u32) -> C64 {
    omega_table(field.p())[(t % field.p()) as usize]
}

/// Index arithmetic on the computational basis of (C^q)^{⊗n}.
#[derive(Debug, Clone)]
struct Register {
    field: Field,
    n: usize,
    dim: usize,
    digits: Vec<u32>,
    omega: Vec<C64>,
}

impl Register {
    fn new(field: &Field, n: usize, cap: usize) -> Result<Self> {
        let dim = pow_sat(field.q() as u64, n);
        ensure_cap("state dimension", dim, cap as u128)?;
        let dim = dim as usize;
        let q = field.q();
        let mut digits = vec![0u32; dim * n];
        for j in 1..dim {
            let (prev, cur) = digits.split_at_mut(j * n);
            let cur = &mut cur[..n];
            cur.copy_from_slice(&prev[(j - 1) * n..]);
            for d in cur.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Ok(Register { field: field.clone(), n, dim, digits, omega: omega_table(field.p()) })
    }

    #[inline]
    fn digits(&self, j: usize) -> &[u32] {
        &self.digits[j * self.n..(j + 1) * self.n]
    }

    #[inline]
    fn index(&self, v: &[u32]) -> usize {
        let q = self.field.q() as usize;
        v.iter().fold(0, |acc, &e| acc * q + e as usize)
    }

    #[inline]
    fn chi(&self, a: &[u32], b: &[u32]) -> C64 {
        self.omega[self.field.trace(raw_dot(&self.field, a, b)) as usize]
    }

    /// `N_{[u,w]} |j⟩ = ω^{Tr(w·j)} |j - u⟩`.
    #[inline]
    fn weyl(&self, u: &[u32], w: &[u32], j: usize) -> (usize, C64) {
        let f = &self.field;
        let q = f.q() as usize;
        let d = self.digits(j);
        let mut idx = 0;
        let mut acc = 0;
        for i in 0..self.n {
            idx = idx * q + f.sub(d[i], u[i]) as usize;
            acc = f.add(acc, f.mul(w[i], d[i]));
        }
        (idx, self.omega[f.trace(acc) as usize])
    }

    /// `N_{[u,w]}^{-1} |k⟩ = ω^{-Tr(w·(k + u))} |k + u⟩`.
    #[inline]
    fn weyl_inv(&self, u: &[u32], w: &[u32], k: usize) -> (usize, C64) {
        let f = &self.field;
        let q = f.q() as usize;
        let d = self.digits(k);
        let mut idx = 0;
        let mut acc = 0;
        for i in 0..self.n {
            let s = f.add(d[i], u[i]);
            idx = idx * q + s as usize;
            acc = f.add(acc, f.mul(w[i], s));
        }
        (idx, self.omega[f.trace(acc) as usize].conj())
    }
}

fn check_label(field: &Field, n: usize, l: &SympVector) -> Result<()> {
    if l.field() != field {
        return Err(Error::MismatchedField);
    }
    if l.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: l.n() });
    }
    Ok(())
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A unit vector in (C^q)^{⊗n}.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    field: Field,
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Validates length `q^n` and unit norm.
    pub fn new(field: &Field, n: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = pow_sat(field.q() as u64, n);
        if dim != amps.len() as u128 {
            return Err(Error::InvalidState(format!("expected {dim} amplitudes, got {}", amps.len())));
        }
        let norm = norm_sqr(&amps).sqrt();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(StateVector { field: field.clone(), n, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(field: &Field, n: usize, mut amps: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amps).sqrt();
        if norm <= TOL {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::new(field, n, amps)
    }

    /// The computational basis state `|v⟩`.
    pub fn basis(v: &VectorFq, limits: &SimLimits) -> Result<Self> {
        let f = v.field();
        let n = v.len();
        let dim = pow_sat(f.q() as u64, n);
        limits.check_state(dim)?;
        let mut amps = vec![ZERO; dim as usize];
        amps[v.index() as usize] = C64::new(1.0, 0.0);
        Ok(StateVector { field: f.clone(), n, amps })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, v: &VectorFq) -> Result<C64> {
        if v.field() != &self.field {
            return Err(Error::MismatchedField);
        }
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: v.len() });
        }
        Ok(self.amps[v.index() as usize])
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MismatchedField);
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: other.n });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    /// `|⟨self|other⟩|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest entrywise deviation `|self_j - c·other_j|`.
    pub fn max_deviation_scaled(&self, other: &Self, c: C64) -> Result<f64> {
        self.check(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - c * b).norm()).fold(0.0, f64::max))
    }
}

/// A density operator on (C^q)^{⊗n}.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    field: Field,
    n: usize,
    mat: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (eigenvalue floor `-TOL`).
    pub fn new(field: &Field, n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let dim = pow_sat(field.q() as u64, n);
        if mat.nrows() as u128 != dim || mat.ncols() as u128 != dim {
            return Err(Error::InvalidState(format!(
                "expected a {dim}×{dim} matrix, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&mat).into_iter().fold(f64::INFINITY, f64::min);
        if min < -TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityOperator { field: field.clone(), n, mat })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector, limits: &SimLimits) -> Result<Self> {
        limits.check_density(psi.dim() as u128)?;
        let v = nalgebra::DVector::from_column_slice(&psi.amps);
        Ok(DensityOperator { field: psi.field.clone(), n: psi.n, mat: &v * v.adjoint() })
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|` for nonnegative weights summing to one.
    pub fn mixture(terms: &[(f64, StateVector)], limits: &SimLimits) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidState("empty mixture".into()));
        };
        limits.check_density(first.dim() as u128)?;
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if terms.iter().any(|t| t.0 < 0.0) || (total - 1.0).abs() > TOL {
            return Err(Error::InvalidState("mixture weights must be a distribution".into()));
        }
        let d = first.dim();
        let mut mat = DMatrix::<C64>::zeros(d, d);
        for (p, psi) in terms {
            first.check(psi)?;
            add_outer(&mut mat, &psi.amps, *p);
        }
        Ok(DensityOperator { field: first.field.clone(), n: first.n, mat })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `max |self_ij - other_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.field != other.field {
            return Err(Error::MismatchedField);
        }
        if self.dim() != other.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok((&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.field != self.field || psi.dim() != self.dim() {
            return Err(Error::MismatchedField);
        }
        let v = nalgebra::DVector::from_column_slice(&psi.amps);
        Ok((v.adjoint() * &self.mat * &v)[(0, 0)].re)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&hermitian_eigenvalues(&self.mat))
    }
}

fn add_outer(mat: &mut DMatrix<C64>, v: &[C64], weight: f64) {
    for (i, a) in v.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        for (j, b) in v.iter().enumerate() {
            mat[(i, j)] += *a * b.conj() * weight;
        }
    }
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// `-Σ λ log2 λ` over the positive eigenvalues.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum::<f64>().max(0.0)
}

/// A pure or mixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.dim(),
            QuantumState::Mixed(r) => r.dim(),
        }
    }

    /// `⟨ψ|ρ|ψ⟩`, or `|⟨ψ|φ⟩|^2` for a pure state.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        match self {
            QuantumState::Pure(s) => s.fidelity(psi),
            QuantumState::Mixed(r) => r.fidelity_with_pure(psi),
        }
    }

    pub fn to_density(&self, limits: &SimLimits) -> Result<DensityOperator> {
        match self {
            QuantumState::Pure(s) => DensityOperator::from_pure(s, limits),
            QuantumState::Mixed(r) => Ok(r.clone()),
        }
    }
}

/// A Weyl operator `N_{[u,w]} = X^u Z^w`, stored as a monomial matrix:
/// `N |j⟩ = phase[j] |perm[j]⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylOperator {
    label: SympVector,
    perm: Vec<usize>,
    phase: Vec<C64>,
}

/// Weyl labels are symplectic vectors `[u, w]`.
pub type WeylLabel = SympVector;

impl WeylOperator {
    pub fn new(label: &WeylLabel, limits: &SimLimits) -> Result<Self> {
        let reg = Register::new(label.field(), label.n(), limits.max_state_dim)?;
        Ok(Self::build(&reg, label))
    }

    fn build(reg: &Register, label: &WeylLabel) -> Self {
        let (u, w) = (label.u_raw(), label.w_raw());
        let (perm, phase) = (0..reg.dim).map(|j| reg.weyl(u, w, j)).unzip();
        WeylOperator { label: label.clone(), perm, phase }
    }

    pub fn label(&self) -> &WeylLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        check_label(&s.field, s.n, &self.label)?;
        let mut out = vec![ZERO; s.dim()];
        for (j, a) in s.amps.iter().enumerate() {
            out[self.perm[j]] += self.phase[j] * a;
        }
        Ok(StateVector { field: s.field.clone(), n: s.n, amps: out })
    }

    /// `N ρ N^†`.
    pub fn conjugate(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        check_label(&rho.field, rho.n, &self.label)?;
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out[(self.perm[i], self.perm[j])] = self.phase[i] * self.phase[j].conj() * rho.mat[(i, j)];
            }
        }
        Ok(DensityOperator { field: rho.field.clone(), n: rho.n, mat: out })
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for j in 0..d {
            m[(self.perm[j], j)] = self.phase[j];
        }
        m
    }
}

/// Applies `X^u Z^w` to `s`.
pub fn weyl_apply(s: &StateVector, l: &WeylLabel) -> Result<StateVector> {
    check_label(&s.field, s.n, l)?;
    let reg = Register::new(&s.field, s.n, s.dim())?;
    let mut out = vec![ZERO; s.dim()];
    for (j, a) in s.amps.iter().enumerate() {
        if *a != ZERO {
            let (k, ph) = reg.weyl(l.u_raw(), l.w_raw(), j);
            out[k] += ph * a;
        }
    }
    Ok(StateVector { field: s.field.clone(), n: s.n, amps: out })
}

/// Checks `N_a N_b = ω^{Tr f_sp(a,b)} N_b N_a` on dense matrices and
/// returns the exponent.
pub fn commutation_check(a: &WeylLabel, b: &WeylLabel) -> Result<u32> {
    check_label(a.field(), a.n(), b)?;
    let limits = SimLimits::with_max_dim(MAX_COMMUTATION_DIM);
    let na = WeylOperator::new(a, &limits)?.to_dense();
    let nb = WeylOperator::new(b, &limits)?.to_dense();
    let f = a.field();
    let e = f.trace(symp_form(a, b)?.value());
    let lhs = &na * &nb;
    let rhs = (&nb * &na) * omega_pow(f, e);
    let dev = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > TOL {
        return Err(Error::PhaseMismatch(format!("{a:?}, {b:?}: exponent {e}, deviation {dev:e}")));
    }
    Ok(e)
}

/// A distribution over Weyl errors on `n` symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum PauliChannel {
    /// Independent symbols; `symbol[u * q + w]` is the probability of `X^u Z^w`.
    Iid { field: Field, n: usize, symbol: Vec<f64> },
    /// Explicit list of labels and probabilities.
    Joint { field: Field, n: usize, terms: Vec<(SympVector, f64)> },
}

fn check_distribution(probs: impl Iterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    for p in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidChannel(format!("invalid probability {p}")));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidChannel(format!("probabilities sum to {total}")));
    }
    Ok(())
}

fn check_rate(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidChannel(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// Samples an index from a cumulative table.
fn pick(cumulative: &[f64], r: f64) -> usize {
    cumulative.partition_point(|&c| c <= r).min(cumulative.len() - 1)
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Visits all products of per-site choices with nonzero weight.
fn for_each_product(n: usize, choices: &[(u32, f64)], visit: &mut dyn FnMut(&[u32], f64)) {
    fn rec(
        cur: &mut Vec<u32>,
        n: usize,
        prob: f64,
        choices: &[(u32, f64)],
        visit: &mut dyn FnMut(&[u32], f64),
    ) {
        if cur.len() == n {
            visit(cur, prob);
            return;
        }
        for &(c, p) in choices {
            cur.push(c);
            rec(cur, n, prob * p, choices, visit);
            cur.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 1.0, choices, visit);
}

impl PauliChannel {
    pub fn identity(field: &Field, n: usize) -> Self {
        let q = field.q() as usize;
        let mut symbol = vec![0.0; q * q];
        symbol[0] = 1.0;
        PauliChannel::Iid { field: field.clone(), n, symbol }
    }

    pub fn iid(field: &Field, n: usize, symbol: Vec<f64>) -> Result<Self> {
        let q = field.q() as usize;
        if symbol.len() != q * q {
            return Err(Error::InvalidChannel(format!("expected {} symbol probabilities", q * q)));
        }
        check_distribution(symbol.iter().copied())?;
        Ok(PauliChannel::Iid { field: field.clone(), n, symbol })
    }

    /// Each nontrivial single-symbol Weyl error with probability `p / (q² - 1)`.
    pub fn depolarizing(field: &Field, n: usize, p: f64) -> Result<Self> {
        check_rate("p", p)?;
        Self::iid(field, n, depolarizing_symbol(field, p))
    }

    /// Independent X and Z parts per symbol: a nonzero X shift with total
    /// probability `px` and a nonzero Z shift with total probability `pz`,
    /// uniform over the nonzero values.
    pub fn independent_xz(field: &Field, n: usize, px: f64, pz: f64) -> Result<Self> {
        check_rate("px", px)?;
        check_rate("pz", pz)?;
        let q = field.q() as usize;
        let marg = |p: f64| -> Vec<f64> {
            (0..q).map(|a| if a == 0 { 1.0 - p } else { p / (q - 1) as f64 }).collect()
        };
        let (mx, mz) = (marg(px), marg(pz));
        let symbol = (0..q * q).map(|i| mx[i / q] * mz[i % q]).collect();
        Self::iid(field, n, symbol)
    }

    /// Errors only on symbol `site`, distributed by `symbol`.
    pub fn single_site(field: &Field, n: usize, site: usize, symbol: &[f64]) -> Result<Self> {
        let q = field.q() as usize;
        if site >= n {
            return Err(Error::InvalidChannel(format!("site {site} out of range for n = {n}")));
        }
        if symbol.len() != q * q {
            return Err(Error::InvalidChannel(format!("expected {} symbol probabilities", q * q)));
        }
        let terms = symbol
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| {
                let mut u = vec![0; n];
                let mut w = vec![0; n];
                u[site] = (i / q) as u32;
                w[site] = (i % q) as u32;
                (SympVector::from_raw(field, u, w), p)
            })
            .collect();
        Self::joint(field, n, terms)
    }

    pub fn joint(field: &Field, n: usize, terms: Vec<(SympVector, f64)>) -> Result<Self> {
        for (l, _) in &terms {
            check_label(field, n, l).map_err(|e| Error::InvalidChannel(e.to_string()))?;
        }
        check_distribution(terms.iter().map(|t| t.1))?;
        Ok(PauliChannel::Joint { field: field.clone(), n, terms })
    }

    pub fn field(&self) -> &Field {
        match self {
            PauliChannel::Iid { field, .. } | PauliChannel::Joint { field, .. } => field,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            PauliChannel::Iid { n, .. } | PauliChannel::Joint { n, .. } => *n,
        }
    }

    pub fn probability(&self, e: &SympVector) -> f64 {
        match self {
            PauliChannel::Iid { field, symbol, .. } => {
                let q = field.q() as usize;
                e.pairs().iter().map(|&(u, w)| symbol[u as usize * q + w as usize]).product()
            }
            PauliChannel::Joint { terms, .. } => terms.iter().filter(|(l, _)| l == e).map(|t| t.1).sum(),
        }
    }

    /// Number of terms visited by [`Self::for_each_term`].
    pub fn support_size(&self) -> u128 {
        match self {
            PauliChannel::Iid { n, symbol, .. } => {
                pow_sat(symbol.iter().filter(|&&p| p > 0.0).count() as u64, *n)
            }
            PauliChannel::Joint { terms, .. } => terms.len() as u128,
        }
    }

    /// Visits every error with positive probability as `(u, w, P)`.
    pub fn for_each_term(&self, mut visit: impl FnMut(&[u32], &[u32], f64)) -> Result<()> {
        ensure_cap("channel support", self.support_size(), MAX_CHANNEL_TERMS)?;
        match self {
            PauliChannel::Iid { field, n, symbol } => {
                let q = field.q() as usize;
                let choices: Vec<(u32, f64)> = symbol
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(i, &p)| (i as u32, p))
                    .collect();
                let mut u = vec![0; *n];
                let mut w = vec![0; *n];
                for_each_product(*n, &choices, &mut |sym, p| {
                    for (i, &s) in sym.iter().enumerate() {
                        u[i] = s / q as u32;
                        w[i] = s % q as u32;
                    }
                    visit(&u, &w, p);
                });
            }
            PauliChannel::Joint { terms, .. } => {
                for (l, p) in terms.iter().filter(|t| t.1 > 0.0) {
                    visit(l.u_raw(), l.w_raw(), *p);
                }
            }
        }
        Ok(())
    }

    /// The errors with positive probability.
    pub fn support(&self) -> Result<Vec<(SympVector, f64)>> {
        ensure_cap("channel support", self.support_size(), MAX_CHANNEL_SUPPORT)?;
        let field = self.field().clone();
        let mut out = Vec::new();
        self.for_each_term(|u, w, p| out.push((SympVector::from_raw(&field, u.to_vec(), w.to_vec()), p)))?;
        Ok(out)
    }

    fn for_each_marginal(&self, x_part: bool, mut visit: impl FnMut(&[u32], f64)) -> Result<()> {
        match self {
            PauliChannel::Iid { field, n, symbol } => {
                let q = field.q() as usize;
                let marg: Vec<(u32, f64)> = (0..q)
                    .map(|a| {
                        let p: f64 =
                            (0..q).map(|b| if x_part { symbol[a * q + b] } else { symbol[b * q + a] }).sum();
                        (a as u32, p)
                    })
                    .filter(|&(_, p)| p > 0.0)
                    .collect();
                ensure_cap("channel marginal", pow_sat(marg.len() as u64, *n), MAX_CHANNEL_TERMS)?;
                for_each_product(*n, &marg, &mut |v, p| visit(v, p));
            }
            PauliChannel::Joint { terms, .. } => {
                let mut acc: Vec<(Vec<u32>, f64)> = Vec::new();
                let mut index = std::collections::HashMap::new();
                for (l, p) in terms {
                    let key = if x_part { l.u_raw() } else { l.w_raw() };
                    let slot = *index.entry(key.to_vec()).or_insert_with(|| {
                        acc.push((key.to_vec(), 0.0));
                        acc.len() - 1
                    });
                    acc[slot].1 += p;
                }
                for (v, p) in acc.iter().filter(|t| t.1 > 0.0) {
                    visit(v, *p);
                }
            }
        }
        Ok(())
    }

    /// Visits the distribution of the X part `u`.
    pub fn for_each_x_marginal(&self, visit: impl FnMut(&[u32], f64)) -> Result<()> {
        self.for_each_marginal(true, visit)
    }

    /// Visits the distribution of the Z part `w`.
    pub fn for_each_z_marginal(&self, visit: impl FnMut(&[u32], f64)) -> Result<()> {
        self.for_each_marginal(false, visit)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SympVector {
        match self {
            PauliChannel::Iid { field, n, symbol } => {
                let q = field.q();
                let cum = cumulative(symbol);
                let mut u = vec![0; *n];
                let mut w = vec![0; *n];
                for i in 0..*n {
                    let s = pick(&cum, rng.random::<f64>()) as u32;
                    u[i] = s / q;
                    w[i] = s % q;
                }
                SympVector::from_raw(field, u, w)
            }
            PauliChannel::Joint { terms, .. } => {
                let cum = cumulative(&terms.iter().map(|t| t.1).collect::<Vec<_>>());
                terms[pick(&cum, rng.random::<f64>())].0.clone()
            }
        }
    }

    /// A sampler for the X part alone.
    pub fn x_sampler(&self) -> XErrorSampler {
        match self {
            PauliChannel::Iid { field, n, symbol } => {
                let q = field.q() as usize;
                let marg: Vec<f64> = (0..q).map(|a| symbol[a * q..(a + 1) * q].iter().sum()).collect();
                XErrorSampler::PerSymbol { n: *n, cumulative: cumulative(&marg) }
            }
            PauliChannel::Joint { terms, .. } => XErrorSampler::Table {
                words: terms.iter().map(|t| t.0.u_raw().to_vec()).collect(),
                cumulative: cumulative(&terms.iter().map(|t| t.1).collect::<Vec<_>>()),
            },
        }
    }
}

/// The single-symbol table of the depolarizing channel.
pub fn depolarizing_symbol(field: &Field, p: f64) -> Vec<f64> {
    let q2 = (field.q() * field.q()) as usize;
    (0..q2).map(|i| if i == 0 { 1.0 - p } else { p / (q2 - 1) as f64 }).collect()
}

/// Draws X-part error patterns from a channel's marginal.
#[derive(Debug, Clone)]
pub enum XErrorSampler {
    PerSymbol { n: usize, cumulative: Vec<f64> },
    Table { words: Vec<Vec<u32>>, cumulative: Vec<f64> },
}

impl XErrorSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        match self {
            XErrorSampler::PerSymbol { n, cumulative } => {
                (0..*n).map(|_| pick(cumulative, rng.random::<f64>()) as u32).collect()
            }
            XErrorSampler::Table { words, cumulative } => {
                words[pick(cumulative, rng.random::<f64>())].clone()
            }
        }
    }
}

/// Von Neumann entropy (bits) of the Gram matrix of `vectors`, using
/// whichever of `A^†A` and `AA^†` is smaller. Also returns the trace.
fn gram_entropy(vectors: &[Vec<C64>]) -> Result<(f64, f64)> {
    let m = vectors.len();
    let len = vectors.first().map_or(0, Vec::len);
    let side = m.min(len);
    ensure_cap("entropy-exchange Gram matrix", side as u128, MAX_GRAM_DIM as u128)?;
    let mut g = DMatrix::<C64>::zeros(side, side);
    if m <= len {
        for i in 0..m {
            for j in i..m {
                let z = inner(&vectors[j], &vectors[i]);
                g[(i, j)] = z;
                g[(j, i)] = z.conj();
            }
        }
    } else {
        for v in vectors {
            add_outer(&mut g, v, 1.0);
        }
    }
    let tr = g.trace().re;
    Ok((entropy_bits(&hermitian_eigenvalues(&g)), tr))
}

/// Entropy exchange `S(W)` in bits, `W_ij = Tr(K_i ρ K_j^†)`.
pub fn entropy_exchange(rho: &DensityOperator, kraus: &[DMatrix<C64>]) -> Result<f64> {
    let d = rho.dim();
    if kraus.iter().any(|k| k.nrows() != d || k.ncols() != d) {
        return Err(Error::InvalidChannel("Kraus operator dimension mismatch".into()));
    }
    // ρ = B B^† with B = V sqrt(Λ) over the positive spectrum.
    let eig = rho.mat.clone().symmetric_eigen();
    let cols: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues[i] > TOL * TOL).collect();
    let mut b = DMatrix::<C64>::zeros(d, cols.len());
    for (c, &i) in cols.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        for r in 0..d {
            b[(r, c)] = eig.eigenvectors[(r, i)] * s;
        }
    }
    let vectors: Vec<Vec<C64>> = kraus.iter().map(|k| (k * &b).iter().copied().collect()).collect();
    let (s, tr) = gram_entropy(&vectors)?;
    if (tr - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidChannel(format!("Kraus operators are not trace preserving (trace {tr})")));
    }
    Ok(s)
}

/// `F_e(ρ, K) = Σ_K |Tr(ρ K)|^2`.
pub fn entanglement_fidelity_kraus(rho: &DensityOperator, kraus: &[DMatrix<C64>]) -> Result<f64> {
    let d = rho.dim();
    if kraus.iter().any(|k| k.nrows() != d || k.ncols() != d) {
        return Err(Error::InvalidChannel("Kraus operator dimension mismatch".into()));
    }
    Ok(kraus.iter().map(|k| (&rho.mat * k).trace().norm_sqr()).sum())
}

/// The X and Z eigenphase exponents of a state under the stabilizer
/// generators: `z_type[j]` for the rows `h_j` of `C1^⊥`, `x_type[j]` for
/// the rows `g_j` of `C2^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSyndrome {
    pub z_type: Vec<u32>,
    pub x_type: Vec<u32>,
}

/// Both sides of the phase-randomized mixture identity.
#[derive(Debug, Clone)]
pub struct MixtureCheck {
    pub quantum: DensityOperator,
    pub classical: DensityOperator,
    pub max_deviation: f64,
}

/// A conjugate pair prepared for simulation: leader tables, message
/// representatives and the decomposition of every basis vector as
/// `x + v + w` with `x ∈ Γ1`, `v` a message representative and `w ∈ C2^⊥`.
#[derive(Debug, Clone)]
pub struct CssCode {
    pair: ConjugatePair,
    t1: SyndromeTable,
    t2: SyndromeTable,
    messages: QuotientCode,
    limits: SimLimits,
    reg: Register,
    dual_words: Vec<Vec<u32>>,
    // chi[zi * nw + wi] = ω^{Tr(z_zi · w_wi)}
    chi: Vec<C64>,
    // members[(xi * nv + vi) * nw + wi] = index of x + v + w
    members: Vec<usize>,
    // decomp[j] = (xi, vi, wi)
    decomp: Vec<(u32, u32, u32)>,
}

impl CssCode {
    pub fn new(pair: &ConjugatePair, limits: &SimLimits) -> Result<Self> {
        let t1 = SyndromeTable::build(pair.c1())?;
        let t2 = SyndromeTable::build(pair.c2())?;
        Self::with_tables(pair, &t1, &t2, limits)
    }

    pub fn with_tables(
        pair: &ConjugatePair,
        t1: &SyndromeTable,
        t2: &SyndromeTable,
        limits: &SimLimits,
    ) -> Result<Self> {
        if t1.parity() != &pair.c1().parity_check() || t2.parity() != &pair.c2().parity_check() {
            return Err(Error::DomainError("syndrome tables do not belong to this pair".into()));
        }
        let f = pair.field();
        let n = pair.n();
        limits.check_state(pow_sat(f.q() as u64, n))?;
        let reg = Register::new(f, n, limits.max_state_dim)?;
        let messages = pair.message_space()?;
        let dual_words: Vec<Vec<u32>> =
            pair.c2_dual().codewords()?.into_iter().map(VectorFq::into_entries).collect();
        let z_leaders: Vec<VectorFq> = t2.leaders();
        let nw = dual_words.len();
        let mut chi = Vec::with_capacity(z_leaders.len() * nw);
        for z in &z_leaders {
            for w in &dual_words {
                chi.push(reg.chi(z.entries(), w));
            }
        }
        let nv = messages.len();
        let x_leaders = t1.leaders();
        let mut members = vec![usize::MAX; reg.dim];
        let mut decomp = vec![(u32::MAX, 0, 0); reg.dim];
        for (xi, x) in x_leaders.iter().enumerate() {
            for (vi, v) in messages.representatives().iter().enumerate() {
                let xv = vec_add(f, x.entries(), v.entries());
                for (wi, w) in dual_words.iter().enumerate() {
                    let j = reg.index(&vec_add(f, &xv, w));
                    if decomp[j].0 != u32::MAX {
                        return Err(Error::InvalidState("basis decomposition is not unique".into()));
                    }
                    decomp[j] = (xi as u32, vi as u32, wi as u32);
                    members[(xi * nv + vi) * nw + wi] = j;
                }
            }
        }
        if decomp.iter().any(|d| d.0 == u32::MAX) {
            return Err(Error::InvalidState("basis decomposition is incomplete".into()));
        }
        Ok(CssCode {
            pair: pair.clone(),
            t1: t1.clone(),
            t2: t2.clone(),
            messages,
            limits: *limits,
            reg,
            dual_words,
            chi,
            members,
            decomp,
        })
    }

    pub fn pair(&self) -> &ConjugatePair {
        &self.pair
    }

    pub fn t1(&self) -> &SyndromeTable {
        &self.t1
    }

    pub fn t2(&self) -> &SyndromeTable {
        &self.t2
    }

    pub fn messages(&self) -> &QuotientCode {
        &self.messages
    }

    pub fn limits(&self) -> &SimLimits {
        &self.limits
    }

    pub fn field(&self) -> &Field {
        self.pair.field()
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    /// `q^n`.
    pub fn dim(&self) -> usize {
        self.reg.dim
    }

    /// `q^k`, the dimension of each code space `Q_xz`.
    pub fn code_dim(&self) -> usize {
        self.messages.len()
    }

    fn nx(&self) -> usize {
        self.t1.len()
    }

    fn nz(&self) -> usize {
        self.t2.len()
    }

    fn nw(&self) -> usize {
        self.dual_words.len()
    }

    /// The X-syndrome labels `Γ1` (leaders of F^n / C1).
    pub fn x_labels(&self) -> Vec<VectorFq> {
        self.t1.leaders()
    }

    /// The Z-syndrome labels `Γ2` (leaders of F^n / C2).
    pub fn z_labels(&self) -> Vec<VectorFq> {
        self.t2.leaders()
    }

    fn check_vec(&self, v: &VectorFq) -> Result<()> {
        if v.field() != self.field() {
            return Err(Error::MismatchedField);
        }
        if v.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: v.len() });
        }
        Ok(())
    }

    /// Index of `x` in `Γ1`, or `NotRepresentative`.
    pub fn x_index(&self, x: &VectorFq) -> Result<usize> {
        self.check_vec(x)?;
        if !self.t1.is_leader(x) {
            return Err(Error::NotRepresentative(format!("x = {x} is not a coset leader of C1")));
        }
        Ok(self.t1.syndrome_index_raw(x.entries()))
    }

    /// Index of `z` in `Γ2`, or `NotRepresentative`.
    pub fn z_index(&self, z: &VectorFq) -> Result<usize> {
        self.check_vec(z)?;
        if !self.t2.is_leader(z) {
            return Err(Error::NotRepresentative(format!("z = {z} is not a coset leader of C2")));
        }
        Ok(self.t2.syndrome_index_raw(z.entries()))
    }

    /// Index of `v` among the message representatives, or `NotRepresentative`.
    pub fn v_index(&self, v: &VectorFq) -> Result<usize> {
        self.check_vec(v)?;
        if !self.messages.is_representative(v) {
            return Err(Error::NotRepresentative(format!("v = {v} is not a message representative")));
        }
        Ok(self.messages.index_of(v).expect("representatives are indexed"))
    }

    /// Sparse `|φ_xzv⟩` as (basis index, amplitude).
    fn encoded_entries(&self, xi: usize, zi: usize, vi: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let nw = self.nw();
        let scale = 1.0 / (nw as f64).sqrt();
        let base = (xi * self.code_dim() + vi) * nw;
        (0..nw).map(move |wi| (self.members[base + wi], self.chi[zi * nw + wi] * scale))
    }

    fn encoded_by_index(&self, xi: usize, zi: usize, vi: usize) -> StateVector {
        let mut amps = vec![ZERO; self.dim()];
        for (j, a) in self.encoded_entries(xi, zi, vi) {
            amps[j] = a;
        }
        StateVector { field: self.field().clone(), n: self.n(), amps }
    }

    /// `|φ_xzv⟩ = |C2^⊥|^{-1/2} Σ_{w ∈ C2^⊥} ω^{Tr(z·w)} |x + v + w⟩`.
    pub fn encoded_state(&self, x: &VectorFq, z: &VectorFq, v: &VectorFq) -> Result<StateVector> {
        Ok(self.encoded_by_index(self.x_index(x)?, self.z_index(z)?, self.v_index(v)?))
    }

    /// All `q^n` encoded states, ordered by (x, z, v) indices.
    pub fn all_encoded_states(&self) -> Vec<StateVector> {
        let mut out = Vec::with_capacity(self.dim());
        for xi in 0..self.nx() {
            for zi in 0..self.nz() {
                for vi in 0..self.code_dim() {
                    out.push(self.encoded_by_index(xi, zi, vi));
                }
            }
        }
        out
    }

    /// Largest deviation of the Gram matrix of all encoded states from the
    /// identity, and the number of states.
    pub fn orthonormality_defect(&self) -> Result<(f64, usize)> {
        self.limits.check_density(self.dim() as u128)?;
        let states = self.all_encoded_states();
        let d = self.dim();
        let u = DMatrix::<C64>::from_fn(d, states.len(), |r, c| states[c].amps[r]);
        let g = u.adjoint() * &u;
        let dev = (g - DMatrix::<C64>::identity(states.len(), states.len()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        Ok((dev, states.len()))
    }

    /// Coefficients `⟨φ_{x'z'v'}|ψ⟩` laid out as `[(xi * nz + zi) * nv + vi]`.
    fn coefficients(&self, amps: &[C64]) -> Vec<C64> {
        let (nz, nv, nw) = (self.nz(), self.code_dim(), self.nw());
        let scale = 1.0 / (nw as f64).sqrt();
        let mut out = vec![ZERO; self.dim()];
        for xi in 0..self.nx() {
            for vi in 0..nv {
                let block = &self.members[(xi * nv + vi) * nw..(xi * nv + vi + 1) * nw];
                if block.iter().all(|&j| amps[j] == ZERO) {
                    continue;
                }
                for zi in 0..nz {
                    let c: C64 = block
                        .iter()
                        .enumerate()
                        .map(|(wi, &j)| self.chi[zi * nw + wi].conj() * amps[j])
                        .sum();
                    out[(xi * nz + zi) * nv + vi] = c * scale;
                }
            }
        }
        out
    }

    /// The correction `N_{[û, ŵ]}^{-1}` for measured syndrome
    /// `(xm, zm)` and target `(xt, zt)`: `û = leader1(xt - xm)`,
    /// `ŵ = leader2(zm - zt)`.
    fn correction(&self, xm: usize, zm: usize, xt: usize, zt: usize) -> (Vec<u32>, Vec<u32>) {
        let f = self.field();
        let lx = |i: usize| self.t1.leader(i).expect("index in range").into_entries();
        let lz = |i: usize| self.t2.leader(i).expect("index in range").into_entries();
        let u = self.t1.leader_raw(&vec_sub(f, &lx(xt), &lx(xm))).to_vec();
        let w = self.t2.leader_raw(&vec_sub(f, &lz(zm), &lz(zt))).to_vec();
        (u, w)
    }

    /// Syndrome measurement followed by the leader-pair correction into
    /// `Q_xz`. Returns a pure state when a single syndrome occurs.
    pub fn recover(&self, noisy: &QuantumState, x: &VectorFq, z: &VectorFq) -> Result<QuantumState> {
        let (xt, zt) = (self.x_index(x)?, self.z_index(z)?);
        let (nz, nv) = (self.nz(), self.code_dim());
        match noisy {
            QuantumState::Pure(psi) => {
                self.check_state(psi.field(), psi.n())?;
                let coef = self.coefficients(&psi.amps);
                let mut branches: Vec<Vec<C64>> = Vec::new();
                for xm in 0..self.nx() {
                    for zm in 0..nz {
                        let c = &coef[(xm * nz + zm) * nv..(xm * nz + zm + 1) * nv];
                        if norm_sqr(c) <= TOL * TOL {
                            continue;
                        }
                        let (u, w) = self.correction(xm, zm, xt, zt);
                        let mut out = vec![ZERO; self.dim()];
                        for (vi, cv) in c.iter().enumerate() {
                            for (j, a) in self.encoded_entries(xm, zm, vi) {
                                let (k, ph) = self.reg.weyl_inv(&u, &w, j);
                                out[k] += ph * a * cv;
                            }
                        }
                        branches.push(out);
                    }
                }
                let field = self.field().clone();
                if branches.len() == 1 {
                    let amps = branches.pop().expect("one branch");
                    return Ok(QuantumState::Pure(StateVector::normalized(&field, self.n(), amps)?));
                }
                self.limits.check_density(self.dim() as u128)?;
                let d = self.dim();
                let mut mat = DMatrix::<C64>::zeros(d, d);
                for b in &branches {
                    add_outer(&mut mat, b, 1.0);
                }
                Ok(QuantumState::Mixed(DensityOperator { field, n: self.n(), mat }))
            }
            QuantumState::Mixed(rho) => {
                self.check_state(rho.field(), rho.n())?;
                self.limits.check_density(self.dim() as u128)?;
                let d = self.dim();
                let states = self.all_encoded_states();
                let basis = DMatrix::<C64>::from_fn(d, d, |r, c| states[c].amps[r]);
                let mut coords = basis.adjoint() * &rho.mat * &basis;
                let syndrome_of = |c: usize| c / nv;
                for r in 0..d {
                    for c in 0..d {
                        if syndrome_of(r) != syndrome_of(c) {
                            coords[(r, c)] = ZERO;
                        }
                    }
                }
                let mut corrected = DMatrix::<C64>::zeros(d, d);
                for s in 0..d / nv {
                    let (xm, zm) = (s / nz, s % nz);
                    let (u, w) = self.correction(xm, zm, xt, zt);
                    for vi in 0..nv {
                        for (j, a) in self.encoded_entries(xm, zm, vi) {
                            let (k, ph) = self.reg.weyl_inv(&u, &w, j);
                            corrected[(k, s * nv + vi)] += ph * a;
                        }
                    }
                }
                let mat = &corrected * coords * corrected.adjoint();
                Ok(QuantumState::Mixed(DensityOperator { field: rho.field.clone(), n: rho.n, mat }))
            }
        }
    }

    fn check_state(&self, field: &Field, n: usize) -> Result<()> {
        if field != self.field() {
            return Err(Error::MismatchedField);
        }
        if n != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: n });
        }
        Ok(())
    }

    /// Verifies `Z^{h_j} |ψ⟩ = ω^{Tr(x·h_j)} |ψ⟩` for the rows of `C1^⊥` and
    /// `X^{g_j} |ψ⟩ = ω^{Tr(z·g_j)} |ψ⟩` for the rows of `C2^⊥`.
    pub fn stabilizer_check(
        &self,
        s: &StateVector,
        x: &VectorFq,
        z: &VectorFq,
    ) -> Result<StabilizerSyndrome> {
        self.check_state(s.field(), s.n())?;
        self.check_vec(x)?;
        self.check_vec(z)?;
        let f = self.field();
        let zero = vec![0u32; self.n()];
        let check = |u: &[u32], w: &[u32], shift: &[u32], g: &[u32], kind: &str| -> Result<u32> {
            let label = SympVector::from_raw(f, u.to_vec(), w.to_vec());
            let out = weyl_apply(s, &label)?;
            let e = f.trace(raw_dot(f, shift, g));
            let dev = out.max_deviation_scaled(s, self.reg.omega[e as usize])?;
            if dev > TOL {
                return Err(Error::EigenvalueMismatch(format!(
                    "{kind} generator {}: expected exponent {e}, deviation {dev:e}",
                    VectorFq::from_raw(f, g.to_vec())
                )));
            }
            Ok(e)
        };
        let h = self.pair.c1_dual().generator();
        let z_type = (0..h.rows())
            .map(|r| check(&zero, h.row(r), x.entries(), h.row(r), "Z-type"))
            .collect::<Result<_>>()?;
        let g = self.pair.c2_dual().generator();
        let x_type = (0..g.rows())
            .map(|r| check(g.row(r), &zero, z.entries(), g.row(r), "X-type"))
            .collect::<Result<_>>()?;
        Ok(StabilizerSyndrome { z_type, x_type })
    }

    /// Compares `|C2^⊥|^{-1} Σ_{z ∈ Γ2} |φ_xzv⟩⟨φ_xzv|` with
    /// `|C2^⊥|^{-1} Σ_{w ∈ C2^⊥} |x+v+w⟩⟨x+v+w|` entrywise.
    pub fn sp_mixture(&self, x: &VectorFq, v: &VectorFq) -> Result<MixtureCheck> {
        let (xi, vi) = (self.x_index(x)?, self.v_index(v)?);
        self.limits.check_density(self.dim() as u128)?;
        let d = self.dim();
        let nw = self.nw() as f64;
        let mut quantum = DMatrix::<C64>::zeros(d, d);
        for zi in 0..self.nz() {
            add_outer(&mut quantum, &self.encoded_by_index(xi, zi, vi).amps, 1.0 / nw);
        }
        let mut classical = DMatrix::<C64>::zeros(d, d);
        let f = self.field();
        let xv = vec_add(f, x.entries(), v.entries());
        for w in &self.dual_words {
            let j = self.reg.index(&vec_add(f, &xv, w));
            classical[(j, j)] += C64::new(1.0 / nw, 0.0);
        }
        let max_deviation = (&quantum - &classical).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let n = self.n();
        let check = MixtureCheck {
            quantum: DensityOperator { field: f.clone(), n, mat: quantum },
            classical: DensityOperator { field: f.clone(), n, mat: classical },
            max_deviation,
        };
        if max_deviation > TOL {
            return Err(Error::MixtureMismatch(max_deviation));
        }
        Ok(check)
    }

    /// For target syndrome `(xt, zt)`: `m[s][v2 * nv + v1] = ⟨φ_{xt zt v2}| C_s |φ_{s v1}⟩`.
    fn transfer_blocks(&self, xt: usize, zt: usize) -> Vec<Vec<C64>> {
        let (nz, nv, nw) = (self.nz(), self.code_dim(), self.nw());
        let scale = 1.0 / (nw as f64).sqrt();
        let mut out = Vec::with_capacity(self.nx() * nz);
        for xm in 0..self.nx() {
            for zm in 0..nz {
                let (u, w) = self.correction(xm, zm, xt, zt);
                let mut m = vec![ZERO; nv * nv];
                for v1 in 0..nv {
                    for (j, a) in self.encoded_entries(xm, zm, v1) {
                        let (k, ph) = self.reg.weyl_inv(&u, &w, j);
                        let (xk, vk, wk) = self.decomp[k];
                        if xk as usize == xt {
                            m[vk as usize * nv + v1] +=
                                self.chi[zt * nw + wk as usize].conj() * scale * ph * a;
                        }
                    }
                }
                out.push(m);
            }
        }
        out
    }

    /// Visits, for every error term `e` of `channel` and every syndrome `s`
    /// it reaches, `(P(e), block)` with
    /// `block[v * nv + v2] = ⟨φ_{xz v2}| C_s Π_s N_e |φ_{xz v}⟩`.
    fn for_each_recovered_block(
        &self,
        xt: usize,
        zt: usize,
        channel: &PauliChannel,
        mut visit: impl FnMut(f64, &[C64]),
    ) -> Result<()> {
        if channel.field() != self.field() || channel.n() != self.n() {
            return Err(Error::InvalidChannel("channel does not match the code".into()));
        }
        let (nz, nv, nw) = (self.nz(), self.code_dim(), self.nw());
        let scale = 1.0 / (nw as f64).sqrt();
        let transfer = self.transfer_blocks(xt, zt);
        // coefficient buffers for one X-syndrome block: coef[zm * nv + vk]
        let mut hits: Vec<(usize, Vec<C64>)> = Vec::new();
        let mut blocks: Vec<C64> = vec![ZERO; nz * nv * nv];
        let mut touched: Vec<usize> = Vec::new();
        let mut entries: Vec<(usize, C64)> = Vec::with_capacity(nw);
        channel.for_each_term(|u, w, p| {
            blocks.iter_mut().for_each(|b| *b = ZERO);
            touched.clear();
            let mut block_x = None;
            for v in 0..nv {
                entries.clear();
                entries.extend(self.encoded_entries(xt, zt, v).map(|(j, a)| {
                    let (k, ph) = self.reg.weyl(u, w, j);
                    (k, ph * a)
                }));
                hits.clear();
                for &(k, a) in &entries {
                    let (xk, vk, wk) = self.decomp[k];
                    let slot = match hits.iter().position(|h| h.0 == xk as usize) {
                        Some(s) => s,
                        None => {
                            hits.push((xk as usize, vec![ZERO; nz * nv]));
                            hits.len() - 1
                        }
                    };
                    for zm in 0..nz {
                        hits[slot].1[zm * nv + vk as usize] +=
                            self.chi[zm * nw + wk as usize].conj() * scale * a;
                    }
                }
                for (xk, coef) in &hits {
                    // A Weyl error maps each code space into a single X-syndrome block.
                    debug_assert!(block_x.is_none_or(|b| b == *xk));
                    block_x = Some(*xk);
                    for zm in 0..nz {
                        let c = &coef[zm * nv..(zm + 1) * nv];
                        if c.iter().all(|z| z.norm_sqr() <= 1e-30) {
                            continue;
                        }
                        let m = &transfer[xk * nz + zm];
                        let out = &mut blocks[zm * nv * nv..(zm + 1) * nv * nv];
                        for v2 in 0..nv {
                            out[v * nv + v2] += (0..nv).map(|v1| m[v2 * nv + v1] * c[v1]).sum::<C64>();
                        }
                        if !touched.contains(&zm) {
                            touched.push(zm);
                        }
                    }
                }
            }
            for &zm in &touched {
                visit(p, &blocks[zm * nv * nv..(zm + 1) * nv * nv]);
            }
        })
    }

    /// `F_e(π_{Q_xz}, R ∘ A)` for the leader-pair recovery `R`.
    pub fn entanglement_fidelity(&self, x: &VectorFq, z: &VectorFq, channel: &PauliChannel) -> Result<f64> {
        let (xt, zt) = (self.x_index(x)?, self.z_index(z)?);
        self.entanglement_fidelity_at(xt, zt, channel)
    }

    /// As [`Self::entanglement_fidelity`] with `(x, z)` given by table indices.
    pub fn entanglement_fidelity_at(&self, xt: usize, zt: usize, channel: &PauliChannel) -> Result<f64> {
        if xt >= self.nx() || zt >= self.nz() {
            return Err(Error::NotRepresentative(format!("syndrome index ({xt}, {zt}) out of range")));
        }
        let nv = self.code_dim();
        let dq2 = (nv * nv) as f64;
        let mut f = 0.0;
        self.for_each_recovered_block(xt, zt, channel, |p, block| {
            let tr: C64 = (0..nv).map(|v| block[v * nv + v]).sum();
            f += p * tr.norm_sqr() / dq2;
        })?;
        Ok(f.clamp(0.0, 1.0))
    }

    /// Entropy exchange (bits) and entanglement fidelity of `π_{Q_xz}`
    /// through `R ∘ A`.
    pub fn entropy_exchange(&self, x: &VectorFq, z: &VectorFq, channel: &PauliChannel) -> Result<(f64, f64)> {
        let (xt, zt) = (self.x_index(x)?, self.z_index(z)?);
        ensure_cap("entropy-exchange dimension", self.dim() as u128, MAX_ENTROPY_DIM as u128)?;
        let nv = self.code_dim();
        let dq = nv as f64;
        let mut vectors: Vec<Vec<C64>> = Vec::new();
        let mut fid = 0.0;
        self.for_each_recovered_block(xt, zt, channel, |p, block| {
            let tr: C64 = (0..nv).map(|v| block[v * nv + v]).sum();
            fid += p * tr.norm_sqr() / (dq * dq);
            let s = (p / dq).sqrt();
            vectors.push(block.iter().map(|b| b * s).collect());
        })?;
        let (s, tr) = gram_entropy(&vectors)?;
        if (tr - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!("recovered outputs leave the code space (trace {tr})")));
        }
        Ok((s, fid.clamp(0.0, 1.0)))
    }

    /// Dense Kraus operators `C_s Π_s N_e sqrt(P(e))` of recovery after the
    /// channel, omitting zero operators. Intended for tiny systems.
    pub fn recovery_channel_kraus(
        &self,
        x: &VectorFq,
        z: &VectorFq,
        channel: &PauliChannel,
    ) -> Result<Vec<DMatrix<C64>>> {
        let (xt, zt) = (self.x_index(x)?, self.z_index(z)?);
        ensure_cap("Kraus matrix dimension", self.dim() as u128, MAX_ENTROPY_DIM as u128)?;
        let d = self.dim();
        let (nz, nv) = (self.nz(), self.code_dim());
        let states = self.all_encoded_states();
        let mut recoveries = Vec::new();
        for xm in 0..self.nx() {
            for zm in 0..nz {
                let mut proj = DMatrix::<C64>::zeros(d, d);
                for vi in 0..nv {
                    add_outer(&mut proj, &states[(xm * nz + zm) * nv + vi].amps, 1.0);
                }
                let (u, w) = self.correction(xm, zm, xt, zt);
                let mut corr = DMatrix::<C64>::zeros(d, d);
                for k in 0..d {
                    let (t, ph) = self.reg.weyl_inv(&u, &w, k);
                    corr[(t, k)] = ph;
                }
                recoveries.push(corr * proj);
            }
        }
        let mut out = Vec::new();
        for (e, p) in channel.support()? {
            let ne = WeylOperator::build(&self.reg, &e).to_dense() * C64::new(p.sqrt(), 0.0);
            for r in &recoveries {
                let k = r * &ne;
                if k.iter().any(|z| z.norm() > TOL) {
                    out.push(k);
                }
            }
        }
        Ok(out)
    }

    /// `π_{Q_xz}`, the normalized projector onto the code space.
    pub fn code_projector(&self, x: &VectorFq, z: &VectorFq) -> Result<DensityOperator> {
        let (xi, zi) = (self.x_index(x)?, self.z_index(z)?);
        self.limits.check_density(self.dim() as u128)?;
        let d = self.dim();
        let nv = self.code_dim();
        let mut mat = DMatrix::<C64>::zeros(d, d);
        for vi in 0..nv {
            add_outer(&mut mat, &self.encoded_by_index(xi, zi, vi).amps, 1.0 / nv as f64);
        }
        Ok(DensityOperator { field: self.field().clone(), n: self.n(), mat })
    }

    /// Knill–Laflamme test on `Q_00`: a recovery correcting every error in
    /// `errors` exists iff `⟨φ_v|N_a^† N_b|φ_v'⟩ = c_ab δ_vv'` for all `a, b`.
    pub fn recovery_exists(&self, errors: &[SympVector]) -> Result<bool> {
        for e in errors {
            check_label(self.field(), self.n(), e)?;
        }
        ensure_cap("error pairs", (errors.len() as u128).pow(2), crate::symplectic::MAX_ERROR_PAIRS)?;
        let nv = self.code_dim();
        let moved: Vec<Vec<Vec<(usize, C64)>>> = errors
            .iter()
            .map(|e| {
                (0..nv)
                    .map(|v| {
                        let mut s: Vec<(usize, C64)> = self
                            .encoded_entries(0, 0, v)
                            .map(|(j, a)| {
                                let (k, ph) = self.reg.weyl(e.u_raw(), e.w_raw(), j);
                                (k, ph * a)
                            })
                            .collect();
                        s.sort_by_key(|t| t.0);
                        s
                    })
                    .collect()
            })
            .collect();
        let overlap = |a: &[(usize, C64)], b: &[(usize, C64)]| -> C64 {
            let (mut i, mut j, mut acc) = (0, 0, ZERO);
            while i < a.len() && j < b.len() {
                match a[i].0.cmp(&b[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc += a[i].1.conj() * b[j].1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            acc
        };
        for a in 0..errors.len() {
            for b in a..errors.len() {
                let c = overlap(&moved[a][0], &moved[b][0]);
                for v in 0..nv {
                    for v2 in 0..nv {
                        let m = overlap(&moved[a][v], &moved[b][v2]);
                        let expect = if v == v2 { c } else { ZERO };
                        if (m - expect).norm() > TOL {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Exponents of the stabilizer eigenvalues of `s` (free-function form).
pub fn stabilizer_check(
    code: &CssCode,
    s: &StateVector,
    x: &VectorFq,
    z: &VectorFq,
) -> Result<StabilizerSyndrome> {
    code.stabilizer_check(s, x, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate_pair::make_pair;
    use crate::linear_codes::LinearCode;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    fn steane() -> CssCode {
        let h = LinearCode::hamming_7_4();
        CssCode::new(&make_pair(h.clone(), h).unwrap(), &SimLimits::default()).unwrap()
    }

    fn four_two() -> CssCode {
        let e = LinearCode::even_weight(&gf2(), 4);
        CssCode::new(&make_pair(e.clone(), e).unwrap(), &SimLimits::default()).unwrap()
    }

    fn bits(s: &str) -> VectorFq {
        VectorFq::new(&gf2(), s.bytes().map(|b| (b - b'0') as u32).collect()).unwrap()
    }

    fn label(u: &str, w: &str) -> SympVector {
        SympVector::new(&bits(u), &bits(w)).unwrap()
    }

    #[test]
    fn weyl_apply_examples() {
        let lim = SimLimits::default();
        let zero = StateVector::basis(&bits("0"), &lim).unwrap();
        let one = StateVector::basis(&bits("1"), &lim).unwrap();
        assert_eq!(weyl_apply(&zero, &label("0", "0")).unwrap(), zero);
        assert_eq!(weyl_apply(&zero, &label("1", "0")).unwrap(), one);
        let z1 = weyl_apply(&one, &label("0", "1")).unwrap();
        assert!(z1.max_deviation_scaled(&one, C64::new(-1.0, 0.0)).unwrap() < TOL);
    }

    #[test]
    fn weyl_operator_matches_apply() {
        let f = Field::prime(3).unwrap();
        let lim = SimLimits::default();
        let l = SympVector::from_raw(&f, vec![1, 2], vec![2, 1]);
        let op = WeylOperator::new(&l, &lim).unwrap();
        let psi = StateVector::basis(&VectorFq::new(&f, vec![0, 1]).unwrap(), &lim).unwrap();
        assert_eq!(op.apply(&psi).unwrap(), weyl_apply(&psi, &l).unwrap());
        // X^u moves |j⟩ to |j - u⟩.
        let out = op.apply(&psi).unwrap();
        let target = VectorFq::new(&f, vec![2, 2]).unwrap();
        assert!((out.amplitude(&target).unwrap().norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn commutation_examples() {
        assert_eq!(commutation_check(&label("1", "0"), &label("1", "0")).unwrap(), 0);
        assert_eq!(commutation_check(&label("1", "0"), &label("0", "1")).unwrap(), 1);
        assert_eq!(commutation_check(&label("11", "00"), &label("00", "11")).unwrap(), 0);
        let f3 = Field::prime(3).unwrap();
        let a = SympVector::from_raw(&f3, vec![1], vec![0]);
        let b = SympVector::from_raw(&f3, vec![0], vec![1]);
        assert_eq!(commutation_check(&a, &b).unwrap(), 1);
        assert_eq!(commutation_check(&b, &a).unwrap(), 2);
    }

    #[test]
    fn encoded_state_examples() {
        let f = gf2();
        let full = make_pair(LinearCode::full(&f, 1), LinearCode::full(&f, 1)).unwrap();
        let code = CssCode::new(&full, &SimLimits::default()).unwrap();
        let phi = code.encoded_state(&bits("0"), &bits("0"), &bits("1")).unwrap();
        assert_eq!(phi, StateVector::basis(&bits("1"), &SimLimits::default()).unwrap());

        let s = steane();
        let phi = s.encoded_state(&bits("0000000"), &bits("0000000"), &bits("0000000")).unwrap();
        let dual = s.pair().c2_dual();
        for (j, a) in phi.amps().iter().enumerate() {
            let v = VectorFq::from_index(&f, 7, j as u64);
            let expect = if dual.contains(&v).unwrap() { 1.0 / 8f64.sqrt() } else { 0.0 };
            assert!((a.re - expect).abs() < TOL && a.im.abs() < TOL);
        }

        let c = four_two();
        let phi = c.encoded_state(&bits("0000"), &bits("0000"), &bits("0000")).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((phi.amps()[0].re - r).abs() < TOL && (phi.amps()[15].re - r).abs() < TOL);
        assert!((phi.norm() - 1.0).abs() < TOL);

        let err = c.encoded_state(&bits("0000"), &bits("0000"), &bits("1111")).unwrap_err();
        assert!(matches!(err, Error::NotRepresentative(_)));
        let err = c.encoded_state(&bits("0011"), &bits("0000"), &bits("0000")).unwrap_err();
        assert!(matches!(err, Error::NotRepresentative(_)));
    }

    #[test]
    fn encoded_states_form_basis() {
        for code in [steane(), four_two()] {
            let (dev, count) = code.orthonormality_defect().unwrap();
            assert!(dev < TOL);
            assert_eq!(count, code.dim());
        }
    }

    #[test]
    fn stabilizer_examples() {
        let s = steane();
        let zero = bits("0000000");
        let phi = s.encoded_state(&zero, &zero, &zero).unwrap();
        let syn = s.stabilizer_check(&phi, &zero, &zero).unwrap();
        assert!(syn.z_type.iter().chain(&syn.x_type).all(|&e| e == 0));

        let e1 = bits("1000000");
        let phi = s.encoded_state(&e1, &zero, &zero).unwrap();
        let syn = s.stabilizer_check(&phi, &e1, &zero).unwrap();
        let h = s.pair().c1_dual().generator();
        let expect: Vec<u32> = (0..h.rows()).map(|r| h.row(r)[0]).collect();
        assert_eq!(syn.z_type, expect);
        // A wrong claimed syndrome is rejected.
        assert!(matches!(s.stabilizer_check(&phi, &zero, &zero), Err(Error::EigenvalueMismatch(_))));

        let c = four_two();
        let z = bits("0001");
        let phi = c.encoded_state(&bits("0000"), &z, &bits("0000")).unwrap();
        let syn = c.stabilizer_check(&phi, &bits("0000"), &z).unwrap();
        assert_eq!(syn.x_type, vec![1]);
    }

    #[test]
    fn mixture_examples() {
        let c = four_two();
        let m = c.sp_mixture(&bits("0000"), &bits("0000")).unwrap();
        assert!(m.max_deviation < TOL);
        assert!((m.classical.matrix()[(0, 0)].re - 0.5).abs() < TOL);
        assert!((m.classical.matrix()[(15, 15)].re - 0.5).abs() < TOL);
        assert!(m.quantum.matrix()[(0, 15)].norm() < TOL);
    }

    #[test]
    fn recovery_examples() {
        let s = steane();
        let zero = bits("0000000");
        let phi = s.encoded_state(&zero, &zero, &zero).unwrap();
        let out = s.recover(&QuantumState::Pure(phi.clone()), &zero, &zero).unwrap();
        assert!((out.fidelity_with(&phi).unwrap() - 1.0).abs() < TOL);

        for (u, w) in [("0010000", "0000000"), ("1000000", "0000100")] {
            let noisy = weyl_apply(&phi, &label(u, w)).unwrap();
            let out = s.recover(&QuantumState::Pure(noisy.clone()), &zero, &zero).unwrap();
            assert!(matches!(out, QuantumState::Pure(_)));
            assert!((out.fidelity_with(&phi).unwrap() - 1.0).abs() < TOL);
            let rho = DensityOperator::from_pure(&noisy, &SimLimits::default()).unwrap();
            let out = s.recover(&QuantumState::Mixed(rho), &zero, &zero).unwrap();
            assert!((out.fidelity_with(&phi).unwrap() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn entanglement_fidelity_examples() {
        let s = steane();
        let f = gf2();
        let zero = bits("0000000");
        let id = PauliChannel::identity(&f, 7);
        assert!((s.entanglement_fidelity(&zero, &zero, &id).unwrap() - 1.0).abs() < TOL);
        let one = |u: &str, w: &str| PauliChannel::joint(&f, 7, vec![(label(u, w), 1.0)]).unwrap();
        let fe = s.entanglement_fidelity(&zero, &zero, &one("0100000", "0000001")).unwrap();
        assert!((fe - 1.0).abs() < TOL);
        let fe = s.entanglement_fidelity(&zero, &zero, &one("1100000", "0000000")).unwrap();
        assert!(fe < 1.0 - 1e-6);
    }

    #[test]
    fn kernel_matches_dense_kraus() {
        let c = four_two();
        let f = gf2();
        let zero = bits("0000");
        let ch = PauliChannel::single_site(&f, 4, 0, &depolarizing_symbol(&f, 0.1)).unwrap();
        let kraus = c.recovery_channel_kraus(&zero, &zero, &ch).unwrap();
        let pi = c.code_projector(&zero, &zero).unwrap();
        let dense_f = entanglement_fidelity_kraus(&pi, &kraus).unwrap();
        let dense_s = entropy_exchange(&pi, &kraus).unwrap();
        let (s, fe) = c.entropy_exchange(&zero, &zero, &ch).unwrap();
        assert!((dense_f - fe).abs() < TOL);
        assert!((dense_s - s).abs() < 1e-8);
        assert!((fe - c.entanglement_fidelity(&zero, &zero, &ch).unwrap()).abs() < TOL);
    }

    #[test]
    fn entropy_exchange_examples() {
        let f = gf2();
        let lim = SimLimits::default();
        let rho0 = DensityOperator::from_pure(&StateVector::basis(&bits("0"), &lim).unwrap(), &lim).unwrap();
        let id = vec![DMatrix::<C64>::identity(2, 2)];
        assert!(entropy_exchange(&rho0, &id).unwrap().abs() < TOL);
        let x = WeylOperator::new(&label("1", "0"), &lim).unwrap().to_dense();
        assert!(entropy_exchange(&rho0, &[x]).unwrap().abs() < TOL);

        let p: f64 = 0.3;
        let ch = PauliChannel::depolarizing(&f, 1, p).unwrap();
        let kraus: Vec<DMatrix<C64>> = ch
            .support()
            .unwrap()
            .iter()
            .map(|(e, pr)| WeylOperator::new(e, &lim).unwrap().to_dense() * C64::new(pr.sqrt(), 0.0))
            .collect();
        // On |0⟩⟨0|, I and Z act alike, as do X and Y: two eigenvalues.
        let t = 2.0 * p / 3.0;
        let h2 = -t * t.log2() - (1.0 - t) * (1.0 - t).log2();
        assert!((entropy_exchange(&rho0, &kraus).unwrap() - h2).abs() < 1e-9);
        // On the maximally mixed state W is diagonal with the Pauli weights.
        let mixed = DensityOperator::new(&f, 1, DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0)).unwrap();
        let w = [1.0 - p, p / 3.0, p / 3.0, p / 3.0];
        let expect: f64 = w.iter().map(|&x| -x * x.log2()).sum();
        assert!((entropy_exchange(&mixed, &kraus).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn channel_constructors() {
        let f = gf2();
        assert!(PauliChannel::depolarizing(&f, 3, 1.5).is_err());
        assert!(PauliChannel::iid(&f, 3, vec![0.5, 0.5, 0.1, 0.0]).is_err());
        let ch = PauliChannel::independent_xz(&f, 2, 0.1, 0.2).unwrap();
        let mut total = 0.0;
        ch.for_each_term(|_, _, p| total += p).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
        let mut px = 0.0;
        ch.for_each_x_marginal(|u, p| {
            if u.iter().all(|&a| a == 0) {
                px += p;
            }
        })
        .unwrap();
        assert!((px - 0.81).abs() < 1e-12);
        assert!((ch.probability(&label("10", "01")) - 0.1 * 0.8 * 0.9 * 0.2).abs() < 1e-12);
    }

    #[test]
    fn density_validation() {
        let f = gf2();
        let bad =
            DMatrix::<C64>::from_row_slice(2, 2, &[C64::new(1.5, 0.0), ZERO, ZERO, C64::new(-0.5, 0.0)]);
        assert!(matches!(DensityOperator::new(&f, 1, bad), Err(Error::InvalidState(_))));
        assert!(StateVector::new(&f, 1, vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn limits_cap_dimension() {
        let h = LinearCode::hamming_7_4();
        let pair = make_pair(h.clone(), h).unwrap();
        let err = CssCode::new(&pair, &SimLimits::with_max_dim(64)).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }
}
