//! The cryptographic code built on a conjugate pair: a message `v` (a coset
//! of `C2^⊥` in `C1`) is sent as `w + v + x` with `w` uniform in `C2^⊥`,
//! decoded in the coset code `x + C1`, and reduced modulo `C2^⊥`.
//!
//! Also computes the reliability quantities of the matching CSS code under a
//! Pauli channel (exact enumeration and Monte Carlo) and the Fano-type
//! leakage bound.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugate_pair::{ConjugatePair, QuotientCode};
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::linear_codes::{decode_coset, vec_add, vec_sub, SyndromeTable, VectorFq};
use crate::quantum_sim::{CssCode, PauliChannel, SimLimits, TOL};
use crate::symplectic::EnlargedErrorSet;

/// Two-sided 95% standard normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;
/// Trials per independently seeded Monte Carlo shard.
pub const SHARD_TRIALS: u64 = 1 << 14;

/// How the syndrome shift `x` is chosen for each transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XDist {
    /// Always the same coset leader of `C1`.
    Fixed(VectorFq),
    /// Uniform over the coset leaders of `C1`.
    Uniform,
}

/// A conjugate pair with its decoding tables and sampling choices.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    pair: ConjugatePair,
    t1: SyndromeTable,
    t2: SyndromeTable,
    messages: QuotientCode,
    enlarged: EnlargedErrorSet,
    x_dist: XDist,
    seed: u64,
    limits: SimLimits,
}

impl SchemeInstance {
    /// Complete leader tables, `x` fixed at 0, seed 0, default limits.
    pub fn new(pair: &ConjugatePair) -> Result<Self> {
        let t1 = SyndromeTable::build(pair.c1())?;
        let t2 = SyndromeTable::build(pair.c2())?;
        let enlarged = EnlargedErrorSet::from_tables(pair, &t1, &t2)?;
        Ok(SchemeInstance {
            pair: pair.clone(),
            messages: pair.message_space()?,
            x_dist: XDist::Fixed(VectorFq::zeros(pair.field(), pair.n())),
            t1,
            t2,
            enlarged,
            seed: 0,
            limits: SimLimits::default(),
        })
    }

    pub fn with_x_dist(mut self, x_dist: XDist) -> Result<Self> {
        if let XDist::Fixed(x) = &x_dist {
            if x.field() != self.pair.field() || x.len() != self.pair.n() || !self.t1.is_leader(x) {
                return Err(Error::NotRepresentative(format!("x = {x} is not a coset leader of C1")));
            }
        }
        self.x_dist = x_dist;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_limits(mut self, limits: SimLimits) -> Self {
        self.limits = limits;
        self
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

    pub fn enlarged_error_set(&self) -> &EnlargedErrorSet {
        &self.enlarged
    }

    pub fn x_dist(&self) -> &XDist {
        &self.x_dist
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn limits(&self) -> &SimLimits {
        &self.limits
    }

    /// A generator seeded from the instance seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// `k / n`, in units of `log2 q` bits per symbol.
    pub fn rate(&self) -> f64 {
        self.pair.k() as f64 / self.pair.n() as f64
    }

    fn sample_x<R: Rng + ?Sized>(&self, rng: &mut R) -> VectorFq {
        match &self.x_dist {
            XDist::Fixed(x) => x.clone(),
            XDist::Uniform => {
                let i = rng.random_range(0..self.t1.len());
                self.t1.leader(i).expect("index in range")
            }
        }
    }

    /// Samples `x` and `w ∈ C2^⊥` and returns `(x, w + v + x)`.
    pub fn encrypt<R: Rng + ?Sized>(&self, v: &VectorFq, rng: &mut R) -> Result<(VectorFq, VectorFq)> {
        if v.field() != self.pair.field() || v.len() != self.pair.n() || !self.messages.is_representative(v) {
            return Err(Error::InvalidMessage);
        }
        let x = self.sample_x(rng);
        let w = self.pair.c2_dual().random_codeword(rng);
        let f = self.pair.field();
        let sent = vec_add(f, &vec_add(f, w.entries(), v.entries()), x.entries());
        Ok((x, VectorFq::new(f, sent)?))
    }

    /// Decodes `received` in `x + C1`, removes `x` and returns the message
    /// representative of the result modulo `C2^⊥`.
    pub fn decrypt(&self, x: &VectorFq, received: &VectorFq) -> Result<VectorFq> {
        let y = decode_coset(self.pair.c1(), x, received, &self.t1)?;
        let c = y.sub(x)?;
        Ok(self.messages.representative_of(&c).expect("decoded word minus x lies in C1"))
    }

    fn decrypt_raw(&self, x: &[u32], received: &[u32]) -> usize {
        let f = self.pair.field();
        let diff = vec_sub(f, received, x);
        let c = vec_sub(f, &diff, self.t1.leader_raw(&diff));
        self.messages.index_of_raw(&c).expect("decoded word minus x lies in C1")
    }
}

/// A channel description as given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelSpec {
    Identity,
    /// Each nontrivial single-symbol Weyl error with probability `p / (q² - 1)`.
    Depolarizing {
        p: f64,
    },
    /// Independent X and Z shifts with total probabilities `px`, `pz`.
    IndependentXz {
        px: f64,
        pz: f64,
    },
    /// Explicit single-symbol table, `symbol[u * q + w]`.
    Custom {
        symbol: Vec<f64>,
    },
}

fn parse_probs(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad probability {t:?}: {e}"))))
        .collect()
}

impl FromStr for ChannelSpec {
    type Err = Error;

    /// `identity`, `depolarizing:P`, `xz:PX,PZ` (also `independent-xz:`),
    /// or `custom:P0,P1,…` with `q²` entries.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim(), Some(p)),
            None => (s.trim(), None),
        };
        let spec = match (kind, params) {
            ("identity" | "noiseless", None) => ChannelSpec::Identity,
            ("depolarizing", Some(p)) => match parse_probs(p)?.as_slice() {
                [p] => ChannelSpec::Depolarizing { p: *p },
                _ => return Err(Error::Parse("depolarizing takes one parameter".into())),
            },
            ("xz" | "independent-xz", Some(p)) => match parse_probs(p)?.as_slice() {
                [px, pz] => ChannelSpec::IndependentXz { px: *px, pz: *pz },
                _ => return Err(Error::Parse("xz takes two parameters PX,PZ".into())),
            },
            ("custom", Some(p)) => ChannelSpec::Custom { symbol: parse_probs(p)? },
            _ => return Err(Error::Parse(format!("unknown channel {s:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Identity => write!(f, "identity"),
            ChannelSpec::Depolarizing { p } => write!(f, "depolarizing:{p}"),
            ChannelSpec::IndependentXz { px, pz } => write!(f, "xz:{px},{pz}"),
            ChannelSpec::Custom { symbol } => {
                let parts: Vec<String> = symbol.iter().map(f64::to_string).collect();
                write!(f, "custom:{}", parts.join(","))
            }
        }
    }
}

impl ChannelSpec {
    /// The i.i.d. Pauli channel on `n` symbols over `field`.
    pub fn to_channel(&self, field: &Field, n: usize) -> Result<PauliChannel> {
        match self {
            ChannelSpec::Identity => Ok(PauliChannel::identity(field, n)),
            ChannelSpec::Depolarizing { p } => PauliChannel::depolarizing(field, n, *p),
            ChannelSpec::IndependentXz { px, pz } => PauliChannel::independent_xz(field, n, *px, *pz),
            ChannelSpec::Custom { symbol } => PauliChannel::iid(field, n, symbol.clone()),
        }
    }

    /// The single-symbol table.
    pub fn symbol(&self, field: &Field) -> Result<Vec<f64>> {
        match self.to_channel(field, 1)? {
            PauliChannel::Iid { symbol, .. } => Ok(symbol),
            PauliChannel::Joint { .. } => unreachable!("specs are i.i.d."),
        }
    }
}

fn check_channel(s: &SchemeInstance, ch: &PauliChannel) -> Result<()> {
    if ch.field() != s.pair.field() || ch.n() != s.pair.n() {
        return Err(Error::InvalidChannel(format!(
            "channel on {} symbols over GF({}) does not match the pair",
            ch.n(),
            ch.field()
        )));
    }
    Ok(())
}

/// `Pr{ξ ∉ Γ1'}` and `Pr{ζ ∉ Γ2'}` for the X part `ξ` and Z part `ζ` of the
/// channel error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorProbabilities {
    pub p_xi_out: f64,
    pub p_zeta_out: f64,
}

/// Exact marginal probabilities by enumeration.
pub fn error_probabilities(s: &SchemeInstance, ch: &PauliChannel) -> Result<ErrorProbabilities> {
    check_channel(s, ch)?;
    let mut px = 0.0;
    ch.for_each_x_marginal(|u, p| {
        if !s.enlarged.contains_x_raw(u) {
            px += p;
        }
    })?;
    let mut pz = 0.0;
    ch.for_each_z_marginal(|w, p| {
        if !s.enlarged.contains_z_raw(w) {
            pz += p;
        }
    })?;
    Ok(ErrorProbabilities { p_xi_out: px.clamp(0.0, 1.0), p_zeta_out: pz.clamp(0.0, 1.0) })
}

/// Monte Carlo estimates of the same probabilities.
pub fn error_probabilities_mc(
    s: &SchemeInstance,
    ch: &PauliChannel,
    trials: u64,
    seed: u64,
) -> Result<ErrorProbabilities> {
    check_channel(s, ch)?;
    if trials == 0 {
        return Err(Error::DomainError("trials must be at least 1".into()));
    }
    let (ox, oz) = shards(trials)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard);
            let (mut ox, mut oz) = (0u64, 0u64);
            for _ in 0..count {
                let e = ch.sample(&mut rng);
                ox += u64::from(!s.enlarged.contains_x_raw(e.u().entries()));
                oz += u64::from(!s.enlarged.contains_z_raw(e.w().entries()));
            }
            (ox, oz)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ErrorProbabilities { p_xi_out: ox as f64 / trials as f64, p_zeta_out: oz as f64 / trials as f64 })
}

/// `P_A(K(Γ1', Γ2')^c)`, the probability that the error leaves the
/// enlarged correctable set.
pub fn enlarged_complement_probability(s: &SchemeInstance, ch: &PauliChannel) -> Result<f64> {
    check_channel(s, ch)?;
    let mut out = 0.0;
    ch.for_each_term(|u, w, p| {
        if !(s.enlarged.contains_x_raw(u) && s.enlarged.contains_z_raw(w)) {
            out += p;
        }
    })?;
    Ok(out.clamp(0.0, 1.0))
}

/// `F_xz` for every syndrome pair, indexed `[x][z]` by table index.
pub fn fidelity_table(s: &SchemeInstance, ch: &PauliChannel) -> Result<Vec<Vec<f64>>> {
    check_channel(s, ch)?;
    let code = CssCode::with_tables(&s.pair, &s.t1, &s.t2, &s.limits)?;
    let nz = s.t2.len();
    let flat: Vec<f64> = (0..s.t1.len() * nz)
        .into_par_iter()
        .map(|i| code.entanglement_fidelity_at(i / nz, i % nz, ch))
        .collect::<Result<_>>()?;
    Ok(flat.chunks(nz).map(<[f64]>::to_vec).collect())
}

/// The three sides of the fidelity accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityAccounting {
    /// `1 - E F`, averaging `F_xz` uniformly over all syndrome pairs.
    pub fidelity_gap: f64,
    /// `P_A(K(Γ1', Γ2')^c)`.
    pub p_enlarged_complement: f64,
    /// `Pr{ξ ∉ Γ1'} + Pr{ζ ∉ Γ2'}`.
    pub split_bound: f64,
    pub p_xi_out: f64,
    pub p_zeta_out: f64,
}

/// Computes `1 - E F` by exact simulation and checks it against the
/// classical `P_A(K'^c)` and the split bound.
pub fn fidelity_accounting(s: &SchemeInstance, ch: &PauliChannel) -> Result<FidelityAccounting> {
    let table = fidelity_table(s, ch)?;
    let count = table.iter().map(Vec::len).sum::<usize>() as f64;
    let ef = table.iter().flatten().sum::<f64>() / count;
    let gap = (1.0 - ef).max(0.0);
    let pk = enlarged_complement_probability(s, ch)?;
    let probs = error_probabilities(s, ch)?;
    let split = probs.p_xi_out + probs.p_zeta_out;
    if (gap - pk).abs() > TOL {
        return Err(Error::EqualityViolation(format!("1 - EF = {gap:e} but P_A(K'^c) = {pk:e}")));
    }
    if pk > split + TOL {
        return Err(Error::EqualityViolation(format!("P_A(K'^c) = {pk:e} exceeds split bound {split:e}")));
    }
    Ok(FidelityAccounting {
        fidelity_gap: gap,
        p_enlarged_complement: pk,
        split_bound: split,
        p_xi_out: probs.p_xi_out,
        p_zeta_out: probs.p_zeta_out,
    })
}

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// The Fano-type bound `h2(F) + (1 - F)·2nR·log2 q` and its looser form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageBound {
    pub fidelity: f64,
    pub h2: f64,
    pub rate_term: f64,
    pub bits: f64,
    /// `-2t log2 t` with `t = 1 - F`, an upper bound on `h2(F)` for `t ≤ 1/2`.
    pub h2_overestimate: Option<f64>,
    /// `bits` with `h2` replaced by its overestimate.
    pub bits_overestimate: Option<f64>,
}

/// Evaluates the leakage bound for fidelity `f`, length `n`, rate `r`
/// (log_q units) and alphabet size `q`.
pub fn leakage_bound(f: f64, n: usize, r: f64, q: u32) -> Result<LeakageBound> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::DomainError(format!("fidelity {f} is outside [0, 1]")));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::DomainError(format!("rate {r} must be nonnegative")));
    }
    if q < 2 {
        return Err(Error::DomainError(format!("alphabet size {q} must be at least 2")));
    }
    let t = 1.0 - f;
    let h = h2(f);
    let rate_term = t * 2.0 * n as f64 * r * (q as f64).log2();
    let h2_overestimate = (t <= 0.5).then(|| if t > 0.0 { -2.0 * t * t.log2() } else { 0.0 });
    Ok(LeakageBound {
        fidelity: f,
        h2: h,
        rate_term,
        bits: h + rate_term,
        h2_overestimate,
        bits_overestimate: h2_overestimate.map(|o| o + rate_term),
    })
}

/// Entropy exchange for one syndrome pair against its Fano bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanoCheck {
    pub entropy_exchange: f64,
    pub fidelity: f64,
    pub bound: f64,
}

/// `S_e(x, z)` of `π_{Q_xz}` through recovery after the channel, checked
/// against `h2(F_xz) + (1 - F_xz)·2nR·log2 q`.
pub fn entropy_exchange_leakage(
    s: &SchemeInstance,
    ch: &PauliChannel,
    x: &VectorFq,
    z: &VectorFq,
) -> Result<FanoCheck> {
    check_channel(s, ch)?;
    let code = CssCode::with_tables(&s.pair, &s.t1, &s.t2, &s.limits)?;
    let (se, f) = code.entropy_exchange(x, z, ch)?;
    let bound = leakage_bound(f, s.pair.n(), s.rate(), s.pair.field().q())?.bits;
    if se > bound + TOL {
        return Err(Error::EqualityViolation(format!("S_e = {se} exceeds Fano bound {bound}")));
    }
    Ok(FanoCheck { entropy_exchange: se, fidelity: f, bound })
}

/// Wilson score interval for `successes / trials` at quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn shards(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(SHARD_TRIALS)).map(|s| (s, SHARD_TRIALS.min(trials - s * SHARD_TRIALS))).collect()
}

/// Shard `s` draws from stream `s` of the ChaCha8 generator keyed by `seed`.
fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Result of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub trials: u64,
    pub seed: u64,
    pub error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_xi_out: Option<f64>,
    pub p_zeta_out: Option<f64>,
    pub fidelity_gap: Option<f64>,
    pub leakage_bound_bits: Option<f64>,
}

impl SimulationReport {
    pub const CSV_HEADER: &'static str =
        "n,k,q,trials,seed,error_rate,ci_low,ci_high,p_xi_out,p_zeta_out,fidelity_gap,leakage_bound_bits";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.q,
            self.trials,
            self.seed,
            self.error_rate,
            self.ci_low,
            self.ci_high,
            opt(self.p_xi_out),
            opt(self.p_zeta_out),
            opt(self.fidelity_gap),
            opt(self.leakage_bound_bits)
        )
    }
}

/// Runs `trials` rounds of encrypt, X-part channel error, decrypt with
/// uniformly random messages, and attaches the exact quantities where they
/// are enumerable.
///
/// `fidelity_gap` is the simulated `1 - EF` when the code fits the density
/// cap and otherwise the classical `P_A(K'^c)`, to which it is equal.
pub fn simulate(s: &SchemeInstance, ch: &PauliChannel, trials: u64, seed: u64) -> Result<SimulationReport> {
    check_channel(s, ch)?;
    if trials == 0 {
        return Err(Error::DomainError("trials must be at least 1".into()));
    }
    let sampler = ch.x_sampler();
    let f = s.pair.field();
    let nv = s.messages.len();
    let reps: Vec<VectorFq> = s.messages.representatives();
    let failures: u64 = shards(trials)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard);
            let mut failures = 0u64;
            for _ in 0..count {
                let vi = rng.random_range(0..nv);
                let (x, sent) = s.encrypt(&reps[vi], &mut rng).expect("representatives are valid messages");
                let u = sampler.sample(&mut rng);
                let received = vec_add(f, sent.entries(), &u);
                failures += u64::from(s.decrypt_raw(x.entries(), &received) != vi);
            }
            failures
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(failures, trials, WILSON_Z);
    let probs = match error_probabilities(s, ch) {
        Ok(p) => Some(p),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let gap = match fidelity_accounting(s, ch) {
        Ok(acc) => Some(acc.fidelity_gap),
        Err(Error::TooLarge { .. }) => match enlarged_complement_probability(s, ch) {
            Ok(p) => Some(p),
            Err(Error::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        },
        Err(e) => return Err(e),
    };
    let leakage = match gap {
        Some(g) => Some(leakage_bound(1.0 - g, s.pair.n(), s.rate(), f.q())?.bits),
        None => None,
    };
    Ok(SimulationReport {
        n: s.pair.n(),
        k: s.pair.k(),
        q: f.q(),
        trials,
        seed,
        error_rate: failures as f64 / trials as f64,
        ci_low,
        ci_high,
        p_xi_out: probs.map(|p| p.p_xi_out),
        p_zeta_out: probs.map(|p| p.p_zeta_out),
        fidelity_gap: gap,
        leakage_bound_bits: leakage,
    })
}
