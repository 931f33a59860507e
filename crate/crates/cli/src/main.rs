//! `conjugate-codes`: verify, expand and exercise conjugate code pairs.
//!
//! Every run writes one JSON document (the report, or an error object) to
//! `--json PATH` or standard output. Human-readable summaries go to
//! standard error.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conjugate_codes::catalog::{builtin, builtin_names};
use conjugate_codes::conjugate_pair::expand_pair;
use conjugate_codes::crypto_scheme::{fidelity_accounting, leakage_bound, simulate};
use conjugate_codes::quantum_sim::{weyl_apply, MAX_DIM_ENV};
use conjugate_codes::{
    ChannelSpec, ConjugatePair, CssCode, Error, PairManifest, QuantumState, SchemeInstance, SimLimits,
    VectorFq,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "conjugate-codes",
    version,
    about = "Conjugate code pairs, CSS codes and the scheme built on them"
)]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Largest state dimension the simulator may allocate.
    #[arg(long, global = true, value_name = "CAP", env = MAX_DIM_ENV)]
    max_dim: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a pair is conjugate and print n, k1, k2, k.
    Verify(PairArg),
    /// Expand a pair over GF(p^m) to one over GF(p) and write the bundle.
    Expand {
        #[command(flatten)]
        pair: PairArg,
        /// Directory for the new bundle.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Bundle name; defaults to `<pair>-expanded`.
        #[arg(long)]
        name: Option<String>,
    },
    /// Encrypt one message, send it through a sampled error and decrypt it.
    EncodeDemo {
        #[command(flatten)]
        pair: PairArg,
        /// Index of the message among the canonical representatives.
        #[arg(long, default_value_t = 0)]
        message: usize,
        #[arg(long, default_value = "identity")]
        channel: ChannelSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo decryption error rate with exact reference values.
    Simulate {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        channel: ChannelSpec,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact entanglement fidelity and its classical accounting.
    Fidelity {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        channel: ChannelSpec,
    },
    /// Evaluate the leakage bound h2(F) + (1-F) 2nR log2 q.
    Bounds {
        #[arg(long)]
        fidelity: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        q: u32,
    },
    /// Run the simulator invariant suite on built-in or given pairs.
    Selftest {
        /// Pairs to test; defaults to every built-in pair.
        #[arg(long = "pair", value_name = "MANIFEST|NAME")]
        pairs: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct PairArg {
    /// Manifest path or built-in pair name.
    #[arg(long, value_name = "MANIFEST|NAME")]
    pair: String,
}

/// A pair together with how it was named on the command line.
struct LoadedPair {
    label: String,
    pair: ConjugatePair,
}

fn load_pair(spec: &str) -> Result<LoadedPair, Error> {
    let path = Path::new(spec);
    let pair = if path.is_file() {
        PairManifest::load(path)?
    } else if builtin_names().contains(&spec) {
        builtin(spec)?
    } else {
        return Err(Error::Io(format!(
            "{spec:?} is neither a manifest file nor a built-in pair ({})",
            builtin_names().join(", ")
        )));
    };
    Ok(LoadedPair { label: spec.to_string(), pair })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// What a subcommand produced: the report and whether it counts as success.
struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn success(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let limits = match cli.max_dim {
        Some(cap) => SimLimits::with_max_dim(cap),
        None => SimLimits::default(),
    };
    let limits_json = json!({
        "max_state_dim": limits.max_state_dim,
        "max_density_dim": limits.max_density_dim,
    });
    match &cli.command {
        Command::Verify(p) => {
            let lp = load_pair(&p.pair)?;
            let s = lp.pair.summary();
            eprintln!("pair {}: field {} n={} k1={} k2={} k={}", lp.label, s.field, s.n, s.k1, s.k2, s.k);
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            Ok(Outcome::success(json!({
                "command": "verify",
                "config": { "pair": lp.label },
                "result": to_value(&s),
            })))
        }
        Command::Expand { pair, out, name } => {
            let lp = load_pair(&pair.pair)?;
            let expanded = expand_pair(&lp.pair)?;
            let stem = Path::new(&lp.label).file_stem().and_then(|s| s.to_str()).unwrap_or("pair");
            let name = name.clone().unwrap_or_else(|| format!("{stem}-expanded"));
            let manifest = PairManifest::write_bundle(out, &name, &expanded)?;
            let (a, b) = (lp.pair.summary(), expanded.summary());
            eprintln!(
                "expanded {} (n={} k={} over {}) to n={} k={} over {}; wrote {}",
                lp.label,
                a.n,
                a.k,
                a.field,
                b.n,
                b.k,
                b.field,
                manifest.display()
            );
            Ok(Outcome::success(json!({
                "command": "expand",
                "config": { "pair": lp.label, "out": out, "name": name },
                "result": { "manifest": manifest, "source": to_value(&a), "expanded": to_value(&b) },
            })))
        }
        Command::EncodeDemo { pair, message, channel, seed } => {
            let lp = load_pair(&pair.pair)?;
            encode_demo(&lp, *message, channel, *seed, limits).map(|r| {
                Outcome::success(json!({
                    "command": "encode-demo",
                    "config": {
                        "pair": lp.label,
                        "message": message,
                        "channel": channel.to_string(),
                        "seed": seed,
                        "limits": limits_json,
                    },
                    "result": r,
                }))
            })
        }
        Command::Simulate { pair, channel, trials, seed } => {
            let lp = load_pair(&pair.pair)?;
            let s = SchemeInstance::new(&lp.pair)?.with_limits(limits);
            let ch = channel.to_channel(lp.pair.field(), lp.pair.n())?;
            let r = simulate(&s, &ch, *trials, *seed)?;
            eprintln!(
                "{}: {} failures in {} trials, rate {:.6} (95% CI [{:.6}, {:.6}])",
                lp.label,
                (r.error_rate * r.trials as f64).round(),
                r.trials,
                r.error_rate,
                r.ci_low,
                r.ci_high
            );
            if let Some(p) = r.p_xi_out {
                eprintln!("exact Pr(xi outside Gamma1') = {p:.6}");
            }
            Ok(Outcome::success(json!({
                "command": "simulate",
                "config": {
                    "pair": lp.label,
                    "channel": channel.to_string(),
                    "trials": trials,
                    "seed": seed,
                    "limits": limits_json,
                },
                "result": to_value(&r),
            })))
        }
        Command::Fidelity { pair, channel } => {
            let lp = load_pair(&pair.pair)?;
            let s = SchemeInstance::new(&lp.pair)?.with_limits(limits);
            let ch = channel.to_channel(lp.pair.field(), lp.pair.n())?;
            let acc = fidelity_accounting(&s, &ch)?;
            eprintln!(
                "{}: 1-F_e = {:.9}, P(K'^c) = {:.9}, Pr(xi out) + Pr(zeta out) = {:.9}",
                lp.label, acc.fidelity_gap, acc.p_enlarged_complement, acc.split_bound
            );
            Ok(Outcome::success(json!({
                "command": "fidelity",
                "config": { "pair": lp.label, "channel": channel.to_string(), "limits": limits_json },
                "result": to_value(&acc),
            })))
        }
        Command::Bounds { fidelity, n, rate, q } => {
            let b = leakage_bound(*fidelity, *n, *rate, *q)?;
            eprintln!("leakage bound: {:.6} bits (h2 = {:.6}, rate term = {:.6})", b.bits, b.h2, b.rate_term);
            Ok(Outcome::success(json!({
                "command": "bounds",
                "config": { "fidelity": fidelity, "n": n, "rate": rate, "q": q },
                "result": to_value(&b),
            })))
        }
        Command::Selftest { pairs } => {
            let names: Vec<String> = if pairs.is_empty() {
                builtin_names().into_iter().map(String::from).collect()
            } else {
                pairs.clone()
            };
            let mut results = Vec::new();
            let mut ok = true;
            for name in &names {
                let lp = load_pair(name)?;
                let r = selftest::run(&lp.pair, &limits)?;
                for c in &r {
                    eprintln!(
                        "{name:>14} {:<22} {} {}",
                        c.check,
                        if c.passed { "ok  " } else { "FAIL" },
                        c.detail
                    );
                }
                ok &= r.iter().all(|c| c.passed);
                results.push(json!({ "pair": name, "checks": to_value(&r) }));
            }
            Ok(Outcome {
                report: json!({
                    "command": "selftest",
                    "config": { "pairs": names, "limits": limits_json },
                    "result": { "passed": ok, "pairs": results },
                }),
                ok,
            })
        }
    }
}

fn encode_demo(
    lp: &LoadedPair,
    message: usize,
    channel: &ChannelSpec,
    seed: u64,
    limits: SimLimits,
) -> Result<Value, Error> {
    let pair = &lp.pair;
    let s = SchemeInstance::new(pair)?.with_limits(limits).with_seed(seed);
    let reps = s.messages().representatives();
    let v = reps.get(message).ok_or_else(|| {
        Error::DomainError(format!("message index {message} out of range 0..{}", reps.len()))
    })?;
    let ch = channel.to_channel(pair.field(), pair.n())?;
    let mut rng = s.rng();
    let (x, sent) = s.encrypt(v, &mut rng)?;
    let e = ch.sample(&mut rng);
    let received = sent.add(&e.u())?;
    let decoded = s.decrypt(&x, &received)?;
    let correct = &decoded == v;
    eprintln!("message  {v}\nkey x    {x}\nsent     {sent}\nerror    {e}\nreceived {received}");
    eprintln!("decoded  {decoded} ({})", if correct { "correct" } else { "wrong" });

    // The same error on the encoded quantum state, when it fits.
    let quantum = match CssCode::new(pair, &limits) {
        Ok(code) => {
            let z = VectorFq::zeros(pair.field(), pair.n());
            let phi = code.encoded_state(&x, &z, v)?;
            let noisy = weyl_apply(&phi, &e)?;
            let out = code.recover(&QuantumState::Pure(noisy), &x, &z)?;
            let f = out.fidelity_with(&phi)?;
            eprintln!("quantum recovery fidelity {f:.12}");
            json!({ "recovery_fidelity": f })
        }
        Err(Error::TooLarge { .. }) => Value::Null,
        Err(err) => return Err(err),
    };
    Ok(json!({
        "message": v.to_string(),
        "x": x.to_string(),
        "sent": sent.to_string(),
        "error": e.to_string(),
        "received": received.to_string(),
        "decoded": decoded.to_string(),
        "correct": correct,
        "quantum": quantum,
    }))
}

fn emit(sink: Option<&Path>, doc: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON value serializes");
    text.push('\n');
    match sink {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match run(&cli) {
        Ok(o) => (o.report, if o.ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            (json!({ "kind": e.kind(), "message": e.to_string() }), 1)
        }
    };
    if let Err(e) = emit(cli.json.as_deref(), &doc) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
