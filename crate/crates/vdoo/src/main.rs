// SPDX-License-Identifier: Apache-2.0 OR MIT

//! `vdoo`: key generation, signing, verification, cost estimation and
//! object inspection.
//!
//! Exit codes: 0 success or ACCEPT, 1 REJECT, 2 usage or malformed input,
//! 3 I/O failure.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use vdoo::codec::{self, ObjectKind, SecretKeyForm};
use vdoo::files::{digest_path, read_object, write_object, write_output};
use vdoo::Error;
use vdoo_core::estimator::{
    intersection_cost, kipnis_shamir_implied_exponent, security_summary, AttackCost, EstimatorOptions,
    IntersectionModel, MINRANK_B_RANGE,
};
use vdoo_core::keypair::SEED_LEN;
use vdoo_core::signer::{sign_digest, verify_digest};
use vdoo_core::{expected_sizes, keygen, KeygenMode, SecurityLevel, VdooParams};

const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "vdoo", version, about = "VDOO multivariate signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Sign a message.
    Sign(SignArgs),
    /// Verify a signature; prints ACCEPT or REJECT.
    Verify(VerifyArgs),
    /// Estimate attack costs for a parameter set.
    Estimate(EstimateArgs),
    /// Describe an encoded key or signature.
    Inspect(InspectArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ParamsChoice {
    /// Named security level.
    #[arg(long, value_parser = parse_level)]
    level: Option<SecurityLevel>,
    /// Custom tuple `q,v,d,o1,o2`.
    #[arg(long, value_name = "Q,V,D,O1,O2", value_parser = parse_params)]
    params: Option<VdooParams>,
}

impl ParamsChoice {
    fn resolve(&self) -> VdooParams {
        match (self.level, self.params) {
            (Some(level), _) => level.params(),
            (None, Some(p)) => p,
            (None, None) => unreachable!("clap requires one of --level/--params"),
        }
    }
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    params: ParamsChoice,
    /// 32-byte seed as 64 hex characters; random if omitted.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<[u8; SEED_LEN]>,
    #[arg(long)]
    pk: PathBuf,
    #[arg(long)]
    sk: PathBuf,
    /// Store only the seed in the secret key file.
    #[arg(long)]
    compact_sk: bool,
    /// Zero affine offsets, giving a homogeneous public map.
    #[arg(long)]
    homogeneous: bool,
    /// Write lowercase hex instead of binary.
    #[arg(long)]
    armor: bool,
}

#[derive(Args)]
struct SignArgs {
    #[arg(long)]
    sk: PathBuf,
    /// Message file, or `-` for standard input.
    #[arg(long)]
    msg: PathBuf,
    /// Output file, or `-` for standard output.
    #[arg(long)]
    out: PathBuf,
    /// Seed for salts and vinegars (64 hex characters), for reproducible output.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<[u8; SEED_LEN]>,
    #[arg(long)]
    armor: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    pk: PathBuf,
    /// Message file, or `-` for standard input.
    #[arg(long)]
    msg: PathBuf,
    #[arg(long)]
    sig: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Default,
    PaperLiteral,
}

impl From<ModeArg> for IntersectionModel {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Default => IntersectionModel::Default,
            ModeArg::PaperLiteral => IntersectionModel::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Kv,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    params: ParamsChoice,
    /// Min-rank target rank; defaults to o2 + 1.
    #[arg(long)]
    r: Option<usize>,
    /// Min-rank search range for b, as `LO,HI`.
    #[arg(long, value_name = "LO,HI", value_parser = parse_range)]
    b_range: Option<RangeInclusive<usize>>,
    /// Intersection system model used in the summary.
    #[arg(long, value_enum, default_value = "default")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct InspectArgs {
    file: PathBuf,
}

fn parse_level(s: &str) -> Result<SecurityLevel, String> {
    s.parse::<u8>()
        .ok()
        .and_then(SecurityLevel::from_number)
        .ok_or_else(|| format!("level must be 1, 3 or 5, got {s:?}"))
}

fn parse_params(s: &str) -> Result<VdooParams, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [q, v, d, o1, o2] = parts[..] else {
        return Err(format!("expected five values q,v,d,o1,o2, got {}", parts.len()));
    };
    if [v, d, o1, o2].iter().any(|&x| x > u16::MAX as usize) {
        return Err("v, d, o1, o2 must fit in 16 bits".into());
    }
    let q = u32::try_from(q).map_err(|e| e.to_string())?;
    VdooParams::new(q, v, d, o1, o2).map_err(|e| e.to_string())
}

fn parse_seed(s: &str) -> Result<[u8; SEED_LEN], String> {
    if s.len() != 2 * SEED_LEN {
        return Err(format!("seed must be exactly {} hex characters", 2 * SEED_LEN));
    }
    let mut seed = [0u8; SEED_LEN];
    hex::decode_to_slice(s, &mut seed).map_err(|e| e.to_string())?;
    Ok(seed)
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo == 0 || lo > hi {
        return Err("need 1 <= LO <= HI".into());
    }
    Ok(lo..=hi)
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<vdoo_core::Error> for Failure {
    fn from(e: vdoo_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen(args) => cmd_keygen(args),
        Command::Sign(args) => cmd_sign(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Inspect(args) => cmd_inspect(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn level_label(params: &VdooParams) -> String {
    params.level().map_or_else(|| "custom".to_string(), |l| l.to_string())
}

fn cmd_keygen(args: KeygenArgs) -> Result<u8, Failure> {
    let params = args.params.resolve();
    for issue in params.validate() {
        eprintln!("warning: {issue}");
    }
    let seed = args.seed.unwrap_or_else(|| {
        let mut s = [0u8; SEED_LEN];
        rand::rng().fill_bytes(&mut s);
        s
    });
    let mode = if args.homogeneous {
        KeygenMode::Homogeneous
    } else {
        KeygenMode::Affine
    };
    let (pk, sk) = keygen(&params, &seed, mode)?;
    let form = if args.compact_sk {
        SecretKeyForm::Seed
    } else {
        SecretKeyForm::Full
    };
    let pk_bytes = codec::encode_public_key(&pk);
    let sk_bytes = codec::encode_secret_key(&sk, form);
    write_object(&args.pk, &pk_bytes, args.armor)?;
    write_object(&args.sk, &sk_bytes, args.armor)?;

    let sizes = expected_sizes(&params);
    println!("parameters: {params} [{}]", level_label(&params));
    println!("n = {}, m = {}", params.n(), params.m());
    println!(
        "public key: {} bytes written; payload {} bytes ({} elements, formula m(n+1)(n+2)/2)",
        pk_bytes.len(),
        codec::public_key_body_len(&params),
        sizes.public_key_elements
    );
    println!(
        "secret key: {} bytes written ({}); expanded payload {} bytes ({} elements)",
        sk_bytes.len(),
        if args.compact_sk { "seed only" } else { "full" },
        sizes.secret_key_bytes,
        sizes.secret_key_elements
    );
    println!(
        "central map: {} elements (diagonal {}, first oil {}, second oil {})",
        sizes.central_elements, sizes.diagonal_elements, sizes.first_oil_elements, sizes.second_oil_elements
    );
    println!("signature: {} bytes", sizes.signature_bytes);
    Ok(0)
}

fn cmd_sign(args: SignArgs) -> Result<u8, Failure> {
    let sk = codec::decode_secret_key(&read_object(&args.sk)?)?;
    let digest = digest_path(&args.msg)?;
    let mut rng: Box<dyn RngCore> = match args.seed {
        Some(seed) => Box::new(ChaCha20Rng::from_seed(seed)),
        None => Box::new(rand::rng()),
    };
    let sig = sign_digest(&sk, &digest, &mut *rng)?;
    let bytes = codec::encode_signature(sk.params(), &sig)?;
    write_output(&args.out, &bytes, args.armor)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let pk = codec::decode_public_key(&read_object(&args.pk)?)?;
    let (sig_params, sig) = codec::decode_signature(&read_object(&args.sig)?)?;
    let digest = digest_path(&args.msg)?;
    let accepted = sig_params == *pk.params() && verify_digest(&pk, &digest, &sig);
    if accepted {
        println!("ACCEPT");
        Ok(0)
    } else {
        println!("REJECT");
        Ok(EXIT_REJECT)
    }
}

fn model_name(model: IntersectionModel) -> &'static str {
    match model {
        IntersectionModel::Default => "default",
        IntersectionModel::PaperLiteral => "paper-literal",
    }
}

fn details(cost: &AttackCost) -> String {
    let mut parts = Vec::new();
    for (name, value) in [
        ("k", cost.guessed),
        ("d", cost.degree),
        ("b", cost.b),
        ("r", cost.r),
        ("copies", cost.copies),
    ] {
        if let Some(v) = value {
            parts.push(format!("{name}={v}"));
        }
    }
    parts.join(" ")
}

fn cmd_estimate(args: EstimateArgs) -> Result<u8, Failure> {
    let params = args.params.resolve();
    let model: IntersectionModel = args.mode.into();
    let options = EstimatorOptions {
        r: args.r,
        b_range: args.b_range.unwrap_or(MINRANK_B_RANGE),
        intersection: model,
    };
    let summary = security_summary(&params, &options);
    let other_model = match model {
        IntersectionModel::Default => IntersectionModel::PaperLiteral,
        IntersectionModel::PaperLiteral => IntersectionModel::Default,
    };
    let other = intersection_cost(&params, other_model);
    let ks_classical = summary
        .attacks
        .iter()
        .find(|a| a.attack == vdoo_core::estimator::Attack::KipnisShamir && !a.quantum);

    let flavour = |c: &AttackCost| if c.quantum { "quantum" } else { "classical" };
    match args.format {
        FormatArg::Text => {
            println!(
                "parameters: {params} [{}], n = {}, m = {}",
                level_label(&params),
                params.n(),
                params.m()
            );
            println!("gates per field multiplication: {}", summary.gates_per_mul);
            println!(
                "{:<28} {:<10} {:>12} {:>12}  details",
                "attack", "model", "log2(mults)", "log2(gates)"
            );
            for c in &summary.attacks {
                let name = if c.attack == vdoo_core::estimator::Attack::Intersection {
                    format!("{}[{}]", c.attack, model_name(model))
                } else {
                    c.attack.to_string()
                };
                println!(
                    "{:<28} {:<10} {:>12.2} {:>12.2}  {}",
                    name,
                    flavour(c),
                    c.log2_field_mults,
                    c.log2_gates,
                    details(c)
                );
            }
            match &other {
                Ok(c) => println!(
                    "{:<28} {:<10} {:>12.2} {:>12.2}  {} (not in summary)",
                    format!("intersection[{}]", model_name(other_model)),
                    flavour(c),
                    c.log2_field_mults,
                    c.log2_gates,
                    details(c)
                ),
                Err(e) => println!("intersection[{}]: {e}", model_name(other_model)),
            }
            for (attack, e) in &summary.skipped {
                println!("{attack}: not costed ({e})");
            }
            if let Some(w) = summary.weakest() {
                println!("weakest: {} ({}) at 2^{:.2} gates", w.attack, flavour(w), w.log2_gates);
            }
            for level in SecurityLevel::ALL {
                println!(
                    "{level} gate threshold 2^{}: {}",
                    level.gate_threshold_log2(),
                    if summary.meets(level) { "met" } else { "not met" }
                );
            }
            if let Some(ks) = ks_classical {
                let e = kipnis_shamir_implied_exponent(&params, ks.log2_field_mults);
                println!("kipnis-shamir exponent of q: {e:.2}");
            }
        }
        FormatArg::Kv => {
            println!(
                "params={},{},{},{},{}",
                params.q(),
                params.v(),
                params.d(),
                params.o1(),
                params.o2()
            );
            println!("level={}", level_label(&params));
            println!("gates_per_mul={}", summary.gates_per_mul);
            for c in &summary.attacks {
                let key = format!("{}.{}", c.attack, flavour(c));
                println!("{key}.log2_mults={:.4}", c.log2_field_mults);
                println!("{key}.log2_gates={:.4}", c.log2_gates);
                for (name, value) in [
                    ("k", c.guessed),
                    ("d", c.degree),
                    ("b", c.b),
                    ("r", c.r),
                    ("copies", c.copies),
                ] {
                    if let Some(v) = value {
                        println!("{key}.{name}={v}");
                    }
                }
            }
            if let Ok(c) = &other {
                println!(
                    "intersection.{}.log2_mults={:.4}",
                    model_name(other_model),
                    c.log2_field_mults
                );
                println!(
                    "intersection.{}.log2_gates={:.4}",
                    model_name(other_model),
                    c.log2_gates
                );
            }
            if let Some(w) = summary.weakest() {
                println!("weakest={}.{}", w.attack, flavour(w));
                println!("weakest.log2_gates={:.4}", w.log2_gates);
            }
            for level in SecurityLevel::ALL {
                println!("meets.{}={}", level.number(), summary.meets(level));
            }
        }
    }
    Ok(0)
}

fn cmd_inspect(args: InspectArgs) -> Result<u8, Failure> {
    let bytes = read_object(&args.file)?;
    let desc = codec::describe(&bytes)?;
    let params = desc.header.params;
    println!("kind: {}", desc.header.kind.name());
    println!("format version: {}", desc.header.version);
    println!("parameters: {params} [{}]", level_label(&params));
    println!("n = {}, m = {}", params.n(), params.m());
    if let Some(form) = desc.secret_form {
        println!(
            "secret key form: {}",
            match form {
                SecretKeyForm::Full => "full",
                SecretKeyForm::Seed => "seed",
            }
        );
    }
    println!("header: {} bytes", desc.header.encoded_len());
    println!("body: {} bytes (expected {})", desc.body_len, desc.expected_body_len);
    if desc.body_len != desc.expected_body_len {
        return Err(Failure::Usage("body length does not match parameters".into()));
    }
    if desc.header.kind == ObjectKind::Signature {
        println!("salt: {}", hex::encode(&bytes[bytes.len() - vdoo_core::SALT_LEN..]));
    }
    Ok(0)
}
