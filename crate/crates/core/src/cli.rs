//! Command-line front end. Exit codes: 0 ok, 1 domain error (JSON on
//! stderr), 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fieldlink;
use crate::gfield::FieldSpec;
use crate::linalg::Subspace;
use crate::modcore::{self, GModule, Tag};
use crate::recog::{self, Certificate};
use crate::selftest;
use crate::tordec;
use crate::unifilt::{self, Irreducibility};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    r.map_err(|e| format!("bad seed {s:?}: {e}"))
}

fn parse_poly(s: &str) -> Result<Vec<u32>, String> {
    s.split(',').map(|c| c.trim().parse::<u32>().map_err(|e| format!("bad coefficient {c:?}: {e}"))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleType {
    Nat,
    Sym2,
    Sym3,
    Twist,
}

impl ModuleType {
    fn tag(self) -> Tag {
        match self {
            ModuleType::Nat => Tag::Nat,
            ModuleType::Sym2 => Tag::Sym2,
            ModuleType::Sym3 => Tag::Sym3,
            ModuleType::Twist => Tag::TwistTensor,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sl2recog", version, about = "Build and recognize small SL2(GF(p^m))-modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a canonical module, optionally scrambled by a random change of basis.
    Construct {
        #[arg(long = "type", value_enum)]
        kind: ModuleType,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Ascending comma-separated coefficients, monic.
        #[arg(long, value_parser = parse_poly)]
        poly: Option<Vec<u32>>,
        #[arg(long)]
        twist_power: Option<usize>,
        /// Seed of the change of basis.
        #[arg(long, value_parser = parse_seed)]
        scramble: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Filtration, irreducibility and, with --torus, the torus decomposition.
    Analyze {
        module: PathBuf,
        #[arg(long)]
        torus: bool,
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
    },
    /// Recognize a module and print its certificate.
    Recognize {
        module: PathBuf,
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against a module.
    Verify { module: PathBuf, certificate: PathBuf },
    /// Field-link report for a bi-additive commutation map.
    Fields {
        module: PathBuf,
        descriptor: PathBuf,
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest {
        #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
        seed: u64,
        /// Comma-separated criterion numbers; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<usize>>,
    },
}

/// Selects the subquotients for `fields`: either a filtration layer j, for
/// U x Z_j/Z_{j-1} -> Z_{j-1}/Z_{j-2}, or explicit spans.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    #[serde(default)]
    pub layer: Option<usize>,
    #[serde(default)]
    pub source: Option<Span>,
    #[serde(default)]
    pub target: Option<Span>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub top: Vec<Vec<u32>>,
    #[serde(default)]
    pub bottom: Vec<Vec<u32>>,
}

enum Failure {
    Domain(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(json!({"error": e.kind(), "message": e.to_string()}))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Domain(json!({"error": "Io", "message": format!("{}: {e}", path.display())}))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write_file(path: &Path, s: &str) -> Result<(), Failure> {
    std::fs::write(path, s).map_err(|e| io_error(path, e))
}

fn load_module(path: &Path) -> Result<GModule, Failure> {
    Ok(GModule::from_json(&read(path)?)?)
}

/// Runs the CLI on `args` (program name first), writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Domain(v)) => {
            let _ = writeln!(err, "{v}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let emit = |out: &mut dyn Write, s: &str| -> Result<(), Failure> {
        writeln!(out, "{s}").map_err(|e| io_error(Path::new("<stdout>"), e))
    };
    match cmd {
        Command::Construct { kind, p, m, poly, twist_power, scramble, out: path } => {
            let spec = match poly {
                Some(f) => FieldSpec::new(p, m, f)?,
                None => FieldSpec::default_for(p, m)?,
            };
            let tag = kind.tag();
            let chi = match tag {
                Tag::TwistTensor => Some(twist_power.unwrap_or(1)),
                _ => None,
            };
            let base = modcore::canonical(&spec, tag, chi)?;
            let module = match scramble {
                Some(s) => modcore::scramble(&base, s),
                None => base,
            };
            let meta = json!({
                "type": tag.name(),
                "twist_power": chi,
                "scramble_seed": scramble,
            });
            let text = module.to_json(Some(meta));
            match path {
                Some(p) => write_file(&p, &text)?,
                None => emit(out, &text)?,
            }
            Ok(0)
        }
        Command::Analyze { module, torus, seed } => {
            let m = load_module(&module)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rel = modcore::check_relations(&m);
            let mut v = json!({ "relation_failures": rel.failures() });
            match unifilt::compute_filtration(&m) {
                Ok(f) => {
                    v["filtration_dims"] = json!(f.dims());
                    v["length"] = json!(f.length());
                }
                Err(e) => v["filtration_error"] = json!(e.kind()),
            }
            v["irreducibility"] = match unifilt::is_irreducible(&m, &mut rng) {
                Irreducibility::Irreducible => json!("irreducible"),
                Irreducibility::Reducible(w) => json!({"reducible": w}),
                Irreducibility::Undecided => json!("undecided"),
            };
            if torus {
                v["torus"] = match tordec::t_minimal_summands(&m, &mut rng) {
                    Ok(d) => json!(d),
                    Err(e) => json!({"error": e.kind(), "message": e.to_string()}),
                };
            }
            emit(out, &v.to_string())?;
            Ok(0)
        }
        Command::Recognize { module, seed, out: path } => {
            let m = load_module(&module)?;
            match recog::recognize(&m, seed) {
                Ok(cert) => {
                    let text = cert.to_json();
                    if let Some(p) = path {
                        write_file(&p, &text)?;
                    }
                    emit(out, &text)?;
                    Ok(0)
                }
                Err(rej) => Err(Failure::Domain(rej.to_json_value())),
            }
        }
        Command::Verify { module, certificate } => {
            let m = load_module(&module)?;
            let cert = Certificate::from_json(&read(&certificate)?)?;
            let report = recog::verify_certificate(&m, &cert);
            let v = json!({
                "passed": report.passed(),
                "checks": report.checks.iter().map(|(n, ok)| json!({"name": n, "passed": ok})).collect::<Vec<_>>(),
            });
            emit(out, &v.to_string())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Fields { module, descriptor, seed } => {
            let m = load_module(&module)?;
            let desc: Descriptor =
                serde_json::from_str(&read(&descriptor)?).map_err(|e| Error::Parse(e.to_string()))?;
            let cert = recog::recognize(&m, seed).map_err(|r| Failure::Domain(r.to_json_value()))?;
            let scalars = cert.scalar_matrices(m.p(), m.dim)?;
            let map = match (desc.layer, desc.source, desc.target) {
                (Some(j), None, None) => fieldlink::commutator_map(&m, j, &scalars)?,
                (None, Some(s), Some(t)) => {
                    let span = |v: &[Vec<u32>]| -> Result<Subspace, Failure> {
                        if v.iter().any(|x| x.len() != m.dim || x.iter().any(|&c| c >= m.p())) {
                            return Err(Error::Parse("span vectors must have module length and entries below p".into()).into());
                        }
                        Ok(Subspace::span(m.p(), m.dim, v))
                    };
                    let (st, sb, tt, tb) = (span(&s.top)?, span(&s.bottom)?, span(&t.top)?, span(&t.bottom)?);
                    fieldlink::subquotient_map(&m, (&st, &sb), (&tt, &tb), &scalars)?
                }
                _ => return Err(Error::Parse("descriptor needs either \"layer\" or both \"source\" and \"target\"".into()).into()),
            };
            let report = fieldlink::three_fields_link(&map)?;
            emit(out, &serde_json::to_string(&report).expect("report serializes"))?;
            Ok(0)
        }
        Command::Selftest { seed, criteria } => {
            let which = criteria.unwrap_or_else(|| (1..=7).collect());
            if let Some(bad) = which.iter().find(|&&c| !(1..=7).contains(&c)) {
                return Err(Error::Parse(format!("no criterion {bad}")).into());
            }
            let results = selftest::run(seed, &which);
            let _ = out.write_all(selftest::render_table(&results).as_bytes());
            Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
        }
    }
}
