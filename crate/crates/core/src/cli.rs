//! Command-line front end. Reports are JSON objects with sorted keys, or a
//! line-oriented text rendering of the same data.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{span, FVector, FieldSpec};
use crate::counting::{brute_force_conjecture, conjecture_counts, CountingError};
use crate::mub::certify_weak_umub;
use crate::pauli::{class_from_generator, generator_from_class, PauliError, PauliOp};
use crate::polar::{PolarError, PolarSpace};
use crate::spread::{
    check_regularity, classify_iso, complete_tu, construct_sr, construct_symplectic_spread,
    construct_tu, find_u_set, is_complete, search_maximal, size_histogram, sr_size,
    sr_size_as_published, unextendible_from_u_set, PartialSpread, SearchMode, SpreadError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CLAIM_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Spread(#[from] SpreadError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed input: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "polarmub", version, about = "Partial spreads of symplectic polar spaces and unextendible Pauli-class MUBs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Prime order of the base field.
    #[arg(long)]
    pub d: u32,
    /// Rank: the space is W(2N-1, d).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Seed for sampled spot checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Include wall-clock time (makes output run-dependent).
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Classical,
    Tu,
    Sr,
    Uset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Complete,
    Regularity,
    ClassRoundtrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    FirstOfSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpreadSource {
    Classical,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Build a partial spread.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Method,
        /// Number of extra partner pairs for `sr` (0 ..= (d-3)/2).
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Off-spread line for `tu`; defaults to the lowest-index one.
        #[arg(long)]
        u: Option<usize>,
        /// For `uset`, skip carriers whose meeting set covers extra generators.
        #[arg(long)]
        no_extra_coverage: bool,
    },
    /// Check a property of a spread file, or of the classical spread.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        check: Check,
        /// Spread file (JSON or text); defaults to the classical spread.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Generators sampled by `class-roundtrip` when the catalog is large.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Enumerate complete partial spreads.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Exact counting test of the covered-generator conjecture.
    Conjecture {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        brute_force: bool,
    },
    /// Isomorphism classes of complete partial spreads of W(3, 2).
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Weakly-unextendible MUB certificate for a partial spread.
    Mub {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, conflicts_with = "from_file")]
        from_spread: Option<SpreadSource>,
        #[arg(long)]
        from_file: Option<PathBuf>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Construct { common, .. }
            | Command::Verify { common, .. }
            | Command::Search { common, .. }
            | Command::Conjecture { common, .. }
            | Command::Classify { common }
            | Command::Mub { common, .. } => common,
        }
    }
}

/// Spread data as stored on disk: generator bases, independent of any
/// catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadFile {
    pub d: u32,
    pub n: usize,
    pub generators: Vec<Vec<Vec<u8>>>,
}

impl SpreadFile {
    pub fn from_partial_spread(ps: &PartialSpread<'_>) -> Self {
        SpreadFile { d: ps.space().d() as u32, n: ps.space().n(), generators: ps.to_bases() }
    }

    pub fn to_partial_spread<'a>(&self, space: &'a PolarSpace) -> Result<PartialSpread<'a>, CliError> {
        if (self.d, self.n) != (space.d() as u32, space.n()) {
            return Err(CliError::Parse(format!(
                "file is for d={} n={}, expected d={} n={}",
                self.d,
                self.n,
                space.d(),
                space.n()
            )));
        }
        let spec = space.spec();
        let mut members = Vec::with_capacity(self.generators.len());
        for rows in &self.generators {
            if rows.iter().any(|r| r.len() != space.dim() || r.iter().any(|&x| x as u32 >= self.d)) {
                return Err(CliError::Parse("generator row has wrong length or digit".into()));
            }
            let vectors: Vec<FVector> = rows.iter().map(|r| FVector::new(r.clone(), spec)).collect();
            let basis = span(space.dim(), &vectors, spec);
            let idx = space
                .generator_index(&basis)
                .ok_or_else(|| CliError::Parse(format!("{rows:?} is not a generator")))?;
            members.push(idx);
        }
        Ok(PartialSpread::new(space, members)?)
    }
}

pub fn serialize_spread(ps: &PartialSpread<'_>, format: Format) -> String {
    let file = SpreadFile::from_partial_spread(ps);
    match format {
        Format::Json => serde_json::to_string(&file).expect("plain data serializes"),
        Format::Text => spread_text(&file),
    }
}

fn spread_text(file: &SpreadFile) -> String {
    let mut out = format!("# d={} n={}\n", file.d, file.n);
    for g in &file.generators {
        let rows: Vec<String> = g
            .iter()
            .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(","))
            .collect();
        out.push_str(&rows.join("|"));
        out.push('\n');
    }
    out
}

/// Parses either serialization of [`serialize_spread`].
pub fn deserialize_spread(input: &str) -> Result<SpreadFile, CliError> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::Parse(e.to_string()));
    }
    let mut lines = trimmed.lines();
    let header = lines.next().ok_or_else(|| CliError::Parse("empty input".into()))?;
    let mut d = None;
    let mut n = None;
    for field in header.trim_start_matches('#').split_whitespace() {
        match field.split_once('=') {
            Some(("d", v)) => d = v.parse().ok(),
            Some(("n", v)) => n = v.parse().ok(),
            _ => return Err(CliError::Parse(format!("bad header field {field:?}"))),
        }
    }
    let (Some(d), Some(n)) = (d, n) else {
        return Err(CliError::Parse("header needs d= and n=".into()));
    };
    let mut generators = Vec::new();
    for line in lines.map(str::trim).filter(|l| !l.is_empty()) {
        let rows = line
            .split('|')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<u8>().map_err(|e| CliError::Parse(e.to_string())))
                    .collect::<Result<Vec<u8>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        generators.push(rows);
    }
    Ok(SpreadFile { d, n, generators })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawOp {
    a: Vec<u8>,
    b: Vec<u8>,
    phase_exp: u8,
}

pub fn serialize_pauli_ops(ops: &[PauliOp]) -> String {
    let raw: Vec<RawOp> = ops
        .iter()
        .map(|op| RawOp {
            a: op.a.coords().to_vec(),
            b: op.b.coords().to_vec(),
            phase_exp: op.phase_exp,
        })
        .collect();
    serde_json::to_string(&raw).expect("plain data serializes")
}

pub fn deserialize_pauli_ops(input: &str, spec: &FieldSpec) -> Result<Vec<PauliOp>, CliError> {
    let raw: Vec<RawOp> = serde_json::from_str(input).map_err(|e| CliError::Parse(e.to_string()))?;
    raw.into_iter()
        .map(|r| PauliOp::new(r.a, r.b, r.phase_exp, spec).map_err(CliError::from))
        .collect()
}

/// Outcome of a command: the payload and whether every certificate held.
pub struct Outcome {
    pub result: Value,
    pub claims_hold: bool,
}

fn spread_json(ps: &PartialSpread<'_>) -> Value {
    json!({
        "d": ps.space().d(),
        "n": ps.space().n(),
        "generators": ps.to_bases(),
        "members": ps.members(),
        "size": ps.len(),
    })
}

fn load_space(common: &Common) -> Result<PolarSpace, CliError> {
    if common.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(PolarSpace::new(common.d, common.n)?)
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

/// Executes a parsed command.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Construct { common, method, k, u, no_extra_coverage } => {
            let space = load_space(common)?;
            let s = construct_symplectic_spread(&space)?;
            match method {
                Method::Classical => {
                    let cert = is_complete(&s);
                    Ok(Outcome {
                        result: json!({
                            "method": "classical",
                            "spread": spread_json(&s),
                            "completeness": cert,
                            "regular": check_regularity(&s)?,
                        }),
                        claims_hold: cert.complete,
                    })
                }
                Method::Tu => {
                    let u = match u {
                        Some(u) => {
                            if *u >= space.num_generators()? {
                                return Err(CliError::Usage(format!("--u {u} is out of range")));
                            }
                            *u
                        }
                        None => (0..space.num_generators()?)
                            .find(|g| !s.contains(*g))
                            .ok_or_else(|| CliError::Usage("every generator is in the spread".into()))?,
                    };
                    let tu = construct_tu(&s, space.generator(u))?;
                    let done = complete_tu(&tu);
                    Ok(Outcome {
                        result: json!({
                            "method": "tu",
                            "u": u,
                            "tu_size": tu.len(),
                            "candidates": done.candidates,
                            "spread": spread_json(&done.partial_spread),
                            "completeness": done.cert,
                        }),
                        claims_hold: done.cert.complete,
                    })
                }
                Method::Sr => {
                    let (l, m) = (s.members()[0], s.members()[1]);
                    let built = construct_sr(&s, l, m, *k)?;
                    let cert = is_complete(&built.partial_spread);
                    let d = space.d() as usize;
                    Ok(Outcome {
                        result: json!({
                            "method": "sr",
                            "k": k,
                            "l": l,
                            "m": m,
                            "pairs": built.pairs,
                            "removed": built.removed,
                            "added": built.added,
                            "expected_size": sr_size(d, *k),
                            "published_size": sr_size_as_published(d, *k),
                            "spread": spread_json(&built.partial_spread),
                            "completeness": cert,
                        }),
                        claims_hold: cert.complete,
                    })
                }
                Method::Uset => {
                    let (u, report) = find_u_set(&s, *no_extra_coverage)?;
                    let out = unextendible_from_u_set(&s, &u)?;
                    Ok(Outcome {
                        result: json!({
                            "method": "uset",
                            "u_set": report,
                            "base_size": out.base.len(),
                            "added": out.added,
                            "spread": spread_json(&out.completed),
                            "completeness": out.cert,
                        }),
                        claims_hold: out.cert.complete && !out.completed.is_spread(),
                    })
                }
            }
        }
        Command::Verify { common, check, input, samples } => {
            let space = load_space(common)?;
            let load = || -> Result<PartialSpread<'_>, CliError> {
                match input {
                    Some(path) => deserialize_spread(&read_file(path)?)?.to_partial_spread(&space),
                    None => Ok(construct_symplectic_spread(&space)?),
                }
            };
            match check {
                Check::Complete => {
                    let s = load()?;
                    let cert = is_complete(&s);
                    Ok(Outcome {
                        result: json!({"check": "complete", "spread": spread_json(&s), "completeness": cert}),
                        claims_hold: cert.complete,
                    })
                }
                Check::Regularity => {
                    let s = load()?;
                    let regular = check_regularity(&s)?;
                    Ok(Outcome {
                        result: json!({"check": "regularity", "spread": spread_json(&s), "regular": regular}),
                        claims_hold: regular,
                    })
                }
                Check::ClassRoundtrip => {
                    if !crate::algebra::is_prime(common.d) {
                        return Err(CliError::Usage(format!("--d {} must be prime", common.d)));
                    }
                    let mut idx: Vec<usize> = (0..space.num_generators()?).collect();
                    if idx.len() > *samples {
                        let mut rng = rand::rngs::StdRng::seed_from_u64(common.seed);
                        idx.shuffle(&mut rng);
                        idx.truncate(*samples);
                        idx.sort_unstable();
                    }
                    let mut failures = Vec::new();
                    for &g in &idx {
                        let class = class_from_generator(space.generator(g), &space);
                        match generator_from_class(&class, &space) {
                            Ok(back) if back.gen_index == g => {}
                            _ => failures.push(g),
                        }
                    }
                    Ok(Outcome {
                        result: json!({
                            "check": "class-roundtrip",
                            "checked": idx.len(),
                            "failures": failures,
                        }),
                        claims_hold: failures.is_empty(),
                    })
                }
            }
        }
        Command::Search { common, mode, target } => {
            let space = load_space(common)?;
            let mode = match (mode, target) {
                (Mode::Exhaustive, None) => SearchMode::Exhaustive,
                (Mode::FirstOfSize, Some(t)) => SearchMode::FirstOfSize(*t),
                (Mode::Exhaustive, Some(_)) => {
                    return Err(CliError::Usage("--target applies only to first-of-size".into()))
                }
                (Mode::FirstOfSize, None) => {
                    return Err(CliError::Usage("first-of-size needs --target".into()))
                }
            };
            let found = search_maximal(&space, mode)?;
            let histogram: serde_json::Map<String, Value> = size_histogram(&found)
                .into_iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            let listed: Vec<Value> = found.iter().map(spread_json).collect();
            let claims_hold = !(matches!(mode, SearchMode::FirstOfSize(_)) && found.is_empty());
            Ok(Outcome {
                result: json!({
                    "count": found.len(),
                    "size_histogram": histogram,
                    "partial_spreads": listed,
                }),
                claims_hold,
            })
        }
        Command::Conjecture { common, brute_force } => {
            let report = conjecture_counts(common.d, common.n)?;
            let mut result = json!({"report": report});
            if *brute_force {
                let space = load_space(common)?;
                let s = construct_symplectic_spread(&space)?;
                result["brute_force"] = json!(brute_force_conjecture(&s)?);
            }
            Ok(Outcome { result, claims_hold: true })
        }
        Command::Classify { common } => {
            let space = load_space(common)?;
            let all = search_maximal(&space, SearchMode::Exhaustive)?;
            let (spreads, partial): (Vec<_>, Vec<_>) = all.into_iter().partition(|s| s.is_spread());
            let c_partial = classify_iso(&space, &partial)?;
            let c_spreads = classify_iso(&space, &spreads)?;
            Ok(Outcome {
                result: json!({
                    "group_order": c_partial.group_order,
                    "non_spread": {
                        "count": partial.len(),
                        "sizes": size_histogram(&partial).keys().collect::<Vec<_>>(),
                        "orbits": c_partial.representatives,
                    },
                    "spreads": {"count": spreads.len(), "orbits": c_spreads.representatives},
                }),
                claims_hold: true,
            })
        }
        Command::Mub { common, from_spread, from_file } => {
            if !crate::algebra::is_prime(common.d) {
                return Err(CliError::Usage(format!("--d {} must be prime", common.d)));
            }
            let space = load_space(common)?;
            let s = match (from_spread, from_file) {
                (_, Some(path)) => deserialize_spread(&read_file(path)?)?.to_partial_spread(&space)?,
                (Some(SpreadSource::Classical), None) => construct_symplectic_spread(&space)?,
                (None, None) => {
                    return Err(CliError::Usage("give --from-spread or --from-file".into()))
                }
            };
            let cert = certify_weak_umub(&s, common.tolerance)?;
            Ok(Outcome {
                result: json!({"spread": spread_json(&s), "certificate": cert}),
                claims_hold: cert.valid,
            })
        }
    }
}

fn render_text(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                if k == "spread" {
                    if let Ok(file) = serde_json::from_value::<SpreadFile>(v.clone()) {
                        out.push_str(&format!("{key}:\n{}", spread_text(&file)));
                        continue;
                    }
                }
                render_text(v, &key, out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Runs a command and renders its report; returns the exit code and the
/// rendered text.
pub fn run(config: &RunConfig) -> (i32, String) {
    let common = config.command.common();
    let start = Instant::now();
    let outcome = execute(&config.command);
    let (code, body) = match outcome {
        Ok(o) => {
            let code = if o.claims_hold { EXIT_OK } else { EXIT_CLAIM_FAILED };
            let mut envelope = json!({
                "tool": "polarmub",
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "claims_hold": o.claims_hold,
                "result": o.result,
            });
            if common.timing {
                envelope["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            let body = match common.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&envelope).expect("value serializes");
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    render_text(&envelope, "", &mut s);
                    s
                }
            };
            (code, body)
        }
        Err(e) => return (EXIT_USAGE, format!("error: {e}\n")),
    };
    if let Some(path) = &common.out {
        if let Err(e) = fs::write(path, &body) {
            return (EXIT_USAGE, format!("error: {}: {e}\n", path.display()));
        }
        return (code, String::new());
    }
    (code, body)
}
