use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsid_core::bijections::{self, audit_bijection, BijectionBox};
use qsid_core::identities::{run_case, IdentityCase, Mode, RationalAssignment, Status};
use qsid_core::par;
use qsid_core::partitions::{enumerate, ConstraintSet, LengthBound, Partition};
use qsid_core::rational::parse_rational;
use qsid_core::{Monomial, Rational, TruncationProfile};

mod sides;

#[derive(Parser)]
#[command(name = "qsid", version, about = "Exact checks of symmetric q-series identities and their partition bijection")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compare both sides of an identity coefficient by coefficient.
    Verify(VerifyArgs),
    /// Audit sigma∘gamma on the box (j, M).
    Audit(AuditArgs),
    /// List partitions satisfying constraints.
    Enumerate(EnumerateArgs),
    /// Apply gamma, its inverse, sigma, or sigma∘gamma to one partition.
    Map(MapArgs),
    /// Print one coefficient of an identity side.
    Coeff(CoeffArgs),
}

#[derive(Args, Clone)]
struct Caps {
    #[arg(long, default_value_t = 24)]
    qmax: u32,
    #[arg(long, default_value_t = 8)]
    amax: u32,
    #[arg(long, default_value_t = 8)]
    bmax: u32,
    #[arg(long, default_value_t = 8)]
    tmax: u32,
}

impl Caps {
    fn profile(&self) -> TruncationProfile {
        TruncationProfile::new(self.amax, self.bmax, self.tmax, self.qmax)
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Case name, e.g. thm1_1, f_sym, eq3_1, qps_2_1, eq2_2, eq2_3, chain_fine, thm3_4.
    #[arg(long)]
    identity: String,
    /// formal or rational; defaults to the case's first supported mode.
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    caps: Caps,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long = "N", visible_alias = "n")]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long)]
    k2: Option<u32>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    j: u32,
    #[arg(long = "M", visible_alias = "m")]
    m: u32,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, conflicts_with_all = ["min_weight", "max_weight"])]
    weight: Option<u64>,
    #[arg(long)]
    min_weight: Option<u64>,
    #[arg(long)]
    max_weight: Option<u64>,
    #[arg(long)]
    min_part: Option<u32>,
    #[arg(long)]
    max_part: Option<u32>,
    /// Exact number of parts.
    #[arg(long, conflicts_with = "max_length")]
    length: Option<usize>,
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    odd_distinct: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MapOp {
    Gamma,
    GammaInverse,
    Sigma,
    GammaSigma,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long, value_enum)]
    op: MapOp,
    #[arg(long = "M", visible_alias = "m")]
    m: Option<u32>,
    #[arg(long)]
    j: Option<u32>,
    /// Comma-separated parts, e.g. "20,13,12,12,10"; "" is the empty partition.
    #[arg(long, allow_hyphen_values = true)]
    partition: String,
}

#[derive(Args)]
struct CoeffArgs {
    /// identity:side, e.g. thm1_1:left, eq3_1:right, f_sym:left, thm3_5:left.
    #[arg(long)]
    side: String,
    /// Exponent tokens, e.g. a1b1t1q2; omitted variables have exponent 0.
    #[arg(long)]
    monomial: String,
    #[command(flatten)]
    caps: Caps,
}

/// A failure before any mathematics ran; exits with code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<(String, ExitCode), UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = par::with_threads(cli.threads, || match cli.command {
        Command::Verify(a) => cmd_verify(a, format),
        Command::Audit(a) => cmd_audit(a, format),
        Command::Enumerate(a) => cmd_enumerate(a, format),
        Command::Map(a) => cmd_map(a, format),
        Command::Coeff(a) => cmd_coeff(a, format),
    });
    match result {
        Ok((text, code)) => match &cli.output {
            Some(path) => match fs::write(path, text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(2)
                }
            },
            None => {
                print!("{text}");
                code
            }
        },
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn render<T: Serialize + std::fmt::Display>(value: &T, format: Format) -> Result<String, UsageError> {
    Ok(match format {
        Format::Text => format!("{value}\n"),
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
    })
}

fn rational_arg(name: &str, v: &Option<String>) -> Result<Option<Rational>, UsageError> {
    v.as_deref()
        .map(|s| parse_rational(s).map_err(|e| UsageError(format!("--{name}: {e}"))))
        .transpose()
}

fn cmd_verify(a: VerifyArgs, format: Format) -> CmdResult {
    let case: IdentityCase = a.identity.parse()?;
    let mode = match &a.mode {
        Some(m) => m.parse::<Mode>()?,
        None => case.default_mode(),
    };
    let assignment = RationalAssignment {
        a: rational_arg("a", &a.a)?,
        b: rational_arg("b", &a.b)?,
        c: rational_arg("c", &a.c)?,
        t: rational_arg("t", &a.t)?,
        alpha: rational_arg("alpha", &a.alpha)?,
        beta: rational_arg("beta", &a.beta)?,
        n: a.n,
        k1: a.k1,
        k2: a.k2,
    };
    let report = run_case(case, mode, a.caps.profile(), &assignment)?;
    let code = match report.status {
        Status::Verified => ExitCode::SUCCESS,
        Status::Mismatch => ExitCode::from(1),
        Status::Error => ExitCode::from(2),
    };
    Ok((render(&report, format)?, code))
}

fn cmd_audit(a: AuditArgs, format: Format) -> CmdResult {
    let bx = BijectionBox::new(a.j, a.m)?;
    let report = audit_bijection(bx)?;
    let gate = [
        report.weight_preserved,
        report.odd_count_preserved,
        report.codomain_membership,
        report.statistic_exchange,
        report.gamma_inverse_roundtrip,
        report.sigma_involution,
    ]
    .iter()
    .all(|c| c.all_pass())
        && report.exact_variant.equal;
    let code = if gate { ExitCode::SUCCESS } else { ExitCode::from(1) };
    Ok((render(&report, format)?, code))
}

fn cmd_enumerate(a: EnumerateArgs, format: Format) -> CmdResult {
    let mut c = ConstraintSet::new();
    if let Some(w) = a.weight {
        c = c.weight(w);
    }
    c.min_weight = c.min_weight.or(a.min_weight);
    c.max_weight = c.max_weight.or(a.max_weight);
    c.min_part = a.min_part;
    c.max_part = a.max_part;
    c.length = a
        .length
        .map(LengthBound::Exact)
        .or(a.max_length.map(LengthBound::AtMost));
    c.odd_distinct = a.odd_distinct;
    let list = enumerate(&c)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&list)? + "\n",
        Format::Text => list
            .iter()
            .map(|p| if p.is_empty() { "(empty)".to_string() } else { p.to_string() } + "\n")
            .collect(),
    };
    Ok((text, ExitCode::SUCCESS))
}

#[derive(Serialize)]
struct Stats {
    weight: u64,
    odd_parts: usize,
    length: usize,
    largest: u32,
}

impl Stats {
    fn of(p: &Partition) -> Self {
        Stats {
            weight: p.weight(),
            odd_parts: p.odd_count(),
            length: p.len(),
            largest: p.largest().unwrap_or(0),
        }
    }
}

#[derive(Serialize)]
struct MapOutput {
    op: MapOp,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<u32>,
    input: Partition,
    output: Partition,
    input_stats: Stats,
    output_stats: Stats,
}

impl std::fmt::Display for MapOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (i, o) = (&self.input_stats, &self.output_stats);
        writeln!(f, "{}", self.output)?;
        write!(
            f,
            "weight {} -> {}, odd parts {} -> {}, length {} -> {}, largest {} -> {}",
            i.weight, o.weight, i.odd_parts, o.odd_parts, i.length, o.length, i.largest, o.largest
        )
    }
}

fn cmd_map(a: MapArgs, format: Format) -> CmdResult {
    let input: Partition = a.partition.parse()?;
    let need_m = || a.m.ok_or_else(|| UsageError("--M is required for this --op".into()));
    let output = match a.op {
        MapOp::Gamma => bijections::gamma(&input, need_m()?)?,
        MapOp::GammaSigma => bijections::sigma_gamma(&input, need_m()?)?,
        MapOp::Sigma => bijections::two_modular_conjugate(&input)?,
        MapOp::GammaInverse => {
            let j = a.j.ok_or_else(|| UsageError("--j is required for --op gamma-inverse".into()))?;
            bijections::gamma_inverse(&input, j, need_m()?)?
        }
    };
    let out = MapOutput {
        op: a.op,
        m: a.m,
        j: a.j,
        input_stats: Stats::of(&input),
        output_stats: Stats::of(&output),
        input,
        output,
    };
    Ok((render(&out, format)?, ExitCode::SUCCESS))
}

#[derive(Serialize)]
struct CoeffOutput {
    side: String,
    monomial: Monomial,
    #[serde(with = "qsid_core::rational::as_string")]
    value: Rational,
}

impl std::fmt::Display for CoeffOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn cmd_coeff(a: CoeffArgs, format: Format) -> CmdResult {
    let side: sides::SideSpec = a.side.parse()?;
    let mono: Monomial = a.monomial.parse()?;
    let caps = a.caps.profile();
    if !caps.contains(&mono) {
        return Err(UsageError(format!(
            "monomial {mono} lies outside the caps {caps}"
        )));
    }
    let value = sides::coefficient(side, &mono)?;
    let out = CoeffOutput {
        side: a.side,
        monomial: mono,
        value,
    };
    Ok((render(&out, format)?, ExitCode::SUCCESS))
}
