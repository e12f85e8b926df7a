use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use addwords::acceptance::{run_suite, SuiteConfig};
use addwords::complexity::{
    check_abelian_bounds, check_additive_bounds, observed_bounds_with, profile_word, BoundReport,
    BoundsOptions, ComplexityProfile, Verdicts,
};
use addwords::document::{parse_letter_map, parse_mu_map, parse_word, WordDocument};
use addwords::powers::{
    find_power_mod_mu, find_power_scan, find_power_vdw, find_simultaneous, PowerOutcome,
    SearchLimits,
};
use addwords::search::{
    backtrack, backtrack_from, contains_pattern, AvoidanceProblem, Checkpoint, PatternMode,
};
use addwords::words::WordSource;
use addwords::{Error, MorphismMu, MuKind};
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Additive and abelian complexity of words, and k-powers modulo additive
/// morphisms.
#[derive(Parser)]
#[command(name = "addwords", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a word.
    Generate(GenerateArgs),
    /// Value-set profile, observed constants and bound checks.
    Complexity(ComplexityArgs),
    /// Search one word for a k-power.
    FindPower(FindPowerArgs),
    /// Search several words over Z for a common additive k-power.
    Simultaneous(SimultaneousArgs),
    /// Backtracking search for words avoiding k-powers.
    Search(SearchArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Word description: a JSON file, or inline JSON starting with '{'.
    #[arg(long)]
    word: String,
    #[arg(long)]
    n: usize,
    /// `text` prints one letter per line; `json` an explicit word description.
    #[arg(long, value_enum, default_value_t = GenerateFormat::Text)]
    format: GenerateFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long)]
    word: String,
    /// Prefix length analysed.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    nmax: usize,
    /// `additive`, `abelian` or `mu:<file>` with a letter-image map.
    #[arg(long, default_value = "additive")]
    mode: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where the report goes with `--format csv` (default: stderr).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Limit the adjacent-pair scan to lengths up to this value.
    #[arg(long)]
    m1_max: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Scan,
    Vdw,
}

#[derive(Args)]
struct LimitArgs {
    /// Prefix length searched (overrides `max_prefix` in --limits).
    #[arg(long)]
    n: Option<usize>,
    /// Colouring modulus: an integer or `auto`.
    #[arg(long)]
    modulus: Option<String>,
    /// Search limits as JSON, e.g. '{"max_block": 50, "retry_cap": 4}'.
    #[arg(long)]
    limits: Option<String>,
}

#[derive(Args)]
struct FindPowerArgs {
    #[arg(long)]
    word: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "additive")]
    mode: String,
    #[arg(long, value_enum, default_value_t = Method::Scan)]
    method: Method,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimultaneousArgs {
    /// Repeat once per word.
    #[arg(long, required = true)]
    word: Vec<String>,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Comma-separated letters, e.g. `0,1,2`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    alphabet: Vec<i64>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// `additive` or `abelian`.
    #[arg(long, default_value = "additive")]
    mode: String,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Resume from this file if it exists; written when the node budget runs
    /// out and removed once the search is exhausted.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Prefixes of length 10^3.
    #[arg(long)]
    quick: bool,
    /// Replacement rules for the Dekking morphism, e.g. '{"0":[0,1],"1":[0,0,0,1]}'.
    #[arg(long)]
    dekking_rules: Option<String>,
    #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
    format: VerifyFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::RetryCapExhausted { .. } | Error::Internal(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// `Ok(false)` means a check failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Complexity(a) => complexity(a),
        Command::FindPower(a) => find_power(a),
        Command::Simultaneous(a) => simultaneous(a),
        Command::Search(a) => search(a),
        Command::Verify(a) => verify(a),
    }
}

fn load_word(arg: &str) -> anyhow::Result<WordSource> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(parse_word(&text)?)
}

fn load_mu(mode: &str, source: &WordSource) -> anyhow::Result<MorphismMu> {
    match mode {
        "additive" => Ok(MorphismMu::additive(source.alphabet())),
        "abelian" | "parikh" => Ok(MorphismMu::parikh(source.alphabet())),
        _ => {
            let path = mode.strip_prefix("mu:").ok_or_else(|| {
                anyhow!("unknown mode {mode:?}: expected additive, abelian or mu:<file>")
            })?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let mu = parse_mu_map(&text)?;
            mu.covers(source.alphabet())?;
            Ok(mu)
        }
    }
}

fn output(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> anyhow::Result<()> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn generate(a: GenerateArgs) -> anyhow::Result<bool> {
    let source = load_word(&a.word)?;
    let prefix = source.prefix(a.n)?;
    match a.format {
        GenerateFormat::Json => {
            let doc = WordDocument::Explicit {
                letters: prefix.to_letters(),
            };
            write_json(a.out.as_deref(), &doc)?;
        }
        GenerateFormat::Text => {
            let mut w = output(a.out.as_deref())?;
            for letter in prefix.letters() {
                let line: Vec<String> = letter.coords().iter().map(i64::to_string).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
            w.flush()?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct ComplexityOutput<'a> {
    profile: &'a ComplexityProfile,
    report: &'a BoundReport,
    verdicts: &'a Verdicts,
}

#[derive(Serialize)]
struct ReportOutput<'a> {
    report: &'a BoundReport,
    verdicts: &'a Verdicts,
}

fn complexity(a: ComplexityArgs) -> anyhow::Result<bool> {
    if a.n == 0 || a.nmax == 0 {
        bail!("--n and --nmax must be positive");
    }
    let source = load_word(&a.word)?;
    let mu = load_mu(&a.mode, &source)?;
    let word = source.prefix(a.n)?;
    let profile = profile_word(&word, &mu, a.nmax)?;
    let options = BoundsOptions {
        m1_max_len: a.m1_max,
    };
    let report = observed_bounds_with(&profile, &word, &mu, options)?;
    let mut verdicts = check_additive_bounds(&report);
    if mu.kind() == MuKind::Parikh {
        let abelian = check_abelian_bounds(&report)?;
        verdicts.checks.extend(abelian.checks);
        verdicts.notes.extend(abelian.notes);
    }

    match a.format {
        TableFormat::Json => write_json(
            a.out.as_deref(),
            &ComplexityOutput {
                profile: &profile,
                report: &report,
                verdicts: &verdicts,
            },
        )?,
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
            let mut header = vec!["n".to_string(), "size".to_string()];
            for j in 0..profile.dim {
                header.extend([format!("min_{j}"), format!("max_{j}"), format!("range_{j}")]);
            }
            w.write_record(&header)?;
            for row in &profile.rows {
                let mut rec = vec![row.n.to_string(), row.size().to_string()];
                for j in 0..profile.dim {
                    rec.push(row.min(j).value[j].to_string());
                    rec.push(row.max(j).value[j].to_string());
                    rec.push(row.range(j).to_string());
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
            let summary = ReportOutput {
                report: &report,
                verdicts: &verdicts,
            };
            match &a.report {
                Some(path) => write_json(Some(path), &summary)?,
                None => eprintln!("{}", serde_json::to_string_pretty(&summary)?),
            }
        }
    }
    for c in verdicts.failures() {
        eprintln!("check failed: {} ({})", c.name, c.detail);
    }
    Ok(verdicts.passed())
}

fn limits(a: &LimitArgs) -> anyhow::Result<SearchLimits> {
    let mut limits: SearchLimits = match &a.limits {
        Some(text) => serde_json::from_str(text).context("parsing --limits")?,
        None => SearchLimits::default(),
    };
    if let Some(n) = a.n {
        limits.max_prefix = n;
    }
    match a.modulus.as_deref() {
        None => {}
        Some("auto") => limits.modulus = None,
        Some(q) => limits.modulus = Some(q.parse().with_context(|| format!("--modulus {q:?}"))?),
    }
    if limits.max_prefix == 0
        || limits.max_block == Some(0)
        || limits.modulus.is_some_and(|q| q < 1)
    {
        bail!("limits must be positive");
    }
    Ok(limits)
}

fn emit_power(out: Option<&Path>, outcome: &PowerOutcome) -> anyhow::Result<bool> {
    write_json(out, outcome)?;
    Ok(true)
}

fn find_power(a: FindPowerArgs) -> anyhow::Result<bool> {
    let source = load_word(&a.word)?;
    let mu = load_mu(&a.mode, &source)?;
    let limits = limits(&a.limits)?;
    let outcome = match (a.method, mu.kind()) {
        (Method::Scan, _) => find_power_scan(&source, &mu, a.k, &limits)?,
        (Method::Vdw, MuKind::Custom) => find_power_mod_mu(&source, &mu, a.k, &limits)?,
        (Method::Vdw, _) => find_power_vdw(&source, &mu, a.k, &limits)?,
    };
    emit_power(a.out.as_deref(), &outcome)
}

fn simultaneous(a: SimultaneousArgs) -> anyhow::Result<bool> {
    let sources = a
        .word
        .iter()
        .map(|w| load_word(w))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let limits = limits(&a.limits)?;
    let outcome = find_simultaneous(&sources, a.k, &limits)?;
    emit_power(a.out.as_deref(), &outcome)
}

fn search(a: SearchArgs) -> anyhow::Result<bool> {
    let mode = match a.mode.as_str() {
        "additive" => PatternMode::Additive,
        "abelian" => PatternMode::Abelian,
        other => bail!("unknown mode {other:?}: expected additive or abelian"),
    };
    let mut problem = AvoidanceProblem::new(&a.alphabet, a.k, mode)?;
    if let Some(l) = a.max_len {
        problem = problem.with_max_len(l);
    }
    if let Some(n) = a.max_nodes {
        problem = problem.with_max_nodes(n);
    }
    let resume = match &a.checkpoint {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading checkpoint {}", path.display()))?;
            Some(
                Checkpoint::parse(&text)
                    .with_context(|| format!("checkpoint {}", path.display()))?,
            )
        }
        _ => None,
    };
    let outcome = match &resume {
        Some(cp) => backtrack_from(&problem, cp)?,
        None => backtrack(&problem)?,
    };
    if let Some(path) = &a.checkpoint {
        match &outcome.checkpoint {
            Some(cp) => fs::write(path, cp.to_text())
                .with_context(|| format!("writing {}", path.display()))?,
            None if path.exists() => fs::remove_file(path)?,
            None => {}
        }
    }
    write_json(a.out.as_deref(), &outcome)?;
    if contains_pattern(&outcome.longest, outcome.k, outcome.mode) {
        eprintln!("longest word failed re-validation");
        return Ok(false);
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let dekking_rules = match &a.dekking_rules {
        Some(text) => Some(parse_letter_map(text).context("--dekking-rules")?),
        None => None,
    };
    let report = run_suite(&SuiteConfig {
        quick: a.quick,
        dekking_rules,
    });
    match a.format {
        VerifyFormat::Json => write_json(a.out.as_deref(), &report)?,
        VerifyFormat::Text => {
            let mut w = output(a.out.as_deref())?;
            for r in &report.results {
                writeln!(w, "{r}")?;
            }
            let failed = report.results.iter().filter(|r| !r.passed).count();
            writeln!(
                w,
                "{} of {} criteria passed",
                report.results.len() - failed,
                report.results.len()
            )?;
            w.flush()?;
        }
    }
    Ok(report.passed())
}
