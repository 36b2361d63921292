//! `walg`: build W-algebra data, print λ-brackets, replay weak generation schedules,
//! run closure searches and check the PVA axioms.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use walgebra::json::{GenJson, LambdaJson};
use walgebra::liestruct::{parse_partition, GenIndex, Kind, LieData, PartitionSpec, SpecError};
use walgebra::pvacore::{axiom_summary, AxiomSummary, DiffPoly};
use walgebra::wbracket::{bracket_table, conformal_check, conformal_vector, MasterTable, SignConvention, WPoly};
use walgebra::weakgen::{closure_search, default_caps, preset_seeds, scripted_verify, weak_set, Caps, ClosureReport, DerivationReport, EngineCoeff, Flavor};
use walgebra::{Half, RatFunc, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_AXIOM: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "walg", version, about = "Classical W-algebras of type A")]
pub struct Cli {
    /// TOML or JSON file with default settings; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grading, centralizer dimension and the generator table
    Algebra(SpecArgs),
    /// The λ-bracket of two generators
    Bracket {
        #[command(flatten)]
        spec: SpecArgs,
        /// First generator, as `t,i,j` (e.g. `5/2,1,2`)
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Replay the weak generation schedule of the big or small set
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
    },
    /// Breadth-first closure from a seed set
    Closure {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        seed: Option<SeedArg>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Skew-symmetry and Jacobi on all generators, plus the conformal vector checks
    Axioms(SpecArgs),
    /// Run the command named in the config file
    Run,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Comma-separated parts, e.g. `3,2`
    #[arg(long)]
    pub partition: Option<String>,
    /// Odd-side parts for `--kind sl-super`
    #[arg(long)]
    pub partition2: Option<String>,
    #[arg(long, value_enum)]
    pub ktilde: Option<KTildeArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CapArgs {
    /// Largest product weight kept, e.g. `7/2` [default: top weight + 2]
    #[arg(long)]
    pub max_weight: Option<String>,
    /// Largest n in n-th products [default: 2·max weight]
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Largest number of kept elements [default: 4·|J^f| + 16]
    #[arg(long)]
    pub max_elements: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Sl,
    SlSuper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KTildeArg {
    Fixed,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlavorArg {
    Big,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedArg {
    Big,
    Small,
    None,
    All,
    PresetBig,
    PresetSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Algebra,
    Bracket,
    Verify,
    Closure,
    Axioms,
}

/// Settings from a config file. Every field is optional and flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub kind: Option<KindArg>,
    pub partition: Option<String>,
    pub partition2: Option<String>,
    pub flavor: Option<FlavorArg>,
    pub seed: Option<SeedArg>,
    pub ktilde: Option<KTildeArg>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub max_weight: Option<Half>,
    pub max_n: Option<usize>,
    pub max_elements: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("config: {0}")]
    Config(String),
    #[error("UnknownGenerator: {0}")]
    UnknownGenerator(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("writing {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) | CliError::Io(..) => 1,
            _ => EXIT_SPEC,
        }
    }
}

/// Parses a config file; the format follows the extension (`.json`, otherwise TOML).
pub fn parse_config(text: &str, json: bool) -> Result<RunConfig, CliError> {
    if json {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text, path.extension().is_some_and(|e| e == "json"))
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
struct Resolved {
    command: CommandName,
    spec: PartitionSpec,
    ktilde: KTildeArg,
    format: Format,
    output: Option<PathBuf>,
    flavor: Flavor,
    seed: SeedArg,
    a: Option<String>,
    b: Option<String>,
    max_weight: Option<Half>,
    max_n: Option<usize>,
    max_elements: Option<usize>,
}

fn build_spec(kind: KindArg, p1: Option<&str>, p2: Option<&str>) -> Result<PartitionSpec, CliError> {
    let p1 = parse_partition(p1.ok_or_else(|| CliError::Usage("--partition is required".into()))?)?;
    Ok(match kind {
        KindArg::Sl => {
            if p2.is_some() {
                return Err(CliError::Usage("--partition2 needs --kind sl-super".into()));
            }
            PartitionSpec::plain(&p1)?
        }
        KindArg::SlSuper => {
            let p2 = parse_partition(p2.ok_or_else(|| CliError::Usage("--kind sl-super needs --partition2".into()))?)?;
            PartitionSpec::new(Kind::Super, p1, p2)?
        }
    })
}

fn resolve(cli: Cli) -> Result<Resolved, CliError> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    let empty = SpecArgs::default();
    let (command, spec_args, caps, flavor, seed, a, b) = match &cli.command {
        Command::Algebra(s) => (CommandName::Algebra, s, None, None, None, None, None),
        Command::Bracket { spec, a, b } => (CommandName::Bracket, spec, None, None, None, Some(a.clone()), Some(b.clone())),
        Command::Verify { spec, flavor } => (CommandName::Verify, spec, None, *flavor, None, None, None),
        Command::Closure { spec, seed, caps } => (CommandName::Closure, spec, Some(caps), None, *seed, None, None),
        Command::Axioms(s) => (CommandName::Axioms, s, None, None, None, None, None),
        Command::Run => (cfg.command.ok_or_else(|| CliError::Config("`run` needs `command` in the config".into()))?, &empty, None, None, None, None, None),
    };
    let kind = spec_args.kind.or(cfg.kind).unwrap_or(KindArg::Sl);
    let p1 = spec_args.partition.as_deref().or(cfg.partition.as_deref());
    let p2 = spec_args.partition2.as_deref().or(cfg.partition2.as_deref());
    let spec = build_spec(kind, p1, p2)?;
    let max_weight = match caps.and_then(|c| c.max_weight.as_deref()) {
        Some(s) => Some(s.parse::<Half>().map_err(CliError::Usage)?),
        None => cfg.max_weight,
    };
    let max_n = caps.and_then(|c| c.max_n).or(cfg.max_n);
    let max_elements = caps.and_then(|c| c.max_elements).or(cfg.max_elements);
    if max_weight.is_some_and(|w| w <= Half::ZERO) || max_n == Some(0) || max_elements == Some(0) {
        return Err(CliError::Usage("caps must be positive".into()));
    }
    Ok(Resolved {
        command,
        spec,
        ktilde: spec_args.ktilde.or(cfg.ktilde).unwrap_or(KTildeArg::Fixed),
        format: cli.format.or(cfg.format).unwrap_or(Format::Text),
        output: cli.output.or(cfg.output),
        flavor: match flavor.or(cfg.flavor).unwrap_or(FlavorArg::Big) {
            FlavorArg::Big => Flavor::Big,
            FlavorArg::Small => Flavor::Small,
        },
        seed: seed.or(cfg.seed).unwrap_or(SeedArg::Big),
        a: a.or(cfg.a),
        b: b.or(cfg.b),
        max_weight,
        max_n,
        max_elements,
    })
}

/// Parses `t,i,j` (or the display form `qT^(I,J)`) into a generator of the algebra.
pub fn parse_gen(s: &str, ld: &LieData) -> Result<GenIndex, CliError> {
    let unknown = || CliError::UnknownGenerator(format!("{s:?} in {}", ld.ctx.spec()));
    let body = s.trim();
    let parts: Vec<&str> = if let Some(rest) = body.strip_prefix('q') {
        let (t, ij) = rest.split_once('^').ok_or_else(unknown)?;
        let ij = ij.trim_start_matches('(').trim_end_matches(')');
        let (i, j) = ij.split_once(',').ok_or_else(unknown)?;
        vec![t, i, j]
    } else {
        body.split(',').collect()
    };
    let [t, i, j] = parts[..] else { return Err(unknown()) };
    let t: Half = t.trim().parse().map_err(|_| unknown())?;
    let i: usize = i.trim().parse().map_err(|_| unknown())?;
    let j: usize = j.trim().parse().map_err(|_| unknown())?;
    ld.cdata.find(t, i, j).ok_or_else(unknown)
}

/// What a command produced: the rendered report and the exit status it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenRow {
    pub gen: GenJson,
    pub label: String,
    pub weight: Half,
    pub odd: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub spec: String,
    pub n: usize,
    pub dim_g: usize,
    pub grading: Vec<(Half, usize)>,
    pub dim_gf: usize,
    pub generators: Vec<GenRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketReport {
    pub spec: String,
    pub ktilde: KTildeArg,
    pub a: GenJson,
    pub b: GenJson,
    pub bracket: LambdaJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConformalSummary {
    pub passes: bool,
    pub central: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    pub spec: String,
    pub ktilde: KTildeArg,
    pub summary: AxiomSummary,
    /// Checked at k̃ = 1 only.
    pub conformal: Option<ConformalSummary>,
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(value),
    }
}

fn cmd_algebra(r: &Resolved, ld: &LieData) -> Outcome {
    let rep = AlgebraReport {
        spec: r.spec.to_string(),
        n: ld.ctx.n(),
        dim_g: ld.ctx.dim_g(),
        grading: ld.ctx.grade_histogram().into_iter().collect(),
        dim_gf: ld.cdata.len(),
        generators: ld.cdata.gens.iter().map(|g| GenRow { gen: GenJson::encode(g), label: g.to_string(), weight: g.t, odd: g.odd }).collect(),
    };
    let report = render(r.format, &rep, |a| {
        let mut s = format!("{}: N = {}, dim g = {}, |J^f| = {}\ngrading:", a.spec, a.n, a.dim_g, a.dim_gf);
        for (g, c) in &a.grading {
            let _ = write!(s, " {g}:{c}");
        }
        s.push_str("\ngenerators:\n");
        for g in &a.generators {
            let _ = writeln!(s, "  {:<14} weight {:<4} {}", g.label, g.weight.to_string(), if g.odd { "odd" } else { "even" });
        }
        s
    });
    Outcome { code: EXIT_OK, report }
}

fn table<C: EngineCoeff>(ld: &Arc<LieData>) -> MasterTable<C> {
    MasterTable::new(ld.clone(), SignConvention::SELECTED)
}

fn bracket_report<C: EngineCoeff>(r: &Resolved, ld: &Arc<LieData>, a: GenIndex, b: GenIndex) -> Outcome {
    let t: MasterTable<C> = table(ld);
    let br = t.bracket(&a, &b);
    let rep = BracketReport { spec: r.spec.to_string(), ktilde: r.ktilde, a: GenJson::encode(&a), b: GenJson::encode(&b), bracket: LambdaJson::encode(&br) };
    let report = render(r.format, &rep, |_| {
        let mut s = format!("{{{a} λ {b}}} in {}:\n", r.spec);
        if br.is_zero() {
            s.push_str("  0\n");
        }
        for (n, c) in br.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let _ = writeln!(s, "  λ^{n}: {c}");
            }
        }
        s
    });
    Outcome { code: EXIT_OK, report }
}

fn derivation_text(d: &DerivationReport) -> String {
    let mut s = format!("{} {} (k̃ {}): {}\nseeds: {}\n", d.spec, d.mode, d.ktilde, if d.complete { "complete" } else { "INCOMPLETE" }, d.seeds.join(", "));
    let _ = writeln!(s, "products: {}, recovered {} of {}", d.products, d.recovered.len(), d.recovered.len() + d.missing.len());
    let mut order: Vec<_> = d.recovered.iter().collect();
    order.sort_by_key(|r| r.node);
    for rec in order {
        let _ = writeln!(s, "  {:<14} <- {}", rec.label, d.expression(rec.node));
    }
    if !d.missing.is_empty() {
        let missing: Vec<String> = d.missing.iter().map(|g| format!("{:?}", (g.0, g.1, g.2, g.3))).collect();
        let _ = writeln!(s, "missing: {}", missing.join(", "));
    }
    s
}

fn verify_report<C: EngineCoeff>(r: &Resolved, ld: &Arc<LieData>) -> Result<Outcome, CliError> {
    let t: MasterTable<C> = table(ld);
    let rep = scripted_verify(&t, r.flavor).map_err(|e| CliError::Usage(e.to_string()))?;
    let code = if rep.complete { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { code, report: render(r.format, &rep, derivation_text) })
}

fn seeds_for<C: EngineCoeff>(seed: SeedArg, ld: &LieData) -> Result<Vec<(String, WPoly<C>)>, CliError> {
    let vars = |gs: Vec<GenIndex>| gs.into_iter().map(|g| (format!("ω({g})"), DiffPoly::var(g))).collect();
    let err = |e: walgebra::weakgen::WeakGenError| CliError::Usage(e.to_string());
    Ok(match seed {
        SeedArg::None => Vec::new(),
        SeedArg::All => vars(ld.cdata.gens.clone()),
        SeedArg::Big => vars(weak_set(ld, Flavor::Big).map_err(err)?),
        SeedArg::Small => vars(weak_set(ld, Flavor::Small).map_err(err)?),
        SeedArg::PresetBig => preset_seeds(ld, Flavor::Big).map_err(err)?,
        SeedArg::PresetSmall => preset_seeds(ld, Flavor::Small).map_err(err)?,
    })
}

fn closure_report<C: EngineCoeff>(r: &Resolved, ld: &Arc<LieData>) -> Result<Outcome, CliError> {
    let t: MasterTable<C> = table(ld);
    let seeds = seeds_for::<C>(r.seed, ld)?;
    let d = default_caps(ld);
    let caps = Caps { max_weight: r.max_weight.unwrap_or(d.max_weight), max_n: r.max_n.unwrap_or(d.max_n), max_elements: r.max_elements.unwrap_or(d.max_elements) };
    let rep: ClosureReport = closure_search(&t, &seeds, caps).map_err(|e| CliError::Usage(e.to_string()))?;
    let code = if rep.complete() { EXIT_OK } else { EXIT_VERIFY };
    let report = render(r.format, &rep, |c| {
        format!(
            "caps: max weight {}, max n {}, max elements {}; generations {}{}\n{}",
            c.caps.max_weight,
            c.caps.max_n,
            c.caps.max_elements,
            c.generations,
            if c.truncated { " (truncated)" } else { "" },
            derivation_text(&c.derivation)
        )
    });
    Ok(Outcome { code, report })
}

fn axioms_report<C: EngineCoeff>(r: &Resolved, ld: &Arc<LieData>) -> Result<Outcome, CliError> {
    let t: MasterTable<C> = table(ld);
    t.fill();
    let summary = axiom_summary(&t, t.gens()).map_err(|e| CliError::Compute(e.to_string()))?;
    let conformal = if r.ktilde == KTildeArg::Fixed {
        let tq = bracket_table::<Q>(ld, SignConvention::SELECTED);
        let l = conformal_vector::<Q>(ld);
        let c = conformal_check(&tq, &l, tq.gens()).map_err(|e| CliError::Compute(e.to_string()))?;
        Some(ConformalSummary { passes: c.passes(), central: c.central.to_string() })
    } else {
        None
    };
    let bad = summary.skew_violations + summary.jacobi_violations > 0 || conformal.as_ref().is_some_and(|c| !c.passes);
    let rep = AxiomReport { spec: r.spec.to_string(), ktilde: r.ktilde, summary, conformal };
    let report = render(r.format, &rep, |a| {
        let mut s = format!(
            "{}: skew {} violations in {} pairs, Jacobi {} violations in {} triples\n",
            a.spec, a.summary.skew_violations, a.summary.pairs_checked, a.summary.jacobi_violations, a.summary.triples_checked
        );
        if let Some(c) = &a.conformal {
            let _ = writeln!(s, "conformal vector: {} (central term {} λ³)", if c.passes { "ok" } else { "FAILS" }, c.central);
        }
        s
    });
    Ok(Outcome { code: if bad { EXIT_AXIOM } else { EXIT_OK }, report })
}

fn execute(r: &Resolved) -> Result<Outcome, CliError> {
    let ld = Arc::new(LieData::new(&r.spec)?);
    let sym = r.ktilde == KTildeArg::Symbolic;
    match r.command {
        CommandName::Algebra => Ok(cmd_algebra(r, &ld)),
        CommandName::Bracket => {
            let need = |g: &Option<String>, flag: &str| g.clone().ok_or_else(|| CliError::Usage(format!("bracket needs --{flag}")));
            let a = parse_gen(&need(&r.a, "a")?, &ld)?;
            let b = parse_gen(&need(&r.b, "b")?, &ld)?;
            Ok(if sym { bracket_report::<RatFunc>(r, &ld, a, b) } else { bracket_report::<Q>(r, &ld, a, b) })
        }
        CommandName::Verify if sym => verify_report::<RatFunc>(r, &ld),
        CommandName::Verify => verify_report::<Q>(r, &ld),
        CommandName::Closure if sym => closure_report::<RatFunc>(r, &ld),
        CommandName::Closure => closure_report::<Q>(r, &ld),
        CommandName::Axioms if sym => axioms_report::<RatFunc>(r, &ld),
        CommandName::Axioms => axioms_report::<Q>(r, &ld),
    }
}

/// Runs a parsed command line, writing the report to `--output` when given.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let r = resolve(cli)?;
    let out = execute(&r)?;
    if let Some(path) = &r.output {
        std::fs::write(path, &out.report).map_err(|e| CliError::Io(path.clone(), e))?;
        return Ok(Outcome { code: out.code, report: String::new() });
    }
    Ok(out)
}

/// Parses `args` (without the program name) and runs them.
pub fn run_args<I: IntoIterator<Item = S>, S: Into<std::ffi::OsString> + Clone>(args: I) -> Result<Outcome, CliError> {
    let argv = std::iter::once(std::ffi::OsString::from("walg")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli)
}

/// Decodes a JSON report produced by `verify`.
pub fn decode_derivation(s: &str) -> Result<DerivationReport, serde_json::Error> {
    serde_json::from_str(s)
}

/// Thread count from `W_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("W_THREADS").ok()?.trim().parse().ok().filter(|n| *n > 0)
}
