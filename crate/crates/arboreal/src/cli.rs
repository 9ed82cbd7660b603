//! JSON-emitting command-line front end.
//!
//! Subcommands:
//!
//! * `classify`   — structural verdict for the preimage tower from valuations
//! * `tree`       — per-level valuation orbit of the preimage tree
//! * `oracle`     — expanded-iterate verification, single instance or corpus
//! * `filtration` — Herbrand functions and upper-numbering transport
//! * `sgn`        — sign characters of tree automorphisms
//! * `real`       — the archimedean analogue over the real numbers
//!
//! Every run emits exactly one JSON document per result line on standard
//! output (or into `--output`); identical inputs produce byte-identical
//! JSON, with no timestamps anywhere in the payload. Exit codes: `0` on
//! success, `2` for invalid input or a violated precondition (with a
//! structured error document), `3` when an arithmetic cap is exhausted.
//!
//! Rationals are written `num/den` with the denominator optional; `inf` is
//! accepted wherever a valuation can be infinite (that is, when `a = 0`).
//! A JSON config file passed with `--config` supplies defaults for any
//! omitted flag, keyed by the long flag names. The environment variables
//! `ARBOREAL_DEGREE_CAP`, `ARBOREAL_RESULTANT_CAP`, and
//! `ARBOREAL_PRECISION_CAP` override the default caps; explicit flags beat
//! the environment.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    classify_real, classify_tame, classify_wild, FixedPointData, RealVerdict,
};
use crate::dynamics::val_orbit;
use crate::error::{Error, Result};
use crate::oracle::{real_all_real_check, verify_predictions, OracleCaps, RealCheckOutcome};
use crate::ramfilt::BreakFiltration;
use crate::residue::{exact_cycle_check, orbit_analysis, Fq};
use crate::treeauto::{sign_preimage, TreeAut};
use crate::valuation::{
    padic_val, parse_rat, parse_val_ext, rat_string, GroundField, Rat, ValExt,
};

/// Parse `argv`, execute, and write every JSON document to `out`.
/// Returns the process exit code.
pub fn run<I, T, W>(argv: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            emit_error(out, "usage", e.to_string().trim_end());
            return 2;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(err) => {
            let kind = if err.exit_code() == 3 { "cap-exhausted" } else { "invalid-input" };
            emit_error(out, kind, &err.to_string());
            err.exit_code()
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

fn emit_error<W: Write>(out: &mut W, kind: &str, message: &str) {
    let doc = ErrorDoc { error: ErrorBody { kind, message } };
    let _ = writeln!(out, "{}", serde_json::to_string(&doc).expect("static schema"));
}

#[derive(Parser)]
#[command(
    name = "arboreal",
    version,
    about = "Exact structure predictions for iterated preimage towers of z^l - c",
    disable_help_subcommand = true
)]
struct Cli {
    /// JSON file supplying defaults for omitted flags (same keys as the
    /// long flag names).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the JSON result here instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural verdict for the preimage tower from valuations alone.
    Classify(ClassifyArgs),
    /// Per-level valuation orbit of the generic preimage branch.
    Tree(TreeArgs),
    /// Verify predictions against exactly expanded iterates.
    Oracle(OracleArgs),
    /// Herbrand functions and upper-numbering transport of a filtration.
    Filtration(FiltrationArgs),
    /// Sign characters of automorphisms of the rooted l-ary tree.
    Sgn(SgnArgs),
    /// Archimedean analogue: does the preimage tree stay real?
    Real(RealArgs),
}

fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => Cfg::load(path)?,
        None => Cfg::empty(),
    };
    let (body, code) = match cli.command {
        Command::Classify(mut a) => {
            a.merge(&cfg);
            (run_classify(&a)?, 0)
        }
        Command::Tree(mut a) => {
            a.merge(&cfg);
            (run_tree(&a)?, 0)
        }
        Command::Oracle(mut a) => {
            a.merge(&cfg);
            run_oracle(&a)?
        }
        Command::Filtration(mut a) => {
            a.merge(&cfg);
            (run_filtration(&a)?, 0)
        }
        Command::Sgn(mut a) => {
            a.merge(&cfg);
            (run_sgn(&a)?, 0)
        }
        Command::Real(mut a) => {
            a.merge(&cfg);
            (run_real(&a)?, 0)
        }
    };
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{body}\n"))?,
        None => {
            let _ = writeln!(out, "{body}");
        }
    }
    Ok(code)
}

// ---------------------------------------------------------------------------
// Config file support.

struct Cfg(serde_json::Map<String, serde_json::Value>);

impl Cfg {
    fn empty() -> Cfg {
        Cfg(serde_json::Map::new())
    }

    fn load(path: &Path) -> Result<Cfg> {
        let text = std::fs::read_to_string(path)?;
        match serde_json::from_str(&text)? {
            serde_json::Value::Object(map) => Ok(Cfg(map)),
            _ => Err(Error::Cli(format!(
                "config file {} must hold a JSON object",
                path.display()
            ))),
        }
    }

    /// Look up `key`, accepting an underscore spelling of a dashed name.
    fn get(&self, key: &str) -> Option<&serde_json::Value> {
        self.0
            .get(key)
            .or_else(|| self.0.get(key.replace('-', "_").as_str()))
    }

    /// `true` only when the key is present and set to `true`.
    fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some(serde_json::Value::Bool(true)))
    }

    fn bool_opt(&self, key: &str) -> Option<bool> {
        self.get(key)?.as_bool()
    }

    fn u64_opt(&self, key: &str) -> Option<u64> {
        self.get(key)?.as_u64()
    }

    fn u32_opt(&self, key: &str) -> Option<u32> {
        self.u64_opt(key)?.try_into().ok()
    }

    fn usize_opt(&self, key: &str) -> Option<usize> {
        self.u64_opt(key)?.try_into().ok()
    }

    /// Rationals may be JSON strings or plain JSON integers.
    fn string_opt(&self, key: &str) -> Option<String> {
        match self.get(key)? {
            serde_json::Value::String(s) => Some(s.clone()),
            serde_json::Value::Number(n) => Some(n.to_string()),
            _ => None,
        }
    }
}

fn merge_opt<T>(slot: &mut Option<T>, value: Option<T>) {
    if slot.is_none() {
        *slot = value;
    }
}

// ---------------------------------------------------------------------------
// Shared flag bundles.

#[derive(Args, Clone, Default)]
struct ModeArgs {
    /// Wild mode: the map degree l equals the residue characteristic p.
    #[arg(long)]
    wild: bool,
    /// Tame mode: p does not divide l.
    #[arg(long, conflicts_with = "wild")]
    tame: bool,
    /// Residue characteristic p.
    #[arg(short, long)]
    p: Option<u64>,
    /// Map degree l (required in tame mode; wild mode forces l = p).
    #[arg(short = 'l', long)]
    ell: Option<u32>,
    /// Ramification index of K over Q_p (wild mode only) [default: 1].
    #[arg(short, long)]
    e: Option<u32>,
    /// Whether K contains the l-th roots of unity [default: true].
    #[arg(long)]
    mu: Option<bool>,
    /// Whether the residue field is finite [default: true].
    #[arg(long)]
    k_finite: Option<bool>,
}

impl ModeArgs {
    fn merge(&mut self, cfg: &Cfg) {
        if !self.wild {
            self.wild = cfg.flag("wild");
        }
        if !self.tame {
            self.tame = cfg.flag("tame");
        }
        merge_opt(&mut self.p, cfg.u64_opt("p"));
        merge_opt(&mut self.ell, cfg.u32_opt("ell").or_else(|| cfg.u32_opt("l")));
        merge_opt(&mut self.e, cfg.u32_opt("e"));
        merge_opt(&mut self.mu, cfg.bool_opt("mu"));
        merge_opt(&mut self.k_finite, cfg.bool_opt("k-finite"));
    }

    fn ground_field(&self) -> Result<GroundField> {
        let p = self
            .p
            .ok_or_else(|| Error::Cli("residue characteristic -p is required".into()))?;
        let mu = self.mu.unwrap_or(true);
        let k_finite = self.k_finite.unwrap_or(true);
        match (self.wild, self.tame) {
            (true, false) => GroundField::wild(p, self.e.unwrap_or(1), mu, k_finite),
            (false, true) => {
                let ell = self
                    .ell
                    .ok_or_else(|| Error::Cli("tame mode needs the degree -l".into()))?;
                GroundField::tame(ell, p, mu, k_finite)
            }
            _ => Err(Error::Cli("choose exactly one of --wild or --tame".into())),
        }
    }
}

#[derive(Args, Clone, Default)]
struct PointArgs {
    /// v(c) as "num/den" (instead of passing c itself).
    #[arg(long, allow_hyphen_values = true)]
    vc: Option<String>,
    /// v(a) as "num/den", or "inf" for a = 0.
    #[arg(long, allow_hyphen_values = true)]
    va: Option<String>,
    /// The parameter c as "num/den"; its valuation is computed.
    #[arg(short, long, allow_hyphen_values = true)]
    c: Option<String>,
    /// The base point a as "num/den"; its valuation is computed.
    #[arg(short, long, allow_hyphen_values = true)]
    a: Option<String>,
}

impl PointArgs {
    fn merge(&mut self, cfg: &Cfg) {
        merge_opt(&mut self.vc, cfg.string_opt("vc"));
        merge_opt(&mut self.va, cfg.string_opt("va"));
        merge_opt(&mut self.c, cfg.string_opt("c"));
        merge_opt(&mut self.a, cfg.string_opt("a"));
    }

    fn resolve(&self, p: u64) -> Result<(Rat, ValExt)> {
        let vc = match (&self.vc, &self.c) {
            (Some(_), Some(_)) => {
                return Err(Error::Cli("give either --vc or -c, not both".into()))
            }
            (Some(s), None) => parse_rat(s)?,
            (None, Some(s)) => match padic_val(&parse_rat(s)?, p)? {
                ValExt::Finite(v) => v,
                ValExt::Infinity => return Err(Error::Cli("c must be nonzero".into())),
            },
            (None, None) => return Err(Error::Cli("one of --vc or -c is required".into())),
        };
        let va = match (&self.va, &self.a) {
            (Some(_), Some(_)) => {
                return Err(Error::Cli("give either --va or -a, not both".into()))
            }
            (Some(s), None) => parse_val_ext(s)?,
            (None, Some(s)) => padic_val(&parse_rat(s)?, p)?,
            (None, None) => return Err(Error::Cli("one of --va or -a is required".into())),
        };
        Ok((vc, va))
    }

    /// The rational values themselves, required by residue-orbit analysis.
    fn concrete(&self) -> Result<(Rat, Rat)> {
        match (&self.c, &self.a) {
            (Some(c), Some(a)) => Ok((parse_rat(c)?, parse_rat(a)?)),
            _ => Err(Error::Cli(
                "this verdict needs the residue orbit: pass concrete -c and -a".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// classify

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    mode: ModeArgs,
    #[command(flatten)]
    point: PointArgs,
    /// Largest r with v(c) in l^r·v(K^x) (wild mode; derived from e·v(c)
    /// when omitted).
    #[arg(long)]
    r: Option<u32>,
    /// v(b) for a fixed point b of the map, "num/den" (boundary regime).
    #[arg(long, allow_hyphen_values = true)]
    fp_vb: Option<String>,
    /// v(a - b), "num/den" or "inf" (boundary regime).
    #[arg(long, allow_hyphen_values = true)]
    fp_va_minus_b: Option<String>,
    /// Whether the fixed point b lies in K (boundary regime).
    #[arg(long)]
    fp_b_in_k: Option<bool>,
    /// Residue field degree d, for F_q with q = p^d (tame mode) [default: 1].
    #[arg(long)]
    residue_degree: Option<u32>,
}

impl ClassifyArgs {
    fn merge(&mut self, cfg: &Cfg) {
        self.mode.merge(cfg);
        self.point.merge(cfg);
        merge_opt(&mut self.r, cfg.u32_opt("r"));
        merge_opt(&mut self.fp_vb, cfg.string_opt("fp-vb"));
        merge_opt(&mut self.fp_va_minus_b, cfg.string_opt("fp-va-minus-b"));
        merge_opt(&mut self.fp_b_in_k, cfg.bool_opt("fp-b-in-k"));
        merge_opt(&mut self.residue_degree, cfg.u32_opt("residue-degree"));
    }

    fn fixed_point(&self) -> Result<Option<FixedPointData>> {
        match (&self.fp_vb, &self.fp_va_minus_b, &self.fp_b_in_k) {
            (None, None, None) => Ok(None),
            (Some(vb), Some(vab), Some(b_in_k)) => Ok(Some(FixedPointData {
                v_b: parse_rat(vb)?,
                v_a_minus_b: parse_val_ext(vab)?,
                b_in_k: *b_in_k,
            })),
            _ => Err(Error::Cli(
                "--fp-vb, --fp-va-minus-b, and --fp-b-in-k must be given together".into(),
            )),
        }
    }
}

fn run_classify(args: &ClassifyArgs) -> Result<String> {
    let gf = args.mode.ground_field()?;
    let (vc, va) = args.point.resolve(gf.p())?;
    let verdict = if gf.is_wild() {
        classify_wild(&gf, &vc, &va, args.r, args.fixed_point()?.as_ref())?
    } else {
        // Try without residue data; compute the residue orbit only when the
        // verdict actually depends on it.
        match classify_tame(&gf, &vc, &va, None) {
            Err(Error::MissingResidueReport) => {
                let (c, a) = args.point.concrete()?;
                let fq = Fq::new(gf.p(), args.residue_degree.unwrap_or(1))?;
                let c_bar = fq.from_rat(&c)?;
                let a_bar = fq.from_rat(&a)?;
                let mut report = orbit_analysis(gf.ell(), &fq, &c_bar, &a_bar)?;
                if report.zero_and_a_in_single_cycle_mod_m {
                    report.exact_single_cycle =
                        Some(exact_cycle_check(gf.ell(), &c, &a, gf.p(), &report)?);
                }
                classify_tame(&gf, &vc, &va, Some(&report))?
            }
            other => other?,
        }
    };
    Ok(serde_json::to_string(&verdict)?)
}

// ---------------------------------------------------------------------------
// tree

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    mode: ModeArgs,
    #[command(flatten)]
    point: PointArgs,
    /// Number of tree levels to simulate [default: 8].
    #[arg(short = 'n', long)]
    depth: Option<u32>,
}

impl TreeArgs {
    fn merge(&mut self, cfg: &Cfg) {
        self.mode.merge(cfg);
        self.point.merge(cfg);
        merge_opt(&mut self.depth, cfg.u32_opt("depth").or_else(|| cfg.u32_opt("n")));
    }
}

fn run_tree(args: &TreeArgs) -> Result<String> {
    let gf = args.mode.ground_field()?;
    let (vc, va) = args.point.resolve(gf.p())?;
    let depth = args.depth.unwrap_or(8);
    let report = val_orbit(&va, &vc, &gf, depth as usize);
    Ok(serde_json::to_string(&report)?)
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    mode: ModeArgs,
    /// Parameter c as "num/den".
    #[arg(short, long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Base point a as "num/den".
    #[arg(short, long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Tree level to verify.
    #[arg(short = 'n', long = "level")]
    level: Option<u32>,
    /// Cap on the expanded iterate degree l^n
    /// [env ARBOREAL_DEGREE_CAP; default 256].
    #[arg(long)]
    degree_cap: Option<usize>,
    /// Cap on the degree fed to the resultant
    /// [env ARBOREAL_RESULTANT_CAP; default 256].
    #[arg(long)]
    resultant_cap: Option<usize>,
    /// Regression corpus: one JSON instance per line,
    /// {"mode","p","ell","c","a","n","expected"}.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["c", "a"])]
    corpus: Option<PathBuf>,
}

impl OracleArgs {
    fn merge(&mut self, cfg: &Cfg) {
        self.mode.merge(cfg);
        merge_opt(&mut self.c, cfg.string_opt("c"));
        merge_opt(&mut self.a, cfg.string_opt("a"));
        merge_opt(&mut self.level, cfg.u32_opt("level").or_else(|| cfg.u32_opt("n")));
        merge_opt(&mut self.degree_cap, cfg.usize_opt("degree-cap"));
        merge_opt(&mut self.resultant_cap, cfg.usize_opt("resultant-cap"));
        merge_opt(
            &mut self.corpus,
            cfg.string_opt("corpus").map(PathBuf::from),
        );
    }

    fn caps(&self) -> Result<OracleCaps> {
        let mut caps = OracleCaps::default();
        if let Some(v) = env_cap("ARBOREAL_DEGREE_CAP")? {
            caps.degree = v;
        }
        if let Some(v) = env_cap("ARBOREAL_RESULTANT_CAP")? {
            caps.resultant = v;
        }
        if let Some(v) = self.degree_cap {
            caps.degree = v;
        }
        if let Some(v) = self.resultant_cap {
            caps.resultant = v;
        }
        Ok(caps)
    }
}

fn env_cap<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Cli(format!("{name} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn run_oracle(args: &OracleArgs) -> Result<(String, i32)> {
    let caps = args.caps()?;
    if let Some(path) = &args.corpus {
        return run_corpus(path, &caps);
    }
    let gf = args.mode.ground_field()?;
    let c = parse_rat(
        args.c
            .as_deref()
            .ok_or_else(|| Error::Cli("oracle needs -c".into()))?,
    )?;
    let a = parse_rat(
        args.a
            .as_deref()
            .ok_or_else(|| Error::Cli("oracle needs -a".into()))?,
    )?;
    let n = args
        .level
        .ok_or_else(|| Error::Cli("oracle needs the level -n".into()))?;
    let report = verify_predictions(&gf, &c, &a, n, &caps)?;
    Ok((serde_json::to_string(&report)?, 0))
}

/// One regression-corpus instance. `expected` is the agreement flag the
/// oracle must reproduce.
#[derive(Deserialize)]
struct CorpusInstance {
    mode: String,
    p: u64,
    #[serde(default, alias = "l", alias = "ℓ")]
    ell: Option<u32>,
    #[serde(default = "default_e")]
    e: u32,
    #[serde(default = "default_true")]
    mu: bool,
    #[serde(default = "default_true", alias = "k-finite")]
    k_finite: bool,
    c: String,
    a: String,
    n: u32,
    expected: bool,
}

fn default_e() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Serialize)]
struct CorpusLine {
    line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<bool>,
    pass: bool,
}

#[derive(Serialize)]
struct CorpusSummary {
    total: usize,
    passed: usize,
    failed: usize,
}

fn corpus_instance_agreement(inst: &CorpusInstance, caps: &OracleCaps) -> Result<bool> {
    let gf = match inst.mode.as_str() {
        "wild" => GroundField::wild(inst.p, inst.e, inst.mu, inst.k_finite)?,
        "tame" => {
            let ell = inst
                .ell
                .ok_or_else(|| Error::Cli("tame corpus instance needs \"ell\"".into()))?;
            GroundField::tame(ell, inst.p, inst.mu, inst.k_finite)?
        }
        other => {
            return Err(Error::Cli(format!(
                "mode must be \"wild\" or \"tame\", got {other:?}"
            )))
        }
    };
    let c = parse_rat(&inst.c)?;
    let a = parse_rat(&inst.a)?;
    Ok(verify_predictions(&gf, &c, &a, inst.n, caps)?.agreement)
}

fn run_corpus(path: &Path, caps: &OracleCaps) -> Result<(String, i32)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines_out = Vec::new();
    let mut total = 0usize;
    let mut passed = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        total += 1;
        let lineno = idx + 1;
        let entry = match serde_json::from_str::<CorpusInstance>(line) {
            Err(e) => CorpusLine {
                line: lineno,
                error: Some(format!("parse: {e}")),
                agreement: None,
                expected: None,
                pass: false,
            },
            Ok(inst) => match corpus_instance_agreement(&inst, caps) {
                Ok(agreement) => {
                    let pass = agreement == inst.expected;
                    if pass {
                        passed += 1;
                    }
                    CorpusLine {
                        line: lineno,
                        error: None,
                        agreement: Some(agreement),
                        expected: Some(inst.expected),
                        pass,
                    }
                }
                Err(e) => CorpusLine {
                    line: lineno,
                    error: Some(e.to_string()),
                    agreement: None,
                    expected: Some(inst.expected),
                    pass: false,
                },
            },
        };
        lines_out.push(serde_json::to_string(&entry)?);
    }
    let summary = CorpusSummary { total, passed, failed: total - passed };
    lines_out.push(serde_json::to_string(&summary)?);
    let code = if passed == total { 0 } else { 2 };
    Ok((lines_out.join("\n"), code))
}

// ---------------------------------------------------------------------------
// filtration

#[derive(Args)]
struct FiltrationArgs {
    /// Lower-numbering break filtration as comma-separated "u:order" pairs,
    /// e.g. "0:4,1:2" (u rational as num/den, order a positive integer).
    #[arg(long, allow_hyphen_values = true)]
    breaks: Option<String>,
    /// Also evaluate the Herbrand function phi at this point.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Also evaluate the inverse function psi at this point.
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
}

impl FiltrationArgs {
    fn merge(&mut self, cfg: &Cfg) {
        merge_opt(&mut self.breaks, cfg.string_opt("breaks"));
        merge_opt(&mut self.phi, cfg.string_opt("phi"));
        merge_opt(&mut self.psi, cfg.string_opt("psi"));
    }
}

#[derive(Serialize)]
struct FiltrationReport {
    /// Lower-numbering (break, order) pairs.
    breaks: Vec<(String, String)>,
    inertia_order: String,
    trivialization_break: Option<String>,
    /// The same filtration transported to upper numbering.
    upper_breaks: Vec<(String, String)>,
    phi: Option<String>,
    psi: Option<String>,
}

fn parse_breaks(s: &str) -> Result<Vec<(Rat, BigUint)>> {
    s.split(',')
        .map(|pair| {
            let (u, order) = pair
                .split_once(':')
                .ok_or_else(|| Error::Cli(format!("break {pair:?} is not \"u:order\"")))?;
            let order: BigUint = order
                .trim()
                .parse()
                .map_err(|_| Error::Cli(format!("order {order:?} is not a positive integer")))?;
            Ok((parse_rat(u.trim())?, order))
        })
        .collect()
}

fn breaks_to_strings(breaks: &[(Rat, BigUint)]) -> Vec<(String, String)> {
    breaks
        .iter()
        .map(|(u, order)| (rat_string(u), order.to_string()))
        .collect()
}

fn run_filtration(args: &FiltrationArgs) -> Result<String> {
    let spec = args
        .breaks
        .as_deref()
        .ok_or_else(|| Error::Cli("filtration needs --breaks".into()))?;
    let f = BreakFiltration::new(parse_breaks(spec)?)?;
    let upper = f.upper();
    let report = FiltrationReport {
        breaks: breaks_to_strings(f.breaks()),
        inertia_order: f.inertia_order().to_string(),
        trivialization_break: f.trivialization_break().map(rat_string),
        upper_breaks: breaks_to_strings(upper.breaks()),
        phi: args.phi.as_deref().map(|s| Ok::<_, Error>(rat_string(&f.phi(&parse_rat(s)?)))).transpose()?,
        psi: args.psi.as_deref().map(|s| Ok::<_, Error>(rat_string(&f.psi(&parse_rat(s)?)))).transpose()?,
    };
    Ok(serde_json::to_string(&report)?)
}

// ---------------------------------------------------------------------------
// sgn

#[derive(Args)]
struct SgnArgs {
    /// Arity of the rooted tree [default: 2].
    #[arg(short = 'l', long)]
    ell: Option<u32>,
    /// Target sign vector "1,-1,1" (one sign per level): constructs an
    /// automorphism whose level signs realize it.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    /// Labeled automorphism as JSON, [{"node":[...],"perm":[...]},...];
    /// node is a root path, perm a permutation of 0..l.
    #[arg(long, conflicts_with = "target")]
    aut: Option<String>,
    /// Tree height (required with --aut).
    #[arg(long)]
    height: Option<u32>,
}

impl SgnArgs {
    fn merge(&mut self, cfg: &Cfg) {
        merge_opt(&mut self.ell, cfg.u32_opt("ell").or_else(|| cfg.u32_opt("l")));
        merge_opt(&mut self.target, cfg.string_opt("target"));
        merge_opt(&mut self.aut, cfg.string_opt("aut"));
        merge_opt(&mut self.height, cfg.u32_opt("height"));
    }
}

#[derive(Serialize, Deserialize)]
struct LabelEntry {
    node: Vec<u8>,
    perm: Vec<u8>,
}

#[derive(Serialize)]
struct SgnReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<Vec<i8>>,
    sgn: Vec<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<LabelEntry>>,
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.split(',')
        .map(|tok| match tok.trim() {
            "1" | "+1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(Error::Cli(format!("sign must be 1 or -1, got {other:?}"))),
        })
        .collect()
}

fn label_entries(t: &TreeAut) -> Vec<LabelEntry> {
    t.labels()
        .iter()
        .map(|(node, perm)| LabelEntry { node: node.clone(), perm: perm.clone() })
        .collect()
}

fn run_sgn(args: &SgnArgs) -> Result<String> {
    let ell = args.ell.unwrap_or(2);
    let report = match (&args.target, &args.aut) {
        (Some(spec), None) => {
            let target = parse_signs(spec)?;
            let aut = sign_preimage(&target, ell)?;
            SgnReport {
                target: Some(target),
                sgn: aut.sgn_vector(),
                labels: Some(label_entries(&aut)),
            }
        }
        (None, Some(json)) => {
            let height = args
                .height
                .ok_or_else(|| Error::Cli("--aut needs --height".into()))?;
            let entries: Vec<LabelEntry> = serde_json::from_str(json)?;
            let labels = entries.into_iter().map(|e| (e.node, e.perm)).collect();
            let aut = TreeAut::new(ell, height, labels)?;
            SgnReport { target: None, sgn: aut.sgn_vector(), labels: None }
        }
        _ => return Err(Error::Cli("give exactly one of --target or --aut".into())),
    };
    Ok(serde_json::to_string(&report)?)
}

// ---------------------------------------------------------------------------
// real

#[derive(Args)]
struct RealArgs {
    /// Map degree k.
    #[arg(short, long)]
    k: Option<u32>,
    /// Parameter c as "num/den".
    #[arg(short, long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Base point a as "num/den".
    #[arg(short, long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Run the depth-limited interval-arithmetic exploration instead of the
    /// closed-form verdict.
    #[arg(long)]
    check: bool,
    /// Exploration depth for --check [default: 10].
    #[arg(long)]
    depth: Option<u32>,
    /// Dyadic precision cap in bits for --check
    /// [env ARBOREAL_PRECISION_CAP; default 4096].
    #[arg(long)]
    precision_cap: Option<u32>,
}

impl RealArgs {
    fn merge(&mut self, cfg: &Cfg) {
        merge_opt(&mut self.k, cfg.u32_opt("k"));
        merge_opt(&mut self.c, cfg.string_opt("c"));
        merge_opt(&mut self.a, cfg.string_opt("a"));
        if !self.check {
            self.check = cfg.flag("check");
        }
        merge_opt(&mut self.depth, cfg.u32_opt("depth"));
        merge_opt(&mut self.precision_cap, cfg.u32_opt("precision-cap"));
    }
}

#[derive(Serialize)]
struct RealReport {
    verdict: RealVerdict,
}

#[derive(Serialize)]
struct RealCheckReport {
    depth: u32,
    precision_cap: u32,
    check: RealCheckOutcome,
}

fn run_real(args: &RealArgs) -> Result<String> {
    let k = args.k.ok_or_else(|| Error::Cli("real needs the degree -k".into()))?;
    let c = parse_rat(
        args.c
            .as_deref()
            .ok_or_else(|| Error::Cli("real needs -c".into()))?,
    )?;
    let a = parse_rat(
        args.a
            .as_deref()
            .ok_or_else(|| Error::Cli("real needs -a".into()))?,
    )?;
    if args.check {
        let depth = args.depth.unwrap_or(10);
        let mut precision = 4096u32;
        if let Some(v) = env_cap("ARBOREAL_PRECISION_CAP")? {
            precision = v;
        }
        if let Some(v) = args.precision_cap {
            precision = v;
        }
        let outcome = real_all_real_check(k, &c, &a, depth, precision)?;
        let report = RealCheckReport { depth, precision_cap: precision, check: outcome };
        Ok(serde_json::to_string(&report)?)
    } else {
        let report = RealReport { verdict: classify_real(k, &c, &a)? };
        Ok(serde_json::to_string(&report)?)
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (String, i32) {
        let mut argv = vec!["arboreal"];
        argv.extend_from_slice(args);
        let mut buf = Vec::new();
        let code = run(argv, &mut buf);
        (String::from_utf8(buf).unwrap(), code)
    }

    #[test]
    fn classify_example_reports_cutoff_and_tags() {
        let (out, code) = run_cli(&[
            "classify", "--wild", "-p", "2", "-e", "1", "--vc", "-5/1", "--va", "0/1",
            "--r", "0",
        ]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["cutoff"]["level"], 1);
        assert_eq!(json["cutoff"]["unramified_top"], false);
        assert_eq!(json["finite"], true);
        let tags = json["tags"].as_array().unwrap();
        assert!(tags
            .iter()
            .any(|t| t["tag"] == "full_elem_abelian" && t["level"] == 1));
    }

    #[test]
    fn real_example_is_byte_exact() {
        let (out, code) = run_cli(&["real", "-k", "2", "-c", "2/1", "-a", "0/1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "{\"verdict\":\"AllReal\"}\n");
        let (out, code) = run_cli(&["real", "-k", "2", "-c", "2/1", "-a", "3/1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "{\"verdict\":\"Complex\"}\n");
    }

    #[test]
    fn oracle_example_agrees_and_leads_with_agreement() {
        let (out, code) = run_cli(&["oracle", "--wild", "-p", "2", "-c", "1/8", "-a", "1/1", "-n", "2"]);
        assert_eq!(code, 0, "output: {out}");
        assert!(out.starts_with("{\"agreement\":true,"), "output: {out}");
    }

    #[test]
    fn identical_inputs_identical_bytes() {
        let args = ["oracle", "--wild", "-p", "2", "-c", "1/8", "-a", "1/1", "-n", "2"];
        let (a, _) = run_cli(&args);
        let (b, _) = run_cli(&args);
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_rational_exits_2() {
        let (out, code) = run_cli(&["classify", "--wild", "-p", "2", "--vc", "five", "--va", "0"]);
        assert_eq!(code, 2);
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["error"]["kind"], "invalid-input");
    }

    #[test]
    fn unknown_flag_exits_2() {
        let (out, code) = run_cli(&["classify", "--frobnicate"]);
        assert_eq!(code, 2);
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["error"]["kind"], "usage");
        let (_, code) = run_cli(&["no-such-subcommand"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn cap_exhaustion_exits_3() {
        let (out, code) = run_cli(&[
            "oracle", "--wild", "-p", "2", "-c", "1/8", "-a", "1/1", "-n", "2",
            "--degree-cap", "2",
        ]);
        assert_eq!(code, 3, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["error"]["kind"], "cap-exhausted");
    }

    #[test]
    fn tree_reports_orbit() {
        let (out, code) = run_cli(&[
            "tree", "--wild", "-p", "2", "--vc", "-3", "--va", "0", "-n", "4",
        ]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["levels"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn filtration_reports_upper_transport() {
        // Breaks (0, 4), (1, 2): order 4 on [0,1), then 2. phi has slope 1
        // up to u = 1 and slope 1/2 after, so phi(2) = 3/2 and the upper
        // breaks sit at 0 and phi(1) = 1.
        let (out, code) = run_cli(&["filtration", "--breaks", "0:4,1:2", "--phi", "2", "--psi", "3/2"]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["inertia_order"], "4");
        assert_eq!(json["phi"], "3/2");
        assert_eq!(json["psi"], "2/1");
        assert_eq!(json["upper_breaks"][1][0], "1/1");
    }

    #[test]
    fn sgn_constructs_preimage_and_reads_labels_back() {
        let (out, code) = run_cli(&["sgn", "-l", "2", "--target", "1,-1,1"]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["sgn"], serde_json::json!([1, -1, 1]));
        // Feed the witness labels back through --aut and get the same signs.
        let labels = serde_json::to_string(&json["labels"]).unwrap();
        let (out2, code2) = run_cli(&["sgn", "-l", "2", "--aut", &labels, "--height", "3"]);
        assert_eq!(code2, 0, "output: {out2}");
        let json2: serde_json::Value = serde_json::from_str(&out2).unwrap();
        assert_eq!(json2["sgn"], serde_json::json!([1, -1, 1]));
    }

    #[test]
    fn config_file_supplies_defaults_and_flags_win() {
        let dir = std::env::temp_dir().join("arboreal-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("config.json");
        std::fs::write(
            &cfg_path,
            r#"{"wild": true, "p": 2, "e": 1, "vc": "-5/1", "va": "0/1", "r": 0}"#,
        )
        .unwrap();
        let cfg = cfg_path.to_str().unwrap();
        let (out, code) = run_cli(&["classify", "--config", cfg]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["cutoff"]["level"], 1);
        // An explicit flag overrides the config value: vc = -3 moves the
        // cutoff to level 2.
        let (out, code) = run_cli(&["classify", "--config", cfg, "--vc", "-3/1"]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["cutoff"]["level"], 2);
    }

    #[test]
    fn output_flag_writes_file() {
        let dir = std::env::temp_dir().join("arboreal-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out_path = dir.join("verdict.json");
        let (stdout, code) = run_cli(&[
            "real", "-k", "2", "-c", "2/1", "-a", "0/1", "--output",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(stdout.is_empty());
        assert_eq!(
            std::fs::read_to_string(&out_path).unwrap(),
            "{\"verdict\":\"AllReal\"}\n"
        );
    }

    #[test]
    fn corpus_mode_reports_per_line_and_summary() {
        let dir = std::env::temp_dir().join("arboreal-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let corpus_path = dir.join("corpus.jsonl");
        std::fs::write(
            &corpus_path,
            concat!(
                "{\"mode\":\"wild\",\"p\":2,\"c\":\"1/8\",\"a\":\"1\",\"n\":2,\"expected\":true}\n",
                "# comment lines and blanks are skipped\n",
                "\n",
                "{\"mode\":\"wild\",\"p\":2,\"c\":\"1/4\",\"a\":\"1\",\"n\":1,\"expected\":true}\n",
            ),
        )
        .unwrap();
        let (out, code) = run_cli(&["oracle", "--corpus", corpus_path.to_str().unwrap()]);
        assert_eq!(code, 0, "output: {out}");
        let lines: Vec<&str> = out.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["line"], 1);
        assert_eq!(first["pass"], true);
        let summary: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(summary["total"], 2);
        assert_eq!(summary["passed"], 2);
        assert_eq!(summary["failed"], 0);

        // A wrong expectation turns into a failing line and exit code 2.
        std::fs::write(
            &corpus_path,
            "{\"mode\":\"wild\",\"p\":2,\"c\":\"1/8\",\"a\":\"1\",\"n\":1,\"expected\":false}\n",
        )
        .unwrap();
        let (out, code) = run_cli(&["oracle", "--corpus", corpus_path.to_str().unwrap()]);
        assert_eq!(code, 2, "output: {out}");
        let lines: Vec<&str> = out.trim_end().lines().collect();
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["pass"], false);
        assert_eq!(first["agreement"], true);
    }

    #[test]
    fn tame_classify_computes_residue_orbit_on_demand() {
        // l = 2 over p = 3, c = 1, a = 1: residue orbit of 0 is {0, -1},
        // a-bar not in it: unramified.
        let (out, code) = run_cli(&["classify", "--tame", "-l", "2", "-p", "3", "-c", "1", "-a", "1"]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["ramification"], "unramified");
        // Exact-cycle failure: c = 3, a = 3 over p = 3.
        let (out, code) = run_cli(&["classify", "--tame", "-l", "2", "-p", "3", "-c", "3", "-a", "3"]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["ramification"], "infinitely_ramified");
        assert_eq!(json["finite"], false);
        // Valuations given without concrete values: the residue branch
        // cannot run and says so.
        let (out, code) = run_cli(&["classify", "--tame", "-l", "2", "-p", "3", "--vc", "0", "--va", "0"]);
        assert_eq!(code, 2, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["error"]["kind"], "invalid-input");
    }

    #[test]
    fn boundary_classify_takes_fixed_point_flags() {
        let (out, code) = run_cli(&[
            "classify", "--wild", "-p", "2", "--vc", "-2", "--va", "-1", "--fp-vb", "-1",
            "--fp-va-minus-b", "inf", "--fp-b-in-k", "true",
        ]);
        assert_eq!(code, 0, "output: {out}");
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["regime"], "AtNuInfty");
        assert_eq!(json["ramification"], "unramified");
        assert_eq!(json["finite"], false);
        assert_eq!(json["shallow_w"], "0/1");
    }
}
