//! Command-line surface: input resolution, guarded computations, and
//! human- or JSON-rendered reports.
//!
//! Exit codes reflect operational success only: a computed verdict (PASS or
//! FAIL, valid or invalid) exits 0, so sweeps can script over outputs.
//! Every report echoes the size guards in effect; raise them with the
//! `LOOPFORGE_MAX_ORDER` and `LOOPFORGE_MAX_CHECKS` environment variables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, CatalogError};
use crate::extension::{central_extension, Cocycle, ExtensionError};
use crate::io::{self, IoError};
use crate::loops::{FiniteLoop, LoopError, Subloop};
use crate::steiner::{
    is_steiner_loop, oriented_steiner_loop, steiner_loop, OrientedSts, SteinerError, Sts,
};
use crate::subdirect::{
    direct_product, goursat_decompose, lifted_graph, SubdirectError, SubdirectProduct,
};
use crate::terms::{self, Equation, TermError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Subdirect(#[from] SubdirectError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Usage(String),
    #[error("refused: order {order} exceeds the size guard LOOPFORGE_MAX_ORDER={limit}")]
    OrderGuard { order: usize, limit: usize },
    #[error("could not write {path}: {source}")]
    WriteFile {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Size guards in effect for one invocation, echoed in every report.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Guards {
    /// Largest loop order any command will compute with.
    pub max_order: usize,
    /// Tuple-evaluation budget for exhaustive equation scans.
    pub max_checks: u64,
}

pub const DEFAULT_MAX_ORDER: usize = 256;

impl Guards {
    pub fn from_env() -> Self {
        fn parse_env<T: std::str::FromStr>(name: &str, default: T) -> T {
            std::env::var(name)
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(default)
        }
        Guards {
            max_order: parse_env("LOOPFORGE_MAX_ORDER", DEFAULT_MAX_ORDER),
            max_checks: parse_env("LOOPFORGE_MAX_CHECKS", terms::DEFAULT_BUDGET),
        }
    }

    fn check_order(&self, order: usize) -> Result<(), CliError> {
        if order > self.max_order {
            return Err(CliError::OrderGuard {
                order,
                limit: self.max_order,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "loopforge",
    version,
    about = "Finite loops: equation propagation, subdirect products, triple systems, central extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a machine-readable JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural report on a loop: order, identities, center, subloops
    Analyze {
        /// Table file, `builtin:NAME`, or bare catalog name
        input: String,
    },
    /// Check whether an equation propagates to generated subloops
    Propagate {
        /// Table file, `builtin:NAME`, or bare catalog name
        input: String,
        /// Builtin name (assoc, comm, cube, steiner, moufang, rajah) or a
        /// literal equation such as "(x*x)*x = e"
        #[arg(long)]
        eq: String,
        /// Check the quotient by the center instead of the loop itself
        #[arg(long)]
        quotient_by_center: bool,
    },
    /// Triple-system checks and conversions
    Steiner {
        #[arg(value_enum)]
        action: SteinerAction,
        /// Block file, `builtin:NAME`, or bare catalog name; for `orient`,
        /// the token order within each file line is the block's cyclic order
        input: String,
        /// Diagonal cocycle value for `orient`
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        diag: u8,
        /// Write emitted tables here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose a subloop of a two-factor product into kernels and an
    /// isomorphism of quotients
    Goursat {
        /// Factor inputs joined by a literal `x`, then the tuple file:
        /// `loopforge goursat Z4 x Z2 carrier.txt`
        #[arg(num_args = 2.., value_name = "SPEC")]
        args: Vec<String>,
    },
    /// Build a central extension from a cocycle file
    Extend {
        /// Cocycle file (line 1 `Zn`, line 2 base loop reference, then
        /// `x y v` entries) or `builtin:NAME`
        input: String,
        /// Mirror every file entry to the transposed position
        #[arg(long)]
        symmetric: bool,
        /// Write the resulting table here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the example catalog or emit one entry in its file format
    Builtin {
        #[command(subcommand)]
        action: BuiltinAction,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SteinerAction {
    /// Check the pair-coverage axioms
    Validate,
    /// Search for Pasch configurations
    AntiPasch,
    /// Check that no 4 points generate a proper subsystem
    Minimal,
    /// Check that every non-collinear triple generates an affine plane
    Hall,
    /// Emit the Cayley table of the induced loop
    ToLoop,
    /// Emit the loop doubling the system via its orientation
    Orient,
}

impl SteinerAction {
    fn name(self) -> &'static str {
        match self {
            SteinerAction::Validate => "validate",
            SteinerAction::AntiPasch => "anti-pasch",
            SteinerAction::Minimal => "minimal",
            SteinerAction::Hall => "hall",
            SteinerAction::ToLoop => "to-loop",
            SteinerAction::Orient => "orient",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum BuiltinAction {
    /// List every catalog entry
    List,
    /// Write one entry in its canonical file format
    Emit {
        name: String,
        /// Write here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parses `std::env::args`, runs the command, prints the report.
/// Returns the process exit code: 0 when a verdict was computed, 1 on an
/// operational error.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs one parsed command and returns its full output text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let guards = Guards::from_env();
    match &cli.command {
        Command::Analyze { input } => cmd_analyze(input, cli.json, guards),
        Command::Propagate {
            input,
            eq,
            quotient_by_center,
        } => cmd_propagate(input, eq, *quotient_by_center, cli.json, guards),
        Command::Steiner {
            action,
            input,
            diag,
            output,
        } => cmd_steiner(*action, input, *diag, output.as_deref(), cli.json, guards),
        Command::Goursat { args } => cmd_goursat(args, cli.json, guards),
        Command::Extend {
            input,
            symmetric,
            output,
        } => cmd_extend(input, *symmetric, output.as_deref(), cli.json, guards),
        Command::Builtin { action } => cmd_builtin(action, cli.json),
    }
}

fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn write_output(text: &str, output: Option<&Path>) -> Result<String, CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::WriteFile {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Input resolution
// ---------------------------------------------------------------------------

/// Resolves a loop input: `builtin:` prefix first, then an existing file,
/// then a bare catalog name.  Applies the order guard.
pub fn resolve_loop_input(
    spec: &str,
    guards: &Guards,
) -> Result<(FiniteLoop, Vec<String>), CliError> {
    let (l, warnings) = io::resolve_loop_ref(spec, None)?;
    guards.check_order(l.order())?;
    Ok((l, warnings))
}

fn resolve_sts_input(spec: &str) -> Result<Sts, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(catalog::builtin_sts(name)?);
    }
    let path = Path::new(spec);
    if path.exists() {
        Ok(io::read_sts(path)?)
    } else if let Ok(s) = catalog::builtin_sts(spec) {
        Ok(s)
    } else {
        Err(CliError::Usage(format!(
            "no file or builtin system named `{spec}`"
        )))
    }
}

/// Oriented systems: a file's per-line token order is the cyclic order; a
/// builtin name gets each block oriented in sorted point order.
fn resolve_oriented_input(spec: &str) -> Result<OrientedSts, CliError> {
    let path = Path::new(spec);
    if !spec.starts_with("builtin:") && path.exists() {
        return Ok(io::read_oriented_sts(path)?);
    }
    let s = resolve_sts_input(spec)?;
    let nb = s.blocks().len();
    Ok(OrientedSts::from_bits(s, &vec![false; nb])?)
}

fn resolve_equation(spec: &str) -> Result<Equation, CliError> {
    match terms::builtin_equation(spec) {
        Some(eq) => Ok(eq),
        None => Ok(terms::parse_equation(spec)?),
    }
}

fn label_tuple(l: &FiniteLoop, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&x| l.label(x)).collect()
}

fn render_tuple(labels: &[String]) -> String {
    format!("({})", labels.join(", "))
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CenterReport {
    size: usize,
    elements: Vec<String>,
}

#[derive(Serialize)]
struct SubloopSummary {
    total: usize,
    abelian_group: usize,
    nonabelian_simple: usize,
    other: usize,
}

#[derive(Serialize)]
struct AnalyzeReport {
    command: &'static str,
    input: String,
    warnings: Vec<String>,
    order: usize,
    classification: String,
    commutative: bool,
    associative: bool,
    steiner: bool,
    diassociative: bool,
    simple: bool,
    center: CenterReport,
    /// Least n with every n-fold power the identity, searched up to 2·order.
    exponent: Option<usize>,
    subloops: SubloopSummary,
    guards: Guards,
}

fn classification(commutative: bool, associative: bool, steiner: bool) -> &'static str {
    match (associative, commutative, steiner) {
        (true, true, _) => "abelian group",
        (true, false, _) => "nonabelian group",
        (false, _, true) => "Steiner loop",
        (false, true, false) => "commutative loop",
        (false, false, false) => "loop",
    }
}

fn cmd_analyze(input: &str, json: bool, guards: Guards) -> Result<String, CliError> {
    let (l, warnings) = resolve_loop_input(input, &guards)?;
    let commutative = l.is_commutative();
    let associative = l.is_associative();
    let steiner = is_steiner_loop(&l);
    // Groups are diassociative outright; skip the per-pair closure scan.
    let diassociative = associative || l.is_diassociative();
    let center = l.center();
    let classified = crate::loops::classify_subloops(&l, guards.max_order)?;
    let report = AnalyzeReport {
        command: "analyze",
        input: input.to_string(),
        warnings,
        order: l.order(),
        classification: classification(commutative, associative, steiner).to_string(),
        commutative,
        associative,
        steiner,
        diassociative,
        simple: l.is_simple(),
        center: CenterReport {
            size: center.len(),
            elements: label_tuple(&l, center.elements()),
        },
        exponent: l.exponent(),
        subloops: SubloopSummary {
            total: classified.entries.len(),
            abelian_group: classified.count(crate::loops::SubloopClass::AbelianGroup),
            nonabelian_simple: classified.count(crate::loops::SubloopClass::NonabelianSimple),
            other: classified.count(crate::loops::SubloopClass::Other),
        },
        guards,
    };
    if json {
        return Ok(to_json(&report));
    }
    let mut out = String::new();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(out, "analyze {input}").unwrap();
    writeln!(out, "order: {}", report.order).unwrap();
    writeln!(out, "classification: {}", report.classification).unwrap();
    writeln!(
        out,
        "commutative: {}   associative: {}   Steiner: {}",
        yes_no(report.commutative),
        yes_no(report.associative),
        yes_no(report.steiner)
    )
    .unwrap();
    writeln!(
        out,
        "diassociative: {}   simple: {}",
        yes_no(report.diassociative),
        yes_no(report.simple)
    )
    .unwrap();
    writeln!(
        out,
        "center: {} element{} {{{}}}",
        report.center.size,
        plural(report.center.size),
        report.center.elements.join(", ")
    )
    .unwrap();
    match report.exponent {
        Some(n) => writeln!(out, "exponent: {n}").unwrap(),
        None => writeln!(out, "exponent: none up to {}", 2 * report.order).unwrap(),
    }
    writeln!(
        out,
        "subloops: {} total ({} abelian group{}, {} nonabelian simple, {} other)",
        report.subloops.total,
        report.subloops.abelian_group,
        plural(report.subloops.abelian_group),
        report.subloops.nonabelian_simple,
        report.subloops.other
    )
    .unwrap();
    out.push_str(&render_guards(&guards));
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn render_guards(g: &Guards) -> String {
    format!(
        "guards: LOOPFORGE_MAX_ORDER={} LOOPFORGE_MAX_CHECKS={}\n",
        g.max_order, g.max_checks
    )
}

// ---------------------------------------------------------------------------
// propagate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PropagateReport {
    command: &'static str,
    input: String,
    equation: String,
    quotient_by_center: bool,
    warnings: Vec<String>,
    order: usize,
    propagates: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subloop_size: Option<usize>,
    witnesses_checked: u64,
    subloops_verified: usize,
    guards: Guards,
}

fn cmd_propagate(
    input: &str,
    eq_spec: &str,
    quotient_by_center: bool,
    json: bool,
    guards: Guards,
) -> Result<String, CliError> {
    let (loaded, warnings) = resolve_loop_input(input, &guards)?;
    let l = if quotient_by_center {
        let z = loaded.center();
        let (q, hom) = loaded.quotient(&z)?;
        // Name each coset after its least representative.
        let mut labels = vec![String::new(); q.order()];
        for x in loaded.elements() {
            let c = hom.apply(x);
            if labels[c].is_empty() {
                labels[c] = format!("[{}]", loaded.label(x));
            }
        }
        q.with_labels(labels)?
    } else {
        loaded
    };
    let eq = resolve_equation(eq_spec)?;
    let r = terms::propagates_with_budget(&eq, &l, guards.max_checks)?;
    let report = PropagateReport {
        command: "propagate",
        input: input.to_string(),
        equation: eq.to_string(),
        quotient_by_center,
        warnings,
        order: l.order(),
        propagates: r.propagates,
        witness: r.witness.as_deref().map(|t| label_tuple(&l, t)),
        failure: r.failure.as_deref().map(|t| label_tuple(&l, t)),
        subloop_size: r.subloop_size,
        witnesses_checked: r.witnesses_checked,
        subloops_verified: r.subloops_verified,
        guards,
    };
    if json {
        return Ok(to_json(&report));
    }
    let mut out = String::new();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(out, "propagate {input} --eq {eq_spec}").unwrap();
    writeln!(out, "equation: {}", report.equation).unwrap();
    if quotient_by_center {
        writeln!(out, "analyzing the quotient by the center (order {})", report.order).unwrap();
    } else {
        writeln!(out, "order: {}", report.order).unwrap();
    }
    if report.propagates {
        writeln!(out, "verdict: PASS (the equation propagates)").unwrap();
    } else {
        writeln!(out, "verdict: FAIL (the equation does not propagate)").unwrap();
        if let Some(w) = &report.witness {
            writeln!(
                out,
                "witness: {} satisfies it but generates a subloop of size {} with violations",
                render_tuple(w),
                report.subloop_size.unwrap_or(0)
            )
            .unwrap();
        }
        if let Some(fail) = &report.failure {
            writeln!(out, "failure: {} violates it there", render_tuple(fail)).unwrap();
        }
    }
    writeln!(
        out,
        "satisfying tuples checked: {}, subloops verified: {}",
        report.witnesses_checked, report.subloops_verified
    )
    .unwrap();
    out.push_str(&render_guards(&guards));
    Ok(out)
}

// ---------------------------------------------------------------------------
// steiner
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SteinerReport {
    command: &'static str,
    action: &'static str,
    input: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pasch_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pasch: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    anti_pasch: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hall: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diag: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<String>,
    guards: Guards,
}

impl SteinerReport {
    fn new(action: SteinerAction, input: &str, guards: Guards) -> Self {
        SteinerReport {
            command: "steiner",
            action: action.name(),
            input: input.to_string(),
            valid: true,
            reason: None,
            points: None,
            blocks: None,
            pasch_count: None,
            pasch: None,
            anti_pasch: None,
            minimal: None,
            hall: None,
            diag: None,
            loop_order: None,
            table: None,
            guards,
        }
    }
}

fn block_labels(s: &Sts, b: &[usize; 3]) -> Vec<String> {
    b.iter().map(|&p| s.label(p)).collect()
}

fn cmd_steiner(
    action: SteinerAction,
    input: &str,
    diag: u8,
    output: Option<&Path>,
    json: bool,
    guards: Guards,
) -> Result<String, CliError> {
    let mut report = SteinerReport::new(action, input, guards);

    if let SteinerAction::Validate = action {
        // Invalid pair coverage is a computed verdict, not an operational
        // error; anything else (missing file, malformed lines) stays fatal.
        match resolve_sts_input(input) {
            Ok(s) => {
                report.points = Some(s.n());
                report.blocks = Some(s.blocks().len());
            }
            Err(CliError::Io(IoError::Steiner(e))) => {
                report.valid = false;
                report.reason = Some(e.to_string());
            }
            Err(CliError::Catalog(e)) => return Err(CliError::Catalog(e)),
            Err(e) => return Err(e),
        }
        if json {
            return Ok(to_json(&report));
        }
        let mut out = String::new();
        writeln!(out, "steiner validate {input}").unwrap();
        if report.valid {
            writeln!(
                out,
                "verdict: valid ({} points, {} blocks)",
                report.points.unwrap(),
                report.blocks.unwrap()
            )
            .unwrap();
        } else {
            writeln!(out, "verdict: invalid — {}", report.reason.as_ref().unwrap()).unwrap();
        }
        out.push_str(&render_guards(&guards));
        return Ok(out);
    }

    match action {
        SteinerAction::Validate => unreachable!("handled above"),
        SteinerAction::AntiPasch | SteinerAction::Minimal | SteinerAction::Hall => {
            let s = resolve_sts_input(input)?;
            report.points = Some(s.n());
            report.blocks = Some(s.blocks().len());
            let mut out = String::new();
            writeln!(out, "steiner {} {input}", action.name()).unwrap();
            writeln!(
                out,
                "system: {} points, {} blocks",
                s.n(),
                s.blocks().len()
            )
            .unwrap();
            match action {
                SteinerAction::AntiPasch => {
                    let configs = s.pasch_configurations();
                    report.pasch_count = Some(configs.len());
                    report.anti_pasch = Some(configs.is_empty());
                    report.pasch = Some(
                        configs
                            .iter()
                            .map(|q| {
                                q.iter()
                                    .map(|&bi| block_labels(&s, &s.blocks()[bi]))
                                    .collect()
                            })
                            .collect(),
                    );
                    if configs.is_empty() {
                        writeln!(out, "verdict: anti-Pasch (no Pasch configuration)").unwrap();
                    } else {
                        writeln!(
                            out,
                            "verdict: not anti-Pasch ({} Pasch configuration{})",
                            configs.len(),
                            plural(configs.len())
                        )
                        .unwrap();
                        for q in &configs {
                            let rendered: Vec<String> = q
                                .iter()
                                .map(|&bi| {
                                    format!("{{{}}}", block_labels(&s, &s.blocks()[bi]).join(" "))
                                })
                                .collect();
                            writeln!(out, "  {}", rendered.join(" ")).unwrap();
                        }
                    }
                }
                SteinerAction::Minimal => {
                    let v = s.is_minimal();
                    report.minimal = Some(v);
                    writeln!(
                        out,
                        "verdict: {}",
                        if v {
                            "minimal (no 4 points generate a proper subsystem)"
                        } else {
                            "not minimal"
                        }
                    )
                    .unwrap();
                }
                SteinerAction::Hall => {
                    let v = s.is_hall();
                    report.hall = Some(v);
                    writeln!(
                        out,
                        "verdict: {}",
                        if v {
                            "Hall (every non-collinear triple generates an affine plane)"
                        } else {
                            "not Hall"
                        }
                    )
                    .unwrap();
                }
                _ => unreachable!(),
            }
            if json {
                return Ok(to_json(&report));
            }
            out.push_str(&render_guards(&guards));
            Ok(out)
        }
        SteinerAction::ToLoop => {
            let s = resolve_sts_input(input)?;
            guards.check_order(s.n() + 1)?;
            let l = steiner_loop(&s);
            let text = io::write_loop(&l);
            report.points = Some(s.n());
            report.blocks = Some(s.blocks().len());
            report.loop_order = Some(l.order());
            report.table = Some(text.clone());
            if json {
                return Ok(to_json(&report));
            }
            write_output(&text, output)
        }
        SteinerAction::Orient => {
            let o = resolve_oriented_input(input)?;
            guards.check_order(2 * (o.base().n() + 1))?;
            let l = oriented_steiner_loop(&o, diag);
            let text = io::write_loop(&l);
            report.points = Some(o.base().n());
            report.blocks = Some(o.base().blocks().len());
            report.diag = Some(diag);
            report.loop_order = Some(l.order());
            report.table = Some(text.clone());
            if json {
                return Ok(to_json(&report));
            }
            write_output(&text, output)
        }
    }
}

// ---------------------------------------------------------------------------
// goursat
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SubloopSetReport {
    size: usize,
    elements: Vec<String>,
}

#[derive(Serialize)]
struct PhiEntry {
    from: Vec<String>,
    to: Vec<String>,
}

#[derive(Serialize)]
struct GoursatReport {
    command: &'static str,
    factors: Vec<String>,
    tuple_file: String,
    product_order: usize,
    carrier_size: usize,
    n1: SubloopSetReport,
    n2: SubloopSetReport,
    quotient_order: usize,
    /// The quotient isomorphism as coset tables: members of each coset of
    /// N1 alongside the members of its image coset of N2.
    phi: Vec<PhiEntry>,
    roundtrip_ok: bool,
    guards: Guards,
}

fn cmd_goursat(args: &[String], json: bool, guards: Guards) -> Result<String, CliError> {
    let Some((tuple_file, spec)) = args.split_last() else {
        return Err(CliError::Usage(
            "expected factors joined by `x` and a tuple file".into(),
        ));
    };
    let mut factor_specs: Vec<&str> = Vec::new();
    for group in spec.split(|t| t == "x") {
        match group {
            [one] => factor_specs.push(one.as_str()),
            [] => {
                return Err(CliError::Usage(
                    "empty factor in the product spec; write `A x B tuples.txt`".into(),
                ))
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "factor `{}` is several tokens; separate factors with a literal `x`",
                    group.join(" ")
                )))
            }
        }
    }
    if factor_specs.len() < 2 {
        return Err(CliError::Usage(
            "expected at least two factors joined by `x`".into(),
        ));
    }
    let mut factors = Vec::new();
    let mut all_warnings = Vec::new();
    for f in &factor_specs {
        let (l, mut w) = io::resolve_loop_ref(f, None)?;
        all_warnings.append(&mut w);
        factors.push(l);
    }
    let order: usize = factors.iter().map(FiniteLoop::order).product();
    guards.check_order(order)?;
    let refs: Vec<&FiniteLoop> = factors.iter().collect();
    let product = direct_product(&refs)?;
    let tuples = io::read_tuples(Path::new(tuple_file), &product)?;
    let carrier = Subloop::from_elements(product.underlying(), tuples)?;
    let sd = SubdirectProduct::new(&product, carrier)?;
    let data = goursat_decompose(&sd)?;

    // Lift the decomposition back and compare carriers.
    let lift = lifted_graph(&product, &data.n1, &data.n2, &data.phi)?;
    let roundtrip_ok = lift.carrier().elements() == sd.carrier().elements();

    let f1 = product.factor(0);
    let f2 = product.factor(1);
    let coset_members = |hom: &crate::loops::LoopHom, coset: usize, factor: &FiniteLoop| {
        let members: Vec<String> = factor
            .elements()
            .filter(|&x| hom.apply(x) == coset)
            .map(|x| factor.label(x))
            .collect();
        members
    };
    let phi: Vec<PhiEntry> = (0..data.quotient1.order())
        .map(|c| PhiEntry {
            from: coset_members(&data.proj1, c, f1),
            to: coset_members(&data.proj2, data.phi.apply(c), f2),
        })
        .collect();

    let report = GoursatReport {
        command: "goursat",
        factors: factor_specs.iter().map(|s| s.to_string()).collect(),
        tuple_file: tuple_file.clone(),
        product_order: order,
        carrier_size: sd.carrier().len(),
        n1: SubloopSetReport {
            size: data.n1.len(),
            elements: label_tuple(f1, data.n1.elements()),
        },
        n2: SubloopSetReport {
            size: data.n2.len(),
            elements: label_tuple(f2, data.n2.elements()),
        },
        quotient_order: data.quotient1.order(),
        phi,
        roundtrip_ok,
        guards,
    };
    if json {
        return Ok(to_json(&report));
    }
    let mut out = String::new();
    for w in &all_warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(
        out,
        "goursat {} ({} tuples from {})",
        report.factors.join(" x "),
        report.carrier_size,
        tuple_file
    )
    .unwrap();
    writeln!(out, "product order: {}, subdirect: yes", report.product_order).unwrap();
    writeln!(
        out,
        "N1 (first coordinates paired with the second identity): {{{}}}",
        report.n1.elements.join(", ")
    )
    .unwrap();
    writeln!(
        out,
        "N2 (second coordinates paired with the first identity): {{{}}}",
        report.n2.elements.join(", ")
    )
    .unwrap();
    writeln!(out, "common quotient order: {}", report.quotient_order).unwrap();
    writeln!(out, "phi (cosets of N1 -> cosets of N2):").unwrap();
    for entry in &report.phi {
        writeln!(
            out,
            "  {{{}}} -> {{{}}}",
            entry.from.join(", "),
            entry.to.join(", ")
        )
        .unwrap();
    }
    writeln!(
        out,
        "roundtrip: lifted graph {} the carrier",
        if report.roundtrip_ok {
            "reproduces"
        } else {
            "DOES NOT reproduce"
        }
    )
    .unwrap();
    out.push_str(&render_guards(&guards));
    Ok(out)
}

// ---------------------------------------------------------------------------
// extend
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ExtendReport {
    command: &'static str,
    input: String,
    warnings: Vec<String>,
    z_order: usize,
    base_order: usize,
    total_order: usize,
    center_size: usize,
    steiner: bool,
    table: String,
    guards: Guards,
}

fn resolve_cocycle_input(
    spec: &str,
    symmetric: bool,
) -> Result<(Cocycle, Vec<String>), CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok((catalog::builtin_cocycle(name)?, Vec::new()));
    }
    let path = Path::new(spec);
    if path.exists() {
        Ok(io::read_cocycle(path, symmetric)?)
    } else if let Ok(c) = catalog::builtin_cocycle(spec) {
        Ok((c, Vec::new()))
    } else {
        Err(CliError::Usage(format!(
            "no file or builtin cocycle named `{spec}`"
        )))
    }
}

fn cmd_extend(
    input: &str,
    symmetric: bool,
    output: Option<&Path>,
    json: bool,
    guards: Guards,
) -> Result<String, CliError> {
    let (c, warnings) = resolve_cocycle_input(input, symmetric)?;
    guards.check_order(c.z_group().order() * c.base().order())?;
    let ext = central_extension(&c)?;
    let text = io::write_loop(&ext.total);
    let report = ExtendReport {
        command: "extend",
        input: input.to_string(),
        warnings,
        z_order: c.z_group().order(),
        base_order: c.base().order(),
        total_order: ext.total.order(),
        center_size: ext.total.center().len(),
        steiner: is_steiner_loop(&ext.total),
        table: text.clone(),
        guards,
    };
    if json {
        return Ok(to_json(&report));
    }
    write_output(&text, output)
}

// ---------------------------------------------------------------------------
// builtin
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CatalogEntryReport {
    name: String,
    kind: &'static str,
    summary: String,
}

#[derive(Serialize)]
struct CatalogListReport {
    command: &'static str,
    entries: Vec<CatalogEntryReport>,
}

#[derive(Serialize)]
struct EmitReport {
    command: &'static str,
    name: String,
    kind: &'static str,
    text: String,
}

fn cmd_builtin(action: &BuiltinAction, json: bool) -> Result<String, CliError> {
    match action {
        BuiltinAction::List => {
            let entries: Vec<CatalogEntryReport> = catalog::entries()
                .iter()
                .map(|e| CatalogEntryReport {
                    name: e.name.to_string(),
                    kind: e.kind.as_str(),
                    summary: e.summary.to_string(),
                })
                .collect();
            let report = CatalogListReport {
                command: "builtin",
                entries,
            };
            if json {
                return Ok(to_json(&report));
            }
            let mut out = String::new();
            let width = report
                .entries
                .iter()
                .map(|e| e.name.len())
                .max()
                .unwrap_or(0);
            for e in &report.entries {
                writeln!(
                    out,
                    "{:width$}  {:7}  {}",
                    e.name,
                    e.kind,
                    e.summary,
                    width = width
                )
                .unwrap();
            }
            Ok(out)
        }
        BuiltinAction::Emit { name, output } => {
            let (kind, text) = emit_entry(name)?;
            if json {
                return Ok(to_json(&EmitReport {
                    command: "builtin",
                    name: name.clone(),
                    kind,
                    text,
                }));
            }
            write_output(&text, output.as_deref())
        }
    }
}

fn emit_entry(name: &str) -> Result<(&'static str, String), CliError> {
    if let Ok(l) = catalog::builtin_loop(name) {
        return Ok(("loop", io::write_loop(&l)));
    }
    if let Ok(s) = catalog::builtin_sts(name) {
        return Ok(("sts", io::write_sts(&s)));
    }
    if let Ok(c) = catalog::builtin_cocycle(name) {
        let base_ref = catalog::cocycle_base_ref(name).expect("builtin cocycles have base names");
        return Ok(("cocycle", io::write_cocycle(&c, base_ref)));
    }
    let available: Vec<&str> = catalog::entries().iter().map(|e| e.name).collect();
    Err(CliError::Usage(format!(
        "unknown catalog entry `{name}`; available: {}",
        available.join(", ")
    )))
}
