use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxchi_core::certificate::{parse_certificate, to_string as certificate_json, verify_certificate};
use boxchi_core::embedding::{find_path_induced_tree, TreeSearch};
use boxchi_core::error::Error;
use boxchi_core::generators::{generate, Family, GenParams, GenSpec};
use boxchi_core::geometry::{common_dimension, normalize, AxisBox, Pattern};
use boxchi_core::graph::oracles::{alpha, chi, omega};
use boxchi_core::graph::{intersection_graph, make_trk, OracleLimits};
use boxchi_core::io::{parse_boxes, write_boxes_text};
use boxchi_core::pattern::{decompose, verify_basic};
use boxchi_core::pipeline::{color_or_find_forest, Certificate, PipelineConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_INPUT: u8 = 2;
const EXIT_TREE: u8 = 3;
const EXIT_REFUSED: u8 = 4;
const EXIT_FAILED: u8 = 5;

/// Colour box intersection graphs within a proven bound, or find an induced tree.
///
/// Input boxes are normalized on load: every endpoint is replaced by its rank,
/// which settles touching boxes by the normalization tie rule.
#[derive(Parser)]
#[command(name = "boxchi", version)]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,

    /// Worker threads for per-pattern work (default: all cores).
    #[arg(long, global = true, env = "BOXCHI_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest graph the exact clique and independence oracles accept.
    #[arg(long, global = true, env = "BOXCHI_CLIQUE_LIMIT", default_value_t = OracleLimits::default().clique)]
    clique_limit: usize,
    /// Largest graph the exact chromatic oracle accepts.
    #[arg(long, global = true, env = "BOXCHI_CHI_LIMIT", default_value_t = OracleLimits::default().chi)]
    chi_limit: usize,
    /// Largest pattern tree the induced-copy search accepts.
    #[arg(long, global = true, env = "BOXCHI_INDUCED_LIMIT", default_value_t = OracleLimits::default().induced)]
    induced_limit: usize,
    /// Largest instance for the path-enumerating modesty and divergence checks.
    #[arg(long, global = true, env = "BOXCHI_PATH_LIMIT", default_value_t = OracleLimits::default().paths)]
    path_limit: usize,
}

impl LimitArgs {
    fn limits(&self) -> OracleLimits {
        OracleLimits {
            clique: self.clique_limit,
            chi: self.chi_limit,
            induced: self.induced_limit,
            paths: self.path_limit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a box file.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform-random: endpoints drawn from 0..range.
        #[arg(long, default_value_t = GenParams::default().range)]
        range: u64,
        /// uniform-random: longest allowed side.
        #[arg(long)]
        max_side: Option<u64>,
        /// burling-like: recursion level.
        #[arg(long)]
        level: Option<usize>,
        /// Output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-pattern arc counts with acyclic/modest/divergent flags.
    Decompose { input: PathBuf },
    /// Colour within the bound or return an induced complete k-ary tree of depth r.
    Color {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Upper bound on the clique number to use instead of the exact oracle.
        #[arg(long)]
        omega: Option<usize>,
        /// Certificate path; without it the certificate goes to stdout and the
        /// summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against a box file.
    Verify { input: PathBuf, certificate: PathBuf },
    /// Exact graph statistics.
    Oracle { input: PathBuf, stat: Stat },
    /// Search every pattern digraph for a path-induced complete k-ary tree.
    FindTree {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
    },
    /// Rewrite a box file with every endpoint replaced by its rank.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Chi,
    Omega,
    Alpha,
    Ehcheck,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleLimit { .. } => EXIT_REFUSED,
            Error::Internal(_) | Error::HostInconsistency(_) | Error::NotAcyclic => 1,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Vec<AxisBox>, Failure> {
    let boxes = parse_boxes(&read(path)?)?;
    Ok(normalize(&boxes)?)
}

// Huge bounds are shown by their leading digits and length.
fn abbreviate(digits: String) -> String {
    if digits.len() <= 40 {
        digits
    } else {
        format!("{}...({} digits)", &digits[..12], digits.len())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let limits = cli.limits.limits();
    if [limits.clique, limits.chi, limits.induced, limits.paths].contains(&0) {
        eprintln!("error: oracle limits must be positive");
        return ExitCode::from(EXIT_INPUT);
    }
    match run(cli.command, &limits) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, limits: &OracleLimits) -> CmdResult {
    match command {
        Command::Gen {
            family,
            n,
            d,
            seed,
            range,
            max_side,
            level,
            out,
        } => {
            let spec = GenSpec {
                n,
                d,
                seed,
                family: family.parse::<Family>()?,
                params: GenParams {
                    range,
                    max_side,
                    level,
                },
            };
            let boxes = generate(&spec)?;
            write_or_print(out.as_deref(), &write_boxes_text(&boxes))?;
            Ok(0)
        }
        Command::Normalize { input, out } => {
            write_or_print(out.as_deref(), &write_boxes_text(&load(&input)?))?;
            Ok(0)
        }
        Command::Decompose { input } => cmd_decompose(&load(&input)?, limits),
        Command::Color {
            input,
            r,
            k,
            omega,
            out,
        } => cmd_color(&load(&input)?, r, k, omega, out.as_deref(), limits),
        Command::Verify { input, certificate } => {
            let boxes = load(&input)?;
            let cert = parse_certificate(&read(&certificate)?)?;
            let verdict = verify_certificate(&boxes, &cert)?;
            if verdict.pass {
                println!("pass: {}", verdict.detail);
                Ok(0)
            } else {
                println!("fail: {}", verdict.detail);
                Ok(EXIT_FAILED)
            }
        }
        Command::Oracle { input, stat } => cmd_oracle(&load(&input)?, stat, limits),
        Command::FindTree { input, r, k } => cmd_find_tree(&load(&input)?, r, k),
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn cmd_decompose(boxes: &[AxisBox], limits: &OracleLimits) -> CmdResult {
    let g = intersection_graph(boxes);
    let family = decompose(boxes)?;
    let full = boxes.len() <= limits.paths;
    if !full {
        eprintln!(
            "note: {} boxes exceed the path limit {}; only acyclicity is checked",
            boxes.len(),
            limits.paths
        );
    }
    println!("pattern\tarcs\tacyclic\tmodest\tdivergent");
    let mut all_ok = true;
    for pd in &family {
        let arcs = pd.digraph.arc_count();
        if full {
            let rep = verify_basic(pd, &g, limits)?;
            all_ok &= rep.all();
            println!(
                "{}\t{arcs}\t{}\t{}\t{}",
                pd.pattern,
                flag(rep.acyclic),
                flag(rep.modest),
                flag(rep.divergent)
            );
        } else {
            let acyclic = pd.digraph.is_acyclic();
            all_ok &= acyclic;
            println!("{}\t{arcs}\t{}\t-\t-", pd.pattern, flag(acyclic));
        }
    }
    Ok(if all_ok { 0 } else { EXIT_FAILED })
}

fn cmd_color(
    boxes: &[AxisBox],
    r: usize,
    k: usize,
    omega_override: Option<usize>,
    out: Option<&Path>,
    limits: &OracleLimits,
) -> CmdResult {
    if r == 0 || k == 0 {
        return Err(input_error("color needs --r >= 1 and --k >= 1"));
    }
    let config = PipelineConfig {
        limits: *limits,
        omega_override,
        threads: None,
    };
    let outcome = color_or_find_forest(boxes, r, k, &config)?;
    let json = certificate_json(&outcome.certificate, boxes);
    let size = match &outcome.certificate {
        Certificate::ProperColoring { coloring, .. } => format!("palette={}", coloring.palette_size),
        Certificate::InducedTree { tree, .. } => format!("tree_size={}", tree.n()),
    };
    let summary = format!(
        "kind={} {size} omega={} paper_bound={} derived_bound={}",
        outcome.certificate.kind(),
        outcome.omega,
        abbreviate(outcome.bounds.paper_bound.to_string()),
        abbreviate(outcome.bounds.derived_bound.to_string()),
    );
    match out {
        Some(_) => {
            write_or_print(out, &json)?;
            println!("{summary}");
        }
        None => {
            print!("{json}");
            eprintln!("{summary}");
        }
    }
    Ok(match outcome.certificate {
        Certificate::ProperColoring { .. } => 0,
        Certificate::InducedTree { .. } => EXIT_TREE,
    })
}

fn cmd_oracle(boxes: &[AxisBox], stat: Stat, limits: &OracleLimits) -> CmdResult {
    let g = intersection_graph(boxes);
    match stat {
        Stat::Chi => println!("{}", chi(&g, limits)?),
        Stat::Omega => println!("{}", omega(&g, limits)?),
        Stat::Alpha => println!("{}", alpha(&g, limits)?),
        Stat::Ehcheck => {
            let d = common_dimension(boxes)?;
            let a = alpha(&g, limits)? as u128;
            let w = omega(&g, limits)? as u128;
            let rhs = a.pow(d as u32) * w;
            let n = boxes.len() as u128;
            let ok = n <= rhs;
            println!(
                "n={n} alpha={a} omega={w} d={d} alpha^d*omega={rhs} {}",
                if ok { "pass" } else { "fail" }
            );
            if !ok {
                return Ok(EXIT_FAILED);
            }
        }
    }
    Ok(0)
}

fn tree_size(r: usize, k: usize) -> Option<usize> {
    let (mut total, mut level) = (0usize, 1usize);
    for _ in 0..=r {
        total = total.checked_add(level)?;
        level = level.checked_mul(k)?;
    }
    Some(total)
}

fn cmd_find_tree(boxes: &[AxisBox], r: usize, k: usize) -> CmdResult {
    if k == 0 {
        return Err(input_error("find-tree needs --k >= 1"));
    }
    let n = boxes.len();
    if tree_size(r, k).is_none_or(|s| s > n) {
        println!("tree with depth {r} and branching {k} is larger than the instance ({n} boxes)");
        return Ok(0);
    }
    let t = make_trk(r, k);
    let g = intersection_graph(boxes);
    let family = decompose(boxes)?;
    let mut found: Option<Pattern> = None;
    for pd in &family {
        match find_path_induced_tree(&pd.digraph, &g, &t)? {
            TreeSearch::Embedded(emb) => {
                let ids: Vec<String> = emb.map.iter().map(|&v| boxes[v].id.to_string()).collect();
                println!("{}\tembedded\t{}", pd.pattern, ids.join(","));
                found.get_or_insert_with(|| pd.pattern.clone());
            }
            TreeSearch::Colored(lc) => {
                println!("{}\tcolored\tpalette={}", pd.pattern, lc.coloring.palette_size);
            }
        }
    }
    Ok(if found.is_some() { EXIT_TREE } else { 0 })
}
