mod dot;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diaconf::critical::{
    decide_confluence, decide_confluence_left_connected, enumerate_pairs, enumerate_pre_critical_pairs,
    is_parallel_pair, CheckOptions, OverlapStrategy, PairKind, PreCriticalPair, Verdict,
};
use diaconf::ma::is_left_connected;
use diaconf::paths::decide_local_confluence_convex;
use diaconf::rewrite::{enumerate_steps, Caps, Mode, RewritingSystem};
use diaconf::rulefile::{parse_graph_input, parse_rule_file, RuleFile};
use diaconf::{are_isomorphic, Error};

const EXIT_NO_VERDICT: u8 = 3;
const EXIT_USAGE: u8 = 10;
const EXIT_PARSE: u8 = 11;
const EXIT_SYSTEM: u8 = 12;
const EXIT_IO: u8 = 13;
const EXIT_VERIFY: u8 = 14;

#[derive(Parser)]
#[command(name = "diaconf", version, about = "Confluence checking for string-diagram rewriting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide confluence from the pre-critical pairs
    Check(CheckArgs),
    /// List the pre-critical pairs
    Pairs(CheckArgs),
    /// Rewrite a graph or term step by step
    Rewrite(RewriteArgs),
}

#[derive(Args)]
struct Common {
    /// Rule file
    file: PathBuf,
    /// plain, frobenius or convex; overrides the file
    #[arg(long)]
    mode: Option<Mode>,
    /// Iso-classes explored per joinability search
    #[arg(long, default_value_t = Caps::default().max_steps)]
    max_steps: usize,
    /// Largest graph (nodes + edges) a search may visit; default 4x the start
    #[arg(long)]
    max_size: Option<usize>,
    /// Worker threads for pair checks; 0 picks one per core
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write every rendered graph as a DOT file into this directory
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Print a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Enumerate classical pairs with empty interfaces; no verdict is drawn
    #[arg(long)]
    empty_interface: bool,
}

#[derive(Args)]
struct RewriteArgs {
    #[command(flatten)]
    common: Common,
    /// A term, a `graph { ... }` block, or @path to read one from a file
    input: String,
    /// Stop after this many steps; default runs to a normal form
    #[arg(long)]
    steps: Option<usize>,
    /// Re-check both squares of every step
    #[arg(long)]
    verify: bool,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }

    fn lib(file: &Path, e: Error) -> Self {
        match e {
            Error::Parse { line, col, msg } => Failure::new(EXIT_PARSE, format!("{}:{line}:{col}: {msg}", file.display())),
            Error::Type { .. } => Failure::new(EXIT_PARSE, format!("{}: {e}", file.display())),
            e => Failure::new(EXIT_SYSTEM, format!("{}: {e}", file.display())),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.command {
        Command::Check(a) => check(&a),
        Command::Pairs(a) => pairs(&a),
        Command::Rewrite(a) => rewrite(&a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load(c: &Common) -> Result<(RuleFile, RewritingSystem), Failure> {
    let src = fs::read_to_string(&c.file).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", c.file.display())))?;
    let file = parse_rule_file(&src).map_err(|e| Failure::lib(&c.file, e))?;
    let system = file.system(c.mode).map_err(|e| Failure::lib(&c.file, e))?;
    Ok((file, system))
}

fn caps(c: &Common) -> Caps {
    Caps {
        max_steps: c.max_steps,
        max_graph_size: c.max_size,
    }
}

fn write_dot(dir: &Option<PathBuf>, name: &str, g: &diaconf::GraphWithInterface) -> Result<(), Failure> {
    let Some(dir) = dir else { return Ok(()) };
    let io = |e: std::io::Error| Failure::new(EXIT_IO, format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(format!("{name}.dot")), dot::render(name, g)).map_err(io)
}

fn write_pair_dots(dir: &Option<PathBuf>, i: usize, p: &PreCriticalPair) -> Result<(), Failure> {
    let (h1, h2) = p.branches();
    write_dot(dir, &format!("pair{i}_overlap"), &p.overlap)?;
    write_dot(dir, &format!("pair{i}_left"), h1)?;
    write_dot(dir, &format!("pair{i}_right"), h2)
}

fn check(a: &CheckArgs) -> Result<u8, Failure> {
    let c = &a.common;
    let (_, system) = load(c)?;
    let opts = CheckOptions {
        caps: caps(c),
        jobs: c.jobs,
        strategy: OverlapStrategy::Minimal,
        empty_interface: a.empty_interface,
    };
    let rep = if system.mode() == Mode::Convex && !a.empty_interface {
        if is_left_connected(&system) {
            decide_confluence_left_connected(&system, &opts)
        } else {
            decide_local_confluence_convex(&system, &opts)
        }
    } else {
        decide_confluence(&system, &opts)
    }
    .map_err(|e| Failure::lib(&c.file, e))?;

    for (i, p) in rep.pairs.iter().enumerate() {
        write_pair_dots(&c.dot, i, &p.pair)?;
        if let diaconf::critical::Outcome::Joinable { witness: Some(w), .. } = &p.outcome {
            write_dot(&c.dot, &format!("pair{i}_witness"), w)?;
        }
    }
    if c.json {
        println!("{}", report::check_json(&rep));
    } else {
        print!("{}", report::check_text(&rep));
    }
    Ok(match rep.verdict {
        Some(Verdict::Confluent) => 0,
        Some(Verdict::NotConfluent) => 1,
        Some(Verdict::Inconclusive) => 2,
        None => EXIT_NO_VERDICT,
    })
}

fn pairs(a: &CheckArgs) -> Result<u8, Failure> {
    let c = &a.common;
    let (_, system) = load(c)?;
    let found = if a.empty_interface {
        enumerate_pairs(&system, PairKind::Ground, OverlapStrategy::Exhaustive)
    } else {
        enumerate_pre_critical_pairs(&system)
    }
    .map_err(|e| Failure::lib(&c.file, e))?;
    let parallel: Vec<bool> = found.iter().map(is_parallel_pair).collect();
    for (i, p) in found.iter().enumerate() {
        write_pair_dots(&c.dot, i, p)?;
    }
    if c.json {
        println!("{}", report::pairs_json(system.mode(), &found, &parallel));
    } else {
        print!("{}", report::pairs_text(&found, &parallel));
    }
    Ok(0)
}

fn rewrite(a: &RewriteArgs) -> Result<u8, Failure> {
    let c = &a.common;
    let (file, system) = load(c)?;
    let (src, origin) = match a.input.strip_prefix('@') {
        Some(path) => {
            let s = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{path}: {e}")))?;
            (s, PathBuf::from(path))
        }
        None => (a.input.clone(), PathBuf::from("<input>")),
    };
    let start = parse_graph_input(&src, &file).map_err(|e| Failure::lib(&origin, e))?;
    let limit = a.steps.unwrap_or(c.max_steps);

    let mut trace = report::Trace::new(&start);
    write_dot(&c.dot, "step0", &start)?;
    let mut current = start;
    let mut bad = 0;
    while trace.productive < limit {
        let succ = enumerate_steps(&system, &current);
        if a.verify {
            for s in &succ {
                let rule = system.rule(&s.rule).expect("step names a rule of the system");
                if !s.verify(rule) {
                    bad += 1;
                    eprintln!("verify: step by `{}` failed the pushout check", s.rule);
                }
            }
        }
        let next = succ.iter().position(|s| are_isomorphic(&s.result, &current).is_none());
        trace.push(&succ, next);
        let Some(k) = next else { break };
        current = succ[k].result.clone();
        write_dot(&c.dot, &format!("step{}", trace.productive), &current)?;
    }
    trace.finish(&current);
    if c.json {
        println!("{}", trace.json(a.verify, bad));
    } else {
        print!("{}", trace.text(a.verify, bad));
    }
    Ok(if bad > 0 { EXIT_VERIFY } else { 0 })
}
