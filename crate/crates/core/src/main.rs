use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use vunify::bench::{self, BenchMode};
use vunify::parse::{parse_theory, TermContext};
use vunify::rewrite::Rewriter;
use vunify::theories::{bundled, AG_SOURCE, XOR_SOURCE};
use vunify::theory::vars_in_order;
use vunify::unifier::{renumber, Engine, Mode, UnificationProblem};
use vunify::variant::generate_variants;
use vunify::{Error, FreshCounter, Subst, Term, Theory, Var};

#[derive(Parser)]
#[command(name = "vunify", version, about = "Variant-based equational unification modulo AC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the most general variants of a term.
    Variants {
        /// Theory file, or a bundled theory name (xor, ag).
        theory: String,
        term: String,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        depth_cap: Option<usize>,
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Solve `t1 =? t1' /\ t2 =? t2' ...` modulo the theory.
    Unify {
        theory: String,
        #[arg(required = true, num_args = 1..)]
        equations: Vec<String>,
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        post: bool,
        #[arg(long)]
        quotient: bool,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        depth_cap: Option<usize>,
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a benchmark suite and write the results as CSV.
    Bench {
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seconds per problem and mode.
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long, default_value = "plain,post,fast,fastpost")]
        modes: String,
    },
}

enum Failure {
    Input(String),
    Timeout,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Timeout => Failure::Timeout,
            other => Failure::Input(other.to_string()),
        }
    }
}

struct LoadedTheory {
    theory: Theory,
    /// Bundled theories have the finite variant property; others need an
    /// explicit depth cap.
    bundled: bool,
}

fn load_theory(arg: &str) -> Result<LoadedTheory, Failure> {
    if let Some(th) = bundled(arg) {
        return Ok(LoadedTheory { theory: th?, bundled: true });
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read theory `{arg}`: {e}")))?;
    let bundled = text == XOR_SOURCE || text == AG_SOURCE;
    Ok(LoadedTheory { theory: parse_theory(&text)?, bundled })
}

fn depth_cap(th: &LoadedTheory, cap: Option<usize>) -> Result<Option<usize>, Failure> {
    if cap.is_none() && !th.bundled {
        return Err(Failure::Input(
            "variant generation may not terminate for a theory outside the bundled ones; pass --depth-cap".into(),
        ));
    }
    Ok(cap)
}

fn deadline(secs: Option<u64>) -> Option<Instant> {
    secs.map(|s| Instant::now() + Duration::from_secs(s))
}

/// Renames the variables of `terms` to `#1`, `#2`, ... in order of first
/// occurrence, keeping those in `keep`.
fn display_renaming(terms: &[Term], keep: &[Var]) -> Subst {
    let mut ren = Subst::id();
    let mut n = 0;
    for v in vars_in_order(terms) {
        if !keep.contains(&v) && ren.get(&v).is_none() {
            n += 1;
            let sort = v.sort.clone();
            ren.insert(v, Term::Var(Var::new(&format!("#{n}"), sort)));
        }
    }
    ren
}

fn cmd_variants(
    theory: &str,
    term: &str,
    bound: Option<usize>,
    cap: Option<usize>,
    timeout: Option<u64>,
) -> Result<ExitCode, Failure> {
    let th = load_theory(theory)?;
    let cap = depth_cap(&th, cap)?;
    let t = TermContext::new(&th.theory).parse(term)?;
    let rw = Rewriter::new(&th.theory);
    rw.deadline.set(deadline(timeout));
    let tree = generate_variants(&t, &rw, &mut FreshCounter::new(), bound, cap)?;
    let sig = &th.theory.sig;
    let root_vars = vars_in_order([&t]);
    let mut n = 0;
    for (_, v) in tree.kept() {
        n += 1;
        let images: Vec<Term> = root_vars.iter().map(|x| v.subst.image(x)).collect();
        let mut shown = vec![v.term.clone()];
        shown.extend(images.iter().cloned());
        let ren = display_renaming(&shown, &[]);
        println!("Variant #{n}");
        println!("{}: {}", sig.least_sort(&v.term), ren.apply(&v.term));
        for (x, img) in root_vars.iter().zip(&images) {
            println!("{} --> {}", x.name, ren.apply(img));
        }
        println!();
    }
    if !tree.closed {
        match (bound, cap) {
            (Some(b), _) if n >= b => println!("(bound {b} reached; further variants omitted)"),
            (_, Some(d)) => {
                return Err(Failure::Input(format!("variant generation did not close within depth cap {d}")));
            }
            _ => println!("(variant generation did not close)"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct JsonBinding {
    var: String,
    sort: String,
    term: String,
}

#[derive(Serialize)]
struct JsonUnifier {
    unifier_index: usize,
    bindings: Vec<JsonBinding>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_unify(
    theory: &str,
    equations: &[String],
    mode: Mode,
    bound: Option<usize>,
    cap: Option<usize>,
    timeout: Option<u64>,
    json: bool,
) -> Result<ExitCode, Failure> {
    let th = load_theory(theory)?;
    let cap = depth_cap(&th, cap)?;
    let eqs = TermContext::new(&th.theory).parse_equations(&equations.join(" "))?;
    let order = vars_in_order(eqs.iter().flat_map(|(l, r)| [l, r]));
    let problem = UnificationProblem::new(eqs)?.with_bound(bound);
    let mut engine = Engine::new(&th.theory)?;
    engine.depth_cap = cap;
    engine.set_deadline(deadline(timeout));
    let set = engine.unify(&problem, mode)?;
    let shown: Vec<Subst> = set.unifiers.iter().map(|u| renumber(u, &set.vars)).collect();
    if json {
        let out: Vec<JsonUnifier> = shown
            .iter()
            .enumerate()
            .map(|(i, u)| JsonUnifier {
                unifier_index: i + 1,
                bindings: order
                    .iter()
                    .map(|x| JsonBinding { var: x.name.to_string(), sort: x.sort.to_string(), term: u.image(x).to_string() })
                    .collect(),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Failure::Input(e.to_string()))?);
    } else if shown.is_empty() {
        println!("No unifiers.");
    } else {
        for (i, u) in shown.iter().enumerate() {
            println!("Unifier #{}", i + 1);
            for x in &order {
                println!("{} --> {}", x.name, u.image(x));
            }
            println!();
        }
        if set.truncated {
            println!("(bound reached; further unifiers omitted)");
        }
    }
    Ok(if set.is_empty() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_bench(suite: &PathBuf, out: &PathBuf, timeout: Option<u64>, modes: &str) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(suite)
        .map_err(|e| Failure::Input(format!("cannot read suite `{}`: {e}", suite.display())))?;
    let suite = bench::load_suite(&text)?;
    let modes = bench::parse_modes(modes)?;
    let rows = bench::run_suite(&suite, &modes, timeout.map(Duration::from_secs))?;
    let file = fs::File::create(out).map_err(|e| Failure::Input(format!("cannot write `{}`: {e}", out.display())))?;
    bench::write_csv(&rows, file)?;
    println!("{:<6} {:<4} {:>8} {:>8} {:>8} {:>8}  status", "id", "th", "plain", "post", "fast", "fastpost");
    for row in &rows {
        let cell = |m: BenchMode| match row.outcomes.get(&m) {
            None => "-".to_string(),
            Some(bench::Outcome::Done { set, .. }) => set.len().to_string(),
            Some(bench::Outcome::TimedOut { .. }) => "T/O".to_string(),
            Some(bench::Outcome::Failed { .. }) => "error".to_string(),
        };
        println!(
            "{:<6} {:<4} {:>8} {:>8} {:>8} {:>8}  {}",
            row.id,
            row.theory,
            cell(BenchMode::Plain),
            cell(BenchMode::Post),
            cell(BenchMode::Fast),
            cell(BenchMode::FastPost),
            row.status()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Variants { theory, term, bound, depth_cap, timeout } => {
            cmd_variants(theory, term, *bound, *depth_cap, *timeout)
        }
        Command::Unify { theory, equations, fast, post, quotient, bound, depth_cap, timeout, json } => {
            let mode = Mode { fast: *fast, post: *post, quotient: *quotient };
            cmd_unify(theory, equations, mode, *bound, *depth_cap, *timeout, *json)
        }
        Command::Bench { suite, out, timeout, modes } => cmd_bench(suite, out, *timeout, modes),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Timeout) => {
            eprintln!("error: timed out");
            ExitCode::from(3)
        }
    }
}
