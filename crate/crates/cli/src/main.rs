//! `qalink`: classify Montesinos links as quasi-alternating and inspect the
//! obstructions behind each verdict.

mod record;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qalink_core::{
    classify, enumerate_family, enumerate_family_with_arity, explain_with, laufer, lattice,
    verify_with, Error, MontesinosLink, PlumbingGraph, SearchOptions, SelectionPolicy,
    VerifyOptions,
};
use rayon::prelude::*;

use record::{Format, OutputRecord, Writer};

#[derive(Parser)]
#[command(name = "qalink", version, about = "Quasi-alternating Montesinos links, decided exactly")]
struct Cli {
    /// Worker threads for enumeration and embedding searches (advisory).
    #[arg(long, global = true, env = "QALINK_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify links given as `M(e; t1, t2, ...)`.
    Classify {
        #[arg(required = true)]
        links: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
        /// Print the full reasoning trace after each record.
        #[arg(long)]
        explain: bool,
    },
    /// Classify every canonical link in a bounded family.
    Enumerate {
        /// Exact number of tangles.
        #[arg(long = "p", conflicts_with = "p_max", required_unless_present = "p_max")]
        p: Option<usize>,
        /// All numbers of tangles from 1 to this bound.
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long)]
        alpha_max: u32,
        #[arg(long, allow_hyphen_values = true)]
        e_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        e_max: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run Laufer's algorithm on a plumbing graph file.
    Laufer {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Policy::Lowest)]
        policy: Policy,
        /// Seed for `--policy random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = laufer::DEFAULT_STEP_GUARD)]
        step_guard: u64,
    },
    /// Search embeddings of a plumbing lattice into the negative diagonal lattice.
    Embed {
        graph: PathBuf,
        /// Largest ambient dimension tried (default: sum of |weights|).
        #[arg(long)]
        n_max: Option<usize>,
        /// Print every canonical embedding with its surjectivity.
        #[arg(long, conflicts_with = "first_surjective")]
        all: bool,
        /// Stop at the first embedding with surjective transpose (default).
        #[arg(long)]
        first_surjective: bool,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Re-derive each verdict from the Laufer and lattice obstructions.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Add wall-clock milliseconds per record (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Lowest,
    Highest,
    Random,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Domain(_) => 2,
        Error::Precondition(_) => 3,
        Error::StepGuard(_) | Error::LemmaViolation(_) => 4,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs.max(1));
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(err) => {
            eprintln!("qalink: cannot start worker pool: {err}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qalink: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify {
            links,
            out,
            explain,
        } => cmd_classify(&links, &out, explain),
        Command::Enumerate {
            p,
            p_max,
            alpha_max,
            e_min,
            e_max,
            out,
        } => {
            let family = match (p, p_max) {
                (Some(p), _) => enumerate_family_with_arity(p, alpha_max, e_min, e_max)?,
                (None, Some(p_max)) => enumerate_family(p_max, alpha_max, e_min, e_max)?,
                (None, None) => unreachable!("clap requires one of --p, --p-max"),
            };
            cmd_enumerate(family.map(|s| s.into_link()), &out)
        }
        Command::Laufer {
            graph,
            policy,
            seed,
            step_guard,
        } => {
            let policy = match policy {
                Policy::Lowest => SelectionPolicy::LowestIndex,
                Policy::Highest => SelectionPolicy::HighestIndex,
                Policy::Random => SelectionPolicy::Random(seed),
            };
            cmd_laufer(&read_graph(&graph)?, policy, step_guard)
        }
        Command::Embed {
            graph,
            n_max,
            all,
            first_surjective: _,
        } => cmd_embed(&read_graph(&graph)?, n_max, all),
    }
}

fn read_graph(path: &PathBuf) -> Result<PlumbingGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| input_error(format!("{}: {err}", path.display())))?;
    Ok(text.parse()?)
}

fn record_for(link: &MontesinosLink, out: &OutputArgs) -> Result<OutputRecord, Error> {
    let start = Instant::now();
    let verdict = classify(link);
    let evidence = if out.verify {
        Some(verify_with(link, &VerifyOptions::default())?)
    } else {
        None
    };
    let ms = out.timing.then(|| start.elapsed().as_millis());
    Ok(OutputRecord::new(link, &verdict, evidence.as_ref(), ms))
}

fn cmd_classify(links: &[String], out: &OutputArgs, explain: bool) -> Result<(), Failure> {
    let parsed = links
        .iter()
        .map(|s| s.parse::<MontesinosLink>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = Writer::new(out.format, out.timing);
    for link in &parsed {
        let rec = record_for(link, out)?;
        let trace = if explain {
            Some(explain_with(link, &VerifyOptions::default())?)
        } else {
            None
        };
        w.push(rec, trace.as_ref().map(|r| r.lines()));
    }
    w.finish();
    Ok(())
}

/// Batches are classified in parallel and written in input order.
fn cmd_enumerate(links: impl Iterator<Item = MontesinosLink>, out: &OutputArgs) -> Result<(), Failure> {
    const BATCH: usize = 256;
    let mut w = Writer::new(out.format, out.timing);
    let mut links = links.peekable();
    while links.peek().is_some() {
        let batch: Vec<MontesinosLink> = links.by_ref().take(BATCH).collect();
        let records = batch
            .par_iter()
            .map(|l| record_for(l, out))
            .collect::<Result<Vec<_>, _>>()?;
        for rec in records {
            w.push(rec, None);
        }
        w.flush_rows();
    }
    w.finish();
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn vertex_name(g: &PlumbingGraph, v: usize) -> String {
    if v == 0 {
        return "central".into();
    }
    let leg = (0..g.legs().len())
        .find(|&i| g.leg_vertices(i).contains(&v))
        .expect("vertex lies on a leg");
    let pos = v - g.leg_vertices(leg).start;
    format!("vertex {v} (leg {}, position {})", leg + 1, pos + 1)
}

fn cmd_laufer(g: &PlumbingGraph, policy: SelectionPolicy, step_guard: u64) -> Result<(), Failure> {
    let config = laufer::LauferConfig { policy, step_guard };
    let r = laufer::laufer_run_with(&g.adjacency_matrix(), &config)?;
    println!("{:?}", r.verdict);
    println!("steps: {}", r.steps);
    println!("cycle: {}", join(&r.cycle));
    println!("pairings: {}", join(&r.pairings));
    if let (Some(j), Some(v)) = (r.witness, r.witness_pairing()) {
        println!("witness: {} pairing {v}", vertex_name(g, j));
    }
    Ok(())
}

fn cmd_embed(g: &PlumbingGraph, n_max: Option<usize>, all: bool) -> Result<(), Failure> {
    if !g.is_negative_definite() {
        return Err(Error::Precondition("plumbing is not negative definite".into()).into());
    }
    let q = g.adjacency_matrix();
    let k = q.rows();
    let bound = n_max.unwrap_or_else(|| usize::try_from(g.total_weight()).unwrap_or(usize::MAX));
    if all {
        for n in k..=bound {
            for (i, e) in lattice::enumerate_embeddings(&q, n)?.enumerate() {
                println!("n = {n}, embedding {}: surjective {}", i + 1, lattice::transpose_surjective(&e));
                print!("{e}");
            }
        }
        return Ok(());
    }
    let options = SearchOptions {
        n_max: Some(bound),
        ..SearchOptions::default()
    };
    let result = lattice::qa_lattice_obstruction(g, &options)?;
    for (n, count) in &result.stats().exhausted_levels {
        println!("n = {n}: {count} embeddings, none surjective");
    }
    match &result {
        lattice::Obstruction::Obstructed { n_max, .. } => {
            println!("Obstructed (no surjective-transpose embedding for n <= {n_max})");
        }
        lattice::Obstruction::NotObstructed { witness, .. } => {
            println!("NotObstructed n = {}: surjective true", witness.n());
            print!("{witness}");
        }
    }
    Ok(())
}
