use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orbifix::bench::{run_bench, BenchPlan};
use orbifix::covering::{
    covering_feasible_bruteforce_guarded, reduce_vc, CoveringGuard, VcInstance,
};
use orbifix::face::{complete_face, format_face_record, parse_face_record};
use orbifix::fixing::{orbitopal_fix, FixingOutcome};
use orbifix::partition::{parse_instance, solve, SolverConfig};
use orbifix::sci::separate_sci;
use orbifix::shape::OrbitopeShape;
use orbifix::{partition::generate_instance, Error};

#[derive(Parser)]
#[command(name = "orbifix", version, about = "Symmetry-aware fixing and graph partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fix variables over a face record read from a file or standard input
    Fix {
        /// Face record file (`p q ; zeros: (i,j) ... ; ones: (i,j) ...`)
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Find the most violated shifted column inequality at a fractional point
    Separate {
        /// `p q` on the first line, then the point row-major
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Solve a graph partitioning instance
    Solve {
        /// Instance file (`p m q`, then `i k w` lines); standard input if omitted
        instance: Option<PathBuf>,
        #[arg(long, default_value = "off", value_parser = ["off", "of", "sci", "isoprune"])]
        symmetry: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit in seconds
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        node_limit: Option<usize>,
        /// Support-graph threshold for clique separation
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Disable clique cut separation
        #[arg(long)]
        no_cliques: bool,
        /// Starting assignment, comma-separated part per node
        #[arg(long)]
        start: Option<String>,
        /// Solve once, then re-solve warm-started from the found optimum and
        /// report the second run
        #[arg(long)]
        emulate_warm_start: bool,
    },
    /// Generate a random instance on standard output
    Gen {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an experiment plan and print the comparison table
    Bench {
        /// Plan file, or `default` for the built-in desk plan
        #[arg(long, default_value = "default")]
        plan: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Append the record stream to this file instead of printing it
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Reduce a vertex-cover question to a covering fixing-feasibility instance
    ReduceVc {
        /// Graph file: `n m`, then `u v` per edge
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Run the brute-force feasibility check (within the guard)
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 6)]
        max_p: u32,
        #[arg(long, default_value_t = 8)]
        max_q: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Invalid(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Fix { input } => {
            let text = read_input(input.as_ref())?;
            let raw = parse_face_record(text.trim())?;
            // close the record under the one-per-row rule first; a
            // contradiction means the face holds no 0/1 point at all
            let face = match complete_face(&raw) {
                Ok(face) => face,
                Err(Error::EmptyFace { .. }) => {
                    println!("INFEASIBLE");
                    println!("flags=0 fixed0=0 fixed1=0");
                    return Ok(());
                }
                Err(other) => return Err(other),
            };
            match orbifix::face::check_face(&face) {
                orbifix::face::FaceCheck::Ok => {}
                orbifix::face::FaceCheck::ViolatesP1(_) => {
                    // a fully blocked row leaves no vertex
                    println!("INFEASIBLE");
                    println!("flags=0 fixed0=0 fixed1=0");
                    return Ok(());
                }
                check => return Err(Error::NotFixingReady(check)),
            }
            let (outcome, stats) = orbitopal_fix(&face)?;
            match outcome {
                FixingOutcome::Infeasible => println!("INFEASIBLE"),
                FixingOutcome::Fixed(fixed) => println!("{}", format_face_record(&fixed)),
            }
            println!(
                "flags={} fixed0={} fixed1={}",
                stats.flag_transitions, stats.fixed_zeros, stats.fixed_ones
            );
            Ok(())
        }
        Command::Separate { input } => {
            let text = read_input(input.as_ref())?;
            let mut tokens = text.split_whitespace();
            let p: u32 = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse("expected `p q` then the point".into()))?;
            let q: u32 = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse("expected `p q` then the point".into()))?;
            let shape = OrbitopeShape::new(p, q)?;
            let x: Vec<f64> = tokens
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad value `{t}`"))))
                .collect::<Result<_, _>>()?;
            if x.len() != shape.num_cells() {
                return Err(Error::Parse(format!(
                    "expected {} values, got {}",
                    shape.num_cells(),
                    x.len()
                )));
            }
            if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::Invalid("point components must lie in [0,1]".into()));
            }
            match separate_sci(&x, shape, 1e-6) {
                None => println!("NONE"),
                Some((sci, violation)) => {
                    let anchor = sci.anchor();
                    let cells: Vec<String> = sci
                        .shifted_column()
                        .cells()
                        .map(|c| format!("({},{})", c.i, c.j))
                        .collect();
                    println!(
                        "anchor=({},{}) shifted_column={} violation={violation:.6}",
                        anchor.i,
                        anchor.j,
                        cells.join(",")
                    );
                }
            }
            Ok(())
        }
        Command::Solve {
            instance,
            symmetry,
            seed,
            time_limit,
            node_limit,
            threshold,
            no_cliques,
            start,
            emulate_warm_start,
        } => {
            let text = read_input(instance.as_ref())?;
            let inst = parse_instance(&text)?;
            let start = match start {
                None => None,
                Some(list) => Some(
                    list.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad part `{t}`")))
                        })
                        .collect::<Result<Vec<u32>, Error>>()?,
                ),
            };
            let mut config = SolverConfig {
                symmetry: symmetry.parse()?,
                clique_cuts: !no_cliques,
                time_limit_s: time_limit,
                threshold,
                seed,
                start,
                ..SolverConfig::default()
            };
            if let Some(limit) = node_limit {
                config.node_limit = limit;
            }
            let mut report = solve(&inst, &config)?;
            if emulate_warm_start {
                if !report.finished {
                    eprintln!("warm-start emulation skipped: first solve hit a limit");
                } else {
                    eprintln!("# presolve cpu_s={:.2}", report.cpu_s);
                    config.start = report.assignment.clone();
                    report = solve(&inst, &config)?;
                }
            }
            print!("{}", report.render());
            Ok(())
        }
        Command::Gen { p, m, q, seed } => {
            let inst = generate_instance(p, m, q, seed)?;
            print!("{}", orbifix::partition::format_instance(&inst));
            Ok(())
        }
        Command::Bench { plan, jobs, records } => {
            let plan = if plan == "default" {
                BenchPlan::default_desk()
            } else {
                BenchPlan::parse(&std::fs::read_to_string(&plan).map_err(|e| {
                    Error::Invalid(format!("cannot read plan `{plan}`: {e}"))
                })?)?
            };
            let result = run_bench(&plan, jobs.max(1))?;
            print!("{}", result.table());
            let names: Vec<&str> = plan.variants.iter().map(|v| v.name.as_str()).collect();
            for i in 0..names.len() {
                for j in i + 1..names.len() {
                    let (a, b, none) = result.winners(names[i], names[j])?;
                    println!(
                        "winners {} vs {}: {}={a} {}={b} uncounted={none}",
                        names[i], names[j], names[i], names[j]
                    );
                }
            }
            match records {
                Some(path) => {
                    use std::io::Write;
                    let mut file = std::fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(&path)
                        .map_err(|e| {
                            Error::Invalid(format!("cannot open {}: {e}", path.display()))
                        })?;
                    file.write_all(result.records().as_bytes())
                        .map_err(|e| Error::Invalid(format!("cannot write records: {e}")))?;
                }
                None => print!("{}", result.records()),
            }
            Ok(())
        }
        Command::ReduceVc { graph, k, certify, max_p, max_q } => {
            let text = std::fs::read_to_string(&graph)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", graph.display())))?;
            let mut lines = text.lines().filter(|l| !l.trim().is_empty());
            let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
            let head: Vec<&str> = header.split_whitespace().collect();
            if head.len() != 2 {
                return Err(Error::Parse(format!("expected `n m`, got `{header}`")));
            }
            let n: u32 =
                head[0].parse().map_err(|_| Error::Parse(format!("bad n `{}`", head[0])))?;
            let m: usize =
                head[1].parse().map_err(|_| Error::Parse(format!("bad m `{}`", head[1])))?;
            let mut edges = Vec::with_capacity(m);
            for line in lines {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 2 {
                    return Err(Error::Parse(format!("expected `u v`, got `{line}`")));
                }
                let u: u32 =
                    f[0].parse().map_err(|_| Error::Parse(format!("bad node `{}`", f[0])))?;
                let v: u32 =
                    f[1].parse().map_err(|_| Error::Parse(format!("bad node `{}`", f[1])))?;
                edges.push((u, v));
            }
            if edges.len() != m {
                return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
            }
            let vc = VcInstance::new(n, edges, k)?;
            let reduced = reduce_vc(&vc);
            println!("kappa={}", reduced.kappa);
            println!("ktilde={}", reduced.ktilde);
            let mut record = format!("{} {} ; zeros:", reduced.p, reduced.q);
            for (i, j) in reduced.zero_cells() {
                record.push_str(&format!(" ({i},{j})"));
            }
            record.push_str(" ; ones:");
            println!("{record}");
            if certify {
                let guard = CoveringGuard { max_p, max_q };
                let feasible = covering_feasible_bruteforce_guarded(&reduced, guard)?;
                println!("feasible={feasible}");
            }
            Ok(())
        }
    }
}
