//! Experiment driver: runs every (instance, variant) pair of a plan and
//! aggregates per-class averages and pairwise winner counts.
//!
//! Instances are generated per `(p, m)` class from consecutive seeds and
//! shared across the `q` values, so the same graphs are partitioned into
//! different part counts. Results come out as a comparison table plus a
//! line-delimited record stream.

use std::sync::mpsc;
use std::sync::{Arc, Mutex};

use crate::partition::{
    compare_winners, generate_instance, solve, PartitionInstance, SolveReport, SolverConfig,
    SymmetryMode, Winner,
};
use crate::{Error, Result};

/// A named solver variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub name: String,
    pub symmetry: SymmetryMode,
}

pub fn variant_from_name(name: &str) -> Result<Variant> {
    let symmetry = match name {
        "basic" => SymmetryMode::Off,
        other => other.parse()?,
    };
    Ok(Variant { name: name.to_string(), symmetry })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub p: u32,
    pub m_values: Vec<u32>,
    pub q_values: Vec<u32>,
    pub instances_per_class: u32,
    pub base_seed: u64,
    pub variants: Vec<Variant>,
    pub time_limit_s: Option<f64>,
    pub node_limit: usize,
    pub threshold: f64,
    /// Re-solve each run with its own optimum as the starting incumbent,
    /// reporting the second run.
    pub warm_start: bool,
}

impl BenchPlan {
    /// The desk-scale default: 16 nodes, four densities, two part counts,
    /// three instances each, basic vs orbitopal fixing.
    pub fn default_desk() -> Self {
        BenchPlan {
            p: 16,
            m_values: vec![24, 48, 72, 96],
            q_values: vec![3, 4],
            instances_per_class: 3,
            base_seed: 1,
            variants: vec![
                variant_from_name("basic").expect("known"),
                variant_from_name("of").expect("known"),
            ],
            time_limit_s: Some(120.0),
            node_limit: 1_000_000,
            threshold: 0.5,
            warm_start: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(Error::Invalid("a bench plan needs at least one variant".into()));
        }
        if self.m_values.is_empty() || self.q_values.is_empty() || self.instances_per_class == 0 {
            return Err(Error::Invalid("a bench plan needs classes and instances".into()));
        }
        let total = u64::from(self.p) * u64::from(self.p - 1) / 2;
        if self.m_values.iter().any(|&m| u64::from(m) > total) {
            return Err(Error::Invalid("an edge count exceeds the complete graph".into()));
        }
        Ok(())
    }

    /// Flat `key=value` plan format; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<BenchPlan> {
        let mut plan = BenchPlan::default_desk();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("bad line `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "p" => plan.p = parse_num(key, value)?,
                "m" => plan.m_values = parse_list(key, value)?,
                "q" => plan.q_values = parse_list(key, value)?,
                "instances" => plan.instances_per_class = parse_num(key, value)?,
                "seed" => plan.base_seed = parse_num(key, value)?,
                "variants" => {
                    plan.variants = value
                        .split(',')
                        .map(|v| variant_from_name(v.trim()))
                        .collect::<Result<Vec<_>>>()?;
                }
                "time_limit_s" => {
                    plan.time_limit_s = if value == "none" {
                        None
                    } else {
                        Some(
                            value
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad time_limit_s `{value}`")))?,
                        )
                    };
                }
                "node_limit" => plan.node_limit = parse_num(key, value)?,
                "threshold" => {
                    plan.threshold = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad threshold `{value}`")))?;
                }
                "warm_start" => {
                    plan.warm_start = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad warm_start `{value}`")))?;
                }
                other => return Err(Error::Parse(format!("unknown plan key `{other}`"))),
            }
        }
        plan.validate()?;
        Ok(plan)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse(format!("bad {key} `{value}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<u32>> {
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub seed: u64,
    pub variant: String,
    pub report: SolveReport,
}

impl RunRecord {
    pub fn render(&self) -> String {
        let r = &self.report;
        let gap = if r.gap.is_finite() { format!("{:.4}", r.gap) } else { "inf".into() };
        format!(
            "run p={} m={} q={} seed={} variant={} optimum={} nsub={} cpu_s={:.2} n_of={} cuts={} gap={} finished={}",
            self.p,
            self.m,
            self.q,
            self.seed,
            self.variant,
            r.optimum.map_or_else(|| "none".into(), |v| v.to_string()),
            r.nsub,
            r.cpu_s,
            r.n_of,
            r.cuts,
            gap,
            r.finished,
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub plan: BenchPlan,
    pub runs: Vec<RunRecord>,
}

struct Task {
    index: usize,
    instance: PartitionInstance,
    m: u32,
    q: u32,
    seed: u64,
    variant: Variant,
}

/// Runs the whole plan; `jobs` worker threads, each owning its solver
/// session.
pub fn run_bench(plan: &BenchPlan, jobs: usize) -> Result<BenchResult> {
    plan.validate()?;
    let mut tasks = Vec::new();
    for &m in &plan.m_values {
        for inst_idx in 0..plan.instances_per_class {
            let seed = plan.base_seed + u64::from(inst_idx);
            for &q in &plan.q_values {
                let instance = generate_instance(plan.p, m, q, seed)?;
                for variant in &plan.variants {
                    tasks.push(Task {
                        index: tasks.len(),
                        instance: instance.clone(),
                        m,
                        q,
                        seed,
                        variant: variant.clone(),
                    });
                }
            }
        }
    }

    let run_task = |task: &Task| -> Result<RunRecord> {
        let mut config = SolverConfig {
            symmetry: task.variant.symmetry,
            time_limit_s: plan.time_limit_s,
            node_limit: plan.node_limit,
            threshold: plan.threshold,
            ..SolverConfig::default()
        };
        let mut report = solve(&task.instance, &config)?;
        if plan.warm_start && report.finished {
            config.start = report.assignment.clone();
            report = solve(&task.instance, &config)?;
        }
        Ok(RunRecord {
            p: plan.p,
            m: task.m,
            q: task.q,
            seed: task.seed,
            variant: task.variant.name.clone(),
            report,
        })
    };

    let mut outcomes: Vec<Option<RunRecord>> = Vec::new();
    outcomes.resize_with(tasks.len(), || None);
    if jobs <= 1 {
        for task in &tasks {
            outcomes[task.index] = Some(run_task(task)?);
        }
    } else {
        let queue = Arc::new(Mutex::new(tasks));
        let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord>)>();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                let queue = Arc::clone(&queue);
                let tx = tx.clone();
                scope.spawn(move || loop {
                    let task = { queue.lock().expect("queue lock").pop() };
                    match task {
                        Some(task) => {
                            let out = run_task(&task);
                            if tx.send((task.index, out)).is_err() {
                                break;
                            }
                        }
                        None => break,
                    }
                });
            }
            drop(tx);
            for (index, out) in rx {
                outcomes[index] = Some(out.expect("per-run solver failure"));
            }
        });
    }
    let runs = outcomes.into_iter().map(|o| o.expect("all tasks ran")).collect();
    Ok(BenchResult { plan: plan.clone(), runs })
}

impl BenchResult {
    /// Per-class rounded averages in a fixed-width comparison table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:>4} {:>5} {:>3}", "p", "m", "q"));
        for v in &self.plan.variants {
            if v.symmetry == SymmetryMode::OrbitopalFixing {
                out.push_str(&format!(
                    " | {:>10} {:>9} {:>8}",
                    format!("{}:nsub", v.name),
                    format!("{}:cpu", v.name),
                    format!("{}:#OF", v.name)
                ));
            } else {
                out.push_str(&format!(
                    " | {:>10} {:>9}",
                    format!("{}:nsub", v.name),
                    format!("{}:cpu", v.name)
                ));
            }
        }
        out.push('\n');
        for &m in &self.plan.m_values {
            for &q in &self.plan.q_values {
                out.push_str(&format!("{:>4} {:>5} {:>3}", self.plan.p, m, q));
                for v in &self.plan.variants {
                    let class: Vec<&RunRecord> = self
                        .runs
                        .iter()
                        .filter(|r| r.m == m && r.q == q && r.variant == v.name)
                        .collect();
                    let n = class.len().max(1) as f64;
                    let nsub: f64 = class.iter().map(|r| r.report.nsub as f64).sum::<f64>() / n;
                    let cpu: f64 = class.iter().map(|r| r.report.cpu_s).sum::<f64>() / n;
                    if v.symmetry == SymmetryMode::OrbitopalFixing {
                        let nof: f64 =
                            class.iter().map(|r| r.report.n_of as f64).sum::<f64>() / n;
                        out.push_str(&format!(
                            " | {:>10} {:>9.2} {:>8}",
                            nsub.round() as u64,
                            cpu,
                            nof.round() as u64
                        ));
                    } else {
                        out.push_str(&format!(" | {:>10} {:>9.2}", nsub.round() as u64, cpu));
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    /// Winner counts of `a` against `b` over all shared instances:
    /// `(a wins, b wins, not counted)`.
    pub fn winners(&self, a: &str, b: &str) -> Result<(u32, u32, u32)> {
        let mut wins = (0u32, 0u32, 0u32);
        for run_a in self.runs.iter().filter(|r| r.variant == a) {
            let Some(run_b) = self.runs.iter().find(|r| {
                r.variant == b && r.m == run_a.m && r.q == run_a.q && r.seed == run_a.seed
            }) else {
                continue;
            };
            match compare_winners(&run_a.report, &run_b.report)? {
                Winner::A => wins.0 += 1,
                Winner::B => wins.1 += 1,
                Winner::None => wins.2 += 1,
            }
        }
        Ok(wins)
    }

    /// The machine-readable record stream, one line per run.
    pub fn records(&self) -> String {
        let mut out = String::new();
        for run in &self.runs {
            out.push_str(&run.render());
            out.push('\n');
        }
        out
    }
}
