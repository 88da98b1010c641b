//! `flatcover`: solvers, reductions, generators, verification, plotting and
//! benchmarks behind one reproducible command line.
//!
//! Exit codes: 0 success, YES or PASS; 1 NO or FAIL; 2 usage or input
//! error; 3 resource guard tripped.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatcover::clustering::{
    count_consistent_partitions, solve_exact, solve_heuristic, ExactConfig, HeuristicConfig, DEFAULT_PARTITION_CAP,
};
use flatcover::cover::{
    solve_cover, solve_cover_by_candidates, solve_cover_kernelized, CoverAnswer, CoverConfig, DEFAULT_CANDIDATE_CAP,
};
use flatcover::fitting::{best_fit_flat, centroid};
use flatcover::generate::{self, Arrangement, PlantedConfig};
use flatcover::io::{cloud_to_json, flat_to_json, hyperplanes_from_json, parse_cloud, solution_from_json, to_pretty, vector_json};
use flatcover::partition::partition_count;
use flatcover::plot::{line_flat, render_svg};
use flatcover::reductions::dominating::{ds_to_hyperplane_cover, DsOptions};
use flatcover::reductions::graph::ColoredGraph;
use flatcover::reductions::rmis::{desanitize_multiset, rmis_to_line_clustering, RmisMode, DEFAULT_MATERIALIZE_CAP};
use flatcover::scalar::float_json;
use flatcover::verify::{constants_from_json, ds_instance_document, rmis_instance_document, verify_document};
use flatcover::{CloudF64, FlatF64, Scalar};

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "flatcover", version, about = "Projective clustering, hyperplane cover and hardness reductions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Relative tolerance of float comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Cap on enumerated partitions, candidate subsets or materialised
    /// records; overrides FLATCOVER_GUARD.
    #[arg(long, global = true)]
    guard: Option<u128>,
    /// Output file (stdout when absent).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Record wall time in the manifest; outputs then differ between runs.
    #[arg(long, global = true)]
    record_time: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Best-fitting r-flat of a point cloud.
    Fit {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Also write an SVG of a planar cloud and its flat.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// k-flat clustering, exact or heuristic.
    Cluster {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Decision mode: answer YES when the cost is at most this.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Disable branch-and-bound pruning of the exact search.
        #[arg(long)]
        no_prune: bool,
    },
    /// Cover a rational point set with at most k hyperplanes.
    Cover {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Shrink a planar instance with forced lines first.
        #[arg(long, conflicts_with = "by_candidates")]
        kernel: bool,
        /// Branch over candidate hyperplanes instead of point groups.
        #[arg(long)]
        by_candidates: bool,
    },
    /// Dominating Set to Hyperplane Cover.
    ReduceDs {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Accept graphs with a vertex adjacent to all others, and k = 1.
        #[arg(long)]
        no_wlog: bool,
    },
    /// Regular Multicoloured Independent Set to Line Clustering.
    ReduceRmis {
        graph: PathBuf,
        /// Use the formula constants with every side condition enforced.
        #[arg(long, conflicts_with = "constants")]
        faithful: bool,
        /// JSON file with integer strings p, W, d_s, d_l, corner, slack.
        #[arg(long)]
        constants: Option<PathBuf>,
        /// Also emit the perturbed set of distinct points and its budget.
        #[arg(long)]
        desanitize: bool,
    },
    /// Check a witness against an instance exactly.
    Verify { instance: PathBuf, witness: PathBuf },
    /// Seeded instance generators.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// SVG of a planar cloud, optionally coloured by a solution.
    Plot {
        input: PathBuf,
        /// Clustering solution or cover of planar lines.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Size sweeps reported as TSV.
    Bench {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Partitions enumerated and fixed points of the assign/refit map, k = 2 lines.
    Partitions,
    /// Exact 2-line clustering cost of seeded random clouds.
    Exact,
    /// Smallest cover of the m x m grid.
    Cover,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArrangementArg {
    Parallel,
    Polygon,
}

#[derive(Subcommand)]
enum Gen {
    /// Noisy points around k planted r-flats.
    Planted {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        per_flat: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 3.0)]
        extent: f64,
        #[arg(long, default_value_t = 0.5)]
        jitter: f64,
        #[arg(long, value_enum, default_value_t = ArrangementArg::Parallel)]
        arrangement: ArrangementArg,
    },
    /// Uniform float points in a cube.
    Random {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        extent: f64,
    },
    /// Uniform integer points, rational mode.
    Integer {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        lo: i64,
        #[arg(long, default_value_t = 4)]
        hi: i64,
    },
    /// The m x m integer grid.
    Grid {
        #[arg(long)]
        m: usize,
    },
    /// Erdos-Renyi graph.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        prob: f64,
    },
    /// Random regular multicoloured graph.
    Ring {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        nu: usize,
    },
}

/// What the run answered; maps to exit codes 0 and 1.
enum Verdict {
    Yes,
    No,
}

struct Ctx {
    common: Common,
    manifest: RunManifest,
}

impl Ctx {
    fn guard(&self, default: u128) -> Result<u128> {
        if let Some(g) = self.common.guard {
            return Ok(g);
        }
        match std::env::var("FLATCOVER_GUARD") {
            Ok(text) => text.trim().parse().with_context(|| format!("FLATCOVER_GUARD={text:?} is not a count")),
            Err(_) => Ok(default),
        }
    }

    fn emit_text(&self, text: &str) -> Result<()> {
        match &self.common.output {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit(&self, doc: Value) -> Result<()> {
        self.emit_text(&to_pretty(&self.manifest.embed(doc)))
    }

    fn read_cloud(&mut self, path: &Path) -> Result<flatcover::io::DynCloud> {
        let text = self.manifest.read(path)?;
        parse_cloud(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn read_json(&mut self, path: &Path) -> Result<Value> {
        let text = self.manifest.read(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Fit { .. } => "fit",
        Command::Cluster { .. } => "cluster",
        Command::Cover { .. } => "cover",
        Command::ReduceDs { .. } => "reduce-ds",
        Command::ReduceRmis { .. } => "reduce-rmis",
        Command::Verify { .. } => "verify",
        Command::Gen { .. } => "gen",
        Command::Plot { .. } => "plot",
        Command::Bench { .. } => "bench",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = e.chain().any(|c| c.downcast_ref::<flatcover::Error>().is_some_and(|e| e.is_guard_trip()));
            ExitCode::from(if guard { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    if cli.common.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads).build_global()?;
    }
    if !(cli.common.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let manifest = RunManifest::new(command_name(&cli.command), cli.common.seed, cli.common.record_time);
    let mut ctx = Ctx { common: cli.common, manifest };
    match cli.command {
        Command::Fit { input, r, svg } => fit(&mut ctx, &input, r, svg),
        Command::Cluster { input, k, r, method, budget, restarts, max_iter, no_prune } => {
            cluster(&mut ctx, &input, k, r, method, budget, restarts, max_iter, no_prune)
        }
        Command::Cover { input, k, kernel, by_candidates } => cover(&mut ctx, &input, k, kernel, by_candidates),
        Command::ReduceDs { graph, k, no_wlog } => reduce_ds(&mut ctx, &graph, k, no_wlog),
        Command::ReduceRmis { graph, faithful, constants, desanitize } => {
            reduce_rmis(&mut ctx, &graph, faithful, constants, desanitize)
        }
        Command::Verify { instance, witness } => verify(&mut ctx, &instance, &witness),
        Command::Gen { what } => gen(&mut ctx, what),
        Command::Plot { input, solution } => plot(&mut ctx, &input, solution),
        Command::Bench { suite, from, to } => bench(&mut ctx, suite, from, to),
    }
}

fn fit(ctx: &mut Ctx, input: &Path, r: usize, svg: Option<PathBuf>) -> Result<Verdict> {
    let cloud = ctx.read_cloud(input)?.to_float();
    let fit = best_fit_flat(&cloud, r)?;
    if let Some(path) = svg {
        let picture = render_svg(&cloud, std::slice::from_ref(&fit.flat))?;
        std::fs::write(&path, ctx.manifest.embed_svg(&picture)).with_context(|| format!("writing {}", path.display()))?;
    }
    ctx.emit(json!({
        "r": r,
        "cost": float_json(fit.cost),
        "centroid": vector_json(&centroid(&cloud)?),
        "flat": flat_to_json(&fit.flat),
        "spectrum": vector_json(&fit.spectrum),
    }))?;
    Ok(Verdict::Yes)
}

#[allow(clippy::too_many_arguments)]
fn cluster(
    ctx: &mut Ctx,
    input: &Path,
    k: usize,
    r: usize,
    method: Method,
    budget: Option<f64>,
    restarts: usize,
    max_iter: usize,
    no_prune: bool,
) -> Result<Verdict> {
    let cloud = ctx.read_cloud(input)?.to_float();
    let solution = match method {
        Method::Exact => {
            let config = ExactConfig {
                prune: !no_prune,
                partition_cap: ctx.guard(DEFAULT_PARTITION_CAP)?,
                ..Default::default()
            };
            solve_exact(&cloud, k, r, &config)?
        }
        Method::Heuristic => {
            let config = HeuristicConfig { restarts, max_iter, rel_tol: ctx.common.tol, rng_seed: ctx.common.seed };
            solve_heuristic(&cloud, k, r, &config)?
        }
    };
    let mut doc = flatcover::io::solution_to_json(&solution, k, r);
    doc["method"] = json!(match method {
        Method::Exact => "exact",
        Method::Heuristic => "heuristic",
    });
    let verdict = match budget {
        Some(b) => {
            let yes = solution.cost <= b;
            doc["budget"] = float_json(b);
            doc["decision"] = json!(if yes { "YES" } else { "NO" });
            eprintln!("{}", if yes { "YES" } else { "NO" });
            if yes {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
        None => Verdict::Yes,
    };
    ctx.emit(doc)?;
    Ok(verdict)
}

fn cover(ctx: &mut Ctx, input: &Path, k: usize, kernel: bool, by_candidates: bool) -> Result<Verdict> {
    let cloud = ctx.read_cloud(input)?.into_rational()?;
    let config = CoverConfig { candidate_cap: ctx.guard(DEFAULT_CANDIDATE_CAP)? };
    let answer = if kernel {
        solve_cover_kernelized(&cloud, k, &config)?
    } else if by_candidates {
        solve_cover_by_candidates(&cloud, k, &config)?
    } else {
        solve_cover(&cloud, k, &config)?
    };
    let (doc, verdict) = match answer {
        CoverAnswer::Yes(sol) => {
            let mut doc = flatcover::io::cover_to_json(&sol);
            doc["answer"] = json!("YES");
            (doc, Verdict::Yes)
        }
        CoverAnswer::No => (json!({"answer": "NO", "k": k}), Verdict::No),
    };
    eprintln!("{}", doc["answer"].as_str().unwrap_or_default());
    ctx.emit(doc)?;
    Ok(verdict)
}

fn read_graph(ctx: &mut Ctx, path: &Path) -> Result<ColoredGraph> {
    let v = ctx.read_json(path)?;
    ColoredGraph::from_json(&v).with_context(|| format!("reading graph {}", path.display()))
}

fn reduce_ds(ctx: &mut Ctx, graph: &Path, k: usize, no_wlog: bool) -> Result<Verdict> {
    let g = read_graph(ctx, graph)?;
    let options = DsOptions { enforce_wlog: !no_wlog };
    let inst = ds_to_hyperplane_cover(&g, k, &options)?;
    ctx.emit(ds_instance_document(&inst, &options))?;
    Ok(Verdict::Yes)
}

fn reduce_rmis(
    ctx: &mut Ctx,
    graph: &Path,
    faithful: bool,
    constants: Option<PathBuf>,
    desanitize: bool,
) -> Result<Verdict> {
    let g = read_graph(ctx, graph)?;
    let mode = if faithful {
        RmisMode::Faithful
    } else {
        let custom = match constants {
            Some(path) => Some(constants_from_json(&ctx.read_json(&path)?)?),
            None => None,
        };
        RmisMode::Relaxed(custom)
    };
    let inst = rmis_to_line_clustering(&g, &mode)?;
    let cap = ctx.guard(DEFAULT_MATERIALIZE_CAP)?;
    let mut doc = rmis_instance_document(&inst, cap)?;
    if desanitize {
        let (cloud, budget) = desanitize_multiset(&inst, cap)?;
        doc["desanitized"] = json!({"B": budget.to_string(), "cloud": cloud_to_json(&cloud)});
    }
    ctx.emit(doc)?;
    Ok(Verdict::Yes)
}

fn verify(ctx: &mut Ctx, instance: &Path, witness: &Path) -> Result<Verdict> {
    let inst = ctx.read_json(instance)?;
    let wit = ctx.read_json(witness)?;
    let report = verify_document(&inst, &wit, ctx.common.tol)?;
    eprint!("{}", report.to_text());
    let pass = report.all_pass();
    ctx.emit(report.to_json())?;
    Ok(if pass { Verdict::Yes } else { Verdict::No })
}

fn gen(ctx: &mut Ctx, what: Gen) -> Result<Verdict> {
    let mut rng = generate::rng(ctx.common.seed, 0);
    let doc = match what {
        Gen::Planted { dim, r, k, per_flat, spacing, sigma, extent, jitter, arrangement } => {
            let arrangement = match arrangement {
                ArrangementArg::Parallel => Arrangement::Parallel,
                ArrangementArg::Polygon => Arrangement::Polygon,
            };
            let config = PlantedConfig { dim, r, k, per_flat, spacing, sigma, extent, jitter, arrangement };
            let planted = generate::planted_flats(&config, &mut rng)?;
            let mut doc = cloud_to_json(&planted.cloud);
            doc["planted"] = json!({
                "flats": planted.flats.iter().map(flat_to_json).collect::<Vec<_>>(),
                "labels": planted.labels,
            });
            doc
        }
        Gen::Random { dim, n, extent } => cloud_to_json(&generate::random_cloud(dim, n, extent, &mut rng)?),
        Gen::Integer { dim, n, lo, hi } => cloud_to_json(&generate::random_integer_cloud(dim, n, lo, hi, &mut rng)?),
        Gen::Grid { m } => cloud_to_json(&generate::grid_cloud(m)?),
        Gen::Graph { n, prob } => generate::random_graph(n, prob, &mut rng)?.to_json(),
        Gen::Ring { l, nu } => generate::random_ring(l, nu, &mut rng)?.to_json(),
    };
    ctx.emit(doc)?;
    Ok(Verdict::Yes)
}

fn plot(ctx: &mut Ctx, input: &Path, solution: Option<PathBuf>) -> Result<Verdict> {
    let cloud = ctx.read_cloud(input)?.to_float();
    let flats: Vec<FlatF64> = match solution {
        None => Vec::new(),
        Some(path) => {
            let v = ctx.read_json(&path)?;
            if v.get("flats").is_some() {
                solution_from_json::<f64>(&v, ctx.common.tol)?.flats
            } else {
                hyperplanes_from_json(&v)?.iter().map(line_flat).collect::<flatcover::Result<_>>()?
            }
        }
    };
    let svg = render_svg(&cloud, &flats)?;
    ctx.emit_text(&ctx.manifest.embed_svg(&svg))?;
    Ok(Verdict::Yes)
}

fn bench(ctx: &mut Ctx, suite: Suite, from: usize, to: usize) -> Result<Verdict> {
    if from > to {
        bail!("--from must not exceed --to");
    }
    let timed = ctx.common.record_time;
    let mut out = String::new();
    let header = match suite {
        Suite::Partitions => "n\tpartitions\tconsistent",
        Suite::Exact => "n\tpartitions\tcost",
        Suite::Cover => "m\tpoints\tmin_k",
    };
    out.push_str(header);
    out.push_str(if timed { "\tseconds\n" } else { "\n" });
    let cap = ctx.guard(DEFAULT_PARTITION_CAP)?;
    for n in from..=to {
        let start = Instant::now();
        let row = match suite {
            Suite::Partitions => {
                let cloud: CloudF64 = generate::random_cloud(2, n, 1.0, &mut generate::rng(ctx.common.seed, n as u64))?;
                let consistent = count_consistent_partitions(&cloud, 2, 1, cap)?;
                format!("{n}\t{}\t{consistent}", partition_count(n, 2))
            }
            Suite::Exact => {
                let cloud: CloudF64 = generate::random_cloud(2, n, 1.0, &mut generate::rng(ctx.common.seed, n as u64))?;
                let config = ExactConfig { partition_cap: cap, ..Default::default() };
                let sol = solve_exact(&cloud, 2, 1, &config)?;
                format!("{n}\t{}\t{}", partition_count(n, 2), sol.cost.to_json())
            }
            Suite::Cover => {
                let cloud = generate::grid_cloud(n)?;
                let config = CoverConfig { candidate_cap: ctx.guard(DEFAULT_CANDIDATE_CAP)? };
                let mut min_k = n;
                for k in 1..n {
                    if solve_cover(&cloud, k, &config)?.is_yes() {
                        min_k = k;
                        break;
                    }
                }
                format!("{n}\t{}\t{min_k}", cloud.len())
            }
        };
        out.push_str(&row);
        if timed {
            out.push_str(&format!("\t{:.6}", start.elapsed().as_secs_f64()));
        }
        out.push('\n');
    }
    ctx.emit_text(&ctx.manifest.embed_tsv(&out))?;
    Ok(Verdict::Yes)
}
