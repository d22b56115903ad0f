//! `vadu`: file-based command line for the projection-dynamics and
//! discrete-geometry laboratory.
//!
//! Every subcommand reads JSON inputs, writes CSV/JSON outputs, and prints a
//! one-line summary including the seed in use. All randomness is seeded, so
//! identical configurations produce byte-identical output files.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 budget exhausted or
//! undecided, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use vadu_core::ball::{
    brute_force_meb, kkt_certificate, minimax_objective, solve_meb_seeded, PointSet,
};
use vadu_core::dynamics::{
    basin_grid, dr_iterate, export_flow_field, integrate_flow, write_basin_csv,
    write_flow_samples_csv, write_trajectory_csv, DRProblem, GridBox, TrajectoryStatus,
};
use vadu_core::linkage::{find_disjoint_paths, is_k_linked, Graph, Pairing, SearchBudget};
use vadu_core::transform::{detect_cycle, random_family_search, Family, RandomFamilyParams};
use vadu_core::unfolding::{
    builtin, check_overlap, enumerate_spanning_trees, search_nonoverlapping, unfold, write_net_csv,
    BuiltinSolid, CutTree, Polytope3, SearchStatus, TreeStrategy,
};
use vadu_core::{Error, FloatVec, Tolerance};

const SCHEMA_HELP: &str = "\
Input file schemas (JSON):
  problem    {\"A\": SET, \"B\": SET, \"lambda\": 0.5}
  SET        {\"kind\": \"line\",      \"point\": [x,y], \"direction\": [x,y]}
             {\"kind\": \"hyperplane\",\"normal\": [..], \"offset\": c}
             {\"kind\": \"halfspace\", \"normal\": [..], \"offset\": c}   (set: <normal,x> >= offset)
             {\"kind\": \"sphere\"|\"ball\", \"center\": [..], \"radius\": r}
             {\"kind\": \"ellipse\",  \"a\": 2.0, \"b\": 1.0}             (boundary, a >= b > 0)
             {\"kind\": \"psphere\",  \"p\": 3.0}                          (|x|^p + |y|^p = 1)
             {\"kind\": \"vpolytope\",\"vertices\": [[..], ..]}
  family     {\"dimension\": n, \"polytopes\": [[[\"p/q\", ..], ..], ..]}  (rationals as strings)
  points     {\"dimension\": d, \"points\": [[..], ..]}
  graph      {\"vertices\": N, \"edges\": [[i,j], ..]}
  pairs      {\"pairs\": [[s,t], ..]}
  polytope3  {\"vertices\": [[x,y,z], ..], \"faces\": [[i,j,k, ..], ..]}  (faces CCW from outside)
  tree       {\"fold_edges\": [[i,j], ..]}

Output formats:
  trajectory CSV   iter,x1,...,xn,residual
  flow-field CSV   x,y,vx,vy,vnx,vny
  basin CSV        x,y,label            (label: attractor index or 'nonconvergent')
  net CSV          face,vertex,x,y

The environment variable VADU_SEED overrides --seed.";

#[derive(Parser)]
#[command(
    name = "vadu",
    version,
    about = "Projection dynamics, polytope-family transforms, enclosing balls, graph linkage, and polytope unfoldings",
    after_long_help = SCHEMA_HELP
)]
struct Cli {
    /// Seed for all randomized subcommands (VADU_SEED overrides).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for grids, trials, and tree sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Echo configuration details before running.
    #[arg(long, short, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the discrete two-set iteration from a start point.
    DrIterate(DrIterateArgs),
    /// Sample the continuous-time flow field on a grid (CSV), or integrate one flow trajectory.
    DrFlow(DrFlowArgs),
    /// Label a grid of start points by the attractor each converges to.
    DrBasin(DrBasinArgs),
    /// Iterate the support-face family transform until the orbit repeats.
    DrtCycle(DrtCycleArgs),
    /// Hunt random polytope families for long transform cycles.
    DrtSearch(DrtSearchArgs),
    /// Minimal enclosing ball of a point set.
    Meb(MebArgs),
    /// Decide k-linkage of a graph (or check one explicit pairing).
    Klinked(KlinkedArgs),
    /// Develop a 3-polytope into a planar net over a fold-edge tree.
    Unfold(UnfoldArgs),
    /// Sweep fold-edge trees hunting for nonoverlapping nets.
    UnfoldSearch(UnfoldSearchArgs),
}

#[derive(Args)]
struct DrIterateArgs {
    /// Problem JSON file.
    #[arg(long)]
    problem: PathBuf,
    /// Start point, comma-separated (e.g. "1.0,2.0").
    #[arg(long, allow_hyphen_values = true)]
    start: String,
    #[arg(long, default_value_t = 1e-10)]
    stop_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Trajectory CSV output path.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct DrFlowArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Sampling window "xmin,xmax,ymin,ymax".
    #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
    r#box: String,
    /// Grid resolution "nx,ny".
    #[arg(long, default_value = "50,50")]
    resolution: String,
    /// Instead of the grid: integrate one trajectory from this start point.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long, default_value_t = 1e-2)]
    step_size: f64,
    #[arg(long, default_value_t = 20.0)]
    t_max: f64,
    /// Early-stop speed for trajectory integration (0 disables).
    #[arg(long, default_value_t = 1e-9)]
    stop_tol: f64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct DrBasinArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
    r#box: String,
    #[arg(long, default_value = "100,100")]
    resolution: String,
    #[arg(long, default_value_t = 1e-8)]
    stop_tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct DrtCycleArgs {
    /// Family JSON file.
    #[arg(long)]
    family: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    /// Cycle report JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DrtSearchArgs {
    #[arg(long, default_value_t = 2)]
    dimension: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    /// Vertex coordinates are integers in [-bound, bound].
    #[arg(long, default_value_t = 5)]
    bound: i64,
    #[arg(long, default_value_t = 4)]
    max_members: usize,
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    /// Statistics JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MebArgs {
    /// Point-set JSON file.
    #[arg(long)]
    points: PathBuf,
    /// Ball JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also run the subset-enumeration oracle and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct KlinkedArgs {
    /// Graph JSON file.
    #[arg(long)]
    graph: PathBuf,
    /// Number of terminal pairs.
    #[arg(long, short)]
    k: usize,
    /// Check only this explicit pairing (JSON) instead of all pairings.
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000_000)]
    node_budget: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pairing_cap: u64,
    /// Result JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct UnfoldArgs {
    /// Polytope JSON file.
    #[arg(long, conflicts_with = "builtin")]
    polytope: Option<PathBuf>,
    /// Builtin solid name (see --help of unfold-search for the list).
    #[arg(long)]
    builtin: Option<String>,
    /// Fold-edge tree JSON; defaults to the first canonical spanning tree.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Net JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Net CSV output path (plot-ready placed polygons).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct UnfoldSearchArgs {
    #[arg(long, conflicts_with = "builtin")]
    polytope: Option<PathBuf>,
    /// Builtin: tetrahedron, cube, octahedron, truncated-tetrahedron,
    /// truncated-tetrahedron-regular.
    #[arg(long)]
    builtin: Option<String>,
    /// exhaustive (canonical order) or random (uniform spanning trees).
    #[arg(long, default_value = "exhaustive")]
    strategy: String,
    /// Trees to examine.
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// Outcome JSON output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write the first nonoverlapping net here (JSON).
    #[arg(long)]
    net: Option<PathBuf>,
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Ok(env_seed) = std::env::var("VADU_SEED") {
        match env_seed.parse::<u64>() {
            Ok(s) => cli.seed = s,
            Err(_) => {
                eprintln!("error: VADU_SEED must be an unsigned integer, got {env_seed:?}");
                return ExitCode::from(1);
            }
        }
    }
    if cli.jobs > 0 {
        // Thread count affects speed only; outputs are scheduling-independent.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }

    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::UnsupportedMode(_)
        | Error::Io(_)
        | Error::Json(_) => 1,
        Error::Undecided(_) | Error::CycleBudgetExhausted { .. } => 2,
        Error::Numerical(_) => 3,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::DrIterate(a) => dr_iterate_cmd(cli, a),
        Command::DrFlow(a) => dr_flow_cmd(cli, a),
        Command::DrBasin(a) => dr_basin_cmd(cli, a),
        Command::DrtCycle(a) => drt_cycle_cmd(cli, a),
        Command::DrtSearch(a) => drt_search_cmd(cli, a),
        Command::Meb(a) => meb_cmd(cli, a),
        Command::Klinked(a) => klinked_cmd(cli, a),
        Command::Unfold(a) => unfold_cmd(cli, a),
        Command::UnfoldSearch(a) => unfold_search_cmd(cli, a),
    }
}

// ---------------------------------------------------------------------------
// I/O helpers

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad JSON in {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|f| f.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidInput(format!("bad {what} {s:?}: {e}")))
}

fn parse_point(s: &str) -> Result<FloatVec, Error> {
    FloatVec::new(parse_floats(s, "point")?)
}

fn parse_box(s: &str) -> Result<GridBox, Error> {
    let v = parse_floats(s, "box")?;
    if v.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "box needs xmin,xmax,ymin,ymax; got {s:?}"
        )));
    }
    GridBox::new(v[0], v[1], v[2], v[3])
}

fn parse_resolution(s: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    let err = || Error::InvalidInput(format!("resolution needs nx,ny; got {s:?}"));
    if parts.len() != 2 {
        return Err(err());
    }
    let nx = parts[0].trim().parse::<usize>().map_err(|_| err())?;
    let ny = parts[1].trim().parse::<usize>().map_err(|_| err())?;
    Ok((nx, ny))
}

fn fmt_point(p: &FloatVec) -> String {
    let coords: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(", "))
}

// ---------------------------------------------------------------------------
// Subcommands

fn dr_iterate_cmd(cli: &Cli, a: &DrIterateArgs) -> Result<u8, Error> {
    let problem: DRProblem = read_json(&a.problem)?;
    let start = parse_point(&a.start)?;
    if cli.verbose {
        eprintln!("problem: {problem:?}");
    }
    let traj = dr_iterate(
        &problem,
        &start,
        a.stop_tol,
        a.max_iter,
        Tolerance::default(),
    )?;
    let mut buf = Vec::new();
    write_trajectory_csv(&traj, &mut buf)?;
    fs::write(&a.output, buf)?;

    let iters = traj.points.len() - 1;
    match traj.status {
        TrajectoryStatus::Converged => {
            let cert = traj
                .certificate
                .as_ref()
                .expect("converged runs carry a certificate");
            println!(
                "dr-iterate: converged after {iters} steps; shadow {} residuals A={:.3e} B={:.3e}; seed={}; wrote {}",
                fmt_point(&cert.shadow),
                cert.residual_a,
                cert.residual_b,
                cli.seed,
                a.output.display()
            );
            Ok(0)
        }
        TrajectoryStatus::BudgetExhausted => {
            println!(
                "dr-iterate: budget exhausted after {iters} steps (last residual {:.3e}); seed={}; wrote {}",
                traj.residuals.last().copied().unwrap_or(f64::NAN),
                cli.seed,
                a.output.display()
            );
            Ok(2)
        }
        TrajectoryStatus::Diverged => {
            println!(
                "dr-iterate: diverged after {iters} steps; seed={}; wrote {}",
                cli.seed,
                a.output.display()
            );
            Ok(3)
        }
    }
}

fn dr_flow_cmd(cli: &Cli, a: &DrFlowArgs) -> Result<u8, Error> {
    let problem: DRProblem = read_json(&a.problem)?;
    if let Some(start) = &a.start {
        let x0 = parse_point(start)?;
        let traj = integrate_flow(
            &problem,
            &x0,
            a.step_size,
            a.t_max,
            a.stop_tol,
            Tolerance::default(),
        )?;
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf)?;
        fs::write(&a.output, buf)?;
        let status = match traj.status {
            TrajectoryStatus::Converged => "converged",
            TrajectoryStatus::BudgetExhausted => "reached t-max",
            TrajectoryStatus::Diverged => "diverged",
        };
        println!(
            "dr-flow: {status} at {} after {} steps; seed={}; wrote {}",
            fmt_point(traj.final_point()),
            traj.points.len() - 1,
            cli.seed,
            a.output.display()
        );
        return Ok(match traj.status {
            TrajectoryStatus::Converged | TrajectoryStatus::BudgetExhausted => 0,
            TrajectoryStatus::Diverged => 3,
        });
    }

    let bbox = parse_box(&a.r#box)?;
    let (nx, ny) = parse_resolution(&a.resolution)?;
    let grid = export_flow_field(&problem, bbox, nx, ny, Tolerance::default())?;
    let mut buf = Vec::new();
    write_flow_samples_csv(&grid.samples(), &mut buf)?;
    fs::write(&a.output, buf)?;
    println!(
        "dr-flow: sampled {nx}x{ny} field on [{},{}]x[{},{}]; seed={}; wrote {}",
        bbox.xmin,
        bbox.xmax,
        bbox.ymin,
        bbox.ymax,
        cli.seed,
        a.output.display()
    );
    Ok(0)
}

fn dr_basin_cmd(cli: &Cli, a: &DrBasinArgs) -> Result<u8, Error> {
    let problem: DRProblem = read_json(&a.problem)?;
    let bbox = parse_box(&a.r#box)?;
    let (nx, ny) = parse_resolution(&a.resolution)?;
    let grid = basin_grid(
        &problem,
        bbox,
        nx,
        ny,
        a.stop_tol,
        a.max_iter,
        Tolerance::default(),
    )?;
    let mut buf = Vec::new();
    write_basin_csv(&grid, &mut buf)?;
    fs::write(&a.output, buf)?;

    let nonconv = grid
        .labels
        .iter()
        .filter(|l| matches!(l, vadu_core::dynamics::CellLabel::NonConvergent))
        .count();
    println!(
        "dr-basin: {} attractors over {nx}x{ny} cells ({nonconv} nonconvergent); seed={}; wrote {}",
        grid.attractors.len(),
        cli.seed,
        a.output.display()
    );
    for (i, p) in grid.attractors.iter().enumerate() {
        println!("  attractor {i}: {}", fmt_point(p));
    }
    Ok(0)
}

fn drt_cycle_cmd(cli: &Cli, a: &DrtCycleArgs) -> Result<u8, Error> {
    let family: Family = read_json(&a.family)?;
    if cli.verbose {
        eprintln!("family: {family:?}");
    }
    match detect_cycle(&family, a.max_steps) {
        Ok(report) => {
            if let Some(out) = &a.output {
                write_json(out, &report)?;
            }
            println!(
                "drt-cycle: preperiod={} period={} (orbit length {}); seed={}",
                report.preperiod,
                report.period,
                report.family_sequence.len(),
                cli.seed
            );
            Ok(0)
        }
        Err(Error::CycleBudgetExhausted {
            steps,
            partial_orbit,
        }) => {
            eprintln!(
                "drt-cycle: no repeat within {steps} steps ({} families seen)",
                partial_orbit.len()
            );
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn drt_search_cmd(cli: &Cli, a: &DrtSearchArgs) -> Result<u8, Error> {
    let params = RandomFamilyParams {
        dimension: a.dimension,
        max_members: a.max_members,
        max_vertices: a.max_vertices,
        coord_bound: a.bound,
    };
    let stats = random_family_search(&params, a.trials, a.max_steps, cli.seed)?;
    if let Some(out) = &a.output {
        write_json(out, &stats)?;
    }
    let hist: Vec<String> = stats
        .period_histogram
        .iter()
        .map(|(p, c)| format!("{p}:{c}"))
        .collect();
    println!(
        "drt-search: {} trials, periods {{{}}}, {} budget failures, {} long cycles; seed={}",
        stats.trials,
        hist.join(", "),
        stats.budget_failures,
        stats.long_cycles.len(),
        cli.seed
    );
    Ok(0)
}

fn meb_cmd(cli: &Cli, a: &MebArgs) -> Result<u8, Error> {
    let points: PointSet = read_json(&a.points)?;
    let ball = solve_meb_seeded(&points, cli.seed)?;
    if let Some(out) = &a.output {
        write_json(out, &ball)?;
    }
    println!(
        "meb: center {} radius {}; seed={}",
        fmt_point(&ball.center),
        ball.radius,
        cli.seed
    );
    if a.check {
        let oracle = brute_force_meb(&points)?;
        let dc = ball.center.dist(&oracle.center);
        let dr = (ball.radius - oracle.radius).abs();
        let kkt = kkt_certificate(&points, &ball)?;
        let objective = minimax_objective(&points, &ball.center)?;
        println!(
            "meb-check: |center diff|={dc:.3e} |radius diff|={dr:.3e} objective={objective} kkt={kkt}"
        );
        if dc > 1e-9 || dr > 1e-9 || !kkt {
            return Err(Error::numerical(
                "oracle disagreement or failed certificate",
            ));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct PairingCheck<'a> {
    pairing: &'a Pairing,
    paths: Option<Vec<Vec<usize>>>,
}

fn klinked_cmd(cli: &Cli, a: &KlinkedArgs) -> Result<u8, Error> {
    let graph: Graph = read_json(&a.graph)?;
    let budget = SearchBudget {
        node_budget: a.node_budget,
        pairing_cap: a.pairing_cap,
    };
    if let Some(pairs_path) = &a.pairs {
        let pairing: Pairing = read_json(pairs_path)?;
        let paths = find_disjoint_paths(&graph, &pairing, &budget)?;
        if let Some(out) = &a.output {
            write_json(
                out,
                &PairingCheck {
                    pairing: &pairing,
                    paths: paths.clone(),
                },
            )?;
        }
        return match paths {
            Some(p) => {
                println!(
                    "klinked: pairing joinable by {} disjoint paths; seed={}",
                    p.len(),
                    cli.seed
                );
                Ok(0)
            }
            None => {
                println!(
                    "klinked: no disjoint paths exist for the pairing; seed={}",
                    cli.seed
                );
                Ok(0)
            }
        };
    }

    let result = is_k_linked(&graph, a.k, &budget)?;
    if let Some(w) = &result.warning {
        eprintln!("warning: {w}");
    }
    if let Some(out) = &a.output {
        write_json(out, &result)?;
    }
    if result.linked {
        println!(
            "klinked: graph is {}-linked ({} vertices, {} edges); seed={}",
            a.k,
            graph.vertex_count(),
            graph.edge_count(),
            cli.seed
        );
    } else {
        println!(
            "klinked: NOT {}-linked; failing pairing {:?}; seed={}",
            a.k,
            result
                .failing_pairing
                .as_ref()
                .expect("failing pairing recorded")
                .pairs,
            cli.seed
        );
    }
    Ok(0)
}

fn load_polytope(
    polytope: &Option<PathBuf>,
    builtin_name: &Option<String>,
) -> Result<Polytope3, Error> {
    match (polytope, builtin_name) {
        (Some(path), None) => read_json(path),
        (None, Some(name)) => Ok(builtin(name.parse::<BuiltinSolid>()?)),
        _ => Err(Error::invalid(
            "provide exactly one of --polytope FILE or --builtin NAME",
        )),
    }
}

fn unfold_cmd(cli: &Cli, a: &UnfoldArgs) -> Result<u8, Error> {
    let p = load_polytope(&a.polytope, &a.builtin)?;
    let tree: CutTree = match &a.tree {
        Some(path) => read_json(path)?,
        None => enumerate_spanning_trees(&p, 1)?
            .pop()
            .ok_or_else(|| Error::invalid("polytope has no spanning tree"))?,
    };
    let net = unfold(&p, &tree)?;
    let report = check_overlap(&net, Tolerance::default())?;
    if let Some(out) = &a.output {
        write_json(out, &net)?;
    }
    if let Some(csv) = &a.csv {
        let mut buf = Vec::new();
        write_net_csv(&net, &mut buf)?;
        fs::write(csv, buf)?;
    }
    println!(
        "unfold: {} faces developed; overlap={}; seed={}",
        net.placed_faces.len(),
        if report.overlapping {
            format!("yes {:?}", report.pairs)
        } else {
            "no".to_string()
        },
        cli.seed
    );
    Ok(0)
}

fn unfold_search_cmd(cli: &Cli, a: &UnfoldSearchArgs) -> Result<u8, Error> {
    let p = load_polytope(&a.polytope, &a.builtin)?;
    let strategy: TreeStrategy = a.strategy.parse()?;
    let outcome = search_nonoverlapping(&p, strategy, a.budget, cli.seed, Tolerance::default())?;
    if let Some(out) = &a.output {
        write_json(out, &outcome)?;
    }
    if let (Some(net_path), Some(net)) = (&a.net, &outcome.found) {
        write_json(net_path, net)?;
    }
    println!(
        "unfold-search: examined {} trees, {} overlapping, {} nonoverlapping, status={}; seed={}",
        outcome.examined,
        outcome.overlapping,
        outcome.nonoverlapping,
        match outcome.status {
            SearchStatus::Found => "found",
            SearchStatus::NotFound => "not-found",
        },
        cli.seed
    );
    Ok(match outcome.status {
        SearchStatus::Found => 0,
        SearchStatus::NotFound => 2,
    })
}
