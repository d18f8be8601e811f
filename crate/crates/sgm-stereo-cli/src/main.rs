//! Command-line front end: estimate single pairs, evaluate against ground
//! truth, benchmark throughput and run whole datasets.
//!
//! Exit codes: 0 on success, 1 on runtime failures, 2 on usage and
//! validation errors.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{push_eval, push_stats, Report, ReportFormat};
use sgm_stereo::imgio::{self, DatasetLayout, DisparityEncoding};
use sgm_stereo::metrics;
use sgm_stereo::{
    default_workers, estimate_with, ConsistencyMode, CostFunction, DisparityRange, Error,
    PathCount, PipelineConfig, Workspace,
};

#[derive(Parser)]
#[command(
    name = "sgm-stereo",
    version,
    about = "Dense stereo disparity estimation with semi-global matching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the disparity map of one rectified pair
    Estimate(EstimateArgs),
    /// Compare an estimated disparity map against ground truth
    Evaluate(EvaluateArgs),
    /// Time repeated runs on one pair and report throughput
    Bench(BenchArgs),
    /// Estimate and evaluate every pair of a dataset folder
    Dataset(DatasetArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CostArg {
    #[value(name = "census5x5")]
    Census5x5,
    #[value(name = "census9x7")]
    Census9x7,
    #[value(name = "ncc5x5")]
    Ncc5x5,
    #[value(name = "ncc9x9")]
    Ncc9x9,
}

impl From<CostArg> for CostFunction {
    fn from(arg: CostArg) -> Self {
        match arg {
            CostArg::Census5x5 => CostFunction::Census5x5,
            CostArg::Census9x7 => CostFunction::Census9x7,
            CostArg::Ncc5x5 => CostFunction::Ncc5x5,
            CostArg::Ncc9x9 => CostFunction::Ncc9x9,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConsistencyArg {
    Off,
    Approx,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    /// 16-bit fixed-point PGM (disparity * 256, 0 = invalid)
    Pgm16,
    /// Grayscale PFM (NaN = invalid)
    Pfm,
}

impl From<OutFormat> for DisparityEncoding {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Pgm16 => DisparityEncoding::Fixed256,
            OutFormat::Pfm => DisparityEncoding::FloatMap,
        }
    }
}

/// Pipeline flags shared by estimate, bench and dataset.
#[derive(Args)]
struct PipelineArgs {
    /// Largest disparity candidate
    #[arg(long)]
    max_disp: u16,
    /// Smallest disparity candidate
    #[arg(long, default_value_t = 0)]
    min_disp: u16,
    /// Matching cost function
    #[arg(long, value_enum, default_value_t = CostArg::Census9x7)]
    cost: CostArg,
    /// Number of aggregation paths (4 or 8)
    #[arg(long, default_value_t = 8)]
    paths: u8,
    /// Penalty for one-pixel disparity changes (default depends on --cost)
    #[arg(long)]
    p1: Option<u16>,
    /// Penalty for larger disparity changes (default depends on --cost)
    #[arg(long)]
    p2: Option<u16>,
    /// Disable subpixel refinement
    #[arg(long)]
    no_subpixel: bool,
    /// Left-right consistency check mode
    #[arg(long, value_enum, default_value_t = ConsistencyArg::Approx)]
    consistency: ConsistencyArg,
    /// Consistency threshold in pixels
    #[arg(long, default_value_t = 1.0)]
    lr_threshold: f32,
    /// Disable the 3x3 median filter
    #[arg(long)]
    no_median: bool,
    /// Worker threads (default: logical cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Left (reference) image
    #[arg(long)]
    left: PathBuf,
    /// Right (matching) image
    #[arg(long)]
    right: PathBuf,
    /// Output disparity map path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = OutFormat::Pgm16)]
    out_format: OutFormat,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Stats document format
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Estimated disparity map
    #[arg(long)]
    est: PathBuf,
    /// Ground-truth disparity map
    #[arg(long)]
    gt: PathBuf,
    /// Upsample the estimate by this integer factor before comparing
    #[arg(long, default_value_t = 1)]
    scale: usize,
    /// Report document format
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// Number of timed runs
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Measured power draw, enables the FPS/W figure
    #[arg(long)]
    watts: Option<f64>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
}

#[derive(Args)]
struct DatasetArgs {
    /// Dataset root folder
    #[arg(long)]
    root: PathBuf,
    /// Folder layout
    #[arg(long, value_enum, default_value_t = LayoutArg::Pairs)]
    layout: LayoutArg,
    /// Upsample estimates by this factor before evaluating
    #[arg(long, default_value_t = 1)]
    scale: usize,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Pairs,
    Kitti,
}

impl From<LayoutArg> for DatasetLayout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Pairs => DatasetLayout::Pairs,
            LayoutArg::Kitti => DatasetLayout::KittiLike,
        }
    }
}

enum CmdError {
    /// Bad flags or an invalid configuration: exit code 2.
    Usage(String),
    /// Everything that went wrong while processing: exit code 1.
    Runtime(String),
}

/// Library errors that indicate a bad configuration are usage errors; the
/// rest are runtime failures.
fn classify(error: Error) -> CmdError {
    match error {
        Error::Config(_) | Error::InvalidRange { .. } | Error::RangeTooWide { .. } => {
            CmdError::Usage(error.to_string())
        }
        other => CmdError::Runtime(other.to_string()),
    }
}

fn runtime(error: Error) -> CmdError {
    CmdError::Runtime(error.to_string())
}

fn build_config(args: &PipelineArgs) -> Result<PipelineConfig, CmdError> {
    let range = DisparityRange::new(args.min_disp, args.max_disp).map_err(classify)?;
    let mut cfg = PipelineConfig::new(args.cost.into(), range);
    cfg.paths = match args.paths {
        4 => PathCount::Four,
        8 => PathCount::Eight,
        other => return Err(CmdError::Usage(format!("--paths must be 4 or 8, got {other}"))),
    };
    if let Some(p1) = args.p1 {
        cfg.p1 = p1;
    }
    if let Some(p2) = args.p2 {
        cfg.p2 = p2;
    }
    if cfg.p1 == 0 || cfg.p1 >= cfg.p2 {
        return Err(CmdError::Usage(format!(
            "penalties must satisfy 0 < p1 < p2, got p1={} p2={}",
            cfg.p1, cfg.p2
        )));
    }
    cfg.subpixel = !args.no_subpixel;
    cfg.consistency = match args.consistency {
        ConsistencyArg::Off => ConsistencyMode::Off,
        ConsistencyArg::Approx => ConsistencyMode::Approximate,
        ConsistencyArg::Exact => ConsistencyMode::Exact,
    };
    cfg.consistency_threshold = args.lr_threshold;
    cfg.median = !args.no_median;
    cfg.workers = args.threads.unwrap_or_else(default_workers);
    if cfg.workers == 0 {
        return Err(CmdError::Usage("--threads must be at least 1".to_string()));
    }
    Ok(cfg)
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), CmdError> {
    let cfg = build_config(&args.pipeline)?;
    let left = imgio::load_gray(&args.left).map_err(runtime)?;
    let right = imgio::load_gray(&args.right).map_err(runtime)?;
    let mut workspace = Workspace::new();
    let (map, stats) = estimate_with(&mut workspace, &left, &right, &cfg).map_err(classify)?;
    if let Some(out) = &args.out {
        imgio::write_disparity(&map, out, args.out_format.into()).map_err(runtime)?;
    }
    let mut doc = Report::new();
    push_stats(&mut doc, &stats);
    doc.float("density", metrics::density(&map));
    print!("{}", doc.render(args.report));
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CmdError> {
    if args.scale == 0 {
        return Err(CmdError::Usage("--scale must be at least 1".to_string()));
    }
    let mut est = imgio::load_disparity(&args.est).map_err(runtime)?;
    let gt = imgio::load_disparity(&args.gt).map_err(runtime)?;
    if args.scale > 1 {
        est = metrics::rescale_disparity(&est, args.scale);
    }
    let eval = metrics::evaluate(&est, &gt).map_err(runtime)?;
    let mut doc = Report::new();
    push_eval(&mut doc, &eval);
    print!("{}", doc.render(args.report));
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CmdError> {
    if args.repeat == 0 {
        return Err(CmdError::Usage("--repeat must be at least 1".to_string()));
    }
    if let Some(watts) = args.watts {
        if !(watts > 0.0) {
            return Err(CmdError::Usage("--watts must be positive".to_string()));
        }
    }
    let cfg = build_config(&args.pipeline)?;
    let left = imgio::load_gray(&args.left).map_err(runtime)?;
    let right = imgio::load_gray(&args.right).map_err(runtime)?;
    let mut workspace = Workspace::new();
    let mut doc = Report::new();
    let mut times = Vec::with_capacity(args.repeat);
    for run in 1..=args.repeat {
        let (_, stats) = estimate_with(&mut workspace, &left, &right, &cfg).map_err(classify)?;
        doc.float(format!("run_{run}_s"), stats.time_total_s);
        times.push(stats.time_total_s);
    }
    times.sort_by(f64::total_cmp);
    let median = if times.len() % 2 == 1 {
        times[times.len() / 2]
    } else {
        0.5 * (times[times.len() / 2 - 1] + times[times.len() / 2])
    };
    let mde = metrics::throughput_mde_s(left.width(), left.height(), cfg.range.count(), median)
        .map_err(runtime)?;
    let fps = metrics::expected_fps(mde, left.width(), left.height(), cfg.range.count());
    doc.float("median_total_s", median)
        .float("mde_per_s", mde)
        .float("fps", fps);
    if let Some(watts) = args.watts {
        doc.float("fps_per_w", metrics::fps_per_watt(fps, watts).map_err(runtime)?);
    }
    print!("{}", doc.render(args.report));
    Ok(())
}

struct PairOutcome {
    name: String,
    time_s: f64,
    mde_per_s: f64,
    eval: Option<sgm_stereo::metrics::EvalReport>,
}

fn cmd_dataset(args: DatasetArgs) -> Result<(), CmdError> {
    if args.scale == 0 {
        return Err(CmdError::Usage("--scale must be at least 1".to_string()));
    }
    let cfg = build_config(&args.pipeline)?;
    let scan = imgio::scan_dataset(&args.root, args.layout.into()).map_err(runtime)?;
    for warning in &scan.warnings {
        eprintln!("warning: {warning}");
    }
    if scan.entries.is_empty() {
        return Err(CmdError::Runtime("no pairs found".to_string()));
    }
    let mut workspace = Workspace::new();
    let mut outcomes: Vec<PairOutcome> = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    let mut work_done = 0u64;
    let mut time_spent = 0.0f64;
    for entry in &scan.entries {
        let result = (|| -> Result<PairOutcome, Error> {
            let left = imgio::load_gray(&entry.left)?;
            let right = imgio::load_gray(&entry.right)?;
            let (map, stats) = estimate_with(&mut workspace, &left, &right, &cfg)?;
            let eval = match &entry.gt {
                Some(gt_path) => {
                    let gt = imgio::load_disparity(gt_path)?;
                    let est = if args.scale > 1 {
                        metrics::rescale_disparity(&map, args.scale)
                    } else {
                        map
                    };
                    Some(metrics::evaluate(&est, &gt)?)
                }
                None => None,
            };
            work_done += (stats.width * stats.height * stats.disparity_count) as u64;
            time_spent += stats.time_total_s;
            Ok(PairOutcome {
                name: entry.name.clone(),
                time_s: stats.time_total_s,
                mde_per_s: stats.mde_per_s,
                eval,
            })
        })();
        match result {
            Ok(outcome) => outcomes.push(outcome),
            Err(e) => {
                eprintln!("error: {}: {e}", entry.name);
                failures.push(entry.name.clone());
            }
        }
    }

    println!(
        "{:<16} {:>9} {:>10} {:>8} {:>8} {:>8} {:>8}",
        "name", "time_s", "mde_per_s", "d1_est", "d1_all", "bad_1", "density"
    );
    let metric_cell = |v: Option<f64>| match v {
        Some(v) => format!("{v:.4}"),
        None => "n/a".to_string(),
    };
    for o in &outcomes {
        println!(
            "{:<16} {:>9.4} {:>10.1} {:>8} {:>8} {:>8} {:>8}",
            o.name,
            o.time_s,
            o.mde_per_s,
            metric_cell(o.eval.as_ref().map(|e| e.d1_all_est)),
            metric_cell(o.eval.as_ref().map(|e| e.d1_all_all)),
            metric_cell(o.eval.as_ref().map(|e| e.bad_1)),
            metric_cell(o.eval.as_ref().map(|e| e.density)),
        );
    }
    let evaluated: Vec<&sgm_stereo::metrics::EvalReport> =
        outcomes.iter().filter_map(|o| o.eval.as_ref()).collect();
    let mean = |f: fn(&sgm_stereo::metrics::EvalReport) -> f64| {
        (!evaluated.is_empty())
            .then(|| evaluated.iter().map(|e| f(e)).sum::<f64>() / evaluated.len() as f64)
    };
    if !outcomes.is_empty() {
        let mean_time = time_spent / outcomes.len() as f64;
        println!(
            "{:<16} {:>9.4} {:>10.1} {:>8} {:>8} {:>8} {:>8}",
            "mean",
            mean_time,
            work_done as f64 / time_spent / 1e6,
            metric_cell(mean(|e| e.d1_all_est)),
            metric_cell(mean(|e| e.d1_all_all)),
            metric_cell(mean(|e| e.bad_1)),
            metric_cell(mean(|e| e.density)),
        );
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CmdError::Runtime(format!(
            "{} of {} pairs failed",
            failures.len(),
            scan.entries.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Dataset(args) => cmd_dataset(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CmdError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
