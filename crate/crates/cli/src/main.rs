use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qvseg::blocks::{describe, example_circuit, BlockKind};
use qvseg::encoding::pgm::{self, PgmFormat};
use qvseg::pipeline::{cost_summary_json, DEFAULT_SHOTS};
use qvseg::qvm::affine_fit;
use qvseg::{
    classical_three_frame_diff, qubit_and_cost_summary, quantum_cost, segment_video, validate_video, BoundaryMode,
    Error, Mode, Video,
};
use serde_json::{json, Value};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PARAMETER: u8 = 3;
const EXIT_CORRUPT: u8 = 4;

/// Moving-target segmentation of grayscale video by a three-frame
/// difference circuit, simulated exactly.
#[derive(Parser, Debug)]
#[command(name = "qvseg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Segment a video and write result frames, histogram, cost and layout.
    Segment(SegmentArgs),
    /// Compare the circuit's segmentation with the classical one.
    Compare(CompareArgs),
    /// Print comparator and pipeline cost tables.
    Cost(CostArgs),
    /// Inspect circuit blocks.
    Blocks {
        #[command(subcommand)]
        command: BlocksCommand,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Frame directory (frame_0000.pgm, ...) or JSON manifest.
    #[arg(long)]
    input: PathBuf,
    /// Threshold as an integer, `0b`-prefixed binary, or a q-digit binary
    /// string such as 001 for q = 3.
    #[arg(long)]
    threshold: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SegmentArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = DEFAULT_SHOTS, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Sparse)]
    mode: ModeArg,
    /// Write foreground pixels as 255 instead of 1.
    #[arg(long)]
    binary_scale: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::P2)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Boundary handling of the classical reference.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Cyclic)]
    boundary: BoundaryArg,
    /// Flip the circuit's result at frame,row,column before comparing.
    #[arg(long, hide = true, value_name = "J,Y,X")]
    inject_mismatch: Option<String>,
}

#[derive(Args, Debug)]
struct CostArgs {
    /// Frame-count exponents, as `a` or `a-b`.
    #[arg(long, default_value = "1-4")]
    m: String,
    /// Side exponents, as `a` or `a-b`.
    #[arg(long, default_value = "1-4")]
    n: String,
    /// Bit depths, as `a` or `a-b`.
    #[arg(long, default_value = "3")]
    q: String,
    #[arg(long, default_value_t = 1)]
    threshold: u64,
    /// Also write the tables as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BlocksCommand {
    /// Registers, contract and cost of one block.
    Describe {
        /// comparator, subtractor, abs-subtractor, copy, cycle-shift,
        /// threshold-compare, binarization or and.
        name: String,
        /// Register width.
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Also print the gate list.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Sparse,
    DenseCheck,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    P2,
    P5,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundaryArg {
    Cyclic,
    Clamp,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Json(_) | Error::Format { .. } | Error::InvalidVideo(_) => EXIT_INPUT,
            Error::CorruptState(_) | Error::IncompleteSampling(_) | Error::UnboundTable(_) => EXIT_CORRUPT,
            Error::InvalidArgument(_) | Error::InvalidGate(_) | Error::Unsupported(_) => EXIT_PARAMETER,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn parameter(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_PARAMETER, message: message.into() }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load_video(path: &Path) -> CliResult<Video> {
    if !path.exists() {
        return Err(Failure { code: EXIT_INPUT, message: format!("input {} does not exist", path.display()) });
    }
    let video = if path.is_dir() { pgm::load_pgm_dir(path)? } else { Video::load_json(path)? };
    validate_video(&video).map_err(Error::InvalidVideo)?;
    Ok(video)
}

/// `0b101` and q-digit strings of 0/1 are binary; anything else decimal.
fn parse_threshold(text: &str, q: u32) -> CliResult<u64> {
    let t = text.trim();
    let value = if let Some(bits) = t.strip_prefix("0b") {
        u64::from_str_radix(bits, 2).ok()
    } else if t.len() == q as usize && t.len() > 1 && t.bytes().all(|c| c == b'0' || c == b'1') {
        u64::from_str_radix(t, 2).ok()
    } else {
        t.parse().ok()
    };
    let value = value.ok_or_else(|| parameter(format!("cannot parse threshold {text:?}")))?;
    if value >> q != 0 {
        return Err(parameter(format!("threshold {value} does not fit in q = {q} bits")));
    }
    Ok(value)
}

fn parse_range(text: &str, what: &str) -> CliResult<Vec<u32>> {
    let bad = || parameter(format!("bad {what} range {text:?}; expected `a` or `a-b`"));
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn write_json(path: &Path, value: &Value) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_segment(args: &SegmentArgs) -> CliResult {
    let video = load_video(&args.run.input)?;
    let threshold = parse_threshold(&args.run.threshold, video.q)?;
    let mode = match args.mode {
        ModeArg::Sparse => Mode::Sparse,
        ModeArg::DenseCheck => Mode::DenseCheck,
    };
    let r = segment_video(&video, threshold, mode, Some(args.shots), args.seed)?;
    let out = &args.run.out;
    let format = match args.format {
        FormatArg::P2 => PgmFormat::P2,
        FormatArg::P5 => PgmFormat::P5,
    };
    pgm::save_pgm_dir(out, &r.result, format, args.binary_scale.then_some(255))?;
    write_json(&out.join("histogram.json"), &json!(r.histogram))?;
    let (m, n, q) = (video.m_exp, video.n_exp, video.q);
    write_json(&out.join("cost.json"), &cost_summary_json(&r.cost, m, n, q, threshold))?;
    write_json(&out.join("layout.json"), &r.layout.to_json())?;
    write_json(&out.join("segmentation.json"), &r.to_json())?;
    let dense = r.dense_tvd.map(|d| format!(" dense_tvd={d:.4}")).unwrap_or_default();
    println!(
        "width={} reference_width={} total_cost={} foreground={}{dense}",
        r.layout.width(),
        r.layout.reference_width(),
        r.cost.total_cost,
        r.result.count_nonzero()
    );
    Ok(())
}

fn parse_cell(text: &str) -> CliResult<(usize, usize, usize)> {
    let parts: Vec<usize> = text.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| {
        parameter(format!("bad cell {text:?}; expected J,Y,X"))
    })?;
    match parts[..] {
        [j, y, x] => Ok((j, y, x)),
        _ => Err(parameter(format!("bad cell {text:?}; expected J,Y,X"))),
    }
}

fn cmd_compare(args: &CompareArgs) -> CliResult<bool> {
    let video = load_video(&args.run.input)?;
    let threshold = parse_threshold(&args.run.threshold, video.q)?;
    let boundary = match args.boundary {
        BoundaryArg::Cyclic => BoundaryMode::Cyclic,
        BoundaryArg::Clamp => BoundaryMode::Clamp,
    };
    let mut quantum = segment_video(&video, threshold, Mode::Sparse, None, 0)?.result;
    if let Some(cell) = &args.inject_mismatch {
        let (j, y, x) = parse_cell(cell)?;
        let px = quantum
            .frames
            .get_mut(j)
            .and_then(|f| f.get_mut(y))
            .and_then(|r| r.get_mut(x))
            .ok_or_else(|| parameter(format!("cell {cell} outside the video")))?;
        *px ^= 1;
    }
    let classical = classical_three_frame_diff(&video, threshold as u32, boundary)?;
    let mut mismatches = Vec::new();
    for (j, (fq, fc)) in quantum.frames.iter().zip(&classical.frames).enumerate() {
        for (y, (rq, rc)) in fq.iter().zip(fc).enumerate() {
            for (x, (&a, &b)) in rq.iter().zip(rc).enumerate() {
                if a != b {
                    mismatches.push(json!({ "frame": j, "y": y, "x": x, "quantum": a, "classical": b }));
                }
            }
        }
    }
    fs::create_dir_all(&args.run.out)?;
    let count = mismatches.len();
    write_json(
        &args.run.out.join("diff.json"),
        &json!({
            "bit_order": "lsb0",
            "threshold": threshold,
            "boundary": boundary.to_string(),
            "mismatch_count": count,
            "mismatches": mismatches,
        }),
    )?;
    println!("mismatches={count} boundary={boundary} foreground={}", classical.count_nonzero());
    Ok(count == 0)
}

/// Reference comparator slope and offset, and the literature rows quoted
/// alongside it, as `(name, alpha, beta)` in `alpha * q + beta`.
const COMPARATOR_ROWS: [(&str, i64, i64); 4] = [
    ("reference", 7, 6),
    ("literature A", 30, -15),
    ("literature B", 12, -8),
    ("literature C", 28, -15),
];

fn cmd_cost(args: &CostArgs) -> CliResult {
    let ms = parse_range(&args.m, "m")?;
    let ns = parse_range(&args.n, "n")?;
    let qs = parse_range(&args.q, "q")?;

    let points: Vec<(i64, i64)> = (2..=8)
        .map(|q| Ok((q as i64, quantum_cost(&example_circuit(BlockKind::Comparator, q)?).total_cost as i64)))
        .collect::<Result<_, Error>>()?;
    let fit = affine_fit(&points);
    println!("comparator cost by q");
    print!("{:>14}", "q");
    for (q, _) in &points {
        print!("{q:>6}");
    }
    println!();
    print!("{:>14}", "measured");
    for (_, c) in &points {
        print!("{c:>6}");
    }
    println!();
    for (name, a, b) in COMPARATOR_ROWS {
        print!("{name:>14}");
        for (q, _) in &points {
            print!("{:>6}", a * q + b);
        }
        println!("   ({a}q{b:+})");
    }
    match fit {
        Some((a, b)) => println!("measured fit: {a}q{b:+} (reference 7q+6)"),
        None => println!("measured fit: not affine"),
    }

    println!();
    println!("pipeline (T = {})", args.threshold);
    println!(
        "{:>3} {:>3} {:>3} {:>6} {:>10} {:>6} {:>6}  per block",
        "m", "n", "q", "width", "ref width", "gates", "cost"
    );
    let mut rows = Vec::new();
    for &q in &qs {
        for &m in &ms {
            let mut costs = Vec::new();
            for &n in &ns {
                let r = qubit_and_cost_summary(m, n, q, args.threshold)?;
                let blocks: Vec<String> = r.per_block.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!(
                    "{m:>3} {n:>3} {q:>3} {:>6} {:>10} {:>6} {:>6}  {}",
                    r.qubit_count,
                    r.reference_qubit_count.unwrap_or(0),
                    r.gate_count(),
                    r.total_cost,
                    blocks.join(" ")
                );
                costs.push(r.total_cost);
                rows.push(cost_summary_json(&r, m, n, q, args.threshold));
            }
            if costs.windows(2).any(|w| w[0] != w[1]) {
                println!("    cost varies with n at m={m}, q={q}");
            }
        }
    }
    println!("pipeline cost is independent of n; the cycle shift makes it quadratic in m");

    if let Some(path) = &args.json {
        let literature: Vec<Value> =
            COMPARATOR_ROWS.iter().map(|(name, a, b)| json!({ "name": name, "alpha": a, "beta": b })).collect();
        write_json(
            path,
            &json!({
                "bit_order": "lsb0",
                "comparator": {
                    "points": points,
                    "fit": fit.map(|(a, b)| json!({ "alpha": a, "beta": b })),
                    "rows": literature,
                },
                "pipeline": rows,
            }),
        )?;
    }
    Ok(())
}

fn cmd_describe(name: &str, q: usize, dump: bool) -> CliResult {
    let kind: BlockKind = name.parse()?;
    if q == 0 {
        return Err(parameter("q must be at least 1"));
    }
    let spec = describe(kind, q);
    let circuit = example_circuit(kind, q)?;
    let cost = quantum_cost(&circuit);
    let value = json!({
        "bit_order": "lsb0",
        "spec": spec,
        "width": circuit.width(),
        "total_cost": cost.total_cost,
        "gate_census": cost.gate_census,
    });
    println!("{}", serde_json::to_string_pretty(&value).map_err(Error::from)?);
    if dump {
        print!("{}", circuit.dump());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Segment(a) => cmd_segment(a).map(|_| true),
        Command::Compare(a) => cmd_compare(a),
        Command::Cost(a) => cmd_cost(a).map(|_| true),
        Command::Blocks { command: BlocksCommand::Describe { name, q, dump } } => {
            cmd_describe(name, *q, *dump).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_PARAMETER) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
