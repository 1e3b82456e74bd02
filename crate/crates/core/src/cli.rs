//! Command-line front end. Exit codes: 0 success, 1 a checked invariant failed,
//! 2 usage or parse error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, DiagRange};
use crate::lift::LiftedSequence;
use crate::number::Density;
use crate::orbit::{bounds, h_value, Orbit};
use crate::word::{self, LatticeRect, WordPatch};

pub const THREADS_ENV: &str = "BALWORD_THREADS";

/// Default anchor window for `check`: diagonals `[-10^5, 10^5]`.
pub const DEFAULT_DIAG_RADIUS: i64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "balword",
    version,
    about = "Balanced words of arbitrary density on Z^2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a rectangular patch of the planar word.
    Gen(GenArgs),
    /// Trace the orbit of the skew-product map as CSV.
    Orbit(OrbitArgs),
    /// Scan rectangle discrepancies and emit a JSON report.
    Check(CheckArgs),
    /// Estimate the density over an N x N square against the proven error bound.
    Density(DensityArgs),
    /// Print the orbit bounds and the proven balance constant.
    Bound(BoundArgs),
    /// Print bits of the one-dimensional rotation word.
    Sturmian(SturmianArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Ascii,
    Pgm,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Exact density: NUM/DEN, a decimal literal, or (P+Q*sqrt(N))/R.
    #[arg(long, allow_hyphen_values = true)]
    pub density: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 64)]
    pub width: u64,
    #[arg(long, default_value_t = 64)]
    pub height: u64,
    /// Lattice point of the first cell, as X,Y.
    #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
    pub origin: (i64, i64),
    #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
    pub format: RenderFormat,
    /// Write plain (P2) instead of binary (P5) PGM.
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub steps: u64,
    /// Fractional digits for irrational values.
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Scan every p x q shape with p, q up to this.
    #[arg(long, default_value_t = 64)]
    pub max_shape: u64,
    /// Also scan p x 1 and 1 x q up to this length.
    #[arg(long, default_value_t = 4096)]
    pub elongated: u64,
    /// Number of anchor diagonals, starting at --diag-start. When absent the
    /// window is [-100000, 100000].
    #[arg(long)]
    pub diag_range: Option<u64>,
    /// First anchor diagonal when --diag-range is given.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub diag_start: i64,
    /// Record the generation time in the report.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Side length N of the square [x, x+N) x [y, y+N).
    #[arg(long, default_value_t = 1000)]
    pub size: u64,
    #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
    pub origin: (i64, i64),
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct SturmianArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub length: u64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub start: i64,
}

fn parse_point(s: &str) -> Result<(i64, i64), String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(x)?, parse(y)?))
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invariant(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Invariant(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn invariant(e: impl std::fmt::Display) -> Failure {
    Failure::Invariant(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "balword: {}", f.message());
            f.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Orbit(a) => cmd_orbit(a, stdout),
        Command::Check(a) => cmd_check(a, stdout),
        Command::Density(a) => cmd_density(a, stdout),
        Command::Bound(a) => cmd_bound(a, stdout),
        Command::Sturmian(a) => cmd_sturmian(a, stdout),
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(usage),
    }
}

fn density(common: &Common) -> Result<Density, Failure> {
    Density::parse(&common.density).map_err(usage)
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    let rect = LatticeRect::planar(args.origin.0, args.origin.1, args.width, args.height)
        .map_err(usage)?;
    let seq = LiftedSequence::planar(&a);
    let patch = word::patch(&seq, &rect).map_err(invariant)?;
    let bytes = match args.format {
        RenderFormat::Ascii => render_ascii(&patch).into_bytes(),
        RenderFormat::Csv => render_csv(&patch).into_bytes(),
        RenderFormat::Pgm if args.plain => render_pgm_plain(&patch).into_bytes(),
        RenderFormat::Pgm => render_pgm(&patch),
    };
    emit(&args.common.out, &bytes, stdout)
}

/// One line per row, first row is the origin's; `#` for 1 and `.` for 0.
pub fn render_ascii(patch: &WordPatch) -> String {
    let mut s = String::with_capacity((patch.width() + 1) * patch.height());
    for row in patch.rows() {
        s.extend(row.iter().map(|&b| if b == 1 { '#' } else { '.' }));
        s.push('\n');
    }
    s
}

pub fn render_csv(patch: &WordPatch) -> String {
    let mut s = String::new();
    for row in patch.rows() {
        let cells: Vec<&str> = row
            .iter()
            .map(|&b| if b == 1 { "1" } else { "0" })
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Binary P5 with maxval 1; the sample is the bit.
pub fn render_pgm(patch: &WordPatch) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n1\n", patch.width(), patch.height()).into_bytes();
    out.extend_from_slice(patch.bits());
    out
}

pub fn render_pgm_plain(patch: &WordPatch) -> String {
    let mut s = format!("P2\n{} {}\n1\n", patch.width(), patch.height());
    for row in patch.rows() {
        let cells: Vec<&str> = row
            .iter()
            .map(|&b| if b == 1 { "1" } else { "0" })
            .collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

/// Reads a P2 or P5 image with maxval 1 back into `(width, height, bits)`.
pub fn read_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>), String> {
    let mut pos = 0;
    let mut token = || -> Result<String, String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    let magic = token()?;
    let num = |t: String| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let width = num(token()?)?;
    let height = num(token()?)?;
    let maxval = num(token()?)?;
    if maxval != 1 {
        return Err(format!("expected maxval 1, got {maxval}"));
    }
    let bits = match magic.as_str() {
        "P5" => {
            let body = &bytes[pos + 1..];
            if body.len() < width * height {
                return Err("truncated raster".into());
            }
            body[..width * height].to_vec()
        }
        "P2" => String::from_utf8_lossy(&bytes[pos..])
            .split_ascii_whitespace()
            .take(width * height)
            .map(|t| t.parse::<u8>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?,
        other => return Err(format!("unsupported magic `{other}`")),
    };
    if bits.len() != width * height {
        return Err("truncated raster".into());
    }
    Ok((width, height, bits))
}

pub fn cmd_orbit(args: &OrbitArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    let orbit = Orbit::new(&a).map_err(usage)?;
    let mut csv = String::from("step,x,y,h\n");
    let mut failure = None;
    for state in orbit.take(args.steps as usize) {
        match state {
            Ok(s) => {
                let h = h_value(&s.x, &s.y, &a);
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    s.step,
                    a.render(&s.x, args.digits),
                    a.render(&s.y, args.digits),
                    h.label()
                ));
            }
            Err(e) => {
                failure = Some(invariant(e));
                break;
            }
        }
    }
    emit(&args.common.out, csv.as_bytes(), stdout)?;
    failure.map_or(Ok(()), Err)
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{THREADS_ENV}={v} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(usage)
}

pub fn cmd_check(args: &CheckArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    if args.max_shape == 0 {
        return Err(usage("--max-shape must be positive"));
    }
    let range = match args.diag_range {
        None => DiagRange::symmetric(DEFAULT_DIAG_RADIUS),
        Some(len) => {
            DiagRange::new(args.diag_start, args.diag_start + len as i64).map_err(usage)?
        }
    };
    let shapes = analysis::default_shapes(args.max_shape, args.elongated.max(args.max_shape));
    let seq = LiftedSequence::planar(&a);
    let pool = thread_pool()?;
    let mut report = pool
        .install(|| analysis::scan(&seq, &args.common.density, &shapes, range))
        .map_err(invariant)?;
    if args.stamp {
        report.generated_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    let mut json = serde_json::to_string_pretty(&report).map_err(invariant)?;
    json.push('\n');
    emit(&args.common.out, json.as_bytes(), stdout)?;
    if report.within_bound() {
        Ok(())
    } else {
        Err(invariant(format!(
            "overall discrepancy {} exceeds the proven bound {}",
            report.overall_k, report.theoretical_bound
        )))
    }
}

#[derive(Serialize)]
struct DensityOutput {
    density: String,
    origin: (i64, i64),
    size: u64,
    count: u64,
    estimate: String,
    estimate_decimal: String,
    deviation: String,
    error_bound: String,
    within_bound: bool,
}

pub fn cmd_density(args: &DensityArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    let rect =
        LatticeRect::planar(args.origin.0, args.origin.1, args.size, args.size).map_err(usage)?;
    let seq = LiftedSequence::planar(&a);
    let est = analysis::density_estimate(&seq, &rect).map_err(invariant)?;
    let n = a.radicand();
    let out = DensityOutput {
        density: args.common.density.clone(),
        origin: args.origin,
        size: args.size,
        count: est.count,
        estimate: est.estimate.to_string(),
        estimate_decimal: crate::number::QuadValue::from_rational(&est.estimate, &n)
            .to_decimal(args.digits),
        deviation: est.deviation(&a).to_decimal(args.digits),
        error_bound: est.error_bound.to_decimal(args.digits),
        within_bound: est.within_bound(&a),
    };
    let mut json = serde_json::to_string_pretty(&out).map_err(invariant)?;
    json.push('\n');
    emit(&args.common.out, json.as_bytes(), stdout)?;
    if out.within_bound {
        Ok(())
    } else {
        Err(invariant("density estimate outside its proven error bound"))
    }
}

#[derive(Serialize)]
struct BoundOutput {
    density: String,
    alpha: Option<String>,
    beta: Option<String>,
    envelope: Option<String>,
    rectangle_sum_bound: Option<String>,
    balance_bound: u64,
}

pub fn cmd_bound(args: &BoundArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    let balance = analysis::balance_bound(&a, 2).map_err(invariant)?;
    let out = match bounds(&a) {
        Ok(b) => {
            let env = b.envelope();
            BoundOutput {
                density: args.common.density.clone(),
                alpha: Some(b.alpha.to_decimal(args.digits)),
                beta: Some(b.beta.to_decimal(args.digits)),
                envelope: Some(env.to_decimal(args.digits)),
                rectangle_sum_bound: Some(env.scale(&4.into()).to_decimal(args.digits)),
                balance_bound: balance,
            }
        }
        // Constant words: no orbit, nothing to bound.
        Err(_) => BoundOutput {
            density: args.common.density.clone(),
            alpha: None,
            beta: None,
            envelope: None,
            rectangle_sum_bound: None,
            balance_bound: balance,
        },
    };
    let mut json = serde_json::to_string_pretty(&out).map_err(invariant)?;
    json.push('\n');
    emit(&args.common.out, json.as_bytes(), stdout)
}

pub fn cmd_sturmian(args: &SturmianArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let a = density(&args.common)?;
    let mut s: String = (0..args.length as i64)
        .map(|i| {
            if word::sturmian_word_at(&a, args.start + i) == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect();
    s.push('\n');
    emit(&args.common.out, s.as_bytes(), stdout)
}

/// Entry point for the binary.
pub fn main_with_io() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}
