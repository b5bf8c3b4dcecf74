use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rnapprox::{
    differentiate_reconstruction, gauss_legendre_measure, image_metrics, lebesgue_measure, natural_basis, read_pgm,
    reconstruct_derivative_1d, spur_average, write_pgm, BasisKind, GrayImage, Method, MomentSet, Reconstructor,
};
use serde::Serialize;

const RUNGE_HEADER: &str = "x,f,A_LS,A_RN,df,ADf_LS,ADf_RN,DAf_LS,DAf_RN";
const DIFF_STEP: f64 = 1e-5;

#[derive(Parser, Debug)]
#[command(
    name = "rnapprox",
    version,
    about = "Least-squares and Radon-Nikodym reconstruction from moments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runge function curves and their derivatives as CSV.
    Runge(RungeArgs),
    /// Reconstruct a PGM image from its moments.
    Image(ImageArgs),
    /// Natural basis, spectrum and Lebesgue histogram of a PGM image as JSON.
    Natural(NaturalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum BasisArg {
    Chebyshev,
    Legendre,
}

impl BasisArg {
    fn kind(self) -> BasisKind {
        match self {
            BasisArg::Chebyshev => BasisKind::chebyshev(),
            BasisArg::Legendre => BasisKind::legendre(),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MethodArg {
    Ls,
    Rn,
    Both,
}

impl MethodArg {
    fn methods(self) -> &'static [Method] {
        match self {
            MethodArg::Ls => &[Method::Ls],
            MethodArg::Rn => &[Method::Rn],
            MethodArg::Both => &[Method::Ls, Method::Rn],
        }
    }
}

#[derive(Args, Debug)]
struct RungeArgs {
    #[arg(long, value_enum, default_value_t = BasisArg::Chebyshev)]
    basis: BasisArg,
    /// Number of basis functions.
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Gauss-Legendre nodes of the measure on [-1, 1].
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    quad_nodes: u32,
    /// Points of the uniform x grid over [-1.5, 1.5].
    #[arg(long, default_value_t = 1001, value_parser = clap::value_parser!(u32).range(2..))]
    grid: u32,
    /// Additional x values appended after the grid (repeatable).
    #[arg(long = "extra-x", allow_negative_numbers = true)]
    extra_x: Vec<f64>,
    #[arg(long, default_value = "runge.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ImageDims {
    #[arg(long, value_enum, default_value_t = BasisArg::Chebyshev)]
    basis: BasisArg,
    /// Basis functions per axis.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Overrides --n along x.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    nx: Option<u32>,
    /// Overrides --n along y.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    ny: Option<u32>,
}

impl ImageDims {
    fn resolve(&self) -> (usize, usize) {
        (self.nx.unwrap_or(self.n) as usize, self.ny.unwrap_or(self.n) as usize)
    }
}

#[derive(Args, Debug)]
struct ImageArgs {
    input: PathBuf,
    #[command(flatten)]
    dims: ImageDims,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Output directory; defaults to the input's directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NaturalArgs {
    input: PathBuf,
    #[command(flatten)]
    dims: ImageDims,
    /// Also emit a Lebesgue histogram of the spectrum with this many bins.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    bins: Option<u32>,
    /// JSON output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<rnapprox::Error> for Failure {
    fn from(e: rnapprox::Error) -> Self {
        use rnapprox::Error::*;
        match e {
            BadMagic | BadHeader(_) | BadMaxval(_) | Truncated { .. } | SampleOutOfRange { .. } => {
                Failure::Io(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    read_pgm(&bytes).map_err(|e| match Failure::from(e) {
        Failure::Io(msg) => io_err(path, msg),
        other => other,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(io_err(dir, "not a directory"))
    }
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn runge(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}

fn runge_prime(x: f64) -> f64 {
    -50.0 * x / (1.0 + 25.0 * x * x).powi(2)
}

fn cmd_runge(args: &RungeArgs) -> Result<(), Failure> {
    ensure_dir(&parent_dir(&args.out))?;
    let basis = args.basis.kind();
    let n = args.n as usize;
    let mu = gauss_legendre_measure(args.quad_nodes as usize)?;
    let r = Reconstructor::new(&MomentSet::from_function_1d(runge, &mu, basis, n)?)?;
    let dms = MomentSet::from_derivative_1d(runge_prime, &mu, basis, n)?;

    let m = args.grid as usize;
    let xs = (0..m)
        .map(|i| -1.5 + 3.0 * i as f64 / (m - 1) as f64)
        .chain(args.extra_x.iter().copied());
    let mut csv = String::from(RUNGE_HEADER);
    csv.push('\n');
    for x in xs {
        let row = [
            x,
            runge(x),
            r.eval_ls(x),
            r.eval_rn(x),
            runge_prime(x),
            reconstruct_derivative_1d(&dms, Method::Ls, x)?,
            reconstruct_derivative_1d(&dms, Method::Rn, x)?,
            differentiate_reconstruction(&r, Method::Ls, x, DIFF_STEP),
            differentiate_reconstruction(&r, Method::Rn, x, DIFF_STEP),
        ];
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                csv.push(',');
            }
            write!(csv, "{v:.16e}").expect("writing to a String");
        }
        csv.push('\n');
    }
    write_file(&args.out, csv.as_bytes())
}

#[derive(Serialize)]
struct MethodReport {
    output: PathBuf,
    pre_clamp_min: f64,
    pre_clamp_max: f64,
    max_abs: f64,
    rmse: f64,
    /// `None` when the output reproduces the input exactly.
    psnr: Option<f64>,
}

#[derive(Serialize)]
struct ImageReport {
    input: PathBuf,
    width: usize,
    height: usize,
    basis: BasisArg,
    nx: usize,
    ny: usize,
    dim: usize,
    ls: Option<MethodReport>,
    rn: Option<MethodReport>,
    seconds: f64,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "image".into(), |s| s.to_string_lossy().into_owned())
}

fn cmd_image(args: &ImageArgs) -> Result<(), Failure> {
    let img = read_image(&args.input)?;
    let out_dir = args.out.clone().unwrap_or_else(|| parent_dir(&args.input));
    ensure_dir(&out_dir)?;
    let (nx, ny) = args.dims.resolve();
    let stem = stem(&args.input);

    let start = Instant::now();
    let ms = MomentSet::from_image(&img, args.dims.basis.kind().shifted(), nx, ny)?;
    let r = Reconstructor::new(&ms)?;
    let mut report = ImageReport {
        input: args.input.clone(),
        width: img.width(),
        height: img.height(),
        basis: args.dims.basis,
        nx,
        ny,
        dim: ms.dim(),
        ls: None,
        rn: None,
        seconds: 0.0,
    };
    for &method in args.method.methods() {
        let rec = r.reconstruct_image(img.width(), img.height(), method)?;
        let bytes = rec.to_image().to_bytes();
        // Metrics describe the file as written, after quantization.
        let out_img = GrayImage::from_bytes(img.width(), img.height(), &bytes)?;
        let metrics = image_metrics(&img, &out_img)?;
        let (tag, slot) = match method {
            Method::Ls => ("ls", &mut report.ls),
            Method::Rn => ("rn", &mut report.rn),
        };
        let output = out_dir.join(format!("{stem}.{tag}.pgm"));
        write_file(&output, &write_pgm(&out_img))?;
        println!(
            "{tag}: {} pre-clamp [{:.6}, {:.6}] rmse {:.6}",
            output.display(),
            rec.pre_clamp_min(),
            rec.pre_clamp_max(),
            metrics.rmse
        );
        *slot = Some(MethodReport {
            output,
            pre_clamp_min: rec.pre_clamp_min(),
            pre_clamp_max: rec.pre_clamp_max(),
            max_abs: metrics.max_abs,
            rmse: metrics.rmse,
            psnr: metrics.psnr.is_finite().then_some(metrics.psnr),
        });
    }
    report.seconds = start.elapsed().as_secs_f64();

    let path = out_dir.join(format!("{stem}.metrics.json"));
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&path, json.as_bytes())
}

#[derive(Serialize)]
struct Residuals {
    gram: f64,
    f: f64,
}

#[derive(Serialize)]
struct NaturalReport {
    basis: BasisArg,
    nx: usize,
    ny: usize,
    dim: usize,
    lambda: Vec<f64>,
    /// Row `m`, column `s`: coefficient of basis function `m` in state `s`.
    psi: Vec<Vec<f64>>,
    residuals: Residuals,
    spur_average: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bins: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<usize>>,
}

fn cmd_natural(args: &NaturalArgs) -> Result<(), Failure> {
    let img = read_image(&args.input)?;
    if let Some(out) = &args.out {
        ensure_dir(&parent_dir(out))?;
    }
    let (nx, ny) = args.dims.resolve();
    let ms = MomentSet::from_image(&img, args.dims.basis.kind().shifted(), nx, ny)?;
    let nb = natural_basis(&ms)?;
    let (gram, f) = nb.eig.residuals(&ms.f, &ms.g)?;
    let hist = args
        .bins
        .map(|b| lebesgue_measure(nb.values(), b as usize))
        .transpose()?;
    let report = NaturalReport {
        basis: args.dims.basis,
        nx,
        ny,
        dim: ms.dim(),
        lambda: nb.values().to_vec(),
        psi: nb.eig.vectors.to_rows(),
        residuals: Residuals { gram, f },
        spur_average: spur_average(&ms)?,
        bins: hist.as_ref().map(|h| h.bins.clone()),
        mu: hist.map(|h| h.mu),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => write_file(path, json.as_bytes()),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Runge(a) => cmd_runge(a),
        Command::Image(a) => cmd_image(a),
        Command::Natural(a) => cmd_natural(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Numeric(msg) => eprintln!("numerical error: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
