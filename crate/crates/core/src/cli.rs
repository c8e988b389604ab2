//! Command-line front end of the `hdom` binary.

use crate::domains::DomainSpec;
use crate::dual::dual_boundary;
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::separation::{auto_range, separates, GridResolution, LogPolarGrid, SeparationVerdict};
use crate::series::{
    contour_h_star_series, h_xi_coeffs, hadamard, lambda_op, torus_hadamard, weighted_hadamard, ContourSpec,
    TruncatedSeries2,
};
use crate::star::{h_star_shadow, star_shadow_with, CellState, GridMask, GridSpec, StarResult};
use crate::verification::{hstar_suite, union_suite, verify_contour_vs_series, Report};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Environment variable overriding the separation refinement budget.
pub const MAX_REFINE_ENV: &str = "HD_MAX_REFINE";

#[derive(Debug, Parser)]
#[command(name = "hdom", version, about = "Hadamard star products of Reinhardt domains in C^2")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the boundary of the dual complement in the moduli quadrant.
    Dual {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = crate::dual::DEFAULT_BOUNDARY_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether I_z^-1(D) separates 0 and infinity.
    Separates {
        #[arg(long)]
        domain: PathBuf,
        /// Point as "a+bi,c+di".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        smin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        smax: Option<f64>,
        #[arg(long, default_value_t = crate::separation::DEFAULT_CELLS)]
        ns: usize,
        #[arg(long, default_value_t = crate::separation::DEFAULT_CELLS)]
        ntheta: usize,
        /// Write the certificate polyline as CSV (re, im).
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Shadow of h_(1,1) * G.
    Hstar {
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Shadow of D * G.
    Star {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Truncated power series operations on coefficient CSV (a1, a2, re, im).
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
    /// Run a cross-validation suite and write a JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Random trials of the contour suite.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Exhaustion depth of the union suite.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
}

#[derive(Debug, Subcommand)]
enum SeriesOp {
    /// Coefficientwise product.
    Hadamard {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficientwise product with weights a!/(|a|+1)!.
    Weighted {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of h_xi up to a degree cap.
    Hxi {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// f + z1 df/dz1.
    Lambda {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// (f*g)(z) by quadrature on the torus of radius 1/rho.
    Torus {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 16)]
        nodes: usize,
    },
    /// (h_(1,1)*f)(z) by the contour integral; unit circle by default.
    Contour {
        #[arg(long)]
        f: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Circle center as "a+bi".
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        /// Closed polygon as CSV (re, im).
        #[arg(long, conflicts_with_all = ["center", "radius"])]
        polyline: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Hstar,
    Contour,
    Union,
    All,
}

/// Validated settings of one invocation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub grid_sizes: Vec<usize>,
    pub seed: Option<u64>,
    pub max_refinements: Option<u32>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let all: Vec<&PathBuf> = self.inputs.iter().chain(&self.outputs).collect();
        for (i, a) in all.iter().enumerate() {
            if self.outputs.contains(a) && all[..i].contains(a) {
                return Err(Error::InvalidArgument(format!(
                    "path {} is used more than once",
                    a.display()
                )));
            }
        }
        for &n in &self.grid_sizes {
            if !(16..=4096).contains(&n) || !n.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "grid size {n} must be a power of two between 16 and 4096"
                )));
            }
        }
        Ok(())
    }
}

/// Parse one complex number such as `1.5`, `-2i`, `0.3-1e-2i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex number".into()));
    }
    let v: Complex64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse complex number '{text}'")))?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Parse(format!("non-finite complex number '{text}'")));
    }
    Ok(v)
}

/// Parse a point `"a+bi,c+di"`.
pub fn parse_point(text: &str) -> Result<Point2> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected two comma-separated coordinates, got '{text}'")));
    }
    Ok(Point2::new(parse_complex(parts[0])?, parse_complex(parts[1])?))
}

fn max_refinements_override() -> Result<Option<u32>> {
    match std::env::var(MAX_REFINE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{MAX_REFINE_ENV}={v} is not a count"))),
        Err(_) => Ok(None),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::QuadratureFailure { .. } => 1,
        _ => 2,
    }
}

/// Run the CLI on `argv` (including the program name) and return the exit
/// code: 0 on success, 1 when undetermined or a quadrature or verification
/// failed, 2 on invalid input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // A global pool can only be installed once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    let max_refine = max_refinements_override()?;
    let config = config_for(&cmd, max_refine);
    config.validate()?;
    match cmd {
        Command::Dual { domain, samples, out } => {
            let d = DomainSpec::load(&domain)?;
            let pts = dual_boundary(&d, samples)?;
            let mut text = String::from("a,b\n");
            for (a, b) in &pts {
                let _ = writeln!(text, "{a},{b}");
            }
            emit(out.as_deref(), &text)?;
            println!("dual boundary: {} points", pts.len());
            Ok(0)
        }
        Command::Separates {
            domain,
            z,
            smin,
            smax,
            ns,
            ntheta,
            certificate,
        } => {
            let d = DomainSpec::load(&domain)?;
            let z = parse_point(&z)?;
            let range = match (smin, smax) {
                (Some(a), Some(b)) => (a, b),
                (a, b) => {
                    let auto = auto_range(&d, &z)?;
                    (a.unwrap_or(auto.0), b.unwrap_or(auto.1))
                }
            };
            let refine = max_refine.unwrap_or(crate::separation::DEFAULT_MAX_REFINEMENTS);
            let grid = LogPolarGrid::new(range.0, range.1, ns, ntheta, refine)?;
            let verdict = separates(&d, &z, &grid)?;
            let poly = match &verdict {
                SeparationVerdict::Separated { cycle } => Some(cycle),
                SeparationVerdict::NotSeparated { path } => Some(path),
                SeparationVerdict::Undetermined(_) => None,
            };
            if let (Some(path), Some(poly)) = (certificate.as_deref(), poly) {
                let mut text = String::from("re,im\n");
                for w in poly {
                    let _ = writeln!(text, "{},{}", w.re, w.im);
                }
                write_file(path, &text)?;
            }
            println!("{}", verdict.kind());
            Ok(if matches!(verdict, SeparationVerdict::Undetermined(_)) { 1 } else { 0 })
        }
        Command::Hstar { g, grid, out, svg } => {
            let g = DomainSpec::load(&g)?;
            let r = h_star_shadow(&g, &grid_spec(grid, max_refine))?;
            write_star(&r, &out, svg.as_deref())?;
            print_star("h*G", &r);
            Ok(0)
        }
        Command::Star { d, g, grid, out, svg } => {
            let d = DomainSpec::load(&d)?;
            let g = DomainSpec::load(&g)?;
            let spec = grid_spec(grid, max_refine);
            let hstar = h_star_shadow(&g, &spec)?;
            let r = star_shadow_with(&d, &hstar, &spec)?;
            write_star(&r, &out, svg.as_deref())?;
            print_star("D*G", &r);
            Ok(0)
        }
        Command::Series { op } => run_series(op),
        Command::Verify {
            suite,
            seed,
            report,
            grid,
            trials,
            n_max,
        } => {
            let spec = grid_spec(grid, max_refine);
            let reports: Vec<Report> = match suite {
                Suite::Hstar => vec![hstar_suite(&spec)?],
                Suite::Contour => vec![verify_contour_vs_series(trials, seed)?],
                Suite::Union => vec![union_suite(n_max, &spec)?],
                Suite::All => vec![
                    hstar_suite(&spec)?,
                    verify_contour_vs_series(trials, seed)?,
                    union_suite(n_max, &spec)?,
                ],
            };
            let name = format!("{suite:?}").to_lowercase();
            let merged = Report::merge(name, Some(seed), reports);
            let mut text = merged.to_json();
            text.push('\n');
            emit(report.as_deref(), &text)?;
            let s = &merged.summary;
            println!(
                "{}: {} cases, {} passed, {} failed ({} of {} controls failed as designed)",
                merged.suite, s.total, s.passed, s.failed, s.controls_failed, s.controls
            );
            Ok(if merged.ok() { 0 } else { 1 })
        }
    }
}

fn config_for(cmd: &Command, max_refinements: Option<u32>) -> RunConfig {
    let mut c = RunConfig {
        max_refinements,
        ..RunConfig::default()
    };
    match cmd {
        Command::Dual { domain, out, .. } => {
            c.subcommand = "dual".into();
            c.inputs.push(domain.clone());
            c.outputs.extend(out.clone());
        }
        Command::Separates {
            domain,
            ns,
            ntheta,
            certificate,
            ..
        } => {
            c.subcommand = "separates".into();
            c.inputs.push(domain.clone());
            c.outputs.extend(certificate.clone());
            c.grid_sizes = vec![*ns, *ntheta];
        }
        Command::Hstar { g, grid, out, svg } => {
            c.subcommand = "hstar".into();
            c.inputs.push(g.clone());
            c.outputs.push(out.clone());
            c.outputs.extend(svg.clone());
            c.grid_sizes.push(*grid);
        }
        Command::Star { d, g, grid, out, svg } => {
            c.subcommand = "star".into();
            // D and G may be the same file.
            c.inputs.push(d.clone());
            if g != d {
                c.inputs.push(g.clone());
            }
            c.outputs.push(out.clone());
            c.outputs.extend(svg.clone());
            c.grid_sizes.push(*grid);
        }
        Command::Series { op } => {
            c.subcommand = "series".into();
            match op {
                SeriesOp::Hadamard { f, g, out } | SeriesOp::Weighted { f, g, out } => {
                    c.inputs.push(f.clone());
                    if g != f {
                        c.inputs.push(g.clone());
                    }
                    c.outputs.extend(out.clone());
                }
                SeriesOp::Hxi { out, .. } => c.outputs.extend(out.clone()),
                SeriesOp::Lambda { f, out } => {
                    c.inputs.push(f.clone());
                    c.outputs.extend(out.clone());
                }
                SeriesOp::Torus { f, g, .. } => {
                    c.inputs.push(f.clone());
                    if g != f {
                        c.inputs.push(g.clone());
                    }
                }
                SeriesOp::Contour { f, polyline, .. } => {
                    c.inputs.push(f.clone());
                    c.inputs.extend(polyline.clone());
                }
            }
        }
        Command::Verify { seed, report, grid, .. } => {
            c.subcommand = "verify".into();
            c.seed = Some(*seed);
            c.outputs.extend(report.clone());
            c.grid_sizes.push(*grid);
        }
    }
    c
}

fn grid_spec(cells: usize, max_refine: Option<u32>) -> GridSpec {
    let mut spec = GridSpec::with_cells(cells);
    if let Some(r) = max_refine {
        spec.separation = GridResolution {
            max_refinements: r,
            ..spec.separation
        };
    }
    spec
}

fn run_series(op: SeriesOp) -> Result<i32> {
    match op {
        SeriesOp::Hadamard { f, g, out } => {
            let s = hadamard(&read_series(&f)?, &read_series(&g)?);
            write_series(&s, out.as_deref())
        }
        SeriesOp::Weighted { f, g, out } => {
            let s = weighted_hadamard(&read_series(&f)?, &read_series(&g)?);
            write_series(&s, out.as_deref())
        }
        SeriesOp::Hxi { xi, cap, out } => write_series(&h_xi_coeffs(&parse_point(&xi)?, cap)?, out.as_deref()),
        SeriesOp::Lambda { f, out } => write_series(&lambda_op(&read_series(&f)?), out.as_deref()),
        SeriesOp::Torus { f, g, rho, z, nodes } => {
            let (f, g) = (read_series(&f)?, read_series(&g)?);
            let q = torus_hadamard(|w| f.eval(w), |w| g.eval(w), rho, &parse_point(&z)?, nodes)?;
            println!("{},{} (nodes {}, change {:e})", q.value.re, q.value.im, q.nodes, q.error_estimate);
            Ok(0)
        }
        SeriesOp::Contour {
            f,
            z,
            center,
            radius,
            polyline,
            nodes,
        } => {
            let f = read_series(&f)?;
            let mut gamma = match (polyline, center, radius) {
                (Some(p), _, _) => ContourSpec::polyline(read_vertices(&p)?),
                (None, None, None) => ContourSpec::unit_circle(),
                (None, c, r) => ContourSpec::circle(
                    c.as_deref().map(parse_complex).transpose()?.unwrap_or_default(),
                    r.unwrap_or(1.0),
                ),
            };
            if let Some(n) = nodes {
                gamma.nodes = n;
            }
            let q = contour_h_star_series(&f, &parse_point(&z)?, &gamma)?;
            println!("{},{} (nodes {}, change {:e})", q.value.re, q.value.im, q.nodes, q.error_estimate);
            Ok(0)
        }
    }
}

fn read_series(path: &Path) -> Result<TruncatedSeries2> {
    TruncatedSeries2::read_csv(File::open(path)?, None)
}

fn write_series(s: &TruncatedSeries2, out: Option<&Path>) -> Result<i32> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    emit(out, &String::from_utf8_lossy(&buf))?;
    if out.is_some() {
        println!("series: cap {}", s.cap());
    }
    Ok(0)
}

fn read_vertices(path: &Path) -> Result<Vec<Complex64>> {
    #[derive(serde::Deserialize)]
    struct Vertex {
        re: f64,
        im: f64,
    }
    let mut rd = csv::Reader::from_reader(File::open(path)?);
    rd.deserialize()
        .map(|r| {
            r.map(|v: Vertex| Complex64::new(v.re, v.im))
                .map_err(|e| Error::Parse(e.to_string()))
        })
        .collect()
}

/// Write to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Cell-center CSV `x,y,state`, bottom row first.
pub fn mask_csv(mask: &GridMask) -> String {
    let mut text = String::from("x,y,state\n");
    for (i, j, s) in mask.iter() {
        let (x, y) = mask.center(i, j);
        let _ = writeln!(text, "{x},{y},{s}");
    }
    text
}

/// SVG plot of a mask: IN filled, MIXED hatched.
pub fn mask_svg(mask: &GridMask) -> String {
    const SIZE: f64 = 512.0;
    let (nx, ny) = mask.dims();
    let (cw, ch) = (SIZE / nx as f64, SIZE / ny as f64);
    let (wx, wy) = mask.window();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"##
    );
    let _ = writeln!(
        s,
        r##"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="#d95f02" stroke-width="2"/></pattern></defs>"##
    );
    let _ = writeln!(s, r##"<title>window [0, {wx}] x [0, {wy}]</title>"##);
    let _ = writeln!(s, r##"<rect width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>"##);
    for j in 0..ny {
        let y = SIZE - (j + 1) as f64 * ch;
        let mut i = 0;
        while i < nx {
            let state = mask.state(i, j);
            let start = i;
            while i < nx && mask.state(i, j) == state {
                i += 1;
            }
            let fill = match state {
                CellState::In => "#1b9e77",
                CellState::Mixed => "url(#hatch)",
                CellState::Out => continue,
            };
            let _ = writeln!(
                s,
                r##"<rect class="{state}" x="{}" y="{y}" width="{}" height="{ch}" fill="{fill}"/>"##,
                start as f64 * cw,
                (i - start) as f64 * cw
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn write_star(r: &StarResult, out: &Path, svg: Option<&Path>) -> Result<()> {
    write_file(out, &mask_csv(&r.mask))?;
    if let Some(p) = svg {
        write_file(p, &mask_svg(&r.mask))?;
    }
    Ok(())
}

fn print_star(label: &str, r: &StarResult) {
    let (x, y) = r.window();
    println!(
        "{label}: window [0, {x}] x [0, {y}], {} IN / {} MIXED / {} OUT cells, xmax {}, ymax {}",
        r.mask.count(CellState::In),
        r.mask.count(CellState::Mixed),
        r.mask.count(CellState::Out),
        r.shadow.xmax().as_f64(),
        r.shadow.ymax().as_f64(),
    );
    for w in &r.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("0.3-1e-2i").unwrap(), Complex64::new(0.3, -0.01));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        let p = parse_point("0.6, 0.5+0.1i").unwrap();
        assert_eq!(p, Point2::new(Complex64::new(0.6, 0.0), Complex64::new(0.5, 0.1)));
        assert!(parse_point("1,2,3").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig {
            inputs: vec!["a.json".into()],
            outputs: vec!["b.csv".into(), "c.svg".into()],
            grid_sizes: vec![256],
            ..RunConfig::default()
        };
        assert!(c.validate().is_ok());
        c.outputs.push("a.json".into());
        assert!(c.validate().is_err());
        c.outputs.pop();
        c.grid_sizes = vec![100];
        assert!(c.validate().is_err());
        c.grid_sizes = vec![8192];
        assert!(c.validate().is_err());
    }
}
