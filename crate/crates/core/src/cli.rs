//! Command-line front end. Every subcommand writes CSV (or SVG for `plot`)
//! to `--out` or stdout, and a JSON run manifest next to `--out`.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::averaging::sandwich::{required_radius, sandwich_check};
use crate::counting::{count_ellipse, count_sector, fit_growth, scan_set, ResidualRow, SectorSpec};
use crate::error::{Error, Result};
use crate::exponents::{ExponentLedger, Variant};
use crate::planar::BallIndicator;
use crate::saddle::{self, filter_configuration, ConfigurationFilter, FilterKind};
use crate::sampling::{integrability_probe, mc_siegel_veech};
use crate::surface::{GroupElement, SurfaceSpec, TranslationSurface};

#[derive(Debug, Parser, Serialize)]
#[command(name = "flatcount", version, about = "Saddle connection counting on translation surfaces")]
pub struct Cli {
    /// Seed for Monte-Carlo subcommands.
    #[arg(long, global = true, env = "FLATCOUNT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run manifest path; defaults to `<out>.manifest.json` when `--out` is set.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Torus,
    LOrigami,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceArgs {
    /// Surface spec JSON file.
    #[arg(long, conflicts_with = "builtin")]
    pub surface: Option<PathBuf>,
    /// Built-in surface.
    #[arg(long)]
    pub builtin: Option<Builtin>,
}

impl SurfaceArgs {
    fn load(&self) -> Result<TranslationSurface> {
        match (&self.surface, self.builtin) {
            (Some(p), _) => TranslationSurface::from_spec(&SurfaceSpec::from_path(p)?),
            (None, Some(Builtin::Torus)) => Ok(TranslationSurface::unit_torus()),
            (None, Some(Builtin::LOrigami)) => Ok(TranslationSurface::l_origami()),
            (None, None) => Err(Error::InvalidArgument("one of --surface or --builtin is required".into())),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SectorArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi1: f64,
    #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
    pub phi2: f64,
}

impl SectorArgs {
    fn sector(&self) -> Result<SectorSpec> {
        SectorSpec::new(self.phi1, self.phi2)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[arg(long)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Geometric instead of linear spacing.
    #[arg(long)]
    pub log: bool,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        linear_or_log(self.tmin, self.tmax, self.steps, self.log)
    }
}

fn linear_or_log(lo: f64, hi: f64, steps: usize, log: bool) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || steps == 0 {
        return Err(Error::InvalidArgument(format!("bad grid {lo}..{hi} with {steps} steps")));
    }
    if log && !(lo > 0.0) {
        return Err(Error::InvalidArgument("log grid needs a positive lower end".into()));
    }
    if steps == 1 {
        return Ok(vec![hi]);
    }
    Ok((0..steps)
        .map(|i| {
            let u = i as f64 / (steps - 1) as f64;
            if i == steps - 1 {
                hi
            } else if log {
                lo * (hi / lo).powf(u)
            } else {
                lo + (hi - lo) * u
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterArg {
    All,
    Loop,
    Pair,
    Cylinders,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a surface and print its invariants.
    Validate {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// List holonomies up to a radius.
    Enumerate {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// First singularity for `loop` and `pair`.
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Second singularity for `pair`.
        #[arg(long, default_value_t = 1)]
        end: usize,
        /// Collapse equal holonomies.
        #[arg(long)]
        distinct: bool,
    },
    /// Count holonomies of norm at most T in a sector, optionally after g.
    Count {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(short = 'T', long = "radius")]
        t: f64,
        #[command(flatten)]
        sector: SectorArgs,
        /// Matrix entries `a,b,c,d` of g.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        g: Option<Vec<f64>>,
    },
    /// Sector counts over a T grid, with the quadratic fit when it applies.
    Scan {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sector: SectorArgs,
    },
    /// Fit a scan CSV; prints the fit as JSON and writes residuals.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        sector: SectorArgs,
    },
    /// Triangle sandwich over a grid of t.
    Sandwich {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[command(flatten)]
        sector: SectorArgs,
    },
    /// Monte-Carlo Siegel–Veech constant of the torus locus for a ball.
    Svconst {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Circle averages of the systole to the power −α₂ along t.
    Integrability {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1.5)]
        alpha2: f64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 17)]
        steps: usize,
        #[arg(long, default_value_t = 1024)]
        n_quad: usize,
    },
    /// Exponent ledger for a given spectral gap.
    Exponents {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        uniform: bool,
        #[arg(long, default_value_t = 1.01)]
        alpha1: f64,
        #[arg(long, default_value_t = 1.99)]
        alpha2: f64,
    },
    /// Static SVG chart of columns of a CSV file.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        /// One or more y columns.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        #[arg(long)]
        log_x: bool,
        #[arg(long)]
        log_y: bool,
        #[arg(long, default_value = "")]
        title: String,
    },
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    threads: Option<usize>,
    command: &'a Command,
}

#[derive(Serialize)]
struct HolonomyRow {
    norm: f64,
    x: f64,
    y: f64,
    start: usize,
    end: usize,
    separatrix: usize,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ScanRow {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "N")]
    n: usize,
    predicted: Option<f64>,
    residual: Option<f64>,
}

#[derive(Serialize)]
struct IntegrabilityCsvRow {
    t: f64,
    value: f64,
    running_sup: f64,
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn group_from(entries: &[f64]) -> Result<GroupElement> {
    match entries {
        [a, b, c, d] => GroupElement::new(*a, *b, *c, *d),
        _ => Err(Error::InvalidArgument("g needs four entries a,b,c,d".into())),
    }
}

fn ledger_text(l: &ExponentLedger) -> String {
    let variant = match l.variant {
        Variant::Sector => "sector",
        Variant::Uniform => "uniform",
    };
    format!(
        "variant = {variant}\nlambda = {}\nalpha1 = {}\nalpha2 = {}\nbeta = {}\neta = {}\neta1 = {}\nsigma = {}\n\
         kappa_sigma = {}\nkappa_step3 = {}\nkappa = {}\nsummable = {}\n",
        l.lambda, l.alpha1, l.alpha2, l.beta, l.eta, l.eta1, l.sigma, l.kappa_sigma, l.kappa_step3, l.kappa, l.summable
    )
}

fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| Error::InvalidArgument(format!("column {n} not in {}", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for rec in rdr.records() {
        let rec = rec?;
        for (k, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).unwrap_or("");
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad number {cell:?}: {e}")))?
            };
            cols[k].push(v);
        }
    }
    Ok(cols)
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate { surface } => {
            let s = surface.load()?;
            let cones: Vec<usize> = s.singularities().iter().map(|x| x.cone_angle_multiple).collect();
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "area": s.area(),
                "genus": s.genus(),
                "cone_angle_multiples": cones,
                "square_tiled": s.is_square_tiled(),
                "fingerprint": format!("{:016x}", s.fingerprint()),
            }))?;
            emit(out, format!("{text}\n").as_bytes())?;
        }
        Command::Enumerate {
            surface,
            radius,
            filter,
            start,
            end,
            distinct,
        } => {
            let s = surface.load()?;
            let kind = match filter {
                FilterArg::All => FilterKind::All,
                FilterArg::Loop => FilterKind::Loop(*start),
                FilterArg::Pair => FilterKind::Pair(*start, *end),
                FilterArg::Cylinders => FilterKind::Cylinders,
            };
            let mut cfg = ConfigurationFilter::new(kind);
            if *distinct {
                cfg = cfg.without_multiplicity();
            }
            let h = filter_configuration(&saddle::enumerate(&s, *radius)?, &cfg)?;
            let mult = h.multiplicities();
            let rows: Vec<HolonomyRow> = h
                .elements()
                .iter()
                .zip(mult)
                .map(|(e, m)| HolonomyRow {
                    norm: e.holonomy.norm(),
                    // + 0.0 turns -0.0 into 0.0
                    x: e.holonomy.x + 0.0,
                    y: e.holonomy.y + 0.0,
                    start: e.start,
                    end: e.end,
                    separatrix: e.separatrix,
                    multiplicity: m,
                })
                .collect();
            emit(out, &csv_bytes(&rows)?)?;
        }
        Command::Count { surface, t, sector, g } => {
            let s = surface.load()?;
            let sec = sector.sector()?;
            let n = match g {
                Some(g) => {
                    let g = group_from(g)?;
                    let h = saddle::enumerate(&s, t * g.operator_norm() * (1.0 + 1e-9))?;
                    count_ellipse(&h, *t, &g, &sec)?
                }
                None => count_sector(&saddle::enumerate(&s, *t)?, *t, &sec)?,
            };
            emit(out, format!("{n}\n").as_bytes())?;
        }
        Command::Scan { surface, grid, sector } => {
            let s = surface.load()?;
            let sec = sector.sector()?;
            let grid = grid.grid()?;
            let h = saddle::enumerate(&s, *grid.last().unwrap())?;
            let counts = scan_set(&h, &grid, &sec)?;
            let series: Vec<(f64, f64)> = counts.iter().map(|&(t, n)| (t, n as f64)).collect();
            let fitted: Option<Vec<ResidualRow>> = fit_growth(&series, &sec).ok().map(|f| f.residuals);
            let rows: Vec<ScanRow> = counts
                .iter()
                .enumerate()
                .map(|(i, &(t, n))| ScanRow {
                    t,
                    n,
                    predicted: fitted.as_ref().map(|r| r[i].predicted),
                    residual: fitted.as_ref().map(|r| r[i].residual),
                })
                .collect();
            emit(out, &csv_bytes(&rows)?)?;
        }
        Command::Fit { input, sector } => {
            let cols = read_columns(input, &["T", "N"])?;
            let series: Vec<(f64, f64)> = cols[0].iter().copied().zip(cols[1].iter().copied()).collect();
            let fit = fit_growth(&series, &sector.sector()?)?;
            let summary = serde_json::json!({
                "c_hat": fit.c_hat,
                "c_hat_times_pi": fit.c_hat * std::f64::consts::PI,
                "error_exponent": fit.error_exponent,
                "model": fit.model,
                "tail_start": fit.tail_start,
            });
            match out {
                Some(p) => {
                    std::fs::write(p, csv_bytes(&fit.residuals)?)?;
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
                None => println!("{}", serde_json::to_string_pretty(&summary)?),
            }
        }
        Command::Sandwich {
            surface,
            theta,
            tmin,
            tmax,
            steps,
            sector,
        } => {
            let s = surface.load()?;
            let sec = sector.sector()?;
            let grid = linear_or_log(*tmin, *tmax, *steps, false)?;
            let h = saddle::enumerate(&s, required_radius(*tmax, *theta))?;
            let rows: Vec<_> = grid
                .iter()
                .map(|&t| sandwich_check(&h, t, *theta, &sec))
                .collect::<Result<_>>()?;
            emit(out, &csv_bytes(&rows)?)?;
        }
        Command::Svconst { n, radius } => {
            let r = mc_siegel_veech(&BallIndicator { radius: *radius }, *n, cli.seed)?;
            emit(out, &csv_bytes(&[r])?)?;
        }
        Command::Integrability {
            surface,
            alpha2,
            tmin,
            tmax,
            steps,
            n_quad,
        } => {
            let s = surface.load()?;
            let grid = linear_or_log(*tmin, *tmax, *steps, false)?;
            let rows: Vec<IntegrabilityCsvRow> = integrability_probe(*alpha2, &grid, &s, *n_quad)?
                .into_iter()
                .map(|r| IntegrabilityCsvRow {
                    t: r.t,
                    value: r.value,
                    running_sup: r.running_sup,
                })
                .collect();
            emit(out, &csv_bytes(&rows)?)?;
        }
        Command::Exponents {
            lambda,
            uniform,
            alpha1,
            alpha2,
        } => {
            let v = if *uniform { Variant::Uniform } else { Variant::Sector };
            let l = ExponentLedger::new(v, *lambda, *alpha1, *alpha2)?;
            emit(out, ledger_text(&l).as_bytes())?;
        }
        Command::Plot {
            input,
            x,
            y,
            log_x,
            log_y,
            title,
        } => {
            let mut names = vec![x.as_str()];
            names.extend(y.iter().map(String::as_str));
            let cols = read_columns(input, &names)?;
            let svg = crate::plot::render(&cols[0], &cols[1..], y, *log_x, *log_y, title, x);
            emit(out, svg.as_bytes())?;
        }
    }
    let manifest_path = cli
        .manifest
        .clone()
        .or_else(|| cli.out.as_ref().map(|p| PathBuf::from(format!("{}.manifest.json", p.display()))));
    if let Some(p) = manifest_path {
        let m = Manifest {
            tool: "flatcount",
            version: env!("CARGO_PKG_VERSION"),
            seed: cli.seed,
            threads: cli.threads,
            command: &cli.command,
        };
        std::fs::write(p, serde_json::to_string_pretty(&m)? + "\n")?;
    }
    Ok(())
}

/// Exit status for an error: 2 for bad input, 3 for failed computations.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        2
    } else {
        3
    }
}

/// One-line JSON error record.
pub fn error_record(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}
