//! `distill`: validate code catalogues, render Bloch-ball slices, export
//! fidelity curves, bisect thresholds and trace single trajectories.
//!
//! Exit codes: 0 success, 2 invalid config or failed validation, 3 I/O
//! failure, 4 degenerate computation (every pixel hit a zero-probability step).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use distill_core::codes::Catalogue;
use distill_core::config::{ConfigError, RenderKind, RunConfig};
use distill_core::dynamics::{iterate, threshold_bisect, write_curve_csv, DynamicsError};
use distill_core::protocols::TwirlMode;
use distill_core::render::{sidecar_path, write_image, ImageFormat, RenderError};
use distill_core::states::{family_state, BlochVector, Family, ReferenceStateSet};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(String),
    #[error("I/O error on '{path}': {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("degenerate computation: {0}")]
    Degenerate(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(e) if e.is_io() => 3,
            CliError::Config(_) | CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        CliError::Config(ConfigError::Render(e))
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Parser, Debug)]
#[command(name = "distill", version, about = "Magic state distillation as a dynamical system on the Bloch ball")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (image or CSV).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every entry of a code catalogue.
    Validate {
        /// Catalogue file; defaults to the configured or built-in catalogue.
        #[arg(long)]
        catalogue: Option<PathBuf>,
    },
    /// Render a slice of the Bloch ball.
    Render {
        /// Defaults to the configured kind.
        kind: Option<KindArg>,
        #[command(flatten)]
        common: ProtocolArgs,
        /// Plane preset: z0, y0, x0 or diag.
        #[arg(long)]
        plane: Option<String>,
        /// Half side length of the slice.
        #[arg(long)]
        extent: Option<f64>,
        /// Square image size in pixels.
        #[arg(long)]
        size: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long)]
        format: Option<FormatArg>,
        /// Julia gray cap (default: 99th percentile of the frame).
        #[arg(long)]
        cap: Option<f64>,
    },
    /// Sweep a magic family and write `f,fprime,dfprime` CSV.
    Curve {
        #[command(flatten)]
        common: ProtocolArgs,
        /// Step counts; one CSV per value.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        m: Option<Vec<u32>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        f_lo: Option<f64>,
        #[arg(long)]
        f_hi: Option<f64>,
    },
    /// Bisect the distillation threshold of a magic family.
    Threshold {
        #[command(flatten)]
        common: ProtocolArgs,
        #[arg(long)]
        f_lo: Option<f64>,
        #[arg(long)]
        f_hi: Option<f64>,
        #[arg(long)]
        m_probe: Option<u32>,
        #[arg(long)]
        iters: Option<u32>,
    },
    /// Print the trajectory of one input state.
    Point {
        #[command(flatten)]
        common: ProtocolArgs,
        /// Bloch vector as three numbers.
        #[arg(num_args = 3, allow_negative_numbers = true, required_unless_present = "fidelity")]
        r: Option<Vec<f64>>,
        /// Start at the family state of this fidelity instead.
        #[arg(long, conflicts_with = "r")]
        fidelity: Option<f64>,
        #[arg(long)]
        m_max: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    #[arg(long)]
    protocol: Option<String>,
    /// none, every_step or final_only.
    #[arg(long)]
    twirl: Option<String>,
    /// Magic family, T or H.
    #[arg(long)]
    family: Option<String>,
    /// Code catalogue file.
    #[arg(long)]
    catalogue: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Fatou,
    Julia,
    Speed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Ppm,
    Png,
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    s.parse().map_err(CliError::Invalid)
}

impl ProtocolArgs {
    /// Applies overrides; returns the family requested on the command line.
    fn apply(&self, cfg: &mut RunConfig) -> Result<Option<Family>, CliError> {
        if let Some(name) = &self.protocol {
            cfg.protocol.name = name.clone();
        }
        if let Some(t) = &self.twirl {
            cfg.protocol.twirl = t.parse::<TwirlMode>().map_err(|e| CliError::Invalid(e.to_string()))?;
        }
        if let Some(path) = &self.catalogue {
            cfg.protocol.catalogue = Some(path.clone());
        }
        self.family.as_deref().map(parse_family).transpose()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    match cli.command {
        Command::Validate { catalogue } => cmd_validate(&cfg, catalogue.as_deref()),
        Command::Render { kind, common, plane, extent, size, m, m_max, format, cap } => {
            if let Some(kind) = kind {
                cfg.render.kind = match kind {
                    KindArg::Fatou => RenderKind::Fatou,
                    KindArg::Julia => RenderKind::Julia,
                    KindArg::Speed => RenderKind::Speed,
                };
            }
            if let Some(f) = common.apply(&mut cfg)? {
                cfg.protocol.family = Some(f);
            }
            if let Some(e) = extent {
                cfg.plane.extent = e;
            }
            if let Some(s) = size {
                cfg.plane.width = s;
                cfg.plane.height = s;
            }
            if let Some(name) = plane {
                cfg.plane.apply_preset(&name)?;
            }
            if let Some(m) = m {
                cfg.iteration.m = m;
            }
            if let Some(m) = m_max {
                cfg.iteration.m_max = m;
            }
            if let Some(c) = cap {
                cfg.render.julia_cap = Some(c);
            }
            cfg.render.format = match format {
                Some(FormatArg::Ppm) => ImageFormat::Ppm,
                Some(FormatArg::Png) => ImageFormat::Png,
                None => cfg.output.path.as_deref().and_then(ImageFormat::from_path).unwrap_or(cfg.render.format),
            };
            cmd_render(cfg, cli.workers)
        }
        Command::Curve { common, m, samples, f_lo, f_hi } => {
            if let Some(f) = common.apply(&mut cfg)? {
                cfg.curve.family = Some(f);
            }
            if let Some(m) = m {
                cfg.curve.m = m;
            }
            if let Some(s) = samples {
                cfg.curve.samples = s;
            }
            if let Some(v) = f_lo {
                cfg.curve.f_lo = v;
            }
            if let Some(v) = f_hi {
                cfg.curve.f_hi = v;
            }
            cmd_curve(&cfg)
        }
        Command::Threshold { common, f_lo, f_hi, m_probe, iters } => {
            if let Some(f) = common.apply(&mut cfg)? {
                cfg.threshold.family = Some(f);
            }
            if let Some(v) = f_lo {
                cfg.threshold.f_lo = v;
            }
            if let Some(v) = f_hi {
                cfg.threshold.f_hi = v;
            }
            if let Some(v) = m_probe {
                cfg.threshold.m_probe = v;
            }
            if let Some(v) = iters {
                cfg.threshold.iters = v;
            }
            cmd_threshold(&cfg)
        }
        Command::Point { common, r, fidelity, m_max } => {
            let family = common.apply(&mut cfg)?;
            if let Some(m) = m_max {
                cfg.iteration.m_max = m;
            }
            cmd_point(&cfg, r, fidelity, family)
        }
    }
}

fn cmd_validate(cfg: &RunConfig, catalogue: Option<&Path>) -> Result<(), CliError> {
    let cat = match catalogue.or(cfg.protocol.catalogue.as_deref()) {
        Some(path) => Catalogue::load(path).map_err(ConfigError::from)?,
        None => Catalogue::builtin(),
    };
    let mut failures = 0;
    let mut out = io::stdout().lock();
    for entry in &cat.entries {
        let problems = entry.validate();
        if problems.is_empty() {
            let _ = writeln!(out, "{}: ok", entry.name);
        } else {
            failures += 1;
            for p in &problems {
                let _ = writeln!(out, "{}: FAIL {p}", entry.name);
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Invalid(format!("{failures} of {} catalogue entries failed validation", cat.entries.len())));
    }
    Ok(())
}

fn cmd_render(mut cfg: RunConfig, workers: Option<usize>) -> Result<(), CliError> {
    cfg.validate()?;
    let plane = cfg.plane.to_plane()?;
    let out = cfg.output.path.clone().unwrap_or_else(|| {
        let kind = match cfg.render.kind {
            RenderKind::Fatou => "fatou",
            RenderKind::Julia => "julia",
            RenderKind::Speed => "speed",
        };
        PathBuf::from(format!("{}_{kind}.{}", cfg.protocol.name, cfg.render.format))
    });
    cfg.output.path = Some(out.clone());
    ensure_parent(&out)?;
    let frame = cfg.render_frame(workers)?;
    if frame.is_degenerate() {
        return Err(CliError::Degenerate(format!("all {} in-ball pixels had zero success probability", frame.inside())));
    }
    if frame.julia_cap.is_some() {
        cfg.render.julia_cap = frame.julia_cap;
    }
    write_image(&frame.image, &out, cfg.render.format).map_err(|e| match e {
        RenderError::Io(source) => CliError::Io { path: out.clone(), source },
        other => other.into(),
    })?;
    let meta = sidecar_path(&out);
    fs::write(&meta, cfg.to_toml()?).map_err(io_err(&meta))?;
    println!("wrote {} ({}x{}, {} outside, {} failed)", out.display(), plane.width(), plane.height(), frame.outside, frame.failed);
    Ok(())
}

fn cmd_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let curves = cfg.curves()?;
    let base = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from(format!("{}_curve.csv", cfg.protocol.name)));
    ensure_parent(&base)?;
    for (m, rows) in &curves {
        let path = if curves.len() == 1 { base.clone() } else { with_suffix(&base, &format!("_m{m}")) };
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        let mut w = io::BufWriter::new(file);
        write_curve_csv(&rows, &mut w).map_err(io_err(&path))?;
        w.flush().map_err(io_err(&path))?;
        println!("wrote {} (m = {m}, {} samples)", path.display(), rows.len());
    }
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(io_err(dir)),
        _ => Ok(()),
    }
}

/// `dir/name.ext` → `dir/name<suffix>.ext`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

fn cmd_threshold(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let protocol = cfg.protocol()?;
    let t = &cfg.threshold;
    let family = t.family.unwrap_or(protocol.family());
    let b = threshold_bisect(&protocol, family, t.f_lo, t.f_hi, t.m_probe, t.iters)?;
    let (lo, hi) = b.brackets.last().copied().unwrap_or((t.f_lo, t.f_hi));
    println!("protocol {} family {} threshold {:.10} bracket [{:.10}, {:.10}]", protocol.name(), family.name(), b.threshold, lo, hi);
    Ok(())
}

fn cmd_point(cfg: &RunConfig, r: Option<Vec<f64>>, fidelity: Option<f64>, family: Option<Family>) -> Result<(), CliError> {
    cfg.validate()?;
    let protocol = cfg.protocol()?;
    let r0 = match (r, fidelity) {
        (Some(v), _) => BlochVector::new(v[0], v[1], v[2]),
        (None, Some(f)) => family_state(family.unwrap_or(protocol.family()), f).map_err(|e| CliError::Invalid(e.to_string()))?,
        (None, None) => return Err(CliError::Invalid("need a Bloch vector or --fidelity".into())),
    };
    if !r0.is_physical() {
        return Err(CliError::Invalid(format!("input {r0} lies outside the unit ball (norm {})", r0.norm())));
    }
    let it = &cfg.iteration;
    let traj = iterate(&protocol, r0, it.m_max, it.conv_tol, &ReferenceStateSet::standard(), it.class_tol)?;
    let n = protocol.n_inputs() as u128;
    let mut out = io::stdout().lock();
    let mut resources: u128 = 1;
    for (m, (r, p)) in traj.points.iter().enumerate() {
        if m > 0 {
            resources = resources.saturating_mul(n);
        }
        let _ = writeln!(out, "{m:>3} {:+.12} {:+.12} {:+.12} p={:.6e} resources={resources}", r.x, r.y, r.z, p);
    }
    let _ = writeln!(out, "terminal {} after {} steps, resources {}", traj.terminal.label(), traj.m, traj.resources);
    Ok(())
}
