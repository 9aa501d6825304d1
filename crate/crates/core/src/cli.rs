//! The `meshplace` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::criteria::{Criterion, CriterionError};
use crate::io::{read_mesh, write_mesh, IoError, PatchFixture};
use crate::mesh::{
    laplacian_smooth, optimal_placement, quality_report, sweep, validate, LaplacianConfig, Mesh, MeshError,
    SmoothConfig,
};
use crate::qcp::{grid_oracle_with, OracleOptions, SolveStatus};
use crate::special::nonconvex_grid_place;

#[derive(Debug, Parser)]
#[command(name = "meshplace", version, about = "Optimal free-vertex placement for mesh smoothing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct MeshArgs {
    /// Vertex file (.node)
    #[arg(long)]
    node: PathBuf,
    /// Element file (.ele)
    #[arg(long)]
    ele: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smooth every movable vertex and write the result.
    Smooth {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Comma-separated NAME[:WEIGHT] list
        #[arg(long)]
        criterion: String,
        #[arg(long, default_value_t = 5)]
        passes: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output prefix; writes PREFIX.node, PREFIX.ele and PREFIX.stats.json
        #[arg(long)]
        out: PathBuf,
        /// Guarded Laplacian smoothing instead of optimal placement
        #[arg(long)]
        laplacian: bool,
        /// Plain Laplacian smoothing, moves accepted even if quality drops
        #[arg(long, conflicts_with = "laplacian")]
        unguarded_laplacian: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-criterion element quality summary.
    Quality {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long)]
        criterion: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Optimal placement for a single patch fixture.
    Place {
        #[arg(long)]
        patch: PathBuf,
        #[arg(long)]
        criterion: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Grid search over a patch fixture, for cross-checking `place`.
    Oracle {
        #[arg(long)]
        patch: PathBuf,
        #[arg(long)]
        criterion: String,
        #[arg(long, default_value_t = 6)]
        levels: usize,
    },
    /// Check orientation, quad convexity and star closure.
    Validate {
        #[command(flatten)]
        mesh: MeshArgs,
    },
}

enum Failure {
    Data(String),
    Usage(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Mesh(m) => m.into(),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<MeshError> for Failure {
    fn from(e: MeshError) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

impl From<CriterionError> for Failure {
    fn from(e: CriterionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::from(IoError::Io { path: path.display().to_string(), source: e }))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_mesh(m: &MeshArgs) -> Result<Mesh, Failure> {
    Ok(read_mesh(&m.node, &m.ele)?)
}

#[derive(Serialize)]
struct PlaceOutput<'a> {
    criteria: &'a str,
    point: crate::geometry::Point,
    objective: f64,
    method: crate::mesh::PlacementMethod,
    status: SolveStatus,
    iterations: usize,
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    criteria: &'a str,
    levels: usize,
    resolution: usize,
    point: crate::geometry::Point,
    objective: f64,
    status: SolveStatus,
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut emit = |text: String| {
        out.write_all(text.as_bytes()).map_err(|e| Failure::Data(format!("writing output: {e}")))
    };
    match cmd {
        Command::Smooth { mesh, criterion, passes, tol, out: prefix, laplacian, unguarded_laplacian, seed } => {
            let criteria = Criterion::parse_list(&criterion)?;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
            }
            let mut m = load_mesh(&mesh)?;
            let stats = if laplacian || unguarded_laplacian {
                let config = LaplacianConfig { passes, guarded: !unguarded_laplacian, criteria };
                laplacian_smooth(&mut m, &config)?
            } else {
                let config = SmoothConfig { passes, tol, seed, ..SmoothConfig::new(criteria) };
                sweep(&mut m, &config)?
            };
            write_mesh(&m, &with_suffix(&prefix, ".node"), &with_suffix(&prefix, ".ele"))?;
            let json = to_json(&stats);
            write_file(&with_suffix(&prefix, ".stats.json"), &json)?;
            emit(json)?;
            Ok(0)
        }
        Command::Quality { mesh, criterion, format } => {
            let criteria = Criterion::parse_list(&criterion)?;
            let m = load_mesh(&mesh)?;
            let report = quality_report(&m, &criteria);
            emit(match format {
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            })?;
            Ok(0)
        }
        Command::Place { patch, criterion, tol } => {
            let criteria = Criterion::parse_list(&criterion)?;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
            }
            let p = PatchFixture::load(&patch)?.to_patch()?;
            let r = optimal_placement(&p, &criteria, tol, 500)?;
            emit(to_json(&PlaceOutput {
                criteria: &criterion,
                point: r.point,
                objective: r.objective,
                method: r.method,
                status: r.status,
                iterations: r.iterations,
            }))?;
            Ok(0)
        }
        Command::Oracle { patch, criterion, levels } => {
            let criteria = Criterion::parse_list(&criterion)?;
            let p = PatchFixture::load(&patch)?.to_patch()?;
            let opts = OracleOptions { levels, ..OracleOptions::default() };
            let r = if criteria.iter().all(|c| c.kind.is_quasiconvex()) {
                grid_oracle_with(&p.program(&criteria)?, &opts).map_err(MeshError::from)?
            } else {
                p.terms(&criteria)?;
                nonconvex_grid_place(&p, &criteria, &opts).map_err(MeshError::from)?
            };
            emit(to_json(&OracleOutput {
                criteria: &criterion,
                levels,
                resolution: opts.resolution,
                point: r.optimum.x,
                objective: r.optimum.t,
                status: r.status,
            }))?;
            Ok(0)
        }
        Command::Validate { mesh } => {
            let m = load_mesh(&mesh)?;
            let report = validate(&m);
            emit(to_json(&report))?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
    }
}

/// Run the command line `args` (program name first). Results go to `out`,
/// diagnostics to `err`. Returns the exit code: 0 on success, 1 on parse or
/// validation failure, 2 on usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
    }
}
