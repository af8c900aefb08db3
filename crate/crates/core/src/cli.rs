//! Command-line front end. Every command produces a [`Table`] that is written
//! as CSV (17 significant digits, `# key=value` metadata lines, LF endings) or
//! as a single JSON object.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::analytic::{self, SectorAlpha};
use crate::entanglement::{self, PurityStats};
use crate::error::Error;
use crate::oracle::{self, jw, sectors, BasisMap, DenseOperator};
use crate::statevector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Largest ring accepted by `verify`.
pub const MAX_VERIFY_SITES: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "xxring", version, about = "Exact finite-size periodic XX ring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest level of every fermion sector along a field grid.
    Spectrum {
        #[command(flatten)]
        ring: Rings,
        #[command(flatten)]
        field: Field,
        /// Add the one-fermion lines, one per momentum k.
        #[arg(long)]
        single: bool,
        /// Add cos(2 pi (alpha + k) / N) for both offsets.
        #[arg(long)]
        modes: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Level-crossing fields g_c(n), n = 0..=N.
    CriticalPoints {
        #[command(flatten)]
        ring: Rings,
        #[command(flatten)]
        io: Io,
    },
    /// Ground energy, envelope and infinite-ring energy per site.
    Envelope {
        #[command(flatten)]
        ring: Rings,
        #[command(flatten)]
        field: Field,
        /// Emit chi_N and the relative envelope error for every ring size
        /// 3..=N instead of the field table.
        #[arg(long)]
        finite_size: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Amplitudes of the analytic ground state as (index, re, im).
    GroundState {
        #[command(flatten)]
        ring: Ring,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Mean and spread of the balanced-bipartition purity.
    Entanglement {
        #[command(flatten)]
        ring: Rings,
        #[command(flatten)]
        field: Field,
        /// One row per bipartition with its mask and purity.
        #[arg(long)]
        detail: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Cross-check the closed forms against the dense oracle.
    Verify {
        #[command(flatten)]
        ring: Ring,
        #[command(flatten)]
        field: Field,
        /// Flip the sign of the yy bonds in the oracle Hamiltonian (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Debug, Args)]
pub struct Ring {
    /// Number of sites N.
    #[arg(long)]
    pub sites: usize,
}

#[derive(Debug, Args)]
pub struct Rings {
    /// Number of sites N, or a comma-separated list of ring sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sites: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct Field {
    /// A single field value instead of a grid.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["g_min", "g_max", "steps"])]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.5)]
    pub g_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.5)]
    pub g_max: f64,
    /// Grid points including both ends.
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
}

impl Field {
    fn points(&self) -> Result<Vec<f64>, CliError> {
        if let Some(g) = self.g {
            if !g.is_finite() {
                return Err(CliError::Usage(format!("--g must be finite, got {g}")));
            }
            return Ok(vec![g]);
        }
        if !(self.g_min.is_finite() && self.g_max.is_finite()) || self.g_min >= self.g_max {
            return Err(CliError::Usage(format!(
                "need finite --g-min < --g-max, got {} and {}",
                self.g_min, self.g_max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!(
                "--steps must be at least 2, got {}",
                self.steps
            )));
        }
        Ok(entanglement::grid(self.g_min, self.g_max, self.steps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Io {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(Error::SizeLimit { .. }) | CliError::Io(_) => EXIT_LIMIT,
            CliError::Lib(
                Error::InvalidChain(_)
                | Error::DegenerateAtCrossing { .. }
                | Error::SingularPoint { .. },
            ) => EXIT_USAGE,
            CliError::Lib(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Float(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Float(_) | Cell::Empty => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub sites: Vec<usize>,
    pub metadata: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Set by `verify` only.
    pub passed: Option<bool>,
}

impl Table {
    fn new(command: &'static str, sites: usize, columns: &[&'static str]) -> Self {
        Table {
            command,
            sites: vec![sites],
            metadata: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            passed: None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command={}", self.command);
        let sites: Vec<String> = self.sites.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "# sites={}", sites.join(","));
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={}", v.csv());
        }
        if let Some(p) = self.passed {
            let _ = writeln!(out, "# passed={p}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}

struct Metadata<'a>(&'a [(String, Cell)]);

impl Serialize for Metadata<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("command", self.command)?;
        m.serialize_entry("sites", &self.sites)?;
        m.serialize_entry("metadata", &Metadata(&self.metadata))?;
        m.serialize_entry("columns", &self.columns)?;
        m.serialize_entry("rows", &self.rows)?;
        if let Some(p) = self.passed {
            m.serialize_entry("passed", &p)?;
        }
        m.end()
    }
}

fn meta(key: &str, value: Cell) -> (String, Cell) {
    (key.to_owned(), value)
}

/// Runs `build` for every ring size and stacks the results under a leading
/// `sites` column. Metadata equal across sizes is kept once; otherwise each
/// key gets a `_<N>` suffix.
fn per_ring(
    command: &'static str,
    sites: &[usize],
    build: impl Fn(usize) -> Result<Table, CliError> + Sync,
) -> Result<Table, CliError> {
    let mut seen = sites.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != sites.len() {
        return Err(CliError::Usage("--sites lists a ring size twice".into()));
    }
    let parts: Vec<Table> = sites
        .par_iter()
        .map(|&n| build(n))
        .collect::<Result<_, _>>()?;
    let mut columns = vec!["sites"];
    columns.extend(&parts[0].columns);
    let mut out = Table {
        command,
        sites: sites.to_vec(),
        metadata: Vec::new(),
        columns,
        rows: Vec::new(),
        passed: None,
    };
    for (i, (key, value)) in parts[0].metadata.iter().enumerate() {
        if parts.iter().all(|p| p.metadata[i].1 == *value) {
            out.metadata.push((key.clone(), value.clone()));
        } else {
            for (p, n) in parts.iter().zip(sites) {
                out.metadata
                    .push((format!("{key}_{n}"), p.metadata[i].1.clone()));
            }
        }
    }
    for (p, &n) in parts.into_iter().zip(sites) {
        out.rows.extend(p.rows.into_iter().map(|row| {
            let mut full = vec![Cell::from(n)];
            full.extend(row);
            full
        }));
    }
    Ok(out)
}

fn alpha_cell(alpha: SectorAlpha) -> Cell {
    Cell::Float(alpha.value())
}

fn spectrum(sites: usize, points: &[f64], single: bool, modes: bool) -> Result<Table, CliError> {
    crate::error::check_size("spectrum", sites, usize::MAX)?;
    let mut t = Table::new("spectrum", sites, &["kind", "index", "alpha", "g", "value"]);
    for n in 0..=sites {
        let alpha = analytic::alpha_for_sector(sites, n);
        for &g in points {
            t.rows.push(vec![
                "level".into(),
                n.into(),
                alpha_cell(alpha),
                g.into(),
                analytic::min_energy_density(sites, n, g).into(),
            ]);
        }
    }
    if single {
        let alpha = analytic::alpha_for_sector(sites, 1);
        for k in 0..sites {
            for &g in points {
                t.rows.push(vec![
                    "single".into(),
                    k.into(),
                    alpha_cell(alpha),
                    g.into(),
                    analytic::single_particle_energy(sites, k, g).into(),
                ]);
            }
        }
    }
    if modes {
        for alpha in [SectorAlpha::Zero, SectorAlpha::Half] {
            for k in 0..sites {
                t.rows.push(vec![
                    "mode".into(),
                    k.into(),
                    alpha_cell(alpha),
                    Cell::Empty,
                    analytic::mode_cosine(sites, alpha, k).into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn critical_points(sites: usize) -> Result<Table, CliError> {
    crate::error::check_size("critical points", sites, usize::MAX)?;
    let mut t = Table::new("critical-points", sites, &["n", "g_c"]);
    for c in analytic::critical_points(sites) {
        t.rows.push(vec![c.n.into(), c.g_c.into()]);
    }
    Ok(t)
}

fn finite_size_table(sites: usize) -> Result<Table, CliError> {
    crate::error::check_size("envelope", sites, usize::MAX)?;
    let mut t = Table::new(
        "envelope",
        sites,
        &["sites", "chi_n", "relative_error", "scaled_error"],
    );
    for n in crate::MIN_SITES..=sites {
        let r = analytic::relative_error(n);
        let scaled = r * 6.0 * (n * n) as f64 / std::f64::consts::PI.powi(2);
        t.rows.push(vec![
            n.into(),
            analytic::finite_size_parameter(n).into(),
            r.into(),
            scaled.into(),
        ]);
    }
    Ok(t)
}

fn envelope(sites: usize, points: &[f64]) -> Result<Table, CliError> {
    crate::error::check_size("envelope", sites, usize::MAX)?;
    let mut t = Table::new("envelope", sites, &["g", "eps_gs", "eps_env", "eps_inf"]);
    t.metadata
        .push(meta("chi_n", analytic::finite_size_parameter(sites).into()));
    t.metadata.push(meta(
        "relative_error",
        analytic::relative_error(sites).into(),
    ));
    for &g in points {
        t.rows.push(vec![
            g.into(),
            analytic::ground_energy_density(sites, g).into(),
            analytic::envelope_energy(sites, g).into(),
            analytic::thermodynamic_energy(g).into(),
        ]);
    }
    Ok(t)
}

fn ground_state(sites: usize, g: f64) -> Result<Table, CliError> {
    if !g.is_finite() {
        return Err(CliError::Usage(format!("--g must be finite, got {g}")));
    }
    let psi = statevector::ground_state(sites, g)?;
    let mut t = Table::new("ground-state", sites, &["index", "re", "im"]);
    t.metadata.push(meta("g", g.into()));
    t.metadata
        .push(meta("n", analytic::ground_sector(sites, g)?.into()));
    for (i, a) in psi.amplitudes().iter().enumerate() {
        t.rows.push(vec![i.into(), a.re.into(), a.im.into()]);
    }
    Ok(t)
}

fn entanglement_table(sites: usize, field: &Field, detail: bool) -> Result<Table, CliError> {
    let points = field.points()?;
    let stats: Vec<PurityStats> = match field.g {
        Some(g) => vec![entanglement::purity_stats(sites, g)?],
        None => entanglement::entanglement_sweep(sites, field.g_min, field.g_max, field.steps)?,
    };
    debug_assert_eq!(stats.len(), points.len());
    let columns: &[&str] = if detail {
        &["g", "n", "mu", "sigma", "mask", "pi"]
    } else {
        &["g", "n", "mu", "sigma"]
    };
    let mut t = Table::new("entanglement", sites, columns);
    t.metadata.push(meta(
        "bipartitions",
        entanglement::balanced_bipartitions(sites)?.len().into(),
    ));
    t.metadata
        .push(meta("crossing_nudge", entanglement::CROSSING_NUDGE.into()));
    for s in &stats {
        let head: Vec<Cell> = vec![s.g.into(), s.n.into(), s.mu.into(), s.sigma.into()];
        if detail {
            for &(mask, pi) in &s.purities {
                let mut row = head.clone();
                row.push(mask.into());
                row.push(pi.into());
                t.rows.push(row);
            }
        } else {
            t.rows.push(head);
        }
    }
    Ok(t)
}

/// Tolerances used by `verify`.
pub const ENERGY_TOLERANCE: f64 = 1e-8;
pub const OVERLAP_TOLERANCE: f64 = 1e-8;
pub const ENDPOINT_TOLERANCE: f64 = 1e-14;
pub const OPERATOR_TOLERANCE: f64 = 1e-11;
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;
/// Grid points this close to a crossing are left out of the oracle checks.
pub const CROSSING_EXCLUSION: f64 = 1e-3;

struct Check {
    name: &'static str,
    deviation: Option<f64>,
    tolerance: f64,
}

impl Check {
    fn status(&self) -> &'static str {
        match self.deviation {
            None => "skip",
            Some(d) if d < self.tolerance => "pass",
            Some(_) => "fail",
        }
    }
}

fn oracle_hamiltonian(sites: usize, g: f64, fault: bool) -> Result<DenseOperator, Error> {
    if !fault {
        return oracle::build_spin_hamiltonian(sites, g);
    }
    crate::error::check_size("spin Hamiltonian", sites, oracle::MAX_SPIN_SITES)?;
    // flips the sign of every sigma^y sigma^y bond
    let mut h = oracle::spin_hamiltonian_sparse(sites, g);
    for i in 0..sites {
        let yy = BasisMap::sigma_y(sites, i).compose(&BasisMap::sigma_y(sites, (i + 1) % sites));
        h.add_map(Complex64::new(1.0, 0.0), &yy);
    }
    DenseOperator::from_sparse(sites, &h)
}

fn verify(sites: usize, points: &[f64], fault: bool) -> Result<Table, CliError> {
    crate::error::check_size("verify", sites, MAX_VERIFY_SITES)?;
    let crossings: Vec<f64> = analytic::critical_points(sites)
        .iter()
        .map(|c| c.g_c)
        .collect();
    let clear: Vec<f64> = points
        .iter()
        .copied()
        .filter(|g| crossings.iter().all(|c| (g - c).abs() > CROSSING_EXCLUSION))
        .collect();

    // (energy deviation, overlap defect or None when degenerate)
    let per_point: Vec<(f64, Option<f64>)> = clear
        .par_iter()
        .map(|&g| -> Result<_, Error> {
            let h = oracle_hamiltonian(sites, g, fault)?;
            let gp = oracle::ground_eigenpair(&h)?;
            let energy =
                (sites as f64 * analytic::ground_energy_density(sites, g) - gp.energy).abs();
            let overlap = if gp.degenerate {
                None
            } else {
                let psi = statevector::ground_state(sites, g)?;
                Some(1.0 - psi.inner(&gp.vector)?.norm())
            };
            Ok((energy, overlap))
        })
        .collect::<Result<_, _>>()?;
    let worst = |it: &mut dyn Iterator<Item = f64>| {
        it.fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        })
    };

    let probes = [
        points[0],
        points[points.len() / 2],
        points[points.len() - 1],
    ];
    let parity = oracle::parity_diagonal(sites);
    let mut parity_dev = 0.0f64;
    let mut jw_dev = 0.0f64;
    for &g in &probes {
        parity_dev = parity_dev
            .max(oracle::build_spin_hamiltonian(sites, g)?.commutator_with_diagonal(&parity));
        jw_dev = jw_dev.max(jw::jw_hamiltonian_deviation(sites, g)?);
    }
    let (mut reassembly, mut sector_spectrum) = (None, None);
    if sites <= oracle::MAX_SECTOR_AUDIT_SITES {
        let (mut op, mut sp) = (0.0f64, 0.0f64);
        for &g in &probes {
            let audit = match sectors::verify_sector_hamiltonians(sites, g) {
                Ok(a) => a,
                Err(Error::Mismatch { deviation, .. }) => {
                    op = op.max(deviation);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            op = op.max(audit.operator_deviation);
            sp = sp
                .max(audit.spectrum_deviation)
                .max(audit.mode_spectrum_deviation);
        }
        reassembly = Some(op);
        sector_spectrum = Some(sp);
    }
    let endpoints = (analytic::critical_point(sites, 0) + 1.0)
        .abs()
        .max((analytic::critical_point(sites, sites) - 1.0).abs());

    let checks = [
        Check {
            name: "energy_oracle",
            deviation: worst(&mut per_point.iter().map(|p| p.0)),
            tolerance: ENERGY_TOLERANCE,
        },
        Check {
            name: "state_overlap",
            deviation: worst(&mut per_point.iter().filter_map(|p| p.1)),
            tolerance: OVERLAP_TOLERANCE,
        },
        Check {
            name: "critical_endpoints",
            deviation: Some(endpoints),
            tolerance: ENDPOINT_TOLERANCE,
        },
        Check {
            name: "jw_anticommutation",
            deviation: Some(jw::jw_anticommutation_deviation(sites)?),
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "pauli_ladder",
            deviation: Some(jw::pauli_ladder_deviation(sites)?),
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "boundary_relation",
            deviation: Some(jw::boundary_relation_deviation(sites)?),
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "parity_commutation",
            deviation: Some(parity_dev),
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "jw_hamiltonian",
            deviation: Some(jw_dev),
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "sector_reassembly",
            deviation: reassembly,
            tolerance: OPERATOR_TOLERANCE,
        },
        Check {
            name: "sector_spectrum",
            deviation: sector_spectrum,
            tolerance: SPECTRUM_TOLERANCE,
        },
    ];

    let mut t = Table::new(
        "verify",
        sites,
        &["check", "deviation", "tolerance", "status"],
    );
    t.metadata.push(meta("grid_points", points.len().into()));
    t.metadata.push(meta("oracle_points", clear.len().into()));
    if fault {
        t.metadata.push(meta("fault", "flipped_yy_bonds".into()));
    }
    for c in &checks {
        t.rows.push(vec![
            c.name.into(),
            c.deviation.map_or(Cell::Empty, Cell::Float),
            c.tolerance.into(),
            c.status().into(),
        ]);
    }
    t.passed = Some(checks.iter().all(|c| c.status() != "fail"));
    Ok(t)
}

fn io_of(command: &Command) -> &Io {
    match command {
        Command::Spectrum { io, .. }
        | Command::CriticalPoints { io, .. }
        | Command::Envelope { io, .. }
        | Command::GroundState { io, .. }
        | Command::Entanglement { io, .. }
        | Command::Verify { io, .. } => io,
    }
}

/// Computes the table for a parsed command line.
pub fn execute(cli: &Cli) -> Result<Table, CliError> {
    let io = io_of(&cli.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = io.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Spectrum {
            ring,
            field,
            single,
            modes,
            ..
        } => {
            let points = field.points()?;
            per_ring("spectrum", &ring.sites, |n| {
                spectrum(n, &points, *single, *modes)
            })
        }
        Command::CriticalPoints { ring, .. } => {
            per_ring("critical-points", &ring.sites, critical_points)
        }
        Command::Envelope {
            ring,
            field,
            finite_size: true,
            ..
        } => match ring.sites.as_slice() {
            &[n] => {
                field.points()?;
                finite_size_table(n)
            }
            _ => Err(CliError::Usage(
                "--finite-size takes a single --sites value".into(),
            )),
        },
        Command::Envelope { ring, field, .. } => {
            let points = field.points()?;
            per_ring("envelope", &ring.sites, |n| envelope(n, &points))
        }
        Command::GroundState { ring, g, .. } => ground_state(ring.sites, *g),
        Command::Entanglement {
            ring,
            field,
            detail,
            ..
        } => {
            field.points()?;
            per_ring("entanglement", &ring.sites, |n| {
                entanglement_table(n, field, *detail)
            })
        }
        Command::Verify {
            ring,
            field,
            inject_fault,
            ..
        } => verify(ring.sites, &field.points()?, *inject_fault),
    })
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

/// Parses `args`, runs the command, writes the output and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let io = io_of(&cli.command);
    let result = execute(&cli).and_then(|table| {
        let text = render(&table, io.format);
        match &io.output {
            Some(path) => std::fs::write(path, text).map_err(CliError::Io)?,
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(CliError::Io)?,
        }
        Ok(table)
    });
    match result {
        Ok(table) if table.passed == Some(false) => {
            for row in table
                .rows
                .iter()
                .filter(|r| r[3] == Cell::Text("fail".into()))
            {
                eprintln!("check failed: {}", row[0].csv());
            }
            EXIT_VERIFY_FAILED
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
