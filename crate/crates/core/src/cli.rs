//! Command-line driver: database files, simulation sweeps, communication
//! tables and the decoder self-test.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::encode::{
    generate_records, read_database_file, select_params, write_database_file, EncodedDatabase, PirParams, Scheme,
};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldModulus};
use crate::oracle::{compare_decoders, random_decoding_case, OracleLimits};
use crate::protocol::DecodeMode;
use crate::sim::{
    comm_report_for_width, run_session, run_trials, AdversaryConfig, AdversarySpec, Knowledge, Strategy, SweepSummary,
    TrialRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_CORRECTNESS: i32 = 4;

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InfeasibleParameters(_) => EXIT_INFEASIBLE,
        Error::CorrectnessViolation { .. } => EXIT_CORRECTNESS,
        Error::Io(_) | Error::OracleTooLarge(_) => EXIT_FAILURE,
        _ => EXIT_INVALID_CONFIG,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DecodeChoice {
    Naive,
    #[default]
    Optimized,
}

impl From<DecodeChoice> for DecodeMode {
    fn from(c: DecodeChoice) -> Self {
        match c {
            DecodeChoice::Naive => DecodeMode::Naive,
            DecodeChoice::Optimized => DecodeMode::Optimized,
        }
    }
}

/// A simulation run. `w`, `seed`, `db_path` and `decode` are optional; when
/// `w` is absent it is chosen by the scheme's selection rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub t: usize,
    pub b: usize,
    pub p: FieldModulus,
    pub trials: u64,
    pub adversary: AdversarySpec,
    #[serde(default)]
    pub out_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    /// Seeds the database and the per-trial session seeds.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub db_path: Option<PathBuf>,
    #[serde(default)]
    pub decode: DecodeChoice,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::G1,
            n: 1 << 10,
            ell: 8,
            k: 6,
            t: 1,
            b: 3,
            p: FieldModulus::new(131).expect("prime"),
            trials: 100,
            adversary: AdversarySpec {
                strategy: Strategy::ConsistentFake,
                knowledge: Knowledge::Omniscient,
                seed: 0,
            },
            out_path: None,
            format: OutputFormat::Csv,
            w: None,
            seed: 0,
            db_path: None,
            decode: DecodeChoice::Optimized,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Validated protocol parameters.
    pub fn params(&self) -> Result<PirParams> {
        if self.ell < self.k {
            return Err(Error::InvalidConfig(format!("ell = {} < k = {}", self.ell, self.k)));
        }
        match self.w {
            Some(w) => PirParams::new(self.scheme, self.n, self.ell, self.k, self.t, self.b, w, self.p),
            None => select_params(self.n, self.ell, self.k, self.t, self.b, self.scheme, self.p),
        }
    }

    fn database(&self, params: &PirParams) -> Result<EncodedDatabase> {
        match &self.db_path {
            Some(path) => {
                let (p, records) = read_database_file(path)?;
                if p != params.modulus {
                    return Err(Error::ModulusMismatch(params.modulus.p(), p.p()));
                }
                EncodedDatabase::new(params.clone(), records)
            }
            None => EncodedDatabase::random(params.clone(), self.seed),
        }
    }
}

/// Writes `n` seeded uniform records over `F_p`.
pub fn cmd_gen_db(n: usize, p: u64, seed: u64, path: &Path) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let modulus = FieldModulus::new(p)?;
    write_database_file(path, modulus, &generate_records(n, modulus, seed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub config: ExperimentConfig,
    pub w: usize,
    pub m: usize,
    pub rows: Vec<TrialRow>,
    pub summary: SweepSummary,
}

/// Runs `config.trials` sessions. Parameters are validated before any
/// trial; a trial whose list misses the record aborts the run.
pub fn cmd_simulate(config: &ExperimentConfig) -> Result<SimulationReport> {
    let params = config.params()?;
    let db = config.database(&params)?;
    let rows = run_trials(&params, &db, &config.adversary, config.decode.into(), config.trials, config.seed)?;
    if let Some(bad) = rows.iter().find(|r| !r.success) {
        return Err(Error::CorrectnessViolation {
            trial: bad.trial,
            seed: bad.seed,
        });
    }
    let summary = SweepSummary::from_rows(&rows);
    Ok(SimulationReport {
        config: config.clone(),
        w: params.w,
        m: params.m,
        rows,
        summary,
    })
}

/// One cell of a communication table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchCell {
    pub scheme: Scheme,
    pub k: usize,
    pub b: usize,
    pub t: usize,
    pub bit_width: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchGrid {
    pub n: usize,
    pub cells: Vec<BenchCell>,
    /// Cells with `n` at most this and `bit_width ≤ 62` also run one honest
    /// session and record its measured bytes.
    pub measure_limit: usize,
}

impl BenchGrid {
    /// Base point `(k, b, t, bits) = (20, 12, 1, 128)` at `n = 2^26`, varying
    /// one coordinate at a time, for both list-decoding schemes.
    pub fn default_table() -> Self {
        let base = (20, 12, 1, 128);
        let mut points = Vec::new();
        points.extend([16, 18, 20, 22, 24].map(|k| (k, base.1, base.2, base.3)));
        points.extend([10, 11, 12, 13, 14].map(|b| (base.0, b, base.2, base.3)));
        points.extend([1, 2, 3, 4].map(|t| (base.0, base.1, t, base.3)));
        points.extend([16, 32, 64, 128].map(|bits| (base.0, base.1, base.2, bits)));
        let cells = [Scheme::G1, Scheme::G2]
            .into_iter()
            .flat_map(|scheme| {
                points
                    .iter()
                    .map(move |&(k, b, t, bit_width)| BenchCell { scheme, k, b, t, bit_width })
            })
            .collect();
        Self {
            n: 1 << 26,
            cells,
            measure_limit: 1 << 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scheme: Scheme,
    pub k: usize,
    pub b: usize,
    pub t: usize,
    pub bit_width: u32,
    pub n: usize,
    pub feasible: bool,
    pub w: Option<usize>,
    pub m: Option<usize>,
    /// `n` exponent of the per-server cost, written `1/w`.
    pub exponent: Option<String>,
    pub formula_bytes_per_server: Option<usize>,
    pub measured_bytes_per_server: Option<usize>,
    pub note: String,
}

/// Largest prime with exactly `bits` bits.
pub fn largest_prime_with_bits(bits: u32) -> Option<u64> {
    if !(2..=62).contains(&bits) {
        return None;
    }
    (1u64 << (bits - 1)..1u64 << bits).rev().find(|&c| is_prime(c))
}

fn bench_cell(n: usize, measure_limit: usize, cell: &BenchCell) -> Result<BenchRow> {
    let mut row = BenchRow {
        scheme: cell.scheme,
        k: cell.k,
        b: cell.b,
        t: cell.t,
        bit_width: cell.bit_width,
        n,
        feasible: false,
        w: None,
        m: None,
        exponent: None,
        formula_bytes_per_server: None,
        measured_bytes_per_server: None,
        note: String::new(),
    };
    // A placeholder prime; the selection rule does not depend on p.
    let placeholder = FieldModulus::new(131)?;
    let params = match select_params(n, cell.k, cell.k, cell.t, cell.b, cell.scheme, placeholder) {
        Ok(p) => p,
        Err(Error::InfeasibleParameters(why)) => {
            row.note = why;
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    row.feasible = true;
    row.w = Some(params.w);
    row.m = Some(params.m);
    row.exponent = Some(format!("1/{}", params.w));
    row.formula_bytes_per_server = Some(comm_report_for_width(1, params.m, cell.bit_width).per_server_payload_bytes);
    match largest_prime_with_bits(cell.bit_width) {
        Some(p) if n <= measure_limit => {
            let modulus = FieldModulus::new(p)?;
            let params = PirParams { modulus, ..params };
            let db = EncodedDatabase::random(params.clone(), 0)?;
            let t = run_session(&params, &db, 1, &AdversaryConfig::honest(), DecodeMode::Optimized, 0)?;
            row.measured_bytes_per_server = Some(t.payload_bytes() / params.ell);
            row.note = format!("measured with p = {p}");
        }
        Some(_) => row.note = "formula only: n above measure limit".into(),
        None => row.note = "formula only: field wider than 62 bits".into(),
    }
    Ok(row)
}

/// Per-server communication for every cell. Infeasible cells are marked,
/// not fatal. `ℓ = k` in every cell.
pub fn cmd_bench_comm(grid: &BenchGrid) -> Result<Vec<BenchRow>> {
    grid.cells
        .iter()
        .map(|cell| bench_cell(grid.n, grid.measure_limit, cell))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub instances: u64,
    pub agreed: u64,
    pub max_list: usize,
}

/// Compares every decoder against exhaustive search on random small cases.
pub fn cmd_selftest(instances: u64, seed: u64) -> Result<SelftestReport> {
    let limits = OracleLimits::default();
    let mut max_list = 0;
    for trial in 0..instances {
        let case_seed = seed.wrapping_add(trial);
        let cmp = compare_decoders(&random_decoding_case(case_seed), &limits)?;
        if !cmp.all_equal() {
            return Err(Error::CorrectnessViolation { trial, seed: case_seed });
        }
        max_list = max_list.max(cmp.brute_force.len());
    }
    Ok(SelftestReport {
        instances,
        agreed: instances,
        max_list,
    })
}

fn write_rows<T: Serialize>(rows: &[T], format: OutputFormat, out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "ldpir", version, about = "List-decodable Byzantine-robust PIR simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random database file.
    GenDb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run retrieval sessions against simulated servers.
    Simulate(SimulateArgs),
    /// Same as simulate, printing only the list-size summary.
    ListSweep(SimulateArgs),
    /// Per-server communication table.
    BenchComm {
        /// Database size; defaults to 2^26.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        measure_limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Check the decoders against exhaustive search.
    Selftest {
        #[arg(long, default_value_t = 200)]
        instances: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Flags override the values loaded from `--config`.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub knowledge: Option<Knowledge>,
    #[arg(long)]
    pub adversary_seed: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub db: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, value_enum)]
    pub decode: Option<DecodeChoice>,
}

impl SimulateArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! over {
            ($($field:ident => $target:expr),+ $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })+
            };
        }
        over!(scheme => c.scheme, n => c.n, ell => c.ell, k => c.k, t => c.t, b => c.b,
              trials => c.trials, strategy => c.adversary.strategy, knowledge => c.adversary.knowledge,
              adversary_seed => c.adversary.seed, seed => c.seed, format => c.format, decode => c.decode);
        if let Some(p) = self.p {
            c.p = FieldModulus::new(p)?;
        }
        if self.w.is_some() {
            c.w = self.w;
        }
        if self.db.is_some() {
            c.db_path = self.db.clone();
        }
        if self.out.is_some() {
            c.out_path = self.out.clone();
        }
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenDb { n, p, seed, out } => {
            cmd_gen_db(n, p, seed, &out)?;
            eprintln!("wrote {n} records over F_{p} to {}", out.display());
        }
        Command::Simulate(args) => {
            let config = args.resolve()?;
            let report = cmd_simulate(&config)?;
            match config.format {
                OutputFormat::Csv => write_rows(&report.rows, OutputFormat::Csv, config.out_path.as_deref())?,
                OutputFormat::Json => {
                    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
                    match &config.out_path {
                        Some(path) => std::fs::write(path, text + "\n")?,
                        None => println!("{text}"),
                    }
                }
            }
            eprintln!("{}", serde_json::to_string(&report.summary).expect("summary serializes"));
        }
        Command::ListSweep(args) => {
            let config = args.resolve()?;
            let report = cmd_simulate(&config)?;
            let s = &report.summary;
            println!(
                "scheme={} w={} m={} trials={} successes={} worst_list_size={} histogram={:?}",
                config.scheme, report.w, report.m, s.trials, s.successes, s.worst_list_size, s.list_size_histogram
            );
            if let Some(path) = &config.out_path {
                write_rows(&report.rows, config.format, Some(path))?;
            }
        }
        Command::BenchComm {
            n,
            measure_limit,
            out,
            format,
        } => {
            let mut grid = BenchGrid::default_table();
            if let Some(n) = n {
                grid.n = n;
            }
            if let Some(limit) = measure_limit {
                grid.measure_limit = limit;
            }
            write_rows(&cmd_bench_comm(&grid)?, format, out.as_deref())?;
        }
        Command::Selftest { instances, seed } => {
            let r = cmd_selftest(instances, seed)?;
            println!("selftest: {}/{} instances agree, largest list {}", r.agreed, r.instances, r.max_list);
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
