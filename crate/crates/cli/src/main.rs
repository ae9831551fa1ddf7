
use std::io::{self, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use obzcp::catalog::{load_catalog, verify_catalog, Catalog};
use obzcp::search::run_search_observed;
use obzcp::{canonical, check_end_parity, orbit, psc, Category, CaseMask, SearchConfig, SearchError, SequencePair};

use obzcp_cli::record::{render_table, sig6, OutputRecord};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "obzcp", version, about = "Search and verify odd-length binary Z-complementary pairs")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive search for pairs of length N with maximal zero-correlation zone
    Search {
        n: usize,
        /// Largest admissible out-of-zone |rho_a + rho_b|
        #[arg(long, default_value_t = 2)]
        max_acc: u32,
        /// Cases to run: `all` or indices/ranges such as `0,3,5-7`
        #[arg(long, default_value = "all")]
        cases: CaseMask,
        /// Half-open chunk range `lo..hi` (either end may be omitted)
        #[arg(long)]
        chunks: Option<String>,
        #[arg(long, env = "OBZCP_WORKERS", default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Seconds between progress lines on stderr
        #[arg(long, default_value_t = 10)]
        progress_secs: u64,
        /// Skip demerit columns
        #[arg(long)]
        no_demerit: bool,
        /// Fail with exit status 3 instead of allocating a map larger than this
        #[arg(long)]
        max_map_bytes: Option<usize>,
    },
    /// Classify a pair: category, zone width, largest out-of-zone sum, parity check
    Verify {
        a: String,
        b: String,
        n: usize,
        /// Exit with status 1 unless the pair classifies as this category
        #[arg(long)]
        expect: Option<Category>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// PSC, ADF(a), ADF(b) and CDF of a pair
    Demerit { a: String, b: String, n: usize },
    /// Per-shift autocorrelations of both sequences and their sum
    AcfDump {
        a: String,
        b: String,
        n: usize,
        #[arg(long, value_enum, default_value_t = DumpFormat::Csv)]
        format: DumpFormat,
    },
    /// Canonical representative of the pair's equivalence class and the orbit size
    Canon {
        a: String,
        b: String,
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Re-verify the bundled catalog, or a pair list in the same format
    CatalogCheck { file: Option<PathBuf> },
}

/// Error carrying the process exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut out = io::stdout().lock();
    let result = match args.command {
        Command::Search { n, max_acc, cases, chunks, workers, format, progress_secs, no_demerit, max_map_bytes } => {
            let opts = SearchOpts { progress_secs, with_demerit: !no_demerit, max_map_bytes };
            cmd_search(&mut out, n, max_acc, cases, chunks.as_deref(), workers, format, &opts)
        }
        Command::Verify { a, b, n, expect, format } => cmd_verify(&mut out, &a, &b, n, expect, format),
        Command::Demerit { a, b, n } => cmd_demerit(&mut out, &a, &b, n),
        Command::AcfDump { a, b, n, format } => cmd_acf_dump(&mut out, &a, &b, n, format),
        Command::Canon { a, b, n, format } => cmd_canon(&mut out, &a, &b, n, format),
        Command::CatalogCheck { file } => cmd_catalog_check(&mut out, file),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_chunks(text: &str, total: u64) -> Result<Range<u64>, Failure> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| Failure::usage(format!("chunk range {text:?} is not lo..hi")))?;
    let bound = |s: &str, default: u64| -> Result<u64, Failure> {
        if s.trim().is_empty() {
            Ok(default)
        } else {
            s.trim().parse().map_err(|_| Failure::usage(format!("bad chunk bound {s:?}")))
        }
    };
    Ok(bound(lo, 0)?..bound(hi, total)?)
}

fn pair_arg(a: &str, b: &str, n: usize) -> Result<SequencePair, Failure> {
    SequencePair::from_hex(a, b, n).map_err(Failure::usage)
}

fn io_err(e: io::Error) -> Failure {
    Failure { code: EXIT_MISMATCH, message: format!("write failed: {e}") }
}

struct SearchOpts {
    progress_secs: u64,
    with_demerit: bool,
    max_map_bytes: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    out: &mut impl Write,
    n: usize,
    max_acc: u32,
    cases: CaseMask,
    chunks: Option<&str>,
    workers: usize,
    format: Format,
    opts: &SearchOpts,
) -> Result<u8, Failure> {
    let mut cfg = SearchConfig::new(n).with_max_acc(max_acc).with_cases(cases).with_workers(workers);
    if let Some(bytes) = opts.max_map_bytes {
        cfg = cfg.with_map_budget(bytes);
    }
    if n >= 5 && n % 2 == 1 && n <= obzcp::search::MAX_SEARCH_LEN {
        if let Some(text) = chunks {
            let range = parse_chunks(text, cfg.chunk_count())?;
            cfg = cfg.with_chunks(range);
        }
    }
    cfg.validate().map_err(Failure::usage)?;
    let range = cfg.chunks.clone();
    eprintln!(
        "search n={n} max-acc={max_acc} cases={cases} chunks {}..{} of {} workers={}",
        range.start,
        range.end,
        cfg.chunk_count(),
        cfg.workers
    );
    let start = Instant::now();
    let interval = Duration::from_secs(opts.progress_secs);
    let last = Mutex::new(Instant::now());
    let outcome = run_search_observed(&cfg, |r| {
        let mut last = last.lock().unwrap();
        if r.completed == r.total || last.elapsed() >= interval {
            *last = Instant::now();
            let secs = start.elapsed().as_secs_f64();
            eprintln!(
                "progress {}/{} chunks ({:.1}%) {:.1} chunks/s; checkpoint: resume with --chunks {}..{}",
                r.completed,
                r.total,
                100.0 * r.completed as f64 / r.total as f64,
                r.completed as f64 / secs.max(1e-9),
                r.resume_from,
                range.end
            );
        }
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(e @ SearchError::ResourceExhausted { resume_from, .. }) => {
            eprintln!("checkpoint: resume with --chunks {resume_from}..{}", range.end);
            return Err(Failure { code: EXIT_EXHAUSTED, message: e.to_string() });
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    eprintln!("done: {} classes in {:.1}s", outcome.pairs.len(), start.elapsed().as_secs_f64());
    let records: Vec<OutputRecord> =
        outcome.pairs.iter().map(|f| OutputRecord::from_pair(&f.pair, opts.with_demerit, Some(f.chunk))).collect();
    write_records(out, &records, format)?;
    Ok(0)
}

fn write_records(out: &mut impl Write, records: &[OutputRecord], format: Format) -> Result<(), Failure> {
    match format {
        Format::Table => out.write_all(render_table(records).as_bytes()).map_err(io_err),
        Format::Tsv => records.iter().try_for_each(|r| writeln!(out, "{}", r.to_tsv()).map_err(io_err)),
    }
}

fn cmd_verify(
    out: &mut impl Write,
    a: &str,
    b: &str,
    n: usize,
    expect: Option<Category>,
    format: Format,
) -> Result<u8, Failure> {
    let p = pair_arg(a, b, n)?;
    let rec = OutputRecord::from_pair(&p, false, None);
    let parity = check_end_parity(&p);
    match format {
        Format::Table => {
            writeln!(out, "pair: {p}").map_err(io_err)?;
            writeln!(out, "length: {n}").map_err(io_err)?;
            writeln!(out, "category: {}", rec.category).map_err(io_err)?;
            writeln!(out, "zcz width: {} of {}", rec.zcz_width, n.div_ceil(2)).map_err(io_err)?;
            writeln!(out, "max out-of-zone: {}", rec.max_out_of_zone).map_err(io_err)?;
            writeln!(out, "parity check: {}", if parity { "pass" } else { "fail" }).map_err(io_err)?;
        }
        Format::Tsv => writeln!(out, "{}", rec.to_tsv()).map_err(io_err)?,
    }
    match expect {
        Some(cat) if cat != rec.category => {
            eprintln!("expected {cat}, classified {}", rec.category);
            Ok(EXIT_MISMATCH)
        }
        _ => Ok(0),
    }
}

fn cmd_demerit(out: &mut impl Write, a: &str, b: &str, n: usize) -> Result<u8, Failure> {
    let r = psc(&pair_arg(a, b, n)?);
    write!(
        out,
        "PSC     {}\nADF(a)  {}\nADF(b)  {}\nCDF     {}\n",
        sig6(r.psc),
        sig6(r.adf_a),
        sig6(r.adf_b),
        sig6(r.cdf)
    )
    .map_err(io_err)?;
    Ok(0)
}

fn cmd_acf_dump(out: &mut impl Write, a: &str, b: &str, n: usize, format: DumpFormat) -> Result<u8, Failure> {
    let p = pair_arg(a, b, n)?;
    let (ra, rb) = (p.a.aacf_vector(), p.b.aacf_vector());
    let rows = (0..n).map(|t| [t as i64, ra[t], rb[t], ra[t] + rb[t], (ra[t] + rb[t]).abs()]);
    match format {
        DumpFormat::Csv => {
            writeln!(out, "tau,rho_a,rho_b,sum,abs_sum").map_err(io_err)?;
            for r in rows {
                writeln!(out, "{},{},{},{},{}", r[0], r[1], r[2], r[3], r[4]).map_err(io_err)?;
            }
        }
        DumpFormat::Table => {
            writeln!(out, "{:>5} {:>6} {:>6} {:>6} {:>6}", "tau", "rho_a", "rho_b", "sum", "|sum|").map_err(io_err)?;
            for r in rows {
                writeln!(out, "{:>5} {:>6} {:>6} {:>6} {:>6}", r[0], r[1], r[2], r[3], r[4]).map_err(io_err)?;
            }
        }
    }
    Ok(0)
}

fn cmd_canon(out: &mut impl Write, a: &str, b: &str, n: usize, format: Format) -> Result<u8, Failure> {
    let p = pair_arg(a, b, n)?;
    let c = canonical(&p);
    let size = orbit(&p).len();
    match format {
        Format::Table => write!(out, "canonical: {c}\norbit size: {size}\n"),
        Format::Tsv => writeln!(out, "{n}\t{}\t{}\t{size}", c.a.to_hex(), c.b.to_hex()),
    }
    .map_err(io_err)?;
    Ok(0)
}

fn cmd_catalog_check(out: &mut impl Write, file: Option<PathBuf>) -> Result<u8, Failure> {
    let cat = match &file {
        Some(path) => Catalog::from_file(path).map_err(Failure::usage)?,
        None => load_catalog(),
    };
    let report = verify_catalog(&cat);
    for (table, t) in &report.tallies {
        writeln!(out, "table {table:<8} {:>3}/{:<3} pass", t.passed, t.total).map_err(io_err)?;
    }
    for m in &report.mismatches {
        writeln!(out, "MISMATCH {m}").map_err(io_err)?;
    }
    let total: usize = report.tallies.iter().map(|(_, t)| t.total).sum();
    writeln!(out, "{} records checked, {} mismatches", total, report.mismatches.len()).map_err(io_err)?;
    Ok(if report.is_clean() { 0 } else { EXIT_MISMATCH })
}
