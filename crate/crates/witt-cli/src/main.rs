//! Command-line front end: generate random Witt vectors, apply ring
//! operations with a chosen backend, cross-verify the backends, and emit
//! CSV benchmark sweeps.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parse error.

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;

use witt::error::Error as WittError;
use witt::textio::{parse_witt, print_witt};
use witt::witt::{
    random_witt, witt_add, witt_mul, witt_sub, Backend, BoundKind, WittContext, WittVector,
};

/// Tracks current and peak heap usage for the --mem column.
struct CountingAlloc;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let cur = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(cur, Ordering::Relaxed);
        }
        p
    }
    unsafe fn dealloc(&self, p: *mut u8, layout: Layout) {
        System.dealloc(p, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

fn reset_peak() {
    PEAK.store(CURRENT.load(Ordering::Relaxed), Ordering::Relaxed);
}

fn peak_bytes() -> usize {
    PEAK.load(Ordering::Relaxed)
}

#[derive(Parser)]
#[command(name = "witt", about = "Ring arithmetic in truncated p-typical Witt vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct CommonArgs {
    /// Plain key=value configuration file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prime characteristic.
    #[arg(long)]
    p: Option<String>,
    /// Field extension degree d (q = p^d).
    #[arg(long)]
    d: Option<String>,
    /// Witt vector length n.
    #[arg(long)]
    n: Option<String>,
    /// Number of polynomial variables m.
    #[arg(long)]
    m: Option<String>,
    /// Degree bound for random coordinates.
    #[arg(long)]
    deg: Option<String>,
    /// How the degree bound applies: per-var or total.
    #[arg(long, value_name = "KIND")]
    deg_kind: Option<String>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random Witt vectors in the text format.
    Gen {
        #[command(flatten)]
        common: CommonArgs,
        /// How many vectors to generate.
        #[arg(long)]
        count: Option<String>,
        /// Output path (count=1) or path prefix (suffix .<i> per vector).
        /// Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a ring operation to two Witt vector files.
    Op {
        #[command(flatten)]
        common: CommonArgs,
        /// add, sub or mul.
        #[arg(long)]
        op: Option<String>,
        /// naive, illusie or phantom.
        #[arg(long)]
        backend: Option<String>,
        file_a: PathBuf,
        file_b: PathBuf,
    },
    /// Cross-check all backends and ring axioms over a parameter grid.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Random samples per grid point.
        #[arg(long)]
        samples: Option<String>,
        /// Test hook: flip one coefficient to prove the harness catches it.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Benchmark backends over a parameter sweep; CSV on stdout or --csv-out.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Sweep variable: d (degree bound), n, p, q or m.
        #[arg(long)]
        sweep: Option<String>,
        /// Comma-separated sweep values.
        #[arg(long)]
        values: Option<String>,
        /// Comma-separated backends (default all three).
        #[arg(long)]
        backend: Option<String>,
        /// Comma-separated ops (default add,sub,mul).
        #[arg(long)]
        op: Option<String>,
        /// Timed trials per point (median reported).
        #[arg(long)]
        trials: Option<String>,
        /// Per-(point,backend,op) timeout; exceeded points record "timeout".
        #[arg(long)]
        timeout_secs: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv_out: Option<PathBuf>,
        /// Add a peak_bytes column.
        #[arg(long)]
        mem: bool,
    },
    /// Internal: measure one sweep point in a fresh process.
    #[command(hide = true)]
    BenchPoint {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        backend: String,
        #[arg(long)]
        op: String,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        mem: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl From<WittError> for CliError {
    fn from(e: WittError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {}", e))
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// key=value lines; blank lines and '#' comments ignored.
fn read_config(path: &PathBuf) -> CliResult<HashMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {}", path.display(), e)))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Flag value if present, else config value, else default.
struct Settings {
    config: HashMap<String, String>,
}

impl Settings {
    fn new(common: &CommonArgs) -> CliResult<Self> {
        let config = match &common.config {
            Some(path) => read_config(path)?,
            None => HashMap::new(),
        };
        Ok(Settings { config })
    }

    fn pick<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Option<&'a str> {
        flag.as_deref().or_else(|| self.config.get(key).map(|s| s.as_str()))
    }

    fn parse<T: std::str::FromStr>(
        &self,
        flag: &Option<String>,
        key: &str,
        default: T,
    ) -> CliResult<T> {
        match self.pick(flag, key) {
            None => Ok(default),
            Some(s) => s
                .parse::<T>()
                .map_err(|_| usage(format!("invalid value '{}' for {}", s, key))),
        }
    }

    fn parse_flag(&self, flag: bool, key: &str) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        match self.config.get(key) {
            None => Ok(false),
            Some(s) => match s.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(usage(format!("invalid value '{}' for {}", other, key))),
            },
        }
    }
}

#[derive(Debug, Clone)]
struct Params {
    p: BigUint,
    d: usize,
    n: u32,
    m: usize,
    deg: u32,
    kind: BoundKind,
    seed: u64,
}

impl Params {
    fn from_settings(s: &Settings, c: &CommonArgs) -> CliResult<Params> {
        Ok(Params {
            p: s.parse(&c.p, "p", BigUint::from(2u32))?,
            d: s.parse(&c.d, "d", 1usize)?,
            n: s.parse(&c.n, "n", 1u32)?,
            m: s.parse(&c.m, "m", 1usize)?,
            deg: s.parse(&c.deg, "deg", 1u32)?,
            kind: s.parse(&c.deg_kind, "deg-kind", BoundKind::Total)?,
            seed: s.parse(&c.seed, "seed", 0u64)?,
        })
    }

    fn context(&self) -> CliResult<WittContext> {
        WittContext::new(self.p.clone(), self.d, self.n, self.m).map_err(Into::into)
    }
}

fn parse_list<T: std::str::FromStr>(src: &str, what: &str) -> CliResult<Vec<T>> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| usage(format!("invalid {} value '{}'", what, s)))
        })
        .collect()
}

fn op_fn(name: &str) -> CliResult<fn(&WittVector, &WittVector, Backend) -> witt::error::Result<WittVector>> {
    match name {
        "add" => Ok(witt_add),
        "sub" => Ok(witt_sub),
        "mul" => Ok(witt_mul),
        other => Err(usage(format!(
            "unknown op '{}' (expected add, sub or mul)",
            other
        ))),
    }
}

fn cmd_gen(common: &CommonArgs, count: &Option<String>, out: &Option<PathBuf>) -> CliResult<()> {
    let settings = Settings::new(common)?;
    let params = Params::from_settings(&settings, common)?;
    let count: usize = settings.parse(count, "count", 1usize)?;
    if count == 0 {
        return Err(usage("count must be at least 1"));
    }
    let ctx = params.context()?;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(params.seed);
    let vectors: Vec<String> = (0..count)
        .map(|_| print_witt(&witt::witt::random_witt_with(&ctx, params.deg, params.kind, &mut rng)))
        .collect();
    match out {
        None => {
            for v in &vectors {
                print!("{}", v);
            }
        }
        Some(path) if count == 1 => fs::write(path, &vectors[0])?,
        Some(path) => {
            for (i, v) in vectors.iter().enumerate() {
                let mut p = path.clone().into_os_string();
                p.push(format!(".{}", i));
                fs::write(PathBuf::from(p), v)?;
            }
        }
    }
    Ok(())
}

fn cmd_op(
    common: &CommonArgs,
    op: &Option<String>,
    backend: &Option<String>,
    file_a: &PathBuf,
    file_b: &PathBuf,
) -> CliResult<()> {
    let settings = Settings::new(common)?;
    let op_name = settings
        .pick(op, "op")
        .ok_or_else(|| usage("--op is required"))?
        .to_string();
    let backend: Backend = settings.parse(backend, "backend", Backend::Illusie)?;
    let apply = op_fn(&op_name)?;
    let read = |path: &PathBuf| -> CliResult<WittVector> {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {}", path.display(), e)))?;
        parse_witt(&text).map_err(|e| usage(format!("{}: {}", path.display(), e)))
    };
    let a = read(file_a)?;
    let b = read(file_b)?;
    let result = apply(&a, &b, backend)?;
    print!("{}", print_witt(&result));
    Ok(())
}

fn cmd_verify(common: &CommonArgs, samples: &Option<String>, inject_fault: bool) -> CliResult<()> {
    let settings = Settings::new(common)?;
    let ps: Vec<BigUint> = match settings.pick(&common.p, "p") {
        Some(s) => parse_list(s, "p")?,
        None => vec![BigUint::from(2u32), BigUint::from(3u32)],
    };
    let ds: Vec<usize> = match settings.pick(&common.d, "d") {
        Some(s) => parse_list(s, "d")?,
        None => vec![1, 2],
    };
    let ns: Vec<u32> = match settings.pick(&common.n, "n") {
        Some(s) => parse_list(s, "n")?,
        None => vec![1, 2, 3],
    };
    let ms: Vec<usize> = match settings.pick(&common.m, "m") {
        Some(s) => parse_list(s, "m")?,
        None => vec![1],
    };
    let deg: u32 = settings.parse(&common.deg, "deg", 2u32)?;
    let kind: BoundKind = settings.parse(&common.deg_kind, "deg-kind", BoundKind::Total)?;
    let seed: u64 = settings.parse(&common.seed, "seed", 0u64)?;
    let samples: u32 = settings.parse(samples, "samples", 2u32)?;
    if ps.is_empty() || ds.is_empty() || ns.is_empty() || ms.is_empty() || samples == 0 {
        return Err(usage("verification grid is empty"));
    }

    let mut checks = 0usize;
    let mut fault_pending = inject_fault;
    for p in &ps {
        for &d in &ds {
            for &n in &ns {
                for &m in &ms {
                    let ctx = WittContext::new(p.clone(), d, n, m)?;
                    for s in 0..samples {
                        let sa = seed ^ (s as u64) << 32;
                        let a = random_witt(&ctx, deg, kind, sa);
                        let b = random_witt(&ctx, deg, kind, sa.wrapping_add(1));
                        for op_name in ["add", "sub", "mul"] {
                            let apply = op_fn(op_name)?;
                            let reference = apply(&a, &b, Backend::Naive)?;
                            for backend in [Backend::Illusie, Backend::Phantom] {
                                let mut got = apply(&a, &b, backend)?;
                                if fault_pending {
                                    // flip coordinate 0 by adding one
                                    let ctx2 = got.context().clone();
                                    let mut coords: Vec<_> = got.coords().to_vec();
                                    coords[0] =
                                        coords[0].add(&witt::poly::Poly::one(
                                            ctx2.field().clone(),
                                            ctx2.m(),
                                        ));
                                    got = WittVector::from_coords(ctx2, coords)?;
                                    fault_pending = false;
                                }
                                checks += 1;
                                if got != reference {
                                    return Err(CliError::Verification(format!(
                                        "backend {} disagrees with naive on {} at p={} d={} n={} m={} deg={} seed={} sample={}",
                                        backend.name(), op_name, p, d, n, m, deg, seed, s
                                    )));
                                }
                            }
                        }
                        // ring axioms, on the fast backend
                        let bk = Backend::Illusie;
                        checks += 3;
                        if witt_add(&a, &b, bk)? != witt_add(&b, &a, bk)?
                            || witt_mul(&a, &b, bk)? != witt_mul(&b, &a, bk)?
                            || !witt_sub(&a, &a, bk)?.is_zero()
                        {
                            return Err(CliError::Verification(format!(
                                "ring axiom failed at p={} d={} n={} m={} deg={} seed={} sample={}",
                                p, d, n, m, deg, seed, s
                            )));
                        }
                    }
                }
            }
        }
    }
    println!("verify: {} checks passed, 0 failed", checks);
    Ok(())
}

/// One sweep point measured in this process; prints `median=<s> peak=<bytes>`.
fn cmd_bench_point(
    common: &CommonArgs,
    backend: &str,
    op: &str,
    trials: u32,
    mem: bool,
) -> CliResult<()> {
    let settings = Settings::new(common)?;
    let params = Params::from_settings(&settings, common)?;
    let backend: Backend = backend.parse().map_err(|e: WittError| usage(e.to_string()))?;
    let apply = op_fn(op)?;
    let ctx = params.context()?;
    let a = random_witt(&ctx, params.deg, params.kind, params.seed);
    let b = random_witt(&ctx, params.deg, params.kind, params.seed.wrapping_add(1));
    // untimed warm-up; for the naive backend this also builds and caches
    // the structure-polynomial table, which is excluded from timing
    apply(&a, &b, backend)?;
    reset_peak();
    let mut times: Vec<f64> = Vec::with_capacity(trials as usize);
    for _ in 0..trials.max(1) {
        let t0 = Instant::now();
        let r = apply(&a, &b, backend)?;
        times.push(t0.elapsed().as_secs_f64());
        std::hint::black_box(&r);
    }
    times.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let median = times[times.len() / 2];
    if mem {
        println!("median={} peak={}", median, peak_bytes());
    } else {
        println!("median={}", median);
    }
    Ok(())
}

/// Splits a prime power q into (p, d).
fn factor_prime_power(q: &BigUint) -> CliResult<(BigUint, usize)> {
    if *q <= BigUint::one() {
        return Err(usage(format!("q={} is not a prime power", q)));
    }
    let mut k = BigUint::from(2u32);
    while &k * &k <= *q {
        if (q % &k).bits() == 0 {
            let mut rest = q.clone();
            let mut d = 0usize;
            while (&rest % &k).bits() == 0 {
                rest /= &k;
                d += 1;
            }
            if rest.bits() == 1 && rest == BigUint::one() {
                return Ok((k, d));
            }
            return Err(usage(format!("q={} is not a prime power", q)));
        }
        k += 1u32;
    }
    Ok((q.clone(), 1))
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    common: &CommonArgs,
    sweep: &Option<String>,
    values: &Option<String>,
    backend: &Option<String>,
    op: &Option<String>,
    trials: &Option<String>,
    timeout_secs: &Option<String>,
    csv_out: &Option<PathBuf>,
    mem: bool,
) -> CliResult<()> {
    let settings = Settings::new(common)?;
    let base = Params::from_settings(&settings, common)?;
    let sweep = settings
        .pick(sweep, "sweep")
        .ok_or_else(|| usage("--sweep is required (d, n, p, q or m)"))?
        .to_string();
    let values: Vec<String> = match settings.pick(values, "values") {
        Some(s) => parse_list(s, "values")?,
        None => return Err(usage("--values is required")),
    };
    if values.is_empty() {
        return Err(usage("--values must be nonempty"));
    }
    let backends: Vec<Backend> = match settings.pick(backend, "backend") {
        Some(s) => parse_list(s, "backend")?,
        None => Backend::ALL.to_vec(),
    };
    let ops: Vec<String> = match settings.pick(op, "op") {
        Some(s) => {
            let names: Vec<String> = parse_list(s, "op")?;
            for n in &names {
                op_fn(n)?;
            }
            names
        }
        None => vec!["add".into(), "sub".into(), "mul".into()],
    };
    let trials: u32 = settings.parse(trials, "trials", 5u32)?;
    if trials == 0 {
        return Err(usage("trials must be at least 1"));
    }
    let timeout: u64 = settings.parse(timeout_secs, "timeout-secs", 60u64)?;
    let mem = settings.parse_flag(mem, "mem")?;

    let mut csv = String::new();
    csv.push_str("sweep_var,value,backend,op,median_seconds,trials");
    if mem {
        csv.push_str(",peak_bytes");
    }
    csv.push('\n');

    for value in &values {
        let mut point = base.clone();
        match sweep.as_str() {
            "d" | "deg" => {
                point.deg = value
                    .parse()
                    .map_err(|_| usage(format!("invalid degree value '{}'", value)))?
            }
            "n" => {
                point.n = value
                    .parse()
                    .map_err(|_| usage(format!("invalid n value '{}'", value)))?
            }
            "p" => {
                point.p = value
                    .parse()
                    .map_err(|_| usage(format!("invalid p value '{}'", value)))?
            }
            "m" => {
                point.m = value
                    .parse()
                    .map_err(|_| usage(format!("invalid m value '{}'", value)))?
            }
            "q" => {
                let q: BigUint = value
                    .parse()
                    .map_err(|_| usage(format!("invalid q value '{}'", value)))?;
                let (p, d) = factor_prime_power(&q)?;
                point.p = p;
                point.d = d;
            }
            other => return Err(usage(format!("unknown sweep variable '{}'", other))),
        }
        for &bk in &backends {
            for op_name in &ops {
                let outcome = run_point(&point, bk, op_name, trials, timeout, mem)?;
                csv.push_str(&format!("{},{},{},{}", sweep, value, bk.name(), op_name));
                match outcome {
                    PointOutcome::Timed { median, peak } => {
                        csv.push_str(&format!(",{},{}", median, trials));
                        if mem {
                            csv.push_str(&format!(",{}", peak.unwrap_or(0)));
                        }
                    }
                    PointOutcome::Timeout => {
                        csv.push_str(&format!(",timeout,{}", trials));
                        if mem {
                            csv.push_str(",timeout");
                        }
                    }
                }
                csv.push('\n');
            }
        }
    }

    match csv_out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{}", csv),
    }
    Ok(())
}

enum PointOutcome {
    Timed { median: f64, peak: Option<u64> },
    Timeout,
}

/// Runs one (point, backend, op) measurement in a child process so a
/// timeout can kill the naive backend mid-computation.
fn run_point(
    p: &Params,
    backend: Backend,
    op: &str,
    trials: u32,
    timeout: u64,
    mem: bool,
) -> CliResult<PointOutcome> {
    let exe = std::env::current_exe()?;
    let mut cmd = std::process::Command::new(exe);
    cmd.arg("bench-point")
        .arg("--p")
        .arg(p.p.to_string())
        .arg("--d")
        .arg(p.d.to_string())
        .arg("--n")
        .arg(p.n.to_string())
        .arg("--m")
        .arg(p.m.to_string())
        .arg("--deg")
        .arg(p.deg.to_string())
        .arg("--deg-kind")
        .arg(match p.kind {
            BoundKind::PerVariable => "per-var",
            BoundKind::Total => "total",
        })
        .arg("--seed")
        .arg(p.seed.to_string())
        .arg("--backend")
        .arg(backend.name())
        .arg("--op")
        .arg(op)
        .arg("--trials")
        .arg(trials.to_string());
    if mem {
        cmd.arg("--mem");
    }
    cmd.stdout(std::process::Stdio::piped());
    cmd.stderr(std::process::Stdio::inherit());
    let mut child = cmd.spawn()?;
    let deadline = Instant::now() + Duration::from_secs(timeout);
    loop {
        if let Some(status) = child.try_wait()? {
            if !status.success() {
                return Err(usage(format!(
                    "bench point failed (backend={}, op={})",
                    backend.name(),
                    op
                )));
            }
            break;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(PointOutcome::Timeout);
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    let mut out = String::new();
    use std::io::Read;
    child.stdout.take().unwrap().read_to_string(&mut out)?;
    let mut median = None;
    let mut peak = None;
    for tok in out.split_whitespace() {
        if let Some(v) = tok.strip_prefix("median=") {
            median = v.parse::<f64>().ok();
        } else if let Some(v) = tok.strip_prefix("peak=") {
            peak = v.parse::<u64>().ok();
        }
    }
    match median {
        Some(median) => Ok(PointOutcome::Timed { median, peak }),
        None => Err(usage("bench point produced no timing")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen { common, count, out } => cmd_gen(common, count, out),
        Command::Op {
            common,
            op,
            backend,
            file_a,
            file_b,
        } => cmd_op(common, op, backend, file_a, file_b),
        Command::Verify {
            common,
            samples,
            inject_fault,
        } => cmd_verify(common, samples, *inject_fault),
        Command::Bench {
            common,
            sweep,
            values,
            backend,
            op,
            trials,
            timeout_secs,
            csv_out,
            mem,
        } => cmd_bench(
            common,
            sweep,
            values,
            backend,
            op,
            trials,
            timeout_secs,
            csv_out,
            *mem,
        ),
        Command::BenchPoint {
            common,
            backend,
            op,
            trials,
            mem,
        } => cmd_bench_point(common, backend, op, *trials, *mem),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            let _ = writeln!(std::io::stderr(), "error: {}", msg);
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(std::io::stderr(), "error: {}", msg);
            ExitCode::from(2)
        }
    }
}
