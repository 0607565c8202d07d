//! Timing and heap accounting for the scaling benchmark.
//!
//! Peak heap figures are only meaningful when the running binary installs
//! [`CountingAlloc`] as its global allocator.

use std::alloc::{GlobalAlloc, Layout, System};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::fast::solve_fast;
use crate::gen::{gen_comb, gen_random, GenSpec};
use crate::model::Instance;
use crate::prelim::run_preliminary;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

/// System allocator wrapper tracking live and peak heap bytes.
pub struct CountingAlloc;

fn grew(by: usize) {
    let now = CURRENT.fetch_add(by, Ordering::Relaxed) + by;
    PEAK.fetch_max(now, Ordering::Relaxed);
}

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            grew(layout.size());
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            grew(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                grew(new_size - layout.size());
            } else {
                CURRENT.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        p
    }
}

/// Whether [`CountingAlloc`] is the active global allocator.
pub fn counting_active() -> bool {
    let before = CURRENT.load(Ordering::Relaxed);
    let probe = std::hint::black_box(vec![0u8; 4096]);
    let active = CURRENT.load(Ordering::Relaxed) >= before + probe.len();
    drop(probe);
    active
}

/// Runs `f` and reports its wall time and the peak heap growth above the
/// level at the start.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, Duration, usize) {
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let peak = PEAK.load(Ordering::Relaxed).saturating_sub(base);
    (out, elapsed, peak)
}

pub fn median(mut xs: Vec<Duration>) -> Duration {
    assert!(!xs.is_empty(), "median of nothing");
    xs.sort();
    xs[xs.len() / 2]
}

/// Largest size the quadratic solver is timed on.
pub const PRELIM_LIMIT: usize = 20_000;

/// Instance family timed by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// [`gen_random`] with default parameters.
    Random,
    /// [`gen_comb`]: the quadratic solver's worst case.
    Comb,
}

impl Family {
    pub fn instance(self, n: usize, seed: u64) -> Instance {
        match self {
            Family::Random => gen_random(&GenSpec::new(n, seed)),
            Family::Comb => gen_comb(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub fast: Duration,
    pub prelim: Option<Duration>,
    /// Peak heap bytes of one fast solve; zero when not tracked.
    pub fast_peak: usize,
}

pub fn time_fast(inst: &Instance, repeat: usize) -> (Duration, usize) {
    let mut times = Vec::with_capacity(repeat);
    let mut peak = 0;
    for _ in 0..repeat.max(1) {
        let (solve, t, p) = measure(|| solve_fast(inst));
        drop(solve);
        times.push(t);
        peak = peak.max(p);
    }
    (median(times), peak)
}

pub fn time_prelim(inst: &Instance, repeat: usize) -> Duration {
    let times = (0..repeat.max(1))
        .map(|_| {
            let (run, t, _) = measure(|| run_preliminary(inst).best().delta.clone());
            drop(run);
            t
        })
        .collect();
    median(times)
}

pub fn run_bench(sizes: &[usize], seed: u64, repeat: usize, family: Family) -> Vec<BenchRow> {
    sizes
        .iter()
        .map(|&n| {
            let inst = family.instance(n, seed);
            let (fast, fast_peak) = time_fast(&inst, repeat);
            let prelim = (n <= PRELIM_LIMIT).then(|| time_prelim(&inst, repeat));
            BenchRow {
                n,
                fast,
                prelim,
                fast_peak,
            }
        })
        .collect()
}

fn ratio(cur: f64, prev: Option<f64>) -> String {
    match prev {
        Some(p) if p > 0.0 => format!("{:.2}", cur / p),
        _ => "-".to_string(),
    }
}

/// Tab-separated table; ratios compare each row with the previous one.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out =
        String::from("n\tfast_ms\tfast_ratio\tprelim_ms\tprelim_ratio\tpeak_bytes\tpeak_ratio\n");
    let mut prev: Option<&BenchRow> = None;
    for row in rows {
        let fast_ms = row.fast.as_secs_f64() * 1e3;
        let prelim_ms = row.prelim.map(|d| d.as_secs_f64() * 1e3);
        let prev_prelim = prev.and_then(|p| p.prelim).map(|d| d.as_secs_f64() * 1e3);
        let peak = if row.fast_peak > 0 {
            row.fast_peak.to_string()
        } else {
            "-".to_string()
        };
        let prev_peak = prev.map(|p| p.fast_peak as f64).filter(|&p| p > 0.0);
        let peak_ratio = if row.fast_peak > 0 {
            ratio(row.fast_peak as f64, prev_peak)
        } else {
            "-".to_string()
        };
        writeln!(
            out,
            "{}\t{:.3}\t{}\t{}\t{}\t{}\t{}",
            row.n,
            fast_ms,
            ratio(fast_ms, prev.map(|p| p.fast.as_secs_f64() * 1e3)),
            prelim_ms.map_or("-".to_string(), |t| format!("{t:.3}")),
            prelim_ms.map_or("-".to_string(), |t| ratio(t, prev_prelim)),
            peak,
            peak_ratio,
        )
        .expect("writing to a string");
        prev = Some(row);
    }
    out
}

/// Parses a comma-separated size list such as `1e4,2e4,50000`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v: f64 = s.parse().map_err(|_| format!("invalid size `{s}`"))?;
            if v < 1.0 || v.fract() != 0.0 || v > 1e9 {
                return Err(format!("invalid size `{s}`"));
            }
            Ok(v as usize)
        })
        .collect()
}
