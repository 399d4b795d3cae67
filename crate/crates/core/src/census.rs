//! Batched computation over ranges of `n`: transition statistics, largest
//! -prime checks, prime-equality counts, asymptotic error curves, and the
//! witness-density census, with checkpointed CSV persistence.
//!
//! The range is cut into fixed blocks. Blocks are computed in parallel
//! against the shared immutable sieve, then merged strictly in block order,
//! so the emitted row stream and every aggregate are identical for any
//! worker count. Per row the plus part comes from the `O(sqrt n)` interval
//! enumeration and the minus part from direct digit sums, so a full census
//! to `x` costs about `x^(3/2)` cheap steps.

use std::cmp::Ordering;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Seek, SeekFrom, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analytic::exp_integral_e1;
use crate::denom::{self, record_fast};
use crate::primes::PrimeSieve;
use crate::{Error, Result};

/// Version tag written into checkpoints; bump when row semantics change.
pub const CODE_TAG: &str = "census-v1";

/// Header of the row CSV. `comparison` is -1/0/1 for less/equal/greater.
pub const CSV_HEADER: &str =
    "n,omega_minus,omega_plus,log_pn_plus,largest_prime,divides,comparison,in_A";

const CHECKPOINT_MAGIC: &str = "bpden-census-checkpoint v1";

/// One census row: the denominator statistics of `n` and the transition to
/// `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusRow {
    pub n: u64,
    pub omega_minus: u32,
    pub omega_plus: u32,
    pub log_pn_plus: f64,
    /// 0 when the denominator is 1.
    pub largest_prime: u64,
    /// denominator(n+1) divides denominator(n).
    pub divides: bool,
    /// denominator(n) versus denominator(n+1), decided exactly.
    pub comparison: Ordering,
    /// some prime `p` has `s_p(n) = p - 1`.
    pub in_a: bool,
}

impl CensusRow {
    pub fn to_csv_line(&self) -> String {
        let comparison = match self.comparison {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.omega_minus,
            self.omega_plus,
            self.log_pn_plus,
            self.largest_prime,
            self.divides,
            comparison,
            self.in_a
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<CensusRow> {
        let mut fields = line.split(',');
        let mut next = || {
            fields
                .next()
                .ok_or_else(|| Error::usage(format!("short census row: {line:?}")))
        };
        let bad = |what: &str| Error::usage(format!("bad {what} in census row: {line:?}"));
        let n = next()?.parse().map_err(|_| bad("n"))?;
        let omega_minus = next()?.parse().map_err(|_| bad("omega_minus"))?;
        let omega_plus = next()?.parse().map_err(|_| bad("omega_plus"))?;
        let log_pn_plus = next()?.parse().map_err(|_| bad("log_pn_plus"))?;
        let largest_prime = next()?.parse().map_err(|_| bad("largest_prime"))?;
        let divides = next()?.parse().map_err(|_| bad("divides"))?;
        let comparison = match next()? {
            "-1" => Ordering::Less,
            "0" => Ordering::Equal,
            "1" => Ordering::Greater,
            _ => return Err(bad("comparison")),
        };
        let in_a = next()?.parse().map_err(|_| bad("in_A"))?;
        Ok(CensusRow {
            n,
            omega_minus,
            omega_plus,
            log_pn_plus,
            largest_prime,
            divides,
            comparison,
            in_a,
        })
    }
}

/// Tuning and persistence knobs of a census run.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Rows per block; blocks are the unit of parallelism and checkpointing.
    pub block_size: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub threads: usize,
    /// Checkpoint file for resumable CSV runs.
    pub checkpoint: Option<PathBuf>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            block_size: 10_000,
            threads: 0,
            checkpoint: None,
        }
    }
}

/// Order-independent tallies over the emitted rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CensusAggregates {
    pub rows: u64,
    pub count_divides: u64,
    pub count_greater: u64,
    pub count_divides_and_greater: u64,
    pub count_equal: u64,
    pub count_less: u64,
    pub count_in_a: u64,
    /// rows with a witness prime at least `sqrt(log hi)`.
    pub count_in_a_large: u64,
}

impl CensusAggregates {
    fn absorb_row(&mut self, row: &CensusRow, large_witness: bool) {
        self.rows += 1;
        self.count_divides += u64::from(row.divides);
        match row.comparison {
            Ordering::Greater => {
                self.count_greater += 1;
                self.count_divides_and_greater += u64::from(row.divides);
            }
            Ordering::Equal => self.count_equal += 1,
            Ordering::Less => self.count_less += 1,
        }
        self.count_in_a += u64::from(row.in_a);
        self.count_in_a_large += u64::from(large_witness);
    }

    fn merge(&mut self, other: &CensusAggregates) {
        self.rows += other.rows;
        self.count_divides += other.count_divides;
        self.count_greater += other.count_greater;
        self.count_divides_and_greater += other.count_divides_and_greater;
        self.count_equal += other.count_equal;
        self.count_less += other.count_less;
        self.count_in_a += other.count_in_a;
        self.count_in_a_large += other.count_in_a_large;
    }
}

struct BlockResult {
    index: u64,
    rows: Vec<CensusRow>,
    aggregates: CensusAggregates,
}

fn validate_range(sieve: &PrimeSieve, lo: u64, hi: u64) -> Result<()> {
    if lo == 0 || lo > hi {
        return Err(Error::range(format!(
            "census range [{lo}, {hi}] is empty or starts at 0"
        )));
    }
    let required = (hi + 2) / 2;
    if sieve.limit() < required {
        return Err(Error::range(format!(
            "census to {hi} needs sieve limit >= {required}, have {}",
            sieve.limit()
        )));
    }
    Ok(())
}

/// Computes rows for `n` in `[lo, hi]`, sliding the record from `n` to
/// `n + 1` so each denominator is enumerated once.
fn compute_block(
    sieve: &PrimeSieve,
    lo: u64,
    hi: u64,
    index: u64,
    large_witness_bound: f64,
) -> Result<BlockResult> {
    let mut rows = Vec::with_capacity((hi - lo + 1) as usize);
    let mut aggregates = CensusAggregates::default();
    let mut cur = record_fast(sieve, lo)?;
    for n in lo..=hi {
        let next = record_fast(sieve, n + 1)?;
        let cur_set: Vec<u64> = cur
            .minus_primes
            .iter()
            .chain(cur.plus_primes.iter())
            .copied()
            .collect();
        let next_set: Vec<u64> = next
            .minus_primes
            .iter()
            .chain(next.plus_primes.iter())
            .copied()
            .collect();
        let gained: Vec<u64> = next_set
            .iter()
            .copied()
            .filter(|p| cur_set.binary_search(p).is_err())
            .collect();
        let lost: Vec<u64> = cur_set
            .iter()
            .copied()
            .filter(|p| next_set.binary_search(p).is_err())
            .collect();
        let comparison = denom::prime_product(&lost).cmp(&denom::prime_product(&gained));
        let witnesses = denom::gain_witnesses(sieve, n)?;

        let row = CensusRow {
            n,
            omega_minus: cur.minus_primes.len() as u32,
            omega_plus: cur.plus_primes.len() as u32,
            log_pn_plus: cur.log_plus,
            largest_prime: cur.largest_prime.unwrap_or(0),
            divides: gained.is_empty(),
            comparison,
            in_a: !witnesses.is_empty(),
        };
        let large = witnesses.iter().any(|&p| p as f64 >= large_witness_bound);
        aggregates.absorb_row(&row, large);
        rows.push(row);
        cur = next;
    }
    Ok(BlockResult {
        index,
        rows,
        aggregates,
    })
}

fn block_ranges(lo: u64, hi: u64, block_size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + block_size - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

fn build_pool(threads: usize) -> Result<Option<rayon::ThreadPool>> {
    if threads == 0 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::resource(format!("cannot build worker pool: {e}")))
}

/// Streams one row per `n` in `[lo, hi]` to `sink`, ascending, regardless of
/// worker count. Returns the aggregates.
pub fn run_census<F>(
    sieve: &PrimeSieve,
    lo: u64,
    hi: u64,
    opts: &CensusOptions,
    mut sink: F,
) -> Result<CensusAggregates>
where
    F: FnMut(&CensusRow) -> Result<()>,
{
    validate_range(sieve, lo, hi)?;
    let pool = build_pool(opts.threads)?;
    let large_bound = (hi as f64).ln().sqrt();
    let ranges = block_ranges(lo, hi, opts.block_size.max(1));
    let batch_len = match &pool {
        Some(p) => p.current_num_threads().max(1) * 2,
        None => rayon::current_num_threads().max(1) * 2,
    };

    let mut aggregates = CensusAggregates::default();
    for batch in ranges.chunks(batch_len) {
        let compute = || {
            batch
                .par_iter()
                .enumerate()
                .map(|(i, &(a, b))| compute_block(sieve, a, b, i as u64, large_bound))
                .collect::<Result<Vec<_>>>()
        };
        let mut results = match &pool {
            Some(p) => p.install(compute)?,
            None => compute()?,
        };
        results.sort_by_key(|r| r.index);
        for block in &results {
            for row in &block.rows {
                sink(row)?;
            }
            aggregates.merge(&block.aggregates);
        }
    }
    Ok(aggregates)
}

#[derive(Debug, Clone, PartialEq)]
struct Checkpoint {
    lo: u64,
    hi: u64,
    block_size: u64,
    blocks_done: u64,
    csv_bytes: u64,
    aggregates: CensusAggregates,
}

impl Checkpoint {
    fn render(&self) -> String {
        let a = &self.aggregates;
        format!(
            "{CHECKPOINT_MAGIC}\ncode_tag={CODE_TAG}\nlo={}\nhi={}\nblock_size={}\n\
             blocks_done={}\ncsv_bytes={}\nrows={}\ncount_divides={}\ncount_greater={}\n\
             count_divides_and_greater={}\ncount_equal={}\ncount_less={}\ncount_in_a={}\n\
             count_in_a_large={}\n",
            self.lo,
            self.hi,
            self.block_size,
            self.blocks_done,
            self.csv_bytes,
            a.rows,
            a.count_divides,
            a.count_greater,
            a.count_divides_and_greater,
            a.count_equal,
            a.count_less,
            a.count_in_a,
            a.count_in_a_large,
        )
    }

    fn parse(path: &Path, text: &str) -> Result<Checkpoint> {
        let mismatch = |reason: &str| Error::CheckpointMismatch {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        let mut lines = text.lines();
        if lines.next() != Some(CHECKPOINT_MAGIC) {
            return Err(mismatch("unrecognized header"));
        }
        let mut get = std::collections::BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| mismatch(&format!("bad line {line:?}")))?;
            get.insert(k.to_string(), v.to_string());
        }
        if get.get("code_tag").map(String::as_str) != Some(CODE_TAG) {
            return Err(mismatch("code tag differs from this build"));
        }
        let num = |key: &str| -> Result<u64> {
            get.get(key)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| mismatch(&format!("missing or bad field {key}")))
        };
        Ok(Checkpoint {
            lo: num("lo")?,
            hi: num("hi")?,
            block_size: num("block_size")?,
            blocks_done: num("blocks_done")?,
            csv_bytes: num("csv_bytes")?,
            aggregates: CensusAggregates {
                rows: num("rows")?,
                count_divides: num("count_divides")?,
                count_greater: num("count_greater")?,
                count_divides_and_greater: num("count_divides_and_greater")?,
                count_equal: num("count_equal")?,
                count_less: num("count_less")?,
                count_in_a: num("count_in_a")?,
                count_in_a_large: num("count_in_a_large")?,
            },
        })
    }

    fn write_atomic(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.render())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Runs the census into a CSV file, checkpointing after every block batch.
/// With a matching checkpoint present the run resumes after the last
/// completed block and the final file is byte-identical to an uninterrupted
/// run.
pub fn run_census_to_csv(
    sieve: &PrimeSieve,
    lo: u64,
    hi: u64,
    opts: &CensusOptions,
    out: &Path,
) -> Result<CensusAggregates> {
    run_census_to_csv_inner(sieve, lo, hi, opts, out, None)
}

/// Worker behind [`run_census_to_csv`]; `max_batches` aborts the run after
/// that many batches, emulating an interruption for the resume tests.
fn run_census_to_csv_inner(
    sieve: &PrimeSieve,
    lo: u64,
    hi: u64,
    opts: &CensusOptions,
    out: &Path,
    max_batches: Option<usize>,
) -> Result<CensusAggregates> {
    validate_range(sieve, lo, hi)?;
    let pool = build_pool(opts.threads)?;
    let large_bound = (hi as f64).ln().sqrt();
    let ranges = block_ranges(lo, hi, opts.block_size.max(1));

    let resume = match &opts.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::parse(path, &std::fs::read_to_string(path)?)?;
            if (cp.lo, cp.hi, cp.block_size) != (lo, hi, opts.block_size) {
                return Err(Error::CheckpointMismatch {
                    path: path.clone(),
                    reason: format!(
                        "checkpoint covers [{}, {}] with block size {}, requested [{lo}, {hi}] \
                         with block size {}",
                        cp.lo, cp.hi, cp.block_size, opts.block_size
                    ),
                });
            }
            Some(cp)
        }
        _ => None,
    };

    let mut file;
    let mut blocks_done;
    let mut aggregates;
    match resume {
        Some(cp) => {
            if cp.blocks_done as usize > ranges.len() {
                return Err(Error::CheckpointMismatch {
                    path: opts.checkpoint.clone().unwrap_or_default(),
                    reason: format!(
                        "{} completed blocks for a {}-block run",
                        cp.blocks_done,
                        ranges.len()
                    ),
                });
            }
            file = OpenOptions::new().read(true).write(true).open(out)?;
            if file.metadata()?.len() < cp.csv_bytes {
                return Err(Error::CheckpointMismatch {
                    path: opts.checkpoint.clone().unwrap_or_default(),
                    reason: "output file is shorter than the checkpointed byte count".into(),
                });
            }
            // drop any partial tail past the last completed block
            file.set_len(cp.csv_bytes)?;
            file.seek(SeekFrom::End(0))?;
            blocks_done = cp.blocks_done;
            aggregates = cp.aggregates;
        }
        None => {
            file = File::create(out)?;
            writeln!(file, "{CSV_HEADER}")?;
            blocks_done = 0;
            aggregates = CensusAggregates::default();
        }
    }

    let batch_len = match &pool {
        Some(p) => p.current_num_threads().max(1) * 2,
        None => rayon::current_num_threads().max(1) * 2,
    };
    let mut writer = BufWriter::new(file);
    for (batch_idx, batch) in ranges[blocks_done as usize..].chunks(batch_len).enumerate() {
        if max_batches.is_some_and(|cap| batch_idx >= cap) {
            return Ok(aggregates);
        }
        let compute = || {
            batch
                .par_iter()
                .enumerate()
                .map(|(i, &(a, b))| compute_block(sieve, a, b, i as u64, large_bound))
                .collect::<Result<Vec<_>>>()
        };
        let mut results = match &pool {
            Some(p) => p.install(compute)?,
            None => compute()?,
        };
        results.sort_by_key(|r| r.index);
        for block in &results {
            for row in &block.rows {
                writer.write_all(row.to_csv_line().as_bytes())?;
                writer.write_all(b"\n")?;
            }
            aggregates.merge(&block.aggregates);
        }
        blocks_done += results.len() as u64;
        writer.flush()?;
        if let Some(path) = &opts.checkpoint {
            let csv_bytes = writer.get_mut().stream_position()?;
            Checkpoint {
                lo,
                hi,
                block_size: opts.block_size,
                blocks_done,
                csv_bytes,
                aggregates,
            }
            .write_atomic(path)?;
        }
    }
    writer.flush()?;
    Ok(aggregates)
}

/// Aggregated transition statistics over `n <= x` together with the rigorous
/// construction lower bound and sampled asymptotic errors.
#[derive(Debug, Clone)]
pub struct TransitionSummary {
    pub x: u64,
    pub aggregates: CensusAggregates,
    /// Count of `n = ap - 1` constructions: a rigorous lower bound for rows
    /// with `divides` and a strict decrease.
    pub construction_lower_bound: u64,
    /// `(n, omega error, log error)` at powers of ten up to `x`.
    pub asymptotic_errors: Vec<AsymptoticErrorRow>,
    pub elapsed: Duration,
    pub threads: usize,
    pub block_size: u64,
}

impl TransitionSummary {
    pub fn strict_decrease_freq(&self) -> f64 {
        self.aggregates.count_greater as f64 / self.x as f64
    }

    pub fn divisibility_failure_freq(&self) -> f64 {
        (self.x - self.aggregates.count_divides) as f64 / self.x as f64
    }

    pub fn witness_density(&self) -> f64 {
        self.aggregates.count_in_a as f64 / self.x as f64
    }
}

/// Asymptotic error of one `n`: how far the plus-part count strays from
/// `n E_1(log sqrt n)` and its log from `sqrt n`, both relative to `sqrt n`.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticErrorRow {
    pub n: u64,
    pub omega_plus: u64,
    pub omega_expected: f64,
    pub omega_err: f64,
    pub log_plus: f64,
    pub log_err: f64,
}

/// The `n = ap - 1` construction count: over primes `sqrt(x+1) < p`, each
/// `a` in `[2, (x+1)/p]` yields an `n <= x` where the denominator strictly
/// decreases while remaining divisible. Terms with `p > (x+1)/2` vanish.
pub fn construction_lower_bound(sieve: &PrimeSieve, x: u64) -> Result<u64> {
    let top = x + 1;
    let lo = top.isqrt();
    let hi = top / 2;
    if hi <= lo {
        return Ok(0);
    }
    if sieve.limit() < hi {
        return Err(Error::range(format!(
            "construction bound needs sieve limit >= {hi}, have {}",
            sieve.limit()
        )));
    }
    Ok(sieve.primes_in(lo, hi)?.iter().map(|&p| top / p - 1).sum())
}

/// Runs the census over `[1, x]` and assembles the transition summary. The
/// construction bound is rigorous, so falling short of it is a verification
/// failure, not a statistic.
pub fn transition_summary(
    sieve: &PrimeSieve,
    x: u64,
    opts: &CensusOptions,
) -> Result<TransitionSummary> {
    let start = Instant::now();
    let aggregates = run_census(sieve, 1, x, opts, |_| Ok(()))?;
    let construction = construction_lower_bound(sieve, x)?;
    if construction > aggregates.count_divides_and_greater {
        return Err(Error::verification(format!(
            "construction bound {construction} exceeds the {} rows with divisibility and strict \
             decrease at x = {x}",
            aggregates.count_divides_and_greater
        )));
    }
    let mut sample_ns = Vec::new();
    let mut n = 100u64;
    while n <= x {
        sample_ns.push(n);
        n *= 10;
    }
    Ok(TransitionSummary {
        x,
        aggregates,
        construction_lower_bound: construction,
        asymptotic_errors: asymptotic_errors(sieve, &sample_ns)?,
        elapsed: start.elapsed(),
        threads: opts.threads,
        block_size: opts.block_size,
    })
}

/// Error rows for the given `n` values.
pub fn asymptotic_errors(sieve: &PrimeSieve, ns: &[u64]) -> Result<Vec<AsymptoticErrorRow>> {
    ns.iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::range(format!(
                    "asymptotic errors need n >= 2, got {n}"
                )));
            }
            let omega_plus = denom::omega_plus_fast(sieve, n)?;
            let log_plus = denom::log_plus_fast(sieve, n)?;
            let root = (n as f64).sqrt();
            let omega_expected = n as f64 * exp_integral_e1(root.ln())?;
            Ok(AsymptoticErrorRow {
                n,
                omega_plus,
                omega_expected,
                omega_err: (omega_plus as f64 - omega_expected).abs() / root,
                log_plus,
                log_err: (log_plus - root).abs() / root,
            })
        })
        .collect()
}

/// Outcome of the largest-prime desk check over `n <= x`.
#[derive(Debug, Clone)]
pub struct LargestPrimeCheck {
    pub x: u64,
    /// `n > 192` where the largest prime fails to exceed `sqrt(n)`;
    /// conjectured (and at desk scale observed) to be empty.
    pub violations: Vec<u64>,
    /// `n <= 192` where it fails; known to be nonempty.
    pub small_failures: Vec<u64>,
    /// Minimum of `P / n^(20/37)` over `n <= x` with a nontrivial
    /// denominator, and the `n` attaining it.
    pub min_ratio: f64,
    pub min_ratio_n: u64,
    /// `n` where `P > (n+1)/2`; must stay empty.
    pub half_bound_violations: Vec<u64>,
    /// `n` where `P = (n+1)/2` fails to coincide with `(n+1)/2` prime.
    pub equality_mismatches: Vec<u64>,
}

/// Scans `n <= x`: the largest denominator prime versus `sqrt(n)`, the
/// `(n+1)/2` ceiling with its exact equality case, and the `n^(20/37)`
/// ratio floor.
pub fn conjecture1_check(sieve: &PrimeSieve, x: u64) -> Result<LargestPrimeCheck> {
    validate_range(sieve, 1, x)?;
    let mut check = LargestPrimeCheck {
        x,
        violations: Vec::new(),
        small_failures: Vec::new(),
        min_ratio: f64::INFINITY,
        min_ratio_n: 0,
        half_bound_violations: Vec::new(),
        equality_mismatches: Vec::new(),
    };
    for n in 1..=x {
        let largest = denom::largest_prime(sieve, n)?;
        let fails = match largest {
            None => true,
            Some(p) => (p as u128) * (p as u128) <= n as u128,
        };
        if fails {
            if n > 192 {
                check.violations.push(n);
            } else {
                check.small_failures.push(n);
            }
        }
        let expect_equality = n % 2 == 1 && sieve.is_prime(n.div_ceil(2));
        match largest {
            Some(p) => {
                if 2 * p > n + 1 {
                    check.half_bound_violations.push(n);
                }
                if (2 * p == n + 1) != expect_equality {
                    check.equality_mismatches.push(n);
                }
                let ratio = p as f64 / (n as f64).powf(20.0 / 37.0);
                if ratio < check.min_ratio {
                    check.min_ratio = ratio;
                    check.min_ratio_n = n;
                }
            }
            None => {
                if expect_equality {
                    check.equality_mismatches.push(n);
                }
            }
        }
    }
    Ok(check)
}

/// Prime-equality statistics: for primes `q <= x`, how often the denominator
/// stays equal across `q` and across `q - 1`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeEqualitySummary {
    pub x: u64,
    pub primes_checked: u64,
    /// denominators of `q` and `q + 1` equal.
    pub equal_at_q: u64,
    /// denominators of `q - 1` and `q` equal (the construction the equality
    /// argument actually uses).
    pub equal_before_q: u64,
    /// primes `q` with no witness other than `q` itself at `n = q - 1`;
    /// equality before `q` is forced for each of these.
    pub no_witness_count: u64,
}

/// Counts denominator equalities around primes `q <= x` and hard-checks the
/// forcing direction: no witness `p != q` at `n = q - 1` implies equality.
pub fn prime_equality_census(sieve: &PrimeSieve, x: u64) -> Result<PrimeEqualitySummary> {
    validate_range(sieve, 1, x)?;
    let mut summary = PrimeEqualitySummary {
        x,
        primes_checked: 0,
        equal_at_q: 0,
        equal_before_q: 0,
        no_witness_count: 0,
    };
    for &q in sieve.primes() {
        if q > x {
            break;
        }
        summary.primes_checked += 1;
        let set_q = denom::full_set_fast(sieve, q)?;
        let equal_at = set_q == denom::full_set_fast(sieve, q + 1)?;
        summary.equal_at_q += u64::from(equal_at);
        let equal_before = if q == 2 {
            denom::full_set_fast(sieve, 1)? == denom::full_set_fast(sieve, 2)?
        } else {
            denom::full_set_fast(sieve, q - 1)? == set_q
        };
        summary.equal_before_q += u64::from(equal_before);
        if q >= 2 {
            let witnesses = denom::gain_witnesses(sieve, q - 1)?;
            let foreign = witnesses.iter().any(|&p| p != q);
            if !foreign {
                summary.no_witness_count += 1;
                if !equal_before {
                    return Err(Error::verification(format!(
                        "q = {q}: no witness other than q at n = q - 1, yet the denominators of \
                         q - 1 and q differ"
                    )));
                }
            }
        }
    }
    Ok(summary)
}

/// Density of `n <= x` admitting a witness prime (`s_p(n) = p - 1`), with the
/// companion count of witnesses at least `sqrt(log x)`.
#[derive(Debug, Clone, Copy)]
pub struct WitnessDensity {
    pub x: u64,
    pub count: u64,
    pub density: f64,
    pub large_witness_bound: f64,
    pub large_witness_count: u64,
}

pub fn witness_density(sieve: &PrimeSieve, x: u64, opts: &CensusOptions) -> Result<WitnessDensity> {
    let aggregates = run_census(sieve, 1, x, opts, |_| Ok(()))?;
    Ok(WitnessDensity {
        x,
        count: aggregates.count_in_a,
        density: aggregates.count_in_a as f64 / x as f64,
        large_witness_bound: (x as f64).ln().sqrt(),
        large_witness_count: aggregates.count_in_a_large,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn sieve() -> &'static PrimeSieve {
        static SIEVE: OnceLock<PrimeSieve> = OnceLock::new();
        SIEVE.get_or_init(|| PrimeSieve::new(60_000).unwrap())
    }

    fn collect_rows(lo: u64, hi: u64, opts: &CensusOptions) -> Vec<CensusRow> {
        let mut rows = Vec::new();
        run_census(sieve(), lo, hi, opts, |r| {
            rows.push(*r);
            Ok(())
        })
        .unwrap();
        rows
    }

    #[test]
    fn first_rows_by_hand() {
        let rows = collect_rows(1, 10, &CensusOptions::default());
        assert_eq!(rows.len(), 10);
        // n = 5: denominator 6 = 2 * 3 with 2^2 < 5 < 3^2; next is 2
        let r5 = &rows[4];
        assert_eq!((r5.omega_minus, r5.omega_plus), (1, 1));
        assert!(r5.divides);
        assert_eq!(r5.comparison, Ordering::Greater);
        assert_eq!(r5.largest_prime, 3);
        assert!(!r5.in_a);
        // n = 7 -> 8: ratio exactly 2
        let r7 = &rows[6];
        assert!(r7.divides);
        assert_eq!(r7.comparison, Ordering::Greater);
        // n = 1: empty denominators on both sides
        let r1 = &rows[0];
        assert_eq!(r1.largest_prime, 0);
        assert_eq!(r1.comparison, Ordering::Equal);
        assert!(r1.in_a); // witness p = 2: s_2(1) = 1
    }

    #[test]
    fn rows_match_slow_recomputation() {
        let rows = collect_rows(
            1,
            400,
            &CensusOptions {
                block_size: 64,
                ..Default::default()
            },
        );
        for row in rows.iter().step_by(7) {
            let rec = denom::record(sieve(), row.n).unwrap();
            let tr = denom::classify_transition(sieve(), row.n).unwrap();
            assert_eq!(row.omega_minus as u64, rec.omega_minus());
            assert_eq!(row.omega_plus as u64, rec.omega_plus());
            assert_eq!(row.log_pn_plus, rec.log_plus);
            assert_eq!(row.largest_prime, rec.largest_prime.unwrap_or(0));
            assert_eq!(row.divides, tr.divides);
            assert_eq!(row.comparison, tr.comparison);
            assert_eq!(row.in_a, tr.in_a);
        }
    }

    #[test]
    fn ordering_independent_of_workers_and_blocks() {
        let base = collect_rows(1, 2_000, &CensusOptions::default());
        for (block_size, threads) in [(100, 1), (100, 4), (333, 4), (2_000, 2)] {
            let alt = collect_rows(
                1,
                2_000,
                &CensusOptions {
                    block_size,
                    threads,
                    checkpoint: None,
                },
            );
            assert_eq!(base, alt, "block_size = {block_size}, threads = {threads}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = collect_rows(1, 300, &CensusOptions::default());
        for row in &rows {
            let line = row.to_csv_line();
            assert!(!line.contains("-0,"), "negative zero leaked into {line}");
            let parsed = CensusRow::parse_csv_line(&line).unwrap();
            assert_eq!(&parsed, row);
        }
        assert!(CensusRow::parse_csv_line("1,2,3").is_err());
    }

    #[test]
    fn csv_runs_are_deterministic_across_workers() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("a.csv");
        let opts1 = CensusOptions {
            block_size: 500,
            threads: 1,
            checkpoint: None,
        };
        let agg1 = run_census_to_csv(sieve(), 1, 5_000, &opts1, &base).unwrap();

        let alt = dir.path().join("b.csv");
        let opts8 = CensusOptions {
            block_size: 500,
            threads: 8,
            checkpoint: None,
        };
        let agg8 = run_census_to_csv(sieve(), 1, 5_000, &opts8, &alt).unwrap();
        assert_eq!(std::fs::read(&base).unwrap(), std::fs::read(&alt).unwrap());
        assert_eq!(agg1, agg8);
    }

    #[test]
    fn interrupted_run_resumes_byte_identically() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("full.csv");
        run_census_to_csv(
            sieve(),
            1,
            5_000,
            &CensusOptions {
                block_size: 500,
                threads: 1,
                checkpoint: None,
            },
            &base,
        )
        .unwrap();

        let resumed = dir.path().join("resumed.csv");
        let cp = dir.path().join("resumed.checkpoint");
        let opts = CensusOptions {
            block_size: 500,
            threads: 2,
            checkpoint: Some(cp.clone()),
        };
        // die after the first batch, then pick the run back up
        run_census_to_csv_inner(sieve(), 1, 5_000, &opts, &resumed, Some(1)).unwrap();
        assert!(cp.exists());
        let partial = std::fs::read(&resumed).unwrap();
        assert!(partial.len() < std::fs::read(&base).unwrap().len());
        let agg = run_census_to_csv(sieve(), 1, 5_000, &opts, &resumed).unwrap();
        assert_eq!(
            std::fs::read(&base).unwrap(),
            std::fs::read(&resumed).unwrap()
        );

        // and the aggregates survive the round trip
        let fresh = run_census(sieve(), 1, 5_000, &CensusOptions::default(), |_| Ok(())).unwrap();
        assert_eq!(agg, fresh);
    }

    #[test]
    fn checkpoint_mismatch_detected() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("x.csv");
        let cp = dir.path().join("x.checkpoint");
        let opts = CensusOptions {
            block_size: 100,
            threads: 1,
            checkpoint: Some(cp.clone()),
        };
        run_census_to_csv(sieve(), 1, 1_000, &opts, &out).unwrap();
        let err = run_census_to_csv(sieve(), 1, 2_000, &opts, &out).unwrap_err();
        assert!(matches!(err, Error::CheckpointMismatch { .. }), "got {err}");
        // an unrecognizable checkpoint is refused too
        std::fs::write(&cp, "not a checkpoint\n").unwrap();
        let err = run_census_to_csv(sieve(), 1, 1_000, &opts, &out).unwrap_err();
        assert!(matches!(err, Error::CheckpointMismatch { .. }), "got {err}");
        // as is a valid checkpoint whose output file has been truncated
        std::fs::remove_file(&cp).unwrap();
        run_census_to_csv(sieve(), 1, 1_000, &opts, &out).unwrap();
        std::fs::write(&out, "n,short\n").unwrap();
        let err = run_census_to_csv(sieve(), 1, 1_000, &opts, &out).unwrap_err();
        assert!(matches!(err, Error::CheckpointMismatch { .. }), "got {err}");
    }

    #[test]
    fn invalid_ranges_rejected() {
        let err = run_census(sieve(), 0, 10, &CensusOptions::default(), |_| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        let err = run_census(sieve(), 5, 4, &CensusOptions::default(), |_| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        let err = asymptotic_errors(sieve(), &[1]).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn construction_bound_by_hand() {
        // x = 100: primes 11..47, sum of floor(101/p) - 1 = 33
        assert_eq!(construction_lower_bound(sieve(), 100).unwrap(), 33);
        assert_eq!(construction_lower_bound(sieve(), 3).unwrap(), 0);
    }

    #[test]
    fn transition_summary_small() {
        let s = transition_summary(sieve(), 2_000, &CensusOptions::default()).unwrap();
        assert_eq!(s.aggregates.rows, 2_000);
        assert!(s.construction_lower_bound <= s.aggregates.count_divides_and_greater);
        assert!(s.strict_decrease_freq() > 0.5 && s.strict_decrease_freq() < 0.85);
        assert!(!s.asymptotic_errors.is_empty());
    }

    #[test]
    fn gained_primes_have_witness_digit_sum() {
        for n in 1..=3_000u64 {
            let tr = denom::classify_transition(sieve(), n).unwrap();
            for &p in &tr.gained_primes {
                assert_eq!(
                    crate::digits::digit_sum(n, p).unwrap(),
                    p - 1,
                    "gained prime {p} at n = {n}"
                );
            }
            assert!(tr
                .gained_primes
                .iter()
                .all(|p| tr.case1_witnesses.contains(p)));
        }
    }

    #[test]
    fn conjecture1_small() {
        let c = conjecture1_check(sieve(), 3_000).unwrap();
        assert!(c.violations.is_empty());
        assert!(!c.small_failures.is_empty());
        assert!(c.small_failures.contains(&1));
        assert!(c.small_failures.contains(&192));
        assert!(c.half_bound_violations.is_empty());
        assert!(c.equality_mismatches.is_empty());
        assert!(c.min_ratio > 0.0 && c.min_ratio.is_finite());
        // n = 9 is fine: P = 5, 25 > 9
        assert!(!c.small_failures.contains(&9));
    }

    #[test]
    fn prime_equality_small() {
        let s = prime_equality_census(sieve(), 3_000).unwrap();
        assert!(s.primes_checked > 0);
        // the forced-equality primes are a subset of the observed equalities
        assert!(s.no_witness_count <= s.equal_before_q);
        // q = 5 is an inequality (1 vs 6) with witness p = 2
        // q = 3 likewise; both counted, neither forced
        assert!(s.equal_before_q < s.primes_checked);
    }

    #[test]
    fn witness_density_contains_powers_of_two() {
        let d = witness_density(sieve(), 10_000, &CensusOptions::default()).unwrap();
        // every power of two has witness 2, and 13 powers are <= 10^4
        assert!(d.count >= 13);
        assert!(d.density >= 13.0 / 10_000.0);
        assert!(d.large_witness_count <= d.count);
    }

    #[test]
    fn asymptotic_error_rows() {
        let rows = asymptotic_errors(sieve(), &[10_000]).unwrap();
        let row = &rows[0];
        // n E_1(log 100) = 18.2974...; the count is within 0.5 sqrt(n)
        assert!((row.omega_expected - 18.2974).abs() < 0.001);
        assert!(row.omega_err <= 0.5);
        assert!(row.log_err <= 0.5);
    }
}
