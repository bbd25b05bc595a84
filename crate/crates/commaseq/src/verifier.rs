//! Finiteness verification: exhaustively walk every path of the reduced
//! digraph and check that no vertex is missed.
//!
//! Vertices are classes `(d, u, κ)` with `κ` read mod `L(b)`. Paths start at
//! the in-degree-0 vertices `(d, 0, κ)` with `d ≥ 2` and die at landmines.
//! Every vertex with `d = 1` lies on exactly one path when the graph is
//! acyclic (in- and out-degree are at most 1), so the base is finite exactly
//! when the paths jointly visit all `valid_u_count(b) · L(b)` of them.
//!
//! The transform for a crossing depends only on `(d, u, κ mod l(d, u))`, so
//! step results are cached per cycle rather than per vertex. Shards
//! `(d, κ-range)` are embarrassingly independent; counts combine by plain
//! summation, so verdicts do not depend on worker count or scheduling.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basekit::{mod_pow, power_period, Radix};
use crate::graph::{big_l, close_gap, cycle, minimal_u_set, shifted_exponent, CycleTable};
use crate::seq::is_mine_offset;
use crate::{Error, Result};

/// A vertex class of the reduced digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexClass {
    pub d: u32,
    pub u: u32,
    pub kappa: u64,
}

/// One fully walked path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRecord {
    pub start: VertexClass,
    /// Vertices on the path, counting the start and the terminal landmine.
    pub length: u64,
    /// Vertices visited with `d = 1`, counting the terminal landmine. This is
    /// the number of danger intervals the underlying sequences pass through.
    pub d1_visits: u64,
    pub terminal_mine: u32,
}

/// Outcome of verifying one base.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub base: u32,
    #[serde(rename = "L")]
    pub l: u64,
    pub valid_u: u64,
    pub expected_d1: u64,
    pub observed_d1: u64,
    pub finite: bool,
    pub paths_walked: u64,
    pub wall_seconds: f64,
}

impl Verdict {
    /// Single-line JSON, fields in declaration order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    /// Copy with the timing field zeroed, for reproducibility comparisons.
    pub fn with_wall_zeroed(&self) -> Verdict {
        Verdict {
            wall_seconds: 0.0,
            ..self.clone()
        }
    }
}

/// Progress of an incomplete (sharded) verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Progress {
    pub base: u32,
    #[serde(rename = "L")]
    pub l: u64,
    /// κ-slots covered so far, summed over start digits.
    pub covered: u64,
    /// Total κ-slots: `(b - 2) · L`.
    pub total: u64,
    pub observed_d1: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyOutcome {
    Complete(Verdict),
    Partial(Progress),
}

/// How step results are memoized during walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CacheMode {
    /// Recompute every step from scratch.
    Off,
    /// One lazily filled cache per worker; no synchronization.
    #[default]
    PerWorker,
    /// One read-only table precomputed before the workers start.
    Shared,
}

impl std::str::FromStr for CacheMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<CacheMode, String> {
        match s {
            "off" => Ok(CacheMode::Off),
            "per-worker" => Ok(CacheMode::PerWorker),
            "shared" => Ok(CacheMode::Shared),
            other => Err(format!("unknown cache mode `{other}`")),
        }
    }
}

/// A requested shard: start digit plus a κ-range (`hi` exclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardRequest {
    pub d: u32,
    pub kappa_lo: u64,
    pub kappa_hi: u64,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub cache: CacheMode,
    pub checkpoint: Option<PathBuf>,
    /// Maximum κ-slots per shard when auto-chunking.
    pub kappa_chunk: u64,
    /// Restrict this run to the given shards (cluster use); `None` runs all.
    pub shards: Option<Vec<ShardRequest>>,
    /// Stop after this many pending shards (testing and cluster splitting).
    pub shard_limit: Option<usize>,
    /// Override the per-path step bound.
    pub safety_bound: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            workers: 0,
            cache: CacheMode::default(),
            checkpoint: None,
            kappa_chunk: 1 << 16,
            shards: None,
            shard_limit: None,
            safety_bound: None,
        }
    }
}

struct PairInfo {
    cycle: CycleTable,
    k0: u32,
    l: u64,
}

/// Per-base constants: every cycle table and power period, plus `L(b)`.
/// Immutable after construction and shared by all workers.
pub struct BaseTables {
    b: Radix,
    l_wrap: u64,
    valid_u: u64,
    /// Dense by `d · b² + u`; populated for `u ∈ U(b, d) ∪ {0}`.
    pairs: Vec<Option<PairInfo>>,
    /// Σ_d |U(b, d)|.
    arrival_vertices_per_kappa: u64,
    safety_bound: u64,
}

impl BaseTables {
    pub fn new(b: Radix) -> Result<BaseTables> {
        let base = b.get();
        assert!(base >= 3, "verification needs base >= 3");
        // The pair table is dense in (d, u): b³ slots.
        assert!(base <= 128, "verification tables scale as b^3; base capped at 128");
        let l_wrap = big_l(b)
            .to_u64()
            .ok_or(Error::PeriodOverflow { base })?;
        let bsq = b.square() as usize;
        let mut pairs: Vec<Option<PairInfo>> = Vec::with_capacity(base as usize * bsq);
        pairs.resize_with(base as usize * bsq, || None);
        let mut arrivals = 0u64;
        for d in 1..base {
            let uset = minimal_u_set(b, d)?;
            arrivals += uset.len() as u64;
            for u in uset.members().iter().copied().chain([0]) {
                let table = cycle(b, d, u);
                let period = power_period(b, table.total)?;
                pairs[d as usize * bsq + u as usize] = Some(PairInfo {
                    cycle: table,
                    k0: period.k0,
                    l: period.l,
                });
            }
        }
        let safety_bound = l_wrap
            .checked_mul(arrivals)
            .and_then(|v| v.checked_add(1))
            .ok_or(Error::PeriodOverflow { base })?;
        Ok(BaseTables {
            b,
            l_wrap,
            valid_u: crate::graph::valid_u_count(b),
            pairs,
            arrival_vertices_per_kappa: arrivals,
            safety_bound,
        })
    }

    pub fn base(&self) -> Radix {
        self.b
    }

    /// `L(b)` as a machine word.
    pub fn l_wrap(&self) -> u64 {
        self.l_wrap
    }

    pub fn valid_u(&self) -> u64 {
        self.valid_u
    }

    /// Arrival vertices per κ-slot: Σ_d |U(b, d)|.
    pub fn arrivals_per_kappa(&self) -> u64 {
        self.arrival_vertices_per_kappa
    }

    fn pair(&self, d: u32, u: u32) -> Result<&PairInfo> {
        self.pairs[d as usize * self.b.square() as usize + u as usize]
            .as_ref()
            .ok_or(Error::InvalidPoint {
                base: self.b.get(),
                d,
                u,
                k: 0,
                reason: "offset outside the minimal set (internal consistency)",
            })
    }

    /// One crossing computed from scratch: gap reduction plus manual walk.
    fn step_raw(&self, d: u32, u: u32, kappa: u64) -> Result<u32> {
        let info = self.pair(d, u)?;
        let exponent = shifted_exponent(kappa, info.k0, info.l);
        let total = info.cycle.total;
        let gap = (mod_pow(u64::from(self.b.get()), exponent, total)? + u64::from(u)) % total;
        Ok(close_gap(self.b, d, &info.cycle, gap))
    }

    /// Fresh cache handle for this table set.
    pub fn new_cache(&self, mode: CacheMode) -> StepCache {
        match mode {
            CacheMode::Off => StepCache(CacheInner::Off),
            CacheMode::PerWorker => {
                StepCache(CacheInner::Local(vec![Vec::new(); self.pairs.len()]))
            }
            CacheMode::Shared => StepCache(CacheInner::Shared(Arc::new(self.build_full_table()))),
        }
    }

    /// Precompute every `(d, u, κ mod l)` step result.
    fn build_full_table(&self) -> Vec<Vec<u32>> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(idx, slot)| match slot {
                None => Vec::new(),
                Some(info) => {
                    let bsq = self.b.square() as usize;
                    let (d, u) = ((idx / bsq) as u32, (idx % bsq) as u32);
                    (0..info.l)
                        .map(|r| self.step_raw(d, u, r).expect("pair exists"))
                        .collect()
                }
            })
            .collect()
    }

    /// Walk one full path from an in-degree-0 start `(d, 0, κ)`.
    pub fn walk_path(&self, start: VertexClass, cache: &mut StepCache) -> Result<PathRecord> {
        let base = self.b.get();
        assert!(start.u == 0 && start.d >= 2 && start.d < base, "not a start vertex");
        let mut d = start.d;
        let mut u = start.u;
        let mut kappa = start.kappa % self.l_wrap;
        let mut length = 1u64;
        let mut d1_visits = 0u64;
        let mut steps = 0u64;
        loop {
            steps += 1;
            if steps > self.safety_bound {
                return Err(Error::SafetyBound {
                    d: start.d,
                    kappa: start.kappa,
                    bound: self.safety_bound,
                });
            }
            let u_next = cache.step(self, d, u, kappa)?;
            length += 1;
            if d == base - 1 {
                kappa = (kappa + 1) % self.l_wrap;
                d1_visits += 1;
                if is_mine_offset(self.b, u_next) {
                    return Ok(PathRecord {
                        start,
                        length,
                        d1_visits,
                        terminal_mine: u_next,
                    });
                }
                d = 1;
            } else {
                d += 1;
            }
            u = u_next;
        }
    }
}

enum CacheInner {
    Off,
    Local(Vec<Vec<u32>>),
    Shared(Arc<Vec<Vec<u32>>>),
}

/// Memoizes crossing results keyed by `(d, u, κ mod l(d, u))`.
pub struct StepCache(CacheInner);

impl StepCache {
    fn step(&mut self, tables: &BaseTables, d: u32, u: u32, kappa: u64) -> Result<u32> {
        let idx = d as usize * tables.b.square() as usize + u as usize;
        match &mut self.0 {
            CacheInner::Off => tables.step_raw(d, u, kappa),
            CacheInner::Local(slots) => {
                let l = tables.pair(d, u)?.l;
                let slot = &mut slots[idx];
                if slot.is_empty() {
                    slot.resize(l as usize, u32::MAX);
                }
                let r = (kappa % l) as usize;
                if slot[r] != u32::MAX {
                    return Ok(slot[r]);
                }
                let computed = tables.step_raw(d, u, kappa)?;
                slot[r] = computed;
                Ok(computed)
            }
            CacheInner::Shared(table) => {
                let l = tables.pair(d, u)?.l;
                Ok(table[idx][(kappa % l) as usize])
            }
        }
    }

    fn fork(&self, tables: &BaseTables, mode: CacheMode) -> StepCache {
        match &self.0 {
            CacheInner::Shared(table) => StepCache(CacheInner::Shared(Arc::clone(table))),
            _ => tables.new_cache(mode),
        }
    }
}

/// Convenience wrapper: walk one path with a throwaway cache.
pub fn walk_path(b: Radix, start: VertexClass) -> Result<PathRecord> {
    let tables = BaseTables::new(b)?;
    let mut cache = tables.new_cache(CacheMode::PerWorker);
    tables.walk_path(start, &mut cache)
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

const CHECKPOINT_MAGIC: &str = "commaseq checkpoint v1";

/// A completed shard: κ in `[kappa_lo, kappa_hi)` for start digit `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardResult {
    pub d: u32,
    pub kappa_lo: u64,
    pub kappa_hi: u64,
    pub d1_count: u64,
}

/// Plain-text, merge-friendly record of completed shards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub base: u32,
    pub l: u64,
    pub shards: Vec<ShardResult>,
}

pub fn checkpoint_save(cp: &Checkpoint, path: &Path) -> Result<()> {
    let mut text = String::new();
    text.push_str(CHECKPOINT_MAGIC);
    text.push('\n');
    text.push_str(&format!("base {}\n", cp.base));
    text.push_str(&format!("L {}\n", cp.l));
    for s in &cp.shards {
        text.push_str(&format!("shard {} {} {} {}\n", s.d, s.kappa_lo, s.kappa_hi, s.d1_count));
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_load(path: &Path) -> Result<Checkpoint> {
    let corrupt = |detail: String| Error::Checkpoint {
        path: path.display().to_string(),
        detail,
    };
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, line)) if line.trim() == CHECKPOINT_MAGIC => {}
        other => {
            return Err(corrupt(format!(
                "bad header {:?}, expected {CHECKPOINT_MAGIC:?}",
                other.map(|(_, l)| l)
            )))
        }
    }
    let mut base = None;
    let mut l = None;
    let mut shards = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| corrupt(format!("line {}: {e}", lineno + 1)))
        };
        match fields.first().copied() {
            Some("base") if fields.len() == 2 => base = Some(parse(fields[1])? as u32),
            Some("L") if fields.len() == 2 => l = Some(parse(fields[1])?),
            Some("shard") if fields.len() == 5 => {
                let s = ShardResult {
                    d: parse(fields[1])? as u32,
                    kappa_lo: parse(fields[2])?,
                    kappa_hi: parse(fields[3])?,
                    d1_count: parse(fields[4])?,
                };
                if s.kappa_lo >= s.kappa_hi {
                    return Err(corrupt(format!(
                        "line {}: shard d={} range [{}, {}) is empty",
                        lineno + 1,
                        s.d,
                        s.kappa_lo,
                        s.kappa_hi
                    )));
                }
                shards.push(s);
            }
            _ => return Err(corrupt(format!("line {}: unrecognized {line:?}", lineno + 1))),
        }
    }
    Ok(Checkpoint {
        base: base.ok_or_else(|| corrupt("missing base line".into()))?,
        l: l.ok_or_else(|| corrupt("missing L line".into()))?,
        shards,
    })
}

// ---------------------------------------------------------------------------
// Interval bookkeeping for shard planning
// ---------------------------------------------------------------------------

type Interval = (u64, u64);

/// Sort, reject overlaps, and merge adjacent intervals.
fn normalize(mut xs: Vec<Interval>) -> std::result::Result<Vec<Interval>, String> {
    xs.sort_unstable();
    let mut out: Vec<Interval> = Vec::new();
    for (lo, hi) in xs {
        if let Some(last) = out.last_mut() {
            if lo < last.1 {
                return Err(format!("overlapping ranges [{}, {}) and [{lo}, {hi})", last.0, last.1));
            }
            if lo == last.1 {
                last.1 = hi;
                continue;
            }
        }
        out.push((lo, hi));
    }
    Ok(out)
}

/// `universe` minus `done`; both normalized.
fn subtract(universe: &[Interval], done: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for &(ulo, uhi) in universe {
        let mut cursor = ulo;
        for &(dlo, dhi) in done {
            if dhi <= cursor || dlo >= uhi {
                continue;
            }
            if dlo > cursor {
                out.push((cursor, dlo));
            }
            cursor = cursor.max(dhi);
        }
        if cursor < uhi {
            out.push((cursor, uhi));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// verify_base
// ---------------------------------------------------------------------------

/// Prove (or refute) that every comma sequence in base `b` is finite, by
/// walking all `(b - 2) · L(b)` paths and comparing the number of visited
/// `d = 1` vertices against `valid_u_count(b) · L(b)`.
pub fn verify_base(b: Radix, options: &VerifyOptions) -> Result<VerifyOutcome> {
    let started = Instant::now();
    let mut tables = BaseTables::new(b)?;
    if let Some(bound) = options.safety_bound {
        tables.safety_bound = bound;
    }
    let tables = &tables;
    let l = tables.l_wrap();
    let base = b.get();

    // Previously completed work.
    let mut done_by_d: BTreeMap<u32, Vec<Interval>> = BTreeMap::new();
    let mut known_shards: Vec<ShardResult> = Vec::new();
    if let Some(path) = options.checkpoint.as_deref() {
        if path.exists() {
            let cp = checkpoint_load(path)?;
            if cp.base != base {
                return Err(Error::CheckpointBase { expected: base, found: cp.base });
            }
            if cp.l != l {
                return Err(Error::Checkpoint {
                    path: path.display().to_string(),
                    detail: format!("L mismatch: file has {}, computed {}", cp.l, l),
                });
            }
            for s in &cp.shards {
                if s.d < 2 || s.d >= base || s.kappa_hi > l {
                    return Err(Error::Checkpoint {
                        path: path.display().to_string(),
                        detail: format!("shard d={} [{}, {}) out of range", s.d, s.kappa_lo, s.kappa_hi),
                    });
                }
                done_by_d.entry(s.d).or_default().push((s.kappa_lo, s.kappa_hi));
            }
            known_shards = cp.shards;
        }
    }
    for (d, ranges) in &mut done_by_d {
        *ranges = normalize(std::mem::take(ranges)).map_err(|detail| Error::Checkpoint {
            path: options
                .checkpoint
                .as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            detail: format!("d={d}: {detail}"),
        })?;
    }

    // Requested universe per digit.
    let mut universe_by_d: BTreeMap<u32, Vec<Interval>> = BTreeMap::new();
    match &options.shards {
        None => {
            for d in 2..base {
                universe_by_d.insert(d, vec![(0, l)]);
            }
        }
        Some(reqs) => {
            let bad_request = Error::ShardRequest;
            for r in reqs {
                if r.d < 2 || r.d >= base {
                    return Err(bad_request(format!("start digit {} not in 2..{base}", r.d)));
                }
                if r.kappa_lo >= r.kappa_hi || r.kappa_hi > l {
                    return Err(bad_request(format!(
                        "range [{}, {}) not within [0, {l})",
                        r.kappa_lo, r.kappa_hi
                    )));
                }
                universe_by_d.entry(r.d).or_default().push((r.kappa_lo, r.kappa_hi));
            }
            for (&d, ranges) in universe_by_d.iter_mut() {
                *ranges = normalize(std::mem::take(ranges))
                    .map_err(|detail| bad_request(format!("d={d}: {detail}")))?;
            }
        }
    }

    // Pending work, chunked.
    let empty: Vec<Interval> = Vec::new();
    let mut pending: Vec<(u32, u64, u64)> = Vec::new();
    for (&d, universe) in &universe_by_d {
        let done = done_by_d.get(&d).unwrap_or(&empty);
        for (lo, hi) in subtract(universe, done) {
            let mut cursor = lo;
            while cursor < hi {
                let end = hi.min(cursor + options.kappa_chunk.max(1));
                pending.push((d, cursor, end));
                cursor = end;
            }
        }
    }
    if let Some(limit) = options.shard_limit {
        pending.truncate(limit);
    }

    // Walk pending shards in parallel.
    let workers = if options.workers == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        options.workers
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let proto = tables.new_cache(options.cache);
    let new_results: Vec<Result<ShardResult>> = pool.install(|| {
        pending
            .par_iter()
            .map_init(
                || proto.fork(tables, options.cache),
                |cache, &(d, lo, hi)| {
                    let mut d1 = 0u64;
                    for kappa in lo..hi {
                        let record =
                            tables.walk_path(VertexClass { d, u: 0, kappa }, cache)?;
                        d1 += record.d1_visits;
                    }
                    Ok(ShardResult { d, kappa_lo: lo, kappa_hi: hi, d1_count: d1 })
                },
            )
            .collect()
    });
    for r in &new_results {
        if let Err(e) = r {
            return Err(clone_error(e));
        }
    }
    let new_shards: Vec<ShardResult> = new_results.into_iter().map(|r| r.unwrap()).collect();
    known_shards.extend(&new_shards);

    if let Some(path) = options.checkpoint.as_deref() {
        checkpoint_save(&Checkpoint { base, l, shards: known_shards.clone() }, path)?;
    }

    // Coverage check over the full universe (not just the requested one).
    let mut covered_by_d: BTreeMap<u32, Vec<Interval>> = BTreeMap::new();
    for s in &known_shards {
        covered_by_d.entry(s.d).or_default().push((s.kappa_lo, s.kappa_hi));
    }
    let mut covered = 0u64;
    let mut complete = true;
    for d in 2..base {
        let ranges = normalize(covered_by_d.remove(&d).unwrap_or_default())
            .expect("shard results cannot overlap");
        covered += ranges.iter().map(|(lo, hi)| hi - lo).sum::<u64>();
        if ranges != vec![(0, l)] {
            complete = false;
        }
    }
    let observed_d1: u64 = known_shards.iter().map(|s| s.d1_count).sum();

    if !complete {
        return Ok(VerifyOutcome::Partial(Progress {
            base,
            l,
            covered,
            total: u64::from(base - 2) * l,
            observed_d1,
        }));
    }
    let expected_d1 = tables
        .valid_u()
        .checked_mul(l)
        .ok_or(Error::PeriodOverflow { base })?;
    // In-degree <= 1 forbids double visits; exceeding the expectation means
    // a bug, not a cycle.
    if observed_d1 > expected_d1 {
        return Err(Error::Inconsistent(format!(
            "observed {observed_d1} d=1 visits exceeds the possible {expected_d1} \
             (corrupt checkpoint or implementation bug)"
        )));
    }
    Ok(VerifyOutcome::Complete(Verdict {
        base,
        l,
        valid_u: tables.valid_u(),
        expected_d1,
        observed_d1,
        finite: observed_d1 == expected_d1,
        paths_walked: covered,
        wall_seconds: started.elapsed().as_secs_f64(),
    }))
}

fn clone_error(e: &Error) -> Error {
    // Errors out of parallel sections get rebuilt; only the variants a walk
    // can produce matter here.
    match e {
        Error::SafetyBound { d, kappa, bound } => Error::SafetyBound {
            d: *d,
            kappa: *kappa,
            bound: *bound,
        },
        Error::InvalidPoint { base, d, u, k, reason } => Error::InvalidPoint {
            base: *base,
            d: *d,
            u: *u,
            k: *k,
            reason,
        },
        other => Error::Inconsistent(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Path statistics
// ---------------------------------------------------------------------------

/// Path-length statistics for the graph model. `mean`, `variance`, `rate`,
/// and `histogram` describe the number of danger intervals per path (the
/// `d = 1` vertices it visits, terminal landmine included).
#[derive(Debug, Clone, Serialize)]
pub struct PathStats {
    pub base: u32,
    #[serde(rename = "L")]
    pub l: u64,
    /// Total paths in the graph: `(b - 2) · L`.
    pub num_paths: u64,
    /// Paths actually walked (equals `num_paths` when exhaustive).
    pub walked: u64,
    pub sampled: bool,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    /// Exponential fit rate: reciprocal of the mean.
    pub rate: f64,
    /// `(intervals, path count)` pairs, ascending.
    pub histogram: Vec<(u64, u64)>,
    /// Mean vertices per path, all digits counted.
    pub mean_vertices: f64,
    /// `|V|` = `L · Σ_d |U(b, d)|`, plus the start vertices when
    /// `include_starts` is set.
    pub vertex_count: u64,
    pub include_starts: bool,
    /// `(num_paths / |V|) · E[C(|P|, 2)]`.
    pub expected_intervals: f64,
    /// Conjectured mean: `b/2 + 1`.
    pub model_mean: f64,
    /// Geometric-model mean: `2b / ln(2b)`.
    pub geometric_mean: f64,
}

/// Walk sampled (or all) start vertices and summarize path lengths.
pub fn path_stats(
    b: Radix,
    sample: Option<u64>,
    seed: u64,
    include_starts: bool,
) -> Result<PathStats> {
    if sample == Some(0) {
        return Err(Error::EmptySample);
    }
    let tables = BaseTables::new(b)?;
    let base = b.get();
    let l = tables.l_wrap();
    let num_paths = u64::from(base - 2) * l;
    let mut cache = tables.new_cache(CacheMode::PerWorker);

    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut walked = 0u64;
    let mut sum = 0u64;
    let mut sum_sq = 0u128;
    let mut sum_choose2 = 0u128;
    let mut sum_vertices = 0u64;
    let mut record = |r: &PathRecord| {
        walked += 1;
        sum += r.d1_visits;
        sum_sq += u128::from(r.d1_visits) * u128::from(r.d1_visits);
        sum_choose2 += u128::from(r.d1_visits) * u128::from(r.d1_visits.saturating_sub(1)) / 2;
        sum_vertices += r.length;
        *histogram.entry(r.d1_visits).or_insert(0) += 1;
    };

    match sample {
        None => {
            for d in 2..base {
                for kappa in 0..l {
                    record(&tables.walk_path(VertexClass { d, u: 0, kappa }, &mut cache)?);
                }
            }
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let d = rng.gen_range(2..base);
                let kappa = rng.gen_range(0..l);
                record(&tables.walk_path(VertexClass { d, u: 0, kappa }, &mut cache)?);
            }
        }
    }

    let n = walked as f64;
    let mean = sum as f64 / n;
    let variance = sum_sq as f64 / n - mean * mean;
    let mut vertex_count = l
        .checked_mul(tables.arrivals_per_kappa())
        .ok_or(Error::PeriodOverflow { base })?;
    if include_starts {
        vertex_count += num_paths;
    }
    Ok(PathStats {
        base,
        l,
        num_paths,
        walked,
        sampled: sample.is_some(),
        seed,
        mean,
        variance,
        rate: 1.0 / mean,
        histogram: histogram.into_iter().collect(),
        mean_vertices: sum_vertices as f64 / n,
        vertex_count,
        include_starts,
        expected_intervals: num_paths as f64 / vertex_count as f64 * (sum_choose2 as f64 / n),
        model_mean: f64::from(base) / 2.0 + 1.0,
        geometric_mean: 2.0 * f64::from(base) / (2.0 * f64::from(base)).ln(),
    })
}
