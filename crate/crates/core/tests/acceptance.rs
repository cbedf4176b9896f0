//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line
//! each. The process fails if any criterion outside `KNOWN_UNATTAINABLE`
//! fails; those are still run in full and still reported as FAIL.
//!
//! Run alone with `cargo test -p chunklz --test acceptance`.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chunklz::corpus::{generate, GeneratorSpec};
use chunklz::decoder::{chunk_tokens, decompress_file};
use chunklz::encoder::Token;
use chunklz::format::{read_file, write_file, Container};
use chunklz::matcher::ComparisonStats;
use chunklz::oracle::{optimal_parse, sequential_lzss};
use chunklz::params::{INTERVALS, SYMBOL_WIDTHS};
use chunklz::pipeline::compress_probed;
use chunklz::scan::{local_exclusive_scan_observed, SweepTrace};
use chunklz::tuner::{pilot, TunerConfig};
use chunklz::{compress, Params, RawParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned sizes and tolerances.
const FUZZ_INPUTS: usize = 10_000;
const FUZZ_MAX_BYTES: usize = 1 << 20;
const FUZZ_BUDGET: Duration = Duration::from_secs(600);
const FUZZ_WINDOWS: [usize; 4] = [32, 64, 128, 255];
const GRID_CHUNKS: [usize; 4] = [2048, 4096, 8192, 16384];
const ORACLE_INPUTS: usize = 1_000;
const SCAN_ARRAYS: usize = 10_000;
const SCAN_MAX_LOG2: u32 = 14;
const OPTIMAL_INPUTS: usize = 1_000;
const OPTIMAL_MAX_SYMBOLS: usize = 64;
const TREND_CORPUS_BYTES: usize = 16 << 20;
const TREND_SEED: u64 = 42;
const TREND_MEAN_RUN: f64 = 64.0;
const TREND_ALPHABET: u16 = 4;
const WINDOW_GAIN_FLOOR: f64 = 1.1;
const INTERVAL_MEAN_RUN: f64 = 4096.0;
const INTERVAL_RATIO_FLOOR: f64 = 0.9;
const SCALING_CORPUS_BYTES: usize = 64 << 20;
const SCALING_THREADS: [usize; 4] = [1, 2, 4, 8];
const SCALING_EFFICIENCY: f64 = 0.5;
const TUNER_FIELD_BYTES: usize = 2 << 20;
const TUNER_THRESHOLD: f64 = 1.5;
const WORK_BOUND_FACTOR: usize = 2;

/// Criteria that cannot hold for a faithful implementation. Greedy parsing
/// of a constant run with 1-byte symbols is provably suboptimal: for 8 equal
/// bytes greedy emits 3 literals, a length-3 pointer and 2 literals (7
/// bytes) while 4 literals and one length-4 pointer take 6.
const KNOWN_UNATTAINABLE: [u32; 1] = [5];

fn params(s: usize, w: usize, c: usize, i: usize) -> Params {
    RawParams {
        symbol_width: s,
        window: w,
        chunk_size: c,
        interval: i,
        ..RawParams::default()
    }
    .validate()
    .expect("acceptance parameters are legal")
}

fn ratio(data: &[u8], params: &Params) -> f64 {
    let out = compress(data, params, 0).expect("compression succeeds");
    data.len() as f64 / out.len() as f64
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

// ---- fuzz corpus shared by the roundtrip, pointer and work-bound checks ----

/// Repeats a random pattern whose period sits on or near the window edge,
/// the 255-symbol length cap or a symbol misalignment.
fn periodic(rng: &mut ChaCha8Rng, size: usize, p: &Params) -> Vec<u8> {
    let s = p.symbol_width();
    let w = p.window();
    let candidates = [
        1,
        s,
        w * s,
        (w - 1) * s,
        (w + 1) * s,
        255 * s,
        256 * s,
        s * rng.random_range(1..=300),
        rng.random_range(1..=1024),
    ];
    let period = candidates[rng.random_range(0..candidates.len())];
    let alphabet: u8 = if rng.random_bool(0.5) { 2 } else { 255 };
    let pattern: Vec<u8> = (0..period)
        .map(|_| rng.random_range(0..=alphabet))
        .collect();
    let mut data: Vec<u8> = pattern.iter().copied().cycle().take(size).collect();
    if !data.is_empty() && rng.random_bool(0.5) {
        for _ in 0..size / 1000 + 1 {
            let at = rng.random_range(0..data.len());
            data[at] ^= 1 << rng.random_range(0..8);
        }
    }
    data
}

fn fuzz_input(rng: &mut ChaCha8Rng, kind: usize, size: usize, p: &Params) -> Vec<u8> {
    if size == 0 {
        return Vec::new();
    }
    let seed = rng.random();
    let spec = match kind {
        0 => GeneratorSpec::uniform(size, seed),
        1 => {
            let mean_run = 2f64.powf(rng.random_range(0.0..11.0));
            GeneratorSpec::runlen(size, seed, mean_run, rng.random_range(2..=256))
        }
        2 => {
            let width = SYMBOL_WIDTHS[rng.random_range(0..SYMBOL_WIDTHS.len())];
            GeneratorSpec::quantlike(size, seed, rng.random_range(0.5..0.99), width)
        }
        _ => return periodic(rng, size, p),
    };
    generate(&spec).expect("generator spec is valid")
}

fn fuzz_size(rng: &mut ChaCha8Rng, index: usize) -> usize {
    match index % 50 {
        0 => 0,
        1 => FUZZ_MAX_BYTES,
        _ => {
            let log = rng.random_range(0.0..(FUZZ_MAX_BYTES as f64).log2());
            (2f64.powf(log) as usize).min(FUZZ_MAX_BYTES)
        }
    }
}

#[derive(Default)]
struct PointerAudit {
    pointers: u64,
    violations: u64,
    first: Option<String>,
}

impl PointerAudit {
    fn violation(&mut self, what: String) {
        self.violations += 1;
        self.first.get_or_insert(what);
    }

    fn check(&mut self, container: &Container, p: &Params) {
        let cap = p.window().min(255);
        for k in 0..container.num_chunks() {
            let chunk_len = container.header.chunk_len(k);
            let tokens = match chunk_tokens(container, k) {
                Ok(t) => t,
                Err(e) => {
                    self.violation(format!("chunk {k} does not parse: {e}"));
                    continue;
                }
            };
            let mut pos = 0;
            for t in tokens {
                if let Token::Pointer { length, offset } = t {
                    self.pointers += 1;
                    let (l, o) = (length as usize, offset as usize);
                    let ok = p.min_match() <= l && l <= o && o <= cap && o <= pos;
                    if !ok || pos + l > chunk_len {
                        self.violation(format!(
                            "chunk {k} pos {pos}: length {l} offset {o} (chunk {chunk_len})"
                        ));
                    }
                }
                pos += t.span();
            }
        }
    }
}

struct FuzzCampaign {
    inputs: usize,
    configs: usize,
    bytes: u64,
    mismatches: Vec<String>,
    audit: PointerAudit,
    /// Largest per-position comparison count relative to the bound.
    worst_work: (usize, usize),
    work_violations: u64,
    elapsed: Duration,
}

fn run_fuzz() -> FuzzCampaign {
    let mut grid = Vec::new();
    for &s in &SYMBOL_WIDTHS {
        for &w in &FUZZ_WINDOWS {
            for &c in &GRID_CHUNKS {
                for &i in &INTERVALS {
                    grid.push(params(s, w, c, i));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut campaign = FuzzCampaign {
        inputs: 0,
        configs: grid.len(),
        bytes: 0,
        mismatches: Vec::new(),
        audit: PointerAudit::default(),
        worst_work: (0, 1),
        work_violations: 0,
        elapsed: Duration::ZERO,
    };
    let start = Instant::now();
    for index in 0..FUZZ_INPUTS {
        let p = &grid[index % grid.len()];
        let size = fuzz_size(&mut rng, index);
        let data = fuzz_input(&mut rng, index / grid.len() % 4, size, p);

        let (containers, stats) = compress_probed::<ComparisonStats>(&data, p, 0)
            .unwrap_or_else(|e| panic!("input {index}: compression failed: {e}"));
        let file = write_file(&containers).expect("containers serialize");
        match decompress_file(&file, 0) {
            Ok(back) if back == data => {}
            Ok(_) => campaign
                .mismatches
                .push(format!("input {index}: output differs")),
            Err(e) => campaign.mismatches.push(format!("input {index}: {e}")),
        }

        for c in read_file(&file).expect("file parses") {
            campaign.audit.check(&c, p);
        }

        let bound = WORK_BOUND_FACTOR * p.window();
        if stats.max_per_position > bound {
            campaign.work_violations += 1;
        }
        let (w, b) = campaign.worst_work;
        if stats.max_per_position * b > w * bound {
            campaign.worst_work = (stats.max_per_position, bound);
        }
        campaign.inputs += 1;
        campaign.bytes += data.len() as u64;
    }
    campaign.elapsed = start.elapsed();
    campaign
}

fn roundtrip(f: &FuzzCampaign) -> Verdict {
    let pass = f.mismatches.is_empty() && f.inputs >= FUZZ_INPUTS && f.elapsed < FUZZ_BUDGET;
    let mut detail = format!(
        "{} inputs, {} configurations, {:.1} MiB in {:.1}s, {} mismatches",
        f.inputs,
        f.configs,
        f.bytes as f64 / (1 << 20) as f64,
        f.elapsed.as_secs_f64(),
        f.mismatches.len()
    );
    if let Some(m) = f.mismatches.first() {
        detail.push_str(&format!(" (first: {m})"));
    }
    Verdict::new(pass, detail)
}

fn pointer_invariants(f: &FuzzCampaign) -> Verdict {
    let a = &f.audit;
    let mut detail = format!(
        "{} pointers checked, {} violations",
        a.pointers, a.violations
    );
    if let Some(v) = &a.first {
        detail.push_str(&format!(" (first: {v})"));
    }
    Verdict::new(a.violations == 0 && a.pointers > 0, detail)
}

fn work_bound(f: &FuzzCampaign) -> Verdict {
    let (worst, bound) = f.worst_work;
    Verdict::new(
        f.work_violations == 0,
        format!(
            "worst run {worst} comparisons/position against bound {bound}, {} runs over",
            f.work_violations
        ),
    )
}

// ---- remaining criteria ----

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut failures = Vec::new();
    let mut tokens_compared = 0;
    for index in 0..ORACLE_INPUTS {
        let s = SYMBOL_WIDTHS[rng.random_range(0..SYMBOL_WIDTHS.len())];
        let w = FUZZ_WINDOWS[rng.random_range(0..FUZZ_WINDOWS.len())];
        let c = GRID_CHUNKS[rng.random_range(0..GRID_CHUNKS.len())];
        let p = params(s, w, c, 1);
        let symbols = rng.random_range(1..=c);
        let data = fuzz_input(&mut rng, index % 4, symbols * s, &p);

        let file = compress(&data, &p, 0).expect("compression succeeds");
        let containers = read_file(&file).expect("file parses");
        let pipeline = match (containers.len(), containers[0].num_chunks()) {
            (1, 1) => chunk_tokens(&containers[0], 0).expect("chunk parses"),
            shape => {
                failures.push(format!("input {index}: not a single chunk {shape:?}"));
                continue;
            }
        };
        let oracle = sequential_lzss(&data, &p).expect("oracle accepts input");
        tokens_compared += oracle.tokens.len();
        if pipeline != oracle.tokens {
            let at = pipeline
                .iter()
                .zip(&oracle.tokens)
                .position(|(a, b)| a != b)
                .unwrap_or(pipeline.len().min(oracle.tokens.len()));
            failures.push(format!(
                "input {index} (S={s} W={w} C={c}): first difference at token {at}"
            ));
        }
    }
    let mut detail = format!(
        "{ORACLE_INPUTS} inputs, {tokens_compared} oracle tokens, {} mismatching streams",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!(" (first: {f})"));
    }
    Verdict::new(failures.is_empty(), detail)
}

fn scan_exactness() -> Verdict {
    let mut failures = 0usize;
    let mut lengths = HashSet::new();

    let mut example = [3u64, 1, 7, 0, 4, 1, 6, 3];
    let mut trace = SweepTrace::default();
    let total = local_exclusive_scan_observed(&mut example, &mut trace).expect("length 8");
    let example_ok = example == [0, 3, 4, 11, 11, 15, 16, 22] && total == 25;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..SCAN_ARRAYS {
        let n = 1usize << rng.random_range(0..=SCAN_MAX_LOG2);
        lengths.insert(n);
        // per-token sizes are small; chunk totals can be large
        let max = if rng.random_bool(0.5) { 8 } else { 1 << 24 };
        let sizes: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max)).collect();

        let mut expected = Vec::with_capacity(n);
        let mut acc = 0u64;
        for &x in &sizes {
            expected.push(acc);
            acc += x;
        }

        let mut scanned = sizes.clone();
        let mut trace = SweepTrace::default();
        let total = local_exclusive_scan_observed(&mut scanned, &mut trace).expect("power of two");
        let up: Vec<usize> = (0..n.trailing_zeros()).map(|k| 1 << k).collect();
        let down: Vec<usize> = up.iter().rev().copied().collect();
        let two_sweep =
            trace.up_strides == up && trace.down_strides == down && trace.root == Some(acc);
        if scanned != expected || total != acc || !two_sweep {
            failures += 1;
        }
    }
    Verdict::new(
        example_ok && failures == 0 && lengths.len() == SCAN_MAX_LOG2 as usize + 1,
        format!(
            "worked example {}, {SCAN_ARRAYS} arrays over {} lengths up to 2^{SCAN_MAX_LOG2}, {failures} mismatches",
            if example_ok { "exact" } else { "WRONG" },
            lengths.len()
        ),
    )
}

fn greedy_vs_optimal() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let windows = [4usize, 5, 8, 16, 32, 64, 128, 255];
    let greedy_payload = |data: &[u8], p: &Params| -> usize {
        let file = compress(data, p, 1).expect("compression succeeds");
        read_file(&file).expect("file parses")[0]
            .payload_stream
            .len()
    };

    let mut below_optimal = 0;
    let mut strictly_worse = 0;
    for _ in 0..OPTIMAL_INPUTS {
        let s = SYMBOL_WIDTHS[rng.random_range(0..SYMBOL_WIDTHS.len())];
        let w = windows[rng.random_range(0..windows.len())];
        let p = params(s, w, 2048, 1);
        let n = rng.random_range(1..=OPTIMAL_MAX_SYMBOLS);
        // a few distinct symbols so that matches are common
        let distinct = rng.random_range(1..=4);
        let palette: Vec<Vec<u8>> = (0..distinct)
            .map(|_| (0..s).map(|_| rng.random()).collect())
            .collect();
        let data: Vec<u8> = (0..n)
            .flat_map(|_| palette[rng.random_range(0..distinct)].clone())
            .collect();

        let greedy = greedy_payload(&data, &p);
        let optimal = optimal_parse(&data, &p).expect("within oracle limit");
        if greedy < optimal {
            below_optimal += 1;
        } else if greedy > optimal {
            strictly_worse += 1;
        }
    }

    let mut run_mismatches = 0;
    let mut per_width = Vec::new();
    for &s in &SYMBOL_WIDTHS {
        let mut unequal = 0;
        let mut runs = 0;
        for &w in &windows {
            let p = params(s, w, 2048, 1);
            for n in 1..=OPTIMAL_MAX_SYMBOLS {
                let data = vec![0xA5u8; n * s];
                runs += 1;
                if greedy_payload(&data, &p) != optimal_parse(&data, &p).expect("within limit") {
                    unequal += 1;
                }
            }
        }
        run_mismatches += unequal;
        per_width.push(format!("S={s} {unequal}/{runs}"));
    }

    Verdict::new(
        below_optimal == 0 && run_mismatches == 0,
        format!(
            "{OPTIMAL_INPUTS} inputs: {below_optimal} below optimal, {strictly_worse} above; \
             pure runs unequal: {}",
            per_width.join(", ")
        ),
    )
}

fn trend_corpus() -> Vec<u8> {
    let spec = GeneratorSpec::runlen(
        TREND_CORPUS_BYTES,
        TREND_SEED,
        TREND_MEAN_RUN,
        TREND_ALPHABET,
    );
    generate(&spec).expect("trend corpus")
}

fn non_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

fn list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn window_trend(corpus: &[u8]) -> Verdict {
    let ratios: Vec<f64> = FUZZ_WINDOWS
        .iter()
        .map(|&w| ratio(corpus, &params(2, w, 2048, 1)))
        .collect();
    let gain = ratios[3] / ratios[0];
    Verdict::new(
        non_decreasing(&ratios) && gain >= WINDOW_GAIN_FLOOR,
        format!(
            "S=2 C=2048: CR over W 32/64/128/255 = {}, CR(255)/CR(32) = {gain:.3} (floor {WINDOW_GAIN_FLOOR})",
            list(&ratios)
        ),
    )
}

fn chunk_trend(corpus: &[u8]) -> Verdict {
    let ratios: Vec<f64> = GRID_CHUNKS
        .iter()
        .map(|&c| ratio(corpus, &params(2, 128, c, 1)))
        .collect();
    Verdict::new(
        non_decreasing(&ratios),
        format!("S=2 W=128: CR over C 2048..16384 = {}", list(&ratios)),
    )
}

fn interval_tradeoff() -> Verdict {
    let spec = GeneratorSpec::runlen(
        TREND_CORPUS_BYTES,
        TREND_SEED,
        INTERVAL_MEAN_RUN,
        TREND_ALPHABET,
    );
    let corpus = generate(&spec).expect("interval corpus");
    let mut ratios = Vec::new();
    let mut roundtrips = true;
    for &i in &INTERVALS {
        let p = params(1, 128, 2048, i);
        let file = compress(&corpus, &p, 0).expect("compression succeeds");
        roundtrips &= decompress_file(&file, 0)
            .map(|d| d == corpus)
            .unwrap_or(false);
        ratios.push(corpus.len() as f64 / file.len() as f64);
    }
    let relative = ratios[2] / ratios[0];
    Verdict::new(
        roundtrips && relative >= INTERVAL_RATIO_FLOOR,
        format!(
            "runlen mean_run {INTERVAL_MEAN_RUN}, S=1 W=128 C=2048: CR over I 1/2/4/8/16 = {}, \
             CR(4)/CR(1) = {relative:.3} (floor {INTERVAL_RATIO_FLOOR}), roundtrip {}",
            list(&ratios),
            if roundtrips { "ok" } else { "FAILED" }
        ),
    )
}

/// Physical cores from `/proc/cpuinfo` where available, else the logical
/// count.
fn physical_cores() -> usize {
    let logical = std::thread::available_parallelism().map_or(1, |n| n.get());
    let Ok(info) = std::fs::read_to_string("/proc/cpuinfo") else {
        return logical;
    };
    let mut cores = HashSet::new();
    let mut physical_id = "";
    for line in info.lines() {
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        match key.trim() {
            "physical id" => physical_id = value.trim(),
            "core id" => {
                cores.insert((physical_id, value.trim()));
            }
            _ => {}
        }
    }
    if cores.is_empty() {
        logical
    } else {
        cores.len().min(logical)
    }
}

fn determinism_and_scaling() -> Verdict {
    let corpus =
        generate(&GeneratorSpec::quantlike(SCALING_CORPUS_BYTES, 9, 0.9, 2)).expect("corpus");
    let p = Params::default();
    let cores = physical_cores();

    let mut threads: Vec<usize> = SCALING_THREADS.to_vec();
    if !threads.contains(&cores) {
        threads.push(cores);
    }
    let mut reference: Option<Vec<u8>> = None;
    let mut identical = true;
    let mut throughput = Vec::new();
    for &t in &threads {
        let start = Instant::now();
        let out = compress(&corpus, &p, t).expect("compression succeeds");
        let secs = start.elapsed().as_secs_f64();
        throughput.push((t, corpus.len() as f64 / secs));
        match &reference {
            None => reference = Some(out),
            Some(r) => identical &= *r == out,
        }
    }

    let single = throughput[0].1;
    let mut scaling_ok = true;
    let mut shown = Vec::new();
    for &(t, bps) in &throughput {
        if t <= cores {
            let ok = bps >= SCALING_EFFICIENCY * t as f64 * single;
            scaling_ok &= ok;
            shown.push(format!(
                "T={t} {:.1} MB/s{}",
                bps / 1e6,
                if ok { "" } else { " (too slow)" }
            ));
        }
    }
    Verdict::new(
        identical && scaling_ok,
        format!(
            "outputs {} for T in {:?}; {cores} physical core(s): {}",
            if identical { "identical" } else { "DIFFER" },
            threads,
            shown.join(", ")
        ),
    )
}

fn tuner_behavior() -> Verdict {
    let config = TunerConfig {
        threshold: TUNER_THRESHOLD,
        ..TunerConfig::default()
    };
    let uniform: Vec<Vec<u8>> = (0..2)
        .map(|seed| generate(&GeneratorSpec::uniform(TUNER_FIELD_BYTES, seed)).expect("corpus"))
        .collect();
    let quant: Vec<Vec<u8>> = (0..2)
        .map(|seed| {
            generate(&GeneratorSpec::quantlike(TUNER_FIELD_BYTES, seed, 0.9, 2)).expect("corpus")
        })
        .collect();

    let mut pass = true;
    let mut notes = Vec::new();
    for base_window in [64usize, 128] {
        let base = params(2, base_window, 2048, 1);
        let u = pilot(&uniform, 2, &base, &config).expect("pilot runs");
        let u_ok = u.average_ratio < TUNER_THRESHOLD && u.chosen.symbol_width() == 1;
        let q = pilot(&quant, 2, &base, &config).expect("pilot runs");
        let want = (base_window * 2).min(255);
        let q_ok = q.chosen.symbol_width() == 2 && q.chosen.window() == want;
        pass &= u_ok && q_ok;
        notes.push(format!(
            "base W={base_window}: uniform CR {:.3} -> S={}; quantlike CR {:.3} -> S={} W={}",
            u.average_ratio,
            u.chosen.symbol_width(),
            q.average_ratio,
            q.chosen.symbol_width(),
            q.chosen.window()
        ));
    }
    Verdict::new(pass, notes.join("; "))
}

fn main() -> ExitCode {
    let report = |n: u32, name: &str, v: Verdict| -> bool {
        let known = KNOWN_UNATTAINABLE.contains(&n);
        println!(
            "criterion {n:>2} {name:<24} {}  {}{}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            if known && !v.pass {
                " [known unattainable]"
            } else {
                ""
            }
        );
        v.pass || known
    };

    let mut all = true;
    let fuzz = run_fuzz();
    all &= report(1, "lossless roundtrip", roundtrip(&fuzz));
    all &= report(2, "oracle equivalence", oracle_equivalence());
    all &= report(3, "scan exactness", scan_exactness());
    all &= report(4, "pointer invariants", pointer_invariants(&fuzz));
    all &= report(5, "greedy vs optimal", greedy_vs_optimal());
    let corpus = trend_corpus();
    all &= report(6, "window trend", window_trend(&corpus));
    all &= report(7, "chunk trend", chunk_trend(&corpus));
    drop(corpus);
    all &= report(8, "interval trade-off", interval_tradeoff());
    all &= report(9, "determinism & scaling", determinism_and_scaling());
    all &= report(10, "tuner behavior", tuner_behavior());
    all &= report(11, "matcher work bound", work_bound(&fuzz));

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
