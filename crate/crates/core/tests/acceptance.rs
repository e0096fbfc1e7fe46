//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nertcam::harness::{self, BenchMix, Dataset, GenParams, TraceRecord};
use nertcam::preprocess::build_dc;
use nertcam::rtcam::{LookupScope, MatchMode};
use nertcam::sdr::equality_match;
use nertcam::{
    CommandKind, MacroCommand, NertcamConfig, Outcome, PaddingMode, Response, Sdr, SdrLayout, SectionVec, System,
};

/// Fuzz lengths and seeds for the lockstep comparison.
const FUZZ_SMALL_OPS: usize = 10_000;
const FUZZ_SMALL_SEEDS: [u64; 2] = [1, 2];
const FUZZ_WIDE_OPS: usize = 2_000;
const FUZZ_WIDE_SEEDS: [u64; 2] = [3, 4];
const FUZZ_MAX_PADDING: usize = 2;

const ORDERS_PER_CLASS: usize = 100;
const MAX_SENSATIONS: usize = 25;
const OVERLAP_FEATURE_POOL: usize = 2;

const LOOKUP_BUDGET: Duration = Duration::from_millis(1);
const LOOKUP_SAMPLES: usize = 2_000;
/// ns/op at the largest table over ns/op at the smallest, for a 16x size step.
/// Linear growth gives 16; the extra factor of two absorbs timer noise.
const MAX_BENCH_RATIO: f64 = 32.0;
const BENCH_ITERATIONS: usize = 20_000;
const BENCH_REPEATS: usize = 3;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exec(system: &mut System, record: &TraceRecord) -> Result<Response, String> {
    let cmd = record.to_command(system.layout(), 0)?;
    system.run(cmd).map_err(|e| e.to_string())
}

fn dc_masks() -> Check {
    let layout = SdrLayout::new(3, 3, 3).unwrap();
    let triplet = Sdr::parse("100010001", &layout).unwrap();
    let pair = Sdr::parse("100010000", &layout).unwrap();
    let loc = Sdr::parse("000010000", &layout).unwrap();
    let feat = Sdr::parse("100000000", &layout).unwrap();
    let cases = [
        (MacroCommand::store(triplet.clone()), "000000000"),
        (MacroCommand::delete(triplet), "000000000"),
        (MacroCommand::infer(pair), "000000111"),
        (MacroCommand::predict_feature(loc, 0), "111000111"),
        (MacroCommand::predict_location(feat), "000111111"),
    ];
    for (cmd, want) in &cases {
        let got = build_dc(cmd, &layout, PaddingMode::Linear1D).to_string();
        ensure(got == *want, || format!("{}: got {got}, want {want}", cmd.kind))?;
    }
    Ok(format!("{} masks exact", cases.len()))
}

fn padding() -> Check {
    let layout = SdrLayout::new(1, 5, 1).unwrap();
    let query = Sdr::parse("0|00100|0", &layout).unwrap();
    let dc = build_dc(
        &MacroCommand::predict_feature(query.clone(), 1),
        &layout,
        PaddingMode::Linear1D,
    );
    let loc_mask = dc.section(&layout, nertcam::Section::Location).to_string();
    ensure(loc_mask == "01110", || format!("location mask {loc_mask}"))?;
    let mut accepted = BTreeSet::new();
    for pattern in ["10000", "01000", "00100", "00010", "00001"] {
        let loc = SectionVec::parse(pattern).unwrap();
        let stored = Sdr::from_sections(
            &SectionVec::one_hot(1, 0).unwrap(),
            &loc,
            &SectionVec::one_hot(1, 0).unwrap(),
            &layout,
        )
        .unwrap();
        if equality_match(&stored, &query, &dc).unwrap() {
            accepted.insert(pattern);
        }
    }
    let want: BTreeSet<_> = ["01000", "00100", "00010"].into();
    ensure(accepted == want, || format!("accepted {accepted:?}"))?;
    Ok("mask 01110, accepts 01000/00100/00010 only".into())
}

fn cycle_table() -> Check {
    let cfg = NertcamConfig::new(SdrLayout::new(3, 3, 3).unwrap(), 4);
    let mut s = System::new(cfg).unwrap();
    use CommandKind::*;
    let script: Vec<(&str, TraceRecord, Outcome, u32)> = vec![
        ("STORE success", TraceRecord::store(0, 0, 0), Outcome::Success, 3),
        ("STORE success", TraceRecord::store(1, 1, 1), Outcome::Success, 3),
        ("STORE fail", TraceRecord::store(0, 0, 0), Outcome::StoreFailed, 2),
        ("CLEAR", TraceRecord::op(Clear), Outcome::Success, 1),
        ("STORE success", TraceRecord::store(0, 0, 0), Outcome::Success, 3),
        ("STORE success", TraceRecord::store(1, 1, 1), Outcome::Success, 3),
        ("INFER success", TraceRecord::infer(0, 0), Outcome::Success, 2),
        (
            "PREDICT_FEATURE",
            TraceRecord::predict_feature(0, 0),
            Outcome::Success,
            1,
        ),
        (
            "PREDICT_LOCATION",
            TraceRecord::predict_location(0),
            Outcome::Success,
            1,
        ),
        (
            "INFER context switch",
            TraceRecord::infer(1, 1),
            Outcome::ContextSwitch,
            4,
        ),
        ("INFER fail", TraceRecord::infer(2, 2), Outcome::InferFailed, 4),
        ("RESET", TraceRecord::op(Reset), Outcome::Success, 1),
        ("DELETE success", TraceRecord::delete(1, 1, 1), Outcome::Success, 3),
        ("DELETE fail", TraceRecord::delete(1, 1, 1), Outcome::DeleteFailed, 2),
    ];
    for (name, rec, outcome, cycles) in &script {
        let r = exec(&mut s, rec)?;
        ensure(r.outcome() == *outcome && r.cycles == *cycles, || {
            format!(
                "{name}: got {} in {} cycles, want {outcome} in {cycles}",
                r.outcome(),
                r.cycles
            )
        })?;
    }
    let cells: BTreeSet<_> = script.iter().map(|s| s.0).collect();
    Ok(format!("{} cells, {} commands", cells.len(), script.len()))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut total = 0;
    let runs = [
        (SdrLayout::new(4, 4, 4).unwrap(), 16, FUZZ_SMALL_OPS, FUZZ_SMALL_SEEDS),
        (SdrLayout::new(8, 8, 8).unwrap(), 64, FUZZ_WIDE_OPS, FUZZ_WIDE_SEEDS),
    ];
    for (layout, n, ops, seeds) in runs {
        for seed in seeds {
            let cfg = NertcamConfig::new(layout, n);
            let trace = harness::fuzz_trace(&cfg, ops, seed, FUZZ_MAX_PADDING);
            let r = harness::diff_trace(cfg, &trace, 0);
            ensure(r.divergence.is_none(), || {
                format!(
                    "{}/{}/{} N={n} seed {seed}: {:?}",
                    layout.feature_bits(),
                    layout.location_bits(),
                    layout.class_bits(),
                    r.divergence
                )
            })?;
            ensure(r.input_errors == 0 && r.checked == ops, || {
                format!(
                    "seed {seed}: checked {} of {ops}, {} input errors",
                    r.checked, r.input_errors
                )
            })?;
            total += r.checked;
        }
    }
    Ok(format!("{total} commands, 0 divergences, {:.1?}", start.elapsed()))
}

fn stored(params: &GenParams, capacity: usize) -> Result<(Dataset, System), String> {
    let g = harness::generate(params).map_err(|e| e.to_string())?;
    let mut s = System::new(NertcamConfig::mnist(capacity)).unwrap();
    for rec in &g.store_trace {
        let r = exec(&mut s, rec)?;
        ensure(r.outcome() == Outcome::Success, || {
            format!("store {rec:?}: {}", r.outcome())
        })?;
    }
    Ok((g.dataset, s))
}

/// Stream one object's sensations after a RESET and check every step against
/// the brute-force consistent set. Returns the 1-based step at which the
/// class output first became one-hot.
fn identify(s: &mut System, data: &Dataset, object: usize, order: &[usize]) -> Result<Option<usize>, String> {
    let map = &data.objects[object].features;
    exec(s, &TraceRecord::op(CommandKind::Reset))?;
    let mut observed = Vec::new();
    let mut prev: Option<BTreeSet<usize>> = None;
    let mut one_hot_at = None;
    for (step, &loc) in order.iter().enumerate() {
        let r = exec(s, &TraceRecord::infer(map[loc], loc))?;
        ensure(r.outcome() == Outcome::Success, || {
            format!("step {step}: {}", r.outcome())
        })?;
        let classes: BTreeSet<usize> = r.classes.indices().into_iter().collect();
        observed.push((loc, map[loc]));
        let expect = data.consistent_classes(&observed);
        ensure(classes == expect, || {
            format!("step {step}: device {classes:?}, brute force {expect:?}")
        })?;
        if let Some(p) = &prev {
            ensure(classes.is_subset(p), || {
                format!("step {step}: {classes:?} grew from {p:?}")
            })?;
        }
        if one_hot_at.is_none() && classes.len() == 1 {
            one_hot_at = Some(step + 1);
        }
        prev = Some(classes);
    }
    Ok(one_hot_at)
}

fn identification() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0;
    let mut runs = 0;
    let mut overlap_steps = Vec::new();
    for (pool, unique) in [(128, true), (OVERLAP_FEATURE_POOL, false)] {
        let params = GenParams {
            feature_pool: pool,
            seed: 17,
            ..GenParams::default()
        };
        let (data, mut s) = stored(&params, 1024)?;
        for object in 0..data.objects.len() {
            let class = data.objects[object].class;
            for _ in 0..ORDERS_PER_CLASS {
                let mut order: Vec<usize> = (0..25).collect();
                order.shuffle(&mut rng);
                let at = identify(&mut s, &data, object, &order)?;
                let at = at.ok_or_else(|| format!("class {class} never became one-hot"))?;
                ensure(at <= MAX_SENSATIONS, || format!("class {class} took {at} sensations"))?;
                if unique {
                    worst = worst.max(at);
                } else {
                    overlap_steps.push(at);
                }
                runs += 1;
            }
        }
    }
    let mean = overlap_steps.iter().sum::<usize>() as f64 / overlap_steps.len() as f64;
    Ok(format!(
        "{runs} streams; unique maps one-hot within {worst}; overlapping maps converge at the disambiguating sensation (mean {mean:.1})"
    ))
}

fn context_switch() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = 0;
    for pool in [128, OVERLAP_FEATURE_POOL] {
        let params = GenParams {
            feature_pool: pool,
            seed: 23,
            ..GenParams::default()
        };
        let (data, base) = stored(&params, 1024)?;
        for a in 0..data.objects.len() {
            for b in 0..data.objects.len() {
                if a == b {
                    continue;
                }
                let (ma, mb) = (&data.objects[a].features, &data.objects[b].features);
                let mut order_a: Vec<usize> = (0..25).collect();
                order_a.shuffle(&mut rng);
                let mut order_b = order_a.clone();
                order_b.shuffle(&mut rng);

                let mut s = base.clone();
                let at = identify(&mut s, &data, a, &order_a)?;
                ensure(at.is_some(), || format!("object {a} not identified"))?;
                let first_new = order_b.iter().position(|&l| ma[l] != mb[l]).expect("distinct maps");
                let mut tail = Vec::new();
                for (i, &loc) in order_b.iter().enumerate() {
                    let r = exec(&mut s, &TraceRecord::infer(mb[loc], loc))?;
                    let want = if i == first_new {
                        Outcome::ContextSwitch
                    } else {
                        Outcome::Success
                    };
                    ensure(r.outcome() == want, || {
                        format!("{a}->{b} sensation {i}: {} want {want}", r.outcome())
                    })?;
                    if i >= first_new {
                        tail.push(r);
                    }
                }

                let mut fresh = base.clone();
                exec(&mut fresh, &TraceRecord::op(CommandKind::Reset))?;
                for (r, &loc) in tail.iter().zip(&order_b[first_new..]) {
                    let f = exec(&mut fresh, &TraceRecord::infer(mb[loc], loc))?;
                    ensure(f.classes == r.classes && f.prediction == r.prediction, || {
                        format!("{a}->{b}: replay classes {} vs {}", f.classes, r.classes)
                    })?;
                }
                let valid = |s: &System| s.memory().entries().iter().map(|e| e.valid).collect::<Vec<_>>();
                ensure(valid(&fresh) == valid(&s), || {
                    format!("{a}->{b}: valid bits differ from replay")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} object pairs, switch at first unshared sensation, tail equals RESET replay"
    ))
}

fn capacity() -> Check {
    let cfg = NertcamConfig::mnist(1024);
    ensure(cfg.entry_bits() == 165, || format!("entry width {}", cfg.entry_bits()))?;
    let mut s = System::new(cfg).unwrap();
    for i in 0..1024 {
        let r = exec(&mut s, &TraceRecord::store(i % 128, i / 128, i % 10))?;
        ensure(r.outcome() == Outcome::Success, || {
            format!("store {i}: {}", r.outcome())
        })?;
    }
    ensure(s.status().full, || "not full after 1024 stores".into())?;
    let r = exec(&mut s, &TraceRecord::store(0, 24, 0))?;
    ensure(r.outcome() == Outcome::StoreFailed && r.full(), || {
        format!("1025th store: {} full={}", r.outcome(), r.full())
    })?;
    let r = exec(&mut s, &TraceRecord::delete(5, 0, 5))?;
    ensure(r.outcome() == Outcome::Success && !r.full() && !s.status().full, || {
        format!("delete: {} full={}", r.outcome(), r.full())
    })?;
    Ok(format!(
        "1024 stored, 1025th Store_Failed with full, delete clears full ({} occupied)",
        s.status().occupancy
    ))
}

fn scaling() -> Check {
    let cfg = NertcamConfig::mnist(1024);
    let layout = cfg.layout;
    let mut s = System::new(cfg).unwrap();
    for i in 0..1024 {
        exec(&mut s, &TraceRecord::store(i % 128, i / 128, i % 10))?;
    }
    let mut memory = s.memory().clone();
    let mut samples = Vec::with_capacity(LOOKUP_SAMPLES);
    for i in 0..LOOKUP_SAMPLES {
        let q = MacroCommand::infer(Sdr::from_indices(&[i % 128], Some((i / 128) % 25), None, &layout).unwrap());
        let dc = build_dc(&q, &layout, cfg.padding_mode);
        let t = Instant::now();
        std::hint::black_box(memory.micro_lookup(&q.input, &dc, LookupScope::All, MatchMode::Equality));
        samples.push(t.elapsed());
    }
    samples.sort();
    let median = samples[samples.len() / 2];
    ensure(median < LOOKUP_BUDGET, || format!("median lookup {median:?}"))?;

    let best = |size: usize| {
        (0..BENCH_REPEATS)
            .map(|r| harness::bench(&cfg, &[size], BenchMix::Lookup, BENCH_ITERATIONS, r as u64)[0].ns_per_op)
            .fold(f64::INFINITY, f64::min)
    };
    let small = best(harness::TABLE_SIZES[0]);
    let large = best(*harness::TABLE_SIZES.last().unwrap());
    let ratio = large / small;
    ensure(ratio <= MAX_BENCH_RATIO, || {
        format!("bench growth {ratio:.1}x for 16x entries")
    })?;
    Ok(format!(
        "median lookup {median:?} at N=1024; bench 64->1024 grows {ratio:.1}x"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 dc-mask fidelity", dc_masks),
        ("2 padding fidelity", padding),
        ("3 cycle-count table", cycle_table),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 sequential identification", identification),
        ("6 context-switch detection", context_switch),
        ("7 capacity at 128/25/10, N=1024", capacity),
        ("8 scaling smoke", scaling),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
