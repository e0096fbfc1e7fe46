use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::preprocess::{build_dc, MacroCommand};
use crate::rtcam::{LookupScope, MatchMode};
use crate::sdr::Sdr;
use crate::system::{NertcamConfig, System};

/// Entry counts swept by default.
pub const TABLE_SIZES: [usize; 5] = [64, 128, 256, 512, 1024];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMix {
    /// One committed lookup against the array, no controller.
    Lookup,
    /// Full INFER commands through the device.
    Infer,
    /// PREDICT_FEATURE commands through the device.
    Predict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub entries: usize,
    pub iterations: usize,
    pub total_ns: u128,
    pub ns_per_op: f64,
    pub ops_per_sec: f64,
}

/// Fill a device of each size with distinct random triplets and time
/// `iterations` operations of the given mix. Zero iterations gives no rows.
pub fn bench(base: &NertcamConfig, sizes: &[usize], mix: BenchMix, iterations: usize, seed: u64) -> Vec<BenchRow> {
    if iterations == 0 {
        return Vec::new();
    }
    let layout = base.layout;
    let mut rows = Vec::new();
    for &entries in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut system = System::new(NertcamConfig {
            capacity: entries,
            ..*base
        })
        .expect("bench config");
        let mut stored = BTreeSet::new();
        let limit = entries.min(layout.feature_bits() * layout.location_bits() * layout.class_bits());
        while stored.len() < limit {
            let t = (
                rng.random_range(0..layout.feature_bits()),
                rng.random_range(0..layout.location_bits()),
                rng.random_range(0..layout.class_bits()),
            );
            if stored.insert(t) {
                let sdr = Sdr::from_indices(&[t.0], Some(t.1), Some(t.2), &layout).unwrap();
                system.run(MacroCommand::store(sdr)).expect("bench store");
            }
        }
        let stored: Vec<_> = stored.into_iter().collect();
        let queries: Vec<MacroCommand> = (0..iterations)
            .map(|i| {
                let (f, l, _) = stored[i % stored.len()];
                match mix {
                    BenchMix::Predict => {
                        MacroCommand::predict_feature(Sdr::from_indices(&[], Some(l), None, &layout).unwrap(), 0)
                    }
                    _ => MacroCommand::infer(Sdr::from_indices(&[f], Some(l), None, &layout).unwrap()),
                }
            })
            .collect();

        let start = Instant::now();
        match mix {
            BenchMix::Lookup => {
                let mut memory = system.memory().clone();
                let dcs: Vec<_> = queries
                    .iter()
                    .map(|q| build_dc(q, &layout, base.padding_mode))
                    .collect();
                let mut hits = 0usize;
                for (q, dc) in queries.iter().zip(&dcs) {
                    hits += usize::from(memory.micro_lookup(&q.input, dc, LookupScope::All, MatchMode::Equality));
                }
                assert_eq!(hits, iterations);
            }
            BenchMix::Infer | BenchMix::Predict => {
                for q in queries {
                    system.run(q).expect("bench command");
                }
            }
        }
        let total_ns = start.elapsed().as_nanos();
        let ns_per_op = total_ns as f64 / iterations as f64;
        rows.push(BenchRow {
            entries,
            iterations,
            total_ns,
            ns_per_op,
            ops_per_sec: if ns_per_op > 0.0 {
                1e9 / ns_per_op
            } else {
                f64::INFINITY
            },
        });
    }
    rows
}
