//! Lookup cost against table size.

use nertcam::harness::{bench, BenchMix, TABLE_SIZES};
use nertcam::NertcamConfig;

fn main() {
    let base = NertcamConfig::mnist(64);
    for mix in [BenchMix::Lookup, BenchMix::Infer] {
        println!("{mix:?}");
        for row in bench(&base, &TABLE_SIZES, mix, 20_000, 0) {
            println!("  N={:<5} {:>9.0} ns/op", row.entries, row.ns_per_op);
        }
    }
}
