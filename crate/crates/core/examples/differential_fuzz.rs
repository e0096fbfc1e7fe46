//! Replay random command streams through the device and the set-level
//! oracle side by side.

use std::time::Instant;

use nertcam::harness::{diff_trace, fuzz_trace};
use nertcam::{NertcamConfig, PaddingMode, SdrLayout};

fn main() {
    let configs = [
        NertcamConfig::new(SdrLayout::new(4, 4, 4).unwrap(), 16),
        NertcamConfig::new(SdrLayout::new(8, 8, 8).unwrap(), 64),
        NertcamConfig::new(SdrLayout::new(6, 9, 4).unwrap(), 24)
            .with_padding_mode(PaddingMode::Grid2D { rows: 3, cols: 3 }),
    ];
    for config in configs {
        let start = Instant::now();
        let trace = fuzz_trace(&config, 20_000, 42, 2);
        let report = diff_trace(config, &trace, 0);
        let l = config.layout;
        println!(
            "{}/{}/{} N={:<3} {} commands checked in {:?}, divergence: {:?}",
            l.feature_bits(),
            l.location_bits(),
            l.class_bits(),
            config.capacity,
            report.checked,
            start.elapsed(),
            report.divergence
        );
    }
}
