//! Fill a 1024-entry array of 165-bit rows and watch the full flag.

use std::time::Instant;

use nertcam::harness::TraceRecord;
use nertcam::{NertcamConfig, System};

fn main() {
    let config = NertcamConfig::mnist(1024);
    let mut system = System::new(config).unwrap();
    let layout = config.layout;
    let run = |s: &mut System, rec: TraceRecord| s.run(rec.to_command(&layout, 0).unwrap()).unwrap();

    let start = Instant::now();
    for i in 0..1024 {
        run(&mut system, TraceRecord::store(i % 128, i / 128, i % 10));
    }
    println!(
        "{} entries of {} bits stored in {:?}, full={}",
        system.status().occupancy,
        config.entry_bits(),
        start.elapsed(),
        system.status().full
    );
    let r = run(&mut system, TraceRecord::store(3, 20, 4));
    println!(
        "one more store: {} in {} cycles, full={}",
        r.outcome(),
        r.cycles,
        r.full()
    );
    let r = run(&mut system, TraceRecord::delete(0, 0, 0));
    println!("delete: {}, full={}", r.outcome(), r.full());
    let r = run(&mut system, TraceRecord::store(3, 20, 4));
    println!("store again: {}, full={}", r.outcome(), r.full());
}
