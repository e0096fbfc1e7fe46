//! Print every controller transition for one command of each kind.

use nertcam::harness::TraceRecord;
use nertcam::{CommandKind, NertcamConfig, SdrLayout, System};

fn main() {
    let layout = SdrLayout::new(3, 3, 3).unwrap();
    let mut system = System::new(NertcamConfig::new(layout, 2)).unwrap();
    let script = [
        ("store", TraceRecord::store(0, 0, 0)),
        ("store duplicate", TraceRecord::store(0, 0, 0)),
        ("store", TraceRecord::store(1, 1, 1)),
        ("store into full memory", TraceRecord::store(2, 2, 2)),
        ("infer", TraceRecord::infer(0, 0)),
        ("infer other object", TraceRecord::infer(1, 1)),
        ("infer unknown pair", TraceRecord::infer(2, 0)),
        ("predict feature", TraceRecord::predict_feature(1, 0)),
        ("delete", TraceRecord::delete(0, 0, 0)),
        ("delete missing", TraceRecord::delete(0, 0, 0)),
        ("reset", TraceRecord::op(CommandKind::Reset)),
        ("clear", TraceRecord::op(CommandKind::Clear)),
    ];
    for (name, rec) in script {
        let (resp, cycles) = system.run_traced(rec.to_command(&layout, 0).unwrap()).unwrap();
        println!(
            "{} {name}: {} after {} cycles (full={})",
            rec.op,
            resp.outcome(),
            resp.cycles,
            resp.full()
        );
        for c in cycles {
            println!(
                "    #{:<3} {} -> {}  {:<9} valid_entry={} busy={}",
                c.cycle,
                c.from,
                c.to,
                c.op.map(|o| o.name()).unwrap_or("-"),
                u8::from(c.valid_entry),
                u8::from(c.busy)
            );
        }
    }
}
