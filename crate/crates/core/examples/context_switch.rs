//! Stream one object, then another without a RESET. The device notices the
//! first sensation the two do not share and restarts the search.

use nertcam::harness::{generate, GenParams, SensationOrder, TraceRecord};
use nertcam::{NertcamConfig, System};

fn main() {
    let g = generate(&GenParams {
        order: SensationOrder::Random,
        feature_pool: 3,
        seed: 1,
        ..GenParams::default()
    })
    .unwrap();
    let mut system = System::new(NertcamConfig::mnist(1024)).unwrap();
    let layout = *system.layout();
    for rec in &g.store_trace {
        system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
    }

    for (label, idx) in [("A", 2), ("B", 5)] {
        let object = &g.dataset.objects[idx];
        println!("object {label} (class {})", object.class);
        for &loc in &g.orders[idx][..8] {
            let rec = TraceRecord::infer(object.features[loc], loc);
            let r = system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
            println!(
                "  loc {loc:>2} feat {} -> {:<14} {} cycles, classes {:?}",
                object.features[loc],
                r.outcome().to_string(),
                r.cycles,
                r.classes.indices()
            );
        }
    }
}
