//! Store a synthetic ten-object dataset, then identify one object by
//! streaming its sensations until a single class remains.

use nertcam::harness::{generate, GenParams, SensationOrder, TraceRecord};
use nertcam::{NertcamConfig, System};

fn main() {
    let g = generate(&GenParams {
        order: SensationOrder::Random,
        feature_pool: 4,
        seed: 7,
        ..GenParams::default()
    })
    .unwrap();
    let mut system = System::new(NertcamConfig::mnist(1024)).unwrap();
    let layout = *system.layout();
    for rec in &g.store_trace {
        system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
    }
    println!("stored {} triplets", system.status().occupancy);

    let target = 6;
    let object = &g.dataset.objects[target];
    println!(
        "identifying class {} (features drawn from a pool of 4, so maps overlap)",
        object.class
    );
    for (step, &loc) in g.orders[target].iter().enumerate() {
        let rec = TraceRecord::infer(object.features[loc], loc);
        let r = system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
        println!(
            "  sensation {:>2}: feature {:>3} at ({}, {}) -> {} {:?}",
            step + 1,
            object.features[loc],
            loc / 5,
            loc % 5,
            r.outcome(),
            r.classes.indices()
        );
        if r.classes.is_one_hot() {
            break;
        }
    }
}
