//! PREDICT_FEATURE with padding: ask which features sit near a location,
//! first on a 1D strip, then on a 2D grid.

use nertcam::harness::TraceRecord;
use nertcam::{NertcamConfig, PaddingMode, SdrLayout, System};

fn show(system: &mut System, location: usize, padding: usize) {
    let layout = *system.layout();
    let rec = TraceRecord::predict_feature(location, padding);
    let r = system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
    println!(
        "  location {location} padding {padding}: features {:?} classes {:?}",
        r.prediction.features.indices(),
        r.prediction.classes.indices()
    );
}

fn main() {
    let layout = SdrLayout::new(8, 9, 2).unwrap();
    // Feature i at location i for class 0; class 1 only at the corners.
    let mut stored = vec![];
    for i in 0..8 {
        stored.push(TraceRecord::store(i, i, 0));
    }
    stored.extend([TraceRecord::store(7, 0, 1), TraceRecord::store(7, 8, 1)]);

    for (name, mode) in [
        ("linear strip of 9", PaddingMode::Linear1D),
        ("3x3 grid", PaddingMode::Grid2D { rows: 3, cols: 3 }),
    ] {
        let mut system = System::new(NertcamConfig::new(layout, 16).with_padding_mode(mode)).unwrap();
        for rec in &stored {
            system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
        }
        println!("{name}:");
        for (loc, p) in [(4, 0), (4, 1), (0, 1), (8, 2)] {
            show(&mut system, loc, p);
        }
    }
}
