//! Save the array to a text image, edit it by hand, and load it back.

use nertcam::harness::TraceRecord;
use nertcam::{NertcamConfig, SdrLayout, System};

fn main() {
    let layout = SdrLayout::new(3, 3, 3).unwrap();
    let config = NertcamConfig::new(layout, 4);
    let mut system = System::new(config).unwrap();
    for rec in [TraceRecord::store(0, 0, 0), TraceRecord::store(1, 1, 1)] {
        system.run(rec.to_command(&layout, 0).unwrap()).unwrap();
    }
    let image = system.save_image();
    print!("saved:\n{image}");

    let edited = image.replacen("2 000|000|000 1 1", "2 001|001|001 1 0", 1);
    let mut restored = System::new(config).unwrap();
    restored.load_image(&edited).unwrap();
    println!("loaded edited image, occupancy {}", restored.status().occupancy);
    let r = restored
        .run(TraceRecord::infer(2, 2).to_command(&layout, 0).unwrap())
        .unwrap();
    println!("infer (2, 2): {} {:?}", r.outcome(), r.classes.indices());

    let mut wrong = System::new(NertcamConfig::new(layout, 8)).unwrap();
    println!("loading into 8 entries: {}", wrong.load_image(&edited).unwrap_err());
}
