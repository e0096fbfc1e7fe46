//! Multi-bit feature sections. INFER matches rows whose feature equals the
//! query exactly; PREDICT_LOCATION reports every location carrying it among
//! the rows still valid.

use nertcam::harness::{FeatureSpec, TraceRecord};
use nertcam::{CommandKind, NertcamConfig, SdrLayout, System};

fn rec(op: CommandKind, feature: &[usize], location: Option<usize>, class: Option<usize>) -> TraceRecord {
    TraceRecord {
        feature: Some(FeatureSpec::from_indices(feature)),
        location,
        class,
        ..TraceRecord::op(op)
    }
}

fn main() {
    let layout = SdrLayout::new(6, 4, 3).unwrap();
    let mut system = System::new(NertcamConfig::new(layout, 8).with_khot_features(true)).unwrap();
    let mut run = |r: TraceRecord| {
        let resp = system.run(r.to_command(&layout, 0).unwrap()).unwrap();
        println!(
            "{:<16} {:<22} -> {:<14} classes {:?} locations {:?}",
            r.op.to_string(),
            r.to_command(&layout, 0).unwrap().input.to_sectioned_string(&layout),
            resp.outcome().to_string(),
            if r.op.is_predict() {
                resp.prediction.classes.indices()
            } else {
                resp.classes.indices()
            },
            resp.prediction.locations.indices()
        );
    };
    run(rec(CommandKind::Store, &[0, 2], Some(0), Some(0)));
    run(rec(CommandKind::Store, &[0, 2], Some(3), Some(1)));
    run(rec(CommandKind::Store, &[0], Some(0), Some(2)));
    run(rec(CommandKind::Infer, &[0, 2], Some(0), None));
    run(rec(CommandKind::Reset, &[], None, None));
    run(rec(CommandKind::Infer, &[0], Some(0), None));
    run(rec(CommandKind::PredictLocation, &[0, 2], None, None));
    run(rec(CommandKind::Reset, &[], None, None));
    run(rec(CommandKind::PredictLocation, &[0, 2], None, None));
}
