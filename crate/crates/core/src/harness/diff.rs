//! Lockstep comparison of the device model against the set-level oracle.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FeatureSpec, TraceRecord};
use crate::oracle::{AbstractResponse, Oracle, Triplet};
use crate::preprocess::CommandKind;
use crate::rtcam::MemoryArray;
use crate::system::{NertcamConfig, Response, SubmitError, System};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub index: usize,
    pub field: &'static str,
    pub system: String,
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct DiffReport {
    pub checked: usize,
    pub input_errors: usize,
    pub divergence: Option<Divergence>,
}

/// Oracle whose stored set is the non-empty rows of `memory`.
pub fn oracle_from_memory(memory: &MemoryArray, config: &NertcamConfig) -> Oracle {
    let layout = memory.layout();
    let triplets = memory.entries().iter().filter(|e| !e.empty).map(|e| {
        let loc = e.location(layout).indices();
        let class = e.class(layout).indices();
        Triplet::new(
            e.feature(layout).indices(),
            loc.first().copied().unwrap_or(usize::MAX),
            class.first().copied().unwrap_or(usize::MAX),
        )
    });
    Oracle::new(
        layout.class_bits(),
        layout.location_bits(),
        config.padding_mode,
        config.capacity,
    )
    .with_triplets(triplets)
}

fn as_abstract(r: &Response) -> AbstractResponse {
    let set = |v: Vec<usize>| v.into_iter().collect::<BTreeSet<usize>>();
    AbstractResponse {
        outcome: Some(r.outcome()),
        full: r.full(),
        classes: set(r.classes.indices()),
        features: set(r.prediction.features.indices()),
        locations: set(r.prediction.locations.indices()),
        predicted_classes: set(r.prediction.classes.indices()),
    }
}

pub struct Differ {
    system: System,
    oracle: Oracle,
    default_padding: usize,
}

impl Differ {
    pub fn new(config: NertcamConfig, default_padding: usize) -> Result<Self, crate::system::ConfigError> {
        let system = System::new(config)?;
        let oracle = oracle_from_memory(system.memory(), &config);
        Ok(Self::from_parts(system, oracle, default_padding))
    }

    pub fn from_parts(system: System, oracle: Oracle, default_padding: usize) -> Self {
        Self {
            system,
            oracle,
            default_padding,
        }
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    /// Apply one record to both models. `Ok(None)` when they agree,
    /// `Err(message)` when the device rejected the input.
    pub fn check(&mut self, index: usize, record: &TraceRecord) -> Result<Option<Divergence>, String> {
        let layout = *self.system.layout();
        let cmd = record.to_command(&layout, self.default_padding)?;
        let resp = self.system.run(cmd).map_err(|e| match e {
            SubmitError::Input(e) => e.to_string(),
            SubmitError::Busy(e) => e.to_string(),
        })?;
        let expected = self.oracle.apply(&record.to_abstract(self.default_padding)?);
        let got = as_abstract(&resp);
        let fmt_set = |s: &BTreeSet<usize>| format!("{s:?}");
        let diverge = |field, system: String, oracle: String| {
            Some(Divergence {
                index,
                field,
                system,
                oracle,
            })
        };
        let fields: [(&'static str, String, String); 6] = [
            (
                "outcome",
                format!("{:?}", got.outcome),
                format!("{:?}", expected.outcome),
            ),
            ("full", got.full.to_string(), expected.full.to_string()),
            ("classes", fmt_set(&got.classes), fmt_set(&expected.classes)),
            ("features", fmt_set(&got.features), fmt_set(&expected.features)),
            ("locations", fmt_set(&got.locations), fmt_set(&expected.locations)),
            (
                "predicted_classes",
                fmt_set(&got.predicted_classes),
                fmt_set(&expected.predicted_classes),
            ),
        ];
        for (field, s, o) in fields {
            if s != o {
                return Ok(diverge(field, s, o));
            }
        }
        let occupancy = self.system.status().occupancy;
        if occupancy != self.oracle.triplets().len() {
            return Ok(diverge(
                "occupancy",
                occupancy.to_string(),
                self.oracle.triplets().len().to_string(),
            ));
        }
        // Valid bits of live rows must be exactly "class is still a candidate".
        for (row, e) in self.system.memory().entries().iter().enumerate() {
            if e.empty {
                continue;
            }
            let class = e.class(&layout).indices();
            let expect = class.len() == 1 && self.oracle.valid_classes().contains(&class[0]);
            if e.valid != expect {
                return Ok(diverge(
                    "valid_bits",
                    format!("row {row} valid={}", e.valid),
                    format!("valid={expect}"),
                ));
            }
        }
        Ok(None)
    }

    /// Run a whole trace, stopping at the first divergence.
    pub fn run(&mut self, trace: &[TraceRecord]) -> DiffReport {
        let mut report = DiffReport::default();
        for (i, record) in trace.iter().enumerate() {
            match self.check(i, record) {
                Ok(None) => report.checked += 1,
                Ok(Some(d)) => {
                    report.divergence = Some(d);
                    break;
                }
                Err(_) => report.input_errors += 1,
            }
        }
        report
    }
}

pub fn diff_trace(config: NertcamConfig, trace: &[TraceRecord], default_padding: usize) -> DiffReport {
    Differ::new(config, default_padding)
        .expect("validated config")
        .run(trace)
}

/// `ops` random well-formed commands for `config`. Stores, deletes and
/// infers are biased towards triplets already issued so that duplicates,
/// multi-step identifications and context switches are common.
pub fn fuzz_trace(config: &NertcamConfig, ops: usize, seed: u64, max_padding: usize) -> Vec<TraceRecord> {
    let l = config.layout;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut issued: Vec<(Vec<usize>, usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(ops);

    let random_feature = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        if config.khot_features {
            let k = rng.random_range(1..=3.min(l.feature_bits()));
            let mut v: Vec<usize> = (0..k).map(|_| rng.random_range(0..l.feature_bits())).collect();
            v.sort_unstable();
            v.dedup();
            v
        } else {
            vec![rng.random_range(0..l.feature_bits())]
        }
    };
    let random_triplet = |rng: &mut ChaCha8Rng| {
        (
            random_feature(rng),
            rng.random_range(0..l.location_bits()),
            rng.random_range(0..l.class_bits()),
        )
    };
    let pick = |rng: &mut ChaCha8Rng, issued: &[(Vec<usize>, usize, usize)], reuse: f64| {
        if !issued.is_empty() && rng.random_bool(reuse) {
            issued.choose(rng).unwrap().clone()
        } else {
            random_triplet(rng)
        }
    };
    let full = |op, (f, loc, c): (Vec<usize>, usize, usize)| TraceRecord {
        feature: Some(FeatureSpec::from_indices(&f)),
        location: Some(loc),
        class: Some(c),
        ..TraceRecord::op(op)
    };

    for _ in 0..ops {
        let roll = rng.random_range(0..100);
        let record = match roll {
            0..=27 => {
                let t = pick(&mut rng, &issued, 0.3);
                issued.push(t.clone());
                full(CommandKind::Store, t)
            }
            28..=37 => full(CommandKind::Delete, pick(&mut rng, &issued, 0.6)),
            38..=72 => {
                let (f, loc, _) = pick(&mut rng, &issued, 0.8);
                TraceRecord {
                    feature: Some(FeatureSpec::from_indices(&f)),
                    location: Some(loc),
                    ..TraceRecord::op(CommandKind::Infer)
                }
            }
            73..=81 => {
                let (_, loc, _) = pick(&mut rng, &issued, 0.7);
                TraceRecord::predict_feature(loc, rng.random_range(0..=max_padding))
            }
            82..=90 => {
                let (f, _, _) = pick(&mut rng, &issued, 0.7);
                TraceRecord {
                    feature: Some(FeatureSpec::from_indices(&f)),
                    ..TraceRecord::op(CommandKind::PredictLocation)
                }
            }
            91..=97 => TraceRecord::op(CommandKind::Reset),
            _ => {
                issued.clear();
                TraceRecord::op(CommandKind::Clear)
            }
        };
        out.push(record);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::Outcome;
    use crate::preprocess::PaddingMode;
    use crate::sdr::SdrLayout;

    fn cfg() -> NertcamConfig {
        NertcamConfig::new(SdrLayout::new(4, 4, 4).unwrap(), 16)
    }

    #[test]
    fn fixed_trace_has_no_divergence() {
        let trace = vec![
            TraceRecord::store(0, 0, 0),
            TraceRecord::store(0, 0, 1),
            TraceRecord::store(1, 1, 1),
            TraceRecord::infer(0, 0),
            TraceRecord::infer(1, 1),
            TraceRecord::infer(0, 0),
            TraceRecord::predict_feature(1, 1),
            TraceRecord::infer(3, 3),
            TraceRecord::delete(0, 0, 0),
            TraceRecord::delete(0, 0, 0),
        ];
        let r = diff_trace(cfg(), &trace, 0);
        assert_eq!(r.divergence, None);
        assert_eq!(r.checked, trace.len());
    }

    #[test]
    fn fuzz_is_reproducible_and_exercises_every_outcome() {
        let a = fuzz_trace(&cfg(), 3000, 7, 2);
        assert_eq!(a, fuzz_trace(&cfg(), 3000, 7, 2));
        let mut s = System::new(cfg()).unwrap();
        let report = super::super::run_trace(&mut s, &a, 0, |_| {});
        assert!(!report.has_input_errors());
        let seen: BTreeSet<Outcome> = report.records.iter().filter_map(|r| r.outcome).collect();
        for o in [
            Outcome::Success,
            Outcome::StoreFailed,
            Outcome::DeleteFailed,
            Outcome::InferFailed,
            Outcome::ContextSwitch,
        ] {
            assert!(seen.contains(&o), "fuzz never produced {o}");
        }
    }

    #[test]
    fn khot_and_grid_fuzz_agree() {
        let config = NertcamConfig::new(SdrLayout::new(6, 9, 4).unwrap(), 24)
            .with_padding_mode(PaddingMode::Grid2D { rows: 3, cols: 3 })
            .with_khot_features(true);
        let trace = fuzz_trace(&config, 3000, 11, 2);
        let r = diff_trace(config, &trace, 0);
        assert_eq!(r.divergence, None);
        assert_eq!(r.input_errors, 0);
    }

    #[test]
    fn corrupted_image_diverges_at_first_affected_record() {
        let config = NertcamConfig::new(SdrLayout::new(3, 3, 3).unwrap(), 4);
        let mut clean = System::new(config).unwrap();
        for r in [TraceRecord::store(0, 0, 0), TraceRecord::store(1, 1, 1)] {
            clean.run(r.to_command(&config.layout, 0).unwrap()).unwrap();
        }
        let oracle = oracle_from_memory(clean.memory(), &config);
        // Move row 1 from class 1 to class 2.
        let corrupted = clean.save_image().replace("1 010|010|010", "1 010|010|001");
        let mut bad = System::new(config).unwrap();
        bad.load_image(&corrupted).unwrap();
        let mut d = Differ::from_parts(bad, oracle, 0);
        let trace = vec![
            TraceRecord::infer(0, 0),
            TraceRecord::op(CommandKind::Reset),
            TraceRecord::infer(1, 1),
            TraceRecord::infer(0, 0),
        ];
        let r = d.run(&trace);
        let div = r.divergence.unwrap();
        assert_eq!((div.index, div.field), (2, "classes"));
    }
}
