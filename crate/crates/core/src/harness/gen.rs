//! Synthetic sensorimotor datasets: each object is a map from every grid
//! location to one feature, labelled with its class. Generation is fully
//! determined by the seed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{HarnessError, TraceRecord};
use crate::preprocess::CommandKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensationOrder {
    /// Row-major location order.
    Sequential,
    /// A fresh shuffle per object.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub layout: [usize; 3],
    pub classes: usize,
    pub grid: [usize; 2],
    /// Features are drawn from indices `0..feature_pool`.
    pub feature_pool: usize,
    pub samples_per_class: usize,
    pub order: SensationOrder,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            layout: [128, 25, 10],
            classes: 10,
            grid: [5, 5],
            feature_pool: 128,
            samples_per_class: 1,
            order: SensationOrder::Sequential,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectMap {
    pub class: usize,
    pub sample: usize,
    /// Feature index at each location, row-major.
    pub features: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub layout: [usize; 3],
    pub grid: [usize; 2],
    pub objects: Vec<ObjectMap>,
}

impl Dataset {
    /// Classes whose maps agree with every `(location, feature)` observation.
    pub fn consistent_classes(&self, observed: &[(usize, usize)]) -> BTreeSet<usize> {
        self.objects
            .iter()
            .filter(|o| observed.iter().all(|&(l, f)| o.features[l] == f))
            .map(|o| o.class)
            .collect()
    }

    pub fn store_trace(&self) -> Vec<TraceRecord> {
        self.objects
            .iter()
            .flat_map(|o| {
                o.features
                    .iter()
                    .enumerate()
                    .map(move |(l, &f)| TraceRecord::store(f, l, o.class))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub dataset: Dataset,
    pub store_trace: Vec<TraceRecord>,
    /// Per object: RESET, then one INFER per location in sensation order.
    pub infer_trace: Vec<TraceRecord>,
    /// Location order used for each object, parallel to `dataset.objects`.
    pub orders: Vec<Vec<usize>>,
}

const MAX_ATTEMPTS: usize = 10_000;

pub fn generate(p: &GenParams) -> Result<Generated, HarnessError> {
    let [feature_bits, location_bits, class_bits] = p.layout;
    let [rows, cols] = p.grid;
    let bad = |m: String| Err(HarnessError::Params(m));
    if rows * cols != location_bits {
        return bad(format!("grid {rows}x{cols} does not cover {location_bits} locations"));
    }
    if p.feature_pool == 0 || p.feature_pool > feature_bits {
        return bad(format!("feature pool {} must be in 1..={feature_bits}", p.feature_pool));
    }
    if p.classes == 0 || p.classes > class_bits {
        return bad(format!("class count {} must be in 1..={class_bits}", p.classes));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut objects = Vec::new();
    for class in 0..p.classes {
        for sample in 0..p.samples_per_class {
            let mut attempts = 0;
            let features = loop {
                let map: Vec<usize> = (0..location_bits)
                    .map(|_| rng.random_range(0..p.feature_pool))
                    .collect();
                if seen.insert(map.clone()) {
                    break map;
                }
                attempts += 1;
                if attempts == MAX_ATTEMPTS {
                    return bad("feature pool too small for distinct object maps".into());
                }
            };
            objects.push(ObjectMap {
                class,
                sample,
                features,
            });
        }
    }
    let dataset = Dataset {
        layout: p.layout,
        grid: p.grid,
        objects,
    };
    let mut orders = Vec::new();
    let mut infer_trace = Vec::new();
    for o in &dataset.objects {
        let mut order: Vec<usize> = (0..location_bits).collect();
        if p.order == SensationOrder::Random {
            order.shuffle(&mut rng);
        }
        infer_trace.push(TraceRecord::op(CommandKind::Reset));
        infer_trace.extend(order.iter().map(|&l| TraceRecord::infer(o.features[l], l)));
        orders.push(order);
    }
    Ok(Generated {
        store_trace: dataset.store_trace(),
        dataset,
        infer_trace,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_counts() {
        let g = generate(&GenParams::default()).unwrap();
        assert_eq!(g.store_trace.len(), 10 * 25);
        assert_eq!(g.infer_trace.len(), 10 * 26);
        let g = generate(&GenParams {
            samples_per_class: 20,
            ..GenParams::default()
        })
        .unwrap();
        assert_eq!(g.store_trace.len(), 5000);
    }

    #[test]
    fn same_seed_same_output() {
        let p = GenParams {
            order: SensationOrder::Random,
            seed: 42,
            ..GenParams::default()
        };
        assert_eq!(generate(&p).unwrap(), generate(&p).unwrap());
        let other = generate(&GenParams { seed: 43, ..p.clone() }).unwrap();
        assert_ne!(generate(&p).unwrap().dataset, other.dataset);
    }

    #[test]
    fn maps_are_distinct_and_in_range() {
        let g = generate(&GenParams {
            feature_pool: 2,
            samples_per_class: 3,
            ..GenParams::default()
        })
        .unwrap();
        let maps: BTreeSet<_> = g.dataset.objects.iter().map(|o| o.features.clone()).collect();
        assert_eq!(maps.len(), 30);
        assert!(g.dataset.objects.iter().all(|o| o.features.iter().all(|&f| f < 2)));
    }

    #[test]
    fn parameter_errors() {
        let grid = GenParams {
            grid: [4, 5],
            ..GenParams::default()
        };
        assert!(matches!(generate(&grid), Err(HarnessError::Params(_))));
        let pool = GenParams {
            feature_pool: 129,
            ..GenParams::default()
        };
        assert!(generate(&pool).is_err());
        let classes = GenParams {
            classes: 11,
            ..GenParams::default()
        };
        assert!(generate(&classes).is_err());
        let tiny = GenParams {
            layout: [1, 1, 3],
            grid: [1, 1],
            feature_pool: 1,
            classes: 2,
            ..GenParams::default()
        };
        assert!(generate(&tiny).is_err());
    }
}
