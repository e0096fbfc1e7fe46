//! Golden model with set semantics. Triplets are index tuples, the
//! identification state is a set of class indices, and nothing here touches
//! bit strings or the memory array, so a matching bug has to be written twice
//! to go unnoticed.

use std::collections::BTreeSet;

use crate::controller::Outcome;
use crate::preprocess::PaddingMode;

/// A stored association. `feature` holds the hot feature indices (one for
/// one-hot features, several for k-hot).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub feature: Vec<usize>,
    pub location: usize,
    pub class: usize,
}

impl Triplet {
    pub fn new(mut feature: Vec<usize>, location: usize, class: usize) -> Self {
        feature.sort_unstable();
        feature.dedup();
        Self {
            feature,
            location,
            class,
        }
    }

    pub fn one_hot(feature: usize, location: usize, class: usize) -> Self {
        Self::new(vec![feature], location, class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractCommand {
    Clear,
    Reset,
    Store(Triplet),
    Delete(Triplet),
    Infer { feature: Vec<usize>, location: usize },
    PredictFeature { location: usize, padding: usize },
    PredictLocation { feature: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbstractResponse {
    pub outcome: Option<Outcome>,
    pub full: bool,
    /// Valid classes reported by INFER.
    pub classes: BTreeSet<usize>,
    pub features: BTreeSet<usize>,
    pub locations: BTreeSet<usize>,
    /// Classes reported by PREDICT.
    pub predicted_classes: BTreeSet<usize>,
}

impl AbstractResponse {
    fn status(outcome: Outcome, full: bool) -> Self {
        Self {
            outcome: Some(outcome),
            full,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Oracle {
    class_count: usize,
    location_count: usize,
    padding_mode: PaddingMode,
    capacity: usize,
    triplets: BTreeSet<Triplet>,
    valid: BTreeSet<usize>,
}

impl Oracle {
    pub fn new(class_count: usize, location_count: usize, padding_mode: PaddingMode, capacity: usize) -> Self {
        Self {
            class_count,
            location_count,
            padding_mode,
            capacity,
            triplets: BTreeSet::new(),
            valid: (0..class_count).collect(),
        }
    }

    /// Seed the stored set directly, e.g. from a memory image.
    pub fn with_triplets(mut self, triplets: impl IntoIterator<Item = Triplet>) -> Self {
        self.triplets.extend(triplets);
        assert!(self.triplets.len() <= self.capacity);
        self
    }

    pub fn triplets(&self) -> &BTreeSet<Triplet> {
        &self.triplets
    }

    pub fn valid_classes(&self) -> &BTreeSet<usize> {
        &self.valid
    }

    fn all_classes(&self) -> BTreeSet<usize> {
        (0..self.class_count).collect()
    }

    fn full(&self) -> bool {
        self.triplets.len() == self.capacity
    }

    /// Location indices within `padding` of `center`.
    fn neighbourhood(&self, center: usize, padding: usize) -> BTreeSet<usize> {
        let within = |a: usize, b: usize| a.max(b) - a.min(b) <= padding;
        match self.padding_mode {
            PaddingMode::Linear1D => (0..self.location_count).filter(|&l| within(l, center)).collect(),
            PaddingMode::Grid2D { cols, .. } => (0..self.location_count)
                .filter(|&l| within(l / cols, center / cols) && within(l % cols, center % cols))
                .collect(),
        }
    }

    pub fn apply(&mut self, cmd: &AbstractCommand) -> AbstractResponse {
        match cmd {
            AbstractCommand::Clear => {
                self.triplets.clear();
                self.valid = self.all_classes();
                AbstractResponse::status(Outcome::Success, false)
            }
            AbstractCommand::Reset => {
                self.valid = self.all_classes();
                AbstractResponse::status(Outcome::Success, self.full())
            }
            AbstractCommand::Store(t) => {
                self.valid = self.all_classes();
                let outcome = if self.triplets.contains(t) || self.full() {
                    Outcome::StoreFailed
                } else {
                    self.triplets.insert(t.clone());
                    Outcome::Success
                };
                AbstractResponse::status(outcome, self.full())
            }
            AbstractCommand::Delete(t) => {
                self.valid = self.all_classes();
                let outcome = if self.triplets.remove(t) {
                    Outcome::Success
                } else {
                    Outcome::DeleteFailed
                };
                AbstractResponse::status(outcome, self.full())
            }
            AbstractCommand::Infer { feature, location } => {
                let holders: BTreeSet<usize> = self
                    .triplets
                    .iter()
                    .filter(|t| &t.feature == feature && t.location == *location)
                    .map(|t| t.class)
                    .collect();
                let narrowed: BTreeSet<usize> = holders.intersection(&self.valid).copied().collect();
                let (outcome, classes) = if !narrowed.is_empty() {
                    (Outcome::Success, narrowed)
                } else if !holders.is_empty() {
                    (Outcome::ContextSwitch, holders)
                } else {
                    self.valid = self.all_classes();
                    return AbstractResponse::status(Outcome::InferFailed, self.full());
                };
                self.valid = classes.clone();
                AbstractResponse {
                    classes,
                    ..AbstractResponse::status(outcome, self.full())
                }
            }
            AbstractCommand::PredictFeature { location, padding } => {
                let window = self.neighbourhood(*location, *padding);
                let mut r = AbstractResponse::status(Outcome::Success, self.full());
                for t in &self.triplets {
                    if self.valid.contains(&t.class) && window.contains(&t.location) {
                        r.features.extend(t.feature.iter().copied());
                        r.predicted_classes.insert(t.class);
                    }
                }
                r
            }
            AbstractCommand::PredictLocation { feature } => {
                let mut r = AbstractResponse::status(Outcome::Success, self.full());
                for t in &self.triplets {
                    if self.valid.contains(&t.class) && &t.feature == feature {
                        r.locations.insert(t.location);
                        r.predicted_classes.insert(t.class);
                    }
                }
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn oracle() -> Oracle {
        Oracle::new(3, 3, PaddingMode::Linear1D, 4)
    }

    #[test]
    fn infer_success_then_context_switch() {
        let mut o = oracle();
        o.apply(&AbstractCommand::Store(Triplet::one_hot(1, 1, 1)));
        o.apply(&AbstractCommand::Store(Triplet::one_hot(1, 2, 2)));
        let r = o.apply(&AbstractCommand::Infer {
            feature: vec![1],
            location: 1,
        });
        assert_eq!(r.outcome, Some(Outcome::Success));
        assert_eq!(r.classes, set(&[1]));
        let r = o.apply(&AbstractCommand::Infer {
            feature: vec![1],
            location: 2,
        });
        assert_eq!(r.outcome, Some(Outcome::ContextSwitch));
        assert_eq!(r.classes, set(&[2]));
        assert_eq!(o.valid_classes(), &set(&[2]));
    }

    #[test]
    fn infer_on_empty_fails_and_resets() {
        let mut o = oracle();
        o.valid = set(&[0]);
        let r = o.apply(&AbstractCommand::Infer {
            feature: vec![0],
            location: 0,
        });
        assert_eq!(r.outcome, Some(Outcome::InferFailed));
        assert_eq!(o.valid_classes(), &set(&[0, 1, 2]));
    }

    #[test]
    fn store_delete_and_capacity() {
        let mut o = Oracle::new(3, 3, PaddingMode::Linear1D, 2);
        let a = Triplet::one_hot(0, 0, 0);
        let b = Triplet::one_hot(1, 1, 1);
        assert_eq!(
            o.apply(&AbstractCommand::Store(a.clone())).outcome,
            Some(Outcome::Success)
        );
        assert_eq!(
            o.apply(&AbstractCommand::Store(a.clone())).outcome,
            Some(Outcome::StoreFailed)
        );
        let r = o.apply(&AbstractCommand::Store(b.clone()));
        assert_eq!((r.outcome, r.full), (Some(Outcome::Success), true));
        let r = o.apply(&AbstractCommand::Store(Triplet::one_hot(2, 2, 2)));
        assert_eq!((r.outcome, r.full), (Some(Outcome::StoreFailed), true));
        let r = o.apply(&AbstractCommand::Delete(b));
        assert_eq!((r.outcome, r.full), (Some(Outcome::Success), false));
        let r = o.apply(&AbstractCommand::Delete(Triplet::one_hot(2, 2, 2)));
        assert_eq!(r.outcome, Some(Outcome::DeleteFailed));
    }

    #[test]
    fn predictions_respect_valid_classes_and_padding() {
        let mut o = Oracle::new(3, 5, PaddingMode::Linear1D, 8);
        for t in [
            Triplet::one_hot(0, 2, 0),
            Triplet::one_hot(1, 1, 1),
            Triplet::one_hot(2, 4, 2),
            Triplet::one_hot(0, 3, 1),
        ] {
            o.apply(&AbstractCommand::Store(t));
        }
        let r = o.apply(&AbstractCommand::PredictFeature {
            location: 2,
            padding: 1,
        });
        assert_eq!(r.features, set(&[0, 1]));
        assert_eq!(r.predicted_classes, set(&[0, 1]));
        assert!(r.locations.is_empty());
        o.apply(&AbstractCommand::Infer {
            feature: vec![1],
            location: 1,
        });
        let r = o.apply(&AbstractCommand::PredictLocation { feature: vec![0] });
        assert_eq!(r.locations, set(&[3]));
        assert_eq!(r.predicted_classes, set(&[1]));
        assert_eq!(o.valid_classes(), &set(&[1]));
    }

    #[test]
    fn grid_neighbourhood_is_chebyshev() {
        let o = Oracle::new(1, 9, PaddingMode::Grid2D { rows: 3, cols: 3 }, 1);
        assert_eq!(o.neighbourhood(4, 1), (0..9).collect());
        assert_eq!(o.neighbourhood(0, 1), set(&[0, 1, 3, 4]));
        assert_eq!(o.neighbourhood(0, 0), set(&[0]));
    }
}
