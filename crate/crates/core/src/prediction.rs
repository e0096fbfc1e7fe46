//! Combinational condenser folding the matched rows of a PREDICT lookup into
//! k-hot feature, location and class vectors.

use crate::preprocess::CommandKind;
use crate::rtcam::Entry;
use crate::sdr::{SdrLayout, SectionVec};

/// All-zero in every section means the prediction failed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredictionOutput {
    pub features: SectionVec,
    pub locations: SectionVec,
    pub classes: SectionVec,
}

impl PredictionOutput {
    pub fn empty(layout: &SdrLayout) -> Self {
        Self {
            features: SectionVec::zeros(layout.feature_bits()),
            locations: SectionVec::zeros(layout.location_bits()),
            classes: SectionVec::zeros(layout.class_bits()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_zero() && self.locations.is_zero() && self.classes.is_zero()
    }
}

/// OR-reduce `matched` section by section. PREDICT_FEATURE holds the
/// location output low, PREDICT_LOCATION holds the feature output low, and
/// every other command yields nothing.
pub fn condense<'a>(
    matched: impl IntoIterator<Item = &'a Entry>,
    kind: CommandKind,
    layout: &SdrLayout,
) -> PredictionOutput {
    let mut out = PredictionOutput::empty(layout);
    if !kind.is_predict() {
        return out;
    }
    for e in matched {
        match kind {
            CommandKind::PredictFeature => out.features.or_assign(&e.feature(layout)),
            _ => out.locations.or_assign(&e.location(layout)),
        }
        out.classes.or_assign(&e.class(layout));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdr::Sdr;
    use proptest::prelude::*;

    fn l333() -> SdrLayout {
        SdrLayout::new(3, 3, 3).unwrap()
    }

    fn entry(text: &str) -> Entry {
        Entry::new(Sdr::parse(text, &l333()).unwrap(), true, false)
    }

    fn strings(p: &PredictionOutput) -> (String, String, String) {
        (p.features.to_string(), p.locations.to_string(), p.classes.to_string())
    }

    #[test]
    fn condense_examples() {
        let rows = [entry("001|010|100"), entry("100|010|010")];
        let p = condense(&rows, CommandKind::PredictFeature, &l333());
        assert_eq!(strings(&p), ("101".into(), "000".into(), "110".into()));

        let p = condense(&rows, CommandKind::PredictLocation, &l333());
        assert_eq!(strings(&p), ("000".into(), "010".into(), "110".into()));

        let p = condense(&[], CommandKind::PredictLocation, &l333());
        assert!(p.is_empty());

        for kind in [CommandKind::Infer, CommandKind::Store, CommandKind::Clear] {
            assert!(condense(&rows, kind, &l333()).is_empty());
        }
    }

    proptest! {
        #[test]
        fn condense_is_sectionwise_or(
            rows in proptest::collection::vec((0..3usize, 0..3usize, 0..3usize), 0..8),
            feature_side in any::<bool>(),
        ) {
            let layout = l333();
            let entries: Vec<Entry> = rows
                .iter()
                .map(|&(f, l, c)| Entry::new(Sdr::from_indices(&[f], Some(l), Some(c), &layout).unwrap(), true, false))
                .collect();
            let kind = if feature_side { CommandKind::PredictFeature } else { CommandKind::PredictLocation };
            let p = condense(&entries, kind, &layout);
            prop_assert!(p.features.is_zero() || p.locations.is_zero());
            prop_assert!(p.classes.count_ones() <= entries.len());
            let mut classes: Vec<usize> = rows.iter().map(|r| r.2).collect();
            classes.sort_unstable();
            classes.dedup();
            prop_assert_eq!(p.classes.indices(), classes.clone());
            prop_assert_eq!(p.classes.is_one_hot(), classes.len() == 1);
            let side: Vec<usize> = {
                let mut v: Vec<usize> = rows.iter().map(|r| if feature_side { r.0 } else { r.1 }).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let got = if feature_side { p.features.indices() } else { p.locations.indices() };
            prop_assert_eq!(got, side);
        }
    }
}
