use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TraceRecord;
use crate::controller::Outcome;
use crate::preprocess::CommandKind;
use crate::system::{CycleReport, SubmitError, System};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordReport {
    pub seq: usize,
    /// The replayed record, so a report can be turned back into its trace.
    pub record: TraceRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_error: Option<String>,
    pub classes: Vec<usize>,
    pub features: Vec<usize>,
    pub locations: Vec<usize>,
    pub predicted_classes: Vec<usize>,
    pub cycles: u32,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub records: usize,
    pub total_cycles: u64,
    pub identifications_completed: usize,
    /// Mean INFERs needed to reach a one-hot class, over completed identifications.
    pub mean_sensations_to_one_hot: Option<f64>,
    pub context_switches: usize,
    pub errors_by_kind: BTreeMap<String, usize>,
    pub input_errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RunReport {
    pub records: Vec<RecordReport>,
    pub summary: Summary,
}

impl RunReport {
    pub fn has_input_errors(&self) -> bool {
        self.summary.input_errors > 0
    }

    /// One JSON line per record followed by a `{"summary":..}` line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("report serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "summary": self.summary }).to_string());
        out.push('\n');
        out
    }

    /// The command stream this report was produced from.
    pub fn trace(&self) -> Vec<TraceRecord> {
        self.records.iter().map(|r| r.record.clone()).collect()
    }
}

/// Tracks the current identification: INFERs since the valid set was last
/// reset, and whether a one-hot answer has been reached yet.
#[derive(Default)]
struct Identification {
    sensations: usize,
    done: bool,
}

/// Replay `trace` through `system`, calling `on_cycle` for every clock cycle.
pub fn run_trace(
    system: &mut System,
    trace: &[TraceRecord],
    default_padding: usize,
    mut on_cycle: impl FnMut(&CycleReport),
) -> RunReport {
    let layout = *system.layout();
    let mut report = RunReport::default();
    let mut ident = Identification::default();
    let mut one_hot_at = Vec::new();

    for (seq, record) in trace.iter().enumerate() {
        let mut rr = RecordReport {
            seq,
            record: record.clone(),
            outcome: None,
            input_error: None,
            classes: Vec::new(),
            features: Vec::new(),
            locations: Vec::new(),
            predicted_classes: Vec::new(),
            cycles: 0,
            full: system.status().full,
        };
        let result = record.to_command(&layout, default_padding).and_then(|cmd| {
            system.run_traced(cmd).map_err(|e| match e {
                SubmitError::Input(e) => e.to_string(),
                SubmitError::Busy(e) => e.to_string(),
            })
        });
        match result {
            Err(message) => {
                rr.input_error = Some(message);
                report.summary.input_errors += 1;
            }
            Ok((resp, cycles)) => {
                cycles.iter().for_each(&mut on_cycle);
                let outcome = resp.outcome();
                rr.outcome = Some(outcome);
                rr.classes = resp.classes.indices();
                rr.features = resp.prediction.features.indices();
                rr.locations = resp.prediction.locations.indices();
                rr.predicted_classes = resp.prediction.classes.indices();
                rr.cycles = resp.cycles;
                rr.full = resp.full();
                report.summary.total_cycles += u64::from(resp.cycles);
                if outcome.is_error() {
                    *report
                        .summary
                        .errors_by_kind
                        .entry(outcome.name().to_string())
                        .or_default() += 1;
                }
                match (record.op, outcome) {
                    (CommandKind::Infer, Outcome::Success | Outcome::ContextSwitch) => {
                        if outcome == Outcome::ContextSwitch {
                            report.summary.context_switches += 1;
                            ident = Identification::default();
                        }
                        ident.sensations += 1;
                        if !ident.done && resp.classes.is_one_hot() {
                            ident.done = true;
                            one_hot_at.push(ident.sensations);
                        }
                    }
                    (CommandKind::PredictFeature | CommandKind::PredictLocation, _) => {}
                    _ => ident = Identification::default(),
                }
            }
        }
        report.records.push(rr);
    }
    report.summary.records = report.records.len();
    report.summary.identifications_completed = one_hot_at.len();
    if !one_hot_at.is_empty() {
        report.summary.mean_sensations_to_one_hot =
            Some(one_hot_at.iter().sum::<usize>() as f64 / one_hot_at.len() as f64);
    }
    report
}
