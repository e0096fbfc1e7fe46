//! Four-state Mealy controller. Each clock cycle takes one transition and
//! issues one micro-op to the memory array; the valid/not-valid result of a
//! lookup selects the next transition.
//!
//! ```text
//! SS --CLEAR/clear--> SS                    (1 cycle)
//! SS --RESET/reset--> SS                    (1 cycle)
//! SS --PREDICT/lookup, not committed--> SS  (1 cycle)
//! SS --STORE|DELETE/lookup(all rows)--> FL
//! SS --INFER/lookup(valid rows)--> FL
//! FL  STORE  V  /reset    --> SS  Store_Failed   (2)
//! FL  STORE  NV /store    --> IR
//! FL  DELETE V  /delete   --> IR
//! FL  DELETE NV /reset    --> SS  Delete_Failed  (2)
//! FL  INFER  V  /validate --> SS  Success        (2)
//! FL  INFER  NV /reset    --> IR
//! IR  STORE|DELETE /reset --> SS  Success        (3)
//! IR  INFER  /lookup      --> SL
//! SL  V  /validate        --> SS  Context_Switch (4)
//! SL  NV /reset           --> SS  Infer_Failed   (4)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::preprocess::CommandKind;
use crate::rtcam::{LookupScope, MatchMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ControllerState {
    /// SS: idle, the only state accepting commands.
    #[default]
    Starting,
    /// FL
    FirstLookup,
    /// IR
    InternalReset,
    /// SL
    SecondLookup,
}

impl ControllerState {
    pub fn code(self) -> &'static str {
        match self {
            ControllerState::Starting => "SS",
            ControllerState::FirstLookup => "FL",
            ControllerState::InternalReset => "IR",
            ControllerState::SecondLookup => "SL",
        }
    }
}

impl fmt::Display for ControllerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MicroOp {
    Clear,
    Reset,
    Store,
    Delete,
    /// Search with the pending command's query and DC mask. With
    /// `commit = false` the valid bits are not updated.
    Lookup {
        scope: LookupScope,
        mode: MatchMode,
        commit: bool,
    },
    Validate,
}

impl MicroOp {
    pub fn name(self) -> &'static str {
        match self {
            MicroOp::Clear => "clear",
            MicroOp::Reset => "reset",
            MicroOp::Store => "store",
            MicroOp::Delete => "delete",
            MicroOp::Lookup { .. } => "lookup",
            MicroOp::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    #[serde(rename = "Store_Failed")]
    StoreFailed,
    #[serde(rename = "Delete_Failed")]
    DeleteFailed,
    #[serde(rename = "Infer_Failed")]
    InferFailed,
    #[serde(rename = "Context_Switch")]
    ContextSwitch,
    RejectedBusy,
}

impl Outcome {
    pub fn is_error(self) -> bool {
        matches!(
            self,
            Outcome::StoreFailed | Outcome::DeleteFailed | Outcome::InferFailed
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Success => "Success",
            Outcome::StoreFailed => "Store_Failed",
            Outcome::DeleteFailed => "Delete_Failed",
            Outcome::InferFailed => "Infer_Failed",
            Outcome::ContextSwitch => "Context_Switch",
            Outcome::RejectedBusy => "RejectedBusy",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Status lines driven back to the agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StatusOut {
    pub outcome: Outcome,
    pub busy: bool,
    pub error: bool,
    pub full: bool,
}

impl StatusOut {
    pub fn new(outcome: Outcome, busy: bool, full: bool) -> Self {
        Self {
            outcome,
            busy,
            error: outcome.is_error(),
            full,
        }
    }
}

/// Inputs the controller samples from the memory array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Feedback {
    /// OR of the last lookup's match vector.
    pub valid_entry: bool,
    /// The last store micro-op found no empty row.
    pub store_full: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub next: ControllerState,
    pub op: MicroOp,
    /// Set on the transition that returns to SS.
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("controller busy in state {0}")]
pub struct Busy(pub ControllerState);

const fn lookup(scope: LookupScope, commit: bool) -> MicroOp {
    MicroOp::Lookup {
        scope,
        mode: MatchMode::Equality,
        commit,
    }
}

/// The transition table.
///
/// # Panics
///
/// On a (state, command) pair the controller can never reach, such as FL
/// with a pending CLEAR.
pub fn transition(state: ControllerState, pending: CommandKind, fb: Feedback) -> Transition {
    use CommandKind::*;
    use ControllerState::*;
    let t = |next, op, outcome| Transition { next, op, outcome };
    let v = fb.valid_entry;
    match (state, pending) {
        (Starting, Clear) => t(Starting, MicroOp::Clear, Some(Outcome::Success)),
        (Starting, Reset) => t(Starting, MicroOp::Reset, Some(Outcome::Success)),
        (Starting, PredictFeature | PredictLocation) => {
            t(Starting, lookup(LookupScope::ValidOnly, false), Some(Outcome::Success))
        }
        (Starting, Store | Delete) => t(FirstLookup, lookup(LookupScope::All, true), None),
        (Starting, Infer) => t(FirstLookup, lookup(LookupScope::ValidOnly, true), None),

        (FirstLookup, Store) if v => t(Starting, MicroOp::Reset, Some(Outcome::StoreFailed)),
        (FirstLookup, Store) => t(InternalReset, MicroOp::Store, None),
        (FirstLookup, Delete) if v => t(InternalReset, MicroOp::Delete, None),
        (FirstLookup, Delete) => t(Starting, MicroOp::Reset, Some(Outcome::DeleteFailed)),
        (FirstLookup, Infer) if v => t(Starting, MicroOp::Validate, Some(Outcome::Success)),
        (FirstLookup, Infer) => t(InternalReset, MicroOp::Reset, None),

        (InternalReset, Store) if fb.store_full => t(Starting, MicroOp::Reset, Some(Outcome::StoreFailed)),
        (InternalReset, Store | Delete) => t(Starting, MicroOp::Reset, Some(Outcome::Success)),
        (InternalReset, Infer) => t(SecondLookup, lookup(LookupScope::ValidOnly, true), None),

        (SecondLookup, Infer) if v => t(Starting, MicroOp::Validate, Some(Outcome::ContextSwitch)),
        (SecondLookup, Infer) => t(Starting, MicroOp::Reset, Some(Outcome::InferFailed)),

        (state, pending) => panic!("unreachable controller transition: {state} with {pending} pending"),
    }
}

/// Controller registers: current state and the command in flight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Controller {
    state: ControllerState,
    pending: Option<CommandKind>,
}

impl Controller {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> ControllerState {
        self.state
    }

    pub fn pending(&self) -> Option<CommandKind> {
        self.pending
    }

    /// Busy from acceptance until the command's final transition lands in SS.
    pub fn busy(&self) -> bool {
        self.pending.is_some()
    }

    pub fn accept(&mut self, kind: CommandKind) -> Result<(), Busy> {
        if self.busy() {
            return Err(Busy(self.state));
        }
        self.pending = Some(kind);
        Ok(())
    }

    /// Take one transition, or `None` when idle.
    pub fn step(&mut self, fb: Feedback) -> Option<Transition> {
        let pending = self.pending?;
        let t = transition(self.state, pending, fb);
        self.state = t.next;
        if t.outcome.is_some() {
            debug_assert_eq!(t.next, ControllerState::Starting);
            self.pending = None;
        }
        Some(t)
    }
}
