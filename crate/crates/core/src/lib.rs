//! Behavioral, cycle-accounting model of NeRTCAM, a reverse ternary
//! content-addressable memory that stores {feature, location, class}
//! triplets for reference-frame style object identification.
//!
//! Stored rows are fully specified binary triplets; queries carry don't-care
//! bits. The device executes seven agent commands (CLEAR, RESET, STORE,
//! DELETE, INFER, PREDICT_FEATURE, PREDICT_LOCATION) as sequences of
//! single-cycle micro-ops, with the same cycle counts and error signals as
//! the hardware controller:
//!
//! | command | cycles |
//! |---------|--------|
//! | CLEAR, RESET, PREDICT | 1 |
//! | STORE, DELETE | 2 on failure, 3 on success |
//! | INFER | 2 on success, 4 on context switch or failure |
//!
//! ```
//! use nertcam::{MacroCommand, NertcamConfig, Outcome, Sdr, SdrLayout, System};
//!
//! let layout = SdrLayout::new(3, 3, 3).unwrap();
//! let mut cam = System::new(NertcamConfig::new(layout, 8)).unwrap();
//! let sdr = |s| Sdr::parse(s, &layout).unwrap();
//!
//! cam.run(MacroCommand::store(sdr("001|010|100"))).unwrap();
//! cam.run(MacroCommand::store(sdr("001|100|010"))).unwrap();
//!
//! let r = cam.run(MacroCommand::infer(sdr("001|010|000"))).unwrap();
//! assert_eq!(r.outcome(), Outcome::Success);
//! assert_eq!(r.cycles, 2);
//! assert_eq!(r.classes.to_string(), "100");
//! ```
//!
//! Modules, bottom up: [`sdr`] bit strings and match predicates,
//! [`preprocess`] input checks and don't-care masks, [`rtcam`] the memory
//! array, [`controller`] the state machine, [`prediction`] the output
//! condenser, [`system`] the wired device, [`oracle`] an independent
//! set-level model for differential testing, and [`harness`] trace tooling.

pub mod controller;
pub mod harness;
pub mod oracle;
pub mod prediction;
pub mod preprocess;
pub mod rtcam;
pub mod sdr;
pub mod system;

pub use controller::{ControllerState, MicroOp, Outcome, StatusOut};
pub use prediction::PredictionOutput;
pub use preprocess::{CommandKind, InputError, MacroCommand, PaddingMode};
pub use rtcam::{Entry, LookupScope, MatchMode, MemoryArray};
pub use sdr::{DcMask, Sdr, SdrLayout, Section, SectionVec};
pub use system::{CycleReport, NertcamConfig, Response, SubmitError, System, SystemStatus};
