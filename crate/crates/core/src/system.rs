//! The device facade: preprocess, memory array, controller and prediction
//! map wired together behind `submit` / `step` / `run`.
//!
//! Preprocessing and prediction are combinational and happen at submit time
//! and on the final cycle respectively; only controller transitions consume
//! clock cycles.

use thiserror::Error;

use crate::controller::{Busy, Controller, ControllerState, Feedback, MicroOp, Outcome, StatusOut};
use crate::prediction::{condense, PredictionOutput};
use crate::preprocess::{build_dc, validate_command, CommandKind, InputError, MacroCommand, PaddingMode};
use crate::rtcam::{ImageError, MemoryArray};
use crate::sdr::{DcMask, SdrLayout, SectionVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NertcamConfig {
    pub layout: SdrLayout,
    pub capacity: usize,
    pub padding_mode: PaddingMode,
    pub khot_features: bool,
}

impl NertcamConfig {
    pub fn new(layout: SdrLayout, capacity: usize) -> Self {
        Self {
            layout,
            capacity,
            padding_mode: PaddingMode::Linear1D,
            khot_features: false,
        }
    }

    /// 128/25/10 layout on a 5x5 location grid.
    pub fn mnist(capacity: usize) -> Self {
        Self {
            padding_mode: PaddingMode::Grid2D { rows: 5, cols: 5 },
            ..Self::new(SdrLayout::mnist(), capacity)
        }
    }

    pub fn with_padding_mode(mut self, mode: PaddingMode) -> Self {
        self.padding_mode = mode;
        self
    }

    pub fn with_khot_features(mut self, on: bool) -> Self {
        self.khot_features = on;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.capacity == 0 {
            return Err(ConfigError::ZeroCapacity);
        }
        self.padding_mode
            .check(self.layout.location_bits())
            .map_err(ConfigError::Grid)
    }

    /// Bits per stored row, including the valid and empty bits.
    pub fn entry_bits(&self) -> usize {
        self.layout.total() + 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("capacity must be at least 1")]
    ZeroCapacity,
    #[error("{0}")]
    Grid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubmitError {
    #[error(transparent)]
    Busy(#[from] Busy),
    #[error(transparent)]
    Input(#[from] InputError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("device is busy")]
    Busy,
    #[error("image has {found} rows, device has {expected}")]
    Capacity { expected: usize, found: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Result of one completed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub kind: CommandKind,
    pub status: StatusOut,
    /// Valid classes after INFER; zero for every other command.
    pub classes: SectionVec,
    /// Condensed rows for PREDICT; zero for every other command.
    pub prediction: PredictionOutput,
    pub cycles: u32,
}

impl Response {
    pub fn outcome(&self) -> Outcome {
        self.status.outcome
    }

    pub fn full(&self) -> bool {
        self.status.full
    }
}

/// What happened in one clock cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// Global cycle number, 1-based; 0 on an idle step.
    pub cycle: u64,
    pub from: ControllerState,
    pub to: ControllerState,
    pub op: Option<MicroOp>,
    /// valid_entry after this cycle's micro-op.
    pub valid_entry: bool,
    pub busy: bool,
    pub response: Option<Response>,
}

/// Status lines plus occupancy. Occupancy is instrumentation, not a device pin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemStatus {
    pub busy: bool,
    pub full: bool,
    pub last_outcome: Option<Outcome>,
    pub occupancy: usize,
}

#[derive(Debug, Clone)]
struct InFlight {
    cmd: MacroCommand,
    dc: DcMask,
    cycles: u32,
    classes: SectionVec,
}

#[derive(Debug, Clone)]
pub struct System {
    config: NertcamConfig,
    memory: MemoryArray,
    controller: Controller,
    in_flight: Option<InFlight>,
    feedback: Feedback,
    total_cycles: u64,
    last_outcome: Option<Outcome>,
}

impl System {
    pub fn new(config: NertcamConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self {
            memory: MemoryArray::new(config.layout, config.capacity),
            config,
            controller: Controller::new(),
            in_flight: None,
            feedback: Feedback::default(),
            total_cycles: 0,
            last_outcome: None,
        })
    }

    pub fn config(&self) -> &NertcamConfig {
        &self.config
    }

    pub fn layout(&self) -> &SdrLayout {
        &self.config.layout
    }

    pub fn memory(&self) -> &MemoryArray {
        &self.memory
    }

    pub fn state(&self) -> ControllerState {
        self.controller.state()
    }

    pub fn busy(&self) -> bool {
        self.controller.busy()
    }

    pub fn total_cycles(&self) -> u64 {
        self.total_cycles
    }

    pub fn status(&self) -> SystemStatus {
        SystemStatus {
            busy: self.busy(),
            full: self.memory.is_full(),
            last_outcome: self.last_outcome,
            occupancy: self.memory.occupancy(),
        }
    }

    /// Validate and latch a command. Nothing touches memory until `step`.
    pub fn submit(&mut self, cmd: MacroCommand) -> Result<(), SubmitError> {
        if self.busy() {
            return Err(Busy(self.controller.state()).into());
        }
        validate_command(&cmd, &self.config.layout, self.config.khot_features)?;
        let dc = build_dc(&cmd, &self.config.layout, self.config.padding_mode);
        self.controller.accept(cmd.kind)?;
        self.feedback = Feedback::default();
        self.in_flight = Some(InFlight {
            cmd,
            dc,
            cycles: 0,
            classes: SectionVec::zeros(self.config.layout.class_bits()),
        });
        Ok(())
    }

    /// Advance one clock cycle.
    pub fn step(&mut self) -> CycleReport {
        let from = self.controller.state();
        let Some(t) = self.controller.step(self.feedback) else {
            return CycleReport {
                cycle: 0,
                from,
                to: from,
                op: None,
                valid_entry: self.feedback.valid_entry,
                busy: false,
                response: None,
            };
        };
        let flight = self.in_flight.as_mut().expect("controller busy without a command");
        match t.op {
            MicroOp::Clear => {
                self.memory.micro_clear();
                self.feedback.valid_entry = false;
            }
            MicroOp::Reset => {
                self.memory.micro_reset();
                self.feedback.valid_entry = false;
            }
            MicroOp::Store => {
                self.feedback.store_full = self.memory.micro_store(&flight.cmd.input).is_err();
            }
            MicroOp::Delete => {
                self.memory.micro_delete();
            }
            MicroOp::Lookup { scope, mode, commit } => {
                let q = &flight.cmd.input;
                self.feedback.valid_entry = if commit {
                    self.memory.micro_lookup(q, &flight.dc, scope, mode)
                } else {
                    self.memory.micro_probe(q, &flight.dc, scope, mode)
                };
            }
            MicroOp::Validate => {
                flight.classes = self.memory.micro_validate();
            }
        }
        flight.cycles += 1;
        self.total_cycles += 1;

        let response = t.outcome.map(|outcome| {
            let flight = self.in_flight.take().expect("in flight");
            let layout = &self.config.layout;
            let kind = flight.cmd.kind;
            let prediction = condense(self.memory.mem_out(), kind, layout);
            let classes = match (kind, outcome) {
                (CommandKind::Infer, Outcome::Success | Outcome::ContextSwitch) => flight.classes,
                _ => SectionVec::zeros(layout.class_bits()),
            };
            self.last_outcome = Some(outcome);
            Response {
                kind,
                status: StatusOut::new(outcome, false, self.memory.is_full()),
                classes,
                prediction,
                cycles: flight.cycles,
            }
        });
        CycleReport {
            cycle: self.total_cycles,
            from,
            to: t.next,
            op: Some(t.op),
            valid_entry: self.feedback.valid_entry,
            busy: self.controller.busy(),
            response,
        }
    }

    /// Submit and clock until the command completes.
    pub fn run(&mut self, cmd: MacroCommand) -> Result<Response, SubmitError> {
        self.run_traced(cmd).map(|(r, _)| r)
    }

    /// As [`run`](Self::run), also returning every cycle's report.
    pub fn run_traced(&mut self, cmd: MacroCommand) -> Result<(Response, Vec<CycleReport>), SubmitError> {
        self.submit(cmd)?;
        let mut cycles = Vec::with_capacity(4);
        loop {
            let mut report = self.step();
            if let Some(response) = report.response.take() {
                cycles.push(report);
                return Ok((response, cycles));
            }
            cycles.push(report);
        }
    }

    pub fn save_image(&self) -> String {
        self.memory.to_image()
    }

    /// Replace the memory contents. The image must have exactly `capacity` rows.
    pub fn load_image(&mut self, text: &str) -> Result<(), SystemError> {
        if self.busy() {
            return Err(SystemError::Busy);
        }
        let memory = MemoryArray::from_image(text, self.config.layout)?;
        if memory.capacity() != self.config.capacity {
            return Err(SystemError::Capacity {
                expected: self.config.capacity,
                found: memory.capacity(),
            });
        }
        self.memory = memory;
        Ok(())
    }
}
