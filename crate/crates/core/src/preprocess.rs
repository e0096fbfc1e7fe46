//! Combinational front end: checks the shape of the agent's input vector for
//! each command and builds the don't-care mask, including fuzzy location
//! padding for feature prediction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sdr::{Bits, DcMask, Sdr, SdrLayout, Section, SectionVec};

/// Agent command. PREDICT comes in a feature and a location variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CommandKind {
    Clear,
    Reset,
    Store,
    Delete,
    Infer,
    PredictFeature,
    PredictLocation,
}

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        CommandKind::Clear,
        CommandKind::Reset,
        CommandKind::Store,
        CommandKind::Delete,
        CommandKind::Infer,
        CommandKind::PredictFeature,
        CommandKind::PredictLocation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Clear => "CLEAR",
            CommandKind::Reset => "RESET",
            CommandKind::Store => "STORE",
            CommandKind::Delete => "DELETE",
            CommandKind::Infer => "INFER",
            CommandKind::PredictFeature => "PREDICT_FEATURE",
            CommandKind::PredictLocation => "PREDICT_LOCATION",
        }
    }

    pub fn is_predict(self) -> bool {
        matches!(self, CommandKind::PredictFeature | CommandKind::PredictLocation)
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CommandKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CommandKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroCommand {
    pub kind: CommandKind,
    pub input: Sdr,
    pub padding: usize,
}

impl MacroCommand {
    pub fn new(kind: CommandKind, input: Sdr) -> Self {
        Self {
            kind,
            input,
            padding: 0,
        }
    }

    pub fn clear(layout: &SdrLayout) -> Self {
        Self::new(CommandKind::Clear, Sdr::zeros(layout))
    }

    pub fn reset(layout: &SdrLayout) -> Self {
        Self::new(CommandKind::Reset, Sdr::zeros(layout))
    }

    pub fn store(triplet: Sdr) -> Self {
        Self::new(CommandKind::Store, triplet)
    }

    pub fn delete(triplet: Sdr) -> Self {
        Self::new(CommandKind::Delete, triplet)
    }

    pub fn infer(pair: Sdr) -> Self {
        Self::new(CommandKind::Infer, pair)
    }

    pub fn predict_feature(location: Sdr, padding: usize) -> Self {
        Self {
            kind: CommandKind::PredictFeature,
            input: location,
            padding,
        }
    }

    pub fn predict_location(feature: Sdr) -> Self {
        Self::new(CommandKind::PredictLocation, feature)
    }
}

/// How location positions are arranged when widening the padding window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaddingMode {
    /// Neighbours are adjacent string positions.
    #[default]
    Linear1D,
    /// Row-major grid; neighbours within Chebyshev distance.
    Grid2D { rows: usize, cols: usize },
}

impl PaddingMode {
    pub fn check(&self, location_bits: usize) -> Result<(), String> {
        match *self {
            PaddingMode::Linear1D => Ok(()),
            PaddingMode::Grid2D { rows, cols } if rows * cols == location_bits => Ok(()),
            PaddingMode::Grid2D { rows, cols } => Err(format!(
                "grid {rows}x{cols} does not cover {location_bits} location bits"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("input is {found} bits wide, layout needs {expected}")]
    Width { expected: usize, found: usize },
    #[error("{0} section must be one-hot")]
    NotOneHot(Section),
    #[error("{0} section must be nonzero")]
    Empty(Section),
    #[error("{0} section must be all-zero")]
    NotZero(Section),
    #[error("padding {padding} is only accepted on PREDICT_FEATURE, not {kind}")]
    PaddingNotAllowed { kind: CommandKind, padding: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    OneHot,
    /// Any nonzero pattern (k-hot features).
    Nonzero,
    Zero,
}

fn section_shapes(kind: CommandKind, khot_features: bool) -> Option<[Shape; 3]> {
    use Shape::*;
    let feature = if khot_features { Nonzero } else { OneHot };
    match kind {
        CommandKind::Clear | CommandKind::Reset => None,
        CommandKind::Store | CommandKind::Delete => Some([feature, OneHot, OneHot]),
        CommandKind::Infer => Some([feature, OneHot, Zero]),
        CommandKind::PredictFeature => Some([Zero, OneHot, Zero]),
        CommandKind::PredictLocation => Some([feature, Zero, Zero]),
    }
}

/// Check the input against the section shape its command requires.
///
/// CLEAR and RESET accept any input; it is discarded.
pub fn validate_command(cmd: &MacroCommand, layout: &SdrLayout, khot_features: bool) -> Result<(), InputError> {
    if cmd.input.width() != layout.total() {
        return Err(InputError::Width {
            expected: layout.total(),
            found: cmd.input.width(),
        });
    }
    let Some(shapes) = section_shapes(cmd.kind, khot_features) else {
        return Ok(());
    };
    if cmd.padding != 0 && cmd.kind != CommandKind::PredictFeature {
        return Err(InputError::PaddingNotAllowed {
            kind: cmd.kind,
            padding: cmd.padding,
        });
    }
    for (section, shape) in Section::ALL.into_iter().zip(shapes) {
        let bits = cmd.input.section(layout, section);
        match shape {
            Shape::OneHot if !bits.is_one_hot() => return Err(InputError::NotOneHot(section)),
            Shape::Nonzero if bits.is_zero() => return Err(InputError::Empty(section)),
            Shape::Zero if !bits.is_zero() => return Err(InputError::NotZero(section)),
            _ => {}
        }
    }
    Ok(())
}

/// Don't-care mask for a validated command.
pub fn build_dc(cmd: &MacroCommand, layout: &SdrLayout, mode: PaddingMode) -> DcMask {
    let zeros = |s: Section| SectionVec::zeros(layout.width(s));
    let ones = |s: Section| SectionVec::from_bits(Bits::ones(layout.width(s)));
    let window = || padding_window(&cmd.input.location(layout), cmd.padding, mode);
    let (f, l, c) = match cmd.kind {
        CommandKind::Clear | CommandKind::Reset | CommandKind::Store | CommandKind::Delete => {
            return DcMask::zeros(layout);
        }
        CommandKind::Infer => (zeros(Section::Feature), window(), ones(Section::Class)),
        CommandKind::PredictFeature => (ones(Section::Feature), window(), ones(Section::Class)),
        CommandKind::PredictLocation => (zeros(Section::Feature), ones(Section::Location), ones(Section::Class)),
    };
    DcMask::from_sections(&f, &l, &c, layout).expect("sections built from layout widths")
}

/// Location-section DC bits covering every position within `padding` of a
/// hot position. Zero padding masks nothing; otherwise the hot position is
/// itself inside the window. Edges clamp; there is no wraparound.
pub fn padding_window(location: &SectionVec, padding: usize, mode: PaddingMode) -> SectionVec {
    let width = location.width();
    let mut out = Bits::zeros(width);
    if padding == 0 {
        return SectionVec::from_bits(out);
    }
    for hot in location.bits().iter_ones() {
        match mode {
            PaddingMode::Linear1D => {
                let lo = hot.saturating_sub(padding);
                let hi = (hot + padding).min(width - 1);
                for pos in lo..=hi {
                    out.set(pos, true);
                }
            }
            PaddingMode::Grid2D { rows, cols } => {
                let (r, c) = (hot / cols, hot % cols);
                for rr in r.saturating_sub(padding)..=(r + padding).min(rows - 1) {
                    for cc in c.saturating_sub(padding)..=(c + padding).min(cols - 1) {
                        out.set(rr * cols + cc, true);
                    }
                }
            }
        }
    }
    SectionVec::from_bits(out)
}
