//! Fixed-width bit strings, the feature|location|class section layout, and
//! the two masked matching predicates the memory array is built on.
//!
//! Bit positions are string positions: position 0 is the leftmost character
//! of the canonical text form, which is also the first feature bit. Storage
//! is word-sliced (64 positions per `u64`, position `p` lives in word
//! `p / 64`, bit `p % 64`); bits past the logical width are always zero.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SdrError {
    #[error("{0} section width must be at least 1")]
    ZeroWidth(Section),
    #[error("expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("{section} section: expected {expected} bits, found {found}")]
    SectionWidth {
        section: Section,
        expected: usize,
        found: usize,
    },
    #[error("invalid character {ch:?} at position {pos}")]
    InvalidChar { ch: char, pos: usize },
    #[error("expected 1 or 3 '|'-separated sections, found {0}")]
    SectionCount(usize),
    #[error("bit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
}

/// One of the three sections of an SDR, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Feature,
    Location,
    Class,
}

impl Section {
    pub const ALL: [Section; 3] = [Section::Feature, Section::Location, Section::Class];
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Section::Feature => "feature",
            Section::Location => "location",
            Section::Class => "class",
        })
    }
}

/// Ordered bit string of fixed width with value semantics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut bits = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(WORD)],
        };
        bits.trim();
        bits
    }

    /// Bits with exactly the listed positions set.
    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self, SdrError> {
        let mut bits = Self::zeros(len);
        for &index in indices {
            if index >= len {
                return Err(SdrError::IndexOutOfRange { index, width: len });
            }
            bits.set(index, true);
        }
        Ok(bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit {pos} out of range for width {}", self.len);
        self.words[pos / WORD] >> (pos % WORD) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit {pos} out of range for width {}", self.len);
        let mask = 1u64 << (pos % WORD);
        if value {
            self.words[pos / WORD] |= mask;
        } else {
            self.words[pos / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one_hot(&self) -> bool {
        self.count_ones() == 1
    }

    /// Positions of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + tz)
            })
        })
    }

    pub fn ones_vec(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Copy of positions `range` as a new bit string.
    pub fn slice(&self, range: Range<usize>) -> Bits {
        assert!(range.end <= self.len && range.start <= range.end);
        let mut out = Bits::zeros(range.len());
        for (dst, src) in range.enumerate() {
            if self.get(src) {
                out.set(dst, true);
            }
        }
        out
    }

    /// Overwrite positions starting at `offset` with `src`.
    pub fn splice(&mut self, offset: usize, src: &Bits) {
        assert!(offset + src.len <= self.len);
        for i in 0..src.len {
            self.set(offset + i, src.get(i));
        }
    }

    pub fn concat(parts: &[&Bits]) -> Bits {
        let len = parts.iter().map(|p| p.len).sum();
        let mut out = Bits::zeros(len);
        let mut offset = 0;
        for part in parts {
            out.splice(offset, part);
            offset += part.len;
        }
        out
    }

    pub fn or_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn not(&self) -> Bits {
        let mut out = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    /// Parse a string of '0'/'1' characters.
    pub fn parse(text: &str) -> Result<Bits, SdrError> {
        let len = text.chars().count();
        let mut bits = Bits::zeros(len);
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits.set(pos, true),
                _ => return Err(SdrError::InvalidChar { ch, pos }),
            }
        }
        Ok(bits)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.len {
            f.write_str(if self.get(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

/// Section widths of every SDR and DC mask in one device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SdrLayout {
    feature_bits: usize,
    location_bits: usize,
    class_bits: usize,
}

impl SdrLayout {
    pub fn new(feature_bits: usize, location_bits: usize, class_bits: usize) -> Result<Self, SdrError> {
        for (section, width) in Section::ALL.into_iter().zip([feature_bits, location_bits, class_bits]) {
            if width == 0 {
                return Err(SdrError::ZeroWidth(section));
            }
        }
        Ok(Self {
            feature_bits,
            location_bits,
            class_bits,
        })
    }

    /// 128 feature bits on a 5x5 location grid with 10 classes: 163-bit SDRs.
    pub fn mnist() -> Self {
        Self::new(128, 25, 10).unwrap()
    }

    pub fn feature_bits(&self) -> usize {
        self.feature_bits
    }

    pub fn location_bits(&self) -> usize {
        self.location_bits
    }

    pub fn class_bits(&self) -> usize {
        self.class_bits
    }

    pub fn width(&self, section: Section) -> usize {
        match section {
            Section::Feature => self.feature_bits,
            Section::Location => self.location_bits,
            Section::Class => self.class_bits,
        }
    }

    pub fn total(&self) -> usize {
        self.feature_bits + self.location_bits + self.class_bits
    }

    pub fn range(&self, section: Section) -> Range<usize> {
        match section {
            Section::Feature => 0..self.feature_bits,
            Section::Location => self.feature_bits..self.feature_bits + self.location_bits,
            Section::Class => self.feature_bits + self.location_bits..self.total(),
        }
    }

    fn check(&self, bits: &Bits) -> Result<(), SdrError> {
        if bits.len() != self.total() {
            return Err(SdrError::WidthMismatch {
                expected: self.total(),
                found: bits.len(),
            });
        }
        Ok(())
    }

    /// Parse `text` as a full-width vector. Either a single run of
    /// `total` characters or three runs separated by `|`.
    fn parse_bits(&self, text: &str) -> Result<Bits, SdrError> {
        let text = text.trim();
        let parts: Vec<&str> = text.split('|').collect();
        match parts.len() {
            1 => {
                let bits = Bits::parse(text)?;
                self.check(&bits)?;
                Ok(bits)
            }
            3 => {
                let mut sections = Vec::with_capacity(3);
                for (section, part) in Section::ALL.into_iter().zip(&parts) {
                    let bits = Bits::parse(part)?;
                    if bits.len() != self.width(section) {
                        return Err(SdrError::SectionWidth {
                            section,
                            expected: self.width(section),
                            found: bits.len(),
                        });
                    }
                    sections.push(bits);
                }
                Ok(Bits::concat(&[&sections[0], &sections[1], &sections[2]]))
            }
            n => Err(SdrError::SectionCount(n)),
        }
    }
}

/// One section's worth of bits; used for k-hot outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionVec(Bits);

impl SectionVec {
    pub fn zeros(width: usize) -> Self {
        Self(Bits::zeros(width))
    }

    pub fn from_bits(bits: Bits) -> Self {
        Self(bits)
    }

    pub fn from_indices(width: usize, indices: &[usize]) -> Result<Self, SdrError> {
        Bits::from_indices(width, indices).map(Self)
    }

    pub fn one_hot(width: usize, index: usize) -> Result<Self, SdrError> {
        Self::from_indices(width, &[index])
    }

    pub fn parse(text: &str) -> Result<Self, SdrError> {
        Bits::parse(text).map(Self)
    }

    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_one_hot(&self) -> bool {
        is_one_hot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    /// Hot positions, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0.ones_vec()
    }

    pub fn or_assign(&mut self, other: &SectionVec) {
        self.0.or_assign(&other.0);
    }
}

impl fmt::Display for SectionVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Input or stored vector: feature|location|class concatenated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sdr(Bits);

impl Sdr {
    pub fn zeros(layout: &SdrLayout) -> Self {
        Self(Bits::zeros(layout.total()))
    }

    pub fn from_bits(bits: Bits, layout: &SdrLayout) -> Result<Self, SdrError> {
        layout.check(&bits)?;
        Ok(Self(bits))
    }

    pub fn parse(text: &str, layout: &SdrLayout) -> Result<Self, SdrError> {
        layout.parse_bits(text).map(Self)
    }

    pub fn from_sections(
        feature: &SectionVec,
        location: &SectionVec,
        class: &SectionVec,
        layout: &SdrLayout,
    ) -> Result<Self, SdrError> {
        for (section, part) in Section::ALL.into_iter().zip([feature, location, class]) {
            if part.width() != layout.width(section) {
                return Err(SdrError::SectionWidth {
                    section,
                    expected: layout.width(section),
                    found: part.width(),
                });
            }
        }
        Ok(Self(Bits::concat(&[&feature.0, &location.0, &class.0])))
    }

    /// Triplet built from hot indices; `None` leaves a section all-zero.
    pub fn from_indices(
        feature: &[usize],
        location: Option<usize>,
        class: Option<usize>,
        layout: &SdrLayout,
    ) -> Result<Self, SdrError> {
        let f = SectionVec::from_indices(layout.feature_bits, feature)?;
        let l = SectionVec::from_indices(layout.location_bits, &location.into_iter().collect::<Vec<_>>())?;
        let c = SectionVec::from_indices(layout.class_bits, &class.into_iter().collect::<Vec<_>>())?;
        Self::from_sections(&f, &l, &c, layout)
    }

    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn section(&self, layout: &SdrLayout, section: Section) -> SectionVec {
        SectionVec(self.0.slice(layout.range(section)))
    }

    pub fn feature(&self, layout: &SdrLayout) -> SectionVec {
        self.section(layout, Section::Feature)
    }

    pub fn location(&self, layout: &SdrLayout) -> SectionVec {
        self.section(layout, Section::Location)
    }

    pub fn class(&self, layout: &SdrLayout) -> SectionVec {
        self.section(layout, Section::Class)
    }

    /// Canonical form with `|` between sections.
    pub fn to_sectioned_string(&self, layout: &SdrLayout) -> String {
        format!(
            "{}|{}|{}",
            self.feature(layout),
            self.location(layout),
            self.class(layout)
        )
    }
}

impl fmt::Display for Sdr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Don't-care vector: 1 = ignore the position, 0 = compare it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DcMask(Bits);

impl DcMask {
    pub fn zeros(layout: &SdrLayout) -> Self {
        Self(Bits::zeros(layout.total()))
    }

    pub fn ones(layout: &SdrLayout) -> Self {
        Self(Bits::ones(layout.total()))
    }

    pub fn from_bits(bits: Bits, layout: &SdrLayout) -> Result<Self, SdrError> {
        layout.check(&bits)?;
        Ok(Self(bits))
    }

    pub fn parse(text: &str, layout: &SdrLayout) -> Result<Self, SdrError> {
        layout.parse_bits(text).map(Self)
    }

    pub fn from_sections(
        feature: &SectionVec,
        location: &SectionVec,
        class: &SectionVec,
        layout: &SdrLayout,
    ) -> Result<Self, SdrError> {
        Sdr::from_sections(feature, location, class, layout).map(|s| Self(s.0))
    }

    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn section(&self, layout: &SdrLayout, section: Section) -> SectionVec {
        SectionVec(self.0.slice(layout.range(section)))
    }
}

impl fmt::Display for DcMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn split(sdr: &Sdr, layout: &SdrLayout) -> Result<(SectionVec, SectionVec, SectionVec), SdrError> {
    layout.check(&sdr.0)?;
    Ok((sdr.feature(layout), sdr.location(layout), sdr.class(layout)))
}

pub fn is_one_hot(v: &SectionVec) -> bool {
    v.0.is_one_hot()
}

fn check_widths(stored: &Sdr, query: &Sdr, dc: &DcMask) -> Result<(), SdrError> {
    for found in [query.width(), dc.width()] {
        if found != stored.width() {
            return Err(SdrError::WidthMismatch {
                expected: stored.width(),
                found,
            });
        }
    }
    Ok(())
}

/// Every unmasked position agrees.
pub fn equality_match(stored: &Sdr, query: &Sdr, dc: &DcMask) -> Result<bool, SdrError> {
    check_widths(stored, query, dc)?;
    Ok(equality_match_unchecked(stored, query, dc))
}

/// Some unmasked position is hot in both the stored row and the query.
pub fn membership_match(stored: &Sdr, query: &Sdr, dc: &DcMask) -> Result<bool, SdrError> {
    check_widths(stored, query, dc)?;
    Ok(membership_match_unchecked(stored, query, dc))
}

#[inline]
pub(crate) fn equality_match_unchecked(stored: &Sdr, query: &Sdr, dc: &DcMask) -> bool {
    stored
        .0
        .words()
        .iter()
        .zip(query.0.words())
        .zip(dc.0.words())
        .all(|((s, q), d)| (s ^ q) & !d == 0)
}

#[inline]
pub(crate) fn membership_match_unchecked(stored: &Sdr, query: &Sdr, dc: &DcMask) -> bool {
    stored
        .0
        .words()
        .iter()
        .zip(query.0.words())
        .zip(dc.0.words())
        .any(|((s, q), d)| s & q & !d != 0)
}
