//! The reverse-TCAM memory array: binary rows searched by queries that carry
//! don't-care bits.
//!
//! Each row holds one feature|location|class triplet plus a valid bit (the
//! row belongs to a class still consistent with the current identification)
//! and an empty bit (the row is unused). Every lookup returns *all* matching
//! rows and overwrites the valid bits with the match vector.

use std::fmt::Write as _;

use thiserror::Error;

use crate::sdr::{
    equality_match_unchecked, membership_match_unchecked, Bits, DcMask, Sdr, SdrError, SdrLayout, Section, SectionVec,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    data: Sdr,
    pub valid: bool,
    pub empty: bool,
}

impl Entry {
    fn cleared(layout: &SdrLayout) -> Self {
        Self {
            data: Sdr::zeros(layout),
            valid: true,
            empty: true,
        }
    }

    pub fn new(data: Sdr, valid: bool, empty: bool) -> Self {
        Self { data, valid, empty }
    }

    pub fn data(&self) -> &Sdr {
        &self.data
    }

    pub fn feature(&self, layout: &SdrLayout) -> SectionVec {
        self.data.feature(layout)
    }

    pub fn location(&self, layout: &SdrLayout) -> SectionVec {
        self.data.location(layout)
    }

    pub fn class(&self, layout: &SdrLayout) -> SectionVec {
        self.data.class(layout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LookupScope {
    /// Only rows whose valid bit is set may match.
    ValidOnly,
    /// Valid bits are ignored; used for the store/delete duplicate check.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchMode {
    Equality,
    Membership,
}

/// One bit per row: which rows the most recent lookup selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchVector(Bits);

impl MatchVector {
    fn none(rows: usize) -> Self {
        Self(Bits::zeros(rows))
    }

    pub fn get(&self, row: usize) -> bool {
        self.0.get(row)
    }

    pub fn any(&self) -> bool {
        !self.0.is_zero()
    }

    pub fn count(&self) -> usize {
        self.0.count_ones()
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no empty entry available")]
pub struct MemoryFull;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Bits { line: usize, source: SdrError },
    #[error("image is empty")]
    Empty,
}

/// Read-only view of the array outputs after the latest micro-op.
#[derive(Debug)]
pub struct Outputs<'a> {
    pub mem_out: Vec<&'a Entry>,
    pub valid_entry: bool,
    pub infer_class_out: &'a SectionVec,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryArray {
    layout: SdrLayout,
    entries: Vec<Entry>,
    last_match: MatchVector,
    classes_out: SectionVec,
}

impl MemoryArray {
    /// A cleared array of `capacity` rows.
    pub fn new(layout: SdrLayout, capacity: usize) -> Self {
        assert!(capacity >= 1, "memory needs at least one entry");
        Self {
            layout,
            entries: vec![Entry::cleared(&layout); capacity],
            last_match: MatchVector::none(capacity),
            classes_out: SectionVec::zeros(layout.class_bits()),
        }
    }

    pub fn layout(&self) -> &SdrLayout {
        &self.layout
    }

    pub fn capacity(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn occupancy(&self) -> usize {
        self.entries.iter().filter(|e| !e.empty).count()
    }

    pub fn is_full(&self) -> bool {
        self.entries.iter().all(|e| !e.empty)
    }

    pub fn last_match(&self) -> &MatchVector {
        &self.last_match
    }

    pub fn micro_clear(&mut self) {
        let layout = self.layout;
        self.entries.fill(Entry::cleared(&layout));
        self.last_match = MatchVector::none(self.capacity());
        self.classes_out = SectionVec::zeros(layout.class_bits());
    }

    /// Every valid bit back to 1; contents and empty bits untouched.
    pub fn micro_reset(&mut self) {
        for e in &mut self.entries {
            e.valid = true;
        }
        self.last_match = MatchVector::none(self.capacity());
    }

    fn match_rows(&self, query: &Sdr, dc: &DcMask, scope: LookupScope, mode: MatchMode) -> MatchVector {
        assert_eq!(query.width(), self.layout.total(), "query width");
        assert_eq!(dc.width(), self.layout.total(), "dc width");
        let mut hits = Bits::zeros(self.capacity());
        for (i, e) in self.entries.iter().enumerate() {
            if e.empty || (scope == LookupScope::ValidOnly && !e.valid) {
                continue;
            }
            let hit = match mode {
                MatchMode::Equality => equality_match_unchecked(&e.data, query, dc),
                MatchMode::Membership => membership_match_unchecked(&e.data, query, dc),
            };
            if hit {
                hits.set(i, true);
            }
        }
        MatchVector(hits)
    }

    /// Search the array and commit the match vector to the valid bits.
    /// Returns `valid_entry`, the OR of the match vector.
    pub fn micro_lookup(&mut self, query: &Sdr, dc: &DcMask, scope: LookupScope, mode: MatchMode) -> bool {
        let hits = self.match_rows(query, dc, scope, mode);
        for (i, e) in self.entries.iter_mut().enumerate() {
            e.valid = hits.get(i);
        }
        self.last_match = hits;
        self.last_match.any()
    }

    /// Same search as [`micro_lookup`](Self::micro_lookup) but the valid
    /// bits are left as they were. Used by PREDICT.
    pub fn micro_probe(&mut self, query: &Sdr, dc: &DcMask, scope: LookupScope, mode: MatchMode) -> bool {
        self.last_match = self.match_rows(query, dc, scope, mode);
        self.last_match.any()
    }

    /// Fold the classes of the currently valid rows into a k-hot vector, then
    /// revalidate every row belonging to one of those classes.
    pub fn micro_validate(&mut self) -> SectionVec {
        let layout = self.layout;
        let mut classes = SectionVec::zeros(layout.class_bits());
        for e in self.entries.iter().filter(|e| e.valid && !e.empty) {
            classes.or_assign(&e.class(&layout));
        }
        // Internal lookup: query = 0|0|classes, DC ones except the hot class bits.
        let zf = SectionVec::zeros(layout.feature_bits());
        let zl = SectionVec::zeros(layout.location_bits());
        let query = Sdr::from_sections(&zf, &zl, &classes, &layout).expect("layout widths");
        let mut dc_bits = Bits::ones(layout.total());
        let class_start = layout.range(Section::Class).start;
        for hot in classes.bits().iter_ones() {
            dc_bits.set(class_start + hot, false);
        }
        let dc = DcMask::from_bits(dc_bits, &layout).expect("layout width");
        let hits = self.match_rows(&query, &dc, LookupScope::All, MatchMode::Membership);
        for (i, e) in self.entries.iter_mut().enumerate() {
            if !e.empty {
                e.valid = hits.get(i);
            }
        }
        self.last_match = hits;
        self.classes_out = classes.clone();
        classes
    }

    /// Write `triplet` into the lowest-index empty row.
    pub fn micro_store(&mut self, triplet: &Sdr) -> Result<usize, MemoryFull> {
        assert_eq!(triplet.width(), self.layout.total(), "triplet width");
        let slot = self.entries.iter().position(|e| e.empty).ok_or(MemoryFull)?;
        self.entries[slot] = Entry {
            data: triplet.clone(),
            valid: true,
            empty: false,
        };
        Ok(slot)
    }

    /// Mark every row selected by the preceding lookup empty.
    pub fn micro_delete(&mut self) -> usize {
        let rows: Vec<usize> = self.last_match.rows().collect();
        for &i in &rows {
            self.entries[i].empty = true;
        }
        self.last_match = MatchVector::none(self.capacity());
        rows.len()
    }

    pub fn read_outputs(&self) -> Outputs<'_> {
        Outputs {
            mem_out: self.mem_out().collect(),
            valid_entry: self.last_match.any(),
            infer_class_out: &self.classes_out,
            full: self.is_full(),
        }
    }

    pub fn mem_out(&self) -> impl Iterator<Item = &Entry> + '_ {
        self.last_match.rows().map(|i| &self.entries[i])
    }

    /// One row per line: `index feature|location|class V E`.
    pub fn to_image(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(
                out,
                "{i} {} {} {}",
                e.data.to_sectioned_string(&self.layout),
                u8::from(e.valid),
                u8::from(e.empty)
            )
            .unwrap();
        }
        out
    }

    /// Rebuild an array from [`to_image`](Self::to_image) output. Rows must
    /// appear in index order starting at 0; the row count is the capacity.
    /// Blank lines and `#` comments are skipped.
    pub fn from_image(text: &str, layout: SdrLayout) -> Result<Self, ImageError> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let err = |message: String| ImageError::Line { line, message };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            let [index, data, valid, empty] = fields[..] else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            let index: usize = index.parse().map_err(|_| err(format!("bad index {index:?}")))?;
            if index != entries.len() {
                return Err(err(format!("expected index {}, found {index}", entries.len())));
            }
            let data = Sdr::parse(data, &layout).map_err(|source| ImageError::Bits { line, source })?;
            let flag = |s: &str, name: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(err(format!("{name} bit must be 0 or 1, found {s:?}"))),
            };
            entries.push(Entry {
                data,
                valid: flag(valid, "valid")?,
                empty: flag(empty, "empty")?,
            });
        }
        if entries.is_empty() {
            return Err(ImageError::Empty);
        }
        let capacity = entries.len();
        Ok(Self {
            layout,
            entries,
            last_match: MatchVector::none(capacity),
            classes_out: SectionVec::zeros(layout.class_bits()),
        })
    }
}
