//! Normalized timed note-event model for symbolic scores.
//!
//! A [`ScoreDocument`] is the flattened view of a MusicXML `score-partwise`
//! document: every pitched note or rest becomes a [`NoteEvent`] positioned in
//! quarter notes (exact rationals) and in seconds (derived through the tempo
//! map). Everything downstream (feature extraction, previews) works on this
//! model only.

mod archive;
mod parse;
mod streams;

pub use archive::{parse_mxl, read_root_document};
pub use parse::parse_musicxml;
pub use streams::{melodic_intervals, melodic_streams};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used for all score-time arithmetic.
pub type Rational = Ratio<i128>;

pub const DEFAULT_TEMPO_QPM: i128 = 120;
pub const DEFAULT_TIME_SIGNATURE: (u32, u32) = (4, 4);

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("archive error: {0}")]
    Archive(String),
    #[error("malformed MusicXML: {0}")]
    Xml(String),
    #[error("unsupported score: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieRole {
    None,
    Start,
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoteEvent {
    pub onset_quarters: Rational,
    pub duration_quarters: Rational,
    pub onset_seconds: Rational,
    pub duration_seconds: Rational,
    /// `None` marks a rest.
    pub midi_pitch: Option<u8>,
    pub part_index: usize,
    /// Part-scoped voice identity, e.g. `p0/v1`.
    pub voice_id: String,
    pub is_chord_member: bool,
    pub is_staccato: bool,
    pub tie_role: TieRole,
}

impl NoteEvent {
    pub fn is_rest(&self) -> bool {
        self.midi_pitch.is_none()
    }

    pub fn onset_secs(&self) -> f64 {
        rational_to_f64(&self.onset_seconds)
    }

    pub fn duration_secs(&self) -> f64 {
        rational_to_f64(&self.duration_seconds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeSignature {
    pub numerator: u32,
    pub denominator: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignatureChange {
    pub onset_quarters: Rational,
    pub signature: TimeSignature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TempoSegment {
    pub onset_quarters: Rational,
    /// Always strictly positive.
    pub quarters_per_minute: Rational,
}

/// Piecewise-constant tempo, sorted by onset, first segment at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TempoMap {
    segments: Vec<TempoSegment>,
}

impl TempoMap {
    /// Builds a map from raw `(onset, qpm)` marks. Non-positive tempi are
    /// dropped, later marks at the same onset lose to earlier ones, and a
    /// default segment is injected at 0 when nothing starts there.
    pub fn from_marks(mut marks: Vec<TempoSegment>) -> Self {
        marks.retain(|m| m.quarters_per_minute > Rational::zero());
        marks.sort_by_key(|a| a.onset_quarters);
        marks.dedup_by(|later, earlier| later.onset_quarters == earlier.onset_quarters);
        if marks.first().is_none_or(|m| m.onset_quarters > Rational::zero()) {
            marks.insert(
                0,
                TempoSegment {
                    onset_quarters: Rational::zero(),
                    quarters_per_minute: Rational::from_integer(DEFAULT_TEMPO_QPM),
                },
            );
        }
        Self { segments: marks }
    }

    pub fn constant(qpm: Rational) -> Self {
        Self::from_marks(vec![TempoSegment {
            onset_quarters: Rational::zero(),
            quarters_per_minute: qpm,
        }])
    }

    pub fn segments(&self) -> &[TempoSegment] {
        &self.segments
    }

    /// Elapsed seconds from score start to `quarters`.
    pub fn seconds_at(&self, quarters: &Rational) -> Rational {
        let sixty = Rational::from_integer(60);
        let mut total = Rational::zero();
        for (i, seg) in self.segments.iter().enumerate() {
            if *quarters <= seg.onset_quarters {
                break;
            }
            let end = match self.segments.get(i + 1) {
                Some(next) if next.onset_quarters < *quarters => next.onset_quarters,
                _ => *quarters,
            };
            total += (end - seg.onset_quarters) * sixty / seg.quarters_per_minute;
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDocument {
    pub events: Vec<NoteEvent>,
    pub time_signatures: Vec<TimeSignatureChange>,
    pub tempo_map: TempoMap,
    pub title: String,
    pub composer_name: String,
    pub part_count: usize,
    pub total_duration_quarters: Rational,
}

impl ScoreDocument {
    pub fn total_duration_seconds(&self) -> Rational {
        self.tempo_map.seconds_at(&self.total_duration_quarters)
    }

    pub fn pitched_events(&self) -> impl Iterator<Item = &NoteEvent> {
        self.events.iter().filter(|e| !e.is_rest())
    }
}

/// Converts an exact rational to the nearest representable float.
pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Parses either a compressed `.mxl` archive or an uncompressed MusicXML
/// document, sniffing the ZIP magic.
pub fn parse_score_bytes(bytes: &[u8]) -> Result<ScoreDocument, ScoreError> {
    if archive::is_zip(bytes) {
        parse_mxl(bytes)
    } else {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| ScoreError::Xml(format!("document is not valid UTF-8: {e}")))?;
        parse_musicxml(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn constant_tempo_seconds() {
        let map = TempoMap::constant(Rational::from_integer(90));
        assert_eq!(map.seconds_at(&r(3, 1)), r(2, 1));
        assert_eq!(map.seconds_at(&r(0, 1)), r(0, 1));
    }

    #[test]
    fn piecewise_tempo_seconds() {
        let map = TempoMap::from_marks(vec![
            TempoSegment { onset_quarters: r(4, 1), quarters_per_minute: r(60, 1) },
        ]);
        // default 120 injected for [0, 4): 2 s, then 60 QPM: 1 s per quarter
        assert_eq!(map.segments().len(), 2);
        assert_eq!(map.seconds_at(&r(4, 1)), r(2, 1));
        assert_eq!(map.seconds_at(&r(6, 1)), r(4, 1));
        assert_eq!(map.seconds_at(&r(9, 2)), r(5, 2));
    }

    #[test]
    fn tempo_marks_dedup_keeps_first() {
        let map = TempoMap::from_marks(vec![
            TempoSegment { onset_quarters: r(0, 1), quarters_per_minute: r(100, 1) },
            TempoSegment { onset_quarters: r(0, 1), quarters_per_minute: r(50, 1) },
            TempoSegment { onset_quarters: r(2, 1), quarters_per_minute: r(0, 1) },
        ]);
        assert_eq!(map.segments().len(), 1);
        assert_eq!(map.segments()[0].quarters_per_minute, r(100, 1));
    }
}
