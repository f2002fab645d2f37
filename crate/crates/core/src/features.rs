//! Statistical melody / pitch / rhythm feature catalog.
//!
//! Every composition is summarised by the same fixed set of features. The
//! definitions are intentionally simple counting statistics so that values
//! can be computed exactly from the rational event model and compared
//! bitwise across runs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{
    melodic_intervals, melodic_streams, rational_to_f64, Rational, ScoreDocument,
};

/// Bumped whenever a definition changes; cached vectors with another
/// version are recomputed.
pub const CATALOG_VERSION: u32 = 1;

/// Notes shorter than this many seconds count as staccato.
pub const STACCATO_MAX_SECONDS: (i128, i128) = (1, 10);
/// A pitch is "common" when it accounts for at least this share of notes.
pub const COMMON_PITCH_SHARE: (u64, u64) = (9, 100);
pub const BASS_REGISTER_MAX: u8 = 54;
pub const HIGH_REGISTER_MIN: u8 = 73;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Melody,
    Pitch,
    Rhythm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Fraction,
    Count,
    Semitones,
    Seconds,
    PerSecond,
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureDescriptor {
    pub id: &'static str,
    pub display_name: &'static str,
    pub category: Category,
    pub unit: Unit,
    pub description: &'static str,
}

macro_rules! descriptor {
    ($id:literal, $name:literal, $cat:ident, $unit:ident, $desc:literal) => {
        FeatureDescriptor {
            id: $id,
            display_name: $name,
            category: Category::$cat,
            unit: Unit::$unit,
            description: $desc,
        }
    };
}

/// The feature registry, grouped melody, pitch, rhythm.
pub static CATALOG: &[FeatureDescriptor] = &[
    descriptor!("average_melodic_interval", "Average Melodic Interval", Melody, Semitones,
        "Mean absolute size in semitones of the intervals between successive notes of each voice."),
    descriptor!("repeated_notes", "Repeated Notes", Melody, Fraction,
        "Share of melodic intervals that repeat the previous pitch."),
    descriptor!("chromatic_motion", "Chromatic Motion", Melody, Fraction,
        "Share of melodic intervals that move by one semitone."),
    descriptor!("stepwise_motion", "Stepwise Motion", Melody, Fraction,
        "Share of melodic intervals that move by one or two semitones."),
    descriptor!("melodic_thirds", "Melodic Thirds", Melody, Fraction,
        "Share of melodic intervals of three or four semitones."),
    descriptor!("melodic_fifths", "Melodic Fifths", Melody, Fraction,
        "Share of melodic intervals of exactly seven semitones."),
    descriptor!("melodic_tritones", "Melodic Tritones", Melody, Fraction,
        "Share of melodic intervals of exactly six semitones."),
    descriptor!("melodic_octaves", "Melodic Octaves", Melody, Fraction,
        "Share of melodic intervals of exactly twelve semitones."),
    descriptor!("melodic_consonance", "Consonant Melodic Intervals", Melody, Fraction,
        "Share of melodic intervals that are unisons, thirds, fourths, fifths, sixths or octaves."),
    descriptor!("size_of_melodic_arcs", "Size of Melodic Arcs", Melody, Semitones,
        "Mean span in semitones between consecutive melodic peaks and troughs."),
    descriptor!("direction_of_motion", "Direction of Motion", Melody, Fraction,
        "Rising intervals divided by all rising or falling intervals."),
    descriptor!("amount_of_arpeggiation", "Amount of Arpeggiation", Melody, Fraction,
        "Share of melodic intervals typical of broken chords (unisons, thirds, fifths, sevenths, octaves, tenths)."),
    descriptor!("most_common_pitch_prevalence", "Most Common Pitch Prevalence", Pitch, Fraction,
        "Share of notes played at the single most frequent pitch."),
    descriptor!("most_common_pitch_class_prevalence", "Most Common Pitch Class Prevalence", Pitch, Fraction,
        "Share of notes belonging to the most frequent pitch class; low values point to atonal writing."),
    descriptor!("pitch_variety", "Pitch Variety", Pitch, Count,
        "Number of distinct pitches used at least once."),
    descriptor!("pitch_class_variety", "Pitch Class Variety", Pitch, Count,
        "Number of distinct pitch classes used at least once."),
    descriptor!("range", "Range", Pitch, Semitones,
        "Distance in semitones between the highest and lowest note."),
    descriptor!("number_of_common_pitches", "Number of Common Pitches", Pitch, Count,
        "Number of pitches that individually account for at least 9% of all notes."),
    descriptor!("mean_pitch", "Mean Pitch", Pitch, Semitones,
        "Average MIDI pitch of all notes."),
    descriptor!("bass_register_fraction", "Bass Register Importance", Pitch, Fraction,
        "Share of notes at or below F#3 (MIDI 54)."),
    descriptor!("high_register_fraction", "High Register Importance", Pitch, Fraction,
        "Share of notes at or above C#5 (MIDI 73)."),
    descriptor!("note_density", "Note Density", Rhythm, PerSecond,
        "Average number of notes played within a second."),
    descriptor!("average_note_duration", "Average Note Duration", Rhythm, Seconds,
        "Mean sounding duration of a note in seconds."),
    descriptor!("staccato_incidence", "Staccato Incidence", Rhythm, Fraction,
        "Share of notes marked staccato or lasting less than a tenth of a second."),
    descriptor!("changes_of_meter", "Changes of Meter", Rhythm, Boolean,
        "Whether more than one time signature occurs."),
    descriptor!("triple_meter", "Triple Meter", Rhythm, Boolean,
        "Whether the initial time signature has three beats."),
    descriptor!("duration_seconds", "Duration", Rhythm, Seconds,
        "Length of the composition in seconds."),
    descriptor!("note_count", "Note Count", Rhythm, Count,
        "Total number of pitched notes."),
];

pub fn catalog() -> &'static [FeatureDescriptor] {
    CATALOG
}

pub fn feature_descriptor(id: &str) -> Result<&'static FeatureDescriptor, FeatureError> {
    CATALOG
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| FeatureError::UnknownFeature(id.to_owned()))
}

pub fn is_known_feature(id: &str) -> bool {
    CATALOG.iter().any(|d| d.id == id)
}

/// Feature id → value. Serialises as a plain JSON object.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn insert(&mut self, id: impl Into<String>, value: f64) {
        self.0.insert(id.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every catalog feature has a value.
    pub fn is_complete(&self) -> bool {
        CATALOG.iter().all(|d| self.0.contains_key(d.id))
    }

    /// Drops ids the current catalog does not know.
    pub fn retain_known(&mut self) {
        self.0.retain(|k, _| is_known_feature(k));
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityFlag {
    /// No pitched notes; the vector holds degenerate zeros.
    EmptyScore,
    /// Composer death year unknown, so the public-domain check was skipped.
    CopyrightUnverified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureExtraction {
    pub features: FeatureVector,
    pub flags: BTreeSet<QualityFlag>,
}

impl FeatureExtraction {
    pub fn is_empty_score(&self) -> bool {
        self.flags.contains(&QualityFlag::EmptyScore)
    }
}

fn ratio(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Computes the full catalog for one score.
pub fn extract_features(doc: &ScoreDocument) -> FeatureExtraction {
    let mut out = FeatureVector::new();
    let mut flags = BTreeSet::new();

    let pitched: Vec<_> = doc.pitched_events().collect();
    let n = pitched.len() as u64;
    if n == 0 {
        flags.insert(QualityFlag::EmptyScore);
    }

    // rhythm
    let total_seconds = doc.total_duration_seconds();
    let note_density = if total_seconds.is_zero() {
        0.0
    } else {
        rational_to_f64(&(Rational::from_integer(n as i128) / total_seconds))
    };
    let duration_sum = pitched
        .iter()
        .fold(Rational::zero(), |acc, e| acc + e.duration_seconds);
    let staccato_limit = Rational::new(STACCATO_MAX_SECONDS.0, STACCATO_MAX_SECONDS.1);
    let staccato = pitched
        .iter()
        .filter(|e| e.is_staccato || e.duration_seconds < staccato_limit)
        .count() as u64;
    let distinct_meters: BTreeSet<_> = doc
        .time_signatures
        .iter()
        .map(|t| (t.signature.numerator, t.signature.denominator))
        .collect();
    let triple = doc.time_signatures.first().is_some_and(|t| t.signature.numerator == 3);

    out.insert("note_density", note_density);
    out.insert(
        "average_note_duration",
        if n == 0 { 0.0 } else { rational_to_f64(&(duration_sum / Rational::from_integer(n as i128))) },
    );
    out.insert("staccato_incidence", ratio(staccato, n));
    out.insert("changes_of_meter", if distinct_meters.len() > 1 { 1.0 } else { 0.0 });
    out.insert("triple_meter", if triple { 1.0 } else { 0.0 });
    out.insert("duration_seconds", rational_to_f64(&total_seconds));
    out.insert("note_count", n as f64);

    // pitch
    let mut pitch_hist: HashMap<u8, u64> = HashMap::new();
    let mut class_hist = [0u64; 12];
    let mut pitch_sum: u64 = 0;
    let mut bass = 0u64;
    let mut high = 0u64;
    for e in &pitched {
        let p = e.midi_pitch.expect("pitched");
        *pitch_hist.entry(p).or_default() += 1;
        class_hist[usize::from(p % 12)] += 1;
        pitch_sum += u64::from(p);
        bass += u64::from(p <= BASS_REGISTER_MAX);
        high += u64::from(p >= HIGH_REGISTER_MIN);
    }
    let max_pitch_count = pitch_hist.values().copied().max().unwrap_or(0);
    let max_class_count = class_hist.iter().copied().max().unwrap_or(0);
    let (share_num, share_den) = COMMON_PITCH_SHARE;
    let common = pitch_hist.values().filter(|&&c| c * share_den >= share_num * n).count();
    let range = match (pitch_hist.keys().min(), pitch_hist.keys().max()) {
        (Some(lo), Some(hi)) => f64::from(hi - lo),
        _ => 0.0,
    };

    out.insert("most_common_pitch_prevalence", ratio(max_pitch_count, n));
    out.insert("most_common_pitch_class_prevalence", ratio(max_class_count, n));
    out.insert("pitch_variety", pitch_hist.len() as f64);
    out.insert("pitch_class_variety", class_hist.iter().filter(|&&c| c > 0).count() as f64);
    out.insert("range", range);
    out.insert("number_of_common_pitches", if n == 0 { 0.0 } else { common as f64 });
    out.insert("mean_pitch", ratio(pitch_sum, n));
    out.insert("bass_register_fraction", ratio(bass, n));
    out.insert("high_register_fraction", ratio(high, n));

    // melody
    let streams = melodic_streams(doc);
    let intervals: Vec<i32> = streams.iter().flat_map(|s| melodic_intervals(s)).collect();
    let total = intervals.len() as u64;
    let count_abs = |set: &[u32]| intervals.iter().filter(|i| set.contains(&i.unsigned_abs())).count() as u64;
    let abs_sum: u64 = intervals.iter().map(|i| u64::from(i.unsigned_abs())).sum();
    let rising = intervals.iter().filter(|&&i| i > 0).count() as u64;
    let falling = intervals.iter().filter(|&&i| i < 0).count() as u64;
    let (arc_sum, arc_count) = streams.iter().fold((0u64, 0u64), |(s, c), stream| {
        let arcs = melodic_arcs(stream);
        (s + arcs.iter().map(|&a| u64::from(a)).sum::<u64>(), c + arcs.len() as u64)
    });

    out.insert("average_melodic_interval", ratio(abs_sum, total));
    out.insert("repeated_notes", ratio(count_abs(&[0]), total));
    out.insert("chromatic_motion", ratio(count_abs(&[1]), total));
    out.insert("stepwise_motion", ratio(count_abs(&[1, 2]), total));
    out.insert("melodic_thirds", ratio(count_abs(&[3, 4]), total));
    out.insert("melodic_fifths", ratio(count_abs(&[7]), total));
    out.insert("melodic_tritones", ratio(count_abs(&[6]), total));
    out.insert("melodic_octaves", ratio(count_abs(&[12]), total));
    out.insert("melodic_consonance", ratio(count_abs(&[0, 3, 4, 5, 7, 8, 9, 12]), total));
    out.insert("size_of_melodic_arcs", ratio(arc_sum, arc_count));
    out.insert("direction_of_motion", ratio(rising, rising + falling));
    out.insert(
        "amount_of_arpeggiation",
        ratio(count_abs(&[0, 3, 4, 7, 10, 11, 12, 15, 16]), total),
    );

    debug_assert!(out.is_complete());
    FeatureExtraction { features: out, flags }
}

/// Semitone spans between consecutive extrema of one stream.
///
/// Repeated pitches collapse first; the endpoints and every turning point
/// count as extrema. Streams with fewer than three distinct-successive
/// pitches have no arcs.
pub fn melodic_arcs(stream: &[i32]) -> Vec<u32> {
    let mut collapsed: Vec<i32> = stream.to_vec();
    collapsed.dedup();
    if collapsed.len() < 3 {
        return Vec::new();
    }
    let mut extrema = vec![collapsed[0]];
    for w in collapsed.windows(3) {
        if (w[1] > w[0]) != (w[2] > w[1]) {
            extrema.push(w[1]);
        }
    }
    extrema.push(*collapsed.last().expect("non-empty"));
    extrema.windows(2).map(|w| w[1].abs_diff(w[0])).collect()
}
