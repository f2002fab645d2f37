use std::collections::BTreeMap;

use super::{Rational, ScoreDocument};

/// One pitch sequence per (part, voice), ordered by part then voice id.
///
/// Pitched events are taken in onset order; when several notes share an
/// onset (a chord) the highest one stands for the melody. Rests are skipped
/// without splitting the stream, and voices with no pitched notes produce no
/// stream.
pub fn melodic_streams(doc: &ScoreDocument) -> Vec<Vec<i32>> {
    let mut voices: BTreeMap<(usize, &str), Vec<(Rational, u8)>> = BTreeMap::new();
    for ev in &doc.events {
        if let Some(pitch) = ev.midi_pitch {
            voices
                .entry((ev.part_index, ev.voice_id.as_str()))
                .or_default()
                .push((ev.onset_quarters, pitch));
        }
    }
    voices
        .into_values()
        .map(|mut notes| {
            notes.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            notes.dedup_by(|later, earlier| later.0 == earlier.0);
            notes.into_iter().map(|(_, p)| i32::from(p)).collect()
        })
        .collect()
}

/// Signed semitone steps between successive pitches.
pub fn melodic_intervals(stream: &[i32]) -> Vec<i32> {
    stream.windows(2).map(|w| w[1] - w[0]).collect()
}
