use std::collections::HashMap;

use num_traits::{Signed, Zero};
use roxmltree::Node;

use super::{
    Rational, ScoreDocument, ScoreError, TempoMap, TempoSegment, TieRole, TimeSignature,
    TimeSignatureChange, DEFAULT_TIME_SIGNATURE,
};
use super::NoteEvent;

/// Parses an uncompressed `score-partwise` MusicXML document.
pub fn parse_musicxml(text: &str) -> Result<ScoreDocument, ScoreError> {
    let options = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
    let xml = roxmltree::Document::parse_with_options(text, options)
        .map_err(|e| ScoreError::Xml(e.to_string()))?;
    let root = xml.root_element();
    match root.tag_name().name() {
        "score-partwise" => {}
        "score-timewise" => {
            return Err(ScoreError::Unsupported("score-timewise documents are not supported".into()))
        }
        other => return Err(ScoreError::Unsupported(format!("unexpected root element <{other}>"))),
    }

    let part_order: Vec<&str> = child(root, "part-list")
        .map(|list| {
            list.children()
                .filter(|n| n.has_tag_name("score-part"))
                .filter_map(|n| n.attribute("id"))
                .collect()
        })
        .unwrap_or_default();

    let mut parts: Vec<(usize, Node)> = Vec::new();
    let mut unlisted = 0;
    for part in root.children().filter(|n| n.has_tag_name("part")) {
        let index = match part.attribute("id").and_then(|id| part_order.iter().position(|p| *p == id)) {
            Some(i) => i,
            None => {
                unlisted += 1;
                part_order.len() + unlisted - 1
            }
        };
        parts.push((index, part));
    }
    if parts.is_empty() {
        return Err(ScoreError::Unsupported("score has no parts".into()));
    }
    parts.sort_by_key(|(i, _)| *i);

    let mut raw_events = Vec::new();
    let mut meters = Vec::new();
    let mut tempi = Vec::new();
    let mut total = Rational::zero();
    for (part_index, part) in &parts {
        let end = PartReader::new(*part_index).read(*part, &mut raw_events, &mut meters, &mut tempi)?;
        total = total.max(end);
    }

    let mut merged = merge_ties(raw_events);
    // stable: document order breaks ties within (onset, part)
    merged.sort_by_key(|a| (a.onset, a.part_index));

    let tempo_map = TempoMap::from_marks(tempi);
    let events = merged
        .into_iter()
        .map(|raw| {
            let onset_seconds = tempo_map.seconds_at(&raw.onset);
            let end_seconds = tempo_map.seconds_at(&(raw.onset + raw.duration));
            NoteEvent {
                onset_quarters: raw.onset,
                duration_quarters: raw.duration,
                onset_seconds,
                duration_seconds: end_seconds - onset_seconds,
                midi_pitch: raw.pitch,
                part_index: raw.part_index,
                voice_id: raw.voice_id,
                is_chord_member: raw.chord,
                is_staccato: raw.staccato,
                tie_role: raw.tie_role,
            }
        })
        .collect();

    Ok(ScoreDocument {
        events,
        time_signatures: normalize_meters(meters),
        tempo_map,
        title: title_of(root),
        composer_name: composer_of(root),
        part_count: parts.len(),
        total_duration_quarters: total,
    })
}

#[derive(Debug, Clone)]
struct RawEvent {
    onset: Rational,
    duration: Rational,
    pitch: Option<u8>,
    part_index: usize,
    voice_id: String,
    chord: bool,
    staccato: bool,
    tie_start: bool,
    tie_stop: bool,
    tie_role: TieRole,
}

struct PartReader {
    part_index: usize,
    divisions: Rational,
    measure_start: Rational,
    cursor: Rational,
    measure_end: Rational,
    last_onset: Rational,
}

impl PartReader {
    fn new(part_index: usize) -> Self {
        Self {
            part_index,
            divisions: Rational::from_integer(1),
            measure_start: Rational::zero(),
            cursor: Rational::zero(),
            measure_end: Rational::zero(),
            last_onset: Rational::zero(),
        }
    }

    /// Walks every measure of the part and returns the part's end in quarters.
    fn read(
        mut self,
        part: Node,
        events: &mut Vec<RawEvent>,
        meters: &mut Vec<TimeSignatureChange>,
        tempi: &mut Vec<TempoSegment>,
    ) -> Result<Rational, ScoreError> {
        for measure in part.children().filter(|n| n.has_tag_name("measure")) {
            self.cursor = self.measure_start;
            self.measure_end = self.measure_start;
            for item in measure.children().filter(Node::is_element) {
                match item.tag_name().name() {
                    "attributes" => self.read_attributes(item, meters)?,
                    "note" => self.read_note(item, events)?,
                    "backup" => {
                        let d = self.duration_of(item)?;
                        self.cursor = (self.cursor - d).max(self.measure_start);
                    }
                    "forward" => {
                        let d = self.duration_of(item)?;
                        self.advance(d);
                    }
                    "direction" => self.read_direction(item, tempi)?,
                    "sound" => self.read_sound(item, self.cursor, tempi),
                    _ => {}
                }
            }
            self.measure_start = self.measure_end;
        }
        Ok(self.measure_start)
    }

    fn advance(&mut self, d: Rational) {
        self.cursor += d;
        if self.cursor > self.measure_end {
            self.measure_end = self.cursor;
        }
    }

    fn duration_of(&self, node: Node) -> Result<Rational, ScoreError> {
        match child_text(node, "duration") {
            Some(text) => {
                let d = parse_decimal(text)
                    .ok_or_else(|| ScoreError::Xml(format!("bad duration {text:?}")))?;
                if d.is_negative() {
                    return Err(ScoreError::Xml(format!("negative duration {text:?}")));
                }
                Ok(d / self.divisions)
            }
            None => Ok(Rational::zero()),
        }
    }

    fn read_attributes(
        &mut self,
        attrs: Node,
        meters: &mut Vec<TimeSignatureChange>,
    ) -> Result<(), ScoreError> {
        if let Some(text) = child_text(attrs, "divisions") {
            let d = parse_decimal(text)
                .filter(|d| d.is_positive())
                .ok_or_else(|| ScoreError::Xml(format!("bad divisions {text:?}")))?;
            self.divisions = d;
        }
        if let Some(time) = child(attrs, "time") {
            if let Some(signature) = parse_time(time) {
                meters.push(TimeSignatureChange { onset_quarters: self.cursor, signature });
            }
        }
        Ok(())
    }

    fn read_direction(&mut self, dir: Node, tempi: &mut Vec<TempoSegment>) -> Result<(), ScoreError> {
        let offset = match child_text(dir, "offset").and_then(parse_decimal) {
            Some(o) => o / self.divisions,
            None => Rational::zero(),
        };
        let at = (self.cursor + offset).max(Rational::zero());
        if let Some(sound) = child(dir, "sound") {
            if sound.attribute("tempo").is_some() {
                self.read_sound(sound, at, tempi);
                return Ok(());
            }
        }
        let metronome = dir
            .children()
            .filter(|n| n.has_tag_name("direction-type"))
            .find_map(|dt| child(dt, "metronome"));
        if let Some(qpm) = metronome.and_then(metronome_qpm) {
            tempi.push(TempoSegment { onset_quarters: at, quarters_per_minute: qpm });
        }
        Ok(())
    }

    fn read_sound(&self, sound: Node, at: Rational, tempi: &mut Vec<TempoSegment>) {
        if let Some(qpm) = sound.attribute("tempo").and_then(parse_decimal) {
            if qpm.is_positive() {
                tempi.push(TempoSegment { onset_quarters: at, quarters_per_minute: qpm });
            }
        }
    }

    fn read_note(&mut self, note: Node, events: &mut Vec<RawEvent>) -> Result<(), ScoreError> {
        if child(note, "grace").is_some() {
            return Ok(());
        }
        let duration = self.duration_of(note)?;
        let chord = child(note, "chord").is_some();
        let onset = if chord {
            self.last_onset
        } else {
            let onset = self.cursor;
            self.last_onset = onset;
            self.advance(duration);
            onset
        };

        if child(note, "cue").is_some() || child(note, "unpitched").is_some() {
            return Ok(());
        }
        let pitch = match (child(note, "rest"), child(note, "pitch")) {
            (Some(_), _) => None,
            (None, Some(p)) => Some(midi_pitch(p)?),
            (None, None) => return Ok(()),
        };

        let voice = child_text(note, "voice").unwrap_or("1");
        let (tie_start, tie_stop) = tie_flags(note);
        let notations: Vec<Node> = note.children().filter(|n| n.has_tag_name("notations")).collect();
        let staccato = notations.iter().any(|n| {
            n.children()
                .filter(|a| a.has_tag_name("articulations"))
                .any(|a| child(a, "staccato").is_some())
        });

        events.push(RawEvent {
            onset,
            duration,
            pitch,
            part_index: self.part_index,
            voice_id: format!("p{}/v{}", self.part_index, voice),
            chord,
            staccato,
            tie_start,
            tie_stop,
            tie_role: match (tie_start, tie_stop) {
                (true, true) => TieRole::Continue,
                (true, false) => TieRole::Start,
                (false, true) => TieRole::Stop,
                (false, false) => TieRole::None,
            },
        });
        Ok(())
    }
}

/// Collapses tie chains into one event per chain. A continuation is merged
/// only when it starts exactly where the open chain ends in the same voice
/// with the same pitch; anything else starts a new event.
fn merge_ties(raw: Vec<RawEvent>) -> Vec<RawEvent> {
    let mut out: Vec<RawEvent> = Vec::with_capacity(raw.len());
    let mut open: HashMap<(usize, String, u8), usize> = HashMap::new();
    for ev in raw {
        let Some(pitch) = ev.pitch else {
            out.push(ev);
            continue;
        };
        let key = (ev.part_index, ev.voice_id.clone(), pitch);
        if ev.tie_stop {
            if let Some(&idx) = open.get(&key) {
                let head = &mut out[idx];
                if head.onset + head.duration == ev.onset {
                    head.duration += ev.duration;
                    if !ev.tie_start {
                        open.remove(&key);
                    }
                    continue;
                }
            }
        }
        if ev.tie_start {
            open.insert(key, out.len());
        } else {
            open.remove(&key);
        }
        out.push(ev);
    }
    out
}

fn normalize_meters(mut meters: Vec<TimeSignatureChange>) -> Vec<TimeSignatureChange> {
    meters.sort_by_key(|a| a.onset_quarters);
    meters.dedup_by(|later, earlier| later.onset_quarters == earlier.onset_quarters);
    meters.dedup_by(|later, earlier| later.signature == earlier.signature);
    if meters.first().is_none_or(|m| m.onset_quarters > Rational::zero()) {
        let (numerator, denominator) = DEFAULT_TIME_SIGNATURE;
        meters.insert(
            0,
            TimeSignatureChange {
                onset_quarters: Rational::zero(),
                signature: TimeSignature { numerator, denominator },
            },
        );
    }
    meters
}

fn parse_time(time: Node) -> Option<TimeSignature> {
    let beats = child_text(time, "beats")?;
    let beat_type = child_text(time, "beat-type")?;
    // additive meters like "3+2"
    let numerator = beats
        .split('+')
        .map(|b| b.trim().parse::<u32>().ok())
        .sum::<Option<u32>>()?;
    let denominator = beat_type.trim().parse::<u32>().ok()?;
    (numerator > 0 && denominator > 0).then_some(TimeSignature { numerator, denominator })
}

fn metronome_qpm(metronome: Node) -> Option<Rational> {
    let unit = child_text(metronome, "beat-unit")?;
    let per_minute = parse_decimal(child_text(metronome, "per-minute")?)?;
    let mut quarters = match unit.trim() {
        "whole" => Rational::from_integer(4),
        "half" => Rational::from_integer(2),
        "quarter" => Rational::from_integer(1),
        "eighth" => Rational::new(1, 2),
        "16th" => Rational::new(1, 4),
        "32nd" => Rational::new(1, 8),
        _ => return None,
    };
    let dots = metronome.children().filter(|n| n.has_tag_name("beat-unit-dot")).count();
    let mut add = quarters;
    for _ in 0..dots {
        add /= Rational::from_integer(2);
        quarters += add;
    }
    let qpm = per_minute * quarters;
    qpm.is_positive().then_some(qpm)
}

fn midi_pitch(pitch: Node) -> Result<u8, ScoreError> {
    let step = child_text(pitch, "step").ok_or_else(|| ScoreError::Xml("pitch without step".into()))?;
    let semitone = match step.trim() {
        "C" => 0,
        "D" => 2,
        "E" => 4,
        "F" => 5,
        "G" => 7,
        "A" => 9,
        "B" => 11,
        other => return Err(ScoreError::Xml(format!("bad step {other:?}"))),
    };
    let octave: i64 = child_text(pitch, "octave")
        .and_then(|o| o.trim().parse().ok())
        .ok_or_else(|| ScoreError::Xml("pitch without valid octave".into()))?;
    // microtonal alters round to the nearest semitone
    let alter = match child_text(pitch, "alter") {
        Some(a) => a
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|a| a.is_finite())
            .map(|a| a.round() as i64)
            .ok_or_else(|| ScoreError::Xml(format!("bad alter {a:?}")))?,
        None => 0,
    };
    let midi = (octave + 1) * 12 + semitone + alter;
    u8::try_from(midi)
        .ok()
        .filter(|m| *m <= 127)
        .ok_or_else(|| ScoreError::Xml(format!("pitch {midi} outside MIDI range")))
}

fn tie_flags(note: Node) -> (bool, bool) {
    let mut start = false;
    let mut stop = false;
    let ties = note.children().filter(|n| n.has_tag_name("tie"));
    let tied = note
        .children()
        .filter(|n| n.has_tag_name("notations"))
        .flat_map(|n| n.children().filter(|t| t.has_tag_name("tied")));
    for t in ties.chain(tied) {
        match t.attribute("type") {
            Some("start") => start = true,
            Some("stop") => stop = true,
            Some("continue") => {
                start = true;
                stop = true;
            }
            _ => {}
        }
    }
    (start, stop)
}

fn title_of(root: Node) -> String {
    child(root, "work")
        .and_then(|w| child_text(w, "work-title"))
        .or_else(|| child_text(root, "movement-title"))
        .map(|t| t.trim().to_owned())
        .filter(|t| !t.is_empty())
        .unwrap_or_default()
}

fn composer_of(root: Node) -> String {
    let Some(ident) = child(root, "identification") else {
        return String::new();
    };
    let creators: Vec<Node> = ident.children().filter(|n| n.has_tag_name("creator")).collect();
    creators
        .iter()
        .find(|c| c.attribute("type") == Some("composer"))
        .or_else(|| creators.first())
        .and_then(|c| c.text())
        .map(|t| t.trim().to_owned())
        .unwrap_or_default()
}

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|n| n.has_tag_name(name))
}

fn child_text<'a>(node: Node<'a, '_>, name: &str) -> Option<&'a str> {
    child(node, name).and_then(|n| n.text())
}

/// Parses a plain decimal literal (`"72"`, `"-1.5"`, `".25"`) exactly.
pub(crate) fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // beyond 12 fractional digits is float noise from exporters
    let frac_part = &frac_part[..frac_part.len().min(12)];
    let int: i128 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac: i128 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let scale = 10i128.checked_pow(frac_part.len() as u32)?;
    let value = Rational::new(int.checked_mul(scale)?.checked_add(frac)?, scale);
    Some(if negative { -value } else { value })
}
