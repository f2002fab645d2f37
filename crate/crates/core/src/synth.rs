//! Synthetic MusicXML scores.
//!
//! [`SynthScore`] is a small in-memory score model that serialises to
//! `score-partwise` MusicXML, wrapped in an `.mxl` archive if wanted. The
//! random generators produce corpora with a controllable tonal or atonal
//! flavour.

use std::io::{Cursor, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{IngestManifest, ManifestComposer, ManifestRow};

/// Divisions per quarter note in generated files; durations are counted in
/// sixteenths.
pub const DIVISIONS: u32 = 4;

/// Wraps one MusicXML document into an `.mxl` archive with a container file.
pub fn write_mxl(name: &str, xml: &str) -> Result<Vec<u8>, zip::result::ZipError> {
    let mut buf = Cursor::new(Vec::new());
    {
        let mut w = zip::ZipWriter::new(&mut buf);
        let stored = zip::write::SimpleFileOptions::default().compression_method(zip::CompressionMethod::Stored);
        let deflated = zip::write::SimpleFileOptions::default().compression_method(zip::CompressionMethod::Deflated);
        w.start_file("mimetype", stored)?;
        w.write_all(b"application/vnd.recordare.musicxml")?;
        w.start_file("META-INF/container.xml", deflated)?;
        write!(
            w,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<container><rootfiles><rootfile full-path="{name}" media-type="application/vnd.recordare.musicxml+xml"/></rootfiles></container>
"#
        )?;
        w.start_file(name, deflated)?;
        w.write_all(xml.as_bytes())?;
        w.finish()?;
    }
    Ok(buf.into_inner())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthNote {
    /// MIDI pitches sounding together; empty for a rest.
    pub pitches: Vec<u8>,
    /// Length in sixteenths.
    pub sixteenths: u32,
    pub staccato: bool,
}

impl SynthNote {
    pub fn note(pitch: u8, sixteenths: u32) -> Self {
        Self { pitches: vec![pitch], sixteenths, staccato: false }
    }

    pub fn chord(pitches: &[u8], sixteenths: u32) -> Self {
        Self { pitches: pitches.to_vec(), sixteenths, staccato: false }
    }

    pub fn rest(sixteenths: u32) -> Self {
        Self { pitches: vec![], sixteenths, staccato: false }
    }

    pub fn staccato(mut self) -> Self {
        self.staccato = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScore {
    pub title: String,
    pub composer: String,
    pub tempo_qpm: u32,
    /// (beats, beat type); beat type is 2, 4 or 8.
    pub time_signature: (u32, u32),
    /// Parts, each made of voices, each a sequence of notes.
    pub parts: Vec<Vec<Vec<SynthNote>>>,
}

const STEPS: [(&str, i8); 12] = [
    ("C", 0),
    ("C", 1),
    ("D", 0),
    ("D", 1),
    ("E", 0),
    ("F", 0),
    ("F", 1),
    ("G", 0),
    ("G", 1),
    ("A", 0),
    ("A", 1),
    ("B", 0),
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl SynthScore {
    pub fn new(title: impl Into<String>, composer: impl Into<String>) -> Self {
        Self { title: title.into(), composer: composer.into(), tempo_qpm: 120, time_signature: (4, 4), parts: vec![] }
    }

    pub fn single_voice(title: impl Into<String>, notes: Vec<SynthNote>) -> Self {
        let mut s = Self::new(title, "");
        s.parts.push(vec![notes]);
        s
    }

    pub fn with_tempo(mut self, qpm: u32) -> Self {
        self.tempo_qpm = qpm;
        self
    }

    /// Shifts every pitch; `None` if a pitch would leave the MIDI range.
    pub fn transposed(&self, semitones: i32) -> Option<Self> {
        let mut out = self.clone();
        for note in out.parts.iter_mut().flatten().flatten() {
            for p in &mut note.pitches {
                *p = u8::try_from(i32::from(*p) + semitones).ok().filter(|v| *v <= 127)?;
            }
        }
        Some(out)
    }

    fn measure_sixteenths(&self) -> u32 {
        let (beats, beat_type) = self.time_signature;
        beats * 16 / beat_type
    }

    pub fn to_musicxml(&self) -> String {
        let mut xml = String::from(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<score-partwise version=\"3.1\">\n",
        );
        xml += &format!("  <work><work-title>{}</work-title></work>\n", escape(&self.title));
        if !self.composer.is_empty() {
            xml += &format!(
                "  <identification><creator type=\"composer\">{}</creator></identification>\n",
                escape(&self.composer)
            );
        }
        xml += "  <part-list>\n";
        for i in 0..self.parts.len() {
            xml += &format!("    <score-part id=\"P{}\"><part-name>Part {}</part-name></score-part>\n", i + 1, i + 1);
        }
        xml += "  </part-list>\n";

        let bar = self.measure_sixteenths();
        let total: u32 = self
            .parts
            .iter()
            .flatten()
            .map(|v| v.iter().map(|n| n.sixteenths).sum::<u32>())
            .max()
            .unwrap_or(0);
        let measures = total.div_ceil(bar).max(1);

        for (pi, voices) in self.parts.iter().enumerate() {
            xml += &format!("  <part id=\"P{}\">\n", pi + 1);
            // each voice split at barlines: (measure, pieces)
            let split: Vec<Vec<Vec<Piece>>> = voices.iter().map(|v| split_voice(v, bar, measures)).collect();
            for m in 0..measures {
                xml += &format!("    <measure number=\"{}\">\n", m + 1);
                if m == 0 {
                    let (beats, beat_type) = self.time_signature;
                    xml += &format!(
                        "      <attributes><divisions>{DIVISIONS}</divisions><time><beats>{beats}</beats><beat-type>{beat_type}</beat-type></time></attributes>\n"
                    );
                    if pi == 0 {
                        xml += &format!(
                            "      <direction placement=\"above\"><direction-type><metronome><beat-unit>quarter</beat-unit><per-minute>{0}</per-minute></metronome></direction-type><sound tempo=\"{0}\"/></direction>\n",
                            self.tempo_qpm
                        );
                    }
                }
                let mut written = 0;
                for (vi, voice) in split.iter().enumerate() {
                    if written > 0 {
                        xml += &format!("      <backup><duration>{written}</duration></backup>\n");
                    }
                    written = 0;
                    for piece in &voice[m as usize] {
                        write_piece(&mut xml, piece, vi + 1);
                        written += piece.sixteenths;
                    }
                }
                xml += "    </measure>\n";
            }
            xml += "  </part>\n";
        }
        xml += "</score-partwise>\n";
        xml
    }

    pub fn to_mxl(&self) -> Vec<u8> {
        write_mxl("score.xml", &self.to_musicxml()).expect("in-memory zip cannot fail")
    }
}

struct Piece<'a> {
    note: &'a SynthNote,
    sixteenths: u32,
    tie_start: bool,
    tie_stop: bool,
}

fn split_voice(notes: &[SynthNote], bar: u32, measures: u32) -> Vec<Vec<Piece<'_>>> {
    let mut out: Vec<Vec<Piece<'_>>> = (0..measures).map(|_| Vec::new()).collect();
    let mut pos = 0;
    for note in notes.iter().filter(|n| n.sixteenths > 0) {
        let mut left = note.sixteenths;
        let mut first = true;
        while left > 0 {
            let room = bar - pos % bar;
            let take = left.min(room);
            left -= take;
            let tied = !note.pitches.is_empty();
            out[(pos / bar) as usize].push(Piece {
                note,
                sixteenths: take,
                tie_start: tied && left > 0,
                tie_stop: tied && !first,
            });
            pos += take;
            first = false;
        }
    }
    out
}

fn write_piece(xml: &mut String, piece: &Piece<'_>, voice: usize) {
    let d = piece.sixteenths;
    if piece.note.pitches.is_empty() {
        *xml += &format!("      <note><rest/><duration>{d}</duration><voice>{voice}</voice></note>\n");
        return;
    }
    for (k, &p) in piece.note.pitches.iter().enumerate() {
        let (step, alter) = STEPS[usize::from(p % 12)];
        let octave = i32::from(p / 12) - 1;
        *xml += "      <note>";
        if k > 0 {
            *xml += "<chord/>";
        }
        *xml += &format!("<pitch><step>{step}</step>");
        if alter != 0 {
            *xml += &format!("<alter>{alter}</alter>");
        }
        *xml += &format!("<octave>{octave}</octave></pitch><duration>{d}</duration>");
        if piece.tie_stop {
            *xml += "<tie type=\"stop\"/>";
        }
        if piece.tie_start {
            *xml += "<tie type=\"start\"/>";
        }
        *xml += &format!("<voice>{voice}</voice>");
        let staccato = piece.note.staccato && !piece.tie_start;
        if piece.tie_start || piece.tie_stop || staccato {
            *xml += "<notations>";
            if piece.tie_stop {
                *xml += "<tied type=\"stop\"/>";
            }
            if piece.tie_start {
                *xml += "<tied type=\"start\"/>";
            }
            if staccato {
                *xml += "<articulations><staccato/></articulations>";
            }
            *xml += "</notations>";
        }
        *xml += "</note>\n";
    }
}

/// Knobs for [`random_score`].
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    /// Draw pitches from a major scale; otherwise from all twelve classes.
    pub tonal: bool,
    pub tonic: u8,
    /// Chance that the next melody note moves by step.
    pub stepwise: f64,
    pub staccato: f64,
    pub tempo_qpm: u32,
    pub time_signature: (u32, u32),
    pub measures: u32,
    /// Add an accompanying bass voice.
    pub bass: bool,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            tonal: true,
            tonic: 60,
            stepwise: 0.6,
            staccato: 0.1,
            tempo_qpm: 100,
            time_signature: (4, 4),
            measures: 8,
            bass: true,
        }
    }
}

const MAJOR: [u8; 7] = [0, 2, 4, 5, 7, 9, 11];

fn scale_pitches(style: &Style, low: u8, high: u8) -> Vec<u8> {
    (low..=high)
        .filter(|p| !style.tonal || MAJOR.contains(&((p + 12 - style.tonic % 12) % 12)))
        .collect()
}

/// Random score in the given style. Pitches stay within MIDI 36..=96.
pub fn random_score<R: Rng + ?Sized>(rng: &mut R, title: &str, composer: &str, style: &Style) -> SynthScore {
    let bar = style.time_signature.0 * 16 / style.time_signature.1;
    let total = bar * style.measures.max(1);
    let melody_pitches = scale_pitches(style, 60, 84);
    let bass_pitches = scale_pitches(style, 36, 55);
    let durations = [2u32, 4, 4, 4, 8, 6, 12];

    let mut melody = Vec::new();
    let mut pos = 0;
    let mut idx = rng.gen_range(0..melody_pitches.len());
    while pos < total {
        let d = (*durations.choose(rng).expect("non-empty")).min(total - pos);
        if rng.gen_bool(0.08) {
            melody.push(SynthNote::rest(d));
        } else {
            idx = if rng.gen_bool(style.stepwise.clamp(0.0, 1.0)) {
                let up = rng.gen_bool(0.5);
                if (up && idx + 1 < melody_pitches.len()) || idx == 0 {
                    idx + 1
                } else {
                    idx - 1
                }
            } else {
                rng.gen_range(0..melody_pitches.len())
            };
            let mut n = SynthNote::note(melody_pitches[idx], d);
            n.staccato = rng.gen_bool(style.staccato.clamp(0.0, 1.0));
            melody.push(n);
        }
        pos += d;
    }

    let mut voices = vec![melody];
    if style.bass {
        let mut bass = Vec::new();
        let mut pos = 0;
        while pos < total {
            let d = bar.min(total - pos) / if rng.gen_bool(0.5) { 1 } else { 2 }.max(1);
            let d = d.max(1);
            let root = *bass_pitches.choose(rng).expect("non-empty");
            if rng.gen_bool(0.3) && root + 7 <= 96 {
                bass.push(SynthNote::chord(&[root, root + 7], d));
            } else {
                bass.push(SynthNote::note(root, d));
            }
            pos += d;
        }
        voices.push(bass);
    }

    SynthScore {
        title: title.into(),
        composer: composer.into(),
        tempo_qpm: style.tempo_qpm,
        time_signature: style.time_signature,
        parts: vec![voices],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DemoComposer {
    pub id: &'static str,
    pub name: &'static str,
    pub birth_year: i32,
    pub death_year: i32,
}

pub const DEMO_COMPOSERS: &[DemoComposer] = &[
    DemoComposer { id: "johann-sebastian-bach", name: "Johann Sebastian Bach", birth_year: 1685, death_year: 1750 },
    DemoComposer { id: "wolfgang-amadeus-mozart", name: "Wolfgang Amadeus Mozart", birth_year: 1756, death_year: 1791 },
    DemoComposer { id: "franz-liszt", name: "Franz Liszt", birth_year: 1811, death_year: 1886 },
    DemoComposer { id: "franz-schubert", name: "Franz Schubert", birth_year: 1797, death_year: 1828 },
    DemoComposer { id: "frederic-chopin", name: "Frédéric Chopin", birth_year: 1810, death_year: 1849 },
    DemoComposer { id: "arnold-schoenberg", name: "Arnold Schoenberg", birth_year: 1874, death_year: 1951 },
    DemoComposer { id: "george-frideric-handel", name: "George Frideric Handel", birth_year: 1685, death_year: 1759 },
    DemoComposer { id: "joseph-haydn", name: "Joseph Haydn", birth_year: 1732, death_year: 1809 },
    DemoComposer { id: "claude-debussy", name: "Claude Debussy", birth_year: 1862, death_year: 1918 },
    DemoComposer { id: "anton-webern", name: "Anton Webern", birth_year: 1883, death_year: 1945 },
];

pub const DEMO_TYPES: &[&str] = &["sonata", "waltz", "fugue", "nocturne", "prelude", "etude", "mazurka", "minuet"];

fn capitalise(s: &str) -> String {
    let mut c = s.chars();
    c.next().map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
}

/// Writes `composers × types` scores (plus the two Erlkönig settings when
/// both Schubert and Liszt are among the composers) and a `manifest.json` into
/// `dir`. Composers after the mid-nineteenth century write atonally.
pub fn write_demo_corpus(
    dir: &Path,
    seed: u64,
    composers: usize,
    types: usize,
) -> std::io::Result<IngestManifest> {
    std::fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = &DEMO_COMPOSERS[..composers.min(DEMO_COMPOSERS.len())];
    let mut manifest = IngestManifest {
        public_domain_only: false,
        composers: chosen
            .iter()
            .map(|c| ManifestComposer {
                id: c.id.into(),
                display_name: c.name.into(),
                birth_year: Some(c.birth_year),
                death_year: Some(c.death_year),
            })
            .collect(),
        files: Default::default(),
    };

    let mut emit = |file: String, score: SynthScore, composer: &str, kind: &str, opus: Option<String>| {
        std::fs::write(dir.join(&file), score.to_mxl())?;
        manifest.files.insert(
            file,
            ManifestRow {
                title: Some(score.title.clone()),
                composer: Some(composer.into()),
                composition_type: Some(kind.into()),
                opus,
            },
        );
        std::io::Result::Ok(())
    };

    for (ci, c) in chosen.iter().enumerate() {
        let atonal = c.birth_year > 1870;
        for (ti, kind) in DEMO_TYPES.iter().cycle().skip(ci).take(types).enumerate() {
            let style = Style {
                tonal: !atonal,
                tonic: 55 + rng.gen_range(0..12),
                stepwise: if atonal { 0.2 } else { 0.5 + rng.gen_range(0.0..0.4) },
                staccato: rng.gen_range(0.0..0.3),
                tempo_qpm: rng.gen_range(60..=160),
                time_signature: if matches!(*kind, "waltz" | "minuet" | "mazurka") { (3, 4) } else { *[(4, 4), (2, 4), (3, 4), (6, 8)].choose(&mut rng).expect("non-empty") },
                measures: rng.gen_range(6..=16),
                bass: *kind != "etude" || rng.gen_bool(0.5),
            };
            let title = format!("{} No. {}", capitalise(kind), ti + 1);
            let score = random_score(&mut rng, &title, c.name, &style);
            let opus = format!("Op. {}", ti + 1 + ci * 10);
            emit(format!("{}-{}-{}.mxl", c.id, kind, ti + 1), score, c.id, kind, Some(opus))?;
        }
    }

    let style = Style { stepwise: 0.4, tempo_qpm: 152, time_signature: (4, 4), measures: 12, ..Style::default() };
    let has = |id: &str| chosen.iter().any(|c| c.id == id);
    if has("franz-schubert") && has("franz-liszt") {
        let score = random_score(&mut rng, "Erlkönig D.328", "Franz Schubert", &Style { tonic: 55, ..style.clone() });
        emit("schubert-erlkoenig.mxl".into(), score, "franz-schubert", "ballad", Some("D.328".into()))?;
        let score = random_score(&mut rng, "Erlkönig S.558 No. 4", "Franz Liszt", &Style { tonic: 55, staccato: 0.3, ..style });
        emit("liszt-erlkoenig.mxl".into(), score, "franz-liszt", "ballad", Some("S.558".into()))?;
    }

    let json = serde_json::to_vec_pretty(&manifest).map_err(std::io::Error::other)?;
    std::fs::write(dir.join("manifest.json"), json)?;
    Ok(manifest)
}
