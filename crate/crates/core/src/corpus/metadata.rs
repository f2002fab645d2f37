use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use super::ManifestRow;
use crate::score::ScoreDocument;

pub const UNKNOWN: &str = "unknown";

/// Composition types ordered by average composing date, each with the
/// title keywords that identify it.
pub static TYPE_TAXONOMY: &[(&str, &[&str])] = &[
    ("soundtrack", &["soundtrack", "theme from", r"ost\b"]),
    ("medley", &["medley", "potpourri"]),
    ("nocturne", &["nocturne", "notturno"]),
    ("ballad", &["ballad", "ballata"]),
    ("chorale", &["choral"]),
    ("hymn", &["hymn"]),
    ("concerto", &["concerto", "konzert"]),
    ("minuet", &["minuet", "menuet", "minuetto"]),
    ("prelude", &["prelude", "prélude", "praeludium", "preludio"]),
    ("lauda", &[r"laud[ae]\b"]),
    ("scherzo", &["scherz"]),
    ("fantasia", &["fantasia", "fantasie", "fantasy", "fantaisie"]),
    ("requiem", &["requiem"]),
    ("oratorio", &["oratori"]),
    ("sonata", &["sonat"]),
    ("intermezzo", &["intermezz"]),
    ("symphony", &["symphon", "sinfonia"]),
    ("etude", &["etude", "étude", r"stud(?:y|ies)\b"]),
    ("serenade", &["serenade", "serenata", "ständchen"]),
    ("rondo", &["rondo", "rondeau"]),
    ("opera", &[r"opera\b", r"aria\b"]),
    ("suite", &["suite"]),
    ("fugue", &["fugue", r"fuga\b"]),
    ("rhapsody", &["rhapsod", "rapsodi"]),
    ("waltz", &["waltz", "valse", "walzer"]),
    ("mazurka", &["mazurk"]),
    ("madrigal", &["madrigal"]),
    ("polonaise", &["polonaise", "polacca"]),
];

pub fn is_known_type(t: &str) -> bool {
    t == UNKNOWN || TYPE_TAXONOMY.iter().any(|(name, _)| *name == t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferredMetadata {
    pub title: String,
    pub composer: String,
    pub composition_type: String,
    pub opus: Option<String>,
}

fn type_patterns() -> &'static [(&'static str, Regex)] {
    static PATTERNS: OnceLock<Vec<(&'static str, Regex)>> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        TYPE_TAXONOMY
            .iter()
            .map(|(name, keywords)| {
                let re = Regex::new(&format!(r"(?i)\b(?:{})", keywords.join("|"))).expect("valid keyword pattern");
                (*name, re)
            })
            .collect()
    })
}

fn opus_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(
            r"\b(?:[Oo]p(?:us)?\.?\s*\d+[a-z]?|BWV\s*\d+[a-z]?|HWV\s*\d+|KV?\.?\s*\d+[a-z]?|D\.\s*\d+|S\.\s*\d+|WoO\.?\s*\d+|Hob\.\s*[IVXL]+[:/]\d+)",
        )
        .expect("valid opus pattern")
    })
}

/// Composition type from a title: the taxonomy keyword that occurs first
/// (leftmost, longest on ties) at a word start, case-insensitively.
pub fn infer_type(title: &str) -> String {
    type_patterns()
        .iter()
        .filter_map(|(name, re)| re.find(title).map(|m| (m.start(), std::cmp::Reverse(m.len()), *name)))
        .min()
        .map_or_else(|| UNKNOWN.to_owned(), |(_, _, name)| name.to_owned())
}

/// Catalogue number such as `Op. 27`, `D.781`, `S.558` or `BWV 846`.
pub fn parse_opus(title: &str) -> Option<String> {
    opus_pattern().find(title).map(|m| m.as_str().trim().to_owned())
}

/// Title, composer, type and opus for a score. Manifest fields win over
/// anything read from the score; missing fields become `"unknown"`.
pub fn infer_metadata(doc: &ScoreDocument, row: Option<&ManifestRow>) -> InferredMetadata {
    let non_empty = |s: &Option<String>| s.as_ref().map(|v| v.trim().to_owned()).filter(|v| !v.is_empty());
    let title = row
        .and_then(|r| non_empty(&r.title))
        .or_else(|| Some(doc.title.trim().to_owned()).filter(|t| !t.is_empty()))
        .unwrap_or_else(|| UNKNOWN.to_owned());
    let composer = row
        .and_then(|r| non_empty(&r.composer))
        .or_else(|| Some(doc.composer_name.trim().to_owned()).filter(|c| !c.is_empty()))
        .unwrap_or_else(|| UNKNOWN.to_owned());
    let composition_type = row
        .and_then(|r| non_empty(&r.composition_type))
        .map(|t| t.to_lowercase())
        .filter(|t| is_known_type(t))
        .unwrap_or_else(|| if title == UNKNOWN { UNKNOWN.to_owned() } else { infer_type(&title) });
    let opus = row.and_then(|r| non_empty(&r.opus)).or_else(|| parse_opus(&title));
    InferredMetadata { title, composer, composition_type, opus }
}

/// Stable identifier for a composer name: lowercase alphanumeric words
/// joined by hyphens.
pub fn composer_slug(name: &str) -> String {
    let slug = name
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join("-");
    if slug.is_empty() {
        UNKNOWN.to_owned()
    } else {
        slug
    }
}
