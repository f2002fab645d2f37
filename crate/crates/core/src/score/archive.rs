use std::io::{Cursor, Read};

use super::{parse_musicxml, ScoreDocument, ScoreError};

const ZIP_MAGIC: &[u8] = b"PK\x03\x04";
const EMPTY_ZIP_MAGIC: &[u8] = b"PK\x05\x06";
const CONTAINER_PATH: &str = "META-INF/container.xml";

pub(crate) fn is_zip(bytes: &[u8]) -> bool {
    bytes.starts_with(ZIP_MAGIC) || bytes.starts_with(EMPTY_ZIP_MAGIC)
}

/// Parses a compressed `.mxl` archive. Raw MusicXML is accepted too.
pub fn parse_mxl(bytes: &[u8]) -> Result<ScoreDocument, ScoreError> {
    if !is_zip(bytes) {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| ScoreError::Archive("not a ZIP archive or MusicXML document".into()))?;
        if !text.trim_start().starts_with('<') {
            return Err(ScoreError::Archive("not a ZIP archive or MusicXML document".into()));
        }
        return parse_musicxml(text);
    }
    let xml = read_root_document(bytes)?;
    parse_musicxml(&xml)
}

/// Extracts the root MusicXML document from an `.mxl` archive.
///
/// The root is resolved through `META-INF/container.xml`; if the container
/// does not name one, the first `.xml`/`.musicxml` entry outside `META-INF/`
/// is used. An archive without a container file is rejected.
pub fn read_root_document(bytes: &[u8]) -> Result<String, ScoreError> {
    let mut zip = zip::ZipArchive::new(Cursor::new(bytes))
        .map_err(|e| ScoreError::Archive(e.to_string()))?;

    let container = read_entry(&mut zip, CONTAINER_PATH)?
        .ok_or_else(|| ScoreError::Archive(format!("missing {CONTAINER_PATH}")))?;

    let root_path = match rootfile_path(&container)? {
        Some(path) if zip.index_for_name(&path).is_some() => path,
        _ => first_score_entry(&zip)
            .ok_or_else(|| ScoreError::Archive("no MusicXML entry in archive".into()))?,
    };

    read_entry(&mut zip, &root_path)?
        .ok_or_else(|| ScoreError::Archive(format!("missing root file {root_path}")))
}

fn read_entry(
    zip: &mut zip::ZipArchive<Cursor<&[u8]>>,
    name: &str,
) -> Result<Option<String>, ScoreError> {
    let mut file = match zip.by_name(name) {
        Ok(f) => f,
        Err(zip::result::ZipError::FileNotFound) => return Ok(None),
        Err(e) => return Err(ScoreError::Archive(e.to_string())),
    };
    let mut raw = Vec::new();
    file.read_to_end(&mut raw).map_err(|e| ScoreError::Archive(e.to_string()))?;
    decode_text(raw).map(Some)
}

/// MusicXML inside archives is usually UTF-8; UTF-16 with a BOM shows up
/// from some Windows exporters.
fn decode_text(raw: Vec<u8>) -> Result<String, ScoreError> {
    if raw.len() >= 2 && (raw[..2] == [0xFF, 0xFE] || raw[..2] == [0xFE, 0xFF]) {
        let le = raw[0] == 0xFF;
        let units: Vec<u16> = raw[2..]
            .chunks_exact(2)
            .map(|c| if le { u16::from_le_bytes([c[0], c[1]]) } else { u16::from_be_bytes([c[0], c[1]]) })
            .collect();
        return String::from_utf16(&units).map_err(|e| ScoreError::Xml(e.to_string()));
    }
    let raw = raw.strip_prefix(b"\xEF\xBB\xBF").map(<[u8]>::to_vec).unwrap_or(raw);
    String::from_utf8(raw).map_err(|e| ScoreError::Xml(format!("entry is not valid UTF-8: {e}")))
}

fn rootfile_path(container: &str) -> Result<Option<String>, ScoreError> {
    let doc = roxmltree::Document::parse(container)
        .map_err(|e| ScoreError::Archive(format!("bad container.xml: {e}")))?;
    Ok(doc
        .descendants()
        .filter(|n| n.has_tag_name("rootfile"))
        .find(|n| {
            // skip non-MusicXML renditions (e.g. PDF) when a media type is given
            n.attribute("media-type")
                .is_none_or(|m| m.contains("musicxml") || m.ends_with("xml"))
        })
        .and_then(|n| n.attribute("full-path"))
        .map(str::to_owned))
}

fn first_score_entry(zip: &zip::ZipArchive<Cursor<&[u8]>>) -> Option<String> {
    zip.file_names()
        .filter(|n| !n.starts_with("META-INF/"))
        .filter(|n| n.ends_with(".xml") || n.ends_with(".musicxml"))
        .min()
        .map(str::to_owned)
}
