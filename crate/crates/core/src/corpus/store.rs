use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::manifest::{
    read_json, write_atomic, write_json_atomic, FeatureCache, StoredManifest, MANIFEST_FORMAT,
};
use super::metadata::{composer_slug, infer_metadata, UNKNOWN};
use super::{
    is_valid_slug, ColorBy, ComposerEntry, CompositionRecord, CorpusError, Epoch, EpochBoundaries,
    Grouping, IngestManifest, ManifestRow, UseCase,
};
use crate::analytics::aggregate_group;
use crate::features::{extract_features, is_known_feature, FeatureVector, QualityFlag, CATALOG_VERSION};
use crate::score::{parse_score_bytes, ScoreDocument};

const SCORES_DIR: &str = "scores";
const USECASES_DIR: &str = "usecases";
const MANIFEST_FILE: &str = "manifest.json";
const FEATURES_FILE: &str = "features.json";
const SCORE_EXTENSIONS: &[&str] = &["mxl", "xml", "musicxml"];
const COPYRIGHT_YEARS: i32 = 70;

/// Immutable view of the corpus. Readers hold an `Arc` to one snapshot while
/// writers build and publish the next.
#[derive(Debug, Clone, Default)]
pub struct CorpusSnapshot {
    pub records: BTreeMap<String, CompositionRecord>,
    pub composers: BTreeMap<String, ComposerEntry>,
    pub use_cases: BTreeMap<String, UseCase>,
    pub boundaries: EpochBoundaries,
}

/// Conjunctive filter; empty lists mean "no constraint".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompositionQuery {
    pub keyword: Option<String>,
    #[serde(default)]
    pub composer_ids: Vec<String>,
    #[serde(default)]
    pub types: Vec<String>,
    #[serde(default)]
    pub epochs: Vec<Epoch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub key: String,
    pub members: Vec<String>,
    pub features: FeatureVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileFailure {
    pub file: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DuplicateEntry {
    pub file: String,
    pub duplicate_of: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    /// Ids of newly added compositions.
    pub parsed: Vec<String>,
    pub failed: Vec<FileFailure>,
    /// Files whose content already exists under another name.
    pub duplicates: Vec<DuplicateEntry>,
    /// Files already ingested from the same name with the same content.
    pub unchanged: usize,
    /// Files rejected by the public-domain rule.
    pub excluded: Vec<FileFailure>,
    /// Whether the spot-checked cached vector matched a fresh extraction.
    pub cache_verified: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    /// Overrides the manifest's `public_domain_only` when set.
    pub public_domain_only: Option<bool>,
    /// Year the 70-year rule is measured from.
    pub reference_year: i32,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { public_domain_only: None, reference_year: current_year() }
    }
}

fn current_year() -> i32 {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    1970 + (secs / 31_556_952) as i32
}

pub fn content_id(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    hex::encode(&digest[..8])
}

/// Single-writer, many-reader corpus rooted at a directory.
pub struct CorpusStore {
    root: PathBuf,
    current: RwLock<Arc<CorpusSnapshot>>,
    writer: Mutex<()>,
}

impl std::fmt::Debug for CorpusStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusStore").field("root", &self.root).finish_non_exhaustive()
    }
}

impl CorpusStore {
    /// Opens (or initialises) a corpus directory. Cached features written by
    /// another catalog version, or incomplete ones, are recomputed from the
    /// stored scores.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, CorpusError> {
        let root = root.into();
        for dir in [root.clone(), root.join(SCORES_DIR), root.join(USECASES_DIR)] {
            std::fs::create_dir_all(&dir).map_err(|e| CorpusError::io(&dir, e))?;
        }

        let mut snapshot = CorpusSnapshot::default();
        let mut dirty = false;
        if let Some(manifest) = read_json::<StoredManifest>(&root.join(MANIFEST_FILE))? {
            snapshot.boundaries = manifest.epoch_boundaries;
            for mut c in manifest.composers {
                c.epoch = snapshot.boundaries.classify(c.birth_year, c.death_year);
                snapshot.composers.insert(c.composer_id.clone(), c);
            }
            for r in manifest.compositions {
                snapshot.records.insert(r.id.clone(), r);
            }
        }

        let cache = read_json::<FeatureCache>(&root.join(FEATURES_FILE))?;
        let mut cached = match cache {
            Some(c) if c.catalog_version == CATALOG_VERSION => c.features,
            Some(_) => {
                dirty = true;
                BTreeMap::new()
            }
            None => BTreeMap::new(),
        };
        for record in snapshot.records.values_mut() {
            if let Some(mut v) = cached.remove(&record.id) {
                v.retain_known();
                if v.is_complete() {
                    record.features = v;
                    continue;
                }
            }
            let bytes = std::fs::read(root.join(&record.source_path))
                .map_err(|e| CorpusError::io(root.join(&record.source_path), e))?;
            let extraction = extract_features(&parse_score_bytes(&bytes)?);
            record.features = extraction.features;
            record.quality_flags.extend(extraction.flags);
            dirty = true;
        }

        let usecase_dir = root.join(USECASES_DIR);
        let entries = std::fs::read_dir(&usecase_dir).map_err(|e| CorpusError::io(&usecase_dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| CorpusError::io(&usecase_dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            if let Some(uc) = read_json::<UseCase>(&path)? {
                snapshot.use_cases.insert(uc.name.clone(), uc);
            }
        }

        let store = Self { root, current: RwLock::new(Arc::new(snapshot)), writer: Mutex::new(()) };
        if dirty {
            let snap = store.snapshot();
            store.persist(&snap)?;
        }
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn snapshot(&self) -> Arc<CorpusSnapshot> {
        Arc::clone(&self.current.read().expect("snapshot lock poisoned"))
    }

    fn publish(&self, next: CorpusSnapshot) {
        *self.current.write().expect("snapshot lock poisoned") = Arc::new(next);
    }

    fn persist(&self, snap: &CorpusSnapshot) -> Result<(), CorpusError> {
        let manifest = StoredManifest {
            format_version: MANIFEST_FORMAT,
            epoch_boundaries: snap.boundaries,
            composers: snap.composers.values().cloned().collect(),
            compositions: snap.records.values().cloned().collect(),
        };
        let cache = FeatureCache {
            catalog_version: CATALOG_VERSION,
            features: snap.records.values().map(|r| (r.id.clone(), r.features.clone())).collect(),
        };
        write_json_atomic(&self.root.join(FEATURES_FILE), &cache)?;
        write_json_atomic(&self.root.join(MANIFEST_FILE), &manifest)
    }

    /// Ingests every score file below `dir`. Per-file problems are collected
    /// in the report; only an unreadable `dir` is an error.
    pub fn ingest_directory(&self, dir: &Path, options: IngestOptions) -> Result<IngestReport, CorpusError> {
        let meta = std::fs::metadata(dir).map_err(|e| CorpusError::io(dir, e))?;
        if !meta.is_dir() {
            return Err(CorpusError::io(dir, std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory")));
        }
        let mut report = IngestReport::default();
        let manifest = match read_json::<IngestManifest>(&dir.join(MANIFEST_FILE)) {
            Ok(m) => m.unwrap_or_default(),
            Err(e) => {
                report.failed.push(FileFailure { file: MANIFEST_FILE.into(), reason: e.to_string() });
                IngestManifest::default()
            }
        };
        let public_domain_only = options.public_domain_only.unwrap_or(manifest.public_domain_only);

        let mut files: Vec<(String, PathBuf)> = walkdir::WalkDir::new(dir)
            .sort_by_file_name()
            .into_iter()
            .filter_map(Result::ok)
            .filter(|e| e.file_type().is_file())
            .filter(|e| {
                e.path()
                    .extension()
                    .and_then(|x| x.to_str())
                    .is_some_and(|x| SCORE_EXTENSIONS.contains(&x.to_lowercase().as_str()))
            })
            .map(|e| {
                let rel = e.path().strip_prefix(dir).unwrap_or(e.path()).to_string_lossy().replace('\\', "/");
                (rel, e.path().to_path_buf())
            })
            .collect();
        files.sort();

        let _guard = self.writer.lock().expect("writer lock poisoned");
        let mut next = (*self.snapshot()).clone();
        let mut changed = false;
        for c in &manifest.composers {
            match ComposerEntry::new(c.id.clone(), c.display_name.clone(), c.birth_year, c.death_year, &next.boundaries) {
                Ok(entry) => {
                    if next.composers.get(&entry.composer_id) != Some(&entry) {
                        next.composers.insert(entry.composer_id.clone(), entry);
                        changed = true;
                    }
                }
                Err(e) => report.failed.push(FileFailure { file: MANIFEST_FILE.into(), reason: e.to_string() }),
            }
        }

        for (name, path) in files {
            let bytes = match std::fs::read(&path) {
                Ok(b) => b,
                Err(e) => {
                    report.failed.push(FileFailure { file: name, reason: e.to_string() });
                    continue;
                }
            };
            let row = manifest.files.get(&name);
            match add_composition(&self.root, &mut next, &name, &bytes, row, public_domain_only, options.reference_year) {
                Ok(record) => {
                    report.parsed.push(record.id);
                    changed = true;
                }
                Err(CorpusError::Duplicate { id }) => {
                    if next.records.get(&id).is_some_and(|r| r.original_name == name) {
                        report.unchanged += 1;
                    } else {
                        report.duplicates.push(DuplicateEntry { file: name, duplicate_of: id });
                    }
                }
                Err(CorpusError::Excluded(reason)) => report.excluded.push(FileFailure { file: name, reason }),
                Err(e) => report.failed.push(FileFailure { file: name, reason: e.to_string() }),
            }
        }

        if changed {
            self.persist(&next)?;
            if let Some(id) = report.parsed.first() {
                report.cache_verified = Some(verify_record(&self.root, &next.records[id])?);
            }
            self.publish(next);
        }
        Ok(report)
    }

    /// Adds one uploaded file.
    pub fn ingest_bytes(&self, file_name: &str, bytes: &[u8]) -> Result<CompositionRecord, CorpusError> {
        let _guard = self.writer.lock().expect("writer lock poisoned");
        let mut next = (*self.snapshot()).clone();
        let record = add_composition(&self.root, &mut next, file_name, bytes, None, false, current_year())?;
        self.persist(&next)?;
        self.publish(next);
        Ok(record)
    }

    /// Re-parses the stored score and checks the cached vector against a
    /// fresh extraction.
    pub fn verify_cache(&self, id: &str) -> Result<bool, CorpusError> {
        let snap = self.snapshot();
        let record = snap.records.get(id).ok_or_else(|| CorpusError::UnknownComposition(id.to_owned()))?;
        verify_record(&self.root, record)
    }

    pub fn score_document(&self, id: &str) -> Result<ScoreDocument, CorpusError> {
        let snap = self.snapshot();
        let record = snap.records.get(id).ok_or_else(|| CorpusError::UnknownComposition(id.to_owned()))?;
        let path = self.root.join(&record.source_path);
        let bytes = std::fs::read(&path).map_err(|e| CorpusError::io(&path, e))?;
        Ok(parse_score_bytes(&bytes)?)
    }

    pub fn save_use_case(&self, use_case: UseCase) -> Result<(), CorpusError> {
        if !is_valid_slug(&use_case.name) {
            return Err(CorpusError::InvalidName(use_case.name));
        }
        if let Some(f) = use_case.selected_features.iter().find(|f| !is_known_feature(f)) {
            return Err(CorpusError::UnknownFeature(f.clone()));
        }
        if use_case.eps.is_some_and(|e| !(e.is_finite() && e > 0.0)) {
            return Err(CorpusError::InvalidName(format!("{}: eps must be positive", use_case.name)));
        }
        let _guard = self.writer.lock().expect("writer lock poisoned");
        let mut next = (*self.snapshot()).clone();
        if next.use_cases.contains_key(&use_case.name) {
            return Err(CorpusError::DuplicateName(use_case.name));
        }
        if let Some(id) = use_case.selection.iter().find(|id| !next.records.contains_key(*id)) {
            return Err(CorpusError::UnknownComposition(id.clone()));
        }
        write_json_atomic(&self.root.join(USECASES_DIR).join(format!("{}.json", use_case.name)), &use_case)?;
        next.use_cases.insert(use_case.name.clone(), use_case);
        self.publish(next);
        Ok(())
    }

    /// Stores the preset use cases (epoch comparison, tonality vs.
    /// atonality, composer comparison, feature explanation) built from the
    /// current corpus. Existing names are left alone; returns the names
    /// created.
    pub fn seed_use_cases(&self) -> Result<Vec<String>, CorpusError> {
        let presets = self.snapshot().preset_use_cases();
        let mut created = Vec::new();
        for uc in presets {
            let name = uc.name.clone();
            match self.save_use_case(uc) {
                Ok(()) => created.push(name),
                Err(CorpusError::DuplicateName(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(created)
    }
}

fn verify_record(root: &Path, record: &CompositionRecord) -> Result<bool, CorpusError> {
    let path = root.join(&record.source_path);
    let bytes = std::fs::read(&path).map_err(|e| CorpusError::io(&path, e))?;
    let fresh = extract_features(&parse_score_bytes(&bytes)?);
    Ok(fresh.features == record.features)
}

/// Parses, extracts and files one composition into `snap`, copying the
/// source into the corpus.
fn add_composition(
    root: &Path,
    snap: &mut CorpusSnapshot,
    file_name: &str,
    bytes: &[u8],
    row: Option<&ManifestRow>,
    public_domain_only: bool,
    reference_year: i32,
) -> Result<CompositionRecord, CorpusError> {
    let id = content_id(bytes);
    if snap.records.contains_key(&id) {
        return Err(CorpusError::Duplicate { id });
    }
    let doc = parse_score_bytes(bytes)?;
    let extraction = extract_features(&doc);
    let mut meta = infer_metadata(&doc, row);
    if meta.title == UNKNOWN {
        if let Some(stem) = Path::new(file_name).file_stem().and_then(|s| s.to_str()) {
            meta.title = stem.to_owned();
        }
    }

    let composer_id = resolve_composer(snap, &meta.composer);
    let mut flags = extraction.flags;
    if public_domain_only {
        match snap.composers.get(&composer_id).and_then(|c| c.death_year) {
            Some(death) if reference_year - death <= COPYRIGHT_YEARS => {
                return Err(CorpusError::Excluded(format!(
                    "composer died in {death}, less than {COPYRIGHT_YEARS} years before {reference_year}"
                )));
            }
            Some(_) => {}
            None => {
                flags.insert(QualityFlag::CopyrightUnverified);
            }
        }
    }

    let ext = Path::new(file_name)
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_lowercase)
        .filter(|e| SCORE_EXTENSIONS.contains(&e.as_str()))
        .unwrap_or_else(|| if bytes.starts_with(b"PK") { "mxl".into() } else { "xml".into() });
    let source_path = format!("{SCORES_DIR}/{id}.{ext}");
    write_atomic(&root.join(&source_path), bytes)?;

    let record = CompositionRecord {
        id: id.clone(),
        title: meta.title,
        composer_id,
        composition_type: meta.composition_type,
        opus: meta.opus,
        features: extraction.features,
        quality_flags: flags,
        source_path,
        original_name: file_name.to_owned(),
    };
    snap.records.insert(id, record.clone());
    Ok(record)
}

/// Maps a composer id or display name onto the registry, registering
/// unseen names without life data.
fn resolve_composer(snap: &mut CorpusSnapshot, composer: &str) -> String {
    if snap.composers.contains_key(composer) {
        return composer.to_owned();
    }
    let lower = composer.to_lowercase();
    if let Some(c) = snap.composers.values().find(|c| c.display_name.to_lowercase() == lower) {
        return c.composer_id.clone();
    }
    let id = composer_slug(composer);
    if !snap.composers.contains_key(&id) {
        let display = if composer == UNKNOWN { "Unknown".to_owned() } else { composer.to_owned() };
        let entry = ComposerEntry::new(id.clone(), display, None, None, &snap.boundaries)
            .expect("entries without years are always valid");
        snap.composers.insert(id.clone(), entry);
    }
    id
}

impl CorpusSnapshot {
    pub fn record(&self, id: &str) -> Result<&CompositionRecord, CorpusError> {
        self.records.get(id).ok_or_else(|| CorpusError::UnknownComposition(id.to_owned()))
    }

    pub fn composer_name<'a>(&'a self, composer_id: &'a str) -> &'a str {
        self.composers.get(composer_id).map_or(composer_id, |c| c.display_name.as_str())
    }

    pub fn epoch_of(&self, record: &CompositionRecord) -> Epoch {
        self.composers.get(&record.composer_id).map_or(Epoch::Unknown, |c| c.epoch)
    }

    /// Ids matching every given criterion, ordered by title then id.
    pub fn filter(&self, query: &CompositionQuery) -> Vec<String> {
        let keyword = query.keyword.as_ref().map(|k| k.trim().to_lowercase()).filter(|k| !k.is_empty());
        let mut hits: Vec<&CompositionRecord> = self
            .records
            .values()
            .filter(|r| {
                keyword.as_ref().is_none_or(|k| {
                    r.title.to_lowercase().contains(k.as_str())
                        || self.composer_name(&r.composer_id).to_lowercase().contains(k.as_str())
                })
            })
            .filter(|r| query.composer_ids.is_empty() || query.composer_ids.contains(&r.composer_id))
            .filter(|r| query.types.is_empty() || query.types.contains(&r.composition_type))
            .filter(|r| query.epochs.is_empty() || query.epochs.contains(&self.epoch_of(r)))
            .collect();
        hits.sort_by(|a, b| (&a.title, &a.id).cmp(&(&b.title, &b.id)));
        hits.into_iter().map(|r| r.id.clone()).collect()
    }

    /// Partitions `ids` by the grouping key, averaging member features.
    pub fn group(&self, ids: &[String], mode: Grouping) -> Result<Vec<Group>, CorpusError> {
        if ids.is_empty() {
            return Err(CorpusError::EmptySelection);
        }
        let mut buckets: BTreeMap<String, Vec<&CompositionRecord>> = BTreeMap::new();
        for id in ids {
            let r = self.record(id)?;
            let key = match mode {
                Grouping::None => r.id.clone(),
                Grouping::Composer => r.composer_id.clone(),
                Grouping::Type => r.composition_type.clone(),
                Grouping::Epoch => self.epoch_of(r).to_string(),
            };
            buckets.entry(key).or_default().push(r);
        }
        Ok(buckets
            .into_iter()
            .map(|(key, members)| {
                let vectors: Vec<&FeatureVector> = members.iter().map(|r| &r.features).collect();
                let features = aggregate_group(&vectors).expect("buckets are non-empty");
                Group { key, members: members.iter().map(|r| r.id.clone()).collect(), features }
            })
            .collect())
    }

    /// Rows of raw feature values for the given ids and feature ids.
    pub fn feature_rows(&self, ids: &[String], features: &[String]) -> Result<Vec<Vec<f64>>, CorpusError> {
        if let Some(f) = features.iter().find(|f| !is_known_feature(f)) {
            return Err(CorpusError::UnknownFeature(f.clone()));
        }
        ids.iter()
            .map(|id| {
                let r = self.record(id)?;
                Ok(features.iter().map(|f| r.features.get(f).unwrap_or(0.0)).collect())
            })
            .collect()
    }

    pub fn load_use_case(&self, name: &str) -> Result<UseCase, CorpusError> {
        self.use_cases.get(name).cloned().ok_or_else(|| CorpusError::UnknownName(name.to_owned()))
    }

    /// Composers with known birth and death years, oldest first.
    pub fn composer_timeline(&self) -> Vec<ComposerEntry> {
        let mut out: Vec<ComposerEntry> = self.composers.values().filter(|c| c.has_life_data()).cloned().collect();
        out.sort_by(|a, b| (a.birth_year, &a.composer_id).cmp(&(b.birth_year, &b.composer_id)));
        out
    }

    fn preset_use_cases(&self) -> Vec<UseCase> {
        let all = self.filter(&CompositionQuery::default());
        let strings = |v: &[&str]| v.iter().map(|s| (*s).to_owned()).collect::<Vec<_>>();

        // round-robin over epochs so every period is represented
        let mut by_epoch: BTreeMap<Epoch, Vec<String>> = BTreeMap::new();
        for id in &all {
            by_epoch.entry(self.epoch_of(&self.records[id])).or_default().push(id.clone());
        }
        let round_robin = |epochs: &[Epoch], limit: usize| {
            let lists: Vec<&Vec<String>> = epochs.iter().filter_map(|e| by_epoch.get(e)).collect();
            let mut out = Vec::new();
            let mut k = 0;
            while out.len() < limit && lists.iter().any(|l| k < l.len()) {
                for l in &lists {
                    if k < l.len() && out.len() < limit {
                        out.push(l[k].clone());
                    }
                }
                k += 1;
            }
            out
        };

        let mut composer_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for r in self.records.values() {
            *composer_counts.entry(r.composer_id.as_str()).or_default() += 1;
        }
        let mut ranked: Vec<(&str, usize)> = composer_counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let pair: BTreeSet<&str> = ranked.iter().take(2).map(|(c, _)| *c).collect();
        let pair_works: Vec<String> =
            all.iter().filter(|id| pair.contains(self.records[*id].composer_id.as_str())).cloned().collect();

        let every_epoch = [Epoch::Baroque, Epoch::Classic, Epoch::Romantic, Epoch::Modern, Epoch::Unknown];
        vec![
            UseCase {
                name: "epoch-comparison".into(),
                selection: round_robin(&every_epoch, 51),
                selected_features: strings(&[
                    "repeated_notes",
                    "size_of_melodic_arcs",
                    "melodic_thirds",
                    "pitch_variety",
                    "most_common_pitch_prevalence",
                    "range",
                    "note_density",
                    "staccato_incidence",
                ]),
                grouping: Grouping::None,
                eps: None,
                color_by: ColorBy::Epoch,
            },
            UseCase {
                name: "tonality-vs-atonality".into(),
                selection: round_robin(&[Epoch::Classic, Epoch::Modern], 18),
                selected_features: strings(&[
                    "most_common_pitch_class_prevalence",
                    "pitch_class_variety",
                    "melodic_tritones",
                    "chromatic_motion",
                    "melodic_consonance",
                ]),
                grouping: Grouping::None,
                eps: None,
                color_by: ColorBy::Epoch,
            },
            UseCase {
                name: "composer-comparison".into(),
                selection: pair_works,
                selected_features: strings(&[
                    "melodic_octaves",
                    "average_melodic_interval",
                    "pitch_variety",
                    "number_of_common_pitches",
                ]),
                grouping: Grouping::Composer,
                eps: None,
                color_by: ColorBy::Epoch,
            },
            UseCase {
                name: "feature-explanation".into(),
                selection: all.iter().take(10).cloned().collect(),
                selected_features: strings(&[
                    "melodic_octaves",
                    "repeated_notes",
                    "pitch_variety",
                    "most_common_pitch_class_prevalence",
                    "note_density",
                ]),
                grouping: Grouping::None,
                eps: None,
                color_by: ColorBy::Type,
            },
        ]
    }
}
