//! JSON API over a [`CorpusStore`].
//!
//! Handlers take a snapshot of the corpus per request, so reads never block
//! on ingest or uploads. List-valued query parameters are comma separated
//! (`?ids=a,b,c`).

mod error;

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{DefaultBodyLimit, Multipart, Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use scorelens_core::analytics::{
    correlation_matrix, dbscan_labels, diameter, distribution_summary, concave_hull, DBSCAN_MIN_PTS,
    DEFAULT_CONCAVITY, DEFAULT_LENGTH_THRESHOLD,
};
use scorelens_core::corpus::{CompositionQuery, CorpusSnapshot, TYPE_TAXONOMY, UNKNOWN};
use scorelens_core::features::{catalog, FeatureDescriptor};
use scorelens_core::{
    ClusterSet, CompositionRecord, CorpusStore, DistributionSummary, Epoch, Grouping, Point,
    ProjectionLayout, QualityFlag, UseCase,
};

pub use error::{ApiError, ErrorCode};

/// Longest page `/api/compositions` returns.
pub const MAX_PAGE: usize = 1000;
/// Piano-roll previews stop at this many seconds.
pub const PREVIEW_SECONDS: f64 = 60.0;
const MAX_UPLOAD_BYTES: usize = 32 * 1024 * 1024;

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Clone)]
struct AppState {
    store: Arc<CorpusStore>,
}

/// Builds the `/api` router with permissive CORS.
pub fn router(store: Arc<CorpusStore>) -> Router {
    Router::new()
        .route("/api/compositions", get(list_compositions))
        .route("/api/features", get(feature_matrix))
        .route("/api/catalog", get(feature_catalog))
        .route("/api/projection", post(projection))
        .route("/api/clusters", post(clusters))
        .route("/api/distribution", get(distribution))
        .route("/api/correlation", get(correlation))
        .route("/api/composers", get(composers))
        .route("/api/types", get(types))
        .route("/api/score/{id}/preview", get(preview))
        .route("/api/upload", post(upload))
        .route("/api/usecases", get(list_use_cases).post(save_use_case))
        .route("/api/usecases/{name}", get(load_use_case))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .layer(CorsLayer::permissive())
        .with_state(AppState { store })
}

fn split_list(raw: &Option<String>) -> Vec<String> {
    raw.as_deref()
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Requested ids, or the whole corpus in filter order when none are given.
fn ids_or_all(snap: &CorpusSnapshot, raw: &Option<String>) -> Result<Vec<String>, ApiError> {
    let ids = split_list(raw);
    if ids.is_empty() {
        return Ok(snap.filter(&CompositionQuery::default()));
    }
    for id in &ids {
        snap.record(id)?;
    }
    Ok(ids)
}

fn features_or_all(requested: Vec<String>) -> Vec<String> {
    if requested.is_empty() {
        catalog().iter().map(|d| d.id.to_owned()).collect()
    } else {
        requested
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompositionSummary {
    pub id: String,
    pub title: String,
    pub composer_id: String,
    pub composer_name: String,
    pub composition_type: String,
    pub opus: Option<String>,
    pub epoch: Epoch,
    pub quality_flags: Vec<QualityFlag>,
    pub original_name: String,
}

impl CompositionSummary {
    fn of(snap: &CorpusSnapshot, r: &CompositionRecord) -> Self {
        Self {
            id: r.id.clone(),
            title: r.title.clone(),
            composer_id: r.composer_id.clone(),
            composer_name: snap.composer_name(&r.composer_id).to_owned(),
            composition_type: r.composition_type.clone(),
            opus: r.opus.clone(),
            epoch: snap.epoch_of(r),
            quality_flags: r.quality_flags.iter().copied().collect(),
            original_name: r.original_name.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CompositionParams {
    keyword: Option<String>,
    composer: Option<String>,
    #[serde(rename = "type")]
    kind: Option<String>,
    epoch: Option<String>,
    offset: Option<usize>,
    limit: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompositionPage {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<CompositionSummary>,
}

async fn list_compositions(
    State(s): State<AppState>,
    params: Result<Query<CompositionParams>, QueryRejection>,
) -> ApiResult<CompositionPage> {
    let Query(p) = params?;
    let epochs = split_list(&p.epoch)
        .iter()
        .map(|e| Epoch::parse(e).ok_or_else(|| ApiError::bad_request(format!("unknown epoch {e:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let query = CompositionQuery {
        keyword: p.keyword,
        composer_ids: split_list(&p.composer),
        types: split_list(&p.kind).into_iter().map(|t| t.to_lowercase()).collect(),
        epochs,
    };
    let snap = s.store.snapshot();
    let ids = snap.filter(&query);
    let offset = p.offset.unwrap_or(0);
    let limit = p.limit.unwrap_or(MAX_PAGE).min(MAX_PAGE);
    let items = ids
        .iter()
        .skip(offset)
        .take(limit)
        .map(|id| CompositionSummary::of(&snap, &snap.records[id]))
        .collect();
    Ok(Json(CompositionPage { total: ids.len(), offset, limit, items }))
}

#[derive(Debug, Deserialize)]
struct MatrixParams {
    ids: Option<String>,
    features: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixRow {
    pub id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub features: Vec<String>,
    pub rows: Vec<MatrixRow>,
}

async fn feature_matrix(
    State(s): State<AppState>,
    params: Result<Query<MatrixParams>, QueryRejection>,
) -> ApiResult<FeatureMatrix> {
    let Query(p) = params?;
    let snap = s.store.snapshot();
    let features = features_or_all(split_list(&p.features));
    let ids = ids_or_all(&snap, &p.ids)?;
    let values = snap.feature_rows(&ids, &features)?;
    let rows = ids.into_iter().zip(values).map(|(id, values)| MatrixRow { id, values }).collect();
    Ok(Json(FeatureMatrix { features, rows }))
}

async fn feature_catalog() -> Json<&'static [FeatureDescriptor]> {
    Json(catalog())
}

#[derive(Debug, Deserialize)]
pub struct ProjectionRequest {
    pub ids: Vec<String>,
    #[serde(default)]
    pub features: Vec<String>,
    #[serde(default)]
    pub grouping: Grouping,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupMembers {
    pub key: String,
    pub members: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectionResponse {
    #[serde(flatten)]
    pub layout: ProjectionLayout,
    pub grouping: Grouping,
    /// Present when grouped; `layout.entity_ids` are then the group keys.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupMembers>>,
}

async fn projection(
    State(s): State<AppState>,
    body: Result<Json<ProjectionRequest>, JsonRejection>,
) -> ApiResult<ProjectionResponse> {
    let Json(req) = body?;
    let snap = s.store.snapshot();
    let features = features_or_all(req.features);
    if req.ids.is_empty() {
        return Err(ApiError::bad_request("ids must not be empty"));
    }
    let (layout, groups) = match req.grouping {
        Grouping::None => {
            let rows = snap.feature_rows(&req.ids, &features)?;
            (ProjectionLayout::build(req.ids, &rows, &features)?, None)
        }
        mode => {
            snap.feature_rows(&[], &features)?;
            let groups = snap.group(&req.ids, mode)?;
            let rows: Vec<Vec<f64>> = groups
                .iter()
                .map(|g| features.iter().map(|f| g.features.get(f).unwrap_or(0.0)).collect())
                .collect();
            let keys = groups.iter().map(|g| g.key.clone()).collect();
            let layout = ProjectionLayout::build(keys, &rows, &features)?;
            let members = groups.into_iter().map(|g| GroupMembers { key: g.key, members: g.members }).collect();
            (layout, Some(members))
        }
    };
    Ok(Json(ProjectionResponse { layout, grouping: req.grouping, groups }))
}

#[derive(Debug, Deserialize)]
pub struct ClusterRequest {
    pub coords: Vec<Point>,
    /// Absolute neighbourhood radius.
    pub eps: Option<f64>,
    /// Radius as a share of the layout diameter, in `[0.01, 1]`.
    pub eps_fraction: Option<f64>,
    pub concavity: Option<f64>,
}

async fn clusters(
    State(_): State<AppState>,
    body: Result<Json<ClusterRequest>, JsonRejection>,
) -> ApiResult<ClusterSet> {
    let Json(req) = body?;
    let eps = match (req.eps, req.eps_fraction) {
        (Some(e), None) => e,
        (None, Some(f)) if (0.01..=1.0).contains(&f) => {
            let d = diameter(&req.coords);
            if d > 0.0 {
                f * d
            } else {
                f64::MIN_POSITIVE
            }
        }
        (None, Some(f)) => return Err(ApiError::bad_request(format!("eps_fraction {f} outside [0.01, 1]"))),
        _ => return Err(ApiError::bad_request("give exactly one of eps and eps_fraction")),
    };
    let concavity = req.concavity.unwrap_or(DEFAULT_CONCAVITY);
    let labels = dbscan_labels(&req.coords, eps, DBSCAN_MIN_PTS)?;
    let count = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut hulls = Vec::with_capacity(count);
    for c in 0..count {
        let members: Vec<Point> =
            req.coords.iter().zip(&labels).filter(|(_, l)| **l == Some(c)).map(|(p, _)| *p).collect();
        hulls.push(concave_hull(&members, concavity, DEFAULT_LENGTH_THRESHOLD)?);
    }
    Ok(Json(ClusterSet { labels, eps, min_pts: DBSCAN_MIN_PTS, hulls }))
}

#[derive(Debug, Deserialize)]
struct DistributionParams {
    feature: Option<String>,
    ids: Option<String>,
}

async fn distribution(
    State(s): State<AppState>,
    params: Result<Query<DistributionParams>, QueryRejection>,
) -> ApiResult<DistributionSummary> {
    let Query(p) = params?;
    let feature = p.feature.ok_or_else(|| ApiError::bad_request("missing feature"))?;
    let snap = s.store.snapshot();
    let ids = ids_or_all(&snap, &p.ids)?;
    let column = |ids: &[String]| -> Result<Vec<f64>, ApiError> {
        Ok(snap.feature_rows(ids, std::slice::from_ref(&feature))?.into_iter().map(|r| r[0]).collect())
    };
    let selection = column(&ids)?;
    let corpus = column(&snap.filter(&CompositionQuery::default()))?;
    Ok(Json(distribution_summary(&feature, &selection, &corpus)?))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CorrelationResponse {
    pub features: Vec<String>,
    /// `null` where a feature is constant over the selection.
    pub matrix: Vec<Vec<Option<f64>>>,
}

async fn correlation(
    State(s): State<AppState>,
    params: Result<Query<MatrixParams>, QueryRejection>,
) -> ApiResult<CorrelationResponse> {
    let Query(p) = params?;
    let snap = s.store.snapshot();
    let features = features_or_all(split_list(&p.features));
    let ids = ids_or_all(&snap, &p.ids)?;
    let rows = snap.feature_rows(&ids, &features)?;
    let matrix = correlation_matrix(&rows)?;
    Ok(Json(CorrelationResponse { features, matrix }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComposerSummary {
    pub composer_id: String,
    pub display_name: String,
    pub birth_year: Option<i32>,
    pub death_year: Option<i32>,
    pub epoch: Epoch,
    pub composition_count: usize,
}

async fn composers(State(s): State<AppState>) -> Json<Vec<ComposerSummary>> {
    let snap = s.store.snapshot();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in snap.records.values() {
        *counts.entry(r.composer_id.as_str()).or_default() += 1;
    }
    Json(
        snap.composer_timeline()
            .into_iter()
            .map(|c| ComposerSummary {
                composition_count: counts.get(c.composer_id.as_str()).copied().unwrap_or(0),
                composer_id: c.composer_id,
                display_name: c.display_name,
                birth_year: c.birth_year,
                death_year: c.death_year,
                epoch: c.epoch,
            })
            .collect(),
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TypeSummary {
    pub name: String,
    pub composition_count: usize,
}

async fn types(State(s): State<AppState>) -> Json<Vec<TypeSummary>> {
    let snap = s.store.snapshot();
    let count = |t: &str| snap.records.values().filter(|r| r.composition_type == t).count();
    Json(
        TYPE_TAXONOMY
            .iter()
            .map(|(name, _)| *name)
            .chain([UNKNOWN])
            .map(|name| TypeSummary { name: name.to_owned(), composition_count: count(name) })
            .collect(),
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PreviewEvent {
    pub onset_seconds: f64,
    pub duration_seconds: f64,
    pub midi_pitch: u8,
    pub part_index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScorePreview {
    pub id: String,
    pub title: String,
    pub duration_seconds: f64,
    /// Whether notes beyond the preview window were dropped.
    pub truncated: bool,
    pub events: Vec<PreviewEvent>,
}

async fn preview(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<ScorePreview> {
    let title = s.store.snapshot().record(&id)?.title.clone();
    let doc = s.store.score_document(&id)?;
    let mut truncated = false;
    let events = doc
        .pitched_events()
        .filter(|e| {
            let keep = e.onset_secs() < PREVIEW_SECONDS;
            truncated |= !keep;
            keep
        })
        .map(|e| PreviewEvent {
            onset_seconds: e.onset_secs(),
            duration_seconds: e.duration_secs(),
            midi_pitch: e.midi_pitch.expect("pitched"),
            part_index: e.part_index,
        })
        .collect();
    let duration_seconds = scorelens_core::score::rational_to_f64(&doc.total_duration_seconds());
    Ok(Json(ScorePreview { id, title, duration_seconds, truncated, events }))
}

async fn upload(
    State(s): State<AppState>,
    multipart: Result<Multipart, axum::extract::multipart::MultipartRejection>,
) -> Result<(StatusCode, Json<CompositionSummary>), ApiError> {
    let mut multipart = multipart.map_err(|r| ApiError::bad_request("expected multipart/form-data").with_detail(r.body_text()))?;
    while let Some(field) = multipart.next_field().await? {
        if field.name() != Some("file") {
            continue;
        }
        let name = field.file_name().unwrap_or("upload.mxl").to_owned();
        let bytes = field.bytes().await?;
        if !bytes.starts_with(b"PK\x03\x04") {
            return Err(ApiError::bad_request("upload must be a compressed .mxl (ZIP) archive"));
        }
        let store = Arc::clone(&s.store);
        let record = store.ingest_bytes(&name, &bytes)?;
        let snap = s.store.snapshot();
        tracing::info!(id = %record.id, file = %name, "uploaded composition");
        return Ok((StatusCode::CREATED, Json(CompositionSummary::of(&snap, &record))));
    }
    Err(ApiError::bad_request("missing multipart field \"file\""))
}

async fn list_use_cases(State(s): State<AppState>) -> Json<Vec<UseCase>> {
    Json(s.store.snapshot().use_cases.values().cloned().collect())
}

async fn save_use_case(
    State(s): State<AppState>,
    body: Result<Json<UseCase>, JsonRejection>,
) -> Result<(StatusCode, Json<UseCase>), ApiError> {
    let Json(uc) = body?;
    s.store.save_use_case(uc.clone())?;
    Ok((StatusCode::CREATED, Json(uc)))
}

async fn load_use_case(State(s): State<AppState>, Path(name): Path<String>) -> ApiResult<UseCase> {
    Ok(Json(s.store.snapshot().load_use_case(&name)?))
}
