//! REST interface over one engine.
//!
//! Mutations require an `X-KGBB-User` header naming the acting user. Reads of units whose
//! `access_restricted_to` is set require an overlapping role in `X-KGBB-Roles` (comma separated).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use kgbb_core::backends::{export_pg, export_rdf, export_tables};
use kgbb_core::engine::{CreateRequest, Engine, EngineError, Ids, InputValue, Provenance};
use kgbb_core::query::{QueryError, QuestionDraft};
use kgbb_core::spec::{build_statement_kgbb, derive_owl_access_template, LabelVariant, WizardAnswers};
use kgbb_core::templates::*;
use kgbb_core::*;
use serde::Deserialize;
use serde_json::{json, Value};

pub const USER_HEADER: &str = "x-kgbb-user";
pub const ROLES_HEADER: &str = "x-kgbb-roles";

#[derive(Clone)]
pub struct AppState {
    engine: Arc<RwLock<Engine>>,
    store_path: Option<PathBuf>,
}

impl AppState {
    /// Wraps an engine; when `store_path` is set every successful mutation is written there.
    pub fn new(engine: Engine, store_path: Option<PathBuf>) -> Self {
        Self { engine: Arc::new(RwLock::new(engine)), store_path }
    }

    pub fn store(&self) -> Store {
        self.engine.read().expect("engine lock").store().clone()
    }

    fn read<T>(&self, f: impl FnOnce(&Engine) -> Result<T, ApiError>) -> Result<T, ApiError> {
        f(&self.engine.read().expect("engine lock"))
    }

    fn write<T>(&self, f: impl FnOnce(&mut Engine) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let mut engine = self.engine.write().expect("engine lock");
        let out = f(&mut engine)?;
        if let Some(p) = &self.store_path {
            crate::persist::save_store(p, engine.store()).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "persist", e.to_string()))?;
        }
        Ok(out)
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.code, "message": self.message }))).into_response()
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        use EngineError::*;
        let (status, code) = match &e {
            UnknownKgbb(_) | UnknownUnit(_) | UnknownResource(_) | UnknownVersion { .. } => (StatusCode::NOT_FOUND, "not-found"),
            UnitDeleted(_) => (StatusCode::GONE, "deleted"),
            AlreadyDeleted(_) | UnitLocked(_) | ResourceConflict(_) => (StatusCode::CONFLICT, "conflict"),
            Query(QueryError::UnknownQuestion(_)) => (StatusCode::NOT_FOUND, "not-found"),
            _ => (StatusCode::UNPROCESSABLE_ENTITY, "rejected"),
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<TemplateError> for ApiError {
    fn from(e: TemplateError) -> Self {
        let status = match e {
            TemplateError::UnknownUnit(_) | TemplateError::UnknownTemplate(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self::new(status, "template", e.to_string())
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        EngineError::from(e).into()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        Self::bad_request(e.to_string())
    }
}

fn upri(s: &str) -> Result<Upri, ApiError> {
    Ok(Upri::new(s)?)
}

fn user(headers: &HeaderMap) -> Result<Provenance, ApiError> {
    let value = headers
        .get(USER_HEADER)
        .and_then(|v| v.to_str().ok())
        .filter(|v| !v.trim().is_empty())
        .ok_or_else(|| ApiError::new(StatusCode::UNAUTHORIZED, "no-user", "mutations need an X-KGBB-User header"))?;
    Ok(Provenance::user(upri(value.trim())?))
}

fn roles(headers: &HeaderMap) -> BTreeSet<Upri> {
    headers
        .get(ROLES_HEADER)
        .and_then(|v| v.to_str().ok())
        .into_iter()
        .flat_map(|v| v.split(','))
        .filter_map(|r| Upri::new(r.trim()).ok())
        .collect()
}

fn visible(engine: &Engine, id: &Upri, roles: &BTreeSet<Upri>) -> bool {
    let restriction = match engine.store().unit(id) {
        Some(SemanticUnit::Statement(s)) => s.access_restricted_to.clone(),
        Some(SemanticUnit::Compound(_)) => engine.aggregate(id).map(|a| a.access_restriction).unwrap_or_default(),
        _ => BTreeSet::new(),
    };
    restriction.is_empty() || !restriction.is_disjoint(roles)
}

fn guard(engine: &Engine, id: &Upri, headers: &HeaderMap) -> Result<(), ApiError> {
    if visible(engine, id, &roles(headers)) {
        Ok(())
    } else {
        Err(ApiError::new(StatusCode::FORBIDDEN, "restricted", format!("{id} is restricted to other roles")))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/spec", get(get_spec))
        .route("/kgbbs", get(list_kgbbs))
        .route("/kgbbs/{id}/form", get(get_form))
        .route("/wizard", post(run_wizard))
        .route("/units", post(create_unit))
        .route("/units/{id}", get(get_unit).delete(delete_unit))
        .route("/units/{id}/positions/{position}", patch(patch_position))
        .route("/units/{id}/versions", post(create_version))
        .route("/units/{id}/history", get(get_history))
        .route("/questions", post(create_question))
        .route("/questions/{id}/execute", post(execute_question))
        .route("/export", get(export))
        .with_state(state)
}

async fn get_spec(State(s): State<AppState>) -> Result<Json<Value>, ApiError> {
    s.read(|e| Ok(Json(serde_json::to_value(e.spec()).expect("spec serializes"))))
}

async fn list_kgbbs(State(s): State<AppState>) -> Result<Json<Value>, ApiError> {
    s.read(|e| {
        let spec = e.spec();
        let list: Vec<Value> = spec
            .instances
            .iter()
            .map(|(i, c)| json!({ "instance": i, "class": c, "label": spec.class_label(c), "starting_point": spec.is_starting_point(i) }))
            .collect();
        Ok(Json(Value::Array(list)))
    })
}

async fn get_form(State(s): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let id = upri(&id)?;
    s.read(|e| {
        let form = e.spec().form(&id).ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not-found", format!("unknown KGBB instance {id}")))?;
        Ok(Json(serde_json::to_value(form).expect("forms serialize")))
    })
}

async fn run_wizard(Json(answers): Json<WizardAnswers>) -> Result<Json<Value>, ApiError> {
    let class = build_statement_kgbb(&answers).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "wizard", e.to_string()))?;
    Ok(Json(serde_json::to_value(class).expect("classes serialize")))
}

async fn create_unit(State(s): State<AppState>, headers: HeaderMap, Json(req): Json<CreateRequest>) -> Result<(StatusCode, Json<Value>), ApiError> {
    let prov = user(&headers)?;
    let created = s.write(|e| Ok(e.create(&req, &prov)?))?;
    Ok((StatusCode::CREATED, Json(json!(created))))
}

#[derive(Debug, Default, Deserialize)]
pub struct UnitQuery {
    version: Option<String>,
    view: Option<String>,
    #[serde(default)]
    include_deleted: bool,
}

async fn get_unit(State(s): State<AppState>, Path(id): Path<String>, Query(q): Query<UnitQuery>, headers: HeaderMap) -> Result<Response, ApiError> {
    let id = upri(&id)?;
    let version = q.version.as_deref().map(upri).transpose()?;
    s.read(|e| {
        guard(e, &id, &headers)?;
        let (store, spec) = (e.store(), e.spec());
        let body = match q.view.as_deref().unwrap_or("unit") {
            "unit" if q.include_deleted => json!(e.read_including_deleted(&id)?),
            "unit" => json!(e.read(&id, version.as_ref())?),
            "label" => {
                let label = match (store.statement(&id), &version) {
                    (Some(st), Some(v)) => {
                        e.read(&id, Some(v))?;
                        render_variant(store, spec, st, LabelVariant::Default, Some(v))?
                    }
                    _ => render_unit_label(store, spec, &id)?,
                };
                json!({ "upri": id, "label": label })
            }
            "mindmap" => json!(render_mind_map(store, spec, &id)?),
            "display" => json!(render_compound_display(store, spec, &id, None)?),
            "metadata" => json!(e.aggregate(&id)?),
            v => match v.strip_prefix("access:") {
                Some(name) => access_view(store, spec, &id, name)?,
                None => return Err(ApiError::bad_request(format!("unknown view {v:?}"))),
            },
        };
        Ok(Json(body).into_response())
    })
}

fn access_view(store: &Store, spec: &spec::Spec, id: &Upri, name: &str) -> Result<Value, ApiError> {
    let st = store.statement(id).ok_or_else(|| ApiError::from(TemplateError::NotAStatement(id.clone())))?;
    let class = spec.statement_class(&st.meta.kgbb_uri).ok_or_else(|| ApiError::from(TemplateError::UnknownKgbb(st.meta.kgbb_uri.clone())))?;
    let derived;
    let template = match find_access_template(class, name) {
        Some(t) => t,
        None if name == "owl" => {
            derived = derive_owl_access_template(class).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "template", e.to_string()))?;
            &derived
        }
        None => return Err(TemplateError::UnknownTemplate(upri(name)?).into()),
    };
    Ok(match apply_access_template(store, spec, std::slice::from_ref(id), template, &mut Ids::system())? {
        AccessOutput::Triples(t) => json!({ "format": "triples", "triples": t }),
        AccessOutput::Csv(text) => json!({ "format": "csv", "text": text }),
        AccessOutput::Json(value) => json!({ "format": "json", "value": value }),
    })
}

#[derive(Debug, Deserialize)]
pub struct PositionPatch {
    /// `null` or absent clears the position.
    #[serde(default)]
    value: Option<InputValue>,
}

async fn patch_position(
    State(s): State<AppState>,
    Path((id, position)): Path<(String, String)>,
    headers: HeaderMap,
    Json(body): Json<PositionPatch>,
) -> Result<Json<Value>, ApiError> {
    let prov = user(&headers)?;
    let (id, position) = (upri(&id)?, upri(&position)?);
    s.write(|e| {
        Ok(Json(match &body.value {
            Some(v) => json!({ "unit": id, "instance": e.update_position(&id, &position, v, &prov)? }),
            None => {
                e.clear_position(&id, &position, &prov)?;
                json!({ "unit": id, "cleared": position })
            }
        }))
    })
}

#[derive(Debug, Default, Deserialize)]
pub struct DeleteQuery {
    #[serde(default)]
    cascade: bool,
}

async fn delete_unit(State(s): State<AppState>, Path(id): Path<String>, Query(q): Query<DeleteQuery>, headers: HeaderMap) -> Result<Json<Value>, ApiError> {
    let prov = user(&headers)?;
    let id = upri(&id)?;
    s.write(|e| Ok(Json(json!({ "deleted": e.soft_delete(&id, &prov, q.cascade)? }))))
}

async fn create_version(State(s): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<(StatusCode, Json<Value>), ApiError> {
    let prov = user(&headers)?;
    let id = upri(&id)?;
    let version = s.write(|e| Ok(e.create_version(&id, &prov)?))?;
    Ok((StatusCode::CREATED, Json(json!({ "unit": id, "version": version }))))
}

async fn get_history(State(s): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<Json<Value>, ApiError> {
    let id = upri(&id)?;
    s.read(|e| {
        guard(e, &id, &headers)?;
        Ok(Json(json!(e.history(&id)?)))
    })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum QuestionBody {
    Tree { tree: QuestionTree },
    Draft(QuestionDraft),
}

async fn create_question(State(s): State<AppState>, headers: HeaderMap, Json(body): Json<QuestionBody>) -> Result<(StatusCode, Json<Value>), ApiError> {
    let prov = user(&headers)?;
    let id = s.write(|e| {
        Ok(match &body {
            QuestionBody::Tree { tree } => e.save_compound_question(tree, &prov)?,
            QuestionBody::Draft(d) => e.save_question(d, &prov)?,
        })
    })?;
    let label = s.read(|e| Ok(render_unit_label(e.store(), e.spec(), &id).ok()))?;
    Ok((StatusCode::CREATED, Json(json!({ "question": id, "label": label }))))
}

async fn execute_question(State(s): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<Json<Value>, ApiError> {
    let id = upri(&id)?;
    let roles = roles(&headers);
    s.read(|e| {
        let mut answer = e.answer(&id)?;
        answer.units.retain(|u| visible(e, u, &roles));
        Ok(Json(json!(answer)))
    })
}

#[derive(Debug, Default, Deserialize)]
pub struct ExportQuery {
    format: Option<String>,
}

async fn export(State(s): State<AppState>, Query(q): Query<ExportQuery>) -> Result<Response, ApiError> {
    s.read(|e| {
        let store = e.store();
        Ok(match q.format.as_deref().unwrap_or("trig") {
            "trig" => ([(header::CONTENT_TYPE, "application/trig")], export_rdf(store)).into_response(),
            "pg-json" => Json(json!(export_pg(store))).into_response(),
            "tables" => Json(json!(export_tables(store))).into_response(),
            other => return Err(ApiError::bad_request(format!("unknown export format {other:?}"))),
        })
    })
}
