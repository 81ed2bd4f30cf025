use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use kgbb_cli::persist::load_store;
use kgbb_cli::{router, AppState};
use kgbb_core::engine::{CreateRequest, Engine, ResourceRef};
use kgbb_core::fixtures::{demo_spec, demo_user};
use kgbb_core::query::QuestionDraft;
use kgbb_core::*;
use serde_json::{json, Value};
use tower::ServiceExt;

fn u(s: &str) -> Upri {
    Upri::new(s).unwrap()
}

fn named(id: &str, class: &str, label: &str) -> ResourceRef {
    ResourceRef::with_id(u(id), ResourceKind::NamedIndividual, u(class), label)
}

fn travel() -> CreateRequest {
    CreateRequest::new(u("demo:travel"))
        .subject(named("ex:anna", "ex:Person", "Anna"))
        .input(u("travel:transportation"), named("ex:train-1", "ex:Train", "train"))
        .input(u("travel:departureLocation"), named("ex:berlin", "ex:City", "Berlin"))
        .input(u("travel:destinationLocation"), named("ex:rome", "ex:City", "Rome"))
        .input(u("travel:datetime"), Literal::new("2019-08-05T00:00:00Z", Datatype::DateTime).unwrap())
}

fn engine() -> Engine {
    Engine::seeded(Arc::new(demo_spec()), 3)
}

fn app() -> (AppState, Router) {
    let state = AppState::new(engine(), None);
    (state.clone(), router(state))
}

fn enc(s: &str) -> String {
    s.replace('%', "%25").replace('/', "%2F").replace('#', "%23").replace('?', "%3F")
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>, user: Option<&str>) -> (StatusCode, Value) {
    call_with(app, method, uri, body, user, None).await
}

async fn call_with(app: &Router, method: &str, uri: &str, body: Option<Value>, user: Option<&str>, roles: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(x) = user {
        req = req.header("X-KGBB-User", x);
    }
    if let Some(r) = roles {
        req = req.header("X-KGBB-Roles", r);
    }
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into_owned()));
    (status, value)
}

async fn create(app: &Router, req: &CreateRequest) -> String {
    let (status, body) = call(app, "POST", "/units", Some(json!(req)), Some("demo:alice")).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["unit"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn created_travel_unit_reads_as_its_sentence() {
    let (_, app) = app();
    let id = create(&app, &travel()).await;
    let (status, body) = call(&app, "GET", &format!("/units/{}?view=label", enc(&id)), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["label"], "Anna travels by train from Berlin to Rome on the 5th of August 2019");
    let (_, unit) = call(&app, "GET", &format!("/units/{}", enc(&id)), None, None).await;
    assert_eq!(unit["kgbb"], "demo:travel");
    assert_eq!(unit["positions"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn mutations_need_a_user() {
    let (_, app) = app();
    let (status, body) = call(&app, "POST", "/units", Some(json!(travel())), None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    assert_eq!(body["error"], "no-user");
}

#[tokio::test]
async fn constraint_violations_are_unprocessable() {
    let (_, app) = app();
    let bad = CreateRequest::new(u("demo:travel")).subject(named("ex:anna", "ex:Person", "Anna"));
    let (status, body) = call(&app, "POST", "/units", Some(json!(bad)), Some("demo:alice")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["message"].as_str().unwrap().contains("destinationLocation"), "{body}");
}

#[tokio::test]
async fn versions_read_back_the_pre_edit_payload() {
    let (_, app) = app();
    let id = create(&app, &travel()).await;
    let (status, v) = call(&app, "POST", &format!("/units/{}/versions", enc(&id)), None, Some("demo:alice")).await;
    assert_eq!(status, StatusCode::CREATED);
    let v1 = v["version"].as_str().unwrap().to_string();
    let (status, _) = call(
        &app,
        "PATCH",
        &format!("/units/{}/positions/{}", enc(&id), enc("travel:destinationLocation")),
        Some(json!({ "value": named("ex:paris", "ex:City", "Paris") })),
        Some("demo:bob"),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let destination = |unit: &Value| {
        unit["positions"]
            .as_array()
            .unwrap()
            .iter()
            .find(|p| p["position_class"] == "travel:destinationLocation")
            .map(|p| p["input"].clone())
            .unwrap()
    };
    let (_, old) = call(&app, "GET", &format!("/units/{}?version={}", enc(&id), enc(&v1)), None, None).await;
    let (_, new) = call(&app, "GET", &format!("/units/{}", enc(&id)), None, None).await;
    assert_eq!(destination(&old), json!({ "resource": "ex:rome" }));
    assert_eq!(destination(&new), json!({ "resource": "ex:paris" }));
    let (_, label) = call(&app, "GET", &format!("/units/{}?view=label&version={}", enc(&id), enc(&v1)), None, None).await;
    assert_eq!(label["label"], "Anna travels by train from Berlin to Rome on the 5th of August 2019");
    let (_, history) = call(&app, "GET", &format!("/units/{}/history", enc(&id)), None, None).await;
    assert_eq!(history.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn deleted_units_keep_their_metadata() {
    let (_, app) = app();
    let id = create(&app, &travel()).await;
    let (status, _) = call(&app, "DELETE", &format!("/units/{}", enc(&id)), None, Some("demo:bob")).await;
    assert_eq!(status, StatusCode::OK);
    let (status, _) = call(&app, "GET", &format!("/units/{}", enc(&id)), None, None).await;
    assert_eq!(status, StatusCode::GONE);
    let (status, body) = call(&app, "GET", &format!("/units/{}?include_deleted=true", enc(&id)), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["meta"]["deleted_by"], "demo:bob");
    let (status, _) = call(&app, "DELETE", &format!("/units/{}", enc(&id)), None, Some("demo:bob")).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn travel_form_lists_subject_and_four_positions() {
    let (_, app) = app();
    let (status, form) = call(&app, "GET", "/kgbbs/demo:travel/form", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(form["subject"]["label"], "PERSON");
    let fields = form["fields"].as_array().unwrap();
    assert_eq!(fields.len(), 4);
    let required: Vec<&str> = fields.iter().filter(|f| f["required"] == true).map(|f| f["label"].as_str().unwrap()).collect();
    assert_eq!(required, ["DESTINATION_LOCATION"]);
    let (status, _) = call(&app, "GET", "/kgbbs/demo:nope/form", None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (_, nested) = call(&app, "GET", "/kgbbs/demo:measurement-item/form", None, None).await;
    assert_eq!(nested["nested"][0]["min_count"], 1);
}

#[tokio::test]
async fn wildcard_question_returns_the_seeded_unit() {
    let (_, app) = app();
    let id = create(&app, &travel()).await;
    let draft = QuestionDraft {
        kgbb: u("demo:travel"),
        subject: Some(Binding::SomeInstanceOf(u("ex:Person"))),
        bindings: [(u("travel:destinationLocation"), Binding::Exact(u("ex:rome")))].into(),
    };
    let (status, q) = call(&app, "POST", "/questions", Some(json!(draft)), Some("demo:alice")).await;
    assert_eq!(status, StatusCode::CREATED, "{q}");
    let qid = q["question"].as_str().unwrap().to_string();
    let (status, answer) = call(&app, "POST", &format!("/questions/{}/execute", enc(&qid)), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(answer["mode"], "retrieval");
    assert_eq!(answer["units"], json!([id]));
    let (status, tree) = call(&app, "POST", "/questions", Some(json!({ "tree": { "or": [{ "question": qid }] } })), Some("demo:alice")).await;
    assert_eq!(status, StatusCode::CREATED, "{tree}");
    let (_, answer) = call(&app, "POST", &format!("/questions/{}/execute", enc(tree["question"].as_str().unwrap())), None, None).await;
    assert_eq!(answer["units"], json!([id]));
}

#[tokio::test]
async fn restricted_units_need_a_matching_role() {
    let (_, app) = app();
    let mut req = travel();
    req.options.access_restricted_to.insert(u("ex:curators"));
    let id = create(&app, &req).await;
    let path = format!("/units/{}", enc(&id));
    assert_eq!(call(&app, "GET", &path, None, None).await.0, StatusCode::FORBIDDEN);
    assert_eq!(call_with(&app, "GET", &path, None, None, Some("ex:guests")).await.0, StatusCode::FORBIDDEN);
    assert_eq!(call_with(&app, "GET", &path, None, None, Some("ex:guests, ex:curators")).await.0, StatusCode::OK);
}

#[tokio::test]
async fn views_and_exports() {
    let (_, app) = app();
    let id = create(&app, &travel()).await;
    let (_, map) = call(&app, "GET", &format!("/units/{}?view=mindmap", enc(&id)), None, None).await;
    assert_eq!(map["nodes"].as_array().unwrap().len(), 6);
    let (status, owl) = call(&app, "GET", &format!("/units/{}?view=access:owl", enc(&id)), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(owl["triples"].as_array().unwrap().len(), 4);
    assert_eq!(call(&app, "GET", &format!("/units/{}?view=nope", enc(&id)), None, None).await.0, StatusCode::BAD_REQUEST);
    let (status, trig) = call(&app, "GET", "/export?format=trig", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(trig.as_str().unwrap().contains(&id));
    let (_, pg) = call(&app, "GET", "/export?format=pg-json", None, None).await;
    assert!(pg["nodes"].as_array().unwrap().len() > 4);
    let (_, spec) = call(&app, "GET", "/spec", None, None).await;
    assert!(spec["instances"].get("demo:travel").is_some());
}

#[tokio::test]
async fn http_and_engine_reach_the_same_store() {
    let (state, app) = app();
    let mut direct = engine();
    let p = demo_user();
    let id = create(&app, &travel()).await;
    let unit = direct.create(&travel(), &p).unwrap().unit;
    assert_eq!(id, unit.as_str());
    call(&app, "POST", &format!("/units/{}/versions", enc(&id)), None, Some("demo:alice")).await;
    direct.create_version(&unit, &p).unwrap();
    call(
        &app,
        "PATCH",
        &format!("/units/{}/positions/{}", enc(&id), enc("travel:departureLocation")),
        Some(json!({ "value": null })),
        Some("demo:alice"),
    )
    .await;
    direct.clear_position(&unit, &u("travel:departureLocation"), &p).unwrap();
    call(&app, "DELETE", &format!("/units/{}", enc(&id)), None, Some("demo:alice")).await;
    direct.soft_delete(&unit, &p, false).unwrap();
    assert_eq!(state.store(), *direct.store());
}

#[tokio::test]
async fn mutations_persist_to_the_store_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.json");
    let state = AppState::new(engine(), Some(path.clone()));
    let app = router(state.clone());
    create(&app, &travel()).await;
    assert_eq!(load_store(&path).unwrap(), state.store());
    let restarted = AppState::new(Engine::with_store(Arc::new(demo_spec()), load_store(&path).unwrap(), kgbb_core::engine::Ids::system()), Some(path.clone()));
    assert_eq!(restarted.store(), state.store());
}
