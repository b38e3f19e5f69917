use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use evirank_service::{router, Store};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const ADMIN_ORDER: [&str; 30] = [
    "Bod", "Avr", "Lem", "Hak", "Las", "KoA", "Ner", "Ere", "Age", "Fil", "Chu", "Kar", "Rub", "Kob", "Bil",
    "Sok", "TkV", "Pol", "Nev", "Gol", "Mas", "Dor", "She", "Evl", "Gry", "Gre", "Cha", "Sto", "Dob", "Vin",
];

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, v)
}

fn app() -> Router {
    router(Arc::new(Store::in_memory()))
}

async fn create(app: &Router, name: &str) -> String {
    let (st, v) = call(app, Method::POST, "/scenarios", Some(json!({"path": fixture(name)}))).await;
    assert_eq!(st, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

fn order(result: &Value) -> Vec<String> {
    result["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["staff_id"].as_str().unwrap().to_string())
        .collect()
}

fn position(result: &Value, id: &str) -> usize {
    order(result).iter().position(|x| x == id).unwrap() + 1
}

#[tokio::test]
async fn reference_admin_rank_matches_published_order() {
    let app = app();
    let id = create(&app, "reference30").await;
    let (st, v) = call(&app, Method::POST, &format!("/scenarios/{id}/run"), Some(json!({"procedure": "admin_rank"}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(order(&v["result"]), ADMIN_ORDER);
    assert_eq!(v["revision"], 1);
    assert_eq!(v["stale"], false);
    assert!(v["result"]["entries"][0]["score"].is_string());
}

#[tokio::test]
async fn summary_lists_roster_categories_and_string_reals() {
    let app = app();
    let id = create(&app, "desk4").await;
    let (st, v) = call(&app, Method::GET, &format!("/scenarios/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["staff"], json!(["A", "B", "C", "D"]));
    assert_eq!(v["channels"]["achievements"]["categories"], json!(["Teaching", "Research"]));
    assert_eq!(v["channels"]["achievements"]["admin_weights"], json!(["0.5", "0.5"]));
    assert_eq!(v["config"]["tie_tolerance"], "0.000000001");
    assert_eq!(v["config"]["league_count"], 3);
    assert_eq!(v["revision"], 1);
}

#[tokio::test]
async fn weighted_democracy_moves_age_from_ninth_to_twelfth() {
    let app = app();
    let id = create(&app, "reference30").await;
    let uri = format!("/scenarios/{id}/run");
    let (_, base) = call(&app, Method::POST, &uri, Some(json!({"name": "baseline", "procedure": "admin_rank"}))).await;
    let (st, cr) = call(&app, Method::POST, &uri, Some(json!({"name": "cr", "procedure": "weighted_democracy"}))).await;
    assert_eq!(st, StatusCode::OK, "{cr}");
    assert_eq!(position(&base["result"], "Age"), 9);
    assert_eq!(position(&cr["result"], "Age"), 12);
}

#[tokio::test]
async fn patch_then_rerun_bumps_revision_and_keeps_old_results() {
    let app = app();
    let id = create(&app, "reference30").await;
    let run = format!("/scenarios/{id}/run");
    let (_, before) = call(&app, Method::POST, &run, Some(json!({"procedure": "admin_rank"}))).await;
    assert_eq!(before["name"], "r1");

    let patch = json!({"target": "admin_achievement", "weights": [0.25, 0.25, 0.25, 0.25], "if_revision": 1});
    let (st, p) = call(&app, Method::PATCH, &format!("/scenarios/{id}/weights"), Some(patch)).await;
    assert_eq!(st, StatusCode::OK, "{p}");
    assert_eq!(p["revision"], 2);
    assert_eq!(p["stale_results"], 1);

    let (_, after) = call(&app, Method::POST, &run, Some(json!({"procedure": "admin_rank"}))).await;
    assert_eq!(after["revision"], 2);
    assert_ne!(order(&before["result"]), order(&after["result"]));
    let (_, again) = call(&app, Method::POST, &run, Some(json!({"procedure": "admin_rank"}))).await;
    assert_eq!(
        serde_json::to_string(&after["result"]).unwrap(),
        serde_json::to_string(&again["result"]).unwrap()
    );

    let (_, all) = call(&app, Method::GET, &format!("/scenarios/{id}/results"), None).await;
    let rs = all["results"].as_array().unwrap();
    assert_eq!(rs.len(), 3);
    assert_eq!(rs[0]["stale"], true);
    assert_eq!(rs[0]["revision"], 1);
    assert_eq!(rs[0]["result"], before["result"]);
    assert_eq!(rs[1]["stale"], false);

    let cmp = json!({"procedure": "compare", "list_a": "r1", "list_b": "r2", "metric": "place_distance"});
    let (st, c) = call(&app, Method::POST, &run, Some(cmp)).await;
    assert_eq!(st, StatusCode::OK, "{c}");
    let value: f64 = c["result"]["value"].as_str().unwrap().parse().unwrap();
    assert!(value > 0.0 && value <= 1.0, "{value}");
    assert_eq!(c["result"]["max_place_diff"], 450);
}

#[tokio::test]
async fn person_patch_by_category_changes_democratic_result() {
    let app = app();
    let id = create(&app, "desk4").await;
    let run = format!("/scenarios/{id}/run");
    let (_, before) = call(&app, Method::POST, &run, Some(json!({"procedure": "democratic_rank"}))).await;
    let patch = json!({
        "target": {"person": {"staff_id": "C", "channel": "achievements"}},
        "weights": {"Teaching": 1.0, "Research": 0.0}
    });
    let (st, _) = call(&app, Method::PATCH, &format!("/scenarios/{id}/weights"), Some(patch)).await;
    assert_eq!(st, StatusCode::OK);
    let (_, after) = call(&app, Method::POST, &run, Some(json!({"procedure": "democratic_rank"}))).await;
    assert_ne!(before["result"]["entries"], after["result"]["entries"]);
    let (_, s) = call(&app, Method::GET, &format!("/scenarios/{id}"), None).await;
    assert_eq!(s["channels"]["achievements"]["personnel_weights"]["C"], json!(["1", "0"]));
}

#[tokio::test]
async fn stale_revision_is_a_conflict() {
    let app = app();
    let id = create(&app, "desk4").await;
    let uri = format!("/scenarios/{id}/weights");
    let patch = |r: u64| json!({"target": "admin_achievement", "weights": [0.6, 0.4], "if_revision": r});
    assert_eq!(call(&app, Method::PATCH, &uri, Some(patch(1))).await.0, StatusCode::OK);
    let (st, e) = call(&app, Method::PATCH, &uri, Some(patch(1))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(e["code"], "conflict");
    assert_eq!(e["details"][0]["current"], 2);
    let (_, s) = call(&app, Method::GET, &format!("/scenarios/{id}"), None).await;
    assert_eq!(s["revision"], 2);
}

#[tokio::test]
async fn invalid_weights_are_rejected_with_details() {
    let app = app();
    let id = create(&app, "desk4").await;
    let uri = format!("/scenarios/{id}/weights");
    let (st, e) = call(&app, Method::PATCH, &uri, Some(json!({"target": "admin_reward", "weights": [0.9, 0.3]}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "invalid_weights");
    assert!(e["details"].as_array().unwrap().len() == 1);
    let (st, e) = call(&app, Method::PATCH, &uri, Some(json!({"target": "admin_reward", "weights": {"Salary": 1.0}}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(e["message"].as_str().unwrap().contains("Awards"), "{e}");
    let (_, s) = call(&app, Method::GET, &format!("/scenarios/{id}"), None).await;
    assert_eq!(s["revision"], 1);
}

#[tokio::test]
async fn invalid_bundle_lists_every_violation() {
    let app = app();
    let bundle = json!({
        "name": "bad",
        "staff": ["A", "B"],
        "achievements": {
            "categories": ["x", "y"],
            "evidence": [[1.0, 2.0], [3.0]],
            "admin_weights": [0.5, 0.5],
            "personnel_weights": [[0.5, 0.5], [0.9, 0.0]]
        }
    });
    let (st, e) = call(&app, Method::POST, "/scenarios", Some(json!({"bundle": bundle}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "invalid_bundle");
    let files: Vec<&str> = e["details"].as_array().unwrap().iter().map(|d| d["file"].as_str().unwrap()).collect();
    assert!(files.contains(&"achievements.evidence"), "{files:?}");
    assert!(files.contains(&"achievements.personnel_weights"), "{files:?}");
}

#[tokio::test]
async fn request_errors() {
    let app = app();
    let (st, e) = call(&app, Method::GET, "/scenarios/s99", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    assert_eq!(e["code"], "not_found");
    assert_eq!(e["details"], json!([]));

    let id = create(&app, "desk4").await;
    let run = format!("/scenarios/{id}/run");
    let (st, e) = call(&app, Method::POST, &run, Some(json!({"procedure": "levitate"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "bad_request");
    let (st, e) = call(&app, Method::POST, &run, Some(json!({"procedure": "compare", "list_a": "nope", "list_b": "AA"}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "invalid_parameter");
    let (st, _) = call(&app, Method::POST, "/scenarios", Some(json!({}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    call(&app, Method::POST, &run, Some(json!({"name": "x", "procedure": "admin_rank"}))).await;
    let (st, _) = call(&app, Method::POST, &run, Some(json!({"name": "x", "procedure": "admin_rank"}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
}

#[tokio::test]
async fn engine_errors_carry_structured_payloads() {
    let app = app();
    let id = create(&app, "desk4").await;
    let run = format!("/scenarios/{id}/run");
    let (st, e) = call(&app, Method::POST, &run, Some(json!({"procedure": "social_lift", "count": 2, "swap_k": 2}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "swap_too_large");
    assert_eq!(e["details"][0]["swap_k"], 2);
    let (st, e) = call(&app, Method::POST, &run, Some(json!({"procedure": "passion"}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "passion_zero_division");
    assert_eq!(e["details"][0], json!({"assessor": "A", "assessed": "B"}));
    let req = json!({"procedure": "passion", "zero_policy": {"kind": "zero_for_zero"}});
    let (st, p) = call(&app, Method::POST, &run, Some(req)).await;
    assert_eq!(st, StatusCode::OK, "{p}");
    assert_eq!(p["result"]["degenerate_rows"], json!(["D"]));
}

#[tokio::test]
async fn every_procedure_runs_on_desk4() {
    let app = app();
    let id = create(&app, "desk4").await;
    let run = format!("/scenarios/{id}/run");
    let requests = [
        json!({"procedure": "admin_rank", "channel": "rewards"}),
        json!({"procedure": "democratic_rank"}),
        json!({"procedure": "weighted_democracy"}),
        json!({"procedure": "leader_compromise", "leader": {"strategy": "explicit", "value": "C"}}),
        json!({"procedure": "leagues", "count": 2, "swap_k": 1}),
        json!({"procedure": "social_lift", "count": 2, "swap_k": 1}),
        json!({"procedure": "dichotomy", "variant": "self", "split": "golden_ratio"}),
        json!({"procedure": "cluster", "k": 2, "seed": 7}),
        json!({"procedure": "justice", "pairs": "canonical"}),
        json!({"procedure": "compare", "list_a": "AA", "list_b": "DA", "metric": "score_distance"}),
    ];
    for r in requests {
        let (st, v) = call(&app, Method::POST, &run, Some(r.clone())).await;
        assert_eq!(st, StatusCode::OK, "{r} -> {v}");
    }
    let (_, j) = call(&app, Method::POST, &run, Some(json!({"procedure": "justice"}))).await;
    assert_eq!(j["result"]["pairwise"].as_array().unwrap().len(), 4);
    assert_eq!(j["result"]["overall"], "0.333333333333");
}

#[tokio::test]
async fn snapshots_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let (id, before) = {
        let app = router(Arc::new(Store::open(dir.path()).unwrap()));
        let id = create(&app, "desk4").await;
        let patch = json!({"target": "admin_achievement", "weights": [0.8, 0.2]});
        call(&app, Method::PATCH, &format!("/scenarios/{id}/weights"), Some(patch)).await;
        let (_, r) = call(&app, Method::POST, &format!("/scenarios/{id}/run"), Some(json!({"procedure": "admin_rank"}))).await;
        (id, r)
    };
    let app = router(Arc::new(Store::open(dir.path()).unwrap()));
    let (st, s) = call(&app, Method::GET, &format!("/scenarios/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(s["revision"], 2);
    assert_eq!(s["channels"]["achievements"]["admin_weights"], json!(["0.8", "0.2"]));
    let (_, rs) = call(&app, Method::GET, &format!("/scenarios/{id}/results"), None).await;
    assert_eq!(rs["results"][0]["result"], before["result"]);
    let cmp = json!({"procedure": "compare", "list_a": "r1", "list_b": "AA"});
    let (st, c) = call(&app, Method::POST, &format!("/scenarios/{id}/run"), Some(cmp)).await;
    assert_eq!(st, StatusCode::OK, "{c}");
    assert_eq!(c["result"]["value"], "0");
    assert_eq!(c["name"], "r2");
    let new = create(&app, "desk4").await;
    assert_eq!(new, "s2");
}
