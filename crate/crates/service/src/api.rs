//! HTTP routes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use evirank_core::io::{load_scenario, num, InlineBundle};
use evirank_core::{Channel, Scenario, WeightVector};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::ApiError;
use crate::run::{execute, RunRequest};
use crate::store::{Store, StoredResult, StoredScenario};

pub type AppState = Arc<Store>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/scenarios", post(create_scenario).get(list_scenarios))
        .route("/scenarios/{id}", get(get_scenario))
        .route("/scenarios/{id}/weights", axum::routing::patch(patch_weights))
        .route("/scenarios/{id}/run", post(run))
        .route("/scenarios/{id}/results", get(list_results))
        .with_state(store)
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    #[serde(default)]
    bundle: Option<InlineBundle>,
    /// A bundle directory or manifest readable by the server.
    #[serde(default)]
    path: Option<PathBuf>,
}

/// Reals become 12-digit decimal strings; integers, booleans and text stay.
fn stringify_reals(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or_default()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_reals).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_reals(v))).collect()),
        other => other,
    }
}

fn channel_summary(s: &Scenario, kind: Channel) -> Value {
    let Ok(ch) = s.channel(kind) else {
        return Value::Null;
    };
    let personnel: Map<String, Value> = ch
        .roster()
        .ids()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), ch.personnel_weights.row(i).weights().iter().map(|&w| num(w)).collect()))
        .collect();
    json!({
        "categories": ch.evidence.categories().names(),
        "admin_weights": ch.admin_weights.weights().iter().map(|&w| num(w)).collect::<Vec<_>>(),
        "personnel_weights": personnel,
    })
}

fn summary(s: &StoredScenario) -> Value {
    let config = serde_json::to_value(s.scenario.config()).expect("config serializes");
    json!({
        "id": s.id,
        "name": s.scenario.name(),
        "revision": s.revision,
        "staff": s.scenario.roster().ids(),
        "config": stringify_reals(config),
        "channels": {
            "achievements": channel_summary(&s.scenario, Channel::Achievements),
            "rewards": channel_summary(&s.scenario, Channel::Rewards),
        },
        "results": s.results.len(),
    })
}

fn result_json(r: &StoredResult, current: u64) -> Value {
    json!({
        "name": r.name,
        "revision": r.revision,
        "stale": r.revision < current,
        "request": r.request,
        "result": r.document,
    })
}

async fn create_scenario(State(store): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<Value>), ApiError> {
    let body: CreateBody = parse(&body)?;
    let scenario = match (body.bundle, body.path) {
        (Some(b), None) => b.into_scenario()?,
        (None, Some(p)) => load_scenario(&p)?,
        _ => return Err(ApiError::bad_request("give exactly one of 'bundle' or 'path'")),
    };
    let entry = store.create(scenario)?;
    let s = entry.read().expect("scenario lock");
    Ok((StatusCode::CREATED, Json(summary(&s))))
}

async fn list_scenarios(State(store): State<AppState>) -> Json<Value> {
    Json(json!({"scenarios": store.ids()}))
}

async fn get_scenario(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let entry = store.get(&id)?;
    let s = entry.read().expect("scenario lock");
    Ok(Json(summary(&s)))
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum Target {
    AdminAchievement,
    AdminReward,
    Person { staff_id: String, channel: Channel },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightsInput {
    List(Vec<f64>),
    ByCategory(BTreeMap<String, f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatchBody {
    target: Target,
    weights: WeightsInput,
    /// Conditional update: rejected with 409 unless this is the current revision.
    #[serde(default)]
    if_revision: Option<u64>,
}

fn weight_vector(s: &Scenario, kind: Channel, input: WeightsInput, context: &str) -> Result<WeightVector, ApiError> {
    let ch = s.channel(kind)?;
    let cats = ch.evidence.categories().clone();
    let values = match input {
        WeightsInput::List(v) => v,
        WeightsInput::ByCategory(mut m) => {
            let mut v = Vec::with_capacity(cats.len());
            for c in cats.names() {
                v.push(m.remove(c).ok_or_else(|| {
                    evirank_core::Error::InvalidWeights {
                        context: context.to_string(),
                        reason: format!("missing category '{c}'"),
                    }
                })?);
            }
            if let Some(extra) = m.keys().next() {
                return Err(evirank_core::Error::InvalidWeights {
                    context: context.to_string(),
                    reason: format!("unknown category '{extra}'"),
                }
                .into());
            }
            v
        }
    };
    Ok(WeightVector::with_tolerance(cats, values, s.config().weight_tolerance, context)?)
}

async fn patch_weights(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Value>, ApiError> {
    let body: PatchBody = parse(&body)?;
    let entry = store.get(&id)?;
    let mut s = entry.write().expect("scenario lock");
    if let Some(r) = body.if_revision {
        if r != s.revision {
            let mut e = ApiError::new(
                StatusCode::CONFLICT,
                "conflict",
                format!("revision {r} is stale, current is {}", s.revision),
            );
            e.details.push(json!({"expected": r, "current": s.revision}));
            return Err(e);
        }
    }
    let updated = match body.target {
        Target::AdminAchievement => {
            let w = weight_vector(&s.scenario, Channel::Achievements, body.weights, "admin achievement weights")?;
            s.scenario.with_admin_weights(Channel::Achievements, w)?
        }
        Target::AdminReward => {
            let w = weight_vector(&s.scenario, Channel::Rewards, body.weights, "admin reward weights")?;
            s.scenario.with_admin_weights(Channel::Rewards, w)?
        }
        Target::Person { staff_id, channel } => {
            let w = weight_vector(&s.scenario, channel, body.weights, &format!("weights of {staff_id}"))?;
            s.scenario.with_person_weights(channel, &staff_id, &w)?
        }
    };
    let mut next = s.clone();
    next.scenario = updated;
    next.revision += 1;
    store.snapshot(&next, true)?;
    *s = next;
    let stale = s.results.iter().filter(|r| r.revision < s.revision).count();
    Ok(Json(json!({"id": s.id, "revision": s.revision, "stale_results": stale})))
}

#[derive(Deserialize)]
struct RunBody {
    #[serde(default)]
    name: Option<String>,
    #[serde(flatten)]
    request: Value,
}

async fn run(State(store): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body: RunBody = parse(&body)?;
    let request: RunRequest = serde_json::from_value(body.request.clone())
        .map_err(|e| ApiError::bad_request(format!("invalid procedure: {e}")))?;
    let entry = store.get(&id)?;
    let mut s = entry.write().expect("scenario lock");
    if let Some(n) = &body.name {
        if s.result(n).is_some() {
            return Err(ApiError::new(StatusCode::CONFLICT, "conflict", format!("result name '{n}' is taken")));
        }
    }
    let outcome = {
        let cached = |name: &str| s.result(name).and_then(|r| r.list.clone());
        execute(&s.scenario, &request, &cached)?
    };
    let name = match body.name {
        Some(n) => n,
        None => s.next_result_name(),
    };
    let stored = StoredResult {
        name,
        revision: s.revision,
        request: body.request,
        document: outcome.report.to_json(),
        list: outcome.list,
    };
    let mut next = s.clone();
    next.results.push(stored.clone());
    store.snapshot(&next, false)?;
    *s = next;
    Ok(Json(result_json(&stored, s.revision)))
}

async fn list_results(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let entry = store.get(&id)?;
    let s = entry.read().expect("scenario lock");
    let results: Vec<Value> = s.results.iter().map(|r| result_json(r, s.revision)).collect();
    Ok(Json(json!({"id": s.id, "revision": s.revision, "results": results})))
}
