//! Report documents and their renderings.

use serde_json::{json, Map, Value};

use delta_core::cover::{CoverCheck, CoverOutcome, DeltaLargeCert};
use delta_core::delta::{DeltaResult, Evidence, Trace};
use delta_core::partition::{PartitionCert, SplitOutcome};
use delta_core::sequence::{AuditReport, BuildState};
use delta_core::taxonomy::{InclusionCheck, PropagationReport, Search, ThinOutcome, ThinTrace};
use delta_core::{Element, Error, SetRepr, Verdict};

pub const VERSION: &str = concat!("delta-wb ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub result: Value,
    pub certificates: Value,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            parameters: Map::new(),
            result: Value::Null,
            certificates: Value::Array(Vec::new()),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    /// A numeric parameter with where its value came from.
    pub fn sourced(&mut self, key: &str, value: u64, from_flag: bool) {
        let source = if from_flag { "flag" } else { "default" };
        self.param(key, json!({ "value": value, "source": source }));
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "result": self.result,
            "certificates": self.certificates,
            "version": VERSION,
        })
    }

    pub fn render(&self, as_json: bool) -> String {
        let v = self.to_value();
        if as_json {
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            s
        } else {
            let mut out = String::new();
            flatten(&v, "", &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// `path: value` lines; arrays of scalars stay on one line.
fn flatten(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(x, &join(k), out);
            }
        }
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some()) => {
            let items: Vec<String> = a.iter().filter_map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path}: {}\n", scalar(v).unwrap_or_default())),
    }
}

/// Paths at which two documents differ, at most `limit` of them.
pub fn diff(a: &Value, b: &Value, limit: usize) -> Vec<String> {
    let mut out = Vec::new();
    walk(a, b, "$", &mut out, limit);
    out
}

fn walk(a: &Value, b: &Value, path: &str, out: &mut Vec<String>, limit: usize) {
    if out.len() >= limit || a == b {
        return;
    }
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = format!("{path}.{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => walk(u, v, &p, out, limit),
                    (Some(_), None) => out.push(format!("{p}: missing from regenerated report")),
                    (None, Some(_)) => out.push(format!("{p}: not in stored fixture")),
                    (None, None) => {}
                }
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                walk(u, v, &format!("{path}[{i}]"), out, limit);
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            out.push(format!("{path}: length {} stored, {} regenerated", x.len(), y.len()))
        }
        _ => out.push(format!("{path}: {a} stored, {b} regenerated")),
    }
}

pub fn elem(g: &Element) -> Value {
    Value::String(g.to_string())
}

pub fn elems(gs: &[Element]) -> Value {
    Value::Array(gs.iter().map(elem).collect())
}

pub fn set(s: &SetRepr) -> Value {
    Value::String(s.to_string())
}

pub fn verdict(v: Verdict) -> Value {
    Value::String(v.to_string())
}

pub fn error(e: &Error) -> Value {
    let kind = format!("{e:?}");
    let kind = kind
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string();
    json!({ "kind": kind, "message": e.to_string() })
}

pub fn evidence(e: &Evidence) -> Value {
    json!({
        "window": e.window.radius(),
        "threshold": e.threshold,
        "size": e.members.len(),
        "members": elems(&e.members),
        "verdict": verdict(e.verdict()),
    })
}

pub fn delta_result(r: &DeltaResult) -> Value {
    match r {
        DeltaResult::Exact(s) => json!({ "kind": "exact", "set": set(s), "verdict": verdict(Verdict::Proven) }),
        DeltaResult::Evidence(e) => {
            let mut v = evidence(e);
            v["kind"] = "evidence".into();
            v
        }
    }
}

pub fn trace(t: &Trace) -> Value {
    json!({
        "steps": t.steps.iter().map(delta_result).collect::<Vec<_>>(),
        "fixed_point": t.fixed_point,
        "handoff": t.handoff.as_ref().map(evidence),
    })
}

pub fn cover_outcome(o: &CoverOutcome) -> Value {
    match o {
        CoverOutcome::Covers => json!({ "kind": "covers" }),
        CoverOutcome::CofiniteWithResidual(h) => json!({ "kind": "cofinite", "residual": elems(h) }),
        CoverOutcome::FailsAt(g) => json!({ "kind": "fails", "at": elem(g) }),
    }
}

pub fn cover_check(c: &CoverCheck) -> Value {
    json!({ "outcome": cover_outcome(&c.outcome), "verdict": verdict(c.verdict) })
}

pub fn delta_large(c: &DeltaLargeCert) -> Value {
    json!({
        "shifts": elems(&c.shifts),
        "size": c.shifts.len(),
        "delta": c.delta.as_ref().map(set),
        "verdict": verdict(c.verdict),
    })
}

pub fn split(s: &SplitOutcome) -> Value {
    match s {
        SplitOutcome::CoverCert(c) => json!({ "kind": "cover", "cert": delta_large(c) }),
        SplitOutcome::Shifted {
            g,
            cover,
            residual,
            verdict: v,
        } => json!({
            "kind": "shifted",
            "g": elem(g),
            "cover": elems(cover),
            "residual": elems(residual),
            "verdict": verdict(*v),
        }),
    }
}

pub fn partition(c: &PartitionCert) -> Value {
    json!({
        "index": c.index,
        "shifts": elems(&c.shifts),
        "size": c.shifts.len(),
        "bound": c.bound.map(|b| b.to_string()),
        "trace": c.trace.iter().map(split).collect::<Vec<_>>(),
        "residuals": c.residuals.iter().map(|r| elems(r)).collect::<Vec<_>>(),
        "verdict": verdict(c.verdict),
    })
}

pub fn build(s: &BuildState) -> Value {
    json!({
        "group": s.group.tag(),
        "points": elems(&s.points()),
        "schedule": elems(s.schedule.reps()),
        "placements": s.placements.iter().map(|p| json!({
            "shift": p.shift.as_ref().map(elem),
            "points": elems(&p.points),
            "forbidden_bound": p.forbidden_bound,
        })).collect::<Vec<_>>(),
        "hypothesis": verdict(s.hypothesis),
    })
}

pub fn audit(r: &AuditReport) -> Value {
    json!({
        "status": "passed",
        "points": r.points,
        "scheduled": r.scheduled.iter().map(|c| json!({
            "target": elem(&c.target),
            "issued": c.issued,
            "multiplicity": c.multiplicity,
        })).collect::<Vec<_>>(),
        "max_off_target": r.max_off_target,
        "distinct_differences": r.distinct_differences,
    })
}

pub fn search(s: &Search) -> Value {
    match s {
        Search::Found { witness, verdict: v } => {
            json!({ "found": true, "witness": elems(witness), "verdict": verdict(*v) })
        }
        Search::NotFound { verdict: v } => json!({ "found": false, "verdict": verdict(*v) }),
    }
}

pub fn thin(t: &ThinTrace) -> Value {
    let outcome = match &t.outcome {
        ThinOutcome::ThinAt(n) => json!({ "kind": "thin", "at": n }),
        ThinOutcome::Stabilized { set, from } => {
            json!({ "kind": "stabilized", "set": delta_result(set), "from": from })
        }
        ThinOutcome::Inconclusive => json!({ "kind": "inconclusive" }),
    };
    json!({ "outcome": outcome, "trace": trace(&t.trace), "verdict": verdict(t.verdict) })
}

fn inclusion(c: &InclusionCheck) -> Value {
    json!({
        "holds": c.holds,
        "counterexample": c.counterexample.as_ref().map(elem),
        "verdict": verdict(c.verdict),
    })
}

pub fn propagation(r: &PropagationReport) -> Value {
    json!({
        "differences_in_delta": inclusion(&r.differences_in_delta),
        "differences_self": inclusion(&r.differences_self),
    })
}
