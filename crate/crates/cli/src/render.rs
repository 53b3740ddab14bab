use fatplane_core::bounds::BoundReport;
use fatplane_core::combinatorics::RhoBreakdown;
use fatplane_core::report::PaperExamples;
use fatplane_core::verifiers::ExperimentReport;
use serde::Serialize;
use serde_json::Value;

use crate::Format;

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data") + "\n"
}

/// Scalars bare, strings unquoted, everything else as compact JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.is_empty() => "-".into(),
        Value::Array(items) if items.iter().all(|i| i.is_string() || i.is_number()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

pub fn bound(rep: &BoundReport, format: Format) -> String {
    if format == Format::Json {
        return json(rep);
    }
    let v = value(rep);
    let mut rows: Vec<(String, String)> = [
        "r",
        "dd",
        "conjecture_n",
        "elv_n",
        "small_step_n",
        "best_n",
        "strategy",
        "hypothesis_flags",
    ]
    .iter()
    .map(|k| (k.to_string(), cell(&v[*k])))
    .collect();
    if let Some(cmp) = v.get("two_equation") {
        for k in ["first_term", "displayed_second_term", "derived_second_term"] {
            rows.push((format!("two_equation.{k}"), cell(&cmp[k])));
        }
    }
    let mut out = table(&rows);
    out.push_str("\nk  admissible  value  steps  blocking\n");
    for s in v["strategies"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "{}  {}  {}  {}  {}\n",
            s["k"],
            s["admissible"],
            cell(&s["value"]),
            cell(&s["steps"]),
            cell(&s["blocking"])
        ));
    }
    out
}

pub fn rho(b: &RhoBreakdown, format: Format) -> String {
    if format == Format::Json {
        return json(b);
    }
    let v = value(b);
    let rows: Vec<_> = ["rho", "flag_dim", "c", "c_per_degree"]
        .iter()
        .map(|k| (k.to_string(), cell(&v[*k])))
        .collect();
    table(&rows)
}

fn experiment_table(rep: &ExperimentReport) -> String {
    let mut rows = vec![("experiment".to_string(), rep.name.clone())];
    let params: Vec<String> = rep
        .params
        .iter()
        .map(|(k, v)| format!("{k}={}", cell(v)))
        .collect();
    rows.push(("params".into(), params.join(" ")));
    rows.push(("trials".into(), rep.trials.to_string()));
    rows.push(("successes".into(), rep.successes.to_string()));
    rows.push((
        "seed".into(),
        rep.seed.map_or("-".into(), |s| s.to_string()),
    ));
    for (k, v) in &rep.metrics {
        rows.push((k.clone(), cell(v)));
    }
    if let Some(w) = &rep.witness {
        let mut w = w.clone();
        if let Some(obj) = w.as_object_mut() {
            obj.remove("system");
        }
        rows.push(("witness".into(), w.to_string()));
    }
    if let Some(note) = &rep.note {
        rows.push(("note".into(), note.clone()));
    }
    rows.push(("verdict".into(), cell(&value(&rep.verdict))));
    table(&rows)
}

pub fn experiments(reports: &[ExperimentReport], format: Format) -> String {
    match (format, reports) {
        (Format::Json, [single]) => json(single),
        (Format::Json, many) => json(&many),
        (Format::Table, [single]) => experiment_table(single),
        (Format::Table, many) => {
            let mut out = String::from("name  params  successes/trials  verdict\n");
            for rep in many {
                let params: Vec<String> = rep
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={}", cell(v)))
                    .collect();
                out.push_str(&format!(
                    "{}  {}  {}/{}  {}\n",
                    rep.name,
                    params.join(" "),
                    rep.successes,
                    rep.trials,
                    cell(&value(&rep.verdict))
                ));
            }
            let passed = many.iter().filter(|r| r.passed()).count();
            out.push_str(&format!("passed {passed}/{}\n", many.len()));
            out
        }
    }
}

pub fn paper_examples(rep: &PaperExamples, format: Format) -> String {
    if format == Format::Json {
        return json(rep);
    }
    let mut out = String::new();
    for row in &rep.rows {
        let mut rows = vec![
            ("row".to_string(), row.label.clone()),
            ("claim".into(), row.paper_claim.clone()),
        ];
        if let Some(obj) = row.computed.as_object() {
            for (k, v) in obj {
                rows.push((k.clone(), cell(v)));
            }
        }
        rows.push(("consistent".into(), row.consistent.to_string()));
        if let Some(note) = &row.note {
            rows.push(("note".into(), note.clone()));
        }
        out.push_str(&table(&rows));
        out.push('\n');
    }
    out
}
