//! Text, JSON and CSV renderings of classification reports.
//!
//! Flat field names are dotted paths into the JSON document, so every CSV
//! column can be located in the JSON output.

use std::fmt::Write as _;

use wvg_core::classify::ClassificationReport;
use wvg_core::format::write_game;
use wvg_core::CompleteGame;

use crate::OutputFormat;

/// Ordered `(path, value)` pairs of the numeric report fields.
pub fn report_fields(r: &ClassificationReport) -> Vec<(String, String)> {
    let t = &r.tally;
    let mut f: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| f.push((k.to_string(), v));
    put("schema_version", r.schema_version.to_string());
    put("order_version", r.order_version.to_string());
    put("n", r.n.to_string());
    put("types", r.types.to_string());
    put("complete", r.complete.map_or("null".into(), |c| c.to_string()));
    put("weighted", t.weighted.to_string());
    put("nonunique_plain", t.nonunique_plain.to_string());
    if r.types {
        put("nonunique_types", t.nonunique_types.to_string());
    }
    put("bound_tight", t.bound_tight.to_string());
    put("nonunique_bound_tight", t.nonunique_bound_tight.to_string());
    put("fractional", t.fractional.to_string());
    for (k, v) in &t.fractional_denominators {
        put(&format!("fractional_denominators.{k}"), v.to_string());
    }
    for (k, v) in &t.rep_histogram {
        put(&format!("rep_histogram.{k}"), v.to_string());
    }
    for (k, v) in &t.types_rep_histogram {
        put(&format!("types_rep_histogram.{k}"), v.to_string());
    }
    put("max_min_sum.value", t.max_min_sum.value.to_string());
    put("max_min_quota.value", t.max_min_quota.value.to_string());
    put("max_min_w1.value", t.max_min_w1.value.to_string());
    put("enumeration.nodes", t.enumeration.nodes.to_string());
    put("enumeration.lp_solves", t.enumeration.lp_solves.to_string());
    put("enumeration.pruned", t.enumeration.pruned.to_string());
    put("enumeration.pivots", t.enumeration.pivots.to_string());
    put("minrep_pivots", t.minrep_pivots.to_string());
    put("wall_seconds", format!("{:.3}", r.wall_seconds));
    f
}

pub fn render_report(r: &ClassificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("serialisable");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let fields = report_fields(r);
            let keys: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), values.join(","))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for (k, v) in report_fields(r) {
                writeln!(s, "{k} {v}").unwrap();
            }
            s
        }
    }
}

/// The non-unique games as `.csg` records, representations as comments.
pub fn dump_nonunique(r: &ClassificationReport) -> String {
    let mut s = String::new();
    for (i, g) in r.tally.nonunique_games.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let game = CompleteGame::new(r.n, g.min_winning.clone()).expect("enumerated games are valid");
        writeln!(s, "# min_sum {}", g.min_sum).unwrap();
        for rep in &g.reps {
            let w: Vec<String> = rep.weights.iter().map(|x| x.to_string()).collect();
            writeln!(s, "# rep {}: {}", rep.quota, w.join(" ")).unwrap();
        }
        for rep in g.type_reps.iter().flatten() {
            let w: Vec<String> = rep.weights.iter().map(|x| x.to_string()).collect();
            writeln!(s, "# type_rep {}: {}", rep.quota, w.join(" ")).unwrap();
        }
        s.push_str(&write_game(&game));
    }
    s
}

/// Renders rows of `(column, value)` pairs sharing the same columns.
pub fn render_rows(rows: &[Vec<(String, String)>], format: OutputFormat) -> String {
    let Some(first) = rows.first() else {
        return String::new();
    };
    let keys: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
    match format {
        OutputFormat::Text => {
            let mut s = keys.join(" ");
            s.push('\n');
            for row in rows {
                let vals: Vec<&str> = row.iter().map(|(_, v)| v.as_str()).collect();
                s.push_str(&vals.join(" "));
                s.push('\n');
            }
            s
        }
        OutputFormat::Csv => {
            let mut s = keys.join(",");
            s.push('\n');
            for row in rows {
                let vals: Vec<&str> = row.iter().map(|(_, v)| v.as_str()).collect();
                s.push_str(&vals.join(","));
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let obj = row
                        .iter()
                        .map(|(k, v)| {
                            let value = v
                                .parse::<u64>()
                                .map(serde_json::Value::from)
                                .unwrap_or_else(|_| serde_json::Value::from(v.clone()));
                            (k.clone(), value)
                        })
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("serialisable");
            s.push('\n');
            s
        }
    }
}
