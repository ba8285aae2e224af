use clap::ValueEnum;
use qcva_core::CheckReport;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn csv_string(meta: Option<&str>, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    match meta {
        Some(m) => format!("# {m}\n{body}"),
        None => body,
    }
}

pub fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn reports(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => json_string(&json!({
            "all_pass": reports.iter().all(|r| r.defect_zero),
            "reports": reports,
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.identity.clone(),
                        r.params.to_string(),
                        r.states_checked.to_string(),
                        r.defect_zero.to_string(),
                        r.max_defect.to_string(),
                        r.truncated.to_string(),
                        r.counterexample
                            .as_ref()
                            .map(|s| serde_json::to_string(s).expect("states serialize"))
                            .unwrap_or_default(),
                    ]
                })
                .collect();
            csv_string(
                None,
                &[
                    "identity",
                    "params",
                    "states_checked",
                    "defect_zero",
                    "max_defect",
                    "truncated",
                    "counterexample",
                ],
                &rows,
            )
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&format!(
                    "{} {}: {} ({} states, max defect {}{})\n",
                    r.identity,
                    r.params,
                    if r.defect_zero { "pass" } else { "FAIL" },
                    r.states_checked,
                    r.max_defect,
                    if r.truncated { ", truncated" } else { "" }
                ));
                if let Some(ce) = &r.counterexample {
                    s.push_str(&format!("  counterexample: {ce}\n"));
                }
            }
            let failed = reports.iter().filter(|r| !r.defect_zero).count();
            s.push_str(&format!("{} sweeps, {failed} failed\n", reports.len()));
            s
        }
    }
}
