use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use super::Snapshot;
use crate::classifier::render_csv;
use crate::registry::Registry;
use crate::scoring::{AreaStats, DepartmentScore};

pub const EXPORT_FILES: [&str; 4] = [
    "areas.json",
    "conferences.csv",
    "departments.csv",
    "papers.jsonl",
];

#[derive(Serialize)]
struct AreaExport<'a> {
    area_id: &'a str,
    name: &'a str,
    total_papers: u64,
    department_scores: &'a [DepartmentScore],
    professor_counts: &'a std::collections::BTreeMap<String, u64>,
}

fn areas_json(snapshot: &Snapshot) -> String {
    let areas: Vec<AreaExport<'_>> = snapshot
        .areas
        .iter()
        .map(|s: &AreaStats| AreaExport {
            area_id: &s.area_id,
            name: snapshot
                .registry()
                .area(&s.area_id)
                .map_or("", |a| a.name.as_str()),
            total_papers: s.total_papers,
            department_scores: &s.department_scores,
            professor_counts: &s.professor_counts,
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&areas).expect("areas serialize");
    out.push('\n');
    out
}

fn departments_export(snapshot: &Snapshot) -> String {
    departments_csv(&snapshot.areas, snapshot.registry())
}

/// Department rankings of the given areas as CSV, one row per (area, department).
pub fn departments_csv(areas: &[AreaStats], registry: &Registry) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "area_id",
        "rank",
        "dept_id",
        "department",
        "A",
        "B",
        "C",
        "score",
        "professors",
    ])
    .expect("in-memory write");
    for stats in areas {
        for (i, d) in stats.department_scores.iter().enumerate() {
            let name = registry
                .department(&d.dept_id)
                .map_or("", |d| d.name.as_str());
            let professors = stats.professor_counts.get(&d.dept_id).copied().unwrap_or(0);
            w.write_record([
                stats.area_id.clone(),
                (i + 1).to_string(),
                d.dept_id.clone(),
                name.to_string(),
                d.counts.top.to_string(),
                d.counts.near_top.to_string(),
                d.counts.standard.to_string(),
                d.score.to_string(),
                professors.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

fn papers_jsonl(snapshot: &Snapshot) -> String {
    let mut out = String::new();
    for p in &snapshot.papers {
        out.push_str(&serde_json::to_string(p).expect("paper serializes"));
        out.push('\n');
    }
    out
}

/// The export files and their contents. Nothing here depends on the build
/// time, so identical inputs give identical bytes.
pub fn render_exports(snapshot: &Snapshot) -> Vec<(&'static str, String)> {
    vec![
        (EXPORT_FILES[0], areas_json(snapshot)),
        (EXPORT_FILES[1], render_csv(&snapshot.classification.rows)),
        (EXPORT_FILES[2], departments_export(snapshot)),
        (EXPORT_FILES[3], papers_jsonl(snapshot)),
    ]
}

pub fn write_exports(snapshot: &Snapshot, out_dir: &Path) -> io::Result<()> {
    fs::create_dir_all(out_dir)?;
    for (name, body) in render_exports(snapshot) {
        fs::write(out_dir.join(name), body)?;
    }
    Ok(())
}
