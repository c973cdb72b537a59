mod common;

use std::path::Path;

use proptest::prelude::*;
use serde_json::Value;
use threshscope_core::io::{
    parse_predictions, read_predictions, render_landscape_svg, render_pr_svg, write_predictions, write_reports,
    OutputFormat, ReportBundle, RunMetadata, Section,
};
use threshscope_core::io::{sha256_hex, RobustAnalysis};
use threshscope_core::{
    find_peaks, generate, load_landscape_fixture, pr_curves, EvalSchema, FixtureTable, MetricLandscape, Provenance,
    SweepConfig, SynthSpec, Task,
};

const SENSITIVITY: &str = "\
Confidence Threshold,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9
F1-action-overall,71.25,71.78,71.85,71.72,71.35,70.49,69.30,66.83,62.62
F1-action-mean,68.33,69.08,69.32,69.53,69.59,69.25,68.77,67.56,65.33
F1-reason-overall,45.37,51.65,54.17,54.77,54.06,52.03,49.26,44.55,36.10
F1-reason-mean,32.21,35.59,37.44,37.62,36.65,33.93,32.41,29.18,23.97
";

fn fixture() -> MetricLandscape {
    let grid = SweepConfig::default().grid().unwrap();
    load_landscape_fixture(&FixtureTable::from_csv(SENSITIVITY).unwrap(), &grid).unwrap()
}

fn fixture_bundle(tol: f64) -> ReportBundle {
    let ls = fixture();
    let mut b = ReportBundle::empty(
        RunMetadata::new("sweep", serde_json::json!({"tol": tol})),
        "not requested",
    );
    b.peaks = Section::Present(find_peaks(&ls));
    b.robust = Section::Present(RobustAnalysis::of(&ls, tol));
    b.landscape = Section::Present(ls);
    b
}

fn polyline_vertex_counts(svg: &str) -> Vec<usize> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
    doc.descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .map(|n| n.attribute("points").unwrap().split_whitespace().count())
        .collect()
}

#[test]
fn fixture_landscape_csv_matches_source_cells() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_reports(&fixture_bundle(0.03), dir.path(), OutputFormat::Csv).unwrap();
    let text = std::fs::read_to_string(dir.path().join("landscape.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 81);

    let expected: Vec<Vec<&str>> = SENSITIVITY
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).collect())
        .collect();
    for row in &rows {
        let i = (row[0].parse::<f64>().unwrap() * 10.0).round() as usize - 1;
        let j = (row[1].parse::<f64>().unwrap() * 10.0).round() as usize - 1;
        assert_eq!(&row[2], expected[0][i]);
        assert_eq!(&row[3], expected[1][i]);
        assert_eq!(&row[4], expected[2][j]);
        assert_eq!(&row[5], expected[3][j]);
    }
    let sensitivity = std::fs::read_to_string(dir.path().join("sensitivity.csv")).unwrap();
    assert_eq!(sensitivity.lines().nth(1).unwrap(), SENSITIVITY.lines().nth(1).unwrap());

    let peaks: Value = serde_json::from_slice(&std::fs::read(dir.path().join("peaks.json")).unwrap()).unwrap();
    assert_eq!(peaks["peaks"][0]["value"], serde_json::json!(71.85));
    assert_eq!(peaks["peaks"][0]["threshold"], serde_json::json!(0.3));

    for entry in &manifest.files {
        let bytes = std::fs::read(dir.path().join(&entry.file)).unwrap();
        assert_eq!(sha256_hex(&bytes), entry.sha256, "{}", entry.file);
    }
    let on_disk: Value = serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(on_disk["files"].as_array().unwrap().len(), manifest.files.len());
}

#[test]
fn empty_robust_region_keeps_header() {
    // the four metrics peak at different thresholds, so tolerance 0 admits nothing
    let dir = tempfile::tempdir().unwrap();
    write_reports(&fixture_bundle(0.0), dir.path(), OutputFormat::Csv).unwrap();
    let text = std::fs::read_to_string(dir.path().join("robust_region.csv")).unwrap();
    assert_eq!(
        text,
        "threshold,action_overall,action_mean,reason_overall,reason_mean\n"
    );
}

#[test]
fn same_bundle_same_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let ma = write_reports(&fixture_bundle(0.03), a.path(), format).unwrap();
        let mb = write_reports(&fixture_bundle(0.03), b.path(), format).unwrap();
        assert_eq!(ma, mb);
        assert_eq!(
            std::fs::read(a.path().join("manifest.json")).unwrap(),
            std::fs::read(b.path().join("manifest.json")).unwrap()
        );
    }
}

#[test]
fn landscape_svg_structure() {
    let svg = render_landscape_svg(&fixture());
    assert_eq!(polyline_vertex_counts(&svg), vec![9; 4]);
    assert_eq!(svg, render_landscape_svg(&fixture()));
    assert!(svg.contains(r#"width="800" height="500""#));
    assert!(!svg.contains("<script"));

    let profiles: Vec<_> = threshscope_core::Metric::ALL.iter().map(|&m| (m, vec![0.5])).collect();
    let single = MetricLandscape::from_profiles(vec![0.5], &profiles, Provenance::Fixture, 0);
    assert_eq!(polyline_vertex_counts(&render_landscape_svg(&single)), vec![1; 4]);
}

#[test]
fn pr_svg_has_one_marker_per_grid_threshold() {
    let es = generate(&SynthSpec::uniform(11, 60, EvalSchema::driving_default(), 0.6, 0.3)).unwrap();
    let grid = SweepConfig::default().grid().unwrap();
    let curves = pr_curves(&es, Task::Action, &grid);
    let svg = render_pr_svg(&curves);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let groups: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("curve"))
        .collect();
    assert_eq!(groups.len(), 4);
    for g in groups {
        let markers = g
            .descendants()
            .filter(|n| n.attribute("class") == Some("grid-marker"))
            .count();
        assert_eq!(markers, 9);
    }
    assert_eq!(svg, render_pr_svg(&curves));
}

#[test]
fn emitted_cells_reparse_within_half_unit() {
    let es = generate(&SynthSpec::uniform(
        3,
        80,
        EvalSchema::numbered(2, 3).unwrap(),
        0.4,
        0.4,
    ))
    .unwrap();
    let cfg = SweepConfig::default();
    let ls = threshscope_core::sweep::run_sweep(&es, &cfg, threshscope_core::EmptyF1::One).unwrap();
    let grid = cfg.grid().unwrap();
    let curves = pr_curves(&es, Task::Reason, &grid);
    let mut b = ReportBundle::empty(RunMetadata::new("test", Value::Null), "n/a");
    b.pr_curves = Section::Present(curves.clone());
    b.landscape = Section::Present(ls.clone());
    let dir = tempfile::tempdir().unwrap();
    write_reports(&b, dir.path(), OutputFormat::Csv).unwrap();

    let text = std::fs::read_to_string(dir.path().join("landscape.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for (k, row) in rdr.records().enumerate() {
        let row = row.unwrap();
        let c = ls.cells()[k];
        for (col, v) in [
            (2, c.action_overall),
            (3, c.action_mean),
            (4, c.reason_overall),
            (5, c.reason_mean),
        ] {
            let parsed: f64 = row[col].parse().unwrap();
            assert!((parsed - v * 100.0).abs() <= 0.005 + 1e-9);
        }
    }

    let text = std::fs::read_to_string(dir.path().join("pr_reason_1.csv")).unwrap();
    let (comment, body) = text.split_once('\n').unwrap();
    let ap: f64 = comment.rsplit('=').next().unwrap().parse().unwrap();
    assert!((ap - curves[1].average_precision.unwrap()).abs() <= 5e-7);
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    for (row, p) in rdr.records().zip(&curves[1].points) {
        let row = row.unwrap();
        for (col, v) in [(0, p.threshold), (1, p.precision), (2, p.recall)] {
            assert!((row[col].parse::<f64>().unwrap() - v).abs() <= 5e-7 + 1e-12);
        }
        assert_eq!(&row[3], if p.is_grid_marker { "1" } else { "0" });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn predictions_round_trip(seed in any::<u64>(), n in 1usize..40, sep in 0.0f64..=1.0, embed in any::<bool>()) {
        let schema = EvalSchema::numbered(3, 4).unwrap();
        let es = generate(&SynthSpec::uniform(seed, n, schema.clone(), sep, 0.4)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        write_predictions(&es, &path, embed).unwrap();
        let back = if embed {
            read_predictions(&path, None).unwrap()
        } else {
            let text = std::fs::read_to_string(&path).unwrap();
            parse_predictions(&text, Path::new("p.jsonl"), Some(schema)).unwrap()
        };
        prop_assert_eq!(back, es);
    }
}

#[test]
fn robust_region_both_readings_recorded() {
    let dir = tempfile::tempdir().unwrap();
    write_reports(&fixture_bundle(0.03), dir.path(), OutputFormat::Json).unwrap();
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("robust_region.json")).unwrap()).unwrap();
    assert_eq!(v["configured"]["thresholds"], serde_json::json!([0.3, 0.4, 0.5]));
    assert_eq!(v["one_percent"]["thresholds"], serde_json::json!([0.4]));
    assert_eq!(v["readings_agree"], Value::Bool(false));
}
