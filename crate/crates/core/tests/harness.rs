use proptest::prelude::*;
use truncation_lab::harness::records::{records_to_csv, records_to_json, CSV_COLUMNS};
use truncation_lab::harness::*;
use truncation_lab::transport::Metric;

fn cfg(kind: ExperimentKind, n: usize, m: usize, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        seed: 2024,
        ..ExperimentConfig::new(kind, n, m)
    }
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("trunclab-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn spectrum_records_roundtrip_through_json_and_csv() {
    let out = run(&cfg(ExperimentKind::Spectrum, 30, 10, 8)).unwrap();
    assert_eq!(out.records.len(), 8);
    let back = records_from_json(&records_to_json(&out.records).unwrap()).unwrap();
    assert_eq!(back, out.records);
    for r in &back {
        assert_eq!(r.eigenvalues().len(), 10);
    }

    let csv = records_to_csv(&out.records).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS.to_vec());
    for (row, rec) in rdr.records().zip(&out.records) {
        let row = row.unwrap();
        assert_eq!(row.len(), CSV_COLUMNS.len());
        let re: Vec<f64> = row[9].split(';').map(|t| t.parse().unwrap()).collect();
        let im: Vec<f64> = row[10].split(';').map(|t| t.parse().unwrap()).collect();
        // Shortest round-trip formatting: bit-exact after parsing.
        assert_eq!(re, rec.eig_re);
        assert_eq!(im, rec.eig_im);
        assert_eq!(row[5].parse::<f64>().unwrap(), rec.max_modulus);
        assert!((row[3].parse::<f64>().unwrap() - 10.0 / 30.0).abs() < 1e-15);
    }
}

#[test]
fn outcome_writes_summary_records_and_figures() {
    let mut c = cfg(ExperimentKind::Figure, 40, 10, 3);
    c.format = OutputFormat::Json;
    let out = run(&c).unwrap();
    let dir = scratch("figure");
    let written = out.write(&dir).unwrap();
    assert!(written.iter().any(|p| p.ends_with("summary.json")));
    assert!(written.iter().any(|p| p.ends_with("records.json")));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"]["kind"], "figure");
    let Summary::Figure(fig) = &out.summary else { panic!("wrong summary") };
    for panel in &fig.panels {
        let text = std::fs::read_to_string(dir.join(&panel.scatter_file)).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let eig = doc
            .descendants()
            .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("eig"))
            .count();
        assert_eq!(eig, panel.m, "panel alpha {}", panel.alpha);
        let hist = std::fs::read_to_string(dir.join(&panel.histogram_file)).unwrap();
        let doc = roxmltree::Document::parse(&hist).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn summaries_do_not_depend_on_worker_count() {
    for kind in [ExperimentKind::Spectrum, ExperimentKind::Edge, ExperimentKind::Distance] {
        let mut one = cfg(kind, 24, 8, 6);
        one.metric_samples = Some(120);
        let mut four = one.clone();
        four.workers = 4;
        let a = run(&one).unwrap();
        let b = run(&four).unwrap();
        assert_eq!(a.records, b.records, "{kind}");
        assert_eq!(a.summary_json().unwrap(), b.summary_json().unwrap(), "{kind}");
    }
}

#[test]
fn near_full_truncation_smoke_run() {
    for kind in [ExperimentKind::Spectrum, ExperimentKind::Edge, ExperimentKind::Bounds] {
        let out = run(&cfg(kind, 12, 11, 5)).unwrap();
        assert!(out.flagged.is_empty());
        assert!(out.passed(), "{kind}: {:?}", out.hard_failures().collect::<Vec<_>>());
    }
}

#[test]
fn distance_experiment_reports_quantiles() {
    let mut c = cfg(ExperimentKind::Distance, 40, 10, 6);
    c.metric = Metric::BoundedLipschitz;
    c.metric_samples = Some(100);
    let out = run(&c).unwrap();
    let Summary::Distance(d) = &out.summary else { panic!("wrong summary") };
    let q = &d.quantiles;
    assert!(q.min <= q.median && q.median <= q.q90 && q.q90 <= q.max);
    assert!(q.min >= 0.0 && q.max <= 2.0);
    assert!(d.delta_m.is_some());
    assert_eq!(out.records.iter().filter(|r| r.dbl_estimate.is_some()).count(), 6);
}

#[test]
fn config_file_formats() {
    let kv = ConfigOverrides::parse("kind = edge\nn=50 # size\nm = 10\nradius_grid = 1.1, 1.3\nmetric = w1\n").unwrap();
    let mut c = ExperimentConfig::default();
    c.apply(&kv).unwrap();
    assert_eq!((c.kind, c.n, c.m), (ExperimentKind::Edge, 50, 10));
    assert_eq!(c.radius_grid, vec![1.1, 1.3]);
    assert_eq!(c.metric, Metric::W1);

    let js = ConfigOverrides::parse(r#"{"n": 20, "m": 4, "metric-samples": 99, "format": "json"}"#).unwrap();
    let mut d = ExperimentConfig::default();
    d.apply(&js).unwrap();
    assert_eq!((d.n, d.m, d.metric_samples, d.format), (20, 4, Some(99), OutputFormat::Json));

    assert!(ConfigOverrides::parse("bogus = 1").is_err());
    assert!(ConfigOverrides::parse("n = -3").is_err());
    assert!(ConfigOverrides::parse(r#"{"colour": 1}"#).is_err());
    assert!(run(&cfg(ExperimentKind::Spectrum, 5, 5, 1)).is_err());
    assert!(run(&ExperimentConfig { trials: 0, ..cfg(ExperimentKind::Spectrum, 5, 2, 1) }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn recorded_spectra_stay_inside_support(seed in any::<u64>(), m in 1usize..12, extra in 1usize..12) {
        let n = m + extra;
        let c = ExperimentConfig { seed, ..cfg(ExperimentKind::Spectrum, n, m, 3) };
        let out = run(&c).unwrap();
        let scale = (n as f64 / m as f64).sqrt();
        for r in &out.records {
            prop_assert!(r.max_modulus < scale);
            prop_assert!(r.eigenvalues().iter().all(|z| z.norm() < scale));
        }
    }
}
