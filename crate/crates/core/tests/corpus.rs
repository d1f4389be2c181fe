use std::path::PathBuf;

use kappalab_core::scenario::{run_scenario, Scenario};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn every_shipped_scenario_matches_its_expectations() {
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 5);
    for path in paths {
        let text = std::fs::read_to_string(&path).unwrap();
        let sc = Scenario::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let t = std::time::Instant::now();
        let report = run_scenario(&sc).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        eprintln!("{} in {:.1?}", sc.name, t.elapsed());
        for item in report.items.iter().filter(|i| !i.matched) {
            eprintln!("  mismatch {} expected {:?} observed {:?}", item.id, item.expected, item.observed);
        }
        assert!(report.all_matched, "{}", report.to_text());
    }
}
