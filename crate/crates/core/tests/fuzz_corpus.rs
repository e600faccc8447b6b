//! Replays the checked-in fuzz seed corpora through the fuzz-target checks.

use std::fs;
use std::path::PathBuf;

use exchange_budget::specfile::{load_specs, parse_value_list, render_technologies};

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn spec_file_seeds() {
    let mut loaded = 0;
    for (path, text) in corpus("spec_file") {
        if let Ok(doc) = load_specs(&text) {
            let again = load_specs(&render_technologies(&doc.technologies)).unwrap();
            assert_eq!(again.technologies, doc.technologies, "{}", path.display());
            loaded += 1;
        }
    }
    assert!(loaded >= 3);
}

#[test]
fn value_list_seeds() {
    for (path, text) in corpus("value_list") {
        if let Ok(values) = parse_value_list(&text) {
            assert!(values.iter().all(|v| v.is_finite()), "{}", path.display());
        }
    }
    assert_eq!(parse_value_list(" 0.5 , 1 ,2.0 ").unwrap(), [0.5, 1.0, 2.0]);
}
