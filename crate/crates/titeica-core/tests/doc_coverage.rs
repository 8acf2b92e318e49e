//! Every documentation key a check can emit must be described in the
//! repository README, so a report reader can always look a key up.

use titeica_core::verify::doc_refs;

#[test]
fn every_doc_ref_appears_in_the_readme() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    let readme = std::fs::read_to_string(path).expect("README.md at the workspace root");
    let missing: Vec<&str> = doc_refs()
        .iter()
        .copied()
        .filter(|key| !readme.contains(&format!("`{key}`")))
        .collect();
    assert!(
        missing.is_empty(),
        "README.md is missing entries for: {}",
        missing.join(", ")
    );
}

#[test]
fn doc_refs_are_unique_kebab_case_keys() {
    let keys = doc_refs();
    let mut seen = std::collections::HashSet::new();
    for key in keys {
        assert!(seen.insert(key), "duplicate key {key}");
        assert!(
            key.chars().all(|c| c.is_ascii_lowercase() || c == '-'),
            "key {key} is not kebab-case"
        );
    }
}
