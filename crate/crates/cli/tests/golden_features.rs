//! Golden feature vectors for hand-checked snippets.
//!
//! The expected vectors were computed by `tools/feature_oracle.py`, an
//! independent reimplementation of the 33 feature definitions on top of
//! CPython's `ast` and `tokenize` modules, and frozen in `golden_data.inc`.
//! Every component must match exactly — both sides divide the same integers
//! in IEEE double precision, so no tolerance is needed.

use pydesign::parse::parse_text;
use pydesign_core::extract_features;

include!("golden_data.inc");

#[test]
fn golden_vectors_match_exactly() {
    for (name, source, expected) in GOLDEN {
        let (syntax, source_program) =
            parse_text(source).unwrap_or_else(|e| panic!("{name}: {e}"));
        let fv = extract_features(&syntax, &source_program);
        assert_eq!(fv.values.len(), expected.len(), "{name}: length");
        for (i, (got, want)) in fv.values.iter().zip(expected.iter()).enumerate() {
            assert_eq!(got, want, "{name}: feature {} differs", i + 1);
        }
    }
}

#[test]
fn golden_set_is_large_enough() {
    assert!(GOLDEN.len() >= 10);
    assert!(GOLDEN.iter().any(|(_, source, _)| source.is_empty()));
}
