//! Text rendering against reviewed golden files.

mod common;

use lietab_core::export::{artifacts_text, model_text};
use lietab_core::pipeline::run_pipeline;

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn b2_f4_table_text() {
    let m = common::load("b2_f4.json");
    assert_eq!(model_text(&m), golden("b2_f4.txt"));
}

#[test]
fn induced_value_text() {
    let m = common::load("b2_f4.json");
    let a = run_pipeline(&m, m.plan("step4-exp33").unwrap()).unwrap();
    assert_eq!(artifacts_text(&a), golden("step4-exp33.txt"));
}

#[test]
fn guard_headers_name_the_congruence() {
    let text = golden("b2_f4.txt");
    assert!(text.contains("-- valid for 2|q, 3|q-1\n"));
    assert!(text.contains("-- valid for 2|q, 3|q+1\n"));
}
