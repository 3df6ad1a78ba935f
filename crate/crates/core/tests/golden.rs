//! Basis layouts pinned for R = 1 and R = 2: index, one-line permutation and tetrad.

use hcorr::combinatorics::ClassTable;

fn check(r: usize, text: &str) {
    let want: serde_json::Value = serde_json::from_str(text).unwrap();
    assert_eq!(ClassTable::new(r).unwrap().to_json(), want, "basis layout for R={r} changed");
}

#[test]
fn basis_layout_r1() {
    check(1, include_str!("golden/basis_r1.json"));
}

#[test]
fn basis_layout_r2() {
    check(2, include_str!("golden/basis_r2.json"));
}
