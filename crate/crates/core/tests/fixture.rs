use std::time::Instant;

use dirough::fixture::{self, CheckStatus};

#[test]
fn section6_has_no_undocumented_diffs() {
    let t = Instant::now();
    let r = fixture::section6();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    assert!(r.ok());
    assert_eq!(r.undocumented, 0);
    assert!(r.errata.iter().all(|e| e.reproduced));
    assert!(r.checks.iter().all(|c| c.status != CheckStatus::Undocumented));
    for key in ["table1(b,c)", "table1(c,b)", "table1(c,e)", "table1(e,c)", "table3[a]"] {
        assert!(r.errata.iter().any(|e| e.key == key), "{key}");
    }
}
