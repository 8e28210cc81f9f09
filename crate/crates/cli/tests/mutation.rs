use ujac_cli::{run, EXIT_INVARIANT};
use ujac_core::assembly::mutation::set_torus_sign_flip;

#[test]
fn torus_sign_flip_fails_selftest() {
    set_torus_sign_flip(true);
    let mut out = Vec::new();
    let code = run(["ujac", "selftest", "--criteria", "4,5,8"], &mut out, &mut Vec::new());
    set_torus_sign_flip(false);
    let out = String::from_utf8(out).unwrap();
    assert_eq!(code, EXIT_INVARIANT, "{out}");
    assert!(out.contains("criterion 4 type-1-1-e-polynomial [FAIL]"), "{out}");
    assert!(out.lines().last().unwrap().starts_with("FAIL: 4 type-1-1-e-polynomial"), "{out}");
}
