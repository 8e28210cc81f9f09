use ujac_core::interior::InteriorProvider;
use ujac_core::selftest;

#[test]
fn acceptance() {
    let provider = InteriorProvider::new();
    let mut failed = Vec::new();
    for id in selftest::ALL {
        let outcome = selftest::run(id, &provider);
        println!("{outcome}");
        if !outcome.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
