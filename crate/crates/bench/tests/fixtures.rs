use ncwaring_bench::{block_quartic, cubic, tuple};
use ncwaring_core::check_compatibility;

#[test]
fn fixtures_are_compatible() {
    let p = cubic();
    assert_eq!(p.len(), 27);
    assert!(check_compatibility(&p, 1).unwrap().compatible);
    assert!(check_compatibility(&block_quartic(), 2).unwrap().compatible);
}

#[test]
fn tuples_are_seeded() {
    assert_eq!(tuple(2, 3, 1), tuple(2, 3, 1));
    assert_ne!(tuple(2, 3, 1), tuple(2, 3, 2));
}
