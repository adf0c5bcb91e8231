use mirror_gw_core::equivariant::AlphaSpec;
use mirror_gw_core::localization::{oracle_invariant, OracleGuard};
use mirror_gw_core::mirror::{extract_gw, InvariantKey, MirrorEngine};

/// Keys ⟨τ_{a1}H^{b1}, τ_{a2}H^{b2}⟩_d of the right dimension.
fn keys(n: usize, a: usize, d: usize) -> Vec<InvariantKey> {
    let mut out = Vec::new();
    let dim = n as i64 - 3 + ((n - a) * d) as i64;
    if dim < 0 {
        return out;
    }
    let dim = dim as usize;
    for b1 in 0..n {
        for b2 in 0..n {
            for a1 in 0..=dim {
                if let Some(a2) = dim.checked_sub(a1 + b1 + b2) {
                    out.push(InvariantKey::new(d, (a1, b1), (a2, b2)));
                }
            }
        }
    }
    out
}

#[test]
fn alpha_free_invariants_match_mirror_extraction() {
    let guard = OracleGuard::default();
    let mut checked = 0;
    for n in 2..=4 {
        for a in 1..=n {
            let two_point = MirrorEngine::build(n, a, 2).unwrap().two_point().unwrap();
            let first = AlphaSpec::generic(n, 2, 0).unwrap();
            let second = AlphaSpec::generic(n, 2, 1).unwrap();
            assert_ne!(first, second);
            for d in 1..=2 {
                for key in keys(n, a, d) {
                    let x = oracle_invariant(&key, &first, a, guard).unwrap();
                    let y = oracle_invariant(&key, &second, a, guard).unwrap();
                    let z = extract_gw(&two_point, &key).unwrap().value;
                    assert_eq!(x, y, "n = {n}, a = {a}, {key:?}");
                    assert_eq!(x, z, "n = {n}, a = {a}, {key:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50, "only {checked} keys");
}
