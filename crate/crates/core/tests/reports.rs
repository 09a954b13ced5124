use qsid_core::bijections::{audit_bijection, AuditReport, BijectionBox};
use qsid_core::identities::{verify_thm11, VerificationReport};
use qsid_core::partitions::series_vs_enumeration_check;
use qsid_core::TruncationProfile;

#[test]
fn verification_report_json_roundtrip() {
    let r = verify_thm11(TruncationProfile::new(3, 3, 3, 12)).unwrap();
    assert!(r.is_verified());
    let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back.stable(), r.stable());
}

#[test]
fn audit_report_json_roundtrip_revalidates() {
    let r = audit_bijection(BijectionBox::new(2, 3).unwrap()).unwrap();
    assert!(r.bijection_confirmed());
    let back: AuditReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert!(back.revalidate());
    assert_eq!(back.bijection_confirmed(), r.bijection_confirmed());
}

#[test]
fn partition_windows_match_series() {
    for n in 0..=3 {
        let r = series_vs_enumeration_check(n, TruncationProfile::new(4, 4, 4, 20)).unwrap();
        assert!(r.is_verified(), "window {n}");
    }
}
