//! End-to-end runs of the verification suite on the standard fixtures.

use poset_algebra::poset::PolarizedPoset;
use poset_algebra::report::{failures, skipped, Status};
use poset_algebra::verify::{verify_poset, VerifyConfig};

fn poset_from(elements: &[&str], relations: &[(&str, &str)]) -> PolarizedPoset {
    PolarizedPoset::from_relations(elements, relations, &[]).unwrap()
}

#[test]
fn the_suite_passes_on_the_standard_fixtures() {
    let fixtures = [
        ("singleton", poset_from(&["a"], &[])),
        (
            "chain3",
            poset_from(&["a", "b", "c"], &[("a", "b"), ("b", "c")]),
        ),
        ("antichain3", poset_from(&["a", "b", "c"], &[])),
        (
            "diamond",
            poset_from(
                &["a", "b", "c", "d"],
                &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
            ),
        ),
        (
            "two_components",
            poset_from(
                &["u0", "u1", "u2", "v", "w"],
                &[("u0", "v"), ("u1", "w"), ("u2", "w")],
            ),
        ),
    ];
    let cfg = VerifyConfig {
        samples: 60,
        ..VerifyConfig::default()
    };
    for (name, poset) in fixtures {
        let reports = verify_poset(&poset, name, &cfg).unwrap();
        assert_eq!(reports.len(), 23, "{name}: suite size changed");
        let bad = failures(&reports);
        assert!(
            bad.is_empty(),
            "{name}: {:?}",
            bad.iter()
                .map(|r| (&r.check, &r.witness))
                .collect::<Vec<_>>()
        );
        for r in &reports {
            assert!(!r.check.is_empty() && !r.law.is_empty());
            assert_eq!(r.instance, name);
        }
    }
}

#[test]
fn resource_bounds_surface_as_skips() {
    // The five-element two-component poset exceeds the base-2 coordinate
    // algebra bound for the exhaustive unit-regular search (dimension 50),
    // so that check must be reported as skipped, never as passed.
    let poset = poset_from(
        &["u0", "u1", "u2", "v", "w"],
        &[("u0", "v"), ("u1", "w"), ("u2", "w")],
    );
    let cfg = VerifyConfig {
        samples: 20,
        ..VerifyConfig::default()
    };
    let reports = verify_poset(&poset, "two_components", &cfg).unwrap();
    let unit = reports
        .iter()
        .find(|r| r.check == "unit_regularity_exhaustive")
        .unwrap();
    assert_eq!(unit.status, Status::Skip);
    assert!(unit.witness.as_deref().unwrap().contains("dimension 50"));
    // The cross-check of enumerated ideals only covers four elements.
    let brute = reports
        .iter()
        .find(|r| r.check == "bruteforce_ideals_match")
        .unwrap();
    assert_eq!(brute.status, Status::Skip);
    assert!(!skipped(&reports).is_empty());
}

#[test]
fn reports_render_to_json_and_lines() {
    let poset = poset_from(&["a", "b"], &[("a", "b")]);
    let cfg = VerifyConfig {
        samples: 10,
        ..VerifyConfig::default()
    };
    let reports = verify_poset(&poset, "chain2", &cfg).unwrap();
    let json = poset_algebra::report::to_json(&reports);
    assert_eq!(json["passed"], true);
    assert_eq!(json["checks"].as_array().unwrap().len(), reports.len());
    let first = &json["checks"][0];
    for field in ["check", "instance", "law", "status", "elapsed_ms"] {
        assert!(first.get(field).is_some(), "missing {field}");
    }
    let lines = poset_algebra::report::render_lines(&reports);
    assert_eq!(lines.lines().count(), reports.len());
}
