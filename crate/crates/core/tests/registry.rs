use lcstab::scenario::{find, registry, run_scenario, Overrides, RunStatus, ScenarioSpec};
use lcstab::{hierarchy_check, Error};

#[test]
fn specs_roundtrip_through_json() {
    for spec in registry() {
        let text = serde_json::to_string(&spec).unwrap();
        let back: ScenarioSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec, "{}", spec.name);
        assert!(spec.reference.is_some() && spec.expected.is_some(), "{}", spec.name);
    }
}

#[test]
fn names_are_unique_and_findable() {
    let specs = registry();
    let mut names: Vec<_> = specs.iter().map(|s| s.name.clone()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), specs.len());
    assert!(matches!(find("nope"), Err(Error::Unknown { .. })));
}

#[test]
fn report_is_self_consistent() {
    let run = run_scenario("mult-4-cn", Overrides { truncation: Some(60), t_max: None }).unwrap();
    let r = &run.report;
    assert_eq!(r.truncation, 60);
    assert_eq!(r.code, r.verdicts.code());
    assert_eq!(r.status(), RunStatus::Match);
    assert_eq!(r.hierarchy, hierarchy_check(&r.verdicts, r.hypotheses.conditional_edge()));
    // Every point is also sampled as the singleton set `{x}`.
    let (p, s) = (r.families.points.len(), r.families.sets.len());
    assert_eq!(run.series.len(), r.families.seminorms.len() * (2 * p + s));
    assert!(run.series.iter().all(|(_, v)| v.len() == run.times.len()));
    let json = r.to_json().unwrap();
    let back: lcstab::scenario::StabilityReport = serde_json::from_str(&json).unwrap();
    assert_eq!(&back, r);
}
