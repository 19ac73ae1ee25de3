use std::path::PathBuf;

use keeper_core::data::{load_match, parse_match, DataError};
use keeper_core::episodes::{flag_eligibility, segment_episodes, FlagColor};
use keeper_core::synthetic::generate_synthetic;
use keeper_core::{Config, EventKind, Team};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn twelve_event_fixture_flags() {
    let m = load_match(fixture("twelve_events.json")).unwrap();
    assert_eq!(m.events.len(), 12);
    let cfg = Config::default();
    let expected = std::fs::read_to_string(fixture("twelve_events.flags.tsv")).unwrap();
    let expected: Vec<Vec<&str>> = expected.lines().skip(1).map(|l| l.split('\t').collect()).collect();

    let eps = segment_episodes(&m);
    assert_eq!(eps.len(), 2);
    assert_eq!(eps[0].start, 100.0);
    assert_eq!(eps[0].events.len(), 6);
    assert_eq!(eps[1].start, 140.0);
    assert_eq!(eps[1].events.len(), 5);
    assert!(eps.iter().all(|e| e.shot().kind == EventKind::Shot));

    // The defending clearance between the shots belongs to no episode, so
    // flag it directly.
    let mut flags: Vec<_> = eps.iter().flat_map(|ep| flag_eligibility(ep, &cfg)).collect();
    flags.push(keeper_core::episodes::flag_event(&m.events[6], &cfg));
    flags.sort_by(|a, b| a.event_id.cmp(&b.event_id));
    assert_eq!(flags.len(), 12);
    for (f, row) in flags.iter().zip(&expected) {
        assert_eq!(f.event_id, row[0]);
        let colour = serde_json::to_value(f.color).unwrap();
        assert_eq!(colour, row[1], "{}", f.event_id);
        let reason = f.reason.map(|r| serde_json::to_value(r).unwrap());
        match reason {
            Some(r) => assert_eq!(r, row[2], "{}", f.event_id),
            None => assert_eq!(row[2], "", "{}", f.event_id),
        }
    }
    assert_eq!(flags.iter().filter(|f| f.color == FlagColor::Green).count(), 6);
}

#[test]
fn synthetic_matches_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let m = generate_synthetic(seed, 20);
        let path = dir.path().join(format!("{seed}.json"));
        std::fs::write(&path, m.to_json().unwrap()).unwrap();
        let back = load_match(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json().unwrap(), m.to_json().unwrap());
        for ep in segment_episodes(&back) {
            assert_eq!(ep.shot().kind, EventKind::Shot);
            assert_eq!(ep.shot().team, Team::Attacking);
            assert!(ep.duration() <= 15.0);
        }
    }
}

#[test]
fn unreadable_and_malformed_files() {
    assert!(matches!(load_match("/nonexistent/match.json"), Err(DataError::Io { .. })));
    let text = std::fs::read_to_string(fixture("twelve_events.json")).unwrap();
    let truncated = &text[..text.len() / 2];
    assert!(matches!(parse_match(truncated), Err(DataError::Syntax { .. })));
    let unknown = text.replacen("\"under_pressure\": false", "\"under_pressure\": false, \"xg\": 0.1", 1);
    assert!(matches!(parse_match(&unknown), Err(DataError::Syntax { .. })));
}
