use std::path::PathBuf;

use keeper_core::analysis::{analyze, decisions_for_match, render_svg};
use keeper_core::data::load_match;
use keeper_core::kinematics::Direction;
use keeper_core::{Config, PitchPoint};

fn fixture() -> keeper_core::Match {
    load_match(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/twelve_events.json")).unwrap()
}

#[test]
fn decisions_pair_green_events_with_a_known_previous_keeper() {
    let cfg = Config::default();
    let decisions = decisions_for_match(&fixture(), &cfg).unwrap();
    // e02, e06, e10, e11 and e12 are green with the keeper visible one event earlier.
    assert_eq!(decisions.len(), 5);
    let first = &decisions[0];
    assert_eq!(first.previous_position, PitchPoint::new(2.0, 0.0));
    assert_eq!(first.dt, 3.0);
    assert_eq!(first.actual_position, Some(PitchPoint::new(2.5, 0.5)));
    assert_eq!(first.actual_direction, Some(Direction::Angle(1)));
    // e05 -> e06: the keeper moved 0.36 m, under the stay threshold.
    assert_eq!(decisions[1].actual_direction, Some(Direction::Stay));
    for d in &decisions {
        assert_eq!(d.candidates.len(), 9);
        assert!(d.chosen().metric <= d.stay().metric);
    }
}

#[test]
fn report_histograms_are_distributions() {
    let cfg = Config::default();
    let r = analyze(&[fixture()], &cfg).unwrap();
    assert_eq!(r.episodes, 2);
    assert_eq!(r.histogram.decisions, 5);
    let sum = |v: &[keeper_core::evaluator::DirectionShare]| v.iter().map(|s| s.frequency).sum::<f64>();
    assert!((sum(&r.histogram.model) - 1.0).abs() < 1e-12);
    assert!((sum(r.histogram.actual.as_ref().unwrap()) - 1.0).abs() < 1e-12);
    assert!((0.0..=1.0).contains(&r.divergence.total_variation));
    assert_eq!(render_svg(&r).matches("<rect").count(), 18);
}
