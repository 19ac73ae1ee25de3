//! Default-model regression values. Run with `KEEPER_BLESS=1` to rewrite the
//! golden file after a deliberate change to the default weights.

use keeper_core::data::{GameState, Team};
use keeper_core::evaluator::evaluate_shot;
use keeper_core::probability::{block_features, p_block, BlockParams, ProbabilityModel};
use keeper_core::{Config, GoalPoint, PitchPoint};

const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/default_models.tsv");

fn pt(x: f64, y: f64) -> PitchPoint {
    PitchPoint::new(x, y)
}

fn scene(shooter: PitchPoint, defenders: Vec<PitchPoint>, under_pressure: bool) -> GameState {
    GameState {
        goalkeeper: None,
        defenders,
        attackers: vec![shooter],
        ball_carrier: Some(0),
        under_pressure,
        possession: Team::Attacking,
    }
}

struct Case {
    name: &'static str,
    gk: PitchPoint,
    state: GameState,
    target: GoalPoint,
}

fn cases() -> Vec<Case> {
    let low_far = GoalPoint::new(-3.46, 0.24);
    let high_near = GoalPoint::new(3.46, 2.20);
    let mid_right = GoalPoint::new(-3.46, 1.22);
    vec![
        Case { name: "central_open", gk: pt(2.0, 0.0), state: scene(pt(16.0, 0.0), vec![], false), target: low_far },
        Case { name: "keeper_on_line", gk: pt(0.0, 0.0), state: scene(pt(16.0, 0.0), vec![], false), target: high_near },
        Case { name: "keeper_rushing", gk: pt(8.0, 0.5), state: scene(pt(12.0, 1.0), vec![], false), target: mid_right },
        Case { name: "wide_angle", gk: pt(1.5, 2.5), state: scene(pt(10.0, 15.0), vec![], false), target: low_far },
        Case { name: "long_range", gk: pt(3.0, -0.5), state: scene(pt(30.0, -6.0), vec![], false), target: high_near },
        Case {
            name: "single_blocker",
            gk: pt(2.0, 0.0),
            state: scene(pt(18.0, 0.0), vec![pt(9.0, -1.6)], false),
            target: low_far,
        },
        Case {
            name: "crowded_box",
            gk: pt(2.5, 0.0),
            state: scene(
                pt(17.0, 3.0),
                vec![pt(12.0, 2.0), pt(10.0, 0.5), pt(8.0, -1.0), pt(6.0, 4.0), pt(14.0, -3.0)],
                false,
            ),
            target: mid_right,
        },
        Case {
            name: "pressured_close",
            gk: pt(2.0, 1.0),
            state: scene(pt(8.0, 2.0), vec![pt(8.5, 2.5)], true),
            target: high_near,
        },
        Case {
            name: "off_line_keeper",
            gk: pt(2.0, -3.0),
            state: scene(pt(16.0, 4.0), vec![pt(4.0, 2.0)], false),
            target: high_near,
        },
        Case {
            name: "edge_of_zone",
            gk: pt(5.0, 0.0),
            state: scene(pt(31.0, 0.0), vec![pt(20.0, 1.0), pt(20.0, -1.0)], false),
            target: mid_right,
        },
    ]
}

fn render() -> String {
    let cfg = Config::default();
    let mut out = String::from("scenario\tp_block\tp_save\tp_goal\n");
    for c in cases() {
        let shooter = c.state.shooter().unwrap();
        let ev = evaluate_shot(c.gk, shooter, c.target, &c.state, &cfg).unwrap();
        out += &format!("{}\t{:?}\t{:?}\t{:?}\n", c.name, ev.p_block, ev.p_save, ev.p_goal);
    }
    let open = block_features(pt(16.0, 4.0), GoalPoint::new(-3.46, 0.24), &scene(pt(16.0, 4.0), vec![], false), 24.0, &BlockParams::default())
        .unwrap();
    let pb = p_block(&open, &ProbabilityModel::default_block()).unwrap();
    out += &format!("no_defenders_block\t{pb:?}\t-\t-\n");
    out
}

fn parse(text: &str) -> Vec<(String, Vec<Option<f64>>)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let mut cols = l.split('\t');
            let name = cols.next().unwrap().to_string();
            (name, cols.map(|c| c.parse().ok()).collect())
        })
        .collect()
}

#[test]
fn default_models_match_golden_file() {
    let fresh = render();
    if std::env::var_os("KEEPER_BLESS").is_some() {
        std::fs::write(GOLDEN, &fresh).unwrap();
    }
    let stored = std::fs::read_to_string(GOLDEN).expect("golden file present");
    let (want, got) = (parse(&stored), parse(&fresh));
    assert_eq!(want.len(), 11);
    assert_eq!(want.len(), got.len());
    for ((wn, wv), (gn, gv)) in want.iter().zip(&got) {
        assert_eq!(wn, gn);
        for (w, g) in wv.iter().zip(gv) {
            match (w, g) {
                (Some(w), Some(g)) => assert!((w - g).abs() < 1e-12, "{wn}: {w} vs {g}"),
                (None, None) => {}
                _ => panic!("{wn}: column mismatch"),
            }
        }
    }
}

#[test]
fn default_block_is_low_without_defenders() {
    let row = parse(&render()).pop().unwrap();
    assert_eq!(row.0, "no_defenders_block");
    assert!(row.1[0].unwrap() < 0.05);
}
