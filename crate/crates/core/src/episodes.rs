//! Episode segmentation and per-event eligibility flags.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::data::{Event, EventKind, Match, Team};

/// Longest buildup kept before a shot, seconds.
pub const EPISODE_WINDOW: f64 = 15.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub id: String,
    pub match_id: String,
    pub events: Vec<Event>,
    pub start: f64,
    pub end: f64,
}

impl Episode {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn shot(&self) -> &Event {
        self.events.last().expect("episodes are never empty")
    }

    /// Last event at or before `t`.
    pub fn event_at(&self, t: f64) -> Option<(usize, &Event)> {
        self.events.iter().enumerate().rev().find(|(_, e)| e.timestamp <= t)
    }
}

/// Splits a match into shot episodes.
///
/// Each attacking shot opens an episode that extends backward over the
/// contiguous run of attacking-team events, at most [`EPISODE_WINDOW`]
/// seconds, and never past the previous shot.
pub fn segment_episodes(m: &Match) -> Vec<Episode> {
    let mut out = Vec::new();
    let mut floor_index = 0;
    for (i, e) in m.events.iter().enumerate() {
        if e.kind != EventKind::Shot {
            continue;
        }
        if e.team == Team::Attacking {
            let earliest = e.timestamp - EPISODE_WINDOW;
            let mut start = i;
            while start > floor_index {
                let p = &m.events[start - 1];
                if p.team != Team::Attacking || p.timestamp < earliest {
                    break;
                }
                start -= 1;
            }
            let events = m.events[start..=i].to_vec();
            out.push(Episode {
                id: format!("{}-ep{:03}", m.id(), out.len() + 1),
                match_id: m.id().to_string(),
                start: events[0].timestamp,
                end: e.timestamp,
                events,
            });
        }
        floor_index = i + 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagColor {
    Green,
    Black,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlackReason {
    NoFreezeFrame,
    KeeperUnknown,
    DefendingPossession,
    OutsideZone,
    NoBallCarrier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventFlag {
    pub event_id: String,
    pub color: FlagColor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<BlackReason>,
}

/// Why the position model cannot be applied to `e`, if it cannot.
pub fn black_reason(e: &Event, cfg: &Config) -> Option<BlackReason> {
    let Some(ff) = &e.freeze_frame else {
        return Some(BlackReason::NoFreezeFrame);
    };
    if ff.goalkeeper.is_none() {
        return Some(BlackReason::KeeperUnknown);
    }
    if e.team != Team::Attacking {
        return Some(BlackReason::DefendingPossession);
    }
    if !(e.ball.x > 0.0 && e.ball.x <= cfg.zone_limit()) {
        return Some(BlackReason::OutsideZone);
    }
    if ff.shooter().is_none() {
        return Some(BlackReason::NoBallCarrier);
    }
    None
}

pub fn flag_event(e: &Event, cfg: &Config) -> EventFlag {
    let reason = black_reason(e, cfg);
    EventFlag {
        event_id: e.id.clone(),
        color: if reason.is_none() { FlagColor::Green } else { FlagColor::Black },
        reason,
    }
}

pub fn flag_eligibility(episode: &Episode, cfg: &Config) -> Vec<EventFlag> {
    episode.events.iter().map(|e| flag_event(e, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{GameState, MatchMeta};
    use crate::geometry::PitchPoint;

    fn frame(team: Team) -> GameState {
        GameState {
            goalkeeper: Some(PitchPoint::new(2.0, 0.0)),
            defenders: vec![PitchPoint::new(10.0, 1.0)],
            attackers: vec![PitchPoint::new(20.0, 0.0)],
            ball_carrier: Some(0),
            under_pressure: false,
            possession: team,
        }
    }

    fn ev(id: &str, t: f64, kind: EventKind, team: Team, x: f64) -> Event {
        let mut ff = frame(team);
        ff.attackers[0] = PitchPoint::new(x, 0.0);
        Event {
            id: id.into(),
            timestamp: t,
            kind,
            team,
            ball: PitchPoint::new(x, 0.0),
            under_pressure: false,
            freeze_frame: Some(ff),
        }
    }

    fn game(events: Vec<Event>) -> Match {
        Match { meta: MatchMeta::new("m"), events }
    }

    #[test]
    fn window_caps_long_buildup() {
        let mut events: Vec<Event> =
            (0..=20).map(|k| ev(&format!("p{k}"), k as f64, EventKind::Pass, Team::Attacking, 25.0)).collect();
        events.push(ev("s", 20.5, EventKind::Shot, Team::Attacking, 18.0));
        let eps = segment_episodes(&game(events));
        assert_eq!(eps.len(), 1);
        assert!(eps[0].duration() <= EPISODE_WINDOW);
        assert_eq!(eps[0].start, 6.0);
        assert_eq!(eps[0].shot().id, "s");
    }

    #[test]
    fn consecutive_shots_do_not_overlap() {
        let events = vec![
            ev("a", 0.0, EventKind::Pass, Team::Attacking, 25.0),
            ev("s1", 3.0, EventKind::Shot, Team::Attacking, 18.0),
            ev("b", 5.0, EventKind::Carry, Team::Attacking, 12.0),
            ev("s2", 8.0, EventKind::Shot, Team::Attacking, 10.0),
        ];
        let eps = segment_episodes(&game(events));
        assert_eq!(eps.len(), 2);
        assert_eq!(eps[1].events.iter().map(|e| e.id.as_str()).collect::<Vec<_>>(), ["b", "s2"]);
        assert!(eps[1].start > eps[0].end);
    }

    #[test]
    fn possession_change_starts_episode() {
        let events = vec![
            ev("a", 0.0, EventKind::Pass, Team::Attacking, 25.0),
            ev("c", 2.0, EventKind::Clearance, Team::Defending, 20.0),
            ev("b", 4.0, EventKind::Pass, Team::Attacking, 22.0),
            ev("s", 6.0, EventKind::Shot, Team::Attacking, 15.0),
        ];
        let eps = segment_episodes(&game(events));
        assert_eq!(eps[0].events.len(), 2);
        assert_eq!(eps[0].events[0].id, "b");
    }

    #[test]
    fn shotless_and_defending_shots() {
        assert!(segment_episodes(&game(vec![ev("a", 0.0, EventKind::Pass, Team::Attacking, 25.0)])).is_empty());
        let events = vec![ev("a", 0.0, EventKind::Shot, Team::Defending, 25.0)];
        assert!(segment_episodes(&game(events)).is_empty());
    }

    #[test]
    fn flag_rules() {
        let cfg = Config::default();
        let green = ev("g", 1.0, EventKind::Pass, Team::Attacking, 20.0);
        assert_eq!(flag_event(&green, &cfg).color, FlagColor::Green);
        let far = ev("f", 1.0, EventKind::Pass, Team::Attacking, 40.0);
        assert_eq!(black_reason(&far, &cfg), Some(BlackReason::OutsideZone));
        let edge = ev("e", 1.0, EventKind::Pass, Team::Attacking, 31.5);
        assert_eq!(black_reason(&edge, &cfg), None);
        let mut bare = green.clone();
        bare.freeze_frame = None;
        assert_eq!(black_reason(&bare, &cfg), Some(BlackReason::NoFreezeFrame));
        let mut blind = green.clone();
        blind.freeze_frame.as_mut().unwrap().goalkeeper = None;
        assert_eq!(black_reason(&blind, &cfg), Some(BlackReason::KeeperUnknown));
        let theirs = ev("d", 1.0, EventKind::Pass, Team::Defending, 20.0);
        assert_eq!(black_reason(&theirs, &cfg), Some(BlackReason::DefendingPossession));
        let mut loose = green.clone();
        loose.freeze_frame.as_mut().unwrap().ball_carrier = None;
        assert_eq!(black_reason(&loose, &cfg), Some(BlackReason::NoBallCarrier));
    }
}
