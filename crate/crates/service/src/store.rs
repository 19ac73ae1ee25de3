//! Matches loaded at startup, indexed by match and episode id.

use std::collections::HashMap;

use keeper_core::episodes::{flag_eligibility, segment_episodes, Episode, EventFlag, FlagColor};
use keeper_core::{Config, Match};
use serde::Serialize;

pub struct LoadedMatch {
    pub data: Match,
    pub episodes: Vec<Episode>,
}

#[derive(Default)]
pub struct Store {
    matches: Vec<LoadedMatch>,
    match_index: HashMap<String, usize>,
    episode_index: HashMap<String, (usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchSummary {
    pub match_id: String,
    pub events: usize,
    pub episodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpisodeSummary {
    pub id: String,
    pub match_id: String,
    pub start: f64,
    pub end: f64,
    pub duration: f64,
    pub events: usize,
    pub green_events: usize,
    pub shot_event_id: String,
}

impl Store {
    pub fn new(matches: Vec<Match>) -> Result<Self, String> {
        let mut store = Store::default();
        for m in matches {
            let mi = store.matches.len();
            if store.match_index.insert(m.id().to_string(), mi).is_some() {
                return Err(format!("duplicate match id {}", m.id()));
            }
            let episodes = segment_episodes(&m);
            for (ei, ep) in episodes.iter().enumerate() {
                store.episode_index.insert(ep.id.clone(), (mi, ei));
            }
            store.matches.push(LoadedMatch { data: m, episodes });
        }
        Ok(store)
    }

    pub fn matches(&self) -> &[LoadedMatch] {
        &self.matches
    }

    pub fn get_match(&self, id: &str) -> Option<&LoadedMatch> {
        self.match_index.get(id).map(|&i| &self.matches[i])
    }

    pub fn get_episode(&self, id: &str) -> Option<&Episode> {
        self.episode_index.get(id).map(|&(m, e)| &self.matches[m].episodes[e])
    }
}

pub fn match_summary(m: &LoadedMatch) -> MatchSummary {
    MatchSummary { match_id: m.data.id().to_string(), events: m.data.events.len(), episodes: m.episodes.len() }
}

pub fn episode_summary(ep: &Episode, flags: &[EventFlag]) -> EpisodeSummary {
    EpisodeSummary {
        id: ep.id.clone(),
        match_id: ep.match_id.clone(),
        start: ep.start,
        end: ep.end,
        duration: ep.duration(),
        events: ep.events.len(),
        green_events: flags.iter().filter(|f| f.color == FlagColor::Green).count(),
        shot_event_id: ep.shot().id.clone(),
    }
}

pub fn summarize(ep: &Episode, cfg: &Config) -> EpisodeSummary {
    episode_summary(ep, &flag_eligibility(ep, cfg))
}
