//! Plain-text renderings for the command line.

use std::fmt::Write;

use keeper_core::analysis::AnalysisReport;
use keeper_core::episodes::{Episode, FlagColor};
use keeper_core::Config;

use crate::api::{frame_for_event, Frame, Unprocessable};

pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let h = &r.histogram;
    writeln!(out, "matches: {}", r.matches.join(", ")).unwrap();
    writeln!(out, "episodes: {}  eligible decisions: {}", r.episodes, h.decisions).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:<14} {:>8} {:>8}", "direction", "model", "actual").unwrap();
    for row in &r.divergence.rows {
        writeln!(out, "{:<14} {:>8.3} {:>8.3}", row.label, row.model, row.actual).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "toward goal line: model {:.3}  actual {:.3}", h.model_backward_share, h.actual_backward_share.unwrap_or(0.0))
        .unwrap();
    writeln!(out, "total variation distance: {:.3}", r.divergence.total_variation).unwrap();
    out
}

/// One frame per event of the episode.
pub fn episode_frames(ep: &Episode, cfg: &Config) -> Result<Vec<Frame>, Unprocessable> {
    (0..ep.events.len()).map(|i| frame_for_event(ep, i, ep.events[i].timestamp, cfg)).collect()
}

pub fn episode_text(ep: &Episode, frames: &[Frame]) -> String {
    let mut out = String::new();
    writeln!(out, "{}  {:.2}s - {:.2}s  ({} events)", ep.id, ep.start, ep.end, ep.events.len()).unwrap();
    for f in frames {
        let e = &f.event;
        let kind = serde_json::to_value(e.kind).unwrap();
        let lead = format!("{:>8.2}  {:<10} {:<9}", e.timestamp, e.id, kind.as_str().unwrap_or("?"));
        match (&f.flag.color, &f.evaluation) {
            (FlagColor::Green, Some(ev)) => {
                let w = ev.worst_target;
                let mut line = format!("{lead} green  metric {:.3}  weakest [{:.2}, {:.2}]", ev.metric, w.y, w.z);
                if let Some(s) = &f.suggestion {
                    write!(line, "  model {} ({:.3})", s.chosen_direction.label(), s.chosen().metric).unwrap();
                    if let Some(a) = s.actual_direction {
                        write!(line, "  keeper {}", a.label()).unwrap();
                    }
                }
                writeln!(out, "{line}").unwrap();
            }
            _ => {
                let reason = f.flag.reason.map(|r| serde_json::to_value(r).unwrap());
                let reason = reason.as_ref().and_then(|r| r.as_str()).unwrap_or("");
                writeln!(out, "{lead} black  {reason}").unwrap();
            }
        }
    }
    out
}
