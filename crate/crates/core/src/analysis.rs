//! Model-versus-keeper move analytics over whole matches.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::data::Match;
use crate::episodes::{black_reason, segment_episodes, Episode};
use crate::evaluator::{
    best_move, compare_model_vs_actual, move_distribution, DivergenceReport, EvalError, MoveDecision,
    MoveHistogram,
};

/// One decision per eligible event whose predecessor in the episode shows
/// the keeper. The previous keeper position seeds the run model, the time
/// gap sets its radius, and the keeper's observed position is the actual
/// move.
pub fn decisions_for_episode(ep: &Episode, cfg: &Config) -> Result<Vec<MoveDecision>, EvalError> {
    let mut out = Vec::new();
    for pair in ep.events.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        if black_reason(cur, cfg).is_some() {
            continue;
        }
        let Some(prev_gk) = prev.freeze_frame.as_ref().and_then(|f| f.goalkeeper) else {
            continue;
        };
        let state = cur.freeze_frame.as_ref().expect("green events carry a freeze frame");
        let actual = state.goalkeeper.expect("green events show the keeper");
        let dt = cur.timestamp - prev.timestamp;
        out.push(best_move(prev_gk, dt, state, cfg)?.with_actual(actual, cfg.analysis.stay_threshold));
    }
    Ok(out)
}

pub fn decisions_for_match(m: &Match, cfg: &Config) -> Result<Vec<MoveDecision>, EvalError> {
    let mut out = Vec::new();
    for ep in segment_episodes(m) {
        out.extend(decisions_for_episode(&ep, cfg)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub matches: Vec<String>,
    pub episodes: usize,
    pub histogram: MoveHistogram,
    pub divergence: DivergenceReport,
}

pub fn analyze(matches: &[Match], cfg: &Config) -> Result<AnalysisReport, EvalError> {
    let mut decisions = Vec::new();
    let mut episodes = 0;
    for m in matches {
        let eps = segment_episodes(m);
        episodes += eps.len();
        for ep in &eps {
            decisions.extend(decisions_for_episode(ep, cfg)?);
        }
    }
    Ok(AnalysisReport {
        matches: matches.iter().map(|m| m.id().to_string()).collect(),
        episodes,
        histogram: move_distribution(&decisions)?,
        divergence: compare_model_vs_actual(&decisions)?,
    })
}

/// Grouped bar chart of model and observed move frequencies.
pub fn render_svg(report: &AnalysisReport) -> String {
    let rows = &report.divergence.rows;
    let (w, h, pad) = (720.0, 360.0, 40.0);
    let band = (w - 2.0 * pad) / rows.len() as f64;
    let peak = rows.iter().map(|r| r.model.max(r.actual)).fold(0.0, f64::max).max(1e-9);
    let scale = (h - 2.0 * pad - 20.0) / peak;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    svg.push_str(&format!(
        "<text x=\"{pad}\" y=\"20\">model (blue) vs observed (red), TV distance {:.3}</text>\n",
        report.divergence.total_variation
    ));
    let base = h - pad;
    for (i, r) in rows.iter().enumerate() {
        let x = pad + i as f64 * band;
        for (j, (v, colour)) in [(r.model, "#3465a4"), (r.actual, "#cc0000")].into_iter().enumerate() {
            let bh = v * scale;
            svg.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"{colour}\"/>\n",
                x + 6.0 + j as f64 * (band - 12.0) / 2.0,
                base - bh,
                (band - 12.0) / 2.0,
                bh
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            x + band / 2.0,
            base + 16.0,
            r.label
        ));
    }
    svg.push_str(&format!("<line x1=\"{pad}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"black\"/>\n", w - pad));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::generate_synthetic;

    #[test]
    fn report_on_small_corpus() {
        let cfg = Config::default();
        let m = generate_synthetic(1, 12);
        let report = analyze(&[m], &cfg).unwrap();
        assert_eq!(report.episodes, 12);
        let total: f64 = report.histogram.model.iter().map(|s| s.frequency).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let svg = render_svg(&report);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
