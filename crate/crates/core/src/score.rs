//! The additive scoring contract: a derivation scores as the weighted sum of
//! its leaf supertag log-probabilities and the span scores of its internal
//! node labels, with unary chains looked up as single labels.

use std::collections::BTreeMap;

use crate::derivation::DerivNode;
use crate::error::{Error, Result};
use crate::grammar::GrammarTables;

/// Separator for unary-chain labels; forbidden inside category strings.
pub const CHAIN_SEP: char = '|';

pub fn encode_chain(labels: &[String]) -> String {
    labels.join("|")
}

pub fn decode_chain(label: &str) -> Vec<String> {
    label.split(CHAIN_SEP).map(|s| s.to_string()).collect()
}

/// Weights for the two score sources and the score of a (span, label) pair
/// absent from the chart. The default weights follow the equal weighting of
/// supertag and span scores; the missing-label default is strongly
/// disfavoured but finite so grammar constraints, not lookups, decide
/// structural viability.
#[derive(Debug, Clone, Copy)]
pub struct ScoreConfig {
    pub supertag_weight: f64,
    pub span_weight: f64,
    pub missing_score: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            supertag_weight: 1.0,
            span_weight: 1.0,
            missing_score: -1e4,
        }
    }
}

impl ScoreConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.supertag_weight.is_finite()
            && self.span_weight.is_finite()
            && self.missing_score.is_finite())
        {
            return Err(Error::Internal("score weights must be finite".into()));
        }
        Ok(())
    }
}

/// Per-span label scores in the log domain.
pub trait LabelScorer {
    fn label_score(&self, start: usize, end: usize, label: &str) -> Option<f64>;

    /// Weighted span contribution including the missing-label default.
    fn span_score(&self, start: usize, end: usize, label: &str, cfg: &ScoreConfig) -> f64 {
        cfg.span_weight
            * self
                .label_score(start, end, label)
                .unwrap_or(cfg.missing_score)
    }
}

/// Externally produced span scores for one sentence.
#[derive(Debug, Clone)]
pub struct ScoreChart {
    pub len: usize,
    entries: BTreeMap<(usize, usize, String), f64>,
}

impl ScoreChart {
    pub fn new(len: usize) -> ScoreChart {
        ScoreChart {
            len,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, start: usize, end: usize, label: &str, score: f64) -> Result<()> {
        if !(start < end && end <= self.len) {
            return Err(Error::Internal(format!(
                "span ({start},{end}) out of bounds for length {}",
                self.len
            )));
        }
        if self
            .entries
            .insert((start, end, label.to_string()), score)
            .is_some()
        {
            return Err(Error::Internal(format!(
                "duplicate score entry for ({start},{end},{label})"
            )));
        }
        Ok(())
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }
}

impl LabelScorer for ScoreChart {
    fn label_score(&self, start: usize, end: usize, label: &str) -> Option<f64> {
        self.entries
            .get(&(start, end, label.to_string()))
            .copied()
    }
}

/// Deterministic stand-in scorer when no span chart is supplied: a label
/// scores log(count / total) from the grammar tables, independent of span.
#[derive(Debug, Clone)]
pub struct FrequencyScorer {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyScorer {
    pub fn from_tables(tables: &GrammarTables) -> FrequencyScorer {
        let counts = tables.label_counts();
        let total = counts.values().sum();
        FrequencyScorer { counts, total }
    }
}

impl LabelScorer for FrequencyScorer {
    fn label_score(&self, _start: usize, _end: usize, label: &str) -> Option<f64> {
        let c = *self.counts.get(label)?;
        if c == 0 || self.total == 0 {
            return None;
        }
        Some((c as f64 / self.total as f64).ln())
    }
}

/// Parse a score-chart file: per sentence a header `n <length>`, then one
/// entry per line `start end label score`, sentences separated by blank
/// lines.
pub fn parse_score_file(text: &str, file: &str) -> Result<Vec<ScoreChart>> {
    let mut charts: Vec<ScoreChart> = Vec::new();
    let mut current: Option<ScoreChart> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            if let Some(c) = current.take() {
                charts.push(c);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(len_text) = line.strip_prefix("n ") {
            if let Some(c) = current.take() {
                charts.push(c);
            }
            let len: usize = len_text
                .trim()
                .parse()
                .map_err(|_| Error::format(file, ln + 1, "bad sentence length"))?;
            current = Some(ScoreChart::new(len));
            continue;
        }
        let chart = current
            .as_mut()
            .ok_or_else(|| Error::format(file, ln + 1, "entry before `n <length>` header"))?;
        let fields: Vec<&str> = line.split(' ').collect();
        let [start, end, label, score] = fields.as_slice() else {
            return Err(Error::format(file, ln + 1, "expected `start end label score`"));
        };
        let start: usize = start
            .parse()
            .map_err(|_| Error::format(file, ln + 1, "bad span start"))?;
        let end: usize = end
            .parse()
            .map_err(|_| Error::format(file, ln + 1, "bad span end"))?;
        let score: f64 = score
            .parse()
            .map_err(|_| Error::format(file, ln + 1, format!("non-numeric score {score:?}")))?;
        chart
            .insert(start, end, label, score)
            .map_err(|e| Error::format(file, ln + 1, e.to_string()))?;
    }
    if let Some(c) = current.take() {
        charts.push(c);
    }
    Ok(charts)
}

pub fn write_score_file(charts: &[ScoreChart]) -> String {
    let mut out = String::new();
    for (k, chart) in charts.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&format!("n {}\n", chart.len));
        for ((start, end, label), score) in &chart.entries {
            out.push_str(&format!("{start} {end} {label} {score}\n"));
        }
    }
    out
}

/// Flat recomputation of a derivation's score: the weighted sum of leaf
/// log-probabilities plus the span score of every internal label stack.
/// `leaf_logprob(index, category key)` supplies the supertag scores.
pub fn score_derivation_flat(
    deriv: &DerivNode,
    leaf_logprob: &dyn Fn(usize, &str) -> f64,
    scorer: &dyn LabelScorer,
    cfg: &ScoreConfig,
) -> f64 {
    let mut total = 0.0;
    for leaf in deriv.leaves() {
        if let DerivNode::Leaf { cat, index, .. } = leaf {
            total += cfg.supertag_weight * leaf_logprob(*index, &cat.print_erased());
        }
    }
    for (start, end, label) in deriv.span_stacks() {
        total += scorer.span_score(start, end, &label, cfg);
    }
    total
}
