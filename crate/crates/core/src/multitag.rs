//! Multitagging front end: turns per-word supertag probability
//! distributions into pruned candidate sets using the probability threshold
//! gamma and the per-word cap alpha.

use crate::error::{Error, Result};

/// One candidate lexical category with its natural-log probability.
#[derive(Debug, Clone, PartialEq)]
pub struct TagEntry {
    pub cat: String,
    pub logprob: f64,
}

/// Per-token supertag distribution, sorted by descending probability.
#[derive(Debug, Clone)]
pub struct TagDistribution {
    pub index: usize,
    pub word: String,
    pub entries: Vec<TagEntry>,
}

impl TagDistribution {
    /// Sort descending (ties broken by category string) and check the
    /// distribution invariants: entries non-empty, probabilities in (0, 1],
    /// total mass at most 1 + 1e-6.
    pub fn normalize(mut self) -> Result<TagDistribution> {
        if self.entries.is_empty() {
            return Err(Error::Alignment(format!(
                "token {} {:?} has an empty tag distribution",
                self.index, self.word
            )));
        }
        self.entries.sort_by(|a, b| {
            b.logprob
                .partial_cmp(&a.logprob)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.cat.cmp(&b.cat))
        });
        let mut sum = 0.0;
        for e in &self.entries {
            let p = e.logprob.exp();
            if !e.logprob.is_finite() || e.logprob > 0.0 || p <= 0.0 {
                return Err(Error::Format {
                    file: "tags".into(),
                    line: 0,
                    msg: format!(
                        "log-probability {} for {:?} on token {} is not in (0,1]",
                        e.logprob, e.cat, self.index
                    ),
                });
            }
            sum += p;
        }
        if sum > 1.0 + 1e-6 {
            return Err(Error::Format {
                file: "tags".into(),
                line: 0,
                msg: format!("token {} probabilities sum to {sum}", self.index),
            });
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneMode {
    /// keep categories with probability >= gamma
    Absolute,
    /// keep categories with probability >= gamma * best probability
    RelativeToBest,
}

impl PruneMode {
    pub fn from_token(s: &str) -> Option<PruneMode> {
        match s {
            "absolute" => Some(PruneMode::Absolute),
            "relative" => Some(PruneMode::RelativeToBest),
            _ => None,
        }
    }
}

/// Pruning configuration; the paper's operating point is gamma = 0.0005 with
/// alpha = 10.
#[derive(Debug, Clone, Copy)]
pub struct PruneConfig {
    pub gamma: f64,
    pub alpha: usize,
    pub mode: PruneMode,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            gamma: 0.0005,
            alpha: 10,
            mode: PruneMode::Absolute,
        }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Internal(format!("gamma {} not in (0,1]", self.gamma)));
        }
        if self.alpha < 1 {
            return Err(Error::Internal("alpha must be at least 1".into()));
        }
        Ok(())
    }
}

/// Prune one distribution: threshold first, then truncate to the top alpha;
/// the argmax entry is always kept. Output preserves descending order.
pub fn prune(dist: &TagDistribution, cfg: &PruneConfig) -> Vec<TagEntry> {
    let threshold = match cfg.mode {
        PruneMode::Absolute => cfg.gamma,
        PruneMode::RelativeToBest => cfg.gamma * dist.entries[0].logprob.exp(),
    };
    let mut kept: Vec<TagEntry> = dist
        .entries
        .iter()
        .take_while(|e| e.logprob.exp() >= threshold)
        .cloned()
        .collect();
    if kept.is_empty() {
        kept.push(dist.entries[0].clone());
    }
    kept.truncate(cfg.alpha);
    kept
}

/// Mean pruned-set size and the fraction of tokens whose pruned set contains
/// the gold category, over a flat token sequence.
pub fn ambiguity_and_accuracy(
    dists: &[TagDistribution],
    gold: &[String],
    cfg: &PruneConfig,
) -> Result<(f64, f64)> {
    if dists.len() != gold.len() {
        return Err(Error::Alignment(format!(
            "{} tag distributions vs {} gold categories",
            dists.len(),
            gold.len()
        )));
    }
    if dists.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut total = 0usize;
    let mut correct = 0usize;
    for (d, g) in dists.iter().zip(gold) {
        let kept = prune(d, cfg);
        total += kept.len();
        if kept.iter().any(|e| &e.cat == g) {
            correct += 1;
        }
    }
    Ok((
        total as f64 / dists.len() as f64,
        correct as f64 / dists.len() as f64,
    ))
}

/// Parse a tag-distribution file: sentences separated by blank lines, one
/// token per line: `index TAB word TAB cat:logprob SPACE cat:logprob ...`.
pub fn parse_tag_file(text: &str, file: &str) -> Result<Vec<Vec<TagDistribution>>> {
    let mut sentences: Vec<Vec<TagDistribution>> = Vec::new();
    let mut current: Vec<TagDistribution> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(index), Some(word), Some(tags)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::format(file, ln + 1, "expected 3 tab-separated fields"));
        };
        let index: usize = index
            .parse()
            .map_err(|_| Error::format(file, ln + 1, "bad token index"))?;
        if index != current.len() {
            return Err(Error::format(
                file,
                ln + 1,
                format!("token index {index}, expected {}", current.len()),
            ));
        }
        let mut entries = Vec::new();
        for pair in tags.split(' ') {
            if pair.is_empty() {
                continue;
            }
            let (cat, lp) = pair
                .rsplit_once(':')
                .ok_or_else(|| Error::format(file, ln + 1, format!("bad tag entry {pair:?}")))?;
            let logprob: f64 = lp
                .parse()
                .map_err(|_| Error::format(file, ln + 1, format!("bad log-probability {lp:?}")))?;
            entries.push(TagEntry {
                cat: cat.to_string(),
                logprob,
            });
        }
        let dist = TagDistribution {
            index,
            word: word.to_string(),
            entries,
        }
        .normalize()
        .map_err(|e| Error::format(file, ln + 1, e.to_string()))?;
        current.push(dist);
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

pub fn write_tag_file(sentences: &[Vec<TagDistribution>]) -> String {
    let mut out = String::new();
    for (k, sent) in sentences.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for d in sent {
            out.push_str(&d.index.to_string());
            out.push('\t');
            out.push_str(&d.word);
            out.push('\t');
            for (i, e) in d.entries.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&e.cat);
                out.push(':');
                out.push_str(&e.logprob.to_string());
            }
            out.push('\n');
        }
    }
    out
}
