//! CKY chart with per-cell beams: finds the highest-scoring legal CCG
//! derivation, falling back to the skimmer when no spanning analysis exists
//! or the chart budget is exhausted.

use std::rc::Rc;
use std::time::Instant;

use rayon::prelude::*;

use crate::dependencies::HeadedItem;
use crate::derivation::DerivNode;
use crate::error::{Error, Result};
use crate::grammar::{
    apply_binary, apply_unary, BinaryRuleKind, GrammarTables, RuleMode, UnaryRuleKind,
};
use crate::markedup::{Dependency, MarkedupTable};
use crate::multitag::TagEntry;
use crate::score::{FrequencyScorer, LabelScorer, ScoreChart, ScoreConfig};

#[derive(Debug, Clone, Copy)]
pub struct DecodeConfig {
    pub beam: usize,
    pub max_chart_items: usize,
    pub unary_depth: usize,
    pub any_root: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            beam: 32,
            max_chart_items: 1_000_000,
            unary_depth: 2,
            any_root: false,
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beam < 1 {
            return Err(Error::Internal("beam width must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RuleRef {
    Lex,
    Unary(UnaryRuleKind),
    Binary(BinaryRuleKind),
}

impl RuleRef {
    fn ord(self) -> u8 {
        match self {
            RuleRef::Lex => 0,
            RuleRef::Unary(UnaryRuleKind::TypeRaising) => 1,
            RuleRef::Unary(UnaryRuleKind::TypeChanging) => 2,
            RuleRef::Binary(BinaryRuleKind::ForwardApplication) => 3,
            RuleRef::Binary(BinaryRuleKind::BackwardApplication) => 4,
            RuleRef::Binary(BinaryRuleKind::ForwardComposition) => 5,
            RuleRef::Binary(BinaryRuleKind::BackwardComposition) => 6,
            RuleRef::Binary(BinaryRuleKind::BackwardCrossedComposition) => 7,
            RuleRef::Binary(BinaryRuleKind::TreebankBinary) => 8,
        }
    }
}

struct ChartItem {
    start: usize,
    end: usize,
    headed: HeadedItem,
    /// erased label stack over this span; empty for a bare leaf
    chain: Vec<String>,
    unary_depth: usize,
    score: f64,
    span_contrib: f64,
    rule: RuleRef,
    children: Vec<Rc<ChartItem>>,
    filled: Vec<Dependency>,
    word: String,
}

impl ChartItem {
    fn to_deriv(&self) -> DerivNode {
        match self.rule {
            RuleRef::Lex => DerivNode::Leaf {
                cat: self.headed.cat.clone(),
                word: self.word.clone(),
                index: self.start,
            },
            RuleRef::Unary(kind) => DerivNode::Unary {
                cat: self.headed.cat.clone(),
                kind,
                child: Box::new(self.children[0].to_deriv()),
            },
            RuleRef::Binary(kind) => DerivNode::Binary {
                cat: self.headed.cat.clone(),
                kind,
                left: Box::new(self.children[0].to_deriv()),
                right: Box::new(self.children[1].to_deriv()),
            },
        }
    }

    fn collect_deps(&self, out: &mut Vec<Dependency>) {
        for c in &self.children {
            c.collect_deps(out);
        }
        out.extend(self.filled.iter().cloned());
    }
}

/// Total deterministic order: score (descending), then a structural
/// tie-break on category string, rule kind, left-child span end, and
/// children recursively.
fn cmp_items(a: &ChartItem, b: &ChartItem) -> std::cmp::Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| cmp_structure(a, b))
}

fn cmp_structure(a: &ChartItem, b: &ChartItem) -> std::cmp::Ordering {
    a.headed
        .cat_key
        .cmp(&b.headed.cat_key)
        .then_with(|| a.rule.ord().cmp(&b.rule.ord()))
        .then_with(|| {
            let ea = a.children.first().map_or(0, |c| c.end);
            let eb = b.children.first().map_or(0, |c| c.end);
            ea.cmp(&eb)
        })
        .then_with(|| a.children.len().cmp(&b.children.len()))
        .then_with(|| {
            for (ca, cb) in a.children.iter().zip(&b.children) {
                let o = cmp_structure(ca, cb);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// The analysis returned for one sentence: a full derivation, or an ordered
/// sequence of fragments when the skimmer ran.
#[derive(Debug, Clone)]
pub struct ParseResult {
    pub skimmed: bool,
    pub derivations: Vec<DerivNode>,
    pub dependencies: Vec<Dependency>,
    /// lexical category per token of the returned analysis
    pub leaf_cats: Vec<String>,
    pub score: f64,
}

struct Chart {
    n: usize,
    cells: Vec<Vec<Rc<ChartItem>>>,
    items: usize,
}

impl Chart {
    fn new(n: usize) -> Chart {
        Chart {
            n,
            cells: vec![Vec::new(); (n + 1) * (n + 1)],
            items: 0,
        }
    }

    fn idx(&self, start: usize, end: usize) -> usize {
        start * (self.n + 1) + end
    }

    fn cell(&self, start: usize, end: usize) -> &[Rc<ChartItem>] {
        &self.cells[self.idx(start, end)]
    }
}

/// Close a batch of same-span items under the unary rules up to the depth
/// limit, rescoring the span label stack as a single chained label.
fn unary_closure(
    batch: Vec<ChartItem>,
    tables: &GrammarTables,
    scorer: &dyn LabelScorer,
    dcfg: &DecodeConfig,
    scfg: &ScoreConfig,
    budget: &mut usize,
) -> Vec<ChartItem> {
    let mut out: Vec<ChartItem> = Vec::new();
    let mut queue: Vec<Rc<ChartItem>> = Vec::new();
    for item in batch {
        queue.push(Rc::new(item));
    }
    let mut qi = 0;
    while qi < queue.len() {
        let item = Rc::clone(&queue[qi]);
        qi += 1;
        if item.unary_depth < dcfg.unary_depth {
            for app in apply_unary(&item.headed.cat, tables) {
                let mut chain = item.chain.clone();
                chain.push(app.result.print_erased());
                let label = chain.join("|");
                let span_contrib = scorer.span_score(item.start, item.end, &label, scfg);
                let headed = item.headed.unary(app.kind, &app.result);
                *budget = budget.saturating_sub(1);
                queue.push(Rc::new(ChartItem {
                    start: item.start,
                    end: item.end,
                    headed,
                    chain,
                    unary_depth: item.unary_depth + 1,
                    score: item.score - item.span_contrib + span_contrib,
                    span_contrib,
                    rule: RuleRef::Unary(app.kind),
                    children: vec![Rc::clone(&item)],
                    filled: Vec::new(),
                    word: String::new(),
                }));
            }
        }
    }
    for item in queue {
        out.push(Rc::try_unwrap(item).unwrap_or_else(|rc| ChartItem {
            start: rc.start,
            end: rc.end,
            headed: rc.headed.clone(),
            chain: rc.chain.clone(),
            unary_depth: rc.unary_depth,
            score: rc.score,
            span_contrib: rc.span_contrib,
            rule: rc.rule,
            children: rc.children.clone(),
            filled: rc.filled.clone(),
            word: rc.word.clone(),
        }));
    }
    out
}

/// Decode one sentence: fill cells bottom-up, keep each cell's top-k, and
/// return the best root-policy item; fall back to the skimmer when no
/// spanning analysis exists or the chart budget is exceeded.
pub fn decode(
    words: &[String],
    tag_sets: &[Vec<TagEntry>],
    tables: &GrammarTables,
    markedup: &MarkedupTable,
    scorer: &dyn LabelScorer,
    dcfg: &DecodeConfig,
    scfg: &ScoreConfig,
) -> Result<ParseResult> {
    dcfg.validate()?;
    scfg.validate()?;
    let n = words.len();
    if n == 0 {
        return Err(Error::Internal("zero-length sentence".into()));
    }
    if words.len() != tag_sets.len() {
        return Err(Error::Alignment(format!(
            "{} words vs {} tag sets",
            words.len(),
            tag_sets.len()
        )));
    }

    let mut chart = Chart::new(n);
    let mut budget = dcfg.max_chart_items;

    // leaf cells: one item per retained lexical category, closed under unaries
    for (i, entries) in tag_sets.iter().enumerate() {
        if entries.is_empty() {
            return Err(Error::Internal(format!("empty tag set for token {i}")));
        }
        let mut batch = Vec::new();
        for e in entries {
            let cat = tables.registry.parse_category(&e.cat)?;
            let ann = markedup.resolve(&cat);
            let headed = HeadedItem::leaf(i, &cat, &ann);
            budget = budget.saturating_sub(1);
            batch.push(ChartItem {
                start: i,
                end: i + 1,
                headed,
                chain: Vec::new(),
                unary_depth: 0,
                score: scfg.supertag_weight * e.logprob,
                span_contrib: 0.0,
                rule: RuleRef::Lex,
                children: Vec::new(),
                filled: Vec::new(),
                word: words[i].clone(),
            });
        }
        let mut closed = unary_closure(batch, tables, scorer, dcfg, scfg, &mut budget);
        closed.sort_by(cmp_items);
        closed.truncate(dcfg.beam);
        let idx = chart.idx(i, i + 1);
        chart.items += closed.len();
        chart.cells[idx] = closed.into_iter().map(Rc::new).collect();
    }

    // binary combination by increasing span length
    'outer: for len in 2..=n {
        for start in 0..=(n - len) {
            let end = start + len;
            let mut batch: Vec<ChartItem> = Vec::new();
            for split in (start + 1)..end {
                for l in chart.cell(start, split) {
                    for r in chart.cell(split, end) {
                        for app in
                            apply_binary(&l.headed.cat, &r.headed.cat, tables, RuleMode::SeenRules)
                        {
                            let (headed, filled) = HeadedItem::combine(&app, &l.headed, &r.headed);
                            let label = headed.cat_key.to_string();
                            let span_contrib = scorer.span_score(start, end, &label, scfg);
                            if budget == 0 {
                                break 'outer;
                            }
                            budget -= 1;
                            batch.push(ChartItem {
                                start,
                                end,
                                headed,
                                chain: vec![label],
                                unary_depth: 0,
                                score: l.score + r.score + span_contrib,
                                span_contrib,
                                rule: RuleRef::Binary(app.kind),
                                children: vec![Rc::clone(l), Rc::clone(r)],
                                filled,
                                word: String::new(),
                            });
                        }
                    }
                }
            }
            let mut closed = unary_closure(batch, tables, scorer, dcfg, scfg, &mut budget);
            closed.sort_by(cmp_items);
            closed.truncate(dcfg.beam);
            let idx = chart.idx(start, end);
            chart.items += closed.len();
            chart.cells[idx] = closed.into_iter().map(Rc::new).collect();
            if budget == 0 {
                break 'outer;
            }
        }
    }

    // best spanning item under the root policy
    for item in chart.cell(0, n) {
        if dcfg.any_root || tables.is_root(&item.headed.cat) {
            let mut deps = Vec::new();
            item.collect_deps(&mut deps);
            deps.sort();
            let deriv = item.to_deriv();
            let leaf_cats = leaf_cats_of(std::slice::from_ref(&deriv), n);
            return Ok(ParseResult {
                skimmed: false,
                derivations: vec![deriv],
                dependencies: deps,
                leaf_cats,
                score: item.score,
            });
        }
    }

    skim(&chart)
}

/// Select, by dynamic programming over fragment boundaries, the sequence of
/// chart items exactly covering the sentence with maximal total score. A
/// single-token item exists for every position, so skimming always succeeds.
fn skim(chart: &Chart) -> Result<ParseResult> {
    let n = chart.n;
    let mut best: Vec<Option<(f64, usize)>> = vec![None; n + 1];
    best[0] = Some((0.0, 0));
    for j in 1..=n {
        for i in 0..j {
            let Some((base, _)) = best[i] else { continue };
            let Some(item) = chart.cell(i, j).first() else {
                continue;
            };
            let cand = base + item.score;
            let better = match best[j] {
                None => true,
                Some((cur, _)) => cand > cur,
            };
            if better {
                best[j] = Some((cand, i));
            }
        }
    }
    let Some((score, _)) = best[n] else {
        return Err(Error::Internal("skimmer found no cover".into()));
    };
    let mut bounds = Vec::new();
    let mut j = n;
    while j > 0 {
        let (_, i) = best[j].unwrap();
        bounds.push((i, j));
        j = i;
    }
    bounds.reverse();
    let mut derivations = Vec::new();
    let mut deps = Vec::new();
    for (i, j) in bounds {
        let item = chart.cell(i, j).first().unwrap();
        item.collect_deps(&mut deps);
        derivations.push(item.to_deriv());
    }
    deps.sort();
    let leaf_cats = leaf_cats_of(&derivations, n);
    Ok(ParseResult {
        skimmed: true,
        derivations,
        dependencies: deps,
        leaf_cats,
        score,
    })
}

fn leaf_cats_of(derivs: &[DerivNode], n: usize) -> Vec<String> {
    let mut cats = vec![String::new(); n];
    for d in derivs {
        for leaf in d.leaves() {
            if let DerivNode::Leaf { cat, index, .. } = leaf {
                cats[*index] = cat.print_erased();
            }
        }
    }
    cats
}

/// Re-check that every node of a returned derivation is licensed by the
/// loaded rule tables; the post-hoc form of the grammar-safety guarantee.
pub fn validate_derivation(
    deriv: &DerivNode,
    tables: &GrammarTables,
    mode: RuleMode,
) -> std::result::Result<(), String> {
    match deriv {
        DerivNode::Leaf { .. } => Ok(()),
        DerivNode::Unary { cat, kind, child } => {
            validate_derivation(child, tables, mode)?;
            let ok = apply_unary(child.cat(), tables)
                .iter()
                .any(|a| a.kind == *kind && &a.result == cat);
            if ok {
                Ok(())
            } else {
                Err(format!(
                    "unlicensed unary {} => {} ({})",
                    child.cat().print(),
                    cat.print(),
                    kind
                ))
            }
        }
        DerivNode::Binary {
            cat,
            kind,
            left,
            right,
        } => {
            validate_derivation(left, tables, mode)?;
            validate_derivation(right, tables, mode)?;
            let ok = apply_binary(left.cat(), right.cat(), tables, mode)
                .iter()
                .any(|a| a.kind == *kind && &a.result == cat);
            if ok {
                Ok(())
            } else {
                Err(format!(
                    "unlicensed binary {} {} => {} ({})",
                    left.cat().print(),
                    right.cat().print(),
                    cat.print(),
                    kind
                ))
            }
        }
    }
}

/// One sentence of parser input: tokens with their pruned tag sets.
#[derive(Debug, Clone)]
pub struct SentenceInput {
    pub words: Vec<String>,
    pub tags: Vec<Vec<TagEntry>>,
}

/// Timing and coverage statistics for a corpus run.
#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub sentences: usize,
    pub skimmed: usize,
    pub elapsed_secs: f64,
    pub sents_per_sec: f64,
    pub pct_skimmed: f64,
    pub coverage: f64,
}

/// Parse a corpus, one sentence per worker, with optional per-sentence score
/// charts aligned to the inputs. Shared state is immutable; results are
/// deterministic regardless of worker count.
pub fn parse_corpus(
    inputs: &[SentenceInput],
    charts: Option<&[ScoreChart]>,
    tables: &GrammarTables,
    markedup: &MarkedupTable,
    dcfg: &DecodeConfig,
    scfg: &ScoreConfig,
    workers: usize,
) -> Result<(Vec<ParseResult>, CorpusReport)> {
    if let Some(charts) = charts {
        if charts.len() != inputs.len() {
            return Err(Error::Alignment(format!(
                "{} sentences vs {} score charts",
                inputs.len(),
                charts.len()
            )));
        }
        for (k, (input, chart)) in inputs.iter().zip(charts).enumerate() {
            if chart.len != input.words.len() {
                return Err(Error::Alignment(format!(
                    "sentence {k}: {} tokens vs chart length {}",
                    input.words.len(),
                    chart.len
                )));
            }
        }
    }
    let freq = FrequencyScorer::from_tables(tables);

    let run = |(k, input): (usize, &SentenceInput)| -> Result<ParseResult> {
        let scorer: &dyn LabelScorer = match charts {
            Some(cs) => &cs[k],
            None => &freq,
        };
        decode(
            &input.words,
            &input.tags,
            tables,
            markedup,
            scorer,
            dcfg,
            scfg,
        )
    };

    let start = Instant::now();
    let results: Result<Vec<ParseResult>> = if workers == 1 {
        inputs.iter().enumerate().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
        pool.install(|| inputs.par_iter().enumerate().map(run).collect())
    };
    let results = results?;
    let elapsed = start.elapsed().as_secs_f64();

    let skimmed = results.iter().filter(|r| r.skimmed).count();
    let n = results.len();
    let report = CorpusReport {
        sentences: n,
        skimmed,
        elapsed_secs: elapsed,
        sents_per_sec: if elapsed > 0.0 { n as f64 / elapsed } else { 0.0 },
        pct_skimmed: if n > 0 {
            100.0 * skimmed as f64 / n as f64
        } else {
            0.0
        },
        coverage: if n > 0 { 100.0 } else { 0.0 },
    };
    Ok((results, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::AtomRegistry;
    use crate::markedup::MarkedupTable;
    use crate::treebank::{extract_grammar, read_treebank};

    fn reg() -> AtomRegistry {
        AtomRegistry::default()
    }

    const FIG1: &str = "(<T S[dcl] ba> (<L NP Investors 0>) (<T S[dcl]\\NP fa> (<L (S[dcl]\\NP)/PP appealed 1>) (<T PP fa> (<L PP/NP to 2>) (<T NP fa> (<L NP/N the 3>) (<T N fa> (<L N/N Exchange 4>) (<L N Commission 5>))))))";
    const FIG2: &str = "(<T NP ba> (<T NP fa> (<L NP/N the 0>) (<L N agreement 1>)) (<T NP\\NP fa> (<L (NP\\NP)/(S[dcl]/NP) which 2>) (<T S[dcl]/NP fc> (<T S/(S\\NP) tr> (<T NP fa> (<L NP/N the 3>) (<L N fund 4>))) (<L (S[dcl]\\NP)/NP reached 5>))))";

    fn gold_inputs(tree: &str) -> (Vec<String>, Vec<Vec<TagEntry>>, GrammarTables) {
        let (entries, _) = read_treebank(tree, "tb", &reg(), false).unwrap();
        let entry = &entries[0];
        let tables = extract_grammar(&entries, &reg(), 1);
        let words = entry.tokens.clone();
        let tags: Vec<Vec<TagEntry>> = entry
            .deriv
            .leaves()
            .iter()
            .map(|l| match l {
                DerivNode::Leaf { cat, .. } => vec![TagEntry {
                    cat: cat.print_erased(),
                    logprob: 0.0,
                }],
                _ => unreachable!(),
            })
            .collect();
        (words, tags, tables)
    }

    #[test]
    fn decodes_fig1_with_gold_categories() {
        let (words, tags, tables) = gold_inputs(FIG1);
        let freq = FrequencyScorer::from_tables(&tables);
        let result = decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .unwrap();
        assert!(!result.skimmed);
        assert_eq!(result.derivations.len(), 1);
        assert_eq!(result.derivations[0].cat().print(), "S[dcl]");
        assert_eq!(result.derivations[0].print(), FIG1);
    }

    #[test]
    fn decodes_fig2_with_gold_categories() {
        let (words, tags, tables) = gold_inputs(FIG2);
        let freq = FrequencyScorer::from_tables(&tables);
        let result = decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .unwrap();
        assert!(!result.skimmed);
        let printed = result.derivations[0].print();
        assert!(printed.contains(" tr> "), "type-raising step present");
        assert!(printed.contains(" fc> "), "composition step present");
        assert_eq!(result.derivations[0].cat().print(), "NP");
        assert_eq!(result.derivations[0].print(), FIG2);
    }

    #[test]
    fn skim_single_spanning_item_is_one_fragment() {
        let (words, tags, tables) = gold_inputs(FIG1);
        // oracle-style chart: gold stacks score zero, so the spanning item
        // ties the all-leaves cover and the earlier boundary wins
        let (entries, _) = read_treebank(FIG1, "tb", &reg(), false).unwrap();
        let mut chart = ScoreChart::new(words.len());
        for (s, e, label) in entries[0].deriv.span_stacks() {
            chart.insert(s, e, &label, 0.0).unwrap();
        }
        // force the skimmer by rejecting every root category
        let mut no_roots = tables.clone();
        no_roots.roots.clear();
        let result = decode(
            &words,
            &tags,
            &no_roots,
            &MarkedupTable::default(),
            &chart,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .unwrap();
        assert!(result.skimmed);
        assert_eq!(result.derivations.len(), 1, "spanning item wins the cover");
        assert_eq!(result.derivations[0].span(), (0, 6));
    }

    #[test]
    fn skim_two_words_without_rules() {
        let tables = GrammarTables::empty(reg());
        let freq = FrequencyScorer::from_tables(&tables);
        let words = vec!["a".to_string(), "b".to_string()];
        let tags = vec![
            vec![TagEntry { cat: "NP".into(), logprob: -0.5 }],
            vec![TagEntry { cat: "NP".into(), logprob: -0.25 }],
        ];
        let result = decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .unwrap();
        assert!(result.skimmed);
        assert_eq!(result.derivations.len(), 2);
        assert!((result.score - (-0.75)).abs() < 1e-12);
        assert_eq!(result.leaf_cats, vec!["NP", "NP"]);
    }

    #[test]
    fn skim_picks_higher_scoring_split() {
        // crafted 4-token chart: cover {[0,3)+[3,4)} competes with
        // {[0,2)+[2,4)}; the second pairing scores higher by construction
        let mut tables = GrammarTables::empty(reg());
        let np = reg().parse_category("NP").unwrap();
        let n = reg().parse_category("N").unwrap();
        tables.add_binary("NP/N", "N", np.clone(), BinaryRuleKind::ForwardApplication, 1);
        tables.add_binary("N/N", "N", n, BinaryRuleKind::ForwardApplication, 1);
        tables.add_binary("NP", "N/N", np, BinaryRuleKind::TreebankBinary, 1);
        // tokens: w0=NP/N w1=N w2=N/N w3=N
        //   [0,2) = NP, [2,4) = N, [0,3) = NP via the treebank rule
        let words: Vec<String> = ["w0", "w1", "w2", "w3"].iter().map(|s| s.to_string()).collect();
        let tag = |c: &str| vec![TagEntry { cat: c.into(), logprob: -0.1 }];
        let tags = vec![tag("NP/N"), tag("N"), tag("N/N"), tag("N")];
        let mut chart = ScoreChart::new(4);
        chart.insert(0, 2, "NP", 2.0).unwrap();
        chart.insert(2, 4, "N", 1.0).unwrap();
        chart.insert(0, 3, "NP", -5.0).unwrap();
        let cfg = ScoreConfig {
            missing_score: -1.0,
            ..Default::default()
        };
        let result = decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &chart,
            &DecodeConfig::default(),
            &cfg,
        )
        .unwrap();
        assert!(result.skimmed);
        // cover A = [0,3)+[3,4) scores -3.4; cover B = [0,2)+[2,4) scores 2.6
        let spans: Vec<(usize, usize)> = result.derivations.iter().map(|d| d.span()).collect();
        assert_eq!(spans, vec![(0, 2), (2, 4)]);
        assert!((result.score - 2.6).abs() < 1e-9);
    }

    #[test]
    fn determinism_across_runs() {
        let (words, tags, tables) = gold_inputs(FIG2);
        let freq = FrequencyScorer::from_tables(&tables);
        let run = || {
            let r = decode(
                &words,
                &tags,
                &tables,
                &MarkedupTable::default(),
                &freq,
                &DecodeConfig::default(),
                &ScoreConfig::default(),
            )
            .unwrap();
            (
                r.derivations.iter().map(|d| d.print()).collect::<Vec<_>>(),
                r.dependencies,
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn returned_derivation_validates_against_tables() {
        let (words, tags, tables) = gold_inputs(FIG2);
        let freq = FrequencyScorer::from_tables(&tables);
        let result = decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .unwrap();
        for d in &result.derivations {
            validate_derivation(d, &tables, RuleMode::SeenRules).unwrap();
        }
    }

    #[test]
    fn empty_sentence_is_an_error() {
        let tables = GrammarTables::empty(reg());
        let freq = FrequencyScorer::from_tables(&tables);
        assert!(decode(
            &[],
            &[],
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn empty_tag_set_is_an_error() {
        let tables = GrammarTables::empty(reg());
        let freq = FrequencyScorer::from_tables(&tables);
        let words = vec!["a".to_string()];
        let tags = vec![Vec::new()];
        assert!(decode(
            &words,
            &tags,
            &tables,
            &MarkedupTable::default(),
            &freq,
            &DecodeConfig::default(),
            &ScoreConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn parse_corpus_empty_is_ok() {
        let tables = GrammarTables::empty(reg());
        let (results, report) = parse_corpus(
            &[],
            None,
            &tables,
            &MarkedupTable::default(),
            &DecodeConfig::default(),
            &ScoreConfig::default(),
            1,
        )
        .unwrap();
        assert!(results.is_empty());
        assert_eq!(report.sentences, 0);
    }

    #[test]
    fn parse_corpus_alignment_checked() {
        let tables = GrammarTables::empty(reg());
        let inputs = vec![SentenceInput {
            words: vec!["a".into()],
            tags: vec![vec![TagEntry { cat: "NP".into(), logprob: 0.0 }]],
        }];
        let charts = vec![ScoreChart::new(2)];
        assert!(parse_corpus(
            &inputs,
            Some(&charts),
            &tables,
            &MarkedupTable::default(),
            &DecodeConfig::default(),
            &ScoreConfig::default(),
            1,
        )
        .is_err());
    }
}
