//! Treebank reading and writing, grammar extraction, and oracle input
//! generation (gold tag distributions, gold score charts, gold
//! dependencies) for round-trip testing.

use std::fmt::Write as _;

use crate::category::AtomRegistry;
use crate::dependencies::HeadedItem;
use crate::derivation::DerivNode;
use crate::error::{Error, Result};
use crate::grammar::{
    generic_binary, infer_binary_kind, infer_unary_kind, BinaryApplication, BinaryRuleKind,
    GrammarTables, UnaryRuleKind,
};
use crate::markedup::{Dependency, MarkedupTable};

#[derive(Debug, Clone)]
pub struct TreebankEntry {
    pub id: usize,
    pub tokens: Vec<String>,
    pub deriv: DerivNode,
}

/// Read a treebank: one bracketed derivation per line. Malformed entries are
/// errors, or reported and skipped under the lenient flag.
pub fn read_treebank(
    text: &str,
    file: &str,
    reg: &AtomRegistry,
    lenient: bool,
) -> Result<(Vec<TreebankEntry>, Vec<String>)> {
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match DerivNode::parse(line, reg) {
            Ok(deriv) => {
                let tokens = deriv
                    .leaves()
                    .iter()
                    .map(|l| match l {
                        DerivNode::Leaf { word, .. } => word.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                entries.push(TreebankEntry {
                    id: entries.len(),
                    tokens,
                    deriv,
                });
            }
            Err(e) => {
                let msg = format!("{file}:{}: {e}", ln + 1);
                if lenient {
                    warnings.push(msg);
                } else {
                    return Err(Error::format(file, ln + 1, e.to_string()));
                }
            }
        }
    }
    Ok((entries, warnings))
}

pub fn write_treebank(entries: &[TreebankEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.deriv.print());
        out.push('\n');
    }
    out
}

/// Extract lexicon, seen rules and root categories from parsed entries.
/// Rule kinds are inferred by matching the combinator schemata (application
/// before composition before crossed composition); instances outside the
/// schemata become treebank-binary or type-changing. Lexical categories with
/// total count below `min_count` are dropped from the lexicon.
pub fn extract_grammar(
    entries: &[TreebankEntry],
    reg: &AtomRegistry,
    min_count: u64,
) -> GrammarTables {
    let mut tables = GrammarTables::empty(reg.clone());
    for entry in entries {
        walk_extract(&entry.deriv, &mut tables);
        tables.roots.insert(entry.deriv.cat().print_erased());
    }
    if min_count > 1 {
        let keep: std::collections::BTreeSet<String> = tables
            .lexicon_totals
            .iter()
            .filter(|(_, &c)| c >= min_count)
            .map(|(k, _)| k.clone())
            .collect();
        tables.lexicon_totals.retain(|k, _| keep.contains(k));
        for cats in tables.lexicon.values_mut() {
            cats.retain(|k, _| keep.contains(k));
        }
        tables.lexicon.retain(|_, cats| !cats.is_empty());
    }
    tables
}

fn walk_extract(node: &DerivNode, tables: &mut GrammarTables) {
    match node {
        DerivNode::Leaf { cat, word, .. } => {
            tables.add_lexical(word, &cat.print_erased(), 1);
        }
        DerivNode::Unary { cat, child, .. } => {
            walk_extract(child, tables);
            let kind = infer_unary_kind(child.cat(), cat, &tables.registry);
            tables.add_unary(child.cat().clone(), cat.clone(), kind, 1);
        }
        DerivNode::Binary {
            cat, left, right, ..
        } => {
            walk_extract(left, tables);
            walk_extract(right, tables);
            let kind = infer_binary_kind(left.cat(), right.cat(), cat, &tables.registry);
            tables.add_binary(
                &left.cat().print_erased(),
                &right.cat().print_erased(),
                cat.clone(),
                kind,
                1,
            );
        }
    }
}

/// Deterministically re-derive a gold tree through the engine, producing the
/// analysis and its dependencies. Fails when the tree uses a rule the engine
/// cannot express.
pub fn replay_derivation(
    deriv: &DerivNode,
    markedup: &MarkedupTable,
    reg: &AtomRegistry,
) -> Result<(HeadedItem, Vec<Dependency>)> {
    match deriv {
        DerivNode::Leaf { cat, index, .. } => {
            let ann = markedup.resolve(cat);
            Ok((HeadedItem::leaf(*index, cat, &ann), Vec::new()))
        }
        DerivNode::Unary { cat, kind, child } => {
            let (item, deps) = replay_derivation(child, markedup, reg)?;
            if *kind == UnaryRuleKind::TypeRaising
                && infer_unary_kind(&item.cat, cat, reg) != UnaryRuleKind::TypeRaising
            {
                return Err(Error::Internal(format!(
                    "{} => {} recorded as type-raising but does not have raising shape",
                    item.cat.print(),
                    cat.print()
                )));
            }
            Ok((item.unary(*kind, cat), deps))
        }
        DerivNode::Binary {
            cat,
            kind,
            left,
            right,
        } => {
            let (litem, mut deps) = replay_derivation(left, markedup, reg)?;
            let (ritem, rdeps) = replay_derivation(right, markedup, reg)?;
            deps.extend(rdeps);
            let app = if *kind == BinaryRuleKind::TreebankBinary {
                BinaryApplication {
                    result: cat.clone(),
                    kind: BinaryRuleKind::TreebankBinary,
                    binding: Default::default(),
                }
            } else {
                generic_binary(&litem.cat, &ritem.cat, reg)
                    .into_iter()
                    .find(|a| a.kind == *kind && &a.result == cat)
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "{} {} => {} ({}) not derivable by the combinator schemata",
                            litem.cat.print(),
                            ritem.cat.print(),
                            cat.print(),
                            kind,
                        ))
                    })?
            };
            let (item, filled) = HeadedItem::combine(&app, &litem, &ritem);
            deps.extend(filled);
            Ok((item, deps))
        }
    }
}

/// Oracle outputs for a treebank: gold tag distributions (each gold leaf
/// category at probability one), a gold score chart (zero for every gold
/// internal label stack), and the gold dependency file. Entries whose trees
/// the engine cannot replay are reported and skipped from all three outputs.
pub struct OracleOutput {
    pub tags: String,
    pub spans: String,
    pub deps: String,
    pub skipped: Vec<String>,
}

pub fn gold_oracle(
    entries: &[TreebankEntry],
    markedup: &MarkedupTable,
    reg: &AtomRegistry,
) -> OracleOutput {
    let mut tags = String::new();
    let mut spans = String::new();
    let mut deps = String::new();
    let mut skipped = Vec::new();
    let mut first = true;
    for entry in entries {
        let (_, mut entry_deps) = match replay_derivation(&entry.deriv, markedup, reg) {
            Ok(x) => x,
            Err(e) => {
                skipped.push(format!("entry {}: {e}", entry.id));
                continue;
            }
        };
        if !first {
            tags.push('\n');
            spans.push('\n');
            deps.push('\n');
        }
        first = false;

        for (i, leaf) in entry.deriv.leaves().iter().enumerate() {
            let DerivNode::Leaf { cat, word, .. } = leaf else {
                unreachable!()
            };
            let _ = writeln!(tags, "{i}\t{word}\t{}:0", cat.print_erased());
        }

        let _ = writeln!(spans, "n {}", entry.tokens.len());
        for (start, end, label) in entry.deriv.span_stacks() {
            let _ = writeln!(spans, "{start} {end} {label} 0");
        }

        let _ = write!(deps, "# cats");
        for leaf in entry.deriv.leaves() {
            let DerivNode::Leaf { cat, .. } = leaf else {
                unreachable!()
            };
            let _ = write!(deps, " {}", cat.print_erased());
        }
        deps.push('\n');
        entry_deps.sort();
        for d in entry_deps {
            let _ = writeln!(deps, "{d}");
        }
    }
    OracleOutput {
        tags,
        spans,
        deps,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> AtomRegistry {
        AtomRegistry::default()
    }

    const FIG2: &str = "(<T NP ba> (<T NP fa> (<L NP/N the 0>) (<L N agreement 1>)) (<T NP\\NP fa> (<L (NP\\NP)/(S[dcl]/NP) which 2>) (<T S[dcl]/NP fc> (<T S/(S\\NP) tr> (<T NP fa> (<L NP/N the 3>) (<L N fund 4>))) (<L (S[dcl]\\NP)/NP reached 5>))))";

    fn fig2_entry() -> TreebankEntry {
        let (entries, _) = read_treebank(FIG2, "tb", &reg(), false).unwrap();
        entries.into_iter().next().unwrap()
    }

    #[test]
    fn read_write_round_trip() {
        let text = format!("{FIG2}\n(<L NP it 0>)\n");
        let (entries, warnings) = read_treebank(&text, "tb", &reg(), false).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].tokens.len(), 6);
        assert_eq!(entries[1].tokens, vec!["it"]);
        let written = write_treebank(&entries);
        let (again, _) = read_treebank(&written, "tb", &reg(), false).unwrap();
        assert_eq!(write_treebank(&again), written);
    }

    #[test]
    fn lenient_mode_skips_bad_lines() {
        let text = format!("(<L Q bad 0>)\n{FIG2}\n");
        assert!(read_treebank(&text, "tb", &reg(), false).is_err());
        let (entries, warnings) = read_treebank(&text, "tb", &reg(), true).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("tb:1"));
    }

    #[test]
    fn extract_single_tree() {
        let (entries, _) =
            read_treebank("(<T NP fa> (<L NP/N the 0>) (<L N fund 1>))", "tb", &reg(), false)
                .unwrap();
        let tables = extract_grammar(&entries, &reg(), 1);
        let seen = tables
            .binary
            .get(&("NP/N".to_string(), "N".to_string()))
            .unwrap();
        assert_eq!(seen.len(), 1);
        assert_eq!(seen[0].kind, BinaryRuleKind::ForwardApplication);
        assert_eq!(seen[0].count, 1);
        assert_eq!(tables.lexicon_totals.get("NP/N"), Some(&1));
        assert!(tables.roots.contains("NP"));
    }

    #[test]
    fn extract_fig2_unary_is_type_raising() {
        let tables = extract_grammar(&[fig2_entry()], &reg(), 1);
        assert_eq!(tables.unary.len(), 1);
        assert_eq!(tables.unary[0].kind, UnaryRuleKind::TypeRaising);
        assert_eq!(tables.unary[0].source.print(), "NP");
        assert_eq!(tables.unary[0].target.print(), "S/(S\\NP)");
    }

    #[test]
    fn extract_counts_sum_to_binary_nodes() {
        let entry = fig2_entry();
        let tables = extract_grammar(&[entry.clone()], &reg(), 1);
        let total: u64 = tables
            .binary
            .values()
            .flatten()
            .map(|s| s.count)
            .sum();
        fn binary_nodes(n: &DerivNode) -> u64 {
            match n {
                DerivNode::Leaf { .. } => 0,
                DerivNode::Unary { child, .. } => binary_nodes(child),
                DerivNode::Binary { left, right, .. } => {
                    1 + binary_nodes(left) + binary_nodes(right)
                }
            }
        }
        assert_eq!(total, binary_nodes(&entry.deriv));
    }

    #[test]
    fn min_count_prunes_lexicon() {
        let text = format!("{FIG2}\n{FIG2}\n(<L NP it 0>)\n");
        let (entries, _) = read_treebank(&text, "tb", &reg(), false).unwrap();
        let tables = extract_grammar(&entries, &reg(), 2);
        assert!(tables.lexicon_totals.contains_key("NP/N"));
        assert!(!tables.lexicon_totals.contains_key("NP"), "NP occurs once");
    }

    #[test]
    fn oracle_files_for_fig2() {
        let markedup = MarkedupTable::parse(
            "(NP{Y}\\NP{1}:Y)/(S[dcl]{2}:Z/NP{Y*})\tobject rel pronoun\tobject rel pronoun\n(S[dcl]\\NP{1}:Y)/NP{2}:Z\ttransitive verb\ttransitive verb\nNP{Y}/N{1}:Y\tdeterminer\n",
            "m",
            &reg(),
        )
        .unwrap();
        let out = gold_oracle(&[fig2_entry()], &markedup, &reg());
        assert!(out.skipped.is_empty());
        assert!(out.tags.contains("5\treached\t(S[dcl]\\NP)/NP:0"));
        assert!(out.spans.contains("n 6\n"));
        assert!(out.spans.contains("3 6 S[dcl]/NP 0"));
        assert!(out.spans.contains("3 5 NP|S/(S\\NP) 0"));
        assert!(
            out.deps.contains("5\t(S[dcl]\\NP)/NP\t2\t1\t1"),
            "long-range object dependency present: {}",
            out.deps
        );
        assert!(out.deps.starts_with("# cats NP/N N"));
    }

    #[test]
    fn oracle_empty_entries() {
        let out = gold_oracle(&[], &MarkedupTable::default(), &reg());
        assert!(out.tags.is_empty() && out.spans.is_empty() && out.deps.is_empty());
    }

    #[test]
    fn oracle_skips_inexpressible_trees() {
        // NP NP => NP is no combinator and not recorded as treebank-binary
        let (entries, _) = read_treebank(
            "(<T NP fa> (<L NP a 0>) (<L NP b 1>))",
            "tb",
            &reg(),
            false,
        )
        .unwrap();
        let out = gold_oracle(&entries, &MarkedupTable::default(), &reg());
        assert_eq!(out.skipped.len(), 1);
        assert!(out.tags.is_empty());
    }
}
