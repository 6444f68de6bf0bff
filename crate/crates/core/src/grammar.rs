//! The combinatory rules and the treebank-derived rule tables.
//!
//! Generic mode implements the combinator schemata directly; seen-rules mode
//! restricts applications to the rule instances observed in the treebank,
//! which is what keeps the working grammar context free in practice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::category::{unify, AtomRegistry, Category, FeatureBinding, Side, Slash};
use crate::error::{Error, Result};
use crate::markedup::MarkedupTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryRuleKind {
    ForwardApplication,
    BackwardApplication,
    ForwardComposition,
    BackwardComposition,
    BackwardCrossedComposition,
    /// Treebank-observed instance outside the combinator schemata
    /// (coordination, punctuation absorption).
    TreebankBinary,
}

impl BinaryRuleKind {
    pub fn token(self) -> &'static str {
        match self {
            BinaryRuleKind::ForwardApplication => "fa",
            BinaryRuleKind::BackwardApplication => "ba",
            BinaryRuleKind::ForwardComposition => "fc",
            BinaryRuleKind::BackwardComposition => "bc",
            BinaryRuleKind::BackwardCrossedComposition => "bxc",
            BinaryRuleKind::TreebankBinary => "tb",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "fa" => BinaryRuleKind::ForwardApplication,
            "ba" => BinaryRuleKind::BackwardApplication,
            "fc" => BinaryRuleKind::ForwardComposition,
            "bc" => BinaryRuleKind::BackwardComposition,
            "bxc" => BinaryRuleKind::BackwardCrossedComposition,
            "tb" => BinaryRuleKind::TreebankBinary,
            _ => return None,
        })
    }

    /// The item acting as primary functor (the one contributing the result's
    /// outermost structure). Treebank-binary rules have no functor in the
    /// schema sense; the engine treats the non-punctuation child as primary.
    pub fn primary(self) -> Side {
        match self {
            BinaryRuleKind::ForwardApplication | BinaryRuleKind::ForwardComposition => Side::Left,
            BinaryRuleKind::BackwardApplication
            | BinaryRuleKind::BackwardComposition
            | BinaryRuleKind::BackwardCrossedComposition => Side::Right,
            BinaryRuleKind::TreebankBinary => Side::Left,
        }
    }
}

impl fmt::Display for BinaryRuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnaryRuleKind {
    TypeRaising,
    TypeChanging,
}

impl UnaryRuleKind {
    pub fn token(self) -> &'static str {
        match self {
            UnaryRuleKind::TypeRaising => "tr",
            UnaryRuleKind::TypeChanging => "tc",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "tr" => UnaryRuleKind::TypeRaising,
            "tc" => UnaryRuleKind::TypeChanging,
            _ => return None,
        })
    }
}

impl fmt::Display for UnaryRuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Whether rule application is restricted to treebank instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleMode {
    SeenRules,
    Generic,
}

/// One licensed binary combination.
#[derive(Debug, Clone)]
pub struct BinaryApplication {
    pub result: Category,
    pub kind: BinaryRuleKind,
    pub binding: FeatureBinding,
}

/// One licensed unary rewrite.
#[derive(Debug, Clone)]
pub struct UnaryApplication {
    pub result: Category,
    pub kind: UnaryRuleKind,
}

/// A seen binary rule instance.
#[derive(Debug, Clone)]
pub struct BinarySeen {
    pub result: Category,
    pub result_key: String,
    pub kind: BinaryRuleKind,
    pub count: u64,
}

/// A unary rule instance (type-raising or type-changing); unary rules are
/// only ever table-driven, never generated from a schema.
#[derive(Debug, Clone)]
pub struct UnaryRule {
    pub source: Category,
    pub target: Category,
    pub kind: UnaryRuleKind,
    pub count: u64,
}

/// Lexicon, seen rules and root categories extracted from a treebank.
#[derive(Debug, Clone)]
pub struct GrammarTables {
    pub registry: AtomRegistry,
    /// word -> category key -> count
    pub lexicon: BTreeMap<String, BTreeMap<String, u64>>,
    /// category key -> total count across words
    pub lexicon_totals: BTreeMap<String, u64>,
    /// (left key, right key) -> seen instances
    pub binary: BTreeMap<(String, String), Vec<BinarySeen>>,
    pub unary: Vec<UnaryRule>,
    /// categories permitted to span the whole sentence
    pub roots: BTreeSet<String>,
}

impl GrammarTables {
    pub fn empty(registry: AtomRegistry) -> GrammarTables {
        GrammarTables {
            registry,
            lexicon: BTreeMap::new(),
            lexicon_totals: BTreeMap::new(),
            binary: BTreeMap::new(),
            unary: Vec::new(),
            roots: BTreeSet::new(),
        }
    }

    pub fn is_root(&self, cat: &Category) -> bool {
        self.roots.contains(&cat.print_erased())
    }

    /// Counts of every category label appearing as a binary-rule result or a
    /// unary-rule target, for the built-in frequency scorer.
    pub fn label_counts(&self) -> BTreeMap<String, u64> {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for seen in self.binary.values().flatten() {
            *counts.entry(seen.result_key.clone()).or_insert(0) += seen.count;
        }
        for rule in &self.unary {
            *counts.entry(rule.target.print_erased()).or_insert(0) += rule.count;
        }
        counts
    }

    pub fn add_lexical(&mut self, word: &str, cat_key: &str, count: u64) {
        *self
            .lexicon
            .entry(word.to_string())
            .or_default()
            .entry(cat_key.to_string())
            .or_insert(0) += count;
        *self.lexicon_totals.entry(cat_key.to_string()).or_insert(0) += count;
    }

    pub fn add_binary(
        &mut self,
        left_key: &str,
        right_key: &str,
        result: Category,
        kind: BinaryRuleKind,
        count: u64,
    ) {
        let entry = self
            .binary
            .entry((left_key.to_string(), right_key.to_string()))
            .or_default();
        let result_key = result.print_erased();
        if let Some(seen) = entry
            .iter_mut()
            .find(|s| s.kind == kind && s.result_key == result_key)
        {
            seen.count += count;
            return;
        }
        entry.push(BinarySeen {
            result,
            result_key,
            kind,
            count,
        });
        entry.sort_by(|a, b| (&a.result_key, a.kind).cmp(&(&b.result_key, b.kind)));
    }

    pub fn add_unary(&mut self, source: Category, target: Category, kind: UnaryRuleKind, count: u64) {
        if let Some(rule) = self
            .unary
            .iter_mut()
            .find(|r| r.source == source && r.target == target && r.kind == kind)
        {
            rule.count += count;
            return;
        }
        self.unary.push(UnaryRule {
            source,
            target,
            kind,
            count,
        });
        self.unary.sort_by(|a, b| {
            (a.source.print(), a.target.print(), a.kind).cmp(&(
                b.source.print(),
                b.target.print(),
                b.kind,
            ))
        });
    }
}

/// All results licensed by the combinator schemata for a pair of categories:
/// forward/backward application, first-order forward/backward composition,
/// and backward crossed composition. The matching parts must unify.
pub fn generic_binary(
    left: &Category,
    right: &Category,
    reg: &AtomRegistry,
) -> Vec<BinaryApplication> {
    let mut out = Vec::new();

    // forward application: X/Y . Y => X
    if let Category::Complex(x, Slash::Forward, y) = left {
        if let Some((_, binding)) = unify(y, right, reg) {
            out.push(BinaryApplication {
                result: binding.apply(x, Side::Left),
                kind: BinaryRuleKind::ForwardApplication,
                binding,
            });
        }
    }

    // backward application: Y . X\Y => X
    if let Category::Complex(x, Slash::Backward, y) = right {
        if let Some((_, binding)) = unify(left, y, reg) {
            out.push(BinaryApplication {
                result: binding.apply(x, Side::Right),
                kind: BinaryRuleKind::BackwardApplication,
                binding,
            });
        }
    }

    // forward composition: X/Y . Y/Z => X/Z
    if let (Category::Complex(x, Slash::Forward, y1), Category::Complex(y2, Slash::Forward, z)) =
        (left, right)
    {
        if let Some((_, binding)) = unify(y1, y2, reg) {
            out.push(BinaryApplication {
                result: Category::complex(
                    binding.apply(x, Side::Left),
                    Slash::Forward,
                    binding.apply(z, Side::Right),
                ),
                kind: BinaryRuleKind::ForwardComposition,
                binding,
            });
        }
    }

    // backward composition: Y\Z . X\Y => X\Z
    if let (Category::Complex(y2, Slash::Backward, z), Category::Complex(x, Slash::Backward, y1)) =
        (left, right)
    {
        // unify sides follow item sides: left item owns y2/z, right owns x/y1
        if let Some((_, binding)) = unify(y2, y1, reg) {
            out.push(BinaryApplication {
                result: Category::complex(
                    binding.apply(x, Side::Right),
                    Slash::Backward,
                    binding.apply(z, Side::Left),
                ),
                kind: BinaryRuleKind::BackwardComposition,
                binding,
            });
        }
    }

    // backward crossed composition: Y/Z . X\Y => X/Z
    if let (Category::Complex(y2, Slash::Forward, z), Category::Complex(x, Slash::Backward, y1)) =
        (left, right)
    {
        if let Some((_, binding)) = unify(y2, y1, reg) {
            out.push(BinaryApplication {
                result: Category::complex(
                    binding.apply(x, Side::Right),
                    Slash::Forward,
                    binding.apply(z, Side::Left),
                ),
                kind: BinaryRuleKind::BackwardCrossedComposition,
                binding,
            });
        }
    }

    out
}

/// Binary rule application. Generic mode returns every schema result;
/// seen-rules mode intersects the schema results with the seen-rule table
/// and adds treebank-binary instances looked up verbatim.
pub fn apply_binary(
    left: &Category,
    right: &Category,
    tables: &GrammarTables,
    mode: RuleMode,
) -> Vec<BinaryApplication> {
    let generic = generic_binary(left, right, &tables.registry);
    match mode {
        RuleMode::Generic => generic,
        RuleMode::SeenRules => {
            let key = (left.print_erased(), right.print_erased());
            let seen = match tables.binary.get(&key) {
                Some(s) => s,
                None => return Vec::new(),
            };
            let mut out: Vec<BinaryApplication> = generic
                .into_iter()
                .filter(|app| {
                    let result_key = app.result.print_erased();
                    seen.iter()
                        .any(|s| s.kind == app.kind && s.result_key == result_key)
                })
                .collect();
            for s in seen {
                if s.kind == BinaryRuleKind::TreebankBinary {
                    out.push(BinaryApplication {
                        result: s.result.clone(),
                        kind: BinaryRuleKind::TreebankBinary,
                        binding: FeatureBinding::default(),
                    });
                }
            }
            out
        }
    }
}

/// Unary rule application: the targets of all table entries whose source
/// unifies with the category. The rule entry (source plus target) forms one
/// variable scope, so features learned on the source flow into the target.
pub fn apply_unary(cat: &Category, tables: &GrammarTables) -> Vec<UnaryApplication> {
    let mut out = Vec::new();
    for rule in &tables.unary {
        if let Some((_, binding)) = unify(&rule.source, cat, &tables.registry) {
            out.push(UnaryApplication {
                result: binding.apply(&rule.target, Side::Left),
                kind: rule.kind,
            });
        }
    }
    out
}

/// Infer the rule kind for an observed (left, right) => result instance by
/// matching the combinator schemata, preferring application, then
/// composition, then crossed composition. Instances no schema reproduces are
/// treebank-binary.
pub fn infer_binary_kind(
    left: &Category,
    right: &Category,
    result: &Category,
    reg: &AtomRegistry,
) -> BinaryRuleKind {
    let order = [
        BinaryRuleKind::ForwardApplication,
        BinaryRuleKind::BackwardApplication,
        BinaryRuleKind::ForwardComposition,
        BinaryRuleKind::BackwardComposition,
        BinaryRuleKind::BackwardCrossedComposition,
    ];
    let apps = generic_binary(left, right, reg);
    for kind in order {
        if apps.iter().any(|a| a.kind == kind && &a.result == result) {
            return kind;
        }
    }
    BinaryRuleKind::TreebankBinary
}

/// Type-raising turns A into R/(R\A) or R\(R/A); everything else observed as
/// a unary rewrite is type-changing.
pub fn infer_unary_kind(source: &Category, target: &Category, reg: &AtomRegistry) -> UnaryRuleKind {
    if let Category::Complex(r1, outer, inner) = target {
        if let Category::Complex(r2, inner_slash, a) = inner.as_ref() {
            let opposite = matches!(
                (outer, inner_slash),
                (Slash::Forward, Slash::Backward) | (Slash::Backward, Slash::Forward)
            );
            if opposite
                && crate::category::strip_features(r1) == crate::category::strip_features(r2)
                && unify(a, source, reg).is_some()
            {
                return UnaryRuleKind::TypeRaising;
            }
        }
    }
    UnaryRuleKind::TypeChanging
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load a grammar directory: `atoms.txt` (optional), `lexicon.txt`,
/// `binary_rules.txt`, `unary_rules.txt`, `roots.txt` and `markedup.txt`
/// (optional).
pub fn load_grammar(dir: &Path) -> Result<(GrammarTables, MarkedupTable)> {
    let atoms_path = dir.join("atoms.txt");
    let registry = if atoms_path.exists() {
        AtomRegistry::parse(&read_file(&atoms_path)?, &atoms_path.display().to_string())?
    } else {
        AtomRegistry::default()
    };
    let mut tables = GrammarTables::empty(registry);

    let lex_path = dir.join("lexicon.txt");
    let lex_name = lex_path.display().to_string();
    for (ln, line) in read_file(&lex_path)?.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [word, cat, count] => {
                tables.registry.parse_category(cat)?;
                let count: u64 = count
                    .parse()
                    .map_err(|_| Error::format(&lex_name, ln + 1, "bad count"))?;
                *tables
                    .lexicon
                    .entry(word.to_string())
                    .or_default()
                    .entry(cat.to_string())
                    .or_insert(0) += count;
            }
            [cat, count] => {
                tables.registry.parse_category(cat)?;
                let count: u64 = count
                    .parse()
                    .map_err(|_| Error::format(&lex_name, ln + 1, "bad count"))?;
                *tables.lexicon_totals.entry(cat.to_string()).or_insert(0) += count;
            }
            _ => return Err(Error::format(&lex_name, ln + 1, "expected 2 or 3 fields")),
        }
    }

    let bin_path = dir.join("binary_rules.txt");
    let bin_name = bin_path.display().to_string();
    for (ln, line) in read_file(&bin_path)?.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [left, right, result, kind, count] = fields.as_slice() else {
            return Err(Error::format(&bin_name, ln + 1, "expected 5 fields"));
        };
        tables.registry.parse_category(left)?;
        tables.registry.parse_category(right)?;
        let result = tables.registry.parse_category(result)?;
        let kind = BinaryRuleKind::from_token(kind)
            .ok_or_else(|| Error::format(&bin_name, ln + 1, format!("unknown rule kind {kind:?}")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| Error::format(&bin_name, ln + 1, "bad count"))?;
        tables.add_binary(left, right, result, kind, count);
    }

    let un_path = dir.join("unary_rules.txt");
    let un_name = un_path.display().to_string();
    for (ln, line) in read_file(&un_path)?.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [source, target, kind, count] = fields.as_slice() else {
            return Err(Error::format(&un_name, ln + 1, "expected 4 fields"));
        };
        let source = tables.registry.parse_category(source)?;
        let target = tables.registry.parse_category(target)?;
        let kind = UnaryRuleKind::from_token(kind)
            .ok_or_else(|| Error::format(&un_name, ln + 1, format!("unknown rule kind {kind:?}")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| Error::format(&un_name, ln + 1, "bad count"))?;
        tables.add_unary(source, target, kind, count);
    }

    let roots_path = dir.join("roots.txt");
    for line in read_file(&roots_path)?.lines() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        tables.registry.parse_category(line)?;
        tables.roots.insert(line.to_string());
    }

    let markedup_path = dir.join("markedup.txt");
    let markedup = if markedup_path.exists() {
        MarkedupTable::parse(
            &read_file(&markedup_path)?,
            &markedup_path.display().to_string(),
            &tables.registry,
        )?
    } else {
        MarkedupTable::default()
    };

    Ok((tables, markedup))
}

/// Write a grammar directory. `markedup` is written only when the directory
/// has no `markedup.txt` yet, so hand annotations survive re-extraction.
pub fn save_grammar(dir: &Path, tables: &GrammarTables, markedup: &MarkedupTable) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;

    write_file(&dir.join("atoms.txt"), &tables.registry.to_file_text())?;

    let mut lex = String::new();
    for (word, cats) in &tables.lexicon {
        for (cat, count) in cats {
            lex.push_str(&format!("{word}\t{cat}\t{count}\n"));
        }
    }
    for (cat, count) in &tables.lexicon_totals {
        lex.push_str(&format!("{cat}\t{count}\n"));
    }
    write_file(&dir.join("lexicon.txt"), &lex)?;

    let mut bin = String::new();
    for ((left, right), seen) in &tables.binary {
        for s in seen {
            bin.push_str(&format!(
                "{left}\t{right}\t{}\t{}\t{}\n",
                s.result.print(),
                s.kind,
                s.count
            ));
        }
    }
    write_file(&dir.join("binary_rules.txt"), &bin)?;

    let mut un = String::new();
    for rule in &tables.unary {
        un.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            rule.source.print(),
            rule.target.print(),
            rule.kind,
            rule.count
        ));
    }
    write_file(&dir.join("unary_rules.txt"), &un)?;

    let mut roots = String::new();
    for r in &tables.roots {
        roots.push_str(r);
        roots.push('\n');
    }
    write_file(&dir.join("roots.txt"), &roots)?;

    let markedup_path = dir.join("markedup.txt");
    if !markedup_path.exists() {
        let text = if markedup.is_empty() {
            "# auto-generated: categories resolve to default annotations\n".to_string()
        } else {
            markedup.to_file_text()
        };
        write_file(&markedup_path, &text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> AtomRegistry {
        AtomRegistry::default()
    }

    fn cat(s: &str) -> Category {
        reg().parse_category(s).unwrap()
    }

    fn kinds(apps: &[BinaryApplication]) -> Vec<(String, BinaryRuleKind)> {
        apps.iter().map(|a| (a.result.print(), a.kind)).collect()
    }

    #[test]
    fn forward_application() {
        let apps = generic_binary(&cat("NP/N"), &cat("N"), &reg());
        assert_eq!(
            kinds(&apps),
            vec![("NP".to_string(), BinaryRuleKind::ForwardApplication)]
        );
    }

    #[test]
    fn backward_application() {
        let apps = generic_binary(&cat("NP"), &cat("NP\\NP"), &reg());
        assert_eq!(
            kinds(&apps),
            vec![("NP".to_string(), BinaryRuleKind::BackwardApplication)]
        );
    }

    #[test]
    fn forward_composition_propagates_features() {
        // the type-raised subject composing with the transitive verb yields
        // S[dcl]/NP: the feature learned on the cancelled verb phrase flows
        // into the result through the shared unspecified S
        let apps = generic_binary(&cat("S/(S\\NP)"), &cat("(S[dcl]\\NP)/NP"), &reg());
        assert_eq!(
            kinds(&apps),
            vec![("S[dcl]/NP".to_string(), BinaryRuleKind::ForwardComposition)]
        );
    }

    #[test]
    fn backward_crossed_composition() {
        let apps = generic_binary(&cat("(S[dcl]\\NP)/NP"), &cat("(S\\NP)\\(S\\NP)"), &reg());
        assert_eq!(
            kinds(&apps),
            vec![(
                "(S[dcl]\\NP)/NP".to_string(),
                BinaryRuleKind::BackwardCrossedComposition
            )]
        );
    }

    #[test]
    fn backward_composition() {
        let apps = generic_binary(&cat("(S\\NP)\\NP"), &cat("S[dcl]\\(S\\NP)"), &reg());
        assert_eq!(
            kinds(&apps),
            vec![(
                "S[dcl]\\NP".to_string(),
                BinaryRuleKind::BackwardComposition
            )]
        );
    }

    #[test]
    fn nothing_applies() {
        assert!(generic_binary(&cat("NP"), &cat("NP"), &reg()).is_empty());
    }

    #[test]
    fn feature_clash_blocks_application() {
        let apps = generic_binary(&cat("(S[dcl]\\NP)/S[em]"), &cat("S[dcl]"), &reg());
        assert!(apps.is_empty());
    }

    #[test]
    fn seen_rules_restrict_generic_results() {
        let mut tables = GrammarTables::empty(reg());
        tables.add_binary("NP/N", "N", cat("NP"), BinaryRuleKind::ForwardApplication, 3);
        let apps = apply_binary(&cat("NP/N"), &cat("N"), &tables, RuleMode::SeenRules);
        assert_eq!(apps.len(), 1);
        // a pair never observed yields nothing in seen-rules mode
        let apps = apply_binary(&cat("NP"), &cat("NP\\NP"), &tables, RuleMode::SeenRules);
        assert!(apps.is_empty());
    }

    #[test]
    fn treebank_binary_looked_up_verbatim() {
        let mut tables = GrammarTables::empty(reg());
        tables.add_binary("conj", "NP", cat("NP\\NP"), BinaryRuleKind::TreebankBinary, 2);
        let apps = apply_binary(&cat("conj"), &cat("NP"), &tables, RuleMode::SeenRules);
        assert_eq!(
            kinds(&apps),
            vec![("NP\\NP".to_string(), BinaryRuleKind::TreebankBinary)]
        );
        // but not in generic mode: no schema covers it
        assert!(apply_binary(&cat("conj"), &cat("NP"), &tables, RuleMode::Generic).is_empty());
    }

    #[test]
    fn unary_rules_are_table_driven() {
        let mut tables = GrammarTables::empty(reg());
        tables.add_unary(cat("NP"), cat("S/(S\\NP)"), UnaryRuleKind::TypeRaising, 5);
        tables.add_unary(cat("N"), cat("NP"), UnaryRuleKind::TypeChanging, 7);

        let apps = apply_unary(&cat("NP"), &tables);
        assert_eq!(apps.len(), 1);
        assert_eq!(apps[0].result.print(), "S/(S\\NP)");
        assert_eq!(apps[0].kind, UnaryRuleKind::TypeRaising);

        let apps = apply_unary(&cat("N"), &tables);
        assert_eq!(apps.len(), 1);
        assert_eq!(apps[0].result.print(), "NP");

        assert!(apply_unary(&cat("PP"), &tables).is_empty());
    }

    #[test]
    fn unary_empty_table_yields_nothing() {
        let tables = GrammarTables::empty(reg());
        assert!(apply_unary(&cat("PP"), &tables).is_empty());
    }

    #[test]
    fn infer_kind_prefers_application() {
        let k = infer_binary_kind(&cat("NP/N"), &cat("N"), &cat("NP"), &reg());
        assert_eq!(k, BinaryRuleKind::ForwardApplication);
        let k = infer_binary_kind(
            &cat("S/(S\\NP)"),
            &cat("(S[dcl]\\NP)/NP"),
            &cat("S[dcl]/NP"),
            &reg(),
        );
        assert_eq!(k, BinaryRuleKind::ForwardComposition);
        let k = infer_binary_kind(&cat("conj"), &cat("NP"), &cat("NP\\NP"), &reg());
        assert_eq!(k, BinaryRuleKind::TreebankBinary);
    }

    #[test]
    fn infer_unary_kinds() {
        assert_eq!(
            infer_unary_kind(&cat("NP"), &cat("S/(S\\NP)"), &reg()),
            UnaryRuleKind::TypeRaising
        );
        assert_eq!(
            infer_unary_kind(&cat("N"), &cat("NP"), &reg()),
            UnaryRuleKind::TypeChanging
        );
        // same-direction slashes are not raising
        assert_eq!(
            infer_unary_kind(&cat("NP"), &cat("S/(S/NP)"), &reg()),
            UnaryRuleKind::TypeChanging
        );
    }

    // Constructive schema property: building inputs from random parts, the
    // schema result must appear among the generic applications.
    #[test]
    fn generic_results_satisfy_schemata() {
        let parts = ["NP", "S[dcl]", "N", "S\\NP", "NP/N", "(S[dcl]\\NP)/NP"];
        let r = reg();
        for x in parts {
            for y in parts {
                let left = Category::forward(cat(x), cat(y));
                let apps = generic_binary(&left, &cat(y), &r);
                assert!(
                    apps.iter().any(|a| a.kind == BinaryRuleKind::ForwardApplication
                        && a.result == cat(x)),
                    "fa failed for X={x} Y={y}"
                );
                for z in parts {
                    let right = Category::forward(cat(y), cat(z));
                    let apps = generic_binary(&left, &right, &r);
                    assert!(
                        apps.iter().any(|a| a.kind == BinaryRuleKind::ForwardComposition
                            && a.result == Category::forward(cat(x), cat(z))),
                        "fc failed for X={x} Y={y} Z={z}"
                    );
                }
            }
        }
    }
}
