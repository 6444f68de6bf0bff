//! Markedup knowledge: per lexical category, which argument slots generate
//! dependencies, how head variables propagate, and which fillers count as
//! long-range.
//!
//! A markedup entry is a category with annotations written inline:
//! `{n}` marks dependency slot `n` (the marker may sit on the argument node
//! itself or on any node inside it), `{V}` or `:V` attaches head variable
//! `V` to the preceding node, and `*` after a variable marks fillers bound
//! through that occurrence as long-range. The lexical head `_` is implicit
//! on the root.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::category::{Atom, AtomRegistry, Category, Feature, Slash, VAR_FEATURE};
use crate::error::{Error, Result};

/// A labelled predicate-argument dependency: slot `slot` of the lexical
/// category `head_cat` anchored at token `head`, filled by token `arg`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dependency {
    pub head: usize,
    pub head_cat: String,
    pub slot: u8,
    pub arg: usize,
    pub long_range: bool,
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.head,
            self.head_cat,
            self.slot,
            self.arg,
            if self.long_range { 1 } else { 0 }
        )
    }
}

/// Head-variable annotation on one category node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarAnn {
    pub name: String,
    pub star: bool,
}

/// A dependency slot: its 1-based number is its position in
/// `AnnotatedCategory::slots`; `arg_root` is the preorder index of the
/// argument-position node the slot fills from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAnn {
    pub arg_root: usize,
}

/// A lexical category annotated with head variables and numbered dependency
/// slots. Node annotations are stored in preorder over the skeleton (root
/// first, then result subtree, then argument subtree).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedCategory {
    pub skeleton: Category,
    pub vars: Vec<Option<VarAnn>>,
    pub slots: Vec<SlotAnn>,
}

/// Preorder subtree sizes for every node of a category.
pub fn subtree_sizes(cat: &Category) -> Vec<usize> {
    fn walk(cat: &Category, out: &mut Vec<usize>) -> usize {
        let idx = out.len();
        out.push(0);
        let size = match cat {
            Category::Atomic(_) => 1,
            Category::Complex(r, _, a) => 1 + walk(r, out) + walk(a, out),
        };
        out[idx] = size;
        size
    }
    let mut out = Vec::new();
    walk(cat, &mut out);
    out
}

/// Preorder indices of the argument-position roots obtained by peeling the
/// category spine outermost-first. With `modifier_stop`, peeling halts after
/// the argument of a modifier-shaped `X|X` level (the result mirrors the
/// argument rather than taking arguments of its own).
pub fn spine_arguments(cat: &Category, modifier_stop: bool) -> Vec<usize> {
    let mut out = Vec::new();
    let mut node = 0usize;
    let mut cur = cat;
    loop {
        match cur {
            Category::Atomic(_) => break,
            Category::Complex(r, _, _a) => {
                let rsize = r.node_count();
                out.push(node + 1 + rsize);
                if modifier_stop && cur.is_modifier() {
                    break;
                }
                cur = r;
                node += 1;
            }
        }
    }
    out
}

impl AnnotatedCategory {
    /// Fallback annotation: argument slots numbered left-to-right as they
    /// appear in the printed category (modifier-shaped levels contribute only
    /// their argument), no head variables, no long-range flags.
    pub fn default_annotation(cat: &Category) -> AnnotatedCategory {
        let mut args = spine_arguments(cat, true);
        // peel order is outermost-first; within the spine, string order is
        // ascending preorder index
        args.sort_unstable();
        AnnotatedCategory {
            skeleton: cat.clone(),
            vars: vec![None; cat.node_count()],
            slots: args.into_iter().map(|arg_root| SlotAnn { arg_root }).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.vars.len()
    }

    fn validate(&self, file: &str, line: usize) -> Result<()> {
        if self.vars[0].is_some() {
            return Err(Error::format(
                file,
                line,
                "root carries the implicit lexical head",
            ));
        }
        // every starred variable needs an unstarred binding site
        let mut plain = BTreeSet::new();
        let mut starred = BTreeSet::new();
        for v in self.vars.iter().flatten() {
            if v.star {
                starred.insert(v.name.clone());
            } else {
                plain.insert(v.name.clone());
            }
        }
        for name in starred {
            if !plain.contains(&name) {
                return Err(Error::format(
                    file,
                    line,
                    format!("dangling head variable {name}: starred occurrence has no binding site"),
                ));
            }
        }
        Ok(())
    }
}

/// One markedup record: the annotated category plus an optional relation
/// name per slot.
#[derive(Debug, Clone)]
pub struct MarkedupEntry {
    pub annotated: AnnotatedCategory,
    pub relations: Vec<Option<String>>,
}

/// Map from lexical category (canonical string, variable features erased) to
/// its annotation. Categories without an entry resolve to the default
/// annotation.
#[derive(Debug, Clone, Default)]
pub struct MarkedupTable {
    entries: BTreeMap<String, MarkedupEntry>,
}

impl MarkedupTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&MarkedupEntry> {
        self.entries.get(key)
    }

    /// Annotation for a lexical category: the table entry when present,
    /// otherwise the default annotation.
    pub fn resolve(&self, cat: &Category) -> AnnotatedCategory {
        match self.entries.get(&cat.print_erased()) {
            Some(e) => e.annotated.clone(),
            None => AnnotatedCategory::default_annotation(cat),
        }
    }

    /// Relation name for a (category, slot) pair, when annotated.
    pub fn relation(&self, cat_key: &str, slot: u8) -> Option<&str> {
        self.entries
            .get(cat_key)
            .and_then(|e| e.relations.get(slot as usize - 1))
            .and_then(|r| r.as_deref())
    }

    pub fn insert(&mut self, key: String, entry: MarkedupEntry) -> bool {
        self.entries.insert(key, entry).is_none()
    }

    /// Parse markedup text: one record per line, the annotated category
    /// optionally followed by tab-separated relation names for slots 1..k.
    /// Lines starting with `#` are comments.
    pub fn parse(text: &str, file: &str, reg: &AtomRegistry) -> Result<MarkedupTable> {
        let mut table = MarkedupTable::default();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let cat_text = fields.next().unwrap();
            let annotated = parse_annotated(cat_text, reg)
                .map_err(|e| Error::format(file, ln + 1, e.to_string()))?;
            annotated.validate(file, ln + 1)?;
            let names: Vec<String> = fields.map(|s| s.to_string()).collect();
            if names.len() > annotated.slots.len() {
                return Err(Error::format(
                    file,
                    ln + 1,
                    format!(
                        "{} relation names for {} slots",
                        names.len(),
                        annotated.slots.len()
                    ),
                ));
            }
            let mut relations: Vec<Option<String>> = names
                .into_iter()
                .map(|n| if n.is_empty() { None } else { Some(n) })
                .collect();
            relations.resize(annotated.slots.len(), None);
            let key = annotated.skeleton.print_erased();
            if !table.insert(key.clone(), MarkedupEntry { annotated, relations }) {
                return Err(Error::format(file, ln + 1, format!("duplicate entry for {key}")));
            }
        }
        Ok(table)
    }

    /// Serialize in the markedup file format.
    pub fn to_file_text(&self) -> String {
        let mut out = String::new();
        for entry in self.entries.values() {
            out.push_str(&print_annotated(&entry.annotated));
            for rel in &entry.relations {
                out.push('\t');
                if let Some(r) = rel {
                    out.push_str(r);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Render an annotated category back to markedup syntax (slot markers are
/// normalized onto their argument-position nodes).
pub fn print_annotated(ann: &AnnotatedCategory) -> String {
    let mut slot_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, s) in ann.slots.iter().enumerate() {
        slot_of.insert(s.arg_root, i + 1);
    }
    fn walk(
        cat: &Category,
        idx: usize,
        ann: &AnnotatedCategory,
        slot_of: &BTreeMap<usize, usize>,
        out: &mut String,
        top: bool,
    ) {
        match cat {
            Category::Atomic(a) => {
                out.push_str(&a.name);
                match &a.feature {
                    Some(Feature::Tag(t)) => {
                        out.push('[');
                        out.push_str(t);
                        out.push(']');
                    }
                    Some(Feature::Var) => {
                        out.push('[');
                        out.push_str(VAR_FEATURE);
                        out.push(']');
                    }
                    None => {}
                }
            }
            Category::Complex(r, s, a) => {
                if !top {
                    out.push('(');
                }
                walk(r, idx + 1, ann, slot_of, out, false);
                out.push(s.as_char());
                walk(a, idx + 1 + r.node_count(), ann, slot_of, out, false);
                if !top {
                    out.push(')');
                }
            }
        }
        if let Some(n) = slot_of.get(&idx) {
            out.push('{');
            out.push_str(&n.to_string());
            out.push('}');
        }
        if let Some(v) = &ann.vars[idx] {
            out.push(':');
            out.push_str(&v.name);
            if v.star {
                out.push('*');
            }
        }
    }
    let mut out = String::new();
    walk(&ann.skeleton, 0, ann, &slot_of, &mut out, true);
    out
}

/// Parse tree carrying annotations alongside the category shape.
enum AnnTree {
    Leaf(Atom, Suffix),
    Node(Box<AnnTree>, Slash, Box<AnnTree>, Suffix),
}

#[derive(Default)]
struct Suffix {
    var: Option<VarAnn>,
    slot: Option<u32>,
}

impl AnnTree {
    fn suffix_mut(&mut self) -> &mut Suffix {
        match self {
            AnnTree::Leaf(_, s) => s,
            AnnTree::Node(_, _, _, s) => s,
        }
    }

    fn flatten(
        &self,
        vars: &mut Vec<Option<VarAnn>>,
        marks: &mut Vec<(u32, usize)>,
    ) -> Category {
        let idx = vars.len();
        vars.push(None);
        let (cat, suffix) = match self {
            AnnTree::Leaf(a, s) => (Category::Atomic(a.clone()), s),
            AnnTree::Node(r, sl, a, s) => {
                let rc = r.flatten(vars, marks);
                let ac = a.flatten(vars, marks);
                (Category::complex(rc, *sl, ac), s)
            }
        };
        vars[idx] = suffix.var.clone();
        if let Some(n) = suffix.slot {
            marks.push((n, idx));
        }
        cat
    }
}

struct AnnParser<'a> {
    reg: &'a AtomRegistry,
    text: &'a [u8],
    pos: usize,
}

impl<'a> AnnParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Category(format!(
            "{} at byte {} in {:?}",
            msg,
            self.pos,
            String::from_utf8_lossy(self.text)
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn parse_cat(&mut self) -> Result<AnnTree> {
        let mut tree = self.parse_primary()?;
        loop {
            let slash = match self.peek() {
                Some(b'/') => Slash::Forward,
                Some(b'\\') => Slash::Backward,
                _ => break,
            };
            self.pos += 1;
            let arg = self.parse_primary()?;
            tree = AnnTree::Node(Box::new(tree), slash, Box::new(arg), Suffix::default());
        }
        Ok(tree)
    }

    fn parse_primary(&mut self) -> Result<AnnTree> {
        let mut tree = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let tree = self.parse_cat()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                tree
            }
            Some(c) if c.is_ascii_alphanumeric() => {
                let atom = self.parse_atom()?;
                AnnTree::Leaf(atom, Suffix::default())
            }
            _ => return Err(self.err("expected category")),
        };
        self.parse_suffixes(tree.suffix_mut())?;
        Ok(tree)
    }

    fn parse_atom(&mut self) -> Result<Atom> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string();
        if !self.reg.contains(&name) {
            return Err(self.err(&format!("unknown atom {name:?}")));
        }
        let mut feature = None;
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let fstart = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                self.pos += 1;
            }
            let feat = std::str::from_utf8(&self.text[fstart..self.pos])
                .unwrap()
                .to_string();
            if self.peek() != Some(b']') || feat.is_empty() {
                return Err(self.err("bad feature"));
            }
            self.pos += 1;
            if !self.reg.is_featured(&name) {
                return Err(self.err(&format!("atom {name:?} may not carry a feature")));
            }
            feature = Some(if feat == VAR_FEATURE {
                Feature::Var
            } else {
                Feature::Tag(feat)
            });
        }
        Ok(Atom { name, feature })
    }

    fn parse_suffixes(&mut self, suffix: &mut Suffix) -> Result<()> {
        loop {
            match self.peek() {
                Some(b'{') => {
                    self.pos += 1;
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c != b'}') {
                        self.pos += 1;
                    }
                    if self.peek() != Some(b'}') {
                        return Err(self.err("expected '}'"));
                    }
                    let body = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
                    self.pos += 1;
                    if body.is_empty() {
                        return Err(self.err("empty annotation"));
                    }
                    if body.chars().all(|c| c.is_ascii_digit()) {
                        if suffix.slot.is_some() {
                            return Err(self.err("node has two slot markers"));
                        }
                        suffix.slot = Some(body.parse().map_err(|_| self.err("bad slot number"))?);
                    } else {
                        self.set_var(suffix, body)?;
                    }
                }
                Some(b':') => {
                    self.pos += 1;
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_uppercase() || c == b'*') {
                        self.pos += 1;
                    }
                    let body = std::str::from_utf8(&self.text[start..self.pos])
                        .unwrap()
                        .to_string();
                    if body.is_empty() {
                        return Err(self.err("expected variable after ':'"));
                    }
                    self.set_var(suffix, &body)?;
                }
                _ => return Ok(()),
            }
        }
    }

    fn set_var(&mut self, suffix: &mut Suffix, body: &str) -> Result<()> {
        let (name, star) = match body.strip_suffix('*') {
            Some(n) => (n, true),
            None => (body, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_uppercase()) {
            return Err(self.err(&format!("bad head variable {name:?}")));
        }
        if suffix.var.is_some() {
            return Err(self.err("node has two head variables"));
        }
        suffix.var = Some(VarAnn {
            name: name.to_string(),
            star,
        });
        Ok(())
    }
}

/// Parse one annotated-category record (without relation names).
pub fn parse_annotated(text: &str, reg: &AtomRegistry) -> Result<AnnotatedCategory> {
    let mut p = AnnParser {
        reg,
        text: text.as_bytes(),
        pos: 0,
    };
    let tree = p.parse_cat()?;
    if p.pos != p.text.len() {
        return Err(p.err("trailing input"));
    }

    let mut vars = Vec::new();
    let mut marks = Vec::new();
    let cat = tree.flatten(&mut vars, &mut marks);

    // attach each slot mark to the argument position containing it
    let sizes = subtree_sizes(&cat);
    let args = spine_arguments(&cat, false);
    let mut slot_for: BTreeMap<u32, usize> = BTreeMap::new();
    for (n, node) in marks {
        let pos = args
            .iter()
            .copied()
            .find(|&a| node >= a && node < a + sizes[a])
            .ok_or_else(|| {
                Error::Category(format!("slot {n} marker outside any argument in {text:?}"))
            })?;
        if slot_for.insert(n, pos).is_some() {
            return Err(Error::Category(format!("duplicate slot {n} in {text:?}")));
        }
    }
    let k = slot_for.len() as u32;
    let mut slots = Vec::new();
    for n in 1..=k {
        let pos = *slot_for.get(&n).ok_or_else(|| {
            Error::Category(format!("slot numbers not contiguous from 1 in {text:?}"))
        })?;
        slots.push(SlotAnn { arg_root: pos });
    }
    let distinct: BTreeSet<usize> = slots.iter().map(|s| s.arg_root).collect();
    if distinct.len() != slots.len() {
        return Err(Error::Category(format!("two slots on one argument in {text:?}")));
    }

    Ok(AnnotatedCategory {
        skeleton: cat,
        vars,
        slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> AtomRegistry {
        AtomRegistry::default()
    }

    #[test]
    fn transitive_verb_entry() {
        let ann = parse_annotated("(S[dcl]\\NP{1}:Y)/NP{2}:Z", &reg()).unwrap();
        assert_eq!(ann.skeleton.print(), "(S[dcl]\\NP)/NP");
        assert_eq!(ann.slots.len(), 2);
        // preorder: 0 root, 1 (S[dcl]\NP), 2 S[dcl], 3 NP(subject), 4 NP(object)
        assert_eq!(ann.slots[0].arg_root, 3, "subject slot");
        assert_eq!(ann.slots[1].arg_root, 4, "object slot");
        assert_eq!(ann.vars[3], Some(VarAnn { name: "Y".into(), star: false }));
        assert_eq!(ann.vars[4], Some(VarAnn { name: "Z".into(), star: false }));
    }

    #[test]
    fn atomic_entry_has_no_slots() {
        let ann = parse_annotated("N", &reg()).unwrap();
        assert!(ann.slots.is_empty());
    }

    #[test]
    fn object_rel_pronoun_entry() {
        let ann = parse_annotated("(NP{Y}\\NP{1}:Y)/(S[dcl]{2}:Z/NP{Y*})", &reg()).unwrap();
        assert_eq!(ann.skeleton.print(), "(NP\\NP)/(S[dcl]/NP)");
        assert_eq!(ann.slots.len(), 2);
        // preorder: 0 root, 1 (NP\NP), 2 NP, 3 NP, 4 (S[dcl]/NP), 5 S[dcl], 6 NP
        assert_eq!(ann.slots[0].arg_root, 3, "modifiee slot on the NP argument");
        assert_eq!(ann.slots[1].arg_root, 4, "clause slot on the clause argument");
        assert_eq!(ann.vars[2], Some(VarAnn { name: "Y".into(), star: false }));
        assert_eq!(
            ann.vars[6],
            Some(VarAnn { name: "Y".into(), star: true }),
            "gap occurrence is starred"
        );
    }

    #[test]
    fn default_annotation_transitive() {
        let cat = reg().parse_category("(S[dcl]\\NP)/NP").unwrap();
        let ann = AnnotatedCategory::default_annotation(&cat);
        let hand = parse_annotated("(S[dcl]\\NP{1}:Y)/NP{2}:Z", &reg()).unwrap();
        assert_eq!(
            ann.slots.iter().map(|s| s.arg_root).collect::<Vec<_>>(),
            hand.slots.iter().map(|s| s.arg_root).collect::<Vec<_>>()
        );
    }

    #[test]
    fn default_annotation_atomic() {
        let ann = AnnotatedCategory::default_annotation(&Category::atom("NP"));
        assert!(ann.slots.is_empty());
    }

    #[test]
    fn default_annotation_modifier_of_modifier() {
        // (N/N)/(N/N): the whole category is modifier-shaped, so only its
        // argument gets a slot.
        let cat = reg().parse_category("(N/N)/(N/N)").unwrap();
        let ann = AnnotatedCategory::default_annotation(&cat);
        assert_eq!(ann.slots.len(), 1);
        // preorder: 0 root, 1 (N/N), 2 N, 3 N, 4 (N/N) argument
        assert_eq!(ann.slots[0].arg_root, 4);
    }

    #[test]
    fn dangling_star_rejected() {
        let table = MarkedupTable::parse("(NP\\NP{1})/NP{Z*}\n", "m", &reg());
        assert!(table.is_err());
    }

    #[test]
    fn duplicate_entry_rejected() {
        let text = "N/N{1}\nN/N{1}\n";
        assert!(MarkedupTable::parse(text, "m", &reg()).is_err());
    }

    #[test]
    fn slot_numbers_must_be_contiguous() {
        assert!(parse_annotated("(S[dcl]\\NP{1})/NP{3}", &reg()).is_err());
        assert!(parse_annotated("(S[dcl]\\NP{2})/NP{2}", &reg()).is_err());
    }

    #[test]
    fn relation_names_attach() {
        let text =
            "(S[dcl]\\NP{1}:Y)/NP{2}:Z\ttransitive verb\ttransitive verb\nNP{Y}/N{1}:Y\tdeterminer\n";
        let t = MarkedupTable::parse(text, "m", &reg()).unwrap();
        assert_eq!(t.relation("(S[dcl]\\NP)/NP", 1), Some("transitive verb"));
        assert_eq!(t.relation("NP/N", 1), Some("determiner"));
        assert_eq!(t.relation("NP/N", 2), None);
    }

    #[test]
    fn resolve_falls_back_to_default() {
        let t = MarkedupTable::default();
        let cat = reg().parse_category("(S[dcl]\\NP)/NP").unwrap();
        assert_eq!(t.resolve(&cat).slots.len(), 2);
    }

    #[test]
    fn print_annotated_round_trips() {
        for text in [
            "(S[dcl]\\NP{1}:Y)/NP{2}:Z",
            "(NP{Y}\\NP{1}:Y)/(S[dcl]/NP{Y*}){2}",
            "N/N{1}",
        ] {
            let a = parse_annotated(text, &reg()).unwrap();
            let printed = print_annotated(&a);
            let b = parse_annotated(&printed, &reg()).unwrap();
            assert_eq!(a, b, "{text} -> {printed}");
        }
    }
}
