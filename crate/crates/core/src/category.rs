//! CCG categories: textual syntax, canonical printing, and feature
//! unification.
//!
//! Categories are finite trees built from atomic categories (drawn from a
//! configurable registry) and directional slashes. Feature-bearing atoms may
//! carry a concrete feature tag like `[dcl]` or the variable feature `[X]`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Direction of the argument of a complex category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slash {
    /// `/` — argument to the right.
    Forward,
    /// `\` — argument to the left.
    Backward,
}

impl Slash {
    pub fn as_char(self) -> char {
        match self {
            Slash::Forward => '/',
            Slash::Backward => '\\',
        }
    }
}

/// Feature on an atomic category: a concrete tag or the variable feature `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Var,
    Tag(String),
}

/// Atomic category with an optional feature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub feature: Option<Feature>,
}

/// A CCG category: atomic, or result-slash-argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Atomic(Atom),
    Complex(Box<Category>, Slash, Box<Category>),
}

impl Category {
    pub fn atom(name: &str) -> Category {
        Category::Atomic(Atom {
            name: name.to_string(),
            feature: None,
        })
    }

    pub fn atom_feat(name: &str, feature: &str) -> Category {
        let feature = if feature == VAR_FEATURE {
            Feature::Var
        } else {
            Feature::Tag(feature.to_string())
        };
        Category::Atomic(Atom {
            name: name.to_string(),
            feature: Some(feature),
        })
    }

    pub fn complex(result: Category, slash: Slash, argument: Category) -> Category {
        Category::Complex(Box::new(result), slash, Box::new(argument))
    }

    pub fn forward(result: Category, argument: Category) -> Category {
        Category::complex(result, Slash::Forward, argument)
    }

    pub fn backward(result: Category, argument: Category) -> Category {
        Category::complex(result, Slash::Backward, argument)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atomic(_))
    }

    /// Atom name if atomic.
    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Category::Atomic(a) => Some(&a.name),
            Category::Complex(..) => None,
        }
    }

    /// Number of nodes in the category tree.
    pub fn node_count(&self) -> usize {
        match self {
            Category::Atomic(_) => 1,
            Category::Complex(r, _, a) => 1 + r.node_count() + a.node_count(),
        }
    }

    /// True for modifier-shaped categories `X/X` or `X\X`, comparing the
    /// result and argument with all features stripped.
    pub fn is_modifier(&self) -> bool {
        match self {
            Category::Atomic(_) => false,
            Category::Complex(r, _, a) => strip_features(r) == strip_features(a),
        }
    }

    /// Canonical string: only the top level is unbracketed, internal complex
    /// subcategories are always bracketed, features appear in square
    /// brackets.
    pub fn print(&self) -> String {
        let mut out = String::new();
        print_into(self, &mut out, true, false);
        out
    }

    /// Canonical string with variable features erased (`S[X]` prints as `S`).
    /// Concrete features are preserved. This is the form used for rule-table
    /// keys, markedup keys and dependency evaluation.
    pub fn print_erased(&self) -> String {
        let mut out = String::new();
        print_into(self, &mut out, true, true);
        out
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

fn print_into(cat: &Category, out: &mut String, top: bool, erase_vars: bool) {
    match cat {
        Category::Atomic(a) => {
            out.push_str(&a.name);
            match &a.feature {
                Some(Feature::Tag(t)) => {
                    out.push('[');
                    out.push_str(t);
                    out.push(']');
                }
                Some(Feature::Var) if !erase_vars => {
                    out.push('[');
                    out.push_str(VAR_FEATURE);
                    out.push(']');
                }
                _ => {}
            }
        }
        Category::Complex(r, s, a) => {
            if !top {
                out.push('(');
            }
            print_into(r, out, false, erase_vars);
            out.push(s.as_char());
            print_into(a, out, false, erase_vars);
            if !top {
                out.push(')');
            }
        }
    }
}

/// Strip all features, returning a bare structural copy.
pub fn strip_features(cat: &Category) -> Category {
    match cat {
        Category::Atomic(a) => Category::atom(&a.name),
        Category::Complex(r, s, a) => {
            Category::complex(strip_features(r), *s, strip_features(a))
        }
    }
}

/// The reserved variable feature name.
pub const VAR_FEATURE: &str = "X";

/// Registry of atomic category names. Names are configuration loaded with
/// the grammar, not code; unknown names are a parse error. Only the
/// feature-bearing subset may carry a feature.
#[derive(Debug, Clone)]
pub struct AtomRegistry {
    atoms: BTreeSet<String>,
    featured: BTreeSet<String>,
}

impl Default for AtomRegistry {
    fn default() -> Self {
        let atoms = [
            "S", "N", "NP", "PP", "conj", "comma", "period", "colon", "semicolon", "LRB", "RRB",
        ];
        let featured = ["S", "N", "NP"];
        AtomRegistry {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            featured: featured.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl AtomRegistry {
    pub fn new(atoms: &[&str], featured: &[&str]) -> AtomRegistry {
        AtomRegistry {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            featured: featured.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.contains(name)
    }

    pub fn is_featured(&self, name: &str) -> bool {
        self.featured.contains(name)
    }

    pub fn add(&mut self, name: &str, featured: bool) {
        self.atoms.insert(name.to_string());
        if featured {
            self.featured.insert(name.to_string());
        }
    }

    /// Parse a registry from `atoms.txt` text: one atom per line, the name
    /// optionally followed by a tab and the word `feat` to mark it
    /// feature-bearing. `#` starts a comment line.
    pub fn parse(text: &str, file: &str) -> Result<AtomRegistry> {
        let mut reg = AtomRegistry {
            atoms: BTreeSet::new(),
            featured: BTreeSet::new(),
        };
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let name = parts.next().unwrap();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(Error::format(file, ln + 1, format!("bad atom name {name:?}")));
            }
            let featured = match parts.next() {
                None => false,
                Some("feat") => true,
                Some(other) => {
                    return Err(Error::format(file, ln + 1, format!("unknown marker {other:?}")))
                }
            };
            reg.add(name, featured);
        }
        Ok(reg)
    }

    pub fn to_file_text(&self) -> String {
        let mut out = String::new();
        for a in &self.atoms {
            out.push_str(a);
            if self.featured.contains(a) {
                out.push_str("\tfeat");
            }
            out.push('\n');
        }
        out
    }

    /// Parse a category string. Whitespace is not permitted. Slashes are
    /// left-associative; complex subcategories may always be bracketed.
    pub fn parse_category(&self, text: &str) -> Result<Category> {
        let mut p = Parser {
            reg: self,
            text: text.as_bytes(),
            pos: 0,
        };
        let cat = p.parse_cat()?;
        if p.pos != p.text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(cat)
    }
}

struct Parser<'a> {
    reg: &'a AtomRegistry,
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
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

    fn parse_cat(&mut self) -> Result<Category> {
        let mut cat = self.parse_primary()?;
        while let Some(c) = self.peek() {
            let slash = match c {
                b'/' => Slash::Forward,
                b'\\' => Slash::Backward,
                _ => break,
            };
            self.pos += 1;
            let arg = self.parse_primary()?;
            cat = Category::complex(cat, slash, arg);
        }
        Ok(cat)
    }

    fn parse_primary(&mut self) -> Result<Category> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let cat = self.parse_cat()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(cat)
            }
            Some(c) if c.is_ascii_alphanumeric() => self.parse_atom(),
            Some(c) if c.is_ascii_whitespace() => Err(self.err("whitespace not permitted")),
            _ => Err(self.err("expected category")),
        }
    }

    fn parse_atom(&mut self) -> Result<Category> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        if !self.reg.contains(name) {
            return Err(self.err(&format!("unknown atom {name:?}")));
        }
        let mut feature = None;
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let fstart = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                self.pos += 1;
            }
            let feat = std::str::from_utf8(&self.text[fstart..self.pos]).unwrap();
            if feat.is_empty() {
                return Err(self.err("empty feature"));
            }
            if self.peek() != Some(b']') {
                return Err(self.err("expected ']'"));
            }
            self.pos += 1;
            if !self.reg.is_featured(name) {
                return Err(self.err(&format!("atom {name:?} may not carry a feature")));
            }
            feature = Some(if feat == VAR_FEATURE {
                Feature::Var
            } else {
                Feature::Tag(feat.to_string())
            });
        }
        Ok(Category::Atomic(Atom {
            name: name.to_string(),
            feature,
        }))
    }
}

/// Which of the two unified categories a variable belongs to. The two inputs
/// of `unify` have independent variable scopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Identity of a feature variable within one side's scope. The explicit
/// variable is the written `[X]`; every feature-bearing atom name also has an
/// implicit variable shared by its unspecified occurrences on that side, so
/// that a feature learned for one occurrence propagates to the others
/// (CCGbank-style: `S/(S\NP)` composing with `(S[dcl]\NP)/NP` yields
/// `S[dcl]/NP`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    Explicit,
    Implicit(String),
}

/// Substitution produced by unification: concrete feature tags resolved for
/// the variables of each side. Applying a binding twice equals applying it
/// once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureBinding {
    assignments: BTreeMap<(Side, VarKey), String>,
}

impl FeatureBinding {
    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn get(&self, side: Side, key: &VarKey) -> Option<&str> {
        self.assignments
            .get(&(side, key.clone()))
            .map(|s| s.as_str())
    }

    /// Substitute resolved features into `cat`, which must come from the
    /// given side of the unification.
    pub fn apply(&self, cat: &Category, side: Side) -> Category {
        match cat {
            Category::Atomic(a) => {
                let key = match &a.feature {
                    Some(Feature::Tag(_)) => None,
                    Some(Feature::Var) => Some(VarKey::Explicit),
                    None => Some(VarKey::Implicit(a.name.clone())),
                };
                let feature = match key.and_then(|k| self.get(side, &k)) {
                    Some(tag) => Some(Feature::Tag(tag.to_string())),
                    None => a.feature.clone(),
                };
                Category::Atomic(Atom {
                    name: a.name.clone(),
                    feature,
                })
            }
            Category::Complex(r, s, a) => {
                Category::complex(self.apply(r, side), *s, self.apply(a, side))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Resolved {
    Tag(usize), // index into tags
    Free { has_explicit: bool },
}

/// Union-find over feature variables of both sides, with concrete
/// assignments.
struct FeatUf {
    ids: BTreeMap<(Side, VarKey), usize>,
    parent: Vec<usize>,
    state: Vec<Resolved>,
    tags: Vec<String>,
}

impl FeatUf {
    fn new() -> Self {
        FeatUf {
            ids: BTreeMap::new(),
            parent: Vec::new(),
            state: Vec::new(),
            tags: Vec::new(),
        }
    }

    fn var(&mut self, side: Side, key: VarKey, explicit: bool) -> usize {
        if let Some(&id) = self.ids.get(&(side, key.clone())) {
            return id;
        }
        let id = self.parent.len();
        self.parent.push(id);
        self.state.push(Resolved::Free {
            has_explicit: explicit,
        });
        self.ids.insert((side, key), id);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn assign(&mut self, x: usize, tag: &str) -> bool {
        let r = self.find(x);
        match self.state[r] {
            Resolved::Tag(t) => self.tags[t] == tag,
            Resolved::Free { .. } => {
                self.tags.push(tag.to_string());
                self.state[r] = Resolved::Tag(self.tags.len() - 1);
                true
            }
        }
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return true;
        }
        let merged = match (self.state[rx], self.state[ry]) {
            (Resolved::Tag(a), Resolved::Tag(b)) => {
                if self.tags[a] != self.tags[b] {
                    return false;
                }
                Resolved::Tag(a)
            }
            (Resolved::Tag(a), _) | (_, Resolved::Tag(a)) => Resolved::Tag(a),
            (Resolved::Free { has_explicit: a }, Resolved::Free { has_explicit: b }) => {
                Resolved::Free {
                    has_explicit: a || b,
                }
            }
        };
        self.parent[ry] = rx;
        self.state[rx] = merged;
        true
    }
}

enum FeatRef {
    Concrete(String),
    Var(usize),
    None, // non-featured atom
}

fn feat_ref(uf: &mut FeatUf, atom: &Atom, side: Side, reg: &AtomRegistry) -> FeatRef {
    match &atom.feature {
        Some(Feature::Tag(t)) => FeatRef::Concrete(t.clone()),
        Some(Feature::Var) => FeatRef::Var(uf.var(side, VarKey::Explicit, true)),
        None => {
            if reg.is_featured(&atom.name) {
                FeatRef::Var(uf.var(side, VarKey::Implicit(atom.name.clone()), false))
            } else {
                FeatRef::None
            }
        }
    }
}

fn unify_walk(
    uf: &mut FeatUf,
    a: &Category,
    b: &Category,
    reg: &AtomRegistry,
) -> bool {
    match (a, b) {
        (Category::Atomic(x), Category::Atomic(y)) => {
            if x.name != y.name {
                return false;
            }
            let fx = feat_ref(uf, x, Side::Left, reg);
            let fy = feat_ref(uf, y, Side::Right, reg);
            match (fx, fy) {
                (FeatRef::Concrete(s), FeatRef::Concrete(t)) => s == t,
                (FeatRef::Concrete(s), FeatRef::Var(v))
                | (FeatRef::Var(v), FeatRef::Concrete(s)) => uf.assign(v, &s),
                (FeatRef::Var(u), FeatRef::Var(v)) => uf.union(u, v),
                (FeatRef::None, FeatRef::None) => true,
                // same atom name implies same featured-ness
                _ => unreachable!("featured-ness differs for equal atom names"),
            }
        }
        (Category::Complex(ra, sa, aa), Category::Complex(rb, sb, ab)) => {
            sa == sb && unify_walk(uf, ra, rb, reg) && unify_walk(uf, aa, ab, reg)
        }
        _ => false,
    }
}

fn unified_result(uf: &mut FeatUf, a: &Category, b: &Category, reg: &AtomRegistry) -> Category {
    match (a, b) {
        (Category::Atomic(x), Category::Atomic(_)) => {
            let fx = feat_ref(uf, x, Side::Left, reg);
            let feature = match fx {
                FeatRef::Concrete(t) => Some(Feature::Tag(t)),
                FeatRef::None => None,
                FeatRef::Var(v) => {
                    let r = uf.find(v);
                    match uf.state[r] {
                        Resolved::Tag(t) => Some(Feature::Tag(uf.tags[t].clone())),
                        Resolved::Free { has_explicit } => {
                            if has_explicit {
                                Some(Feature::Var)
                            } else {
                                None
                            }
                        }
                    }
                }
            };
            Category::Atomic(Atom {
                name: x.name.clone(),
                feature,
            })
        }
        (Category::Complex(ra, s, aa), Category::Complex(rb, _, ab)) => Category::complex(
            unified_result(uf, ra, rb, reg),
            *s,
            unified_result(uf, aa, ab, reg),
        ),
        _ => unreachable!("shapes checked by unify_walk"),
    }
}

/// Unify two categories. Succeeds iff they are structurally identical up to
/// features; at each atom equal features match, an unspecified or variable
/// feature matches anything, and the result carries the more specific
/// feature. The binding records the variable instantiations of both sides.
pub fn unify(a: &Category, b: &Category, reg: &AtomRegistry) -> Option<(Category, FeatureBinding)> {
    let mut uf = FeatUf::new();
    if !unify_walk(&mut uf, a, b, reg) {
        return None;
    }
    let result = unified_result(&mut uf, a, b, reg);
    let mut binding = FeatureBinding::default();
    let keys: Vec<((Side, VarKey), usize)> =
        uf.ids.iter().map(|(k, &v)| (k.clone(), v)).collect();
    for (key, id) in keys {
        let r = uf.find(id);
        if let Resolved::Tag(t) = uf.state[r] {
            binding.assignments.insert(key, uf.tags[t].clone());
        }
    }
    Some((result, binding))
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

    #[test]
    fn parses_transitive_verb() {
        let c = cat("(S[dcl]\\NP)/NP");
        let inner = Category::complex(
            Category::atom_feat("S", "dcl"),
            Slash::Backward,
            Category::atom("NP"),
        );
        assert_eq!(
            c,
            Category::complex(inner, Slash::Forward, Category::atom("NP"))
        );
    }

    #[test]
    fn parses_atomic() {
        assert_eq!(cat("NP"), Category::atom("NP"));
    }

    #[test]
    fn parses_relative_pronoun() {
        let c = cat("(NP\\NP)/(S[dcl]/NP)");
        let left = Category::complex(Category::atom("NP"), Slash::Backward, Category::atom("NP"));
        let right = Category::complex(
            Category::atom_feat("S", "dcl"),
            Slash::Forward,
            Category::atom("NP"),
        );
        assert_eq!(c, Category::complex(left, Slash::Forward, right));
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(cat("(S[dcl]\\NP)/NP").print(), "(S[dcl]\\NP)/NP");
        assert_eq!(Category::atom("N").print(), "N");
        let raised = Category::forward(
            Category::atom("S"),
            Category::backward(Category::atom("S"), Category::atom("NP")),
        );
        assert_eq!(raised.print(), "S/(S\\NP)");
    }

    #[test]
    fn print_drops_redundant_outer_brackets() {
        assert_eq!(cat("((S[dcl]\\NP)/NP)").print(), "(S[dcl]\\NP)/NP");
    }

    #[test]
    fn left_associative_slashes() {
        assert_eq!(cat("S\\NP/NP").print(), "(S\\NP)/NP");
    }

    #[test]
    fn rejects_malformed() {
        assert!(reg().parse_category("").is_err());
        assert!(reg().parse_category("(S\\NP").is_err());
        assert!(reg().parse_category("S\\NP)").is_err());
        assert!(reg().parse_category("Q").is_err(), "unknown atom");
        assert!(reg().parse_category("PP[dcl]").is_err(), "feature on non-featured atom");
        assert!(reg().parse_category("S \\NP").is_err(), "whitespace");
        assert!(reg().parse_category("S[]").is_err());
    }

    #[test]
    fn unify_unspecified_with_specified() {
        let (c, _) = unify(&cat("S[dcl]"), &cat("S"), &reg()).unwrap();
        assert_eq!(c.print(), "S[dcl]");
        let (c, _) = unify(&cat("S"), &cat("S[dcl]"), &reg()).unwrap();
        assert_eq!(c.print(), "S[dcl]");
    }

    #[test]
    fn unify_feature_clash_fails() {
        assert!(unify(&cat("S[dcl]"), &cat("S[b]"), &reg()).is_none());
    }

    #[test]
    fn unify_variable_binds() {
        let (c, b) = unify(&cat("S[X]\\NP"), &cat("S[dcl]\\NP"), &reg()).unwrap();
        assert_eq!(c.print(), "S[dcl]\\NP");
        assert_eq!(b.get(Side::Left, &VarKey::Explicit), Some("dcl"));
    }

    // Exhaustive oracle over feature pairs on the default registry: unify of
    // S[f]\NP with S[g]\NP succeeds iff the features are compatible, and the
    // result carries the more specific feature.
    #[test]
    fn unify_feature_matrix_matches_enumeration() {
        let feats = ["", "[X]", "[dcl]", "[b]"];
        let r = reg();
        for fa in feats {
            for fb in feats {
                let a = r.parse_category(&format!("S{fa}\\NP")).unwrap();
                let b = r.parse_category(&format!("S{fb}\\NP")).unwrap();
                let got = unify(&a, &b, &r);
                // Brute-force expectation: concrete tags clash iff both
                // concrete and different; otherwise the more specific wins.
                let concrete = |f: &str| f != "" && f != "[X]";
                let expected = if concrete(fa) && concrete(fb) {
                    if fa == fb {
                        Some(fa)
                    } else {
                        None
                    }
                } else if concrete(fa) {
                    Some(fa)
                } else if concrete(fb) {
                    Some(fb)
                } else if fa == "[X]" || fb == "[X]" {
                    Some("[X]")
                } else {
                    Some("")
                };
                match expected {
                    None => assert!(got.is_none(), "{fa} vs {fb}"),
                    Some(f) => {
                        let (c, _) = got.expect("should unify");
                        assert_eq!(c.print(), format!("S{f}\\NP"), "{fa} vs {fb}");
                    }
                }
            }
        }
    }

    #[test]
    fn unify_self_is_identity() {
        for s in ["NP", "S[dcl]", "(S[X]\\NP)/NP", "(NP\\NP)/(S[dcl]/NP)"] {
            let c = cat(s);
            let (u, _) = unify(&c, &c, &reg()).unwrap();
            assert_eq!(u, c);
        }
    }

    #[test]
    fn unify_commutative_results() {
        let pairs = [
            ("S[dcl]\\NP", "S\\NP"),
            ("S[X]\\NP", "S[dcl]\\NP"),
            ("(S\\NP)/NP", "(S[b]\\NP)/NP"),
        ];
        for (a, b) in pairs {
            let ab = unify(&cat(a), &cat(b), &reg());
            let ba = unify(&cat(b), &cat(a), &reg());
            match (ab, ba) {
                (Some((x, _)), Some((y, _))) => assert_eq!(x, y),
                (None, None) => {}
                _ => panic!("commutativity violated for {a} / {b}"),
            }
        }
    }

    #[test]
    fn implicit_feature_links_within_one_side() {
        // Both unspecified S atoms on the left share an implicit variable, so
        // the feature learned on the inner one propagates to the outer one.
        let (c, b) = unify(&cat("S\\S"), &cat("S\\S[dcl]"), &reg()).unwrap();
        assert_eq!(c.print(), "S[dcl]\\S[dcl]");
        let left = cat("S\\S");
        assert_eq!(b.apply(&left, Side::Left).print(), "S[dcl]\\S[dcl]");
    }

    #[test]
    fn binding_apply_is_idempotent() {
        let (_, b) = unify(&cat("S[X]\\NP"), &cat("S[dcl]\\NP"), &reg()).unwrap();
        let c = cat("S[X]/NP");
        let once = b.apply(&c, Side::Left);
        let twice = b.apply(&once, Side::Left);
        assert_eq!(once, twice);
        assert_eq!(once.print(), "S[dcl]/NP");
    }

    #[test]
    fn registry_file_round_trip() {
        let text = "S\tfeat\nN\tfeat\nNP\tfeat\nPP\nconj\n";
        let r = AtomRegistry::parse(text, "atoms.txt").unwrap();
        assert!(r.contains("PP") && r.is_featured("S") && !r.is_featured("PP"));
        let r2 = AtomRegistry::parse(&r.to_file_text(), "atoms.txt").unwrap();
        assert_eq!(r.to_file_text(), r2.to_file_text());
    }
}
