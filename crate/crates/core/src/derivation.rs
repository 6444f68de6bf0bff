//! Derivation trees and their bracketed text format:
//! `(<T cat rule> child child)` for internal nodes and
//! `(<L cat word index>)` for leaves, one tree per line.

use crate::category::{AtomRegistry, Category};
use crate::error::{Error, Result};
use crate::grammar::{BinaryRuleKind, UnaryRuleKind};

#[derive(Debug, Clone, PartialEq)]
pub enum DerivNode {
    Leaf {
        cat: Category,
        word: String,
        index: usize,
    },
    Unary {
        cat: Category,
        kind: UnaryRuleKind,
        child: Box<DerivNode>,
    },
    Binary {
        cat: Category,
        kind: BinaryRuleKind,
        left: Box<DerivNode>,
        right: Box<DerivNode>,
    },
}

impl DerivNode {
    pub fn cat(&self) -> &Category {
        match self {
            DerivNode::Leaf { cat, .. }
            | DerivNode::Unary { cat, .. }
            | DerivNode::Binary { cat, .. } => cat,
        }
    }

    /// Token span covered, computed from leaf indices.
    pub fn span(&self) -> (usize, usize) {
        match self {
            DerivNode::Leaf { index, .. } => (*index, *index + 1),
            DerivNode::Unary { child, .. } => child.span(),
            DerivNode::Binary { left, right, .. } => (left.span().0, right.span().1),
        }
    }

    pub fn leaves(&self) -> Vec<&DerivNode> {
        let mut out = Vec::new();
        fn walk<'a>(n: &'a DerivNode, out: &mut Vec<&'a DerivNode>) {
            match n {
                DerivNode::Leaf { .. } => out.push(n),
                DerivNode::Unary { child, .. } => walk(child, out),
                DerivNode::Binary { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Leaf spans and indices are contiguous and children partition parents.
    pub fn check_spans(&self) -> std::result::Result<(), String> {
        let leaves = self.leaves();
        let start = match leaves.first() {
            Some(DerivNode::Leaf { index, .. }) => *index,
            _ => return Err("empty derivation".into()),
        };
        for (k, leaf) in leaves.iter().enumerate() {
            let DerivNode::Leaf { index, .. } = leaf else {
                unreachable!()
            };
            if *index != start + k {
                return Err(format!("leaf index {index} out of order"));
            }
        }
        Ok(())
    }

    /// The label stacks used for span scoring: one entry per span that hosts
    /// internal nodes, the labels joined bottom-to-top (a binary result plus
    /// any unary targets above it; unaries over a leaf contribute only their
    /// targets). Bare leaves contribute nothing.
    pub fn span_stacks(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        fn walk(n: &DerivNode, stack_top: bool, out: &mut Vec<(usize, usize, String)>) {
            if stack_top {
                // collect the maximal unary chain at this span
                let mut labels: Vec<String> = Vec::new();
                let mut cur = n;
                loop {
                    match cur {
                        DerivNode::Unary { cat, child, .. } => {
                            labels.push(cat.print_erased());
                            cur = child;
                        }
                        DerivNode::Binary { cat, .. } => {
                            labels.push(cat.print_erased());
                            break;
                        }
                        DerivNode::Leaf { .. } => break,
                    }
                }
                if !labels.is_empty() {
                    labels.reverse();
                    let (s, e) = n.span();
                    out.push((s, e, labels.join("|")));
                }
                // descend past the chain
                match cur {
                    DerivNode::Binary { left, right, .. } => {
                        walk(left, true, out);
                        walk(right, true, out);
                    }
                    _ => {}
                }
            } else {
                unreachable!("walk always enters at a stack top")
            }
        }
        walk(self, true, &mut out);
        out.sort();
        out
    }

    pub fn print(&self) -> String {
        let mut out = String::new();
        self.print_into(&mut out);
        out
    }

    fn print_into(&self, out: &mut String) {
        match self {
            DerivNode::Leaf { cat, word, index } => {
                out.push_str("(<L ");
                out.push_str(&cat.print());
                out.push(' ');
                out.push_str(word);
                out.push(' ');
                out.push_str(&index.to_string());
                out.push_str(">)");
            }
            DerivNode::Unary { cat, kind, child } => {
                out.push_str("(<T ");
                out.push_str(&cat.print());
                out.push(' ');
                out.push_str(kind.token());
                out.push_str("> ");
                child.print_into(out);
                out.push(')');
            }
            DerivNode::Binary {
                cat,
                kind,
                left,
                right,
            } => {
                out.push_str("(<T ");
                out.push_str(&cat.print());
                out.push(' ');
                out.push_str(kind.token());
                out.push_str("> ");
                left.print_into(out);
                out.push(' ');
                right.print_into(out);
                out.push(')');
            }
        }
    }

    /// Parse one bracketed derivation.
    pub fn parse(text: &str, reg: &AtomRegistry) -> Result<DerivNode> {
        let mut p = DerivParser {
            reg,
            text: text.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let node = p.parse_node()?;
        p.skip_ws();
        if p.pos != p.text.len() {
            return Err(p.err("trailing input"));
        }
        node.check_spans().map_err(Error::Category)?;
        Ok(node)
    }
}

struct DerivParser<'a> {
    reg: &'a AtomRegistry,
    text: &'a [u8],
    pos: usize,
}

impl<'a> DerivParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Category(format!("derivation: {} at byte {}", msg, self.pos))
    }

    fn skip_ws(&mut self) {
        while matches!(self.text.get(self.pos), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.text[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected {s:?}")))
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        // categories contain parentheses, so tokens end only at whitespace
        // or the node-header close
        let start = self.pos;
        while matches!(self.text.get(self.pos), Some(c) if !c.is_ascii_whitespace() && *c != b'>')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected token"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).unwrap())
    }

    fn parse_node(&mut self) -> Result<DerivNode> {
        self.expect("(<")?;
        let tag = self.text.get(self.pos).copied();
        self.pos += 1;
        match tag {
            Some(b'L') => {
                self.skip_ws();
                let cat = self.reg.parse_category(self.token()?)?;
                self.skip_ws();
                let word = self.token()?.to_string();
                self.skip_ws();
                let index: usize = self
                    .token()?
                    .parse()
                    .map_err(|_| self.err("bad leaf index"))?;
                self.expect(">)")?;
                Ok(DerivNode::Leaf { cat, word, index })
            }
            Some(b'T') => {
                self.skip_ws();
                let cat = self.reg.parse_category(self.token()?)?;
                self.skip_ws();
                let rule = self.token()?;
                self.expect(">")?;
                self.skip_ws();
                let first = self.parse_node()?;
                self.skip_ws();
                let node = if self.text.get(self.pos) == Some(&b')') {
                    let kind = UnaryRuleKind::from_token(rule)
                        .ok_or_else(|| self.err(&format!("unknown unary rule {rule:?}")))?;
                    DerivNode::Unary {
                        cat,
                        kind,
                        child: Box::new(first),
                    }
                } else {
                    let second = self.parse_node()?;
                    self.skip_ws();
                    let kind = BinaryRuleKind::from_token(rule)
                        .ok_or_else(|| self.err(&format!("unknown binary rule {rule:?}")))?;
                    DerivNode::Binary {
                        cat,
                        kind,
                        left: Box::new(first),
                        right: Box::new(second),
                    }
                };
                self.expect(")")?;
                Ok(node)
            }
            _ => Err(self.err("expected <L or <T")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::AtomRegistry;

    fn reg() -> AtomRegistry {
        AtomRegistry::default()
    }

    #[test]
    fn single_leaf_round_trips() {
        let n = DerivNode::parse("(<L NP it 0>)", &reg()).unwrap();
        assert_eq!(n.span(), (0, 1));
        assert_eq!(n.print(), "(<L NP it 0>)");
    }

    #[test]
    fn figure_two_tree_round_trips() {
        let text = "(<T NP ba> (<T NP fa> (<L NP/N the 0>) (<L N agreement 1>)) (<T NP\\NP fa> (<L (NP\\NP)/(S[dcl]/NP) which 2>) (<T S[dcl]/NP fc> (<T S/(S\\NP) tr> (<T NP fa> (<L NP/N the 3>) (<L N fund 4>))) (<L (S[dcl]\\NP)/NP reached 5>))))";
        let n = DerivNode::parse(text, &reg()).unwrap();
        assert_eq!(n.print(), text);
        assert_eq!(n.span(), (0, 6));
        assert_eq!(n.cat().print(), "NP");
    }

    #[test]
    fn span_stacks_collapse_unary_chains() {
        let text = "(<T NP ba> (<T NP fa> (<L NP/N the 0>) (<L N agreement 1>)) (<T NP\\NP fa> (<L (NP\\NP)/(S[dcl]/NP) which 2>) (<T S[dcl]/NP fc> (<T S/(S\\NP) tr> (<T NP fa> (<L NP/N the 3>) (<L N fund 4>))) (<L (S[dcl]\\NP)/NP reached 5>))))";
        let n = DerivNode::parse(text, &reg()).unwrap();
        let stacks = n.span_stacks();
        assert!(stacks.contains(&(3, 6, "S[dcl]/NP".to_string())));
        assert!(
            stacks.contains(&(3, 5, "NP|S/(S\\NP)".to_string())),
            "type-raised span is a single chained label: {stacks:?}"
        );
        assert!(stacks.contains(&(0, 6, "NP".to_string())));
        assert!(stacks.contains(&(0, 2, "NP".to_string())));
        assert!(stacks.contains(&(2, 6, "NP\\NP".to_string())));
        assert_eq!(stacks.len(), 5);
    }

    #[test]
    fn unary_over_leaf_contributes_target_only() {
        let text = "(<T NP tc> (<L N investors 0>))";
        let n = DerivNode::parse(text, &reg()).unwrap();
        assert_eq!(n.span_stacks(), vec![(0, 1, "NP".to_string())]);
    }

    #[test]
    fn bad_brackets_rejected() {
        assert!(DerivNode::parse("(<T NP fa> (<L NP a 0>)", &reg()).is_err());
        assert!(DerivNode::parse("(<L Q a 0>)", &reg()).is_err());
    }

    #[test]
    fn leaf_indices_must_be_contiguous() {
        let text = "(<T N fa> (<L N/N a 0>) (<L N b 2>))";
        assert!(DerivNode::parse(text, &reg()).is_err());
    }
}
