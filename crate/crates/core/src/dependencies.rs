//! Head propagation and dependency filling during rule application.
//!
//! Every analysis carries, per node of its category, a head cell. Cells hold
//! token indices. When two categories cancel, corresponding nodes' cells
//! merge, the consumed constituent's heads pour into the cancelled argument
//! position, and any dependency slot whose cell becomes populated fills (one
//! dependency per head, so coordinated constituents fill a slot once per
//! conjunct). Head variables in the markedup annotation coindex cells;
//! fillers that travel through a starred occurrence are marked long-range.

use std::rc::Rc;

use crate::category::Category;
use crate::grammar::{BinaryApplication, BinaryRuleKind, UnaryRuleKind};
use crate::markedup::{AnnotatedCategory, Dependency};

/// A dependency slot waiting for its filler.
#[derive(Debug, Clone)]
pub struct UnfilledDep {
    pub head: usize,
    pub head_cat: Rc<str>,
    pub slot: u8,
    cell: usize,
    pub long_range: bool,
}

/// The predicate-argument state of one analysis: category, head cells,
/// item heads and pending dependency slots.
#[derive(Debug, Clone)]
pub struct HeadedItem {
    pub cat: Category,
    pub cat_key: Rc<str>,
    node_cell: Vec<usize>,
    node_star: Vec<bool>,
    cells: Vec<Vec<usize>>,
    pub heads: Vec<usize>,
    pub unfilled: Vec<UnfilledDep>,
    /// set on conj-absorption items so the final coordination step unions
    /// conjunct heads
    pub coordination: bool,
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

struct Uf {
    parent: Vec<usize>,
}

impl Uf {
    fn new(n: usize) -> Uf {
        Uf {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Preorder range of the result subtree of a complex category.
fn result_range(cat: &Category) -> std::ops::Range<usize> {
    match cat {
        Category::Atomic(_) => 0..0,
        Category::Complex(r, _, _) => 1..1 + r.node_count(),
    }
}

/// Preorder range of the argument subtree of a complex category.
fn argument_range(cat: &Category) -> std::ops::Range<usize> {
    match cat {
        Category::Atomic(_) => 0..0,
        Category::Complex(r, _, _) => {
            let start = 1 + r.node_count();
            start..cat.node_count()
        }
    }
}

const PUNCT_ATOMS: [&str; 6] = ["comma", "period", "colon", "semicolon", "LRB", "RRB"];

fn punct_atom(cat: &Category) -> bool {
    matches!(cat.atom_name(), Some(name) if PUNCT_ATOMS.contains(&name))
}

fn conj_atom(cat: &Category) -> bool {
    cat.atom_name() == Some("conj")
}

impl HeadedItem {
    /// Lexical item for `word_index` with the given category and markedup
    /// annotation (which must describe the same skeleton shape).
    pub fn leaf(word_index: usize, cat: &Category, ann: &AnnotatedCategory) -> HeadedItem {
        let n = cat.node_count();
        debug_assert_eq!(n, ann.node_count(), "annotation shape mismatch");
        let mut cells: Vec<Vec<usize>> = vec![vec![word_index]]; // cell 0 = lexical head
        let mut var_cell: Vec<(String, usize)> = Vec::new();
        let mut node_cell = vec![0usize; n];
        let mut node_star = vec![false; n];
        for i in 0..n {
            match &ann.vars[i] {
                Some(v) => {
                    let cell = match var_cell.iter().find(|(name, _)| name == &v.name) {
                        Some((_, c)) => *c,
                        None => {
                            cells.push(Vec::new());
                            let c = cells.len() - 1;
                            var_cell.push((v.name.clone(), c));
                            c
                        }
                    };
                    node_cell[i] = cell;
                    node_star[i] = v.star;
                }
                None if i == 0 => node_cell[i] = 0,
                None => {
                    cells.push(Vec::new());
                    node_cell[i] = cells.len() - 1;
                }
            }
        }
        let cat_key: Rc<str> = Rc::from(cat.print_erased());
        let unfilled = ann
            .slots
            .iter()
            .enumerate()
            .map(|(k, slot)| UnfilledDep {
                head: word_index,
                head_cat: Rc::clone(&cat_key),
                slot: (k + 1) as u8,
                cell: node_cell[slot.arg_root],
                long_range: false,
            })
            .collect();
        HeadedItem {
            cat: cat.clone(),
            cat_key,
            node_cell,
            node_star,
            cells,
            heads: vec![word_index],
            unfilled,
            coordination: false,
        }
    }

    fn cell_of(&self, node: usize) -> usize {
        self.node_cell[node]
    }

    /// Combine two analyses under a licensed binary rule, producing the
    /// result analysis and the dependencies newly filled at this step.
    pub fn combine(
        app: &BinaryApplication,
        left: &HeadedItem,
        right: &HeadedItem,
    ) -> (HeadedItem, Vec<Dependency>) {
        if app.kind == BinaryRuleKind::TreebankBinary {
            return Self::combine_treebank(app, left, right);
        }

        let offset = left.cells.len();
        let mut cells: Vec<Vec<usize>> = left.cells.iter().cloned().chain(right.cells.iter().cloned()).collect();
        let mut uf = Uf::new(cells.len());

        // node ranges that cancel: (functor-side nodes, other-side nodes)
        use BinaryRuleKind::*;
        let (f_item, f_nodes, o_item, o_nodes, f_is_left): (
            &HeadedItem,
            Vec<usize>,
            &HeadedItem,
            Vec<usize>,
            bool,
        ) = match app.kind {
            ForwardApplication => (
                left,
                argument_range(&left.cat).collect(),
                right,
                (0..right.cat.node_count()).collect(),
                true,
            ),
            BackwardApplication => (
                right,
                argument_range(&right.cat).collect(),
                left,
                (0..left.cat.node_count()).collect(),
                false,
            ),
            ForwardComposition => (
                left,
                argument_range(&left.cat).collect(),
                right,
                result_range(&right.cat).collect(),
                true,
            ),
            BackwardComposition | BackwardCrossedComposition => (
                right,
                argument_range(&right.cat).collect(),
                left,
                result_range(&left.cat).collect(),
                false,
            ),
            TreebankBinary => unreachable!(),
        };
        debug_assert_eq!(f_nodes.len(), o_nodes.len(), "cancelled shapes differ");

        let global = |is_left: bool, cell: usize| if is_left { cell } else { cell + offset };

        // merge corresponding cells; record starred merges for long-range
        // marking
        let mut starred_merges: Vec<(usize, bool)> = Vec::new(); // (root cell, star on functor side)
        for (fi, oi) in f_nodes.iter().zip(o_nodes.iter()) {
            let fc = global(f_is_left, f_item.cell_of(*fi));
            let oc = global(!f_is_left, o_item.cell_of(*oi));
            uf.union(fc, oc);
            if f_item.node_star[*fi] {
                starred_merges.push((fc, true));
            }
            if o_item.node_star[*oi] {
                starred_merges.push((oc, false));
            }
        }

        // pour the consumed constituent's heads into the cancelled position
        let f_root_cell = global(f_is_left, f_item.cell_of(f_nodes[0]));
        let pour_root = uf.find(f_root_cell);
        for &h in &o_item.heads {
            let target = pour_root;
            let root = uf.find(target);
            // contents get consolidated below; stage into the class root
            let _ = root;
            insert_sorted(&mut cells[root], h);
        }

        // consolidate merged cell contents into class roots
        let mut merged: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
        for i in 0..cells.len() {
            let r = uf.find(i);
            let drained = std::mem::take(&mut cells[i]);
            for h in drained {
                insert_sorted(&mut merged[r], h);
            }
        }

        // carry over unfilled deps, remapping cells and flagging long-range
        // transfers through starred occurrences
        let mut unfilled: Vec<UnfilledDep> = Vec::new();
        for (dep, from_left) in left
            .unfilled
            .iter()
            .map(|d| (d, true))
            .chain(right.unfilled.iter().map(|d| (d, false)))
        {
            let gcell = global(from_left, dep.cell);
            let root = uf.find(gcell);
            let mut long_range = dep.long_range;
            for (mcell, star_on_functor) in &starred_merges {
                if uf.find(*mcell) == root {
                    // the star transfers deps arriving from the other item
                    let dep_on_functor_side = from_left == f_is_left;
                    if *star_on_functor != dep_on_functor_side {
                        long_range = true;
                    }
                }
            }
            unfilled.push(UnfilledDep {
                head: dep.head,
                head_cat: Rc::clone(&dep.head_cat),
                slot: dep.slot,
                cell: root,
                long_range,
            });
        }

        // result node layout
        let result = &app.result;
        let n = result.node_count();
        let mut node_cell = vec![usize::MAX; n];
        let mut node_star = vec![false; n];
        let mut copy_sub = |dst_start: usize,
                            src_item: &HeadedItem,
                            src_nodes: std::ops::Range<usize>,
                            src_is_left: bool,
                            node_cell: &mut Vec<usize>,
                            node_star: &mut Vec<bool>,
                            uf: &mut Uf| {
            for (k, s) in src_nodes.enumerate() {
                node_cell[dst_start + k] = uf.find(global(src_is_left, src_item.cell_of(s)));
                node_star[dst_start + k] = src_item.node_star[s];
            }
        };
        match app.kind {
            ForwardApplication => {
                copy_sub(0, left, result_range(&left.cat), true, &mut node_cell, &mut node_star, &mut uf)
            }
            BackwardApplication => {
                copy_sub(0, right, result_range(&right.cat), false, &mut node_cell, &mut node_star, &mut uf)
            }
            ForwardComposition => {
                // result = X/Z, a new root over left's X and right's Z
                let x = result_range(&left.cat);
                let z = argument_range(&right.cat);
                let xlen = x.len();
                copy_sub(1, left, x, true, &mut node_cell, &mut node_star, &mut uf);
                copy_sub(1 + xlen, right, z, false, &mut node_cell, &mut node_star, &mut uf);
                node_cell[0] = node_cell[1]; // root shares the X head cell
            }
            BackwardComposition | BackwardCrossedComposition => {
                let x = result_range(&right.cat);
                let z = argument_range(&left.cat);
                let xlen = x.len();
                copy_sub(1, right, x, false, &mut node_cell, &mut node_star, &mut uf);
                copy_sub(1 + xlen, left, z, true, &mut node_cell, &mut node_star, &mut uf);
                node_cell[0] = node_cell[1];
            }
            TreebankBinary => unreachable!(),
        }
        debug_assert!(node_cell.iter().all(|&c| c != usize::MAX));

        // fill pass
        let mut filled: Vec<Dependency> = Vec::new();
        let mut still_unfilled: Vec<UnfilledDep> = Vec::new();
        for dep in unfilled {
            let content = &merged[dep.cell];
            if content.is_empty() {
                still_unfilled.push(dep);
            } else {
                for &arg in content {
                    if arg == dep.head {
                        continue;
                    }
                    filled.push(Dependency {
                        head: dep.head,
                        head_cat: dep.head_cat.to_string(),
                        slot: dep.slot,
                        arg,
                        long_range: dep.long_range,
                    });
                }
            }
        }

        // item heads: coordination unions conjunct heads; otherwise the head
        // annotation decides via the result root cell, modifiers pass the
        // argument through, and the functor heads by default
        let (primary, other): (&HeadedItem, &HeadedItem) = if f_is_left {
            (left, right)
        } else {
            (right, left)
        };
        let heads: Vec<usize> = if primary.coordination {
            let mut h = primary.heads.clone();
            for &x in &other.heads {
                insert_sorted(&mut h, x);
            }
            h
        } else if !merged[node_cell[0]].is_empty() {
            merged[node_cell[0]].clone()
        } else if primary.cat.is_modifier() {
            other.heads.clone()
        } else {
            primary.heads.clone()
        };

        // compact cells: keep only classes referenced by nodes or deps
        let item = Self::compact(
            result.clone(),
            node_cell,
            node_star,
            merged,
            heads,
            still_unfilled,
            false,
        );
        (item, filled)
    }

    fn combine_treebank(
        app: &BinaryApplication,
        left: &HeadedItem,
        right: &HeadedItem,
    ) -> (HeadedItem, Vec<Dependency>) {
        // punctuation absorption keeps the non-punctuation child wholesale
        if punct_atom(&left.cat) && app.result == right.cat {
            return (right.clone(), Vec::new());
        }
        if punct_atom(&right.cat) && app.result == left.cat {
            return (left.clone(), Vec::new());
        }

        // conj absorption: the partial coordination constituent keeps the
        // conjunct's heads and pending deps; the final application step
        // unions in the other conjunct
        let (coordination, keep): (bool, &HeadedItem) =
            if conj_atom(&left.cat) && !conj_atom(&right.cat) {
                (true, right)
            } else if conj_atom(&right.cat) && !conj_atom(&left.cat) {
                (true, left)
            } else {
                (false, left)
            };

        let n = app.result.node_count();
        let mut cells = keep.cells.clone();
        let mut node_cell = Vec::with_capacity(n);
        for i in 0..n {
            cells.push(if i == 0 { keep.heads.clone() } else { Vec::new() });
            node_cell.push(cells.len() - 1);
        }
        let item = Self::compact(
            app.result.clone(),
            node_cell,
            vec![false; n],
            cells,
            keep.heads.clone(),
            keep.unfilled.clone(),
            coordination,
        );
        (item, Vec::new())
    }

    /// Apply a unary rewrite. Type-raising `A => R/(R\A)` coindexes the two
    /// `R` subtrees and embeds the source analysis at `A`; type-changing
    /// keeps the source heads on the new root (and coindexes result with
    /// argument for modifier-shaped targets).
    pub fn unary(&self, kind: UnaryRuleKind, target: &Category) -> HeadedItem {
        let n = target.node_count();
        let mut cells = self.cells.clone();
        let mut node_cell = vec![usize::MAX; n];
        let mut node_star = vec![false; n];

        let mut fresh = |cells: &mut Vec<Vec<usize>>| {
            cells.push(Vec::new());
            cells.len() - 1
        };

        let mut raised = false;
        if kind == UnaryRuleKind::TypeRaising {
            if let Category::Complex(r1, _, inner) = target {
                if let Category::Complex(r2, _, a) = inner.as_ref() {
                    if a.node_count() == self.cat.node_count() {
                        raised = true;
                        // layout: 0 root, [1, 1+r1n) R1, then inner node,
                        // [inner+1, inner+1+r2n) R2, then A subtree
                        let r1n = r1.node_count();
                        let r2n = r2.node_count();
                        debug_assert_eq!(r1n, r2n);
                        node_cell[0] = fresh(&mut cells);
                        let inner_idx = 1 + r1n;
                        // the cancelled functor's heads pour into the inner
                        // node; sharing it with the R roots makes the raised
                        // result inherit them
                        let conduit = fresh(&mut cells);
                        node_cell[inner_idx] = conduit;
                        for k in 0..r1n {
                            let shared = if k == 0 { conduit } else { fresh(&mut cells) };
                            node_cell[1 + k] = shared;
                            node_cell[inner_idx + 1 + k] = shared;
                        }
                        let a_start = inner_idx + 1 + r2n;
                        for k in 0..self.cat.node_count() {
                            node_cell[a_start + k] = self.node_cell[k];
                            node_star[a_start + k] = self.node_star[k];
                        }
                    }
                }
            }
        }
        if !raised {
            // type-changing: source heads flow to the new root
            node_cell[0] = self.node_cell[0];
            if target.is_modifier() {
                let res = result_range(target);
                let arg = argument_range(target);
                let len = res.len();
                for k in 0..len {
                    let shared = fresh(&mut cells);
                    node_cell[res.start + k] = shared;
                    node_cell[arg.start + k] = shared;
                }
            }
            for c in node_cell.iter_mut() {
                if *c == usize::MAX {
                    *c = fresh(&mut cells);
                }
            }
        }

        Self::compact(
            target.clone(),
            node_cell,
            node_star,
            cells,
            self.heads.clone(),
            self.unfilled.clone(),
            false,
        )
    }

    fn compact(
        cat: Category,
        node_cell: Vec<usize>,
        node_star: Vec<bool>,
        cells: Vec<Vec<usize>>,
        heads: Vec<usize>,
        unfilled: Vec<UnfilledDep>,
        coordination: bool,
    ) -> HeadedItem {
        let mut remap: Vec<usize> = vec![usize::MAX; cells.len()];
        let mut kept: Vec<Vec<usize>> = Vec::new();
        let mut keep = |c: usize, remap: &mut Vec<usize>, kept: &mut Vec<Vec<usize>>| {
            if remap[c] == usize::MAX {
                kept.push(cells[c].clone());
                remap[c] = kept.len() - 1;
            }
            remap[c]
        };
        let node_cell: Vec<usize> = node_cell
            .into_iter()
            .map(|c| keep(c, &mut remap, &mut kept))
            .collect();
        let unfilled: Vec<UnfilledDep> = unfilled
            .into_iter()
            .map(|mut d| {
                d.cell = keep(d.cell, &mut remap, &mut kept);
                d
            })
            .collect();
        let cat_key: Rc<str> = Rc::from(cat.print_erased());
        HeadedItem {
            cat,
            cat_key,
            node_cell,
            node_star,
            cells: kept,
            heads,
            unfilled,
            coordination,
        }
    }
}
