//! Canonical child ordering and tree identity.
//!
//! Rooted trees are emitted from the root with children sorted by the
//! smallest leaf label in their subtree. Unrooted trees are first re-anchored
//! at the neighbor of their smallest leaf, which makes the anchor itself
//! canonical. Two trees are identical exactly when their canonical token
//! streams match.

use std::borrow::Cow;
use std::fmt::Write;

use super::{Label, NodeId, Tree};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Tok<'a> {
    Open,
    Close,
    Comma,
    Leaf(&'a Label),
    Weight(Option<f64>),
}

/// How weights are rendered in Newick text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WeightStyle {
    Omit,
    /// Shortest representation that parses back to the same `f64`.
    Exact,
    Fixed(usize),
}

pub(crate) fn canonical_orientation(tree: &Tree) -> Cow<'_, Tree> {
    if tree.is_rooted() || tree.len() <= 2 {
        return Cow::Borrowed(tree);
    }
    let min_leaf = tree
        .leaves()
        .filter(|&v| tree.label(v).is_some())
        .min_by(|&x, &y| tree.label(x).cmp(&tree.label(y)));
    let Some(leaf) = min_leaf else {
        return Cow::Borrowed(tree);
    };
    let anchor = tree
        .neighbors(leaf)
        .next()
        .expect("leaf of a tree with >2 vertices");
    if anchor == tree.top() {
        Cow::Borrowed(tree)
    } else {
        Cow::Owned(tree.reanchored(anchor))
    }
}

/// Smallest leaf label below every vertex.
pub(crate) fn min_labels(tree: &Tree) -> Vec<Option<&Label>> {
    let mut min: Vec<Option<&Label>> = vec![None; tree.len()];
    for v in tree.postorder() {
        let mut m = if tree.is_leaf(v) { tree.label(v) } else { None };
        for &c in tree.children(v) {
            m = match (m, min[c]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        min[v] = m;
    }
    min
}

/// Canonical token stream of a tree already in canonical orientation.
pub(crate) fn tokens(tree: &Tree) -> Vec<Tok<'_>> {
    enum Frame {
        Enter(NodeId),
        Exit(NodeId),
        Comma,
    }
    let top = tree.top();
    if tree.is_leaf(top) && tree.children(top).len() == 1 {
        // two-vertex tree anchored at a leaf: write it as a pair of leaves
        let child = tree.children(top)[0];
        let mut pair = [top, child];
        pair.sort_by(|&x, &y| tree.label(x).cmp(&tree.label(y)));
        let mut out = vec![Tok::Open];
        for (i, &v) in pair.iter().enumerate() {
            if i > 0 {
                out.push(Tok::Comma);
            }
            if let Some(l) = tree.label(v) {
                out.push(Tok::Leaf(l));
            }
            out.push(Tok::Weight(if i == 0 { None } else { tree.length(child) }));
        }
        out.push(Tok::Close);
        out.push(Tok::Weight(None));
        return out;
    }
    let min = min_labels(tree);
    let mut out = Vec::with_capacity(tree.len() * 3);
    let mut stack = vec![Frame::Enter(top)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Comma => out.push(Tok::Comma),
            Frame::Exit(v) => {
                out.push(Tok::Close);
                out.push(Tok::Weight(tree.length(v)));
            }
            Frame::Enter(v) => {
                let kids = tree.children(v);
                if kids.is_empty() {
                    if let Some(l) = tree.label(v) {
                        out.push(Tok::Leaf(l));
                    }
                    out.push(Tok::Weight(tree.length(v)));
                    continue;
                }
                let mut sorted: Vec<NodeId> = kids.to_vec();
                sorted.sort_by(|&x, &y| min[x].cmp(&min[y]));
                out.push(Tok::Open);
                stack.push(Frame::Exit(v));
                for (i, &c) in sorted.iter().enumerate().rev() {
                    stack.push(Frame::Enter(c));
                    if i > 0 {
                        stack.push(Frame::Comma);
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn needs_quotes(label: &str) -> bool {
    label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || "()[]':;,".contains(c))
}

pub(crate) fn write_label(out: &mut String, label: &str) {
    if needs_quotes(label) {
        out.push('\'');
        out.push_str(&label.replace('\'', "''"));
        out.push('\'');
    } else {
        out.push_str(label);
    }
}

pub(crate) fn render(tokens: &[Tok<'_>], style: WeightStyle) -> String {
    let mut out = String::with_capacity(tokens.len() * 4);
    for t in tokens {
        match *t {
            Tok::Open => out.push('('),
            Tok::Close => out.push(')'),
            Tok::Comma => out.push(','),
            Tok::Leaf(l) => write_label(&mut out, l),
            Tok::Weight(Some(w)) => match style {
                WeightStyle::Omit => {}
                WeightStyle::Exact => {
                    let _ = write!(out, ":{w}");
                }
                WeightStyle::Fixed(p) => {
                    let _ = write!(out, ":{w:.p$}");
                }
            },
            Tok::Weight(None) => {}
        }
    }
    out.push(';');
    out
}

/// Canonical Newick form, weights included at full precision. Rooted and
/// unrooted trees get distinct prefixes so that the string alone determines
/// identity.
pub fn canonical_newick(tree: &Tree, with_weights: bool) -> String {
    let oriented = canonical_orientation(tree);
    let style = if with_weights {
        WeightStyle::Exact
    } else {
        WeightStyle::Omit
    };
    let body = render(&tokens(&oriented), style);
    format!("{}{}", if tree.is_rooted() { "[&R]" } else { "[&U]" }, body)
}

/// Label-preserving isomorphism test (weights ignored).
pub fn is_identical(a: &Tree, b: &Tree) -> Result<bool> {
    a.check_same_labels(b)?;
    if a.is_rooted() != b.is_rooted() {
        return Ok(false);
    }
    Ok(canonical_newick(a, false) == canonical_newick(b, false))
}

/// Label- and weight-preserving isomorphism test with exact weight equality.
pub fn is_weight_identical(a: &Tree, b: &Tree) -> Result<bool> {
    is_weight_identical_within(a, b, 0.0)
}

/// Like [`is_weight_identical`] but weights may differ by up to `tolerance`.
pub fn is_weight_identical_within(a: &Tree, b: &Tree, tolerance: f64) -> Result<bool> {
    a.check_same_labels(b)?;
    if a.is_rooted() != b.is_rooted() {
        return Ok(false);
    }
    let oa = canonical_orientation(a);
    let ob = canonical_orientation(b);
    let ta = tokens(&oa);
    let tb = tokens(&ob);
    if ta.len() != tb.len() {
        return Ok(false);
    }
    Ok(ta.iter().zip(&tb).all(|(x, y)| match (x, y) {
        (Tok::Weight(Some(p)), Tok::Weight(Some(q))) => (p - q).abs() <= tolerance,
        (Tok::Weight(p), Tok::Weight(q)) => p.is_none() && q.is_none(),
        _ => x == y,
    }))
}
