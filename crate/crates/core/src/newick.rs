//! Newick reading and writing.
//!
//! Grammar (whitespace and `[...]` comments allowed between tokens):
//!
//! ```text
//! tree    := subtree [":" weight] ";"
//! subtree := label | "(" subtree ("," subtree)* ")" [label] [":" weight]
//! ```
//!
//! Labels are unquoted runs of characters other than whitespace and
//! `()[]':;,`, or single-quoted strings where `''` stands for one quote.
//! Weights are non-negative decimals; exponent notation is accepted on input
//! and never produced on output. Labels on internal vertices and a weight
//! on the outermost subtree are dropped with a warning.
//!
//! Newick does not record rootedness. By default a tree whose outermost
//! vertex has exactly two children (or one, when unary vertices are kept) is
//! rooted and any other tree is unrooted. A leading `[&R]` or `[&U]` comment
//! overrides this, and [`ParseOptions::rooting`] overrides both.

use std::collections::HashSet;

use crate::error::{Result, TreeDistError};
use crate::tree::{
    self, canonical_orientation, forget_root, render, tokens, validate, Label, Node, NodeId, Tree,
    WeightStyle,
};

/// How to decide whether a parsed tree is rooted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rooting {
    /// `[&R]`/`[&U]` if present, otherwise two children at the top means rooted.
    #[default]
    Auto,
    Rooted,
    Unrooted,
}

/// What to do with vertices that have a single child, as in `((1,2,3));`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UnaryPolicy {
    /// Report a syntax error.
    #[default]
    Reject,
    /// Remove them, adding the weights of merged edges.
    Suppress,
    /// Keep them as degree-2 vertices (or as a single-child root).
    Keep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub rooting: Rooting,
    pub unary: UnaryPolicy,
}

/// Every tree of a Newick text, with the byte offset where each one starts.
#[derive(Clone, Debug)]
pub struct NewickDocument {
    pub trees: Vec<Tree>,
    pub source_positions: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Parses with default options.
pub fn parse(text: &str) -> Result<NewickDocument> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, options: &ParseOptions) -> Result<NewickDocument> {
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        warnings: Vec::new(),
    };
    let mut trees = Vec::new();
    let mut positions = Vec::new();
    loop {
        let hint = p.skip_trivia()?;
        if p.pos >= p.bytes.len() {
            break;
        }
        positions.push(p.pos);
        trees.push(p.tree(options, hint)?);
    }
    if trees.is_empty() {
        return Err(TreeDistError::EmptyInput);
    }
    Ok(NewickDocument {
        trees,
        source_positions: positions,
        warnings: p.rendered_warnings(),
    })
}

/// Canonical Newick text. `precision` fixes the number of decimals; `None`
/// writes the shortest decimal that reads back as the same `f64`.
pub fn serialize(tree: &Tree, precision: Option<usize>) -> String {
    let oriented = canonical_orientation(tree);
    let style = match precision {
        Some(p) => WeightStyle::Fixed(p),
        None => WeightStyle::Exact,
    };
    let body = render(&tokens(&oriented), style);
    // mark rootedness only where the default reading would get it wrong
    let top_children = match oriented.children(oriented.top()).len() {
        1 if oriented.is_leaf(oriented.top()) => 2,
        c => c,
    };
    match (tree.is_rooted(), top_children == 2) {
        (true, false) => format!("[&R]{body}"),
        (false, true) => format!("[&U]{body}"),
        _ => body,
    }
}

/// One tree per line.
pub fn serialize_all(trees: &[Tree], precision: Option<usize>) -> String {
    let mut out = String::new();
    for t in trees {
        out.push_str(&serialize(t, precision));
        out.push('\n');
    }
    out
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    /// Byte offset and message; rendered with line/column at the end.
    warnings: Vec<(usize, String)>,
}

enum State {
    Subtree,
    After,
}

impl Parser<'_> {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.text[..pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let start = before.rfind('\n').map_or(0, |i| i + 1);
        (line, before[start..].chars().count() + 1)
    }

    fn error(&self, pos: usize, message: impl Into<String>) -> TreeDistError {
        let (line, column) = self.line_col(pos);
        TreeDistError::SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn warn(&mut self, pos: usize, message: String) {
        self.warnings.push((pos, message));
    }

    fn rendered_warnings(&self) -> Vec<String> {
        let (mut line, mut column, mut scanned) = (1, 1, 0);
        let mut out = Vec::with_capacity(self.warnings.len());
        for (pos, message) in &self.warnings {
            for c in self.text[scanned..*pos].chars() {
                if c == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
            }
            scanned = *pos;
            out.push(format!("line {line}, column {column}: {message}"));
        }
        out
    }

    /// Skips whitespace and comments; returns the last rooting hint seen.
    fn skip_trivia(&mut self) -> Result<Option<Rooting>> {
        let mut hint = None;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'[' {
                let start = self.pos;
                let Some(end) = self.bytes[start..].iter().position(|&c| c == b']') else {
                    return Err(self.error(start, "unterminated comment"));
                };
                let body = self.text[start + 1..start + end].trim();
                if body.eq_ignore_ascii_case("&R") {
                    hint = Some(Rooting::Rooted);
                } else if body.eq_ignore_ascii_case("&U") {
                    hint = Some(Rooting::Unrooted);
                }
                self.pos = start + end + 1;
            } else {
                break;
            }
        }
        Ok(hint)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn label(&mut self) -> Result<Option<String>> {
        match self.peek() {
            Some(b'\'') => {
                let start = self.pos;
                self.pos += 1;
                let mut out = String::new();
                loop {
                    let rest = &self.text[self.pos..];
                    let Some(q) = rest.find('\'') else {
                        return Err(self.error(start, "unterminated quoted label"));
                    };
                    out.push_str(&rest[..q]);
                    self.pos += q + 1;
                    if self.peek() == Some(b'\'') {
                        out.push('\'');
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if out.is_empty() {
                    return Err(self.error(start, "empty quoted label"));
                }
                Ok(Some(out))
            }
            _ => {
                let start = self.pos;
                while let Some(b) = self.peek() {
                    if b.is_ascii_whitespace() || b"()[]':;,".contains(&b) {
                        break;
                    }
                    self.pos += 1;
                }
                Ok((self.pos > start).then(|| self.text[start..self.pos].to_owned()))
            }
        }
    }

    fn weight(&mut self) -> Result<Option<f64>> {
        self.skip_trivia()?;
        if self.peek() != Some(b':') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_trivia()?;
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() || b"+-.eE".contains(&b) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let token = &self.text[start..self.pos];
        if token.is_empty() {
            return Err(self.error(start, "expected an edge weight after ':'"));
        }
        let w: f64 = token
            .parse()
            .map_err(|_| self.error(start, format!("malformed edge weight '{token}'")))?;
        if !w.is_finite() {
            return Err(self.error(start, format!("edge weight '{token}' is not finite")));
        }
        if w < 0.0 {
            let (line, column) = self.line_col(start);
            return Err(TreeDistError::NegativeWeight {
                weight: w,
                line,
                column,
            });
        }
        Ok(Some(w))
    }

    fn tree(&mut self, options: &ParseOptions, hint: Option<Rooting>) -> Result<Tree> {
        let start = self.pos;
        let mut nodes: Vec<Node> = Vec::new();
        let mut opened_at: Vec<usize> = Vec::new();
        let mut open: Vec<NodeId> = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        let mut state = State::Subtree;

        let attach = |nodes: &mut Vec<Node>, open: &[NodeId], node: Node| -> NodeId {
            let id = nodes.len();
            nodes.push(node);
            if let Some(&p) = open.last() {
                nodes[id].parent = Some(p);
                nodes[p].children.push(id);
            }
            id
        };

        loop {
            self.skip_trivia()?;
            match state {
                State::Subtree => match self.peek() {
                    Some(b'(') => {
                        let id = attach(&mut nodes, &open, Node::new(None));
                        opened_at.resize(nodes.len(), 0);
                        opened_at[id] = self.pos;
                        open.push(id);
                        self.pos += 1;
                    }
                    None => return Err(self.error(self.pos, "unexpected end of input")),
                    Some(_) => {
                        let at = self.pos;
                        let Some(text) = self.label()? else {
                            let c = self.text[self.pos..].chars().next().unwrap_or(' ');
                            return Err(
                                self.error(at, format!("expected a leaf label, found '{c}'"))
                            );
                        };
                        if !seen.insert(text.clone()) {
                            return Err(TreeDistError::DuplicateLabel(text));
                        }
                        let id = attach(&mut nodes, &open, Node::new(Some(Label::new(text))));
                        nodes[id].length = self.weight()?;
                        state = State::After;
                    }
                },
                State::After => match self.peek() {
                    Some(b',') => {
                        if open.is_empty() {
                            return Err(self.error(self.pos, "',' outside of parentheses"));
                        }
                        self.pos += 1;
                        state = State::Subtree;
                    }
                    Some(b')') => {
                        let at = self.pos;
                        let Some(id) = open.pop() else {
                            return Err(self.error(at, "unbalanced ')'"));
                        };
                        self.pos += 1;
                        self.skip_trivia()?;
                        let label_at = self.pos;
                        if let Some(l) = self.label()? {
                            self.warn(label_at, format!("internal label '{l}' discarded"));
                        }
                        nodes[id].length = self.weight()?;
                        state = State::After;
                    }
                    Some(b';') => {
                        if let Some(&id) = open.last() {
                            return Err(self.error(opened_at[id], "unbalanced '('"));
                        }
                        self.pos += 1;
                        break;
                    }
                    None => {
                        return Err(match open.last() {
                            Some(&id) => self.error(opened_at[id], "unbalanced '('"),
                            None => self.error(self.pos, "missing ';' at end of tree"),
                        })
                    }
                    Some(_) => {
                        let c = self.text[self.pos..].chars().next().unwrap_or(' ');
                        return Err(self.error(self.pos, format!("unexpected '{c}'")));
                    }
                },
            }
        }

        if nodes[0].length.take().is_some() {
            self.warn(start, "weight on the outermost subtree discarded".into());
        }
        opened_at.resize(nodes.len(), 0);
        if options.unary == UnaryPolicy::Reject {
            if let Some(v) = (0..nodes.len()).find(|&v| nodes[v].children.len() == 1) {
                return Err(self.error(opened_at[v], "vertex with a single child"));
            }
        }
        let mut t = Tree::from_parts(nodes, 0, true);
        if options.unary == UnaryPolicy::Suppress {
            let labels: Vec<String> = t.leaf_labels().iter().map(|l| l.to_string()).collect();
            t = tree::restrict(&t, &labels)?;
        }
        let rooted = match (options.rooting, hint) {
            (Rooting::Rooted, _) | (Rooting::Auto, Some(Rooting::Rooted)) => true,
            (Rooting::Unrooted, _) | (Rooting::Auto, Some(Rooting::Unrooted)) => false,
            (Rooting::Auto, _) => matches!(t.children(t.top()).len(), 1 | 2),
        };
        if !rooted {
            t = forget_root(&t);
        }
        let violations = validate(&t);
        if !violations.is_empty() {
            return Err(TreeDistError::InvalidTree(violations));
        }
        Ok(t)
    }
}
