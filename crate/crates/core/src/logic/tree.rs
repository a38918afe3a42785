//! Boolean logic trees over (possibly negated) variable literals.
//!
//! Nodes are addressed by their preorder position, root = 0.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn complement(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Ternary values count as present when `≥ 1`.
    pub fn eval(self, row: &[u8]) -> bool {
        (row[self.var] >= 1) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "X{}", self.var + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    And,
    Or,
}

impl Operator {
    pub fn flipped(self) -> Self {
        match self {
            Operator::And => Operator::Or,
            Operator::Or => Operator::And,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicTree {
    Leaf(Literal),
    Node {
        op: Operator,
        left: Box<LogicTree>,
        right: Box<LogicTree>,
    },
}

impl LogicTree {
    pub fn leaf(lit: Literal) -> Self {
        LogicTree::Leaf(lit)
    }

    pub fn node(op: Operator, left: LogicTree, right: LogicTree) -> Self {
        LogicTree::Node {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn and(left: LogicTree, right: LogicTree) -> Self {
        Self::node(Operator::And, left, right)
    }

    pub fn or(left: LogicTree, right: LogicTree) -> Self {
        Self::node(Operator::Or, left, right)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, LogicTree::Leaf(_))
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            LogicTree::Leaf(_) => 1,
            LogicTree::Node { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Total node count; leaves plus operators.
    pub fn size(&self) -> usize {
        2 * self.n_leaves() - 1
    }

    pub fn eval(&self, row: &[u8]) -> bool {
        match self {
            LogicTree::Leaf(lit) => lit.eval(row),
            LogicTree::Node { op, left, right } => match op {
                Operator::And => left.eval(row) && right.eval(row),
                Operator::Or => left.eval(row) || right.eval(row),
            },
        }
    }

    /// Leaf literals in preorder.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        self.visit(&mut |_, t| {
            if let LogicTree::Leaf(l) = t {
                out.push(*l);
            }
        });
        out
    }

    /// Distinct variables, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.literals().iter().map(|l| l.var).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Calls `f(preorder_index, subtree)` for every node.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(usize, &'a LogicTree)) {
        fn go<'a>(t: &'a LogicTree, next: &mut usize, f: &mut impl FnMut(usize, &'a LogicTree)) {
            let idx = *next;
            *next += 1;
            f(idx, t);
            if let LogicTree::Node { left, right, .. } = t {
                go(left, next, f);
                go(right, next, f);
            }
        }
        let mut next = 0;
        go(self, &mut next, f);
    }

    /// Preorder indices of leaves.
    pub fn leaf_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |i, t| {
            if t.is_leaf() {
                out.push(i);
            }
        });
        out
    }

    /// Preorder indices of operator nodes.
    pub fn operator_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |i, t| {
            if !t.is_leaf() {
                out.push(i);
            }
        });
        out
    }

    pub fn subtree(&self, pos: usize) -> Option<&LogicTree> {
        let mut found = None;
        self.visit(&mut |i, t| {
            if i == pos {
                found = Some(t);
            }
        });
        found
    }

    /// Preorder position of the parent of `pos` and whether `pos` is its
    /// left child.
    pub fn parent_of(&self, pos: usize) -> Option<(usize, bool)> {
        fn go(t: &LogicTree, base: usize, pos: usize) -> Option<(usize, bool)> {
            if let LogicTree::Node { left, right, .. } = t {
                let l = base + 1;
                let r = l + left.size();
                if pos == l {
                    return Some((base, true));
                }
                if pos == r {
                    return Some((base, false));
                }
                if pos < r {
                    go(left, l, pos)
                } else {
                    go(right, r, pos)
                }
            } else {
                None
            }
        }
        if pos == 0 || pos >= self.size() {
            return None;
        }
        go(self, 0, pos)
    }

    /// Copy with the subtree at `pos` replaced by `f(old subtree)`.
    pub fn replace_at(&self, pos: usize, f: impl FnOnce(&LogicTree) -> LogicTree) -> LogicTree {
        fn go(t: &LogicTree, base: usize, pos: usize, f: &mut Option<impl FnOnce(&LogicTree) -> LogicTree>) -> LogicTree {
            if base == pos {
                return (f.take().expect("replacement applied once"))(t);
            }
            match t {
                LogicTree::Leaf(_) => t.clone(),
                LogicTree::Node { op, left, right } => {
                    let l = base + 1;
                    let r = l + left.size();
                    if pos < r {
                        LogicTree::node(*op, go(left, l, pos, f), (**right).clone())
                    } else {
                        LogicTree::node(*op, (**left).clone(), go(right, r, pos, f))
                    }
                }
            }
        }
        let mut f = Some(f);
        go(self, 0, pos, &mut f)
    }

    /// Logical complement by De Morgan's laws; same shape and leaf count.
    pub fn negated(&self) -> LogicTree {
        match self {
            LogicTree::Leaf(l) => LogicTree::Leaf(l.complement()),
            LogicTree::Node { op, left, right } => LogicTree::node(op.flipped(), left.negated(), right.negated()),
        }
    }

    /// Checks variable range and leaf cap.
    pub fn validate(&self, p: usize, max_leaves: usize) -> Result<()> {
        if let Some(l) = self.literals().iter().find(|l| l.var >= p) {
            return Err(Error::invalid_argument(format!("leaf {l} outside 1..={p}")));
        }
        let leaves = self.n_leaves();
        if leaves > max_leaves {
            return Err(Error::invalid_argument(format!(
                "tree has {leaves} leaves, cap is {max_leaves}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LogicTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicTree::Leaf(l) => write!(f, "{l}"),
            LogicTree::Node { op, left, right } => {
                let sym = match op {
                    Operator::And => "&",
                    Operator::Or => "|",
                };
                write!(f, "({left} {sym} {right})")
            }
        }
    }
}
