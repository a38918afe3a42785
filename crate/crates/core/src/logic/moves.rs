//! Neighborhood moves of the annealing search.
//!
//! A move type is drawn uniformly among the applicable ones, then its
//! position and literals uniformly.

use rand::Rng;

use super::tree::{Literal, LogicTree, Operator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    AlternateLeaf,
    AlternateOperator,
    GrowBranch,
    PruneBranch,
    SplitLeaf,
    DeleteLeaf,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] = [
        MoveKind::AlternateLeaf,
        MoveKind::AlternateOperator,
        MoveKind::GrowBranch,
        MoveKind::PruneBranch,
        MoveKind::SplitLeaf,
        MoveKind::DeleteLeaf,
    ];
}

/// A fully parameterized move; positions are preorder indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Replace the literal at a leaf.
    AlternateLeaf { leaf: usize, literal: Literal },
    /// Swap ∧ and ∨ at an operator node.
    AlternateOperator { node: usize },
    /// Replace a leaf `L` by `op(L, literal)`.
    GrowBranch {
        leaf: usize,
        op: Operator,
        literal: Literal,
    },
    /// Replace an operator node by one of its children.
    PruneBranch { node: usize, keep_left: bool },
    /// Replace a leaf by `op(left, right)` over two fresh literals.
    SplitLeaf {
        leaf: usize,
        op: Operator,
        left: Literal,
        right: Literal,
    },
    /// Remove a leaf; its parent collapses to the sibling.
    DeleteLeaf { leaf: usize },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::AlternateLeaf { .. } => MoveKind::AlternateLeaf,
            Move::AlternateOperator { .. } => MoveKind::AlternateOperator,
            Move::GrowBranch { .. } => MoveKind::GrowBranch,
            Move::PruneBranch { .. } => MoveKind::PruneBranch,
            Move::SplitLeaf { .. } => MoveKind::SplitLeaf,
            Move::DeleteLeaf { .. } => MoveKind::DeleteLeaf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveContext {
    pub n_vars: usize,
    pub max_leaves: usize,
}

pub fn applicable(tree: &LogicTree, ctx: &MoveContext) -> Vec<MoveKind> {
    let leaves = tree.n_leaves();
    let single = leaves == 1;
    let room = leaves < ctx.max_leaves;
    MoveKind::ALL
        .into_iter()
        .filter(|k| match k {
            MoveKind::AlternateLeaf => true,
            MoveKind::AlternateOperator | MoveKind::PruneBranch | MoveKind::DeleteLeaf => !single,
            MoveKind::GrowBranch | MoveKind::SplitLeaf => room,
        })
        .collect()
}

/// Applies a move. Returns `None` when it does not fit the tree (wrong node
/// kind or position out of range).
pub fn apply(tree: &LogicTree, mv: &Move) -> Option<LogicTree> {
    let at = |pos: usize| tree.subtree(pos);
    match *mv {
        Move::AlternateLeaf { leaf, literal } => {
            at(leaf)?.is_leaf().then(|| tree.replace_at(leaf, |_| LogicTree::leaf(literal)))
        }
        Move::AlternateOperator { node } => match at(node)? {
            LogicTree::Node { .. } => Some(tree.replace_at(node, |t| match t {
                LogicTree::Node { op, left, right } => {
                    LogicTree::node(op.flipped(), (**left).clone(), (**right).clone())
                }
                leaf => leaf.clone(),
            })),
            LogicTree::Leaf(_) => None,
        },
        Move::GrowBranch { leaf, op, literal } => at(leaf)?
            .is_leaf()
            .then(|| tree.replace_at(leaf, |t| LogicTree::node(op, t.clone(), LogicTree::leaf(literal)))),
        Move::PruneBranch { node, keep_left } => match at(node)? {
            LogicTree::Node { left, right, .. } => {
                let kept = if keep_left { left } else { right };
                Some(tree.replace_at(node, |_| (**kept).clone()))
            }
            LogicTree::Leaf(_) => None,
        },
        Move::SplitLeaf {
            leaf,
            op,
            left,
            right,
        } => at(leaf)?.is_leaf().then(|| {
            tree.replace_at(leaf, |_| LogicTree::node(op, LogicTree::leaf(left), LogicTree::leaf(right)))
        }),
        Move::DeleteLeaf { leaf } => {
            if !at(leaf)?.is_leaf() {
                return None;
            }
            let (parent, is_left) = tree.parent_of(leaf)?;
            apply(
                tree,
                &Move::PruneBranch {
                    node: parent,
                    keep_left: !is_left,
                },
            )
        }
    }
}

fn random_literal(rng: &mut impl Rng, n_vars: usize) -> Literal {
    Literal {
        var: rng.gen_range(0..n_vars),
        negated: rng.gen_bool(0.5),
    }
}

fn random_op(rng: &mut impl Rng) -> Operator {
    if rng.gen_bool(0.5) {
        Operator::And
    } else {
        Operator::Or
    }
}

fn pick(rng: &mut impl Rng, v: &[usize]) -> usize {
    v[rng.gen_range(0..v.len())]
}

/// Draws a random applicable move.
pub fn random_move(tree: &LogicTree, ctx: &MoveContext, rng: &mut impl Rng) -> Move {
    let kinds = applicable(tree, ctx);
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let leaves = tree.leaf_positions();
    let ops = tree.operator_positions();
    match kind {
        MoveKind::AlternateLeaf => {
            let leaf = pick(rng, &leaves);
            let current = match tree.subtree(leaf) {
                Some(LogicTree::Leaf(l)) => *l,
                _ => unreachable!("leaf position"),
            };
            // Negation alone always yields a different literal, so this ends.
            let literal = loop {
                let l = random_literal(rng, ctx.n_vars);
                if l != current {
                    break l;
                }
            };
            Move::AlternateLeaf { leaf, literal }
        }
        MoveKind::AlternateOperator => Move::AlternateOperator {
            node: pick(rng, &ops),
        },
        MoveKind::GrowBranch => Move::GrowBranch {
            leaf: pick(rng, &leaves),
            op: random_op(rng),
            literal: random_literal(rng, ctx.n_vars),
        },
        MoveKind::PruneBranch => Move::PruneBranch {
            node: pick(rng, &ops),
            keep_left: rng.gen_bool(0.5),
        },
        MoveKind::SplitLeaf => Move::SplitLeaf {
            leaf: pick(rng, &leaves),
            op: random_op(rng),
            left: random_literal(rng, ctx.n_vars),
            right: random_literal(rng, ctx.n_vars),
        },
        MoveKind::DeleteLeaf => Move::DeleteLeaf {
            leaf: pick(rng, &leaves),
        },
    }
}

/// Neighbor of `tree` under one random applicable move.
pub fn propose_move(tree: &LogicTree, ctx: &MoveContext, rng: &mut impl Rng) -> (Move, LogicTree) {
    let mv = random_move(tree, ctx, rng);
    let next = apply(tree, &mv).expect("drawn moves are applicable");
    (mv, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(j: usize) -> LogicTree {
        LogicTree::leaf(Literal::pos(j))
    }

    const CTX: MoveContext = MoveContext {
        n_vars: 6,
        max_leaves: 4,
    };

    #[test]
    fn single_leaf_moves() {
        let k = applicable(&x(0), &CTX);
        assert_eq!(k, vec![MoveKind::AlternateLeaf, MoveKind::GrowBranch, MoveKind::SplitLeaf]);
    }

    #[test]
    fn cap_blocks_growth() {
        let t = LogicTree::and(LogicTree::and(x(0), x(1)), LogicTree::or(x(2), x(3)));
        let k = applicable(&t, &CTX);
        assert!(!k.contains(&MoveKind::GrowBranch));
        assert!(!k.contains(&MoveKind::SplitLeaf));
        assert!(k.contains(&MoveKind::DeleteLeaf));
    }

    #[test]
    fn moves_on_example() {
        // ((X1 & X2) | X3), preorder leaves 2, 3, 4.
        let t = LogicTree::or(LogicTree::and(x(0), x(1)), x(2));
        let s = |m: Move| apply(&t, &m).unwrap().to_string();
        assert_eq!(s(Move::AlternateLeaf { leaf: 4, literal: Literal::neg(5) }), "((X1 & X2) | !X6)");
        assert_eq!(s(Move::AlternateOperator { node: 1 }), "((X1 | X2) | X3)");
        assert_eq!(
            s(Move::GrowBranch { leaf: 4, op: Operator::And, literal: Literal::pos(3) }),
            "((X1 & X2) | (X3 & X4))"
        );
        assert_eq!(s(Move::PruneBranch { node: 0, keep_left: true }), "(X1 & X2)");
        assert_eq!(
            s(Move::SplitLeaf { leaf: 2, op: Operator::Or, left: Literal::pos(4), right: Literal::pos(5) }),
            "(((X5 | X6) & X2) | X3)"
        );
        assert_eq!(s(Move::DeleteLeaf { leaf: 3 }), "(X1 | X3)");
        assert!(apply(&t, &Move::AlternateOperator { node: 2 }).is_none());
        assert!(apply(&t, &Move::DeleteLeaf { leaf: 9 }).is_none());
    }

    #[test]
    fn proposals_respect_invariants() {
        let t = LogicTree::or(LogicTree::and(x(0), x(1)), LogicTree::or(x(2), LogicTree::and(x(3), x(4))));
        let ctx = MoveContext {
            n_vars: 8,
            max_leaves: 6,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let (_, next) = propose_move(&t, &ctx, &mut rng);
            assert!(next.validate(8, 6).is_ok());
            assert_ne!(next, t);
        }
    }
}
