//! Single-tree logic regression for binary responses.
//!
//! A tree is searched by simulated annealing over the six neighborhood
//! moves; its score is the training misclassification count when each side
//! of the tree predicts its majority class.

pub mod anneal;
pub mod bits;
pub mod dnf;
pub mod ensemble;
pub mod moves;
pub mod tree;

pub use anneal::{anneal_fit, anneal_fit_traced, AnnealParams, FittedLogicModel, TraceEvent};
pub use bits::BitMatrix;
pub use dnf::{format_term, to_dnf, to_dnf_capped, Dnf, Term, DNF_TERM_CAP};
pub use ensemble::{ensemble_fit, ImportanceReport};
pub use moves::{apply, applicable, propose_move, Move, MoveContext, MoveKind};
pub use tree::{Literal, LogicTree, Operator};

/// Tree value on one row; ternary inputs count as present when `≥ 1`.
pub fn eval_tree(tree: &LogicTree, row: &[u8]) -> bool {
    tree.eval(row)
}
