//! Packed per-variable indicator columns for fast tree scoring.

use super::tree::{LogicTree, Operator};
use crate::dataset::Dataset;

/// Column `j` holds bit `i` set iff `x[i][j] ≥ 1`. Bits past `n` in the
/// last word are zero in every column and in `y`.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    cols: Vec<u64>,
    y: Vec<u64>,
    tail_mask: u64,
}

impl BitMatrix {
    pub fn from_dataset(d: &Dataset) -> Self {
        let n = d.n();
        let words = n.div_ceil(64);
        let mut cols = vec![0u64; words * d.p()];
        for j in 0..d.p() {
            let dst = &mut cols[j * words..(j + 1) * words];
            for (i, &v) in d.column(j).iter().enumerate() {
                if v >= 1 {
                    dst[i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut y = vec![0u64; words];
        for (i, &v) in d.y().iter().enumerate() {
            if v == 1 {
                y[i / 64] |= 1 << (i % 64);
            }
        }
        let tail_mask = match n % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        BitMatrix {
            n,
            words,
            cols,
            y,
            tail_mask,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn column(&self, j: usize) -> &[u64] {
        &self.cols[j * self.words..(j + 1) * self.words]
    }

    pub fn y(&self) -> &[u64] {
        &self.y
    }

    /// Tree value on every observation, packed.
    pub fn eval(&self, tree: &LogicTree) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        self.eval_into(tree, &mut out);
        out
    }

    fn eval_into(&self, tree: &LogicTree, out: &mut [u64]) {
        match tree {
            LogicTree::Leaf(l) => {
                let c = self.column(l.var);
                if l.negated {
                    for (o, &w) in out.iter_mut().zip(c) {
                        *o = !w;
                    }
                    if let Some(last) = out.last_mut() {
                        *last &= self.tail_mask;
                    }
                } else {
                    out.copy_from_slice(c);
                }
            }
            LogicTree::Node { op, left, right } => {
                self.eval_into(left, out);
                let mut tmp = vec![0u64; self.words];
                self.eval_into(right, &mut tmp);
                match op {
                    Operator::And => out.iter_mut().zip(&tmp).for_each(|(a, b)| *a &= b),
                    Operator::Or => out.iter_mut().zip(&tmp).for_each(|(a, b)| *a |= b),
                }
            }
        }
    }

    /// Class counts `(cases, controls)` in the tree-true and tree-false
    /// groups.
    pub fn confusion(&self, truth: &[u64]) -> Confusion {
        let mut c = Confusion::default();
        for (k, (&t, &y)) in truth.iter().zip(&self.y).enumerate() {
            let valid = if k + 1 == self.words { self.tail_mask } else { u64::MAX };
            c.true_cases += (t & y).count_ones() as usize;
            c.true_controls += (t & !y & valid).count_ones() as usize;
            c.false_cases += (!t & y & valid).count_ones() as usize;
            c.false_controls += (!t & !y & valid).count_ones() as usize;
        }
        c
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub true_cases: usize,
    pub true_controls: usize,
    pub false_cases: usize,
    pub false_controls: usize,
}

impl Confusion {
    /// Misclassifications when each group predicts its majority class.
    pub fn misclassified(&self) -> usize {
        self.true_cases.min(self.true_controls) + self.false_cases.min(self.false_controls)
    }

    /// Majority class of the tree-true group; ties predict 1.
    pub fn label_when_true(&self) -> u8 {
        u8::from(self.true_cases >= self.true_controls)
    }

    /// Majority class of the tree-false group; ties predict 0.
    pub fn label_when_false(&self) -> u8 {
        u8::from(self.false_cases > self.false_controls)
    }
}
