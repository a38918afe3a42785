//! Disjunctive normal form of logic trees.
//!
//! Canonical form: literals within a term sorted by `(var, negated)` and
//! distinct; no contradictory terms; no term absorbed by another; terms
//! sorted by length, then lexicographically. The empty DNF is `FALSE`.

use std::fmt;
use std::str::FromStr;

use super::tree::{Literal, LogicTree, Operator};
use crate::error::{Error, Result};

pub const DNF_TERM_CAP: usize = 4096;

pub type Term = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Dnf {
    terms: Vec<Term>,
}

impl Dnf {
    /// Canonicalizes arbitrary terms.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .filter_map(|mut t| {
                t.sort_unstable();
                t.dedup();
                let contradictory = t.windows(2).any(|w| w[0].var == w[1].var);
                (!contradictory).then_some(t)
            })
            .collect();
        terms.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        terms.dedup();
        let mut kept: Vec<Term> = Vec::with_capacity(terms.len());
        // Sorted by length, so any absorbing term precedes the terms it absorbs.
        for t in terms {
            if !kept.iter().any(|s| is_subset(s, &t)) {
                kept.push(t);
            }
        }
        Dnf { terms: kept }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_false(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, row: &[u8]) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.eval(row)))
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.iter().flatten().map(|l| l.var).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Copy with variable `j` renamed to `map[j]`.
    pub fn remap(&self, map: &[usize]) -> Dnf {
        Dnf::from_terms(
            self.terms
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|l| Literal {
                            var: map[l.var],
                            negated: l.negated,
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

fn is_subset(small: &[Literal], big: &[Literal]) -> bool {
    // Both sorted.
    let mut it = big.iter();
    small.iter().all(|s| it.by_ref().any(|b| b == s))
}

/// Expands a tree into canonical DNF; fails once an intermediate product
/// would exceed `cap` terms.
pub fn to_dnf_capped(tree: &LogicTree, cap: usize) -> Result<Dnf> {
    match tree {
        LogicTree::Leaf(l) => Ok(Dnf {
            terms: vec![vec![*l]],
        }),
        LogicTree::Node { op, left, right } => {
            let a = to_dnf_capped(left, cap)?;
            let b = to_dnf_capped(right, cap)?;
            match op {
                Operator::Or => {
                    if a.terms.len() + b.terms.len() > cap {
                        return Err(Error::DnfOverflow { cap });
                    }
                    let mut terms = a.terms;
                    terms.extend(b.terms);
                    Ok(Dnf::from_terms(terms))
                }
                Operator::And => {
                    if a.terms.len() * b.terms.len() > cap {
                        return Err(Error::DnfOverflow { cap });
                    }
                    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
                    for s in &a.terms {
                        for t in &b.terms {
                            let mut u = s.clone();
                            u.extend_from_slice(t);
                            terms.push(u);
                        }
                    }
                    Ok(Dnf::from_terms(terms))
                }
            }
        }
    }
}

pub fn to_dnf(tree: &LogicTree) -> Result<Dnf> {
    to_dnf_capped(tree, DNF_TERM_CAP)
}

pub fn format_term(t: &[Literal]) -> String {
    t.iter().map(ToString::to_string).collect::<Vec<_>>().join("&")
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("FALSE");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format_term(t)).collect();
        f.write_str(&parts.join("|"))
    }
}

fn parse_literal(s: &str) -> Result<Literal> {
    let s = s.trim();
    let (negated, body) = match s.strip_prefix('!') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let idx = body
        .strip_prefix('X')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&j| j >= 1)
        .ok_or_else(|| Error::invalid_argument(format!("invalid literal {s:?}")))?;
    Ok(Literal {
        var: idx - 1,
        negated,
    })
}

impl FromStr for Dnf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "FALSE" {
            return Ok(Dnf::default());
        }
        let terms = s
            .split('|')
            .map(|t| t.split('&').map(parse_literal).collect::<Result<Term>>())
            .collect::<Result<Vec<Term>>>()?;
        Ok(Dnf::from_terms(terms))
    }
}
