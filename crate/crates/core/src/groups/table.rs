// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// The first group axiom a candidate multiplication table violates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableDefect {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("closure: entry {value} at ({row}, {col}) is outside 0..{n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("identity: no element e with e*x = x*e = x for all x")]
    NoIdentity,
    #[error("inverse: element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("latin square: row {0} repeats an element")]
    RowNotPermutation(usize),
    #[error("latin square: column {0} repeats an element")]
    ColumnNotPermutation(usize),
    #[error("associativity: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

/// A finite group given by its full multiplication table over `0..n`.
///
/// `get(a, b)` is the product `a*b`. The identity is found by scanning, so it
/// need not be element 0 for tables loaded from files.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    n: usize,
    entries: Vec<usize>,
    identity: usize,
}

impl CayleyTable {
    /// Validates `rows` against the group axioms.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, TableDefect> {
        let n = rows.len();
        if n == 0 {
            return Err(TableDefect::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(TableDefect::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            entries.extend(r);
        }
        Self::from_flat(n, entries)
    }

    pub(crate) fn from_flat(n: usize, entries: Vec<usize>) -> Result<Self, TableDefect> {
        debug_assert_eq!(entries.len(), n * n);
        if let Some(pos) = entries.iter().position(|&v| v >= n) {
            return Err(TableDefect::EntryOutOfRange {
                row: pos / n,
                col: pos % n,
                value: entries[pos],
                n,
            });
        }
        let at = |a: usize, b: usize| entries[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(TableDefect::NoIdentity)?;
        for x in 0..n {
            if !(0..n).any(|y| at(x, y) == identity && at(y, x) == identity) {
                return Err(TableDefect::NoInverse(x));
            }
        }
        let mut seen = vec![false; n];
        for row in 0..n {
            seen.fill(false);
            for col in 0..n {
                if std::mem::replace(&mut seen[at(row, col)], true) {
                    return Err(TableDefect::RowNotPermutation(row));
                }
            }
        }
        for col in 0..n {
            seen.fill(false);
            for row in 0..n {
                if std::mem::replace(&mut seen[at(row, col)], true) {
                    return Err(TableDefect::ColumnNotPermutation(col));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(TableDefect::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(CayleyTable {
            n,
            entries,
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.entries[a * self.n + b]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.entries.chunks(self.n)
    }

    /// `x, x^2, ..., x^o(x) = e`, found by multiplying until the identity
    /// comes back.
    pub fn powers(&self, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut cur = x;
        while cur != self.identity {
            cur = self.get(cur, x);
            out.push(cur);
        }
        out
    }

    /// Smallest `m >= 1` with `x^m = e`.
    pub fn element_order(&self, x: usize) -> usize {
        self.powers(x).len()
    }

    pub fn element_orders(&self) -> ElementOrderMap {
        ElementOrderMap((0..self.n).map(|x| self.element_order(x)).collect())
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|x| self.element_order(x) == self.n)
    }

    /// Sorted elements of the cyclic subgroup generated by `x`.
    pub fn cyclic_subgroup(&self, x: usize) -> Vec<usize> {
        let mut out = self.powers(x);
        out.sort_unstable();
        out
    }

    /// Elements grouped by the cyclic subgroup they generate, each group sorted
    /// and the groups ordered by smallest member.
    pub fn generator_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_subgroup = std::collections::HashMap::new();
        for x in 0..self.n {
            let key = self.cyclic_subgroup(x);
            let idx = *by_subgroup.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[idx].push(x);
        }
        classes
    }

    /// Text in the Cayley file format: `n`, then `n` rows of products.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyTable")
            .field("order", &self.n)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

/// `o(x)` for every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementOrderMap(Vec<usize>);

impl ElementOrderMap {
    pub fn order(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}
