// SPDX-License-Identifier: Apache-2.0

//! Concrete finite groups and their power graphs.
//!
//! These tables are the ground truth the graph-only algorithms are checked
//! against. Built-in families use a fixed element numbering:
//!
//! * cyclic `C_n`: `i` is `a^i`;
//! * dihedral `D_2n`, generalized quaternion and quasidihedral groups:
//!   `i < m` is `a^i` and `m + i` is `a^i b`, where `m` is the order of `a`;
//! * symmetric `S_m`: permutations of `0..m` in lexicographic order, with
//!   `i*j` the composition "apply `j`, then `i`";
//! * products: mixed radix with the first factor most significant.
//!
//! Element 0 is the identity for every built-in family.

mod spec;
mod table;

use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Digraph, UndirectedGraph};

pub use spec::GroupSpec;
pub use table::{CayleyTable, ElementOrderMap, TableDefect};

/// Default cap on the degree of symmetric groups (`S_5` has order 120).
pub const DEFAULT_MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("invalid Cayley table: {0}")]
    InvalidCayleyTable(#[from] TableDefect),
    #[error("Cayley file line {line}: {message}")]
    CayleyParse { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_symmetric_degree: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_symmetric_degree: DEFAULT_MAX_SYMMETRIC_DEGREE,
        }
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<CayleyTable, GroupError> {
    build_group_with(spec, &BuildOptions::default())
}

pub fn build_group_with(spec: &GroupSpec, opts: &BuildOptions) -> Result<CayleyTable, GroupError> {
    let invalid = |why: &str| Err(GroupError::InvalidSpec(format!("{spec}: {why}")));
    match *spec {
        GroupSpec::Cyclic(n) => {
            if n == 0 {
                return invalid("order must be at least 1");
            }
            Ok(tabulate(n, |a, b| (a + b) % n))
        }
        GroupSpec::Dihedral(order) => {
            if order < 4 || order % 2 != 0 {
                return invalid("dihedral order must be even and at least 4");
            }
            // b a^k = a^{-k} b and b^2 = 1.
            let m = order / 2;
            Ok(metacyclic(m, m - 1, 0))
        }
        GroupSpec::Quaternion(order) => match two_exponent(order) {
            Some(k) if k >= 3 => {
                // b a^k = a^{-k} b and b^2 = a^{m/2}.
                let m = order / 2;
                Ok(metacyclic(m, m - 1, m / 2))
            }
            _ => invalid("generalized quaternion order must be 2^k with k >= 3"),
        },
        GroupSpec::Quasidihedral(order) => match two_exponent(order) {
            Some(k) if k >= 4 => {
                // b a^k = a^{k(m/2 - 1)} b and b^2 = 1.
                let m = order / 2;
                Ok(metacyclic(m, m / 2 - 1, 0))
            }
            _ => invalid("quasidihedral order must be 2^k with k >= 4"),
        },
        GroupSpec::Symmetric(degree) => {
            if degree == 0 {
                return invalid("degree must be at least 1");
            }
            if degree > opts.max_symmetric_degree {
                return invalid(&format!(
                    "degree above the configured limit {}",
                    opts.max_symmetric_degree
                ));
            }
            Ok(symmetric(degree))
        }
        GroupSpec::Product(ref factors) => {
            if factors.is_empty() {
                return invalid("empty product");
            }
            let tables = factors
                .iter()
                .map(|f| build_group_with(f, opts))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(direct_product(&tables))
        }
        GroupSpec::Cayley(ref path) => read_cayley_file(path),
    }
}

fn tabulate(n: usize, mul: impl Fn(usize, usize) -> usize) -> CayleyTable {
    let entries = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| mul(a, b))
        .collect();
    CayleyTable::from_flat(n, entries).expect("built-in family tables satisfy the group axioms")
}

fn two_exponent(n: usize) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

/// Groups `<a, b>` with `a` of order `m`, `b a = a^twist b`, and
/// `b^2 = a^square`. Element `j*m + i` is `a^i b^j`.
fn metacyclic(m: usize, twist: usize, square: usize) -> CayleyTable {
    tabulate(2 * m, |x, y| {
        let (i, j) = (x % m, x / m);
        let (k, l) = (y % m, y / m);
        // b^j a^k = a^{twist^j k} b^j
        let moved = if j == 1 { (twist * k) % m } else { k };
        let mut exp = (i + moved) % m;
        let mut bs = j + l;
        if bs == 2 {
            exp = (exp + square) % m;
            bs = 0;
        }
        bs * m + exp
    })
}

fn symmetric(degree: usize) -> CayleyTable {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..degree).collect();
    loop {
        perms.push(cur.clone());
        if !next_permutation(&mut cur) {
            break;
        }
    }
    let index: HashMap<&[usize], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = perms.len();
    tabulate(n, |a, b| {
        let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index[composed.as_slice()]
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn direct_product(factors: &[CayleyTable]) -> CayleyTable {
    let orders: Vec<usize> = factors.iter().map(CayleyTable::order).collect();
    let n: usize = orders.iter().product();
    let digits = |mut x: usize| {
        let mut out = vec![0; orders.len()];
        for (slot, &m) in out.iter_mut().zip(&orders).rev() {
            *slot = x % m;
            x /= m;
        }
        out
    };
    let encode = |ds: &[usize]| ds.iter().zip(&orders).fold(0, |acc, (&d, &m)| acc * m + d);
    tabulate(n, |a, b| {
        let (da, db) = (digits(a), digits(b));
        let prod: Vec<usize> = factors
            .iter()
            .enumerate()
            .map(|(i, t)| t.get(da[i], db[i]))
            .collect();
        encode(&prod)
    })
}

/// Parses the Cayley file format: the order `n` on the first line, then `n`
/// lines of `n` whitespace-separated products.
pub fn parse_cayley(text: &str) -> Result<CayleyTable, GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or(GroupError::CayleyParse {
        line: 1,
        message: "missing group order".into(),
    })?;
    let n: usize = header.parse().map_err(|_| GroupError::CayleyParse {
        line: first,
        message: format!("`{header}` is not a group order"),
    })?;
    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        let row = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| GroupError::CayleyParse {
                    line,
                    message: format!("`{tok}` is not an element index"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(GroupError::CayleyParse {
            line: first,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Ok(CayleyTable::from_rows(rows)?)
}

pub fn read_cayley_file(path: &Path) -> Result<CayleyTable, GroupError> {
    let text = std::fs::read_to_string(path).map_err(|source| GroupError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_cayley(&text)
}

/// Arc `(x, y)` iff `x != y` and `y` is a positive power of `x`.
pub fn directed_power_graph(g: &CayleyTable) -> Digraph {
    let n = g.order();
    let mut d = Digraph::empty(n).expect("groups are nonempty");
    for x in 0..n {
        for y in g.powers(x) {
            if y != x {
                d.add_arc(x, y).expect("distinct in-range elements");
            }
        }
    }
    d
}

/// Edge `{x, y}` iff one of `x`, `y` is a positive power of the other.
pub fn power_graph(g: &CayleyTable) -> UndirectedGraph {
    directed_power_graph(g).underlying()
}

/// Euler's totient, by trial-division factorisation.
pub fn euler_phi(m: usize) -> usize {
    assert!(m >= 1, "totient is defined for positive integers");
    let mut rest = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    phi
}
