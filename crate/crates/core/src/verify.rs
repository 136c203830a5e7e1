// SPDX-License-Identifier: Apache-2.0

//! Independent certification of reconstructed digraphs.
//!
//! Two digraphs on the same vertex set, both with underlying graph `g`, are
//! compared up to permutations that map every closed-twin class of `g` onto
//! itself. [`certify`] does this through generator-class (mutual-arc) blocks
//! and their quotient; [`brute_force_certify`] searches the permutations
//! directly and serves as a cross-check on small inputs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Digraph, NClassPartition, UndirectedGraph, VertexSet};
use crate::groups::CayleyTable;

pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 1_000_000;

// Cap on the equal-size block matchings tried inside one star class.
const MATCHING_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("mutual arcs {x}<->{y} and {y}<->{z} but not {x}<->{z}")]
    NotTransitive { x: usize, y: usize, z: usize },
    #[error("vertex counts differ: {0:?}")]
    VertexCountMismatch(Vec<usize>),
    #[error("search exceeded the budget of {0} assignments")]
    BudgetExceeded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Reconstructed,
    Oracle,
}

/// The first thing found wrong, smallest item first within each check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `{u, v}` is an edge of exactly one of `g` and the underlying graph of `side`.
    Edge { side: Side, u: usize, v: usize },
    /// The mutual-arc relation of `side` is not transitive.
    NotTransitive {
        side: Side,
        x: usize,
        y: usize,
        z: usize,
    },
    /// A generator block of `side` meets two closed-twin classes.
    BlockCrossesClass { side: Side, block: Vec<usize> },
    /// Arcs between two blocks of `side` are not all present in one direction.
    NonUniformArcs {
        side: Side,
        from: Vec<usize>,
        to: Vec<usize>,
    },
    /// Block sizes inside a closed-twin class differ between the two sides.
    BlockSizes {
        class: Vec<usize>,
        reconstructed: Vec<usize>,
        oracle: Vec<usize>,
    },
    /// Two blocks of one non-star class have the same size.
    TiedBlockSizes { class: Vec<usize>, size: usize },
    /// Quotient arc present on `side` only, between blocks given by their
    /// reconstructed members.
    QuotientArc {
        side: Side,
        from: Vec<usize>,
        to: Vec<usize>,
    },
    /// No class-preserving permutation exists.
    NoIsomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub blocks_compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations_tried: Option<u64>,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    fn fail(witness: Witness, blocks_compared: usize) -> Self {
        Verdict {
            status: Status::Fail,
            witness: Some(witness),
            blocks_compared,
            permutations_tried: None,
        }
    }
}

/// Classes of the relation "equal, or joined by arcs both ways", ordered by
/// smallest member.
pub fn diamond_classes_of_digraph(d: &Digraph) -> Result<Vec<VertexSet>, VerifyError> {
    let n = d.vertex_count();
    let mutual: Vec<VertexSet> = (0..n)
        .map(|x| {
            let mut m = d.out_neighbours(x).intersection(d.in_neighbours(x));
            m.insert(x);
            m
        })
        .collect();
    let mut seen = VertexSet::empty(n);
    let mut classes = Vec::new();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        for y in mutual[x].iter() {
            if mutual[y] != mutual[x] {
                let z = mutual[x]
                    .difference(&mutual[y])
                    .union(&mutual[y].difference(&mutual[x]))
                    .first()
                    .unwrap();
                // Orient the triple so that x~y and y~z hold but x~z does not.
                return Err(if mutual[y].contains(z) {
                    VerifyError::NotTransitive { x, y, z }
                } else {
                    VerifyError::NotTransitive { x: y, y: x, z }
                });
            }
        }
        seen.union_with(&mutual[x]);
        classes.push(mutual[x].clone());
    }
    Ok(classes)
}

/// Generator blocks of a digraph and the arcs between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDigraph {
    pub blocks: Vec<VertexSet>,
    /// Enclosing closed-twin class of each block.
    pub class_of_block: Vec<usize>,
    /// `(i, j)` when every member of block `i` has an arc to every member of
    /// block `j`.
    pub arcs: Vec<Vec<bool>>,
}

impl QuotientDigraph {
    /// Fails with a witness if a block leaves its class or arcs between two
    /// blocks are not all-or-nothing.
    pub fn build(d: &Digraph, partition: &NClassPartition, side: Side) -> Result<Self, Witness> {
        let blocks = diamond_classes_of_digraph(d).map_err(|e| match e {
            VerifyError::NotTransitive { x, y, z } => Witness::NotTransitive { side, x, y, z },
            _ => unreachable!(),
        })?;
        let mut class_of_block = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let c = partition.class_of(b.first().unwrap());
            if !b.is_subset(partition.class(c)) {
                return Err(Witness::BlockCrossesClass {
                    side,
                    block: b.to_vec(),
                });
            }
            class_of_block.push(c);
        }
        let n = d.vertex_count();
        let mut block_of = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for v in b.iter() {
                block_of[v] = i;
            }
        }
        let k = blocks.len();
        let mut counts = vec![vec![0usize; k]; k];
        for (u, v) in d.arcs() {
            counts[block_of[u]][block_of[v]] += 1;
        }
        let mut arcs = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let full = blocks[i].len() * blocks[j].len();
                match counts[i][j] {
                    0 => {}
                    c if c == full => arcs[i][j] = true,
                    _ => {
                        return Err(Witness::NonUniformArcs {
                            side,
                            from: blocks[i].to_vec(),
                            to: blocks[j].to_vec(),
                        })
                    }
                }
            }
        }
        Ok(QuotientDigraph {
            blocks,
            class_of_block,
            arcs,
        })
    }
}

fn first_edge_difference(a: &UndirectedGraph, b: &UndirectedGraph) -> Option<(usize, usize)> {
    let n = a.vertex_count();
    (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .find(|&(u, v)| a.has_edge(u, v) != b.has_edge(u, v))
}

/// Decides whether `reconstructed` and `oracle` are isomorphic through a
/// permutation fixing every closed-twin class of `g` setwise.
///
/// Blocks are matched inside each class by size. Sizes inside a non-star
/// class must be pairwise distinct, which makes the matching unique; equal
/// sizes inside the star class (identity and central involution) are tried
/// in every order.
pub fn certify(
    reconstructed: &Digraph,
    oracle: &Digraph,
    g: &UndirectedGraph,
) -> Result<Verdict, VerifyError> {
    let n = g.vertex_count();
    if reconstructed.vertex_count() != n || oracle.vertex_count() != n {
        return Err(VerifyError::VertexCountMismatch(vec![
            reconstructed.vertex_count(),
            oracle.vertex_count(),
            n,
        ]));
    }
    for (side, d) in [(Side::Reconstructed, reconstructed), (Side::Oracle, oracle)] {
        if let Some((u, v)) = first_edge_difference(&d.underlying(), g) {
            return Ok(Verdict::fail(Witness::Edge { side, u, v }, 0));
        }
    }
    let partition = g.n_classes();
    let qr = match QuotientDigraph::build(reconstructed, &partition, Side::Reconstructed) {
        Ok(q) => q,
        Err(w) => return Ok(Verdict::fail(w, 0)),
    };
    let qo = match QuotientDigraph::build(oracle, &partition, Side::Oracle) {
        Ok(q) => q,
        Err(w) => return Ok(Verdict::fail(w, 0)),
    };
    let blocks_compared = qr.blocks.len();

    // Per class: block indices sorted by (size, smallest member).
    let per_class = |q: &QuotientDigraph| {
        let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); partition.len()];
        for (i, &c) in q.class_of_block.iter().enumerate() {
            by_class[c].push(i);
        }
        for list in &mut by_class {
            list.sort_by_key(|&i| (q.blocks[i].len(), q.blocks[i].first()));
        }
        by_class
    };
    let rc = per_class(&qr);
    let oc = per_class(&qo);
    let star = partition.star_class_index();
    let mut ties: Vec<Vec<usize>> = Vec::new();
    for c in 0..partition.len() {
        let rs: Vec<usize> = rc[c].iter().map(|&i| qr.blocks[i].len()).collect();
        let os: Vec<usize> = oc[c].iter().map(|&i| qo.blocks[i].len()).collect();
        if rs != os {
            return Ok(Verdict::fail(
                Witness::BlockSizes {
                    class: partition.class(c).to_vec(),
                    reconstructed: rs,
                    oracle: os,
                },
                blocks_compared,
            ));
        }
        let mut start = 0;
        while start < rs.len() {
            let end = start + rs[start..].iter().take_while(|&&s| s == rs[start]).count();
            if end - start > 1 {
                if Some(c) != star {
                    return Ok(Verdict::fail(
                        Witness::TiedBlockSizes {
                            class: partition.class(c).to_vec(),
                            size: rs[start],
                        },
                        blocks_compared,
                    ));
                }
                ties.push(oc[c][start..end].to_vec());
            }
            start = end;
        }
    }

    // Base matching: position-wise within each class.
    let mut matching = vec![usize::MAX; qr.blocks.len()];
    for c in 0..partition.len() {
        for (&i, &j) in rc[c].iter().zip(&oc[c]) {
            matching[i] = j;
        }
    }
    let mismatch = |m: &[usize]| -> Option<Witness> {
        let k = m.len();
        for i in 0..k {
            for j in 0..k {
                let (r, o) = (qr.arcs[i][j], qo.arcs[m[i]][m[j]]);
                if r != o {
                    return Some(Witness::QuotientArc {
                        side: if r { Side::Reconstructed } else { Side::Oracle },
                        from: qr.blocks[i].to_vec(),
                        to: qr.blocks[j].to_vec(),
                    });
                }
            }
        }
        None
    };
    let first_failure = match mismatch(&matching) {
        None => return Ok(pass(blocks_compared)),
        Some(w) => w,
    };
    if ties.is_empty() {
        return Ok(Verdict::fail(first_failure, blocks_compared));
    }

    // Try every reordering of tied oracle blocks.
    let positions: Vec<Vec<usize>> = ties
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|&j| matching.iter().position(|&m| m == j).unwrap())
                .collect()
        })
        .collect();
    let mut tried = 0usize;
    let mut found = false;
    let mut current = matching.clone();
    permute_groups(
        &ties,
        &positions,
        0,
        &mut current,
        &mut tried,
        &mut |m| mismatch(m).is_none(),
        &mut found,
    );
    Ok(if found {
        pass(blocks_compared)
    } else {
        Verdict::fail(first_failure, blocks_compared)
    })
}

fn pass(blocks_compared: usize) -> Verdict {
    Verdict {
        status: Status::Pass,
        witness: None,
        blocks_compared,
        permutations_tried: None,
    }
}

fn permute_groups(
    groups: &[Vec<usize>],
    positions: &[Vec<usize>],
    g: usize,
    current: &mut Vec<usize>,
    tried: &mut usize,
    ok: &mut dyn FnMut(&[usize]) -> bool,
    found: &mut bool,
) {
    if *found || *tried >= MATCHING_BUDGET {
        return;
    }
    if g == groups.len() {
        *tried += 1;
        *found = ok(current);
        return;
    }
    let mut order = groups[g].clone();
    heap_permutations(&mut order, &mut |perm| {
        if *found {
            return;
        }
        for (&pos, &j) in positions[g].iter().zip(perm) {
            current[pos] = j;
        }
        permute_groups(groups, positions, g + 1, current, tried, ok, found);
    });
}

fn heap_permutations(items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            go(k - 1, items, visit);
            let swap = if k.is_multiple_of(2) { i } else { 0 };
            if i + 1 < k {
                items.swap(swap, k - 1);
            }
        }
    }
    let k = items.len();
    go(k, items, visit);
}

/// Exhaustive backtracking search for a class-preserving permutation `psi`
/// with `(x, y)` an arc of `reconstructed` iff `(psi x, psi y)` is an arc of
/// `oracle`.
///
/// Candidates are pruned by colour refinement started from the class
/// colouring, which every such `psi` preserves. `budget` caps the number of
/// tentative assignments.
pub fn brute_force_certify(
    reconstructed: &Digraph,
    oracle: &Digraph,
    partition: &NClassPartition,
    budget: u64,
) -> Result<Verdict, VerifyError> {
    let n = reconstructed.vertex_count();
    let covered: usize = partition.classes().iter().map(VertexSet::len).sum();
    if oracle.vertex_count() != n || covered != n {
        return Err(VerifyError::VertexCountMismatch(vec![
            n,
            oracle.vertex_count(),
            covered,
        ]));
    }
    let no_iso = |tried| Verdict {
        status: Status::Fail,
        witness: Some(Witness::NoIsomorphism),
        blocks_compared: 0,
        permutations_tried: Some(tried),
    };
    if reconstructed.arc_count() != oracle.arc_count() {
        return Ok(no_iso(0));
    }
    let initial: Vec<usize> = (0..n).map(|v| partition.class_of(v)).collect();
    let Some((rcol, ocol)) = refine_colours(reconstructed, oracle, &initial) else {
        return Ok(no_iso(0));
    };

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut tried = 0u64;
    let found = search(
        0,
        reconstructed,
        oracle,
        &rcol,
        &ocol,
        &mut image,
        &mut used,
        &mut tried,
        budget,
    )?;
    Ok(if found {
        Verdict {
            status: Status::Pass,
            witness: None,
            blocks_compared: 0,
            permutations_tried: Some(tried),
        }
    } else {
        no_iso(tried)
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    x: usize,
    r: &Digraph,
    o: &Digraph,
    rcol: &[usize],
    ocol: &[usize],
    image: &mut [usize],
    used: &mut [bool],
    tried: &mut u64,
    budget: u64,
) -> Result<bool, VerifyError> {
    let n = image.len();
    if x == n {
        return Ok(true);
    }
    for y in 0..n {
        if used[y] || ocol[y] != rcol[x] {
            continue;
        }
        *tried += 1;
        if *tried > budget {
            return Err(VerifyError::BudgetExceeded(budget));
        }
        let consistent = (0..x).all(|w| {
            r.has_arc(x, w) == o.has_arc(y, image[w]) && r.has_arc(w, x) == o.has_arc(image[w], y)
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if search(x + 1, r, o, rcol, ocol, image, used, tried, budget)? {
            return Ok(true);
        }
        used[y] = false;
    }
    Ok(false)
}

/// Joint colour refinement of two digraphs. Returns `None` when the colour
/// histograms differ, which rules out any colour-preserving isomorphism.
fn refine_colours(a: &Digraph, b: &Digraph, initial: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = initial.len();
    let mut ca = initial.to_vec();
    let mut cb = initial.to_vec();
    let mut distinct = 0;
    loop {
        let sig = |d: &Digraph, c: &[usize], v: usize| {
            let mut outs: Vec<usize> = d.out_neighbours(v).iter().map(|w| c[w]).collect();
            let mut ins: Vec<usize> = d.in_neighbours(v).iter().map(|w| c[w]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (c[v], outs, ins)
        };
        let sa: Vec<_> = (0..n).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<_> = (0..n).map(|v| sig(b, &cb, v)).collect();
        let mut ids = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        ca = sa.iter().map(|s| ids[s]).collect();
        cb = sb.iter().map(|s| ids[s]).collect();
        let mut ha = ca.clone();
        let mut hb = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        if ids.len() == distinct {
            return Some((ca, cb));
        }
        distinct = ids.len();
    }
}

/// Applies random permutations that shuffle every closed-twin class
/// internally and returns those that fail to preserve the edge set (always
/// none, for any graph).
pub fn class_permutation_violations<R: Rng + ?Sized>(
    g: &UndirectedGraph,
    partition: &NClassPartition,
    samples: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut bad = Vec::new();
    for _ in 0..samples {
        let mut perm: Vec<usize> = (0..n).collect();
        for class in partition.classes() {
            let members = class.to_vec();
            let mut shuffled = members.clone();
            shuffled.shuffle(rng);
            for (&from, &to) in members.iter().zip(&shuffled) {
                perm[from] = to;
            }
        }
        if g.edges().any(|(u, v)| !g.has_edge(perm[u], perm[v])) {
            bad.push(perm);
        }
    }
    bad
}

/// Pairs `(x, y)` of elements whose orders are powers of one prime with
/// `o(x) <= o(y)`, for which "`N[x]` contains `N[y]`" and "`x` is a power of
/// `y`" disagree.
pub fn power_containment_violations(
    table: &CayleyTable,
    g: &UndirectedGraph,
) -> Vec<(usize, usize)> {
    let n = table.order();
    let orders = table.element_orders();
    let base = |o: usize| crate::classify::prime_power_decompose(o).map(|(p, _)| p);
    let subgroups: Vec<Vec<usize>> = (0..n).map(|x| table.cyclic_subgroup(x)).collect();
    let mut bad = Vec::new();
    for x in 0..n {
        for (y, sub_y) in subgroups.iter().enumerate() {
            let (ox, oy) = (orders.order(x), orders.order(y));
            if ox > oy {
                continue;
            }
            // Identity counts as a power of every prime.
            let same_prime = match (base(ox), base(oy)) {
                (Some(p), Some(q)) => p == q,
                (None, Some(_)) => ox == 1,
                (_, None) => oy == 1,
            };
            if !same_prime {
                continue;
            }
            let contains = g
                .closed_neighbourhood(y)
                .is_subset(g.closed_neighbourhood(x));
            let is_power = sub_y.binary_search(&x).is_ok();
            if contains != is_power {
                bad.push((x, y));
            }
        }
    }
    bad
}

/// Pairs `(x, y)` with `<x>` a proper subgroup of `<y>`, neither in the star
/// class, but `|[x]_N| > |[y]_N|`.
pub fn class_size_monotonicity_violations(
    table: &CayleyTable,
    partition: &NClassPartition,
) -> Vec<(usize, usize)> {
    let n = table.order();
    let star = partition.star_class_index();
    let subgroups: Vec<Vec<usize>> = (0..n).map(|x| table.cyclic_subgroup(x)).collect();
    let size = |v: usize| partition.class(partition.class_of(v)).len();
    let mut bad = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if Some(partition.class_of(x)) == star || Some(partition.class_of(y)) == star {
                continue;
            }
            let proper = subgroups[x].len() < subgroups[y].len()
                && subgroups[x]
                    .iter()
                    .all(|e| subgroups[y].binary_search(e).is_ok());
            if proper && size(x) > size(y) {
                bad.push((x, y));
            }
        }
    }
    bad
}
