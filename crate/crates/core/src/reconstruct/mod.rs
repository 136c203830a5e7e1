// SPDX-License-Identifier: Apache-2.0

//! Rebuilding the directed power graph from the undirected power graph.
//!
//! With more than one star vertex the group is determined (cyclic or
//! generalized quaternion) and its directed power graph is transplanted onto
//! the input labels. With a single star vertex the generator classes are
//! recovered up to an automorphism of the input and arcs are oriented by
//! comparing class sizes.

mod star;

use thiserror::Error;

use crate::classify::{classify_all, ClassKind, ClassVerdict, ClassifyError, CompoundParameters};
use crate::graph::{Digraph, NClassPartition, UndirectedGraph, VertexSet};
use crate::groups::euler_phi;

/// Inconsistencies that show the input cannot be a power graph.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("class of size {actual} cannot be split into blocks of sizes {expected:?}")]
    SizeMismatch { expected: Vec<usize>, actual: usize },
    #[error("edge {{{0}, {1}}} joins two singleton blocks away from the identity")]
    EqualSingletonBlocks(usize, usize),
    #[error("edge {{{0}, {1}}} joins equal-size blocks and the involution tie-break is {2}")]
    NoInvolutionTiebreak(usize, usize, &'static str),
    #[error("class {0:?} has no verdict")]
    MissingVerdict(Vec<usize>),
    #[error("{star} star vertices on {n} vertices matches no cyclic or quaternion group")]
    StarCount { star: usize, n: usize },
    #[error("graph does not match the power graph of {0}")]
    LabelingNotFound(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// The input is not the power graph of any finite group.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a power graph: {0}")]
pub struct NotAPowerGraph(#[from] pub ReconstructError);

/// Partition of the non-identity vertices which, up to an automorphism of the
/// graph that fixes every closed-twin class setwise, is the partition into
/// generator classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondPartition {
    blocks: Vec<VertexSet>,
    block_of: Vec<Option<usize>>,
    identity: usize,
}

impl DiamondPartition {
    /// Blocks ordered by smallest member.
    pub fn new(n: usize, identity: usize, mut blocks: Vec<VertexSet>) -> Self {
        blocks.sort_by_key(|b| b.first());
        let mut block_of = vec![None; n];
        for (i, b) in blocks.iter().enumerate() {
            for v in b.iter() {
                debug_assert!(block_of[v].is_none() && v != identity);
                block_of[v] = Some(i);
            }
        }
        DiamondPartition {
            blocks,
            block_of,
            identity,
        }
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    /// `None` for the identity.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.block_of[v]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// Splits a compound class into consecutive runs of its sorted members with
/// sizes `phi(p^(s+1)), ..., phi(p^r)`.
pub fn partition_compound_class(
    class: &VertexSet,
    params: &CompoundParameters,
) -> Result<Vec<VertexSet>, ReconstructError> {
    let sizes: Vec<usize> = (params.s() + 1..=params.r())
        .map(|i| euler_phi(params.p().pow(i)))
        .collect();
    if sizes.iter().sum::<usize>() != class.len() {
        return Err(ReconstructError::SizeMismatch {
            expected: sizes,
            actual: class.len(),
        });
    }
    let members = class.to_vec();
    let mut rest = members.as_slice();
    Ok(sizes
        .into_iter()
        .map(|k| {
            let (head, tail) = rest.split_at(k);
            rest = tail;
            VertexSet::from_vertices(class.capacity(), head.iter().copied())
        })
        .collect())
}

/// Plain classes become single blocks; compound classes are split.
pub fn diamond_partition(
    g: &UndirectedGraph,
    partition: &NClassPartition,
    verdicts: &[ClassVerdict],
    identity: usize,
) -> Result<DiamondPartition, ReconstructError> {
    let star = partition.class_of(identity);
    let mut blocks = Vec::new();
    for (c, class) in partition.classes().iter().enumerate() {
        if c == star {
            continue;
        }
        let verdict = verdicts
            .iter()
            .find(|v| v.class_index == c)
            .ok_or_else(|| ReconstructError::MissingVerdict(class.to_vec()))?;
        match verdict.kind {
            ClassKind::Plain => blocks.push(class.clone()),
            ClassKind::Compound(params) => blocks.extend(partition_compound_class(class, &params)?),
        }
    }
    Ok(DiamondPartition::new(g.vertex_count(), identity, blocks))
}

/// Orients every edge of `g` from block sizes.
///
/// Edges at the identity point into it; edges inside a block become two arcs;
/// between blocks the larger one is the tail. Between equal blocks of size at
/// least two, the tail is the block adjacent to a singleton block (an
/// involution).
pub fn assign_arc_directions(
    g: &UndirectedGraph,
    dp: &DiamondPartition,
) -> Result<Digraph, ReconstructError> {
    let n = g.vertex_count();
    let identity = dp.identity();
    let mut involutions = VertexSet::empty(n);
    for b in dp.blocks().iter().filter(|b| b.len() == 1) {
        involutions.union_with(b);
    }
    // Members of a block share their closed neighbourhood whenever the block
    // lies in one closed-twin class, but scan them all anyway.
    let touches_involution: Vec<bool> = dp
        .blocks()
        .iter()
        .map(|b| {
            b.iter().any(|v| {
                !g.closed_neighbourhood(v)
                    .difference(b)
                    .is_disjoint(&involutions)
            })
        })
        .collect();

    let mut d = Digraph::empty(n).expect("graph is nonempty");
    for (u, v) in g.edges() {
        if u == identity || v == identity {
            let other = if u == identity { v } else { u };
            d.add_arc(other, identity)
                .expect("edge endpoints are valid");
            continue;
        }
        let (bu, bv) = (
            dp.block_of(u).expect("non-identity vertex has a block"),
            dp.block_of(v).expect("non-identity vertex has a block"),
        );
        let (su, sv) = (dp.blocks()[bu].len(), dp.blocks()[bv].len());
        let arcs: &[(usize, usize)] = if bu == bv {
            &[(u, v), (v, u)]
        } else if su > sv {
            &[(u, v)]
        } else if sv > su {
            &[(v, u)]
        } else if su == 1 {
            return Err(ReconstructError::EqualSingletonBlocks(u, v));
        } else {
            match (touches_involution[bu], touches_involution[bv]) {
                (true, false) => &[(u, v)],
                (false, true) => &[(v, u)],
                (true, true) => {
                    return Err(ReconstructError::NoInvolutionTiebreak(u, v, "ambiguous"))
                }
                (false, false) => {
                    return Err(ReconstructError::NoInvolutionTiebreak(u, v, "missing"))
                }
            }
        };
        for &(a, b) in arcs {
            d.add_arc(a, b).expect("edge endpoints are valid");
        }
    }
    Ok(d)
}

/// A digraph isomorphic to the directed power graph of every group whose
/// power graph is `g`, with `g` as its underlying graph.
pub fn reconstruct(g: &UndirectedGraph) -> Result<Digraph, NotAPowerGraph> {
    let star = g.star_set();
    if star.len() > 1 || g.vertex_count() <= 2 {
        return Ok(star::reconstruct_with_stars(g, &star)?);
    }
    let identity = star.first().ok_or(ReconstructError::StarCount {
        star: 0,
        n: g.vertex_count(),
    })?;
    let partition = g.n_classes();
    let verdicts = classify_all(g, &partition, identity).map_err(ReconstructError::from)?;
    let dp = diamond_partition(g, &partition, &verdicts, identity)?;
    Ok(assign_arc_directions(g, &dp)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, directed_power_graph, power_graph, GroupSpec};

    fn pg(spec: &str) -> UndirectedGraph {
        power_graph(&build_group(&spec.parse().unwrap()).unwrap())
    }

    fn sizes(blocks: &[VertexSet]) -> Vec<usize> {
        blocks.iter().map(VertexSet::len).collect()
    }

    #[test]
    fn compound_split_sizes() {
        let c = VertexSet::from_vertices(20, 1..9);
        let d18 = CompoundParameters::new(3, 2, 0).unwrap();
        let blocks = partition_compound_class(&c, &d18).unwrap();
        assert_eq!(sizes(&blocks), vec![2, 6]);
        assert_eq!(blocks[0].to_vec(), vec![1, 2]);

        let qd = CompoundParameters::new(2, 3, 1).unwrap();
        let c6 = VertexSet::from_vertices(20, 10..16);
        assert_eq!(
            sizes(&partition_compound_class(&c6, &qd).unwrap()),
            vec![2, 4]
        );

        let s4 = CompoundParameters::new(2, 2, 0).unwrap();
        let c3 = VertexSet::from_vertices(20, [4, 7, 9]);
        assert_eq!(
            sizes(&partition_compound_class(&c3, &s4).unwrap()),
            vec![1, 2]
        );

        assert_eq!(
            partition_compound_class(&c3, &d18),
            Err(ReconstructError::SizeMismatch {
                expected: vec![2, 6],
                actual: 3
            })
        );
    }

    fn diamond_of(spec: &str) -> (UndirectedGraph, DiamondPartition) {
        let g = pg(spec);
        let p = g.n_classes();
        let v = classify_all(&g, &p, 0).unwrap();
        let dp = diamond_partition(&g, &p, &v, 0).unwrap();
        (g, dp)
    }

    #[test]
    fn diamond_partitions_of_dihedral_groups() {
        let (_, dp) = diamond_of("dihedral:30");
        assert_eq!(dp.blocks().len(), 18);
        let mut s = sizes(dp.blocks());
        s.sort_unstable();
        assert_eq!(&s[15..], &[2, 4, 8]);

        let (_, dp) = diamond_of("dihedral:18");
        assert_eq!(dp.blocks().len(), 11);
        let mut s = sizes(dp.blocks());
        s.sort_unstable();
        assert_eq!(&s[9..], &[2, 6]);
        assert_eq!(dp.block_of(0), None);
    }

    #[test]
    fn arc_rules_on_d30() {
        let (g, dp) = diamond_of("dihedral:30");
        let d = assign_arc_directions(&g, &dp).unwrap();
        assert_eq!(d.underlying(), g);
        // identity edges point in
        assert!(d.has_arc(20, 0) && !d.has_arc(0, 20));
        // order-15 elements a and a^2 share a block
        assert!(d.has_arc(1, 2) && d.has_arc(2, 1));
        // order 15 -> order 5
        assert!(d.has_arc(1, 3) && !d.has_arc(3, 1));
    }

    #[test]
    fn equal_blocks_break_ties_on_d12() {
        // a = 1 has order 6 and a^2 = 2 has order 3; both blocks have size 2
        // and only the first touches the involution a^3 = 3.
        let (g, dp) = diamond_of("dihedral:12");
        let d = assign_arc_directions(&g, &dp).unwrap();
        assert!(d.has_arc(1, 2) && !d.has_arc(2, 1));
        assert!(d.has_arc(5, 4) && !d.has_arc(4, 5));
        let oracle = directed_power_graph(&build_group(&GroupSpec::Dihedral(12)).unwrap());
        assert_eq!(d, oracle);
    }

    #[test]
    fn reconstruct_small_and_star_cases() {
        for spec in [
            "cyclic:1",
            "cyclic:2",
            "cyclic:4",
            "cyclic:6",
            "quaternion:8",
        ] {
            let group = build_group(&spec.parse().unwrap()).unwrap();
            assert_eq!(
                reconstruct(&power_graph(&group)).unwrap(),
                directed_power_graph(&group),
                "{spec}"
            );
        }
    }

    #[test]
    fn impostors_are_rejected() {
        let c4 = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(
            reconstruct(&c4),
            Err(NotAPowerGraph(ReconstructError::StarCount { star: 0, .. }))
        ));
        let e2 = UndirectedGraph::from_edges(2, []).unwrap();
        assert!(reconstruct(&e2).is_err());
        let k6 = UndirectedGraph::complete(6).unwrap();
        assert!(matches!(
            reconstruct(&k6),
            Err(NotAPowerGraph(ReconstructError::StarCount { .. }))
        ));
        // Centre 0 plus edges 1-3 and 3-4: every class is a singleton, so
        // the edge between 1 and 3 cannot be oriented.
        let g = UndirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (3, 4), (1, 3)])
            .unwrap();
        assert!(matches!(
            reconstruct(&g),
            Err(NotAPowerGraph(ReconstructError::EqualSingletonBlocks(..)))
        ));
    }
}
