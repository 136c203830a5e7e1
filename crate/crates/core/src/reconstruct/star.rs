// SPDX-License-Identifier: Apache-2.0

//! Inputs with several star vertices, and the degenerate orders 1 and 2.
//!
//! The star count pins the group down to a cyclic or generalized quaternion
//! group of order `n`. Its power graph is matched to the input through the
//! quotient by closed-twin classes, and the directed power graph is pulled
//! back along that matching.

use crate::graph::{Digraph, NClassPartition, UndirectedGraph, VertexSet};
use crate::groups::{build_group, directed_power_graph, euler_phi, power_graph, GroupSpec};

use super::ReconstructError;

const QUOTIENT_SEARCH_BUDGET: usize = 1_000_000;

fn identify(n: usize, stars: usize) -> Result<GroupSpec, ReconstructError> {
    let mismatch = Err(ReconstructError::StarCount { star: stars, n });
    if stars == n {
        if n == 1 || crate::classify::prime_power_decompose(n).is_some() {
            return Ok(GroupSpec::Cyclic(n));
        }
        return mismatch;
    }
    if stars == 1 + euler_phi(n) {
        return Ok(GroupSpec::Cyclic(n));
    }
    if stars == 2 && n >= 8 && n.is_power_of_two() {
        return Ok(GroupSpec::Quaternion(n));
    }
    mismatch
}

pub(super) fn reconstruct_with_stars(
    g: &UndirectedGraph,
    star: &VertexSet,
) -> Result<Digraph, ReconstructError> {
    let n = g.vertex_count();
    let spec = identify(n, star.len())?;
    let group = build_group(&spec).expect("identified specs are well formed");
    let target = power_graph(&group);
    let not_found = || ReconstructError::LabelingNotFound(spec.to_string());

    let ours = g.n_classes();
    let theirs = target.n_classes();
    let class_map = match_quotients(g, &ours, &target, &theirs).ok_or_else(not_found)?;

    // Lift: the k-th smallest member of a class goes to the k-th smallest
    // member of its image.
    let mut back = vec![0; n];
    for (c, class) in ours.classes().iter().enumerate() {
        let image = theirs.class(class_map[c]);
        for (v, w) in class.iter().zip(image.iter()) {
            back[w] = v;
        }
    }
    let oracle = directed_power_graph(&group);
    let d = Digraph::from_arcs(n, oracle.arcs().map(|(a, b)| (back[a], back[b])))
        .expect("relabelled arcs stay valid");
    debug_assert_eq!(d.underlying(), *g);
    Ok(d)
}

struct Quotient {
    sizes: Vec<usize>,
    adjacent: Vec<Vec<bool>>,
    signature: Vec<(usize, Vec<usize>)>,
}

impl Quotient {
    fn new(g: &UndirectedGraph, p: &NClassPartition) -> Self {
        let k = p.len();
        let reps: Vec<usize> = p.classes().iter().map(|c| c.first().unwrap()).collect();
        let sizes: Vec<usize> = p.classes().iter().map(VertexSet::len).collect();
        let adjacent: Vec<Vec<bool>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| i != j && g.has_edge(reps[i], reps[j]))
                    .collect()
            })
            .collect();
        let signature = (0..k)
            .map(|i| {
                let mut nb: Vec<usize> = (0..k)
                    .filter(|&j| adjacent[i][j])
                    .map(|j| sizes[j])
                    .collect();
                nb.sort_unstable();
                (sizes[i], nb)
            })
            .collect();
        Quotient {
            sizes,
            adjacent,
            signature,
        }
    }
}

/// A size- and adjacency-preserving bijection between the class quotients,
/// found by depth-first search trying images in index order. When both
/// graphs are literally equal this returns the identity.
fn match_quotients(
    g: &UndirectedGraph,
    gp: &NClassPartition,
    h: &UndirectedGraph,
    hp: &NClassPartition,
) -> Option<Vec<usize>> {
    if gp.len() != hp.len() {
        return None;
    }
    let qg = Quotient::new(g, gp);
    let qh = Quotient::new(h, hp);
    let k = gp.len();
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; k];
    let mut steps = 0usize;

    fn extend(
        i: usize,
        qg: &Quotient,
        qh: &Quotient,
        image: &mut [usize],
        used: &mut [bool],
        steps: &mut usize,
    ) -> bool {
        if i == image.len() {
            return true;
        }
        for j in 0..image.len() {
            *steps += 1;
            if *steps > QUOTIENT_SEARCH_BUDGET {
                return false;
            }
            if used[j] || qg.signature[i] != qh.signature[j] {
                continue;
            }
            debug_assert_eq!(qg.sizes[i], qh.sizes[j]);
            if (0..i).any(|k| qg.adjacent[i][k] != qh.adjacent[j][image[k]]) {
                continue;
            }
            image[i] = j;
            used[j] = true;
            if extend(i + 1, qg, qh, image, used, steps) {
                return true;
            }
            used[j] = false;
        }
        false
    }

    extend(0, &qg, &qh, &mut image, &mut used, &mut steps).then_some(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifies_by_star_count() {
        assert_eq!(identify(1, 1).unwrap(), GroupSpec::Cyclic(1));
        assert_eq!(identify(2, 2).unwrap(), GroupSpec::Cyclic(2));
        assert_eq!(identify(9, 9).unwrap(), GroupSpec::Cyclic(9));
        assert_eq!(identify(12, 5).unwrap(), GroupSpec::Cyclic(12));
        assert_eq!(identify(16, 2).unwrap(), GroupSpec::Quaternion(16));
        assert!(identify(6, 6).is_err());
        assert!(identify(12, 2).is_err());
        assert!(identify(4, 2).is_err());
        assert!(identify(2, 0).is_err());
    }

    #[test]
    fn relabelled_cyclic_power_graph() {
        // P(C_6) with labels reversed: v -> 5 - v.
        let g6 = power_graph(&build_group(&GroupSpec::Cyclic(6)).unwrap());
        let flipped =
            UndirectedGraph::from_edges(6, g6.edges().map(|(u, v)| (5 - u, 5 - v))).unwrap();
        let d = reconstruct_with_stars(&flipped, &flipped.star_set()).unwrap();
        assert_eq!(d.underlying(), flipped);
        // Exactly one vertex (the identity) has no out-arcs.
        assert_eq!(
            (0..6).filter(|&v| d.out_neighbours(v).is_empty()).count(),
            1
        );
    }

    #[test]
    fn quotient_mismatch_is_reported() {
        // Two stars on 8 vertices, but not quaternion-shaped: a star K_{1,7}
        // with the leaf 1 joined to everything.
        let mut edges: Vec<(usize, usize)> = (1..8).map(|v| (0, v)).collect();
        edges.extend((2..8).map(|v| (1, v)));
        let g = UndirectedGraph::from_edges(8, edges).unwrap();
        assert_eq!(g.star_set().len(), 2);
        assert!(matches!(
            reconstruct_with_stars(&g, &g.star_set()),
            Err(ReconstructError::LabelingNotFound(_))
        ));
    }
}
