// SPDX-License-Identifier: Apache-2.0

//! Graph carriers and the closed-neighbourhood machinery.
//!
//! Everything here works on arbitrary simple graphs. The power-graph reading
//! of these objects (the star class is the identity's class, and so on) lives
//! in [`crate::classify`] and [`crate::reconstruct`].

pub mod io;
mod set;

use std::collections::HashMap;

use thiserror::Error;

pub use set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<(), GraphError> {
    for vertex in [u, v] {
        if vertex >= n {
            return Err(GraphError::VertexOutOfRange { vertex, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    Ok(())
}

/// Simple undirected graph on `0..n`.
///
/// Closed neighbourhoods are materialised at construction, so all queries are
/// intersections of precomputed bitsets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UndirectedGraph {
    closed: Vec<VertexSet>,
}

impl UndirectedGraph {
    /// Builds a graph from unordered pairs; duplicate pairs are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut closed: Vec<VertexSet> = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
        for (u, v) in edges {
            check_pair(n, u, v)?;
            closed[u].insert(v);
            closed[v].insert(u);
        }
        Ok(UndirectedGraph { closed })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(UndirectedGraph {
            closed: vec![VertexSet::full(n); n],
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.closed.len()
    }

    pub fn edge_count(&self) -> usize {
        self.closed.iter().map(|s| s.len() - 1).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.closed[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.closed[v].len() - 1
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.closed
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// `N[x]`: `x` together with its neighbours.
    pub fn closed_neighbourhood(&self, x: usize) -> &VertexSet {
        &self.closed[x]
    }

    /// `N[X]`: the intersection of `N[x]` over `x` in `X`, or all of `V` when
    /// `X` is empty.
    pub fn set_neighbourhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = self.all_vertices();
        for x in set.iter() {
            out.intersect_with(&self.closed[x]);
        }
        out
    }

    /// Neighbourhood closure `N[N[X]]`.
    pub fn closure(&self, set: &VertexSet) -> VertexSet {
        self.set_neighbourhood(&self.set_neighbourhood(set))
    }

    /// Vertices adjacent to every other vertex.
    pub fn star_set(&self) -> VertexSet {
        VertexSet::from_vertices(
            self.vertex_count(),
            (0..self.vertex_count()).filter(|&v| self.closed[v].is_full()),
        )
    }

    pub fn n_classes(&self) -> NClassPartition {
        NClassPartition::of(self)
    }

    /// Names of the closure laws that fail for the pair `a`, `b`: extensive,
    /// monotone, idempotent, `N[A u B] = N[A] n N[B]`, and `N[A]` closed.
    pub fn closure_law_violations(&self, a: &VertexSet, b: &VertexSet) -> Vec<&'static str> {
        let mut bad = Vec::new();
        let ca = self.closure(a);
        if !a.is_subset(&ca) {
            bad.push("extensive");
        }
        let ab = a.union(b);
        if !ca.is_subset(&self.closure(&ab)) {
            bad.push("monotone");
        }
        if self.closure(&ca) != ca {
            bad.push("idempotent");
        }
        let na = self.set_neighbourhood(a);
        if self.set_neighbourhood(&ab) != na.intersection(&self.set_neighbourhood(b)) {
            bad.push("union");
        }
        if self.closure(&na) != na {
            bad.push("neighbourhood closed");
        }
        bad
    }
}

/// Loop-free digraph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Digraph {
    out: Vec<VertexSet>,
    inc: Vec<VertexSet>,
}

impl Digraph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Digraph {
            out: vec![VertexSet::empty(n); n],
            inc: vec![VertexSet::empty(n); n],
        })
    }

    /// Builds a digraph from ordered pairs; duplicates are merged.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Self::empty(n)?;
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        check_pair(self.vertex_count(), u, v)?;
        self.out[u].insert(v);
        self.inc[v].insert(u);
        Ok(())
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u].remove(v);
        self.inc[v].remove(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(VertexSet::len).sum()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_neighbours(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    pub fn in_neighbours(&self, v: usize) -> &VertexSet {
        &self.inc[v]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().map(move |v| (u, v)))
    }

    /// The graph with an edge wherever at least one arc exists.
    pub fn underlying(&self) -> UndirectedGraph {
        let n = self.vertex_count();
        let closed = (0..n)
            .map(|v| {
                let mut s = self.out[v].union(&self.inc[v]);
                s.insert(v);
                s
            })
            .collect();
        UndirectedGraph { closed }
    }
}

/// Partition of the vertex set into closed-twin classes (equal `N[x]`).
///
/// Classes are ordered by their smallest member.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NClassPartition {
    classes: Vec<VertexSet>,
    class_of: Vec<usize>,
    star_class: Option<usize>,
}

impl NClassPartition {
    pub fn of(g: &UndirectedGraph) -> Self {
        let n = g.vertex_count();
        let mut index: HashMap<&VertexSet, usize> = HashMap::new();
        let mut classes: Vec<VertexSet> = Vec::new();
        let mut class_of = vec![0; n];
        for (v, slot) in class_of.iter_mut().enumerate() {
            let nb = g.closed_neighbourhood(v);
            let c = *index.entry(nb).or_insert_with(|| {
                classes.push(VertexSet::empty(n));
                classes.len() - 1
            });
            classes[c].insert(v);
            *slot = c;
        }
        // A star vertex's closed neighbourhood is V, so the star set is one class.
        let star_class = (0..n)
            .find(|&v| g.closed_neighbourhood(v).is_full())
            .map(|v| class_of[v]);
        NClassPartition {
            classes,
            class_of,
            star_class,
        }
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, index: usize) -> &VertexSet {
        &self.classes[index]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn star_class_index(&self) -> Option<usize> {
        self.star_class
    }

    /// Index of `set` if it is exactly one of the classes.
    pub fn index_of(&self, set: &VertexSet) -> Option<usize> {
        let c = self.class_of[set.first()?];
        (self.classes[c] == *set).then_some(c)
    }
}
