// SPDX-License-Identifier: Apache-2.0

//! Plain/compound classification of the closed-twin classes of a power graph
//! whose only star vertex is the identity.
//!
//! A class is *plain* when it is a single generator class (all members
//! generate the same cyclic subgroup) and *compound* otherwise. Compound
//! classes other than the star class carry parameters `(p, r, s)`: the class
//! is `{z in <y> : p^(s+1) <= o(z) <= p^r}` for a root `y` of order `p^r`, so
//! `|C| = p^r - p^s` and its closure is `<y>` of size `p^r`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{NClassPartition, UndirectedGraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("vertex set {0:?} is not a closed-twin class of the graph")]
    NotAnNClass(Vec<usize>),
    #[error("class {0:?} is the star class")]
    StarClassGiven(Vec<usize>),
    #[error("star set {star:?} is not exactly {{{identity}}}")]
    StarSetNotIdentity { star: Vec<usize>, identity: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CompoundParameters {
    p: usize,
    r: u32,
    s: u32,
}

impl CompoundParameters {
    /// `None` unless `p` is prime, `r >= 2` and `s <= r - 2`.
    pub fn new(p: usize, r: u32, s: u32) -> Option<Self> {
        (is_prime(p) && r >= 2 && s + 2 <= r).then_some(CompoundParameters { p, r, s })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `p^r - p^s`.
    pub fn class_size(&self) -> usize {
        self.p.pow(self.r) - self.p.pow(self.s)
    }

    /// `p^r`.
    pub fn closure_size(&self) -> usize {
        self.p.pow(self.r)
    }

    /// Generator-class sizes `phi(p^i)` for `i = s+1..=r`, strictly increasing.
    pub fn block_sizes(&self) -> Vec<usize> {
        (self.s + 1..=self.r)
            .map(|i| self.p.pow(i) - self.p.pow(i - 1))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Plain,
    Compound(CompoundParameters),
}

impl ClassKind {
    pub fn is_plain(&self) -> bool {
        matches!(self, ClassKind::Plain)
    }

    pub fn parameters(&self) -> Option<CompoundParameters> {
        match self {
            ClassKind::Plain => None,
            ClassKind::Compound(params) => Some(*params),
        }
    }
}

/// Verdict for one class, with the sizes it was decided from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVerdict {
    pub class_index: usize,
    pub kind: ClassKind,
    pub critical: bool,
    pub size: usize,
    pub closure_size: usize,
}

fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// `(p, r)` with `m = p^r`, `p` prime and `r >= 1`, if `m` is a prime power.
pub fn prime_power_decompose(m: usize) -> Option<(usize, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..)
        .take_while(|d| d * d <= m)
        .find(|d| m.is_multiple_of(*d))
        .unwrap_or(m);
    let mut rest = m;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

/// Whether `class` is critical: its closure is exactly `class` plus the
/// identity and has size `p^r` with `r >= 2`.
pub fn is_critical(g: &UndirectedGraph, class: &VertexSet, identity: usize) -> bool {
    if class.contains(identity) {
        return false;
    }
    let closure = g.closure(class);
    critical_from_closure(class, &closure, identity)
}

fn critical_from_closure(class: &VertexSet, closure: &VertexSet, identity: usize) -> bool {
    let mut expected = class.clone();
    expected.insert(identity);
    *closure == expected && matches!(prime_power_decompose(closure.len()), Some((_, r)) if r >= 2)
}

fn check_star(g: &UndirectedGraph, identity: usize) -> Result<(), ClassifyError> {
    let star = g.star_set();
    if star.len() != 1 || !star.contains(identity) {
        return Err(ClassifyError::StarSetNotIdentity {
            star: star.to_vec(),
            identity,
        });
    }
    Ok(())
}

/// Decides the type of one non-star class.
///
/// The size tests settle everything except classes with `|C| = p^r - 1`,
/// which are critical; those are plain exactly when some vertex outside the
/// closure, adjacent to the class, has a class no larger than `C`.
pub fn classify_class(
    g: &UndirectedGraph,
    partition: &NClassPartition,
    class: &VertexSet,
    identity: usize,
) -> Result<ClassVerdict, ClassifyError> {
    let class_index = partition
        .index_of(class)
        .ok_or_else(|| ClassifyError::NotAnNClass(class.to_vec()))?;
    if class.contains(identity) || partition.star_class_index() == Some(class_index) {
        return Err(ClassifyError::StarClassGiven(class.to_vec()));
    }
    check_star(g, identity)?;

    let closure = g.closure(class);
    let size = class.len();
    let closure_size = closure.len();
    let critical = critical_from_closure(class, &closure, identity);
    let verdict = |kind| ClassVerdict {
        class_index,
        kind,
        critical,
        size,
        closure_size,
    };

    let Some((p, r)) = prime_power_decompose(closure_size) else {
        return Ok(verdict(ClassKind::Plain));
    };
    if r < 2 {
        return Ok(verdict(ClassKind::Plain));
    }
    let Some(s) = (0..=r - 2).find(|&s| size == p.pow(r) - p.pow(s)) else {
        return Ok(verdict(ClassKind::Plain));
    };
    let params = CompoundParameters::new(p, r, s).expect("p prime, r >= 2, s <= r - 2");
    if s != 0 {
        return Ok(verdict(ClassKind::Compound(params)));
    }

    // |closure| = |C| + 1 and the closure contains C and the identity, so C is
    // critical here.
    debug_assert!(critical);
    let y = class.first().expect("classes are nonempty");
    let neighbours = g.closed_neighbourhood(y);
    let witness = neighbours
        .difference(&closure)
        .iter()
        .find(|&x| partition.class(partition.class_of(x)).len() <= size);
    Ok(verdict(match witness {
        Some(_) => ClassKind::Plain,
        None => ClassKind::Compound(params),
    }))
}

/// Classifies every class except the star class, in class-index order.
pub fn classify_all(
    g: &UndirectedGraph,
    partition: &NClassPartition,
    identity: usize,
) -> Result<Vec<ClassVerdict>, ClassifyError> {
    check_star(g, identity)?;
    let star = partition.class_of(identity);
    (0..partition.len())
        .filter(|&c| c != star)
        .map(|c| classify_class(g, partition, partition.class(c), identity))
        .collect()
}

/// One entry of the JSON classification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub members: Vec<usize>,
    pub size: usize,
    pub closure_size: usize,
    pub star: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<CompoundParameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub star_set: Vec<usize>,
    /// Set when the star set is a single vertex, i.e. the identity is known.
    pub identity: Option<usize>,
    pub classes: Vec<ClassReport>,
}

/// Builds the report for any graph. Verdicts are filled in only when the star
/// set is a single vertex; otherwise the graph is handled by the star-set
/// shortcut and classes are listed without a kind.
pub fn report(g: &UndirectedGraph) -> Result<ClassificationReport, ClassifyError> {
    let partition = g.n_classes();
    let star = g.star_set();
    let identity = (star.len() == 1).then(|| star.first().unwrap());
    let verdicts = match identity {
        Some(e) => classify_all(g, &partition, e)?,
        None => Vec::new(),
    };
    let classes = partition
        .classes()
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let verdict = verdicts.iter().find(|v| v.class_index == c);
            ClassReport {
                members: members.to_vec(),
                size: members.len(),
                closure_size: verdict
                    .map(|v| v.closure_size)
                    .unwrap_or_else(|| g.closure(members).len()),
                star: partition.star_class_index() == Some(c),
                kind: verdict.map(|v| {
                    if v.kind.is_plain() {
                        "plain"
                    } else {
                        "compound"
                    }
                }),
                parameters: verdict.and_then(|v| v.kind.parameters()),
                critical: verdict.map(|v| v.critical),
            }
        })
        .collect();
    Ok(ClassificationReport {
        n: g.vertex_count(),
        star_set: star.to_vec(),
        identity,
        classes,
    })
}
