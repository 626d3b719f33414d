//! Lifespans and lives of edges.
//!
//! Spatial edges joining the same pair of labels in consecutive layers form
//! one life; bridge processes are correlated only within a life. Temporal
//! edges are singleton lives.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EquivalentSimpleGraph, TimeModel};

/// Layers on which an edge persists, listed in traversal order. On a cycle
/// the arc may wrap, e.g. `[3, 0, 1]` for `m = 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifespan {
    times: Vec<usize>,
    m: usize,
    full_cycle: bool,
}

impl Lifespan {
    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// True when a periodic edge is present at every layer.
    pub fn is_full_cycle(&self) -> bool {
        self.full_cycle
    }

    pub fn contains(&self, tau: usize) -> bool {
        self.times.contains(&tau)
    }

    pub fn position(&self, tau: usize) -> Option<usize> {
        self.times.iter().position(|&t| t == tau)
    }

    /// Number of steps between two layers when walking along the arc.
    pub fn gap(&self, tau1: usize, tau2: usize) -> Result<usize> {
        let p1 = self.position(tau1).ok_or(Error::TimeOutsideLifespan { tau: tau1 })?;
        let p2 = self.position(tau2).ok_or(Error::TimeOutsideLifespan { tau: tau2 })?;
        Ok(p1.abs_diff(p2))
    }

    /// Sorted copy of the layer set.
    pub fn sorted(&self) -> Vec<usize> {
        let mut t = self.times.clone();
        t.sort_unstable();
        t
    }
}

/// Split a set of layers into maximal connected runs. On a cycle runs may
/// wrap around `m - 1 -> 0`; a set covering every layer is a single run
/// starting at 0 and flagged as a full cycle.
pub fn arcs(times: &BTreeSet<usize>, m: usize, model: TimeModel) -> Vec<Lifespan> {
    let periodic = model == TimeModel::Periodic;
    if periodic && times.len() == m && m > 0 {
        return vec![Lifespan {
            times: (0..m).collect(),
            m,
            full_cycle: true,
        }];
    }
    let prev = |t: usize| -> Option<usize> {
        if t > 0 {
            Some(t - 1)
        } else if periodic {
            Some(m - 1)
        } else {
            None
        }
    };
    let next = |t: usize| -> Option<usize> {
        if t + 1 < m {
            Some(t + 1)
        } else if periodic {
            Some(0)
        } else {
            None
        }
    };
    let mut out = Vec::new();
    for &start in times {
        if prev(start).is_some_and(|p| times.contains(&p)) {
            continue;
        }
        let mut run = vec![start];
        let mut t = start;
        while let Some(n) = next(t).filter(|n| times.contains(n)) {
            run.push(n);
            t = n;
        }
        out.push(Lifespan {
            times: run,
            m,
            full_cycle: false,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LifeId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Life {
    pub id: LifeId,
    /// Ordered label pair for spatial lives, `None` for a temporal edge.
    pub labels: Option<(String, String)>,
    pub lifespan: Option<Lifespan>,
    /// Member edges in lifespan order.
    pub edges: Vec<EdgeId>,
}

impl Life {
    pub fn is_spatial(&self) -> bool {
        self.labels.is_some()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LifePartition {
    lives: Vec<Life>,
    of_edge: Vec<LifeId>,
}

impl LifePartition {
    pub fn lives(&self) -> &[Life] {
        &self.lives
    }

    pub fn life(&self, id: LifeId) -> &Life {
        &self.lives[id.0]
    }

    pub fn life_of(&self, e: EdgeId) -> LifeId {
        self.of_edge[e.0]
    }

    pub fn same_life(&self, a: EdgeId, b: EdgeId) -> bool {
        self.of_edge[a.0] == self.of_edge[b.0]
    }
}

pub(crate) fn compute_partition(g: &EquivalentSimpleGraph) -> LifePartition {
    let mut by_pair: BTreeMap<(String, String), BTreeMap<usize, EdgeId>> = BTreeMap::new();
    for (id, e) in g.spatial_edges() {
        let (u, v) = (g.vertex(e.u), g.vertex(e.v));
        by_pair
            .entry((u.label.clone(), v.label.clone()))
            .or_default()
            .insert(u.time, id);
    }

    let mut lives = Vec::new();
    let mut of_edge = vec![LifeId(usize::MAX); g.edges().len()];
    for (pair, at) in by_pair {
        let times: BTreeSet<usize> = at.keys().copied().collect();
        for arc in arcs(&times, g.m(), g.time_model()) {
            let id = LifeId(lives.len());
            let edges: Vec<EdgeId> = arc.times().iter().map(|t| at[t]).collect();
            for e in &edges {
                of_edge[e.0] = id;
            }
            lives.push(Life {
                id,
                labels: Some(pair.clone()),
                lifespan: Some(arc),
                edges,
            });
        }
    }
    for (eid, _) in g.temporal_edges() {
        let id = LifeId(lives.len());
        of_edge[eid.0] = id;
        lives.push(Life {
            id,
            labels: None,
            lifespan: None,
            edges: vec![eid],
        });
    }
    LifePartition { lives, of_edge }
}

/// Lifespan of a spatial edge.
pub fn lifespan(g: &EquivalentSimpleGraph, e: EdgeId) -> Result<&Lifespan> {
    let life = g.lives().life(g.lives().life_of(e));
    life.lifespan.as_ref().ok_or_else(|| {
        let edge = g.edge(e);
        Error::NotSpatial(format!("({}, {})", g.vertex(edge.u), g.vertex(edge.v)))
    })
}

/// Life of any edge.
pub fn life(g: &EquivalentSimpleGraph, e: EdgeId) -> &Life {
    g.lives().life(g.lives().life_of(e))
}
