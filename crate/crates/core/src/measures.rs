//! Label-independent structural measures: betweenness, degree centrality and
//! the local clustering coefficient.
//!
//! All three ignore edge weights. Betweenness uses hop-count shortest paths
//! and is reported unnormalized; ordered pairs are counted in directed mode,
//! unordered pairs in the undirected view.
//!
//! Degenerate values: degree on graphs with fewer than two nodes, clustering
//! for nodes with fewer than two neighbors, and betweenness on graphs with
//! fewer than three nodes are all 0.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, DirectionMode, NodeId};

/// Sources handled per parallel task in betweenness. Partial sums are merged
/// in source order so the result does not depend on the thread count.
const SOURCE_CHUNK: usize = 32;

/// Any per-node structural measure on a bare topology.
pub trait StructuralMeasure: Sync {
    fn name(&self) -> &str;

    /// Value for every node of `topo`.
    fn evaluate(&self, topo: &Adjacency, dir: DirectionMode) -> Vec<f64>;

    /// Value at a single node; override when cheaper than a full pass.
    fn evaluate_at(&self, topo: &Adjacency, dir: DirectionMode, v: NodeId) -> f64 {
        self.evaluate(topo, dir)[v.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Betweenness,
    Degree,
    Clustering,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Betweenness, Measure::Degree, Measure::Clustering];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Betweenness => "betweenness",
            Measure::Degree => "degree",
            Measure::Clustering => "clustering",
        }
    }

    pub fn compute(self, topo: &Adjacency, dir: DirectionMode) -> CentralityVector {
        match self {
            Measure::Betweenness => betweenness(topo, dir),
            Measure::Degree => degree_centrality(topo, dir),
            Measure::Clustering => clustering_coefficient(topo, dir),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown measure '{s}'")))
    }
}

impl StructuralMeasure for Measure {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn evaluate(&self, topo: &Adjacency, dir: DirectionMode) -> Vec<f64> {
        self.compute(topo, dir).values
    }

    fn evaluate_at(&self, topo: &Adjacency, dir: DirectionMode, v: NodeId) -> f64 {
        match self {
            Measure::Betweenness => betweenness(topo, dir).values[v.index()],
            Measure::Degree => degree_at(topo, dir, v),
            Measure::Clustering => clustering_at(topo, dir, v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub dir: DirectionMode,
    pub values: Vec<f64>,
}

impl CentralityVector {
    pub fn get(&self, v: NodeId) -> f64 {
        self.values[v.index()]
    }
}

/// Shortest-path betweenness via single-source dependency accumulation.
pub fn betweenness(topo: &Adjacency, dir: DirectionMode) -> CentralityVector {
    let n = topo.node_count();
    let mut values = vec![0.0; n];
    if n >= 3 {
        let adj = topo.neighbor_lists(dir);
        let sources: Vec<usize> = (0..n).collect();
        let partials: Vec<Vec<f64>> = sources
            .par_chunks(SOURCE_CHUNK)
            .map(|chunk| {
                let mut acc = vec![0.0; n];
                let mut scratch = Scratch::new(n);
                for &s in chunk {
                    scratch.accumulate(&adj, s, &mut acc);
                }
                acc
            })
            .collect();
        for part in partials {
            for (v, x) in values.iter_mut().zip(part) {
                *v += x;
            }
        }
        if dir == DirectionMode::Undirected {
            // every unordered pair was visited from both endpoints
            for v in &mut values {
                *v /= 2.0;
            }
        }
    }
    CentralityVector {
        measure: Measure::Betweenness,
        dir,
        values,
    }
}

struct Scratch {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, adj: &[Vec<NodeId>], s: usize, acc: &mut [f64]) {
        self.dist.fill(-1);
        self.sigma.fill(0.0);
        self.delta.fill(0.0);
        for p in &mut self.preds {
            p.clear();
        }
        self.order.clear();

        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for w in adj[v].iter().map(|w| w.index()) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
        while let Some(w) = self.order.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// `card(n(G, v)) / (card(V) - 1)`.
pub fn degree_centrality(topo: &Adjacency, dir: DirectionMode) -> CentralityVector {
    let values = (0..topo.node_count())
        .into_par_iter()
        .map(|i| degree_at(topo, dir, NodeId::from_index(i)))
        .collect();
    CentralityVector {
        measure: Measure::Degree,
        dir,
        values,
    }
}

fn degree_at(topo: &Adjacency, dir: DirectionMode, v: NodeId) -> f64 {
    let n = topo.node_count();
    if n < 2 {
        return 0.0;
    }
    let k = match dir {
        DirectionMode::Directed => topo.out_edges(v).len(),
        DirectionMode::Undirected => topo.neighbors(v, dir).len(),
    };
    k as f64 / (n - 1) as f64
}

/// Fraction of possible ties among the neighbors of each node that exist.
pub fn clustering_coefficient(topo: &Adjacency, dir: DirectionMode) -> CentralityVector {
    let values = (0..topo.node_count())
        .into_par_iter()
        .map(|i| clustering_at(topo, dir, NodeId::from_index(i)))
        .collect();
    CentralityVector {
        measure: Measure::Clustering,
        dir,
        values,
    }
}

fn clustering_at(topo: &Adjacency, dir: DirectionMode, v: NodeId) -> f64 {
    let hood = topo.neighbors(v, dir);
    let k = hood.len();
    if k < 2 {
        return 0.0;
    }
    let in_hood = |u: &NodeId| hood.binary_search(u).is_ok();
    // directed edges among the neighborhood
    let directed_ties: usize = hood
        .iter()
        .map(|&a| topo.out_edges(a).iter().filter(|(b, _)| in_hood(b)).count())
        .sum();
    let pairs = (k * (k - 1)) as f64;
    match dir {
        DirectionMode::Directed => directed_ties as f64 / pairs,
        DirectionMode::Undirected => {
            let mutual: usize = hood
                .iter()
                .map(|&a| {
                    topo.out_edges(a)
                        .iter()
                        .filter(|&&(b, _)| a < b && in_hood(&b) && topo.has_edge(b, a))
                        .count()
                })
                .sum();
            // each adjacent pair once, out of k(k-1)/2
            (directed_ties - mutual) as f64 / (pairs / 2.0)
        }
    }
}
