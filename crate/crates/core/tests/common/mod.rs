//! Independent reference implementations and generators shared by the
//! integration tests. Everything here is written for clarity, not speed.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use netfeat::eval::boost::{Branch, DecisionStump, FeatureKind, Split};
use netfeat::eval::Dataset;
use netfeat::{Adjacency, DirectionMode, GraphBuilder, Label, LabeledGraph, NodeId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed Erdős–Rényi graph over nodes "0".."n-1" with weights in (0, 1].
/// When `labeled`, each node gets '0', '1' or (with probability
/// `unlabeled`) no label; the label set is always {0, 1}.
pub fn random_graph(
    r: &mut ChaCha8Rng,
    n: usize,
    p: f64,
    labeled: bool,
    unlabeled: f64,
) -> LabeledGraph {
    let mut b = GraphBuilder::with_nodes(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && r.gen_bool(p) {
                let w = 1.0 - r.gen::<f64>();
                b.add_edge(NodeId::from_index(i), NodeId::from_index(j), w)
                    .unwrap();
            }
        }
    }
    if labeled {
        b.declare_label(Label::from("0"));
        b.declare_label(Label::from("1"));
        for i in 0..n {
            let l = if r.gen_bool(unlabeled) {
                None
            } else if r.gen_bool(0.5) {
                Some(Label::from("1"))
            } else {
                Some(Label::from("0"))
            };
            b.set_label(NodeId::from_index(i), l).unwrap();
        }
    }
    b.build().unwrap()
}

/// Neighbor sets as plain index sets, symmetrized for the undirected view.
pub fn successor_sets(topo: &Adjacency, dir: DirectionMode) -> Vec<BTreeSet<usize>> {
    let n = topo.node_count();
    let mut out = vec![BTreeSet::new(); n];
    for (u, v, _) in topo.edges() {
        out[u.index()].insert(v.index());
        if dir == DirectionMode::Undirected {
            out[v.index()].insert(u.index());
        }
    }
    out
}

fn bfs(succ: &[BTreeSet<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; succ.len()];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &succ[u] {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// Betweenness by listing every shortest path explicitly: for each ordered
/// pair (s, t) each listed path credits its interior nodes with
/// 1 / (number of shortest s-t paths). Undirected totals are halved.
pub fn oracle_betweenness(topo: &Adjacency, dir: DirectionMode) -> Vec<f64> {
    let n = topo.node_count();
    let succ = successor_sets(topo, dir);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        let dist = bfs(&succ, s);
        for t in 0..n {
            if t == s || dist[t].is_none() {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for &v in &succ[last] {
                    if dist[v] == Some(path.len()) && !path.contains(&v) {
                        let mut next = path.clone();
                        next.push(v);
                        stack.push(next);
                    }
                }
            }
            let share = 1.0 / paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    bc[v] += share;
                }
            }
        }
    }
    if dir == DirectionMode::Undirected {
        bc.iter_mut().for_each(|x| *x /= 2.0);
    }
    bc
}

pub fn oracle_degree(topo: &Adjacency, dir: DirectionMode) -> Vec<f64> {
    let n = topo.node_count();
    let succ = successor_sets(topo, dir);
    (0..n)
        .map(|v| {
            if n < 2 {
                return 0.0;
            }
            // the directed view counts out-neighbors only
            let k = succ[v].len();
            k as f64 / (n - 1) as f64
        })
        .collect()
}

/// Clustering by testing every ordered neighbor pair for a tie. The directed
/// view uses out-neighborhoods.
pub fn oracle_clustering(topo: &Adjacency, dir: DirectionMode) -> Vec<f64> {
    let n = topo.node_count();
    let succ = successor_sets(topo, dir);
    (0..n)
        .map(|v| {
            let nb: Vec<usize> = succ[v].iter().copied().collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut ties = 0usize;
            for &a in &nb {
                for &b in &nb {
                    if a != b && succ[a].contains(&b) {
                        ties += 1;
                    }
                }
            }
            match dir {
                DirectionMode::Directed => ties as f64 / (k * (k - 1)) as f64,
                // each undirected tie was seen from both ends
                DirectionMode::Undirected => (ties / 2) as f64 / (k * (k - 1) / 2) as f64,
            }
        })
        .collect()
}

/// Subgraph induced by `members` (in the given order), built by filtering
/// the edge list.
pub fn naive_induced(g: &LabeledGraph, members: &[NodeId]) -> Adjacency {
    let pos = |v: NodeId| members.iter().position(|&m| m == v);
    let edges: Vec<(usize, usize, f64)> = g
        .topology()
        .edges()
        .filter_map(|(u, v, w)| Some((pos(u)?, pos(v)?, w)))
        .collect();
    Adjacency::new(members.len(), edges).unwrap()
}

pub fn members_with_label(g: &LabeledGraph, l: &str) -> Vec<NodeId> {
    g.nodes()
        .filter(|&v| g.label(v).is_some_and(|x| x.as_str() == l))
        .collect()
}

/// Neighbor-label share computed from the edge list.
pub fn oracle_ncn(g: &LabeledGraph, l: &str, v: NodeId, dir: DirectionMode) -> Option<f64> {
    let nb: Vec<usize> = successor_sets(g.topology(), dir)[v.index()]
        .iter()
        .copied()
        .collect();
    let labeled: Vec<usize> = nb
        .into_iter()
        .filter(|&u| g.label(NodeId::from_index(u)).is_some())
        .collect();
    if labeled.is_empty() {
        return None;
    }
    let hits = labeled
        .iter()
        .filter(|&&u| g.label(NodeId::from_index(u)).unwrap().as_str() == l)
        .count();
    Some(hits as f64 / labeled.len() as f64)
}

/// Random dataset with `cols` columns (numeric or nominal), some missing
/// cells, few distinct values so that ties are common.
pub fn random_dataset(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Dataset {
    let kinds: Vec<FeatureKind> = (0..cols)
        .map(|_| {
            if r.gen_bool(0.3) {
                FeatureKind::Nominal(r.gen_range(2..5))
            } else {
                FeatureKind::Numeric
            }
        })
        .collect();
    let mut data = Vec::with_capacity(rows);
    let mut classes = Vec::with_capacity(rows);
    for _ in 0..rows {
        let row: Vec<Option<f64>> = kinds
            .iter()
            .map(|k| {
                if r.gen_bool(0.1) {
                    return None;
                }
                Some(match k {
                    FeatureKind::Numeric => f64::from(r.gen_range(0..8)) * 0.5,
                    FeatureKind::Nominal(c) => r.gen_range(0..*c) as f64,
                })
            })
            .collect();
        // class depends weakly on the first column
        let signal = row[0].is_some_and(|x| x > 1.0);
        let c = if r.gen_bool(0.75) { signal } else { !signal };
        classes.push(u8::from(c));
        data.push(row);
    }
    Dataset::from_parts(kinds, data, classes).unwrap()
}

/// Every stump of the family: constant stumps, numeric thresholds halfway
/// between consecutive distinct present values, one-value-vs-rest nominal
/// splits, each with missing values sent either way and every leaf labeling.
pub fn all_stumps(data: &Dataset, rows: &[usize]) -> Vec<DecisionStump> {
    let mut out = vec![DecisionStump::constant(0), DecisionStump::constant(1)];
    for (column, kind) in data.kinds.iter().enumerate() {
        let present: BTreeSet<u64> = rows
            .iter()
            .filter_map(|&r| data.rows[r][column])
            .map(f64::to_bits)
            .collect();
        let mut values: Vec<f64> = present.into_iter().map(f64::from_bits).collect();
        values.sort_by(f64::total_cmp);
        let splits: Vec<Split> = match kind {
            FeatureKind::Numeric => values
                .windows(2)
                .map(|w| Split::Threshold((w[0] + w[1]) / 2.0))
                .collect(),
            FeatureKind::Nominal(_) => values.iter().map(|&v| Split::Equals(v as u32)).collect(),
        };
        for split in splits {
            for missing in [Branch::Left, Branch::Right] {
                for (left, right) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    out.push(DecisionStump {
                        column,
                        split,
                        left,
                        right,
                        missing,
                    });
                }
            }
        }
    }
    out
}

/// Weighted error summed in row order.
pub fn oracle_error(stump: &DecisionStump, data: &Dataset, rows: &[usize], weights: &[f64]) -> f64 {
    let mut e = 0.0;
    for &r in rows {
        let pred = match stump.split {
            Split::Constant => stump.left,
            _ => {
                let left = match (data.rows[r][stump.column], stump.split) {
                    (None, _) => stump.missing == Branch::Left,
                    (Some(x), Split::Threshold(t)) => x <= t,
                    (Some(x), Split::Equals(c)) => x == f64::from(c),
                    (Some(_), Split::Constant) => unreachable!(),
                };
                if left {
                    stump.left
                } else {
                    stump.right
                }
            }
        };
        if pred != data.classes[r] {
            e += weights[r];
        }
    }
    e
}

pub fn oracle_best_error(data: &Dataset, rows: &[usize], weights: &[f64]) -> f64 {
    all_stumps(data, rows)
        .iter()
        .map(|s| oracle_error(s, data, rows, weights))
        .fold(f64::INFINITY, f64::min)
}

/// Random positive weights over all rows of `data`, normalized.
pub fn random_weights(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}
