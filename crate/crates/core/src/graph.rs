//! Weighted directed graph with node attributes and partial class labels.
//!
//! A [`LabeledGraph`] bundles the topology ([`Adjacency`]), one attribute
//! vector per node, an optional label per node and the declared label set.
//! It is immutable once built; every accessor is a pure read, so the graph can
//! be shared freely across worker threads.
//!
//! Invariants enforced at construction:
//! - node ids are dense in `0..node_count()`;
//! - no self-loops, at most one edge per ordered pair;
//! - every weight is finite and non-negative;
//! - every assigned label belongs to the label set.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense node handle in `0..node_count()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Symbolic class identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(value: impl Into<String>) -> Self {
        Label(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// How adjacency is read off the directed edge set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DirectionMode {
    /// `u` is a neighbor of `v` iff the edge `v -> u` exists.
    Directed,
    /// `u` is a neighbor of `v` iff `v -> u` or `u -> v` exists.
    #[default]
    Undirected,
}

impl DirectionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DirectionMode::Directed => "directed",
            DirectionMode::Undirected => "undirected",
        }
    }
}

impl fmt::Display for DirectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DirectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(DirectionMode::Directed),
            "undirected" | "undirected-view" => Ok(DirectionMode::Undirected),
            other => Err(Error::input(format!("unknown direction mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttrKind {
    Numeric,
    Nominal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttrValue {
    Numeric(f64),
    Nominal(String),
    Missing,
}

impl AttrValue {
    pub fn is_missing(&self) -> bool {
        matches!(self, AttrValue::Missing)
    }
}

/// Bare directed topology with edge weights.
///
/// Out-edges and in-neighbors are stored sorted by node id, so neighbor
/// queries are deterministic and weight lookup is a binary search.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Adjacency {
    out: Vec<Vec<(NodeId, f64)>>,
    inc: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Adjacency {
    /// Builds a topology on `n` nodes, rejecting self-loops, duplicate edges,
    /// out-of-range endpoints and negative or non-finite weights.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        let mut inc: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::UnknownNode(u));
            }
            if v >= n {
                return Err(Error::UnknownNode(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u.to_string()));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWeight {
                    src: u.to_string(),
                    dst: v.to_string(),
                    weight: w,
                });
            }
            out[u].push((NodeId::from_index(v), w));
            inc[v].push(NodeId::from_index(u));
            edge_count += 1;
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::DuplicateEdge {
                    src: u.to_string(),
                    dst: pair[0].0.to_string(),
                });
            }
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        Ok(Adjacency {
            out,
            inc,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn out_edges(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.out[v.index()]
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.inc[v.index()]
    }

    /// Weight of `u -> v`, `None` when the edge does not exist.
    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = &self.out[u.index()];
        list.binary_search_by_key(&v, |&(t, _)| t)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.weight(u, v).is_some()
    }

    /// All edges as `(src, dst, weight)` in ascending `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(move |&(v, w)| (NodeId::from_index(u), v, w))
        })
    }

    /// Sorted neighbor set of `v`; never contains `v` itself.
    pub fn neighbors(&self, v: NodeId, dir: DirectionMode) -> Vec<NodeId> {
        let out = self.out[v.index()].iter().map(|&(t, _)| t);
        match dir {
            DirectionMode::Directed => out.collect(),
            DirectionMode::Undirected => merge_sorted(out, self.inc[v.index()].iter().copied()),
        }
    }

    /// Neighbor lists for every node, indexed by node.
    pub fn neighbor_lists(&self, dir: DirectionMode) -> Vec<Vec<NodeId>> {
        (0..self.node_count())
            .map(|i| self.neighbors(NodeId::from_index(i), dir))
            .collect()
    }

    /// Weight used for the tie between `v` and its neighbor `u`: the out-edge
    /// `v -> u`, falling back to `u -> v` in the undirected view.
    pub fn tie_weight(&self, v: NodeId, u: NodeId, dir: DirectionMode) -> Option<f64> {
        match (self.weight(v, u), dir) {
            (Some(w), _) => Some(w),
            (None, DirectionMode::Undirected) => self.weight(u, v),
            (None, DirectionMode::Directed) => None,
        }
    }
}

fn merge_sorted(a: impl Iterator<Item = NodeId>, b: impl Iterator<Item = NodeId>) -> Vec<NodeId> {
    let mut merged: Vec<NodeId> = a.chain(b).collect();
    merged.sort_unstable();
    merged.dedup();
    merged
}

/// Social network `G = (V, E, X, L, Y, W)`.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    topology: Adjacency,
    schema: Vec<(String, AttrKind)>,
    attributes: Vec<Vec<AttrValue>>,
    labels: Vec<Option<Label>>,
    label_set: BTreeSet<Label>,
}

impl LabeledGraph {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.names.len()).map(NodeId::from_index)
    }

    pub fn topology(&self) -> &Adjacency {
        &self.topology
    }

    /// External identifier of `v`.
    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.index()]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.names.len()
    }

    pub fn label(&self, v: NodeId) -> Option<&Label> {
        self.labels[v.index()].as_ref()
    }

    pub fn labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    pub fn label_set(&self) -> &BTreeSet<Label> {
        &self.label_set
    }

    pub fn attribute_schema(&self) -> &[(String, AttrKind)] {
        &self.schema
    }

    pub fn attributes(&self, v: NodeId) -> &[AttrValue] {
        &self.attributes[v.index()]
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.index()))
        }
    }

    pub(crate) fn check_label(&self, l: &Label) -> Result<()> {
        if self.label_set.contains(l) {
            Ok(())
        } else {
            Err(Error::UnknownLabel(l.to_string()))
        }
    }

    /// `n(G, v)`.
    pub fn neighbors(&self, v: NodeId, dir: DirectionMode) -> Result<Vec<NodeId>> {
        self.check(v)?;
        Ok(self.topology.neighbors(v, dir))
    }

    /// `n_L(G, v)`: neighbors carrying any label.
    pub fn labeled_neighbors(&self, v: NodeId, dir: DirectionMode) -> Result<Vec<NodeId>> {
        let mut ns = self.neighbors(v, dir)?;
        ns.retain(|&u| self.labels[u.index()].is_some());
        Ok(ns)
    }

    /// `(V^K, V^U)`: labeled and unlabeled nodes.
    pub fn known_unknown_partition(&self) -> (Vec<NodeId>, Vec<NodeId>) {
        self.nodes()
            .partition(|&v| self.labels[v.index()].is_some())
    }

    /// Nodes carrying exactly `l`.
    pub fn nodes_with_label<'a>(&'a self, l: &'a Label) -> impl Iterator<Item = NodeId> + 'a {
        self.nodes()
            .filter(move |&v| self.labels[v.index()].as_ref() == Some(l))
    }

    /// Copy with the label assignment replaced; the label set is kept.
    pub(crate) fn with_labels(&self, labels: Vec<Option<Label>>) -> LabeledGraph {
        debug_assert_eq!(labels.len(), self.node_count());
        LabeledGraph {
            labels,
            ..self.clone()
        }
    }

    /// Builder seeded with this graph's content.
    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            names: self.names.clone(),
            index: self.index.clone(),
            edges: self
                .topology
                .edges()
                .map(|(u, v, w)| (u.0, v.0, w))
                .collect(),
            schema: self.schema.clone(),
            attributes: self.attributes.iter().cloned().map(Some).collect(),
            labels: self.labels.clone(),
            label_set: self.label_set.clone(),
        }
    }
}

/// Incremental construction of a [`LabeledGraph`]; validation happens in
/// [`GraphBuilder::build`] and in the edge insertion methods.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(u32, u32, f64)>,
    schema: Vec<(String, AttrKind)>,
    attributes: Vec<Option<Vec<AttrValue>>>,
    labels: Vec<Option<Label>>,
    label_set: BTreeSet<Label>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder with `n` nodes named `"0"`, `"1"`, ...
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.add_node(&i.to_string());
        }
        b
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.index()]
    }

    /// Interns `name`, returning the existing id when already present.
    pub fn add_node(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NodeId::from_index(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.attributes.push(None);
        self.labels.push(None);
        id
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.index()))
        }
    }

    pub fn add_edge(&mut self, src: NodeId, dst: NodeId, weight: f64) -> Result<()> {
        self.check(src)?;
        self.check(dst)?;
        if src == dst {
            return Err(Error::SelfLoop(self.names[src.index()].clone()));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidWeight {
                src: self.names[src.index()].clone(),
                dst: self.names[dst.index()].clone(),
                weight,
            });
        }
        self.edges.push((src.0, dst.0, weight));
        Ok(())
    }

    /// Adds `src -> dst`, interning both endpoints.
    pub fn add_named_edge(&mut self, src: &str, dst: &str, weight: f64) -> Result<()> {
        let s = self.add_node(src);
        let d = self.add_node(dst);
        self.add_edge(s, d, weight)
    }

    /// Replaces the attribute schema, clearing attribute values set so far.
    pub fn set_schema(&mut self, schema: Vec<(String, AttrKind)>) {
        self.schema = schema;
        self.attributes.iter_mut().for_each(|a| *a = None);
    }

    pub fn set_attributes(&mut self, v: NodeId, values: Vec<AttrValue>) -> Result<()> {
        self.check(v)?;
        if values.len() != self.schema.len() {
            return Err(Error::input(format!(
                "node '{}': {} attribute values for a schema of {}",
                self.names[v.index()],
                values.len(),
                self.schema.len()
            )));
        }
        for ((name, kind), value) in self.schema.iter().zip(&values) {
            let ok = matches!(
                (kind, value),
                (_, AttrValue::Missing)
                    | (AttrKind::Numeric, AttrValue::Numeric(_))
                    | (AttrKind::Nominal, AttrValue::Nominal(_))
            );
            if !ok {
                return Err(Error::input(format!(
                    "node '{}': attribute '{name}' has the wrong kind",
                    self.names[v.index()]
                )));
            }
        }
        self.attributes[v.index()] = Some(values);
        Ok(())
    }

    pub fn declare_label(&mut self, l: Label) {
        self.label_set.insert(l);
    }

    /// Assigns (or clears) the label of `v`; the label joins the label set.
    pub fn set_label(&mut self, v: NodeId, label: Option<Label>) -> Result<()> {
        self.check(v)?;
        if let Some(l) = &label {
            self.label_set.insert(l.clone());
        }
        self.labels[v.index()] = label;
        Ok(())
    }

    pub fn build(self) -> Result<LabeledGraph> {
        let n = self.names.len();
        let mut pairs: Vec<(u32, u32)> = self.edges.iter().map(|&(u, v, _)| (u, v)).collect();
        pairs.sort_unstable();
        if let Some(p) = pairs.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateEdge {
                src: self.names[p[0].0 as usize].clone(),
                dst: self.names[p[0].1 as usize].clone(),
            });
        }
        let topology = Adjacency::new(
            n,
            self.edges
                .iter()
                .map(|&(u, v, w)| (u as usize, v as usize, w)),
        )?;
        let width = self.schema.len();
        let attributes = self
            .attributes
            .into_iter()
            .map(|a| a.unwrap_or_else(|| vec![AttrValue::Missing; width]))
            .collect();
        Ok(LabeledGraph {
            names: self.names,
            index: self.index,
            topology,
            schema: self.schema,
            attributes,
            labels: self.labels,
            label_set: self.label_set,
        })
    }
}
