//! Label-induced sub-networks.
//!
//! [`select`] keeps the nodes carrying one label together with every edge
//! running between them. [`select_augmented`] additionally keeps a focal node
//! (and its edges into the label class) so label-dependent measures are
//! defined for nodes outside the class.
//!
//! Subgraphs are materialized with dense local ids; `members()[local]` maps a
//! local id back to the base graph.

use crate::error::{Error, Result};
use crate::graph::{Adjacency, GraphBuilder, Label, LabeledGraph, NodeId};

#[derive(Clone, Debug)]
pub struct LabelSubgraph<'g> {
    base: &'g LabeledGraph,
    label: Label,
    members: Vec<NodeId>,
    topology: Adjacency,
    focus: Option<NodeId>,
}

impl<'g> LabelSubgraph<'g> {
    pub fn base(&self) -> &'g LabeledGraph {
        self.base
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    /// Base ids of the subgraph nodes in ascending order; position = local id.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn focus(&self) -> Option<NodeId> {
        self.focus
    }

    pub fn topology(&self) -> &Adjacency {
        &self.topology
    }

    pub fn node_count(&self) -> usize {
        self.members.len()
    }

    pub fn local_id(&self, base: NodeId) -> Option<NodeId> {
        self.members
            .binary_search(&base)
            .ok()
            .map(NodeId::from_index)
    }

    pub fn base_id(&self, local: NodeId) -> NodeId {
        self.members[local.index()]
    }

    /// Standalone graph with the member names, labels and attributes.
    pub fn to_graph(&self) -> LabeledGraph {
        let mut b = GraphBuilder::new();
        b.set_schema(self.base.attribute_schema().to_vec());
        for l in self.base.label_set() {
            b.declare_label(l.clone());
        }
        for &v in &self.members {
            let id = b.add_node(self.base.name(v));
            b.set_attributes(id, self.base.attributes(v).to_vec())
                .expect("schema copied from base");
            b.set_label(id, self.base.label(v).cloned())
                .expect("node just added");
        }
        for (u, v, w) in self.topology.edges() {
            b.add_edge(u, v, w).expect("edges of a valid graph");
        }
        b.build().expect("subgraph of a valid graph")
    }
}

/// `O(G, l)`: nodes labeled `l` and the edges induced between them.
pub fn select<'g>(g: &'g LabeledGraph, l: &Label) -> Result<LabelSubgraph<'g>> {
    g.check_label(l)?;
    let members: Vec<NodeId> = g.nodes_with_label(l).collect();
    Ok(induce(g, l.clone(), members, None))
}

/// `O(G, l)` plus `focus` with its induced edges. Identical to [`select`]
/// when `focus` already carries `l`.
pub fn select_augmented<'g>(
    g: &'g LabeledGraph,
    l: &Label,
    focus: NodeId,
) -> Result<LabelSubgraph<'g>> {
    g.check_label(l)?;
    if !g.contains(focus) {
        return Err(Error::UnknownNode(focus.index()));
    }
    let mut members: Vec<NodeId> = g.nodes_with_label(l).collect();
    if let Err(pos) = members.binary_search(&focus) {
        members.insert(pos, focus);
        return Ok(induce(g, l.clone(), members, Some(focus)));
    }
    Ok(induce(g, l.clone(), members, None))
}

fn induce<'g>(
    g: &'g LabeledGraph,
    label: Label,
    members: Vec<NodeId>,
    focus: Option<NodeId>,
) -> LabelSubgraph<'g> {
    let mut local = vec![u32::MAX; g.node_count()];
    for (i, v) in members.iter().enumerate() {
        local[v.index()] = i as u32;
    }
    let topo = g.topology();
    let edges = members.iter().enumerate().flat_map(|(i, &u)| {
        let local = &local;
        topo.out_edges(u).iter().filter_map(move |&(v, w)| {
            let j = local[v.index()];
            (j != u32::MAX).then_some((i, j as usize, w))
        })
    });
    let topology = Adjacency::new(members.len(), edges).expect("induced edges are valid");
    LabelSubgraph {
        base: g,
        label,
        members,
        topology,
        focus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(n: usize, labels: &[(usize, &str)], edges: &[(usize, usize, f64)]) -> LabeledGraph {
        let mut b = GraphBuilder::with_nodes(n);
        for &(v, l) in labels {
            b.set_label(NodeId::from_index(v), Some(l.into())).unwrap();
        }
        for &(u, v, w) in edges {
            b.add_edge(NodeId::from_index(u), NodeId::from_index(v), w)
                .unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn all_nodes_labeled_is_identity() {
        let g = labeled(
            3,
            &[(0, "a"), (1, "a"), (2, "a")],
            &[(0, 1, 0.5), (1, 2, 2.0), (2, 0, 1.0)],
        );
        let s = select(&g, &"a".into()).unwrap();
        assert_eq!(s.topology(), g.topology());
    }

    #[test]
    fn empty_selection() {
        let mut b = GraphBuilder::with_nodes(3);
        b.declare_label("a".into());
        b.set_label(NodeId(0), Some("b".into())).unwrap();
        let g = b.build().unwrap();
        let s = select(&g, &"a".into()).unwrap();
        assert_eq!(s.node_count(), 0);
        assert_eq!(s.topology().edge_count(), 0);
    }

    #[test]
    fn unknown_label_and_node() {
        let g = labeled(2, &[(0, "a")], &[]);
        assert!(matches!(
            select(&g, &"z".into()),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            select_augmented(&g, &"a".into(), NodeId(9)),
            Err(Error::UnknownNode(9))
        ));
    }

    #[test]
    fn red_neighbors_of_hub() {
        // hub 0 with 4 red and 4 white neighbors, plus one red-white edge
        let mut labels = vec![(0, "white")];
        let mut edges = Vec::new();
        for v in 1..=8 {
            labels.push((v, if v <= 4 { "red" } else { "white" }));
            edges.push((0, v, 1.0));
        }
        edges.push((1, 5, 1.0));
        edges.push((1, 2, 1.0));
        let g = labeled(9, &labels, &edges);
        let red = select_augmented(&g, &"red".into(), NodeId(0)).unwrap();
        let focus = red.local_id(NodeId(0)).unwrap();
        let kept: Vec<NodeId> = red
            .topology()
            .out_edges(focus)
            .iter()
            .map(|&(v, _)| red.base_id(v))
            .collect();
        assert_eq!(kept, vec![NodeId(1), NodeId(2), NodeId(3), NodeId(4)]);
        // hub's four edges plus the red-red edge 1 -> 2
        assert_eq!(red.topology().edge_count(), 5);
    }

    #[test]
    fn augmentation_of_member_is_plain_selection() {
        let g = labeled(
            3,
            &[(0, "a"), (1, "a"), (2, "b")],
            &[(0, 1, 1.0), (1, 2, 1.0)],
        );
        let plain = select(&g, &"a".into()).unwrap();
        let aug = select_augmented(&g, &"a".into(), NodeId(1)).unwrap();
        assert_eq!(plain.members(), aug.members());
        assert_eq!(plain.topology(), aug.topology());
        assert_eq!(aug.focus(), None);
    }

    #[test]
    fn focus_without_class_edges_is_isolated() {
        let g = labeled(3, &[(0, "a"), (1, "a"), (2, "b")], &[(0, 1, 1.0)]);
        let aug = select_augmented(&g, &"a".into(), NodeId(2)).unwrap();
        let f = aug.local_id(NodeId(2)).unwrap();
        assert_eq!(aug.node_count(), 3);
        assert!(aug.topology().out_edges(f).is_empty());
        assert!(aug.topology().in_neighbors(f).is_empty());
        assert_eq!(aug.focus(), Some(NodeId(2)));
    }

    #[test]
    fn focus_linked_to_path_ends() {
        // red path 1-2-3, node 4 white, focus 0 linked to 1 and 3 (and to 4)
        let g = labeled(
            5,
            &[(1, "red"), (2, "red"), (3, "red"), (4, "white")],
            &[
                (1, 2, 1.0),
                (2, 3, 1.0),
                (0, 1, 0.3),
                (3, 0, 0.7),
                (0, 4, 1.0),
                (4, 2, 1.0),
            ],
        );
        let aug = select_augmented(&g, &"red".into(), NodeId(0)).unwrap();
        assert_eq!(aug.members(), &[NodeId(0), NodeId(1), NodeId(2), NodeId(3)]);
        let edges: Vec<(NodeId, NodeId, f64)> = aug
            .topology()
            .edges()
            .map(|(u, v, w)| (aug.base_id(u), aug.base_id(v), w))
            .collect();
        assert_eq!(
            edges,
            vec![
                (NodeId(0), NodeId(1), 0.3),
                (NodeId(1), NodeId(2), 1.0),
                (NodeId(2), NodeId(3), 1.0),
                (NodeId(3), NodeId(0), 0.7),
            ]
        );
    }

    #[test]
    fn reselection_is_idempotent() {
        let g = labeled(
            4,
            &[(0, "a"), (1, "a"), (2, "b"), (3, "a")],
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 2.0)],
        );
        let once = select(&g, &"a".into()).unwrap();
        let as_graph = once.to_graph();
        let twice = select(&as_graph, &"a".into()).unwrap();
        assert_eq!(once.topology(), twice.topology());
        assert_eq!(twice.node_count(), 3);
    }
}
