//! Label-dependent node features.
//!
//! - [`ncn`]: share of a node's labeled neighbors that carry a given label.
//! - [`ncs`]: the same share weighted by tie strength.
//! - [`lift`]: any [`StructuralMeasure`] evaluated on the label-induced
//!   subgraph, producing one feature per label.
//!
//! Zero denominators yield `None`; the dataset layer decides whether that
//! becomes a missing marker or 0.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectionMode, Label, LabeledGraph, NodeId};
use crate::measures::{Measure, StructuralMeasure};
use crate::select::{select, select_augmented};

/// How lifted measures treat nodes outside the label class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LiftMode {
    /// Evaluate on the class subgraph plus the node itself.
    #[default]
    Augmented,
    /// Evaluate on the class subgraph only; nodes outside it get `None`.
    Strict,
}

impl LiftMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LiftMode::Augmented => "augmented",
            LiftMode::Strict => "strict",
        }
    }
}

impl fmt::Display for LiftMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LiftMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "augmented" => Ok(LiftMode::Augmented),
            "strict" => Ok(LiftMode::Strict),
            other => Err(Error::input(format!("unknown lifting mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelFeatureVector {
    pub measure: String,
    pub label: Label,
    pub mode: LiftMode,
    /// Indexed by base node id.
    pub values: Vec<Option<f64>>,
}

impl LabelFeatureVector {
    pub fn get(&self, v: NodeId) -> Option<f64> {
        self.values[v.index()]
    }
}

fn check_node(g: &LabeledGraph, v: NodeId) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::UnknownNode(v.index()))
    }
}

/// Normalized number of connections to `l`-labeled neighbors.
pub fn ncn(g: &LabeledGraph, l: &Label, v: NodeId, dir: DirectionMode) -> Result<Option<f64>> {
    g.check_label(l)?;
    check_node(g, v)?;
    Ok(ncn_unchecked(g, l, v, dir))
}

fn ncn_unchecked(g: &LabeledGraph, l: &Label, v: NodeId, dir: DirectionMode) -> Option<f64> {
    let (mut hits, mut labeled) = (0usize, 0usize);
    for u in g.topology().neighbors(v, dir) {
        match g.label(u) {
            Some(lu) if lu == l => {
                hits += 1;
                labeled += 1;
            }
            Some(_) => labeled += 1,
            None => {}
        }
    }
    (labeled > 0).then(|| hits as f64 / labeled as f64)
}

/// Normalized sum of connection strengths to `l`-labeled neighbors.
///
/// The strength of the tie to neighbor `u` is `w(v, u)`; in the undirected
/// view `w(u, v)` stands in when only the in-edge exists.
pub fn ncs(g: &LabeledGraph, l: &Label, v: NodeId, dir: DirectionMode) -> Result<Option<f64>> {
    g.check_label(l)?;
    check_node(g, v)?;
    Ok(ncs_unchecked(g, l, v, dir))
}

fn ncs_unchecked(g: &LabeledGraph, l: &Label, v: NodeId, dir: DirectionMode) -> Option<f64> {
    let topo = g.topology();
    let (mut hits, mut labeled) = (0.0, 0.0);
    for u in topo.neighbors(v, dir) {
        let Some(lu) = g.label(u) else { continue };
        let w = topo
            .tie_weight(v, u, dir)
            .expect("neighbor implies an edge");
        labeled += w;
        if lu == l {
            hits += w;
        }
    }
    (labeled > 0.0).then(|| hits / labeled)
}

pub fn ncn_vector(g: &LabeledGraph, l: &Label, dir: DirectionMode) -> Result<LabelFeatureVector> {
    g.check_label(l)?;
    Ok(LabelFeatureVector {
        measure: "ncn".into(),
        label: l.clone(),
        mode: LiftMode::Augmented,
        values: g.nodes().map(|v| ncn_unchecked(g, l, v, dir)).collect(),
    })
}

pub fn ncs_vector(g: &LabeledGraph, l: &Label, dir: DirectionMode) -> Result<LabelFeatureVector> {
    g.check_label(l)?;
    Ok(LabelFeatureVector {
        measure: "ncs".into(),
        label: l.clone(),
        mode: LiftMode::Augmented,
        values: g.nodes().map(|v| ncs_unchecked(g, l, v, dir)).collect(),
    })
}

/// Label-dependent version of `measure`: its value at each node on the
/// subgraph induced by label `l`.
pub fn lift<M: StructuralMeasure + ?Sized>(
    measure: &M,
    g: &LabeledGraph,
    l: &Label,
    dir: DirectionMode,
    mode: LiftMode,
) -> Result<LabelFeatureVector> {
    let class = select(g, l)?;
    let inside = measure.evaluate(class.topology(), dir);
    let values = g
        .nodes()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| match (class.local_id(v), mode) {
            (Some(local), _) => Ok(Some(inside[local.index()])),
            (None, LiftMode::Strict) => Ok(None),
            (None, LiftMode::Augmented) => {
                let aug = select_augmented(g, l, v)?;
                let local = aug.local_id(v).expect("focus is a member");
                Ok(Some(measure.evaluate_at(aug.topology(), dir, local)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabelFeatureVector {
        measure: measure.name().to_string(),
        label: l.clone(),
        mode,
        values,
    })
}

/// Label-dependent clustering coefficient at `v`.
pub fn cc_label(
    g: &LabeledGraph,
    l: &Label,
    v: NodeId,
    dir: DirectionMode,
    mode: LiftMode,
) -> Result<Option<f64>> {
    check_node(g, v)?;
    g.check_label(l)?;
    let m = Measure::Clustering;
    let class = select(g, l)?;
    if let Some(local) = class.local_id(v) {
        return Ok(Some(m.evaluate(class.topology(), dir)[local.index()]));
    }
    match mode {
        LiftMode::Strict => Ok(None),
        LiftMode::Augmented => {
            let aug = select_augmented(g, l, v)?;
            let local = aug.local_id(v).expect("focus is a member");
            Ok(Some(m.evaluate_at(aug.topology(), dir, local)))
        }
    }
}
