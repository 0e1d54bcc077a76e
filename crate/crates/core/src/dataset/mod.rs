//! Feature matrices for the four feature sets and their export formats.
//!
//! | set | columns |
//! |-----|---------|
//! | 1 | raw node attributes (age, gender, country, phone provider for profile data) |
//! | 2 | betweenness, degree, clustering |
//! | 3 | ncs_0, ncs_1, ncn_0, ncn_1, betweenness_0, betweenness_1, degree_0, degree_1, clustering_0, clustering_1 |
//! | 4 | sets 1, 2 and 3 in that order |
//!
//! Every matrix ends with the nominal target column `class` over `{0,1}`.
//! Rows are ordered by ascending external node id.

pub mod arff;
pub mod delimited;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{AttrKind, AttrValue, DirectionMode, Label, LabeledGraph, NodeId};
use crate::label_features::{lift, ncn_vector, ncs_vector, LiftMode};
use crate::measures::Measure;

pub use arff::{read_arff, write_arff, ArffDocument};
pub use delimited::{read_csv, write_csv};

pub const TARGET_COLUMN: &str = "class";
pub const NEGATIVE: &str = "0";
pub const POSITIVE: &str = "1";

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnKind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn numeric(name: impl Into<String>) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Numeric,
        }
    }

    pub fn nominal(name: impl Into<String>, domain: Vec<String>) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Nominal(domain),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Nom(String),
    Missing,
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub id: String,
    pub values: Vec<Value>,
}

/// Named, typed columns plus one row per node; the target is the last column.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub target: String,
    /// Settings that produced the matrix, exported as header comments.
    pub provenance: Vec<(String, String)>,
}

impl FeatureMatrix {
    pub fn feature_columns(&self) -> &[Column] {
        &self.columns[..self.columns.len().saturating_sub(1)]
    }

    pub fn target_index(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Checks arity, target shape and nominal domains.
    pub fn validate(&self) -> Result<()> {
        let Some(last) = self.columns.last() else {
            return Err(Error::input("feature matrix has no columns"));
        };
        if last.name != self.target {
            return Err(Error::input("target must be the last column"));
        }
        if last.kind != target_column().kind {
            return Err(Error::input("target column must be nominal {0,1}"));
        }
        for row in &self.rows {
            if row.values.len() != self.columns.len() {
                return Err(Error::input(format!(
                    "row '{}' has {} values for {} columns",
                    row.id,
                    row.values.len(),
                    self.columns.len()
                )));
            }
            for (col, value) in self.columns.iter().zip(&row.values) {
                let ok = match (&col.kind, value) {
                    (_, Value::Missing) => true,
                    (ColumnKind::Numeric, Value::Num(x)) => x.is_finite(),
                    (ColumnKind::Nominal(domain), Value::Nom(s)) => domain.contains(s),
                    _ => false,
                };
                if !ok {
                    return Err(Error::input(format!(
                        "row '{}': value {value:?} does not fit column '{}'",
                        row.id, col.name
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn target_column() -> Column {
    Column::nominal(
        TARGET_COLUMN,
        vec![NEGATIVE.to_string(), POSITIVE.to_string()],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureSet {
    Raw = 1,
    LabelIndependent = 2,
    LabelDependent = 3,
    All = 4,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 4] = [
        FeatureSet::Raw,
        FeatureSet::LabelIndependent,
        FeatureSet::LabelDependent,
        FeatureSet::All,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self> {
        FeatureSet::ALL
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::input(format!("feature set must be 1-4, got {id}")))
    }

    pub fn uses_labels(self) -> bool {
        matches!(self, FeatureSet::LabelDependent | FeatureSet::All)
    }

    fn parts(self) -> &'static [FeatureSet] {
        match self {
            FeatureSet::All => &[
                FeatureSet::Raw,
                FeatureSet::LabelIndependent,
                FeatureSet::LabelDependent,
            ],
            FeatureSet::Raw => &[FeatureSet::Raw],
            FeatureSet::LabelIndependent => &[FeatureSet::LabelIndependent],
            FeatureSet::LabelDependent => &[FeatureSet::LabelDependent],
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = s
            .trim()
            .parse::<u8>()
            .map_err(|_| Error::input(format!("feature set must be 1-4, got '{s}'")))?;
        FeatureSet::from_id(id)
    }
}

/// What to emit when a label-dependent ratio has a zero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MissingPolicy {
    #[default]
    Missing,
    Zero,
}

impl MissingPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            MissingPolicy::Missing => "missing",
            MissingPolicy::Zero => "zero",
        }
    }
}

impl fmt::Display for MissingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MissingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "missing" => Ok(MissingPolicy::Missing),
            "zero" => Ok(MissingPolicy::Zero),
            other => Err(Error::input(format!(
                "unknown missing-value policy '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FeatureConfig {
    pub direction: DirectionMode,
    pub lifting: LiftMode,
    pub missing: MissingPolicy,
}

impl FeatureConfig {
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let ncs_rule = match self.direction {
            DirectionMode::Directed => "out-edge",
            DirectionMode::Undirected => "out-edge, else in-edge",
        };
        vec![
            ("direction".into(), self.direction.to_string()),
            ("lifting".into(), self.lifting.to_string()),
            ("missing".into(), self.missing.to_string()),
            ("ncs_weight".into(), ncs_rule.into()),
        ]
    }
}

/// Column names of `set`; set 1 takes its names from the graph schema.
pub fn column_names(g: &LabeledGraph, set: FeatureSet) -> Vec<String> {
    let mut names = Vec::new();
    for part in set.parts() {
        match part {
            FeatureSet::Raw => names.extend(g.attribute_schema().iter().map(|(n, _)| n.clone())),
            FeatureSet::LabelIndependent => {
                names.extend(Measure::ALL.iter().map(|m| m.to_string()))
            }
            FeatureSet::LabelDependent => {
                for prefix in ["ncs", "ncn", "betweenness", "degree", "clustering"] {
                    for l in [NEGATIVE, POSITIVE] {
                        names.push(format!("{prefix}_{l}"));
                    }
                }
            }
            FeatureSet::All => unreachable!(),
        }
    }
    names
}

/// Feature matrix for `set` over every node of `g`, targets taken from the
/// labels of `g`.
pub fn build_features(
    g: &LabeledGraph,
    set: FeatureSet,
    config: &FeatureConfig,
) -> Result<FeatureMatrix> {
    build_features_with_truth(g, g, set, config)
}

/// Like [`build_features`], but features come from `view` (whose labels may
/// be partially masked) while targets come from `truth`.
pub fn build_features_with_truth(
    view: &LabeledGraph,
    truth: &LabeledGraph,
    set: FeatureSet,
    config: &FeatureConfig,
) -> Result<FeatureMatrix> {
    if view.node_count() != truth.node_count() {
        return Err(Error::input(
            "feature graph and target graph differ in size",
        ));
    }
    if set.uses_labels() {
        check_binary_labels(truth)?;
        let expected: BTreeSet<Label> = [NEGATIVE, POSITIVE].into_iter().map(Label::from).collect();
        if view.label_set() != &expected {
            return Err(Error::input(
                "label-dependent features need the label set {0,1}",
            ));
        }
    }

    let mut columns: Vec<Column> = Vec::new();
    // one entry per column, indexed by node id
    let mut cells: Vec<Vec<Value>> = Vec::new();
    for part in set.parts() {
        match part {
            FeatureSet::Raw => raw_columns(view, &mut columns, &mut cells),
            FeatureSet::LabelIndependent => {
                for m in Measure::ALL {
                    let values = m.compute(view.topology(), config.direction).values;
                    columns.push(Column::numeric(m.as_str()));
                    cells.push(values.into_iter().map(Value::Num).collect());
                }
            }
            FeatureSet::LabelDependent => {
                label_dependent_columns(view, config, &mut columns, &mut cells)?
            }
            FeatureSet::All => unreachable!(),
        }
    }
    columns.push(target_column());
    cells.push(
        truth
            .nodes()
            .map(|v| match truth.label(v) {
                Some(l) => Value::Nom(l.to_string()),
                None => Value::Missing,
            })
            .collect(),
    );

    let mut order: Vec<NodeId> = view.nodes().collect();
    order.sort_by(|&a, &b| view.name(a).cmp(view.name(b)));
    let rows = order
        .into_iter()
        .map(|v| Row {
            id: view.name(v).to_string(),
            values: cells.iter().map(|c| c[v.index()].clone()).collect(),
        })
        .collect();

    let mut provenance = vec![("feature_set".to_string(), set.to_string())];
    provenance.extend(config.snapshot());
    let m = FeatureMatrix {
        columns,
        rows,
        target: TARGET_COLUMN.to_string(),
        provenance,
    };
    debug_assert!(m.validate().is_ok());
    Ok(m)
}

fn check_binary_labels(g: &LabeledGraph) -> Result<()> {
    let (known, _) = g.known_unknown_partition();
    if known.is_empty() {
        return Err(Error::input(
            "label-dependent feature sets need a labeled graph",
        ));
    }
    if let Some(bad) = g
        .label_set()
        .iter()
        .find(|l| l.as_str() != NEGATIVE && l.as_str() != POSITIVE)
    {
        return Err(Error::input(format!("label '{bad}' is not binary (0/1)")));
    }
    Ok(())
}

fn raw_columns(g: &LabeledGraph, columns: &mut Vec<Column>, cells: &mut Vec<Vec<Value>>) {
    for (j, (name, kind)) in g.attribute_schema().iter().enumerate() {
        let values: Vec<Value> = g
            .nodes()
            .map(|v| match &g.attributes(v)[j] {
                AttrValue::Numeric(x) => Value::Num(*x),
                AttrValue::Nominal(s) => Value::Nom(s.clone()),
                AttrValue::Missing => Value::Missing,
            })
            .collect();
        let column = match kind {
            AttrKind::Numeric => Column::numeric(name.clone()),
            AttrKind::Nominal => {
                let domain: BTreeSet<String> = values
                    .iter()
                    .filter_map(|v| match v {
                        Value::Nom(s) => Some(s.clone()),
                        _ => None,
                    })
                    .collect();
                Column::nominal(name.clone(), domain.into_iter().collect())
            }
        };
        columns.push(column);
        cells.push(values);
    }
}

fn label_dependent_columns(
    g: &LabeledGraph,
    config: &FeatureConfig,
    columns: &mut Vec<Column>,
    cells: &mut Vec<Vec<Value>>,
) -> Result<()> {
    let labels = [Label::from(NEGATIVE), Label::from(POSITIVE)];
    let dir = config.direction;
    let fill = |values: Vec<Option<f64>>| -> Vec<Value> {
        values
            .into_iter()
            .map(|x| match (x, config.missing) {
                (Some(x), _) => Value::Num(x),
                (None, MissingPolicy::Zero) => Value::Num(0.0),
                (None, MissingPolicy::Missing) => Value::Missing,
            })
            .collect()
    };
    for l in &labels {
        columns.push(Column::numeric(format!("ncs_{l}")));
        cells.push(fill(ncs_vector(g, l, dir)?.values));
    }
    for l in &labels {
        columns.push(Column::numeric(format!("ncn_{l}")));
        cells.push(fill(ncn_vector(g, l, dir)?.values));
    }
    for m in Measure::ALL {
        for l in &labels {
            columns.push(Column::numeric(format!("{m}_{l}")));
            cells.push(fill(lift(&m, g, l, dir, config.lifting)?.values));
        }
    }
    Ok(())
}

/// Copy of `g` with the labels of `hide` removed.
pub fn mask_labels(g: &LabeledGraph, hide: &[NodeId]) -> Result<LabeledGraph> {
    let mut labels = g.labels().to_vec();
    for &v in hide {
        if !g.contains(v) {
            return Err(Error::UnknownNode(v.index()));
        }
        labels[v.index()] = None;
    }
    Ok(g.with_labels(labels))
}

/// Seeded choice of `floor(fraction * n)` nodes to hide.
pub fn sample_hidden(g: &LabeledGraph, fraction: f64, seed: u64) -> Result<Vec<NodeId>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::input(format!(
            "hidden fraction {fraction} outside [0, 1]"
        )));
    }
    let count = (fraction * g.node_count() as f64).floor() as usize;
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    nodes.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    nodes.truncate(count);
    nodes.sort_unstable();
    Ok(nodes)
}
