//! Stratified k-fold evaluation of a feature set.
//!
//! Two protocols:
//! - transductive: label-dependent features see every known label, test
//!   folds included;
//! - fold-masked: for each fold the test nodes' labels are hidden before the
//!   label-dependent features are computed.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{
    build_features_with_truth, mask_labels, sample_hidden, FeatureConfig, FeatureSet,
};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, NodeId};

use super::boost::{train_adaboost, BoostConfig, Dataset};
use super::metrics::{Confusion, FoldMetrics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MaskingPolicy {
    #[default]
    Transductive,
    FoldMasked,
}

impl MaskingPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            MaskingPolicy::Transductive => "transductive",
            MaskingPolicy::FoldMasked => "fold-masked",
        }
    }
}

impl fmt::Display for MaskingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MaskingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transductive" => Ok(MaskingPolicy::Transductive),
            "fold-masked" | "masked" => Ok(MaskingPolicy::FoldMasked),
            other => Err(Error::input(format!("unknown masking policy '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    pub features: FeatureConfig,
    pub folds: usize,
    pub boost: BoostConfig,
    pub seed: u64,
    pub masking: MaskingPolicy,
    /// Fraction of nodes whose labels are hidden from feature extraction for
    /// the whole run (they still take part in cross-validation).
    pub hidden_fraction: f64,
    pub macro_average: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            features: FeatureConfig::default(),
            folds: 10,
            boost: BoostConfig::default(),
            seed: 42,
            masking: MaskingPolicy::Transductive,
            hidden_fraction: 0.0,
            macro_average: false,
        }
    }
}

impl EvalConfig {
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let mut s = self.features.snapshot();
        s.extend([
            ("masking".to_string(), self.masking.to_string()),
            ("folds".to_string(), self.folds.to_string()),
            ("iterations".to_string(), self.boost.iterations.to_string()),
            (
                "weight_threshold".to_string(),
                self.boost.weight_threshold.to_string(),
            ),
            (
                "hidden_fraction".to_string(),
                self.hidden_fraction.to_string(),
            ),
            ("macro_average".to_string(), self.macro_average.to_string()),
            ("seed".to_string(), self.seed.to_string()),
        ]);
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub feature_set: FeatureSet,
    pub masking: MaskingPolicy,
    pub per_fold: Vec<FoldMetrics>,
    pub mean: FoldMetrics,
    pub seed: u64,
    pub config: Vec<(String, String)>,
    /// Set when a class is absent from the labeled nodes.
    pub degenerate: bool,
    pub rows: usize,
}

/// Fold index per row: seeded shuffle, then round-robin within each class.
pub fn stratified_folds(classes: &[u8], folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignment = vec![0; classes.len()];
    let mut next = 0;
    for class in [0u8, 1] {
        for &r in order.iter().filter(|&&r| classes[r] == class) {
            assignment[r] = next % folds;
            next += 1;
        }
    }
    assignment
}

pub fn cross_validate(
    g: &LabeledGraph,
    set: FeatureSet,
    config: &EvalConfig,
) -> Result<EvalReport> {
    if config.folds < 2 {
        return Err(Error::input(format!(
            "need at least 2 folds, got {}",
            config.folds
        )));
    }
    let hidden = sample_hidden(g, config.hidden_fraction, config.seed)?;
    let view = mask_labels(g, &hidden)?;
    let full = build_features_with_truth(&view, g, set, &config.features)?;
    let data = Dataset::from_matrix(&full)?;
    if data.len() < config.folds {
        return Err(Error::input(format!(
            "{} labeled nodes cannot fill {} folds",
            data.len(),
            config.folds
        )));
    }
    let degenerate = !(data.classes.contains(&0) && data.classes.contains(&1));
    let assignment = stratified_folds(&data.classes, config.folds, config.seed);
    let recompute = config.masking == MaskingPolicy::FoldMasked && set.uses_labels();

    let per_fold = (0..config.folds)
        .into_par_iter()
        .map(|fold| {
            let fold_data;
            let data = if recompute {
                let test_nodes: Vec<NodeId> = (0..data.len())
                    .filter(|&r| assignment[r] == fold)
                    .map(|r| {
                        g.node_by_name(&data.ids[r])
                            .expect("row ids are node names")
                    })
                    .collect();
                let masked = mask_labels(&view, &test_nodes)?;
                let m = build_features_with_truth(&masked, g, set, &config.features)?;
                fold_data = Dataset::from_matrix(&m)?;
                debug_assert_eq!(fold_data.ids, data.ids);
                &fold_data
            } else {
                &data
            };
            let (train, test): (Vec<usize>, Vec<usize>) =
                (0..data.len()).partition(|&r| assignment[r] != fold);
            let model = train_adaboost(data, &train, &config.boost)?;
            let truth: Vec<u8> = test.iter().map(|&r| data.classes[r]).collect();
            let predicted: Vec<u8> = test
                .iter()
                .map(|&r| model.predict_encoded(&data.rows[r]))
                .collect();
            Ok(Confusion::from_predictions(&truth, &predicted).metrics(config.macro_average))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EvalReport {
        feature_set: set,
        masking: config.masking,
        mean: FoldMetrics::mean(&per_fold),
        per_fold,
        seed: config.seed,
        config: config.snapshot(),
        degenerate,
        rows: data.len(),
    })
}

impl EvalReport {
    fn header(&self) -> String {
        let settings: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "AdaBoostM1 (decision stumps), feature set {}, protocol {}, {} labeled rows\n{}",
            self.feature_set,
            self.masking,
            self.rows,
            settings.join(" ")
        )
    }

    pub fn to_table(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        if self.degenerate {
            out.push_str("WARNING: only one class present, metrics are degenerate\n");
        }
        let _ = writeln!(
            out,
            "{:>6}  {:>9}  {:>9}  {:>9}",
            "fold", "accuracy", "precision", "f_measure"
        );
        for (i, m) in self.per_fold.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>6}  {:>9.4}  {:>9.4}  {:>9.4}",
                i + 1,
                m.accuracy,
                m.precision,
                m.f_measure
            );
        }
        let _ = writeln!(
            out,
            "{:>6}  {:>9.4}  {:>9.4}  {:>9.4}",
            "mean", self.mean.accuracy, self.mean.precision, self.mean.f_measure
        );
        out
    }

    pub fn csv_header() -> &'static str {
        "feature_set,protocol,fold,accuracy,precision,f_measure\n"
    }

    /// One line per fold plus a `mean` line, without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.per_fold.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.feature_set,
                self.masking,
                i + 1,
                m.accuracy,
                m.precision,
                m.f_measure
            );
        }
        let _ = writeln!(
            out,
            "{},{},mean,{},{},{}",
            self.feature_set,
            self.masking,
            self.mean.accuracy,
            self.mean.precision,
            self.mean.f_measure
        );
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}{}", Self::csv_header(), self.csv_rows())
    }
}

/// Measures by feature set, one column per report.
pub fn comparison_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    let protocols: Vec<String> = reports.iter().map(|r| r.masking.to_string()).collect();
    let _ = writeln!(
        out,
        "AdaBoostM1 (decision stumps), protocol: {}",
        dedup(&protocols).join(", ")
    );
    let _ = write!(out, "{:<10}", "measure");
    for r in reports {
        let _ = write!(out, "  {:>8}", format!("set {}", r.feature_set));
    }
    out.push('\n');
    type Getter = fn(&FoldMetrics) -> f64;
    let rows: [(&str, Getter); 3] = [
        ("accuracy", |m| m.accuracy),
        ("precision", |m| m.precision),
        ("f_measure", |m| m.f_measure),
    ];
    for (name, get) in rows {
        let _ = write!(out, "{name:<10}");
        for r in reports {
            let _ = write!(out, "  {:>8.4}", get(&r.mean));
        }
        out.push('\n');
    }
    out
}

fn dedup(items: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in items {
        if !out.contains(i) {
            out.push(i.clone());
        }
    }
    out
}
