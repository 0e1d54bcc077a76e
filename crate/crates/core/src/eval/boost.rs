//! AdaBoost.M1 over decision stumps.
//!
//! Stumps split numeric columns at midpoints between consecutive distinct
//! training values (`value <= threshold` goes left) and nominal columns on
//! one value versus the rest. Missing values follow whichever branch gives
//! the lower weighted error.

use crate::dataset::{Column, ColumnKind, FeatureMatrix, Value, NEGATIVE, POSITIVE};
use crate::error::{Error, Result};
use crate::graph::Label;

/// Alpha given to a stump with zero weighted error.
pub const ALPHA_CAP: f64 = 23.025850929940457; // ln(1e10)

/// Candidates whose sweep error is within this much of the best (relative to
/// the total weight) are rescored by direct summation.
const NEAR_TIE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    Numeric,
    /// Nominal with values encoded as `0..cardinality`.
    Nominal(usize),
}

/// Numeric view of a feature matrix for the classifier. Nominal values are
/// encoded by their position in the column domain; classes are 0 and 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub schema: Vec<Column>,
    pub kinds: Vec<FeatureKind>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub classes: Vec<u8>,
    pub ids: Vec<String>,
}

impl Dataset {
    /// Rows of `m` with a known target.
    pub fn from_matrix(m: &FeatureMatrix) -> Result<Dataset> {
        m.validate()?;
        let schema = m.feature_columns().to_vec();
        let kinds = kinds_of(&schema);
        let t = m.target_index();
        let mut rows = Vec::new();
        let mut classes = Vec::new();
        let mut ids = Vec::new();
        for row in &m.rows {
            let class = match &row.values[t] {
                Value::Nom(s) if s == NEGATIVE => 0,
                Value::Nom(s) if s == POSITIVE => 1,
                _ => continue,
            };
            rows.push(encode(&schema, &row.values[..t])?);
            classes.push(class);
            ids.push(row.id.clone());
        }
        Ok(Dataset {
            schema,
            kinds,
            rows,
            classes,
            ids,
        })
    }

    /// Dataset from already-encoded values (used by tests and generators).
    pub fn from_parts(
        kinds: Vec<FeatureKind>,
        rows: Vec<Vec<Option<f64>>>,
        classes: Vec<u8>,
    ) -> Result<Dataset> {
        if rows.len() != classes.len() {
            return Err(Error::input("row and class counts differ"));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != kinds.len()) {
            return Err(Error::input(format!(
                "row of width {} for {} columns",
                r.len(),
                kinds.len()
            )));
        }
        if classes.iter().any(|&c| c > 1) {
            return Err(Error::input("classes must be 0 or 1"));
        }
        let schema = kinds
            .iter()
            .enumerate()
            .map(|(j, k)| match k {
                FeatureKind::Numeric => Column::numeric(format!("x{j}")),
                FeatureKind::Nominal(card) => {
                    Column::nominal(format!("x{j}"), (0..*card).map(|c| c.to_string()).collect())
                }
            })
            .collect();
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Ok(Dataset {
            schema,
            kinds,
            rows,
            classes,
            ids,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn kinds_of(schema: &[Column]) -> Vec<FeatureKind> {
    schema
        .iter()
        .map(|c| match &c.kind {
            ColumnKind::Numeric => FeatureKind::Numeric,
            ColumnKind::Nominal(d) => FeatureKind::Nominal(d.len()),
        })
        .collect()
}

fn encode(schema: &[Column], values: &[Value]) -> Result<Vec<Option<f64>>> {
    if values.len() != schema.len() {
        return Err(Error::input(format!(
            "row has {} values, schema has {} columns",
            values.len(),
            schema.len()
        )));
    }
    schema
        .iter()
        .zip(values)
        .map(|(col, v)| match (&col.kind, v) {
            (_, Value::Missing) => Ok(None),
            (ColumnKind::Numeric, Value::Num(x)) => Ok(Some(*x)),
            (ColumnKind::Nominal(domain), Value::Nom(s)) => domain
                .iter()
                .position(|d| d == s)
                .map(|i| Some(i as f64))
                .ok_or_else(|| Error::input(format!("'{s}' not in the domain of {}", col.name))),
            _ => Err(Error::input(format!(
                "value {v:?} does not fit column {}",
                col.name
            ))),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Split {
    /// `value <= threshold` goes left.
    Threshold(f64),
    /// Nominal code equal to this value goes left.
    Equals(u32),
    /// Every row goes left.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionStump {
    pub column: usize,
    pub split: Split,
    pub left: u8,
    pub right: u8,
    pub missing: Branch,
}

impl DecisionStump {
    pub fn constant(class: u8) -> Self {
        DecisionStump {
            column: 0,
            split: Split::Constant,
            left: class,
            right: class,
            missing: Branch::Left,
        }
    }

    pub fn branch(&self, row: &[Option<f64>]) -> Branch {
        let value = match self.split {
            Split::Constant => return Branch::Left,
            _ => row[self.column],
        };
        match (value, self.split) {
            (None, _) => self.missing,
            (Some(x), Split::Threshold(t)) if x <= t => Branch::Left,
            (Some(x), Split::Equals(c)) if x == c as f64 => Branch::Left,
            _ => Branch::Right,
        }
    }

    pub fn predict(&self, row: &[Option<f64>]) -> u8 {
        match self.branch(row) {
            Branch::Left => self.left,
            Branch::Right => self.right,
        }
    }
}

/// Sum of the weights of misclassified `rows`, accumulated in slice order.
pub fn weighted_error(
    stump: &DecisionStump,
    data: &Dataset,
    rows: &[usize],
    weights: &[f64],
) -> f64 {
    let mut err = 0.0;
    for &r in rows {
        if stump.predict(&data.rows[r]) != data.classes[r] {
            err += weights[r];
        }
    }
    err
}

#[inline]
fn side_error(w: [f64; 2]) -> f64 {
    // majority class predicted, ties go to class 0
    if w[1] > w[0] {
        w[0]
    } else {
        w[1]
    }
}

#[inline]
fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

struct Candidate {
    column: usize,
    split: Split,
    missing: Branch,
    approx: f64,
}

/// Stump with the lowest weighted error over `rows`, and that error.
///
/// `weights` is indexed by row. Ties keep the first candidate in the order
/// constant, then columns ascending, splits ascending, missing left first.
pub fn best_stump(data: &Dataset, rows: &[usize], weights: &[f64]) -> (DecisionStump, f64) {
    let mut total = [0.0; 2];
    for &r in rows {
        total[data.classes[r] as usize] += weights[r];
    }
    let mut candidates = vec![Candidate {
        column: 0,
        split: Split::Constant,
        missing: Branch::Left,
        approx: side_error(total),
    }];
    for (column, kind) in data.kinds.iter().enumerate() {
        let mut missing = [0.0; 2];
        let mut present: Vec<(f64, u8, f64)> = Vec::with_capacity(rows.len());
        for &r in rows {
            let c = data.classes[r];
            match data.rows[r][column] {
                Some(x) => present.push((x, c, weights[r])),
                None => missing[c as usize] += weights[r],
            }
        }
        let known = sub(total, missing);
        let mut push = |split: Split, left: [f64; 2]| {
            let right = sub(known, left);
            candidates.push(Candidate {
                column,
                split,
                missing: Branch::Left,
                approx: side_error(add(left, missing)) + side_error(right),
            });
            candidates.push(Candidate {
                column,
                split,
                missing: Branch::Right,
                approx: side_error(left) + side_error(add(right, missing)),
            });
        };
        match kind {
            FeatureKind::Numeric => {
                present.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut left = [0.0; 2];
                for i in 0..present.len() {
                    let (x, c, w) = present[i];
                    left[c as usize] += w;
                    if let Some(&(next, _, _)) = present.get(i + 1) {
                        if x < next {
                            push(Split::Threshold((x + next) / 2.0), left);
                        }
                    }
                }
            }
            FeatureKind::Nominal(card) => {
                let mut per_value = vec![[0.0; 2]; *card];
                let mut seen = vec![false; *card];
                for &(x, c, w) in &present {
                    let code = x as usize;
                    per_value[code][c as usize] += w;
                    seen[code] = true;
                }
                for code in 0..*card {
                    if seen[code] {
                        push(Split::Equals(code as u32), per_value[code]);
                    }
                }
            }
        }
    }

    let best_approx = candidates
        .iter()
        .map(|c| c.approx)
        .fold(f64::INFINITY, f64::min);
    let tol = NEAR_TIE * (total[0] + total[1]).max(f64::MIN_POSITIVE);
    let mut best: Option<(DecisionStump, f64)> = None;
    for cand in candidates.iter().filter(|c| c.approx <= best_approx + tol) {
        let combos: &[(u8, u8)] = match cand.split {
            Split::Constant => &[(0, 0), (1, 1)],
            _ => &[(0, 1), (1, 0), (0, 0), (1, 1)],
        };
        for &(left, right) in combos {
            let stump = DecisionStump {
                column: cand.column,
                split: cand.split,
                left,
                right,
                missing: cand.missing,
            };
            let err = weighted_error(&stump, data, rows, weights);
            if best.as_ref().is_none_or(|(_, e)| err < *e) {
                best = Some((stump, err));
            }
        }
    }
    best.expect("the constant candidate always exists")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostConfig {
    pub iterations: usize,
    /// Percentage of total weight used to fit each stump (heaviest rows first).
    pub weight_threshold: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            iterations: 10,
            weight_threshold: 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StumpEnsemble {
    pub stumps: Vec<(DecisionStump, f64)>,
    pub iterations: usize,
    pub schema: Vec<Column>,
}

impl StumpEnsemble {
    /// Class with the larger alpha-weighted vote; ties go to class 0.
    pub fn predict_encoded(&self, row: &[Option<f64>]) -> u8 {
        let mut votes = [0.0; 2];
        for (stump, alpha) in &self.stumps {
            votes[stump.predict(row) as usize] += alpha;
        }
        u8::from(votes[1] > votes[0])
    }

    pub fn predict(&self, values: &[Value]) -> Result<Label> {
        let row = encode(&self.schema, values)?;
        Ok(Label::from(match self.predict_encoded(&row) {
            0 => NEGATIVE,
            _ => POSITIVE,
        }))
    }
}

/// Per-round diagnostics of [`train_adaboost_traced`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Round {
    pub epsilon: f64,
    pub alpha: Option<f64>,
    /// Unweighted training error of the ensemble after this round.
    pub training_error: f64,
}

pub fn train_adaboost(
    data: &Dataset,
    rows: &[usize],
    config: &BoostConfig,
) -> Result<StumpEnsemble> {
    train_adaboost_traced(data, rows, config).map(|(e, _)| e)
}

pub fn train_adaboost_traced(
    data: &Dataset,
    rows: &[usize],
    config: &BoostConfig,
) -> Result<(StumpEnsemble, Vec<Round>)> {
    if rows.is_empty() {
        return Err(Error::input("empty training set"));
    }
    if !(config.weight_threshold > 0.0 && config.weight_threshold <= 100.0) {
        return Err(Error::input(format!(
            "weight threshold {} outside (0, 100]",
            config.weight_threshold
        )));
    }
    let mut weights = vec![0.0; data.len()];
    for &r in rows {
        weights[r] = 1.0 / rows.len() as f64;
    }
    let mut ensemble = StumpEnsemble {
        stumps: Vec::new(),
        iterations: config.iterations,
        schema: data.schema.clone(),
    };
    let mut trace = Vec::new();
    let mut trimmed = Vec::with_capacity(rows.len());

    for _ in 0..config.iterations {
        let sample = if config.weight_threshold >= 100.0 {
            rows
        } else {
            heaviest(rows, &weights, config.weight_threshold, &mut trimmed);
            &trimmed[..]
        };
        let (stump, _) = best_stump(data, sample, &weights);
        let total: f64 = rows.iter().map(|&r| weights[r]).sum();
        let epsilon = weighted_error(&stump, data, rows, &weights) / total;
        if epsilon >= 0.5 {
            trace.push(Round {
                epsilon,
                alpha: None,
                training_error: training_error(&ensemble, data, rows),
            });
            break;
        }
        if epsilon == 0.0 {
            ensemble.stumps.push((stump, ALPHA_CAP));
            trace.push(Round {
                epsilon,
                alpha: Some(ALPHA_CAP),
                training_error: training_error(&ensemble, data, rows),
            });
            break;
        }
        let alpha = ((1.0 - epsilon) / epsilon).ln();
        ensemble.stumps.push((stump, alpha));
        trace.push(Round {
            epsilon,
            alpha: Some(alpha),
            training_error: training_error(&ensemble, data, rows),
        });

        let boost = (1.0 - epsilon) / epsilon;
        for &r in rows {
            if stump.predict(&data.rows[r]) != data.classes[r] {
                weights[r] *= boost;
            }
        }
        let total: f64 = rows.iter().map(|&r| weights[r]).sum();
        for &r in rows {
            weights[r] /= total;
        }
    }
    Ok((ensemble, trace))
}

/// Heaviest rows whose cumulative weight reaches `percent` of the total.
fn heaviest(rows: &[usize], weights: &[f64], percent: f64, out: &mut Vec<usize>) {
    out.clear();
    out.extend_from_slice(rows);
    out.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let total: f64 = rows.iter().map(|&r| weights[r]).sum();
    let target = total * percent / 100.0;
    let mut acc = 0.0;
    let mut keep = 0;
    for &r in out.iter() {
        keep += 1;
        acc += weights[r];
        if acc >= target {
            break;
        }
    }
    out.truncate(keep);
    out.sort_unstable();
}

pub fn training_error(e: &StumpEnsemble, data: &Dataset, rows: &[usize]) -> f64 {
    let wrong = rows
        .iter()
        .filter(|&&r| e.predict_encoded(&data.rows[r]) != data.classes[r])
        .count();
    wrong as f64 / rows.len() as f64
}
