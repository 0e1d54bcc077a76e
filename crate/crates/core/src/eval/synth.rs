//! Seeded homophilous networks for self-contained evaluation.
//!
//! Each node is labeled `1` with probability `class_balance`. Every ordered
//! pair receives a directed edge with probability `p_in` when both ends share
//! a label and `p_out` otherwise. Profile attributes are drawn independently
//! of the labels, so they carry no class signal.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{AttrKind, AttrValue, GraphBuilder, Label, LabeledGraph, NodeId};

const GENDERS: [&str; 2] = ["female", "male"];
const COUNTRIES: [&str; 5] = ["ca", "de", "pl", "uk", "us"];
const PROVIDERS: [&str; 4] = ["att", "sprint", "tmobile", "verizon"];
const MISSING_RATE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomophilyParams {
    pub n: usize,
    pub class_balance: f64,
    pub p_in: f64,
    pub p_out: f64,
    pub weight_range: (f64, f64),
    pub seed: u64,
}

impl Default for HomophilyParams {
    fn default() -> Self {
        HomophilyParams {
            n: 200,
            class_balance: 0.5,
            p_in: 0.15,
            p_out: 0.03,
            weight_range: (0.1, 1.0),
            seed: 7,
        }
    }
}

impl HomophilyParams {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !(prob(self.p_in) && prob(self.p_out) && self.p_out <= self.p_in) {
            return Err(Error::input(format!(
                "need 0 <= p_out <= p_in <= 1, got p_in = {}, p_out = {}",
                self.p_in, self.p_out
            )));
        }
        if !prob(self.class_balance) {
            return Err(Error::input(format!(
                "class balance {} outside [0, 1]",
                self.class_balance
            )));
        }
        let (lo, hi) = self.weight_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
            return Err(Error::input(format!("invalid weight range [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// Parses `key=value` pairs separated by commas, e.g. `n=200,p_in=0.15`.
    /// Unlisted keys keep their defaults; `seed` is taken from `seed`.
    pub fn parse(spec: &str, seed: u64) -> Result<Self> {
        let mut p = HomophilyParams {
            seed,
            ..Default::default()
        };
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::input(format!("expected key=value, got '{part}'")))?;
            let num = || {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::input(format!("'{v}' is not a number (key {k})")))
            };
            match k.trim() {
                "n" => {
                    p.n = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("'{v}' is not a node count")))?
                }
                "balance" | "class_balance" => p.class_balance = num()?,
                "p_in" => p.p_in = num()?,
                "p_out" => p.p_out = num()?,
                "w_min" => p.weight_range.0 = num()?,
                "w_max" => p.weight_range.1 = num()?,
                other => {
                    return Err(Error::input(format!(
                        "unknown synthetic parameter '{other}'"
                    )))
                }
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn describe(&self) -> String {
        format!(
            "n={},balance={},p_in={},p_out={},w_min={},w_max={}",
            self.n,
            self.class_balance,
            self.p_in,
            self.p_out,
            self.weight_range.0,
            self.weight_range.1
        )
    }
}

pub fn generate_homophily_graph(params: &HomophilyParams) -> Result<LabeledGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let width = n.saturating_sub(1).to_string().len();

    let mut b = GraphBuilder::new();
    b.set_schema(vec![
        ("age".into(), AttrKind::Numeric),
        ("gender".into(), AttrKind::Nominal),
        ("country".into(), AttrKind::Nominal),
        ("phone_provider".into(), AttrKind::Nominal),
    ]);
    b.declare_label(Label::from("0"));
    b.declare_label(Label::from("1"));

    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let v = b.add_node(&format!("n{i:0width$}"));
        let positive = rng.gen_bool(params.class_balance);
        classes.push(positive);
        b.set_label(v, Some(Label::from(if positive { "1" } else { "0" })))?;
    }
    let (lo, hi) = params.weight_range;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = if classes[i] == classes[j] {
                params.p_in
            } else {
                params.p_out
            };
            if rng.gen_bool(p) {
                let w = if hi > lo { rng.gen_range(lo..hi) } else { lo };
                b.add_edge(NodeId::from_index(i), NodeId::from_index(j), w)?;
            }
        }
    }
    for i in 0..n {
        let mut pick = |values: &[&str]| -> AttrValue {
            if rng.gen_bool(MISSING_RATE) {
                AttrValue::Missing
            } else {
                AttrValue::Nominal(values[rng.gen_range(0..values.len())].to_string())
            }
        };
        let gender = pick(&GENDERS);
        let country = pick(&COUNTRIES);
        let provider = pick(&PROVIDERS);
        let age = if rng.gen_bool(MISSING_RATE) {
            AttrValue::Missing
        } else {
            AttrValue::Numeric(rng.gen_range(18..=70) as f64)
        };
        b.set_attributes(NodeId::from_index(i), vec![age, gender, country, provider])?;
    }
    b.build()
}
