//! Acceptance criteria, one report line per criterion.
//!
//! Criteria that need the original co-attendance files read them from the
//! directory named by `NETFEAT_AMD_DIR` (`attendance.csv`, `profiles.csv`,
//! `targets.csv`); without it they are reported as skipped.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use netfeat::dataset::{build_features, read_arff, write_arff, FeatureConfig, FeatureSet};
use netfeat::eval::boost::{best_stump, train_adaboost_traced, BoostConfig};
use netfeat::eval::{
    cross_validate, generate_homophily_graph, EvalConfig, HomophilyParams, MaskingPolicy,
};
use netfeat::ingest;
use netfeat::label_features::{lift, ncn_vector, ncs_vector, LiftMode};
use netfeat::measures::{betweenness, Measure};
use netfeat::{DirectionMode, Label};
use rand::Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::*;

const DIRS: [DirectionMode; 2] = [DirectionMode::Directed, DirectionMode::Undirected];
const BUDGET: Duration = Duration::from_secs(10);

fn amd_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("NETFEAT_AMD_DIR")?);
    ["attendance.csv", "profiles.csv", "targets.csv"]
        .iter()
        .all(|f| dir.join(f).is_file())
        .then_some(dir)
}

fn betweenness_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1001);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = r.gen_range(1..=9);
        let g = random_graph(&mut r, n, 0.3, false, 0.0);
        let dir = DIRS[i % 2];
        let got = betweenness(g.topology(), dir).values;
        let want = oracle_betweenness(g.topology(), dir);
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    let took = start.elapsed();
    let detail = format!("200 graphs, max deviation {worst:.1e}, {took:.2?}");
    if worst <= 1e-9 && took < BUDGET {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn lifter_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1002);
    let mut mismatches = 0;
    for _ in 0..100 {
        let n = r.gen_range(1..=12);
        let g = random_graph(&mut r, n, 0.3, true, 0.0);
        for l in ["0", "1"] {
            let members = members_with_label(&g, l);
            let sub = naive_induced(&g, &members);
            for dir in DIRS {
                for m in Measure::ALL {
                    let lifted = lift(&m, &g, &Label::from(l), dir, LiftMode::Strict).unwrap();
                    let want = m.compute(&sub, dir).values;
                    for v in g.nodes() {
                        let expected = members.iter().position(|&x| x == v).map(|i| want[i]);
                        if lifted.get(v) != expected {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    let detail = format!("100 graphs, 3 measures, {mismatches} mismatches, {took:.2?}");
    if mismatches == 0 && took < BUDGET {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn partition_of_unity() -> Outcome {
    let mut r = rng(1003);
    let mut checked = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.gen_range(1..=20);
        let g = random_graph(&mut r, n, 0.25, true, 0.2);
        for dir in DIRS {
            let [n0, n1] = ["0", "1"].map(|l| ncn_vector(&g, &Label::from(l), dir).unwrap());
            let [s0, s1] = ["0", "1"].map(|l| ncs_vector(&g, &Label::from(l), dir).unwrap());
            for v in g.nodes() {
                if g.labeled_neighbors(v, dir).unwrap().is_empty() {
                    continue;
                }
                checked += 1;
                let sums = [
                    n0.get(v).unwrap_or(f64::NAN) + n1.get(v).unwrap_or(f64::NAN),
                    s0.get(v).unwrap_or(f64::NAN) + s1.get(v).unwrap_or(f64::NAN),
                ];
                for s in sums {
                    worst = worst.max(if s.is_nan() {
                        f64::INFINITY
                    } else {
                        (s - 1.0).abs()
                    });
                }
            }
        }
    }
    let detail = format!("{checked} nodes checked, max deviation {worst:.1e}");
    if worst <= 1e-9 {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn stump_equivalence() -> Outcome {
    let mut r = rng(1004);
    let mut mismatches = 0;
    let mut increases = 0;
    let mut loss_increases = 0;
    for _ in 0..50 {
        let rows = r.gen_range(2..=30);
        let cols = r.gen_range(1..=5);
        let data = random_dataset(&mut r, rows, cols);
        let weights = random_weights(&mut r, rows);
        let idx: Vec<usize> = (0..rows).collect();
        let (_, err) = best_stump(&data, &idx, &weights);
        if err != oracle_best_error(&data, &idx, &weights) {
            mismatches += 1;
        }
        let (model, trace) = train_adaboost_traced(&data, &idx, &BoostConfig::default()).unwrap();
        let accepted: Vec<f64> = trace
            .iter()
            .filter(|t| t.epsilon < 0.5)
            .map(|t| t.training_error)
            .collect();
        increases += accepted.windows(2).filter(|w| w[1] > w[0]).count();
        let losses = exponential_losses(&model, &data, &idx);
        loss_increases += losses
            .windows(2)
            .filter(|w| w[1] > w[0] * (1.0 + 1e-12))
            .count();
    }
    let detail = format!(
        "50 datasets, {mismatches} error mismatches, {increases} training-error increases, \
         {loss_increases} exponential-loss increases"
    );
    if mismatches == 0 && increases == 0 {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

/// Mean of `exp(-margin / 2)` over the rows after each round, with the
/// margin taken as `y * sum(alpha * h)` for labels and votes in {-1, +1}.
fn exponential_losses(
    model: &netfeat::eval::StumpEnsemble,
    data: &netfeat::eval::Dataset,
    rows: &[usize],
) -> Vec<f64> {
    let sign = |c: u8| if c == 1 { 1.0 } else { -1.0 };
    let mut margin = vec![0.0; rows.len()];
    let mut out = Vec::new();
    for (stump, alpha) in &model.stumps {
        for (m, &r) in margin.iter_mut().zip(rows) {
            *m += alpha * sign(stump.predict(&data.rows[r])) * sign(data.classes[r]);
        }
        out.push(margin.iter().map(|m| (-m / 2.0).exp()).sum::<f64>() / rows.len() as f64);
    }
    out
}

fn mean_accuracy(g: &netfeat::LabeledGraph, set: FeatureSet, cfg: &EvalConfig) -> f64 {
    cross_validate(g, set, cfg).unwrap().mean.accuracy
}

fn synthetic_gap() -> Outcome {
    let g = generate_homophily_graph(&HomophilyParams::default()).unwrap();
    let cfg = EvalConfig {
        seed: 7,
        masking: MaskingPolicy::Transductive,
        ..Default::default()
    };
    let a1 = mean_accuracy(&g, FeatureSet::Raw, &cfg);
    let a3 = mean_accuracy(&g, FeatureSet::LabelDependent, &cfg);
    let mut detail = format!(
        "transductive, synthetic: set 3 {a3:.4}, set 1 {a1:.4}, gap {:.4}",
        a3 - a1
    );
    let mut ok = a3 - a1 >= 0.15;
    match amd_dir() {
        None => detail.push_str("; original-data part skipped (NETFEAT_AMD_DIR unset)"),
        Some(dir) => {
            let (m1, m3) = amd_accuracies(&dir, &cfg);
            ok &= m3 >= 0.95 && (m1 - 0.76).abs() <= 0.05;
            detail.push_str(&format!("; original data: set 3 {m3:.4}, set 1 {m1:.4}"));
        }
    }
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

/// Mean set-1 and set-3 accuracy over one dataset per interest tag.
fn amd_accuracies(dir: &Path, cfg: &EvalConfig) -> (f64, f64) {
    let s = |f: &str| dir.join(f).display().to_string();
    let records = ingest::load_attendance(&s("attendance.csv")).unwrap();
    let profiles = ingest::load_profiles(&s("profiles.csv")).unwrap();
    let targets = ingest::load_targets(&s("targets.csv")).unwrap();
    let tags: BTreeSet<&String> = targets.values().flatten().collect();
    let (mut m1, mut m3) = (0.0, 0.0);
    for tag in &tags {
        let (g, _) = ingest::build_network(&records, &profiles, &targets, tag, false).unwrap();
        m1 += mean_accuracy(&g, FeatureSet::Raw, cfg);
        m3 += mean_accuracy(&g, FeatureSet::LabelDependent, cfg);
    }
    let k = tags.len().max(1) as f64;
    (m1 / k, m3 / k)
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn stability() -> Outcome {
    let (mut a1, mut a3) = (Vec::new(), Vec::new());
    for seed in 1..=20 {
        let g = generate_homophily_graph(&HomophilyParams {
            seed,
            ..Default::default()
        })
        .unwrap();
        let cfg = EvalConfig {
            seed,
            ..Default::default()
        };
        a1.push(mean_accuracy(&g, FeatureSet::Raw, &cfg));
        a3.push(mean_accuracy(&g, FeatureSet::LabelDependent, &cfg));
    }
    let (s1, s3) = (std_dev(&a1), std_dev(&a3));
    let detail = format!("20 seeds: std set 3 {s3:.4}, std set 1 {s1:.4}");
    if s3 < s1 {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn amd_counts() -> Outcome {
    let Some(dir) = amd_dir() else {
        return Skip("NETFEAT_AMD_DIR unset or incomplete".into());
    };
    let s = |f: &str| dir.join(f).display().to_string();
    let records = ingest::load_attendance(&s("attendance.csv")).unwrap();
    let profiles = ingest::load_profiles(&s("profiles.csv")).unwrap();
    let targets = ingest::load_targets(&s("targets.csv")).unwrap();
    let tag = targets
        .values()
        .flatten()
        .min()
        .cloned()
        .unwrap_or_default();
    let (_, r) = ingest::build_network(&records, &profiles, &targets, &tag, false).unwrap();
    let mut detail = format!(
        "persons {}, talks {}, presences {}, edges {}",
        r.persons_kept, r.events, r.presences_kept, r.directed_edges
    );
    if r.directed_edges != 68_770 {
        detail.push_str(" (edge count differs from the published 68770)");
    }
    if (r.persons_kept, r.events, r.presences_kept) == (334, 99, 3_141) {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn run_cli(args: &[&str], cwd: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_netfeat"))
        .args(args)
        .current_dir(cwd)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

/// Runs every command in a fresh directory and returns the produced files.
fn cli_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fs::write(
        dir.join("a.csv"),
        "person,talk\na,t1\na,t2\nb,t1\nb,t3\nc,t2\nc,t3\nd,t3\nd,t1\ne,t2\n",
    )
    .unwrap();
    fs::write(
        dir.join("p.csv"),
        "person,age,gender\na,30,f\nb,41,m\nc,,f\nd,25,m\n",
    )
    .unwrap();
    fs::write(
        dir.join("t.csv"),
        "person,tags\na,x\nb,y\nc,x|y\nd,y\ne,x\n",
    )
    .unwrap();
    let syn = "n=80,p_in=0.15,p_out=0.03";
    let mut commands: Vec<Vec<String>> = vec![
        "ingest --attendance a.csv --profiles p.csv --targets t.csv --tag x --out net"
            .split(' ')
            .map(String::from)
            .collect(),
    ];
    for set in 1..=4 {
        for format in ["arff", "csv"] {
            commands.push(
                format!("features --synthetic {syn} --seed 3 --set {set} --format {format} --out s{set}.{format}")
                    .split(' ')
                    .map(String::from)
                    .collect(),
            );
        }
        commands.push(
            format!("features --graph net --set {set} --out g{set}.arff")
                .split(' ')
                .map(String::from)
                .collect(),
        );
    }
    for masking in ["transductive", "fold-masked"] {
        commands.push(
            format!("evaluate --synthetic {syn} --seed 3 --folds 5 --masking {masking} --out eval_{masking}.csv")
                .split(' ')
                .map(String::from)
                .collect(),
        );
    }
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        assert!(run_cli(&args, dir), "command failed: {}", c.join(" "));
    }
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = cli_outputs(a.path());
    let second = cli_outputs(b.path());
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let detail = format!(
        "{} files compared, {} differ {:?}",
        first.len(),
        differing.len(),
        differing
    );
    if first.len() == second.len() && differing.is_empty() {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn arff_round_trip() -> Outcome {
    let g = generate_homophily_graph(&HomophilyParams::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut failed = Vec::new();
    for set in [
        FeatureSet::Raw,
        FeatureSet::LabelIndependent,
        FeatureSet::LabelDependent,
        FeatureSet::All,
    ] {
        let m = build_features(&g, set, &FeatureConfig::default()).unwrap();
        let (p1, p2) = (
            dir.path().join(format!("{set}a.arff")),
            dir.path().join(format!("{set}b.arff")),
        );
        write_arff(&m, "roundtrip", &p1).unwrap();
        let doc = read_arff(&p1).unwrap();
        write_arff(&doc.matrix, &doc.relation, &p2).unwrap();
        if fs::read(&p1).unwrap() != fs::read(&p2).unwrap() {
            failed.push(set.to_string());
        }
    }
    let detail = format!("4 sets, byte differences in {failed:?}");
    if failed.is_empty() {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

#[test]
fn acceptance_criteria() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 9] = [
        (
            "betweenness matches shortest-path enumeration",
            betweenness_oracle,
        ),
        (
            "strict lifting matches naive induced subgraph",
            lifter_oracle,
        ),
        ("neighbor shares sum to one", partition_of_unity),
        ("stump search matches exhaustive search", stump_equivalence),
        (
            "label-dependent set beats attributes by 0.15",
            synthetic_gap,
        ),
        ("label-dependent accuracy is more stable", stability),
        ("original data ingestion counts", amd_counts),
        ("CLI outputs are deterministic", determinism),
        ("ARFF write-read-write is byte-identical", arff_round_trip),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (tag, detail) = match check() {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failures += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} criterion {}: {name} ({detail})", i + 1);
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
