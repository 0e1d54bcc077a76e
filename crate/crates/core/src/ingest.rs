//! Graph construction from raw inputs.
//!
//! Co-attendance data (who attended which talk) is cleaned, projected onto a
//! directed weighted person network and decorated with profile attributes and
//! a binary label per interest tag. Graphs persist as a directory holding an
//! edge list, a label sidecar and an attribute sidecar.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::dataset::{NEGATIVE, POSITIVE};
use crate::error::{Error, Result};
use crate::graph::{AttrKind, AttrValue, GraphBuilder, Label, LabeledGraph, NodeId};

pub const EDGES_FILE: &str = "edges.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const ATTRIBUTES_FILE: &str = "attributes.csv";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttendanceRecord {
    pub participant: String,
    pub event: String,
}

impl AttendanceRecord {
    pub fn new(participant: impl Into<String>, event: impl Into<String>) -> Self {
        AttendanceRecord {
            participant: participant.into(),
            event: event.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub persons_raw: usize,
    pub persons_kept: usize,
    pub events: usize,
    pub presences_raw: usize,
    pub presences_kept: usize,
    pub directed_edges: usize,
    /// Profile or target ids that match no node of the graph.
    pub unresolved_ids: usize,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "persons_raw      {}", self.persons_raw)?;
        writeln!(f, "persons_kept     {}", self.persons_kept)?;
        writeln!(f, "events           {}", self.events)?;
        writeln!(f, "presences_raw    {}", self.presences_raw)?;
        writeln!(f, "presences_kept   {}", self.presences_kept)?;
        writeln!(f, "directed_edges   {}", self.directed_edges)?;
        write!(f, "unresolved_ids   {}", self.unresolved_ids)
    }
}

pub type TagSets = HashMap<String, BTreeSet<String>>;

/// Profile table: attribute schema plus one row per person.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Profiles {
    pub schema: Vec<(String, AttrKind)>,
    pub rows: BTreeMap<String, Vec<AttrValue>>,
}

fn distinct_count<'a>(items: impl Iterator<Item = &'a str>) -> usize {
    items.collect::<BTreeSet<_>>().len()
}

/// Drops every presence of participants without a target tag. The result is
/// deduplicated and sorted.
pub fn clean_participants(
    records: &[AttendanceRecord],
    targets: &TagSets,
) -> (Vec<AttendanceRecord>, IngestReport) {
    let mut unique: Vec<AttendanceRecord> = records.to_vec();
    unique.sort();
    unique.dedup();
    let mut report = IngestReport {
        persons_raw: distinct_count(unique.iter().map(|r| r.participant.as_str())),
        presences_raw: unique.len(),
        ..Default::default()
    };
    unique.retain(|r| targets.get(&r.participant).is_some_and(|t| !t.is_empty()));
    report.persons_kept = distinct_count(unique.iter().map(|r| r.participant.as_str()));
    report.events = distinct_count(unique.iter().map(|r| r.event.as_str()));
    report.presences_kept = unique.len();
    (unique, report)
}

/// Directed co-attendance network: `w_ij = |T_i ∩ T_j| / |T_i|` for every
/// ordered pair sharing at least one event. Nodes are the participants, in
/// sorted order.
pub fn project_coattendance(records: &[AttendanceRecord]) -> Result<LabeledGraph> {
    let people: Vec<&str> = records
        .iter()
        .map(|r| r.participant.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let person_index: HashMap<&str, usize> =
        people.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut event_index: HashMap<&str, usize> = HashMap::new();
    let mut attended: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); people.len()];
    for r in records {
        let next = event_index.len();
        let e = *event_index.entry(r.event.as_str()).or_insert(next);
        attended[person_index[r.participant.as_str()]].insert(e);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); event_index.len()];
    for (i, events) in attended.iter().enumerate() {
        for &e in events {
            members[e].push(i);
        }
    }

    let rows: Vec<Vec<(usize, f64)>> = (0..people.len())
        .into_par_iter()
        .map_init(
            || vec![0u32; people.len()],
            |shared, i| {
                let mut touched = Vec::new();
                for &e in &attended[i] {
                    for &j in &members[e] {
                        if j != i {
                            if shared[j] == 0 {
                                touched.push(j);
                            }
                            shared[j] += 1;
                        }
                    }
                }
                touched.sort_unstable();
                let total = attended[i].len() as f64;
                touched
                    .into_iter()
                    .map(|j| {
                        let w = f64::from(std::mem::take(&mut shared[j])) / total;
                        (j, w)
                    })
                    .collect()
            },
        )
        .collect();

    let mut b = GraphBuilder::new();
    for p in &people {
        b.add_node(p);
    }
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row {
            b.add_edge(NodeId::from_index(i), NodeId::from_index(j), w)?;
        }
    }
    b.build()
}

/// Labels every node `1` when `tag` is among its targets and `0` otherwise,
/// and copies profile attributes (missing when a node has no profile).
/// With `include_isolated`, profiled people with at least one tag who are not
/// in the graph join it as isolated nodes. Returns the number of profile and
/// target ids left unresolved.
pub fn attach_labels_and_attributes(
    g: &LabeledGraph,
    profiles: &Profiles,
    tag: &str,
    targets: &TagSets,
    include_isolated: bool,
) -> Result<(LabeledGraph, usize)> {
    let mut b = g.to_builder();
    if include_isolated {
        for id in profiles.rows.keys() {
            if targets.get(id).is_some_and(|t| !t.is_empty()) {
                b.add_node(id);
            }
        }
    }
    b.set_schema(profiles.schema.clone());
    b.declare_label(Label::from(NEGATIVE));
    b.declare_label(Label::from(POSITIVE));
    let mut unresolved = 0;
    for (id, values) in &profiles.rows {
        match b.node_by_name(id) {
            Some(v) => b.set_attributes(v, values.clone())?,
            None => unresolved += 1,
        }
    }
    unresolved += targets
        .keys()
        .filter(|id| b.node_by_name(id).is_none())
        .count();
    for i in 0..b.node_count() {
        let v = NodeId::from_index(i);
        let name = b.name(v).to_string();
        let positive = targets.get(&name).is_some_and(|t| t.contains(tag));
        b.set_label(
            v,
            Some(Label::from(if positive { POSITIVE } else { NEGATIVE })),
        )?;
    }
    Ok((b.build()?, unresolved))
}

/// Full pipeline: clean, project, attach.
pub fn build_network(
    records: &[AttendanceRecord],
    profiles: &Profiles,
    targets: &TagSets,
    tag: &str,
    include_isolated: bool,
) -> Result<(LabeledGraph, IngestReport)> {
    let (cleaned, mut report) = clean_participants(records, targets);
    let projected = project_coattendance(&cleaned)?;
    let (g, unresolved) =
        attach_labels_and_attributes(&projected, profiles, tag, targets, include_isolated)?;
    report.directed_edges = g.edge_count();
    report.unresolved_ids = unresolved;
    Ok((g, report))
}

/// Opens `path` for reading, or standard input for `-`.
pub fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn source_name(path: &str) -> &str {
    if path == "-" {
        "<stdin>"
    } else {
        path
    }
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn expect_headers(r: &mut csv::Reader<impl Read>, expected: &[&str], source: &str) -> Result<()> {
    let headers = r.headers()?;
    let got: Vec<&str> = headers.iter().collect();
    if got.len() < expected.len() || got[..expected.len()] != *expected {
        return Err(Error::parse(
            source,
            1,
            format!(
                "expected header '{}', got '{}'",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}

fn record_line(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

pub fn read_attendance<R: Read>(input: R, source: &str) -> Result<Vec<AttendanceRecord>> {
    let mut r = csv_reader(input);
    expect_headers(&mut r, &["person", "talk"], source)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let (p, t) = (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""));
        if p.is_empty() || t.is_empty() {
            return Err(Error::parse(
                source,
                record_line(&rec),
                "empty person or talk",
            ));
        }
        out.push(AttendanceRecord::new(p, t));
    }
    Ok(out)
}

pub fn load_attendance(path: &str) -> Result<Vec<AttendanceRecord>> {
    read_attendance(open_input(path)?, source_name(path))
}

/// Reads a profile table whose first column is `person`. A column is numeric
/// when every non-empty value parses as a number, nominal otherwise.
pub fn read_profiles<R: Read>(input: R, source: &str) -> Result<Profiles> {
    let mut r = csv_reader(input);
    expect_headers(&mut r, &["person"], source)?;
    let names: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let mut raw: Vec<(String, Vec<String>, usize)> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = record_line(&rec);
        if rec.len() != names.len() + 1 {
            return Err(Error::parse(
                source,
                line,
                format!("expected {} fields", names.len() + 1),
            ));
        }
        let id = rec[0].to_string();
        if id.is_empty() {
            return Err(Error::parse(source, line, "empty person id"));
        }
        raw.push((id, rec.iter().skip(1).map(str::to_string).collect(), line));
    }
    let schema: Vec<(String, AttrKind)> = names
        .into_iter()
        .enumerate()
        .map(|(c, name)| {
            let numeric = raw
                .iter()
                .map(|(_, vals, _)| vals[c].as_str())
                .filter(|v| !v.is_empty())
                .all(|v| v.parse::<f64>().is_ok_and(f64::is_finite));
            (
                name,
                if numeric {
                    AttrKind::Numeric
                } else {
                    AttrKind::Nominal
                },
            )
        })
        .collect();
    let mut rows = BTreeMap::new();
    for (id, vals, line) in raw {
        let values = vals
            .iter()
            .zip(&schema)
            .map(|(v, (_, kind))| parse_attr(v, *kind))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::parse(source, line, "malformed value"))?;
        if rows.insert(id.clone(), values).is_some() {
            return Err(Error::parse(
                source,
                line,
                format!("duplicate person '{id}'"),
            ));
        }
    }
    Ok(Profiles { schema, rows })
}

pub fn load_profiles(path: &str) -> Result<Profiles> {
    read_profiles(open_input(path)?, source_name(path))
}

fn parse_attr(v: &str, kind: AttrKind) -> Option<AttrValue> {
    if v.is_empty() || v == "?" {
        return Some(AttrValue::Missing);
    }
    match kind {
        AttrKind::Numeric => v
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .map(AttrValue::Numeric),
        AttrKind::Nominal => Some(AttrValue::Nominal(v.to_string())),
    }
}

/// Reads `person,tags` rows with `|`-separated tags. Repeated persons merge.
pub fn read_targets<R: Read>(input: R, source: &str) -> Result<TagSets> {
    let mut r = csv_reader(input);
    expect_headers(&mut r, &["person", "tags"], source)?;
    let mut out = TagSets::new();
    for rec in r.records() {
        let rec = rec?;
        let id = rec.get(0).unwrap_or("");
        if id.is_empty() {
            return Err(Error::parse(source, record_line(&rec), "empty person id"));
        }
        let tags = out.entry(id.to_string()).or_default();
        tags.extend(
            rec.get(1)
                .unwrap_or("")
                .split('|')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string),
        );
    }
    Ok(out)
}

pub fn load_targets(path: &str) -> Result<TagSets> {
    read_targets(open_input(path)?, source_name(path))
}

/// Whitespace-separated `src dst weight` lines; `#` starts a comment line.
pub fn read_edge_list<R: BufRead>(input: R, source: &str) -> Result<GraphBuilder> {
    let mut b = GraphBuilder::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [src, dst, w] = fields[..] else {
            return Err(Error::parse(
                source,
                lineno,
                format!("expected 'src dst weight', got '{line}'"),
            ));
        };
        let weight: f64 = w
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("'{w}' is not a weight")))?;
        b.add_named_edge(src, dst, weight).map_err(|e| match e {
            Error::SelfLoop(_) | Error::InvalidWeight { .. } => {
                Error::parse(source, lineno, e.to_string())
            }
            other => other,
        })?;
    }
    Ok(b)
}

pub fn load_edge_list(path: &str) -> Result<LabeledGraph> {
    read_edge_list(open_input(path)?, source_name(path))?.build()
}

fn sorted_nodes(g: &LabeledGraph) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    nodes.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
    nodes
}

/// Tab-separated edges sorted by source then target name.
pub fn write_edge_list<W: Write>(g: &LabeledGraph, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let mut edges: Vec<(&str, &str, f64)> = g
        .topology()
        .edges()
        .map(|(u, v, w)| (g.name(u), g.name(v), w))
        .collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for (u, v, w) in edges {
        writeln!(out, "{u}\t{v}\t{w}").map_err(|e| Error::io("<edge list>", e))?;
    }
    out.flush().map_err(|e| Error::io("<edge list>", e))
}

/// `node<TAB>label` lines, `?` for unlabeled nodes, preceded by a
/// `# label_set:` directive listing every declared label.
pub fn write_labels<W: Write>(g: &LabeledGraph, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let set: Vec<&str> = g.label_set().iter().map(Label::as_str).collect();
    let io_err = |e| Error::io("<labels>", e);
    writeln!(out, "# label_set: {}", set.join(",")).map_err(io_err)?;
    for v in sorted_nodes(g) {
        let l = g.label(v).map_or("?", Label::as_str);
        writeln!(out, "{}\t{l}", g.name(v)).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Applies a label sidecar; unknown node names become isolated nodes.
pub fn read_labels<R: BufRead>(b: &mut GraphBuilder, input: R, source: &str) -> Result<()> {
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if let Some(set) = line.strip_prefix("# label_set:") {
            for l in set.split(',').map(str::trim).filter(|l| !l.is_empty()) {
                b.declare_label(Label::from(l));
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [node, label] = fields[..] else {
            return Err(Error::parse(
                source,
                lineno,
                format!("expected 'node label', got '{line}'"),
            ));
        };
        let v = b.add_node(node);
        let label = (label != "?").then(|| Label::from(label));
        b.set_label(v, label)?;
    }
    Ok(())
}

/// Attribute table with a leading `# kinds:` line, then `node,<attrs...>`.
pub fn write_attributes<W: Write>(g: &LabeledGraph, mut out: W) -> Result<()> {
    let kinds: Vec<&str> = g
        .attribute_schema()
        .iter()
        .map(|(_, k)| match k {
            AttrKind::Numeric => "numeric",
            AttrKind::Nominal => "nominal",
        })
        .collect();
    writeln!(out, "# kinds: {}", kinds.join(",")).map_err(|e| Error::io("<attributes>", e))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["node".to_string()];
    header.extend(g.attribute_schema().iter().map(|(n, _)| n.clone()));
    w.write_record(&header)?;
    for v in sorted_nodes(g) {
        let mut rec = vec![g.name(v).to_string()];
        rec.extend(g.attributes(v).iter().map(|a| match a {
            AttrValue::Numeric(x) => x.to_string(),
            AttrValue::Nominal(s) => s.clone(),
            AttrValue::Missing => String::new(),
        }));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<attributes>", e))
}

pub fn read_attributes<R: BufRead>(b: &mut GraphBuilder, mut input: R, source: &str) -> Result<()> {
    let mut first = String::new();
    input
        .read_line(&mut first)
        .map_err(|e| Error::io(source, e))?;
    let kinds: Vec<AttrKind> = match first.trim().strip_prefix("# kinds:") {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(|k| match k {
                "numeric" => Ok(AttrKind::Numeric),
                "nominal" => Ok(AttrKind::Nominal),
                other => Err(Error::parse(
                    source,
                    1,
                    format!("unknown attribute kind '{other}'"),
                )),
            })
            .collect::<Result<_>>()?,
        None => return Err(Error::parse(source, 1, "missing '# kinds:' line")),
    };
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let names: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    if names.len() != kinds.len() {
        return Err(Error::parse(source, 2, "header and kinds disagree"));
    }
    b.set_schema(names.into_iter().zip(kinds.iter().copied()).collect());
    for rec in r.records() {
        let rec = rec?;
        let line = record_line(&rec) + 1;
        if rec.len() != kinds.len() + 1 {
            return Err(Error::parse(
                source,
                line,
                format!("expected {} fields", kinds.len() + 1),
            ));
        }
        let values = rec
            .iter()
            .skip(1)
            .zip(&kinds)
            .map(|(v, k)| parse_attr(v, *k))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::parse(source, line, "malformed value"))?;
        let v = b.add_node(&rec[0]);
        b.set_attributes(v, values)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes the edge list and both sidecars into `dir`, creating it if needed.
pub fn save_graph(g: &LabeledGraph, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_edge_list(g, create(&dir.join(EDGES_FILE))?)?;
    write_labels(g, create(&dir.join(LABELS_FILE))?)?;
    write_attributes(g, create(&dir.join(ATTRIBUTES_FILE))?)
}

/// Loads a graph directory. The edge list is required, the sidecars are
/// optional.
pub fn load_graph(dir: &Path) -> Result<LabeledGraph> {
    let edges = dir.join(EDGES_FILE);
    let mut b = read_edge_list(open(&edges)?, &edges.display().to_string())?;
    let labels = dir.join(LABELS_FILE);
    if labels.exists() {
        read_labels(&mut b, open(&labels)?, &labels.display().to_string())?;
    }
    let attrs = dir.join(ATTRIBUTES_FILE);
    if attrs.exists() {
        read_attributes(&mut b, open(&attrs)?, &attrs.display().to_string())?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: &str, t: &str) -> AttendanceRecord {
        AttendanceRecord::new(p, t)
    }

    fn tags(pairs: &[(&str, &str)]) -> TagSets {
        pairs
            .iter()
            .map(|(p, t)| {
                (
                    p.to_string(),
                    t.split('|')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn weights_follow_shared_share() {
        let records = vec![
            rec("i", "t1"),
            rec("i", "t2"),
            rec("i", "t3"),
            rec("i", "t4"),
            rec("j", "t2"),
            rec("j", "t3"),
            rec("k", "t9"),
        ];
        let g = project_coattendance(&records).unwrap();
        let (i, j, k) = (
            g.node_by_name("i").unwrap(),
            g.node_by_name("j").unwrap(),
            g.node_by_name("k").unwrap(),
        );
        assert_eq!(g.topology().weight(i, j), Some(0.5));
        assert_eq!(g.topology().weight(j, i), Some(1.0));
        assert_eq!(g.topology().weight(i, k), None);
        assert_eq!(g.topology().weight(k, i), None);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn projection_ignores_record_order_and_duplicates() {
        let a = vec![rec("a", "x"), rec("b", "x"), rec("b", "y"), rec("c", "y")];
        let mut b = a.clone();
        b.reverse();
        b.push(rec("a", "x"));
        let (a, _) = clean_participants(&a, &tags(&[("a", "t"), ("b", "t"), ("c", "t")]));
        let (b, _) = clean_participants(&b, &tags(&[("a", "t"), ("b", "t"), ("c", "t")]));
        assert_eq!(
            project_coattendance(&a).unwrap().topology(),
            project_coattendance(&b).unwrap().topology()
        );
    }

    #[test]
    fn cleaning_drops_untagged_people() {
        let records = vec![rec("a", "x"), rec("a", "x"), rec("b", "x"), rec("c", "y")];
        let (kept, r) = clean_participants(&records, &tags(&[("a", "t"), ("b", ""), ("c", "t|u")]));
        assert_eq!(kept, vec![rec("a", "x"), rec("c", "y")]);
        assert_eq!(
            (
                r.persons_raw,
                r.persons_kept,
                r.presences_raw,
                r.presences_kept,
                r.events
            ),
            (3, 2, 3, 2, 2)
        );
        let (none, _) = clean_participants(&records, &TagSets::new());
        assert!(none.is_empty());
    }

    #[test]
    fn labels_and_attributes_attached() {
        let records = vec![rec("a", "x"), rec("b", "x")];
        let profiles = read_profiles(
            "person,age,gender,country,phone_provider\na,31,f,pl,\nzz,40,m,de,att\n".as_bytes(),
            "p",
        )
        .unwrap();
        assert_eq!(profiles.schema[0], ("age".to_string(), AttrKind::Numeric));
        let t = tags(&[("a", "music|art"), ("b", "art"), ("zz", "music")]);
        let (g, r) = build_network(&records, &profiles, &t, "music", false).unwrap();
        let a = g.node_by_name("a").unwrap();
        let b = g.node_by_name("b").unwrap();
        assert_eq!(g.label(a).unwrap().as_str(), "1");
        assert_eq!(g.label(b).unwrap().as_str(), "0");
        assert_eq!(g.attributes(a)[0], AttrValue::Numeric(31.0));
        assert_eq!(g.attributes(a)[3], AttrValue::Missing);
        assert!(g.attributes(b).iter().all(AttrValue::is_missing));
        assert_eq!(r.unresolved_ids, 2);
        assert_eq!(r.directed_edges, 2);

        let (g, r) = build_network(&records, &profiles, &t, "music", true).unwrap();
        let zz = g.node_by_name("zz").unwrap();
        assert_eq!(g.label(zz).unwrap().as_str(), "1");
        assert!(g
            .topology()
            .neighbors(zz, crate::DirectionMode::Undirected)
            .is_empty());
        assert_eq!(r.unresolved_ids, 0);
    }

    #[test]
    fn edge_list_parsing() {
        let b = read_edge_list("".as_bytes(), "e").unwrap();
        assert_eq!(b.build().unwrap().node_count(), 0);
        let g = read_edge_list("# c\na b 0.5\nb\ta 1.0\n".as_bytes(), "e")
            .unwrap()
            .build()
            .unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 2));
        let err = read_edge_list("a b 1\na b\n".as_bytes(), "e").unwrap_err();
        assert!(err.to_string().starts_with("e:2:"), "{err}");
        assert!(matches!(
            read_edge_list("a b -1\n".as_bytes(), "e"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_edge_list("a a 1\n".as_bytes(), "e"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(read_edge_list("a b x\n".as_bytes(), "e").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "a\tb\t0.5\na\tc\t1\nb\ta\t0.333\n";
        let g = read_edge_list(text.as_bytes(), "e")
            .unwrap()
            .build()
            .unwrap();
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn graph_directory_round_trip() {
        let records = vec![rec("a", "x"), rec("b", "x"), rec("b", "y"), rec("c", "y")];
        let profiles =
            read_profiles("person,age,gender\na,31,f\nb,,m\nd,5,f\n".as_bytes(), "p").unwrap();
        let t = tags(&[("a", "q"), ("b", "r"), ("c", "q"), ("d", "q")]);
        let (g, _) = build_network(&records, &profiles, &t, "q", true).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_graph(&g, dir.path()).unwrap();
        let back = load_graph(dir.path()).unwrap();
        assert_eq!(back.node_count(), 4);
        for v in g.nodes() {
            let w = back.node_by_name(g.name(v)).unwrap();
            assert_eq!(g.label(v), back.label(w));
            assert_eq!(g.attributes(v), back.attributes(w));
        }
        let second = tempfile::tempdir().unwrap();
        save_graph(&back, second.path()).unwrap();
        for f in [EDGES_FILE, LABELS_FILE, ATTRIBUTES_FILE] {
            assert_eq!(
                fs::read(dir.path().join(f)).unwrap(),
                fs::read(second.path().join(f)).unwrap(),
                "{f}"
            );
        }
    }

    #[test]
    fn bad_headers_rejected() {
        assert!(read_attendance("who,talk\na,b\n".as_bytes(), "a").is_err());
        assert!(read_targets("person\na\n".as_bytes(), "t").is_err());
    }
}
