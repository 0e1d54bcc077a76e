//! ARFF reading and writing.
//!
//! Output layout:
//!
//! ```text
//! % netfeat feature export
//! % key = value            (one line per provenance entry)
//! @RELATION name
//!
//! @ATTRIBUTE age NUMERIC
//! @ATTRIBUTE gender {f,m}
//! @ATTRIBUTE class {0,1}
//!
//! @DATA
//! 34,f,1
//! ?,m,0
//! ```
//!
//! Names and nominal values that contain separators or quotes are written in
//! single quotes with backslash escapes. ARFF has no row identifiers, so
//! [`write_arff`] also writes `<path>.ids` (one external id per data row).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{Column, ColumnKind, FeatureMatrix, Row, Value, TARGET_COLUMN};

const BANNER: &str = "netfeat feature export";

/// Parsed ARFF file.
#[derive(Clone, Debug, PartialEq)]
pub struct ArffDocument {
    pub relation: String,
    pub matrix: FeatureMatrix,
}

pub fn ids_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".ids");
    PathBuf::from(os)
}

pub fn write_arff(m: &FeatureMatrix, relation: &str, path: &Path) -> Result<()> {
    fs::write(path, to_arff_string(m, relation)).map_err(|e| Error::io(path, e))?;
    let mut ids = String::new();
    for row in &m.rows {
        ids.push_str(&row.id);
        ids.push('\n');
    }
    let ids_file = ids_path(path);
    fs::write(&ids_file, ids).map_err(|e| Error::io(ids_file, e))
}

/// Reads an ARFF file; row ids come from the `.ids` sidecar when present,
/// otherwise rows are numbered from 0.
pub fn read_arff(path: &Path) -> Result<ArffDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut doc = parse_arff(&text, &path.display().to_string())?;
    let ids_file = ids_path(path);
    if ids_file.exists() {
        let ids = fs::read_to_string(&ids_file).map_err(|e| Error::io(&ids_file, e))?;
        let ids: Vec<&str> = ids.lines().collect();
        if ids.len() != doc.matrix.rows.len() {
            return Err(Error::input(format!(
                "{}: {} ids for {} rows",
                ids_file.display(),
                ids.len(),
                doc.matrix.rows.len()
            )));
        }
        for (row, id) in doc.matrix.rows.iter_mut().zip(ids) {
            row.id = id.to_string();
        }
    }
    Ok(doc)
}

pub fn to_arff_string(m: &FeatureMatrix, relation: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% {BANNER}");
    for (k, v) in &m.provenance {
        let _ = writeln!(out, "% {k} = {v}");
    }
    let _ = writeln!(out, "@RELATION {}", quote(relation));
    out.push('\n');
    for col in &m.columns {
        match &col.kind {
            ColumnKind::Numeric => {
                let _ = writeln!(out, "@ATTRIBUTE {} NUMERIC", quote(&col.name));
            }
            ColumnKind::Nominal(domain) => {
                let values: Vec<String> = domain.iter().map(|d| quote(d)).collect();
                let _ = writeln!(
                    out,
                    "@ATTRIBUTE {} {{{}}}",
                    quote(&col.name),
                    values.join(",")
                );
            }
        }
    }
    out.push_str("\n@DATA\n");
    for row in &m.rows {
        let fields: Vec<String> = row.values.iter().map(format_value).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Num(x) => x.to_string(),
        Value::Nom(s) => quote(s),
        Value::Missing => "?".to_string(),
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '\'' | '"' | '%' | '\\'))
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut q = String::with_capacity(s.len() + 2);
    q.push('\'');
    for c in s.chars() {
        match c {
            '\'' | '\\' => {
                q.push('\\');
                q.push(c);
            }
            '\n' => q.push_str("\\n"),
            '\t' => q.push_str("\\t"),
            '\r' => q.push_str("\\r"),
            _ => q.push(c),
        }
    }
    q.push('\'');
    q
}

/// A token from a data or attribute line.
#[derive(Debug, PartialEq)]
enum Token {
    Bare(String),
    Quoted(String),
}

impl Token {
    fn text(&self) -> &str {
        match self {
            Token::Bare(s) | Token::Quoted(s) => s,
        }
    }
}

/// Splits on `sep` outside quotes; bare fields are trimmed.
fn split_fields(line: &str, sep: char) -> std::result::Result<Vec<Token>, String> {
    let mut fields = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| *c == ' ' || *c == '\t') {
            chars.next();
        }
        match chars.peek().copied() {
            Some(q @ ('\'' | '"')) => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err("unterminated quote".into()),
                        Some('\\') => match chars.next() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            Some(c) => s.push(c),
                            None => return Err("dangling escape".into()),
                        },
                        Some(c) if c == q => break,
                        Some(c) => s.push(c),
                    }
                }
                fields.push(Token::Quoted(s));
                while chars.peek().is_some_and(|c| *c == ' ' || *c == '\t') {
                    chars.next();
                }
                match chars.next() {
                    None => return Ok(fields),
                    Some(c) if c == sep => continue,
                    Some(c) => return Err(format!("unexpected '{c}' after quoted value")),
                }
            }
            _ => {
                let mut s = String::new();
                let mut ended = true;
                for c in chars.by_ref() {
                    if c == sep {
                        ended = false;
                        break;
                    }
                    s.push(c);
                }
                fields.push(Token::Bare(s.trim().to_string()));
                if ended {
                    return Ok(fields);
                }
            }
        }
    }
}

/// Splits off the first (possibly quoted) word of `s`.
fn first_word(s: &str) -> std::result::Result<(Token, &str), String> {
    let s = s.trim_start();
    if s.starts_with('\'') || s.starts_with('"') {
        let q = s.chars().next().unwrap();
        let mut escaped = false;
        for (i, c) in s.char_indices().skip(1) {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                let toks = split_fields(&s[..=i], '\u{0}')?;
                let tok = toks.into_iter().next().ok_or("empty name")?;
                return Ok((tok, &s[i + 1..]));
            }
        }
        Err("unterminated quote".into())
    } else {
        let end = s.find(char::is_whitespace).unwrap_or(s.len());
        Ok((Token::Bare(s[..end].to_string()), &s[end..]))
    }
}

pub fn parse_arff(text: &str, source: &str) -> Result<ArffDocument> {
    let mut relation = None;
    let mut columns: Vec<Column> = Vec::new();
    let mut provenance = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |msg: String| Error::parse(source, lineno, msg);
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('%') {
            if !in_data {
                if let Some((k, v)) = comment.trim().split_once(" = ") {
                    provenance.push((k.trim().to_string(), v.trim().to_string()));
                }
            }
            continue;
        }
        if in_data {
            let fields = split_fields(line, ',').map_err(err)?;
            if fields.len() != columns.len() {
                return Err(err(format!(
                    "{} values for {} attributes",
                    fields.len(),
                    columns.len()
                )));
            }
            let values = columns
                .iter()
                .zip(&fields)
                .map(|(col, tok)| parse_value(col, tok))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(err)?;
            rows.push(Row {
                id: rows.len().to_string(),
                values,
            });
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            let (tok, _) = first_word(&line["@relation".len()..]).map_err(err)?;
            relation = Some(tok.text().to_string());
        } else if lower.starts_with("@attribute") {
            let (name, rest) = first_word(&line["@attribute".len()..]).map_err(err)?;
            let rest = rest.trim();
            let kind = if let Some(inner) = rest.strip_prefix('{') {
                let inner = inner
                    .strip_suffix('}')
                    .ok_or_else(|| err("unterminated nominal domain".into()))?;
                if inner.trim().is_empty() {
                    ColumnKind::Nominal(Vec::new())
                } else {
                    let values = split_fields(inner, ',').map_err(err)?;
                    ColumnKind::Nominal(values.iter().map(|t| t.text().to_string()).collect())
                }
            } else {
                match rest.to_ascii_lowercase().as_str() {
                    "numeric" | "real" | "integer" => ColumnKind::Numeric,
                    other => return Err(err(format!("unsupported attribute type '{other}'"))),
                }
            };
            columns.push(Column {
                name: name.text().to_string(),
                kind,
            });
        } else if lower.starts_with("@data") {
            in_data = true;
        } else {
            return Err(err(format!("unexpected line '{line}'")));
        }
    }

    let relation = relation.ok_or_else(|| Error::parse(source, 0, "missing @RELATION"))?;
    if !in_data {
        return Err(Error::parse(source, 0, "missing @DATA"));
    }
    let target = columns
        .last()
        .map(|c| c.name.clone())
        .unwrap_or_else(|| TARGET_COLUMN.to_string());
    Ok(ArffDocument {
        relation,
        matrix: FeatureMatrix {
            columns,
            rows,
            target,
            provenance,
        },
    })
}

fn parse_value(col: &Column, tok: &Token) -> std::result::Result<Value, String> {
    if *tok == Token::Bare("?".into()) {
        return Ok(Value::Missing);
    }
    match &col.kind {
        ColumnKind::Numeric => tok
            .text()
            .parse::<f64>()
            .map(Value::Num)
            .map_err(|_| format!("'{}' is not numeric (attribute {})", tok.text(), col.name)),
        ColumnKind::Nominal(domain) => {
            let s = tok.text();
            if domain.iter().any(|d| d == s) {
                Ok(Value::Nom(s.to_string()))
            } else {
                Err(format!("'{s}' is not in the domain of {}", col.name))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::target_column;

    fn sample() -> FeatureMatrix {
        FeatureMatrix {
            columns: vec![
                Column::numeric("age"),
                Column::nominal(
                    "home town",
                    vec!["New York".into(), "o'hare".into(), "x,y".into()],
                ),
                target_column(),
            ],
            rows: vec![
                Row {
                    id: "a".into(),
                    values: vec![
                        Value::Num(0.1),
                        Value::Nom("New York".into()),
                        Value::Nom("1".into()),
                    ],
                },
                Row {
                    id: "b".into(),
                    values: vec![Value::Missing, Value::Nom("o'hare".into()), Value::Missing],
                },
                Row {
                    id: "c".into(),
                    values: vec![
                        Value::Num(-2.5e-7),
                        Value::Nom("x,y".into()),
                        Value::Nom("0".into()),
                    ],
                },
            ],
            target: "class".into(),
            provenance: vec![
                ("direction".into(), "undirected".into()),
                ("seed".into(), "7".into()),
            ],
        }
    }

    #[test]
    fn layout() {
        let text = to_arff_string(&sample(), "amd activism");
        let expected = "\
% netfeat feature export
% direction = undirected
% seed = 7
@RELATION 'amd activism'

@ATTRIBUTE age NUMERIC
@ATTRIBUTE 'home town' {'New York','o\\'hare','x,y'}
@ATTRIBUTE class {0,1}

@DATA
0.1,'New York',1
?,'o\\'hare',?
-0.00000025,'x,y',0
";
        assert_eq!(text, expected);
    }

    #[test]
    fn empty_matrix_is_header_only() {
        let m = FeatureMatrix {
            columns: vec![target_column()],
            rows: vec![],
            target: "class".into(),
            provenance: vec![],
        };
        let text = to_arff_string(&m, "r");
        assert!(text.ends_with("@DATA\n"));
        let doc = parse_arff(&text, "mem").unwrap();
        assert!(doc.matrix.rows.is_empty());
    }

    #[test]
    fn file_round_trip_restores_ids() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.arff");
        let m = sample();
        write_arff(&m, "amd activism", &path).unwrap();
        let doc = read_arff(&path).unwrap();
        assert_eq!(doc.relation, "amd activism");
        assert_eq!(doc.matrix, m);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "@RELATION r\n@ATTRIBUTE a NUMERIC\n@DATA\n1\nx\n";
        match parse_arff(text, "t.arff") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_arff("@RELATION r\n@ATTRIBUTE a {p,q}\n@DATA\nz\n", "t").is_err());
        assert!(parse_arff("@RELATION r\n@ATTRIBUTE a STRING\n@DATA\n", "t").is_err());
        assert!(parse_arff("@ATTRIBUTE a NUMERIC\n@DATA\n", "t").is_err());
    }

    #[test]
    fn lowercase_directives_accepted() {
        let doc = parse_arff(
            "@relation r\n@attribute a real\n@attribute c {0,1}\n@data\n1.5, 0\n",
            "t",
        )
        .unwrap();
        assert_eq!(
            doc.matrix.rows[0].values,
            vec![Value::Num(1.5), Value::Nom("0".into())]
        );
    }
}
