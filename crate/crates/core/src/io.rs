//! Readers and writers for complexes: complex-json (canonical), OFF,
//! whitespace edge lists and JSON hyperedge arrays.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::geometry::Embedding;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    ComplexJson,
    Off,
    EdgeList,
    HyperedgeList,
}

impl Format {
    /// Guess from the extension; `.json` files are sniffed for a top-level array.
    pub fn infer(path: &Path, text: &str) -> Format {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("off") => Format::Off,
            Some("json") => {
                if text.trim_start().starts_with('[') {
                    Format::HyperedgeList
                } else {
                    Format::ComplexJson
                }
            }
            _ => Format::EdgeList,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "complex-json" => Ok(Format::ComplexJson),
            "off" => Ok(Format::Off),
            "edge-list" => Ok(Format::EdgeList),
            "hyperedge-list" => Ok(Format::HyperedgeList),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

/// Parsed input: the listed simplices plus optional geometry and weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDocument {
    pub format: Format,
    pub simplices: Vec<Simplex>,
    pub coords: Option<BTreeMap<VertexId, Vec<f64>>>,
    pub vertex_weights: Option<BTreeMap<VertexId, f64>>,
    pub edge_weights: Option<BTreeMap<Simplex, f64>>,
    pub labels: Option<BTreeMap<VertexId, String>>,
    /// Provenance of a generated document; ignored by the geometry.
    pub run_config: Option<serde_json::Value>,
}

/// On-disk layout of complex-json. Edge weights are `[a, b, w]` triples.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    n: Option<usize>,
    simplices: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<BTreeMap<VertexId, Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex_weights: Option<BTreeMap<VertexId, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_weights: Option<Vec<(VertexId, VertexId, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<VertexId, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    run_config: Option<serde_json::Value>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.column(), e.to_string())
}

fn edge(a: VertexId, b: VertexId) -> Result<Simplex> {
    let e = Simplex::new([a, b])?;
    Ok(e)
}

impl ComplexDocument {
    fn bare(format: Format, simplices: Vec<Simplex>) -> Self {
        ComplexDocument {
            format,
            simplices,
            coords: None,
            vertex_weights: None,
            edge_weights: None,
            labels: None,
            run_config: None,
        }
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.simplices.iter().cloned())
    }

    /// Checks coordinates cover the complex and no simplex is degenerate.
    pub fn embedding(&self, c: &SimplicialComplex) -> Result<Option<Embedding>> {
        self.coords
            .as_ref()
            .map(|coords| Embedding::for_complex(c, coords.clone()))
            .transpose()
    }

    /// Canonical form: maximal simplices of the closure in complex order.
    pub fn canonical(&self) -> ComplexDocument {
        let c = self.complex();
        ComplexDocument {
            format: Format::ComplexJson,
            simplices: c.maximal_simplices().into_iter().cloned().collect(),
            ..self.clone()
        }
    }

    pub fn from_complex(c: &SimplicialComplex, e: Option<&Embedding>) -> Self {
        ComplexDocument {
            coords: e.map(Embedding::to_map),
            ..ComplexDocument::bare(
                Format::ComplexJson,
                c.maximal_simplices().into_iter().cloned().collect(),
            )
        }
    }

    pub fn to_complex_json(&self) -> String {
        let canonical = self.canonical();
        let doc = ComplexJson {
            n: canonical.complex().dim(),
            simplices: canonical.simplices.iter().map(|s| s.vertices().to_vec()).collect(),
            coords: canonical.coords,
            vertex_weights: canonical.vertex_weights,
            edge_weights: canonical.edge_weights.map(|w| {
                w.into_iter()
                    .map(|(e, x)| (e.vertices()[0], e.vertices()[1], x))
                    .collect()
            }),
            labels: canonical.labels,
            run_config: canonical.run_config,
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("complex-json serializes");
        out.push('\n');
        out
    }
}

pub fn parse_str(text: &str, format: Format) -> Result<ComplexDocument> {
    match format {
        Format::ComplexJson => parse_complex_json(text),
        Format::Off => parse_off(text),
        Format::EdgeList => parse_edge_list(text),
        Format::HyperedgeList => parse_hyperedges(text),
    }
}

/// Reads `path`, inferring the format when `format` is `None`.
pub fn parse_path(path: &Path, format: Option<Format>) -> Result<ComplexDocument> {
    let text = std::fs::read_to_string(path)?;
    let format = format.unwrap_or_else(|| Format::infer(path, &text));
    parse_str(&text, format)
}

fn parse_complex_json(text: &str) -> Result<ComplexDocument> {
    let raw: ComplexJson = serde_json::from_str(text).map_err(json_error)?;
    let simplices = raw
        .simplices
        .iter()
        .map(|s| Simplex::new(s.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let edge_weights = raw
        .edge_weights
        .map(|w| {
            w.into_iter()
                .map(|(a, b, x)| Ok((edge(a, b)?, x)))
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .transpose()?;
    let doc = ComplexDocument {
        format: Format::ComplexJson,
        simplices,
        coords: raw.coords,
        vertex_weights: raw.vertex_weights,
        edge_weights,
        labels: raw.labels,
        run_config: raw.run_config,
    };
    if let Some(n) = raw.n {
        let dim = doc.complex().dim();
        if dim != Some(n) {
            return Err(Error::Structure(format!(
                "declared n = {n} but the complex has dimension {dim:?}"
            )));
        }
    }
    Ok(doc)
}

fn parse_hyperedges(text: &str) -> Result<ComplexDocument> {
    let raw: Vec<Vec<VertexId>> = serde_json::from_str(text).map_err(json_error)?;
    let simplices = raw
        .iter()
        .map(|s| Simplex::new(s.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexDocument::bare(Format::HyperedgeList, simplices))
}

/// A token with its 1-based line and column.
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Whitespace tokens per non-empty line, with `#` comments removed.
fn token_lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, ch) in line.char_indices().chain([(line.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &line[s..j],
                        line: i + 1,
                        column: s + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

fn number<T: std::str::FromStr>(t: &Token, what: &str) -> Result<T> {
    t.text
        .parse()
        .map_err(|_| Error::parse(t.line, t.column, format!("expected {what}, found {:?}", t.text)))
}

fn parse_off(text: &str) -> Result<ComplexDocument> {
    let lines = token_lines(text);
    let mut it = lines.iter();
    let eof = || Error::parse(text.lines().count().max(1), 1, "unexpected end of input");
    let header = it.next().ok_or_else(eof)?;
    let mut counts: &[Token] = header;
    if header[0].text == "OFF" {
        counts = &header[1..];
        if counts.is_empty() {
            counts = it.next().ok_or_else(eof)?;
        }
    } else if !header[0].text.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return Err(Error::parse(header[0].line, header[0].column, "expected OFF header"));
    }
    if counts.len() < 2 {
        let t = &counts[counts.len().saturating_sub(1)];
        return Err(Error::parse(t.line, t.column, "expected vertex and face counts"));
    }
    let nv: usize = number(&counts[0], "vertex count")?;
    let nf: usize = number(&counts[1], "face count")?;
    let mut coords = BTreeMap::new();
    for id in 0..nv {
        let row = it.next().ok_or_else(eof)?;
        if row.len() != 3 {
            return Err(Error::parse(
                row[0].line,
                row[0].column,
                format!("expected 3 coordinates, found {}", row.len()),
            ));
        }
        let p = row
            .iter()
            .map(|t| number(t, "coordinate"))
            .collect::<Result<Vec<f64>>>()?;
        coords.insert(id as VertexId, p);
    }
    let mut simplices = Vec::with_capacity(nf);
    for _ in 0..nf {
        let row = it.next().ok_or_else(eof)?;
        let k: usize = number(&row[0], "face size")?;
        if k != 3 {
            return Err(Error::parse(
                row[0].line,
                row[0].column,
                format!("only triangle faces are supported, found {k}"),
            ));
        }
        if row.len() < 1 + k {
            return Err(Error::parse(row[0].line, row[0].column, "face has too few indices"));
        }
        let mut face = Vec::with_capacity(k);
        for t in &row[1..=k] {
            let v: usize = number(t, "vertex index")?;
            if v >= nv {
                return Err(Error::parse(t.line, t.column, format!("vertex index {v} out of range")));
            }
            face.push(v as VertexId);
        }
        simplices.push(Simplex::new(face)?);
    }
    Ok(ComplexDocument {
        coords: Some(coords),
        ..ComplexDocument::bare(Format::Off, simplices)
    })
}

/// `a b [weight]` per line. Integer tokens are vertex ids; if any endpoint
/// token is not an integer, all endpoints are symbols numbered from 0 in
/// order of first appearance and kept as labels.
fn parse_edge_list(text: &str) -> Result<ComplexDocument> {
    let lines = token_lines(text);
    for row in &lines {
        if row.len() < 2 || row.len() > 3 {
            return Err(Error::parse(
                row[0].line,
                row[0].column,
                "expected `a b` or `a b weight`",
            ));
        }
    }
    let symbolic = lines
        .iter()
        .any(|row| row[..2].iter().any(|t| t.text.parse::<VertexId>().is_err()));
    let mut table: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut id_of = |t: &Token<'_>| -> Result<VertexId> {
        if !symbolic {
            return number(t, "vertex id");
        }
        let next = table.len() as VertexId;
        let id = *table.entry(t.text.to_string()).or_insert(next);
        labels.entry(id).or_insert_with(|| t.text.to_string());
        Ok(id)
    };
    let mut simplices = Vec::new();
    let mut weights = BTreeMap::new();
    for row in &lines {
        let (a, b) = (id_of(&row[0])?, id_of(&row[1])?);
        let e = if a == b {
            return Err(Error::parse(row[1].line, row[1].column, "self loop"));
        } else {
            edge(a, b)?
        };
        if let Some(w) = row.get(2) {
            weights.insert(e.clone(), number::<f64>(w, "edge weight")?);
        }
        simplices.push(e);
    }
    if !weights.is_empty() && weights.len() != simplices.len() {
        let row = lines.iter().find(|r| r.len() == 2).expect("some row lacks a weight");
        return Err(Error::parse(
            row[0].line,
            row[0].column,
            "weights must be given for every edge or none",
        ));
    }
    Ok(ComplexDocument {
        edge_weights: (!weights.is_empty()).then_some(weights),
        labels: symbolic.then_some(labels),
        ..ComplexDocument::bare(Format::EdgeList, simplices)
    })
}
