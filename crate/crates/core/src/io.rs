//! Hypergraph interchange format.
//!
//! A JSON object with `n`, `k`, `edges` (each edge strictly ascending) and an optional
//! `name`. Unknown fields are ignored. Canonical output lists edges lexicographically,
//! one per line.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<Vertex>>,
    #[serde(default)]
    name: Option<String>,
}

/// Upper bound on `n` accepted from files; keeps per-vertex tables bounded.
pub const MAX_FILE_VERTICES: usize = 1 << 20;

/// Parse and validate an interchange document.
pub fn from_json(text: &str) -> Result<Hypergraph> {
    let raw: RawHypergraph =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("interchange file: {e}")))?;
    value_to_hypergraph(raw)
}

/// Same as [`from_json`] for an already-parsed JSON value.
pub fn from_value(value: serde_json::Value) -> Result<Hypergraph> {
    let raw: RawHypergraph =
        serde_json::from_value(value).map_err(|e| Error::Parse(format!("interchange value: {e}")))?;
    value_to_hypergraph(raw)
}

fn value_to_hypergraph(raw: RawHypergraph) -> Result<Hypergraph> {
    if raw.n > MAX_FILE_VERTICES {
        return Err(Error::size(format!(
            "n = {} exceeds the interchange limit {MAX_FILE_VERTICES}",
            raw.n
        )));
    }
    let h = Hypergraph::new(raw.n, raw.k, raw.edges)?;
    Ok(match raw.name {
        Some(name) => h.with_name(name),
        None => h,
    })
}

/// Canonical serialization. Byte-identical for equal hypergraphs with equal names.
pub fn to_json(h: &Hypergraph) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"n\": {},", h.n());
    let _ = writeln!(out, "  \"k\": {},", h.k());
    if let Some(name) = h.name() {
        let quoted = serde_json::to_string(name).expect("string serializes");
        let _ = writeln!(out, "  \"name\": {quoted},");
    }
    if h.edges().is_empty() {
        out.push_str("  \"edges\": []\n");
    } else {
        out.push_str("  \"edges\": [\n");
        let last = h.edge_count() - 1;
        for (i, e) in h.edges().iter().enumerate() {
            let body: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let sep = if i == last { "" } else { "," };
            let _ = writeln!(out, "    [{}]{sep}", body.join(", "));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

/// Structured value of the canonical form, for embedding in reports.
pub fn to_value(h: &Hypergraph) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("n".into(), h.n().into());
    map.insert("k".into(), h.k().into());
    if let Some(name) = h.name() {
        map.insert("name".into(), name.into());
    }
    map.insert(
        "edges".into(),
        serde_json::Value::Array(
            h.edges()
                .iter()
                .map(|e| serde_json::Value::from(e.clone()))
                .collect(),
        ),
    );
    serde_json::Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fano;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_document() {
        let h = from_json(r#"{"n": 4, "k": 2, "edges": [[2,3],[0,1]]}"#).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(h.name(), None);
    }

    #[test]
    fn rejects_duplicates_and_disorder() {
        assert!(from_json(r#"{"n": 4, "k": 2, "edges": [[0,1],[0,1]]}"#).is_err());
        assert!(from_json(r#"{"n": 4, "k": 2, "edges": [[1,0]]}"#).is_err());
        assert!(from_json(r#"{"n": 4, "k": 2, "edges": [[0,4]]}"#).is_err());
        assert!(from_json(r#"{"n": 4, "edges": []}"#).is_err());
        assert!(from_json("not json").is_err());
        assert!(from_json(r#"{"n": -1, "k": 2, "edges": []}"#).is_err());
    }

    #[test]
    fn canonical_text() {
        let text = to_json(&fano());
        assert!(text.starts_with("{\n  \"n\": 7,\n  \"k\": 3,\n  \"name\": \"fano\",\n"));
        assert!(text.contains("    [0, 1, 2],\n"));
        let empty = to_json(&Hypergraph::empty(3, 2));
        assert_eq!(empty, "{\n  \"n\": 3,\n  \"k\": 2,\n  \"edges\": []\n}\n");
    }

    proptest! {
        #[test]
        fn roundtrip_is_identity(n in 1usize..9, k in 1usize..4, bits in proptest::collection::vec(any::<bool>(), 0..84)) {
            prop_assume!(k <= n);
            use itertools::Itertools;
            let edges: Vec<Vec<Vertex>> = (0..n as Vertex)
                .combinations(k)
                .zip(bits.iter().cycle())
                .filter(|(_, &b)| b)
                .map(|(e, _)| e)
                .collect();
            let h = Hypergraph::new(n, k, edges).unwrap().with_name("x\"y");
            let text = to_json(&h);
            let back = from_json(&text).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(back.name(), h.name());
            prop_assert_eq!(to_json(&back), text);
            prop_assert_eq!(from_value(to_value(&h)).unwrap(), h);
        }
    }
}
