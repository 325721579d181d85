//! The `.gog` document format: a JSON object with a `vertices` list (id
//! plus group descriptor) and an `edges` list of id pairs.
//!
//! ```json
//! {
//!   "vertices": [
//!     {"id": "a", "group": {"kind": "cyclic", "n": 2}},
//!     {"id": "b", "group": {"kind": "product",
//!                           "factors": [{"kind": "cyclic", "n": 2},
//!                                       {"kind": "cyclic", "n": 3}]}}
//!   ],
//!   "edges": [["a", "b"]]
//! }
//! ```
//!
//! Group descriptor kinds: `cyclic` (n), `dihedral` (n, order 2n),
//! `symmetric` (n), `quaternion8`, `product` (factors), `table` (explicit
//! multiplication table). Unknown fields are rejected. Serialization always
//! emits `table` descriptors, so parse(serialize(g)) reproduces the graph
//! of groups exactly.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};

use gog_core::{FiniteGroup, Graph, GraphOfGroups};

/// A vertex group may not exceed this order when built from a document.
pub const MAX_DOCUMENT_GROUP_ORDER: usize = 4096;

pub fn parse_gog(text: &str) -> Result<GraphOfGroups> {
    let value: Value = serde_json::from_str(text).context("parse error")?;
    let root = as_object(&value, "document")?;
    reject_unknown(root, &["vertices", "edges"], "document")?;

    let vertices = root
        .get("vertices")
        .ok_or_else(|| anyhow!("document: missing field `vertices`"))?;
    let vertices = vertices
        .as_array()
        .ok_or_else(|| anyhow!("document: `vertices` must be a list"))?;
    let mut ids = Vec::new();
    let mut groups = Vec::new();
    for (k, entry) in vertices.iter().enumerate() {
        let path = format!("vertices[{k}]");
        let obj = as_object(entry, &path)?;
        reject_unknown(obj, &["id", "group"], &path)?;
        let id = obj
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("{path}: missing string field `id`"))?;
        let group = obj
            .get("group")
            .ok_or_else(|| anyhow!("{path}: missing field `group`"))?;
        ids.push(id.to_string());
        groups.push(parse_group(group, &format!("{path}.group"))?);
    }

    let mut edges = Vec::new();
    let edge_list = root
        .get("edges")
        .ok_or_else(|| anyhow!("document: missing field `edges`"))?;
    let edge_list = edge_list
        .as_array()
        .ok_or_else(|| anyhow!("document: `edges` must be a list"))?;
    for (k, entry) in edge_list.iter().enumerate() {
        let path = format!("edges[{k}]");
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| anyhow!("{path}: an edge is a pair of vertex ids"))?;
        let a = pair[0]
            .as_str()
            .ok_or_else(|| anyhow!("{path}: endpoints must be strings"))?;
        let b = pair[1]
            .as_str()
            .ok_or_else(|| anyhow!("{path}: endpoints must be strings"))?;
        edges.push((a.to_string(), b.to_string()));
    }

    let graph = Graph::new(ids, edges).context("invalid graph")?;
    GraphOfGroups::new(graph, groups).context("invalid graph of groups")
}

fn as_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| anyhow!("{path}: expected an object"))
}

fn reject_unknown(obj: &Map<String, Value>, known: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            bail!("{path}: unknown field `{key}`");
        }
    }
    Ok(())
}

fn get_n(obj: &Map<String, Value>, path: &str) -> Result<usize> {
    obj.get("n")
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| anyhow!("{path}: missing integer field `n`"))
}

fn parse_group(value: &Value, path: &str) -> Result<FiniteGroup> {
    let obj = as_object(value, path)?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("{path}: missing string field `kind`"))?;
    let group = match kind {
        "cyclic" => {
            reject_unknown(obj, &["kind", "n"], path)?;
            FiniteGroup::cyclic(get_n(obj, path)?).with_context(|| path.to_string())?
        }
        "dihedral" => {
            reject_unknown(obj, &["kind", "n"], path)?;
            FiniteGroup::dihedral(get_n(obj, path)?).with_context(|| path.to_string())?
        }
        "symmetric" => {
            reject_unknown(obj, &["kind", "n"], path)?;
            FiniteGroup::symmetric(get_n(obj, path)?).with_context(|| path.to_string())?
        }
        "quaternion8" => {
            reject_unknown(obj, &["kind"], path)?;
            FiniteGroup::quaternion8()
        }
        "product" => {
            reject_unknown(obj, &["kind", "factors"], path)?;
            let factors = obj
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| anyhow!("{path}: missing list field `factors`"))?;
            if factors.is_empty() {
                bail!("{path}: a product needs at least one factor");
            }
            let mut acc: Option<FiniteGroup> = None;
            for (k, f) in factors.iter().enumerate() {
                let part = parse_group(f, &format!("{path}.factors[{k}]"))?;
                acc = Some(match acc {
                    None => part,
                    Some(p) => {
                        if p.order() * part.order() > MAX_DOCUMENT_GROUP_ORDER {
                            bail!(
                                "{path}: product order exceeds the document cap {MAX_DOCUMENT_GROUP_ORDER}"
                            );
                        }
                        p.direct_product(&part).with_context(|| path.to_string())?
                    }
                });
            }
            acc.unwrap()
        }
        "table" => {
            reject_unknown(obj, &["kind", "table"], path)?;
            let rows = obj
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| anyhow!("{path}: missing list field `table`"))?;
            if rows.len() > MAX_DOCUMENT_GROUP_ORDER {
                bail!("{path}: table exceeds the document cap {MAX_DOCUMENT_GROUP_ORDER}");
            }
            let mut parsed: Vec<Vec<usize>> = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| anyhow!("{path}.table[{i}]: expected a list"))?;
                let mut out = Vec::with_capacity(row.len());
                for (j, cell) in row.iter().enumerate() {
                    let x = cell
                        .as_u64()
                        .ok_or_else(|| anyhow!("{path}.table[{i}][{j}]: expected an index"))?;
                    out.push(x as usize);
                }
                parsed.push(out);
            }
            FiniteGroup::from_table(&parsed).with_context(|| path.to_string())?
        }
        other => bail!("{path}: unknown group kind `{other}`"),
    };
    Ok(group)
}

/// Serializes with explicit tables, so the round trip is exact.
pub fn serialize_gog(gog: &GraphOfGroups) -> String {
    let graph = gog.graph();
    let vertices: Vec<Value> = (0..gog.vertex_count())
        .map(|v| {
            let g = gog.group(v);
            let n = g.order();
            let table: Vec<Vec<u64>> = (0..n as u16)
                .map(|i| (0..n as u16).map(|j| u64::from(g.mul(i, j))).collect())
                .collect();
            json!({
                "id": graph.id_of(v),
                "group": {"kind": "table", "table": table},
            })
        })
        .collect();
    let edges: Vec<Value> = graph
        .edges()
        .into_iter()
        .map(|(u, v)| json!([graph.id_of(u), graph.id_of(v)]))
        .collect();
    serde_json::to_string_pretty(&json!({"vertices": vertices, "edges": edges}))
        .expect("document serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    const P3: &str = r#"{
        "vertices": [
            {"id": "a", "group": {"kind": "cyclic", "n": 2}},
            {"id": "b", "group": {"kind": "cyclic", "n": 2}},
            {"id": "c", "group": {"kind": "cyclic", "n": 2}}
        ],
        "edges": [["a", "b"], ["b", "c"]]
    }"#;

    #[test]
    fn parse_p3() {
        let gog = parse_gog(P3).unwrap();
        assert_eq!(gog.vertex_count(), 3);
        assert_eq!(gog.graph().edge_count(), 2);
        assert_eq!(gog.group(0).order(), 2);
    }

    #[test]
    fn parse_errors() {
        let trivial = r#"{"vertices": [{"id": "a", "group": {"kind": "cyclic", "n": 1}}], "edges": []}"#;
        let err = parse_gog(trivial).unwrap_err();
        assert!(format!("{err:#}").contains("trivial group"), "{err:#}");

        let unknown_edge =
            r#"{"vertices": [{"id": "a", "group": {"kind": "cyclic", "n": 2}}], "edges": [["a", "d"]]}"#;
        let err = parse_gog(unknown_edge).unwrap_err();
        assert!(format!("{err:#}").contains("not a listed vertex"), "{err:#}");

        let unknown_field =
            r#"{"vertices": [{"id": "a", "group": {"kind": "cyclic", "n": 2, "m": 3}}], "edges": []}"#;
        let err = parse_gog(unknown_field).unwrap_err();
        assert!(format!("{err:#}").contains("unknown field `m`"), "{err:#}");

        let syntax = parse_gog("{\n  \"vertices\": [,]\n}").unwrap_err();
        assert!(format!("{syntax:#}").contains("line"), "{syntax:#}");

        let bad_kind =
            r#"{"vertices": [{"id": "a", "group": {"kind": "sporadic"}}], "edges": []}"#;
        assert!(parse_gog(bad_kind).is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let docs = [
            P3,
            r#"{"vertices": [{"id": "v", "group": {"kind": "product", "factors": [
                {"kind": "cyclic", "n": 2}, {"kind": "symmetric", "n": 3}]}}], "edges": []}"#,
            r#"{"vertices": [{"id": "q", "group": {"kind": "quaternion8"}},
                             {"id": "d", "group": {"kind": "dihedral", "n": 4}}],
                 "edges": [["q", "d"]]}"#,
        ];
        for doc in docs {
            let gog = parse_gog(doc).unwrap();
            let text = serialize_gog(&gog);
            let back = parse_gog(&text).unwrap();
            assert_eq!(gog, back);
        }
    }
}
