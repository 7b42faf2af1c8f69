//! Versioned JSON documents for graphs and factorizations, plus DOT emission.

use serde::{Deserialize, Serialize};

use crate::edge_color::{Factorization, SimpleGraph};
use crate::factorizer::Certificate;
use crate::Error;

pub const GRAPH_SCHEMA: &str = "cayley-graph/1";
pub const FACTORIZATION_SCHEMA: &str = "cayley-factor/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub version: String,
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn new(g: &SimpleGraph) -> Self {
        GraphDoc {
            version: GRAPH_SCHEMA.into(),
            vertex_count: g.vertex_count,
            edges: g.edges().to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<SimpleGraph, Error> {
        if self.version != GRAPH_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {:?}, found {:?}",
                GRAPH_SCHEMA, self.version
            )));
        }
        SimpleGraph::new(self.vertex_count, self.edges.clone())
            .map_err(|e| Error::Schema(format!("invalid graph document: {}", e)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationDoc {
    pub version: String,
    pub group: String,
    pub generators: Vec<usize>,
    pub valence: usize,
    pub classes: Vec<Vec<(usize, usize)>>,
    pub certificate: Certificate,
}

impl FactorizationDoc {
    pub fn new(
        group: String,
        generators: Vec<usize>,
        valence: usize,
        factorization: &Factorization,
        certificate: Certificate,
    ) -> Self {
        FactorizationDoc {
            version: FACTORIZATION_SCHEMA.into(),
            group,
            generators,
            valence,
            classes: factorization.classes.clone(),
            certificate,
        }
    }

    pub fn check_schema(&self) -> Result<(), Error> {
        if self.version != FACTORIZATION_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {:?}, found {:?}",
                FACTORIZATION_SCHEMA, self.version
            )));
        }
        Ok(())
    }

    pub fn factorization(&self) -> Factorization {
        Factorization { classes: self.classes.clone() }
    }
}

/// Parses a JSON document, reporting malformed input as a schema error.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

/// An uncolored graph in DOT.
pub fn graph_to_dot(g: &SimpleGraph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", sanitize_dot_id(name));
    for v in 0..g.vertex_count {
        out.push_str(&format!("  {};\n", v));
    }
    for &(u, v) in g.edges() {
        out.push_str(&format!("  {} -- {};\n", u, v));
    }
    out.push_str("}\n");
    out
}

/// A factorization in DOT: every edge once, attributed `color=cN` by class.
pub fn factorization_to_dot(doc: &FactorizationDoc, vertex_count: usize) -> String {
    let mut out = format!("graph {} {{\n", sanitize_dot_id(&doc.group));
    for v in 0..vertex_count {
        out.push_str(&format!("  {};\n", v));
    }
    for (ci, class) in doc.classes.iter().enumerate() {
        for &(u, v) in class {
            out.push_str(&format!("  {} -- {} [color=c{}];\n", u, v, ci));
        }
    }
    out.push_str("}\n");
    out
}

fn sanitize_dot_id(name: &str) -> String {
    let cleaned: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    if cleaned.is_empty() || cleaned.chars().next().unwrap().is_ascii_digit() {
        format!("g_{}", cleaned)
    } else {
        cleaned
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizer::{factorize, verify_factorization};
    use crate::group::build_cyclic;
    use crate::cayley::build_cayley;

    #[test]
    fn graph_doc_round_trip() {
        let z4 = build_cyclic(4).unwrap();
        let g = build_cayley(&z4, &[1]).unwrap().to_simple();
        let doc = GraphDoc::new(&g);
        let json = to_json(&doc);
        let back: GraphDoc = from_json(&json).unwrap();
        let g2 = back.to_graph().unwrap();
        assert_eq!(g.edges(), g2.edges());
    }

    #[test]
    fn factorization_doc_round_trip() {
        let z4 = build_cyclic(4).unwrap();
        let out = factorize(&z4, &[1]).unwrap();
        let gamma = build_cayley(&z4, &[1]).unwrap();
        let doc = FactorizationDoc::new(
            "Z4".into(),
            vec![1],
            gamma.valence,
            &out.factorization,
            out.certificate,
        );
        let json = to_json(&doc);
        let back: FactorizationDoc = from_json(&json).unwrap();
        back.check_schema().unwrap();
        let report = verify_factorization(&gamma.to_simple(), back.valence, &back.factorization());
        assert!(report.violations.is_empty());
        // byte-identical re-serialization
        assert_eq!(json, to_json(&back));
    }

    #[test]
    fn schema_rejections() {
        assert!(from_json::<GraphDoc>("{ truncated").is_err());
        let doc = GraphDoc { version: "bogus/9".into(), vertex_count: 1, edges: vec![] };
        assert!(matches!(doc.to_graph(), Err(Error::Schema(_))));
    }

    #[test]
    fn dot_has_one_color_per_class() {
        let z4 = build_cyclic(4).unwrap();
        let out = factorize(&z4, &[1]).unwrap();
        let gamma = build_cayley(&z4, &[1]).unwrap();
        let doc = FactorizationDoc::new(
            "Z4".into(),
            vec![1],
            gamma.valence,
            &out.factorization,
            out.certificate,
        );
        let dot = factorization_to_dot(&doc, 4);
        let mut colors: Vec<&str> = dot
            .lines()
            .filter_map(|l| l.split("color=").nth(1))
            .map(|s| s.trim_end_matches("];"))
            .collect();
        let edge_lines = dot.lines().filter(|l| l.contains("--")).count();
        assert_eq!(edge_lines, gamma.edges.len());
        colors.sort_unstable();
        colors.dedup();
        assert_eq!(colors.len(), gamma.valence);
    }
}
