//! The code's hierarchy: books, titles, chapters ... down to articles.

mod ids;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub(crate) use ids::{article_with_prefix, parse_chain, LEVEL_CONNECTOR, LEVEL_TOKEN};
pub use ids::{
    normalize_article, normalize_id, parse_hierarchy, parse_numeral, ArticleKey, HierarchyPath,
    MAX_ROMAN,
};

/// Schema tag of corpus documents.
pub const CORPUS_SCHEMA: &str = "codexgraph-corpus-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Code,
    Book,
    Title,
    Chapter,
    Section,
    Subsection,
    Paragraph,
    Article,
}

impl NodeKind {
    pub const ALL: [NodeKind; 8] = [
        NodeKind::Code,
        NodeKind::Book,
        NodeKind::Title,
        NodeKind::Chapter,
        NodeKind::Section,
        NodeKind::Subsection,
        NodeKind::Paragraph,
        NodeKind::Article,
    ];

    /// Depth of the level; children always have a strictly larger rank.
    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Code => "code",
            NodeKind::Book => "book",
            NodeKind::Title => "title",
            NodeKind::Chapter => "chapter",
            NodeKind::Section => "section",
            NodeKind::Subsection => "subsection",
            NodeKind::Paragraph => "paragraph",
            NodeKind::Article => "article",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown node kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusNode {
    pub id: String,
    pub kind: NodeKind,
    pub heading: String,
    /// Body text; `Some` exactly for articles.
    pub text: Option<String>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// An immutable, validated code hierarchy.
///
/// Nodes live in an arena in document (pre-)order; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    nodes: Vec<CorpusNode>,
    index: HashMap<String, usize>,
    /// Articles grouped by letter prefix and sorted by numeric key.
    articles_by_key: BTreeMap<ArticleKey, usize>,
}

/// Parses and validates a corpus document.
pub fn load_corpus(document: &str) -> Result<Corpus> {
    let value: Value = serde_json::from_str(document)?;
    Corpus::from_value(&value)
}

impl Corpus {
    pub fn from_value(value: &Value) -> Result<Corpus> {
        let top = value
            .as_object()
            .ok_or_else(|| schema("$", "expected an object"))?;
        match top.get("schema") {
            Some(Value::String(s)) if s == CORPUS_SCHEMA => {}
            Some(other) => {
                return Err(schema(
                    "$.schema",
                    format!("expected \"{CORPUS_SCHEMA}\", found {other}"),
                ))
            }
            None => return Err(schema("$.schema", "missing field")),
        }
        let root = top
            .get("root")
            .ok_or_else(|| schema("$.root", "missing field"))?;

        let mut builder = Builder::default();
        builder.visit(root, "$.root".to_string(), None)?;
        if builder.nodes[0].kind != NodeKind::Code {
            return Err(Error::Hierarchy {
                path: "$.root".into(),
                message: format!("root must be of kind code, found {}", builder.nodes[0].kind),
            });
        }
        let index = builder
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        let articles_by_key = builder
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.kind == NodeKind::Article)
            .filter_map(|(i, n)| ArticleKey::parse(&n.id).map(|k| (k, i)))
            .collect();
        Ok(Corpus {
            nodes: builder.nodes,
            index,
            articles_by_key,
        })
    }

    pub fn root(&self) -> &CorpusNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All nodes in document order, root first.
    pub fn nodes(&self) -> &[CorpusNode] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &CorpusNode {
        &self.nodes[idx]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&CorpusNode> {
        self.position(id).map(|i| &self.nodes[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn parent_of(&self, id: &str) -> Result<Option<&CorpusNode>> {
        let node = self.lookup(id)?;
        Ok(node.parent.map(|p| &self.nodes[p]))
    }

    fn lookup(&self, id: &str) -> Result<&CorpusNode> {
        self.get(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// The book a node belongs to: its nearest ancestor-or-self of kind book.
    pub fn book_of(&self, id: &str) -> Result<Option<&str>> {
        let mut cursor = Some(
            self.position(id)
                .ok_or_else(|| Error::UnknownNode(id.into()))?,
        );
        while let Some(i) = cursor {
            let node = &self.nodes[i];
            if node.kind == NodeKind::Book {
                return Ok(Some(&node.id));
            }
            cursor = node.parent;
        }
        Ok(None)
    }

    /// Node counts per kind. Every kind is present, possibly with zero.
    pub fn census(&self) -> BTreeMap<NodeKind, usize> {
        let mut counts: BTreeMap<NodeKind, usize> = NodeKind::ALL.iter().map(|&k| (k, 0)).collect();
        for node in &self.nodes {
            *counts.entry(node.kind).or_default() += 1;
        }
        counts
    }

    /// Articles sharing `lo`'s letter prefix whose key lies in `lo..=hi`,
    /// in key order.
    pub fn articles_in_range<'a>(
        &'a self,
        lo: &ArticleKey,
        hi: &ArticleKey,
    ) -> impl Iterator<Item = &'a CorpusNode> + 'a {
        let (lo, hi) = (lo.clone(), hi.clone());
        self.articles_by_key
            .range(lo..=hi)
            .map(move |(_, &i)| &self.nodes[i])
    }

    /// Serializes back to the corpus document format with canonical ids.
    pub fn to_value(&self) -> Value {
        json!({ "schema": CORPUS_SCHEMA, "root": self.node_value(0) })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("corpus serializes")
    }

    fn node_value(&self, idx: usize) -> Value {
        let node = &self.nodes[idx];
        let mut obj = Map::new();
        obj.insert("id".into(), Value::String(node.id.clone()));
        obj.insert("kind".into(), Value::String(node.kind.as_str().into()));
        obj.insert("heading".into(), Value::String(node.heading.clone()));
        if let Some(text) = &node.text {
            obj.insert("text".into(), Value::String(text.clone()));
        }
        if !node.children.is_empty() {
            let children = node.children.iter().map(|&c| self.node_value(c)).collect();
            obj.insert("children".into(), Value::Array(children));
        }
        Value::Object(obj)
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Default)]
struct Builder {
    nodes: Vec<CorpusNode>,
    seen: HashMap<String, String>,
}

impl Builder {
    fn visit(&mut self, value: &Value, path: String, parent: Option<usize>) -> Result<usize> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema(&path, "expected an object"))?;
        for key in obj.keys() {
            if !matches!(
                key.as_str(),
                "id" | "kind" | "heading" | "text" | "children"
            ) {
                return Err(schema(&format!("{path}.{key}"), "unknown field"));
            }
        }
        let raw_id = string_field(obj, "id", &path)?;
        let kind_str = string_field(obj, "kind", &path)?;
        let kind: NodeKind = kind_str.parse().map_err(|_| {
            schema(
                &format!("{path}.kind"),
                format!("unknown kind `{kind_str}`"),
            )
        })?;
        let heading = match obj.get("heading") {
            None => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(schema(&format!("{path}.heading"), "expected a string")),
        };
        let text = match (obj.get("text"), kind) {
            (None, NodeKind::Article) => Some(String::new()),
            (None, _) => None,
            (Some(Value::String(s)), NodeKind::Article) => Some(s.clone()),
            (Some(Value::String(_)), _) => {
                return Err(schema(&format!("{path}.text"), "only articles carry text"))
            }
            (Some(_), _) => return Err(schema(&format!("{path}.text"), "expected a string")),
        };
        let children = match obj.get("children") {
            None => &[][..],
            Some(Value::Array(items)) => items.as_slice(),
            Some(_) => return Err(schema(&format!("{path}.children"), "expected an array")),
        };

        let parent_node = parent.map(|p| &self.nodes[p]);
        if let Some(p) = parent_node {
            if kind.rank() <= p.kind.rank() {
                return Err(Error::Hierarchy {
                    path,
                    message: format!("a {} cannot contain a {}", p.kind, kind),
                });
            }
        }
        let id = canonical_id(raw_id, kind, parent_node, &path)?;
        if let Some(first) = self.seen.get(&id) {
            return Err(Error::DuplicateId {
                id,
                first: first.clone(),
                second: path,
            });
        }
        self.seen.insert(id.clone(), path.clone());

        let idx = self.nodes.len();
        self.nodes.push(CorpusNode {
            id,
            kind,
            heading,
            text,
            parent,
            children: Vec::new(),
        });
        if kind == NodeKind::Article && !children.is_empty() {
            return Err(Error::Hierarchy {
                path: format!("{path}.children"),
                message: "articles cannot have children".into(),
            });
        }
        for (i, child) in children.iter().enumerate() {
            let c = self.visit(child, format!("{path}.children[{i}]"), Some(idx))?;
            self.nodes[idx].children.push(c);
        }
        Ok(idx)
    }
}

fn string_field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(schema(&format!("{path}.{key}"), "expected a string")),
        None => Err(schema(&format!("{path}.{key}"), "missing field")),
    }
}

/// Normalizes a node id and checks it against the node's position: heading
/// ids are paths that extend their parent heading's path by one level of
/// the node's own kind.
fn canonical_id(
    raw: &str,
    kind: NodeKind,
    parent: Option<&CorpusNode>,
    path: &str,
) -> Result<String> {
    let hierarchy_err = |message: String| Error::Hierarchy {
        path: format!("{path}.id"),
        message,
    };
    match kind {
        NodeKind::Code => {
            let id = raw.trim();
            if id.is_empty() {
                return Err(schema(&format!("{path}.id"), "empty id"));
            }
            Ok(id.to_string())
        }
        NodeKind::Article => normalize_article(raw).ok_or_else(|| {
            schema(
                &format!("{path}.id"),
                format!("`{raw}` is not an article identifier"),
            )
        }),
        _ => {
            let parsed = parse_hierarchy(raw.trim())
                .map_err(|e| schema(&format!("{path}.id"), e.to_string()))?;
            if parsed.kind() != kind {
                return Err(hierarchy_err(format!(
                    "id `{parsed}` names a {}, node is a {kind}",
                    parsed.kind()
                )));
            }
            let expected_parent = match parent {
                Some(p) if p.kind != NodeKind::Code => Some(p.id.clone()),
                _ => None,
            };
            let actual_parent = parsed.parent().map(|p| p.to_string());
            if actual_parent != expected_parent {
                return Err(hierarchy_err(format!(
                    "id `{parsed}` does not extend its parent `{}`",
                    expected_parent.as_deref().unwrap_or("<code>")
                )));
            }
            Ok(parsed.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r#"{"schema": "codexgraph-corpus-v1", "root": {
            "id": "code", "kind": "code", "heading": "Code",
            "children": [{"id": "Book I", "kind": "book", "heading": "B",
              "children": [{"id": "book:1/title:1", "kind": "title", "heading": "T",
                "children": [{"id": "Chapter I of Title I of Book I", "kind": "chapter", "heading": "C",
                  "children": [{"id": "L. 111-1", "kind": "article", "heading": "A", "text": "x"}]}]}]}]}}"#
    }

    #[test]
    fn minimal_document() {
        let c = load_corpus(minimal()).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.contains("L111-1"));
        assert!(c.contains("book:1/title:1/chapter:1"));
        let census = c.census();
        assert_eq!(census[&NodeKind::Code], 1);
        assert_eq!(census[&NodeKind::Book], 1);
        assert_eq!(census[&NodeKind::Title], 1);
        assert_eq!(census[&NodeKind::Chapter], 1);
        assert_eq!(census[&NodeKind::Article], 1);
        assert_eq!(census.values().sum::<usize>(), c.len());
    }

    #[test]
    fn book_of_walks_up() {
        let c = load_corpus(minimal()).unwrap();
        assert_eq!(c.book_of("L111-1").unwrap(), Some("book:1"));
        assert_eq!(c.book_of("book:1").unwrap(), Some("book:1"));
        assert_eq!(c.book_of("code").unwrap(), None);
        assert!(matches!(c.book_of("L999-9"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn duplicate_ids_name_both_locations() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "L211-1", "kind": "article", "heading": ""},
                         {"id": "L. 211-1", "kind": "article", "heading": ""}]}}"#;
        match load_corpus(doc) {
            Err(Error::DuplicateId { id, first, second }) => {
                assert_eq!(id, "L211-1");
                assert_eq!(first, "$.root.children[0]");
                assert_eq!(second, "$.root.children[1]");
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn ascending_kind_is_rejected() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "book:1/chapter:1", "kind": "chapter", "heading": "",
              "children": [{"id": "book:1", "kind": "book", "heading": ""}]}]}}"#;
        assert!(matches!(load_corpus(doc), Err(Error::Hierarchy { .. })));
    }

    #[test]
    fn skipped_levels_are_fine() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "book:7", "kind": "book", "heading": "",
              "children": [{"id": "L711-1", "kind": "article", "heading": ""}]}]}}"#;
        let c = load_corpus(doc).unwrap();
        assert_eq!(c.get("L711-1").unwrap().text.as_deref(), Some(""));
    }

    #[test]
    fn positional_ids_must_extend_parent() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "book:1", "kind": "book", "heading": "",
              "children": [{"id": "book:2/title:1", "kind": "title", "heading": ""}]}]}}"#;
        assert!(matches!(load_corpus(doc), Err(Error::Hierarchy { .. })));
    }

    #[test]
    fn schema_errors_name_the_path() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "L1-1", "kind": "clause", "heading": ""}]}}"#;
        match load_corpus(doc) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.root.children[0].kind"),
            other => panic!("{other:?}"),
        }
        let doc = r#"{"schema": "other", "root": {}}"#;
        assert!(matches!(load_corpus(doc), Err(Error::Schema { path, .. }) if path == "$.schema"));
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "book:1", "kind": "book", "heading": "", "text": "no"}]}}"#;
        assert!(
            matches!(load_corpus(doc), Err(Error::Schema { path, .. }) if path == "$.root.children[0].text")
        );
        assert!(matches!(load_corpus("{"), Err(Error::Json(_))));
    }

    #[test]
    fn articles_cannot_have_children() {
        let doc = r#"{"schema": "codexgraph-corpus-v1", "root": {"id": "c", "kind": "code", "heading": "",
            "children": [{"id": "L1-1", "kind": "article", "heading": "",
              "children": [{"id": "L1-2", "kind": "article", "heading": ""}]}]}}"#;
        assert!(load_corpus(doc).is_err());
    }

    #[test]
    fn round_trip() {
        let c = load_corpus(minimal()).unwrap();
        let again = load_corpus(&c.to_json_pretty()).unwrap();
        assert_eq!(c, again);
    }
}
