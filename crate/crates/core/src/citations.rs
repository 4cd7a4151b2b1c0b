//! Explicit cross-references between objects of the code.
//!
//! Two surface forms are recognized, in French or English:
//!
//! * article references introduced by `article(s)`, possibly enumerated
//!   (`articles L. 211-2, L. 211-3 et L. 211-4`) or given as a range
//!   (`articles L. 511-1 à L. 517-2`);
//! * hierarchy chains ending at a book
//!   (`chapitre III du titre III du livre Ier`, `Chapter III of Title III of Book I`).

use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use crate::corpus::{
    article_with_prefix, parse_chain, ArticleKey, Corpus, NodeKind, LEVEL_CONNECTOR, LEVEL_TOKEN,
};
use crate::error::{Error, Result};

static ARTICLE_KEYWORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\barticles?\s+").unwrap());

static ARTICLE_ITEM: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:([LRDlrd])\.?\s?)?(\d+(?:-\d+)+)\b").unwrap());

static RANGE_CONNECTOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s+(?:à|a|to)\s+").unwrap());

static LIST_CONNECTOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:\s*,\s*(?:(?:et|and)\s+)?|\s+(?:et|and)\s+)").unwrap());

static CHAIN: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!("{LEVEL_TOKEN}(?:{LEVEL_CONNECTOR}{LEVEL_TOKEN})*")).unwrap()
});

/// An article number as written: optional letter prefix plus digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WrittenArticle {
    pub prefix: Option<char>,
    pub number: String,
}

impl WrittenArticle {
    /// Canonical id, borrowing `default_prefix` for bare numbers.
    fn resolve_id(&self, default_prefix: Option<char>) -> Option<String> {
        let prefix = self.prefix.or(default_prefix)?;
        Some(article_with_prefix(prefix, &self.number))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum ReferenceForm {
    Article(WrittenArticle),
    Range {
        from: WrittenArticle,
        to: WrittenArticle,
    },
    Hierarchy,
}

/// One reference expression found in a text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RawReference {
    /// The matched text.
    pub span: String,
    /// Character (not byte) offset of the span in the text.
    pub offset: usize,
    pub form: ReferenceForm,
}

/// A resolved reference from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitationRef {
    pub source: String,
    pub target: String,
    pub raw_span: String,
    pub span_offset: usize,
}

/// A reference that did not become a citation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppedRef {
    pub source: String,
    pub raw_span: String,
    pub span_offset: usize,
    /// The canonical id the span normalized to, when it did.
    pub normalized: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExtractionReport {
    pub resolved: Vec<CitationRef>,
    /// Well-formed references to objects outside the corpus.
    pub external_dropped: Vec<DroppedRef>,
    /// Matched spans that could not be normalized.
    pub unparsed: Vec<DroppedRef>,
    /// References of an article to itself.
    pub self_refs: Vec<DroppedRef>,
}

impl ExtractionReport {
    pub fn self_ref_count(&self) -> usize {
        self.self_refs.len()
    }

    fn append(&mut self, other: ExtractionReport) {
        self.resolved.extend(other.resolved);
        self.external_dropped.extend(other.external_dropped);
        self.unparsed.extend(other.unparsed);
        self.self_refs.extend(other.self_refs);
    }

    /// Number of distinct matched spans, counting a range that expanded to
    /// several targets once.
    pub fn span_count(&self) -> usize {
        let mut spans: Vec<(&str, usize)> = self
            .resolved
            .iter()
            .map(|r| (r.source.as_str(), r.span_offset))
            .chain(
                self.external_dropped
                    .iter()
                    .chain(&self.unparsed)
                    .chain(&self.self_refs)
                    .map(|d| (d.source.as_str(), d.span_offset)),
            )
            .collect();
        spans.sort_unstable();
        spans.dedup();
        spans.len()
    }
}

/// Every reference expression in `text`, in order of appearance.
pub fn extract_references(text: &str) -> Vec<RawReference> {
    let mut found: Vec<(usize, usize, ReferenceForm)> = Vec::new();

    for kw in ARTICLE_KEYWORD.find_iter(text) {
        let mut start = kw.start();
        let mut pos = kw.end();
        while let Some((item, mut end)) = article_item(text, pos) {
            let mut form = ReferenceForm::Article(item.clone());
            if let Some(conn) = RANGE_CONNECTOR.find(&text[end..]) {
                if let Some((upper, upper_end)) = article_item(text, end + conn.end()) {
                    form = ReferenceForm::Range {
                        from: item,
                        to: upper,
                    };
                    end = upper_end;
                }
            }
            found.push((start, end, form));
            match LIST_CONNECTOR.find(&text[end..]) {
                Some(conn) if article_item(text, end + conn.end()).is_some() => {
                    start = end + conn.end();
                    pos = start;
                }
                _ => break,
            }
        }
    }

    for m in CHAIN.find_iter(text) {
        found.push((m.start(), m.end(), ReferenceForm::Hierarchy));
    }

    found.sort_by_key(|(start, _, _)| *start);
    found
        .into_iter()
        .map(|(start, end, form)| RawReference {
            span: text[start..end].to_string(),
            offset: text[..start].chars().count(),
            form,
        })
        .collect()
}

fn article_item(text: &str, at: usize) -> Option<(WrittenArticle, usize)> {
    let caps = ARTICLE_ITEM.captures(&text[at..])?;
    let prefix = caps
        .get(1)
        .map(|m| m.as_str().chars().next().unwrap().to_ascii_uppercase());
    let item = WrittenArticle {
        prefix,
        number: caps[2].to_string(),
    };
    Some((item, at + caps.get(0).unwrap().end()))
}

/// Resolves the expressions found in `source`'s text against the corpus.
pub fn resolve(
    corpus: &Corpus,
    source: &str,
    expressions: &[RawReference],
) -> Result<ExtractionReport> {
    let node = corpus
        .get(source)
        .ok_or_else(|| Error::UnknownNode(source.to_string()))?;
    let own_prefix = match node.kind {
        NodeKind::Article => ArticleKey::parse(&node.id).map(|k| k.prefix),
        _ => None,
    };
    let mut report = ExtractionReport::default();

    for expr in expressions {
        let dropped = |normalized: Option<String>| DroppedRef {
            source: source.to_string(),
            raw_span: expr.span.clone(),
            span_offset: expr.offset,
            normalized,
        };
        let cite = |target: &str| CitationRef {
            source: source.to_string(),
            target: target.to_string(),
            raw_span: expr.span.clone(),
            span_offset: expr.offset,
        };

        match &expr.form {
            ReferenceForm::Article(item) => match item.resolve_id(own_prefix) {
                None => report.unparsed.push(dropped(None)),
                Some(id) if id == source => report.self_refs.push(dropped(Some(id))),
                Some(id) if corpus.contains(&id) => report.resolved.push(cite(&id)),
                Some(id) => report.external_dropped.push(dropped(Some(id))),
            },
            ReferenceForm::Range { from, to } => {
                let bounds = from
                    .resolve_id(own_prefix)
                    .zip(to.resolve_id(own_prefix))
                    .and_then(|(lo, hi)| Some((ArticleKey::parse(&lo)?, ArticleKey::parse(&hi)?)))
                    .filter(|(lo, hi)| lo.prefix == hi.prefix && lo <= hi);
                let Some((lo, hi)) = bounds else {
                    report.unparsed.push(dropped(None));
                    continue;
                };
                let mut hit_self = false;
                let mut targets = Vec::new();
                for article in corpus.articles_in_range(&lo, &hi) {
                    if article.id == source {
                        hit_self = true;
                    } else {
                        targets.push(cite(&article.id));
                    }
                }
                let label = || {
                    format!(
                        "{}..{}",
                        from.resolve_id(own_prefix).unwrap_or_default(),
                        to.resolve_id(own_prefix).unwrap_or_default()
                    )
                };
                if !targets.is_empty() {
                    report.resolved.extend(targets);
                } else if hit_self {
                    report.self_refs.push(dropped(Some(source.to_string())));
                } else {
                    report.external_dropped.push(dropped(Some(label())));
                }
            }
            ReferenceForm::Hierarchy => match parse_chain(&expr.span) {
                Err(_) => report.unparsed.push(dropped(None)),
                // Chains not anchored at a book are relative and left alone.
                Ok(path) if !path.starts_at_book() => report.unparsed.push(dropped(None)),
                Ok(path) => {
                    let id = path.to_string();
                    if id == source {
                        report.self_refs.push(dropped(Some(id)));
                    } else if corpus.contains(&id) {
                        report.resolved.push(cite(&id));
                    } else {
                        report.external_dropped.push(dropped(Some(id)));
                    }
                }
            },
        }
    }
    Ok(report)
}

/// Extraction over the text of every article, merged in document order.
pub fn extract_all(corpus: &Corpus) -> ExtractionReport {
    let per_article: Vec<ExtractionReport> = corpus
        .nodes()
        .par_iter()
        .filter(|n| n.kind == NodeKind::Article)
        .map(|n| {
            let text = n.text.as_deref().unwrap_or("");
            resolve(corpus, &n.id, &extract_references(text)).expect("source is a corpus node")
        })
        .collect();
    let mut report = ExtractionReport::default();
    for r in per_article {
        report.append(r);
    }
    report
}

/// Writes one CSV row per reference outcome:
/// `source,target,raw_span,offset,status`.
pub fn write_csv<W: std::io::Write>(report: &ExtractionReport, out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        source: &'a str,
        target: &'a str,
        raw_span: &'a str,
        offset: usize,
        status: &'static str,
    }
    let mut rows: Vec<Row> = Vec::new();
    for r in &report.resolved {
        rows.push(Row {
            source: &r.source,
            target: &r.target,
            raw_span: &r.raw_span,
            offset: r.span_offset,
            status: "resolved",
        });
    }
    for (list, status) in [
        (&report.external_dropped, "external"),
        (&report.unparsed, "unparsed"),
        (&report.self_refs, "self"),
    ] {
        for d in list {
            rows.push(Row {
                source: &d.source,
                target: d.normalized.as_deref().unwrap_or(""),
                raw_span: &d.raw_span,
                offset: d.span_offset,
                status,
            });
        }
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
