//! Seeded synthetic corpora with a planted block structure.
//!
//! Every chapter is one block. Two articles of the same chapter cite each
//! other with probability `p_in`, any other pair with probability `p_out`.
//! Hubs then cite `hub_degree` distinct articles each.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::CORPUS_SCHEMA;
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub books: usize,
    pub chapters_per_book: usize,
    pub articles_per_chapter: usize,
    pub p_in: f64,
    pub p_out: f64,
    #[serde(default)]
    pub hub_count: usize,
    #[serde(default)]
    pub hub_degree: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            books: 4,
            chapters_per_book: 1,
            articles_per_chapter: 30,
            p_in: 0.3,
            p_out: 0.01,
            hub_count: 0,
            hub_degree: 0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn article_count(&self) -> usize {
        self.books * self.chapters_per_book * self.articles_per_chapter
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Usage(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.books == 0 || self.chapters_per_book == 0 || self.articles_per_chapter == 0 {
            return Err(Error::Usage(
                "books, chapters and articles must all be >= 1".into(),
            ));
        }
        let n = self.article_count();
        if self.hub_count > n {
            return Err(Error::Usage(format!(
                "{} hubs requested among {n} articles",
                self.hub_count
            )));
        }
        if self.hub_count > 0 && self.hub_degree >= n {
            return Err(Error::Usage(format!(
                "hub_degree {} needs more than {n} articles",
                self.hub_degree
            )));
        }
        Ok(())
    }
}

/// Ground truth of a synthetic corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthTruth {
    /// Article id to block index (chapters numbered book-major from 0).
    pub blocks: BTreeMap<String, usize>,
    pub hubs: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub document: Value,
    pub truth: SynthTruth,
}

/// Article id of the `n`-th article (1-based) of chapter `c` of book `b`.
pub fn article_id(b: usize, c: usize, n: usize) -> String {
    format!("L{b}-{c}-{n}")
}

pub fn synth_corpus(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let mut rng = seed::rng(seed::stage_seed(spec.seed, seed::SYNTH));
    let mut ids = Vec::with_capacity(spec.article_count());
    let mut block = Vec::with_capacity(spec.article_count());
    for b in 1..=spec.books {
        for c in 1..=spec.chapters_per_book {
            for n in 1..=spec.articles_per_chapter {
                ids.push(article_id(b, c, n));
                block.push((b - 1) * spec.chapters_per_book + (c - 1));
            }
        }
    }
    let total = ids.len();

    // cites[i] holds the articles that article i's text refers to
    let mut cites: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    for i in 0..total {
        for j in i + 1..total {
            let p = if block[i] == block[j] {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.gen_bool(p) {
                if rng.gen_bool(0.5) {
                    cites[i].insert(j);
                } else {
                    cites[j].insert(i);
                }
            }
        }
    }
    let hubs: Vec<usize> = sample(&mut rng, total, spec.hub_count).into_vec();
    for &h in &hubs {
        let mut targets = sample(&mut rng, total - 1, spec.hub_degree).into_vec();
        targets.sort_unstable();
        for t in targets {
            cites[h].insert(if t >= h { t + 1 } else { t });
        }
    }

    let mut books = Vec::with_capacity(spec.books);
    let mut next = 0;
    for b in 1..=spec.books {
        let mut chapters = Vec::with_capacity(spec.chapters_per_book);
        for c in 1..=spec.chapters_per_book {
            let mut articles = Vec::with_capacity(spec.articles_per_chapter);
            for _ in 0..spec.articles_per_chapter {
                articles.push(json!({
                    "id": ids[next],
                    "kind": "article",
                    "heading": format!("Article {}", ids[next]),
                    "text": article_text(cites[next].iter().map(|&t| ids[t].as_str())),
                }));
                next += 1;
            }
            chapters.push(json!({
                "id": format!("book:{b}/chapter:{c}"),
                "kind": "chapter",
                "heading": format!("Chapitre {c}"),
                "children": articles,
            }));
        }
        books.push(json!({
            "id": format!("book:{b}"),
            "kind": "book",
            "heading": format!("Livre {b}"),
            "children": chapters,
        }));
    }
    let document = json!({
        "schema": CORPUS_SCHEMA,
        "root": {
            "id": "synthetic-code",
            "kind": "code",
            "heading": "Code synthétique",
            "children": books,
        }
    });
    Ok(SynthCorpus {
        document,
        truth: SynthTruth {
            blocks: ids.iter().cloned().zip(block).collect(),
            hubs: hubs.iter().map(|&h| ids[h].clone()).collect(),
            seed: spec.seed,
        },
    })
}

fn article_text<'a>(targets: impl Iterator<Item = &'a str>) -> String {
    let sentences: Vec<String> = targets
        .map(|t| format!("Les dispositions de l'article {t} sont applicables."))
        .collect();
    if sentences.is_empty() {
        "Le présent article ne renvoie à aucune autre disposition.".into()
    } else {
        sentences.join(" ")
    }
}
