//! Identifier normalization.
//!
//! Articles are canonicalized to `<LETTER><number>` (`L. 211-3` becomes
//! `L211-3`); hierarchy objects to positional paths such as
//! `book:1/title:3/chapter:3`.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;

use super::NodeKind;
use crate::error::{Error, Result};

/// Largest Roman numeral accepted in hierarchy references.
pub const MAX_ROMAN: u32 = 39;

static ARTICLE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?i:articles?\s+)?([A-Za-z])\s*\.?\s*(\d+(?:\s*-\s*\d+)*)$").unwrap()
});

static BARE_ARTICLE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?i:articles?\s+)?(\d+(?:\s*-\s*\d+)+)$").unwrap());

static CANONICAL_PATH: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[a-z]+:\d+(?:/[a-z]+:\d+)*$").unwrap());

/// One `level numeral` token of a written hierarchy reference.
pub(crate) const LEVEL_TOKEN: &str = r"(?i:\b(sous-section|subsection|section|paragraphe|paragraph|chapitre|chapter|titre|title|livre|book))\s+([IVXLCDM]+|\d+)(?:er)?\b";

/// Words allowed between two level tokens ("du", "of the", a comma...).
pub(crate) const LEVEL_CONNECTOR: &str =
    r"(?i:\s*,?\s*(?:du|de\s+la|de\s+l'|des|of\s+the|of)\s+|\s*,\s*)";

static LEVEL: LazyLock<Regex> = LazyLock::new(|| Regex::new(LEVEL_TOKEN).unwrap());
static CONNECTOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(&format!("^{LEVEL_CONNECTOR}$")).unwrap());

/// A positional path from a top-level heading down to a hierarchy node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HierarchyPath(Vec<(NodeKind, u32)>);

impl HierarchyPath {
    pub fn new(levels: Vec<(NodeKind, u32)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::normalization("", "empty hierarchy path"));
        }
        for (kind, _) in &levels {
            if matches!(kind, NodeKind::Code | NodeKind::Article) {
                return Err(Error::normalization(kind.as_str(), "not a hierarchy level"));
            }
        }
        for pair in levels.windows(2) {
            if pair[1].0.rank() <= pair[0].0.rank() {
                return Err(Error::normalization(
                    &format!("{}/{}", pair[0].0, pair[1].0),
                    "levels must descend the hierarchy",
                ));
            }
        }
        Ok(HierarchyPath(levels))
    }

    pub fn levels(&self) -> &[(NodeKind, u32)] {
        &self.0
    }

    pub fn kind(&self) -> NodeKind {
        self.0.last().expect("non-empty path").0
    }

    /// The path with its last level removed, if any remains.
    pub fn parent(&self) -> Option<HierarchyPath> {
        (self.0.len() > 1).then(|| HierarchyPath(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn starts_at_book(&self) -> bool {
        self.0[0].0 == NodeKind::Book
    }
}

impl fmt::Display for HierarchyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (kind, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{kind}:{n}")?;
        }
        Ok(())
    }
}

/// Sort key of an article identifier: letter prefix, then the numeric
/// groups (`L511-12` is `('L', [511, 12])`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArticleKey {
    pub prefix: char,
    pub parts: Vec<u64>,
}

impl ArticleKey {
    /// Parses an already normalized article id.
    pub fn parse(id: &str) -> Option<ArticleKey> {
        let mut chars = id.chars();
        let prefix = chars.next().filter(|c| c.is_ascii_uppercase())?;
        let rest = chars.as_str();
        let parts = rest
            .split('-')
            .map(|p| {
                if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                    None
                } else {
                    p.parse().ok()
                }
            })
            .collect::<Option<Vec<u64>>>()?;
        Some(ArticleKey { prefix, parts })
    }
}

/// Canonical identifier for an article or hierarchy reference.
///
/// Accepts `L. 211-3`, `l.211-3`, `Article L211-3`, canonical paths such as
/// `book:1/title:3`, and written chains such as
/// `Chapter III of Title III of Book I` or `chapitre III du titre III du livre Ier`.
///
/// ```
/// use codexgraph::corpus::normalize_id;
/// assert_eq!(normalize_id("L. 211-3").unwrap(), "L211-3");
/// assert_eq!(
///     normalize_id("Chapter III of Title III of Book I").unwrap(),
///     "book:1/title:3/chapter:3"
/// );
/// ```
pub fn normalize_id(raw: &str) -> Result<String> {
    let trimmed = raw.trim();
    if let Some(id) = normalize_article(trimmed) {
        return Ok(id);
    }
    if BARE_ARTICLE.is_match(trimmed) {
        return Err(Error::normalization(
            raw,
            "article number lacks a letter prefix",
        ));
    }
    parse_hierarchy(trimmed)
        .map(|p| p.to_string())
        .map_err(|e| match e {
            Error::Normalization { reason, .. } => Error::normalization(raw, reason),
            other => other,
        })
}

/// Article form of [`normalize_id`]; `None` when the text is not an article id.
pub fn normalize_article(raw: &str) -> Option<String> {
    let caps = ARTICLE.captures(raw.trim())?;
    let letter = caps[1].to_ascii_uppercase();
    let number: String = caps[2].chars().filter(|c| !c.is_whitespace()).collect();
    Some(format!("{letter}{number}"))
}

/// Joins a letter prefix to a bare article number (`211-1` with `L`).
pub(crate) fn article_with_prefix(prefix: char, number: &str) -> String {
    let number: String = number.chars().filter(|c| !c.is_whitespace()).collect();
    format!("{}{}", prefix.to_ascii_uppercase(), number)
}

/// Parses a canonical path or a written chain into a [`HierarchyPath`].
pub fn parse_hierarchy(text: &str) -> Result<HierarchyPath> {
    if CANONICAL_PATH.is_match(text) {
        return parse_canonical(text);
    }
    parse_chain(text)
}

fn parse_canonical(text: &str) -> Result<HierarchyPath> {
    let mut levels = Vec::new();
    for part in text.split('/') {
        let (kind, num) = part.split_once(':').expect("checked by regex");
        let kind: NodeKind = kind
            .parse()
            .map_err(|_| Error::normalization(text, format!("unknown level `{kind}`")))?;
        let n: u32 = num
            .parse()
            .map_err(|_| Error::normalization(text, "level number out of range"))?;
        if n == 0 {
            return Err(Error::normalization(text, "level numbers start at 1"));
        }
        levels.push((kind, n));
    }
    HierarchyPath::new(levels).map_err(|e| retag(e, text))
}

/// Written chains list levels from the innermost outwards:
/// `section 1 du chapitre III du titre Ier du livre II`.
pub(crate) fn parse_chain(text: &str) -> Result<HierarchyPath> {
    let mut levels = Vec::new();
    let mut cursor = 0;
    for caps in LEVEL.captures_iter(text) {
        let whole = caps.get(0).unwrap();
        let gap = &text[cursor..whole.start()];
        let gap_ok = if levels.is_empty() {
            gap.trim().is_empty()
        } else {
            CONNECTOR.is_match(gap)
        };
        if !gap_ok {
            return Err(Error::normalization(
                text,
                "unexpected words inside reference",
            ));
        }
        let kind = level_kind(&caps[1]);
        let n = parse_numeral(&caps[2]).map_err(|e| retag(e, text))?;
        levels.push((kind, n));
        cursor = whole.end();
    }
    if levels.is_empty() || !text[cursor..].trim().is_empty() {
        return Err(Error::normalization(
            text,
            "not an article or hierarchy reference",
        ));
    }
    levels.reverse();
    HierarchyPath::new(levels).map_err(|e| retag(e, text))
}

fn retag(e: Error, text: &str) -> Error {
    match e {
        Error::Normalization { reason, .. } => Error::normalization(text, reason),
        other => other,
    }
}

fn level_kind(word: &str) -> NodeKind {
    match word.to_ascii_lowercase().as_str() {
        "livre" | "book" => NodeKind::Book,
        "titre" | "title" => NodeKind::Title,
        "chapitre" | "chapter" => NodeKind::Chapter,
        "section" => NodeKind::Section,
        "sous-section" | "subsection" => NodeKind::Subsection,
        _ => NodeKind::Paragraph,
    }
}

/// Arabic numbers of any size, or canonical Roman numerals up to [`MAX_ROMAN`].
pub fn parse_numeral(token: &str) -> Result<u32> {
    let token = token.strip_suffix("er").unwrap_or(token);
    if token.bytes().all(|b| b.is_ascii_digit()) && !token.is_empty() {
        return match token.parse::<u32>() {
            Ok(0) | Err(_) => Err(Error::normalization(token, "invalid level number")),
            Ok(n) => Ok(n),
        };
    }
    let value =
        roman_value(token).ok_or_else(|| Error::normalization(token, "malformed Roman numeral"))?;
    if value > MAX_ROMAN {
        return Err(Error::normalization(
            token,
            format!("Roman numerals above {MAX_ROMAN} are not supported"),
        ));
    }
    Ok(value)
}

fn roman_value(token: &str) -> Option<u32> {
    fn digit(c: char) -> Option<u32> {
        Some(match c {
            'I' => 1,
            'V' => 5,
            'X' => 10,
            'L' => 50,
            'C' => 100,
            'D' => 500,
            'M' => 1000,
            _ => return None,
        })
    }
    if token.is_empty() {
        return None;
    }
    let values = token.chars().map(digit).collect::<Option<Vec<_>>>()?;
    let mut total = 0;
    for (i, v) in values.iter().enumerate() {
        match values.get(i + 1) {
            Some(next) if next > v => total -= *v as i64,
            _ => total += *v as i64,
        }
    }
    let total = u32::try_from(total).ok().filter(|&t| t > 0)?;
    // Reject non-canonical spellings such as IIII or VX.
    (to_roman(total) == token).then_some(total)
}

pub(crate) fn to_roman(mut n: u32) -> String {
    const TABLE: [(u32, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (value, glyph) in TABLE {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}
