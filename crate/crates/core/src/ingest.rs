//! From raw text and typed-dependency output to verb–noun pairs and a
//! formal context.
//!
//! Parsing itself happens elsewhere; this module reads the printed form
//! `rel(governor-idx, dependent-idx)` and keeps the relations whose governor
//! and dependent form a verb–noun pair.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use regex::Regex;
use thiserror::Error;

use crate::context::FormalContext;
use crate::wordnet::{Lemmatizer, Pos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenKind::Word => "word",
            TokenKind::Number => "number",
            TokenKind::Punctuation => "punct",
        })
    }
}

/// A token with byte offsets into the text it was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub kind: TokenKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub tokens: Vec<Token>,
}

fn starts_capitalized(rest: &str) -> bool {
    rest.trim_start()
        .chars()
        .next()
        .is_some_and(char::is_uppercase)
}

/// Splits `text` into sentences.
///
/// A sentence ends at a period that closes the text, at a period followed by
/// whitespace and a capitalized token, and at a newline followed by a
/// capitalized token. Whatever remains forms a final sentence. Spans exclude
/// surrounding whitespace, so sentences and the whitespace between them
/// cover the input exactly. Abbreviations are not special: `Dr. Smith` splits.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut bounds = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if i < start {
            continue;
        }
        let after = i + c.len_utf8();
        let rest = &text[after..];
        let boundary = match c {
            '.' => {
                rest.trim().is_empty()
                    || rest.starts_with(char::is_whitespace) && starts_capitalized(rest)
            }
            '\n' => starts_capitalized(rest),
            _ => false,
        };
        if boundary {
            // The newline itself is separator, the period belongs to the sentence.
            let end = if c == '.' { after } else { i };
            bounds.push((start, end));
            start = after;
        }
    }
    bounds.push((start, text.len()));
    bounds
        .into_iter()
        .filter_map(|(s, e)| {
            let piece = &text[s..e];
            let trimmed = piece.trim();
            if trimmed.is_empty() {
                return None;
            }
            let start = s + (piece.len() - piece.trim_start().len());
            let end = start + trimmed.len();
            Some(Sentence {
                text: trimmed.to_string(),
                start,
                end,
                tokens: tokenize_at(trimmed, start),
            })
        })
        .collect()
}

/// Splits on whitespace and cuts punctuation into single-character tokens.
/// Hyphens and apostrophes between letters or digits stay inside words, and
/// commas and periods between digits stay inside numbers.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_at(text, 0)
}

fn tokenize_at(text: &str, offset: usize) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (start, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if !c.is_alphanumeric() {
            let end = start + c.len_utf8();
            tokens.push(Token {
                text: text[start..end].to_string(),
                start: offset + start,
                end: offset + end,
                kind: TokenKind::Punctuation,
            });
            k += 1;
            continue;
        }
        let mut j = k + 1;
        while j < chars.len() {
            let c = chars[j].1;
            if c.is_alphanumeric() {
                j += 1;
                continue;
            }
            let prev = chars[j - 1].1;
            let next = chars.get(j + 1).map(|&(_, n)| n);
            let joins = match c {
                '-' | '\'' | '\u{2019}' => {
                    prev.is_alphanumeric() && next.is_some_and(char::is_alphanumeric)
                }
                ',' | '.' => prev.is_ascii_digit() && next.is_some_and(|n| n.is_ascii_digit()),
                _ => false,
            };
            if !joins {
                break;
            }
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(e, _)| e);
        let surface = &text[start..end];
        let kind = if surface
            .chars()
            .all(|c| c.is_ascii_digit() || c == ',' || c == '.')
        {
            TokenKind::Number
        } else {
            TokenKind::Word
        };
        tokens.push(Token {
            text: surface.to_string(),
            start: offset + start,
            end: offset + end,
            kind,
        });
        k = j;
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub base: String,
    pub subtype: Option<String>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subtype {
            Some(sub) => write!(f, "{}_{}", self.base, sub),
            None => f.write_str(&self.base),
        }
    }
}

/// A word of a parsed sentence with its 1-based position; 0 is ROOT.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexedWord {
    pub word: String,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyTriple {
    pub relation: Relation,
    pub governor: IndexedWord,
    pub dependent: IndexedWord,
    /// 0-based ordinal of the sentence within the file.
    pub sentence: usize,
}

fn triple_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"([A-Za-z][A-Za-z0-9]*)(?:[ _:]([A-Za-z0-9]+))?\(\s*(\S+?)-(\d+)'*\s*,\s*(\S+?)-(\d+)'*\s*\)",
        )
        .expect("valid pattern")
    })
}

/// Reads typed dependencies, one or more per line separated by commas.
/// A blank line starts a new sentence; lines starting with `#` are skipped.
pub fn parse_dependencies(text: &str) -> Result<Vec<DependencyTriple>, IngestError> {
    let re = triple_regex();
    let mut triples = Vec::new();
    let mut sentence = 0;
    let mut sentence_open = false;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            if sentence_open {
                sentence += 1;
                sentence_open = false;
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let mut last = 0;
        let mut found = false;
        for caps in re.captures_iter(trimmed) {
            let whole = caps.get(0).unwrap();
            let gap = &trimmed[last..whole.start()];
            if !gap.chars().all(|c| c.is_whitespace() || c == ',') || found && !gap.contains(',') {
                return Err(parse_error(line_no, trimmed));
            }
            last = whole.end();
            found = true;
            let index = |i: usize| {
                caps[i].parse::<u32>().map_err(|_| IngestError::Parse {
                    line: line_no,
                    message: format!("word index `{}` out of range", &caps[i]),
                })
            };
            triples.push(DependencyTriple {
                relation: Relation {
                    base: caps[1].to_string(),
                    subtype: caps.get(2).map(|m| m.as_str().to_string()),
                },
                governor: IndexedWord {
                    word: caps[3].to_string(),
                    index: index(4)?,
                },
                dependent: IndexedWord {
                    word: caps[5].to_string(),
                    index: index(6)?,
                },
                sentence,
            });
        }
        let tail = &trimmed[last..];
        if !found || !tail.chars().all(|c| c.is_whitespace() || c == ',') {
            return Err(parse_error(line_no, trimmed));
        }
        sentence_open = true;
    }
    Ok(triples)
}

fn parse_error(line: usize, text: &str) -> IngestError {
    IngestError::Parse {
        line,
        message: format!("expected `rel(word-idx, word-idx)`, found `{text}`"),
    }
}

/// Relations whose governor and dependent give a verb–noun pair.
pub const RELATION_WHITELIST: [&str; 19] = [
    "acomp",
    "agent",
    "conj",
    "cop",
    "csubj",
    "csubjpass",
    "dobj",
    "infmod",
    "nsubj",
    "nsubjpass",
    "parataxis",
    "partmod",
    "prepc",
    "purpcl",
    "rcmod",
    "rel",
    "tmod",
    "xcomp",
    "xsubj",
];

pub fn filter_triples(triples: &[DependencyTriple]) -> Vec<DependencyTriple> {
    triples
        .iter()
        .filter(|t| RELATION_WHITELIST.contains(&t.relation.base.as_str()))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSource {
    pub relation: String,
    pub sentence: usize,
}

/// A verb (attribute) and noun (object) seen together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPair {
    pub attribute: String,
    pub object: String,
    pub sources: Vec<PairSource>,
}

impl WordPair {
    pub fn new(attribute: impl Into<String>, object: impl Into<String>) -> Self {
        Self {
            attribute: attribute.into(),
            object: object.into(),
            sources: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    pub fold_case: bool,
}

/// Lemmatizes attributes as verbs and objects as nouns; a word without a
/// base form passes through unchanged. Duplicates collapse afterwards.
pub fn prune_pairs(pairs: Vec<WordPair>, lemmatizer: &dyn Lemmatizer) -> Vec<WordPair> {
    let pruned = pairs.into_iter().map(|mut p| {
        if let Some(lemma) = lemmatizer.lemmatize(&p.attribute, Pos::Verb) {
            p.attribute = lemma;
        }
        if let Some(lemma) = lemmatizer.lemmatize(&p.object, Pos::Noun) {
            p.object = lemma;
        }
        p
    });
    dedup_pairs(pruned)
}

/// Collapses pairs with equal (attribute, object), keeping first-occurrence
/// order and concatenating their sources.
pub fn dedup_pairs(pairs: impl IntoIterator<Item = WordPair>) -> Vec<WordPair> {
    let mut out: Vec<WordPair> = Vec::new();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for pair in pairs {
        let key = (pair.attribute.clone(), pair.object.clone());
        match seen.get(&key) {
            Some(&i) => {
                for s in pair.sources {
                    if !out[i].sources.contains(&s) {
                        out[i].sources.push(s);
                    }
                }
            }
            None => {
                seen.insert(key, out.len());
                out.push(pair);
            }
        }
    }
    out
}

/// The governor becomes the attribute and the dependent the object, except
/// for `cop`, whose dependent is the copular verb. Triples touching ROOT are
/// skipped.
pub fn extract_pairs(
    triples: &[DependencyTriple],
    lemmatizer: &dyn Lemmatizer,
    options: IngestOptions,
) -> Vec<WordPair> {
    let raw = triples
        .iter()
        .filter(|t| t.governor.index > 0 && t.dependent.index > 0)
        .map(|t| {
            let (verb, noun) = if t.relation.base == "cop" {
                (&t.dependent.word, &t.governor.word)
            } else {
                (&t.governor.word, &t.dependent.word)
            };
            let fold = |w: &String| {
                if options.fold_case {
                    w.to_lowercase()
                } else {
                    w.clone()
                }
            };
            WordPair {
                attribute: fold(verb),
                object: fold(noun),
                sources: vec![PairSource {
                    relation: t.relation.to_string(),
                    sentence: t.sentence,
                }],
            }
        });
    prune_pairs(raw.collect(), lemmatizer)
}

/// Objects and attributes in first-occurrence order; `(o, a)` is incident
/// iff the pair `(a, o)` occurs.
pub fn context_from_pairs(pairs: &[WordPair]) -> FormalContext {
    if pairs.is_empty() {
        log::warn!("no verb-noun pairs; the context is empty");
    }
    let mut objects: Vec<String> = Vec::new();
    let mut attributes: Vec<String> = Vec::new();
    let mut object_index: HashMap<&str, usize> = HashMap::new();
    let mut attribute_index: HashMap<&str, usize> = HashMap::new();
    let mut cells = Vec::with_capacity(pairs.len());
    for p in pairs {
        let o = *object_index.entry(&p.object).or_insert_with(|| {
            objects.push(p.object.clone());
            objects.len() - 1
        });
        let a = *attribute_index.entry(&p.attribute).or_insert_with(|| {
            attributes.push(p.attribute.clone());
            attributes.len() - 1
        });
        cells.push((o, a));
    }
    let mut rows = vec![FixedBitSet::with_capacity(attributes.len()); objects.len()];
    for (o, a) in cells {
        rows[o].insert(a);
    }
    FormalContext::from_bit_rows(objects, attributes, rows)
        .expect("labels are distinct by construction")
}

/// Every incident cell as a pair, objects in row order.
pub fn pairs_from_context(ctx: &FormalContext) -> Vec<WordPair> {
    let mut out = Vec::with_capacity(ctx.cell_count());
    for (i, object) in ctx.objects().iter().enumerate() {
        for j in ctx.row(i).ones() {
            out.push(WordPair::new(ctx.attributes()[j].clone(), object.clone()));
        }
    }
    out
}

/// Reads `attribute<TAB>object` lines; blank lines and `#` comments are
/// skipped. Each pair records its line number as the sentence ordinal.
pub fn read_pairs_tsv(text: &str, options: IngestOptions) -> Result<Vec<WordPair>, IngestError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(IngestError::Parse {
                line: line_no,
                message: format!("expected `attribute<TAB>object`, found `{line}`"),
            });
        }
        let fold = |w: &str| {
            if options.fold_case {
                w.to_lowercase()
            } else {
                w.to_string()
            }
        };
        pairs.push(WordPair {
            attribute: fold(fields[0]),
            object: fold(fields[1]),
            sources: vec![PairSource {
                relation: "pair".into(),
                sentence: line_no,
            }],
        });
    }
    Ok(dedup_pairs(pairs))
}

pub fn write_pairs_tsv(pairs: &[WordPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&p.attribute);
        out.push('\t');
        out.push_str(&p.object);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordnet::testdb::mini;
    use proptest::prelude::*;

    struct Identity;

    impl Lemmatizer for Identity {
        fn lemmatize(&self, _word: &str, _pos: Pos) -> Option<String> {
            None
        }
    }

    fn texts(sentences: &[Sentence]) -> Vec<&str> {
        sentences.iter().map(|s| s.text.as_str()).collect()
    }

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn sentence_rules() {
        assert_eq!(
            texts(&split_sentences(
                "The museum houses art. The building combines."
            )),
            ["The museum houses art.", "The building combines."]
        );
        assert_eq!(
            texts(&split_sentences("Dr. Smith arrived")),
            ["Dr.", "Smith arrived"]
        );
        assert_eq!(
            texts(&split_sentences("one line\nand more")),
            ["one line\nand more"]
        );
        assert_eq!(
            texts(&split_sentences("A heading\nThe body text")),
            ["A heading", "The body text"]
        );
        assert_eq!(
            texts(&split_sentences("about 3.5 km. then on")),
            ["about 3.5 km. then on"]
        );
        assert_eq!(texts(&split_sentences("Ends here.  \n")), ["Ends here."]);
        assert!(split_sentences("").is_empty());
        assert!(split_sentences(" \n ").is_empty());
    }

    #[test]
    fn sentence_offsets_point_into_input() {
        let text = "  First one. Second one\nThird";
        let sentences = split_sentences(text);
        assert_eq!(texts(&sentences), ["First one.", "Second one", "Third"]);
        for s in &sentences {
            assert_eq!(&text[s.start..s.end], s.text);
            for t in &s.tokens {
                assert_eq!(&text[t.start..t.end], t.text);
            }
        }
    }

    #[test]
    fn tokenizer_rules() {
        assert_eq!(
            surfaces(&tokenize("Bell, based in Los Angeles")),
            ["Bell", ",", "based", "in", "Los", "Angeles"]
        );
        let t = tokenize("55,000 museums");
        assert_eq!(surfaces(&t), ["55,000", "museums"]);
        assert_eq!(t[0].kind, TokenKind::Number);
        assert_eq!(t[1].kind, TokenKind::Word);
        assert_eq!(
            surfaces(&tokenize("a motor-bike isn't cheap.")),
            ["a", "motor-bike", "isn't", "cheap", "."]
        );
        assert_eq!(
            surfaces(&tokenize("(3.14) -x")),
            ["(", "3.14", ")", "-", "x"]
        );
        assert_eq!(surfaces(&tokenize("end, 1,")), ["end", ",", "1", ","]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn dependency_lines() {
        let triples =
            parse_dependencies("nsubj(distributes-10, Bell-1)\nprep in(based-3, Angeles-6)")
                .unwrap();
        assert_eq!(
            triples[0].relation,
            Relation {
                base: "nsubj".into(),
                subtype: None
            }
        );
        assert_eq!(
            triples[0].governor,
            IndexedWord {
                word: "distributes".into(),
                index: 10
            }
        );
        assert_eq!(
            triples[0].dependent,
            IndexedWord {
                word: "Bell".into(),
                index: 1
            }
        );
        assert_eq!(
            triples[1].relation,
            Relation {
                base: "prep".into(),
                subtype: Some("in".into())
            }
        );
        assert_eq!(triples[1].governor.index, 3);
        assert_eq!(triples[1].dependent.word, "Angeles");
    }

    #[test]
    fn dependency_variants() {
        let text = "root(ROOT-0, makes-8), conj_and(makes-8, sells-12)\n\npunct(based-3, ,-4)\nnn(motor-bike-3, old-2')\nprep:in(a-1, b-2)";
        let triples = parse_dependencies(text).unwrap();
        assert_eq!(triples.len(), 5);
        assert_eq!(triples[1].relation.subtype.as_deref(), Some("and"));
        assert_eq!(triples[1].sentence, 0);
        assert_eq!(triples[2].sentence, 1);
        assert_eq!(triples[2].dependent.word, ",");
        assert_eq!(triples[3].governor.word, "motor-bike");
        assert_eq!(triples[4].relation.subtype.as_deref(), Some("in"));
    }

    #[test]
    fn dependency_errors_report_line() {
        assert_eq!(
            parse_dependencies("nsubj(a-1, b-2)\nnsubj(distributes-10 Bell-1)"),
            Err(IngestError::Parse {
                line: 2,
                message: "expected `rel(word-idx, word-idx)`, found `nsubj(distributes-10 Bell-1)`"
                    .into()
            })
        );
        assert!(parse_dependencies("nsubj(a-1, b-2) junk").is_err());
        assert!(parse_dependencies("nsubj(a-1, b-2) dobj(c-3, d-4)").is_err());
        assert!(parse_dependencies("nsubj(a, b)").is_err());
        assert!(parse_dependencies("").unwrap().is_empty());
    }

    #[test]
    fn whitelist_filter() {
        let triples = parse_dependencies(
            "nsubj(a-2, b-1)\ndet(b-1, the-0)\namod(b-1, c-3)\nprepc_by(a-2, d-4)",
        )
        .unwrap();
        let kept = filter_triples(&triples);
        assert_eq!(
            kept.iter()
                .map(|t| t.relation.base.as_str())
                .collect::<Vec<_>>(),
            ["nsubj", "prepc"]
        );
    }

    #[test]
    fn pairs_are_lemmatized_and_deduplicated() {
        let triples = parse_dependencies(
            "nsubj(distributes-10, Bell-1)\ndobj(makes-8, products-16)\ndobj(makes-8, products-16)\ncop(museum-4, is-3)",
        )
        .unwrap();
        let pairs = extract_pairs(&triples, mini(), IngestOptions::default());
        let plain: Vec<(&str, &str)> = pairs
            .iter()
            .map(|p| (p.attribute.as_str(), p.object.as_str()))
            .collect();
        assert_eq!(
            plain,
            [
                ("distribute", "Bell"),
                ("make", "product"),
                ("be", "museum")
            ]
        );
        assert_eq!(pairs[1].sources.len(), 1);
    }

    #[test]
    fn provenance_merges_on_collapse() {
        let triples =
            parse_dependencies("dobj(drives-2, cars-3)\n\ndobj(driving-2, car-3)").unwrap();
        let pairs = extract_pairs(&triples, mini(), IngestOptions::default());
        assert_eq!(pairs.len(), 1);
        assert_eq!(
            (pairs[0].attribute.as_str(), pairs[0].object.as_str()),
            ("drive", "car")
        );
        assert_eq!(
            pairs[0]
                .sources
                .iter()
                .map(|s| s.sentence)
                .collect::<Vec<_>>(),
            [0, 1]
        );
    }

    #[test]
    fn prune_rules() {
        let pruned = prune_pairs(
            vec![
                WordPair::new("driving", "car"),
                WordPair::new("drive", "car"),
                WordPair::new("xyzzy", "car"),
            ],
            mini(),
        );
        let plain: Vec<(&str, &str)> = pruned
            .iter()
            .map(|p| (p.attribute.as_str(), p.object.as_str()))
            .collect();
        assert_eq!(plain, [("drive", "car"), ("xyzzy", "car")]);
    }

    #[test]
    fn fold_case_option() {
        let triples =
            parse_dependencies("nsubj(Houses-2, City-1)\nnsubj(houses-5, city-4)").unwrap();
        assert_eq!(
            extract_pairs(&triples, &Identity, IngestOptions::default()).len(),
            2
        );
        let folded = extract_pairs(&triples, &Identity, IngestOptions { fold_case: true });
        assert_eq!(folded.len(), 1);
        assert_eq!(folded[0].object, "city");
    }

    #[test]
    fn context_from_museum_pairs() {
        let pairs = [
            WordPair::new("house", "museum"),
            WordPair::new("house", "collection"),
            WordPair::new("combine", "building"),
        ];
        let ctx = context_from_pairs(&pairs);
        assert_eq!(ctx.objects(), ["museum", "collection", "building"]);
        assert_eq!(ctx.attributes(), ["house", "combine"]);
        assert_eq!(ctx.cell_count(), 3);
        assert_eq!(context_from_pairs(&[]), FormalContext::empty());
        let doubled: Vec<WordPair> = pairs.iter().chain(pairs.iter()).cloned().collect();
        assert_eq!(context_from_pairs(&doubled), ctx);
    }

    #[test]
    fn tsv_round_trip() {
        let text = "# museum corpus\nhouse\tmuseum\n\nhouse\tcollection\nhouse\tmuseum\n";
        let pairs = read_pairs_tsv(text, IngestOptions::default()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(
            write_pairs_tsv(&pairs),
            "house\tmuseum\nhouse\tcollection\n"
        );
        assert_eq!(
            read_pairs_tsv("house museum", IngestOptions::default()),
            Err(IngestError::Parse {
                line: 1,
                message: "expected `attribute<TAB>object`, found `house museum`".into()
            })
        );
    }

    fn arb_pairs() -> impl Strategy<Value = Vec<WordPair>> {
        proptest::collection::vec(("[a-e]", "[p-t]"), 0..25)
            .prop_map(|v| v.into_iter().map(|(a, o)| WordPair::new(a, o)).collect())
    }

    fn arb_triples() -> impl Strategy<Value = Vec<DependencyTriple>> {
        let rel = prop_oneof![
            Just("nsubj"),
            Just("dobj"),
            Just("det"),
            Just("amod"),
            Just("cop"),
            Just("prep"),
            Just("xcomp")
        ];
        proptest::collection::vec((rel, "[a-c]", "[x-z]", 1u32..5), 0..20).prop_map(|v| {
            v.into_iter()
                .map(|(r, g, d, i)| DependencyTriple {
                    relation: Relation {
                        base: r.to_string(),
                        subtype: None,
                    },
                    governor: IndexedWord { word: g, index: i },
                    dependent: IndexedWord {
                        word: d,
                        index: i + 1,
                    },
                    sentence: 0,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn split_is_lossless(text in "[A-Za-z .,\n]{0,80}") {
            let sentences = split_sentences(&text);
            let mut cursor = 0;
            for s in &sentences {
                prop_assert!(s.start >= cursor);
                prop_assert!(text[cursor..s.start].chars().all(char::is_whitespace));
                prop_assert_eq!(&text[s.start..s.end], s.text.as_str());
                cursor = s.end;
            }
            prop_assert!(text[cursor..].chars().all(char::is_whitespace));
        }

        #[test]
        fn tokens_reconstruct_span(text in "[A-Za-z0-9 ,.'()-]{0,60}") {
            let tokens = tokenize(&text);
            let mut cursor = 0;
            for t in &tokens {
                prop_assert!(t.start >= cursor && t.end > t.start);
                prop_assert!(text[cursor..t.start].chars().all(char::is_whitespace));
                prop_assert_eq!(&text[t.start..t.end], t.text.as_str());
                cursor = t.end;
            }
            prop_assert!(text[cursor..].chars().all(char::is_whitespace));
        }

        #[test]
        fn filter_is_whitelisted_and_idempotent(triples in arb_triples()) {
            let once = filter_triples(&triples);
            prop_assert!(once.iter().all(|t| RELATION_WHITELIST.contains(&t.relation.base.as_str())));
            prop_assert_eq!(filter_triples(&once), once);
        }

        #[test]
        fn extracted_pairs_are_distinct(triples in arb_triples()) {
            let pairs = extract_pairs(&filter_triples(&triples), &Identity, IngestOptions::default());
            let mut keys: Vec<_> = pairs.iter().map(|p| (&p.attribute, &p.object)).collect();
            let n = keys.len();
            keys.sort();
            keys.dedup();
            prop_assert_eq!(keys.len(), n);
        }

        #[test]
        fn context_pairs_fixpoint(pairs in arb_pairs()) {
            let ctx = context_from_pairs(&pairs);
            prop_assert_eq!(ctx.cell_count(), dedup_pairs(pairs.clone()).len());
            let again = context_from_pairs(&pairs_from_context(&ctx));
            prop_assert_eq!(context_from_pairs(&pairs_from_context(&again)), again.clone());
            prop_assert_eq!(again.cell_count(), ctx.cell_count());
        }
    }
}
