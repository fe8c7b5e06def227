//! Reader for Princeton WordNet database (WNDB) files, nouns and verbs only.
//!
//! Loads `index.{noun,verb}`, `data.{noun,verb}` and `{noun,verb}.exc` from a
//! dictionary directory into memory. Only hypernym pointers (`@` and the
//! instance variant `@i`) are kept from each synset's pointer list.

mod lexicon;
mod morphy;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use lexicon::{NoRelations, RelatednessLexicon, StaticLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
}

impl Pos {
    fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Pos::Noun => "n",
            Pos::Verb => "v",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub offset: u32,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    /// Member lemmas as written in the data file (collocations joined by `_`).
    pub words: Vec<String>,
    pub hypernyms: Vec<SynsetId>,
    pub gloss: String,
}

impl Synset {
    /// Position of `lemma` (already normalised) among the members.
    fn position(&self, lemma: &str) -> Option<usize> {
        self.words.iter().position(|w| normalize(w) == lemma)
    }
}

#[derive(Debug, Error)]
pub enum WordNetError {
    #[error("missing WordNet database file {0}")]
    MissingDatabaseFile(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: PathBuf,
        line: usize,
        message: String,
    },
}

/// Lower-cases a word and joins multi-word expressions with `_`, the way
/// WNDB index files spell lemmas.
pub fn normalize(word: &str) -> String {
    word.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

/// Maps a surface word to a base form.
pub trait Lemmatizer: Send + Sync {
    fn lemmatize(&self, word: &str, pos: Pos) -> Option<String>;
}

/// An in-memory WordNet database restricted to nouns and verbs.
#[derive(Debug, Clone, Default)]
pub struct WordNetDb {
    index: HashMap<(Pos, String), Vec<SynsetId>>,
    synsets: HashMap<SynsetId, Synset>,
    exceptions: HashMap<(Pos, String), Vec<String>>,
}

const FILES: [&str; 6] = [
    "index.noun",
    "data.noun",
    "index.verb",
    "data.verb",
    "noun.exc",
    "verb.exc",
];

impl WordNetDb {
    /// The dictionary directory under a WordNet installation root: `dir/dict`
    /// when it holds the database files, otherwise `dir` itself.
    pub fn locate(dir: impl AsRef<Path>) -> PathBuf {
        let dir = dir.as_ref();
        let dict = dir.join("dict");
        if dict.join("data.noun").is_file() {
            dict
        } else {
            dir.to_path_buf()
        }
    }

    /// Loads a WNDB dictionary directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, WordNetError> {
        let dir = dir.as_ref();
        for name in FILES {
            let path = dir.join(name);
            if !path.is_file() {
                return Err(WordNetError::MissingDatabaseFile(path));
            }
        }
        let mut db = WordNetDb::default();
        for pos in [Pos::Noun, Pos::Verb] {
            let data_path = dir.join(format!("data.{}", pos.file_suffix()));
            db.load_data(pos, &data_path, &read(&data_path)?)?;
            let index_path = dir.join(format!("index.{}", pos.file_suffix()));
            db.load_index(pos, &index_path, &read(&index_path)?)?;
            let exc_path = dir.join(format!("{}.exc", pos.file_suffix()));
            db.load_exceptions(pos, &exc_path, &read(&exc_path)?)?;
        }
        db.check_hypernyms()?;
        Ok(db)
    }

    fn load_data(&mut self, pos: Pos, path: &Path, text: &str) -> Result<(), WordNetError> {
        let mut byte_offset = 0usize;
        for (n, raw) in text.split_inclusive('\n').enumerate() {
            let start = byte_offset;
            byte_offset += raw.len();
            let line = raw.trim_end_matches(['\n', '\r']);
            if line.starts_with("  ") || line.is_empty() {
                continue;
            }
            let synset = parse_data_line(pos, line).map_err(|message| WordNetError::Parse {
                file: path.to_path_buf(),
                line: n + 1,
                message,
            })?;
            if synset.id.offset as usize != start {
                return Err(WordNetError::Parse {
                    file: path.to_path_buf(),
                    line: n + 1,
                    message: format!(
                        "synset offset {:08} does not match byte position {start}",
                        synset.id.offset
                    ),
                });
            }
            if !raw.ends_with('\n') {
                return Err(WordNetError::Parse {
                    file: path.to_path_buf(),
                    line: n + 1,
                    message: "truncated final line".into(),
                });
            }
            self.synsets.insert(synset.id, synset);
        }
        Ok(())
    }

    fn load_index(&mut self, pos: Pos, path: &Path, text: &str) -> Result<(), WordNetError> {
        for (n, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let err = |message: String| WordNetError::Parse {
                file: path.to_path_buf(),
                line: n + 1,
                message,
            };
            let (lemma, ids) = parse_index_line(pos, line).map_err(err)?;
            if let Some(missing) = ids.iter().find(|id| !self.synsets.contains_key(id)) {
                return Err(err(format!(
                    "synset {:08} not found in data file",
                    missing.offset
                )));
            }
            self.index.insert((pos, lemma), ids);
        }
        Ok(())
    }

    fn load_exceptions(&mut self, pos: Pos, path: &Path, text: &str) -> Result<(), WordNetError> {
        for (n, line) in text.lines().enumerate() {
            let mut fields = line.split_whitespace();
            let Some(inflected) = fields.next() else {
                continue;
            };
            let bases: Vec<String> = fields.map(str::to_string).collect();
            if bases.is_empty() {
                return Err(WordNetError::Parse {
                    file: path.to_path_buf(),
                    line: n + 1,
                    message: format!("exception `{inflected}` lists no base form"),
                });
            }
            self.exceptions
                .entry((pos, inflected.to_string()))
                .or_default()
                .extend(bases);
        }
        Ok(())
    }

    fn check_hypernyms(&self) -> Result<(), WordNetError> {
        for synset in self.synsets.values() {
            if let Some(bad) = synset
                .hypernyms
                .iter()
                .find(|h| !self.synsets.contains_key(h))
            {
                return Err(WordNetError::Parse {
                    file: PathBuf::from(format!("data.{}", synset.id.pos.file_suffix())),
                    line: 0,
                    message: format!(
                        "synset {:08} points to missing hypernym {:08}",
                        synset.id.offset, bad.offset
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn lemma_count(&self, pos: Pos) -> usize {
        self.index.keys().filter(|(p, _)| *p == pos).count()
    }

    /// Synsets listed in the index for `lemma`, in sense order. Spaces and,
    /// failing that, hyphens are read as `_`.
    pub fn lookup(&self, lemma: &str, pos: Pos) -> &[SynsetId] {
        let key = normalize(lemma);
        if let Some(ids) = self.index.get(&(pos, key.clone())) {
            return ids;
        }
        if key.contains('-') {
            if let Some(ids) = self.index.get(&(pos, key.replace('-', "_"))) {
                return ids;
            }
        }
        &[]
    }

    pub fn is_indexed(&self, lemma: &str, pos: Pos) -> bool {
        !self.lookup(lemma, pos).is_empty()
    }

    pub(crate) fn exceptions_for(&self, word: &str, pos: Pos) -> Option<&[String]> {
        self.exceptions
            .get(&(pos, word.to_string()))
            .map(Vec::as_slice)
    }

    /// Senses of a word: direct index lookup, else those of its first base form.
    fn senses(&self, word: &str, pos: Pos) -> Vec<SynsetId> {
        let direct = self.lookup(word, pos);
        if !direct.is_empty() {
            return direct.to_vec();
        }
        self.morphy(word, pos)
            .first()
            .map(|base| self.lookup(base, pos).to_vec())
            .unwrap_or_default()
    }
}

fn read(path: &Path) -> Result<String, WordNetError> {
    fs::read_to_string(path).map_err(|source| WordNetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_offset(field: &str) -> Result<u32, String> {
    if field.len() != 8 || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{field}` is not an 8-digit synset offset"));
    }
    field.parse().map_err(|e| format!("{e}"))
}

fn pos_from_tag(tag: &str) -> Option<Pos> {
    match tag {
        "n" => Some(Pos::Noun),
        "v" => Some(Pos::Verb),
        _ => None,
    }
}

/// `offset lex_filenum ss_type w_cnt (word lex_id)+ p_cnt (ptr)* [frames] | gloss`
fn parse_data_line(pos: Pos, line: &str) -> Result<Synset, String> {
    let (head, gloss) = match line.split_once(" | ") {
        Some((h, g)) => (h, g.trim_end().to_string()),
        None => (line.trim_end_matches(" |"), String::new()),
    };
    let mut fields = head.split_whitespace();
    let mut next = |what: &str| fields.next().ok_or_else(|| format!("missing {what}"));
    let offset = parse_offset(next("synset offset")?)?;
    next("lexicographer file number")?;
    let ss_type = next("synset type")?;
    if ss_type != pos.tag() {
        return Err(format!("synset type `{ss_type}` in {pos} data"));
    }
    let word_count =
        usize::from_str_radix(next("word count")?, 16).map_err(|e| format!("word count: {e}"))?;
    if word_count == 0 {
        return Err("synset has no words".into());
    }
    let mut words = Vec::with_capacity(word_count);
    for _ in 0..word_count {
        words.push(next("word")?.to_string());
        next("lex id")?;
    }
    let pointer_count: usize = next("pointer count")?
        .parse()
        .map_err(|e| format!("pointer count: {e}"))?;
    let mut hypernyms = Vec::new();
    for _ in 0..pointer_count {
        let symbol = next("pointer symbol")?;
        let target = parse_offset(next("pointer offset")?)?;
        let target_pos = next("pointer pos")?;
        next("pointer source/target")?;
        if symbol == "@" || symbol == "@i" {
            let target_pos = pos_from_tag(target_pos)
                .ok_or_else(|| format!("hypernym with pos `{target_pos}`"))?;
            hypernyms.push(SynsetId {
                offset: target,
                pos: target_pos,
            });
        }
    }
    Ok(Synset {
        id: SynsetId { offset, pos },
        words,
        hypernyms,
        gloss,
    })
}

/// `lemma pos synset_cnt p_cnt (ptr_symbol)* sense_cnt tagsense_cnt (offset)+`
fn parse_index_line(pos: Pos, line: &str) -> Result<(String, Vec<SynsetId>), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 6 {
        return Err("too few fields".into());
    }
    if fields[1] != pos.tag() {
        return Err(format!("pos `{}` in {pos} index", fields[1]));
    }
    let synset_count: usize = fields[2]
        .parse()
        .map_err(|e| format!("synset count: {e}"))?;
    let pointer_count: usize = fields[3]
        .parse()
        .map_err(|e| format!("pointer count: {e}"))?;
    let offsets_start = 4 + pointer_count + 2;
    if fields.len() != offsets_start + synset_count {
        return Err(format!(
            "expected {} fields, found {}",
            offsets_start + synset_count,
            fields.len()
        ));
    }
    let ids = fields[offsets_start..]
        .iter()
        .map(|f| parse_offset(f).map(|offset| SynsetId { offset, pos }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((fields[0].to_string(), ids))
}

#[cfg(test)]
pub(crate) mod testdb {
    use super::WordNetDb;
    use std::path::PathBuf;
    use std::sync::OnceLock;

    pub fn fixture_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/wndb")
    }

    /// The subset database shipped with the tests.
    pub fn mini() -> &'static WordNetDb {
        static DB: OnceLock<WordNetDb> = OnceLock::new();
        DB.get_or_init(|| WordNetDb::load(fixture_dir()).expect("fixture database loads"))
    }
}
