//! Morphy-style lemmatisation: exception lists, then suffix detachment.

use super::{normalize, Lemmatizer, Pos, WordNetDb};

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
    }
}

impl WordNetDb {
    /// Base forms of `word` present in the index for `pos`.
    ///
    /// A word that is itself indexed comes back first, spelled as given.
    /// Exception-list bases are used when the word has an entry there;
    /// otherwise every detachment rule whose result is indexed contributes.
    pub fn morphy(&self, word: &str, pos: Pos) -> Vec<String> {
        let key = normalize(word);
        if key.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<String> = Vec::new();
        let push = |candidate: String, out: &mut Vec<String>| {
            let n = normalize(&candidate);
            if self.is_indexed(&n, pos) && !out.iter().any(|o| normalize(o) == n) {
                out.push(candidate);
            }
        };
        push(word.trim().to_string(), &mut out);
        if let Some(bases) = self.exceptions_for(&key, pos) {
            for base in bases {
                push(base.clone(), &mut out);
            }
            return out;
        }
        for (suffix, replacement) in rules(pos) {
            if let Some(stem) = key.strip_suffix(suffix) {
                if !stem.is_empty() {
                    push(format!("{stem}{replacement}"), &mut out);
                }
            }
        }
        out
    }
}

impl Lemmatizer for WordNetDb {
    fn lemmatize(&self, word: &str, pos: Pos) -> Option<String> {
        self.morphy(word, pos).into_iter().next()
    }
}

#[cfg(test)]
mod tests {
    use super::super::testdb::mini;
    use super::*;

    #[test]
    fn exception_list() {
        assert_eq!(mini().morphy("drove", Pos::Verb), ["drive"]);
    }

    #[test]
    fn detachment_rules() {
        let db = mini();
        assert_eq!(db.morphy("walked", Pos::Verb), ["walk"]);
        assert_eq!(db.morphy("cats", Pos::Noun), ["cat"]);
        assert_eq!(db.morphy("driving", Pos::Verb), ["drive"]);
        assert_eq!(db.morphy("distributes", Pos::Verb), ["distribute"]);
        assert_eq!(db.morphy("products", Pos::Noun), ["product"]);
        assert_eq!(db.morphy("cities", Pos::Noun), ["city"]);
    }

    #[test]
    fn indexed_word_comes_first_as_given() {
        let db = mini();
        assert_eq!(db.morphy("drive", Pos::Verb), ["drive"]);
        assert_eq!(db.morphy("Bell", Pos::Noun)[0], "Bell");
        // "houses" is not indexed, both nouns and verbs reduce to "house"
        assert_eq!(db.morphy("houses", Pos::Verb), ["house"]);
    }

    #[test]
    fn unknown_words() {
        let db = mini();
        assert!(db.morphy("xyzzy", Pos::Verb).is_empty());
        assert!(db.morphy("", Pos::Noun).is_empty());
        assert_eq!(db.lemmatize("xyzzy", Pos::Noun), None);
    }

    #[test]
    fn idempotent_on_outputs() {
        let db = mini();
        for (word, pos) in [
            ("drove", Pos::Verb),
            ("walked", Pos::Verb),
            ("cats", Pos::Noun),
            ("museums", Pos::Noun),
            ("combines", Pos::Verb),
            ("Bell", Pos::Noun),
        ] {
            for lemma in db.morphy(word, pos) {
                assert_eq!(db.morphy(&lemma, pos)[0], lemma, "{word} -> {lemma}");
            }
        }
    }
}
