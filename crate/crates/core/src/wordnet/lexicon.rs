//! Synonymy and bounded hypernymy between two labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use super::{normalize, Pos, SynsetId, WordNetDb};

/// Lexical relations consulted when merging context labels.
pub trait RelatednessLexicon: Send + Sync {
    /// True when `a` and `b` share a sense. Reflexive and symmetric.
    fn are_synonyms(&self, a: &str, b: &str, pos: Pos) -> bool;

    /// The more general of `a` and `b` when one is a hypernym of the other
    /// within `depth` edges, or the tie-break winner when they are synonyms.
    /// Returns one of the two arguments as given, or `None` if unrelated.
    fn most_general_within(&self, a: &str, b: &str, pos: Pos, depth: u32) -> Option<String>;

    /// Whether the two labels would be merged at `depth`.
    fn related(&self, a: &str, b: &str, pos: Pos, depth: u32) -> bool {
        self.most_general_within(a, b, pos, depth).is_some()
    }
}

/// Shortest number of upward steps from any of `start` to any of `targets`,
/// counting only strict ancestors (at least one step), bounded by `depth`.
fn upward_distance<T, F>(start: &[T], targets: &HashSet<T>, depth: u32, parents: F) -> Option<u32>
where
    T: Copy + Eq + Hash,
    F: Fn(T) -> Vec<T>,
{
    let mut seen: HashSet<T> = start.iter().copied().collect();
    let mut frontier: VecDeque<(T, u32)> = start.iter().map(|&s| (s, 0)).collect();
    while let Some((node, dist)) = frontier.pop_front() {
        if dist == depth {
            continue;
        }
        for parent in parents(node) {
            if targets.contains(&parent) {
                return Some(dist + 1);
            }
            if seen.insert(parent) {
                frontier.push_back((parent, dist + 1));
            }
        }
    }
    None
}

/// Decides between two labels given the hypernym distances in each
/// direction. `a_above_b` is the distance from `b` up to `a`.
fn pick<'a>(
    a: &'a str,
    b: &'a str,
    b_above_a: Option<u32>,
    a_above_b: Option<u32>,
    tie: impl FnOnce() -> &'a str,
) -> Option<String> {
    match (b_above_a, a_above_b) {
        (Some(x), Some(y)) if x < y => Some(b.to_string()),
        (Some(x), Some(y)) if y < x => Some(a.to_string()),
        (Some(_), Some(_)) => Some(tie().to_string()),
        (Some(_), None) => Some(b.to_string()),
        (None, Some(_)) => Some(a.to_string()),
        (None, None) => None,
    }
}

fn lexicographic<'a>(a: &'a str, b: &'a str) -> &'a str {
    if b < a {
        b
    } else {
        a
    }
}

impl WordNetDb {
    fn parents(&self, id: SynsetId) -> Vec<SynsetId> {
        self.synset(id)
            .map(|s| s.hypernyms.clone())
            .unwrap_or_default()
    }

    /// Synonym tie-break: the lemma listed earlier in a shared synset wins,
    /// then the lexicographically smaller label.
    fn synonym_winner<'a>(&self, a: &'a str, b: &'a str, shared: &[SynsetId]) -> &'a str {
        let (na, nb) = (normalize(a), normalize(b));
        let best = |lemma: &str| {
            shared
                .iter()
                .filter_map(|&id| self.synset(id)?.position(lemma))
                .min()
                .unwrap_or(usize::MAX)
        };
        let (pa, pb) = (best(&na), best(&nb));
        match pa.cmp(&pb) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => lexicographic(a, b),
        }
    }
}

impl RelatednessLexicon for WordNetDb {
    fn are_synonyms(&self, a: &str, b: &str, pos: Pos) -> bool {
        if normalize(a) == normalize(b) {
            return true;
        }
        let sb: HashSet<SynsetId> = self.senses(b, pos).into_iter().collect();
        self.senses(a, pos).iter().any(|s| sb.contains(s))
    }

    fn most_general_within(&self, a: &str, b: &str, pos: Pos, depth: u32) -> Option<String> {
        if normalize(a) == normalize(b) {
            return Some(a.to_string());
        }
        let sa = self.senses(a, pos);
        let sb = self.senses(b, pos);
        if sa.is_empty() || sb.is_empty() {
            return None;
        }
        let set_a: HashSet<SynsetId> = sa.iter().copied().collect();
        let set_b: HashSet<SynsetId> = sb.iter().copied().collect();
        let shared: Vec<SynsetId> = sa.iter().copied().filter(|s| set_b.contains(s)).collect();
        if !shared.is_empty() {
            // Synonymy is distance zero and beats any hypernym path.
            return Some(self.synonym_winner(a, b, &shared).to_string());
        }
        let parents = |id| self.parents(id);
        let b_above_a = upward_distance(&sa, &set_b, depth, parents);
        let a_above_b = upward_distance(&sb, &set_a, depth, parents);
        pick(a, b, b_above_a, a_above_b, || lexicographic(a, b))
    }
}

/// A lexicon that relates nothing except identical labels.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoRelations;

impl RelatednessLexicon for NoRelations {
    fn are_synonyms(&self, a: &str, b: &str, _pos: Pos) -> bool {
        a == b
    }

    fn most_general_within(&self, a: &str, b: &str, _pos: Pos, _depth: u32) -> Option<String> {
        (a == b).then(|| a.to_string())
    }
}

/// A hand-written lexicon over plain labels, for injecting arbitrary
/// synonym and hypernym relations.
#[derive(Debug, Clone, Default)]
pub struct StaticLexicon {
    synonyms: HashSet<(Pos, String, String)>,
    parents: HashMap<(Pos, String), Vec<String>>,
}

impl StaticLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `a` and `b` synonyms (in both directions).
    pub fn synonyms(mut self, pos: Pos, a: &str, b: &str) -> Self {
        self.synonyms.insert((pos, a.to_string(), b.to_string()));
        self.synonyms.insert((pos, b.to_string(), a.to_string()));
        self
    }

    /// Declares `general` an immediate hypernym of `specific`.
    pub fn hypernym(mut self, pos: Pos, specific: &str, general: &str) -> Self {
        self.parents
            .entry((pos, specific.to_string()))
            .or_default()
            .push(general.to_string());
        self
    }
}

impl RelatednessLexicon for StaticLexicon {
    fn are_synonyms(&self, a: &str, b: &str, pos: Pos) -> bool {
        a == b || self.synonyms.contains(&(pos, a.to_string(), b.to_string()))
    }

    fn most_general_within(&self, a: &str, b: &str, pos: Pos, depth: u32) -> Option<String> {
        if self.are_synonyms(a, b, pos) {
            return Some(lexicographic(a, b).to_string());
        }
        let parents = |w: &str| {
            self.parents
                .get(&(pos, w.to_string()))
                .map(|ps| ps.iter().map(String::as_str).collect::<Vec<_>>())
                .unwrap_or_default()
        };
        let target_b: HashSet<&str> = [b].into_iter().collect();
        let target_a: HashSet<&str> = [a].into_iter().collect();
        let b_above_a = upward_distance(&[a], &target_b, depth, parents);
        let a_above_b = upward_distance(&[b], &target_a, depth, parents);
        pick(a, b, b_above_a, a_above_b, || lexicographic(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testdb::mini;
    use super::*;

    #[test]
    fn synonyms_in_wordnet() {
        let db = mini();
        assert!(db.are_synonyms("car", "automobile", Pos::Noun));
        assert!(db.are_synonyms("automobile", "car", Pos::Noun));
        assert!(!db.are_synonyms("cat", "dog", Pos::Noun));
        assert!(db.are_synonyms("trip", "trip", Pos::Noun));
    }

    #[test]
    fn hypernyms_in_wordnet() {
        let db = mini();
        assert_eq!(
            db.most_general_within("dog", "canine", Pos::Noun, 1)
                .as_deref(),
            Some("canine")
        );
        assert_eq!(
            db.most_general_within("canine", "dog", Pos::Noun, 1)
                .as_deref(),
            Some("canine")
        );
        assert_eq!(db.most_general_within("dog", "canine", Pos::Noun, 0), None);
        assert_eq!(db.most_general_within("cat", "entity", Pos::Noun, 3), None);
        assert_eq!(
            db.most_general_within("cat", "entity", Pos::Noun, 20)
                .as_deref(),
            Some("entity")
        );
        assert_eq!(
            db.most_general_within("dog", "dog", Pos::Noun, 0)
                .as_deref(),
            Some("dog")
        );
    }

    #[test]
    fn synonym_tie_break_prefers_earlier_member() {
        let db = mini();
        // The shared synset lists "car" before "automobile".
        assert_eq!(
            db.most_general_within("automobile", "car", Pos::Noun, 0)
                .as_deref(),
            Some("car")
        );
        assert_eq!(
            db.most_general_within("car", "automobile", Pos::Noun, 4)
                .as_deref(),
            Some("car")
        );
    }

    #[test]
    fn unknown_words_are_unrelated() {
        let db = mini();
        assert_eq!(db.most_general_within("xyzzy", "cat", Pos::Noun, 10), None);
        assert!(!db.are_synonyms("xyzzy", "plugh", Pos::Noun));
    }

    #[test]
    fn wordnet_answers_are_symmetric_and_monotone() {
        let db = mini();
        let words = [
            "cat",
            "dog",
            "canine",
            "entity",
            "car",
            "automobile",
            "vehicle",
            "museum",
            "institution",
            "building",
            "house",
            "city",
            "object",
            "artifact",
            "body",
            "culture",
        ];
        for a in words {
            for b in words {
                let mut previous: Option<String> = None;
                for depth in 0..12 {
                    let ab = db.most_general_within(a, b, Pos::Noun, depth);
                    assert_eq!(
                        ab,
                        db.most_general_within(b, a, Pos::Noun, depth),
                        "{a}/{b}@{depth}"
                    );
                    if previous.is_some() {
                        assert_eq!(ab, previous, "{a}/{b}@{depth}");
                    }
                    previous = ab;
                }
            }
        }
    }

    #[test]
    fn static_lexicon() {
        let lex = StaticLexicon::new()
            .hypernym(Pos::Noun, "B", "A")
            .synonyms(Pos::Verb, "W", "X");
        assert_eq!(
            lex.most_general_within("A", "B", Pos::Noun, 1).as_deref(),
            Some("A")
        );
        assert_eq!(
            lex.most_general_within("B", "A", Pos::Noun, 1).as_deref(),
            Some("A")
        );
        assert_eq!(lex.most_general_within("A", "B", Pos::Noun, 0), None);
        assert_eq!(lex.most_general_within("A", "B", Pos::Verb, 4), None);
        assert!(lex.are_synonyms("X", "W", Pos::Verb));
        assert_eq!(
            lex.most_general_within("X", "W", Pos::Verb, 0).as_deref(),
            Some("W")
        );
        assert!(!NoRelations.related("A", "B", Pos::Noun, 9));
    }
}
