//! Closed toy vocabulary.
//!
//! Every task template, name, year, ordinal family, and filler word is a
//! single token, so answer tokens are always single tokens and the task
//! metrics are exact. The token order below is part of the on-disk contract:
//! datasets serialize token ids, so the list must never be reordered.

use std::collections::HashMap;
use std::sync::OnceLock;

pub const VOCAB_SIZE: usize = 512;

const MISC: &[&str] = &[
    "when", "and", "went", "to", "the", "a", "gave", "store", "park", "school", "office", "drink",
    "ball", "apple", "kite", "lasted", "from", "year", "so", "such", "good", "isn't", "on", "in",
    "near", "by",
];

const EVENT_NOUNS: &[&str] =
    &["war", "trial", "voyage", "siege", "famine", "drought", "truce", "plague"];

const OCCUPATIONS: &[&str] =
    &["cook", "doctor", "teacher", "artist", "farmer", "singer", "writer", "pilot"];

const HE_NAMES: &[&str] = &["john", "paul", "mark", "tom", "james", "peter", "david", "henry"];
const SHE_NAMES: &[&str] = &["mary", "sarah", "anna", "lucy", "emma", "alice", "rose", "clara"];

const PRONOUNS: &[&str] = &["he", "she"];

/// (singular, plural) verb forms; index i of one list agrees with index i of
/// the other.
const SINGULAR_VERBS: &[&str] = &["is", "was", "has", "does"];
const PLURAL_VERBS: &[&str] = &["are", "were", "have", "do"];

/// (singular, plural) noun pairs for subject-verb agreement.
const NOUN_PAIRS: &[(&str, &str)] = &[
    ("key", "keys"),
    ("cabinet", "cabinets"),
    ("dog", "dogs"),
    ("car", "cars"),
    ("house", "houses"),
    ("tree", "trees"),
    ("lamp", "lamps"),
    ("chair", "chairs"),
    ("box", "boxes"),
    ("bird", "birds"),
    ("road", "roads"),
    ("door", "doors"),
];

const DIGITS: &[&str] = &["0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];

const WRITTEN_NUMBERS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve",
];

const WEEKDAYS: &[&str] =
    &["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    year_base: u32,
}

static TOY: OnceLock<Vocab> = OnceLock::new();

impl Vocab {
    /// The shared 512-token toy vocabulary.
    pub fn toy() -> &'static Vocab {
        TOY.get_or_init(Vocab::build)
    }

    fn build() -> Vocab {
        let mut tokens: Vec<String> = Vec::with_capacity(VOCAB_SIZE);
        for group in [MISC, EVENT_NOUNS, OCCUPATIONS, HE_NAMES, SHE_NAMES, PRONOUNS] {
            tokens.extend(group.iter().map(|s| s.to_string()));
        }
        tokens.extend(SINGULAR_VERBS.iter().map(|s| s.to_string()));
        tokens.extend(PLURAL_VERBS.iter().map(|s| s.to_string()));
        for (sing, plur) in NOUN_PAIRS {
            tokens.push(sing.to_string());
            tokens.push(plur.to_string());
        }
        let year_base = tokens.len() as u32;
        for y in 0..100 {
            tokens.push(format!("{y:02}"));
        }
        for group in [DIGITS, WRITTEN_NUMBERS, WEEKDAYS, MONTHS] {
            tokens.extend(group.iter().map(|s| s.to_string()));
        }
        let mut filler = 0usize;
        while tokens.len() < VOCAB_SIZE {
            tokens.push(format!("w{filler:03}"));
            filler += 1;
        }
        assert_eq!(tokens.len(), VOCAB_SIZE);

        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            let prev = index.insert(t.clone(), i as u32);
            assert!(prev.is_none(), "duplicate vocab word {t:?}");
        }
        Vocab { tokens, index, year_base }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, id: u32) -> &str {
        &self.tokens[id as usize]
    }

    pub fn lookup(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    /// Id of a word that is guaranteed to exist in the toy vocabulary.
    pub fn id(&self, word: &str) -> u32 {
        self.lookup(word)
            .unwrap_or_else(|| panic!("word {word:?} missing from toy vocabulary"))
    }

    pub fn he_names(&self) -> Vec<u32> {
        HE_NAMES.iter().map(|w| self.id(w)).collect()
    }

    pub fn she_names(&self) -> Vec<u32> {
        SHE_NAMES.iter().map(|w| self.id(w)).collect()
    }

    pub fn all_names(&self) -> Vec<u32> {
        let mut v = self.he_names();
        v.extend(self.she_names());
        v
    }

    /// Token id of the two-digit year `yy` (0..=99).
    pub fn year(&self, yy: u32) -> u32 {
        assert!(yy < 100);
        self.year_base + yy
    }

    /// All 100 year tokens in numeric order.
    pub fn years(&self) -> Vec<u32> {
        (0..100).map(|y| self.year(y)).collect()
    }

    pub fn event_nouns(&self) -> Vec<u32> {
        EVENT_NOUNS.iter().map(|w| self.id(w)).collect()
    }

    pub fn occupations(&self) -> Vec<u32> {
        OCCUPATIONS.iter().map(|w| self.id(w)).collect()
    }

    pub fn noun_pairs(&self) -> Vec<(u32, u32)> {
        NOUN_PAIRS.iter().map(|(s, p)| (self.id(s), self.id(p))).collect()
    }

    pub fn singular_verbs(&self) -> Vec<u32> {
        SINGULAR_VERBS.iter().map(|w| self.id(w)).collect()
    }

    pub fn plural_verbs(&self) -> Vec<u32> {
        PLURAL_VERBS.iter().map(|w| self.id(w)).collect()
    }

    pub fn prepositions(&self) -> Vec<u32> {
        ["on", "in", "near", "by"].iter().map(|w| self.id(w)).collect()
    }

    pub fn ioi_objects(&self) -> Vec<u32> {
        ["drink", "ball", "apple", "kite"].iter().map(|w| self.id(w)).collect()
    }

    pub fn ioi_places(&self) -> Vec<u32> {
        ["store", "park", "school", "office"].iter().map(|w| self.id(w)).collect()
    }

    /// Ordered ordinal families: digits, written numbers, weekdays, months.
    /// Within each family, element i+1 is the successor of element i.
    pub fn successor_families(&self) -> Vec<Vec<u32>> {
        [DIGITS, WRITTEN_NUMBERS, WEEKDAYS, MONTHS]
            .iter()
            .map(|family| family.iter().map(|w| self.id(w)).collect())
            .collect()
    }

    /// Filler tokens (used as generic material for repeated-sequence
    /// corpora).
    pub fn fillers(&self) -> Vec<u32> {
        (0..self.tokens.len() as u32)
            .filter(|&i| self.tokens[i as usize].starts_with('w')
                && self.tokens[i as usize].len() == 4
                && self.tokens[i as usize][1..].chars().all(|c| c.is_ascii_digit()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocab_is_exactly_512_unique_tokens() {
        let v = Vocab::toy();
        assert_eq!(v.len(), VOCAB_SIZE);
        assert_eq!(v.index.len(), VOCAB_SIZE);
    }

    #[test]
    fn year_tokens_cover_00_to_99() {
        let v = Vocab::toy();
        assert_eq!(v.token(v.year(0)), "00");
        assert_eq!(v.token(v.year(32)), "32");
        assert_eq!(v.token(v.year(99)), "99");
        assert_eq!(v.years().len(), 100);
    }

    #[test]
    fn name_pools_have_eight_each() {
        let v = Vocab::toy();
        assert_eq!(v.he_names().len(), 8);
        assert_eq!(v.she_names().len(), 8);
    }

    #[test]
    fn successor_families_are_ordered() {
        let v = Vocab::toy();
        let fams = v.successor_families();
        assert_eq!(fams.len(), 4);
        // (3, 4) and (tuesday, wednesday) are family-successor pairs.
        assert_eq!(v.token(fams[0][3]), "3");
        assert_eq!(v.token(fams[0][4]), "4");
        assert_eq!(v.token(fams[2][1]), "tuesday");
        assert_eq!(v.token(fams[2][2]), "wednesday");
    }

    #[test]
    fn fillers_pad_to_size() {
        let v = Vocab::toy();
        assert!(v.fillers().len() > 200);
    }
}
