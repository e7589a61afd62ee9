//! Alphabets, words, dictionaries, codes and Hamming geometry.

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
pub type Symbol = u8;

const STANDARD_SYMBOLS: &str = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Default character used to print and parse erased positions.
pub const ERASURE_CHAR: char = 'e';

/// Largest dictionary that is ever materialized in memory.
pub const MAX_MATERIALIZED_WORDS: usize = 1 << 22;

/// An ordered set of printable symbols with an optional erasure marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    erasure: Option<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>, erasure: Option<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::domain("alphabet must contain at least one symbol"));
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(Error::domain(format!(
                "alphabet of size {} exceeds {}",
                symbols.len(),
                usize::from(Symbol::MAX) + 1
            )));
        }
        let mut seen = HashSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::domain(format!("duplicate alphabet symbol {c:?}")));
            }
        }
        if let Some(e) = erasure {
            if seen.contains(&e) {
                return Err(Error::domain(format!(
                    "erasure symbol {e:?} is also an alphabet symbol"
                )));
            }
        }
        Ok(Self { symbols, erasure })
    }

    /// `{0, 1}` with `e` as the erasure marker.
    pub fn binary() -> Self {
        Self::standard(2).expect("binary alphabet")
    }

    /// The first `size` of `0-9A-Z`, with `e` as the erasure marker.
    pub fn standard(size: usize) -> Result<Self> {
        if size == 0 || size > STANDARD_SYMBOLS.len() {
            return Err(Error::domain(format!(
                "standard alphabets have 1..={} symbols, got {size}",
                STANDARD_SYMBOLS.len()
            )));
        }
        Self::new(
            STANDARD_SYMBOLS.chars().take(size).collect(),
            Some(ERASURE_CHAR),
        )
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn erasure(&self) -> Option<char> {
        self.erasure
    }

    pub fn char_of(&self, s: Symbol) -> Option<char> {
        self.symbols.get(usize::from(s)).copied()
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|&x| x == c)
            .map(|i| i as Symbol)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        usize::from(s) < self.symbols.len()
    }

    /// Parses a word written with this alphabet's characters.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let symbols = text
            .chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| Error::domain(format!("symbol {c:?} is not in the alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }

    /// Parses a received word; the erasure character marks erased positions.
    pub fn parse_received(&self, text: &str) -> Result<ReceivedWord> {
        let entries = text
            .chars()
            .map(|c| {
                if Some(c) == self.erasure {
                    Ok(None)
                } else {
                    self.index_of(c).map(Some).ok_or_else(|| {
                        Error::domain(format!("symbol {c:?} is neither a symbol nor an erasure"))
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ReceivedWord::new(entries)
    }

    pub fn render_word(&self, word: &Word) -> String {
        word.symbols()
            .iter()
            .map(|&s| self.char_of(s).unwrap_or('?'))
            .collect()
    }

    pub fn render_received(&self, word: &ReceivedWord) -> String {
        let erasure = self.erasure.unwrap_or(ERASURE_CHAR);
        word.entries()
            .iter()
            .map(|e| match e {
                Some(s) => self.char_of(*s).unwrap_or('?'),
                None => erasure,
            })
            .collect()
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        match word.symbols().iter().find(|&&s| !self.contains(s)) {
            Some(s) => Err(Error::domain(format!(
                "symbol index {s} is outside an alphabet of size {}",
                self.size()
            ))),
            None => Ok(()),
        }
    }
}

/// A fixed-length sequence of symbol indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::domain("words have positive length"));
        }
        Ok(Self(symbols))
    }

    /// Parses a `0`/`1` string. Convenience for binary words.
    pub fn from_bits(bits: &str) -> Result<Self> {
        Alphabet::binary().parse_word(bits)
    }

    /// The word whose symbols are the base-`q` digits of `index`, most
    /// significant first.
    pub fn from_index(mut index: u64, len: usize, q: usize) -> Result<Self> {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q as u64) as Symbol;
            index /= q as u64;
        }
        Word::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&s| s <= 1)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(")?;
        for s in &self.0 {
            if *s < 10 {
                write!(f, "{s}")?;
            } else {
                write!(f, "[{s}]")?;
            }
        }
        write!(f, ")")
    }
}

/// A channel output: a word in which some positions may be erased (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReceivedWord(Vec<Option<Symbol>>);

impl ReceivedWord {
    pub fn new(entries: Vec<Option<Symbol>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("received words have positive length"));
        }
        Ok(Self(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Option<Symbol>] {
        &self.0
    }

    pub fn erasure_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.is_none().then_some(i))
            .collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.0.iter().filter(|e| e.is_none()).count()
    }
}

impl From<&Word> for ReceivedWord {
    fn from(word: &Word) -> Self {
        Self(word.symbols().iter().copied().map(Some).collect())
    }
}

pub(crate) fn distance_unchecked(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    Error::check_len(a.len(), b.len())?;
    Ok(distance_unchecked(a.symbols(), b.symbols()))
}

/// Minimum distance over all unordered pairs of distinct code words.
pub fn min_distance(code: &Code) -> Result<usize> {
    let words = code.words();
    if words.len() < 2 {
        return Err(Error::UndefinedDistance(words.len()));
    }
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(distance_unchecked(a.symbols(), b.symbols()));
        }
    }
    Ok(best)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of length-`n` words over `q` symbols within distance `r` of a
/// fixed word: `sum_{i<=r} C(n, i) (q - 1)^i`.
pub fn ball_volume(n: usize, r: usize, q: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::domain(format!("radius {r} exceeds length {n}")));
    }
    if q == 0 {
        return Err(Error::domain("alphabet size must be positive"));
    }
    let mut total = BigUint::zero();
    let mut power = BigUint::one();
    for i in 0..=r {
        total += binomial(n as u64, i as u64) * &power;
        power *= q - 1;
    }
    Ok(total)
}

/// Deletes the given (0-based) positions, keeping the rest in order.
/// Repeated positions count once.
pub fn puncture(word: &Word, positions: &[usize]) -> Result<Word> {
    let mut keep = vec![true; word.len()];
    for &p in positions {
        if p >= word.len() {
            return Err(Error::domain(format!(
                "position {p} is out of range for length {}",
                word.len()
            )));
        }
        keep[p] = false;
    }
    let symbols: Vec<Symbol> = word
        .symbols()
        .iter()
        .zip(&keep)
        .filter_map(|(&s, &k)| k.then_some(s))
        .collect();
    // Puncturing every position yields the empty word, which is only
    // meaningful as an intermediate value.
    Ok(Word(symbols))
}

/// A finite set of equal-length words, iterated in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    alphabet: Alphabet,
    n: usize,
    words: IndexSet<Word>,
}

impl Dictionary {
    pub fn new(alphabet: Alphabet, n: usize, words: Vec<Word>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("word length must be positive"));
        }
        let mut set = IndexSet::with_capacity(words.len());
        for (i, w) in words.into_iter().enumerate() {
            Error::check_len(n, w.len())?;
            alphabet.check_word(&w)?;
            if set.contains(&w) {
                return Err(Error::domain(format!(
                    "duplicate word {} at position {}",
                    alphabet.render_word(&w),
                    i + 1
                )));
            }
            set.insert(w);
        }
        Ok(Self {
            alphabet,
            n,
            words: set,
        })
    }

    /// Materializes the whole space `alphabet^n` in lexicographic order.
    pub fn full_space(alphabet: Alphabet, n: usize) -> Result<Self> {
        let q = alphabet.size();
        let total = (q as f64).powi(n as i32);
        if total > MAX_MATERIALIZED_WORDS as f64 {
            return Err(Error::Resource(format!(
                "{q}^{n} words exceed the materialization cap of {MAX_MATERIALIZED_WORDS}"
            )));
        }
        let total = q.pow(n as u32);
        let words = (0..total as u64)
            .map(|i| Word::from_index(i, n, q))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, n, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn get(&self, i: usize) -> Option<&Word> {
        self.words.get_index(i)
    }
}

/// An ordered list of distinct equal-length words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    alphabet: Alphabet,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(alphabet: Alphabet, n: usize, words: Vec<Word>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("word length must be positive"));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            Error::check_len(n, w.len())?;
            alphabet.check_word(w)?;
            if !seen.insert(w) {
                return Err(Error::domain(format!(
                    "code word {} appears twice",
                    alphabet.render_word(w)
                )));
            }
        }
        Ok(Self { alphabet, n, words })
    }

    /// A code whose words must all belong to `dict`.
    pub fn within(dict: &Dictionary, words: Vec<Word>) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| !dict.contains(w)) {
            return Err(Error::domain(format!(
                "code word {} is not in the dictionary",
                dict.alphabet().render_word(w)
            )));
        }
        Self::new(dict.alphabet().clone(), dict.word_len(), words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    /// `log2(#C) / n`.
    pub fn rate_bits(&self) -> f64 {
        (self.words.len() as f64).log2() / self.n as f64
    }
}
