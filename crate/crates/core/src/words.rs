//! Data words: a nonempty string together with a partition of its positions.
//!
//! Only equality of data matters, so classes are kept extensionally as
//! position sets rather than as concrete data values.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a letter within its [`Alphabet`].
pub type Sym = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("data words must be nonempty")]
    EmptyWord,
    #[error("blocks do not partition the positions: {0}")]
    NotAPartition(String),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("alphabet must be nonempty and duplicate-free")]
    BadAlphabet,
    #[error("cannot parse data word: {0}")]
    Syntax(String),
}

/// A finite, ordered, duplicate-free set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, WordError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(WordError::BadAlphabet);
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(WordError::BadAlphabet);
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    /// Convenience for the ubiquitous `{a, b}`-style alphabets of single characters.
    pub fn from_chars(chars: &str) -> Arc<Self> {
        let names: Vec<String> = chars.chars().map(|c| c.to_string()).collect();
        Alphabet::new(&names).expect("distinct characters")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.names.iter().position(|n| n == name).map(|i| i as Sym)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.names.len()).map(|i| i as Sym)
    }
}

/// Ordinal of a partition block; blocks are ordered by their least member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DataWord {
    alphabet: Arc<Alphabet>,
    letters: Vec<Sym>,
    class: Vec<ClassId>,
    blocks: Vec<Vec<usize>>,
}

/// Builds a data word from letter names and a list of blocks.
pub fn make_data_word<S: AsRef<str>>(
    alphabet: &Arc<Alphabet>,
    letters: &[S],
    blocks: &[Vec<usize>],
) -> Result<DataWord, WordError> {
    let syms = letters
        .iter()
        .map(|l| {
            alphabet
                .lookup(l.as_ref())
                .ok_or_else(|| WordError::UnknownLetter(l.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    DataWord::from_blocks(alphabet.clone(), syms, blocks)
}

impl DataWord {
    pub fn from_blocks(
        alphabet: Arc<Alphabet>,
        letters: Vec<Sym>,
        blocks: &[Vec<usize>],
    ) -> Result<Self, WordError> {
        let len = letters.len();
        if len == 0 {
            return Err(WordError::EmptyWord);
        }
        if let Some(&s) = letters.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(WordError::UnknownLetter(format!("#{s}")));
        }
        let mut owner: Vec<Option<usize>> = vec![None; len];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(WordError::NotAPartition("empty block".into()));
            }
            for &p in block {
                if p >= len {
                    return Err(WordError::NotAPartition(format!("position {p} beyond length {len}")));
                }
                if owner[p].is_some() {
                    return Err(WordError::NotAPartition(format!("position {p} in two blocks")));
                }
                owner[p] = Some(b);
            }
        }
        if let Some(p) = owner.iter().position(Option::is_none) {
            return Err(WordError::NotAPartition(format!("position {p} in no block")));
        }
        let labels: Vec<usize> = owner.into_iter().map(Option::unwrap).collect();
        Ok(Self::from_labels(alphabet, letters, &labels))
    }

    /// Builds a word from arbitrary per-position class labels (equal label = same class).
    pub fn from_labels(alphabet: Arc<Alphabet>, letters: Vec<Sym>, labels: &[usize]) -> Self {
        assert_eq!(letters.len(), labels.len());
        assert!(!letters.is_empty(), "data words are nonempty");
        let mut canon: Vec<(usize, usize)> = Vec::new();
        let mut class = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (p, &l) in labels.iter().enumerate() {
            let id = match canon.iter().find(|(old, _)| *old == l) {
                Some(&(_, id)) => id,
                None => {
                    canon.push((l, blocks.len()));
                    blocks.push(Vec::new());
                    blocks.len() - 1
                }
            };
            blocks[id].push(p);
            class.push(ClassId(id));
        }
        DataWord { alphabet, letters, class, blocks }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> Sym {
        self.letters[i]
    }

    pub fn letters(&self) -> &[Sym] {
        &self.letters
    }

    pub fn letter_name(&self, i: usize) -> &str {
        self.alphabet.name(self.letters[i])
    }

    pub fn class_of(&self, i: usize) -> ClassId {
        self.class[i]
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.class
    }

    pub fn num_classes(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, c: ClassId) -> &[usize] {
        &self.blocks[c.0]
    }

    pub fn same_class(&self, i: usize, j: usize) -> Result<bool, WordError> {
        let len = self.len();
        for pos in [i, j] {
            if pos >= len {
                return Err(WordError::PositionOutOfRange { pos, len });
            }
        }
        Ok(self.class[i] == self.class[j])
    }

    /// The string str(σ) as letter names.
    pub fn string(&self) -> Vec<&str> {
        self.letters.iter().map(|&s| self.alphabet.name(s)).collect()
    }

    /// Parses `a a b ; 0 2 | 1`.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self, WordError> {
        let (lhs, rhs) = text
            .split_once(';')
            .ok_or_else(|| WordError::Syntax("expected `;` between letters and partition".into()))?;
        let letters: Vec<&str> = lhs.split_whitespace().collect();
        let mut blocks = Vec::new();
        for part in rhs.split('|') {
            let block = part
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| WordError::Syntax(format!("bad position `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
        }
        make_data_word(alphabet, &letters, &blocks)
    }
}

impl fmt::Display for DataWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ;", self.string().join(" "))?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, " |")?;
            }
            for p in block {
                write!(f, " {p}")?;
            }
        }
        Ok(())
    }
}

/// Every data word of length 1..=max_len, ordered by length, then string,
/// then partition in restricted-growth-string order.
pub fn enumerate_data_words(alphabet: &Arc<Alphabet>, max_len: usize) -> DataWordIter {
    DataWordIter {
        alphabet: alphabet.clone(),
        max_len,
        len: 1,
        letters: vec![0],
        rgs: vec![0],
        done: max_len == 0,
    }
}

/// Every data word of exactly the given length.
pub fn enumerate_data_words_of_len(alphabet: &Arc<Alphabet>, len: usize) -> impl Iterator<Item = DataWord> {
    enumerate_data_words(alphabet, len).filter(move |w| w.len() == len)
}

pub struct DataWordIter {
    alphabet: Arc<Alphabet>,
    max_len: usize,
    len: usize,
    letters: Vec<Sym>,
    rgs: Vec<usize>,
    done: bool,
}

impl DataWordIter {
    fn next_rgs(&mut self) -> bool {
        // Standard successor of a restricted growth string.
        let n = self.rgs.len();
        for i in (1..n).rev() {
            let max_prefix = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= max_prefix {
                self.rgs[i] += 1;
                for x in &mut self.rgs[i + 1..] {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }

    fn next_letters(&mut self) -> bool {
        let k = self.alphabet.len() as Sym;
        for i in (0..self.letters.len()).rev() {
            if self.letters[i] + 1 < k {
                self.letters[i] += 1;
                for x in &mut self.letters[i + 1..] {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for DataWordIter {
    type Item = DataWord;

    fn next(&mut self) -> Option<DataWord> {
        if self.done {
            return None;
        }
        let word = DataWord::from_labels(self.alphabet.clone(), self.letters.clone(), &self.rgs);
        if !self.next_rgs() {
            self.rgs = vec![0; self.len];
            if !self.next_letters() {
                self.len += 1;
                if self.len > self.max_len {
                    self.done = true;
                } else {
                    self.letters = vec![0; self.len];
                    self.rgs = vec![0; self.len];
                }
            }
        }
        Some(word)
    }
}

/// Applies a letter-to-letter-or-ε map and drops the erased letters.
pub fn project_string<F>(w: &DataWord, h: F) -> Vec<String>
where
    F: Fn(&str) -> Option<String>,
{
    (0..w.len()).filter_map(|i| h(w.letter_name(i))).collect()
}

/// Bell numbers, used to size enumerations.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
