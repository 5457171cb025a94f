//! Character alphabets and encoded transcripts.
//!
//! An [`Alphabet`] is an ordered set of unique characters. Two reserved
//! symbols live one past the last character: the CTC *blank* occupies matrix
//! column `|A|`, and the *EOS* token occupies scorer index `|A|`. Neither has
//! a character representation and neither ever appears in a transcript.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("duplicate character {ch:?} at index {index}")]
    DuplicateCharacter { ch: char, index: usize },
    #[error("alphabet may not contain line breaks ({ch:?})")]
    LineBreak { ch: char },
    #[error("alphabet line {line} must hold exactly one character")]
    MalformedLine { line: usize },
    #[error("unknown character {ch:?} at position {position}")]
    UnknownCharacter { position: usize, ch: char },
}

/// Ordered character set with reserved blank and EOS indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    chars: Vec<char>,
    index: HashMap<char, u32>,
}

impl Alphabet {
    /// Builds an alphabet from characters in index order.
    ///
    /// Characters must be unique. Line breaks are rejected because the
    /// on-disk formats (alphabet files, transcripts, references) are all
    /// newline-delimited.
    pub fn new(chars: impl IntoIterator<Item = char>) -> Result<Self, AlphabetError> {
        let chars: Vec<char> = chars.into_iter().collect();
        let mut index = HashMap::with_capacity(chars.len());
        for (i, &ch) in chars.iter().enumerate() {
            if ch == '\n' || ch == '\r' {
                return Err(AlphabetError::LineBreak { ch });
            }
            if index.insert(ch, i as u32).is_some() {
                return Err(AlphabetError::DuplicateCharacter { ch, index: i });
            }
        }
        Ok(Self { chars, index })
    }

    /// Parses the alphabet file format: one character per line, line order
    /// giving index order. Blank and EOS are implicit and never listed.
    pub fn from_text(text: &str) -> Result<Self, AlphabetError> {
        let mut chars = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut it = line.chars();
            match (it.next(), it.next()) {
                (Some(ch), None) => chars.push(ch),
                _ => return Err(AlphabetError::MalformedLine { line: lineno + 1 }),
            }
        }
        Self::new(chars)
    }

    /// Serializes to the one-character-per-line file format.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.chars.len() * 2);
        for &ch in &self.chars {
            out.push(ch);
            out.push('\n');
        }
        out
    }

    /// |A|, the number of real characters.
    pub fn size(&self) -> usize {
        self.chars.len()
    }

    /// The blank index in confidence-matrix space (last column, `|A|`).
    pub fn blank(&self) -> u32 {
        self.chars.len() as u32
    }

    /// The EOS index in scorer-output space (`|A|`).
    pub fn eos(&self) -> u32 {
        self.chars.len() as u32
    }

    pub fn char_at(&self, index: u32) -> Option<char> {
        self.chars.get(index as usize).copied()
    }

    pub fn index_of(&self, ch: char) -> Option<u32> {
        self.index.get(&ch).copied()
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Encodes text into character indices.
    pub fn encode(&self, text: &str) -> Result<Transcript, AlphabetError> {
        let mut indices = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match self.index_of(ch) {
                Some(i) => indices.push(i),
                None => return Err(AlphabetError::UnknownCharacter { position, ch }),
            }
        }
        Ok(Transcript::new(indices))
    }

    /// Decodes a transcript back into a string.
    ///
    /// Panics if the transcript holds an index outside the alphabet; that is
    /// an invariant violation, not an input condition.
    pub fn decode(&self, transcript: &Transcript) -> String {
        transcript
            .iter()
            .map(|&i| {
                self.char_at(i)
                    .unwrap_or_else(|| panic!("transcript index {i} outside alphabet of size {}", self.size()))
            })
            .collect()
    }
}

/// A decoded or reference text as alphabet character indices.
///
/// Holds neither blank nor EOS; every index is `< |A|`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transcript(Vec<u32>);

impl Transcript {
    pub fn new(indices: Vec<u32>) -> Self {
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    /// Returns a copy extended by one character.
    pub fn extended(&self, c: u32) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(c);
        Self(v)
    }
}

impl From<Vec<u32>> for Transcript {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl From<&[u32]> for Transcript {
    fn from(v: &[u32]) -> Self {
        Self(v.to_vec())
    }
}
