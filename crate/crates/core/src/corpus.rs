//! Ingestion of raw book text into normalized token sequences.
//!
//! A word is a whitespace-separated chunk, lowercased, with every character
//! that is not a letter or an apostrophe removed. Chunks that become empty
//! (bare punctuation, numbers) are dropped.

use crate::{Error, Result};

/// Ordered tokens of one text. The sequence length is `W_T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub source_id: String,
}

impl TokenSequence {
    pub fn new(tokens: Vec<String>, source_id: impl Into<String>) -> Self {
        Self { tokens, source_id: source_id.into() }
    }

    /// Total token count `W_T`.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Supported input encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    #[default]
    Utf8,
    Latin1,
}

/// Decode raw bytes in the declared encoding.
///
/// UTF-8 is validated strictly; the error names the byte offset of the first
/// undecodable byte. Latin-1 maps every byte to its code point and cannot
/// fail.
pub fn decode_bytes(bytes: &[u8], encoding: Encoding) -> Result<String> {
    match encoding {
        Encoding::Utf8 => String::from_utf8(bytes.to_vec())
            .map_err(|e| Error::Decode { offset: e.utf8_error().valid_up_to() }),
        Encoding::Latin1 => Ok(bytes.iter().map(|&b| b as char).collect()),
    }
}

const START_MARKER: &str = "*** START OF";
const END_MARKER: &str = "*** END OF";

/// Drop archive header/footer if both `*** START OF` and `*** END OF`
/// marker lines are present; otherwise return the input unchanged.
pub fn strip_boilerplate(raw_text: &str) -> &str {
    let mut start = None;
    let mut end = None;
    let mut offset = 0;
    for line in raw_text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if start.is_none() && trimmed.starts_with(START_MARKER) {
            start = Some(offset + line.len());
        } else if start.is_some() && trimmed.starts_with(END_MARKER) {
            end = Some(offset);
            break;
        }
        offset += line.len();
    }
    match (start, end) {
        (Some(s), Some(e)) if s <= e => &raw_text[s..e],
        _ => raw_text,
    }
}

fn normalize_chunk(chunk: &str) -> Option<String> {
    let word: String = chunk
        .chars()
        .filter(|c| c.is_alphabetic() || *c == '\'')
        .flat_map(char::to_lowercase)
        .collect();
    // apostrophes survive only inside a word ("don't"), not as quotes
    let word = word.trim_matches('\'');
    if word.is_empty() {
        None
    } else {
        Some(word.to_string())
    }
}

/// Split on whitespace runs and normalize each chunk.
pub fn tokenize(raw_text: &str, source_id: impl Into<String>) -> TokenSequence {
    let tokens = raw_text.split_whitespace().filter_map(normalize_chunk).collect();
    TokenSequence::new(tokens, source_id)
}

/// Read, decode, strip boilerplate and tokenize a file.
pub fn load_text(path: &std::path::Path, encoding: Encoding) -> Result<TokenSequence> {
    let bytes = std::fs::read(path)?;
    let text = decode_bytes(&bytes, encoding)?;
    Ok(tokenize(strip_boilerplate(&text), path.display().to_string()))
}
