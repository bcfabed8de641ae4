//! Words over finite alphabets and square detection.
//!
//! Letters are dense indices `0..l`. Positions in the public API are 1-based,
//! so an `i`-square starting at `j` covers positions `j..=j + 2i - 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// An alphabet of `size` letters, indexed `0..size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn contains(self, letter: u8) -> bool {
        usize::from(letter) < self.size
    }
}

/// A finite word, stored as letter indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word { letters }
    }

    /// Builds a word after checking every letter against `alphabet`.
    pub fn over(letters: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&c| !alphabet.contains(c)) {
            return Err(Error::LetterOutOfRange {
                letter,
                size: alphabet.size(),
            });
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at 1-based position `j`.
    pub fn at(&self, j: usize) -> u8 {
        self.letters[j - 1]
    }

    pub fn push(&mut self, letter: u8) {
        self.letters.push(letter);
    }

    pub fn appended(&self, letter: u8) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.extend_from_slice(&self.letters);
        letters.push(letter);
        Word { letters }
    }

    pub fn prepended(&self, letter: u8) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Word { letters }
    }

    /// Largest letter index plus one, or zero for the empty word.
    pub fn letter_span(&self) -> usize {
        self.letters.iter().max().map_or(0, |&m| usize::from(m) + 1)
    }
}

impl From<Vec<u8>> for Word {
    fn from(letters: Vec<u8>) -> Self {
        Word { letters }
    }
}

/// Renders letters as `a`, `b`, `c`, ... (indices above 25 are not printable this way).
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            fmt::Write::write_char(f, letter_char(c))?;
        }
        Ok(())
    }
}

/// Parses lowercase letters `a..=z` as indices `0..=25`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as u8 - b'a'),
                _ => Err(Error::LetterOutOfRange {
                    letter: u8::MAX,
                    size: 26,
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word::new)
    }
}

pub fn letter_char(letter: u8) -> char {
    if letter < 26 {
        char::from(b'a' + letter)
    } else {
        '?'
    }
}

pub fn render_letters(letters: &[u8]) -> String {
    letters.iter().map(|&c| letter_char(c)).collect()
}

/// A strictly increasing sequence of square lengths `i_r < ... < i_2 < i_1`.
///
/// Stored in ascending order. [`LengthSeq::get`] uses the descending
/// 1-based index where `get(1)` is the largest length `i_1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LengthSeq {
    ascending: Vec<usize>,
}

impl LengthSeq {
    pub fn new(ascending: Vec<usize>) -> Result<Self> {
        if ascending.is_empty() {
            return Err(Error::EmptyLengths);
        }
        if ascending[0] == 0 {
            return Err(Error::ZeroLength);
        }
        if let Some(k) = ascending.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { position: k + 2 });
        }
        Ok(LengthSeq { ascending })
    }

    pub fn from_slice(ascending: &[usize]) -> Result<Self> {
        LengthSeq::new(ascending.to_vec())
    }

    /// Lengths in ascending order, `i_r` first.
    pub fn ascending(&self) -> &[usize] {
        &self.ascending
    }

    /// Number of lengths `r`.
    pub fn r(&self) -> usize {
        self.ascending.len()
    }

    /// `i_t` for `1 <= t <= r`; `get(1)` is the largest length.
    pub fn get(&self, t: usize) -> usize {
        self.ascending[self.r() - t]
    }

    pub fn largest(&self) -> usize {
        self.ascending[self.r() - 1]
    }

    pub fn smallest(&self) -> usize {
        self.ascending[0]
    }

    /// Length of the vertex words of the avoidance graph, `N = 2 i_1`.
    pub fn ground_size(&self) -> usize {
        2 * self.largest()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.ascending.binary_search(&i).is_ok()
    }

    /// The sequence made of the `v` largest lengths `(i_v, ..., i_1)`.
    pub fn top(&self, v: usize) -> LengthSeq {
        LengthSeq {
            ascending: self.ascending[self.r() - v..].to_vec(),
        }
    }

    /// Every nonempty subsequence of exactly `size` lengths, in lexicographic order of
    /// the chosen ascending positions.
    pub fn subsequences(&self, size: usize) -> Vec<LengthSeq> {
        let r = self.r();
        let mut out = Vec::new();
        if size == 0 || size > r {
            return out;
        }
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            out.push(LengthSeq {
                ascending: pick.iter().map(|&p| self.ascending[p]).collect(),
            });
            let Some(k) = (0..size).rev().find(|&k| pick[k] < r - size + k) else {
                break;
            };
            pick[k] += 1;
            for m in k + 1..size {
                pick[m] = pick[m - 1] + 1;
            }
        }
        out
    }
}

impl fmt::Display for LengthSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.ascending.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// Location of a square: its half-length and 1-based start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Square {
    pub length: usize,
    pub start: usize,
}

fn square_at(letters: &[u8], i: usize, j0: usize) -> bool {
    letters[j0..j0 + i] == letters[j0 + i..j0 + 2 * i]
}

/// Whether `w` has an `i`-square starting at 1-based position `j`.
pub fn has_square_at(w: &Word, i: usize, j: usize) -> Result<bool> {
    if i == 0 || j == 0 || j + 2 * i - 1 > w.len() {
        return Err(Error::SquareOutOfRange {
            length: i,
            start: j,
            word_len: w.len(),
        });
    }
    Ok(square_at(&w.letters, i, j - 1))
}

/// First square (by length, then start) of any length in `s`, if one exists.
pub fn find_square(w: &Word, s: &LengthSeq) -> Option<Square> {
    let n = w.len();
    s.ascending().iter().find_map(|&i| {
        if 2 * i > n {
            return None;
        }
        (0..=n - 2 * i)
            .find(|&j0| square_at(&w.letters, i, j0))
            .map(|j0| Square {
                length: i,
                start: j0 + 1,
            })
    })
}

pub fn is_s_squarefree(w: &Word, s: &LengthSeq) -> bool {
    find_square(w, s).is_none()
}

/// Squares ending at the last letter of `w·a`, shortest first.
///
/// Requires `w` to be `s`-squarefree: then any square of `w·a` must use the new
/// letter, so only the `|s|` suffix windows of length `2i` are inspected.
pub fn squares_created_by_append(w: &Word, a: u8, s: &LengthSeq) -> Vec<Square> {
    let mut out = Vec::new();
    let n = w.len() + 1;
    for &i in s.ascending() {
        if 2 * i > n {
            break;
        }
        let start = n - 2 * i;
        let first = &w.letters[start..start + i];
        let second_head = &w.letters[start + i..n - 1];
        if first[..i - 1] == *second_head && first[i - 1] == a {
            out.push(Square {
                length: i,
                start: start + 1,
            });
        }
    }
    out
}

/// The shortest square that appending `a` to `w` creates, if any. Same precondition as
/// [`squares_created_by_append`].
pub fn square_created_by_append(w: &Word, a: u8, s: &LengthSeq) -> Option<Square> {
    squares_created_by_append(w, a, s).into_iter().next()
}

/// The shortest square that prepending `a` to `w` creates; such a square starts at 1.
/// Requires `w` to be `s`-squarefree.
pub fn square_created_by_prepend(w: &Word, a: u8, s: &LengthSeq) -> Option<Square> {
    let n = w.len() + 1;
    s.ascending()
        .iter()
        .copied()
        .take_while(|&i| 2 * i <= n)
        .find_map(|i| {
            // a·w[0..2i-1] is a square iff a = w[i-1] and w[0..i-1] = w[i..2i-1].
            (w.letters[i - 1] == a && w.letters[..i - 1] == w.letters[i..2 * i - 1]).then_some(
                Square {
                    length: i,
                    start: 1,
                },
            )
        })
}

pub fn reverse(w: &Word) -> Word {
    let mut letters = w.letters.clone();
    letters.reverse();
    Word { letters }
}
