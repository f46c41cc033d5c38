//! Letters, freely reduced words and the shortlex order.
//!
//! A letter is stored as a small code: generator `g` is `2g`, its inverse is
//! `2g + 1`. Comparing codes therefore orders the alphabet as
//! `a < a^-1 < b < b^-1 < ...`, which is the order every canonical choice in
//! the crate (shortlex representatives, BFS discovery) is built on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        debug_assert!(generator < 128);
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// +1 for a generator, -1 for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
///
/// Every constructor reduces, so the invariant holds for any `Word` value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Wraps letters already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn push(&self, l: Letter) -> Word {
        self.mul(&Word::letter(l))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    /// Exponent sum of every generator, for `rank` generators.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for l in &self.0 {
            sums[l.generator()] += l.sign();
        }
        sums
    }

    /// Cyclic reduction: strips matching first/last inverse pairs.
    pub fn cyclically_reduced(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo] == self.0[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(self.0[lo..hi].to_vec())
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word::reduce(iter)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[l.generator()])?;
            if l.is_inverse() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Default generator names: `a, b, c, ...` and then `x26, x27, ...`.
pub fn default_names(rank: usize) -> Vec<String> {
    (0..rank)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

/// Parses a word such as `a b a^-1 b^-1`, `aba^-1b^-1` or `a^3 b^-2`.
///
/// Generator names are matched longest-first, so juxtaposition works whenever
/// the names are unambiguous. `1` (or an empty string) denotes the identity.
/// The result is the raw letter sequence; call [`Word::reduce`] to reduce it.
pub fn parse_letters(text: &str, names: &[String]) -> Result<Vec<Letter>> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(names[i].len()));
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() || c == b'*' || c == b'.' {
            pos += 1;
            continue;
        }
        if c == b'1' && !names.iter().any(|n| text[pos..].starts_with(n.as_str())) {
            pos += 1;
            continue;
        }
        let gen = order
            .iter()
            .copied()
            .find(|&i| text[pos..].starts_with(names[i].as_str()))
            .ok_or_else(|| Error::Parse(format!("unknown generator at `{}`", &text[pos..])))?;
        pos += names[gen].len();
        let mut exponent: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let start = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            exponent = text[start..pos]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?;
        }
        let letter = Letter::new(gen, exponent < 0);
        for _ in 0..exponent.unsigned_abs() {
            out.push(letter);
        }
    }
    Ok(out)
}

pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    Ok(Word::reduce(parse_letters(text, names)?))
}

/// All reduced words of exactly `len` letters over `rank` generators, in
/// lexicographic (letter code) order.
pub fn words_of_length(rank: usize, len: usize) -> Vec<Word> {
    let mut level = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(level.len() * (2 * rank).saturating_sub(1).max(1));
        for w in &level {
            for code in 0..2 * rank {
                let l = Letter::from_code(code);
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                let mut letters = w.letters().to_vec();
                letters.push(l);
                next.push(Word::from_reduced(letters));
            }
        }
        level = next;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        default_names(2)
    }

    #[test]
    fn free_cancellation() {
        let n = names();
        assert_eq!(parse_word("a a^-1 b", &n).unwrap(), parse_word("b", &n).unwrap());
        assert_eq!(parse_word("a b b^-1 a", &n).unwrap(), parse_word("a a", &n).unwrap());
        assert_eq!(parse_word("a^3 a^-3", &n).unwrap(), Word::identity());
    }

    #[test]
    fn juxtaposed_and_exponent_forms_agree() {
        let n = names();
        let a = parse_word("aba^-1b^-1", &n).unwrap();
        let b = parse_word("a b a^-1 b^-1", &n).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.display(&n).to_string(), "a b a^-1 b^-1");
        assert_eq!(Word::identity().display(&n).to_string(), "1");
    }

    #[test]
    fn unknown_generator_is_rejected() {
        assert!(parse_word("a c", &names()).is_err());
    }

    #[test]
    fn shortlex_orders_by_length_then_letters() {
        let n = names();
        let mut ws: Vec<Word> = ["b", "a^-1", "a a", "1", "a"]
            .iter()
            .map(|s| parse_word(s, &n).unwrap())
            .collect();
        ws.sort_by(|x, y| x.shortlex_cmp(y));
        let shown: Vec<String> = ws.iter().map(|w| w.display(&n).to_string()).collect();
        assert_eq!(shown, ["1", "a", "a^-1", "b", "a a"]);
    }

    #[test]
    fn sphere_sizes_in_free_group() {
        for len in 1..6 {
            assert_eq!(words_of_length(2, len).len(), 4 * 3usize.pow(len as u32 - 1));
        }
    }

    #[test]
    fn cyclic_reduction() {
        let n = names();
        let w = parse_word("b a b^-1", &n).unwrap();
        assert_eq!(w.cyclically_reduced(), parse_word("a", &n).unwrap());
    }
}
