//! Group presentations and their text format.
//!
//! ```text
//! # surface group of genus 2
//! generators: a b c d
//! kind: dehn
//! a b a^-1 b^-1 c d c^-1 d^-1
//! ```
//!
//! The first non-comment line lists the generators (the `generators:` prefix is
//! optional). An optional `kind:` line selects `free`, `dehn` or `generic`; the
//! remaining lines are relators. Without a `kind:` line a presentation with no
//! relators is free and one with relators is generic.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{default_names, parse_letters, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationKind {
    /// Free group; free reduction is a complete normal form.
    Free,
    /// Relators declared to satisfy Dehn's algorithm.
    Dehn,
    /// Anything else. Balls are built by bounded coset enumeration and may
    /// contain unidentified duplicates when a needed van Kampen diagram
    /// leaves the enumeration region.
    Generic,
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresentationKind::Free => "free",
            PresentationKind::Dehn => "dehn",
            PresentationKind::Generic => "generic",
        })
    }
}

impl FromStr for PresentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "free" => Ok(PresentationKind::Free),
            "dehn" => Ok(PresentationKind::Dehn),
            "generic" => Ok(PresentationKind::Generic),
            other => Err(Error::Parse(format!("unknown presentation kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    kind: PresentationKind,
    /// Cyclic conjugates of every relator and its inverse.
    symmetrized: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>, kind: PresentationKind) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate or empty generator `{n}`")));
            }
        }
        if kind == PresentationKind::Free && !relators.is_empty() {
            return Err(Error::InvalidPresentation("a free presentation has no relators".into()));
        }
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidPresentation("relator reduces to the identity".into()));
            }
            if let Some(l) = r.letters().iter().find(|l| l.generator() >= names.len()) {
                return Err(Error::UnknownGenerator { index: l.generator(), rank: names.len() });
            }
        }
        let symmetrized = symmetrize(&relators);
        Ok(Presentation { names, relators, kind, symmetrized })
    }

    /// The free group on `rank` generators named `a, b, ...`.
    pub fn free(rank: usize) -> Self {
        Presentation::new(default_names(rank), Vec::new(), PresentationKind::Free).expect("valid free presentation")
    }

    /// `<a, b | a b a^-1 b^-1>`, the integer lattice.
    pub fn z2() -> Self {
        Presentation::parse("generators: a b\na b a^-1 b^-1").expect("valid presentation")
    }

    /// Fundamental group of the closed orientable surface of genus 2.
    pub fn surface_genus2() -> Self {
        Presentation::parse("generators: a b c d\nkind: dehn\na b a^-1 b^-1 c d c^-1 d^-1").expect("valid presentation")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut kind: Option<PresentationKind> = None;
        let mut relator_lines = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if names.is_none() {
                let list = line.strip_prefix("generators:").unwrap_or(line);
                names = Some(
                    list.split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect(),
                );
                continue;
            }
            if let Some(k) = line.strip_prefix("kind:") {
                kind = Some(k.parse()?);
                continue;
            }
            relator_lines.push(line.to_string());
        }
        let names = names.ok_or_else(|| Error::Parse("missing generator line".into()))?;
        let relators = relator_lines
            .iter()
            .map(|l| Ok(Word::reduce(parse_letters(l, &names)?)))
            .collect::<Result<Vec<_>>>()?;
        let kind = kind.unwrap_or(if relators.is_empty() {
            PresentationKind::Free
        } else {
            PresentationKind::Generic
        });
        Presentation::new(names, relators, kind)
    }

    /// Serializes back into the text format; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\nkind: {}\n", self.names.join(" "), self.kind);
        for r in &self.relators {
            out.push_str(&r.display(&self.names).to_string());
            out.push('\n');
        }
        out
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn symmetrized_relators(&self) -> &[Word] {
        &self.symmetrized
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Ok(Word::reduce(parse_letters(text, &self.names)?))
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Reduces a raw letter sequence: free reduction always, plus Dehn's
    /// algorithm for `kind = dehn`.
    pub fn reduce_word(&self, letters: &[Letter]) -> Result<Word> {
        if let Some(l) = letters.iter().find(|l| l.generator() >= self.rank()) {
            return Err(Error::UnknownGenerator { index: l.generator(), rank: self.rank() });
        }
        let w = Word::reduce(letters.iter().copied());
        Ok(match self.kind {
            PresentationKind::Dehn => self.dehn_reduce(w),
            _ => w,
        })
    }

    /// Repeatedly replaces a subword that is more than half of a cyclic
    /// relator by the inverse of the shorter complement.
    pub fn dehn_reduce(&self, w: Word) -> Word {
        let mut current = w;
        'outer: loop {
            let letters = current.letters();
            for start in 0..letters.len() {
                for r in &self.symmetrized {
                    let rl = r.letters();
                    let m = letters[start..].iter().zip(rl).take_while(|(x, y)| x == y).count();
                    if 2 * m > rl.len() {
                        let replacement = rl[m..].iter().rev().map(|l| l.inverse());
                        let next: Vec<Letter> = letters[..start]
                            .iter()
                            .copied()
                            .chain(replacement)
                            .chain(letters[start + m..].iter().copied())
                            .collect();
                        current = Word::reduce(next);
                        continue 'outer;
                    }
                }
            }
            return current;
        }
    }
}

fn symmetrize(relators: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut seen = HashSet::new();
    for r in relators {
        let base = r.cyclically_reduced();
        for w in [base.clone(), base.inverse()] {
            let l = w.letters();
            for shift in 0..l.len() {
                let rotated: Vec<Letter> = l[shift..].iter().chain(&l[..shift]).copied().collect();
                let rotated = Word::reduce(rotated);
                if seen.insert(rotated.clone()) {
                    out.push(rotated);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_format() {
        let p = Presentation::parse("# lattice\na b\na b a^-1 b^-1\n").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.kind(), PresentationKind::Generic);
        assert_eq!(p.relators().len(), 1);
        let again = Presentation::parse(&p.to_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn free_presentation_rejects_relators() {
        assert!(Presentation::parse("a b\nkind: free\na b").is_err());
        assert!(Presentation::parse("a a\n").is_err());
    }

    #[test]
    fn free_reduction_examples() {
        let p = Presentation::free(2);
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert_eq!(p.reduce_word(&[a, a.inverse(), b]).unwrap(), Word::letter(b));
        assert_eq!(p.reduce_word(&[a, b, b.inverse(), a]).unwrap(), p.parse_word("a a").unwrap());
        assert!(matches!(
            p.reduce_word(&[Letter::new(5, false)]),
            Err(Error::UnknownGenerator { index: 5, .. })
        ));
    }

    #[test]
    fn dehn_reduction_shortens_long_relator_pieces() {
        let p = Presentation::surface_genus2();
        let raw = crate::word::parse_letters("a b a^-1 b^-1 c", p.names()).unwrap();
        let reduced = p.reduce_word(&raw).unwrap();
        assert_eq!(reduced, p.parse_word("d c d^-1").unwrap());
        let relator = crate::word::parse_letters("a b a^-1 b^-1 c d c^-1 d^-1", p.names()).unwrap();
        assert!(p.reduce_word(&relator).unwrap().is_empty());
    }
}
