//! Words over a signed generator alphabet and free-group reductions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Traversal direction of a letter: `Plus` reads a generator, `Minus` its
/// inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One signed generator occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: usize, sign: Sign) -> Letter {
        Letter { gen, sign }
    }

    pub fn positive(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Plus }
    }

    pub fn negative(gen: usize) -> Letter {
        Letter { gen, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: self.sign.flip() }
    }
}

/// An ordered, duplicate-free list of generator names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("generator name is empty")]
    EmptyName,
    #[error("generator name `{0}` declared twice")]
    DuplicateName(String),
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Alphabet, AlphabetError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(AlphabetError::EmptyName);
            }
            if names[..i].contains(n) {
                return Err(AlphabetError::DuplicateName(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A finite sequence of signed letters. The free-group currency of the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse word at byte {offset}: {message}")]
pub struct WordParseError {
    pub offset: usize,
    pub message: String,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// The unique freely reduced form: no adjacent inverse pair remains.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if stack.last().copied() == Some(l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Returns `(core, conjugator)` with `self` freely equal to
    /// `conjugator · core · conjugator⁻¹` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let reduced = self.free_reduce();
        let mut letters = reduced.letters;
        let mut prefix: Vec<Letter> = Vec::new();
        while letters.len() >= 2 && *letters.first().unwrap() == letters.last().unwrap().inverse() {
            prefix.push(letters.remove(0));
            letters.pop();
        }
        (Word { letters }, Word { letters: prefix })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_freely_reduced() {
            return false;
        }
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => f != l.inverse() || self.len() == 1,
            _ => true,
        }
    }

    /// Renders the word using the alphabet's names, inverses as `^-1`.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(alphabet.name(l.gen));
            let exp: i64 = match l.sign {
                Sign::Plus => run as i64,
                Sign::Minus => -(run as i64),
            };
            if exp != 1 {
                out.push('^');
                out.push_str(&exp.to_string());
            }
            i += run;
        }
        out
    }

    /// Parses concatenations of generator names with optional `^k` powers
    /// (negative exponents invert) and parenthesized groups, e.g. `(ab)^4`,
    /// `babcba^-1c^-1`, `S T S^-1`. Generator names match greedily; `1`
    /// denotes the empty word.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Word, WordParseError> {
        let mut parser = WordParser { alphabet, bytes: text.as_bytes(), pos: 0 };
        let word = parser.parse_sequence(0)?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(word)
    }
}

/// Longest common factor of the periodic words `u^∞` and `v^∞` over all
/// alignments, or `None` when some alignment agrees forever (the periodic
/// words coincide up to rotation). With `skip_aligned`, alignments with
/// `i ≡ j (mod |u|)` are ignored — for self-comparisons those are the
/// rotation-induced overlaps.
pub fn periodic_lce(u: &[Letter], v: &[Letter], skip_aligned: bool) -> Option<usize> {
    assert!(!u.is_empty() && !v.is_empty());
    let p = u.len();
    let q = v.len();
    let cap = p + q;
    let mut best = 0usize;
    for i in 0..p {
        for j in 0..q {
            if skip_aligned && u == v && i == j {
                continue;
            }
            let mut t = 0usize;
            while t < cap && u[(i + t) % p] == v[(j + t) % q] {
                t += 1;
            }
            if t >= cap {
                return None;
            }
            best = best.max(t);
        }
    }
    Some(best)
}

/// The primitive root of a cyclic word: the shortest `x` with `w = x^k`.
pub fn primitive_root(w: &Word) -> (Word, usize) {
    let n = w.len();
    assert!(n > 0);
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        if (0..n).all(|i| w.letters[i] == w.letters[i % d]) {
            return (Word::from_letters(w.letters[..d].to_vec()), n / d);
        }
    }
    unreachable!()
}

struct WordParser<'a> {
    alphabet: &'a Alphabet,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> WordParser<'a> {
    fn err(&self, message: &str) -> WordParseError {
        WordParseError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && (self.bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn parse_sequence(&mut self, depth: usize) -> Result<Word, WordParseError> {
        let mut word = Word::empty();
        loop {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                return Ok(word);
            }
            match self.bytes[self.pos] {
                b')' => {
                    if depth == 0 {
                        return Err(self.err("unmatched `)`"));
                    }
                    return Ok(word);
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.parse_sequence(depth + 1)?;
                    self.skip_ws();
                    if self.pos >= self.bytes.len() || self.bytes[self.pos] != b')' {
                        return Err(self.err("expected `)`"));
                    }
                    self.pos += 1;
                    let exp = self.parse_exponent()?;
                    word = word.concat(&powered(&inner, exp));
                }
                b'1' => {
                    // `1` is the empty word unless it begins a generator name.
                    if self.match_generator().is_some() {
                        let (gen, len) = self.match_generator().unwrap();
                        self.pos += len;
                        let exp = self.parse_exponent()?;
                        word = word.concat(&powered(&Word::from_letters(vec![Letter::positive(gen)]), exp));
                    } else {
                        self.pos += 1;
                    }
                }
                _ => {
                    let Some((gen, len)) = self.match_generator() else {
                        return Err(self.err("expected generator name"));
                    };
                    self.pos += len;
                    let exp = self.parse_exponent()?;
                    word = word.concat(&powered(&Word::from_letters(vec![Letter::positive(gen)]), exp));
                }
            }
        }
    }

    /// Longest generator name starting at the cursor.
    fn match_generator(&self) -> Option<(usize, usize)> {
        let rest = &self.bytes[self.pos..];
        let mut best: Option<(usize, usize)> = None;
        for (idx, name) in self.alphabet.names().iter().enumerate() {
            let nb = name.as_bytes();
            if rest.starts_with(nb) {
                if best.map_or(true, |(_, blen)| nb.len() > blen) {
                    best = Some((idx, nb.len()));
                }
            }
        }
        best
    }

    fn parse_exponent(&mut self) -> Result<i64, WordParseError> {
        let save = self.pos;
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'^' {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
                self.pos += 1;
            }
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            text.parse::<i64>().map_err(|_| self.err("expected integer exponent"))
        } else {
            self.pos = save;
            Ok(1)
        }
    }
}

fn powered(word: &Word, exp: i64) -> Word {
    if exp >= 0 {
        word.pow(exp as usize)
    } else {
        word.inverse().pow((-exp) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(&ab(), text).unwrap()
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("a b b^-1 c").free_reduce(), w("a c"));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        assert_eq!(w("a a^-1").free_reduce(), Word::empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("b^-1 a b").cyclic_reduce();
        assert_eq!(core, w("a"));
        assert_eq!(conj, w("b^-1"));

        let (core, conj) = w("a b").cyclic_reduce();
        assert_eq!(core, w("a b"));
        assert!(conj.is_empty());

        let (core, conj) = w("a b b^-1 a").cyclic_reduce();
        assert_eq!(core, w("a a"));
        assert!(conj.is_empty());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(w("(ab)^4").len(), 8);
        assert_eq!(w("(ab)^4"), w("abababab"));
        assert_eq!(w("babcba^-1c^-1").len(), 7);
        assert_eq!(w("a^-3"), w("a^-1a^-1a^-1"));
        assert_eq!(w("1"), Word::empty());
        assert!(Word::parse(&ab(), "x").is_err());
        assert!(Word::parse(&ab(), "(ab").is_err());
    }

    #[test]
    fn multichar_names_parse_greedily() {
        let alphabet = Alphabet::new(["s", "st"]).unwrap();
        let word = Word::parse(&alphabet, "st s").unwrap();
        assert_eq!(word.letters, vec![Letter::positive(1), Letter::positive(0)]);
    }

    #[test]
    fn display_round_trip() {
        for text in ["a b^-1 c", "(ab)^3", "a^2 c^-2 b"] {
            let word = w(text);
            assert_eq!(Word::parse(&ab(), &word.display(&ab())).unwrap(), word);
        }
        assert_eq!(Word::empty().display(&ab()), "1");
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert_eq!(Alphabet::new(["a", "a"]).unwrap_err(), AlphabetError::DuplicateName("a".into()));
        assert_eq!(Alphabet::new(["a", ""]).unwrap_err(), AlphabetError::EmptyName);
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..3, prop::bool::ANY), 0..40).prop_map(|ls| {
            Word::from_letters(
                ls.into_iter()
                    .map(|(g, s)| Letter::new(g, if s { Sign::Plus } else { Sign::Minus }))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_shortening(word in arb_word()) {
            let r = word.free_reduce();
            prop_assert!(r.len() <= word.len());
            prop_assert_eq!(r.free_reduce(), r.clone());
            prop_assert!(r.is_freely_reduced());
            // parity of the length is preserved
            prop_assert_eq!(r.len() % 2, word.len() % 2);
        }

        #[test]
        fn cyclic_core_is_fixed_point(word in arb_word()) {
            let (core, _) = word.cyclic_reduce();
            let (core2, conj2) = core.cyclic_reduce();
            prop_assert_eq!(core2, core);
            prop_assert!(conj2.is_empty());
        }
    }
}
