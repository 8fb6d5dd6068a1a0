//! Reduced words in the free group on `a_i, b_i, u_j`.
//!
//! Letters are nonzero integers: `a_i -> 2i-1`, `b_i -> 2i`, `u_j -> 2g+j`,
//! negative for inverses. Text form uses `a1 b1 u2`, capitals for inverses.

use crate::error::{Error, Result};

pub type Letter = i32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

pub fn a(i: usize) -> Letter {
    (2 * i - 1) as Letter
}

pub fn b(i: usize) -> Letter {
    (2 * i) as Letter
}

pub fn u(g: usize, j: usize) -> Letter {
    (2 * g + j) as Letter
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn from_letters(ls: &[Letter]) -> Self {
        Word(ls.to_vec()).reduced()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn mul(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        for &l in &o.0 {
            if v.last() == Some(&-l) {
                v.pop();
            } else {
                v.push(l);
            }
        }
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self * o * self^{-1}`
    pub fn conj(&self, o: &Word) -> Word {
        self.mul(o).mul(&self.inv())
    }

    /// `[x, y] = x y x^{-1} y^{-1}`
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inv()).mul(&y.inv())
    }

    pub fn product(ws: &[Word]) -> Word {
        ws.iter().fold(Word::empty(), |acc, w| acc.mul(w))
    }

    /// Cyclically reduced form together with the conjugator: `self = c r c^{-1}`.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let w = self.reduced().0;
        let mut i = 0;
        let mut j = w.len();
        while j > i + 1 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        (Word(w[..i].to_vec()), Word(w[i..j].to_vec()))
    }

    /// Least cyclic rotation of the cyclically reduced core; equal for
    /// conjugate words.
    pub fn conjugacy_key(&self) -> Vec<Letter> {
        let core = self.cyclic_core().1 .0;
        if core.is_empty() {
            return core;
        }
        (0..core.len())
            .map(|s| {
                let mut r = core[s..].to_vec();
                r.extend_from_slice(&core[..s]);
                r
            })
            .min_by(|x, y| shortlex_cmp(x, y))
            .expect("nonempty")
    }

    pub fn is_conjugate(&self, o: &Word) -> bool {
        self.conjugacy_key() == o.conjugacy_key()
    }

    /// Replace each generator letter by a word.
    pub fn substitute(&self, images: &dyn Fn(Letter) -> Word) -> Word {
        let mut out = Word::empty();
        for &l in &self.0 {
            let w = images(l.abs());
            out = out.mul(&if l > 0 { w } else { w.inv() });
        }
        out
    }
}

/// Letter order `a1 < A1 < b1 < B1 < ...`.
pub fn letter_key(l: Letter) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

pub fn shortlex_cmp(x: &[Letter], y: &[Letter]) -> std::cmp::Ordering {
    x.len().cmp(&y.len()).then_with(|| {
        x.iter()
            .map(|&l| letter_key(l))
            .cmp(y.iter().map(|&l| letter_key(l)))
    })
}

pub fn letter_name(l: Letter, g: usize) -> String {
    let k = l.unsigned_abs() as usize;
    let (c, i) = if k <= 2 * g {
        (if k % 2 == 1 { 'a' } else { 'b' }, (k + 1) / 2)
    } else {
        ('u', k - 2 * g)
    };
    let c = if l < 0 { c.to_ascii_uppercase() } else { c };
    format!("{c}{i}")
}

pub fn format_word(w: &Word, g: usize) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.0.iter().map(|&l| letter_name(l, g)).collect::<Vec<_>>().join(" ")
}

/// Parse `a1 B2 u1`, `a1B2u1` or `1` (identity).
pub fn parse_word(s: &str, g: usize, n: usize) -> Result<Word> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Word::empty());
    }
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let idx: usize = chars[start..i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| Error::Parse(format!("missing index after '{c}' in '{s}'")))?;
        let lower = c.to_ascii_lowercase();
        let letter = match lower {
            'a' | 'b' if idx >= 1 && idx <= g => {
                if lower == 'a' {
                    a(idx)
                } else {
                    b(idx)
                }
            }
            'u' if idx >= 1 && idx <= n.max(1) => u(g, idx),
            _ => return Err(Error::Parse(format!("unknown generator '{c}{idx}' in '{s}'"))),
        };
        out.push(if c.is_ascii_uppercase() { -letter } else { letter });
    }
    Ok(Word(out).reduced())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let w = parse_word("a1 b1 A1 B1 u2", 2, 2).unwrap();
        assert_eq!(format_word(&w, 2), "a1 b1 A1 B1 u2");
        assert_eq!(parse_word("a1A1", 1, 1).unwrap(), Word::empty());
        assert!(parse_word("c1", 1, 1).is_err());
        assert!(parse_word("a3", 2, 0).is_err());
    }

    #[test]
    fn conjugacy() {
        let x = Word(vec![1, 2, -1]);
        assert!(x.is_conjugate(&Word(vec![2])));
        let y = Word(vec![1, 2]);
        assert!(y.is_conjugate(&Word(vec![2, 1])));
        assert!(!y.is_conjugate(&Word(vec![1, -2])));
    }
}
