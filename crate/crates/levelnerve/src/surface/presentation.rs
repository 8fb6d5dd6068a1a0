//! Standard presentation of `Π_{g,n}` and abelianization.

use serde::{Deserialize, Serialize};

use super::word::{self, format_word, Word};
use crate::error::{arg, Result};
use crate::symplectic::Vector;

/// `⟨α_i, β_i, u_j | Π[α_i, β_i] · u_n ⋯ u_1⟩`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    pub g: usize,
    pub n: usize,
    pub generators: Vec<String>,
    pub relator: String,
}

pub fn check_signature(g: usize, n: usize) -> Result<()> {
    if 2 * g + n <= 2 {
        return arg(format!("signature (g={g}, n={n}) is not hyperbolic"));
    }
    Ok(())
}

pub fn standard_presentation(g: usize, n: usize) -> Result<SurfacePresentation> {
    check_signature(g, n)?;
    let mut generators = Vec::new();
    for i in 1..=g {
        generators.push(format!("a{i}"));
        generators.push(format!("b{i}"));
    }
    for j in 1..=n {
        generators.push(format!("u{j}"));
    }
    Ok(SurfacePresentation {
        g,
        n,
        generators,
        relator: format_word(&relator(g, n), g),
    })
}

/// The relator word, with `u_j` as letters.
pub fn relator(g: usize, n: usize) -> Word {
    let mut w = commutator_product(g);
    for j in (1..=n).rev() {
        w = w.mul(&Word::letter(word::u(g, j)));
    }
    w
}

/// `Π [α_i, β_i]`
pub fn commutator_product(g: usize) -> Word {
    (1..=g).fold(Word::empty(), |acc, i| {
        acc.mul(&Word::commutator(
            &Word::letter(word::a(i)),
            &Word::letter(word::b(i)),
        ))
    })
}

/// Free-group model of `Π_{g,n}`: free on `α, β, u_2..u_n`, with `u_1`
/// eliminated. For `n = 0` this is the `(g,1)` model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub g: usize,
    pub n: usize,
}

impl Model {
    pub fn new(g: usize, n: usize) -> Result<Self> {
        check_signature(g, n)?;
        Ok(Model { g, n })
    }

    /// Punctures of the free model (at least one).
    pub fn np(&self) -> usize {
        self.n.max(1)
    }

    /// Letters generating the free group, in order.
    pub fn free_letters(&self) -> Vec<i32> {
        let mut v: Vec<i32> = (1..=2 * self.g as i32).collect();
        for j in 2..=self.np() {
            v.push(word::u(self.g, j));
        }
        v
    }

    pub fn free_rank(&self) -> usize {
        2 * self.g + self.np() - 1
    }

    /// All presentation letters `α, β, u_1..u_np`.
    pub fn all_letters(&self) -> Vec<i32> {
        let mut v: Vec<i32> = (1..=2 * self.g as i32).collect();
        for j in 1..=self.np() {
            v.push(word::u(self.g, j));
        }
        v
    }

    /// `u_1 = (Π[α,β] u_n ⋯ u_2)^{-1}` in the free model.
    pub fn u1_word(&self) -> Word {
        let mut w = commutator_product(self.g);
        for j in (2..=self.np()).rev() {
            w = w.mul(&Word::letter(word::u(self.g, j)));
        }
        w.inv()
    }

    pub fn u_word(&self, j: usize) -> Word {
        if j == 1 {
            self.u1_word()
        } else {
            Word::letter(word::u(self.g, j))
        }
    }

    /// Rewrite a presentation word into the free model.
    pub fn to_free(&self, w: &Word) -> Word {
        let u1 = word::u(self.g, 1);
        if !w.0.iter().any(|l| l.abs() == u1) {
            return w.clone();
        }
        let sub = self.u1_word();
        w.substitute(&|l| if l == u1 { sub.clone() } else { Word::letter(l) })
    }

    pub fn is_u(&self, l: i32) -> Option<usize> {
        let k = l.unsigned_abs() as usize;
        (k > 2 * self.g).then(|| k - 2 * self.g)
    }

    /// Abelianization over the free basis `α, β, u_2..u_np` (open target)
    /// or `H_1(S_g)` (closed target), reduced mod `m`.
    pub fn homology(&self, w: &Word, m: i64, closed: bool) -> Vector {
        let g = self.g;
        let len = if closed { 2 * g } else { self.free_rank() };
        let mut v = vec![0i64; len];
        for &l in &w.0 {
            let s = l.signum() as i64;
            let k = l.unsigned_abs() as usize;
            if k <= 2 * g {
                v[k - 1] += s;
            } else if !closed {
                let j = k - 2 * g;
                if j == 1 {
                    for x in v.iter_mut().skip(2 * g) {
                        *x -= s;
                    }
                } else {
                    v[2 * g + j - 2] += s;
                }
            }
        }
        if m > 0 {
            for x in v.iter_mut() {
                *x = x.rem_euclid(m);
            }
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Open,
    Closed,
}

/// Abelianized class of a word; `closed` also kills every `u_i`.
pub fn homology_class(w: &Word, g: usize, n: usize, m: i64, target: Target) -> Result<Vector> {
    if m == 1 || m < 0 {
        return arg("modulus must be 0 or at least 2");
    }
    let model = Model::new(g, n)?;
    Ok(model.homology(w, m, target == Target::Closed))
}
