//! Dehn twists as explicit automorphisms of the free model of `Π_{g,n}`.

use serde::{Deserialize, Serialize};

use super::presentation::Model;
use super::word::{self, format_word, Letter, Word};
use crate::error::Result;
use crate::symplectic::{SympMatrix, SympSpace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistAuto {
    pub name: String,
    pub model: Model,
    /// Homology class of the twisting curve in `H_1(S_g, Z)`.
    pub curve_class: Vector,
    images: Vec<Word>,
    inverse: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistAutoJson {
    pub name: String,
    pub images: Vec<String>,
}

impl TwistAuto {
    fn build(
        name: String,
        model: Model,
        curve_class: Vector,
        fwd: impl Fn(Letter) -> Word,
        bwd: impl Fn(Letter) -> Word,
    ) -> Self {
        let mut images: Vec<Word> = Vec::new();
        let mut inverse: Vec<Word> = Vec::new();
        for l in model.all_letters() {
            images.push(fwd(l));
            inverse.push(bwd(l));
        }
        TwistAuto {
            name,
            model,
            curve_class,
            images,
            inverse,
        }
    }

    pub fn identity(model: Model) -> Self {
        Self::build(
            "id".into(),
            model,
            vec![0; 2 * model.g],
            Word::letter,
            Word::letter,
        )
    }

    fn image_of(&self, l: Letter) -> Word {
        self.images[l as usize - 1].clone()
    }

    /// Image of a word (letters of the presentation, `u_1` allowed).
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&|l| self.image_of(l))
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        w.substitute(&|l| self.inverse[l as usize - 1].clone())
    }

    pub fn inverse(&self) -> TwistAuto {
        TwistAuto {
            name: format!("{}^-1", self.name),
            model: self.model,
            curve_class: self.curve_class.clone(),
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &TwistAuto) -> TwistAuto {
        let letters = self.model.all_letters();
        TwistAuto {
            name: format!("{}*{}", self.name, other.name),
            model: self.model,
            curve_class: vec![0; 2 * self.model.g],
            images: letters
                .iter()
                .map(|&l| self.apply(&other.image_of(l)))
                .collect(),
            inverse: letters
                .iter()
                .map(|&l| other.apply_inverse(&self.inverse[l as usize - 1]))
                .collect(),
        }
    }

    /// Images of the presentation generators, in presentation order.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Induced matrix on `H_1(S_g, Z/m)`: column `j` is the image of basis vector `j`.
    pub fn homology_matrix(&self, m: i64) -> Result<SympMatrix> {
        let g = self.model.g;
        let space = SympSpace::new(g, m)?;
        let cols: Vec<Vector> = (1..=2 * g as i32)
            .map(|l| self.model.homology(&self.image_of(l), m, true))
            .collect();
        let entries = (0..2 * g).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        SympMatrix::new(space, entries)
    }

    pub fn to_json(&self) -> TwistAutoJson {
        TwistAutoJson {
            name: self.name.clone(),
            images: self.images.iter().map(|w| format_word(w, self.model.g)).collect(),
        }
    }
}

fn lw(l: Letter) -> Word {
    Word::letter(l)
}

/// Twists along `α_i`, `β_i`, the chain curves `α_i α_{i+1}`, and the curves
/// around consecutive puncture pairs.
pub fn twist_automorphisms(g: usize, n: usize) -> Result<Vec<TwistAuto>> {
    let model = Model::new(g, n)?;
    let space = SympSpace::new(g.max(1), 0)?;
    let class = |v: Vector| if g == 0 { vec![] } else { v };
    let mut out = Vec::new();
    for i in 1..=g {
        let (ai, bi) = (word::a(i), word::b(i));
        out.push(TwistAuto::build(
            format!("Ta{i}"),
            model,
            class(space.a(i)),
            move |l| if l == bi { lw(bi).mul(&lw(ai)) } else { lw(l) },
            move |l| if l == bi { lw(bi).mul(&lw(-ai)) } else { lw(l) },
        ));
        out.push(TwistAuto::build(
            format!("Tb{i}"),
            model,
            class(space.b(i)),
            move |l| if l == ai { lw(ai).mul(&lw(-bi)) } else { lw(l) },
            move |l| if l == ai { lw(ai).mul(&lw(bi)) } else { lw(l) },
        ));
    }
    for i in 1..g {
        let (ai, bi, aj, bj) = (word::a(i), word::b(i), word::a(i + 1), word::b(i + 1));
        let w = lw(ai).mul(&lw(aj));
        let v = lw(aj).mul(&lw(ai));
        let (w1, v1) = (w.clone(), v.clone());
        out.push(TwistAuto::build(
            format!("Tc{i}"),
            model,
            space.add(&space.a(i), &space.a(i + 1)),
            move |l| {
                if l == ai || l == aj {
                    w.inv().mul(&lw(l)).mul(&w)
                } else if l == bi {
                    w.inv().mul(&lw(aj)).mul(&lw(ai)).mul(&lw(bi)).mul(&w)
                } else if l == bj {
                    lw(bj).mul(&w)
                } else {
                    lw(l)
                }
            },
            move |l| {
                if l == ai || l == aj {
                    w1.mul(&lw(l)).mul(&w1.inv())
                } else if l == bi {
                    w1.mul(&v1.inv()).mul(&lw(bi)).mul(&w1.inv())
                } else if l == bj {
                    lw(bj).mul(&w1.inv())
                } else {
                    lw(l)
                }
            },
        ));
    }
    for j in 1..n {
        let p = lw(word::u(g, j + 1)).mul(&lw(word::u(g, j)));
        let (uj, uk) = (word::u(g, j), word::u(g, j + 1));
        let (p1, p2) = (p.clone(), p.clone());
        out.push(TwistAuto::build(
            format!("Tp{j}"),
            model,
            vec![0; 2 * g],
            move |l| {
                if l == uj || l == uk {
                    p1.conj(&lw(l))
                } else {
                    lw(l)
                }
            },
            move |l| {
                if l == uj || l == uk {
                    p2.inv().conj(&lw(l))
                } else {
                    lw(l)
                }
            },
        ));
    }
    Ok(out)
}

/// Automorphism exchanging handles `i` and `i+1`; fixes every `u_j` and the
/// relator exactly.
pub fn handle_swap(g: usize, n: usize, i: usize) -> Result<TwistAuto> {
    let model = Model::new(g, n)?;
    if i == 0 || i >= g {
        return crate::error::arg(format!("no handle pair ({i}, {}) in genus {g}", i + 1));
    }
    let (ai, bi, aj, bj) = (word::a(i), word::b(i), word::a(i + 1), word::b(i + 1));
    let ci = Word::commutator(&lw(ai), &lw(bi));
    let cj = Word::commutator(&lw(aj), &lw(bj));
    // (α_i, β_i) -> (α_j, β_j), (α_j, β_j) -> R (α_i, β_i) R^{-1} with R = [α_j, β_j]^{-1}
    let r = cj.inv();
    let r2 = ci.clone();
    Ok(TwistAuto::build(
        format!("S{i}"),
        model,
        vec![0; 2 * g],
        move |l| {
            if l == ai {
                lw(aj)
            } else if l == bi {
                lw(bj)
            } else if l == aj || l == bj {
                let src = if l == aj { ai } else { bi };
                r.conj(&lw(src))
            } else {
                lw(l)
            }
        },
        // inverse: α_j -> α_i, β_j -> β_i, α_i -> [α_i,β_i] α_j [α_i,β_i]^{-1}
        move |l| {
            if l == aj {
                lw(ai)
            } else if l == bj {
                lw(bi)
            } else if l == ai || l == bi {
                let src = if l == ai { aj } else { bj };
                r2.conj(&lw(src))
            } else {
                lw(l)
            }
        },
    ))
}

/// Look up a generator (`Ta1`, `Tb2`, `Tc1`, `Tp2`, `S1`, optionally with
/// `^-1`) by name.
pub fn named_automorphism(g: usize, n: usize, name: &str) -> Result<TwistAuto> {
    let (base, inv) = match name.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let mut all = twist_automorphisms(g, n)?;
    for i in 1..g {
        all.push(handle_swap(g, n, i)?);
    }
    let t = all
        .into_iter()
        .find(|t| t.name == base)
        .ok_or_else(|| crate::error::Error::Argument(format!("unknown automorphism {name:?}")))?;
    Ok(if inv { t.inverse() } else { t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::presentation::relator;

    fn all_autos(g: usize, n: usize) -> Vec<TwistAuto> {
        let mut v = twist_automorphisms(g, n).unwrap();
        for i in 1..g {
            v.push(handle_swap(g, n, i).unwrap());
        }
        v
    }

    #[test]
    fn relator_and_punctures_preserved() {
        for (g, n) in [(1, 1), (2, 0), (2, 1), (2, 2), (3, 0), (1, 3), (0, 4)] {
            let model = Model::new(g, n).unwrap();
            let rel = relator(g, model.np());
            for t in all_autos(g, n) {
                assert_eq!(t.apply(&rel), rel, "{} on ({g},{n})", t.name);
                for j in 1..=model.np() {
                    let uj = Word::letter(word::u(g, j));
                    let img = model.to_free(&t.apply(&uj));
                    assert!(img.is_conjugate(&model.u_word(j)), "{} moves u{j}", t.name);
                }
                for l in model.all_letters() {
                    let x = Word::letter(l);
                    assert_eq!(model.to_free(&t.apply_inverse(&t.apply(&x))), model.to_free(&x));
                    assert_eq!(model.to_free(&t.apply(&t.apply_inverse(&x))), model.to_free(&x));
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        let ts = twist_automorphisms(1, 1).unwrap();
        let ta = &ts[0];
        assert_eq!(format_word(&ta.images()[1], 1), "b1 a1");
        let s = SympSpace::new(1, 0).unwrap();
        let mat = ta.homology_matrix(0).unwrap();
        assert_eq!(mat, SympMatrix::twist(s, &s.a(1), 1));
        assert!(mat.is_symplectic());
        let id = ta.compose(&ta.inverse());
        for l in Model::new(1, 1).unwrap().all_letters() {
            let x = Word::letter(l);
            assert_eq!(id.apply(&x).reduced(), x);
        }
    }

    #[test]
    fn homology_actions_are_left_twists() {
        for (g, n) in [(2, 0), (3, 1)] {
            for t in twist_automorphisms(g, n).unwrap() {
                let mat = t.homology_matrix(0).unwrap();
                let s = SympSpace::new(g, 0).unwrap();
                assert_eq!(mat, SympMatrix::twist(s, &t.curve_class, 1), "{}", t.name);
            }
        }
    }
}
