//! Finite Galois covers of `S_{g,n}` given by homomorphisms `Π_{g,n} → G`.

mod group;
mod homology;
mod lift;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use group::{Elem, FiniteGroup, GroupSpec};
pub use homology::{DeckHomology, HomologyBasis};
pub use lift::{catalog_system, derived_cover, lift_multicurve, CurveLift, LiftResult};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::surface::presentation::Model;
use crate::surface::twist::TwistAuto;
use crate::surface::word::{letter_name, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Base {
    pub g: usize,
    pub n: usize,
}

/// `{base:{g,n}, group:{kind,…}, images:{a1:…,…}}`. Permutations are
/// 0-based image lists and compose left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub base: Base,
    pub group: GroupSpec,
    pub images: BTreeMap<String, Vec<i64>>,
}

impl CoverSpec {
    /// `G = 1`.
    pub fn identity(g: usize, n: usize) -> Self {
        let model = Model { g, n };
        CoverSpec {
            base: Base { g, n },
            group: GroupSpec::Abelian { orders: vec![] },
            images: presentation_names(&model)
                .into_iter()
                .map(|s| (s, vec![]))
                .collect(),
        }
    }

    /// `Π → H_1(S_g, Z/m)`.
    pub fn homology_cover(g: usize, n: usize, m: i64) -> Self {
        let model = Model { g, n };
        let mut images = BTreeMap::new();
        for (k, s) in presentation_names(&model).into_iter().enumerate() {
            let mut v = vec![0; 2 * g];
            if k < 2 * g {
                v[k] = 1;
            }
            images.insert(s, v);
        }
        CoverSpec {
            base: Base { g, n },
            group: GroupSpec::Abelian {
                orders: vec![m; 2 * g],
            },
            images,
        }
    }
}

fn presentation_names(model: &Model) -> Vec<String> {
    let mut v: Vec<String> = (1..=2 * model.g as i32)
        .map(|l| letter_name(l, model.g))
        .collect();
    for j in 1..=model.n {
        v.push(format!("u{j}"));
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverAnalysis {
    pub degree: usize,
    pub punctures: usize,
    /// Ramification index over each base puncture.
    pub ramification: Vec<usize>,
    pub genus: usize,
    pub euler_open: i64,
    pub euler_closed: i64,
    /// The images generate a proper subgroup of the declared group.
    pub replaced_by_image: bool,
}

/// Coset table of `K = ker φ` with a shortlex Schreier transversal.
#[derive(Clone, Debug)]
pub struct Cover {
    pub spec: CoverSpec,
    pub model: Model,
    pub group: FiniteGroup,
    /// Element index of the image of each presentation letter `α, β, u_1..u_np`.
    letter_img: Vec<usize>,
    free: Vec<Letter>,
    right: Vec<Vec<usize>>,
    right_inv: Vec<Vec<usize>>,
    pub transversal: Vec<Word>,
    gen_of: Vec<Vec<Option<usize>>>,
    /// Schreier generators as `(coset, petal)` over non-tree edges.
    pub gens: Vec<(usize, usize)>,
    pub replaced_by_image: bool,
    hom: Option<HomologyBasis>,
}

impl Cover {
    pub fn new(spec: &CoverSpec, limits: &Limits) -> Result<Cover> {
        let model = Model::new(spec.base.g, spec.base.n)?;
        let names = presentation_names(&model);
        for k in spec.images.keys() {
            if !names.contains(k) {
                return Err(Error::Parse(format!("unknown generator `{k}` in images")));
            }
        }
        let mut imgs: Vec<Elem> = Vec::new();
        for s in &names {
            let v = spec
                .images
                .get(s)
                .ok_or_else(|| Error::Parse(format!("missing image for `{s}`")))?;
            imgs.push(spec.group.parse_elem(v)?);
        }
        let id = spec.group.identity();
        if model.n == 0 {
            imgs.push(id.clone());
        }
        // relator check
        let mut r = id.clone();
        for i in 0..model.g {
            let (a, b) = (&imgs[2 * i], &imgs[2 * i + 1]);
            let c = spec
                .group
                .mul(&spec.group.mul(a, b), &spec.group.mul(&spec.group.inv(a), &spec.group.inv(b)));
            r = spec.group.mul(&r, &c);
        }
        for j in (1..=model.np()).rev() {
            r = spec.group.mul(&r, &imgs[2 * model.g + j - 1]);
        }
        if r != id {
            return Err(Error::InvalidCover("relator does not map to the identity".into()));
        }
        let group = FiniteGroup::generate(&spec.group, &imgs, limits)?;
        let replaced_by_image = group.len() as u128 != spec.group.order();
        let letter_img: Vec<usize> = imgs.iter().map(|e| group.index(e)).collect();
        let free = model.free_letters();
        let d = group.len();
        let right: Vec<Vec<usize>> = free
            .iter()
            .map(|&l| {
                let y = &group.elements[letter_img[l as usize - 1]];
                (0..d).map(|x| group.index(&spec.group.mul(&group.elements[x], y))).collect()
            })
            .collect();
        let right_inv: Vec<Vec<usize>> = right
            .iter()
            .map(|t| {
                let mut inv = vec![0; d];
                for (x, &y) in t.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        let mut cover = Cover {
            spec: spec.clone(),
            model,
            group,
            letter_img,
            free,
            right,
            right_inv,
            transversal: Vec::new(),
            gen_of: Vec::new(),
            gens: Vec::new(),
            replaced_by_image,
            hom: None,
        };
        cover.build_transversal();
        limits.check_mem("cover homology", cover.gens.len() * cover.gens.len(), 8)?;
        if cover.analysis().genus > 0 {
            cover.hom = Some(HomologyBasis::new(&cover)?);
        }
        Ok(cover)
    }

    fn build_transversal(&mut self) {
        let d = self.group.len();
        let r = self.free.len();
        let mut tree = vec![vec![false; r]; d];
        let mut seen = vec![false; d];
        let mut trans = vec![Word::empty(); d];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for fi in 0..r {
                let l = self.free[fi];
                for (y, edge_from, lw) in [
                    (self.right[fi][x], x, l),
                    (self.right_inv[fi][x], self.right_inv[fi][x], -l),
                ] {
                    if !seen[y] {
                        seen[y] = true;
                        tree[edge_from][fi] = true;
                        trans[y] = trans[x].mul(&Word::letter(lw));
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut gen_of = vec![vec![None; r]; d];
        let mut gens = Vec::new();
        for x in 0..d {
            for fi in 0..r {
                if !tree[x][fi] {
                    gen_of[x][fi] = Some(gens.len());
                    gens.push((x, fi));
                }
            }
        }
        self.transversal = trans;
        self.gen_of = gen_of;
        self.gens = gens;
    }

    pub fn degree(&self) -> usize {
        self.group.len()
    }

    /// Rank of the free group `K`.
    pub fn schreier_rank(&self) -> usize {
        self.gens.len()
    }

    pub fn homology_basis(&self) -> Result<&HomologyBasis> {
        self.hom
            .as_ref()
            .ok_or_else(|| Error::Unsupported("cover has genus 0".into()))
    }

    fn petal(&self, l: Letter) -> usize {
        self.free
            .iter()
            .position(|&x| x == l.abs())
            .expect("free letter")
    }

    /// Image of a presentation word in `G`, as an element index.
    pub fn eval(&self, w: &Word) -> usize {
        self.end_coset(0, w)
    }

    /// Coset reached from `x` by reading `w`.
    pub fn end_coset(&self, x: usize, w: &Word) -> usize {
        let w = self.model.to_free(w);
        let mut x = x;
        for &l in &w.0 {
            let fi = self.petal(l);
            x = if l > 0 {
                self.right[fi][x]
            } else {
                self.right_inv[fi][x]
            };
        }
        x
    }

    /// Reidemeister–Schreier rewrite of `w` read from coset `x`:
    /// end coset and abelianized Schreier coordinates.
    pub fn rewrite(&self, x: usize, w: &Word) -> (usize, Vec<i64>) {
        let w = self.model.to_free(w);
        let mut v = vec![0i64; self.gens.len()];
        let mut x = x;
        for &l in &w.0 {
            let fi = self.petal(l);
            if l > 0 {
                if let Some(k) = self.gen_of[x][fi] {
                    v[k] += 1;
                }
                x = self.right[fi][x];
            } else {
                let y = self.right_inv[fi][x];
                if let Some(k) = self.gen_of[y][fi] {
                    v[k] -= 1;
                }
                x = y;
            }
        }
        (x, v)
    }

    /// Word of Schreier generator `k`.
    pub fn gen_word(&self, k: usize) -> Word {
        let (x, fi) = self.gens[k];
        let y = self.right[fi][x];
        self.transversal[x]
            .mul(&Word::letter(self.free[fi]))
            .mul(&self.transversal[y].inv())
    }

    /// Order of an element.
    pub fn order(&self, x: usize) -> usize {
        self.group.order_of(x)
    }

    /// Orbits of right multiplication by element `y`, each as a sorted list.
    pub fn right_orbits(&self, y: usize) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for x in 0..d {
            if seen[x] {
                continue;
            }
            let mut orb = Vec::new();
            let mut z = x;
            while !seen[z] {
                seen[z] = true;
                orb.push(z);
                z = self.group.mul_idx(z, y);
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    pub fn analysis(&self) -> CoverAnalysis {
        let d = self.degree();
        let (g, n) = (self.model.g, self.model.n);
        let ramification: Vec<usize> = (1..=n)
            .map(|j| self.order(self.letter_img[2 * g + j - 1]))
            .collect();
        let punctures: usize = ramification.iter().map(|r| d / r).sum();
        let euler_open = d as i64 * (2 - 2 * g as i64 - n as i64);
        let euler_closed = euler_open + punctures as i64;
        CoverAnalysis {
            degree: d,
            punctures,
            ramification,
            genus: ((2 - euler_closed) / 2) as usize,
            euler_open,
            euler_closed,
            replaced_by_image: self.replaced_by_image,
        }
    }

    /// Element index of the image of presentation letter `l > 0`.
    pub fn letter_image(&self, l: Letter) -> usize {
        self.letter_img[l as usize - 1]
    }

    /// `true` iff `t` maps every Schreier generator back into `K`.
    pub fn is_invariant(&self, t: &TwistAuto) -> bool {
        (0..self.gens.len()).all(|k| self.eval(&t.apply(&self.gen_word(k))) == 0)
    }

    /// Peripheral loops `t_x u_j^r t_x^{-1}`, one per orbit of `⟨φ(u_j)⟩`,
    /// over every puncture of the free model.
    pub fn peripheral_words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for j in 1..=self.model.np() {
            let u = self.model.u_word(j);
            let y = self.letter_img[2 * self.model.g + j - 1];
            let r = self.order(y);
            for orb in self.right_orbits(y) {
                let x = orb[0];
                out.push(self.transversal[x].mul(&u.pow(r as i64)).mul(&self.transversal[x].inv()));
            }
        }
        out
    }
}

/// Riemann–Hurwitz data of a cover.
pub fn analyze_cover(spec: &CoverSpec, limits: &Limits) -> Result<CoverAnalysis> {
    Ok(Cover::new(spec, limits)?.analysis())
}

pub fn invariance_check(spec: &CoverSpec, twists: &[TwistAuto], limits: &Limits) -> Result<bool> {
    let c = Cover::new(spec, limits)?;
    Ok(twists.iter().all(|t| c.is_invariant(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::twist::{handle_swap, twist_automorphisms};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn analysis_examples() {
        let a = analyze_cover(&CoverSpec::homology_cover(2, 0, 2), &lim()).unwrap();
        assert_eq!((a.degree, a.genus, a.punctures), (16, 17, 0));
        let mut s = CoverSpec::homology_cover(1, 1, 2);
        s.group = GroupSpec::Abelian { orders: vec![2] };
        s.images = [("a1", vec![1]), ("b1", vec![0]), ("u1", vec![0])]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let a = analyze_cover(&s, &lim()).unwrap();
        assert_eq!((a.degree, a.punctures, a.genus), (2, 2, 1));
        assert_eq!((a.euler_open, a.euler_closed), (-2, 0));
        let a = analyze_cover(&CoverSpec::identity(2, 1), &lim()).unwrap();
        assert_eq!((a.degree, a.genus, a.punctures), (1, 2, 1));
    }

    #[test]
    fn relator_violation() {
        let mut s = CoverSpec::homology_cover(1, 1, 2);
        s.images.insert("u1".into(), vec![1, 0]);
        assert!(matches!(
            analyze_cover(&s, &lim()),
            Err(Error::InvalidCover(_))
        ));
    }

    #[test]
    fn schreier_rank_and_rewrite() {
        let c = Cover::new(&CoverSpec::homology_cover(2, 0, 2), &lim()).unwrap();
        assert_eq!(c.schreier_rank(), 16 * 3 + 1);
        for k in 0..c.schreier_rank() {
            let (end, v) = c.rewrite(0, &c.gen_word(k));
            assert_eq!(end, 0);
            let mut e = vec![0; c.schreier_rank()];
            e[k] = 1;
            assert_eq!(v, e);
        }
        for (k, t) in c.transversal.iter().enumerate() {
            assert_eq!(c.eval(t), k);
        }
    }

    #[test]
    fn invariance_examples() {
        let mut ts = twist_automorphisms(2, 0).unwrap();
        ts.push(handle_swap(2, 0, 1).unwrap());
        assert!(invariance_check(&CoverSpec::homology_cover(2, 0, 2), &ts, &lim()).unwrap());
        assert!(invariance_check(&CoverSpec::identity(2, 0), &ts, &lim()).unwrap());
        let mut s = CoverSpec::homology_cover(2, 0, 2);
        s.group = GroupSpec::Abelian { orders: vec![2] };
        for (k, v) in s.images.iter_mut() {
            *v = vec![i64::from(k == "a1")];
        }
        assert!(!invariance_check(&s, &ts, &lim()).unwrap());
    }
}
