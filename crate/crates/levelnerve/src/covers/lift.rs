//! Preimages of multicurves, the cut graph `Σ_K`, and derived covers `K_ℓ`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Cover, CoverSpec, GroupSpec};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::surface::catalog::{rep_words, standard_multicurve, CurveSystem, MulticurveRep};
use crate::surface::graph::{EdgeKind, StableGraph, Vertex};
use crate::surface::twist::named_automorphism;
use crate::surface::word::letter_name;
use crate::symplectic::Vector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveLift {
    pub components: usize,
    pub cycle_length: usize,
    /// Smallest sheet of each component.
    pub sheets: Vec<usize>,
    /// Class of each component in `H_1(S̄_K, Z/m)` (empty when `g_K = 0`).
    pub classes: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftResult {
    pub curves: Vec<CurveLift>,
    pub cut_graph: StableGraph,
    pub has_separating_component: bool,
    pub has_cut_pair: bool,
    /// `(base vertex, smallest sheet)` of each vertex of the cut graph.
    pub vertex_origin: Vec<[usize; 2]>,
    /// `(base edge, component)` of each edge of the cut graph.
    pub edge_origin: Vec<[usize; 2]>,
}

impl Cover {
    /// Subgroup generated by the given elements, as sorted indices.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let d = self.degree();
        let mut seen = vec![false; d];
        seen[0] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for &g in gens {
                let y = self.group.mul_idx(x, g);
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        (0..d).filter(|&x| seen[x]).collect()
    }

    pub fn lift(&self, cs: &CurveSystem, m: i64) -> Result<LiftResult> {
        let t = &cs.graph;
        if (t.g, t.n) != (self.model.g, self.model.n) {
            return Err(Error::Argument("multicurve and cover have different bases".into()));
        }
        let d = self.degree();
        let have_hom = self.homology_basis().is_ok();
        let mut curves = Vec::new();
        for e in 0..t.edges.len() {
            let c = cs.curve_word(e);
            let y = self.eval(c);
            let ord = self.order(y);
            let orbits = self.right_orbits(y);
            let sheets: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
            let classes = if have_hom {
                let cp = c.pow(ord as i64);
                sheets
                    .iter()
                    .map(|&x| self.loop_class(x, &cp, m))
                    .collect::<Result<_>>()?
            } else {
                vec![]
            };
            curves.push(CurveLift {
                components: orbits.len(),
                cycle_length: ord,
                sheets,
                classes,
            });
        }
        // pieces: components of the preimage of each vertex piece
        let mut comp: Vec<Vec<usize>> = Vec::new();
        let mut vertex_origin = Vec::new();
        let mut vertices = Vec::new();
        let mut sizes = Vec::new();
        for (v, vx) in t.vertices.iter().enumerate() {
            let hv: Vec<usize> = cs.gens[v].iter().map(|w| self.eval(w)).collect();
            let h = self.generated(&hv);
            let mut id = vec![usize::MAX; d];
            for x in 0..d {
                if id[x] != usize::MAX {
                    continue;
                }
                let k = vertices.len();
                for &z in &h {
                    id[self.group.mul_idx(x, z)] = k;
                }
                vertex_origin.push([v, x]);
                vertices.push(Vertex {
                    genus: 0,
                    marks: vec![],
                });
                sizes.push((v, h.len()));
            }
            let _ = vx;
            comp.push(id);
        }
        // boundary counts and genera
        let mut bcount = vec![0usize; vertices.len()];
        for (e, ed) in t.edges.iter().enumerate() {
            for side in 0..2 {
                let w = &cs.boundary[2 * e + side];
                let o = self.order(self.eval(w));
                let v = ed[side];
                for (k, &(vv, hs)) in sizes.iter().enumerate() {
                    if vv == v {
                        bcount[k] += hs / o;
                    }
                }
            }
        }
        let mut next_mark = 1usize;
        for j in 1..=t.n {
            let v = cs.puncture_vertex[j - 1];
            let y = self.eval(&cs.punctures[j - 1]);
            for orb in self.right_orbits(y) {
                let k = comp[v][orb[0]];
                vertices[k].marks.push(next_mark);
                next_mark += 1;
                bcount[k] += 1;
            }
        }
        for (k, &(v, hs)) in sizes.iter().enumerate() {
            let vx = &t.vertices[v];
            let chi = hs as i64 * (2 - 2 * vx.genus as i64 - (t.valence(v) + vx.marks.len()) as i64);
            let twice = 2 - bcount[k] as i64 - chi;
            if twice < 0 || twice % 2 != 0 {
                return Err(Error::Oracle(format!("inconsistent Euler data over vertex {v}")));
            }
            vertices[k].genus = (twice / 2) as usize;
        }
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (e, ed) in t.edges.iter().enumerate() {
            let s_inv = self.group.inv_idx(self.eval(&cs.transition[e]));
            for (ci, &x) in curves[e].sheets.iter().enumerate() {
                let a = comp[ed[0]][x];
                let b = comp[ed[1]][self.group.mul_idx(x, s_inv)];
                edges.push([a, b]);
                edge_origin.push([e, ci]);
            }
        }
        let an = self.analysis();
        let cut_graph = StableGraph {
            g: an.genus,
            n: an.punctures,
            vertices,
            edges,
        };
        if let Err(err) = cut_graph.validate() {
            return Err(Error::Oracle(format!("cut graph is not stable: {err}")));
        }
        let cls = cut_graph.edge_cut_classification();
        Ok(LiftResult {
            curves,
            has_separating_component: cls.kinds.contains(&EdgeKind::Bridge),
            has_cut_pair: !cls.cuts.is_empty(),
            cut_graph,
            vertex_origin,
            edge_origin,
        })
    }
}

/// Lift a catalog representative.
pub fn lift_multicurve(spec: &CoverSpec, mc: &MulticurveRep, m: i64, limits: &Limits) -> Result<LiftResult> {
    let cover = Cover::new(spec, limits)?;
    let cs = catalog_system(mc)?;
    cover.lift(&cs, m)
}

/// The catalog curve system behind a representative.
pub fn catalog_system(mc: &MulticurveRep) -> Result<CurveSystem> {
    let words = rep_words(mc)?;
    let (_, mut cs) = standard_multicurve(&mc.graph)?;
    for name in &mc.moves {
        cs = cs.apply(&named_automorphism(mc.graph.g, mc.graph.n, name)?);
    }
    let same = words.len() == cs.graph.edges.len()
        && words.iter().enumerate().all(|(e, w)| w == cs.curve_word(e));
    if !same {
        return Err(Error::Unsupported("words are not the catalog representative of this type".into()));
    }
    Ok(cs)
}

/// Cover by `K_ℓ = [K,K]K^ℓ` as a permutation group on `Π/K_ℓ`.
pub fn derived_cover(cover: &Cover, ell: i64, limits: &Limits) -> Result<CoverSpec> {
    if ell < 2 {
        return Err(Error::Argument("derived cover needs ell >= 2".into()));
    }
    let closed = cover.model.n == 0;
    let nk = cover.gens.len();
    let dim = if closed {
        2 * cover.homology_basis()?.genus
    } else {
        nk
    };
    let d = cover.degree();
    let per = (ell as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    let points = (d as u128).saturating_mul(per);
    limits.check_degree("derived cover degree", usize::try_from(points).unwrap_or(usize::MAX))?;
    let (points, per) = (points as usize, per as usize);
    let r = cover.free.len();
    // class of the Schreier edge (x, fi) in A
    let class = |k: usize| -> Vec<i64> {
        if closed {
            let mut e = vec![0; nk];
            e[k] = 1;
            cover
                .homology_basis()
                .expect("checked")
                .coords(&e)
                .iter()
                .map(|c| c.rem_euclid(ell))
                .collect()
        } else {
            (0..nk).map(|i| i64::from(i == k)).collect()
        }
    };
    let classes: Vec<Vec<i64>> = (0..nk).map(class).collect();
    let digits = |mut p: usize| -> Vec<i64> {
        (0..dim)
            .map(|_| {
                let x = (p % ell as usize) as i64;
                p /= ell as usize;
                x
            })
            .collect()
    };
    let undigits = |h: &[i64]| -> usize {
        h.iter()
            .rev()
            .fold(0usize, |acc, &x| acc * ell as usize + x as usize)
    };
    let mut letter_perm: Vec<Vec<i64>> = Vec::new();
    for fi in 0..r {
        let mut p = vec![0i64; points];
        for x in 0..d {
            let y = cover.right[fi][x];
            for hidx in 0..per {
                let mut h = digits(hidx);
                if let Some(k) = cover.gen_of[x][fi] {
                    for (a, b) in h.iter_mut().zip(&classes[k]) {
                        *a = (*a + b).rem_euclid(ell);
                    }
                }
                p[x * per + hidx] = (y * per + undigits(&h)) as i64;
            }
        }
        letter_perm.push(p);
    }
    let group = GroupSpec::Perm { points };
    let mut images = BTreeMap::new();
    let model = cover.model;
    for (fi, &l) in cover.free.iter().enumerate() {
        images.insert(letter_name(l, model.g), letter_perm[fi].clone());
    }
    if model.n >= 1 {
        let mut acc = group.identity();
        for &l in &model.u1_word().0 {
            let fi = cover.petal(l);
            let p = if l > 0 {
                letter_perm[fi].clone()
            } else {
                group.inv(&letter_perm[fi])
            };
            acc = group.mul(&acc, &p);
        }
        images.insert("u1".into(), acc);
    }
    Ok(CoverSpec {
        base: cover.spec.base,
        group,
        images,
    })
}
