use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{FinSimpSet, Provenance, RankData, SimplexOrigin};
use crate::covers::{Cover, CoverSpec};
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::surface::catalog::{in_catalog, standard_multicurve, CurveSystem};
use crate::surface::graph::{enumerate_stable_graphs, max_edges};
use crate::surface::twist::twist_automorphisms;
use crate::symplectic::{orbit_enumerate, sp_group, word_matrix, SympMatrix, SympSpace};

/// Decompositions of every sub-multicurve of one simplex: `flag[mask]` keeps
/// the base curves in `mask` and contracts the rest (`flag[0]` is unused).
type Flag = Vec<Option<Decomposition>>;

fn strip(d: &Decomposition) -> Decomposition {
    Decomposition {
        action: None,
        ..d.clone()
    }
}

fn act(f: &SympMatrix, flag: &Flag) -> Flag {
    flag.iter().map(|d| d.as_ref().map(|d| d.apply_unchecked(f))).collect()
}

fn permutations(e: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..e).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Canonical key of a flag over `e` curves and the curve at each simplex
/// position (lexicographically least relabelling).
fn flag_key(forms: &[String], e: usize) -> (String, Vec<usize>) {
    let full = (1usize << e) - 1;
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    let mut best: Option<(Vec<&str>, Vec<usize>)> = None;
    for p in permutations(e) {
        let v: Vec<&str> = masks
            .iter()
            .map(|&m| {
                let img = (0..e).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i]);
                forms[img].as_str()
            })
            .collect();
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, p));
        }
    }
    let (v, p) = best.expect("at least one curve");
    (v.join("|"), p)
}

fn forms(flag: &Flag) -> Vec<String> {
    flag.iter()
        .map(|d| d.as_ref().map(|d| d.canonical_form()).unwrap_or_default())
        .collect()
}

/// Sub-flag keeping the curves in `keep` (in increasing order).
fn sub_forms(forms: &[String], keep: &[usize]) -> Vec<String> {
    (0..1usize << keep.len())
        .map(|m| {
            let img = (0..keep.len()).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << keep[i]);
            if m == 0 {
                String::new()
            } else {
                forms[img].clone()
            }
        })
        .collect()
}

type SeedFn<'a> = dyn Fn(&CurveSystem) -> Result<Decomposition> + Sync + 'a;

fn seed_flag(cs: &CurveSystem, seed_of: &SeedFn<'_>) -> Result<Flag> {
    let e = cs.graph.edges.len();
    let mut out = vec![None; 1 << e];
    for mask in 1..1usize << e {
        let mut sub = cs.clone();
        for c in (0..e).rev() {
            if mask >> c & 1 == 0 {
                sub = sub.contract(c)?;
            }
        }
        let d = seed_of(&sub)?;
        out[mask] = Some(if mask + 1 == 1 << e { d } else { strip(&d) });
    }
    Ok(out)
}

/// A built complex plus what is needed to rebuild each simplex.
#[derive(Clone, Debug)]
pub struct Built {
    pub complex: FinSimpSet,
    pub generators: Vec<SympMatrix>,
    /// Full seed decompositions (with any deck action) per rank and type.
    seeds: Vec<Vec<Decomposition>>,
    /// Contraction flag of every simplex, actions stripped.
    flags: Vec<Vec<Flag>>,
}

impl Built {
    pub fn space(&self) -> SympSpace {
        self.seeds[0][0].space
    }

    /// The decomposition behind simplex `s` of rank `k`, action included.
    pub fn decomposition(&self, k: usize, s: usize) -> Decomposition {
        let o = &self.complex.ranks[k].origins[s];
        let f = word_matrix(self.space(), &self.generators, &o.word);
        self.seeds[k][o.type_index].apply_unchecked(&f).canonicalize().0
    }

    /// Simplices sharing one unframed contraction flag, as a histogram of
    /// fiber sizes per rank.
    pub fn frame_fibers(&self) -> Vec<BTreeMap<usize, usize>> {
        self.flags
            .iter()
            .enumerate()
            .map(|(k, fl)| {
                let mut fib: HashMap<String, usize> = HashMap::new();
                for f in fl {
                    let unf: Vec<String> = f
                        .iter()
                        .map(|d| d.as_ref().map(|d| d.unframed().canonical_form()).unwrap_or_default())
                        .collect();
                    *fib.entry(flag_key(&unf, k + 1).0).or_default() += 1;
                }
                let mut hist = BTreeMap::new();
                for (_, c) in fib {
                    *hist.entry(c).or_default() += 1;
                }
                hist
            })
            .collect()
    }
}

fn build(
    g: usize,
    n: usize,
    gens: Vec<SympMatrix>,
    seed_of: &SeedFn<'_>,
    provenance: Provenance,
    limits: &Limits,
) -> Result<Built> {
    let top = max_edges(g, n);
    let mut ranks: Vec<RankData> = Vec::new();
    let mut seeds_out: Vec<Vec<Decomposition>> = Vec::new();
    let mut flags_out: Vec<Vec<Flag>> = Vec::new();
    let mut prev_index: HashMap<String, usize> = HashMap::new();
    for k in 0..top {
        let e = k + 1;
        let types = enumerate_stable_graphs(g, n, k)?;
        let mut seeds = Vec::new();
        for t in &types {
            let (_, cs) = standard_multicurve(t)?;
            seeds.push(seed_flag(&cs, seed_of)?);
        }
        // (top form, flag key, type, word, flag)
        let mut entries: Vec<(String, String, usize, Vec<usize>, Flag)> = Vec::new();
        for (ti, sd) in seeds.iter().enumerate() {
            let stripped: Flag = sd.iter().map(|d| d.as_ref().map(strip)).collect();
            let orbit = orbit_enumerate(stripped, &gens, act, |f| flag_key(&forms(f), e).0, limits)?;
            for (f, w) in orbit.elements.into_iter().zip(orbit.words) {
                let fm = forms(&f);
                let (key, _) = flag_key(&fm, e);
                entries.push((fm[(1 << e) - 1].clone(), key, ti, w, f));
            }
            limits.check_orbit("simplices", entries.len())?;
        }
        entries.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for w in entries.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(Error::Oracle(format!("rank {k}: two types share a simplex")));
            }
        }
        let index: HashMap<String, usize> = entries.iter().enumerate().map(|(i, x)| (x.1.clone(), i)).collect();
        let faces: Vec<(Vec<usize>, Vec<Vec<usize>>)> = if k == 0 {
            vec![(vec![], vec![]); entries.len()]
        } else {
            limits.install(|| {
                entries
                    .par_iter()
                    .map(|x| {
                        let fm = forms(&x.4);
                        let (_, order) = flag_key(&fm, e);
                        let mut fidx = Vec::with_capacity(e);
                        let mut fmaps = Vec::with_capacity(e);
                        for &c in &order {
                            let keep: Vec<usize> = (0..e).filter(|&b| b != c).collect();
                            let (key, forder) = flag_key(&sub_forms(&fm, &keep), k);
                            let Some(&j) = prev_index.get(&key) else {
                                return Err(Error::Oracle(format!("rank {k}: face of type {} not found", x.2)));
                            };
                            fidx.push(j);
                            // position, in the face, of each remaining curve
                            let mut pos_in_face = vec![usize::MAX; e];
                            for (q, &b) in forder.iter().enumerate() {
                                pos_in_face[keep[b]] = q;
                            }
                            fmaps.push(order.iter().filter(|&&b| b != c).map(|&b| pos_in_face[b]).collect());
                        }
                        Ok((fidx, fmaps))
                    })
                    .collect::<Result<Vec<_>>>()
            })?
        };
        let (face_idx, face_maps): (Vec<_>, Vec<_>) = faces.into_iter().unzip();
        let mut variants = vec![0usize; entries.len()];
        for i in 1..entries.len() {
            if entries[i].0 == entries[i - 1].0 {
                variants[i] = variants[i - 1] + 1;
            }
        }
        ranks.push(RankData {
            simplices: entries.iter().map(|x| x.0.clone()).collect(),
            variants: if variants.iter().all(|&v| v == 0) { vec![] } else { variants },
            faces: face_idx,
            face_maps: if k < 1 { vec![] } else { face_maps },
            origins: entries
                .iter()
                .map(|x| SimplexOrigin {
                    type_index: x.2,
                    word: x.3.clone(),
                })
                .collect(),
            types,
        });
        seeds_out.push(
            seeds
                .into_iter()
                .map(|mut f| f.pop().flatten().expect("full flag entry"))
                .collect(),
        );
        flags_out.push(entries.into_iter().map(|x| x.4).collect());
        prev_index = index;
    }
    Ok(Built {
        complex: FinSimpSet { ranks, provenance },
        generators: gens,
        seeds: seeds_out,
        flags: flags_out,
    })
}

fn check_signature(g: usize, n: usize, m: i64) -> Result<()> {
    if m < 2 {
        return Err(Error::Argument(format!("modulus must be at least 2, got {m}")));
    }
    if !in_catalog(g, n) {
        return Err(Error::Unsupported(format!("(g={g}, n={n}) is outside the catalog")));
    }
    Ok(())
}

/// Orbits of catalog decompositions under `Sp_{2g}(Z/m)`.
pub fn build_abelian_nerve(g: usize, n: usize, m: i64, limits: &Limits) -> Result<Built> {
    check_signature(g, n, m)?;
    let space = SympSpace::new(g, m)?;
    let gens = sp_group(space)?.generators;
    let seed_of = |cs: &CurveSystem| Decomposition::from_curve_system(cs, m);
    let prov = Provenance {
        kind: "abelian_nerve".into(),
        g,
        n,
        m,
        cover: None,
        group_order: None,
    };
    build(g, n, gens, &seed_of, prov, limits)
}

/// Orbits of lifted decompositions under the matrices of the twist
/// generators on `H_1(S̄_K, Z/m)`.
pub fn build_image_complex(spec: &CoverSpec, m: i64, limits: &Limits) -> Result<Built> {
    let (g, n) = (spec.base.g, spec.base.n);
    check_signature(g, n, m)?;
    let cover = Cover::new(spec, limits)?;
    let twists = twist_automorphisms(g, n)?;
    if let Some(t) = twists.iter().find(|t| !cover.is_invariant(t)) {
        return Err(Error::Invariance(format!("cover is not invariant under {}", t.name)));
    }
    let hb = cover.homology_basis()?;
    let space = SympSpace::new(hb.genus, m)?;
    let mut gens = Vec::new();
    for t in &twists {
        gens.push(cover.mcg_action(t, m)?);
    }
    let group_order = {
        let cap = Limits {
            max_orbit: limits.max_orbit.min(200_000),
            ..limits.clone()
        };
        orbit_enumerate(
            SympMatrix::identity(space),
            &gens,
            |a, x| a.mul(x),
            |x| x.entries.clone(),
            &cap,
        )
        .ok()
        .map(|o| o.elements.len() as u64)
    };
    let seed_of = |cs: &CurveSystem| -> Result<Decomposition> {
        let lift = cover.lift(cs, m)?;
        Decomposition::from_lift(&cover, cs, &lift, m)
    };
    let prov = Provenance {
        kind: "image_complex".into(),
        g,
        n,
        m,
        cover: Some(spec.clone()),
        group_order,
    };
    build(g, n, gens, &seed_of, prov, limits)
}

/// Framed classes over one unframed decomposition: all choices of generator
/// per edge, up to equivalence.
pub fn framing_fiber(d: &Decomposition) -> Result<usize> {
    let s = d.space;
    if s.modulus == 0 {
        return Err(Error::Argument("framings are enumerated for finite moduli only".into()));
    }
    let mut choices: Vec<Vec<Vec<i64>>> = Vec::new();
    for g in &d.edge_groups {
        let Some(x) = g.first() else {
            choices.push(vec![s.zero()]);
            continue;
        };
        let us = crate::arith::units(s.modulus);
        let mut c: Vec<Vec<i64>> = us.iter().map(|&u| s.sign_normalize(&s.scale(u, x))).collect();
        c.sort();
        c.dedup();
        choices.push(c);
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut f = d.clone();
        f.frames = Some(idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect());
        seen.insert(f.canonical_form());
        let mut p = 0;
        while p < idx.len() {
            idx[p] += 1;
            if idx[p] < choices[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == idx.len() {
            break;
        }
    }
    Ok(seen.len())
}
