use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Built, FinSimpSet};
use crate::arith::Mat;
use crate::decomp::{leq, Decomposition};
use crate::error::{Error, Result};
use crate::surface::graph::enumerate_stable_graphs;
use crate::symplectic::{SympSpace, Vector};

/// Largest `|H_m|` the brute-force enumerator accepts.
pub const BRUTE_FORCE_MAX: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offender {
    pub rank: usize,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankComparison {
    pub rank: usize,
    pub complex: usize,
    /// Distinct decompositions among the complex's simplices.
    pub distinct: usize,
    pub brute_force: usize,
    /// Brute-force simplices absent from the complex.
    pub missing: usize,
    /// Complex simplices the brute force did not produce.
    pub extra: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub checked: usize,
    pub offenders: Vec<Offender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<Vec<RankComparison>>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
            && self
                .brute_force
                .as_ref()
                .is_none_or(|b| b.iter().all(|r| r.missing == 0 && r.extra == 0))
    }
}

fn subgroups(s: SympSpace) -> Vec<Mat<i64>> {
    let all = s.all_vectors();
    let mut seen: BTreeSet<Mat<i64>> = BTreeSet::from([s.canonical(&[])]);
    let mut frontier = vec![s.canonical(&[])];
    while let Some(h) = frontier.pop() {
        for x in &all {
            let mut rows = h.clone();
            rows.push(x.clone());
            let c = s.canonical(&rows);
            if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every valid framed decomposition with `k + 1` edges, found by exhausting
/// edge vectors and vertex subgroups over each stable graph; canonical forms.
pub fn brute_force_decompositions(g: usize, n: usize, m: i64, k: usize) -> Result<BTreeSet<String>> {
    let s = SympSpace::new(g, m)?;
    if m < 2 || (m as usize).checked_pow(s.rank() as u32).is_none_or(|c| c > BRUTE_FORCE_MAX) {
        return Err(Error::Unsupported(format!("brute force needs |H_m| <= {BRUTE_FORCE_MAX}")));
    }
    let vectors = s.all_vectors();
    let subs = subgroups(s);
    let reps = subs.iter().map(|h| s.subgroup(h)).collect::<Result<Vec<_>>>()?;
    let mut out = BTreeSet::new();
    for t in enumerate_stable_graphs(g, n, k)? {
        let ne = t.edges.len();
        let mut idx = vec![0usize; ne];
        'edges: loop {
            let ev: Vec<Vector> = idx.iter().map(|&i| vectors[i].clone()).collect();
            let ortho = (0..ne).all(|a| (a..ne).all(|b| s.pair(&ev[a], &ev[b]) == 0));
            if ortho {
                let nv = t.vertices.len();
                let mut cands: Vec<Vec<&Mat<i64>>> = Vec::with_capacity(nv);
                for v in 0..nv {
                    let star: Vec<&Vector> = t
                        .edges
                        .iter()
                        .zip(&ev)
                        .filter(|(e, _)| e[0] == v || e[1] == v)
                        .map(|(_, x)| x)
                        .collect();
                    let c: Vec<&Mat<i64>> = subs
                        .iter()
                        .zip(&reps)
                        .filter(|(h, rep)| star.iter().all(|x| rep.contains(x) && h.iter().all(|y| s.pair(x, y) == 0)))
                        .map(|(h, _)| h)
                        .collect();
                    cands.push(c);
                }
                if cands.iter().all(|c| !c.is_empty()) {
                    let mut vi = vec![0usize; nv];
                    loop {
                        let vgens: Vec<Vec<Vector>> = vi.iter().zip(&cands).map(|(&i, c)| c[i].clone()).collect();
                        let egens: Vec<Vec<Vector>> = ev.iter().map(|x| vec![x.clone()]).collect();
                        let d = Decomposition::new(
                            s,
                            n,
                            t.vertices.clone(),
                            t.edges.clone(),
                            &vgens,
                            &egens,
                            Some(ev.clone()),
                        )?;
                        if d.validate()?.is_valid() && d.derived_type().is_isomorphic(&t) {
                            out.insert(d.canonical_form());
                        }
                        if !advance(&mut vi, |p| cands[p].len()) {
                            break;
                        }
                    }
                }
            }
            if !advance(&mut idx, |_| vectors.len()) {
                break 'edges;
            }
        }
    }
    Ok(out)
}

fn advance(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for p in 0..idx.len() {
        idx[p] += 1;
        if idx[p] < len(p) {
            return true;
        }
        idx[p] = 0;
    }
    false
}

/// Re-derive every simplex independently: each decomposition must validate,
/// each face must lie below its simplex, and for small spaces the simplex
/// sets must match an exhaustive enumeration.
pub fn cross_validate(x: &FinSimpSet, built: Option<&Built>) -> Result<CrossReport> {
    let mut decos: Vec<Vec<Option<Decomposition>>> = Vec::new();
    let mut offenders = Vec::new();
    for (k, r) in x.ranks.iter().enumerate() {
        let mut row = Vec::with_capacity(r.simplices.len());
        for (i, enc) in r.simplices.iter().enumerate() {
            let d = match built {
                Some(b) => Ok(b.decomposition(k, i)),
                None => Decomposition::from_canonical_form(enc),
            };
            match d {
                Ok(d) => {
                    if d.edges.len() != k + 1 {
                        offenders.push(Offender {
                            rank: k,
                            index: i,
                            reason: format!("{} edges at rank {k}", d.edges.len()),
                        });
                    }
                    match d.validate() {
                        Ok(rep) if rep.is_valid() => {}
                        Ok(rep) => offenders.push(Offender {
                            rank: k,
                            index: i,
                            reason: format!(
                                "violates {}",
                                rep.violated.iter().map(|c| c.name()).collect::<Vec<_>>().join(",")
                            ),
                        }),
                        Err(e) => offenders.push(Offender {
                            rank: k,
                            index: i,
                            reason: e.to_string(),
                        }),
                    }
                    row.push(Some(d));
                }
                Err(e) => {
                    offenders.push(Offender {
                        rank: k,
                        index: i,
                        reason: e.to_string(),
                    });
                    row.push(None);
                }
            }
        }
        decos.push(row);
    }
    let mut checked = 0;
    for k in 1..x.ranks.len() {
        for (i, fs) in x.ranks[k].faces.iter().enumerate() {
            checked += 1;
            let Some(big) = &decos[k][i] else { continue };
            for (j, &f) in fs.iter().enumerate() {
                let Some(small) = &decos[k - 1][f] else { continue };
                if !leq(&small.unframed(), &big.unframed())? {
                    offenders.push(Offender {
                        rank: k,
                        index: i,
                        reason: format!("face {j} is not below the simplex"),
                    });
                }
            }
        }
    }
    checked += x.count(0);
    let p = &x.provenance;
    let small = p.kind == "abelian_nerve"
        && p.m >= 2
        && (p.m as usize).checked_pow(2 * p.g as u32).is_some_and(|c| c <= BRUTE_FORCE_MAX);
    let brute_force = if small {
        let mut cmp = Vec::new();
        for (k, r) in x.ranks.iter().enumerate() {
            let bf = brute_force_decompositions(p.g, p.n, p.m, k)?;
            let have: HashMap<&str, ()> = r.simplices.iter().map(|s| (s.as_str(), ())).collect();
            let missing = bf.iter().filter(|s| !have.contains_key(s.as_str())).count();
            let extra = r.simplices.iter().filter(|s| !bf.contains(*s)).count();
            cmp.push(RankComparison {
                rank: k,
                complex: r.simplices.len(),
                distinct: have.len(),
                brute_force: bf.len(),
                missing,
                extra,
            });
        }
        Some(cmp)
    } else {
        None
    };
    offenders.sort_by_key(|o| (o.rank, o.index));
    Ok(CrossReport {
        checked,
        offenders,
        brute_force,
    })
}
