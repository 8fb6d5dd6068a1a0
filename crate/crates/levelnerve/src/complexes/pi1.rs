use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::FinSimpSet;
use crate::arith::invariant_factors;

/// Largest quotient order searched for a nontriviality witness.
pub const QUOTIENT_ORDER: usize = 120;
const MAX_DEGREE: usize = 5;
const SEARCH_BUDGET: usize = 2_000_000;
const GROWTH_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Trivial,
    Nontrivial { witness: String },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Report {
    pub components: usize,
    /// Edge-path presentation size before simplification.
    pub initial_generators: usize,
    pub initial_relations: usize,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Abelianization divisors, `0` for a free summand.
    pub abelianization: Vec<i128>,
}

type Rel = Vec<i32>;

fn reduce(w: &mut Rel) {
    let mut out: Rel = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let (mut a, mut b) = (0, out.len());
    while b - a >= 2 && out[a] == -out[b - 1] {
        a += 1;
        b -= 1;
    }
    *w = out[a..b].to_vec();
}

fn substitute(w: &Rel, x: i32, by: &Rel) -> Rel {
    let mut out = Vec::with_capacity(w.len());
    for &l in w {
        if l == x {
            out.extend(by);
        } else if l == -x {
            out.extend(by.iter().rev().map(|y| -y));
        } else {
            out.push(l);
        }
    }
    out
}

struct Presentation {
    gens: BTreeSet<i32>,
    rels: Vec<Rel>,
}

impl Presentation {
    fn normalize(&mut self) {
        for r in self.rels.iter_mut() {
            reduce(r);
        }
        self.rels.retain(|r| !r.is_empty());
        self.rels.sort();
        self.rels.dedup();
    }

    fn kill(&mut self, xs: &BTreeSet<i32>) {
        for r in self.rels.iter_mut() {
            r.retain(|l| !xs.contains(&l.abs()));
        }
        for x in xs {
            self.gens.remove(x);
        }
    }

    /// One round; returns whether anything changed.
    fn step(&mut self) -> bool {
        self.normalize();
        let ones: BTreeSet<i32> = self.rels.iter().filter(|r| r.len() == 1).map(|r| r[0].abs()).collect();
        if !ones.is_empty() {
            self.kill(&ones);
            return true;
        }
        // eliminate a generator occurring once in a short relation
        let mut best: Option<(usize, usize, i32)> = None;
        for (ri, r) in self.rels.iter().enumerate() {
            if best.is_some_and(|b| b.0 <= r.len()) {
                continue;
            }
            for &l in r {
                if r.iter().filter(|y| y.abs() == l.abs()).count() == 1 {
                    best = Some((r.len(), ri, l));
                    break;
                }
            }
        }
        let Some((_, ri, l)) = best else { return false };
        let r = self.rels.remove(ri);
        let p = r.iter().position(|&y| y == l).expect("present");
        // r = u l v = 1  =>  l = u^-1 v^-1
        let mut by: Rel = r[..p].iter().rev().map(|y| -y).collect();
        by.extend(r[p + 1..].iter().rev().map(|y| -y));
        let (x, by) = if l > 0 {
            (l, by)
        } else {
            (-l, by.iter().rev().map(|y| -y).collect())
        };
        let total: usize = self.rels.iter().map(|w| w.len()).sum();
        let uses: usize = self.rels.iter().map(|w| w.iter().filter(|y| y.abs() == x).count()).sum();
        if total + uses * by.len() > GROWTH_CAP {
            self.rels.push(r);
            return false;
        }
        for w in self.rels.iter_mut() {
            if w.iter().any(|y| y.abs() == x) {
                *w = substitute(w, x, &by);
            }
        }
        self.gens.remove(&x);
        true
    }
}

fn edge_path_presentation(x: &FinSimpSet) -> (usize, Presentation) {
    let nv = x.count(0);
    let ne = x.count(1);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for e in 0..ne {
        let f = &x.ranks[1].faces[e];
        adj[f[1]].push((e, f[0]));
        adj[f[0]].push((e, f[1]));
    }
    let mut seen = vec![false; nv];
    let mut tree = BTreeSet::new();
    let mut comps = 0;
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &(e, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree.insert(e as i32 + 1);
                    q.push_back(w);
                }
            }
        }
    }
    let mut rels = Vec::new();
    if x.ranks.len() > 2 {
        for s in 0..x.count(2) {
            let f = &x.ranks[2].faces[s];
            let g = |i: usize| (f[i] as i32 + 1) * x.face_sign(2, s, i) as i32;
            rels.push(vec![g(2), g(0), -g(1)]);
        }
    }
    let mut p = Presentation {
        gens: (1..=ne as i32).collect(),
        rels,
    };
    p.kill(&tree);
    (comps, p)
}

fn name(l: i32, names: &[i32]) -> String {
    let i = names.iter().position(|&x| x == l.abs()).expect("generator") + 1;
    if l > 0 {
        format!("x{i}")
    } else {
        format!("x{i}^-1")
    }
}

fn abelianization(p: &Presentation) -> Vec<i128> {
    let gens: Vec<i32> = p.gens.iter().copied().collect();
    if gens.is_empty() {
        return vec![];
    }
    let rows: Vec<Vec<i64>> = p
        .rels
        .iter()
        .map(|r| {
            let mut row = vec![0i64; gens.len()];
            for &l in r {
                let i = gens.binary_search(&l.abs()).expect("generator");
                row[i] += l.signum() as i64;
            }
            row
        })
        .collect();
    let d: Vec<i128> = if rows.is_empty() {
        vec![]
    } else {
        invariant_factors(&rows, gens.len()).into_iter().filter(|&d| d != 0).collect()
    };
    let mut out = vec![0; gens.len() - d.len()];
    out.extend(d.into_iter().filter(|&d| d != 1));
    out
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().map(|&i| b[i as usize]).collect()
}

fn inverse(a: &[u8]) -> Vec<u8> {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j as usize] = i as u8;
    }
    out
}

fn all_perms(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..d as u8).collect();
    fn rec(k: usize, p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
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
    out.sort();
    out
}

/// Nontrivial permutation image of degree `<= 5` (order `<= 120`).
fn quotient_witness(p: &Presentation) -> Option<Option<String>> {
    let gens: Vec<i32> = p.gens.iter().copied().collect();
    let mut budget = SEARCH_BUDGET;
    for d in 2..=MAX_DEGREE {
        let perms = all_perms(d);
        let id: Vec<u8> = (0..d as u8).collect();
        // relations checkable once their largest generator is assigned
        let mut by_last: Vec<Vec<&Rel>> = vec![Vec::new(); gens.len()];
        for r in &p.rels {
            let last = r.iter().map(|l| gens.binary_search(&l.abs()).expect("gen")).max().expect("nonempty");
            by_last[last].push(r);
        }
        let mut assign: Vec<Vec<u8>> = Vec::new();
        let eval = |r: &Rel, assign: &[Vec<u8>]| -> bool {
            let mut acc = id.clone();
            for &l in r {
                let i = gens.binary_search(&l.abs()).expect("gen");
                let q = if l > 0 { assign[i].clone() } else { inverse(&assign[i]) };
                acc = compose(&acc, &q);
            }
            acc == id
        };
        fn rec(
            k: usize,
            gens_len: usize,
            perms: &[Vec<u8>],
            by_last: &[Vec<&Rel>],
            assign: &mut Vec<Vec<u8>>,
            eval: &dyn Fn(&Rel, &[Vec<u8>]) -> bool,
            id: &[u8],
            budget: &mut usize,
        ) -> Option<bool> {
            if k == gens_len {
                return Some(assign.iter().any(|a| a != id));
            }
            for q in perms {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                assign.push(q.clone());
                if by_last[k].iter().all(|r| eval(r, assign)) {
                    match rec(k + 1, gens_len, perms, by_last, assign, eval, id, budget) {
                        Some(true) => return Some(true),
                        None => return None,
                        Some(false) => {}
                    }
                }
                assign.pop();
            }
            Some(false)
        }
        match rec(0, gens.len(), &perms, &by_last, &mut assign, &eval, &id, &mut budget) {
            Some(true) => {
                let imgs: Vec<String> = assign
                    .iter()
                    .enumerate()
                    .map(|(i, a)| format!("x{}->{:?}", i + 1, a))
                    .collect();
                return Some(Some(format!("permutation image of degree {d}: {}", imgs.join(", "))));
            }
            Some(false) => {}
            None => return None,
        }
    }
    Some(None)
}

/// Edge-path presentation of `π_1`, simplified, with a bounded verdict.
pub fn pi1_report(x: &FinSimpSet) -> Pi1Report {
    let (components, mut p) = edge_path_presentation(x);
    let initial_generators = p.gens.len();
    let initial_relations = p.rels.len();
    while p.step() {}
    p.normalize();
    let names: Vec<i32> = p.gens.iter().copied().collect();
    let ab = abelianization(&p);
    let verdict = if p.gens.is_empty() {
        Verdict::Trivial
    } else if !ab.is_empty() {
        Verdict::Nontrivial {
            witness: format!("abelianization {ab:?}"),
        }
    } else {
        match quotient_witness(&p) {
            Some(Some(w)) => Verdict::Nontrivial { witness: w },
            _ => Verdict::Unknown,
        }
    };
    Pi1Report {
        components,
        initial_generators,
        initial_relations,
        generators: names.iter().map(|&l| name(l, &names)).collect(),
        relations: p
            .rels
            .iter()
            .map(|r| r.iter().map(|&l| name(l, &names)).collect::<Vec<_>>().join(" "))
            .collect(),
        verdict,
        abelianization: ab,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(ngens: i32, rels: &[&[i32]]) -> Presentation {
        Presentation {
            gens: (1..=ngens).collect(),
            rels: rels.iter().map(|r| r.to_vec()).collect(),
        }
    }

    #[test]
    fn reduction_examples() {
        let mut w = vec![1, 2, -2, 3, -1];
        reduce(&mut w);
        assert_eq!(w, vec![3]);
        assert_eq!(substitute(&vec![1, -2, 1], 1, &vec![3, 4]), vec![3, 4, -2, 3, 4]);
        assert_eq!(substitute(&vec![-1], 1, &vec![3, 4]), vec![-4, -3]);
    }

    #[test]
    fn tietze_kills_cyclic_chain() {
        // x1 x2^-1 = 1, x2 = 1
        let mut p = pres(2, &[&[1, -2], &[2]]);
        while p.step() {}
        assert!(p.gens.is_empty());
    }

    #[test]
    fn perfect_group_found_by_quotient_search() {
        // <x, y | x^2, y^3, (xy)^5> is A_5: trivial abelianization, degree-5 image
        let mut p = pres(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]]);
        while p.step() {}
        p.normalize();
        assert!(abelianization(&p).is_empty());
        let w = quotient_witness(&p).unwrap().unwrap();
        assert!(w.contains("degree 5"));
    }

    #[test]
    fn finite_abelianization() {
        let p = pres(1, &[&[1, 1, 1]]);
        assert_eq!(abelianization(&p), vec![3]);
    }
}
