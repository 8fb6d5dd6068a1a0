use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Decomposition;
use crate::arith::{self, solve_left, units, Mat};
use crate::error::{Error, Result};
use crate::surface::graph::components;
use crate::symplectic::{SympMatrix, Vector};

/// Exhaustive subset checks in (iv) up to this many edges.
pub const EXHAUSTIVE_EDGES: usize = 12;
const UNIT_SEARCH_CAP: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
    #[serde(rename = "iv")]
    Iv,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    Vi,
    #[serde(rename = "frame")]
    Frame,
    #[serde(rename = "equivariance")]
    Equivariance,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::I => "i",
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
            Condition::V => "v",
            Condition::Vi => "vi",
            Condition::Frame => "frame",
            Condition::Equivariance => "equivariance",
        }
    }
}

/// Violated conditions, plus conditions only partially checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violated: Vec<Condition>,
    pub partial: Vec<Condition>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violated.is_empty()
    }
}

impl Decomposition {
    fn check_shape(&self) -> Result<()> {
        let r = self.space.rank();
        let bad = |rows: &Mat<i64>| rows.iter().any(|x| x.len() != r);
        if self.vertex_groups.len() != self.vertices.len() || self.edge_groups.len() != self.edges.len() {
            return Err(Error::Argument("group data does not match the graph".into()));
        }
        if self.vertex_groups.iter().any(bad) || self.edge_groups.iter().any(bad) {
            return Err(Error::Argument("group generators of the wrong length".into()));
        }
        if self.edges.iter().any(|e| e[0] >= self.vertices.len() || e[1] >= self.vertices.len()) {
            return Err(Error::Argument("edge endpoint out of range".into()));
        }
        if let Some(f) = &self.frames {
            if f.len() != self.edges.len() || f.iter().any(|x| x.len() != r) {
                return Err(Error::Argument("frames do not match the edges".into()));
            }
        }
        if let Some(acts) = &self.action {
            for a in acts {
                if a.matrix.len() != r
                    || a.matrix.iter().any(|row| row.len() != r)
                    || a.vertices.len() != self.vertices.len()
                    || a.edges.len() != self.edges.len()
                {
                    return Err(Error::Argument("action entry has the wrong shape".into()));
                }
            }
        }
        Ok(())
    }

    /// All violated conditions.
    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_shape()?;
        let mut rep = ValidationReport::default();
        if !self.cond_i() {
            rep.violated.push(Condition::I);
        }
        if !self.cond_ii() {
            rep.violated.push(Condition::Ii);
        }
        if !self.cond_iii() {
            rep.violated.push(Condition::Iii);
        }
        let (ok, partial) = self.cond_iv();
        if !ok {
            rep.violated.push(Condition::Iv);
        } else if partial {
            rep.partial.push(Condition::Iv);
        }
        if !self.cond_v() {
            rep.violated.push(Condition::V);
        }
        if !self.cond_vi() {
            rep.violated.push(Condition::Vi);
        }
        if self.frames.is_some() && !self.cond_frames() {
            rep.violated.push(Condition::Frame);
        }
        if self.action.is_some() && !self.cond_equivariance() {
            rep.violated.push(Condition::Equivariance);
        }
        Ok(rep)
    }

    fn m(&self) -> i64 {
        self.space.modulus
    }

    fn contains(&self, big: &Mat<i64>, rows: &[Vector]) -> bool {
        let mut all = big.clone();
        all.extend(rows.iter().cloned());
        self.space.canonical(&all) == *big
    }

    fn order(&self, rows: &[Vector], ncol: usize) -> BigInt {
        arith::subgroup_order(rows, self.m(), ncol)
    }

    fn divisors(&self, rows: &[Vector], ncol: usize) -> Vec<i128> {
        arith::subgroup_divisors(rows, self.m(), ncol)
    }

    /// (i): `⊕ G_v / N → H` injective onto a primitive subgroup of rank
    /// `2g - b_1(Y)`.
    fn cond_i(&self) -> bool {
        let nv = self.vertices.len();
        if components(nv, &self.edges, &BTreeSet::new()) != 1 {
            return false;
        }
        let r = self.space.rank();
        let m = self.m();
        let all: Vec<Vector> = self.vertex_groups.iter().flatten().cloned().collect();
        let im = self.report(&all);
        if !im.is_primitive || im.rank + self.first_betti() != r {
            return false;
        }
        // the identification respects the pairing: distinct vertices are orthogonal
        for v in 0..nv {
            for w in v + 1..nv {
                for x in &self.vertex_groups[v] {
                    if self.vertex_groups[w].iter().any(|y| self.space.pair(x, y) != 0) {
                        return false;
                    }
                }
            }
        }
        if m > 0 {
            let mut nrows = Vec::new();
            for (e, &[a, b]) in self.edges.iter().enumerate() {
                if a == b {
                    continue;
                }
                for x in &self.edge_groups[e] {
                    let mut v = vec![0; r * nv];
                    for k in 0..r {
                        v[a * r + k] = x[k];
                        v[b * r + k] = (-x[k]).rem_euclid(m);
                    }
                    nrows.push(v);
                }
            }
            let sum: BigInt = self.vertex_groups.iter().map(|g| self.order(g, r)).product();
            let n_ord = self.order(&nrows, r * nv);
            sum == n_ord * BigInt::from(im.order())
        } else {
            // coordinates in the Hermite bases of the vertex groups
            let offs: Vec<usize> = self
                .vertex_groups
                .iter()
                .scan(0, |acc, g| {
                    let o = *acc;
                    *acc += g.len();
                    Some(o)
                })
                .collect();
            let total: usize = self.vertex_groups.iter().map(|g| g.len()).sum();
            let mut nrows = Vec::new();
            for (e, &[a, b]) in self.edges.iter().enumerate() {
                if a == b {
                    continue;
                }
                for x in &self.edge_groups[e] {
                    let (Some(ca), Some(cb)) = (
                        solve_left(&self.vertex_groups[a], x, 0),
                        solve_left(&self.vertex_groups[b], x, 0),
                    ) else {
                        return false;
                    };
                    let mut v = vec![0; total];
                    for (k, c) in ca.iter().enumerate() {
                        v[offs[a] + k] += c;
                    }
                    for (k, c) in cb.iter().enumerate() {
                        v[offs[b] + k] -= c;
                    }
                    nrows.push(v);
                }
            }
            let nd = self.divisors(&nrows, total);
            nd.iter().all(|&d| d == 1) && total == nd.len() + im.rank
        }
    }

    /// (ii): the marks partition `{1..n}`.
    fn cond_ii(&self) -> bool {
        let mut all: Vec<usize> = self.vertices.iter().flat_map(|v| v.marks.iter().copied()).collect();
        all.sort_unstable();
        all == (1..=self.n).collect::<Vec<_>>()
    }

    /// (iii): edge groups are orthogonal to every vertex and edge group.
    fn cond_iii(&self) -> bool {
        let edges: Vec<&Vector> = self.edge_groups.iter().flatten().collect();
        let others = self.vertex_groups.iter().flatten().chain(self.edge_groups.iter().flatten());
        for y in others {
            if edges.iter().any(|x| self.space.pair(x, y) != 0) {
                return false;
            }
        }
        true
    }

    fn edge_vector(&self, e: usize) -> Vector {
        if let Some(f) = &self.frames {
            return f[e].clone();
        }
        self.edge_groups[e].first().cloned().unwrap_or_else(|| self.space.zero())
    }

    fn connected_without(&self, removed: &BTreeSet<usize>) -> bool {
        components(self.vertices.len(), &self.edges, removed) == 1
    }

    /// Some unit combination `Σ λ_e f_e` vanishes (`None` if the search was cut).
    fn unit_relation(&self, bond: &[usize]) -> Option<bool> {
        let us = units(self.m());
        let k = bond.len();
        if k == 0 {
            return Some(true);
        }
        let total = us.len().checked_pow((k - 1) as u32).unwrap_or(usize::MAX);
        if total > UNIT_SEARCH_CAP {
            return None;
        }
        let vecs: Vec<Vector> = bond.iter().map(|&e| self.edge_vector(e)).collect();
        let r = self.space.rank();
        for mut code in 0..total {
            let mut acc = vecs[0].clone();
            for v in &vecs[1..] {
                let lam = us[code % us.len()];
                code /= us.len();
                for i in 0..r {
                    acc[i] += lam * v[i];
                }
            }
            if acc.iter().all(|&x| self.space.reduce(x) == 0) {
                return Some(true);
            }
        }
        Some(false)
    }

    fn free_primitive(&self, es: &[usize]) -> bool {
        let rows: Vec<Vector> = es.iter().map(|&e| self.edge_vector(e)).collect();
        let rep = self.report(&rows);
        rep.is_primitive && rep.rank == es.len()
    }

    fn is_bond(&self, set: &BTreeSet<usize>) -> bool {
        if self.connected_without(set) {
            return false;
        }
        set.iter().all(|&e| {
            let mut s = set.clone();
            s.remove(&e);
            self.connected_without(&s)
        })
    }

    /// (iv): returns `(holds, partial)`.
    fn cond_iv(&self) -> (bool, bool) {
        if self.edge_groups.iter().any(|g| self.report(g).rank > 1) {
            return (false, false);
        }
        let ne = self.edges.len();
        let mut partial = false;
        if ne <= EXHAUSTIVE_EDGES {
            for mask in 1u32..(1u32 << ne) {
                let set: BTreeSet<usize> = (0..ne).filter(|&e| mask >> e & 1 == 1).collect();
                if self.connected_without(&set) {
                    let es: Vec<usize> = set.iter().copied().collect();
                    if !self.free_primitive(&es) {
                        return (false, false);
                    }
                } else if self.is_bond(&set) {
                    let es: Vec<usize> = set.iter().copied().collect();
                    match self.unit_relation(&es) {
                        Some(true) => {}
                        Some(false) => return (false, false),
                        None => partial = true,
                    }
                }
            }
            return (true, partial);
        }
        // large graphs: one cotree, its span, and the fundamental cuts
        let tree = self.spanning_tree();
        let cotree: Vec<usize> = (0..ne).filter(|e| !tree.contains(e)).collect();
        if !self.free_primitive(&cotree) {
            return (false, false);
        }
        let span: Vec<Vector> = cotree.iter().map(|&e| self.edge_vector(e)).collect();
        let canon = self.space.canonical(&span);
        if !self.contains(&canon, &(0..ne).map(|e| self.edge_vector(e)).collect::<Vec<_>>()) {
            return (false, false);
        }
        for &t in &tree {
            let mut rest: BTreeSet<usize> = tree.iter().copied().collect();
            rest.remove(&t);
            let side = self.side_of(&rest, t);
            let bond: Vec<usize> = (0..ne)
                .filter(|&e| {
                    let [a, b] = self.edges[e];
                    side[a] != side[b]
                })
                .collect();
            match self.unit_relation(&bond) {
                Some(true) => {}
                Some(false) => return (false, false),
                None => {}
            }
        }
        (true, true)
    }

    fn spanning_tree(&self) -> Vec<usize> {
        let nv = self.vertices.len();
        let mut seen = vec![false; nv];
        let mut tree = Vec::new();
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (e, &[a, b]) in self.edges.iter().enumerate() {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    tree.push(e);
                    stack.push(w);
                }
            }
        }
        tree
    }

    /// Side of each vertex after removing tree edge `t` from the tree.
    fn side_of(&self, rest: &BTreeSet<usize>, t: usize) -> Vec<bool> {
        let nv = self.vertices.len();
        let mut side = vec![false; nv];
        let start = self.edges[t][0];
        side[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &e in rest {
                let [a, b] = self.edges[e];
                let w = if a == v { b } else if b == v { a } else { continue };
                if !side[w] {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
        side
    }

    /// (v): small vertices carry rank at least two.
    fn cond_v(&self) -> bool {
        (0..self.vertices.len()).all(|v| {
            self.valence(v) + self.vertices[v].marks.len() > 2 || self.report(&self.vertex_groups[v]).rank >= 2
        })
    }

    /// (vi): `E(v) ⊆ G_v` is exactly the radical of the form on `G_v`, and the
    /// form is nondegenerate on the quotient.
    fn cond_vi(&self) -> bool {
        let m = self.m();
        for v in 0..self.vertices.len() {
            let gv = &self.vertex_groups[v];
            let ev = self.star_gens(v);
            if !self.contains(gv, &ev) {
                return false;
            }
            if ev.iter().any(|x| gv.iter().any(|y| self.space.pair(x, y) != 0)) {
                return false;
            }
            let gram: Mat<i64> = gv
                .iter()
                .map(|x| gv.iter().map(|y| self.space.pair(x, y)).collect())
                .collect();
            let k = gv.len();
            if m > 0 {
                let e_ord = self.order(&ev, self.space.rank());
                let g_ord = self.order(gv, self.space.rank());
                if g_ord != e_ord * self.order(&gram, k) {
                    return false;
                }
            } else {
                let gd = self.divisors(&gram, k);
                if gd.iter().any(|&d| d != 1) {
                    return false;
                }
                let mut coords = Vec::new();
                for x in &ev {
                    match solve_left(gv, x, 0) {
                        Some(c) => coords.push(c),
                        None => return false,
                    }
                }
                let ed = self.divisors(&coords, k);
                if ed.iter().any(|&d| d != 1) || ed.len() + gd.len() != k {
                    return false;
                }
            }
        }
        true
    }

    fn cond_frames(&self) -> bool {
        let Some(f) = &self.frames else { return true };
        f.iter().enumerate().all(|(e, x)| {
            self.space.sign_normalize(x) == *x && self.space.canonical(&[x.clone()]) == self.edge_groups[e]
        })
    }

    fn cond_equivariance(&self) -> bool {
        let Some(acts) = &self.action else { return true };
        let is_perm = |p: &[usize]| {
            let mut s = p.to_vec();
            s.sort_unstable();
            s == (0..p.len()).collect::<Vec<_>>()
        };
        for a in acts {
            if !is_perm(&a.vertices) || !is_perm(&a.edges) {
                return false;
            }
            let Ok(f) = SympMatrix::new(self.space, a.matrix.clone()) else {
                return false;
            };
            if !f.is_symplectic() {
                return false;
            }
            let img = |rows: &Mat<i64>| {
                let r: Vec<Vector> = rows.iter().map(|x| f.apply(x)).collect();
                self.space.canonical(&r)
            };
            for v in 0..self.vertices.len() {
                let w = a.vertices[v];
                if self.vertices[w].marks.len() != self.vertices[v].marks.len()
                    || self.vertex_groups[w] != img(&self.vertex_groups[v])
                {
                    return false;
                }
            }
            for e in 0..self.edges.len() {
                let t = a.edges[e];
                let [x, y] = self.edges[e];
                let mut mapped = [a.vertices[x], a.vertices[y]];
                mapped.sort_unstable();
                let mut target = self.edges[t];
                target.sort_unstable();
                if mapped != target || self.edge_groups[t] != img(&self.edge_groups[e]) {
                    return false;
                }
                if let Some(fr) = &self.frames {
                    if self.space.sign_normalize(&f.apply(&fr[e])) != fr[t] {
                        return false;
                    }
                }
            }
        }
        true
    }
}
