//! Stable graphs: topological types of multicurves on `S_{g,n}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::canon::canonical_labeling;
use crate::error::{arg, Result};
use crate::surface::presentation::check_signature;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: usize,
    pub marks: Vec<usize>,
}

/// Vertices carry genus and markings; edges are unordered pairs of vertices
/// (`[v, v]` is a loop). Half-edge `2e` sits at `edges[e][0]`, `2e+1` at
/// `edges[e][1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StableGraph {
    pub g: usize,
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Bridge,
    NonBridge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutClassification {
    pub kinds: Vec<EdgeKind>,
    /// Minimal 2-edge cuts as sorted index pairs.
    pub cuts: Vec<[usize; 2]>,
}

impl StableGraph {
    /// The one-vertex graph with no edges.
    pub fn trivial(g: usize, n: usize) -> Self {
        StableGraph {
            g,
            n,
            vertices: vec![Vertex {
                genus: g,
                marks: (1..=n).collect(),
            }],
            edges: vec![],
        }
    }

    pub fn rank(&self) -> Option<usize> {
        self.edges.len().checked_sub(1)
    }

    /// Half-edge count at `v` (loops count twice).
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e[0] == v) + usize::from(e[1] == v))
            .sum()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e][0] == self.edges[e][1]
    }

    /// Half-edges at `v`, in edge order.
    pub fn half_edges(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, ends) in self.edges.iter().enumerate() {
            for (s, &x) in ends.iter().enumerate() {
                if x == v {
                    out.push(2 * e + s);
                }
            }
        }
        out
    }

    pub fn first_betti(&self) -> usize {
        let comps = components(self.vertices.len(), &self.edges, &BTreeSet::new());
        self.edges.len() + comps - self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        components(self.vertices.len(), &self.edges, &BTreeSet::new()) == 1
    }

    /// All invariant violations, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push("no vertices".to_string());
            return out;
        }
        for e in &self.edges {
            if e[0] >= self.vertices.len() || e[1] >= self.vertices.len() {
                out.push(format!("edge {e:?} out of range"));
                return out;
            }
        }
        if !self.is_connected() {
            out.push("graph is not connected".into());
        }
        let gsum: usize = self.vertices.iter().map(|v| v.genus).sum();
        if gsum + self.first_betti() != self.g {
            out.push(format!(
                "genus sum {} + b1 {} != g {}",
                gsum,
                self.first_betti(),
                self.g
            ));
        }
        let mut marks: Vec<usize> = self.vertices.iter().flat_map(|v| v.marks.clone()).collect();
        marks.sort_unstable();
        if marks != (1..=self.n).collect::<Vec<_>>() {
            out.push(format!("markings {marks:?} do not partition 1..{}", self.n));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if 2 * v.genus + self.valence(i) + v.marks.len() <= 2 {
                out.push(format!("vertex {i} is unstable"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            arg(v.join("; "))
        }
    }

    /// Canonical relabeling; equal for isomorphic graphs.
    pub fn canonical(&self) -> StableGraph {
        self.canonical_with_map().0
    }

    /// Canonical form plus the vertex map and edge map into it.
    pub fn canonical_with_map(&self) -> (StableGraph, Vec<usize>, Vec<usize>) {
        let es: Vec<(usize, usize, ())> = self.edges.iter().map(|e| (e[0], e[1], ())).collect();
        let lab = canonical_labeling(&self.vertices, &es);
        let g = StableGraph {
            g: self.g,
            n: self.n,
            vertices: lab.vattrs.clone(),
            edges: lab.edges.iter().map(|&(x, y, _)| [x, y]).collect(),
        };
        (g, lab.new_of, lab.edge_pos)
    }

    pub fn is_isomorphic(&self, o: &StableGraph) -> bool {
        self.canonical() == o.canonical()
    }

    /// Contract edge `e`: merge endpoints, or raise the genus for a loop.
    pub fn contract_edge(&self, e: usize) -> Result<StableGraph> {
        if e >= self.edges.len() {
            return arg(format!("edge {e} out of range"));
        }
        let [x, y] = self.edges[e];
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<[usize; 2]> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != e)
            .map(|(_, &v)| v)
            .collect();
        if x == y {
            vertices[x].genus += 1;
        } else {
            let (keep, drop) = (x.min(y), x.max(y));
            let moved = vertices[drop].clone();
            vertices[keep].genus += moved.genus;
            vertices[keep].marks.extend(moved.marks);
            vertices[keep].marks.sort_unstable();
            vertices.remove(drop);
            let relabel = |v: usize| {
                if v == drop {
                    keep
                } else if v > drop {
                    v - 1
                } else {
                    v
                }
            };
            for ed in edges.iter_mut() {
                *ed = [relabel(ed[0]), relabel(ed[1])];
            }
        }
        Ok(StableGraph {
            g: self.g,
            n: self.n,
            vertices,
            edges,
        })
    }

    /// Bridges and minimal 2-edge cuts.
    pub fn edge_cut_classification(&self) -> CutClassification {
        let nv = self.vertices.len();
        let base = components(nv, &self.edges, &BTreeSet::new());
        let kinds: Vec<EdgeKind> = (0..self.edges.len())
            .map(|e| {
                let gone: BTreeSet<usize> = [e].into();
                if components(nv, &self.edges, &gone) > base {
                    EdgeKind::Bridge
                } else {
                    EdgeKind::NonBridge
                }
            })
            .collect();
        let mut cuts = Vec::new();
        for e in 0..self.edges.len() {
            for f in e + 1..self.edges.len() {
                if kinds[e] == EdgeKind::NonBridge && kinds[f] == EdgeKind::NonBridge {
                    let gone: BTreeSet<usize> = [e, f].into();
                    if components(nv, &self.edges, &gone) > base {
                        cuts.push([e, f]);
                    }
                }
            }
        }
        CutClassification { kinds, cuts }
    }

    /// All graphs with one more edge that contract back to `self`.
    fn degenerations(&self) -> Vec<StableGraph> {
        let mut out = Vec::new();
        let stable = |genus: usize, val: usize, marks: usize| 2 * genus + val + marks > 2;
        for v in 0..self.vertices.len() {
            let vx = &self.vertices[v];
            if vx.genus >= 1 {
                let mut t = self.clone();
                t.vertices[v].genus -= 1;
                t.edges.push([v, v]);
                out.push(t);
            }
            let halves = self.half_edges(v);
            let nm = vx.marks.len();
            let nh = halves.len();
            let newv = self.vertices.len();
            for g1 in 0..=vx.genus {
                let g2 = vx.genus - g1;
                for mmask in 0..(1u32 << nm) {
                    for hmask in 0..(1u64 << nh) {
                        let m2 = mmask.count_ones() as usize;
                        let h2 = hmask.count_ones() as usize;
                        if !stable(g1, nh - h2 + 1, nm - m2) || !stable(g2, h2 + 1, m2) {
                            continue;
                        }
                        let mut t = self.clone();
                        let (mut k1, mut k2) = (Vec::new(), Vec::new());
                        for (i, &mk) in vx.marks.iter().enumerate() {
                            if mmask >> i & 1 == 1 {
                                k2.push(mk);
                            } else {
                                k1.push(mk);
                            }
                        }
                        t.vertices[v] = Vertex { genus: g1, marks: k1 };
                        t.vertices.push(Vertex { genus: g2, marks: k2 });
                        for (i, &h) in halves.iter().enumerate() {
                            if hmask >> i & 1 == 1 {
                                t.edges[h / 2][h % 2] = newv;
                            }
                        }
                        t.edges.push([v, newv]);
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn components(nv: usize, edges: &[[usize; 2]], removed: &BTreeSet<usize>) -> usize {
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut count = nv;
    for (k, e) in edges.iter().enumerate() {
        if removed.contains(&k) {
            continue;
        }
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Top edge count `3g-3+n` of a multicurve on `S_{g,n}`.
pub fn max_edges(g: usize, n: usize) -> usize {
    3 * g + n - 3
}

/// Every stable graph with 0..=max_edges edges, keyed by edge count.
pub fn all_stable_graphs(g: usize, n: usize) -> Result<BTreeMap<usize, Vec<StableGraph>>> {
    check_signature(g, n)?;
    let mut out: BTreeMap<usize, Vec<StableGraph>> = BTreeMap::new();
    let mut level: BTreeSet<StableGraph> = [StableGraph::trivial(g, n)].into();
    out.insert(0, level.iter().cloned().collect());
    for k in 1..=max_edges(g, n) {
        let mut next = BTreeSet::new();
        for t in &level {
            for d in t.degenerations() {
                next.insert(d.canonical());
            }
        }
        if next.is_empty() {
            break;
        }
        out.insert(k, next.iter().cloned().collect());
        level = next;
    }
    Ok(out)
}

/// Stable graphs with exactly `k+1` edges, one per isomorphism class, in
/// canonical order. Empty above the dimension bound.
pub fn enumerate_stable_graphs(g: usize, n: usize, k: usize) -> Result<Vec<StableGraph>> {
    check_signature(g, n)?;
    if k + 1 > max_edges(g, n) {
        return Ok(vec![]);
    }
    Ok(all_stable_graphs(g, n)?.remove(&(k + 1)).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(genus: usize, marks: &[usize]) -> Vertex {
        Vertex {
            genus,
            marks: marks.to_vec(),
        }
    }

    #[test]
    fn enumeration_examples() {
        let r0 = enumerate_stable_graphs(2, 0, 0).unwrap();
        assert_eq!(r0.len(), 2);
        assert_eq!(enumerate_stable_graphs(2, 0, 2).unwrap().len(), 2);
        assert_eq!(enumerate_stable_graphs(2, 0, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable_graphs(1, 1, 0).unwrap().len(), 1);
        assert!(enumerate_stable_graphs(1, 1, 1).unwrap().is_empty());
        assert!(enumerate_stable_graphs(2, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn known_stratum_counts() {
        // strata of the moduli spaces of genus 2 (7 incl. the open one) and
        // M_{0,5} boundary types (2 + 1 up to relabeling of marks: marks are labelled)
        let total: usize = all_stable_graphs(2, 0).unwrap().values().map(|v| v.len()).sum();
        assert_eq!(total, 7);
        // boundary divisors of M_{0,5}: 10; codim 2 strata: 15
        assert_eq!(enumerate_stable_graphs(0, 5, 0).unwrap().len(), 10);
        assert_eq!(enumerate_stable_graphs(0, 5, 1).unwrap().len(), 15);
        // trivalent genus-3 graphs without legs: 5
        assert_eq!(enumerate_stable_graphs(3, 0, 5).unwrap().len(), 5);
        // boundary divisors of M_{3}: 2 (irreducible, separating 1|2)
        assert_eq!(enumerate_stable_graphs(3, 0, 0).unwrap().len(), 2);
    }

    #[test]
    fn contraction_examples() {
        let t = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[]), v(1, &[])],
            edges: vec![[0, 1]],
        };
        let c = t.contract_edge(0).unwrap();
        assert_eq!(c, StableGraph::trivial(2, 0));
        let l = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[])],
            edges: vec![[0, 0]],
        };
        assert_eq!(l.contract_edge(0).unwrap(), StableGraph::trivial(2, 0));
        let r1: BTreeSet<StableGraph> = enumerate_stable_graphs(2, 0, 1).unwrap().into_iter().collect();
        for t in enumerate_stable_graphs(2, 0, 2).unwrap() {
            for e in 0..t.edges.len() {
                assert!(r1.contains(&t.contract_edge(e).unwrap().canonical()));
            }
        }
    }

    #[test]
    fn cut_examples() {
        let bridge = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[]), v(1, &[])],
            edges: vec![[0, 1]],
        };
        assert_eq!(bridge.edge_cut_classification().kinds, vec![EdgeKind::Bridge]);
        let lp = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[])],
            edges: vec![[0, 0]],
        };
        let c = lp.edge_cut_classification();
        assert_eq!(c.kinds, vec![EdgeKind::NonBridge]);
        assert!(c.cuts.is_empty());
        let pair = StableGraph {
            g: 3,
            n: 0,
            vertices: vec![v(1, &[]), v(1, &[])],
            edges: vec![[0, 1], [0, 1]],
        };
        let c = pair.edge_cut_classification();
        assert_eq!(c.kinds, vec![EdgeKind::NonBridge; 2]);
        assert_eq!(c.cuts, vec![[0, 1]]);
    }
}
