//! Word-level realizations of multicurves of a given topological type.
//!
//! The surface group is cut top-down: first one handle per non-tree edge of
//! a spanning tree, then recursively along tree edges. Every vertex ends up
//! with generators of its piece's fundamental group, every half-edge with a
//! boundary word `c_h`, and every edge `e` with a transition `s_e` such that
//! `c_{2e+1} = s_e c_{2e}^{-1} s_e^{-1}`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::graph::{EdgeKind, StableGraph};
use super::presentation::Model;
use super::twist::TwistAuto;
use super::word::{self, format_word, parse_word, Word};
use crate::error::{Error, Result};
use crate::symplectic::Vector;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveSystem {
    pub model: Model,
    pub graph: StableGraph,
    /// Generators of each piece's fundamental group, as words in the free model.
    pub gens: Vec<Vec<Word>>,
    /// Boundary word per half-edge.
    pub boundary: Vec<Word>,
    /// Transition per edge.
    pub transition: Vec<Word>,
    /// Peripheral word of each puncture `1..=np` of the free model, lying in
    /// the piece of the vertex carrying that mark.
    pub punctures: Vec<Word>,
    /// Vertex carrying each puncture of the free model.
    pub puncture_vertex: Vec<usize>,
    /// Named automorphisms applied to the catalog system, in order.
    pub moves: Vec<String>,
}

/// Catalog representative: the type plus one oriented word per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticurveRep {
    #[serde(rename = "type")]
    pub graph: StableGraph,
    pub words: Vec<String>,
    /// Named automorphisms applied to the catalog representative, in order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<String>,
}

#[derive(Clone, Debug)]
enum Label {
    Puncture(usize),
    Half(usize),
}

#[derive(Clone, Debug)]
struct Periph {
    w: Word,
    core: Word,
    label: Label,
    home: usize,
}

impl Periph {
    fn word(&self) -> Word {
        self.w.conj(&self.core)
    }
}

/// Range covered by the shipped catalog.
pub fn in_catalog(g: usize, n: usize) -> bool {
    g >= 1 && g <= 3 && n <= 2 && 2 * g + n > 2
}

struct Builder<'a> {
    t: &'a StableGraph,
    tree: Vec<bool>,
    gens: Vec<Vec<Word>>,
    periph_at_leaf: Vec<Vec<Periph>>,
}

impl CurveSystem {
    /// Realize the type `t` (any hyperbolic signature).
    pub fn build(t: &StableGraph) -> Result<CurveSystem> {
        t.validate()?;
        let model = Model::new(t.g, t.n)?;
        let g = t.g;
        let np = model.np();
        let nv = t.vertices.len();
        let mut mark_vertex = vec![0usize; np + 1];
        for (v, vx) in t.vertices.iter().enumerate() {
            for &mk in &vx.marks {
                mark_vertex[mk] = v;
            }
        }
        // spanning tree by BFS from vertex 0
        let mut tree = vec![false; t.edges.len()];
        let mut seen = vec![false; nv];
        seen[0] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for (e, ed) in t.edges.iter().enumerate() {
                for s in 0..2 {
                    if ed[s] == x && !seen[ed[1 - s]] {
                        seen[ed[1 - s]] = true;
                        tree[e] = true;
                        q.push_back(ed[1 - s]);
                    }
                }
            }
        }
        let mut handles: Vec<(Word, Word)> = (1..=g)
            .map(|i| (Word::letter(word::a(i)), Word::letter(word::b(i))))
            .collect();
        let mut periph: Vec<Periph> = (1..=np)
            .map(|j| Periph {
                w: Word::empty(),
                core: model.u_word(j),
                label: Label::Puncture(j),
                home: mark_vertex[j],
            })
            .collect();
        // stable letters for non-tree edges
        let mut t_letter: Vec<Word> = vec![Word::empty(); t.edges.len()];
        for (e, ed) in t.edges.iter().enumerate() {
            if tree[e] {
                continue;
            }
            let (al, be) = handles.remove(0);
            let x2 = al.clone();
            let x1 = be.mul(&al.inv()).mul(&be.inv());
            t_letter[e] = be;
            let mut next = vec![
                Periph {
                    w: Word::empty(),
                    core: x1,
                    label: Label::Half(2 * e + 1),
                    home: ed[1],
                },
                Periph {
                    w: Word::empty(),
                    core: x2,
                    label: Label::Half(2 * e),
                    home: ed[0],
                },
            ];
            next.extend(periph);
            periph = next;
        }
        let mut b = Builder {
            t,
            tree: tree.clone(),
            gens: vec![Vec::new(); nv],
            periph_at_leaf: vec![Vec::new(); nv],
        };
        let all: BTreeSet<usize> = (0..nv).collect();
        b.split(&all, 0, handles, periph);
        let mut boundary = vec![Word::empty(); 2 * t.edges.len()];
        let mut conj = vec![Word::empty(); 2 * t.edges.len()];
        let mut punctures = vec![Word::empty(); np];
        for v in 0..nv {
            for p in &b.periph_at_leaf[v] {
                match p.label {
                    Label::Half(h) => {
                        boundary[h] = p.word();
                        conj[h] = p.w.clone();
                    }
                    Label::Puncture(j) => punctures[j - 1] = p.word(),
                }
            }
        }
        let transition = (0..t.edges.len())
            .map(|e| conj[2 * e + 1].mul(&t_letter[e]).mul(&conj[2 * e].inv()))
            .collect();
        Ok(CurveSystem {
            model,
            graph: t.clone(),
            gens: b.gens,
            boundary,
            transition,
            punctures,
            puncture_vertex: (1..=np).map(|j| mark_vertex[j]).collect(),
            moves: vec![],
        })
    }

    pub fn curve_word(&self, e: usize) -> &Word {
        &self.boundary[2 * e]
    }

    pub fn rep(&self) -> MulticurveRep {
        MulticurveRep {
            graph: self.graph.clone(),
            words: (0..self.graph.edges.len())
                .map(|e| format_word(self.curve_word(e), self.model.g))
                .collect(),
            moves: self.moves.clone(),
        }
    }

    /// Closed homology class of each curve.
    pub fn curve_classes(&self, m: i64) -> Vec<Vector> {
        (0..self.graph.edges.len())
            .map(|e| self.model.homology(self.curve_word(e), m, true))
            .collect()
    }

    /// Closed homology classes of each piece's generators.
    pub fn piece_classes(&self, v: usize, m: i64) -> Vec<Vector> {
        self.gens[v]
            .iter()
            .map(|w| self.model.homology(w, m, true))
            .collect()
    }

    /// Half-edges at a vertex.
    pub fn halves_at(&self, v: usize) -> Vec<usize> {
        self.graph.half_edges(v)
    }

    /// Apply an automorphism to every word.
    pub fn apply(&self, t: &TwistAuto) -> CurveSystem {
        let f = |w: &Word| self.model.to_free(&t.apply(w));
        CurveSystem {
            model: self.model,
            graph: self.graph.clone(),
            gens: self.gens.iter().map(|gs| gs.iter().map(f).collect()).collect(),
            boundary: self.boundary.iter().map(f).collect(),
            transition: self.transition.iter().map(f).collect(),
            punctures: self.punctures.iter().map(f).collect(),
            puncture_vertex: self.puncture_vertex.clone(),
            moves: self.moves.iter().cloned().chain(t.name.rsplit('*').map(String::from)).collect(),
        }
    }

    /// Forget curve `e`: merge the adjacent pieces (or close up a loop).
    /// Vertex labels follow [`StableGraph::contract_edge`].
    pub fn contract(&self, e: usize) -> Result<CurveSystem> {
        let graph = self.graph.contract_edge(e)?;
        let [x, y] = self.graph.edges[e];
        let s = self.transition[e].clone();
        let mut gens = self.gens.clone();
        let mut boundary = self.boundary.clone();
        let mut transition = self.transition.clone();
        let mut punctures = self.punctures.clone();
        if x == y {
            gens[x].push(s);
        } else {
            let si = s.inv();
            let cj = |w: &Word| si.mul(w).mul(&s);
            let moved: Vec<Word> = gens[y].iter().map(cj).collect();
            gens[x].extend(moved);
            gens[y].clear();
            for (f, ed) in self.graph.edges.iter().enumerate() {
                if f == e {
                    continue;
                }
                let at0 = ed[0] == y;
                let at1 = ed[1] == y;
                if at0 {
                    boundary[2 * f] = cj(&boundary[2 * f]);
                }
                if at1 {
                    boundary[2 * f + 1] = cj(&boundary[2 * f + 1]);
                }
                transition[f] = match (at0, at1) {
                    (true, true) => cj(&transition[f]),
                    (true, false) => transition[f].mul(&s),
                    (false, true) => si.mul(&transition[f]),
                    (false, false) => transition[f].clone(),
                };
            }
            for (j, &v) in self.puncture_vertex.iter().enumerate() {
                if v == y {
                    punctures[j] = cj(&punctures[j]);
                }
            }
        }
        // relabel to match contract_edge: keep min(x,y), drop max(x,y)
        let mut new_gens = gens;
        let mut puncture_vertex = self.puncture_vertex.clone();
        if x != y {
            let (keep, drop) = (x.min(y), x.max(y));
            let merged = std::mem::take(&mut new_gens[x]);
            new_gens[keep] = merged;
            new_gens.remove(drop);
            for v in puncture_vertex.iter_mut() {
                if *v == y || *v == x {
                    *v = keep;
                } else if *v > drop {
                    *v -= 1;
                }
            }
        }
        let keep_e: Vec<usize> = (0..self.graph.edges.len()).filter(|&f| f != e).collect();
        Ok(CurveSystem {
            model: self.model,
            graph,
            gens: new_gens,
            boundary: keep_e
                .iter()
                .flat_map(|&f| [boundary[2 * f].clone(), boundary[2 * f + 1].clone()])
                .collect(),
            transition: keep_e.iter().map(|&f| transition[f].clone()).collect(),
            punctures,
            puncture_vertex,
            moves: self.moves.clone(),
        })
    }

    /// Keep only the curves in `keep` (sorted edge indices).
    pub fn restrict(&self, keep: &[usize]) -> Result<CurveSystem> {
        let mut cur = self.clone();
        let mut idx: Vec<usize> = (0..self.graph.edges.len()).collect();
        for e in (0..self.graph.edges.len()).rev() {
            if !keep.contains(&e) {
                let pos = idx.iter().position(|&x| x == e).expect("present");
                cur = cur.contract(pos)?;
                idx.remove(pos);
            }
        }
        Ok(cur)
    }

    /// Structural self-check of the word data.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (e, _) in self.graph.edges.iter().enumerate() {
            let s = &self.transition[e];
            let lhs = &self.boundary[2 * e + 1];
            let rhs = s.mul(&self.boundary[2 * e].inv()).mul(&s.inv());
            if *lhs != rhs {
                return Err(format!("edge {e}: transition relation fails"));
            }
        }
        Ok(())
    }
}

impl Builder<'_> {
    fn split(&mut self, set: &BTreeSet<usize>, root: usize, handles: Vec<(Word, Word)>, periph: Vec<Periph>) {
        if set.len() == 1 {
            let v = root;
            let mut gs = Vec::new();
            for (a, b) in &handles {
                gs.push(a.clone());
                gs.push(b.clone());
            }
            for p in &periph {
                gs.push(p.word());
            }
            self.gens[v] = gs;
            self.periph_at_leaf[v] = periph;
            return;
        }
        let t = self.t;
        let e = (0..t.edges.len())
            .find(|&e| self.tree[e] && set.contains(&t.edges[e][0]) && set.contains(&t.edges[e][1]))
            .expect("connected subtree has a tree edge");
        let [x, y] = t.edges[e];
        // side of the tree (within `set`, without e) containing root
        let mut a_side: BTreeSet<usize> = [root].into();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for (f, ed) in t.edges.iter().enumerate() {
                if f == e || !self.tree[f] {
                    continue;
                }
                for s in 0..2 {
                    let w = ed[1 - s];
                    if ed[s] == v && set.contains(&w) && a_side.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        let b_side: BTreeSet<usize> = set.difference(&a_side).copied().collect();
        let (a_end, b_end, a_half, b_half) = if a_side.contains(&x) {
            (x, y, 2 * e, 2 * e + 1)
        } else {
            (y, x, 2 * e + 1, 2 * e)
        };
        let _ = a_end;
        let hb: usize = b_side.iter().map(|&v| t.vertices[v].genus).sum();
        let hb = hb.min(handles.len());
        let mut handles = handles;
        let ha = handles.split_off(hb);
        let hbv = handles;
        // bubble B peripherals to the right end (low indices)
        let mut list = periph;
        let in_b = |p: &Periph| b_side.contains(&p.home);
        loop {
            let mut moved = false;
            for i in 0..list.len().saturating_sub(1) {
                if !in_b(&list[i]) && in_b(&list[i + 1]) {
                    let bw = list[i + 1].word();
                    let mut a = list[i].clone();
                    a.w = bw.mul(&a.w);
                    list[i] = list[i + 1].clone();
                    list[i + 1] = a;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        let j = list.iter().filter(|p| in_b(p)).count();
        let a_list: Vec<Periph> = list[j..].to_vec();
        let mut b_list: Vec<Periph> = list[..j].to_vec();
        let mut ha_word = Word::empty();
        for (a, b) in &ha {
            ha_word = ha_word.mul(&Word::commutator(a, b));
        }
        for p in a_list.iter().rev() {
            ha_word = ha_word.mul(&p.word());
        }
        let x1 = ha_word.inv();
        let mut new_a = vec![Periph {
            w: Word::empty(),
            core: x1.clone(),
            label: Label::Half(a_half),
            home: if a_half == 2 * e { x } else { y },
        }];
        new_a.extend(a_list);
        b_list.push(Periph {
            w: Word::empty(),
            core: x1.inv(),
            label: Label::Half(b_half),
            home: b_end,
        });
        self.split(&a_side, root, ha, new_a);
        self.split(&b_side, b_end, hbv, b_list);
    }
}

/// Catalog representative of a stable graph type.
pub fn standard_multicurve(t: &StableGraph) -> Result<(MulticurveRep, CurveSystem)> {
    if !in_catalog(t.g, t.n) {
        return Err(Error::Unsupported(format!(
            "signature (g={}, n={}) is outside the catalog (1 <= g <= 3, n <= 2)",
            t.g, t.n
        )));
    }
    if t.edges.is_empty() {
        return Err(Error::Unsupported("the empty multicurve has no representative".into()));
    }
    let cs = CurveSystem::build(t)?;
    Ok((cs.rep(), cs))
}

/// Parse a representative's words back into the free model.
pub fn rep_words(rep: &MulticurveRep) -> Result<Vec<Word>> {
    let model = Model::new(rep.graph.g, rep.graph.n)?;
    rep.words
        .iter()
        .map(|s| Ok(model.to_free(&parse_word(s, rep.graph.g, model.np())?)))
        .collect()
}

/// Edge classification read off the closed homology of the words: bridge iff
/// the class vanishes.
pub fn homology_edge_kinds(cs: &CurveSystem) -> Vec<EdgeKind> {
    cs.curve_classes(0)
        .iter()
        .map(|c| {
            if c.iter().all(|&x| x == 0) {
                EdgeKind::Bridge
            } else {
                EdgeKind::NonBridge
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::graph::{all_stable_graphs, Vertex};

    fn v(genus: usize, marks: &[usize]) -> Vertex {
        Vertex {
            genus,
            marks: marks.to_vec(),
        }
    }

    #[test]
    fn spec_examples() {
        let sep = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[]), v(1, &[])],
            edges: vec![[0, 1]],
        };
        let (rep, _) = standard_multicurve(&sep).unwrap();
        assert_eq!(rep.words, vec!["a1 b1 A1 B1"]);
        let nonsep = StableGraph {
            g: 2,
            n: 0,
            vertices: vec![v(1, &[])],
            edges: vec![[0, 0]],
        };
        let (rep, cs) = standard_multicurve(&nonsep).unwrap();
        assert_eq!(rep.words, vec!["a1"]);
        assert_eq!(cs.curve_classes(0), vec![vec![1, 0, 0, 0]]);
        let pair = StableGraph {
            g: 3,
            n: 0,
            vertices: vec![v(1, &[]), v(1, &[])],
            edges: vec![[0, 1], [0, 1]],
        };
        let (_, cs) = standard_multicurve(&pair).unwrap();
        let cl = cs.curve_classes(0);
        let neg: Vec<i64> = cl[1].iter().map(|x| -x).collect();
        assert!(cl[0] == cl[1] || cl[0] == neg);
        assert!(standard_multicurve(&StableGraph::trivial(4, 0)).is_err());
    }

    #[test]
    fn catalog_consistency() {
        for (g, n) in [(1, 1), (1, 2), (2, 0), (2, 1), (2, 2), (3, 0)] {
            for (k, ts) in all_stable_graphs(g, n).unwrap() {
                if k == 0 {
                    continue;
                }
                for t in ts {
                    let (_, cs) = standard_multicurve(&t).unwrap();
                    cs.check().unwrap();
                    let cut = t.edge_cut_classification();
                    assert_eq!(homology_edge_kinds(&cs), cut.kinds, "{t:?}");
                    let cl = cs.curve_classes(0);
                    for [e, f] in cut.cuts {
                        let neg: Vec<i64> = cl[f].iter().map(|x| -x).collect();
                        assert!(cl[e] == cl[f] || cl[e] == neg);
                    }
                    for e in 0..t.edges.len() {
                        let c = cs.contract(e).unwrap();
                        c.check().unwrap();
                        assert_eq!(c.graph, t.contract_edge(e).unwrap());
                    }
                }
            }
        }
    }
}
