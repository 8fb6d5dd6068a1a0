//! Graph decompositions of `H_m = H_1(S_g, Z/m)`: validity, equivalence,
//! order, framing and equivariant decompositions over covers.

mod order;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use order::leq;
pub use validate::{Condition, ValidationReport};

use crate::arith::Mat;
use crate::canon::canonical_labeling;
use crate::covers::{Cover, CoverSpec, LiftResult};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::surface::catalog::{standard_multicurve, CurveSystem, MulticurveRep};
use crate::surface::graph::Vertex;
use crate::surface::word::Word;
use crate::symplectic::{subgroup_report, SubgroupReport, SympMatrix, SympSpace, Vector};

/// One deck element acting on the graph and on `H_m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionEntry {
    pub matrix: Mat<i64>,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// An n-marked graph decomposition, optionally framed and equivariant.
/// Subgroups are stored as canonical generator rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(flatten)]
    pub space: SympSpace,
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[usize; 2]>,
    pub vertex_groups: Vec<Mat<i64>>,
    pub edge_groups: Vec<Mat<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<ActionEntry>>,
}

impl Decomposition {
    /// Build from generators; genera are read off the ranks.
    pub fn new(
        space: SympSpace,
        n: usize,
        vertices: Vec<Vertex>,
        edges: Vec<[usize; 2]>,
        vertex_gens: &[Vec<Vector>],
        edge_gens: &[Vec<Vector>],
        frames: Option<Vec<Vector>>,
    ) -> Result<Decomposition> {
        if vertices.len() != vertex_gens.len() || edges.len() != edge_gens.len() {
            return Err(Error::Argument("group data does not match the graph".into()));
        }
        if let Some(f) = &frames {
            if f.len() != edges.len() {
                return Err(Error::Argument("one frame per edge required".into()));
            }
        }
        for [a, b] in &edges {
            if *a >= vertices.len() || *b >= vertices.len() {
                return Err(Error::Argument("edge endpoint out of range".into()));
            }
        }
        Ok(Decomposition {
            space,
            n,
            vertices: vertices
                .into_iter()
                .map(|mut v| {
                    v.marks.sort_unstable();
                    v
                })
                .collect(),
            edges,
            vertex_groups: vertex_gens.iter().map(|g| space.canonical(g)).collect(),
            edge_groups: edge_gens.iter().map(|g| space.canonical(g)).collect(),
            frames: frames.map(|f| f.iter().map(|x| space.sign_normalize(x)).collect()),
            action: None,
        })
    }

    pub(crate) fn report(&self, rows: &[Vector]) -> SubgroupReport {
        subgroup_report(rows, self.space).expect("rows lie in the ambient space")
    }

    /// Generators of `E(v)`.
    pub fn star_gens(&self, v: usize) -> Vec<Vector> {
        let mut out = Vec::new();
        for (e, ed) in self.edges.iter().enumerate() {
            if ed[0] == v || ed[1] == v {
                out.extend(self.edge_groups[e].iter().cloned());
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|ed| usize::from(ed[0] == v) + usize::from(ed[1] == v))
            .sum()
    }

    pub fn rank(&self) -> Option<usize> {
        self.edges.len().checked_sub(1)
    }

    pub fn first_betti(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    /// Frames dropped, action kept.
    pub fn unframed(&self) -> Decomposition {
        Decomposition {
            frames: None,
            ..self.clone()
        }
    }

    /// Canonical encoding: equal exactly for equivalent decompositions.
    pub fn canonical_form(&self) -> String {
        let (vattrs, edges, _) = self.canonical_parts();
        serde_json::to_string(&(self.space, self.n, vattrs, edges)).expect("serializable")
    }

    #[allow(clippy::type_complexity)]
    fn canonical_parts(
        &self,
    ) -> (
        Vec<(Vec<usize>, Mat<i64>)>,
        Vec<(usize, usize, (Mat<i64>, Vector))>,
        crate::canon::Labeling<(Vec<usize>, Mat<i64>), (Mat<i64>, Vector)>,
    ) {
        let vattrs: Vec<(Vec<usize>, Mat<i64>)> = self
            .vertices
            .iter()
            .zip(&self.vertex_groups)
            .map(|(v, g)| (v.marks.clone(), g.clone()))
            .collect();
        let edges: Vec<(usize, usize, (Mat<i64>, Vector))> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &[a, b])| {
                let f = self.frames.as_ref().map(|f| f[e].clone()).unwrap_or_default();
                (a, b, (self.edge_groups[e].clone(), f))
            })
            .collect();
        let lab = canonical_labeling(&vattrs, &edges);
        let (va, es) = lab.encoding();
        (va, es, lab)
    }

    /// Rebuild a decomposition from its canonical encoding; genera are read
    /// off the ranks.
    pub fn from_canonical_form(enc: &str) -> Result<Decomposition> {
        type Enc = (SympSpace, usize, Vec<(Vec<usize>, Mat<i64>)>, Vec<(usize, usize, (Mat<i64>, Vector))>);
        let (space, n, vattrs, edges): Enc =
            serde_json::from_str(enc).map_err(|e| Error::Schema(format!("bad decomposition encoding: {e}")))?;
        let space = SympSpace::new(space.genus, space.modulus)?;
        let framed = edges.iter().any(|e| !e.2 .1.is_empty());
        let mut d = Decomposition {
            space,
            n,
            vertices: vattrs
                .iter()
                .map(|(m, _)| Vertex {
                    genus: 0,
                    marks: m.clone(),
                })
                .collect(),
            edges: edges.iter().map(|e| [e.0, e.1]).collect(),
            vertex_groups: vattrs.into_iter().map(|v| v.1).collect(),
            edge_groups: edges.iter().map(|e| e.2 .0.clone()).collect(),
            frames: framed.then(|| edges.iter().map(|e| e.2 .1.clone()).collect()),
            action: None,
        };
        if d.vertex_groups.iter().chain(&d.edge_groups).flatten().any(|r| r.len() != space.rank())
            || d.edges.iter().any(|e| e[0] >= d.vertices.len() || e[1] >= d.vertices.len())
            || d.frames.as_ref().is_some_and(|f| f.iter().any(|x| x.len() != space.rank()))
        {
            return Err(Error::Schema("decomposition encoding has inconsistent sizes".into()));
        }
        for v in 0..d.vertices.len() {
            let gv = d.report(&d.vertex_groups[v]).rank;
            let ev = d.report(&d.star_gens(v)).rank;
            d.vertices[v].genus = gv.saturating_sub(ev) / 2;
        }
        Ok(d)
    }

    /// Underlying stable graph with genera read off the ranks.
    pub fn derived_type(&self) -> crate::surface::graph::StableGraph {
        let vertices = (0..self.vertices.len())
            .map(|v| {
                let gv = self.report(&self.vertex_groups[v]).rank;
                let ev = self.report(&self.star_gens(v)).rank;
                Vertex {
                    genus: gv.saturating_sub(ev) / 2,
                    marks: self.vertices[v].marks.clone(),
                }
            })
            .collect();
        crate::surface::graph::StableGraph {
            g: self.space.genus,
            n: self.n,
            vertices,
            edges: self.edges.clone(),
        }
    }

    /// Relabel into canonical order; returns the decomposition and the
    /// canonical position of each input edge.
    pub fn canonicalize(&self) -> (Decomposition, Vec<usize>) {
        let (_, _, lab) = self.canonical_parts();
        let nv = self.vertices.len();
        let mut old_of = vec![0; nv];
        for v in 0..nv {
            old_of[lab.new_of[v]] = v;
        }
        let ne = self.edges.len();
        let mut old_edge = vec![0; ne];
        for e in 0..ne {
            old_edge[lab.edge_pos[e]] = e;
        }
        let d = Decomposition {
            space: self.space,
            n: self.n,
            vertices: old_of.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: old_edge
                .iter()
                .map(|&e| {
                    let [a, b] = self.edges[e];
                    let (p, q) = (lab.new_of[a], lab.new_of[b]);
                    [p.min(q), p.max(q)]
                })
                .collect(),
            vertex_groups: old_of.iter().map(|&v| self.vertex_groups[v].clone()).collect(),
            edge_groups: old_edge.iter().map(|&e| self.edge_groups[e].clone()).collect(),
            frames: self
                .frames
                .as_ref()
                .map(|f| old_edge.iter().map(|&e| f[e].clone()).collect()),
            action: self.action.as_ref().map(|acts| {
                acts.iter()
                    .map(|a| ActionEntry {
                        matrix: a.matrix.clone(),
                        vertices: old_of.iter().map(|&v| lab.new_of[a.vertices[v]]).collect(),
                        edges: old_edge.iter().map(|&e| lab.edge_pos[a.edges[e]]).collect(),
                    })
                    .collect()
            }),
        };
        (d, lab.edge_pos)
    }

    /// Apply a symplectic matrix to all subgroup data.
    pub fn sp_action(&self, f: &SympMatrix) -> Result<Decomposition> {
        if f.space != self.space {
            return Err(Error::Argument("matrix and decomposition live in different spaces".into()));
        }
        if !f.is_symplectic() {
            return Err(Error::Argument("matrix is not symplectic".into()));
        }
        Ok(self.apply_unchecked(f))
    }

    /// `sp_action` without the symplectic check (for trusted generators).
    pub fn apply_unchecked(&self, f: &SympMatrix) -> Decomposition {
        let img = |rows: &Mat<i64>| -> Mat<i64> {
            let r: Vec<Vector> = rows.iter().map(|x| f.apply(x)).collect();
            self.space.canonical(&r)
        };
        let action = self.action.as_ref().map(|acts| {
            let finv = f.symplectic_inverse();
            acts.iter()
                .map(|a| {
                    let m = SympMatrix {
                        space: self.space,
                        entries: a.matrix.clone(),
                    };
                    ActionEntry {
                        matrix: f.mul(&m).mul(&finv).entries,
                        vertices: a.vertices.clone(),
                        edges: a.edges.clone(),
                    }
                })
                .collect()
        });
        Decomposition {
            space: self.space,
            n: self.n,
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            vertex_groups: self.vertex_groups.iter().map(img).collect(),
            edge_groups: self.edge_groups.iter().map(img).collect(),
            frames: self
                .frames
                .as_ref()
                .map(|fr| fr.iter().map(|x| self.space.sign_normalize(&f.apply(x))).collect()),
            action,
        }
    }

    /// Decomposition induced by a curve system.
    pub fn from_curve_system(cs: &CurveSystem, m: i64) -> Result<Decomposition> {
        let g = cs.model.g;
        let space = SympSpace::new(g, m)?;
        let t = &cs.graph;
        let vgens: Vec<Vec<Vector>> = (0..t.vertices.len()).map(|v| cs.piece_classes(v, m)).collect();
        let classes = cs.curve_classes(m);
        let egens: Vec<Vec<Vector>> = classes.iter().map(|c| vec![c.clone()]).collect();
        Decomposition::new(
            space,
            t.n,
            t.vertices.clone(),
            t.edges.clone(),
            &vgens,
            &egens,
            Some(classes),
        )
    }

    /// Equivariant decomposition of `H_1(S̄_K, Z/m)` from a lift.
    pub fn from_lift(cover: &Cover, cs: &CurveSystem, lift: &LiftResult, m: i64) -> Result<Decomposition> {
        let hb = cover.homology_basis()?;
        let space = SympSpace::new(hb.genus, m)?;
        let cg = &lift.cut_graph;
        // vertex groups: classes of kernel Schreier generators of each piece
        let mut vgens = Vec::new();
        for &[v, x] in &lift.vertex_origin {
            let words = kernel_generators(cover, &cs.gens[v]);
            let mut cls = Vec::new();
            for w in &words {
                cls.push(cover.loop_class(x, w, m)?);
            }
            vgens.push(cls);
        }
        let mut egens = Vec::new();
        let mut frames = Vec::new();
        for &[e, ci] in &lift.edge_origin {
            let c = lift.curves[e].classes[ci].clone();
            egens.push(vec![c.clone()]);
            frames.push(c);
        }
        let mut d = Decomposition::new(
            space,
            cg.n,
            cg.vertices.clone(),
            cg.edges.clone(),
            &vgens,
            &egens,
            Some(frames),
        )?;
        // deck action on vertices (v, xH_v) and edge components
        let mut vindex: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, &[v, x]) in lift.vertex_origin.iter().enumerate() {
            let h = cover.generated(&cs.gens[v].iter().map(|w| cover.eval(w)).collect::<Vec<_>>());
            for &z in &h {
                vindex.insert((v, cover.group.mul_idx(x, z)), k);
            }
        }
        let mut eindex: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, &[e, ci]) in lift.edge_origin.iter().enumerate() {
            let y = cover.eval(cs.curve_word(e));
            let mut z = lift.curves[e].sheets[ci];
            loop {
                eindex.insert((e, z), k);
                z = cover.group.mul_idx(z, y);
                if z == lift.curves[e].sheets[ci] {
                    break;
                }
            }
        }
        let mut acts = Vec::new();
        for gam in 0..cover.degree() {
            let mat = cover.deck_matrix(gam, m)?;
            let vertices = lift
                .vertex_origin
                .iter()
                .map(|&[v, x]| vindex[&(v, cover.group.mul_idx(gam, x))])
                .collect();
            let edges = lift
                .edge_origin
                .iter()
                .map(|&[e, ci]| eindex[&(e, cover.group.mul_idx(gam, lift.curves[e].sheets[ci]))])
                .collect();
            acts.push(ActionEntry {
                matrix: mat.entries,
                vertices,
                edges,
            });
        }
        d.action = Some(acts);
        Ok(d)
    }

    /// Number of edge orbits under the action (edge count when there is none).
    pub fn equivariant_rank(&self) -> usize {
        match &self.action {
            None => self.edges.len(),
            Some(acts) => {
                let mut seen = vec![false; self.edges.len()];
                let mut count = 0;
                for e in 0..self.edges.len() {
                    if !seen[e] {
                        count += 1;
                        for a in acts {
                            seen[a.edges[e]] = true;
                        }
                    }
                }
                count
            }
        }
    }
}

/// Schreier generators of `ker(φ) ∩ ⟨gens⟩`, as words.
pub fn kernel_generators(cover: &Cover, gens: &[Word]) -> Vec<Word> {
    let imgs: Vec<usize> = gens.iter().map(|w| cover.eval(w)).collect();
    let h = cover.generated(&imgs);
    let pos: BTreeMap<usize, usize> = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut trans: Vec<Option<Word>> = vec![None; h.len()];
    trans[0] = Some(Word::empty());
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut tree = std::collections::BTreeSet::new();
    while let Some(i) = queue.pop_front() {
        for (k, &y) in imgs.iter().enumerate() {
            for inv in [false, true] {
                let target = if inv {
                    cover.group.mul_idx(h[i], cover.group.inv_idx(y))
                } else {
                    cover.group.mul_idx(h[i], y)
                };
                let j = pos[&target];
                if trans[j].is_none() {
                    let w = if inv { gens[k].inv() } else { gens[k].clone() };
                    trans[j] = Some(trans[i].as_ref().expect("set").mul(&w));
                    if inv {
                        tree.insert((j, k));
                    } else {
                        tree.insert((i, k));
                    }
                    queue.push_back(j);
                }
            }
        }
    }
    let trans: Vec<Word> = trans.into_iter().map(|t| t.expect("connected")).collect();
    let mut out = Vec::new();
    for i in 0..h.len() {
        for (k, &y) in imgs.iter().enumerate() {
            if tree.contains(&(i, k)) {
                continue;
            }
            let j = pos[&cover.group.mul_idx(h[i], y)];
            out.push(trans[i].mul(&gens[k]).mul(&trans[j].inv()));
        }
    }
    out
}

/// Framed decomposition induced by a catalog multicurve.
pub fn induced_from_multicurve(g: usize, n: usize, m: i64, mc: &MulticurveRep) -> Result<Decomposition> {
    if (mc.graph.g, mc.graph.n) != (g, n) {
        return Err(Error::Argument("multicurve signature differs".into()));
    }
    let cs = crate::covers::catalog_system(mc)?;
    Decomposition::from_curve_system(&cs, m)
}

/// Equivariant decomposition induced by lifting a catalog multicurve.
pub fn induced_from_lift(spec: &CoverSpec, mc: &MulticurveRep, m: i64, limits: &Limits) -> Result<Decomposition> {
    let cover = Cover::new(spec, limits)?;
    let cs = crate::covers::catalog_system(mc)?;
    let lift = cover.lift(&cs, m)?;
    Decomposition::from_lift(&cover, &cs, &lift, m)
}

/// Equivalence of decompositions.
pub fn equivalent(a: &Decomposition, b: &Decomposition) -> bool {
    a.space == b.space && a.canonical_form() == b.canonical_form()
}

/// The standard seed of a type.
pub fn seed(t: &crate::surface::graph::StableGraph, m: i64) -> Result<(CurveSystem, Decomposition)> {
    let (_, cs) = standard_multicurve(t)?;
    let d = Decomposition::from_curve_system(&cs, m)?;
    Ok((cs, d))
}
