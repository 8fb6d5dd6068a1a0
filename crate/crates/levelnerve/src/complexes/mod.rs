//! Finite simplicial sets built as symplectic orbits of induced
//! decompositions, with edge-path groups and homology.

mod build;
mod cross;
mod homology;
mod pi1;

use serde::{Deserialize, Serialize};

pub use build::{build_abelian_nerve, build_image_complex, framing_fiber, Built};
pub use cross::{brute_force_decompositions, cross_validate, CrossReport, Offender, RankComparison, BRUTE_FORCE_MAX};
pub use homology::{boundary_matrix, homology, HomologyGroup};
pub use pi1::{pi1_report, Pi1Report, Verdict, QUOTIENT_ORDER};

use crate::covers::CoverSpec;
use crate::error::{Error, Result};
use crate::surface::graph::StableGraph;

/// Where a simplex came from: its type (index into the rank's type list) and
/// the generator word carrying the seed onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexOrigin {
    #[serde(rename = "type")]
    pub type_index: usize,
    pub word: Vec<usize>,
}

/// Non-degenerate simplices of one rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankData {
    pub simplices: Vec<String>,
    /// Distinguishes simplices sharing one decomposition but differing in
    /// their contraction flags. Empty means all zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<usize>,
    /// `faces[s][i]`: index of the `i`-th face in the rank below.
    pub faces: Vec<Vec<usize>>,
    /// `face_maps[s][i]`: positions, in face `i`, of the remaining vertices
    /// of `s` in order. Empty means the standard ordering.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub face_maps: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub origins: Vec<SimplexOrigin>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<StableGraph>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub g: usize,
    pub n: usize,
    pub m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSpec>,
    /// Order of the acting matrix group, when it was enumerated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSimpSet {
    pub ranks: Vec<RankData>,
    pub provenance: Provenance,
}

impl FinSimpSet {
    /// Hand-built simplicial set from face tables (standard ordering).
    pub fn from_faces(faces: Vec<Vec<Vec<usize>>>) -> Result<FinSimpSet> {
        let ranks: Vec<RankData> = faces
            .into_iter()
            .enumerate()
            .map(|(k, fs)| RankData {
                simplices: (0..fs.len()).map(|i| format!("s{k}_{i}")).collect(),
                faces: fs,
                ..Default::default()
            })
            .collect();
        let x = FinSimpSet {
            ranks,
            provenance: Provenance {
                kind: "explicit".into(),
                ..Default::default()
            },
        };
        x.check_shape()?;
        Ok(x)
    }

    pub fn top_rank(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn count(&self, k: usize) -> usize {
        self.ranks.get(k).map_or(0, |r| r.simplices.len())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| r.simplices.len()).collect()
    }

    pub(crate) fn check_shape(&self) -> Result<()> {
        for (k, r) in self.ranks.iter().enumerate() {
            if r.faces.len() != r.simplices.len() {
                return Err(Error::Schema(format!("rank {k}: face table size mismatch")));
            }
            let below = if k == 0 { 0 } else { self.ranks[k - 1].simplices.len() };
            for f in &r.faces {
                let want = if k == 0 { 0 } else { k + 1 };
                if f.len() != want || f.iter().any(|&i| i >= below) {
                    return Err(Error::Schema(format!("rank {k}: bad face entry")));
                }
            }
            if !r.face_maps.is_empty() {
                if r.face_maps.len() != r.simplices.len() {
                    return Err(Error::Schema(format!("rank {k}: face map size mismatch")));
                }
                for fm in &r.face_maps {
                    if fm.len() != k + 1 || fm.iter().any(|m| m.len() != k) {
                        return Err(Error::Schema(format!("rank {k}: bad face map")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Position in face `i` of vertex `p` of simplex `s` at rank `k`.
    pub fn face_position(&self, k: usize, s: usize, i: usize, p: usize) -> usize {
        let r = &self.ranks[k];
        let q = if p < i { p } else { p - 1 };
        if r.face_maps.is_empty() {
            q
        } else {
            r.face_maps[s][i][q]
        }
    }

    /// Orientation sign of face `i` of simplex `s` relative to the face's own
    /// vertex order.
    pub fn face_sign(&self, k: usize, s: usize, i: usize) -> i64 {
        let seq: Vec<usize> = (0..=k).filter(|&p| p != i).map(|p| self.face_position(k, s, i, p)).collect();
        let mut inv = 0;
        for a in 0..seq.len() {
            for b in a + 1..seq.len() {
                if seq[a] > seq[b] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Violations of `∂_i ∂_j = ∂_{j-1} ∂_i`, in the vertex-tracking form.
    pub fn simplicial_identity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for k in 2..self.ranks.len() {
            for s in 0..self.ranks[k].simplices.len() {
                for j in 0..=k {
                    for i in 0..j {
                        let fj = self.ranks[k].faces[s][j];
                        let fi = self.ranks[k].faces[s][i];
                        let a = self.ranks[k - 1].faces[fj][self.face_position(k, s, j, i)];
                        let b = self.ranks[k - 1].faces[fi][self.face_position(k, s, i, j)];
                        if a != b {
                            out.push(format!("rank {k} simplex {s}: faces ({i},{j})"));
                        }
                    }
                }
            }
        }
        out
    }

    /// Connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let nv = self.count(0);
        if nv == 0 {
            return 0;
        }
        let mut p: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut comps = nv;
        if let Some(r1) = self.ranks.get(1) {
            for f in &r1.faces {
                let (a, b) = (find(&mut p, f[0]), find(&mut p, f[1]));
                if a != b {
                    p[a] = b;
                    comps -= 1;
                }
            }
        }
        comps
    }
}
