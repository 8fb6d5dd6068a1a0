use serde::{Deserialize, Serialize};

use super::FinSimpSet;
use crate::arith::{invariant_factors, Mat};
use crate::error::{Error, Result};

/// `H_q ≅ Z^free ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<i128>,
}

impl HomologyGroup {
    /// Elementary divisors with `0` standing for a free summand.
    pub fn divisors(&self) -> Vec<i128> {
        let mut out = vec![0; self.free_rank];
        out.extend(&self.torsion);
        out
    }
}

/// Boundary `C_k → C_{k-1}` as rows indexed by `k`-simplices.
pub fn boundary_matrix(x: &FinSimpSet, k: usize) -> Mat<i64> {
    if k == 0 || k >= x.ranks.len() {
        return vec![vec![]; x.count(k)];
    }
    let below = x.count(k - 1);
    (0..x.count(k))
        .map(|s| {
            let mut row = vec![0i64; below];
            for i in 0..=k {
                let sign = if i % 2 == 0 { 1 } else { -1 } * x.face_sign(k, s, i);
                row[x.ranks[k].faces[s][i]] += sign;
            }
            row
        })
        .collect()
}

fn rank_and_divisors(m: &Mat<i64>, ncol: usize) -> (usize, Vec<i128>) {
    if m.is_empty() || ncol == 0 {
        return (0, vec![]);
    }
    let d: Vec<i128> = invariant_factors(m, ncol).into_iter().filter(|&d| d != 0).collect();
    (d.len(), d.into_iter().filter(|&d| d != 1).collect())
}

/// Simplicial homology `H_q(X; Z)`.
pub fn homology(x: &FinSimpSet, q: usize) -> Result<HomologyGroup> {
    if q >= x.ranks.len() {
        return Err(Error::Argument(format!("q = {q} exceeds the top rank")));
    }
    let nq = x.count(q);
    let (r_out, _) = if q == 0 {
        (0, vec![])
    } else {
        rank_and_divisors(&boundary_matrix(x, q), x.count(q - 1))
    };
    let (r_in, tors) = if q + 1 < x.ranks.len() {
        rank_and_divisors(&boundary_matrix(x, q + 1), nq)
    } else {
        (0, vec![])
    };
    Ok(HomologyGroup {
        free_rank: nq - r_out - r_in,
        torsion: tors,
    })
}
