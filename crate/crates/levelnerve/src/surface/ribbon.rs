//! Ribbon structure on the rose of the free model, and the intersection
//! pairing of cycles on ribbon graphs built from it.

use super::presentation::Model;
use super::word::{self, Letter};

/// Half-edge of a petal: its start or its end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    /// Index into `Model::free_letters`.
    pub petal: usize,
    pub start: bool,
}

/// Face words of the thickened rose: the relator boundary
/// `Π[α_i,β_i] u_np ⋯ u_2`, and one face `u_j^{-1}` per `j >= 2`.
pub fn face_words(model: &Model) -> Vec<Vec<Letter>> {
    let mut f1 = Vec::new();
    for i in 1..=model.g {
        let (a, b) = (word::a(i), word::b(i));
        f1.extend([a, b, -a, -b]);
    }
    for j in (2..=model.np()).rev() {
        f1.push(word::u(model.g, j));
    }
    let mut out = vec![f1];
    for j in 2..=model.np() {
        out.push(vec![-word::u(model.g, j)]);
    }
    out
}

fn petal_of(model: &Model, l: Letter) -> usize {
    model
        .free_letters()
        .iter()
        .position(|&x| x == l.abs())
        .expect("free letter")
}

/// Rotation at the single vertex, as a cyclic list of half-edges.
pub fn rose_rotation(model: &Model) -> Vec<Half> {
    let r = model.free_rank();
    let arr = |l: Letter| Half {
        petal: petal_of(model, l),
        start: l < 0,
    };
    let dep = |l: Letter| Half {
        petal: petal_of(model, l),
        start: l > 0,
    };
    let key = |h: Half| 2 * h.petal + usize::from(!h.start);
    let mut next = vec![usize::MAX; 2 * r];
    for f in face_words(model) {
        for k in 0..f.len() {
            let (x, y) = (f[k], f[(k + 1) % f.len()]);
            next[key(arr(x))] = key(dep(y));
        }
    }
    let mut out = Vec::with_capacity(2 * r);
    let mut cur = 0usize;
    for _ in 0..2 * r {
        out.push(Half {
            petal: cur / 2,
            start: cur % 2 == 0,
        });
        cur = next[cur];
    }
    debug_assert_eq!(cur, 0, "rotation is a single cycle");
    out
}

/// Pairing table `L[i][j]`: with outflows `f1`, `f2` on the rotation, the
/// local contribution at a vertex is `Σ_i f1[i] Σ_j L[i][j] f2[j]`.
pub fn local_table(rot: &[Half]) -> Vec<Vec<i64>> {
    let k = rot.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i64::from(j < i || (j == i && rot[i].start)))
                .collect()
        })
        .collect()
}

/// Sign making `⟨a_1, b_1⟩ = +1` with the table above.
pub const ORIENTATION: i64 = 1;

#[cfg(test)]
mod tests {
    use super::*;

    fn faces(model: &Model, rot: &[Half]) -> usize {
        // faces = cycles of (next in rotation) after (other end of the petal)
        let k = rot.len();
        let pos = |h: Half| rot.iter().position(|&x| x == h).unwrap();
        let mut seen = vec![false; k];
        let mut count = 0;
        for s in 0..k {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                let h = rot[c];
                let other = Half {
                    petal: h.petal,
                    start: !h.start,
                };
                c = (pos(other) + 1) % k;
            }
        }
        let _ = model;
        count
    }

    #[test]
    fn rotation_has_expected_faces() {
        for (g, n) in [(1, 1), (2, 0), (2, 2), (3, 1), (0, 4), (1, 3)] {
            let m = Model::new(g, n).unwrap();
            let rot = rose_rotation(&m);
            assert_eq!(rot.len(), 2 * m.free_rank());
            let mut sorted = rot.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), rot.len());
            assert_eq!(faces(&m, &rot), m.np(), "({g},{n})");
        }
    }
}
