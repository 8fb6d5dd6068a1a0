use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::Decomposition;
use crate::arith::{self, Mat};
use crate::error::{Error, Result};
use crate::symplectic::{ensure_same_space, Vector};

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn classes(nv: usize, edges: &[[usize; 2]], contract: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    for &e in contract {
        let (a, b) = (find(&mut p, edges[e][0]), find(&mut p, edges[e][1]));
        if a != b {
            p[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..nv).map(|v| find(&mut p, v)).collect();
    let mut uniq: Vec<usize> = roots.clone();
    uniq.sort_unstable();
    uniq.dedup();
    roots.iter().map(|r| uniq.binary_search(r).expect("root")).collect()
}

/// Does the coarse group `big` arise from the class `z`: it contains every
/// `G_v`, `v ∈ z`, and each cycle of the contracted subgraph adds at most one
/// new class.
fn vertex_accepts(d: &Decomposition, z: &[usize], internal: &[usize], big: &Mat<i64>) -> bool {
    let space = d.space;
    let r = space.rank();
    let m = space.modulus;
    let mut all = big.clone();
    for &v in z {
        all.extend(d.vertex_groups[v].iter().cloned());
    }
    if space.canonical(&all) != *big {
        return false;
    }
    let gens: Vec<Vector> = z.iter().flat_map(|&v| d.vertex_groups[v].iter().cloned()).collect();
    let im = d.report(&gens);
    let b1 = internal.len() + 1 - z.len();
    if m > 0 {
        let big_ord = arith::subgroup_order(big, m, r);
        big_ord <= BigInt::from(im.order()) * BigInt::from(m).pow(b1 as u32)
    } else {
        d.report(big).rank <= im.rank + b1
    }
}

/// `small ≤ big` in the refinement order: `small` is `big` with some edges
/// contracted.
pub fn leq(small: &Decomposition, big: &Decomposition) -> Result<bool> {
    ensure_same_space(small.space, big.space)?;
    if small.n != big.n {
        return Err(Error::Argument("decompositions have different marked points".into()));
    }
    let big_edges: BTreeSet<&Mat<i64>> = big.edge_groups.iter().collect();
    if !small.edge_groups.iter().all(|g| big_edges.contains(g)) {
        return Ok(false);
    }
    let (ne, ne_s) = (big.edges.len(), small.edges.len());
    if ne_s > ne || small.vertices.len() > big.vertices.len() {
        return Ok(false);
    }
    let k = ne - ne_s;
    let mut target: Vec<([usize; 2], &Mat<i64>)> = Vec::new();
    for (e, &[a, b]) in small.edges.iter().enumerate() {
        target.push(([a.min(b), a.max(b)], &small.edge_groups[e]));
    }
    target.sort();
    for contract in combinations(ne, k) {
        let cls = classes(big.vertices.len(), &big.edges, &contract);
        let t = cls.iter().max().map_or(0, |x| x + 1);
        if t != small.vertices.len() {
            continue;
        }
        let members: Vec<Vec<usize>> = (0..t).map(|c| (0..cls.len()).filter(|&v| cls[v] == c).collect()).collect();
        let internal: Vec<Vec<usize>> = (0..t)
            .map(|c| contract.iter().copied().filter(|&e| cls[big.edges[e][0]] == c).collect())
            .collect();
        let kept: Vec<usize> = (0..ne).filter(|e| !contract.contains(e)).collect();
        // compatibility table: class c may become small vertex w
        let ok: Vec<Vec<bool>> = (0..t)
            .map(|c| {
                let mut marks: Vec<usize> = members[c]
                    .iter()
                    .flat_map(|&v| big.vertices[v].marks.iter().copied())
                    .collect();
                marks.sort_unstable();
                (0..t)
                    .map(|w| {
                        small.vertices[w].marks == marks
                            && vertex_accepts(big, &members[c], &internal[c], &small.vertex_groups[w])
                    })
                    .collect()
            })
            .collect();
        let mut perm: Vec<usize> = Vec::new();
        let mut used = vec![false; t];
        if assign(0, t, &ok, &mut perm, &mut used, &mut |perm| {
            let mut got: Vec<([usize; 2], &Mat<i64>)> = kept
                .iter()
                .map(|&e| {
                    let [a, b] = big.edges[e];
                    let (x, y) = (perm[cls[a]], perm[cls[b]]);
                    ([x.min(y), x.max(y)], &big.edge_groups[e])
                })
                .collect();
            got.sort();
            got == target
        }) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn assign(
    c: usize,
    t: usize,
    ok: &[Vec<bool>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if c == t {
        return accept(perm);
    }
    for w in 0..t {
        if !used[w] && ok[c][w] {
            used[w] = true;
            perm.push(w);
            if assign(c + 1, t, ok, perm, used, accept) {
                return true;
            }
            perm.pop();
            used[w] = false;
        }
    }
    false
}
