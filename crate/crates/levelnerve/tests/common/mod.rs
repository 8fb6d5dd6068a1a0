//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use levelnerve::arith::{hermite_normal_form, Mat};
use levelnerve::surface::graph::StableGraph;

/// Incidence of each edge in the fundamental cycles of a spanning forest,
/// over GF(2): `columns[e]` has bit `c` set iff edge `e` lies on cycle `c`.
pub fn cycle_columns(t: &StableGraph) -> Vec<Vec<bool>> {
    let nv = t.vertices.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut tree = vec![false; t.edges.len()];
    for (e, [u, v]) in t.edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, *u), find(&mut parent, *v));
        if a != b {
            parent[a] = b;
            tree[e] = true;
        }
    }
    let tree_edges: Vec<usize> = (0..t.edges.len()).filter(|&e| tree[e]).collect();
    let path = |from: usize, to: usize| -> Vec<usize> {
        // DFS over tree edges from `from` to `to`, returning edge indices.
        let mut stack = vec![(from, usize::MAX, Vec::new())];
        while let Some((x, came, p)) = stack.pop() {
            if x == to {
                return p;
            }
            for &e in &tree_edges {
                if e == came {
                    continue;
                }
                let [a, b] = t.edges[e];
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                let mut q = p.clone();
                q.push(e);
                stack.push((y, e, q));
            }
        }
        unreachable!("spanning tree is connected")
    };
    let mut cycles = Vec::new();
    for (e, [u, v]) in t.edges.iter().enumerate() {
        if tree[e] {
            continue;
        }
        let mut c = vec![false; t.edges.len()];
        c[e] = true;
        for f in path(*u, *v) {
            c[f] ^= true;
        }
        cycles.push(c);
    }
    (0..t.edges.len()).map(|e| cycles.iter().map(|c| c[e]).collect()).collect()
}

/// Generators of `m·N + P + S`: bridges are the edges on no cycle, cut pairs
/// the non-bridges with equal cycle columns.
pub fn kernel_oracle(t: &StableGraph, m: i64) -> Mat<i64> {
    let cols = cycle_columns(t);
    let ne = t.edges.len();
    let bridge: Vec<bool> = cols.iter().map(|c| c.iter().all(|b| !b)).collect();
    let mut gens = Vec::new();
    for e in 0..ne {
        let mut v = vec![0; ne];
        v[e] = if bridge[e] { 1 } else { m };
        gens.push(v);
    }
    for i in 0..ne {
        for j in i + 1..ne {
            if !bridge[i] && !bridge[j] && cols[i] == cols[j] {
                let mut v = vec![0; ne];
                v[i] = 1;
                v[j] = -1;
                gens.push(v);
            }
        }
    }
    if gens.is_empty() {
        vec![]
    } else {
        hermite_normal_form(&gens, ne)
    }
}

/// Catalog signatures `(g, n)`.
pub fn catalog() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for g in 1..=3 {
        for n in 0..=2 {
            if 2 * g + n > 2 {
                v.push((g, n));
            }
        }
    }
    v
}
