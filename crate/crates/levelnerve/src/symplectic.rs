//! Symplectic modules `H = (Z/m)^{2g}` (or `Z^{2g}` for m = 0) with the
//! standard alternating form, canonical subgroups, and the symplectic group.
//!
//! Coordinates are ordered `a_1, b_1, ..., a_g, b_g`. Matrices act on column
//! vectors: `F x`.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Mat};
use crate::error::{arg, Error, Result};
use crate::limits::Limits;

pub type Vector = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SympSpace {
    pub genus: usize,
    pub modulus: i64,
}

impl SympSpace {
    pub fn new(genus: usize, modulus: i64) -> Result<Self> {
        if genus == 0 {
            return arg("genus must be positive");
        }
        if modulus == 1 || modulus < 0 {
            return arg(format!("modulus {modulus} is not allowed (use 0 or m >= 2)"));
        }
        Ok(SympSpace { genus, modulus })
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn labels(&self) -> Vec<String> {
        (1..=self.genus)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect()
    }

    pub fn reduce(&self, x: i64) -> i64 {
        arith::reduce(x, self.modulus)
    }

    pub fn reduce_vec(&self, v: &[i64]) -> Vector {
        v.iter().map(|&x| self.reduce(x)).collect()
    }

    pub fn zero(&self) -> Vector {
        vec![0; self.rank()]
    }

    /// Basis vector `a_i` (1-based).
    pub fn a(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[2 * (i - 1)] = 1;
        v
    }

    /// Basis vector `b_i` (1-based).
    pub fn b(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[2 * (i - 1) + 1] = 1;
        v
    }

    /// Pairing matrix `J`.
    pub fn j_matrix(&self) -> Mat<i64> {
        let n = self.rank();
        let mut j = vec![vec![0; n]; n];
        for i in 0..self.genus {
            j[2 * i][2 * i + 1] = 1;
            j[2 * i + 1][2 * i] = self.reduce(-1);
        }
        j
    }

    fn check(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.rank() {
            return arg(format!(
                "vector of length {} in a module of rank {}",
                x.len(),
                self.rank()
            ));
        }
        Ok(())
    }

    pub fn pairing(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.pair(x, y))
    }

    /// Unchecked pairing.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s: i128 = 0;
        for i in 0..self.genus {
            s += x[2 * i] as i128 * y[2 * i + 1] as i128 - x[2 * i + 1] as i128 * y[2 * i] as i128;
        }
        if self.modulus == 0 {
            s as i64
        } else {
            s.rem_euclid(self.modulus as i128) as i64
        }
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vector {
        x.iter().zip(y).map(|(a, b)| self.reduce(a + b)).collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vector {
        x.iter().map(|a| self.reduce(k * a)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vector {
        self.scale(-1, x)
    }

    /// Sign-normalized representative of `±x`: the lexicographically smaller.
    pub fn sign_normalize(&self, x: &[i64]) -> Vector {
        let p = self.reduce_vec(x);
        let n = self.neg(&p);
        if n < p {
            n
        } else {
            p
        }
    }

    pub fn canonical(&self, gens: &[Vector]) -> Mat<i64> {
        let rows: Vec<Vector> = gens.iter().map(|g| self.reduce_vec(g)).collect();
        arith::canonical_rows(&rows, self.modulus, self.rank())
    }

    pub fn subgroup(&self, gens: &[Vector]) -> Result<SubgroupReport> {
        subgroup_report(gens, *self)
    }

    /// All vectors of the module; only for finite moduli.
    pub fn all_vectors(&self) -> Vec<Vector> {
        assert!(self.modulus > 0);
        let n = self.rank();
        let m = self.modulus;
        let total = (m as usize).pow(n as u32);
        (0..total)
            .map(|mut k| {
                let mut v = vec![0; n];
                for x in v.iter_mut().rev() {
                    *x = (k % m as usize) as i64;
                    k /= m as usize;
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupReport {
    pub ambient: SympSpace,
    pub generators: Mat<i64>,
    pub rank: usize,
    pub elementary_divisors: Vec<i64>,
    pub is_primitive: bool,
    pub is_isotropic: bool,
}

impl SubgroupReport {
    /// Order of the subgroup (finite moduli only).
    pub fn order(&self) -> u128 {
        let m = self.ambient.modulus as u128;
        self.elementary_divisors
            .iter()
            .map(|&d| m / d as u128)
            .product()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let mut rows = self.generators.clone();
        rows.push(x.to_vec());
        self.ambient.canonical(&rows) == self.generators
    }

    pub fn contains_all(&self, other: &SubgroupReport) -> bool {
        other.generators.iter().all(|r| self.contains(r))
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Canonical report of the subgroup generated by `gens`.
pub fn subgroup_report(gens: &[Vector], space: SympSpace) -> Result<SubgroupReport> {
    for g in gens {
        space.check(g)?;
    }
    let generators = space.canonical(gens);
    let n = space.rank();
    let divs: Vec<i64> = arith::subgroup_divisors(&generators, space.modulus, n)
        .into_iter()
        .map(|d| i64::try_from(d).expect("divisor fits i64"))
        .collect();
    let is_primitive = divs.iter().all(|&d| d == 1);
    let is_isotropic = generators
        .iter()
        .all(|x| generators.iter().all(|y| space.pair(x, y) == 0));
    Ok(SubgroupReport {
        ambient: space,
        rank: divs.len(),
        elementary_divisors: divs,
        generators,
        is_primitive,
        is_isotropic,
    })
}

/// Square matrix over the coefficient ring acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SympMatrix {
    pub space: SympSpace,
    pub entries: Mat<i64>,
}

impl SympMatrix {
    pub fn new(space: SympSpace, entries: Mat<i64>) -> Result<Self> {
        let n = space.rank();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return arg(format!("matrix must be {n}x{n}"));
        }
        let entries = entries.iter().map(|r| space.reduce_vec(r)).collect();
        Ok(SympMatrix { space, entries })
    }

    pub fn identity(space: SympSpace) -> Self {
        SympMatrix {
            space,
            entries: arith::identity::<i128>(space.rank())
                .iter()
                .map(|r| r.iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }

    /// Transvection `x -> x + <x, v> v`.
    pub fn transvection(space: SympSpace, v: &[i64]) -> Self {
        let n = space.rank();
        let mut e = vec![vec![0; n]; n];
        for (c, col) in (0..n).map(|c| {
            let mut x = space.zero();
            x[c] = 1;
            (c, x)
        }) {
            let k = space.pair(&col, v);
            for r in 0..n {
                e[r][c] = space.reduce(col[r] + k * v[r]);
            }
        }
        SympMatrix { space, entries: e }
    }

    /// Transvection `x -> x + k <v, x> v` (the homology action of `k`
    /// left Dehn twists along a curve of class `v`).
    pub fn twist(space: SympSpace, v: &[i64], k: i64) -> Self {
        let n = space.rank();
        let mut e = vec![vec![0; n]; n];
        for c in 0..n {
            let mut x = space.zero();
            x[c] = 1;
            let p = space.pair(v, &x);
            for r in 0..n {
                e[r][c] = space.reduce(x[r] + k * p * v[r]);
            }
        }
        SympMatrix { space, entries: e }
    }

    pub fn apply(&self, x: &[i64]) -> Vector {
        let n = self.space.rank();
        (0..n)
            .map(|r| {
                let s: i128 = (0..n).map(|c| self.entries[r][c] as i128 * x[c] as i128).sum();
                if self.space.modulus == 0 {
                    s as i64
                } else {
                    s.rem_euclid(self.space.modulus as i128) as i64
                }
            })
            .collect()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SympMatrix) -> SympMatrix {
        let n = self.space.rank();
        let mut e = vec![vec![0; n]; n];
        for r in 0..n {
            for c in 0..n {
                let s: i128 = (0..n)
                    .map(|k| self.entries[r][k] as i128 * other.entries[k][c] as i128)
                    .sum();
                e[r][c] = if self.space.modulus == 0 {
                    s as i64
                } else {
                    s.rem_euclid(self.space.modulus as i128) as i64
                };
            }
        }
        SympMatrix {
            space: self.space,
            entries: e,
        }
    }

    pub fn transpose(&self) -> SympMatrix {
        let n = self.space.rank();
        SympMatrix {
            space: self.space,
            entries: (0..n)
                .map(|r| (0..n).map(|c| self.entries[c][r]).collect())
                .collect(),
        }
    }

    pub fn is_symplectic(&self) -> bool {
        let j = SympMatrix {
            space: self.space,
            entries: self.space.j_matrix(),
        };
        self.transpose().mul(&j).mul(self) == j
    }

    /// `F ≡ I` entrywise modulo `level`.
    pub fn is_congruent(&self, level: i64) -> bool {
        let n = self.space.rank();
        (0..n).all(|r| {
            (0..n).all(|c| {
                let want = if r == c { 1 } else { 0 };
                (self.entries[r][c] - want).rem_euclid(level.max(1)) == 0
                    && (level != 0 || self.entries[r][c] == want)
            })
        })
    }

    /// Inverse of a symplectic matrix: `-J F^T J`.
    pub fn symplectic_inverse(&self) -> SympMatrix {
        let j = SympMatrix {
            space: self.space,
            entries: self.space.j_matrix(),
        };
        let p = j.mul(&self.transpose()).mul(&j);
        SympMatrix {
            space: self.space,
            entries: p.entries.iter().map(|r| self.space.neg(r)).collect(),
        }
    }

    pub fn columns(&self) -> Vec<Vector> {
        self.transpose().entries
    }
}

/// Generating transvections of `Sp_{2g}` with membership predicates.
#[derive(Clone, Debug)]
pub struct SpGroup {
    pub space: SympSpace,
    pub generators: Vec<SympMatrix>,
}

impl SpGroup {
    pub fn is_member(&self, f: &SympMatrix) -> bool {
        f.space == self.space && f.is_symplectic()
    }

    pub fn is_congruent(&self, f: &SympMatrix, level: i64) -> bool {
        f.is_congruent(level)
    }

    /// Breadth-first closure of the generators (finite moduli only).
    pub fn closure_size(&self, limits: &Limits) -> Result<usize> {
        let seed = SympMatrix::identity(self.space);
        let orbit = orbit_enumerate(
            seed,
            &self.generators,
            |g, x| g.mul(x),
            |x| x.entries.clone(),
            limits,
        )?;
        Ok(orbit.elements.len())
    }
}

/// Transvection generators of `Sp_{2g}` for vectors `a_i`, `b_i`, `a_i + a_{i+1}`.
pub fn sp_group(space: SympSpace) -> Result<SpGroup> {
    if space.modulus == 1 {
        return arg("m = 1 is not a valid modulus");
    }
    let mut generators = Vec::new();
    for i in 1..=space.genus {
        generators.push(SympMatrix::transvection(space, &space.a(i)));
        generators.push(SympMatrix::transvection(space, &space.b(i)));
        if i < space.genus {
            let v = space.add(&space.a(i), &space.a(i + 1));
            generators.push(SympMatrix::transvection(space, &v));
        }
    }
    Ok(SpGroup { space, generators })
}

/// A stabilizer generator `t_to^{-1} · s_gen · t_from`, expressed through
/// transversal indices (the orbit elements are `t_i · seed`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGen {
    pub from: usize,
    pub gen: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct Orbit<T> {
    /// Orbit elements sorted by canonical key.
    pub elements: Vec<T>,
    /// Transversal: generator indices applied left to right to the seed.
    pub words: Vec<Vec<usize>>,
    /// Non-tree edges of the Schreier graph.
    pub schreier: Vec<SchreierGen>,
}

/// Orbit of `seed` under the group generated by `gens` acting via `act`.
///
/// Output is sorted by `key` and does not depend on the worker count.
pub fn orbit_enumerate<T, A, K>(
    seed: T,
    gens: &[A],
    act: impl Fn(&A, &T) -> T + Sync,
    key: impl Fn(&T) -> K + Sync,
    limits: &Limits,
) -> Result<Orbit<T>>
where
    T: Clone + Send + Sync,
    A: Sync,
    K: Ord + Hash + Clone + Send + Sync,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut elems: Vec<T> = vec![seed.clone()];
    let mut keys: Vec<K> = vec![key(&seed)];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    index.insert(keys[0].clone(), 0);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut tree: Vec<bool> = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let images: Vec<Vec<(T, K)>> = limits.install(|| {
            frontier
                .par_iter()
                .map(|&i| {
                    gens.iter()
                        .map(|g| {
                            let y = act(g, &elems[i]);
                            let k = key(&y);
                            (y, k)
                        })
                        .collect()
                })
                .collect()
        });
        let mut next = Vec::new();
        for (fi, row) in frontier.iter().zip(images) {
            for (gi, (y, k)) in row.into_iter().enumerate() {
                match index.get(&k) {
                    Some(&j) => {
                        edges.push((*fi, gi, j));
                        tree.push(false);
                    }
                    None => {
                        let j = elems.len();
                        limits.check_orbit("orbit", j + 1)?;
                        index.insert(k.clone(), j);
                        let mut w = words[*fi].clone();
                        w.push(gi);
                        words.push(w);
                        elems.push(y);
                        keys.push(k);
                        edges.push((*fi, gi, j));
                        tree.push(true);
                        next.push(j);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut pos = vec![0; elems.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let schreier = edges
        .iter()
        .zip(&tree)
        .filter(|(_, t)| !**t)
        .map(|(&(f, g, t), _)| SchreierGen {
            from: pos[f],
            gen: g,
            to: pos[t],
        })
        .collect();
    Ok(Orbit {
        elements: order.iter().map(|&i| elems[i].clone()).collect(),
        words: order.iter().map(|&i| words[i].clone()).collect(),
        schreier,
    })
}

/// Evaluate a transversal word (generators applied left to right) as a matrix.
pub fn word_matrix(space: SympSpace, gens: &[SympMatrix], word: &[usize]) -> SympMatrix {
    word.iter()
        .fold(SympMatrix::identity(space), |acc, &g| gens[g].mul(&acc))
}

/// Stabilizer elements `t_to^{-1} s t_from` as matrices.
pub fn stabilizer_matrices(
    space: SympSpace,
    gens: &[SympMatrix],
    orbit: &Orbit<impl Clone>,
) -> Vec<SympMatrix> {
    orbit
        .schreier
        .iter()
        .map(|s| {
            let tf = word_matrix(space, gens, &orbit.words[s.from]);
            let tt = word_matrix(space, gens, &orbit.words[s.to]);
            tt.symplectic_inverse().mul(&gens[s.gen]).mul(&tf)
        })
        .collect()
}

/// Check that two generator lists span the same subgroup.
pub fn same_subgroup(space: SympSpace, x: &[Vector], y: &[Vector]) -> bool {
    space.canonical(x) == space.canonical(y)
}

/// Subgroup image under a matrix.
pub fn image_rows(f: &SympMatrix, rows: &[Vector]) -> Vec<Vector> {
    rows.iter().map(|r| f.apply(r)).collect()
}

pub(crate) fn ensure_same_space(a: SympSpace, b: SympSpace) -> Result<()> {
    if a != b {
        return Err(Error::Argument(format!(
            "mixed ambient spaces: (g={}, m={}) vs (g={}, m={})",
            a.genus, a.modulus, b.genus, b.modulus
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn sp(g: usize, m: i64) -> SympSpace {
        SympSpace::new(g, m).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let s = sp(2, 0);
        assert_eq!(s.pairing(&s.a(1), &s.b(1)).unwrap(), 1);
        assert_eq!(s.pairing(&s.a(1), &s.a(1)).unwrap(), 0);
        assert_eq!(s.pairing(&s.a(1), &s.b(2)).unwrap(), 0);
        assert!(s.pairing(&[1, 0], &s.b(1)).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let z = sp(2, 0);
        let r = z.subgroup(&[z.a(1)]).unwrap();
        assert_eq!((r.rank, r.is_primitive, r.is_isotropic), (1, true, true));
        let r = z.subgroup(&[z.scale(2, &z.a(1))]).unwrap();
        assert_eq!((r.rank, r.is_primitive), (1, false));
        let f = sp(2, 4);
        let r = f.subgroup(&[f.scale(2, &f.a(1))]).unwrap();
        assert!(!r.is_primitive);
        let e = f.subgroup(&[]).unwrap();
        assert!(e.is_primitive && e.is_isotropic && e.rank == 0);
    }

    #[test]
    fn sp_group_examples() {
        let s = sp(2, 2);
        let g = sp_group(s).unwrap();
        let id = SympMatrix::identity(s);
        assert!(g.is_member(&id) && id.is_congruent(2) && id.is_congruent(5));
        let t = SympMatrix::transvection(s, &s.a(1));
        assert!(g.is_member(&t));
        assert!(!t.is_congruent(2));
        assert_eq!(t.apply(&s.b(1)), s.add(&s.b(1), &s.a(1)));
        assert_eq!(g.closure_size(&Limits::default()).unwrap(), 720);
        assert!(sp_group(SympSpace { genus: 2, modulus: 1 }).is_err());
        assert!(SympSpace::new(2, 1).is_err());
    }

    #[test]
    fn sp4_mod2_brute_force_count() {
        let s = sp(2, 2);
        let vs = s.all_vectors();
        let mut count = 0;
        // columns are images of a1,b1,a2,b2
        for c0 in &vs {
            for c1 in &vs {
                if s.pair(c0, c1) != 1 {
                    continue;
                }
                for c2 in &vs {
                    if s.pair(c0, c2) != 0 || s.pair(c1, c2) != 0 {
                        continue;
                    }
                    for c3 in &vs {
                        if s.pair(c2, c3) == 1 && s.pair(c0, c3) == 0 && s.pair(c1, c3) == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 720);
    }

    #[test]
    fn orbit_examples() {
        let s = sp(2, 2);
        let g = sp_group(s).unwrap();
        let lim = Limits::default();
        let o = orbit_enumerate(s.a(1), &g.generators, |f, x| f.apply(x), |x| x.clone(), &lim)
            .unwrap();
        let nonzero: BTreeSet<Vector> = s.all_vectors().into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
        assert_eq!(o.elements.iter().cloned().collect::<BTreeSet<_>>(), nonzero);
        let trivial = orbit_enumerate(
            s.a(1),
            &[SympMatrix::identity(s)],
            |f, x| f.apply(x),
            |x| x.clone(),
            &lim,
        )
        .unwrap();
        assert_eq!(trivial.elements, vec![s.a(1)]);
        let plane = s.canonical(&[s.a(1), s.b(1)]);
        let o = orbit_enumerate(
            plane,
            &g.generators,
            |f, x| s.canonical(&image_rows(f, x)),
            |x| x.clone(),
            &lim,
        )
        .unwrap();
        assert_eq!(o.elements.len(), 20);
    }

    #[test]
    fn orbit_stabilizer_counts() {
        let s = sp(2, 2);
        let g = sp_group(s).unwrap();
        let lim = Limits::default();
        let o = orbit_enumerate(s.a(1), &g.generators, |f, x| f.apply(x), |x| x.clone(), &lim)
            .unwrap();
        let stab = stabilizer_matrices(s, &g.generators, &o);
        for m in &stab {
            assert_eq!(m.apply(&s.a(1)), s.a(1));
        }
        let closure = orbit_enumerate(
            SympMatrix::identity(s),
            &stab,
            |f, x| f.mul(x),
            |x| x.entries.clone(),
            &lim,
        )
        .unwrap();
        assert_eq!(o.elements.len() * closure.elements.len(), 720);
    }

    #[test]
    fn orbit_bound_is_enforced() {
        let s = sp(2, 2);
        let g = sp_group(s).unwrap();
        let lim = Limits {
            max_orbit: 5,
            ..Limits::default()
        };
        let e = orbit_enumerate(s.a(1), &g.generators, |f, x| f.apply(x), |x| x.clone(), &lim);
        assert!(matches!(e, Err(Error::Resource { reached: 6, .. })));
    }

    #[test]
    fn primitivity_matches_summand_search() {
        // brute force over (Z/m)^2 for m in 2..=4 using subgroups generated by pairs
        for m in [2i64, 3, 4] {
            let s = sp(1, m);
            let vs = s.all_vectors();
            let mut seen = BTreeSet::new();
            for x in &vs {
                for y in &vs {
                    let h = s.subgroup(&[x.clone(), y.clone()]).unwrap();
                    if !seen.insert(h.generators.clone()) {
                        continue;
                    }
                    let ho = h.order();
                    let summand = vs.iter().any(|c| {
                        let c_grp = s.subgroup(&[c.clone()]).unwrap();
                        let sum = s.subgroup(&[x.clone(), y.clone(), c.clone()]).unwrap();
                        sum.order() == (m * m) as u128 && c_grp.order() * ho == (m * m) as u128
                    }) || ho == (m * m) as u128
                        || ho == 1;
                    assert_eq!(summand, h.is_primitive, "m={m} {:?}", h.generators);
                }
            }
        }
    }
}
