//! `H_1(S̄_K)` with its intersection form, deck action and mapping class action.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Cover;
use crate::arith::{hermite_normal_form, inverse_unimodular, invariant_factors, smith_normal_form, Mat};
use crate::error::{Error, Result};
use crate::surface::ribbon::{local_table, rose_rotation, ORIENTATION};
use crate::surface::twist::TwistAuto;
use crate::surface::word::Word;
use crate::symplectic::{SympMatrix, SympSpace, Vector};

/// Integral symplectic coordinates on `H_1(S̄_K, Z)`.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub genus: usize,
    /// Intersection form on `H_1(K)` in Schreier coordinates (degenerate).
    pub open_form: Mat<i64>,
    /// Peripheral classes in Schreier coordinates.
    pub peripheral: Vec<Vec<i64>>,
    /// Rows: lifts of the symplectic basis to Schreier coordinates.
    pub lift: Mat<i64>,
    /// `coords(v) = v · proj`.
    proj: Mat<i64>,
    /// Chain (edge coefficients, edge `x * r + petal`) of each Schreier generator.
    chains: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Resource {
        what: "integer size in cover homology".into(),
        limit: i64::MAX as usize,
        reached: usize::MAX,
    })
}

impl HomologyBasis {
    pub(super) fn new(c: &Cover) -> Result<HomologyBasis> {
        let d = c.degree();
        let r = c.free.len();
        let nk = c.gens.len();
        // chains of Schreier generators
        let mut chains = vec![vec![0i64; d * r]; nk];
        for (k, chain) in chains.iter_mut().enumerate() {
            let w = c.gen_word(k);
            let mut x = 0usize;
            for &l in &w.0 {
                let fi = c.petal(l);
                if l > 0 {
                    chain[x * r + fi] += 1;
                    x = c.right[fi][x];
                } else {
                    let y = c.right_inv[fi][x];
                    chain[y * r + fi] -= 1;
                    x = y;
                }
            }
        }
        let rot = rose_rotation(&c.model);
        let table = local_table(&rot);
        let k2 = rot.len();
        let mut q = vec![vec![0i64; nk]; nk];
        for x in 0..d {
            // outflows of every generator at x, in rotation order
            let flows: Vec<Vec<i64>> = chains
                .iter()
                .map(|ch| {
                    rot.iter()
                        .map(|h| {
                            if h.start {
                                ch[x * r + h.petal]
                            } else {
                                -ch[c.right_inv[h.petal][x] * r + h.petal]
                            }
                        })
                        .collect()
                })
                .collect();
            let active: Vec<usize> = (0..nk).filter(|&k| flows[k].iter().any(|&f| f != 0)).collect();
            let pref: Vec<Vec<i64>> = active
                .iter()
                .map(|&l| (0..k2).map(|i| dot(&table[i], &flows[l]) as i64).collect())
                .collect();
            for &k in &active {
                for (li, &l) in active.iter().enumerate() {
                    q[k][l] += ORIENTATION * dot(&flows[k], &pref[li]) as i64;
                }
            }
        }
        let peripheral: Vec<Vec<i64>> = c
            .peripheral_words()
            .iter()
            .map(|w| {
                let (end, v) = c.rewrite(0, w);
                debug_assert_eq!(end, 0);
                v
            })
            .collect();
        // basis of Z^nk: peripheral lattice first, then quotient lifts
        let pb = hermite_normal_form(&peripheral, nk);
        let kp = pb.len();
        let mut rows = pb.clone();
        let saturated = |m: &Mat<i64>| {
            let f = invariant_factors(m, nk);
            f.len() == m.len() && f.iter().all(|&x| x == 1)
        };
        for i in 0..nk {
            if rows.len() == nk {
                break;
            }
            let mut cand = rows.clone();
            let mut e = vec![0; nk];
            e[i] = 1;
            cand.push(e);
            if saturated(&cand) {
                rows = cand;
            }
        }
        if rows.len() < nk {
            let s = smith_normal_form(&rows, nk);
            let vinv = inverse_unimodular(&s.v);
            let have = rows.len();
            for row in vinv.iter().skip(have) {
                rows.push(row.iter().map(|x| x.to_i64().expect("small entries")).collect());
            }
        }
        let quot: Mat<i64> = rows[kp..].to_vec();
        let nq = quot.len();
        // Gram matrix on the quotient lifts
        let gram: Mat<i64> = (0..nq)
            .map(|a| {
                (0..nq)
                    .map(|b| {
                        let s: i128 = (0..nk)
                            .filter(|&i| quot[a][i] != 0)
                            .map(|i| quot[a][i] as i128 * dot(&q[i], &quot[b]))
                            .sum();
                        s as i64
                    })
                    .collect()
            })
            .collect();
        let s = symplectic_basis(&gram)?;
        let genus = nq / 2;
        let lift: Mat<i64> = s
            .iter()
            .map(|row| {
                (0..nk)
                    .map(|i| to_i64((0..nq).map(|a| row[a] as i128 * quot[a][i] as i128).sum()))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        let big = |m: &Mat<i64>| -> Mat<num_bigint::BigInt> {
            m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()
        };
        let binv = inverse_unimodular(&big(&rows));
        let sinv = inverse_unimodular(&big(&s));
        // proj = B^{-1}[:, kp..] · S^{-1}
        let proj: Mat<i64> = (0..nk)
            .map(|i| {
                (0..nq)
                    .map(|j| {
                        let v: num_bigint::BigInt =
                            (0..nq).map(|a| &binv[i][kp + a] * &sinv[a][j]).sum();
                        v.to_i64().ok_or_else(|| Error::Resource {
                            what: "integer size in cover homology".into(),
                            limit: i64::MAX as usize,
                            reached: usize::MAX,
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(HomologyBasis {
            genus,
            open_form: q,
            peripheral,
            lift,
            proj,
            chains,
        })
    }

    /// Integral symplectic coordinates of a Schreier vector.
    pub fn coords(&self, v: &[i64]) -> Vector {
        let n = self.lift.len();
        (0..n)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| x * self.proj[i][j])
                    .sum()
            })
            .collect()
    }

    /// Open intersection pairing of Schreier vectors.
    pub fn open_pair(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut s = 0i128;
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                s += x as i128 * dot(&self.open_form[i], w);
            }
        }
        s as i64
    }

    fn chain_of(&self, v: &[i64]) -> Vec<i64> {
        let len = self.chains.first().map_or(0, |c| c.len());
        let mut out = vec![0i64; len];
        for (k, &x) in v.iter().enumerate() {
            if x != 0 {
                for (o, &c) in out.iter_mut().zip(&self.chains[k]) {
                    *o += x * c;
                }
            }
        }
        out
    }
}

/// Symplectic basis over Z of a unimodular alternating form, as rows in the
/// given basis, ordered `x_1, y_1, x_2, y_2, …` with `⟨x_i, y_i⟩ = 1`.
pub fn symplectic_basis(gram: &Mat<i64>) -> Result<Mat<i64>> {
    let n = gram.len();
    let form = |x: &[i128], y: &[i128]| -> i128 {
        let mut s = 0;
        for i in 0..n {
            if x[i] != 0 {
                for j in 0..n {
                    s += x[i] * gram[i][j] as i128 * y[j];
                }
            }
        }
        s
    };
    let mut vs: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let degenerate = || Error::Oracle("intersection form is not unimodular".into());
    while !vs.is_empty() {
        let x = vs.remove(0);
        let vals: Vec<i128> = vs.iter().map(|z| form(&x, z)).collect();
        let (y, removed) = if let Some(j) = vals.iter().position(|&p| p == 1) {
            (vs[j].clone(), Some(j))
        } else if let Some(j) = vals.iter().position(|&p| p == -1) {
            (vs[j].iter().map(|a| -a).collect(), Some(j))
        } else {
            // extended gcd combination
            let mut y = vec![0i128; n];
            let mut gcur = 0i128;
            for (j, &p) in vals.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let (gg, s, t) = ext_gcd(gcur, p);
                for i in 0..n {
                    y[i] = s * y[i] + t * vs[j][i];
                }
                gcur = gg;
            }
            if gcur.abs() != 1 {
                return Err(degenerate());
            }
            if gcur == -1 {
                y.iter_mut().for_each(|a| *a = -*a);
            }
            (y, None)
        };
        if let Some(j) = removed {
            vs.remove(j);
        }
        let mut rest: Vec<Vec<i128>> = vs
            .iter()
            .map(|z| {
                let zy = form(z, &y);
                let zx = form(z, &x);
                (0..n).map(|i| z[i] - zy * x[i] + zx * y[i]).collect()
            })
            .collect();
        if removed.is_none() {
            let as64: Mat<i64> = rest
                .iter()
                .map(|r| r.iter().map(|&a| to_i64(a)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            rest = hermite_normal_form(&as64, n)
                .into_iter()
                .map(|r| r.into_iter().map(i128::from).collect())
                .collect();
        }
        out.push(x);
        out.push(y);
        vs = rest;
    }
    if out.len() != n {
        return Err(degenerate());
    }
    out.iter()
        .map(|r| r.iter().map(|&a| to_i64(a)).collect())
        .collect()
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
    (g, t, s - (a.div_euclid(b)) * t)
}

/// Deck action on `H_1(S̄_K, Z/m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckHomology {
    pub ambient: SympSpace,
    /// One matrix per group element, in group order.
    pub deck: Vec<SympMatrix>,
    pub faithful: bool,
    /// Non-identity elements acting trivially.
    pub kernel: Vec<usize>,
    pub schreier_rank: usize,
    pub peripheral_rank: usize,
}

impl Cover {
    /// `H_1(S̄_K, Z/m)` coordinates of a loop `w` based at sheet `x`.
    pub fn loop_class(&self, x: usize, w: &Word, m: i64) -> Result<Vector> {
        let hb = self.homology_basis()?;
        if self.end_coset(x, w) != x {
            return Err(Error::Argument("word does not lift to a closed loop".into()));
        }
        let t = &self.transversal[x];
        let (_, full) = self.rewrite(0, &t.mul(w).mul(&t.inv()));
        let c = hb.coords(&full);
        let space = SympSpace::new(hb.genus, m)?;
        Ok(space.reduce_vec(&c))
    }

    fn matrix_from_images(&self, m: i64, image: impl Fn(&[i64]) -> Vec<i64>) -> Result<SympMatrix> {
        let hb = self.homology_basis()?;
        let space = SympSpace::new(hb.genus, m)?;
        let n = space.rank();
        let cols: Vec<Vector> = hb.lift.iter().map(|l| hb.coords(&image(l))).collect();
        let entries = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
        SympMatrix::new(space, entries)
    }

    /// Deck transformation `x ↦ γ x` on `H_1(S̄_K, Z/m)`.
    pub fn deck_matrix(&self, gamma: usize, m: i64) -> Result<SympMatrix> {
        let hb = self.homology_basis()?;
        let r = self.free.len();
        let d = self.degree();
        let shift: Vec<usize> = (0..d).map(|x| self.group.mul_idx(gamma, x)).collect();
        self.matrix_from_images(m, |v| {
            let ch = hb.chain_of(v);
            let mut out = vec![0i64; self.gens.len()];
            for x in 0..d {
                for fi in 0..r {
                    if let Some(k) = self.gen_of[shift[x]][fi] {
                        out[k] += ch[x * r + fi];
                    }
                }
            }
            out
        })
    }

    /// Matrix of the automorphism `t` restricted to `K`.
    pub fn auto_matrix(&self, t: &TwistAuto, m: i64) -> Result<SympMatrix> {
        if !self.is_invariant(t) {
            return Err(Error::Invariance(format!("{} does not preserve K", t.name)));
        }
        let images: Vec<Vec<i64>> = (0..self.gens.len())
            .map(|k| self.rewrite(0, &t.apply(&self.gen_word(k))).1)
            .collect();
        self.matrix_from_images(m, |v| {
            let mut out = vec![0i64; self.gens.len()];
            for (k, &x) in v.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&images[k]) {
                        *o += x * y;
                    }
                }
            }
            out
        })
    }

    pub fn deck_homology(&self, m: i64) -> Result<DeckHomology> {
        let hb = self.homology_basis()?;
        let deck: Vec<SympMatrix> = (0..self.degree())
            .map(|g| self.deck_matrix(g, m))
            .collect::<Result<_>>()?;
        let id = SympMatrix::identity(deck[0].space);
        let kernel: Vec<usize> = (1..deck.len()).filter(|&g| deck[g] == id).collect();
        Ok(DeckHomology {
            ambient: deck[0].space,
            faithful: kernel.is_empty(),
            kernel,
            deck,
            schreier_rank: self.gens.len(),
            peripheral_rank: hb.peripheral.len().saturating_sub(1),
        })
    }

    /// Lexicographically least member of the deck coset of the automorphism's matrix.
    pub fn mcg_action(&self, t: &TwistAuto, m: i64) -> Result<SympMatrix> {
        let f = self.auto_matrix(t, m)?;
        let mut best: Option<SympMatrix> = None;
        for g in 0..self.degree() {
            let c = self.deck_matrix(g, m)?.mul(&f);
            if best.as_ref().is_none_or(|b| c.entries < b.entries) {
                best = Some(c);
            }
        }
        Ok(best.expect("nonempty group"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{CoverSpec, GroupSpec};
    use crate::limits::Limits;
    use crate::surface::twist::twist_automorphisms;

    fn cover(s: &CoverSpec) -> Cover {
        Cover::new(s, &Limits::default()).unwrap()
    }

    #[test]
    fn identity_cover_is_standard() {
        for (g, n) in [(1, 1), (2, 0), (2, 2), (3, 1)] {
            let c = cover(&CoverSpec::identity(g, n));
            let hb = c.homology_basis().unwrap();
            assert_eq!(hb.genus, g);
            for i in 0..2 * g {
                let mut e = vec![0; c.schreier_rank()];
                e[i] = 1;
                let mut want = vec![0; 2 * g];
                want[i] = 1;
                assert_eq!(hb.coords(&e), want, "({g},{n})");
            }
            let dh = c.deck_homology(3).unwrap();
            assert_eq!(dh.ambient.rank(), 2 * g);
            for t in twist_automorphisms(g, n).unwrap() {
                let want = t.homology_matrix(2).unwrap();
                assert_eq!(c.mcg_action(&t, 2).unwrap(), want, "{}", t.name);
            }
        }
    }

    #[test]
    fn open_form_is_alternating_with_peripheral_radical() {
        let c = cover(&CoverSpec::homology_cover(2, 0, 2));
        let hb = c.homology_basis().unwrap();
        let n = c.schreier_rank();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(hb.open_form[i][j], -hb.open_form[j][i]);
            }
        }
        for p in &hb.peripheral {
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 1;
                assert_eq!(hb.open_pair(p, &e), 0);
            }
        }
    }

    #[test]
    fn mod2_homology_cover() {
        let c = cover(&CoverSpec::homology_cover(2, 0, 2));
        let dh = c.deck_homology(2).unwrap();
        assert_eq!(dh.ambient.rank(), 34);
        assert!(dh.faithful);
        for a in 0..16 {
            assert!(dh.deck[a].is_symplectic());
            for b in 0..16 {
                let ab = c.group.mul_idx(a, b);
                assert_eq!(dh.deck[a].mul(&dh.deck[b]), dh.deck[ab]);
            }
        }
        let deck_set: std::collections::BTreeSet<_> = dh.deck.iter().cloned().collect();
        for t in twist_automorphisms(2, 0).unwrap() {
            let f = c.mcg_action(&t, 2).unwrap();
            assert!(f.is_symplectic());
            let finv = f.symplectic_inverse();
            for g in &dh.deck {
                assert!(deck_set.contains(&f.mul(g).mul(&finv)), "{}", t.name);
            }
            let back = c.mcg_action(&t.inverse(), 2).unwrap();
            assert!(deck_set.contains(&f.mul(&back)));
        }
    }

    #[test]
    fn small_covers() {
        let mut s = CoverSpec::homology_cover(1, 1, 2);
        s.group = GroupSpec::Abelian { orders: vec![2] };
        s.images = [("a1", vec![1]), ("b1", vec![0]), ("u1", vec![0])]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let c = cover(&s);
        assert_eq!(c.schreier_rank(), 3);
        let dh = c.deck_homology(0).unwrap();
        assert_eq!(dh.ambient.rank(), 2);
        let c = cover(&CoverSpec::identity(2, 0));
        let dh = c.deck_homology(3).unwrap();
        assert_eq!(dh.deck, vec![SympMatrix::identity(SympSpace::new(2, 3).unwrap())]);
    }

    #[test]
    fn gram_schmidt() {
        let g = vec![vec![0, 1, 1, 0], vec![-1, 0, 0, 2], vec![-1, 0, 0, 1], vec![0, -2, -1, 0]];
        let s = symplectic_basis(&g).unwrap();
        let n = 4;
        for a in 0..n {
            for b in 0..n {
                let v: i64 = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| s[a][i] * g[i][j] * s[b][j])
                    .sum();
                let want = if a / 2 == b / 2 && a != b {
                    if a < b { 1 } else { -1 }
                } else {
                    0
                };
                assert_eq!(v, want);
            }
        }
    }
}
