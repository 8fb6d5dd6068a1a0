//! Exact integer linear algebra: Smith and Hermite normal forms over Z,
//! canonical subgroup forms over Z/m.
//!
//! Matrices are dense `Vec<Vec<T>>` in row-major order. Every routine is
//! generic over [`Int`]; callers start with `i128` and retry with `BigInt`
//! when an intermediate overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer type usable by the normal-form routines.
///
/// Arithmetic returns `None` on overflow so that the fixed-width instance can
/// bail out and let the caller fall back to arbitrary precision.
pub trait Int: Clone + Ord + std::fmt::Debug {
    fn izero() -> Self;
    fn ione() -> Self;
    fn from_i64(v: i64) -> Self;
    fn iszero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Floor division.
    fn div_floor(&self, o: &Self) -> Self;
    fn isneg(&self) -> bool;
    fn abs(&self) -> Option<Self> {
        if self.isneg() {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
    fn to_big(&self) -> BigInt;
}

impl Int for i128 {
    fn izero() -> Self {
        0
    }
    fn ione() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn iszero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn isneg(&self) -> bool {
        *self < 0
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for BigInt {
    fn izero() -> Self {
        Zero::zero()
    }
    fn ione() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn iszero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn isneg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

pub type Mat<T> = Vec<Vec<T>>;

/// Result of a Smith normal form computation: `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub u: Mat<T>,
    pub d: Mat<T>,
    pub v: Mat<T>,
}

impl<T: Int> Smith<T> {
    /// Diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<T> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn identity<T: Int>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::ione() } else { T::izero() }).collect())
        .collect()
}

fn ncols<T>(m: &Mat<T>, fallback: usize) -> usize {
    m.first().map_or(fallback, |r| r.len())
}

/// `row[dst] += k * row[src]`
fn row_axpy<T: Int>(m: &mut Mat<T>, dst: usize, src: usize, k: &T) -> Option<()> {
    if k.iszero() {
        return Some(());
    }
    for c in 0..m[dst].len() {
        let t = m[src][c].mul(k)?;
        m[dst][c] = m[dst][c].add(&t)?;
    }
    Some(())
}

fn col_axpy<T: Int>(m: &mut Mat<T>, dst: usize, src: usize, k: &T) -> Option<()> {
    if k.iszero() {
        return Some(());
    }
    for row in m.iter_mut() {
        let t = row[src].mul(k)?;
        row[dst] = row[dst].add(&t)?;
    }
    Some(())
}

fn row_neg<T: Int>(m: &mut Mat<T>, r: usize) -> Option<()> {
    for c in 0..m[r].len() {
        m[r][c] = m[r][c].neg()?;
    }
    Some(())
}

fn col_swap<T>(m: &mut Mat<T>, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Generic Smith normal form. Returns `None` on overflow of `T`.
pub fn snf_generic<T: Int>(m: &Mat<T>, ncol: usize) -> Option<Smith<T>> {
    let rows = m.len();
    let cols = ncols(m, ncol);
    let mut d = m.clone();
    let mut u: Mat<T> = identity(rows);
    let mut v: Mat<T> = identity(cols);
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize, T)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].iszero() {
                        let a = d[i][j].abs()?;
                        if best.as_ref().map_or(true, |b| a < b.2) {
                            best = Some((i, j, a));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Some(Smith { u, d, v });
            };
            d.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut d, t, pj);
            col_swap(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].iszero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]).neg()?;
                row_axpy(&mut d, i, t, &q)?;
                row_axpy(&mut u, i, t, &q)?;
                if !d[i][t].iszero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[t][j].iszero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]).neg()?;
                col_axpy(&mut d, j, t, &q)?;
                col_axpy(&mut v, j, t, &q)?;
                if !d[t][j].iszero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    let r = d[i][j].sub(&d[i][j].div_floor(&d[t][t]).mul(&d[t][t])?)?;
                    if !r.iszero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_axpy(&mut d, t, i, &T::ione())?;
                    row_axpy(&mut u, t, i, &T::ione())?;
                }
                None => break,
            }
        }
        if d[t][t].isneg() {
            row_neg(&mut d, t)?;
            row_neg(&mut u, t)?;
        }
    }
    Some(Smith { u, d, v })
}

fn to_i128(m: &Mat<i64>) -> Mat<i128> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn big_of(m: &Mat<i128>) -> Mat<BigInt> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Smith normal form of an integer matrix with arbitrary-precision output.
/// `ncol` gives the column count when `m` has no rows.
pub fn smith_normal_form(m: &Mat<i64>, ncol: usize) -> Smith<BigInt> {
    let small = to_i128(m);
    if let Some(s) = snf_generic(&small, ncol) {
        return Smith {
            u: big_of(&s.u),
            d: big_of(&s.d),
            v: big_of(&s.v),
        };
    }
    let big: Mat<BigInt> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    snf_generic(&big, ncol).expect("bigint arithmetic cannot overflow")
}

/// Diagonal invariants of the Smith form as `i128`, falling back to bigint
/// internally. Panics only if an invariant itself exceeds `i128`.
pub fn invariant_factors(m: &Mat<i64>, ncol: usize) -> Vec<i128> {
    let small = to_i128(m);
    if let Some(s) = snf_generic(&small, ncol) {
        return s.diagonal();
    }
    smith_normal_form(m, ncol)
        .diagonal()
        .iter()
        .map(|x| x.to_i128().expect("invariant factor exceeds i128"))
        .collect()
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows removed.
pub fn hnf_generic<T: Int>(m: &Mat<T>, ncol: usize) -> Option<Mat<T>> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = ncols(&a, ncol);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<(usize, T)> = None;
            for i in r..rows {
                if !a[i][c].iszero() {
                    let v = a[i][c].abs()?;
                    if best.as_ref().map_or(true, |b| v < b.1) {
                        best = Some((i, v));
                    }
                }
            }
            let Some((pi, _)) = best else { break };
            a.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].iszero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]).neg()?;
                row_axpy(&mut a, i, r, &q)?;
                if !a[i][c].iszero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows && !a[r][c].iszero() {
            if a[r][c].isneg() {
                row_neg(&mut a, r)?;
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]).neg()?;
                row_axpy(&mut a, i, r, &q)?;
            }
            r += 1;
        }
    }
    a.truncate(r);
    Some(a)
}

/// Hermite normal form with `i64` entries (bigint fallback internally).
pub fn hermite_normal_form(m: &Mat<i64>, ncol: usize) -> Mat<i64> {
    let small = to_i128(m);
    let out: Mat<BigInt> = match hnf_generic(&small, ncol) {
        Some(h) => big_of(&h),
        None => {
            let big: Mat<BigInt> = m
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            hnf_generic(&big, ncol).expect("bigint arithmetic cannot overflow")
        }
    };
    out.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("hermite entry exceeds i64"))
                .collect()
        })
        .collect()
}

pub fn is_prime(m: i64) -> bool {
    if m < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn reduce(x: i64, m: i64) -> i64 {
    if m == 0 {
        x
    } else {
        x.rem_euclid(m)
    }
}

/// Inverse of `x` modulo `m`, if it exists.
pub fn inv_mod(x: i64, m: i64) -> Option<i64> {
    let e = (x.rem_euclid(m)).extended_gcd(&m);
    if e.gcd == 1 {
        Some(e.x.rem_euclid(m))
    } else {
        None
    }
}

/// Units of Z/m (for m = 0: ±1).
pub fn units(m: i64) -> Vec<i64> {
    if m == 0 {
        return vec![1, -1];
    }
    (1..m.max(2)).filter(|&x| x.gcd(&m) == 1).collect()
}

fn rref_mod_p(rows: &[Vec<i64>], p: i64, ncol: usize) -> Mat<i64> {
    let mut a: Mat<i64> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect())
        .collect();
    let mut r = 0;
    for c in 0..ncol {
        let Some(pi) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pi);
        let inv = inv_mod(a[r][c], p).expect("field element invertible");
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..ncol {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(p);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

fn with_modulus_rows(rows: &[Vec<i64>], m: i64, ncol: usize) -> Mat<i64> {
    let mut a: Mat<i64> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(m)).collect())
        .collect();
    for i in 0..ncol {
        let mut e = vec![0; ncol];
        e[i] = m;
        a.push(e);
    }
    a
}

/// Canonical generator rows of the subgroup spanned by `rows` in
/// `(Z/m)^ncol` (Howell form) or `Z^ncol` for `m = 0` (Hermite form).
pub fn canonical_rows(rows: &[Vec<i64>], m: i64, ncol: usize) -> Mat<i64> {
    if m == 0 {
        return hermite_normal_form(&rows.to_vec(), ncol);
    }
    if is_prime(m) {
        return rref_mod_p(rows, m, ncol);
    }
    let h = hermite_normal_form(&with_modulus_rows(rows, m, ncol), ncol);
    h.into_iter()
        .filter(|r| {
            let lead = r.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            lead != m
        })
        .collect()
}

/// Smith invariants of the subgroup spanned by `rows`.
///
/// For `m > 0` these are the divisors `d_i < m` of the lattice
/// `span(rows) + m Z^ncol`; the subgroup is `⊕ Z/(m/d_i)`. For `m = 0` these are
/// the nonzero invariant factors of the row matrix.
pub fn subgroup_divisors(rows: &[Vec<i64>], m: i64, ncol: usize) -> Vec<i128> {
    if m == 0 {
        return invariant_factors(&rows.to_vec(), ncol)
            .into_iter()
            .filter(|d| *d != 0)
            .collect();
    }
    invariant_factors(&with_modulus_rows(rows, m, ncol), ncol)
        .into_iter()
        .filter(|&d| d != m as i128)
        .collect()
}

/// Order of the subgroup spanned by `rows` in `(Z/m)^ncol`, `m > 0`.
pub fn subgroup_order(rows: &[Vec<i64>], m: i64, ncol: usize) -> BigInt {
    let mut out = BigInt::one();
    for d in subgroup_divisors(rows, m, ncol) {
        out *= BigInt::from(m as i128 / d);
    }
    out
}

/// A basis of the subgroup when it is free over the coefficient ring.
pub fn free_basis(rows: &[Vec<i64>], m: i64, ncol: usize) -> Option<Mat<i64>> {
    if m == 0 {
        // a Hermite basis is always a basis over Z
        return Some(hermite_normal_form(&rows.to_vec(), ncol));
    }
    if is_prime(m) {
        return Some(rref_mod_p(rows, m, ncol));
    }
    let a = with_modulus_rows(rows, m, ncol);
    let s = smith_normal_form(&a, ncol);
    let diag = s.diagonal();
    if diag
        .iter()
        .any(|d| *d != BigInt::one() && *d != BigInt::from(m))
    {
        return None;
    }
    let vinv = inverse_unimodular(&s.v);
    let mut out = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_one() {
            out.push(
                vinv[i]
                    .iter()
                    .map(|x| (x % BigInt::from(m)).to_i64().unwrap().rem_euclid(m))
                    .collect(),
            );
        }
    }
    Some(out)
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(v: &Mat<BigInt>) -> Mat<BigInt> {
    let n = v.len();
    // Gauss-Jordan over Z works for unimodular input via Hermite form of [V | I]
    let aug: Mat<BigInt> = (0..n)
        .map(|i| {
            let mut r = v[i].clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let h = hnf_generic(&aug, 2 * n).expect("bigint");
    assert_eq!(h.len(), n, "matrix is not unimodular");
    for i in 0..n {
        assert!(h[i][i].is_one(), "matrix is not unimodular");
    }
    h.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn mat_mul<T: Int>(a: &Mat<T>, b: &Mat<T>, bcols: usize) -> Option<Mat<T>> {
    let mut out = vec![vec![T::izero(); bcols]; a.len()];
    for i in 0..a.len() {
        for k in 0..a[i].len() {
            if a[i][k].iszero() {
                continue;
            }
            for j in 0..bcols {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j])?)?;
            }
        }
    }
    Some(out)
}

/// Solve `x * A = b` over Z/m (or Z when m = 0) for a row vector `x`.
pub fn solve_left(a: &Mat<i64>, b: &[i64], m: i64) -> Option<Vec<i64>> {
    let n = b.len();
    let k = a.len();
    // x A = b  <=>  A^T x^T = b^T ; use Smith form of A (rows k, cols n)
    let mut mat = a.clone();
    let mut extra = 0;
    if m != 0 {
        // allow adding multiples of m e_j
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = m;
            mat.push(e);
            extra += 1;
        }
    }
    let s = smith_normal_form(&mat, n);
    // x' U^{-1} D V^{-1} = b  with x' = x U^{-1}... use: (x U^{-1}) D = b V
    let bb: Vec<BigInt> = (0..n)
        .map(|j| {
            let mut acc = BigInt::zero();
            for i in 0..n {
                acc += BigInt::from(b[i]) * &s.v[i][j];
            }
            acc
        })
        .collect();
    let rows = k + extra;
    let mut y = vec![BigInt::zero(); rows];
    for j in 0..n {
        let d = if j < rows { s.d[j][j].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !bb[j].iszero() {
                return None;
            }
        } else {
            if !(&bb[j] % &d).iszero() {
                return None;
            }
            y[j] = &bb[j] / &d;
        }
    }
    // x = y U restricted to the first k coordinates
    let mut x = vec![0i64; k];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for r in 0..rows {
            acc += &y[r] * &s.u[r][c];
        }
        *xc = if m == 0 {
            acc.to_i64()?
        } else {
            (acc % BigInt::from(m)).to_i64()?.rem_euclid(m)
        };
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &Mat<i64>, ncol: usize) -> Vec<BigInt> {
        let s = smith_normal_form(m, ncol);
        let mb: Mat<BigInt> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let um = mat_mul(&s.u, &mb, ncol).unwrap();
        let umv = mat_mul(&um, &s.v, ncol).unwrap();
        assert_eq!(umv, s.d);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].iszero() {
                assert!((&w[1] % &w[0]).iszero());
            }
        }
        diag
    }

    #[test]
    fn smith_examples() {
        let d = check_smith(&vec![vec![3, 0], vec![0, 5]], 2);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(15)]);
        let d = check_smith(&vec![vec![2, 4], vec![6, 8]], 2);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
        let d = check_smith(&vec![vec![1, 0], vec![0, 1]], 2);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(1)]);
        assert!(smith_normal_form(&vec![], 3).d.is_empty());
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![vec![2, 4, 0], vec![0, 3, 1]];
        let b = vec![vec![2, 7, 1], vec![0, -3, -1]];
        assert_eq!(hermite_normal_form(&a, 3), hermite_normal_form(&b, 3));
    }

    #[test]
    fn howell_mod_four() {
        // 2*(1,2) = (2,0): span{(1,2)} has order 4 and one canonical row
        let r = canonical_rows(&[vec![1, 2]], 4, 2);
        assert_eq!(r, vec![vec![1, 2]]);
        assert_eq!(subgroup_order(&[vec![1, 2]], 4, 2), BigInt::from(4));
        assert_eq!(subgroup_divisors(&[vec![2, 0]], 4, 2), vec![2]);
    }

    #[test]
    fn solve_left_mod() {
        let a = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(solve_left(&a, &[1, 0], 2), Some(vec![1, 1]));
        assert_eq!(solve_left(&vec![vec![2, 0]], &[1, 0], 4), None);
        assert_eq!(solve_left(&vec![vec![2, 0]], &[4, 0], 0), Some(vec![2]));
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 3;
        let m = vec![vec![big, big - 1, 7], vec![big - 5, big, 3], vec![11, big, big]];
        check_smith(&m, 3);
    }
}
