//! Brute-force reference implementations for tests. Nothing here depends on
//! `mmpm-core`: matrices are dense, polynomials are plain coefficient
//! vectors, and every answer is obtained by enumeration or direct
//! arithmetic rather than by a closed form.

use std::collections::HashSet;

/// An element of `Z[x]/(x^N+1)` as `N` integer coefficients.
pub type Poly = Vec<i64>;

/// `a·b` in `Z[x]/(x^N+1)` by the schoolbook rule.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Poly {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut out = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            let k = i + j;
            if k < n {
                out[k] += a[i] * b[j];
            } else {
                out[k - n] -= a[i] * b[j];
            }
        }
    }
    out
}

/// `a·b mod q` in `Z_q[x]/(x^N+1)` with 128-bit accumulation.
pub fn negacyclic_mul_mod(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    assert_eq!(n, b.len());
    let q = q as i128;
    let mut out = vec![0i128; n];
    for i in 0..n {
        for j in 0..n {
            let p = (a[i] as i128 * b[j] as i128) % q;
            let k = i + j;
            if k < n {
                out[k] = (out[k] + p) % q;
            } else {
                out[k - n] = (out[k - n] - p).rem_euclid(q);
            }
        }
    }
    out.into_iter().map(|c| c as u64).collect()
}

/// `x^k` in `Z[x]/(x^N+1)` for any integer `k`.
pub fn monomial(k: i64, n: usize) -> Poly {
    let k = k.rem_euclid(2 * n as i64) as usize;
    let mut p = vec![0; n];
    if k < n {
        p[k] = 1;
    } else {
        p[k - n] = -1;
    }
    p
}

/// Dense `r×r` matrix over `Z[x]/(x^N+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    pub degree: usize,
    pub entries: Vec<Vec<Poly>>,
}

impl DenseMatrix {
    pub fn zero(r: usize, degree: usize) -> Self {
        Self {
            degree,
            entries: vec![vec![vec![0; degree]; r]; r],
        }
    }

    pub fn identity(r: usize, degree: usize) -> Self {
        let mut m = Self::zero(r, degree);
        for i in 0..r {
            m.entries[i][i] = monomial(0, degree);
        }
        m
    }

    /// Entry `(φ(j), j)` is `x^{u_{φ(j)}}`, everything else zero.
    pub fn monomial_permutation(perm: &[usize], exps: &[i64], degree: usize) -> Self {
        let mut m = Self::zero(perm.len(), degree);
        for (j, &i) in perm.iter().enumerate() {
            m.entries[i][j] = monomial(exps[i], degree);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.dim();
        let mut out = Self::zero(r, self.degree);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let p = poly_mul(&self.entries[i][k], &other.entries[k][j]);
                    for (o, c) in out.entries[i][j].iter_mut().zip(p) {
                        *o += c;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        (0..self.dim())
            .map(|i| {
                let mut acc = vec![0; self.degree];
                for (j, vj) in v.iter().enumerate() {
                    for (a, c) in acc.iter_mut().zip(poly_mul(&self.entries[i][j], vj)) {
                        *a += c;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Smallest `d ≥ 1` with `A^d = I`, by repeated multiplication; `None` if
/// none is found up to `limit`.
pub fn order_by_iteration(a: &DenseMatrix, limit: u64) -> Option<u64> {
    let id = DenseMatrix::identity(a.dim(), a.degree);
    let mut p = a.clone();
    for d in 1..=limit {
        if p == id {
            return Some(d);
        }
        p = p.mul(a);
    }
    None
}

/// `x^k e_j` as a dense vector.
pub fn indicator(k: i64, j: usize, r: usize, degree: usize) -> Vec<Poly> {
    let mut v = vec![vec![0; degree]; r];
    v[j] = monomial(k, degree);
    v
}

/// Inverse of [`indicator`]; panics if `v` is not a monic monomial indicator.
pub fn read_indicator(v: &[Poly]) -> (u64, usize) {
    let mut found = None;
    for (j, p) in v.iter().enumerate() {
        for (c, &x) in p.iter().enumerate() {
            if x != 0 {
                assert!(found.is_none() && (x == 1 || x == -1), "not an indicator: {v:?}");
                let k = if x == 1 { c } else { c + p.len() };
                found = Some((k as u64, j));
            }
        }
    }
    found.expect("zero vector")
}

/// Orbits of `⟨A⟩` on the `2Nr` indicator vectors, each as a sorted list of
/// `(k, j)`, found by following `A` from every unvisited point.
pub fn enumerate_orbits(a: &DenseMatrix) -> Vec<Vec<(u64, usize)>> {
    let r = a.dim();
    let n = a.degree;
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for j in 0..r {
        for k in 0..2 * n as u64 {
            if seen.contains(&(k, j)) {
                continue;
            }
            let mut orbit = vec![(k, j)];
            seen.insert((k, j));
            let mut v = indicator(k as i64, j, r, n);
            loop {
                v = a.apply(&v);
                let p = read_indicator(&v);
                if !seen.insert(p) {
                    break;
                }
                orbit.push(p);
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
    }
    orbits
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for c in col + 1..cols {
                m[i][c] = (m[rank][col] * m[i][c] - m[i][col] * m[rank][c]) / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    rank
}

/// Flattens a vector of polynomials into `Nr` integer coordinates.
pub fn flatten(v: &[Poly]) -> Vec<i64> {
    v.iter().flatten().copied().collect()
}
