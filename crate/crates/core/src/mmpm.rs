//! Monic monomial permutation matrices over `Z[x]/(x^N+1)`.
//!
//! An [`Mmpm`] is stored sparsely as a permutation `φ` of `[r]` and an
//! exponent vector `u ∈ Z_{2N}^r`; it stands for the matrix whose entry
//! `(i, j)` is `x^{u_i}` when `i = φ(j)` and zero otherwise. It acts on a
//! vector of ring elements by `(Av)_i = x^{u_i}·v_{φ⁻¹(i)}`, and on the monic
//! monomial indicator vectors by `x^k e_j ↦ x^{k + u_{φ(j)}} e_{φ(j)}`.
//!
//! `Φ(c)` is the canonical embedding of `Z_{2Nr}`, generated by
//! `Φ(1) = [0, x; I_{r-1}, 0]`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{gcd, lcm};
use crate::error::{domain, mismatch, Error, Result};
use crate::ring::{Ring, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mmpm {
    perm: Vec<usize>,
    exps: Vec<u64>,
    degree: usize,
}

impl Mmpm {
    /// Builds `A = (x^{u_i} δ_{i,φ(j)})`; exponents are reduced mod `2N`.
    pub fn new(perm: Vec<usize>, exps: Vec<i64>, degree: usize) -> Result<Self> {
        let r = perm.len();
        if r == 0 {
            return Err(domain!("matrix dimension must be positive"));
        }
        if exps.len() != r {
            return Err(mismatch!("{} exponents for a {r}-dimensional permutation", exps.len()));
        }
        if degree == 0 || !degree.is_power_of_two() {
            return Err(domain!("ring degree {degree} is not a power of two"));
        }
        let mut seen = vec![false; r];
        for &p in &perm {
            if p >= r || std::mem::replace(&mut seen[p], true) {
                return Err(domain!("{perm:?} is not a permutation of [{r}]"));
            }
        }
        let two_n = 2 * degree as i64;
        Ok(Self {
            perm,
            exps: exps.into_iter().map(|u| u.rem_euclid(two_n) as u64).collect(),
            degree,
        })
    }

    pub fn identity(r: usize, degree: usize) -> Self {
        Self::new((0..r).collect(), vec![0; r], degree).expect("valid identity")
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    fn two_n(&self) -> u64 {
        2 * self.degree as u64
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.exps.iter().all(|&u| u == 0)
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.dim()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        inv
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.degree != other.degree {
            return Err(mismatch!(
                "MMPM of shape (r={}, N={}) vs (r={}, N={})",
                self.dim(),
                self.degree,
                other.dim(),
                other.degree
            ));
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let inv = self.inverse_perm();
        let two_n = self.two_n();
        Ok(Self {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
            exps: (0..self.dim())
                .map(|i| (self.exps[i] + other.exps[inv[i]]) % two_n)
                .collect(),
            degree: self.degree,
        })
    }

    pub fn inverse(&self) -> Self {
        // (A⁻¹)_{φ(j), ·}: A⁻¹ maps e_{φ(j)} back to x^{-u_{φ(j)}} e_j.
        let inv = self.inverse_perm();
        let two_n = self.two_n();
        let exps = (0..self.dim())
            .map(|j| (two_n - self.exps[self.perm[j]]) % two_n)
            .collect();
        Self {
            perm: inv,
            exps,
            degree: self.degree,
        }
    }

    /// `A^l` from the cycle structure: `A^l e_j` lands `l` steps ahead of `j`
    /// on its cycle, with exponent `⌊l/r_k⌋·S_k` (`S_k` the cycle's exponent
    /// sum) plus the `l mod r_k` exponents passed on the way.
    pub fn pow(&self, l: i64) -> Self {
        if l < 0 {
            return self.inverse().pow(-l);
        }
        let l = l as u64;
        let two_n = self.two_n();
        let r = self.dim();
        let mut perm = vec![0; r];
        let mut exps = vec![0; r];
        for cycle in self.cycles() {
            let len = cycle.len() as u64;
            let total: u64 = cycle.iter().map(|&i| self.exps[i]).sum::<u64>() % two_n;
            let full = (l / len) % two_n * total % two_n;
            let rem = (l % len) as usize;
            let len = cycle.len();
            for (pos, &j) in cycle.iter().enumerate() {
                // A^l e_j lands on the element `l` steps ahead in the cycle.
                let target = cycle[(pos + rem) % len];
                perm[j] = target;
                let partial: u64 = (1..=rem).map(|s| self.exps[cycle[(pos + s) % len]]).sum();
                exps[target] = (full + partial) % two_n;
            }
        }
        Self {
            perm,
            exps,
            degree: self.degree,
        }
    }

    /// `A^l` by repeated squaring.
    pub fn pow_by_squaring(&self, mut l: u64) -> Self {
        let mut acc = Self::identity(self.dim(), self.degree);
        let mut base = self.clone();
        while l > 0 {
            if l & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            l >>= 1;
        }
        acc
    }

    /// Cycles of `φ`, each starting at its smallest index and listed in
    /// increasing order of that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.dim()];
        let mut out = Vec::new();
        for start in 0..self.dim() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.perm[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn normal_form(&self) -> NormalForm {
        let mut blocks = Vec::new();
        let mut similarity = Vec::with_capacity(self.dim());
        for cycle in self.cycles() {
            blocks.push(Block {
                exps: cycle.iter().map(|&j| self.exps[j]).collect(),
            });
            similarity.extend(cycle);
        }
        NormalForm {
            blocks,
            similarity,
            degree: self.degree,
        }
    }

    /// Smallest `d ≥ 1` with `A^d = I`.
    pub fn order(&self) -> u64 {
        self.normal_form()
            .blocks
            .iter()
            .map(|b| b.order(self.degree))
            .fold(1, lcm)
    }

    /// Number of orbits of `⟨A⟩` on the `2Nr` monic monomial indicator vectors.
    pub fn orbit_count(&self) -> u64 {
        let two_n = self.two_n();
        self.normal_form()
            .blocks
            .iter()
            .map(|b| two_n * b.size() as u64 / b.order(self.degree))
            .sum()
    }

    pub fn is_transitive(&self) -> bool {
        let nf = self.normal_form();
        nf.blocks.len() == 1 && nf.blocks[0].exponent_order(self.degree) == self.two_n()
    }

    /// `(A v)_i = x^{u_i} v_{φ⁻¹(i)}`, by monomial rotations only.
    pub fn apply(&self, v: &[RingElement]) -> Result<Vec<RingElement>> {
        if v.len() != self.dim() {
            return Err(mismatch!("{}-vector for a {}-dimensional matrix", v.len(), self.dim()));
        }
        if let Some(e) = v.iter().find(|e| e.degree() != self.degree) {
            return Err(mismatch!("ring degree {} vs matrix degree {}", e.degree(), self.degree));
        }
        let inv = self.inverse_perm();
        Ok((0..self.dim())
            .map(|i| v[inv[i]].mul_by_monomial(self.exps[i] as i64))
            .collect())
    }

    /// Image of the indicator vector `x^k e_j` as `(k', j')`.
    pub fn act_on_indicator(&self, k: u64, j: usize) -> (u64, usize) {
        let to = self.perm[j];
        ((k + self.exps[to]) % self.two_n(), to)
    }
}

/// `apply_mmpm_to_ring_vector(A, v)`.
pub fn apply_mmpm_to_ring_vector(a: &Mmpm, v: &[RingElement]) -> Result<Vec<RingElement>> {
    a.apply(v)
}

impl fmt::Display for Mmpm {
    /// The text format accepted by [`FromStr`]: `r N; p0 … p(r-1); u0 … u(r-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<String>| xs.join(" ");
        write!(
            f,
            "{} {}; {}; {}",
            self.dim(),
            self.degree,
            join(self.perm.iter().map(|p| p.to_string()).collect()),
            join(self.exps.iter().map(|u| u.to_string()).collect())
        )
    }
}

impl FromStr for Mmpm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(';').map(str::trim).collect();
        let [head, perm, exps] = parts[..] else {
            return Err(Error::Format(format!(
                "expected `r N; p0 … p(r-1); u0 … u(r-1)`, got {s:?}"
            )));
        };
        let nums = |field: &str, what: &str| -> Result<Vec<i64>> {
            field
                .split_whitespace()
                .map(|w| w.parse::<i64>().map_err(|_| Error::Format(format!("bad {what} entry {w:?}"))))
                .collect()
        };
        let head = nums(head, "header")?;
        let [r, n] = head[..] else {
            return Err(Error::Format(format!("header must be `r N`, got {head:?}")));
        };
        if r <= 0 || n <= 0 {
            return Err(Error::Format("r and N must be positive".into()));
        }
        let perm = nums(perm, "permutation")?;
        let exps = nums(exps, "exponent")?;
        if perm.len() != r as usize || exps.len() != r as usize {
            return Err(Error::Format(format!(
                "expected {r} permutation and exponent entries, got {} and {}",
                perm.len(),
                exps.len()
            )));
        }
        if perm.iter().any(|&p| p < 0) {
            return Err(Error::Format("negative permutation entry".into()));
        }
        Mmpm::new(perm.into_iter().map(|p| p as usize).collect(), exps, n as usize)
            .map_err(|e| Error::Format(e.to_string()))
    }
}

/// `Φ(c)` for `c ∈ Z_{2Nr}`: writing `c = a·r + b` with `0 ≤ b < r`,
/// `φ(j) = j + b mod r` and `u_i = a + [i < b]`.
pub fn phi(c: i64, r: usize, degree: usize) -> Mmpm {
    let period = (2 * degree * r) as i64;
    let c = c.rem_euclid(period) as usize;
    let (a, b) = (c / r, c % r);
    Mmpm::new(
        (0..r).map(|j| (j + b) % r).collect(),
        (0..r).map(|i| (a + usize::from(i < b)) as i64).collect(),
        degree,
    )
    .expect("Φ(c) is a valid MMPM")
}

/// One diagonal block of a normal form: the cyclic shift `e_t ↦ e_{t+1}`
/// scaled so that row `t` carries `x^{u_t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub exps: Vec<u64>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent_sum(&self, degree: usize) -> u64 {
        self.exps.iter().sum::<u64>() % (2 * degree as u64)
    }

    /// Order of `x^{Σu}` in the monomial group: `2N / gcd(2N, Σu)`.
    pub fn exponent_order(&self, degree: usize) -> u64 {
        let two_n = 2 * degree as u64;
        two_n / gcd(two_n, self.exponent_sum(degree))
    }

    pub fn order(&self, degree: usize) -> u64 {
        self.size() as u64 * self.exponent_order(degree)
    }

    pub fn to_mmpm(&self, degree: usize) -> Mmpm {
        let r = self.size();
        Mmpm::new(
            (0..r).map(|t| (t + 1) % r).collect(),
            self.exps.iter().map(|&u| u as i64).collect(),
            degree,
        )
        .expect("block is a valid MMPM")
    }
}

/// `T⁻¹ A T = diag(A_1, …, A_h)` with `T e_t = e_{similarity[t]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub blocks: Vec<Block>,
    pub similarity: Vec<usize>,
    pub degree: usize,
}

impl NormalForm {
    /// The block-diagonal matrix as a single MMPM.
    pub fn to_block_diagonal(&self) -> Mmpm {
        let mut perm = Vec::new();
        let mut exps = Vec::new();
        let mut offset = 0;
        for b in &self.blocks {
            let r = b.size();
            perm.extend((0..r).map(|t| offset + (t + 1) % r));
            exps.extend(b.exps.iter().map(|&u| u as i64));
            offset += r;
        }
        Mmpm::new(perm, exps, self.degree).expect("block diagonal is a valid MMPM")
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "[r={} u={:?}]", b.size(), b.exps)?;
        }
        write!(f, " via ψ'={:?}", self.similarity)
    }
}

/// Whether the `Nr` vectors `A^{k+i} e_0`, `i ∈ [Nr]`, are linearly
/// independent over `Q`, expanding `x^j e_b` into the `Nr` signed unit
/// coordinates of `Z[x]/(x^N+1)^r`.
pub fn linear_independence_check(a: &Mmpm, k: i64) -> Result<bool> {
    if !a.is_transitive() {
        return Err(domain!("linear independence is only claimed for transitive matrices"));
    }
    let n = a.degree() as u64;
    let r = a.dim();
    let count = n as usize * r;
    let rows: Vec<Vec<BigRational>> = (0..count as i64)
        .map(|i| {
            let (exp, idx) = a.pow(k + i).act_on_indicator(0, 0);
            let mut row = vec![BigRational::zero(); count];
            let (coord, sign) = if exp < n { (exp, 1) } else { (exp - n, -1) };
            row[idx * n as usize + coord as usize] = BigRational::from_integer(sign.into());
            row
        })
        .collect();
    Ok(rational_rank(rows) == count)
}

/// Rank by fraction-exact Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..cols {
                    let delta = factor.clone() * rows[rank][c].clone();
                    rows[i][c] = rows[i][c].clone() - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A table `f': Z_{2Nr} → Z_{t'}` laid out so that rotating by `Φ(m)` brings
/// `f'(m)` to the constant term of the first entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestVector {
    entries: Vec<Vec<u64>>,
    degree: usize,
    t_prime: u64,
}

impl TestVector {
    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn t_prime(&self) -> u64 {
        self.t_prime
    }

    /// The entries as elements of `Z_{t'}[x]/(x^N+1)`.
    pub fn to_ring_vector(&self) -> Result<Vec<RingElement>> {
        let ring = Ring::new(self.degree, self.t_prime)?;
        self.entries.iter().map(|e| ring.from_coeffs(e.clone())).collect()
    }
}

pub fn is_nega_cyclic(table: &[u64], t_prime: u64) -> bool {
    let len = table.len();
    len % 2 == 0
        && (0..len / 2).all(|i| (table[i] + table[i + len / 2]) % t_prime == 0)
}

/// Entry `b`, coefficient `a` holds `f'(-(a·r + b) mod 2Nr)`.
pub fn build_test_vector(f_prime: &[u64], t_prime: u64, r: usize, degree: usize) -> Result<TestVector> {
    let period = 2 * degree * r;
    if f_prime.len() != period {
        return Err(mismatch!("table has {} entries, expected 2Nr = {period}", f_prime.len()));
    }
    if !is_nega_cyclic(f_prime, t_prime) {
        return Err(domain!("table is not nega-cyclic: f'(i + Nr) != -f'(i) mod {t_prime}"));
    }
    let entries = (0..r)
        .map(|b| {
            (0..degree)
                .map(|a| f_prime[(period - (a * r + b) % period) % period] % t_prime)
                .collect()
        })
        .collect();
    Ok(TestVector {
        entries,
        degree,
        t_prime,
    })
}

/// Checks that the constant term of the first entry of `Φ(m)·v_test` is
/// `f'(m)` for every `m ∈ Z_{2Nr}`; the error names the first failing `m`.
pub fn lookup_property_check(
    f_prime: &[u64],
    t_prime: u64,
    r: usize,
    degree: usize,
) -> std::result::Result<(), LookupFailure> {
    let tv = build_test_vector(f_prime, t_prime, r, degree).map_err(|e| LookupFailure::Invalid(e.to_string()))?;
    let v = tv.to_ring_vector().map_err(|e| LookupFailure::Invalid(e.to_string()))?;
    for m in 0..2 * degree * r {
        let rotated = phi(m as i64, r, degree).apply(&v).expect("shapes match");
        let got = rotated[0].coeff(0);
        if got != f_prime[m] % t_prime {
            return Err(LookupFailure::Mismatch {
                m,
                expected: f_prime[m] % t_prime,
                got,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LookupFailure {
    Invalid(String),
    Mismatch { m: usize, expected: u64, got: u64 },
}

impl fmt::Display for LookupFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(e) => write!(f, "invalid table: {e}"),
            Self::Mismatch { m, expected, got } => {
                write!(f, "constant term at m = {m} is {got}, expected {expected}")
            }
        }
    }
}
