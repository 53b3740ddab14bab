//! Arithmetic in GF(p) and GF(p^2), dense matrices with rank by Gaussian
//! elimination, and deterministic seeded sampling.

use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Modulus used unless the caller picks another one.
pub const DEFAULT_MODULUS: u64 = 32003;

/// Field operations over a small copyable element type.
pub trait Field: Copy + fmt::Debug + PartialEq {
    type Elem: Copy + fmt::Debug + PartialEq + Eq + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn embed(&self, v: u64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn size(&self) -> u64;
    /// The `i`-th element in a fixed enumeration, `i < size()`.
    fn element(&self, i: u64) -> Self::Elem;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// The prime field GF(p), `2 < p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= 1 << 32 || !is_prime(p) {
            return usage(format!("modulus must be an odd prime below 2^32, got {p}"));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Rejects degrees the characteristic would collapse.
    pub fn ensure_exceeds(&self, max_degree: u32) -> Result<()> {
        if self.p <= max_degree as u64 {
            return usage(format!(
                "modulus {} must exceed every degree (max {max_degree})",
                self.p
            ));
        }
        Ok(())
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
pub fn fp_inv(a: u64, field: PrimeField) -> Result<u64> {
    let p = field.p as i64;
    let a = (a % field.p) as i64;
    if a == 0 {
        return Err(Error::DivisionByZero(field.p));
    }
    let (mut old_r, mut r) = (a, p);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Ok(old_s.rem_euclid(p) as u64)
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn embed(&self, v: u64) -> u64 {
        v % self.p
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: u64) -> Result<u64> {
        fp_inv(a, *self)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn size(&self) -> u64 {
        self.p
    }
    fn element(&self, i: u64) -> u64 {
        i % self.p
    }
}

/// GF(p^2) as GF(p)[a]/(a^2 - q) for the least non-residue `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticExtension {
    base: PrimeField,
    non_residue: u64,
}

impl QuadraticExtension {
    pub fn new(base: PrimeField) -> Self {
        let non_residue = (2..base.p)
            .find(|&q| !base.is_square(q))
            .expect("odd primes have non-residues");
        QuadraticExtension { base, non_residue }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn non_residue(&self) -> u64 {
        self.non_residue
    }

    /// Embeds a base-field residue.
    pub fn lift(&self, a: u64) -> (u64, u64) {
        (a % self.base.p, 0)
    }
}

impl Field for QuadraticExtension {
    type Elem = (u64, u64);

    fn zero(&self) -> (u64, u64) {
        (0, 0)
    }
    fn one(&self) -> (u64, u64) {
        (1, 0)
    }
    fn embed(&self, v: u64) -> (u64, u64) {
        self.lift(v)
    }
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.base.add(a.0, b.0), self.base.add(a.1, b.1))
    }
    fn sub(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.base.sub(a.0, b.0), self.base.sub(a.1, b.1))
    }
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let f = self.base;
        let re = f.add(f.mul(a.0, b.0), f.mul(self.non_residue, f.mul(a.1, b.1)));
        let im = f.add(f.mul(a.0, b.1), f.mul(a.1, b.0));
        (re, im)
    }
    fn neg(&self, a: (u64, u64)) -> (u64, u64) {
        (self.base.neg(a.0), self.base.neg(a.1))
    }
    fn inv(&self, a: (u64, u64)) -> Result<(u64, u64)> {
        // (x + y a)^-1 = (x - y a) / (x^2 - q y^2)
        let f = self.base;
        let norm = f.sub(f.mul(a.0, a.0), f.mul(self.non_residue, f.mul(a.1, a.1)));
        let ninv = fp_inv(norm, f)?;
        Ok((f.mul(a.0, ninv), f.mul(f.neg(a.1), ninv)))
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn size(&self) -> u64 {
        self.base.p * self.base.p
    }
    fn element(&self, i: u64) -> (u64, u64) {
        let p = self.base.p;
        ((i % (p * p)) % p, (i % (p * p)) / p)
    }
}

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

pub type PrimeFieldMatrix = Matrix<PrimeField>;

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return usage("ragged matrix rows");
        }
        let n = rows.len();
        Ok(Matrix {
            field,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from column vectors of equal length `rows`.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| self.field.is_zero(v))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return usage("vector length does not match matrix columns");
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form of a copy; returns it with pivot columns.
    pub fn row_reduce(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                m.set(row, j, f.mul(m.get(row, j), inv));
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col);
                if f.is_zero(factor) {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field;
        let (rref, pivots) = self.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rref.get(row, fc));
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return usage("determinant of a non-square matrix");
        }
        let f = self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                return Ok(f.zero());
            };
            if piv != col {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, col * m.cols + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in col + 1..m.rows {
                let factor = f.mul(m.get(i, col), inv);
                if f.is_zero(factor) {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Rank over GF(p).
pub fn mat_rank(m: &PrimeFieldMatrix) -> usize {
    m.rank()
}

/// Child seed for trial `index` of an experiment seeded with `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(master ^ splitmix(index.wrapping_add(0x5EED)))
}

/// Stream of uniform residues driven by a seeded ChaCha generator.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn residue(&mut self, field: PrimeField) -> u64 {
        self.rng.random_range(0..field.p)
    }

    pub fn nonzero_residue(&mut self, field: PrimeField) -> u64 {
        self.rng.random_range(1..field.p)
    }

    pub fn residues(&mut self, count: usize, field: PrimeField) -> Vec<u64> {
        (0..count).map(|_| self.residue(field)).collect()
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }
}

/// `count` residues uniform on `[0, p)`, fixed by `(count, p, seed)`.
pub fn seeded_sample(count: usize, field: PrimeField, seed: u64) -> Vec<u64> {
    Sampler::new(seed).residues(count, field)
}
