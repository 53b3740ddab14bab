//! The graded rings `O_L = k[x_0..x_{r+1}]/(x_0^t)` and
//! `O_H = k[x_1..x_{r+1}]` of a fat plane and its support, in explicit
//! monomial bases.
//!
//! Fat planes are always in canonical position: `L` is cut out by
//! `x_0^t = x_1 = ... = x_{n-r-1} = 0` in `P^n`. Restricting to `L` keeps
//! the ambient variables `x_0, x_{n-r}, ..., x_n`, renamed to the local
//! variables `x_0, x_1, ..., x_{r+1}`. Basis order is graded lexicographic
//! with `x_0` greatest.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{FatShape, Multidegree};
use crate::error::{usage, Error, Result};
use crate::field::{Field, Matrix, PrimeField, PrimeFieldMatrix, Sampler};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of degree `d` in `nvars` variables, lexicographically
/// descending.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(nvars, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    }
    out
}

/// Which graded ring a basis lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// `k[x_0..x_{r+1}]/(x_0^t)`.
    Fat { r: u32, t: u32 },
    /// `k[x_1..x_{r+1}]`, written with `r + 2` slots and `x_0` exponent 0.
    Support { r: u32 },
}

impl BasisKind {
    fn local_vars(&self) -> usize {
        match *self {
            BasisKind::Fat { r, .. } | BasisKind::Support { r } => r as usize + 2,
        }
    }
}

/// Ordered monomial basis of one graded piece.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    kind: BasisKind,
    degree: i64,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Basis of the degree-`degree` piece of `O_L` or `O_H`.
pub fn monomial_basis(kind: BasisKind, degree: i64) -> Result<GradedBasis> {
    if let BasisKind::Fat { t, .. } = kind {
        if t < 2 {
            return usage(format!("multiplicity t={t} must be >= 2"));
        }
    }
    let monomials: Vec<Monomial> = if degree < 0 {
        Vec::new()
    } else {
        let nvars = kind.local_vars();
        monomials_of_degree(nvars, degree as u32)
            .into_iter()
            .filter(|m| match kind {
                BasisKind::Fat { t, .. } => m.0[0] < t,
                BasisKind::Support { .. } => m.0[0] == 0,
            })
            .collect()
    };
    let index = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    Ok(GradedBasis {
        kind,
        degree,
        monomials,
        index,
    })
}

fn fat_basis(r: u32, t: u32, degree: i64) -> GradedBasis {
    monomial_basis(BasisKind::Fat { r, t }, degree).expect("t >= 2 checked by caller")
}

/// Sparse polynomial over a field, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> SparsePoly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        SparsePoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: F::Elem) {
        debug_assert_eq!(exps.len(), self.nvars);
        let f = self.field;
        let entry = self.terms.entry(exps).or_insert(f.zero());
        *entry = f.add(*entry, coeff);
        if f.is_zero(*entry) {
            self.terms.retain(|_, v| !f.is_zero(*v));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Product, discarding terms whose `x_0` exponent reaches `x0_bound`.
    pub fn mul_truncated(&self, other: &Self, x0_bound: Option<u32>) -> Self {
        let f = self.field;
        let mut out = SparsePoly::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if x0_bound.is_some_and(|b| e[0] >= b) {
                    continue;
                }
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn partial(&self, var: usize) -> Self {
        let f = self.field;
        let mut out = SparsePoly::zero(f, self.nvars);
        for (e, &c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, f.mul(c, f.embed(e[var] as u64)));
        }
        out
    }
}

/// Maps an ambient exponent vector to its image in `O_L`, if nonzero.
fn restrict_exponents(shape: FatShape, exps: &[u32]) -> Option<Monomial> {
    let p = shape.codim_linear() as usize;
    if exps[1..=p].iter().any(|&e| e > 0) || exps[0] >= shape.t {
        return None;
    }
    let mut local = Vec::with_capacity(shape.r as usize + 2);
    local.push(exps[0]);
    local.extend_from_slice(&exps[p + 1..]);
    Some(Monomial(local))
}

/// Element of `O_L` of a fixed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct FatElement {
    r: u32,
    t: u32,
    degree: u32,
    poly: SparsePoly<PrimeField>,
}

impl FatElement {
    /// Builds an element from `(local exponents, coefficient)` pairs,
    /// reducing `x_0^t` to zero.
    pub fn new(
        field: PrimeField,
        r: u32,
        t: u32,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, u64)>,
    ) -> Result<Self> {
        if t < 2 {
            return usage(format!("multiplicity t={t} must be >= 2"));
        }
        let nvars = r as usize + 2;
        let mut poly = SparsePoly::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return usage(format!("expected {nvars} exponents, got {}", exps.len()));
            }
            if exps.iter().sum::<u32>() != degree {
                return usage(format!("term of degree != {degree}"));
            }
            if exps[0] < t {
                poly.add_term(exps, field.reduce(c));
            }
        }
        Ok(FatElement { r, t, degree, poly })
    }

    pub fn one(field: PrimeField, r: u32, t: u32) -> Result<Self> {
        Self::new(field, r, t, 0, [(vec![0; r as usize + 2], 1)])
    }

    /// `x_0^k`.
    pub fn x0_power(field: PrimeField, r: u32, t: u32, k: u32) -> Result<Self> {
        let mut e = vec![0; r as usize + 2];
        e[0] = k;
        Self::new(field, r, t, k, [(e, 1)])
    }

    /// Uniformly random element of the given degree.
    pub fn random(field: PrimeField, r: u32, t: u32, degree: u32, sampler: &mut Sampler) -> Self {
        let basis = fat_basis(r, t, degree as i64);
        let terms: Vec<(Vec<u32>, u64)> = basis
            .monomials()
            .iter()
            .map(|m| (m.0.clone(), sampler.residue(field)))
            .collect();
        Self::new(field, r, t, degree, terms).expect("basis monomials are valid")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &FatElement) -> FatElement {
        FatElement {
            r: self.r,
            t: self.t,
            degree: self.degree + other.degree,
            poly: self.poly.mul_truncated(&other.poly, Some(self.t)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coordinates in [`monomial_basis`] of its degree.
    pub fn coordinates(&self) -> Vec<u64> {
        let basis = fat_basis(self.r, self.t, self.degree as i64);
        let mut v = vec![0; basis.len()];
        for (e, &c) in self.poly.terms() {
            let i = basis
                .position(&Monomial(e.clone()))
                .expect("reduced terms lie in the basis");
            v[i] = c;
        }
        v
    }
}

/// Matrix of multiplication by `g` from the degree-`source_degree` piece
/// of `O_L` to the degree `source_degree + deg g` piece.
pub fn mult_matrix(g: &FatElement, source_degree: u32) -> PrimeFieldMatrix {
    let source = fat_basis(g.r, g.t, source_degree as i64);
    mult_matrix_from(g, &source)
}

/// Multiplication by `g` restricted to an arbitrary source basis (for
/// instance `O_H(1)` inside `O_L(1)`).
pub fn mult_matrix_from(g: &FatElement, source: &GradedBasis) -> PrimeFieldMatrix {
    let field = g.poly.field;
    let target_degree = source.degree() + g.degree as i64;
    let target = fat_basis(g.r, g.t, target_degree);
    let mut m = Matrix::zeros(field, target.len(), source.len());
    for (j, mono) in source.monomials().iter().enumerate() {
        for (e, &c) in g.poly.terms() {
            let prod = mono.times(&Monomial(e.clone()));
            if prod.0[0] >= g.t {
                continue;
            }
            let i = target
                .position(&prod)
                .expect("product lies in target basis");
            m.set(i, j, field.add(m.get(i, j), c));
        }
    }
    m
}

/// Homogeneous form on `P^n` with a dense coefficient table in the order
/// of [`monomials_of_degree`] over `n + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub degree: u32,
    pub coeffs: Vec<u64>,
}

/// A system of homogeneous equations over GF(p) on `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    field: PrimeField,
    n: u32,
    equations: Vec<Form>,
}

/// Sparse `(ambient exponents, coefficient)` terms of one equation.
pub type SparseTerms = Vec<(Vec<u32>, i64)>;

impl PolySystem {
    pub fn new(field: PrimeField, n: u32, equations: Vec<Form>) -> Result<Self> {
        for (i, eq) in equations.iter().enumerate() {
            let expected = monomials_of_degree(n as usize + 1, eq.degree).len();
            if eq.coeffs.len() != expected {
                return usage(format!(
                    "equation {i}: {} coefficients, degree {} needs {expected}",
                    eq.coeffs.len(),
                    eq.degree
                ));
            }
            if eq.coeffs.iter().any(|&c| c >= field.modulus()) {
                return usage(format!("equation {i}: coefficient not reduced mod p"));
            }
        }
        Ok(PolySystem {
            field,
            n,
            equations,
        })
    }

    /// Builds a system from `(degree, terms)` pairs.
    pub fn from_terms(field: PrimeField, n: u32, equations: &[(u32, SparseTerms)]) -> Result<Self> {
        let forms = equations
            .iter()
            .map(|(degree, terms)| {
                let basis = monomials_of_degree(n as usize + 1, *degree);
                let index: HashMap<&Monomial, usize> =
                    basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut coeffs = vec![0u64; basis.len()];
                for (exps, c) in terms {
                    let m = Monomial(exps.clone());
                    let &i = index.get(&m).ok_or_else(|| {
                        Error::Usage(format!("monomial {m} is not of degree {degree} on P^{n}"))
                    })?;
                    coeffs[i] = (coeffs[i] + field.reduce_i64(*c)) % field.modulus();
                }
                Ok(Form {
                    degree: *degree,
                    coeffs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(field, n, forms)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn equations(&self) -> &[Form] {
        &self.equations
    }

    pub fn max_degree(&self) -> u32 {
        self.equations.iter().map(|e| e.degree).max().unwrap_or(0)
    }

    /// Each equation as a sparse polynomial over `field`, which must have
    /// the same characteristic.
    pub fn to_sparse<F: Field>(&self, field: F) -> Result<Vec<SparsePoly<F>>> {
        if field.characteristic() != self.field.modulus() {
            return usage("characteristic mismatch");
        }
        let nvars = self.n as usize + 1;
        Ok(self
            .equations
            .iter()
            .map(|eq| {
                let mut poly = SparsePoly::zero(field, nvars);
                for (m, &c) in monomials_of_degree(nvars, eq.degree)
                    .into_iter()
                    .zip(&eq.coeffs)
                {
                    if c != 0 {
                        poly.add_term(m.0, field.embed(c));
                    }
                }
                poly
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolySystemDoc::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PolySystemDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        doc.try_into()
    }
}

/// Serialized form: `{"p", "n", "equations": [{"degree", "coeffs"}]}` where
/// `coeffs` maps comma-separated exponent tuples of `x_0..x_n` to nonzero
/// residues.
#[derive(Debug, Serialize, Deserialize)]
struct PolySystemDoc {
    p: u64,
    n: u32,
    equations: Vec<EquationDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EquationDoc {
    degree: u32,
    coeffs: BTreeMap<String, u64>,
}

impl From<&PolySystem> for PolySystemDoc {
    fn from(sys: &PolySystem) -> Self {
        let nvars = sys.n as usize + 1;
        let equations = sys
            .equations
            .iter()
            .map(|eq| EquationDoc {
                degree: eq.degree,
                coeffs: monomials_of_degree(nvars, eq.degree)
                    .iter()
                    .zip(&eq.coeffs)
                    .filter(|(_, &c)| c != 0)
                    .map(|(m, &c)| {
                        let key = m.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                        (key, c)
                    })
                    .collect(),
            })
            .collect();
        PolySystemDoc {
            p: sys.field.modulus(),
            n: sys.n,
            equations,
        }
    }
}

impl TryFrom<PolySystemDoc> for PolySystem {
    type Error = Error;

    fn try_from(doc: PolySystemDoc) -> Result<Self> {
        let field = PrimeField::new(doc.p).map_err(|e| Error::Parse(e.to_string()))?;
        let nvars = doc.n as usize + 1;
        let mut equations = Vec::with_capacity(doc.equations.len());
        for eq in doc.equations {
            let mut terms = Vec::with_capacity(eq.coeffs.len());
            for (key, c) in eq.coeffs {
                let exps = key
                    .split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse(format!("bad exponent tuple '{key}'")))?;
                if exps.len() != nvars {
                    return Err(Error::Parse(format!(
                        "exponent tuple '{key}' needs {nvars} entries"
                    )));
                }
                if exps.iter().sum::<u32>() != eq.degree {
                    return Err(Error::Parse(format!(
                        "exponent tuple '{key}' is not of degree {}",
                        eq.degree
                    )));
                }
                if c >= doc.p {
                    return Err(Error::Parse(format!(
                        "residue {c} not reduced mod {}",
                        doc.p
                    )));
                }
                terms.push((exps, c as i64));
            }
            equations.push((eq.degree, terms));
        }
        PolySystem::from_terms(field, doc.n, &equations).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Matrix of restriction from degree-`d` forms on `P^n` to the degree-`d`
/// piece of `O_L`: rows indexed by `monomial_basis(O_L, d)`, columns by
/// ambient monomials.
pub fn restriction_matrix(
    n: u32,
    r: u32,
    t: u32,
    d: u32,
    field: PrimeField,
) -> Result<PrimeFieldMatrix> {
    let shape = FatShape::new(n, r, t)?;
    let rows = fat_basis(r, t, d as i64);
    let cols = monomials_of_degree(n as usize + 1, d);
    let mut m = Matrix::zeros(field, rows.len(), cols.len());
    for (j, mono) in cols.iter().enumerate() {
        if let Some(local) = restrict_exponents(shape, &mono.0) {
            let i = rows.position(&local).expect("restricted monomial in basis");
            m.set(i, j, 1);
        }
    }
    Ok(m)
}

fn restrict_sparse(shape: FatShape, poly: &SparsePoly<PrimeField>) -> FatElement {
    let field = poly.field;
    let mut out = SparsePoly::zero(field, shape.r as usize + 2);
    let mut degree = 0;
    for (e, &c) in poly.terms() {
        degree = e.iter().sum();
        if let Some(local) = restrict_exponents(shape, e) {
            out.add_term(local.0, c);
        }
    }
    FatElement {
        r: shape.r,
        t: shape.t,
        degree,
        poly: out,
    }
}

/// Matrix of `H^0(m_b)`: domain is `n-r-1` copies of `O_L(1)` followed by
/// `O_H(1)`, codomain the concatenation of `O_L(d_i)`.
///
/// The column for copy `j` and basis form `x_k` is `x_k * (db/dx_j)|_L`;
/// the `O_H(1)` columns use `db/dx_0` restricted, a multiple of
/// `x_0^{t-1}`, without rescaling by `t`.
pub fn build_mb(b: &PolySystem, shape: FatShape) -> Result<PrimeFieldMatrix> {
    if b.n() != shape.n {
        return usage(format!(
            "system lives on P^{}, shape on P^{}",
            b.n(),
            shape.n
        ));
    }
    let field = b.field();
    field.ensure_exceeds(b.max_degree().max(shape.t))?;
    let sparse = b.to_sparse(field)?;
    for (i, eq) in sparse.iter().enumerate() {
        if !restrict_sparse(shape, eq).is_zero() {
            return Err(Error::Contract(format!(
                "equation {i} does not vanish on the fat plane"
            )));
        }
    }
    let (r, t) = (shape.r, shape.t);
    let lin = fat_basis(r, t, 1);
    let support = monomial_basis(BasisKind::Support { r }, 1)?;
    let row_blocks: Vec<GradedBasis> = b
        .equations()
        .iter()
        .map(|eq| fat_basis(r, t, eq.degree as i64))
        .collect();
    let total_rows: usize = row_blocks.iter().map(GradedBasis::len).sum();

    let column_for = |var: usize, source: &GradedBasis| -> Vec<Vec<u64>> {
        let derivs: Vec<FatElement> = sparse
            .iter()
            .zip(b.equations())
            .map(|(eq, form)| {
                let mut el = restrict_sparse(shape, &eq.partial(var));
                el.degree = form.degree - 1;
                el
            })
            .collect();
        let blocks: Vec<PrimeFieldMatrix> =
            derivs.iter().map(|g| mult_matrix_from(g, source)).collect();
        (0..source.len())
            .map(|k| blocks.iter().flat_map(|blk| blk.column(k)).collect())
            .collect()
    };

    let mut columns = Vec::new();
    for j in 1..=shape.codim_linear() as usize {
        columns.extend(column_for(j, &lin));
    }
    columns.extend(column_for(0, &support));
    Ok(Matrix::from_columns(field, total_rows, &columns))
}

/// True iff every equation, pulled back along `placement` and restricted
/// to the canonical fat plane of `shape`, vanishes modulo `x_0^t`.
pub fn is_fat_plane_contained(
    b: &PolySystem,
    shape: FatShape,
    placement: &PrimeFieldMatrix,
) -> Result<bool> {
    let equations = b.to_sparse(b.field())?;
    fat_plane_contained_over(&equations, shape, placement)
}

/// [`is_fat_plane_contained`] over any field, for equations given as
/// sparse polynomials in `n + 1` variables.
pub fn fat_plane_contained_over<F: Field>(
    equations: &[SparsePoly<F>],
    shape: FatShape,
    placement: &Matrix<F>,
) -> Result<bool> {
    let size = shape.n as usize + 1;
    if placement.rows() != size || placement.cols() != size {
        return usage(format!("placement must be {size}x{size}"));
    }
    if placement.rank() != size {
        return usage("placement is not invertible");
    }
    let field = placement.field();
    let p = shape.codim_linear() as usize;
    let local_vars = shape.r as usize + 2;
    let kept: Vec<usize> = std::iter::once(0).chain(p + 1..size).collect();

    // x_k = sum over kept canonical coordinates of A[k][l] y_l
    let linear: Vec<SparsePoly<F>> = (0..size)
        .map(|k| {
            let mut poly = SparsePoly::zero(field, local_vars);
            for (m, &l) in kept.iter().enumerate() {
                let mut e = vec![0; local_vars];
                e[m] = 1;
                poly.add_term(e, placement.get(k, l));
            }
            poly
        })
        .collect();

    let mut one = SparsePoly::zero(field, local_vars);
    one.add_term(vec![0; local_vars], field.one());
    let mut powers: HashMap<(usize, u32), SparsePoly<F>> = HashMap::new();
    for eq in equations {
        if eq.nvars() != size {
            return usage("equation has the wrong number of variables");
        }
        let mut total = SparsePoly::zero(field, local_vars);
        for (e, &c) in eq.terms() {
            let mut term = one.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let pw = powers.entry((k, ek)).or_insert_with(|| {
                    (0..ek).fold(one.clone(), |acc, _| {
                        acc.mul_truncated(&linear[k], Some(shape.t))
                    })
                });
                term = term.mul_truncated(pw, Some(shape.t));
            }
            for (te, &tc) in term.terms() {
                total.add_term(te.clone(), field.mul(c, tc));
            }
        }
        if !total.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random element `b_i = sum_j x_j m_ij + x_0^t f_i` of the ideal of the
/// canonical fat plane, with `x_0^t f_i` present only when `d_i >= t`.
pub fn sample_ideal_element(
    shape: FatShape,
    dd: &Multidegree,
    field: PrimeField,
    seed: u64,
) -> Result<PolySystem> {
    field.ensure_exceeds(dd.max().max(shape.t))?;
    let mut sampler = Sampler::new(seed);
    let nvars = shape.n as usize + 1;
    let random_form = |degree: u32, sampler: &mut Sampler| -> Vec<(Monomial, u64)> {
        monomials_of_degree(nvars, degree)
            .into_iter()
            .map(|m| (m, sampler.residue(field)))
            .collect()
    };
    let mut forms = Vec::with_capacity(dd.len());
    for &d in dd.degrees() {
        let basis = monomials_of_degree(nvars, d);
        let index: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut coeffs = vec![0u64; basis.len()];
        let mut accumulate = |shift: &[u32], terms: Vec<(Monomial, u64)>| {
            for (m, c) in terms {
                let e = Monomial(m.0.iter().zip(shift).map(|(a, b)| a + b).collect());
                let i = index[&e];
                coeffs[i] = field.add(coeffs[i], c);
            }
        };
        for j in 1..=shape.codim_linear() as usize {
            let mut shift = vec![0; nvars];
            shift[j] = 1;
            let terms = random_form(d - 1, &mut sampler);
            accumulate(&shift, terms);
        }
        if d >= shape.t {
            let mut shift = vec![0; nvars];
            shift[0] = shape.t;
            let terms = random_form(d - shape.t, &mut sampler);
            accumulate(&shift, terms);
        }
        forms.push(Form { degree: d, coeffs });
    }
    PolySystem::new(field, shape.n, forms)
}
