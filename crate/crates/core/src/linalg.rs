//! Matrices and row vectors over a shared `Field`, the vector<->index
//! bijection used for dense space traversal, and the derived-module functors
//! (alternating/symmetric squares, third exterior power, adjoint, tensor,
//! twisted tensor for degree-2 field extensions).
//!
//! Convention used throughout the crate: vectors are rows and groups act on
//! the right, v -> v g. Derived representations are built so that the
//! coordinate row of a module element transforms by the same right action.

use crate::gf::{Elem, Field, FieldError, SubfieldMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("symmetric square is not defined in characteristic 2")]
    Sym2Char2,
    #[error("adjoint quotient model requires p | m (got p={p}, m={m})")]
    QuotientNotApplicable { p: u32, m: usize },
    #[error("twisted tensor needs a field with an index-2 subfield (k even), got k={0}")]
    TwistedNeedsSquareField(u32),
    #[error("functor {0} needs matrices of size at least {1}")]
    TooSmall(&'static str, usize),
    #[error("space size q^n overflows the index type (q={q}, n={n})")]
    SpaceTooLarge { q: u32, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Elem>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over GF({}^{})", self.rows, self.cols, self.field.p(), self.field.k())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.entries[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(field: Arc<Field>, n: usize, lambda: Elem) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, lambda);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<Elem>]) -> Result<Mat, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimMismatch("ragged rows".into()));
            }
            for &e in row {
                field.check_elem(e)?;
                entries.push(e);
            }
        }
        Ok(Mat { field, rows: r, cols: c, entries })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    /// Some(lambda) iff the matrix equals lambda * I.
    pub fn as_scalar(&self) -> Option<Elem> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let lambda = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { lambda } else { 0 };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(l, j));
                    out.set(i, j, f.add(out.get(i, j), prod));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Row vector times matrix: the right action v -> v g.
    pub fn apply_row(&self, v: &[Elem]) -> Result<Vec<Elem>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimMismatch(format!("vector len {} vs {} rows", v.len(), self.rows)));
        }
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row = self.row(i);
            for (j, &gij) in row.iter().enumerate() {
                if gij != 0 {
                    out[j] = f.add(out[j], f.mul(vi, gij));
                }
            }
        }
        Ok(out)
    }

    /// Applies x -> x^(p^i) to every entry.
    pub fn entrywise_frobenius(&self, i: u32) -> Mat {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = self.field.frobenius(*e, i);
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimMismatch("add".into()));
        }
        let mut out = self.clone();
        for (a, &b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a = self.field.add(*a, b);
        }
        Ok(out)
    }

    pub fn scale(&self, lambda: Elem) -> Mat {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = self.field.mul(*e, lambda);
        }
        out
    }

    pub fn trace(&self) -> Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Exact row-echelon rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(pr) = pivot else { continue };
            if pr != rank {
                for j in 0..m.cols {
                    let (a, b) = (m.get(rank, j), m.get(pr, j));
                    m.set(rank, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(rank, col)).unwrap();
            for j in col..m.cols {
                m.set(rank, j, f.mul(m.get(rank, j), inv));
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    for j in col..m.cols {
                        let sub = f.mul(factor, m.get(rank, j));
                        m.set(r, j, f.sub(m.get(r, j), sub));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn det(&self) -> Result<Elem, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimMismatch("determinant of non-square matrix".into()));
        }
        let f = &self.field;
        let mut m = self.clone();
        let n = m.rows;
        let mut det: Elem = 1;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return Ok(0);
            };
            if pr != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pr, j));
                    m.set(col, j, b);
                    m.set(pr, j, a);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for r in col + 1..n {
                if m.get(r, col) != 0 {
                    let factor = f.mul(m.get(r, col), inv);
                    for j in col..n {
                        let sub = f.mul(factor, m.get(col, j));
                        m.set(r, j, f.sub(m.get(r, j), sub));
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimMismatch("inverse of non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Mat::identity(self.field.clone(), n);
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return Err(LinalgError::Singular);
            };
            if pr != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pr, j));
                    m.set(col, j, b);
                    m.set(pr, j, a);
                    let (a, b) = (inv.get(col, j), inv.get(pr, j));
                    inv.set(col, j, b);
                    inv.set(pr, j, a);
                }
            }
            let pinv = f.inv(m.get(col, col)).unwrap();
            for j in 0..n {
                m.set(col, j, f.mul(m.get(col, j), pinv));
                inv.set(col, j, f.mul(inv.get(col, j), pinv));
            }
            for r in 0..n {
                if r != col && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    for j in 0..n {
                        let s = f.mul(factor, m.get(col, j));
                        m.set(r, j, f.sub(m.get(r, j), s));
                        let s = f.mul(factor, inv.get(col, j));
                        inv.set(r, j, f.sub(inv.get(r, j), s));
                    }
                }
            }
        }
        Ok(inv)
    }
}

/// Number of points of the full space GF(q)^n, checked against u64 overflow.
pub fn space_size(field: &Field, n: usize) -> Result<u64, LinalgError> {
    let mut s: u64 = 1;
    for _ in 0..n {
        s = s
            .checked_mul(field.q() as u64)
            .filter(|&x| x <= u64::MAX / 4)
            .ok_or(LinalgError::SpaceTooLarge { q: field.q(), n })?;
    }
    Ok(s)
}

/// Little-endian mixed-radix encoding: index = sum coords[i] * q^i.
/// Index 0 is the zero vector.
pub fn vec_index(field: &Field, v: &[Elem]) -> u64 {
    let q = field.q() as u64;
    v.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}

pub fn index_to_vec(field: &Field, n: usize, mut idx: u64) -> Vec<Elem> {
    let q = field.q() as u64;
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push((idx % q) as Elem);
        idx /= q;
    }
    debug_assert_eq!(idx, 0, "index out of range for the space");
    v
}

/// Canonical basis orderings for the derived modules.
pub fn pairs_lt(m: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            v.push((i, j));
        }
    }
    v
}

pub fn pairs_le(m: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            v.push((i, j));
        }
    }
    v
}

pub fn triples_lt(m: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                v.push((i, j, k));
            }
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functor {
    Ext2,
    Sym2,
    Ext3,
    Adjoint,
    TwistedTensorK2,
}

impl Functor {
    pub fn name(self) -> &'static str {
        match self {
            Functor::Ext2 => "ext2",
            Functor::Sym2 => "sym2",
            Functor::Ext3 => "ext3",
            Functor::Adjoint => "adjoint",
            Functor::TwistedTensorK2 => "twisted_tensor_k2",
        }
    }

    pub fn parse(s: &str) -> Option<Functor> {
        Some(match s {
            "ext2" => Functor::Ext2,
            "sym2" => Functor::Sym2,
            "ext3" => Functor::Ext3,
            "adjoint" => Functor::Adjoint,
            "twisted_tensor_k2" => Functor::TwistedTensorK2,
            _ => None?,
        })
    }
}

/// Describes how coordinate rows of a derived module map back to a matrix
/// model, so orbit invariants (matrix rank) can be evaluated.
#[derive(Clone)]
pub enum ModuleModel {
    /// Plain vectors, no matrix model.
    Natural,
    /// Skew/alternating m x m matrices; coordinates indexed by pairs_lt(m).
    Ext2 { m: usize },
    /// Symmetric m x m matrices; coordinates indexed by pairs_le(m). The
    /// identification doubles diagonal coordinates so it commutes with the
    /// action A -> g^T A g.
    Sym2 { m: usize },
    /// Third exterior power; no matrix model.
    Ext3 { m: usize },
    /// Traceless m x m matrices, basis E_ij (i != j) row-major followed by
    /// E_ii - E_{i+1,i+1} for i = 0..m-1.
    AdjointFull { m: usize },
    /// Cosets of scalars inside traceless matrices (p | m), represented by
    /// the member with zero top-left entry; diagonal basis starts at i = 1.
    AdjointQuotient { m: usize },
    /// Coordinate rows reshaped to an m1 x m2 matrix.
    Tensor { m1: usize, m2: usize },
    /// m x m matrices A over the quadratic extension with A^(q0) = A^T,
    /// viewed over the subfield. Basis: E_ii, then for each i < j the pair
    /// (E_ij + E_ji, w E_ij + w^q0 E_ji) with w the extension generator.
    Twisted {
        m: usize,
        big: Arc<Field>,
        omega: Elem,
        map: Arc<SubfieldMap>,
    },
}

impl std::fmt::Debug for ModuleModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleModel::Natural => write!(f, "Natural"),
            ModuleModel::Ext2 { m } => write!(f, "Ext2(m={m})"),
            ModuleModel::Sym2 { m } => write!(f, "Sym2(m={m})"),
            ModuleModel::Ext3 { m } => write!(f, "Ext3(m={m})"),
            ModuleModel::AdjointFull { m } => write!(f, "AdjointFull(m={m})"),
            ModuleModel::AdjointQuotient { m } => write!(f, "AdjointQuotient(m={m})"),
            ModuleModel::Tensor { m1, m2 } => write!(f, "Tensor({m1}x{m2})"),
            ModuleModel::Twisted { m, .. } => write!(f, "Twisted(m={m})"),
        }
    }
}

pub struct DerivedRep {
    pub mats: Vec<Mat>,
    pub model: ModuleModel,
}

/// Induced action on the chosen derived module. All outputs act on coordinate
/// rows by right multiplication, so F(g) F(h) = F(g h).
pub fn functor_rep(gens: &[Mat], functor: Functor) -> Result<DerivedRep, LinalgError> {
    let first = gens.first().ok_or_else(|| LinalgError::DimMismatch("no generators".into()))?;
    if !first.is_square() {
        return Err(LinalgError::DimMismatch("functor input must be square".into()));
    }
    let m = first.rows;
    let field = first.field.clone();
    for g in gens {
        if g.field != field || g.rows != m || g.cols != m {
            return Err(LinalgError::DimMismatch("generators must share size and field".into()));
        }
    }
    match functor {
        Functor::Ext2 => {
            if m < 2 {
                return Err(LinalgError::TooSmall("ext2", 2));
            }
            let basis = pairs_lt(m);
            let mats = gens.iter().map(|g| ext2_mat(g, &basis)).collect();
            Ok(DerivedRep { mats, model: ModuleModel::Ext2 { m } })
        }
        Functor::Sym2 => {
            if field.p() == 2 {
                return Err(LinalgError::Sym2Char2);
            }
            let basis = pairs_le(m);
            let mats = gens.iter().map(|g| sym2_mat(g, &basis)).collect();
            Ok(DerivedRep { mats, model: ModuleModel::Sym2 { m } })
        }
        Functor::Ext3 => {
            if m < 3 {
                return Err(LinalgError::TooSmall("ext3", 3));
            }
            let basis = triples_lt(m);
            let mats = gens.iter().map(|g| ext3_mat(g, &basis)).collect();
            Ok(DerivedRep { mats, model: ModuleModel::Ext3 { m } })
        }
        Functor::Adjoint => {
            let quotient = m as u32 % field.p() == 0;
            adjoint_rep(gens, quotient)
        }
        Functor::TwistedTensorK2 => twisted_rep(gens),
    }
}

fn ext2_mat(g: &Mat, basis: &[(usize, usize)]) -> Mat {
    let f = &g.field;
    let d = basis.len();
    let mut out = Mat::zero(g.field.clone(), d, d);
    for (r, &(i, j)) in basis.iter().enumerate() {
        for (c, &(k, l)) in basis.iter().enumerate() {
            let a = f.mul(g.get(i, k), g.get(j, l));
            let b = f.mul(g.get(i, l), g.get(j, k));
            out.set(r, c, f.sub(a, b));
        }
    }
    out
}

fn sym2_mat(g: &Mat, basis: &[(usize, usize)]) -> Mat {
    let f = &g.field;
    let d = basis.len();
    let mut out = Mat::zero(g.field.clone(), d, d);
    for (r, &(i, j)) in basis.iter().enumerate() {
        for (c, &(k, l)) in basis.iter().enumerate() {
            let v = if k == l {
                f.mul(g.get(i, k), g.get(j, k))
            } else {
                f.add(f.mul(g.get(i, k), g.get(j, l)), f.mul(g.get(i, l), g.get(j, k)))
            };
            out.set(r, c, v);
        }
    }
    out
}

fn ext3_mat(g: &Mat, basis: &[(usize, usize, usize)]) -> Mat {
    let f = &g.field;
    let d = basis.len();
    let mut out = Mat::zero(g.field.clone(), d, d);
    for (r, &(i, j, k)) in basis.iter().enumerate() {
        for (c, &(l, mm, n)) in basis.iter().enumerate() {
            // 3x3 minor on rows {i,j,k}, columns {l,mm,n}.
            let e = |a: usize, b: usize| g.get(a, b);
            let t1 = f.mul(e(i, l), f.sub(f.mul(e(j, mm), e(k, n)), f.mul(e(j, n), e(k, mm))));
            let t2 = f.mul(e(i, mm), f.sub(f.mul(e(j, l), e(k, n)), f.mul(e(j, n), e(k, l))));
            let t3 = f.mul(e(i, n), f.sub(f.mul(e(j, l), e(k, mm)), f.mul(e(j, mm), e(k, l))));
            out.set(r, c, f.add(f.sub(t1, t2), t3));
        }
    }
    out
}

/// Basis matrices of the adjoint module, in coordinate order.
fn adjoint_basis(field: &Arc<Field>, m: usize, quotient: bool) -> Vec<Mat> {
    let mut basis = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = Mat::zero(field.clone(), m, m);
                e.set(i, j, 1);
                basis.push(e);
            }
        }
    }
    let start = usize::from(quotient);
    for i in start..m - 1 {
        let mut h = Mat::zero(field.clone(), m, m);
        h.set(i, i, 1);
        h.set(i + 1, i + 1, field.neg(1));
        basis.push(h);
    }
    basis
}

/// Coordinates of a traceless matrix (top-left entry zero in the quotient
/// model) with respect to `adjoint_basis`. Diagonal coordinates are the
/// prefix sums of the diagonal entries.
pub fn adjoint_coords(a: &Mat, quotient: bool) -> Vec<Elem> {
    let f = &a.field;
    let m = a.rows;
    let mut v = Vec::with_capacity(if quotient { m * m - 2 } else { m * m - 1 });
    for i in 0..m {
        for j in 0..m {
            if i != j {
                v.push(a.get(i, j));
            }
        }
    }
    let start = usize::from(quotient);
    let mut prefix: Elem = 0;
    for i in 0..m - 1 {
        prefix = f.add(prefix, a.get(i, i));
        if i >= start {
            v.push(prefix);
        }
    }
    v
}

/// Rebuild the model matrix from a coordinate row.
pub fn adjoint_matrix(field: &Arc<Field>, m: usize, quotient: bool, coords: &[Elem]) -> Mat {
    let f = field;
    let mut a = Mat::zero(field.clone(), m, m);
    let mut it = coords.iter();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                a.set(i, j, *it.next().unwrap());
            }
        }
    }
    let start = usize::from(quotient);
    let mut prev: Elem = 0;
    let mut total: Elem = 0;
    for i in start..m - 1 {
        let c = *it.next().unwrap();
        let d = f.sub(c, prev);
        a.set(i, i, d);
        total = f.add(total, d);
        prev = c;
    }
    a.set(m - 1, m - 1, f.neg(total));
    debug_assert!(it.next().is_none());
    debug_assert_eq!(a.trace(), 0);
    a
}

/// Normalize a coset representative of A + scalars to zero top-left entry.
fn normalize_coset(a: &Mat) -> Mat {
    let lambda = a.get(0, 0);
    if lambda == 0 {
        return a.clone();
    }
    let id = Mat::scalar(a.field.clone(), a.rows, a.field.neg(lambda));
    a.add(&id).unwrap()
}

pub fn adjoint_rep(gens: &[Mat], quotient: bool) -> Result<DerivedRep, LinalgError> {
    let first = gens.first().ok_or_else(|| LinalgError::DimMismatch("no generators".into()))?;
    let m = first.rows;
    let field = first.field.clone();
    if m < 2 {
        return Err(LinalgError::TooSmall("adjoint", 2));
    }
    let divides = m as u32 % field.p() == 0;
    if quotient && !divides {
        return Err(LinalgError::QuotientNotApplicable { p: field.p(), m });
    }
    if !quotient && divides {
        // The scalar line sits inside the traceless matrices here; only the
        // quotient model carries the intended irreducible action.
        return Err(LinalgError::QuotientNotApplicable { p: field.p(), m });
    }
    let basis = adjoint_basis(&field, m, quotient);
    let dim = basis.len();
    let mut mats = Vec::with_capacity(gens.len());
    for g in gens {
        let ginv = g.inverse()?;
        let mut fm = Mat::zero(field.clone(), dim, dim);
        for (r, b) in basis.iter().enumerate() {
            let mut img = ginv.mul(b)?.mul(g)?;
            if quotient {
                img = normalize_coset(&img);
            }
            let coords = adjoint_coords(&img, quotient);
            for (c, &v) in coords.iter().enumerate() {
                fm.set(r, c, v);
            }
        }
        mats.push(fm);
    }
    let model = if quotient {
        ModuleModel::AdjointQuotient { m }
    } else {
        ModuleModel::AdjointFull { m }
    };
    Ok(DerivedRep { mats, model })
}

/// Kronecker action on V1 (x) V2: coordinate (i,j) maps with entry
/// a[i][k] * b[j][l] at (k,l). Pairs generators positionally.
pub fn tensor_rep(gens_a: &[Mat], gens_b: &[Mat]) -> Result<DerivedRep, LinalgError> {
    if gens_a.len() != gens_b.len() || gens_a.is_empty() {
        return Err(LinalgError::DimMismatch("tensor factors must pair generators".into()));
    }
    let m1 = gens_a[0].rows;
    let m2 = gens_b[0].rows;
    let field = gens_a[0].field.clone();
    if gens_b[0].field != field {
        return Err(LinalgError::FieldMismatch);
    }
    let f = &field;
    let mut mats = Vec::with_capacity(gens_a.len());
    for (a, b) in gens_a.iter().zip(gens_b.iter()) {
        let mut out = Mat::zero(field.clone(), m1 * m2, m1 * m2);
        for i in 0..m1 {
            for j in 0..m2 {
                for k in 0..m1 {
                    let aik = a.get(i, k);
                    if aik == 0 {
                        continue;
                    }
                    for l in 0..m2 {
                        out.set(i * m2 + j, k * m2 + l, f.mul(aik, b.get(j, l)));
                    }
                }
            }
        }
        mats.push(out);
    }
    Ok(DerivedRep { mats, model: ModuleModel::Tensor { m1, m2 } })
}

struct TwistedBasis {
    mats: Vec<Mat>,
    omega: Elem,
    omega_bar: Elem,
}

fn twisted_basis(big: &Arc<Field>, m: usize) -> TwistedBasis {
    let omega = big.generator();
    let q0 = (big.p() as u64).pow(big.k() / 2);
    let omega_bar = big.pow(omega, q0);
    let mut mats = Vec::with_capacity(m * m);
    for i in 0..m {
        let mut e = Mat::zero(big.clone(), m, m);
        e.set(i, i, 1);
        mats.push(e);
    }
    for (i, j) in pairs_lt(m) {
        let mut p = Mat::zero(big.clone(), m, m);
        p.set(i, j, 1);
        p.set(j, i, 1);
        mats.push(p);
        let mut qm = Mat::zero(big.clone(), m, m);
        qm.set(i, j, omega);
        qm.set(j, i, omega_bar);
        mats.push(qm);
    }
    TwistedBasis { mats, omega, omega_bar }
}

/// Coordinates (in the subfield) of a matrix satisfying A^(q0) = A^T.
fn twisted_coords(
    a: &Mat,
    map: &SubfieldMap,
    omega: Elem,
    omega_bar: Elem,
    m: usize,
) -> Vec<Elem> {
    let big = &a.field;
    let down = |x: Elem| -> Elem {
        map.from_big[x as usize].expect("twisted coordinate not in subfield")
    };
    let mut v = Vec::with_capacity(m * m);
    for i in 0..m {
        v.push(down(a.get(i, i)));
    }
    let denom = big.inv(big.sub(omega, omega_bar)).unwrap();
    for (i, j) in pairs_lt(m) {
        let y = big.mul(big.sub(a.get(i, j), a.get(j, i)), denom);
        let x = big.sub(a.get(i, j), big.mul(y, omega));
        v.push(down(x));
        v.push(down(y));
    }
    v
}

/// Rebuild the big-field model matrix from subfield coordinates.
pub fn twisted_matrix(model: &ModuleModel, coords: &[Elem]) -> Mat {
    let ModuleModel::Twisted { m, big, omega, map } = model else {
        panic!("twisted_matrix called on a non-twisted model")
    };
    let basis = twisted_basis(big, *m);
    debug_assert_eq!(basis.omega, *omega);
    let mut a = Mat::zero(big.clone(), *m, *m);
    for (b, &c) in basis.mats.iter().zip(coords.iter()) {
        a = a.add(&b.scale(map.to_big[c as usize])).unwrap();
    }
    a
}

fn twisted_rep(gens: &[Mat]) -> Result<DerivedRep, LinalgError> {
    let first = &gens[0];
    let big = first.field.clone();
    if big.k() % 2 != 0 {
        return Err(LinalgError::TwistedNeedsSquareField(big.k()));
    }
    let m = first.rows;
    let small = Field::new(big.p(), big.k() / 2)?;
    let map = Arc::new(SubfieldMap::build(&small, &big)?);
    let basis = twisted_basis(&big, m);
    let mut mats = Vec::with_capacity(gens.len());
    let half = big.k() / 2;
    for g in gens {
        let gt = g.transpose();
        let gs = g.entrywise_frobenius(half);
        let mut fm = Mat::zero(small.clone(), m * m, m * m);
        for (r, b) in basis.mats.iter().enumerate() {
            let img = gt.mul(b)?.mul(&gs)?;
            let coords = twisted_coords(&img, &map, basis.omega, basis.omega_bar, m);
            for (c, &v) in coords.iter().enumerate() {
                fm.set(r, c, v);
            }
        }
        mats.push(fm);
    }
    Ok(DerivedRep {
        mats,
        model: ModuleModel::Twisted { m, big, omega: basis.omega, map },
    })
}

impl ModuleModel {
    pub fn dim(&self) -> Option<usize> {
        Some(match self {
            ModuleModel::Natural => return None,
            ModuleModel::Ext2 { m } => m * (m - 1) / 2,
            ModuleModel::Sym2 { m } => m * (m + 1) / 2,
            ModuleModel::Ext3 { m } => m * (m - 1) * (m - 2) / 6,
            ModuleModel::AdjointFull { m } => m * m - 1,
            ModuleModel::AdjointQuotient { m } => m * m - 2,
            ModuleModel::Tensor { m1, m2 } => m1 * m2,
            ModuleModel::Twisted { m, .. } => m * m,
        })
    }

    /// The matrix-rank invariant of a module element given by its coordinate
    /// row, when the model supports one. For the adjoint quotient the rank of
    /// a coset is the minimum rank over its members.
    pub fn matrix_rank(&self, field: &Arc<Field>, coords: &[Elem]) -> Option<usize> {
        match self {
            ModuleModel::Natural | ModuleModel::Ext3 { .. } => None,
            ModuleModel::Ext2 { m } => {
                let f = field;
                let mut a = Mat::zero(field.clone(), *m, *m);
                for ((i, j), &c) in pairs_lt(*m).into_iter().zip(coords.iter()) {
                    a.set(i, j, c);
                    a.set(j, i, f.neg(c));
                }
                Some(a.rank())
            }
            ModuleModel::Sym2 { m } => {
                let f = field;
                let two = f.add(1, 1);
                let mut a = Mat::zero(field.clone(), *m, *m);
                for ((i, j), &c) in pairs_le(*m).into_iter().zip(coords.iter()) {
                    if i == j {
                        a.set(i, i, f.mul(two, c));
                    } else {
                        a.set(i, j, c);
                        a.set(j, i, c);
                    }
                }
                Some(a.rank())
            }
            ModuleModel::AdjointFull { m } => {
                Some(adjoint_matrix(field, *m, false, coords).rank())
            }
            ModuleModel::AdjointQuotient { m } => {
                let a = adjoint_matrix(field, *m, true, coords);
                let mut best = a.rank();
                for lambda in 1..field.q() {
                    let shifted = a.add(&Mat::scalar(field.clone(), *m, lambda)).unwrap();
                    best = best.min(shifted.rank());
                }
                Some(best)
            }
            ModuleModel::Tensor { m1, m2 } => {
                let mut a = Mat::zero(field.clone(), *m1, *m2);
                for i in 0..*m1 {
                    for j in 0..*m2 {
                        a.set(i, j, coords[i * m2 + j]);
                    }
                }
                Some(a.rank())
            }
            ModuleModel::Twisted { .. } => Some(twisted_matrix(self, coords).rank()),
        }
    }
}

/// Bilinear/sesquilinear/quadratic form metadata attached to natural modules.
#[derive(Clone, Debug)]
pub enum Form {
    /// B(v,w) = v G w^T with G alternating.
    Alternating(Mat),
    /// B(v,w) = v G conj(w)^T, conj the index-2 field involution.
    Hermitian(Mat),
    /// Q(v) = v U v^T with U upper triangular; valid in every characteristic.
    Quadratic(Mat),
}

impl Form {
    pub fn eval(&self, v: &[Elem], w: &[Elem]) -> Result<Elem, LinalgError> {
        match self {
            Form::Alternating(g) => {
                let vg = g.transpose().apply_row(w)?;
                Ok(dot(&g.field, v, &vg))
            }
            Form::Hermitian(g) => {
                let f = &g.field;
                if f.k() % 2 != 0 {
                    return Err(LinalgError::TwistedNeedsSquareField(f.k()));
                }
                let wbar: Vec<Elem> = w.iter().map(|&x| f.frobenius(x, f.k() / 2)).collect();
                let vg = g.transpose().apply_row(&wbar)?;
                Ok(dot(f, v, &vg))
            }
            Form::Quadratic(_) => Err(LinalgError::DimMismatch(
                "quadratic form takes one argument; use eval_quadratic".into(),
            )),
        }
    }

    pub fn eval_quadratic(&self, v: &[Elem]) -> Result<Elem, LinalgError> {
        match self {
            Form::Quadratic(u) => {
                let uv = u.apply_row_from_left(v)?;
                Ok(dot(&u.field, &uv, v))
            }
            _ => {
                let b = self.eval(v, v)?;
                Ok(b)
            }
        }
    }
}

impl Mat {
    /// Matrix times column vector, returned as a coordinate list.
    fn apply_row_from_left(&self, v: &[Elem]) -> Result<Vec<Elem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimMismatch("column length".into()));
        }
        let f = &self.field;
        let mut out = vec![0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0;
            for (j, &vj) in v.iter().enumerate() {
                acc = f.add(acc, f.mul(self.get(i, j), vj));
            }
            out[i] = acc;
        }
        Ok(out)
    }
}

fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b.iter()).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    fn random_mat(f: &Arc<Field>, n: usize, rng: &mut ChaCha8Rng) -> Mat {
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..f.q())).collect())
            .collect();
        Mat::from_rows(f.clone(), &rows).unwrap()
    }

    fn random_invertible(f: &Arc<Field>, n: usize, rng: &mut ChaCha8Rng) -> Mat {
        loop {
            let m = random_mat(f, n, rng);
            if m.det().unwrap() != 0 {
                return m;
            }
        }
    }

    #[test]
    fn identity_apply_fixes_vectors() {
        let f = Field::new(5, 1).unwrap();
        let id = Mat::identity(f.clone(), 4);
        let v = vec![3, 0, 1, 4];
        assert_eq!(id.apply_row(&v).unwrap(), v);
        assert!(id.is_identity());
    }

    #[test]
    fn transpose_antihomomorphism() {
        let f = Field::new(5, 1).unwrap();
        let mut r = rng();
        for _ in 0..20 {
            let a = random_mat(&f, 3, &mut r);
            let b = random_mat(&f, 3, &mut r);
            assert_eq!(a.mul(&b).unwrap().transpose(), b.transpose().mul(&a.transpose()).unwrap());
        }
    }

    #[test]
    fn frobenius_twice_over_gf9() {
        let f = Field::new(3, 2).unwrap();
        let mut r = rng();
        let a = random_mat(&f, 3, &mut r);
        assert_eq!(a.entrywise_frobenius(1).entrywise_frobenius(1), a);
    }

    #[test]
    fn rank_examples() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(Mat::zero(f.clone(), 3, 4).rank(), 0);
        assert_eq!(Mat::identity(f.clone(), 4).rank(), 4);
        let skew = Mat::from_rows(f.clone(), &[vec![0, 1, 0], vec![4, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(skew.rank(), 2);
    }

    #[test]
    fn det_and_inverse() {
        let f = Field::new(7, 1).unwrap();
        let mut r = rng();
        for _ in 0..20 {
            let a = random_invertible(&f, 4, &mut r);
            let inv = a.inverse().unwrap();
            assert!(a.mul(&inv).unwrap().is_identity());
            let d = a.det().unwrap();
            let di = inv.det().unwrap();
            assert_eq!(f.mul(d, di), 1);
        }
        assert!(Mat::zero(f.clone(), 2, 2).inverse().is_err());
    }

    #[test]
    fn det_multiplicative() {
        let f = Field::new(3, 2).unwrap();
        let mut r = rng();
        for _ in 0..20 {
            let a = random_mat(&f, 3, &mut r);
            let b = random_mat(&f, 3, &mut r);
            assert_eq!(
                a.mul(&b).unwrap().det().unwrap(),
                f.mul(a.det().unwrap(), b.det().unwrap())
            );
        }
    }

    #[test]
    fn vec_index_examples() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(vec_index(&f, &[0, 0]), 0);
        assert_eq!(vec_index(&f, &[2, 1]), 5);
        assert_eq!(index_to_vec(&f, 2, 5), vec![2, 1]);
    }

    #[test]
    fn vec_index_roundtrip_random() {
        let f = Field::new(7, 1).unwrap();
        let mut r = rng();
        for _ in 0..1000 {
            let v: Vec<Elem> = (0..5).map(|_| r.gen_range(0..7)).collect();
            assert_eq!(index_to_vec(&f, 5, vec_index(&f, &v)), v);
        }
    }

    #[test]
    fn space_size_overflow() {
        let f = Field::new(2, 16).unwrap();
        assert!(space_size(&f, 2).is_ok());
        assert!(space_size(&f, 5).is_err());
    }

    #[test]
    fn ext2_identity_is_identity() {
        let f = Field::new(2, 1).unwrap();
        let id = Mat::identity(f.clone(), 4);
        let d = functor_rep(&[id], Functor::Ext2).unwrap();
        assert_eq!(d.mats[0].rows, 6);
        assert!(d.mats[0].is_identity());
    }

    #[test]
    fn sym2_rejects_char2() {
        let f = Field::new(2, 2).unwrap();
        let id = Mat::identity(f.clone(), 3);
        assert!(matches!(functor_rep(&[id], Functor::Sym2), Err(LinalgError::Sym2Char2)));
    }

    #[test]
    fn adjoint_dims_and_models() {
        let f3 = Field::new(3, 1).unwrap();
        // p does not divide m: full model, m^2 - 1.
        let d = functor_rep(&[Mat::identity(f3.clone(), 2)], Functor::Adjoint).unwrap();
        assert_eq!(d.mats[0].rows, 3);
        assert!(matches!(d.model, ModuleModel::AdjointFull { m: 2 }));
        // p divides m: quotient model, m^2 - 2.
        let d = functor_rep(&[Mat::identity(f3.clone(), 3)], Functor::Adjoint).unwrap();
        assert_eq!(d.mats[0].rows, 7);
        assert!(matches!(d.model, ModuleModel::AdjointQuotient { m: 3 }));
        // Explicit quotient request with p not dividing m is an error.
        assert!(adjoint_rep(&[Mat::identity(f3, 2)], true).is_err());
    }

    fn functor_is_homomorphism(f: &Arc<Field>, n: usize, functor: Functor) {
        let mut r = rng();
        for _ in 0..20 {
            let g = random_invertible(f, n, &mut r);
            let h = random_invertible(f, n, &mut r);
            let gh = g.mul(&h).unwrap();
            let d = functor_rep(&[g, h, gh], functor).unwrap();
            assert_eq!(d.mats[0].mul(&d.mats[1]).unwrap(), d.mats[2], "{functor:?} on {n}");
        }
    }

    #[test]
    fn functors_are_homomorphisms() {
        let f3 = Field::new(3, 1).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        functor_is_homomorphism(&f3, 4, Functor::Ext2);
        functor_is_homomorphism(&f3, 3, Functor::Sym2);
        functor_is_homomorphism(&f3, 4, Functor::Ext3);
        functor_is_homomorphism(&f3, 2, Functor::Adjoint);
        functor_is_homomorphism(&f3, 3, Functor::Adjoint);
        functor_is_homomorphism(&f4, 5, Functor::Ext2);
        functor_is_homomorphism(&f9, 3, Functor::TwistedTensorK2);
    }

    #[test]
    fn tensor_is_homomorphism_and_kronecker() {
        let f = Field::new(3, 1).unwrap();
        let mut r = rng();
        let a1 = random_invertible(&f, 2, &mut r);
        let a2 = random_invertible(&f, 2, &mut r);
        let b1 = random_invertible(&f, 3, &mut r);
        let b2 = random_invertible(&f, 3, &mut r);
        let d = tensor_rep(
            &[a1.clone(), a2.clone(), a1.mul(&a2).unwrap()],
            &[b1.clone(), b2.clone(), b1.mul(&b2).unwrap()],
        )
        .unwrap();
        assert_eq!(d.mats[0].rows, 6);
        assert_eq!(d.mats[0].mul(&d.mats[1]).unwrap(), d.mats[2]);
    }

    #[test]
    fn ext2_model_matches_matrix_action() {
        // M(v F(g)) = g^T M(v) g, exact, for random v and g.
        let f = Field::new(3, 1).unwrap();
        let mut r = rng();
        let basis = pairs_lt(4);
        for _ in 0..10 {
            let g = random_invertible(&f, 4, &mut r);
            let d = functor_rep(std::slice::from_ref(&g), Functor::Ext2).unwrap();
            let v: Vec<Elem> = (0..basis.len()).map(|_| r.gen_range(0..3)).collect();
            let img = d.mats[0].apply_row(&v).unwrap();
            let m_v = skew_of(&f, 4, &v);
            let m_img = skew_of(&f, 4, &img);
            assert_eq!(m_img, g.transpose().mul(&m_v).unwrap().mul(&g).unwrap());
        }
    }

    fn skew_of(f: &Arc<Field>, m: usize, v: &[Elem]) -> Mat {
        let mut a = Mat::zero(f.clone(), m, m);
        for ((i, j), &c) in pairs_lt(m).into_iter().zip(v.iter()) {
            a.set(i, j, c);
            a.set(j, i, f.neg(c));
        }
        a
    }

    #[test]
    fn sym2_model_matches_matrix_action() {
        let f = Field::new(5, 1).unwrap();
        let mut r = rng();
        let model = ModuleModel::Sym2 { m: 3 };
        for _ in 0..10 {
            let g = random_invertible(&f, 3, &mut r);
            let d = functor_rep(std::slice::from_ref(&g), Functor::Sym2).unwrap();
            let v: Vec<Elem> = (0..6).map(|_| r.gen_range(0..5)).collect();
            let img = d.mats[0].apply_row(&v).unwrap();
            assert_eq!(
                model.matrix_rank(&f, &img),
                Some(sym_of(&f, 3, &v, &g).rank()),
            );
            // Strong check: the rebuilt matrices agree entrywise.
            assert_eq!(sym_rebuild(&f, 3, &img), sym_of(&f, 3, &v, &g));
        }
    }

    fn sym_rebuild(f: &Arc<Field>, m: usize, v: &[Elem]) -> Mat {
        let two = f.add(1, 1);
        let mut a = Mat::zero(f.clone(), m, m);
        for ((i, j), &c) in pairs_le(m).into_iter().zip(v.iter()) {
            if i == j {
                a.set(i, i, f.mul(two, c));
            } else {
                a.set(i, j, c);
                a.set(j, i, c);
            }
        }
        a
    }

    fn sym_of(f: &Arc<Field>, m: usize, v: &[Elem], g: &Mat) -> Mat {
        let a = sym_rebuild(f, m, v);
        g.transpose().mul(&a).unwrap().mul(g).unwrap()
    }

    #[test]
    fn ext2_ranks_even_exhaustive_gf3() {
        let f = Field::new(3, 1).unwrap();
        let model = ModuleModel::Ext2 { m: 4 };
        for idx in 0..3u64.pow(6) {
            let v = index_to_vec(&f, 6, idx);
            let r = model.matrix_rank(&f, &v).unwrap();
            assert_eq!(r % 2, 0);
            if idx != 0 {
                assert!(r >= 2);
            } else {
                assert_eq!(r, 0);
            }
        }
    }

    #[test]
    fn adjoint_model_matches_conjugation() {
        let f = Field::new(3, 1).unwrap();
        let mut r = rng();
        // Full model, m = 2.
        for _ in 0..10 {
            let g = random_invertible(&f, 2, &mut r);
            let d = adjoint_rep(std::slice::from_ref(&g), false).unwrap();
            let v: Vec<Elem> = (0..3).map(|_| r.gen_range(0..3)).collect();
            let img = d.mats[0].apply_row(&v).unwrap();
            let a = adjoint_matrix(&f, 2, false, &v);
            assert_eq!(a.trace(), 0);
            let conj = g.inverse().unwrap().mul(&a).unwrap().mul(&g).unwrap();
            assert_eq!(adjoint_matrix(&f, 2, false, &img), conj);
        }
        // Quotient model, m = 3, p = 3.
        for _ in 0..10 {
            let g = random_invertible(&f, 3, &mut r);
            let d = adjoint_rep(std::slice::from_ref(&g), true).unwrap();
            let v: Vec<Elem> = (0..7).map(|_| r.gen_range(0..3)).collect();
            let img = d.mats[0].apply_row(&v).unwrap();
            let a = adjoint_matrix(&f, 3, true, &v);
            let conj = g.inverse().unwrap().mul(&a).unwrap().mul(&g).unwrap();
            assert_eq!(adjoint_matrix(&f, 3, true, &img), normalize_coset(&conj));
        }
    }

    #[test]
    fn adjoint_sl2_3_dim_and_trace() {
        let f = Field::new(3, 1).unwrap();
        let s = Mat::from_rows(f.clone(), &[vec![1, 1], vec![0, 1]]).unwrap();
        let t = Mat::from_rows(f.clone(), &[vec![0, 1], vec![2, 0]]).unwrap();
        let d = functor_rep(&[s, t], Functor::Adjoint).unwrap();
        assert_eq!(d.mats[0].rows, 3);
        for g in &d.mats {
            for row in 0..3 {
                let a = adjoint_matrix(&f, 2, false, g.row(row));
                assert_eq!(a.trace(), 0);
            }
        }
    }

    #[test]
    fn twisted_model_preserves_condition_and_rank() {
        let f9 = Field::new(3, 2).unwrap();
        let mut r = rng();
        for _ in 0..10 {
            let g = random_invertible(&f9, 3, &mut r);
            let d = functor_rep(std::slice::from_ref(&g), Functor::TwistedTensorK2).unwrap();
            let small = d.mats[0].field.clone();
            assert_eq!(small.q(), 3);
            let v: Vec<Elem> = (0..9).map(|_| r.gen_range(0..small.q())).collect();
            let img = d.mats[0].apply_row(&v).unwrap();
            let a = twisted_matrix(&d.model, &v);
            let b = twisted_matrix(&d.model, &img);
            // Defining condition A^(q0) = A^T on both.
            assert_eq!(a.entrywise_frobenius(1), a.transpose());
            assert_eq!(b.entrywise_frobenius(1), b.transpose());
            // b is the action image of a.
            let expected = g.transpose().mul(&a).unwrap().mul(&g.entrywise_frobenius(1)).unwrap();
            assert_eq!(b, expected);
            assert_eq!(a.rank(), b.rank());
        }
    }

    #[test]
    fn twisted_requires_even_degree() {
        let f = Field::new(3, 1).unwrap();
        let id = Mat::identity(f, 2);
        assert!(matches!(
            functor_rep(&[id], Functor::TwistedTensorK2),
            Err(LinalgError::TwistedNeedsSquareField(1))
        ));
    }

    #[test]
    fn alternating_form_eval() {
        let f = Field::new(3, 1).unwrap();
        let j = Mat::from_rows(
            f.clone(),
            &[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![2, 0, 0, 0], vec![0, 2, 0, 0]],
        )
        .unwrap();
        let form = Form::Alternating(j);
        let e0 = [1, 0, 0, 0];
        let f0 = [0, 0, 1, 0];
        assert_eq!(form.eval(&e0, &f0).unwrap(), 1);
        assert_eq!(form.eval(&f0, &e0).unwrap(), 2);
        assert_eq!(form.eval(&e0, &e0).unwrap(), 0);
    }

    #[test]
    fn hermitian_form_eval() {
        let f4 = Field::new(2, 2).unwrap();
        let g = Mat::from_rows(f4.clone(), &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        let form = Form::Hermitian(g);
        // B((1,0,0),(0,0,1)) = 1; norms land in GF(2).
        assert_eq!(form.eval(&[1, 0, 0], &[0, 0, 1]).unwrap(), 1);
        let omega = 2;
        let v = [omega, 1, 0];
        let n = form.eval(&v, &v).unwrap();
        assert!(n < 2, "Hermitian norm must lie in the fixed subfield");
    }

    #[test]
    fn quadratic_form_char2() {
        let f = Field::new(2, 1).unwrap();
        // Q(x,y) = xy: upper-triangular coefficient matrix E_01.
        let u = Mat::from_rows(f.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let form = Form::Quadratic(u);
        assert_eq!(form.eval_quadratic(&[1, 1]).unwrap(), 1);
        assert_eq!(form.eval_quadratic(&[1, 0]).unwrap(), 0);
    }
}
