//! Built-in matrix representations: symmetric/alternating permutation
//! modules and their fully deleted quotients, natural modules of SL/Sp/SU,
//! the 4-dimensional Suzuki groups, the 7-dimensional line stabilizer inside
//! the small Ree groups, scalar adjunction, and a plain-text generator file
//! format for everything else.

use crate::gf::{Elem, Field, FieldError};
use crate::linalg::{self, Form, Functor, LinalgError, Mat, ModuleModel};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("degree r must be at least 5, got {0}")]
    DegreeTooSmall(usize),
    #[error("unsupported parameters: {0}")]
    BadParams(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("generator {0} is not invertible")]
    SingularGenerator(usize),
    #[error("scalar subgroup order {order} does not divide {group}")]
    BadScalarOrder { order: u64, group: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepSource {
    Builtin,
    Ingested,
}

/// A matrix group given by generators, together with the module model its
/// vectors live in and optional form metadata for orbit invariants.
#[derive(Clone, Debug)]
pub struct GroupRep {
    pub field: Arc<Field>,
    pub n: usize,
    pub gens: Vec<Mat>,
    pub descriptor: String,
    pub contains_scalars: bool,
    pub source: RepSource,
    pub model: ModuleModel,
    pub form: Option<Form>,
}

impl GroupRep {
    fn new(
        field: Arc<Field>,
        n: usize,
        gens: Vec<Mat>,
        descriptor: String,
        source: RepSource,
    ) -> Result<GroupRep, RepError> {
        let rep = GroupRep {
            // The scalar group of GF(2) is trivial, so it is always present.
            contains_scalars: field.q() == 2,
            field,
            n,
            gens,
            descriptor,
            source,
            model: ModuleModel::Natural,
            form: None,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<(), RepError> {
        if self.gens.is_empty() {
            return Err(RepError::BadParams("representation has no generators".into()));
        }
        for (i, g) in self.gens.iter().enumerate() {
            if g.rows != self.n || g.cols != self.n || g.field != self.field {
                return Err(RepError::BadParams(format!(
                    "generator {i} has shape {}x{}, expected {}x{}",
                    g.rows, g.cols, self.n, self.n
                )));
            }
            if g.rank() != self.n {
                return Err(RepError::SingularGenerator(i));
            }
        }
        if self.contains_scalars && self.field.q() > 2 {
            let q = self.field.q() as u64;
            let has_primitive_scalar = self.gens.iter().any(|g| {
                g.as_scalar().is_some_and(|l| l != 0 && scalar_order(&self.field, l) == q - 1)
            });
            if !has_primitive_scalar {
                return Err(RepError::BadParams(
                    "contains_scalars set but no primitive scalar generator present".into(),
                ));
            }
        }
        Ok(())
    }

    /// Derived representation under one of the module functors. Form metadata
    /// does not transfer; scalar presence only survives trivially (q = 2).
    pub fn apply_functor(&self, functor: Functor) -> Result<GroupRep, RepError> {
        let derived = linalg::functor_rep(&self.gens, functor)?;
        let dim = derived.mats[0].rows;
        let field = derived.mats[0].field.clone();
        Ok(GroupRep {
            contains_scalars: field.q() == 2,
            field,
            n: dim,
            gens: derived.mats,
            descriptor: format!("{};functor={}", self.descriptor, functor.name()),
            source: self.source,
            model: derived.model,
            form: None,
        })
    }
}

fn scalar_order(field: &Field, lambda: Elem) -> u64 {
    let mut cur = lambda;
    let mut ord = 1u64;
    while cur != 1 {
        cur = field.mul(cur, lambda);
        ord += 1;
    }
    ord
}

/// Permutation given as images: perm[i] = image of point i (0-based).
fn perm_mat(field: &Arc<Field>, perm: &[usize]) -> Mat {
    let n = perm.len();
    let mut m = Mat::zero(field.clone(), n, n);
    for (i, &pi) in perm.iter().enumerate() {
        m.set(i, pi, 1);
    }
    m
}

fn cycle_perm(n: usize, cycle: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for w in 0..cycle.len() {
        p[cycle[w]] = cycle[(w + 1) % cycle.len()];
    }
    p
}

/// Standard generators as permutations of {0, .., r-1}:
/// S_r = <(1 2), (1 2 .. r)>; A_r = <(1 2 3), c> with c the r-cycle for odd r
/// and the (r-1)-cycle (2 .. r) for even r.
fn standard_perm_gens(r: usize, alternating_only: bool) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..r).collect();
    if alternating_only {
        let long = if r % 2 == 1 { cycle_perm(r, &all) } else { cycle_perm(r, &all[1..]) };
        vec![cycle_perm(r, &[0, 1, 2]), long]
    } else {
        vec![cycle_perm(r, &[0, 1]), cycle_perm(r, &all)]
    }
}

/// The full r-dimensional permutation module of S_r or A_r.
pub fn perm_rep(r: usize, alternating_only: bool, field: Arc<Field>) -> Result<GroupRep, RepError> {
    if r < 5 {
        return Err(RepError::DegreeTooSmall(r));
    }
    let gens: Vec<Mat> = standard_perm_gens(r, alternating_only)
        .iter()
        .map(|p| perm_mat(&field, p))
        .collect();
    let tag = if alternating_only { "alt" } else { "sym" };
    let descriptor = format!("perm:{tag},r={r},q={}", field.q());
    GroupRep::new(field, r, gens, descriptor, RepSource::Builtin)
}

/// Coordinates of a zero-sum vector of length r on the basis
/// e_i - e_{i+1}: the prefix sums of the entries. When char divides r the
/// scalar line sits inside the zero-sum space and coordinates are reduced to
/// the coset representative with last prefix sum zero.
pub fn fdpm_coords(field: &Field, full: &[Elem]) -> Result<Vec<Elem>, RepError> {
    let r = full.len();
    let mut prefix: Elem = 0;
    let mut c = Vec::with_capacity(r - 1);
    for &x in &full[..r - 1] {
        prefix = field.add(prefix, x);
        c.push(prefix);
    }
    if field.add(prefix, full[r - 1]) != 0 {
        return Err(RepError::BadParams("vector has nonzero coordinate sum".into()));
    }
    if r as u32 % field.p() == 0 {
        // Subtract the multiple of (1,2,..,r-1) that clears the last entry;
        // r-1 = -1 in the field, so the multiplier is the last entry itself.
        let last = c[r - 2];
        let mut out = Vec::with_capacity(r - 2);
        for (j, &cj) in c[..r - 2].iter().enumerate() {
            let step = int_elem(field, j as u64 + 1);
            out.push(field.add(cj, field.mul(last, step)));
        }
        Ok(out)
    } else {
        Ok(c)
    }
}

/// The field element 1 + 1 + .. + 1 (m times).
fn int_elem(field: &Field, m: u64) -> Elem {
    let m = (m % field.p() as u64) as u32;
    let mut acc = 0;
    for _ in 0..m {
        acc = field.add(acc, 1);
    }
    acc
}

/// Fully deleted permutation module: the action of S_r or A_r on the
/// zero-sum subspace of the permutation module, quotiented by the scalar
/// line when char divides r. Dimension r-1 or r-2 accordingly.
pub fn fully_deleted_rep(
    r: usize,
    alternating_only: bool,
    field: Arc<Field>,
) -> Result<GroupRep, RepError> {
    if r < 5 {
        return Err(RepError::DegreeTooSmall(r));
    }
    let quotient = r as u32 % field.p() == 0;
    let dim = if quotient { r - 2 } else { r - 1 };
    let mut gens = Vec::new();
    for p in standard_perm_gens(r, alternating_only) {
        let mut m = Mat::zero(field.clone(), dim, dim);
        for i in 0..dim {
            // Image of the basis vector e_i - e_{i+1} under the permutation.
            let mut full = vec![0; r];
            full[p[i]] = 1;
            full[p[i + 1]] = field.neg(1);
            // In the quotient model basis index i refers to the same wedge
            // of consecutive unit vectors; only the coordinate map changes.
            let coords = fdpm_coords(&field, &full)?;
            for (j, &c) in coords.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        gens.push(m);
    }
    let tag = if alternating_only { "alt" } else { "sym" };
    let descriptor = format!("fdpm:{tag},r={r},q={}", field.q());
    GroupRep::new(field, dim, gens, descriptor, RepSource::Builtin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalFamily {
    SL,
    Sp,
    SU,
}

/// Generators of SL_n(q): the transvection x_{12}(1), the monomial matrix of
/// the n-cycle with one sign flipped to fix the determinant, and (for q > 2)
/// diag(w, w^-1, 1, ..) for w a multiplicative generator.
fn sl_gens(field: &Arc<Field>, n: usize) -> Vec<Mat> {
    let mut x = Mat::identity(field.clone(), n);
    x.set(0, 1, 1);
    let mut mono = Mat::zero(field.clone(), n, n);
    for i in 0..n - 1 {
        mono.set(i, i + 1, 1);
    }
    // Sign of the n-cycle is (-1)^{n-1}.
    let corner = if n % 2 == 0 { field.neg(1) } else { 1 };
    mono.set(n - 1, 0, corner);
    let mut gens = vec![x, mono];
    if field.q() > 2 {
        let w = field.generator();
        let mut h = Mat::identity(field.clone(), n);
        h.set(0, 0, w);
        h.set(1, 1, field.inv(w).unwrap());
        gens.push(h);
    }
    gens
}

/// Natural modules of SL_n(q), Sp_n(q) (n = 2l, basis e_1..e_l, f_1..f_l,
/// B(e_i, f_j) = delta_ij), and SU_3(q) for q square (basis with Gram
/// antidiag(1,1,1), entries conjugated by x -> x^sqrt(q) in the second slot).
pub fn classical_natural(
    family: ClassicalFamily,
    n: usize,
    field: Arc<Field>,
) -> Result<GroupRep, RepError> {
    match family {
        ClassicalFamily::SL => {
            if n < 2 {
                return Err(RepError::BadParams("SL needs n >= 2".into()));
            }
            let gens = sl_gens(&field, n);
            let descriptor = format!("sl:n={n},q={}", field.q());
            GroupRep::new(field, n, gens, descriptor, RepSource::Builtin)
        }
        ClassicalFamily::Sp => {
            if n < 4 || n % 2 != 0 {
                return Err(RepError::BadParams("Sp needs even n >= 4".into()));
            }
            let l = n / 2;
            let mut gens = Vec::new();
            // SL_l embedded as g + g^{-T} preserves the form.
            for g in sl_gens(&field, l) {
                let ginvt = g.inverse()?.transpose();
                let mut big = Mat::zero(field.clone(), n, n);
                for i in 0..l {
                    for j in 0..l {
                        big.set(i, j, g.get(i, j));
                        big.set(l + i, l + j, ginvt.get(i, j));
                    }
                }
                gens.push(big);
            }
            if field.q() > 2 {
                let w = field.generator();
                let mut t = Mat::identity(field.clone(), n);
                t.set(0, 0, w);
                t.set(l, l, field.inv(w).unwrap());
                gens.push(t);
            }
            for lower in [false, true] {
                let mut s = Mat::identity(field.clone(), n);
                if lower {
                    s.set(l, 0, 1);
                } else {
                    s.set(0, l, 1);
                }
                gens.push(s);
            }
            let mut j = Mat::zero(field.clone(), n, n);
            for i in 0..l {
                j.set(i, l + i, 1);
                j.set(l + i, i, field.neg(1));
            }
            let descriptor = format!("sp:n={n},q={}", field.q());
            let mut rep = GroupRep::new(field, n, gens, descriptor, RepSource::Builtin)?;
            rep.form = Some(Form::Alternating(j));
            Ok(rep)
        }
        ClassicalFamily::SU => {
            if n != 3 {
                return Err(RepError::BadParams(
                    "SU natural module is built in for n = 3 only; ingest generators for larger n"
                        .into(),
                ));
            }
            if field.k() % 2 != 0 {
                return Err(RepError::BadParams("SU needs a square field (even k)".into()));
            }
            let q0 = (field.p() as u64).pow(field.k() / 2);
            let conj = |x: Elem| field.pow(x, q0);
            let mut gens = Vec::new();
            // Root elements u(a, b) with rows (1,0,0), (a,1,0), (b,-conj(a),1)
            // need trace(b) = -norm(a); search the field for a valid b.
            for j in 0..field.k() {
                let alpha = field.p().pow(j);
                let norm = field.mul(alpha, conj(alpha));
                let want = field.neg(norm);
                let beta = field
                    .elems()
                    .find(|&b| field.add(b, conj(b)) == want)
                    .expect("relative trace is surjective");
                let u = Mat::from_rows(
                    field.clone(),
                    &[
                        vec![1, 0, 0],
                        vec![alpha, 1, 0],
                        vec![beta, field.neg(conj(alpha)), 1],
                    ],
                )?;
                gens.push(u);
            }
            let w = field.generator();
            let h = Mat::from_rows(
                field.clone(),
                &[
                    vec![w, 0, 0],
                    vec![0, field.mul(conj(w), field.inv(w)?), 0],
                    vec![0, 0, field.inv(conj(w))?],
                ],
            )?;
            gens.push(h);
            let weyl = Mat::from_rows(
                field.clone(),
                &[vec![0, 0, 1], vec![0, field.neg(1), 0], vec![1, 0, 0]],
            )?;
            gens.push(weyl);
            let gram = Mat::from_rows(
                field.clone(),
                &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
            )?;
            let descriptor = format!("su:n=3,q={}", field.q());
            let mut rep = GroupRep::new(field, 3, gens, descriptor, RepSource::Builtin)?;
            rep.form = Some(Form::Hermitian(gram));
            Ok(rep)
        }
    }
}

/// Suzuki group Sz(q) = ²B₂(q), q = 2^{2m+1}, in its 4-dimensional symplectic
/// representation: the two-parameter lower unipotent family
///   S(a,b) = [[1,0,0,0],[a,1,0,0],[a^{t+1}+b, a^t,1,0],[f(a,b), b, a, 1]]
/// with t = 2^{m+1} and f(a,b) = a^{t+2} + ab + b^t, the torus
/// diag(u^{1+2^m}, u^{2^m}, u^{-2^m}, u^{-1-2^m}) and the antidiagonal
/// involution. Construction is cross-checked by verifying that every
/// generator permutes the q²+1 points of the ovoid.
pub fn suzuki_rep(field: Arc<Field>) -> Result<GroupRep, RepError> {
    if field.p() != 2 || field.k() % 2 == 0 || field.k() < 3 {
        return Err(RepError::BadParams(format!(
            "Suzuki groups need q = 2^(2m+1) with m >= 1, got GF({}^{})",
            field.p(),
            field.k()
        )));
    }
    let m = (field.k() - 1) / 2;
    let theta: u64 = 1 << (m + 1);
    let s = |a: Elem, b: Elem| -> Result<Mat, RepError> {
        let f = &field;
        let a_t = f.pow(a, theta);
        let fab = f.add(f.add(f.pow(a, theta + 2), f.mul(a, b)), f.pow(b, theta));
        Ok(Mat::from_rows(
            field.clone(),
            &[
                vec![1, 0, 0, 0],
                vec![a, 1, 0, 0],
                vec![f.add(f.mul(a_t, a), b), a_t, 1, 0],
                vec![fab, b, a, 1],
            ],
        )?)
    };
    let mut gens = Vec::new();
    for j in 0..field.k() {
        let x = field.p().pow(j);
        gens.push(s(x, 0)?);
        gens.push(s(0, x)?);
    }
    let w = field.generator();
    let e_hi = field.pow(w, (1 << m) + 1);
    let e_lo = field.pow(w, 1 << m);
    let torus = Mat::from_rows(
        field.clone(),
        &[
            vec![e_hi, 0, 0, 0],
            vec![0, e_lo, 0, 0],
            vec![0, 0, field.inv(e_lo)?, 0],
            vec![0, 0, 0, field.inv(e_hi)?],
        ],
    )?;
    gens.push(torus);
    let tau = Mat::from_rows(
        field.clone(),
        &[vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]],
    )?;
    gens.push(tau);

    // Ovoid: the point <(1,0,0,0)> plus the last rows of all S(a,b).
    let mut ovoid = std::collections::HashSet::new();
    ovoid.insert(projective_normalize(&field, &[1, 0, 0, 0]));
    for a in field.elems() {
        for b in field.elems() {
            let row = s(a, b)?.row(3).to_vec();
            ovoid.insert(projective_normalize(&field, &row));
        }
    }
    assert_eq!(ovoid.len() as u64, (field.q() as u64).pow(2) + 1);
    for (i, g) in gens.iter().enumerate() {
        for pt in &ovoid {
            let img = projective_normalize(&field, &g.apply_row(pt)?);
            assert!(ovoid.contains(&img), "generator {i} moves an ovoid point off the ovoid");
        }
        assert_eq!(g.det()?, 1);
    }

    let mut j = Mat::zero(field.clone(), 4, 4);
    for i in 0..4 {
        j.set(i, 3 - i, 1);
    }
    let descriptor = format!("suzuki:q={}", field.q());
    let mut rep = GroupRep::new(field, 4, gens, descriptor, RepSource::Builtin)?;
    rep.form = Some(Form::Alternating(j));
    Ok(rep)
}

fn projective_normalize(field: &Field, v: &[Elem]) -> Vec<Elem> {
    let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if lead == 0 {
        return v.to_vec();
    }
    let inv = field.inv(lead).unwrap();
    v.iter().map(|&x| field.mul(x, inv)).collect()
}

/// The stabilizer of a distinguished 1-space in the 7-dimensional module of
/// the small Ree group over GF(q), q = 3^{2m+1}, together with the basis
/// vectors the diameter argument tracks. Basis order e_{-3}, .., e_3; the
/// generators act by right multiplication and fix the line spanned by e_{-3}.
pub struct ReeStabilizer {
    pub rep: GroupRep,
    pub e_minus3: Vec<Elem>,
    pub e_minus2: Vec<Elem>,
    pub e_plus3: Vec<Elem>,
}

pub fn ree_stabilizer_rep(field: Arc<Field>) -> Result<ReeStabilizer, RepError> {
    if field.p() != 3 || field.k() % 2 == 0 || field.k() < 3 {
        return Err(RepError::BadParams(format!(
            "small Ree groups need q = 3^(2m+1) with m >= 1, got GF({}^{})",
            field.p(),
            field.k()
        )));
    }
    let m = (field.k() - 1) / 2;
    let neg = |x: i32| -> Elem {
        match x {
            0 => 0,
            1 => 1,
            -1 => field.neg(1),
            _ => unreachable!(),
        }
    };
    let rows = |data: [[i32; 7]; 7]| -> Result<Mat, RepError> {
        let rows: Vec<Vec<Elem>> = data.iter().map(|r| r.iter().map(|&x| neg(x)).collect()).collect();
        Ok(Mat::from_rows(field.clone(), &rows)?)
    };
    let a = rows([
        [1, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0],
        [-1, -1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 0],
        [1, 0, 1, -1, 1, 0, 0],
        [-1, 0, 1, -1, 1, 1, 0],
        [-1, -1, -1, 0, 0, -1, 1],
    ])?;
    let b = rows([
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [-1, 0, 1, 0, 0, 0, 0],
        [0, 1, 0, 1, 0, 0, 0],
        [1, 0, 0, 0, 1, 0, 0],
        [0, 1, 0, -1, 0, 1, 0],
        [1, 0, -1, 0, 1, 0, 1],
    ])?;
    let c = rows([
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 1, 0, 0],
        [1, 0, 1, 0, 0, 1, 0],
        [1, -1, 0, -1, 0, 0, 1],
    ])?;
    let d = ree_torus(&field, m, field.generator())?;
    let gens = vec![a, b, c, d];
    let unit = |pos: usize| -> Vec<Elem> {
        let mut v = vec![0; 7];
        v[pos] = 1;
        v
    };
    let e_minus3 = unit(0);
    let descriptor = format!("ree-stab:q={}", field.q());
    let rep = GroupRep::new(field.clone(), 7, gens, descriptor, RepSource::Builtin)?;
    for (i, g) in rep.gens.iter().enumerate() {
        let img = g.apply_row(&e_minus3)?;
        let lead = img[0];
        assert!(
            lead != 0 && img[1..].iter().all(|&x| x == 0),
            "stabilizer generator {i} moves the distinguished line"
        );
    }
    Ok(ReeStabilizer { rep, e_minus3, e_minus2: unit(1), e_plus3: unit(6) })
}

/// The torus family D(lambda) = diag(a^-1, b^-1, l^-1, 1, l, b, a) with
/// a = l^{3^{m+1}+2}, b = l^{3^{m+1}+1}.
pub fn ree_torus(field: &Arc<Field>, m: u32, lambda: Elem) -> Result<Mat, RepError> {
    if lambda == 0 {
        return Err(RepError::BadParams("torus parameter must be nonzero".into()));
    }
    let e = 3u64.pow(m + 1);
    let a = field.pow(lambda, e + 2);
    let b = field.pow(lambda, e + 1);
    let inv = |x: Elem| field.inv(x).unwrap();
    let diag = [inv(a), inv(b), inv(lambda), 1, lambda, b, a];
    let mut mat = Mat::zero(field.clone(), 7, 7);
    for (i, &x) in diag.iter().enumerate() {
        mat.set(i, i, x);
    }
    Ok(mat)
}

/// Appends a scalar generator: a multiplicative generator of the full scalar
/// group, or of its unique subgroup of the given order.
pub fn adjoin_scalars(rep: &GroupRep, subgroup_order: Option<u64>) -> Result<GroupRep, RepError> {
    let field = &rep.field;
    let group = (field.q() - 1) as u64;
    let order = subgroup_order.unwrap_or(group);
    if order == 0 || group % order != 0 {
        return Err(RepError::BadScalarOrder { order, group });
    }
    let lambda = field.pow(field.generator(), group / order);
    let mut out = rep.clone();
    out.gens.push(Mat::scalar(field.clone(), rep.n, lambda));
    if order == group {
        out.contains_scalars = true;
        out.descriptor = format!("{};scalars", rep.descriptor);
    } else {
        out.descriptor = format!("{};scalars={order}", rep.descriptor);
    }
    out.validate()?;
    Ok(out)
}

/// Spins probe vectors (unit vectors, differences of unit vectors, the
/// all-ones vector) to generator-closed subspaces. Returns true when every
/// probe spins to the full space; false means a proper invariant subspace
/// was exhibited. A true result is strong evidence, not a proof: an
/// invariant subspace avoiding every probe would go unnoticed.
pub fn spin_check_irreducible(rep: &GroupRep) -> Result<bool, RepError> {
    let n = rep.n;
    let mut seeds: Vec<Vec<Elem>> = Vec::new();
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        seeds.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = rep.field.neg(1);
            seeds.push(v);
        }
    }
    seeds.push(vec![1; n]);
    for seed in seeds {
        if spin_dim(rep, &seed)? < n {
            return Ok(false);
        }
    }
    Ok(true)
}

fn spin_dim(rep: &GroupRep, seed: &[Elem]) -> Result<usize, RepError> {
    let f = &rep.field;
    let n = rep.n;
    // Echelonized basis rows with pivot columns.
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut work: Vec<Vec<Elem>> = vec![seed.to_vec()];
    let reduce = |v: &mut Vec<Elem>, basis: &[Vec<Elem>], pivots: &[usize]| {
        for (row, &p) in basis.iter().zip(pivots.iter()) {
            if v[p] != 0 {
                let c = v[p];
                for (x, &y) in v.iter_mut().zip(row.iter()) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
    };
    while let Some(mut v) = work.pop() {
        reduce(&mut v, &basis, &pivots);
        let Some(p) = v.iter().position(|&x| x != 0) else { continue };
        let inv = f.inv(v[p]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for g in &rep.gens {
            work.push(g.apply_row(&v)?);
        }
        basis.push(v);
        pivots.push(p);
        if basis.len() == n {
            return Ok(n);
        }
    }
    Ok(basis.len())
}

/// Plain-text generator file format:
///   field p k [c0 .. ck]   modulus coefficients optional
///   dim n
///   name <free text>
///   scalars yes|no
/// then one or more blocks of a line "generator" followed by n lines of n
/// element indices. Blank lines and lines starting with # are ignored.
pub fn import_rep(path: &Path) -> Result<GroupRep, RepError> {
    let text = std::fs::read_to_string(path).map_err(|e| RepError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let pstr = path.display().to_string();
    parse_rep(&text, &pstr)
}

pub fn parse_rep(text: &str, path: &str) -> Result<GroupRep, RepError> {
    let err = |line: usize, msg: String| RepError::Parse { path: path.to_string(), line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, l) = lines.next().ok_or_else(|| err(0, "empty file".into()))?;
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.first() != Some(&"field") || toks.len() < 3 {
        return Err(err(ln, "expected `field p k [c0 .. ck]`".into()));
    }
    let p: u32 = toks[1].parse().map_err(|_| err(ln, format!("bad prime `{}`", toks[1])))?;
    let k: u32 = toks[2].parse().map_err(|_| err(ln, format!("bad exponent `{}`", toks[2])))?;
    let field = if toks.len() > 3 {
        let coeffs: Vec<u32> = toks[3..]
            .iter()
            .map(|t| t.parse().map_err(|_| err(ln, format!("bad modulus coefficient `{t}`"))))
            .collect::<Result<_, _>>()?;
        if coeffs.len() != k as usize + 1 {
            return Err(err(ln, format!("modulus needs {} coefficients, got {}", k + 1, coeffs.len())));
        }
        Field::with_modulus(p, k, Some(&coeffs)).map_err(|e| err(ln, e.to_string()))?
    } else {
        Field::new(p, k).map_err(|e| err(ln, e.to_string()))?
    };

    let (ln, l) = lines.next().ok_or_else(|| err(0, "missing dim line".into()))?;
    let n: usize = l
        .strip_prefix("dim")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(ln, "expected `dim n`".into()))?;

    let (ln, l) = lines.next().ok_or_else(|| err(0, "missing name line".into()))?;
    let name = l
        .strip_prefix("name")
        .map(str::trim)
        .ok_or_else(|| err(ln, "expected `name <text>`".into()))?
        .to_string();

    let (ln, l) = lines.next().ok_or_else(|| err(0, "missing scalars line".into()))?;
    let scalars = match l.strip_prefix("scalars").map(str::trim) {
        Some("yes") => true,
        Some("no") => false,
        _ => return Err(err(ln, "expected `scalars yes|no`".into())),
    };

    let mut gens = Vec::new();
    let mut lines = lines.peekable();
    while let Some((ln, l)) = lines.next() {
        if l != "generator" {
            return Err(err(ln, format!("expected `generator`, got `{l}`")));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| err(ln, format!("generator block needs {n} rows")))?;
            let row: Vec<Elem> = l
                .split_whitespace()
                .map(|t| {
                    let v: Elem = t.parse().map_err(|_| err(ln, format!("bad element `{t}`")))?;
                    if v >= field.q() {
                        return Err(err(ln, format!("element {v} out of range for field of size {}", field.q())));
                    }
                    Ok(v)
                })
                .collect::<Result<_, _>>()?;
            if row.len() != n {
                return Err(err(ln, format!("row has {} entries, expected {n}", row.len())));
            }
            rows.push(row);
        }
        gens.push(Mat::from_rows(field.clone(), &rows)?);
    }
    if gens.is_empty() {
        return Err(err(0, "no generator blocks".into()));
    }
    let mut rep = GroupRep::new(field, n, gens, name, RepSource::Ingested)?;
    rep.contains_scalars = scalars || rep.field.q() == 2;
    rep.validate()?;
    Ok(rep)
}

pub fn export_rep(rep: &GroupRep, path: &Path) -> Result<(), RepError> {
    let mut out = String::new();
    let coeffs: Vec<String> = rep.field.modulus().iter().map(|c| c.to_string()).collect();
    out.push_str(&format!("field {} {} {}\n", rep.field.p(), rep.field.k(), coeffs.join(" ")));
    out.push_str(&format!("dim {}\n", rep.n));
    out.push_str(&format!("name {}\n", rep.descriptor));
    out.push_str(&format!(
        "scalars {}\n",
        if rep.contains_scalars && rep.field.q() > 2 { "yes" } else { "no" }
    ));
    for g in &rep.gens {
        out.push_str("generator\n");
        for i in 0..g.rows {
            let row: Vec<String> = g.row(i).iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    std::fs::write(path, out).map_err(|e| RepError::Io { path: path.display().to_string(), source: e })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_perm_matrices() {
        let f = Field::new(2, 1).unwrap();
        let rep = perm_rep(5, false, f).unwrap();
        assert_eq!(rep.gens.len(), 2);
        for g in &rep.gens {
            assert_eq!(g.rows, 5);
            for i in 0..5 {
                assert_eq!(g.row(i).iter().filter(|&&x| x == 1).count(), 1);
                assert_eq!((0..5).filter(|&r| g.get(r, i) == 1).count(), 1);
            }
        }
    }

    #[test]
    fn a5_generators_are_even() {
        let f = Field::new(3, 1).unwrap();
        let rep = perm_rep(5, true, f).unwrap();
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
        }
        // r even uses the (r-1)-cycle, still even.
        let f = Field::new(3, 1).unwrap();
        let rep = perm_rep(6, true, f).unwrap();
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
        }
    }

    #[test]
    fn degree_bound() {
        let f = Field::new(2, 1).unwrap();
        assert!(matches!(perm_rep(4, false, f.clone()), Err(RepError::DegreeTooSmall(4))));
        assert!(matches!(fully_deleted_rep(4, false, f), Err(RepError::DegreeTooSmall(4))));
    }

    #[test]
    fn fdpm_dimensions() {
        for (r, p, expect) in [(6usize, 2u32, 4usize), (9, 2, 8), (5, 5, 3), (10, 5, 8), (7, 7, 5)] {
            let f = Field::new(p, 1).unwrap();
            let rep = fully_deleted_rep(r, false, f).unwrap();
            assert_eq!(rep.n, expect, "r={r}, p={p}");
        }
        // Rule check across a parameter sweep.
        for r in 5..=12 {
            for p in [2u32, 3, 5, 7] {
                let f = Field::new(p, 1).unwrap();
                let rep = fully_deleted_rep(r, false, f).unwrap();
                let expect = if r as u32 % p == 0 { r - 2 } else { r - 1 };
                assert_eq!(rep.n, expect);
            }
        }
    }

    #[test]
    fn fdpm_coords_respect_sum_zero() {
        let f = Field::new(2, 1).unwrap();
        // Cyclic image of (1,1,0,..) keeps coordinate sum zero.
        let full = vec![0, 1, 1, 0, 0, 0, 0, 0, 0];
        let c = fdpm_coords(&f, &full).unwrap();
        assert_eq!(c.len(), 8);
        assert!(fdpm_coords(&f, &[1, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn fdpm_action_matches_permutation_action() {
        // Coordinates of the permuted zero-sum vector equal the coordinate
        // row times the induced matrix, including the quotient case.
        for (r, p) in [(7usize, 3u32), (6, 3), (10, 5), (9, 3)] {
            let f = Field::new(p, 1).unwrap();
            let rep = fully_deleted_rep(r, false, f.clone()).unwrap();
            let perms = standard_perm_gens(r, false);
            for (g, perm) in rep.gens.iter().zip(perms.iter()) {
                let mut full = vec![0; r];
                full[0] = 1;
                full[1] = f.neg(1);
                full[2] = if r as u32 % p == 0 { 0 } else { 0 };
                let coords = fdpm_coords(&f, &full).unwrap();
                let via_matrix = g.apply_row(&coords).unwrap();
                let mut permuted = vec![0; r];
                for (i, &x) in full.iter().enumerate() {
                    permuted[perm[i]] = f.add(permuted[perm[i]], x);
                }
                assert_eq!(via_matrix, fdpm_coords(&f, &permuted).unwrap());
            }
        }
    }

    #[test]
    fn sl2_3_transitive_on_nonzero() {
        let f = Field::new(3, 1).unwrap();
        let rep = classical_natural(ClassicalFamily::SL, 2, f.clone()).unwrap();
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
        }
        let mut seen = std::collections::HashSet::new();
        let mut work = vec![vec![1, 0]];
        seen.insert(vec![1, 0]);
        while let Some(v) = work.pop() {
            for g in &rep.gens {
                let img = g.apply_row(&v).unwrap();
                if seen.insert(img.clone()) {
                    work.push(img);
                }
            }
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn sl_dets_are_one() {
        for (n, p, k) in [(3usize, 2u32, 1u32), (4, 2, 1), (5, 2, 1), (3, 3, 1), (2, 2, 2), (3, 5, 1)] {
            let f = Field::new(p, k).unwrap();
            let rep = classical_natural(ClassicalFamily::SL, n, f).unwrap();
            for g in &rep.gens {
                assert_eq!(g.det().unwrap(), 1, "n={n}, p={p}, k={k}");
            }
        }
    }

    #[test]
    fn sp4_preserves_form() {
        let f = Field::new(3, 1).unwrap();
        let rep = classical_natural(ClassicalFamily::Sp, 4, f.clone()).unwrap();
        let Some(Form::Alternating(j)) = &rep.form else { panic!("missing form") };
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let form = Form::Alternating(j.clone());
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
            for _ in 0..20 {
                let v: Vec<Elem> = (0..4).map(|_| rng.gen_range(0..3)).collect();
                let w: Vec<Elem> = (0..4).map(|_| rng.gen_range(0..3)).collect();
                let lhs = form.eval(&g.apply_row(&v).unwrap(), &g.apply_row(&w).unwrap()).unwrap();
                assert_eq!(lhs, form.eval(&v, &w).unwrap());
            }
        }
    }

    #[test]
    fn sp_param_validation() {
        let f = Field::new(3, 1).unwrap();
        assert!(classical_natural(ClassicalFamily::Sp, 3, f.clone()).is_err());
        assert!(classical_natural(ClassicalFamily::Sp, 2, f).is_err());
    }

    #[test]
    fn su3_norms_land_in_subfield() {
        let f = Field::new(2, 2).unwrap();
        let rep = classical_natural(ClassicalFamily::SU, 3, f.clone()).unwrap();
        let form = rep.form.clone().unwrap();
        let mut zero_norm = 0;
        for idx in 1..64u64 {
            let v = linalg::index_to_vec(&f, 3, idx);
            let norm = form.eval(&v, &v).unwrap();
            assert!(norm < 2, "norm {norm} outside GF(2)");
            if norm == 0 {
                zero_norm += 1;
            }
        }
        assert_eq!(zero_norm, 27);
        // Generators are isometries.
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
            for idx in 1..64u64 {
                let v = linalg::index_to_vec(&f, 3, idx);
                let gv = g.apply_row(&v).unwrap();
                assert_eq!(form.eval(&gv, &gv).unwrap(), form.eval(&v, &v).unwrap());
            }
        }
    }

    #[test]
    fn su_requires_square_field_and_n3() {
        let f = Field::new(3, 1).unwrap();
        assert!(classical_natural(ClassicalFamily::SU, 3, f).is_err());
        let f = Field::new(2, 2).unwrap();
        assert!(classical_natural(ClassicalFamily::SU, 4, f).is_err());
    }

    #[test]
    fn suzuki_q8_invertible_and_symplectic() {
        let f = Field::new(2, 3).unwrap();
        let rep = suzuki_rep(f.clone()).unwrap();
        assert_eq!(rep.n, 4);
        let Some(Form::Alternating(j)) = &rep.form else { panic!("missing form") };
        for g in &rep.gens {
            assert_eq!(g.det().unwrap(), 1);
            let preserved = g.mul(j).unwrap().mul(&g.transpose()).unwrap();
            assert_eq!(&preserved, j);
        }
    }

    #[test]
    fn suzuki_rejects_even_powers() {
        assert!(suzuki_rep(Field::new(2, 2).unwrap()).is_err());
        assert!(suzuki_rep(Field::new(2, 1).unwrap()).is_err());
        assert!(suzuki_rep(Field::new(3, 3).unwrap()).is_err());
    }

    #[test]
    fn ree_stabilizer_fixes_line() {
        let f = Field::new(3, 3).unwrap();
        let st = ree_stabilizer_rep(f.clone()).unwrap();
        assert_eq!(st.rep.n, 7);
        // Last row of A as printed.
        let a = &st.rep.gens[0];
        let neg1 = f.neg(1);
        assert_eq!(a.row(6), &[neg1, neg1, neg1, 0, 0, neg1, 1]);
        // D(1) is the identity.
        let d1 = ree_torus(&f, 1, 1).unwrap();
        assert!(d1.is_identity());
        for g in &st.rep.gens {
            let img = g.apply_row(&st.e_minus3).unwrap();
            assert!(img[0] != 0 && img[1..].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn adjoin_scalars_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let rep = classical_natural(ClassicalFamily::SL, 2, f5.clone()).unwrap();
        let with = adjoin_scalars(&rep, None).unwrap();
        assert!(with.contains_scalars);
        let last = with.gens.last().unwrap();
        assert_eq!(last.as_scalar(), Some(2));

        let a5 = perm_rep(5, true, f5.clone()).unwrap();
        let four = adjoin_scalars(&a5, Some(4)).unwrap();
        let last = four.gens.last().unwrap();
        assert_eq!(scalar_order(&f5, last.as_scalar().unwrap()), 4);
        // order 4 = q - 1 is the whole scalar group
        assert!(four.contains_scalars);

        let two = adjoin_scalars(&a5, Some(2)).unwrap();
        let last = two.gens.last().unwrap();
        assert_eq!(last.as_scalar(), Some(f5.neg(1)));
        assert!(!two.contains_scalars);

        assert!(matches!(
            adjoin_scalars(&a5, Some(3)),
            Err(RepError::BadScalarOrder { order: 3, group: 4 })
        ));
    }

    #[test]
    fn spin_check_examples() {
        let f3 = Field::new(3, 1).unwrap();
        let sl2 = classical_natural(ClassicalFamily::SL, 2, f3.clone()).unwrap();
        assert!(spin_check_irreducible(&sl2).unwrap());

        let f2 = Field::new(2, 1).unwrap();
        let s5 = perm_rep(5, false, f2).unwrap();
        assert!(!spin_check_irreducible(&s5).unwrap());

        // Block direct sum of two copies of the SL2(3) natural module.
        let mut gens = Vec::new();
        for g in &sl2.gens {
            let mut big = Mat::zero(f3.clone(), 4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    big.set(i, j, g.get(i, j));
                    big.set(2 + i, 2 + j, g.get(i, j));
                }
            }
            gens.push(big);
        }
        let sum = GroupRep::new(f3, 4, gens, "test:directsum".into(), RepSource::Builtin).unwrap();
        assert!(!spin_check_irreducible(&sum).unwrap());
    }

    #[test]
    fn fdpm_modules_spin_irreducibly() {
        for (r, p) in [(5usize, 2u32), (6, 2), (8, 2), (5, 3), (7, 3), (6, 3)] {
            let f = Field::new(p, 1).unwrap();
            let rep = fully_deleted_rep(r, false, f).unwrap();
            assert!(spin_check_irreducible(&rep).unwrap(), "fdpm r={r} p={p}");
        }
    }

    #[test]
    fn import_export_roundtrip() {
        let text = "# sample\nfield 3 1\ndim 2\nname test:gl2(3)\nscalars no\n\ngenerator\n1 1\n0 1\ngenerator\n0 1\n2 0\n";
        let rep = parse_rep(text, "inline").unwrap();
        assert_eq!(rep.n, 2);
        assert_eq!(rep.gens.len(), 2);
        assert_eq!(rep.descriptor, "test:gl2(3)");
        assert_eq!(rep.source, RepSource::Ingested);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.gens");
        export_rep(&rep, &path).unwrap();
        let back = import_rep(&path).unwrap();
        assert_eq!(back.gens.len(), rep.gens.len());
        for (a, b) in back.gens.iter().zip(rep.gens.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn import_rejects_bad_files() {
        let singular = "field 3 1\ndim 2\nname x\nscalars no\ngenerator\n1 1\n1 1\n";
        assert!(matches!(parse_rep(singular, "t"), Err(RepError::SingularGenerator(0))));

        let empty = "field 3 1\ndim 2\nname x\nscalars no\n";
        assert!(matches!(parse_rep(empty, "t"), Err(RepError::Parse { .. })));

        let out_of_range = "field 3 1\ndim 2\nname x\nscalars no\ngenerator\n1 3\n0 1\n";
        let err = parse_rep(out_of_range, "t").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");

        let bad_field = "field 4 1\ndim 2\nname x\nscalars no\ngenerator\n1 0\n0 1\n";
        assert!(parse_rep(bad_field, "t").is_err());
    }

    #[test]
    fn functor_application_updates_descriptor() {
        let f = Field::new(2, 1).unwrap();
        let rep = classical_natural(ClassicalFamily::SL, 5, f).unwrap();
        let ext = rep.apply_functor(Functor::Ext2).unwrap();
        assert_eq!(ext.n, 10);
        assert_eq!(ext.descriptor, "sl:n=5,q=2;functor=ext2");
        assert!(matches!(ext.model, ModuleModel::Ext2 { m: 5 }));
    }
}
