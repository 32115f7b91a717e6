//! Exact arithmetic in GF(p^k) for prime powers up to 2^16.
//!
//! Elements are canonical integer indices: the element with polynomial
//! coordinates c_0 + c_1 x + ... + c_{k-1} x^{k-1} over GF(p) has index
//! sum(c_i * p^i). Index 0 is the additive identity, index 1 the
//! multiplicative identity. Multiplication runs on exponent/log tables built
//! at construction; addition is coefficient arithmetic, backed by a full
//! q x q table when q <= 256 so the hot loops stay O(1).

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Canonical element encoding: an index in `[0, q)`.
pub type Elem = u32;

pub const MAX_Q: u64 = 1 << 16;
const ADD_TABLE_MAX_Q: u32 = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("k must be at least 1")]
    ZeroExponent,
    #[error("field size {0}^{1} exceeds the 2^16 table cap")]
    SizeCap(u32, u32),
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    ModulusDegree { expected: u32, got: u32 },
    #[error("modulus coefficient {0} is not reduced mod {1}")]
    ModulusCoeff(u32, u32),
    #[error("modulus is reducible over GF({0})")]
    Reducible(u32),
    #[error("no bundled modulus for GF({0}^{1}); pass one explicitly")]
    NoDefaultModulus(u32, u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element index {0} out of range for field of size {1}")]
    ElemRange(u32, u32),
    #[error("subfield exponent {0} does not divide {1}")]
    BadSubfield(u32, u32),
}

/// Bundled default moduli (Conway polynomials), little-endian coefficients,
/// for the non-prime field sizes the crate constructs without an explicit
/// modulus. Prime fields get x - g for the least primitive root g.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 14, &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 15, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 16, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (3, 7, &[1, 2, 1, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 0, 0, 1, 0, 0, 0, 0, 1]),
    (3, 9, &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1]),
    (3, 10, &[2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 2, 1, 0, 1]),
    (5, 5, &[2, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[2, 3, 0, 1]),
    (7, 4, &[5, 3, 1, 0, 1]),
    (7, 5, &[4, 1, 0, 0, 0, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[4, 1, 0, 1]),
    (11, 4, &[2, 1, 0, 0, 1]),
    (13, 2, &[2, 12, 1]),
    (13, 3, &[6, 1, 0, 1]),
    (13, 4, &[2, 1, 1, 0, 1]),
];

/// A finite field GF(p^k) with a fixed modulus polynomial and precomputed
/// operation tables. Immutable after construction; share via `Arc`.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for 0 <= i < q-1, g the stored multiplicative generator.
    exp: Vec<u32>,
    /// log[a] for a in 1..q, with log[exp[i]] = i.
    log: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    /// Full addition table when q <= 256, row-major a*q + b.
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(GF({}^{}), modulus {:?})", self.p, self.k, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over GF(p) as little-endian coefficient vectors.
mod poly {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        assert_eq!(m[dm], 1, "modulus must be monic");
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for i in 0..=dm {
                let idx = shift + i;
                let sub = (lead as u64 * m[i] as u64) % p as u64;
                r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        out
    }

    /// Exhaustive trial division by every monic polynomial of degree
    /// 1..=deg/2. Fine for the k <= 16 cap.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        if deg == 1 {
            return true;
        }
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for code in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    div.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                div.push(1);
                if rem(m, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Construct GF(p^k) with the bundled default modulus.
    pub fn new(p: u32, k: u32) -> Result<Arc<Field>, FieldError> {
        Self::with_modulus(p, k, None)
    }

    pub fn with_modulus(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Arc<Field>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q *= p as u64;
            if q > MAX_Q {
                return Err(FieldError::SizeCap(p, k));
            }
        }
        let q = q as u32;

        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                let mut m = m.to_vec();
                for &c in &m {
                    if c >= p {
                        return Err(FieldError::ModulusCoeff(c, p));
                    }
                }
                poly::trim(&mut m);
                if m.len() != k as usize + 1 || m[k as usize] != 1 {
                    return Err(FieldError::ModulusDegree {
                        expected: k,
                        got: m.len().saturating_sub(1) as u32,
                    });
                }
                if !poly::is_irreducible(&m, p) {
                    return Err(FieldError::Reducible(p));
                }
                m
            }
            None => {
                if k == 1 {
                    let g = least_primitive_root(p);
                    vec![p - g, 1]
                } else {
                    let m = DEFAULT_MODULI
                        .iter()
                        .find(|&&(dp, dk, _)| dp == p && dk == k)
                        .map(|&(_, _, m)| m.to_vec())
                        .ok_or(FieldError::NoDefaultModulus(p, k))?;
                    debug_assert!(poly::is_irreducible(&m, p));
                    m
                }
            }
        };

        let mut f = Field {
            p,
            k,
            q,
            modulus,
            exp: vec![],
            log: vec![],
            neg: vec![],
            inv: vec![],
            add_table: None,
        };
        f.build_tables();
        Ok(Arc::new(f))
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        self.neg = (0..self.q).map(|a| self.add_raw(a, 0, true)).collect();
        if self.q <= ADD_TABLE_MAX_Q {
            let mut t = vec![0u32; q * q];
            for a in 0..self.q {
                for b in 0..self.q {
                    t[(a as usize) * q + b as usize] = self.add_raw(a, b, false);
                }
            }
            self.add_table = Some(t);
        }

        // Find a multiplicative generator (for a primitive modulus this is x
        // itself, tried first) and lay out exp/log. GF(2) has the trivial
        // group: exp = [1] and 1 is its own generator.
        if self.q == 2 {
            self.exp = vec![1];
        }
        let mut candidates: Vec<u32> = Vec::new();
        if self.k > 1 {
            candidates.push(self.p);
        }
        candidates.extend(2..self.q);
        'cand: for g in candidates {
            if g == 0 || g == 1 || self.exp.len() == q - 1 {
                break;
            }
            let mut exp = Vec::with_capacity(q - 1);
            let mut cur: u32 = 1;
            for _ in 0..q - 1 {
                exp.push(cur);
                cur = self.mul_raw(cur, g);
                if cur == 1 && exp.len() < q - 1 {
                    continue 'cand;
                }
            }
            assert_eq!(cur, 1);
            self.exp = exp;
            break;
        }
        assert_eq!(self.exp.len(), q - 1, "no multiplicative generator found");
        self.log = vec![u32::MAX; q];
        for (i, &a) in self.exp.iter().enumerate() {
            self.log[a as usize] = i as u32;
        }
        self.inv = vec![0; q];
        for a in 1..self.q {
            let l = self.log[a as usize];
            self.inv[a as usize] = self.exp[((self.q - 1 - l) % (self.q - 1)) as usize];
        }
    }

    /// Digitwise base-p addition (or negation of `a` when `negate`).
    fn add_raw(&self, a: u32, b: u32, negate: bool) -> u32 {
        let (mut a, mut b, mut out, mut pw) = (a, b, 0u32, 1u32);
        for _ in 0..self.k {
            let da = a % self.p;
            let db = b % self.p;
            let d = if negate { (self.p - da) % self.p } else { (da + db) % self.p };
            out += d * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        out
    }

    /// Polynomial multiplication mod the modulus, used only to seed tables.
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let prod = poly::mul(&pa, &pb, self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        self.undigits(&r)
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The multiplicative generator the exp/log tables are built on.
    #[inline]
    pub fn generator(&self) -> Elem {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn check_elem(&self, a: Elem) -> Result<(), FieldError> {
        if a < self.q {
            Ok(())
        } else {
            Err(FieldError::ElemRange(a, self.q))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        match &self.add_table {
            Some(t) => t[(a as usize) * self.q as usize + b as usize],
            None => self.add_raw(a, b, false),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        debug_assert!(a < self.q);
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        let m = self.q - 1;
        self.exp[(if s >= m { s - m } else { s }) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        self.check_elem(a)?;
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        debug_assert!(a < self.q);
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let m = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % m)) % m) as usize]
    }

    /// a^(p^i), the i-th power of the Frobenius automorphism. Requires 0 <= i < k.
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        debug_assert!(i < self.k, "frobenius power out of range");
        self.pow(a, (self.p as u64).pow(i))
    }

    /// Relative trace and norm down to the subfield GF(p^sub_k).
    /// Values are returned in this field's encoding; both are checked to be
    /// fixed by the subfield's Frobenius.
    pub fn trace_norm_to(&self, a: Elem, sub_k: u32) -> Result<(Elem, Elem), FieldError> {
        self.check_elem(a)?;
        if sub_k == 0 || self.k % sub_k != 0 {
            return Err(FieldError::BadSubfield(sub_k, self.k));
        }
        let steps = self.k / sub_k;
        let (mut tr, mut nm) = (0, 1);
        let mut conj = a;
        for _ in 0..steps {
            tr = self.add(tr, conj);
            nm = self.mul(nm, conj);
            conj = self.pow(conj, (self.p as u64).pow(sub_k));
        }
        debug_assert_eq!(conj, a);
        let fix = (self.p as u64).pow(sub_k);
        assert_eq!(self.pow(tr, fix), tr, "trace not in subfield");
        assert_eq!(self.pow(nm, fix), nm, "norm not in subfield");
        Ok((tr, nm))
    }

    /// Iterator over all element indices.
    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    'outer: for g in 2..p {
        let mut cur = 1u64;
        for _ in 0..p - 2 {
            cur = cur * g as u64 % p as u64;
            if cur == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root mod {p}")
}

/// A field embedding GF(p^t) -> GF(p^k) for t | k, as a lookup table on
/// element indices. Built by locating a root of the small field's modulus
/// inside the big field, so it is a ring homomorphism by construction and
/// works for any pair of moduli.
pub struct SubfieldMap {
    /// to_big[a] for a in the small field.
    pub to_big: Vec<Elem>,
    /// from_big[b] = Some(a) when b lies in the embedded subfield.
    pub from_big: Vec<Option<Elem>>,
}

impl SubfieldMap {
    pub fn build(small: &Field, big: &Field) -> Result<SubfieldMap, FieldError> {
        if small.p() != big.p() || big.k() % small.k() != 0 {
            return Err(FieldError::BadSubfield(small.k(), big.k()));
        }
        let t = small.k();
        let fix = (big.p() as u64).pow(t);
        // beta: element of the t-dimensional subfield that is a root of the
        // small modulus. Evaluate the modulus (prime-field coefficients embed
        // as indices 0..p) by Horner.
        let mut beta = None;
        for b in big.elems() {
            if big.pow(b, fix) != b {
                continue;
            }
            let mut acc: Elem = 0;
            for &c in small.modulus().iter().rev() {
                acc = big.add(big.mul(acc, b), c);
            }
            if acc == 0 {
                beta = Some(b);
                break;
            }
        }
        let beta = beta.expect("subfield root of small modulus must exist");
        // Embed coefficientwise: sum c_i beta^i.
        let mut to_big = Vec::with_capacity(small.q() as usize);
        for a in small.elems() {
            let digits = small.digits(a);
            let mut acc: Elem = 0;
            let mut pw: Elem = 1;
            for &c in &digits {
                acc = big.add(acc, big.mul(c, pw));
                pw = big.mul(pw, beta);
            }
            to_big.push(acc);
        }
        let mut from_big = vec![None; big.q() as usize];
        for (a, &b) in to_big.iter().enumerate() {
            assert!(from_big[b as usize].is_none(), "embedding not injective");
            from_big[b as usize] = Some(a as Elem);
        }
        Ok(SubfieldMap { to_big, from_big })
    }
}
