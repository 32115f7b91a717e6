//! Orbits of a matrix group on the nonzero vectors of its module, the
//! permutation rank, and per-orbit invariants (matrix rank of model
//! matrices, form values).
//!
//! Vectors are addressed by their `VectorIndex`. Spaces up to `DENSE_CAP`
//! points get a dense visited bitmap; beyond that an orbit is enumerated
//! with hashed membership only (no ambient structure), which is all the
//! large stabilizer-orbit computations need.

use crate::gf::Elem;
use crate::linalg::{index_to_vec, space_size, vec_index, Form, LinalgError, ModuleModel};
use crate::repfactory::GroupRep;
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest space for which dense visited maps / distance arrays are used.
pub const DENSE_CAP: u64 = 1 << 26;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("orbit of the zero vector is not defined")]
    ZeroVector,
    #[error("space has {size} points, dense cap is {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("invariant {0} does not apply to this module model")]
    InapplicableInvariant(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone)]
pub struct OrbitData {
    /// Minimum-index member, decoded.
    pub representative: Vec<Elem>,
    pub rep_index: u64,
    pub size: u64,
    /// Sorted member indices.
    pub members: Vec<u64>,
}

impl OrbitData {
    pub fn from_members(rep: &GroupRep, mut members: Vec<u64>) -> OrbitData {
        members.sort_unstable();
        members.dedup();
        let rep_index = members[0];
        OrbitData {
            representative: index_to_vec(&rep.field, rep.n, rep_index),
            rep_index,
            size: members.len() as u64,
            members,
        }
    }

    #[inline]
    pub fn contains(&self, idx: u64) -> bool {
        self.members.binary_search(&idx).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegationClass {
    SelfPaired,
    PairedWith(usize),
}

#[derive(Debug)]
pub struct OrbitPartition {
    pub orbits: Vec<OrbitData>,
    /// Parallel to `orbits`.
    pub negation: Vec<NegationClass>,
    pub space: u64,
}

enum Visited {
    Dense(Vec<u64>),
    Sparse(std::collections::HashSet<u64>),
}

impl Visited {
    fn insert(&mut self, idx: u64) -> bool {
        match self {
            Visited::Dense(bits) => {
                let (w, b) = ((idx >> 6) as usize, idx & 63);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Visited::Sparse(set) => set.insert(idx),
        }
    }
}

/// Index of the negated vector. Identity in characteristic 2.
pub fn negate_index(rep: &GroupRep, idx: u64) -> u64 {
    if rep.field.p() == 2 {
        return idx;
    }
    let v = index_to_vec(&rep.field, rep.n, idx);
    let neg: Vec<Elem> = v.iter().map(|&x| rep.field.neg(x)).collect();
    vec_index(&rep.field, &neg)
}

fn orbit_bfs(rep: &GroupRep, start: u64, visited: &mut Visited) -> Result<Vec<u64>, OrbitError> {
    let mut members = Vec::new();
    let mut work = vec![start];
    visited.insert(start);
    while let Some(idx) = work.pop() {
        members.push(idx);
        let v = index_to_vec(&rep.field, rep.n, idx);
        for g in &rep.gens {
            let img = g.apply_row(&v)?;
            let j = vec_index(&rep.field, &img);
            if visited.insert(j) {
                work.push(j);
            }
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// Breadth-first closure of one vector under the generators. Uses the dense
/// visited map when the ambient space fits the cap, hashed membership
/// otherwise.
pub fn orbit_of(rep: &GroupRep, v: &[Elem]) -> Result<OrbitData, OrbitError> {
    let idx = vec_index(&rep.field, v);
    if idx == 0 {
        return Err(OrbitError::ZeroVector);
    }
    let space = space_size(&rep.field, rep.n)?;
    let mut visited = if space <= DENSE_CAP {
        Visited::Dense(vec![0u64; (space as usize + 63) / 64])
    } else {
        Visited::Sparse(std::collections::HashSet::new())
    };
    let members = orbit_bfs(rep, idx, &mut visited)?;
    Ok(OrbitData::from_members(rep, members))
}

/// All orbits on the nonzero vectors, with negation pairing.
pub fn orbit_partition(rep: &GroupRep) -> Result<OrbitPartition, OrbitError> {
    let space = space_size(&rep.field, rep.n)?;
    if space > DENSE_CAP {
        return Err(OrbitError::CapExceeded { size: space, cap: DENSE_CAP });
    }
    let mut visited = Visited::Dense(vec![0u64; (space as usize + 63) / 64]);
    visited.insert(0);
    let mut orbits = Vec::new();
    for start in 1..space {
        let fresh = match &visited {
            Visited::Dense(bits) => bits[(start >> 6) as usize] & (1 << (start & 63)) == 0,
            Visited::Sparse(_) => unreachable!(),
        };
        if !fresh {
            continue;
        }
        let members = orbit_bfs(rep, start, &mut visited)?;
        orbits.push(OrbitData::from_members(rep, members));
    }
    let total: u64 = orbits.iter().map(|o| o.size).sum();
    assert_eq!(total, space - 1, "orbits must partition the nonzero vectors");

    let mut negation = Vec::with_capacity(orbits.len());
    for o in &orbits {
        let neg = negate_index(rep, o.rep_index);
        if o.contains(neg) {
            negation.push(NegationClass::SelfPaired);
        } else {
            let partner = orbits
                .iter()
                .position(|other| other.contains(neg))
                .expect("negation image must lie in some orbit");
            negation.push(NegationClass::PairedWith(partner));
        }
    }
    // Pairing is symmetric by construction of orbits; check anyway.
    for (i, nc) in negation.iter().enumerate() {
        if let NegationClass::PairedWith(j) = nc {
            assert_eq!(negation[*j], NegationClass::PairedWith(i));
            assert_eq!(orbits[*j].size, orbits[i].size);
        }
    }
    Ok(OrbitPartition { orbits, negation, space })
}

/// 1 + number of nonzero orbits: the diagonal orbital plus one orbital per
/// orbit of the point stabilizer of 0.
pub fn perm_rank(partition: &OrbitPartition) -> usize {
    1 + partition.orbits.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    MatrixRank,
    QuadraticValue,
    HermitianNorm,
}

/// Evaluates an invariant over every member of the orbit and returns the set
/// of values seen. Genuine invariants come back as singletons.
pub fn orbit_invariant(
    rep: &GroupRep,
    orbit: &OrbitData,
    kind: InvariantKind,
) -> Result<BTreeSet<u64>, OrbitError> {
    let mut values = BTreeSet::new();
    match kind {
        InvariantKind::MatrixRank => {
            if matches!(rep.model, ModuleModel::Natural | ModuleModel::Ext3 { .. }) {
                return Err(OrbitError::InapplicableInvariant("matrix_rank"));
            }
            for &idx in &orbit.members {
                let v = index_to_vec(&rep.field, rep.n, idx);
                let r = rep
                    .model
                    .matrix_rank(&rep.field, &v)
                    .ok_or(OrbitError::InapplicableInvariant("matrix_rank"))?;
                values.insert(r as u64);
            }
        }
        InvariantKind::QuadraticValue => {
            let Some(form @ Form::Quadratic(_)) = &rep.form else {
                return Err(OrbitError::InapplicableInvariant("quadratic_value"));
            };
            for &idx in &orbit.members {
                let v = index_to_vec(&rep.field, rep.n, idx);
                values.insert(form.eval_quadratic(&v)? as u64);
            }
        }
        InvariantKind::HermitianNorm => {
            let Some(form @ Form::Hermitian(_)) = &rep.form else {
                return Err(OrbitError::InapplicableInvariant("hermitian_norm"));
            };
            for &idx in &orbit.members {
                let v = index_to_vec(&rep.field, rep.n, idx);
                values.insert(form.eval(&v, &v)? as u64);
            }
        }
    }
    Ok(values)
}
