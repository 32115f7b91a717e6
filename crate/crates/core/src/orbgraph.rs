//! Orbital-graph diameters through the additive-Cayley formulation: the
//! orbital graph attached to an orbit O is the Cayley graph of (V, +) with
//! connection set O together with -O, so distances from 0 determine the whole
//! graph (translations are automorphisms) and the diameter equals the
//! eccentricity of 0.
//!
//! Characteristic 2 uses word-parallel level sets: translating a bitset by a
//! fixed XOR constant is a word swap plus an in-word bit permutation. Odd
//! characteristic walks frontiers over a byte distance array.

use crate::gf::Elem;
use crate::linalg::{index_to_vec, space_size, vec_index, LinalgError};
use crate::orbits::{negate_index, OrbitData, OrbitPartition, DENSE_CAP};
use crate::repfactory::GroupRep;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("orbital graph is disconnected ({reached} of {space} vertices reached); the action is not irreducible")]
    Disconnected { reached: u64, space: u64 },
    #[error("space has {size} points, dense cap is {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("the bitset strategy needs characteristic 2, this field has characteristic {p}")]
    StrategyUnavailable { p: u32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Orbit(#[from] crate::orbits::OrbitError),
}

/// BFS engine selection. `Auto` picks the bitset engine in characteristic 2
/// and the frontier engine otherwise; `Frontier` is always legal (the
/// frontier walk only uses field addition); `Bitset` requires p = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Frontier,
    Bitset,
}

fn use_bitset(rep: &GroupRep, strategy: Strategy) -> Result<bool, GraphError> {
    match strategy {
        Strategy::Auto => Ok(rep.field.p() == 2),
        Strategy::Frontier => Ok(false),
        Strategy::Bitset => {
            if rep.field.p() == 2 {
                Ok(true)
            } else {
                Err(GraphError::StrategyUnavailable { p: rep.field.p() })
            }
        }
    }
}

/// Diameter data of one (undirected) orbital graph.
#[derive(Debug, Clone)]
pub struct DiameterEntry {
    /// Indices into the partition this entry covers: one orbit, or a
    /// negation-paired couple sharing the same graph.
    pub orbit_ids: Vec<usize>,
    pub rep_index: u64,
    pub orbit_size: u64,
    /// |O union -O|.
    pub connection_size: u64,
    pub self_paired: bool,
    pub diameter: usize,
    /// profile[d] = number of vertices at distance d from 0.
    pub profile: Vec<u64>,
    /// Minimal vector index at maximal distance.
    pub witness_index: u64,
    pub witness: Vec<Elem>,
}

#[derive(Debug)]
pub struct DiameterResult {
    pub partition: OrbitPartition,
    pub entries: Vec<DiameterEntry>,
    pub rank: usize,
    pub orbital_diameter: usize,
}

/// O union -O as sorted indices, with the self-pairing flag.
fn connection_set(rep: &GroupRep, orbit: &OrbitData) -> (Vec<u64>, bool) {
    if rep.field.p() == 2 {
        return (orbit.members.clone(), true);
    }
    let mut negated: Vec<u64> = orbit.members.iter().map(|&m| negate_index(rep, m)).collect();
    negated.sort_unstable();
    if negated == orbit.members {
        (orbit.members.clone(), true)
    } else {
        let mut all = orbit.members.clone();
        all.extend_from_slice(&negated);
        all.sort_unstable();
        all.dedup();
        (all, false)
    }
}

/// Level sets over the whole space as packed 64-bit words.
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(bits: u64) -> Bitset {
        Bitset { words: vec![0; ((bits + 63) / 64) as usize] }
    }
    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }
    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words[(i >> 6) as usize] & (1 << (i & 63)) != 0
    }
    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
    fn or_assign(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }
    fn clear(&mut self) {
        self.words.fill(0);
    }
    fn and_not(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }
    fn min_set(&self) -> Option<u64> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some((w as u64) << 6 | word.trailing_zeros() as u64);
            }
        }
        None
    }

    /// self |= { x ^ s : x in src }. The XOR by s factors into a word-index
    /// XOR by s/64 and a bit permutation b -> b ^ (s mod 64), realized by
    /// delta swaps. Valid because the space size is a power of two here.
    fn or_xor_translate(&mut self, src: &Bitset, s: u64) {
        const MASKS: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0f0f_0f0f_0f0f_0f0f,
            0x00ff_00ff_00ff_00ff,
            0x0000_ffff_0000_ffff,
            0x0000_0000_ffff_ffff,
        ];
        let s_hi = (s >> 6) as usize;
        let s_lo = (s & 63) as u32;
        for (w, &word) in src.words.iter().enumerate() {
            if word == 0 {
                continue;
            }
            let mut x = word;
            for (j, &m) in MASKS.iter().enumerate() {
                let d = 1u32 << j;
                if s_lo & d != 0 {
                    x = ((x >> d) & m) | ((x & m) << d);
                }
            }
            self.words[w ^ s_hi] |= x;
        }
    }
}

/// Distance data from 0 in characteristic 2: per-level bitsets.
fn char2_levels(
    space: u64,
    conn: &[u64],
    stop_at: Option<u64>,
) -> (Vec<u64>, Bitset, Option<usize>) {
    let mut reached = Bitset::new(space);
    let mut frontier = Bitset::new(space);
    let mut next = Bitset::new(space);
    reached.set(0);
    frontier.set(0);
    let mut profile = vec![1u64];
    if stop_at == Some(0) {
        return (profile, frontier, Some(0));
    }
    loop {
        next.clear();
        for &s in conn {
            next.or_xor_translate(&frontier, s);
        }
        next.and_not(&reached);
        let count = next.count();
        if count == 0 {
            return (profile, frontier, None);
        }
        profile.push(count);
        reached.or_assign(&next);
        std::mem::swap(&mut frontier, &mut next);
        if let Some(t) = stop_at {
            if frontier.get(t) {
                let d = profile.len() - 1;
                return (profile, frontier, Some(d));
            }
        }
    }
}

/// Frontier BFS over a byte distance array. Default engine in odd
/// characteristic; legal in any characteristic (only uses field addition).
fn odd_char_distances(
    rep: &GroupRep,
    space: u64,
    conn: &[u64],
    stop_at: Option<u64>,
) -> Result<(Vec<u64>, Vec<u8>, Option<usize>), GraphError> {
    let f = &rep.field;
    let n = rep.n;
    let conn_vecs: Vec<Vec<Elem>> = conn.iter().map(|&s| index_to_vec(f, n, s)).collect();
    let mut dist = vec![u8::MAX; space as usize];
    dist[0] = 0;
    let mut frontier: Vec<u64> = vec![0];
    let mut profile = vec![1u64];
    if stop_at == Some(0) {
        return Ok((profile, dist, Some(0)));
    }
    let mut d: u8 = 0;
    while !frontier.is_empty() {
        assert!(d < u8::MAX - 1, "distance overflow");
        let mut next = Vec::new();
        for &v in &frontier {
            let vv = index_to_vec(f, n, v);
            for s in &conn_vecs {
                let w: Vec<Elem> = vv.iter().zip(s.iter()).map(|(&a, &b)| f.add(a, b)).collect();
                let wi = vec_index(f, &w);
                if dist[wi as usize] == u8::MAX {
                    dist[wi as usize] = d + 1;
                    next.push(wi);
                }
            }
        }
        d += 1;
        if next.is_empty() {
            break;
        }
        profile.push(next.len() as u64);
        if let Some(t) = stop_at {
            if dist[t as usize] != u8::MAX {
                let found = dist[t as usize] as usize;
                return Ok((profile, dist, Some(found)));
            }
        }
        frontier = next;
    }
    Ok((profile, dist, None))
}

/// BFS from 0 over the orbital graph of the given orbit. The profile covers
/// the whole space; failure to reach every vertex is reported as an error
/// (an irreducible action always yields connected orbital graphs).
pub fn orbital_diameter(rep: &GroupRep, orbit: &OrbitData) -> Result<DiameterEntry, GraphError> {
    orbital_diameter_tagged(rep, orbit, vec![0], Strategy::Auto)
}

pub fn orbital_diameter_with(
    rep: &GroupRep,
    orbit: &OrbitData,
    strategy: Strategy,
) -> Result<DiameterEntry, GraphError> {
    orbital_diameter_tagged(rep, orbit, vec![0], strategy)
}

fn orbital_diameter_tagged(
    rep: &GroupRep,
    orbit: &OrbitData,
    orbit_ids: Vec<usize>,
    strategy: Strategy,
) -> Result<DiameterEntry, GraphError> {
    let space = space_size(&rep.field, rep.n)?;
    if space > DENSE_CAP {
        return Err(GraphError::CapExceeded { size: space, cap: DENSE_CAP });
    }
    let (conn, self_paired) = connection_set(rep, orbit);
    let (profile, witness_index) = if use_bitset(rep, strategy)? {
        let (profile, last_level, _) = char2_levels(space, &conn, None);
        let w = last_level.min_set().expect("last level nonempty");
        (profile, w)
    } else {
        let (profile, dist, _) = odd_char_distances(rep, space, &conn, None)?;
        let dmax = (profile.len() - 1) as u8;
        let w = dist
            .iter()
            .position(|&x| x == dmax)
            .expect("some vertex attains the maximal distance") as u64;
        (profile, w)
    };
    let reached: u64 = profile.iter().sum();
    if reached != space {
        return Err(GraphError::Disconnected { reached, space });
    }
    let diameter = profile.len() - 1;
    assert_eq!(profile[0], 1);
    let entry = DiameterEntry {
        orbit_ids,
        rep_index: orbit.rep_index,
        orbit_size: orbit.size,
        connection_size: conn.len() as u64,
        self_paired,
        diameter,
        profile,
        witness_index,
        witness: index_to_vec(&rep.field, rep.n, witness_index),
    };
    Ok(entry)
}

/// Full pipeline: partition the nonzero vectors, compute one graph per
/// negation class, aggregate rank and the orbital diameter (the maximum of
/// the per-orbital diameters).
pub fn orbdiam_all(rep: &GroupRep) -> Result<DiameterResult, GraphError> {
    orbdiam_all_with(rep, Strategy::Auto)
}

pub fn orbdiam_all_with(rep: &GroupRep, strategy: Strategy) -> Result<DiameterResult, GraphError> {
    let partition = crate::orbits::orbit_partition(rep)?;
    let rank = crate::orbits::perm_rank(&partition);
    let mut entries: Vec<DiameterEntry> = Vec::new();
    for (i, orbit) in partition.orbits.iter().enumerate() {
        let ids = match partition.negation[i] {
            crate::orbits::NegationClass::SelfPaired => vec![i],
            crate::orbits::NegationClass::PairedWith(j) if j > i => vec![i, j],
            // Partner already produced the shared entry.
            crate::orbits::NegationClass::PairedWith(_) => continue,
        };
        entries.push(orbital_diameter_tagged(rep, orbit, ids, strategy)?);
    }
    let orbital_diameter = entries.iter().map(|e| e.diameter).max().unwrap_or(0);
    debug_assert!(orbital_diameter <= rank - 1, "diameter exceeds rank - 1");
    if rep.contains_scalars {
        debug_assert!(orbital_diameter <= rep.n, "diameter exceeds the dimension");
    }
    Ok(DiameterResult { partition, entries, rank, orbital_diameter })
}

/// Exact d(0, target) on the orbital graph of `orbit`, by BFS halting at the
/// target's level.
pub fn distance_to(rep: &GroupRep, orbit: &OrbitData, target: &[Elem]) -> Result<usize, GraphError> {
    let t = vec_index(&rep.field, target);
    if t == 0 {
        return Ok(0);
    }
    let space = space_size(&rep.field, rep.n)?;
    if space > DENSE_CAP {
        return Err(GraphError::CapExceeded { size: space, cap: DENSE_CAP });
    }
    let (conn, _) = connection_set(rep, orbit);
    let found = if rep.field.p() == 2 {
        char2_levels(space, &conn, Some(t)).2
    } else {
        odd_char_distances(rep, space, &conn, Some(t))?.2
    };
    match found {
        Some(d) => Ok(d),
        None => {
            let reached = if rep.field.p() == 2 {
                char2_levels(space, &conn, None).0.iter().sum()
            } else {
                odd_char_distances(rep, space, &conn, None)?.0.iter().sum()
            };
            Err(GraphError::Disconnected { reached, space })
        }
    }
}

/// For each target t, decides whether d(0, t) <= 2 on the orbital graph:
/// t in +-O, or t - o in +-O for some o in +-O. Never materializes the
/// space, so it works far beyond the BFS cap.
pub fn two_step_cover(rep: &GroupRep, orbit: &OrbitData, targets: &[Vec<Elem>]) -> Vec<bool> {
    let f = &rep.field;
    let n = rep.n;
    let mut pm = std::collections::HashSet::with_capacity(orbit.members.len() * 2);
    for &m in &orbit.members {
        pm.insert(m);
        pm.insert(negate_index(rep, m));
    }
    let t_vecs: Vec<Vec<Elem>> = targets.iter().cloned().collect();
    let mut result: Vec<bool> = t_vecs
        .iter()
        .map(|t| {
            let ti = vec_index(f, t);
            ti == 0 || pm.contains(&ti)
        })
        .collect();
    if result.iter().all(|&b| b) {
        return result;
    }
    for &oi in pm.clone().iter() {
        let o = index_to_vec(f, n, oi);
        let mut all_done = true;
        for (idx, t) in t_vecs.iter().enumerate() {
            if result[idx] {
                continue;
            }
            let diff: Vec<Elem> = t.iter().zip(o.iter()).map(|(&a, &b)| f.sub(a, b)).collect();
            if pm.contains(&vec_index(f, &diff)) {
                result[idx] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    result
}
