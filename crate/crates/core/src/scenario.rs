//! Named verification scenarios: each runs a fixed list of desk-scale cases,
//! compares computed ranks and diameters against the registry (or against a
//! stated inequality for certificate cases), and reports per-case pass/fail
//! with wall-clock times. Cases run in parallel; output order is the case
//! list order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::bounds::{registry_expected, DiamExpectation, RegistryQuery};
use crate::descriptor::Descriptor;
use crate::gf::{Elem, Field};
use crate::linalg::{adjoint_coords, Mat};
use crate::orbgraph::{distance_to, orbdiam_all, orbital_diameter, two_step_cover};
use crate::orbits::{orbit_invariant, orbit_of, InvariantKind, OrbitData};
use crate::repfactory::{
    adjoin_scalars, fdpm_coords, import_rep, ree_stabilizer_rep, GroupRep,
};

pub const SCENARIOS: &[&str] = &[
    "fdpm-classification",
    "natural-modules",
    "defchar-small",
    "ree-orbit",
    "permalt-witness",
    "adjoint-sl3",
    "sporadic-ingest",
];

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`; known: {}", SCENARIOS.join(", "))]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
    Skipped,
}

/// Everything a bound checker needs to cross-examine one computed case.
#[derive(Debug, Clone, Serialize)]
pub struct BoundProbe {
    /// Stabilizer name in the form `Stabilizer::parse` accepts.
    pub stabilizer: String,
    pub fdpm: bool,
    pub natural: bool,
    pub defining: bool,
    pub n: u32,
    pub q0: u64,
    pub rank: Option<usize>,
    pub scalars: bool,
    /// Orbital diameter when `exact`, otherwise a certified lower bound.
    pub diameter: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub descriptor: String,
    pub expected: String,
    pub computed: String,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub millis: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<BoundProbe>,
}

#[derive(Debug, Serialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub cases: Vec<CaseResult>,
}

impl ScenarioResult {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != CaseStatus::Fail)
    }

    /// One line per case, in case-list order.
    pub fn lines(&self) -> Vec<String> {
        self.cases
            .iter()
            .map(|c| match c.status {
                CaseStatus::Pass => format!(
                    "PASS {} [{} ms] expected {}; computed {}",
                    c.descriptor, c.millis, c.expected, c.computed
                ),
                CaseStatus::Fail => format!(
                    "FAIL {} [{} ms] expected {}; computed {}",
                    c.descriptor, c.millis, c.expected, c.computed
                ),
                CaseStatus::Skipped => format!(
                    "SKIP {} ({})",
                    c.descriptor,
                    c.reason.as_deref().unwrap_or("no reason recorded")
                ),
            })
            .collect()
    }
}

enum Outcome {
    Done {
        expected: String,
        computed: String,
        pass: bool,
        probe: Option<BoundProbe>,
    },
    Skip {
        reason: String,
    },
}

struct Case {
    descriptor: String,
    run: Box<dyn FnOnce() -> Outcome + Send>,
}

fn run_cases(scenario: &str, cases: Vec<Case>) -> ScenarioResult {
    let mut results: Vec<Option<CaseResult>> = cases.iter().map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = cases
            .into_iter()
            .map(|c| {
                s.spawn(move || {
                    let start = Instant::now();
                    let outcome = (c.run)();
                    (c.descriptor, outcome, start.elapsed().as_millis())
                })
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            let (descriptor, outcome, millis) = h.join().expect("scenario case panicked");
            results[i] = Some(match outcome {
                Outcome::Done { expected, computed, pass, probe } => CaseResult {
                    descriptor,
                    expected,
                    computed,
                    status: if pass { CaseStatus::Pass } else { CaseStatus::Fail },
                    reason: None,
                    millis,
                    probe,
                },
                Outcome::Skip { reason } => CaseResult {
                    descriptor,
                    expected: String::new(),
                    computed: String::new(),
                    status: CaseStatus::Skipped,
                    reason: Some(reason),
                    millis,
                    probe: None,
                },
            });
        }
    });
    ScenarioResult {
        scenario: scenario.to_string(),
        cases: results.into_iter().map(|r| r.expect("case slot filled")).collect(),
    }
}

fn fail(msg: impl Into<String>) -> Outcome {
    Outcome::Done {
        expected: "a completed computation".into(),
        computed: msg.into(),
        pass: false,
        probe: None,
    }
}

/// Compares a computed (rank, diameter) pair against the registry entry the
/// query selects. Exact integer comparison.
fn judge(query: &RegistryQuery, rank: Option<usize>, diameter: usize) -> (String, String, bool) {
    let computed = match rank {
        Some(r) => format!("rank {r}, diameter {diameter}"),
        None => format!("diameter {diameter}"),
    };
    let Some(entry) = registry_expected(query) else {
        return ("a matching registry entry".into(), computed, false);
    };
    let mut expected = Vec::new();
    let mut pass = true;
    if let Some(er) = entry.rank {
        expected.push(format!("rank {er}"));
        if let Some(r) = rank {
            pass &= r == er as usize;
        }
    }
    match entry.diameter {
        Some(DiamExpectation::Eq(d)) => {
            expected.push(format!("diameter {d}"));
            pass &= diameter == d as usize;
        }
        Some(DiamExpectation::Ge(d)) => {
            expected.push(format!("diameter >= {d}"));
            pass &= diameter >= d as usize;
        }
        Some(DiamExpectation::Le(d)) => {
            expected.push(format!("diameter <= {d}"));
            pass &= diameter <= d as usize;
        }
        Some(DiamExpectation::Candidate) | None => {
            expected.push("no asserted diameter".into());
        }
    }
    (expected.join(", "), computed, pass)
}

fn diam_case(
    descriptor: String,
    query_of: impl FnOnce(&GroupRep) -> RegistryQuery + Send + 'static,
    probe_of: impl FnOnce(&GroupRep, usize, usize) -> Option<BoundProbe> + Send + 'static,
) -> Case {
    let d = descriptor.clone();
    Case {
        descriptor,
        run: Box::new(move || {
            let rep = match Descriptor::parse(&d).map_err(|e| e.to_string()).and_then(|p| {
                p.build().map_err(|e| e.to_string())
            }) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let res = match orbdiam_all(&rep) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let query = query_of(&rep);
            let (expected, computed, pass) =
                judge(&query, Some(res.rank), res.orbital_diameter);
            let probe = probe_of(&rep, res.rank, res.orbital_diameter);
            Outcome::Done { expected, computed, pass, probe }
        }),
    }
}

// ---------------------------------------------------------------------------
// Scenario case lists

fn fdpm_cases() -> Vec<Case> {
    // (5,5): an order-4 scalar subgroup is enough; (5,4): the non-prime
    // field needs the scalar group for the affine group to be primitive.
    let params: &[(u64, u64, &str)] = &[
        (6, 2, ""),
        (5, 2, ""),
        (8, 2, ""),
        (10, 2, ""),
        (6, 3, ""),
        (5, 5, ";scalars=4"),
        (5, 3, ""),
        (5, 4, ";scalars"),
    ];
    params
        .iter()
        .map(|&(r, q, scalars)| {
            let d = format!("fdpm:r={r},q={q}{scalars}");
            diam_case(
                d,
                move |rep| RegistryQuery {
                    family: "alt".into(),
                    r: Some(r as u32),
                    n: Some(rep.n as u32),
                    q0: Some(q),
                    module: Some("fdpm".into()),
                    scalars: rep.contains_scalars,
                    ..Default::default()
                },
                move |rep, rank, diam| {
                    Some(BoundProbe {
                        stabilizer: format!("A{r}"),
                        fdpm: true,
                        natural: false,
                        defining: false,
                        n: rep.n as u32,
                        q0: q,
                        rank: Some(rank),
                        scalars: rep.contains_scalars,
                        diameter: diam as u64,
                        exact: true,
                    })
                },
            )
        })
        .collect()
}

fn natural_cases() -> Vec<Case> {
    struct Nat {
        descriptor: &'static str,
        family: &'static str,
        q0: u64,
        stabilizer: &'static str,
        natural: bool,
    }
    let list = [
        Nat { descriptor: "sl:n=2,q=3", family: "SL", q0: 3, stabilizer: "PSL2(3)", natural: true },
        Nat { descriptor: "sl:n=2,q=8", family: "SL", q0: 8, stabilizer: "PSL2(8)", natural: true },
        Nat { descriptor: "sp:n=4,q=3", family: "Sp", q0: 3, stabilizer: "PSp4(3)", natural: true },
        Nat { descriptor: "su:n=3,q=4", family: "SU", q0: 4, stabilizer: "PSU3(2)", natural: true },
        Nat {
            descriptor: "sl:n=4,q=2;functor=ext2",
            family: "Omega",
            q0: 2,
            stabilizer: "PSL4(2)",
            natural: false,
        },
        Nat {
            descriptor: "sl:n=2,q=5;functor=sym2;scalars",
            family: "Omega",
            q0: 5,
            stabilizer: "PSL2(5)",
            natural: false,
        },
    ];
    list.into_iter()
        .map(|nat| {
            diam_case(
                nat.descriptor.to_string(),
                move |rep| RegistryQuery {
                    family: nat.family.into(),
                    n: Some(rep.n as u32),
                    q0: Some(nat.q0),
                    module: Some("natural".into()),
                    scalars: rep.contains_scalars,
                    ..Default::default()
                },
                move |rep, rank, diam| {
                    Some(BoundProbe {
                        stabilizer: nat.stabilizer.into(),
                        fdpm: false,
                        natural: nat.natural,
                        defining: true,
                        n: rep.n as u32,
                        q0: nat.q0,
                        rank: Some(rank),
                        scalars: rep.contains_scalars,
                        diameter: diam as u64,
                        exact: true,
                    })
                },
            )
        })
        .collect()
}

fn defchar_cases() -> Vec<Case> {
    let wedge = diam_case(
        "sl:n=5,q=2;functor=ext2".into(),
        |rep| RegistryQuery {
            family: "A".into(),
            l: Some(4),
            n: Some(rep.n as u32),
            q0: Some(2),
            weight: Some("w2".into()),
            scalars: rep.contains_scalars,
            ..Default::default()
        },
        |rep, rank, diam| {
            Some(BoundProbe {
                stabilizer: "PSL5(2)".into(),
                fdpm: false,
                natural: false,
                defining: true,
                n: rep.n as u32,
                q0: 2,
                rank: Some(rank),
                scalars: rep.contains_scalars,
                diameter: diam as u64,
                exact: true,
            })
        },
    );

    // rank, diameter and the size of the smaller orbit all pinned
    let suzuki = Case {
        descriptor: "suzuki:q=8;scalars".into(),
        run: Box::new(|| {
            let rep = match Descriptor::parse("suzuki:q=8;scalars")
                .map_err(|e| e.to_string())
                .and_then(|p| p.build().map_err(|e| e.to_string()))
            {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let res = match orbdiam_all(&rep) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let min_orbit = res.partition.orbits.iter().map(|o| o.size).min().unwrap_or(0);
            let query = RegistryQuery {
                family: "2B2".into(),
                n: Some(4),
                q: Some(8),
                q0: Some(8),
                weight: Some("w1".into()),
                scalars: rep.contains_scalars,
                ..Default::default()
            };
            let (expected, computed, pass) = judge(&query, Some(res.rank), res.orbital_diameter);
            let expected = format!("{expected}, smaller orbit 455");
            let computed = format!("{computed}, smaller orbit {min_orbit}");
            let probe = Some(BoundProbe {
                stabilizer: "2B2(8)".into(),
                fdpm: false,
                natural: true,
                defining: true,
                n: 4,
                q0: 8,
                rank: Some(res.rank),
                scalars: rep.contains_scalars,
                diameter: res.orbital_diameter as u64,
                exact: true,
            });
            Outcome::Done { expected, computed, pass: pass && min_orbit == 455, probe }
        }),
    };
    vec![wedge, suzuki]
}

/// Orbit of the lowest weight vector under the line stabilizer, in two
/// pieces: the fixed line itself and the big cell through the opposite
/// weight vector. Their sizes must add up to (q-1)(q^3+1).
fn ree_pieces(field: std::sync::Arc<Field>) -> Result<(GroupRep, OrbitData, u64, u64), String> {
    let stab = ree_stabilizer_rep(field).map_err(|e| e.to_string())?;
    let line = orbit_of(&stab.rep, &stab.e_minus3).map_err(|e| e.to_string())?;
    let cell = orbit_of(&stab.rep, &stab.e_plus3).map_err(|e| e.to_string())?;
    if cell.contains(line.rep_index) {
        return Err("the two orbit pieces are not disjoint".into());
    }
    let (a, b) = (line.size, cell.size);
    let mut members = line.members;
    members.extend_from_slice(&cell.members);
    let union = OrbitData::from_members(&stab.rep, members);
    Ok((stab.rep, union, a, b))
}

fn ree_cases() -> Vec<Case> {
    let q: u64 = 27;
    let expected_size = (q - 1) * (q * q * q + 1);

    let size_case = Case {
        descriptor: "ree-stab:q=27 orbit of e_-3".into(),
        run: Box::new(move || {
            let field = match Field::new(3, 3) {
                Ok(f) => f,
                Err(e) => return fail(format!("error: {e}")),
            };
            match ree_pieces(field) {
                Ok((_, union, line, cell)) => Outcome::Done {
                    expected: format!("(q-1)(q^3+1) = {expected_size}"),
                    computed: format!("{line} + {cell} = {}", union.size),
                    pass: union.size == expected_size,
                    probe: None,
                },
                Err(e) => fail(format!("error: {e}")),
            }
        }),
    };

    let cover_case = Case {
        descriptor: "ree-stab:q=27 two-step cover of k*e_-2".into(),
        run: Box::new(move || {
            let field = match Field::new(3, 3) {
                Ok(f) => f,
                Err(e) => return fail(format!("error: {e}")),
            };
            let (rep, union, _, _) = match ree_pieces(field.clone()) {
                Ok(v) => v,
                Err(e) => return fail(format!("error: {e}")),
            };
            let e_minus2: Vec<Elem> = {
                let mut v = vec![0; 7];
                v[1] = 1;
                v
            };
            let targets: Vec<Vec<Elem>> = field
                .elems()
                .filter(|&l| l != 0)
                .map(|l| e_minus2.iter().map(|&x| field.mul(x, l)).collect())
                .collect();
            let covered = two_step_cover(&rep, &union, &targets);
            let hit = covered.iter().filter(|&&b| b).count();
            Outcome::Done {
                expected: format!("0 of {} targets within 2 steps (diameter >= 3)", targets.len()),
                computed: format!("{hit} of {} targets within 2 steps", targets.len()),
                pass: hit == 0 && targets.len() == (q - 1) as usize,
                probe: Some(BoundProbe {
                    stabilizer: "2G2(27)".into(),
                    fdpm: false,
                    natural: true,
                    defining: true,
                    n: 7,
                    q0: q,
                    rank: None,
                    scalars: false,
                    diameter: 3,
                    exact: false,
                }),
            }
        }),
    };

    vec![size_case, cover_case]
}

fn permalt_cases() -> Vec<Case> {
    struct W {
        r: usize,
        p: u32,
        k: u32,
        bound: usize,
        label: &'static str,
    }
    let list = [
        W { r: 9, p: 2, k: 1, bound: 4, label: "(r-1)/2" },
        W { r: 7, p: 3, k: 1, bound: 3, label: "(r-1)/2" },
        W { r: 10, p: 2, k: 1, bound: 2, label: "(r-2)/4" },
    ];
    list.into_iter()
        .map(|w| Case {
            descriptor: format!("fdpm:r={},q={} distance to sign witness", w.r, w.p),
            run: Box::new(move || {
                let field = match Field::new(w.p, w.k) {
                    Ok(f) => f,
                    Err(e) => return fail(format!("error: {e}")),
                };
                let rep = match crate::repfactory::fully_deleted_rep(w.r, false, field.clone()) {
                    Ok(r) => r,
                    Err(e) => return fail(format!("error: {e}")),
                };
                let m1 = field.neg(1);
                // base edge of the orbital: the image of e_1 - e_2
                let mut base = vec![0; w.r];
                base[0] = 1;
                base[1] = m1;
                let mut full = vec![0; w.r];
                if w.r % field.p() as usize != 0 {
                    // r odd here: (1,-1,...,1,-1,0)
                    for i in 0..w.r - 1 {
                        full[i] = if i % 2 == 0 { 1 } else { m1 };
                    }
                } else {
                    // p = 2, r even, 4 does not divide r: (1,0,...,1,0,0,0)
                    for i in (0..w.r - 2).step_by(2) {
                        full[i] = 1;
                    }
                }
                let run = || -> Result<usize, String> {
                    let base_coords = fdpm_coords(&field, &base).map_err(|e| e.to_string())?;
                    let w_coords = fdpm_coords(&field, &full).map_err(|e| e.to_string())?;
                    let orbit = orbit_of(&rep, &base_coords).map_err(|e| e.to_string())?;
                    distance_to(&rep, &orbit, &w_coords).map_err(|e| e.to_string())
                };
                match run() {
                    Ok(d) => Outcome::Done {
                        expected: format!("distance >= {} = {}", w.bound, w.label),
                        computed: format!("distance {d}"),
                        pass: d >= w.bound,
                        probe: None,
                    },
                    Err(e) => fail(format!("error: {e}")),
                }
            }),
        })
        .collect()
}

/// x^3 - b x - c over GF(q): irreducible iff no root (degree 3).
fn depressed_cubic_irreducible(field: &Field, b: Elem, c: Elem) -> bool {
    field.elems().all(|t| {
        let t3 = field.pow(t, 3);
        field.sub(field.sub(t3, field.mul(b, t)), c) != 0
    })
}

fn companion_cubic(field: &std::sync::Arc<Field>, b: Elem, c: Elem) -> Mat {
    let mut m = Mat::zero(field.clone(), 3, 3);
    m.set(1, 0, 1);
    m.set(2, 1, 1);
    m.set(0, 2, c);
    m.set(1, 2, b);
    m
}

fn adjoint_cases() -> Vec<Case> {
    let search = Case {
        descriptor: "GF(3) search for irreducible x^3 - b x - c, c != 0".into(),
        run: Box::new(|| {
            let field = match Field::new(3, 1) {
                Ok(f) => f,
                Err(e) => return fail(format!("error: {e}")),
            };
            let mut found = Vec::new();
            for b in field.elems() {
                for c in field.elems().filter(|&c| c != 0) {
                    if depressed_cubic_irreducible(&field, b, c) {
                        found.push((b, c));
                    }
                }
            }
            Outcome::Done {
                expected: "at least one irreducible polynomial".into(),
                computed: format!(
                    "{} found: {}",
                    found.len(),
                    found
                        .iter()
                        .map(|(b, c)| format!("x^3 - {b}x - {c}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                pass: !found.is_empty(),
                probe: None,
            }
        }),
    };

    fn build() -> Result<(GroupRep, OrbitData, Vec<Elem>), String> {
        let rep = Descriptor::parse("sl:n=3,q=3;functor=adjoint")
            .map_err(|e| e.to_string())?
            .build()
            .map_err(|e| e.to_string())?;
        let field = rep.field.clone();
        let mut e12 = Mat::zero(field.clone(), 3, 3);
        e12.set(0, 1, 1);
        let orbit = orbit_of(&rep, &adjoint_coords(&e12, true)).map_err(|e| e.to_string())?;
        let (b, c) = field
            .elems()
            .flat_map(|b| field.elems().filter(|&c| c != 0).map(move |c| (b, c)))
            .find(|&(b, c)| depressed_cubic_irreducible(&field, b, c))
            .ok_or("no irreducible cubic found")?;
        let target = adjoint_coords(&companion_cubic(&field, b, c), true);
        Ok((rep, orbit, target))
    }

    let cover = Case {
        descriptor: "sl:n=3,q=3;functor=adjoint two-step cover of companion coset".into(),
        run: Box::new(move || {
            let (rep, orbit, target) = match build() {
                Ok(v) => v,
                Err(e) => return fail(format!("error: {e}")),
            };
            let ranks = match orbit_invariant(&rep, &orbit, InvariantKind::MatrixRank) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let covered = two_step_cover(&rep, &orbit, std::slice::from_ref(&target));
            Outcome::Done {
                expected: "orbit of coset rank {1}, companion coset not within 2 steps".into(),
                computed: format!(
                    "orbit ranks {:?}, within 2 steps: {}",
                    ranks, covered[0]
                ),
                pass: ranks.len() == 1 && ranks.contains(&1) && !covered[0],
                probe: None,
            }
        }),
    };

    let bfs = Case {
        descriptor: "sl:n=3,q=3;functor=adjoint full BFS on 3^7".into(),
        run: Box::new(|| {
            let (rep, orbit, target) = match build() {
                Ok(v) => v,
                Err(e) => return fail(format!("error: {e}")),
            };
            let run = || -> Result<(usize, usize, usize), String> {
                let d = distance_to(&rep, &orbit, &target).map_err(|e| e.to_string())?;
                let entry = orbital_diameter(&rep, &orbit).map_err(|e| e.to_string())?;
                let res = orbdiam_all(&rep).map_err(|e| e.to_string())?;
                Ok((d, entry.diameter, res.orbital_diameter))
            };
            match run() {
                Ok((d, orbital, overall)) => Outcome::Done {
                    expected: "witness distance >= 3 and orbital diameter >= 3".into(),
                    computed: format!(
                        "witness distance {d}, orbital diameter {orbital}, maximum over orbitals {overall}"
                    ),
                    pass: d >= 3 && orbital >= 3 && overall >= orbital,
                    probe: Some(BoundProbe {
                        stabilizer: "PSL3(3)".into(),
                        fdpm: false,
                        natural: false,
                        defining: true,
                        n: 7,
                        q0: 3,
                        rank: None,
                        scalars: false,
                        diameter: overall as u64,
                        exact: true,
                    }),
                },
                Err(e) => fail(format!("error: {e}")),
            }
        }),
    };

    vec![search, cover, bfs]
}

fn sporadic_cases(gens_dir: Option<PathBuf>) -> Vec<Case> {
    let case = Case {
        descriptor: "m11_gl5_3.gens with scalars".into(),
        run: Box::new(move || {
            let Some(dir) = gens_dir else {
                return Outcome::Skip {
                    reason: "generator files not supplied (pass --gens-dir)".into(),
                };
            };
            let path = dir.join("m11_gl5_3.gens");
            if !path.exists() {
                return Outcome::Skip {
                    reason: format!("{} not found", path.display()),
                };
            }
            let rep = match import_rep(&path) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let rep = if rep.contains_scalars {
                rep
            } else {
                match adjoin_scalars(&rep, None) {
                    Ok(r) => r,
                    Err(e) => return fail(format!("error: {e}")),
                }
            };
            let res = match orbdiam_all(&rep) {
                Ok(r) => r,
                Err(e) => return fail(format!("error: {e}")),
            };
            let query = RegistryQuery {
                family: "M11".into(),
                n: Some(rep.n as u32),
                q0: Some(u64::from(rep.field.q())),
                scalars: rep.contains_scalars,
                ..Default::default()
            };
            let (expected, computed, pass) = judge(&query, Some(res.rank), res.orbital_diameter);
            let probe = Some(BoundProbe {
                stabilizer: "M11".into(),
                fdpm: false,
                natural: false,
                defining: false,
                n: rep.n as u32,
                q0: u64::from(rep.field.q()),
                rank: Some(res.rank),
                scalars: rep.contains_scalars,
                diameter: res.orbital_diameter as u64,
                exact: true,
            });
            Outcome::Done { expected, computed, pass, probe }
        }),
    };
    vec![case]
}

pub fn run_scenario(name: &str, gens_dir: Option<&Path>) -> Result<ScenarioResult, ScenarioError> {
    let cases = match name {
        "fdpm-classification" => fdpm_cases(),
        "natural-modules" => natural_cases(),
        "defchar-small" => defchar_cases(),
        "ree-orbit" => ree_cases(),
        "permalt-witness" => permalt_cases(),
        "adjoint-sl3" => adjoint_cases(),
        "sporadic-ingest" => sporadic_cases(gens_dir.map(Path::to_path_buf)),
        other => return Err(ScenarioError::Unknown(other.to_string())),
    };
    Ok(run_cases(name, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all_pass(result: &ScenarioResult) {
        for line in result.lines() {
            assert!(
                !line.starts_with("FAIL"),
                "{}: {line}",
                result.scenario
            );
        }
        assert!(result.all_passed());
    }

    #[test]
    fn fdpm_classification_passes() {
        let r = run_scenario("fdpm-classification", None).unwrap();
        assert_eq!(r.cases.len(), 8);
        assert_all_pass(&r);
        // the one diameter-1 case and the two certified >= 3 cases
        assert!(r.cases[0].computed.contains("diameter 1"));
        assert!(r.cases[6].expected.contains(">= 3"));
        assert!(r.cases[7].expected.contains(">= 3"));
    }

    #[test]
    fn natural_modules_pass() {
        let r = run_scenario("natural-modules", None).unwrap();
        assert_eq!(r.cases.len(), 6);
        assert_all_pass(&r);
    }

    #[test]
    fn defchar_small_passes() {
        let r = run_scenario("defchar-small", None).unwrap();
        assert_eq!(r.cases.len(), 2);
        assert_all_pass(&r);
        assert!(r.cases[1].computed.contains("smaller orbit 455"));
    }

    #[test]
    fn permalt_witness_passes() {
        let r = run_scenario("permalt-witness", None).unwrap();
        assert_eq!(r.cases.len(), 3);
        assert_all_pass(&r);
    }

    #[test]
    fn adjoint_sl3_passes() {
        let r = run_scenario("adjoint-sl3", None).unwrap();
        assert_eq!(r.cases.len(), 3);
        assert_all_pass(&r);
        assert!(r.cases[0].computed.contains("x^3"));
    }

    #[test]
    fn sporadic_skips_without_files() {
        let r = run_scenario("sporadic-ingest", None).unwrap();
        assert_eq!(r.cases.len(), 1);
        assert_eq!(r.cases[0].status, CaseStatus::Skipped);
        assert!(r.all_passed(), "a skip is not a failure");
    }

    #[test]
    fn unknown_scenario_is_an_error() {
        assert!(run_scenario("bogus", None).is_err());
    }
}
