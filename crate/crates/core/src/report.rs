//! Machine-readable run reports. The JSON layout is part of the tool's
//! contract: field order is fixed so reports can be diffed byte for byte.

use serde::{Deserialize, Serialize};

use crate::bounds::{Bound, BoundKind, BOUND_RANK, BOUND_SCALAR_DIM};
use crate::orbgraph::DiameterResult;
use crate::repfactory::GroupRep;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitalReport {
    pub rep_index: u64,
    pub size: u64,
    pub self_paired: bool,
    pub diameter: usize,
    pub profile: Vec<u64>,
    pub witness_index: u64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Timings {
    pub construct_ms: u128,
    pub diameter_ms: u128,
    pub total_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub field: FieldInfo,
    pub dim: usize,
    pub descriptor: String,
    pub rank: usize,
    pub orbitals: Vec<OrbitalReport>,
    pub orbital_diameter: usize,
    pub bounds: Vec<Bound>,
    pub timings: Timings,
}

pub fn diam_report(rep: &GroupRep, result: &DiameterResult, timings: Timings) -> Report {
    let orbitals = result
        .entries
        .iter()
        .map(|e| OrbitalReport {
            rep_index: e.rep_index,
            size: e.orbit_size,
            self_paired: e.self_paired,
            diameter: e.diameter,
            profile: e.profile.clone(),
            witness_index: e.witness_index,
        })
        .collect();
    let mut bounds = vec![Bound {
        name: BOUND_RANK.into(),
        kind: BoundKind::Upper,
        value: (result.rank - 1) as u64,
        conditions: vec![format!("permutation rank {}", result.rank)],
    }];
    if rep.contains_scalars {
        bounds.push(Bound {
            name: BOUND_SCALAR_DIM.into(),
            kind: BoundKind::Upper,
            value: rep.n as u64,
            conditions: vec!["scalar group present".into()],
        });
    }
    Report {
        tool_version: TOOL_VERSION.to_string(),
        field: FieldInfo {
            p: rep.field.p(),
            k: rep.field.k(),
            modulus: rep.field.modulus().to_vec(),
        },
        dim: rep.n,
        descriptor: rep.descriptor.clone(),
        rank: result.rank,
        orbitals,
        orbital_diameter: result.orbital_diameter,
        bounds,
        timings,
    }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One line per orbital, aligned for terminals.
pub fn human_table(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} over GF({}^{}) = GF({}), dim {}, rank {}\n",
        report.descriptor,
        report.field.p,
        report.field.k,
        u64::from(report.field.p).pow(report.field.k),
        report.dim,
        report.rank,
    ));
    out.push_str("orbital  rep_index      size  paired  diameter  profile\n");
    for (i, o) in report.orbitals.iter().enumerate() {
        let profile = o
            .profile
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{:>7}  {:>9}  {:>8}  {:>6}  {:>8}  {}\n",
            i,
            o.rep_index,
            o.size,
            if o.self_paired { "self" } else { "pair" },
            o.diameter,
            profile,
        ));
    }
    out.push_str(&format!("orbital diameter {}\n", report.orbital_diameter));
    for b in &report.bounds {
        let dir = match b.kind {
            BoundKind::Lower => ">=",
            BoundKind::Upper => "<=",
        };
        out.push_str(&format!("bound {} {} {}\n", b.name, dir, b.value));
    }
    out
}

/// Distance profiles as CSV: one row per (orbital, distance) pair.
pub fn profile_csv(report: &Report) -> String {
    let mut out = String::from("orbital,rep_index,distance,count\n");
    for (i, o) in report.orbitals.iter().enumerate() {
        for (d, c) in o.profile.iter().enumerate() {
            out.push_str(&format!("{i},{},{d},{c}\n", o.rep_index));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::orbgraph::orbdiam_all;
    use crate::repfactory::fully_deleted_rep;

    fn sample() -> Report {
        let f = Field::new(2, 1).unwrap();
        let rep = fully_deleted_rep(6, false, f).unwrap();
        let res = orbdiam_all(&rep).unwrap();
        let t = Timings { construct_ms: 0, diameter_ms: 0, total_ms: 0 };
        diam_report(&rep, &res, t)
    }

    #[test]
    fn json_fields_in_contract_order() {
        let json = to_json(&sample());
        let order = [
            "\"tool_version\"",
            "\"field\"",
            "\"dim\"",
            "\"descriptor\"",
            "\"rank\"",
            "\"orbitals\"",
            "\"orbital_diameter\"",
            "\"bounds\"",
            "\"timings\"",
        ];
        let mut last = 0;
        for key in order {
            let at = json.find(key).unwrap_or_else(|| panic!("{key} missing"));
            assert!(at > last || last == 0, "{key} out of order");
            last = at;
        }
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["dim"], 4);
        assert_eq!(v["orbital_diameter"], 1);
        assert_eq!(v["orbitals"][0]["profile"][0], 1);
    }

    #[test]
    fn report_is_deterministic() {
        assert_eq!(to_json(&sample()), to_json(&sample()));
    }

    #[test]
    fn csv_rows_cover_profiles() {
        let rep = sample();
        let csv = profile_csv(&rep);
        let rows: Vec<&str> = csv.lines().collect();
        let cells: usize = rep.orbitals.iter().map(|o| o.profile.len()).sum();
        assert_eq!(rows.len(), 1 + cells);
        assert_eq!(rows[0], "orbital,rep_index,distance,count");
        assert!(rows[1].starts_with("0,"));
    }

    #[test]
    fn table_mentions_diameter_and_bounds() {
        let t = human_table(&sample());
        assert!(t.contains("orbital diameter 1"));
        assert!(t.contains("bound rank-bound <= 1"));
        // GF(2): the trivial scalar group counts as present
        assert!(t.contains("bound scalar-dimension-bound <= 4"));
    }
}
