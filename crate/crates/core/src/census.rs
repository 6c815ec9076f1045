//! Exhaustive enumeration of solutions on small sets, and per-solution census records.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::brace::{is_two_sided, left_series, right_series};
use crate::error::{Error, Result};
use crate::permgrp::PermGroup;
use crate::solution::{mpl, validate_solution, Level, Solution, SolutionJson};
use crate::structure_group::embed_finite_brace;

/// Largest set size accepted by [`enumerate_solutions`].
pub const MAX_CENSUS_SIZE: usize = 5;

type Table = Vec<Vec<usize>>;

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    (0..m).permutations(m).collect()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// `λ_x λ_{λ_x⁻¹(y)} = λ_y λ_{λ_y⁻¹(x)}` for every pair whose four rows are
/// assigned and which involves the newest row (older pairs were checked before).
fn consistent(rows: &[Vec<usize>], invs: &[Vec<usize>]) -> bool {
    let t = rows.len();
    let last = t - 1;
    let m = rows[0].len();
    for x in 0..t {
        for y in 0..t {
            let (u, v) = (invs[x][y], invs[y][x]);
            if u >= t || v >= t || ![x, y, u, v].contains(&last) {
                continue;
            }
            if (0..m).any(|z| rows[x][rows[u][z]] != rows[y][rows[v][z]]) {
                return false;
            }
        }
    }
    true
}

fn extend(
    perms: &[Vec<usize>],
    rows: &mut Vec<Vec<usize>>,
    invs: &mut Vec<Vec<usize>>,
    out: &mut Vec<Table>,
) {
    let m = perms[0].len();
    if rows.len() == m {
        if validate_solution(rows.clone(), None).is_ok() {
            out.push(rows.clone());
        }
        return;
    }
    for p in perms {
        rows.push(p.clone());
        invs.push(inverse(p));
        if consistent(rows, invs) {
            extend(perms, rows, invs, out);
        }
        rows.pop();
        invs.pop();
    }
}

/// All λ tables of valid solutions on `m` points, in lexicographic order.
fn labeled_tables(m: usize) -> Vec<Table> {
    let perms = all_permutations(m);
    perms
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut rows = vec![first.clone()];
            let mut invs = vec![inverse(first)];
            if consistent(&rows, &invs) {
                extend(&perms, &mut rows, &mut invs, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

/// λ table of the relabeling by `phi`: row `φx` is `φ λ_x φ⁻¹`.
fn relabel_table(table: &Table, phi: &[usize]) -> Table {
    let m = table.len();
    let phi_inv = inverse(phi);
    let mut out = vec![vec![0; m]; m];
    for (x, row) in table.iter().enumerate() {
        for y in 0..m {
            out[phi[x]][y] = phi[row[phi_inv[y]]];
        }
    }
    out
}

/// Lexicographically smallest λ table among all relabelings.
pub fn canonical_table(table: &Table) -> Table {
    all_permutations(table.len())
        .iter()
        .map(|phi| relabel_table(table, phi))
        .min()
        .expect("at least one relabeling")
}

/// Every solution on `m` points, optionally one per isomorphism class
/// (the lexicographically minimal λ table). Order is lexicographic on λ tables.
pub fn enumerate_solutions(m: usize, up_to_iso: bool) -> Result<Vec<Solution>> {
    if m == 0 {
        return Err(Error::Malformed("solutions need at least one point".into()));
    }
    if m > MAX_CENSUS_SIZE {
        return Err(Error::CapExceeded {
            cap: MAX_CENSUS_SIZE,
            reached: m,
        });
    }
    let mut tables = labeled_tables(m);
    if up_to_iso {
        let reps: BTreeSet<Table> = tables.par_iter().map(canonical_table).collect();
        tables = reps.into_iter().collect();
    }
    tables
        .into_iter()
        .map(|t| validate_solution(t, None))
        .collect()
}

/// Invariants of one solution. Fields that could not be computed are `None`
/// and `error` holds the diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub solution: SolutionJson,
    pub mpl: Level,
    pub perm_group_order: Option<usize>,
    pub embedded_brace_order: Option<usize>,
    pub right_nilpotent: Option<bool>,
    pub left_nilpotent: Option<bool>,
    pub two_sided: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

/// Computes a [`CensusRecord`]; a cap overflow is recorded, not returned.
pub fn census_record(s: &Solution, cap: usize) -> Result<CensusRecord> {
    let mut record = CensusRecord {
        solution: s.to_json(false),
        mpl: mpl(s),
        perm_group_order: None,
        embedded_brace_order: None,
        right_nilpotent: None,
        left_nilpotent: None,
        two_sided: None,
        error: None,
    };
    let filled = (|| -> Result<()> {
        let group = PermGroup::closure(s.size(), &s.permutation_generators(), cap)?;
        record.perm_group_order = Some(group.order());
        let emb = embed_finite_brace(s, cap)?;
        let b = &emb.brace;
        record.embedded_brace_order = Some(b.order());
        record.right_nilpotent = Some(right_series(b, cap).nilpotent);
        record.left_nilpotent = Some(left_series(b, cap).nilpotent);
        record.two_sided = Some(is_two_sided(b));
        Ok(())
    })();
    match filled {
        Ok(()) => Ok(record),
        Err(e @ Error::CapExceeded { .. }) => {
            record.error = Some(e.diagnostic());
            Ok(record)
        }
        Err(e) => Err(e),
    }
}

/// One record per isomorphism class on `m` points, in enumeration order.
pub fn build_census(m: usize, cap: usize) -> Result<Vec<CensusRecord>> {
    enumerate_solutions(m, true)?
        .par_iter()
        .map(|s| census_record(s, cap))
        .collect()
}

/// JSON-lines rendering, one record per line.
pub fn census_to_jsonl(records: &[CensusRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("census record serializes") + "\n")
        .collect()
}
