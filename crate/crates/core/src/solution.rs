//! Finite involutive non-degenerate set-theoretic solutions of the Yang-Baxter equation.
//!
//! A solution on `{0..m-1}` is stored through its left action
//! `lambda[x][y] = ^x y`; the right action `x^y = λ⁻¹_{λ_x(y)}(x)` is derived
//! and cross-checked against any caller-supplied table.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permgrp::Permutation;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    lambda: Vec<Permutation>,
    rho: Vec<Vec<usize>>,
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solution")
            .field("size", &self.size())
            .field("lambda", &self.lambda_table())
            .finish()
    }
}

/// Wire format: `{"size": m, "lambda": [[...]], "rho": [[...]]?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub size: usize,
    pub lambda: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Vec<usize>>>,
}

fn check_table(name: &str, table: &[Vec<usize>], m: usize) -> Result<()> {
    if table.len() != m {
        return Err(Error::Malformed(format!("{name} has {} rows, expected {m}", table.len())));
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != m {
            return Err(Error::Malformed(format!("{name} row {x} has length {}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= m) {
            return Err(Error::IndexOutOfRange { index: bad, size: m });
        }
    }
    Ok(())
}

/// Validates the tables and returns the solution.
///
/// When `right_action` is omitted it is derived from the left action.
/// Non-degeneracy, involutivity and the braid relation are all checked by
/// exhaustive loops; the first failure is returned with its witness.
pub fn validate_solution(
    left_action: Vec<Vec<usize>>,
    right_action: Option<Vec<Vec<usize>>>,
) -> Result<Solution> {
    let m = left_action.len();
    if m == 0 {
        return Err(Error::Malformed("a solution needs at least one point".into()));
    }
    check_table("lambda", &left_action, m)?;
    let mut lambda = Vec::with_capacity(m);
    for (x, row) in left_action.into_iter().enumerate() {
        match Permutation::from_images(row) {
            Ok(p) => lambda.push(p),
            Err(Error::NotABijection { hits, .. }) => {
                return Err(Error::NotABijection { side: "lambda", index: x, hits })
            }
            Err(e) => return Err(e),
        }
    }
    let lambda_inv: Vec<Permutation> = lambda.iter().map(Permutation::inverse).collect();
    let derived: Vec<Vec<usize>> = (0..m)
        .map(|x| (0..m).map(|y| lambda_inv[lambda[x].apply(y)].apply(x)).collect())
        .collect();

    let rho = match right_action {
        None => derived,
        Some(rho) => {
            check_table("rho", &rho, m)?;
            for x in 0..m {
                for y in 0..m {
                    let (u, v) = (lambda[x].apply(y), rho[x][y]);
                    if (lambda[u].apply(v), rho[u][v]) != (x, y) {
                        return Err(Error::NotInvolutive(x, y));
                    }
                }
            }
            rho
        }
    };

    for y in 0..m {
        let mut seen = vec![usize::MAX; m];
        for x in 0..m {
            let v = rho[x][y];
            if seen[v] != usize::MAX {
                return Err(Error::NotABijection { side: "rho", index: y, hits: (seen[v], x) });
            }
            seen[v] = x;
        }
    }

    let s = Solution { lambda, rho };
    for x in 0..m {
        for y in 0..m {
            if s.r(s.r(x, y).0, s.r(x, y).1) != (x, y) {
                return Err(Error::NotInvolutive(x, y));
            }
        }
    }
    if let Some((x, y, z)) = s.first_braid_failure() {
        return Err(Error::YbeViolation(x, y, z));
    }
    Ok(s)
}

/// `r(x,y) = (y,x)`: every λ_x is the identity.
pub fn trivial_solution(m: usize) -> Solution {
    assert!(m >= 1, "trivial solution needs at least one point");
    let id = Permutation::identity(m);
    Solution {
        lambda: vec![id; m],
        rho: (0..m).map(|x| vec![x; m]).collect(),
    }
}

impl Solution {
    pub fn size(&self) -> usize {
        self.lambda.len()
    }

    /// `^x y`
    #[inline]
    pub fn left(&self, x: usize, y: usize) -> usize {
        self.lambda[x].apply(y)
    }

    /// `x^y`
    #[inline]
    pub fn right(&self, x: usize, y: usize) -> usize {
        self.rho[x][y]
    }

    #[inline]
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.left(x, y), self.right(x, y))
    }

    pub fn lambda(&self, x: usize) -> &Permutation {
        &self.lambda[x]
    }

    pub fn lambda_table(&self) -> Vec<Vec<usize>> {
        self.lambda.iter().map(|p| p.images().to_vec()).collect()
    }

    pub fn rho_table(&self) -> &[Vec<usize>] {
        &self.rho
    }

    pub fn is_trivial(&self) -> bool {
        self.lambda.iter().all(Permutation::is_identity)
    }

    fn first_braid_failure(&self) -> Option<(usize, usize, usize)> {
        let m = self.size();
        let r12 = |(a, b, c): (usize, usize, usize)| {
            let (p, q) = self.r(a, b);
            (p, q, c)
        };
        let r23 = |(a, b, c): (usize, usize, usize)| {
            let (p, q) = self.r(b, c);
            (a, p, q)
        };
        (0..m)
            .flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| (x, y, z))))
            .find(|&t| r12(r23(r12(t))) != r23(r12(r23(t))))
    }

    /// The λ rows as permutations, index-aligned with the points.
    pub fn permutation_generators(&self) -> Vec<Permutation> {
        self.lambda.clone()
    }

    /// Image of the solution under the relabeling `x -> phi(x)`.
    pub fn relabel(&self, phi: &Permutation) -> Solution {
        let m = self.size();
        let mut table = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                table[phi.apply(x)][phi.apply(y)] = phi.apply(self.left(x, y));
            }
        }
        validate_solution(table, None).expect("relabeling preserves validity")
    }

    pub fn to_json(&self, with_rho: bool) -> SolutionJson {
        SolutionJson {
            size: self.size(),
            lambda: self.lambda_table(),
            rho: with_rho.then(|| self.rho.clone()),
        }
    }

    pub fn from_json(json: SolutionJson) -> Result<Solution> {
        if json.lambda.len() != json.size {
            return Err(Error::Malformed(format!(
                "size {} but {} lambda rows",
                json.size,
                json.lambda.len()
            )));
        }
        validate_solution(json.lambda, json.rho)
    }
}

/// Restricts `s` to `subset` (new index `i` is `subset[i]`).
pub fn subsolution(s: &Solution, subset: &[usize]) -> Result<Solution> {
    let m = s.size();
    let mut pos = vec![usize::MAX; m];
    for (i, &x) in subset.iter().enumerate() {
        if x >= m {
            return Err(Error::IndexOutOfRange { index: x, size: m });
        }
        if pos[x] != usize::MAX {
            return Err(Error::Malformed(format!("point {x} listed twice")));
        }
        pos[x] = i;
    }
    let k = subset.len();
    let mut left = vec![vec![0; k]; k];
    let mut right = vec![vec![0; k]; k];
    for (i, &x) in subset.iter().enumerate() {
        for (j, &y) in subset.iter().enumerate() {
            let (u, v) = s.r(x, y);
            if pos[u] == usize::MAX || pos[v] == usize::MAX {
                return Err(Error::NotInvariant(x, y));
            }
            left[i][j] = pos[u];
            right[i][j] = pos[v];
        }
    }
    validate_solution(left, Some(right))
}

/// Multipermutation level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(usize),
    Infinite,
}

impl Level {
    pub fn finite(self) -> Option<usize> {
        match self {
            Level::Finite(k) => Some(k),
            Level::Infinite => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinite => f.write_str("infinite"),
        }
    }
}

/// Serialized as an integer or the string `"infinite"`.
impl Serialize for Level {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(k) => ser.serialize_u64(*k as u64),
            Level::Infinite => ser.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(de)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|k| Level::Finite(k as usize))
                .ok_or_else(|| serde::de::Error::custom("level must be a non-negative integer")),
            serde_json::Value::String(s) if s == "infinite" => Ok(Level::Infinite),
            other => Err(serde::de::Error::custom(format!("bad level {other}"))),
        }
    }
}

/// Result of one retraction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractQuotient {
    pub parent_size: usize,
    /// Class index of every point, classes numbered by first appearance.
    pub class_of: Vec<usize>,
    pub retracted: Solution,
}

impl RetractQuotient {
    pub fn classes(&self) -> usize {
        self.retracted.size()
    }
}

/// Numbers the distinct values of `key(x)` in order of first appearance.
pub(crate) fn classes_by_first_appearance<K, F>(n: usize, key: F) -> (Vec<usize>, Vec<usize>)
where
    K: std::hash::Hash + Eq,
    F: Fn(usize) -> K,
{
    let mut ids = std::collections::HashMap::new();
    let mut reps = Vec::new();
    let class_of = (0..n)
        .map(|x| {
            *ids.entry(key(x)).or_insert_with(|| {
                reps.push(x);
                reps.len() - 1
            })
        })
        .collect();
    (class_of, reps)
}

/// Identifies points with equal λ rows and builds the induced solution.
pub fn retract(s: &Solution) -> Result<RetractQuotient> {
    let m = s.size();
    let (class_of, reps) = classes_by_first_appearance(m, |x| s.lambda(x).clone());
    let k = reps.len();
    let mut left = vec![vec![usize::MAX; k]; k];
    for x in 0..m {
        for y in 0..m {
            let (cx, cy) = (class_of[x], class_of[y]);
            let c = class_of[s.left(x, y)];
            if left[cx][cy] == usize::MAX {
                left[cx][cy] = c;
            } else if left[cx][cy] != c {
                return Err(Error::InternalInconsistency(format!(
                    "retraction not well defined at ({x}, {y})"
                )));
            }
        }
    }
    let retracted = validate_solution(left, None).map_err(|e| {
        Error::InternalInconsistency(format!("retraction is not a solution: {e}"))
    })?;
    for x in 0..m {
        for y in 0..m {
            let (cx, cy) = (class_of[x], class_of[y]);
            if retracted.right(cx, cy) != class_of[s.right(x, y)] {
                return Err(Error::InternalInconsistency(format!(
                    "right action not induced at ({x}, {y})"
                )));
            }
        }
    }
    Ok(RetractQuotient {
        parent_size: m,
        class_of,
        retracted,
    })
}

/// Smallest `k` with `|Ret^k(S)| = 1`, or `Infinite` at a retraction fixpoint.
pub fn mpl(s: &Solution) -> Level {
    let mut level = 0;
    let mut cur = s.clone();
    loop {
        if cur.size() == 1 {
            return Level::Finite(level);
        }
        let next = retract(&cur).expect("retraction of a valid solution").retracted;
        if next.size() == cur.size() {
            return Level::Infinite;
        }
        level += 1;
        cur = next;
    }
}

type PointInvariant = (Vec<usize>, usize, bool, usize, usize);

fn point_invariants(s: &Solution) -> Vec<PointInvariant> {
    let m = s.size();
    (0..m)
        .map(|x| {
            let row = s.lambda(x);
            let multiplicity = (0..m).filter(|&z| s.lambda(z) == row).count();
            let fixers = (0..m).filter(|&z| s.left(z, x) == x).count();
            (row.cycle_type(), multiplicity, row.apply(x) == x, fixers, row.order())
        })
        .collect()
}

const UNSET: usize = usize::MAX;

struct IsoSearch<'a> {
    a: &'a Solution,
    b: &'a Solution,
    inv_a: Vec<PointInvariant>,
    inv_b: Vec<PointInvariant>,
}

impl IsoSearch<'_> {
    /// Assigns `x -> u` and everything it forces through `φ(^p q) = ^{φp} φq`.
    fn propagate(&self, phi: &mut [usize], psi: &mut [usize], x: usize, u: usize) -> bool {
        let mut dom: Vec<usize> = (0..phi.len()).filter(|&p| phi[p] != UNSET).collect();
        let mut queue = vec![(x, u)];
        while let Some((x, u)) = queue.pop() {
            if phi[x] != UNSET {
                if phi[x] == u {
                    continue;
                }
                return false;
            }
            if psi[u] != UNSET || self.inv_a[x] != self.inv_b[u] {
                return false;
            }
            phi[x] = u;
            psi[u] = x;
            dom.push(x);
            for &y in &dom {
                for (p, q) in [(x, y), (y, x)] {
                    queue.push((self.a.left(p, q), self.b.left(phi[p], phi[q])));
                }
            }
        }
        true
    }

    fn search(&self, phi: Vec<usize>, psi: Vec<usize>) -> Option<Vec<usize>> {
        let Some(x) = phi.iter().position(|&v| v == UNSET) else {
            return Some(phi);
        };
        for u in 0..psi.len() {
            if psi[u] != UNSET || self.inv_a[x] != self.inv_b[u] {
                continue;
            }
            let (mut p2, mut q2) = (phi.clone(), psi.clone());
            if self.propagate(&mut p2, &mut q2, x, u) {
                if let Some(found) = self.search(p2, q2) {
                    return Some(found);
                }
            }
        }
        None
    }
}

/// Finds a bijection `φ` with `φ(^x y) = ^{φx} φy`, if one exists.
///
/// Backtracking over images with constraint propagation; candidate images
/// are pruned by per-point invariants (cycle type of λ_x, multiplicity of
/// the row, fixed-point counts).
pub fn is_isomorphic(a: &Solution, b: &Solution) -> Result<Option<Permutation>> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    let search = IsoSearch {
        a,
        b,
        inv_a: point_invariants(a),
        inv_b: point_invariants(b),
    };
    let (mut sa, mut sb) = (search.inv_a.clone(), search.inv_b.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let m = a.size();
    Ok(search
        .search(vec![UNSET; m], vec![UNSET; m])
        .map(|phi| Permutation::from_images(phi).expect("search yields a bijection")))
}

/// Tries every bijection; only sensible for small sizes (m ≤ 8).
pub fn is_isomorphic_exhaustive(a: &Solution, b: &Solution) -> Result<Option<Permutation>> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    let m = a.size();
    Ok((0..m).permutations(m).find_map(|phi| {
        let ok = (0..m).all(|x| (0..m).all(|y| phi[a.left(x, y)] == b.left(phi[x], phi[y])));
        ok.then(|| Permutation::from_images(phi).unwrap())
    }))
}
