//! Finite left braces.
//!
//! A brace is stored through its additive group and the maps
//! `λ_a(b) = a·b − a`, so that `a·b = a + λ_a(b)`. Two representations share
//! one interface:
//!
//! * table form: explicit addition and λ tables over element indices;
//! * vector form: elements of `(ℤ/n)^d` in lexicographic order, with every
//!   λ_a a permutation of coordinates (this is how quotients of structure
//!   groups arise).
//!
//! Elements are indices `0..order`. Subsets use [`BraceSubset`].

use std::collections::HashMap;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};
use crate::permgrp::Permutation;
use crate::solution::{
    classes_by_first_appearance, is_isomorphic, mpl, validate_solution, Level, RetractQuotient,
    Solution,
};

/// Largest brace turned into an explicit associated solution.
pub const ASSOCIATED_SOLUTION_CAP: usize = 4096;

/// Above this order the right-brace law is checked on socle cosets instead of all triples.
const EXHAUSTIVE_TWO_SIDED_MAX: usize = 256;

/// Lexicographic coordinates on `(ℤ/modulus)^dim`; coordinate 0 is most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coords {
    pub modulus: usize,
    pub dim: usize,
}

impl Coords {
    pub fn size(&self) -> usize {
        self.modulus.pow(self.dim as u32)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut v = vec![0; self.dim];
        for slot in v.iter_mut().rev() {
            *slot = index % self.modulus;
            index /= self.modulus;
        }
        v
    }

    pub fn encode(&self, v: &[usize]) -> usize {
        v.iter().fold(0, |acc, &c| acc * self.modulus + c % self.modulus)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.decode(a), self.decode(b));
        let sum: Vec<usize> = va.iter().zip(&vb).map(|(x, y)| (x + y) % self.modulus).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let v: Vec<usize> = self
            .decode(a)
            .into_iter()
            .map(|x| (self.modulus - x) % self.modulus)
            .collect();
        self.encode(&v)
    }

    pub fn basis(&self, i: usize) -> usize {
        let mut v = vec![0; self.dim];
        v[i] = 1 % self.modulus;
        self.encode(&v)
    }

    /// `(π·w)[π(i)] = w[i]`
    pub fn permute(&self, perm: &Permutation, a: usize) -> usize {
        let w = self.decode(a);
        let mut out = vec![0; self.dim];
        for (i, &c) in w.iter().enumerate() {
            out[perm.apply(i)] = c;
        }
        self.encode(&out)
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Table {
        add: Vec<Vec<usize>>,
        neg: Vec<usize>,
        lam: Vec<Vec<usize>>,
        lam_inv: Vec<Vec<usize>>,
        zero: usize,
        coords: Option<Coords>,
    },
    Vector {
        space: Coords,
        /// coordinate permutation of each λ class
        class_perm: Vec<Permutation>,
    },
}

#[derive(Debug, Clone)]
pub struct FiniteBrace {
    order: usize,
    repr: Repr,
    /// Equal classes ⇔ equal λ maps; classes numbered by first appearance.
    lam_class: Vec<usize>,
    class_reps: Vec<usize>,
    /// Known generators of (B,·), if any.
    mul_gens: Option<Vec<usize>>,
}

/// Wire format for braces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase")]
pub enum BraceJson {
    Table {
        order: usize,
        add: Vec<Vec<usize>>,
        lambda: Vec<Vec<usize>>,
        zero: usize,
    },
    /// `lambda[a]` is the coordinate permutation of element `a`.
    Vector {
        modulus: usize,
        dim: usize,
        lambda: Vec<Vec<usize>>,
    },
}

fn infer_coords(add: &[Vec<usize>], zero: usize) -> Option<Coords> {
    let n = add.len();
    if zero != 0 || n < 2 {
        return None;
    }
    (1..=usize::BITS as usize)
        .filter_map(|dim| {
            let k = (n as f64).powf(1.0 / dim as f64).round() as usize;
            (k >= 2 && k.checked_pow(dim as u32) == Some(n)).then_some(Coords { modulus: k, dim })
        })
        .find(|c| (0..n).all(|a| (0..n).all(|b| add[a][b] == c.add(a, b))))
}

impl FiniteBrace {
    /// Table form. Checks shape, ranges, that each λ row is a bijection and
    /// that additive inverses exist; the remaining axioms are left to
    /// [`validate_brace`].
    pub fn from_tables(add: Vec<Vec<usize>>, lam: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let n = add.len();
        if n == 0 || lam.len() != n || zero >= n {
            return Err(Error::Malformed("brace tables must be non-empty and square".into()));
        }
        for row in add.iter().chain(&lam) {
            if row.len() != n {
                return Err(Error::Malformed("brace tables must be square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: bad, size: n });
            }
        }
        let mut lam_inv = vec![vec![usize::MAX; n]; n];
        for a in 0..n {
            for b in 0..n {
                let img = lam[a][b];
                if lam_inv[a][img] != usize::MAX {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::LambdaBijective,
                        witness: vec![a, lam_inv[a][img], b],
                    });
                }
                lam_inv[a][img] = b;
            }
        }
        let mut neg = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| add[a][b] == zero) {
                Some(b) => neg[a] = b,
                None => {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::AdditiveGroup,
                        witness: vec![a],
                    })
                }
            }
        }
        let (lam_class, class_reps) = classes_by_first_appearance(n, |a| lam[a].clone());
        let coords = infer_coords(&add, zero);
        Ok(FiniteBrace {
            order: n,
            repr: Repr::Table {
                add,
                neg,
                lam,
                lam_inv,
                zero,
                coords,
            },
            lam_class,
            class_reps,
            mul_gens: None,
        })
    }

    /// Vector form on `(ℤ/modulus)^dim`; `lambda[a]` is the coordinate
    /// permutation of element `a` (lexicographic order).
    pub fn from_vector(modulus: usize, dim: usize, lambda: Vec<Permutation>) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::Malformed("modulus must be positive".into()));
        }
        let space = Coords { modulus, dim };
        let n = space.size();
        if lambda.len() != n {
            return Err(Error::Malformed(format!(
                "vector brace of order {n} needs {n} lambda rows, got {}",
                lambda.len()
            )));
        }
        if let Some(p) = lambda.iter().find(|p| p.degree() != dim) {
            return Err(Error::DegreeMismatch(dim, p.degree()));
        }
        let (lam_class, class_reps) = classes_by_first_appearance(n, |a| lambda[a].clone());
        let class_perm = class_reps.iter().map(|&a| lambda[a].clone()).collect();
        Ok(FiniteBrace {
            order: n,
            repr: Repr::Vector { space, class_perm },
            lam_class,
            class_reps,
            mul_gens: None,
        })
    }

    /// Vector form from a per-element perm id into `perms`.
    pub(crate) fn from_vector_ids(space: Coords, ids: &[usize], perms: &[Permutation]) -> Self {
        let n = space.size();
        debug_assert_eq!(ids.len(), n);
        let (lam_class, class_reps) = classes_by_first_appearance(n, |a| ids[a]);
        let class_perm = class_reps.iter().map(|&a| perms[ids[a]].clone()).collect();
        FiniteBrace {
            order: n,
            repr: Repr::Vector { space, class_perm },
            lam_class,
            class_reps,
            mul_gens: None,
        }
    }

    pub(crate) fn with_mul_generators(mut self, gens: Vec<usize>) -> Self {
        self.mul_gens = Some(gens);
        self
    }

    pub fn from_json(json: BraceJson) -> Result<Self> {
        match json {
            BraceJson::Table {
                order,
                add,
                lambda,
                zero,
            } => {
                if add.len() != order {
                    return Err(Error::Malformed(format!(
                        "order {order} but {} addition rows",
                        add.len()
                    )));
                }
                FiniteBrace::from_tables(add, lambda, zero)
            }
            BraceJson::Vector {
                modulus,
                dim,
                lambda,
            } => {
                let perms = lambda
                    .into_iter()
                    .map(Permutation::from_images)
                    .collect::<Result<Vec<_>>>()?;
                FiniteBrace::from_vector(modulus, dim, perms)
            }
        }
    }

    pub fn to_json(&self) -> BraceJson {
        match &self.repr {
            Repr::Table { add, lam, zero, .. } => BraceJson::Table {
                order: self.order,
                add: add.clone(),
                lambda: lam.clone(),
                zero: *zero,
            },
            Repr::Vector { space, class_perm } => BraceJson::Vector {
                modulus: space.modulus,
                dim: space.dim,
                lambda: self
                    .lam_class
                    .iter()
                    .map(|&c| class_perm[c].images().to_vec())
                    .collect(),
            },
        }
    }

    /// Copy in table form (keeps coordinates).
    pub fn to_table(&self) -> FiniteBrace {
        let n = self.order;
        let add = (0..n).map(|a| (0..n).map(|b| self.add(a, b)).collect()).collect();
        let lam = (0..n).map(|a| (0..n).map(|b| self.lam(a, b)).collect()).collect();
        FiniteBrace::from_tables(add, lam, self.zero()).expect("valid brace tables")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_vector(&self) -> bool {
        matches!(self.repr, Repr::Vector { .. })
    }

    /// Uniform coordinates, when the additive group is `(ℤ/k)^d` in lexicographic order.
    pub fn coords(&self) -> Option<Coords> {
        match &self.repr {
            Repr::Table { coords, .. } => *coords,
            Repr::Vector { space, .. } => Some(*space),
        }
    }

    pub fn zero(&self) -> usize {
        match &self.repr {
            Repr::Table { zero, .. } => *zero,
            Repr::Vector { .. } => 0,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table { add, .. } => add[a][b],
            Repr::Vector { space, .. } => space.add(a, b),
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Table { neg, .. } => neg[a],
            Repr::Vector { space, .. } => space.neg(a),
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` in the additive group.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero(), |acc, _| self.add(acc, a))
    }

    /// `λ_a(b)`
    pub fn lam(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table { lam, .. } => lam[a][b],
            Repr::Vector { space, class_perm } => {
                space.permute(&class_perm[self.lam_class[a]], b)
            }
        }
    }

    /// `λ_a⁻¹(b)`
    pub fn lam_inv(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table { lam_inv, .. } => lam_inv[a][b],
            Repr::Vector { space, class_perm } => {
                space.permute(&class_perm[self.lam_class[a]].inverse(), b)
            }
        }
    }

    /// `a·b = a + λ_a(b)`
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.add(a, self.lam(a, b))
    }

    /// Multiplicative inverse `λ_a⁻¹(−a)`.
    pub fn mul_inv(&self, a: usize) -> usize {
        self.lam_inv(a, self.neg(a))
    }

    /// `a*b = a·b − a − b`
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.sub(self.sub(self.mul(a, b), a), b)
    }

    pub fn lam_class(&self, a: usize) -> usize {
        self.lam_class[a]
    }

    pub fn lam_classes(&self) -> &[usize] {
        &self.lam_class
    }

    /// One element per distinct λ map, in first-appearance order.
    pub fn class_representatives(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn lambda_is_identity(&self, a: usize) -> bool {
        self.lam_class[a] == self.lam_class[self.zero()]
    }

    pub fn is_trivial(&self) -> bool {
        self.class_count() == 1 && (0..self.order).all(|b| self.lam(self.zero(), b) == b)
    }

    pub fn mul_generators(&self) -> Option<&[usize]> {
        self.mul_gens.as_deref()
    }

    /// A generating set of (B,+).
    pub fn additive_generators(&self) -> Vec<usize> {
        match &self.repr {
            Repr::Vector { space, .. } => (0..space.dim).map(|i| space.basis(i)).collect(),
            Repr::Table { .. } => {
                let mut span = Span::new(self);
                (0..self.order).filter(|&a| span.extend(self, a)).collect()
            }
        }
    }
}

/// A subset of a brace's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraceSubset {
    members: Vec<bool>,
    len: usize,
}

impl BraceSubset {
    pub fn empty(order: usize) -> Self {
        BraceSubset {
            members: vec![false; order],
            len: 0,
        }
    }

    pub fn full(order: usize) -> Self {
        BraceSubset {
            members: vec![true; order],
            len: order,
        }
    }

    pub fn zero(b: &FiniteBrace) -> Self {
        BraceSubset::from_elements(b.order(), [b.zero()])
    }

    pub fn from_elements(order: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BraceSubset::empty(order);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn insert(&mut self, a: usize) -> bool {
        let fresh = !self.members[a];
        if fresh {
            self.members[a] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members[a]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&a| self.members[a]).collect()
    }

    pub fn is_subset_of(&self, other: &BraceSubset) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }
}

/// Incrementally grown additive subgroup.
struct Span {
    set: BraceSubset,
    list: Vec<usize>,
}

impl Span {
    fn new(b: &FiniteBrace) -> Self {
        Span {
            set: BraceSubset::zero(b),
            list: vec![b.zero()],
        }
    }

    /// Adds `g` to the span; returns whether it grew. Uses `H + ⟨g⟩ = ⋃ₖ (H + k·g)`.
    fn extend(&mut self, b: &FiniteBrace, g: usize) -> bool {
        if self.set.contains(g) {
            return false;
        }
        let base = self.list.clone();
        let mut t = g;
        while !self.set.contains(t) {
            for &h in &base {
                let x = b.add(h, t);
                if self.set.insert(x) {
                    self.list.push(x);
                }
            }
            t = b.add(t, g);
        }
        true
    }
}

/// Additive subgroup generated by `values`.
pub fn additive_span(b: &FiniteBrace, values: impl IntoIterator<Item = usize>) -> BraceSubset {
    let mut span = Span::new(b);
    for v in values {
        span.extend(b, v);
    }
    span.set
}

fn violation(axiom: Axiom, witness: Vec<usize>) -> Error {
    Error::AxiomViolation { axiom, witness }
}

fn check_pair(b: &FiniteBrace, x: usize, y: usize) -> Result<()> {
    let z = b.zero();
    if x == z && b.lam(z, y) != y {
        return Err(violation(Axiom::MultiplicativeGroup, vec![z, y]));
    }
    if b.add(x, y) != b.add(y, x) || (y == z && b.add(x, z) != x) {
        return Err(violation(Axiom::AdditiveGroup, vec![x, y]));
    }
    if y == z {
        let inv = b.mul_inv(x);
        if b.mul(x, inv) != z || b.mul(inv, x) != z {
            return Err(violation(Axiom::MultiplicativeGroup, vec![x]));
        }
    }
    Ok(())
}

fn check_triple(b: &FiniteBrace, x: usize, y: usize, w: usize) -> Result<()> {
    if b.add(b.add(x, y), w) != b.add(x, b.add(y, w)) {
        return Err(violation(Axiom::AdditiveGroup, vec![x, y, w]));
    }
    if b.lam(x, b.add(y, w)) != b.add(b.lam(x, y), b.lam(x, w)) {
        return Err(violation(Axiom::LambdaAdditive, vec![x, y, w]));
    }
    if b.mul(b.mul(x, y), w) != b.mul(x, b.mul(y, w)) {
        return Err(violation(Axiom::MultiplicativeGroup, vec![x, y, w]));
    }
    if b.lam(b.mul(x, y), w) != b.lam(x, b.lam(y, w)) {
        return Err(violation(Axiom::LambdaHomomorphism, vec![x, y, w]));
    }
    // a·(b+c) + a = a·b + a·c
    if b.add(b.mul(x, b.add(y, w)), x) != b.add(b.mul(x, y), b.mul(x, w)) {
        return Err(violation(Axiom::LeftBraceLaw, vec![x, y, w]));
    }
    Ok(())
}

/// Exhaustive check of every brace axiom; O(N³).
pub fn validate_brace(b: &FiniteBrace) -> Result<()> {
    let n = b.order();
    for x in 0..n {
        for y in 0..n {
            check_pair(b, x, y)?;
        }
    }
    for x in 0..n {
        for y in 0..n {
            for w in 0..n {
                check_triple(b, x, y, w)?;
            }
        }
    }
    Ok(())
}

/// Same checks on `samples` random pairs and triples.
pub fn validate_brace_sampled(b: &FiniteBrace, samples: usize, seed: u64) -> Result<()> {
    let n = b.order();
    let mut rng = StdRng::seed_from_u64(seed);
    for x in 0..n {
        check_pair(b, x, b.zero())?;
        check_pair(b, b.zero(), x)?;
    }
    for _ in 0..samples {
        let (x, y, w) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        check_pair(b, x, y)?;
        check_triple(b, x, y, w)?;
    }
    Ok(())
}

/// `{a : λ_a = id}`
pub fn socle(b: &FiniteBrace) -> BraceSubset {
    BraceSubset::from_elements(b.order(), (0..b.order()).filter(|&a| b.lambda_is_identity(a)))
}

/// Additive subgroup, normal in (B,·) and invariant under every λ_a.
pub fn is_ideal(b: &FiniteBrace, s: &BraceSubset) -> bool {
    if !s.contains(b.zero()) {
        return false;
    }
    let elems = s.elements();
    if additive_span(b, elems.iter().copied()).len() != s.len() {
        return false;
    }
    let lam_ok = b
        .class_representatives()
        .iter()
        .all(|&a| elems.iter().all(|&x| s.contains(b.lam(a, x))));
    if !lam_ok {
        return false;
    }
    let conjugators: Vec<usize> = match b.mul_generators() {
        Some(g) => g.to_vec(),
        None => (0..b.order()).collect(),
    };
    conjugators.iter().all(|&a| {
        let ai = b.mul_inv(a);
        elems.iter().all(|&x| s.contains(b.mul(b.mul(a, x), ai)))
    })
}

/// Quotient brace `B/I` and the projection `B → B/I`.
pub fn quotient(b: &FiniteBrace, ideal: &BraceSubset) -> Result<(FiniteBrace, Vec<usize>)> {
    if !is_ideal(b, ideal) {
        return Err(Error::NotAnIdeal);
    }
    let members = ideal.elements();
    let mut label = vec![usize::MAX; b.order()];
    let mut reps = Vec::new();
    for a in 0..b.order() {
        if label[a] != usize::MAX {
            continue;
        }
        for &i in &members {
            label[b.add(a, i)] = reps.len();
        }
        reps.push(a);
    }
    let k = reps.len();
    let add = reps
        .iter()
        .map(|&x| reps.iter().map(|&y| label[b.add(x, y)]).collect())
        .collect();
    let lam = reps
        .iter()
        .map(|&x| reps.iter().map(|&y| label[b.lam(x, y)]).collect())
        .collect();
    let q = FiniteBrace::from_tables(add, lam, label[b.zero()])?;
    debug_assert_eq!(q.order(), k);
    Ok((q, label))
}

/// Additive subgroup generated by `{s*t : s ∈ S, t ∈ T}`.
pub fn star_span(b: &FiniteBrace, s: &BraceSubset, t: &BraceSubset) -> BraceSubset {
    // s*t = λ_s(t) − t depends on s only through its λ class
    let mut seen_class = vec![false; b.class_count()];
    let reps: Vec<usize> = s
        .elements()
        .into_iter()
        .filter(|&x| !std::mem::replace(&mut seen_class[b.lam_class(x)], true))
        .collect();
    let t_elems = t.elements();
    let mut values = BraceSubset::empty(b.order());
    for &x in &reps {
        for &y in &t_elems {
            values.insert(b.star(x, y));
        }
    }
    additive_span(b, values.elements())
}

/// A computed Rump chain.
#[derive(Debug, Clone)]
pub struct Series {
    /// `terms[0]` is B; the chain stops at `{0}` or at the first repeat.
    pub terms: Vec<BraceSubset>,
    /// Whether the chain reached `{0}`.
    pub nilpotent: bool,
}

impl Series {
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(BraceSubset::len).collect()
    }

    /// Smallest `n ≥ 1` with `B^(n) = 0`, when the chain reaches zero.
    pub fn zero_index(&self) -> Option<usize> {
        self.nilpotent.then(|| self.terms.len())
    }
}

fn iterate_series<F>(b: &FiniteBrace, cap: usize, step: F) -> Series
where
    F: Fn(&BraceSubset) -> BraceSubset,
{
    let mut terms = vec![BraceSubset::full(b.order())];
    loop {
        let last = terms.last().unwrap();
        if last.len() == 1 {
            return Series {
                terms,
                nilpotent: true,
            };
        }
        if terms.len() > cap {
            return Series {
                terms,
                nilpotent: false,
            };
        }
        let next = step(last);
        if &next == last {
            return Series {
                terms,
                nilpotent: false,
            };
        }
        terms.push(next);
    }
}

/// `B^(1) = B`, `B^(n+1) = B^(n) * B`.
pub fn right_series(b: &FiniteBrace, cap: usize) -> Series {
    let all = BraceSubset::full(b.order());
    iterate_series(b, cap, |last| star_span(b, last, &all))
}

/// `B^1 = B`, `B^(n+1) = B * B^n`.
pub fn left_series(b: &FiniteBrace, cap: usize) -> Series {
    let all = BraceSubset::full(b.order());
    iterate_series(b, cap, |last| star_span(b, &all, last))
}

/// Solution on the elements of `b` with `r(a,b) = (λ_a(b), λ⁻¹_{λ_a(b)}(a))`.
pub fn associated_solution(b: &FiniteBrace) -> Result<Solution> {
    let n = b.order();
    if n > ASSOCIATED_SOLUTION_CAP {
        return Err(Error::CapExceeded {
            cap: ASSOCIATED_SOLUTION_CAP,
            reached: n,
        });
    }
    let table = (0..n).map(|a| (0..n).map(|x| b.lam(a, x)).collect()).collect();
    validate_solution(table, None)
}

/// The associated solution restricted to `subset`, without materializing
/// the whole solution (new index `i` is `subset[i]`).
pub fn associated_subsolution(b: &FiniteBrace, subset: &[usize]) -> Result<Solution> {
    let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if pos.len() != subset.len() {
        return Err(Error::Malformed("subset lists an element twice".into()));
    }
    let k = subset.len();
    let mut left = vec![vec![0; k]; k];
    let mut right = vec![vec![0; k]; k];
    for (i, &x) in subset.iter().enumerate() {
        for (j, &y) in subset.iter().enumerate() {
            let u = b.lam(x, y);
            let v = b.lam_inv(u, x);
            match (pos.get(&u), pos.get(&v)) {
                (Some(&pu), Some(&pv)) => {
                    left[i][j] = pu;
                    right[i][j] = pv;
                }
                _ => return Err(Error::NotInvariant(x, y)),
            }
        }
    }
    validate_solution(left, Some(right))
}

/// First retraction of the associated solution, computed from the λ classes.
pub fn associated_retract(b: &FiniteBrace) -> Result<RetractQuotient> {
    let reps = b.class_representatives();
    let k = reps.len();
    let mut left = vec![vec![usize::MAX; k]; k];
    for (ci, &x) in reps.iter().enumerate() {
        for y in 0..b.order() {
            let cj = b.lam_class(y);
            let c = b.lam_class(b.lam(x, y));
            if left[ci][cj] == usize::MAX {
                left[ci][cj] = c;
            } else if left[ci][cj] != c {
                return Err(Error::InternalInconsistency(format!(
                    "retraction not well defined at ({x}, {y})"
                )));
            }
        }
    }
    let retracted = validate_solution(left, None)
        .map_err(|e| Error::InternalInconsistency(format!("retraction is not a solution: {e}")))?;
    Ok(RetractQuotient {
        parent_size: b.order(),
        class_of: b.lam_classes().to_vec(),
        retracted,
    })
}

/// Multipermutation level of the associated solution.
pub fn associated_mpl(b: &FiniteBrace) -> Result<Level> {
    if b.order() == 1 {
        return Ok(Level::Finite(0));
    }
    let ret = associated_retract(b)?;
    if ret.classes() == b.order() {
        return Ok(Level::Infinite);
    }
    Ok(match mpl(&ret.retracted) {
        Level::Finite(k) => Level::Finite(k + 1),
        Level::Infinite => Level::Infinite,
    })
}

/// Witness `(a, b, c)` of `(a+b)·c + c ≠ a·c + b·c`, or `None` for a two-sided brace.
///
/// Up to order 256 every triple is tried. Above that the law is checked for
/// `a, b` over socle-coset representatives and `c` over additive generators:
/// both sides are additive in `c`, and `λ_{a+s} = λ_a` for `s` in the socle.
pub fn two_sided_witness(b: &FiniteBrace) -> Option<(usize, usize, usize)> {
    let n = b.order();
    let law = |x: usize, y: usize, w: usize| {
        b.add(b.mul(b.add(x, y), w), w) == b.add(b.mul(x, w), b.mul(y, w))
    };
    if n <= EXHAUSTIVE_TWO_SIDED_MAX {
        return (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |w| (x, y, w))))
            .find(|&(x, y, w)| !law(x, y, w));
    }
    let soc = socle(b);
    let reps = coset_representatives(b, &soc);
    let gens = b.additive_generators();
    for &x in &reps {
        for &y in &reps {
            for &w in &gens {
                if !law(x, y, w) {
                    return Some((x, y, w));
                }
            }
        }
    }
    None
}

pub fn is_two_sided(b: &FiniteBrace) -> bool {
    two_sided_witness(b).is_none()
}

/// One element from each additive coset of the subgroup `h`.
pub fn coset_representatives(b: &FiniteBrace, h: &BraceSubset) -> Vec<usize> {
    let members = h.elements();
    let mut covered = BraceSubset::empty(b.order());
    let mut reps = Vec::new();
    for a in 0..b.order() {
        if covered.contains(a) {
            continue;
        }
        reps.push(a);
        for &i in &members {
            covered.insert(b.add(a, i));
        }
    }
    reps
}

/// First `(a, c)` with `c ∈ soc(B)` and `[c,a] ≠ a⁻¹*c`.
pub fn socle_commutator_witness(b: &FiniteBrace) -> Option<(usize, usize)> {
    let soc = socle(b).elements();
    for a in 0..b.order() {
        let ai = b.mul_inv(a);
        for &c in &soc {
            let ci = b.mul_inv(c);
            let comm = b.mul(b.mul(b.mul(ci, ai), c), a);
            if comm != b.star(ai, c) {
                return Some((a, c));
            }
        }
    }
    None
}

pub fn check_socle_commutator(b: &FiniteBrace) -> bool {
    socle_commutator_witness(b).is_none()
}

/// Outcome of comparing the multipermutation level with the right chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop5Verdict {
    pub mpl: Level,
    /// `m` with `B^(m+1) = 0` and `B^(m) ≠ 0`, if the right chain reaches zero.
    pub right_nilpotency: Option<usize>,
    pub right_series_orders: Vec<usize>,
    pub holds: bool,
}

/// Level of the associated solution is `m` exactly when `B^(m+1) = 0 ≠ B^(m)`.
pub fn check_proposition_five(b: &FiniteBrace, cap: usize) -> Result<Prop5Verdict> {
    if b.order() == 1 {
        return Err(Error::Malformed("the zero brace is excluded".into()));
    }
    let level = associated_mpl(b)?;
    let series = right_series(b, cap);
    let right_nilpotency = series.zero_index().map(|k| k - 1);
    let holds = match (level, right_nilpotency) {
        (Level::Finite(m1), Some(m2)) => m1 == m2,
        (Level::Infinite, None) => true,
        _ => false,
    };
    Ok(Prop5Verdict {
        mpl: level,
        right_nilpotency,
        right_series_orders: series.orders(),
        holds,
    })
}

/// `Ret(solution of B) ≅ solution of B/soc(B)`.
pub fn retract_iso_check(b: &FiniteBrace) -> Result<bool> {
    let ret = associated_retract(b)?.retracted;
    let (q, _) = quotient(b, &socle(b))?;
    let sol_q = associated_solution(&q)?;
    Ok(is_isomorphic(&ret, &sol_q)?.is_some())
}

/// Brace with `λ_a = id` on `ℤ/f₁ × … × ℤ/f_k` (mixed-radix lexicographic order).
pub fn trivial_brace(factors: &[usize]) -> FiniteBrace {
    assert!(factors.iter().all(|&f| f >= 1), "cyclic factors must be positive");
    let n: usize = factors.iter().product();
    let decode = |mut i: usize| {
        let mut v = vec![0; factors.len()];
        for (slot, &f) in v.iter_mut().zip(factors).rev() {
            *slot = i % f;
            i /= f;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().zip(factors).fold(0, |acc, (&c, &f)| acc * f + c % f);
    let add = (0..n)
        .map(|a| {
            let va = decode(a);
            (0..n)
                .map(|b| {
                    let s: Vec<usize> = va.iter().zip(decode(b)).map(|(x, y)| x + y).collect();
                    encode(&s)
                })
                .collect()
        })
        .collect();
    let lam = vec![(0..n).collect(); n];
    FiniteBrace::from_tables(add, lam, 0).expect("trivial brace tables")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{b4, sol4};
    use crate::solution::trivial_solution;

    #[test]
    fn trivial_braces_validate() {
        let z4 = trivial_brace(&[4]);
        validate_brace(&z4).unwrap();
        assert_eq!(trivial_brace(&[2]).order(), 2);
        let k = trivial_brace(&[2, 2]);
        assert_eq!(k.order(), 4);
        validate_brace(&k).unwrap();
        validate_brace(&trivial_brace(&[2, 3])).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(z4.mul(a, b), z4.add(a, b));
                assert_eq!(z4.star(a, b), 0);
            }
        }
        assert_eq!(k.coords(), Some(Coords { modulus: 2, dim: 2 }));
        assert_eq!(trivial_brace(&[2, 3]).coords(), None);
    }

    #[test]
    fn b4_validates_in_both_forms() {
        let b = b4();
        validate_brace(&b).unwrap();
        validate_brace(&b.to_table()).unwrap();
    }

    #[test]
    fn corrupted_b4_is_caught() {
        let t = b4().to_table();
        let BraceJson::Table { order, add, mut lambda, zero } = t.to_json() else {
            unreachable!()
        };
        // swapping two entries keeps the row a bijection
        lambda[1].swap(0, 3);
        let bad = FiniteBrace::from_json(BraceJson::Table { order, add: add.clone(), lambda, zero }).unwrap();
        assert!(matches!(validate_brace(&bad), Err(Error::AxiomViolation { .. })));
        let BraceJson::Table { mut lambda, .. } = t.to_json() else { unreachable!() };
        lambda[2][1] = lambda[2][2];
        let err = FiniteBrace::from_tables(add, lambda, zero).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: Axiom::LambdaBijective, .. }));
    }

    #[test]
    fn stars_in_b4() {
        let b = b4();
        // elements: 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1)
        assert_eq!(b.star(2, 2), 3);
        for x in 0..4 {
            assert_eq!(b.star(3, x), 0);
            assert_eq!(b.star(x, 0), 0);
        }
    }

    #[test]
    fn left_distributivity_of_star() {
        let b = b4();
        for x in 0..4 {
            for y in 0..4 {
                for w in 0..4 {
                    assert_eq!(b.star(x, b.add(y, w)), b.add(b.star(x, y), b.star(x, w)));
                }
            }
        }
    }

    #[test]
    fn socles_and_ideals() {
        let b = b4();
        let soc = socle(&b);
        assert_eq!(soc.elements(), vec![0, 3]);
        assert!(is_ideal(&b, &soc));
        assert!(is_ideal(&b, &BraceSubset::zero(&b)));
        assert!(is_ideal(&b, &BraceSubset::full(4)));
        assert!(!is_ideal(&b, &BraceSubset::from_elements(4, [0, 2])));
        assert_eq!(socle(&trivial_brace(&[3])).len(), 3);
    }

    #[test]
    fn quotients() {
        let b = b4();
        let (q, proj) = quotient(&b, &socle(&b)).unwrap();
        assert_eq!(q.order(), 2);
        assert!(q.is_trivial());
        validate_brace(&q).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(proj[b.add(x, y)], q.add(proj[x], proj[y]));
                assert_eq!(proj[b.mul(x, y)], q.mul(proj[x], proj[y]));
            }
        }
        assert_eq!(quotient(&b, &BraceSubset::full(4)).unwrap().0.order(), 1);
        let (same, _) = quotient(&b, &BraceSubset::zero(&b)).unwrap();
        assert_eq!(associated_solution(&same).unwrap(), sol4());
        assert!(matches!(
            quotient(&b, &BraceSubset::from_elements(4, [0, 2])),
            Err(Error::NotAnIdeal)
        ));
    }

    #[test]
    fn star_spans_and_series() {
        let b = b4();
        let all = BraceSubset::full(4);
        let zero = BraceSubset::zero(&b);
        assert_eq!(star_span(&b, &zero, &all).len(), 1);
        assert_eq!(star_span(&b, &all, &zero).len(), 1);
        assert_eq!(star_span(&b, &all, &all).elements(), vec![0, 3]);
        let right = right_series(&b, 64);
        assert_eq!(right.orders(), vec![4, 2, 1]);
        assert_eq!(right.zero_index(), Some(3));
        assert_eq!(left_series(&b, 64).orders(), vec![4, 2, 1]);
        let t = trivial_brace(&[2, 2]);
        assert_eq!(right_series(&t, 64).orders(), vec![4, 1]);
        assert_eq!(star_span(&t, &BraceSubset::full(4), &BraceSubset::full(4)).len(), 1);
    }

    #[test]
    fn associated_solutions() {
        assert_eq!(associated_solution(&trivial_brace(&[3])).unwrap(), trivial_solution(3));
        assert_eq!(associated_solution(&b4()).unwrap(), sol4());
        assert_eq!(associated_mpl(&b4()).unwrap(), Level::Finite(2));
        let explicit = crate::solution::retract(&sol4()).unwrap();
        assert_eq!(associated_retract(&b4()).unwrap(), explicit);
    }

    #[test]
    fn two_sidedness() {
        assert!(is_two_sided(&trivial_brace(&[2, 2])));
        assert!(is_two_sided(&b4()));
    }

    #[test]
    fn socle_commutators() {
        assert!(check_socle_commutator(&trivial_brace(&[4])));
        let b = b4();
        assert_eq!(b.mul(b.mul(b.mul(b.mul_inv(3), b.mul_inv(2)), 3), 2), 0);
        assert_eq!(b.star(b.mul_inv(2), 3), 0);
        assert!(check_socle_commutator(&b));
    }

    #[test]
    fn level_matches_right_nilpotency_small() {
        let v = check_proposition_five(&trivial_brace(&[2]), 64).unwrap();
        assert_eq!((v.mpl, v.right_nilpotency, v.holds), (Level::Finite(1), Some(1), true));
        let v = check_proposition_five(&b4(), 64).unwrap();
        assert_eq!((v.mpl, v.right_nilpotency, v.holds), (Level::Finite(2), Some(2), true));
        assert!(check_proposition_five(&trivial_brace(&[1]), 64).is_err());
    }

    #[test]
    fn retraction_matches_socle_quotient() {
        assert!(retract_iso_check(&trivial_brace(&[3])).unwrap());
        assert!(retract_iso_check(&b4()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let b = b4();
        let text = serde_json::to_string(&b.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"repr":"vector","modulus":2,"dim":2,"lambda":[[0,1],[1,0],[1,0],[0,1]]}"#
        );
        let back = FiniteBrace::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        let t = b.to_table();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert!(text.starts_with(r#"{"repr":"table","order":4,"add":"#));
        let back = FiniteBrace::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        assert_eq!(back.coords(), Some(Coords { modulus: 2, dim: 2 }));
    }

    #[test]
    fn sampled_validation() {
        validate_brace_sampled(&b4(), 200, 7).unwrap();
    }
}
