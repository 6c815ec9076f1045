//! The structure group `G(X,r)` in semidirect form `ℤ^X ⋊ Sym(X)`.
//!
//! An element is a pair `(v, π)`: `v` is its coordinate vector in the free
//! abelian additive group on `X`, and `π` is `λ_g` restricted to `X`. The
//! product is `(v,π)(w,σ) = (v + π·w, πσ)`, which is `a·b = a + λ_a(b)`.
//! Since `λ_a` permutes coordinates, `a*c = λ_a(c) − c` is linear in `c`,
//! so the star sequences below never need the λ-part of a sum.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::brace::{associated_subsolution, BraceJson, Coords, FiniteBrace};
use crate::error::{Error, Result};
use crate::permgrp::{PermGroup, Permutation};
use crate::solution::Solution;

pub type IntVec = Vec<BigInt>;

/// `(π·w)[π(i)] = w[i]`
pub fn act(perm: &Permutation, w: &[BigInt]) -> IntVec {
    let mut out = vec![BigInt::zero(); w.len()];
    for (i, c) in w.iter().enumerate() {
        out[perm.apply(i)] = c.clone();
    }
    out
}

fn vec_add(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn is_zero_vec(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn basis_vector(m: usize, x: usize) -> IntVec {
    let mut v = vec![BigInt::zero(); m];
    v[x] = BigInt::one();
    v
}

/// Element of `G(X,r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GElement {
    vec: IntVec,
    perm: Permutation,
}

impl GElement {
    pub fn identity(m: usize) -> Self {
        GElement {
            vec: vec![BigInt::zero(); m],
            perm: Permutation::identity(m),
        }
    }

    /// `(e_x, λ_x)`
    pub fn generator(s: &Solution, x: usize) -> Result<Self> {
        if x >= s.size() {
            return Err(Error::IndexOutOfRange { index: x, size: s.size() });
        }
        Ok(GElement {
            vec: basis_vector(s.size(), x),
            perm: s.lambda(x).clone(),
        })
    }

    /// Product of generators; `(x, true)` stands for `x⁻¹`.
    pub fn word(s: &Solution, letters: &[(usize, bool)]) -> Result<Self> {
        letters.iter().try_fold(GElement::identity(s.size()), |acc, &(x, inv)| {
            let g = GElement::generator(s, x)?;
            acc.mul(&if inv { g.inverse() } else { g })
        })
    }

    pub fn degree(&self) -> usize {
        self.vec.len()
    }

    pub fn vec(&self) -> &[BigInt] {
        &self.vec
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn mul(&self, other: &GElement) -> Result<GElement> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(GElement {
            vec: vec_add(&self.vec, &act(&self.perm, &other.vec)),
            perm: self.perm.compose(&other.perm),
        })
    }

    /// `(−π⁻¹·v, π⁻¹)`
    pub fn inverse(&self) -> GElement {
        let inv = self.perm.inverse();
        GElement {
            vec: act(&inv, &self.vec).into_iter().map(|c| -c).collect(),
            perm: inv,
        }
    }

    pub fn pow(&self, k: usize) -> GElement {
        (0..k).fold(GElement::identity(self.degree()), |acc, _| {
            acc.mul(self).expect("same degree")
        })
    }

    /// Sum in the free abelian group; only the vector is defined here.
    pub fn add(&self, other: &GElement) -> Result<IntVec> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(vec_add(&self.vec, &other.vec))
    }

    pub fn negate(&self) -> IntVec {
        self.vec.iter().map(|c| -c).collect()
    }

    /// `λ_g(w) = π·w`
    pub fn lambda(&self, w: &[BigInt]) -> IntVec {
        act(&self.perm, w)
    }
}

/// `a*b = π_a·b − b`
pub fn star_vector(a: &GElement, b: &[BigInt]) -> Result<IntVec> {
    if a.degree() != b.len() {
        return Err(Error::DegreeMismatch(a.degree(), b.len()));
    }
    Ok(vec_sub(&a.lambda(b), b))
}

/// `e_1 = a*b`, `e_{k+1} = a*e_k`, for `k = 1..=k_max`.
pub fn e_sequence(a: &GElement, b: &GElement, k_max: usize) -> Result<Vec<IntVec>> {
    let mut out = Vec::with_capacity(k_max);
    let mut cur = b.vec().to_vec();
    for _ in 0..k_max {
        cur = star_vector(a, &cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `L_{a^m}(b) = b + Σ_{i=1}^m C(m,i) e_i(a,b)`, compared exactly.
pub fn check_binomial_identity(a: &GElement, b: &GElement, m: usize) -> Result<bool> {
    let lhs = act(&a.perm().pow(m), b.vec());
    let es = e_sequence(a, b, m)?;
    let rhs = es.iter().enumerate().fold(b.vec().to_vec(), |acc, (i, e)| {
        let c = binomial(m, i + 1);
        acc.iter().zip(e).map(|(x, y)| x + &c * y).collect()
    });
    Ok(lhs == rhs)
}

/// With `n` the order of `π_a` (so `L_{a^n} = id`), checks
/// `n·e_k = −Σ_{i=2}^n C(n,i) e_{i+k−1}` for `k = 1..=k_max`.
pub fn check_eq2_recursion(a: &GElement, b: &GElement, k_max: usize) -> Result<bool> {
    let n = a.perm().order();
    let es = e_sequence(a, b, k_max + n)?;
    let e = |k: usize| &es[k - 1];
    let nb = BigInt::from(n);
    for k in 1..=k_max {
        let lhs: IntVec = e(k).iter().map(|c| &nb * c).collect();
        let mut rhs = vec![BigInt::zero(); a.degree()];
        for i in 2..=n {
            let c = binomial(n, i);
            for (r, x) in rhs.iter_mut().zip(e(i + k - 1)) {
                *r -= &c * x;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilCriterion {
    pub vanishes: bool,
    /// Smallest `k` with `e_k = 0`.
    pub first_k: Option<usize>,
}

/// Looks for some `e_k(a,b) = 0` with `k ≤ bound` (default `m·order(π_a)`)
/// and cross-checks that this happens exactly when `e_1 = 0`.
pub fn lemma_nil_criterion(a: &GElement, b: &GElement, bound: Option<usize>) -> Result<NilCriterion> {
    let bound = bound.unwrap_or(a.degree() * a.perm().order()).max(1);
    let es = e_sequence(a, b, bound)?;
    let first_k = es.iter().position(|e| is_zero_vec(e)).map(|i| i + 1);
    let vanishes = first_k.is_some();
    if vanishes != is_zero_vec(&es[0]) {
        return Err(Error::InternalInconsistency(format!(
            "star sequence vanishes at {first_k:?} but e_1 = {:?}",
            es[0]
        )));
    }
    Ok(NilCriterion { vanishes, first_k })
}

/// `[G : soc(G)] = |𝒢(X,r)|`
pub fn socle_index(s: &Solution, cap: usize) -> Result<usize> {
    Ok(PermGroup::closure(s.size(), &s.permutation_generators(), cap)?.order())
}

/// Checks the defining relations `x·y = (^x y)(x^y)` in the representation.
pub fn check_relations(s: &Solution) -> bool {
    let m = s.size();
    (0..m).all(|x| {
        (0..m).all(|y| {
            let (u, v) = s.r(x, y);
            let g = |z| GElement::generator(s, z).unwrap();
            g(x).mul(&g(y)).unwrap() == g(u).mul(&g(v)).unwrap()
        })
    })
}

/// A solution embedded in a finite left brace.
#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    pub brace: FiniteBrace,
    pub modulus: usize,
    /// Brace element of each point of X.
    pub inject: Vec<usize>,
    /// Associated solution of `brace` restricted to `inject(X)`, indexed like X.
    pub solution_image: Solution,
}

#[derive(Serialize)]
pub struct EmbeddingJson {
    #[serde(flatten)]
    pub brace: BraceJson,
    pub inject: Vec<Vec<usize>>,
}

impl EmbeddingResult {
    pub fn to_json(&self) -> EmbeddingJson {
        let space = self.brace.coords().expect("embedded braces are in vector form");
        EmbeddingJson {
            brace: self.brace.to_json(),
            inject: self.inject.iter().map(|&e| space.decode(e)).collect(),
        }
    }
}

/// Embeds `s` into the finite brace `G(X,r)/n′G(X,r)`, `n′ = max([G:soc G], 2)`.
///
/// The quotient is enumerated by closing `{(e_x mod n′, λ_x)}` under the
/// product inside `(ℤ/n′)^m ⋊ Sym(X)`; it must have exactly `n′^m`
/// elements with the vector part determining the permutation part.
pub fn embed_finite_brace(s: &Solution, cap: usize) -> Result<EmbeddingResult> {
    let m = s.size();
    let n = socle_index(s, cap)?;
    let modulus = n.max(2);
    let order = modulus
        .checked_pow(m as u32)
        .filter(|&o| o <= cap)
        .ok_or(Error::CapExceeded { cap, reached: cap })?;
    let space = Coords { modulus, dim: m };

    let mut perms: Vec<Permutation> = vec![Permutation::identity(m)];
    let mut perm_id = std::collections::HashMap::from([(perms[0].clone(), 0usize)]);
    let mut id_of = vec![usize::MAX; order];
    id_of[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let gens = s.permutation_generators();
    let mut reached = 1;
    while let Some(a) = queue.pop_front() {
        let v = space.decode(a);
        let pi = perms[id_of[a]].clone();
        for (x, lx) in gens.iter().enumerate() {
            // (v, π)(e_x, λ_x) = (v + e_{π(x)}, π λ_x)
            let mut w = v.clone();
            let slot = pi.apply(x);
            w[slot] = (w[slot] + 1) % modulus;
            let idx = space.encode(&w);
            let p = pi.compose(lx);
            let pid = *perm_id.entry(p.clone()).or_insert_with(|| {
                perms.push(p);
                perms.len() - 1
            });
            if id_of[idx] == usize::MAX {
                id_of[idx] = pid;
                reached += 1;
                queue.push_back(idx);
            } else if id_of[idx] != pid {
                return Err(Error::InternalInconsistency(format!(
                    "vector {w:?} carries two permutation parts"
                )));
            }
        }
    }
    if reached != order {
        return Err(Error::InternalInconsistency(format!(
            "quotient has {reached} elements, expected {order}"
        )));
    }
    let inject: Vec<usize> = (0..m).map(|x| space.basis(x)).collect();
    let brace = FiniteBrace::from_vector_ids(space, &id_of, &perms).with_mul_generators(inject.clone());
    let solution_image = associated_subsolution(&brace, &inject)?;
    if &solution_image != s {
        return Err(Error::InternalInconsistency(
            "restricted solution differs from the input".into(),
        ));
    }
    Ok(EmbeddingResult {
        brace,
        modulus,
        inject,
        solution_image,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremOneReport {
    /// Every pair of generators has a vanishing star sequence.
    pub hypothesis: bool,
    pub trivial: bool,
    /// First pair whose star sequence never vanishes.
    pub witness: Option<(usize, usize)>,
    pub holds: bool,
}

/// If every `e_k(x,y)` sequence vanishes then the solution is trivial.
pub fn theorem_one_report(s: &Solution) -> Result<TheoremOneReport> {
    let m = s.size();
    let mut witness = None;
    'outer: for x in 0..m {
        let a = GElement::generator(s, x)?;
        for y in 0..m {
            let b = GElement::generator(s, y)?;
            if !lemma_nil_criterion(&a, &b, None)?.vanishes {
                witness = Some((x, y));
                break 'outer;
            }
        }
    }
    let hypothesis = witness.is_none();
    let trivial = s.is_trivial();
    Ok(TheoremOneReport {
        hypothesis,
        trivial,
        witness,
        holds: !hypothesis || trivial,
    })
}

pub fn check_theorem_one(s: &Solution) -> bool {
    theorem_one_report(s).map(|r| r.holds).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NonAbelianReport {
    pub holds: bool,
    /// Generators with `x·y ≠ y·x`.
    pub witness: Option<(usize, usize)>,
}

/// A non-trivial solution must have non-commuting generators.
pub fn check_nonabelian(s: &Solution) -> NonAbelianReport {
    let m = s.size();
    let g: Vec<GElement> = (0..m).map(|x| GElement::generator(s, x).unwrap()).collect();
    let witness = (0..m)
        .flat_map(|x| (x + 1..m).map(move |y| (x, y)))
        .find(|&(x, y)| g[x].mul(&g[y]).unwrap() != g[y].mul(&g[x]).unwrap());
    NonAbelianReport {
        holds: s.is_trivial() || witness.is_some(),
        witness,
    }
}
