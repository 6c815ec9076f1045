//! Finite rings over `ℤ/k`, group rings, and the adjoint operation `a∘b = a + b + ab`.
//!
//! A two-sided brace is the same thing as a radical ring: the brace product
//! is the adjoint operation and the star product is the ring product.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::brace::{two_sided_witness, Coords, FiniteBrace};
use crate::error::{Error, Result};
use crate::permgrp::PermGroup;

/// Rings up to this order keep a full multiplication table.
const MUL_TABLE_MAX: usize = 1024;

/// Largest ring materialized from a brace or group ring.
pub const RING_CAP: usize = 4096;

/// A finite ring on `(ℤ/k)^dim` with bilinear product given by structure
/// constants: `e_i e_j = Σ_l mul[i][j][l] e_l`. Elements are lexicographic
/// indices, as in [`Coords`].
#[derive(Debug, Clone)]
pub struct FiniteRing {
    space: Coords,
    mul: Vec<Vec<Vec<usize>>>,
    one: Option<usize>,
    table: Option<Vec<Vec<usize>>>,
}

/// `{"k": k, "dim": d, "mul": [[[coeffs]]], "unital": bool}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub k: usize,
    pub dim: usize,
    pub mul: Vec<Vec<Vec<usize>>>,
    pub unital: bool,
}

impl FiniteRing {
    /// Builds the ring; when `unital` is set the identity is searched for.
    pub fn new(k: usize, dim: usize, mul: Vec<Vec<Vec<usize>>>, unital: bool) -> Result<Self> {
        if k < 2 {
            return Err(Error::Malformed("ring modulus must be at least 2".into()));
        }
        let shape_ok = mul.len() == dim
            && mul
                .iter()
                .all(|row| row.len() == dim && row.iter().all(|c| c.len() == dim));
        if !shape_ok {
            return Err(Error::Malformed(format!("structure constants must be {dim}×{dim}×{dim}")));
        }
        let space = Coords { modulus: k, dim };
        let mul = mul
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.into_iter().map(|x| x % k).collect()).collect())
            .collect();
        let mut ring = FiniteRing {
            space,
            mul,
            one: None,
            table: None,
        };
        let n = space.size();
        if n <= MUL_TABLE_MAX {
            let table = (0..n).map(|a| (0..n).map(|b| ring.mul_direct(a, b)).collect()).collect();
            ring.table = Some(table);
        }
        if unital {
            let one = (0..n)
                .find(|&e| (0..dim).all(|i| {
                    let b = space.basis(i);
                    ring.mul(e, b) == b && ring.mul(b, e) == b
                }))
                .ok_or_else(|| Error::Malformed("ring marked unital has no identity".into()))?;
            ring.one = Some(one);
        }
        Ok(ring)
    }

    pub fn from_json(json: RingJson) -> Result<Self> {
        FiniteRing::new(json.k, json.dim, json.mul, json.unital)
    }

    pub fn to_json(&self) -> RingJson {
        RingJson {
            k: self.space.modulus,
            dim: self.space.dim,
            mul: self.mul.clone(),
            unital: self.one.is_some(),
        }
    }

    /// Ring with `ab = 0` for all `a, b`.
    pub fn zero_ring(k: usize, dim: usize) -> Self {
        FiniteRing::new(k, dim, vec![vec![vec![0; dim]; dim]; dim], false).expect("zero ring")
    }

    /// Strictly upper triangular `n×n` matrices over `ℤ/k`; basis `E_ij`
    /// (`i < j`) in lexicographic order of `(i, j)`.
    pub fn strictly_upper_triangular(n: usize, k: usize) -> Self {
        let basis: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let d = basis.len();
        let pos = |p: (usize, usize)| basis.iter().position(|&q| q == p);
        let mut mul = vec![vec![vec![0; d]; d]; d];
        for (a, &(i, j)) in basis.iter().enumerate() {
            for (b, &(j2, l)) in basis.iter().enumerate() {
                if j == j2 {
                    mul[a][b][pos((i, l)).unwrap()] = 1;
                }
            }
        }
        FiniteRing::new(k, d, mul, false).expect("upper triangular ring")
    }

    pub fn order(&self) -> usize {
        self.space.size()
    }

    pub fn coords(&self) -> Coords {
        self.space
    }

    pub fn one(&self) -> Option<usize> {
        self.one
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<usize>>] {
        &self.mul
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.space.add(a, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.space.neg(a)
    }

    fn mul_direct(&self, a: usize, b: usize) -> usize {
        let k = self.space.modulus;
        let (va, vb) = (self.space.decode(a), self.space.decode(b));
        let mut out = vec![0usize; self.space.dim];
        for (i, &x) in va.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in vb.iter().enumerate().filter(|(_, &y)| y != 0) {
                let xy = x * y % k;
                for (o, &c) in out.iter_mut().zip(&self.mul[i][j]) {
                    *o = (*o + xy * c) % k;
                }
            }
        }
        self.space.encode(&out)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a][b],
            None => self.mul_direct(a, b),
        }
    }

    /// `a∘b = a + b + ab`
    pub fn adjoint(&self, a: usize, b: usize) -> usize {
        self.add(self.add(a, b), self.mul(a, b))
    }

    /// `b` with `a∘b = b∘a = 0`, found by search.
    pub fn quasi_inverse(&self, a: usize) -> Option<usize> {
        (0..self.order())
            .find(|&b| self.adjoint(a, b) == 0)
            .filter(|&b| self.adjoint(b, a) == 0)
    }

    /// First element that is not quasi-regular.
    pub fn radical_witness(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.quasi_inverse(a).is_none())
    }
}

fn check_ring_triple(r: &FiniteRing, a: usize, b: usize, c: usize) -> Result<()> {
    let bad = |what: &str| {
        Err(Error::InternalInconsistency(format!("{what} fails at ({a}, {b}, {c})")))
    };
    if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)) {
        return bad("associativity");
    }
    if r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)) {
        return bad("left distributivity");
    }
    if r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c)) {
        return bad("right distributivity");
    }
    Ok(())
}

/// Exhaustive ring axioms (associativity, both distributive laws).
pub fn validate_ring(r: &FiniteRing) -> Result<()> {
    let n = r.order();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                check_ring_triple(r, a, b, c)?;
            }
        }
    }
    Ok(())
}

pub fn validate_ring_sampled(r: &FiniteRing, samples: usize, seed: u64) -> Result<()> {
    let n = r.order();
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        check_ring_triple(r, rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
    }
    Ok(())
}

/// Every element is quasi-regular.
pub fn is_jacobson_radical(r: &FiniteRing) -> bool {
    r.radical_witness().is_none()
}

/// `(R, +, ∘)` as a brace: `λ_a(b) = b + ab`.
pub fn brace_from_radical_ring(r: &FiniteRing) -> Result<FiniteBrace> {
    if let Some(a) = r.radical_witness() {
        return Err(Error::NotRadical(a));
    }
    let n = r.order();
    let add = (0..n).map(|a| (0..n).map(|b| r.add(a, b)).collect()).collect();
    let lam = (0..n)
        .map(|a| (0..n).map(|b| r.add(b, r.mul(a, b))).collect())
        .collect();
    FiniteBrace::from_tables(add, lam, r.zero())
}

/// `(B, +, *)` as a ring; requires a two-sided brace on `(ℤ/k)^d`.
pub fn ring_from_two_sided_brace(b: &FiniteBrace) -> Result<FiniteRing> {
    if let Some((x, y, z)) = two_sided_witness(b) {
        return Err(Error::NotTwoSided(x, y, z));
    }
    let space = b.coords().ok_or(Error::NoCoordinates)?;
    if space.size() > RING_CAP {
        return Err(Error::CapExceeded {
            cap: RING_CAP,
            reached: space.size(),
        });
    }
    let d = space.dim;
    let mul = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| space.decode(b.star(space.basis(i), space.basis(j))))
                .collect()
        })
        .collect();
    let ring = FiniteRing::new(space.modulus, d, mul, false)?;
    for x in 0..b.order() {
        for y in 0..b.order() {
            if ring.mul(x, y) != b.star(x, y) {
                return Err(Error::InternalInconsistency(format!(
                    "star is not bilinear at ({x}, {y})"
                )));
            }
        }
    }
    validate_ring(&ring)?;
    if let Some(a) = ring.radical_witness() {
        return Err(Error::InternalInconsistency(format!(
            "element {a} of a two-sided brace is not quasi-regular"
        )));
    }
    Ok(ring)
}

/// Group ring `ℤ/k[G]` with elements kept as sparse coefficient maps.
#[derive(Debug, Clone)]
pub struct GroupRing {
    k: usize,
    group: PermGroup,
}

/// Element of a group ring: group element index → non-zero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupRingElt {
    pub coeffs: BTreeMap<usize, usize>,
}

pub fn group_ring(k: usize, group: PermGroup) -> Result<GroupRing> {
    if k < 2 {
        return Err(Error::Malformed("coefficient modulus must be at least 2".into()));
    }
    Ok(GroupRing { k, group })
}

impl GroupRing {
    pub fn modulus(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// `k^|G|`
    pub fn size(&self) -> BigUint {
        BigUint::from(self.k).pow(self.group.order() as u32)
    }

    fn normalize(&self, mut coeffs: BTreeMap<usize, usize>) -> GroupRingElt {
        coeffs.retain(|_, c| {
            *c %= self.k;
            *c != 0
        });
        GroupRingElt { coeffs }
    }

    pub fn element(&self, coeffs: impl IntoIterator<Item = (usize, usize)>) -> GroupRingElt {
        let mut map = BTreeMap::new();
        for (g, c) in coeffs {
            *map.entry(g).or_insert(0) += c;
        }
        self.normalize(map)
    }

    pub fn zero(&self) -> GroupRingElt {
        GroupRingElt::default()
    }

    pub fn one(&self) -> GroupRingElt {
        self.basis(self.group.identity_index())
    }

    pub fn basis(&self, g: usize) -> GroupRingElt {
        self.element([(g, 1)])
    }

    pub fn add(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        self.element(a.coeffs.iter().chain(&b.coeffs).map(|(&g, &c)| (g, c)))
    }

    pub fn neg(&self, a: &GroupRingElt) -> GroupRingElt {
        self.element(a.coeffs.iter().map(|(&g, &c)| (g, self.k - c)))
    }

    pub fn sub(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        self.add(a, &self.neg(b))
    }

    /// Convolution `(Σ a_g g)(Σ b_h h) = Σ a_g b_h (gh)`.
    pub fn mul(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        let mut out = BTreeMap::new();
        for (&g, &x) in &a.coeffs {
            for (&h, &y) in &b.coeffs {
                let e = out.entry(self.group.mul_index(g, h)).or_insert(0);
                *e = (*e + x * y) % self.k;
            }
        }
        self.normalize(out)
    }

    /// `a∘b = a + b + ab`
    pub fn adjoint(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        self.add(&self.add(a, b), &self.mul(a, b))
    }

    /// Dense [`FiniteRing`] on the basis of group elements.
    pub fn to_finite_ring(&self) -> Result<FiniteRing> {
        let d = self.group.order();
        let size = self.size();
        if size > BigUint::from(RING_CAP) {
            return Err(Error::CapExceeded {
                cap: RING_CAP,
                reached: RING_CAP,
            });
        }
        let mut mul = vec![vec![vec![0; d]; d]; d];
        for (g, row) in mul.iter_mut().enumerate() {
            for (h, c) in row.iter_mut().enumerate() {
                c[self.group.mul_index(g, h)] = 1;
            }
        }
        FiniteRing::new(self.k, d, mul, true)
    }
}

/// `f(g) = g − 1` into the adjoint semigroup of `ℤ/k[G]`, with its checks.
#[derive(Debug, Clone)]
pub struct GroupAdjointEmbedding {
    /// `images[i] = f(G.elements()[i])`
    pub images: Vec<GroupRingElt>,
    pub pairs_checked: usize,
}

impl GroupAdjointEmbedding {
    pub fn image_size(&self) -> usize {
        self.images.iter().collect::<std::collections::HashSet<_>>().len()
    }
}

/// Verifies `f(gh) = f(g)∘f(h)` for all pairs and that `f` is injective.
pub fn embed_group_adjoint(group: &PermGroup, k: usize) -> Result<GroupAdjointEmbedding> {
    let ring = group_ring(k, group.clone())?;
    let one = ring.one();
    let images: Vec<GroupRingElt> = (0..group.order())
        .map(|g| ring.sub(&ring.basis(g), &one))
        .collect();
    let mut pairs_checked = 0;
    for g in 0..group.order() {
        for h in 0..group.order() {
            let lhs = &images[group.mul_index(g, h)];
            if *lhs != ring.adjoint(&images[g], &images[h]) {
                return Err(Error::InternalInconsistency(format!(
                    "f(gh) ≠ f(g)∘f(h) at ({g}, {h})"
                )));
            }
            pairs_checked += 1;
        }
    }
    let embedding = GroupAdjointEmbedding {
        images,
        pairs_checked,
    };
    if embedding.image_size() != group.order() {
        return Err(Error::InternalInconsistency("g ↦ g − 1 is not injective".into()));
    }
    Ok(embedding)
}
