//! Permutations of `{0..n-1}` and finite permutation groups given by generators.
//!
//! Composition is function composition: `f.compose(&g)` is the map `x -> f(g(x))`.
//! Every module in the crate uses this convention.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on enumerated group orders.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A bijection of `{0..n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![usize::MAX; n];
        for (i, &img) in images.iter().enumerate() {
            if img >= n {
                return Err(Error::IndexOutOfRange { index: img, size: n });
            }
            if seen[img] != usize::MAX {
                return Err(Error::NotABijection {
                    side: "permutation",
                    index: img,
                    hits: (seen[img], i),
                });
            }
            seen[img] = i;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `from_cycles(3, &[&[0, 1]])`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::IndexOutOfRange { index: a, size: degree });
                }
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn try_compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.extend(std::iter::repeat(1).take(self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(Vec::len)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `[g, h] = g⁻¹ h⁻¹ g h`.
pub fn commutator(g: &Permutation, h: &Permutation) -> Permutation {
    g.inverse()
        .compose(&h.inverse())
        .compose(g)
        .compose(h)
}

/// Decides whether `[[…[g,h],h]…,h]` reaches the identity within `bound` steps.
///
/// The iterated commutators live in a finite group, so a repeated value
/// before the identity proves the sequence never gets there.
pub fn is_engel_pair(g: &Permutation, h: &Permutation, bound: usize) -> bool {
    let mut seen = HashSet::new();
    let mut c = commutator(g, h);
    for _ in 0..bound.max(1) {
        if c.is_identity() {
            return true;
        }
        if !seen.insert(c.clone()) {
            return false;
        }
        c = commutator(&c, h);
    }
    false
}

/// Lower central series summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Nilpotency class when nilpotent (0 for the trivial group).
    pub class: Option<usize>,
    /// Orders of γ₁ = G, γ₂ = [G,G], … until the series stabilizes.
    pub series_orders: Vec<usize>,
}

/// A permutation group with its element set enumerated.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

/// `{"degree": n, "generators": [...]}`
#[derive(Serialize, Deserialize)]
pub struct PermGroupJson {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl PermGroup {
    /// Breadth-first product closure of `generators`; element 0 is the identity.
    pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<PermGroup> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elements[i].compose(g);
                if index.contains_key(&p) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::CapExceeded {
                        cap,
                        reached: elements.len(),
                    });
                }
                index.insert(p.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
        Ok(PermGroup {
            degree,
            generators: generators.to_vec(),
            elements,
            index,
        })
    }

    pub fn from_json(json: &PermGroupJson, cap: usize) -> Result<PermGroup> {
        PermGroup::closure(json.degree, &json.generators, cap)
    }

    pub fn to_json(&self) -> PermGroupJson {
        PermGroupJson {
            degree: self.degree,
            generators: self.generators.clone(),
        }
    }

    pub fn cyclic(n: usize) -> PermGroup {
        let c: Vec<usize> = (0..n).collect();
        let gen = Permutation::from_cycles(n, &[&c]).expect("n-cycle");
        PermGroup::closure(n, &[gen], DEFAULT_CAP).expect("cyclic group")
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let c: Vec<usize> = (0..n).collect();
        let mut gens = vec![Permutation::from_cycles(n, &[&c]).expect("n-cycle")];
        if n > 1 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).expect("transposition"));
        }
        PermGroup::closure(n, &gens, DEFAULT_CAP).expect("symmetric group")
    }

    /// Symmetries of an `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> PermGroup {
        let c: Vec<usize> = (0..n).collect();
        let rot = Permutation::from_cycles(n, &[&c]).expect("rotation");
        let refl = Permutation::from_images((0..n).map(|i| (n - i) % n).collect())
            .expect("reflection");
        PermGroup::closure(n, &[rot, refl], DEFAULT_CAP).expect("dihedral group")
    }

    /// ℤ/2 × ℤ/2 acting regularly on four points.
    pub fn klein_four() -> PermGroup {
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        PermGroup::closure(4, &[a, b], DEFAULT_CAP).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of the product `elements[a] ∘ elements[b]`.
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, g)| self.generators[i + 1..].iter().all(|h| g.compose(h) == h.compose(g)))
    }

    /// First pair `(g, h)` (element indices) that is not Engel, if any.
    pub fn engel_witness(&self) -> Option<(usize, usize)> {
        let bound = self.order();
        for (i, g) in self.elements.iter().enumerate() {
            for (j, h) in self.elements.iter().enumerate() {
                if !is_engel_pair(g, h, bound) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_engel_group(&self) -> bool {
        self.engel_witness().is_none()
    }

    /// Lower central series γ_{i+1} = [γ_i, G], iterated until it stops shrinking.
    pub fn lower_central_series(&self) -> Vec<HashSet<Permutation>> {
        let mut series = vec![self.elements.iter().cloned().collect::<HashSet<_>>()];
        loop {
            let last = series.last().unwrap();
            let mut gens: Vec<Permutation> = last
                .iter()
                .flat_map(|x| self.elements.iter().map(move |g| commutator(x, g)))
                .filter(|c| !c.is_identity())
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            gens.sort();
            let next: HashSet<Permutation> = PermGroup::closure(self.degree, &gens, self.order())
                .expect("subgroup of an enumerated group")
                .elements
                .into_iter()
                .collect();
            if next.len() == last.len() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> Nilpotency {
        let series = self.lower_central_series();
        let series_orders: Vec<usize> = series.iter().map(HashSet::len).collect();
        let nilpotent = *series_orders.last().unwrap() == 1;
        Nilpotency {
            nilpotent,
            class: nilpotent.then(|| series_orders.len() - 1),
            series_orders,
        }
    }
}
