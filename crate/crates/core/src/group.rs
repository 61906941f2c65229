//! Finite groups as index arithmetic.
//!
//! A [`GroupTable`] stores the full multiplication table of a finite group
//! together with inverses. Elements are plain indices `0..order`, and the
//! identity is always index `0` for groups built from permutations.
//! Subgroups, double cosets and automorphisms are all expressed in terms of
//! those indices.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Verdict;

/// Group elements are indices into a [`GroupTable`].
pub type Element = usize;

/// Default upper bound on the number of elements a closure may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 10080;

/// Tables larger than this are checked for associativity by sampling.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: Element,
    labels: Option<Vec<String>>,
    perms: Option<Vec<Vec<usize>>>,
}

impl GroupTable {
    /// Builds a group from an explicit Cayley table (`table[x][y] = x*y`).
    ///
    /// The identity and inverses are located from the table, and the group
    /// laws are verified: exhaustively for order up to 256, on a fixed
    /// pseudo-random sample of triples above that.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {x} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidTable(format!("entry {v} in row {x} is out of range")));
                }
                mul.push(v as u32);
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: l.len() });
            }
        }
        let at = |x: usize, y: usize| mul[x * n + y] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
            inv.push(y as u32);
        }
        let group = GroupTable { order: n, mul, inv, identity, labels, perms: None };
        group.check_laws()?;
        Ok(group)
    }

    /// Closure of a set of permutations (one-line notation) under composition.
    ///
    /// Elements are numbered in breadth-first discovery order starting from
    /// the identity, expanding each element by right multiplication with the
    /// generators in the order given, so the identity is index 0.
    pub fn from_generators(generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {i} acts on {} points, expected {degree}",
                    g.len()
                )));
            }
            validate_permutation(g).map_err(|e| match e {
                Error::InvalidPermutation(m) => Error::InvalidPermutation(format!("generator {i}: {m}")),
                other => other,
            })?;
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose(&elements[x], g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::SizeLimit { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }

        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(index[&compose(a, b)] as u32);
            }
        }
        let inv = elements.iter().map(|p| index[&invert(p)] as u32).collect();
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Ok(GroupTable { order: n, mul, inv, identity: 0, labels: Some(labels), perms: Some(elements) })
    }

    /// Cyclic group of order `n`; element `k` is the `k`-th power of the generator.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("cyclic group order must be positive".into()));
        }
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_generators(&[gen], DEFAULT_ELEMENT_CAP.max(n))
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon (`n >= 3`).
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Input("dihedral group needs n >= 3 vertices".into()));
        }
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_generators(&[rotation, reflection], DEFAULT_ELEMENT_CAP.max(2 * n))
    }

    /// Symmetric group on `n` points, generated by `(0 1)` and `(0 1 ... n-1)`.
    pub fn symmetric(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("symmetric group needs at least one point".into()));
        }
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        if gens.is_empty() {
            gens.push(vec![0]);
        }
        Self::from_generators(&gens, cap)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: Element) -> Element {
        self.inv[x] as usize
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: Element) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// The permutation realizing `x`, when the group was built from permutations.
    pub fn permutation(&self, x: Element) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[x].as_slice())
    }

    pub fn index_of_permutation(&self, perm: &[usize]) -> Option<Element> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn check_index(&self, x: Element) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x, order: self.order })
        }
    }

    /// Verifies identity, inverse and associativity laws.
    pub fn check_laws(&self) -> Result<()> {
        let n = self.order;
        let e = self.identity;
        for x in 0..n {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(Error::InvalidTable(format!("identity law fails at {x}")));
            }
            if self.mul(x, self.inv(x)) != e || self.mul(self.inv(x), x) != e {
                return Err(Error::InvalidTable(format!("inverse law fails at {x}")));
            }
        }
        let assoc = |x: usize, y: usize, z: usize| {
            if self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z)) {
                Ok(())
            } else {
                Err(Error::InvalidTable(format!("associativity fails at ({x}, {y}, {z})")))
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assoc(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                assoc(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }
}

/// `(a ∘ b)[i] = a[b[i]]`: apply `b` first, then `a`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn validate_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &j in p {
        if j >= p.len() {
            return Err(Error::InvalidPermutation(format!("image {j} out of range 0..{}", p.len())));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidPermutation(format!("image {j} repeated")));
        }
    }
    Ok(())
}

/// Cycle notation with fixed points omitted; the identity is `e`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut j = p[start];
        while j != start {
            seen[j] = true;
            cycle.push(j);
            j = p[j];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push('(');
        out.push_str(&body.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A subgroup `K`, stored as the sorted list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupEmbedding {
    elements: Vec<Element>,
    member: Vec<bool>,
}

impl SubgroupEmbedding {
    /// Wraps an explicit element list, checking that it is a subgroup.
    pub fn from_elements(group: &GroupTable, elements: &[Element]) -> Result<Self> {
        let mut member = vec![false; group.order()];
        for &x in elements {
            group.check_index(x)?;
            member[x] = true;
        }
        if !member[group.identity()] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let elems: Vec<Element> = (0..group.order()).filter(|&x| member[x]).collect();
        for &x in &elems {
            if !member[group.inv(x)] {
                return Err(Error::NotASubgroup(format!("inverse of {x} missing")));
            }
            for &y in &elems {
                if !member[group.mul(x, y)] {
                    return Err(Error::NotASubgroup(format!("product of {x} and {y} missing")));
                }
            }
        }
        Ok(SubgroupEmbedding { elements: elems, member })
    }

    pub fn trivial(group: &GroupTable) -> Self {
        let mut member = vec![false; group.order()];
        member[group.identity()] = true;
        SubgroupEmbedding { elements: vec![group.identity()], member }
    }

    pub fn whole(group: &GroupTable) -> Self {
        SubgroupEmbedding { elements: group.elements().collect(), member: vec![true; group.order()] }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.member.get(x).copied().unwrap_or(false)
    }
}

/// Smallest subgroup containing `seeds`.
pub fn subgroup_closure(group: &GroupTable, seeds: &[Element]) -> Result<SubgroupEmbedding> {
    for &s in seeds {
        group.check_index(s)?;
    }
    let mut member = vec![false; group.order()];
    member[group.identity()] = true;
    let mut queue = VecDeque::from([group.identity()]);
    // In a finite group, closure under right multiplication by the seeds
    // already yields inverses.
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = group.mul(x, s);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    let elements = (0..group.order()).filter(|&x| member[x]).collect();
    Ok(SubgroupEmbedding { elements, member })
}

/// Point stabilizer in a permutation group.
pub fn stabilizer(group: &GroupTable, point: usize) -> Result<SubgroupEmbedding> {
    let mut elements = Vec::new();
    for x in group.elements() {
        let p = group
            .permutation(x)
            .ok_or_else(|| Error::Input("stabilizer needs a group built from permutations".into()))?;
        if point >= p.len() {
            return Err(Error::Input(format!("point {point} out of range for degree {}", p.len())));
        }
        if p[point] == point {
            elements.push(x);
        }
    }
    SubgroupEmbedding::from_elements(group, &elements)
}

/// The partition of `G` into double cosets `KxK`.
///
/// Cosets are numbered by their smallest element, so the coset of the
/// identity (index 0) is coset 0 whenever the identity is element 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCosetPartition {
    cosets: Vec<Vec<Element>>,
    coset_of: Vec<usize>,
    inverse_coset: Vec<usize>,
    identity_coset: usize,
}

impl DoubleCosetPartition {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn cosets(&self) -> &[Vec<Element>] {
        &self.cosets
    }

    pub fn coset(&self, id: usize) -> &[Element] {
        &self.cosets[id]
    }

    pub fn coset_of(&self, x: Element) -> usize {
        self.coset_of[x]
    }

    pub fn inverse_coset(&self, id: usize) -> usize {
        self.inverse_coset[id]
    }

    pub fn identity_coset(&self) -> usize {
        self.identity_coset
    }

    pub fn representative(&self, id: usize) -> Element {
        self.cosets[id][0]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cosets.iter().map(Vec::len).collect()
    }

    pub fn group_order(&self) -> usize {
        self.coset_of.len()
    }
}

pub fn double_cosets(group: &GroupTable, k: &SubgroupEmbedding) -> DoubleCosetPartition {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<Element>> = Vec::new();
    for x in group.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = cosets.len();
        let mut members = Vec::new();
        for &k1 in k.elements() {
            let k1x = group.mul(k1, x);
            for &k2 in k.elements() {
                let y = group.mul(k1x, k2);
                if coset_of[y] == usize::MAX {
                    coset_of[y] = id;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        cosets.push(members);
    }
    let inverse_coset = cosets.iter().map(|c| coset_of[group.inv(c[0])]).collect();
    let identity_coset = coset_of[group.identity()];
    DoubleCosetPartition { cosets, coset_of, inverse_coset, identity_coset }
}

/// A verified automorphism `θ` of a [`GroupTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAutomorphism {
    perm: Vec<Element>,
    involutive: bool,
}

impl GroupAutomorphism {
    pub fn perm(&self) -> &[Element] {
        &self.perm
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.perm[x]
    }

    pub fn is_involutive(&self) -> bool {
        self.involutive
    }

    pub fn identity(group: &GroupTable) -> Self {
        GroupAutomorphism { perm: group.elements().collect(), involutive: true }
    }

    /// `x ↦ x⁻¹`; only an automorphism when the group is abelian.
    pub fn inversion(group: &GroupTable) -> Result<Self> {
        let perm: Vec<Element> = group.elements().map(|x| group.inv(x)).collect();
        check_automorphism(group, &perm, false)
    }

    /// `x ↦ g x g⁻¹`.
    pub fn conjugation(group: &GroupTable, g: Element) -> Result<Self> {
        group.check_index(g)?;
        let gi = group.inv(g);
        let perm: Vec<Element> = group.elements().map(|x| group.mul(group.mul(g, x), gi)).collect();
        check_automorphism(group, &perm, false)
    }
}

/// Verifies that `perm` (indexed by element) is a group automorphism.
pub fn check_automorphism(
    group: &GroupTable,
    perm: &[Element],
    require_involutive: bool,
) -> Result<GroupAutomorphism> {
    if perm.len() != group.order() {
        return Err(Error::LengthMismatch { expected: group.order(), found: perm.len() });
    }
    validate_permutation(perm)?;
    for x in group.elements() {
        for y in group.elements() {
            if perm[group.mul(x, y)] != group.mul(perm[x], perm[y]) {
                return Err(Error::NotAnAutomorphism { x, y });
            }
        }
    }
    let non_involutive = group.elements().find(|&x| perm[perm[x]] != x);
    if let (true, Some(x)) = (require_involutive, non_involutive) {
        return Err(Error::NotInvolutive { x });
    }
    Ok(GroupAutomorphism { perm: perm.to_vec(), involutive: non_involutive.is_none() })
}

/// Holds iff `θ(x) ∈ K x⁻¹ K` for every `x`; the witness is the first failing element.
pub fn theta_in_kxinvk(
    cosets: &DoubleCosetPartition,
    group: &GroupTable,
    theta: &GroupAutomorphism,
) -> Verdict<Element> {
    match group
        .elements()
        .find(|&x| cosets.coset_of(theta.apply(x)) != cosets.coset_of(group.inv(x)))
    {
        Some(x) => Verdict::Fails(x),
        None => Verdict::Holds,
    }
}
