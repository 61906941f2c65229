//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wgelfand::prelude::*;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Group multiplication recomputed from the permutation realization, or
/// from addition mod `n` for groups without one.
pub struct OracleGroup {
    pub n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl OracleGroup {
    pub fn from_permutations(g: &GroupTable) -> Self {
        let n = g.order();
        let perms: Vec<Vec<usize>> = (0..n).map(|x| g.permutation(x).expect("permutation group").to_vec()).collect();
        let index: BTreeMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                // (a b)(i) = a(b(i)).
                let ab: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
                mul[a * n + b] = index[ab.as_slice()];
            }
        }
        let e = (0..n).find(|&x| perms[x].iter().enumerate().all(|(i, &v)| i == v)).unwrap();
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == e).unwrap()).collect();
        OracleGroup { n, mul, inv }
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n * n).map(|ab| (ab / n + ab % n) % n).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        OracleGroup { n, mul, inv }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Plain double loop `Σ_y f(y) g(y⁻¹x)`.
    pub fn classical_convolve(&self, f: &[C], g: &[C]) -> Vec<C> {
        let mut out = vec![c(0.0, 0.0); self.n];
        for (x, o) in out.iter_mut().enumerate() {
            for y in 0..self.n {
                *o += f[y] * g[self.mul(self.inv(y), x)];
            }
        }
        out
    }

    /// `ω⁻¹ · ((ωf) ∗ (ωg))` with the classical convolution.
    pub fn weighted_convolve(&self, f: &[C], g: &[C], w: &[f64]) -> Vec<C> {
        let wf: Vec<C> = f.iter().zip(w).map(|(a, b)| a * b).collect();
        let wg: Vec<C> = g.iter().zip(w).map(|(a, b)| a * b).collect();
        self.classical_convolve(&wf, &wg).into_iter().zip(w).map(|(v, b)| v / b).collect()
    }

    /// Double cosets as sets, numbered by their smallest element.
    pub fn double_cosets(&self, k: &[usize]) -> Vec<BTreeSet<usize>> {
        let mut seen: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for x in 0..self.n {
            let orbit: BTreeSet<usize> =
                k.iter().flat_map(|&a| k.iter().map(move |&b| (a, b))).map(|(a, b)| self.mul(self.mul(a, x), b)).collect();
            seen.entry(*orbit.first().unwrap()).or_insert(orbit);
        }
        seen.into_values().collect()
    }
}

/// Solutions of the spherical functional equation found without the
/// algebra: multi-start Gauss-Newton on the unknowns `ψ_i = ω(D_i) φ(D_i)`
/// of `(1/|K|) Σ_k ψ(a_i k a_j) = ψ_i ψ_j`, with `ψ_0 = 1`.
pub fn brute_force_spherical(og: &OracleGroup, k: &[usize], w: &[f64]) -> Vec<Vec<C>> {
    let cosets = og.double_cosets(k);
    let d = cosets.len();
    let coset_of = |x: usize| cosets.iter().position(|s| s.contains(&x)).unwrap();
    let reps: Vec<usize> = cosets.iter().map(|s| *s.first().unwrap()).collect();
    // p[i][j][m] = fraction of k with a_i k a_j in D_m.
    let mut p = vec![vec![vec![0.0; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            for &kk in k {
                p[i][j][coset_of(og.mul(og.mul(reps[i], kk), reps[j]))] += 1.0 / k.len() as f64;
            }
        }
    }
    let unknowns = d - 1;
    let residual = |psi: &[C]| -> Vec<C> {
        let mut r = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let rhs: C = (0..d).map(|m| psi[m] * p[i][j][m]).sum();
                r.push(psi[i] * psi[j] - rhs);
            }
        }
        r
    };
    let mut found: Vec<Vec<C>> = Vec::new();
    if unknowns == 0 {
        found.push(vec![c(1.0, 0.0)]);
    } else {
        let mut r = rng(0xB0B);
        for _ in 0..400 {
            let mut psi: Vec<C> = std::iter::once(c(1.0, 0.0))
                .chain((0..unknowns).map(|_| c(r.random_range(-4.0..4.0), r.random_range(-4.0..4.0))))
                .collect();
            for _ in 0..200 {
                let f = residual(&psi);
                let rows = f.len();
                let mut jac = DMatrix::<C>::zeros(rows, unknowns);
                for i in 0..d {
                    for j in 0..d {
                        let row = i * d + j;
                        for u in 1..d {
                            let mut v = -c(p[i][j][u], 0.0);
                            if i == u {
                                v += psi[j];
                            }
                            if j == u {
                                v += psi[i];
                            }
                            jac[(row, u - 1)] = v;
                        }
                    }
                }
                let rhs = DVector::from_iterator(rows, f.iter().map(|v| -v));
                let Ok(step) = jac.svd(true, true).solve(&rhs, 1e-14) else { break };
                for u in 1..d {
                    psi[u] += step[u - 1];
                }
                if step.norm() < 1e-15 {
                    break;
                }
            }
            let res = residual(&psi).iter().map(|v| v.norm()).fold(0.0, f64::max);
            if res < 1e-11 && !found.iter().any(|s| max_diff(s, &psi) < 1e-6) {
                found.push(psi);
            }
        }
    }
    found
        .into_iter()
        .map(|psi| psi.iter().enumerate().map(|(i, v)| v / w[reps[i]]).collect())
        .collect()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Every vector in `a` has a partner in `b` within `tol`, and the counts match.
pub fn same_sets(a: &[Vec<C>], b: &[Vec<C>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| max_diff(x, y) < tol))
        && b.iter().all(|y| a.iter().any(|x| max_diff(x, y) < tol))
}

pub struct Instance {
    pub name: String,
    pub group: GroupTable,
    pub subgroup: SubgroupEmbedding,
}

impl Instance {
    pub fn new(name: &str, group: GroupTable, subgroup: SubgroupEmbedding) -> Self {
        Instance { name: name.to_string(), group, subgroup }
    }

    pub fn pair(&self, weight: Weight) -> WeightedPair {
        WeightedPair::new(&self.group, self.subgroup.clone(), weight).unwrap()
    }

    pub fn uniform(&self) -> WeightedPair {
        self.pair(Weight::uniform(self.group.order()))
    }

    pub fn cosets(&self) -> DoubleCosetPartition {
        double_cosets(&self.group, &self.subgroup)
    }

    pub fn oracle(&self) -> OracleGroup {
        match self.group.permutation(0) {
            Some(_) => OracleGroup::from_permutations(&self.group),
            None => OracleGroup::cyclic(self.group.order()),
        }
    }
}

pub fn s3() -> GroupTable {
    GroupTable::symmetric(3, DEFAULT_ELEMENT_CAP).unwrap()
}

pub fn perm_subgroup(g: &GroupTable, gens: &[&[usize]]) -> SubgroupEmbedding {
    let seeds: Vec<usize> = gens.iter().map(|p| g.index_of_permutation(p).unwrap()).collect();
    subgroup_closure(g, &seeds).unwrap()
}

pub fn s3_transposition() -> Instance {
    let g = s3();
    let k = perm_subgroup(&g, &[&[1, 0, 2]]);
    Instance::new("S3 / <(0 1)>", g, k)
}

pub fn s4_point_stabilizer() -> Instance {
    let g = GroupTable::symmetric(4, DEFAULT_ELEMENT_CAP).unwrap();
    let k = stabilizer(&g, 3).unwrap();
    Instance::new("S4 / S3", g, k)
}

/// Weighted Gelfand instances used across the spectral suites.
pub fn gelfand_instances() -> Vec<Instance> {
    let mut out = vec![s3_transposition(), s4_point_stabilizer()];
    for n in [2usize, 3, 4, 5, 6] {
        let g = GroupTable::cyclic(n).unwrap();
        let k = SubgroupEmbedding::trivial(&g);
        out.push(Instance::new(&format!("C{n} / e"), g, k));
    }
    let g = GroupTable::cyclic(6).unwrap();
    let k = subgroup_closure(&g, &[3]).unwrap();
    out.push(Instance::new("C6 / C2", g, k));
    let g = GroupTable::dihedral(4).unwrap();
    let k = perm_subgroup(&g, &[&[0, 3, 2, 1]]);
    out.push(Instance::new("D4 / <reflection>", g, k));
    let g = GroupTable::dihedral(5).unwrap();
    let k = perm_subgroup(&g, &[&[0, 4, 3, 2, 1]]);
    out.push(Instance::new("D5 / <reflection>", g, k));
    let g = GroupTable::symmetric(4, DEFAULT_ELEMENT_CAP).unwrap();
    let k = perm_subgroup(&g, &[&[1, 0, 2, 3], &[0, 1, 3, 2]]);
    out.push(Instance::new("S4 / S2xS2", g, k));
    out
}

/// Random weight constant on double cosets, equal to 1 on `K`.
pub fn random_bi_invariant_weight(r: &mut ChaCha8Rng, cosets: &DoubleCosetPartition) -> Weight {
    let values: Vec<f64> =
        (0..cosets.len()).map(|i| if i == cosets.identity_coset() { 1.0 } else { r.random_range(0.2..5.0) }).collect();
    Weight::by_double_coset(cosets, &values).unwrap()
}

/// Random weight with `ω(x) = ω(x⁻¹)` and `ω(e) = 1`.
pub fn random_symmetric_weight(r: &mut ChaCha8Rng, g: &GroupTable) -> Weight {
    let mut values = vec![0.0; g.order()];
    for x in g.elements() {
        if x == g.identity() {
            values[x] = 1.0;
        } else if values[x] == 0.0 {
            let v = r.random_range(0.2..5.0);
            values[x] = v;
            values[g.inv(x)] = v;
        }
    }
    Weight::new(values).unwrap()
}

pub fn random_weight(r: &mut ChaCha8Rng, n: usize) -> Weight {
    Weight::new((0..n).map(|_| r.random_range(0.2..5.0)).collect()).unwrap()
}

pub fn random_complex(r: &mut ChaCha8Rng) -> C {
    c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn random_function(r: &mut ChaCha8Rng, n: usize) -> GFunction {
    GFunction::new((0..n).map(|_| random_complex(r)).collect())
}

pub fn random_bi_invariant(r: &mut ChaCha8Rng, d: usize) -> BiInvariantFunction {
    BiInvariantFunction::new((0..d).map(|_| random_complex(r)).collect())
}

/// Random function that is constant on left cosets `kx`.
pub fn random_left_invariant(r: &mut ChaCha8Rng, g: &GroupTable, k: &SubgroupEmbedding) -> GFunction {
    let mut values: Vec<Option<C>> = vec![None; g.order()];
    for x in g.elements() {
        if values[x].is_none() {
            let v = random_complex(r);
            for &kk in k.elements() {
                values[g.mul(kk, x)] = Some(v);
            }
        }
    }
    GFunction::new(values.into_iter().map(Option::unwrap).collect())
}

/// A random non-identity involutive automorphism, when one exists among
/// inversion (abelian case) and conjugations by involutions.
pub fn random_involutive_automorphism(r: &mut ChaCha8Rng, g: &GroupTable) -> GroupAutomorphism {
    let mut candidates: Vec<GroupAutomorphism> = Vec::new();
    if g.is_abelian() {
        candidates.push(GroupAutomorphism::inversion(g).unwrap());
    }
    for x in g.elements() {
        if x != g.identity() && g.mul(x, x) == g.identity() {
            candidates.push(GroupAutomorphism::conjugation(g, x).unwrap());
        }
    }
    candidates.push(GroupAutomorphism::identity(g));
    let i = r.random_range(0..candidates.len());
    candidates.swap_remove(i)
}

/// Every subgroup generated by at most two elements.
pub fn small_subgroups(g: &GroupTable) -> Vec<SubgroupEmbedding> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in g.elements() {
        for b in a..g.order() {
            let k = subgroup_closure(g, &[a, b]).unwrap();
            if seen.insert(k.elements().to_vec()) {
                out.push(k);
            }
        }
    }
    out
}
