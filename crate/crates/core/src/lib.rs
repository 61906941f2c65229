//! Weighted harmonic analysis on finite groups.
//!
//! Given a finite group `G`, a subgroup `K` and a positive weight `ω`, this
//! crate builds the algebra of `K`-bi-invariant functions under the weighted
//! convolution
//!
//! ```text
//! (f ∗_ω g)(x) = Σ_y f(y) g(y⁻¹x) ω(y) ω(y⁻¹x) / ω(x)
//! ```
//!
//! decides whether `(G, K, ω)` is a weighted Gelfand pair, enumerates the
//! `ω`-spherical functions, evaluates the weighted spherical Fourier
//! transform, and analyses multipliers of the algebra through their symbols.
//!
//! ```
//! use wgelfand::prelude::*;
//!
//! let g = GroupTable::symmetric(3, DEFAULT_ELEMENT_CAP).unwrap();
//! let t = g.index_of_permutation(&[1, 0, 2]).unwrap();
//! let k = subgroup_closure(&g, &[t]).unwrap();
//! let pair = WeightedPair::new(&g, k, Weight::uniform(g.order())).unwrap();
//! let algebra = HeckeAlgebra::new(&g, &pair).unwrap();
//! assert!(is_weighted_gelfand(&algebra, DEFAULT_TOLERANCE).holds());
//!
//! let set = enumerate_spherical(&g, &algebra, &EnumerationOptions::default()).unwrap();
//! assert_eq!(set.len(), 2);
//! ```

pub mod cli;
pub mod error;
pub mod fourier;
pub mod function;
pub mod group;
pub mod hecke;
mod linalg;
pub mod multiplier;
pub mod spherical;

use serde::Serialize;

pub use error::{Error, Result};

/// Default absolute comparison tolerance for values of moderate magnitude.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default seed for every randomized numerical routine.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Outcome of a property check that can exhibit a counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "witness")]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

pub mod prelude {
    pub use crate::fourier::{
        injectivity_check, spherical_transform, verify_convolution_theorem, FourierTable, Injectivity,
    };
    pub use crate::function::{
        gamma, multiplication_operator, reflect, sharp_projection, theta_pullback, translate,
        weight_checks, weighted_convolve, weighted_l1_norm, BiInvariantFunction, GFunction, Weight,
        WeightFlags,
    };
    pub use crate::group::{
        check_automorphism, double_cosets, stabilizer, subgroup_closure, theta_in_kxinvk,
        DoubleCosetPartition, Element, GroupAutomorphism, GroupTable, SubgroupEmbedding,
        DEFAULT_ELEMENT_CAP,
    };
    pub use crate::hecke::{
        check_rap_condition, check_unimodularity_identity, gelfand_report, hecke_structure_constants,
        is_weighted_gelfand, CommutatorWitness, GelfandReport, HeckeAlgebra, RapCondition,
        StructureConstants, WeightedPair,
    };
    pub use crate::multiplier::{
        extract_symbol, is_multiplier, multiplier_from_kernel, verify_commutation, MultiplierOperator,
        MultiplierSymbol, SymbolOptions,
    };
    pub use crate::spherical::{
        classical_correspondence, enumerate_spherical, verify_eigen_property,
        verify_functional_equation, Character, EnumerationOptions, SphericalFunction, SphericalSet,
    };
    pub use crate::{Error, Result, Verdict, DEFAULT_SEED, DEFAULT_TOLERANCE};
}

/// Complex numbers serialize as `[re, im]` pairs.
pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize_vec<S: Serializer>(values: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&[v.re, v.im])?;
        }
        seq.end()
    }

    pub fn to_pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
        values.iter().map(|v| [v.re, v.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Vec<Complex64> {
        pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}
