//! Polynomials over the real quaternions: arithmetic, zeros, spherical
//! divisors, least common multiples, decompositions into indecomposable
//! factors, and completion to finite Blaschke products.
//!
//! Every algorithm is generic over [`Scalar`], with an exact rational
//! backend (`BigRational`) and a floating backend (`f64`).

pub mod decomp;
pub mod error;
pub mod lcm;
pub mod poly;
pub mod quat;
pub mod rootfind;
pub mod scalar;
pub mod series;
pub mod spherical;
pub mod text;

pub use decomp::{decompose, is_indecomposable, DecompositionPart, IrreducibleDecomposition, PartRole};
pub use error::{Error, Result};
pub use lcm::{
    glcd_indecomposable, lcm_general, llcm_general, llcm_same_class_coprime, lrcm_cross_class, lrcm_distinct_classes,
    lrcm_general, lrcm_indecomposable_family, lrcm_same_class, lrcm_same_class_coprime, synthesize_from_divisors,
    CrossClassLcm, IndecomposableFactor, LcmReport, PrescribedDivisor, Side,
};
pub use num_rational::BigRational;
pub use poly::{mult_left, mult_right, mult_spherical, QPoly};
pub use quat::{ConjugacyClass, Quaternion};
pub use rootfind::{factor_linear, find_all_roots, ClassRoots, RootKind, RootReport};
pub use scalar::{Scalar, Tol};
pub use series::{
    blaschke_factor, cauchy_kernel, complete_to_blaschke, kernel_eval, norm_preservation_check, BlaschkeCompletion,
    CompletionStep, TruncatedSeries,
};
pub use spherical::{
    commute_factor_left_to_right, commute_factor_right_to_left, extract_left_chain, extract_right_chain,
    left_divisor_to_right, right_divisor_to_left, spherical_divisors, spherical_shift, zero_structure,
    SphericalDivisorPair,
};
pub use text::{format_coeffs, format_poly, format_quaternion, parse_expr, parse_poly, parse_quaternion};

/// Exact quaternion.
pub type QuatQ = Quaternion<BigRational>;
/// Exact polynomial.
pub type PolyQ = QPoly<BigRational>;
