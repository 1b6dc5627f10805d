//! Exact twisted Betti numbers, Novikov Betti numbers and jump loci of
//! finite free chain complexes over Laurent polynomial rings `Q[Z^n]`, and
//! the deformation spectral sequence of a cochain complex with a degree-one
//! operator.
//!
//! All arithmetic is over `Q` with arbitrary precision; lattice computations
//! use `i64`.

pub mod betti;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod jumploci;
pub mod laurent;
pub mod lattice;
pub mod linalg;
pub mod specseq;

pub use betti::{
    betti, betti_specialized, factor_hom, generic_betti, irrationality_degree, novikov_betti, BettiVector,
    Factorization, RealHom,
};
pub use complex::{
    fox_complex, fox_complex_checked, free_abelianization, validate, AbelianizationMap, FreeComplex, Presentation,
    Representation, ValidationReport,
};
pub use error::{Error, Result};
pub use jumploci::{
    fitted_subdivisions, jump_loci, jump_loci_with_limits, membership_real, subgroup_of_subdivision, subordinate,
    test_jump, vanishing_family, FittedSubdivision, FullSubgroup, JumpLociLimits, JumpLocusResult,
};
pub use laurent::{ExponentVector, LaurentPoly, MonoidHom, Rational};
pub use lattice::{kernel_lattice, saturate, smith_normal_form, IntMatrix, SmithForm};
pub use linalg::{rank_over_fractions, LaurentMatrix, QMatrix};
pub use specseq::{
    compare_models, converge, e_infinity, generic_betti_truncated, mb_space, mz_space, page, theta_cohomology,
    validate_model, ChainWitness, Convergence, DeformationModel, ModelComparison, ModelReport, SpectralPage,
    SpectralSequence,
};
