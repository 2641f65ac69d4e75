//! Bounded chain complexes over an exact field, their maps, tensor products,
//! finite colimits and homology.

mod colimit;
mod complex;
mod homology;
mod map;
mod tensor;

pub(crate) use colimit::colimit_unchecked;
pub use colimit::{cokernel, direct_sum, finite_colimit, pushout, Colimit, Diagram, DirectSum, Edge, Pushout, QuotientComplex};
pub use complex::{ChainComplex, DEFAULT_CAP};
pub use homology::{
    classify, compare_homology, first_non_quasi_iso_degree, homology, homology_dims, induced_rank, is_quasi_iso,
    Homology, HomologyComparison, MapClass, Verdict,
};
pub use map::ChainMap;
pub use tensor::{
    permutation_map, permutation_map_between, permutation_sign, symmetry_iso, tensor, tensor_map, tensor_maps,
    tensor_maps_between, TensorFactors, TensorPart, Word,
};
