//! Operators between functional semimodules and their integral representations.

pub mod delta;
pub mod integral;
pub mod linear_maps;
pub mod nuclear;
pub mod operator;
pub mod space;

pub use delta::{
    delta_set, delta_set_with, i_delta, i_delta_with, DeltaFunctional, DeltaRepresentation, DeltaSet, WitnessRule,
};
pub use integral::{
    apply_integral, apply_integral_pointwise, has_integral_representation, is_kernel_of, max_kernel, IntegralVerdict,
    KernelMatrix,
};
pub use linear_maps::{
    enumerate_b_linear_functionals, enumerate_b_linear_maps, for_each_b_linear_map, random_b_linear_map,
};
pub use nuclear::{
    evaluation_functional, has_approximation_property, is_b_nuclear, nuclear_decomposition_from_kernel,
    NuclearDecomposition, NuclearityVerdict, RankOneMap,
};
pub use operator::{b_linearity_violation, is_b_linear, LinearityViolation, Operator, OperatorMap};
pub use space::Space;
