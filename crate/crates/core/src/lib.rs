pub mod cf;
pub mod dimension;
pub mod error;
pub mod expsum;
pub mod orbit;
pub mod sieve;

pub use cf::{cf_eval, cf_expand, rational_membership, to_matrix, Digits, Evaluation, Mat2, Pair};
pub use dimension::{
    cylinder_depth_max, delta_asymptotic, delta_asymptotic_estimate, delta_cylinder,
    delta_transfer, lambda_leading, CylinderSet, Diagnostics, DimensionEstimate, Method,
    TransferDiscretization,
};
pub use error::{Error, Result};
pub use expsum::{
    arc_profile, arc_profile_with, exp_sum, exp_sum_many, exp_sum_with, ArcPoint, ArcProfile,
    ArcProfileRow, ExpSumValue,
};
pub use orbit::{
    continuant_bitset, continuant_bitset_with, enumerate, enumerate_parallel, orbit_count,
    orbit_count_with, ContinuantSet, ExecOptions, OrbitNode,
};
pub use sieve::{
    counting_fit, counting_fit_with, density, density_with, exceptions, exceptions_with, witness,
    Density, ExceptionReport, PowerReport, PowerRow, SlopeFit,
};
