//! Permutation groups, coset fixed-point tests, trace tests and fiber
//! product components.

mod group;
mod models;
mod monodromy;
mod perm;

pub use group::{analyze_rep, orbits, pair_action, PermGroup, RepAnalysis, GROUP_CAP};
pub use models::{cyclic_model, dickson_model, fano_actions, fano_outer_extension, fano_points_lines};
pub use monodromy::{
    component_count, coset_exceptionality, davenport_trace_test, fiber_tensor, idp_trace_test,
    offdiagonal_components, sdp_check, stable_orbit_count, Mode, MonodromyData, MonodromySpec, PairDomain,
    SdpReport, SecondAction,
};
pub use perm::{parse_perms, product, Perm};

/// [`PermGroup::generate`] on the common degree of `gens`.
pub fn group_from_gens(gens: &[Perm]) -> crate::Result<PermGroup> {
    let n = gens.first().map(Perm::degree).ok_or_else(|| crate::Error::invalid("no generators"))?;
    PermGroup::generate(n, gens)
}
