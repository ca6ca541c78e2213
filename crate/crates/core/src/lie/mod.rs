//! Exact arithmetic on `sl2 ⋉ h_d` and `SL2 ⋉ H_d`.

mod algebra;
mod group;
mod iwasawa;
mod mat2;
mod quadrature;

pub use algebra::{
    bracket, default_realization, heisenberg_action, omega, rho_apply, structure_table_residual,
    AlgebraElement, BasisRealization,
};
pub use group::{ad, distance, distance_strict, exp, inverse, multiply, product, GroupElement};
pub use iwasawa::{iwasawa, iwasawa_angle, rotation, Iwasawa};
pub use mat2::Mat2;
pub use quadrature::{gauss_legendre, integrate_unit};
