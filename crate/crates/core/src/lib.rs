//! Exact symplectic volumes of N-fold reduced products of coadjoint orbits.
//!
//! The volume is a signed sum over `W^N` of Duistermaat-Heckman densities
//! evaluated at the images `sum_j w_j xi_j`. Each density is the exact volume
//! of a fiber polytope `{s >= 0 : A s = xi}` where the columns of `A` are the
//! positive roots, each repeated `N - 2` times.

pub mod cli;
pub mod dhfun;
pub mod exact;
pub mod lp;
pub mod mcreduce;
pub mod polyvol;
pub mod reducedvol;
pub mod rootsystem;
pub mod selftest;
pub mod su3;
pub mod weylgroup;

pub(crate) fn serialize_rational<S: serde::Serializer>(x: &exact::Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact::format_rational(x))
}
