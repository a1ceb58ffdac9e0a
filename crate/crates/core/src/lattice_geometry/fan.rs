//! Normal fans of full-dimensional polytopes.
//!
//! The maximal cone at a vertex `v` is `{u : <v, u> = h_P(u)}`. It is
//! generated by the inner normals of the facets through `v`, and cut out by
//! the inequalities `<a - v, u> >= 0` for the vertices `a`.

use num_traits::Signed;

use super::{LatticePoint, LatticePolytope};
use crate::error::{Error, Result};

/// Fan machinery is only provided up to this ambient dimension.
pub const FAN_MAX_DIM: usize = 3;

/// Ray generators of the normal cone at `vertices()[vertex]`.
pub fn vertex_cone_generators(p: &LatticePolytope, vertex: usize) -> Vec<LatticePoint> {
    let v = &p.vertices()[vertex];
    p.facets()
        .iter()
        .filter(|f| v.dot(&f.normal) == f.offset)
        .map(|f| f.normal.clone())
        .collect()
}

pub(crate) fn check_fan_input(p: &LatticePolytope) -> Result<()> {
    if p.dim() > FAN_MAX_DIM {
        return Err(Error::DimensionCap {
            dim: p.dim(),
            max: FAN_MAX_DIM,
        });
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(())
}

/// True when `u` lies in the normal cone of `P` at `v`.
pub(crate) fn in_vertex_cone(p: &LatticePolytope, v: &LatticePoint, u: &LatticePoint) -> bool {
    p.vertices().iter().all(|a| !(a - v).dot(u).is_negative())
}

/// Does the normal fan of `q` refine the normal fan of `p`?
pub fn refines(q: &LatticePolytope, p: &LatticePolytope) -> Result<bool> {
    check_fan_input(q)?;
    check_fan_input(p)?;
    if q.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok((0..q.vertices().len()).all(|i| {
        let gens = vertex_cone_generators(q, i);
        p.vertices()
            .iter()
            .any(|w| gens.iter().all(|u| in_vertex_cone(p, w, u)))
    }))
}
