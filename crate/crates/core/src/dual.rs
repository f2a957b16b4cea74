//! The dual dimer and the topology of the mirror curve.
//!
//! Vertices of the dual are the zigzag cycles. Every arrow runs from the
//! cycle using it as a zag to the cycle using it as a zig. Faces are kept,
//! with negative boundaries reversed.

use serde::Serialize;

use crate::dimer::{Arrow, Dimer, Face, InvalidDimer, Sign, SurfaceKind};
use crate::zigzag::{zigzag_orbits, RawZigzag};

/// Builds the dual using the zigzag orbits in their natural order.
pub fn dual_dimer(d: &Dimer) -> Result<Dimer, InvalidDimer> {
    dual_dimer_with(d, &zigzag_orbits(d))
}

/// Builds the dual with vertices in the given cycle order.
pub fn dual_dimer_with(d: &Dimer, cycles: &[RawZigzag]) -> Result<Dimer, InvalidDimer> {
    let mut tail = vec![0; d.num_arrows()];
    let mut head = vec![0; d.num_arrows()];
    for (k, z) in cycles.iter().enumerate() {
        for &a in &z.zigs {
            head[a] = k;
        }
        for &b in &z.zags {
            tail[b] = k;
        }
    }
    let vertices = cycles.iter().map(|z| d.display_word(&z.traversal())).collect();
    let arrows = d
        .arrows
        .iter()
        .enumerate()
        .map(|(e, a)| Arrow { id: a.id.clone(), tail: tail[e], head: head[e], shift: None })
        .collect();
    let faces = d
        .faces
        .iter()
        .map(|f| {
            let mut cycle = f.cycle.clone();
            if f.sign == Sign::Negative {
                cycle.reverse();
            }
            Face { sign: f.sign, cycle }
        })
        .collect();
    Dimer::from_parts(format!("{} (dual)", d.name), vertices, arrows, faces, SurfaceKind::Abstract)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub euler: i64,
    pub genus: i64,
    pub punctures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Euler characteristic {0} is odd; the cell complex is not a closed orientable surface")]
pub struct OddEuler(pub i64);

/// Genus and puncture count of the closed surface carrying a dual dimer.
pub fn surface_invariants(dual: &Dimer) -> Result<SurfaceInvariants, OddEuler> {
    let euler = dual.euler_characteristic();
    if euler % 2 != 0 {
        return Err(OddEuler(euler));
    }
    Ok(SurfaceInvariants { euler, genus: (2 - euler) / 2, punctures: dual.num_vertices() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::isomorphic;
    use crate::io::builtin;

    #[test]
    fn duals_of_builtins() {
        for (name, punctures) in [("c3", 3), ("conifold", 4), ("spp", 5)] {
            let d = builtin(name).unwrap();
            let dual = dual_dimer(&d).unwrap();
            let inv = surface_invariants(&dual).unwrap();
            assert_eq!(inv, SurfaceInvariants { euler: 2, genus: 0, punctures }, "{name}");
            let back = dual_dimer(&dual).unwrap();
            assert!(isomorphic(&back, &d), "{name}: double dual differs");
        }
    }
}
