//! Everything derived from a consistent torus dimer, computed once.

use serde::Serialize;

use crate::consistency::{is_zigzag_consistent, ConsistencyViolation};
use crate::dimer::{Dimer, InvalidDimer};
use crate::dual::{dual_dimer_with, surface_invariants, OddEuler, SurfaceInvariants};
use crate::jacobi::{superpotential, CyclicPoly};
use crate::lattice::Z2;
use crate::matching::{difference_cochain, MatchingData, MatchingError};
use crate::zigzag::{StructureError, ZigzagSystem};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("not zigzag consistent: {0}")]
    Inconsistent(ConsistencyViolation),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("dual dimer: {0}")]
    Dual(#[from] InvalidDimer),
    #[error(transparent)]
    Surface(#[from] OddEuler),
}

/// Degree data of one perfect matching relative to the reference corner:
/// `deg_P(p) = deg_ref(p) + ⟨height, h1(p)⟩ + potential[h(p)] − potential[t(p)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeDegree {
    pub height: Z2,
    pub potential: Vec<i64>,
}

/// A consistent torus dimer with its zigzag system, matchings, dual and
/// superpotential.
#[derive(Clone, Debug, Serialize)]
pub struct Model {
    #[serde(skip)]
    pub dimer: Dimer,
    pub zigzags: ZigzagSystem,
    pub matchings: MatchingData,
    #[serde(skip)]
    pub dual: Dimer,
    pub surface: SurfaceInvariants,
    #[serde(skip)]
    pub superpotential: CyclicPoly,
    /// Per matching, relative to the reference corner `P_0`.
    pub relative: Vec<RelativeDegree>,
}

impl Model {
    /// Analyses a dimer with vertex `base_vertex` as the base point of the
    /// strip decompositions.
    pub fn new(d: &Dimer, base_vertex: usize) -> Result<Model, ModelError> {
        let report = is_zigzag_consistent(d);
        if let Some(w) = report.witness {
            return Err(ModelError::Inconsistent(w));
        }
        let zigzags = ZigzagSystem::new(d, base_vertex)?;
        let matchings = MatchingData::new(d, &zigzags)?;
        let raws: Vec<_> = zigzags.cycles.iter().map(|c| c.raw()).collect();
        let dual = dual_dimer_with(d, &raws)?;
        let surface = surface_invariants(&dual)?;
        let reference = matchings.corner(0);
        let relative = matchings
            .matchings
            .iter()
            .map(|p| {
                let c = difference_cochain(d.num_arrows(), &p.edges, &reference.edges);
                let height = p.height - reference.height;
                RelativeDegree { height, potential: matchings.basis.potential(d, &c, height) }
            })
            .collect();
        Ok(Model {
            dimer: d.clone(),
            superpotential: superpotential(d),
            zigzags,
            matchings,
            dual,
            surface,
            relative,
        })
    }

    pub fn num_corners(&self) -> usize {
        self.matchings.corners.len()
    }

    /// Relative degree data of corner `P_i` (cyclic index).
    pub fn corner_relative(&self, i: i64) -> &RelativeDegree {
        let n = self.num_corners() as i64;
        &self.relative[self.matchings.corners[i.rem_euclid(n) as usize]]
    }
}
