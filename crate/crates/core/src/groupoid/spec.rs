use serde::{Deserialize, Serialize};

use super::{bratteli, families, transformation, BratteliSpec, FiniteGroupoid, Limits, TransformationSpec};
use crate::error::Result;
use crate::unitspace::UnitSpace;

/// JSON ingestion format, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupoidSpec {
    Transformation(TransformationSpec),
    Bratteli(BratteliSpec),
    Pair { alphabet: u32, depth: u32 },
    GroupBundle { alphabet: u32, depth: u32, order: u32 },
}

pub fn build_from_spec(spec: &GroupoidSpec, limits: &Limits) -> Result<FiniteGroupoid> {
    match spec {
        GroupoidSpec::Transformation(t) => transformation::build(t, limits),
        GroupoidSpec::Bratteli(b) => bratteli::build(b, limits),
        GroupoidSpec::Pair { alphabet, depth } => {
            families::pair_groupoid(&UnitSpace::with_max_points(*alphabet, *depth, limits.max_points)?)
        }
        GroupoidSpec::GroupBundle { alphabet, depth, order } => {
            families::group_bundle(&UnitSpace::with_max_points(*alphabet, *depth, limits.max_points)?, *order)
        }
    }
}
