//! Regression constants pinned by the first derived runs.

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// The constants file as shipped with the crate.
pub const SOURCE: &str = include_str!("../constants.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frozen {
    pub version: u32,
    pub projection: Projection,
    pub q_map: QMapConstants,
    pub ccomplex: ComplexConstants,
    pub axioms: AxiomTables,
    pub crossratio: CrossRatioConstants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub radius: usize,
    pub max_diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMapConstants {
    pub radius: usize,
    pub k: u32,
    pub constant: u32,
    #[serde(with = "crate::exact")]
    pub lambda: Ratio<i64>,
    #[serde(with = "crate::exact")]
    pub epsilon: Ratio<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexConstants {
    pub radius: usize,
    pub window: usize,
    pub k: u32,
    pub threshold: u32,
    pub band: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomTables {
    pub free_cyclic: AxiomTable,
    pub grid_lines: AxiomTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomTable {
    pub m_of_k: Vec<(u32, usize)>,
    pub min_count_of_k: Vec<(u32, usize)>,
    /// Largest `K(k, n)` over the grid.
    pub meeting_radius: u32,
    pub n: usize,
    /// `(n, k, K)` rows of the condition (4) tables.
    pub overlap_bounds: Vec<(usize, u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatioConstants {
    pub depth: usize,
    pub shadow_ball_radius: usize,
    pub radii: Vec<u32>,
    pub pairs: usize,
    pub seed: u64,
    #[serde(with = "crate::exact")]
    pub a: Ratio<i64>,
    #[serde(with = "crate::exact")]
    pub b: Ratio<i64>,
    pub max_residual: u64,
}

pub fn frozen() -> &'static Frozen {
    static CELL: OnceLock<Frozen> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(SOURCE).expect("constants.toml is well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_parse() {
        let f = frozen();
        assert_eq!(f.version, 1);
        assert_eq!(f.crossratio.radii, vec![1, 2, 3]);
        assert!(f.ccomplex.band.0 <= f.ccomplex.threshold && f.ccomplex.threshold <= f.ccomplex.band.1);
    }
}
