use serde::{Deserialize, Serialize};

use super::twogrid::{CoarseOperatorMode, TwoGridConfig};

/// Machine-readable summary of one analysis run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub config: TwoGridConfig,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda0_star: Option<f64>,
    pub mu: Option<f64>,
    pub rho_lfa: Option<f64>,
    pub samples: usize,
    pub coarse_mode: CoarseOperatorMode,
}
