use serde::{Deserialize, Serialize};

use super::GroupAction;
use crate::error::{Error, Result};

const PRESETS: &str = include_str!("../../data/presets.json");
const BEDULLI_GORI: &str = include_str!("../../data/bedulli_gori.json");

#[derive(Deserialize)]
struct PresetFile {
    presets: Vec<GroupAction>,
}

/// Presets as shipped in `data/presets.json`, validated on load.
pub fn preset_catalog() -> Result<Vec<GroupAction>> {
    let file: PresetFile = serde_json::from_str(PRESETS).map_err(|e| Error::Domain(format!("preset catalog: {e}")))?;
    Ok(file.presets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BedulliGoriRow {
    pub group: String,
    pub representation: String,
    /// Dimension of the representation, possibly a formula in `p`.
    pub n: String,
    pub stabilizer_identity: String,
    pub component_group: Option<String>,
}

#[derive(Deserialize)]
struct TableFile {
    rows: Vec<BedulliGoriRow>,
}

/// Compact simple groups acting on `ℂPⁿ⁻¹` with a Lagrangian orbit. Reference data only.
pub fn bedulli_gori_table() -> Vec<BedulliGoriRow> {
    serde_json::from_str::<TableFile>(BEDULLI_GORI)
        .expect("bundled table is valid JSON")
        .rows
}
