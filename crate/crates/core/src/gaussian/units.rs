use crate::error::{invalid_arg, Result};

/// `10·log10(variance / shot_reference)`.
pub fn to_db(variance: f64, shot_reference: f64) -> Result<f64> {
    if !(variance > 0.0) || !(shot_reference > 0.0) {
        return invalid_arg(format!(
            "variance and shot reference must be strictly positive, got {variance} and {shot_reference}"
        ));
    }
    Ok(10.0 * (variance / shot_reference).log10())
}

/// Linear noise ratio for a level in dB.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
