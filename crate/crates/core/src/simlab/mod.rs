//! Simulation experiments: the shift-location model, power curves, the
//! Daniels identity, and the asymptotic detection-regime classifier.

mod daniels;
mod power;
mod regime;
mod shift;
mod subbotin;

pub use daniels::{daniels_check, DanielsResult};
pub use power::{power_curve, quantile_sorted, PowerCurveResult, PowerRow, PowerSummary};
pub use regime::{
    fwer_full_detection, regime_classify, regime_grid, Regime, RegimeCell, RegimeQuery,
};
pub use shift::{quantile_scaling_check, sample_shift_model, Shift, ShiftModel};
pub use subbotin::{subbotin_isf, subbotin_sf, Subbotin};
