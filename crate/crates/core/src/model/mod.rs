//! Grid-free model arithmetic: parameters, regime classification, the
//! exponent ledger of the energy estimates and the existence-time majorant.

mod ledger;
mod majorant;
mod params;
mod regime;

pub use ledger::{exponent_ledger, ExponentLedger, LedgerFlags, LedgerMargins};
pub use majorant::{existence_time_estimate, MAJORANT_CAP};
pub use params::{sobolev_exponent, ModelParams};
pub use regime::{classify_regime, Regime, RegimeWitness, Verdict, EQUALITY_RTOL};
