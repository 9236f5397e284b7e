//! Activated bipartite entanglement for three-qubit pure states.
//!
//! Qubits are ordered `C ⊗ A ⊗ B`, amplitude index `4c + 2a + b`. A measurement
//! on `C` leaves an ensemble on `AB`; the gap between the best and worst
//! average entanglement over such measurements separates GHZ from W class.

pub mod classify;
pub mod error;
pub mod families;
pub mod info;
pub mod measures;
pub mod optics;
pub mod optimize;
pub mod state;

pub use classify::{
    classify, classify_report, w_bound_scan, ClassKind, ClassLabel, Partition, Thresholds,
};
pub use error::{Error, Result};
pub use families::Family;
pub use measures::{abe, MeasureReport, MeasureSettings, OptimizerSettings};
pub use state::{PureTripartiteState, Qubit, C64};
