//! Exhaustive verification over small finite fields.

pub mod gf;
pub mod mmodule;
pub mod picard;
pub mod points;
pub mod report;
pub mod zlinalg;

pub use mmodule::{
    gamma_class_count, gamma_class_count_brute, CoinvariantOrders, GammaCounts, MModule,
};
pub use picard::{PicardModel, SearchBudget};
pub use points::{ClosedPoint, CurveScan, PointKind};
pub use report::{run_oracle, Check, OracleConfig, Status};
