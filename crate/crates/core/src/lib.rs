pub mod error;
pub mod instance;
pub mod io;
pub mod preorder;
pub mod probspace;
pub mod report;
pub mod risk;
pub mod riskaware;
pub mod rulebook;

pub use error::{Error, Result};
pub use instance::Instance;
pub use preorder::{Preorder, Verdict};
pub use probspace::{FiniteProbSpace, RandomCost, Relation};
pub use risk::{CustomMeasure, RiskMeasure};
pub use riskaware::{
    InteractionModel, PointwiseCase, RiskAwareRule, RiskAwareRulebook, RiskConfig, TradeoffWitness,
};
pub use rulebook::{Realization, Rule, Rulebook};

/// Absolute tolerance for every comparison of costs, risks and probability sums.
pub const TOLERANCE: f64 = 1e-9;

/// Instance documents shipped with the crate.
pub mod corpus {
    /// The pedestrian crossing example with VaR(0.9) on collisions.
    pub const AV_PEDESTRIAN: &str = include_str!("../instances/av_pedestrian.json");
    /// Same scenario, VaR(0.9995) on collisions.
    pub const AV_PEDESTRIAN_CAUTIOUS: &str = include_str!("../instances/av_pedestrian_cautious.json");
    /// VaR(0.9995) on collisions with a lane-keeping threshold of 1.
    pub const AV_PEDESTRIAN_LANE_TOLERANT: &str =
        include_str!("../instances/av_pedestrian_lane_tolerant.json");
    /// Worst-case collision risk with a threshold of 175.
    pub const AV_PEDESTRIAN_WORST_CASE: &str =
        include_str!("../instances/av_pedestrian_worst_case.json");
}
