use serde::{Deserialize, Serialize};

/// Size guards for the exact and enumerative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Upper bound on the summed item costs for the knapsack DP table.
    pub knapsack_table: u64,
    /// Upper bound on `groups x (budget + 1)` for the MCKP DP table.
    pub mckp_table: u64,
    /// Upper bound on `min(agents, total capacity)` for assignment enumeration.
    pub assign_slots: u64,
    /// Upper bound on the city count for brute-force TSP.
    pub tsp_cities: u64,
    /// Upper bound on Cartesian-product sizes in morphological and trajectory enumeration.
    pub combinations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            knapsack_table: 1_000_000,
            mckp_table: 10_000_000,
            assign_slots: 9,
            tsp_cities: 10,
            combinations: 1_000_000,
        }
    }
}

impl Limits {
    /// The same bound applied to every guard.
    pub fn uniform(bound: u64) -> Self {
        Limits {
            knapsack_table: bound,
            mckp_table: bound,
            assign_slots: bound,
            tsp_cities: bound,
            combinations: bound,
        }
    }

    /// Defaults, overridden by the `HMMD_KIT_GUARD` environment variable when it
    /// holds an integer.
    pub fn from_env() -> Self {
        std::env::var("HMMD_KIT_GUARD")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(Limits::uniform)
            .unwrap_or_default()
    }
}
