/// Size guards for the exponential procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Realizable profiles an expansion or enumeration may visit.
    pub max_profiles: u128,
    /// Agents for `n!` permutation enumeration of PO assignments.
    pub max_enumerate_agents: usize,
    /// Agents for the certainly-PO existence search.
    pub max_certain_search_agents: usize,
    /// Agents for the highest-probability search.
    pub max_best_search_agents: usize,
    /// Agents for the serial-dictatorship-feasibility brute force.
    pub max_sdf_agents: usize,
    /// Variables for the truth-table model counter.
    pub max_sat_variables: usize,
    /// Vertices of the layered counting graph.
    pub max_fpt_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_profiles: 1_000_000,
            max_enumerate_agents: 10,
            max_certain_search_agents: 10,
            max_best_search_agents: 8,
            max_sdf_agents: 8,
            max_sat_variables: 20,
            max_fpt_vertices: 4_000_000,
        }
    }
}

impl Limits {
    pub fn with_max_profiles(mut self, max_profiles: u128) -> Self {
        self.max_profiles = max_profiles;
        self
    }
}
