/// Hard caps on the combinatorial enumerations. Exceeding any of them is
/// reported as [`crate::Error::ResourceLimit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_members: usize,
    pub max_matchings: usize,
    pub max_terms: usize,
    /// Nonzero entries across one boundary matrix.
    pub max_matrix_nonzeros: usize,
    pub max_graph_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_members: 100_000,
            max_matchings: 1_000_000,
            max_terms: 1_000_000,
            max_matrix_nonzeros: 200_000,
            max_graph_edges: 128,
        }
    }
}

/// Caps for the exhaustive partial-sequence enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_k: u32,
    /// Bound on `sum_F m(F) * |F|` for a single multiplicity map.
    pub max_weight: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_n: 5,
            max_k: 4,
            max_weight: 10,
        }
    }
}
