use super::{validate_closed_manifold, SimplicialComplex, ValidationReport};

/// Edge of the dual graph: the ridge shared by two top simplices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub ridge: usize,
    pub a: usize,
    pub b: usize,
}

/// Adjacency of top simplices across shared ridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    edges: Vec<DualEdge>,
    /// Per top, `(ridge, neighbour)` pairs in the order of the top's local vertices.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl DualGraph {
    /// Builds the dual graph of a closed, connected complex.
    ///
    /// Fails with the validation report when some ridge does not have
    /// exactly two cofacets or the tops do not form one component.
    pub fn build(c: &SimplicialComplex) -> Result<Self, ValidationReport> {
        let report = validate_closed_manifold(c);
        if !report.ridge_violations.is_empty() || report.components != 1 || c.dim() == 0 {
            return Err(report);
        }
        let edges: Vec<DualEdge> = (0..c.num_faces(c.dim() - 1))
            .map(|r| {
                let cof = c.ridge_cofacets(r);
                DualEdge {
                    ridge: r,
                    a: cof[0],
                    b: cof[1],
                }
            })
            .collect();
        let adjacency = (0..c.num_tops())
            .map(|t| {
                c.top_ridges(t)
                    .iter()
                    .map(|&r| {
                        let e = &edges[r];
                        (r, if e.a == t { e.b } else { e.a })
                    })
                    .collect()
            })
            .collect();
        Ok(DualGraph { edges, adjacency })
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// One edge per ridge, indexed by ridge id.
    pub fn edges(&self) -> &[DualEdge] {
        &self.edges
    }

    pub fn neighbours(&self, t: usize) -> &[(usize, usize)] {
        &self.adjacency[t]
    }

    pub fn degree(&self, t: usize) -> usize {
        self.adjacency[t].len()
    }
}
