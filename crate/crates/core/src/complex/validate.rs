use std::collections::HashMap;

use serde::Serialize;

use super::SimplicialComplex;

/// A ridge that does not have exactly two cofacets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RidgeViolation {
    pub ridge: usize,
    pub vertices: Vec<usize>,
    pub cofacets: usize,
}

/// A vertex of a surface whose link is not a single cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkViolation {
    pub vertex: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ridge_violations: Vec<RidgeViolation>,
    /// Number of components of the dual graph (tops adjacent across ridges).
    pub components: usize,
    /// Only populated for `n <= 2`; higher-dimensional links are not checked.
    pub link_violations: Vec<LinkViolation>,
    pub links_checked: bool,
}

impl ValidationReport {
    pub fn is_closed_manifold(&self) -> bool {
        self.ridge_violations.is_empty() && self.components == 1 && self.link_violations.is_empty()
    }
}

/// Checks that every ridge has two cofacets, that the dual graph is
/// connected, and for curves and surfaces that every vertex link is a
/// single cycle.
pub fn validate_closed_manifold(c: &SimplicialComplex) -> ValidationReport {
    let n = c.dim();
    let mut ridge_violations = Vec::new();
    let mut components = c.num_tops();
    let mut link_violations = Vec::new();
    if n == 0 {
        return ValidationReport {
            ridge_violations,
            components,
            link_violations,
            links_checked: false,
        };
    }

    for r in 0..c.num_faces(n - 1) {
        let k = c.ridge_cofacets(r).len();
        if k != 2 {
            ridge_violations.push(RidgeViolation {
                ridge: r,
                vertices: c.face(n - 1, r).to_vec(),
                cofacets: k,
            });
        }
    }

    let mut parent: Vec<usize> = (0..c.num_tops()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in 0..c.num_faces(n - 1) {
        let cof = c.ridge_cofacets(r);
        for w in cof.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }

    if n == 2 {
        // link of v: the edges opposite v in its triangles
        let mut links: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for top in c.tops() {
            links.entry(top[0]).or_default().push((top[1], top[2]));
            links.entry(top[1]).or_default().push((top[0], top[2]));
            links.entry(top[2]).or_default().push((top[0], top[1]));
        }
        let mut vertices: Vec<_> = links.keys().copied().collect();
        vertices.sort_unstable();
        for v in vertices {
            if let Err(reason) = check_cycle(&links[&v]) {
                link_violations.push(LinkViolation { vertex: v, reason });
            }
        }
    }

    ValidationReport {
        ridge_violations,
        components,
        link_violations,
        links_checked: n <= 2,
    }
}

fn check_cycle(edges: &[(usize, usize)]) -> Result<(), String> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if let Some((v, nb)) = adj.iter().find(|(_, nb)| nb.len() != 2) {
        return Err(format!("link vertex {v} has degree {}", nb.len()));
    }
    // walk the cycle from any vertex
    let start = *adj.keys().min().unwrap();
    let (mut prev, mut cur) = (start, adj[&start][0]);
    let mut steps = 1;
    while cur != start {
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        steps += 1;
    }
    if steps != adj.len() {
        return Err(format!(
            "link splits into several cycles ({steps} of {} vertices reached)",
            adj.len()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinched_surface_fails_link_check() {
        // two tetrahedron boundaries glued at vertex 0
        let mut tops = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        tops.extend([vec![0, 4, 5], vec![0, 4, 6], vec![0, 5, 6], vec![4, 5, 6]]);
        let c = SimplicialComplex::new(2, tops, None).unwrap();
        let report = validate_closed_manifold(&c);
        assert!(report.ridge_violations.is_empty());
        assert_eq!(report.components, 2);
        assert_eq!(report.link_violations.len(), 1);
        assert_eq!(report.link_violations[0].vertex, 0);
        assert!(!report.is_closed_manifold());
    }
}
