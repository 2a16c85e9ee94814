//! Built-in closed triangulations.
//!
//! Facet lists are generated (full simplex boundaries, a cyclic orbit for the
//! 7-vertex torus, the antipodal quotient of the icosahedron for the 6-vertex
//! projective plane) and then checked against their f-vector and homology by
//! [`CensusEntry::build_checked`].

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use crate::complex::{validate_closed_manifold, SimplicialComplex};
use crate::homology::homology_groups;

/// A named complex with its expected combinatorics and homology.
#[derive(Debug, Clone, Copy)]
pub struct CensusEntry {
    pub name: &'static str,
    pub builder: fn() -> SimplicialComplex,
    pub f_vector: &'static [usize],
    /// Betti numbers per degree.
    pub betti: &'static [usize],
    /// Torsion coefficients per degree.
    pub torsion: &'static [&'static [u64]],
}

pub const CENSUS: &[CensusEntry] = &[
    CensusEntry {
        name: "circle3",
        builder: circle3,
        f_vector: &[3, 3],
        betti: &[1, 1],
        torsion: &[&[], &[]],
    },
    CensusEntry {
        name: "sphere_tet",
        builder: sphere_tet,
        f_vector: &[4, 6, 4],
        betti: &[1, 0, 1],
        torsion: &[&[], &[], &[]],
    },
    CensusEntry {
        name: "torus7",
        builder: torus7,
        f_vector: &[7, 21, 14],
        betti: &[1, 2, 1],
        torsion: &[&[], &[], &[]],
    },
    CensusEntry {
        name: "rp2_6",
        builder: rp2_6,
        f_vector: &[6, 15, 10],
        betti: &[1, 0, 0],
        torsion: &[&[], &[2], &[]],
    },
    CensusEntry {
        name: "sphere3_pent",
        builder: sphere3_pent,
        f_vector: &[5, 10, 10, 5],
        betti: &[1, 0, 0, 1],
        torsion: &[&[], &[], &[], &[]],
    },
];

pub fn lookup(name: &str) -> Option<&'static CensusEntry> {
    CENSUS.iter().find(|e| e.name == name)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    CENSUS.iter().map(|e| e.name)
}

impl CensusEntry {
    /// Builds the complex and checks it against the recorded expectations.
    pub fn build_checked(&self) -> Result<SimplicialComplex, String> {
        let c = (self.builder)();
        let report = validate_closed_manifold(&c);
        if !report.is_closed_manifold() {
            return Err(format!("{}: not a closed manifold: {report:?}", self.name));
        }
        if c.f_vector() != self.f_vector {
            return Err(format!(
                "{}: f-vector {:?}, expected {:?}",
                self.name,
                c.f_vector(),
                self.f_vector
            ));
        }
        let h = homology_groups(&c);
        let betti = h.bettis();
        if betti != self.betti {
            return Err(format!(
                "{}: betti {betti:?}, expected {:?}",
                self.name, self.betti
            ));
        }
        for (k, expected) in self.torsion.iter().enumerate() {
            let got = h.torsion_u64(k);
            if got != *expected {
                return Err(format!(
                    "{}: torsion in degree {k} is {got:?}, expected {expected:?}",
                    self.name
                ));
            }
        }
        Ok(c)
    }
}

fn simplex_boundary(n: usize) -> Vec<Vec<usize>> {
    (0..=n + 1)
        .rev()
        .map(|skip| (0..=n + 1).filter(|&v| v != skip).collect())
        .collect()
}

/// Boundary of a triangle, embedded as an equilateral triangle.
pub fn circle3() -> SimplicialComplex {
    let coords = (0..3)
        .map(|i| {
            let a = TAU * i as f64 / 3.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    SimplicialComplex::new(1, simplex_boundary(1), Some(coords)).expect("circle3")
}

/// Boundary of a tetrahedron, embedded as a regular tetrahedron.
pub fn sphere_tet() -> SimplicialComplex {
    let coords = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ];
    SimplicialComplex::new(2, simplex_boundary(2), Some(coords)).expect("sphere_tet")
}

/// Boundary of the 4-simplex (no coordinates; unit edge lengths).
pub fn sphere3_pent() -> SimplicialComplex {
    SimplicialComplex::new(3, simplex_boundary(3), None).expect("sphere3_pent")
}

/// The 7-vertex torus: orbits of {0,1,3} and {0,2,3} under `i -> i+1 mod 7`.
///
/// Vertex `i` sits at the lattice point `i` of the quotient of the
/// triangular lattice by the index-7 sublattice `a + 3b = 0 mod 7`, mapped
/// onto a torus of revolution.
pub fn torus7() -> SimplicialComplex {
    let mut tops = BTreeSet::new();
    for i in 0..7 {
        for base in [[0, 1, 3], [0, 2, 3]] {
            let mut t: Vec<usize> = base.iter().map(|b| (b + i) % 7).collect();
            t.sort_unstable();
            tops.insert(t);
        }
    }
    let coords = (0..7)
        .map(|i| {
            let theta = TAU * ((5 * i) % 7) as f64 / 7.0;
            let phi = TAU * i as f64 / 7.0;
            let (big, small) = (3.0, 1.5);
            vec![
                (big + small * phi.cos()) * theta.cos(),
                (big + small * phi.cos()) * theta.sin(),
                small * phi.sin(),
            ]
        })
        .collect();
    SimplicialComplex::new(2, tops.into_iter().collect(), Some(coords)).expect("torus7")
}

/// The 6-vertex projective plane as the antipodal quotient of the icosahedron.
///
/// Vertices are the six antipodal pairs of icosahedron vertices; each pair
/// is represented by its member with positive leading nonzero coordinate,
/// which also serves as the vertex coordinate.
pub fn rp2_6() -> SimplicialComplex {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut ico = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            ico.push([0.0, s1, s2 * phi]);
            ico.push([s1, s2 * phi, 0.0]);
            ico.push([s2 * phi, 0.0, s1]);
        }
    }
    let reps: Vec<[f64; 3]> = ico
        .iter()
        .copied()
        .filter(|p| p.iter().find(|x| **x != 0.0).is_some_and(|x| *x > 0.0))
        .collect();
    let class = |p: &[f64; 3]| {
        reps.iter()
            .position(|r| (0..3).all(|i| r[i] == p[i]) || (0..3).all(|i| r[i] == -p[i]))
            .expect("antipodal class")
    };
    let adjacent = |a: &[f64; 3], b: &[f64; 3]| {
        let d2: f64 = (0..3).map(|i| (a[i] - b[i]).powi(2)).sum();
        (d2 - 4.0).abs() < 1e-9
    };
    let mut tops = BTreeSet::new();
    for i in 0..ico.len() {
        for j in i + 1..ico.len() {
            for k in j + 1..ico.len() {
                if adjacent(&ico[i], &ico[j])
                    && adjacent(&ico[j], &ico[k])
                    && adjacent(&ico[i], &ico[k])
                {
                    let mut t = vec![class(&ico[i]), class(&ico[j]), class(&ico[k])];
                    t.sort_unstable();
                    tops.insert(t);
                }
            }
        }
    }
    let coords = reps.iter().map(|r| r.to_vec()).collect();
    SimplicialComplex::new(2, tops.into_iter().collect(), Some(coords)).expect("rp2_6")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_self_validates() {
        for entry in CENSUS {
            entry.build_checked().unwrap();
        }
    }

    #[test]
    fn euler_characteristics() {
        let chi: Vec<i64> = CENSUS
            .iter()
            .map(|e| (e.builder)().euler_characteristic())
            .collect();
        assert_eq!(chi, vec![0, 2, 0, 1, 0]);
    }

    #[test]
    fn projective_plane_vertex_links_are_pentagons() {
        let c = rp2_6();
        for v in 0..6 {
            assert_eq!(c.tops().iter().filter(|t| t.contains(&v)).count(), 5);
        }
        // every pair of vertices is an edge
        assert_eq!(c.num_faces(1), 15);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(lookup("torus7").unwrap().f_vector, &[7, 21, 14]);
        assert!(lookup("klein").is_none());
        assert_eq!(names().count(), 5);
    }
}
