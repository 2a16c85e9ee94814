//! Growth of the open cell through the dual graph and the complementary spine.
//!
//! Starting from a root top simplex, the cell absorbs one unpainted neighbour
//! at a time across a ridge of its current boundary (a *gate*). When every
//! top is absorbed, the gates form a spanning tree of the dual graph and
//! the ridges never crossed form the spine `K`, so that the manifold is the
//! disjoint union of an open n-cell and `K`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{for_each_subset, DualGraph, SimplicialComplex, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpineError {
    #[error("complex is not a closed connected pseudomanifold ({} bad ridges, {} components)", .0.ridge_violations.len(), .0.components)]
    NotClosed(Box<ValidationReport>),
    #[error("root {root} is not a top simplex id ({count} tops)")]
    NoSuchTop { root: usize, count: usize },
    #[error("dual graph is disconnected: {painted} of {total} tops reachable from the root")]
    Disconnected { painted: usize, total: usize },
    #[error("spine is empty")]
    EmptySpine,
    #[error("invalid decomposition: {0}")]
    Invalid(String),
    #[error("malformed decomposition JSON: {0}")]
    Json(String),
}

/// Order in which frontier gates are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Bfs,
    Dfs,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Bfs, Strategy::Dfs, Strategy::Random];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::Random => "random",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "dfs" => Ok(Strategy::Dfs),
            "random" => Ok(Strategy::Random),
            other => Err(format!(
                "unknown strategy `{other}` (expected bfs, dfs or random)"
            )),
        }
    }
}

/// One growth step: `child` is absorbed through ridge `face` of `parent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct Gate {
    pub parent: usize,
    pub face: usize,
    pub child: usize,
}

impl From<[usize; 3]> for Gate {
    fn from([parent, face, child]: [usize; 3]) -> Self {
        Gate {
            parent,
            face,
            child,
        }
    }
}

impl From<Gate> for [usize; 3] {
    fn from(g: Gate) -> Self {
        [g.parent, g.face, g.child]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub root: usize,
    /// Gates in growth order.
    pub gates: Vec<Gate>,
    /// Ridge ids of the spine.
    pub spine: BTreeSet<usize>,
    pub strategy: Strategy,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    root: usize,
    gates: Vec<Gate>,
    spine: Vec<Vec<usize>>,
    strategy: Strategy,
    seed: u64,
}

/// Grows the cell from `root`, taking frontier gates in the order given by
/// `strategy` (the seed only matters for [`Strategy::Random`]).
pub fn decompose(
    c: &SimplicialComplex,
    root: usize,
    strategy: Strategy,
    seed: u64,
) -> Result<Decomposition, SpineError> {
    let dual = DualGraph::build(c).map_err(|r| SpineError::NotClosed(Box::new(r)))?;
    decompose_on(c, &dual, root, strategy, seed)
}

/// As [`decompose`], reusing a prebuilt dual graph.
pub fn decompose_on(
    c: &SimplicialComplex,
    dual: &DualGraph,
    root: usize,
    strategy: Strategy,
    seed: u64,
) -> Result<Decomposition, SpineError> {
    let total = c.num_tops();
    if root >= total {
        return Err(SpineError::NoSuchTop { root, count: total });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut painted = vec![false; total];
    let mut frontier: VecDeque<Gate> = VecDeque::new();
    let mut gates = Vec::with_capacity(total - 1);

    let push_frontier = |frontier: &mut VecDeque<Gate>, painted: &[bool], t: usize| {
        for &(face, other) in dual.neighbours(t) {
            if !painted[other] {
                frontier.push_back(Gate {
                    parent: t,
                    face,
                    child: other,
                });
            }
        }
    };

    painted[root] = true;
    push_frontier(&mut frontier, &painted, root);
    loop {
        let next = match strategy {
            Strategy::Bfs => frontier.pop_front(),
            Strategy::Dfs => frontier.pop_back(),
            Strategy::Random if frontier.is_empty() => None,
            Strategy::Random => {
                let i = rng.gen_range(0..frontier.len());
                frontier.swap_remove_back(i)
            }
        };
        let Some(gate) = next else { break };
        if painted[gate.child] {
            continue;
        }
        painted[gate.child] = true;
        gates.push(gate);
        push_frontier(&mut frontier, &painted, gate.child);
    }

    if gates.len() + 1 != total {
        return Err(SpineError::Disconnected {
            painted: gates.len() + 1,
            total,
        });
    }
    let used: BTreeSet<usize> = gates.iter().map(|g| g.face).collect();
    let spine = (0..c.num_faces(c.dim() - 1))
        .filter(|r| !used.contains(r))
        .collect();
    Ok(Decomposition {
        root,
        gates,
        spine,
        strategy,
        seed,
    })
}

impl Decomposition {
    /// Builds a decomposition from an explicit set of gate ridges, ordering
    /// the gates breadth-first from `root`. Fails unless the ridges form a
    /// spanning tree of the dual graph.
    pub fn from_gate_faces(
        c: &SimplicialComplex,
        root: usize,
        faces: &BTreeSet<usize>,
    ) -> Result<Decomposition, SpineError> {
        let dual = DualGraph::build(c).map_err(|r| SpineError::NotClosed(Box::new(r)))?;
        let total = c.num_tops();
        if root >= total {
            return Err(SpineError::NoSuchTop { root, count: total });
        }
        if faces.len() + 1 != total {
            return Err(SpineError::Invalid(format!(
                "{} gate faces cannot span {total} tops",
                faces.len()
            )));
        }
        let mut painted = vec![false; total];
        painted[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut gates = Vec::new();
        while let Some(t) = queue.pop_front() {
            for &(face, other) in dual.neighbours(t) {
                if faces.contains(&face) && !painted[other] {
                    painted[other] = true;
                    gates.push(Gate {
                        parent: t,
                        face,
                        child: other,
                    });
                    queue.push_back(other);
                }
            }
        }
        if gates.len() + 1 != total {
            return Err(SpineError::Invalid(
                "gate faces do not form a spanning tree".into(),
            ));
        }
        let spine = (0..c.num_faces(c.dim() - 1))
            .filter(|r| !faces.contains(r))
            .collect();
        Ok(Decomposition {
            root,
            gates,
            spine,
            strategy: Strategy::Bfs,
            seed: 0,
        })
    }

    /// Checks the spanning-tree, growth-order and partition invariants.
    pub fn validate(&self, c: &SimplicialComplex) -> Result<(), SpineError> {
        let bad = |m: String| Err(SpineError::Invalid(m));
        let total = c.num_tops();
        let n = c.dim();
        if n == 0 {
            return bad("dimension 0 has no ridges".into());
        }
        if self.root >= total {
            return Err(SpineError::NoSuchTop {
                root: self.root,
                count: total,
            });
        }
        if self.gates.len() + 1 != total {
            return bad(format!("{} gates for {total} tops", self.gates.len()));
        }
        let ridges = c.num_faces(n - 1);
        let mut painted = vec![false; total];
        painted[self.root] = true;
        let mut gate_faces = BTreeSet::new();
        for (i, g) in self.gates.iter().enumerate() {
            if g.parent >= total || g.child >= total || g.face >= ridges {
                return bad(format!("gate {i} refers to a missing simplex"));
            }
            if !painted[g.parent] {
                return bad(format!("gate {i}: parent {} is not yet painted", g.parent));
            }
            if painted[g.child] {
                return bad(format!("gate {i}: child {} painted twice", g.child));
            }
            let cof = c.ridge_cofacets(g.face);
            if !(cof.contains(&g.parent) && cof.contains(&g.child)) {
                return bad(format!(
                    "gate {i}: ridge {:?} is not shared by {} and {}",
                    c.face(n - 1, g.face),
                    g.parent,
                    g.child
                ));
            }
            painted[g.child] = true;
            gate_faces.insert(g.face);
        }
        if let Some(r) = self.spine.intersection(&gate_faces).next() {
            return bad(format!(
                "ridge {:?} is both gate and spine",
                c.face(n - 1, *r)
            ));
        }
        if let Some(r) = (0..ridges).find(|r| !self.spine.contains(r) && !gate_faces.contains(r)) {
            return bad(format!(
                "ridge {:?} is neither gate nor spine",
                c.face(n - 1, r)
            ));
        }
        if let Some(r) = self.spine.iter().find(|&&r| r >= ridges) {
            return bad(format!("spine refers to missing ridge {r}"));
        }
        Ok(())
    }

    pub fn is_gate(&self, ridge: usize) -> bool {
        self.gates.iter().any(|g| g.face == ridge)
    }

    /// A copy in which the last gate is reclassified as a spine ridge; the
    /// result violates the decomposition invariants and is used to check
    /// that verification catches such faults.
    pub fn with_misclassified_gate(&self) -> Decomposition {
        let mut d = self.clone();
        if let Some(g) = d.gates.pop() {
            d.spine.insert(g.face);
        }
        d
    }

    /// Canonical JSON; identical inputs give identical bytes.
    pub fn to_json(&self, c: &SimplicialComplex) -> String {
        let n = c.dim();
        let json = DecompositionJson {
            root: self.root,
            gates: self.gates.clone(),
            spine: {
                let mut s: Vec<Vec<usize>> = self
                    .spine
                    .iter()
                    .map(|&r| c.face(n - 1, r).to_vec())
                    .collect();
                s.sort();
                s
            },
            strategy: self.strategy,
            seed: self.seed,
        };
        serde_json::to_string(&json).expect("decomposition serializes")
    }

    pub fn from_json(c: &SimplicialComplex, text: &str) -> Result<Decomposition, SpineError> {
        let json: DecompositionJson =
            serde_json::from_str(text).map_err(|e| SpineError::Json(e.to_string()))?;
        let spine = json
            .spine
            .iter()
            .map(|f| {
                c.face_id(f)
                    .filter(|_| f.len() == c.dim())
                    .ok_or_else(|| SpineError::Json(format!("{f:?} is not a ridge")))
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        let d = Decomposition {
            root: json.root,
            gates: json.gates,
            spine,
            strategy: json.strategy,
            seed: json.seed,
        };
        d.validate(c)?;
        Ok(d)
    }
}

/// The closure of the spine as a standalone complex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpineComplex {
    pub complex: SimplicialComplex,
    /// `vertex_map[i]` is the vertex of the original complex named `i` here.
    pub vertex_map: Vec<usize>,
}

pub fn spine_subcomplex(
    c: &SimplicialComplex,
    d: &Decomposition,
) -> Result<SpineComplex, SpineError> {
    if d.spine.is_empty() || c.dim() == 0 {
        return Err(SpineError::EmptySpine);
    }
    let n = c.dim();
    let faces: Vec<&[usize]> = d.spine.iter().map(|&r| c.face(n - 1, r)).collect();
    let vertex_map: Vec<usize> = faces
        .iter()
        .flat_map(|f| f.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rename = |v: usize| vertex_map.binary_search(&v).expect("spine vertex");
    let tops = faces
        .iter()
        .map(|f| f.iter().map(|&v| rename(v)).collect())
        .collect();
    let coords = c
        .coords()
        .map(|rows| vertex_map.iter().map(|&v| rows[v].clone()).collect());
    let complex = SimplicialComplex::new(n - 1, tops, coords)
        .map_err(|e| SpineError::Invalid(e.to_string()))?;
    Ok(SpineComplex {
        complex,
        vertex_map,
    })
}

/// Whether the spine is connected, via its 1-skeleton.
pub fn spine_connected(c: &SimplicialComplex, d: &Decomposition) -> Result<bool, SpineError> {
    let s = spine_subcomplex(c, d)?.complex;
    let v = s.num_vertices();
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = v;
    if s.dim() >= 1 {
        for e in s.faces(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    Ok(components == 1)
}

/// Face ids (per dimension `0..n-1`) lying in the closure of the spine.
pub fn spine_closure(c: &SimplicialComplex, d: &Decomposition) -> Vec<BTreeSet<usize>> {
    let n = c.dim();
    let mut out = vec![BTreeSet::new(); n];
    for &r in &d.spine {
        let face = c.face(n - 1, r);
        for (k, set) in out.iter_mut().enumerate() {
            for_each_subset(face, k + 1, |s| {
                set.insert(c.face_id(s).expect("subface exists"));
            });
        }
    }
    out
}

/// White/black classification of every face of the complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    /// Per dimension, face ids whose relative interiors belong to the cell.
    pub white: Vec<Vec<usize>>,
    /// Per dimension, face ids in the closure of the spine.
    pub black: Vec<Vec<usize>>,
    pub discrepancies: Vec<String>,
}

impl PartitionReport {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn white_counts(&self) -> Vec<usize> {
        self.white.iter().map(Vec::len).collect()
    }

    pub fn black_counts(&self) -> Vec<usize> {
        self.black.iter().map(Vec::len).collect()
    }
}

/// Paints top interiors and gate interiors white, the spine closure black,
/// and lower faces outside the spine closure white; reports any face that
/// ends up with both colours or none.
pub fn verify_cell_partition(c: &SimplicialComplex, d: &Decomposition) -> PartitionReport {
    let n = c.dim();
    let closure = spine_closure(c, d);
    let gate_faces: BTreeSet<usize> = d.gates.iter().map(|g| g.face).collect();
    let mut white = vec![Vec::new(); n + 1];
    let mut black = vec![Vec::new(); n + 1];
    let mut discrepancies = Vec::new();
    white[n] = (0..c.num_tops()).collect();
    for k in 0..n {
        for id in 0..c.num_faces(k) {
            let is_black = closure[k].contains(&id);
            let is_white = if k + 1 == n {
                gate_faces.contains(&id)
            } else {
                !is_black
            };
            match (is_white, is_black) {
                (true, false) => white[k].push(id),
                (false, true) => black[k].push(id),
                (true, true) => discrepancies.push(format!(
                    "face {:?} is painted both white and black",
                    c.face(k, id)
                )),
                (false, false) => {
                    discrepancies.push(format!("face {:?} is not painted", c.face(k, id)))
                }
            }
        }
    }
    PartitionReport {
        white,
        black,
        discrepancies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn circle_bfs() {
        let c = census::circle3();
        let d = decompose(&c, 0, Strategy::Bfs, 0).unwrap();
        assert_eq!(d.gates.len(), 2);
        assert_eq!(d.spine.len(), 1);
        // root {0,1}: both endpoints are gates, vertex 2 is the spine
        assert_eq!(c.face(0, *d.spine.iter().next().unwrap()), &[2]);
        d.validate(&c).unwrap();
        let s = spine_subcomplex(&c, &d).unwrap();
        assert_eq!(s.complex.dim(), 0);
        assert_eq!(s.vertex_map, vec![2]);
        assert!(spine_connected(&c, &d).unwrap());
    }

    #[test]
    fn circle_partition() {
        let c = census::circle3();
        let d = decompose(&c, 0, Strategy::Bfs, 0).unwrap();
        let p = verify_cell_partition(&c, &d);
        assert!(p.holds());
        assert_eq!(p.white_counts(), vec![2, 3]);
        assert_eq!(p.black_counts(), vec![1, 0]);
    }

    #[test]
    fn rejects_bad_roots_and_open_complexes() {
        let c = census::sphere_tet();
        assert_eq!(
            decompose(&c, 4, Strategy::Bfs, 0),
            Err(SpineError::NoSuchTop { root: 4, count: 4 })
        );
        let open = SimplicialComplex::new(2, c.tops()[..3].to_vec(), None).unwrap();
        assert!(matches!(
            decompose(&open, 0, Strategy::Bfs, 0),
            Err(SpineError::NotClosed(_))
        ));
    }

    #[test]
    fn strategies_differ_but_sizes_agree() {
        let c = census::torus7();
        let bfs = decompose(&c, 0, Strategy::Bfs, 0).unwrap();
        let dfs = decompose(&c, 0, Strategy::Dfs, 0).unwrap();
        assert_ne!(bfs.gates, dfs.gates);
        assert_eq!(bfs.spine.len(), 8);
        assert_eq!(dfs.spine.len(), 8);
    }

    #[test]
    fn json_round_trip_and_shape() {
        let c = census::sphere_tet();
        let d = decompose(&c, 0, Strategy::Random, 42).unwrap();
        let json = d.to_json(&c);
        assert!(json.starts_with(r#"{"root":0,"gates":[["#), "{json}");
        assert!(
            json.ends_with(r#""strategy":"random","seed":42}"#),
            "{json}"
        );
        assert_eq!(Decomposition::from_json(&c, &json).unwrap(), d);
        assert!(matches!(
            Decomposition::from_json(&c, "{"),
            Err(SpineError::Json(_))
        ));
    }

    #[test]
    fn misclassified_gate_is_caught() {
        let c = census::torus7();
        let d = decompose(&c, 0, Strategy::Bfs, 0)
            .unwrap()
            .with_misclassified_gate();
        assert!(matches!(d.validate(&c), Err(SpineError::Invalid(_))));
    }

    #[test]
    fn from_gate_faces_rejects_cycles() {
        let c = census::sphere_tet();
        // the three edges around vertex 0 are dual to a 3-cycle of triangles
        let cycle: BTreeSet<usize> = [0, 1, 2].into();
        assert!(Decomposition::from_gate_faces(&c, 0, &cycle).is_err());
    }
}
