//! Integer simplicial homology via Smith normal form.

mod snf;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::spine::{spine_subcomplex, Decomposition};

pub use snf::{rank_mod2, smith_normal_form, IntMatrix, SmithForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomologyError {
    #[error("boundary degree {k} outside 1..={dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("top simplex {top} does not exist ({count} tops)")]
    NoSuchTop { top: usize, count: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Simplicial boundary `∂_k : C_k -> C_{k-1}`: rows are (k-1)-faces,
/// columns k-faces, both in face-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub degree: usize,
    pub matrix: IntMatrix,
}

/// The column of face `(v_0 < ... < v_k)` has `(-1)^i` in the row of the
/// face with `v_i` omitted.
pub fn boundary_matrix(c: &SimplicialComplex, k: usize) -> Result<BoundaryMatrix, HomologyError> {
    if k == 0 || k > c.dim() {
        return Err(HomologyError::DegreeOutOfRange { k, dim: c.dim() });
    }
    let mut m = IntMatrix::zeros(c.num_faces(k - 1), c.num_faces(k));
    let mut facet = Vec::with_capacity(k);
    for (j, face) in c.faces(k).iter().enumerate() {
        for i in 0..=k {
            facet.clear();
            facet.extend(
                face.iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i)
                    .map(|(_, &v)| v),
            );
            let row = c.face_id(&facet).expect("face lattice is closed");
            m.set(row, j, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(BoundaryMatrix {
        degree: k,
        matrix: m,
    })
}

/// Homology in one degree: free rank and invariant factors above one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub k: usize,
    pub betti: usize,
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<BigUint>,
}

/// Unreduced integer homology, one entry per degree `0..=dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyProfile {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn betti(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.betti)
    }

    pub fn torsion(&self, k: usize) -> &[BigUint] {
        self.degrees.get(k).map_or(&[], |d| &d.torsion)
    }

    /// Torsion coefficients as machine integers (panics if one exceeds `u64`).
    pub fn torsion_u64(&self, k: usize) -> Vec<u64> {
        self.torsion(k)
            .iter()
            .map(|d| u64::try_from(d).expect("torsion coefficient fits in u64"))
            .collect()
    }

    pub fn bettis(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| {
                if d.k % 2 == 0 {
                    d.betti as i64
                } else {
                    -(d.betti as i64)
                }
            })
            .sum()
    }

    /// Degree-wise equality, treating missing degrees as zero groups.
    pub fn same_groups(&self, other: &HomologyProfile, k: usize) -> bool {
        self.betti(k) == other.betti(k) && self.torsion(k) == other.torsion(k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }
}

mod torsion_serde {
    use num_bigint::BigUint;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Repr> = v
            .iter()
            .map(|d| match u64::try_from(d) {
                Ok(x) => Repr::Small(x),
                Err(_) => Repr::Big(d.to_string()),
            })
            .collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Small(x) => Ok(BigUint::from(x)),
                Repr::Big(s) => s.parse().map_err(D::Error::custom),
            })
            .collect()
    }
}

/// `betti_k = |F_k| - rank ∂_k - rank ∂_{k+1}`; torsion in degree k is the
/// list of invariant factors of `∂_{k+1}` exceeding one.
pub fn homology_groups(c: &SimplicialComplex) -> HomologyProfile {
    let n = c.dim();
    // forms[k] is the Smith form of ∂_k for 1 <= k <= n
    let forms: Vec<Option<SmithForm>> = (0..=n)
        .map(|k| {
            (k >= 1).then(|| smith_normal_form(&boundary_matrix(c, k).expect("k in range").matrix))
        })
        .collect();
    let rank = |k: usize| {
        forms
            .get(k)
            .and_then(Option::as_ref)
            .map_or(0, SmithForm::rank)
    };
    let degrees = (0..=n)
        .map(|k| DegreeHomology {
            k,
            betti: c.num_faces(k) - rank(k) - rank(k + 1),
            torsion: forms
                .get(k + 1)
                .and_then(Option::as_ref)
                .map_or_else(Vec::new, SmithForm::torsion),
        })
        .collect();
    HomologyProfile { degrees }
}

/// Betti numbers over GF(2), from mod-2 ranks of the boundary matrices.
pub fn betti_mod2(c: &SimplicialComplex) -> Vec<usize> {
    let n = c.dim();
    let ranks: Vec<usize> = (0..=n + 1)
        .map(|k| {
            if k == 0 || k > n {
                0
            } else {
                rank_mod2(&boundary_matrix(c, k).expect("k in range").matrix)
            }
        })
        .collect();
    (0..=n)
        .map(|k| c.num_faces(k) - ranks[k] - ranks[k + 1])
        .collect()
}

/// The complex with the open top simplex `t` removed, a deformation retract
/// of the manifold punctured at an interior point of `t`.
pub fn punctured_complex(
    c: &SimplicialComplex,
    t: usize,
) -> Result<SimplicialComplex, HomologyError> {
    if t >= c.num_tops() {
        return Err(HomologyError::NoSuchTop {
            top: t,
            count: c.num_tops(),
        });
    }
    Ok(c.without_top(t)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub k: usize,
    pub spine_betti: usize,
    pub punctured_betti: usize,
    #[serde(with = "torsion_serde")]
    pub spine_torsion: Vec<BigUint>,
    #[serde(with = "torsion_serde")]
    pub punctured_torsion: Vec<BigUint>,
    pub equal: bool,
}

/// Degree-by-degree comparison of spine and punctured-complex homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyEquivalenceReport {
    pub spine: HomologyProfile,
    pub punctured: HomologyProfile,
    pub degrees: Vec<DegreeComparison>,
}

impl HomotopyEquivalenceReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|d| d.equal)
    }
}

/// Compares the homology of the spine with that of the complex punctured at
/// the root simplex. A mismatch is reported, not raised.
pub fn verify_homotopy_equivalence(
    c: &SimplicialComplex,
    d: &Decomposition,
) -> Result<HomotopyEquivalenceReport, HomologyError> {
    let punctured = homology_groups(&punctured_complex(c, d.root)?);
    Ok(compare_with_punctured(c, d, punctured))
}

/// As [`verify_homotopy_equivalence`], reusing a precomputed punctured profile.
pub fn compare_with_punctured(
    c: &SimplicialComplex,
    d: &Decomposition,
    punctured: HomologyProfile,
) -> HomotopyEquivalenceReport {
    let spine = match spine_subcomplex(c, d) {
        Ok(s) => homology_groups(&s.complex),
        Err(_) => HomologyProfile {
            degrees: Vec::new(),
        },
    };
    let top = spine.degrees.len().max(punctured.degrees.len());
    let degrees = (0..top)
        .map(|k| DegreeComparison {
            k,
            spine_betti: spine.betti(k),
            punctured_betti: punctured.betti(k),
            spine_torsion: spine.torsion(k).to_vec(),
            punctured_torsion: punctured.torsion(k).to_vec(),
            equal: spine.same_groups(&punctured, k),
        })
        .collect();
    HomotopyEquivalenceReport {
        spine,
        punctured,
        degrees,
    }
}
