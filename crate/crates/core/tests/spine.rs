use std::collections::BTreeSet;

use proptest::prelude::*;
use spineforge_core::census::{self, CENSUS};
use spineforge_core::homology::{boundary_matrix, homology_groups, verify_homotopy_equivalence};
use spineforge_core::spine::{spine_connected, Decomposition};
use spineforge_core::{decompose, SimplicialComplex, Strategy};

fn complex(i: usize) -> SimplicialComplex {
    (CENSUS[i].builder)()
}

fn strategy() -> impl proptest::strategy::Strategy<Value = Strategy> {
    prop_oneof![
        Just(Strategy::Bfs),
        Just(Strategy::Dfs),
        Just(Strategy::Random)
    ]
}

/// Every 3-subset of the tetrahedron's 6 edges that is a spanning tree of
/// the dual K4 (Cayley: 4^2 = 16 of them) gives a valid decomposition whose
/// spine passes the homology check; the other 4 subsets are rejected.
#[test]
fn all_spanning_trees_of_the_tetrahedron() {
    let c = census::sphere_tet();
    let ridges = c.num_faces(1);
    let mut trees = 0;
    let mut rejected = 0;
    for mask in 0u32..(1 << ridges) {
        if mask.count_ones() != 3 {
            continue;
        }
        let faces: BTreeSet<usize> = (0..ridges).filter(|r| mask >> r & 1 == 1).collect();
        match Decomposition::from_gate_faces(&c, 0, &faces) {
            Ok(d) => {
                trees += 1;
                assert_eq!(d.spine.len(), 3);
                assert!(spine_connected(&c, &d).unwrap());
                assert!(verify_homotopy_equivalence(&c, &d).unwrap().holds());
            }
            Err(_) => rejected += 1,
        }
    }
    assert_eq!((trees, rejected), (16, 4));
}

/// The growth can reach every spanning tree of the tetrahedron's dual.
#[test]
fn random_growth_covers_all_trees() {
    let c = census::sphere_tet();
    let mut seen = BTreeSet::new();
    for seed in 0..2000 {
        let d = decompose(&c, 0, Strategy::Random, seed).unwrap();
        seen.insert(d.gates.iter().map(|g| g.face).collect::<BTreeSet<_>>());
    }
    assert_eq!(seen.len(), 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spine_size_is_ridges_minus_tree_edges(
        i in 0..CENSUS.len(), s in strategy(), seed in any::<u64>(), r in any::<usize>()
    ) {
        let c = complex(i);
        let d = decompose(&c, r % c.num_tops(), s, seed).unwrap();
        let n = c.dim();
        prop_assert_eq!(d.spine.len(), c.num_faces(n - 1) - (c.num_tops() - 1));
        prop_assert_eq!(d.gates.len(), c.num_tops() - 1);
    }

    #[test]
    fn gate_order_is_prefix_connected(
        i in 0..CENSUS.len(), s in strategy(), seed in any::<u64>(), r in any::<usize>()
    ) {
        let c = complex(i);
        let d = decompose(&c, r % c.num_tops(), s, seed).unwrap();
        let mut painted = vec![d.root];
        for g in &d.gates {
            prop_assert!(painted.contains(&g.parent));
            prop_assert!(!painted.contains(&g.child));
            prop_assert!(c.ridge_cofacets(g.face).contains(&g.parent));
            prop_assert!(c.ridge_cofacets(g.face).contains(&g.child));
            painted.push(g.child);
        }
    }

    #[test]
    fn relabeling_preserves_invariants(i in 0..CENSUS.len(), key in any::<u64>(), seed in any::<u64>()) {
        let c = complex(i);
        let v = c.num_vertices();
        let mut perm: Vec<usize> = (0..v).collect();
        // a key-driven shuffle
        let mut k = key;
        for j in (1..v).rev() {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(j, (k >> 33) as usize % (j + 1));
        }
        let relabeled = c.relabeled(&perm).unwrap();
        prop_assert_eq!(relabeled.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(relabeled.f_vector(), c.f_vector());
        prop_assert_eq!(homology_groups(&relabeled), homology_groups(&c));
        let d = decompose(&relabeled, 0, Strategy::Random, seed).unwrap();
        prop_assert!(verify_homotopy_equivalence(&relabeled, &d).unwrap().holds());
    }

    #[test]
    fn json_round_trip(i in 0..CENSUS.len(), s in strategy(), seed in any::<u64>()) {
        let c = complex(i);
        let d = decompose(&c, 0, s, seed).unwrap();
        let text = d.to_json(&c);
        prop_assert_eq!(Decomposition::from_json(&c, &text).unwrap(), d);
    }
}

#[test]
fn boundary_of_boundary_vanishes() {
    for e in CENSUS {
        let c = (e.builder)();
        for k in 1..c.dim() {
            let lower = boundary_matrix(&c, k).unwrap().matrix;
            let upper = boundary_matrix(&c, k + 1).unwrap().matrix;
            let product = lower.checked_mul(&upper).unwrap();
            assert!(product.is_zero(), "{} k = {k}", e.name);
        }
    }
}

#[test]
fn alternating_betti_sum_is_euler_characteristic() {
    for e in CENSUS {
        let c = (e.builder)();
        let h = homology_groups(&c);
        assert_eq!(
            h.euler_characteristic(),
            c.euler_characteristic(),
            "{}",
            e.name
        );
        let alt: i64 = h
            .bettis()
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(alt, c.euler_characteristic(), "{}", e.name);
    }
}

#[test]
fn census_entries_check_out() {
    for e in CENSUS {
        e.build_checked().unwrap();
    }
}
