use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spineforge_core::census::CENSUS;
use spineforge_core::chart::{build_chart, CellChart, PointRef};
use spineforge_core::spine::{decompose, Strategy};
use spineforge_core::{Metric, SimplicialComplex};

fn uniform_bary(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| w[1] - w[0]).collect()
}

fn charts() -> Vec<(&'static str, SimplicialComplex, CellChart)> {
    let mut out = Vec::new();
    for e in CENSUS {
        let c = (e.builder)();
        let m = Metric::from_complex(&c).unwrap();
        for strategy in Strategy::ALL {
            for seed in [0, 7] {
                let root = seed as usize % c.num_tops();
                let d = decompose(&c, root, strategy, seed).unwrap();
                let ch = build_chart(&c, &d, &m).unwrap();
                out.push((e.name, c.clone(), ch));
            }
        }
    }
    out
}

#[test]
fn inverse_then_forward_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, c, ch) in charts() {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let top = rng.gen_range(0..c.num_tops());
            let q = PointRef::new(&c, top, uniform_bary(&mut rng, c.dim() + 1)).unwrap();
            let p = ch.inverse_map(&q).unwrap_or_else(|e| panic!("{name}: {e}"));
            let back = ch.forward_map(&p).unwrap();
            worst = worst.max(back.bary_distance(&c, &q));
        }
        assert!(worst <= 1e-9, "{name}: {worst}");
    }
}

#[test]
fn forward_then_inverse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, c, ch) in charts() {
        for _ in 0..200 {
            let p = uniform_bary(&mut rng, c.dim() + 1);
            let q = ch.forward_map(&p).unwrap();
            let back = ch
                .inverse_map(&q)
                .unwrap_or_else(|e| panic!("{name}: {e} at {q:?}"));
            let err = p
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-9, "{name}: {err}");
        }
    }
}

#[test]
fn broken_lines_to_spine_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, c, ch) in charts() {
        let n = c.dim();
        for &r in &ch.decomposition().spine {
            let top = c.ridge_cofacets(r)[rng.gen_range(0..2)];
            let verts = c.top(top);
            let ridge = c.face(n - 1, r);
            let w = uniform_bary(&mut rng, n);
            let mut bary = vec![0.0; n + 1];
            for (k, v) in ridge.iter().enumerate() {
                bary[verts.iter().position(|u| u == v).unwrap()] = w[k];
            }
            let z = PointRef::new(&c, top, bary).unwrap();
            let line = ch.broken_line_to(&z).unwrap();
            assert_eq!(line.segments.len(), 1 + ch.depth(top), "{name}");
            assert!(line.junction_mismatch(&c) <= 1e-9);
            assert_eq!(line.endpoint(), &z);
            assert!(line.total_length() > 0.0);
            // the forward line from the same root exit ends at z too
            let full = ch.line_from_boundary(&line.segments[0].end.bary).unwrap();
            assert!(full.endpoint().bary_distance(&c, &z) <= 1e-9, "{name}");
        }
    }
}

/// Points approaching each gate from the parent side. Along a broken line
/// the image gap halves with the approach distance. Along a transverse
/// direction the map is only piecewise smooth, so close to the gate the
/// ratio tends to one half from above.
#[test]
fn forward_map_is_continuous_across_gates() {
    let c0 = |n: usize| vec![1.0 / (n + 1) as f64; n + 1];
    for (name, c, ch) in charts() {
        let n = c.dim();
        for rec in ch.records() {
            let parent = c.top(rec.parent);
            let face = c.face(n - 1, rec.face);
            let on_gate: Vec<f64> = parent
                .iter()
                .map(|v| {
                    if face.contains(v) {
                        1.0 / n as f64
                    } else {
                        0.0
                    }
                })
                .collect();
            let near: Vec<f64> = on_gate
                .iter()
                .map(|g| 0.5 * g + 0.5 / (n + 1) as f64)
                .collect();
            let gate = PointRef::new(&c, rec.parent, on_gate).unwrap();
            let start = PointRef::new(&c, rec.parent, near).unwrap();
            let pg = ch.inverse_map(&gate).unwrap();
            let far = ch.inverse_map(&start).unwrap();
            let transverse: Vec<f64> = pg
                .iter()
                .zip(&far)
                .map(|(g, f)| g + 0.00390625 * (f - g))
                .collect();
            let radial: Vec<f64> = pg
                .iter()
                .zip(c0(n))
                .map(|(g, o)| g + 0.01 * (o - g))
                .collect();
            for (kind, p0) in [("radial", radial), ("transverse", transverse)] {
                let mut gaps = Vec::new();
                for k in 0..5 {
                    let h = 0.5f64.powi(k);
                    let p: Vec<f64> = pg.iter().zip(&p0).map(|(a, b)| a + h * (b - a)).collect();
                    gaps.push(ch.forward_map(&p).unwrap().bary_distance(&c, &gate));
                }
                let bound = if kind == "radial" { 0.5 } else { 0.55 };
                for w in gaps.windows(2) {
                    assert!(w[1] <= bound * w[0] + 1e-12, "{name} {kind}: {gaps:?}");
                }
            }
        }
    }
}
