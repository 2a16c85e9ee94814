//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spineforge_core::census::{self, CENSUS};
use spineforge_core::chart::{build_chart, compress, stretch, CellChart, PointRef};
use spineforge_core::complex::DualGraph;
use spineforge_core::fields::{
    admissible_epsilon, black_hole_region, constant_tensor, continuity_report, deform_tensor,
    deformation_rows, extend_frame, gate_agreement, Evaluate, Seam, TensorField, FRAME_DET_MIN,
};
use spineforge_core::homology::{compare_with_punctured, homology_groups, punctured_complex};
use spineforge_core::spine::{decompose_on, spine_connected};
use spineforge_core::{decompose, Metric, SimplicialComplex, Strategy};

const SEEDS: u64 = 100;

type Check = Result<String, String>;

/// Name, Betti numbers, torsion per degree.
type Profile = (&'static str, &'static [usize], &'static [&'static [u64]]);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn spine_counts() -> Check {
    let expected = [
        ("circle3", 1),
        ("sphere_tet", 3),
        ("torus7", 8),
        ("rp2_6", 6),
        ("sphere3_pent", 6),
    ];
    let complexes: Vec<_> = expected
        .iter()
        .map(|(name, _)| (census::lookup(name).unwrap().builder)())
        .collect();
    let start = Instant::now();
    let mut runs = 0;
    for ((name, want), c) in expected.iter().zip(&complexes) {
        let dual = DualGraph::build(c).map_err(|r| format!("{name}: {r:?}"))?;
        for strategy in Strategy::ALL {
            for seed in 0..SEEDS {
                let d = decompose_on(c, &dual, 0, strategy, seed).map_err(|e| e.to_string())?;
                ensure(d.spine.len() == *want, || {
                    format!("{name} {strategy} seed {seed}: |spine| = {}", d.spine.len())
                })?;
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{runs} decompositions in {elapsed:.2?}"))
}

/// Runs every census complex × root × seed once and checks the homology
/// comparison, connectivity and (where simply connected) b₁ of the spine.
fn homology_runs() -> (Check, Check) {
    let start = Instant::now();
    let mut runs = 0;
    let mut oracle: Result<(), String> = Ok(());
    let mut connected: Result<(), String> = Ok(());
    'outer: for e in CENSUS {
        let c = (e.builder)();
        let dual = DualGraph::build(&c).unwrap();
        let simply_connected = matches!(e.name, "sphere_tet" | "sphere3_pent");
        for root in 0..c.num_tops() {
            let punctured = homology_groups(&punctured_complex(&c, root).unwrap());
            for seed in 0..SEEDS {
                let d = decompose_on(&c, &dual, root, Strategy::Random, seed).unwrap();
                let report = compare_with_punctured(&c, &d, punctured.clone());
                runs += 1;
                if !report.holds() {
                    oracle = Err(format!("{} root {root} seed {seed}: {report:?}", e.name));
                    break 'outer;
                }
                if connected.is_ok() {
                    if !spine_connected(&c, &d).unwrap_or(false) {
                        connected = Err(format!(
                            "{} root {root} seed {seed}: spine disconnected",
                            e.name
                        ));
                    } else if simply_connected && report.spine.betti(1) != 0 {
                        connected = Err(format!(
                            "{} root {root} seed {seed}: b1(spine) = {}",
                            e.name,
                            report.spine.betti(1)
                        ));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let oracle = oracle
        .and_then(|_| within(elapsed, Duration::from_secs(30)))
        .map(|_| format!("{runs} runs, exact, in {elapsed:.2?}"));
    let connected = connected.map(|_| format!("{runs} runs connected; b1 = 0 on both spheres"));
    (oracle, connected)
}

fn known_profiles() -> Check {
    let cases: [Profile; 4] = [
        ("sphere_tet", &[1, 0, 1], &[&[], &[], &[]]),
        ("torus7", &[1, 2, 1], &[&[], &[], &[]]),
        ("rp2_6", &[1, 0, 0], &[&[], &[2], &[]]),
        ("sphere3_pent", &[1, 0, 0, 1], &[&[], &[], &[], &[]]),
    ];
    for (name, betti, torsion) in cases {
        let h = homology_groups(&(census::lookup(name).unwrap().builder)());
        ensure(h.bettis() == betti, || {
            format!("{name}: betti {:?}", h.bettis())
        })?;
        for (k, t) in torsion.iter().enumerate() {
            ensure(h.torsion_u64(k) == *t, || {
                format!("{name}: torsion in degree {k} is {:?}", h.torsion_u64(k))
            })?;
        }
    }
    Ok("S2, T2, RP2, S3 exact".into())
}

fn random_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k)
        .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

fn random_point(rng: &mut ChaCha8Rng, c: &SimplicialComplex) -> PointRef {
    let top = rng.gen_range(0..c.num_tops());
    PointRef::new(c, top, random_simplex(rng, c.dim() + 1)).unwrap()
}

fn chart(c: &SimplicialComplex, root: usize, strategy: Strategy, seed: u64) -> CellChart {
    let d = decompose(c, root, strategy, seed).unwrap();
    build_chart(c, &d, &Metric::from_complex(c).unwrap()).unwrap()
}

fn surfaces() -> Vec<(&'static str, SimplicialComplex)> {
    CENSUS
        .iter()
        .map(|e| (e.name, (e.builder)()))
        .filter(|(_, c)| c.dim() == 2)
        .collect()
}

fn chart_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for (name, c) in surfaces() {
        let ch = chart(&c, 0, Strategy::Random, 5);
        for _ in 0..1000 {
            let q = random_point(&mut rng, &c);
            let p = ch.inverse_map(&q).map_err(|e| format!("{name}: {e}"))?;
            let back = ch.forward_map(&p).map_err(|e| format!("{name}: {e}"))?;
            worst = worst.max(back.bary_distance(&c, &q));

            let p = random_simplex(&mut rng, c.dim() + 1);
            let q = ch.forward_map(&p).map_err(|e| format!("{name}: {e}"))?;
            let back = ch.inverse_map(&q).map_err(|e| format!("{name}: {e}"))?;
            let err = p
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(err);
        }
    }
    ensure(worst <= 1e-9, || format!("round-trip error {worst:e}"))?;

    let mut stretch_err = 0.0f64;
    for _ in 0..1000 {
        let s1 = rng.gen_range(1e-3..10.0);
        let s2 = rng.gen_range(0.0..10.0);
        let err = [
            stretch(0.0, s1, s2).unwrap().abs(),
            (stretch(s1, s1, s2).unwrap() - (s1 + s2)).abs(),
            compress(0.0, s1, s2).unwrap().abs(),
            (compress(s1 + s2, s1, s2).unwrap() - s1).abs(),
        ];
        stretch_err = err.into_iter().fold(stretch_err, f64::max);
    }
    ensure(stretch_err <= 1e-12, || {
        format!("stretch endpoint error {stretch_err:e}")
    })?;
    Ok(format!(
        "max error {worst:.1e}; stretch endpoints {stretch_err:.1e}"
    ))
}

fn retraction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst_arc = 0.0f64;
    for (name, c) in surfaces() {
        let ch = chart(&c, 1, Strategy::Dfs, 0);
        for _ in 0..500 {
            let x = random_point(&mut rng, &c);
            let t: f64 = rng.gen();
            let at0 = ch.retract(&x, 0.0).map_err(|e| format!("{name}: {e}"))?;
            ensure(at0 == x, || format!("{name}: F(x, 0) = {at0:?} != {x:?}"))?;
            let at1 = ch.retract(&x, 1.0).map_err(|e| format!("{name}: {e}"))?;
            ensure(on_spine(&ch, &at1), || {
                format!("{name}: F(x, 1) = {at1:?} off the spine")
            })?;
            let s = ch.arc_to_spine(&x).map_err(|e| format!("{name}: {e}"))?;
            let y = ch.retract(&x, t).map_err(|e| format!("{name}: {e}"))?;
            let sy = if t == 1.0 {
                0.0
            } else {
                ch.arc_to_spine(&y).map_err(|e| e.to_string())?
            };
            worst_arc = worst_arc.max((sy - (1.0 - t) * s).abs());
        }
    }
    ensure(worst_arc <= 1e-9, || {
        format!("arc-length law error {worst_arc:e}")
    })?;
    Ok(format!("arc-length law within {worst_arc:.1e}"))
}

/// Within 1e-9 of a face of the spine closure: the support after dropping
/// tiny weights is black.
fn on_spine(ch: &CellChart, p: &PointRef) -> bool {
    if ch.is_black(p) {
        return true;
    }
    let bary: Vec<f64> = p
        .bary
        .iter()
        .map(|&b| if b <= 1e-9 { 0.0 } else { b })
        .collect();
    let s: f64 = bary.iter().sum();
    let snapped = PointRef::new(ch.complex(), p.top, bary.iter().map(|b| b / s).collect());
    snapped.map(|q| ch.is_black(&q)).unwrap_or(false)
}

fn lipschitz_field(
    c: &SimplicialComplex,
    frame: Arc<spineforge_core::fields::FrameField>,
) -> TensorField {
    let n = c.dim();
    let d = c.ambient_dim().unwrap();
    let count = n * n;
    let offset: Vec<f64> = (0..count).map(|i| 1.0 + 0.25 * i as f64).collect();
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            (0..count)
                .map(|i| ((a + 2 * i) % 5) as f64 * 0.3 - 0.6)
                .collect()
        })
        .collect();
    TensorField::linear(c, 1, 1, offset, rows)
        .unwrap()
        .with_frame(frame)
}

fn frames_and_seams() -> Check {
    let mut gate_worst = 0.0f64;
    let mut boundary_worst = 0.0f64;
    let mut spine_worst = 0.0f64;
    for e in CENSUS {
        let c = (e.builder)();
        for strategy in Strategy::ALL {
            for seed in [0, 3] {
                let root = seed as usize % c.num_tops();
                let ch = Arc::new(chart(&c, root, strategy, seed));
                let frame =
                    Arc::new(extend_frame(&ch).map_err(|err| format!("{}: {err}", e.name))?);
                ensure(frame.min_abs_det() > FRAME_DET_MIN, || {
                    format!("{}: singular frame", e.name)
                })?;
                for g in gate_agreement(&ch, &frame) {
                    gate_worst = gate_worst.max(g.max_error);
                }
                let emax = admissible_epsilon(&ch).map_err(|err| err.to_string())?;
                let hole = black_hole_region(&ch, 0.25 * emax).map_err(|err| err.to_string())?;

                // constant field: every sample equals K⁰ bit for bit
                let k0: Vec<f64> = (0..c.dim().pow(2)).map(|i| i as f64 - 0.5).collect();
                let constant = constant_tensor(k0.clone(), frame.clone(), 1, 1).unwrap();
                let deformed = deform_tensor(&constant, ch.clone(), hole).unwrap();
                for row in deformation_rows(&deformed, 8, 6).map_err(|err| err.to_string())? {
                    ensure(row.components == k0, || {
                        format!("{}: constant field moved to {:?}", e.name, row.components)
                    })?;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..50 {
                    let p = random_point(&mut rng, &c);
                    let v = deformed.evaluate(&p).map_err(|err| err.to_string())?;
                    ensure(v == k0, || {
                        format!("{}: constant field moved to {v:?}", e.name)
                    })?;
                }

                if c.coords().is_none() {
                    continue;
                }
                let k = lipschitz_field(&c, frame.clone());
                let deformed = deform_tensor(&k, ch.clone(), hole).unwrap();
                let report = continuity_report(&deformed, 16).map_err(|err| err.to_string())?;
                boundary_worst = boundary_worst.max(report.boundary_mismatch);
                if let Some(s) = report.summary(Seam::HoleBoundary) {
                    boundary_worst = boundary_worst.max(s.max_limit_jump);
                }
                if let Some(s) = report.summary(Seam::SpineLimit) {
                    spine_worst = spine_worst.max(s.max_limit_jump);
                }
            }
        }
    }
    ensure(gate_worst <= 1e-9, || {
        format!("gate frame disagreement {gate_worst:e}")
    })?;
    ensure(boundary_worst <= 1e-9, || {
        format!("hole boundary jump {boundary_worst:e}")
    })?;
    ensure(spine_worst <= 1e-6, || {
        format!("spine limit jump {spine_worst:e}")
    })?;
    Ok(format!(
        "gates {gate_worst:.1e}, hole boundary {boundary_worst:.1e}, spine limit {spine_worst:.1e}, constant exact"
    ))
}

fn determinism() -> Check {
    let mut checked = 0;
    for e in CENSUS {
        let c = (e.builder)();
        for strategy in Strategy::ALL {
            for seed in [0, 1, 42, 1 << 40] {
                let root = seed as usize % c.num_tops();
                let bytes: Vec<String> = (0..3)
                    .map(|_| decompose(&c, root, strategy, seed).unwrap().to_json(&c))
                    .collect();
                ensure(bytes[0] == bytes[1] && bytes[1] == bytes[2], || {
                    format!("{} {strategy} seed {seed}: output differs", e.name)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} configurations identical over 3 runs"))
}

fn main() -> ExitCode {
    let (oracle, connected) = homology_runs();
    let results: BTreeMap<usize, (&str, Check)> = [
        ("spine counts per census complex", spine_counts()),
        ("spine homology equals punctured homology", oracle),
        ("spine connected, b1 = 0 for spheres", connected),
        ("known homology profiles", known_profiles()),
        (
            "chart round trip and stretch identities",
            chart_round_trip(),
        ),
        ("retraction endpoints and arc-length law", retraction()),
        ("frame agreement and deformation seams", frames_and_seams()),
        ("decomposition determinism", determinism()),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, r)| (i + 1, r))
    .collect();

    let mut failed = 0;
    for (i, (name, result)) in &results {
        match result {
            Ok(detail) => println!("PASS [{i}] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{i}] {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
