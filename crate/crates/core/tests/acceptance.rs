//! End-to-end acceptance checks; prints one PASS/FAIL line per criterion.
//!
//! Oracles are written out independently of the library wherever the check
//! compares against a closed form.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use polflow::connection::{compatibility_sides, connection_term, FramedField};
use polflow::expfam::{border_pol_expectation, count_table, pol_expectation_theta};
use polflow::fisher::{fisher_eta, fisher_inverse_det, fisher_inverse_eta, precision_identity_check};
use polflow::flow::{
    classify, find_fixed_points, grid_seeds, integrate, FlowSettings, NewtonSettings, Stability, TerminalReason,
};
use polflow::indices::{cubic_conditions, cubic_index_eta, grad_pol_eta, pol, pol_raw, CubicIndexCoeffs, Index};
use polflow::natgrad::{cubic_natgrad_n2, jacobian_natgrad_pol_n2, natgrad_pol_n2, natural_gradient, VectorField};
use polflow::replicator::{integrate_lv, integrate_replicator, replicator_in_chart, Chart, Fitness, LvParams};
use polflow::simplex::{eta_to_point, theta_to_point, EtaCoords, SimplexPoint, ThetaCoords};
use polflow::timeseries::{analyze_series, DistributionSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the open simplex on `n + 1` categories.
fn random_probs(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..=n).map(|_| -(1.0 - r.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

fn random_eta(r: &mut ChaCha8Rng, n: usize) -> EtaCoords {
    EtaCoords::new(random_probs(r, n)[1..].to_vec()).unwrap()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn c1_fisher_inverse_identity() -> Check {
    let started = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for _ in 0..1000 {
            worst = worst.max(precision_identity_check(&random_eta(&mut r, n)).map_err(|e| e.to_string())?);
        }
    }
    let elapsed = started.elapsed();
    ensure(worst <= 1e-9, || format!("max residual {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("max residual {worst:.2e} over 7000 points in {elapsed:.2?}"))
}

fn c2_closed_form_matrices() -> Check {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let eta = random_eta(&mut r, 3);
        let e = eta.as_slice();
        let rest = 1.0 - e[0] - e[1] - e[2];
        let expected_i = DMatrix::from_fn(3, 3, |j, h| 1.0 / rest + if j == h { 1.0 / e[j] } else { 0.0 });
        let expected_inv = DMatrix::from_fn(3, 3, |j, h| if j == h { e[j] * (1.0 - e[j]) } else { -e[j] * e[h] });
        let i = fisher_eta(&eta).map_err(|x| x.to_string())?.entries;
        let scale = max_abs(&expected_i);
        worst = worst.max(max_abs(&(i - &expected_i)) / scale);
        worst = worst.max(max_abs(&(fisher_inverse_eta(&eta).entries - &expected_inv)));
        let det = rest * e[0] * e[1] * e[2];
        worst = worst.max((fisher_inverse_det(&eta) - det).abs());
        worst = worst.max((expected_inv.determinant() - det).abs());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e} at 100 points (n = 3)"))
}

fn c3_natgrad_polynomial() -> Check {
    let mut worst = 0.0f64;
    for i in 0..200 {
        for j in 0..200 {
            let eta = EtaCoords::extended(vec![i as f64 / 199.0, j as f64 / 199.0]);
            let (x, y) = (eta.as_slice()[0], eta.as_slice()[1]);
            // grad · (diag(η) − ηηᵗ), multiplied out by hand
            let g = [
                6.0 * x * y + 3.0 * y * y - 2.0 * x - 4.0 * y + 1.0,
                6.0 * x * y + 3.0 * x * x - 2.0 * y - 4.0 * x + 1.0,
            ];
            let composed = [g[0] * (x - x * x) - g[1] * x * y, -g[0] * x * y + g[1] * (y - y * y)];
            let closed = natgrad_pol_n2(&eta).map_err(|e| e.to_string())?;
            let library = natural_gradient(&grad_pol_eta(&eta), &eta).map_err(|e| e.to_string())?;
            for k in 0..2 {
                worst = worst.max((closed[k] - composed[k]).abs()).max((closed[k] - library[k]).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e} on a 200x200 grid"))
}

fn c4_jacobians_and_classification() -> Check {
    let m = |v: [f64; 4], s: f64| DMatrix::from_row_slice(2, 2, &v) * s;
    let cases = [
        ([0.0, 0.0], m([1.0, 0.0, 0.0, 1.0], 1.0)),
        ([0.0, 1.0], m([1.0, 0.0, 0.0, 1.0], 1.0)),
        ([1.0, 0.0], m([1.0, 0.0, 0.0, 1.0], 1.0)),
        ([0.0, 0.5], m([2.0, 0.0, 1.0, 4.0], -0.125)),
        ([0.5, 0.0], m([4.0, 1.0, 0.0, 2.0], -0.125)),
        ([0.5, 0.5], m([3.0, -1.0, -1.0, 3.0], -0.125)),
    ];
    let field = VectorField::natural_gradient_of(Index::Pol, 2).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let (mut repellers, mut attractors) = (0, 0);
    for (p, expected) in &cases {
        let eta = EtaCoords::extended(p.to_vec());
        let j = jacobian_natgrad_pol_n2(&eta).map_err(|e| e.to_string())?;
        worst = worst.max(max_abs(&(j - expected)));
        match classify(&field, &eta, 1e-10).map_err(|e| e.to_string())?.classification {
            Stability::Repeller => repellers += 1,
            Stability::Attractor => attractors += 1,
            other => return Err(format!("{p:?} classified as {other:?}")),
        }
    }
    ensure(worst <= 1e-12, || format!("max entry deviation {worst:e}"))?;
    ensure(repellers == 3 && attractors == 3, || format!("{repellers} repellers, {attractors} attractors"))?;
    Ok(format!("6 Jacobians within {worst:.1e}; 3 repellers, 3 attractors"))
}

/// `E[exactly two of three draws coincide] / 3` by enumerating all triples.
fn triple_oracle(p: &[f64]) -> f64 {
    let k = p.len();
    let mut total = 0.0;
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let distinct = 1 + usize::from(y != x) + usize::from(z != x && z != y);
                if distinct == 2 {
                    total += p[x] * p[y] * p[z];
                }
            }
        }
    }
    total / 3.0
}

fn c5_pol_values() -> Check {
    ensure(pol_raw(&[1.0, 0.0, 0.0]) == 0.0, || "vertex".into())?;
    ensure(pol_raw(&[0.5, 0.5, 0.0]) == 0.25, || "edge midpoint".into())?;
    let u = pol(&SimplexPoint::uniform(2));
    ensure((u - 2.0 / 9.0).abs() <= 1e-15, || format!("uniform gives {u}"))?;
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for n in 1..=6 {
        for _ in 0..100 {
            let p = SimplexPoint::new(random_probs(&mut r, n)).map_err(|e| e.to_string())?;
            worst = worst.max((pol(&p) - triple_oracle(p.probs())).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("oracle deviation {worst:e}"))?;
    Ok(format!("reference values exact; triple oracle within {worst:.1e} for n = 1..6"))
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale.max(1e-12)
}

fn c6_gradients() -> Check {
    let mut r = rng(6);
    let h = 1e-6;
    let mut worst_pol = 0.0f64;
    let mut worst_cubic = 0.0f64;
    for _ in 0..1000 {
        let n = r.gen_range(2..=6);
        let eta = random_eta(&mut r, n);
        let pol_at = |v: &[f64]| {
            let s: f64 = v.iter().sum();
            let mut probs = vec![1.0 - s];
            probs.extend_from_slice(v);
            probs.iter().map(|p| p * p * (1.0 - p)).sum::<f64>()
        };
        let fd: Vec<f64> = (0..n)
            .map(|k| {
                let mut a = eta.as_slice().to_vec();
                let mut b = a.clone();
                a[k] += h;
                b[k] -= h;
                (pol_at(&a) - pol_at(&b)) / (2.0 * h)
            })
            .collect();
        worst_pol = worst_pol.max(rel_err(&grad_pol_eta(&eta), &fd));

        let k = CubicIndexCoeffs::new(
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
        );
        let eta2 = random_eta(&mut r, 2);
        let (x, y) = (eta2.as_slice()[0], eta2.as_slice()[1]);
        let f = |a: f64, b: f64| cubic_index_eta(&k, &EtaCoords::extended(vec![a, b])).unwrap();
        let g = [(f(x + h, y) - f(x - h, y)) / (2.0 * h), (f(x, y + h) - f(x, y - h)) / (2.0 * h)];
        let expected = [g[0] * (x - x * x) - g[1] * x * y, -g[0] * x * y + g[1] * (y - y * y)];
        let got = cubic_natgrad_n2(&k, &eta2).map_err(|e| e.to_string())?;
        worst_cubic = worst_cubic.max(rel_err(&got, &expected));
    }
    ensure(worst_pol <= 1e-6, || format!("POL gradient relative error {worst_pol:e}"))?;
    ensure(worst_cubic <= 1e-6, || format!("cubic natural gradient relative error {worst_cubic:e}"))?;
    Ok(format!("relative errors {worst_pol:.1e} (POL), {worst_cubic:.1e} (cubic) at 1000 points"))
}

fn c7_cubic_conditions() -> Check {
    let c = cubic_conditions(&CubicIndexCoeffs::POL);
    ensure(c.nondefinite && c.attracting, || format!("{c:?}"))?;
    let field = VectorField::natural_gradient_of(Index::Cubic(CubicIndexCoeffs::POL), 2).map_err(|e| e.to_string())?;
    let search = find_fixed_points(&field, &grid_seeds(7, 0.0, 1.0), &NewtonSettings::default());
    let third = 1.0 / 3.0;
    let expected = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5], [third, third]];
    ensure(search.points.len() == 7, || format!("{} fixed points", search.points.len()))?;
    for e in expected {
        let hit =
            search.points.iter().find(|p| (p.location[0] - e[0]).abs() < 1e-8 && (p.location[1] - e[1]).abs() < 1e-8);
        let p = hit.ok_or_else(|| format!("missing {e:?}"))?;
        ensure(p.residual <= 1e-10, || format!("residual {:e} at {e:?}", p.residual))?;
        let exact = field.eval(&e);
        ensure(exact.iter().all(|v| v.abs() <= 1e-10), || format!("residual {exact:?} at exact {e:?}"))?;
    }
    let bad = [CubicIndexCoeffs::new(1.0, 0.0, 6.0, 0.0, 0.0), CubicIndexCoeffs::new(1.0, 1.0, 0.0, 0.0, 0.0)];
    for k in bad {
        ensure(!cubic_conditions(&k).admissible(), || format!("{k:?} reported admissible"))?;
    }
    Ok("POL coefficients admissible; 7 locations found; inadmissible sets rejected".into())
}

fn c8_expfam() -> Check {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let th = ThetaCoords::new(vec![r.gen_range(-4.0..4.0), r.gen_range(-4.0..4.0)]).unwrap();
        let p = theta_to_point(&th);
        let e = pol_expectation_theta(&th).map_err(|x| x.to_string())?;
        worst = worst.max((e - 3.0 * triple_oracle(p.probs())).abs());
    }
    ensure(worst <= 1e-12, || format!("deviation {worst:e}"))?;
    let f = count_table().f;
    ensure(f == [[1, 3, 3, 1], [3, 6, 3, 0], [3, 3, 0, 0], [1, 0, 0, 0]], || format!("{f:?}"))?;
    for e in [[0.0, 0.5], [0.5, 0.0], [0.5, 0.5]] {
        let v = border_pol_expectation(&EtaCoords::extended(e.to_vec())).map_err(|x| x.to_string())?;
        ensure(v == 0.75, || format!("{e:?} gives {v}"))?;
    }
    Ok(format!("3·POL identity within {worst:.1e}; count table exact; border values 3/4"))
}

fn c9_flow_convergence() -> Check {
    let started = Instant::now();
    let field = VectorField::natural_gradient_of(Index::Pol, 2).map_err(|e| e.to_string())?;
    let settings = FlowSettings { dt: 0.1, t_max: 5000.0, stop_tol: 1e-8 };
    let mids = [[0.5, 0.0], [0.0, 0.5], [0.5, 0.5]];
    let mut r = rng(9);
    let mut worst_dip = 0.0f64;
    let mut hits = [0usize; 3];
    for _ in 0..100 {
        let start = random_eta(&mut r, 2);
        let t = integrate(&field, &start, settings).map_err(|e| e.to_string())?;
        ensure(t.terminal_reason == TerminalReason::Converged, || format!("{start:?}: {:?}", t.terminal_reason))?;
        let end = t.last_state();
        ensure(*t.field_norms.last().unwrap() < 1e-8, || "final field norm".into())?;
        let k = mids
            .iter()
            .position(|m| (m[0] - end[0]).abs() < 1e-6 && (m[1] - end[1]).abs() < 1e-6)
            .ok_or_else(|| format!("{start:?} ended at {end:?}"))?;
        hits[k] += 1;
        worst_dip = worst_dip.max(t.max_dip());
    }
    let elapsed = started.elapsed();
    ensure(worst_dip <= 1e-9, || format!("POL dipped by {worst_dip:e}"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("100/100 converged (midpoint counts {hits:?}), max dip {worst_dip:.1e}, {elapsed:.2?}"))
}

fn c10_lv_conservation() -> Check {
    let params = LvParams::rescaled(1.0, 1.0).map_err(|e| e.to_string())?;
    let drift = integrate_lv(&params, [2.0, 1.0], 1e-3, 50.0).map_err(|e| e.to_string())?.conserved_drift();
    ensure(drift <= 1e-6, || format!("drift {drift:e}"))?;
    // At dt = 1e-3 the drift is at round-off level, so the order is measured
    // where truncation error dominates.
    let coarse = integrate_lv(&params, [2.0, 1.0], 1e-2, 50.0).map_err(|e| e.to_string())?.conserved_drift();
    let fine = integrate_lv(&params, [2.0, 1.0], 5e-3, 50.0).map_err(|e| e.to_string())?.conserved_drift();
    let ratio = coarse / fine;
    ensure((12.0..=20.0).contains(&ratio), || format!("halving ratio {ratio}"))?;
    Ok(format!("drift {drift:.1e} at dt=1e-3; halving 1e-2 -> 5e-3 shrinks drift {ratio:.1}x"))
}

fn c11_chart_equivalence() -> Check {
    let params = LvParams::rescaled(2.0, 1.0).map_err(|e| e.to_string())?;
    let fit = Fitness::lotka_volterra(params);
    let start = SimplexPoint::new(vec![0.5, 0.3, 0.2]).map_err(|e| e.to_string())?;
    let runs: Vec<_> = Chart::ALL
        .iter()
        .map(|&c| integrate_replicator(&fit, c, &start, 1e-3, 10.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut sup = 0.0f64;
    for other in &runs[1..] {
        ensure(other.points.len() == runs[0].points.len(), || "trajectory lengths differ".into())?;
        for (a, b) in runs[0].points.iter().zip(&other.points) {
            sup = a.iter().zip(b).fold(sup, |m, (x, y)| m.max((x - y).abs()));
        }
    }
    ensure(sup <= 1e-6, || format!("sup-norm {sup:e}"))?;
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_probs(&mut r, 2);
        let state = Chart::Exponential.from_point(&SimplexPoint::new(p.clone()).unwrap());
        let v = replicator_in_chart(&fit, Chart::Exponential, &state).map_err(|e| e.to_string())?;
        let q = theta_to_point(&ThetaCoords::new(state).unwrap());
        let q = q.probs();
        let f1 = 2.0 * (1.0 - q[2] / q[0]);
        let f2 = 1.0 * (q[1] / q[0] - 1.0);
        worst = worst.max((v[0] - f1).abs()).max((v[1] - f2).abs());
    }
    ensure(worst <= 1e-12, || format!("exponential velocity deviation {worst:e}"))?;
    Ok(format!("charts agree within {sup:.1e}; exponential velocity within {worst:.1e}"))
}

fn c12_connection() -> Check {
    let mut r = rng(12);
    let mut worst_identity = 0.0f64;
    for n in 2..=5 {
        for _ in 0..100 {
            worst_identity =
                worst_identity.max(precision_identity_check(&random_eta(&mut r, n)).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst_identity <= 1e-9, || format!("precision residual {worst_identity:e}"))?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let c = random_probs(&mut r, 2);
        let c = [c[1] * 0.6 + 0.15, c[2] * 0.6 + 0.1];
        let (a1, a2, w1, w2, ph) = (
            r.gen_range(0.01..0.05),
            r.gen_range(0.01..0.05),
            r.gen_range(0.5..3.0),
            r.gen_range(0.5..3.0),
            r.gen_range(0.0..6.0),
        );
        let f = FramedField::new(move |t| vec![c[0] + a1 * (w1 * t + ph).sin(), c[1] + a2 * (w2 * t).cos()], {
            let (b0, b1, b2) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(0.5..2.0));
            move |t| vec![b0 + (b2 * t).sin(), b1 * t * t - 0.3]
        });
        let (d0, d1) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let g = f.with_components(move |t| vec![(t * d0).cos(), d1 + t]);
        for k in 0..5 {
            let t = k as f64 * 0.3;
            let (lhs, rhs) = compatibility_sides(&f, &g, t, 1e-4).map_err(|e| e.to_string())?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(worst <= 1e-5, || format!("compatibility deviation {worst:e}"))?;
    let still = FramedField::new(|_| vec![0.2, 0.3], |t| vec![t, 1.0]);
    let corr = connection_term(&still, 0.5, 1e-4).map_err(|e| e.to_string())?;
    ensure(corr.iter().all(|x| x.abs() <= 1e-10), || format!("correction on a constant path {corr:?}"))?;
    Ok(format!("precision residual {worst_identity:.1e}; compatibility within {worst:.1e} on 10 paths"))
}

fn c13_series() -> Check {
    let field = VectorField::natural_gradient_of(Index::Pol, 2).map_err(|e| e.to_string())?;
    let settings = FlowSettings { dt: 0.01, t_max: 5.0, stop_tol: 1e-12 };
    let mut r = rng(13);
    let mut min_score = f64::INFINITY;
    let mut min_cos = f64::INFINITY;
    let mut steps = 0;
    for _ in 0..10 {
        let start = random_eta(&mut r, 2);
        let t = integrate(&field, &start, settings).map_err(|e| e.to_string())?;
        let points = t
            .states
            .iter()
            .step_by(10)
            .map(|s| eta_to_point(&EtaCoords::new(s.clone())?))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let series = DistributionSeries::from_points(points).map_err(|e| e.to_string())?;
        for s in analyze_series(&series, &Index::Pol).map_err(|e| e.to_string())?.steps {
            min_score = min_score.min(s.score);
            min_cos = min_cos.min(s.cosine.unwrap_or(f64::NEG_INFINITY));
            steps += 1;
        }
    }
    ensure(min_score > 0.0, || format!("score {min_score:e}"))?;
    ensure(min_cos >= 0.99, || format!("cosine {min_cos}"))?;
    let p = SimplexPoint::new(vec![0.2, 0.3, 0.5]).unwrap();
    let constant = DistributionSeries::from_points(vec![p; 4]).map_err(|e| e.to_string())?;
    for s in analyze_series(&constant, &Index::Pol).map_err(|e| e.to_string())?.steps {
        ensure(s.velocity.iter().all(|v| *v == 0.0) && s.score == 0.0, || format!("{s:?}"))?;
    }
    Ok(format!("{steps} flow steps: min score {min_score:.2e}, min cosine {min_cos:.6}; constant series exact zero"))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn c14_cli_determinism() -> Check {
    let cases: [(&str, &[&str]); 6] = [
        ("expfam_triples.csv", &["expfam", "--table", "triples"]),
        ("expfam_counts.csv", &["expfam", "--table", "counts"]),
        ("expfam_border.csv", &["expfam", "--table", "border"]),
        ("field_pol_grid5.csv", &["field", "--grid", "5"]),
        ("field_pol_grid5_euclidean.csv", &["field", "--grid", "5", "--euclidean"]),
        ("flow_pol_04_045.csv", &["flow", "--start", "0.4,0.45", "--dt", "0.1", "--tmax", "500", "--tol", "1e-10"]),
    ];
    for (file, args) in cases {
        let expected = std::fs::read(golden_dir().join(file)).map_err(|e| format!("{file}: {e}"))?;
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_polflow")).args(args).output().map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("{file}: exit {:?}", out.status.code()))?;
            ensure(out.stdout == expected, || format!("{file}: output differs from golden file"))?;
        }
    }
    Ok("6 outputs byte-identical to golden files on repeated runs".into())
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("Fisher inverse identity, n = 2..8", c1_fisher_inverse_identity),
        ("closed-form Fisher matrices, n = 3", c2_closed_form_matrices),
        ("POL natural-gradient polynomial", c3_natgrad_polynomial),
        ("fixed-point Jacobians and classification", c4_jacobians_and_classification),
        ("POL values and triple oracle", c5_pol_values),
        ("gradients vs finite differences", c6_gradients),
        ("cubic-family conditions and fixed points", c7_cubic_conditions),
        ("exponential-family identities", c8_expfam),
        ("flow convergence and monotone ascent", c9_flow_convergence),
        ("Lotka-Volterra conserved quantity", c10_lv_conservation),
        ("replicator chart equivalence", c11_chart_equivalence),
        ("precision identity and metric compatibility", c12_connection),
        ("velocity-index pipeline", c13_series),
        ("CLI determinism", c14_cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
