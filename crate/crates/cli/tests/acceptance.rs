//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use genpos_core::genpos::{examples, perturb_pl_map, subdivide_until, CaseParams, PLMapSpec};
use genpos_core::grassmann::{
    feasible_single, single_flag_dim, single_flag_dim_geq, stratum_dim_oracle, stratum_witness, two_flag_dim,
};
use genpos_core::ruled_quadric::{quadric_through_three_skew_lines, transversals_to_four_segments, Segment3};
use genpos_core::subspace::{bridge_subspace, LinSubspace};
use genpos_core::Tolerance;
use nalgebra::{DMatrix, DVector, Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const WITNESSES: u64 = 5;
const ORACLE_SECONDS: f64 = 60.0;
const QUADRIC_REL_DEVIATION: f64 = 1e-9;
const QUADRIC_RESIDUAL: f64 = 1e-9;
const QUADRIC_SECONDS: f64 = 30.0;
const QUADRIC_TRIALS: u64 = 1000;
const TRANSVERSAL_TRIALS: u64 = 1000;
const TRANSVERSAL_MEET_TOL: f64 = 1e-9;
const MAX_DEGENERATE_FRACTION: f64 = 0.01;
const BRIDGE_TRIALS: u64 = 500;
const BRIDGE_ANGLE: f64 = 1e-8;
const BRIDGE_SINE_GAP: f64 = 1e-6;
const CASE_D_SEEDS: u64 = 200;
const SUP_SAMPLES: usize = 16;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Formula versus oracle on every feasible `(m, d, n, r)` with `m <= 8`.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for m in 1..=8i64 {
        for d in 1..=m {
            for n in 0..=m {
                for r in 0..=d {
                    if feasible_single(m, d, n, r) {
                        cases.push((m, d, n, r));
                    }
                }
            }
        }
    }
    let mut disagreements = Vec::new();
    for &(m, d, n, r) in &cases {
        let formula = single_flag_dim(m, d, n, r).unwrap().value().unwrap() as usize;
        for k in 0..WITNESSES {
            let seed = ((m * 1000 + d * 100 + n * 10 + r) as u64) << 8 | k;
            let measured = stratum_witness::<f64>(m, d, n, r, seed)
                .and_then(|w| stratum_dim_oracle(m, d, n, r, &w, &tol()));
            if measured.as_ref().ok() != Some(&formula) {
                disagreements.push(((m, d, n, r), k, measured));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        disagreements.is_empty() && secs < ORACLE_SECONDS && cases.len() >= 196,
        format!(
            "{} cases x {WITNESSES} witnesses, {} disagreements, {secs:.1} s (limit {ORACLE_SECONDS} s){}",
            cases.len(),
            disagreements.len(),
            disagreements.first().map(|d| format!(", first {d:?}")).unwrap_or_default()
        ),
    )
}

/// The `>= r` dimension via the stratification against the closed form, and
/// strict decrease in `r`.
fn criterion_2() -> Outcome {
    let closed = |m: i64, d: i64, n: i64, r: i64| (n - r) * r + (m - d) * (d - r);
    let (mut checked, mut pairs, mut bad) = (0, 0, Vec::new());
    for m in 1..=8i64 {
        for d in 1..=m {
            for n in 0..=m {
                for r in 0..=d {
                    if !feasible_single(m, d, n, r) {
                        continue;
                    }
                    checked += 1;
                    let geq = single_flag_dim_geq(m, d, n, r).unwrap().as_signed();
                    if geq != closed(m, d, n, r) {
                        bad.push(format!("geq({m},{d},{n},{r}) = {geq}"));
                    }
                    if feasible_single(m, d, n, r + 1) {
                        pairs += 1;
                        let (hi, lo) = (closed(m, d, n, r), closed(m, d, n, r + 1));
                        if single_flag_dim(m, d, n, r + 1).unwrap().as_signed() != lo || lo >= hi {
                            bad.push(format!("not strictly decreasing at ({m},{d},{n},{r})"));
                        }
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} cases, {pairs} consecutive pairs, {} failures", bad.len()))
}

/// Two-flag product formula on every admissible tuple with `m <= 8`.
fn criterion_3() -> Outcome {
    let grassmann = |n: i64, r: i64| r * (n - r);
    let (mut checked, mut bad) = (0, 0);
    for m in 1..=8i64 {
        for n1 in 0..=m {
            for n2 in 0..=(m - n1) {
                for r1 in 0..=n1 {
                    for r2 in 0..=n2 {
                        checked += 1;
                        let v = two_flag_dim(m, n1, r1, n2, r2).unwrap().as_signed();
                        if v != grassmann(n1, r1) + grassmann(n2, r2) {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} tuples, {bad} mismatches"))
}

/// Relative residual of a coefficient vector at a point, evaluated from the
/// monomials directly.
fn monomial_residual(c: &[f64; 10], p: &Vector3<f64>) -> f64 {
    let (x, y, z) = (p.x, p.y, p.z);
    let mono = [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, 1.0];
    let value: f64 = c.iter().zip(&mono).map(|(a, b)| a * b).sum();
    let scale: f64 = c.iter().zip(&mono).map(|(a, b)| (a * b).abs()).sum();
    value.abs() / scale.max(f64::MIN_POSITIVE)
}

/// Relative residual of the quadratic part on a direction.
fn asymptotic_residual(c: &[f64; 10], v: &Vector3<f64>) -> f64 {
    let (x, y, z) = (v.x, v.y, v.z);
    let mono = [x * x, y * y, z * z, x * y, x * z, y * z];
    let value: f64 = c.iter().zip(&mono).map(|(a, b)| a * b).sum();
    let scale: f64 = c.iter().zip(&mono).map(|(a, b)| (a * b).abs()).sum();
    value.abs() / scale.max(f64::MIN_POSITIVE)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut pts = [Vector3::zeros(); 6];
    for k in 0..3 {
        let t = 2.0 * PI * k as f64 / 3.0;
        let p = Vector3::new(t.cos(), t.sin(), 0.0);
        let v = Vector3::new(-t.sin(), t.cos(), 1.0);
        pts[2 * k] = p - v;
        pts[2 * k + 1] = p + v;
    }
    let q = quadric_through_three_skew_lines(&pts, &tol()).unwrap();
    let target: Matrix4<f64> = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0));
    let got: Matrix4<f64> = q.matrix() / q.matrix().norm();
    let want = target / target.norm();
    let deviation = (got - want).norm().min((got + want).norm());

    let residuals: Vec<Option<f64>> = (0..QUADRIC_TRIALS)
        .into_par_iter()
        .map(|seed| {
            let p = common::random_points::<6>(seed);
            let q = quadric_through_three_skew_lines(&p, &tol()).ok()?;
            let c = q.coefficients();
            let inc = p.iter().map(|x| monomial_residual(&c, x)).fold(0.0, f64::max);
            let asy = (0..3).map(|k| asymptotic_residual(&c, &(p[2 * k + 1] - p[2 * k]))).fold(0.0, f64::max);
            Some(inc.max(asy))
        })
        .collect();
    let failures = residuals.iter().filter(|r| r.is_none()).count();
    let max_residual = residuals.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let secs = start.elapsed().as_secs_f64();
    outcome(
        deviation <= QUADRIC_REL_DEVIATION && failures == 0 && max_residual <= QUADRIC_RESIDUAL && secs < QUADRIC_SECONDS,
        format!(
            "standard deviation {deviation:.1e} (limit {QUADRIC_REL_DEVIATION:e}), {QUADRIC_TRIALS} random sets: {failures} failures, max residual {max_residual:.1e} (limit {QUADRIC_RESIDUAL:e}), {secs:.2} s"
        ),
    )
}

fn criterion_5() -> Outcome {
    #[derive(Default)]
    struct Trial {
        degenerate: bool,
        count: usize,
        misses: usize,
        disagreement: bool,
    }
    let trials: Vec<Trial> = (0..TRANSVERSAL_TRIALS)
        .into_par_iter()
        .map(|seed| {
            let p = common::random_points::<8>(seed);
            let raw: [[Vector3<f64>; 2]; 4] = std::array::from_fn(|k| [p[2 * k], p[2 * k + 1]]);
            let segs: [Segment3<f64>; 4] = std::array::from_fn(|k| Segment3::new(raw[k][0], raw[k][1]).unwrap());
            let oracle = common::plucker_transversals(&raw);
            let set = match transversals_to_four_segments(&segs, &tol()) {
                Ok(set) => set,
                Err(e) if e.is_degeneracy() => return Trial { degenerate: true, ..Trial::default() },
                Err(e) => panic!("seed {seed}: {e}"),
            };
            let Some(oracle) = oracle else {
                return Trial { degenerate: true, ..Trial::default() };
            };
            let misses = set
                .lines
                .iter()
                .filter(|t| {
                    let l = common::PluckerLine { point: *t.line.point(), direction: *t.line.direction() };
                    !raw.iter().all(|[a, b]| common::meets_segment(&l, a, b, TRANSVERSAL_MEET_TOL))
                })
                .count();
            let expected = oracle
                .iter()
                .filter(|l| raw.iter().all(|[a, b]| common::meets_segment(l, a, b, TRANSVERSAL_MEET_TOL)))
                .count();
            Trial { degenerate: false, count: set.count(), misses, disagreement: expected != set.count() }
        })
        .collect();
    let degenerate = trials.iter().filter(|t| t.degenerate).count();
    let live: Vec<&Trial> = trials.iter().filter(|t| !t.degenerate).collect();
    let over = live.iter().filter(|t| t.count > 2).count();
    let misses: usize = live.iter().map(|t| t.misses).sum();
    let disagreements = live.iter().filter(|t| t.disagreement).count();
    let mut histogram = [0usize; 3];
    for t in &live {
        histogram[t.count.min(2)] += 1;
    }
    let fraction = degenerate as f64 / TRANSVERSAL_TRIALS as f64;
    outcome(
        over == 0 && misses == 0 && disagreements == 0 && fraction < MAX_DEGENERATE_FRACTION,
        format!(
            "{TRANSVERSAL_TRIALS} trials, histogram {histogram:?}, {over} above 2, {degenerate} degenerate, {misses} lines missing a segment, {disagreements} oracle disagreements"
        ),
    )
}

fn gaussian_basis(rng: &mut ChaCha8Rng, m: usize, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, k, |_, _| rng.sample(StandardNormal))
}

fn orthonormal(a: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * svd.singular_values.max()).count();
    u.columns(0, rank).into_owned()
}

/// Sines of the principal angles from `span(b)` to `span(a)`, both
/// orthonormal: singular values of the part of `b` outside `span(a)`.
fn sines(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    if b.ncols() == 0 {
        return Vec::new();
    }
    let outside = b - a * (a.transpose() * b);
    outside.singular_values().iter().copied().collect()
}

fn meet_dim(a: &DMatrix<f64>, b: &DMatrix<f64>) -> usize {
    sines(a, b).iter().filter(|&&s| s < BRIDGE_SINE_GAP).count()
}

fn criterion_6() -> Outcome {
    let results: Vec<(Option<String>, f64)> = (0..BRIDGE_TRIALS)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = rng.random_range(2..=8usize);
            let n1 = rng.random_range(1..m);
            let n2 = rng.random_range(1..=(m - n1));
            let r = rng.random_range(1..=n1.min(n2));
            let b1 = gaussian_basis(&mut rng, m, n1);
            let b2 = gaussian_basis(&mut rng, m, n2);
            let mix = &b1 * gaussian_basis(&mut rng, n1, r) + &b2 * gaussian_basis(&mut rng, n2, r);
            let t = tol();
            let span = |b: &DMatrix<f64>| LinSubspace::span_of_columns(b, &t).unwrap();
            let (v1, v2, vr) = (span(&b1), span(&b2), span(&mix));
            let w = match bridge_subspace(&vr, &v1, &v2, &t) {
                Ok(w) => w,
                Err(e) => return (Some(format!("seed {seed}: {e}")), 0.0),
            };
            let swapped = match bridge_subspace(&vr, &v2, &v1, &t) {
                Ok(w) => w,
                Err(e) => return (Some(format!("seed {seed} swapped: {e}")), 0.0),
            };
            let wb = orthonormal(w.basis());
            let ok = wb.ncols() == 2 * r
                && meet_dim(&wb, &orthonormal(&b1)) == r
                && meet_dim(&wb, &orthonormal(&b2)) == r
                && meet_dim(&wb, &orthonormal(&mix)) == r;
            let sb = orthonormal(swapped.basis());
            let angle = if sb.ncols() == wb.ncols() {
                sines(&wb, &sb).iter().fold(0.0f64, |a, &c| a.max(c)).min(1.0).asin()
            } else {
                f64::INFINITY
            };
            let failure = (!ok || angle > BRIDGE_ANGLE)
                .then(|| format!("seed {seed}: (m,n1,n2,r)=({m},{n1},{n2},{r}) angle {angle:e}"));
            (failure, angle)
        })
        .collect();
    let failures: Vec<&String> = results.iter().filter_map(|(f, _)| f.as_ref()).collect();
    let max_angle = results.iter().map(|(_, a)| *a).fold(0.0f64, f64::max);
    outcome(
        failures.is_empty(),
        format!(
            "{BRIDGE_TRIALS} configurations, {} failures, max swap angle {max_angle:.1e} (limit {BRIDGE_ANGLE:e}){}",
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

/// Skewness of two simplex images from the rank of their difference vectors.
fn independent_skew(spec: &PLMapSpec<f64>, a: &[u64], b: &[u64]) -> bool {
    let pts: Vec<&DVector<f64>> = a.iter().chain(b).map(|&v| spec.image(v)).collect();
    let m = pts[0].len();
    let diffs = DMatrix::from_fn(m, pts.len() - 1, |i, j| pts[j + 1][i] - pts[0][i]);
    let sv = diffs.singular_values();
    let rank = sv.iter().filter(|&&s| s > 1e-9 * sv.max()).count();
    rank == pts.len() - 1
}

struct CaseCheck {
    sound: bool,
    bound: i64,
    max_displacement: f64,
    max_sup: f64,
    max_count: Option<usize>,
    skew_ok: bool,
    vertices_kept: bool,
}

fn check_case(ex: &examples::ExampleComplex, seed: u64) -> CaseCheck {
    let t = tol();
    let (perturbed, cert) = perturb_pl_map(&ex.spec, ex.case, ex.delta, seed, &t).unwrap();
    let (fine, _) = subdivide_until(&ex.spec, ex.delta).unwrap();
    let sound = cert.is_sound() && cert.verify(&perturbed, &t).is_ok();
    let max_displacement = fine
        .vertices()
        .iter()
        .map(|&v| (fine.image(v) - perturbed.image(v)).norm())
        .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_sup = 0.0f64;
    for s in fine.simplices() {
        for _ in 0..SUP_SAMPLES {
            let weights: Vec<f64> = (0..s.len()).map(|_| rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            let at = |spec: &PLMapSpec<f64>| {
                s.iter().zip(&weights).fold(DVector::zeros(spec.ambient_dim()), |acc, (&v, w)| acc + spec.image(v) * (w / total))
            };
            max_sup = max_sup.max((at(&fine) - at(&perturbed)).norm());
        }
    }
    let skew_ok = cert.combinations.iter().all(|c| {
        let mut k = 0;
        let mut ok = true;
        for i in 0..c.simplices.len() {
            for j in (i + 1)..c.simplices.len() {
                ok &= c.pairwise_skew[k] == independent_skew(&perturbed, &c.simplices[i], &c.simplices[j]);
                ok &= c.pairwise_skew[k];
                k += 1;
            }
        }
        ok
    });
    let vertices_kept = ex.spec.vertices().iter().all(|&v| fine.image(v) == ex.spec.image(v));
    CaseCheck {
        sound,
        bound: cert.bound,
        max_displacement,
        max_sup,
        max_count: cert.transversal_counts.iter().max().copied(),
        skew_ok,
        vertices_kept,
    }
}

fn criterion_7() -> Outcome {
    let expected = |case: CaseParams| match case {
        CaseParams::A { n, m } => 3 * n as i64 + 1 - m as i64,
        CaseParams::B { n, .. } => 2 * n as i64,
        CaseParams::C { n, m, d } => n as i64 + d as i64 * (m as i64 - d as i64),
        CaseParams::D => 0,
    };
    let literal = [("a", 1i64), ("b", 4), ("c", 5), ("d", 0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, value) in literal {
        let ex = examples::by_name(name).unwrap();
        let c = check_case(&ex, 0x5EED);
        let ok = c.sound
            && c.skew_ok
            && c.vertices_kept
            && c.bound == expected(ex.case)
            && c.bound == value
            && c.max_displacement < ex.delta / 2.0
            && c.max_sup < ex.delta
            && c.max_count.is_none_or(|k| k <= 2);
        pass &= ok;
        parts.push(format!("{name}: bound {} disp {:.3} sup {:.3} {}", c.bound, c.max_displacement, c.max_sup, if ok { "ok" } else { "bad" }));
    }
    let ex = examples::case_d();
    let sweep: Vec<Result<usize, String>> = (0..CASE_D_SEEDS)
        .into_par_iter()
        .map(|seed| {
            perturb_pl_map(&ex.spec, ex.case, ex.delta, seed, &tol())
                .map_err(|e| format!("seed {seed}: {e}"))
                .and_then(|(p, cert)| {
                    if cert.is_sound() && cert.verify(&p, &tol()).is_ok() {
                        Ok(cert.transversal_counts.iter().copied().max().unwrap_or(0))
                    } else {
                        Err(format!("seed {seed}: unsound"))
                    }
                })
        })
        .collect();
    let errors: Vec<&String> = sweep.iter().filter_map(|r| r.as_ref().err()).collect();
    let worst = sweep.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
    pass &= errors.is_empty() && worst <= 2;
    parts.push(format!(
        "case d sweep {CASE_D_SEEDS} seeds: max count {worst}, {} errors{}",
        errors.len(),
        errors.first().map(|e| format!(" ({e})")).unwrap_or_default()
    ));
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let plmap = dir.path().join("d.json");
    let invocations: Vec<Vec<String>> = [
        vec!["stratum", "--m", "4", "--d", "2", "--n", "2", "--r", "1", "--verify", "--seed", "3"],
        vec!["quadric", "--random", "50", "--seed", "9"],
        vec!["transversals", "--sweep", "300", "--seed", "7"],
        vec!["perturb", "--example", "d", "--seed", "11"],
        vec!["perturb", "--example", "b", "--seed", "12", "--format", "table"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    let bin = env!("CARGO_BIN_EXE_genpos");
    let run = |args: &[String]| Command::new(bin).args(args).env_remove("GENPOS_SEED").output().unwrap();
    let mut identical = 0;
    let mut failures = Vec::new();
    for args in &invocations {
        let (a, b) = (run(args), run(args));
        if a.status.success() && a.stdout == b.stdout && a.status.code() == b.status.code() && !a.stdout.is_empty() {
            identical += 1;
        } else {
            failures.push(args.join(" "));
        }
    }
    // Round trip through a written document.
    let emit = run(&["perturb".into(), "--example".into(), "a".into(), "--emit-input".into()]);
    std::fs::write(&plmap, &emit.stdout).unwrap();
    let args: Vec<String> = ["perturb", "--input", plmap.to_str().unwrap(), "--case", "a", "--n", "1", "--delta", "2", "--seed", "5"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (a, b) = (run(&args), run(&args));
    if a.status.success() && a.stdout == b.stdout {
        identical += 1;
    } else {
        failures.push(args.join(" "));
    }
    let total = invocations.len() + 1;
    outcome(
        failures.is_empty(),
        format!("{identical}/{total} seeded invocations byte-identical{}", failures.first().map(|f| format!(", first failure `{f}`")).unwrap_or_default()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("formula equals oracle", criterion_1),
        ("stratification recursion and monotonicity", criterion_2),
        ("two-flag product formula", criterion_3),
        ("quadric recovery", criterion_4),
        ("at most two transversals", criterion_5),
        ("bridge subspace", criterion_6),
        ("perturbation certificates", criterion_7),
        ("deterministic CLI output", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} {}: {} ({}; {:.2} s)",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
