//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#[path = "../../core/tests/support/exact.rs"]
mod exact;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use lieinv::algebra::{validate_algebra, LieAlgebraSpec};
use lieinv::cohomology::{dprime_cohomology, left_invariance_from_table, level_cohomology};
use lieinv::diagnostics::{
    aghe_fit, construct_witness, estimate_certificate, estimate_check, l2_closed_range_report,
    sigma_sequence, ClosedRangeVerdict, SigmaSequence, WitnessKind, WitnessParams,
};
use lieinv::lie::{ce_cohomology, spectral_vs_relative, ComplexLieAlgebra, GModule};
use lieinv::linalg::{RankPolicy, Tolerances, C64, ONE};
use lieinv::numbers::liouville;
use lieinv::spectral::{enumerate_levels, Backend, Rational};
use lieinv::suite::{bundled, structure, Structure};
use lieinv::symbol::{assemble_dprime, check_complex, Flavor, SymbolFamily, TruncatedSequence, WeightFunction};
use lieinv::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Group flags and preset for a bundled structure.
fn cli_args(s: &Structure) -> Vec<String> {
    let (group, preset) = s.name.split_once('-').unwrap();
    let mut args = match group {
        "su2" => vec!["--group".to_string(), "su2".to_string()],
        g => vec!["--group".into(), "torus".into(), "--dims".into(), g[1..].to_string()],
    };
    args.extend(["--structure".to_string(), preset.to_string()]);
    args
}

fn lieinv(args: &[String], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lieinv"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn slope_field(alpha: f64, cutoff: f64) -> SymbolFamily {
    let t = enumerate_levels(Backend::Torus { dims: 2 }, cutoff).unwrap();
    SymbolFamily::vector_field(t, &[ONE, C64::new(alpha, 0.0)])
}

fn complex_property() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for s in bundled() {
        let t = ok(enumerate_levels(s.backend, 30.0))?;
        let frame = ok(s.frame())?;
        for p in 0..=frame.m {
            for q in 0..frame.n {
                let inner = ok(assemble_dprime(&frame, &t, p, q))?;
                let outer = ok(assemble_dprime(&frame, &t, p, q + 1))?;
                let r = ok(check_complex(&outer, &inner))?;
                ensure(r <= 1e-10, || format!("{} ({p},{q}) residual {r:e}", s.name))?;
                worst = worst.max(r);
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("runtime {secs:.1}s > 60s"))?;
    Ok(format!("{checked} compositions, max residual {worst:.2e}, {secs:.1}s"))
}

fn betti() -> Outcome {
    let mut found = Vec::new();
    for (name, cutoff, expected) in [("t2-de-rham", 25.0, vec![1, 2, 1]), ("su2-de-rham", 12.0, vec![1, 0, 0, 1])] {
        let s = ok(structure(name))?;
        let frame = ok(s.frame())?;
        let t = ok(enumerate_levels(s.backend, cutoff))?;
        let mut totals = Vec::new();
        for q in 0..=frame.n {
            let table = ok(dprime_cohomology(&frame, &t, 0, q, &Tolerances::default()))?;
            for l in &table.levels {
                ensure(l.h == l.h_coarse && l.h == l.h_fine, || {
                    format!("{name} q={q} level {}: h {} / {} / {}", l.lambda, l.h, l.h_coarse, l.h_fine)
                })?;
            }
            let verdict = left_invariance_from_table(&table, 0, q);
            ensure(verdict.left_invariant, || format!("{name} q={q}: nonzero levels {:?}", verdict.violating_levels))?;
            ensure(table.levels.iter().all(|l| l.lambda == Rational::from_integer(0) || l.h == 0), || {
                format!("{name} q={q}: a nonzero level carries cohomology")
            })?;
            totals.push(table.total);
        }
        ensure(totals == expected, || format!("{name}: {totals:?} != {expected:?}"))?;
        found.push(format!("{name} {totals:?}"));
    }
    Ok(found.join(", "))
}

fn cross_pipeline() -> Outcome {
    let tol = Tolerances::default();
    let mut rows = 0;
    for s in bundled() {
        let cutoff = if s.backend == Backend::Su2 { 12.0 } else { 25.0 };
        let t = ok(enumerate_levels(s.backend, cutoff))?;
        let frame = ok(s.frame())?;
        for q in 0..=frame.n {
            for r in ok(spectral_vs_relative(&frame, &t, 0, q, &tol))? {
                ensure(r.agree, || {
                    format!("{} (0,{q}) λ={}: spectral {} relative {}", s.name, r.lambda, r.spectral, r.relative)
                })?;
                rows += 1;
            }
        }
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut args = vec!["lie-cohomology".to_string()];
        args.extend(cli_args(&s));
        args.extend(["--cutoff".to_string(), cutoff.to_string()]);
        let out = lieinv(&args, dir.path());
        ensure(out.status.code() == Some(0), || {
            format!("{}: CLI exit {:?}: {}", s.name, out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
    }
    Ok(format!("{rows} level rows agree, CLI exit 0 on every structure"))
}

fn ce_dimensions() -> Outcome {
    let policy = Tolerances::default().rank_policy();
    let g = ComplexLieAlgebra::complexify(&ok(validate_algebra(LieAlgebraSpec::su2()))?);
    let trivial = ok(ce_cohomology(&g, &GModule::trivial(&g, 1), policy))?;
    ensure(trivial == vec![1, 0, 0, 1], || format!("su(2) trivial: {trivial:?}"))?;
    for two_l in [1, 2] {
        let dims = ok(ce_cohomology(&g, &ok(GModule::spin(&g, two_l))?, policy))?;
        ensure(dims == vec![0; 4], || format!("su(2) spin {two_l}/2: {dims:?}"))?;
    }
    let a = ComplexLieAlgebra::abelian(2);
    let ab = ok(ce_cohomology(&a, &GModule::trivial(&a, 1), policy))?;
    ensure(ab == vec![1, 2, 1], || format!("abelian: {ab:?}"))?;
    Ok("su(2) (1,0,0,1), spin 1/2 and 1 vanish, abelian (1,2,1)".into())
}

fn circle_fits() -> Outcome {
    let t = ok(enumerate_levels(Backend::Torus { dims: 1 }, 1e4))?;
    let p = SymbolFamily::vector_field(t, &[ONE]);
    let sigma = sigma_sequence(&p, RankPolicy::default());
    let mut worst = 0.0f64;
    for e in sigma.entries.iter().filter(|e| !e.is_sentinel()) {
        let exact = e.lambda_f64.sqrt();
        worst = worst.max((e.sigma_min_perp - exact).abs() / exact);
    }
    ensure(worst <= 1e-12, || format!("σ relative error {worst:e}"))?;
    let cutoffs = [1e2, 1e3, 1e4];
    let fit = ok(aghe_fit(&sigma, &WeightFunction::smooth(), Flavor::Beurling, &cutoffs, None))?;
    ensure((fit.fitted_exponent - 0.5).abs() <= 0.01, || format!("exponent {}", fit.fitted_exponent))?;
    let report = ok(l2_closed_range_report(&sigma, &cutoffs))?;
    ensure(matches!(report.verdict, ClosedRangeVerdict::UniformBoundEvidence), || {
        format!("verdict {:?}", report.verdict)
    })?;
    ensure((report.constant - 1.0).abs() <= 1e-9, || format!("C = {}", report.constant))?;
    Ok(format!(
        "σ rel err {worst:.1e}, exponent {:.4}, C = {}",
        fit.fitted_exponent, report.constant
    ))
}

const LADDER: [f64; 3] = [1e2, 1e4, 1e6];

/// Weighted inf table at s = −0.5, where σ·(1+λ)^{1/2} is bounded below for √2.
fn inf_row(sigma: &SigmaSequence) -> Result<Vec<f64>, String> {
    let fit = ok(aghe_fit(sigma, &WeightFunction::smooth(), Flavor::Beurling, &LADDER, Some(&[-0.5, 0.0])))?;
    Ok(fit.table[0].clone())
}

fn separation(sqrt2: &SigmaSequence, liou: &SigmaSequence, secs: f64) -> Outcome {
    let a = inf_row(sqrt2)?;
    let b = inf_row(liou)?;
    let stable: Vec<f64> = a.windows(2).map(|w| (w[1] / w[0] - 1.0).abs()).collect();
    let drops: Vec<f64> = b.windows(2).map(|w| w[0] / w[1]).collect();
    let detail = format!(
        "√2 {a:.4?} (rel. change {stable:.4?}), Liouville {b:.5?} (drop per rung {drops:.2?}), {secs:.1}s"
    );
    let pass = stable.iter().all(|&c| c < 0.05) && drops.iter().all(|&d| d >= 10.0) && secs <= 120.0;
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn witness_round_trip(liou_field: &SymbolFamily, liou: &SigmaSequence) -> Outcome {
    let params = WitnessParams {
        weight: ok(WeightFunction::gevrey(1.0, Flavor::Roumieu))?,
        s: -0.05,
        rho: None,
        policy: RankPolicy::default(),
    };
    let w = ok(construct_witness(liou_field, liou, WitnessKind::TwoA, &params))?;
    let v = &w.verification;
    ensure(v.passed && v.envelope_ok && v.kernel_orthogonal, || format!("{v:?}"))?;
    let circle = SymbolFamily::vector_field(ok(enumerate_levels(Backend::Torus { dims: 1 }, 1e4))?, &[ONE]);
    let sigma = sigma_sequence(&circle, RankPolicy::default());
    match construct_witness(&circle, &sigma, WitnessKind::TwoA, &params) {
        Err(Error::NoFailureCertificate) => {}
        other => return Err(format!("T¹: expected NoFailureCertificate, got {:?}", other.map(|w| w.levels))),
    }
    Ok(format!(
        "Liouville witness on {} levels, image slope {:.3}, witness slope {:.3}; T¹ has no certificate",
        w.levels.len(),
        v.image_slope,
        v.witness_slope
    ))
}

fn estimate_arithmetic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let policy = Tolerances::default().rank_policy();
    let weight = WeightFunction::smooth();
    let mut summary = Vec::new();
    for s in bundled() {
        let cutoffs = if s.backend == Backend::Su2 { [12.0, 30.0] } else { [100.0, 400.0] };
        let t = ok(enumerate_levels(s.backend, cutoffs[1]))?;
        let p = ok(assemble_dprime(&ok(s.frame())?, &t, 0, 0))?;
        let sigma = sigma_sequence(&p, policy);
        let fit = ok(aghe_fit(&sigma, &weight, Flavor::Beurling, &cutoffs, None))?;
        let Some(cert) = estimate_certificate(&sigma, &weight, fit.certificate_exponent) else {
            summary.push(format!("{}: no certificate", s.name));
            continue;
        };
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let a = TruncatedSequence::random(t.clone(), p.source_arity, &mut rng);
            let check = ok(estimate_check(&p, &a, &weight, cert, 1.0, policy))?;
            ensure(check.holds, || format!("{}: {check:?}", s.name))?;
            worst = worst.max(check.measured / check.bound);
        }
        summary.push(format!("{} s={:.3} max ratio {worst:.3}", s.name, cert.s));
    }
    Ok(summary.join("; "))
}

fn rank_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = Tolerances::default();
    for i in 0..200 {
        let cx = exact::random_complex(&mut rng, 8);
        let p = exact::to_complex(&cx.p, cx.c, cx.b);
        let q = exact::to_complex(&cx.q, cx.b, cx.a);
        let got = ok(level_cohomology(&p, &q, &tol))?.h;
        ensure(got == cx.oracle_h(), || format!("instance {i}: svd {got} oracle {}", cx.oracle_h()))?;
    }
    Ok("200/200 instances agree".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[group]\nkind = \"torus\"\ndims = 2\n\n[structure]\npreset = \"d1+sqrt2*d2\"\n\n[run]\ncutoffs = [100.0, 1000.0]\nseed = 5\n",
    )
    .map_err(|e| e.to_string())?;
    let cfg = cfg.to_string_lossy().to_string();
    let mut compared = 0;
    for cmd in ["describe", "spectrum", "cohomology", "diagnose", "lie-cohomology"] {
        let args = vec![cmd.to_string(), "--config".to_string(), cfg.clone()];
        let a = dir.path().join(format!("{cmd}-a"));
        let b = dir.path().join(format!("{cmd}-b"));
        for out in [&a, &b] {
            let o = lieinv(&args, out);
            ensure(o.status.success(), || format!("{cmd}: {}", String::from_utf8_lossy(&o.stderr)))?;
        }
        let mut names: Vec<_> = std::fs::read_dir(&a)
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let x = std::fs::read(a.join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.join(&name)).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("{cmd}: {} differs", name.to_string_lossy()))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} report files byte-identical across two runs"))
}

fn report(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS {n:>2} {title}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL {n:>2} {title}: {detail}");
            false
        }
    }
}

fn main() {
    let mut passed = vec![
        report(1, "complex property", complex_property),
        report(2, "Betti reproduction", betti),
        report(3, "cross-pipeline", cross_pipeline),
        report(4, "CE dimensions", ce_dimensions),
        report(5, "σ and fits on T¹", circle_fits),
    ];

    let start = Instant::now();
    let sqrt2_field = slope_field(std::f64::consts::SQRT_2, 1e6);
    let sqrt2 = sigma_sequence(&sqrt2_field, RankPolicy::default());
    drop(sqrt2_field);
    let liou_field = slope_field(liouville(), 1e6);
    let liou = sigma_sequence(&liou_field, RankPolicy::default());
    let secs = start.elapsed().as_secs_f64();
    passed.push(report(6, "Diophantine/Liouville separation", || separation(&sqrt2, &liou, secs)));
    passed.push(report(7, "witness round-trip", || witness_round_trip(&liou_field, &liou)));
    drop(liou_field);

    passed.push(report(8, "estimate arithmetic", estimate_arithmetic));
    passed.push(report(9, "rank oracle", rank_oracle));
    passed.push(report(10, "determinism", determinism));

    let failed = passed.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", passed.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
