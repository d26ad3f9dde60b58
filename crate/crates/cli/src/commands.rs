use std::sync::Arc;

use lieinv::algebra::{
    build_frame_with, check_ad_invariance, check_ellipticity, killing_form, InvolutiveFrame,
};
use lieinv::cohomology::{dprime_cohomology, left_invariance_from_table, CohomologyTable};
use lieinv::diagnostics::{
    aghe_fit, construct_witness, estimate_certificate, estimate_check, l2_closed_range_report,
    sigma_sequence, WitnessKind, WitnessParams,
};
use lieinv::lie::{
    ce_cohomology, complex_killing, invariants_subspace, phi_dimension_check, relative_cohomology,
    spectral_vs_relative, whitehead_report, AdaptedBasis, ComplexLieAlgebra, GModule,
};
use lieinv::linalg::{rank, CMatrix};
use lieinv::spectral::{enumerate_levels, Backend, SpectrumTruncation};
use lieinv::symbol::{assemble_dprime, SymbolFamily, TruncatedSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_value::Value;

use crate::args::Command;
use crate::canon::format_float;
use crate::config::RunConfig;
use crate::error::{CliError, EXIT_MISMATCH, EXIT_OK, EXIT_SENSITIVE};

/// A CSV projection of a report.
pub struct CsvTable {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub result: Value,
    pub tables: Vec<CsvTable>,
    pub exit: i32,
}

fn value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_value::to_value(x).map_err(|e| CliError::Report(e.to_string()))
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Describe => describe(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Cohomology => cohomology(cfg),
        Command::Diagnose => diagnose(cfg),
        Command::LieCohomology => lie_cohomology(cfg),
    }
}

fn frame(cfg: &RunConfig) -> Result<InvolutiveFrame, CliError> {
    Ok(build_frame_with(&cfg.algebra()?, &cfg.generators(), &cfg.tolerances)?)
}

fn truncation(cfg: &RunConfig) -> Result<Arc<SpectrumTruncation>, CliError> {
    cfg.require_backend()?;
    Ok(enumerate_levels(cfg.backend(), cfg.max_cutoff())?)
}

fn bidegrees(cfg: &RunConfig, frame: &InvolutiveFrame) -> Vec<(usize, usize)> {
    cfg.bidegrees.clone().unwrap_or_else(|| {
        (0..=frame.m)
            .flat_map(|p| (0..=frame.n).map(move |q| (p, q)))
            .collect()
    })
}

fn generators_of(frame: &InvolutiveFrame) -> Vec<Vec<lieinv::linalg::C64>> {
    (0..frame.n).map(|j| frame.l_vector(j)).collect()
}

#[derive(Serialize)]
struct SubalgebraSummary {
    n: usize,
    m: usize,
    complement_indices: Vec<usize>,
    elliptic: bool,
    killing_rank: usize,
    semisimple: bool,
}

fn describe(cfg: &RunConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Describe {
        algebra: String,
        dim: usize,
        labels: Vec<String>,
        abelian: bool,
        killing: lieinv::algebra::KillingForm,
        metric_ad_invariance: lieinv::algebra::AdInvariance,
        structure: SubalgebraSummary,
        backend: Option<Backend>,
    }
    let algebra = cfg.algebra()?;
    let frame = build_frame_with(&algebra, &cfg.generators(), &cfg.tolerances)?;
    let g = ComplexLieAlgebra::complexify(&algebra);
    let adapted = AdaptedBasis::new(&g, &generators_of(&frame), &cfg.tolerances)?;
    let h = adapted.subalgebra();
    let killing_rank = rank(&complex_killing(&h), cfg.tolerances.rank_policy());
    let report = Describe {
        algebra: algebra.name().to_string(),
        dim: algebra.dim(),
        labels: algebra.labels().to_vec(),
        abelian: algebra.is_abelian(),
        killing: killing_form(&algebra),
        metric_ad_invariance: check_ad_invariance(&algebra),
        structure: SubalgebraSummary {
            n: frame.n,
            m: frame.m,
            complement_indices: frame.complement_indices.clone(),
            elliptic: check_ellipticity(&frame),
            killing_rank,
            semisimple: h.dim > 0 && killing_rank == h.dim,
        },
        backend: cfg.algebra.is_none().then(|| cfg.backend()),
    };
    Ok(Outcome {
        result: value(&report)?,
        tables: Vec::new(),
        exit: EXIT_OK,
    })
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Level {
        #[serde(with = "lieinv::spectral::rational_serde")]
        lambda: lieinv::spectral::Rational,
        lambda_f64: f64,
        dim: usize,
    }
    #[derive(Serialize)]
    struct Partial {
        cutoff: f64,
        levels: usize,
        total_dim: usize,
        weyl_partial_sum: f64,
    }
    #[derive(Serialize)]
    struct Spectrum {
        backend: Backend,
        levels: Vec<Level>,
        partial_sums: Vec<Partial>,
    }
    let t = truncation(cfg)?;
    let levels: Vec<Level> = t
        .levels
        .iter()
        .map(|l| Level {
            lambda: l.lambda,
            lambda_f64: l.lambda_f64,
            dim: l.dim,
        })
        .collect();
    let mut partial_sums = Vec::new();
    for &cut in &cfg.cutoffs {
        let sub = enumerate_levels(cfg.backend(), cut)?;
        partial_sums.push(Partial {
            cutoff: cut,
            levels: sub.len(),
            total_dim: sub.total_dim(),
            weyl_partial_sum: sub.weyl_partial_sum,
        });
    }
    let rows = levels
        .iter()
        .map(|l| vec![l.lambda.to_string(), format_float(l.lambda_f64), l.dim.to_string()])
        .collect();
    let report = Spectrum {
        backend: t.backend,
        levels,
        partial_sums,
    };
    Ok(Outcome {
        result: value(&report)?,
        tables: vec![CsvTable {
            name: "levels".into(),
            header: vec!["lambda", "lambda_f64", "dim"],
            rows,
        }],
        exit: EXIT_OK,
    })
}

type Vectors = Vec<Vec<[f64; 2]>>;

fn columns(m: &CMatrix) -> Vectors {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn cohomology(cfg: &RunConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Representatives {
        p: usize,
        q: usize,
        #[serde(with = "lieinv::spectral::rational_serde")]
        lambda: lieinv::spectral::Rational,
        vectors: Vectors,
    }
    #[derive(Serialize)]
    struct Cohomology {
        tables: Vec<CohomologyTable>,
        left_invariance: Vec<lieinv::cohomology::LeftInvarianceVerdict>,
        tolerance_sensitive: bool,
        representatives: Option<Vec<Representatives>>,
    }
    let t = truncation(cfg)?;
    let frame = frame(cfg)?;
    let mut tables = Vec::new();
    let mut verdicts = Vec::new();
    let mut reps = Vec::new();
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for (p, q) in bidegrees(cfg, &frame) {
        let table = dprime_cohomology(&frame, &t, p, q, &cfg.tolerances)?;
        verdicts.push(left_invariance_from_table(&table, p, q));
        for l in &table.levels {
            rows.push(vec![
                p.to_string(),
                q.to_string(),
                l.lambda.to_string(),
                l.eigenspace_dim.to_string(),
                l.kernel_dim.to_string(),
                l.rank_q.to_string(),
                l.h.to_string(),
                l.h_coarse.to_string(),
                l.h_fine.to_string(),
            ]);
            if cfg.emit_representatives && l.h > 0 {
                reps.push(Representatives {
                    p,
                    q,
                    lambda: l.lambda,
                    vectors: columns(&l.representatives),
                });
            }
        }
        totals.push(vec![p.to_string(), q.to_string(), table.total.to_string()]);
        tables.push(table);
    }
    let sensitive = tables.iter().any(CohomologyTable::is_tolerance_sensitive);
    let report = Cohomology {
        tables,
        left_invariance: verdicts,
        tolerance_sensitive: sensitive,
        representatives: cfg.emit_representatives.then_some(reps),
    };
    Ok(Outcome {
        result: value(&report)?,
        tables: vec![
            CsvTable {
                name: "cohomology".into(),
                header: vec!["p", "q", "lambda", "eigenspace_dim", "kernel_dim", "rank_q", "h", "h_coarse", "h_fine"],
                rows,
            },
            CsvTable {
                name: "totals".into(),
                header: vec!["p", "q", "total"],
                rows: totals,
            },
        ],
        exit: if sensitive { EXIT_SENSITIVE } else { EXIT_OK },
    })
}

fn diagnose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct WitnessSummary {
        kind: WitnessKind,
        exponent: f64,
        status: String,
        #[serde(serialize_with = "lieinv::spectral::rational_serde::vec")]
        support: Vec<lieinv::spectral::Rational>,
        verification: Option<lieinv::diagnostics::WitnessVerification>,
    }
    #[derive(Serialize)]
    struct EstimateSummary {
        certificate: Option<lieinv::diagnostics::EstimateCertificate>,
        samples: usize,
        worst_measured: f64,
        bound: f64,
        all_hold: bool,
    }
    #[derive(Serialize)]
    struct Diagnose {
        p: usize,
        q: usize,
        sigma: lieinv::diagnostics::SigmaSequence,
        closed_range: lieinv::diagnostics::ClosedRangeReport,
        fit: Option<lieinv::diagnostics::EstimateFit>,
        fit_error: Option<String>,
        witnesses: Vec<WitnessSummary>,
        estimate: Option<EstimateSummary>,
    }
    let t = truncation(cfg)?;
    let frame = frame(cfg)?;
    let (p, q) = cfg.bidegrees.as_ref().and_then(|b| b.first().copied()).unwrap_or((0, 0));
    let op: SymbolFamily = assemble_dprime(&frame, &t, p, q)?;
    let policy = cfg.tolerances.rank_policy();
    let sigma = sigma_sequence(&op, policy);
    let ladder = if cfg.cutoffs.len() >= 2 {
        cfg.cutoffs.clone()
    } else {
        let top = cfg.max_cutoff();
        vec![top / 100.0, top / 10.0, top]
    };
    let closed_range = l2_closed_range_report(&sigma, &ladder)?;
    let weight = cfg.weight_function()?;
    let flavor = cfg.flavor_value()?;
    let (fit, fit_error) =
        match aghe_fit(&sigma, &weight, flavor, &ladder, cfg.exponents.as_deref()) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let exponent = cfg
        .witness_exponent
        .or_else(|| fit.as_ref().map(|f| f.certificate_exponent))
        .unwrap_or(-0.05);

    let mut witnesses = Vec::new();
    for name in &cfg.witness_kinds {
        let kind: WitnessKind = name.parse()?;
        let params = WitnessParams {
            weight,
            s: exponent,
            rho: None,
            policy,
        };
        let summary = match construct_witness(&op, &sigma, kind, &params) {
            Ok(w) => WitnessSummary {
                kind,
                exponent,
                status: if w.verification.passed { "verified" } else { "unverified" }.into(),
                support: w.levels.iter().map(|&i| t.levels[i].lambda).collect(),
                verification: Some(w.verification),
            },
            Err(e) => WitnessSummary {
                kind,
                exponent,
                status: CliError::from(e).kind().into(),
                support: Vec::new(),
                verification: None,
            },
        };
        witnesses.push(summary);
    }

    let estimate = match &fit {
        Some(f) if cfg.samples > 0 => {
            let cert = estimate_certificate(&sigma, &weight, f.certificate_exponent);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst: f64 = 0.0;
            let mut all_hold = true;
            let mut bound = f64::INFINITY;
            if let Some(cert) = cert {
                for _ in 0..cfg.samples {
                    let a = TruncatedSequence::random(t.clone(), op.source_arity, &mut rng);
                    let check = estimate_check(&op, &a, &weight, cert, 0.0, policy)?;
                    worst = worst.max(check.measured);
                    bound = check.bound;
                    all_hold &= check.holds;
                }
            }
            Some(EstimateSummary {
                certificate: cert,
                samples: if cert.is_some() { cfg.samples } else { 0 },
                worst_measured: worst,
                bound,
                all_hold: cert.is_some() && all_hold,
            })
        }
        _ => None,
    };

    let sigma_rows = sigma
        .entries
        .iter()
        .map(|e| {
            vec![
                e.lambda.to_string(),
                format_float(e.lambda_f64),
                format_float(e.sigma_min_perp),
                format_float(e.sigma_max),
            ]
        })
        .collect();
    let mut tables = vec![CsvTable {
        name: "sigma".into(),
        header: vec!["lambda", "lambda_f64", "sigma_min_perp", "sigma_max"],
        rows: sigma_rows,
    }];
    if let Some(f) = &fit {
        let mut rows = Vec::new();
        for (s, row) in f.s_ladder.iter().zip(&f.table) {
            for (cut, inf) in f.cutoffs.iter().zip(row) {
                rows.push(vec![format_float(*s), format_float(*cut), format_float(*inf)]);
            }
        }
        tables.push(CsvTable {
            name: "fit".into(),
            header: vec!["s", "cutoff", "weighted_inf"],
            rows,
        });
    }
    let report = Diagnose {
        p,
        q,
        sigma,
        closed_range,
        fit,
        fit_error,
        witnesses,
        estimate,
    };
    Ok(Outcome {
        result: value(&report)?,
        tables,
        exit: EXIT_OK,
    })
}

fn lie_cohomology(cfg: &RunConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Absolute {
        module: String,
        dims: Vec<usize>,
        whitehead: lieinv::lie::WhiteheadReport,
    }
    #[derive(Serialize)]
    struct Relative {
        module: String,
        p: usize,
        u_dims: Vec<usize>,
        dims: Vec<usize>,
        d_squared_residual: f64,
        euler_ok: bool,
        phi: Vec<lieinv::lie::PhiCheck>,
        invariants_dim: usize,
        subalgebra_whitehead: lieinv::lie::WhiteheadReport,
    }
    #[derive(Serialize)]
    struct LieReport {
        algebra: String,
        subalgebra_dim: usize,
        absolute: Vec<Absolute>,
        relative: Vec<Relative>,
        cross_pipeline: Vec<(usize, lieinv::lie::CrossRow)>,
        mismatches: usize,
    }
    let algebra = cfg.algebra()?;
    let g = ComplexLieAlgebra::complexify(&algebra);
    let frame = build_frame_with(&algebra, &cfg.generators(), &cfg.tolerances)?;
    let h_vectors = generators_of(&frame);
    let adapted = AdaptedBasis::new(&g, &h_vectors, &cfg.tolerances)?;
    let h = adapted.subalgebra();
    let policy = cfg.tolerances.rank_policy();

    let mut modules = vec![GModule::trivial(&g, 1)];
    if cfg.algebra.is_none() && cfg.backend() == Backend::Su2 {
        modules.push(GModule::spin(&g, 1)?);
        modules.push(GModule::spin(&g, 2)?);
    }
    let mut absolute = Vec::new();
    for m in &modules {
        absolute.push(Absolute {
            module: m.label.clone(),
            dims: ce_cohomology(&g, m, policy)?,
            whitehead: whitehead_report(&g, m, policy)?,
        });
    }

    let coefficient_modules: Vec<GModule> = if cfg.algebra.is_some() {
        vec![GModule::trivial(&g, 1)]
    } else {
        let t = enumerate_levels(cfg.backend(), cfg.max_cutoff())?;
        t.levels
            .iter()
            .map(|l| GModule::from_level(&g, l))
            .collect::<lieinv::Result<_>>()?
    };
    let bideg = bidegrees(cfg, &frame);
    let mut ps: Vec<usize> = bideg.iter().map(|b| b.0).collect();
    ps.dedup();
    let mut relative = Vec::new();
    let mut mismatches = 0;
    for module in &coefficient_modules {
        let restricted: Vec<CMatrix> = h_vectors.iter().map(|v| module.act(v)).collect();
        let on_h = GModule::new(&h, module.label.clone(), restricted)?;
        let sub_white = whitehead_report(&h, &on_h, policy)?;
        let invariants_dim = invariants_subspace(module, &h_vectors, policy).ncols();
        for &p in &ps {
            let rel = relative_cohomology(&g, &h_vectors, module, p, &cfg.tolerances)?;
            let mut phi = Vec::new();
            for &(bp, q) in &bideg {
                if bp == p {
                    let check = phi_dimension_check(&g, &h_vectors, module, p, q, &cfg.tolerances)?;
                    mismatches += usize::from(!check.equal);
                    phi.push(check);
                }
            }
            let euler_ok = rel.euler_cochains == rel.euler_cohomology;
            mismatches += usize::from(!euler_ok);
            relative.push(Relative {
                module: module.label.clone(),
                p,
                u_dims: rel.u_dims,
                dims: rel.dims,
                d_squared_residual: rel.d_squared_residual,
                euler_ok,
                phi,
                invariants_dim,
                subalgebra_whitehead: sub_white.clone(),
            });
        }
    }

    let mut cross = Vec::new();
    let mut rows = Vec::new();
    if cfg.algebra.is_none() {
        let t = enumerate_levels(cfg.backend(), cfg.max_cutoff())?;
        for &(p, q) in &bideg {
            for row in spectral_vs_relative(&frame, &t, p, q, &cfg.tolerances)? {
                mismatches += usize::from(!row.agree);
                rows.push(vec![
                    p.to_string(),
                    q.to_string(),
                    row.lambda.to_string(),
                    row.spectral.to_string(),
                    row.relative.to_string(),
                    row.agree.to_string(),
                ]);
                cross.push((p, row));
            }
        }
    }
    let report = LieReport {
        algebra: algebra.name().to_string(),
        subalgebra_dim: h.dim,
        absolute,
        relative,
        cross_pipeline: cross,
        mismatches,
    };
    Ok(Outcome {
        result: value(&report)?,
        tables: vec![CsvTable {
            name: "cross".into(),
            header: vec!["p", "q", "lambda", "spectral", "relative", "agree"],
            rows,
        }],
        exit: if mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK },
    })
}
