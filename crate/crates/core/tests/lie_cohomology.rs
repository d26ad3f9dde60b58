use lieinv::algebra::{validate_algebra, LieAlgebraSpec};
use lieinv::lie::{
    ce_cohomology, ce_differential, invariants_subspace, phi_dimension_check, relative_cohomology,
    whitehead_report, ComplexLieAlgebra, GModule,
};
use lieinv::linalg::{frobenius, Tolerances, C64};
use lieinv::spectral::{enumerate_levels, Backend};
use lieinv::suite::bundled;

fn su2() -> ComplexLieAlgebra {
    ComplexLieAlgebra::complexify(&validate_algebra(LieAlgebraSpec::su2()).unwrap())
}

fn policy() -> lieinv::linalg::RankPolicy {
    Tolerances::default().rank_policy()
}

#[test]
fn chevalley_eilenberg_dimensions() {
    let g = su2();
    assert_eq!(ce_cohomology(&g, &GModule::trivial(&g, 1), policy()).unwrap(), vec![1, 0, 0, 1]);
    for two_l in [1, 2] {
        let v = GModule::spin(&g, two_l).unwrap();
        assert_eq!(ce_cohomology(&g, &v, policy()).unwrap(), vec![0; 4]);
    }
    let a = ComplexLieAlgebra::abelian(2);
    assert_eq!(ce_cohomology(&a, &GModule::trivial(&a, 1), policy()).unwrap(), vec![1, 2, 1]);
}

#[test]
fn ce_differential_squares_to_zero_on_spin_modules() {
    let g = su2();
    for two_l in 0..=4 {
        let v = GModule::spin(&g, two_l).unwrap();
        for r in 0..2 {
            let d0 = ce_differential(&g, &v, r).unwrap();
            let d1 = ce_differential(&g, &v, r + 1).unwrap();
            assert!(frobenius(&(&d1 * &d0)) < 1e-12);
        }
    }
}

#[test]
fn whitehead_on_spin_one() {
    let g = su2();
    let r = whitehead_report(&g, &GModule::spin(&g, 2).unwrap(), policy()).unwrap();
    assert!(r.semisimple && r.invariants_dim == 0 && r.consistent);
    let r = whitehead_report(&g, &GModule::trivial(&g, 1), policy()).unwrap();
    assert_eq!(r.dims, vec![1, 0, 0, 1]);
}

#[test]
fn cr_invariants_are_highest_weight_vectors() {
    let g = su2();
    let cr = vec![vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0)]];
    let trunc = enumerate_levels(Backend::Su2, 6.0).unwrap();
    for level in trunc.levels.iter().skip(1) {
        let v = GModule::from_level(&g, level).unwrap();
        let inv = invariants_subspace(&v, &cr, policy());
        let two_l_plus_one = (level.dim as f64).sqrt().round() as usize;
        assert_eq!(inv.ncols(), two_l_plus_one, "level {}", level.lambda);
    }
    let trivial = GModule::trivial(&g, 2);
    assert_eq!(invariants_subspace(&trivial, &cr, policy()).ncols(), 2);
}

#[test]
fn relative_complexes_on_the_suite() {
    let tol = Tolerances::default();
    for s in bundled() {
        let frame = s.frame().unwrap();
        let g = ComplexLieAlgebra::complexify(frame.algebra());
        let h: Vec<_> = (0..frame.n).map(|j| frame.l_vector(j)).collect();
        let trunc = enumerate_levels(s.backend, 6.0).unwrap();
        for level in &trunc.levels {
            let v = GModule::from_level(&g, level).unwrap();
            for p in 0..=frame.m {
                let rel = relative_cohomology(&g, &h, &v, p, &tol).unwrap();
                assert!(rel.d_squared_residual <= 1e-9, "{} p={p}", s.name);
                assert_eq!(rel.euler_cochains, rel.euler_cohomology, "{} p={p}", s.name);
                for q in 0..=frame.n {
                    let check = phi_dimension_check(&g, &h, &v, p, q, &tol).unwrap();
                    assert!(check.equal, "{} {check:?}", s.name);
                }
            }
        }
    }
}
