use lieinv::lie::spectral_vs_relative;
use lieinv::linalg::Tolerances;
use lieinv::spectral::{enumerate_levels, Backend};
use lieinv::suite::bundled;

#[test]
fn spectral_dims_match_relative_ce_dims() {
    let tol = Tolerances::default();
    for s in bundled() {
        let cutoff = match s.backend {
            Backend::Su2 => 12.0,
            Backend::Torus { .. } => 25.0,
        };
        let trunc = enumerate_levels(s.backend, cutoff).unwrap();
        let frame = s.frame().unwrap();
        for p in 0..=frame.m {
            for q in 0..=frame.n {
                let rows = spectral_vs_relative(&frame, &trunc, p, q, &tol).unwrap();
                assert_eq!(rows.len(), trunc.len());
                for r in rows {
                    assert!(r.agree, "{} ({p},{q}) at {}: {:?}", s.name, r.lambda, r);
                }
            }
        }
    }
}
