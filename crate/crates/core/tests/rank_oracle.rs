mod support;

use lieinv::cohomology::level_cohomology;
use lieinv::linalg::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::exact::{exact_rank, mul, random_complex, to_complex};

#[test]
fn oracle_ranks_known_matrices() {
    assert_eq!(exact_rank(&vec![vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(exact_rank(&vec![vec![0, 0], vec![0, 0]]), 0);
    assert_eq!(exact_rank(&vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 3);
}

#[test]
fn svd_cohomology_matches_exact_row_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = Tolerances::default();
    for _ in 0..200 {
        let cx = random_complex(&mut rng, 8);
        assert!(mul(&cx.p, &cx.q, cx.b, cx.a).iter().flatten().all(|&x| x == 0));
        let p = to_complex(&cx.p, cx.c, cx.b);
        let q = to_complex(&cx.q, cx.b, cx.a);
        let got = level_cohomology(&p, &q, &tol).unwrap();
        assert_eq!(got.h, cx.oracle_h(), "P={:?} Q={:?}", cx.p, cx.q);
    }
}
