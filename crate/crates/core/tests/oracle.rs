use germkit::germ::{forward_multiplicities, solve_from_multiplicities, CoefficientMap};
use germkit::oracle::{
    build_a_lambda, complete_flags, count_parabolic_cosets, multiplicity_matrix, nilpotent_partition,
    xi_multiplicity, FqMatrix,
};
use germkit::partition::{dominance_leq, enumerate_partitions, Partition};
use germkit::qpoly::q_multinomial;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_matrix(rng: &mut StdRng, n: usize, q: u64) -> FqMatrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q as i64)).collect()).collect();
    FqMatrix::from_rows(q, &rows).unwrap()
}

fn random_invertible(rng: &mut StdRng, n: usize, q: u64) -> FqMatrix {
    loop {
        let g = random_matrix(rng, n, q);
        if g.is_invertible() {
            return g;
        }
    }
}

/// A strictly upper triangular matrix conjugated by a random element of
/// `GL_n`; every nilpotent orbit is reachable this way.
fn random_nilpotent(rng: &mut StdRng, n: usize, q: u64) -> FqMatrix {
    let mut u = FqMatrix::zero(q, n, n).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, rng.gen_range(0..q));
        }
    }
    let g = random_invertible(rng, n, q);
    g.mul(&u).unwrap().mul(&g.inverse().unwrap()).unwrap()
}

#[test]
fn random_nilpotents_have_partition_types() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 1..=4 {
        for q in [2, 3, 5] {
            for _ in 0..1000 {
                let x = random_nilpotent(&mut rng, n, q);
                let lambda = nilpotent_partition(&x).unwrap();
                assert_eq!(lambda.n(), n);
                assert!(lambda.parts().windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }
}

#[test]
fn jordan_type_is_conjugation_invariant() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 1..=4 {
        for q in [2, 3, 5] {
            for _ in 0..200 {
                let x = random_nilpotent(&mut rng, n, q);
                let g = random_invertible(&mut rng, n, q);
                let y = g.mul(&x).unwrap().mul(&g.inverse().unwrap()).unwrap();
                assert_eq!(nilpotent_partition(&x).unwrap(), nilpotent_partition(&y).unwrap());
            }
        }
    }
}

#[test]
fn non_nilpotent_inputs_are_rejected() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let x = random_matrix(&mut rng, 3, 3);
        assert_eq!(nilpotent_partition(&x).is_ok(), x.is_nilpotent());
    }
}

#[test]
fn a_lambda_round_trips_in_every_field() {
    for q in [2, 3, 5, 7] {
        for n in 1..=5 {
            for lambda in enumerate_partitions(n).unwrap() {
                assert_eq!(nilpotent_partition(&build_a_lambda(&lambda, q).unwrap()).unwrap(), lambda);
            }
        }
    }
}

#[test]
fn coset_counts_match_q_multinomials() {
    for n in 2..=4 {
        for q in [2, 3] {
            for lambda in enumerate_partitions(n).unwrap() {
                let c = count_parabolic_cosets(&lambda, q).unwrap();
                assert_eq!(c.orbit_count, q_multinomial(&lambda).unwrap().eval_u64(q), "{lambda} q={q}");
            }
        }
    }
}

#[test]
fn multiplicity_matrices_are_unitriangular() {
    for n in 1..=3 {
        for q in [2, 3] {
            let m = multiplicity_matrix(n, q).unwrap();
            m.check_unitriangular().unwrap();
            for lambda in m.partitions() {
                for mu in m.partitions() {
                    let v = m.get(lambda, mu).unwrap();
                    if !dominance_leq(mu, lambda).unwrap() {
                        assert_eq!(v, 0);
                    }
                }
            }
        }
    }
}

#[test]
fn top_row_counts_flags() {
    // A_{(n)} = 0, so every k qualifies and the row is |P_μ \ GL_n|.
    for q in [2, 3] {
        let m = multiplicity_matrix(3, q).unwrap();
        let top = Partition::row(3).unwrap();
        for mu in m.partitions() {
            let expected = q_multinomial(mu).unwrap().eval_u64(q);
            assert_eq!(BigInt::from(m.get(&top, mu).unwrap()), expected);
        }
        assert_eq!(BigInt::from(m.get(&top, &Partition::column(3).unwrap()).unwrap()), complete_flags(3, q));
    }
}

#[test]
fn off_diagonal_gl3_values() {
    let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
    // Complete flags stable under a rank-one square-zero map: two projective
    // lines meeting in a point, so 2q + 1 of them.
    for q in [2, 3, 5] {
        assert_eq!(xi_multiplicity(&p(&[2, 1]), &p(&[1, 1, 1]), q).unwrap(), 2 * q + 1);
    }
    assert_eq!(xi_multiplicity(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 3).unwrap(), 1);
}

#[test]
fn round_trip_through_oracle_matrix() {
    let mut rng = StdRng::seed_from_u64(5);
    let matrices: Vec<_> = (1..=3).map(|n| multiplicity_matrix(n, 2).unwrap()).collect();
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let pairs: Vec<(Partition, i64)> =
            enumerate_partitions(n).unwrap().into_iter().map(|l| (l, rng.gen_range(-5..=5))).collect();
        let c = CoefficientMap::from_pairs(n, pairs).unwrap();
        let m = &matrices[n - 1];
        assert_eq!(solve_from_multiplicities(&forward_multiplicities(&c, m).unwrap(), m).unwrap(), c);
    }
}
