//! Identities of the residue engine checked against independent computations.

mod common;

use common::sv::{expanded, os_sublist_holds, regular_point, szenes_vergne};
use kronecker::exact::{CycloRat, Rat};
use kronecker::linalg::{dot, rank_int, IVec};
use kronecker::oracle::partition_count;
use kronecker::osbases::os_bases_adapted;
use kronecker::residue::{iterated_residue, iterated_residue_direct, FactoredFunction};
use kronecker::rootdata::{index_and_gammas, Matroid};
use proptest::prelude::*;

#[test]
fn plane_example() {
    let psi = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
    for mu in [[1i64, 3], [0, 4], [2, 5], [3, 1], [4, 0]] {
        let want = partition_count(&psi, &mu).unwrap();
        assert_eq!(szenes_vergne(&psi, &[1, 1, 1], &mu, false), Rat::from_int(want as i64));
    }
}

#[test]
fn nonunimodular_examples() {
    // q = 2
    let psi = vec![vec![1, 1], vec![1, -1], vec![1, 0]];
    for mu in [[3i64, 1], [4, 0], [2, 1], [5, -2], [6, 3]] {
        let want = partition_count(&psi, &mu).unwrap();
        assert_eq!(szenes_vergne(&psi, &[1, 1, 1], &mu, false), Rat::from_int(want as i64), "mu={mu:?}");
        assert_eq!(szenes_vergne(&psi, &[1, 1, 1], &mu, true), Rat::from_int(want as i64), "direct mu={mu:?}");
    }
    // one dimensional with multiplicities
    let psi = vec![vec![2], vec![3]];
    for mu in 0..12i64 {
        let want = partition_count(&expanded(&psi, &[2, 1]), &[mu]).unwrap();
        assert_eq!(szenes_vergne(&psi, &[2, 1], &[mu], false), Rat::from_int(want as i64), "mu={mu}");
    }
}

fn arrangement(r: usize) -> impl Strategy<Value = (Vec<IVec>, Vec<i32>, IVec, Vec<IVec>)> {
    let vecs = prop::collection::vec(prop::collection::vec(-1i64..=2, r), r..=r + 2);
    let mults = prop::collection::vec(1i32..=2, r + 2);
    let y = prop::collection::vec(1i64..=5, r);
    let mus = prop::collection::vec(prop::collection::vec(0i64..=6, r), 3);
    (vecs, mults, y, mus).prop_filter_map("spanning pointed list", move |(vs, ms, y, mus)| {
        let mut psi: Vec<IVec> = Vec::new();
        for v in vs {
            let s = dot(&v, &y);
            if s == 0 {
                return None;
            }
            let v: IVec = if s < 0 { v.iter().map(|x| -x).collect() } else { v };
            if !psi.contains(&v) {
                psi.push(v);
            }
        }
        if rank_int(&psi) < r {
            return None;
        }
        // keep the cyclotomic fields small
        if index_and_gammas(&psi, r).0 > 12 {
            return None;
        }
        let mult = ms[..psi.len()].to_vec();
        // targets: random nonnegative combinations of psi, so they lie in the cone
        let targets = mus
            .iter()
            .map(|c| {
                let mut t = vec![0; r];
                for (p, &k) in psi.iter().zip(c.iter().chain(std::iter::repeat(&1))) {
                    for (a, b) in t.iter_mut().zip(p) {
                        *a += k * b;
                    }
                }
                t
            })
            .collect();
        Some((psi, mult, y, targets))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, .. ProptestConfig::default() })]

    #[test]
    fn partition_function_in_dimension_two((psi, mult, _y, targets) in arrangement(2)) {
        let all = expanded(&psi, &mult);
        for mu in &targets {
            let want = partition_count(&all, mu).unwrap();
            prop_assert_eq!(szenes_vergne(&psi, &mult, mu, false), Rat::from_int(want as i64));
        }
    }

    #[test]
    fn partition_function_in_dimension_three((psi, mult, _y, targets) in arrangement(3)) {
        let all = expanded(&psi, &mult);
        for mu in &targets {
            let want = partition_count(&all, mu).unwrap();
            prop_assert_eq!(szenes_vergne(&psi, &mult, mu, false), Rat::from_int(want as i64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, .. ProptestConfig::default() })]

    /// The literal nested-Laurent computation agrees with the fast engine basis by basis.
    #[test]
    fn fast_engine_matches_literal_expansion((psi, mult, _y, targets) in arrangement(2), zs in prop::collection::vec(0i64..4, 4)) {
        let r = 2;
        let m = Matroid::new(psi.clone(), r).unwrap();
        let mu = &targets[0];
        let factors: Vec<(Option<CycloRat>, IVec, i32)> = psi
            .iter()
            .zip(&mult)
            .zip(&zs)
            .map(|((p, &n), &z)| (if z == 0 { None } else { Some(CycloRat::zeta_pow(4, z)) }, p.clone(), n))
            .collect();
        let f = FactoredFunction { shift: mu.iter().map(|&x| Rat::from_int(x)).collect(), factors, prefactor: CycloRat::one(4) };
        let xi = regular_point(&m, mu);
        let full = (1u128 << psi.len()) - 1;
        for b in os_bases_adapted(&m, full, &xi).unwrap() {
            let sigma: Vec<IVec> = b.indices.iter().map(|&i| psi[i].clone()).collect();
            prop_assert_eq!(iterated_residue(&sigma, &f).unwrap(), iterated_residue_direct(&sigma, &f).unwrap());
        }
    }

    /// Sum over OS bases of the whole list equals the sum over OS bases of the pole sublist.
    #[test]
    fn os_sublist_reduction((psi, mult, _y, targets) in arrangement(3), mask in 1u32..64) {
        let poles: u128 = (0..psi.len()).filter(|i| mask >> i & 1 == 1).fold(0, |a, i| a | 1 << i);
        let holds = os_sublist_holds(&psi, &mult, &targets[1], poles);
        prop_assume!(holds.is_some());
        prop_assert!(holds.unwrap());
    }
}

#[test]
fn residue_examples() {
    // 1/z
    let f = FactoredFunction { shift: vec![Rat::zero()], factors: vec![(None, vec![1], 1)], prefactor: Rat::one() };
    assert_eq!(iterated_residue(&[vec![1]], &f).unwrap(), Rat::one());
    // e^{kz}/(1-e^{-z}) has residue 1 for every k
    for k in 0..5 {
        let f = FactoredFunction { shift: vec![Rat::from_int(k)], factors: vec![(None, vec![1], 1)], prefactor: Rat::one() };
        assert_eq!(iterated_residue(&[vec![1]], &f).unwrap(), Rat::one());
    }
    // sigma = (2): 1/|det| = 1/2
    let f = FactoredFunction { shift: vec![Rat::zero()], factors: vec![(None, vec![2], 1)], prefactor: Rat::one() };
    assert_eq!(iterated_residue(&[vec![2]], &f).unwrap(), Rat::new(1, 2));
}

#[test]
fn specialization_commutes() {
    use kronecker::residue::iterated_residue_dilated;
    let psi = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![1, 2]];
    let f = FactoredFunction {
        shift: vec![Rat::from_int(1), Rat::from_int(-1)],
        factors: psi.iter().map(|p| (None, p.clone(), 1)).collect(),
        prefactor: Rat::one(),
    };
    let sigma = vec![psi[0].clone(), psi[3].clone()];
    let dir = vec![Rat::from_int(2), Rat::from_int(3)];
    let poly = iterated_residue_dilated(&sigma, &f, &dir).unwrap();
    let k = 7i64;
    let at7 = poly.iter().rev().fold(Rat::zero(), |a, c| &(&a * &Rat::from_int(k)) + c);
    let mut g = f.clone();
    g.shift = vec![Rat::from_int(1 + 2 * k), Rat::from_int(-1 + 3 * k)];
    assert_eq!(at7, iterated_residue(&sigma, &g).unwrap());
}

#[test]
fn symbolic_residue_evaluates_to_numeric() {
    use kronecker::residue::iterated_residue_symbolic;
    let psi = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![1, 2]];
    let f = FactoredFunction {
        shift: vec![Rat::from_int(1), Rat::from_int(-1)],
        factors: psi.iter().map(|p| (None, p.clone(), 1)).collect(),
        prefactor: Rat::one(),
    };
    let sigma = vec![psi[0].clone(), psi[3].clone()];
    let poly = iterated_residue_symbolic(&sigma, &f).unwrap();
    for v in [[0i64, 0], [3, -2], [5, 7], [-4, 1]] {
        let mut g = f.clone();
        g.shift = vec![Rat::from_int(1 + v[0]), Rat::from_int(-1 + v[1])];
        let at: Vec<Rat> = v.iter().map(|&x| Rat::from_int(x)).collect();
        assert_eq!(poly.eval(&at).unwrap(), iterated_residue(&sigma, &g).unwrap(), "v = {v:?}");
    }
}
