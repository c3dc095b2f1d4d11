//! Acceptance criteria, one PASS/FAIL line each. Pass criterion numbers as arguments to
//! run a subset.

mod common;

use common::sv::{expanded, os_sublist_holds, random_instance, szenes_vergne};
use common::{in_cone_tuple, partitions, positive_generators, random_partition, tuple, tuples};
use kronecker::branching::{branch_number, BranchOptions};
use kronecker::exact::{CycloRat, Rat};
use kronecker::oracle::{kronecker_bruteforce, partition_count};
use kronecker::pipeline::{
    hilbert_series, kronecker_dilated, kronecker_number, kronecker_symbolic, saturation, Config, DiagramTuple,
};
use kronecker::quasipoly::{MPoly, QuasiPolynomial, RationalGF};
use kronecker::rootdata::{deformation_vector, RestrictedRootData, Signature};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn t(s: &str) -> DiagramTuple {
    DiagramTuple::parse(s).unwrap()
}

fn cfg() -> Config {
    Config::default()
}

/// `sum zeta^(key k) * coeff * sum_d c_d k^d` over the given terms, in the variable `k`.
struct Term {
    q: u32,
    key: i64,
    coeff: CycloRat,
    poly: Vec<Rat>,
}

fn rational(poly: &[Rat]) -> Term {
    Term { q: 1, key: 0, coeff: CycloRat::one(1), poly: poly.to_vec() }
}

fn alternating(poly: &[Rat]) -> Term {
    Term { q: 2, key: 1, coeff: CycloRat::one(2), poly: poly.to_vec() }
}

/// `(a + b theta) (theta^key)^k` with `theta` a primitive third root of unity.
fn cubic(key: i64, a: Rat, b: Rat) -> Term {
    Term { q: 3, key, coeff: CycloRat::from_coeffs(3, vec![a, b]), poly: vec![Rat::one()] }
}

fn univariate(terms: &[Term]) -> QuasiPolynomial {
    let mut qp = QuasiPolynomial::zero(vec!["k".into()]);
    for tm in terms {
        let p = MPoly::from_terms(1, tm.poly.iter().enumerate().map(|(d, c)| (vec![d as u32], tm.coeff.scale(c))));
        qp.add_term(tm.q, &[tm.key], &p);
    }
    qp.canonicalize();
    qp
}

/// Equality of univariate quasi-polynomials, compared residue class by residue class.
fn same_cosets(a: &QuasiPolynomial, b: &QuasiPolynomial) -> Result<(), String> {
    let ca = ok(a.to_coset_form(0))?;
    let cb = ok(b.to_coset_form(0))?;
    let l = ca.modulus.lcm(&cb.modulus) as usize;
    for f in 0..l {
        let pa = &ca.polys[f % ca.polys.len()];
        let pb = &cb.polys[f % cb.polys.len()];
        ensure(pa == pb, || {
            format!("residue {f}: {} vs {}", pa.to_string_with(&["k".into()]), pb.to_string_with(&["k".into()]))
        })?;
    }
    Ok(())
}

fn values(qp: &QuasiPolynomial, n: i64) -> Result<Vec<Rat>, String> {
    (0..n).map(|k| ok(qp.evaluate(&[k]))).collect()
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_int(x)).collect()
}

fn leading(qp: &QuasiPolynomial) -> Result<(u32, Rat), String> {
    let cf = ok(qp.to_coset_form(0))?;
    let d = qp.degree().ok_or("zero quasi-polynomial")?;
    let c = cf.polys[0].terms().get(&vec![d]).cloned().unwrap_or_default();
    for p in &cf.polys {
        ensure(p.terms().get(&vec![d]).cloned().unwrap_or_default() == c, || "leading coefficient is periodic".into())?;
    }
    Ok((d, c))
}

fn c1_cauchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut zeros = 0;
    for _ in 0..50 {
        let c = rng.gen_range(1..=24);
        let nu = random_partition(&mut rng, c, 8);
        let mut other = random_partition(&mut rng, c, 8);
        if other == nu {
            other = partitions(c, 8).into_iter().find(|p| *p != nu).unwrap_or(vec![c + 1]);
        }
        let g = ok(kronecker_number(&tuple(vec![nu.clone(), nu.clone()]), &cfg()))?;
        ensure(g == BigInt::from(1), || format!("g({nu:?}, {nu:?}) = {g}"))?;
        let g = ok(kronecker_number(&tuple(vec![nu.clone(), other.clone()]), &cfg()))?;
        ensure(g == BigInt::from(0), || format!("g({nu:?}, {other:?}) = {g}"))?;
        zeros += 1;
    }
    Ok(format!("50 diagrams, {zeros} distinct pairs"))
}

fn c2_oracle() -> Outcome {
    let mut n = 0;
    let mut positive = 0;
    for dims in [&[2usize, 2, 2][..], &[3, 2, 2], &[2, 2, 2, 2], &[3, 3, 2]] {
        for c in 0..=8 {
            for d in tuples(c, dims) {
                let engine = ok(kronecker_number(&tuple(d.clone()), &cfg()))?;
                let brute = ok(kronecker_bruteforce(&d, 8))?;
                ensure(engine == BigInt::from(brute), || format!("{d:?}: engine {engine}, oracle {brute}"))?;
                n += 1;
                positive += (brute > 0) as usize;
            }
        }
    }
    Ok(format!("{n} tuples agree, {positive} nonzero"))
}

fn c3_qutrits() -> Outcome {
    let tt = t("[1,1,1] [1,1,1] [1,1,1]");
    let qp = ok(kronecker_dilated(&tt, &cfg()))?.value;
    let want = ints(&[1, 0, 1, 1, 2, 1, 3, 2, 4, 3, 5, 4, 7, 5, 8, 7, 10, 8, 12, 10, 14]);
    let got = values(&qp, 21)?;
    ensure(got == want, || format!("values {got:?}"))?;
    // the twelve coset polynomials
    let consts = [r(1, 1), r(-7, 48), r(5, 12), r(7, 16), r(2, 3), r(-7, 48), r(3, 4), r(5, 48), r(2, 3), r(3, 16), r(5, 12), r(5, 48)];
    let cf = ok(qp.to_coset_form(0))?;
    ensure(cf.modulus == 12, || format!("modulus {}", cf.modulus))?;
    for (f, c0) in consts.iter().enumerate() {
        let lin = if f % 2 == 0 { r(1, 4) } else { r(1, 8) };
        let p = MPoly::from_terms(1, [(vec![0], c0.clone()), (vec![1], lin), (vec![2], r(1, 48))]);
        ensure(cf.polys[f] == p, || format!("coset {f}"))?;
    }
    let h = ok(hilbert_series(&tt, &cfg()))?;
    let target = RationalGF { numerator: ints(&[1]), denominator_exponents: vec![2, 3, 4] };
    ensure(h.same_function(&target), || format!("Hilbert series {}", h.pretty()))?;
    Ok(format!("21 values, 12 cosets, {}", h.pretty()))
}

fn c4_chamber() -> Outcome {
    let tt = t("[132,38,19,11] [110,90] [120,80]");
    let res = ok(kronecker_symbolic(&tt, &cfg()))?;
    let sym = res.value;
    let vars: Vec<String> = ["lambda1", "lambda2", "lambda3", "lambda4", "mu1", "mu2", "nu1", "nu2"].map(String::from).to_vec();
    ensure(sym.vars() == vars.as_slice(), || format!("variables {:?}", sym.vars()))?;
    let v = |i: usize| {
        let mut m = vec![0u32; 8];
        m[i] = 1;
        m
    };
    let vv = |i: usize, j: usize| {
        let mut m = vec![0u32; 8];
        m[i] += 1;
        m[j] += 1;
        m
    };
    let (l2, l3, l4, m1, n1) = (1, 2, 3, 4, 6);
    let poly: Vec<(Vec<u32>, Rat)> = vec![
        (vv(l3, m1), r(1, 2)),
        (vv(l2, l3), r(1, 2)),
        (v(n1), r(-1, 2)),
        (v(l2), r(1, 2)),
        (v(l3), r(1, 2)),
        (v(l4), r(-1, 1)),
        (v(m1), r(1, 2)),
        (vv(l3, l3), r(-1, 4)),
        (vv(l3, n1), r(-1, 2)),
        (vv(l4, m1), r(-1, 2)),
        (vv(l2, l4), r(-1, 2)),
        (vec![0; 8], r(3, 4)),
        (vv(l4, l4), r(1, 4)),
        (vv(l4, n1), r(1, 2)),
    ];
    let cy = |c: Rat, q: u32| CycloRat::from_rat(q, c);
    let mut want = QuasiPolynomial::zero(vars.clone());
    want.add_term(1, &[0; 8], &MPoly::from_terms(8, poly.into_iter().map(|(m, c)| (m, cy(c, 1)))));
    let sign = |idx: &[usize]| {
        let mut k = vec![0i64; 8];
        idx.iter().for_each(|&i| k[i] = 1);
        k
    };
    let eighth = MPoly::constant(8, cy(r(1, 8), 2));
    want.add_term(2, &sign(&[l2, l4, m1, n1]), &eighth);
    want.add_term(2, &sign(&[l2, l3, m1, n1]), &eighth);
    want.canonicalize();
    ensure(sym == want, || format!("symbolic formula differs:\n{}", sym.pretty()))?;
    let val = ok(sym.evaluate(&tt.point()))?;
    let g = ok(kronecker_number(&tt, &cfg()))?;
    ensure(val == Rat::from_bigint(g.clone()), || format!("symbolic value {val}, numeric {g}"))?;
    let dil = ok(kronecker_dilated(&tt, &cfg()))?.value;
    let want = univariate(&[rational(&[r(3, 4), r(25, 2), r(52, 1)]), alternating(&[r(1, 4)])]);
    same_cosets(&dil, &want)?;
    Ok(format!("{} symbolic terms match, dilated {}", sym.terms().len(), dil.pretty()))
}

fn c5_four_qubits() -> Outcome {
    let tt = t("[2,1] [2,1] [2,1] [2,1]");
    let qp = ok(kronecker_dilated(&tt, &cfg()))?.value;
    let want = univariate(&[
        rational(&[
            r(5279, 6912),
            r(38545, 32256),
            r(9799, 11520),
            r(81601, 207360),
            r(139, 1152),
            r(155, 6912),
            r(13, 5760),
            r(23, 241920),
        ]),
        alternating(&[r(51, 256), r(179, 1536), r(5, 256), r(1, 1536)]),
        cubic(2, r(5, 243), r(1, 243)),
        cubic(1, r(4, 243), r(-1, 243)),
    ]);
    same_cosets(&qp, &want)?;
    let (d, lc) = leading(&qp)?;
    ensure(d == 7 && lc == r(23, 241920), || format!("leading {lc} k^{d}"))?;
    let cf = ok(qp.to_coset_form(0))?;
    let c0: Vec<Rat> = (0..6).map(|f| cf.polys[f % cf.polys.len()].terms().get(&vec![0]).cloned().unwrap_or_default()).collect();
    let want0 = vec![r(1, 1), r(5725, 10368), r(76, 81), r(77, 128), r(77, 81), r(5597, 10368)];
    ensure(c0 == want0, || format!("degree-zero coset values {c0:?}"))?;
    let vals = values(&qp, 12)?;
    ensure(vals == ints(&[1, 3, 13, 39, 110, 264, 588, 1194, 2289, 4134, 7152, 11865]), || format!("values {vals:?}"))?;
    Ok("degree 7, leading 23/241920, 6 coset constants, 12 values".into())
}

fn c6_six_three_two() -> Outcome {
    let tt = t("[15,10,9,4,3,2] [21,14,8] [27,16]");
    let qp = ok(kronecker_dilated(&tt, &cfg()))?.value;
    let (d, lc) = leading(&qp)?;
    ensure(d == 8 && lc == r(413587, 967680), || format!("leading {lc} k^{d}"))?;
    let vals = values(&qp, 7)?;
    ensure(vals == ints(&[1, 148, 3570, 34140, 197331, 829417, 2797696]), || format!("values {vals:?}"))?;
    let want = univariate(&[
        rational(&[
            r(398071, 497664),
            r(117661, 23040),
            r(1833073, 107520),
            r(871363, 25920),
            r(710713, 17280),
            r(1091771, 34560),
            r(3072191, 207360),
            r(66773, 17280),
            r(413587, 967680),
        ]),
        alternating(&[r(275, 2048), r(79, 512), r(55, 1024)]),
        cubic(1, r(10, 243), r(4, 243)),
        cubic(2, r(2, 81), r(-4, 243)),
    ]);
    same_cosets(&qp, &want)?;
    let g = ok(kronecker_number(&t("[9,7,5,3,2,1] [9,9,9] [14,13]"), &cfg()))?;
    ensure(g == BigInt::from(5), || format!("g = {g}"))?;
    let g17 = ok(kronecker_number(&t("[9,7,5,3,2,1] [9,9,9] [14,13]").scaled(17), &cfg()))?;
    ensure(g17 == BigInt::from(344715), || format!("g(17 .) = {g17}"))?;
    Ok("full display matches, g = 5, g(17 .) = 344715".into())
}

fn c7_walls() -> Outcome {
    let rows: [(&str, Vec<Term>); 5] = [
        ("[288,192,174,120,30,6] [343,270,197] [654,156]", vec![rational(&[r(1, 1), r(17, 1)])]),
        (
            "[300,186,150,78,48,6] [438,276,54] [465,303]",
            vec![rational(&[r(13, 16), r(311, 4), r(21051, 8), r(121077, 4)]), alternating(&[r(3, 16)])],
        ),
        ("[47,35,23,13,5,1] [76,38,10] [85,39]", vec![rational(&[r(1, 1)])]),
        ("[276,204,120,66,30,6] [351,273,78] [552,150]", vec![rational(&[r(1, 1), r(36, 1)])]),
        ("[276,198,126,66,48,6] [406,201,113] [536,184]", vec![rational(&[r(1, 1), r(41, 1)])]),
    ];
    for (s, terms) in rows {
        let qp = ok(kronecker_dilated(&t(s), &cfg()))?.value;
        same_cosets(&qp, &univariate(&terms)).map_err(|e| format!("{s}: {e}"))?;
    }
    // the symbolic polynomial near v_{F_I}
    let ve = t("[291,194,175,120,30,6] [347,272,197] [659,157]");
    let sym = ok(kronecker_symbolic(&ve, &cfg()))?.value;
    let vars = sym.vars().to_vec();
    let idx = |name: &str| vars.iter().position(|v| v == name).unwrap();
    let n = vars.len();
    let lin = |plus: &[&str], minus: &[&str], c: i64| {
        let mut p = MPoly::constant(n, Rat::from_int(c));
        for v in plus {
            p = p.add(&MPoly::var(n, idx(v)));
        }
        for v in minus {
            p = p.sub(&MPoly::var(n, idx(v)));
        }
        p
    };
    let mut prod = lin(&["lambda1", "lambda2", "lambda4", "lambda5"], &["mu1", "mu2"], 1).scale_rat(&r(1, 5040));
    for i in 1..=7 {
        prod = prod.mul(&lin(&["lambda1", "lambda2", "lambda3"], &["nu1"], i));
    }
    let want = QuasiPolynomial::from_poly(vars.clone(), &prod);
    ensure(sym == want, || format!("symbolic formula differs:\n{}", sym.pretty()))?;
    // restricted to the ray k v^eps
    for k in 0..10i64 {
        let p: Vec<i64> = ve.point().iter().map(|&x| k * x).collect();
        let got = ok(sym.evaluate(&p))?;
        let mut w = Rat::from_int(16 * k + 1);
        for i in 1..=7 {
            w = &w * &Rat::from_int(k + i);
        }
        ensure(got == &w / &Rat::from_int(5040), || format!("ray value at k = {k}: {got}"))?;
    }
    Ok("5 wall rows, product formula on the F_I chamber".into())
}

fn c8_hilbert() -> Outcome {
    let rows: [(&str, Vec<i64>, Vec<u32>); 4] = [
        ("[1,1] [1,1] [1,1]", vec![1], vec![2]),
        ("[1,1] [1,1] [1,1] [1,1]", vec![1], vec![1, 2, 2, 3]),
        ("[1,1,1] [1,1,1] [1,1,1]", vec![1], vec![2, 3, 4]),
        ("[3,3,3,3] [4,4,4] [4,4,4]", vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1], vec![1, 2, 2, 3, 4]),
    ];
    let mut shown = Vec::new();
    for (s, num, den) in rows {
        let h = ok(hilbert_series(&t(s), &cfg()))?;
        let target = RationalGF { numerator: ints(&num), denominator_exponents: den };
        ensure(h.same_function(&target), || format!("{s}: {}", h.pretty()))?;
        shown.push(h.pretty());
    }
    // displayed dilated coefficients of the first two rows
    let two = ok(kronecker_dilated(&t("[1,1] [1,1] [1,1]"), &cfg()))?.value;
    same_cosets(&two, &univariate(&[rational(&[r(1, 2)]), alternating(&[r(1, 2)])]))?;
    let four = ok(kronecker_dilated(&t("[1,1] [1,1] [1,1] [1,1]"), &cfg()))?.value;
    // k^2 coefficient 1/6: with 1/16 the value at k = 2 would be 31/12
    let want = univariate(&[
        rational(&[r(23, 36), r(29, 48), r(1, 6), r(1, 72)]),
        alternating(&[r(1, 4), r(1, 16)]),
        cubic(1, r(2, 27), r(1, 27)),
        cubic(2, r(1, 27), r(-1, 27)),
    ]);
    same_cosets(&four, &want)?;
    Ok(shown.join(", "))
}

fn c9_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    // generators must reach every row count, since sums never add rows
    let cases: [(&[usize], i64, u32, &[u32]); 3] =
        [(&[3, 3, 3], 3, 11, &[1, 2, 3, 4]), (&[2, 2, 2, 2], 3, 7, &[1, 2, 3]), (&[6, 3, 2], 6, 8, &[1, 2, 3])];
    let mut report = Vec::new();
    for (dims, gen_content, dmax, periods) in cases {
        let gens = positive_generators(dims, gen_content);
        let mut max_seen = 0;
        for _ in 0..100 {
            let d = in_cone_tuple(&mut rng, &gens, 4);
            let tt = tuple(d);
            let qp = ok(kronecker_dilated(&tt, &cfg()))?.value;
            let deg = qp.degree().ok_or_else(|| format!("{tt}: zero quasi-polynomial for an in-cone tuple"))?;
            ensure(deg <= dmax, || format!("{tt}: degree {deg}"))?;
            let ps = qp.set_of_periods();
            ensure(ps.iter().all(|p| periods.contains(p)), || format!("{tt}: periods {ps:?}"))?;
            ensure(ok(qp.evaluate(&[0]))? == Rat::one(), || format!("{tt}: value at k = 0"))?;
            max_seen = max_seen.max(deg);
        }
        report.push(format!("{dims:?} max degree {max_seen}"));
    }
    Ok(report.join(", "))
}

fn c10_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut sv = 0;
    while sv < 200 {
        let dim = if sv % 2 == 0 { 2 } else { 3 };
        let (psi, mult, mu) = random_instance(&mut rng, dim);
        let want = ok(partition_count(&expanded(&psi, &mult), &mu))?;
        let got = szenes_vergne(&psi, &mult, &mu, false);
        ensure(got == Rat::from_int(want as i64), || format!("psi {psi:?} mult {mult:?} mu {mu:?}: {got} vs {want}"))?;
        sv += 1;
    }
    let mut os = 0;
    let mut tried = 0;
    while os < 50 {
        tried += 1;
        let (psi, mult, mu) = random_instance(&mut rng, 3);
        let mask: u128 = rng.gen_range(1..(1u128 << psi.len()));
        if let Some(holds) = os_sublist_holds(&psi, &mult, &mu, mask) {
            ensure(holds, || format!("OS sublist identity fails for psi {psi:?} poles {mask:b}"))?;
            os += 1;
        }
    }
    // epsilon path: forced on data without vanishing restrictions, and needed once a factor is dropped
    let data = ok(RestrictedRootData::build(&Signature::general(2, &[2, 2, 2])))?;
    let def = ok(deformation_vector(&data, 11))?;
    let forced = BranchOptions { force_epsilon: true, ..BranchOptions::default() };
    let mut eps = 0;
    for c in 2..=4 {
        for lam in partitions(c, 2) {
            for a in partitions(c, 2) {
                for b in partitions(c, 2) {
                    let mu = data.k_weight(&[a.clone(), b.clone(), vec![c]]);
                    let plain = ok(branch_number(&data, &lam, &mu, &def, &BranchOptions::default()))?;
                    let viaeps = ok(branch_number(&data, &lam, &mu, &def, &forced))?;
                    ensure(plain == viaeps, || format!("{lam:?} {a:?} {b:?}: {plain} vs {viaeps}"))?;
                    eps += 1;
                }
            }
        }
    }
    let mut sig = Signature::general(2, &[2, 2, 2]);
    sig.kept = vec![true, true, false];
    let dropped = ok(RestrictedRootData::build(&sig))?;
    ensure(dropped.zero_restrictions > 0, || "no vanishing restrictions".into())?;
    let def = ok(deformation_vector(&dropped, 5))?;
    for c in 2..=4 {
        for lam in partitions(c, 2) {
            for a in partitions(c, 2) {
                for b in partitions(c, 2) {
                    let got = ok(branch_number(&dropped, &lam, &dropped.k_weight(&[a.clone(), b.clone()]), &def, &BranchOptions::default()))?;
                    let mut want = 0i64;
                    for nu in partitions(c, 2) {
                        let dim = nu[0] - nu.get(1).copied().unwrap_or(0) + 1;
                        want += dim * ok(kronecker_bruteforce(&[lam.clone(), a.clone(), b.clone(), nu], 8))? as i64;
                    }
                    ensure(got == Rat::from_int(want), || format!("dropped factor {lam:?} {a:?} {b:?}: {got} vs {want}"))?;
                    eps += 1;
                }
            }
        }
    }
    Ok(format!("{sv} Szenes-Vergne instances, {os} OS sublist instances ({tried} drawn), {eps} epsilon-path values"))
}

fn c11_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let dims: [&[usize]; 3] = [&[3, 2, 2], &[2, 2, 2, 2], &[3, 3, 2]];
    let mut n = 0;
    let mut saturated = 0;
    for d in dims {
        let gens = positive_generators(d, 3);
        for j in 0..10 {
            let tt = if j % 2 == 0 {
                tuple(in_cone_tuple(&mut rng, &gens, 4))
            } else {
                let c = rng.gen_range(2..=10);
                tuple(d.iter().map(|&k| random_partition(&mut rng, c, k)).collect())
            };
            let g = Rat::from_bigint(ok(kronecker_number(&tt, &cfg()))?);
            let dil = ok(kronecker_dilated(&tt, &cfg()))?.value;
            let sym = ok(kronecker_symbolic(&tt, &cfg()))?.value;
            ensure(ok(dil.evaluate(&[1]))? == g, || format!("{tt}: dilated(1) != {g}"))?;
            ensure(ok(sym.evaluate(&tt.point()))? == g, || format!("{tt}: symbolic != {g}"))?;
            let sat = ok(saturation(&tt, &cfg()))?;
            ensure((ok(dil.evaluate(&[0]))? == Rat::one()) == sat.is_some(), || format!("{tt}: k = 0 value vs saturation {sat:?}"))?;
            saturated += sat.is_some() as usize;
            n += 1;
        }
    }
    Ok(format!("{n} tuples, {saturated} in the cone"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "Cauchy and trivial layer", c1_cauchy),
        (2, "exhaustive oracle equivalence", c2_oracle),
        (3, "three qutrits: sequence, cosets, Hilbert series", c3_qutrits),
        (4, "C^4 x C^2 x C^2 chamber, symbolic and dilated", c4_chamber),
        (5, "four qubits dilated", c5_four_qubits),
        (6, "(6,3,2) interior point", c6_six_three_two),
        (7, "regular walls and the F_I product formula", c7_walls),
        (8, "Hilbert series of rectangular tuples", c8_hilbert),
        (9, "degree and period bounds", c9_bounds),
        (10, "Szenes-Vergne, OS sublist, epsilon path", c10_engine),
        (11, "numeric, dilated, symbolic and saturation agree", c11_consistency),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS  {id:>2}  {name}: {detail} [{secs:.1}s]"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {id:>2}  {name}: {e} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
