//! Szenes-Vergne sums and the OS sublist identity, shared by several test targets.

use kronecker::exact::{totient, CycloRat, Rat};
use kronecker::linalg::{dot, rank_int, IVec};
use kronecker::osbases::os_bases_adapted;
use kronecker::residue::{iterated_residue, iterated_residue_direct, FactoredFunction};
use kronecker::rootdata::{index_and_gammas, Matroid};
use rand::Rng;

pub fn regular_point(m: &Matroid, mu: &[i64]) -> Vec<Rat> {
    // move towards the interior of the cone, with a generic tilt
    let r = mu.len();
    let mut v: Vec<Rat> = (0..r).map(|i| Rat::new(1, 1000i64.pow(i as u32 + 1))).collect();
    for p in &m.vectors {
        for (a, &b) in v.iter_mut().zip(p) {
            *a += &Rat::from_int(b);
        }
    }
    let normals = m.hyperplane_normals();
    let maxv = v.iter().map(|x| x.abs()).max().unwrap();
    let maxn = normals.iter().map(|n| n.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(1);
    let t = &Rat::new(1, 4 * maxn) / &maxv;
    let xi: Vec<Rat> = mu.iter().zip(&v).map(|(&x, y)| &Rat::from_int(x) + &(&t * y)).collect();
    for n in &normals {
        let s: Rat = n.iter().zip(&xi).map(|(&a, b)| &Rat::from_int(a) * b).sum();
        assert!(!s.is_zero(), "perturbation not regular");
    }
    xi
}

pub fn gamma_term(psi: &[IVec], mult: &[i32], mu: &[i64], m: &Matroid, xi: &[Rat], q: u32, g: &[i64], direct: bool) -> CycloRat {
    let qi = q as i64;
    let mut poles = 0u128;
    let mut factors = Vec::new();
    for (i, p) in psi.iter().enumerate() {
        let a = dot(p, g).rem_euclid(qi);
        if a == 0 {
            poles |= 1 << i;
            factors.push((None, p.clone(), mult[i]));
        } else {
            factors.push((Some(CycloRat::zeta_pow(q, -a)), p.clone(), mult[i]));
        }
    }
    let f = FactoredFunction {
        shift: mu.iter().map(|&x| Rat::from_int(x)).collect(),
        factors,
        prefactor: CycloRat::zeta_pow(q, dot(mu, g)),
    };
    let mut total = CycloRat::zero(q);
    for b in os_bases_adapted(m, poles, xi).unwrap() {
        let sigma: Vec<IVec> = b.indices.iter().map(|&i| psi[i].clone()).collect();
        let v = if direct { iterated_residue_direct(&sigma, &f) } else { iterated_residue(&sigma, &f) }.unwrap();
        total = total.add(&v);
    }
    total
}

/// Sum over gamma in Gamma/q Gamma and over OS bases of the poles at gamma. Small cases
/// enumerate every gamma; larger ones use one gamma per Galois orbit and take traces.
pub fn szenes_vergne(psi: &[IVec], mult: &[i32], mu: &[i64], direct: bool) -> Rat {
    let r = mu.len();
    let m = Matroid::new(psi.to_vec(), r).unwrap();
    let (q, classes) = index_and_gammas(psi, r);
    let xi = regular_point(&m, mu);
    let qi = q as i64;
    let count = qi.pow(r as u32);
    let mut total = CycloRat::zero(q);
    if count <= 512 {
        for idx in 0..count {
            let mut g = vec![0i64; r];
            let mut x = idx;
            for gi in g.iter_mut() {
                *gi = x % qi;
                x /= qi;
            }
            total = total.add(&gamma_term(psi, mult, mu, &m, &xi, q, &g, direct));
        }
    } else {
        let units: Vec<i64> = (1..=qi).filter(|&j| num_integer::gcd(j, qi) == 1).collect();
        for c in &classes {
            let v = gamma_term(psi, mult, mu, &m, &xi, q, &c.rep, direct);
            let trace = units.iter().fold(CycloRat::zero(q), |a, &j| a.add(&v.galois(j)));
            let scale = Rat::new(totient(c.order) as i64, units.len() as i64);
            total = total.add(&trace.scale(&scale));
        }
    }
    total.to_rat().expect("rational total")
}

pub fn expanded(psi: &[IVec], mult: &[i32]) -> Vec<IVec> {
    psi.iter().zip(mult).flat_map(|(p, &n)| std::iter::repeat_n(p.clone(), n as usize)).collect()
}

/// Sum over OS bases of the full list against the sum over OS bases of the pole sublist,
/// with non-poles twisted by `-1`. `None` if the poles do not span.
pub fn os_sublist_holds(psi: &[IVec], mult: &[i32], mu: &[i64], poles: u128) -> Option<bool> {
    let r = mu.len();
    let m = Matroid::new(psi.to_vec(), r).unwrap();
    let pole_list: Vec<IVec> = (0..psi.len()).filter(|i| poles >> i & 1 == 1).map(|i| psi[i].clone()).collect();
    if rank_int(&pole_list) < r {
        return None;
    }
    let factors: Vec<(Option<Rat>, IVec, i32)> = psi
        .iter()
        .enumerate()
        .map(|(i, p)| (if poles >> i & 1 == 1 { None } else { Some(Rat::from_int(-1)) }, p.clone(), mult[i]))
        .collect();
    let f = FactoredFunction { shift: mu.iter().map(|&x| Rat::from_int(x)).collect(), factors, prefactor: Rat::one() };
    let xi = regular_point(&m, mu);
    let sum = |mask: u128| -> Rat {
        os_bases_adapted(&m, mask, &xi)
            .unwrap()
            .iter()
            .map(|b| {
                let sigma: Vec<IVec> = b.indices.iter().map(|&i| psi[i].clone()).collect();
                iterated_residue(&sigma, &f).unwrap()
            })
            .fold(Rat::zero(), |a, b| &a + &b)
    };
    let full = (1u128 << psi.len()) - 1;
    Some(sum(full) == sum(poles))
}

/// A random spanning list in an open half space with index at most 12, multiplicities,
/// and a target inside its cone.
pub fn random_instance(rng: &mut impl Rng, r: usize) -> (Vec<IVec>, Vec<i32>, IVec) {
    loop {
        let y: IVec = (0..r).map(|_| rng.gen_range(1..=5)).collect();
        let n = rng.gen_range(r..=r + 2);
        let mut psi: Vec<IVec> = Vec::new();
        let mut ok = true;
        for _ in 0..n {
            let v: IVec = (0..r).map(|_| rng.gen_range(-1..=2)).collect();
            let s = dot(&v, &y);
            if s == 0 {
                ok = false;
                break;
            }
            let v: IVec = if s < 0 { v.iter().map(|x| -x).collect() } else { v };
            if !psi.contains(&v) {
                psi.push(v);
            }
        }
        if !ok || rank_int(&psi) < r || index_and_gammas(&psi, r).0 > 12 {
            continue;
        }
        let mult: Vec<i32> = psi.iter().map(|_| rng.gen_range(1..=2)).collect();
        let mut mu = vec![0; r];
        for p in &psi {
            let k = rng.gen_range(0..=6);
            for (a, b) in mu.iter_mut().zip(p) {
                *a += k * b;
            }
        }
        return (psi, mult, mu);
    }
}
