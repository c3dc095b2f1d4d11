//! Constant term of the deformation along `Y_1` for cosets where some root of `Delta_u`
//! restricts to zero. The deformation is multiplicative: `e^{-<w(alpha), eps Y_1>}` is
//! replaced by `(1 + eps)^{-<w(alpha), Y_1>}`.

use crate::error::{KronError, Result};
use crate::exact::{binomial, Rat};
use crate::linalg::{dot, IVec};
use crate::quasipoly::mpoly::MPoly;
use std::collections::BTreeMap;

/// One factor `1 / (1 - e^{-<v, z>} (1 + eps)^{-c})`.
#[derive(Clone, Debug)]
pub struct EpsFactor {
    pub v: IVec,
    pub c: i64,
}

/// `coeff * e^{<shift, z>} / prod (1 - e^{-<v, z>})^{n}` with polarized `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsTerm {
    pub coeff: MPoly<Rat>,
    pub shift: IVec,
    pub mult: Vec<(IVec, i32)>,
}

fn trunc_mul(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j].add_mul(x, y);
        }
    }
    out
}

fn trunc_inv(a: &[Rat], n: usize) -> Vec<Rat> {
    let a0 = a[0].inv();
    let mut out = vec![a0.clone()];
    for k in 1..=n {
        let mut s = Rat::zero();
        for j in 1..=k.min(a.len() - 1) {
            s.add_mul(&a[j], &out[k - j]);
        }
        out.push(-(&s * &a0));
    }
    out
}

/// `(1 + eps)^{-c} - 1` up to `eps^n`.
fn delta(c: i64, n: usize) -> Vec<Rat> {
    let mut d: Vec<Rat> = (0..=n).map(|k| binomial(-c, k as u32)).collect();
    d[0] = Rat::zero();
    d
}

/// `binomial(L, n)` for a polynomial `L`.
fn binom_poly(l: &MPoly<Rat>, n: usize) -> MPoly<Rat> {
    let nv = l.nvars();
    let mut acc = MPoly::constant(nv, Rat::one());
    for i in 0..n {
        let f = l.sub(&MPoly::constant(nv, Rat::from_int(i as i64)));
        acc = acc.mul(&f).scale_rat(&Rat::new(1, i as i64 + 1));
    }
    acc
}

/// Constant term in `eps` of `(1+eps)^{L} / prod_f (1 - e^{-<v_f,z>} (1+eps)^{-c_f})`,
/// with nonzero `v_f` polarized by `y` (so the output only has `<v, y> > 0`).
pub fn epsilon_constant_term(factors: &[EpsFactor], l: &MPoly<Rat>, y: &[i64]) -> Result<Vec<EpsTerm>> {
    let mut sign = Rat::one();
    let mut shift: IVec = vec![0; y.len()];
    let mut lpoly = l.clone();
    let mut nonzero: Vec<(IVec, i64)> = Vec::new();
    let mut zero_c: Vec<i64> = Vec::new();
    for f in factors {
        if f.v.iter().all(|&x| x == 0) {
            if f.c == 0 {
                return Err(KronError::InvalidInput("Y_1 vanishes on a root with zero restriction".into()));
            }
            zero_c.push(f.c);
            continue;
        }
        let py = dot(&f.v, y);
        if py == 0 {
            return Err(KronError::InvalidInput("polarizing vector is orthogonal to a restricted root".into()));
        }
        if py < 0 {
            // 1/(1-x) = -x^{-1}/(1-x^{-1})
            sign = -sign;
            for (s, v) in shift.iter_mut().zip(&f.v) {
                *s += v;
            }
            lpoly = lpoly.add(&MPoly::constant(l.nvars(), Rat::from_int(f.c)));
            nonzero.push((f.v.iter().map(|x| -x).collect(), -f.c));
        } else {
            nonzero.push((f.v.clone(), f.c));
        }
    }
    let p = zero_c.len();
    // eps^p / prod (1 - (1+eps)^{-c})
    let mut zpart = vec![Rat::one()];
    for &c in &zero_c {
        let d = delta(c, p + 1);
        let over: Vec<Rat> = d[1..].iter().map(|x| -x).collect();
        zpart = trunc_mul(&zpart, &trunc_inv(&over, p), p);
    }
    let mut distinct: Vec<IVec> = Vec::new();
    let mut base: Vec<i32> = Vec::new();
    let mut npart: BTreeMap<Vec<u32>, Vec<Rat>> = BTreeMap::new();
    for (v, _) in &nonzero {
        if !distinct.contains(v) {
            distinct.push(v.clone());
            base.push(0);
        }
    }
    let mut unit = vec![Rat::zero(); p + 1];
    unit[0] = Rat::one();
    npart.insert(vec![0; distinct.len()], unit);
    for (v, c) in &nonzero {
        let b = distinct.iter().position(|u| u == v).unwrap();
        base[b] += 1;
        if p == 0 {
            continue;
        }
        let d = delta(*c, p);
        let mut dp = vec![{
            let mut one = vec![Rat::zero(); p + 1];
            one[0] = Rat::one();
            one
        }];
        for m in 1..=p {
            let next = trunc_mul(&dp[m - 1], &d, p);
            dp.push(next);
        }
        let mut next: BTreeMap<Vec<u32>, Vec<Rat>> = BTreeMap::new();
        for (key, s) in &npart {
            let used: u32 = key.iter().sum();
            for (m, dm) in dp.iter().enumerate() {
                if used as usize + m > p {
                    break;
                }
                let prod = trunc_mul(s, dm, p);
                if prod.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let mut k2 = key.clone();
                k2[b] += m as u32;
                let slot = next.entry(k2).or_insert_with(|| vec![Rat::zero(); p + 1]);
                for (a, x) in slot.iter_mut().zip(&prod) {
                    *a += x;
                }
            }
        }
        npart = next;
    }
    let binoms: Vec<MPoly<Rat>> = (0..=p).map(|n| binom_poly(&lpoly, n)).collect();
    let mut out = Vec::new();
    for (key, s) in &npart {
        let full = trunc_mul(&zpart, s, p);
        let mut coeff = MPoly::zero(l.nvars());
        for (n, b) in binoms.iter().enumerate() {
            let c = &full[p - n];
            if !c.is_zero() {
                coeff.add_assign(&b.scale_rat(c));
            }
        }
        coeff = coeff.scale_rat(&sign);
        if coeff.is_zero() {
            continue;
        }
        let mut sh = shift.clone();
        let mut mult = Vec::new();
        for (b, v) in distinct.iter().enumerate() {
            let m = key[b] as i64;
            for (s, x) in sh.iter_mut().zip(v) {
                *s -= m * x;
            }
            mult.push((v.clone(), base[b] + m as i32));
        }
        out.push(EpsTerm { coeff, shift: sh, mult });
    }
    Ok(out)
}
