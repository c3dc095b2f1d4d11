//! Univariate series used by the residue engine.

use crate::exact::{binomial, Coeff, Rat};
use std::sync::{Mutex, OnceLock};

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rat {
    static TABLE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let mut t = TABLE.get_or_init(|| Mutex::new(vec![Rat::one()])).lock().unwrap();
    while t.len() <= n {
        let m = t.len();
        // sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
        let mut s = Rat::zero();
        for (k, b) in t.iter().enumerate() {
            s.add_mul(&binomial(m as i64 + 1, k as u32), b);
        }
        let bm = -(&s / &Rat::from_int(m as i64 + 1));
        t.push(bm);
    }
    t[n].clone()
}

pub fn factorial_rat(n: usize) -> Rat {
    (1..=n as i64).fold(Rat::one(), |a, k| &a * &Rat::from_int(k))
}

/// Coefficients `s_0..=s_d` of `log(x / (1 - e^{-x}))`.
pub fn log_todd(d: usize) -> Vec<Rat> {
    let mut s = vec![Rat::zero(); d + 1];
    if d >= 1 {
        s[1] = Rat::new(1, 2);
    }
    let mut n = 1;
    while 2 * n <= d {
        let den = &Rat::from_int(2 * n as i64) * &factorial_rat(2 * n);
        s[2 * n] = -(&bernoulli(2 * n) / &den);
        n += 1;
    }
    s
}

/// Coefficients `g_0..=g_d` of `log((1 - zeta e^{-x}) / (1 - zeta))` for `zeta != 1`.
pub fn log_one_minus_zeta_exp<C: Coeff>(zeta: &C, d: usize) -> Vec<C> {
    let one = zeta.one_like();
    let u = zeta.cinv();
    let mut um1 = u.clone();
    um1.csub(&one);
    let inv_um1 = um1.cinv();
    // c_n: coefficients of 1/(u e^x - 1)
    let mut c: Vec<C> = Vec::with_capacity(d);
    if d > 0 {
        c.push(inv_um1.clone());
    }
    let ratio = u.cmul(&inv_um1).cneg();
    for n in 1..d {
        let mut s = zeta.zero_like();
        for k in 1..=n {
            s.cadd(&c[n - k].cmul_rat(&factorial_rat(k).inv()));
        }
        c.push(ratio.cmul(&s));
    }
    let mut g = vec![zeta.zero_like(); d + 1];
    for (n, cn) in c.into_iter().enumerate() {
        g[n + 1] = cn.cmul_rat(&Rat::new(1, n as i64 + 1));
    }
    g
}

/// Univariate truncated power series product.
pub fn mul_trunc<C: Coeff>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let zero = a.first().or(b.first()).map(|c| c.zero_like());
    let Some(zero) = zero else { return vec![] };
    let mut out = vec![zero; n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.cis_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j].cadd_mul(x, y);
        }
    }
    out
}

/// `exp` of a power series with zero constant term, truncated at degree `n`.
pub fn exp_series<C: Coeff>(l: &[C], n: usize, one: &C) -> Vec<C> {
    let mut e = vec![one.clone()];
    for d in 1..=n {
        let mut s = one.zero_like();
        for j in 1..=d.min(l.len().saturating_sub(1)) {
            s.cadd(&l[j].cmul(&e[d - j]).cmul_rat(&Rat::from_int(j as i64)));
        }
        e.push(s.cmul_rat(&Rat::new(1, d as i64)));
    }
    e
}
