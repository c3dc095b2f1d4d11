//! Truncated Laurent series in an ordered list of variables, expanded in the iterated
//! regime `|z_r| << ... << |z_1|`. Terms are kept inside a box of exponents.
//!
//! This is the literal, slow representation. It is used to cross-check the fast engine.

use super::series::{exp_series, log_one_minus_zeta_exp, log_todd, mul_trunc};
use crate::error::{KronError, Result};
use crate::exact::{binomial, Coeff, Rat};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct NestedLaurent<C> {
    pub lo: Vec<i32>,
    pub hi: Vec<i32>,
    pub terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> NestedLaurent<C> {
    pub fn zero(lo: Vec<i32>, hi: Vec<i32>) -> Self {
        assert_eq!(lo.len(), hi.len());
        NestedLaurent { lo, hi, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    fn inside(&self, e: &[i32]) -> bool {
        e.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| l <= x && x <= h)
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: C) {
        if c.cis_zero() || !self.inside(&e) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                v.cadd(&c);
                if v.cis_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff(&self, e: &[i32]) -> Option<&C> {
        self.terms.get(e)
    }

    /// Product truncated to the box `[lo, hi]`.
    pub fn mul_into(&self, o: &Self, lo: Vec<i32>, hi: Vec<i32>) -> Self {
        let mut out = NestedLaurent::zero(lo, hi);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<i32> = a.iter().zip(b).map(|(s, t)| s + t).collect();
                if out.inside(&e) {
                    out.add_term(e, x.cmul(y));
                }
            }
        }
        out
    }

    /// Product on the window where both truncations are exact:
    /// `[a + c, min(a + d, b + c)]` in each variable.
    pub fn mul(&self, o: &Self) -> Self {
        let lo: Vec<i32> = self.lo.iter().zip(&o.lo).map(|(a, c)| a + c).collect();
        let hi: Vec<i32> =
            (0..self.nvars()).map(|j| (self.lo[j] + o.hi[j]).min(self.hi[j] + o.lo[j])).collect();
        self.mul_into(o, lo, hi)
    }

    /// Coefficient of `z_1^{-1} ... z_r^{-1}`.
    pub fn residue(&self, one: &C) -> C {
        let e = vec![-1; self.nvars()];
        self.coeff(&e).cloned().unwrap_or_else(|| one.zero_like())
    }
}

/// Coefficient of `z^e` in `l(z)^d` expanded in the iterated regime.
pub fn power_coeff(c: &[Rat], d: i32, e: &[i32]) -> Rat {
    let Some(j0) = c.iter().position(|x| !x.is_zero()) else {
        return if d == 0 && e.iter().all(|&x| x == 0) { Rat::one() } else { Rat::zero() };
    };
    if e[..j0].iter().any(|&x| x != 0) {
        return Rat::zero();
    }
    let mut m = 0i32;
    let mut x = Rat::one();
    for j in j0 + 1..c.len() {
        if e[j] < 0 || (c[j].is_zero() && e[j] != 0) {
            return Rat::zero();
        }
        if e[j] > 0 {
            m += e[j];
            x = &x * &(&c[j] / &c[j0]).pow(e[j]);
            x = &x / &super::series::factorial_rat(e[j] as usize);
        }
    }
    if e[j0] != d - m {
        return Rat::zero();
    }
    let b = binomial(d as i64, m as u32);
    &(&(&x * &super::series::factorial_rat(m as usize)) * &b) * &c[j0].pow(d)
}

fn univariate_factor<C: Coeff>(zeta: Option<&C>, n: i32, dmax: usize, one: &C) -> (i32, Vec<C>) {
    // (1 - zeta e^{-x})^{-n} = x^{start} * sum_k a_k x^k
    match zeta {
        None => {
            let l: Vec<C> = log_todd(dmax).iter().map(|s| one.from_rat_like(&(s * &Rat::from_int(n as i64)))).collect();
            (-n, exp_series(&l, dmax, one))
        }
        Some(z) => {
            let g = log_one_minus_zeta_exp(z, dmax);
            let l: Vec<C> = g.iter().map(|s| s.cmul_rat(&Rat::from_int(-(n as i64)))).collect();
            let mut om = one.clone();
            om.csub(z);
            let c = if n >= 0 { om.cinv() } else { om.clone() };
            let mut k = one.clone();
            for _ in 0..n.abs() {
                k = k.cmul(&c);
            }
            let e = exp_series(&l, dmax, one);
            (0, mul_trunc(&[k], &e, dmax))
        }
    }
}

fn box_points(lo: &[i32], hi: &[i32]) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            for x in *l..=*h {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// `(1 - zeta e^{-l(z)})^{-n}` on the box `[lo, hi]`; `zeta = None` stands for 1.
pub fn expand_factor<C: Coeff>(zeta: Option<&C>, ell: &[Rat], n: i32, lo: &[i32], hi: &[i32], one: &C) -> Result<NestedLaurent<C>> {
    if zeta.is_none() && ell.iter().all(|x| x.is_zero()) && n > 0 {
        return Err(KronError::InvalidInput("identically singular factor".into()));
    }
    let dmax = hi.iter().map(|&h| h.max(0)).sum::<i32>() + n.max(0);
    let (start, a) = univariate_factor(zeta, n, dmax.max(0) as usize, one);
    let mut out = NestedLaurent::zero(lo.to_vec(), hi.to_vec());
    for e in box_points(lo, hi) {
        let d: i32 = e.iter().sum();
        let k = d - start;
        if k < 0 || k as usize >= a.len() || a[k as usize].cis_zero() {
            continue;
        }
        let p = power_coeff(ell, d, &e);
        if !p.is_zero() {
            out.add_term(e, a[k as usize].cmul_rat(&p));
        }
    }
    Ok(out)
}

/// `1 / (1 - zeta e^{-l(z)})` on the box `[lo, hi]`.
pub fn expand_one_minus_exp<C: Coeff>(zeta: Option<&C>, ell: &[Rat], lo: &[i32], hi: &[i32], one: &C) -> Result<NestedLaurent<C>> {
    expand_factor(zeta, ell, 1, lo, hi, one)
}

/// `e^{<v, z>}` on the box `[lo, hi]`, where `v` holds the sigma-coordinates.
pub fn expand_exponential<C: Coeff>(v: &[C], lo: &[i32], hi: &[i32], one: &C) -> NestedLaurent<C> {
    let mut out = NestedLaurent::zero(lo.to_vec(), hi.to_vec());
    let lo0: Vec<i32> = lo.iter().map(|&l| l.max(0)).collect();
    for e in box_points(&lo0, hi) {
        let mut c = one.clone();
        for (x, &k) in v.iter().zip(&e) {
            for i in 1..=k {
                c = c.cmul(x).cmul_rat(&Rat::new(1, i as i64));
            }
        }
        out.add_term(e, c);
    }
    out
}
