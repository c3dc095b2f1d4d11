//! Sparse multivariate polynomials with exponent vectors as keys.

use crate::exact::{Coeff, Rat};
use std::collections::BTreeMap;

pub type Mono = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, C> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.cis_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().cadd(&c);
                if e.get().cis_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.cneg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.cis_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.cmul(c))).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.cmul_rat(r))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, c1.cmul(c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.terms.values().next() {
            Some(c) => c.one_like(),
            None => return if e == 0 { panic!("0^0 needs a coefficient type") } else { self.clone() },
        };
        let mut r = Self::constant(self.nvars, one);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn eval(&self, x: &[Rat]) -> Option<C> {
        let mut acc: Option<C> = None;
        for (m, c) in &self.terms {
            let mut v = Rat::one();
            for (xi, &e) in x.iter().zip(m) {
                if e > 0 {
                    v = &v * &xi.pow(e as i32);
                }
            }
            let t = c.cmul_rat(&v);
            match &mut acc {
                None => acc = Some(t),
                Some(a) => a.cadd(&t),
            }
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Substitutes `x_i -> images[i]` (polynomials in a possibly different ring of variables).
    pub fn compose(&self, images: &[MPoly<C>], new_nvars: usize) -> MPoly<C> {
        assert_eq!(images.len(), self.nvars);
        let mut cache: Vec<Vec<MPoly<C>>> = vec![Vec::new(); self.nvars];
        let mut r = MPoly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(new_nvars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() < e as usize {
                    let next = match cache[i].last() {
                        None => images[i].clone(),
                        Some(p) => p.mul(&images[i]),
                    };
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize - 1]);
            }
            r.add_assign(&t);
        }
        r
    }

    pub fn to_string_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
                .collect();
            let cs = c.pretty();
            if mono.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(mono.join("*"));
            } else if cs == "-1" {
                parts.push(format!("-{}", mono.join("*")));
            } else if cs.contains(' ') || cs.contains('+') {
                parts.push(format!("({cs})*{}", mono.join("*")));
            } else {
                parts.push(format!("{cs}*{}", mono.join("*")));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl MPoly<Rat> {
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(nvars, [(m, Rat::one())])
    }

    /// `sum_i coeffs[i] * x_i + c`.
    pub fn linear(coeffs: &[Rat], c: Rat) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, a.clone());
        }
        p
    }
}

/// Polynomials in the parameters as a coefficient ring. Only constants are invertible.
impl Coeff for MPoly<Rat> {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.nvars, Rat::one())
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        MPoly::constant(self.nvars, r.clone())
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&mut self, o: &Self) {
        self.add_assign(o);
    }
    fn csub(&mut self, o: &Self) {
        self.add_assign(&o.neg());
    }
    fn cmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn cmul_rat(&self, r: &Rat) -> Self {
        self.scale_rat(r)
    }
    fn cneg(&self) -> Self {
        self.neg()
    }
    fn cinv(&self) -> Self {
        match self.degree() {
            Some(0) => {
                let c = self.terms.values().next().unwrap();
                MPoly::constant(self.nvars, c.inv())
            }
            _ => panic!("inverse of a non-constant polynomial"),
        }
    }
    fn to_cyclo(&self, q: u32) -> crate::exact::CycloRat {
        match self.degree() {
            None => crate::exact::CycloRat::zero(q),
            Some(0) => crate::exact::CycloRat::from_rat(q, self.terms.values().next().unwrap().clone()),
            _ => panic!("non-constant polynomial is not a field element"),
        }
    }
    fn pretty(&self) -> String {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        self.to_string_with(&vars)
    }
}
