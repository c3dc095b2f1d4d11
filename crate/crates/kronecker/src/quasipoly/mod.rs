//! Quasi-polynomials: finite sums of periodic characters times polynomials.

pub mod genfun;
pub mod mpoly;

pub use genfun::RationalGF;
pub use mpoly::{MPoly, Mono};

use crate::error::{KronError, Result};
use crate::exact::{totient, CycloRat, Rat};
use num_integer::Integer;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

/// `sum_L zeta_Q^{<L, x>} P_L(x)` with `P_L` over Q(zeta_Q).
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolynomial {
    vars: Vec<String>,
    modulus: u32,
    terms: BTreeMap<Vec<u32>, MPoly<CycloRat>>,
}

/// Per-residue polynomials in one grading variable.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetForm {
    pub modulus: u32,
    pub var: usize,
    pub polys: Vec<MPoly<Rat>>,
}

fn key_order(q: u32, key: &[u32]) -> u32 {
    let g = key.iter().fold(q, |g, &l| g.gcd(&l));
    q / g
}

impl QuasiPolynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        QuasiPolynomial { vars, modulus: 1, terms: BTreeMap::new() }
    }

    pub fn from_poly(vars: Vec<String>, p: &MPoly<Rat>) -> Self {
        let mut qp = Self::zero(vars);
        qp.add_term(1, &vec![0; p.nvars()], &p.map_coeffs(|c| CycloRat::from_rat(1, c.clone())));
        qp
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, MPoly<CycloRat>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lift(&mut self, q: u32) {
        if q == self.modulus {
            return;
        }
        let f = q / self.modulus;
        let old = std::mem::take(&mut self.terms);
        self.terms = old
            .into_iter()
            .map(|(k, p)| (k.into_iter().map(|l| l * f).collect(), p.map_coeffs(|c| c.embed(q))))
            .collect();
        self.modulus = q;
    }

    /// Adds `zeta_q^{<key, x>} * poly(x)`; coefficients of `poly` may live in any cyclotomic field.
    pub fn add_term(&mut self, q: u32, key: &[i64], poly: &MPoly<CycloRat>) {
        assert_eq!(key.len(), self.vars.len());
        if poly.is_zero() {
            return;
        }
        let field = poly.terms().values().fold(q, |a, c| a.lcm(&c.q()));
        let big = self.modulus.lcm(&field);
        self.lift(big);
        let f = (big / q) as i64;
        let k: Vec<u32> = key.iter().map(|&l| (l * f).rem_euclid(big as i64) as u32).collect();
        let p = poly.map_coeffs(|c| c.embed(big));
        let entry = self.terms.entry(k.clone()).or_insert_with(|| MPoly::zero(poly.nvars()));
        entry.add_assign(&p);
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, o: &QuasiPolynomial) {
        assert_eq!(self.vars.len(), o.vars.len());
        for (k, p) in &o.terms {
            let key: Vec<i64> = k.iter().map(|&l| l as i64).collect();
            self.add_term(o.modulus, &key, p);
        }
    }

    pub fn scale(&self, r: &Rat) -> QuasiPolynomial {
        let mut out = Self::zero(self.vars.clone());
        if r.is_zero() {
            return out;
        }
        out.modulus = self.modulus;
        out.terms = self.terms.iter().map(|(k, p)| (k.clone(), p.scale_rat(r))).collect();
        out
    }

    /// Shrinks the modulus to the lcm of the periods actually present and moves
    /// coefficients into the smallest cyclotomic field that holds them.
    pub fn canonicalize(&mut self) {
        self.terms.retain(|_, p| !p.is_zero());
        if self.terms.is_empty() {
            self.modulus = 1;
            return;
        }
        let q = self.modulus;
        let q2 = self.terms.keys().fold(1u32, |a, k| a.lcm(&key_order(q, k)));
        if q2 == q {
            return;
        }
        let f = q / q2;
        let mut out = BTreeMap::new();
        for (k, p) in &self.terms {
            let mut coeffs = Vec::with_capacity(p.len());
            for (m, c) in p.terms() {
                match c.restrict(q2) {
                    Some(c2) => coeffs.push((m.clone(), c2)),
                    None => return,
                }
            }
            out.insert(k.iter().map(|&l| l / f).collect(), MPoly::from_terms(p.nvars(), coeffs));
        }
        self.modulus = q2;
        self.terms = out;
    }

    pub fn evaluate_cyclo(&self, point: &[i64]) -> CycloRat {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let q = self.modulus;
        let x: Vec<Rat> = point.iter().map(|&v| Rat::from_int(v)).collect();
        let mut acc = CycloRat::zero(q);
        for (k, p) in &self.terms {
            let e: i64 = k.iter().zip(point).map(|(&l, &v)| l as i64 * v).sum();
            if let Some(v) = p.eval(&x) {
                acc.add_assign(&v.mul(&CycloRat::zeta_pow(q, e)));
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[i64]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(KronError::InvalidInput(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.vars.len()
            )));
        }
        let v = self.evaluate_cyclo(point);
        v.to_rat().ok_or_else(|| KronError::Representation(format!("value {v} at {point:?} is not rational")))
    }

    /// `None` for the zero quasi-polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|p| p.degree()).max()
    }

    pub fn set_of_periods(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|k| key_order(self.modulus, k)).collect()
    }

    /// Polynomial of the given degree part in the periodic coefficient of each term.
    pub fn to_coset_form(&self, var: usize) -> Result<CosetForm> {
        for k in self.terms.keys() {
            if k.iter().enumerate().any(|(i, &l)| i != var && l != 0) {
                return Err(KronError::InvalidInput(
                    "periodic part depends on more than the grading variable".into(),
                ));
            }
        }
        let q = self.modulus;
        let n = self.vars.len();
        let mut polys = Vec::with_capacity(q as usize);
        for f in 0..q as i64 {
            let mut acc: MPoly<CycloRat> = MPoly::zero(n);
            for (k, p) in &self.terms {
                acc.add_assign(&p.scale(&CycloRat::zeta_pow(q, k[var] as i64 * f)));
            }
            let mut rp = MPoly::zero(n);
            for (m, c) in acc.terms() {
                let r = c.to_rat().ok_or_else(|| {
                    KronError::Representation(format!("coset {f} coefficient {c} is not rational"))
                })?;
                rp.add_term(m.clone(), r);
            }
            polys.push(rp);
        }
        let cf = CosetForm { modulus: q, var, polys };
        if n == 1 {
            for k in 0..2 * q as i64 {
                let direct = self.evaluate(&[k])?;
                if cf.evaluate(k) != direct {
                    return Err(KronError::Representation(format!("coset form disagrees at {k}")));
                }
            }
        }
        Ok(cf)
    }

    /// Generating function `sum_{k >= 0} p(k) t^k` of a univariate quasi-polynomial.
    pub fn generating_function(&self) -> Result<RationalGF> {
        if self.vars.len() != 1 {
            return Err(KronError::InvalidInput("generating function needs a univariate quasi-polynomial".into()));
        }
        let Some(d) = self.degree() else {
            return Ok(RationalGF { numerator: vec![], denominator_exponents: vec![] });
        };
        let q = self.modulus;
        let n = (q * (d + 1)) as i64;
        let vals = (0..n).map(|k| self.evaluate(&[k])).collect::<Result<Vec<_>>>()?;
        Ok(RationalGF::from_values(&vals, q, d))
    }

    pub fn to_json(&self) -> Value {
        let q = self.modulus;
        let mut terms = Vec::new();
        for (k, p) in &self.terms {
            let order = key_order(q, k);
            // express in Q(zeta_order) when the coefficients allow it
            let (fq, key): (u32, Vec<u32>) = match restrict_poly(p, order) {
                Some(_) => (order, k.iter().map(|&l| l / (q / order)).collect()),
                None => (q, k.clone()),
            };
            let p = restrict_poly(p, fq).expect("field contains coefficients");
            let eform: Map<String, Value> =
                self.vars.iter().zip(&key).filter(|(_, &l)| l != 0).map(|(v, &l)| (v.clone(), json!(l))).collect();
            for (zc, rp) in split_by_direction(&p) {
                let poly: Map<String, Value> = rp
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let ms: Vec<String> = m.iter().map(|e| e.to_string()).collect();
                        (ms.join(","), json!(c.to_string()))
                    })
                    .collect();
                terms.push(json!({
                    "q": fq,
                    "zeta_coeff": zc.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "exponent_form": eform,
                    "poly": poly,
                }));
            }
        }
        json!({ "vars": self.vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<QuasiPolynomial> {
        let bad = |m: &str| KronError::InvalidInput(format!("quasi-polynomial JSON: {m}"));
        let vars: Vec<String> = serde_json::from_value(v.get("vars").cloned().ok_or_else(|| bad("missing vars"))?)?;
        let n = vars.len();
        let mut qp = QuasiPolynomial::zero(vars.clone());
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let q = t.get("q").and_then(Value::as_u64).ok_or_else(|| bad("term without q"))? as u32;
            if q == 0 {
                return Err(bad("q must be positive"));
            }
            let zc: Vec<Rat> = serde_json::from_value(t.get("zeta_coeff").cloned().ok_or_else(|| bad("zeta_coeff"))?)?;
            if zc.len() != totient(q) as usize {
                return Err(bad("zeta_coeff length must be phi(q)"));
            }
            let zc = CycloRat::from_coeffs(q, zc);
            let mut key = vec![0i64; n];
            if let Some(ef) = t.get("exponent_form").and_then(Value::as_object) {
                for (name, l) in ef {
                    let i = vars.iter().position(|v| v == name).ok_or_else(|| bad("unknown variable"))?;
                    key[i] = l.as_i64().ok_or_else(|| bad("exponent must be an integer"))?;
                }
            }
            let mut poly = MPoly::zero(n);
            for (m, c) in t.get("poly").and_then(Value::as_object).ok_or_else(|| bad("poly"))? {
                let mono: Vec<u32> = if n == 0 {
                    vec![]
                } else {
                    m.split(',').map(|e| e.trim().parse::<u32>()).collect::<std::result::Result<_, _>>().map_err(|_| bad("monomial"))?
                };
                if mono.len() != n {
                    return Err(bad("monomial length"));
                }
                let c: Rat = serde_json::from_value(c.clone())?;
                poly.add_term(mono, zc.scale(&c));
            }
            qp.add_term(q, &key, &poly);
        }
        qp.canonicalize();
        Ok(qp)
    }

    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let q = self.modulus;
        let mut parts = Vec::new();
        for (k, p) in &self.terms {
            let body = p.to_string_with(&self.vars);
            if k.iter().all(|&l| l == 0) {
                parts.push(body);
                continue;
            }
            let order = key_order(q, k);
            let ks: Vec<u32> = k.iter().map(|&l| l / (q / order)).collect();
            let expo: Vec<String> = self
                .vars
                .iter()
                .zip(&ks)
                .filter(|(_, &l)| l != 0)
                .map(|(v, &l)| if l == 1 { v.clone() } else { format!("{l}*{v}") })
                .collect();
            let base = if order == 2 { "(-1)".to_string() } else { format!("z{order}") };
            parts.push(format!("{base}^({})*({body})", expo.join("+")));
        }
        parts.join(" + ")
    }
}

fn restrict_poly(p: &MPoly<CycloRat>, q: u32) -> Option<MPoly<CycloRat>> {
    let mut out = MPoly::zero(p.nvars());
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c.restrict(q)?);
    }
    Some(out)
}

/// Writes `p` as a sum of `c_i * R_i` with `R_i` rational polynomials; a single pair when
/// all coefficients are rational multiples of one another.
fn split_by_direction(p: &MPoly<CycloRat>) -> Vec<(CycloRat, MPoly<Rat>)> {
    let Some(c0) = p.terms().values().next().cloned() else { return vec![] };
    let inv = c0.inv();
    let mut single = MPoly::zero(p.nvars());
    let mut ok = true;
    for (m, c) in p.terms() {
        match c.mul(&inv).to_rat() {
            Some(r) => single.add_term(m.clone(), r),
            None => {
                ok = false;
                break;
            }
        }
    }
    if ok {
        return vec![(c0, single)];
    }
    let q = c0.q();
    let dim = totient(q) as usize;
    (0..dim)
        .filter_map(|b| {
            let rp = MPoly::from_terms(p.nvars(), p.terms().iter().map(|(m, c)| (m.clone(), c.coeffs()[b].clone())));
            if rp.is_zero() {
                None
            } else {
                let mut e = vec![Rat::zero(); dim];
                e[b] = Rat::one();
                Some((CycloRat::from_coeffs(q, e), rp))
            }
        })
        .collect()
}

impl CosetForm {
    pub fn evaluate(&self, k: i64) -> Rat {
        let f = k.rem_euclid(self.modulus as i64) as usize;
        let mut x = vec![Rat::zero(); self.polys[f].nvars()];
        x[self.var] = Rat::from_int(k);
        self.polys[f].eval(&x).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Vec<String> {
        vec!["k".into()]
    }

    /// k^2/2 + k + 3/4 + (-1)^k/4
    fn simple() -> QuasiPolynomial {
        let mut p = QuasiPolynomial::zero(k());
        let poly = MPoly::from_terms(1, [(vec![2], Rat::new(1, 2)), (vec![1], Rat::one()), (vec![0], Rat::new(3, 4))]);
        p.add_term(1, &[0], &poly.map_coeffs(|c| CycloRat::from_rat(1, c.clone())));
        p.add_term(2, &[1], &MPoly::constant(1, CycloRat::from_rat(1, Rat::new(1, 4))));
        p.canonicalize();
        p
    }

    #[test]
    fn simple_example() {
        let p = simple();
        assert_eq!(p.evaluate(&[2]).unwrap(), Rat::from_int(5));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.set_of_periods(), BTreeSet::from([1, 2]));
        let cf = p.to_coset_form(0).unwrap();
        assert_eq!(cf.modulus, 2);
        let even = MPoly::from_terms(1, [(vec![2], Rat::new(1, 2)), (vec![1], Rat::one()), (vec![0], Rat::one())]);
        let odd = MPoly::from_terms(1, [(vec![2], Rat::new(1, 2)), (vec![1], Rat::one()), (vec![0], Rat::new(1, 2))]);
        assert_eq!(cf.polys, vec![even, odd]);
    }

    #[test]
    fn zero_and_constant() {
        let z = QuasiPolynomial::zero(k());
        assert_eq!(z.degree(), None);
        let one = QuasiPolynomial::from_poly(k(), &MPoly::constant(1, Rat::one()));
        assert_eq!(one.evaluate(&[17]).unwrap(), Rat::one());
        let cf = one.to_coset_form(0).unwrap();
        assert_eq!(cf.modulus, 1);
        let gf = one.generating_function().unwrap();
        assert_eq!(gf.denominator_exponents, vec![1]);
    }

    #[test]
    fn even_indicator_gf() {
        let mut p = QuasiPolynomial::zero(k());
        let half = MPoly::constant(1, CycloRat::from_rat(1, Rat::new(1, 2)));
        p.add_term(1, &[0], &half);
        p.add_term(2, &[1], &half);
        let gf = p.generating_function().unwrap();
        assert_eq!(gf.denominator_exponents, vec![2]);
        assert_eq!(gf.numerator, vec![Rat::one()]);
    }

    #[test]
    fn json_roundtrip() {
        let p = simple();
        let back = QuasiPolynomial::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        // a genuinely cyclotomic piece: zeta_3^k + zeta_3^{2k}
        let mut c = QuasiPolynomial::zero(k());
        c.add_term(3, &[1], &MPoly::constant(1, CycloRat::one(3)));
        c.add_term(3, &[2], &MPoly::constant(1, CycloRat::one(3)));
        c.canonicalize();
        let vals: Vec<Rat> = (0..6).map(|i| c.evaluate(&[i]).unwrap()).collect();
        assert_eq!(vals, [2, -1, -1, 2, -1, -1].map(Rat::from_int));
        assert_eq!(QuasiPolynomial::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn non_rational_value_is_a_fault() {
        let mut c = QuasiPolynomial::zero(k());
        c.add_term(3, &[1], &MPoly::constant(1, CycloRat::one(3)));
        assert!(matches!(c.evaluate(&[1]), Err(KronError::Representation(_))));
    }

    #[test]
    fn canonical_modulus_shrinks() {
        let mut p = QuasiPolynomial::zero(k());
        p.add_term(6, &[3], &MPoly::constant(1, CycloRat::one(6)));
        p.canonicalize();
        assert_eq!(p.modulus(), 2);
        assert_eq!(p.evaluate(&[1]).unwrap(), Rat::from_int(-1));
    }
}
