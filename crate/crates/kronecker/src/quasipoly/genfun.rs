//! Rational generating functions `N(t) / prod (1 - t^a_i)`.

use crate::exact::{cyclotomic_poly, Rat};
use std::collections::BTreeMap;

/// Dense univariate polynomial, lowest degree first.
pub type UPoly = Vec<Rat>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn upoly_mul(a: &[Rat], b: &[Rat]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j].add_mul(x, y);
        }
    }
    trim(&mut r);
    r
}

/// Multiplies by `1 - t^a`.
fn mul_one_minus(p: &[Rat], a: usize) -> UPoly {
    let mut r = vec![Rat::zero(); p.len() + a];
    for (i, x) in p.iter().enumerate() {
        r[i] += x;
        r[i + a] -= x;
    }
    trim(&mut r);
    r
}

/// Divides by a monic integer polynomial; `None` if the remainder is nonzero.
fn div_exact_monic(p: &[Rat], d: &[i64]) -> Option<UPoly> {
    let dd = d.len() - 1;
    if p.is_empty() {
        return Some(vec![]);
    }
    if p.len() <= dd {
        return None;
    }
    let mut rem = p.to_vec();
    let mut q = vec![Rat::zero(); p.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &dj) in d.iter().enumerate() {
            if dj != 0 {
                rem[i + j] -= &(&c * &Rat::from_int(dj));
            }
        }
        q[i] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalGF {
    pub numerator: UPoly,
    pub denominator_exponents: Vec<u32>,
}

impl RationalGF {
    /// Builds the generating function of a sequence `p(k)` given by a quasi-polynomial
    /// of the given degree and period, from its first `period * (degree + 1)` values.
    pub fn from_values(values: &[Rat], period: u32, degree: u32) -> RationalGF {
        let q = period as usize;
        let e = degree as usize + 1;
        let n = q * e;
        assert!(values.len() >= n);
        // N = (1 - t^q)^e * sum_{k<n} p(k) t^k, truncated below degree n
        let mut num: UPoly = values[..n].to_vec();
        for _ in 0..e {
            num = mul_one_minus(&num, q);
        }
        num.truncate(n);
        trim(&mut num);
        let mut mult: BTreeMap<u32, u32> = divisors(period).into_iter().map(|d| (d, e as u32)).collect();
        if num.is_empty() {
            return RationalGF { numerator: vec![], denominator_exponents: vec![] };
        }
        for (&d, m) in mult.iter_mut() {
            while *m > 0 {
                match div_exact_monic(&num, cyclotomic_poly(d)) {
                    Some(r) => {
                        num = r;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        mult.retain(|_, m| *m > 0);
        // (1 - t^q)^e = (-1)^e prod Phi_d^e; keep the denominator as a plain product of Phi_d
        if e % 2 == 1 {
            num = num.into_iter().map(|c| -c).collect();
        }
        choose_shape(num, &mult)
    }

    /// Taylor coefficients at `t = 0` up to degree `n` inclusive.
    pub fn series(&self, n: usize) -> Vec<Rat> {
        let mut s: Vec<Rat> = (0..=n).map(|i| self.numerator.get(i).cloned().unwrap_or_default()).collect();
        for &a in &self.denominator_exponents {
            let a = a as usize;
            for i in a..=n {
                let prev = s[i - a].clone();
                s[i] += &prev;
            }
        }
        s
    }

    /// Equality as rational functions.
    pub fn same_function(&self, o: &RationalGF) -> bool {
        let mut l = self.numerator.clone();
        for &a in &o.denominator_exponents {
            l = mul_one_minus(&l, a as usize);
        }
        let mut r = o.numerator.clone();
        for &a in &self.denominator_exponents {
            r = mul_one_minus(&r, a as usize);
        }
        l == r
    }

    pub fn numerator_is_palindromic(&self) -> bool {
        let n = &self.numerator;
        let lo = n.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let body = &n[lo..];
        body.iter().eq(body.iter().rev())
    }

    /// Integer numerator coefficients are emitted as numbers, anything else as `"p/q"`.
    pub fn to_json(&self) -> serde_json::Value {
        let num: Vec<serde_json::Value> = self
            .numerator
            .iter()
            .map(|c| match c.to_i64() {
                Some(i) => serde_json::json!(i),
                None => serde_json::json!(c.to_string()),
            })
            .collect();
        serde_json::json!({ "numerator": num, "denominator_exponents": self.denominator_exponents })
    }

    pub fn pretty(&self) -> String {
        let mut num = Vec::new();
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let cs = c.pretty();
            num.push(match (m.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => m,
                (false, "-1") => format!("-{m}"),
                _ => format!("{cs}*{m}"),
            });
        }
        let num = if num.is_empty() { "0".to_string() } else { num.join("+").replace("+-", "-") };
        if self.denominator_exponents.is_empty() {
            return num;
        }
        let mut den = String::new();
        let mut i = 0;
        let e = &self.denominator_exponents;
        while i < e.len() {
            let j = e[i..].iter().take_while(|&&x| x == e[i]).count();
            den.push_str(&if e[i] == 1 { "(1-t)".to_string() } else { format!("(1-t^{})", e[i]) });
            if j > 1 {
                den.push_str(&format!("^{j}"));
            }
            i += j;
        }
        let num = if num.contains(['+', '-']) { format!("({num})") } else { num };
        format!("{num}/({den})")
    }
}

/// Picks denominator exponents covering the reduced cyclotomic denominator, preferring the
/// smallest total degree whose numerator has nonnegative coefficients.
fn choose_shape(num: UPoly, mult: &BTreeMap<u32, u32>) -> RationalGF {
    let count = mult.get(&1).copied().unwrap_or(0) as usize;
    let l = mult.keys().fold(1u32, |a, &b| num_integer::lcm(a, b));
    let cands = divisors(l);
    let mut shapes: Vec<Vec<u32>> = Vec::new();
    let mut cur = Vec::new();
    enumerate_multisets(&cands, 0, count, &mut cur, &mut shapes);
    shapes.retain(|s| mult.iter().all(|(&d, &m)| s.iter().filter(|&&a| a % d == 0).count() >= m as usize));
    shapes.sort_by_key(|s| (s.iter().sum::<u32>(), s.clone()));
    let mut fallback = None;
    for s in shapes {
        let Some(n) = numerator_for(&num, mult, &s) else { continue };
        if n.iter().all(|c| !c.is_negative()) {
            return RationalGF { numerator: n, denominator_exponents: s };
        }
        if fallback.is_none() {
            fallback = Some(RationalGF { numerator: n, denominator_exponents: s });
        }
    }
    fallback.unwrap_or_else(|| {
        // no covering of the right length; use (1 - t^l)^count
        let s = vec![l; count];
        let n = numerator_for(&num, mult, &s).expect("(1-t^l) covers all cyclotomic factors");
        RationalGF { numerator: n, denominator_exponents: s }
    })
}

fn enumerate_multisets(c: &[u32], from: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..c.len() {
        cur.push(c[i]);
        enumerate_multisets(c, i, left - 1, cur, out);
        cur.pop();
    }
}

fn numerator_for(num: &UPoly, mult: &BTreeMap<u32, u32>, shape: &[u32]) -> Option<UPoly> {
    let mut n = num.clone();
    for &a in shape {
        n = mul_one_minus(&n, a as usize);
    }
    for (&d, &m) in mult {
        for _ in 0..m {
            n = div_exact_monic(&n, cyclotomic_poly(d))?;
        }
    }
    Some(n)
}
