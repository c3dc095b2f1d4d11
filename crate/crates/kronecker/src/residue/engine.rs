//! Fast iterated residues of products of exponential factors.
//!
//! In sigma-coordinates the function is `Q(z) * h(z)` where `Q` collects the principal
//! parts `l^{-n}` of the `zeta = 1` factors and `h` is holomorphic. `Q` is expanded in
//! the iterated regime `|z_r| << ... << |z_1|`, keeping only terms that can reach
//! `z^{(-1,...,-1)}`. `h` is computed as `exp(log h)` on the downward closure of the
//! needed exponents.

use super::series::{factorial_rat, log_one_minus_zeta_exp, log_todd};
use crate::error::{KronError, Result};
use crate::exact::{binomial, Coeff, Rat};
use std::collections::HashMap;

pub const MAXR: usize = 8;
pub type Exp = [i16; MAXR];

fn deg(e: &Exp) -> i32 {
    e.iter().map(|&x| x as i32).sum()
}

fn lead(c: &[Rat]) -> Option<usize> {
    c.iter().position(|x| !x.is_zero())
}

/// Laurent expansion of `prod l_f^{-n_f}` restricted to monomials with every exponent
/// `<= -1`. Factors are `(sigma-coordinates, n)`; `n < 0` is a polynomial factor.
pub fn q_expand(r: usize, factors: &[(Vec<Rat>, i32)]) -> Result<Vec<(Exp, Rat)>> {
    if r > MAXR {
        return Err(KronError::ResourceCap(format!("dimension {r} exceeds {MAXR}")));
    }
    let mut fs: Vec<(usize, &Vec<Rat>, i32)> = Vec::with_capacity(factors.len());
    for (c, n) in factors {
        if *n == 0 {
            continue;
        }
        let l = lead(c).ok_or_else(|| KronError::InvalidInput("identically singular factor".into()))?;
        fs.push((l, c, *n));
    }
    fs.sort_by_key(|f| f.0);
    let total: i32 = fs.iter().map(|f| f.2).sum();
    if total < r as i32 {
        return Ok(vec![]);
    }
    // rem[k][l]: sum of n over fs[k..] with lead >= l
    let mut rem = vec![vec![0i32; r + 1]; fs.len() + 1];
    for k in (0..fs.len()).rev() {
        for l in 0..r {
            rem[k][l] = rem[k + 1][l] + if fs[k].0 >= l { fs[k].2 } else { 0 };
        }
    }
    let need = |l: usize| -((r - l) as i32);
    let mut cur: HashMap<Exp, Rat> = HashMap::new();
    cur.insert([0; MAXR], Rat::one());
    let mut finalized = 0usize;
    for (k, &(j0, c, n)) in fs.iter().enumerate() {
        // variables below the lead can no longer change
        if j0 > finalized {
            cur.retain(|e, _| e[finalized..j0].iter().all(|&x| x <= -1));
            finalized = j0;
        }
        let nrem = &rem[k + 1];
        let lead_pow = c[j0].pow(-n);
        let ratios: Vec<Rat> = (0..r).map(|j| if j > j0 { &c[j] / &c[j0] } else { Rat::zero() }).collect();
        let maxm = total.max(0) as usize + 1;
        let pows: Vec<Vec<Rat>> = ratios
            .iter()
            .map(|x| {
                let mut v = vec![Rat::one()];
                for i in 1..=maxm {
                    let nx = &v[i - 1] * x;
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut next: HashMap<Exp, Rat> = HashMap::with_capacity(cur.len() * 2);
        let mut comp = vec![0i32; r];
        for (e, coef) in &cur {
            // tails at or below the lead only see the degree -n
            let mut t = 0i32;
            let mut tails = vec![0i32; r + 1];
            for l in (0..r).rev() {
                t += e[l] as i32;
                tails[l] = t;
            }
            if (0..=j0).any(|l| tails[l] - n - nrem[l] > need(l)) {
                continue;
            }
            let allow: Vec<i32> = (0..r).map(|l| if l > j0 { need(l) + nrem[l] - tails[l] } else { 0 }).collect();
            if (j0 + 1..r).any(|l| allow[l] < 0) {
                continue;
            }
            let base = coef * &lead_pow;
            let mmax = if n < 0 { (-n) as i32 } else { i32::MAX };
            enum_comp(r, j0, r - 1, 0, mmax, &allow, &ratios, &mut comp, &mut |comp: &[i32], m: i32| {
                let mut x = &base * &binomial(-n as i64, m as u32);
                let mut ne = *e;
                ne[j0] -= (n + m) as i16;
                let mut multi = factorial_rat(m as usize);
                for j in j0 + 1..r {
                    let mj = comp[j];
                    if mj > 0 {
                        x = &x * &pows[j][mj as usize];
                        multi = &multi / &factorial_rat(mj as usize);
                        ne[j] += mj as i16;
                    }
                }
                x = &x * &multi;
                let slot = next.entry(ne).or_insert_with(Rat::zero);
                *slot += &x;
            });
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
    }
    let mut out: Vec<(Exp, Rat)> = cur.into_iter().filter(|(e, _)| e[..r].iter().all(|&x| x <= -1)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enum_comp(
    r: usize,
    j0: usize,
    j: usize,
    sum: i32,
    mmax: i32,
    allow: &[i32],
    ratios: &[Rat],
    comp: &mut [i32],
    f: &mut impl FnMut(&[i32], i32),
) {
    if j == j0 {
        f(comp, sum);
        return;
    }
    let cap = (allow[j] - sum).min(mmax - sum);
    let hi = if ratios[j].is_zero() { 0 } else { cap.max(0) };
    if cap < 0 {
        return;
    }
    for m in 0..=hi {
        comp[j] = m;
        enum_comp(r, j0, j - 1, sum + m, mmax, allow, ratios, comp, f);
    }
    comp[j] = 0;
}

/// Downward closed set of exponents, sorted by degree.
pub struct Closure {
    pub items: Vec<Exp>,
    pub index: HashMap<Exp, usize>,
    /// For nonzero items: (index of item minus `e_j`, j) with j the first nonzero slot.
    pub pred: Vec<(usize, usize)>,
}

impl Closure {
    pub fn new(r: usize, targets: impl IntoIterator<Item = Exp>) -> Closure {
        let mut seen: std::collections::HashSet<Exp> = std::collections::HashSet::new();
        let mut stack: Vec<Exp> = targets.into_iter().collect();
        stack.push([0; MAXR]);
        while let Some(e) = stack.pop() {
            if !seen.insert(e) {
                continue;
            }
            for j in 0..r {
                if e[j] > 0 {
                    let mut d = e;
                    d[j] -= 1;
                    if !seen.contains(&d) {
                        stack.push(d);
                    }
                }
            }
        }
        let mut items: Vec<Exp> = seen.into_iter().collect();
        items.sort_by(|a, b| deg(a).cmp(&deg(b)).then(a.cmp(b)));
        let index: HashMap<Exp, usize> = items.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let pred = items
            .iter()
            .map(|e| match e.iter().position(|&x| x > 0) {
                Some(j) => {
                    let mut d = *e;
                    d[j] -= 1;
                    (index[&d], j)
                }
                None => (0, 0),
            })
            .collect();
        Closure { items, index, pred }
    }

    pub fn max_degree(&self) -> usize {
        self.items.last().map(|e| deg(e) as usize).unwrap_or(0)
    }

    /// `|beta|!/beta! * c^beta` for every item.
    pub fn monomials(&self, c: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::one(); self.items.len()];
        for i in 1..self.items.len() {
            let (p, j) = self.pred[i];
            if c[j].is_zero() || out[p].is_zero() {
                out[i] = Rat::zero();
                continue;
            }
            let e = &self.items[i];
            out[i] = &(&out[p] * &c[j]) * &Rat::new(deg(e) as i64, e[j] as i64);
        }
        out
    }
}

/// A factor `(1 - zeta e^{-l})^{-n}` in sigma-coordinates; `zeta = None` means 1.
#[derive(Clone, Debug)]
pub struct ExpFactor<C> {
    pub coords: Vec<Rat>,
    pub zeta: Option<C>,
    pub n: i32,
}

/// Everything needed to pair the expansion with a numerator exponential.
pub struct Prepared<C> {
    pub q: Vec<(Exp, Rat)>,
    pub closure: Closure,
    /// Coefficients of `h` (including `e^{<shift,z>}`) on the closure.
    pub h: Vec<C>,
    /// Constant `prod_{zeta != 1} (1 - zeta)^{-n}`.
    pub constant: C,
}

/// Build `Q` and `h` for `prod factors * e^{<shift, z>}`.
pub fn prepare<C: Coeff>(r: usize, factors: &[ExpFactor<C>], shift: &[Rat], one: &C) -> Result<Prepared<C>> {
    let poles: Vec<(Vec<Rat>, i32)> =
        factors.iter().filter(|f| f.zeta.is_none()).map(|f| (f.coords.clone(), f.n)).collect();
    let q = q_expand(r, &poles)?;
    let targets = q.iter().map(|(e, _)| {
        let mut t = [0i16; MAXR];
        for j in 0..r {
            t[j] = -1 - e[j];
        }
        t
    });
    let closure = Closure::new(r, targets);
    let d = closure.max_degree();
    let len = closure.items.len();
    let mut lr = vec![Rat::zero(); len];
    let mut lc: Option<Vec<C>> = None;
    let mut constant = one.clone();
    let todd = log_todd(d);
    for f in factors {
        if f.n == 0 {
            continue;
        }
        let mono = closure.monomials(&f.coords);
        match &f.zeta {
            None => {
                let w = Rat::from_int(f.n as i64);
                for i in 1..len {
                    let s = &todd[deg(&closure.items[i]) as usize];
                    if !s.is_zero() && !mono[i].is_zero() {
                        lr[i] += &(&(s * &w) * &mono[i]);
                    }
                }
            }
            Some(z) => {
                let mut om = one.clone();
                om.csub(z);
                if om.cis_zero() {
                    return Err(KronError::InvalidInput("root of unity equal to one in a regular factor".into()));
                }
                let inv = om.cinv();
                let p = if f.n > 0 { inv.clone() } else { om.clone() };
                for _ in 0..f.n.abs() {
                    constant = constant.cmul(&p);
                }
                let g = log_one_minus_zeta_exp(z, d);
                let w = Rat::from_int(-(f.n as i64));
                let lc = lc.get_or_insert_with(|| vec![one.zero_like(); len]);
                for i in 1..len {
                    if mono[i].is_zero() {
                        continue;
                    }
                    let s = &g[deg(&closure.items[i]) as usize];
                    lc[i].cadd(&s.cmul_rat(&(&w * &mono[i])));
                }
            }
        }
    }
    for (j, s) in shift.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let mut e = [0i16; MAXR];
        e[j] = 1;
        if let Some(&i) = closure.index.get(&e) {
            lr[i] += s;
        }
    }
    let l: Vec<C> = match lc {
        Some(mut lc) => {
            for (a, b) in lc.iter_mut().zip(&lr) {
                if !b.is_zero() {
                    a.cadd(&one.from_rat_like(b));
                }
            }
            lc
        }
        None => lr.iter().map(|b| one.from_rat_like(b)).collect(),
    };
    let h = exp_on_closure(r, &closure, &l, one);
    Ok(Prepared { q, closure, h, constant })
}

/// `exp(L)` on a downward closed set, via `|b| E_b = sum_{g <= b} |g| L_g E_{b-g}`.
pub fn exp_on_closure<C: Coeff>(r: usize, cl: &Closure, l: &[C], one: &C) -> Vec<C> {
    let n = cl.items.len();
    let mut e: Vec<C> = Vec::with_capacity(n);
    e.push(one.clone());
    let nz: Vec<bool> = l.iter().map(|x| !x.cis_zero()).collect();
    let mut g = [0i16; MAXR];
    for i in 1..n {
        let b = cl.items[i];
        let mut acc = one.zero_like();
        // iterate g <= b, g != 0
        g[..r].iter_mut().for_each(|x| *x = 0);
        loop {
            let mut j = 0;
            while j < r {
                if g[j] < b[j] {
                    g[j] += 1;
                    break;
                }
                g[j] = 0;
                j += 1;
            }
            if j == r {
                break;
            }
            let gi = cl.index[&g];
            if !nz[gi] {
                continue;
            }
            let mut rest = b;
            for k in 0..r {
                rest[k] -= g[k];
            }
            let ri = cl.index[&rest];
            acc.cadd(&l[gi].cmul(&e[ri]).cmul_rat(&Rat::from_int(deg(&g) as i64)));
        }
        e.push(acc.cmul_rat(&Rat::new(1, deg(&b) as i64)));
    }
    e
}

fn target(e: &Exp, r: usize) -> Exp {
    let mut t = [0i16; MAXR];
    for j in 0..r {
        t[j] = -1 - e[j];
    }
    t
}

impl<C: Coeff> Prepared<C> {
    /// `sum_t Q_t h_t`, times the constant.
    pub fn pair_constant(&self, r: usize, one: &C) -> C {
        let mut acc = one.zero_like();
        for (e, qv) in &self.q {
            let i = self.closure.index[&target(e, r)];
            acc.cadd(&self.h[i].cmul_rat(qv));
        }
        acc.cmul(&self.constant)
    }

    /// Residue of `Q h e^{k <a, z>}` as a polynomial in `k` (coefficient list).
    pub fn pair_dilated(&self, r: usize, a: &[Rat], one: &C) -> Vec<C> {
        let d = self.closure.max_degree();
        let mut out = vec![one.zero_like(); d + 1];
        let mut pows: Vec<Vec<Rat>> = Vec::new();
        for x in a.iter().take(r) {
            let mut v = vec![Rat::one()];
            for i in 1..=d {
                let nx = &(&v[i - 1] * x) * &Rat::new(1, i as i64);
                v.push(nx);
            }
            pows.push(v);
        }
        // coefficient sums by (target, degree) to limit field operations
        for (e, qv) in &self.q {
            let t = target(e, r);
            let mut acc: Vec<C> = vec![one.zero_like(); d + 1];
            let mut used = vec![false; d + 1];
            let mut b = [0i16; MAXR];
            loop {
                let mut w = qv.clone();
                let mut md = 0usize;
                for j in 0..r {
                    let m = (t[j] - b[j]) as usize;
                    md += m;
                    if m > 0 {
                        w = &w * &pows[j][m];
                    }
                }
                if !w.is_zero() {
                    let bi = self.closure.index[&b];
                    acc[md].cadd(&self.h[bi].cmul_rat(&w));
                    used[md] = true;
                }
                let mut j = 0;
                while j < r {
                    if b[j] < t[j] {
                        b[j] += 1;
                        break;
                    }
                    b[j] = 0;
                    j += 1;
                }
                if j == r {
                    break;
                }
            }
            for (k, v) in acc.into_iter().enumerate() {
                if used[k] {
                    out[k].cadd(&v);
                }
            }
        }
        out.into_iter().map(|c| c.cmul(&self.constant)).collect()
    }

    /// Residue of `Q h e^{<a, z>}` as a polynomial in `a = (a_1..a_r)`:
    /// list of `(exponent of a, coefficient)`.
    pub fn pair_symbolic(&self, r: usize, one: &C) -> Vec<(Exp, C)> {
        let mut acc: HashMap<Exp, C> = HashMap::new();
        for (e, qv) in &self.q {
            let t = target(e, r);
            let mut m = [0i16; MAXR];
            loop {
                let mut rest = t;
                for j in 0..r {
                    rest[j] -= m[j];
                }
                let hi = self.closure.index[&rest];
                let term = self.h[hi].cmul_rat(qv);
                if !term.cis_zero() {
                    acc.entry(m).or_insert_with(|| one.zero_like()).cadd(&term);
                }
                let mut j = 0;
                while j < r {
                    if m[j] < t[j] {
                        m[j] += 1;
                        break;
                    }
                    m[j] = 0;
                    j += 1;
                }
                if j == r {
                    break;
                }
            }
        }
        let mut out: Vec<(Exp, C)> = acc
            .into_iter()
            .filter(|(_, c)| !c.cis_zero())
            .map(|(m, c)| {
                let f = m[..r].iter().fold(Rat::one(), |a, &x| &a * &factorial_rat(x as usize));
                (m, c.cmul_rat(&f.inv()).cmul(&self.constant))
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}
