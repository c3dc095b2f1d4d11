//! Branching multiplicities of U(M) restricted to a product of SU factors, assembled as a
//! quasi-polynomial: a sum over Weyl cosets, lattice shifts `gamma` and OS bases of
//! iterated residues.

use crate::error::{KronError, Result};
use crate::exact::{Coeff, CycloRat, Rat};
use crate::linalg::{dot, IVec};
use crate::osbases::{os_bases_adapted, OSBasis};
use crate::par;
use crate::quasipoly::{MPoly, QuasiPolynomial};
use crate::residue::{
    epsilon_constant_term, iterated_residue, iterated_residue_dilated, iterated_residue_symbolic, EpsFactor,
    FactoredFunction,
};
use crate::rootdata::{Deformation, Mask, RestrictedRootData};
use num_integer::Integer;
use std::collections::{BTreeMap, HashMap};

/// Restrictions of `w(Delta_u)` made positive on `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedSystem {
    /// Indices into `data.vectors`, with multiplicity.
    pub roots: Vec<usize>,
    /// Number of flipped forms.
    pub flips: usize,
    /// Sum of the flipped forms `w(alpha)` (before negation).
    pub shift: IVec,
    /// Roots `(a, b)` of `Delta_u` with `w(e_a - e_b)` restricting to zero.
    pub zero: Vec<(usize, usize)>,
}

impl PolarizedSystem {
    pub fn sign(&self) -> i64 {
        if self.flips % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Polarizes what it can and lists the zero restrictions separately.
pub fn polarize_partial(data: &RestrictedRootData, w: &[u8]) -> PolarizedSystem {
    let mut roots = Vec::with_capacity(data.delta_u.len());
    let mut flips = 0;
    let mut shift = vec![0; data.r];
    let mut zero = Vec::new();
    for &(a, b) in &data.delta_u {
        let v = data.w_root(w, a, b);
        if v.iter().all(|&x| x == 0) {
            zero.push((a, b));
            continue;
        }
        if dot(&v, &data.y) > 0 {
            roots.push(data.vector_index(&v).expect("restricted root"));
        } else {
            flips += 1;
            for (s, x) in shift.iter_mut().zip(&v) {
                *s += x;
            }
            let neg: IVec = v.iter().map(|x| -x).collect();
            roots.push(data.vector_index(&neg).expect("restricted root"));
        }
    }
    PolarizedSystem { roots, flips, shift, zero }
}

pub fn polarize(data: &RestrictedRootData, w: &[u8]) -> Result<PolarizedSystem> {
    let sys = polarize_partial(data, w);
    if !sys.zero.is_empty() {
        return Err(KronError::InvalidInput(format!(
            "{} roots restrict to zero under this coset; the epsilon-limit path is required",
            sys.zero.len()
        )));
    }
    Ok(sys)
}

/// `roots` minus `Delta_kappa^+` (as lists), keeping `psi` with `<psi, gamma> = 0 mod q`.
pub fn pole_filter(data: &RestrictedRootData, roots: &[usize], gamma: &[i64], q: u32) -> Vec<usize> {
    let mut remove: HashMap<usize, usize> = HashMap::new();
    for &k in &data.kappa_plus {
        *remove.entry(k).or_default() += 1;
    }
    let mut out = Vec::new();
    for &i in roots {
        if let Some(c) = remove.get_mut(&i) {
            if *c > 0 {
                *c -= 1;
                continue;
            }
        }
        if dot(&data.vectors[i], gamma).rem_euclid(q as i64) == 0 {
            out.push(i);
        }
    }
    out
}

/// What the residues are evaluated as.
#[derive(Clone, Debug)]
pub enum Mode {
    /// The value at `(lambda0, mu0)`.
    Numeric,
    /// `k -> m(k lambda0, k mu0)`, in the variable `k`.
    Dilated,
    /// Linear parametrization `lambda_i = sum_l lambda[i][l] x_l`, `mu_c = sum_l mu[c][l] x_l`.
    Symbolic { vars: Vec<String>, lambda: Vec<IVec>, mu: Vec<IVec> },
}

impl Mode {
    /// Variables `l1..l{n1}` for `lambda` and `m1..m{r}` for the coordinates of `mu`.
    pub fn symbolic_default(data: &RestrictedRootData) -> Mode {
        let n1 = data.sig.n1;
        let nv = n1 + data.r;
        let unit = |i: usize| {
            let mut v = vec![0; nv];
            v[i] = 1;
            v
        };
        let mut vars: Vec<String> = (1..=n1).map(|i| format!("l{i}")).collect();
        vars.extend((1..=data.r).map(|i| format!("m{i}")));
        Mode::Symbolic { vars, lambda: (0..n1).map(unit).collect(), mu: (n1..nv).map(unit).collect() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BranchOptions {
    /// Use the epsilon-limit construction on every coset, not only where restrictions vanish.
    pub force_epsilon: bool,
    /// Disable the parallel reduction.
    pub sequential: bool,
}

/// Counters from one evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchStats {
    pub cosets: usize,
    pub residues: usize,
    pub epsilon_cosets: usize,
}

enum Kind {
    Constant,
    Dilated,
    Symbolic,
}

struct Param {
    vars: Vec<String>,
    kind: Kind,
    /// `n1 x nv` and `r x nv` integer matrices, plus constant parts.
    lam: Vec<IVec>,
    mu: Vec<IVec>,
    lam_c: IVec,
    mu_c: IVec,
}

impl Param {
    fn nv(&self) -> usize {
        self.vars.len()
    }
}

/// Coefficient rings usable for one gamma class.
trait Field: Coeff {
    fn unit(order: u32) -> Self;
    fn zeta(order: u32, e: i64) -> Self;
}

impl Field for Rat {
    fn unit(_: u32) -> Rat {
        Rat::one()
    }
    fn zeta(order: u32, e: i64) -> Rat {
        debug_assert_eq!(e.rem_euclid(order as i64), 0);
        Rat::one()
    }
}

impl Field for CycloRat {
    fn unit(order: u32) -> CycloRat {
        CycloRat::one(order)
    }
    fn zeta(order: u32, e: i64) -> CycloRat {
        CycloRat::zeta_pow(order, e)
    }
}

/// One summand of the coset function: `coeff(x) e^{<shift, z>} prod (1 - e^{-v})^{-n}`.
struct CosetTerm {
    coeff: MPoly<Rat>,
    shift: IVec,
    mult: BTreeMap<usize, i32>,
}

type Acc = HashMap<(usize, Vec<i64>), MPoly<CycloRat>>;

fn merge(mut a: (Acc, BranchStats), b: (Acc, BranchStats)) -> (Acc, BranchStats) {
    let (small, large) = if a.0.len() < b.0.len() { (a, b) } else { (b, a) };
    a = large;
    for (k, p) in small.0 {
        match a.0.get_mut(&k) {
            Some(e) => e.add_assign(&p),
            None => {
                a.0.insert(k, p);
            }
        }
    }
    a.1.cosets += small.1.cosets;
    a.1.residues += small.1.residues;
    a.1.epsilon_cosets += small.1.epsilon_cosets;
    a
}

/// `Y_1` on positions: mixed radix of the tensor indices of the factors not in `K`.
pub fn y1(data: &RestrictedRootData) -> IVec {
    data.positions
        .iter()
        .map(|p| {
            let mut acc = 0i64;
            let mut stride = 1i64;
            for (j, &n) in data.sig.factors.iter().enumerate() {
                if !data.sig.kept[j] {
                    acc += p[j] as i64 * stride;
                    stride *= n as i64;
                }
            }
            acc
        })
        .collect()
}

fn check_input(data: &RestrictedRootData, lambda0: &[i64], mu0: &[i64]) -> Result<IVec> {
    let n1 = data.sig.n1;
    if lambda0.len() > n1 {
        return Err(KronError::InvalidInput(format!("lambda has {} entries, expected at most {n1}", lambda0.len())));
    }
    if mu0.len() != data.r {
        return Err(KronError::InvalidInput(format!("mu has {} coordinates, expected {}", mu0.len(), data.r)));
    }
    let mut lam = lambda0.to_vec();
    lam.resize(n1, 0);
    let mut padded = lam.clone();
    padded.resize(data.m, 0);
    if padded.windows(2).any(|x| x[0] < x[1]) {
        return Err(KronError::InvalidInput("lambda is not dominant".into()));
    }
    let mut start = 0;
    for &b in &data.sig.blocks {
        if padded[start..start + b].iter().any(|&x| x != padded[start]) {
            return Err(KronError::InvalidInput("lambda is not constant on the Sigma blocks".into()));
        }
        start += b;
    }
    // the known parts of each kept diagram must be weakly decreasing
    let mut prev: Option<(usize, i64, i64)> = None;
    for (c, &(j, _)) in data.coords.iter().enumerate() {
        let part = match prev {
            Some((pj, pm, _)) if pj == j => mu0[c] - pm,
            _ => mu0[c],
        };
        if let Some((pj, _, pp)) = prev {
            if pj == j && part > pp {
                return Err(KronError::InvalidInput("mu is not dominant".into()));
            }
        }
        prev = Some((j, mu0[c], part));
    }
    Ok(lam)
}

/// The branching quasi-polynomial for the tope of `(lambda0, mu0) + (epsilon, delta)`.
/// `lambda0` is a U(M) highest weight supported on the first `n1` coordinates and `mu0`
/// is given in the coordinates of `E` (partial sums per kept factor).
pub fn branch_quasipoly(
    data: &RestrictedRootData,
    lambda0: &[i64],
    mu0: &[i64],
    deformation: &Deformation,
    mode: &Mode,
    opts: &BranchOptions,
) -> Result<QuasiPolynomial> {
    branch_quasipoly_stats(data, lambda0, mu0, deformation, mode, opts).map(|x| x.0)
}

pub fn branch_quasipoly_stats(
    data: &RestrictedRootData,
    lambda0: &[i64],
    mu0: &[i64],
    deformation: &Deformation,
    mode: &Mode,
    opts: &BranchOptions,
) -> Result<(QuasiPolynomial, BranchStats)> {
    let n1 = data.sig.n1;
    let lam0 = check_input(data, lambda0, mu0)?;
    if deformation.epsilon.len() != n1 || deformation.delta.len() != data.r {
        return Err(KronError::InvalidInput("deformation does not match the signature".into()));
    }
    let param = match mode {
        Mode::Numeric => {
            Param { vars: vec![], kind: Kind::Constant, lam: vec![vec![]; n1], mu: vec![vec![]; data.r], lam_c: lam0.clone(), mu_c: mu0.to_vec() }
        }
        Mode::Dilated => Param {
            vars: vec!["k".into()],
            kind: Kind::Dilated,
            lam: lam0.iter().map(|&x| vec![x]).collect(),
            mu: mu0.iter().map(|&x| vec![x]).collect(),
            lam_c: vec![0; n1],
            mu_c: vec![0; data.r],
        },
        Mode::Symbolic { vars, lambda, mu } => {
            let nv = vars.len();
            if lambda.len() != n1 || mu.len() != data.r || lambda.iter().chain(mu).any(|row| row.len() != nv) {
                return Err(KronError::InvalidInput("symbolic parametrization has the wrong shape".into()));
            }
            Param {
                vars: vars.clone(),
                kind: Kind::Symbolic,
                lam: lambda.clone(),
                mu: mu.clone(),
                lam_c: vec![0; n1],
                mu_c: vec![0; data.r],
            }
        }
    };
    let lam1: Vec<Rat> = lam0.iter().zip(&deformation.epsilon).map(|(&l, e)| &Rat::from_int(l) + e).collect();
    let mu1: Vec<Rat> = mu0.iter().zip(&deformation.delta).map(|(&m, d)| &Rat::from_int(m) + d).collect();
    let y1 = y1(data);
    let ctx = Ctx { data, param: &param, lam1: &lam1, mu1: &mu1, y1: &y1, force_epsilon: opts.force_epsilon };
    let identity = || (Acc::new(), BranchStats::default());
    let run = |w: &Vec<u8>| ctx.coset(w);
    let (acc, stats) = if opts.sequential {
        par::map_reduce_sequential(&data.cosets, identity, run, merge)?
    } else {
        par::map_reduce(&data.cosets, identity, run, merge)?
    };
    let mut qp = QuasiPolynomial::zero(param.vars.clone());
    let mut keys: Vec<_> = acc.into_iter().collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    for ((ci, key), poly) in keys {
        let order = data.gamma_classes[ci].order;
        if order == 1 {
            qp.add_term(1, &key, &poly);
            continue;
        }
        let o = order as i64;
        for j in (1..o).filter(|j| j.gcd(&o) == 1) {
            let k: Vec<i64> = key.iter().map(|x| (x * j).rem_euclid(o)).collect();
            qp.add_term(order, &k, &poly.map_coeffs(|c| c.galois(j)));
        }
    }
    qp.canonicalize();
    Ok((qp, stats))
}

/// Value of the branching multiplicity at `(lambda0, mu0)`.
pub fn branch_number(
    data: &RestrictedRootData,
    lambda0: &[i64],
    mu0: &[i64],
    deformation: &Deformation,
    opts: &BranchOptions,
) -> Result<Rat> {
    branch_quasipoly(data, lambda0, mu0, deformation, &Mode::Numeric, opts)?.evaluate(&[])
}

struct Ctx<'a> {
    data: &'a RestrictedRootData,
    param: &'a Param,
    lam1: &'a [Rat],
    mu1: &'a [Rat],
    y1: &'a [i64],
    force_epsilon: bool,
}

impl Ctx<'_> {
    fn coset(&self, w: &Vec<u8>) -> Result<(Acc, BranchStats)> {
        let data = self.data;
        let p = self.param;
        let nv = p.nv();
        let r = data.r;
        let mut stats = BranchStats { cosets: 1, ..Default::default() };
        // exponent w(lambda)-bar - mu = A x + b0
        let mut a = vec![vec![0i64; nv]; r];
        let mut b0 = vec![0i64; r];
        for i in 0..data.sig.n1 {
            let om = &data.omega[w[i] as usize];
            for c in 0..r {
                if om[c] != 0 {
                    for l in 0..nv {
                        a[c][l] += p.lam[i][l] * om[c];
                    }
                    b0[c] += p.lam_c[i] * om[c];
                }
            }
        }
        for c in 0..r {
            for l in 0..nv {
                a[c][l] -= p.mu[c][l];
            }
            b0[c] -= p.mu_c[c];
        }
        let mut xi = self.mu1.iter().map(|x| -x).collect::<Vec<Rat>>();
        for (i, l) in self.lam1.iter().enumerate() {
            for (x, &o) in xi.iter_mut().zip(&data.omega[w[i] as usize]) {
                if o != 0 {
                    *x += l;
                }
            }
        }

        let sys = polarize_partial(data, w);
        let mut terms = Vec::new();
        if sys.zero.is_empty() && !self.force_epsilon {
            let mut mult = BTreeMap::new();
            for &i in &sys.roots {
                *mult.entry(i).or_insert(0) += 1;
            }
            terms.push(CosetTerm { coeff: MPoly::constant(nv, Rat::from_int(sys.sign())), shift: sys.shift, mult });
        } else {
            stats.epsilon_cosets = 1;
            let factors: Vec<EpsFactor> = data
                .delta_u
                .iter()
                .map(|&(x, y)| EpsFactor {
                    v: data.w_root(w, x, y),
                    c: self.y1[w[x] as usize] - self.y1[w[y] as usize],
                })
                .collect();
            let mut l = MPoly::zero(nv);
            for i in 0..data.sig.n1 {
                let c = self.y1[w[i] as usize];
                if c == 0 {
                    continue;
                }
                let row: Vec<Rat> = p.lam[i].iter().map(|&x| Rat::from_int(x * c)).collect();
                l.add_assign(&MPoly::linear(&row, Rat::from_int(p.lam_c[i] * c)));
            }
            for t in epsilon_constant_term(&factors, &l, &data.y)? {
                let mut mult = BTreeMap::new();
                for (v, n) in &t.mult {
                    let i = data
                        .vector_index(v)
                        .ok_or_else(|| KronError::Representation("epsilon term with a foreign root".into()))?;
                    *mult.entry(i).or_insert(0) += n;
                }
                terms.push(CosetTerm { coeff: t.coeff, shift: t.shift, mult });
            }
        }
        for t in terms.iter_mut() {
            for &k in &data.kappa_plus {
                *t.mult.entry(k).or_insert(0) -= 1;
            }
            t.mult.retain(|_, n| *n != 0);
        }

        let mut acc = Acc::new();
        let mut os_cache: HashMap<Mask, Vec<OSBasis>> = HashMap::new();
        for (ci, class) in data.gamma_classes.iter().enumerate() {
            let order = class.order;
            let scale = (data.q / order) as i64;
            let gamma: IVec = class.rep.iter().map(|x| x / scale).collect();
            for t in &terms {
                let mut mask: Mask = 0;
                for (&i, &n) in &t.mult {
                    if n > 0 && dot(&data.vectors[i], &gamma).rem_euclid(order as i64) == 0 {
                        mask |= 1 << i;
                    }
                }
                if !data.matroid.spans(data.matroid.top, mask) {
                    continue;
                }
                let bases = match os_cache.get(&mask) {
                    Some(b) => b.clone(),
                    None => {
                        let b = os_bases_adapted(&data.matroid, mask, &xi)?;
                        os_cache.insert(mask, b.clone());
                        b
                    }
                };
                if bases.is_empty() {
                    continue;
                }
                stats.residues += bases.len();
                let poly = if order == 1 {
                    self.class_term::<Rat>(t, &gamma, order, &a, &b0, &bases)?
                } else {
                    self.class_term::<CycloRat>(t, &gamma, order, &a, &b0, &bases)?
                };
                if poly.is_zero() {
                    continue;
                }
                let key: Vec<i64> =
                    (0..nv).map(|l| (0..r).map(|c| a[c][l] * gamma[c]).sum::<i64>().rem_euclid(order as i64)).collect();
                match acc.get_mut(&(ci, key.clone())) {
                    Some(e) => e.add_assign(&poly),
                    None => {
                        acc.insert((ci, key), poly);
                    }
                }
            }
        }
        Ok((acc, stats))
    }

    /// Sum over the OS bases of one `(w, gamma)` pair and one coset term, times the phase
    /// `zeta^{<b0 + shift, gamma>}` and the coefficient, as a polynomial in the variables.
    fn class_term<C: Field>(
        &self,
        t: &CosetTerm,
        gamma: &[i64],
        order: u32,
        a: &[IVec],
        b0: &[i64],
        bases: &[OSBasis],
    ) -> Result<MPoly<CycloRat>> {
        let data = self.data;
        let r = data.r;
        let nv = self.param.nv();
        let one = C::unit(order);
        let o = order as i64;
        let shift: IVec = b0.iter().zip(&t.shift).map(|(x, y)| x + y).collect();
        let f = FactoredFunction {
            shift: shift.iter().map(|&x| Rat::from_int(x)).collect(),
            factors: t
                .mult
                .iter()
                .map(|(&i, &n)| {
                    let v = &data.vectors[i];
                    let e = (-dot(v, gamma)).rem_euclid(o);
                    (if e == 0 { None } else { Some(C::zeta(order, e)) }, v.clone(), n)
                })
                .collect(),
            prefactor: one.clone(),
        };
        let sigmas: Vec<Vec<IVec>> =
            bases.iter().map(|b| b.indices.iter().map(|&i| data.vectors[i].clone()).collect()).collect();
        let poly: MPoly<C> = match self.param.kind {
            Kind::Constant => {
                let mut s = one.zero_like();
                for sigma in &sigmas {
                    s.cadd(&iterated_residue(sigma, &f)?);
                }
                MPoly::constant(nv, s)
            }
            Kind::Dilated => {
                let dir: Vec<Rat> = a.iter().map(|row| Rat::from_int(row[0])).collect();
                let mut s: Vec<C> = Vec::new();
                for sigma in &sigmas {
                    let p = iterated_residue_dilated(sigma, &f, &dir)?;
                    if s.len() < p.len() {
                        s.resize(p.len(), one.zero_like());
                    }
                    for (x, y) in s.iter_mut().zip(&p) {
                        x.cadd(y);
                    }
                }
                MPoly::from_terms(1, s.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)))
            }
            Kind::Symbolic => {
                let mut h = MPoly::zero(r);
                for sigma in &sigmas {
                    h.add_assign(&iterated_residue_symbolic(sigma, &f)?);
                }
                let images: Vec<MPoly<C>> = a
                    .iter()
                    .map(|row| {
                        MPoly::from_terms(
                            nv,
                            row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(l, &x)| {
                                let mut m = vec![0; nv];
                                m[l] = 1;
                                (m, one.from_rat_like(&Rat::from_int(x)))
                            }),
                        )
                    })
                    .collect();
                h.compose(&images, nv)
            }
        };
        if poly.is_zero() {
            return Ok(MPoly::zero(nv));
        }
        let coeff: MPoly<C> = t.coeff.map_coeffs(|c| one.from_rat_like(c));
        let phase = C::zeta(order, dot(&shift, gamma).rem_euclid(o));
        let out = poly.mul(&coeff).scale(&phase);
        Ok(out.map_coeffs(|c| c.to_cyclo(order)))
    }
}
