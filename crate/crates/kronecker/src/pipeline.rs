//! Kronecker coefficients end to end: validation, reduction to a branching problem,
//! choice of Sigma, mode dispatch and Hilbert series.

use crate::branching::{branch_quasipoly_stats, BranchOptions, BranchStats, Mode};
use crate::error::{KronError, Result};
use crate::exact::Rat;
use crate::linalg::IVec;
use crate::quasipoly::{MPoly, QuasiPolynomial, RationalGF};
use crate::rootdata::deform::{load_or_compute, DEFAULT_SEED};
use crate::rootdata::{coset_count, Deformation, RestrictedRootData, Signature};
use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

/// Young diagrams as lists of row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramTuple {
    pub diagrams: Vec<Vec<i64>>,
}

impl DiagramTuple {
    /// Validates and strips trailing zeros.
    pub fn new(diagrams: Vec<Vec<i64>>) -> Result<DiagramTuple> {
        let mut out = Vec::with_capacity(diagrams.len());
        for d in diagrams {
            if d.iter().any(|&x| x < 0) {
                return Err(KronError::InvalidInput(format!("negative entry in {d:?}")));
            }
            if d.windows(2).any(|w| w[0] < w[1]) {
                return Err(KronError::InvalidInput(format!("{d:?} is not weakly decreasing")));
            }
            let mut d = d;
            while d.last() == Some(&0) {
                d.pop();
            }
            out.push(d);
        }
        Ok(DiagramTuple { diagrams: out })
    }

    /// Whitespace-separated bracketed lists, e.g. `[2,1] [2,1] [3]`.
    pub fn parse(s: &str) -> Result<DiagramTuple> {
        let mut diagrams = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if !rest.starts_with('[') {
                return Err(KronError::InvalidInput(format!("expected '[' at {rest:?}")));
            }
            let end = rest.find(']').ok_or_else(|| KronError::InvalidInput("missing ']'".into()))?;
            let body = rest[1..end].trim();
            let d: Vec<i64> = if body.is_empty() {
                vec![]
            } else {
                body.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|e| KronError::InvalidInput(format!("{x:?}: {e}"))))
                    .collect::<Result<_>>()?
            };
            diagrams.push(d);
            rest = rest[end + 1..].trim_start();
        }
        if diagrams.is_empty() {
            return Err(KronError::InvalidInput("no diagrams".into()));
        }
        DiagramTuple::new(diagrams)
    }

    /// JSON body: either `{"diagrams": [[..], ..]}` or a bare array of arrays.
    pub fn from_json(v: &Value) -> Result<DiagramTuple> {
        let arr = v.get("diagrams").unwrap_or(v);
        let lists = arr.as_array().ok_or_else(|| KronError::InvalidInput("expected an array of diagrams".into()))?;
        let mut diagrams = Vec::new();
        for l in lists {
            let row = l.as_array().ok_or_else(|| KronError::InvalidInput("diagram must be an array".into()))?;
            diagrams.push(
                row.iter()
                    .map(|x| x.as_i64().ok_or_else(|| KronError::InvalidInput(format!("not an integer: {x}"))))
                    .collect::<Result<Vec<i64>>>()?,
            );
        }
        DiagramTuple::new(diagrams)
    }

    pub fn contents(&self) -> Vec<i64> {
        self.diagrams.iter().map(|d| d.iter().sum()).collect()
    }

    pub fn scaled(&self, k: i64) -> DiagramTuple {
        DiagramTuple::new(self.diagrams.iter().map(|d| d.iter().map(|x| x * k).collect()).collect()).unwrap()
    }

    /// Row lengths of all diagrams, concatenated (the point at which symbolic output is evaluated).
    pub fn point(&self) -> Vec<i64> {
        self.diagrams.concat()
    }

    pub fn is_rectangular(&self) -> bool {
        self.diagrams.iter().all(|d| d.iter().all(|&x| Some(&x) == d.first()))
    }
}

impl std::fmt::Display for DiagramTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .diagrams
            .iter()
            .map(|d| format!("[{}]", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Result of the cheap reductions.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalized {
    /// The coefficient is this constant on the whole ray through the tuple (for `k >= 1`).
    Trivial(i64),
    /// Diagrams with at least two rows, sorted by decreasing number of rows, with `n1 <= M`.
    /// `order[i]` is the position in the input of the `i`-th reduced diagram.
    Reduced { diagrams: Vec<Vec<i64>>, order: Vec<usize> },
}

pub fn normalize(t: &DiagramTuple) -> Normalized {
    let contents = t.contents();
    if contents.windows(2).any(|w| w[0] != w[1]) {
        return Normalized::Trivial(0);
    }
    let mut idx: Vec<usize> = (0..t.diagrams.len()).filter(|&i| t.diagrams[i].len() >= 2).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(t.diagrams[i].len()));
    let diagrams: Vec<Vec<i64>> = idx.iter().map(|&i| t.diagrams[i].clone()).collect();
    match diagrams.len() {
        0 => Normalized::Trivial(1),
        1 => Normalized::Trivial(0),
        2 => Normalized::Trivial((diagrams[0] == diagrams[1]) as i64),
        _ => {
            let m: usize = diagrams[1..].iter().map(|d| d.len()).product();
            if diagrams[0].len() > m {
                Normalized::Trivial(0)
            } else {
                Normalized::Reduced { diagrams, order: idx }
            }
        }
    }
}

/// Which Levi subgroup the first weight is taken singular for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SigmaChoice {
    /// Stabilizer of `lambda` in numeric and dilated modes, `General` in symbolic mode.
    #[default]
    Auto,
    /// `lambda` free in its first `n1` entries.
    General,
    /// All simple roots except `alpha_{n1}`; needs a rectangular first diagram.
    Rectangular,
    Stabilizer,
}

impl std::str::FromStr for SigmaChoice {
    type Err = KronError;
    fn from_str(s: &str) -> Result<SigmaChoice> {
        match s {
            "auto" => Ok(SigmaChoice::Auto),
            "general" => Ok(SigmaChoice::General),
            "rect" | "rectangular" => Ok(SigmaChoice::Rectangular),
            "stabilizer" => Ok(SigmaChoice::Stabilizer),
            _ => Err(KronError::InvalidInput(format!("unknown Sigma choice {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Where verified deformation vectors are stored; `None` keeps them in memory only.
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub sigma: SigmaChoice,
    /// Refuse problems with more `(w, gamma)` pairs than this.
    pub max_terms: u64,
    pub branch: BranchOptions,
}

impl Default for Config {
    fn default() -> Self {
        Config { cache_dir: None, seed: DEFAULT_SEED, sigma: SigmaChoice::Auto, max_terms: 10_000_000, branch: BranchOptions::default() }
    }
}

/// Root data and deformation for one signature.
pub struct Problem {
    pub data: RestrictedRootData,
    pub deformation: Deformation,
}

type ProblemKey = (Signature, u64, Option<PathBuf>);

fn problems() -> &'static Mutex<HashMap<ProblemKey, Arc<Problem>>> {
    static P: OnceLock<Mutex<HashMap<ProblemKey, Arc<Problem>>>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the in-process memo) the root data and a verified deformation.
pub fn problem(sig: &Signature, cfg: &Config) -> Result<Arc<Problem>> {
    let key = (sig.clone(), cfg.seed, cfg.cache_dir.clone());
    if let Some(p) = problems().lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let data = RestrictedRootData::build(sig)?;
    let deformation = load_or_compute(&data, cfg.cache_dir.as_deref(), cfg.seed)?;
    let p = Arc::new(Problem { data, deformation });
    problems().lock().unwrap().insert(key, p.clone());
    Ok(p)
}

/// Signs of `<w(lambda1) - mu1, X>` over coset representatives and hyperplane normals.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub signature: String,
    pub lambda1: Vec<Rat>,
    pub mu1: Vec<Rat>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KronResult {
    pub mode: &'static str,
    pub value: QuasiPolynomial,
    pub certificate: Option<Certificate>,
    pub stats: BranchStats,
    pub millis: u128,
}

impl KronResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "mode": self.mode,
            "value": self.value.to_json(),
            "stats": {
                "cosets": self.stats.cosets,
                "residues": self.stats.residues,
                "epsilon_cosets": self.stats.epsilon_cosets,
                "millis": self.millis as u64,
            },
        });
        if let Some(c) = &self.certificate {
            v["certificate"] = json!({
                "signature": c.signature,
                "lambda1": c.lambda1.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "mu1": c.mu1.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "signs": c.signs,
            });
        }
        v
    }
}

fn sigma_for(choice: SigmaChoice, symbolic: bool, lambda: &[i64], factors: &[usize]) -> Result<Signature> {
    let n1 = lambda.len();
    let m: usize = factors.iter().product();
    Ok(match choice {
        SigmaChoice::Auto if symbolic => Signature::general(n1, factors),
        SigmaChoice::Auto | SigmaChoice::Stabilizer => Signature::stabilizer(lambda, factors),
        SigmaChoice::General => Signature::general(n1, factors),
        SigmaChoice::Rectangular => {
            if lambda.iter().any(|&x| x != lambda[0]) {
                return Err(KronError::InvalidInput("Sigma 'rect' needs a rectangular first diagram".into()));
            }
            let mut sig = Signature::general(n1, factors);
            sig.blocks = if m > n1 { vec![n1, m - n1] } else { vec![n1] };
            sig
        }
    })
}

fn variable_names(t: &DiagramTuple) -> Vec<String> {
    let letters = ["lambda", "mu", "nu"];
    let mut out = Vec::new();
    for (j, d) in t.diagrams.iter().enumerate() {
        for i in 0..d.len() {
            if t.diagrams.len() <= 3 {
                out.push(format!("{}{}", letters[j], i + 1));
            } else {
                out.push(format!("x{}_{}", j + 1, i + 1));
            }
        }
    }
    out
}

enum Run {
    Numeric,
    Dilated,
    Symbolic,
}

fn run(t: &DiagramTuple, how: Run, cfg: &Config) -> Result<KronResult> {
    let start = Instant::now();
    let (mode_name, vars) = match how {
        Run::Numeric => ("numeric", vec![]),
        Run::Dilated => ("dilated", vec!["k".to_string()]),
        Run::Symbolic => ("symbolic", variable_names(t)),
    };
    let constant = |c: i64| {
        let nv = vars.len();
        let qp = QuasiPolynomial::from_poly(vars.clone(), &MPoly::constant(nv, Rat::from_int(c)));
        KronResult { mode: mode_name, value: qp, certificate: None, stats: BranchStats::default(), millis: 0 }
    };
    let (diagrams, order) = match normalize(t) {
        Normalized::Trivial(c) => return Ok(constant(c)),
        Normalized::Reduced { diagrams, order } => (diagrams, order),
    };
    let lambda = diagrams[0].clone();
    let factors: Vec<usize> = diagrams[1..].iter().map(|d| d.len()).collect();
    let sig = sigma_for(cfg.sigma, matches!(how, Run::Symbolic), &lambda, &factors)?.refined();
    let cosets = coset_count(&sig.blocks);
    if cosets > cfg.max_terms {
        return Err(KronError::ResourceCap(format!("{cosets} Weyl coset representatives exceed the cap {}", cfg.max_terms)));
    }
    let p = problem(&sig, cfg)?;
    let data = &p.data;
    let terms = data.cosets.len() as u64 * data.gamma_classes.len() as u64;
    if terms > cfg.max_terms {
        return Err(KronError::ResourceCap(format!("{terms} (coset, gamma) pairs exceed the cap {}", cfg.max_terms)));
    }
    let mu = data.k_weight(&diagrams[1..]);
    let mode = match how {
        Run::Numeric => Mode::Numeric,
        Run::Dilated => Mode::Dilated,
        Run::Symbolic => {
            // variable offsets of each input diagram
            let mut offset = Vec::new();
            let mut acc = 0;
            for d in &t.diagrams {
                offset.push(acc);
                acc += d.len();
            }
            let nv = vars.len();
            let unit = |i: usize| {
                let mut v = vec![0; nv];
                v[i] = 1;
                v
            };
            let lam: Vec<IVec> = (0..lambda.len()).map(|i| unit(offset[order[0]] + i)).collect();
            let mu_rows: Vec<IVec> = data
                .coords
                .iter()
                .map(|&(j, i)| {
                    let base = offset[order[j + 1]];
                    let mut v = vec![0; nv];
                    for t in 0..=i {
                        v[base + t] = 1;
                    }
                    v
                })
                .collect();
            Mode::Symbolic { vars: vars.clone(), lambda: lam, mu: mu_rows }
        }
    };
    let (value, stats) = branch_quasipoly_stats(data, &lambda, &mu, &p.deformation, &mode, &cfg.branch)?;
    let certificate = matches!(how, Run::Symbolic).then(|| certificate(data, &p.deformation, &lambda, &mu));
    Ok(KronResult { mode: mode_name, value, certificate, stats, millis: start.elapsed().as_millis() })
}

fn certificate(data: &RestrictedRootData, d: &Deformation, lambda: &[i64], mu: &[i64]) -> Certificate {
    let lambda1: Vec<Rat> = lambda.iter().zip(&d.epsilon).map(|(&l, e)| &Rat::from_int(l) + e).collect();
    let mu1: Vec<Rat> = mu.iter().zip(&d.delta).map(|(&m, e)| &Rat::from_int(m) + e).collect();
    let mut signs = Vec::with_capacity(data.cosets.len() * data.normals.len());
    for w in &data.cosets {
        let mut xi: Vec<Rat> = mu1.iter().map(|x| -x).collect();
        for (i, l) in lambda1.iter().enumerate() {
            for (x, &o) in xi.iter_mut().zip(&data.omega[w[i] as usize]) {
                if o != 0 {
                    *x += l;
                }
            }
        }
        for n in &data.normals {
            let s: Rat = xi.iter().zip(n).map(|(x, &c)| x * &Rat::from_int(c)).sum();
            signs.push(s.signum() as i8);
        }
    }
    Certificate { signature: data.sig.key(), lambda1, mu1, signs }
}

fn to_count(v: Rat) -> Result<BigInt> {
    if !v.is_integer() || v.is_negative() {
        return Err(KronError::Representation(format!("multiplicity {v} is not a nonnegative integer")));
    }
    Ok(v.numer())
}

/// The Kronecker coefficient as an exact integer.
pub fn kronecker_number(t: &DiagramTuple, cfg: &Config) -> Result<BigInt> {
    let r = run(t, Run::Numeric, cfg)?;
    to_count(r.value.evaluate(&[])?)
}

pub fn kronecker_number_result(t: &DiagramTuple, cfg: &Config) -> Result<KronResult> {
    run(t, Run::Numeric, cfg)
}

/// `k -> g(k nu_1, ..., k nu_s)` as a quasi-polynomial in `k` (exact for `k >= 1`, and at
/// `k = 0` whenever the tuple lies in the cone).
pub fn kronecker_dilated(t: &DiagramTuple, cfg: &Config) -> Result<KronResult> {
    run(t, Run::Dilated, cfg)
}

/// A quasi-polynomial in the row lengths of all diagrams, valid on the closed cone of the
/// tope recorded in the certificate.
pub fn kronecker_symbolic(t: &DiagramTuple, cfg: &Config) -> Result<KronResult> {
    run(t, Run::Symbolic, cfg)
}

/// Hilbert series `sum_k g(k nu) t^k` for rectangular diagrams.
pub fn hilbert_series(t: &DiagramTuple, cfg: &Config) -> Result<RationalGF> {
    if !t.is_rectangular() {
        return Err(KronError::InvalidInput("Hilbert series needs rectangular diagrams".into()));
    }
    let mut cfg = cfg.clone();
    if cfg.sigma == SigmaChoice::Auto {
        cfg.sigma = SigmaChoice::Rectangular;
    }
    let r = kronecker_dilated(t, &cfg)?;
    if r.value.is_zero() {
        // only k = 0 contributes
        return Ok(RationalGF::from_values(&[Rat::one()], 1, 0));
    }
    r.value.generating_function()
}

/// Smallest `k >= 1` with `g(k nu) > 0`, searching up to the lcm of the periods.
pub fn saturation(t: &DiagramTuple, cfg: &Config) -> Result<Option<i64>> {
    let r = kronecker_dilated(t, cfg)?;
    let l = r.value.set_of_periods().into_iter().fold(1u32, |a, p| a.lcm(&p)).max(1) as i64;
    for k in 1..=l {
        if r.value.evaluate(&[k])?.is_positive() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
