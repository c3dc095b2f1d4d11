//! The deformation vector `(epsilon, delta)` and its on-disk cache.

use super::{RestrictedRootData, Signature};
use crate::error::{KronError, Result};
use crate::exact::Rat;
use crate::linalg::dot;
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const RETRIES: usize = 64;
pub const MAX_DEN: i64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x6b72_6f6e;

/// `epsilon` has length `n1` (zero beyond), `delta` lives in `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deformation {
    pub epsilon: Vec<Rat>,
    pub delta: Vec<Rat>,
}

/// Returns the pairings `<w(epsilon) - delta, X>` scaled by a common denominator, and that denominator.
fn pairings(data: &RestrictedRootData, d: &Deformation) -> (Vec<i128>, i128) {
    let den = d
        .epsilon
        .iter()
        .chain(&d.delta)
        .fold(num_bigint::BigInt::from(1), |a, x| num_integer::Integer::lcm(&a, &x.denom()));
    let den: i128 = den.try_into().expect("deformation denominator fits");
    let scale = |x: &Rat| -> i128 {
        let v = x * &Rat::from_big(num_rational::BigRational::from_integer(den.into()));
        i128::try_from(v.numer()).expect("deformation numerator fits")
    };
    let e: Vec<i128> = d.epsilon.iter().map(scale).collect();
    let dl: Vec<i128> = d.delta.iter().map(scale).collect();
    let ox: Vec<Vec<i64>> = data.omega.iter().map(|o| data.normals.iter().map(|x| dot(o, x)).collect()).collect();
    let dx: Vec<i128> =
        data.normals.iter().map(|x| x.iter().zip(&dl).map(|(&a, &b)| a as i128 * b).sum()).collect();
    let mut out = Vec::with_capacity(data.cosets.len() * data.normals.len());
    for w in &data.cosets {
        for (k, dxk) in dx.iter().enumerate() {
            let s: i128 = e.iter().enumerate().map(|(i, &ei)| ei * ox[w[i] as usize][k] as i128).sum();
            out.push(s - dxk);
        }
    }
    (out, den)
}

/// The defining predicate: `0 < |<w(epsilon) - delta, X>| < 1/2` for every coset rep and normal.
pub fn verify(data: &RestrictedRootData, d: &Deformation) -> bool {
    if d.epsilon.len() != data.sig.n1 || d.delta.len() != data.r {
        return false;
    }
    if !respects_blocks(&data.sig, &d.epsilon) {
        return false;
    }
    let (vals, den) = pairings(data, d);
    vals.iter().all(|&v| v != 0 && 2 * v.abs() < den)
}

fn respects_blocks(sig: &Signature, eps: &[Rat]) -> bool {
    let mut start = 0;
    for &b in &sig.blocks {
        let end = (start + b).min(eps.len());
        if start < end && eps[start..end].iter().any(|x| *x != eps[start]) {
            return false;
        }
        start += b;
    }
    true
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

/// One random point of the moment image with the first spectrum constant on the Sigma blocks:
/// Schmidt coefficients `s` and orthonormal `phi_i` in `C^M`, then marginal spectra of
/// `sum_i s_i phi_i phi_i^*` on the kept factors.
fn sample(data: &RestrictedRootData, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let sig = &data.sig;
    let (n1, m) = (sig.n1, data.m);
    let mut sizes = Vec::new();
    let mut start = 0;
    for &b in &sig.blocks {
        if start >= n1 {
            break;
        }
        sizes.push((start + b).min(n1) - start);
        start += b;
    }
    let mut vals: Vec<f64> = sizes.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut s: Vec<f64> = sizes.iter().zip(&vals).flat_map(|(&k, &v)| std::iter::repeat_n(v, k)).collect();
    let total: f64 = s.iter().sum();
    for x in s.iter_mut() {
        *x /= total;
    }
    let mut phis: Vec<Vec<Complex<f64>>> = Vec::new();
    for _ in 0..n1 {
        let mut v: Vec<Complex<f64>> = (0..m).map(|_| Complex::new(gauss(rng), gauss(rng))).collect();
        for u in &phis {
            let c: Complex<f64> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= c * y;
            }
        }
        let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= n;
        }
        phis.push(v);
    }
    let mut delta = Vec::with_capacity(data.r);
    for (j, &n) in sig.factors.iter().enumerate() {
        if !sig.kept[j] {
            continue;
        }
        let mut rho = DMatrix::<Complex<f64>>::zeros(n, n);
        for (i, phi) in phis.iter().enumerate() {
            for p in 0..m {
                for pp in 0..m {
                    let (a, b) = (&data.positions[p], &data.positions[pp]);
                    if a.iter().zip(b).enumerate().all(|(k, (x, y))| k == j || x == y) {
                        rho[(a[j], b[j])] += phi[p] * phi[pp].conj() * s[i];
                    }
                }
            }
        }
        let mut ev: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut acc = 0.0;
        for e in ev.iter().take(n - 1) {
            acc += e;
            delta.push(acc);
        }
    }
    (s, delta)
}

/// Samples, rationalizes and rescales until the predicate holds.
pub fn deformation_vector(data: &RestrictedRootData, seed: u64) -> Result<Deformation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_key(&data.sig.key()));
    for _ in 0..RETRIES {
        let (s, delta) = sample(data, &mut rng);
        // rationalize on the grid 1/MAX_DEN, then a tiny perturbation on a finer common grid
        let fine = MAX_DEN * 1000;
        let grid = |x: f64, rng: &mut ChaCha8Rng| {
            Rat::new((x * MAX_DEN as f64).round() as i64 * 1000 + rng.gen_range(-500..500), fine)
        };
        let mut eps: Vec<Rat> = Vec::with_capacity(s.len());
        for (i, x) in s.iter().enumerate() {
            if i > 0 && s[i - 1] == *x {
                let prev = eps[i - 1].clone();
                eps.push(prev);
            } else {
                eps.push(grid(*x, &mut rng));
            }
        }
        let delta: Vec<Rat> = delta.iter().map(|&x| grid(x, &mut rng)).collect();
        let mut d = Deformation { epsilon: eps, delta };
        let (vals, den) = pairings(data, &d);
        if vals.contains(&0) {
            continue;
        }
        let max = vals.iter().map(|v| v.abs()).max().unwrap_or(1);
        // scale so that every pairing has absolute value at most 1/4
        let t = Rat::from_frac(den.into(), (4 * max).into());
        d.epsilon = d.epsilon.iter().map(|x| x * &t).collect();
        d.delta = d.delta.iter().map(|x| x * &t).collect();
        if verify(data, &d) {
            return Ok(d);
        }
    }
    Err(KronError::Deformation(format!(
        "no valid (epsilon, delta) after {RETRIES} attempts for {}; the branching cone may not be solid",
        data.sig.key()
    )))
}

fn hash_key(s: &str) -> u64 {
    // FNV-1a, stable across runs
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub signature: SignatureRecord,
    pub q: u32,
    pub psi_len: usize,
    pub distinct_roots: usize,
    pub normals: Vec<Vec<i64>>,
    pub y: Vec<i64>,
    pub deformation: Deformation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureRecord {
    pub n1: usize,
    pub factors: Vec<usize>,
    pub kept: Vec<bool>,
    pub blocks: Vec<usize>,
}

impl From<&Signature> for SignatureRecord {
    fn from(s: &Signature) -> Self {
        SignatureRecord { n1: s.n1, factors: s.factors.clone(), kept: s.kept.clone(), blocks: s.blocks.clone() }
    }
}

impl From<&SignatureRecord> for Signature {
    fn from(s: &SignatureRecord) -> Self {
        Signature { n1: s.n1, factors: s.factors.clone(), kept: s.kept.clone(), blocks: s.blocks.clone() }
    }
}

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("KRON_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".kron-cache"))
}

fn entry_path(dir: &Path, sig: &Signature) -> PathBuf {
    dir.join(format!("{}.json", sig.key()))
}

/// Loads a verified deformation from `dir`, or computes and stores one.
pub fn load_or_compute(data: &RestrictedRootData, dir: Option<&Path>, seed: u64) -> Result<Deformation> {
    let Some(dir) = dir else { return deformation_vector(data, seed) };
    let path = entry_path(dir, &data.sig);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(e) = serde_json::from_str::<CacheEntry>(&text) {
            if verify(data, &e.deformation) {
                return Ok(e.deformation);
            }
        }
    }
    let d = deformation_vector(data, seed)?;
    let entry = CacheEntry {
        signature: (&data.sig).into(),
        q: data.q,
        psi_len: data.psi.len(),
        distinct_roots: data.vectors.len(),
        normals: data.normals.clone(),
        y: data.y.clone(),
        deformation: d.clone(),
    };
    // the cache is an optimization; failure to write is not an error
    let _ = write_atomic(dir, &path, &serde_json::to_string(&entry)?);
    Ok(d)
}

fn write_atomic(dir: &Path, path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, path)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CacheStatus {
    Ok,
    Corrupt(String),
}

pub fn cache_entries(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|rd| rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect())
        .unwrap_or_default();
    v.sort();
    v
}

/// One line per cached signature.
pub fn cache_list(dir: &Path) -> Vec<String> {
    cache_entries(dir)
        .iter()
        .map(|p| match std::fs::read_to_string(p).ok().and_then(|t| serde_json::from_str::<CacheEntry>(&t).ok()) {
            Some(e) => format!(
                "{} q={} |Psi|={} |N|={}",
                Signature::from(&e.signature).key(),
                e.q,
                e.psi_len,
                e.normals.len()
            ),
            None => format!("{} (unreadable)", p.display()),
        })
        .collect()
}

pub fn cache_clear(dir: &Path) -> Result<usize> {
    let entries = cache_entries(dir);
    for p in &entries {
        std::fs::remove_file(p)?;
    }
    Ok(entries.len())
}

/// Re-checks every entry; corrupt ones are renamed with a `.bad` suffix.
pub fn cache_verify(dir: &Path) -> Vec<(PathBuf, CacheStatus)> {
    let mut out = Vec::new();
    for p in cache_entries(dir) {
        let status = match std::fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| {
            serde_json::from_str::<CacheEntry>(&t).map_err(|e| e.to_string())
        }) {
            Err(e) => CacheStatus::Corrupt(e),
            Ok(e) => match RestrictedRootData::build(&Signature::from(&e.signature)) {
                Err(err) => CacheStatus::Corrupt(err.to_string()),
                Ok(data) if verify(&data, &e.deformation) => CacheStatus::Ok,
                Ok(_) => CacheStatus::Corrupt("deformation predicate fails".into()),
            },
        };
        if status != CacheStatus::Ok {
            let _ = std::fs::rename(&p, p.with_extension("json.bad"));
        }
        out.push((p, status));
    }
    out
}
