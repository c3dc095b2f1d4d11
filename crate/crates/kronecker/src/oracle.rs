//! Brute-force reference values: vector partition functions by enumeration and
//! Kronecker coefficients by the alternating sum over the Weyl group of `prod U(n_j)`.

use crate::error::{KronError, Result};
use crate::linalg::{dot, IVec};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_CONTENT_CAP: i64 = 10;
const WEYL_CAP: u64 = 100_000;

/// A vector `y` with `<psi, y> > 0` for every `psi`, if the perceptron finds one.
fn positive_functional(psi: &[IVec]) -> Option<IVec> {
    let r = psi.first()?.len();
    let mut y: IVec = vec![0; r];
    for _ in 0..100_000 {
        match psi.iter().find(|p| dot(p, &y) <= 0) {
            None => return Some(y),
            Some(p) => {
                for (a, b) in y.iter_mut().zip(p) {
                    *a += b;
                }
            }
        }
    }
    None
}

/// Number of ways to write `target` as a nonnegative integer combination of `psi`.
pub fn partition_count(psi: &[IVec], target: &[i64]) -> Result<u128> {
    if psi.is_empty() {
        return Ok(target.iter().all(|&x| x == 0) as u128);
    }
    if psi.iter().any(|p| p.len() != target.len()) {
        return Err(KronError::InvalidInput("dimension mismatch".into()));
    }
    let y = positive_functional(psi).ok_or_else(|| KronError::InvalidInput("cone of the weight list is not pointed".into()))?;
    let ys: Vec<i64> = psi.iter().map(|p| dot(p, &y)).collect();
    let mut memo: HashMap<(usize, IVec), u128> = HashMap::new();
    fn rec(i: usize, rem: &IVec, psi: &[IVec], ys: &[i64], y: &[i64], memo: &mut HashMap<(usize, IVec), u128>) -> u128 {
        let h = dot(rem, y);
        if h < 0 {
            return 0;
        }
        if i == 0 {
            return rem.iter().all(|&x| x == 0) as u128;
        }
        if let Some(&v) = memo.get(&(i, rem.clone())) {
            return v;
        }
        let p = &psi[i - 1];
        let mut total = 0;
        let mut cur = rem.clone();
        for _ in 0..=h / ys[i - 1] {
            total += rec(i - 1, &cur, psi, ys, y, memo);
            for (c, x) in cur.iter_mut().zip(p) {
                *c -= x;
            }
        }
        memo.insert((i, rem.clone()), total);
        total
    }
    Ok(rec(psi.len(), &target.to_vec(), psi, &ys, &y, &mut memo))
}

/// Weight multiplicities of `Sym^c(C^{n_1} (x) ... (x) C^{n_s})` as a table keyed by the
/// concatenated weight.
pub fn weight_table(dims: &[usize], c: i64) -> HashMap<IVec, u128> {
    let basis = tensor_weights(dims);
    let len: usize = dims.iter().sum();
    let mut table: HashMap<IVec, u128> = HashMap::new();
    table.insert(vec![0; len], 1);
    // multisets of size exactly c: DP adding one basis vector type at a time, by degree
    let mut by_deg: Vec<HashMap<IVec, u128>> = vec![table];
    by_deg.resize(c as usize + 1, HashMap::new());
    for b in &basis {
        for d in 1..=c as usize {
            let prev: Vec<(IVec, u128)> = by_deg[d - 1].iter().map(|(k, v)| (k.clone(), *v)).collect();
            for (k, v) in prev {
                let w: IVec = k.iter().zip(b).map(|(x, y)| x + y).collect();
                *by_deg[d].entry(w).or_insert(0) += v;
            }
        }
    }
    by_deg.pop().unwrap()
}

fn cached_table(dims: &[usize], c: i64) -> Arc<HashMap<IVec, u128>> {
    type Tables = Mutex<HashMap<(Vec<usize>, i64), Arc<HashMap<IVec, u128>>>>;
    static TABLES: OnceLock<Tables> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let key = (dims.to_vec(), c);
    if let Some(t) = tables.lock().unwrap().get(&key) {
        return t.clone();
    }
    let t = Arc::new(weight_table(dims, c));
    tables.lock().unwrap().insert(key, t.clone());
    t
}

fn tensor_weights(dims: &[usize]) -> Vec<IVec> {
    let n: usize = dims.iter().product();
    let len: usize = dims.iter().sum();
    (0..n)
        .map(|mut p| {
            let mut w = vec![0; len];
            let mut off = 0;
            for &d in dims {
                w[off + p % d] = 1;
                p /= d;
                off += d;
            }
            w
        })
        .collect()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { sign } else { -sign }, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, 1, &mut out);
    out
}

/// `rho` for `U(n)`: `(n-1, n-2, ..., 0)`.
pub fn rho(n: usize) -> IVec {
    (0..n).rev().map(|x| x as i64).collect()
}

/// Kronecker coefficient `g(nu_1, ..., nu_s)` by brute force.
pub fn kronecker_bruteforce(diagrams: &[Vec<i64>], content_cap: i64) -> Result<u128> {
    if diagrams.is_empty() {
        return Err(KronError::InvalidInput("no diagrams".into()));
    }
    for d in diagrams {
        if d.iter().any(|&x| x < 0) || d.windows(2).any(|w| w[0] < w[1]) {
            return Err(KronError::InvalidInput(format!("{d:?} is not a Young diagram")));
        }
    }
    let c: i64 = diagrams[0].iter().sum();
    if diagrams.iter().any(|d| d.iter().sum::<i64>() != c) {
        return Ok(0);
    }
    if c > content_cap {
        return Err(KronError::ResourceCap(format!("content {c} exceeds the oracle cap {content_cap}")));
    }
    let dims: Vec<usize> = diagrams.iter().map(|d| d.iter().filter(|&&x| x > 0).count().max(1)).collect();
    let weyl: u64 = dims.iter().map(|&n| (1..=n as u64).product::<u64>()).product();
    if weyl > WEYL_CAP {
        return Err(KronError::ResourceCap(format!("Weyl group of order {weyl} exceeds {WEYL_CAP}")));
    }
    let table = cached_table(&dims, c);
    let lambda: IVec = diagrams.iter().zip(&dims).flat_map(|(d, &n)| (0..n).map(|i| d.get(i).copied().unwrap_or(0))).collect();
    let perms: Vec<Vec<(Vec<usize>, i64)>> = dims.iter().map(|&n| permutations(n)).collect();
    let mut total: i128 = 0;
    let mut idx = vec![0usize; dims.len()];
    loop {
        let mut target = lambda.clone();
        let mut sign = 1i64;
        let mut off = 0;
        for (j, &n) in dims.iter().enumerate() {
            let (p, s) = &perms[j][idx[j]];
            sign *= s;
            let r = rho(n);
            for i in 0..n {
                target[off + i] += r[i] - r[p[i]];
            }
            off += n;
        }
        if let Some(&v) = table.get(&target) {
            total += sign as i128 * v as i128;
        }
        let mut j = 0;
        while j < dims.len() {
            idx[j] += 1;
            if idx[j] < perms[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == dims.len() {
            break;
        }
    }
    if total < 0 {
        return Err(KronError::Representation(format!("negative alternating sum {total}")));
    }
    Ok(total as u128)
}
