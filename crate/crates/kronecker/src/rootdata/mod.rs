//! Restricted root data for U(M) acting on a tensor product, restricted to a product of SU factors.

pub mod deform;
pub mod matroid;

pub use deform::{deformation_vector, Deformation};
pub use matroid::{bits, Mask, Matroid};

use crate::error::{KronError, Result};
use crate::exact::Rat;
use crate::linalg::{dot, inverse, to_rat_rows, IVec};
use num_integer::Integer;
use std::collections::{HashMap, HashSet};

/// Cap on the number of Weyl coset representatives.
pub const MAX_COSETS: u64 = 10_000_000;
/// Cap on the index `q`; residues live in the cyclotomic field of order `q`.
pub const MAX_INDEX: u32 = 5040;

/// Problem signature: `U(n1)` weights on `C^{n1}`, the tensor factors `C^{n_j}` (j >= 2)
/// making up `C^M`, which of them are kept in `K`, and `Sigma` as a block composition of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n1: usize,
    pub factors: Vec<usize>,
    pub kept: Vec<bool>,
    pub blocks: Vec<usize>,
}

impl Signature {
    /// Generic Sigma: `lambda` free in the first `n1` coordinates, zero afterwards.
    pub fn general(n1: usize, factors: &[usize]) -> Signature {
        let m: usize = factors.iter().product();
        let mut blocks = vec![1; n1.min(m)];
        if m > n1 {
            blocks.push(m - n1);
        }
        Signature { n1, factors: factors.to_vec(), kept: vec![true; factors.len()], blocks }
    }

    /// Sigma equal to the stabilizer of `lambda` padded with zeros to length `M`.
    pub fn stabilizer(lambda: &[i64], factors: &[usize]) -> Signature {
        let m: usize = factors.iter().product();
        let mut padded = lambda.to_vec();
        padded.resize(m, 0);
        Signature {
            n1: lambda.len(),
            factors: factors.to_vec(),
            kept: vec![true; factors.len()],
            blocks: blocks_of(&padded),
        }
    }

    pub fn m(&self) -> usize {
        self.factors.iter().product()
    }

    /// Whether the branching cone of this `Sigma` is solid. A single block makes `G lambda`
    /// a point; with two kept factors a block of size `M - 1` leaves `lambda` on a rank-one
    /// orbit, whose two marginals always share their spectrum.
    pub fn cone_is_solid(&self) -> bool {
        let m = self.m();
        if self.blocks.len() < 2 {
            return false;
        }
        let kept = self.kept.iter().filter(|&&k| k).count();
        kept != 2 || self.blocks.iter().all(|&b| b + 1 < m)
    }

    /// Shrinks `Sigma` (splitting the largest block) until the cone is solid.
    pub fn refined(mut self) -> Signature {
        while !self.cone_is_solid() {
            let (i, &b) = self.blocks.iter().enumerate().max_by_key(|&(i, &b)| (b, std::cmp::Reverse(i))).unwrap();
            if b < 2 {
                break;
            }
            self.blocks.splice(i..=i, [1, b - 1]);
        }
        self
    }

    pub fn key(&self) -> String {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".");
        let kept: String = self.kept.iter().map(|&k| if k { '1' } else { '0' }).collect();
        format!("n{}_f{}_k{}_b{}", self.n1, j(&self.factors), kept, j(&self.blocks))
    }
}

/// Maximal runs of equal entries.
pub fn blocks_of(v: &[i64]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 && v[i - 1] == *x {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    out
}

/// A class of `gamma in Gamma / q Gamma` up to multiplication by units mod `q`.
#[derive(Clone, Debug)]
pub struct GammaClass {
    pub rep: IVec,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct RestrictedRootData {
    pub sig: Signature,
    pub m: usize,
    pub r: usize,
    /// Tensor index (one entry per factor) of each position of `C^M`.
    pub positions: Vec<Vec<usize>>,
    /// `(factor, i)` label of each coordinate of `E`.
    pub coords: Vec<(usize, usize)>,
    /// Restriction of the basis weight of each position.
    pub omega: Vec<IVec>,
    /// Distinct polarized nonzero restricted roots, in order of first occurrence.
    pub vectors: Vec<IVec>,
    /// Restricted positive roots with multiplicity, as indices into `vectors`.
    pub psi: Vec<usize>,
    pub zero_restrictions: usize,
    pub kappa_plus: Vec<usize>,
    pub y: IVec,
    pub matroid: Matroid,
    pub normals: Vec<IVec>,
    pub q: u32,
    pub gamma_classes: Vec<GammaClass>,
    pub cosets: Vec<Vec<u8>>,
    /// Positive roots `(a, b)`, `a < b`, of U(M) outside the Levi factor.
    pub delta_u: Vec<(usize, usize)>,
    index: HashMap<IVec, usize>,
}

impl RestrictedRootData {
    pub fn build(sig: &Signature) -> Result<RestrictedRootData> {
        let m = sig.m();
        if sig.blocks.iter().sum::<usize>() != m || sig.blocks.contains(&0) {
            return Err(KronError::InvalidInput(format!("Sigma blocks {:?} do not partition {m}", sig.blocks)));
        }
        if sig.factors.len() != sig.kept.len() {
            return Err(KronError::InvalidInput("kept mask length".into()));
        }
        let count = coset_count(&sig.blocks);
        if count > MAX_COSETS {
            return Err(KronError::ResourceCap(format!("{count} Weyl coset representatives exceed {MAX_COSETS}")));
        }
        let positions: Vec<Vec<usize>> = (0..m)
            .map(|mut p| {
                sig.factors
                    .iter()
                    .map(|&n| {
                        let i = p % n;
                        p /= n;
                        i
                    })
                    .collect()
            })
            .collect();
        let mut coords = Vec::new();
        let mut y = Vec::new();
        let mut stride = 1i64;
        for (j, &n) in sig.factors.iter().enumerate() {
            if !sig.kept[j] {
                continue;
            }
            for i in 0..n - 1 {
                coords.push((j, i));
                y.push(2 * stride);
            }
            stride *= n as i64;
        }
        let r = coords.len();
        let omega: Vec<IVec> =
            positions.iter().map(|p| coords.iter().map(|&(j, i)| (p[j] <= i) as i64).collect()).collect();

        let mut vectors: Vec<IVec> = Vec::new();
        let mut index: HashMap<IVec, usize> = HashMap::new();
        let mut psi = Vec::new();
        let mut zero_restrictions = 0;
        for a in 0..m {
            for b in a + 1..m {
                let v: IVec = omega[a].iter().zip(&omega[b]).map(|(x, y)| x - y).collect();
                if v.iter().all(|&x| x == 0) {
                    zero_restrictions += 1;
                    continue;
                }
                let v = if dot(&v, &y) < 0 { v.iter().map(|x| -x).collect() } else { v };
                let id = *index.entry(v.clone()).or_insert_with(|| {
                    vectors.push(v);
                    vectors.len() - 1
                });
                psi.push(id);
            }
        }
        let mut kappa_plus = Vec::new();
        for (j, &n) in sig.factors.iter().enumerate() {
            if !sig.kept[j] {
                continue;
            }
            for a in 0..n {
                for b in a + 1..n {
                    let v: IVec = coords.iter().map(|&(jj, i)| (jj == j && a <= i && i < b) as i64).collect();
                    kappa_plus.push(index[&v]);
                }
            }
        }
        let matroid = Matroid::new(vectors.clone(), r)?;
        if matroid.rank() < r {
            return Err(KronError::InvalidInput("restricted roots do not span; branching cone is not solid".into()));
        }
        let normals = matroid.hyperplane_normals();
        let (q, gamma_classes) = index_and_gammas(&vectors, r);
        if q > MAX_INDEX {
            return Err(KronError::ResourceCap(format!("index q = {q} exceeds {MAX_INDEX}")));
        }

        let mut block_of = Vec::with_capacity(m);
        for (bi, &b) in sig.blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(bi, b));
        }
        let delta_u = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|&(a, b)| block_of[a] != block_of[b])
            .collect();
        let cosets = weyl_coset_reps(m, &sig.blocks);
        Ok(RestrictedRootData {
            sig: sig.clone(),
            m,
            r,
            positions,
            coords,
            omega,
            vectors,
            psi,
            zero_restrictions,
            kappa_plus,
            y,
            matroid,
            normals,
            q,
            gamma_classes,
            cosets,
            delta_u,
            index,
        })
    }

    pub fn vector_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Restriction of a U(M) weight.
    pub fn restrict(&self, weight: &[i64]) -> Result<IVec> {
        if weight.len() != self.m {
            return Err(KronError::InvalidInput(format!("weight of length {} for U({})", weight.len(), self.m)));
        }
        let mut out = vec![0; self.r];
        for (p, &x) in weight.iter().enumerate() {
            if x != 0 {
                for (o, &w) in out.iter_mut().zip(&self.omega[p]) {
                    *o += x * w;
                }
            }
        }
        Ok(out)
    }

    pub fn restrict_rat(&self, weight: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.r];
        for (p, x) in weight.iter().enumerate() {
            if !x.is_zero() {
                for (o, &w) in out.iter_mut().zip(&self.omega[p]) {
                    if w != 0 {
                        *o += x;
                    }
                }
            }
        }
        out
    }

    /// Coordinates of `E` for the K-weight given by the diagrams of the kept factors:
    /// partial sums `nu_j[0] + ... + nu_j[i]`.
    pub fn k_weight(&self, diagrams: &[Vec<i64>]) -> IVec {
        let kept: Vec<usize> = (0..self.sig.factors.len()).filter(|&j| self.sig.kept[j]).collect();
        assert_eq!(diagrams.len(), kept.len());
        self.coords
            .iter()
            .map(|&(j, i)| {
                let d = &diagrams[kept.iter().position(|&k| k == j).unwrap()];
                d.iter().take(i + 1).sum()
            })
            .collect()
    }

    /// Restricted `w(lambda)` for `lambda` supported on the first coordinates.
    pub fn w_lambda(&self, w: &[u8], lambda: &[i64]) -> IVec {
        let mut out = vec![0; self.r];
        for (i, &x) in lambda.iter().enumerate() {
            if x != 0 {
                for (o, &v) in out.iter_mut().zip(&self.omega[w[i] as usize]) {
                    *o += x * v;
                }
            }
        }
        out
    }

    /// Restriction of `w(e_a - e_b)`.
    pub fn w_root(&self, w: &[u8], a: usize, b: usize) -> IVec {
        let (pa, pb) = (w[a] as usize, w[b] as usize);
        self.omega[pa].iter().zip(&self.omega[pb]).map(|(x, y)| x - y).collect()
    }

    pub fn kappa_mask(&self) -> Mask {
        self.kappa_plus.iter().fold(0, |m, &i| m | 1 << i)
    }
}

pub fn coset_count(blocks: &[usize]) -> u64 {
    // multinomial, saturating
    let mut acc: u128 = 1;
    let mut n = 0u128;
    for &b in blocks {
        for k in 1..=b as u128 {
            n += 1;
            acc = acc * n / k;
            if acc > u64::MAX as u128 {
                return u64::MAX;
            }
        }
    }
    acc as u64
}

/// Minimal-length representatives of `S_M / prod S_{blocks}`: maps increasing on each block.
pub fn weyl_coset_reps(m: usize, blocks: &[usize]) -> Vec<Vec<u8>> {
    assert_eq!(blocks.iter().sum::<usize>(), m);
    let mut out = Vec::new();
    let mut w = vec![0u8; m];
    let mut used = vec![false; m];
    fn rec(blocks: &[usize], bi: usize, start: usize, k: usize, min: usize, w: &mut [u8], used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if bi == blocks.len() {
            out.push(w.to_vec());
            return;
        }
        if k == blocks[bi] {
            rec(blocks, bi + 1, start + blocks[bi], 0, 0, w, used, out);
            return;
        }
        for v in min..w.len() {
            if !used[v] {
                used[v] = true;
                w[start + k] = v as u8;
                rec(blocks, bi, start, k + 1, v + 1, w, used, out);
                used[v] = false;
            }
        }
    }
    rec(blocks, 0, 0, 0, 0, &mut w, &mut used, &mut out);
    out
}

/// Index `q` (lcm over bases of the exponent of `Z^r / Z sigma`) and the classes of
/// `gamma mod q` orthogonal mod `q` to some basis.
pub fn index_and_gammas(vectors: &[IVec], r: usize) -> (u32, Vec<GammaClass>) {
    let mut bases: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut seen_lattices: HashSet<Vec<IVec>> = HashSet::new();
    fn rec(vs: &[IVec], r: usize, from: usize, chosen: &mut Vec<usize>, bases: &mut Vec<Vec<Vec<Rat>>>, seen: &mut HashSet<Vec<IVec>>) {
        if chosen.len() == r {
            // columns are the chosen vectors
            let m: Vec<IVec> = (0..r).map(|i| chosen.iter().map(|&c| vs[c][i]).collect()).collect();
            if let Some(inv) = inverse(&to_rat_rows(&m)) {
                // the rows of inv determine the dual lattice; dedup on them
                let key: Vec<IVec> = {
                    let d = inv.iter().flatten().fold(1i64, |a, x| a.lcm(&x.denom().try_into().unwrap()));
                    let mut rows: Vec<IVec> =
                        inv.iter().map(|row| row.iter().map(|x| (x * &Rat::from_int(d)).to_i64().unwrap()).collect()).collect();
                    rows.sort();
                    rows.push(vec![d]);
                    rows
                };
                if seen.insert(key) {
                    bases.push(inv);
                }
            }
            return;
        }
        for i in from..vs.len() {
            if vs.len() - i < r - chosen.len() {
                break;
            }
            chosen.push(i);
            if crate::linalg::rank_int(&chosen.iter().map(|&c| vs[c].clone()).collect::<Vec<_>>()) == chosen.len() {
                rec(vs, r, i + 1, chosen, bases, seen);
            }
            chosen.pop();
        }
    }
    rec(vectors, r, 0, &mut chosen, &mut bases, &mut seen_lattices);
    let q = bases
        .iter()
        .flat_map(|inv| inv.iter().flatten())
        .fold(1i64, |a, x| a.lcm(&x.denom().try_into().unwrap())) as u32;
    // gamma with sigma^T gamma = 0 mod q is generated by q * (rows of sigma^{-1})
    let qi = q as i64;
    let mut all: HashSet<IVec> = HashSet::new();
    for inv in &bases {
        let gens: Vec<IVec> = inv
            .iter()
            .map(|row| row.iter().map(|x| (x * &Rat::from_int(qi)).to_i64().unwrap().rem_euclid(qi)).collect())
            .collect();
        let mut group: Vec<IVec> = vec![vec![0; r]];
        let mut local: HashSet<IVec> = group.iter().cloned().collect();
        let mut i = 0;
        while i < group.len() {
            for g in &gens {
                let s: IVec = group[i].iter().zip(g).map(|(a, b)| (a + b).rem_euclid(qi)).collect();
                if local.insert(s.clone()) {
                    group.push(s);
                }
            }
            i += 1;
        }
        all.extend(group);
    }
    let units: Vec<i64> = (1..=qi).filter(|j| j.gcd(&qi) == 1).collect();
    let mut classes = Vec::new();
    let mut done: HashSet<IVec> = HashSet::new();
    let mut sorted: Vec<IVec> = all.into_iter().collect();
    sorted.sort();
    for g in sorted {
        if done.contains(&g) {
            continue;
        }
        let orbit: Vec<IVec> = units.iter().map(|&j| g.iter().map(|x| (x * j).rem_euclid(qi)).collect()).collect();
        let rep = orbit.iter().min().unwrap().clone();
        let order = (qi / rep.iter().fold(qi, |a, &x| a.gcd(&x))) as u32;
        done.extend(orbit);
        classes.push(GammaClass { rep, order });
    }
    (q, classes)
}
