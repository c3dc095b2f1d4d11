//! Orlik-Solomon bases adapted to the tope of a regular vector.

use crate::error::{KronError, Result};
use crate::exact::Rat;
use crate::linalg::{coords_in_basis, det_int, IVec};
use crate::rootdata::matroid::{Mask, Matroid};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OSBasis {
    /// Indices into the matroid's vector list, increasing.
    pub indices: Vec<usize>,
}

impl OSBasis {
    pub fn vectors<'a>(&self, m: &'a Matroid) -> Vec<&'a IVec> {
        self.indices.iter().map(|&i| &m.vectors[i]).collect()
    }

    pub fn abs_det(&self, m: &Matroid) -> i64 {
        let cols: Vec<IVec> = (0..m.dim).map(|i| self.indices.iter().map(|&c| m.vectors[c][i]).collect()).collect();
        det_int(&cols).abs()
    }
}

fn dot_ri(x: &[Rat], v: &[i64]) -> Rat {
    x.iter().zip(v).fold(Rat::zero(), |mut acc, (a, &b)| {
        if b != 0 && !a.is_zero() {
            acc += &(a * &Rat::from_int(b));
        }
        acc
    })
}

/// OS bases of the sublist `poles` (in index order) whose cone contains `xi`.
/// Empty when `poles` does not span.
pub fn os_bases_adapted(m: &Matroid, poles: Mask, xi: &[Rat]) -> Result<Vec<OSBasis>> {
    let mut out = Vec::new();
    if !m.spans(m.top, poles) {
        return Ok(out);
    }
    let mut chosen = Vec::with_capacity(m.rank());
    rec(m, poles, m.top, xi.to_vec(), &mut chosen, &mut out)?;
    Ok(out)
}

fn rec(m: &Matroid, poles: Mask, f: usize, xi: Vec<Rat>, chosen: &mut Vec<usize>, out: &mut Vec<OSBasis>) -> Result<()> {
    let flat = &m.flats[f];
    if flat.rank == 0 {
        out.push(OSBasis { indices: chosen.clone() });
        return Ok(());
    }
    let avail = poles & flat.mask;
    let psi = avail.trailing_zeros() as usize;
    let v = &m.vectors[psi];
    for (h, x) in &flat.children {
        let hm = m.flats[*h].mask;
        if hm >> psi & 1 == 1 || !m.spans(*h, poles) {
            continue;
        }
        let num = dot_ri(&xi, x);
        if num.is_zero() {
            return Err(KronError::Representation("vector lies on an admissible hyperplane".into()));
        }
        let den: i64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
        let a = &num / &Rat::from_int(den);
        if !a.is_positive() {
            continue;
        }
        let next: Vec<Rat> = xi.iter().zip(v).map(|(c, &vi)| if vi == 0 { c.clone() } else { c - &(&a * &Rat::from_int(vi)) }).collect();
        chosen.push(psi);
        rec(m, poles, *h, next, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Coordinates of `xi` in the basis `sigma` and whether all are positive.
pub fn cone_membership(sigma: &[IVec], xi: &[Rat]) -> Option<(bool, Vec<Rat>)> {
    let n = sigma.len();
    let cols: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from_int(sigma[j][i])).collect()).collect();
    let inv = crate::linalg::inverse(&cols)?;
    let c = crate::linalg::mat_vec(&inv, xi);
    Some((c.iter().all(|x| x.is_positive()), c))
}

/// Coordinates of integer vectors in a basis; convenience re-export for callers holding indices.
pub fn coordinates(m: &Matroid, basis: &OSBasis, vs: &[IVec]) -> Vec<Vec<Rat>> {
    let b: Vec<IVec> = basis.indices.iter().map(|&i| m.vectors[i].clone()).collect();
    coords_in_basis(&b, vs).expect("basis is invertible")
}
