//! Flat lattice of a finite list of distinct integer vectors.

use crate::error::{KronError, Result};
use crate::linalg::{dot, int_kernel, IVec};
use std::collections::HashMap;

pub type Mask = u128;

pub const MAX_VECTORS: usize = 128;

#[derive(Clone, Debug)]
pub struct Flat {
    pub mask: Mask,
    pub rank: usize,
    /// Maximal proper subflats, each with a covector vanishing on it but not on this flat.
    pub children: Vec<(usize, IVec)>,
}

#[derive(Clone, Debug)]
pub struct Matroid {
    pub dim: usize,
    pub vectors: Vec<IVec>,
    pub flats: Vec<Flat>,
    /// Index of the flat spanned by all vectors.
    pub top: usize,
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

impl Matroid {
    pub fn new(vectors: Vec<IVec>, dim: usize) -> Result<Matroid> {
        if vectors.len() > MAX_VECTORS {
            return Err(KronError::ResourceCap(format!(
                "{} distinct restricted roots exceed the supported {MAX_VECTORS}",
                vectors.len()
            )));
        }
        let mut flats = vec![Flat { mask: 0, rank: 0, children: vec![] }];
        let mut normals: Vec<Vec<IVec>> = vec![(0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect()];
        let mut bases: Vec<Vec<IVec>> = vec![vec![]];
        let mut index: HashMap<Mask, usize> = HashMap::from([(0, 0)]);
        let mut layer = vec![0usize];
        let all: Mask = if vectors.len() == 128 { !0 } else { (1u128 << vectors.len()) - 1 };
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &h in &layer {
                let hm = flats[h].mask;
                let mut seen: Mask = hm;
                for v in 0..vectors.len() {
                    if seen >> v & 1 == 1 {
                        continue;
                    }
                    let mut basis = bases[h].clone();
                    basis.push(vectors[v].clone());
                    let ker = int_kernel(&basis, dim);
                    let mask = vectors
                        .iter()
                        .enumerate()
                        .filter(|(_, u)| ker.iter().all(|n| dot(n, u) == 0))
                        .fold(0 as Mask, |m, (i, _)| m | 1 << i);
                    seen |= mask;
                    let g = match index.get(&mask) {
                        Some(&g) => g,
                        None => {
                            let g = flats.len();
                            flats.push(Flat { mask, rank: flats[h].rank + 1, children: vec![] });
                            normals.push(ker);
                            bases.push(basis);
                            index.insert(mask, g);
                            next.push(g);
                            g
                        }
                    };
                    // covector vanishing on h but not on g
                    let x = normals[h]
                        .iter()
                        .find(|n| dot(n, &vectors[v]) != 0)
                        .expect("v outside span(h)")
                        .clone();
                    flats[g].children.push((h, x));
                }
            }
            layer = next;
        }
        let top = index[&all];
        Ok(Matroid { dim, vectors, flats, top })
    }

    pub fn rank(&self) -> usize {
        self.flats[self.top].rank
    }

    /// Whether `s` (a subset of flat `f`) spans `f`.
    pub fn spans(&self, f: usize, s: Mask) -> bool {
        let s = s & self.flats[f].mask;
        if self.flats[f].rank == 0 {
            return true;
        }
        self.flats[f].children.iter().all(|(h, _)| s & !self.flats[*h].mask != 0)
    }

    /// Primitive normals of the hyperplanes (rank `r - 1` flats), first nonzero coordinate positive.
    pub fn hyperplane_normals(&self) -> Vec<IVec> {
        let r = self.rank();
        let top = &self.flats[self.top];
        let mut out: Vec<IVec> = top
            .children
            .iter()
            .filter(|(h, _)| self.flats[*h].rank + 1 == r)
            .map(|(h, _)| {
                let rows: Vec<IVec> = bits(self.flats[*h].mask).map(|i| self.vectors[i].clone()).collect();
                let ker = int_kernel(&rows, self.dim);
                // the ambient space may be larger than the span; keep the normal inside span(top)
                let n = pick_normal_in_span(&ker, &self.vectors, top.mask);
                normalize_sign(n)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn pick_normal_in_span(ker: &[IVec], vectors: &[IVec], top: Mask) -> IVec {
    if ker.len() == 1 {
        return ker[0].clone();
    }
    // more than one normal only when the vectors do not span the ambient space
    ker.iter().find(|n| bits(top).any(|i| dot(n, &vectors[i]) != 0)).cloned().unwrap_or_else(|| ker[0].clone())
}

pub fn normalize_sign(mut n: IVec) -> IVec {
    if n.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in n.iter_mut() {
            *x = -*x;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_arrangement() {
        let m = Matroid::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(m.rank(), 2);
        // empty flat, three lines, the whole plane
        assert_eq!(m.flats.len(), 5);
        let n = m.hyperplane_normals();
        assert_eq!(n, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
        assert!(m.spans(m.top, 0b011));
        assert!(!m.spans(m.top, 0b001));
    }

    #[test]
    fn single_vector() {
        let m = Matroid::new(vec![vec![1]], 1).unwrap();
        assert_eq!(m.hyperplane_normals(), vec![vec![1]]);
    }

    #[test]
    fn flats_are_closed() {
        let vs = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
        let m = Matroid::new(vs.clone(), 3).unwrap();
        for f in &m.flats {
            let rows: Vec<IVec> = bits(f.mask).map(|i| vs[i].clone()).collect();
            assert_eq!(crate::linalg::rank_int(&rows), f.rank);
            for (i, v) in vs.iter().enumerate() {
                if f.mask >> i & 1 == 0 {
                    let mut r2 = rows.clone();
                    r2.push(v.clone());
                    assert_eq!(crate::linalg::rank_int(&r2), f.rank + 1);
                }
            }
        }
    }
}
