//! Small exact linear algebra over `Rat` and integer vectors.

use crate::exact::Rat;
use num_integer::Integer;

pub type IVec = Vec<i64>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_rat_rows(rows: &[IVec]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_int(rows: &[IVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(&mut to_rat_rows(rows)).len()
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        let inv = a[c][c].inv();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= &t;
            }
        }
    }
    d
}

pub fn det_int(m: &[IVec]) -> i64 {
    det(&to_rat_rows(m)).to_i64().expect("integer determinant")
}

pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix times column vector.
pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rat::zero(), |mut acc, (a, b)| {
            acc.add_mul(a, b);
            acc
        }))
        .collect()
}

/// Coordinates of each column `vectors[k]` in the basis given by the rows `basis`
/// (the basis vectors are columns of the change of basis). Returns `None` if
/// `basis` is singular.
pub fn coords_in_basis(basis: &[IVec], vectors: &[IVec]) -> Option<Vec<Vec<Rat>>> {
    let n = basis.len();
    // columns of B are the basis vectors; B c = v
    let b: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from_int(basis[j][i])).collect()).collect();
    let inv = inverse(&b)?;
    Some(vectors.iter().map(|v| mat_vec(&inv, &v.iter().map(|&x| Rat::from_int(x)).collect::<Vec<_>>())).collect())
}

/// Integer basis of `{x : <row, x> = 0 for every row}` in dimension `n`.
pub fn int_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    let mut m = to_rat_rows(rows);
    if m.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    }
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); n];
            x[f] = Rat::one();
            for (r, &p) in piv.iter().enumerate() {
                x[p] = -&m[r][f];
            }
            primitive(&x)
        })
        .collect()
}

/// Clears denominators and divides by the content.
pub fn primitive(x: &[Rat]) -> IVec {
    let l = x.iter().fold(1i64, |acc, r| acc.lcm(&r.denom().try_into().expect("small denominator")));
    let v: IVec = x.iter().map(|r| (r * &Rat::from_int(l)).to_i64().expect("small entry")).collect();
    let g = v.iter().fold(0i64, |acc, &a| acc.gcd(&a));
    if g > 1 {
        v.into_iter().map(|a| a / g).collect()
    } else {
        v
    }
}

pub fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1u64, |a, b| a.lcm(&b))
}
