#![allow(dead_code)]

pub mod sv;

use kronecker::pipeline::DiagramTuple;
use rand::Rng;

/// Partitions of `c` with at most `rows` parts, largest first.
pub fn partitions(c: i64, rows: usize) -> Vec<Vec<i64>> {
    fn rec(left: i64, max: i64, rows: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(c, c, rows, &mut Vec::new(), &mut out);
    out
}

/// Every tuple of diagrams of content `c` with row bounds `dims`.
pub fn tuples(c: i64, dims: &[usize]) -> Vec<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<Vec<i64>>> = vec![vec![]];
    for &n in dims {
        let ps = partitions(c, n);
        out = out.into_iter().flat_map(|t| ps.iter().map(move |p| [t.clone(), vec![p.clone()]].concat())).collect();
    }
    out
}

/// A random partition of `c` with at most `rows` parts.
pub fn random_partition(rng: &mut impl Rng, c: i64, rows: usize) -> Vec<i64> {
    let ps = partitions(c, rows);
    ps[rng.gen_range(0..ps.len())].clone()
}

pub fn tuple(d: Vec<Vec<i64>>) -> DiagramTuple {
    DiagramTuple::new(d).unwrap()
}

/// Row-wise sum of two tuples of diagrams.
pub fn add(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| (0..x.len().max(y.len())).map(|i| x.get(i).unwrap_or(&0) + y.get(i).unwrap_or(&0)).collect())
        .collect()
}

/// Tuples of content at most `c` with a positive Kronecker coefficient.
pub fn positive_generators(dims: &[usize], c: i64) -> Vec<Vec<Vec<i64>>> {
    (1..=c)
        .flat_map(|c| tuples(c, dims))
        .filter(|d| kronecker::oracle::kronecker_bruteforce(d, c).unwrap() > 0)
        .collect()
}

/// A random point of the Kronecker semigroup: a sum of `1..=max_terms` generators.
pub fn in_cone_tuple(rng: &mut impl Rng, gens: &[Vec<Vec<i64>>], max_terms: usize) -> Vec<Vec<i64>> {
    let n = rng.gen_range(1..=max_terms);
    let mut t = gens[rng.gen_range(0..gens.len())].clone();
    for _ in 1..n {
        t = add(&t, &gens[rng.gen_range(0..gens.len())]);
    }
    t
}
